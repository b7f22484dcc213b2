//! Numerical integration of normal positive-part moments, independent of the
//! closed forms in `laws`.
//!
//! Both rules integrate `E(t - Z)₊^k = ∫₀^∞ v^k φ(t - v) dv` over the
//! distance `v` below the kink, on panels that start at the decay scale
//! `1/(1 + |t|)` and widen geometrically.

use std::sync::OnceLock;

use crate::special::normal_pdf;

const GL_ORDER: usize = 16;
const TAIL_SPAN: f64 = 14.0;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, via Newton iteration on
/// the Legendre recurrence.
fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Panel boundaries in `v` for the standardized kink `t`.
fn panels(t: f64) -> Vec<f64> {
    let end = t.max(0.0) + TAIL_SPAN;
    let mut width = 0.25 / (1.0 + (-t).max(0.0));
    let mut edges = vec![0.0];
    let mut v = 0.0;
    while v < end {
        v = (v + width).min(end);
        edges.push(v);
        width = (2.0 * width).min(1.0);
    }
    edges
}

fn integrand(t: f64, k: u32, v: f64) -> f64 {
    v.powi(k as i32) * normal_pdf(t - v)
}

/// `E(t - Z)₊^k` by composite 16-point Gauss–Legendre.
pub fn lower_moment_gauss(t: f64, k: u32) -> f64 {
    let rule = gauss_legendre();
    panels(t)
        .windows(2)
        .map(|e| {
            let (half, mid) = (0.5 * (e[1] - e[0]), 0.5 * (e[1] + e[0]));
            half * rule.iter().map(|&(x, wt)| wt * integrand(t, k, mid + half * x)).sum::<f64>()
        })
        .sum()
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, whole: f64, m: f64, fm: f64, tol: f64, depth: u32) -> f64 {
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction and absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, whole, m, fm, tol, max_depth)
}

/// `E(t - Z)₊^k` by adaptive Simpson at relative tolerance `rel_tol`.
pub fn lower_moment_simpson(t: f64, k: u32, rel_tol: f64) -> f64 {
    // the Gauss rule only sets the scale of the absolute tolerance
    let scale = lower_moment_gauss(t, k);
    let edges = panels(t);
    let share = rel_tol * scale / (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|e| adaptive_simpson(|v| integrand(t, k, v), e[0], e[1], share, 40))
        .sum()
}

/// `E(w - η)₊^α` for `η = mean + sd·Z` by adaptive Simpson.
pub fn normal_moment_quadrature(mean: f64, sd: f64, w: f64, alpha: u32) -> f64 {
    sd.powi(alpha as i32) * lower_moment_simpson((w - mean) / sd, alpha, 1e-13)
}

/// Same as [`normal_moment_quadrature`] with the fixed Gauss rule; cheap
/// enough for dense grids.
pub fn normal_moment_gauss(mean: f64, sd: f64, w: f64, alpha: u32) -> f64 {
    sd.powi(alpha as i32) * lower_moment_gauss((w - mean) / sd, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let rule = gauss_legendre();
        let total: f64 = rule.iter().map(|p| p.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x30: f64 = rule.iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert!((x30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_point_values() {
        // E Z₊ = 1/√(2π), E Z₊² = 1/2, E Z₊³ = 2/√(2π)
        let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for (k, expected) in [(0, 0.5), (1, c), (2, 0.5), (3, 2.0 * c)] {
            assert!((lower_moment_gauss(0.0, k) / expected - 1.0).abs() < 1e-13, "k = {k}");
            assert!((lower_moment_simpson(0.0, k, 1e-13) / expected - 1.0).abs() < 1e-11, "k = {k}");
        }
    }

    #[test]
    fn large_t_is_the_full_moment() {
        // E(8 - Z)² = 64 + 1 up to the negligible upper tail
        assert!((lower_moment_gauss(8.0, 2) / 65.0 - 1.0).abs() < 1e-13);
    }
}
