//! Special functions used by the reference laws.
//!
//! The normal distribution functions are built on `erfc`, so the left tail
//! keeps full relative precision down to the underflow threshold. Lattice
//! probabilities use the saddle-point form (Stirling error plus the deviance
//! term `bd0`) which stays accurate for counts and rates up to `1e6` and
//! beyond, where a plain `lgamma` difference would lose about nine digits.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `ln(sqrt(2π))`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density.
pub fn normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function `Φ(t)`.
pub fn normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t * FRAC_1_SQRT_2)
}

/// Mills ratio `Φ(-y) / φ(y)` for `y ≥ 0`.
pub fn mills_ratio(y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y < 30.0 {
        return normal_cdf(-y) / normal_pdf(y);
    }
    // Laplace continued fraction 1/(y+ 1/(y+ 2/(y+ 3/(y+ ...)))), modified Lentz.
    let tiny = 1e-300;
    let mut f = y;
    let mut c = y;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64;
        d = y + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = y + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Stirling-series error `ln Γ(n+1) - (n+½)ln n + n - ln√(2π)` for `n > 0`.
pub fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        let ln_fact = if n.fract() == 0.0 {
            // exact factorial up to 15! keeps the cancellation below 1e-14
            (1..=n as u64).map(|k| k as f64).product::<f64>().ln()
        } else {
            ln_gamma(n + 1.0)
        };
        return ln_fact - (n + 0.5) * n.ln() + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        return (S0 - S1 / nn) / n;
    }
    if n > 80.0 {
        return (S0 - (S1 - S2 / nn) / nn) / n;
    }
    if n > 35.0 {
        return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
    }
    (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
}

/// Deviance term `x ln(x/np) + np - x`, evaluated without cancellation.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Poisson probability mass at the integer `k`.
pub fn poisson_pmf(k: u64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k == 0 {
        return (-lambda).exp();
    }
    let x = k as f64;
    if lambda < x * f64::MIN_POSITIVE {
        return (-lambda + x * lambda.ln() - ln_gamma(x + 1.0)).exp();
    }
    (-stirlerr(x) - bd0(x, lambda)).exp() / (2.0 * PI * x).sqrt()
}

/// Binomial probability mass at `k` for `n` trials; `q` is supplied
/// separately so callers can pass `1 - p` without rounding loss.
pub fn binomial_pmf(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
        return lc.exp();
    }
    if k == n {
        let lc = if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
        return lc.exp();
    }
    let x = k as f64;
    let lc = stirlerr(nf) - stirlerr(x) - stirlerr(nf - x) - bd0(x, nf * p) - bd0(nf - x, nf * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        // Φ(-1), Φ(-3) and Φ(-10) from high-precision tables
        assert!((normal_cdf(-1.0) / 0.158_655_253_931_457_05 - 1.0).abs() < 1e-14);
        assert!((normal_cdf(-3.0) / 1.349_898_031_630_094_5e-3 - 1.0).abs() < 1e-14);
        assert!((normal_cdf(-10.0) / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn mills_ratio_branches_agree() {
        // the continued fraction and the erfc quotient overlap at 25..30
        for &y in &[25.0, 27.5, 29.9] {
            let direct = normal_cdf(-y) / normal_pdf(y);
            let tiny = 1e-300;
            let mut f = y;
            let (mut c, mut d) = (y, 0.0);
            for k in 1..500 {
                let a = k as f64;
                d = 1.0 / (y + a * d).max(tiny);
                c = (y + a / c).max(tiny);
                f *= c * d;
            }
            assert!((direct * f - 1.0).abs() < 1e-12, "y = {y}");
        }
        let y: f64 = 40.0;
        let asym = 1.0 / y - 1.0 / y.powi(3) + 3.0 / y.powi(5) - 15.0 / y.powi(7);
        assert!((mills_ratio(y) / asym - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stirlerr_matches_lgamma_in_series_range() {
        for n in [16.0, 20.0, 40.0, 100.0, 600.0] {
            let direct = ln_gamma(n + 1.0) - (n + 0.5) * f64::ln(n) + n - LN_SQRT_2PI;
            assert!((stirlerr(n) - direct).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn poisson_pmf_small_values() {
        let e1 = (-1.0f64).exp();
        assert!((poisson_pmf(0, 1.0) - e1).abs() < 1e-16);
        assert!((poisson_pmf(1, 1.0) - e1).abs() < 1e-16);
        assert!((poisson_pmf(3, 2.0) / (8.0 / 6.0 * (-2.0f64).exp()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn binomial_pmf_small_values() {
        assert!((binomial_pmf(1, 2, 0.5, 0.5) - 0.5).abs() < 1e-15);
        assert!((binomial_pmf(3, 10, 0.3, 0.7) - 120.0 * 0.027 * 0.7f64.powi(7)).abs() < 1e-15);
        assert_eq!(binomial_pmf(11, 10, 0.3, 0.7), 0.0);
    }

    #[test]
    fn large_parameter_normalization() {
        let lambda: f64 = 1e6;
        let sd = lambda.sqrt();
        let lo = (lambda - 14.0 * sd) as u64;
        let hi = (lambda + 14.0 * sd) as u64;
        let total: f64 = (lo..=hi).map(|k| poisson_pmf(k, lambda)).sum();
        assert!((total - 1.0).abs() < 1e-12, "total = {total}");

        let n = 1_000_000u64;
        let (p, q) = (0.3, 0.7);
        let c = n as f64 * p;
        let sd = (c * q).sqrt();
        let total: f64 = ((c - 14.0 * sd) as u64..=(c + 14.0 * sd) as u64)
            .map(|k| binomial_pmf(k, n, p, q))
            .sum();
        assert!((total - 1.0).abs() < 1e-12, "total = {total}");
    }
}
