//! Optimal positive-part-moment bounds `P_α(η; x)` on `P(η ≤ x)` and the
//! exponential bounds they improve on.

use std::fmt;

use crate::error::{BoundError, Result};
use crate::laws::{
    self, Family, MomentBudget, NormalLowerMoments, PartialMomentSweep, PartialMomentTriple,
    ReferenceLaw, UnitLattice,
};
use crate::special::{ln_gamma, normal_cdf};

/// Thresholds within this relative band below the mean are treated as the mean.
pub const MEAN_GUARD: f64 = 1e-12;
/// Right-endpoint tolerance for the lattice cell `(j_x, j_x + 1]`.
pub const CELL_TOLERANCE: f64 = 1e-9;
const BOUNDARY_BAND: f64 = 1e-9;
const MAX_DOUBLINGS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `x ≤ inf supp(η)`: the bound equals `P(η = x)` and is exact.
    BelowSupport,
    Interior,
    AtOrAboveMean,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::BelowSupport => "below-support",
            Regime::Interior => "interior",
            Regime::AtOrAboveMean => "at-or-above-mean",
        })
    }
}

/// A bound value with its certificate.
///
/// `w_x` is in the original scale. For lattice laws `j_x` indexes the unit
/// lattice, so `w_x / d ∈ (j_x, j_x + 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    pub regime: Regime,
    pub w_x: Option<f64>,
    pub j_x: Option<u64>,
}

impl BoundResult {
    fn exact(value: f64, regime: Regime) -> Self {
        Self { value, regime, w_x: None, j_x: None }
    }
}

fn at_or_above_mean(x: f64, mean: f64) -> bool {
    x >= mean - MEAN_GUARD * mean.abs().max(1.0)
}

/// Root of `a w² - 2b w + c` in `(j, j+1]`, preferring the greater root.
fn cell_root(t: &PartialMomentTriple, j: u64) -> Result<f64> {
    let (lo, hi) = (j as f64, j as f64 + 1.0);
    let inside = |w: f64| w > lo && w <= hi * (1.0 + CELL_TOLERANCE);
    if t.a == 0.0 {
        let w = t.c / (2.0 * t.b);
        if inside(w) {
            return Ok(w.min(hi));
        }
    } else {
        let disc = (t.b * t.b - t.a * t.c).max(0.0);
        let q = t.b + t.b.signum() * disc.sqrt();
        let mut roots = [q / t.a, if q != 0.0 { t.c / q } else { f64::NAN }];
        roots.sort_by(|u, v| v.total_cmp(u));
        if let Some(&w) = roots.iter().find(|w| inside(**w)) {
            return Ok(w.min(hi));
        }
    }
    // rounding pushed both roots out of the cell; fall back to bisection
    let (mut l, mut r) = (lo, hi);
    if t.quadratic(r) < 0.0 {
        return Err(BoundError::NumericFailure(format!(
            "no sign change of the tangency quadratic in ({lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (l + r);
        if t.quadratic(mid) < 0.0 {
            l = mid;
        } else {
            r = mid;
        }
        if r - l <= 1e-15 * r {
            break;
        }
    }
    Ok(r)
}

/// Greater root of the quadratic, used once the triple no longer changes.
fn frozen_root(t: &PartialMomentTriple) -> f64 {
    if t.a <= 0.0 {
        return f64::INFINITY;
    }
    let disc = (t.b * t.b - t.a * t.c).max(0.0);
    (t.b + disc.sqrt()) / t.a
}

/// Lattice root `(j_x, w_x)` for `α = 3`, with `x` and `w_x` in unit-lattice
/// coordinates.
///
/// `j_x` is the first cutoff `j` whose quadratic is nonnegative at `j + 1`;
/// `w_x` is the root of that quadratic in `(j_x, j_x + 1]`.
pub fn solve_wx_lattice(law: &ReferenceLaw, x: f64) -> Result<(u64, f64)> {
    let lattice = law.require_lattice()?;
    let (j, triple) = lattice_root_cell(lattice, x)?;
    Ok((j, cell_root(&triple, j)?))
}

fn lattice_root_cell(lattice: UnitLattice, x: f64) -> Result<(u64, PartialMomentTriple)> {
    let mean = lattice.mean();
    if lattice.is_degenerate() || !(x > 0.0 && !at_or_above_mean(x, mean)) {
        let lower = if lattice.is_degenerate() { mean } else { 0.0 };
        return Err(BoundError::Regime { x, lower, upper: mean });
    }
    let cap = lattice.cap();
    for triple in PartialMomentSweep::new(lattice, x) {
        let j = triple.j;
        if triple.quadratic(j as f64 + 1.0) >= 0.0 {
            return Ok((j, triple));
        }
        if j >= cap {
            let root = frozen_root(&triple);
            if !root.is_finite() || root > 1e15 {
                return Err(BoundError::NumericFailure(format!(
                    "tangency root diverges for x = {x} (mean {mean})"
                )));
            }
            let jump = (root - 1.0).ceil().max(j as f64 + 1.0) as u64;
            let mut frozen = triple;
            frozen.j = jump;
            return Ok((jump, frozen));
        }
    }
    unreachable!("the sweep is infinite")
}

/// Root of `E(w-η)₊^{α-1}(η-x)` for the shifted normal law, by bisection.
pub fn solve_wx_continuous(law: &ReferenceLaw, alpha: u32, x: f64) -> Result<f64> {
    if law.family() != Family::ShiftedNormal {
        return Err(BoundError::UnsupportedFamily(law.family().tag()));
    }
    normal_root(law.mean(), law.budget().s().sqrt(), alpha, x)
}

/// Sign-preserving tangency value for `η = mean + sd·Z`, scaled by `1/φ(t)`
/// in the deep tail so it never underflows.
fn normal_tangency_scaled(mean: f64, sd: f64, alpha: u32, x: f64, w: f64) -> f64 {
    let moments = NormalLowerMoments::at((w - mean) / sd);
    let k = alpha as usize;
    (w - x) * moments.r[k - 1] - sd * moments.r[k]
}

fn normal_root(mean: f64, sd: f64, alpha: u32, x: f64) -> Result<f64> {
    if !(alpha == 2 || alpha == 3) {
        return Err(BoundError::UnsupportedOrder { alpha, family: "normal" });
    }
    if x >= mean {
        return Err(BoundError::Regime { x, lower: f64::NEG_INFINITY, upper: mean });
    }
    let f = |w: f64| normal_tangency_scaled(mean, sd, alpha, x, w);
    let mut lo = x;
    let mut step = sd;
    let mut hi = x + step;
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        lo = hi;
        step *= 2.0;
        hi = x + step;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(BoundError::NumericFailure(format!("could not bracket the root for x = {x}")));
        }
    }
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn normal_bound(mean: f64, sd: f64, alpha: u32, x: f64) -> Result<BoundResult> {
    if !(alpha == 2 || alpha == 3) {
        return Err(BoundError::UnsupportedOrder { alpha, family: "normal" });
    }
    if at_or_above_mean(x, mean) {
        return Ok(BoundResult::exact(1.0, Regime::AtOrAboveMean));
    }
    let w = normal_root(mean, sd, alpha, x)?;
    let moments = NormalLowerMoments::at((w - mean) / sd);
    let a = alpha as f64;
    let lower = moments.r[alpha as usize - 1];
    let upper = moments.r[alpha as usize];
    // M_{α-1}^α / M_α^{α-1}; the φ(t) scale factors leave exactly one power
    let ln_value = a * (lower.ln() + (a - 1.0) * sd.ln()) - (a - 1.0) * (upper.ln() + a * sd.ln())
        + moments.ln_scale;
    Ok(BoundResult {
        value: ln_value.exp().clamp(0.0, 1.0),
        regime: Regime::Interior,
        w_x: Some(w),
        j_x: None,
    })
}

fn lattice_bound(law: &ReferenceLaw, x: f64) -> Result<BoundResult> {
    let lattice = law.require_lattice()?;
    let d = law.budget().step();
    let xu = x / d;
    let mean = lattice.mean();
    if lattice.is_degenerate() {
        // point mass at the mean
        return Ok(if at_or_above_mean(xu, mean) {
            BoundResult::exact(1.0, Regime::AtOrAboveMean)
        } else {
            BoundResult::exact(0.0, Regime::BelowSupport)
        });
    }
    if xu <= 0.0 {
        let value = if xu == 0.0 { lattice.pmf(0) } else { 0.0 };
        return Ok(BoundResult::exact(value, Regime::BelowSupport));
    }
    if at_or_above_mean(xu, mean) {
        return Ok(BoundResult::exact(1.0, Regime::AtOrAboveMean));
    }
    let (j, triple) = lattice_root_cell(lattice, xu)?;
    let w = cell_root(&triple, j)?;
    let (mut m2, mut m3) = (0.0, 0.0);
    for k in 0..=j.min(lattice.cap()) {
        let gap = w - k as f64;
        if gap <= 0.0 {
            break;
        }
        let p = lattice.pmf(k);
        m2 += p * gap * gap;
        m3 += p * gap * gap * gap;
    }
    let value = (3.0 * m2.ln() - 2.0 * m3.ln()).exp();
    Ok(BoundResult {
        value: value.clamp(0.0, 1.0),
        regime: Regime::Interior,
        w_x: Some(w * d),
        j_x: Some(j),
    })
}

/// `P_α(η; x) = inf_{w > x} E(w-η)₊^α / (w-x)^α`.
///
/// Supported pairs: lattice laws with `α = 3`, the normal law with
/// `α ∈ {2, 3}`.
pub fn p_alpha(law: &ReferenceLaw, alpha: u32, x: f64) -> Result<BoundResult> {
    match law.family() {
        Family::ShiftedNormal => normal_bound(law.mean(), law.budget().s().sqrt(), alpha, x),
        fam => {
            if alpha != 3 {
                return Err(BoundError::UnsupportedOrder { alpha, family: fam.tag() });
            }
            lattice_bound(law, x)
        }
    }
}

/// `P_α(shift + scale·η; x)`, `scale > 0`.
///
/// The normal law is transformed directly and solved in its own
/// coordinates; lattice laws reduce to `P_α(η; (x - shift)/scale)`.
pub fn p_alpha_affine(law: &ReferenceLaw, alpha: u32, shift: f64, scale: f64, x: f64) -> Result<BoundResult> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(BoundError::Domain(format!("scale = {scale} must be positive")));
    }
    match law.family() {
        Family::ShiftedNormal => {
            let mean = shift + scale * law.mean();
            let sd = scale * law.budget().s().sqrt();
            normal_bound(mean, sd, alpha, x)
        }
        _ => {
            let mut r = p_alpha(law, alpha, (x - shift) / scale)?;
            r.w_x = r.w_x.map(|w| shift + scale * w);
            Ok(r)
        }
    }
}

/// `r ln r - r + 1` for `r = 1 + ζ ≥ 0`, accurate near both `r = 0` and `r = 1`.
fn poisson_rate(r: f64, zeta: f64) -> f64 {
    if r < 0.5 {
        let rlnr = if r == 0.0 { 0.0 } else { r * r.ln() };
        rlnr - r + 1.0
    } else {
        r * zeta.ln_1p() - zeta
    }
}

/// `u·ln(λ/u)` with the `u → 0` limit.
fn xlog_ratio(u: f64, lambda: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * (lambda / u).ln()
    }
}

/// Exponential bound `P_∞(η; x) = inf_{h<0} e^{-hx} E e^{hη}` in closed form.
pub fn p_infty(law: &ReferenceLaw, x: f64) -> f64 {
    let budget = law.budget();
    let z = budget.z_of(x);
    if z >= 0.0 {
        return 1.0;
    }
    if law.family() == Family::ShiftedNormal {
        return (-0.5 * z * z).exp();
    }
    let lambda = budget.lambda();
    let root = lambda.sqrt();
    let at_boundary = (z + root).abs() < BOUNDARY_BAND;
    if z < -root && !at_boundary {
        return 0.0;
    }
    match law.unit_lattice().expect("lattice family") {
        UnitLattice::Poisson { .. } => {
            if at_boundary {
                return (-lambda).exp();
            }
            let zeta = z / root;
            (-lambda * poisson_rate(1.0 + zeta, zeta)).exp()
        }
        UnitLattice::Binomial { n, q, .. } => {
            let nf = n as f64;
            if q == 0.0 {
                // point mass at the mean
                return 0.0;
            }
            if at_boundary {
                return (nf * q.ln()).exp();
            }
            // u = λ + z√λ is the threshold in unit-lattice coordinates
            let u = lambda + z * root;
            let rest = nf - lambda;
            let ln_value = xlog_ratio(u, lambda) + (nf - u) * (rest / (nf - u)).ln();
            ln_value.exp().min(1.0)
        }
    }
}

/// Classical exponential bounds on `P(S ≤ x)` for `x ∈ (0, m]`: the Poisson
/// form `exp{-(m²/s)(1 + (x/m)ln(x/(em)))}` and the Gaussian form
/// `exp{-(x-m)²/(2s)}`. The first never exceeds the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialBounds {
    pub poisson_form: f64,
    pub gaussian_form: f64,
}

pub fn exponential_tail_bounds(x: f64, budget: &MomentBudget) -> Result<ExponentialBounds> {
    let (m, s) = (budget.m(), budget.s());
    if !(x > 0.0 && x <= m) {
        return Err(BoundError::Domain(format!("x = {x} must lie in (0, m] = (0, {m}]")));
    }
    // 1 + r ln(r/e) = r ln r - r + 1
    let poisson_form = (-(m * m / s) * poisson_rate(x / m, (x - m) / m)).exp();
    let gaussian_form = (-(x - m) * (x - m) / (2.0 * s)).exp();
    Ok(ExponentialBounds { poisson_form, gaussian_form })
}

/// `Γ(α+1)(e/α)^α`, the factor by which `P_α` can exceed a log-concave tail.
pub fn log_concave_factor(alpha: f64) -> f64 {
    assert!(alpha > 0.0, "alpha must be positive");
    (ln_gamma(alpha + 1.0) + alpha * (1.0 - alpha.ln())).exp()
}

/// `W(z) = min(1, 1/(1+z²), c·Φ(z))` with `c = e²/2`: the Cantelli bound
/// combined with the log-concave comparison for `P_2` of the normal law.
pub fn cantelli_combined(z: f64) -> f64 {
    let normal_term = log_concave_factor(2.0) * normal_cdf(z);
    1.0f64.min(1.0 / (1.0 + z * z)).min(normal_term)
}

/// `E(w - η)₊^α / (w - x)^α`, the quantity whose infimum over `w > x` is `P_α`.
pub fn markov_ratio(law: &ReferenceLaw, alpha: u32, x: f64, w: f64) -> Result<f64> {
    if w <= x {
        return Err(BoundError::Domain(format!("w = {w} must exceed x = {x}")));
    }
    Ok(laws::positive_part_moment(law, w, alpha)? / (w - x).powi(alpha as i32))
}
