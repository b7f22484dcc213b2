//! Independent checks for the bound engine: a brute-force infimum over a
//! dense `w` grid, quadrature for the normal moments, and Monte-Carlo sums
//! of nonnegative summands satisfying a moment budget.
//!
//! Nothing here calls the tangency solvers or the closed-form normal
//! moments of [`crate::laws`].

pub mod quadrature;
pub mod sampling;

use rand::Rng;

use crate::error::{BoundError, Result};
use crate::laws::{two_point_law, ReferenceLaw};

pub use sampling::{empirical_tail, extremal_law, sample_sum, three_atom_law, DiscreteLaw, MixingMode, SumSpec};

/// `f_{w,α}(y) = (w - y)₊^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFunction {
    pub w: f64,
    pub alpha: u32,
}

impl MomentFunction {
    pub fn new(w: f64, alpha: u32) -> Self {
        Self { w, alpha }
    }

    pub fn eval(&self, y: f64) -> f64 {
        let gap = self.w - y;
        if gap <= 0.0 {
            0.0
        } else {
            gap.powi(self.alpha as i32)
        }
    }
}

/// `E f(Y^{m,s})` for the two-point law on `{0, s/m}`.
pub fn extremal_moment(m: f64, s: f64, f: MomentFunction) -> Result<f64> {
    let y = two_point_law(m, s)?;
    Ok(y.p_low() * f.eval(0.0) + y.p_high() * f.eval(y.atom_high()))
}

/// Random three-atom law with mean in `[m, √s]` and second moment in
/// `[mean², s]`, i.e. feasible for the one-summand budget `(m, s)`.
pub fn random_feasible_law<R: Rng + ?Sized>(m: f64, s: f64, rng: &mut R) -> Result<DiscreteLaw> {
    two_point_law(m, s)?;
    let mean = rng.random_range(m..=s.sqrt());
    let second = rng.random_range(mean * mean..=s);
    three_atom_law(mean, second, rng)
}

/// Evaluates `E(w - η)₊^α` by direct summation or quadrature.
enum MomentEvaluator {
    Lattice { step: f64, pmf: Vec<f64> },
    Normal { mean: f64, sd: f64 },
}

impl MomentEvaluator {
    fn new(law: &ReferenceLaw) -> Self {
        match law.unit_lattice() {
            Some(lat) => Self::Lattice {
                step: law.budget().step(),
                pmf: (0..=lat.cap()).map(|k| lat.pmf(k)).collect(),
            },
            None => Self::Normal { mean: law.mean(), sd: law.budget().s().sqrt() },
        }
    }

    fn moment(&self, w: f64, alpha: u32) -> f64 {
        match self {
            Self::Lattice { step, pmf } => {
                let wu = w / step;
                let sum: f64 = pmf
                    .iter()
                    .enumerate()
                    .take_while(|(k, _)| (*k as f64) < wu)
                    .map(|(k, p)| p * (wu - k as f64).powi(alpha as i32))
                    .sum();
                sum * step.powi(alpha as i32)
            }
            Self::Normal { mean, sd } => quadrature::normal_moment_gauss(*mean, *sd, w, alpha),
        }
    }
}

/// Candidate `w` values: 70% geometric in the distance above `x` up to
/// `w_max`, 30% linear over `(x, x + 10·span]` where `span` is the gap to the
/// mean (or the standard deviation when `x` is at or above the mean).
pub fn w_grid(law: &ReferenceLaw, x: f64, w_max: f64, steps: usize) -> Vec<f64> {
    let span = (law.mean() - x).max(law.variance().sqrt());
    let geometric = steps * 7 / 10;
    let linear = steps - geometric;
    let (lo, hi) = (1e-4 * span, w_max - x);
    let ratio = (hi / lo).ln() / (geometric.max(2) - 1) as f64;
    let mut grid: Vec<f64> = (0..geometric).map(|i| x + lo * (ratio * i as f64).exp()).collect();
    let top = (x + 10.0 * span).min(w_max);
    grid.extend((1..=linear).map(|i| x + (top - x) * i as f64 / linear as f64));
    grid
}

/// Default upper end of the `w` search: past the tangency point for any
/// threshold below the guard band around the mean.
pub fn default_w_max(law: &ReferenceLaw, x: f64) -> f64 {
    let var = law.variance();
    let gap = (law.mean() - x).max(var.sqrt() * 1e-3);
    x + 10.0 * gap + 50.0 * var / gap
}

/// `min_w E(w - η)₊^α / (w - x)^α` over [`w_grid`].
pub fn grid_infimum(law: &ReferenceLaw, alpha: u32, x: f64, w_max: f64, steps: usize) -> Result<f64> {
    if steps < 1000 {
        return Err(BoundError::Domain(format!("steps = {steps} must be at least 1000")));
    }
    if !(w_max > x) {
        return Err(BoundError::Domain(format!("w_max = {w_max} must exceed x = {x}")));
    }
    let eval = MomentEvaluator::new(law);
    let best = w_grid(law, x, w_max, steps)
        .into_iter()
        .filter(|&w| w > x)
        .map(|w| eval.moment(w, alpha) / (w - x).powi(alpha as i32))
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// Grid point attaining the minimum in [`grid_infimum`].
pub fn grid_argmin(law: &ReferenceLaw, alpha: u32, x: f64, w_max: f64, steps: usize) -> Result<(f64, f64)> {
    if !(w_max > x) {
        return Err(BoundError::Domain(format!("w_max = {w_max} must exceed x = {x}")));
    }
    let eval = MomentEvaluator::new(law);
    Ok(w_grid(law, x, w_max, steps)
        .into_iter()
        .filter(|&w| w > x)
        .map(|w| (w, eval.moment(w, alpha) / (w - x).powi(alpha as i32)))
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extremal_moment_examples() {
        let f = MomentFunction::new(-0.5, 2);
        assert_eq!(extremal_moment(1.0, 2.0, f).unwrap(), 0.0);
        let f = MomentFunction::new(1.0, 2);
        assert_eq!(extremal_moment(1.0, 2.0, f).unwrap(), 0.5);
        assert!(extremal_moment(2.0, 3.0, f).is_err());
    }

    #[test]
    fn extremal_law_attains_the_closed_form() {
        let law = sampling::extremal_law(0.7, 1.3).unwrap();
        for w in [0.1, 0.9, 1.5, 2.2] {
            let f = MomentFunction::new(w, 2);
            let direct = law.expect(|y| f.eval(y));
            assert!((direct - extremal_moment(0.7, 1.3, f).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn feasible_laws_respect_the_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let law = random_feasible_law(1.0, 3.0, &mut rng).unwrap();
            assert!(law.mean() >= 1.0 - 1e-12);
            assert!(law.second_moment() <= 3.0 + 1e-12);
        }
    }

    #[test]
    fn grid_minimizer_sits_in_the_tangency_cell() {
        let law = ReferenceLaw::poisson(1.0, 1.0).unwrap();
        let (w, value) = grid_argmin(&law, 3, 0.5, 20.0, 20_000).unwrap();
        // mpmath: w_x = 4.0290216, P_3 = 0.8165476703
        assert!((w - 4.029_021_6).abs() < 2e-3, "w = {w}");
        assert!((value / 0.816_547_670_287_390_5 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ratio_tends_to_one_above_the_mean() {
        let law = ReferenceLaw::poisson(3.0, 3.0).unwrap();
        let eval = MomentEvaluator::new(&law);
        let x = 4.0;
        let r = |w: f64| eval.moment(w, 3) / (w - x).powi(3);
        assert!(r(1e3) > 1.0 && r(1e4) > 1.0);
        assert!(r(1e4) < r(1e3));
        assert!((r(1e5) - 1.0).abs() < 1e-3);
        let inf = grid_infimum(&law, 3, x, 1e6, 5000).unwrap();
        assert!((1.0..1.0 + 1e-4).contains(&inf));
    }
}
