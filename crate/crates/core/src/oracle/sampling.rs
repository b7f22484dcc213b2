//! Monte-Carlo sums of independent nonnegative summands under a moment budget.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{BoundError, Result};
use crate::laws::two_point_law;

/// Samples drawn per independent random stream.
const CHUNK: usize = 8192;
/// Stream reserved for constructing random summand laws.
const CONSTRUCTION_STREAM: u64 = u64::MAX;

/// Finite law given by `(value, probability)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    atoms: Vec<(f64, f64)>,
    cumulative: Vec<f64>,
}

impl DiscreteLaw {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.iter().any(|&(v, p)| !(v >= 0.0 && v.is_finite() && p >= 0.0)) {
            return Err(BoundError::ConstraintViolation(
                "atoms must be nonnegative values with nonnegative probabilities".into(),
            ));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(BoundError::ConstraintViolation(format!("probabilities sum to {total}")));
        }
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.1;
                acc
            })
            .collect();
        Ok(Self { atoms, cumulative })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(v, p)| p * f(v)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|v| v)
    }

    pub fn second_moment(&self) -> f64 {
        self.expect(|v| v * v)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random::<f64>() * self.cumulative.last().copied().unwrap_or(1.0);
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.atoms[i.min(self.atoms.len() - 1)].0
    }
}

/// The two-point law on `{0, s/m}`.
pub fn extremal_law(m: f64, s: f64) -> Result<DiscreteLaw> {
    let y = two_point_law(m, s)?;
    if y.is_degenerate() {
        return DiscreteLaw::new(vec![(y.atom_high(), 1.0)]);
    }
    DiscreteLaw::new(vec![(0.0, y.p_low()), (y.atom_high(), y.p_high())])
}

/// Three-atom law on `{0, u, v}` with mean exactly `m` and second moment
/// exactly `s`, with random inner atoms. Falls back to the two-point law
/// when no feasible draw is found.
pub fn three_atom_law<R: Rng + ?Sized>(m: f64, s: f64, rng: &mut R) -> Result<DiscreteLaw> {
    two_point_law(m, s)?;
    let pivot = s / m;
    if s <= m * m * (1.0 + 1e-12) {
        return DiscreteLaw::new(vec![(m, 1.0)]);
    }
    for _ in 0..1000 {
        // u ≤ s/m ≤ v keeps both weights nonnegative
        let u = pivot * rng.random_range(0.05..1.0);
        let v = pivot * (1.0 + rng.random_range(0.0..4.0));
        if v - u < 1e-9 * pivot {
            continue;
        }
        let pu = (m * v - s) / (u * (v - u));
        let pv = (s - m * u) / (v * (v - u));
        let p0 = 1.0 - pu - pv;
        if pu >= 0.0 && pv >= 0.0 && p0 >= 0.0 {
            return DiscreteLaw::new(vec![(0.0, p0), (u, pu), (v, pv)]);
        }
    }
    extremal_law(m, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingMode {
    /// Each summand is the two-point law of its own budget.
    ExtremalTwoPoint,
    /// Each summand is a random three-atom law with mean `m_i` and a second
    /// moment drawn uniformly from `[m_i², s_i]`.
    RandomMixture,
}

/// Independent summands with per-summand budgets `(m_i, s_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSpec {
    budgets: Vec<(f64, f64)>,
    mode: MixingMode,
}

impl SumSpec {
    pub fn new(budgets: Vec<(f64, f64)>, mode: MixingMode) -> Result<Self> {
        if budgets.is_empty() {
            return Err(BoundError::ConstraintViolation("a sum needs at least one summand".into()));
        }
        for &(m, s) in &budgets {
            two_point_law(m, s)?;
        }
        Ok(Self { budgets, mode })
    }

    /// `n` summands with equal budgets `(m/n, s/n)`.
    pub fn equal_split(m: f64, s: f64, n: usize, mode: MixingMode) -> Result<Self> {
        let nf = n as f64;
        Self::new(vec![(m / nf, s / nf); n], mode)
    }

    pub fn budgets(&self) -> &[(f64, f64)] {
        &self.budgets
    }

    pub fn mode(&self) -> MixingMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.budgets.is_empty()
    }

    pub fn total_m(&self) -> f64 {
        self.budgets.iter().map(|b| b.0).sum()
    }

    pub fn total_s(&self) -> f64 {
        self.budgets.iter().map(|b| b.1).sum()
    }

    /// Concrete summand laws; random mixtures are drawn from `seed`.
    pub fn summand_laws(&self, seed: u64) -> Result<Vec<DiscreteLaw>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(CONSTRUCTION_STREAM);
        self.budgets
            .iter()
            .map(|&(m, s)| match self.mode {
                MixingMode::ExtremalTwoPoint => extremal_law(m, s),
                MixingMode::RandomMixture => {
                    let target = if s > m * m { rng.random_range(m * m..=s) } else { s };
                    three_atom_law(m, target, &mut rng)
                }
            })
            .collect()
    }
}

/// `count` independent realizations of the sum; deterministic in `seed` and
/// independent of the thread count.
pub fn sample_sum(spec: &SumSpec, count: usize, seed: u64) -> Result<Vec<f64>> {
    let laws = spec.summand_laws(seed)?;
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| laws.iter().map(|l| l.sample(&mut rng)).sum()).collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Fraction of the sample at or below `x` and its binomial standard error.
pub fn empirical_tail(sample: &[f64], x: f64) -> (f64, f64) {
    if sample.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = sample.len() as f64;
    let hits = sample.iter().filter(|&&v| v <= x).count() as f64;
    let p = hits / n;
    (p, (p * (1.0 - p) / n).sqrt())
}
