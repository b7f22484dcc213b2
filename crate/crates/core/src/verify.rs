//! Randomized invariant checks run by `tailbound verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{exponential_tail_bounds, p_alpha, p_alpha_affine, p_infty};
use crate::error::Result;
use crate::laws::{self, Count, MomentBudget, ReferenceLaw};
use crate::oracle::{self, quadrature, MixingMode, MomentFunction, SumSpec};

/// Settings for one verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// `w`-grid size for the brute-force infimum.
    pub grid: usize,
    /// Relative tolerance for the brute-force comparison.
    pub tol: f64,
    /// Monte-Carlo sample size per sum.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 7, grid: 2000, tol: 1e-4, samples: 20_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Largest violation margin, or the largest slack when nothing failed.
    pub worst: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} checked={} violations={} worst={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.violations,
            self.worst
        )
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, violations: 0, worst: f64::NEG_INFINITY }
    }

    /// Records a check whose `excess` must not be positive.
    fn record(&mut self, excess: f64) {
        self.checked += 1;
        if !(excess <= 0.0) {
            self.violations += 1;
        }
        if excess.is_nan() || excess > self.worst {
            self.worst = excess;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name, checked: self.checked, violations: self.violations, worst: self.worst }
    }
}

/// A random point `(λ, n, z)` with budget `m²/s = λ`, `n ∈ [⌈λ⌉, 10⌈λ⌉]`
/// and `z ∈ (-√λ, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct ChainPoint {
    pub m: f64,
    pub s: f64,
    pub n: u64,
    pub z: f64,
}

impl ChainPoint {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_lambda: f64) -> Self {
        let lambda: f64 = rng.random_range(1.0..max_lambda);
        let m: f64 = rng.random_range(0.5..20.0);
        let s = m * m / lambda;
        let base = lambda.ceil() as u64;
        let n = rng.random_range(base..=10 * base);
        let root = lambda.sqrt();
        let z = -root * rng.random_range(1e-6..1.0 - 1e-6);
        Self { m, s, n, z }
    }

    pub fn x(&self) -> f64 {
        self.m + self.z * self.s.sqrt()
    }

    pub fn laws(&self) -> Result<(ReferenceLaw, ReferenceLaw, ReferenceLaw)> {
        Ok((
            ReferenceLaw::binomial(self.m, self.s, self.n)?,
            ReferenceLaw::poisson(self.m, self.s)?,
            ReferenceLaw::normal(self.m, self.s)?,
        ))
    }
}

fn check_exactness() -> Result<CheckOutcome> {
    let mut t = Tally::new("exactness-at-support-bottom");
    let bin = ReferenceLaw::binomial(10.0, 10.0, 11)?;
    t.record((p_alpha(&bin, 3, 0.0)?.value / 11f64.powi(-11) - 1.0).abs() - 1e-14);
    let poi = ReferenceLaw::poisson(10.0, 10.0)?;
    t.record((p_alpha(&poi, 3, 0.0)?.value / (-10.0f64).exp() - 1.0).abs() - 1e-14);
    for lambda in [1.5, 4.0, 17.0] {
        let law = ReferenceLaw::binomial(lambda, lambda, 25)?;
        let mass = laws::lattice_pmf(&law, 0)?;
        t.record((p_alpha(&law, 3, 0.0)?.value - mass).abs());
    }
    Ok(t.finish())
}

fn random_law<R: Rng + ?Sized>(rng: &mut R, which: usize) -> Result<ReferenceLaw> {
    let lambda: f64 = rng.random_range(0.5..30.0);
    let m: f64 = rng.random_range(0.5..10.0);
    let s = m * m / lambda;
    match which % 3 {
        0 => {
            let n = rng.random_range(lambda.ceil() as u64..=lambda.ceil() as u64 * 5 + 1);
            ReferenceLaw::binomial(m, s, n)
        }
        1 => ReferenceLaw::poisson(m, s),
        _ => ReferenceLaw::normal(m, s),
    }
}

fn random_interior_x<R: Rng + ?Sized>(rng: &mut R, law: &ReferenceLaw) -> f64 {
    let sd = law.variance().sqrt();
    let lower = law.support_infimum().max(law.mean() - 6.0 * sd);
    lower + (law.mean() - lower) * rng.random_range(0.02..0.98)
}

fn check_oracle(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(CheckOutcome, CheckOutcome)> {
    let mut agree = Tally::new("oracle-equivalence");
    let mut above = Tally::new("grid-never-below-bound");
    for i in 0..12 {
        let law = random_law(rng, i)?;
        let x = random_interior_x(rng, &law);
        let alpha = if law.family().is_lattice() { 3 } else { 2 + (i as u32 / 3) % 2 };
        let bound = p_alpha(&law, alpha, x)?.value;
        let grid = oracle::grid_infimum(&law, alpha, x, oracle::default_w_max(&law, x), cfg.grid)?;
        agree.record((grid / bound - 1.0).abs() - cfg.tol);
        above.record(bound - 1e-9 - grid);
    }
    Ok((agree.finish(), above.finish()))
}

fn check_chains(rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let mut family = Tally::new("family-chain");
    let mut alpha = Tally::new("alpha-chain");
    let mut expo = Tally::new("exponential-chain");
    let mut classical = Tally::new("classical-exponential-identity");
    for _ in 0..100 {
        let pt = ChainPoint::random(rng, 50.0);
        let x = pt.x();
        let (bin, poi, nor) = pt.laws()?;
        let b3 = p_alpha(&bin, 3, x)?.value;
        let p3 = p_alpha(&poi, 3, x)?.value;
        let n2 = p_alpha(&nor, 2, x)?.value;
        let n3 = p_alpha(&nor, 3, x)?.value;
        family.record((b3 - p3 - 1e-9).max(p3 - n3 - 1e-9));
        let (bi, pi, ni) = (p_infty(&bin, x), p_infty(&poi, x), p_infty(&nor, x));
        alpha.record(
            [b3 - bi, p3 - pi, n2 - n3, n3 - ni]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max)
                - 1e-9,
        );
        expo.record((bi - pi).max(pi - ni) - 1e-12);
        if x > 0.0 {
            let forms = exponential_tail_bounds(x, poi.budget())?;
            classical.record((forms.poisson_form / pi - 1.0).abs() - 1e-12);
        }
    }
    Ok(vec![family.finish(), alpha.finish(), expo.finish(), classical.finish()])
}

fn check_scale(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut t = Tally::new("scale-relation");
    for i in 0..30 {
        let law = random_law(rng, i)?;
        let x = random_interior_x(rng, &law);
        let shift = rng.random_range(-50.0..50.0);
        let scale = rng.random_range(0.1..10.0);
        let alpha = if law.family().is_lattice() { 3 } else { 2 };
        let direct = p_alpha_affine(&law, alpha, shift, scale, shift + scale * x)?.value;
        let reduced = p_alpha(&law, alpha, x)?.value;
        // bisection stops at 1e-12 relative width, so the normal case is looser
        let tol = if law.family().is_lattice() { 1e-12 } else { 1e-9 };
        t.record((direct / reduced - 1.0).abs() - tol);
    }
    Ok(t.finish())
}

fn check_sign_structure(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut t = Tally::new("tangency-sign-structure");
    for i in 0..60 {
        let law = random_law(rng, i)?;
        let x = random_interior_x(rng, &law);
        let alpha = if law.family().is_lattice() { 3 } else { 2 + (i as u32 / 3) % 2 };
        let w = p_alpha(&law, alpha, x)?.w_x.expect("interior point");
        let delta = 1e-6 * w.abs().max(1.0);
        let below = laws::ee(&law, alpha, x, w - delta)?;
        let above = laws::ee(&law, alpha, x, w + delta)?;
        t.record(if below < 0.0 && above > 0.0 { -1.0 } else { 1.0 });
    }
    Ok(t.finish())
}

fn check_monte_carlo(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut t = Tally::new("monte-carlo-domination");
    for i in 0..4 {
        let n = rng.random_range(2..30usize);
        let budgets: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let m: f64 = rng.random_range(0.1..2.0);
                (m, m * m * rng.random_range(1.0..4.0))
            })
            .collect();
        let mode = if i % 2 == 0 { MixingMode::ExtremalTwoPoint } else { MixingMode::RandomMixture };
        let spec = SumSpec::new(budgets, mode)?;
        let law = ReferenceLaw::binomial(spec.total_m(), spec.total_s(), n as u64)?;
        let sample = oracle::sample_sum(&spec, cfg.samples, cfg.seed.wrapping_add(i))?;
        let lambda = law.budget().lambda();
        for z in crate::report::open_z_grid(lambda, 5) {
            let x = law.budget().x_of(z);
            let (est, se) = oracle::empirical_tail(&sample, x);
            t.record(est - p_alpha(&law, 3, x)?.value - 3.0 * se);
        }
    }
    Ok(t.finish())
}

fn check_one_summand(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut t = Tally::new("one-summand-domination");
    for _ in 0..500 {
        let m: f64 = rng.random_range(0.1..3.0);
        let s = m * m * rng.random_range(1.0..5.0);
        let w = rng.random_range(-0.5..3.0 * s / m);
        let f = MomentFunction::new(w, 2);
        let x = oracle::random_feasible_law(m, s, rng)?;
        t.record(x.expect(|y| f.eval(y)) - oracle::extremal_moment(m, s, f)? - 1e-12);
    }
    Ok(t.finish())
}

fn check_normal_moments() -> Result<CheckOutcome> {
    let mut t = Tally::new("normal-moments-vs-quadrature");
    let budget = MomentBudget::new(1.3, 2.1, Count::Infinite)?;
    let sd = budget.s().sqrt();
    for i in 0..=32 {
        let tt = -8.0 + 0.5 * i as f64;
        let w = budget.m() + tt * sd;
        for alpha in 1..=3 {
            let closed = laws::normal_positive_part_moment(&budget, w, alpha)?;
            let quad = quadrature::normal_moment_quadrature(budget.m(), sd, w, alpha);
            t.record((closed / quad - 1.0).abs() - 1e-9);
        }
    }
    Ok(t.finish())
}

/// Runs every check in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = vec![check_exactness()?];
    let (agree, above) = check_oracle(cfg, &mut rng)?;
    out.push(agree);
    out.push(above);
    out.extend(check_chains(&mut rng)?);
    out.push(check_scale(&mut rng)?);
    out.push(check_sign_structure(&mut rng)?);
    out.push(check_monte_carlo(cfg, &mut rng)?);
    out.push(check_one_summand(&mut rng)?);
    out.push(check_normal_moments()?);
    Ok(out)
}
