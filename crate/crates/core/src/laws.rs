//! Reference laws: the two-point extremal law, the scaled binomial and
//! Poisson lattice laws, and the shifted normal law.
//!
//! Lattice computations run in unit-lattice coordinates: a scaled law
//! `d·K` with `d = s/m` is handled through the integer variable `K`, and
//! thresholds are divided by `d` once at the boundary.

use std::fmt;

use crate::error::{BoundError, Result};
use crate::special::{self, normal_cdf, normal_pdf};

/// Number of summands: a finite count or the Poisson limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Count::Infinite),
            _ => match s.parse::<u64>() {
                Ok(0) => Err("n must be a positive integer or \"inf\"".into()),
                Ok(n) => Ok(Count::Finite(n)),
                Err(_) => Err(format!("invalid count {s:?}: expected a positive integer or \"inf\"")),
            },
        }
    }
}

/// Sum of means `m`, sum of second moments `s`, and summand count `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBudget {
    m: f64,
    s: f64,
    n: Count,
}

impl MomentBudget {
    pub fn new(m: f64, s: f64, n: Count) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(BoundError::ConstraintViolation(format!("m = {m} must be positive and finite")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(BoundError::ConstraintViolation(format!("s = {s} must be positive and finite")));
        }
        if let Count::Finite(n) = n {
            // s ≥ m²/n, compared as n·s ≥ m² with a rounding allowance
            let ns = n as f64 * s;
            if ns < m * m * (1.0 - 4.0 * f64::EPSILON) {
                return Err(BoundError::ConstraintViolation(format!(
                    "s < m^2/n (s = {s}, m = {m}, n = {n}); the budget needs n >= m^2/s"
                )));
            }
        }
        Ok(Self { m, s, n })
    }

    /// Budget without a summand count (Poisson limit / normal law).
    pub fn unbounded(m: f64, s: f64) -> Result<Self> {
        Self::new(m, s, Count::Infinite)
    }

    /// Mean and variance of a normal law; the mean may be any finite real.
    pub fn location(m: f64, s: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(BoundError::ConstraintViolation(format!("m = {m} must be finite")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(BoundError::ConstraintViolation(format!("s = {s} must be positive and finite")));
        }
        Ok(Self { m, s, n: Count::Infinite })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn n(&self) -> Count {
        self.n
    }

    /// `λ = m²/s`
    pub fn lambda(&self) -> f64 {
        self.m * self.m / self.s
    }

    /// Lattice step `d = s/m`.
    pub fn step(&self) -> f64 {
        self.s / self.m
    }

    /// Standardized threshold `z = (x - m)/√s`.
    pub fn z_of(&self, x: f64) -> f64 {
        (x - self.m) / self.s.sqrt()
    }

    pub fn x_of(&self, z: f64) -> f64 {
        self.m + z * self.s.sqrt()
    }
}

/// The law on `{0, s/m}` with mean `m` and second moment `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointLaw {
    m: f64,
    s: f64,
}

impl TwoPointLaw {
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn atom_high(&self) -> f64 {
        self.s / self.m
    }

    pub fn p_high(&self) -> f64 {
        (self.m * self.m / self.s).min(1.0)
    }

    pub fn p_low(&self) -> f64 {
        (self.s - self.m * self.m).max(0.0) / self.s
    }

    pub fn mean(&self) -> f64 {
        self.p_high() * self.atom_high()
    }

    pub fn second_moment(&self) -> f64 {
        self.p_high() * self.atom_high() * self.atom_high()
    }

    pub fn is_degenerate(&self) -> bool {
        self.p_low() == 0.0
    }
}

/// Builds the extremal two-point law `Y^{m,s}`.
pub fn two_point_law(m: f64, s: f64) -> Result<TwoPointLaw> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(BoundError::ConstraintViolation(format!("m = {m} must be positive")));
    }
    if !(s.is_finite() && s >= m * m) {
        return Err(BoundError::ConstraintViolation(format!(
            "s = {s} < m^2 = {}; a nonnegative variable with mean m has second moment at least m^2",
            m * m
        )));
    }
    Ok(TwoPointLaw { m, s })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    ScaledBinomial,
    ScaledPoisson,
    ShiftedNormal,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::ScaledBinomial => "binomial",
            Family::ScaledPoisson => "poisson",
            Family::ShiftedNormal => "normal",
        }
    }

    pub fn is_lattice(&self) -> bool {
        !matches!(self, Family::ShiftedNormal)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "binomial" => Ok(Family::ScaledBinomial),
            "poisson" => Ok(Family::ScaledPoisson),
            "normal" => Ok(Family::ShiftedNormal),
            _ => Err(format!("unknown family {s:?}: expected binomial, poisson or normal")),
        }
    }
}

/// One of the three reference laws attached to a moment budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLaw {
    family: Family,
    budget: MomentBudget,
}

impl ReferenceLaw {
    pub fn new(family: Family, budget: MomentBudget) -> Result<Self> {
        if family.is_lattice() && !(budget.m > 0.0) {
            return Err(BoundError::ConstraintViolation(format!("m = {} must be positive", budget.m)));
        }
        if family == Family::ScaledBinomial && budget.n == Count::Infinite {
            return Err(BoundError::ConstraintViolation(
                "the scaled binomial law needs a finite n".into(),
            ));
        }
        Ok(Self { family, budget })
    }

    /// `(s/m)·Binomial(n, m²/(ns))`
    pub fn binomial(m: f64, s: f64, n: u64) -> Result<Self> {
        Self::new(Family::ScaledBinomial, MomentBudget::new(m, s, Count::Finite(n))?)
    }

    /// `(s/m)·Poisson(m²/s)`
    pub fn poisson(m: f64, s: f64) -> Result<Self> {
        Self::new(Family::ScaledPoisson, MomentBudget::unbounded(m, s)?)
    }

    /// `m + Z√s`
    pub fn normal(m: f64, s: f64) -> Result<Self> {
        Self::new(Family::ShiftedNormal, MomentBudget::location(m, s)?)
    }

    /// Binomial for finite `n`, Poisson for `n = ∞`.
    pub fn lattice(m: f64, s: f64, n: Count) -> Result<Self> {
        match n {
            Count::Finite(n) => Self::binomial(m, s, n),
            Count::Infinite => Self::poisson(m, s),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn budget(&self) -> &MomentBudget {
        &self.budget
    }

    pub fn mean(&self) -> f64 {
        self.budget.m
    }

    pub fn variance(&self) -> f64 {
        match self.family {
            Family::ScaledBinomial => {
                let lat = self.unit_lattice().expect("binomial is a lattice law");
                let d = self.budget.step();
                d * d * lat.variance()
            }
            _ => self.budget.s,
        }
    }

    /// Lattice step `d`, or `None` for the normal law.
    pub fn step(&self) -> Option<f64> {
        self.family.is_lattice().then(|| self.budget.step())
    }

    /// `inf supp(η)`
    pub fn support_infimum(&self) -> f64 {
        match self.unit_lattice() {
            Some(lat) if lat.is_degenerate() => self.budget.m,
            Some(_) => 0.0,
            None => f64::NEG_INFINITY,
        }
    }

    /// The integer-valued law `η/d`.
    pub fn unit_lattice(&self) -> Option<UnitLattice> {
        let b = &self.budget;
        match self.family {
            Family::ScaledPoisson => Some(UnitLattice::Poisson { lambda: b.lambda() }),
            Family::ScaledBinomial => {
                let Count::Finite(n) = b.n else { return None };
                let ns = n as f64 * b.s;
                let m2 = b.m * b.m;
                let p = (m2 / ns).min(1.0);
                let q = ((ns - m2) / ns).max(0.0);
                Some(UnitLattice::Binomial { n, p, q })
            }
            Family::ShiftedNormal => None,
        }
    }

    pub(crate) fn require_lattice(&self) -> Result<UnitLattice> {
        self.unit_lattice().ok_or(BoundError::UnsupportedFamily(self.family.tag()))
    }
}

/// Integer-valued law on `{0, 1, 2, ...}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitLattice {
    Binomial { n: u64, p: f64, q: f64 },
    Poisson { lambda: f64 },
}

impl UnitLattice {
    pub fn pmf(&self, k: u64) -> f64 {
        match *self {
            UnitLattice::Binomial { n, p, q } => special::binomial_pmf(k, n, p, q),
            UnitLattice::Poisson { lambda } => special::poisson_pmf(k, lambda),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            UnitLattice::Binomial { n, p, .. } => n as f64 * p,
            UnitLattice::Poisson { lambda } => lambda,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            UnitLattice::Binomial { n, p, q } => n as f64 * p * q,
            UnitLattice::Poisson { lambda } => lambda,
        }
    }

    /// Point mass at `n` (binomial with `p = 1`).
    pub fn is_degenerate(&self) -> bool {
        matches!(*self, UnitLattice::Binomial { q, .. } if q == 0.0)
    }

    /// Last index carrying non-negligible mass: `n` for the binomial,
    /// `⌈λ + 12√λ⌉ + 10` for the Poisson law (upper tail below `1e-15`).
    pub fn cap(&self) -> u64 {
        match *self {
            UnitLattice::Binomial { n, .. } => n,
            UnitLattice::Poisson { lambda } => (lambda + 12.0 * lambda.sqrt()).ceil() as u64 + 10,
        }
    }

    /// `P(K ≤ k)` by summation.
    pub fn cdf(&self, k: u64) -> f64 {
        let top = k.min(self.cap());
        let total: f64 = (0..=top).map(|i| self.pmf(i)).sum();
        total.min(1.0)
    }
}

/// Probability of the lattice point `k` (value `k·d` in the original scale).
pub fn lattice_pmf(law: &ReferenceLaw, k: u64) -> Result<f64> {
    Ok(law.require_lattice()?.pmf(k))
}

/// Partial moments `a_j = E(K-x)1{K≤j}`, `b_j = E K(K-x)1{K≤j}`,
/// `c_j = E K²(K-x)1{K≤j}` of a unit-lattice law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialMomentTriple {
    pub j: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PartialMomentTriple {
    /// `a w² - 2b w + c`, which equals `E(w-K)²₊(K-x)` for `w ∈ (j, j+1]`.
    pub fn quadratic(&self, w: f64) -> f64 {
        (self.a * w - 2.0 * self.b) * w + self.c
    }

    /// `a w - b`, which equals `E(w-K)₊(K-x)` for `w ∈ (j, j+1]`.
    pub fn linear(&self, w: f64) -> f64 {
        self.a * w - self.b
    }
}

/// Incremental sweep over `j = 0, 1, 2, ...` producing one triple per step
/// at the cost of a single pmf evaluation.
#[derive(Debug, Clone)]
pub struct PartialMomentSweep {
    lattice: UnitLattice,
    x: f64,
    next: u64,
    acc: (f64, f64, f64),
}

impl PartialMomentSweep {
    pub fn new(lattice: UnitLattice, x: f64) -> Self {
        Self { lattice, x, next: 0, acc: (0.0, 0.0, 0.0) }
    }
}

impl Iterator for PartialMomentSweep {
    type Item = PartialMomentTriple;

    fn next(&mut self) -> Option<Self::Item> {
        let j = self.next;
        let k = j as f64;
        let p = self.lattice.pmf(j);
        let t = (k - self.x) * p;
        self.acc.0 += t;
        self.acc.1 += k * t;
        self.acc.2 += k * k * t;
        self.next += 1;
        Some(PartialMomentTriple { j, a: self.acc.0, b: self.acc.1, c: self.acc.2 })
    }
}

/// `(a_j, b_j, c_j)` for the cutoff `j`; `x` is in unit-lattice coordinates.
pub fn partial_moment_triple(law: &ReferenceLaw, x: f64, j: u64) -> Result<PartialMomentTriple> {
    let lattice = law.require_lattice()?;
    // beyond the cap the increments vanish in double precision
    let last = j.min(lattice.cap());
    let mut triple = PartialMomentSweep::new(lattice, x)
        .nth(last as usize)
        .expect("sweep is infinite");
    triple.j = j;
    Ok(triple)
}

/// Scaled lower positive-part moments of the standard normal:
/// `E(t - Z)₊^k = exp(ln_scale) · r[k]` for `k = 0..=3`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormalLowerMoments {
    pub ln_scale: f64,
    pub r: [f64; 4],
}

const MILLER_START: usize = 100;

impl NormalLowerMoments {
    pub fn at(t: f64) -> Self {
        if t >= -3.0 {
            let cdf = normal_cdf(t);
            let pdf = normal_pdf(t);
            let t2 = t * t;
            return Self {
                ln_scale: 0.0,
                r: [
                    cdf,
                    t * cdf + pdf,
                    (1.0 + t2) * cdf + t * pdf,
                    t * (t2 + 3.0) * cdf + (t2 + 2.0) * pdf,
                ],
            };
        }
        // E(t-Z)₊^k = φ(t)·J_k(y), y = -t, J_k(y) = ∫₀^∞ u^k e^{-yu-u²/2} du.
        // J_{k+1} = k J_{k-1} - y J_k loses digits forward; run it backward
        // and normalize with J_0 = Mills ratio.
        let y = -t;
        let mut hi = 0.0;
        let mut cur = 1.0;
        let mut low = [0.0; 4];
        for k in (1..=MILLER_START).rev() {
            let prev = (hi + y * cur) / k as f64;
            hi = cur;
            cur = prev;
            if k <= 4 {
                low[k - 1] = cur;
            }
            if cur > 1e250 {
                hi /= 1e250;
                cur /= 1e250;
                low.iter_mut().for_each(|v| *v /= 1e250);
            }
        }
        let scale = special::mills_ratio(y) / low[0];
        Self {
            ln_scale: -0.5 * y * y - special::LN_SQRT_2PI,
            r: low.map(|v| v * scale),
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        self.r[k] * self.ln_scale.exp()
    }
}

fn check_order(alpha: u32, allowed: &[u32], family: &'static str) -> Result<()> {
    if allowed.contains(&alpha) {
        Ok(())
    } else {
        Err(BoundError::UnsupportedOrder { alpha, family })
    }
}

/// `E(w - η)₊^α` for `η = m + Z√s` and `α ∈ {1, 2, 3}`.
pub fn normal_positive_part_moment(budget: &MomentBudget, w: f64, alpha: u32) -> Result<f64> {
    check_order(alpha, &[1, 2, 3], "normal positive-part moment")?;
    let sd = budget.s.sqrt();
    let t = (w - budget.m) / sd;
    let moments = NormalLowerMoments::at(t);
    Ok(sd.powi(alpha as i32) * moments.value(alpha as usize))
}

/// `E(w - η)₊^α` for any reference law and integer `α ≥ 0`, in the
/// original scale.
pub fn positive_part_moment(law: &ReferenceLaw, w: f64, alpha: u32) -> Result<f64> {
    match law.unit_lattice() {
        None => {
            if alpha == 0 {
                return Ok(normal_cdf(law.budget.z_of(w)));
            }
            normal_positive_part_moment(&law.budget, w, alpha)
        }
        Some(lat) => {
            let d = law.budget.step();
            let wu = w / d;
            if wu <= 0.0 {
                return Ok(0.0);
            }
            let top = ((wu - 1.0).ceil().max(0.0) as u64).min(lat.cap());
            let sum: f64 = (0..=top)
                .map(|k| {
                    let gap = wu - k as f64;
                    if gap <= 0.0 {
                        0.0
                    } else {
                        lat.pmf(k) * gap.powi(alpha as i32)
                    }
                })
                .sum();
            Ok(sum * d.powi(alpha as i32))
        }
    }
}

/// Tangency function `E(w-η)₊^{α-1}(η-x)`; its unique root in
/// `(x_*, ∞)` is the optimal `w_x`.
pub fn ee(law: &ReferenceLaw, alpha: u32, x: f64, w: f64) -> Result<f64> {
    check_order(alpha, &[2, 3], law.family.tag())?;
    match law.unit_lattice() {
        Some(lat) => {
            let d = law.budget.step();
            let (xu, wu) = (x / d, w / d);
            if wu <= 0.0 || lat.is_degenerate() && w <= law.support_infimum() {
                return Ok(0.0);
            }
            let j = (wu - 1.0).ceil().max(0.0) as u64;
            let triple = partial_moment_triple(law, xu, j)?;
            let unit = if alpha == 3 { triple.quadratic(wu) } else { triple.linear(wu) };
            Ok(unit * d.powi(alpha as i32))
        }
        None => {
            let sd = law.budget.s.sqrt();
            let moments = NormalLowerMoments::at((w - law.budget.m) / sd);
            let lower = sd.powi(alpha as i32 - 1) * moments.r[alpha as usize - 1];
            let upper = sd.powi(alpha as i32) * moments.r[alpha as usize];
            Ok(((w - x) * lower - upper) * moments.ln_scale.exp())
        }
    }
}

/// `γ(w) = E η(w-η)₊^{α-1} / E(w-η)₊^{α-1}`, nondecreasing on `(x_*, ∞)`.
pub fn tangency_ratio(law: &ReferenceLaw, alpha: u32, w: f64) -> Result<f64> {
    check_order(alpha, &[2, 3], law.family.tag())?;
    let lower = positive_part_moment(law, w, alpha - 1)?;
    let upper = positive_part_moment(law, w, alpha)?;
    Ok(w - upper / lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_law_examples() {
        let y = two_point_law(1.0, 1.0).unwrap();
        assert_eq!(y.p_high(), 1.0);
        assert!(y.is_degenerate());

        let y = two_point_law(1.0, 2.0).unwrap();
        assert_eq!(y.atom_high(), 2.0);
        assert_eq!(y.p_high(), 0.5);
        assert_eq!(y.mean(), 1.0);
        assert_eq!(y.second_moment(), 2.0);

        assert!(matches!(two_point_law(2.0, 3.0), Err(BoundError::ConstraintViolation(_))));
    }

    #[test]
    fn budget_rejects_too_few_summands() {
        assert!(MomentBudget::new(10.0, 10.0, Count::Finite(9)).is_err());
        assert!(MomentBudget::new(10.0, 10.0, Count::Finite(10)).is_ok());
        assert!(MomentBudget::new(-1.0, 10.0, Count::Infinite).is_err());
        assert!(MomentBudget::new(1.0, 0.0, Count::Infinite).is_err());
    }

    #[test]
    fn lattice_pmf_examples() {
        let law = ReferenceLaw::poisson(1.0, 1.0).unwrap();
        assert!((lattice_pmf(&law, 0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);

        let law = ReferenceLaw::binomial(1.0, 1.0, 2).unwrap();
        assert!((lattice_pmf(&law, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lattice_pmf(&law, 3).unwrap(), 0.0);

        let normal = ReferenceLaw::normal(1.0, 1.0).unwrap();
        assert!(matches!(lattice_pmf(&normal, 0), Err(BoundError::UnsupportedFamily(_))));
    }

    #[test]
    fn degenerate_binomial_is_a_point_mass() {
        // s = m²/n gives p = 1
        let law = ReferenceLaw::binomial(6.0, 12.0, 3).unwrap();
        let lat = law.unit_lattice().unwrap();
        assert!(lat.is_degenerate());
        assert_eq!(lat.pmf(3), 1.0);
        assert_eq!(lat.pmf(2), 0.0);
        assert_eq!(law.support_infimum(), 6.0);
    }

    #[test]
    fn normalization_and_mean() {
        let laws = [
            ReferenceLaw::poisson(3.0, 1.5).unwrap(),
            ReferenceLaw::poisson(200.0, 200.0).unwrap(),
            ReferenceLaw::binomial(10.0, 10.0, 11).unwrap(),
            ReferenceLaw::binomial(50.0, 60.0, 1000).unwrap(),
        ];
        for law in laws {
            let lat = law.unit_lattice().unwrap();
            let (mass, first) = (0..=lat.cap()).fold((0.0, 0.0), |(m0, m1), k| {
                let p = lat.pmf(k);
                (m0 + p, m1 + k as f64 * p)
            });
            assert!((mass - 1.0).abs() < 1e-12, "{law:?}: mass {mass}");
            let mean = first * law.budget().step();
            assert!((mean / law.mean() - 1.0).abs() < 1e-10, "{law:?}: mean {mean}");
        }
    }

    #[test]
    fn partial_moment_examples() {
        let law = ReferenceLaw::poisson(1.0, 1.0).unwrap();
        let e1 = (-1.0f64).exp();
        // direct summation over P(0) = P(1) = e⁻¹
        let a = (0.0 - 0.5) * e1 + (1.0 - 0.5) * e1;
        let b = 1.0 * (1.0 - 0.5) * e1;
        let c = 1.0 * (1.0 - 0.5) * e1;
        let t = partial_moment_triple(&law, 0.5, 1).unwrap();
        assert!((t.a - a).abs() < 1e-16);
        assert!((t.b - b).abs() < 1e-16);
        assert!((t.c - c).abs() < 1e-16);

        // every summand negative when x lies above the cutoff
        let t = partial_moment_triple(&law, 3.5, 3).unwrap();
        assert!(t.a < 0.0);

        // full first moment at x = 0
        let t = partial_moment_triple(&law, 0.0, 1000).unwrap();
        assert!((t.a - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_moment_increments() {
        let law = ReferenceLaw::binomial(4.0, 5.0, 9).unwrap();
        let lat = law.unit_lattice().unwrap();
        let x = 1.7;
        let triples: Vec<_> = PartialMomentSweep::new(lat, x).take(9).collect();
        for w in triples.windows(2) {
            let k = w[1].j as f64;
            let p = lat.pmf(w[1].j);
            assert!((w[1].a - w[0].a - (k - x) * p).abs() < 1e-15);
            assert!((w[1].b - w[0].b - k * (k - x) * p).abs() < 1e-14);
            assert!((w[1].c - w[0].c - k * k * (k - x) * p).abs() < 1e-13);
        }
    }

    #[test]
    fn normal_moment_examples() {
        let budget = MomentBudget::unbounded(2.0, 9.0).unwrap();
        let m1 = normal_positive_part_moment(&budget, 2.0, 1).unwrap();
        assert!((m1 - (9.0 / (2.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-15);
        let m2 = normal_positive_part_moment(&budget, 2.0, 2).unwrap();
        assert!((m2 - 4.5).abs() < 1e-14);
        let far = normal_positive_part_moment(&budget, 2.0 - 40.0 * 3.0, 1).unwrap();
        assert!(far.abs() < 1e-300);
        assert!(matches!(
            normal_positive_part_moment(&budget, 0.0, 4),
            Err(BoundError::UnsupportedOrder { alpha: 4, .. })
        ));
    }

    #[test]
    fn backward_recurrence_joins_closed_forms() {
        // both evaluation routes agree where the closed forms are still accurate
        let t: f64 = -3.0 - 1e-9;
        let a = NormalLowerMoments::at(t);
        let b = NormalLowerMoments::at(-3.0);
        for k in 0..4 {
            assert!((a.value(k) / b.value(k) - 1.0).abs() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn ee_lattice_examples() {
        let law = ReferenceLaw::poisson(1.0, 1.0).unwrap();
        assert_eq!(ee(&law, 3, 0.5, 0.0).unwrap(), 0.0);
        assert_eq!(ee(&law, 3, 0.5, -2.0).unwrap(), 0.0);
        // signs from the independent truncated-series scan
        assert!(ee(&law, 3, 0.5, 4.0).unwrap() < 0.0);
        assert!(ee(&law, 3, 0.5, 5.0).unwrap() > 0.0);
        // frozen mpmath values: 𝔈(4) = -0.030656620097620193, 𝔈(5) = 1.4945102297589845
        assert!((ee(&law, 3, 0.5, 4.0).unwrap() + 0.030_656_620_097_620_193).abs() < 1e-15);
        assert!((ee(&law, 3, 0.5, 5.0).unwrap() - 1.494_510_229_758_984_5).abs() < 1e-14);
    }

    #[test]
    fn ee_scales_with_lattice_step() {
        let unit = ReferenceLaw::poisson(2.0, 2.0).unwrap();
        let wide = ReferenceLaw::poisson(6.0, 18.0).unwrap(); // same λ, d = 3
        let direct = ee(&wide, 3, 3.3, 7.2).unwrap();
        let reduced = ee(&unit, 3, 1.1, 2.4).unwrap() * 27.0;
        assert!((direct / reduced - 1.0).abs() < 1e-13);
    }

    #[test]
    fn normal_mean_may_be_any_real() {
        let law = ReferenceLaw::normal(-3.0, 2.0).unwrap();
        assert_eq!(law.mean(), -3.0);
        assert_eq!(law.variance(), 2.0);
        assert!(ReferenceLaw::normal(0.0, 1.0).is_ok());
        assert!(ReferenceLaw::normal(f64::NAN, 1.0).is_err());
        assert!(ReferenceLaw::new(Family::ScaledPoisson, MomentBudget::location(0.0, 1.0).unwrap()).is_err());
    }
}
