//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p tailbound --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tailbound::bounds::{exponential_tail_bounds, p_alpha, p_infty};
use tailbound::laws::{self, Count, MomentBudget, ReferenceLaw};
use tailbound::oracle::{self, quadrature, MixingMode, MomentFunction, SumSpec};
use tailbound::report::open_z_grid;
use tailbound::verify::ChainPoint;

const SEED: u64 = 20_240_601;

struct Line {
    id: &'static str,
    name: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Line {
    fn passed(&self) -> bool {
        self.ok && self.limit.is_none_or(|l| self.elapsed < l)
    }
}

fn timed(
    id: &'static str,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> (bool, String),
) -> Line {
    let start = Instant::now();
    let (ok, detail) = body();
    Line { id, name, ok, detail, elapsed: start.elapsed(), limit }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn exactness() -> (bool, String) {
    let bin = ReferenceLaw::binomial(10.0, 10.0, 11).unwrap();
    let poi = ReferenceLaw::poisson(10.0, 10.0).unwrap();
    let e_bin = rel(p_alpha(&bin, 3, 0.0).unwrap().value, 11f64.powi(-11));
    let e_poi = rel(p_alpha(&poi, 3, 0.0).unwrap().value, (-10.0f64).exp());
    (e_bin <= 1e-14 && e_poi <= 1e-14, format!("binomial rel={e_bin:.2e} poisson rel={e_poi:.2e} tol=1e-14"))
}

fn figure_ratio() -> (bool, String) {
    let law = ReferenceLaw::binomial(10.0, 10.0, 11).unwrap();
    let (mut best, mut at) = (0.0f64, 0.0);
    for z in open_z_grid(10.0, 200) {
        let x = law.budget().x_of(z);
        let ratio = (-0.5 * z * z).exp() / p_alpha(&law, 3, x).unwrap().value;
        if ratio > best {
            (best, at) = (ratio, z);
        }
    }
    (best > 8.0, format!("max ratio={best:.3e} at z={at:.4} threshold=8"))
}

fn family_chain(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let pt = ChainPoint::random(rng, 50.0);
        let x = pt.x();
        let (bin, poi, nor) = pt.laws().unwrap();
        let b = p_alpha(&bin, 3, x).unwrap().value;
        let p = p_alpha(&poi, 3, x).unwrap().value;
        let n = p_alpha(&nor, 3, x).unwrap().value;
        worst = worst.max(b - p).max(p - n);
    }
    (worst <= 1e-9, format!("points=200 max excess={worst:.3e} slack=1e-9"))
}

fn alpha_and_exponential_chains(rng: &mut ChaCha8Rng) -> ((bool, String), (bool, String)) {
    let (mut worst_alpha, mut worst_exp) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..500 {
        let pt = ChainPoint::random(rng, 50.0);
        let x = pt.x();
        let (bin, poi, nor) = pt.laws().unwrap();
        let (bi, pi, ni) = (p_infty(&bin, x), p_infty(&poi, x), p_infty(&nor, x));
        let b3 = p_alpha(&bin, 3, x).unwrap().value;
        let p3 = p_alpha(&poi, 3, x).unwrap().value;
        let n2 = p_alpha(&nor, 2, x).unwrap().value;
        let n3 = p_alpha(&nor, 3, x).unwrap().value;
        for excess in [b3 - bi, p3 - pi, n3 - ni, n2 - n3] {
            worst_alpha = worst_alpha.max(excess);
        }
        worst_exp = worst_exp.max(bi - pi).max(pi - ni);
    }
    (
        (worst_alpha <= 1e-9, format!("points=500 max excess={worst_alpha:.3e} slack=1e-9")),
        (worst_exp <= 1e-12, format!("points=500 max excess={worst_exp:.3e} slack=1e-12")),
    )
}

fn classical_poisson_form(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let m: f64 = rng.random_range(0.5..20.0);
        let s = m * m / rng.random_range(0.5..50.0);
        let x = m * i as f64 / 100.0;
        let law = ReferenceLaw::poisson(m, s).unwrap();
        let forms = exponential_tail_bounds(x, law.budget()).unwrap();
        worst = worst.max(rel(forms.poisson_form, p_infty(&law, x)));
    }
    (worst <= 1e-12, format!("points=100 max rel={worst:.3e} tol=1e-12"))
}

fn random_instance(rng: &mut ChaCha8Rng, i: usize) -> (ReferenceLaw, u32, f64) {
    let lambda: f64 = rng.random_range(0.5..40.0);
    let m: f64 = rng.random_range(0.2..15.0);
    let s = m * m / lambda;
    let (law, alpha) = match i % 3 {
        0 => {
            let lo = lambda.ceil() as u64;
            (ReferenceLaw::binomial(m, s, rng.random_range(lo..=6 * lo)).unwrap(), 3)
        }
        1 => (ReferenceLaw::poisson(m, s).unwrap(), 3),
        _ => (ReferenceLaw::normal(m, s).unwrap(), 2 + (i as u32 / 3) % 2),
    };
    let sd = law.variance().sqrt();
    let lower = law.support_infimum().max(law.mean() - 6.0 * sd);
    let x = lower + (law.mean() - lower) * rng.random_range(0.02..0.98);
    (law, alpha, x)
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> (bool, String) {
    let instances: Vec<_> = (0..50).map(|i| random_instance(rng, i)).collect();
    let errors: Vec<f64> = instances
        .par_iter()
        .map(|(law, alpha, x)| {
            let bound = p_alpha(law, *alpha, *x).unwrap().value;
            let grid = oracle::grid_infimum(law, *alpha, *x, oracle::default_w_max(law, *x), 100_000).unwrap();
            rel(grid, bound)
        })
        .collect();
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    (worst <= 1e-4, format!("instances=50 grid=1e5 max rel={worst:.3e} tol=1e-4"))
}

fn monte_carlo(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut cells, mut bad, mut worst) = (0, 0, f64::NEG_INFINITY);
    for i in 0..20u64 {
        let n = rng.random_range(2..40usize);
        let budgets: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let m: f64 = rng.random_range(0.05..2.0);
                (m, m * m * rng.random_range(1.0..5.0))
            })
            .collect();
        let mode = if i % 2 == 0 { MixingMode::ExtremalTwoPoint } else { MixingMode::RandomMixture };
        let spec = SumSpec::new(budgets, mode).unwrap();
        let law = ReferenceLaw::binomial(spec.total_m(), spec.total_s(), n as u64).unwrap();
        let sample = oracle::sample_sum(&spec, 100_000, SEED + i).unwrap();
        for z in open_z_grid(law.budget().lambda(), 10) {
            let x = law.budget().x_of(z);
            let (est, se) = oracle::empirical_tail(&sample, x);
            let excess = est - p_alpha(&law, 3, x).unwrap().value - 3.0 * se;
            cells += 1;
            if excess > 0.0 {
                bad += 1;
            }
            worst = worst.max(excess);
        }
    }
    (bad == 0, format!("cells={cells} violations={bad} max excess={worst:.3e}"))
}

fn one_summand(rng: &mut ChaCha8Rng) -> (bool, String) {
    let (mut worst_dom, mut worst_eq) = (f64::NEG_INFINITY, 0.0f64);
    for _ in 0..1000 {
        let m: f64 = rng.random_range(0.1..3.0);
        let s = m * m * rng.random_range(1.0..6.0);
        let w = rng.random_range(-0.5..3.0 * s / m);
        let f = MomentFunction::new(w, 2);
        let closed = oracle::extremal_moment(m, s, f).unwrap();
        let x = oracle::random_feasible_law(m, s, rng).unwrap();
        worst_dom = worst_dom.max(x.expect(|y| f.eval(y)) - closed);
        let y = oracle::extremal_law(m, s).unwrap();
        worst_eq = worst_eq.max((y.expect(|v| f.eval(v)) - closed).abs() / closed.max(1.0));
    }
    (
        worst_dom <= 1e-12 && worst_eq <= 1e-14,
        format!("laws=1000 max excess={worst_dom:.3e} (slack 1e-12) extremal mismatch={worst_eq:.3e} (tol 1e-14)"),
    )
}

fn normal_moments() -> (bool, String) {
    let budget = MomentBudget::new(1.0, 1.0, Count::Infinite).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=160 {
        let t = -8.0 + 0.1 * i as f64;
        for alpha in 1..=3 {
            let closed = laws::normal_positive_part_moment(&budget, 1.0 + t, alpha).unwrap();
            let quad = quadrature::normal_moment_quadrature(1.0, 1.0, 1.0 + t, alpha);
            worst = worst.max(rel(closed, quad));
        }
    }
    (worst <= 1e-9, format!("t in [-8,8] step 0.1, alpha 1..3, max rel={worst:.3e} tol=1e-9"))
}

fn main() -> ExitCode {
    let suite = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let secs = Duration::from_secs;
    let mut lines = vec![
        timed("1", "exactness at the support bottom", Some(Duration::from_millis(1)), exactness),
        timed("2", "normal-to-binomial ratio exceeds 8", Some(secs(1)), figure_ratio),
        timed("3", "family chain", Some(secs(10)), || family_chain(&mut rng)),
    ];
    let start = Instant::now();
    let (alpha, expo) = alpha_and_exponential_chains(&mut rng);
    let elapsed = start.elapsed();
    lines.push(Line { id: "4", name: "alpha chain", ok: alpha.0, detail: alpha.1, elapsed, limit: None });
    lines.push(Line { id: "5a", name: "exponential chain", ok: expo.0, detail: expo.1, elapsed, limit: None });
    lines.push(timed("5b", "classical Poisson form equals P_inf", None, || classical_poisson_form(&mut rng)));
    lines.push(timed("6", "oracle equivalence", Some(secs(30)), || oracle_equivalence(&mut rng)));
    lines.push(timed("7", "Monte-Carlo domination", Some(secs(30)), || monte_carlo(&mut rng)));
    lines.push(timed("8", "one-summand tightness", None, || one_summand(&mut rng)));
    lines.push(timed("9", "normal moments vs quadrature", None, normal_moments));
    let total = suite.elapsed();

    for l in &lines {
        let limit = l.limit.map(|d| format!(" limit={d:?}")).unwrap_or_default();
        println!(
            "{} [{}] {}: {} time={:.3?}{}",
            if l.passed() { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.detail,
            l.elapsed,
            limit
        );
    }
    let suite_ok = total < secs(90);
    println!("{} [suite] total time={total:.3?} limit=90s", if suite_ok { "PASS" } else { "FAIL" });
    let failed = lines.iter().filter(|l| !l.passed()).count() + usize::from(!suite_ok);
    println!("acceptance: {} criteria, {failed} failed", lines.len() + 1);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
