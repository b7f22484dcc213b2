//! Grid sweeps over `(λ, n, family, α, z)` and their CSV / JSON-lines output.
//!
//! Every sweep uses the budget `m = s = λ`, so the lattice step is one and
//! all bounds depend only on `(z, λ, n)`.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{p_alpha, p_infty};
use crate::error::{BoundError, Result};
use crate::laws::{Count, Family, ReferenceLaw};
use crate::special::normal_cdf;

pub const CSV_HEADER: &str = "lambda,n,family,alpha,z,x,value,log10_value";

/// Bound order of a row; `True` is the exact tail probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlphaTag {
    True,
    Two,
    Three,
    Infinite,
}

impl AlphaTag {
    pub const ALL: [AlphaTag; 4] = [AlphaTag::True, AlphaTag::Two, AlphaTag::Three, AlphaTag::Infinite];

    pub fn as_str(&self) -> &'static str {
        match self {
            AlphaTag::True => "0",
            AlphaTag::Two => "2",
            AlphaTag::Three => "3",
            AlphaTag::Infinite => "inf",
        }
    }
}

impl fmt::Display for AlphaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AlphaTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "0" => Ok(AlphaTag::True),
            "2" => Ok(AlphaTag::Two),
            "3" => Ok(AlphaTag::Three),
            "inf" | "infinity" | "∞" => Ok(AlphaTag::Infinite),
            _ => Err(format!("invalid alpha {s:?}: expected 0, 2, 3 or inf")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub n: Count,
    pub family: Family,
    pub alpha: AlphaTag,
    pub z: f64,
    pub x: f64,
    pub value: f64,
}

impl SweepRow {
    /// `log10(value)`, `-inf` for a zero value.
    pub fn log10_value(&self) -> f64 {
        if self.value > 0.0 {
            self.value.log10()
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.lambda,
            self.n,
            self.family.tag(),
            self.alpha,
            self.z,
            self.x,
            self.value,
            fmt_float(self.log10_value())
        )
    }

    pub fn json(&self) -> Value {
        let n = match self.n {
            Count::Finite(n) => json!(n),
            Count::Infinite => json!("inf"),
        };
        let alpha = match self.alpha {
            AlphaTag::Infinite => json!("inf"),
            tag => json!(tag.as_str().parse::<u32>().expect("numeric tag")),
        };
        let log10 = self.log10_value();
        json!({
            "lambda": self.lambda,
            "n": n,
            "family": self.family.tag(),
            "alpha": alpha,
            "z": self.z,
            "x": self.x,
            "value": self.value,
            "log10_value": if log10.is_finite() { json!(log10) } else { json!("-inf") },
        })
    }

    fn sort_key(&self) -> (f64, Count, Family, AlphaTag, f64) {
        (self.lambda, self.n, self.family, self.alpha, self.z)
    }
}

fn fmt_float(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        v.to_string()
    }
}

/// `P(η ≤ x)` by pmf summation up to `⌊x/d⌋`; `Φ(z)` for the normal law.
pub fn true_tail(law: &ReferenceLaw, x: f64) -> f64 {
    match law.unit_lattice() {
        None => normal_cdf(law.budget().z_of(x)),
        Some(lat) => {
            let xu = x / law.budget().step();
            if xu < 0.0 {
                return 0.0;
            }
            if let crate::laws::UnitLattice::Binomial { n, .. } = lat {
                if xu >= n as f64 {
                    return 1.0;
                }
            }
            lat.cdf(xu.floor() as u64)
        }
    }
}

/// `points` equally spaced values strictly inside `(-√λ, 0)`.
pub fn open_z_grid(lambda: f64, points: usize) -> Vec<f64> {
    let left = -lambda.sqrt();
    (1..=points).map(|i| left - left * i as f64 / (points + 1) as f64).collect()
}

fn row_value(law: &ReferenceLaw, alpha: AlphaTag, x: f64) -> Result<f64> {
    Ok(match alpha {
        AlphaTag::True => true_tail(law, x),
        AlphaTag::Two => p_alpha(law, 2, x)?.value,
        AlphaTag::Three => p_alpha(law, 3, x)?.value,
        AlphaTag::Infinite => p_infty(law, x),
    })
}

/// One row per `(λ, n, family, α, z)` combination shown in the comparison
/// figure: the lattice law (binomial for finite `n`, Poisson for `n = ∞`)
/// with `α ∈ {0, 3, ∞}` and the normal law with `α ∈ {2, ∞}`, restricted to
/// the requested `alphas`. Rows are sorted by that key.
pub fn sweep(lambdas: &[f64], ns: &[Count], alphas: &[AlphaTag], z_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let mut jobs = Vec::new();
    for &lambda in lambdas {
        for &n in ns {
            let lattice = ReferenceLaw::lattice(lambda, lambda, n)?;
            let normal = ReferenceLaw::normal(lambda, lambda)?;
            for &alpha in alphas {
                if alpha != AlphaTag::Two {
                    jobs.push((lattice, n, alpha));
                }
                if matches!(alpha, AlphaTag::Two | AlphaTag::Infinite) {
                    jobs.push((normal, n, alpha));
                }
            }
        }
    }
    let mut rows: Vec<SweepRow> = jobs
        .par_iter()
        .flat_map_iter(|&(law, n, alpha)| {
            z_grid.iter().map(move |&z| {
                let lambda = law.mean();
                let x = law.budget().x_of(z);
                row_value(&law, alpha, x)
                    .map(|value| SweepRow { lambda, n, family: law.family(), alpha, z, x, value })
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| {
        a.sort_key()
            .partial_cmp(&b.sort_key())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(rows)
}

/// The comparison table: `λ ∈ {3, 10}`, `n ∈ {11, 30, ∞}`, all bound orders,
/// `points` values of `z` per `λ`.
pub fn comparison_dataset(points: usize) -> Result<Vec<SweepRow>> {
    let ns = [Count::Finite(11), Count::Finite(30), Count::Infinite];
    let mut rows = Vec::new();
    for lambda in [3.0, 10.0] {
        rows.extend(sweep(&[lambda], &ns, &AlphaTag::ALL, &open_z_grid(lambda, points))?);
    }
    Ok(rows)
}

/// `P_3` of the scaled Poisson law with `m = s = λ` at `x = 1`, across `λ`.
pub fn poisson_unit_curve(lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let law = ReferenceLaw::poisson(lambda, lambda)?;
            let value = p_alpha(&law, 3, 1.0)?.value;
            Ok(SweepRow {
                lambda,
                n: Count::Infinite,
                family: Family::ScaledPoisson,
                alpha: AlphaTag::Three,
                z: law.budget().z_of(1.0),
                x: 1.0,
                value,
            })
        })
        .collect()
}

pub fn write_csv<W: Write + ?Sized>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write + ?Sized>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    for row in rows {
        writeln!(out, "{}", row.json())?;
    }
    Ok(())
}

/// Parses one CSV line written by [`write_csv`].
pub fn parse_csv_line(line: &str) -> Result<SweepRow> {
    let bad = |what: &str| BoundError::Domain(format!("malformed row {line:?}: {what}"));
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 8 {
        return Err(bad("expected 8 fields"));
    }
    let num = |i: usize| fields[i].parse::<f64>().map_err(|_| bad(fields[i]));
    Ok(SweepRow {
        lambda: num(0)?,
        n: fields[1].parse().map_err(|e: String| bad(&e))?,
        family: fields[2].parse().map_err(|e: String| bad(&e))?,
        alpha: fields[3].parse().map_err(|e: String| bad(&e))?,
        z: num(4)?,
        x: num(5)?,
        value: num(6)?,
    })
}
