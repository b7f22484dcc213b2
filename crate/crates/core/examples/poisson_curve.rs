//! `P_3` of the scaled Poisson law at `x = 1` as `λ` grows.

use tailbound::report::poisson_unit_curve;

fn main() -> tailbound::Result<()> {
    let lambdas: Vec<f64> = (1..=40).map(|k| 0.5 * k as f64).collect();
    for row in poisson_unit_curve(&lambdas)? {
        println!("lambda={:>5.1} z={:>8.4} P3={:.6e}", row.lambda, row.z, row.value);
    }
    Ok(())
}
