//! Brute-force `w` grid against the closed-form bound, and the normal
//! positive-part moments against quadrature.

use tailbound::bounds::p_alpha;
use tailbound::laws::{normal_positive_part_moment, Count, MomentBudget};
use tailbound::oracle::{default_w_max, grid_infimum, quadrature::normal_moment_quadrature};
use tailbound::ReferenceLaw;

fn main() -> tailbound::Result<()> {
    let cases = [
        (ReferenceLaw::binomial(3.0, 2.0, 9)?, 3, 1.2),
        (ReferenceLaw::poisson(5.0, 5.0)?, 3, 2.0),
        (ReferenceLaw::normal(1.0, 4.0)?, 2, -1.5),
        (ReferenceLaw::normal(1.0, 4.0)?, 3, -1.5),
    ];
    for (law, alpha, x) in cases {
        let exact = p_alpha(&law, alpha, x)?.value;
        let grid = grid_infimum(&law, alpha, x, default_w_max(&law, x), 20_000)?;
        println!("{:<9} alpha={alpha} x={x:>5}: bound {exact:.10}  grid {grid:.10}  rel {:.1e}", law.family().tag(), grid / exact - 1.0);
    }

    let budget = MomentBudget::new(1.0, 1.0, Count::Infinite)?;
    for t in [-6.0, -2.0, 0.0, 3.0] {
        let closed = normal_positive_part_moment(&budget, 1.0 + t, 3)?;
        let quad = normal_moment_quadrature(1.0, 1.0, 1.0 + t, 3);
        println!("E(t-Z)^3_+ at t={t:>4}: closed {closed:.12e} quadrature {quad:.12e}");
    }
    Ok(())
}
