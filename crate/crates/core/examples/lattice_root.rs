//! Walks the cell search that locates the optimal `w` for a lattice law.

use tailbound::bounds::{p_alpha, solve_wx_lattice};
use tailbound::laws::{ee, partial_moment_triple, ReferenceLaw};

fn main() -> tailbound::Result<()> {
    let law = ReferenceLaw::poisson(1.0, 1.0)?;
    let x = 0.5;

    println!("cell   a_j          b_j          c_j          quadratic(j+1)");
    for j in 0..6 {
        let t = partial_moment_triple(&law, x, j)?;
        println!("{j:>4} {:>12.6} {:>12.6} {:>12.6} {:>14.6}", t.a, t.b, t.c, t.quadratic(j as f64 + 1.0));
    }

    let (j, w) = solve_wx_lattice(&law, x)?;
    println!("\nfirst nonnegative cell j_x = {j}, root w_x = {w:.15}");
    for dw in [-0.1, 0.0, 0.1] {
        println!("  tangency function at w_x {dw:+.1}: {:+.3e}", ee(&law, 3, x, w + dw)?);
    }
    println!("P_3 = {:.15}", p_alpha(&law, 3, x)?.value);
    Ok(())
}
