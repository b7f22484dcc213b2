//! Exponential bounds next to the third-order bounds, plus the classical
//! closed forms and the normal-law comparison constants.

use tailbound::bounds::{cantelli_combined, exponential_tail_bounds, log_concave_factor, p_alpha, p_infty};
use tailbound::ReferenceLaw;

fn main() -> tailbound::Result<()> {
    let (m, s) = (4.0, 4.0);
    let laws = [ReferenceLaw::binomial(m, s, 6)?, ReferenceLaw::poisson(m, s)?, ReferenceLaw::normal(m, s)?];

    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "x", "bin P3", "bin Pinf", "poi P3", "poi Pinf", "nor P3", "nor Pinf");
    for x in [0.5, 1.0, 2.0, 3.0] {
        print!("{x:>6.2}");
        for law in &laws {
            print!(" {:>10.3e} {:>10.3e}", p_alpha(law, 3, x)?.value, p_infty(law, x));
        }
        println!();
        let classical = exponential_tail_bounds(x, laws[1].budget())?;
        println!("       poisson form {:.3e}, gaussian form {:.3e}", classical.poisson_form, classical.gaussian_form);
    }

    println!("\nlog-concave factor: alpha=2 {:.4}, alpha=3 {:.4}", log_concave_factor(2.0), log_concave_factor(3.0));
    for z in [-0.5, -1.0, -2.0, -3.0] {
        println!("W({z}) = {:.4e}", cantelli_combined(z));
    }
    Ok(())
}
