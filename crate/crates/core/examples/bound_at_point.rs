//! Left-tail bounds for one budget at a few thresholds.
//!
//! `cargo run --example bound_at_point -- 10 10 11`

use tailbound::{p_alpha, p_infty, ReferenceLaw};

fn main() -> tailbound::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (m, s, n) = match args[..] {
        [m, s, n] => (m, s, n as u64),
        _ => (10.0, 10.0, 11),
    };
    let binomial = ReferenceLaw::binomial(m, s, n)?;
    let poisson = ReferenceLaw::poisson(m, s)?;
    let normal = ReferenceLaw::normal(m, s)?;

    println!("m = {m}, s = {s}, n = {n}");
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "x", "binomial", "poisson", "normal P2", "normal P_inf");
    for i in 0..=8 {
        let x = m * i as f64 / 8.0;
        println!(
            "{x:>8.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            p_alpha(&binomial, 3, x)?.value,
            p_alpha(&poisson, 3, x)?.value,
            p_alpha(&normal, 2, x)?.value,
            p_infty(&normal, x),
        );
    }
    Ok(())
}
