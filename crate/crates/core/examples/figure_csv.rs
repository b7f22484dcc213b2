//! Writes the binomial / Poisson / normal comparison table as CSV.
//!
//! `cargo run --release --example figure_csv -- out.csv 200`

use std::fs::File;
use std::io::{self, BufWriter, Write};

use tailbound::report::{comparison_dataset, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next();
    let points = args.next().map(|p| p.parse()).transpose()?.unwrap_or(200);

    let rows = comparison_dataset(points)?;
    let mut out: Box<dyn Write> = match &path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_csv(&rows, &mut out)?;
    out.flush()?;
    if let Some(p) = path {
        eprintln!("wrote {} rows to {p}", rows.len());
    }
    Ok(())
}
