//! Simulated sums of nonnegative summands stay below the binomial bound.

use tailbound::oracle::{empirical_tail, sample_sum, MixingMode, SumSpec};
use tailbound::report::open_z_grid;
use tailbound::{p_alpha, ReferenceLaw};

fn main() -> tailbound::Result<()> {
    let budgets = vec![(0.4, 0.3), (1.0, 1.5), (0.2, 0.1), (0.7, 0.9), (1.3, 2.0)];
    for mode in [MixingMode::ExtremalTwoPoint, MixingMode::RandomMixture] {
        let spec = SumSpec::new(budgets.clone(), mode)?;
        let law = ReferenceLaw::binomial(spec.total_m(), spec.total_s(), spec.len() as u64)?;
        let sample = sample_sum(&spec, 100_000, 42)?;
        println!("{mode:?}: m = {:.2}, s = {:.2}", spec.total_m(), spec.total_s());
        for z in open_z_grid(law.budget().lambda(), 6) {
            let x = law.budget().x_of(z);
            let (est, se) = empirical_tail(&sample, x);
            let bound = p_alpha(&law, 3, x)?.value;
            println!("  x = {x:6.3}  empirical {est:.4} ± {se:.4}  bound {bound:.4}");
        }
    }
    Ok(())
}
