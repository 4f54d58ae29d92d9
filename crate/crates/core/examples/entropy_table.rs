//! The four-token worked example: entropies and efficiencies of
//! ⟨0.4, 0.3, 0.2, 0.1⟩ with its top token duplicated 2 and 10 times.

use tokenlab::fixtures::{EXAMPLE_DISTRIBUTION, EXAMPLE_FACTORS, EXAMPLE_TABLE};
use tokenlab::metrics::{renyi_bits, shannon_bits};
use tokenlab::{renyi_efficiency, EfficiencyConvention, Result, UnigramDistribution};

fn main() -> Result<()> {
    println!(
        "{:>3}  {:>6} {:>6} {:>6}  {:>6} {:>6} {:>6}",
        "k", "H", "H0.5", "H3", "Eff", "Eff0.5", "Eff3"
    );
    for (k, published) in EXAMPLE_FACTORS.iter().zip(EXAMPLE_TABLE) {
        let mut probs = vec![EXAMPLE_DISTRIBUTION[0] / *k as f64; *k as usize];
        probs.extend(&EXAMPLE_DISTRIBUTION[1..]);
        let dist = UnigramDistribution::from_probabilities(&probs)?;
        let conv = EfficiencyConvention::BitsOverNats;
        let row = [
            shannon_bits(&probs),
            renyi_bits(&probs, 0.5)?,
            renyi_bits(&probs, 3.0)?,
            renyi_efficiency(&dist, 1.0, conv)?,
            renyi_efficiency(&dist, 0.5, conv)?,
            renyi_efficiency(&dist, 3.0, conv)?,
        ];
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>6.3}")).collect();
        println!("{k:>3}  {}", cells.join(" "));
        let refs: Vec<String> = published.iter().map(|v| format!("{v:>6.2}")).collect();
        println!("{:>3}  {}", "ref", refs.join(" "));
    }
    let dist = UnigramDistribution::from_probabilities(&EXAMPLE_DISTRIBUTION)?;
    let consistent = renyi_efficiency(&dist, 3.0, EfficiencyConvention::Consistent)?;
    println!("\nwith log2 in both places Eff3 of the first row is {consistent:.4}");
    Ok(())
}
