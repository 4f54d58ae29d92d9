//! When does dropping a merged token raise Rényi entropy? Compare the
//! closed-form condition with direct recomputation on a few count tables.

use std::collections::BTreeMap;

use tokenlab::{drop_condition, Result};

fn counts(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|(t, c)| (t.to_string(), *c)).collect()
}

fn main() -> Result<()> {
    let cases = [
        counts(&[("ab", 4), ("a", 1), ("b", 1), ("c", 4)]),
        counts(&[("ab", 1), ("a", 10), ("b", 10), ("c", 2)]),
        counts(&[("ab", 6), ("a", 6), ("b", 6)]),
    ];
    for c in &cases {
        for alpha in [1.5, 3.0] {
            let r = drop_condition(c, "ab", ("a", "b"), alpha)?;
            println!(
                "{c:?} α={alpha}: lhs {:.4} rhs {:.4} -> condition {}, H {:.4} -> {:.4}",
                r.lhs, r.rhs, r.condition_holds, r.entropy_before, r.entropy_after
            );
            assert_eq!(r.condition_holds, r.actual_increase);
        }
    }
    Ok(())
}
