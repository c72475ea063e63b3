//! Seeded random markets and a quick consistency sweep over them.

use middlemen::generate::{seeded_market, MarketShape, DEFAULT_RANGE};
use middlemen::matching::{brute_force_worth, coalition_worth, DEFAULT_BRUTE_FORCE_CAP};
use middlemen::solution::{buyer_optimal, check_core, seller_optimal};
use middlemen::{CheckMode, Coalition};

fn main() -> middlemen::Result<()> {
    let shape = MarketShape::new(3, 2, 3);
    println!("{}", serde_json::to_string_pretty(&seeded_market(7, shape, DEFAULT_RANGE)).expect("serialisable"));

    let mut checked = 0;
    for seed in 0..20 {
        let m = seeded_market(seed, shape, DEFAULT_RANGE);
        let grand = Coalition::grand(&m);
        assert_eq!(coalition_worth(&m, &grand), brute_force_worth(&m, &grand, DEFAULT_BRUTE_FORCE_CAP)?);
        for p in [buyer_optimal(&m), seller_optimal(&m)] {
            assert!(check_core(&m, &p, CheckMode::BruteForce)?.is_in_core());
        }
        checked += 1;
    }
    println!("{checked} random markets: worths agree and side-optimal points are in the core");
    Ok(())
}
