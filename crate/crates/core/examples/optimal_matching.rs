//! Optimal matching and coalition worths of a small market with two brokers.

use middlemen::fixtures::two_broker_market;
use middlemen::matching::{brute_force_worth, coalition_worth, optimal_matching, DEFAULT_BRUTE_FORCE_CAP};
use middlemen::{Coalition, Mediator};

fn main() -> middlemen::Result<()> {
    let market = two_broker_market();
    let grand = Coalition::grand(&market);

    let (mu, value) = optimal_matching(&market, &grand);
    println!("optimal matching {} with value {value}", mu.with_idle_middlemen(market.num_middlemen()));

    // The same value from exhaustive enumeration.
    let brute = brute_force_worth(&market, &grand, DEFAULT_BRUTE_FORCE_CAP)?;
    println!("brute force agrees: {}", brute == value);

    let reduced = market.reduce();
    for (i, row) in reduced.surplus.iter().enumerate() {
        for (k, a) in row.iter().enumerate() {
            let via = match reduced.best[i][k] {
                Mediator::Direct => "direct".to_string(),
                Mediator::Via(j) => format!("m{}", j + 1),
            };
            println!("a*(b{}, s{}) = {a} via {via}", i + 1, k + 1);
        }
    }

    for label in ["b1,m1,s1,s2", "b1,b2,s1,s2", "b2,m1,s1"] {
        let t: Coalition = label.parse()?;
        println!("v({t}) = {}", coalition_worth(&market, &t));
    }
    Ok(())
}
