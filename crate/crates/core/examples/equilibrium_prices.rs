//! Competitive equilibrium prices: from a core allocation to prices and back,
//! on a market with explicit valuations and costs.

use middlemen::equilibrium::{check_compatible_optimal, demand_set, equilibrium_payoff, prices_from_core};
use middlemen::solution::{buyer_optimal, seller_optimal};
use middlemen::{DetailedMarket, Rat};

fn q(s: &str) -> Rat {
    s.parse().expect("valid number")
}

fn main() -> middlemen::Result<()> {
    // Two buyers, one middleman, two sellers.
    let detailed = DetailedMarket {
        valuations: vec![vec![q("7.5"), q("4")], vec![q("5"), q("9")]],
        seller_costs: vec![q("1"), q("2")],
        direct_transaction_costs: vec![vec![q("2"), q("1")], vec![q("1"), q("1.5")]],
        mediated_transaction_costs: vec![vec![vec![q("0.5"), q("0.5")]], vec![vec![q("0.5"), q("0.5")]]],
        mediation_costs: vec![vec![vec![q("1"), q("0.5")]], vec![vec![q("0.5"), q("1")]]],
    };
    let market = detailed.derive_surplus()?;
    println!("direct surplus {:?}", market.direct().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());

    for (name, x) in [("buyer-optimal", buyer_optimal(&market)), ("seller-optimal", seller_optimal(&market))] {
        let eq = prices_from_core(&detailed, &x, None)?;
        println!("{name} core point {x}");
        println!("  matching {}", eq.matching);
        println!("  prices {}", eq.prices.to_string().replace('\n', "; "));
        println!("  payoff back from prices {}", equilibrium_payoff(&detailed, &eq)?);
        println!("  matching optimal: {}", check_compatible_optimal(&detailed, &eq)?);
        for i in 0..market.num_buyers() {
            let d = demand_set(&detailed, i, &eq.prices)?;
            let items: Vec<String> = d.coalitions.iter().map(ToString::to_string).collect();
            println!("  demand of b{}: {} (net {})", i + 1, items.join(", "), d.net_value);
        }
    }
    Ok(())
}
