//! Exploring the core: marginal contributions, side-optimal points, vertices
//! and membership certificates.

use middlemen::fixtures::three_broker_market;
use middlemen::solution::{
    buyer_optimal, check_core, core_vertices, embed_facet, marginal_contribution, seller_optimal, DEFAULT_VERTEX_CAP,
};
use middlemen::{CheckMode, PayoffVector, Rat};

fn main() -> middlemen::Result<()> {
    let market = three_broker_market();

    for agent in market.agents() {
        println!("mc({agent}) = {}", marginal_contribution(&market, agent));
    }
    println!("buyer-optimal:  {}", buyer_optimal(&market));
    println!("seller-optimal: {}", seller_optimal(&market));

    let vertices = core_vertices(&market, DEFAULT_VERTEX_CAP)?;
    println!("{} core vertices:", vertices.len());
    for v in &vertices {
        let tag = if v.y.iter().all(Rat::is_zero) { " (no middleman paid)" } else { "" };
        println!("  {v}{tag}");
    }

    // A two-sided core point lifts to the core with zero middleman payoffs.
    let lifted = embed_facet(&market, &[Rat::from_int(0), Rat::from_int(8)], &[Rat::from_int(2), Rat::from_int(2)])?;
    println!("lifted {lifted}: {}", check_core(&market, &lifted, CheckMode::Reduced)?);

    let greedy: PayoffVector = "0,2; 2,6,0; 0,2".parse()?;
    for mode in [CheckMode::BruteForce, CheckMode::Reduced] {
        println!("{greedy} ({mode:?}): {}", check_core(&market, &greedy, mode)?);
    }
    Ok(())
}
