//! A core allocation that differentiated middleman fees support but a single
//! fee per middleman cannot.

use middlemen::equilibrium::{check_equilibrium, fixed_fee_supportable};
use middlemen::fixtures::two_broker_detailed;
use middlemen::PayoffVector;

fn main() -> middlemen::Result<()> {
    let detailed = two_broker_detailed();
    let x: PayoffVector = "3,5; 0,3; 1,0".parse()?;
    let report = fixed_fee_supportable(&detailed, &x)?;

    println!("differentiated fees: {}", report.differentiated.prices.to_string().replace('\n', "; "));
    println!("  {}", check_equilibrium(&detailed, &report.differentiated)?);
    println!("uniform fees supportable: {}", report.supportable);
    for attempt in &report.attempts {
        println!("matching {}", attempt.matching);
        for f in &attempt.fees {
            println!("  {} would charge {} on each of {} trades", f.middleman, f.fee, f.trades.len());
        }
        for c in &attempt.conflicts {
            println!("  {} nets {} on {} instead of {}", c.buyer, c.net, c.trade, c.target);
        }
    }
    Ok(())
}
