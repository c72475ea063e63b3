//! How much can middlemen extract from the core, alone and together?

use middlemen::fixtures::three_broker_market;
use middlemen::solution::{max_middleman_group_payoff, middleman_optimal_exists};

fn main() {
    let market = three_broker_market();
    let j = market.num_middlemen();
    for mask in 1..(1usize << j) {
        let group: Vec<usize> = (0..j).filter(|b| mask >> b & 1 == 1).collect();
        let names: Vec<String> = group.iter().map(|b| format!("m{}", b + 1)).collect();
        println!("max core payoff of {{{}}}: {}", names.join(", "), max_middleman_group_payoff(&market, &group));
    }

    let report = middleman_optimal_exists(&market);
    match (report.witness, report.certificate) {
        (Some(w), _) => println!("every middleman can be paid its maximum at once: {w}"),
        (None, Some(c)) => {
            let names: Vec<String> = c.group.iter().map(ToString::to_string).collect();
            println!(
                "no core point pays every middleman its maximum: {} individually sum to {} but jointly get at most {}",
                names.join(" and "),
                c.sum_of_individual_max,
                c.group_max
            );
        }
        (None, None) => println!("no middleman-optimal core point"),
    }
}
