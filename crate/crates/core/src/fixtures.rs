//! Small reference markets with known answers.

use crate::model::{DetailedMarket, Market};

/// Two buyers, two middlemen, two sellers. Direct surplus `[[3,2],[1,5]]`,
/// `m1` layer `[[4,3],[3,5]]`, `m2` layer `[[6,2],[2,6]]`. Optimal value 12,
/// reached by routing both diagonal pairs through `m2`.
pub fn two_broker_market() -> Market {
    Market::from_ints(
        &[&[3, 2], &[1, 5]],
        &[&[&[4, 3], &[3, 5]], &[&[6, 2], &[2, 6]]],
    )
    .expect("fixture shape")
}

/// Two buyers, three middlemen, two sellers, no direct surplus. Each
/// middleman is best for different pairs; no core allocation gives every
/// middleman its maximum core payoff at once.
pub fn three_broker_market() -> Market {
    Market::from_ints(
        &[&[0, 0], &[0, 0]],
        &[
            &[&[2, 0], &[0, 0]],
            &[&[0, 0], &[0, 10]],
            &[&[0, 2], &[4, 0]],
        ],
    )
    .expect("fixture shape")
}

/// [`two_broker_market`] with zero seller and mediation costs.
pub fn two_broker_detailed() -> DetailedMarket {
    DetailedMarket::zero_cost(&two_broker_market())
}
