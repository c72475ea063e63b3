//! Random valid markets.
//!
//! Direct surpluses are uniform integers in `0..=range`; every middleman layer
//! adds an independent uniform increment in `0..=range` to the direct entry,
//! so dominance holds by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Market, Matrix};
use crate::rational::Rat;

pub const DEFAULT_RANGE: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarketShape {
    pub buyers: usize,
    pub middlemen: usize,
    pub sellers: usize,
}

impl MarketShape {
    pub fn new(buyers: usize, middlemen: usize, sellers: usize) -> Self {
        MarketShape { buyers, middlemen, sellers }
    }
}

pub fn random_market<R: Rng>(rng: &mut R, shape: MarketShape, range: i64) -> Market {
    let direct: Matrix = (0..shape.buyers)
        .map(|_| (0..shape.sellers).map(|_| Rat::from_int(rng.gen_range(0..=range))).collect())
        .collect();
    let layers = (0..shape.middlemen)
        .map(|_| {
            direct
                .iter()
                .map(|row| row.iter().map(|a| a + Rat::from_int(rng.gen_range(0..=range))).collect())
                .collect()
        })
        .collect();
    Market::new(direct, layers).expect("generated shapes are consistent")
}

/// Deterministic market for a seed.
pub fn seeded_market(seed: u64, shape: MarketShape, range: i64) -> Market {
    random_market(&mut ChaCha8Rng::seed_from_u64(seed), shape, range)
}

/// A reproducible corpus of markets with 1..=3 buyers, 0..=3 middlemen and
/// 1..=3 sellers.
pub fn corpus(seed: u64, count: usize) -> Vec<Market> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let shape = MarketShape::new(rng.gen_range(1..=3), rng.gen_range(0..=3), rng.gen_range(1..=3));
            random_market(&mut rng, shape, DEFAULT_RANGE)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_markets_are_valid_and_deterministic() {
        let shape = MarketShape::new(3, 2, 3);
        let a = seeded_market(7, shape, DEFAULT_RANGE);
        assert!(a.validate().is_empty());
        assert_eq!(a, seeded_market(7, shape, DEFAULT_RANGE));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Market>(&json).unwrap(), a);
        for m in corpus(1, 30) {
            assert!(m.validate().is_empty());
        }
    }
}
