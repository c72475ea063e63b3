#![allow(dead_code)]

use middlemen::generate::corpus;
use middlemen::solution::{buyer_optimal, maximize_over_core, seller_optimal};
use middlemen::{Market, PayoffVector, Rat};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 20_240_601;
pub const CORPUS_SIZE: usize = 200;

pub fn markets() -> Vec<Market> {
    corpus(CORPUS_SEED, CORPUS_SIZE)
}

pub fn random_rat<R: Rng>(rng: &mut R, max: i64) -> Rat {
    Rat::frac(rng.gen_range(0..=2 * max), 2)
}

fn combine(a: &PayoffVector, b: &PayoffVector, t: &Rat) -> PayoffVector {
    let one_minus = Rat::one() - t;
    let mix = |u: &[Rat], v: &[Rat]| u.iter().zip(v).map(|(p, q)| p * t + q * &one_minus).collect();
    PayoffVector::new(mix(&a.x, &b.x), mix(&a.y, &b.y), mix(&a.z, &b.z))
}

/// Core points: side-optimal points, optima of random objectives and convex
/// combinations of those.
pub fn core_points(m: &Market, rng: &mut ChaCha8Rng, count: usize) -> Vec<PayoffVector> {
    let mut extreme = vec![buyer_optimal(m), seller_optimal(m)];
    for _ in 0..4 {
        let objective: Vec<Rat> = (0..m.num_agents()).map(|_| Rat::from_int(rng.gen_range(-3..=3))).collect();
        extreme.push(maximize_over_core(m, &objective).expect("sized objective").1);
    }
    let mut out = extreme.clone();
    while out.len() < count {
        let a = extreme.choose(rng).expect("non-empty");
        let b = extreme.choose(rng).expect("non-empty");
        let t = Rat::frac(rng.gen_range(0..=4), 4);
        out.push(combine(a, b, &t));
    }
    out.truncate(count);
    out
}

/// Moves `delta` from one coordinate to another (efficiency kept), or adds
/// it to one coordinate (efficiency broken).
pub fn perturb(p: &PayoffVector, rng: &mut ChaCha8Rng) -> PayoffVector {
    let mut flat = p.to_flat();
    let n = flat.len();
    let delta = Rat::frac(rng.gen_range(1..=6), 2);
    let from = rng.gen_range(0..n);
    if rng.gen_bool(0.8) {
        let to = rng.gen_range(0..n);
        flat[from] -= &delta;
        flat[to] += &delta;
    } else {
        flat[from] += &delta;
    }
    PayoffVector::new(
        flat[..p.x.len()].to_vec(),
        flat[p.x.len()..p.x.len() + p.y.len()].to_vec(),
        flat[p.x.len() + p.y.len()..].to_vec(),
    )
}
