//! Coalitions, matchings and coalition worths.
//!
//! A [`Matching`] is a set of basic coalitions (singletons, buyer-seller
//! pairs and buyer-middleman-seller triples). A middleman may mediate several
//! trades at once. Coalition worths are computed by reducing the coalition's
//! submarket to a two-sided assignment problem and solving it exactly;
//! [`brute_force_worth`] enumerates every matching instead and serves as the
//! independent check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assignment::max_weight_assignment;
use crate::error::{Error, Result};
use crate::model::{AgentId, Market, Matrix, Mediator, ReducedMarket, Side};
use crate::rational::Rat;

/// Default enumeration cap for brute-force routines: |B_T| * |S_T|.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 25;

/// An arbitrary set of agents, stored as sorted index lists per side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Coalition {
    pub buyers: Vec<usize>,
    pub middlemen: Vec<usize>,
    pub sellers: Vec<usize>,
}

fn normalize(v: &mut Vec<usize>) {
    v.sort_unstable();
    v.dedup();
}

impl Coalition {
    pub fn new(mut buyers: Vec<usize>, mut middlemen: Vec<usize>, mut sellers: Vec<usize>) -> Self {
        normalize(&mut buyers);
        normalize(&mut middlemen);
        normalize(&mut sellers);
        Coalition { buyers, middlemen, sellers }
    }

    pub fn grand(m: &Market) -> Self {
        Coalition {
            buyers: (0..m.num_buyers()).collect(),
            middlemen: (0..m.num_middlemen()).collect(),
            sellers: (0..m.num_sellers()).collect(),
        }
    }

    pub fn from_agents<I: IntoIterator<Item = AgentId>>(agents: I) -> Self {
        let mut c = Coalition::default();
        for a in agents {
            c.side_mut(a.side).push(a.index);
        }
        Coalition::new(c.buyers, c.middlemen, c.sellers)
    }

    fn side_mut(&mut self, side: Side) -> &mut Vec<usize> {
        match side {
            Side::Buyer => &mut self.buyers,
            Side::Middleman => &mut self.middlemen,
            Side::Seller => &mut self.sellers,
        }
    }

    pub fn side(&self, side: Side) -> &[usize] {
        match side {
            Side::Buyer => &self.buyers,
            Side::Middleman => &self.middlemen,
            Side::Seller => &self.sellers,
        }
    }

    pub fn contains(&self, a: AgentId) -> bool {
        self.side(a.side).binary_search(&a.index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.buyers.len() + self.middlemen.len() + self.sellers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn agents(&self) -> Vec<AgentId> {
        self.buyers
            .iter()
            .map(|&i| AgentId::buyer(i))
            .chain(self.middlemen.iter().map(|&j| AgentId::middleman(j)))
            .chain(self.sellers.iter().map(|&k| AgentId::seller(k)))
            .collect()
    }

    pub fn without(&self, a: AgentId) -> Self {
        let mut c = self.clone();
        c.side_mut(a.side).retain(|&x| x != a.index);
        c
    }

    pub fn with(&self, a: AgentId) -> Self {
        let mut c = self.clone();
        c.side_mut(a.side).push(a.index);
        Coalition::new(c.buyers, c.middlemen, c.sellers)
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.agents().into_iter().all(|a| other.contains(a))
    }

    /// Decodes a bitmask over `m.agents()` order (buyers, middlemen, sellers).
    pub fn from_mask(m: &Market, mask: u64) -> Self {
        let (ni, nj) = (m.num_buyers(), m.num_middlemen());
        let n = m.num_agents();
        let mut c = Coalition::default();
        for bit in 0..n {
            if mask >> bit & 1 == 1 {
                if bit < ni {
                    c.buyers.push(bit);
                } else if bit < ni + nj {
                    c.middlemen.push(bit - ni);
                } else {
                    c.sellers.push(bit - ni - nj);
                }
            }
        }
        c
    }

    pub fn mask(&self, m: &Market) -> u64 {
        let (ni, nj) = (m.num_buyers(), m.num_middlemen());
        let mut mask = 0u64;
        for &i in &self.buyers {
            mask |= 1 << i;
        }
        for &j in &self.middlemen {
            mask |= 1 << (ni + j);
        }
        for &k in &self.sellers {
            mask |= 1 << (ni + nj + k);
        }
        mask
    }

    pub fn check_within(&self, m: &Market) -> Result<()> {
        match self.agents().into_iter().find(|a| !m.contains(*a)) {
            Some(a) => Err(Error::UnknownAgent(a)),
            None => Ok(()),
        }
    }
}

impl FromStr for Coalition {
    type Err = Error;

    /// Comma-separated agent labels, e.g. `b1,m1,s1,s2`.
    fn from_str(s: &str) -> Result<Self> {
        let agents = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(AgentId::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(Coalition::from_agents(agents))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.agents().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}

/// A singleton, a direct buyer-seller pair, or a mediated triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicCoalition {
    Singleton(AgentId),
    Pair { buyer: usize, seller: usize },
    Triple { buyer: usize, middleman: usize, seller: usize },
}

impl BasicCoalition {
    pub fn trade(buyer: usize, mediator: Mediator, seller: usize) -> Self {
        match mediator {
            Mediator::Direct => BasicCoalition::Pair { buyer, seller },
            Mediator::Via(middleman) => BasicCoalition::Triple { buyer, middleman, seller },
        }
    }

    pub fn members(&self) -> Vec<AgentId> {
        match *self {
            BasicCoalition::Singleton(a) => vec![a],
            BasicCoalition::Pair { buyer, seller } => vec![AgentId::buyer(buyer), AgentId::seller(seller)],
            BasicCoalition::Triple { buyer, middleman, seller } => vec![
                AgentId::buyer(buyer),
                AgentId::middleman(middleman),
                AgentId::seller(seller),
            ],
        }
    }

    /// `(buyer, mediator, seller)` for pairs and triples.
    pub fn as_trade(&self) -> Option<(usize, Mediator, usize)> {
        match *self {
            BasicCoalition::Singleton(_) => None,
            BasicCoalition::Pair { buyer, seller } => Some((buyer, Mediator::Direct, seller)),
            BasicCoalition::Triple { buyer, middleman, seller } => {
                Some((buyer, Mediator::Via(middleman), seller))
            }
        }
    }

    pub fn contains(&self, a: AgentId) -> bool {
        self.members().contains(&a)
    }
}

impl fmt::Display for BasicCoalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasicCoalition::Singleton(a) => write!(f, "{{{a}}}"),
            BasicCoalition::Pair { buyer, seller } => {
                write!(f, "({}, {})", AgentId::buyer(buyer), AgentId::seller(seller))
            }
            BasicCoalition::Triple { buyer, middleman, seller } => write!(
                f,
                "({}, {}, {})",
                AgentId::buyer(buyer),
                AgentId::middleman(middleman),
                AgentId::seller(seller)
            ),
        }
    }
}

impl Serialize for BasicCoalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A collection of basic coalitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Matching(BTreeSet<BasicCoalition>);

impl Matching {
    pub fn new<I: IntoIterator<Item = BasicCoalition>>(elements: I) -> Self {
        Matching(elements.into_iter().collect())
    }

    pub fn elements(&self) -> impl Iterator<Item = &BasicCoalition> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: &BasicCoalition) -> bool {
        self.0.contains(e)
    }

    /// All pairs and triples as `(buyer, mediator, seller)`.
    pub fn trades(&self) -> impl Iterator<Item = (usize, Mediator, usize)> + '_ {
        self.0.iter().filter_map(BasicCoalition::as_trade)
    }

    /// The element containing `a`, if any (first in order when several do).
    pub fn element_of(&self, a: AgentId) -> Option<&BasicCoalition> {
        self.0.iter().find(|e| e.contains(a))
    }

    /// Buyer and seller partners of middleman `j`.
    pub fn partners(&self, j: usize) -> (Vec<usize>, Vec<usize>) {
        let mut b = Vec::new();
        let mut s = Vec::new();
        for (i, med, k) in self.trades() {
            if med == Mediator::Via(j) {
                b.push(i);
                s.push(k);
            }
        }
        normalize(&mut b);
        normalize(&mut s);
        (b, s)
    }

    /// Middlemen mediating at least one trade.
    pub fn active_middlemen(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .trades()
            .filter_map(|(_, med, _)| match med {
                Mediator::Via(j) => Some(j),
                Mediator::Direct => None,
            })
            .collect();
        normalize(&mut v);
        v
    }

    /// Pairs traded through one mediator (direct trade included).
    pub fn layer_pairs(&self, mediator: Mediator) -> Vec<(usize, usize)> {
        self.trades().filter(|t| t.1 == mediator).map(|(i, _, k)| (i, k)).collect()
    }

    /// Trades grouped by mediator.
    pub fn by_mediator(&self) -> BTreeMap<Mediator, Vec<(usize, usize)>> {
        let mut out: BTreeMap<Mediator, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, med, k) in self.trades() {
            out.entry(med).or_default().push((i, k));
        }
        out
    }

    pub fn singletons(&self, side: Side) -> Vec<usize> {
        self.0
            .iter()
            .filter_map(|e| match e {
                BasicCoalition::Singleton(a) if a.side == side => Some(a.index),
                _ => None,
            })
            .collect()
    }

    /// Seller matched to buyer `i`, if any.
    pub fn partner_of_buyer(&self, i: usize) -> Option<(Mediator, usize)> {
        self.trades().find(|t| t.0 == i).map(|(_, med, k)| (med, k))
    }

    pub fn partner_of_seller(&self, k: usize) -> Option<(usize, Mediator)> {
        self.trades().find(|t| t.2 == k).map(|(i, med, _)| (i, med))
    }

    /// Adds every middleman of `0..num_middlemen` that mediates nothing as a
    /// singleton.
    pub fn with_idle_middlemen(&self, num_middlemen: usize) -> Matching {
        let active = self.active_middlemen();
        let mut out = self.0.clone();
        for j in 0..num_middlemen {
            if active.binary_search(&j).is_err() {
                out.insert(BasicCoalition::Singleton(AgentId::middleman(j)));
            }
        }
        Matching(out)
    }
}

impl FromIterator<BasicCoalition> for Matching {
    fn from_iter<I: IntoIterator<Item = BasicCoalition>>(iter: I) -> Self {
        Matching::new(iter)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // trades first, then singletons
        let mut parts: Vec<String> = self
            .0
            .iter()
            .filter(|e| e.as_trade().is_some())
            .map(ToString::to_string)
            .collect();
        parts.extend(
            self.0.iter().filter(|e| e.as_trade().is_none()).map(ToString::to_string),
        );
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// JSON shape: `{"pairs": [[i,k]], "triples": [[i,j,k]], "singletons": ["m1"]}`
/// with 0-based indices and 1-based singleton labels.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct MatchingDoc {
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
    #[serde(default)]
    pub triples: Vec<[usize; 3]>,
    #[serde(default)]
    pub singletons: Vec<AgentId>,
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut doc = MatchingDoc::default();
        for e in &self.0 {
            match *e {
                BasicCoalition::Singleton(a) => doc.singletons.push(a),
                BasicCoalition::Pair { buyer, seller } => doc.pairs.push([buyer, seller]),
                BasicCoalition::Triple { buyer, middleman, seller } => {
                    doc.triples.push([buyer, middleman, seller])
                }
            }
        }
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatchingDoc::deserialize(d)?;
        Ok(doc
            .pairs
            .iter()
            .map(|&[buyer, seller]| BasicCoalition::Pair { buyer, seller })
            .chain(
                doc.triples
                    .iter()
                    .map(|&[buyer, middleman, seller]| BasicCoalition::Triple { buyer, middleman, seller }),
            )
            .chain(doc.singletons.iter().map(|&a| BasicCoalition::Singleton(a)))
            .collect())
    }
}

/// A violated clause of the matching definition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum MatchingViolation {
    /// (i) an element has an agent outside the target coalition.
    #[serde(rename = "i")]
    OutsideCoalition { element: String, agent: AgentId },
    /// (ii) a buyer or seller of the coalition is in no element.
    #[serde(rename = "ii")]
    Uncovered { agent: AgentId },
    /// (iii) a buyer or seller is in two distinct elements.
    #[serde(rename = "iii")]
    Overlap { agent: AgentId },
    /// (iv) a singleton middleman also appears in another element.
    #[serde(rename = "iv")]
    SingletonReused { middleman: AgentId },
}

impl MatchingViolation {
    pub fn clause(&self) -> &'static str {
        match self {
            MatchingViolation::OutsideCoalition { .. } => "i",
            MatchingViolation::Uncovered { .. } => "ii",
            MatchingViolation::Overlap { .. } => "iii",
            MatchingViolation::SingletonReused { .. } => "iv",
        }
    }
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::OutsideCoalition { element, agent } => {
                write!(f, "(i) {element} contains {agent} outside the coalition")
            }
            MatchingViolation::Uncovered { agent } => write!(f, "(ii) {agent} is not covered"),
            MatchingViolation::Overlap { agent } => write!(f, "(iii) {agent} appears twice"),
            MatchingViolation::SingletonReused { middleman } => {
                write!(f, "(iv) singleton {middleman} also mediates a trade")
            }
        }
    }
}

/// Checks clauses (i)-(iv) of the matching definition for coalition `t`.
pub fn validate_matching(m: &Market, t: &Coalition, mu: &Matching) -> Result<Vec<MatchingViolation>> {
    t.check_within(m)?;
    for e in mu.elements() {
        if let Some(a) = e.members().into_iter().find(|a| !m.contains(*a)) {
            return Err(Error::UnknownAgent(a));
        }
    }
    let mut out = Vec::new();
    for e in mu.elements() {
        if let Some(a) = e.members().into_iter().find(|a| !t.contains(*a)) {
            out.push(MatchingViolation::OutsideCoalition { element: e.to_string(), agent: a });
        }
    }
    let traders = t
        .buyers
        .iter()
        .map(|&i| AgentId::buyer(i))
        .chain(t.sellers.iter().map(|&k| AgentId::seller(k)));
    for a in traders {
        match mu.elements().filter(|e| e.contains(a)).count() {
            0 => out.push(MatchingViolation::Uncovered { agent: a }),
            1 => {}
            _ => out.push(MatchingViolation::Overlap { agent: a }),
        }
    }
    for e in mu.elements() {
        if let BasicCoalition::Singleton(a) = e {
            if a.side == Side::Middleman && mu.elements().filter(|f| f.contains(*a)).count() > 1 {
                out.push(MatchingViolation::SingletonReused { middleman: *a });
            }
        }
    }
    Ok(out)
}

/// Total surplus of the trades in `mu`; singletons contribute nothing.
pub fn matching_value(m: &Market, mu: &Matching) -> Rat {
    mu.trades().map(|(i, med, k)| m.surplus(med, i, k)).sum()
}

/// A matching of the two-sided market: disjoint buyer-seller pairs plus the
/// buyers and sellers left alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TwoSidedMatching {
    pub pairs: Vec<(usize, usize)>,
    pub single_buyers: Vec<usize>,
    pub single_sellers: Vec<usize>,
}

impl TwoSidedMatching {
    pub fn new(mut pairs: Vec<(usize, usize)>, mut single_buyers: Vec<usize>, mut single_sellers: Vec<usize>) -> Self {
        pairs.sort_unstable();
        normalize(&mut single_buyers);
        normalize(&mut single_sellers);
        TwoSidedMatching { pairs, single_buyers, single_sellers }
    }

    pub fn value(&self, surplus: &Matrix) -> Rat {
        self.pairs.iter().map(|&(i, k)| &surplus[i][k]).sum()
    }

    pub fn partner_of_seller(&self, k: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == k).map(|p| p.0)
    }

    pub fn partner_of_buyer(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == i).map(|p| p.1)
    }
}

/// Drops middlemen: every trade becomes a pair, singleton buyers and sellers
/// stay single.
pub fn project(mu: &Matching) -> TwoSidedMatching {
    TwoSidedMatching::new(
        mu.trades().map(|(i, _, k)| (i, k)).collect(),
        mu.singletons(Side::Buyer),
        mu.singletons(Side::Seller),
    )
}

/// Routes every pair of `sigma` through its best mediator; middlemen of the
/// reduction that end up mediating nothing become singletons.
pub fn lift(r: &ReducedMarket, sigma: &TwoSidedMatching) -> Matching {
    let mut out: BTreeSet<BasicCoalition> = sigma
        .pairs
        .iter()
        .map(|&(i, k)| BasicCoalition::trade(i, r.best[i][k], k))
        .collect();
    out.extend(sigma.single_buyers.iter().map(|&i| BasicCoalition::Singleton(AgentId::buyer(i))));
    out.extend(sigma.single_sellers.iter().map(|&k| BasicCoalition::Singleton(AgentId::seller(k))));
    let used: BTreeSet<usize> = out
        .iter()
        .filter_map(|e| match e {
            BasicCoalition::Triple { middleman, .. } => Some(*middleman),
            _ => None,
        })
        .collect();
    for &j in &r.middlemen {
        if !used.contains(&j) {
            out.insert(BasicCoalition::Singleton(AgentId::middleman(j)));
        }
    }
    Matching(out)
}

/// Maximum-surplus two-sided matching between the given rows and columns.
/// Pairs contributing zero are left unmatched.
pub fn optimal_two_sided(surplus: &Matrix, rows: &[usize], cols: &[usize]) -> (TwoSidedMatching, Rat) {
    let sub: Matrix = rows
        .iter()
        .map(|&i| cols.iter().map(|&k| surplus[i][k].clone()).collect())
        .collect();
    let (assign, value) = max_weight_assignment(&sub);
    let mut pairs = Vec::new();
    let mut single_buyers = Vec::new();
    let mut used = vec![false; cols.len()];
    for (ri, a) in assign.iter().enumerate() {
        match a {
            Some(ci) => {
                pairs.push((rows[ri], cols[*ci]));
                used[*ci] = true;
            }
            None => single_buyers.push(rows[ri]),
        }
    }
    let single_sellers = cols.iter().zip(&used).filter(|(_, u)| !**u).map(|(k, _)| *k).collect();
    (TwoSidedMatching::new(pairs, single_buyers, single_sellers), value)
}

/// Worth of coalition `t`: the two-sided optimum over `B_T x S_T` of the
/// entrywise best surplus among direct trade and the middlemen in `t`.
pub fn coalition_worth(m: &Market, t: &Coalition) -> Rat {
    if t.buyers.is_empty() || t.sellers.is_empty() {
        return Rat::zero();
    }
    let red = m.reduce_over(&t.middlemen);
    optimal_two_sided(&red.surplus, &t.buyers, &t.sellers).1
}

/// An optimal `t`-matching and its value.
pub fn optimal_matching(m: &Market, t: &Coalition) -> (Matching, Rat) {
    let red = m.reduce_over(&t.middlemen);
    let (sigma, value) = optimal_two_sided(&red.surplus, &t.buyers, &t.sellers);
    (lift(&red, &sigma), value)
}

fn check_cap(t: &Coalition, cap: u64) -> Result<()> {
    let needed = (t.buyers.len() * t.sellers.len()) as u64;
    if needed > cap {
        return Err(Error::CapExceeded { what: "buyer-seller product", needed, cap });
    }
    Ok(())
}

/// Worth of `t` by exhaustive enumeration: every partial injection of buyers
/// into sellers, with every pair independently assigned direct trade or one
/// of the coalition's middlemen.
pub fn brute_force_worth(m: &Market, t: &Coalition, cap: u64) -> Result<Rat> {
    check_cap(t, cap)?;
    let mut best = Rat::zero();
    let mut used = vec![false; t.sellers.len()];
    enumerate(m, t, 0, &mut used, &Rat::zero(), &mut |_, v| {
        if *v > best {
            best = v.clone();
        }
    }, &mut Vec::new(), false);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    m: &Market,
    t: &Coalition,
    bi: usize,
    used: &mut Vec<bool>,
    acc: &Rat,
    visit: &mut dyn FnMut(&[(usize, Mediator, usize)], &Rat),
    trail: &mut Vec<(usize, Mediator, usize)>,
    positive_only: bool,
) {
    if bi == t.buyers.len() {
        visit(trail, acc);
        return;
    }
    let i = t.buyers[bi];
    enumerate(m, t, bi + 1, used, acc, visit, trail, positive_only);
    for si in 0..t.sellers.len() {
        if used[si] {
            continue;
        }
        let k = t.sellers[si];
        used[si] = true;
        let mediators = std::iter::once(Mediator::Direct).chain(t.middlemen.iter().map(|&j| Mediator::Via(j)));
        for med in mediators {
            let s = m.surplus(med, i, k);
            if positive_only && !s.is_positive() {
                continue;
            }
            trail.push((i, med, k));
            enumerate(m, t, bi + 1, used, &(acc + s), visit, trail, positive_only);
            trail.pop();
        }
        used[si] = false;
    }
}

/// Every optimal `t`-matching whose trades all carry positive surplus, with
/// idle buyers, sellers and middlemen as singletons. Sorted and deduplicated.
pub fn all_optimal_matchings(m: &Market, t: &Coalition, cap: u64) -> Result<Vec<Matching>> {
    check_cap(t, cap)?;
    let target = coalition_worth(m, t);
    let mut found = BTreeSet::new();
    let mut used = vec![false; t.sellers.len()];
    enumerate(m, t, 0, &mut used, &Rat::zero(), &mut |trades, v| {
        if *v != target {
            return;
        }
        let mut el: BTreeSet<BasicCoalition> =
            trades.iter().map(|&(i, med, k)| BasicCoalition::trade(i, med, k)).collect();
        for &i in &t.buyers {
            if !trades.iter().any(|x| x.0 == i) {
                el.insert(BasicCoalition::Singleton(AgentId::buyer(i)));
            }
        }
        for &k in &t.sellers {
            if !trades.iter().any(|x| x.2 == k) {
                el.insert(BasicCoalition::Singleton(AgentId::seller(k)));
            }
        }
        for &j in &t.middlemen {
            if !trades.iter().any(|x| x.1 == Mediator::Via(j)) {
                el.insert(BasicCoalition::Singleton(AgentId::middleman(j)));
            }
        }
        found.insert(el.into_iter().collect::<Vec<_>>());
    }, &mut Vec::new(), true);
    Ok(found.into_iter().map(Matching::new).collect())
}
