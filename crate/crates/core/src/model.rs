//! Market primitives.
//!
//! A [`Market`] is the abstract surplus form: a direct-trade matrix plus one
//! layer matrix per middleman. A [`DetailedMarket`] carries valuations and
//! costs, from which the surplus form is derived. [`ReducedMarket`] is the
//! two-sided assignment market obtained by taking, for each buyer-seller pair,
//! the best surplus over the available mediators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

pub type Matrix = Vec<Vec<Rat>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Buyer,
    Middleman,
    Seller,
}

impl Side {
    fn prefix(self) -> char {
        match self {
            Side::Buyer => 'b',
            Side::Middleman => 'm',
            Side::Seller => 's',
        }
    }
}

/// An agent, addressed by side and 0-based index. Displays as the 1-based
/// label `b1`, `m2`, `s3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub fn buyer(index: usize) -> Self {
        AgentId { side: Side::Buyer, index }
    }

    pub fn middleman(index: usize) -> Self {
        AgentId { side: Side::Middleman, index }
    }

    pub fn seller(index: usize) -> Self {
        AgentId { side: Side::Seller, index }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.prefix(), self.index + 1)
    }
}

impl FromStr for AgentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad agent label {s:?}, expected e.g. b1, m2, s3"));
        let mut chars = s.chars();
        let side = match chars.next().map(|c| c.to_ascii_lowercase()) {
            Some('b') => Side::Buyer,
            Some('m') => Side::Middleman,
            Some('s') => Side::Seller,
            _ => return Err(bad()),
        };
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(AgentId { side, index: n - 1 })
    }
}

impl Serialize for AgentId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Who mediates a buyer-seller trade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mediator {
    Direct,
    Via(usize),
}

impl fmt::Display for Mediator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mediator::Direct => f.write_str("direct"),
            Mediator::Via(j) => write!(f, "m{}", j + 1),
        }
    }
}

impl Serialize for Mediator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Abstract market with middlemen: direct surplus `a_ik` and per-middleman
/// layers `layers[j][i][k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Market {
    direct: Matrix,
    layers: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MarketViolation {
    NegativeDirect { buyer: AgentId, seller: AgentId, value: Rat },
    NegativeLayer { buyer: AgentId, middleman: AgentId, seller: AgentId, value: Rat },
    /// Mediated surplus below the direct surplus of the same pair.
    Dominance { buyer: AgentId, middleman: AgentId, seller: AgentId, mediated: Rat, direct: Rat },
}

impl fmt::Display for MarketViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarketViolation::NegativeDirect { buyer, seller, value } => {
                write!(f, "negative direct surplus {value} at ({buyer}, {seller})")
            }
            MarketViolation::NegativeLayer { buyer, middleman, seller, value } => {
                write!(f, "negative surplus {value} at ({buyer}, {middleman}, {seller})")
            }
            MarketViolation::Dominance { buyer, middleman, seller, mediated, direct } => write!(
                f,
                "mediated surplus {mediated} at ({buyer}, {middleman}, {seller}) is below direct surplus {direct}"
            ),
        }
    }
}

fn check_rect(m: &Matrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|row| row.len() != cols) {
        return Err(Error::Shape(format!("{what} must be {rows}x{cols}")));
    }
    Ok(())
}

impl Market {
    /// Builds a market after checking shapes. Values are not validated here;
    /// see [`Market::validate`].
    pub fn new(direct: Matrix, layers: Vec<Matrix>) -> Result<Self> {
        let buyers = direct.len();
        let sellers = direct.first().map_or(0, Vec::len);
        if buyers == 0 || sellers == 0 {
            return Err(Error::Shape("market needs at least one buyer and one seller".into()));
        }
        check_rect(&direct, buyers, sellers, "direct matrix")?;
        for (j, layer) in layers.iter().enumerate() {
            check_rect(layer, buyers, sellers, &format!("layer m{}", j + 1))?;
        }
        Ok(Market { direct, layers })
    }

    /// Builds and validates; any violation is an error.
    pub fn checked(direct: Matrix, layers: Vec<Matrix>) -> Result<Self> {
        let m = Market::new(direct, layers)?;
        m.ensure_valid()?;
        Ok(m)
    }

    pub fn from_ints(direct: &[&[i64]], layers: &[&[&[i64]]]) -> Result<Self> {
        let conv = |rows: &[&[i64]]| -> Matrix {
            rows.iter().map(|row| row.iter().map(|&v| Rat::from_int(v)).collect()).collect()
        };
        Market::new(conv(direct), layers.iter().map(|l| conv(l)).collect())
    }

    pub fn num_buyers(&self) -> usize {
        self.direct.len()
    }

    pub fn num_middlemen(&self) -> usize {
        self.layers.len()
    }

    pub fn num_sellers(&self) -> usize {
        self.direct[0].len()
    }

    pub fn num_agents(&self) -> usize {
        self.num_buyers() + self.num_middlemen() + self.num_sellers()
    }

    pub fn direct(&self) -> &Matrix {
        &self.direct
    }

    pub fn layers(&self) -> &[Matrix] {
        &self.layers
    }

    pub fn surplus(&self, mediator: Mediator, buyer: usize, seller: usize) -> &Rat {
        match mediator {
            Mediator::Direct => &self.direct[buyer][seller],
            Mediator::Via(j) => &self.layers[j][buyer][seller],
        }
    }

    pub fn contains(&self, agent: AgentId) -> bool {
        let n = match agent.side {
            Side::Buyer => self.num_buyers(),
            Side::Middleman => self.num_middlemen(),
            Side::Seller => self.num_sellers(),
        };
        agent.index < n
    }

    /// All agents in the fixed order buyers, middlemen, sellers.
    pub fn agents(&self) -> Vec<AgentId> {
        (0..self.num_buyers())
            .map(AgentId::buyer)
            .chain((0..self.num_middlemen()).map(AgentId::middleman))
            .chain((0..self.num_sellers()).map(AgentId::seller))
            .collect()
    }

    /// Lists every negative entry and every mediated entry below its direct
    /// counterpart. Empty means valid.
    pub fn validate(&self) -> Vec<MarketViolation> {
        let mut out = Vec::new();
        for (i, row) in self.direct.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_negative() {
                    out.push(MarketViolation::NegativeDirect {
                        buyer: AgentId::buyer(i),
                        seller: AgentId::seller(k),
                        value: a.clone(),
                    });
                }
            }
        }
        for i in 0..self.num_buyers() {
            for j in 0..self.num_middlemen() {
                for k in 0..self.num_sellers() {
                    let v = &self.layers[j][i][k];
                    let a = &self.direct[i][k];
                    if v.is_negative() {
                        out.push(MarketViolation::NegativeLayer {
                            buyer: AgentId::buyer(i),
                            middleman: AgentId::middleman(j),
                            seller: AgentId::seller(k),
                            value: v.clone(),
                        });
                    }
                    if v < a {
                        out.push(MarketViolation::Dominance {
                            buyer: AgentId::buyer(i),
                            middleman: AgentId::middleman(j),
                            seller: AgentId::seller(k),
                            mediated: v.clone(),
                            direct: a.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        match v.first() {
            None => Ok(()),
            Some(first) => Err(Error::InvalidMarket(v.len(), first.to_string())),
        }
    }

    /// Best surplus per pair over the direct matrix and all layers.
    pub fn reduce(&self) -> ReducedMarket {
        let all: Vec<usize> = (0..self.num_middlemen()).collect();
        self.reduce_over(&all)
    }

    /// Reduction restricted to the given middlemen (plus direct trade).
    ///
    /// The best mediator is the lowest-index middleman attaining the maximum;
    /// direct trade is reported only when no listed middleman reaches it.
    pub fn reduce_over(&self, middlemen: &[usize]) -> ReducedMarket {
        let (ni, nk) = (self.num_buyers(), self.num_sellers());
        let mut surplus = self.direct.clone();
        let mut best = vec![vec![Mediator::Direct; nk]; ni];
        for i in 0..ni {
            for k in 0..nk {
                let mut top: Option<(usize, &Rat)> = None;
                for &j in middlemen {
                    let v = &self.layers[j][i][k];
                    match top {
                        Some((tj, tv)) if v < tv || (v == tv && j > tj) => {}
                        _ => top = Some((j, v)),
                    }
                }
                if let Some((j, v)) = top {
                    if *v >= self.direct[i][k] {
                        surplus[i][k] = v.clone();
                        best[i][k] = Mediator::Via(j);
                    }
                }
            }
        }
        let mut middlemen = middlemen.to_vec();
        middlemen.sort_unstable();
        middlemen.dedup();
        ReducedMarket { surplus, best, middlemen }
    }

    /// Same market with agents removed or kept: the submarket induced by a
    /// subset of buyers, middlemen and sellers (indices re-numbered).
    pub fn submarket(&self, buyers: &[usize], middlemen: &[usize], sellers: &[usize]) -> Result<Market> {
        let pick = |m: &Matrix| -> Matrix {
            buyers.iter().map(|&i| sellers.iter().map(|&k| m[i][k].clone()).collect()).collect()
        };
        Market::new(pick(&self.direct), middlemen.iter().map(|&j| pick(&self.layers[j])).collect())
    }
}

/// The two-sided assignment market: best surplus and lowest-label best
/// mediator for every buyer-seller pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMarket {
    pub surplus: Matrix,
    pub best: Vec<Vec<Mediator>>,
    /// Middlemen the reduction ranged over, ascending.
    pub middlemen: Vec<usize>,
}

impl ReducedMarket {
    pub fn num_buyers(&self) -> usize {
        self.surplus.len()
    }

    pub fn num_sellers(&self) -> usize {
        self.surplus.first().map_or(0, Vec::len)
    }

    /// View as a market with no middlemen.
    pub fn as_two_sided_market(&self) -> Market {
        Market::new(self.surplus.clone(), Vec::new()).expect("reduced market keeps a valid shape")
    }
}

/// Canonical JSON document for [`Market`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarketDoc {
    pub buyers: usize,
    pub middlemen: usize,
    pub sellers: usize,
    pub direct: Matrix,
    #[serde(default)]
    pub layers: Vec<Matrix>,
}

impl From<&Market> for MarketDoc {
    fn from(m: &Market) -> Self {
        MarketDoc {
            buyers: m.num_buyers(),
            middlemen: m.num_middlemen(),
            sellers: m.num_sellers(),
            direct: m.direct.clone(),
            layers: m.layers.clone(),
        }
    }
}

impl TryFrom<MarketDoc> for Market {
    type Error = Error;

    fn try_from(doc: MarketDoc) -> Result<Market> {
        if doc.layers.len() != doc.middlemen {
            return Err(Error::Shape(format!(
                "declared {} middlemen but found {} layers",
                doc.middlemen,
                doc.layers.len()
            )));
        }
        if doc.buyers == 0 || doc.sellers == 0 {
            return Err(Error::Shape("market needs at least one buyer and one seller".into()));
        }
        check_rect(&doc.direct, doc.buyers, doc.sellers, "direct matrix")?;
        Market::new(doc.direct, doc.layers)
    }
}

impl Serialize for Market {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MarketDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Market {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MarketDoc::deserialize(d)?;
        Market::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Valuations and costs behind a market.
///
/// Three-index arrays are stored buyer-major: `mediated_transaction_costs[i][j][k]`
/// is `t_ijk` and `mediation_costs[i][j][k]` is middleman `j`'s cost `c_j^{ik}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetailedMarket {
    pub valuations: Matrix,
    pub seller_costs: Vec<Rat>,
    pub direct_transaction_costs: Matrix,
    pub mediated_transaction_costs: Vec<Matrix>,
    pub mediation_costs: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostOrderingViolation {
    pub buyer: AgentId,
    pub middleman: Option<AgentId>,
    pub seller: AgentId,
    pub detail: String,
}

impl fmt::Display for CostOrderingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.middleman {
            Some(j) => write!(f, "({}, {}, {}): {}", self.buyer, j, self.seller, self.detail),
            None => write!(f, "({}, {}): {}", self.buyer, self.seller, self.detail),
        }
    }
}

impl DetailedMarket {
    pub fn num_buyers(&self) -> usize {
        self.valuations.len()
    }

    pub fn num_sellers(&self) -> usize {
        self.seller_costs.len()
    }

    pub fn num_middlemen(&self) -> usize {
        self.mediation_costs.first().map_or(0, Vec::len)
    }

    /// Shape checks followed by the cost invariants: non-negative costs and
    /// `t_ik >= t_ijk + c_j^{ik}`.
    pub fn validate(&self) -> Result<()> {
        let (ni, nk) = (self.valuations.len(), self.seller_costs.len());
        if ni == 0 || nk == 0 {
            return Err(Error::Shape("market needs at least one buyer and one seller".into()));
        }
        check_rect(&self.valuations, ni, nk, "valuations")?;
        check_rect(&self.direct_transaction_costs, ni, nk, "direct_transaction_costs")?;
        let nj = self.num_middlemen();
        for (name, cube) in [
            ("mediated_transaction_costs", &self.mediated_transaction_costs),
            ("mediation_costs", &self.mediation_costs),
        ] {
            if cube.len() != ni {
                return Err(Error::Shape(format!("{name} must have {ni} buyer slices")));
            }
            for slice in cube {
                check_rect(slice, nj, nk, name)?;
            }
        }
        let violation = |i: usize, j: Option<usize>, k: usize, detail: String| {
            Error::CostOrdering(CostOrderingViolation {
                buyer: AgentId::buyer(i),
                middleman: j.map(AgentId::middleman),
                seller: AgentId::seller(k),
                detail,
            })
        };
        for (k, c) in self.seller_costs.iter().enumerate() {
            if c.is_negative() {
                return Err(violation(0, None, k, format!("negative seller cost {c}")));
            }
        }
        for i in 0..ni {
            for k in 0..nk {
                let t = &self.direct_transaction_costs[i][k];
                if t.is_negative() {
                    return Err(violation(i, None, k, format!("negative transaction cost {t}")));
                }
                for j in 0..nj {
                    let tm = &self.mediated_transaction_costs[i][j][k];
                    let cm = &self.mediation_costs[i][j][k];
                    if tm.is_negative() || cm.is_negative() {
                        return Err(violation(i, Some(j), k, "negative cost".into()));
                    }
                    if *t < tm + cm {
                        return Err(violation(
                            i,
                            Some(j),
                            k,
                            format!("direct transaction cost {t} below mediated cost {tm} + {cm}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `a_ik = max(0, h_ik - t_ik - c_k)`, `â_ijk = max(0, h_ik - t_ijk - c_j^{ik} - c_k)`.
    pub fn derive_surplus(&self) -> Result<Market> {
        self.validate()?;
        let (ni, nj, nk) = (self.num_buyers(), self.num_middlemen(), self.num_sellers());
        let direct = (0..ni)
            .map(|i| (0..nk).map(|k| self.direct_net(i, k).clip0()).collect())
            .collect();
        let layers = (0..nj)
            .map(|j| {
                (0..ni)
                    .map(|i| (0..nk).map(|k| self.mediated_net(i, j, k).clip0()).collect())
                    .collect()
            })
            .collect();
        Market::new(direct, layers)
    }

    /// Unclipped surplus of a direct trade.
    pub fn direct_net(&self, i: usize, k: usize) -> Rat {
        &self.valuations[i][k] - &self.direct_transaction_costs[i][k] - &self.seller_costs[k]
    }

    /// Unclipped surplus of a trade mediated by `j`.
    pub fn mediated_net(&self, i: usize, j: usize, k: usize) -> Rat {
        &self.valuations[i][k]
            - &self.mediated_transaction_costs[i][j][k]
            - &self.mediation_costs[i][j][k]
            - &self.seller_costs[k]
    }

    /// Buyer `i`'s gross valuation of a trade: `h_ik - t_ik` or `h_ik - t_ijk`.
    pub fn buyer_valuation(&self, i: usize, mediator: Mediator, k: usize) -> Rat {
        match mediator {
            Mediator::Direct => &self.valuations[i][k] - &self.direct_transaction_costs[i][k],
            Mediator::Via(j) => &self.valuations[i][k] - &self.mediated_transaction_costs[i][j][k],
        }
    }

    /// Cost-free embedding of an abstract market: every seller and mediation
    /// cost is zero, `h_ik` is the best surplus of the pair and transaction
    /// costs absorb the gap to each trade mode's surplus. Requires a valid market.
    pub fn zero_cost(m: &Market) -> DetailedMarket {
        let (ni, nj, nk) = (m.num_buyers(), m.num_middlemen(), m.num_sellers());
        let red = m.reduce();
        let h = red.surplus.clone();
        let t_direct = (0..ni)
            .map(|i| (0..nk).map(|k| &h[i][k] - &m.direct[i][k]).collect())
            .collect();
        let t_med = (0..ni)
            .map(|i| {
                (0..nj)
                    .map(|j| (0..nk).map(|k| &h[i][k] - &m.layers[j][i][k]).collect())
                    .collect()
            })
            .collect();
        DetailedMarket {
            valuations: h,
            seller_costs: vec![Rat::zero(); nk],
            direct_transaction_costs: t_direct,
            mediated_transaction_costs: t_med,
            mediation_costs: vec![vec![vec![Rat::zero(); nk]; nj]; ni],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::r;

    #[test]
    fn two_broker_market_is_valid() {
        let m = fixtures::two_broker_market();
        assert!(m.validate().is_empty());
        // â_112 = 3 >= 2 = a_12
        assert_eq!(*m.surplus(Mediator::Via(0), 0, 1), r(3));
        assert_eq!(m.direct()[0][1], r(2));
    }

    #[test]
    fn dominance_reversal_is_reported() {
        let m = Market::from_ints(&[&[5]], &[&[&[4]]]).unwrap();
        let v = m.validate();
        assert_eq!(v.len(), 1);
        match &v[0] {
            MarketViolation::Dominance { buyer, middleman, seller, .. } => {
                assert_eq!((buyer.to_string(), middleman.to_string(), seller.to_string()),
                    ("b1".into(), "m1".into(), "s1".into()));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(m.ensure_valid(), Err(Error::InvalidMarket(1, _))));
    }

    #[test]
    fn negative_entries_are_reported() {
        let m = Market::from_ints(&[&[-1]], &[&[&[-2]]]).unwrap();
        let v = m.validate();
        assert!(v.iter().any(|x| matches!(x, MarketViolation::NegativeDirect { .. })));
        assert!(v.iter().any(|x| matches!(x, MarketViolation::NegativeLayer { .. })));
    }

    #[test]
    fn all_zero_market_is_valid() {
        let m = Market::from_ints(&[&[0, 0], &[0, 0]], &[&[&[0, 0], &[0, 0]]]).unwrap();
        assert!(m.validate().is_empty());
    }

    #[test]
    fn shape_mismatch_is_structural() {
        let e = Market::from_ints(&[&[1, 2], &[3]], &[]).unwrap_err();
        assert!(e.is_structural());
        let e = Market::from_ints(&[&[1, 2]], &[&[&[1]]]).unwrap_err();
        assert!(e.is_structural());
        let e = Market::new(vec![], vec![]).unwrap_err();
        assert!(e.is_structural());
    }

    #[test]
    fn reduce_two_broker_market() {
        let red = fixtures::two_broker_market().reduce();
        assert_eq!(red.surplus, vec![vec![r(6), r(3)], vec![r(3), r(6)]]);
        assert_eq!(
            red.best,
            vec![
                vec![Mediator::Via(1), Mediator::Via(0)],
                vec![Mediator::Via(0), Mediator::Via(1)]
            ]
        );
    }

    #[test]
    fn reduce_three_broker_market() {
        let red = fixtures::three_broker_market().reduce();
        assert_eq!(red.surplus, vec![vec![r(2), r(2)], vec![r(4), r(10)]]);
        assert_eq!(
            red.best,
            vec![
                vec![Mediator::Via(0), Mediator::Via(2)],
                vec![Mediator::Via(2), Mediator::Via(1)]
            ]
        );
    }

    #[test]
    fn reduce_without_middlemen_is_direct() {
        let m = Market::from_ints(&[&[1, 4], &[2, 0]], &[]).unwrap();
        let red = m.reduce();
        assert_eq!(&red.surplus, m.direct());
        assert!(red.best.iter().flatten().all(|b| *b == Mediator::Direct));
    }

    #[test]
    fn reduce_breaks_ties_by_lowest_label() {
        let m = Market::from_ints(&[&[1]], &[&[&[3]], &[&[3]]]).unwrap();
        assert_eq!(m.reduce().best[0][0], Mediator::Via(0));
    }

    #[test]
    fn reducing_a_single_best_layer_is_idempotent() {
        let m = fixtures::three_broker_market();
        let red = m.reduce();
        let again = Market::new(m.direct().clone(), vec![red.surplus.clone()]).unwrap().reduce();
        assert_eq!(again.surplus, red.surplus);
    }

    fn single_detailed(h: i64, t: i64, c: i64) -> DetailedMarket {
        DetailedMarket {
            valuations: vec![vec![r(h)]],
            seller_costs: vec![r(c)],
            direct_transaction_costs: vec![vec![r(t)]],
            mediated_transaction_costs: vec![vec![]],
            mediation_costs: vec![vec![]],
        }
    }

    #[test]
    fn derive_surplus_direct_formula() {
        let m = single_detailed(10, 3, 2).derive_surplus().unwrap();
        assert_eq!(m.direct()[0][0], r(5));
        let m = single_detailed(1, 3, 2).derive_surplus().unwrap();
        assert_eq!(m.direct()[0][0], r(0));
    }

    #[test]
    fn derive_surplus_rejects_cost_ordering_violation() {
        let d = DetailedMarket {
            valuations: vec![vec![r(10)]],
            seller_costs: vec![r(0)],
            direct_transaction_costs: vec![vec![r(1)]],
            mediated_transaction_costs: vec![vec![vec![r(1)]]],
            mediation_costs: vec![vec![vec![r(1)]]],
        };
        match d.derive_surplus() {
            Err(Error::CostOrdering(v)) => assert_eq!(v.middleman, Some(AgentId::middleman(0))),
            other => panic!("expected cost-ordering error, got {other:?}"),
        }
    }

    #[test]
    fn zero_cost_embedding_roundtrips_two_broker_market() {
        // h = A*, t_ik = a*_ik - a_ik, t_ijk = a*_ik - â_ijk, all c = 0.
        let m = fixtures::two_broker_market();
        let d = DetailedMarket::zero_cost(&m);
        assert_eq!(d.valuations, vec![vec![r(6), r(3)], vec![r(3), r(6)]]);
        assert_eq!(d.direct_transaction_costs, vec![vec![r(3), r(1)], vec![r(2), r(1)]]);
        assert_eq!(d.derive_surplus().unwrap(), m);
    }

    #[test]
    fn market_json_roundtrip_and_decimal_strings() {
        let doc = r#"{"buyers":1,"middlemen":1,"sellers":2,"direct":[["0.5",1]],"layers":[[["1/2","2.25"]]]}"#;
        let m: Market = serde_json::from_str(doc).unwrap();
        assert_eq!(m.direct()[0][0], Rat::frac(1, 2));
        assert_eq!(m.layers()[0][0][1], Rat::frac(9, 4));
        let back: Market = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"buyers":2,"middlemen":0,"sellers":1,"direct":[[1]],"layers":[]}"#;
        assert!(serde_json::from_str::<Market>(bad).is_err());
    }

    #[test]
    fn agent_labels() {
        assert_eq!("m2".parse::<AgentId>().unwrap(), AgentId::middleman(1));
        assert_eq!(AgentId::seller(2).to_string(), "s3");
        assert!("x1".parse::<AgentId>().is_err());
        assert!("b0".parse::<AgentId>().is_err());
    }
}
