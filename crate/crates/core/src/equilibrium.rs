//! Prices for a detailed market: demand sets, competitive equilibrium checks,
//! and the translation between equilibria and core allocations.
//!
//! A middleman may charge a different fee for every buyer-seller pair it
//! serves. Fees are indexed `fees[i][j][k]`, all indices 0-based.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{
    all_optimal_matchings, coalition_worth, matching_value, optimal_matching, validate_matching, BasicCoalition,
    Coalition, Matching, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::model::{AgentId, DetailedMarket, Market, Mediator};
use crate::rational::Rat;
use crate::solution::{check_core, CheckMode, PayoffVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceVector {
    pub fees: Vec<Vec<Vec<Rat>>>,
    pub good_prices: Vec<Rat>,
}

/// JSON form: `{"fees": {"i,j,k": "p"}, "good_prices": ["p", ...]}`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PriceDoc {
    #[serde(default)]
    pub fees: BTreeMap<String, Rat>,
    pub good_prices: Vec<Rat>,
}

impl PriceVector {
    /// Every fee and seller price at cost.
    pub fn at_cost(d: &DetailedMarket) -> Self {
        PriceVector { fees: d.mediation_costs.clone(), good_prices: d.seller_costs.clone() }
    }

    pub fn fee(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.fees[i][j][k]
    }

    pub fn set_fee(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        self.fees[i][j][k] = v;
    }

    /// Price paid by the buyer of a trade besides its own valuation:
    /// `p_k`, or `p_j^{ik} + p_k` when mediated.
    pub fn trade_price(&self, i: usize, mediator: Mediator, k: usize) -> Rat {
        match mediator {
            Mediator::Direct => self.good_prices[k].clone(),
            Mediator::Via(j) => &self.fees[i][j][k] + &self.good_prices[k],
        }
    }

    /// Builds a price vector from its JSON document. Fees missing from the
    /// document are set to the corresponding mediation cost.
    pub fn from_doc(doc: PriceDoc, d: &DetailedMarket) -> Result<Self> {
        let (ni, nj, nk) = (d.num_buyers(), d.num_middlemen(), d.num_sellers());
        if doc.good_prices.len() != nk {
            return Err(Error::Shape(format!("expected {nk} good prices, got {}", doc.good_prices.len())));
        }
        let mut p = PriceVector { fees: d.mediation_costs.clone(), good_prices: doc.good_prices };
        for (key, v) in doc.fees {
            let idx: Vec<usize> = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("fee key {key:?} is not \"i,j,k\"")))?;
            match idx[..] {
                [i, j, k] if i < ni && j < nj && k < nk => p.fees[i][j][k] = v,
                _ => return Err(Error::Shape(format!("fee key {key:?} is out of range"))),
            }
        }
        Ok(p)
    }

    pub fn to_doc(&self) -> PriceDoc {
        let mut fees = BTreeMap::new();
        for (i, plane) in self.fees.iter().enumerate() {
            for (j, row) in plane.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    fees.insert(format!("{i},{j},{k}"), v.clone());
                }
            }
        }
        PriceDoc { fees, good_prices: self.good_prices.clone() }
    }

    fn check_dims(&self, d: &DetailedMarket) -> Result<()> {
        let (ni, nj, nk) = (d.num_buyers(), d.num_middlemen(), d.num_sellers());
        let ok = self.good_prices.len() == nk
            && self.fees.len() == ni
            && self.fees.iter().all(|pl| pl.len() == nj && pl.iter().all(|r| r.len() == nk));
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("price vector does not match market dimensions".into()))
        }
    }

    /// First violated feasibility bound, if any.
    fn infeasibility(&self, d: &DetailedMarket) -> Option<Violation> {
        for (k, p) in self.good_prices.iter().enumerate() {
            if *p < d.seller_costs[k] {
                return Some(Violation::Infeasible {
                    item: AgentId::seller(k).to_string(),
                    price: p.clone(),
                    cost: d.seller_costs[k].clone(),
                });
            }
        }
        for (i, plane) in self.fees.iter().enumerate() {
            for (j, row) in plane.iter().enumerate() {
                for (k, p) in row.iter().enumerate() {
                    let c = &d.mediation_costs[i][j][k];
                    if p < c {
                        return Some(Violation::Infeasible {
                            item: BasicCoalition::Triple { buyer: i, middleman: j, seller: k }.to_string(),
                            price: p.clone(),
                            cost: c.clone(),
                        });
                    }
                }
            }
        }
        None
    }
}

impl Serialize for PriceVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl fmt::Display for PriceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let goods: Vec<String> = self
            .good_prices
            .iter()
            .enumerate()
            .map(|(k, p)| format!("p({}) = {p}", AgentId::seller(k)))
            .collect();
        write!(f, "{}", goods.join(", "))?;
        for (i, plane) in self.fees.iter().enumerate() {
            for (j, row) in plane.iter().enumerate() {
                for (k, p) in row.iter().enumerate() {
                    write!(f, "\n{} fee {p}", BasicCoalition::Triple { buyer: i, middleman: j, seller: k })?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumPair {
    pub prices: PriceVector,
    pub matching: Matching,
}

/// Basic coalitions maximising a buyer's net value, and that value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemandSet {
    pub net_value: Rat,
    pub coalitions: Vec<BasicCoalition>,
}

impl DemandSet {
    pub fn contains(&self, e: &BasicCoalition) -> bool {
        self.coalitions.contains(e)
    }
}

/// Buyer `i`'s net value `w^i(E) - p(E \ {i})` of a basic coalition.
pub fn net_value(d: &DetailedMarket, p: &PriceVector, i: usize, e: &BasicCoalition) -> Rat {
    match e.as_trade() {
        None => Rat::zero(),
        Some((_, med, k)) => d.buyer_valuation(i, med, k) - p.trade_price(i, med, k),
    }
}

pub fn demand_set(d: &DetailedMarket, i: usize, p: &PriceVector) -> Result<DemandSet> {
    p.check_dims(d)?;
    if i >= d.num_buyers() {
        return Err(Error::UnknownAgent(AgentId::buyer(i)));
    }
    if let Some(v) = p.infeasibility(d) {
        return Err(Error::InfeasiblePrice(v.to_string()));
    }
    Ok(demand_unchecked(d, i, p))
}

fn demand_unchecked(d: &DetailedMarket, i: usize, p: &PriceVector) -> DemandSet {
    let mut options = vec![BasicCoalition::Singleton(AgentId::buyer(i))];
    for k in 0..d.num_sellers() {
        options.push(BasicCoalition::Pair { buyer: i, seller: k });
        for j in 0..d.num_middlemen() {
            options.push(BasicCoalition::Triple { buyer: i, middleman: j, seller: k });
        }
    }
    let nets: Vec<Rat> = options.iter().map(|e| net_value(d, p, i, e)).collect();
    let best = nets.iter().max().expect("singleton always present").clone();
    let mut coalitions: Vec<BasicCoalition> =
        options.into_iter().zip(&nets).filter(|(_, n)| **n == best).map(|(e, _)| e).collect();
    coalitions.sort();
    DemandSet { net_value: best, coalitions }
}

/// First violated equilibrium clause, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum Violation {
    #[serde(rename = "matching")]
    InvalidMatching { detail: String },
    /// (i) a price below its cost.
    #[serde(rename = "D3(i)")]
    Infeasible { item: String, price: Rat, cost: Rat },
    /// (ii) a buyer's matched coalition is not in its demand set.
    #[serde(rename = "D3(ii)")]
    NotDemanded {
        buyer: AgentId,
        matched: BasicCoalition,
        matched_net: Rat,
        preferred: BasicCoalition,
        preferred_net: Rat,
    },
    /// (iii) an unassigned middleman charges above cost.
    #[serde(rename = "D3(iii)")]
    IdleMiddlemanFee { middleman: AgentId, trade: BasicCoalition, fee: Rat, cost: Rat },
    /// (iv) an unassigned seller prices above cost.
    #[serde(rename = "D3(iv)")]
    IdleSellerPrice { seller: AgentId, price: Rat, cost: Rat },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::InvalidMatching { .. } => "matching",
            Violation::Infeasible { .. } => "D3(i)",
            Violation::NotDemanded { .. } => "D3(ii)",
            Violation::IdleMiddlemanFee { .. } => "D3(iii)",
            Violation::IdleSellerPrice { .. } => "D3(iv)",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.clause())?;
        match self {
            Violation::InvalidMatching { detail } => f.write_str(detail),
            Violation::Infeasible { item, price, cost } => write!(f, "price {price} of {item} is below cost {cost}"),
            Violation::NotDemanded { buyer, matched, matched_net, preferred, preferred_net } => write!(
                f,
                "{buyer} nets {matched_net} from {matched} but {preferred_net} from {preferred}"
            ),
            Violation::IdleMiddlemanFee { middleman, trade, fee, cost } => {
                write!(f, "unassigned {middleman} charges {fee} > cost {cost} on {trade}")
            }
            Violation::IdleSellerPrice { seller, price, cost } => {
                write!(f, "unassigned {seller} prices at {price} > cost {cost}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub is_equilibrium: bool,
    pub violation: Option<Violation>,
}

impl fmt::Display for EquilibriumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => f.write_str("competitive equilibrium: all clauses hold"),
            Some(v) => write!(f, "not an equilibrium: {v}"),
        }
    }
}

fn report(violation: Option<Violation>) -> EquilibriumReport {
    EquilibriumReport { is_equilibrium: violation.is_none(), violation }
}

/// Checks the four equilibrium clauses in order and reports the first
/// failure. Errors only on invalid markets or mismatched dimensions.
pub fn check_equilibrium(d: &DetailedMarket, e: &EquilibriumPair) -> Result<EquilibriumReport> {
    let m = d.derive_surplus()?;
    e.prices.check_dims(d)?;
    let problems = validate_matching(&m, &Coalition::grand(&m), &e.matching)?;
    if let Some(v) = problems.first() {
        return Ok(report(Some(Violation::InvalidMatching { detail: v.to_string() })));
    }
    let mu = &e.matching;
    let p = &e.prices;
    if let Some(v) = p.infeasibility(d) {
        return Ok(report(Some(v)));
    }
    for i in 0..d.num_buyers() {
        let matched = mu.element_of(AgentId::buyer(i)).copied().unwrap_or(BasicCoalition::Singleton(AgentId::buyer(i)));
        let demand = demand_unchecked(d, i, p);
        if !demand.contains(&matched) {
            return Ok(report(Some(Violation::NotDemanded {
                buyer: AgentId::buyer(i),
                matched,
                matched_net: net_value(d, p, i, &matched),
                preferred: demand.coalitions[0],
                preferred_net: demand.net_value,
            })));
        }
    }
    let active = mu.active_middlemen();
    for j in 0..d.num_middlemen() {
        if active.contains(&j) {
            continue;
        }
        for i in 0..d.num_buyers() {
            for k in 0..d.num_sellers() {
                let (fee, cost) = (p.fee(i, j, k), &d.mediation_costs[i][j][k]);
                if fee != cost {
                    return Ok(report(Some(Violation::IdleMiddlemanFee {
                        middleman: AgentId::middleman(j),
                        trade: BasicCoalition::Triple { buyer: i, middleman: j, seller: k },
                        fee: fee.clone(),
                        cost: cost.clone(),
                    })));
                }
            }
        }
    }
    for k in 0..d.num_sellers() {
        if mu.partner_of_seller(k).is_none() && p.good_prices[k] != d.seller_costs[k] {
            return Ok(report(Some(Violation::IdleSellerPrice {
                seller: AgentId::seller(k),
                price: p.good_prices[k].clone(),
                cost: d.seller_costs[k].clone(),
            })));
        }
    }
    Ok(report(None))
}

/// Payoffs induced by prices and a matching, without checking equilibrium.
pub fn induced_payoff(d: &DetailedMarket, e: &EquilibriumPair) -> PayoffVector {
    let p = &e.prices;
    let mut x = vec![Rat::zero(); d.num_buyers()];
    let mut y = vec![Rat::zero(); d.num_middlemen()];
    for (i, med, k) in e.matching.trades() {
        x[i] = d.buyer_valuation(i, med, k) - p.trade_price(i, med, k);
        if let Mediator::Via(j) = med {
            y[j] += p.fee(i, j, k) - &d.mediation_costs[i][j][k];
        }
    }
    let z = (0..d.num_sellers()).map(|k| &p.good_prices[k] - &d.seller_costs[k]).collect();
    PayoffVector::new(x, y, z)
}

/// Equilibrium payoff vector. Refuses pairs that fail [`check_equilibrium`].
///
/// The result is efficient but not necessarily in the core: an active
/// middleman's fee on a trade it does not carry out is only bounded by buyer
/// demand, so a coalition using it for several trades can still block.
pub fn equilibrium_payoff(d: &DetailedMarket, e: &EquilibriumPair) -> Result<PayoffVector> {
    let rep = check_equilibrium(d, e)?;
    match rep.violation {
        Some(v) => Err(Error::NotEquilibrium(v.to_string())),
        None => Ok(induced_payoff(d, e)),
    }
}

/// Whether the pair's matching is optimal for the derived market.
pub fn check_compatible_optimal(d: &DetailedMarket, e: &EquilibriumPair) -> Result<bool> {
    let m = d.derive_surplus()?;
    Ok(matching_value(&m, &e.matching) == coalition_worth(&m, &Coalition::grand(&m)))
}

fn core_and_matching(d: &DetailedMarket, x: &PayoffVector, mu: Option<&Matching>) -> Result<(Market, Matching)> {
    let m = d.derive_surplus()?;
    let cert = check_core(&m, x, CheckMode::Reduced)?;
    if !cert.is_in_core() {
        return Err(Error::NotInCore(cert.to_string()));
    }
    let grand = Coalition::grand(&m);
    let mu = match mu {
        Some(mu) => {
            if let Some(v) = validate_matching(&m, &grand, mu)?.first() {
                return Err(Error::InvalidMatching(v.to_string()));
            }
            if matching_value(&m, mu) != coalition_worth(&m, &grand) {
                return Err(Error::InvalidMatching(format!("{mu} is not an optimal matching")));
            }
            mu.with_idle_middlemen(m.num_middlemen())
        }
        None => optimal_matching(&m, &grand).0.with_idle_middlemen(m.num_middlemen()),
    };
    for (i, med, k) in mu.trades() {
        let net = match med {
            Mediator::Direct => d.direct_net(i, k),
            Mediator::Via(j) => d.mediated_net(i, j, k),
        };
        if net.is_negative() {
            return Err(Error::InvalidMatching(format!(
                "trade {} loses {} and cannot be priced",
                BasicCoalition::trade(i, med, k),
                -net
            )));
        }
    }
    Ok((m, mu))
}

/// Equilibrium prices supporting a core allocation.
///
/// Seller prices are `z_k + c_k`. Each realised triple `(i, j, k)` is priced
/// at `c_j^{ik} + â_ijk - x_i - z_k`, which hands the buyer exactly `x_i`; these
/// shares add up to `y_j`. Every other fee of middleman `j` is `y_j + c_j^{ik}`.
/// When `mu` is omitted an optimal matching is computed.
pub fn prices_from_core(d: &DetailedMarket, x: &PayoffVector, mu: Option<&Matching>) -> Result<EquilibriumPair> {
    let (m, mu) = core_and_matching(d, x, mu)?;
    let (ni, nj, nk) = (m.num_buyers(), m.num_middlemen(), m.num_sellers());
    let mut prices = PriceVector {
        fees: (0..ni)
            .map(|i| (0..nj).map(|j| (0..nk).map(|k| &x.y[j] + &d.mediation_costs[i][j][k]).collect()).collect())
            .collect(),
        good_prices: (0..nk).map(|k| &x.z[k] + &d.seller_costs[k]).collect(),
    };
    for (i, med, k) in mu.trades() {
        if let Mediator::Via(j) = med {
            let share = m.surplus(med, i, k) - &x.x[i] - &x.z[k];
            prices.set_fee(i, j, k, &d.mediation_costs[i][j][k] + share);
        }
    }
    let pair = EquilibriumPair { prices, matching: mu };
    let rep = check_equilibrium(d, &pair)?;
    if let Some(v) = rep.violation {
        return Err(Error::NotEquilibrium(format!("constructed prices fail: {v}")));
    }
    Ok(pair)
}

/// The uniform fee a middleman would have to charge on its trades.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeeEquation {
    pub middleman: AgentId,
    pub trades: Vec<BasicCoalition>,
    /// Target payoff `y_j`.
    pub payoff: Rat,
    pub fee: Rat,
}

/// A buyer whose net value under the uniform fee misses its target payoff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuyerConflict {
    pub buyer: AgentId,
    pub trade: BasicCoalition,
    pub net: Rat,
    pub target: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedFeeAttempt {
    pub matching: Matching,
    pub fees: Vec<FeeEquation>,
    pub conflicts: Vec<BuyerConflict>,
    /// Equilibrium failure of the completed uniform-fee prices, if the fee
    /// equations were consistent.
    pub failure: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportabilityReport {
    pub supportable: bool,
    pub witness: Option<EquilibriumPair>,
    pub attempts: Vec<FixedFeeAttempt>,
    /// Prices with fees differentiated across trades, which always exist.
    pub differentiated: EquilibriumPair,
}

/// Decides whether a core allocation can be supported when every middleman
/// charges one fee on all trades it mediates, trying every optimal matching.
pub fn fixed_fee_supportable(d: &DetailedMarket, x: &PayoffVector) -> Result<SupportabilityReport> {
    let differentiated = prices_from_core(d, x, None)?;
    let m = d.derive_surplus()?;
    let matchings = all_optimal_matchings(&m, &Coalition::grand(&m), DEFAULT_BRUTE_FORCE_CAP)?;
    let mut attempts = Vec::new();
    for mu in matchings {
        let mu = mu.with_idle_middlemen(m.num_middlemen());
        let attempt = fixed_fee_attempt(d, &m, x, mu);
        if let Some(w) = attempt.1 {
            attempts.push(attempt.0);
            return Ok(SupportabilityReport { supportable: true, witness: Some(w), attempts, differentiated });
        }
        attempts.push(attempt.0);
    }
    Ok(SupportabilityReport { supportable: false, witness: None, attempts, differentiated })
}

fn fixed_fee_attempt(
    d: &DetailedMarket,
    m: &Market,
    x: &PayoffVector,
    mu: Matching,
) -> (FixedFeeAttempt, Option<EquilibriumPair>) {
    let mut prices = PriceVector::at_cost(d);
    for k in 0..d.num_sellers() {
        prices.good_prices[k] = &x.z[k] + &d.seller_costs[k];
    }
    let mut fees = Vec::new();
    for (j, pairs) in (0..m.num_middlemen()).map(|j| (j, mu.layer_pairs(Mediator::Via(j)))) {
        if pairs.is_empty() {
            continue;
        }
        let costs: Rat = pairs.iter().map(|&(i, k)| &d.mediation_costs[i][j][k]).sum();
        let fee = (&x.y[j] + costs) / Rat::from_int(pairs.len() as i64);
        for &(i, k) in &pairs {
            prices.set_fee(i, j, k, fee.clone());
        }
        fees.push(FeeEquation {
            middleman: AgentId::middleman(j),
            trades: pairs.iter().map(|&(i, k)| BasicCoalition::Triple { buyer: i, middleman: j, seller: k }).collect(),
            payoff: x.y[j].clone(),
            fee,
        });
    }
    let mut conflicts = Vec::new();
    for (i, med, k) in mu.trades() {
        let net = d.buyer_valuation(i, med, k) - prices.trade_price(i, med, k);
        if net != x.x[i] {
            conflicts.push(BuyerConflict {
                buyer: AgentId::buyer(i),
                trade: BasicCoalition::trade(i, med, k),
                net,
                target: x.x[i].clone(),
            });
        }
    }
    let mut attempt = FixedFeeAttempt { matching: mu.clone(), fees, conflicts, failure: None };
    if !attempt.conflicts.is_empty() {
        return (attempt, None);
    }
    // Fees off the matching are free for active middlemen: price them so no
    // buyer prefers them.
    let active = mu.active_middlemen();
    let realised: Vec<(usize, usize, usize)> =
        mu.trades().filter_map(|(i, med, k)| if let Mediator::Via(j) = med { Some((i, j, k)) } else { None }).collect();
    for i in 0..m.num_buyers() {
        for &j in &active {
            for k in 0..m.num_sellers() {
                if realised.contains(&(i, j, k)) {
                    continue;
                }
                let c = &d.mediation_costs[i][j][k];
                let deterrent = d.buyer_valuation(i, Mediator::Via(j), k) - &prices.good_prices[k] - &x.x[i];
                prices.set_fee(i, j, k, Rat::max_of(c.clone(), deterrent));
            }
        }
    }
    let pair = EquilibriumPair { prices, matching: mu };
    let rep = match check_equilibrium(d, &pair) {
        Ok(r) => r,
        Err(e) => {
            attempt.failure = Some(Violation::InvalidMatching { detail: e.to_string() });
            return (attempt, None);
        }
    };
    if let Some(v) = rep.violation {
        attempt.failure = Some(v);
        return (attempt, None);
    }
    if induced_payoff(d, &pair) != *x {
        return (attempt, None);
    }
    (attempt, Some(pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::r;

    fn two_broker_prices(f11: Rat, f22: Rat) -> EquilibriumPair {
        let d = fixtures::two_broker_detailed();
        let mut p = PriceVector::at_cost(&d);
        p.good_prices = vec![r(1), r(0)];
        p.set_fee(0, 1, 0, f11);
        p.set_fee(1, 1, 1, f22);
        let matching = Matching::new([
            BasicCoalition::Triple { buyer: 0, middleman: 1, seller: 0 },
            BasicCoalition::Triple { buyer: 1, middleman: 1, seller: 1 },
            BasicCoalition::Singleton(AgentId::middleman(0)),
        ]);
        EquilibriumPair { prices: p, matching }
    }

    #[test]
    fn differentiated_prices_support_the_allocation() {
        let d = fixtures::two_broker_detailed();
        let e = two_broker_prices(r(2), r(1));
        let rep = check_equilibrium(&d, &e).unwrap();
        assert!(rep.is_equilibrium, "{rep}");
        assert_eq!(equilibrium_payoff(&d, &e).unwrap(), PayoffVector::from_ints(&[3, 5], &[0, 3], &[1, 0]));
        assert!(check_compatible_optimal(&d, &e).unwrap());
        let demand = demand_set(&d, 0, &e.prices).unwrap();
        assert_eq!(demand.net_value, r(3));
        assert!(demand.contains(&BasicCoalition::Triple { buyer: 0, middleman: 1, seller: 0 }));
    }

    #[test]
    fn uniform_fee_breaks_demand() {
        let d = fixtures::two_broker_detailed();
        let e = two_broker_prices(Rat::frac(3, 2), Rat::frac(3, 2));
        let rep = check_equilibrium(&d, &e).unwrap();
        let v = rep.violation.unwrap();
        assert_eq!(v.clause(), "D3(ii)");
        let b1 = BasicCoalition::Triple { buyer: 0, middleman: 1, seller: 0 };
        assert_eq!(net_value(&d, &e.prices, 0, &b1), Rat::frac(7, 2));
    }

    #[test]
    fn demand_set_ties_and_high_prices() {
        let d = fixtures::two_broker_detailed();
        let mut p = PriceVector::at_cost(&d);
        p.good_prices = vec![r(100), r(100)];
        let ds = demand_set(&d, 0, &p).unwrap();
        assert_eq!(ds.coalitions, vec![BasicCoalition::Singleton(AgentId::buyer(0))]);
        assert_eq!(ds.net_value, r(0));
        // b1 with zero prices: direct s1 gives 3, m1 gives 4, m2 gives 6
        p.good_prices = vec![r(0), r(0)];
        let ds = demand_set(&d, 0, &p).unwrap();
        assert_eq!(ds.coalitions, vec![BasicCoalition::Triple { buyer: 0, middleman: 1, seller: 0 }]);
        let d = DetailedMarket::zero_cost(&Market::from_ints(&[&[2, 2]], &[]).unwrap());
        let p = PriceVector::at_cost(&d);
        assert_eq!(demand_set(&d, 0, &p).unwrap().coalitions.len(), 2);
    }

    #[test]
    fn infeasible_prices_are_refused() {
        let d = fixtures::two_broker_detailed();
        let mut p = PriceVector::at_cost(&d);
        p.set_fee(0, 0, 0, r(-1));
        assert!(matches!(demand_set(&d, 0, &p), Err(Error::InfeasiblePrice(_))));
        let mut e = two_broker_prices(r(2), r(1));
        e.prices = p;
        assert_eq!(check_equilibrium(&d, &e).unwrap().violation.unwrap().clause(), "D3(i)");
        e.matching = Matching::default();
        assert_eq!(check_equilibrium(&d, &e).unwrap().violation.unwrap().clause(), "matching");
    }

    #[test]
    fn null_market_equilibrium() {
        let d = DetailedMarket::zero_cost(&Market::from_ints(&[&[0]], &[&[&[0]]]).unwrap());
        let mu = Matching::new([
            BasicCoalition::Singleton(AgentId::buyer(0)),
            BasicCoalition::Singleton(AgentId::middleman(0)),
            BasicCoalition::Singleton(AgentId::seller(0)),
        ]);
        let e = EquilibriumPair { prices: PriceVector::at_cost(&d), matching: mu };
        assert!(check_equilibrium(&d, &e).unwrap().is_equilibrium);
        assert_eq!(equilibrium_payoff(&d, &e).unwrap(), PayoffVector::from_ints(&[0], &[0], &[0]));
        assert!(check_compatible_optimal(&d, &e).unwrap());

        let d = DetailedMarket::zero_cost(&Market::from_ints(&[&[1]], &[]).unwrap());
        let mu = Matching::new([BasicCoalition::Singleton(AgentId::buyer(0)), BasicCoalition::Singleton(AgentId::seller(0))]);
        let e = EquilibriumPair { prices: PriceVector::at_cost(&d), matching: mu };
        assert!(!check_equilibrium(&d, &e).unwrap().is_equilibrium);
    }

    #[test]
    fn idle_agents_must_price_at_cost() {
        let d = fixtures::two_broker_detailed();
        let mut e = two_broker_prices(r(2), r(1));
        e.prices.set_fee(1, 0, 0, r(1));
        assert_eq!(check_equilibrium(&d, &e).unwrap().violation.unwrap().clause(), "D3(iii)");

        let d = DetailedMarket::zero_cost(&Market::from_ints(&[&[4, 0]], &[]).unwrap());
        let mut p = PriceVector::at_cost(&d);
        p.good_prices = vec![r(1), r(1)];
        let mu = Matching::new([BasicCoalition::Pair { buyer: 0, seller: 0 }, BasicCoalition::Singleton(AgentId::seller(1))]);
        let e = EquilibriumPair { prices: p, matching: mu };
        assert_eq!(check_equilibrium(&d, &e).unwrap().violation.unwrap().clause(), "D3(iv)");
    }

    #[test]
    fn suboptimal_matching_is_never_an_equilibrium() {
        let d = fixtures::two_broker_detailed();
        let mu = Matching::new([
            BasicCoalition::Triple { buyer: 0, middleman: 0, seller: 0 },
            BasicCoalition::Triple { buyer: 1, middleman: 1, seller: 1 },
        ]);
        let m = d.derive_surplus().unwrap();
        assert_eq!(matching_value(&m, &mu), r(10));
        for f in 0..4 {
            for g in 0..4 {
                let mut p = PriceVector::at_cost(&d);
                p.good_prices = vec![r(f), r(g)];
                p.set_fee(0, 0, 0, r(g));
                p.set_fee(1, 1, 1, r(f));
                let e = EquilibriumPair { prices: p, matching: mu.clone() };
                assert!(!check_equilibrium(&d, &e).unwrap().is_equilibrium);
                assert!(!check_compatible_optimal(&d, &e).unwrap());
            }
        }
    }

    #[test]
    fn prices_from_core_reproduces_hand_prices() {
        let d = fixtures::two_broker_detailed();
        let x = PayoffVector::from_ints(&[3, 5], &[0, 3], &[1, 0]);
        let e = prices_from_core(&d, &x, None).unwrap();
        assert_eq!(e.prices.fee(0, 1, 0), &r(2));
        assert_eq!(e.prices.fee(1, 1, 1), &r(1));
        assert_eq!(e.prices.good_prices, vec![r(1), r(0)]);
        assert_eq!(equilibrium_payoff(&d, &e).unwrap(), x);
    }

    #[test]
    fn prices_from_core_refusals() {
        let d = fixtures::two_broker_detailed();
        let bad = PayoffVector::from_ints(&[12, 0], &[0, 0], &[0, 0]);
        assert!(matches!(prices_from_core(&d, &bad, None), Err(Error::NotInCore(_))));
        let x = PayoffVector::from_ints(&[3, 5], &[0, 3], &[1, 0]);
        let sub = Matching::new([
            BasicCoalition::Triple { buyer: 0, middleman: 0, seller: 0 },
            BasicCoalition::Triple { buyer: 1, middleman: 1, seller: 1 },
        ]);
        assert!(matches!(prices_from_core(&d, &x, Some(&sub)), Err(Error::InvalidMatching(_))));
    }

    #[test]
    fn null_market_prices_at_cost() {
        let d = DetailedMarket::zero_cost(&Market::from_ints(&[&[0]], &[&[&[0]]]).unwrap());
        let x = PayoffVector::from_ints(&[0], &[0], &[0]);
        let e = prices_from_core(&d, &x, None).unwrap();
        assert_eq!(e.prices, PriceVector::at_cost(&d));
    }

    #[test]
    fn fixed_fee_audit_two_broker_market() {
        let d = fixtures::two_broker_detailed();
        let x = PayoffVector::from_ints(&[3, 5], &[0, 3], &[1, 0]);
        let rep = fixed_fee_supportable(&d, &x).unwrap();
        assert!(!rep.supportable);
        assert_eq!(rep.attempts.len(), 1);
        let a = &rep.attempts[0];
        assert_eq!(a.fees.len(), 1);
        assert_eq!(a.fees[0].fee, Rat::frac(3, 2));
        let b1 = a.conflicts.iter().find(|c| c.buyer == AgentId::buyer(0)).unwrap();
        assert_eq!((b1.net.clone(), b1.target.clone()), (Rat::frac(7, 2), r(3)));
        assert!(check_equilibrium(&d, &rep.differentiated).unwrap().is_equilibrium);
    }

    #[test]
    fn one_trade_per_middleman_is_supportable() {
        let m = Market::from_ints(&[&[1, 0], &[0, 1]], &[&[&[4, 0], &[0, 1]], &[&[1, 0], &[0, 5]]]).unwrap();
        let d = DetailedMarket::zero_cost(&m);
        let x = crate::solution::buyer_optimal(&m);
        let rep = fixed_fee_supportable(&d, &x).unwrap();
        assert!(rep.supportable);
        let w = rep.witness.unwrap();
        assert_eq!(equilibrium_payoff(&d, &w).unwrap(), x);
    }

    #[test]
    fn price_json_round_trip() {
        let d = fixtures::two_broker_detailed();
        let e = two_broker_prices(r(2), r(1));
        let json = serde_json::to_string(&e.prices).unwrap();
        assert!(json.contains("\"0,1,0\":\"2\""), "{json}");
        let doc: PriceDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(PriceVector::from_doc(doc, &d).unwrap(), e.prices);
        let sparse: PriceDoc = serde_json::from_str(r#"{"fees":{"0,1,0":"2","1,1,1":1},"good_prices":[1,0]}"#).unwrap();
        assert_eq!(PriceVector::from_doc(sparse, &d).unwrap(), e.prices);
        let bad: PriceDoc = serde_json::from_str(r#"{"fees":{"5,1,0":"2"},"good_prices":[1,0]}"#).unwrap();
        assert!(PriceVector::from_doc(bad, &d).is_err());
    }
}
