//! Core of the market game.
//!
//! Core membership is tested two ways. [`CheckMode::BruteForce`] compares the
//! payoff of every coalition with its worth. [`CheckMode::Reduced`] only looks
//! at non-negativity, efficiency and, for each group of middlemen `M'`, the
//! assignment problem on the residual surplus
//! `max(0, max_{j in M' + direct} a^(j)_ik - x_i - z_k)`, whose optimum may not
//! exceed `y(M')`. Any coalition's optimal matching only uses its own
//! middlemen, so this family covers every coalition constraint.
//!
//! Optimisation over the core (largest joint payoff of a group of middlemen,
//! middleman-optimal points) runs the exact simplex with cutting planes, using
//! the reduced check as separation oracle. Vertex enumeration materialises
//! the family explicitly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, ConstraintSystem, LinearConstraint, LpOutcome, Relation};
use crate::matching::{coalition_worth, optimal_two_sided, Coalition, TwoSidedMatching};
use crate::model::{AgentId, Market, Side};
use crate::polytope::enumerate_vertices;
use crate::rational::Rat;

/// Largest agent count for which all `2^n` coalitions are enumerated.
pub const DEFAULT_COALITION_CAP: usize = 16;
/// Largest agent count accepted by [`core_vertices`].
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// An allocation `(x; y; z)` to buyers, middlemen and sellers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PayoffVector {
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
    pub z: Vec<Rat>,
}

impl PayoffVector {
    pub fn new(x: Vec<Rat>, y: Vec<Rat>, z: Vec<Rat>) -> Self {
        PayoffVector { x, y, z }
    }

    pub fn zero(m: &Market) -> Self {
        PayoffVector {
            x: vec![Rat::zero(); m.num_buyers()],
            y: vec![Rat::zero(); m.num_middlemen()],
            z: vec![Rat::zero(); m.num_sellers()],
        }
    }

    pub fn from_ints(x: &[i64], y: &[i64], z: &[i64]) -> Self {
        let c = |v: &[i64]| v.iter().map(|&n| Rat::from_int(n)).collect();
        PayoffVector { x: c(x), y: c(y), z: c(z) }
    }

    /// Coordinates in agent order: buyers, middlemen, sellers.
    pub fn to_flat(&self) -> Vec<Rat> {
        self.x.iter().chain(&self.y).chain(&self.z).cloned().collect()
    }

    pub fn from_flat(m: &Market, v: &[Rat]) -> Self {
        let (ni, nj) = (m.num_buyers(), m.num_middlemen());
        PayoffVector {
            x: v[..ni].to_vec(),
            y: v[ni..ni + nj].to_vec(),
            z: v[ni + nj..].to_vec(),
        }
    }

    pub fn get(&self, a: AgentId) -> &Rat {
        match a.side {
            Side::Buyer => &self.x[a.index],
            Side::Middleman => &self.y[a.index],
            Side::Seller => &self.z[a.index],
        }
    }

    pub fn total(&self) -> Rat {
        self.x.iter().chain(&self.y).chain(&self.z).sum()
    }

    pub fn sum_over(&self, t: &Coalition) -> Rat {
        t.agents().into_iter().map(|a| self.get(a)).sum()
    }

    pub fn check_dims(&self, m: &Market) -> Result<()> {
        if self.x.len() != m.num_buyers() || self.y.len() != m.num_middlemen() || self.z.len() != m.num_sellers() {
            return Err(Error::Shape(format!(
                "payoff vector has dimensions ({}; {}; {}), market is ({}; {}; {})",
                self.x.len(),
                self.y.len(),
                self.z.len(),
                m.num_buyers(),
                m.num_middlemen(),
                m.num_sellers()
            )));
        }
        Ok(())
    }

    fn has_negative(&self) -> Option<AgentId> {
        let find = |v: &[Rat], mk: fn(usize) -> AgentId| v.iter().position(Rat::is_negative).map(mk);
        find(&self.x, AgentId::buyer)
            .or_else(|| find(&self.y, AgentId::middleman))
            .or_else(|| find(&self.z, AgentId::seller))
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Rat]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "({}; {}; {})", j(&self.x), j(&self.y), j(&self.z))
    }
}

impl FromStr for PayoffVector {
    type Err = Error;

    /// Either a JSON object `{"x": [...], "y": [...], "z": [...]}` or the
    /// compact form `3,5; 0,3; 1,0` (parentheses optional).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("payoff {s:?} needs three ';'-separated blocks")));
        }
        let block = |b: &str| -> Result<Vec<Rat>> {
            b.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| Rat::from_str(x).map_err(|e| Error::Parse(e.to_string())))
                .collect()
        };
        Ok(PayoffVector { x: block(parts[0])?, y: block(parts[1])?, z: block(parts[2])? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    BruteForce,
    Reduced,
}

/// Outcome of a core membership test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoreCertificate {
    InCore,
    /// `payoff_sum < worth` for the reported coalition.
    Blocked { coalition: Coalition, worth: Rat, payoff_sum: Rat },
    /// The payoffs do not add up to the grand coalition's worth.
    Inefficient { total: Rat, grand_worth: Rat },
}

impl CoreCertificate {
    pub fn is_in_core(&self) -> bool {
        matches!(self, CoreCertificate::InCore)
    }

    /// Same verdict kind, ignoring the witness.
    pub fn same_kind(&self, other: &CoreCertificate) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for CoreCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreCertificate::InCore => f.write_str("in core"),
            CoreCertificate::Blocked { coalition, worth, payoff_sum } => {
                write!(f, "blocked by {coalition}: worth {worth} > payoff {payoff_sum}")
            }
            CoreCertificate::Inefficient { total, grand_worth } => {
                write!(f, "inefficient: total {total} != v(N) = {grand_worth}")
            }
        }
    }
}

/// Worth of every coalition, indexed by agent bitmask.
#[derive(Debug, Clone)]
pub struct WorthTable {
    worths: Vec<Rat>,
}

impl WorthTable {
    pub fn new(m: &Market, cap: usize) -> Result<Self> {
        let n = m.num_agents();
        if n > cap {
            return Err(Error::CapExceeded { what: "agents for coalition enumeration", needed: n as u64, cap: cap as u64 });
        }
        let worths = (0..1u64 << n).map(|mask| coalition_worth(m, &Coalition::from_mask(m, mask))).collect();
        Ok(WorthTable { worths })
    }

    pub fn worth(&self, mask: u64) -> &Rat {
        &self.worths[mask as usize]
    }

    pub fn len(&self) -> usize {
        self.worths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worths.is_empty()
    }

    pub fn grand(&self) -> &Rat {
        self.worths.last().expect("at least the empty coalition")
    }
}

/// `v(N) - v(N \ {agent})`.
pub fn marginal_contribution(m: &Market, agent: AgentId) -> Rat {
    let grand = Coalition::grand(m);
    coalition_worth(m, &grand) - coalition_worth(m, &grand.without(agent))
}

pub fn grand_worth(m: &Market) -> Rat {
    coalition_worth(m, &Coalition::grand(m))
}

pub fn check_core(m: &Market, p: &PayoffVector, mode: CheckMode) -> Result<CoreCertificate> {
    p.check_dims(m)?;
    match mode {
        CheckMode::BruteForce => Ok(check_core_brute(m, &WorthTable::new(m, DEFAULT_COALITION_CAP)?, p)),
        CheckMode::Reduced => Ok(check_core_reduced(m, p)),
    }
}

/// Brute-force check against a precomputed worth table. Reports the most
/// violated coalition (lowest mask among ties).
pub fn check_core_brute(m: &Market, table: &WorthTable, p: &PayoffVector) -> CoreCertificate {
    let total = p.total();
    if &total != table.grand() {
        return CoreCertificate::Inefficient { total, grand_worth: table.grand().clone() };
    }
    let flat = p.to_flat();
    let mut worst: Option<(u64, Rat, Rat)> = None;
    for mask in 0..table.len() as u64 {
        let sum: Rat = (0..flat.len()).filter(|b| mask >> b & 1 == 1).map(|b| &flat[b]).sum();
        let w = table.worth(mask);
        if sum < *w {
            let deficit = w - &sum;
            if worst.as_ref().is_none_or(|(_, d, _)| deficit > *d) {
                worst = Some((mask, deficit, sum));
            }
        }
    }
    match worst {
        None => CoreCertificate::InCore,
        Some((mask, _, sum)) => CoreCertificate::Blocked {
            coalition: Coalition::from_mask(m, mask),
            worth: table.worth(mask).clone(),
            payoff_sum: sum,
        },
    }
}

/// A violated middleman-group constraint found by the reduced check.
#[derive(Debug, Clone)]
pub struct GroupViolation {
    pub middlemen: Vec<usize>,
    pub sigma: TwoSidedMatching,
    /// Assignment value of the residual surplus minus `y(M')`.
    pub deficit: Rat,
}

fn middleman_groups(nj: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1u64 << nj).map(move |mask| (0..nj).filter(|j| mask >> j & 1 == 1).collect())
}

/// Most violated middleman-group constraint for a non-negative `p`.
pub fn reduced_separation(m: &Market, p: &PayoffVector) -> Option<GroupViolation> {
    let (ni, nk) = (m.num_buyers(), m.num_sellers());
    let rows: Vec<usize> = (0..ni).collect();
    let cols: Vec<usize> = (0..nk).collect();
    let mut worst: Option<GroupViolation> = None;
    for group in middleman_groups(m.num_middlemen()) {
        let red = m.reduce_over(&group);
        let residual: Vec<Vec<Rat>> = (0..ni)
            .map(|i| (0..nk).map(|k| (&red.surplus[i][k] - &p.x[i] - &p.z[k]).clip0()).collect())
            .collect();
        let (sigma, value) = optimal_two_sided(&residual, &rows, &cols);
        let y_sum: Rat = group.iter().map(|&j| &p.y[j]).sum();
        if value > y_sum {
            let deficit = value - y_sum;
            if worst.as_ref().is_none_or(|w| deficit > w.deficit) {
                worst = Some(GroupViolation { middlemen: group, sigma, deficit });
            }
        }
    }
    worst
}

fn check_core_reduced(m: &Market, p: &PayoffVector) -> CoreCertificate {
    let grand = grand_worth(m);
    let total = p.total();
    if total != grand {
        return CoreCertificate::Inefficient { total, grand_worth: grand };
    }
    if let Some(a) = p.has_negative() {
        return CoreCertificate::Blocked {
            coalition: Coalition::from_agents([a]),
            worth: Rat::zero(),
            payoff_sum: p.get(a).clone(),
        };
    }
    match reduced_separation(m, p) {
        None => CoreCertificate::InCore,
        Some(v) => {
            let coalition = Coalition::new(
                v.sigma.pairs.iter().map(|pr| pr.0).collect(),
                v.middlemen.clone(),
                v.sigma.pairs.iter().map(|pr| pr.1).collect(),
            );
            CoreCertificate::Blocked {
                worth: coalition_worth(m, &coalition),
                payoff_sum: p.sum_over(&coalition),
                coalition,
            }
        }
    }
}

fn var_buyer(_m: &Market, i: usize) -> usize {
    i
}

fn var_middleman(m: &Market, j: usize) -> usize {
    m.num_buyers() + j
}

fn var_seller(m: &Market, k: usize) -> usize {
    m.num_buyers() + m.num_middlemen() + k
}

fn group_constraint(m: &Market, group: &[usize], pairs: &[(usize, usize)], rhs: Rat) -> LinearConstraint {
    let mut coeffs = vec![Rat::zero(); m.num_agents()];
    for &j in group {
        coeffs[var_middleman(m, j)] = Rat::one();
    }
    for &(i, k) in pairs {
        coeffs[var_buyer(m, i)] = Rat::one();
        coeffs[var_seller(m, k)] = Rat::one();
    }
    LinearConstraint::new(coeffs, Relation::Ge, rhs)
}

/// Efficiency plus the constraints of every profitable pair and triple.
/// Non-negativity is implicit in the LP engine.
fn base_system(m: &Market) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(m.num_agents());
    let all: Vec<usize> = (0..m.num_agents()).collect();
    sys.push_sum(&all, Relation::Eq, grand_worth(m));
    for i in 0..m.num_buyers() {
        for k in 0..m.num_sellers() {
            let a = &m.direct()[i][k];
            if a.is_positive() {
                sys.push(group_constraint(m, &[], &[(i, k)], a.clone()));
            }
            for j in 0..m.num_middlemen() {
                let v = &m.layers()[j][i][k];
                if v.is_positive() && v > a {
                    sys.push(group_constraint(m, &[j], &[(i, k)], v.clone()));
                }
            }
        }
    }
    sys
}

/// Optimises over the core with lazily added group constraints.
fn optimize_over_core(m: &Market, mut sys: ConstraintSystem, objective: &[Rat]) -> LpOutcome {
    loop {
        match lp::maximize(&sys, objective) {
            LpOutcome::Optimal { value, point } => {
                let p = PayoffVector::from_flat(m, &point);
                match reduced_separation(m, &p) {
                    None => return LpOutcome::Optimal { value, point },
                    Some(v) => {
                        let red = m.reduce_over(&v.middlemen);
                        let rhs = v.sigma.value(&red.surplus);
                        sys.push(group_constraint(m, &v.middlemen, &v.sigma.pairs, rhs));
                    }
                }
            }
            other => return other,
        }
    }
}

/// The complete (dominance-pruned) list of core constraints: efficiency and,
/// for every middleman group `M'` and every partial buyer-seller matching
/// `sigma`, `y(M') + sum_{(i,k) in sigma} (x_i + z_k) >= value of sigma`.
/// A constraint is kept only when every pair is profitable, `sigma` is optimal
/// on its own agents, and every middleman of `M'` is needed for the value.
pub fn core_constraint_system(m: &Market) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(m.num_agents());
    let all: Vec<usize> = (0..m.num_agents()).collect();
    sys.push_sum(&all, Relation::Eq, grand_worth(m));
    let nj = m.num_middlemen();
    let reductions: Vec<_> = (0..1usize << nj)
        .map(|mask| {
            let group: Vec<usize> = (0..nj).filter(|j| mask >> j & 1 == 1).collect();
            m.reduce_over(&group).surplus
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for mask in 0..1usize << nj {
        let group: Vec<usize> = (0..nj).filter(|j| mask >> j & 1 == 1).collect();
        let surplus = &reductions[mask];
        let mut sigmas = Vec::new();
        partial_matchings(surplus, 0, &mut vec![false; m.num_sellers()], &mut Vec::new(), &mut sigmas);
        for sigma in sigmas {
            let value: Rat = sigma.iter().map(|&(i, k)| &surplus[i][k]).sum();
            let rows: Vec<usize> = sigma.iter().map(|p| p.0).collect();
            let mut cols: Vec<usize> = sigma.iter().map(|p| p.1).collect();
            cols.sort_unstable();
            if optimal_two_sided(surplus, &rows, &cols).1 > value {
                continue;
            }
            let needed = group.iter().all(|&j| {
                let without = &reductions[mask & !(1 << j)];
                let v: Rat = sigma.iter().map(|&(i, k)| &without[i][k]).sum();
                v < value
            });
            if !needed {
                continue;
            }
            let c = group_constraint(m, &group, &sigma, value);
            if seen.insert((c.coeffs.clone(), c.rhs.clone())) {
                sys.push(c);
            }
        }
    }
    sys
}

fn partial_matchings(
    surplus: &[Vec<Rat>],
    i: usize,
    used: &mut Vec<bool>,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if i == surplus.len() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    partial_matchings(surplus, i + 1, used, cur, out);
    for k in 0..used.len() {
        if !used[k] && surplus[i][k].is_positive() {
            used[k] = true;
            cur.push((i, k));
            partial_matchings(surplus, i + 1, used, cur, out);
            cur.pop();
            used[k] = false;
        }
    }
}

/// Buyer-optimal core allocation: every buyer gets its marginal contribution,
/// middlemen get nothing, matched sellers get the rest of their pair's best
/// surplus.
pub fn buyer_optimal(m: &Market) -> PayoffVector {
    side_optimal(m, Side::Buyer)
}

/// Seller-optimal core allocation, symmetric to [`buyer_optimal`].
pub fn seller_optimal(m: &Market) -> PayoffVector {
    side_optimal(m, Side::Seller)
}

fn side_optimal(m: &Market, side: Side) -> PayoffVector {
    let red = m.reduce();
    let rows: Vec<usize> = (0..m.num_buyers()).collect();
    let cols: Vec<usize> = (0..m.num_sellers()).collect();
    let (sigma, _) = optimal_two_sided(&red.surplus, &rows, &cols);
    let mut p = PayoffVector::zero(m);
    match side {
        Side::Buyer => {
            for i in 0..m.num_buyers() {
                p.x[i] = marginal_contribution(m, AgentId::buyer(i));
            }
            for &(i, k) in &sigma.pairs {
                p.z[k] = &red.surplus[i][k] - &p.x[i];
            }
        }
        Side::Seller => {
            for k in 0..m.num_sellers() {
                p.z[k] = marginal_contribution(m, AgentId::seller(k));
            }
            for &(i, k) in &sigma.pairs {
                p.x[i] = &red.surplus[i][k] - &p.z[k];
            }
        }
        Side::Middleman => unreachable!("no middleman-optimal construction"),
    }
    p
}

/// Reason `(x, z)` fails the two-sided core of the reduced market, if any.
pub fn two_sided_core_violation(m: &Market, x: &[Rat], z: &[Rat]) -> Option<String> {
    if let Some(i) = x.iter().position(Rat::is_negative) {
        return Some(format!("negative payoff {} for {}", x[i], AgentId::buyer(i)));
    }
    if let Some(k) = z.iter().position(Rat::is_negative) {
        return Some(format!("negative payoff {} for {}", z[k], AgentId::seller(k)));
    }
    let red = m.reduce();
    let mut worst: Option<(usize, usize, Rat)> = None;
    for i in 0..m.num_buyers() {
        for k in 0..m.num_sellers() {
            let gap = &red.surplus[i][k] - &x[i] - &z[k];
            if gap.is_positive() && worst.as_ref().is_none_or(|w| gap > w.2) {
                worst = Some((i, k, gap));
            }
        }
    }
    if let Some((i, k, _)) = worst {
        return Some(format!(
            "blocking pair ({}, {}): {} + {} < {}",
            AgentId::buyer(i),
            AgentId::seller(k),
            x[i],
            z[k],
            red.surplus[i][k]
        ));
    }
    let total: Rat = x.iter().chain(z).sum();
    let grand = grand_worth(m);
    if total != grand {
        return Some(format!("total {total} differs from optimum {grand}"));
    }
    None
}

/// Embeds a two-sided core point as `(x; 0; z)`.
pub fn embed_facet(m: &Market, x: &[Rat], z: &[Rat]) -> Result<PayoffVector> {
    if x.len() != m.num_buyers() || z.len() != m.num_sellers() {
        return Err(Error::Shape("two-sided point has wrong dimensions".into()));
    }
    let show = |v: &[Rat]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    match two_sided_core_violation(m, x, z) {
        Some(reason) => Err(Error::NotInTwoSidedCore { x: show(x), z: show(z), reason }),
        None => Ok(PayoffVector::new(x.to_vec(), vec![Rat::zero(); m.num_middlemen()], z.to_vec())),
    }
}

/// Maximises a linear objective (one weight per agent, agent order) over the
/// core and returns the optimum with a core point attaining it.
pub fn maximize_over_core(m: &Market, objective: &[Rat]) -> Result<(Rat, PayoffVector)> {
    if objective.len() != m.num_agents() {
        return Err(Error::Shape(format!("objective needs {} weights", m.num_agents())));
    }
    match optimize_over_core(m, base_system(m), objective) {
        LpOutcome::Optimal { value, point } => Ok((value, PayoffVector::from_flat(m, &point))),
        // The core is a non-empty polytope for every market.
        other => unreachable!("core LP returned {other:?}"),
    }
}

/// Largest joint core payoff of a group of middlemen, with a core point
/// attaining it.
pub fn max_middleman_group_payoff_with_witness(m: &Market, group: &[usize]) -> (Rat, PayoffVector) {
    let mut objective = vec![Rat::zero(); m.num_agents()];
    for &j in group {
        objective[var_middleman(m, j)] = Rat::one();
    }
    maximize_over_core(m, &objective).expect("objective sized to the market")
}

pub fn max_middleman_group_payoff(m: &Market, group: &[usize]) -> Rat {
    max_middleman_group_payoff_with_witness(m, group).0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCertificate {
    pub group: Vec<AgentId>,
    pub sum_of_individual_max: Rat,
    pub group_max: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    pub exists: bool,
    /// Maximum core payoff of each middleman on its own.
    pub individual_max: Vec<Rat>,
    pub witness: Option<PayoffVector>,
    /// Smallest group whose members' individual maxima overshoot the group's
    /// joint maximum, when the point does not exist.
    pub certificate: Option<GroupCertificate>,
}

/// Decides whether one core point gives every middleman its individual
/// maximum core payoff.
pub fn middleman_optimal_exists(m: &Market) -> ExistenceReport {
    let nj = m.num_middlemen();
    let individual_max: Vec<Rat> = (0..nj).map(|j| max_middleman_group_payoff(m, &[j])).collect();
    let mut sys = base_system(m);
    for (j, v) in individual_max.iter().enumerate() {
        sys.push_sum(&[var_middleman(m, j)], Relation::Eq, v.clone());
    }
    let zero = vec![Rat::zero(); m.num_agents()];
    if let LpOutcome::Optimal { point, .. } = optimize_over_core(m, sys, &zero) {
        return ExistenceReport {
            exists: true,
            individual_max,
            witness: Some(PayoffVector::from_flat(m, &point)),
            certificate: None,
        };
    }
    let mut groups: Vec<Vec<usize>> = middleman_groups(nj).filter(|g| g.len() >= 2).collect();
    groups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let certificate = groups.into_iter().find_map(|g| {
        let sum: Rat = g.iter().map(|&j| &individual_max[j]).sum();
        let joint = max_middleman_group_payoff(m, &g);
        (sum > joint).then(|| GroupCertificate {
            group: g.iter().map(|&j| AgentId::middleman(j)).collect(),
            sum_of_individual_max: sum,
            group_max: joint,
        })
    });
    ExistenceReport { exists: false, individual_max, witness: None, certificate }
}

/// All vertices of the core, each verified with the reduced check.
pub fn core_vertices(m: &Market, cap: usize) -> Result<Vec<PayoffVector>> {
    let n = m.num_agents();
    if n > cap {
        return Err(Error::CapExceeded { what: "agents for vertex enumeration", needed: n as u64, cap: cap as u64 });
    }
    if grand_worth(m).is_zero() {
        return Ok(vec![PayoffVector::zero(m)]);
    }
    let sys = core_constraint_system(m);
    let verts = enumerate_vertices(&sys).expect("the core is bounded");
    let mut out = Vec::with_capacity(verts.len());
    for v in verts {
        let p = PayoffVector::from_flat(m, &v);
        let cert = check_core_reduced(m, &p);
        if !cert.is_in_core() {
            return Err(Error::NotInCore(format!("enumerated vertex {p} failed verification: {cert}")));
        }
        out.push(p);
    }
    Ok(out)
}
