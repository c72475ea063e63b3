//! Command-line front end behind the `mmkt` binary.
//!
//! Every command reads a market document (`--input`), runs one solver
//! operation and renders the result as text or JSON. Exit status is 0 on
//! success, 1 when the solver refuses a well-formed input and 2 for
//! malformed input.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::equilibrium::{
    check_compatible_optimal, check_equilibrium, equilibrium_payoff, fixed_fee_supportable, induced_payoff,
    prices_from_core, EquilibriumPair, PriceDoc, PriceVector,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::generate::{seeded_market, MarketShape, DEFAULT_RANGE};
use crate::matching::{coalition_worth, matching_value, optimal_matching, Coalition, Matching};
use crate::model::{AgentId, DetailedMarket, Market, MarketDoc, Mediator};
use crate::rational::Rat;
use crate::solution::{
    buyer_optimal, check_core_brute, core_vertices, marginal_contribution, max_middleman_group_payoff,
    middleman_optimal_exists, seller_optimal, CheckMode, PayoffVector, WorthTable, DEFAULT_COALITION_CAP,
    DEFAULT_VERTEX_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Optimal matching of the grand coalition.
    Solve,
    /// Worth of a coalition (`--coalition`, default: everyone).
    Worth,
    /// Core membership of `--payoff`.
    CoreCheck,
    BuyerOpt,
    SellerOpt,
    /// All vertices of the core.
    Vertices,
    /// Largest middleman core payoffs and whether one point attains them all.
    MiddlemanOpt,
    /// Verify prices and a matching (input: {"market", "prices", "matching"}).
    CeCheck,
    /// Equilibrium prices supporting `--payoff`.
    CeFromCore,
    /// Whether `--payoff` survives uniform middleman fees.
    FixedFeeAudit,
    /// Print a random valid market.
    Gen,
    /// Re-check the built-in worked examples.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    BruteForce,
    Reduced,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "mmkt", version, about = "Matching markets with middlemen: matchings, core, equilibrium prices")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Market document (abstract or detailed JSON).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    /// Comma-separated agent labels, e.g. b1,m2,s3.
    #[arg(long)]
    pub coalition: Option<String>,
    /// Payoff vector: inline JSON, the compact form "3,5;0,3;1,0", or a file.
    #[arg(long)]
    pub payoff: Option<String>,
    /// Matching as inline JSON or a file.
    #[arg(long)]
    pub matching: Option<String>,
    #[arg(long, value_enum, default_value = "reduced")]
    pub mode: Mode,
    /// Largest agent count for exhaustive coalition enumeration.
    #[arg(long, default_value_t = DEFAULT_COALITION_CAP, value_parser = positive)]
    pub cap_coalitions: usize,
    /// Largest agent count for vertex enumeration.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP, value_parser = positive)]
    pub cap_vertices: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub buyers: usize,
    #[arg(long, default_value_t = 2)]
    pub middlemen: usize,
    #[arg(long, default_value_t = 3)]
    pub sellers: usize,
    /// Largest generated surplus entry and layer increment.
    #[arg(long, default_value_t = DEFAULT_RANGE)]
    pub range: i64,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command's result in both renderings.
struct Report {
    json: Value,
    human: String,
    /// Non-zero when the command ran but its verdict is a failure (selftest).
    code: i32,
}

impl Report {
    fn ok<T: Serialize>(data: &T, human: String) -> Result<Report> {
        Ok(Report { json: serde_json::to_value(data)?, human, code: 0 })
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok(rep) => {
            let stdout = match cfg.format {
                Format::Json => pretty(&rep.json),
                Format::Human => rep.human,
            };
            Outcome { code: rep.code, stdout: stdout + "\n", stderr: String::new() }
        }
        Err(e) => {
            let code = if e.is_structural() { 2 } else { 1 };
            let stderr = match cfg.format {
                Format::Json => pretty(&json!({ "error": error_kind(&e), "message": e.to_string() })),
                Format::Human => format!("error: {e}"),
            };
            Outcome { code, stdout: String::new(), stderr: stderr + "\n" }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values always serialise")
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Shape(_) => "shape",
        Error::Parse(_) => "parse",
        Error::InvalidMarket(..) => "invalid_market",
        Error::CostOrdering(_) => "cost_ordering",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::InfeasiblePrice(_) => "infeasible_price",
        Error::NotInCore(_) => "not_in_core",
        Error::NotInTwoSidedCore { .. } => "not_in_two_sided_core",
        Error::NotEquilibrium(_) => "not_equilibrium",
        Error::InvalidMatching(_) => "invalid_matching",
        Error::UnknownAgent(_) => "unknown_agent",
        Error::Infeasible => "infeasible",
        Error::Io(_) => "io",
    }
}

/// Inline JSON/text, or the contents of a file when the argument names one.
fn inline_or_file(arg: &str) -> Result<String> {
    let t = arg.trim();
    if t.starts_with('{') || t.starts_with('(') || t.contains(';') {
        return Ok(t.to_string());
    }
    Ok(fs::read_to_string(t)?)
}

struct Inputs {
    market: Market,
    detailed: DetailedMarket,
    doc: Value,
}

fn load_market_value(v: &Value) -> Result<(Market, DetailedMarket)> {
    if v.get("valuations").is_some() {
        let d: DetailedMarket = serde_json::from_value(v.clone())?;
        let m = d.derive_surplus()?;
        Ok((m, d))
    } else {
        let doc: MarketDoc = serde_json::from_value(v.clone())?;
        let m = Market::try_from(doc)?;
        m.ensure_valid()?;
        let d = DetailedMarket::zero_cost(&m);
        Ok((m, d))
    }
}

fn load(cfg: &RunConfig) -> Result<Inputs> {
    let path = cfg.input.as_ref().ok_or_else(|| Error::Parse("--input is required".into()))?;
    let doc: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    // "market" may embed the document or name a file next to the input.
    let (market, detailed) = match doc.get("market") {
        Some(Value::String(rel)) => {
            let p = path.parent().unwrap_or_else(|| std::path::Path::new(".")).join(rel);
            load_market_value(&serde_json::from_str(&fs::read_to_string(p)?)?)?
        }
        Some(v) => load_market_value(v)?,
        None => load_market_value(&doc)?,
    };
    Ok(Inputs { market, detailed, doc })
}

fn payoff_arg(cfg: &RunConfig, m: &Market) -> Result<PayoffVector> {
    let arg = cfg.payoff.as_deref().ok_or_else(|| Error::Parse("--payoff is required".into()))?;
    let p: PayoffVector = inline_or_file(arg)?.parse()?;
    p.check_dims(m)?;
    Ok(p)
}

fn matching_arg(cfg: &RunConfig) -> Result<Option<Matching>> {
    cfg.matching.as_deref().map(|a| Ok(serde_json::from_str(&inline_or_file(a)?)?)).transpose()
}

fn coalition_arg(cfg: &RunConfig, m: &Market) -> Result<Coalition> {
    match &cfg.coalition {
        None => Ok(Coalition::grand(m)),
        Some(s) => {
            let t: Coalition = s.parse()?;
            t.check_within(m)?;
            Ok(t)
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn dispatch(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Gen => return gen(cfg),
        Command::Selftest => return Ok(selftest()),
        _ => {}
    }
    let inp = load(cfg)?;
    let m = &inp.market;
    match cfg.command {
        Command::Solve => {
            let (mu, value) = optimal_matching(m, &Coalition::grand(m));
            let mu = mu.with_idle_middlemen(m.num_middlemen());
            let human = format!("optimal value: {value}\nmatching: {mu}");
            Report::ok(&json!({ "value": value, "matching": mu }), human)
        }
        Command::Worth => {
            let t = coalition_arg(cfg, m)?;
            let worth = coalition_worth(m, &t);
            Report::ok(&json!({ "coalition": t, "worth": worth }), format!("v({t}) = {worth}"))
        }
        Command::CoreCheck => {
            let p = payoff_arg(cfg, m)?;
            let cert = match cfg.mode {
                Mode::BruteForce => check_core_brute(m, &WorthTable::new(m, cfg.cap_coalitions)?, &p),
                Mode::Reduced => crate::solution::check_core(m, &p, CheckMode::Reduced)?,
            };
            Report::ok(&json!({ "payoff": p, "certificate": cert }), format!("{p}: {cert}"))
        }
        Command::BuyerOpt | Command::SellerOpt => {
            let p = if cfg.command == Command::BuyerOpt { buyer_optimal(m) } else { seller_optimal(m) };
            let mc: Vec<Rat> = m.agents().into_iter().map(|a| marginal_contribution(m, a)).collect();
            let mc_p = PayoffVector::from_flat(m, &mc);
            let human = format!("allocation: {p}\nmarginal contributions: {mc_p}");
            Report::ok(&json!({ "payoff": p, "marginal_contributions": mc_p }), human)
        }
        Command::Vertices => {
            let vs = core_vertices(m, cfg.cap_vertices)?;
            let human = format!("{} core vertices\n{}", vs.len(), vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"));
            Report::ok(&json!({ "vertices": vs }), human)
        }
        Command::MiddlemanOpt => {
            let rep = middleman_optimal_exists(m);
            let mut human = String::new();
            for (j, v) in rep.individual_max.iter().enumerate() {
                human += &format!("max core payoff of {}: {v}\n", AgentId::middleman(j));
            }
            let mut data = serde_json::to_value(&rep)?;
            if cfg.coalition.is_some() {
                let group = coalition_arg(cfg, m)?.middlemen;
                let v = max_middleman_group_payoff(m, &group);
                let labels: Vec<AgentId> = group.iter().map(|&j| AgentId::middleman(j)).collect();
                human += &format!("max joint core payoff of {{{}}}: {v}\n", join(&labels));
                data["group"] = json!({ "middlemen": labels, "max": v });
            }
            match (&rep.witness, &rep.certificate) {
                (Some(w), _) => human += &format!("middleman-optimal core point: {w}"),
                (None, Some(c)) => {
                    human += &format!(
                        "no middleman-optimal core point: {{{}}} individually reach {} but jointly at most {}",
                        join(&c.group),
                        c.sum_of_individual_max,
                        c.group_max
                    )
                }
                (None, None) => human += "no middleman-optimal core point",
            }
            Ok(Report { json: data, human, code: 0 })
        }
        Command::CeCheck => {
            let prices = inp.doc.get("prices").ok_or_else(|| Error::Parse("input needs a \"prices\" entry".into()))?;
            let prices = PriceVector::from_doc(serde_json::from_value::<PriceDoc>(prices.clone())?, &inp.detailed)?;
            let matching = match matching_arg(cfg)? {
                Some(mu) => mu,
                None => {
                    let mu = inp.doc.get("matching").ok_or_else(|| Error::Parse("input needs a \"matching\" entry".into()))?;
                    serde_json::from_value(mu.clone())?
                }
            };
            let e = EquilibriumPair { prices, matching };
            let rep = check_equilibrium(&inp.detailed, &e)?;
            let optimal = check_compatible_optimal(&inp.detailed, &e)?;
            let value = matching_value(m, &e.matching);
            let mut human = format!("{rep}\nmatching {} has value {value} (optimal: {optimal})", e.matching);
            let payoff = if rep.is_equilibrium {
                let p = equilibrium_payoff(&inp.detailed, &e)?;
                human += &format!("\nequilibrium payoff: {p}");
                Some(p)
            } else {
                None
            };
            Report::ok(&json!({ "report": rep, "matching_value": value, "optimal": optimal, "payoff": payoff }), human)
        }
        Command::CeFromCore => {
            let x = payoff_arg(cfg, m)?;
            let mu = matching_arg(cfg)?;
            let e = prices_from_core(&inp.detailed, &x, mu.as_ref())?;
            let payoff = induced_payoff(&inp.detailed, &e);
            let human = format!("matching: {}\nprices:\n{}\nequilibrium payoff: {payoff}", e.matching, e.prices);
            Report::ok(&json!({ "equilibrium": e, "payoff": payoff }), human)
        }
        Command::FixedFeeAudit => {
            let x = payoff_arg(cfg, m)?;
            let rep = fixed_fee_supportable(&inp.detailed, &x)?;
            let mut human = format!(
                "{x} {} with uniform middleman fees",
                if rep.supportable { "is supportable" } else { "is not supportable" }
            );
            for a in &rep.attempts {
                human += &format!("\nmatching {}", a.matching);
                for f in &a.fees {
                    human += &format!("\n  {} fee {} on {} trade(s) for payoff {}", f.middleman, f.fee, f.trades.len(), f.payoff);
                }
                for c in &a.conflicts {
                    human += &format!("\n  {} nets {} from {} but should get {}", c.buyer, c.net, c.trade, c.target);
                }
                if let Some(v) = &a.failure {
                    human += &format!("\n  {v}");
                }
            }
            Report::ok(&rep, human)
        }
        Command::Gen | Command::Selftest => unreachable!("handled above"),
    }
}

fn gen(cfg: &RunConfig) -> Result<Report> {
    if cfg.buyers == 0 || cfg.sellers == 0 {
        return Err(Error::Shape("need at least one buyer and one seller".into()));
    }
    if cfg.range < 0 {
        return Err(Error::Parse("--range must be non-negative".into()));
    }
    let m = seeded_market(cfg.seed, MarketShape::new(cfg.buyers, cfg.middlemen, cfg.sellers), cfg.range);
    let v = serde_json::to_value(&m)?;
    // Generated markets are data: always JSON.
    Ok(Report { human: pretty(&v), json: v, code: 0 })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
}

/// Re-derives the worked examples shipped in [`fixtures`].
pub fn selftest_checks() -> Vec<(&'static str, bool)> {
    let ex1 = fixtures::two_broker_market();
    let ex3 = fixtures::three_broker_market();
    let grand1 = Coalition::grand(&ex1);
    let mut out: Vec<(&'static str, bool)> = Vec::new();

    out.push(("two-broker market: v(N) = 12", coalition_worth(&ex1, &grand1) == Rat::from_int(12)));
    let t: Coalition = "b1,m1,s1,s2".parse().expect("valid labels");
    out.push(("two-broker market: v(b1,m1,s1,s2) = 4", coalition_worth(&ex1, &t) == Rat::from_int(4)));
    let (mu, _) = optimal_matching(&ex1, &grand1);
    out.push((
        "two-broker market: optimal matching routes both trades through m2",
        mu.trades().all(|(_, med, _)| med == Mediator::Via(1)) && mu.trades().count() == 2,
    ));
    let red = ex1.reduce();
    out.push((
        "two-broker market: reduced surplus [[6,3],[3,6]]",
        red.surplus == vec![vec![Rat::from_int(6), Rat::from_int(3)], vec![Rat::from_int(3), Rat::from_int(6)]],
    ));

    let mc: Vec<Rat> = ex3.agents().into_iter().map(|a| marginal_contribution(&ex3, a)).collect();
    out.push((
        "three-broker market: marginal contributions (2,10; 2,6,0; 2,8)",
        mc == [2, 10, 2, 6, 0, 2, 8].map(Rat::from_int),
    ));
    out.push((
        "three-broker market: buyer-optimal point (2,10; 0,0,0; 0,0)",
        buyer_optimal(&ex3) == PayoffVector::from_ints(&[2, 10], &[0, 0, 0], &[0, 0]),
    ));
    out.push((
        "three-broker market: seller-optimal point (0,2; 0,0,0; 2,8)",
        seller_optimal(&ex3) == PayoffVector::from_ints(&[0, 2], &[0, 0, 0], &[2, 8]),
    ));
    out.push((
        "three-broker market: max joint core payoff of m1, m2 is 6",
        max_middleman_group_payoff(&ex3, &[0, 1]) == Rat::from_int(6),
    ));
    out.push(("three-broker market: no middleman-optimal core point", !middleman_optimal_exists(&ex3).exists));

    let d = fixtures::two_broker_detailed();
    let x = PayoffVector::from_ints(&[3, 5], &[0, 3], &[1, 0]);
    let in_core = crate::solution::check_core(&ex1, &x, CheckMode::BruteForce).is_ok_and(|c| c.is_in_core());
    out.push(("two-broker market: (3,5; 0,3; 1,0) is in the core", in_core));
    let priced = prices_from_core(&d, &x, None)
        .and_then(|e| equilibrium_payoff(&d, &e))
        .is_ok_and(|p| p == x);
    out.push(("two-broker market: differentiated fees support (3,5; 0,3; 1,0)", priced));
    let fixed = fixed_fee_supportable(&d, &x).is_ok_and(|r| !r.supportable);
    out.push(("two-broker market: uniform fees cannot support (3,5; 0,3; 1,0)", fixed));
    out
}

fn selftest() -> Report {
    let checks = selftest_checks();
    let all = checks.iter().all(|c| c.1);
    let human = checks
        .iter()
        .map(|(n, ok)| format!("{} {n}", if *ok { "PASS" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    let list: Vec<Check> = checks.into_iter().map(|(name, passed)| Check { name, passed }).collect();
    Report { json: json!({ "passed": all, "checks": list }), human, code: if all { 0 } else { 1 } }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        for (name, ok) in selftest_checks() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn inline_payoff_forms() {
        assert_eq!(inline_or_file("3,5;0,3;1,0").unwrap(), "3,5;0,3;1,0");
        assert!(inline_or_file("/nonexistent/file").is_err());
    }
}
