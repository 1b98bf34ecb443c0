//! Request dispatch for the `darboux` command-line tool.
//!
//! A request names a command, carries a command-specific payload and
//! optional budgets. Every response is a single JSON document with sorted
//! keys and canonical `"p/q"` rationals, so identical requests produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::sync::Arc;

use darboux_core::analysis::{
    integrate, linearity_audit, punctured_limit, sequence_limit, Functional, FunctionSpec, IntegrateOptions,
    IntegrationVerdict, LimitResult, LimitVerdict, Sequence, Side, Strategy,
};
use darboux_core::completion::{bdar_of_group, darboux_completion, AutomorphismGroup, DEFAULT_SET_LIMIT};
use darboux_core::cut::{audit_semifield, audit_translation_group, parse_expression, CutBudget, RationalCut};
use darboux_core::extension::{
    audit_composition, audit_sandwich, bounded_set, extremize, Extremizability, PartialMapJson, PartialMonotoneMap,
    DEFAULT_SEARCH_BUDGET,
};
use darboux_core::poset::{FinitePoset, MonotoneMap, PosetJson, DEFAULT_AUTOMORPHISM_LIMIT};
use darboux_core::rational::{format_rational, parse_rational, Rational};
use darboux_core::{AuditReport, BitSet, Error};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid input or a failed domain precondition.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status when a size or refinement budget ran out.
pub const EXIT_BUDGET: i32 = 2;

const DEFAULT_EPSILON: (i64, i64) = (1, 1_000_000);
const DEFAULT_LIMIT_DEPTH: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Complete,
    Extend,
    Darboux,
    Aut,
    Cic,
    RealEval,
    Integrate,
    Limit,
    Audit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Complete => "complete",
            Command::Extend => "extend",
            Command::Darboux => "darboux",
            Command::Aut => "aut",
            Command::Cic => "cic",
            Command::RealEval => "real-eval",
            Command::Integrate => "integrate",
            Command::Limit => "limit",
            Command::Audit => "audit",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    /// Bound on enumerated objects: candidate sets, extensions, maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Bound on refinement: bisection depth, partition rounds or stages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Command,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub budgets: Budgets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Response {
    pub command: Option<String>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
    #[serde(skip)]
    pub exit_code: i32,
}

impl Response {
    /// The response as one line of JSON with sorted keys.
    pub fn to_json_line(&self) -> String {
        let value = serde_json::to_value(self).expect("responses serialize");
        format!("{value}\n")
    }

    /// A one-line human-readable account of the outcome.
    pub fn summary(&self) -> String {
        let cmd = self.command.as_deref().unwrap_or("request");
        match (&self.result, &self.error) {
            (_, Some(e)) => format!("{cmd}: {} ({})", e.code, e.message),
            (Some(r), None) => match r.get("verdict").and_then(Value::as_str) {
                Some(v) => format!("{cmd}: {v}"),
                None => format!("{cmd}: ok"),
            },
            (None, None) => format!("{cmd}: ok"),
        }
    }
}

/// Failure before or during dispatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The request does not match the published schema.
    Schema(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `text` as a request. `expected` is the command implied by the
/// subcommand, if any: it is filled in when the request omits `command`
/// and must match otherwise.
pub fn parse_request(text: &str, expected: Option<Command>) -> Outcome<Request> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Failure::Schema(e.to_string()))?;
    if let (Some(cmd), Some(obj)) = (expected, value.as_object_mut()) {
        match obj.get("command") {
            None => {
                obj.insert("command".into(), json!(cmd.name()));
            }
            Some(given) if given != &json!(cmd.name()) => {
                return Err(Failure::Schema(format!(
                    "request command {given} does not match subcommand `{}`",
                    cmd.name()
                )));
            }
            Some(_) => {}
        }
    }
    serde_json::from_value(value).map_err(|e| Failure::Schema(e.to_string()))
}

/// Parses and runs one request given as text.
pub fn run_text(text: &str, expected: Option<Command>) -> Response {
    match parse_request(text, expected) {
        Ok(req) => run(&req),
        Err(f) => failure_response(expected, f),
    }
}

pub fn run(req: &Request) -> Response {
    let outcome = dispatch(req);
    match outcome {
        Ok((result, exit_code)) => Response {
            command: Some(req.command.name().into()),
            ok: true,
            result: Some(result),
            error: None,
            exit_code,
        },
        Err(f) => failure_response(Some(req.command), f),
    }
}

fn failure_response(cmd: Option<Command>, f: Failure) -> Response {
    let (code, message, exit_code) = match f {
        Failure::Schema(m) => ("SchemaError".to_string(), m, EXIT_DOMAIN),
        Failure::Domain(e) => {
            let exit = if e.is_budget() { EXIT_BUDGET } else { EXIT_DOMAIN };
            (e.code().to_string(), e.to_string(), exit)
        }
    };
    Response {
        command: cmd.map(|c| c.name().into()),
        ok: false,
        result: None,
        error: Some(ErrorBody { code, message }),
        exit_code,
    }
}

fn payload<T: DeserializeOwned>(req: &Request) -> Outcome<T> {
    serde_json::from_value(req.payload.clone()).map_err(|e| Failure::Schema(format!("payload: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn epsilon(b: &Budgets) -> Outcome<Rational> {
    let eps = match &b.epsilon {
        Some(s) => parse_rational(s)?,
        None => Rational::new(DEFAULT_EPSILON.0.into(), DEFAULT_EPSILON.1.into()),
    };
    if eps <= Rational::from_integer(0.into()) {
        return Err(Failure::Schema("budgets.epsilon must be positive".into()));
    }
    Ok(eps)
}

fn dispatch(req: &Request) -> Outcome<(Value, i32)> {
    let b = &req.budgets;
    let ok = |v: Value| Ok((v, EXIT_OK));
    match req.command {
        Command::Complete => ok(complete(&payload(req)?, b)?),
        Command::Extend => ok(extend(&payload(req)?, b)?),
        Command::Darboux => ok(darboux(&payload(req)?, b)?),
        Command::Aut => ok(aut(&payload(req)?, b)?),
        Command::Cic => ok(cic(&payload(req)?, b)?),
        Command::RealEval => ok(real_eval(&payload(req)?, b)?),
        Command::Integrate => integrate_cmd(&payload(req)?, b),
        Command::Limit => limit_cmd(&payload(req)?, b),
        Command::Audit => audit(&payload(req)?, b),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetPayload {
    poset: PosetJson,
}

fn poset(json: &PosetJson) -> Outcome<Arc<FinitePoset>> {
    Ok(Arc::new(FinitePoset::from_json(json)?))
}

fn names(p: &FinitePoset, set: &BitSet) -> Vec<String> {
    p.subset_names(set.iter())
}

fn complete(p: &PosetPayload, b: &Budgets) -> Outcome<Value> {
    let o = poset(&p.poset)?;
    let c = darboux_completion(&o, b.size.unwrap_or(DEFAULT_SET_LIMIT))?;
    let sets = |l: &darboux_core::SetLattice, idx: &mut dyn Iterator<Item = usize>| -> Vec<Vec<String>> {
        idx.map(|i| l.member_names(i)).collect()
    };
    let yoneda: BTreeMap<String, Vec<String>> = o
        .elements()
        .map(|x| (o.name(x).to_string(), c.dar.member_names(c.yoneda.apply(x))))
        .collect();
    Ok(json!({
        "down_sets": sets(&c.cocompletion, &mut (0..c.cocompletion.len())),
        "dar": sets(&c.dar, &mut (0..c.dar.len())),
        "dar_order": c.dar.poset.to_json(),
        "dar_prime": sets(&c.dar, &mut c.dar_prime_members.iter().copied()),
        "removed": {
            "min": c.dar.member_names(c.lex_empty),
            "max": c.dar.member_names(c.uex_empty),
            "min_is_principal": c.min_is_yoneda_image.map(|x| o.name(x).to_string()),
            "max_is_principal": c.max_is_yoneda_image.map(|x| o.name(x).to_string()),
        },
        "yoneda": yoneda,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapPayload {
    map: PartialMapJson,
}

fn extremes(psi: &PartialMonotoneMap, b: &Budgets) -> Outcome<Extremizability> {
    Ok(extremize(psi, b.size.unwrap_or(DEFAULT_SEARCH_BUDGET))?)
}

fn extend(p: &MapPayload, b: &Budgets) -> Outcome<Value> {
    let psi = PartialMonotoneMap::from_json(&p.map)?;
    let named = |m: &Option<MonotoneMap>| m.as_ref().map(MonotoneMap::to_named);
    Ok(match extremes(&psi, b)? {
        Extremizability::Extremizable(pair) => json!({
            "has_extension": true,
            "extremizable": true,
            "lower": pair.lower.to_named(),
            "upper": pair.upper.to_named(),
            "darboux_set": names(psi.source(), &pair.darboux_set()),
        }),
        Extremizability::NotExtremizable { lower, upper } => json!({
            "has_extension": true,
            "extremizable": false,
            "lower": named(&lower),
            "upper": named(&upper),
        }),
        Extremizability::NoExtension => json!({
            "has_extension": false,
            "extremizable": false,
            "lower": null,
            "upper": null,
        }),
    })
}

fn darboux(p: &MapPayload, b: &Budgets) -> Outcome<Value> {
    let psi = PartialMonotoneMap::from_json(&p.map)?;
    let pair = match extremes(&psi, b)? {
        Extremizability::Extremizable(pair) => pair,
        Extremizability::NotExtremizable { .. } => {
            return Err(Error::HypothesisViolated("the partial map is not extremizable".into()).into())
        }
        Extremizability::NoExtension => return Err(Error::NoExtension.into()),
    };
    let dar = pair.darboux_set();
    let bounded = bounded_set(&psi).elements;
    let mut bdar = dar.clone();
    bdar.intersect_with(&bounded);
    let s = psi.source();
    Ok(json!({
        "darboux_set": names(s, &dar),
        "bounded_set": names(s, &bounded),
        "bounded_darboux_set": names(s, &bdar),
        "darboux_extension": pair.darboux_extension().to_named(),
        "encompassing": psi.is_encompassing(),
    }))
}

fn aut(p: &PosetPayload, b: &Budgets) -> Outcome<Value> {
    let o = poset(&p.poset)?;
    let group = AutomorphismGroup::full(o, b.size.unwrap_or(DEFAULT_AUTOMORPHISM_LIMIT))?;
    let maps: Vec<BTreeMap<String, String>> = group.maps().iter().map(MonotoneMap::to_named).collect();
    Ok(json!({
        "order": group.len(),
        "commutative": group.is_commutative(),
        "automorphisms": maps,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CicPayload {
    lattice: PosetJson,
    /// Generators of the group; the whole automorphism group when absent.
    #[serde(default)]
    generators: Option<Vec<BTreeMap<String, String>>>,
}

fn named_map(p: &Arc<FinitePoset>, map: &BTreeMap<String, String>) -> Outcome<MonotoneMap> {
    let mut values = vec![None; p.len()];
    for (k, v) in map {
        values[p.require(k)?] = Some(p.require(v)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| Error::Invalid(format!("generator leaves `{}` unmapped", p.name(x)))))
        .collect::<Result<Vec<usize>, Error>>()?;
    Ok(MonotoneMap::new(p.clone(), p.clone(), values)?)
}

fn cic(p: &CicPayload, b: &Budgets) -> Outcome<Value> {
    let l = poset(&p.lattice)?;
    let group = match &p.generators {
        Some(gens) => {
            let maps = gens.iter().map(|g| named_map(&l, g)).collect::<Outcome<Vec<_>>>()?;
            AutomorphismGroup::generated_by(l, &maps)?
        }
        None => AutomorphismGroup::full(l, b.size.unwrap_or(DEFAULT_AUTOMORPHISM_LIMIT))?,
    };
    let r = bdar_of_group(&group, b.size.unwrap_or(DEFAULT_SEARCH_BUDGET))?;
    let members: Vec<BTreeMap<String, String>> = r.members.iter().map(MonotoneMap::to_named).collect();
    Ok(json!({
        "group_order": group.len(),
        "is_cic": r.is_cic,
        "commutative": r.is_commutative,
        "space_size": r.space_size,
        "darboux_size": r.darboux_size,
        "bounded_darboux": members,
        "report": to_value(&r.report),
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExprPayload {
    expr: String,
}

fn cut_budget(b: &Budgets) -> CutBudget {
    b.depth.map_or_else(CutBudget::default, |d| CutBudget { max_depth: d })
}

fn real_eval(p: &ExprPayload, b: &Budgets) -> Outcome<Value> {
    let eps = epsilon(b)?;
    let budget = cut_budget(b);
    let x = parse_expression(&p.expr, budget)?;
    let e = x.refine(&eps, budget)?;
    Ok(json!({
        "expr": p.expr,
        "enclosure": to_value(&e),
        "width": format_rational(&e.width()),
        "exact": x.as_rational().map(format_rational),
    }))
}

#[derive(Debug, Deserialize)]
struct IntegratePayload {
    #[serde(flatten)]
    function: FunctionSpec,
    #[serde(default)]
    strategy: Strategy,
}

fn integrate_cmd(p: &IntegratePayload, b: &Budgets) -> Outcome<(Value, i32)> {
    let f = p.function.build()?;
    let mut opts = IntegrateOptions::new(epsilon(b)?);
    opts.strategy = p.strategy;
    if let Some(d) = b.depth {
        opts.max_refine = d;
    }
    let r = integrate(&f, &opts)?;
    let exit = match r.verdict {
        IntegrationVerdict::Undetermined => EXIT_BUDGET,
        _ => EXIT_OK,
    };
    Ok((to_value(&r), exit))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LimitPayload {
    Sequence(Sequence),
    Function {
        #[serde(flatten)]
        function: FunctionSpec,
        at: String,
        #[serde(default = "closed")]
        side: Side,
    },
}

fn closed() -> Side {
    Side::Closed
}

fn limit_verdict(r: LimitResult) -> (Value, i32) {
    let exit = match r.verdict {
        LimitVerdict::Undetermined => EXIT_BUDGET,
        _ => EXIT_OK,
    };
    (to_value(&r), exit)
}

fn limit_cmd(p: &LimitPayload, b: &Budgets) -> Outcome<(Value, i32)> {
    let eps = epsilon(b)?;
    let depth = b.depth.unwrap_or(DEFAULT_LIMIT_DEPTH) as usize;
    let r = match p {
        LimitPayload::Sequence(s) => sequence_limit(s, &eps, depth)?,
        LimitPayload::Function { function, at, side } => {
            let f = function.build()?;
            punctured_limit(&f, &parse_rational(at)?, *side, &eps, depth)?
        }
    };
    Ok(limit_verdict(r))
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FunctionalKind {
    Integral,
    Limit,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "audit", rename_all = "kebab-case", deny_unknown_fields)]
enum AuditPayload {
    Sandwich {
        map: PartialMapJson,
    },
    Composition {
        first: PartialMapJson,
        second: PartialMapJson,
    },
    Semifield {
        x: String,
        y: String,
        z: String,
    },
    Translation {
        shifts: Vec<String>,
        exprs: Vec<String>,
    },
    Linearity {
        functional: FunctionalKind,
        f1: FunctionSpec,
        f2: FunctionSpec,
        a1: String,
        a2: String,
        #[serde(default)]
        at: Option<String>,
        #[serde(default)]
        side: Option<Side>,
    },
}

fn audit(p: &AuditPayload, b: &Budgets) -> Outcome<(Value, i32)> {
    let size = b.size.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let report: AuditReport = match p {
        AuditPayload::Sandwich { map } => audit_sandwich(&PartialMonotoneMap::from_json(map)?, size)?,
        AuditPayload::Composition { first, second } => {
            let psi1 = PartialMonotoneMap::from_json(first)?;
            let psi2 = PartialMonotoneMap::from_json(second)?;
            audit_composition(&psi1, &psi2, size)?
        }
        AuditPayload::Semifield { x, y, z } => {
            let budget = cut_budget(b);
            let parse = |s: &str| parse_expression(s, budget);
            audit_semifield(&parse(x)?, &parse(y)?, &parse(z)?, &epsilon(b)?, budget)?
        }
        AuditPayload::Translation { shifts, exprs } => {
            let budget = cut_budget(b);
            let shifts = shifts.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            let cuts = exprs
                .iter()
                .map(|s| parse_expression(s, budget))
                .collect::<Result<Vec<RationalCut>, _>>()?;
            audit_translation_group(&shifts, &cuts, &epsilon(b)?, budget)?
        }
        AuditPayload::Linearity {
            functional,
            f1,
            f2,
            a1,
            a2,
            at,
            side,
        } => {
            let functional = match functional {
                FunctionalKind::Integral => Functional::Integral {
                    rounds: b.depth.unwrap_or(4),
                },
                FunctionalKind::Limit => Functional::Limit {
                    x0: parse_rational(
                        at.as_deref()
                            .ok_or_else(|| Failure::Schema("a limit functional needs `at`".into()))?,
                    )?,
                    side: side.unwrap_or(Side::Punctured),
                    depth: b.depth.unwrap_or(16) as usize,
                },
            };
            linearity_audit(
                &functional,
                &f1.build()?,
                &f2.build()?,
                &parse_rational(a1)?,
                &parse_rational(a2)?,
            )?
        }
    };
    Ok((to_value(&report), EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_must_match_subcommand() {
        let r = run_text(r#"{"command":"aut","payload":{}}"#, Some(Command::Complete));
        assert_eq!(r.error.unwrap().code, "SchemaError");
        assert_eq!(r.exit_code, EXIT_DOMAIN);
    }

    #[test]
    fn missing_command_is_filled_in() {
        let r = run_text(r#"{"payload":{"poset":{"elements":["a"]}}}"#, Some(Command::Aut));
        assert!(r.ok, "{r:?}");
        assert_eq!(r.result.unwrap()["order"], json!(1));
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let r = run_text(r#"{"command":"aut","payload":{"poset":{"elements":[]}},"extra":1}"#, None);
        assert_eq!(r.error.unwrap().code, "SchemaError");
    }

    #[test]
    fn budget_errors_exit_with_two() {
        let r = run_text(
            r#"{"command":"complete","payload":{"poset":{"elements":["a","b","c"]}},"budgets":{"size":4}}"#,
            None,
        );
        assert_eq!(r.error.as_ref().unwrap().code, "SizeLimitExceeded");
        assert_eq!(r.exit_code, EXIT_BUDGET);
    }

    #[test]
    fn domain_errors_exit_with_one() {
        let r = run_text(r#"{"command":"real-eval","payload":{"expr":"sqrt(-2)"}}"#, None);
        assert_eq!(r.exit_code, EXIT_DOMAIN);
        assert_eq!(r.error.unwrap().code, "NonPositive");
    }

    #[test]
    fn summaries_name_the_verdict() {
        let r = run_text(r#"{"command":"limit","payload":{"sequence":"alternating"}}"#, None);
        assert_eq!(r.summary(), "limit: DivergentGap");
    }
}
