//! Command dispatch for the `period-lab` binary.
//!
//! Every command is reduced to a [`Request`]: a command name, an action, an
//! optional JSON input and a bag of scalar parameters. The same structure is
//! read from each line of a batch file.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use period_lab::bdr_jet::{self, JetElement};
use period_lab::filtered_phi::{self, AdmissibilityStatus, FilteredPhiModule};
use period_lab::newton_polygon::{self as np, Polygon, SeriesProfile};
use period_lab::padic_core::Prime;
use period_lab::ramification::{self as ram, PLFunction, RamificationData, ZpExtensionProfile};
use period_lab::rational::{parse_q, Q};
use period_lab::representations::{self as reps, CharacterTriple, HodgeTateStatus, SenInput, SenOperator};
use period_lab::tilt::{self, Check, GaloisElement, TiltExpr, VflatStatus};
use period_lab::Error;

pub const SCHEMA_VERSION: &str = "period-lab/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "period-lab", version, about = "Exact computations in p-adic Hodge theory")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// p-adic working precision for Sen operators.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Jet truncation order.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Herbrand functions, ψ_r and trace decay.
    Herbrand(Invocation),
    /// Newton polygons.
    Polygon(Invocation),
    /// Elements of the tilt and A_inf.
    Tilt(Invocation),
    /// Jet identities in B_dR^+/Fil^m.
    Jet(Invocation),
    /// Filtered φ-modules.
    Phimod(Invocation),
    /// Characters of G_{Q_p}.
    Char(Invocation),
    /// Sen operators.
    Sen(Invocation),
    /// Process a file of JSON-line requests.
    Batch {
        #[arg(long)]
        input: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Invocation {
    pub action: String,
    /// JSON input: a file, `-` for standard input, or an inline document.
    #[arg(long)]
    pub input: Option<String>,
    #[command(flatten)]
    pub params: Params,
}

/// Scalar parameters shared by all commands. Rationals are given as strings.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub frob: Option<i64>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Level N of the θ evaluation.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub right: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Jump of a dimension-1 module.
    #[arg(long, allow_hyphen_values = true)]
    pub jump: Option<i64>,
    /// Named element: omega, epsilon-minus-one, pflat-minus-p.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(skip)]
    pub precision: Option<u32>,
    #[arg(skip)]
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Request {
    pub command: String,
    pub action: String,
    #[serde(default)]
    pub input: Option<Value>,
    #[serde(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub status: &'static str,
    pub result: Value,
    #[serde(skip)]
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Schema(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Schema(_) => EXIT_SCHEMA,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Schema(m) | Failure::Domain(m) => m,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Schema(_) => "schema",
            Failure::Domain(_) => "domain",
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_) => Failure::Schema(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn schema_err<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Schema(msg.into()))
}

struct Ctx<'a> {
    req: &'a Request,
}

impl Ctx<'_> {
    fn input<T: serde::de::DeserializeOwned>(&self) -> Result<T, Failure> {
        let v = self
            .req
            .input
            .clone()
            .ok_or_else(|| Failure::Schema("this action needs an input document".into()))?;
        serde_json::from_value(v).map_err(|e| Failure::Schema(format!("invalid input: {e}")))
    }

    fn pair<T: serde::de::DeserializeOwned>(&self) -> Result<(T, T), Failure> {
        #[derive(Deserialize)]
        struct Pair<T> {
            left: T,
            right: T,
        }
        let p: Pair<T> = self.input()?;
        Ok((p.left, p.right))
    }

    fn prime(&self) -> Result<Prime, Failure> {
        let p = self.req.params.p.ok_or_else(|| Failure::Schema("missing parameter p".into()))?;
        Ok(Prime::new(p)?)
    }

    fn rational(&self, name: &str, v: &Option<String>) -> Result<Q, Failure> {
        match v {
            Some(s) => Ok(parse_q(s)?),
            None => schema_err(format!("missing parameter {name}")),
        }
    }

    fn num<T: Copy>(&self, name: &str, v: Option<T>) -> Result<T, Failure> {
        v.ok_or_else(|| Failure::Schema(format!("missing parameter {name}")))
    }

    fn report(&self, undecided: bool, result: Value, text: String) -> Outcome {
        Ok(Report {
            schema: SCHEMA_VERSION,
            command: format!("{} {}", self.req.command, self.req.action),
            status: if undecided { "undecided" } else { "ok" },
            result,
            text,
        })
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Runs one request.
pub fn execute(req: &Request) -> Outcome {
    let ctx = Ctx { req };
    match req.command.as_str() {
        "herbrand" => herbrand(&ctx),
        "polygon" => polygon(&ctx),
        "tilt" => tilt_cmd(&ctx),
        "jet" => jet(&ctx),
        "phimod" => phimod(&ctx),
        "char" => character(&ctx),
        "sen" => sen(&ctx),
        other => schema_err(format!("unknown command '{other}'")),
    }
}

fn unknown_action(ctx: &Ctx) -> Outcome {
    schema_err(format!("unknown action '{}' for {}", ctx.req.action, ctx.req.command))
}

fn pl_text(f: &PLFunction) -> String {
    let pts: Vec<String> = f.breakpoints.iter().map(|(x, y)| format!("({x}, {y})")).collect();
    format!("breakpoints {} then slope {}", pts.join(" "), f.final_slope)
}

fn herbrand(ctx: &Ctx) -> Outcome {
    let pm = &ctx.req.params;
    match ctx.req.action.as_str() {
        "phi" => {
            let d: RamificationData = ctx.input()?;
            let f = ram::herbrand_phi(&d)?;
            ctx.report(false, to_value(&f), pl_text(&f))
        }
        "psi" => {
            let d: RamificationData = ctx.input()?;
            let f = ram::herbrand_psi(&ram::herbrand_phi(&d)?);
            ctx.report(false, to_value(&f), pl_text(&f))
        }
        "compose" => {
            #[derive(Deserialize)]
            struct Tower {
                upper: PLFunction,
                lower: PLFunction,
            }
            let t: Tower = ctx.input()?;
            t.upper.validate()?;
            t.lower.validate()?;
            let f = ram::compose_towers(&t.upper, &t.lower);
            ctx.report(false, to_value(&f), pl_text(&f))
        }
        "different" => {
            let d: RamificationData = ctx.input()?;
            let v = ram::different_valuation(&d)?;
            ctx.report(false, json!({ "valuation": v.to_string() }), format!("v(different) = {v}"))
        }
        "psi-r" => {
            let p = ctx.prime()?;
            let r = ctx.num("r", pm.r)?;
            let u = ctx.rational("u", &pm.u)?;
            let v = ram::psi_r(r, &u, p);
            ctx.report(false, json!({ "value": v.to_string() }), format!("psi_{r}({u}) = {v}"))
        }
        "jump" => {
            let prof: ZpExtensionProfile = ctx.input()?;
            let u = ctx.rational("u", &pm.u)?;
            let j = ram::zp_jump(&prof, &u)?;
            ctx.report(false, json!({ "jump": j }), format!("upper group at {u} is generated by gamma_{j}"))
        }
        "trace-decay" => {
            let prof: ZpExtensionProfile = ctx.input()?;
            let p = ctx.prime()?;
            match (pm.r, pm.s) {
                (Some(r), Some(s)) => {
                    let b = ram::trace_decay_bound(&prof, p, r, s)?;
                    ctx.report(false, json!({ "valuation": b.to_string() }), format!("v(D_{s}/{r}) = {b}"))
                }
                _ => {
                    let w: u32 = match &pm.window {
                        Some(w) => w.parse().map_err(|_| Failure::Schema("window must be an integer".into()))?,
                        None => 12,
                    };
                    let rep = ram::trace_decay_report(&prof, p, w)?;
                    let text = format!(
                        "defect sup {} at {:?}, uniform bound {}, c1 = {}, c2 = {}",
                        rep.defect_sup, rep.attained_at, rep.uniform_bound, rep.c1, rep.c2
                    );
                    ctx.report(false, to_value(&rep), text)
                }
            }
        }
        "hilbert90" => {
            let c1 = ctx.rational("c1", &pm.c1)?;
            let c2 = ram::hilbert90_constant(&c1)?;
            ctx.report(false, json!({ "c2": c2.to_string() }), format!("c2 = {c2}"))
        }
        _ => unknown_action(ctx),
    }
}

fn polygon_report(ctx: &Ctx, poly: &Polygon) -> Outcome {
    let text = np::ascii_sketch(poly, 48, 12);
    ctx.report(false, to_value(poly), text)
}

fn polygon(ctx: &Ctx) -> Outcome {
    let pm = &ctx.req.params;
    match ctx.req.action.as_str() {
        "hull" => {
            let prof: SeriesProfile = ctx.input()?;
            polygon_report(ctx, &np::hull(&prof)?)
        }
        "minkowski" => {
            let (a, b): (Polygon, Polygon) = ctx.pair()?;
            a.validate()?;
            b.validate()?;
            polygon_report(ctx, &np::minkowski_sum(&a, &b)?)
        }
        "frobenius" => {
            let poly: Polygon = ctx.input()?;
            poly.validate()?;
            let n = ctx.num("n", pm.n)?;
            polygon_report(ctx, &np::frobenius_transform(&poly, n, ctx.prime()?))
        }
        "omega" => polygon_report(ctx, &np::omega_polygon()),
        "epsilon" => {
            let p = ctx.prime()?;
            let w = ctx.rational("window", &pm.window)?;
            polygon_report(ctx, &np::epsilon_minus_one_polygon(p, &w)?)
        }
        "t" => {
            let p = ctx.prime()?;
            let l = ctx.rational("left", &pm.left)?;
            let r = ctx.rational("right", &pm.right)?;
            polygon_report(ctx, &np::t_polygon(p, &l, &r)?)
        }
        _ => unknown_action(ctx),
    }
}

fn tilt_input(ctx: &Ctx) -> Result<TiltExpr, Failure> {
    if let Some(name) = &ctx.req.params.name {
        let p = ctx.prime()?;
        return match name.as_str() {
            "omega" => Ok(tilt::omega(p)),
            "epsilon-minus-one" => Ok(tilt::epsilon_minus_one(p)),
            "pflat-minus-p" => Ok(tilt::pflat_minus_p(p)),
            other => schema_err(format!("unknown named element '{other}'")),
        };
    }
    ctx.input()
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Pass => "pass",
        Check::Fail => "fail",
        Check::Inconclusive => "inconclusive",
    }
}

fn tilt_cmd(ctx: &Ctx) -> Outcome {
    let pm = &ctx.req.params;
    let x = tilt_input(ctx)?;
    let level = pm.level.unwrap_or(3);
    match ctx.req.action.as_str() {
        "show" => ctx.report(false, to_value(&x), x.to_string()),
        "theta" => {
            let v = tilt::theta(&x, level)?;
            let text = match v.as_rational() {
                Some(q) => format!("theta = {q}"),
                None => format!("theta is nonzero with {} graded piece(s)", v.pieces.len()),
            };
            ctx.report(false, json!({ "zero": v.is_zero(), "value": to_value(&v) }), text)
        }
        "vflat" => {
            let r = tilt::vflat_sum(&x, pm.depth.unwrap_or(3))?;
            let undecided = r.status != VflatStatus::Stabilized;
            let text = match &r.value {
                Some(v) => format!("v_flat = {v} ({:?})", r.status),
                None => format!("v_flat undetermined ({:?})", r.status),
            };
            ctx.report(undecided, to_value(&r), text)
        }
        "probe" => {
            let r = tilt::ker_theta_orbit_probe(&x, level, pm.n_max.unwrap_or(4))?;
            let text = format!("theta(phi^n(x)) = 0 for n = 0..: {r:?}");
            ctx.report(false, json!({ "vanishes": r }), text)
        }
        "generator" => {
            let r = tilt::generator_condition_check(&x, level, pm.depth.unwrap_or(3))?;
            let undecided = r.vflat_mod_p_is_one == Check::Inconclusive;
            let text = format!(
                "theta = 0: {}; v_flat(x mod p) = 1: {}",
                check_name(r.theta_vanishes),
                check_name(r.vflat_mod_p_is_one)
            );
            ctx.report(undecided, to_value(&r), text)
        }
        "frobenius" => {
            let y = tilt::frobenius(&x, pm.n.unwrap_or(1));
            ctx.report(false, to_value(&y), y.to_string())
        }
        "galois" => {
            let g = galois_params(ctx, x.prime())?;
            let y = tilt::galois_act(&g, &x);
            ctx.report(false, to_value(&y), y.to_string())
        }
        "polygon" => {
            let fp = x.formal_polygon()?;
            let mut text = np::ascii_sketch(&fp.polygon, 48, 12);
            if fp.ties {
                text.push_str("warning: a hull vertex is attained by several terms\n");
            }
            ctx.report(fp.ties, to_value(&fp), text)
        }
        _ => unknown_action(ctx),
    }
}

fn galois_params(ctx: &Ctx, p: Prime) -> Result<GaloisElement, Failure> {
    let pm = &ctx.req.params;
    let chi = ctx.rational("chi", &pm.chi)?;
    let c = match &pm.c {
        Some(s) => parse_q(s)?,
        None => Q::from_integer(0.into()),
    };
    Ok(GaloisElement::new(chi, c, pm.frob.unwrap_or(0), p)?)
}

fn jet(ctx: &Ctx) -> Outcome {
    let pm = &ctx.req.params;
    let p = ctx.prime()?;
    let order = pm.order.unwrap_or(6);
    match ctx.req.action.as_str() {
        "verify-cocycle" => {
            let g = galois_params(ctx, p)?;
            let ok = bdr_jet::verify_cocycle(&g, p, order)?;
            let text = if ok { "verified".to_string() } else { "not verified (inconclusive in the free jet model)".into() };
            ctx.report(!ok, json!({ "verified": ok, "order": order }), text)
        }
        "gr-check" => {
            let m = ctx.num("m", pm.m)?;
            let ok = bdr_jet::gr_generator_check(p, m)?;
            ctx.report(!ok, json!({ "verified": ok, "m": m }), if ok { "verified".into() } else { "not verified".into() })
        }
        "t-identities" => {
            let g = galois_params(ctx, p)?;
            let t = bdr_jet::t_jet(p, order)?;
            let pq = Q::from_integer(p.get().into());
            let frob = bdr_jet::frobenius_jet(&t)? == t.scale(&pq);
            let gal = bdr_jet::galois_act_jet(&g, &t)? == t.scale(&g.chi);
            let t2 = bdr_jet::t_jet(p, 2.min(order))? == JetElement::u(p, 2.min(order))?;
            let all = frob && gal && t2;
            let text = format!("phi(t) = p t: {frob}; g(t) = chi t: {gal}; t = u mod degree 2: {t2}");
            ctx.report(!all, json!({ "phi_t": frob, "galois_t": gal, "t_mod_deg2": t2 }), text)
        }
        "t" => {
            let t = bdr_jet::t_jet(p, order)?;
            ctx.report(false, to_value(&t), t.to_string())
        }
        "log-pflat" => {
            let y = bdr_jet::log_pflat_jet(p, order)?;
            ctx.report(false, to_value(&y), y.to_string())
        }
        _ => unknown_action(ctx),
    }
}

fn phimod(ctx: &Ctx) -> Outcome {
    let pm = &ctx.req.params;
    match ctx.req.action.as_str() {
        "check" => {
            let m: FilteredPhiModule = ctx.input()?;
            let v = filtered_phi::is_admissible(&m);
            let word = match v.status {
                AdmissibilityStatus::Admissible => "admissible",
                AdmissibilityStatus::NotAdmissible => "not admissible",
                AdmissibilityStatus::Undecided => "undecided",
            };
            let text = format!("{word} (t_H = {}, t_N = {}, method {:?})", v.t_h, v.t_n, v.method);
            ctx.report(v.status == AdmissibilityStatus::Undecided, to_value(&v), text)
        }
        "numbers" => {
            let m: FilteredPhiModule = ctx.input()?;
            let (th, tn, w) = (m.hodge_number(), m.newton_number(), m.hodge_tate_weights());
            ctx.report(
                false,
                json!({ "t_h": th, "t_n": tn.to_string(), "hodge_tate_weights": w }),
                format!("t_H = {th}, t_N = {tn}, Hodge-Tate weights {w:?}"),
            )
        }
        "dual" => {
            let m: FilteredPhiModule = ctx.input()?;
            let d = m.dual();
            ctx.report(false, to_value(&d), format!("dual: t_H = {}, t_N = {}", d.hodge_number(), d.newton_number()))
        }
        "tensor" | "direct-sum" => {
            let (a, b): (FilteredPhiModule, FilteredPhiModule) = ctx.pair()?;
            let r = if ctx.req.action == "tensor" { a.tensor(&b)? } else { a.direct_sum(&b)? };
            ctx.report(false, to_value(&r), format!("t_H = {}, t_N = {}", r.hodge_number(), r.newton_number()))
        }
        "correspond" => {
            let p = ctx.prime()?;
            let lambda = ctx.rational("lambda", &pm.lambda)?;
            let r = ctx.num("jump", pm.jump)?;
            let c = filtered_phi::dim1_correspondence(p, &lambda, r)?;
            let text = format!("lambda = {}, a = {}, b = {}", c.lambda, c.a, c.b);
            ctx.report(false, to_value(&c), text)
        }
        _ => unknown_action(ctx),
    }
}

fn flags_text(c: &CharacterTriple) -> String {
    let f = c.classify();
    let mut parts = vec![
        format!("unramified={}", f.unramified),
        format!("cp_admissible={}", f.cp_admissible),
        format!("hodge_tate={}", f.hodge_tate),
        format!("de_rham={}", f.de_rham),
        format!("crystalline={}", f.crystalline),
    ];
    if let Some(w) = &f.hodge_tate_weight {
        parts.push(format!("weight={w}"));
    }
    parts.join(" ")
}

fn character(ctx: &Ctx) -> Outcome {
    match ctx.req.action.as_str() {
        "classify" => {
            let c: CharacterTriple = ctx.input()?;
            let c = c.validate()?;
            ctx.report(false, json!({ "character": to_value(&c), "flags": to_value(&c.classify()) }), flags_text(&c))
        }
        "multiply" => {
            let (a, b): (CharacterTriple, CharacterTriple) = ctx.pair()?;
            let c = a.validate()?.multiply(&b.validate()?)?;
            ctx.report(false, json!({ "character": to_value(&c), "flags": to_value(&c.classify()) }), flags_text(&c))
        }
        _ => unknown_action(ctx),
    }
}

fn sen(ctx: &Ctx) -> Outcome {
    let precision = ctx.req.params.precision.unwrap_or(reps::DEFAULT_PRECISION);
    let op = |ctx: &Ctx| -> Result<SenOperator, Failure> {
        let input: SenInput = ctx.input()?;
        Ok(reps::sen_operator(&input, precision)?)
    };
    match ctx.req.action.as_str() {
        "operator" => {
            let o = op(ctx)?;
            let text = format!("{:?}", o.reconstructed().unwrap_or_else(|| o.matrix.clone()).iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
            ctx.report(false, to_value(&o), text)
        }
        "trivial" => {
            let o = op(ctx)?;
            let t = reps::is_trivial_via_sen(&o);
            ctx.report(false, json!({ "trivial": t, "precision": precision }), format!("trivial: {t}"))
        }
        "hodge-tate" => {
            let o = op(ctx)?;
            let v = reps::hodge_tate_via_sen(&o);
            let ws: Vec<String> = v.weights.iter().map(|w| w.to_string()).collect();
            let text = format!("{:?}, generalized weights [{}]", v.status, ws.join(", "));
            ctx.report(v.status == HodgeTateStatus::Indeterminate, to_value(&v), text)
        }
        _ => unknown_action(ctx),
    }
}

/// Reads a document from inline JSON, a path or `-`, reporting JSON errors with positions.
pub fn read_json(path: &str) -> Result<Value, Failure> {
    let trimmed = path.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return serde_json::from_str(path).map_err(|e| Failure::Schema(format!("malformed inline JSON: {e}")));
    }
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("malformed JSON in {path}: {e}")))
}

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Domain(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {path}: {e}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchLine {
    pub line: usize,
    pub exit: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchSummary {
    pub schema: &'static str,
    pub total: usize,
    pub ok: usize,
    pub undecided: usize,
    pub errors: usize,
    pub results: Vec<BatchLine>,
}

fn run_line(line: usize, text: &str) -> BatchLine {
    let outcome = serde_json::from_str::<Request>(text)
        .map_err(|e| Failure::Schema(format!("malformed request: {e}")))
        .and_then(|req| execute(&req));
    match outcome {
        Ok(rep) => BatchLine {
            line,
            exit: if rep.status == "undecided" { EXIT_UNDECIDED } else { EXIT_OK },
            report: Some(rep),
            error: None,
        },
        Err(f) => BatchLine {
            line,
            exit: f.exit_code(),
            report: None,
            error: Some(json!({ "kind": f.kind(), "message": f.message() })),
        },
    }
}

/// Processes JSON lines in parallel; results keep input order.
pub fn batch(text: &str) -> (BatchSummary, i32) {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let results: Vec<BatchLine> = lines.par_iter().map(|(i, l)| run_line(*i, l)).collect();
    let count = |code: i32| results.iter().filter(|r| r.exit == code).count();
    let schema_errors = count(EXIT_SCHEMA);
    let domain_errors = count(EXIT_DOMAIN);
    let summary = BatchSummary {
        schema: SCHEMA_VERSION,
        total: results.len(),
        ok: count(EXIT_OK),
        undecided: count(EXIT_UNDECIDED),
        errors: schema_errors + domain_errors,
        results,
    };
    let exit = if schema_errors > 0 {
        EXIT_SCHEMA
    } else if domain_errors > 0 {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    };
    (summary, exit)
}

/// Result of a full CLI run: exit code plus the text destined for stdout and stderr.
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: Cli) -> RunOutput {
    let fail = |f: Failure| RunOutput {
        code: f.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {}\n", f.message()),
    };
    let (name, inv) = match cli.command {
        Command::Batch { input } => {
            let text = match read_text(&input) {
                Ok(t) => t,
                Err(f) => return fail(f),
            };
            let (summary, code) = batch(&text);
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
                Format::Text => batch_text(&summary),
            };
            return RunOutput {
                code,
                stdout,
                stderr: String::new(),
            };
        }
        Command::Herbrand(i) => ("herbrand", i),
        Command::Polygon(i) => ("polygon", i),
        Command::Tilt(i) => ("tilt", i),
        Command::Jet(i) => ("jet", i),
        Command::Phimod(i) => ("phimod", i),
        Command::Char(i) => ("char", i),
        Command::Sen(i) => ("sen", i),
    };
    let input = match inv.input.as_deref().map(read_json).transpose() {
        Ok(v) => v,
        Err(f) => return fail(f),
    };
    let mut params = inv.params;
    params.precision = params.precision.or(cli.precision);
    params.order = params.order.or(cli.order);
    let req = Request {
        command: name.into(),
        action: inv.action,
        input,
        params,
    };
    match execute(&req) {
        Ok(rep) => {
            let code = if rep.status == "undecided" { EXIT_UNDECIDED } else { EXIT_OK };
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rep).expect("serializable") + "\n",
                Format::Text => {
                    let mut t = rep.text.clone();
                    if !t.ends_with('\n') {
                        t.push('\n');
                    }
                    t
                }
            };
            RunOutput {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => fail(f),
    }
}

fn batch_text(s: &BatchSummary) -> String {
    let mut out = String::new();
    for r in &s.results {
        match (&r.report, &r.error) {
            (Some(rep), _) => out.push_str(&format!("line {}: {}: {}\n", r.line, rep.command, rep.text.lines().next().unwrap_or(""))),
            (_, Some(e)) => out.push_str(&format!("line {}: error: {}\n", r.line, e["message"].as_str().unwrap_or(""))),
            _ => {}
        }
    }
    out.push_str(&format!(
        "total {}, ok {}, undecided {}, errors {}\n",
        s.total, s.ok, s.undecided, s.errors
    ));
    out
}
