//! Command-line front end: argument parsing, dispatch to `plinth-core`, and
//! JSON or text reports.
//!
//! Every polynomial in a report is printed in the input grammar, so reports
//! can be fed back in.

use std::fmt;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use plinth_core::coordinates::RejectionReason;
use plinth_core::groebner::GroebnerError;
use plinth_core::{
    buchberger, compute_rank, coordinate_test, factor_multi, minimal_local_slice, parse_poly,
    uni_multivariate_decompose, AutomorphismStep, CandidateRejection, CoordinateCertificate, Derivation,
    DerivationError, KernelPair, LocalSlice, MonomialOrder, PlinthCertificate, PlinthError, Poly, RankError,
    RankOptions, RankReport, RankWitness, Rational, Ring,
};
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "plinth", version, about = "Plinth ideals and ranks of locally nilpotent derivations of Q[x,y,z]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Comma-separated variable names (default x,y,z; x,y for two-variable commands).
    #[arg(long, global = true)]
    pub vars: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Time budget in seconds for Gröbner-based stages.
    #[arg(long, global = true)]
    pub budget: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local nilpotency test for the Jacobian derivation of f and g.
    Recognize { f: String, g: String },
    /// Initial local slice of a1*dx + a2*dy + a3*dz.
    Slice { a1: String, a2: String, a3: String },
    /// Minimal local slice and plinth generator.
    Plinth {
        a1: String,
        a2: String,
        a3: String,
        #[arg(long, num_args = 2, value_names = ["F", "G"], required = true)]
        kernel: Vec<String>,
    },
    /// Rank, from coefficients and a kernel pair or from a Jacobian pair.
    Rank {
        #[arg(num_args = 0..=3)]
        coeffs: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["F", "G"], conflicts_with = "jacobian")]
        kernel: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["F", "G"])]
        jacobian: Option<Vec<String>>,
    },
    /// Uni-multivariate decomposition c = l(u) with u a coordinate.
    Decompose { c: String },
    /// Coordinate test in two variables.
    IsCoordinate { p: String },
    /// Irreducible factorization over Q.
    Factor { p: String },
    /// Reduced lexicographic Gröbner basis.
    Groebner {
        #[arg(required = true)]
        polys: Vec<String>,
        /// `lex:v1,v2,...` with the variables listed from greatest to least.
        #[arg(long)]
        order: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Recognize { .. } => "recognize",
            Command::Slice { .. } => "slice",
            Command::Plinth { .. } => "plinth",
            Command::Rank { .. } => "rank",
            Command::Decompose { .. } => "decompose",
            Command::IsCoordinate { .. } => "is-coordinate",
            Command::Factor { .. } => "factor",
            Command::Groebner { .. } => "groebner",
        }
    }

    fn default_vars(&self) -> &'static str {
        match self {
            Command::Decompose { .. } | Command::IsCoordinate { .. } => "x,y",
            _ => "x,y,z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Timeout,
    Precondition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn input(m: impl fmt::Display) -> CliError {
        CliError { kind: ErrorKind::Input, message: m.to_string() }
    }

    fn precondition(m: impl fmt::Display) -> CliError {
        CliError { kind: ErrorKind::Precondition, message: m.to_string() }
    }

    fn timeout() -> CliError {
        CliError { kind: ErrorKind::Timeout, message: "time budget exhausted".into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Timeout => 3,
            ErrorKind::Precondition => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Input => "input error",
            ErrorKind::Timeout => "timeout",
            ErrorKind::Precondition => "precondition violated",
        };
        write!(f, "{kind}: {}", self.message)
    }
}

impl From<PlinthError> for CliError {
    fn from(e: PlinthError) -> CliError {
        if e.is_timeout() {
            CliError::timeout()
        } else {
            CliError::precondition(e)
        }
    }
}

impl From<RankError> for CliError {
    fn from(e: RankError) -> CliError {
        if e.is_timeout() {
            CliError::timeout()
        } else {
            CliError::precondition(e)
        }
    }
}

impl From<DerivationError> for CliError {
    fn from(e: DerivationError) -> CliError {
        CliError::precondition(e)
    }
}

/// The structured result of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub vars: Vec<String>,
    pub result: Value,
    /// Stage timings in seconds; excluded from determinism comparisons.
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).unwrap(),
            Format::Text => {
                let mut out = format!("{} (plinth {})\n", self.command, self.version);
                text_lines(&mut out, "", &self.result);
                for (stage, secs) in &self.timings {
                    out.push_str(&format!("time.{stage}: {secs:.6}s\n"));
                }
                out
            }
        }
    }
}

fn text_lines(out: &mut String, prefix: &str, v: &Value) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                text_lines(out, &key(k), v);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                text_lines(out, &key(&i.to_string()), v);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_vars(list: &str) -> Result<Ring, CliError> {
    let names: Vec<&str> = list.split(',').map(str::trim).collect();
    Ring::new(&names).map_err(CliError::input)
}

fn parse(text: &str, ring: &Ring) -> Result<Poly, CliError> {
    parse_poly(text, ring).map_err(|e| CliError::input(format!("in {text:?}: {e}")))
}

fn need_arity(ring: &Ring, n: usize, what: &str) -> Result<(), CliError> {
    if ring.len() != n {
        return Err(CliError::input(format!("{what} needs exactly {n} variables, got {}", ring.len())));
    }
    Ok(())
}

fn derivation(coeffs: &[String], ring: &Ring) -> Result<Derivation, CliError> {
    need_arity(ring, 3, "a derivation")?;
    let [a, b, c] = coeffs else {
        return Err(CliError::input("a derivation needs three coefficients"));
    };
    Ok(Derivation::new(parse(a, ring)?, parse(b, ring)?, parse(c, ring)?)?)
}

fn kernel_pair(texts: &[String], ring: &Ring) -> Result<KernelPair, CliError> {
    Ok(KernelPair { f: parse(&texts[0], ring)?, g: parse(&texts[1], ring)? })
}

fn s(p: &Poly) -> Value {
    Value::String(p.to_string())
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn coeffs_json(d: &Derivation) -> Value {
    Value::Array(d.coeffs().iter().map(s).collect())
}

fn slice_json(l: &LocalSlice) -> Value {
    json!({ "s": s(&l.s), "value": s(&l.value) })
}

fn plinth_json(c: &PlinthCertificate) -> Value {
    json!({
        "initial": slice_json(&c.initial),
        "slice": slice_json(&c.slice),
        "generator": s(&c.generator),
        "generator_abstract": s(&c.generator_abstract),
        "kernel_vars": c.kernel_ring.vars(),
        "trail": c.trail.iter().map(|r| json!({
            "prime": s(&r.prime),
            "succeeded": r.succeeded(),
            "kernel_element": r.kernel_element.as_ref().map(s),
            "quotient": r.quotient.as_ref().map(s),
        })).collect::<Vec<_>>(),
        "certified_primes": c.certified_primes.iter().map(s).collect::<Vec<_>>(),
    })
}

fn step_json(step: &AutomorphismStep, ring: &Ring) -> Value {
    let kind = match step {
        AutomorphismStep::Affine { .. } => "affine",
        AutomorphismStep::Elementary { .. } => "elementary",
    };
    json!({ "kind": kind, "images": step.images(ring).iter().map(s).collect::<Vec<_>>() })
}

fn certificate_json(c: &CoordinateCertificate, ring: &Ring) -> Value {
    json!({
        "is_coordinate": c.is_coordinate,
        "witness": c.witness.as_ref().map(|w| w.steps.iter().map(|st| step_json(st, ring)).collect::<Vec<_>>()),
        "complement": c.complement.as_ref().map(s),
        "rejection": c.rejection.as_ref().map(|r| r.to_string()),
    })
}

fn rejection_json(r: &CandidateRejection) -> Value {
    let kind = match r.reason {
        RejectionReason::DivisibilityFailed => "divisibility_failed",
        RejectionReason::NotACoordinate(_) => "not_a_coordinate",
        RejectionReason::NotAffineFactorForm => "not_affine_factor_form",
    };
    json!({ "candidate": s(&r.candidate), "reason": kind, "detail": r.reason.to_string() })
}

fn rank_json(r: &RankReport) -> Value {
    let kr = &r.plinth.kernel_ring;
    let witness = match &r.witness {
        RankWitness::Slice { s: sl } => json!({ "kind": "slice", "s": s(sl) }),
        RankWitness::RankTwo { outer, inner_abstract, inner, certificate } => json!({
            "kind": "rank_two",
            "outer": rationals(outer),
            "inner_abstract": s(inner_abstract),
            "inner": s(inner),
            "certificate": certificate_json(certificate, kr),
        }),
        RankWitness::RankThree { rejections } => json!({
            "kind": "rank_three",
            "rejections": rejections.iter().map(rejection_json).collect::<Vec<_>>(),
        }),
    };
    json!({
        "rank": r.rank,
        "content": s(&r.content),
        "reduced": coeffs_json(&r.reduced),
        "plinth": plinth_json(&r.plinth),
        "witness": witness,
    })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Execute one parsed command line.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let deadline = match cli.budget {
        Some(b) if !(b.is_finite() && b >= 0.0) => return Err(CliError::input("budget must be a nonnegative number")),
        Some(b) => Some(start + Duration::from_secs_f64(b)),
        None => None,
    };
    let ring = parse_vars(cli.vars.as_deref().unwrap_or(cli.command.default_vars()))?;
    let mut timings: Vec<(String, f64)> = Vec::new();

    let result = match &cli.command {
        Command::Recognize { f, g } => {
            need_arity(&ring, 3, "recognize")?;
            let rec = Derivation::recognize_jacobian(&parse(f, &ring)?, &parse(g, &ring)?)?;
            json!({
                "derivation": coeffs_json(&rec.derivation),
                "bound": rec.bound,
                "locally_nilpotent": rec.locally_nilpotent,
            })
        }
        Command::Slice { a1, a2, a3 } => {
            let d = derivation(&[a1.clone(), a2.clone(), a3.clone()], &ring)?;
            slice_json(&d.initial_local_slice(None)?)
        }
        Command::Plinth { a1, a2, a3, kernel } => {
            let d = derivation(&[a1.clone(), a2.clone(), a3.clone()], &ring)?;
            let kp = kernel_pair(kernel, &ring)?;
            plinth_json(&minimal_local_slice(&d, &kp, deadline)?)
        }
        Command::Rank { coeffs, kernel, jacobian } => {
            need_arity(&ring, 3, "rank")?;
            let opts = RankOptions { deadline };
            let (report, recognition) = match (kernel, jacobian) {
                (Some(k), None) => {
                    let d = derivation(coeffs, &ring)?;
                    (compute_rank(&d, &kernel_pair(k, &ring)?, &opts)?, Value::Null)
                }
                (None, Some(j)) => {
                    if !coeffs.is_empty() {
                        return Err(CliError::input("--jacobian takes no coefficients"));
                    }
                    let kp = kernel_pair(j, &ring)?;
                    let rec = Derivation::recognize_jacobian(&kp.f, &kp.g)?;
                    if !rec.locally_nilpotent {
                        return Err(CliError::precondition(format!(
                            "the Jacobian derivation of ({}, {}) is not locally nilpotent",
                            kp.f, kp.g
                        )));
                    }
                    let rep = compute_rank(&rec.derivation, &kp, &opts)?;
                    (rep, json!({ "bound": rec.bound, "locally_nilpotent": true, "derivation": coeffs_json(&rec.derivation) }))
                }
                _ => return Err(CliError::input("rank needs --kernel F G or --jacobian F G")),
            };
            timings.extend(report.timings.iter().map(|(k, d)| (k.to_string(), secs(*d))));
            let mut v = rank_json(&report);
            if !recognition.is_null() {
                v["recognition"] = recognition;
            }
            v
        }
        Command::Decompose { c } => {
            need_arity(&ring, 2, "decompose")?;
            let c = parse(c, &ring)?;
            if c.is_constant() {
                return Err(CliError::precondition("cannot decompose a constant"));
            }
            let d = uni_multivariate_decompose(&c);
            json!({
                "found": d.found,
                "inner": d.inner.as_ref().map(s),
                "outer": d.outer.as_deref().map(rationals),
                "certificate": d.certificate.as_ref().map(|c| certificate_json(c, &ring)),
                "candidates_tried": d.candidates_tried.iter().map(rejection_json).collect::<Vec<_>>(),
            })
        }
        Command::IsCoordinate { p } => {
            need_arity(&ring, 2, "is-coordinate")?;
            certificate_json(&coordinate_test(&parse(p, &ring)?), &ring)
        }
        Command::Factor { p } => {
            let p = parse(p, &ring)?;
            let f = factor_multi(&p).map_err(CliError::precondition)?;
            json!({
                "unit": f.unit.to_string(),
                "factors": f.factors.iter().map(|(g, m)| json!({ "factor": s(g), "multiplicity": m })).collect::<Vec<_>>(),
            })
        }
        Command::Groebner { polys, order } => {
            let names = order
                .strip_prefix("lex:")
                .ok_or_else(|| CliError::input(format!("unsupported order {order:?}; expected lex:v1,v2,...")))?;
            let mut names: Vec<&str> = names.split(',').map(str::trim).collect();
            let gens = polys.iter().map(|t| parse(t, &ring)).collect::<Result<Vec<_>, _>>()?;
            // the flag lists greatest first; the library takes least first
            names.reverse();
            let gb = buchberger(&gens, &MonomialOrder::lex(&names), deadline).map_err(|e| match e {
                GroebnerError::Timeout => CliError::timeout(),
                e => CliError::input(e),
            })?;
            json!({
                "order": names.iter().rev().collect::<Vec<_>>(),
                "generators": gb.generators.iter().map(s).collect::<Vec<_>>(),
            })
        }
    };
    timings.push(("command".into(), secs(start.elapsed())));
    Ok(Report {
        version: VERSION,
        command: cli.command.name(),
        vars: ring.vars().to_vec(),
        result,
        timings,
    })
}
