//! Command line front end. Every command prints one JSON document
//! `{status, command, payload, summary}` on standard output; exact numbers
//! are always decimal strings.

use std::fs;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dedekind::arith::{format_rat, Int};
use dedekind::closure::{
    approx_member, closure_intersection_probe, closure_member, is_dense, is_relatively_closed, Extension, ProbeOutcome,
};
use dedekind::field::{FieldElement, FieldSpec, NumberField};
use dedekind::galois::{chebotarev_census, decomposition_field, frobenius, subfield_generated_by, GaloisGroup};
use dedekind::ge2::{
    bounded_search, reduce, verify_reduction, ElementaryOp, Pair, ReductionTrace, RingHandle, SearchOutcome, Side,
};
use dedekind::intpoly::{build_witness, image_description, int_membership, verify_witness};
use dedekind::par::Execution;
use dedekind::splitting::{compare_primes, factor_prime, PrimeIdeal};
use dedekind::{Error, ErrorClass};

/// Seed used when neither `--seed` nor `DEDEKIND_SEED` is given.
pub const DEFAULT_SEED: u64 = 20240229;

#[derive(Parser, Debug)]
#[command(name = "dedekind", version, about = "Exact decomposition fields, Q-adic closures and GE2 reductions")]
pub struct Cli {
    /// Seed for randomly drawn elements (overrides DEDEKIND_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PrimeArgs {
    /// Rational prime below the chosen prime ideal.
    #[arg(long)]
    pub prime_over: u64,
    /// Which prime above `--prime-over`, in canonical order.
    #[arg(long, default_value_t = 0)]
    pub prime_index: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ExtArgs {
    /// Power-basis coordinates of a generator of the base field K (default Q).
    #[arg(long, allow_hyphen_values = true)]
    pub base_generator: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ElementArg {
    /// Power-basis coordinates, e.g. `0,1` for theta. Drawn at random from
    /// the seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor p O_K into prime ideals.
    FactorPrime { field: String, p: u64 },
    /// v_P of an element.
    Valuation {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Decomposition group and field of a prime.
    DecompositionField {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// Frobenius element of an unramified prime.
    Frobenius {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// Frobenius class counts for primes up to a bound.
    Chebotarev {
        field: String,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Membership in the Q-adic closure of O_K via the decomposition field.
    ClosureMember {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        element: ElementArg,
        /// Cross-check with the lattice approximation method.
        #[arg(long)]
        verify: bool,
    },
    /// Lattice approximation of an element by O_K modulo Q^k.
    Approx {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        element: ElementArg,
        /// Approximation level k (approximate modulo Q^k).
        #[arg(long, default_value_t = 4)]
        level: u32,
        /// Cross-check membership with the decomposition-field method.
        #[arg(long)]
        verify: bool,
    },
    /// Search the first primes for one where the element leaves the closure.
    Probe {
        field: String,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        element: ElementArg,
        /// Number of rational primes to scan.
        #[arg(long, default_value_t = 25)]
        budget: usize,
        /// Confirm a witness with the lattice approximation method.
        #[arg(long)]
        verify: bool,
    },
    /// Integer-valued witness polynomial for a non-member.
    Witness {
        field: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        element: ElementArg,
        /// Re-check that the witness is integer-valued and separates the element.
        #[arg(long)]
        verify: bool,
    },
    /// Whether a polynomial over K maps O_K into O_K. Coefficients are
    /// separated by `;`, constant first.
    IntMember {
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Classify the image Int(O_K)[c].
    Image {
        field: String,
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        element: ElementArg,
        /// Number of rational primes to scan.
        #[arg(long, default_value_t = 25)]
        budget: usize,
    },
    /// Reduce a unimodular pair to (1, 0) by elementary operations.
    Ge2Reduce {
        #[arg(long)]
        ring: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Replay the trace before printing it.
        #[arg(long)]
        verify: bool,
    },
    /// Replay a trace document (the payload of ge2-reduce) from a file.
    Ge2Verify { trace: String },
    /// Bounded breadth-first search for a reduction.
    Ge2Search {
        #[arg(long)]
        ring: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Maximum number of operations.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Height bound for multipliers and intermediate entries.
        #[arg(long, default_value_t = 2)]
        height: u64,
        /// Abort with a resource error after this many states.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FactorPrime { .. } => "factor-prime",
            Command::Valuation { .. } => "valuation",
            Command::DecompositionField { .. } => "decomposition-field",
            Command::Frobenius { .. } => "frobenius",
            Command::Chebotarev { .. } => "chebotarev",
            Command::ClosureMember { .. } => "closure-member",
            Command::Approx { .. } => "approx",
            Command::Probe { .. } => "probe",
            Command::Witness { .. } => "witness",
            Command::IntMember { .. } => "int-member",
            Command::Image { .. } => "image",
            Command::Ge2Reduce { .. } => "ge2-reduce",
            Command::Ge2Verify { .. } => "ge2-verify",
            Command::Ge2Search { .. } => "ge2-search",
        }
    }
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub document: Value,
}

impl CommandResult {
    fn ok(command: &str, payload: Value, summary: String) -> Self {
        CommandResult {
            exit_code: 0,
            document: json!({ "status": "ok", "command": command, "payload": payload, "summary": summary }),
        }
    }

    fn failure(command: &str, exit_code: i32, code: &str, message: String) -> Self {
        CommandResult {
            exit_code,
            document: json!({
                "status": "error",
                "command": command,
                "payload": { "code": code },
                "summary": message,
            }),
        }
    }

    pub fn status(&self) -> &str {
        self.document["status"].as_str().unwrap_or("error")
    }

    pub fn payload(&self) -> &Value {
        &self.document["payload"]
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.document).expect("JSON values serialize")
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err.class() {
        ErrorClass::Usage => 1,
        ErrorClass::MathDomain => 2,
        ErrorClass::Resource => 3,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return CommandResult { exit_code: 0, document: json!({ "status": "ok", "command": "help", "payload": {}, "summary": e.to_string() }) };
            }
            CommandResult::failure("", 1, "usage", e.to_string())
        }
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let name = cli.command.name();
    let ctx = Context {
        seed: cli.seed.or_else(env_seed).unwrap_or(DEFAULT_SEED),
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    match ctx.dispatch(&cli.command) {
        Ok((payload, summary)) => CommandResult::ok(name, payload, summary),
        Err(e) => CommandResult::failure(name, exit_code(&e), e.code(), e.to_string()),
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("DEDEKIND_SEED").ok()?.trim().parse().ok()
}

pub fn load_field(path: &str) -> Result<Arc<NumberField>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    FieldSpec::from_json(&text)?.build()
}

fn elem_json(x: &FieldElement) -> Value {
    Value::from(x.coord_strings())
}

fn int_str(n: &Int) -> Value {
    Value::from(n.to_string())
}

fn prime_json(q: &PrimeIdeal) -> Value {
    json!({
        "p": q.p().to_string(),
        "generator": elem_json(q.generator()),
        "e": q.e().to_string(),
        "f": q.f().to_string(),
        "norm": int_str(&q.norm()),
    })
}

fn parse_element(field: &Arc<NumberField>, s: &str) -> Result<FieldElement, Error> {
    FieldElement::parse(field, s)
}

/// Parses a trace element from its JSON coordinate list.
fn element_from_json(field: &Arc<NumberField>, v: &Value) -> Result<FieldElement, Error> {
    let coords = v
        .as_array()
        .ok_or_else(|| Error::InvalidArgument("element must be a list of coordinate strings".into()))?
        .iter()
        .map(|c| c.as_str().map(str::to_owned).ok_or_else(|| Error::InvalidArgument("coordinate must be a string".into())))
        .collect::<Result<Vec<_>, _>>()?;
    parse_element(field, &coords.join(","))
}

pub fn trace_json(t: &ReductionTrace) -> Value {
    json!({
        "ring": t.ring.to_string(),
        "start": [elem_json(&t.start.0), elem_json(&t.start.1)],
        "ops": t.ops.iter().map(|op| json!({ "side": op.side.name(), "multiplier": elem_json(&op.multiplier) })).collect::<Vec<_>>(),
        "end": [elem_json(&t.end.0), elem_json(&t.end.1)],
    })
}

pub fn trace_from_json(v: &Value) -> Result<ReductionTrace, Error> {
    let bad = |m: &str| Error::InvalidArgument(format!("trace document: {m}"));
    let ring = RingHandle::parse(v["ring"].as_str().ok_or_else(|| bad("missing ring"))?)?;
    let field = ring.field().clone();
    let pair = |key: &str| -> Result<Pair, Error> {
        let arr = v[key].as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(key))?;
        Ok((element_from_json(&field, &arr[0])?, element_from_json(&field, &arr[1])?))
    };
    let start = pair("start")?;
    let end = pair("end")?;
    let ops = v["ops"]
        .as_array()
        .ok_or_else(|| bad("missing ops"))?
        .iter()
        .map(|op| {
            let side = Side::parse(op["side"].as_str().ok_or_else(|| bad("side"))?)?;
            Ok(ElementaryOp::new(side, element_from_json(&field, &op["multiplier"])?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ReductionTrace { ring, start, ops, end })
}

struct Context {
    seed: u64,
    exec: Execution,
}

type Outcome = Result<(Value, String), Error>;

impl Context {
    fn element(&self, field: &Arc<NumberField>, arg: &ElementArg) -> Result<FieldElement, Error> {
        match &arg.element {
            Some(s) => parse_element(field, s),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let v: Vec<Int> = (0..field.degree()).map(|_| Int::from(rng.gen_range(-9i64..=9))).collect();
                Ok(FieldElement::from_omega(field, &v))
            }
        }
    }

    fn extension(&self, field: &Arc<NumberField>, ext: &ExtArgs) -> Result<Extension, Error> {
        match &ext.base_generator {
            None => Extension::over_rationals(field),
            Some(s) => {
                let alpha = parse_element(field, s)?;
                let (_, emb) = subfield_generated_by(&alpha)?;
                Extension::new(emb)
            }
        }
    }

    fn prime(&self, field: &Arc<NumberField>, args: &PrimeArgs) -> Result<PrimeIdeal, Error> {
        let mut primes = factor_prime(field, args.prime_over)?.primes;
        primes.sort_by(compare_primes);
        let n = primes.len();
        primes.into_iter().nth(args.prime_index).ok_or_else(|| {
            Error::InvalidArgument(format!("only {n} primes lie above {}", args.prime_over))
        })
    }

    fn group(&self, ext: &Extension) -> Result<GaloisGroup, Error> {
        ext.group()
            .cloned()
            .ok_or_else(|| Error::MethodUnavailable("the field spec lists no automorphisms".into()))
    }

    fn dispatch(&self, cmd: &Command) -> Outcome {
        match cmd {
            Command::FactorPrime { field, p } => {
                let k = load_field(field)?;
                let s = factor_prime(&k, *p)?;
                let mut primes = s.primes.clone();
                primes.sort_by(compare_primes);
                let payload = json!({
                    "p": p.to_string(),
                    "primes": primes.iter().map(prime_json).collect::<Vec<_>>(),
                    "degree_sum": s.degree_sum().to_string(),
                    "product_verified": s.verify_product()?,
                });
                let summary = format!("{} prime(s) above {p} in {k}", primes.len());
                Ok((payload, summary))
            }
            Command::Valuation { field, prime, element } => {
                let k = load_field(field)?;
                let q = self.prime(&k, prime)?;
                let c = self.element(&k, element)?;
                let v = q.valuation(&c)?;
                Ok((json!({ "prime": prime_json(&q), "element": elem_json(&c), "valuation": v.to_string() }), format!("v = {v}")))
            }
            Command::DecompositionField { field, prime, ext } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let g = self.group(&ext)?;
                let q = self.prime(&k, prime)?;
                let d = decomposition_field(&g, &q)?;
                let payload = json!({
                    "prime": prime_json(&q),
                    "group_order": g.order().to_string(),
                    "decomposition_group": d.group.iter().map(|i| elem_json(g.element(*i).image())).collect::<Vec<_>>(),
                    "field_polynomial": d.field.defining_polynomial().coeffs().iter().map(format_rat).collect::<Vec<_>>(),
                    "field_degree": d.field.degree().to_string(),
                    "embedding": elem_json(d.embedding.image()),
                    "contracted": prime_json(&d.contracted),
                    "trivial_local_degree": d.has_trivial_local_degree(ext.base())?,
                });
                let summary = format!("|G_Q| = {}, decomposition field of degree {}", d.group.len(), d.field.degree());
                Ok((payload, summary))
            }
            Command::Frobenius { field, prime, ext } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let g = self.group(&ext)?;
                let q = self.prime(&k, prime)?;
                let i = frobenius(&g, &q)?;
                let image = g.element(i).image().clone();
                Ok((
                    json!({ "prime": prime_json(&q), "index": i.to_string(), "image": elem_json(&image), "order": g.element_order(i).to_string() }),
                    format!("Frobenius sends theta to {image}"),
                ))
            }
            Command::Chebotarev { field, bound } => {
                let k = load_field(field)?;
                let ext = Extension::over_rationals(&k)?;
                let g = self.group(&ext)?;
                let census = chebotarev_census(&g, *bound, self.exec)?;
                let rows: Vec<Value> = census
                    .rows()
                    .into_iter()
                    .map(|(rep, count, emp, pred)| {
                        json!({
                            "class_representative": elem_json(g.element(rep).image()),
                            "count": count.to_string(),
                            "empirical_frequency": emp,
                            "predicted_frequency": pred,
                        })
                    })
                    .collect();
                let payload = json!({
                    "bound": bound.to_string(),
                    "primes_counted": census.total().to_string(),
                    "skipped": census.skipped.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "classes": rows,
                    "max_deviation": dedekind::arith::format_decimal(&census.max_deviation(), 6),
                });
                Ok((payload, format!("{} classes over {} primes", census.classes.len(), census.total())))
            }
            Command::ClosureMember { field, prime, ext, element, verify } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let q = self.prime(&k, prime)?;
                let c = self.element(&k, element)?;
                let member = closure_member(&ext, &q, &c)?;
                let mut payload = json!({
                    "prime": prime_json(&q),
                    "element": elem_json(&c),
                    "member": member,
                    "dense": is_dense(&ext, &q)?,
                    "relatively_closed": is_relatively_closed(&ext, &q)?,
                });
                if *verify {
                    let w = approx_member(&ext, &q, &c, 8)?;
                    let agree = w.member == member;
                    payload["verification"] = json!({
                        "method": "lattice-approximation",
                        "member": w.member,
                        "failing_level": w.failing_level.map(|l| l.to_string()),
                        "agrees": agree,
                    });
                    if !agree {
                        return Err(Error::ResourceCap("membership methods disagree".into()));
                    }
                }
                Ok((payload, format!("member = {member}")))
            }
            Command::Approx { field, prime, ext, element, level, verify } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let q = self.prime(&k, prime)?;
                let c = self.element(&k, element)?;
                let w = approx_member(&ext, &q, &c, *level)?;
                let mut approximants = Vec::with_capacity(w.approximants.len());
                for (k, a) in &w.approximants {
                    let residual = q.valuation(&(&c - &ext.base().apply(a)?))?;
                    approximants.push(json!({
                        "level": k.to_string(),
                        "approximant": elem_json(a),
                        "residual_valuation": residual.to_string(),
                    }));
                }
                let mut payload = json!({
                    "prime": prime_json(&q),
                    "element": elem_json(&c),
                    "member": w.member,
                    "failing_level": w.failing_level.map(|l| l.to_string()),
                    "m": w.m.map(|l| l.to_string()),
                    "approximants": approximants,
                });
                if *verify && ext.group().is_some() {
                    let fast = closure_member(&ext, &q, &c)?;
                    payload["verification"] = json!({ "method": "decomposition-field", "member": fast, "agrees": fast == w.member });
                }
                let summary = match w.failing_level {
                    None => format!("member; approximant at level {level}"),
                    Some(k0) => format!("non-member; fails at level {k0}"),
                };
                Ok((payload, summary))
            }
            Command::Probe { field, ext, element, budget, verify } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let c = self.element(&k, element)?;
                let outcome = closure_intersection_probe(&ext, &c, *budget, self.exec)?;
                let (payload, summary) = match &outcome {
                    ProbeOutcome::Witness { prime, primes_scanned } => {
                        let mut p = json!({
                            "outcome": "witness",
                            "element": elem_json(&c),
                            "prime": prime_json(prime),
                            "primes_scanned": primes_scanned.to_string(),
                        });
                        if *verify {
                            let w = approx_member(&ext, prime, &c, 8)?;
                            p["verification"] = json!({ "failing_level": w.failing_level.map(|l| l.to_string()), "agrees": !w.member });
                        }
                        (p, format!("witness prime {prime}"))
                    }
                    ProbeOutcome::MemberOfBase => {
                        (json!({ "outcome": "member-of-base", "element": elem_json(&c) }), "element lies in O_K".to_string())
                    }
                    ProbeOutcome::Exhausted { primes_scanned, skipped } => (
                        json!({
                            "outcome": "exhausted",
                            "element": elem_json(&c),
                            "primes_scanned": primes_scanned.to_string(),
                            "skipped": skipped.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        }),
                        format!("no witness among {primes_scanned} primes"),
                    ),
                };
                Ok((payload, summary))
            }
            Command::Witness { field, prime, ext, element, verify } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let q = self.prime(&k, prime)?;
                let c = self.element(&k, element)?;
                let w = build_witness(&ext, &q, &c)?;
                let approx = witness_approximant(&ext, &q, &c, w.m)?;
                let mut payload = json!({
                    "prime": prime_json(&w.prime),
                    "prime_below": prime_json(&w.prime_below),
                    "element": elem_json(&c),
                    "e": w.e.to_string(),
                    "m": w.m.to_string(),
                    "residue_size": int_str(&w.residue_size),
                    "beta": int_str(&w.beta),
                    "d": elem_json(&w.d),
                    "a": w.residues.iter().map(elem_json).collect::<Vec<_>>(),
                    "degree": w.degree().to_string(),
                    "g_valuation": w.g_valuation.to_string(),
                    "g_bound": int_str(&w.g_bound()),
                    "f_valuation": w.f_valuation.to_string(),
                    "approximant": approx,
                });
                if *verify {
                    payload["verified"] = Value::Bool(verify_witness(&ext, &w, &c)?);
                }
                Ok((payload, format!("witness of degree {} with v_Q(f(c)) = {}", w.degree(), w.f_valuation)))
            }
            Command::IntMember { field, coeffs } => {
                let k = load_field(field)?;
                let cs = coeffs
                    .split(';')
                    .map(|s| parse_element(&k, s.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                let member = int_membership(&cs, &k)?;
                Ok((json!({ "coefficients": cs.iter().map(elem_json).collect::<Vec<_>>(), "member": member }), format!("integer-valued = {member}")))
            }
            Command::Image { field, ext, element, budget } => {
                let k = load_field(field)?;
                let ext = self.extension(&k, ext)?;
                let c = self.element(&k, element)?;
                let (desc, complete) = match image_description(&ext, &c, *budget, self.exec) {
                    Ok(d) => (d, true),
                    Err(Error::IncompleteCensus { description, .. }) => (*description, false),
                    Err(e) => return Err(e),
                };
                let payload = json!({
                    "element": elem_json(&c),
                    "kind": desc.kind.tag(),
                    "excluded": desc.excluded.iter().map(prime_json).collect::<Vec<_>>(),
                    "non_members": desc.non_members().map(prime_json).collect::<Vec<_>>(),
                    "flags_checked": desc.flags.len().to_string(),
                    "primes_scanned": desc.primes_scanned.to_string(),
                    "skipped": desc.skipped.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "budget": desc.budget.to_string(),
                    "complete": complete,
                });
                Ok((payload, format!("Int(O_K)[c] is {}", desc.kind.tag())))
            }
            Command::Ge2Reduce { ring, a, b, verify } => {
                let r = RingHandle::parse(ring)?;
                let pair = (parse_element(r.field(), a)?, parse_element(r.field(), b)?);
                let t = reduce(&pair, &r)?;
                let mut payload = trace_json(&t);
                if *verify {
                    payload["verified"] = Value::Bool(verify_reduction(&t)?);
                }
                Ok((payload, format!("{} elementary operations in {r}", t.ops.len())))
            }
            Command::Ge2Verify { trace } => {
                let text = fs::read_to_string(trace).map_err(|e| Error::InvalidArgument(format!("cannot read {trace}: {e}")))?;
                let doc: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("trace document: {e}")))?;
                // accept either a bare trace or a full ge2-reduce document
                let body = if doc.get("payload").is_some() { &doc["payload"] } else { &doc };
                let t = trace_from_json(body)?;
                let ok = verify_reduction(&t)?;
                Ok((json!({ "valid": ok, "ops": t.ops.len().to_string() }), format!("trace valid = {ok}")))
            }
            Command::Ge2Search { ring, a, b, depth, height, cap } => {
                let r = RingHandle::parse(ring)?;
                let pair = (parse_element(r.field(), a)?, parse_element(r.field(), b)?);
                match bounded_search(&pair, &r, *depth, *height, *cap)? {
                    SearchOutcome::Found(t) => {
                        let mut payload = json!({ "outcome": "found", "trace": trace_json(&t) });
                        payload["verified"] = Value::Bool(verify_reduction(&t)?);
                        Ok((payload, format!("found a trace with {} operations", t.ops.len())))
                    }
                    SearchOutcome::NotFound { states_explored } => Ok((
                        json!({ "outcome": "not-found-within-bounds", "states_explored": states_explored.to_string() }),
                        format!("inconclusive: no trace within depth {depth}, height {height}"),
                    )),
                }
            }
        }
    }
}

/// The approximant at the last level below `m` that still admits one, or
/// null when that level is zero or `c` has a pole at `Q`.
fn witness_approximant(ext: &Extension, q: &PrimeIdeal, c: &FieldElement, m: u32) -> Result<Value, Error> {
    let approx = dedekind::closure::Approximator::new(ext.base(), q)?;
    if m == 0 || q.valuation(c)?.finite().is_some_and(|v| v < 0) {
        return Ok(Value::Null);
    }
    let k = (m - 1) * approx.relative_e();
    if k == 0 {
        return Ok(Value::Null);
    }
    Ok(match approx.approximant(c, k)? {
        Some(a) => json!({ "level": k.to_string(), "value": elem_json(&a) }),
        None => Value::Null,
    })
}
