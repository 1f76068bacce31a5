use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use rank_lattice::field::{format_element, parse_element, parse_field_spec, FieldTower};
use rank_lattice::lattice::{
    alpha_vector, critical_exponent, summarize, BuildMethod, ChiMethod, SummaryOptions, WeightedLattice,
};
use rank_lattice::mrd::{
    alpha2_direct_check, census_mhat, charpoly_l2_4_4, interpolate_m, m_from_mhat, published_samples,
    CensusOptions,
};
use rank_lattice::subspace::{alpha_with_metric, Limits, Metric, Subspace};
use rank_lattice::verify::{self, Params, Suite};
use rank_lattice::weights::{buav_check, classify, macwilliams_report, profile};
use rank_lattice::Error;

#[derive(Parser)]
#[command(name = "rml", version, about = "Rank-metric lattices, MRD census and lattice-rank weights")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Census checkpoint file, resumed when present.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Cap on exhaustive enumerations.
    #[arg(long, global = true, env = "RML_MAX_ENUM", default_value_t = 1 << 26)]
    max_enum: u64,
    /// Write a run manifest with an output digest here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a lattice and report its invariants.
    Lattice(LatticeArgs),
    /// Counts, distances and duals of codes.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// The census of two-dimensional MRD codes in F_{q^4}^4.
    #[command(subcommand)]
    Mrd(MrdCmd),
    /// Lattice-rank weights of a code.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Run regression suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rank,
    Hamming,
}

impl From<Kind> for Metric {
    fn from(k: Kind) -> Metric {
        match k {
            Kind::Rank => Metric::Rank,
            Kind::Hamming => Metric::Hamming,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mobius,
    Alpha,
    Both,
    Closed,
}

#[derive(Args)]
struct FieldArgs {
    /// Base field size.
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree.
    #[arg(long)]
    m: Option<u32>,
    /// Field spec such as `q=2^1,m=4,mod=x^4+x+1`.
    #[arg(long)]
    field: Option<String>,
}

impl FieldArgs {
    fn tower(&self, kind: Metric) -> Result<FieldTower, Error> {
        if let Some(s) = &self.field {
            let spec = parse_field_spec(s)?;
            return FieldTower::with_degree(spec.p, spec.h, spec.m, spec.modulus);
        }
        let q = self.q.ok_or_else(|| Error::Parse("need --q or --field".into()))?;
        let m = match (self.m, kind) {
            (Some(m), _) => m,
            (None, Metric::Hamming) => 1,
            (None, Metric::Rank) => return Err(Error::Parse("need --m".into())),
        };
        FieldTower::from_q(q, m)
    }
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    i: usize,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "rank")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "mobius")]
    method: Method,
    /// Build by closing the atoms under joins.
    #[arg(long)]
    join_closure: bool,
    /// Skip the modularity scan.
    #[arg(long)]
    no_modular: bool,
}

#[derive(Args)]
struct CodeArgs {
    /// Field spec; defaults to the first line of the generator file.
    #[arg(long)]
    field: Option<String>,
    /// Generator file: an optional field spec line, then one row per line with
    /// entries `0`, `a^k` or integers.
    #[arg(long)]
    gen: PathBuf,
}

impl CodeArgs {
    fn load(&self) -> Result<(FieldTower, Subspace), Error> {
        let text = fs::read_to_string(&self.gen)?;
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .peekable();
        let header = lines.next_if(|l| l.starts_with("q="));
        let spec = match (self.field.as_deref(), header) {
            (Some(s), _) | (None, Some(s)) => parse_field_spec(s)?,
            (None, None) => return Err(Error::Parse("no field spec given".into())),
        };
        let f = FieldTower::with_degree(spec.p, spec.h, spec.m, spec.modulus)?;
        let rows: Vec<Vec<u32>> = lines
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| parse_element(&f, t))
                    .collect::<Result<Vec<u32>, Error>>()
            })
            .collect::<Result<_, _>>()?;
        let n = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Parse("generator file has no rows".into()))?;
        let c = Subspace::from_generators(&f, n, &rows)?;
        Ok((f, c))
    }
}

#[derive(Subcommand)]
enum CodesCmd {
    /// Number of k-dimensional codes with minimum distance above i.
    Alpha {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "rank")]
        kind: Kind,
    },
    /// Minimum distance of a code.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value = "rank")]
        metric: Kind,
    },
    /// Generators of the dual code.
    Dual {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Critical exponent of a rank-metric lattice.
    Crit {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand)]
enum MrdCmd {
    /// Count codes through a fixed rank-4 vector and convert to the total.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long, env = "RML_SHARDS", default_value_t = 1)]
        shards: u64,
        /// Stop after about this many candidates (resume later from the checkpoint).
        #[arg(long)]
        stop_after: Option<u64>,
        /// Largest accepted q.
        #[arg(long, default_value_t = rank_lattice::mrd::DEFAULT_MAX_Q)]
        max_q: u64,
    },
    /// Interpolate the count as a polynomial in q.
    Interpolate {
        /// `builtin` or a file of `q M` lines.
        #[arg(long, default_value = "builtin")]
        samples: String,
    },
    /// Conditional characteristic polynomial of the rank-2 lattice of F_{q^4}^4.
    Table {
        #[arg(long, num_args = 1.., required = true)]
        q: Vec<u64>,
    },
    /// Count the codes by enumerating every two-dimensional subspace.
    Direct {
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Total count from a count through a fixed vector.
    Convert {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        mhat: BigInt,
    },
}

#[derive(Args)]
struct WeightArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    i: usize,
    #[arg(long, value_enum, default_value = "rank")]
    kind: Kind,
}

impl WeightArgs {
    fn load(&self, limits: &Limits) -> Result<(Subspace, WeightedLattice), Error> {
        let (f, c) = self.code.load()?;
        let l = WeightedLattice::build(self.kind.into(), self.i, c.n(), &f, limits)?;
        Ok((c, l))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Buav,
    Macwilliams,
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Weights, dual weights, distributions and binomial moments.
    Profile(WeightArgs),
    /// Extremality flags.
    Classify(WeightArgs),
    /// Check an identity and report the first counterexample.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        #[command(flatten)]
        args: WeightArgs,
        /// Restrict to one j.
        #[arg(long)]
        j: Option<usize>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    suite: String,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
}

enum Failure {
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } => 3,
        Error::CheckpointMismatch(_) => 4,
        Error::InexactDivision(_) | Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

struct Output {
    value: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(value: Value, text: String) -> Self {
        Output { value, text, ok: true }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn lines<I: IntoIterator<Item = (String, String)>>(rows: I) -> String {
    rows.into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn list(v: &Value) -> String {
    match v {
        Value::Array(a) => format!(
            "({})",
            a.iter().map(|x| x.as_str().map_or(x.to_string(), str::to_string)).collect::<Vec<_>>().join(", ")
        ),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::Object(o) => lines(o.iter().map(|(k, x)| (k.clone(), list(x)))),
        other => format!("{other}\n"),
    }
}

fn run_lattice(a: &LatticeArgs, limits: Limits) -> Result<Output, Failure> {
    let kind: Metric = a.kind.into();
    let f = a.field.tower(kind)?;
    let opts = SummaryOptions {
        method: match a.method {
            Method::Mobius => ChiMethod::Mobius,
            Method::Alpha => ChiMethod::Alpha,
            Method::Both => ChiMethod::Both,
            Method::Closed => ChiMethod::Closed,
        },
        build: if a.join_closure { BuildMethod::JoinClosure } else { BuildMethod::Filter },
        modular: !a.no_modular,
        limits,
    };
    let s = summarize(kind, a.i, a.n, &f, &opts)?;
    let value = to_value(&s);
    let mut text = lines([
        ("lattice".into(), format!("{:?} i={} n={} m={} q={} ({})", s.kind, s.i, s.n, s.m, s.q, s.modulus)),
        ("W".into(), list(&value["W"])),
        ("w".into(), list(&value["w"])),
        ("charpoly".into(), s.charpoly.text.clone()),
        ("factors".into(), s.factors.iter().map(|x| format!("({x})")).collect()),
    ]);
    for (k, v) in [
        ("elements", s.elements.map(|x| x.to_string())),
        ("routes agree", s.routes_agree.map(|x| x.to_string())),
        ("closed form agrees", s.closed_form_agrees.map(|x| x.to_string())),
        ("forced roots divide", s.roots_divide.map(|x| x.to_string())),
        ("supersolvable", s.supersolvable.map(|x| x.to_string())),
        ("supersolvable (predicted)", Some(s.supersolvable_predicted.to_string())),
        ("modular elements", s.modular.as_ref().map(|m| format!("{} ({} mismatches)", m.count, m.mismatches.len()))),
        ("assumption", s.assumption.map(str::to_string)),
    ] {
        if let Some(v) = v {
            text.push_str(&format!("{k}: {v}\n"));
        }
    }
    let ok = s.routes_agree != Some(false)
        && s.closed_form_agrees != Some(false)
        && s.roots_divide != Some(false)
        && s.modular.as_ref().is_none_or(|m| m.mismatches.is_empty());
    Ok(Output { value, text, ok })
}

fn run_codes(c: &CodesCmd, limits: Limits) -> Result<Output, Failure> {
    match c {
        CodesCmd::Alpha { i, n, k, field, kind } => {
            let metric: Metric = (*kind).into();
            let f = field.tower(metric)?;
            let ks: Vec<usize> = match k {
                Some(k) => vec![*k],
                None => (0..=*n).collect(),
            };
            let vals = ks
                .iter()
                .map(|&k| alpha_with_metric(&f, metric, *i, *n, k, &limits))
                .collect::<Result<Vec<BigInt>, Error>>()?;
            let strs: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            let value = json!({"i": i, "n": n, "k": ks, "alpha": strs});
            Ok(Output::new(value, format!("alpha: ({})\n", strs.join(", "))))
        }
        CodesCmd::Distance { code, metric } => {
            let (f, c) = code.load()?;
            let d = c.min_distance(&f, (*metric).into(), &limits)?;
            let value = json!({"n": c.n(), "k": c.dim(), "d": d});
            Ok(Output::new(value.clone(), text_of(&value)))
        }
        CodesCmd::Dual { code } => {
            let (f, c) = code.load()?;
            let d = c.dual(&f);
            let rows: Vec<Vec<String>> = d
                .rows()
                .iter()
                .map(|r| r.iter().map(|&x| format_element(&f, x)).collect())
                .collect();
            let mut text = f.spec_string() + "\n";
            text.extend(rows.iter().map(|r| r.join(" ") + "\n"));
            let value = json!({"field": f.spec_string(), "n": d.n(), "k": d.dim(), "generators": rows});
            Ok(Output::new(value, text))
        }
        CodesCmd::Crit { i, n, field } => {
            let f = field.tower(Metric::Rank)?;
            let crit = critical_exponent(&f, *i, *n, &limits)?;
            let alpha: Vec<String> = alpha_vector(&f, *i, *n, &limits)?.iter().map(|x| x.to_string()).collect();
            let value = json!({"i": i, "n": n, "crit": crit, "alpha": alpha});
            Ok(Output::new(value.clone(), text_of(&value)))
        }
    }
}

fn read_samples(spec: &str) -> Result<Vec<(u64, BigInt)>, Error> {
    if spec == "builtin" {
        return Ok(published_samples());
    }
    fs::read_to_string(spec)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
            let q = it.next().and_then(|t| t.parse().ok());
            let m = it.next().and_then(|t| t.parse().ok());
            q.zip(m).ok_or_else(|| Error::Parse(format!("bad sample line {l:?}")))
        })
        .collect()
}

fn run_mrd(c: &MrdCmd, limits: Limits, checkpoint: Option<PathBuf>) -> Result<Output, Failure> {
    match c {
        MrdCmd::Census { q, shards, stop_after, max_q } => {
            let opts = CensusOptions {
                shards: *shards,
                checkpoint,
                stop_after: *stop_after,
                max_q: *max_q,
                ..Default::default()
            };
            let r = census_mhat(*q, &opts)?;
            let value = to_value(&r);
            Ok(Output::new(value.clone(), text_of(&value)))
        }
        MrdCmd::Interpolate { samples } => {
            let r = interpolate_m(&read_samples(samples)?)?;
            let text = format!(
                "Z(q) = {}\nM(q) = {}\nassumption: {}\n",
                r.z.render("q"),
                r.m.render("q"),
                r.assumption
            );
            let value = json!({"z": to_value(&r.z), "m": to_value(&r.m), "z_text": r.z.render("q"),
                "m_text": r.m.render("q"), "assumption": r.assumption});
            Ok(Output::new(value, text))
        }
        MrdCmd::Table { q } => {
            let rows = q.iter().map(|&q| charpoly_l2_4_4(q)).collect::<Result<Vec<_>, Error>>()?;
            let text = rows
                .iter()
                .map(|r| format!("q={}: {} [{}]\n", r.q, r.factors.iter().map(|x| format!("({x})")).collect::<String>(), r.assumption))
                .collect();
            Ok(Output::new(to_value(&rows), text))
        }
        MrdCmd::Direct { q } => {
            let r = alpha2_direct_check(*q, &limits)?;
            let value = to_value(&r);
            Ok(Output::new(value.clone(), text_of(&value)))
        }
        MrdCmd::Convert { q, mhat } => {
            let m = m_from_mhat(*q, mhat)?;
            let value = json!({"q": q, "mhat": mhat.to_string(), "m": m.to_string()});
            Ok(Output::new(value.clone(), text_of(&value)))
        }
    }
}

fn run_weights(c: &WeightsCmd, limits: Limits) -> Result<Output, Failure> {
    match c {
        WeightsCmd::Profile(a) => {
            let (c, l) = a.load(&limits)?;
            let p = profile(&c, &l, &limits)?;
            let value = to_value(&p);
            Ok(Output::new(value.clone(), text_of(&value)))
        }
        WeightsCmd::Classify(a) => {
            let (c, l) = a.load(&limits)?;
            let value = to_value(&classify(&c, &l, &limits)?);
            Ok(Output::new(value.clone(), text_of(&value)))
        }
        WeightsCmd::Verify { identity, args, j } => {
            let (c, l) = args.load(&limits)?;
            let js: Vec<usize> = match j {
                Some(j) => vec![*j],
                None => (1..=c.dim()).collect(),
            };
            match identity {
                Identity::Buav => {
                    let reports = js
                        .iter()
                        .map(|&j| buav_check(&c, &l, j, &limits))
                        .collect::<Result<Vec<_>, Error>>()?;
                    let mut text = String::new();
                    for r in &reports {
                        for (reading, checks) in [("by dimension", &r.by_dimension), ("by element", &r.by_element)] {
                            for ch in checks {
                                let status = match ch.holds {
                                    Some(true) => "PASS",
                                    Some(false) => "FAIL",
                                    None => "SKIP",
                                };
                                text.push_str(&format!(
                                    "j={} {reading}: {status} {} {}\n",
                                    r.j,
                                    ch.name,
                                    ch.detail.as_deref().unwrap_or("")
                                ));
                            }
                        }
                        text.push_str(&format!("j={} verdict: {}\n", r.j, if r.pass { "PASS" } else { "FAIL" }));
                    }
                    let ok = reports.iter().all(|r| r.pass);
                    Ok(Output { value: to_value(&reports), text, ok })
                }
                Identity::Macwilliams => {
                    let r = macwilliams_report(&c, &l)?;
                    let mut text = String::new();
                    for ch in [&r.literal, &r.reindexed] {
                        let status = if ch.holds == Some(true) { "PASS" } else { "FAIL" };
                        text.push_str(&format!("{status} {} {}\n", ch.name, ch.detail.as_deref().unwrap_or("")));
                    }
                    text.push_str(&format!("verdict: {}\n", if r.pass { "PASS" } else { "FAIL" }));
                    let ok = r.pass;
                    let mut value = to_value(&r);
                    if j.is_some() {
                        if let Some(points) = value["points"].as_array_mut() {
                            points.retain(|p| js.iter().any(|&j| p["j"] == json!(j)));
                        }
                    }
                    Ok(Output { value, text, ok })
                }
            }
        }
    }
}

fn run_verify(a: &VerifyArgs, limits: Limits) -> Result<Output, Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let grid = match (a.i, a.n, a.m, a.q) {
        (Some(i), Some(n), Some(m), Some(q)) => Some(vec![Params { i, n, m, q }]),
        (None, None, None, None) => None,
        _ => return Err(Error::Parse("give all of --i --n --m --q or none".into()).into()),
    };
    let reports = suites
        .iter()
        .map(|&s| verify::run(s, grid.as_deref(), &limits))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut text = String::new();
    for r in &reports {
        for c in &r.checks {
            text.push_str(&format!(
                "{} {:<18} {} {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                r.suite.name(),
                c.name,
                c.detail
            ));
        }
    }
    let ok = reports.iter().all(|r| r.pass());
    Ok(Output { value: to_value(&reports), text, ok })
}

fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(o) => {
            o.remove("wall_seconds");
            o.values_mut().for_each(strip_volatile);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

fn write_manifest(path: &Path, value: &Value, started: Instant, field: Option<String>) -> Result<(), Error> {
    let mut stable = value.clone();
    strip_volatile(&mut stable);
    let digest = Sha256::digest(serde_json::to_vec(&stable)?);
    let manifest = json!({
        "command_line": std::env::args().collect::<Vec<_>>(),
        "field": field,
        "modulus": value.get("modulus"),
        "version": env!("CARGO_PKG_VERSION"),
        "wall_seconds": started.elapsed().as_secs_f64(),
        "output_digest": digest.iter().map(|b| format!("{b:02x}")).collect::<String>(),
    });
    fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

fn field_label(cmd: &Cmd) -> Option<String> {
    let from = |f: &FieldArgs| f.field.clone().or_else(|| Some(format!("q={},m={}", f.q?, f.m.unwrap_or(1))));
    match cmd {
        Cmd::Lattice(a) => from(&a.field),
        Cmd::Weights(WeightsCmd::Profile(a) | WeightsCmd::Classify(a) | WeightsCmd::Verify { args: a, .. }) => {
            a.code.field.clone()
        }
        Cmd::Mrd(MrdCmd::Census { q, .. }) => Some(format!("q={q},m=4")),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let limits = Limits { max_enum: cli.max_enum };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| match &cli.cmd {
        Cmd::Lattice(a) => run_lattice(a, limits),
        Cmd::Codes(c) => run_codes(c, limits),
        Cmd::Mrd(c) => run_mrd(c, limits, cli.checkpoint.clone()),
        Cmd::Weights(c) => run_weights(c, limits),
        Cmd::Verify(a) => run_verify(a, limits),
    }));
    let out = match result {
        Err(_) => return ExitCode::from(1),
        Ok(Err(Failure::Error(e))) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
        Ok(Ok(o)) => o,
    };
    let mut stdout = std::io::stdout().lock();
    let printed = if cli.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&out.value).expect("serializable"))
    } else {
        write!(stdout, "{}", out.text)
    };
    if printed.is_err() {
        return ExitCode::from(1);
    }
    if let Some(path) = &cli.manifest {
        if let Err(e) = write_manifest(path, &out.value, started, field_label(&cli.cmd)) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
