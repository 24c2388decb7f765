//! Command-line driver: `pd`, `gdim`, `engine`, `crystal`, `mult` and `verify`.

pub mod config;
pub mod element;
pub mod suite;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use pdklr_core::crystal::{self, TieBreak};
use pdklr_core::gdim::{graded_dim_algebra, graded_dim_pair};
use pdklr_core::multiplicity::{root_mults, MultCache};
use pdklr_core::pdseq::{check_via_criterion, enumerate_pd, run_decompose, s_word, weight_nonzero, z_monomial};
use pdklr_core::{CartanDatum, DominantWeight, Residue, RootVector};
use pdklr_engine::cocenter::Cocenter;
use pdklr_engine::verify::{self, RelationsParams, SpanMode};
use pdklr_engine::{checks, EngineError, Field, GradedQuotient, Klr, PrimeField, QChoice, QuotientOptions, Rationals};

use config::{DatumArgs, JobConfig};

/// Bad flags, unreadable config or invalid input. Exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    /// An oracle disagreed with a computation. Exit code 1.
    Finding(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::OracleMismatch { .. } => Failure::Finding(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// Environment variable naming the directory of the multiplicity cache.
pub const CACHE_DIR_VAR: &str = "PDKLR_CACHE_DIR";

#[derive(Parser)]
#[command(name = "pdklr", version, about = "Piecewise dominant sequences and cyclotomic KLR cocenters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Piecewise dominant sequences
    Pd {
        #[command(subcommand)]
        op: PdOp,
    },
    /// Graded dimension formula
    Gdim {
        #[command(subcommand)]
        op: GdimOp,
    },
    /// Cyclotomic quotient and cocenter by linear algebra
    Engine {
        #[command(subcommand)]
        op: EngineOp,
    },
    /// Crystal of the highest weight module
    Crystal {
        #[command(subcommand)]
        op: CrystalOp,
    },
    /// Root and weight multiplicities
    Mult {
        #[command(subcommand)]
        op: MultOp,
    },
    /// Cross-module verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SeqArgs {
    #[command(flatten)]
    job: DatumArgs,
    /// Comma-separated labels
    #[arg(long)]
    seq: String,
}

#[derive(Subcommand)]
enum PdOp {
    Check(SeqArgs),
    Enumerate(DatumArgs),
    Nonzero(DatumArgs),
    Z(SeqArgs),
    S(SeqArgs),
}

#[derive(Subcommand)]
enum GdimOp {
    Pair {
        #[command(flatten)]
        job: DatumArgs,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        seq2: String,
    },
    Algebra(DatumArgs),
}

#[derive(Args)]
struct EngineArgs {
    #[command(flatten)]
    job: DatumArgs,
    /// Report only degrees in LO..HI
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
}

#[derive(Subcommand)]
enum EngineOp {
    Build(EngineArgs),
    Cocenter(EngineArgs),
    /// Class of an element such as "2*x1t1 + -1" placed on e(nu)
    Class {
        #[command(flatten)]
        args: EngineArgs,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        nu: String,
    },
    Verify {
        #[command(flatten)]
        args: EngineArgs,
        /// generator, principle1, principle2, principle3, pd-classes, relations, associativity, defining-relations
        #[arg(long, default_value = "generator")]
        mode: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum CrystalOp {
    Generate {
        #[command(flatten)]
        job: DatumArgs,
        #[arg(long, default_value_t = 4)]
        max_height: i64,
    },
    Mult(DatumArgs),
    Pdpath(SeqArgs),
    /// Extracts a sequence from every vertex of weight Lambda - alpha
    Extract {
        #[command(flatten)]
        job: DatumArgs,
        #[arg(long, default_value = "smallest")]
        tie: String,
    },
    Classes(DatumArgs),
}

#[derive(Subcommand)]
enum MultOp {
    Roots {
        #[command(flatten)]
        job: DatumArgs,
        #[arg(long, default_value_t = 6)]
        max_height: i64,
    },
    Weight(DatumArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "small-grid")]
    suite: String,
    #[arg(long, default_value_t = 4)]
    max_coord: i64,
    #[arg(long, default_value_t = 6)]
    max_height: i64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    triples: usize,
    /// Skip the engine instances
    #[arg(long)]
    no_engine: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

struct Out {
    w: Box<dyn Write>,
}

impl Out {
    fn open(path: Option<&PathBuf>) -> Result<Self, Failure> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(std::fs::File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)),
            None => Box::new(io::BufWriter::new(io::stdout())),
        };
        Ok(Self { w })
    }

    fn emit(&mut self, v: &Value) {
        writeln!(self.w, "{v}").expect("write report");
    }
}

impl Drop for Out {
    fn drop(&mut self) {
        self.w.flush().ok();
    }
}

fn job_out(args: &DatumArgs) -> Result<(JobConfig, Out), Failure> {
    let job = JobConfig::resolve(args)?;
    let mut out = Out::open(job.output.as_ref())?;
    if job.echo_datum {
        out.emit(&json!({ "datum": job.datum.to_spec() }));
    }
    Ok((job, out))
}

fn labels(d: &CartanDatum, nu: &[Residue]) -> Vec<String> {
    d.sequence_labels(nu)
}

fn parse_seq(d: &CartanDatum, s: &str) -> Result<Vec<Residue>, Failure> {
    d.parse_sequence(s).map_err(usage)
}

fn pd_record(d: &CartanDatum, lam: &DominantWeight, nu: &[Residue]) -> Value {
    let rd = run_decompose(d, lam, nu);
    let (is_pd, witness) = check_via_criterion(d, lam, nu);
    let z = z_monomial(d, lam, nu).ok();
    json!({
        "sequence": labels(d, nu),
        "is_pd": is_pd,
        "ells": rd.ells,
        "witness": witness.map(|w| w.k),
        "z_exponents": z.as_ref().map(|z| z.exponents.clone()),
        "degree": z.map(|z| z.degree),
    })
}

fn run_pd(op: PdOp) -> Result<(), Failure> {
    match op {
        PdOp::Check(a) => {
            let (job, mut out) = job_out(&a.job)?;
            let nu = parse_seq(&job.datum, &a.seq)?;
            out.emit(&pd_record(&job.datum, job.lambda()?, &nu));
        }
        PdOp::Enumerate(a) => {
            let (job, mut out) = job_out(&a)?;
            let (d, lam) = (&job.datum, job.lambda()?);
            let mut count = 0;
            for nu in enumerate_pd(d, lam, job.alpha()?) {
                out.emit(&pd_record(d, lam, &nu));
                count += 1;
            }
            eprintln!("{count} piecewise dominant sequences");
        }
        PdOp::Nonzero(a) => {
            let (job, mut out) = job_out(&a)?;
            let d = &job.datum;
            match weight_nonzero(d, job.lambda()?, job.alpha()?) {
                Some(nu) => out.emit(&json!({ "nonzero": true, "sequence": labels(d, &nu) })),
                None => out.emit(&json!({ "nonzero": false })),
            }
        }
        PdOp::Z(a) => {
            let (job, mut out) = job_out(&a.job)?;
            let nu = parse_seq(&job.datum, &a.seq)?;
            let z = z_monomial(&job.datum, job.lambda()?, &nu).map_err(usage)?;
            out.emit(&json!({ "sequence": labels(&job.datum, &nu), "z_exponents": z.exponents, "degree": z.degree }));
        }
        PdOp::S(a) => {
            let (job, mut out) = job_out(&a.job)?;
            let nu = parse_seq(&job.datum, &a.seq)?;
            let s = s_word(&job.datum, job.lambda()?, &nu).map_err(usage)?;
            out.emit(&json!({ "sequence": labels(&job.datum, &nu), "blocks": s.blocks, "degree": s.degree }));
        }
    }
    Ok(())
}

fn run_gdim(op: GdimOp) -> Result<(), Failure> {
    match op {
        GdimOp::Pair { job, seq, seq2 } => {
            let (job, mut out) = job_out(&job)?;
            let d = &job.datum;
            let (a, b) = (parse_seq(d, &seq)?, parse_seq(d, &seq2)?);
            if d.content(&a) != d.content(&b) {
                return Err(Failure::Usage("sequences have different content".into()));
            }
            let p = graded_dim_pair(d, job.lambda()?, &a, &b);
            out.emit(&json!({ "nu": labels(d, &a), "nu2": labels(d, &b), "gdim": p, "at_one": p.at_one() }));
        }
        GdimOp::Algebra(a) => {
            let (job, mut out) = job_out(&a)?;
            let alpha = job.alpha()?;
            let p = graded_dim_algebra(&job.datum, job.lambda()?, alpha).map_err(usage)?;
            eprintln!("dim_q = {p}");
            out.emit(&json!({ "alpha": alpha.coeffs, "gdim": p, "at_one": p.at_one() }));
        }
    }
    Ok(())
}

fn in_window(w: Option<(i64, i64)>, d: i64) -> bool {
    w.map_or(true, |(lo, hi)| lo <= d && d <= hi)
}

fn build_quotient<F: Field>(job: &JobConfig, field: F) -> Result<GradedQuotient<F>, Failure> {
    let q = if job.q.is_empty() {
        QChoice::standard(&job.datum)
    } else {
        QChoice::from_entries(&job.datum, &job.q)?
    };
    let klr = Klr::new(&job.datum, job.alpha()?, q)?;
    let opts = QuotientOptions { max_n: job.max_n, ..Default::default() };
    Ok(GradedQuotient::build(klr, job.lambda()?, field, &opts)?)
}

fn engine_with<F: Field>(op: &EngineOp, job: &JobConfig, out: &mut Out, field: F) -> Result<(), Failure> {
    let q = build_quotient(job, field)?;
    match op {
        EngineOp::Build(a) => {
            for p in q.pieces().filter(|p| in_window(a.window, p.degree)) {
                out.emit(&json!({ "degree": p.degree, "dim": p.dim(), "formula": q.gdim.coeff(p.degree) }));
            }
            eprintln!("dim_q = {} (total {}) over {}", q.graded_dim(), q.total_dim(), q.field.name());
        }
        EngineOp::Cocenter(a) => {
            let rep = Cocenter::build(q).report();
            for d in rep.degrees.iter().filter(|d| in_window(a.window, d.degree)) {
                out.emit(&json!(d));
            }
            out.emit(&json!({
                "field": rep.field,
                "d_lambda_alpha": rep.d_lambda_alpha,
                "tr_support": rep.tr_support,
                "dim_tr_top": rep.dim_tr_top,
                "checks": [
                    { "name": "support", "passed": rep.support_ok },
                    { "name": "duality", "passed": rep.duality_ok },
                ],
            }));
            if !(rep.support_ok && rep.duality_ok) {
                return Err(Failure::Finding("cocenter support or duality check failed".into()));
            }
        }
        EngineOp::Class { element, nu, .. } => {
            let k = &q.klr;
            let nu = k.seq_id(&parse_seq(&job.datum, nu)?)?;
            let e = element::parse(k, element, nu).map_err(Failure::Usage)?;
            let cc = Cocenter::build(q);
            let c = cc.class_of(&e)?;
            let f = &cc.quotient.field;
            out.emit(&json!({
                "element": cc.quotient.klr.render(&e),
                "degree": c.degree,
                "class": c.coords.iter().map(|x| f.render(x)).collect::<Vec<_>>(),
                "zero": cc.is_zero_class(&c),
            }));
        }
        EngineOp::Verify { args, mode, seed, samples } => {
            let cc = Cocenter::build(q);
            let passed = match mode.as_str() {
                "pd-classes" => {
                    let v = verify::pd_class_checks(&cc)?;
                    let ok = v.iter().all(|c| c.e_nonzero && c.s_nonzero);
                    out.emit(&json!({ "mode": mode, "checks": v, "passed": ok }));
                    ok
                }
                "relations" => {
                    let params = RelationsParams { samples: *samples, seed: *seed, ..Default::default() };
                    let r = verify::verify_commutator_relations(&cc, &params)?;
                    out.emit(&json!({ "mode": mode, "checks": r.samples, "passed": r.passed, "amended_passed": r.amended_passed }));
                    r.amended_passed
                }
                "associativity" => {
                    let r = checks::associativity(&cc.quotient.klr, *samples, *seed);
                    out.emit(&json!({ "mode": mode, "triples": samples, "seed": seed, "passed": r.is_ok(), "counterexample": r.as_ref().err() }));
                    r.is_ok()
                }
                "defining-relations" => {
                    let r = checks::defining_relations(&cc.quotient.klr);
                    out.emit(&json!({ "mode": mode, "passed": r.is_ok(), "counterexample": r.as_ref().err() }));
                    r.is_ok()
                }
                m => {
                    let m: SpanMode = m.parse().map_err(Failure::Usage)?;
                    let r = verify::verify_spanning(&cc, m)?;
                    for d in r.degrees.iter().filter(|d| in_window(args.window, d.degree)) {
                        out.emit(&json!(d));
                    }
                    out.emit(&json!({ "mode": r.mode, "family_size": r.family_size, "passed": r.passed }));
                    r.passed
                }
            };
            if !passed {
                return Err(Failure::Finding(format!("engine verify {mode} failed")));
            }
        }
    }
    Ok(())
}

fn run_engine(op: EngineOp) -> Result<(), Failure> {
    let args = match &op {
        EngineOp::Build(a) | EngineOp::Cocenter(a) => a,
        EngineOp::Class { args, .. } | EngineOp::Verify { args, .. } => args,
    };
    let (job, mut out) = job_out(&args.job)?;
    match job.characteristic {
        0 => engine_with(&op, &job, &mut out, Rationals),
        p => {
            let f = PrimeField::new(p).ok_or_else(|| Failure::Usage(format!("bad characteristic {p}")))?;
            engine_with(&op, &job, &mut out, f)
        }
    }
}

fn vertex_json(d: &CartanDatum, lam: &DominantWeight, b: &crystal::CrystalVertex) -> Value {
    json!({
        "depth": b.depth().coeffs,
        "segments": b.records(),
        "eps": (0..d.rank()).map(|i| b.eps(d, lam, i)).collect::<Vec<_>>(),
        "phi": (0..d.rank()).map(|i| b.phi(d, lam, i)).collect::<Vec<_>>(),
    })
}

fn vertices_at(d: &CartanDatum, lam: &DominantWeight, alpha: &RootVector) -> Vec<crystal::CrystalVertex> {
    crystal::generate_below(d, lam, alpha).into_iter().filter(|b| b.depth() == *alpha).collect()
}

fn run_crystal(op: CrystalOp) -> Result<(), Failure> {
    match op {
        CrystalOp::Generate { job, max_height } => {
            let (job, mut out) = job_out(&job)?;
            let (d, lam) = (&job.datum, job.lambda()?);
            let vs = crystal::generate(d, lam, max_height);
            for b in &vs {
                out.emit(&vertex_json(d, lam, b));
            }
            eprintln!("{} vertices through height {max_height}", vs.len());
        }
        CrystalOp::Mult(a) => {
            let (job, mut out) = job_out(&a)?;
            let alpha = job.alpha()?;
            let n = crystal::weight_multiplicity(&job.datum, job.lambda()?, alpha);
            out.emit(&json!({ "alpha": alpha.coeffs, "count": n }));
        }
        CrystalOp::Pdpath(a) => {
            let (job, mut out) = job_out(&a.job)?;
            let (d, lam) = (&job.datum, job.lambda()?);
            let nu = parse_seq(d, &a.seq)?;
            match crystal::pd_path(d, lam, &nu) {
                Ok(b) => out.emit(&json!({ "sequence": labels(d, &nu), "vertex": vertex_json(d, lam, &b) })),
                Err(e) => out.emit(&json!({ "sequence": labels(d, &nu), "vertex": null, "error": e.to_string() })),
            }
        }
        CrystalOp::Extract { job, tie } => {
            let tie = match tie.as_str() {
                "smallest" => TieBreak::Smallest,
                "largest" => TieBreak::Largest,
                t => return Err(Failure::Usage(format!("unknown tie-break {t}"))),
            };
            let (job, mut out) = job_out(&job)?;
            let (d, lam) = (&job.datum, job.lambda()?);
            let mut bad = 0;
            for b in vertices_at(d, lam, job.alpha()?) {
                let nu = crystal::extract_pd(d, lam, &b, tie);
                let ok = crystal::extract_round_trips(d, lam, &b, tie);
                bad += usize::from(!ok);
                out.emit(&json!({ "vertex": vertex_json(d, lam, &b), "sequence": labels(d, &nu), "round_trip": ok }));
            }
            if bad > 0 {
                return Err(Failure::Finding(format!("{bad} vertices failed the round trip")));
            }
        }
        CrystalOp::Classes(a) => {
            let (job, mut out) = job_out(&a)?;
            let d = &job.datum;
            let classes = crystal::pd_classes(d, job.lambda()?, job.alpha()?).map_err(usage)?;
            for c in &classes {
                out.emit(&json!({ "class": c.iter().map(|nu| labels(d, nu)).collect::<Vec<_>>() }));
            }
            eprintln!("{} classes", classes.len());
        }
    }
    Ok(())
}

fn open_cache() -> Result<MultCache, Failure> {
    match std::env::var_os(CACHE_DIR_VAR) {
        Some(dir) => MultCache::open(&PathBuf::from(dir).join("mult-cache.jsonl")).map_err(usage),
        None => Ok(MultCache::in_memory()),
    }
}

fn run_mult(op: MultOp) -> Result<(), Failure> {
    match op {
        MultOp::Roots { job, max_height } => {
            let (job, mut out) = job_out(&job)?;
            let t = root_mults(&job.datum, max_height).map_err(usage)?;
            for (r, m) in t.roots() {
                out.emit(&json!({ "root": r.coeffs, "mult": m }));
            }
        }
        MultOp::Weight(a) => {
            let (job, mut out) = job_out(&a)?;
            let alpha = job.alpha()?;
            let mut cache = open_cache()?;
            let m: BigInt = cache.mult(&job.datum, job.lambda()?, alpha).map_err(usage)?;
            cache.flush().map_err(usage)?;
            out.emit(&json!({ "alpha": alpha.coeffs, "mult": m.to_string() }));
        }
    }
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.suite != "small-grid" {
        return Err(Failure::Usage(format!("unknown suite {}", a.suite)));
    }
    let spec = suite::GridSpec {
        max_coord: a.max_coord,
        max_height: a.max_height,
        seed: a.seed,
        triples: a.triples,
        engine: !a.no_engine,
        ..Default::default()
    };
    let items = suite::run_suite(&spec);
    let mut out = Out::open(a.output.as_ref())?;
    for it in &items {
        out.emit(&json!(it));
    }
    let failed: Vec<_> = items.iter().filter(|i| !i.passed).collect();
    let observed = items.iter().filter(|i| i.observation).count();
    eprintln!("{} checks, {} failed, {} observations", items.len() - observed, failed.len(), observed);
    for f in &failed {
        eprintln!("FAIL {} {}", f.check, f.subject);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Finding(format!("{} checks failed", failed.len())))
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return code;
        }
    };
    let r = match cli.command {
        Command::Pd { op } => run_pd(op),
        Command::Gdim { op } => run_gdim(op),
        Command::Engine { op } => run_engine(op),
        Command::Crystal { op } => run_crystal(op),
        Command::Mult { op } => run_mult(op),
        Command::Verify(a) => run_verify(a),
    };
    match r {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Finding(m)) => {
            eprintln!("finding: {m}");
            1
        }
    }
}
