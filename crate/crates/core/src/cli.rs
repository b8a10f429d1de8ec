//! The `mux` command line front end.
//!
//! Every command reads multiplexes in the JSON file format
//! `{"n": .., "layer1": [[u, v], ..], "layer2": [[u, v], ..]}` and writes
//! JSON (or CSV for `slice` and `--samples-csv`). Numeric results carry a
//! provenance tag: `exact` (rational string), `float`, or `monte_carlo`.
//! Validation failures exit with status 2 and a one-line diagnostic.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::counting::{count_extensions, count_injections, CountResult, MotifCounter, GraphIndex};
use crate::error::{MuxError, Result};
use crate::multiplex::Multiplex;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::region;
use crate::sampler::{self, from_theta, plant, ProbTriple, SeedSpec};
use crate::stats;
use crate::submultiplex::{completion_literal, Submultiplex};
use crate::threshold::{self, ThetaPoint};

/// Seed used when neither `--seed` nor `MUX_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "mux", version, about = "Thresholds, regions and limit laws for correlated Erdos-Renyi multiplexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one multiplex from G(n, p1, p2, p12)
    Sample(SampleArgs),
    /// Count injective homomorphisms of a motif into a graph
    Count(CountArgs),
    /// Exact expected injection and copy counts
    Expect(ModelArgs),
    /// Exact variance of the injection count (motifs with at most 6 vertices)
    Variance(ModelArgs),
    /// Threshold function Phi_H(n, p) and its minimising signature
    Phi(ModelArgs),
    /// Exact Delta_H(theta) and every minimising submultiplex
    Delta(ThetaCmd),
    /// Irredundant constraints, vertices, rays and facets of the satisfiable region
    Region(RegionArgs),
    /// Boundary polyline of the theta1 = theta2 slice as CSV.
    ///
    /// Columns: kind (vertex|ray), theta, theta12, on_threshold, in_domain,
    /// next_open (the segment to the next row is excluded from the region),
    /// next_constraint (constraints carrying that segment).
    Slice(SliceArgs),
    /// Balance label of the motif at theta
    Classify(ThetaCmd),
    /// The core (maximal extremal submultiplex) at a boundary theta
    Core(CoreArgs),
    /// Extension counts of a core copy: exact mean, or a count in a graph
    Extensions(ExtensionArgs),
    /// Monte Carlo limit-law experiment.
    ///
    /// The samples CSV has header rep,injections,copies.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Default)]
pub struct ProbArgs {
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub p12: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct ThetaArgs {
    /// Exact rational such as 3/4 or 0.75
    #[arg(long, value_parser = parse_q)]
    pub theta1: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub theta2: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub theta12: Option<Rational>,
}

fn parse_q(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl ThetaArgs {
    fn given(&self) -> bool {
        self.theta1.is_some() || self.theta2.is_some() || self.theta12.is_some()
    }

    fn get(&self) -> Result<ThetaPoint> {
        match (self.theta1, self.theta2, self.theta12) {
            (Some(a), Some(b), Some(c)) => Ok(ThetaPoint::new(a, b, c)),
            _ => Err(MuxError::InvalidArgument("need all of --theta1 --theta2 --theta12".into())),
        }
    }
}

impl ProbArgs {
    fn given(&self) -> bool {
        self.p1.is_some() || self.p2.is_some() || self.p12.is_some()
    }

    fn get(&self) -> Result<ProbTriple> {
        match (self.p1, self.p2, self.p12) {
            (Some(a), Some(b), Some(c)) => ProbTriple::new(a, b, c),
            _ => Err(MuxError::InvalidArgument("need all of --p1 --p2 --p12".into())),
        }
    }
}

/// Exactly one of the probability and exponent triples, resolved at `n`.
fn resolve_p(p: &ProbArgs, t: &ThetaArgs, n: u64) -> Result<(ProbTriple, Option<ThetaPoint>)> {
    match (p.given(), t.given()) {
        (true, false) => Ok((p.get()?, None)),
        (false, true) => {
            let theta = t.get()?;
            Ok((from_theta(n, &theta)?, Some(theta)))
        }
        (true, true) => Err(MuxError::InvalidArgument("give either --p1/--p2/--p12 or --theta1/--theta2/--theta12, not both".into())),
        (false, false) => Err(MuxError::InvalidArgument("need --p1/--p2/--p12 or --theta1/--theta2/--theta12".into())),
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub p: ProbArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, env = "MUX_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Replication index selecting the random stream under the seed
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub motif: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    /// Also report |Aut(H)| and the copy count
    #[arg(long)]
    pub copies: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub motif: PathBuf,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub p: ProbArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThetaCmd {
    #[arg(long)]
    pub motif: PathBuf,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoreArgs {
    #[arg(long)]
    pub motif: PathBuf,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Also report the literal (uncorrected) completion of every extremal submultiplex
    #[arg(long)]
    pub literal_completion: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub motif: PathBuf,
    /// Also write the theta1 = theta2 slice polyline as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long)]
    pub motif: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtensionArgs {
    #[arg(long)]
    pub motif: PathBuf,
    /// Core pattern in the motif's labels; computed from theta when absent
    #[arg(long)]
    pub core: Option<PathBuf>,
    /// Count extensions of the core planted on its own labels in this graph
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u64>,
    #[command(flatten)]
    pub p: ProbArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub motif: PathBuf,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub reps: u64,
    #[arg(long, env = "MUX_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, env = "MUX_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub samples_csv: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    let msg = e.to_string();
                    let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
                    eprintln!("mux: {}", line.trim_start_matches("error: "));
                    2
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mux: {}", e.to_string().replace('\n', " "));
            2
        }
    }
}

fn exact(q: &Rational) -> Value {
    json!({ "value": format_rational(q), "provenance": "exact" })
}

fn float(x: f64) -> Value {
    json!({ "value": x, "provenance": "float" })
}

fn theta_json(t: &ThetaPoint) -> Value {
    json!({
        "theta1": format_rational(&t.theta1),
        "theta2": format_rational(&t.theta2),
        "theta12": format_rational(&t.theta12),
    })
}

fn sub_json(s: &Submultiplex) -> Value {
    json!({ "vertices": s.vertices, "s1": s.layer1, "s2": s.layer2, "signature": s.signature().to_string() })
}

fn count_json(c: &CountResult) -> Value {
    json!({ "injections": c.injections, "aut_size": c.aut_size, "copies": c.copies, "provenance": "exact" })
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| MuxError::Io(e.error.to_string()))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<()> {
    emit(out, serde_json::to_string_pretty(v)? + "\n")
}

fn read_submultiplex(path: &Path, host: &Multiplex) -> Result<Submultiplex> {
    let m = Multiplex::read_file(path)?;
    let s = Submultiplex::from_multiplex(&m);
    if !s.is_contained_in(host) {
        return Err(MuxError::NotASubmultiplex);
    }
    Ok(s)
}

fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Sample(a) => {
            let (p, _) = resolve_p(&a.p, &a.theta, a.n as u64)?;
            let g = sampler::sample(a.n, &p, SeedSpec::new(a.seed, a.rep));
            emit(&a.out, g.to_json() + "\n")
        }
        Command::Count(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let g = Multiplex::read_file(&a.graph)?;
            let v = if a.copies {
                count_json(&MotifCounter::new(&h)?.count(&GraphIndex::new(&g)))
            } else {
                json!({ "injections": count_injections(&h, &g)?, "provenance": "exact" })
            };
            emit_json(&a.out, &v)
        }
        Command::Expect(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let (p, theta) = resolve_p(&a.p, &a.theta, a.n)?;
            let v = json!({
                "n": a.n,
                "p": p,
                "theta": theta.as_ref().map(theta_json),
                "signature": h.edge_class_counts().to_string(),
                "mean_injections": float(stats::exact_mean_injections(&h, a.n, &p)?),
                "mean_copies": float(stats::exact_mean_copies(&h, a.n, &p)?),
            });
            emit_json(&a.out, &v)
        }
        Command::Variance(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let (p, theta) = resolve_p(&a.p, &a.theta, a.n)?;
            let v = json!({
                "n": a.n,
                "p": p,
                "theta": theta.as_ref().map(theta_json),
                "mean_injections": float(stats::exact_mean_injections(&h, a.n, &p)?),
                "variance_injections": float(stats::exact_variance_injections(&h, a.n, &p)?),
            });
            emit_json(&a.out, &v)
        }
        Command::Phi(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let (p, theta) = resolve_p(&a.p, &a.theta, a.n)?;
            let r = threshold::phi(&h, a.n, &p)?;
            let v = json!({
                "n": a.n,
                "p": p,
                "theta": theta.as_ref().map(theta_json),
                "phi": float(r.value),
                "log_phi": float(r.log_value),
                "argmin": r.argmin.to_string(),
            });
            emit_json(&a.out, &v)
        }
        Command::Delta(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let theta = a.theta.get()?;
            let d = threshold::delta(&h, &theta)?;
            let v = json!({
                "theta": theta_json(&theta),
                "delta": exact(&d.value),
                "extremal": d.argmin.iter().map(sub_json).collect::<Vec<_>>(),
                "membership": region::membership(&h, &theta)?.as_str(),
            });
            emit_json(&a.out, &v)
        }
        Command::Region(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let desc = region::polyhedron(&h)?;
            if let Some(csv) = &a.csv {
                write_atomic(csv, &region::slice2d(&h)?.to_csv())?;
            }
            let mut v = serde_json::to_value(&desc)?;
            v["provenance"] = json!("exact");
            emit_json(&a.out, &v)
        }
        Command::Slice(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            emit(&a.out, region::slice2d(&h)?.to_csv())
        }
        Command::Classify(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let theta = a.theta.get()?;
            let c = threshold::classify(&h, &theta)?;
            let v = json!({
                "theta": theta_json(&theta),
                "label": c.label.as_str(),
                "delta": exact(&c.delta),
                "ell_whole": exact(&c.ell_whole),
            });
            emit_json(&a.out, &v)
        }
        Command::Core(a) => {
            let h = Multiplex::read_file(&a.motif)?;
            let theta = a.theta.get()?;
            let core = threshold::core(&h, &theta)?;
            let label = threshold::classify_balance(&h, &theta)?;
            let mut v = json!({
                "theta": theta_json(&theta),
                "label": label.as_str(),
                "core": core.to_multiplex(h.n_vertices()),
                "core_vertices": core.vertices,
                "signature": core.signature().to_string(),
            });
            if a.literal_completion {
                let lit: Vec<Multiplex> =
                    threshold::extremal_set(&h, &theta)?.iter().map(|f| completion_literal(f, &h)).collect();
                v["literal_completions"] = serde_json::to_value(lit)?;
            }
            emit_json(&a.out, &v)
        }
        Command::Extensions(a) => extensions(a),
        Command::Simulate(a) => simulate(a),
    }
}

fn extensions(a: &ExtensionArgs) -> Result<()> {
    let h = Multiplex::read_file(&a.motif)?;
    let core = match &a.core {
        Some(path) => read_submultiplex(path, &h)?,
        None => threshold::core(&h, &a.theta.get()?)?,
    };
    if let Some(path) = &a.graph {
        let g = Multiplex::read_file(path)?;
        let copy = core.to_multiplex(g.n_vertices());
        let planted = plant(&g, &copy)?;
        let count = count_extensions(&copy, &h, &core, &planted)?;
        return emit_json(
            &a.out,
            &json!({ "core": sub_json(&core), "extensions": count, "provenance": "exact" }),
        );
    }
    let n = a.n.ok_or_else(|| MuxError::InvalidArgument("need --n (or --graph)".into()))?;
    let (p, theta) = resolve_p(&a.p, &a.theta, n)?;
    let v = json!({
        "core": sub_json(&core),
        "n": n,
        "p": p,
        "theta": theta.as_ref().map(theta_json),
        "mean_extensions": float(stats::exact_mean_extensions(&core, &h, n, &p)?),
    });
    emit_json(&a.out, &v)
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let h = Multiplex::read_file(&a.motif)?;
    let theta = a.theta.get()?;
    let report = stats::limit_experiment(&h, &theta, a.n, a.reps, a.seed, a.workers)?;
    if let Some(csv) = &a.samples_csv {
        let mut text = String::from("rep,injections,copies\n");
        for s in &report.samples {
            text.push_str(&format!("{},{},{}\n", s.rep, s.injections, s.copies));
        }
        write_atomic(csv, &text)?;
    }
    let mut v = serde_json::to_value(&report)?;
    v["provenance"] = json!({ "kind": "monte_carlo", "reps": a.reps, "seed": a.seed });
    emit_json(&a.out, &v)
}
