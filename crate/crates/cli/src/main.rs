use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fpwork::apps::{self, CollinearMode};
use fpwork::avoidance::{self, SearchMode, SearchOptions};
use fpwork::bench::{self, ExperimentConfig, ExperimentReport};
use fpwork::energetics;
use fpwork::families::{self, format, EquationFamily, FamilyKind, Plane, TStarMode};
use fpwork::spectral::{self, SpectrumParams};
use fpwork::{Error, PrimeField, ResidueSet};

#[derive(Parser)]
#[command(name = "fpwork", version, about = "Additive combinatorics workbench over prime fields")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Prime modulus; `verify` accepts it repeatedly.
    #[arg(long, global = true)]
    p: Vec<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML or JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suites; exit status 1 if any hard check fails.
    Verify {
        /// Random instances per suite and prime.
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Run the experiments listed in the configuration.
    Run,
    /// Energies and moments of a set.
    Energy {
        #[arg(long)]
        set: String,
        /// Second set for the mixed energies (defaults to the first).
        #[arg(long)]
        other: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Large spectrum of a set and the inequalities it satisfies.
    Spectrum {
        #[arg(long)]
        set: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Invariants of an equation family.
    Family {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long, value_enum, default_value_t = StarMode::Exact)]
        tstar: StarMode,
        /// Restrict T* to one chart.
        #[arg(long, value_enum)]
        plane: Option<PlaneArg>,
        /// Also write the family in file format.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Avoiding sets.
    Avoid {
        #[command(subcommand)]
        action: AvoidAction,
    },
    /// Collinear triples in A x A.
    Collinear {
        #[arg(long, conflicts_with = "random")]
        set: Option<String>,
        /// Use a seeded random set of this size.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, value_enum, default_value_t = CollinearArg::Fast)]
        mode: CollinearArg,
    },
    /// Non-averaging sets of order t.
    Nonavg {
        #[arg(long)]
        t: u64,
        /// Test this set; otherwise search for a large one.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Sum of E+(A, xA) over x in X.
    Mixed {
        #[arg(long)]
        set: String,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand)]
enum AvoidAction {
    /// Whether a set avoids a family; exit status 1 if it does not.
    Check {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long)]
        set: String,
    },
    /// Search for a large avoiding set.
    Search {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<u64>,
        /// Write the witness, one residue per line.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// The parity construction for an even q.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilySource {
    /// Family file (`p=<prime>` header, then `a b c d` lines).
    #[arg(long, conflicts_with = "kind")]
    file: Option<PathBuf>,
    /// Built-in construction, with `--p`.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Subgroup order for `subgroup` and `gamma-shift`.
    #[arg(long)]
    order: Option<u64>,
    /// Parameter q for `parity`.
    #[arg(long)]
    q: Option<u64>,
    /// Comma-separated λ values for `lambda`.
    #[arg(long)]
    lambdas: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Subgroup,
    GammaShift,
    Lambda,
    Parity,
}

#[derive(Clone, Copy, ValueEnum)]
enum StarMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneArg {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Greedy,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum CollinearArg {
    Brute,
    Fast,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Greedy => SearchMode::Greedy,
            ModeArg::Randomized => SearchMode::Randomized,
        }
    }
}

/// What a command produced and whether its checks held.
struct Outcome {
    body: Body,
    passed: bool,
}

enum Body {
    Value(Value),
    Report(Box<ExperimentReport>),
}

type CliResult<T> = Result<T, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => match emit(&cli.common, &outcome.body) {
            Ok(()) if outcome.passed => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => fail(e),
        },
        Err(e) => fail(e),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn emit(common: &Common, body: &Body) -> CliResult<()> {
    let text = match (body, common.format) {
        (Body::Value(v), Format::Json) => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        (Body::Value(v), Format::Csv) => bench::object_csv(v)?,
        (Body::Report(r), Format::Json) => r.to_json() + "\n",
        (Body::Report(r), Format::Csv) if r.measurements.is_empty() => r.checks_csv()?,
        (Body::Report(r), Format::Csv) => r.measurements_csv()?,
    };
    match &common.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn field(common: &Common) -> CliResult<PrimeField> {
    match common.p.as_slice() {
        [p] => PrimeField::new(*p),
        [] => Err(Error::Config("--p is required".into())),
        _ => Err(Error::Config("give --p once for this command".into())),
    }
}

fn parse_set(field: PrimeField, text: &str) -> CliResult<ResidueSet> {
    let mut values = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: i64 = tok.parse().map_err(|_| Error::Config(format!("bad residue `{tok}`")))?;
        values.push(v);
    }
    Ok(ResidueSet::from_signed(field, values))
}

fn load_config(common: &Common) -> CliResult<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    if !common.p.is_empty() {
        config.primes = common.p.clone();
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn load_family(common: &Common, source: &FamilySource) -> CliResult<EquationFamily> {
    if let Some(path) = &source.file {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let family = format::parse_family(&text)?;
        if let Some(&p) = common.p.first() {
            if p != family.field().p() {
                return Err(Error::Config(format!("--p {p} disagrees with the file header p={}", family.field().p())));
            }
        }
        return Ok(family);
    }
    let field = field(common)?;
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Error::Config(format!("--{flag} is required")));
    let kind = match source.kind {
        None => return Err(Error::Config("give --file or --kind".into())),
        Some(KindArg::Subgroup) => FamilyKind::Subgroup { order: need(source.order, "order")? },
        Some(KindArg::GammaShift) => FamilyKind::GammaShift { order: need(source.order, "order")? },
        Some(KindArg::Parity) => FamilyKind::Parity { q: need(source.q, "q")? },
        Some(KindArg::Lambda) => {
            let text = source.lambdas.as_deref().ok_or_else(|| Error::Config("--lambdas is required".into()))?;
            FamilyKind::Lambda { lambdas: parse_set(field, text)?.elements().to_vec() }
        }
    };
    families::build_family(field, &kind)
}

fn write_witness(path: &Option<PathBuf>, set: &ResidueSet) -> CliResult<()> {
    if let Some(path) = path {
        let text: String = set.iter().map(|x| format!("{x}\n")).collect();
        write_file(path, &text)?;
    }
    Ok(())
}

fn value(v: Value) -> CliResult<Outcome> {
    Ok(Outcome { body: Body::Value(v), passed: true })
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Verify { instances } => {
            let mut config = load_config(common)?;
            if let Some(n) = instances {
                config.instances = *n;
            }
            let report = bench::run_verify(&config)?;
            let passed = report.all_hard_passed();
            Ok(Outcome { body: Body::Report(Box::new(report)), passed })
        }
        Command::Run => {
            if common.config.is_none() {
                return Err(Error::Config("run needs --config".into()));
            }
            let config = load_config(common)?;
            let report = bench::run_experiment(&config)?;
            if let Some(path) = &config.output {
                write_file(path, &(report.to_json() + "\n"))?;
            }
            let passed = report.all_hard_passed();
            Ok(Outcome { body: Body::Report(Box::new(report)), passed })
        }
        Command::Energy { set, other, k } => {
            let f = field(common)?;
            let a = parse_set(f, set)?;
            let b = match other {
                Some(t) => parse_set(f, t)?,
                None => a.clone(),
            };
            let excess = energetics::excess_additive_energy(&a)?;
            value(json!({
                "p": f.p(),
                "size": a.len(),
                "additive_energy": energetics::additive_energy(&a, &b)?.value.to_string(),
                "multiplicative_energy": energetics::multiplicative_energy(&a, &b)?.value.to_string(),
                "k": k,
                "t_k": energetics::moment_t_k(&a, *k)?.to_string(),
                "sigma_k": energetics::sigma_k(&a, *k)?,
                "excess_additive_energy": excess.to_f64(),
            }))
        }
        Command::Spectrum { set, epsilon, k } => {
            let f = field(common)?;
            let params = SpectrumParams::new(parse_set(f, set)?, *epsilon)?;
            let spec = spectral::spectrum(&params);
            let bound = spectral::spectrum_size_bound_check(&params);
            let les = spectral::les_inequality_check(&params, &spec, *k)?;
            let mult = match spectral::spectrum_mult_energy_report(&params, &spec) {
                Ok(r) => serde_json::to_value(r).expect("serializable"),
                Err(Error::HypothesisViolated(msg)) => json!({ "skipped": msg }),
                Err(e) => return Err(e),
            };
            let passed = bound.ok && les.ok;
            Ok(Outcome {
                body: Body::Value(json!({
                    "p": f.p(),
                    "epsilon": epsilon,
                    "spectrum": spec.elements(),
                    "size_bound": bound,
                    "lower_bound": les,
                    "multiplicative_energy": mult,
                })),
                passed,
            })
        }
        Command::Family { source, tstar, plane, write } => {
            let family = load_family(common, source)?;
            if let Some(path) = write {
                write_file(path, &format::write_family(&family))?;
            }
            let mode = match tstar {
                StarMode::Exact => TStarMode::Exact,
                StarMode::Greedy => TStarMode::Greedy,
            };
            let t = families::t_invariant(&family)?;
            let t_star = match plane {
                None => families::t_star_invariant(&family, mode)?.witness,
                Some(pl) => {
                    let pl = match pl {
                        PlaneArg::X => Plane::X,
                        PlaneArg::Y => Plane::Y,
                        PlaneArg::Z => Plane::Z,
                    };
                    families::t_star_in_plane(&family, pl, mode)?
                }
            };
            let greedy = families::greedy_t_witness(&family)?;
            let ratios: Vec<usize> = Plane::ALL.iter().map(|&pl| family.ratio_count(pl)).collect();
            let passed = families::verify_witness(&family, &t.witness)
                && families::verify_witness(&family, &t_star)
                && families::verify_witness(&family, &greedy);
            Ok(Outcome {
                body: Body::Value(json!({
                    "p": family.field().p(),
                    "equations": family.len(),
                    "t": t.value,
                    "t_witness": t.witness,
                    "t_star": t_star.len(),
                    "t_star_witness": t_star,
                    "greedy_t_witness": greedy,
                    "ratio_counts": ratios,
                })),
                passed,
            })
        }
        Command::Avoid { action } => match action {
            AvoidAction::Check { source, set } => {
                let family = load_family(common, source)?;
                let a = parse_set(family.field(), set)?;
                let ok = avoidance::avoids(&a, &family)?;
                let counts = avoidance::family_counts(&a, &family)?;
                Ok(Outcome {
                    body: Body::Value(json!({
                        "p": family.field().p(),
                        "size": a.len(),
                        "avoids": ok,
                        "counts": counts.iter().map(|c| c.count).collect::<Vec<_>>(),
                    })),
                    passed: ok,
                })
            }
            AvoidAction::Search { source, mode, budget, witness } => {
                let family = load_family(common, source)?;
                let options = SearchOptions { mode: (*mode).into(), budget: *budget, seed: common.seed.unwrap_or(0) };
                let found = avoidance::max_avoiding(&family, &options)?;
                write_witness(witness, &found.witness)?;
                value(json!({
                    "p": family.field().p(),
                    "equations": family.len(),
                    "size": found.size,
                    "exact": found.exact,
                    "nodes": found.nodes,
                    "witness": found.witness.elements(),
                }))
            }
            AvoidAction::Construct { q, witness } => {
                let f = field(common)?;
                let c = avoidance::construct_parity_set(f, *q)?;
                write_witness(witness, &c.set)?;
                let ok = avoidance::avoids(&c.set, &c.family)?;
                Ok(Outcome {
                    body: Body::Value(json!({
                        "p": f.p(),
                        "q": q,
                        "size": c.set.len(),
                        "equations": c.family.len(),
                        "avoids": ok,
                        "ratio": c.set.len() as f64 * (c.family.len() as f64).sqrt() / f.p() as f64,
                    })),
                    passed: ok,
                })
            }
        },
        Command::Collinear { set, random, mode } => {
            let f = field(common)?;
            let a = match (set, random) {
                (Some(s), _) => parse_set(f, s)?,
                (None, Some(n)) => {
                    let mut rng = bench::task_rng(common.seed.unwrap_or(0), 0);
                    bench::random_subset(f, *n, &mut rng)
                }
                (None, None) => return Err(Error::Config("give --set or --random".into())),
            };
            let mode = match mode {
                CollinearArg::Brute => CollinearMode::Brute,
                CollinearArg::Fast => CollinearMode::Fast,
            };
            let stats = apps::collinear_triples(&a, mode)?;
            let dev = apps::collinear_deviation(&a)?;
            value(json!({
                "p": f.p(),
                "size": a.len(),
                "total": stats.total.to_string(),
                "expected": stats.expected.to_f64(),
                "deviation": dev.deviation.to_f64(),
                "reference": dev.reference,
                "ratio": dev.ratio,
                "ratio_set_size": stats.ratio_set.len(),
            }))
        }
        Command::Nonavg { t, set, mode, budget } => {
            let f = field(common)?;
            match set {
                Some(s) => {
                    let a = parse_set(f, s)?;
                    let ok = apps::is_nonaveraging(&a, *t)?;
                    Ok(Outcome {
                        body: Body::Value(json!({ "p": f.p(), "t": t, "size": a.len(), "non_averaging": ok })),
                        passed: ok,
                    })
                }
                None => {
                    let options =
                        SearchOptions { mode: (*mode).into(), budget: *budget, seed: common.seed.unwrap_or(0) };
                    let found = apps::max_nonaveraging(f, *t, &options)?;
                    value(json!({
                        "p": f.p(),
                        "t": t,
                        "size": found.size,
                        "exact": found.exact,
                        "witness": found.witness.elements(),
                    }))
                }
            }
        }
        Command::Mixed { set, x } => {
            let f = field(common)?;
            let r = apps::mixed_energy_sum(&parse_set(f, set)?, &parse_set(f, x)?)?;
            value(json!({
                "p": f.p(),
                "sum": r.sum.to_string(),
                "expected": r.expected.to_f64(),
                "deviation": r.deviation.to_f64(),
                "deviation_exact": r.deviation,
            }))
        }
    }
}
