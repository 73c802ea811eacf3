//! `multisym`: catalogs, evaluation, orbit checks and verification runs.
//!
//! Exit status: 0 for a separating set, a full witness map or equal orbits;
//! 1 for a counterexample, an unknown element or distinct orbits; 2 for usage
//! and input errors.

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multisym::catalog::asymptotic_ratio_constant;
use multisym::invariants::{is_elementary_set, satisfies_condition_c};
use multisym::separation::record::{MinimalityRecord, RunHeader, SeparationRecord};
use multisym::{
    build_m, char_ok_for, eval_invariant, expand_set, m0_of, parse_point, same_orbit, size_m,
    size_s, verify_expansion_theorem, verify_minimal, verify_separating, CatalogId, DomainSpec,
    Field, FieldSpec, InvariantSet, PrimeField, Rationals, Sampling, SeparationVerdict,
    VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "multisym",
    version,
    about = "Multisymmetric invariants of S_n: catalogs and separation checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog set in the invariant text format.
    Build {
        /// `M:<n>:<m>`, `S:<n>:<m>`, `T:<n>:<m>` or `CX:S3`.
        id: CatalogId,
    },
    /// Evaluate every element of a set at a point.
    Eval {
        #[command(flatten)]
        set: SetArgs,
        /// Point file: one row per line, whitespace-separated entries.
        point: String,
        #[arg(long, default_value = "rational")]
        field: FieldSpec,
        #[arg(long, value_enum, default_value_t = Output::Human)]
        output: Output,
    },
    /// Decide whether two points lie in one orbit.
    Orbit {
        p: String,
        q: String,
        #[arg(long, default_value = "rational")]
        field: FieldSpec,
        #[arg(long, value_enum, default_value_t = Output::Human)]
        output: Output,
    },
    /// Check that a set separates all orbits met in a grid or sample.
    VerifySeparating {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Search for a witness of every element's necessity.
    VerifyMinimal {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Orbit representatives evaluated per element.
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
    /// Expand `M_{m0}` to `m` variable sets and check separation.
    VerifyExpansion {
        #[arg(long)]
        n: usize,
        /// Defaults to floor(n/2) + 1.
        #[arg(long)]
        m0: Option<usize>,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Set statistics, or catalog sizes for given n and m.
    Stats {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Output::Human)]
        output: Output,
    },
}

#[derive(Args)]
struct SetArgs {
    /// Catalog id or path to a set file.
    #[arg(long)]
    set: String,
    /// Number of rows; required for set files.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct DomainArgs {
    #[arg(long, default_value = "rational")]
    field: FieldSpec,
    /// Coordinate values; default 0..p-1 over fp:<p>, 0,1,2 over the rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coords: Option<Vec<i64>>,
    /// Sample this many points instead of the full grid.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Abort when more distinct fingerprints than this are held.
    #[arg(long, default_value_t = VerifyOptions::default().max_buckets)]
    max_buckets: usize,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Machine,
}

enum Source {
    Catalog(CatalogId),
    File,
}

struct LoadedSet {
    set: InvariantSet,
    n: usize,
    source: Source,
}

fn load_set(args: &SetArgs) -> Result<LoadedSet> {
    if Path::new(&args.set).is_file() {
        let text =
            std::fs::read_to_string(&args.set).with_context(|| format!("reading {}", args.set))?;
        let set = InvariantSet::parse(&text).with_context(|| format!("parsing {}", args.set))?;
        let Some(n) = args.n else {
            bail!("--n is required when --set is a file")
        };
        return Ok(LoadedSet {
            set,
            n,
            source: Source::File,
        });
    }
    let id: CatalogId = args
        .set
        .parse()
        .with_context(|| format!("`{}` is neither a file nor a catalog id", args.set))?;
    if let Some(n) = args.n {
        if n != id.n() {
            bail!("--n {n} contradicts catalog {id} (n = {})", id.n());
        }
    }
    Ok(LoadedSet {
        set: id.build()?,
        n: id.n(),
        source: Source::Catalog(id),
    })
}

fn check_hypothesis(loaded: &LoadedSet, spec: FieldSpec) -> Result<()> {
    match loaded.source {
        Source::Catalog(id) if !id.field_hypothesis_holds(spec) => {
            bail!(
                "{id} over {spec} violates the hypothesis {}",
                id.hypothesis_text()
            )
        }
        Source::File if !char_ok_for(spec, loaded.n) => {
            eprintln!(
                "warning: {spec} does not satisfy char(K) = 0 or char(K) > n for n = {}",
                loaded.n
            );
        }
        _ => {}
    }
    Ok(())
}

fn domain_for<F: Field>(field: F, n: usize, m: usize, args: &DomainArgs) -> Result<DomainSpec<F>> {
    let coords = match &args.coords {
        Some(c) => c.clone(),
        None => match args.field {
            FieldSpec::Rational => vec![0, 1, 2],
            FieldSpec::Prime(p) => (0..p as i64).collect(),
        },
    };
    let sampling = match args.samples {
        Some(count) => Sampling::Random {
            count,
            seed: args.seed,
        },
        None => Sampling::Exhaustive,
    };
    Ok(DomainSpec::from_ints(field, n, m, &coords, sampling)?)
}

fn options(args: &DomainArgs) -> VerifyOptions {
    VerifyOptions {
        jobs: args.jobs,
        max_buckets: args.max_buckets,
    }
}

fn header<F: Field>(command: &str, domain: &DomainSpec<F>, set_size: usize) -> RunHeader {
    RunHeader {
        command: command.into(),
        field: domain.field().spec().to_string(),
        n: domain.n(),
        m: domain.m(),
        set_size,
        domain: domain.describe(),
    }
}

fn emit(output: Output, human: String, machine: String) {
    match output {
        Output::Human => print!("{human}"),
        Output::Machine => println!("{machine}"),
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

macro_rules! with_field {
    ($spec:expr, $field:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rational => {
                let $field = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $field = PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn separating<F: Field>(field: F, loaded: &LoadedSet, args: &DomainArgs) -> Result<ExitCode> {
    let domain = domain_for(field, loaded.n, loaded.set.m(), args)?;
    let report = verify_separating(&loaded.set, &domain, &options(args))?;
    let record = SeparationRecord::new(
        header("verify-separating", &domain, loaded.set.len()),
        &report,
    );
    emit(args.output, record.to_human(), record.to_json());
    Ok(status(report.verdict == SeparationVerdict::Separating))
}

fn minimal<F: Field>(
    field: F,
    loaded: &LoadedSet,
    args: &DomainArgs,
    budget: u64,
) -> Result<ExitCode> {
    let domain = domain_for(field, loaded.n, loaded.set.m(), args)?;
    let report = verify_minimal(&loaded.set, &domain, budget, &options(args))?;
    let record = MinimalityRecord::new(
        header("verify-minimal", &domain, loaded.set.len()),
        budget,
        &report,
    );
    emit(args.output, record.to_human(), record.to_json());
    Ok(status(report.all_witnessed()))
}

fn expansion<F: Field>(
    field: F,
    n: usize,
    m0: usize,
    m: usize,
    args: &DomainArgs,
) -> Result<ExitCode> {
    let domain = domain_for(field, n, m, args)?;
    let report = verify_expansion_theorem(n, m0, m, &domain, &options(args))?;
    let set_size = expand_set(&build_m(n, m0)?, m)?.len();
    let mut head = header("verify-expansion", &domain, set_size);
    head.domain = format!("{} m0={m0}", head.domain);
    let record = SeparationRecord::new(head, &report);
    emit(args.output, record.to_human(), record.to_json());
    Ok(status(report.verdict == SeparationVerdict::Separating))
}

fn read_point<F: Field>(field: &F, path: &str) -> Result<multisym::Point<F::Elem>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse_point(field, &text).with_context(|| format!("parsing {path}"))
}

fn eval<F: Field>(field: F, loaded: &LoadedSet, point: &str, output: Output) -> Result<ExitCode> {
    let p = read_point(&field, point)?;
    if p.n() != loaded.n {
        bail!("point has {} rows, set expects n = {}", p.n(), loaded.n);
    }
    let mut human = String::new();
    let mut values = Vec::new();
    for f in &loaded.set {
        let v = eval_invariant(&field, f, &p)?;
        human.push_str(&format!("{f} = {v}\n"));
        values.push(json!({ "invariant": f.to_string(), "value": v.to_string() }));
    }
    let machine = json!({ "command": "eval", "field": field.spec().to_string(), "values": values });
    emit(output, human, machine.to_string());
    Ok(ExitCode::SUCCESS)
}

fn orbit<F: Field>(field: F, p: &str, q: &str, output: Output) -> Result<ExitCode> {
    let (p, q) = (read_point(&field, p)?, read_point(&field, q)?);
    let same = same_orbit(&p, &q)?;
    let (cp, cq) = (p.canonical_form(), q.canonical_form());
    let human = format!(
        "same_orbit: {same}\ncanonical p:\n{}\ncanonical q:\n{}\n",
        indent(&cp),
        indent(&cq)
    );
    let machine = json!({
        "command": "orbit",
        "field": field.spec().to_string(),
        "same_orbit": same,
        "canonical_p": cp.to_string(),
        "canonical_q": cq.to_string(),
    });
    emit(output, human, machine.to_string());
    Ok(status(same))
}

fn indent(p: &impl Display) -> String {
    p.to_string()
        .lines()
        .map(|l| format!("  {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn stats(
    set: Option<String>,
    n: Option<usize>,
    m: Option<usize>,
    output: Output,
) -> Result<ExitCode> {
    if let Some(set) = set {
        let loaded = load_set(&SetArgs { set, n })?;
        let s = &loaded.set;
        let machine = json!({
            "command": "stats",
            "n": loaded.n,
            "m": s.m(),
            "size": s.len(),
            "max_t": s.max_t(),
            "elementary": is_elementary_set(s),
            "condition_c": satisfies_condition_c(s),
        });
        let human = format!(
            "n: {}\nm: {}\nsize: {}\nmax_t: {}\nelementary: {}\ncondition_c: {}\n",
            loaded.n,
            s.m(),
            s.len(),
            s.max_t(),
            is_elementary_set(s),
            satisfies_condition_c(s)
        );
        emit(output, human, machine.to_string());
        return Ok(ExitCode::SUCCESS);
    }
    let (Some(n), Some(m)) = (n, m) else {
        bail!("stats needs --set, or both --n and --m")
    };
    let (sm, ss) = (size_m(n, m), size_s(n, m));
    let (constant, exponent) = asymptotic_ratio_constant(n);
    let scaled = ss as f64 / sm as f64 * (m as f64).powi(exponent as i32);
    let machine = json!({
        "command": "stats",
        "n": n,
        "m": m,
        "m0": m0_of(n),
        "size_m": sm.to_string(),
        "size_s": ss.to_string(),
        "ratio_scaled": scaled,
        "ratio_constant": constant.to_string(),
        "ratio_exponent": exponent,
    });
    let human = format!(
        "n: {n}\nm: {m}\nm0: {}\nsize_m: {sm}\nsize_s: {ss}\nratio_scaled: {scaled:.6}\nratio_limit: {constant} (times m^{exponent})\n",
        m0_of(n)
    );
    emit(output, human, machine.to_string());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { id } => {
            print!("{}", id.build()?.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            set,
            point,
            field,
            output,
        } => {
            let loaded = load_set(&set)?;
            with_field!(field, f => eval(f, &loaded, &point, output))
        }
        Command::Orbit {
            p,
            q,
            field,
            output,
        } => with_field!(field, f => orbit(f, &p, &q, output)),
        Command::VerifySeparating { set, domain } => {
            let loaded = load_set(&set)?;
            check_hypothesis(&loaded, domain.field)?;
            with_field!(domain.field, f => separating(f, &loaded, &domain))
        }
        Command::VerifyMinimal {
            set,
            domain,
            budget,
        } => {
            let loaded = load_set(&set)?;
            check_hypothesis(&loaded, domain.field)?;
            with_field!(domain.field, f => minimal(f, &loaded, &domain, budget))
        }
        Command::VerifyExpansion { n, m0, m, domain } => {
            if !char_ok_for(domain.field, n) {
                bail!(
                    "M over {} violates the hypothesis char(K) = 0 or char(K) > n",
                    domain.field
                );
            }
            let m0 = m0.unwrap_or_else(|| m0_of(n));
            with_field!(domain.field, f => expansion(f, n, m0, m, &domain))
        }
        Command::Stats { set, n, m, output } => stats(set, n, m, output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
