//! Command-line front end: argument parsing, command dispatch and reports.

mod report;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

pub use report::{Anchor, Echo, Item, Report, Summary, Verdict, SCHEMA};
pub use suites::{outside_primes, Params, Suite};

use crate::coefficients::{mod_q, rational, torsion};
use crate::error::{Error, Result};
use crate::theory::{Catalog, GradedTheory, TheoryWire};
use crate::transform::{equivalence_report, TransformationSample};

/// Exit status when verification fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status when an equivalence biconditional is violated.
pub const EXIT_VIOLATION: i32 = 2;
/// Exit status for bad input or usage.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kkcoeff", version, about = "Finite, torsion and rational coefficient computations")]
pub struct Cli {
    /// Catalog file replacing the bundled catalog.
    #[arg(long, global = true, env = "KKCOEFF_CATALOG")]
    pub catalog: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient groups of one theory, degree by degree.
    Compute(ComputeArgs),
    /// Run verification suites over catalog entries and seeded random data.
    Verify(VerifyArgs),
    /// Check the equivalence biconditionals on a transformation sample file.
    CheckTransform(CheckArgs),
    /// Inspect the catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Catalog entry, `cuntz:N` or `C_q(N)`.
    #[arg(long, conflicts_with = "theory", required_unless_present = "theory")]
    pub entry: Option<String>,
    /// Theory file in the catalog entry format.
    #[arg(long)]
    pub theory: Option<PathBuf>,
    /// `mod:Q`, `torsion` or `rational`.
    #[arg(long)]
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Mod(BigInt),
    Torsion,
    Rational,
}

impl FromStr for Coeff {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "torsion" => Ok(Coeff::Torsion),
            "rational" => Ok(Coeff::Rational),
            _ => {
                let q = s
                    .strip_prefix("mod:")
                    .ok_or_else(|| format!("expected mod:Q, torsion or rational, got {s:?}"))?;
                let q: BigInt = q.parse().map_err(|_| format!("modulus {q:?} is not an integer"))?;
                if q < BigInt::from(2) {
                    return Err(format!("modulus must be at least 2, got {q}"));
                }
                Ok(Coeff::Mod(q))
            }
        }
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Mod(q) => write!(f, "mod:{q}"),
            Coeff::Torsion => write!(f, "torsion"),
            Coeff::Rational => write!(f, "rational"),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run; every suite when omitted.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Catalog entry or `all`.
    #[arg(long, default_value = "all")]
    pub entry: String,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=1000))]
    pub q_max: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..=1000))]
    pub p_max: u64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..=4096))]
    pub profile_bound: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random base theories added to the order-bound and colimit suites.
    #[arg(long, default_value_t = 10)]
    pub random: usize,
    /// Random transformation samples for the equivalence suite.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        VerifyArgs {
            suite: None,
            entry: "all".into(),
            q_max: 20,
            p_max: 10,
            profile_bound: 64,
            seed: 0,
            random: 10,
            samples: 50,
        }
    }
}

impl VerifyArgs {
    /// The ranges the command line enforces, for callers that bypass it.
    pub fn check_ranges(&self) -> Result<()> {
        for (flag, v, lo, hi) in [
            ("q-max", self.q_max, 2, 1000),
            ("p-max", self.p_max, 2, 1000),
            ("profile-bound", self.profile_bound, 2, 4096),
        ] {
            if !(lo..=hi).contains(&v) {
                return Err(Error::InvalidParameter(format!("{flag} must lie in {lo}..={hi}, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Transformation sample file.
    pub sample: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    List,
    Show { name: String },
}

/// A finished command: the report plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.report.to_text(),
            Format::Json => self.report.to_json(),
        }
    }
}

pub fn load_catalog(path: Option<&PathBuf>) -> Result<Catalog> {
    match path {
        Some(p) => Catalog::from_path(p),
        None => Ok(Catalog::builtin()),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let catalog = load_catalog(cli.catalog.as_ref())?;
    match &cli.command {
        Command::Compute(a) => compute(&catalog, a),
        Command::Verify(a) => verify(&catalog, a),
        Command::CheckTransform(a) => check_transform(a),
        Command::Catalog(c) => catalog_command(&catalog, c),
    }
}

fn echo(command: &str, args: &[(&str, String)]) -> Echo {
    Echo {
        command: command.into(),
        args: args.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
    }
}

fn finish(report: Report) -> Outcome {
    let exit_code = if report.passed() { 0 } else { EXIT_FAIL };
    Outcome { report, exit_code }
}

fn read_theory(path: &PathBuf) -> Result<GradedTheory> {
    let text = std::fs::read_to_string(path)?;
    let wire: TheoryWire = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidTheory(format!("{}: {e}", path.display())))?;
    GradedTheory::from_wire(wire)
}

pub fn compute(catalog: &Catalog, a: &ComputeArgs) -> Result<Outcome> {
    let (theory, source) = match (&a.entry, &a.theory) {
        (Some(name), _) => (catalog.resolve(name)?.theory, ("entry", name.clone())),
        (None, Some(path)) => (read_theory(path)?, ("theory", path.display().to_string())),
        (None, None) => return Err(Error::InvalidParameter("either --entry or --theory is required".into())),
    };
    compute_theory(&theory, source, &a.coeff)
}

/// `source` is the (key, value) pair echoed as the report's input.
pub fn compute_theory(theory: &GradedTheory, source: (&str, String), coeff: &Coeff) -> Result<Outcome> {
    let mut items = Vec::new();
    let mut notes = Vec::new();
    let subject = |n: i64| format!("{} degree {n}", theory.name());
    match coeff {
        Coeff::Mod(q) => {
            let m = mod_q(theory, q)?;
            for n in theory.degrees() {
                let (coker, tor) = m.parts(n)?;
                let res = m.resolution(n);
                items.push(Item::value(
                    "mod-q",
                    subject(n),
                    Anchor::ModQValue,
                    json!({
                        "degree": n,
                        "group": m.group(n),
                        "cokernel_part": coker,
                        "tor_part": tor,
                        "extension": res,
                        "summary": format!("{} ({:?})", m.group(n), res.mode),
                    }),
                ));
            }
            notes.push(format!("degree n holds H_n/{q} + H_(n-1)[{q}]"));
        }
        Coeff::Torsion => {
            let t = torsion(theory);
            for n in theory.degrees() {
                items.push(Item::value(
                    "torsion",
                    subject(n),
                    Anchor::TorsionValue,
                    json!({ "degree": n, "group": t.group(n), "summary": t.group(n).to_string() }),
                ));
            }
            notes.push("degree n holds (Q/Z)^rank(H_n) + T(H_(n-1))".into());
        }
        Coeff::Rational => {
            for (n, g) in theory.degrees().zip(rational(theory)) {
                items.push(Item::value(
                    "rational",
                    subject(n),
                    Anchor::RationalValue,
                    json!({ "degree": n, "group": g, "summary": g.to_string() }),
                ));
            }
        }
    }
    let report = Report::new(
        echo("compute", &[(source.0, source.1), ("coeff", coeff.to_string())]),
        items,
        notes,
    )?;
    Ok(finish(report))
}

pub fn verify(catalog: &Catalog, a: &VerifyArgs) -> Result<Outcome> {
    a.check_ranges()?;
    let theories = catalog.select(&a.entry)?.into_iter().map(|e| e.theory).collect();
    let params = Params {
        theories,
        q_max: a.q_max,
        p_max: a.p_max,
        profile_bound: a.profile_bound,
        seed: a.seed,
        random: a.random,
        samples: a.samples,
    };
    let chosen: Vec<Suite> = match a.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut items = Vec::new();
    for s in &chosen {
        items.extend(suites::run(*s, &params)?);
    }
    let names: Vec<&str> = chosen.iter().map(|s| s.name()).collect();
    let report = Report::new(
        echo(
            "verify",
            &[
                ("suite", names.join(",")),
                ("entry", a.entry.clone()),
                ("q-max", a.q_max.to_string()),
                ("p-max", a.p_max.to_string()),
                ("profile-bound", a.profile_bound.to_string()),
                ("seed", a.seed.to_string()),
                ("random", a.random.to_string()),
                ("samples", a.samples.to_string()),
            ],
        ),
        items,
        Vec::new(),
    )?;
    Ok(finish(report))
}

pub fn check_transform(a: &CheckArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.sample)?;
    let sample = TransformationSample::from_json(&text)?;
    check_sample(&sample, a.sample.display().to_string())
}

pub fn check_sample(sample: &TransformationSample, label: String) -> Result<Outcome> {
    let r = equivalence_report(sample)?;
    let items = r
        .cases
        .iter()
        .map(|c| {
            let hold = c.integral_iff_rational_and_torsion && c.integral_iff_rational_and_finite;
            let yn = |b: bool| if b { "YES" } else { "NO" };
            let finite = c.mod_p_iso.values().all(|&v| v);
            Item::check(
                "equivalence",
                format!("{} / {}", r.sample, c.algebra),
                Anchor::Equivalence,
                hold,
                json!({
                    "case": c,
                    "summary": format!(
                        "integral {}, rational {}, torsion {}, mod-p {}",
                        yn(c.integral_iso), yn(c.rational_iso), yn(c.torsion_iso), yn(finite)
                    ),
                }),
            )
        })
        .collect();
    let notes = vec![
        format!("role {}", r.role),
        format!("relevant primes {:?}", r.primes),
    ];
    let report = Report::new(
        echo("check-transform", &[("sample", label)]),
        items,
        notes,
    )?;
    let exit_code = if r.biconditionals_hold { 0 } else { EXIT_VIOLATION };
    Ok(Outcome { report, exit_code })
}

fn catalog_command(catalog: &Catalog, c: &CatalogCommand) -> Result<Outcome> {
    let (entries, args) = match c {
        CatalogCommand::List => (catalog.entries().to_vec(), vec![]),
        CatalogCommand::Show { name } => (vec![catalog.resolve(name)?], vec![("name", name.clone())]),
    };
    let items = entries
        .iter()
        .map(|e| {
            let mut data = serde_json::to_value(e.to_wire()).expect("theories serialize");
            data["summary"] = json!(e.theory.to_string());
            Item::value("catalog", e.name.clone(), Anchor::Catalog, data)
        })
        .collect();
    let report = Report::new(echo("catalog", &args), items, Vec::new())?;
    Ok(finish(report))
}
