//! `tops`: run coupled kicked top and transition-ensemble experiments from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tops_core::entanglement::{marcenko_pastur_pdf, predicted_entropy, EntropyRegime};
use tops_core::harness::{
    emit, points_csv, run_experiment, to_json_string, EnsembleSystem, ExperimentConfig, ExperimentKind, OutputFormat,
    ResultRecord, SystemConfig, TopsSystem,
};
use tops_core::spectral_stats::{PerturbativeSpacing, ReferenceLaw};
use tops_core::{Coupling, Error, MatrixElementLaw, Result, Symmetry};

#[derive(Parser, Debug)]
#[command(name = "tops", version, about = "Coupled kicked tops: spectra, entanglement and random-matrix checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nearest-neighbour spacing statistics of the coupled tops.
    Spacing(TopsCommand),
    /// Eigenstate entanglement: Schmidt values and entropies.
    Entangle(TopsCommand),
    /// Pooled rescaled Schmidt values against Marčenko-Pastur.
    SchmidtDist(TopsCommand),
    /// Transition parameter Λ(ε) of the coupled tops.
    Lambda(TopsCommand),
    /// Distribution of normalized coupling elements in a transition ensemble.
    OmegaDist(EnsembleCommand),
    /// Ensemble Λ formula against its Monte-Carlo estimate.
    RmtCheck(EnsembleCommand),
    /// Evaluate analytic curves without running an experiment.
    Predict(PredictArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML experiment file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling strengths ε (comma separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda")]
    eps: Option<Vec<f64>>,
    /// Transition parameters Λ (comma separated); ε is solved per value.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realizations: Option<usize>,
    /// Largest N1·N2 allowed.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Output file; without it results go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct TopsCommand {
    #[arg(long)]
    j1: Option<u32>,
    #[arg(long)]
    j2: Option<u32>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    /// Entropy orders (comma separated).
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct EnsembleCommand {
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long, value_enum)]
    symmetry: Option<SymmetryArg>,
    #[arg(long, value_enum)]
    coupling: Option<CouplingArg>,
    /// Off-diagonal pairs per realization.
    #[arg(long)]
    pairs: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long, value_enum)]
    kind: PredictKind,
    /// Spacings at which to evaluate spacing laws.
    #[arg(long, value_delimiter = ',')]
    s: Vec<f64>,
    /// Rescaled Schmidt values for marcenko-pastur.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Λ values (entropy) or the single Λ of the perturbative spacing law.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = RegimeArg::Recursive)]
    regime: RegimeArg,
    /// First dimension; also the number of superposed spectra for n1coe.
    #[arg(long, default_value_t = 2)]
    n1: usize,
    #[arg(long)]
    n2: Option<usize>,
    /// Dimension ratio N2/N1 for marcenko-pastur.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, value_enum, default_value_t = LawArg::BesselCoe)]
    law: LawArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SymmetryArg {
    Coe,
    Cue,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CouplingArg {
    DiagonalPhases,
    ProductPhases,
    KickedTopV12,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PredictKind {
    Poisson,
    Wigner,
    N1coe,
    CloserNeighbor,
    Perturbative,
    Entropy,
    MarcenkoPastur,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RegimeArg {
    Perturbative,
    Recursive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LawArg {
    PorterThomas,
    Exponential,
    BesselCoe,
    BesselCue,
}

impl From<LawArg> for MatrixElementLaw {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::PorterThomas => MatrixElementLaw::PorterThomas,
            LawArg::Exponential => MatrixElementLaw::Exponential,
            LawArg::BesselCoe => MatrixElementLaw::BesselCoe,
            LawArg::BesselCue => MatrixElementLaw::BesselCue,
        }
    }
}

fn base_config(
    common: &Common,
    kind: ExperimentKind,
    default_system: impl FnOnce() -> Result<SystemConfig>,
) -> Result<ExperimentConfig> {
    let mut c = match &common.config {
        Some(path) => {
            let mut c = ExperimentConfig::from_file(path)?;
            c.kind = kind;
            c
        }
        None => ExperimentConfig::new(kind, default_system()?),
    };
    if let Some(e) = &common.eps {
        c.epsilon_grid = Some(e.clone());
        c.lambda_grid = None;
    }
    if let Some(l) = &common.lambda {
        c.lambda_grid = Some(l.clone());
        c.epsilon_grid = None;
    }
    if let Some(s) = common.seed {
        c.base_seed = s;
    }
    if let Some(r) = common.realizations {
        c.realizations = r;
    }
    if let Some(m) = common.max_dim {
        c.max_dim = m;
    }
    if let Some(o) = &common.out {
        c.output = Some(o.clone());
    }
    if let Some(f) = common.format {
        c.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    Ok(c)
}

fn tops_config(cmd: &TopsCommand, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut c = base_config(&cmd.common, kind, || match (cmd.j1, cmd.j2) {
        (Some(j1), Some(j2)) => Ok(SystemConfig::Tops(TopsSystem::new(j1, j2))),
        _ => Err(Error::Config("--j1 and --j2 are required without --config".into())),
    })?;
    let SystemConfig::Tops(t) = &mut c.system else {
        return Err(Error::Config("configuration file describes an ensemble, not kicked tops".into()));
    };
    if let Some(v) = cmd.j1 {
        t.j1 = v;
    }
    if let Some(v) = cmd.j2 {
        t.j2 = v;
    }
    if let Some(v) = cmd.k1 {
        t.k1 = v;
    }
    if let Some(v) = cmd.k2 {
        t.k2 = v;
    }
    if let Some(v) = cmd.alpha1 {
        t.alpha1 = v;
    }
    if let Some(v) = cmd.alpha2 {
        t.alpha2 = v;
    }
    if let Some(a) = &cmd.alphas {
        c.alphas = a.clone();
    }
    Ok(c)
}

fn ensemble_config(cmd: &EnsembleCommand, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut c = base_config(&cmd.common, kind, || match (cmd.n1, cmd.n2) {
        (Some(n1), Some(n2)) => Ok(SystemConfig::Ensemble(EnsembleSystem {
            symmetry: Symmetry::Coe,
            coupling: Coupling::DiagonalPhases,
            n1,
            n2,
        })),
        _ => Err(Error::Config("--n1 and --n2 are required without --config".into())),
    })?;
    let SystemConfig::Ensemble(e) = &mut c.system else {
        return Err(Error::Config("configuration file describes kicked tops, not an ensemble".into()));
    };
    if let Some(v) = cmd.n1 {
        e.n1 = v;
    }
    if let Some(v) = cmd.n2 {
        e.n2 = v;
    }
    if let Some(s) = cmd.symmetry {
        e.symmetry = match s {
            SymmetryArg::Coe => Symmetry::Coe,
            SymmetryArg::Cue => Symmetry::Cue,
        };
    }
    if let Some(k) = cmd.coupling {
        e.coupling = match k {
            CouplingArg::DiagonalPhases => Coupling::DiagonalPhases,
            CouplingArg::ProductPhases => Coupling::ProductPhases,
            CouplingArg::KickedTopV12 => Coupling::KickedTopV12,
        };
    }
    if let Some(p) = cmd.pairs {
        c.omega_pairs = p;
    }
    Ok(c)
}

fn report(record: &ResultRecord, out: &mut impl Write) -> Result<()> {
    match &record.config.output {
        Some(path) => {
            for p in emit(record, record.config.format, path)? {
                writeln!(out, "wrote {}", p.display())?;
            }
        }
        None => match record.config.format {
            OutputFormat::Csv => write!(out, "{}", points_csv(record)?)?,
            OutputFormat::Json => writeln!(out, "{}", to_json_string(record)?)?,
        },
    }
    for n in &record.notes {
        eprintln!("note: {n}");
    }
    Ok(())
}

fn run_lambda(cmd: &TopsCommand, out: &mut impl Write) -> Result<()> {
    let config = tops_config(cmd, ExperimentKind::LambdaScan)?;
    let record = run_experiment(&config)?;
    if config.output.is_some() || config.format == OutputFormat::Json {
        return report(&record, out);
    }
    for p in &record.points {
        let lambda = p.get("lambda").map(|o| o.value).unwrap_or(f64::NAN);
        writeln!(out, "{lambda}")?;
    }
    Ok(())
}

fn predict(args: &PredictArgs, out: &mut impl Write) -> Result<()> {
    let law: MatrixElementLaw = args.law.into();
    let spacing_law = match args.kind {
        PredictKind::Poisson => Some(ReferenceLaw::Poisson),
        PredictKind::Wigner => Some(ReferenceLaw::WignerCoe),
        PredictKind::N1coe => Some(ReferenceLaw::N1Coe { n1: args.n1 as u32 }),
        PredictKind::CloserNeighbor => Some(ReferenceLaw::CloserNeighbor),
        _ => None,
    };
    let (xs, values): (&[f64], Vec<f64>) = match args.kind {
        _ if spacing_law.is_some() => {
            let l = spacing_law.expect("checked above");
            (&args.s, args.s.iter().map(|&s| l.pdf(s)).collect::<Result<_>>()?)
        }
        PredictKind::Perturbative => {
            let [lambda] = args.lambda[..] else {
                return Err(Error::Config("perturbative spacing needs exactly one --lambda".into()));
            };
            let p = PerturbativeSpacing::new(lambda, law)?;
            (&args.s, args.s.iter().map(|&s| p.pdf(s)).collect::<Result<_>>()?)
        }
        PredictKind::Entropy => {
            let regime = match args.regime {
                RegimeArg::Perturbative => EntropyRegime::Perturbative,
                RegimeArg::Recursive => EntropyRegime::Recursive,
            };
            let n2 = args.n2.unwrap_or(args.n1);
            let v = args
                .lambda
                .iter()
                .map(|&l| predicted_entropy(args.alpha, l, regime, args.n1, n2, law))
                .collect::<Result<_>>()?;
            (&args.lambda, v)
        }
        PredictKind::MarcenkoPastur => {
            (&args.x, args.x.iter().map(|&x| marcenko_pastur_pdf(args.q, x)).collect::<Result<_>>()?)
        }
        _ => unreachable!("spacing laws handled above"),
    };
    if xs.is_empty() {
        return Err(Error::Config("no evaluation points given".into()));
    }
    if let [v] = values[..] {
        writeln!(out, "{v}")?;
    } else {
        for (x, v) in xs.iter().zip(&values) {
            writeln!(out, "{x},{v}")?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let record = match &cli.command {
        Command::Spacing(c) => run_experiment(&tops_config(c, ExperimentKind::Spacing)?)?,
        Command::Entangle(c) => run_experiment(&tops_config(c, ExperimentKind::Entanglement)?)?,
        Command::SchmidtDist(c) => run_experiment(&tops_config(c, ExperimentKind::SchmidtDistribution)?)?,
        Command::OmegaDist(c) => run_experiment(&ensemble_config(c, ExperimentKind::OmegaDistribution)?)?,
        Command::RmtCheck(c) => run_experiment(&ensemble_config(c, ExperimentKind::RmtValidation)?)?,
        Command::Lambda(c) => return run_lambda(c, &mut out),
        Command::Predict(p) => return predict(p, &mut out),
    };
    report(&record, &mut out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
