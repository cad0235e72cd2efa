//! The `qwproj` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad configuration, 3 the
//! initial state projects to zero, 4 a verification or reconstruction check
//! failed.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{debug, info};

use crate::catalog::{default_coin, scenario, ScenarioParams};
use crate::descriptor::WalkConfig;
use crate::error::Error;
use crate::hilbert::WalkState;
use crate::projection::{self, ProjectionMap, COMMUTATION_TOL};
use crate::reconstruction::{
    cone_sigma_bounds, induced_family, reconstruct, PhaseConvention, ReconstructionPlan,
    ReconstructionReport,
};
use crate::spaces::{lattice_quotient, PositionKey};
use crate::walk::WalkSpec;

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NULL: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qwproj",
    version,
    about = "Coined quantum walks and their projections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a walk and write the final state and distribution.
    Run(RunArgs),
    /// Check that projection and evolution commute.
    Verify(VerifyArgs),
    /// Recover a square-lattice walk from its phased projections.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Catalog scenario name.
    #[arg(long)]
    pub scenario: Option<String>,
    /// JSON file describing space, coin and projection; replaces --scenario.
    #[arg(long, conflicts_with = "scenario")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub l: Option<i64>,
    #[arg(long = "n-circle")]
    pub n_circle: Option<i64>,
    /// Radians; accepts forms like `pi/3` or `-2pi/5`.
    #[arg(long, value_parser = parse_phi, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Initial state dump, inline JSON or a file path.
    #[arg(long)]
    pub init: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    /// Evolve the induced walk from the projected initial state instead.
    #[arg(long)]
    pub projected: bool,
    #[arg(long = "out-state")]
    pub out_state: Option<PathBuf>,
    #[arg(long = "out-dist")]
    pub out_dist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long, default_value_t = COMMUTATION_TOL, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long = "out-report")]
    pub out_report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Grid size; chosen from the reachable region when absent.
    #[arg(long = "phi-samples")]
    pub phi_samples: Option<usize>,
    #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long = "out-state")]
    pub out_state: Option<PathBuf>,
    #[arg(long = "out-report")]
    pub out_report: Option<PathBuf>,
}

/// Parses `1.5`, `pi`, `-pi/4`, `2pi/3`, `2*pi/3`.
pub fn parse_phi(text: &str) -> Result<f64, String> {
    let bad = || format!("cannot read `{text}` as an angle");
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (t.as_str(), None),
    };
    let value = match num.find("pi") {
        Some(i) if i + 2 == num.len() => {
            let coeff = num[..i].trim_end_matches('*');
            let coeff = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            coeff * std::f64::consts::PI
        }
        Some(_) => return Err(bad()),
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = match den {
        Some(0.0) => return Err(bad()),
        Some(d) => value / d,
        None => value,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

fn parse_tol(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got `{text}`")),
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::NullProjection { .. }) => EXIT_NULL,
            Failure::Lib(_) | Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
            Failure::Check(_) => EXIT_CHECK,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Config(m) | Failure::Check(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Resolved walk, projection and initial state.
struct Setup {
    walk: WalkSpec,
    pmap: Option<ProjectionMap>,
    phi: f64,
    init: WalkState,
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn load_init(arg: &str, walk: &WalkSpec) -> std::result::Result<WalkState, Failure> {
    let json = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    Ok(WalkState::from_json(walk.space().clone(), &json)?)
}

fn setup(args: &WalkArgs) -> std::result::Result<Setup, Failure> {
    let (walk, pmap, phi, default_state) = if let Some(path) = &args.config {
        if args.k.is_some() || args.l.is_some() || args.n_circle.is_some() {
            return Err(Failure::Config(
                "--k, --l and --n-circle do not apply with --config".into(),
            ));
        }
        let cfg = WalkConfig::from_json(&read_text(path)?)?;
        let walk = cfg.walk()?;
        let pmap = cfg.projection(&walk)?;
        let origin = PositionKey::new(&vec![0; walk.space().dimension()]);
        let state = WalkState::new(
            walk.space().clone(),
            [(origin, default_coin(walk.space().coin_dim()))],
        )?;
        let phi = args.phi.or(cfg.phi).unwrap_or(0.0);
        (walk, pmap, phi, state)
    } else {
        let name = args
            .scenario
            .as_deref()
            .ok_or_else(|| Failure::Config("one of --scenario or --config is required".into()))?;
        let params = ScenarioParams {
            k: args.k,
            l: args.l,
            n_circle: args.n_circle,
            phi: args.phi.unwrap_or(0.0),
        };
        let desc = scenario(name, &params)?;
        let state = desc.default_state().clone();
        (desc.walk, Some(desc.pmap), desc.phi, state)
    };
    let init = match &args.init {
        Some(a) => load_init(a, &walk)?,
        None => default_state,
    };
    info!(
        "walk on `{}`, projection {:?}, phi = {phi}",
        walk.space().name(),
        pmap.as_ref().map(|p| p.name())
    );
    Ok(Setup {
        walk,
        pmap,
        phi,
        init,
    })
}

fn write(path: &Path, content: &str) -> Outcome {
    fs::write(path, content)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_run(args: &RunArgs) -> Outcome {
    let s = setup(&args.walk)?;
    let final_state = if args.projected {
        let pmap = s
            .pmap
            .as_ref()
            .ok_or_else(|| Failure::Config("--projected needs a projection".into()))?;
        let start = projection::project_state(pmap, s.phi, &s.init)?;
        let window = projection::default_window(&s.walk, s.init.positions(), args.steps)?;
        let induced = projection::induced_walk(&s.walk, pmap, s.phi, &window)?;
        induced.evolve(&start, args.steps)?
    } else {
        if let Some(pmap) = &s.pmap {
            // surface a vanishing projection even when only the source runs
            projection::project_state(pmap, s.phi, &s.init)?;
        }
        s.walk.evolve(&s.init, args.steps)?
    };
    debug!(
        "final support has {} sites, norm {}",
        final_state.len(),
        final_state.norm()
    );
    if let Some(p) = &args.out_state {
        write(p, &final_state.to_json())?;
    }
    if let Some(p) = &args.out_dist {
        write(p, &final_state.distribution_csv())?;
    }
    if args.out_state.is_none() && args.out_dist.is_none() {
        print!("{}", final_state.distribution_csv());
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let s = setup(&args.walk)?;
    let pmap = s
        .pmap
        .ok_or_else(|| Failure::Config("verification needs a projection".into()))?;
    let report =
        projection::verify_commutation(&s.walk, &pmap, s.phi, &s.init, args.steps, args.tol)?;
    info!("max residual {:e}", report.max_residual);
    match &args.out_report {
        Some(p) => write(p, &report.to_json())?,
        None => println!("{}", report.to_json()),
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "commutation residual {:e} exceeds {:e}",
            report.max_residual, args.tol
        )))
    }
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Outcome {
    let w = &args.walk;
    let (walk, pmap, init) = if w.k.is_some() || w.l.is_some() {
        if w.config.is_some() || w.n_circle.is_some() {
            return Err(Failure::Config(
                "--k/--l select a square-lattice reconstruction".into(),
            ));
        }
        let pmap = lattice_quotient(w.k.unwrap_or(1), w.l.unwrap_or(0))?;
        let walk = crate::catalog::grover2d();
        let init = match &w.init {
            Some(a) => load_init(a, &walk)?,
            None => WalkState::new(walk.space().clone(), [((0, 0).into(), default_coin(4))])?,
        };
        (walk, pmap, init)
    } else {
        let s = setup(w)?;
        let pmap = s
            .pmap
            .ok_or_else(|| Failure::Config("reconstruction needs a projection".into()))?;
        (s.walk, pmap, s.init)
    };
    if !pmap.has_sigma() {
        return Err(Error::MissingSigma(pmap.name()).into());
    }
    let bounds = cone_sigma_bounds(&walk, &pmap, &init, args.steps)?;
    let plan = match args.phi_samples {
        Some(m) => ReconstructionPlan::with_samples(bounds, m)?,
        None => ReconstructionPlan::auto(bounds),
    };
    info!("phase grid of {} samples", plan.grid.samples());
    let family = induced_family(
        &walk,
        &pmap,
        &init,
        args.steps,
        &plan.grid,
        PhaseConvention::StepCarried,
    )?;
    let recovered = reconstruct(&family, &pmap, &plan.bounds)?;
    let reference = walk.evolve(&init, args.steps)?;
    let report = ReconstructionReport::new(&plan, &recovered, Some(&reference))?;
    let err = report.max_error.unwrap_or(0.0);
    if let Some(p) = &args.out_state {
        write(p, &recovered.to_json())?;
    }
    match &args.out_report {
        Some(p) => write(p, &report.to_json())?,
        None => println!(
            "{{\"samples\": {}, \"max_error\": {err:e}}}",
            report.samples
        ),
    }
    if err < args.tol {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "reconstruction error {err:e} exceeds {:e}",
            args.tol
        )))
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("QWPROJ_LOG", "off");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

/// Runs the command line with `args` (program name first) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("qwproj: {}", f.message());
            f.code()
        }
    }
}
