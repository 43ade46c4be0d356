//! `skypol`: render sky polarization images, estimate attitude from them, and
//! run experiment sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skypol::geometry::Attitude;
use skypol::harness::{self, ExperimentConfig, Mode};
use skypol::imager::{render_sky_map, CameraModel, ImageSet, Imager};
use skypol::skymodel::{SkyConfig, SkyModel, SkyParams};
use skypol::sso::estimate_attitude;
use skypol::Error;

#[derive(Parser)]
#[command(name = "skypol", version, about = "Skylight polarization rendering and attitude estimation")]
struct Cli {
    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Divisor of the 2048 x 2448 reference raster.
    #[arg(long, global = true)]
    scale: Option<usize>,
    /// clean, noise, model-error or custom.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Only print warnings and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render AOP, DOP and LI images for one attitude.
    Render(RenderArgs),
    /// Estimate the attitude from a rendered or captured image set.
    Estimate(EstimateArgs),
    /// Run an experiment sweep and write trials.csv and metrics.csv.
    Sweep(SweepArgs),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct SkyArgs {
    /// Solar zenith angle, degrees.
    #[arg(long, default_value_t = 45.0, allow_negative_numbers = true)]
    theta_s: f64,
    /// Solar azimuth from North toward East, degrees.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi_s: f64,
    #[arg(long, default_value_t = 4.0)]
    turbidity: f64,
    #[arg(long, default_value_t = 0.1)]
    albedo: f64,
    /// nanometres
    #[arg(long, default_value_t = 450.0)]
    wavelength: f64,
}

impl SkyArgs {
    fn params(&self) -> skypol::Result<SkyParams<f64>> {
        SkyParams::new(self.theta_s, self.phi_s, self.turbidity, self.albedo, self.wavelength)
    }
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    sky: SkyArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    yaw: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pitch: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    roll: f64,
    /// File name stem inside the output directory.
    #[arg(long, default_value = "render")]
    stem: String,
    /// Also write an all-sky map of this many pixels across as `<stem>-sky.*`.
    #[arg(long)]
    sky_map: Option<usize>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    sky: SkyArgs,
    /// Path stem of `<stem>.aop.pfm`, `<stem>.dop.pfm`, `<stem>.li.pfm`, `<stem>.mask.pgm`.
    #[arg(long)]
    stem: PathBuf,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
}

fn load_config(cli: &Cli) -> skypol::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(s) = cli.scale {
        cfg.scale = s;
    }
    if let Some(m) = cli.mode {
        cfg.mode = m;
    }
    Ok(cfg)
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn render(cli: &Cli, args: &RenderArgs) -> skypol::Result<()> {
    let cfg = load_config(cli)?;
    let camera = cfg.camera()?;
    let sky = SkyModel::new(args.sky.params()?, &SkyConfig::default())?;
    let imager = Imager::new(camera, sky.clone());
    let img = imager.render(&Attitude::new(args.yaw, args.pitch, args.roll))?;
    std::fs::create_dir_all(&cli.out).map_err(|e| Error::Io {
        path: cli.out.clone(),
        source: e,
    })?;
    print_paths(&img.save(&cli.out.join(&args.stem))?);
    if let Some(size) = args.sky_map {
        let map = render_sky_map(&sky, size)?;
        print_paths(&map.save(&cli.out.join(format!("{}-sky", args.stem)))?);
    }
    Ok(())
}

fn estimate(cli: &Cli, args: &EstimateArgs) -> skypol::Result<()> {
    let cfg = load_config(cli)?;
    let given = ImageSet::<f64>::load(&args.stem)?;
    let camera = CameraModel::new(cfg.fov, given.rows(), given.cols())?;
    let mut sso = cfg.sso(cfg.seed);
    if let Some(n) = args.population {
        sso.population = n;
    }
    if let Some(k) = args.iterations {
        sso.iterations = k;
    }
    let est = estimate_attitude(&given, &args.sky.params()?, &sso, &camera, &SkyConfig::default())?;
    for c in &est.candidates {
        log::info!(
            "quadrant {}: J {:.6} attitude ({:.4}, {:.4}, {:.4}) Com {:?}",
            c.quadrant,
            c.fitness,
            c.attitude.yaw,
            c.attitude.pitch,
            c.attitude.roll,
            c.com
        );
    }
    let a = est.attitude;
    println!("yaw={:.6} pitch={:.6} roll={:.6} fitness={:.6}", a.yaw, a.pitch, a.roll, est.fitness);
    Ok(())
}

fn sweep(cli: &Cli, args: &SweepArgs) -> skypol::Result<()> {
    let mut cfg = load_config(cli)?;
    if let Some(t) = args.trials {
        cfg.trials_per_bin = t;
    }
    if let Some(n) = args.population {
        cfg.population = n;
    }
    if let Some(k) = args.iterations {
        cfg.iterations = k;
    }
    cfg.validate()?;
    log::info!("running {} trials in {:?} mode", cfg.total_trials(), cfg.mode);
    let results = harness::run_sweep(&cfg)?;
    let metrics = harness::compute_metrics(&results);
    print_paths(&harness::export(&cli.out, &results, &metrics)?);
    Ok(())
}

fn selftest(cli: &Cli) -> skypol::Result<bool> {
    let cfg = load_config(cli)?;
    let mut ok = true;
    for c in harness::selftest::run_all(cfg.seed) {
        match c.outcome {
            Ok(()) => println!("PASS {}", c.name),
            Err(msg) => {
                ok = false;
                println!("FAIL {}: {msg}", c.name);
            }
        }
    }
    Ok(ok)
}

fn exit_code(e: &Error) -> ExitCode {
    if e.is_validation() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let outcome = match &cli.command {
        Command::Render(a) => render(&cli, a).map(|_| true),
        Command::Estimate(a) => estimate(&cli, a).map(|_| true),
        Command::Sweep(a) => sweep(&cli, a).map(|_| true),
        Command::Selftest => selftest(&cli),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

