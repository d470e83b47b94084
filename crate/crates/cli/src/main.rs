//! `localent` binary: flag parsing, config-file merging and exit-code
//! mapping around the command implementations in the library crate.

use clap::{Args, Parser, Subcommand};

use localent::config::{
    parse_center, parse_float_list, parse_sizes, resolve, resolve_required, ConfigFile,
};
use localent::error::CliError;
use localent::physics::grid_budget;
use localent::runner::{self, Mode};
use state_params::SystemArgs;

mod state_params {
    //! Shared system flags (present on every command).

    use clap::Args;
    use localent_core::state::OscillatorSystem;

    use localent::config::{resolve, ConfigFile};
    use localent::error::CliError;

    #[derive(Args, Debug, Clone)]
    pub struct SystemArgs {
        /// Oscillator mass (default 1)
        #[arg(long)]
        pub mass: Option<f64>,
        /// Oscillator angular frequency (default 1)
        #[arg(long)]
        pub omega: Option<f64>,
        /// Dimensionless coupling 2K/(m w^2)
        #[arg(long)]
        pub alpha: Option<f64>,
    }

    impl SystemArgs {
        pub fn build(&self, cfg: &ConfigFile, default_alpha: f64) -> Result<OscillatorSystem, CliError> {
            let mass = resolve(&self.mass, cfg, "mass", 1.0)?;
            let omega = resolve(&self.omega, cfg, "omega", 1.0)?;
            let alpha = resolve(&self.alpha, cfg, "alpha", default_alpha)?;
            Ok(OscillatorSystem::new(mass, omega, alpha)?)
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "localent",
    about = "Local entanglement measures of two-mode continuous-variable states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Optional `key = value` config file; flags override its entries
    #[arg(long)]
    config: Option<String>,
    /// Concurrency limit for sweep points (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

impl CommonArgs {
    fn load(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(path) => ConfigFile::load(path),
            None => Ok(ConfigFile::default()),
        }
    }

    fn jobs(&self, cfg: &ConfigFile) -> Result<usize, CliError> {
        resolve(&self.jobs, cfg, "jobs", 0)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Region-size sweep of filtered entropies (CSV)
    Fig1 {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        system: SystemArgs,
        /// Region full widths, `start:stop:logN` or `start:stop:linN`
        #[arg(long)]
        sizes: Option<String>,
        /// Region center `x,y`
        #[arg(long)]
        center: Option<String>,
        /// Grid points per axis for the brute-force filter
        #[arg(long)]
        grid_n: Option<usize>,
        /// Output CSV path
        #[arg(long)]
        out: Option<String>,
    },
    /// Temperature sweep of local densities vs global negativity (CSV)
    Fig2 {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        system: SystemArgs,
        /// Comma-separated coupling list
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Output CSV path
        #[arg(long)]
        out: Option<String>,
    },
    /// Local entanglement densities at one point
    Density {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        system: SystemArgs,
        /// State family: ground | thermal
        #[arg(long)]
        mode: Option<Mode>,
        /// Temperature (thermal mode)
        #[arg(long)]
        temp: Option<f64>,
        /// Point `x,y`
        #[arg(long)]
        center: Option<String>,
    },
    /// Two-qubit reduction of a filter region, with measures
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        temp: Option<f64>,
        #[arg(long)]
        center: Option<String>,
        /// Region half-width on side A
        #[arg(long)]
        a: Option<f64>,
        /// Region half-width on side B (default: a)
        #[arg(long)]
        b: Option<f64>,
        /// Gauss-Legendre order per axis
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Run the validation sweep (acceptance criteria)
    SweepValidate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulate the SWAP extraction protocol on a square region
    Extract {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        center: Option<String>,
        /// Region half-width
        #[arg(long)]
        a: Option<f64>,
        /// Grid points per axis for the validity spectrum
        #[arg(long)]
        grid_n: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fig1 { common, system, sizes, center, grid_n, out } => {
            let cfg = common.load()?;
            let sys = system.build(&cfg, 10.0)?;
            let sizes_spec = resolve(&sizes, &cfg, "sizes", "0.05:8:log24".to_string())?;
            let sizes = parse_sizes(&sizes_spec)?;
            let center = parse_center(&resolve(&center, &cfg, "center", "0,0".to_string())?)?;
            let grid_n = resolve(&grid_n, &cfg, "grid_n", 256)?;
            let out_path: String = resolve_required(&out, &cfg, "out")?;
            let doc =
                runner::fig1(&sys, &sizes, center, grid_n, common.jobs(&cfg)?, grid_budget()?)?;
            std::fs::write(&out_path, doc)?;
        }
        Command::Fig2 { common, system, alphas, tmin, tmax, dt, out } => {
            let cfg = common.load()?;
            let mass = resolve(&system.mass, &cfg, "mass", 1.0)?;
            let omega = resolve(&system.omega, &cfg, "omega", 1.0)?;
            let alphas =
                parse_float_list(&resolve(&alphas, &cfg, "alphas", "0.5,2".to_string())?)?;
            let tmin = resolve(&tmin, &cfg, "tmin", 0.01)?;
            let tmax = resolve(&tmax, &cfg, "tmax", 2.0)?;
            let dt = resolve(&dt, &cfg, "dt", 0.01)?;
            let out_path: String = resolve_required(&out, &cfg, "out")?;
            let doc = runner::fig2(mass, omega, &alphas, tmin, tmax, dt, common.jobs(&cfg)?)?;
            std::fs::write(&out_path, doc)?;
        }
        Command::Density { common, system, mode, temp, center } => {
            let cfg = common.load()?;
            let sys = system.build(&cfg, 2.0)?;
            let mode = resolve(&mode, &cfg, "mode", Mode::Ground)?;
            let temp = resolve(&temp, &cfg, "temp", 0.0)?;
            let center = parse_center(&resolve(&center, &cfg, "center", "0,0".to_string())?)?;
            print!("{}", runner::density(&sys, mode, temp, center)?);
        }
        Command::Reduce { common, system, mode, temp, center, a, b, quad_order } => {
            let cfg = common.load()?;
            let sys = system.build(&cfg, 2.0)?;
            let mode = resolve(&mode, &cfg, "mode", Mode::Ground)?;
            let temp = resolve(&temp, &cfg, "temp", 0.0)?;
            let center = parse_center(&resolve(&center, &cfg, "center", "0,0".to_string())?)?;
            let a = resolve(&a, &cfg, "a", 0.1)?;
            let b = resolve(&b, &cfg, "b", a)?;
            let quad_order = resolve(&quad_order, &cfg, "quad_order", 16)?;
            print!("{}", runner::reduce(&sys, mode, temp, center, (a, b), quad_order)?);
        }
        Command::SweepValidate { common } => {
            let cfg = common.load()?;
            let jobs = common.jobs(&cfg)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::numeric(format!("cannot build thread pool: {e}")))?;
            let suite = pool.install(localent::acceptance::run_all);
            print!("{}", suite.render());
            if !suite.all_passed() {
                return Err(CliError::numeric("validation sweep failed".into()));
            }
        }
        Command::Extract { common, system, center, a, grid_n } => {
            let cfg = common.load()?;
            let sys = system.build(&cfg, 10.0)?;
            let center = parse_center(&resolve(&center, &cfg, "center", "0,0".to_string())?)?;
            let a = resolve(&a, &cfg, "a", 0.05)?;
            let grid_n = resolve(&grid_n, &cfg, "grid_n", 64)?;
            print!("{}", runner::extract(&sys, center, a, grid_n, grid_budget()?)?);
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("localent: {e}");
        std::process::exit(e.code);
    }
}
