use clap::{Args, Parser, Subcommand};
use hyperineq::cli::{self, Command, RunConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hyperineq", version, about = "Orlicz hypercontractivity, Hardy-type criteria and isoperimetry")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random stream (default: $HYPERINEQ_SEED, then 20240).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write tabulated data here when the command produces any.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Sample points for tables and quadrature rules.
    #[arg(long, global = true)]
    points: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct MeasureArgs {
    /// nu_alpha:A, m_alpha:A, abs_power:P[:C], gaussian, laplace, csv:PATH
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize a Boltzmann measure and summarize it.
    Measure(MeasureArgs),
    /// Certify a Young pair and optionally evaluate norms of a test function.
    Orlicz {
        #[command(flatten)]
        m: MeasureArgs,
        /// power:P[:C], tau_q:P:Q:GROWTH, example:A, exp_square
        #[arg(long)]
        pair: Option<String>,
        #[arg(long)]
        normalize: bool,
        /// one, x, square
        #[arg(long)]
        test: Option<String>,
    },
    /// Evaluate a Hardy-type criterion constant.
    Criteria {
        #[command(flatten)]
        m: MeasureArgs,
        /// poincare, beckner, beckner_t, phi_sobolev, rosen, asymptotic
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// number or auto
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        t_beta: Option<f64>,
        #[arg(long)]
        growth: Option<String>,
    },
    /// Integrate the exponent schedule of an F-Sobolev inequality.
    Schedule {
        /// number or path of a criteria report
        #[arg(long)]
        c_f: Option<String>,
        #[arg(long)]
        c_tilde: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        /// log or f_alpha:A
        #[arg(long)]
        growth: Option<String>,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Monte Carlo experiments for the Langevin semigroup.
    Simulate {
        /// weight, pt, threshold, hyperbound
        #[arg(long)]
        what: Option<String>,
        /// u_alpha or quadratic
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        #[arg(long)]
        n_traj: Option<usize>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Tail bounds from a convex rate.
    Concentration {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        coeff: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
    },
    /// Dimension-free isoperimetric constant for nu_alpha.
    Isoperimetry {
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Exact checks on finite weighted graphs.
    Oracle {
        /// capacity, capacity_mu, poincare, hardy, fsobcap, tensor, rothaus, tighten
        #[arg(long)]
        task: Option<String>,
        /// TOML/JSON file or random:N
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<usize>>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        corpus: Option<usize>,
        #[arg(long)]
        growth: Option<String>,
    },
    /// Run the acceptance battery.
    Verify {
        /// quick or full
        #[arg(long)]
        level: Option<String>,
        /// criterion:factor
        #[arg(long)]
        inject: Option<String>,
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

fn flags(cli: &Cli) -> RunConfig {
    let mut c = RunConfig { seed: cli.seed, ..Default::default() };
    c.output.points = cli.points;
    c.output.json = cli.out.as_ref().map(|p| p.display().to_string());
    c.output.csv = cli.csv.as_ref().map(|p| p.display().to_string());
    let measure = |c: &mut RunConfig, m: &MeasureArgs| {
        c.measure.spec = m.measure.clone();
        c.measure.tol = m.tol;
    };
    match &cli.cmd {
        Cmd::Measure(m) => {
            c.command = Some(Command::Measure);
            measure(&mut c, m);
        }
        Cmd::Orlicz { m, pair, normalize, test } => {
            c.command = Some(Command::Orlicz);
            measure(&mut c, m);
            c.family.pair = pair.clone();
            c.family.normalize = normalize.then_some(true);
            c.family.test = test.clone();
        }
        Cmd::Criteria { m, family, p, alpha, beta, t_beta, growth } => {
            c.command = Some(Command::Criteria);
            measure(&mut c, m);
            c.family.name = family.clone();
            c.family.p = *p;
            c.family.alpha = *alpha;
            c.family.beta = beta.clone();
            c.family.t_beta = *t_beta;
            c.family.growth = growth.clone();
        }
        Cmd::Schedule { c_f, c_tilde, p, growth, horizon } => {
            c.command = Some(Command::Schedule);
            c.schedule.c_f = c_f.clone();
            c.schedule.c_tilde = *c_tilde;
            c.schedule.horizon = *horizon;
            c.family.p = *p;
            c.family.growth = growth.clone();
        }
        Cmd::Simulate { what, potential, alpha, dim, x, t, n_traj, h } => {
            c.command = Some(Command::Simulate);
            c.simulate.what = what.clone();
            c.simulate.potential = potential.clone();
            c.family.alpha = *alpha;
            c.simulate.dim = *dim;
            c.simulate.x = x.clone();
            c.simulate.t = t.clone();
            c.simulate.n_traj = *n_traj;
            c.simulate.h = *h;
        }
        Cmd::Concentration { alpha, coeff, t } => {
            c.command = Some(Command::Concentration);
            c.family.alpha = *alpha;
            c.concentration.coeff = *coeff;
            c.concentration.t = t.clone();
        }
        Cmd::Isoperimetry { alpha } => {
            c.command = Some(Command::Isoperimetry);
            c.family.alpha = *alpha;
        }
        Cmd::Oracle { task, space, a, omega, rho, corpus, growth } => {
            c.command = Some(Command::Oracle);
            c.oracle.task = task.clone();
            c.oracle.space = space.clone();
            c.oracle.a = a.clone();
            c.oracle.omega = omega.clone();
            c.oracle.rho = *rho;
            c.oracle.corpus = *corpus;
            c.family.growth = growth.clone();
        }
        Cmd::Verify { level, inject, criteria } => {
            c.command = Some(Command::Verify);
            c.verify.level = level.clone();
            c.verify.inject = inject.clone();
            c.verify.criteria = criteria.clone();
        }
    }
    c
}

fn write(path: &str, text: &str) -> Result<(), hyperineq::Error> {
    std::fs::write(path, text).map_err(|e| hyperineq::Error::Io(format!("{path}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = (|| {
        let base = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let cfg = base.merge(&flags(&cli));
        let out = cli::run(cfg)?;
        let json = out.report.to_json();
        match &out.report.config.output.json {
            Some(p) => write(p, &json)?,
            None => {
                let _ = writeln!(std::io::stdout().lock(), "{json}");
            }
        }
        if let (Some(p), Some(text)) = (&out.report.config.output.csv, &out.csv) {
            write(p, text)?;
        }
        Ok(out.exit_code)
    })();
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
