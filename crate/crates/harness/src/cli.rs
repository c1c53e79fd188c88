//! Command line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thermoflux_core::channel::VelocityProfile;
use thermoflux_core::dmh::{solve_bvp, BvpCoefficients, DmhOptions, Lumping, Mesh};
use thermoflux_core::gummel::{run_gummel, GummelRun};
use thermoflux_core::models::{equilibrium_check, ModelKind};
use thermoflux_core::Stabilization;

use crate::config::{load_config, parse_lumping, parse_stabilization, ChannelConfig, ConfigError};
use crate::convergence::{run_study, Manufactured, StudyOptions, DEFAULT_LEVELS, NORMS};
use crate::output::{convergence_table, iv_table, profile_table, trace_table, write_csv, OutputError, Table};
use crate::sweep::{run_sweep, SweepSpec, SweepVariable};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "THERMOFLUX_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "thermoflux", version, about = "Thermo-fluid ion transport in nanochannels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Configuration file, or `builtin:NAME` for a shipped fixture.
    #[arg(long)]
    pub config: String,
    /// Transport model: vpnp, vet or vthd.
    #[arg(long)]
    pub model: Option<ModelKind>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of elements.
    #[arg(long)]
    pub nel: Option<usize>,
    /// Stabilization: none, up or sg.
    #[arg(long)]
    pub stab: Option<String>,
    /// Flux mass lumping: on, off or auto.
    #[arg(long)]
    pub lump: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one operating point and export profiles.
    Solve(RunArgs),
    /// Sweep a parameter and write an IV table.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// v_app, t_left, t_right, t_both or v_e.
        #[arg(long)]
        variable: SweepVariable,
        /// Comma separated values (SI units).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["from", "to", "points"])]
        values: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["to", "points"])]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Cold-start the points on worker threads instead of continuing.
        #[arg(long)]
        parallel: bool,
    },
    /// Mesh-refinement study on the manufactured problem.
    Convergence {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        /// Gauss points per element in the error integrals.
        #[arg(long, default_value_t = 5)]
        quadrature: usize,
        #[arg(long, default_value = "none")]
        stab: String,
        #[arg(long, default_value = "off")]
        lump: String,
    },
    /// Solve one constant-coefficient advection-diffusion-reaction problem.
    Bvp {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 10)]
        nel: usize,
        #[arg(long, default_value_t = 1.0)]
        diffusion: f64,
        #[arg(long, default_value_t = 0.0)]
        advection: f64,
        #[arg(long, default_value_t = 0.0)]
        reaction: f64,
        #[arg(long, default_value_t = 1.0)]
        source: f64,
        #[arg(long, default_value_t = 0.0)]
        left: f64,
        #[arg(long, default_value_t = 0.0)]
        right: f64,
        #[arg(long, default_value = "sg")]
        stab: String,
        #[arg(long, default_value = "auto")]
        lump: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equilibrium consistency report at zero bias and uniform temperature.
    Check(RunArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error(transparent)]
    Output(#[from] OutputError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Output(_) => 4,
        }
    }
}

/// `--out`, then the environment override, then the working directory.
pub fn output_dir(flag: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&dir).map_err(|e| {
        CliError::Output(OutputError::Io {
            path: dir.display().to_string(),
            source: e,
        })
    })?;
    Ok(dir)
}

fn stab(s: &str) -> Result<Stabilization, CliError> {
    parse_stabilization(s).ok_or_else(|| CliError::Usage(format!("unknown stabilization {s:?}")))
}

fn lump(s: &str) -> Result<Lumping, CliError> {
    parse_lumping(s).ok_or_else(|| CliError::Usage(format!("unknown lumping {s:?}")))
}

/// Loads the configuration and applies command line overrides.
pub fn resolve_run(args: &RunArgs) -> Result<ChannelConfig, CliError> {
    let mut c = load_config(&args.config)?;
    if let Some(m) = args.model {
        c.model = m;
    }
    if let Some(n) = args.nel {
        if n < 2 {
            return Err(CliError::Usage("--nel must be at least 2".into()));
        }
        c.solver.n_el = n;
    }
    if let Some(s) = &args.stab {
        c.solver.stabilization = stab(s)?;
    }
    if let Some(l) = &args.lump {
        c.solver.lumping = lump(l)?;
    }
    Ok(c)
}

fn write(table: &Table, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_csv(table, &path)?;
    Ok(path)
}

fn solve_point(c: &ChannelConfig) -> Result<GummelRun, CliError> {
    run_gummel(&c.channel, c.model, c.solver, None).map_err(|e| CliError::Solver(e.to_string()))
}

/// Runs one command; returns the process exit code on success paths.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Solve(args) => {
            let c = resolve_run(args)?;
            let dir = output_dir(args.out.as_deref())?;
            let r = solve_point(&c)?;
            let p = write(&profile_table(&r.state), &dir, "profiles.csv")?;
            write(&trace_table(&r.trace), &dir, "trace.csv")?;
            println!(
                "{} {}: I = {:.6e} A, {} iterations, converged = {}, max Peclet = {:.4}",
                c.name,
                c.model.name(),
                r.total_current(&c.channel),
                r.trace.len(),
                r.converged,
                r.trace.last().map(|t| t.max_peclet()).unwrap_or(0.0)
            );
            println!("wrote {}", p.display());
            if r.converged {
                Ok(0)
            } else {
                Err(CliError::Solver(format!(
                    "no convergence in {} iterations",
                    c.solver.gummel.max_iters
                )))
            }
        }
        Command::Sweep {
            run: args,
            variable,
            values,
            from,
            to,
            points,
            parallel,
        } => {
            let c = resolve_run(args)?;
            let spec = match (values, from, to, points) {
                (Some(v), _, _, _) => SweepSpec::new(*variable, v.clone()),
                (None, Some(a), Some(b), Some(n)) => SweepSpec::linspace(*variable, *a, *b, *n),
                _ => Err("give --values or --from/--to/--points".into()),
            }
            .map_err(CliError::Usage)?;
            let dir = output_dir(args.out.as_deref())?;
            let res = run_sweep(&c, &spec, *parallel);
            let p = write(&iv_table(&res.rows), &dir, "iv.csv")?;
            for r in &res.rows {
                if let Some(e) = &r.error {
                    eprintln!("{} = {}: {e}", spec.variable, r.sweep_value);
                }
            }
            println!("wrote {} ({} points)", p.display(), res.rows.len());
            let failed = res.rows.iter().filter(|r| !r.converged).count();
            if failed == 0 {
                Ok(0)
            } else {
                Err(CliError::Solver(format!("{failed} sweep point(s) did not converge")))
            }
        }
        Command::Convergence {
            out,
            levels,
            quadrature,
            stab: s,
            lump: l,
        } => {
            let levels = levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec());
            if levels.iter().any(|&n| n < 2) {
                return Err(CliError::Usage("levels must be at least 2".into()));
            }
            let opts = StudyOptions {
                stabilization: stab(s)?,
                lumping: lump(l)?,
                quadrature: *quadrature,
            };
            let study =
                run_study(&Manufactured::default(), &levels, opts).map_err(|e| CliError::Solver(e.to_string()))?;
            let dir = output_dir(out.as_deref())?;
            let p = write(
                &convergence_table(&study.levels, &study.reports),
                &dir,
                "convergence.csv",
            )?;
            let mut orders = Table::new(&["from_n_el", "to_n_el"]);
            orders.header.extend(NORMS.iter().map(|(n, _)| n.to_string()));
            let cols: Vec<Vec<f64>> = NORMS.iter().map(|(_, f)| study.orders(*f)).collect();
            for k in 0..levels.len().saturating_sub(1) {
                let mut row = vec![levels[k].to_string(), levels[k + 1].to_string()];
                row.extend(cols.iter().map(|c| crate::output::fmt_f64(c[k])));
                orders.rows.push(row);
            }
            write(&orders, &dir, "orders.csv")?;
            for (name, _) in NORMS {
                print!("{name:>16}");
            }
            println!();
            for c in 0..cols.first().map(|c| c.len()).unwrap_or(0) {
                for col in &cols {
                    print!("{:>16.4}", col[c]);
                }
                println!();
            }
            println!("wrote {}", p.display());
            Ok(0)
        }
        Command::Bvp {
            length,
            nel,
            diffusion,
            advection,
            reaction,
            source,
            left,
            right,
            stab: s,
            lump: l,
            out,
        } => {
            let bad = |e: thermoflux_core::Error| CliError::Usage(e.to_string());
            let mesh = Mesh::uniform(0.0, *length, *nel).map_err(bad)?;
            let coeffs = BvpCoefficients::from_fns(
                &mesh,
                |_| *diffusion,
                |_| *advection,
                |_| *reaction,
                |_| *source,
                *left,
                *right,
            )
            .map_err(bad)?;
            let sol = solve_bvp(&mesh, &coeffs, DmhOptions::new(stab(s)?, lump(l)?))
                .map_err(|e| CliError::Solver(e.to_string()))?;
            let dir = output_dir(out.as_deref())?;
            let mut t = Table::new(&["x", "lambda", "flux"]);
            let flux = sol.nodal_flux();
            for (k, &x) in mesh.nodes().iter().enumerate() {
                t.push_floats(&[x, sol.lambda[k], flux[k]]);
            }
            let p = write(&t, &dir, "bvp.csv")?;
            println!("wrote {}", p.display());
            Ok(0)
        }
        Command::Check(args) => {
            let base = resolve_run(args)?;
            let models = match args.model {
                Some(m) => vec![m],
                None => vec![ModelKind::Et, ModelKind::Thd],
            };
            let mut ok = true;
            for m in models {
                let mut c = base.clone();
                c.model = m;
                let ch = &mut c.channel;
                ch.bath.phi_left = ch.bath.phi_right;
                ch.bath.t_left = ch.medium.temperature;
                ch.bath.t_right = ch.medium.temperature;
                ch.velocity = VelocityProfile::Constant(0.0);
                let r = solve_point(&c)?;
                let rep = equilibrium_check(&c.channel, &r.state, 1e-8);
                println!(
                    "{}: current {:.3e}, phi_ec spread {:.3e}, temperature {:.3e}, iterations {} -> {}",
                    m.name(),
                    rep.current,
                    rep.phi_ec_spread,
                    rep.temperature,
                    r.trace.len(),
                    if rep.passed { "ok" } else { "FAILED" }
                );
                ok &= rep.passed && r.converged;
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}
