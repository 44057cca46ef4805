use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use dgsem_siac::cases::ConvergenceDomain;
use dgsem_siac::config::RunConfig;
use dgsem_siac::diagnostics::{eoc_table_csv, format_eoc_table};
use dgsem_siac::driver::run;
use dgsem_siac::reference::lgl_nodes_weights;
use dgsem_siac::tables::convergence_suite;
use dgsem_siac::{DeltaKernel, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "dgsem-siac", version, about = "DGSEM solver with multi-element SIAC shock filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation described by a TOML configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Replace a configuration entry, e.g. `--override nx=20` or `--override filter.m=3`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Reproduce the convergence tables.
    Tables {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Skip levels with more elements per direction than this.
        #[arg(long)]
        max_elements: Option<usize>,
        /// Only run the named tables (table1 .. table4).
        #[arg(long = "table")]
        tables: Vec<String>,
        /// Periodic domain of the convergence case.
        #[arg(long, value_enum, default_value_t = Domain::Unit)]
        domain: Domain,
        /// Also write one CSV per table into this directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Print properties of Dirac-delta kernels or samples of them.
    Kernel {
        #[arg(long, requires = "k", required_unless_present = "config")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        k: Option<usize>,
        /// TOML file with `kernels = [[m, k], ...]` and optionally `samples`.
        #[arg(long, conflicts_with_all = ["m", "k"])]
        config: Option<PathBuf>,
        /// Emit `x,P(x)` samples on [-1, 1] as CSV, one column per kernel.
        #[arg(long)]
        plot_data: bool,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Convergence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Domain {
    /// [-1, 1]^2
    Printed,
    /// [0, 1]^2
    Unit,
}

impl From<Domain> for ConvergenceDomain {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Printed => ConvergenceDomain::Printed,
            Domain::Unit => ConvergenceDomain::Unit,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Run { config, overrides } => {
            let resolved = RunConfig::from_file(&config, &overrides)?.resolve()?;
            let outcome = run(&resolved)?;
            let mut summary = outcome.summary;
            summary.min_density = finite_or_zero(summary.min_density);
            summary.min_pressure = finite_or_zero(summary.min_pressure);
            toml::to_string(&summary).map_err(|e| Error::config(format!("cannot format summary: {e}")))
        }
        Command::Tables { suite: Suite::Convergence, max_elements, tables, domain, output_dir } => {
            convergence_tables(max_elements, &tables, domain.into(), output_dir)
        }
        Command::Kernel { m, k, config, plot_data, samples } => {
            let (pairs, file_samples) = match (m, k, config) {
                (Some(m), Some(k), _) => (vec![(m, k)], None),
                (_, _, Some(path)) => kernel_list(&path)?,
                _ => return Err(Error::config("give --m and --k or --config")),
            };
            let samples = samples.or(file_samples).unwrap_or(401);
            if plot_data {
                kernel_samples(&pairs, samples)
            } else {
                pairs.iter().map(|&(m, k)| kernel_report(m, k)).collect()
            }
        }
    }
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn convergence_tables(
    max_elements: Option<usize>,
    only: &[String],
    domain: ConvergenceDomain,
    output_dir: Option<PathBuf>,
) -> Result<String> {
    let suite = convergence_suite();
    for name in only {
        if !suite.iter().any(|s| s.id == name) {
            return Err(Error::config(format!("unknown table '{name}'")));
        }
    }
    if let Some(dir) = &output_dir {
        fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    for sweep in suite.iter().filter(|s| only.is_empty() || only.iter().any(|n| n == s.id)) {
        let levels = sweep.levels_up_to(max_elements.unwrap_or(usize::MAX));
        if levels.len() < 2 {
            let _ = writeln!(out, "{}: skipped, fewer than two levels within the element limit\n", sweep.id);
            continue;
        }
        let rows = sweep.run_levels(&levels, domain)?;
        let _ = writeln!(out, "{}", format_eoc_table(&format!("{}: {}", sweep.id, sweep.title), &rows));
        if let Some(dir) = &output_dir {
            fs::write(dir.join(format!("{}.csv", sweep.id)), eoc_table_csv(&rows))?;
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelList {
    kernels: Vec<(usize, usize)>,
    samples: Option<usize>,
}

fn kernel_list(path: &Path) -> Result<(Vec<(usize, usize)>, Option<usize>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
    let list: KernelList = toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    if list.kernels.is_empty() {
        return Err(Error::config("the kernel list is empty"));
    }
    Ok((list.kernels, list.samples))
}

fn kernel_samples(pairs: &[(usize, usize)], samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::config("at least two samples are needed"));
    }
    let kernels = pairs.iter().map(|&(m, k)| DeltaKernel::build(m, k)).collect::<Result<Vec<_>>>()?;
    let mut out = String::from("x");
    for (m, k) in pairs {
        let _ = write!(out, ",p_{m}_{k}");
    }
    out.push('\n');
    for s in 0..samples {
        let x = -1.0 + 2.0 * s as f64 / (samples - 1) as f64;
        let _ = write!(out, "{x:?}");
        for kernel in &kernels {
            let _ = write!(out, ",{:?}", kernel.poly(x));
        }
        out.push('\n');
    }
    Ok(out)
}

fn kernel_report(m: usize, k: usize) -> Result<String> {
    let kernel = DeltaKernel::build(m, k)?;
    let mut out = String::new();
    // The kernel has degree m + 2k + 2; this rule integrates x^j P exactly for j <= m + 1.
    let (nodes, weights) = lgl_nodes_weights(kernel.degree() / 2 + m / 2 + 3)?;
    let moment = |j: i32| nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(j) * kernel.poly(*x)).sum::<f64>();
    let _ = writeln!(out, "kernel (m, k) = ({m}, {k})");
    let _ = writeln!(out, "polynomial degree       {}", kernel.degree());
    let _ = writeln!(out, "quadrature parameter N* {}", kernel.n_star());
    let _ = writeln!(out, "integral                {:.3e} off 1", (moment(0) - 1.0).abs());
    for j in 1..=m as i32 {
        let _ = writeln!(out, "moment x^{j:<2}            {:.3e}", moment(j).abs());
    }
    for order in 0..=k {
        let end = kernel.poly_derivative(order, 1.0).abs().max(kernel.poly_derivative(order, -1.0).abs());
        let _ = writeln!(out, "derivative {order:<2} at +-1   {end:.3e}");
    }
    let _ = writeln!(out, "legendre coefficients   {:?}\n", kernel.legendre_coefficients());
    Ok(out)
}
