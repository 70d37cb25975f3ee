//! `multisymp`: verification suites, simulation runs and reports for the free
//! Klein-Gordon field on a periodic box.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use multisymp_core::prequant::{format_multi_index, p_spectrum};
use multisymp_core::random;
use multisymp_core::report::SCHEMA_VERSION;
use multisymp_core::simulate::simulate;
use multisymp_core::verify::{run_brackets, run_prequant, run_suite, PrequantInputs, Suite};
use multisymp_core::{ModeLattice, Report, RunConfig, Solution};

#[derive(Parser, Debug)]
#[command(name = "multisymp", version, about = "Multisymplectic Klein-Gordon verification toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// JSON config: lattice keys {d, L, N, n_max, m, hbar} plus optional lambda, tolerances, seed, output_path
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output file; defaults to the config's output_path, else stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "X", allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Tolerance override for one check, e.g. --tol obs.slice_independence=1e-10
    #[arg(long = "tol", global = true, value_name = "NAME=V")]
    tol: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and write a JSON report
    Verify {
        #[arg(long, default_value = "all", value_name = "NAME")]
        suite: String,
    },
    /// Time series of conserved quantities (CSV)
    Simulate(SimulateArgs),
    /// Bracket identity table (JSON)
    Brackets,
    /// Prequantized operator checks (JSON) and translation spectrum (CSV)
    Prequant(PrequantArgs),
    /// Print the resolved configuration
    Spec,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Cauchy data CSV with header index,phi0,pi0 (one row per grid point); random when absent
    #[arg(long, value_name = "PATH")]
    cauchy: Option<PathBuf>,
    #[arg(long, default_value_t = 10.0)]
    t_final: f64,
    #[arg(long, default_value_t = 11)]
    n_out: usize,
    /// Mode indices whose |a_k| is reported
    #[arg(long, value_delimiter = ',', value_name = "K,...")]
    modes: Vec<usize>,
    /// Also evolve the Cauchy data by leapfrog with steps no longer than this
    #[arg(long, value_name = "DT")]
    leapfrog_dt: Option<f64>,
    /// Write the t = 0 Cauchy data of the simulated solution to this CSV
    #[arg(long, value_name = "PATH")]
    export_cauchy: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PrequantArgs {
    /// Per-mode complex smearing function f, JSON [[re, im], ...]
    #[arg(long, value_name = "JSON")]
    f: Option<String>,
    /// Per-mode complex smearing function g, JSON [[re, im], ...]
    #[arg(long, value_name = "JSON")]
    g: Option<String>,
    /// Monomial degree for the operator checks and the spectrum
    #[arg(long, default_value_t = multisymp_core::verify::PREQUANT_DEGREE)]
    degree: u32,
    /// Translation vector zeta (d + 1 comma-separated components, time first)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "Z0,Z1,...")]
    zeta: Option<Vec<f64>>,
    /// Write the spectrum of P_zeta on monomials to this CSV
    #[arg(long, value_name = "PATH")]
    spectrum: Option<PathBuf>,
}

/// Failures of the checks themselves (exit 1) versus everything else (exit 2).
enum Outcome {
    Pass,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = resolve_config(&cli.global)?;
    let out = cli.global.out.clone().or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    match cli.command {
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            emit_report(&run_suite(suite, &cfg)?, out.as_deref())
        }
        Command::Brackets => emit_report(&run_brackets(&cfg)?, out.as_deref()),
        Command::Prequant(args) => cmd_prequant(&cfg, &args, out.as_deref()),
        Command::Simulate(args) => {
            cmd_simulate(&cfg, &args, out.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Spec => {
            let mut text = serde_json::to_string_pretty(&cfg)?;
            text.push('\n');
            write_output(out.as_deref(), &text)?;
            Ok(Outcome::Pass)
        }
    }
}

fn resolve_config(opts: &GlobalOpts) -> anyhow::Result<RunConfig> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(lambda) = opts.lambda {
        cfg.lambda = lambda;
    }
    for entry in &opts.tol {
        let (name, value) = entry.split_once('=').ok_or_else(|| anyhow!("--tol expects NAME=V, got `{entry}`"))?;
        let value: f64 = value.trim().parse().with_context(|| format!("tolerance value in `{entry}`"))?;
        cfg.tolerances.insert(name.trim().to_string(), value);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_report(report: &Report, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let mut text = report.to_json();
    text.push('\n');
    write_output(out, &text)?;
    for c in report.failures() {
        eprintln!("FAIL {}: abs_diff {:e} > tolerance {:e}", c.name, c.abs_diff, c.tolerance);
    }
    Ok(if report.all_pass { Outcome::Pass } else { Outcome::ChecksFailed })
}

fn parse_mode_function(json: &str, lat: &ModeLattice, what: &str) -> anyhow::Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(json).with_context(|| format!("--{what} must be JSON [[re, im], ...]"))?;
    if pairs.len() != lat.num_modes() {
        bail!("--{what} has {} entries, the lattice has {} modes", pairs.len(), lat.num_modes());
    }
    Ok(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

fn cmd_prequant(cfg: &RunConfig, args: &PrequantArgs, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let lat = cfg.lattice.build()?;
    let f = args.f.as_deref().map(|s| parse_mode_function(s, &lat, "f")).transpose()?;
    let g = args.g.as_deref().map(|s| parse_mode_function(s, &lat, "g")).transpose()?;
    let inputs = PrequantInputs { f, g, zeta: args.zeta.clone(), degree: Some(args.degree) };
    let report = run_prequant(cfg, &inputs)?;
    if let Some(path) = &args.spectrum {
        // time translation unless a zeta was given
        let zeta = args.zeta.clone().unwrap_or_else(|| {
            let mut z = vec![0.0; lat.dim() + 1];
            z[0] = 1.0;
            z
        });
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(["schema_version", "multi_index", "degree", "eigenvalue"])?;
        for (alpha, degree, ev) in p_spectrum(&lat, &zeta, args.degree) {
            w.write_record([
                SCHEMA_VERSION.to_string(),
                format_multi_index(&alpha),
                degree.to_string(),
                format!("{ev:e}"),
            ])?;
        }
        w.flush()?;
    }
    emit_report(&report, out)
}

#[derive(Serialize)]
struct CauchyRow {
    index: usize,
    phi0: f64,
    pi0: f64,
}

fn read_cauchy(path: &Path, lat: &ModeLattice) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let n = lat.grid_len();
    let mut phi = vec![f64::NAN; n];
    let mut pi = vec![f64::NAN; n];
    for row in rdr.deserialize() {
        let row: CauchyRecord = row.with_context(|| format!("parsing {}", path.display()))?;
        if row.index >= n {
            bail!("grid index {} out of range (grid has {n} points)", row.index);
        }
        phi[row.index] = row.phi0;
        pi[row.index] = row.pi0;
    }
    if let Some(j) = phi.iter().chain(&pi).position(|x| !x.is_finite()) {
        bail!("Cauchy data missing or non-finite at grid index {}", j % n);
    }
    Ok((phi, pi))
}

#[derive(serde::Deserialize)]
struct CauchyRecord {
    index: usize,
    phi0: f64,
    pi0: f64,
}

fn cmd_simulate(cfg: &RunConfig, args: &SimulateArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let lat = Arc::new(cfg.lattice.build()?);
    let sol = match &args.cauchy {
        Some(path) => {
            let (phi, pi) = read_cauchy(path, &lat)?;
            Solution::from_cauchy(lat.clone(), &phi, &pi)?
        }
        None => random::real_solution(&lat, &mut random::rng(cfg.seed)),
    };
    if let Some(path) = &args.export_cauchy {
        let (phi, pi) = sol.evaluate_fields(0.0).cauchy_real();
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for (index, (&phi0, &pi0)) in phi.iter().zip(&pi).enumerate() {
            w.serialize(CauchyRow { index, phi0, pi0 })?;
        }
        w.flush()?;
    }
    let rows = simulate(&sol, args.t_final, args.n_out, &args.modes, args.leapfrog_dt)?;

    let mut header = vec!["schema_version".to_string(), "t".to_string(), "energy".to_string()];
    header.extend((1..=lat.dim()).map(|i| format!("momentum_{i}")));
    header.extend(args.modes.iter().map(|k| format!("abs_a_{k}")));
    if args.leapfrog_dt.is_some() {
        header.push("energy_leapfrog".to_string());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![SCHEMA_VERSION.to_string(), format!("{:e}", row.t), format!("{:e}", row.energy)];
        rec.extend(row.momentum.iter().map(|x| format!("{x:e}")));
        rec.extend(row.a_abs.iter().map(|x| format!("{x:e}")));
        if let Some(e) = row.energy_leapfrog {
            rec.push(format!("{e:e}"));
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    write_output(out, &String::from_utf8(bytes)?)
}
