//! Command-line driver: scans, single Riemann problems, expansion
//! verification, and pattern simulations with CSV/JSON/SVG export.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 valid-but-negative
//! scientific finding (for shell pipelines that branch on outcomes).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptrack::engine::SimulationTrace;
use ptrack::interact;
use ptrack::pattern;
use ptrack::scenario::{LawSpec, Scenario};
use ptrack::svg;
use ptrack::{gamma_law, J2Convention, PressureLaw, State};

#[derive(Parser)]
#[command(name = "ptrack", about = "front tracking laboratory for the 1-D p-system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LawArgs {
    /// Gamma-law exponent (p = v^-gamma).
    #[arg(long)]
    gamma: Option<f64>,
    /// JSON law spec file ({"kind":"gamma",...} or {"kind":"table",...}).
    #[arg(long)]
    law_json: Option<PathBuf>,
}

impl LawArgs {
    fn build(&self) -> Result<PressureLaw, String> {
        match (self.gamma, &self.law_json) {
            (Some(g), None) => gamma_law(g).map_err(|e| e.to_string()),
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
                let spec: LawSpec = serde_json::from_str(&text).map_err(|e| e.to_string())?;
                spec.build().map_err(|e| e.to_string())
            }
            _ => Err("specify exactly one of --gamma or --law-json".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scan the stability discriminant D(v) = 3p''^2 - 2p'p''' and report
    /// any interval where it is positive (exit 2 when none exists).
    BakhvalovScan {
        #[command(flatten)]
        law: LawArgs,
        /// v window as LO:HI.
        #[arg(long, default_value = "0.5:2")]
        window: String,
        /// Sweep specification over gamma, as NAME=LO:HI:STEP.
        #[arg(long)]
        sweep: Option<String>,
        /// Random seed for sweep jitter (deterministic; 0 = no jitter).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Solve one Riemann problem and print the outgoing waves.
    Riemann {
        #[command(flatten)]
        law: LawArgs,
        /// Left state as U,V.
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        /// Right state as U,V.
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Run every interaction-expansion order test against the exact solver.
    VerifyExpansions {
        #[command(flatten)]
        law: LawArgs,
        /// Base specific volume for the expansions.
        #[arg(long, default_value_t = 1.0)]
        vbar: f64,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a scenario file and export trace CSV/JSON (and SVG).
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
        /// Override the cycle count in the scenario.
        #[arg(long)]
        cycles: Option<usize>,
        /// Absolute tolerance for h-quadrature (table and custom laws).
        #[arg(long)]
        tol_quad: Option<f64>,
        /// Relative tolerance for root finding in the solver.
        #[arg(long)]
        tol_root: Option<f64>,
    },
    /// Run the blowup experiment for a scenario and export the report.
    Blowup {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        cycles: Option<usize>,
        /// Override the number of train pairs.
        #[arg(long)]
        pairs: Option<usize>,
        /// Absolute tolerance for h-quadrature (table and custom laws).
        #[arg(long)]
        tol_quad: Option<f64>,
        /// Relative tolerance for root finding in the solver.
        #[arg(long)]
        tol_root: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("bad window `{s}`, expected LO:HI"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| "bad window lo")?;
    let hi: f64 = parts[1].parse().map_err(|_| "bad window hi")?;
    Ok((lo, hi))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("bad state `{s}`, expected U,V"));
    }
    Ok((
        parts[0].trim().parse().map_err(|_| "bad u")?,
        parts[1].trim().parse().map_err(|_| "bad v")?,
    ))
}

/// splitmix64 step, used only to jitter sweep grids deterministically.
fn splitmix64(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn scan_one(law: &PressureLaw, window: (f64, f64), json: bool) -> Result<bool, String> {
    let interval = law
        .find_violation_interval(window)
        .map_err(|e| e.to_string())?;
    if json {
        let payload = serde_json::json!({
            "law": law.label(),
            "window": [window.0, window.1],
            "violation_interval": interval.map(|(a, b)| vec![a, b]),
        });
        println!("{payload}");
    } else {
        // small sign table plus the interval
        println!("law: {}", law.label());
        println!("{:>10} {:>14} {:>6}", "v", "D(v)", "sign");
        for i in 0..=8 {
            let v = window.0 + (window.1 - window.0) * i as f64 / 8.0;
            let d = law.bakhvalov_discriminant(v).map_err(|e| e.to_string())?;
            let sign = if d > 0.0 { "+" } else if d < 0.0 { "-" } else { "0" };
            println!("{v:>10.4} {d:>14.6e} {sign:>6}");
        }
        match interval {
            Some((a, b)) => println!("condition violated on ({a:.10}, {b:.10})"),
            None => println!("condition holds everywhere on the window"),
        }
    }
    Ok(interval.is_some())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::BakhvalovScan {
            law,
            window,
            sweep,
            seed,
            json,
        } => {
            let window = parse_window(&window)?;
            if let Some(sweep_spec) = sweep {
                let (name, lo, hi, step) = parse_sweep(&sweep_spec)?;
                if name != "gamma" {
                    return Err(format!("unsupported sweep variable `{name}`"));
                }
                let mut gammas = Vec::new();
                let mut g = lo;
                let mut rng = seed;
                while g <= hi + 1e-12 {
                    let jitter = if seed != 0 {
                        (splitmix64(&mut rng) - 0.5) * step / 10.0
                    } else {
                        0.0
                    };
                    gammas.push((g + jitter).max(1e-6));
                    g += step;
                }
                let threads: usize = std::env::var("PTRACK_THREADS")
                    .ok()
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(1)
                    .max(1);
                let results = sweep_scan(&gammas, window, threads)?;
                let mut any = false;
                for (g, interval) in results {
                    match interval {
                        Some((a, b)) => {
                            any = true;
                            println!("gamma={g:.6}: violated on ({a:.8}, {b:.8})");
                        }
                        None => println!("gamma={g:.6}: condition holds"),
                    }
                }
                return Ok(ExitCode::from(if any { 0 } else { 2 }));
            }
            let law = law.build()?;
            let found = scan_one(&law, window, json)?;
            Ok(ExitCode::from(if found { 0 } else { 2 }))
        }
        Command::Riemann {
            law,
            left,
            right,
            json,
        } => {
            let law = law.build()?;
            let (ul, vl) = parse_pair(&left)?;
            let (ur, vr) = parse_pair(&right)?;
            let l = State::new(&law, ul, vl).map_err(|e| e.to_string())?;
            let r = State::new(&law, ur, vr).map_err(|e| e.to_string())?;
            let sol = ptrack::riemann::solve(&law, &l, &r).map_err(|e| e.to_string())?;
            // traversal residual: rebuild the right state through the waves
            let residual = {
                let u_m = sol.middle.u;
                let got = u_m
                    + match sol.wave2.kind {
                        ptrack::WaveKind::Shock => {
                            ptrack::curves::curve_u(
                                &law,
                                ptrack::WaveKind::Shock,
                                ptrack::WaveFamily::Second,
                                &sol.middle,
                                r.v,
                            )
                            .map_err(|e| e.to_string())?
                                - u_m
                        }
                        _ => r.h - sol.middle.h,
                    };
                (got - r.u).abs()
            };
            if json {
                let payload = serde_json::json!({
                    "middle": {"u": sol.middle.u, "v": sol.middle.v, "h": sol.middle.h},
                    "wave1": {"kind": format!("{}", sol.wave1.kind), "strength": sol.wave1.strength()},
                    "wave2": {"kind": format!("{}", sol.wave2.kind), "strength": sol.wave2.strength()},
                    "traversal_residual": residual,
                });
                println!("{payload}");
            } else {
                println!(
                    "middle state: u = {:.12}, v = {:.12}, h = {:.12}",
                    sol.middle.u, sol.middle.v, sol.middle.h
                );
                println!(
                    "wave 1: {}{}  strength {:.6e}",
                    sol.wave1.kind, ptrack::WaveFamily::First, sol.wave1.strength()
                );
                println!(
                    "wave 2: {}{}  strength {:.6e}",
                    sol.wave2.kind, ptrack::WaveFamily::Second, sol.wave2.strength()
                );
                println!("traversal residual: {residual:.3e}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyExpansions { law, vbar, json } => {
            let law = law.build()?;
            let reports = interact::verify_all(&law, vbar, J2Convention::Interaction)
                .map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?
                );
            } else {
                print!("{}", interact::format_report_table(&reports));
            }
            let all_pass = reports.iter().all(|r| r.pass);
            Ok(ExitCode::from(if all_pass { 0 } else { 2 }))
        }
        Command::Simulate {
            scenario,
            out,
            svg: want_svg,
            cycles,
            tol_quad,
            tol_root,
        } => {
            let mut sc = Scenario::from_file(&scenario).map_err(|e| e.to_string())?;
            if let Some(n) = cycles {
                sc.cycles = n;
            }
            let mut spec = sc.to_pattern_spec().map_err(|e| e.to_string())?;
            apply_tolerances(&mut spec, tol_quad, tol_root)?;
            let mut run = pattern::build_pattern(&spec).map_err(|e| e.to_string())?;
            run.run_cycles(spec.cycles).map_err(|e| e.to_string())?;
            run.field.finish_trace(&mut run.trace);
            export_trace(&run.trace, &out, want_svg)?;
            let first = run.boundaries.first().map(|b| b.main_strengths);
            let last = run.boundaries.last().map(|b| b.main_strengths);
            if let (Some(f), Some(l)) = (first, last) {
                let drift = f
                    .iter()
                    .zip(l.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                println!("periodicity drift over the run: {drift:.3e}");
            }
            println!("trace written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Blowup {
            scenario,
            out,
            svg: want_svg,
            cycles,
            pairs,
            tol_quad,
            tol_root,
        } => {
            let mut sc = Scenario::from_file(&scenario).map_err(|e| e.to_string())?;
            if let Some(n) = cycles {
                sc.cycles = n;
            }
            if let Some(k) = pairs {
                sc.pairs = k;
                sc.train = k > 0;
            }
            let mut spec = sc.to_pattern_spec().map_err(|e| e.to_string())?;
            apply_tolerances(&mut spec, tol_quad, tol_root)?;
            let (report, trace) =
                pattern::run_blowup_experiment(&spec).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out).map_err(|e| e.to_string())?;
            let report_json =
                serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            std::fs::write(out.join("amplification.json"), &report_json)
                .map_err(|e| e.to_string())?;
            export_trace(&trace, &out, want_svg)?;
            println!(
                "measured per-cycle factor: {:.8} (design target {:.8})",
                report.measured_factor, report.predicted_factor
            );
            if let (Some(a), Some(b)) = (report.boundaries.first(), report.boundaries.last()) {
                println!(
                    "total strength: {:.8} -> {:.8}; train: {:.6e} -> {:.6e}",
                    a.total_strength, b.total_strength, a.train_total, b.train_total
                );
            }
            println!("report written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn apply_tolerances(
    spec: &mut ptrack::pattern::PatternSpec,
    tol_quad: Option<f64>,
    tol_root: Option<f64>,
) -> Result<(), String> {
    if let Some(q) = tol_quad {
        if !(q > 0.0) {
            return Err("--tol-quad must be positive".into());
        }
        spec.law.set_quad_tol(q);
    }
    if let Some(r) = tol_root {
        if !(r > 0.0) {
            return Err("--tol-root must be positive".into());
        }
        ptrack::numerics::set_root_xtol(r);
    }
    Ok(())
}

fn parse_sweep(s: &str) -> Result<(String, f64, f64, f64), String> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("bad sweep `{s}`, expected NAME=LO:HI:STEP"))?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad sweep `{s}`, expected NAME=LO:HI:STEP"));
    }
    Ok((
        name.to_string(),
        parts[0].parse().map_err(|_| "bad sweep lo")?,
        parts[1].parse().map_err(|_| "bad sweep hi")?,
        parts[2].parse().map_err(|_| "bad sweep step")?,
    ))
}

type SweepRow = (f64, Option<(f64, f64)>);

fn sweep_scan(
    gammas: &[f64],
    window: (f64, f64),
    threads: usize,
) -> Result<Vec<SweepRow>, String> {
    let mut results: Vec<SweepRow> = Vec::with_capacity(gammas.len());
    std::thread::scope(|scope| -> Result<(), String> {
        let chunks: Vec<&[f64]> = gammas.chunks(gammas.len().div_ceil(threads)).collect();
        let mut handles = Vec::new();
        for chunk in chunks {
            handles.push(scope.spawn(move || -> Result<Vec<_>, String> {
                let mut out = Vec::new();
                for &g in chunk {
                    let law = gamma_law(g).map_err(|e| e.to_string())?;
                    let iv = law
                        .find_violation_interval(window)
                        .map_err(|e| e.to_string())?;
                    out.push((g, iv));
                }
                Ok(out)
            }));
        }
        for h in handles {
            results.extend(h.join().map_err(|_| "worker panicked")??);
        }
        Ok(())
    })?;
    Ok(results)
}

fn export_trace(trace: &SimulationTrace, out: &std::path::Path, want_svg: bool) -> Result<(), String> {
    std::fs::create_dir_all(out).map_err(|e| e.to_string())?;
    std::fs::write(out.join("snapshots.csv"), trace.snapshots_csv())
        .map_err(|e| e.to_string())?;
    std::fs::write(out.join("series.csv"), trace.series_csv()).map_err(|e| e.to_string())?;
    std::fs::write(
        out.join("events.json"),
        trace.events_json().map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    if want_svg {
        std::fs::write(out.join("fronts.svg"), svg::render_xt(&trace.paths, 900, 600))
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}
