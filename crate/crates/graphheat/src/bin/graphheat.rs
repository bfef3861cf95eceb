//! Command-line interface: graph validation, certified kernel and grid
//! evaluation, spectra, trace comparisons, and the verification suite.
//! Emits CSV (header row, 17 significant digits, locale-free) or JSON
//! (with the run configuration echoed for reproducibility).

use clap::{Parser, Subcommand, ValueEnum};
use graphheat::closed_forms::SymmetricGraphData;
use graphheat::graph::{GraphPoint, MetricGraph};
use graphheat::heat::{self, Truncation};
use graphheat::spectral::{self, SecularOptions};
use graphheat::trace;
use graphheat::verify;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "graphheat",
    about = "Heat kernels, spectra, and trace formulas on compact metric graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and report its structure.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Heat kernel H(t, q1, q2) (diagonal when --point2 is omitted).
    Heat {
        #[arg(long)]
        graph: PathBuf,
        /// Evaluation point, written EDGE:X.
        #[arg(long)]
        point: String,
        /// Second point; defaults to --point.
        #[arg(long)]
        point2: Option<String>,
        /// Times: LIST (comma separated) or A:B:N (inclusive grid).
        #[arg(long)]
        t: String,
        /// Certified truncation tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Path-length cutoff: "auto" or a number.
        #[arg(long, default_value = "auto")]
        lcut: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Diagonal kernel sampled on one edge, one column per time.
    Grid {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        t: String,
        /// Number of subintervals (samples + 1 rows).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "auto")]
        lcut: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Eigenvalues (and multiplicities) up to sigma-max.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 30.0)]
        sigma_max: f64,
        /// secular: scattering-matrix solver; symmetric: adjacency
        /// construction for completely symmetric equilateral graphs.
        #[arg(long, default_value = "secular")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Cycle-expansion trace against the eigenvalue trace.
    Trace {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "0.05:0.5:10")]
        t: String,
        /// Cycle-length cutoff for the geometric side.
        #[arg(long, default_value_t = 10.0)]
        lmax: f64,
        /// Frequency cutoff for the eigenvalue side.
        #[arg(long, default_value_t = 40.0)]
        sigma_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Edge trace formula: spectral side vs anchored closed paths.
    EdgeTrace {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long, default_value = "0.05:1:20")]
        t: String,
        #[arg(long, default_value_t = 10.5)]
        lmax: f64,
        #[arg(long, default_value_t = 26.0)]
        sigma_max: f64,
        /// Number of eigenfunctions on the spectral side (default all).
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the verification suites over the built-in graph zoo.
    Verify {
        /// Restrict to one or more suites (graph, scattering, paths,
        /// heat, spectral, trace, symmetric).
        #[arg(long)]
        suite: Vec<String>,
        /// Negative control: perturb one scattering entry by this amount.
        #[arg(long)]
        fault_beta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

/// 17 significant digits, locale-free.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn load_graph(path: &Path) -> Result<MetricGraph, AnyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(MetricGraph::parse_json(&text)?)
}

fn parse_point(g: &MetricGraph, spec: &str) -> Result<GraphPoint, AnyError> {
    let (edge, x) = spec
        .rsplit_once(':')
        .ok_or_else(|| format!("point {spec:?} is not EDGE:X"))?;
    let edge = g.edge_by_name(edge)?;
    let x: f64 = x
        .parse()
        .map_err(|_| format!("bad coordinate in {spec:?}"))?;
    Ok(GraphPoint::new(edge, x))
}

fn parse_times(spec: &str) -> Result<Vec<f64>, AnyError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let ts: Vec<f64> = if parts.len() == 3 {
        let a: f64 = parts[0].parse()?;
        let b: f64 = parts[1].parse()?;
        let n: usize = parts[2].parse()?;
        if n == 0 {
            return Err("time grid needs at least one point".into());
        }
        if n == 1 {
            vec![a]
        } else {
            (0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect()
        }
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()?
    };
    if ts.iter().any(|&t| !(t > 0.0)) {
        return Err("all times must be positive".into());
    }
    Ok(ts)
}

fn parse_truncation(lcut: &str, tol: f64) -> Result<Truncation, AnyError> {
    if !(tol > 0.0) {
        return Err("tolerance must be positive".into());
    }
    if lcut == "auto" {
        Ok(Truncation::Auto { tol })
    } else {
        let l_cut: f64 = lcut
            .parse()
            .map_err(|_| "lcut must be a number or 'auto'")?;
        Ok(Truncation::Fixed { l_cut })
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), AnyError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, AnyError> {
    match cli.command {
        Command::Validate { graph } => {
            let g = load_graph(&graph)?;
            let mut degrees: Vec<usize> = g.vertex_ids().map(|v| g.degree(v)).collect();
            degrees.sort_unstable();
            println!(
                "vertices={} edges={} total_length={} min_edge_length={} degrees={:?} bipartite={}",
                g.vertex_count(),
                g.edge_count(),
                fmt(g.total_length()),
                fmt(g.min_original_edge_length()),
                degrees,
                g.is_bipartite(),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Heat {
            graph,
            point,
            point2,
            t,
            tol,
            lcut,
            out,
            format,
        } => {
            let g = load_graph(&graph)?;
            let q1 = parse_point(&g, &point)?;
            let q2 = match &point2 {
                Some(p) => parse_point(&g, p)?,
                None => q1,
            };
            let ts = parse_times(&t)?;
            let trunc = parse_truncation(&lcut, tol)?;
            let mut rows = Vec::new();
            for &t in &ts {
                let kv = heat::heat_kernel(&g, t, q1, q2, trunc)?;
                rows.push((t, kv.value, kv.bound));
            }
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("t,value,bound\n");
                    for (t, v, b) in &rows {
                        writeln!(s, "{},{},{}", fmt(*t), fmt(*v), fmt(*b)).unwrap();
                    }
                    s
                }
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "heat",
                            "graph": graph.display().to_string(),
                            "point": point,
                            "point2": point2,
                            "tol": tol,
                            "lcut": lcut,
                        },
                        "results": rows.iter().map(|(t, v, b)| json!({
                            "t": t, "value": v, "bound": b,
                        })).collect::<Vec<_>>(),
                    });
                    format!("{json:#}\n")
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Grid {
            graph,
            edge,
            t,
            samples,
            tol,
            lcut,
            out,
            format,
        } => {
            let g = load_graph(&graph)?;
            let e = g.edge_by_name(&edge)?;
            let ts = parse_times(&t)?;
            let trunc = parse_truncation(&lcut, tol)?;
            let table = heat::heat_diagonal_grid(&g, &ts, e, samples, trunc)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("x");
                    for t in &table.ts {
                        write!(s, ",t={}", fmt(*t)).unwrap();
                    }
                    s.push('\n');
                    for (i, x) in table.xs.iter().enumerate() {
                        write!(s, "{}", fmt(*x)).unwrap();
                        for kv in &table.values[i] {
                            write!(s, ",{}", fmt(kv.value)).unwrap();
                        }
                        s.push('\n');
                    }
                    s
                }
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "grid",
                            "graph": graph.display().to_string(),
                            "edge": edge,
                            "samples": samples,
                            "tol": tol,
                            "lcut": lcut,
                        },
                        "t": table.ts,
                        "bounds": table.values[0].iter().map(|kv| kv.bound).collect::<Vec<_>>(),
                        "x": table.xs,
                        "values": table.values.iter().map(|row| {
                            row.iter().map(|kv| kv.value).collect::<Vec<_>>()
                        }).collect::<Vec<_>>(),
                    });
                    format!("{json:#}\n")
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum {
            graph,
            sigma_max,
            method,
            out,
            format,
        } => {
            let g = load_graph(&graph)?;
            let spectrum = match method.as_str() {
                "secular" => {
                    spectral::secular_spectrum(&g, sigma_max, SecularOptions::default())?.spectrum
                }
                "symmetric" => {
                    let data = SymmetricGraphData::from_graph(&g)?;
                    spectral::symmetric_spectrum(&data, sigma_max)?
                }
                other => return Err(format!("unknown method {other:?}").into()),
            };
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("sigma,lambda,multiplicity\n");
                    for level in &spectrum.levels {
                        writeln!(
                            s,
                            "{},{},{}",
                            fmt(level.sigma),
                            fmt(level.lambda),
                            level.multiplicity
                        )
                        .unwrap();
                    }
                    s
                }
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "spectrum",
                            "graph": graph.display().to_string(),
                            "sigma_max": sigma_max,
                            "method": method,
                        },
                        "levels": spectrum.levels.iter().map(|l| json!({
                            "sigma": l.sigma,
                            "lambda": l.lambda,
                            "multiplicity": l.multiplicity,
                        })).collect::<Vec<_>>(),
                    });
                    format!("{json:#}\n")
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace {
            graph,
            t,
            lmax,
            sigma_max,
            out,
            format,
        } => {
            let g = load_graph(&graph)?;
            let ts = parse_times(&t)?;
            let spectrum =
                spectral::secular_spectrum(&g, sigma_max, SecularOptions::default())?.spectrum;
            let cycles = graphheat::paths::enumerate_primitive_cycles(&g, lmax)?;
            let mut rows = Vec::new();
            for &t in &ts {
                let roth = trace::roth_trace_from_cycles(&g, &cycles, t, lmax);
                let eigen = trace::eigen_trace(&spectrum, t);
                rows.push((t, eigen, roth));
            }
            let fit = trace::roth_constant_fit(&g, &spectrum, &ts, lmax)?;
            let reading = trace::roth_reading_comparison(&g, &spectrum, &ts, lmax)?;
            let content = match format {
                Format::Csv => {
                    let mut s =
                        String::from("t,eigen_trace,cycle_trace,leading,constant,abs_diff\n");
                    for (t, eigen, roth) in &rows {
                        writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            fmt(*t),
                            fmt(*eigen),
                            fmt(roth.value),
                            fmt(roth.leading),
                            fmt(roth.constant),
                            fmt((eigen - roth.value).abs())
                        )
                        .unwrap();
                    }
                    s
                }
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "trace",
                            "graph": graph.display().to_string(),
                            "lmax": lmax,
                            "sigma_max": sigma_max,
                        },
                        "constant_fit": fit,
                        "iterate_reading": {
                            "iterate_power_error": reading.iterate_power_error,
                            "constant_coefficient_error": reading.printed_error,
                            "constant_coefficient_fits_better":
                                reading.printed_error < reading.iterate_power_error,
                        },
                        "results": rows.iter().map(|(t, eigen, roth)| json!({
                            "t": t,
                            "eigen_trace": eigen,
                            "cycle_trace": roth.value,
                            "abs_diff": (eigen - roth.value).abs(),
                        })).collect::<Vec<_>>(),
                    });
                    format!("{json:#}\n")
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EdgeTrace {
            graph,
            edge,
            t,
            lmax,
            sigma_max,
            terms,
            out,
            format,
        } => {
            let g = load_graph(&graph)?;
            let e = g.edge_by_name(&edge)?;
            let ts = parse_times(&t)?;
            let sol = spectral::secular_spectrum(&g, sigma_max, SecularOptions::default())?;
            let m = terms.unwrap_or(sol.basis.functions.len());
            let report = trace::edge_trace_sides(&g, e, &ts, lmax, &sol.basis, m)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("t,lhs,rhs,difference\n");
                    for i in 0..report.ts.len() {
                        writeln!(
                            s,
                            "{},{},{},{}",
                            fmt(report.ts[i]),
                            fmt(report.lhs[i]),
                            fmt(report.rhs[i]),
                            fmt(report.difference[i])
                        )
                        .unwrap();
                    }
                    s
                }
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "edge-trace",
                            "graph": graph.display().to_string(),
                            "edge": edge,
                            "lmax": lmax,
                            "sigma_max": sigma_max,
                            "terms": m,
                        },
                        "c_e": report.c_e,
                        "max_deviation": report.max_deviation,
                        "max_dt_difference": report.max_dt_difference,
                        "results": (0..report.ts.len()).map(|i| json!({
                            "t": report.ts[i],
                            "lhs": report.lhs[i],
                            "rhs": report.rhs[i],
                            "difference": report.difference[i],
                        })).collect::<Vec<_>>(),
                    });
                    format!("{json:#}\n")
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            fault_beta,
            out,
            format,
        } => {
            for s in &suite {
                if !verify::SUITES.contains(&s.as_str()) {
                    return Err(format!(
                        "unknown suite {s:?}; available: {}",
                        verify::SUITES.join(", ")
                    )
                    .into());
                }
            }
            let options = verify::VerifyOptions {
                suites: if suite.is_empty() {
                    None
                } else {
                    Some(suite.clone())
                },
                fault_beta,
            };
            let report = verify::run(&options);
            for c in &report.checks {
                eprintln!(
                    "{} {}/{} [{}]: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.graph,
                    c.detail
                );
            }
            eprintln!(
                "{} of {} checks passed",
                report.checks.iter().filter(|c| c.passed).count(),
                report.checks.len()
            );
            let content = match format {
                Format::Json => {
                    let json = json!({
                        "config": {
                            "command": "verify",
                            "suites": suite,
                            "fault_beta": fault_beta,
                        },
                        "passed": report.passed,
                        "checks": report.checks,
                    });
                    format!("{json:#}\n")
                }
                Format::Csv => {
                    let mut s = String::from("suite,name,graph,passed,detail\n");
                    for c in &report.checks {
                        writeln!(
                            s,
                            "{},{},{},{},\"{}\"",
                            c.suite, c.name, c.graph, c.passed, c.detail
                        )
                        .unwrap();
                    }
                    s
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
