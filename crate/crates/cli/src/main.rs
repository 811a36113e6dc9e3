//! `clusterlab`: batch experiments over the clique hypergraph of `G(n,p)`.
//!
//! Subcommands: `moments`, `exactdist`, `simulate`, `factors`, `shamir`,
//! `verify`. All probabilities are accepted as exact rationals (`1/2`) or
//! decimals (`0.5`); decimals force float mode. Outputs are byte-identical for
//! identical command lines and seeds, independent of the worker count.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use clusterlab_core::cliques::{parse_input, InputObject, RngStream};
use clusterlab_core::clusters::{t_counts, Q3Convention};
use clusterlab_core::dist::{
    estimated_distribution, exact_distribution, monte_carlo_stats, default_omega,
    PredicateConfig,
};
use clusterlab_core::factors::{count_factors, count_matchings, expected_factors_exact};
use clusterlab_core::moments::{moment_table, sigma_npi_value};
use clusterlab_core::scalar::{format_real, parse_probability, ProbSpec, Scalar};
use clusterlab_core::verify::{run_identity_suite, Grid};
use clusterlab_core::Rational;

#[derive(Parser)]
#[command(name = "clusterlab", version, about = "Clique-hypergraph laboratory for G(n,p)")]
struct CliArgs {
    /// Worker threads (default: available parallelism). Results never depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form moment table for one (n, r, p).
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Probability as "num/den" or a decimal (decimal forces float mode).
        #[arg(long)]
        p: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact law of H_r(G(n,p)) as JSON lines (guarded at n <= 7).
    Exactdist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: String,
        /// Monte Carlo re-estimate with this many samples instead of exact enumeration.
        #[arg(long)]
        estimate: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded Monte Carlo summary statistics at any desk-scale n.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: String,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also evaluate good/plausible/well-behaved rates (needs exact scale n <= 7,
        /// unless --predicate-samples switches the reference expectations to Monte Carlo).
        #[arg(long)]
        with_predicates: bool,
        /// Estimate the predicate reference expectations from this many samples
        /// instead of exact enumeration (stderrs recorded in the JSON output).
        #[arg(long)]
        predicate_samples: Option<u64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        plaus_c: f64,
        #[arg(long, default_value_t = 0.2)]
        plaus_delta: f64,
        /// Q3 role convention: ordered or unordered.
        #[arg(long, default_value = "ordered")]
        q3_convention: String,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Count K_r-factors / perfect matchings, with cluster statistics.
    Factors {
        /// Graph or hypergraph in the shared text format (header "n r", r=0 for graphs).
        #[arg(long, conflicts_with_all = ["n", "p", "seed"])]
        input: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact factor expectation (n <= 7) and Sigma(n,pi).
        #[arg(long)]
        expected: bool,
        /// Write the (sampled or loaded) graph in the shared text format.
        #[arg(long)]
        save_graph: Option<String>,
        /// Write the clique hypergraph in the shared text format.
        #[arg(long)]
        save_hypergraph: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random hyperedge-deletion process traces and summary.
    Shamir {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Stop when this many hyperedges remain.
        #[arg(long, default_value_t = 0)]
        stop_m: usize,
        /// Write the per-step CSV trace of the first run here.
        #[arg(long)]
        trace_output: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the exact identity suite; exits 1 on the first failed identity.
    Verify {
        #[arg(long, default_value = "small")]
        grid: String,
    },
}

enum CliError {
    /// Bad parameters or exceeded guards: exit 2.
    Validation(String),
    /// A verified identity failed: exit 1.
    Identity(String),
}

impl From<clusterlab_core::Error> for CliError {
    fn from(e: clusterlab_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let workers = args.workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
    });
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(args.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Identity(msg)) => {
            eprintln!("FAILED: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn float_mode_warning() {
    eprintln!("warning: decimal p forces float mode; exact-equality checks are disabled");
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Moments { n, r, p, out } => {
            let table_json = match parse_probability(&p)? {
                ProbSpec::Exact(q) => moment_table(n, r, &q)?.to_json(),
                ProbSpec::Float(x) => {
                    float_mode_warning();
                    moment_table(n, r, &x)?.to_json()
                }
            };
            emit(&out, &format!("{table_json}\n"))
        }
        Command::Exactdist { n, r, p, estimate, seed, out } => {
            let spec = parse_probability(&p)?;
            let text = match estimate {
                Some(samples) => {
                    estimated_distribution(n, r, spec.as_f64(), samples, &RngStream::new(seed, 0))?
                        .to_jsonl()
                }
                None => match spec {
                    ProbSpec::Exact(q) => exact_distribution(n, r, &q)?.to_jsonl(),
                    ProbSpec::Float(x) => {
                        float_mode_warning();
                        exact_distribution(n, r, &x)?.to_jsonl()
                    }
                },
            };
            emit(&out, &text)
        }
        Command::Simulate {
            n,
            r,
            p,
            samples,
            seed,
            with_predicates,
            predicate_samples,
            omega,
            plaus_c,
            plaus_delta,
            q3_convention,
            format,
            out,
        } => {
            let spec = parse_probability(&p)?;
            let pf = spec.as_f64();
            let omega = omega.unwrap_or_else(|| default_omega(n));
            let convention = match q3_convention.as_str() {
                "ordered" => Q3Convention::Ordered,
                "unordered" => Q3Convention::Unordered,
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown Q3 convention {other:?} (ordered | unordered)"
                    )))
                }
            };
            let cfg = if with_predicates {
                let table = moment_table(n, r, &pf)?;
                let cfg = match predicate_samples {
                    Some(k) => PredicateConfig::estimate(
                        &table,
                        k,
                        &RngStream::new(seed, 1 << 48),
                        omega,
                        plaus_c,
                        plaus_delta,
                    )?,
                    None => {
                        let law = exact_distribution(n, r, &pf)?;
                        PredicateConfig::exact(&table, &law, omega, plaus_c, plaus_delta)?
                    }
                };
                Some(cfg.with_q3_convention(convention))
            } else {
                None
            };
            let summary =
                monte_carlo_stats(n, r, pf, samples, &RngStream::new(seed, 0), cfg.as_ref())?;
            let text = match format.as_str() {
                "csv" => summary.to_csv(),
                "json" => {
                    let mut entries: serde_json::Map<String, serde_json::Value> = summary
                        .entries
                        .iter()
                        .map(|(k, v)| {
                            (
                                k.clone(),
                                json!({
                                    "mean": format_real(v.mean),
                                    "stderr": format_real(v.stderr),
                                    "count": v.count,
                                }),
                            )
                        })
                        .collect();
                    if let Some(cfg) = &cfg {
                        if !cfg.estimate_stderr.is_empty() {
                            let se: serde_json::Map<String, serde_json::Value> = cfg
                                .estimate_stderr
                                .iter()
                                .map(|(k, v)| (k.clone(), json!(format_real(*v))))
                                .collect();
                            entries.insert(
                                "predicate_reference_stderr".into(),
                                serde_json::Value::Object(se),
                            );
                        }
                    }
                    format!("{}\n", serde_json::Value::Object(entries))
                }
                other => {
                    return Err(CliError::Validation(format!("unknown format {other:?}")))
                }
            };
            emit(&out, &text)
        }
        Command::Factors { input, n, r, p, seed, expected, save_graph, save_hypergraph, out } => {
            let (graph, hypergraph, p_spec) = match input {
                Some(path) => {
                    let text = fs::read_to_string(&path)?;
                    match parse_input(&text)? {
                        InputObject::Graph(g) => {
                            let h = clusterlab_core::cliques::clique_hypergraph(&g, r);
                            (Some(g), h, None)
                        }
                        InputObject::Hypergraph(h) => {
                            if h.r() != r {
                                return Err(CliError::Validation(format!(
                                    "input is {}-uniform but --r {} was given",
                                    h.r(),
                                    r
                                )));
                            }
                            (None, h, None)
                        }
                    }
                }
                None => {
                    let n = n.ok_or_else(|| {
                        CliError::Validation("need --input or both --n and --p".into())
                    })?;
                    let p = p.ok_or_else(|| {
                        CliError::Validation("need --input or both --n and --p".into())
                    })?;
                    let spec = parse_probability(&p)?;
                    let g = clusterlab_core::cliques::sample_gnp(
                        n,
                        spec.as_f64(),
                        &RngStream::new(seed, 0),
                    );
                    let h = clusterlab_core::cliques::clique_hypergraph(&g, r);
                    (Some(g), h, Some(spec))
                }
            };
            if let Some(path) = &save_graph {
                match &graph {
                    Some(g) => fs::write(path, g.to_text())?,
                    None => {
                        return Err(CliError::Validation(
                            "--save-graph needs a graph input or sampling mode".into(),
                        ))
                    }
                }
            }
            if let Some(path) = &save_hypergraph {
                fs::write(path, hypergraph.to_text())?;
            }
            let n_actual = hypergraph.n();
            let matchings = count_matchings(&hypergraph);
            let factor_count = graph.as_ref().map(|g| count_factors(g, r));
            let report = t_counts(&hypergraph);
            let mut obj = json!({
                "n": n_actual,
                "r": r,
                "clique_count": hypergraph.edge_count(),
                "cluster_report": report.to_json(),
            });
            match matchings {
                Ok(m) => obj["matching_count"] = json!(m.to_string()),
                Err(e) => obj["matching_count_error"] = json!(e.to_string()),
            }
            if let Some(f) = factor_count {
                match f {
                    Ok(f) => {
                        obj["factor_count"] = json!(f.to_string());
                        if let Ok(m) = count_matchings(&hypergraph) {
                            obj["factors_equal_matchings"] = json!(f == m);
                        }
                    }
                    Err(e) => obj["factor_count_error"] = json!(e.to_string()),
                }
            }
            if expected {
                let p_spec = p_spec.ok_or_else(|| {
                    CliError::Validation("--expected needs --n/--p sampling mode".into())
                })?;
                match p_spec {
                    ProbSpec::Exact(q) => {
                        let ef: Rational = expected_factors_exact(n_actual, r, &q)?;
                        obj["expected_factors"] = json!(ef.render());
                        let pi = q.powu(clusterlab_core::moments::binomial(r, 2) as u64);
                        let sigma: Rational = sigma_npi_value(n_actual, r, &pi)?;
                        obj["sigma_npi"] = json!(sigma.render());
                    }
                    ProbSpec::Float(x) => {
                        float_mode_warning();
                        let ef: f64 = expected_factors_exact(n_actual, r, &x)?;
                        obj["expected_factors"] = json!(format_real(ef));
                        let pi = x.powi(clusterlab_core::moments::binomial(r, 2) as i32);
                        obj["sigma_npi"] = json!(format_real(sigma_npi_value(n_actual, r, &pi)?));
                    }
                }
            }
            emit(&out, &format!("{obj}\n"))
        }
        Command::Shamir { n, r, seed, runs, stop_m, trace_output, out } => {
            if runs == 0 {
                return Err(CliError::Validation("need --runs >= 1".into()));
            }
            let summary = shamir_summary(n, r, seed, runs, stop_m, trace_output.as_deref())?;
            emit(&out, &summary)
        }
        Command::Verify { grid } => {
            let grid: Grid = grid.parse()?;
            let checks = run_identity_suite(grid);
            let mut first_failure = None;
            for check in &checks {
                let tag = if check.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {}  ({})", check.name, check.details);
                if !check.passed && first_failure.is_none() {
                    first_failure = Some(check.name.clone());
                }
            }
            if grid == Grid::Full {
                for n in [10usize, 11, 12] {
                    match clusterlab_core::verify::diagnostic_delta3_ratio(n) {
                        Ok((d3, mu_next, ratio)) => println!(
                            "DIAG  delta3/mu_(r+1) at r=5, p=n^(-2/5), n={n}: {} / {} = {}",
                            format_real(d3),
                            format_real(mu_next),
                            format_real(ratio)
                        ),
                        Err(e) => println!("DIAG  delta3 ratio unavailable at n={n}: {e}"),
                    }
                }
                // where the unnormalized model puts its mass at (6,3,p=1/5)
                {
                    let p = Rational::new(1.into(), 5.into());
                    let table = moment_table(6, 3, &p)?;
                    let law = exact_distribution(6, 3, &p)?;
                    let report = clusterlab_core::dist::model_mass_report(
                        &table,
                        clusterlab_core::dist::LambdaVariant::Full,
                        &law,
                    )?;
                    println!(
                        "DIAG  model mass at (6,3,1/5): total {} = realizable {} + unrealizable {}",
                        format_real(report.total),
                        format_real(report.realizable),
                        format_real(report.unrealizable)
                    );
                }
                // typicality trend: Pr(plausible) along an n-grid with p scaled
                // so that mu_r stays Theta(n^{1+theta}), theta = 0.2
                for n in [5usize, 6, 7] {
                    let mu_target = (n as f64).powf(1.2);
                    let n_members = clusterlab_core::moments::binomial(n, 3) as f64;
                    let p = (mu_target / n_members).powf(1.0 / 3.0);
                    let table = moment_table(n, 3, &p)?;
                    let law = exact_distribution(n, 3, &p)?;
                    let cfg = PredicateConfig::exact(&table, &law, default_omega(n), 1.0, 0.2)?;
                    let s = monte_carlo_stats(n, 3, p, 2000, &RngStream::new(0xd1a6, 0), Some(&cfg))?;
                    let rate = s.get("plausible_rate").unwrap();
                    println!(
                        "DIAG  Pr(plausible) at (n={n}, r=3, p={:.4}, mu=n^1.2): {} (stderr {})",
                        p,
                        format_real(rate.mean),
                        format_real(rate.stderr)
                    );
                }
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            println!("{passed}/{} checks passed", checks.len());
            match first_failure {
                Some(name) => Err(CliError::Identity(name)),
                None => Ok(()),
            }
        }
    }
}

/// Seeded parallel Shamir runs; aggregation is ordered by run index, so the
/// summary is identical for any worker count.
fn shamir_summary(
    n: usize,
    r: usize,
    seed: u64,
    runs: u64,
    stop_m: usize,
    trace_output: Option<&str>,
) -> Result<String, CliError> {
    use rayon::prelude::*;
    let traces: Vec<_> = (0..runs)
        .into_par_iter()
        .map(|run| {
            clusterlab_core::factors::shamir_process(
                n,
                r,
                &RngStream::new(seed, run),
                stop_m,
            )
        })
        .collect();
    let mut phi_sum: u128 = 0;
    let mut phi_sq_sum: u128 = 0;
    let steps = traces
        .first()
        .and_then(|t| t.as_ref().ok().map(|t| t.steps.len()))
        .unwrap_or(0);
    let mut alpha_sum = vec![0.0f64; steps];
    let mut alpha_sq_sum = vec![0.0f64; steps];
    let mut first_trace_csv = None;
    let mut gamma_first = None;
    for (i, trace) in traces.iter().enumerate() {
        let trace = trace.as_ref().map_err(|e| CliError::Validation(e.to_string()))?;
        let phi = trace.terminal_phi();
        phi_sum += phi;
        phi_sq_sum += phi * phi;
        for (t, step) in trace.steps.iter().enumerate() {
            let a = step.alpha.to_f64();
            alpha_sum[t] += a;
            alpha_sq_sum[t] += a * a;
        }
        if i == 0 {
            first_trace_csv = Some(trace.to_csv());
            gamma_first = trace.steps.first().map(|s| s.gamma.to_f64());
        }
    }
    if let (Some(path), Some(csv)) = (trace_output, &first_trace_csv) {
        fs::write(path, csv)?;
    }
    let runs_f = runs as f64;
    let phi_mean = phi_sum as f64 / runs_f;
    let phi_var = (phi_sq_sum as f64 / runs_f - phi_mean * phi_mean).max(0.0);
    let phi_se = if runs > 1 { (phi_var / (runs_f - 1.0)).sqrt() } else { f64::INFINITY };
    let phi0 = traces[0].as_ref().map_err(|e| CliError::Validation(e.to_string()))?.phi0;
    // expected product: phi0 prod (1 - gamma_t)
    let n_edges = clusterlab_core::moments::binomial(n, r) as usize;
    let blocks = (n / r) as f64;
    let mut expected = phi0 as f64;
    for t in 1..=steps {
        expected *= 1.0 - blocks / (n_edges - t + 1) as f64;
    }
    let alpha_stats: Vec<serde_json::Value> = (0..steps)
        .map(|t| {
            let mean = alpha_sum[t] / runs_f;
            let var = (alpha_sq_sum[t] / runs_f - mean * mean).max(0.0);
            let se = if runs > 1 { (var / (runs_f - 1.0)).sqrt() } else { f64::INFINITY };
            json!({
                "t": t + 1,
                "mean": format_real(mean),
                "stderr": format_real(se),
            })
        })
        .collect();
    let summary = json!({
        "n": n,
        "r": r,
        "runs": runs,
        "stop_m": stop_m,
        "steps": steps,
        "phi0": phi0.to_string(),
        "gamma_1": gamma_first.map(format_real),
        "phi_final_mean": format_real(phi_mean),
        "phi_final_stderr": format_real(phi_se),
        "phi_final_expected_product": format_real(expected),
        "alpha": alpha_stats,
    });
    Ok(format!("{summary}\n"))
}
