//! `ytensor`: exact dimensions, sampling experiments and the verification
//! report.
//!
//! Exit codes: 0 on success, 1 when a check fails or a computation errors,
//! 2 on a usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ytensor_core::harness::{
    cmd_biane, cmd_bounds, cmd_constants, cmd_dims, cmd_enumerate, cmd_verify_all, shape_csv,
    ExperimentConfig, VerifyOptions,
};
use ytensor_core::rsk::{sample_dump, sample_plancherel, sample_schur_weyl};
use ytensor_core::{Error, Partition, QuadratureConfig, ShapeParam};

#[derive(Parser)]
#[command(
    name = "ytensor",
    version,
    about = "Isotypic components of (C^N)^{⊗n} under S_n"
)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Flags shared by the sampling experiments; they override `--config`.
#[derive(Args, Clone)]
struct Experiment {
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    /// Target `√n / N`; `N = round(√n / c)`.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

impl Experiment {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                ExperimentConfig::parse(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.n {
            cfg.n = Some(v);
        }
        if let Some(v) = self.big_n {
            cfg.big_n = Some(v);
            cfg.c = None;
        }
        if let Some(v) = self.c {
            cfg.c = Some(v);
            if self.big_n.is_none() {
                cfg.big_n = None;
            }
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact dimensions and measures of one diagram.
    Dims {
        /// Row lengths, e.g. "3,2,1".
        lambda: String,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// All diagrams with at most N rows, with the check Σ dim = N^n.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// -ln P(λ)/√n for sampled λ against the window (α_c - slack, β).
    Bounds {
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
    },
    /// Sup distance between sampled profiles and the limit shape.
    Biane {
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [400usize, 2500, 10000])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bound on the median at the largest n.
        #[arg(long)]
        gate: Option<f64>,
    },
    /// Every identity check; exit 1 if any fails.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_delimiter = ',')]
        c_grid: Option<Vec<f64>>,
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_h: f64,
    },
    /// α_c and β over a grid of c.
    Constants {
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0])]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Ω_c on a uniform grid, as CSV.
    Shape {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
    },
    /// Corner points of the rotated profile of one diagram, as CSV.
    Profile { lambda: String },
    /// Sampled shapes, one per line.
    Sample {
        #[arg(long)]
        n: usize,
        /// Alphabet size; omit for the Plancherel measure.
        #[arg(long = "N")]
        big_n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A run outcome: the text to emit and whether the checks passed.
struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true }
    }
}

fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn parse_lambda(s: &str) -> Result<Partition, Error> {
    s.parse()
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let csv = cli.format == Format::Csv;
    let out = match &cli.command {
        Command::Dims { lambda, big_n } => {
            let r = cmd_dims(&parse_lambda(lambda)?, *big_n)?;
            if csv {
                Outcome::ok(format!(
                    "partition,N,dim_sym,dim_gl,dim_iso,plancherel,schur_weyl\n\"{}\",{},{},{},{},{},{}\n",
                    r.partition, r.big_n, r.dim_sym, r.dim_gl, r.dim_iso, r.plancherel, r.schur_weyl
                ))
            } else {
                Outcome::ok(json(&r)?)
            }
        }
        Command::Enumerate { n, big_n } => {
            let r = cmd_enumerate(*n, *big_n)?;
            let text = if csv {
                format!(
                    "{}# sum={} expected={} pass={}\n",
                    r.csv, r.total, r.expected, r.pass
                )
            } else {
                json(&r)?
            };
            Outcome { text, pass: r.pass }
        }
        Command::Bounds { exp, slack } => {
            let cfg = exp.resolve()?;
            let r = cmd_bounds(&cfg, *slack)?;
            let text = if csv { r.to_csv() } else { r.to_json() + "\n" };
            Outcome { text, pass: r.pass }
        }
        Command::Biane {
            ns,
            c,
            samples,
            seed,
            gate,
        } => {
            let r = cmd_biane(ns, *c, *samples, *seed, *gate)?;
            let text = if csv {
                let mut t = String::new();
                for run in &r.runs {
                    t.push_str(&run.to_csv());
                }
                t
            } else {
                json(&r)?
            };
            Outcome { text, pass: r.pass }
        }
        Command::Verify {
            seed,
            tol,
            c_grid,
            perturb_h,
        } => {
            let mut opts = VerifyOptions {
                quad: QuadratureConfig::new(
                    *tol,
                    *tol,
                    QuadratureConfig::default().max_subdivisions,
                )?,
                seed: *seed,
                h_shift: *perturb_h,
                ..VerifyOptions::default()
            };
            if let Some(g) = c_grid {
                opts.c_grid = g.clone();
            }
            let r = cmd_verify_all(&opts);
            let text = if csv {
                let mut t = String::from("test,relation,lhs,rhs,abs_err,tol,pass,params\n");
                for c in &r.checks {
                    t.push_str(&format!(
                        "{},{},{},{},{},{},{},\"{}\"\n",
                        c.test,
                        serde_json::to_value(c.relation)?.as_str().unwrap_or(""),
                        c.lhs,
                        c.rhs,
                        c.abs_err,
                        c.tol,
                        c.pass,
                        c.params.to_string().replace('"', "\"\"")
                    ));
                }
                t
            } else {
                json(&r)?
            };
            Outcome { text, pass: r.pass }
        }
        Command::Constants { c_grid, tol } => {
            let quad =
                QuadratureConfig::new(*tol, *tol, QuadratureConfig::default().max_subdivisions)?;
            let table = cmd_constants(c_grid, &quad)?;
            if csv {
                Outcome::ok(table)
            } else {
                let rows: Vec<serde_json::Value> = table
                    .lines()
                    .skip(1)
                    .map(|l| {
                        let v: Vec<f64> = l
                            .split(',')
                            .map(|x| x.parse().unwrap_or(f64::NAN))
                            .collect();
                        serde_json::json!({"c": v[0], "alpha": v[1], "beta": v[2]})
                    })
                    .collect();
                Outcome::ok(json(&rows)?)
            }
        }
        Command::Shape { c, step } => Outcome::ok(shape_csv(ShapeParam::new(*c)?, *step)?),
        Command::Profile { lambda } => Outcome::ok(parse_lambda(lambda)?.profile()?.to_csv()),
        Command::Sample {
            n,
            big_n,
            samples,
            seed,
        } => {
            let shapes = match big_n {
                Some(m) => sample_schur_weyl(*n, *m, *seed, *samples)?,
                None => sample_plancherel(*n, *seed, *samples)?,
            };
            Outcome::ok(sample_dump(*n, *big_n, *seed, &shapes))
        }
    };
    Ok(out)
}

fn is_usage_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::Config(_) | Error::InvalidPartition(_) | Error::Limit(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&cli).and_then(|o| {
        match &cli.out {
            Some(path) => std::fs::write(path, &o.text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", o.text),
        }
        Ok(o)
    });
    match outcome {
        Ok(o) if o.pass => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
