//! `igusa` — exact p-adic exponential sums, Igusa zeta functions from
//! resolution data, lct estimation and bound verification.
//!
//! Exit codes: 0 success, 1 check failure (lemma/bound violations present),
//! 2 usage error, 3 budget exceeded.

mod commands;
mod config;
mod output;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{CmdResult, SigmaSource};
use config::{pick, resolve_budget, FileConfig};
use output::Format;

#[derive(Parser)]
#[command(name = "igusa", version, about = "p-adic exponential sums and Igusa zeta functions by exact enumeration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Polynomial text, e.g. "x^2 + y^3" (variables x1..xn; x,y,z alias x1,x2,x3)
    #[arg(long)]
    poly: Option<String>,
    /// Number of variables
    #[arg(long)]
    nvars: Option<usize>,
    /// Output format: json | csv | plain
    #[arg(long)]
    format: Option<String>,
    /// Enumeration budget (points); default 10^8, env IGUSA_BUDGET
    #[arg(long)]
    budget: Option<u128>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// JSON run-config file; explicit flags override its fields
    #[arg(long)]
    config: Option<String>,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Direct exponential sum over a residue box, with the subsum triple
    Expsum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<u32>,
        /// full | origin | shifted
        #[arg(long)]
        variant: Option<String>,
        /// Base point for the shifted variant, e.g. "1,2"
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Option<Vec<i64>>,
        /// Dump the value histogram (text format) to this path
        #[arg(long)]
        dump_histogram: Option<String>,
    },
    /// Lift-count constancy, orbit constancy, and the Weil power-sum bound
    LemmaCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Levels m to check (default 3,4)
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<u32>>,
        /// Largest power-sum exponent d for the Weil check (default 12)
        #[arg(long)]
        weil_dmax: Option<u64>,
    },
    /// Denef's explicit zeta formula: coefficients both ways, pole ledger
    Zeta {
        #[command(flatten)]
        common: Common,
        /// Resolution-data JSON file
        #[arg(long)]
        data: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        /// Character label (exact order, index); default trivial (1, 0)
        #[arg(long)]
        order: Option<u64>,
        #[arg(long)]
        index: Option<u64>,
        /// Largest coefficient index to tabulate (default 20)
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Reconstruction from zeta coefficients against direct enumeration
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: Option<String>,
        /// full | origin | shifted (the box of the direct sum)
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Inclusive level range "lo,hi" (default 2,5)
        #[arg(long, value_delimiter = ',')]
        m_range: Option<Vec<u32>>,
        /// Unit residue u in E(u p^-m) (default 1)
        #[arg(long)]
        u: Option<u64>,
    },
    /// Log-canonical threshold: jet-route estimate, resolution route, sigma
    Lct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Largest jet level (default 6)
        #[arg(long)]
        mmax: Option<u32>,
        /// origin | full (default origin)
        #[arg(long = "box")]
        box_: Option<String>,
        /// Resolution-data JSON file for the exact route
        #[arg(long)]
        resolution: Option<String>,
    },
    /// Critical points/values mod p and the critical-value splitting
    Critical {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Level for the splitting (default 2)
        #[arg(long)]
        m: Option<u32>,
        /// Rational critical values, e.g. "-2,2" (default: integer search)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<i64>>,
        /// Coordinate bound for the integer critical-point search (default 10)
        #[arg(long)]
        search_bound: Option<u64>,
    },
    /// Bound sweep over a (p, m) grid with C fitting and the decay-model fit
    Verify {
        #[command(flatten)]
        common: Common,
        /// full | origin | shifted
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Option<Vec<i64>>,
        /// Decay exponent sigma (explicit value)
        #[arg(long)]
        sigma: Option<f64>,
        /// sigma source: explicit | resolution | jet (default explicit)
        #[arg(long)]
        sigma_source: Option<String>,
        /// Resolution-data file (for sigma_source=resolution)
        #[arg(long)]
        resolution: Option<String>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Inclusive level range "lo,hi" (default 1,5)
        #[arg(long, value_delimiter = ',')]
        m_range: Option<Vec<u32>>,
        /// Declared constant C; violations are reported against it
        #[arg(long)]
        declared_c: Option<f64>,
        /// Candidate decay exponents for the model fit, e.g. "0.5,1"
        #[arg(long, value_delimiter = ',')]
        fit_lambdas: Option<Vec<f64>>,
        /// Fit separately on residue classes of m mod this period (default 1)
        #[arg(long)]
        fit_period: Option<u32>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(res) => {
            match &res.output_path {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &res.text) {
                        eprintln!("error code=2: writing {path}: {e}");
                        std::process::exit(2);
                    }
                }
                None => print!("{}", res.text),
            }
            std::process::exit(if res.check_failed { 1 } else { 0 });
        }
        Err(err) => {
            let code = classify(&err);
            eprintln!("error code={code}: {err:#}");
            std::process::exit(code);
        }
    }
}

fn classify(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<igusa_core::Error>() {
        Some(igusa_core::Error::BudgetExceeded { .. }) => 3,
        _ => 2,
    }
}

fn setup_threads(threads: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn common_setup(common: &Common) -> Result<(FileConfig, Format, u128)> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    setup_threads(pick(common.threads, file.threads))?;
    let format: Format = pick(common.format.clone(), file.format.clone())
        .unwrap_or_else(|| "json".into())
        .parse()?;
    let budget = resolve_budget(common.budget, file.budget);
    Ok((file, format, budget))
}

fn run(cli: Cli) -> Result<CmdResult> {
    match cli.command {
        Command::Expsum {
            common,
            p,
            m,
            variant,
            y,
            dump_histogram,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let p = pick(p, file.p).ok_or_else(|| anyhow::anyhow!("--p is required"))?;
            let m = pick(m, file.m).ok_or_else(|| anyhow::anyhow!("--m is required"))?;
            let variant_name = pick(variant, file.variant).unwrap_or_else(|| "full".into());
            let y = pick(y, file.y);
            let variant = commands::parse_variant(&variant_name, y.as_deref(), r.nvars)?;
            commands::cmd_expsum(
                r,
                p,
                m,
                variant,
                dump_histogram,
                pick(common.output, file.output),
            )
        }
        Command::LemmaCheck {
            common,
            primes,
            m_list,
            weil_dmax,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let primes = pick(primes, file.primes)
                .ok_or_else(|| anyhow::anyhow!("--primes is required"))?;
            let m_list = pick(m_list, file.m_list).unwrap_or_else(|| vec![3, 4]);
            let weil_dmax = pick(weil_dmax, file.weil_dmax).unwrap_or(12);
            commands::cmd_lemma_check(
                r,
                primes,
                m_list,
                weil_dmax,
                pick(common.output, file.output),
            )
        }
        Command::Zeta {
            common,
            data,
            p,
            order,
            index,
            kmax,
        } => {
            let (file, format, _) = common_setup(&common)?;
            let data = pick(data, file.resolution_data)
                .ok_or_else(|| anyhow::anyhow!("--data is required"))?;
            let p = pick(p, file.p).ok_or_else(|| anyhow::anyhow!("--p is required"))?;
            let order = pick(order, file.order).unwrap_or(1);
            let index = pick(index, file.index).unwrap_or(0);
            let kmax = pick(kmax, file.kmax).unwrap_or(20);
            commands::cmd_zeta(
                data,
                p,
                order,
                index,
                kmax,
                format,
                pick(common.output, file.output),
            )
        }
        Command::Reconstruct {
            common,
            data,
            variant,
            y,
            primes,
            m_range,
            u,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let data = pick(data, file.resolution_data)
                .ok_or_else(|| anyhow::anyhow!("--data is required"))?;
            let primes = pick(primes, file.primes)
                .ok_or_else(|| anyhow::anyhow!("--primes is required"))?;
            let m_range = range_of(pick(m_range, file.m_range.map(|r| r.to_vec())), (2, 5))?;
            let variant_name = pick(variant, file.variant).unwrap_or_else(|| "full".into());
            let y = pick(y, file.y);
            let variant = commands::parse_variant(&variant_name, y.as_deref(), r.nvars)?;
            let u = pick(u, file.u).unwrap_or(1);
            commands::cmd_reconstruct(
                r,
                data,
                variant,
                primes,
                m_range,
                u,
                pick(common.output, file.output),
            )
        }
        Command::Lct {
            common,
            primes,
            mmax,
            box_,
            resolution,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let primes = pick(primes, file.primes)
                .ok_or_else(|| anyhow::anyhow!("--primes is required"))?;
            let mmax = pick(mmax, file.mmax).unwrap_or(6);
            let box_name = pick(box_, file.variant).unwrap_or_else(|| "origin".into());
            let resolution = pick(resolution, file.resolution_data);
            commands::cmd_lct(
                r,
                primes,
                mmax,
                box_name,
                resolution,
                pick(common.output, file.output),
            )
        }
        Command::Critical {
            common,
            primes,
            m,
            values,
            search_bound,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let primes = pick(primes, file.primes)
                .ok_or_else(|| anyhow::anyhow!("--primes is required"))?;
            let m = pick(m, file.m).unwrap_or(2);
            let values = pick(values, file.critical_values);
            let search_bound = pick(search_bound, file.search_bound).unwrap_or(10);
            commands::cmd_critical(
                r,
                primes,
                m,
                values,
                search_bound,
                pick(common.output, file.output),
            )
        }
        Command::Verify {
            common,
            variant,
            y,
            sigma,
            sigma_source,
            resolution,
            primes,
            m_range,
            declared_c,
            fit_lambdas,
            fit_period,
        } => {
            let (file, format, budget) = common_setup(&common)?;
            let r = commands::resolve_poly(
                pick(common.poly, file.poly),
                pick(common.nvars, file.nvars),
                budget,
                format,
            )?;
            let primes = pick(primes, file.primes)
                .ok_or_else(|| anyhow::anyhow!("--primes is required"))?;
            let m_range = range_of(pick(m_range, file.m_range.map(|r| r.to_vec())), (1, 5))?;
            let variant_name = pick(variant, file.variant).unwrap_or_else(|| "origin".into());
            let y = pick(y, file.y);
            let variant = commands::parse_variant(&variant_name, y.as_deref(), r.nvars)?;
            let sigma = pick(sigma, file.sigma);
            let source_name = pick(sigma_source, file.sigma_source).unwrap_or_else(|| {
                if sigma.is_some() {
                    "explicit".into()
                } else {
                    "jet".into()
                }
            });
            let resolution = pick(resolution, file.resolution_data);
            let source = match source_name.as_str() {
                "explicit" => SigmaSource::Explicit(sigma.ok_or_else(|| {
                    anyhow::anyhow!("--sigma is required for sigma_source=explicit")
                })?),
                "resolution" => SigmaSource::Resolution(resolution.ok_or_else(|| {
                    anyhow::anyhow!("--resolution is required for sigma_source=resolution")
                })?),
                "jet" => SigmaSource::Jet,
                other => anyhow::bail!("unknown sigma source '{other}' (explicit|resolution|jet)"),
            };
            let fit_lambdas = pick(fit_lambdas, file.fit_lambdas);
            let fit_period = pick(fit_period, file.fit_period).unwrap_or(1);
            commands::cmd_verify(
                r,
                variant,
                source,
                primes,
                m_range,
                pick(declared_c, file.declared_c),
                fit_lambdas,
                fit_period,
                pick(common.output, file.output),
            )
        }
    }
}

fn range_of(range: Option<Vec<u32>>, default: (u32, u32)) -> Result<(u32, u32)> {
    match range {
        None => Ok(default),
        Some(v) if v.len() == 2 => Ok((v[0], v[1])),
        Some(v) => anyhow::bail!("--m-range wants two values lo,hi; got {v:?}"),
    }
}
