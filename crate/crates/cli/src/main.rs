use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use covgen::covariant::{kappa_inv, semitransvectant};
use covgen::report::{DegreeOrderTable, ErrataReport};
use covgen::search::{load_state, resume_search, Engine, Recipe};
use covgen::{run_search, Mode, SearchConfig, SearchState, SemiInvariant, ZForm};

#[derive(Parser)]
#[command(name = "covgen", version, about = "Generating systems of covariants of binary forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dim C, sigma, dim S and delta for each degree
    Dims {
        /// degree of the binary form
        #[arg(long)]
        d: u32,
        /// last degree to compute
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value = "generic")]
        mode: Mode,
        /// worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// print the rows as JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Search for a minimal generating system degree by degree
    Run(RunArgs),
    /// Compare a finished octic run with the printed values
    Errata {
        /// saved state of a d = 8 paper-mode run (computed when omitted)
        #[arg(long)]
        state: Option<PathBuf>,
        /// last degree to compute
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        /// worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compute the semitransvectant [f, g]^r
    Transvect {
        /// `t`, a generator name or a product such as `ch4*tr6` or `dv3^2`
        f: String,
        /// second argument, same syntax as f
        g: String,
        /// transvection index
        r: u32,
        /// degree of the binary form
        #[arg(long)]
        d: u32,
        /// saved run whose generators may be named in f and g
        #[arg(long)]
        state: Option<PathBuf>,
        /// also print the full covariant
        #[arg(long)]
        covariant: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// degree of the binary form
    #[arg(long)]
    d: u32,
    /// last degree to compute
    #[arg(long)]
    max_degree: u32,
    /// `paper` pins the printed octic recipes; it equals `generic` for d != 8
    #[arg(long, default_value = "paper")]
    mode: Mode,
    /// write the state here after every degree
    #[arg(long)]
    out: Option<PathBuf>,
    /// continue from a saved state
    #[arg(long)]
    resume: Option<PathBuf>,
    /// worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// also check the two degrees after the last one
    #[arg(long)]
    verify_completeness: bool,
    /// print the generators' Z-forms
    #[arg(long)]
    zforms: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("covgen=info")).init();
    let start = Instant::now();
    let res = match Cli::parse().command {
        Command::Dims {
            d,
            max_degree,
            mode,
            threads,
            json,
        } => dims(d, max_degree, mode, threads, json),
        Command::Run(args) => run(args),
        Command::Errata {
            state,
            max_degree,
            threads,
        } => errata(state, max_degree, threads),
        Command::Transvect {
            f,
            g,
            r,
            d,
            state,
            covariant,
        } => transvect(&f, &g, r, d, state, covariant),
    };
    eprintln!("elapsed: {:.2?}", start.elapsed());
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dims(d: u32, max_degree: u32, mode: Mode, threads: Option<usize>, json: bool) -> Result<ExitCode> {
    let mut cfg = SearchConfig::new(d, max_degree, mode);
    cfg.threads = threads;
    let state = run_search(&cfg)?;
    if json {
        let rows: Vec<_> = state.rows.iter().map(|r| &r.dims).collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        print_rows(&state);
    }
    Ok(ExitCode::SUCCESS)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut cfg = SearchConfig::new(args.d, args.max_degree, args.mode);
    cfg.threads = args.threads;
    cfg.verify_completeness = args.verify_completeness;
    cfg.checkpoint = args.out.clone();
    let state = match &args.resume {
        Some(path) => {
            let saved = load_state(path).with_context(|| format!("loading {}", path.display()))?;
            resume_search(&cfg, &saved)?
        }
        None => run_search(&cfg)?,
    };
    print_state(&state, args.zforms);
    let missing = state.completeness.iter().any(|r| r.dims.delta > 0);
    Ok(if missing { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn print_state(state: &SearchState, zforms: bool) {
    println!("d = {}, mode = {}, seed = {:#x}", state.d, state.mode, state.seed);
    println!();
    print_rows(state);
    println!();
    println!("generators:");
    for g in &state.generators {
        println!("  {:<6} degree {:>2}  order {:>2}  {}", g.name, g.degree, g.order, g.recipe);
        if zforms {
            if let Ok(z) = ZForm::from_json(state.d, &g.zform) {
                println!("         {z}");
            }
        }
    }
    println!();
    println!("{}", DegreeOrderTable::from_state(state));
}

fn print_rows(state: &SearchState) {
    println!("degree  {:>8}  {:>8}  {:>8}  {:>5}  syzygies", "dim C", "sigma", "dim S", "delta");
    for r in &state.rows {
        let d = &r.dims;
        let how = serde_json::to_value(r.syzygies).ok();
        let how = how.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        println!(
            "{:>6}  {:>8}  {:>8}  {:>8}  {:>5}  {how}",
            d.degree, d.dim_c, d.sigma, d.dim_s, d.delta
        );
    }
    for r in &state.completeness {
        let d = &r.dims;
        let verdict = if d.delta == 0 { "complete" } else { "GENERATORS MISSING" };
        println!(
            "{:>6}  {:>8}  {:>8}  {:>8}  {:>5}  check: {verdict}",
            d.degree, d.dim_c, d.sigma, d.dim_s, d.delta
        );
    }
}

fn errata(state: Option<PathBuf>, max_degree: u32, threads: Option<usize>) -> Result<ExitCode> {
    let state = match state {
        Some(p) => load_state(&p).with_context(|| format!("loading {}", p.display()))?,
        None => {
            let mut cfg = SearchConfig::new(8, max_degree, Mode::Paper);
            cfg.threads = threads;
            run_search(&cfg)?
        }
    };
    let report = ErrataReport::build(&state)?;
    println!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn transvect(f: &str, g: &str, r: u32, d: u32, state: Option<PathBuf>, covariant: bool) -> Result<ExitCode> {
    if d == 0 {
        bail!("d must be at least 1");
    }
    let engine = match state {
        Some(p) => {
            let saved = load_state(&p).with_context(|| format!("loading {}", p.display()))?;
            if saved.d != d {
                bail!("{} is a run for d = {}, not d = {d}", p.display(), saved.d);
            }
            let cfg = SearchConfig::new(saved.d, saved.max_degree(), saved.mode);
            Some(Engine::resume(cfg, &saved)?)
        }
        None => None,
    };
    let left = Recipe::parse_product(f)?;
    let right = Recipe::parse_product(g)?;
    let fv = resolve(&left, d, engine.as_ref())?;
    let gv = resolve(&right, d, engine.as_ref())?;
    let max_r = fv.order().min(gv.order());
    if r > max_r {
        bail!("r = {r} is out of range: the orders are {} and {}", fv.order(), gv.order());
    }
    let label = Recipe::Semitransvectant {
        left: Box::new(left),
        right: Box::new(right),
        r,
    };
    match semitransvectant(&fv, &gv, r)? {
        None => println!("{label} = 0 (identically zero)"),
        Some(s) => {
            println!("{label} = {}", s.zform());
            println!("X-form: {}", s.xform());
            println!("degree {}, order {}, weight {}", s.degree(), s.order(), s.weight());
            if covariant {
                for (j, c) in kappa_inv(&s)?.coeffs().iter().enumerate() {
                    println!("c{j} = {c}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The semi-invariant a product spec denotes; `t` is always available.
fn resolve(spec: &Recipe, d: u32, engine: Option<&Engine>) -> Result<SemiInvariant> {
    let mut acc: Option<SemiInvariant> = None;
    for name in spec.references() {
        let g = match (name, engine) {
            ("t", _) => SemiInvariant::basic(d),
            (_, Some(e)) => e.semi_invariant(name).with_context(|| format!("unknown generator {name:?}"))?,
            (_, None) => bail!("unknown generator {name:?} (pass --state to use a saved run)"),
        };
        acc = Some(match acc {
            None => g,
            Some(a) => a.mul(&g),
        });
    }
    acc.context("empty product")
}
