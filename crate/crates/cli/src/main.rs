//! `exminor`: generate graphs, embed minors, verify models, compute cuts.
//!
//! Exit codes: 0 model (or success), 2 sparse-cut certificate, 3 failure
//! (including an invalid model in `verify`), 1 usage or I/O error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use exminor::embed::{embed_minor_report, EmbedConfig, EmbedOutcome, SizeGuard};
use exminor::generators::{generate, GenSpec, Kind};
use exminor::minor::{verify_model, MinorModel, Verdict};
use exminor::{parse_rational, rational_below, rng, spectral, Graph, Rational};

use report::RunReport;

const EXIT_MODEL: u8 = 0;
const EXIT_IO: u8 = 1;
const EXIT_CERTIFICATE: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "exminor", version, about = "Minor embeddings into expanders, or a sparse cut")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Cycle,
    Path,
    Grid,
    Clique,
    Barbell,
    RandomRegular,
    Gnp,
    TwoExpandersBridge,
    Petersen,
    Hypercube,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Permissive,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum CutMode {
    Sweep,
    Exact,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Edge probability for gnp.
        #[arg(long)]
        p: Option<f64>,
        /// Grid rows.
        #[arg(long)]
        a: Option<usize>,
        /// Grid columns.
        #[arg(long)]
        b: Option<usize>,
        /// Clique size for barbell, dimension for hypercube.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed the target as a minor of the host, or certify the host is not
    /// an alpha-expander.
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Expansion `p/q`, or `auto` for lambda2 / 2 rounded down.
        #[arg(long)]
        alpha: String,
        /// Drawn from entropy (and printed) when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 5)]
        retries: usize,
        #[arg(long, value_enum, default_value = "permissive")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Constant `c` in rho.
        #[arg(long, default_value_t = 1)]
        rho_c: u64,
        /// Constant in the strict size bound.
        #[arg(long, default_value_t = 1.0)]
        size_c: f64,
    },
    /// Check a model file against host and target.
    Verify {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Compute a sparse cut by spectral sweep or exhaustive search.
    Cut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "sweep")]
        mode: CutMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CmdResult = Result<u8, String>;

fn need<T>(v: Option<T>, flag: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("--{flag} is required for this kind"))
}

fn load(path: &Path) -> Result<Graph, String> {
    Graph::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    n: Option<usize>,
    d: Option<usize>,
    p: Option<f64>,
    a: Option<usize>,
    b: Option<usize>,
    k: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
) -> CmdResult {
    let kind = match kind {
        GenKind::Cycle => Kind::Cycle(need(n, "n")?),
        GenKind::Path => Kind::Path(need(n, "n")?),
        GenKind::Grid => Kind::Grid(need(a, "a")?, need(b, "b")?),
        GenKind::Clique => Kind::Clique(need(n, "n")?),
        GenKind::Barbell => Kind::Barbell(need(k, "k")?),
        GenKind::RandomRegular => Kind::RandomRegular(need(n, "n")?, need(d, "d")?),
        GenKind::Gnp => Kind::Gnp(need(n, "n")?, need(p, "p")?),
        GenKind::TwoExpandersBridge => Kind::TwoExpandersBridge(need(n, "n")?, need(d, "d")?),
        GenKind::Petersen => Kind::Petersen,
        GenKind::Hypercube => Kind::Hypercube(need(k, "k")?),
    };
    let g = generate(&GenSpec { kind, seed }).map_err(|e| e.to_string())?;
    let text = g.to_edge_list();
    match out {
        Some(path) => write(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_MODEL)
}

fn resolve_alpha(spec: &str, g: &Graph) -> Result<Rational, String> {
    if spec == "auto" {
        let l = spectral::lambda2(g, spectral::DEFAULT_TOL).map_err(|e| e.to_string())?;
        return Ok(rational_below(l.lambda2 / 2.0, 1000));
    }
    parse_rational(spec).ok_or_else(|| format!("cannot parse alpha {spec:?}; expected p/q"))
}

struct EmbedArgs {
    host: PathBuf,
    target: PathBuf,
    alpha: String,
    seed: Option<u64>,
    retries: usize,
    mode: Mode,
    trials: usize,
    out_dir: PathBuf,
    rho_c: u64,
    size_c: f64,
}

fn cmd_embed(args: EmbedArgs) -> CmdResult {
    let g = load(&args.host)?;
    let h = load(&args.target)?;
    let alpha = resolve_alpha(&args.alpha, &g)?;
    let seed = match args.seed {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            println!("seed = {s}");
            s
        }
    };
    fs::create_dir_all(&args.out_dir).map_err(|e| format!("{}: {e}", args.out_dir.display()))?;
    let trials = args.trials.max(1);
    let suffix = |i: usize| if trials == 1 { String::new() } else { format!(".{i}") };
    let codes: Vec<CmdResult> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = if trials == 1 { seed } else { rng::stream(seed, i as u64) };
            let cfg = EmbedConfig {
                alpha,
                max_retries: args.retries,
                seed: trial_seed,
                rho_c: args.rho_c,
                size_guard: match args.mode {
                    Mode::Permissive => SizeGuard::Permissive,
                    Mode::Strict => SizeGuard::Strict,
                },
                size_c: args.size_c,
                ..EmbedConfig::new(alpha)
            };
            let started = Instant::now();
            let result = embed_minor_report(&g, &cfg, &h);
            let elapsed = started.elapsed();
            let sfx = suffix(i);
            let report_path = args.out_dir.join(format!("report{sfx}.txt"));
            let mut report = RunReport::new(&cfg, &g, &h);
            let code = match result {
                Err(e) => {
                    report.error(&e.to_string());
                    eprintln!("embed: {e}");
                    EXIT_FAILED
                }
                Ok(r) => {
                    report.stats(&r.stats);
                    match &r.outcome {
                        EmbedOutcome::Model(m) => {
                            write(&args.out_dir.join(format!("model{sfx}.txt")), &m.to_text())?;
                            report.outcome("model");
                            EXIT_MODEL
                        }
                        EmbedOutcome::NotAnExpander(cut) => {
                            write(&args.out_dir.join(format!("cut{sfx}.txt")), &cut.to_text())?;
                            report.certificate(cut);
                            println!("sparsity: {}/{}", cut.sparsity.numer(), cut.sparsity.denom());
                            EXIT_CERTIFICATE
                        }
                        EmbedOutcome::Failed(failures) => {
                            report.failures(failures);
                            EXIT_FAILED
                        }
                    }
                }
            };
            // Timings stay out of the report so that reruns are byte-identical.
            eprintln!("trial {i}: exit {code} in {} ms", elapsed.as_millis());
            write(&report_path, &report.to_text())?;
            Ok(code)
        })
        .collect();
    let mut worst = EXIT_MODEL;
    for c in codes {
        let c = c?;
        // Failure outranks certificate outranks model.
        if c == EXIT_FAILED || (c == EXIT_CERTIFICATE && worst == EXIT_MODEL) {
            worst = c;
        }
    }
    Ok(worst)
}

fn cmd_verify(host: &Path, target: &Path, model: &Path) -> CmdResult {
    let g = load(host)?;
    let h = load(target)?;
    let text = fs::read_to_string(model).map_err(|e| format!("{}: {e}", model.display()))?;
    let m = MinorModel::parse(&text).map_err(|e| format!("{}: {e}", model.display()))?;
    match verify_model(&g, &h, &m) {
        Verdict::Valid => {
            println!("valid");
            Ok(EXIT_MODEL)
        }
        Verdict::Violations(v) => {
            for x in v {
                println!("{x}");
            }
            Ok(EXIT_FAILED)
        }
    }
}

fn cmd_cut(graph: &Path, mode: CutMode, out: Option<PathBuf>) -> CmdResult {
    let g = load(graph)?;
    let cut = match mode {
        CutMode::Sweep => spectral::sweep_cut(&g, spectral::DEFAULT_TOL).map_err(|e| e.to_string())?,
        CutMode::Exact => spectral::exact_expansion(&g).map_err(|e| e.to_string())?.1,
    };
    match out {
        Some(path) => {
            write(&path, &cut.to_text())?;
            println!("sparsity: {}/{}", cut.sparsity.numer(), cut.sparsity.denom());
        }
        None => print!("{}", cut.to_text()),
    }
    Ok(EXIT_MODEL)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_MODEL };
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Gen { kind, n, d, p, a, b, k, seed, out } => cmd_gen(kind, n, d, p, a, b, k, seed, out),
        Cmd::Embed { host, target, alpha, seed, retries, mode, trials, out_dir, rho_c, size_c } => {
            cmd_embed(EmbedArgs { host, target, alpha, seed, retries, mode, trials, out_dir, rho_c, size_c })
        }
        Cmd::Verify { host, target, model } => cmd_verify(&host, &target, &model),
        Cmd::Cut { graph, mode, out } => cmd_cut(&graph, mode, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("exminor: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
