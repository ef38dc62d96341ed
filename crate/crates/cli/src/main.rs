//! `kecc`: generate graphs, compute components, check them against the oracle.

mod bench;

use clap::{Parser, Subcommand, ValueEnum};
use kecc_core::decomposition::{
    decompose_kecc_from, verify_decomposition, DecompError, SearchMode,
};
use kecc_core::driver::{compute_k2ecc_from, DriverError, Mode};
use kecc_core::flow::lambda_bounded;
use kecc_core::format::{parse_graph, write_graph, FormatError, PartitionFile};
use kecc_core::gen::{generate, GenError, Model};
use kecc_core::local_search::{MSetResult, Searcher};
use kecc_core::oracle::{ecc_components, OracleError};
use kecc_core::rng::stream;
use kecc_core::Digraph;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("decomposition failed: {0}")]
    Decomp(DecompError),
    #[error(transparent)]
    Driver(DriverError),
    #[error("partitions differ: {0}")]
    Mismatch(String),
}

impl From<DriverError> for CliError {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Decomp(d) => CliError::Decomp(d),
            other => CliError::Driver(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Decomp(_) => 2,
            CliError::Mismatch(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "kecc",
    version,
    about = "Edge-connected components of directed multigraphs"
)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelName {
    Cyc,
    Kn,
    Blocks,
    RandomKec,
    Chain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Det,
    Rand,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Det => Mode::Det,
            ModeArg::Rand => Mode::Rand,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Smoke,
    Scaling,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated graph.
    Gen {
        model: ModelName,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        p: usize,
        #[arg(long, default_value_t = 6)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 3)]
        blocks: usize,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print min(λ(from, to), cap); ids are 1-based.
    Lambda {
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = usize::MAX)]
        cap: usize,
    },
    /// Minimal k-out set containing v and not s, searched with volume bound delta.
    Mset {
        graph: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, value_enum, default_value = "det")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// (k+1)-ECC decomposition; pieces are written to `--out-dir` if given.
    Decompose {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, value_enum, default_value = "det")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Check every guarantee with the oracle (small graphs only).
        #[arg(long)]
        check: bool,
    },
    /// (k+2)-edge-connected components as a JSON partition.
    Components {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, value_enum, default_value = "rand")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 1-based root vertex.
        #[arg(long = "s-override")]
        s_override: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Brute-force c-edge-connected components as a JSON partition.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare two partition files on their common ordinary vertices.
    Verify { got: PathBuf, truth: PathBuf },
    /// Timing runs written as CSV.
    Bench {
        #[arg(long, value_enum, default_value = "smoke")]
        suite: Suite,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.into(),
            source,
        }),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Digraph, CliError> {
    parse_graph(&read(path)?).map_err(|source| CliError::Format {
        path: path.into(),
        source,
    })
}

fn vertex(g: &Digraph, id: usize, what: &str) -> Result<usize, CliError> {
    if id == 0 || id > g.vertex_bound() {
        return Err(CliError::Usage(format!(
            "{what} {id} out of range 1..={}",
            g.vertex_bound()
        )));
    }
    Ok(id - 1)
}

fn model_of(name: ModelName, c: &Command) -> Model {
    let Command::Gen {
        n,
        k,
        p,
        q,
        extra,
        blocks,
        size,
        ..
    } = *c
    else {
        unreachable!()
    };
    match name {
        ModelName::Cyc => Model::Cyc { n, k },
        ModelName::Kn => Model::Kn { n },
        ModelName::Blocks => Model::Blocks { p, q, k },
        ModelName::RandomKec => Model::RandomKec { n, k, extra },
        ModelName::Chain => Model::Chain { blocks, size, k },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.cmd {
        c @ Command::Gen {
            model, seed, out, ..
        } => {
            let m = model_of(*model, c);
            let g = generate(&m, *seed)?;
            emit(
                out.as_deref(),
                &write_graph(&g, Some(&format!("{} seed {seed}", m.label()))),
            )
        }
        Command::Lambda {
            graph,
            from,
            to,
            cap,
        } => {
            let g = load(graph)?;
            let (u, v) = (vertex(&g, *from, "--from")?, vertex(&g, *to, "--to")?);
            println!("{}", lambda_bounded(&g, u, v, *cap));
            Ok(())
        }
        Command::Mset {
            graph,
            v,
            s,
            k,
            delta,
            mode,
            seed,
        } => {
            let g = load(graph)?;
            let (v, s) = (vertex(&g, *v, "--v")?, vertex(&g, *s, "--s")?);
            let volume = match mode {
                ModeArg::Exact => g.m_live(),
                _ => delta.unwrap_or(g.m_live()),
            };
            let lam = lambda_bounded(&g, v, s, *k);
            if lam < *k {
                return Err(CliError::Usage(format!("λ(v,s) = {lam} is below --k {k}")));
            }
            let mut searcher = Searcher::new(&g);
            let r = match mode {
                ModeArg::Rand => {
                    searcher.randomized(v, s, *k, volume, &mut stream(*seed, "cli/mset", 0))
                }
                _ => searcher.local_search(v, s, *k, volume),
            };
            let json = match r {
                MSetResult::Found(set) => serde_json::json!({
                    "result": "found",
                    "members": set.members.iter().map(|x| x + 1).collect::<Vec<_>>(),
                    "out": set.out_count,
                    "vol": set.vol,
                }),
                _ => serde_json::json!({ "result": "empty" }),
            };
            println!("{json}");
            Ok(())
        }
        Command::Decompose {
            graph,
            k,
            delta,
            mode,
            seed,
            out_dir,
            check,
        } => {
            let g = load(graph)?;
            let s = *g
                .ordinary_vertices()
                .first()
                .ok_or_else(|| CliError::Usage("no ordinary vertex".into()))?;
            let search = match mode {
                ModeArg::Rand => SearchMode::Randomized,
                _ => SearchMode::Deterministic,
            };
            let d =
                decompose_kecc_from(&g, s, *k, *delta, search, *seed).map_err(CliError::Decomp)?;
            let total_v: usize = d.pieces.iter().map(|p| p.graph.n_live()).sum();
            let total_e: usize = d.pieces.iter().map(|p| p.graph.m_live()).sum();
            println!(
                "pieces {} vertices {total_v} edges {total_e}",
                d.pieces.len()
            );
            for (i, p) in d.pieces.iter().enumerate() {
                let ids: Vec<String> = p.ordinary.iter().map(|v| (v + 1).to_string()).collect();
                println!(
                    "piece {i}: n={} m={} ordinary={}",
                    p.graph.n_live(),
                    p.graph.m_live(),
                    ids.join(",")
                );
                if let Some(dir) = out_dir {
                    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    let path = dir.join(format!("piece-{i}.gr"));
                    let text = write_graph(
                        &p.graph,
                        Some(&format!("ordinary originals {}", ids.join(" "))),
                    );
                    emit(Some(&path), &text)?;
                }
            }
            if *check {
                let r = verify_decomposition(&g, &d.pieces, *k)?;
                match r.first_violation() {
                    None => println!("check passed"),
                    Some(v) => {
                        return Err(CliError::Mismatch(format!(
                            "{} violated ({:?})",
                            v.bullet, v.pair
                        )))
                    }
                }
            }
            Ok(())
        }
        Command::Components {
            graph,
            k,
            delta,
            mode,
            seed,
            s_override,
            out,
        } => {
            let g = load(graph)?;
            let root = s_override
                .map(|s| vertex(&g, s, "--s-override"))
                .transpose()?;
            let mode: Mode = (*mode).into();
            let r = compute_k2ecc_from(&g, root, *k, *delta, mode, *seed)?;
            let file = PartitionFile::new(
                &r.partition,
                &g.ordinary_vertices(),
                *k,
                mode.name(),
                *seed,
                *delta,
            );
            emit(out.as_deref(), &file.to_json())
        }
        Command::Oracle { graph, c, out } => {
            let g = load(graph)?;
            let p = ecc_components(&g, *c)?;
            let file = PartitionFile::new(
                &p,
                &g.ordinary_vertices(),
                c.saturating_sub(2),
                "oracle",
                0,
                0.0,
            );
            emit(out.as_deref(), &file.to_json())
        }
        Command::Verify { got, truth } => {
            let parse = |p: &Path| {
                PartitionFile::from_json(&read(p)?).map_err(|source| CliError::Format {
                    path: p.into(),
                    source,
                })
            };
            let (a, b) = (parse(got)?, parse(truth)?);
            if a.n != b.n {
                return Err(CliError::Mismatch(format!("n = {} vs {}", a.n, b.n)));
            }
            let common: Vec<usize> = a
                .ordinary
                .iter()
                .copied()
                .filter(|v| b.ordinary.contains(v))
                .map(|v| v - 1)
                .collect();
            let pa = a.partition().map_err(|source| CliError::Format {
                path: got.clone(),
                source,
            })?;
            let pb = b.partition().map_err(|source| CliError::Format {
                path: truth.clone(),
                source,
            })?;
            for (i, &u) in common.iter().enumerate() {
                for &w in &common[i + 1..] {
                    if pa.same_block(u, w) != pb.same_block(u, w) {
                        let how = if pb.same_block(u, w) {
                            "separated"
                        } else {
                            "merged"
                        };
                        return Err(CliError::Mismatch(format!(
                            "vertices {} and {} {how}",
                            u + 1,
                            w + 1
                        )));
                    }
                }
            }
            println!(
                "match: {} ordinary vertices, {} blocks",
                common.len(),
                pb.restricted_blocks(&common).len()
            );
            Ok(())
        }
        Command::Bench { suite, out, seed } => {
            let rows = match suite {
                Suite::Smoke => bench::smoke(*seed),
                Suite::Scaling => bench::scaling(*seed),
            }?;
            let text = bench::to_csv(&rows).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
