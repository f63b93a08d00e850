//! `tcf` — build and certify tight-cycle-free uniform hypergraphs.
//!
//! One operation per invocation; identical invocations (including the seed)
//! produce byte-identical files and stdout, with timing isolated to its own
//! suppressible line. Exit codes: 0 success, 64 usage, 65 domain error, 74
//! i/o error; `detect` exits 0 on free, 1 on witness found, 2 on budget
//! abort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use tcf_core::constructions::{self, PipelineParams};
use tcf_core::detector::{self, DetectOptions, SearchResult};
use tcf_core::edge_list;
use tcf_core::extremal::{self, ExtremalCache};
use tcf_core::girth::{self, GirthGenConfig, RemovalStrategy};
use tcf_core::packing;
use tcf_core::RngSeed;

const EXIT_USAGE: u8 = 64;
const EXIT_DOMAIN: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "tcf",
    version,
    about = "Construct and certify tight-cycle-free uniform hypergraphs",
    after_help = "Files use the edge-list format: comment lines, a header \
\"r n m\", then m sorted edges. Seeds default to 0xC0FFEE; pass --seed random \
for entropy."
)]
struct Cli {
    /// Seed for randomized subcommands: a number (0x-prefixed allowed) or
    /// "random"
    #[arg(long, global = true, default_value = "0xC0FFEE")]
    seed: String,

    /// Output rendering for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Suppress timing and progress lines
    #[arg(long, global = true)]
    quiet: bool,

    /// Worker threads for parallel detection (default: all cores). Never
    /// affects results, only timing.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Delete,
    Greedy,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a bipartite subgraph of K_{n,n} with no cycle of length <= 2k
    Girth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Initial edge probability scale
        #[arg(long, default_value_t = 0.25)]
        scale: f64,
        /// Density exponent (target edge count n^(1 + c/k))
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Strategy::Delete)]
        strategy: Strategy,
        #[arg(long, default_value_t = 256)]
        retries: usize,
        /// Output file for the bipartite edge list
        #[arg(long)]
        out: PathBuf,
    },
    /// Pack random copies of a template into edge-disjoint subgraphs
    Pack {
        /// Template bipartite graph (edge-list file with a bipartite comment)
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Number of copies; defaults to floor(n / k)
        #[arg(long)]
        t: Option<usize>,
        /// Output file for the family stream
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline to an r-uniform tight-cycle-free hypergraph
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        /// Override the derived k
        #[arg(long)]
        k: Option<usize>,
        /// Output file for the hypergraph edge list
        #[arg(long)]
        out: PathBuf,
    },
    /// Raise uniformity by one with a fresh apex class
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
        /// Apex class size; defaults to the current vertex count
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search a hypergraph for a tight cycle
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        /// Minimum cycle length (default r + 1)
        #[arg(long)]
        min: Option<usize>,
        /// Maximum cycle length (default n)
        #[arg(long)]
        max: Option<usize>,
        /// Abort after this many search states
        #[arg(long)]
        budget: Option<u64>,
        /// Explore root states concurrently
        #[arg(long)]
        parallel: bool,
        /// Use the fast part-aligned check (requires tripartite metadata)
        #[arg(long)]
        fast: bool,
    },
    /// Exact maximum edge count of a tight-cycle-free hypergraph
    Extremal {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Node budget; exceeded searches return a certified lower bound
        #[arg(long)]
        budget: Option<u64>,
        /// Persistent result cache file
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Compare construction densities against the baselines (CSV)
    Bench {
        #[arg(long)]
        r: usize,
        /// Vertex budgets, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Pipeline seeds, comma separated (defaults to the global seed)
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Output CSV file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Io(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Domain(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn parse_seed(s: &str) -> Result<RngSeed, CliError> {
    if s.eq_ignore_ascii_case("random") {
        return Ok(RngSeed(rand_seed()));
    }
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed
        .map(RngSeed)
        .map_err(|_| CliError::Usage(format!("bad --seed {s:?}: expected a u64 or \"random\"")))
}

fn rand_seed() -> u64 {
    // entropy is opt-in; hash the only ambient sources we need
    use std::hash::{BuildHasher, Hasher};
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0),
    );
    h.finish()
}

/// Key-value report writer for both output formats.
struct Emitter {
    format: Format,
    quiet: bool,
}

impl Emitter {
    fn kv(&self, pairs: &[(&str, String)]) {
        match self.format {
            Format::Text => {
                for (k, v) in pairs {
                    println!("{k} {v}");
                }
            }
            Format::Machine => {
                println!("format=1");
                for (k, v) in pairs {
                    println!("{k}={v}");
                }
            }
        }
    }

    fn timing(&self, started: Instant) {
        if self.quiet {
            return;
        }
        let ms = started.elapsed().as_millis();
        match self.format {
            Format::Text => println!("time_ms {ms}"),
            Format::Machine => println!("time_ms={ms}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(t) = cli.threads {
        // only affects timing; ignore re-initialization in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let started = Instant::now();
    let seed = parse_seed(&cli.seed)?;
    let emit = Emitter {
        format: cli.format,
        quiet: cli.quiet,
    };
    match cli.cmd {
        Cmd::Girth {
            n,
            k,
            scale,
            c,
            strategy,
            retries,
            out,
        } => {
            let cfg = GirthGenConfig {
                density_exponent_c: c,
                initial_edge_probability_scale: scale,
                removal_strategy: match strategy {
                    Strategy::Delete => RemovalStrategy::DeleteRandomEdgePerShortCycle,
                    Strategy::Greedy => RemovalStrategy::GreedyInsertion,
                },
                max_retries: retries,
            };
            let g = girth::generate_high_girth(n, k, &cfg, seed).map_err(domain)?;
            write_file(&out, &edge_list::serialize_bipartite(&g))?;
            let measured = girth::shortest_cycle_length(&g);
            emit.kv(&[
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("seed", seed.0.to_string()),
                ("edges", g.edge_count().to_string()),
                (
                    "girth",
                    measured.map_or("infinity".into(), |g| g.to_string()),
                ),
                ("out", out.display().to_string()),
            ]);
            emit.timing(started);
            Ok(0)
        }
        Cmd::Pack { input, k, t, out } => {
            let template = edge_list::parse_bipartite(&read_file(&input)?).map_err(domain)?;
            if template.n_left() != template.n_right() {
                return Err(CliError::Domain(format!(
                    "template sides differ: {} vs {}",
                    template.n_left(),
                    template.n_right()
                )));
            }
            if k == 0 {
                return Err(CliError::Domain("k must be at least 1".into()));
            }
            let t = t.unwrap_or(template.n_left() / k);
            let fam = packing::pack(&template, t, k, seed).map_err(domain)?;
            write_file(&out, &packing::serialize_family(&fam))?;
            let stats = packing::coverage_stats(&fam);
            emit.kv(&[
                ("n", fam.n().to_string()),
                ("k", fam.k().to_string()),
                ("t", fam.t().to_string()),
                ("seed", seed.0.to_string()),
                ("template_edges", fam.template_edge_count().to_string()),
                ("edge_sum", stats.edge_sum.to_string()),
                ("coverage_ratio", stats.coverage_ratio.exact.to_string()),
                (
                    "coverage_ratio_float",
                    stats.coverage_ratio.approx.to_string(),
                ),
                (
                    "predicted_missing_fraction",
                    stats.predicted_missing_fraction.to_string(),
                ),
                ("out", out.display().to_string()),
            ]);
            emit.timing(started);
            Ok(0)
        }
        Cmd::Construct { r, n, alpha, k, out } => {
            let params = PipelineParams {
                n,
                alpha,
                k_override: k,
                seed,
                girth_cfg: GirthGenConfig::default(),
                target_uniformity: r,
            };
            let (h, report) = constructions::construct_r_uniform(&params).map_err(domain)?;
            write_file(&out, &edge_list::serialize_hypergraph(&h))?;
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Machine => print!("{}", report.to_machine()),
            }
            emit.timing(started);
            Ok(0)
        }
        Cmd::Lift { input, m, out } => {
            let h = edge_list::parse_hypergraph(&read_file(&input)?).map_err(domain)?;
            let m = m.unwrap_or(h.n_vertices());
            let lifted = constructions::cone_lift(&h, m).map_err(domain)?;
            write_file(&out, &edge_list::serialize_hypergraph(&lifted))?;
            emit.kv(&[
                ("r", lifted.r().to_string()),
                ("apex_class", m.to_string()),
                ("edges", lifted.edge_count().to_string()),
                ("total_vertices", lifted.n_vertices().to_string()),
                ("out", out.display().to_string()),
            ]);
            emit.timing(started);
            Ok(0)
        }
        Cmd::Detect {
            input,
            min,
            max,
            budget,
            parallel,
            fast,
        } => {
            let h = edge_list::parse_hypergraph(&read_file(&input)?).map_err(domain)?;
            if fast {
                let found = detector::tripartite_find_cycle(&h).map_err(domain)?;
                return Ok(report_detection(&emit, started, found, None));
            }
            let opt = DetectOptions {
                min_length: min,
                max_length: max,
                state_budget: budget,
                parallel_roots: parallel,
            };
            let out = detector::search(&h, &opt);
            match out.result {
                SearchResult::Found(w) => {
                    Ok(report_detection(&emit, started, Some(w), Some(out.states_explored)))
                }
                SearchResult::Free => {
                    Ok(report_detection(&emit, started, None, Some(out.states_explored)))
                }
                SearchResult::Aborted => {
                    match cli.format {
                        Format::Text => println!(
                            "aborted: budget exhausted after {} states",
                            out.states_explored
                        ),
                        Format::Machine => {
                            println!("format=1");
                            println!("verdict=aborted");
                            println!("states={}", out.states_explored);
                        }
                    }
                    emit.timing(started);
                    Ok(2)
                }
            }
        }
        Cmd::Extremal { r, n, budget, cache } => {
            let res = match cache {
                Some(path) => {
                    let mut cache_data = ExtremalCache::load(&path).map_err(domain)?;
                    let res = extremal::exact_extremal_cached(r, n, budget, &mut cache_data)
                        .map_err(domain)?;
                    cache_data.save(&path).map_err(domain)?;
                    res
                }
                None => extremal::exact_extremal(r, n, budget).map_err(domain)?,
            };
            let witness = edge_list::serialize_hypergraph(&res.witness);
            match cli.format {
                Format::Text => {
                    println!("value {}", res.value);
                    println!("exhaustive {}", res.exhaustive);
                    println!("nodes_explored {}", res.nodes_explored);
                    print!("{witness}");
                }
                Format::Machine => {
                    println!("format=1");
                    println!("r={r}");
                    println!("n={n}");
                    println!("value={}", res.value);
                    println!("exhaustive={}", res.exhaustive);
                    println!("nodes_explored={}", res.nodes_explored);
                    for line in witness.lines() {
                        println!("witness={line}");
                    }
                }
            }
            emit.timing(started);
            Ok(0)
        }
        Cmd::Bench { r, n, seeds, out } => {
            let seeds: Vec<RngSeed> = if seeds.is_empty() {
                vec![seed]
            } else {
                seeds.into_iter().map(RngSeed).collect()
            };
            let rows = extremal::compare_constructions(r, &n, &seeds).map_err(domain)?;
            let csv = extremal::comparison_csv(&rows);
            match out {
                Some(path) => {
                    write_file(&path, &csv)?;
                    emit.kv(&[("rows", rows.len().to_string()), ("out", path.display().to_string())]);
                }
                None => print!("{csv}"),
            }
            emit.timing(started);
            Ok(0)
        }
    }
}

fn report_detection(
    emit: &Emitter,
    started: Instant,
    found: Option<tcf_core::TightCycleWitness>,
    states: Option<u64>,
) -> u8 {
    match emit.format {
        Format::Text => match &found {
            Some(w) => println!("{w}"),
            None => println!("tight-cycle-free"),
        },
        Format::Machine => {
            println!("format=1");
            match &found {
                Some(w) => {
                    println!("verdict=witness");
                    println!("length={}", w.len());
                    println!(
                        "vertices={}",
                        w.vertices()
                            .iter()
                            .map(u32::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
                None => println!("verdict=free"),
            }
            if let Some(s) = states {
                println!("states={s}");
            }
        }
    }
    emit.timing(started);
    u8::from(found.is_some())
}
