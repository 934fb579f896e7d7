//! `g3`: certify, close, construct and search.
//!
//! Exit codes: 0 success, 1 semantic failure or invalid parameters,
//! 2 IO or parse errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use g3_core::acceptance::{run_all, Tier};
use g3_core::designs::{builtin, ingest_design, rank8_graph, total_graph, whole_graph, IncidenceStructure};
use g3_core::feasibility::{enumerate_tables, search, table_csv, ClassTag, TABLE_LIMIT};
use g3_core::graph::Graph;
use g3_core::numtheory::is_prime_power;
use g3_core::oa::{build_g, make_field, oa_block_graph, oa_construct};
use g3_core::spectral::{find_three_ev, three_ev_check};
use g3_core::wl::wl2_stabilize;
use g3_core::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "g3", version, about = "Graphs with three distinct eigenvalues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify three eigenvalues via the rank-one identity for given s, p.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Coherent rank, fibres and type matrix.
    Rank {
        #[command(flatten)]
        source: GraphSource,
        /// Omit the type matrix.
        #[arg(long)]
        no_type_matrix: bool,
        /// Append the full pair colouring.
        #[arg(long)]
        emit_coloring: bool,
    },
    /// Build a graph and print its certified spectrum summary.
    Construct {
        kind: Kind,
        #[arg(long)]
        lambda: Option<i64>,
        /// Incidence file or `builtin:NAME`.
        #[arg(long)]
        design: Option<String>,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Write the graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Feasible parameter rows of one class, as CSV.
    Search {
        #[arg(long)]
        class: String,
        /// Bound on θ₁ (classes 1, 3a, 3b, 4a).
        #[arg(long, default_value_t = TABLE_LIMIT)]
        theta1_max: i64,
        /// Bound on θ₂ from below (classes 2, 4b).
        #[arg(long, default_value_t = -TABLE_LIMIT, allow_hyphen_values = true)]
        theta2_min: i64,
    },
    /// Write table2.csv … table5.csv.
    Tables {
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance criteria.
    Acceptance {
        #[arg(long, value_enum, default_value_t = TierArg::Fast)]
        tier: TierArg,
    },
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct GraphSource {
    #[arg(long, conflicts_with_all = ["m", "n"])]
    graph: Option<PathBuf>,
    /// With `--n`: the switched orthogonal-array graph G(m, n).
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rank8,
    Total,
    Whole,
    GFamily,
    Cone,
    OaBlock,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Full,
}

/// Outcome of a verb that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn read_graph(path: &Path) -> g3_core::Result<Graph> {
    Graph::parse(&std::fs::read_to_string(path)?)
}

fn load_design(spec: &str) -> g3_core::Result<IncidenceStructure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin(name),
        None => ingest_design(Path::new(spec)),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> g3_core::Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
}

fn summary(g: &Graph) -> g3_core::Result<String> {
    Ok(match find_three_ev(g) {
        Ok(Some(cert)) => match cert.spec {
            Some(sp) => format!("G3({},{},{})", sp.theta0, sp.theta1, sp.theta2),
            None => format!("G3(s={},p={})", cert.s, cert.p),
        },
        Ok(None) => "not in G3".to_string(),
        // Disconnected or complete graphs.
        Err(Error::InvalidArgument(why)) => format!("not in G3 ({why})"),
        Err(e) => return Err(e),
    })
}

fn run(cli: Cli) -> g3_core::Result<Outcome> {
    match cli.command {
        Command::Verify { graph, s, p } => {
            let g = read_graph(&graph)?;
            match three_ev_check(&g, s, p)? {
                Ok(cert) => {
                    print!("{}", cert.report());
                    Ok(Outcome::Pass)
                }
                Err(v) => {
                    println!("violation at ({}, {})", v.x, v.y);
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::Rank { source, no_type_matrix, emit_coloring } => {
            let g = match (source.graph, source.m, source.n) {
                (Some(path), _, _) => read_graph(&path)?,
                (None, Some(m), Some(n)) => build_g(m, n)?,
                _ => unreachable!("clap enforces a graph source"),
            };
            let cc = wl2_stabilize(&g)?;
            let text = cc.to_text(emit_coloring);
            if no_type_matrix {
                let mut lines = text.lines();
                println!("{}", lines.next().unwrap_or_default());
                println!("{}", lines.next().unwrap_or_default());
            } else {
                print!("{text}");
            }
            Ok(Outcome::Pass)
        }
        Command::Construct { kind, lambda, design, x, m, n, graph, out } => {
            let g = match kind {
                Kind::Rank8 => {
                    let d = match (design, lambda) {
                        (Some(spec), _) => load_design(&spec)?,
                        (None, Some(2)) => builtin("fano-complement")?,
                        (None, Some(l)) => {
                            return Err(Error::InvalidArgument(format!(
                                "no built-in symmetric design for λ = {l}; pass --design"
                            )))
                        }
                        (None, None) => return Err(Error::InvalidArgument("--lambda or --design is required".into())),
                    };
                    rank8_graph(&d)?
                }
                Kind::Total => total_graph(&load_design(&need(design, "design")?)?, need(x, "x")?)?,
                Kind::Whole => whole_graph(&load_design(&need(design, "design")?)?, need(x, "x")?)?,
                Kind::GFamily => build_g(need(m, "m")?, need(n, "n")?)?,
                Kind::Cone => read_graph(&need(graph, "graph")?)?.cone(),
                Kind::OaBlock => {
                    let n = need(n, "n")?;
                    let (p, e) = is_prime_power(n as u64)
                        .ok_or_else(|| Error::InvalidArgument(format!("{n} is not a prime power")))?;
                    oa_block_graph(&oa_construct(need(m, "m")?, &make_field(p, e)?)?)
                }
            };
            if let Some(path) = out {
                std::fs::write(path, g.to_text())?;
            }
            println!("{}", summary(&g)?);
            println!("vertices {} edges {}", g.order(), g.edge_count());
            Ok(Outcome::Pass)
        }
        Command::Search { class, theta1_max, theta2_min } => {
            let tag = ClassTag::parse(&class)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown class {class:?}")))?;
            let limit = match tag {
                ClassTag::C2 | ClassTag::C4b => -theta2_min,
                _ => theta1_max,
            };
            print!("{}", table_csv(&search(tag, limit)));
            Ok(Outcome::Pass)
        }
        Command::Tables { out } => {
            std::fs::create_dir_all(&out)?;
            for (i, (_, rows)) in enumerate_tables(TABLE_LIMIT).iter().enumerate() {
                std::fs::write(out.join(format!("table{}.csv", i + 2)), table_csv(rows))?;
            }
            Ok(Outcome::Pass)
        }
        Command::Acceptance { tier } => {
            let tier = match tier {
                TierArg::Fast => Tier::Fast,
                TierArg::Full => Tier::Full,
            };
            let results = run_all(tier);
            for r in &results {
                println!("{r}");
            }
            Ok(if results.iter().all(|r| r.passed()) { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

