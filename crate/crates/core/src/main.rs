use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use treepath::bench::{parse_sizes, render_csv, run_suite, Suite};
use treepath::dominators::{dominators_run, naive_idom, Algo};
use treepath::dsu::DsuCounters;
use treepath::graphio::{parse_graph, parse_queries, preorder_relabel, Digraph, Kind, RootedTree};
use treepath::intervals::intervals;
use treepath::kruskal::{compressed_kruskal, kruskal_from_graph, kruskal_tree, ordered_edges, parse_groups};
use treepath::linkeval::LinkEvalCounters;
use treepath::mst::{build_mst_kkt_counted, kruskal_msf, tree_edge_flags, verify_mst_run, weighted_edges, Verdict};
use treepath::nca::nca_linear_run;
use treepath::partition::partition;
use treepath::{default_g, oracle, Error, NIL};

#[derive(Parser, Debug)]
#[command(name = "treepath", version, about = "Tree path evaluation: NCAs, MST verification, intervals, dominators, Kruskal trees")]
struct Cli {
    /// Cross-check against the brute-force oracle; exit 1 on mismatch.
    #[arg(long, global = true)]
    oracle: bool,
    /// Append counter rows `structure,n,ops,find_path_nodes` to PATH
    /// (stderr without a path).
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, value_name = "PATH")]
    stats: Option<Option<PathBuf>>,
    /// Microtree size threshold instead of the default from n.
    #[arg(long, global = true, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    g_override: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Nearest common ancestors: lines `u v a`.
    Nca { tree: PathBuf, queries: PathBuf },
    #[command(subcommand)]
    Mst(MstCmd),
    /// Interval heads: lines `v h`, 0 for none.
    Intervals {
        flow: PathBuf,
        #[arg(long)]
        compressed: bool,
    },
    /// Immediate dominators: lines `v idom`, 0 for the root.
    Dominators {
        flow: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Linear)]
        algo: AlgoArg,
    },
    /// Kruskal tree of an ordered tree file: lines `k left right idx`, or
    /// `k group child...` with groups.
    Kruskal {
        tree: PathBuf,
        #[arg(long)]
        linear: bool,
        /// Comma-separated group sizes in edge order.
        #[arg(long)]
        groups: Option<String>,
    },
    /// Counter CSV `suite,n,m,counter,normalized`.
    Bench {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Sizes such as `1k,2k,4096,2^13` (k = 1024).
        #[arg(long, value_parser = parse_size_list)]
        sizes: SizeList,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum MstCmd {
    /// `YES`, or `NO` and a violating edge `e u v`.
    Verify { graph: PathBuf, tree: PathBuf },
    /// Minimum spanning tree edges `a u v w` in index order.
    Build {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Linear,
    Lt,
    Naive,
}

#[derive(Clone, Debug)]
struct SizeList(Vec<usize>);

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_size_list(s: &str) -> Result<SizeList, String> {
    parse_sizes(s).map(SizeList).map_err(|e| e.to_string())
}

/// Algorithm error or oracle mismatch; both exit with status 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, Vec<String>), Failure>;

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn dsu_row(name: &str, n: usize, c: &DsuCounters) -> String {
    format!("{name},{n},{},{}", c.finds + c.unites, c.find_path_nodes)
}

fn link_eval_row(name: &str, n: usize, c: &LinkEvalCounters) -> String {
    format!("{name},{n},{},{}", c.links + c.evals + c.findroots, c.compress_nodes + c.link_steps)
}

fn check(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure(format!("oracle mismatch: {what}")))
    }
}

fn run(cli: &Cli) -> Outcome {
    let gsize = cli.g_override.map(|k| k as usize);
    let mut out = String::new();
    let mut stats = Vec::new();
    match &cli.cmd {
        Cmd::Nca { tree, queries } => {
            let g = read_graph(tree)?;
            if g.kind != Kind::Tree {
                return Err(Failure("nca needs a tree file".into()));
            }
            let t = RootedTree::from_tree_graph(&g, 1)?;
            let text = fs::read_to_string(queries).map_err(|e| Failure(format!("{}: {e}", queries.display())))?;
            let q = parse_queries(&text, t.n)?;
            let r = nca_linear_run(&t, &q, gsize.unwrap_or_else(|| default_g(t.n)))?;
            if cli.oracle {
                let bad = q.iter().zip(&r.answers).position(|(&(u, v), &a)| oracle::nca_root_paths(&t, u, v) != a);
                check(bad.is_none(), &format!("query {}", bad.map_or(0, |i| i + 1)))?;
            }
            for (&(u, v), a) in q.iter().zip(&r.answers) {
                out.push_str(&format!("{u} {v} {a}\n"));
            }
            stats.push(dsu_row("nca.dsu", t.n, &r.dsu));
        }
        Cmd::Mst(MstCmd::Verify { graph, tree }) => {
            let g = read_graph(graph)?;
            let t = read_graph(tree)?;
            let flags = tree_edge_flags(&g, &t)?;
            let (verdict, r) = verify_mst_run(&g, &flags, gsize)?;
            if cli.oracle {
                check(oracle::verify_by_weights(g.n, &weighted_edges(&g), &flags) == verdict, "verdict")?;
            }
            match verdict {
                Verdict::Yes => out.push_str("YES\n"),
                Verdict::No { edge, u, v } => out.push_str(&format!("NO\n{} {u} {v}\n", edge + 1)),
            }
            stats.push(link_eval_row("mst.link_eval", r.b_nodes, &r.link_eval));
        }
        Cmd::Mst(MstCmd::Build { graph, seed }) => {
            let g = read_graph(graph)?;
            let (ids, k) = build_mst_kkt_counted(&g, *seed)?;
            if cli.oracle {
                check(ids == kruskal_msf(g.n, &weighted_edges(&g)), "edge set")?;
            }
            for &i in &ids {
                let a = &g.arcs[i];
                out.push_str(&format!("{} {} {} {}\n", i + 1, a.u, a.v, a.w.unwrap_or(0.0)));
            }
            stats.push(format!("mst.kkt,{},{},{}", g.n, k.calls, k.edges_seen));
        }
        Cmd::Intervals { flow, compressed } => {
            let g = read_graph(flow)?;
            let (h, st) = intervals(&g, gsize, *compressed)?;
            if cli.oracle {
                let (pg, d, old) = preorder_relabel(&g)?;
                let want = oracle::heads(&pg, &d);
                let part = partition(&d, gsize.unwrap_or_else(|| default_g(g.n)));
                let mut expect = vec![NIL; g.n + 1];
                for v in 1..=g.n {
                    let mut a = want[v];
                    while *compressed && a != NIL && !part.core[a] {
                        a = want[a];
                    }
                    if a != NIL {
                        expect[old[v]] = old[a];
                    }
                }
                let bad = (1..=g.n).find(|&v| expect[v] != h[v]);
                check(bad.is_none(), &format!("vertex {}", bad.unwrap_or(0)))?;
            }
            for v in 1..=g.n {
                out.push_str(&format!("{v} {}\n", h[v]));
            }
            stats.push(dsu_row("intervals.dsu", g.n, &st.dsu));
            stats.push(dsu_row("intervals.nca", g.n, &st.nca));
        }
        Cmd::Dominators { flow, algo } => {
            let g = read_graph(flow)?;
            let algo = match algo {
                AlgoArg::Linear => Algo::Linear,
                AlgoArg::Lt => Algo::Lt,
                AlgoArg::Naive => Algo::Naive,
            };
            let (idom, st) = dominators_run(&g, algo, gsize)?;
            if cli.oracle {
                let want = naive_idom(&g);
                let bad = (1..=g.n).find(|&v| want[v] != idom[v]);
                check(bad.is_none(), &format!("vertex {}", bad.unwrap_or(0)))?;
            }
            for v in 1..=g.n {
                out.push_str(&format!("{v} {}\n", idom[v]));
            }
            if algo == Algo::Linear {
                stats.push(dsu_row("dominators.intervals_dsu", g.n, &st.intervals.dsu));
                stats.push(dsu_row("dominators.nca", g.n, &st.nca));
                stats.push(dsu_row("dominators.rmq", g.n, &st.rmq));
                stats.push(link_eval_row("dominators.link_eval", g.n, &st.link_eval));
                stats.push(link_eval_row("dominators.step2_link_eval", g.n, &st.step2_link_eval));
            }
        }
        Cmd::Kruskal { tree, linear, groups } => {
            let g = read_graph(tree)?;
            let (t, edges) = ordered_edges(&g)?;
            if let Some(list) = groups {
                let gr = parse_groups(list, edges.len())?;
                let c = compressed_kruskal(&t, &edges, &gr)?;
                if cli.oracle {
                    check(oracle::components_match_groups(&c, &edges, &gr), "group components")?;
                }
                out = c.render();
            } else {
                let (k, st) = kruskal_from_graph(&g, linear.then_some(gsize))?;
                if cli.oracle {
                    check(oracle::kruskal_matches_components(&k, &edges), "components")?;
                    check(k == kruskal_tree(&t, &edges)?, "baseline")?;
                }
                out = k.render();
                stats.push(dsu_row("kruskal.dsu", t.n, &st.dsu));
            }
        }
        Cmd::Bench { suite, sizes, seed } => {
            let rows = run_suite(*suite, &sizes.0, *seed)?;
            out = render_csv(&rows);
        }
    }
    Ok((out, stats))
}

fn write_stats(dest: &Option<PathBuf>, rows: &[String]) -> std::io::Result<()> {
    let mut text = String::new();
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    match dest {
        Some(p) => {
            let fresh = fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
            let mut f = fs::OpenOptions::new().create(true).append(true).open(p)?;
            if fresh {
                f.write_all(b"structure,n,ops,find_path_nodes\n")?;
            }
            f.write_all(text.as_bytes())
        }
        None => std::io::stderr().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, rows)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if let Some(dest) = &cli.stats {
                if let Err(e) = write_stats(dest, &rows) {
                    eprintln!("treepath: stats: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("treepath: {msg}");
            ExitCode::from(1)
        }
    }
}
