//! Command-line front end for the kernelization toolkit: solve instances
//! exactly, shrink them with the kernelizers, print coordination gadgets,
//! chain OR-compositions, and drive randomized verification runs.
//!
//! Reports go to stdout as JSON (CSV for `curve --csv`); instance text can
//! be embedded in the report or written to a file with `--out`. Exit codes:
//! 0 success, 1 the solver answered NO, 2 a verification run found a
//! mismatch, 3 bad input.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kernelpack::compose::{
    clique_to_multicolored_biclique, compose_or_3sat, compose_or_hfactor,
    compose_or_mcb_to_vertex_cover, compose_or_perfect_dm, reduce_pdm_to_clique_matching,
    SatTarget,
};
use kernelpack::gadget::{
    build_hyperedge_gadget, build_selector_gadget, build_switch_gadget, naive_packing_structure,
};
use kernelpack::graph::{CnfFormula, HPattern, Hypergraph, PartitionedHypergraph, SimpleGraph};
use kernelpack::harness::{
    curve_csv, gen_random, size_curve, verify_kernel_mutated, GenKind, Mutation, Problem,
    TrialConfig,
};
use kernelpack::io::{self, Instance};
use kernelpack::kernel::p3::{kernelize_p3, DEFAULT_C};
use kernelpack::kernel::pd::{kernelize_pd, kernelize_pd_simple, AnnotatedKernel};
use kernelpack::kernel::star::kernelize_star_matching;
use kernelpack::kernel::sunflower::kernelize_set_matching;
use kernelpack::oracle::{
    has_perfect_matching, h_matching_at_least, max_clique, max_h_matching, max_set_matching,
    max_weighted_path_matching, min_vertex_cover, sat3, set_matching_at_least,
    weighted_path_matching_at_least, OracleBudget,
};
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "kernelpack",
    version,
    about = "Kernelization toolkit: exact solvers, kernels, gadgets, compositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Size caps shared by every randomized subcommand.
#[derive(Args)]
struct SizeArgs {
    /// Vertex cap per instance.
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Edge cap per instance.
    #[arg(long, default_value_t = 30)]
    m_max: usize,
    /// Per-trial parameters are drawn from 1..=k_max.
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Edge arity, star leaf count, or path weight demand.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Bernoulli edge probability.
    #[arg(long, default_value_t = 0.35)]
    prob: f64,
}

impl SizeArgs {
    fn config(&self, problem: Problem, seed: u64, trials: usize) -> TrialConfig {
        TrialConfig {
            problem,
            seed,
            trials,
            n_max: self.n_max,
            m_max: self.m_max,
            k_max: self.k_max,
            d: self.d,
            edge_probability: self.prob,
            budget: OracleBudget::default(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Answer an instance exactly with the reference oracle.
    Solve {
        /// One of: set-matching, star, p3, pd, perfect-matching, clique,
        /// vertex-cover, sat.
        #[arg(long)]
        problem: String,
        /// Ask the decision question "solution of size k?" instead of
        /// reporting the optimum. (For vertex-cover: "cover of size <= k?")
        #[arg(long)]
        k: Option<usize>,
        /// Star leaf count or path weight demand.
        #[arg(long, default_value_t = 3)]
        d: usize,
        file: PathBuf,
    },
    /// Shrink an instance while provably preserving its answer.
    Kernelize {
        /// One of: set-matching, star, p3, pd.
        #[arg(long)]
        problem: String,
        #[arg(long)]
        k: usize,
        /// Star leaf count or path weight demand.
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Degree-threshold constant for the p3 kernel.
        #[arg(long)]
        constant: Option<f64>,
        /// Include weight-raise witness records (pd only).
        #[arg(long)]
        witnesses: bool,
        /// Include the full reduction trace in the report.
        #[arg(long)]
        trace: bool,
        /// Write the kernel instance here instead of embedding it.
        #[arg(long)]
        out: Option<PathBuf>,
        file: PathBuf,
    },
    /// Print a coordination gadget as a ready-to-solve instance.
    Gadget {
        #[command(subcommand)]
        which: GadgetCmd,
    },
    /// Merge instances into one whose answer is their OR, or translate a
    /// single instance between problem languages.
    Compose {
        /// One of: or-pdm, pdm-to-kd, clique-to-mcb, or-vc, or-3sat,
        /// or-hfactor.
        reducer: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Grid dimension (or-3sat) — every other reducer infers sizes.
        #[arg(long)]
        d: Option<usize>,
        /// Solution size (clique-to-mcb).
        #[arg(long)]
        k: Option<usize>,
        /// or-3sat output language: clique or vertex-cover.
        #[arg(long, default_value = "clique")]
        target: String,
        /// Pattern size for or-hfactor (complete pattern on this many
        /// vertices).
        #[arg(long)]
        size: Option<usize>,
        /// Write the composed instance here instead of embedding it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a kernelizer against the exact oracle on random instances.
    Verify {
        /// One of: set-matching, star, p3, pd.
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Corrupt every kernel answer on purpose; the run must end in
        /// mismatches, proving the checker is alive.
        #[arg(long)]
        self_test: bool,
        #[command(flatten)]
        sizes: SizeArgs,
    },
    /// Sweep kernel output sizes over a k grid and fit a growth exponent.
    Curve {
        /// One of: set-matching, star, p3, pd.
        #[arg(long)]
        problem: String,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Emit CSV instead of JSON; the fitted slope goes to stderr.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        sizes: SizeArgs,
    },
    /// Generate a reproducible random instance.
    Gen {
        /// One of: hypergraph, graph, weighted, partite.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Embed a solution (k_max disjoint copies, or a perfect matching).
        #[arg(long)]
        plant: bool,
        /// Write the instance here instead of embedding it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sizes: SizeArgs,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Two-block selector: a perfect matching frees exactly one block.
    Switch {
        #[arg(long)]
        d: usize,
        /// Block size.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// m-block selector chain.
    Selector {
        #[arg(long)]
        d: usize,
        /// Number of blocks.
        #[arg(long)]
        m: usize,
        /// Block size.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph gadget standing in for one hyperedge: factor-covers its
    /// terminals all-or-none.
    Hyperedge {
        /// Pattern shape: clique, path, or star.
        #[arg(long, default_value = "clique")]
        pattern: String,
        /// Clique vertices, path edges, or star leaves.
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disjoint p-cliques hosting a packing of t complete patterns.
    Packing {
        /// Clique size.
        #[arg(long)]
        p: usize,
        /// Number of cliques.
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve { problem, k, d, file } => solve(&problem, k, d, &file),
        Command::Kernelize {
            problem,
            k,
            d,
            constant,
            witnesses,
            trace,
            out,
            file,
        } => kernelize(&problem, k, d, constant, witnesses, trace, out, &file),
        Command::Gadget { which } => gadget(which),
        Command::Compose {
            reducer,
            files,
            d,
            k,
            target,
            size,
            out,
        } => compose(&reducer, &files, d, k, &target, size, out),
        Command::Verify {
            problem,
            trials,
            seed,
            self_test,
            sizes,
        } => verify(&problem, trials, seed, self_test, &sizes),
        Command::Curve {
            problem,
            kmin,
            kmax,
            samples,
            seed,
            csv,
            sizes,
        } => curve(&problem, kmin, kmax, samples, seed, csv, &sizes),
        Command::Gen {
            kind,
            seed,
            plant,
            out,
            sizes,
        } => gen(&kind, seed, plant, out, &sizes),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    io::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn want_graph(instance: Instance, path: &Path) -> Result<SimpleGraph> {
    match instance {
        Instance::Graph(g) => Ok(g),
        _ => bail!("{} is not a plain graph", path.display()),
    }
}

fn want_hypergraph(instance: Instance, path: &Path) -> Result<Hypergraph> {
    match instance {
        Instance::Hypergraph(h) => Ok(h),
        Instance::Partitioned(p) => Ok(p.graph().clone()),
        _ => bail!("{} is not a hypergraph", path.display()),
    }
}

fn want_partitioned(instance: Instance, path: &Path) -> Result<PartitionedHypergraph> {
    match instance {
        Instance::Partitioned(p) => Ok(p),
        _ => bail!("{} is not a partitioned hypergraph", path.display()),
    }
}

fn want_cnf(instance: Instance, path: &Path) -> Result<CnfFormula> {
    match instance {
        Instance::Cnf(f) => Ok(f),
        _ => bail!("{} is not a CNF formula", path.display()),
    }
}

fn parse_problem(name: &str) -> Result<Problem> {
    Problem::from_name(name)
        .ok_or_else(|| anyhow!("unknown problem {name:?}; expected set-matching, star, p3 or pd"))
}

fn print_report(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Answers `exit 1` when the solver said NO, per the exit-code contract.
fn answer_exit(answer: bool) -> i32 {
    if answer {
        0
    } else {
        1
    }
}

fn solve(problem: &str, k: Option<usize>, d: usize, file: &Path) -> Result<i32> {
    let budget = OracleBudget::default();
    let instance = read_instance(file)?;
    let mut report = Map::new();
    report.insert("problem".into(), json!(problem));
    report.insert("file".into(), json!(file.display().to_string()));
    let exit = match problem {
        "set-matching" => {
            let h = want_hypergraph(instance, file)?;
            match k {
                Some(k) => {
                    let answer = set_matching_at_least(&h, k, budget)?;
                    report.insert("k".into(), json!(k));
                    report.insert("answer".into(), json!(answer));
                    answer_exit(answer)
                }
                None => {
                    report.insert("maximum".into(), json!(max_set_matching(&h, budget)?));
                    0
                }
            }
        }
        "star" | "p3" => {
            let g = want_graph(instance, file)?;
            let pattern = if problem == "star" {
                report.insert("d".into(), json!(d));
                HPattern::star(d)
            } else {
                HPattern::path(3)
            };
            match k {
                Some(k) => {
                    let answer = h_matching_at_least(&g, &pattern, k, budget)?;
                    report.insert("k".into(), json!(k));
                    report.insert("answer".into(), json!(answer));
                    answer_exit(answer)
                }
                None => {
                    report.insert("maximum".into(), json!(max_h_matching(&g, &pattern, budget)?));
                    0
                }
            }
        }
        "pd" => {
            let g = match instance {
                Instance::WeightedPaths(g) => g,
                Instance::Graph(g) => {
                    kernelpack::graph::WeightedPathGraph::from_simple(&g, d as u32)
                }
                _ => bail!("{} is not a weighted or plain graph", file.display()),
            };
            report.insert("d".into(), json!(d));
            match k {
                Some(k) => {
                    let answer = weighted_path_matching_at_least(&g, d as u32, k, budget)?;
                    report.insert("k".into(), json!(k));
                    report.insert("answer".into(), json!(answer));
                    answer_exit(answer)
                }
                None => {
                    report.insert(
                        "maximum".into(),
                        json!(max_weighted_path_matching(&g, d as u32, budget)?),
                    );
                    0
                }
            }
        }
        "perfect-matching" => {
            let h = want_hypergraph(instance, file)?;
            let answer = has_perfect_matching(&h, budget)?;
            report.insert("answer".into(), json!(answer));
            answer_exit(answer)
        }
        "clique" => {
            let h = want_hypergraph_or_graph(instance, file)?;
            let best = max_clique(&h, budget)?;
            report.insert("maximum".into(), json!(best));
            match k {
                Some(k) => {
                    let answer = best >= k;
                    report.insert("k".into(), json!(k));
                    report.insert("answer".into(), json!(answer));
                    answer_exit(answer)
                }
                None => 0,
            }
        }
        "vertex-cover" => {
            let h = want_hypergraph_or_graph(instance, file)?;
            let best = min_vertex_cover(&h, budget)?;
            report.insert("minimum".into(), json!(best));
            match k {
                Some(k) => {
                    let answer = best <= k;
                    report.insert("k".into(), json!(k));
                    report.insert("answer".into(), json!(answer));
                    answer_exit(answer)
                }
                None => 0,
            }
        }
        "sat" => {
            let f = want_cnf(instance, file)?;
            let answer = sat3(&f)?;
            report.insert("satisfiable".into(), json!(answer));
            answer_exit(answer)
        }
        other => bail!("unknown problem {other:?}"),
    };
    print_report(&Value::Object(report))?;
    Ok(exit)
}

/// Vertex cover accepts both encodings: a plain graph is its 2-uniform
/// hypergraph.
fn want_hypergraph_or_graph(instance: Instance, path: &Path) -> Result<Hypergraph> {
    match instance {
        Instance::Hypergraph(h) => Ok(h),
        Instance::Partitioned(p) => Ok(p.graph().clone()),
        Instance::Graph(g) => Ok(g.to_hypergraph()),
        Instance::WeightedPaths(_) | Instance::Cnf(_) => {
            bail!("{} is not a graph or hypergraph", path.display())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn kernelize(
    problem: &str,
    k: usize,
    d: usize,
    constant: Option<f64>,
    witnesses: bool,
    trace: bool,
    out: Option<PathBuf>,
    file: &Path,
) -> Result<i32> {
    let instance = read_instance(file)?;
    let mut report = Map::new();
    report.insert("problem".into(), json!(problem));
    report.insert("k".into(), json!(k));
    let (kernel_text, trace_value) = match problem {
        "set-matching" => {
            let h = want_hypergraph(instance, file)?;
            report.insert("input".into(), json!({ "vertices": h.n(), "edges": h.m() }));
            let out = kernelize_set_matching(&h, k);
            report.insert(
                "output".into(),
                json!({ "vertices": out.graph.n(), "edges": out.graph.m() }),
            );
            finish_trace(&mut report, &out.trace);
            (io::serialize_hypergraph(&out.graph), json!(out.trace))
        }
        "star" => {
            if d < 2 {
                bail!("a star needs at least 2 leaves, got {d}");
            }
            let g = want_graph(instance, file)?;
            report.insert("d".into(), json!(d));
            report.insert("input".into(), json!({ "vertices": g.n(), "edges": g.m() }));
            let out = kernelize_star_matching(&g, d, k);
            report.insert(
                "output".into(),
                json!({ "vertices": out.graph.n(), "edges": out.graph.m() }),
            );
            finish_trace(&mut report, &out.trace);
            (io::serialize_graph(&out.graph), json!(out.trace))
        }
        "p3" => {
            let g = want_graph(instance, file)?;
            let c = constant.unwrap_or(DEFAULT_C);
            if c <= 0.0 {
                bail!("the degree constant must be positive, got {c}");
            }
            report.insert("constant".into(), json!(c));
            report.insert("input".into(), json!({ "vertices": g.n(), "edges": g.m() }));
            let out = kernelize_p3(&g, k, c);
            report.insert(
                "output".into(),
                json!({ "vertices": out.graph.n(), "edges": out.graph.m() }),
            );
            finish_trace(&mut report, &out.trace);
            (io::serialize_graph(&out.graph), json!(out.trace))
        }
        "pd" => {
            if d < 2 {
                bail!("the weight demand must be at least 2, got {d}");
            }
            report.insert("d".into(), json!(d));
            let annotated: AnnotatedKernel = match instance {
                Instance::WeightedPaths(g) => {
                    report.insert("input".into(), json!({ "vertices": g.n(), "edges": g.m() }));
                    kernelize_pd(&g, d as u32, k)
                }
                Instance::Graph(g) => {
                    report.insert("input".into(), json!({ "vertices": g.n(), "edges": g.m() }));
                    kernelize_pd_simple(&g, d as u32, k)
                }
                _ => bail!("{} is not a weighted or plain graph", file.display()),
            };
            let out = &annotated.output;
            report.insert(
                "output".into(),
                json!({ "vertices": out.graph.n(), "edges": out.graph.m() }),
            );
            if witnesses {
                let ws: Vec<Value> = annotated
                    .witnesses
                    .iter()
                    .map(|w| {
                        json!({
                            "rule": w.rule,
                            "terminals": w.terminals,
                            "weight": w.weight,
                            "vertices": w.vertices,
                        })
                    })
                    .collect();
                report.insert("witnesses".into(), Value::Array(ws));
            }
            finish_trace(&mut report, &out.trace);
            (io::serialize_weighted(&out.graph), json!(out.trace))
        }
        other => bail!("unknown problem {other:?}; kernels exist for set-matching, star, p3, pd"),
    };
    if trace {
        report.insert("trace".into(), trace_value);
    }
    emit_instance(&mut report, kernel_text, out)?;
    print_report(&Value::Object(report))?;
    Ok(0)
}

fn finish_trace(report: &mut Map<String, Value>, trace: &kernelpack::trace::KernelTrace) {
    report.insert("verdict".into(), json!(trace.verdict));
    report.insert("flags".into(), json!(trace.flags));
    report.insert("rules_applied".into(), json!(trace.entries.len()));
}

/// Embeds the instance text in the report, or writes it to `--out` and
/// records the path instead.
fn emit_instance(
    report: &mut Map<String, Value>,
    text: String,
    out: Option<PathBuf>,
) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(&path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            report.insert("out".into(), json!(path.display().to_string()));
        }
        None => {
            report.insert("instance".into(), json!(text));
        }
    }
    Ok(())
}

fn gadget(which: GadgetCmd) -> Result<i32> {
    let mut report = Map::new();
    let (text, out) = match which {
        GadgetCmd::Switch { d, s, out } => {
            check_selector_dims(d, 2, s)?;
            let gadget = build_switch_gadget(d, s);
            report.insert("gadget".into(), json!("switch"));
            report.insert("d".into(), json!(d));
            report.insert("s".into(), json!(s));
            report.insert("vertices".into(), json!(gadget.graph.graph().n()));
            report.insert("edges".into(), json!(gadget.graph.graph().m()));
            report.insert("blocks".into(), json!(gadget.blocks));
            report.insert("private_vertices".into(), json!(gadget.private_vertices));
            (io::serialize_partitioned(&gadget.graph), out)
        }
        GadgetCmd::Selector { d, m, s, out } => {
            check_selector_dims(d, m, s)?;
            let gadget = build_selector_gadget(d, m, s);
            report.insert("gadget".into(), json!("selector"));
            report.insert("d".into(), json!(d));
            report.insert("m".into(), json!(m));
            report.insert("s".into(), json!(s));
            report.insert("vertices".into(), json!(gadget.graph.graph().n()));
            report.insert("edges".into(), json!(gadget.graph.graph().m()));
            report.insert("blocks".into(), json!(gadget.blocks));
            report.insert("private_vertices".into(), json!(gadget.private_vertices));
            (io::serialize_partitioned(&gadget.graph), out)
        }
        GadgetCmd::Hyperedge { pattern, size, out } => {
            let h = parse_pattern(&pattern, size)?;
            if h.vertex_count() < 3 {
                bail!("the pattern must have at least 3 vertices");
            }
            let gadget = build_hyperedge_gadget(&h);
            report.insert("gadget".into(), json!("hyperedge"));
            report.insert("pattern".into(), json!(pattern));
            report.insert("pattern_vertices".into(), json!(h.vertex_count()));
            report.insert("vertices".into(), json!(gadget.graph.n()));
            report.insert("edges".into(), json!(gadget.graph.m()));
            report.insert("terminals".into(), json!(gadget.terminals));
            (io::serialize_graph(&gadget.graph), out)
        }
        GadgetCmd::Packing { p, t, out } => {
            let (graph, cliques) = naive_packing_structure(p, t)?;
            report.insert("gadget".into(), json!("packing"));
            report.insert("p".into(), json!(p));
            report.insert("t".into(), json!(t));
            report.insert("vertices".into(), json!(graph.n()));
            report.insert("edges".into(), json!(graph.m()));
            report.insert("cliques".into(), json!(cliques));
            (io::serialize_graph(&graph), out)
        }
    };
    emit_instance(&mut report, text, out)?;
    print_report(&Value::Object(report))?;
    Ok(0)
}

fn check_selector_dims(d: usize, m: usize, s: usize) -> Result<()> {
    if d < 3 {
        bail!("selector arity must be at least 3, got {d}");
    }
    if m < 2 {
        bail!("a selector needs at least 2 blocks, got {m}");
    }
    if s < 2 {
        bail!("selector blocks must hold at least 2 vertices, got {s}");
    }
    Ok(())
}

fn parse_pattern(shape: &str, size: usize) -> Result<HPattern> {
    match shape {
        "clique" => {
            if size < 2 {
                bail!("a clique pattern needs at least 2 vertices, got {size}");
            }
            Ok(HPattern::clique(size))
        }
        "path" => {
            if size < 1 {
                bail!("a path pattern needs at least 1 edge");
            }
            Ok(HPattern::path(size))
        }
        "star" => {
            if size < 1 {
                bail!("a star pattern needs at least 1 leaf");
            }
            Ok(HPattern::star(size))
        }
        other => bail!("unknown pattern {other:?}; expected clique, path or star"),
    }
}

fn compose(
    reducer: &str,
    files: &[PathBuf],
    d: Option<usize>,
    k: Option<usize>,
    target: &str,
    size: Option<usize>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let mut report = Map::new();
    report.insert("reducer".into(), json!(reducer));
    report.insert("inputs".into(), json!(files.len()));
    let text = match reducer {
        "or-pdm" => {
            let instances: Vec<PartitionedHypergraph> = files
                .iter()
                .map(|f| want_partitioned(read_instance(f)?, f))
                .collect::<Result<_>>()?;
            let arity = instances[0].graph().d();
            let (merged, comp) = compose_or_perfect_dm(&instances, arity)?;
            report.insert("report".into(), json!(comp));
            report.insert("vertices".into(), json!(merged.graph().n()));
            report.insert("edges".into(), json!(merged.graph().m()));
            io::serialize_partitioned(&merged)
        }
        "pdm-to-kd" => {
            let [file] = files else {
                bail!("pdm-to-kd translates exactly one instance, got {}", files.len());
            };
            let h = want_partitioned(read_instance(file)?, file)?;
            let (g, k) = reduce_pdm_to_clique_matching(&h)?;
            report.insert("k".into(), json!(k));
            report.insert("vertices".into(), json!(g.n()));
            report.insert("edges".into(), json!(g.m()));
            io::serialize_graph(&g)
        }
        "clique-to-mcb" => {
            let [file] = files else {
                bail!("clique-to-mcb translates exactly one instance, got {}", files.len());
            };
            let k = k.ok_or_else(|| anyhow!("clique-to-mcb needs --k"))?;
            let g = want_graph(read_instance(file)?, file)?;
            let mcb = clique_to_multicolored_biclique(&g, k)?;
            report.insert("k".into(), json!(k));
            report.insert("vertices".into(), json!(mcb.graph.n()));
            report.insert("edges".into(), json!(mcb.graph.m()));
            report.insert("side_u".into(), json!(mcb.side_u));
            report.insert("side_w".into(), json!(mcb.side_w));
            io::serialize_graph(&mcb.graph)
        }
        "or-vc" => {
            // Each input is a clique question (graph, k); the chain runs
            // through multicolored bicliques into one vertex-cover budget.
            let k = k.ok_or_else(|| anyhow!("or-vc needs --k, the clique size per input"))?;
            let mcbs = files
                .iter()
                .map(|f| {
                    let g = want_graph(read_instance(f)?, f)?;
                    Ok(clique_to_multicolored_biclique(&g, k)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let (merged, budget, comp) = compose_or_mcb_to_vertex_cover(&mcbs)?;
            report.insert("k".into(), json!(k));
            report.insert("budget".into(), json!(budget));
            report.insert("report".into(), json!(comp));
            report.insert("vertices".into(), json!(merged.n()));
            report.insert("edges".into(), json!(merged.m()));
            io::serialize_graph(&merged)
        }
        "or-3sat" => {
            let formulas: Vec<CnfFormula> = files
                .iter()
                .map(|f| want_cnf(read_instance(f)?, f))
                .collect::<Result<_>>()?;
            let d = d.unwrap_or(2);
            let sat_target = match target {
                "clique" => SatTarget::Clique,
                "vertex-cover" => SatTarget::VertexCover,
                other => bail!("unknown target {other:?}; expected clique or vertex-cover"),
            };
            let (h, bound, comp) = compose_or_3sat(&formulas, d, sat_target)?;
            report.insert("d".into(), json!(d));
            report.insert("target".into(), json!(target));
            report.insert(
                if target == "clique" { "k" } else { "budget" }.into(),
                json!(bound),
            );
            report.insert("report".into(), json!(comp));
            report.insert("vertices".into(), json!(h.n()));
            report.insert("edges".into(), json!(h.m()));
            // d = 2 yields an ordinary graph; larger d stays a hypergraph,
            // whose cliques are sets with every d-subset an edge.
            match h.to_simple() {
                Some(g) => io::serialize_graph(&g),
                None => io::serialize_hypergraph(&h),
            }
        }
        "or-hfactor" => {
            let instances: Vec<SimpleGraph> = files
                .iter()
                .map(|f| want_graph(read_instance(f)?, f))
                .collect::<Result<_>>()?;
            let size = size.ok_or_else(|| anyhow!("or-hfactor needs --size, the pattern size"))?;
            if size < 3 {
                bail!("the factor pattern must have at least 3 vertices, got {size}");
            }
            let h = HPattern::clique(size);
            let (merged, comp) = compose_or_hfactor(&instances, &h)?;
            report.insert("pattern_vertices".into(), json!(size));
            report.insert("report".into(), json!(comp));
            report.insert("vertices".into(), json!(merged.n()));
            report.insert("edges".into(), json!(merged.m()));
            io::serialize_graph(&merged)
        }
        other => bail!(
            "unknown reducer {other:?}; expected or-pdm, pdm-to-kd, clique-to-mcb, or-vc, or-3sat or or-hfactor"
        ),
    };
    emit_instance(&mut report, text, out)?;
    print_report(&Value::Object(report))?;
    Ok(0)
}

fn verify(problem: &str, trials: usize, seed: u64, self_test: bool, sizes: &SizeArgs) -> Result<i32> {
    let problem = parse_problem(problem)?;
    let config = sizes.config(problem, seed, trials);
    let mutation = if self_test {
        Mutation::FlipAnswer
    } else {
        Mutation::None
    };
    let report = verify_kernel_mutated(&config, mutation);
    let failed = report.failed;
    print_report(&serde_json::to_value(&report)?)?;
    Ok(if failed > 0 { 2 } else { 0 })
}

fn curve(
    problem: &str,
    kmin: usize,
    kmax: usize,
    samples: usize,
    seed: u64,
    csv: bool,
    sizes: &SizeArgs,
) -> Result<i32> {
    if kmin < 1 || kmax < kmin {
        bail!("the grid needs 1 <= kmin <= kmax, got {kmin}..{kmax}");
    }
    let problem = parse_problem(problem)?;
    let config = sizes.config(problem, seed, samples);
    let ks: Vec<usize> = (kmin..=kmax).collect();
    let curve = size_curve(&config, &ks);
    if csv {
        print!("{}", curve_csv(&curve));
        eprintln!("slope: {:.4}", curve.slope);
    } else {
        print_report(&serde_json::to_value(&curve)?)?;
    }
    Ok(0)
}

fn gen(kind: &str, seed: u64, plant: bool, out: Option<PathBuf>, sizes: &SizeArgs) -> Result<i32> {
    let gen_kind = match kind {
        "hypergraph" => GenKind::Hypergraph,
        "graph" => GenKind::Graph,
        "weighted" => GenKind::WeightedGraph,
        "partite" => GenKind::PartiteMatching,
        other => bail!("unknown kind {other:?}; expected hypergraph, graph, weighted or partite"),
    };
    // The generator only reads sizes and the seed; the problem tag is inert.
    let config = sizes.config(Problem::SetMatching, seed, 1);
    let generated = gen_random(gen_kind, &config, plant)?;
    let mut report = Map::new();
    report.insert("kind".into(), json!(kind));
    report.insert("seed".into(), json!(seed));
    report.insert("planted".into(), json!(generated.planted));
    emit_instance(&mut report, io::serialize(&generated.instance), out)?;
    print_report(&Value::Object(report))?;
    Ok(0)
}
