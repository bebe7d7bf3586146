//! Randomized end-to-end checking: instance generators, a verification
//! driver that replays every kernelizer against an exact oracle, and
//! size-curve sweeps for reading growth rates off real outputs.
//!
//! Everything here replays byte for byte. Randomness comes from a fixed
//! 64-bit-seeded ChaCha8 generator and trial `i` reads stream `i` of that
//! seed, so results do not depend on how trials are scheduled across the
//! worker pool, and rerunning a configuration reproduces the exact report.

use crate::graph::{Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph};
use crate::io::{self, Instance};
use crate::kernel::p3::{kernelize_p3, DEFAULT_C};
use crate::kernel::pd::kernelize_pd;
use crate::kernel::star::kernelize_star_matching;
use crate::kernel::sunflower::kernelize_set_matching;
use crate::oracle::{
    h_matching_at_least, set_matching_at_least, weighted_path_matching_at_least, OracleBudget,
    OracleResult,
};
use crate::trace::Verdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fs;
use std::path::PathBuf;

/// Which kernelizer a run drives, and which oracle referees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Disjoint edges in a d-uniform hypergraph.
    SetMatching,
    /// Disjoint stars with `d` leaves in a graph.
    Star,
    /// Disjoint paths of three edges each in a graph.
    P3,
    /// Disjoint paths of weight at least `d` in an edge-weighted graph.
    Pd,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::SetMatching => "set-matching",
            Problem::Star => "star",
            Problem::P3 => "p3",
            Problem::Pd => "pd",
        }
    }

    pub fn from_name(name: &str) -> Option<Problem> {
        match name {
            "set-matching" => Some(Problem::SetMatching),
            "star" => Some(Problem::Star),
            "p3" => Some(Problem::P3),
            "pd" => Some(Problem::Pd),
            _ => None,
        }
    }
}

/// Shape of one randomized run.
///
/// `d` is the edge arity for hypergraphs, the leaf count for stars and the
/// weight demand for path packings; the three-vertex-path kernel ignores
/// it. Each trial draws its own `k` from `1..=k_max` and its own sizes
/// under the caps below.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub problem: Problem,
    pub seed: u64,
    pub trials: usize,
    pub n_max: usize,
    pub m_max: usize,
    pub k_max: usize,
    pub d: usize,
    pub edge_probability: f64,
    pub budget: OracleBudget,
}

impl TrialConfig {
    /// Sizes small enough that the exact oracles answer instantly; the
    /// module tests and the acceptance gate both start from here.
    pub fn desk(problem: Problem, seed: u64, trials: usize) -> TrialConfig {
        TrialConfig {
            problem,
            seed,
            trials,
            n_max: 12,
            m_max: 30,
            k_max: 3,
            d: 3,
            edge_probability: 0.35,
            budget: OracleBudget::default(),
        }
    }
}

/// What the generator is asked to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// d-uniform hypergraph on a vertex count drawn from `d..=n_max`.
    Hypergraph,
    /// Plain graph; planting embeds disjoint stars with `d` leaves.
    Graph,
    /// Edge-weighted graph with weights in `1..=d`; planting embeds
    /// disjoint paths of total weight exactly `d`.
    WeightedGraph,
    /// d-partite d-uniform instance with equal classes; planting embeds a
    /// perfect matching.
    PartiteMatching,
}

/// A generated instance plus the honest record of whether a solution was
/// built in. `planted` stays false when the requested sizes left no room
/// for a single copy.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub planted: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("infeasible size range: {0}")]
    Infeasible(String),
}

/// Per-trial generator state: stream `trial` of the run seed.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn check_ranges(kind: GenKind, config: &TrialConfig) -> Result<(), HarnessError> {
    if !(0.0..=1.0).contains(&config.edge_probability) {
        return Err(HarnessError::Infeasible(format!(
            "edge probability {} is not in [0, 1]",
            config.edge_probability
        )));
    }
    if config.n_max == 0 {
        return Err(HarnessError::Infeasible("n_max must be positive".into()));
    }
    if config.d < 2 {
        return Err(HarnessError::Infeasible(format!(
            "arity/demand {} is below 2",
            config.d
        )));
    }
    match kind {
        GenKind::Hypergraph | GenKind::PartiteMatching if config.n_max < config.d => {
            Err(HarnessError::Infeasible(format!(
                "no {}-ary edge fits in {} vertices",
                config.d, config.n_max
            )))
        }
        GenKind::PartiteMatching => {
            let cs = (config.n_max / config.d).max(1);
            // The edge space is cs^d combinations; refuse to enumerate a blowup.
            if (cs as u128).pow(config.d as u32) > 500_000 {
                return Err(HarnessError::Infeasible(format!(
                    "{}^{} candidate partite edges is too many to sweep",
                    cs, config.d
                )));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Draws one instance of the requested kind under the config's size caps.
///
/// Always reads stream 0 of the seed, so two calls with equal
/// configurations serialize to identical bytes. Infeasible ranges are
/// rejected rather than silently clamped.
pub fn gen_random(
    kind: GenKind,
    config: &TrialConfig,
    plant: bool,
) -> Result<Generated, HarnessError> {
    check_ranges(kind, config)?;
    let mut rng = trial_rng(config.seed, 0);
    let (instance, planted) = match kind {
        GenKind::Hypergraph => {
            let (h, p) = rand_hypergraph(&mut rng, config, plant);
            (Instance::Hypergraph(h), p)
        }
        GenKind::Graph => {
            let (g, p) = rand_graph(&mut rng, config, plant);
            (Instance::Graph(g), p)
        }
        GenKind::WeightedGraph => {
            let (g, p) = rand_weighted(&mut rng, config, plant);
            (Instance::WeightedPaths(g), p)
        }
        GenKind::PartiteMatching => {
            let (g, p) = rand_partite(&mut rng, config, plant);
            (Instance::Partitioned(g), p)
        }
    };
    Ok(Generated { instance, planted })
}

fn rand_hypergraph(
    rng: &mut ChaCha8Rng,
    config: &TrialConfig,
    plant: bool,
) -> (Hypergraph, bool) {
    let d = config.d;
    let n = rng.gen_range(d..=config.n_max.max(d));
    let mut edges = Vec::new();
    for _ in 0..config.m_max {
        if rng.gen_bool(config.edge_probability) {
            edges.push(rand::seq::index::sample(rng, n, d).into_vec());
        }
    }
    let copies = if plant { config.k_max.min(n / d) } else { 0 };
    for c in 0..copies {
        edges.push((c * d..(c + 1) * d).collect());
    }
    let h = Hypergraph::new(d, n, edges).expect("sampled edges are valid");
    (h, copies > 0)
}

fn rand_graph(rng: &mut ChaCha8Rng, config: &TrialConfig, plant: bool) -> (SimpleGraph, bool) {
    let n = rng.gen_range(1..=config.n_max);
    let mut edges = Vec::new();
    'pairs: for u in 0..n {
        for v in u + 1..n {
            if edges.len() >= config.m_max {
                break 'pairs;
            }
            if rng.gen_bool(config.edge_probability) {
                edges.push((u, v));
            }
        }
    }
    // A star with d leaves occupies d+1 vertices; plant as many disjoint
    // copies as fit, up to k_max.
    let copies = if plant {
        config.k_max.min(n / (config.d + 1))
    } else {
        0
    };
    for c in 0..copies {
        let center = c * (config.d + 1);
        for leaf in 1..=config.d {
            edges.push((center, center + leaf));
        }
    }
    let g = SimpleGraph::new(n, edges).expect("sampled pairs are valid");
    (g, copies > 0)
}

fn rand_weighted(
    rng: &mut ChaCha8Rng,
    config: &TrialConfig,
    plant: bool,
) -> (WeightedPathGraph, bool) {
    let n = rng.gen_range(1..=config.n_max);
    let d = config.d as u32;
    let mut edges = Vec::new();
    'pairs: for u in 0..n {
        for v in u + 1..n {
            if edges.len() >= config.m_max {
                break 'pairs;
            }
            if rng.gen_bool(config.edge_probability) {
                edges.push((u, v, rng.gen_range(1..=d)));
            }
        }
    }
    for v in 0..n {
        if rng.gen_bool(config.edge_probability / 2.0) {
            edges.push((v, v, rng.gen_range(1..=d)));
        }
    }
    // A unit-weight chain of d edges meets the demand exactly; planted
    // copies are appended last so they overwrite any random weight.
    let copies = if plant {
        config.k_max.min(n / (config.d + 1))
    } else {
        0
    };
    for c in 0..copies {
        let base = c * (config.d + 1);
        for i in 0..config.d {
            edges.push((base + i, base + i + 1, 1));
        }
    }
    let g = WeightedPathGraph::new(n, d, edges).expect("sampled weights are in range");
    (g, copies > 0)
}

fn rand_partite(
    rng: &mut ChaCha8Rng,
    config: &TrialConfig,
    plant: bool,
) -> (PartitionedHypergraph, bool) {
    let d = config.d;
    let cs = (config.n_max / d).max(1);
    let n = d * cs;
    let color: Vec<usize> = (0..n).map(|v| v / cs).collect();
    let mut edges = Vec::new();
    // Sweep the full one-vertex-per-class edge space in mixed-radix order.
    let mut combo = vec![0usize; d];
    loop {
        if edges.len() < config.m_max && rng.gen_bool(config.edge_probability) {
            edges.push((0..d).map(|a| a * cs + combo[a]).collect::<Vec<_>>());
        }
        let mut axis = 0;
        while axis < d {
            combo[axis] += 1;
            if combo[axis] < cs {
                break;
            }
            combo[axis] = 0;
            axis += 1;
        }
        if axis == d {
            break;
        }
    }
    if plant {
        for j in 0..cs {
            edges.push((0..d).map(|a| a * cs + j).collect::<Vec<_>>());
        }
    }
    let h = Hypergraph::new(d, n, edges).expect("partite edges are valid");
    let g = PartitionedHypergraph::new(h, color).expect("classes are clean by construction");
    (g, plant)
}

/// Testing hook: corrupt the kernelizer's claim before the referee sees
/// it, proving the driver catches a lying kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Invert the kernel-side answer on every trial.
    FlipAnswer,
}

/// Outcome counts of one verification run.
///
/// `skipped` counts trials whose oracle budget ran out; a skipped trial is
/// never a pass. `max_size_ratio` is output size over the advertised
/// bound, maximized across trials (certificates and stalled runs are
/// exempt where the bound does not apply). Each failure dumps the
/// offending instance to disk and records the path.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub problem: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub stalled: usize,
    pub max_size_ratio: f64,
    pub failures: Vec<String>,
}

enum TrialOutcome {
    Pass { ratio: f64, stalled: bool },
    Fail { dump: PathBuf },
    Skip,
}

/// Runs `config.trials` randomized trials of the configured problem:
/// kernelize, then compare the kernel's answer against the exact oracle's
/// answer on the original instance, and check the size bound.
pub fn verify_kernel(config: &TrialConfig) -> VerifyReport {
    verify_kernel_mutated(config, Mutation::None)
}

pub fn verify_kernel_mutated(config: &TrialConfig, mutation: Mutation) -> VerifyReport {
    // Trials are independent; the pool maps them in parallel and the
    // indexed collect keeps aggregation order fixed.
    let outcomes: Vec<TrialOutcome> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(config, trial, mutation))
        .collect();
    let mut report = VerifyReport {
        problem: config.problem.name().to_string(),
        seed: config.seed,
        trials: config.trials,
        passed: 0,
        failed: 0,
        skipped: 0,
        stalled: 0,
        max_size_ratio: 0.0,
        failures: Vec::new(),
    };
    for outcome in outcomes {
        match outcome {
            TrialOutcome::Pass { ratio, stalled } => {
                report.passed += 1;
                report.stalled += stalled as usize;
                if ratio > report.max_size_ratio {
                    report.max_size_ratio = ratio;
                }
            }
            TrialOutcome::Fail { dump } => {
                report.failed += 1;
                report.failures.push(dump.display().to_string());
            }
            TrialOutcome::Skip => report.skipped += 1,
        }
    }
    report
}

/// Resolves a verdict to a yes/no claim, asking the oracle only when the
/// kernel left the question open.
fn settle(verdict: Verdict, open: impl FnOnce() -> OracleResult<bool>) -> OracleResult<bool> {
    match verdict {
        Verdict::Yes => Ok(true),
        Verdict::No => Ok(false),
        Verdict::Open => open(),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn run_trial(config: &TrialConfig, trial: u64, mutation: Mutation) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let k = rng.gen_range(1..=config.k_max.max(1));
    let d = config.d;
    // truth/claim: Err means the budget ran out mid-question.
    let (truth, claim, ratio, stalled, original) = match config.problem {
        Problem::SetMatching => {
            let (h, _) = rand_hypergraph(&mut rng, config, false);
            let truth = set_matching_at_least(&h, k, config.budget);
            let out = kernelize_set_matching(&h, k);
            let claim = settle(out.trace.verdict, || {
                set_matching_at_least(&out.graph, k, config.budget)
            });
            let bound = factorial(d) * ((d * k) as f64).powi(d as i32);
            (
                truth,
                claim,
                out.graph.m() as f64 / bound,
                false,
                Instance::Hypergraph(h),
            )
        }
        Problem::Star => {
            let (g, _) = rand_graph(&mut rng, config, false);
            let star = crate::graph::HPattern::star(d);
            let truth = h_matching_at_least(&g, &star, k, config.budget);
            let out = kernelize_star_matching(&g, d, k);
            let claim = settle(out.trace.verdict, || {
                h_matching_at_least(&out.graph, &star, k, config.budget)
            });
            // The size bound is advertised for open outputs; certificates
            // answer the question outright.
            let ratio = if out.trace.verdict == Verdict::Open {
                out.graph.m() as f64 / (d.pow(3) * k * k) as f64
            } else {
                0.0
            };
            (truth, claim, ratio, false, Instance::Graph(g))
        }
        Problem::P3 => {
            let (g, _) = rand_graph(&mut rng, config, false);
            let path = crate::graph::HPattern::path(3);
            let truth = h_matching_at_least(&g, &path, k, config.budget);
            let out = kernelize_p3(&g, k, DEFAULT_C);
            let claim = settle(out.trace.verdict, || {
                h_matching_at_least(&out.graph, &path, k, config.budget)
            });
            let stalled = out.trace.has_flag("degree-reduction-stalled");
            // Two advertised bounds when not stalled: |E| <= 24*C*k^2.5 and
            // max degree <= C*k^1.5; the ratio tracks the tighter squeeze.
            let ratio = if out.trace.verdict == Verdict::Open && !stalled {
                let edges = out.graph.m() as f64 / (24.0 * DEFAULT_C * (k as f64).powf(2.5));
                let top = out.graph.degrees().into_iter().max().unwrap_or(0);
                let degree = top as f64 / (DEFAULT_C * (k as f64).powf(1.5));
                edges.max(degree)
            } else {
                0.0
            };
            (truth, claim, ratio, stalled, Instance::Graph(g))
        }
        Problem::Pd => {
            let (g, _) = rand_weighted(&mut rng, config, false);
            let truth = weighted_path_matching_at_least(&g, d as u32, k, config.budget);
            let out = kernelize_pd(&g, d as u32, k);
            let claim = settle(out.output.trace.verdict, || {
                weighted_path_matching_at_least(&out.output.graph, d as u32, k, config.budget)
            });
            // Vertex bound: 4 * d^(d^2) * d^7 * k^3.
            let bound = 4.0
                * (d as f64).powi((d * d) as i32)
                * (d as f64).powi(7)
                * (k as f64).powi(3);
            (
                truth,
                claim,
                out.output.graph.n() as f64 / bound,
                false,
                Instance::WeightedPaths(g),
            )
        }
    };
    let (truth, claim) = match (truth, claim) {
        (Ok(t), Ok(c)) => (t, c),
        // Out of budget on either side: the trial is skipped, never passed.
        _ => return TrialOutcome::Skip,
    };
    let claim = match mutation {
        Mutation::None => claim,
        Mutation::FlipAnswer => !claim,
    };
    if claim == truth && ratio <= 1.0 {
        TrialOutcome::Pass { ratio, stalled }
    } else {
        TrialOutcome::Fail {
            dump: dump_instance(config, trial, &original),
        }
    }
}

/// Persists a failing instance in its text format for replay.
fn dump_instance(config: &TrialConfig, trial: u64, instance: &Instance) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "kernelpack-mismatch-{}-seed{}-trial{}.txt",
        config.problem.name(),
        config.seed,
        trial
    ));
    let _ = fs::write(&path, io::serialize(instance));
    path
}

/// One grid point of a size sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub mean_edges: f64,
    pub max_edges: usize,
    pub samples: usize,
}

/// A full sweep plus the least-squares slope of log(max) against log(k),
/// the observed growth exponent.
#[derive(Debug, Clone, Serialize)]
pub struct SizeCurve {
    pub problem: String,
    pub points: Vec<CurvePoint>,
    pub slope: f64,
}

/// Sweeps kernel output sizes over a strictly increasing `k` grid,
/// `config.trials` samples per point. Sizes are edges, except the
/// weighted-path kernel which reports vertices.
pub fn size_curve(config: &TrialConfig, ks: &[usize]) -> SizeCurve {
    assert!(
        ks.windows(2).all(|w| w[0] < w[1]),
        "the k grid must increase strictly"
    );
    let mut points = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        assert!(k >= 1, "k must be positive");
        // Stream (i * trials + j) keeps every sample independent of both
        // grid position and scheduling.
        let sizes: Vec<usize> = (0..config.trials)
            .into_par_iter()
            .map(|j| {
                let mut rng = trial_rng(config.seed, (i * config.trials + j) as u64);
                curve_sample(config, k, &mut rng)
            })
            .collect();
        let samples = sizes.len();
        let max_edges = sizes.iter().copied().max().unwrap_or(0);
        let mean_edges = if samples == 0 {
            0.0
        } else {
            sizes.iter().sum::<usize>() as f64 / samples as f64
        };
        points.push(CurvePoint {
            k,
            mean_edges,
            max_edges,
            samples,
        });
    }
    let slope = log_log_slope(&points);
    SizeCurve {
        problem: config.problem.name().to_string(),
        points,
        slope,
    }
}

fn curve_sample(config: &TrialConfig, k: usize, rng: &mut ChaCha8Rng) -> usize {
    match config.problem {
        Problem::SetMatching => {
            let (h, _) = rand_hypergraph(rng, config, false);
            kernelize_set_matching(&h, k).graph.m()
        }
        Problem::Star => {
            let (g, _) = rand_graph(rng, config, false);
            kernelize_star_matching(&g, config.d, k).graph.m()
        }
        Problem::P3 => {
            let (g, _) = rand_graph(rng, config, false);
            kernelize_p3(&g, k, DEFAULT_C).graph.m()
        }
        Problem::Pd => {
            let (g, _) = rand_weighted(rng, config, false);
            kernelize_pd(&g, config.d as u32, k).output.graph.n()
        }
    }
}

/// Slope of the least-squares line through (ln k, ln max); 0 when fewer
/// than two points carry signal.
fn log_log_slope(points: &[CurvePoint]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.max_edges >= 1)
        .map(|p| ((p.k as f64).ln(), (p.max_edges as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return 0.0;
    }
    (n * sxy - sx * sy) / denom
}

/// Renders a sweep as CSV with a fixed header and three-decimal means.
pub fn curve_csv(curve: &SizeCurve) -> String {
    let mut out = String::from("k,mean_edges,max_edges,samples\n");
    for p in &curve.points {
        out.push_str(&format!(
            "{},{:.3},{},{}\n",
            p.k, p.mean_edges, p.max_edges, p.samples
        ));
    }
    out
}
