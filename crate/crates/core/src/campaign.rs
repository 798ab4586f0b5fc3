//! Bulk verification campaigns over complex suites.
//!
//! Two modes share one report shape. *Enumerate* walks every simplicial
//! complex on up to 6 vertices (each downward-closed family, encoded as a
//! 64-bit face indicator), decides `d`-collapsibility with the memoized
//! dense solver, and checks the colorful face-count bound `f_k ≤ p_k` for
//! every coloring split and every `k` — plus the witness-color guarantee
//! when the color count is `d + 1`. *Random* samples maximal-face families
//! on given blocks, keeps only instances the search engine certifies
//! `d`-collapsible (witness replayed), and runs the same checks, optionally
//! sampling full exterior certificates.
//!
//! Campaigns are deterministic under their seed: random instances get
//! pre-drawn sub-seeds so parallel execution cannot reorder results, and
//! reports carry timing separately from the comparable payload.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, BoundParams};
use crate::collapse::{find_collapse, small::SmallCollapseSolver, CollapseOutcome};
use crate::complex::{ColorVector, ColoredComplex, Face};
use crate::exterior::{intersection_certificate, ArithmeticMode, CertificateBranch, CertificateError};

#[derive(Debug, Error, PartialEq)]
pub enum CampaignError {
    #[error("enumerate mode handles at most 6 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("at least one color block is required")]
    NoColors,
    #[error("random mode needs nonempty color blocks")]
    EmptyBlocks,
    #[error("at least one d value is required")]
    NoDValues,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CampaignMode {
    Enumerate,
    Random,
}

/// Campaign parameters. Enumerate mode uses `max_vertices` and `colors`;
/// random mode uses `n_per_color`, `instances`, `max_attempts`, and
/// `collapse_budget`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub mode: CampaignMode,
    pub d_values: Vec<usize>,
    pub seed: u64,
    #[serde(default)]
    pub max_vertices: usize,
    #[serde(default = "default_colors")]
    pub colors: usize,
    #[serde(default)]
    pub n_per_color: Vec<usize>,
    #[serde(default)]
    pub instances: usize,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    #[serde(default = "default_budget")]
    pub collapse_budget: u64,
    /// Run a full exterior certificate on every Nth accepted random
    /// instance (0 disables).
    #[serde(default)]
    pub certificate_sample: usize,
}

fn default_colors() -> usize {
    2
}

fn default_max_attempts() -> usize {
    10_000
}

fn default_budget() -> u64 {
    200_000
}

impl CampaignConfig {
    pub fn enumerate(max_vertices: usize, colors: usize, d_values: Vec<usize>) -> Self {
        CampaignConfig {
            mode: CampaignMode::Enumerate,
            d_values,
            seed: 0,
            max_vertices,
            colors,
            n_per_color: Vec::new(),
            instances: 0,
            max_attempts: default_max_attempts(),
            collapse_budget: default_budget(),
            certificate_sample: 0,
        }
    }

    pub fn random(n_per_color: Vec<usize>, d_values: Vec<usize>, instances: usize, seed: u64) -> Self {
        CampaignConfig {
            mode: CampaignMode::Random,
            d_values,
            seed,
            max_vertices: 0,
            colors: n_per_color.len(),
            n_per_color,
            instances,
            max_attempts: default_max_attempts(),
            collapse_budget: default_budget(),
            certificate_sample: 0,
        }
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.d_values.is_empty() {
            return Err(CampaignError::NoDValues);
        }
        match self.mode {
            CampaignMode::Enumerate => {
                if self.max_vertices > 6 {
                    return Err(CampaignError::TooManyVertices(self.max_vertices));
                }
                if self.colors == 0 {
                    return Err(CampaignError::NoColors);
                }
            }
            CampaignMode::Random => {
                if self.n_per_color.is_empty() || self.n_per_color.contains(&0) {
                    return Err(CampaignError::EmptyBlocks);
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `f_k > p_k` on a certified `d`-collapsible complex.
    FaceBound,
    /// No color met its threshold in the witness-color check.
    HellyWitness,
    /// An exterior certificate contradicted the expected dimensions.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub complex: ColoredComplex,
    pub d: usize,
    pub k: Option<ColorVector>,
    pub detail: String,
}

/// The longest collapse witness seen, kept as a sample extreme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeWitness {
    pub complex: ColoredComplex,
    pub d: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub mode: CampaignMode,
    pub d_values: Vec<usize>,
    pub seed: u64,
    /// Complexes considered (families in enumerate mode, draws in random
    /// mode), summed over `d` values.
    pub complexes_examined: u64,
    /// (complex, d) pairs certified d-collapsible.
    pub collapsible_instances: u64,
    /// (complex, d, k) bound comparisons performed.
    pub bound_checks: u64,
    /// Witness-color checks performed (color count = d + 1 only).
    pub helly_checks: u64,
    /// Sampled cross-checks routed through the general-purpose library
    /// paths instead of the dense fast path.
    pub cross_checks: u64,
    /// Full exterior certificates run.
    pub certificate_runs: u64,
    /// Bound comparisons achieving f_k = p_k with f_k > 0.
    pub tight_cases: u64,
    pub discarded_not_collapsible: u64,
    pub discarded_budget: u64,
    /// Random mode: requested minus accepted instances.
    pub shortfall: u64,
    pub violations: Vec<Violation>,
    pub extreme_witness: Option<ExtremeWitness>,
    /// Wall-clock milliseconds; excluded from determinism comparisons.
    pub elapsed_ms: u64,
}

impl CampaignReport {
    fn new(cfg: &CampaignConfig) -> Self {
        CampaignReport {
            mode: cfg.mode,
            d_values: cfg.d_values.clone(),
            seed: cfg.seed,
            complexes_examined: 0,
            collapsible_instances: 0,
            bound_checks: 0,
            helly_checks: 0,
            cross_checks: 0,
            certificate_runs: 0,
            tight_cases: 0,
            discarded_not_collapsible: 0,
            discarded_budget: 0,
            shortfall: 0,
            violations: Vec::new(),
            extreme_witness: None,
            elapsed_ms: 0,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = CampaignReport::new(cfg);
    match cfg.mode {
        CampaignMode::Enumerate => enumerate_campaign(cfg, &mut report),
        CampaignMode::Random => random_campaign(cfg, &mut report),
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Admissible-set counts for a fixed split, indexed by (r, k) with each
/// vector flattened into one array offset. Everything on ≤ 6 vertices fits
/// in u64 comfortably.
struct PTable {
    split: Vec<usize>,
    /// stride per color: (n_i + 1); r-part then k-part.
    values: Vec<u64>,
}

impl PTable {
    fn build(split: &[usize], d: usize) -> PTable {
        let c = split.len();
        let dims: Vec<usize> = split.iter().map(|&n| n + 1).collect();
        let total: usize = dims.iter().product::<usize>().pow(2);
        let mut values = vec![0u64; total];
        let mut r = vec![0usize; c];
        'outer: loop {
            let params = BoundParams::new(
                ColorVector(split.to_vec()),
                d,
                ColorVector(r.clone()),
            )
            .expect("r ≤ n by construction");
            let mut k = vec![0usize; c];
            loop {
                let p = bounds::admissible_count(&params, &ColorVector(k.clone()));
                let idx = Self::index_of(split, &r, &k);
                values[idx] = num::ToPrimitive::to_u64(&p).expect("tiny counts");
                if !increment(&mut k, split) {
                    break;
                }
            }
            if !increment(&mut r, split) {
                break 'outer;
            }
        }
        PTable {
            split: split.to_vec(),
            values,
        }
    }

    fn index_of(split: &[usize], r: &[usize], k: &[usize]) -> usize {
        let mut idx = 0usize;
        for (i, &n) in split.iter().enumerate() {
            idx = idx * (n + 1) + r[i];
        }
        for (i, &n) in split.iter().enumerate() {
            idx = idx * (n + 1) + k[i];
        }
        idx
    }

    fn get(&self, r: &[usize], k: &[usize]) -> u64 {
        self.values[Self::index_of(&self.split, r, k)]
    }
}

/// Odometer increment of `v` bounded componentwise by `limit`; false when
/// the odometer wraps to all zeros.
fn increment(v: &mut [usize], limit: &[usize]) -> bool {
    for i in 0..v.len() {
        v[i] += 1;
        if v[i] <= limit[i] {
            return true;
        }
        v[i] = 0;
    }
    false
}

/// Compositions of `n` into `c` positive parts.
fn splits(n: usize, c: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, c: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if c == 1 {
            if n >= 1 {
                acc.push(n);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for first in 1..=n.saturating_sub(c - 1) {
            acc.push(first);
            rec(n - first, c - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if c >= 1 {
        rec(n, c, &mut Vec::new(), &mut out);
    }
    out
}

fn complex_from_mask(solver: &SmallCollapseSolver, state: u64, split: &[usize]) -> ColoredComplex {
    let n = solver.n();
    let mut maximal = Vec::new();
    let mut rest = state;
    // Extract maximal subsets: those with no included strict superset.
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut is_max = true;
        for v in 0..n {
            let ext = s | (1 << v);
            if ext != s && state >> ext & 1 == 1 {
                is_max = false;
                break;
            }
        }
        if is_max {
            maximal.push(Face::from_vertices((0..n).filter(|v| s >> v & 1 == 1)));
        }
    }
    ColoredComplex::new(ColorVector(split.to_vec()), maximal).expect("mask vertices in range")
}

const CROSS_CHECK_STRIDE: u64 = 250_000;

fn enumerate_campaign(cfg: &CampaignConfig, report: &mut CampaignReport) {
    for &d in &cfg.d_values {
        for n in 1..=cfg.max_vertices {
            let splits = splits(n, cfg.colors);
            if splits.is_empty() {
                continue;
            }
            let tables: Vec<PTable> = splits.iter().map(|s| PTable::build(s, d)).collect();
            let mut solver = SmallCollapseSolver::new(n, d);
            // Precompute per-subset block population counts per split.
            let size = 1usize << n;
            let mut block_pops: Vec<Vec<Vec<u8>>> = Vec::with_capacity(splits.len());
            for split in &splits {
                let mut starts = vec![0usize];
                for &b in split {
                    starts.push(starts.last().unwrap() + b);
                }
                let per_subset: Vec<Vec<u8>> = (0..size)
                    .map(|s| {
                        (0..split.len())
                            .map(|i| {
                                let mask = ((1usize << split[i]) - 1) << starts[i];
                                ((s & mask).count_ones()) as u8
                            })
                            .collect()
                    })
                    .collect();
                block_pops.push(per_subset);
            }
            // Sub-closure masks for the antichain walk.
            let mut sub_closure = vec![0u64; size];
            for s in 0..size {
                let mut acc = 0u64;
                let mut t = s;
                loop {
                    acc |= 1 << t;
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & s;
                }
                sub_closure[s] = acc;
            }
            let mut order: Vec<usize> = (0..size).collect();
            order.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));

            // Walk all downward-closed families: decide subsets largest
            // first; including a subset forces all of its subsets in.
            let mut stack: Vec<(usize, u64, u64)> = vec![(0, 0, 0)];
            while let Some((idx, state, required)) = stack.pop() {
                if idx == order.len() {
                    process_family(
                        cfg, report, d, &splits, &tables, &block_pops, &mut solver, state,
                    );
                    continue;
                }
                let s = order[idx];
                let include = (idx + 1, state | (1 << s), required | sub_closure[s]);
                if required >> s & 1 == 1 {
                    stack.push(include);
                } else {
                    stack.push((idx + 1, state, required));
                    stack.push(include);
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn process_family(
    cfg: &CampaignConfig,
    report: &mut CampaignReport,
    d: usize,
    splits: &[Vec<usize>],
    tables: &[PTable],
    block_pops: &[Vec<Vec<u8>>],
    solver: &mut SmallCollapseSolver,
    state: u64,
) {
    report.complexes_examined += 1;
    if !solver.is_collapsible_mask(state) {
        report.discarded_not_collapsible += 1;
        return;
    }
    report.collapsible_instances += 1;
    let n = solver.n();
    let size = 1usize << n;
    for (split_idx, split) in splits.iter().enumerate() {
        let c = split.len();
        let pops = &block_pops[split_idx];
        let dims: Vec<usize> = split.iter().map(|&b| b + 1).collect();
        let stride: usize = dims.iter().product();
        // f_k histogram and per-block r in one pass over the 2^n subsets.
        let mut f = vec![0u64; stride];
        let mut r = vec![0usize; c];
        for s in 0..size {
            if state >> s & 1 == 0 {
                continue;
            }
            let mut idx = 0usize;
            for i in 0..c {
                let p = pops[s][i] as usize;
                idx = idx * dims[i] + p;
                if p > r[i] {
                    r[i] = p;
                }
            }
            f[idx] += 1;
        }
        let table = &tables[split_idx];
        let mut k = vec![0usize; c];
        loop {
            let mut idx = 0usize;
            for i in 0..c {
                idx = idx * dims[i] + k[i];
            }
            let f_k = f[idx];
            let p_k = table.get(&r, &k);
            report.bound_checks += 1;
            if f_k > p_k {
                report.violations.push(Violation {
                    kind: ViolationKind::FaceBound,
                    complex: complex_from_mask(solver, state, split),
                    d,
                    k: Some(ColorVector(k.clone())),
                    detail: format!("f_k = {f_k} exceeds p_k = {p_k} with r = {r:?}"),
                });
            } else if f_k == p_k && f_k > 0 {
                report.tight_cases += 1;
            }
            if !increment(&mut k, split) {
                break;
            }
        }
        // Witness-color check at k = (1,...,1) when c = d + 1.
        if c == d + 1 {
            report.helly_checks += 1;
            let mut ones_idx = 0usize;
            for i in 0..c {
                ones_idx = ones_idx * dims[i] + 1;
            }
            let total: u64 = split.iter().map(|&b| b as u64).product();
            let alpha = f[ones_idx] as f64 / total as f64;
            let beta_required = bounds::beta_optimal(alpha, d);
            let best = (0..c)
                .map(|i| r[i] as f64 / split[i] as f64)
                .fold(0.0f64, f64::max);
            if best + 1e-9 < beta_required {
                report.violations.push(Violation {
                    kind: ViolationKind::HellyWitness,
                    complex: complex_from_mask(solver, state, split),
                    d,
                    k: Some(ColorVector(vec![1; c])),
                    detail: format!(
                        "no block reaches beta = {beta_required:.6}: alpha = {alpha:.6}, dims+1 = {r:?}"
                    ),
                });
            }
        }
    }
    // Occasionally replay the whole check through the general library
    // paths to keep this fast path honest.
    if report.collapsible_instances % CROSS_CHECK_STRIDE == 0 {
        report.cross_checks += 1;
        let split = &splits[0];
        let cx = complex_from_mask(solver, state, split);
        let general = find_collapse(&cx, d, cfg.collapse_budget);
        match general {
            CollapseOutcome::Collapsible(seq) => seq.replay(&cx).expect("witness replays"),
            CollapseOutcome::NotCollapsible => panic!("engines disagree on {cx:?}"),
            CollapseOutcome::BudgetExhausted { .. } => {}
        }
        if let Some(w) = solver.witness_mask(state) {
            w.replay(&cx).expect("dense witness replays");
        }
        let mut k = vec![0usize; split.len()];
        loop {
            let verdict = bounds::verify_face_bound(&cx, d, &ColorVector(k.clone()));
            assert!(verdict.holds, "library disagrees with fast path on {cx:?}");
            if !increment(&mut k, split) {
                break;
            }
        }
    }
}

/// Outcome of one random draw, computed in parallel batches.
enum DrawOutcome {
    Accepted {
        complex: ColoredComplex,
        witness_steps: usize,
        violations: Vec<Violation>,
        bound_checks: u64,
        helly_checks: u64,
        tight_cases: u64,
    },
    NotCollapsible,
    Budget,
}

fn random_campaign(cfg: &CampaignConfig, report: &mut CampaignReport) {
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &d in &cfg.d_values {
        let sub_seeds: Vec<u64> = (0..cfg.max_attempts).map(|_| master.gen()).collect();
        let mut accepted = 0usize;
        let mut next = 0usize;
        let mut accepted_total = 0usize;
        while accepted < cfg.instances && next < cfg.max_attempts {
            let want = cfg.instances - accepted;
            let chunk = (want + want / 2 + 8).min(cfg.max_attempts - next);
            let outcomes: Vec<DrawOutcome> = sub_seeds[next..next + chunk]
                .par_iter()
                .map(|&s| run_one_draw(cfg, d, s))
                .collect();
            next += chunk;
            for (offset, outcome) in outcomes.into_iter().enumerate() {
                if accepted >= cfg.instances {
                    break;
                }
                report.complexes_examined += 1;
                match outcome {
                    DrawOutcome::Accepted {
                        complex,
                        witness_steps,
                        violations,
                        bound_checks,
                        helly_checks,
                        tight_cases,
                    } => {
                        accepted += 1;
                        accepted_total += 1;
                        report.collapsible_instances += 1;
                        report.bound_checks += bound_checks;
                        report.helly_checks += helly_checks;
                        report.tight_cases += tight_cases;
                        report.violations.extend(violations);
                        if report
                            .extreme_witness
                            .as_ref()
                            .map_or(true, |w| witness_steps > w.steps)
                        {
                            report.extreme_witness = Some(ExtremeWitness {
                                complex: complex.clone(),
                                d,
                                steps: witness_steps,
                            });
                        }
                        if cfg.certificate_sample > 0
                            && accepted_total % cfg.certificate_sample == 0
                        {
                            run_certificate_check(
                                report,
                                &complex,
                                d,
                                sub_seeds[next - chunk + offset],
                            );
                        }
                    }
                    DrawOutcome::NotCollapsible => report.discarded_not_collapsible += 1,
                    DrawOutcome::Budget => report.discarded_budget += 1,
                }
            }
        }
        report.shortfall += (cfg.instances - accepted) as u64;
    }
}

fn run_certificate_check(report: &mut CampaignReport, cx: &ColoredComplex, d: usize, seed: u64) {
    let k = ColorVector(vec![1; cx.c()]);
    match intersection_certificate(cx, d, &k, ArithmeticMode::Exact, seed) {
        Ok(cert) => {
            report.certificate_runs += 1;
            let bad_kernel = cert.kernel_bound_holds == Some(false);
            let bad_intersection =
                cert.branch == CertificateBranch::Algebraic && cert.intersection_trivial != Some(true);
            if bad_kernel || bad_intersection || !cert.face_bound_holds {
                report.violations.push(Violation {
                    kind: ViolationKind::Certificate,
                    complex: cx.clone(),
                    d,
                    k: Some(k),
                    detail: format!(
                        "dims: kernel={:?} intersection={:?} f={} p={}",
                        cert.dim_kernel, cert.dim_intersection, cert.f_k, cert.p_k
                    ),
                });
            }
        }
        Err(CertificateError::TooLarge { .. }) => {}
        Err(e) => panic!("certificate setup failed: {e}"),
    }
}

fn run_one_draw(cfg: &CampaignConfig, d: usize, seed: u64) -> DrawOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cx = sample_complex(&cfg.n_per_color, &mut rng);
    match find_collapse(&cx, d, cfg.collapse_budget) {
        CollapseOutcome::NotCollapsible => DrawOutcome::NotCollapsible,
        CollapseOutcome::BudgetExhausted { .. } => DrawOutcome::Budget,
        CollapseOutcome::Collapsible(seq) => {
            seq.replay(&cx).expect("search witnesses replay");
            let mut violations = Vec::new();
            let mut bound_checks = 0u64;
            let mut helly_checks = 0u64;
            let mut tight_cases = 0u64;
            let n = cfg.n_per_color.clone();
            let mut k = vec![0usize; n.len()];
            loop {
                let kv = ColorVector(k.clone());
                let verdict = bounds::verify_face_bound(&cx, d, &kv);
                bound_checks += 1;
                if !verdict.holds {
                    violations.push(Violation {
                        kind: ViolationKind::FaceBound,
                        complex: cx.clone(),
                        d,
                        k: Some(kv.clone()),
                        detail: format!("f_k = {} exceeds p_k = {}", verdict.f, verdict.bound),
                    });
                } else if verdict.f > 0 && verdict.f.to_string() == verdict.bound {
                    tight_cases += 1;
                }
                if !increment(&mut k, &n) {
                    break;
                }
            }
            if cx.c() == d + 1 {
                helly_checks += 1;
                let verdict = bounds::verify_helly_witness(&cx, d).expect("c = d + 1");
                if verdict.witness.is_none() {
                    violations.push(Violation {
                        kind: ViolationKind::HellyWitness,
                        complex: cx.clone(),
                        d,
                        k: None,
                        detail: format!(
                            "alpha = {:.6} requires beta = {:.6}, dims = {:?}",
                            verdict.alpha, verdict.beta_required, verdict.dims
                        ),
                    });
                }
            }
            DrawOutcome::Accepted {
                witness_steps: seq.steps.len(),
                complex: cx,
                violations,
                bound_checks,
                helly_checks,
                tight_cases,
            }
        }
    }
}

/// Draw a random complex on the given blocks: a handful of maximal faces
/// with size-biased membership, reduced to an antichain by the constructor.
fn sample_complex(n_per_color: &[usize], rng: &mut ChaCha8Rng) -> ColoredComplex {
    let n: usize = n_per_color.iter().sum();
    let face_count = rng.gen_range(1..=2 * n);
    let faces: Vec<Face> = (0..face_count)
        .map(|_| {
            // Bias towards mid-size faces: keep each vertex with a random
            // per-face probability.
            let keep = rng.gen_range(0.2..0.9);
            let f: Face = (0..n).filter(|_| rng.gen::<f64>() < keep).collect();
            f
        })
        .collect();
    ColoredComplex::new(ColorVector(n_per_color.to_vec()), faces)
        .expect("sampled vertices in range")
}
