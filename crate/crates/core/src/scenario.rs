//! Ensemble experiments on the Cartesian product of two QL bits.
//!
//! Every preparation draws its own frequency offsets and initial phases from
//! `base_seed + index`, integrates the oscillator network, and records the
//! effective four-state coefficients at evenly spaced sample times. Sample
//! by sample, the coefficients are reduced in preparation order into a
//! density matrix, so the result does not depend on the worker count.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QlError, Result};
use crate::graph::{cartesian_product, ql_bit, BiasedGraph, BlockIndicator};
use crate::kuramoto::{
    integrate, order_parameter, sample_frequencies, sample_initial_phases, CouplingNetwork,
    CouplingSign, OrderParameter, OscillatorParams, PhaseInit, PhaseState,
};
use crate::lohe::sample_schedule;
use crate::qlstate::{
    density_from_coefficients, effective_basis, emergent_eigenvector, project_onto, purity,
    transform_adjacency, DensityMatrix, EmergentFrame,
};
use crate::spectrum::{spectral_gap, spectrum};

/// How the emergent eigenvector is obtained at each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eigensolver {
    /// Diagonalize the graph once and rotate its top eigenvector by `Φ⁻¹`.
    #[default]
    Frame,
    /// Diagonalize `Φ⁻¹AΦ` at every sample.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    /// Vertices per subgraph.
    pub n0: usize,
    /// Degree of each subgraph.
    pub d: usize,
    /// Probability of each cross edge inside a QL bit.
    pub p_connect: f64,
    /// Bias of QL bit A's connecting edges, `[re, im]`.
    pub bias_a: [f64; 2],
    /// Bias of QL bit B's connecting edges, `[re, im]`.
    pub bias_b: [f64; 2],
    /// Graph seed; defaults to the ensemble base seed.
    pub seed: Option<u64>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            n0: 8,
            d: 5,
            p_connect: 0.2,
            bias_a: [1.0, 0.0],
            bias_b: [1.0, 0.0],
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub coupling: f64,
    pub sigma_nu: f64,
    pub mean_freq: f64,
    pub init: PhaseInit,
    /// Run length in mean periods `2π / mean_freq`.
    pub periods: f64,
    pub steps_per_period: usize,
    pub coupling_sign: CouplingSign,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            coupling: 250.0,
            sigma_nu: 1.0,
            mean_freq: 100.0,
            init: PhaseInit::Uniform,
            periods: 80.0,
            steps_per_period: 100,
            coupling_sign: CouplingSign::Attractive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub m: usize,
    pub base_seed: u64,
    /// Draw a fresh graph for every preparation.
    pub graph_resample: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            m: 100,
            base_seed: 0,
            graph_resample: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    pub n_samples: usize,
    pub eigensolver: Eigensolver,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            n_samples: 40,
            eigensolver: Eigensolver::Frame,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv: PathBuf::from("run.csv"),
            json: PathBuf::from("run.json"),
            svg: false,
        }
    }
}

/// Full experiment description. Every field has a default, so `{}` is a
/// valid config (the desk-scale synchronization run).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub graph: GraphConfig,
    pub dynamics: DynamicsConfig,
    pub ensemble: EnsembleConfig,
    pub sampling: SamplingConfig,
    pub outputs: OutputConfig,
}

/// Mean degree of a product-graph vertex, `2 (d + p n0)`.
fn product_degree(n0: usize, d: usize, p: f64) -> f64 {
    2.0 * (d as f64 + p * n0 as f64)
}

impl ScenarioConfig {
    /// Paper-scale synchronization run: `n0 = 20`, `d = 15`, `N = 1600`,
    /// `K = 250`, near-uniform initial phases.
    pub fn paper_sync() -> Self {
        Self {
            graph: GraphConfig {
                n0: 20,
                d: 15,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    /// Paper-scale dephasing run: weak coupling `K = 30`, all phases
    /// initially within circular std 0.001, 500 preparations.
    pub fn paper_dephasing() -> Self {
        let mut c = Self::paper_sync();
        c.dynamics.coupling = 30.0;
        c.dynamics.init = PhaseInit::VonMises {
            circ_std: 0.001,
            mu: 0.0,
        };
        c.ensemble.m = 500;
        c
    }

    /// Coupling that gives the desk-scale graph the same per-oscillator
    /// coupling `K <deg> / N` as a paper-scale coupling `k_paper`.
    pub fn desk_coupling(k_paper: f64) -> f64 {
        let paper = GraphConfig {
            n0: 20,
            d: 15,
            ..Default::default()
        };
        let desk = GraphConfig::default();
        let per_osc =
            |g: &GraphConfig| product_degree(g.n0, g.d, g.p_connect) / (4 * g.n0 * g.n0) as f64;
        k_paper * per_osc(&paper) / per_osc(&desk)
    }

    /// Desk-scale counterpart of [`ScenarioConfig::paper_sync`]: the same
    /// `K / σ_ν = 250` on the `n0 = 8` graph. This is the default config.
    pub fn desk_sync() -> Self {
        Self::default()
    }

    /// Desk-scale counterpart of [`ScenarioConfig::paper_dephasing`].
    pub fn desk_dephasing() -> Self {
        let mut c = Self::paper_dephasing();
        c.graph = GraphConfig::default();
        c.dynamics.coupling = Self::desk_coupling(30.0);
        c
    }

    pub fn oscillator_params(&self) -> OscillatorParams {
        OscillatorParams {
            coupling: self.dynamics.coupling,
            sigma_nu: self.dynamics.sigma_nu,
            mean_freq: self.dynamics.mean_freq,
            coupling_sign: self.dynamics.coupling_sign,
            normalization: None,
        }
    }

    pub fn graph_seed(&self) -> u64 {
        self.graph.seed.unwrap_or(self.ensemble.base_seed)
    }

    pub fn total_steps(&self) -> usize {
        (self.dynamics.periods * self.dynamics.steps_per_period as f64).round() as usize
    }

    pub fn dt(&self) -> f64 {
        self.oscillator_params().period() / self.dynamics.steps_per_period as f64
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if g.n0 < 2 {
            return Err(QlError::config("graph.n0", "must be >= 2"));
        }
        if g.d == 0 || g.d >= g.n0 || (g.n0 * g.d) % 2 == 1 {
            return Err(QlError::config(
                "graph.d",
                format!(
                    "need 0 < d < n0 and n0 * d even, got n0 = {}, d = {}",
                    g.n0, g.d
                ),
            ));
        }
        if !(0.0..=1.0).contains(&g.p_connect) {
            return Err(QlError::config("graph.p_connect", "must lie in [0, 1]"));
        }
        for (field, b) in [("graph.bias_a", g.bias_a), ("graph.bias_b", g.bias_b)] {
            if (b[0].hypot(b[1]) - 1.0).abs() > crate::graph::BIAS_TOL {
                return Err(QlError::config(field, "must have unit modulus"));
            }
        }
        let d = &self.dynamics;
        if !(d.coupling.is_finite() && d.coupling >= 0.0) {
            return Err(QlError::config("dynamics.coupling", "must be >= 0"));
        }
        if !(d.sigma_nu.is_finite() && d.sigma_nu >= 0.0) {
            return Err(QlError::config("dynamics.sigma_nu", "must be >= 0"));
        }
        if !(d.mean_freq.is_finite() && d.mean_freq > 0.0) {
            return Err(QlError::config("dynamics.mean_freq", "must be > 0"));
        }
        if let PhaseInit::VonMises { circ_std, mu } = d.init {
            if !(circ_std.is_finite() && circ_std > 0.0 && mu.is_finite()) {
                return Err(QlError::config(
                    "dynamics.init",
                    "circ_std must be > 0 and mu finite",
                ));
            }
        }
        if !(d.periods.is_finite() && d.periods > 0.0) {
            return Err(QlError::config("dynamics.periods", "must be > 0"));
        }
        if d.steps_per_period == 0 {
            return Err(QlError::config("dynamics.steps_per_period", "must be >= 1"));
        }
        if self.total_steps() == 0 {
            return Err(QlError::config(
                "dynamics.periods",
                "run is shorter than one step",
            ));
        }
        if self.ensemble.m == 0 {
            return Err(QlError::config("ensemble.m", "must be >= 1"));
        }
        if self.sampling.n_samples < 2 {
            return Err(QlError::config("sampling.n_samples", "must be >= 2"));
        }
        Ok(())
    }

    /// Build the product graph `G_A □ G_B` for a given seed.
    pub fn build_graph(&self, seed: u64) -> Result<BiasedGraph> {
        let g = &self.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let bias = |b: [f64; 2]| Complex64::new(b[0], b[1]);
        let a = ql_bit(
            g.n0,
            g.d,
            g.p_connect,
            bias(g.bias_a),
            ("a1", "a2"),
            rng.gen(),
        )?;
        let b = ql_bit(
            g.n0,
            g.d,
            g.p_connect,
            bias(g.bias_b),
            ("b1", "b2"),
            rng.gen(),
        )?;
        Ok(cartesian_product(&a, &b))
    }
}

/// Ensemble observables at one sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Time in mean periods.
    pub t: f64,
    pub order_re: f64,
    pub order_mod: f64,
    pub purity: f64,
    pub rho: DensityMatrix,
    pub residual_mean: f64,
}

/// Spectral facts about the graph a run used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    /// The six largest eigenvalues, ascending.
    pub top_eigenvalues: Vec<f64>,
    pub spectral_gap: f64,
    pub degenerate: bool,
}

impl GraphSummary {
    pub fn of(g: &BiasedGraph) -> Self {
        let s = spectrum(g);
        let top = s.eigenvalues[s.len().saturating_sub(6)..].to_vec();
        let gap = if s.len() >= 2 {
            spectral_gap(&s)
        } else {
            f64::INFINITY
        };
        Self {
            n: g.n(),
            edges: g.edges().len(),
            top_eigenvalues: top,
            spectral_gap: gap,
            degenerate: gap < crate::qlstate::DEGENERACY_GAP,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub graph: GraphSummary,
    pub records: Vec<RunRecord>,
    pub warnings: Vec<String>,
    /// Effective coefficients of every preparation at the final sample.
    #[serde(skip)]
    pub final_coefficients: Vec<Vec<Complex64>>,
}

impl ScenarioRun {
    pub fn last(&self) -> &RunRecord {
        self.records.last().expect("runs have at least two samples")
    }
}

struct Prepared {
    graph: BiasedGraph,
    net: CouplingNetwork,
    frame: EmergentFrame,
    basis: Vec<BlockIndicator>,
}

impl Prepared {
    fn new(graph: BiasedGraph) -> Result<Self> {
        let basis = effective_basis(&graph)?;
        Ok(Self {
            net: CouplingNetwork::from_graph(&graph),
            frame: EmergentFrame::new(&graph),
            basis,
            graph,
        })
    }
}

struct Trace {
    order: Vec<OrderParameter>,
    coefficients: Vec<Vec<Complex64>>,
    residual: Vec<f64>,
}

fn run_realization(
    config: &ScenarioConfig,
    index: usize,
    shared: Option<&Prepared>,
    schedule: &[usize],
) -> Result<Trace> {
    let owned;
    let prep = match shared {
        Some(p) => p,
        None => {
            owned =
                Prepared::new(config.build_graph(config.graph_seed().wrapping_add(index as u64))?)?;
            &owned
        }
    };
    let n = prep.graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.ensemble.base_seed.wrapping_add(index as u64));
    let epsilon = sample_frequencies(n, config.dynamics.sigma_nu, &mut rng)?;
    let theta = sample_initial_phases(n, config.dynamics.init, &mut rng)?;
    let state0 = PhaseState::new(theta, epsilon)?;
    let mut trace = Trace {
        order: Vec::with_capacity(schedule.len()),
        coefficients: Vec::with_capacity(schedule.len()),
        residual: Vec::with_capacity(schedule.len()),
    };
    let params = config.oscillator_params();
    integrate(
        &state0,
        &params,
        &prep.net,
        config.dt(),
        config.total_steps(),
        schedule,
        |_, _, th| {
            let v = match config.sampling.eigensolver {
                Eigensolver::Frame => prep.frame.at_phases(th)?.vector,
                Eigensolver::Direct => {
                    emergent_eigenvector(&transform_adjacency(&prep.graph, th)?)?.vector
                }
            };
            let s = project_onto(&v, &prep.basis, 0.0)?;
            trace.order.push(order_parameter(th));
            trace.coefficients.push(s.coefficients);
            trace.residual.push(s.residual);
            Ok(())
        },
    )
    .map_err(|e| e.in_realization(index))?;
    Ok(trace)
}

/// Run on the global rayon pool.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    run_scenario_with_workers(config, None)
}

/// Run with `workers` threads (`None`: rayon's default pool).
pub fn run_scenario_with_workers(
    config: &ScenarioConfig,
    workers: Option<usize>,
) -> Result<ScenarioRun> {
    config.validate()?;
    let schedule = sample_schedule(config.total_steps(), config.sampling.n_samples);
    let base_graph = config.build_graph(config.graph_seed())?;
    let summary = GraphSummary::of(&base_graph);
    let mut warnings = Vec::new();
    if summary.degenerate {
        warnings.push(format!(
            "emergent eigenvalue {} is degenerate (gap {:.3e}); using one vector of the top eigenspace",
            summary.top_eigenvalues.last().copied().unwrap_or(f64::NAN),
            summary.spectral_gap
        ));
    }
    let shared = if config.ensemble.graph_resample {
        None
    } else {
        Some(Prepared::new(base_graph)?)
    };

    let m = config.ensemble.m;
    let work = || -> Vec<Result<Trace>> {
        (0..m)
            .into_par_iter()
            .map(|i| run_realization(config, i, shared.as_ref(), &schedule))
            .collect()
    };
    let traces = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| QlError::Parameter(format!("cannot build worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    let traces = traces.into_iter().collect::<Result<Vec<_>>>()?;

    let dim = traces[0].coefficients[0].len();
    let records = schedule
        .iter()
        .enumerate()
        .map(|(s, &step)| {
            let rho = density_from_coefficients(
                traces.iter().map(|t| t.coefficients[s].as_slice()),
                dim,
            )?;
            let mean = |f: &dyn Fn(&Trace) -> f64| traces.iter().map(f).sum::<f64>() / m as f64;
            Ok(RunRecord {
                t: step as f64 / config.dynamics.steps_per_period as f64,
                order_re: mean(&|t| t.order[s].re),
                order_mod: mean(&|t| t.order[s].modulus),
                purity: purity(&rho),
                residual_mean: mean(&|t| t.residual[s]),
                rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let last = schedule.len() - 1;
    Ok(ScenarioRun {
        config: config.clone(),
        graph: summary,
        records,
        warnings,
        final_coefficients: traces
            .iter()
            .map(|t| t.coefficients[last].clone())
            .collect(),
    })
}

/// Final observables of one coupling value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coupling: f64,
    pub final_order_re: f64,
    pub final_order_mod: f64,
    pub final_purity: f64,
}

pub fn sweep_coupling(
    base: &ScenarioConfig,
    couplings: &[f64],
    workers: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if couplings.is_empty() {
        return Err(QlError::Parameter("empty coupling list".into()));
    }
    couplings
        .iter()
        .map(|&k| {
            let mut c = base.clone();
            c.dynamics.coupling = k;
            let run = run_scenario_with_workers(&c, workers)?;
            let last = run.last();
            Ok(SweepRow {
                coupling: k,
                final_order_re: last.order_re,
                final_order_mod: last.order_mod,
                final_purity: last.purity,
            })
        })
        .collect()
}

/// Bootstrap standard error of the purity of `coefficients`.
pub fn bootstrap_purity_stderr(
    coefficients: &[Vec<Complex64>],
    n_boot: usize,
    seed: u64,
) -> Result<f64> {
    use rand::Rng;
    let m = coefficients.len();
    let dim = coefficients
        .first()
        .map(|c| c.len())
        .ok_or_else(|| QlError::Parameter("no states".into()))?;
    if n_boot < 2 {
        return Err(QlError::Parameter(
            "need at least two bootstrap draws".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n_boot);
    for _ in 0..n_boot {
        let pick: Vec<usize> = (0..m).map(|_| rng.gen_range(0..m)).collect();
        let rho = density_from_coefficients(pick.iter().map(|&i| coefficients[i].as_slice()), dim)?;
        samples.push(purity(&rho));
    }
    let mean = samples.iter().sum::<f64>() / n_boot as f64;
    let var = samples.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n_boot - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(mut c: ScenarioConfig) -> ScenarioConfig {
        c.dynamics.periods = 4.0;
        c.dynamics.steps_per_period = 20;
        c.sampling.n_samples = 5;
        c.ensemble.m = 6;
        c
    }

    #[test]
    fn empty_json_is_the_default_config() {
        let c: ScenarioConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        c.validate().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ScenarioConfig>(&text).unwrap(), c);
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"graph": {"nzero": 3}}"#).is_err());
    }

    #[test]
    fn invalid_fields_are_named() {
        let mut c = ScenarioConfig::default();
        c.ensemble.m = 0;
        assert!(
            matches!(c.validate(), Err(QlError::Config { ref field, .. }) if field == "ensemble.m")
        );
        let mut c = ScenarioConfig::default();
        c.graph.d = 8;
        assert!(
            matches!(c.validate(), Err(QlError::Config { ref field, .. }) if field == "graph.d")
        );
        let mut c = ScenarioConfig::default();
        c.sampling.n_samples = 1;
        assert!(
            matches!(c.validate(), Err(QlError::Config { ref field, .. }) if field == "sampling.n_samples")
        );
        let mut c = ScenarioConfig::default();
        c.graph.bias_a = [0.5, 0.0];
        assert!(c.validate().is_err());
        let mut c = ScenarioConfig::default();
        c.dynamics.init = PhaseInit::VonMises {
            circ_std: 0.0,
            mu: 0.0,
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn desk_coupling_matches_per_oscillator_strength() {
        let k = ScenarioConfig::desk_coupling(250.0);
        // paper: 250 * 38 / 1600; desk: k * 13.2 / 256
        assert!((k * 13.2 / 256.0 - 250.0 * 38.0 / 1600.0).abs() < 1e-9);
    }

    #[test]
    fn records_have_one_row_per_sample() {
        let run = run_scenario(&quick(ScenarioConfig::desk_sync())).unwrap();
        assert_eq!(run.records.len(), 5);
        assert_eq!(run.records[0].t, 0.0);
        assert!((run.last().t - 4.0).abs() < 1e-12);
        for r in &run.records {
            assert!((0.25 - 1e-9..=1.0 + 1e-9).contains(&r.purity));
            r.rho.validate().unwrap();
        }
        assert_eq!(run.final_coefficients.len(), 6);
    }

    #[test]
    fn locked_single_preparation_is_pure() {
        let mut c = quick(ScenarioConfig::desk_sync());
        c.ensemble.m = 1;
        c.dynamics.sigma_nu = 0.0;
        c.dynamics.init = PhaseInit::VonMises {
            circ_std: 1e-9,
            mu: 0.0,
        };
        let run = run_scenario(&c).unwrap();
        for r in &run.records {
            assert!((r.purity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let c = quick(ScenarioConfig::desk_dephasing());
        let a = run_scenario_with_workers(&c, Some(1)).unwrap();
        let b = run_scenario_with_workers(&c, Some(3)).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn direct_and_frame_solvers_agree() {
        let mut c = quick(ScenarioConfig::desk_sync());
        c.ensemble.m = 3;
        c.sampling.n_samples = 3;
        let a = run_scenario(&c).unwrap();
        c.sampling.eigensolver = Eigensolver::Direct;
        let b = run_scenario(&c).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert!((x.purity - y.purity).abs() < 1e-8);
            assert!((x.rho.rho.clone() - y.rho.rho.clone()).norm() < 1e-8);
        }
    }

    #[test]
    fn graph_resampling_changes_the_ensemble() {
        let mut c = quick(ScenarioConfig::desk_sync());
        let fixed = run_scenario(&c).unwrap();
        c.ensemble.graph_resample = true;
        let resampled = run_scenario(&c).unwrap();
        assert_ne!(fixed.records, resampled.records);
        assert_eq!(fixed.records[0].order_re, resampled.records[0].order_re);
    }

    #[test]
    fn sweep_rejects_empty_list_and_matches_single_run() {
        let c = quick(ScenarioConfig::desk_sync());
        assert!(sweep_coupling(&c, &[], None).is_err());
        let rows = sweep_coupling(&c, &[c.dynamics.coupling], None).unwrap();
        let run = run_scenario(&c).unwrap();
        assert_eq!(rows[0].final_purity, run.last().purity);
        assert_eq!(rows[0].final_order_mod, run.last().order_mod);
    }

    #[test]
    fn bootstrap_error_is_zero_for_identical_states() {
        let c = vec![vec![Complex64::new(0.5, 0.0); 4]; 10];
        assert!(bootstrap_purity_stderr(&c, 50, 1).unwrap() < 1e-12);
        assert!(bootstrap_purity_stderr(&[], 50, 1).is_err());
    }
}
