//! Kuramoto phase oscillators on a graph, in the rotating frame.
//!
//! `dθ_i/dt = ε_i + s (K/N) Σ_j a_ij sin(θ_j - θ_i)` with `a_ij` the modulus
//! of the adjacency entry and `s = +1` (attractive) or `s = -1` (the sign
//! as literally printed, under which the in-phase state is unstable).

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{QlError, Result};
use crate::graph::BiasedGraph;
use crate::vonmises::VonMises;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingSign {
    /// `+K/N`: neighbouring phases attract.
    #[default]
    Attractive,
    /// `-K/N`: the prefactor exactly as printed in the source equation.
    PaperLiteral,
}

impl CouplingSign {
    pub fn factor(self) -> f64 {
        match self {
            CouplingSign::Attractive => 1.0,
            CouplingSign::PaperLiteral => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    /// `K`, in frequency units.
    pub coupling: f64,
    pub sigma_nu: f64,
    /// Mean natural frequency, only used to convert periods to time.
    pub mean_freq: f64,
    pub coupling_sign: CouplingSign,
    /// Divisor `N`; `None` means the oscillator count.
    pub normalization: Option<usize>,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self {
            coupling: 250.0,
            sigma_nu: 1.0,
            mean_freq: 100.0,
            coupling_sign: CouplingSign::Attractive,
            normalization: None,
        }
    }
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(QlError::Parameter(format!(
                "K must be >= 0, got {}",
                self.coupling
            )));
        }
        if !(self.sigma_nu.is_finite() && self.sigma_nu >= 0.0) {
            return Err(QlError::Parameter(format!(
                "sigma_nu must be >= 0, got {}",
                self.sigma_nu
            )));
        }
        if !(self.mean_freq.is_finite() && self.mean_freq > 0.0) {
            return Err(QlError::Parameter(format!(
                "mean_freq must be > 0, got {}",
                self.mean_freq
            )));
        }
        if self.normalization == Some(0) {
            return Err(QlError::Parameter(
                "normalization N must be positive".into(),
            ));
        }
        Ok(())
    }

    /// One mean period `2π / mean_freq`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.mean_freq
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub theta: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub t: f64,
}

impl PhaseState {
    pub fn new(theta: Vec<f64>, epsilon: Vec<f64>) -> Result<Self> {
        if theta.len() != epsilon.len() {
            return Err(QlError::Contract(format!(
                "{} phases but {} frequency offsets",
                theta.len(),
                epsilon.len()
            )));
        }
        Ok(Self {
            theta,
            epsilon,
            t: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Phases reduced to `[0, 2π)`.
    pub fn wrapped(&self) -> Vec<f64> {
        self.theta.iter().map(|t| t.rem_euclid(2.0 * PI)).collect()
    }
}

/// `n` frequency offsets from `N(0, σ²)`, recentred to an exactly zero sum.
pub fn sample_frequencies<R: Rng + ?Sized>(
    n: usize,
    sigma_nu: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(sigma_nu.is_finite() && sigma_nu >= 0.0) {
        return Err(QlError::Parameter(format!(
            "sigma_nu must be >= 0, got {sigma_nu}"
        )));
    }
    if sigma_nu == 0.0 || n == 0 {
        return Ok(vec![0.0; n]);
    }
    let normal = Normal::new(0.0, sigma_nu).expect("valid normal");
    let mut eps: Vec<f64> = (0..n).map(|_| normal.sample(rng)).collect();
    let mean = eps.iter().sum::<f64>() / n as f64;
    eps.iter_mut().for_each(|e| *e -= mean);
    // remaining rounding residue goes to the largest-magnitude entry
    let residue: f64 = eps.iter().sum();
    if let Some(big) = eps.iter_mut().max_by(|a, b| a.abs().total_cmp(&b.abs())) {
        *big -= residue;
    }
    Ok(eps)
}

/// Initial-phase law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseInit {
    /// Uniform on `[0, 2π)`.
    Uniform,
    /// Von Mises centred at `mu` with the given circular standard deviation.
    VonMises { circ_std: f64, mu: f64 },
}

pub fn sample_initial_phases<R: Rng + ?Sized>(
    n: usize,
    init: PhaseInit,
    rng: &mut R,
) -> Result<Vec<f64>> {
    match init {
        PhaseInit::Uniform => Ok((0..n).map(|_| rng.gen::<f64>() * 2.0 * PI).collect()),
        PhaseInit::VonMises { circ_std, mu } => {
            let vm = VonMises::from_circular_std(mu, circ_std)?;
            Ok((0..n).map(|_| vm.sample(rng)).collect())
        }
    }
}

/// Coupling network in compressed-row form with `a_ij = |A_ij|`.
#[derive(Debug, Clone)]
pub struct CouplingNetwork {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl CouplingNetwork {
    pub fn from_graph(g: &BiasedGraph) -> Self {
        let n = g.n();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in g.edges() {
            rows[e.i].push((e.j, e.weight));
            rows[e.j].push((e.i, e.weight));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, w) in row {
                targets.push(j);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Self {
            offsets,
            targets,
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }
}

/// Right-hand side of the oscillator equation, written into `out`.
pub fn kuramoto_rhs_into(
    theta: &[f64],
    epsilon: &[f64],
    params: &OscillatorParams,
    net: &CouplingNetwork,
    out: &mut [f64],
    scratch: &mut Vec<(f64, f64)>,
) {
    let n = theta.len();
    let norm = params.normalization.unwrap_or(n) as f64;
    let k = params.coupling_sign.factor() * params.coupling / norm;
    scratch.clear();
    scratch.extend(theta.iter().map(|t| t.sin_cos()));
    for i in 0..n {
        let (si, ci) = scratch[i];
        let (mut ss, mut sc) = (0.0, 0.0);
        for (j, w) in net.neighbors(i) {
            let (sj, cj) = scratch[j];
            ss += w * sj;
            sc += w * cj;
        }
        // Σ w sin(θj − θi) = cos θi Σ w sin θj − sin θi Σ w cos θj
        out[i] = epsilon[i] + k * (ci * ss - si * sc);
    }
}

pub fn kuramoto_rhs(
    state: &PhaseState,
    params: &OscillatorParams,
    g: &BiasedGraph,
) -> Result<Vec<f64>> {
    if state.len() != g.n() {
        return Err(QlError::Contract(format!(
            "state has {} oscillators, graph has {} vertices",
            state.len(),
            g.n()
        )));
    }
    let net = CouplingNetwork::from_graph(g);
    let mut out = vec![0.0; state.len()];
    kuramoto_rhs_into(
        &state.theta,
        &state.epsilon,
        params,
        &net,
        &mut out,
        &mut Vec::new(),
    );
    Ok(out)
}

/// Fixed-step RK4 integrator. `observer(step, t, theta)` is called for each
/// step index in `sample_steps` (sorted; `0` is the initial state).
pub fn integrate<F>(
    state0: &PhaseState,
    params: &OscillatorParams,
    net: &CouplingNetwork,
    dt: f64,
    n_steps: usize,
    sample_steps: &[usize],
    mut observer: F,
) -> Result<PhaseState>
where
    F: FnMut(usize, f64, &[f64]) -> Result<()>,
{
    if !(dt.is_finite() && dt > 0.0) {
        return Err(QlError::Parameter(format!("dt must be > 0, got {dt}")));
    }
    if n_steps == 0 {
        return Err(QlError::Parameter("n_steps must be >= 1".into()));
    }
    if state0.len() != net.n() {
        return Err(QlError::Contract(format!(
            "state has {} oscillators, network has {}",
            state0.len(),
            net.n()
        )));
    }
    let n = state0.len();
    let eps = &state0.epsilon;
    let mut theta = state0.theta.clone();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut scratch = Vec::with_capacity(n);
    let mut samples = sample_steps.iter().copied().peekable();

    while samples.peek() == Some(&0) {
        observer(0, state0.t, &theta)?;
        samples.next();
    }
    for step in 1..=n_steps {
        kuramoto_rhs_into(&theta, eps, params, net, &mut k1, &mut scratch);
        for i in 0..n {
            tmp[i] = theta[i] + 0.5 * dt * k1[i];
        }
        kuramoto_rhs_into(&tmp, eps, params, net, &mut k2, &mut scratch);
        for i in 0..n {
            tmp[i] = theta[i] + 0.5 * dt * k2[i];
        }
        kuramoto_rhs_into(&tmp, eps, params, net, &mut k3, &mut scratch);
        for i in 0..n {
            tmp[i] = theta[i] + dt * k3[i];
        }
        kuramoto_rhs_into(&tmp, eps, params, net, &mut k4, &mut scratch);
        for i in 0..n {
            theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(QlError::Divergence {
                step,
                realization: None,
            });
        }
        let t = state0.t + step as f64 * dt;
        while samples.peek() == Some(&step) {
            observer(step, t, &theta)?;
            samples.next();
        }
    }
    Ok(PhaseState {
        theta,
        epsilon: eps.clone(),
        t: state0.t + n_steps as f64 * dt,
    })
}

/// Real part and modulus of `(1/N) Σ e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameter {
    pub re: f64,
    pub modulus: f64,
}

pub fn order_parameter(theta: &[f64]) -> OrderParameter {
    let n = theta.len() as f64;
    let (s, c) = theta
        .iter()
        .fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
    let (re, im) = (c / n, s / n);
    OrderParameter {
        re,
        modulus: re.hypot(im),
    }
}
