//! Lohe synchronization of two-level systems as unit 4-vectors on S³, and
//! a Kuramoto network of coupled QL bits that emulates it.
//!
//! Each oscillator `x_i` evolves by
//! `ẋ_i = Ω_i x_i + s (K/N) Σ_j a_ij [x_j − x_i (x_j · x_i)]` with
//! `Ω_i = ω¹L₁ + ω²L₂ + ω³L₃` and the same sign convention `s` as
//! [`crate::kuramoto`].

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QlError, Result};
use crate::graph::{disjoint_union_coupled, ql_bit, BiasedGraph, InterCoupling};
use crate::kuramoto::{
    integrate, sample_frequencies, CouplingNetwork, CouplingSign, OscillatorParams, PhaseInit,
    PhaseState,
};
use crate::qlstate::{project_onto, EmergentFrame};

/// The three skew-symmetric generators `L₁, L₂, L₃`.
pub fn generators() -> [Matrix4<f64>; 3] {
    #[rustfmt::skip]
    let l1 = Matrix4::new(
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
    );
    #[rustfmt::skip]
    let l2 = Matrix4::new(
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
    );
    #[rustfmt::skip]
    let l3 = Matrix4::new(
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    );
    [l1, l2, l3]
}

/// Angular frequencies `(ω¹, ω², ω³)` of one oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OmegaTriple {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

impl OmegaTriple {
    pub fn new(omega1: f64, omega2: f64, omega3: f64) -> Self {
        Self {
            omega1,
            omega2,
            omega3,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.omega1 * self.omega1 + self.omega2 * self.omega2 + self.omega3 * self.omega3).sqrt()
    }
}

pub fn build_omega(w: OmegaTriple) -> Matrix4<f64> {
    let [l1, l2, l3] = generators();
    l1 * w.omega1 + l2 * w.omega2 + l3 * w.omega3
}

/// `exp(Ω t)` for `Ω = ω·L`; the generators square to `-I` and
/// anticommute, so `Ω² = -|ω|² I`.
pub fn rotation(w: OmegaTriple, t: f64) -> Matrix4<f64> {
    let r = w.norm();
    if r == 0.0 {
        return Matrix4::identity();
    }
    Matrix4::identity() * (r * t).cos() + build_omega(w) * ((r * t).sin() / r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoheState {
    pub x: Vec<Vector4<f64>>,
    pub t: f64,
}

impl LoheState {
    /// Normalizes every vector onto S³.
    pub fn new(x: Vec<Vector4<f64>>) -> Result<Self> {
        let x = x
            .into_iter()
            .map(|v| {
                let n = v.norm();
                if n.is_finite() && n > 0.0 {
                    Ok(v / n)
                } else {
                    Err(QlError::Parameter(format!(
                        "cannot normalize 4-vector {v:?}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { x, t: 0.0 })
    }

    /// `n` vectors drawn uniformly on S³.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand_distr::StandardNormal;
        let x = (0..n)
            .map(|_| {
                let v = Vector4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
                v / v.norm()
            })
            .collect();
        Self { x, t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn lohe_rhs_into(
    x: &[Vector4<f64>],
    omegas: &[Matrix4<f64>],
    k_over_n: f64,
    net: &CouplingNetwork,
    out: &mut [Vector4<f64>],
) {
    for i in 0..x.len() {
        let xi = x[i];
        let mut pull = Vector4::zeros();
        for (j, a) in net.neighbors(i) {
            let xj = x[j];
            pull += (xj - xi * xj.dot(&xi)) * a;
        }
        out[i] = omegas[i] * xi + pull * k_over_n;
    }
}

/// Time derivative of every 4-vector.
pub fn lohe_rhs(
    state: &LoheState,
    omegas: &[OmegaTriple],
    coupling: f64,
    sign: CouplingSign,
    g: &BiasedGraph,
) -> Result<Vec<Vector4<f64>>> {
    let n = state.len();
    if omegas.len() != n || g.n() != n {
        return Err(QlError::Contract(format!(
            "{n} oscillators, {} frequency triples, {} graph vertices",
            omegas.len(),
            g.n()
        )));
    }
    let net = CouplingNetwork::from_graph(g);
    let mats: Vec<_> = omegas.iter().map(|&w| build_omega(w)).collect();
    let mut out = vec![Vector4::zeros(); n];
    lohe_rhs_into(
        &state.x,
        &mats,
        sign.factor() * coupling / n as f64,
        &net,
        &mut out,
    );
    Ok(out)
}

/// Final state plus the largest per-step norm correction applied.
#[derive(Debug, Clone)]
pub struct LoheRun {
    pub state: LoheState,
    pub max_norm_correction: f64,
}

/// RK4 with renormalization of every vector after each step.
/// `observer(step, state)` is called at the sorted `sample_steps`.
#[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
pub fn integrate_lohe<F>(
    state0: &LoheState,
    omegas: &[OmegaTriple],
    coupling: f64,
    sign: CouplingSign,
    g: &BiasedGraph,
    dt: f64,
    n_steps: usize,
    sample_steps: &[usize],
    mut observer: F,
) -> Result<LoheRun>
where
    F: FnMut(usize, &LoheState),
{
    let n = state0.len();
    if omegas.len() != n || g.n() != n {
        return Err(QlError::Contract(format!(
            "{n} oscillators, {} frequency triples, {} graph vertices",
            omegas.len(),
            g.n()
        )));
    }
    if !(dt.is_finite() && dt > 0.0) || n_steps == 0 {
        return Err(QlError::Parameter(format!(
            "need dt > 0 and n_steps >= 1, got dt = {dt}, n_steps = {n_steps}"
        )));
    }
    let net = CouplingNetwork::from_graph(g);
    let mats: Vec<_> = omegas.iter().map(|&w| build_omega(w)).collect();
    let kn = sign.factor() * coupling / n as f64;
    let mut state = state0.clone();
    let mut k = [
        vec![Vector4::zeros(); n],
        vec![Vector4::zeros(); n],
        vec![Vector4::zeros(); n],
        vec![Vector4::zeros(); n],
    ];
    let mut tmp = vec![Vector4::zeros(); n];
    let mut max_corr: f64 = 0.0;
    let mut samples = sample_steps.iter().copied().peekable();
    while samples.peek() == Some(&0) {
        observer(0, &state);
        samples.next();
    }
    for step in 1..=n_steps {
        lohe_rhs_into(&state.x, &mats, kn, &net, &mut k[0]);
        for i in 0..n {
            tmp[i] = state.x[i] + k[0][i] * (0.5 * dt);
        }
        lohe_rhs_into(&tmp, &mats, kn, &net, &mut k[1]);
        for i in 0..n {
            tmp[i] = state.x[i] + k[1][i] * (0.5 * dt);
        }
        lohe_rhs_into(&tmp, &mats, kn, &net, &mut k[2]);
        for i in 0..n {
            tmp[i] = state.x[i] + k[2][i] * dt;
        }
        lohe_rhs_into(&tmp, &mats, kn, &net, &mut k[3]);
        for i in 0..n {
            let next =
                state.x[i] + (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * (dt / 6.0);
            let norm = next.norm();
            if !norm.is_finite() || norm == 0.0 {
                return Err(QlError::Divergence {
                    step,
                    realization: None,
                });
            }
            max_corr = max_corr.max((norm - 1.0).abs());
            state.x[i] = next / norm;
        }
        state.t = state0.t + step as f64 * dt;
        while samples.peek() == Some(&step) {
            observer(step, &state);
            samples.next();
        }
    }
    Ok(LoheRun {
        state,
        max_norm_correction: max_corr,
    })
}

/// Mean pairwise dot product `2/(N(N-1)) Σ_{i<j} x_i · x_j`.
pub fn lohe_sync_metric(state: &LoheState) -> f64 {
    sync_metric(&state.x)
}

fn sync_metric(x: &[Vector4<f64>]) -> f64 {
    let n = x.len();
    assert!(n >= 2, "sync metric needs at least two oscillators");
    // Σ_{i<j} x_i·x_j = (|Σ x|² − Σ |x|²) / 2
    let sum: Vector4<f64> = x.iter().sum();
    let sq: f64 = x.iter().map(|v| v.norm_squared()).sum();
    (sum.norm_squared() - sq) / (n as f64 * (n as f64 - 1.0))
}

/// Unit 4-vector of a two-state `(α, β)`, reading the SU(2) element
/// `[[α, −β], [β̄, ᾱ]] = [[w + iz, y + ix], [−y + ix, w − iz]]`.
pub fn two_state_to_vector(alpha: Complex64, beta: Complex64) -> Vector4<f64> {
    let v = Vector4::new(-beta.im, -beta.re, alpha.im, alpha.re);
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Inverse of [`two_state_to_vector`].
pub fn vector_to_two_state(x: &Vector4<f64>) -> (Complex64, Complex64) {
    (Complex64::new(x[3], x[2]), Complex64::new(-x[1], -x[0]))
}

/// QL-bit emulation of the Lohe model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoheEmulationConfig {
    pub n_qlbits: usize,
    pub n0: usize,
    pub d: usize,
    /// Cross-edge probability inside each QL bit.
    pub p_connect: f64,
    /// Cross-edge probability between QL bits.
    pub inter_p: f64,
    /// Weight of inter-QL-bit edges relative to intra edges.
    pub inter_weight: f64,
    pub coupling: f64,
    pub sigma_nu: f64,
    pub mean_freq: f64,
    /// Circular spread of phases inside each QL-bit block.
    pub intra_spread: f64,
    pub periods: f64,
    pub steps_per_period: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Lohe `K`; defaults to `coupling * inter_weight * inter_p`, the mean
    /// coupling felt by a QL bit's common phase.
    pub lohe_coupling: Option<f64>,
    pub coupling_sign: CouplingSign,
}

impl Default for LoheEmulationConfig {
    fn default() -> Self {
        Self {
            n_qlbits: 4,
            n0: 8,
            d: 5,
            p_connect: 0.2,
            inter_p: 0.1,
            inter_weight: 0.2,
            coupling: 100.0,
            sigma_nu: 1.0,
            mean_freq: 100.0,
            intra_spread: 0.01,
            periods: 80.0,
            steps_per_period: 50,
            n_samples: 40,
            seed: 0,
            lohe_coupling: None,
            coupling_sign: CouplingSign::Attractive,
        }
    }
}

/// Sync-metric time series of the emulating network and of the Lohe model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoheComparison {
    /// Sample times in mean periods.
    pub t: Vec<f64>,
    pub emulated_metric: Vec<f64>,
    pub lohe_metric: Vec<f64>,
    /// `emulated_states[s][q] = (α, β)` of QL bit `q` at sample `s`.
    #[serde(skip)]
    pub emulated_states: Vec<Vec<(Complex64, Complex64)>>,
    pub lohe_coupling: f64,
    pub warnings: Vec<String>,
}

pub fn run_lohe_emulation(config: &LoheEmulationConfig) -> Result<LoheComparison> {
    let c = config;
    if c.n_qlbits < 2 {
        return Err(QlError::config("n_qlbits", "need at least two QL bits"));
    }
    if c.n_samples < 2 {
        return Err(QlError::config("n_samples", "need at least two samples"));
    }
    if c.periods.is_nan() || c.periods <= 0.0 || c.steps_per_period == 0 {
        return Err(QlError::config(
            "periods",
            "periods and steps_per_period must be positive",
        ));
    }
    let mut warnings = Vec::new();
    if c.inter_weight >= 1.0 {
        warnings.push(format!(
            "inter-QL-bit weight {} is not weaker than the intra-QL-bit coupling",
            c.inter_weight
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let one = Complex64::new(1.0, 0.0);
    let bits = (0..c.n_qlbits)
        .map(|q| {
            ql_bit(
                c.n0,
                c.d,
                c.p_connect,
                one,
                (&format!("q{q}a1"), &format!("q{q}a2")),
                rng.gen(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let inter: Vec<_> = (0..c.n_qlbits)
        .flat_map(|a| ((a + 1)..c.n_qlbits).map(move |b| (a, b)))
        .map(|(a, b)| InterCoupling {
            a,
            b,
            p: c.inter_p,
            bias: one,
            weight: c.inter_weight,
        })
        .collect();
    let network = disjoint_union_coupled(&bits, &inter, rng.gen())?;
    let bit_size = 2 * c.n0;
    let frames: Vec<_> = bits.iter().map(EmergentFrame::new).collect();
    let bases = bits
        .iter()
        .enumerate()
        .map(|(q, b)| {
            Ok(vec![
                b.block_indicator(&format!("q{q}a1"))?,
                b.block_indicator(&format!("q{q}a2"))?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    let n = network.n();
    let epsilon = sample_frequencies(n, c.sigma_nu, &mut rng)?;
    let mut theta = Vec::with_capacity(n);
    for _ in 0..(2 * c.n_qlbits) {
        let centre = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
        let block = crate::kuramoto::sample_initial_phases(
            c.n0,
            PhaseInit::VonMises {
                circ_std: c.intra_spread,
                mu: centre,
            },
            &mut rng,
        )?;
        theta.extend(block);
    }
    let params = OscillatorParams {
        coupling: c.coupling,
        sigma_nu: c.sigma_nu,
        mean_freq: c.mean_freq,
        coupling_sign: c.coupling_sign,
        normalization: None,
    };
    params.validate()?;
    let dt = params.period() / c.steps_per_period as f64;
    let n_steps = (c.periods * c.steps_per_period as f64).round().max(1.0) as usize;
    let sample_steps = sample_schedule(n_steps, c.n_samples);

    let project = |theta: &[f64]| -> Result<Vec<(Complex64, Complex64)>> {
        (0..c.n_qlbits)
            .map(|q| {
                let local = &theta[q * bit_size..(q + 1) * bit_size];
                let v = frames[q].transported(local)?;
                let s = project_onto(&v, &bases[q], 0.0)?;
                Ok((s.coefficients[0], s.coefficients[1]))
            })
            .collect()
    };

    let mut emulated_states = Vec::with_capacity(sample_steps.len());
    let net = CouplingNetwork::from_graph(&network);
    let state0 = PhaseState::new(theta, epsilon.clone())?;
    integrate(
        &state0,
        &params,
        &net,
        dt,
        n_steps,
        &sample_steps,
        |_, _, th| {
            emulated_states.push(project(th)?);
            Ok(())
        },
    )?;
    let emulated_metric: Vec<f64> = emulated_states
        .iter()
        .map(|states| {
            let x: Vec<_> = states
                .iter()
                .map(|&(a, b)| two_state_to_vector(a, b))
                .collect();
            sync_metric(&x)
        })
        .collect();

    // Lohe run with each QL bit's mean frequency as a common phase rotation
    let omegas: Vec<_> = (0..c.n_qlbits)
        .map(|q| {
            let mean = epsilon[q * bit_size..(q + 1) * bit_size]
                .iter()
                .sum::<f64>()
                / bit_size as f64;
            OmegaTriple::new(0.0, 0.0, mean)
        })
        .collect();
    let lohe_coupling = c
        .lohe_coupling
        .unwrap_or(c.coupling * c.inter_weight * c.inter_p);
    let complete = BiasedGraph::complete(c.n_qlbits, "q")?;
    let x0 = LoheState::new(
        emulated_states[0]
            .iter()
            .map(|&(a, b)| two_state_to_vector(a, b))
            .collect(),
    )?;
    let mut lohe_metric = Vec::with_capacity(sample_steps.len());
    integrate_lohe(
        &x0,
        &omegas,
        lohe_coupling,
        c.coupling_sign,
        &complete,
        dt,
        n_steps,
        &sample_steps,
        |_, s| {
            lohe_metric.push(lohe_sync_metric(s));
        },
    )?;

    let t = sample_steps
        .iter()
        .map(|&s| s as f64 / c.steps_per_period as f64)
        .collect();
    Ok(LoheComparison {
        t,
        emulated_metric,
        lohe_metric,
        emulated_states,
        lohe_coupling,
        warnings,
    })
}

/// `n_samples` step indices evenly spaced over `0..=n_steps`.
pub(crate) fn sample_schedule(n_steps: usize, n_samples: usize) -> Vec<usize> {
    (0..n_samples)
        .map(|k| ((k as f64) * n_steps as f64 / (n_samples - 1) as f64).round() as usize)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuramoto::CouplingNetwork;

    fn pair() -> BiasedGraph {
        BiasedGraph::from_pairs(2, &[(0, 1)], "q").unwrap()
    }

    #[test]
    fn generators_are_skew_and_quaternionic() {
        let l = generators();
        for m in &l {
            assert_eq!(m.transpose(), -m);
            assert!(m.iter().all(|x| [-1.0, 0.0, 1.0].contains(x)));
            assert_eq!(m * m, -Matrix4::identity());
        }
        for a in 0..3 {
            for b in (a + 1)..3 {
                assert_eq!(l[a] * l[b], -(l[b] * l[a]));
            }
        }
    }

    #[test]
    fn omega_is_skew() {
        assert_eq!(build_omega(OmegaTriple::default()), Matrix4::zeros());
        let w = build_omega(OmegaTriple::new(0.3, -1.2, 2.5));
        assert_eq!(w + w.transpose(), Matrix4::zeros());
    }

    #[test]
    fn third_generator_rotates_two_planes() {
        let w = OmegaTriple::new(0.0, 0.0, 0.7);
        let r = rotation(w, 1.3);
        let (c, s) = ((0.7f64 * 1.3).cos(), (0.7f64 * 1.3).sin());
        #[rustfmt::skip]
        let expected = Matrix4::new(
            c, -s, 0.0, 0.0,
            s, c, 0.0, 0.0,
            0.0, 0.0, c, -s,
            0.0, 0.0, s, c,
        );
        assert!((r - expected).norm() < 1e-14);
        assert!((r.transpose() * r - Matrix4::identity()).norm() < 1e-14);
    }

    #[test]
    fn closed_form_rotation_matches_matrix_exponential() {
        let w = OmegaTriple::new(0.4, -0.9, 1.7);
        let t = 2.3;
        let by_exp = (build_omega(w) * t).exp();
        assert!((rotation(w, t) - by_exp).norm() < 1e-12);
    }

    #[test]
    fn flow_is_tangent_to_the_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let state = LoheState::random(6, &mut rng);
        let omegas: Vec<_> = (0..6)
            .map(|_| OmegaTriple::new(rng.gen(), rng.gen(), rng.gen()))
            .collect();
        let g = crate::graph::gen_d_regular_random(6, 3, 1).unwrap();
        for sign in [CouplingSign::Attractive, CouplingSign::PaperLiteral] {
            let d = lohe_rhs(&state, &omegas, 5.0, sign, &g).unwrap();
            for (x, dx) in state.x.iter().zip(&d) {
                assert!(x.dot(dx).abs() < 1e-14);
            }
        }
        assert!(lohe_rhs(&state, &omegas[..2], 1.0, CouplingSign::Attractive, &g).is_err());
    }

    #[test]
    fn uncoupled_run_matches_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let state = LoheState::random(3, &mut rng);
        let omegas = vec![
            OmegaTriple::new(0.0, 0.0, 1.1),
            OmegaTriple::new(0.0, 0.0, -0.4),
            OmegaTriple::new(0.3, 0.2, 0.9),
        ];
        let g = BiasedGraph::complete(3, "q").unwrap();
        let dt = 1e-3;
        let run = integrate_lohe(
            &state,
            &omegas,
            0.0,
            CouplingSign::Attractive,
            &g,
            dt,
            5000,
            &[],
            |_, _| {},
        )
        .unwrap();
        for ((w, x0), x) in omegas.iter().zip(&state.x).zip(&run.state.x) {
            assert!((x - rotation(*w, 5.0) * x0).norm() < 1e-6);
        }
    }

    #[test]
    fn strong_coupling_aligns_a_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let state = LoheState::random(2, &mut rng);
        let w = OmegaTriple::new(0.2, 0.5, 1.0);
        let run = integrate_lohe(
            &state,
            &[w, w],
            20.0,
            CouplingSign::Attractive,
            &pair(),
            1e-3,
            5000,
            &[],
            |_, _| {},
        )
        .unwrap();
        assert!(run.state.x[0].dot(&run.state.x[1]) > 0.999);
    }

    #[test]
    fn identical_oscillators_stay_identical() {
        let v = Vector4::new(0.1, 0.7, -0.2, 0.4);
        let state = LoheState::new(vec![v, v, v]).unwrap();
        let w = OmegaTriple::new(0.5, 0.1, -0.3);
        let g = BiasedGraph::complete(3, "q").unwrap();
        let run = integrate_lohe(
            &state,
            &[w; 3],
            4.0,
            CouplingSign::Attractive,
            &g,
            1e-2,
            1000,
            &[],
            |_, _| {},
        )
        .unwrap();
        assert_eq!(run.state.x[0], run.state.x[1]);
        assert_eq!(run.state.x[1], run.state.x[2]);
    }

    #[test]
    fn renormalization_correction_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let state = LoheState::random(5, &mut rng);
        let omegas: Vec<_> = (0..5)
            .map(|_| OmegaTriple::new(rng.gen(), rng.gen(), rng.gen()))
            .collect();
        let g = BiasedGraph::complete(5, "q").unwrap();
        let dt = 2.0 * std::f64::consts::PI / 100.0 / 100.0;
        let run = integrate_lohe(
            &state,
            &omegas,
            3.0,
            CouplingSign::Attractive,
            &g,
            dt,
            2000,
            &[],
            |_, _| {},
        )
        .unwrap();
        assert!(
            run.max_norm_correction < 1e-8,
            "{}",
            run.max_norm_correction
        );
        assert!(run.state.x.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn sync_metric_cases() {
        let e = |k: usize| Vector4::from_fn(|i, _| (i == k) as u8 as f64);
        let same = LoheState::new(vec![e(0), e(0), e(0)]).unwrap();
        assert!((lohe_sync_metric(&same) - 1.0).abs() < 1e-15);
        let orth = LoheState::new(vec![e(0), e(1)]).unwrap();
        assert_eq!(lohe_sync_metric(&orth), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cloud = LoheState::random(500, &mut rng);
        assert!(lohe_sync_metric(&cloud).abs() < 0.1);
        // direct pairwise sum
        let direct: f64 = (0..500)
            .flat_map(|i| ((i + 1)..500).map(move |j| (i, j)))
            .map(|(i, j)| cloud.x[i].dot(&cloud.x[j]))
            .sum::<f64>()
            * 2.0
            / (500.0 * 499.0);
        assert!((lohe_sync_metric(&cloud) - direct).abs() < 1e-12);
    }

    #[test]
    fn two_state_map_round_trips() {
        let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8));
        let x = two_state_to_vector(a, b);
        assert!((x.norm() - 1.0).abs() < 1e-15);
        let (a2, b2) = vector_to_two_state(&x);
        assert!((a2 - a).norm() < 1e-15 && (b2 - b).norm() < 1e-15);
        // common phase e^{-iωt} on (α, β) is the L₃ rotation at rate ω
        let w = OmegaTriple::new(0.0, 0.0, 0.9);
        let rotated = rotation(w, 0.5) * x;
        let ph = Complex64::from_polar(1.0, -0.45);
        let expect = two_state_to_vector(a * ph, b * ph);
        assert!((rotated - expect).norm() < 1e-14);
    }

    #[test]
    fn planar_reduction_is_kuramoto() {
        let phi: [f64; 2] = [0.3, 2.1];
        let om = [0.8, -0.5];
        let x0 = LoheState::new(
            phi.iter()
                .map(|p| Vector4::new(p.cos(), p.sin(), 0.0, 0.0))
                .collect(),
        )
        .unwrap();
        let omegas: Vec<_> = om.iter().map(|&w| OmegaTriple::new(0.0, 0.0, w)).collect();
        let dt = 1e-3;
        for sign in [CouplingSign::Attractive, CouplingSign::PaperLiteral] {
            let run =
                integrate_lohe(&x0, &omegas, 1.5, sign, &pair(), dt, 4000, &[], |_, _| {}).unwrap();
            let params = OscillatorParams {
                coupling: 1.5,
                coupling_sign: sign,
                ..Default::default()
            };
            let k0 = PhaseState::new(phi.to_vec(), om.to_vec()).unwrap();
            let net = CouplingNetwork::from_graph(&pair());
            let k = integrate(&k0, &params, &net, dt, 4000, &[], |_, _, _| Ok(())).unwrap();
            let lohe_angle = run.state.x[0].dot(&run.state.x[1]).clamp(-1.0, 1.0);
            assert!((lohe_angle - (k.theta[1] - k.theta[0]).cos()).abs() < 1e-6);
            for i in 0..2 {
                let got = run.state.x[i][1].atan2(run.state.x[i][0]);
                let d = crate::vonmises::wrap(got - k.theta[i]);
                assert!(d.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn commuting_rotation_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x0 = LoheState::random(4, &mut rng);
        let omegas: Vec<_> = (0..4)
            .map(|_| OmegaTriple::new(0.0, 0.0, rng.gen::<f64>() - 0.5))
            .collect();
        let r = rotation(OmegaTriple::new(0.0, 0.0, 1.0), 0.77);
        let g = BiasedGraph::complete(4, "q").unwrap();
        let xr = LoheState::new(x0.x.iter().map(|v| r * v).collect()).unwrap();
        let a = integrate_lohe(
            &x0,
            &omegas,
            2.0,
            CouplingSign::Attractive,
            &g,
            1e-3,
            2000,
            &[],
            |_, _| {},
        )
        .unwrap();
        let b = integrate_lohe(
            &xr,
            &omegas,
            2.0,
            CouplingSign::Attractive,
            &g,
            1e-3,
            2000,
            &[],
            |_, _| {},
        )
        .unwrap();
        for (u, v) in a.state.x.iter().zip(&b.state.x) {
            assert!((r * u - v).norm() < 1e-9);
        }
        assert!((lohe_sync_metric(&a.state) - lohe_sync_metric(&b.state)).abs() < 1e-9);
    }

    #[test]
    fn emulation_warns_on_strong_inter_coupling() {
        let cfg = LoheEmulationConfig {
            inter_weight: 1.5,
            periods: 2.0,
            n_samples: 3,
            n_qlbits: 2,
            ..Default::default()
        };
        let out = run_lohe_emulation(&cfg).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(run_lohe_emulation(&LoheEmulationConfig {
            n_qlbits: 1,
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn schedule_spans_the_run() {
        assert_eq!(sample_schedule(10, 3), vec![0, 5, 10]);
        assert_eq!(sample_schedule(8000, 40).last(), Some(&8000));
    }
}
