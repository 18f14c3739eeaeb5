use qlsync::graph::{cartesian_product, gen_d_regular_random, ql_bit};
use qlsync::kuramoto::{integrate, order_parameter, CouplingNetwork};
use qlsync::qlstate::{accumulate_density, project_onto, purity, EmergentFrame};
use qlsync::{BiasedGraph, Complex64, OscillatorParams, PhaseState};

fn final_phases(
    g: &BiasedGraph,
    params: &OscillatorParams,
    state0: &PhaseState,
    dt: f64,
    t_end: f64,
) -> Vec<f64> {
    let steps = (t_end / dt).round() as usize;
    integrate(
        state0,
        params,
        &CouplingNetwork::from_graph(g),
        dt,
        steps,
        &[],
        |_, _, _| Ok(()),
    )
    .unwrap()
    .theta
}

#[test]
fn rk4_error_shrinks_sixteenfold_per_halving() {
    let g = gen_d_regular_random(10, 3, 2).unwrap();
    let params = OscillatorParams {
        coupling: 8.0,
        ..Default::default()
    };
    let theta: Vec<f64> = (0..10).map(|k| 0.6 * k as f64).collect();
    let eps: Vec<f64> = (0..10).map(|k| (k as f64 - 4.5) * 0.3).collect();
    let s0 = PhaseState::new(theta, eps).unwrap();
    let reference = final_phases(&g, &params, &s0, 1e-4, 4.0);
    let err = |dt: f64| {
        final_phases(&g, &params, &s0, dt, 4.0)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
    for ratio in [e1 / e2, e2 / e3] {
        assert!(
            (12.0..20.0).contains(&ratio),
            "errors {e1:e}, {e2:e}, {e3:e}"
        );
    }
}

#[test]
fn common_frequency_shift_leaves_observables_unchanged() {
    let a = ql_bit(6, 3, 0.3, Complex64::new(1.0, 0.0), ("a1", "a2"), 1).unwrap();
    let b = ql_bit(6, 3, 0.3, Complex64::new(1.0, 0.0), ("b1", "b2"), 2).unwrap();
    let g = cartesian_product(&a, &b);
    let n = g.n();
    let params = OscillatorParams {
        coupling: 40.0,
        ..Default::default()
    };
    let theta: Vec<f64> = (0..n).map(|k| (k as f64 * 0.77).sin() * 2.0).collect();
    let eps: Vec<f64> = (0..n).map(|k| (k as f64 * 1.3).cos()).collect();
    let shift = 3.7;
    let moving: Vec<f64> = eps.iter().map(|e| e + shift).collect();
    let t_end = 2.0;
    let th0 = final_phases(
        &g,
        &params,
        &PhaseState::new(theta.clone(), eps).unwrap(),
        1e-3,
        t_end,
    );
    let th1 = final_phases(
        &g,
        &params,
        &PhaseState::new(theta, moving).unwrap(),
        1e-3,
        t_end,
    );
    for (x, y) in th0.iter().zip(&th1) {
        assert!((y - x - shift * t_end).abs() < 1e-8);
    }
    assert!((order_parameter(&th0).modulus - order_parameter(&th1).modulus).abs() < 1e-10);

    let frame = EmergentFrame::new(&g);
    let basis = qlsync::qlstate::effective_basis(&g).unwrap();
    let state =
        |th: &[f64]| project_onto(&frame.at_phases(th).unwrap().vector, &basis, 0.0).unwrap();
    let r0 = accumulate_density(&[state(&th0)]).unwrap();
    let r1 = accumulate_density(&[state(&th1)]).unwrap();
    assert!((&r0.rho - &r1.rho).norm() < 1e-8);
    assert!((purity(&r0) - purity(&r1)).abs() < 1e-10);
}

#[test]
fn constant_phase_offset_leaves_observables_unchanged() {
    let a = ql_bit(6, 3, 0.3, Complex64::new(0.0, 1.0), ("a1", "a2"), 5).unwrap();
    let b = ql_bit(6, 3, 0.3, Complex64::new(1.0, 0.0), ("b1", "b2"), 6).unwrap();
    let g = cartesian_product(&a, &b);
    let n = g.n();
    let params = OscillatorParams {
        coupling: 25.0,
        ..Default::default()
    };
    let theta: Vec<f64> = (0..n).map(|k| (k as f64 * 2.3).cos() * 3.0).collect();
    let eps: Vec<f64> = (0..n).map(|k| (k as f64 * 0.4).sin()).collect();
    let offset = -1.9;
    let shifted: Vec<f64> = theta.iter().map(|t| t + offset).collect();
    let th0 = final_phases(
        &g,
        &params,
        &PhaseState::new(theta, eps.clone()).unwrap(),
        1e-3,
        1.5,
    );
    let th1 = final_phases(
        &g,
        &params,
        &PhaseState::new(shifted, eps).unwrap(),
        1e-3,
        1.5,
    );
    for (x, y) in th0.iter().zip(&th1) {
        assert!((y - x - offset).abs() < 1e-9);
    }
    assert!((order_parameter(&th0).modulus - order_parameter(&th1).modulus).abs() < 1e-9);
    let frame = EmergentFrame::new(&g);
    let basis = qlsync::qlstate::effective_basis(&g).unwrap();
    let rho = |th: &[f64]| {
        let s = project_onto(&frame.transported(th).unwrap(), &basis, 0.0).unwrap();
        accumulate_density(&[s]).unwrap()
    };
    assert!((&rho(&th0).rho - &rho(&th1).rho).norm() < 1e-9);
}
