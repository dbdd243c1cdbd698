mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::brute_partial_trace;
use qcollide::collision::{
    collision_step, heat_exchange, run_trajectory, step_unitary, AncillaSpec, CollisionChannel, CollisionConfig,
    CouplingParams,
};
use qcollide::qdm::{ComplexSquareMatrix, C64};
use qcollide::thermo::steady_state_exact;

fn fig2(dphi: f64, p: f64) -> CollisionConfig {
    CollisionConfig::standard(2.0, 1.0, dphi, p, CouplingParams::new(PI / 32.0, FRAC_PI_4).unwrap()).unwrap()
}

/// Exchanges bits `a` and `b` of a 4-qubit basis index (qubit 0 is the
/// most significant bit).
fn swap_bits(idx: usize, a: usize, b: usize) -> usize {
    let (sa, sb) = (3 - a, 3 - b);
    let (ba, bb) = ((idx >> sa) & 1, (idx >> sb) & 1);
    if ba == bb {
        idx
    } else {
        idx ^ (1 << sa) ^ (1 << sb)
    }
}

fn dense_partial_swap(theta: f64, a: usize, b: usize) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_fn(16, |i, j| {
        let mut z = C64::new(0.0, 0.0);
        if i == j {
            z += C64::new(theta.cos(), 0.0);
        }
        if swap_bits(j, a, b) == i {
            z += C64::new(0.0, theta.sin());
        }
        z
    })
}

fn dense_collision(gamma: f64, delta: f64) -> ComplexSquareMatrix {
    let v = dense_partial_swap(delta, 0, 1);
    let ua = dense_partial_swap(gamma, 0, 2);
    let ub = dense_partial_swap(gamma, 1, 3);
    &(&ub * &ua) * &v
}

#[test]
fn first_step_matches_dense_oracle() {
    let cfg = fig2(FRAC_PI_2, 0.8);
    let (h, c) = (cfg.hot.state(), cfg.cold.state());
    let out = collision_step(&cfg.initial_system, &h, &c, &cfg.coupling).unwrap();

    let u = dense_collision(PI / 32.0, FRAC_PI_4);
    let rho0 = cfg.initial_system.tensor(&h).tensor(&c);
    let evolved = &(&u * rho0.matrix()) * &u.adjoint();
    let dims = [2, 2, 2, 2];
    assert!(out.system.matrix().max_abs_diff(&brute_partial_trace(&evolved, &dims, &[0, 1])) <= 1e-12);
    assert!(out.hot.matrix().max_abs_diff(&brute_partial_trace(&evolved, &dims, &[2])) <= 1e-12);
    assert!(out.cold.matrix().max_abs_diff(&brute_partial_trace(&evolved, &dims, &[3])) <= 1e-12);
}

#[test]
fn monolithic_unitary_matches_dense_oracle() {
    for (g, d) in [(0.1, 0.2), (PI / 32.0, FRAC_PI_4), (FRAC_PI_2, 1.3)] {
        let u = step_unitary(&CouplingParams::new(g, d).unwrap());
        assert!(u.max_abs_diff(&dense_collision(g, d)) <= 1e-15);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexSquareMatrix::identity(16)) <= 1e-12);
    }
}

#[test]
fn collision_conserves_total_bare_energy() {
    let h_total = ComplexSquareMatrix::from_fn(16, |i, j| {
        if i == j {
            let ones = (i as u32).count_ones() as f64;
            C64::new(0.5 * (4.0 - 2.0 * ones), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let u = step_unitary(&CouplingParams::new(0.7, 0.4).unwrap());
    assert!(u.commutator(&h_total).max_abs() <= 1e-12);
}

#[test]
fn channel_reproduces_collision_steps() {
    let cfg = fig2(1.25 * PI, 0.8).with_coupling(CouplingParams::new(0.6, 0.3).unwrap());
    let channel = CollisionChannel::new(&cfg).unwrap();
    let mut v = CollisionChannel::flatten(cfg.initial_system.matrix());
    let mut rho = cfg.initial_system.clone();
    for _ in 0..10 {
        let (h, c) = (cfg.hot.state(), cfg.cold.state());
        let out = collision_step(&rho, &h, &c, &cfg.coupling).unwrap();
        let (jh, jc) = channel.heats(&v);
        assert!((jh - heat_exchange(&out.hot, &h, 1.0).unwrap()).abs() <= 1e-14);
        assert!((jc - heat_exchange(&out.cold, &c, 1.0).unwrap()).abs() <= 1e-14);
        v = channel.apply(&v);
        assert!(CollisionChannel::unflatten(&v).max_abs_diff(out.system.matrix()) <= 1e-13);
        rho = out.system;
    }
}

#[test]
fn fixed_point_is_the_long_time_state() {
    let cfg = fig2(FRAC_PI_4, 0.8).with_coupling(CouplingParams::new(0.5, FRAC_PI_4).unwrap());
    let traj = run_trajectory(&cfg, 400).unwrap();
    let exact = steady_state_exact(&cfg).unwrap();
    let last = traj.last().unwrap();
    assert!(last.system_state.matrix().max_abs_diff(exact.system_state.matrix()) <= 1e-10);
    assert!((last.heat_hot - exact.current_hot).abs() <= 1e-10);
}

#[test]
fn steady_current_depends_only_on_phase_difference() {
    for dphi in [0.3, FRAC_PI_2, 1.25 * PI] {
        let base = steady_state_exact(&fig2(dphi, 0.8)).unwrap().current_hot;
        for offset in [0.5, 2.0, 5.5] {
            let hot = AncillaSpec::new(2.0, dphi + offset, 0.8, 1.0).unwrap();
            let cold = AncillaSpec::new(1.0, offset, 0.8, 1.0).unwrap();
            let cfg = CollisionConfig::new(
                hot,
                cold,
                CouplingParams::new(PI / 32.0, FRAC_PI_4).unwrap(),
                CollisionConfig::ground_system(),
            )
            .unwrap();
            let shifted = steady_state_exact(&cfg).unwrap().current_hot;
            assert!((shifted - base).abs() <= 1e-10, "dphi {dphi} offset {offset}");
        }
    }
}

#[test]
fn phase_outside_period_is_reduced() {
    let a = AncillaSpec::new(1.0, 2.0 * PI + 0.25, 0.5, 1.0).unwrap();
    let b = AncillaSpec::new(1.0, 0.25, 0.5, 1.0).unwrap();
    assert!(a.state().matrix().max_abs_diff(b.state().matrix()) <= 1e-15);
}
