//! Quick oracle suite: closed forms against the numerical routes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use qcollide::collision::{step_unitary, CollisionConfig, CouplingParams};
use qcollide::entropy::{energy_bookkeeping_check, entropy_identity_check, ledger_series};
use qcollide::qdm::{ComplexSquareMatrix, C64};
use qcollide::thermo::{
    conductance_fit, conductance_thermal_analytic, critical_p_full_swap, critical_p_numeric, default_dt_grid,
    linear_response_full_swap, simulate_steady, steady_current_analytic_full_swap, steady_state_exact,
    SteadyOptions,
};

use crate::error::CliError;

pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

fn full_swap(delta: f64) -> Result<CouplingParams, qcollide::Error> {
    CouplingParams::new(FRAC_PI_2, delta)
}

fn full_swap_closed_form() -> qcollide::Result<f64> {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.5, 1.0] {
        for delta in [0.3, FRAC_PI_4, 1.2] {
            for dphi in [0.0, 1.7, 4.4] {
                let cfg = CollisionConfig::standard(2.0, 1.0, dphi, p, full_swap(delta)?)?;
                let j = simulate_steady(&cfg, &SteadyOptions::default())?.steady_current_hot;
                worst = worst.max((j - steady_current_analytic_full_swap(p, 0.5, 1.0, delta, dphi)).abs());
            }
        }
    }
    Ok(worst)
}

fn thermal_conductance() -> qcollide::Result<f64> {
    let mut worst: f64 = 0.0;
    for t in [0.45, 1.0, 3.0] {
        let coupling = CouplingParams::new(PI / 32.0, FRAC_PI_4)?;
        let k = conductance_fit(t, 0.0, 0.0, coupling, &default_dt_grid())?.conductance();
        let exact = conductance_thermal_analytic(t, PI / 32.0, FRAC_PI_4);
        worst = worst.max(((k - exact) / exact).abs());
    }
    Ok(worst)
}

fn full_swap_limit() -> f64 {
    [0.3, 1.0, 4.0]
        .into_iter()
        .map(|t| {
            let a = conductance_thermal_analytic(t, FRAC_PI_2, 0.9);
            let b = linear_response_full_swap(t, 0.0, 0.9, 0.0).lambda1;
            ((a - b) / b).abs()
        })
        .fold(0.0, f64::max)
}

fn critical_coherence() -> qcollide::Result<f64> {
    let template = CollisionConfig::standard(2.0, 1.0, 0.0, 0.0, full_swap(FRAC_PI_4)?)?;
    let mut worst: f64 = 0.0;
    for dphi in [1.2 * PI, 1.5 * PI, 1.8 * PI] {
        let exact = critical_p_full_swap(0.5, 1.0, FRAC_PI_4, dphi)?.value();
        let numeric = critical_p_numeric(&template, dphi, 1e-10)?.value();
        worst = worst.max(match (exact, numeric) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        });
    }
    Ok(worst)
}

fn current_balance() -> qcollide::Result<f64> {
    let mut worst: f64 = 0.0;
    for dphi in [0.0, FRAC_PI_2, 1.25 * PI] {
        let cfg = CollisionConfig::standard(2.0, 1.0, dphi, 0.8, CouplingParams::new(PI / 32.0, FRAC_PI_4)?)?;
        let s = steady_state_exact(&cfg)?;
        worst = worst.max((s.current_hot + s.current_cold).abs());
    }
    Ok(worst)
}

fn energy_commutes() -> qcollide::Result<f64> {
    let h = ComplexSquareMatrix::from_fn(16, |i, j| {
        let e = if i == j { 2.0 - (i as u32).count_ones() as f64 } else { 0.0 };
        C64::new(e, 0.0)
    });
    let u = step_unitary(&CouplingParams::new(0.7, 0.4)?);
    let unitarity = (&u.adjoint() * &u).max_abs_diff(&ComplexSquareMatrix::identity(16));
    Ok(u.commutator(&h).max_abs().max(unitarity))
}

fn entropy_identities() -> qcollide::Result<f64> {
    let cfg = CollisionConfig::standard(2.0, 1.0, FRAC_PI_2, 0.8, CouplingParams::new(0.6, FRAC_PI_4)?)?;
    let mut worst: f64 = 0.0;
    for l in ledger_series(&cfg, 2, 2)? {
        let r = entropy_identity_check(&l);
        worst = worst
            .max(r.decomposition_residual)
            .max(r.split_residual)
            .max(r.global_entropy_residual)
            .max(-r.production);
    }
    Ok(worst.max(energy_bookkeeping_check(&cfg, 2, 2)?.max_residual()))
}

pub fn run_checks() -> Result<Vec<Check>, CliError> {
    Ok(vec![
        Check { name: "full-swap steady current", residual: full_swap_closed_form()?, tol: 1e-10 },
        Check { name: "thermal conductance closed form", residual: thermal_conductance()?, tol: 1e-4 },
        Check { name: "full-swap conductance limit", residual: full_swap_limit(), tol: 1e-12 },
        Check { name: "critical coherence", residual: critical_coherence()?, tol: 1e-6 },
        Check { name: "steady current balance", residual: current_balance()?, tol: 1e-12 },
        Check { name: "unitarity and energy conservation", residual: energy_commutes()?, tol: 1e-12 },
        Check { name: "entropy and energy ledgers", residual: entropy_identities()?, tol: 1e-9 },
    ])
}

/// Prints one line per check; fails if any check misses its tolerance.
pub fn selfcheck() -> Result<(), CliError> {
    let checks = run_checks()?;
    let mut failed = Vec::new();
    for c in &checks {
        let tag = if c.passed() { "ok" } else { "FAIL" };
        println!("[{tag}] {}: {:.3e} (tol {:.0e})", c.name, c.residual, c.tol);
        if !c.passed() {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        println!("{} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::SelfCheck(failed.join(", ")))
    }
}
