//! Closed-form currents and conductances, all at `ω = 1`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Steady `J_h` for full swap (`γ = π/2`), thermal part plus coherent part.
///
/// Evaluated with both Boltzmann factors divided out so large `β` cannot
/// overflow.
pub fn steady_current_analytic_full_swap(p: f64, beta_h: f64, beta_c: f64, delta: f64, dphi: f64) -> f64 {
    let (eh, ec) = ((-beta_h).exp(), (-beta_c).exp());
    let denom = (1.0 + eh) * (1.0 + ec);
    let thermal = delta.sin().powi(2) * (ec - eh);
    let coherent = p * p * (2.0 * delta).sin() * (-(beta_h + beta_c) / 2.0).exp() * dphi.sin();
    (thermal - coherent) / denom
}

/// Threshold coherence for current reversal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CriticalCoherence {
    Reachable(f64),
    /// No `p ∈ [0, 1]` reverses the current.
    Unreachable,
}

impl CriticalCoherence {
    pub fn value(self) -> Option<f64> {
        match self {
            CriticalCoherence::Reachable(p) => Some(p),
            CriticalCoherence::Unreachable => None,
        }
    }
}

/// `p_c = √(tan δ (e^{β_h} − e^{β_c}) / (2 e^{(β_h+β_c)/2} sin Δφ))` for full swap.
pub fn critical_p_full_swap(beta_h: f64, beta_c: f64, delta: f64, dphi: f64) -> Result<CriticalCoherence> {
    if !(dphi > PI && dphi < 2.0 * PI) {
        return Err(Error::Domain(format!(
            "reversal needs a phase difference in (pi, 2pi), got {dphi}"
        )));
    }
    let half = 0.5 * (beta_h - beta_c);
    // e^{β_h} − e^{β_c} over e^{(β_h+β_c)/2}
    let ratio = half.exp() - (-half).exp();
    let radicand = delta.tan() * ratio / (2.0 * dphi.sin());
    if !(0.0..=1.0).contains(&radicand) {
        return Ok(CriticalCoherence::Unreachable);
    }
    Ok(CriticalCoherence::Reachable(radicand.sqrt()))
}

/// Thermal-reservoir conductance `κ = −J_h/ΔT` as `ΔT → 0` for any coupling.
pub fn conductance_thermal_analytic(t: f64, gamma: f64, delta: f64) -> f64 {
    let u = (-1.0 / t).exp();
    let (c2g, c4g, c6g) = ((2.0 * gamma).cos(), (4.0 * gamma).cos(), (6.0 * gamma).cos());
    let cg2 = gamma.cos().powi(2);
    let c2d = (2.0 * delta).cos();
    let s2 = gamma.sin().powi(2) * delta.sin().powi(2);

    let num = 4.0 * ((5.0 + c4g) * u + c2g * (1.0 + u).powi(2) + 3.0 * (1.0 + u * u)) * s2;
    let a = 11.0 + 4.0 * c2g + c4g - 16.0 * cg2 * c2d;
    let b = 20.0 + 7.0 * c2g + 4.0 * c4g + c6g - 32.0 * cg2 * cg2 * c2d;
    // a(u + 1/u) + b, multiplied through by u
    let den = (1.0 + u).powi(2) * t * t * (a * (u * u + 1.0) + b * u);
    num * u / den
}

/// High-temperature limit of [`conductance_thermal_analytic`].
pub fn conductance_high_t_limit(gamma: f64, delta: f64, t: f64) -> f64 {
    let (c2g, c4g) = ((2.0 * gamma).cos(), (4.0 * gamma).cos());
    let num = (11.0 + 4.0 * c2g + c4g) * gamma.sin().powi(2) * delta.sin().powi(2);
    let den = 2.0 * (3.0 + c2g) * (7.0 + c4g - 8.0 * gamma.cos().powi(2) * (2.0 * delta).cos()) * t * t;
    num / den
}

/// First-order expansion of the full-swap current around `T_h = T_c = T`,
/// `J ≈ −λ₁ ΔT + c₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullSwapLinearResponse {
    pub lambda1: f64,
    pub c1: f64,
    /// High-temperature limit of `c₁`.
    pub xi: f64,
}

pub fn linear_response_full_swap(t: f64, p: f64, delta: f64, dphi: f64) -> FullSwapLinearResponse {
    let sech2 = (0.5 / t).cosh().powi(-2);
    let xi = -0.25 * p * p * (2.0 * delta).sin() * dphi.sin();
    FullSwapLinearResponse {
        lambda1: sech2 * delta.sin().powi(2) / (4.0 * t * t),
        c1: xi * sech2,
        xi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn full_swap_thermal_term() {
        let j = steady_current_analytic_full_swap(0.8, 0.5, 1.0, FRAC_PI_4, 0.0);
        let e = std::f64::consts::E;
        let direct = 0.5 * (e.sqrt() - e) / ((1.0 + e.sqrt()) * (1.0 + e));
        assert!((j - direct).abs() < 1e-15);
        assert!((j + 0.054303).abs() < 1e-5);
        assert_eq!(j, steady_current_analytic_full_swap(0.0, 0.5, 1.0, FRAC_PI_4, 0.0));
        assert!((steady_current_analytic_full_swap(0.8, 0.5, 1.0, FRAC_PI_4, PI) - j).abs() < 1e-16);
    }

    #[test]
    fn full_swap_coherent_term() {
        let e = std::f64::consts::E;
        let j = steady_current_analytic_full_swap(0.8, 1.0, 1.0, FRAC_PI_4, FRAC_PI_2);
        assert!((j + 0.64 * e / (1.0 + e).powi(2)).abs() < 1e-15);
        assert!((j + 0.12585).abs() < 5e-5);
    }

    #[test]
    fn critical_p_values() {
        assert_eq!(
            critical_p_full_swap(1.0, 1.0, FRAC_PI_4, 1.5 * PI).unwrap(),
            CriticalCoherence::Reachable(0.0)
        );
        let p = critical_p_full_swap(0.5, 1.0, FRAC_PI_4, 1.5 * PI).unwrap().value().unwrap();
        assert!((p - 0.5026).abs() < 1e-4);
        // the current at p_c vanishes
        assert!(steady_current_analytic_full_swap(p, 0.5, 1.0, FRAC_PI_4, 1.5 * PI).abs() < 1e-15);
        assert!(matches!(critical_p_full_swap(0.5, 1.0, FRAC_PI_4, FRAC_PI_2), Err(Error::Domain(_))));
        assert!(critical_p_full_swap(0.5, 1.0, FRAC_PI_4, PI).is_err());
        // reversed temperature order has nothing to reverse
        assert_eq!(
            critical_p_full_swap(1.0, 0.5, FRAC_PI_4, 1.5 * PI).unwrap(),
            CriticalCoherence::Unreachable
        );
        assert_eq!(
            critical_p_full_swap(0.01, 10.0, 1.5, 1.5 * PI).unwrap(),
            CriticalCoherence::Unreachable
        );
    }

    #[test]
    fn thermal_conductance_limits() {
        assert_eq!(conductance_thermal_analytic(0.7, PI / 32.0, 0.0), 0.0);
        for &t in &[0.2, 0.45, 1.0, 3.0, 40.0] {
            for &delta in &[0.3, FRAC_PI_4, 1.2] {
                let k = conductance_thermal_analytic(t, FRAC_PI_2, delta);
                let l = linear_response_full_swap(t, 0.0, delta, 0.0).lambda1;
                assert!((k - l).abs() <= 1e-14 * l.abs(), "T {t}: {k} vs {l}");
            }
        }
    }

    #[test]
    fn thermal_conductance_survives_tiny_temperatures() {
        let k = conductance_thermal_analytic(1e-3, PI / 32.0, FRAC_PI_4);
        assert!(k.is_finite() && k >= 0.0);
    }

    #[test]
    fn high_t_law() {
        let (g, d) = (PI / 32.0, FRAC_PI_4);
        let ratio = conductance_high_t_limit(g, d, 6.0) / conductance_high_t_limit(g, d, 3.0);
        assert!((ratio - 0.25).abs() < 1e-15);
        let b1 = conductance_thermal_analytic(50.0, g, d);
        let b2 = conductance_high_t_limit(g, d, 50.0);
        assert!(((b1 - b2) / b1).abs() < 1e-3);
    }

    #[test]
    fn high_t_limit_at_full_coupling() {
        // γ = δ = π/2: (11 − 4 + 1)·1 / (2·2·(7 + 1 + 0)T²) = 1/(4T²)
        for &t in &[0.5, 2.0, 9.0] {
            let k = conductance_high_t_limit(FRAC_PI_2, FRAC_PI_2, t);
            assert!((k - 0.25 / (t * t)).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_response_limits() {
        assert_eq!(linear_response_full_swap(1.3, 0.8, FRAC_PI_4, 0.0).c1, 0.0);
        let r = linear_response_full_swap(1e6, 0.8, FRAC_PI_4, FRAC_PI_2);
        assert!((r.c1 - r.xi).abs() < 1e-12);
        assert!(r.lambda1 < 1e-12);
        assert!((r.xi + 0.16).abs() < 1e-15);
    }
}
