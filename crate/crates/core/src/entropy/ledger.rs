use super::joint::{joint_trajectory_each, JointState};
use crate::collision::{ancilla_hamiltonian, CollisionConfig};
use crate::qdm::{
    expectation_raw, hermitian_eig, kron, von_neumann_entropy, ComplexSquareMatrix, DensityOperator,
    DEFAULT_LOG_CLAMP, SUPPORT_EPS,
};
use crate::Result;

/// Entropy bookkeeping after `n` collisions, in nats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyLedger {
    pub n: usize,
    /// `S(ρ^S_n) − S(ρ^S_0)`.
    pub ds_system: f64,
    /// `D(ρ^tot_n ‖ ρ^S_n ⊗ η^hc ⊗ … ⊗ η^hc)`.
    pub ds_production: f64,
    /// `Σ_j Tr[(η̃^hc_j − η^hc) ln η^hc]`.
    pub ds_flow_total: f64,
    /// `Σ_j Tr[(η̃^h_j − η^h) ln η^h]`.
    pub ds_flow_hot: f64,
    pub ds_flow_cold: f64,
    /// `S(ρ^tot_n) − S(ρ^tot_0)`; zero for unitary evolution.
    pub global_entropy_change: f64,
    /// `Σ_j Tr[H (η̃^h_j − η^h)]`.
    pub heat_hot: f64,
    pub heat_cold: f64,
    /// `Σ_j Tr[(H^h + H^c)(η̃^hc_j − η^hc)]`.
    pub heat_pairs: f64,
    /// Some logarithm was evaluated outside the support of its argument, so
    /// the clamp dominates the affected entries.
    pub support_violated: bool,
}

/// `ln ρ` (clamped) plus whether any of `probes` has weight where `ρ` vanishes.
fn log_with_support(reference: &DensityOperator, probes: &[&DensityOperator]) -> Result<(ComplexSquareMatrix, bool)> {
    let eig = hermitian_eig(reference.matrix())?;
    let log = eig.reconstruct_with(|x| x.max(DEFAULT_LOG_CLAMP).ln()).hermitian_part();
    let mut violated = false;
    if eig.eigenvalues.iter().any(|&x| x <= SUPPORT_EPS) {
        for probe in probes {
            let w = eig.weights_of(probe.matrix());
            violated |= eig
                .eigenvalues
                .iter()
                .zip(&w)
                .any(|(&x, &wk)| x <= SUPPORT_EPS && wk > SUPPORT_EPS);
        }
    }
    Ok((log, violated))
}

fn tr_re(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<f64> {
    Ok(a.trace_product(b)?.re)
}

pub fn entropy_ledger(joint: &JointState, config: &CollisionConfig) -> Result<EntropyLedger> {
    let n = joint.n_collisions;
    let h = ancilla_hamiltonian(config.frequency());
    let h_pair = &kron(&h, &ComplexSquareMatrix::identity(2)) + &kron(&ComplexSquareMatrix::identity(2), &h);
    let eta_h = config.hot.state();
    let eta_c = config.cold.state();
    let eta_hc = eta_h.tensor(&eta_c);

    let mut hots = Vec::with_capacity(n);
    let mut colds = Vec::with_capacity(n);
    let mut pairs = Vec::with_capacity(n);
    for j in 1..=n {
        hots.push(joint.hot_ancilla(j)?);
        colds.push(joint.cold_ancilla(j)?);
        pairs.push(joint.ancilla_pair(j)?);
    }
    let (log_h, viol_h) = log_with_support(&eta_h, &hots.iter().collect::<Vec<_>>())?;
    let (log_c, viol_c) = log_with_support(&eta_c, &colds.iter().collect::<Vec<_>>())?;
    let (log_hc, viol_hc) = log_with_support(&eta_hc, &pairs.iter().collect::<Vec<_>>())?;

    let mut ledger = EntropyLedger {
        n,
        ds_system: 0.0,
        ds_production: 0.0,
        ds_flow_total: 0.0,
        ds_flow_hot: 0.0,
        ds_flow_cold: 0.0,
        global_entropy_change: 0.0,
        heat_hot: 0.0,
        heat_cold: 0.0,
        heat_pairs: 0.0,
        support_violated: viol_h || viol_c || viol_hc,
    };
    for ((hot, cold), pair) in hots.iter().zip(&colds).zip(&pairs) {
        let dh = hot.matrix() - eta_h.matrix();
        let dc = cold.matrix() - eta_c.matrix();
        let dhc = pair.matrix() - eta_hc.matrix();
        ledger.ds_flow_hot += tr_re(&dh, &log_h)?;
        ledger.ds_flow_cold += tr_re(&dc, &log_c)?;
        ledger.ds_flow_total += tr_re(&dhc, &log_hc)?;
        ledger.heat_hot += expectation_raw(&h, &dh)?;
        ledger.heat_cold += expectation_raw(&h, &dc)?;
        ledger.heat_pairs += expectation_raw(&h_pair, &dhc)?;
    }

    let system = joint.system()?;
    let s_system = von_neumann_entropy(&system)?;
    let s_system0 = von_neumann_entropy(&config.initial_system)?;
    ledger.ds_system = s_system - s_system0;

    // ln of the product reference is a Kronecker sum of local logs.
    let (log_sys, viol_sys) = log_with_support(&system, &[&system])?;
    ledger.support_violated |= viol_sys;
    let mut log_ref = log_sys;
    let id4 = ComplexSquareMatrix::identity(4);
    for _ in 0..n {
        let left = kron(&log_ref, &id4);
        log_ref = &left + &kron(&ComplexSquareMatrix::identity(log_ref.dim()), &log_hc);
    }
    let s_total = von_neumann_entropy(&joint.state)?;
    ledger.ds_production = -s_total - tr_re(joint.state.matrix(), &log_ref)?;

    let s_anc = von_neumann_entropy(&eta_h)? + von_neumann_entropy(&eta_c)?;
    ledger.global_entropy_change = s_total - (s_system0 + n as f64 * s_anc);
    Ok(ledger)
}

/// Ledgers after each of the first `n` collisions.
pub fn ledger_series(config: &CollisionConfig, n: usize, cap: usize) -> Result<Vec<EntropyLedger>> {
    let mut out = Vec::with_capacity(n);
    joint_trajectory_each(config, n, cap, |joint| {
        out.push(entropy_ledger(joint, config)?);
        Ok(())
    })?;
    Ok(out)
}
