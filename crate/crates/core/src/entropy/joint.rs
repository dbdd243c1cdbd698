use crate::collision::{swap_unitary, CollisionConfig, REG_SA, REG_SB};
use crate::qdm::{conjugate_local, kron, DensityOperator};
use crate::{Error, Result};

pub const DEFAULT_JOINT_CAP: usize = 4;
/// Largest cap accepted at all; `5` needs roughly 268 MB for the state alone.
pub const MAX_JOINT_CAP: usize = 5;

/// Bytes of one dense complex joint state after `n` collisions.
pub fn joint_state_bytes(n: usize) -> u128 {
    let dim = 4u128.pow(n as u32 + 1);
    dim * dim * 16
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if cap > MAX_JOINT_CAP {
        return Err(Error::ResourceLimit(format!(
            "joint-state cap {cap} exceeds the hard maximum {MAX_JOINT_CAP}"
        )));
    }
    if n > cap {
        let mb = joint_state_bytes(n) as f64 / 1e6;
        return Err(Error::ResourceLimit(format!(
            "{n} collisions need a {}-dimensional joint state (about {mb:.0} MB per copy); cap is {cap}",
            4usize.pow(n as u32 + 1)
        )));
    }
    Ok(())
}

/// System plus every ancilla it has met, in the order
/// `S_A, S_B, R_h_1, R_c_1, R_h_2, R_c_2, …`.
#[derive(Clone, Debug)]
pub struct JointState {
    pub state: DensityOperator,
    pub n_collisions: usize,
}

impl JointState {
    pub fn initial(config: &CollisionConfig) -> Self {
        Self {
            state: config.initial_system.clone(),
            n_collisions: 0,
        }
    }

    /// Register index of the hot ancilla of collision `j` (1-based).
    pub fn hot_register(j: usize) -> usize {
        2 * j
    }

    pub fn cold_register(j: usize) -> usize {
        2 * j + 1
    }

    /// Appends fresh ancillas and applies one collision unitary.
    pub fn collide(&mut self, config: &CollisionConfig) -> Result<()> {
        let j = self.n_collisions + 1;
        let anc = kron(config.hot.state().matrix(), config.cold.state().matrix());
        let grown = kron(self.state.matrix(), &anc);
        let dims = vec![2; 2 * j + 2];
        let v = swap_unitary(config.coupling.delta);
        let u = swap_unitary(config.coupling.gamma);
        let m = conjugate_local(&grown, &dims, &v, &[REG_SA, REG_SB])?;
        let m = conjugate_local(&m, &dims, &u, &[REG_SA, Self::hot_register(j)])?;
        let m = conjugate_local(&m, &dims, &u, &[REG_SB, Self::cold_register(j)])?;
        self.state = DensityOperator::from_evolved(m, dims).map_err(|e| e.at_step(j))?;
        self.n_collisions = j;
        Ok(())
    }

    pub fn system(&self) -> Result<DensityOperator> {
        self.state.partial_trace(&[REG_SA, REG_SB])
    }

    pub fn hot_ancilla(&self, j: usize) -> Result<DensityOperator> {
        self.ancilla_marginal(j, &[Self::hot_register(j)])
    }

    pub fn cold_ancilla(&self, j: usize) -> Result<DensityOperator> {
        self.ancilla_marginal(j, &[Self::cold_register(j)])
    }

    /// Joint marginal of the `j`-th hot and cold ancillas.
    pub fn ancilla_pair(&self, j: usize) -> Result<DensityOperator> {
        self.ancilla_marginal(j, &[Self::hot_register(j), Self::cold_register(j)])
    }

    fn ancilla_marginal(&self, j: usize, keep: &[usize]) -> Result<DensityOperator> {
        if j == 0 || j > self.n_collisions {
            return Err(Error::InvalidArgument(format!(
                "ancilla {j} does not exist after {} collisions",
                self.n_collisions
            )));
        }
        self.state.partial_trace(keep)
    }
}

/// Exact global evolution through `n` collisions.
pub fn joint_trajectory(config: &CollisionConfig, n: usize, cap: usize) -> Result<JointState> {
    joint_trajectory_each(config, n, cap, |_| Ok(()))
}

/// Like [`joint_trajectory`], calling `visit` on the state after every
/// collision. Returns the final state.
pub fn joint_trajectory_each(
    config: &CollisionConfig,
    n: usize,
    cap: usize,
    mut visit: impl FnMut(&JointState) -> Result<()>,
) -> Result<JointState> {
    if n == 0 {
        return Err(Error::InvalidArgument("joint trajectory needs at least one collision".into()));
    }
    check_cap(n, cap)?;
    let mut joint = JointState::initial(config);
    for _ in 0..n {
        joint.collide(config)?;
        visit(&joint)?;
    }
    Ok(joint)
}
