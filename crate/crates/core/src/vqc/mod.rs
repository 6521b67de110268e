//! Variational circuits and their training.
//!
//! An [`AnsatzSpec`] builds a parameterised [`Circuit`](crate::qsim::Circuit);
//! an [`EnergyEstimator`] maps parameters to an energy, exactly or from
//! emulated shots; gradients come from the parameter-shift rule and steps from
//! Adam. [`train`] optimises all parameters at once, [`hierarchical_train`]
//! grows a GHZ ladder two qubits at a time.

mod adam;
mod ansatz;
mod estimator;
mod gradient;
mod hierarchical;
mod train;
mod trajectory;

pub use adam::{adam_step, OptimizerState};
pub use ansatz::{
    build_chain_ansatz, build_hierarchical_ansatz, build_honeycomb_ansatz, hierarchical_slots, AnsatzSpec, Init,
    MAX_PHASE,
};
pub use estimator::{EnergyEstimator, Estimate, ExactEstimator, PauliShotEstimator};
pub use gradient::{adjoint_gradient, check_shift_eligible, parameter_shift_gradient, shift_gradient, ShiftTag};
pub use hierarchical::{hierarchical_train, HierarchicalConfig, HierarchicalOutcome, PhaseSummary};
pub use train::{estimator_for, train, train_slots, Mode, TrainConfig, TrainOutcome, TrainRecord};
pub use trajectory::{read_trajectory, write_trajectory, TrajectoryHeader, TRAJECTORY_SCHEMA, TRAJECTORY_VERSION};
