//! Reversible and quantum arithmetic circuits over the Clifford+T gate set:
//! construction, lowering, simulation and resource accounting.

pub mod arithmetic;
pub mod io;
pub mod ir;
pub mod lowering;
pub mod metrics;
pub mod qft;
pub mod rotation;
pub mod sim;

pub use ir::{Block, Circuit, Gate, GateKind, Item, QubitId, QubitRole};
pub use metrics::{DepthConvention, ResourceReport};
pub use sim::{BasisState, StateVector};
