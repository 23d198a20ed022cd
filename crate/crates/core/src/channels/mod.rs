//! Quantum channels in Kraus form and the qubit noise models.
//!
//! Two channels are considered equal when their superoperators agree, since
//! Kraus representations are not unique. Vectorization is column stacking.

mod json;
mod kraus;
mod noise;

pub use json::ChannelRecord;
pub use kraus::{
    compose_maps, ChoiMatrix, KrausMap, QuantumChannel, MAP_EQUALITY_TOLERANCE, TP_TOLERANCE,
};
pub use noise::{amplitude_damping, dephasing, depolarizing, fully_depolarizing, ChannelFamily};
