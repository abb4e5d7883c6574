//! Uplink frame synthesis for a grant-free mMTC cell with optional jammers.

mod activity;
mod channel;
mod config;
pub mod dump;
mod frame;
mod spreading;

pub use activity::{sample_activity, ActivityMatrix};
pub use channel::{complex_gaussian, dbm_to_watts, path_loss, qpsk_symbol};
pub use config::{ActivityModel, SpreadingKind, SystemConfig};
pub use frame::{
    attack_overlay, attack_slot, normal_slot, synthesize_attacked_frame, synthesize_normal_frame,
    AttackerProfile, FrameObservation, Topology,
};
pub use spreading::SpreadingMatrix;
