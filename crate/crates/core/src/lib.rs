//! Gesture interpretation engine for mid-air video-player control.
//!
//! Streams of 21-point hand-landmark frames go in; seek, volume, and
//! brightness commands come out. The left hand's wrist → middle fingertip
//! segment acts as an on-body bar, and the right hand's pointer fingertip
//! selects a position along it.
//!
//! The pipeline is `landmark` (wire parsing, ordering) → `features`
//! (finger flags, pointer configuration) → `geometry` (clamped projection)
//! → `fsm` (trigger / baseline / interaction states) → `control`
//! (smoothing, commands, player model). `session`, `replay`, `generate`,
//! and `serve` wire it to files and sockets.

pub mod config;
pub mod control;
pub mod features;
pub mod fsm;
pub mod generate;
pub mod geometry;
pub mod landmark;
pub mod replay;
pub mod serve;
pub mod session;
pub mod synth;

pub use config::{EngineConfig, FsmConfig, VolumePointer};
pub use control::{ControlCommand, PlayerModel, PlayerSnapshot, Smoother};
pub use fsm::{ControlKind, EventPhase, GestureEvent, GestureState, Phase};
pub use landmark::{parse_frame, validate_sequence, FrameError, LandmarkFrame};
pub use session::Session;
