//! Value smoothing, wire commands, and the virtual player model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fsm::{ControlKind, EventPhase, GestureEvent};

/// Time-constant EMA: `alpha = 1 - exp(-dt / tau)`, so the response does
/// not depend on frame rate. The first sample after a reset passes through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoother {
    last_value: Option<f64>,
    tau_ms: f64,
}

impl Smoother {
    pub fn new(tau_ms: f64) -> Self {
        Self {
            last_value: None,
            tau_ms,
        }
    }

    pub fn last_value(&self) -> Option<f64> {
        self.last_value
    }

    pub fn tau_ms(&self) -> f64 {
        self.tau_ms
    }

    pub fn reset(&mut self) {
        self.last_value = None;
    }

    pub fn smooth(&mut self, raw: f64, dt_ms: f64) -> f64 {
        let out = match self.last_value {
            None => raw,
            Some(last) => {
                let alpha = 1.0 - (-dt_ms / self.tau_ms).exp();
                last + alpha * (raw - last)
            }
        }
        .clamp(0.0, 1.0);
        self.last_value = Some(out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlCommand {
    pub t_ms: u64,
    pub kind: ControlKind,
    pub phase: EventPhase,
    pub value: f64,
}

impl ControlCommand {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("command serialization cannot fail")
    }
}

impl From<GestureEvent> for ControlCommand {
    fn from(e: GestureEvent) -> Self {
        Self {
            t_ms: e.t_ms,
            kind: e.kind,
            phase: e.phase,
            value: e.value,
        }
    }
}

pub fn events_to_commands(events: &[GestureEvent]) -> Vec<ControlCommand> {
    events.iter().copied().map(ControlCommand::from).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerModel {
    /// Fraction of the video duration.
    pub position: f64,
    pub volume: f64,
    pub brightness: f64,
    pub playing: bool,
}

impl Default for PlayerModel {
    fn default() -> Self {
        Self {
            position: 0.0,
            volume: 0.5,
            brightness: 1.0,
            playing: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("command value {0} outside [0, 1]")]
pub struct ValueOutOfRange(pub f64);

impl PlayerModel {
    /// Writes the command's absolute value into the field it controls.
    pub fn apply_command(mut self, cmd: &ControlCommand) -> Result<PlayerModel, ValueOutOfRange> {
        if !(0.0..=1.0).contains(&cmd.value) {
            return Err(ValueOutOfRange(cmd.value));
        }
        match cmd.kind {
            ControlKind::Seek => self.position = cmd.value,
            ControlKind::Volume => self.volume = cmd.value,
            ControlKind::Brightness => self.brightness = cmd.value,
        }
        Ok(self)
    }

    pub fn snapshot(&self, t_ms: u64) -> PlayerSnapshot {
        PlayerSnapshot {
            t_ms,
            position: self.position,
            volume: self.volume,
            brightness: self.brightness,
            playing: self.playing,
        }
    }
}

/// Player state as sent on the wire after each applied command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerSnapshot {
    pub t_ms: u64,
    pub position: f64,
    pub volume: f64,
    pub brightness: f64,
    pub playing: bool,
}

impl PlayerSnapshot {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("snapshot serialization cannot fail")
    }
}
