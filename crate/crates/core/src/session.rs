//! One pipeline instance: parse → validate → step → commands → player.

use serde::Serialize;

use crate::config::EngineConfig;
use crate::control::{events_to_commands, ControlCommand, PlayerModel, PlayerSnapshot};
use crate::fsm::{GestureEvent, GestureState};
use crate::landmark::{parse_frame, validate_sequence, FrameError, LandmarkFrame};

/// A command together with the player state right after applying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applied {
    pub command: ControlCommand,
    pub snapshot: PlayerSnapshot,
}

/// Diagnostic record for a rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub error: &'static str,
    /// 1-based record number within the session or trace.
    pub line: usize,
    pub detail: String,
}

impl Diagnostic {
    pub fn new(line: usize, err: &FrameError) -> Self {
        Self {
            error: err.code(),
            line,
            detail: err.to_string(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serialization cannot fail")
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    config: EngineConfig,
    state: GestureState,
    player: PlayerModel,
    last_t_ms: Option<u64>,
}

impl Session {
    pub fn new(id: impl Into<String>, config: EngineConfig) -> Self {
        Self {
            id: id.into(),
            state: GestureState::new(&config.fsm),
            player: config.initial_player,
            config,
            last_t_ms: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn player(&self) -> PlayerModel {
        self.player
    }

    pub fn state(&self) -> &GestureState {
        &self.state
    }

    pub fn last_t_ms(&self) -> Option<u64> {
        self.last_t_ms
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Processes one wire record. A rejected record leaves the session unchanged.
    pub fn push_record(&mut self, line: &[u8]) -> Result<Vec<Applied>, FrameError> {
        let frame = parse_frame(line)?;
        self.push_frame(frame)
    }

    pub fn push_frame(&mut self, frame: LandmarkFrame) -> Result<Vec<Applied>, FrameError> {
        let frame = validate_sequence(self.last_t_ms, frame)?;
        self.last_t_ms = Some(frame.t_ms);
        let events = self.state.step(&frame, &self.config.fsm);
        Ok(self.apply(&events))
    }

    fn apply(&mut self, events: &[GestureEvent]) -> Vec<Applied> {
        events_to_commands(events)
            .into_iter()
            .map(|command| {
                self.player = self
                    .player
                    .apply_command(&command)
                    .expect("state machine emits values in [0, 1]");
                Applied {
                    command,
                    snapshot: self.player.snapshot(command.t_ms),
                }
            })
            .collect()
    }
}
