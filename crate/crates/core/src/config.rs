//! Engine configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! trigger_hold_ms = 300
//! touch_begin_ratio = 0.08
//! volume_pointer = middle
//! ```

use std::str::FromStr;

use thiserror::Error;

use crate::control::PlayerModel;
use crate::features::ExtensionRatios;
use crate::geometry::DEFAULT_MIN_SEGMENT_LEN;

/// Which right-hand fingertip drives the volume pointer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VolumePointer {
    #[default]
    Middle,
    Index,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsmConfig {
    pub trigger_hold_ms: u64,
    /// Seek touch begins below this fraction of the segment length.
    pub touch_begin_ratio: f64,
    /// Seek touch ends above this fraction of the segment length.
    pub touch_release_ratio: f64,
    /// Volume/brightness distance gate, as a fraction of segment length.
    pub engage_max_dist_ratio: f64,
    pub dropout_grace_ms: u64,
    pub min_segment_len: f64,
    pub extension: ExtensionRatios,
    pub volume_pointer: VolumePointer,
    pub smoothing_tau_ms: f64,
}

impl Default for FsmConfig {
    fn default() -> Self {
        Self {
            trigger_hold_ms: 300,
            touch_begin_ratio: 0.08,
            touch_release_ratio: 0.16,
            engage_max_dist_ratio: 0.75,
            dropout_grace_ms: 150,
            min_segment_len: DEFAULT_MIN_SEGMENT_LEN,
            extension: ExtensionRatios::default(),
            volume_pointer: VolumePointer::Middle,
            smoothing_tau_ms: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid configuration: {0}")]
    Invariant(String),
}

impl FsmConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("touch_begin_ratio", self.touch_begin_ratio),
            ("touch_release_ratio", self.touch_release_ratio),
            ("engage_max_dist_ratio", self.engage_max_dist_ratio),
            ("min_segment_len", self.min_segment_len),
            ("finger_extension_ratio", self.extension.finger),
            ("thumb_extension_ratio", self.extension.thumb),
            ("smoothing_tau_ms", self.smoothing_tau_ms),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invariant(format!("{name} must be positive, got {v}")));
            }
        }
        if self.trigger_hold_ms == 0 || self.dropout_grace_ms == 0 {
            return Err(ConfigError::Invariant(
                "trigger_hold_ms and dropout_grace_ms must be positive".into(),
            ));
        }
        if self.touch_begin_ratio >= self.touch_release_ratio {
            return Err(ConfigError::Invariant(format!(
                "touch_begin_ratio ({}) must be below touch_release_ratio ({})",
                self.touch_begin_ratio, self.touch_release_ratio
            )));
        }
        Ok(())
    }
}

/// Full engine configuration: state machine parameters plus the initial
/// player model of every new session.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EngineConfig {
    pub fsm: FsmConfig,
    pub initial_player: PlayerModel,
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn unit_interval(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse_value(line, key, value)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(v)
}

impl FromStr for EngineConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cfg = EngineConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let fsm = &mut cfg.fsm;
            match key {
                "trigger_hold_ms" => fsm.trigger_hold_ms = parse_value(line, key, value)?,
                "touch_begin_ratio" => fsm.touch_begin_ratio = parse_value(line, key, value)?,
                "touch_release_ratio" => fsm.touch_release_ratio = parse_value(line, key, value)?,
                "engage_max_dist_ratio" => {
                    fsm.engage_max_dist_ratio = parse_value(line, key, value)?
                }
                "dropout_grace_ms" => fsm.dropout_grace_ms = parse_value(line, key, value)?,
                "min_segment_len" => fsm.min_segment_len = parse_value(line, key, value)?,
                "finger_extension_ratio" => fsm.extension.finger = parse_value(line, key, value)?,
                "thumb_extension_ratio" => fsm.extension.thumb = parse_value(line, key, value)?,
                "smoothing_tau_ms" => fsm.smoothing_tau_ms = parse_value(line, key, value)?,
                "volume_pointer" => {
                    fsm.volume_pointer = match value {
                        "middle" => VolumePointer::Middle,
                        "index" => VolumePointer::Index,
                        _ => {
                            return Err(ConfigError::InvalidValue {
                                line,
                                key: key.to_string(),
                                value: value.to_string(),
                            })
                        }
                    }
                }
                "initial_position" => cfg.initial_player.position = unit_interval(line, key, value)?,
                "initial_volume" => cfg.initial_player.volume = unit_interval(line, key, value)?,
                "initial_brightness" => {
                    cfg.initial_player.brightness = unit_interval(line, key, value)?
                }
                "initial_playing" => cfg.initial_player.playing = parse_value(line, key, value)?,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.fsm.validate()?;
        Ok(cfg)
    }
}
