//! Landmark frame data model, wire parsing, and stream ordering.
//!
//! A frame carries up to two hands, each with the 21-point hand topology
//! used by common landmark trackers (0 = wrist, 4 = thumb tip, 8 = index
//! tip, 12 = middle tip, ...). Coordinates are image-normalized with y
//! pointing down.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of landmarks per hand.
pub const LANDMARK_COUNT: usize = 21;

/// Coordinates outside this range are rejected. Trackers overshoot the
/// frame border slightly, so the range is wider than [0, 1].
pub const COORD_MIN: f64 = -0.5;
pub const COORD_MAX: f64 = 1.5;

/// Landmark indices of the 21-point hand topology.
pub mod idx {
    pub const WRIST: usize = 0;
    pub const THUMB_CMC: usize = 1;
    pub const THUMB_MCP: usize = 2;
    pub const THUMB_IP: usize = 3;
    pub const THUMB_TIP: usize = 4;
    pub const INDEX_MCP: usize = 5;
    pub const INDEX_PIP: usize = 6;
    pub const INDEX_DIP: usize = 7;
    pub const INDEX_TIP: usize = 8;
    pub const MIDDLE_MCP: usize = 9;
    pub const MIDDLE_PIP: usize = 10;
    pub const MIDDLE_DIP: usize = 11;
    pub const MIDDLE_TIP: usize = 12;
    pub const RING_MCP: usize = 13;
    pub const RING_PIP: usize = 14;
    pub const RING_DIP: usize = 15;
    pub const RING_TIP: usize = 16;
    pub const PINKY_MCP: usize = 17;
    pub const PINKY_PIP: usize = 18;
    pub const PINKY_DIP: usize = 19;
    pub const PINKY_TIP: usize = 20;
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Landmark {
    pub x: f64,
    pub y: f64,
    /// Relative depth. Parsed and kept, ignored by the 2D pipeline.
    pub z: f64,
}

impl Landmark {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Handedness {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandObservation {
    pub handedness: Handedness,
    pub score: f64,
    pub landmarks: [Landmark; LANDMARK_COUNT],
}

impl HandObservation {
    pub fn landmark(&self, index: usize) -> Landmark {
        self.landmarks[index]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFrame {
    pub t_ms: u64,
    pub hands: Vec<HandObservation>,
}

impl LandmarkFrame {
    /// First hand carrying the given label.
    pub fn hand(&self, handedness: Handedness) -> Option<&HandObservation> {
        self.hands.iter().find(|h| h.handedness == handedness)
    }

    pub fn left(&self) -> Option<&HandObservation> {
        self.hand(Handedness::Left)
    }

    pub fn right(&self) -> Option<&HandObservation> {
        self.hand(Handedness::Right)
    }

    /// Serializes to one wire record, without the trailing newline.
    pub fn to_json_line(&self) -> String {
        let wire = WireFrame {
            t_ms: self.t_ms,
            hands: self
                .hands
                .iter()
                .map(|h| WireHand {
                    handedness: h.handedness,
                    score: h.score,
                    landmarks: h.landmarks.iter().map(|l| vec![l.x, l.y, l.z]).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("frame serialization cannot fail")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("value out of range: {0}")]
    ValueOutOfRange(String),
    #[error("non-monotonic timestamp: {t_ms} <= {prev_t_ms}")]
    NonMonotonicTimestamp { prev_t_ms: u64, t_ms: u64 },
}

impl FrameError {
    /// Stable name used in diagnostic records.
    pub fn code(&self) -> &'static str {
        match self {
            FrameError::MalformedRecord(_) => "MalformedRecord",
            FrameError::SchemaViolation(_) => "SchemaViolation",
            FrameError::ValueOutOfRange(_) => "ValueOutOfRange",
            FrameError::NonMonotonicTimestamp { .. } => "NonMonotonicTimestamp",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WireFrame {
    t_ms: u64,
    hands: Vec<WireHand>,
}

#[derive(Serialize, Deserialize)]
struct WireHand {
    handedness: Handedness,
    score: f64,
    landmarks: Vec<Vec<f64>>,
}

/// Parses one wire record. Unknown fields are ignored.
pub fn parse_frame(line: &[u8]) -> Result<LandmarkFrame, FrameError> {
    let wire: WireFrame = serde_json::from_slice(line).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => FrameError::SchemaViolation(e.to_string()),
            Category::Io | Category::Syntax | Category::Eof => {
                FrameError::MalformedRecord(e.to_string())
            }
        }
    })?;

    if wire.hands.len() > 2 {
        return Err(FrameError::SchemaViolation(format!(
            "expected at most 2 hands, got {}",
            wire.hands.len()
        )));
    }

    let mut hands = Vec::with_capacity(wire.hands.len());
    for (h, hand) in wire.hands.into_iter().enumerate() {
        if hand.landmarks.len() != LANDMARK_COUNT {
            return Err(FrameError::SchemaViolation(format!(
                "hand {h}: expected {LANDMARK_COUNT} landmarks, got {}",
                hand.landmarks.len()
            )));
        }
        if !(0.0..=1.0).contains(&hand.score) {
            return Err(FrameError::ValueOutOfRange(format!(
                "hand {h}: score {} outside [0, 1]",
                hand.score
            )));
        }
        let mut landmarks = [Landmark::default(); LANDMARK_COUNT];
        for (i, (slot, triple)) in landmarks.iter_mut().zip(&hand.landmarks).enumerate() {
            let [x, y, z] = triple[..] else {
                return Err(FrameError::SchemaViolation(format!(
                    "hand {h} landmark {i}: expected [x, y, z], got {} values",
                    triple.len()
                )));
            };
            if !(x.is_finite() && y.is_finite() && z.is_finite()) {
                return Err(FrameError::ValueOutOfRange(format!(
                    "hand {h} landmark {i}: non-finite coordinate"
                )));
            }
            let in_range = |v: f64| (COORD_MIN..=COORD_MAX).contains(&v);
            if !in_range(x) || !in_range(y) {
                return Err(FrameError::ValueOutOfRange(format!(
                    "hand {h} landmark {i}: ({x}, {y}) outside [{COORD_MIN}, {COORD_MAX}]"
                )));
            }
            *slot = Landmark::new(x, y, z);
        }
        hands.push(HandObservation {
            handedness: hand.handedness,
            score: hand.score,
            landmarks,
        });
    }

    Ok(LandmarkFrame {
        t_ms: wire.t_ms,
        hands,
    })
}

/// Enforces strictly increasing timestamps and unique handedness labels.
///
/// When two hands share a label the higher score wins; on a tie the first
/// occurrence is kept.
pub fn validate_sequence(
    prev_t_ms: Option<u64>,
    frame: LandmarkFrame,
) -> Result<LandmarkFrame, FrameError> {
    if let Some(prev) = prev_t_ms {
        if frame.t_ms <= prev {
            return Err(FrameError::NonMonotonicTimestamp {
                prev_t_ms: prev,
                t_ms: frame.t_ms,
            });
        }
    }

    let mut kept: Vec<HandObservation> = Vec::with_capacity(2);
    for hand in frame.hands {
        match kept.iter_mut().find(|k| k.handedness == hand.handedness) {
            Some(existing) if hand.score > existing.score => *existing = hand,
            Some(_) => {}
            None => kept.push(hand),
        }
    }

    Ok(LandmarkFrame {
        t_ms: frame.t_ms,
        hands: kept,
    })
}
