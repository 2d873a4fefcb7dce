//! Synthetic hand poses for trace generation and tests.
//!
//! Poses are built in a hand-local frame (`a` along the wrist → middle
//! fingertip axis, `b` toward the thumb side) where an extended middle
//! finger has unit length, then rotated, scaled, and placed in the image.

use crate::features::{FingerFlags, PointerConfig};
use crate::geometry::Point2;
use crate::landmark::{idx, HandObservation, Handedness, Landmark, LANDMARK_COUNT};

// Local (a, b) coordinates. Each finger lists MCP, PIP, DIP, TIP (thumb:
// CMC, MCP, IP, TIP) for the extended case; curled variants replace the
// last two entries.
const WRIST: (f64, f64) = (0.0, 0.0);
const THUMB_EXT: [(f64, f64); 4] = [(0.12, 0.12), (0.22, 0.22), (0.30, 0.32), (0.35, 0.48)];
const THUMB_FOLD: [(f64, f64); 2] = [(0.30, 0.25), (0.40, 0.10)];
const INDEX_EXT: [(f64, f64); 4] = [(0.43, 0.10), (0.62, 0.11), (0.77, 0.115), (0.92, 0.12)];
const INDEX_CURL: [(f64, f64); 2] = [(0.55, 0.11), (0.45, 0.11)];
const MIDDLE_EXT: [(f64, f64); 4] = [(0.45, 0.0), (0.65, 0.0), (0.82, 0.0), (1.0, 0.0)];
const MIDDLE_CURL: [(f64, f64); 2] = [(0.56, 0.0), (0.46, 0.0)];
const RING_EXT: [(f64, f64); 4] = [(0.42, -0.09), (0.60, -0.10), (0.75, -0.11), (0.90, -0.12)];
const RING_CURL: [(f64, f64); 2] = [(0.53, -0.10), (0.44, -0.10)];
const PINKY_EXT: [(f64, f64); 4] = [(0.38, -0.18), (0.52, -0.20), (0.64, -0.22), (0.76, -0.24)];
const PINKY_CURL: [(f64, f64); 2] = [(0.46, -0.20), (0.38, -0.19)];

fn local_landmarks(flags: FingerFlags) -> [(f64, f64); LANDMARK_COUNT] {
    let mut out = [(0.0, 0.0); LANDMARK_COUNT];
    out[idx::WRIST] = WRIST;
    let fingers = [
        (idx::THUMB_CMC, THUMB_EXT, THUMB_FOLD, flags.thumb),
        (idx::INDEX_MCP, INDEX_EXT, INDEX_CURL, flags.index),
        (idx::MIDDLE_MCP, MIDDLE_EXT, MIDDLE_CURL, flags.middle),
        (idx::RING_MCP, RING_EXT, RING_CURL, flags.ring),
        (idx::PINKY_MCP, PINKY_EXT, PINKY_CURL, flags.pinky),
    ];
    for (base, ext, curl, extended) in fingers {
        out[base..base + 4].copy_from_slice(&ext);
        if !extended {
            out[base + 2..base + 4].copy_from_slice(&curl);
        }
    }
    out
}

/// A hand placed in the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandPose {
    pub handedness: Handedness,
    pub flags: FingerFlags,
    pub wrist: Point2,
    /// Direction of the wrist → middle fingertip axis, radians, image frame.
    pub angle: f64,
    /// Wrist → extended middle fingertip length, normalized units.
    pub scale: f64,
}

impl HandPose {
    pub fn with_config(handedness: Handedness, config: PointerConfig) -> Self {
        Self {
            handedness,
            flags: config
                .canonical_flags()
                .unwrap_or(FingerFlags::new(false, false, false, false, false)),
            wrist: Point2::new(0.5, 0.5),
            angle: 0.0,
            scale: 0.3,
        }
    }

    fn to_image(self, (a, b): (f64, f64)) -> Point2 {
        // Mirror the lateral axis so the thumb sits on the anatomical side.
        let b = match self.handedness {
            Handedness::Right => b,
            Handedness::Left => -b,
        };
        let (s, c) = self.angle.sin_cos();
        Point2::new(
            self.wrist.x + self.scale * (c * a - s * b),
            self.wrist.y + self.scale * (s * a + c * b),
        )
    }

    pub fn landmarks(&self) -> [Landmark; LANDMARK_COUNT] {
        local_landmarks(self.flags).map(|p| {
            let q = self.to_image(p);
            Landmark::new(q.x, q.y, 0.0)
        })
    }

    pub fn observation(&self, score: f64) -> HandObservation {
        HandObservation {
            handedness: self.handedness,
            score,
            landmarks: self.landmarks(),
        }
    }

    /// Translates the pose so landmark `index` lands exactly on `target`.
    pub fn anchored(&self, index: usize, target: Point2, score: f64) -> HandObservation {
        let current = self.to_image(local_landmarks(self.flags)[index]);
        let moved = HandPose {
            wrist: self.wrist + (target - current),
            ..*self
        };
        let mut obs = moved.observation(score);
        obs.landmarks[index] = Landmark::new(target.x, target.y, 0.0);
        obs
    }
}

/// Left open palm whose wrist sits at `origin` and middle fingertip at `tip`.
pub fn bar_hand(origin: Point2, tip: Point2, score: f64) -> HandObservation {
    let d = tip - origin;
    let pose = HandPose {
        handedness: Handedness::Left,
        flags: PointerConfig::OpenPalm.canonical_flags().unwrap(),
        wrist: origin,
        angle: d.y.atan2(d.x),
        scale: d.norm(),
    };
    let mut obs = pose.observation(score);
    obs.landmarks[idx::WRIST] = Landmark::new(origin.x, origin.y, 0.0);
    obs.landmarks[idx::MIDDLE_TIP] = Landmark::new(tip.x, tip.y, 0.0);
    obs
}

/// Default image angle of a right pointer hand: fingers up and slightly left.
pub const POINTER_ANGLE: f64 = -2.0;
pub const POINTER_SCALE: f64 = 0.3;

/// Right hand in `config` with landmark `index` placed on `target`.
pub fn pointer_hand(config: PointerConfig, index: usize, target: Point2) -> HandObservation {
    HandPose {
        angle: POINTER_ANGLE,
        scale: POINTER_SCALE,
        ..HandPose::with_config(Handedness::Right, config)
    }
    .anchored(index, target, 0.95)
}
