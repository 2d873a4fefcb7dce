//! Per-hand key points, finger extension flags, and pointer configurations.

use thiserror::Error;

use crate::geometry::Point2;
use crate::landmark::{idx, HandObservation};

/// Collapsed-landmark guard for the extension heuristic.
const DEGENERATE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyPoints {
    pub wrist: Point2,
    pub thumb_tip: Point2,
    pub index_tip: Point2,
    pub middle_tip: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Finger {
    Thumb,
    Index,
    Middle,
    Ring,
    Pinky,
}

impl Finger {
    pub const ALL: [Finger; 5] = [
        Finger::Thumb,
        Finger::Index,
        Finger::Middle,
        Finger::Ring,
        Finger::Pinky,
    ];

    /// Tip and the joint compared against it (PIP, or IP for the thumb).
    fn tip_and_pip(self) -> (usize, usize) {
        match self {
            Finger::Thumb => (idx::THUMB_TIP, idx::THUMB_IP),
            Finger::Index => (idx::INDEX_TIP, idx::INDEX_PIP),
            Finger::Middle => (idx::MIDDLE_TIP, idx::MIDDLE_PIP),
            Finger::Ring => (idx::RING_TIP, idx::RING_PIP),
            Finger::Pinky => (idx::PINKY_TIP, idx::PINKY_PIP),
        }
    }
}

/// Extended = true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FingerFlags {
    pub thumb: bool,
    pub index: bool,
    pub middle: bool,
    pub ring: bool,
    pub pinky: bool,
}

impl FingerFlags {
    pub const fn new(thumb: bool, index: bool, middle: bool, ring: bool, pinky: bool) -> Self {
        Self {
            thumb,
            index,
            middle,
            ring,
            pinky,
        }
    }

    pub fn get(&self, finger: Finger) -> bool {
        match finger {
            Finger::Thumb => self.thumb,
            Finger::Index => self.index,
            Finger::Middle => self.middle,
            Finger::Ring => self.ring,
            Finger::Pinky => self.pinky,
        }
    }

    /// Number of fingers whose flag differs.
    pub fn hamming(&self, other: &FingerFlags) -> u32 {
        Finger::ALL
            .iter()
            .filter(|&&f| self.get(f) != other.get(f))
            .count() as u32
    }

    /// All 32 flag combinations.
    pub fn all_combinations() -> impl Iterator<Item = FingerFlags> {
        (0u8..32).map(|bits| {
            FingerFlags::new(
                bits & 1 != 0,
                bits & 2 != 0,
                bits & 4 != 0,
                bits & 8 != 0,
                bits & 16 != 0,
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointerConfig {
    OpenPalm,
    SeekPointer,
    VolumePointer,
    BrightnessPointer,
    Other,
}

impl PointerConfig {
    /// Canonical flags of the named configurations.
    pub fn canonical_flags(self) -> Option<FingerFlags> {
        match self {
            PointerConfig::OpenPalm => Some(FingerFlags::new(true, true, true, true, true)),
            PointerConfig::SeekPointer => Some(FingerFlags::new(false, true, false, false, false)),
            PointerConfig::VolumePointer => Some(FingerFlags::new(true, true, true, false, false)),
            PointerConfig::BrightnessPointer => {
                Some(FingerFlags::new(true, true, false, false, false))
            }
            PointerConfig::Other => None,
        }
    }
}

/// Tip-to-reference distance ratios above which a finger counts as extended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionRatios {
    /// Index, middle, ring, pinky: tip/PIP distance ratio to the wrist.
    pub finger: f64,
    /// Thumb: tip/IP distance ratio to the middle MCP.
    pub thumb: f64,
}

impl Default for ExtensionRatios {
    fn default() -> Self {
        Self {
            finger: 1.10,
            thumb: 1.20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("degenerate hand: collapsed landmarks for {0:?}")]
pub struct DegenerateHand(pub Finger);

fn pt(hand: &HandObservation, index: usize) -> Point2 {
    let lm = hand.landmark(index);
    Point2::new(lm.x, lm.y)
}

pub fn extract_keypoints(hand: &HandObservation) -> KeyPoints {
    KeyPoints {
        wrist: pt(hand, idx::WRIST),
        thumb_tip: pt(hand, idx::THUMB_TIP),
        index_tip: pt(hand, idx::INDEX_TIP),
        middle_tip: pt(hand, idx::MIDDLE_TIP),
    }
}

pub fn finger_extended(
    hand: &HandObservation,
    finger: Finger,
    ratios: &ExtensionRatios,
) -> Result<bool, DegenerateHand> {
    let (tip, joint) = finger.tip_and_pip();
    let (anchor, ratio) = match finger {
        Finger::Thumb => (pt(hand, idx::MIDDLE_MCP), ratios.thumb),
        _ => (pt(hand, idx::WRIST), ratios.finger),
    };
    let joint_dist = pt(hand, joint).distance(anchor);
    if joint_dist < DEGENERATE_EPS {
        return Err(DegenerateHand(finger));
    }
    Ok(pt(hand, tip).distance(anchor) > ratio * joint_dist)
}

pub fn finger_flags(
    hand: &HandObservation,
    ratios: &ExtensionRatios,
) -> Result<FingerFlags, DegenerateHand> {
    Ok(FingerFlags {
        thumb: finger_extended(hand, Finger::Thumb, ratios)?,
        index: finger_extended(hand, Finger::Index, ratios)?,
        middle: finger_extended(hand, Finger::Middle, ratios)?,
        ring: finger_extended(hand, Finger::Ring, ratios)?,
        pinky: finger_extended(hand, Finger::Pinky, ratios)?,
    })
}

pub fn classify_config(flags: FingerFlags) -> PointerConfig {
    let FingerFlags {
        thumb,
        index,
        middle,
        ring,
        pinky,
    } = flags;
    match (thumb, index, middle, ring, pinky) {
        (true, true, true, true, true) => PointerConfig::OpenPalm,
        (false, true, false, false, false) => PointerConfig::SeekPointer,
        (true, true, true, false, false) => PointerConfig::VolumePointer,
        (true, true, false, false, false) => PointerConfig::BrightnessPointer,
        _ => PointerConfig::Other,
    }
}

/// Everything the state machine needs from one hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandFeatures {
    pub keypoints: KeyPoints,
    /// `None` when the hand is degenerate.
    pub flags: Option<FingerFlags>,
    pub config: PointerConfig,
}

pub fn hand_features(hand: &HandObservation, ratios: &ExtensionRatios) -> HandFeatures {
    let flags = finger_flags(hand, ratios).ok();
    HandFeatures {
        keypoints: extract_keypoints(hand),
        flags,
        config: flags.map_or(PointerConfig::Other, classify_config),
    }
}
