//! Deterministic synthetic trace generator.
//!
//! Every scripted scenario starts with `ARM_MS` of a left open palm that
//! forms a horizontal bar from (0.3, 0.5) to (0.7, 0.5), long enough to
//! satisfy the default trigger hold.
//!
//! Randomness comes from ChaCha8 seeded with `seed`: stream 0 drives
//! scenario structure, stream 1 drives landmark noise. Uniform doubles use
//! the top 53 bits of each `u64` output; Gaussian samples use the Marsaglia
//! polar method, consuming two uniforms per attempt and yielding a pair.
//! Coordinates are rounded to 1e-6 before serialization.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::features::{FingerFlags, PointerConfig};
use crate::geometry::Point2;
use crate::landmark::{idx, HandObservation, Handedness, LandmarkFrame, COORD_MAX, COORD_MIN};
use crate::synth::{bar_hand, pointer_hand, HandPose};

pub const ARM_MS: u64 = 400;
pub const BAR_ORIGIN: Point2 = Point2::new(0.3, 0.5);
pub const BAR_TIP: Point2 = Point2::new(0.7, 0.5);

/// Fraction of the interaction window spent moving; the rest is dwell.
const SWEEP_FRACTION: f64 = 0.4;
/// Seek pointer rests this far past the bar tip after the sweep.
const FOLLOW_THROUGH: f64 = 0.02;
const SEEK_RELEASE_MS: u64 = 100;
const LIFT_DIST: f64 = 0.15;
/// Volume/brightness end by dropping the pointer configuration.
const CONFIG_RELEASE_MS: u64 = 300;
const MIN_SCRIPTED_MS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    SeekSweep,
    VolumeSet,
    BrightnessSet,
    IdleNoise,
    FalseTrigger,
    HysteresisOscillation,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 6] = [
        ScenarioName::SeekSweep,
        ScenarioName::VolumeSet,
        ScenarioName::BrightnessSet,
        ScenarioName::IdleNoise,
        ScenarioName::FalseTrigger,
        ScenarioName::HysteresisOscillation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::SeekSweep => "seek-sweep",
            ScenarioName::VolumeSet => "volume-set",
            ScenarioName::BrightnessSet => "brightness-set",
            ScenarioName::IdleNoise => "idle-noise",
            ScenarioName::FalseTrigger => "false-trigger",
            ScenarioName::HysteresisOscillation => "hysteresis-oscillation",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvalidScenario {
    #[error("unknown scenario `{0}`")]
    UnknownName(String),
    #[error("fps must be in 1..=1000, got {0}")]
    Fps(u32),
    #[error("noise sigma must be finite and non-negative, got {0}")]
    Noise(f64),
    #[error("{name} needs a duration of at least {min} ms, got {got}")]
    TooShort {
        name: ScenarioName,
        min: u64,
        got: u64,
    },
}

impl FromStr for ScenarioName {
    type Err = InvalidScenario;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| InvalidScenario::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub duration_ms: u64,
    pub fps: u32,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn new(name: ScenarioName, duration_ms: u64, fps: u32, noise_sigma: f64, seed: u64) -> Self {
        Self {
            name,
            duration_ms,
            fps,
            noise_sigma,
            seed,
        }
    }

    pub fn frame_count(&self) -> u64 {
        self.duration_ms * u64::from(self.fps) / 1000
    }

    pub fn validate(&self) -> Result<(), InvalidScenario> {
        if self.fps == 0 || self.fps > 1000 {
            return Err(InvalidScenario::Fps(self.fps));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(InvalidScenario::Noise(self.noise_sigma));
        }
        let scripted = !matches!(self.name, ScenarioName::IdleNoise | ScenarioName::FalseTrigger);
        if scripted && self.duration_ms < MIN_SCRIPTED_MS {
            return Err(InvalidScenario::TooShort {
                name: self.name,
                min: MIN_SCRIPTED_MS,
                got: self.duration_ms,
            });
        }
        Ok(())
    }
}

/// The traces shipped under `crates/core/traces/`.
pub fn bundled_scenarios() -> Vec<Scenario> {
    use ScenarioName::*;
    vec![
        Scenario::new(SeekSweep, 4000, 30, 0.0, 7),
        Scenario::new(VolumeSet, 3000, 30, 0.002, 11),
        Scenario::new(BrightnessSet, 3000, 30, 0.002, 13),
        Scenario::new(IdleNoise, 10_000, 30, 0.005, 17),
        Scenario::new(FalseTrigger, 10_000, 30, 0.005, 19),
        Scenario::new(HysteresisOscillation, 4000, 30, 0.0, 23),
    ]
}

/// Seeded uniform and Gaussian source.
pub struct NoiseSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NoiseSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal sample (polar method).
    pub fn gaussian(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }
}

pub fn generate_trace(s: &Scenario) -> Result<Vec<LandmarkFrame>, InvalidScenario> {
    s.validate()?;
    let mut structure = NoiseSource::new(s.seed, 0);
    let mut noise = NoiseSource::new(s.seed, 1);
    let times: Vec<u64> = (0..s.frame_count())
        .map(|i| i * 1000 / u64::from(s.fps))
        .collect();

    let mut frames = match s.name {
        ScenarioName::SeekSweep => scripted(&times, s.duration_ms, seek_sweep_hand),
        ScenarioName::VolumeSet => scripted(&times, s.duration_ms, volume_set_hand),
        ScenarioName::BrightnessSet => scripted(&times, s.duration_ms, brightness_set_hand),
        ScenarioName::HysteresisOscillation => {
            scripted(&times, s.duration_ms, hysteresis_hand)
        }
        ScenarioName::IdleNoise => wandering(&times, s.duration_ms, &mut structure, true),
        ScenarioName::FalseTrigger => wandering(&times, s.duration_ms, &mut structure, false),
    };

    for frame in &mut frames {
        for hand in &mut frame.hands {
            for lm in hand.landmarks.iter_mut() {
                let (dx, dy, dz) = (noise.gaussian(), noise.gaussian(), noise.gaussian());
                lm.x = quantize(lm.x + s.noise_sigma * dx);
                lm.y = quantize(lm.y + s.noise_sigma * dy);
                lm.z = quantize(lm.z + s.noise_sigma * dz);
            }
        }
    }
    Ok(frames)
}

pub fn trace_to_ndjson(frames: &[LandmarkFrame]) -> String {
    let mut out = String::new();
    for f in frames {
        out.push_str(&f.to_json_line());
        out.push('\n');
    }
    out
}

fn quantize(v: f64) -> f64 {
    ((v * 1e6).round() / 1e6).clamp(COORD_MIN, COORD_MAX)
}

/// Timing of the interaction window shared by the scripted scenarios.
struct Window {
    start: u64,
    release_at: u64,
}

impl Window {
    fn new(duration_ms: u64, release_ms: u64) -> Self {
        Self {
            start: ARM_MS,
            release_at: duration_ms.saturating_sub(release_ms),
        }
    }

    /// Progress through the sweep in [0, 1]; 1 during dwell.
    fn sweep(&self, t: u64) -> f64 {
        let active = (self.release_at - self.start) as f64;
        ((t - self.start) as f64 / (SWEEP_FRACTION * active)).min(1.0)
    }
}

/// Left bar for the whole trace; the right hand comes from `right`, which
/// sees the frame time and the trace duration.
fn scripted(
    times: &[u64],
    duration_ms: u64,
    right: fn(u64, u64) -> Option<HandObservation>,
) -> Vec<LandmarkFrame> {
    times
        .iter()
        .map(|&t| {
            let mut hands = vec![bar_hand(BAR_ORIGIN, BAR_TIP, 0.97)];
            if t >= ARM_MS {
                hands.extend(right(t, duration_ms));
            }
            LandmarkFrame { t_ms: t, hands }
        })
        .collect()
}

fn bar_point(t: f64, offset: f64) -> Point2 {
    let d = BAR_TIP - BAR_ORIGIN;
    BAR_ORIGIN + d * t + Point2::new(0.0, -offset)
}

fn seek_sweep_hand(t: u64, duration_ms: u64) -> Option<HandObservation> {
    let w = Window::new(duration_ms, SEEK_RELEASE_MS);
    let target = if t >= w.release_at {
        BAR_TIP + Point2::new(0.0, -LIFT_DIST)
    } else {
        let u = w.sweep(t);
        if u < 1.0 {
            bar_point(u, 0.0)
        } else {
            let dir = (BAR_TIP - BAR_ORIGIN) * (1.0 / (BAR_TIP - BAR_ORIGIN).norm());
            BAR_TIP + dir * FOLLOW_THROUGH
        }
    };
    Some(pointer_hand(PointerConfig::SeekPointer, idx::INDEX_TIP, target))
}

fn level_set_hand(
    t: u64,
    duration_ms: u64,
    config: PointerConfig,
    tip: usize,
    from: f64,
    to: f64,
    offset: f64,
) -> Option<HandObservation> {
    let w = Window::new(duration_ms, CONFIG_RELEASE_MS);
    let u = w.sweep(t.min(w.release_at));
    let target = bar_point(from + (to - from) * u, offset);
    let config = if t >= w.release_at {
        PointerConfig::OpenPalm
    } else {
        config
    };
    Some(pointer_hand(config, tip, target))
}

fn volume_set_hand(t: u64, duration_ms: u64) -> Option<HandObservation> {
    level_set_hand(
        t,
        duration_ms,
        PointerConfig::VolumePointer,
        idx::MIDDLE_TIP,
        0.2,
        0.8,
        0.1,
    )
}

fn brightness_set_hand(t: u64, duration_ms: u64) -> Option<HandObservation> {
    level_set_hand(
        t,
        duration_ms,
        PointerConfig::BrightnessPointer,
        idx::INDEX_TIP,
        0.9,
        0.3,
        0.08,
    )
}

/// Approach, one dip below the touch threshold, then a sinusoid that stays
/// strictly inside the hysteresis band (0.032, 0.064) of the 0.4 bar.
fn hysteresis_hand(t: u64, duration_ms: u64) -> Option<HandObservation> {
    let w = Window::new(duration_ms, SEEK_RELEASE_MS);
    let r = (t - ARM_MS) as f64;
    let dist = if t >= w.release_at {
        LIFT_DIST
    } else if r < 200.0 {
        LIFT_DIST + (0.02 - LIFT_DIST) * r / 200.0
    } else if r < 300.0 {
        0.02 + (0.048 - 0.02) * (r - 200.0) / 100.0
    } else {
        0.048 + 0.012 * (TAU * (r - 300.0) / 400.0).sin()
    };
    Some(pointer_hand(
        PointerConfig::SeekPointer,
        idx::INDEX_TIP,
        bar_point(0.5, dist),
    ))
}

/// Flag combinations for idle poses: at least two folded long fingers, so
/// landmark noise cannot turn them into an open palm.
const IDLE_FLAGS: [FingerFlags; 6] = [
    FingerFlags::new(false, false, false, false, false),
    FingerFlags::new(true, false, false, false, false),
    FingerFlags::new(false, true, true, false, false),
    FingerFlags::new(true, true, false, false, true),
    FingerFlags::new(false, true, false, false, true),
    FingerFlags::new(true, false, false, true, true),
];

const RIGHT_ONLY_CONFIGS: [PointerConfig; 5] = [
    PointerConfig::OpenPalm,
    PointerConfig::SeekPointer,
    PointerConfig::VolumePointer,
    PointerConfig::BrightnessPointer,
    PointerConfig::Other,
];

#[derive(Clone, Copy)]
struct Drift {
    pose: HandPose,
    to: Point2,
}

impl Drift {
    fn at(&self, u: f64) -> HandObservation {
        let wrist = self.pose.wrist + (self.to - self.pose.wrist) * u;
        HandPose { wrist, ..self.pose }.observation(0.9)
    }
}

fn random_pose(rng: &mut NoiseSource, handedness: Handedness, flags: FingerFlags) -> Drift {
    let (xlo, xhi) = match handedness {
        Handedness::Left => (0.15, 0.5),
        Handedness::Right => (0.5, 0.85),
    };
    let mut point = || Point2::new(rng.range(xlo, xhi), rng.range(0.3, 0.75));
    let wrist = point();
    let to = point();
    Drift {
        pose: HandPose {
            handedness,
            flags,
            wrist,
            angle: rng.range(0.0, TAU),
            scale: rng.range(0.18, 0.35),
        },
        to,
    }
}

/// Random poses held for 200–800 ms each. With `with_left`, both hands
/// come and go in non-trigger poses; otherwise only the right hand appears
/// and cycles through every configuration.
fn wandering(
    times: &[u64],
    duration_ms: u64,
    rng: &mut NoiseSource,
    with_left: bool,
) -> Vec<LandmarkFrame> {
    struct Segment {
        start: u64,
        end: u64,
        left: Option<Drift>,
        right: Option<Drift>,
    }
    let mut segments = Vec::new();
    let mut start = 0;
    while start < duration_ms.max(1) {
        let end = start + 200 + rng.below(601) as u64;
        let (left, right) = if with_left {
            let left = (rng.uniform() < 0.8).then(|| {
                let flags = IDLE_FLAGS[rng.below(IDLE_FLAGS.len())];
                random_pose(rng, Handedness::Left, flags)
            });
            let right = (rng.uniform() < 0.7).then(|| {
                let flags = IDLE_FLAGS[rng.below(IDLE_FLAGS.len())];
                random_pose(rng, Handedness::Right, flags)
            });
            (left, right)
        } else {
            let config = RIGHT_ONLY_CONFIGS[rng.below(RIGHT_ONLY_CONFIGS.len())];
            let flags = config
                .canonical_flags()
                .unwrap_or(FingerFlags::new(false, false, true, true, false));
            (None, Some(random_pose(rng, Handedness::Right, flags)))
        };
        segments.push(Segment {
            start,
            end,
            left,
            right,
        });
        start = end;
    }

    let mut seg_idx = 0;
    times
        .iter()
        .map(|&t| {
            while segments[seg_idx].end <= t {
                seg_idx += 1;
            }
            let seg = &segments[seg_idx];
            let u = (t - seg.start) as f64 / (seg.end - seg.start) as f64;
            let hands = [seg.left, seg.right]
                .into_iter()
                .flatten()
                .map(|d| d.at(u))
                .collect();
            LandmarkFrame { t_ms: t, hands }
        })
        .collect()
}
