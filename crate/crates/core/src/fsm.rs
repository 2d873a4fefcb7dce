//! Trigger → baseline → interaction state machine.
//!
//! `Idle` waits for the trigger gesture (left open palm held for
//! `trigger_hold_ms`). `Armed` tracks the left wrist → middle fingertip
//! segment as a live bar. `Engaged(kind)` reports the right pointer's
//! position along that bar until the interaction ends.
//!
//! Time comes only from frame timestamps. All emitted values are smoothed
//! and lie in [0, 1].

use serde::{Deserialize, Serialize};

use crate::config::{FsmConfig, VolumePointer};
use crate::control::Smoother;
use crate::features::{hand_features, HandFeatures, PointerConfig};
use crate::geometry::{make_segment, project_clamped, BaselineSegment, Point2, Projection};
use crate::landmark::LandmarkFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlKind {
    Seek,
    Volume,
    Brightness,
}

impl ControlKind {
    pub const ALL: [ControlKind; 3] = [ControlKind::Seek, ControlKind::Volume, ControlKind::Brightness];

    /// Right-hand configuration that drives this control.
    pub fn pointer_config(self) -> PointerConfig {
        match self {
            ControlKind::Seek => PointerConfig::SeekPointer,
            ControlKind::Volume => PointerConfig::VolumePointer,
            ControlKind::Brightness => PointerConfig::BrightnessPointer,
        }
    }

    fn from_pointer_config(config: PointerConfig) -> Option<ControlKind> {
        match config {
            PointerConfig::SeekPointer => Some(ControlKind::Seek),
            PointerConfig::VolumePointer => Some(ControlKind::Volume),
            PointerConfig::BrightnessPointer => Some(ControlKind::Brightness),
            PointerConfig::OpenPalm | PointerConfig::Other => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventPhase {
    Begin,
    Update,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GestureEvent {
    pub kind: ControlKind,
    pub phase: EventPhase,
    pub value: f64,
    pub t_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Armed,
    Engaged(ControlKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Touch {
    Out,
    In,
}

/// Two-threshold touch detector for the seek pointer.
pub fn touch_hysteresis(dist: f64, seg_len: f64, prev: Touch, cfg: &FsmConfig) -> Touch {
    match prev {
        Touch::Out if dist < cfg.touch_begin_ratio * seg_len => Touch::In,
        Touch::In if dist > cfg.touch_release_ratio * seg_len => Touch::Out,
        unchanged => unchanged,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GestureState {
    phase: Phase,
    armed_since_ms: Option<u64>,
    last_left_seen_ms: Option<u64>,
    last_right_seen_ms: Option<u64>,
    hold_start_ms: Option<u64>,
    hold_accum_ms: u64,
    smoother: Smoother,
    last_sample_ms: u64,
    touch: Touch,
    /// Last frame on which the engaged pointer configuration held.
    engaged_ok_ms: u64,
}

impl GestureState {
    pub fn new(cfg: &FsmConfig) -> Self {
        Self {
            phase: Phase::Idle,
            armed_since_ms: None,
            last_left_seen_ms: None,
            last_right_seen_ms: None,
            hold_start_ms: None,
            hold_accum_ms: 0,
            smoother: Smoother::new(cfg.smoothing_tau_ms),
            last_sample_ms: 0,
            touch: Touch::Out,
            engaged_ok_ms: 0,
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn armed_since_ms(&self) -> Option<u64> {
        self.armed_since_ms
    }

    pub fn last_left_seen_ms(&self) -> Option<u64> {
        self.last_left_seen_ms
    }

    pub fn last_right_seen_ms(&self) -> Option<u64> {
        self.last_right_seen_ms
    }

    pub fn hold_accum_ms(&self) -> u64 {
        self.hold_accum_ms
    }

    pub fn touch(&self) -> Touch {
        self.touch
    }

    /// Most recent smoothed value of the current or last interaction.
    pub fn last_value(&self) -> Option<f64> {
        self.smoother.last_value()
    }

    /// Advances the machine by one validated frame.
    pub fn step(&mut self, frame: &LandmarkFrame, cfg: &FsmConfig) -> Vec<GestureEvent> {
        let t = frame.t_ms;
        let left = frame.left().map(|h| hand_features(h, &cfg.extension));
        let right = frame.right().map(|h| hand_features(h, &cfg.extension));
        // A left hand without a usable segment counts as absent.
        let baseline = left.and_then(|f| {
            make_segment(f.keypoints.wrist, f.keypoints.middle_tip, cfg.min_segment_len)
                .ok()
                .map(|seg| (f, seg))
        });
        if baseline.is_some() {
            self.last_left_seen_ms = Some(t);
        }
        if right.is_some() {
            self.last_right_seen_ms = Some(t);
        }

        let mut events = Vec::new();
        match self.phase {
            Phase::Idle => match baseline {
                Some((f, _)) if f.config == PointerConfig::OpenPalm => {
                    let start = *self.hold_start_ms.get_or_insert(t);
                    self.hold_accum_ms = t - start;
                    if self.hold_accum_ms >= cfg.trigger_hold_ms {
                        self.phase = Phase::Armed;
                        self.armed_since_ms = Some(t);
                    }
                }
                _ => {
                    self.hold_start_ms = None;
                    self.hold_accum_ms = 0;
                }
            },
            Phase::Armed => match baseline {
                None if self.left_lost(t, cfg) => self.reset_to_idle(),
                None => {}
                Some((_, seg)) => {
                    if let Some(r) = right {
                        self.try_engage(t, &seg, &r, cfg, &mut events);
                    }
                }
            },
            Phase::Engaged(kind) => match baseline {
                None if self.left_lost(t, cfg) => {
                    self.emit_end(kind, t, &mut events);
                    self.reset_to_idle();
                }
                None => {}
                Some((_, seg)) => {
                    let reading = right.and_then(|r| pointer_reading(kind, &r, &seg, cfg));
                    self.continue_engaged(kind, t, &seg, reading, cfg, &mut events);
                }
            },
        }
        events
    }

    fn left_lost(&self, t: u64, cfg: &FsmConfig) -> bool {
        self.last_left_seen_ms
            .is_none_or(|seen| t.saturating_sub(seen) > cfg.dropout_grace_ms)
    }

    fn reset_to_idle(&mut self) {
        self.phase = Phase::Idle;
        self.armed_since_ms = None;
        self.hold_start_ms = None;
        self.hold_accum_ms = 0;
        self.touch = Touch::Out;
    }

    fn try_engage(
        &mut self,
        t: u64,
        seg: &BaselineSegment,
        right: &HandFeatures,
        cfg: &FsmConfig,
        events: &mut Vec<GestureEvent>,
    ) {
        let Some(kind) = ControlKind::from_pointer_config(right.config) else {
            return;
        };
        let Some(pr) = pointer_reading(kind, right, seg, cfg) else {
            return;
        };
        let engage = match kind {
            ControlKind::Seek => {
                touch_hysteresis(pr.dist, seg.length(), Touch::Out, cfg) == Touch::In
            }
            ControlKind::Volume | ControlKind::Brightness => {
                pr.dist < cfg.engage_max_dist_ratio * seg.length()
            }
        };
        if !engage {
            return;
        }
        self.phase = Phase::Engaged(kind);
        if kind == ControlKind::Seek {
            self.touch = Touch::In;
        }
        self.engaged_ok_ms = t;
        self.smoother = Smoother::new(cfg.smoothing_tau_ms);
        let value = self.smoother.smooth(pr.t, 0.0);
        self.last_sample_ms = t;
        for phase in [EventPhase::Begin, EventPhase::Update] {
            events.push(GestureEvent {
                kind,
                phase,
                value,
                t_ms: t,
            });
        }
    }

    fn continue_engaged(
        &mut self,
        kind: ControlKind,
        t: u64,
        seg: &BaselineSegment,
        reading: Option<Projection>,
        cfg: &FsmConfig,
        events: &mut Vec<GestureEvent>,
    ) {
        let held = match (kind, reading) {
            (ControlKind::Seek, Some(pr)) => {
                self.touch = touch_hysteresis(pr.dist, seg.length(), self.touch, cfg);
                if self.touch == Touch::Out {
                    // Untouching ends the drag immediately.
                    self.emit_end(kind, t, events);
                    self.phase = Phase::Armed;
                    return;
                }
                Some(pr)
            }
            (_, Some(pr)) if pr.dist < cfg.engage_max_dist_ratio * seg.length() => Some(pr),
            _ => None,
        };
        match held {
            Some(pr) => {
                self.engaged_ok_ms = t;
                let dt = (t - self.last_sample_ms) as f64;
                let value = self.smoother.smooth(pr.t, dt);
                self.last_sample_ms = t;
                events.push(GestureEvent {
                    kind,
                    phase: EventPhase::Update,
                    value,
                    t_ms: t,
                });
            }
            None if t.saturating_sub(self.engaged_ok_ms) > cfg.dropout_grace_ms => {
                self.emit_end(kind, t, events);
                self.phase = Phase::Armed;
                self.touch = Touch::Out;
            }
            None => {}
        }
    }

    fn emit_end(&mut self, kind: ControlKind, t: u64, events: &mut Vec<GestureEvent>) {
        events.push(GestureEvent {
            kind,
            phase: EventPhase::End,
            value: self.smoother.last_value().unwrap_or(0.0),
            t_ms: t,
        });
    }
}

impl Default for GestureState {
    fn default() -> Self {
        Self::new(&FsmConfig::default())
    }
}

/// Projection of the pointer fingertip for `kind`, if the right hand is
/// in that control's configuration.
fn pointer_reading(
    kind: ControlKind,
    right: &HandFeatures,
    seg: &BaselineSegment,
    cfg: &FsmConfig,
) -> Option<Projection> {
    if right.config != kind.pointer_config() {
        return None;
    }
    let k = &right.keypoints;
    let pointer: Point2 = match (kind, cfg.volume_pointer) {
        (ControlKind::Volume, VolumePointer::Middle) => k.middle_tip,
        _ => k.index_tip,
    };
    Some(project_clamped(pointer, seg))
}

/// Checks that each kind's events follow `(Begin Update* End)*`, allowing
/// a trailing open interaction. Returns the first offending index.
pub fn check_event_grammar(events: &[GestureEvent]) -> Result<(), usize> {
    let mut open = [false; 3];
    for (i, e) in events.iter().enumerate() {
        let slot = &mut open[e.kind as usize];
        match (e.phase, *slot) {
            (EventPhase::Begin, false) => *slot = true,
            (EventPhase::Update, true) => {}
            (EventPhase::End, true) => *slot = false,
            _ => return Err(i),
        }
    }
    Ok(())
}
