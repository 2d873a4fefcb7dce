//! Directed baseline segments and clamped point projection.

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

/// Default lower bound on baseline length, in normalized units.
pub const DEFAULT_MIN_SEGMENT_LEN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("segment length {length} below minimum {min}")]
    SegmentTooShort { length: f64, min: f64 },
    #[error("non-finite segment endpoint")]
    NonFinite,
}

/// Directed bar from `origin` (value 0) to `tip` (value 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSegment {
    origin: Point2,
    tip: Point2,
    length: f64,
}

impl BaselineSegment {
    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn tip(&self) -> Point2 {
        self.tip
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn direction(&self) -> Point2 {
        self.tip - self.origin
    }

    /// Point at parameter `t` along the segment (unclamped).
    pub fn point_at(&self, t: f64) -> Point2 {
        self.origin + self.direction() * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Position along the segment, clamped to [0, 1].
    pub t: f64,
    /// Distance from the query point to the closest point on the segment.
    pub dist: f64,
}

/// Builds a segment; the length bound is inclusive.
pub fn make_segment(
    origin: Point2,
    tip: Point2,
    min_len: f64,
) -> Result<BaselineSegment, GeometryError> {
    if !origin.is_finite() || !tip.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let length = tip.distance(origin);
    if length < min_len {
        return Err(GeometryError::SegmentTooShort {
            length,
            min: min_len,
        });
    }
    Ok(BaselineSegment {
        origin,
        tip,
        length,
    })
}

pub fn project_clamped(p: Point2, seg: &BaselineSegment) -> Projection {
    let d = seg.direction();
    let t = ((p - seg.origin).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    let dist = p.distance(seg.point_at(t));
    Projection { t, dist }
}
