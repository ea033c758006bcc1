//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All algorithms are written against [`Real`] so they can run in `f64`
//! (the intended precision, all tolerances below are tuned for it) or in
//! `f32` for quick, low-accuracy exploration.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating-point type the library can compute with.
///
/// Besides the usual float operations, each implementation carries the
/// numerical tolerances used throughout the crate.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Distance to an integer (or to a domain endpoint) under which
    /// floor/ceil and domain checks snap to it.
    fn snap_eps() -> Self;

    /// A branch whose image ends within this distance of the codomain end
    /// is treated as onto.
    fn geo_eps() -> Self;

    /// Orbit points of the not-onto endpoints are identified with a
    /// breakpoint when they land within this distance of it.
    fn orbit_eps() -> Self;

    /// Relative tolerance used when merging digits that should coincide.
    fn dedup_eps() -> Self;

    /// Largest acceptable discarded tail of the geometric series in the
    /// invariant density.
    fn truncation_tol() -> Self;

    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from(v).expect("literal representable in scalar type")
    }

    /// Converts a small nonnegative integer.
    fn of(n: u64) -> Self {
        Self::from(n).expect("integer representable in scalar type")
    }
}

impl Real for f64 {
    fn snap_eps() -> Self {
        1e-12
    }
    fn geo_eps() -> Self {
        1e-9
    }
    fn orbit_eps() -> Self {
        1e-9
    }
    fn dedup_eps() -> Self {
        1e-9
    }
    fn truncation_tol() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn snap_eps() -> Self {
        1e-5
    }
    fn geo_eps() -> Self {
        1e-4
    }
    fn orbit_eps() -> Self {
        1e-4
    }
    fn dedup_eps() -> Self {
        1e-4
    }
    fn truncation_tol() -> Self {
        1e-6
    }
}

/// `floor`, snapping to the nearest integer when within [`Real::snap_eps`].
pub(crate) fn snap_floor<T: Real>(v: T) -> T {
    let r = v.round();
    if (v - r).abs() <= T::snap_eps() {
        r
    } else {
        v.floor()
    }
}

/// `ceil`, snapping to the nearest integer when within [`Real::snap_eps`].
pub(crate) fn snap_ceil<T: Real>(v: T) -> T {
    let r = v.round();
    if (v - r).abs() <= T::snap_eps() {
        r
    } else {
        v.ceil()
    }
}

/// Largest representable value strictly below `v` (for positive `v`), up to
/// a relative step of one machine epsilon.
pub(crate) fn just_below<T: Real>(v: T) -> T {
    v - v.abs().max(T::one()) * T::epsilon()
}

pub(crate) fn to_u32<T: Real>(v: T) -> u32 {
    v.to_u32().unwrap_or(u32::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_rounds_near_integers() {
        assert_eq!(snap_floor(2.0 - 1e-13), 2.0);
        assert_eq!(snap_floor(2.0 - 1e-9), 1.0);
        assert_eq!(snap_ceil(3.0 + 1e-13), 3.0);
        assert_eq!(snap_ceil(3.0 + 1e-9), 4.0);
        assert_eq!(snap_floor(-0.5f64), -1.0);
    }

    #[test]
    fn just_below_is_below() {
        for v in [1.0f64, 1.5, 1e3] {
            assert!(just_below(v) < v);
        }
        assert!(just_below(1.0f32) < 1.0);
    }
}
