//! Integer-boundary helpers for proportion arithmetic.
//!
//! Proportions like 1/3 or 5/6 are not exactly representable, so `k * p` can
//! land a few ulps away from an integer it should hit exactly. All floor/ceil/
//! round decisions in the merge procedures go through these snapped variants.

use std::cmp::Ordering;

/// Anything within this distance of an integer is treated as that integer.
/// Ratios derived from group counts keep genuine fractional parts at least
/// 1/(2n) away from integers and half-integers, far above this threshold.
const SNAP_EPS: f64 = 1e-9;

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < SNAP_EPS {
        r
    } else {
        x
    }
}

/// Floor after snapping. Inputs are non-negative in all call sites.
pub(crate) fn floor_int(x: f64) -> usize {
    snap(x).floor().max(0.0) as usize
}

/// Ceiling after snapping.
pub(crate) fn ceil_int(x: f64) -> usize {
    snap(x).ceil().max(0.0) as usize
}

/// Round half away from zero (half-up for the non-negative inputs used here).
pub(crate) fn round_half_up(x: f64) -> usize {
    floor_int(x + 0.5)
}

/// Compare with a relative tolerance so selection criteria that are equal as
/// exact rationals (for example 2/(2/3) and 1/(1/3)) compare as `Equal` and
/// fall through to the documented tie-break.
pub(crate) fn cmp_approx(a: f64, b: f64) -> Ordering {
    let tol = 1e-9 * a.abs().max(b.abs()).max(1.0);
    if (a - b).abs() <= tol {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
