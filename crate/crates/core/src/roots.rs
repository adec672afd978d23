//! Scalar bracketing root finder.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs (or
/// one is zero). Stops when the bracket is narrower than `xtol`.
///
/// Returns `None` if the endpoints do not bracket a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Locates the boundary between `pred == a` and `pred == !a` inside `[lo, hi]`
/// where `pred(lo) != pred(hi)`. Returns the midpoint of the final bracket.
pub fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let at_lo = pred(lo);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
