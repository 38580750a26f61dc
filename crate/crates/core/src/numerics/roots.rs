//! Bracketed bisection with an optional Newton polish.

use crate::scalar::Scalar;

/// Bisect `f` on `[lo, hi]`, assuming `f(lo)` and `f(hi)` have opposite
/// signs, until the bracket width drops below `tol`. Returns the midpoint.
pub fn bisect<F: Scalar>(f: impl Fn(F) -> F, mut lo: F, mut hi: F, tol: F) -> F {
    let two = F::of(2.0);
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) <= F::zero(), "bisect: no sign change");
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        let fm = f(mid);
        if fm == F::zero() {
            return mid;
        }
        if (fm > F::zero()) == (flo > F::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// A few Newton steps from `x0`, clamped to `[lo, hi]`.
pub fn newton_polish<F: Scalar>(
    f: impl Fn(F) -> F,
    df: impl Fn(F) -> F,
    mut x: F,
    lo: F,
    hi: F,
    iters: usize,
) -> F {
    for _ in 0..iters {
        let d = df(x);
        if d == F::zero() || !d.is_finite() {
            break;
        }
        let step = f(x) / d;
        let next = x - step;
        if !next.is_finite() {
            break;
        }
        x = next.max(lo).min(hi);
        if step.abs() <= x.abs() * F::epsilon() {
            break;
        }
    }
    x
}
