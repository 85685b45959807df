//! Bisection on monotone predicates.

const MAX_ITERATIONS: usize = 400;

/// Largest `v` in `[lo, hi]` for which `holds(v)` is true, where `holds` is
/// true on a prefix of the range and false after it.
///
/// The caller guarantees `holds(lo)`; if `holds(hi)` the result is `hi`
/// exactly. Otherwise the returned point satisfies the predicate and lies
/// within `tol` of the switch point. `lo` may be zero when the predicate is
/// only known to hold in the limit `v -> 0+`; the bisection then continues
/// until it finds a strictly positive point.
pub fn last_true<P: FnMut(f64) -> bool>(lo: f64, hi: f64, tol: f64, mut holds: P) -> f64 {
    if holds(hi) {
        return hi;
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..MAX_ITERATIONS {
        if hi - lo <= tol && lo > 0.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest `t` in `(0, inf)` with `value(t) >= target` for an increasing
/// function, bracketing upward by doubling from `start`.
///
/// Stops once `|value(t) - target| <= abs_tol` or the bracket collapses to
/// floating-point resolution, and returns the upper end of the bracket so
/// the result never undershoots `target` by more than `abs_tol`.
pub fn increasing_root<F: FnMut(f64) -> f64>(
    mut value: F,
    target: f64,
    start: f64,
    abs_tol: f64,
) -> f64 {
    let mut hi = start;
    let mut lo = 0.0;
    let mut v_hi = value(hi);
    while v_hi < target {
        lo = hi;
        hi *= 2.0;
        v_hi = value(hi);
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    if (v_hi - target).abs() <= abs_tol {
        return hi;
    }
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = value(mid);
        if (v - target).abs() <= abs_tol {
            return mid;
        }
        if v >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// A sign-change bracket: `f(lo) >= 0 > f(hi)`, with whatever the caller
/// computed alongside each end.
#[derive(Debug, Clone, Copy)]
pub struct Bracket<T> {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub at_lo: T,
    pub at_hi: T,
}

/// Shrinks a bracket on a continuous function by Illinois-modified regula
/// falsi until `done` holds. Falls back to bisection when one end stalls.
pub fn illinois<T: Copy, F, D>(mut b: Bracket<T>, mut eval: F, mut done: D) -> Bracket<T>
where
    F: FnMut(f64) -> (f64, T),
    D: FnMut(&Bracket<T>) -> bool,
{
    let (mut w_lo, mut w_hi) = (b.f_lo, b.f_hi);
    let mut streak = 0i32;
    for _ in 0..MAX_ITERATIONS {
        if done(&b) {
            break;
        }
        let mut m = (b.lo * w_hi - b.hi * w_lo) / (w_hi - w_lo);
        if streak.abs() >= 3 || !(m > b.lo && m < b.hi) {
            m = 0.5 * (b.lo + b.hi);
            streak = 0;
        }
        if m <= b.lo || m >= b.hi {
            break;
        }
        let (fm, t) = eval(m);
        if fm >= 0.0 {
            b.lo = m;
            b.f_lo = fm;
            b.at_lo = t;
            w_lo = fm;
            if streak > 0 {
                w_hi *= 0.5;
            }
            streak = streak.max(0) + 1;
        } else {
            b.hi = m;
            b.f_hi = fm;
            b.at_hi = t;
            w_hi = fm;
            if streak < 0 {
                w_lo *= 0.5;
            }
            streak = streak.min(0) - 1;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_true_finds_threshold() {
        let v = last_true(0.0, 10.0, 1e-9, |v| v * v <= 2.0);
        assert!(v * v <= 2.0);
        assert!((v - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn last_true_returns_hi_when_slack() {
        assert_eq!(last_true(1.0, 26.0, 1e-6, |_| true), 26.0);
    }

    #[test]
    fn last_true_from_zero_returns_positive() {
        let v = last_true(0.0, 1.0, 1e-3, |v| v < 1e-7);
        assert!(v > 0.0 && v < 1e-7);
    }

    #[test]
    fn increasing_root_brackets_upward() {
        let t = increasing_root(|t| t.ln(), 10.0, 1.0, 1e-12);
        assert!((t - 10f64.exp()).abs() < 1e-6);
    }

    #[test]
    fn illinois_converges_both_ends() {
        let f = |x: f64| (2.0 - x * x * x, x);
        let start = Bracket {
            lo: 0.0,
            hi: 4.0,
            f_lo: 2.0,
            f_hi: -62.0,
            at_lo: 0.0,
            at_hi: 4.0,
        };
        let mut calls = 0;
        let b = illinois(
            start,
            |x| {
                calls += 1;
                f(x)
            },
            |b| b.hi - b.lo <= 1e-12,
        );
        let root = 2f64.cbrt();
        assert!(b.lo <= root && root <= b.hi);
        assert!(b.hi - b.lo <= 1e-12);
        assert!(calls < 60, "{calls}");
    }
}
