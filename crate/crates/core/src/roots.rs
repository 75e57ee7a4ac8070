//! Internal bracketed root solving for monotone 1-D problems.

/// Bisects `f` on `[lo, hi]`, assuming `f(lo)` and `f(hi)` straddle zero,
/// until the bracket is narrower than `tol`. Returns the final bracket
/// `(lo, hi)` so callers can pick the conservative end.
///
/// The function is evaluated once per step at the midpoint; a midpoint
/// value of exactly zero collapses the bracket there.
pub(crate) fn bisect_bracket(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    f_lo_sign: f64,
    mut f: impl FnMut(f64) -> f64,
) -> (f64, f64) {
    debug_assert!(lo < hi);
    debug_assert!(f_lo_sign != 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket already at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, mid);
        }
        if (fm > 0.0) == (f_lo_sign > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
