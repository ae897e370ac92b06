
use crate::{Error, Result};

/// Root of an increasing function on `[lo, hi]` by bisection, stopping when
/// the bracket is narrower than `tol`. The caller guarantees a sign change.
pub fn bisect_increasing<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Brent's golden-section/parabolic search for the maximum of `f` on `[a, b]`.
///
/// `start` is the first probe (clamped into the interval). Non-finite values
/// are treated as -inf; if every probe is non-finite the search fails.
pub fn brent_maximize<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    start: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Maximum> {
    let mut g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    };
    let (mut lo, mut hi) = (a, b);
    let mut x = start.max(a).min(b);
    let (mut w, mut v) = (x, x);
    let mut fx = g(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut evaluations = 1;
    let mut any_finite = fx.is_finite();

    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let tol1 = rel_tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if mid >= x { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= mid { lo - x } else { hi - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = g(u);
        evaluations += 1;
        any_finite |= fu.is_finite();
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    // The interval ends are never probed by the interior iteration.
    for end in [a, b] {
        let fe = g(end);
        evaluations += 1;
        any_finite |= fe.is_finite();
        if fe < fx {
            x = end;
            fx = fe;
        }
    }
    if !any_finite {
        return Err(Error::OptimizationFailure("objective non-finite at every probe"));
    }
    Ok(Maximum { x, value: -fx, evaluations })
}
