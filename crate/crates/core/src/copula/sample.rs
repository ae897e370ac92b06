use rand::RngCore;

use super::{conditional_from, GenPoint, PseudoSample, Theta};
use crate::rng;

const BISECTION_TOL: f64 = 1e-9;

/// Uniform draw strictly inside (0, 1).
pub(crate) fn open_unit(r: &mut rng::Rng) -> f64 {
    ((r.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Draws `n` pairs from the copula: `U` uniform, then `V` by bisecting the
/// conditional distribution `dC/du (v | u) = W` with `W` uniform.
pub fn sample_conditional(theta: Theta, n: usize, seed: u64) -> PseudoSample {
    let mut r = rng::seeded(seed);
    let th = theta.value();
    let mut u = alloc::vec::Vec::with_capacity(n);
    let mut v = alloc::vec::Vec::with_capacity(n);
    for _ in 0..n {
        let ui = open_unit(&mut r);
        let w = open_unit(&mut r);
        let pu = GenPoint::from_t(ui, th);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if conditional_from(&pu, mid, th) < w {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        u.push(ui);
        v.push(0.5 * (lo + hi));
    }
    PseudoSample::new(u, v).expect("sampler produces values inside (0, 1)")
}
