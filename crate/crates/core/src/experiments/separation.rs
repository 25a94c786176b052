//! Discrete check that the closures of `{f > 0}` and `{f < 0}` are disjoint.

use crate::domain::{BoundaryFunction, Domain, DomainKind};
use crate::error::Result;

/// Node values with `|f| ≤ ZERO_RTOL·max|f|` count as zero.
pub const ZERO_RTOL: f64 = 1e-14;

/// On the interval the boundary is two isolated points, so any `f` that is
/// nonzero at both ends is separated. On the circle every passage between a
/// positive and a negative run of nodes must cross at least two consecutive
/// zero nodes, so that a zero arc of positive length sits between the two
/// closures.
pub fn f_separation_check(domain: &Domain, f: &BoundaryFunction) -> Result<bool> {
    domain.check(f)?;
    let scale = f.sup_norm();
    let sign = |x: f64| -> i8 {
        if x.abs() <= ZERO_RTOL * scale {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i8> = f.as_slice().iter().map(|&x| sign(x)).collect();
    if domain.kind() == DomainKind::Interval {
        return Ok(signs.iter().all(|&s| s != 0));
    }
    let n = signs.len();
    let Some(start) = signs.iter().position(|&s| s != 0) else {
        return Ok(true);
    };
    // walk once around the circle from a nonzero node
    let mut last = signs[start];
    let mut zeros = 0usize;
    for k in 1..=n {
        let s = signs[(start + k) % n];
        if s == 0 {
            zeros += 1;
            continue;
        }
        if s != last && zeros < 2 {
            return Ok(false);
        }
        last = s;
        zeros = 0;
    }
    Ok(true)
}

/// Trigonometric weight with zero plateaus: `base(θ)` multiplied by a mask that
/// vanishes on each arc and blends back to one with a cubic over `width`.
pub fn plateau_mask(theta: f64, arcs: &[(f64, f64)], width: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut mask = 1.0f64;
    for &(a, b) in arcs {
        let len = (b - a).rem_euclid(tau);
        let t = (theta - a).rem_euclid(tau);
        let dist = if t <= len { 0.0 } else { (t - len).min(tau - t) };
        let m = if dist >= width {
            1.0
        } else {
            let x = dist / width;
            x * x * (3.0 - 2.0 * x)
        };
        mask = mask.min(m);
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_is_separated() {
        let d = Domain::interval();
        assert!(f_separation_check(&d, &BoundaryFunction::new(vec![1.0, -2.0])).unwrap());
        assert!(!f_separation_check(&d, &BoundaryFunction::new(vec![0.0, -2.0])).unwrap());
    }

    #[test]
    fn cosine_is_not_separated() {
        for m in [16, 30, 64] {
            let d = Domain::disk(m).unwrap();
            assert!(!f_separation_check(&d, &d.sample(f64::cos)).unwrap());
        }
    }

    #[test]
    fn plateau_weight_is_separated() {
        let d = Domain::disk(64).unwrap();
        let arcs = [(1.0, 1.5), (-1.5, -1.0)];
        let f = d.sample(|t| {
            let t = if t > std::f64::consts::PI { t - 2.0 * std::f64::consts::PI } else { t };
            let base = if t.abs() < 1.25 { 1.0 } else { -1.0 };
            base * plateau_mask(t, &arcs, 0.05)
        });
        assert!(f_separation_check(&d, &f).unwrap());
        assert!(f.changes_sign());
    }
}
