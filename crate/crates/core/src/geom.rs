//! Exact rational plane geometry for the per-triangle chord arrangements.
//!
//! Boundary points of a triangle are placed on the unit circle through the
//! tangent-half-angle parameterization u -> ((1-u^2)/(1+u^2), 2u/(1+u^2)),
//! which keeps every coordinate rational while preserving convex position.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// k-th boundary point out of any number; integer parameter keeps the points
/// in ccw circular order (angles in [0, pi)).
pub fn circle_point(k: i64) -> Pt {
    circle_point_q(&q(k))
}

/// Rational-parameter version (jittered placements).
pub fn circle_point_q(u: &Q) -> Pt {
    let u2 = u * u;
    let den = &u2 + q(1);
    Pt { x: (q(1) - &u2) / den.clone(), y: (q(2) * u.clone()) / den }
}

/// Point between circle_point(k) and circle_point(k+1), used as a generic
/// probe just past a boundary node.
pub fn circle_mid(k: i64) -> Pt {
    let a = circle_point(k);
    let b = circle_point(k + 1);
    Pt { x: (a.x + b.x) / q(2), y: (a.y + b.y) / q(2) }
}

/// Sign of the cross product (b-a) x (c-a): +1 ccw, -1 cw, 0 collinear.
pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> i8 {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Proper intersection test for open segments ab and cd (endpoints in convex
/// position never touch, so only the transversal case matters).
pub fn segments_cross(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0
}

/// Intersection point of lines ab and cd (caller guarantees non-parallel).
pub fn line_intersect(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> Pt {
    let r = Pt { x: &b.x - &a.x, y: &b.y - &a.y };
    let s = Pt { x: &d.x - &c.x, y: &d.y - &c.y };
    let denom = &r.x * &s.y - &r.y * &s.x;
    debug_assert!(!denom.is_zero());
    let t = ((&c.x - &a.x) * &s.y - (&c.y - &a.y) * &s.x) / denom;
    Pt { x: &a.x + &r.x * &t, y: &a.y + &r.y * &t }
}

/// Comparator for directions around a vertex: orders vectors by ccw angle
/// starting from the positive x axis.  Exact, no trigonometry.
pub fn dir_cmp(u: &Pt, v: &Pt) -> std::cmp::Ordering {
    let hu = half(u);
    let hv = half(v);
    if hu != hv {
        return hu.cmp(&hv);
    }
    // Same half-plane: compare by cross product.
    let c = &u.x * &v.y - &u.y * &v.x;
    if c.is_positive() {
        std::cmp::Ordering::Less
    } else if c.is_negative() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

fn half(u: &Pt) -> u8 {
    // 0: upper half plane (y > 0, or y = 0 and x > 0); 1: lower.
    if u.y.is_positive() || (u.y.is_zero() && u.x.is_positive()) {
        0
    } else {
        1
    }
}

pub fn sub(a: &Pt, b: &Pt) -> Pt {
    Pt { x: &a.x - &b.x, y: &a.y - &b.y }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_points_convex() {
        // All points on the unit circle, strictly increasing angle.
        for k in 0..8 {
            let p = circle_point(k);
            assert_eq!(&p.x * &p.x + &p.y * &p.y, q(1));
        }
        for k in 0..6 {
            let a = circle_point(k);
            let b = circle_point(k + 1);
            let c = circle_point(k + 2);
            assert_eq!(orient(&a, &b, &c), 1);
        }
    }

    #[test]
    fn cross_and_intersect() {
        let a = circle_point(0);
        let b = circle_point(2);
        let c = circle_point(1);
        let d = circle_point(3);
        assert!(segments_cross(&a, &b, &c, &d));
        let p = line_intersect(&a, &b, &c, &d);
        assert_eq!(orient(&a, &b, &p), 0);
        assert_eq!(orient(&c, &d, &p), 0);
        let e = circle_point(4);
        assert!(!segments_cross(&a, &c, &d, &e));
    }
}
