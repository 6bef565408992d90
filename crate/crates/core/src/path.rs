//! Fixture curve construction: closed polylines on the 4g-gon, traced into
//! drawings by exact convex-position geometry.
//!
//! A curve is given by its cyclic sequence of letter-edge crossings; each
//! crossing is (polygon side, fraction along the side's boundary direction).
//! Exiting side j at fraction t re-enters the partner side at 1 - t.  Pieces
//! between consecutive crossings are straight chords of the polygon and pick
//! up punctures on the fan diagonals they cross.

use std::rc::Rc;

use num_rational::BigRational;

use crate::drawing::{as_curve, Drawing, NodeKind, NormalCurve};
use crate::geom::{circle_point, line_intersect, orient, q, Pt, Q};
use crate::tri::Triangulation;
use crate::Error;

pub fn frac(n: i64, d: i64) -> Q {
    q(n) / q(d)
}

#[derive(Debug, Clone)]
pub struct PolyPath {
    /// (side, fraction in (0,1)) exit points, in order along the curve.
    pub crossings: Vec<(usize, Q)>,
}

/// Partner polygon side carrying the same edge.
fn partner(tri: &Triangulation, side: usize) -> usize {
    let e = tri.poly_sides[side].0;
    (0..tri.poly_len()).find(|&j| j != side && tri.poly_sides[j].0 == e).unwrap()
}

/// Boundary coordinate (side + fraction) to a point of the convex polygon.
fn boundary_pt(n: usize, side: usize, t: &Q) -> Pt {
    let a = circle_point(side as i64);
    let b = circle_point(((side + 1) % n) as i64);
    Pt { x: &a.x + (&b.x - &a.x) * t, y: &a.y + (&b.y - &a.y) * t }
}

/// Trace a closed polygon path into a drawing with one strand.
pub fn trace_poly(tri: &Rc<Triangulation>, path: &PolyPath) -> Result<Drawing, Error> {
    let n = tri.poly_len();
    let m = path.crossings.len();
    if m == 0 {
        return Err(Error::Invalid("empty path".into()));
    }
    let verts: Vec<Pt> = (0..n as i64).map(circle_point).collect();

    // Events: boundary crossings get one puncture each (on the letter edge);
    // each piece contributes punctures on the diagonals it crosses.
    // Edge position of a boundary crossing with exit (side j, t):
    // dir=+1 sides carry fraction = intrinsic position.
    #[derive(Clone)]
    struct Punct {
        edge: usize,
        posq: Q,
    }
    let mut puncts: Vec<Punct> = Vec::new();
    let mut exit_node = Vec::new(); // crossing index -> node index (same node as entry)
    for (j, t) in &path.crossings {
        let (e, d) = tri.poly_sides[*j];
        let posq = if d == 1 { t.clone() } else { q(1) - t };
        exit_node.push(puncts.len());
        puncts.push(Punct { edge: e, posq });
    }

    // Pieces: from entry appearance of crossing i to exit appearance of
    // crossing i+1.
    let mut piece_nodes: Vec<Vec<usize>> = Vec::new(); // node indices along each piece
    let mut piece_pts: Vec<Vec<Pt>> = Vec::new();
    for i in 0..m {
        let (je, te) = &path.crossings[i];
        let jp = partner(tri, *je);
        let entry_t = q(1) - te;
        let (jx, tx) = &path.crossings[(i + 1) % m];
        let p0 = boundary_pt(n, jp, &entry_t);
        let p1 = boundary_pt(n, *jx, tx);
        // Diagonals crossed: k strictly between the boundary coordinates.
        let g0 = q(jp as i64) + &entry_t;
        let g1 = q(*jx as i64) + tx;
        let (lo, hi) = if g0 < g1 { (g0.clone(), g1.clone()) } else { (g1.clone(), g0.clone()) };
        let mut ks: Vec<usize> = (2..=n - 2).filter(|&k| q(k as i64) > lo && q(k as i64) < hi).collect();
        if g0 > g1 {
            ks.reverse();
        }
        let mut nodes = vec![exit_node[i]];
        let mut pts = vec![p0.clone()];
        for &k in &ks {
            let x = line_intersect(&p0, &p1, &verts[0], &verts[k]);
            // Position along the diagonal from v0.
            let posq = param_along(&verts[0], &verts[k], &x);
            nodes.push(puncts.len());
            puncts.push(Punct { edge: tri.diagonal(k), posq });
            pts.push(x);
        }
        nodes.push(exit_node[(i + 1) % m]);
        pts.push(p1);
        piece_nodes.push(nodes);
        piece_pts.push(pts);
    }

    // Build the drawing: place punctures on edges ordered by position.
    let mut d = Drawing::new(tri.clone());
    let s = d.add_strand("p", true);
    let mut per_edge: Vec<Vec<(Q, usize)>> = vec![Vec::new(); tri.num_edges()];
    for (i, p) in puncts.iter().enumerate() {
        per_edge[p.edge].push((p.posq.clone(), i));
    }
    let mut node_id = vec![usize::MAX; puncts.len()];
    for e in 0..tri.num_edges() {
        per_edge[e].sort_by(|a, b| a.0.cmp(&b.0));
        for w in per_edge[e].windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid("path not generic: coincident punctures".into()));
            }
        }
        for (idx, (_, i)) in per_edge[e].iter().enumerate() {
            node_id[*i] = d.new_node_at(e, idx, s, NodeKind::Puncture);
        }
    }

    // Chords: consecutive punctures of each piece, in the fan triangle that
    // contains the sub-segment midpoint.
    for (pi, nodes) in piece_nodes.iter().enumerate() {
        let pts = &piece_pts[pi];
        for w in 0..nodes.len() - 1 {
            let mid = Pt {
                x: (&pts[w].x + &pts[w + 1].x) / q(2),
                y: (&pts[w].y + &pts[w + 1].y) / q(2),
            };
            let t = locate_fan_triangle(n, &verts, &mid);
            d.link_in(node_id[nodes[w]], node_id[nodes[w + 1]], t);
        }
    }
    Ok(d)
}

fn param_along(a: &Pt, b: &Pt, p: &Pt) -> Q {
    let dx = &b.x - &a.x;
    if !num_traits::Zero::is_zero(&dx) {
        (&p.x - &a.x) / dx
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

/// Fan triangle T_t containing interior point X: t = number of diagonals
/// (v0, v_k), k = 2..n-2, with X strictly on their left.
fn locate_fan_triangle(n: usize, verts: &[Pt], x: &Pt) -> usize {
    let mut left = 0;
    for k in 2..=n - 2 {
        match orient(&verts[0], &verts[k], x) {
            1 => left += 1,
            -1 => {}
            _ => panic!("path point on a diagonal"),
        }
    }
    left
}

/// Canonical curve from a polygon path.
pub fn curve_from_path(tri: &Rc<Triangulation>, path: &PolyPath) -> Result<NormalCurve, Error> {
    let mut d = trace_poly(tri, path)?;
    d.normalize_all();
    let w = d.weights_of(0);
    as_curve(tri, &w)
}

/// The (p, q) straight-line curve in handle `block` (gcd(p, q) = 1): crosses
/// the a-side pattern q times and the b-side pattern p times; (0,1) is the
/// meridian-like A-curve, (1,0) the B-curve.
pub fn slope_curve(
    tri: &Rc<Triangulation>,
    block: usize,
    p: i64,
    qq: i64,
) -> Result<NormalCurve, Error> {
    if num_integer::gcd(p.abs(), qq.abs()) != 1 {
        return Err(Error::Invalid(format!("slope ({p},{qq}) not primitive")));
    }
    let path = slope_path(tri, block, p, qq)?;
    curve_from_path(tri, &path)
}

/// Crossing sequence of the (p,q) line in the unit-square model of `block`.
pub fn slope_path(
    _tri: &Rc<Triangulation>,
    block: usize,
    p: i64,
    qq: i64,
) -> Result<PolyPath, Error> {
    if p == 0 && qq == 0 {
        return Err(Error::Invalid("null slope".into()));
    }
    let base = 4 * block;
    // Square: bottom = side base (edge a), right = base+1 (edge b),
    // top = base+2, left = base+3.  Start generic, march in direction (p,q).
    let mut x = frac(3, 7);
    let mut y = frac(4, 11);
    let dx = q(p);
    let dy = q(qq);
    let steps = p.unsigned_abs() + qq.unsigned_abs();
    let mut crossings = Vec::new();
    for _ in 0..steps {
        // Time to next integer wall in x and in y.
        let tx = if p > 0 {
            Some((q(1) - &x) / &dx)
        } else if p < 0 {
            Some(-&x / &dx)
        } else {
            None
        };
        let ty = if qq > 0 {
            Some((q(1) - &y) / &dy)
        } else if qq < 0 {
            Some(-&y / &dy)
        } else {
            None
        };
        let use_x = match (&tx, &ty) {
            (Some(a), Some(b)) => {
                if a == b {
                    return Err(Error::Invalid("slope path hits a corner".into()));
                }
                a < b
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!(),
        };
        let t = if use_x { tx.unwrap() } else { ty.unwrap() };
        x = &x + &dx * &t;
        y = &y + &dy * &t;
        if use_x {
            if p > 0 {
                // Exit right side at height y; fraction along right side = y.
                crossings.push((base + 1, y.clone()));
                x = q(0);
            } else {
                // Exit left side: left runs top-to-bottom, fraction = 1 - y.
                crossings.push((base + 3, q(1) - &y));
                x = q(1);
            }
        } else if qq > 0 {
            // Exit top: top runs right-to-left, fraction = 1 - x.
            crossings.push((base + 2, q(1) - &x));
            y = q(0);
        } else {
            // Exit bottom at fraction x.
            crossings.push((base, x.clone()));
            y = q(1);
        }
    }
    Ok(PolyPath { crossings })
}

pub type Frac = BigRational;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::admissible;
    use crate::tri::build_genus_surface;

    #[test]
    fn a_and_b_curves_genus1() {
        let tri = Rc::new(build_genus_surface(1).unwrap());
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 0, 1, 0).unwrap();
        assert!(admissible(&tri, &a.w));
        assert!(admissible(&tri, &b.w));
        // A crosses edge a (0) once, edge b (1) never.
        assert_eq!(a.w[0], 1);
        assert_eq!(a.w[1], 0);
        assert_eq!(b.w[0], 0);
        assert_eq!(b.w[1], 1);
    }

    #[test]
    fn slope_curves_genus3_blocks() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        for block in 0..3 {
            let c = slope_curve(&tri, block, 2, 1).unwrap();
            assert!(admissible(&tri, &c.w));
            assert_eq!(c.w[2 * block], 1, "crosses a once for slope (2,1)");
            assert_eq!(c.w[2 * block + 1], 2, "crosses b twice");
            // Other blocks' letter edges untouched.
            for other in 0..3 {
                if other != block {
                    assert_eq!(c.w[2 * other], 0);
                    assert_eq!(c.w[2 * other + 1], 0);
                }
            }
        }
    }

    #[test]
    fn higher_slopes() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        for (p, qq) in [(3i64, 1i64), (5, 2), (4, 3), (5, 4)] {
            let c = slope_curve(&tri, 1, p, qq).unwrap();
            assert_eq!(c.w[2], qq as u32);
            assert_eq!(c.w[3], p as u32);
        }
    }
}
