//! One-vertex triangulations of closed orientable surfaces.
//!
//! The genus-g surface is built from a 4g-gon with boundary word
//! a1 b1 a1' b1' ... ag bg ag' bg', fan-triangulated from vertex 0 by the
//! diagonals (v0, vk), k = 2..4g-2.  All polygon vertices are identified to a
//! single point, giving 6g-3 edges and 4g-2 triangles.

use crate::Error;

/// Incidence of an edge in a triangle boundary.
///
/// `dir = +1` means the ccw boundary of the triangle traverses the edge in its
/// intrinsic direction, `-1` against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub edge: usize,
    pub dir: i8,
}

#[derive(Debug, Clone)]
pub struct Triangle {
    /// Three sides in ccw order.
    pub sides: [Side; 3],
}

/// Where an edge shows up among the triangles: exactly two incidences on an
/// orientable closed surface, with opposite directions.
#[derive(Debug, Clone, Copy)]
pub struct EdgeInc {
    pub tri: usize,
    /// Index 0..3 of the side within the triangle.
    pub side: usize,
    pub dir: i8,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub genus: u32,
    pub triangles: Vec<Triangle>,
    /// For each edge, its two incidences; `incs[e][0]` has dir +1.
    pub incs: Vec<[EdgeInc; 2]>,
    /// Polygon realization: for each triangle side, the pair of polygon
    /// boundary positions it connects, as (corner k meaning vertex v_k).
    /// Used by the fixture tracer; `poly_span[t][i] = (from, to)` in ccw order.
    pub poly_span: Vec<[(usize, usize); 3]>,
    /// For each polygon side j (0..4g), the edge it carries and the direction
    /// (+1: polygon ccw runs along the edge's intrinsic direction).
    pub poly_sides: Vec<(usize, i8)>,
}

impl Triangulation {
    pub fn num_edges(&self) -> usize {
        self.incs.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Index (0 or 1) of the incidence of `edge` lying in triangle `tri`.
    /// Valid because no triangle of the fan uses an edge twice.
    pub fn inc_in(&self, edge: usize, tri: usize) -> usize {
        if self.incs[edge][0].tri == tri {
            0
        } else {
            debug_assert_eq!(self.incs[edge][1].tri, tri);
            1
        }
    }

    pub fn side(&self, tri: usize, side: usize) -> Side {
        self.triangles[tri].sides[side]
    }

    /// Number of polygon sides (4g).
    pub fn poly_len(&self) -> usize {
        self.poly_sides.len()
    }

    /// Edge id of polygon letter a_i / b_i.
    pub fn letter_a(&self, block: usize) -> usize {
        2 * block
    }
    pub fn letter_b(&self, block: usize) -> usize {
        2 * block + 1
    }
    /// Edge id of the fan diagonal (v0, v_k), k in 2..4g-2.
    pub fn diagonal(&self, k: usize) -> usize {
        2 * self.genus as usize + (k - 2)
    }
}

/// Build the fan triangulation of the closed orientable genus-g surface,
/// 1 <= g <= 4.
pub fn build_genus_surface(genus: u32) -> Result<Triangulation, Error> {
    if !(1..=4).contains(&genus) {
        return Err(Error::Unsupported(format!(
            "genus {genus} out of supported range 1..=4"
        )));
    }
    let g = genus as usize;
    let n = 4 * g; // polygon sides / vertices
    let num_edges = 6 * g - 3;

    // Polygon side j carries which edge, in which direction?
    // Block i: sides 4i..4i+3 = a_i, b_i, a_i reversed, b_i reversed.
    let mut poly_sides = vec![(0usize, 0i8); n];
    for i in 0..g {
        poly_sides[4 * i] = (2 * i, 1);
        poly_sides[4 * i + 1] = (2 * i + 1, 1);
        poly_sides[4 * i + 2] = (2 * i, -1);
        poly_sides[4 * i + 3] = (2 * i + 1, -1);
    }
    // Diagonal (v0, v_k) for k = 2..n-2 gets edge id 2g + (k-2), oriented v0 -> v_k.
    let diag = |k: usize| 2 * g + (k - 2);

    let mut triangles = Vec::with_capacity(n - 2);
    let mut poly_span = Vec::with_capacity(n - 2);
    for t in 0..n - 2 {
        // Triangle t = (v0, v_{t+1}, v_{t+2}).
        let mut sides = [Side { edge: 0, dir: 0 }; 3];
        let mut span = [(0usize, 0usize); 3];
        // Side 0: from v0 to v_{t+1}.
        if t == 0 {
            let (e, d) = poly_sides[0];
            sides[0] = Side { edge: e, dir: d };
        } else {
            sides[0] = Side { edge: diag(t + 1), dir: 1 };
        }
        span[0] = (0, t + 1);
        // Side 1: polygon side from v_{t+1} to v_{t+2}.
        let (e, d) = poly_sides[t + 1];
        sides[1] = Side { edge: e, dir: d };
        span[1] = (t + 1, t + 2);
        // Side 2: from v_{t+2} back to v0.
        if t == n - 3 {
            let (e, d) = poly_sides[n - 1];
            sides[2] = Side { edge: e, dir: d };
        } else {
            sides[2] = Side { edge: diag(t + 2), dir: -1 };
        }
        span[2] = (t + 2, 0);
        triangles.push(Triangle { sides });
        poly_span.push(span);
    }

    // Edge incidences.
    let mut slots: Vec<Vec<EdgeInc>> = vec![Vec::new(); num_edges];
    for (t, tri) in triangles.iter().enumerate() {
        for (s, side) in tri.sides.iter().enumerate() {
            slots[side.edge].push(EdgeInc { tri: t, side: s, dir: side.dir });
        }
    }
    let mut incs = Vec::with_capacity(num_edges);
    for (e, v) in slots.into_iter().enumerate() {
        if v.len() != 2 || v[0].dir * v[1].dir != -1 {
            return Err(Error::Internal(format!("bad incidence pattern on edge {e}")));
        }
        debug_assert_ne!(v[0].tri, v[1].tri, "edge {e} repeats inside a triangle");
        let (plus, minus) = if v[0].dir == 1 { (v[0], v[1]) } else { (v[1], v[0]) };
        incs.push([plus, minus]);
    }

    Ok(Triangulation { genus, triangles, incs, poly_span, poly_sides })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for g in 1..=4u32 {
            let t = build_genus_surface(g).unwrap();
            assert_eq!(t.num_edges(), (6 * g - 3) as usize);
            assert_eq!(t.num_triangles(), (4 * g - 2) as usize);
            // Euler characteristic: 1 vertex - E + F.
            let chi = 1i64 - t.num_edges() as i64 + t.num_triangles() as i64;
            assert_eq!(chi, 2 - 2 * g as i64);
        }
        assert!(build_genus_surface(0).is_err());
        assert!(build_genus_surface(5).is_err());
    }

    #[test]
    fn incidences_paired() {
        let t = build_genus_surface(3).unwrap();
        for e in 0..t.num_edges() {
            let [p, m] = t.incs[e];
            assert_eq!(p.dir, 1);
            assert_eq!(m.dir, -1);
            assert_eq!(t.triangles[p.tri].sides[p.side].edge, e);
            assert_eq!(t.triangles[m.tri].sides[m.side].edge, e);
            assert_ne!(p.tri, m.tri);
        }
    }
}
