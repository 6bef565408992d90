//! First homology via algebraic intersection with a fixed basis of slope
//! curves (one A- and one B-curve per handle).  Classes are coordinate
//! vectors in that basis; twists act by transvections.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arr::Arrangement;
use crate::drawing::{Drawing, NodeId, NormalCurve};
use crate::geom::{sub, Pt};
use crate::path::slope_curve;
use crate::tri::Triangulation;
use crate::Error;

/// Out-slot of each node along a deterministic orientation of a closed
/// strand (possibly multi-component).
pub fn orient_strand(d: &Drawing, s: usize) -> BTreeMap<NodeId, usize> {
    let mut out = BTreeMap::new();
    for comp in d.strand_components(s) {
        let mut nodes = comp.clone();
        nodes.sort_by_key(|&n| (d.node(n).edge, d.pos(n)));
        let start = nodes[0];
        let mut cur = start;
        let mut slot = 0usize;
        loop {
            out.insert(cur, slot);
            let nxt = d.node(cur).link[slot].expect("open strand in orient_strand");
            let t = d.tri_of_slot(cur, slot);
            let sin = d.slot_in(nxt, t);
            cur = nxt;
            slot = 1 - sin;
            if cur == start {
                break;
            }
        }
    }
    out
}

fn node_pt(arr: &Arrangement, t: usize, n: NodeId) -> Pt {
    let ta = &arr.tris[t];
    for (i, (k, p)) in ta.bpts.iter().enumerate() {
        if matches!(k, crate::arr::BKind::Node(m) if *m == n) {
            let _ = i;
            return p.clone();
        }
    }
    panic!("node not on triangle boundary");
}

/// Sum of crossing signs between strands s1 and s2 with given orientations.
pub fn algebraic_crossing_sum(
    d: &Drawing,
    arr: &Arrangement,
    s1: usize,
    s2: usize,
    ori1: &BTreeMap<NodeId, usize>,
    ori2: &BTreeMap<NodeId, usize>,
) -> i64 {
    let mut total = 0i64;
    for x in &arr.crossings {
        let (ia, ib) = if x.strands == [s1, s2] {
            (0, 1)
        } else if x.strands == [s2, s1] {
            (1, 0)
        } else {
            continue;
        };
        let dir = |ci: usize, ori: &BTreeMap<NodeId, usize>| -> Pt {
            let c = &arr.tris[x.tri].chords[x.chords[ci]];
            let pu = node_pt(arr, x.tri, c.u);
            let pv = node_pt(arr, x.tri, c.v);
            // Traversal goes u -> v iff u's out-slot points into this triangle.
            let u_slot = d.slot_in(c.u, x.tri);
            if ori[&c.u] == u_slot {
                sub(&pv, &pu)
            } else {
                sub(&pu, &pv)
            }
        };
        let d1 = dir(ia, ori1);
        let d2 = dir(ib, ori2);
        let cr = &d1.x * &d2.y - &d1.y * &d2.x;
        total += if cr.is_positive() { 1 } else { -1 };
    }
    total
}

pub struct H1 {
    pub tri: Rc<Triangulation>,
    pub basis: Vec<NormalCurve>,
    /// Gram matrix of the algebraic intersection form on the basis.
    pub gram: Vec<Vec<i64>>,
    gram_t_inv: Vec<Vec<i64>>,
}

impl H1 {
    pub fn new(tri: &Rc<Triangulation>) -> Result<H1, Error> {
        let g = tri.genus as usize;
        let mut basis = Vec::new();
        for block in 0..g {
            basis.push(slope_curve(tri, block, 0, 1)?);
            basis.push(slope_curve(tri, block, 1, 0)?);
        }
        let n = basis.len();
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = raw_alg(tri, &basis[i], &basis[j])?;
                gram[i][j] = v;
                gram[j][i] = -v;
            }
        }
        let gram_t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| gram[j][i]).collect()).collect();
        let gram_t_inv = int_inverse(&gram_t)
            .ok_or_else(|| Error::Internal("basis Gram matrix not unimodular".into()))?;
        Ok(H1 { tri: tri.clone(), basis, gram, gram_t_inv })
    }

    /// Coordinates of [c] in the basis (orientation = canonical traversal).
    pub fn class_of(&self, c: &NormalCurve) -> Result<Vec<i64>, Error> {
        let mut pair = Vec::new();
        for b in &self.basis {
            pair.push(raw_alg(&self.tri, c, b)?);
        }
        // pair_i = <c, B_i> = sum_j coef_j <B_j, B_i> = (G^T coef)_i.
        Ok(mat_vec(&self.gram_t_inv, &pair))
    }

    /// Algebraic intersection of classes in basis coordinates.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let gy = mat_vec(&self.gram, &y.to_vec());
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// Transvection matrix of the twist about class `c` with sign s:
    /// y -> y + s <y, c> c.
    pub fn twist_matrix(&self, c: &[i64], s: i64) -> Vec<Vec<i64>> {
        let n = c.len();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 1;
        }
        // <y, c> = y^T G c = (G c) . y
        let gc = mat_vec(&self.gram, &c.to_vec());
        for i in 0..n {
            for j in 0..n {
                m[i][j] += s * c[i] * gc[j];
            }
        }
        m
    }
}

/// Algebraic intersection of two canonical curves (canonical orientations),
/// computed on a plain overlay without any reduction.
pub fn raw_alg(tri: &Rc<Triangulation>, a: &NormalCurve, b: &NormalCurve) -> Result<i64, Error> {
    let mut d = Drawing::trace(tri.clone(), &a.w, "a")?;
    let db = Drawing::trace(tri.clone(), &b.w, "b")?;
    let s2 = d.merge(&db);
    let arr = Arrangement::build(&d)?;
    let o1 = orient_strand(&d, 0);
    let o2 = orient_strand(&d, s2);
    Ok(algebraic_crossing_sum(&d, &arr, 0, s2, &o1, &o2))
}

pub fn is_separating(h1: &H1, c: &NormalCurve) -> Result<bool, Error> {
    Ok(h1.class_of(c)?.iter().all(|&x| x == 0))
}

// --- small integer linear algebra -----------------------------------------

pub fn mat_vec(m: &[Vec<i64>], v: &Vec<i64>) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = 0i64;
            for l in 0..k {
                s += a[i][l] * b[l][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 1;
    }
    m
}

/// Exact inverse of an integer matrix, if the inverse is integral.
pub fn int_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                    inv[r][j] = &inv[r][j] - &f * &inv[col][j];
                }
            }
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if !inv[i][j].is_integer() {
                return None;
            }
            out[i][j] = inv[i][j].to_integer().to_i64()?;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::build_genus_surface;

    #[test]
    fn gram_symplectic_genus3() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = if j == i + 1 && i % 2 == 0 {
                    h1.gram[i][j].abs()
                } else if i == j + 1 && j % 2 == 0 {
                    h1.gram[i][j].abs()
                } else {
                    0
                };
                assert_eq!(h1.gram[i][j].abs(), expect.abs(), "gram[{i}][{j}]");
            }
        }
        // A_i pairs with B_i exactly once.
        assert_eq!(h1.gram[0][1].abs(), 1);
        assert_eq!(h1.gram[2][3].abs(), 1);
        assert_eq!(h1.gram[4][5].abs(), 1);
    }

    #[test]
    fn classes_and_separating() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        let a1 = h1.basis[0].clone();
        let cls = h1.class_of(&a1).unwrap();
        assert_eq!(cls, vec![1, 0, 0, 0, 0, 0]);
        let c = slope_curve(&tri, 1, 3, 2).unwrap();
        let cls = h1.class_of(&c).unwrap();
        // Nonzero exactly in the middle block.
        assert_eq!(cls[0], 0);
        assert_eq!(cls[1], 0);
        assert_eq!(cls[4], 0);
        assert_eq!(cls[5], 0);
        assert!(cls[2] != 0 || cls[3] != 0);
        assert!(!is_separating(&h1, &c).unwrap());
    }
}
