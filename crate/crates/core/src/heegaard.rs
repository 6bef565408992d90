//! Genus-3 Heegaard diagrams of L(p,q) # L(p',q'): cut systems, the word a
//! curve reads against a system, disk-bounding via free reduction, reducing
//! curves and the standard sphere triplet.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::arr::Arrangement;
use crate::drawing::{Drawing, NodeId, NormalCurve};
use crate::geom::Pt;
use crate::homology::orient_strand;
use crate::path::slope_curve;
use crate::reduce::{intersection_number, overlay_reduced};
use crate::ribbon::wedge_boundary;
use crate::tri::{build_genus_surface, Triangulation};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Side {
    V,
    W,
}

/// A cut system: three disjoint non-separating curves with connected planar
/// complement.
#[derive(Debug, Clone)]
pub struct DiskSystem {
    pub curves: [NormalCurve; 3],
    pub side: Side,
}

#[derive(Debug, Clone)]
pub struct HeegaardDiagram {
    pub tri: Rc<Triangulation>,
    pub v_system: DiskSystem,
    pub w_system: DiskSystem,
    /// Triplet curves mu_1, mu_2, mu_3 around the three handles.
    pub mu: [NormalCurve; 3],
    pub params: (i64, i64, i64, i64),
}

/// Word in the free group on three generators; letters are +-1, +-2, +-3.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FreeGroupWord {
    pub letters: Vec<i32>,
}

impl FreeGroupWord {
    pub fn free_reduce(&self) -> FreeGroupWord {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeGroupWord { letters: out }
    }

    /// Freely and cyclically reduce (closed-curve words are conjugacy classes).
    pub fn cyclic_reduce(&self) -> FreeGroupWord {
        let mut w = self.free_reduce().letters;
        while w.len() >= 2 && *w.first().unwrap() == -*w.last().unwrap() {
            w.pop();
            w.remove(0);
        }
        FreeGroupWord { letters: w }
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_reduce().letters.is_empty()
    }

    pub fn exponents(&self) -> [i64; 3] {
        let mut e = [0i64; 3];
        for &l in &self.letters {
            e[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
        }
        e
    }
}

#[derive(Debug, Clone)]
pub struct SphereTriplet {
    pub curves: [NormalCurve; 3],
}

/// A bubble: a reducing curve together with the complementary component that
/// plays the surface part.
#[derive(Debug, Clone)]
pub struct Bubble {
    pub boundary: NormalCurve,
    /// Index (0 or 1) of the cut component of genus 1.
    pub genus1_side: usize,
}

fn nc(tri: &Rc<Triangulation>, block: usize, p: i64, q: i64) -> Result<NormalCurve, Error> {
    slope_curve(tri, block, p, q)
}

/// The standard genus-3 diagram of L(p,q) # L(p',q'): handles 1 and 2 carry
/// the lens summands, handle 3 is the stabilization.
pub fn standard_diagram(p: i64, q: i64, p2: i64, q2: i64) -> Result<HeegaardDiagram, Error> {
    if p < 2 || p2 < 2 {
        return Err(Error::Invalid(format!("summand orders must be >= 2, got {p}, {p2}")));
    }
    if num_integer::gcd(p, q) != 1 || num_integer::gcd(p2, q2) != 1 {
        return Err(Error::Invalid("lens parameters must be coprime".into()));
    }
    let tri = Rc::new(build_genus_surface(3)?);
    let d1 = nc(&tri, 0, 0, 1)?;
    let d2 = nc(&tri, 1, 0, 1)?;
    let d3 = nc(&tri, 2, 0, 1)?;
    let e1 = nc(&tri, 0, p, q)?;
    let e2 = nc(&tri, 1, p2, q2)?;
    let e3 = nc(&tri, 2, 1, 0)?;
    let mut mu = Vec::new();
    for block in 0..3 {
        let a = nc(&tri, block, 0, 1)?;
        let b = nc(&tri, block, 1, 0)?;
        mu.push(wedge_boundary(&tri, &a, &b)?);
    }
    let dg = HeegaardDiagram {
        tri,
        v_system: DiskSystem { curves: [d1, d2, d3], side: Side::V },
        w_system: DiskSystem { curves: [e1, e2, e3], side: Side::W },
        mu: [mu[0].clone(), mu[1].clone(), mu[2].clone()],
        params: (p, q, p2, q2),
    };
    validate_system(&dg.tri, &dg.v_system)?;
    validate_system(&dg.tri, &dg.w_system)?;
    Ok(dg)
}

/// Check the cut-system invariants: pairwise disjoint, each non-separating,
/// connected planar complement.
pub fn validate_system(tri: &Rc<Triangulation>, sys: &DiskSystem) -> Result<(), Error> {
    let ws: Vec<Vec<u32>> = sys.curves.iter().map(|c| c.w.clone()).collect();
    let d = overlay_reduced(tri, &ws, &["s1", "s2", "s3"])?;
    let arr = Arrangement::build(&d)?;
    for i in 0..3 {
        for j in i + 1..3 {
            if arr.crossing_count(i, j) != 0 {
                return Err(Error::Invalid(format!("system curves {i} and {j} intersect")));
            }
        }
    }
    for i in 0..3 {
        let dec = arr.cut_components(&[i]);
        if dec.ncomps != 1 {
            return Err(Error::Invalid(format!("system curve {i} separates")));
        }
    }
    let dec = arr.cut_components(&[0, 1, 2]);
    if dec.ncomps != 1 {
        return Err(Error::Invalid("cut system complement disconnected".into()));
    }
    if arr.cut_genus(&dec, 0) != 0 {
        return Err(Error::Invalid("cut system complement not planar".into()));
    }
    Ok(())
}

fn system_of<'a>(dg: &'a HeegaardDiagram, side: Side) -> &'a DiskSystem {
    match side {
        Side::V => &dg.v_system,
        Side::W => &dg.w_system,
    }
}

/// Read the word c spells against the chosen system: signed crossings in
/// traversal order, rotated to the lexicographically least cyclic
/// representative for determinism.
pub fn curve_word(dg: &HeegaardDiagram, c: &NormalCurve, side: Side) -> Result<FreeGroupWord, Error> {
    let sys = system_of(dg, side);
    let ws: Vec<Vec<u32>> = sys
        .curves
        .iter()
        .map(|s| s.w.clone())
        .chain(std::iter::once(c.w.clone()))
        .collect();
    let d = overlay_reduced(&dg.tri, &ws, &["s1", "s2", "s3", "c"])?;
    let arr = Arrangement::build(&d)?;
    let oris: Vec<BTreeMap<NodeId, usize>> = (0..4).map(|s| orient_strand(&d, s)).collect();
    // (vertex -> the two chord indices) per triangle.
    let mut letters = Vec::new();
    let cyc = d.cycle(3);
    for (i, &n) in cyc.iter().enumerate() {
        let m = cyc[(i + 1) % cyc.len()];
        let slot = oris[3][&n];
        let t = d.tri_of_slot(n, slot);
        let ta = &arr.tris[t];
        let (ci, fwd) = ta
            .chords
            .iter()
            .enumerate()
            .find_map(|(k, ch)| {
                if ch.strand != 3 {
                    return None;
                }
                if ch.u == n && ch.v == m && d.slot_in(n, t) == slot {
                    Some((k, true))
                } else if ch.u == m && ch.v == n && d.slot_in(m, t) == oris[3][&m] {
                    None // m's own outgoing chord; not this traversal step
                } else if ch.u == m && ch.v == n {
                    Some((k, false))
                } else {
                    None
                }
            })
            .ok_or_else(|| Error::Internal("traversal chord missing".into()))?;
        let ch = &ta.chords[ci];
        let mut verts = ch.cross_verts.clone();
        if !fwd {
            verts.reverse();
        }
        let pdir = |cj: usize, s: usize| -> Pt {
            let oc = &ta.chords[cj];
            let pu = arr.node_pt(t, oc.u);
            let pv = arr.node_pt(t, oc.v);
            if oris[s][&oc.u] == d.slot_in(oc.u, t) {
                Pt { x: &pv.x - &pu.x, y: &pv.y - &pu.y }
            } else {
                Pt { x: &pu.x - &pv.x, y: &pu.y - &pv.y }
            }
        };
        for v in verts {
            let &(_, cs) = ta
                .crossings
                .iter()
                .find(|(vv, _)| *vv == v)
                .ok_or_else(|| Error::Internal("crossing vertex unmatched".into()))?;
            let cj = if cs[0] == ci { cs[1] } else { cs[0] };
            let s = ta.chords[cj].strand;
            if s > 2 {
                continue; // self-crossing of c cannot happen; guard anyway
            }
            let dc = pdir(ci, 3);
            let dsys = pdir(cj, s);
            let cr = &dc.x * &dsys.y - &dc.y * &dsys.x;
            let sign = if cr > num_traits::Zero::zero() { 1i32 } else { -1 };
            letters.push(sign * (s as i32 + 1));
        }
    }
    Ok(FreeGroupWord { letters: min_rotation(letters) })
}

fn min_rotation(w: Vec<i32>) -> Vec<i32> {
    if w.is_empty() {
        return w;
    }
    (0..w.len())
        .map(|r| {
            let mut v = w.clone();
            v.rotate_left(r);
            v
        })
        .min()
        .unwrap()
}

/// An essential curve is one that does not bound a disk in the surface.
pub fn is_essential(tri: &Rc<Triangulation>, c: &NormalCurve) -> Result<bool, Error> {
    if c.w.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    let d = Drawing::trace(tri.clone(), &c.w, "c")?;
    let arr = Arrangement::build(&d)?;
    let dec = arr.cut_components(&[0]);
    if dec.ncomps == 1 {
        return Ok(true); // non-separating
    }
    Ok(arr.cut_genus(&dec, 0) > 0 && arr.cut_genus(&dec, 1) > 0)
}

/// An embedded essential curve bounds a disk in the handlebody iff its word
/// against the meridian system is trivial in the free group.
pub fn bounds_disk(dg: &HeegaardDiagram, c: &NormalCurve, side: Side) -> Result<bool, Error> {
    if !is_essential(&dg.tri, c)? {
        return Err(Error::Inessential("bounds_disk needs an essential curve".into()));
    }
    Ok(curve_word(dg, c, side)?.is_trivial())
}

pub fn is_reducing(dg: &HeegaardDiagram, c: &NormalCurve) -> Result<bool, Error> {
    Ok(bounds_disk(dg, c, Side::V)? && bounds_disk(dg, c, Side::W)?)
}

pub fn standard_triplet(dg: &HeegaardDiagram) -> SphereTriplet {
    SphereTriplet { curves: dg.mu.clone() }
}

/// Completeness: pairwise disjoint, pairwise non-isotopic, all reducing.
pub fn is_complete(dg: &HeegaardDiagram, t: &SphereTriplet) -> Result<bool, Error> {
    for i in 0..3 {
        for j in i + 1..3 {
            if t.curves[i].w == t.curves[j].w {
                return Ok(false);
            }
            if intersection_number(&dg.tri, &t.curves[i].w, &t.curves[j].w)? != 0 {
                return Ok(false);
            }
        }
    }
    for c in &t.curves {
        if !is_reducing(dg, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Genus of complementary component `which` (0 or 1) of a separating curve.
pub fn side_genus(dg: &HeegaardDiagram, mu: &NormalCurve, which: usize) -> Result<i64, Error> {
    let d = Drawing::trace(dg.tri.clone(), &mu.w, "mu")?;
    let arr = Arrangement::build(&d)?;
    let dec = arr.cut_components(&[0]);
    if dec.ncomps != 2 {
        return Err(Error::Invalid("side_genus needs a separating curve".into()));
    }
    Ok(arr.cut_genus(&dec, which))
}

/// Bubble with the genus-1 complementary piece, as in the paper's standard
/// triplet.
pub fn bubble_of(dg: &HeegaardDiagram, mu: &NormalCurve) -> Result<Bubble, Error> {
    let g0 = side_genus(dg, mu, 0)?;
    let side = if g0 == 1 { 0 } else { 1 };
    if side_genus(dg, mu, side)? != 1 {
        return Err(Error::Invalid("no genus-1 side".into()));
    }
    Ok(Bubble { boundary: mu.clone(), genus1_side: side })
}

/// Diagonal of an integer diagonalization of the 3x3 relator exponent matrix
/// (absolute values, unsorted).
pub fn presentation_diag(dg: &HeegaardDiagram) -> Result<[i64; 3], Error> {
    let mut m = [[0i64; 3]; 3];
    for (i, e) in dg.w_system.curves.iter().enumerate() {
        m[i] = curve_word(dg, e, Side::V)?.exponents();
    }
    Ok(smith_diag(m))
}

/// Diagonalize an integer 3x3 matrix by row/column operations and return the
/// absolute diagonal entries.
pub fn smith_diag(mut m: [[i64; 3]; 3]) -> [i64; 3] {
    for k in 0..3 {
        loop {
            // Pivot: smallest nonzero entry in the trailing block.
            let mut piv: Option<(usize, usize)> = None;
            for i in k..3 {
                for j in k..3 {
                    if m[i][j] != 0
                        && piv.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs())
                    {
                        piv = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = piv else { break };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..3 {
                let f = m[i][k] / m[k][k];
                for j in k..3 {
                    m[i][j] -= f * m[k][j];
                }
                if m[i][k] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..3 {
                let f = m[k][j] / m[k][k];
                for i in k..3 {
                    m[i][j] -= f * m[i][k];
                }
                if m[k][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    [m[0][0].abs(), m[1][1].abs(), m[2][2].abs()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: [i64; 3]) -> [i64; 3] {
        v.sort();
        v
    }

    #[test]
    fn standard_2131() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        assert_eq!(sorted(presentation_diag(&dg).unwrap()), [1, 2, 3]);
        let i = |a: &NormalCurve, b: &NormalCurve| {
            intersection_number(&dg.tri, &a.w, &b.w).unwrap()
        };
        assert_eq!(i(&dg.v_system.curves[2], &dg.w_system.curves[2]), 1);
        assert_eq!(i(&dg.v_system.curves[0], &dg.w_system.curves[0]), 2);
        assert_eq!(i(&dg.v_system.curves[1], &dg.w_system.curves[1]), 3);
        for mu in &dg.mu {
            for j in 0..3 {
                assert_eq!(i(mu, &dg.v_system.curves[j]), 0);
                assert_eq!(i(mu, &dg.w_system.curves[j]), 0);
            }
        }
    }

    #[test]
    fn words_and_disks() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let w_d1 = curve_word(&dg, &dg.v_system.curves[0], Side::V).unwrap();
        assert!(w_d1.letters.is_empty());
        let w_e1 = curve_word(&dg, &dg.w_system.curves[0], Side::V).unwrap();
        let r = w_e1.cyclic_reduce().letters;
        assert!(r == vec![1, 1] || r == vec![-1, -1], "e1 word {r:?}");
        assert!(curve_word(&dg, &dg.mu[2], Side::V).unwrap().is_trivial());
        assert!(bounds_disk(&dg, &dg.v_system.curves[0], Side::V).unwrap());
        assert!(!bounds_disk(&dg, &dg.w_system.curves[0], Side::V).unwrap());
        assert!(bounds_disk(&dg, &dg.w_system.curves[0], Side::W).unwrap());
    }

    #[test]
    fn triplet_and_sides() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let t = standard_triplet(&dg);
        assert!(is_complete(&dg, &t).unwrap());
        let bad = SphereTriplet {
            curves: [t.curves[0].clone(), t.curves[0].clone(), t.curves[2].clone()],
        };
        assert!(!is_complete(&dg, &bad).unwrap());
        let nonred = SphereTriplet {
            curves: [t.curves[0].clone(), t.curves[1].clone(), dg.w_system.curves[0].clone()],
        };
        assert!(!is_complete(&dg, &nonred).unwrap());
        for mu in &dg.mu {
            let gs = sorted([side_genus(&dg, mu, 0).unwrap(), side_genus(&dg, mu, 1).unwrap(), 3]);
            assert_eq!(gs, [1, 2, 3]);
        }
        assert!(side_genus(&dg, &dg.v_system.curves[0], 0).is_err());
    }
}
