//! Mapping classes as words of Dehn twists, compared through their action on
//! homology and on a fixed filling battery of curves.

use std::rc::Rc;

use crate::drawing::NormalCurve;
use crate::homology::{identity, mat_mul, H1};
use crate::path::{curve_from_path, frac, slope_curve, PolyPath};
use crate::tri::Triangulation;
use crate::twist::twist_curve;
use crate::Error;

/// Homology sign of a positive twist in H1::twist_matrix terms.
pub const H1_POS: i64 = -1;

#[derive(Debug, Clone)]
pub struct MappingClass {
    pub tri: Rc<Triangulation>,
    /// Twist letters in composition order: word[0] is applied last.
    pub word: Vec<(NormalCurve, bool)>,
}

impl MappingClass {
    pub fn identity(tri: &Rc<Triangulation>) -> MappingClass {
        MappingClass { tri: tri.clone(), word: Vec::new() }
    }

    pub fn twist(tri: &Rc<Triangulation>, c: &NormalCurve, positive: bool) -> MappingClass {
        MappingClass { tri: tri.clone(), word: vec![(c.clone(), positive)] }
    }

    /// f.compose(g) = f then-after g, i.e. x -> f(g(x)).
    pub fn compose(&self, g: &MappingClass) -> MappingClass {
        let mut word = self.word.clone();
        word.extend(g.word.iter().cloned());
        MappingClass { tri: self.tri.clone(), word }
    }

    pub fn inverse(&self) -> MappingClass {
        let word = self.word.iter().rev().map(|(c, p)| (c.clone(), !p)).collect();
        MappingClass { tri: self.tri.clone(), word }
    }

    pub fn apply(&self, x: &NormalCurve) -> Result<NormalCurve, Error> {
        let mut cur = x.clone();
        for (c, pos) in self.word.iter().rev() {
            cur = twist_curve(&self.tri, &cur, c, *pos)?;
        }
        Ok(cur)
    }

    pub fn h1_matrix(&self, h1: &H1) -> Result<Vec<Vec<i64>>, Error> {
        let mut m = identity(h1.basis.len());
        for (c, pos) in &self.word {
            let cls = h1.class_of(c)?;
            let t = h1.twist_matrix(&cls, if *pos { H1_POS } else { -H1_POS });
            m = mat_mul(&m, &t);
        }
        Ok(m)
    }
}

/// Fixed battery of curves used as an equality oracle: per-handle slopes plus
/// curves running over pairs of handles.
pub struct Battery {
    pub curves: Vec<NormalCurve>,
}

impl Battery {
    pub fn standard(tri: &Rc<Triangulation>) -> Result<Battery, Error> {
        let g = tri.genus as usize;
        let mut curves = Vec::new();
        for i in 0..g {
            curves.push(slope_curve(tri, i, 0, 1)?);
            curves.push(slope_curve(tri, i, 1, 0)?);
            curves.push(slope_curve(tri, i, 1, 1)?);
        }
        for i in 0..g {
            for j in i + 1..g {
                curves.push(bridge_curve(tri, i, j)?);
            }
        }
        Ok(Battery { curves })
    }
}

/// A curve running once over handle i and once over handle j.
pub fn bridge_curve(tri: &Rc<Triangulation>, i: usize, j: usize) -> Result<NormalCurve, Error> {
    assert!(i < j && j < tri.genus as usize);
    let p = PolyPath {
        crossings: vec![(4 * i + 2, frac(1, 3)), (4 * j + 2, frac(2, 5))],
    };
    curve_from_path(tri, &p)
}

/// Equality of mapping classes: same action on homology and on the battery.
pub fn equals(
    f: &MappingClass,
    g: &MappingClass,
    h1: &H1,
    battery: &Battery,
) -> Result<bool, Error> {
    if f.h1_matrix(h1)? != g.h1_matrix(h1)? {
        return Ok(false);
    }
    for c in &battery.curves {
        if f.apply(c)? != g.apply(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::build_genus_surface;

    #[test]
    fn twist_relations_smoke() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        let bat = Battery::standard(&tri).unwrap();
        let a1 = slope_curve(&tri, 0, 0, 1).unwrap();
        let b1 = slope_curve(&tri, 0, 1, 0).unwrap();
        let a2 = slope_curve(&tri, 1, 0, 1).unwrap();
        let ta1 = MappingClass::twist(&tri, &a1, true);
        let tb1 = MappingClass::twist(&tri, &b1, true);
        let ta2 = MappingClass::twist(&tri, &a2, true);
        // Disjoint curves commute.
        assert!(equals(&ta1.compose(&ta2), &ta2.compose(&ta1), &h1, &bat).unwrap());
        // i(a1,b1)=1: no commutation, but the braid relation holds.
        assert!(!equals(&ta1.compose(&tb1), &tb1.compose(&ta1), &h1, &bat).unwrap());
        let lhs = ta1.compose(&tb1).compose(&ta1);
        let rhs = tb1.compose(&ta1).compose(&tb1);
        assert!(equals(&lhs, &rhs, &h1, &bat).unwrap());
        // Inverse cancels.
        assert!(equals(
            &ta1.compose(&ta1.inverse()),
            &MappingClass::identity(&tri),
            &h1,
            &bat
        )
        .unwrap());
    }

    #[test]
    fn conjugation_moves_twist() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        let bat = Battery::standard(&tri).unwrap();
        let a1 = slope_curve(&tri, 0, 0, 1).unwrap();
        let b1 = slope_curve(&tri, 0, 1, 0).unwrap();
        let f = MappingClass::twist(&tri, &b1, true);
        // f tau_{a1} f^-1 = tau_{f(a1)}.
        let lhs = f.compose(&MappingClass::twist(&tri, &a1, true)).compose(&f.inverse());
        let fa1 = f.apply(&a1).unwrap();
        let rhs = MappingClass::twist(&tri, &fa1, true);
        assert!(equals(&lhs, &rhs, &h1, &bat).unwrap());
    }

    #[test]
    fn bridge_curve_crosses_diagonals() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let c = bridge_curve(&tri, 0, 1).unwrap();
        let diag_weight: u32 = (6..tri.num_edges()).map(|e| c.w[e]).sum();
        assert!(diag_weight > 0);
    }
}
