//! Stabilizer membership, visional bubble moves, and the constructive
//! factorizations of eyeglass twists into words over the three sphere
//! stabilizers H_1, H_2, H_3.

use std::rc::Rc;

use crate::arr::Arrangement;
use crate::eyeglass::{apply_eyeglass, bridge_i, eyeglass_twist, separates, Eyeglass, Oracle};
use crate::heegaard::{is_reducing, HeegaardDiagram};
use crate::mapclass::{bridge_curve, equals, MappingClass};
use crate::reduce::{intersection_number, overlay_reduced};
use crate::ribbon::{neighborhood_boundary, wedge_boundary};
use crate::drawing::NormalCurve;
use crate::path::slope_curve;
use crate::tri::Triangulation;
use crate::Error;

/// A word in the stabilizers: factors listed left to right, rightmost applied
/// first, each tagged with the index of the H_i that contains it.
#[derive(Debug, Clone)]
pub struct FactoredWord {
    pub factors: Vec<(MappingClass, usize)>,
}

impl FactoredWord {
    pub fn product(&self, tri: &Rc<Triangulation>) -> MappingClass {
        let mut p = MappingClass::identity(tri);
        for (f, _) in &self.factors {
            p = p.compose(f);
        }
        p
    }
}

/// phi(mu_i) = mu_i in canonical form.
pub fn in_stabilizer(dg: &HeegaardDiagram, f: &MappingClass, i: usize) -> Result<bool, Error> {
    if !(1..=3).contains(&i) {
        return Err(Error::Invalid("stabilizer index must be 1..=3".into()));
    }
    Ok(f.apply(&dg.mu[i - 1])? == dg.mu[i - 1])
}

/// Component genus of the piece of the surface cut along `mu` that contains
/// `c`; errors if they cross.
fn side_of(dg: &HeegaardDiagram, mu: &NormalCurve, c: &NormalCurve) -> Result<i64, Error> {
    let d = overlay_reduced(&dg.tri, &[mu.w.clone(), c.w.clone()], &["mu", "c"])?;
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(0, 1) != 0 {
        return Err(Error::Invalid("curve crosses the reducing curve".into()));
    }
    let dec = arr.cut_components(&[0]);
    if dec.ncomps != 2 {
        return Err(Error::Invalid("reducing curve does not separate".into()));
    }
    Ok(arr.cut_genus(&dec, arr.strand_component(&dec, 1)))
}

/// Drag of the genus-1 bubble bounded by mu_i along the loop `omega` in the
/// genus-2 side.  Realized as tau_{c+} . tau_omega^-1 where c+ is the band sum
/// of mu_i and omega; this is the hole-push along omega, supported away from
/// the bubble.
pub fn visional_bubble_move(
    dg: &HeegaardDiagram,
    i: usize,
    omega: &NormalCurve,
    skip: usize,
) -> Result<MappingClass, Error> {
    if !(1..=3).contains(&i) {
        return Err(Error::Invalid("bubble index must be 1..=3".into()));
    }
    let mu = &dg.mu[i - 1];
    if side_of(dg, mu, omega)? != 2 {
        return Err(Error::Invalid("omega must lie in the genus-2 side".into()));
    }
    let cplus = neighborhood_boundary(&dg.tri, mu, omega, skip)?;
    let drag = MappingClass::twist(&dg.tri, &cplus, true)
        .compose(&MappingClass::twist(&dg.tri, omega, false));
    if drag.apply(mu)? != *mu {
        return Err(Error::Internal("drag does not fix the bubble boundary".into()));
    }
    Ok(drag)
}

/// Documented family of visional B_i moves used by the bounded searches:
/// drags along slope and bridge curves of the genus-2 side, both directions,
/// a few connector choices each.  Deterministic order, identity first.
pub fn visional_family(dg: &HeegaardDiagram, i: usize) -> Result<Vec<MappingClass>, Error> {
    let mut omegas: Vec<NormalCurve> = Vec::new();
    for blk in 0..3usize {
        for (p, q) in [(0i64, 1i64), (1, 0), (1, 1)] {
            omegas.push(slope_curve(&dg.tri, blk, p, q)?);
        }
    }
    for (a, b) in [(0usize, 1usize), (1, 2), (0, 2)] {
        omegas.push(bridge_curve(&dg.tri, a, b)?);
    }
    let mut out = vec![MappingClass::identity(&dg.tri)];
    for om in &omegas {
        if side_of(dg, &dg.mu[i - 1], om).map(|g| g != 2).unwrap_or(true) {
            continue;
        }
        for skip in 0..2usize {
            let Ok(drag) = visional_bubble_move(dg, i, om, skip) else { continue };
            out.push(drag.inverse());
            out.push(drag);
        }
    }
    Ok(out)
}

fn eyeglass_disjoint_from(
    dg: &HeegaardDiagram,
    eta: &Eyeglass,
    mu: &NormalCurve,
) -> Result<bool, Error> {
    for c in [&eta.a, &eta.b, &eta.gamma] {
        if intersection_number(&dg.tri, &c.w, &mu.w)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lemma 4.1: factor T_eta, with mu_i separating eta and bridge 1, as a word
/// in the stabilizers.  Cases 1 and 2 conjugate by a visional move so the
/// image eyeglass avoids one of the other two spheres; case 3 reduces the
/// lens intersection with the other spheres first, recursing.
pub fn factor_e1(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    eta: &Eyeglass,
    i: usize,
    budget: usize,
) -> Result<FactoredWord, Error> {
    if !(1..=3).contains(&i) {
        return Err(Error::Invalid("sphere index must be 1..=3".into()));
    }
    let mu = &dg.mu[i - 1];
    if !separates(dg, eta, mu)? {
        return Err(Error::Invalid("mu_i must separate the eyeglass".into()));
    }
    if bridge_i(dg, eta, mu)? != 1 {
        return Err(Error::Invalid("bridge intersection must be 1".into()));
    }
    let others: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
    let family = visional_family(dg, i)?;
    let mut tried = 0usize;
    // Cases 1/2: some drag psi in H_i moves eta off mu_j; then
    // T_eta = psi^-1 . T_{psi(eta)} . psi with the middle factor in H_j.
    for psi in &family {
        tried += 1;
        if tried > budget {
            return Err(Error::Budget(format!("factor_e1: {budget} drags tried")));
        }
        let im = apply_eyeglass(psi, eta)?;
        for &j in &others {
            if !eyeglass_disjoint_from(dg, &im, &dg.mu[j - 1])? {
                continue;
            }
            let tim = eyeglass_twist(&dg.tri, &im, 1).realized;
            let w = FactoredWord {
                factors: vec![(psi.inverse(), i), (tim, j), (psi.clone(), i)],
            };
            if let Some(d) = verify_factorization(dg, orc, &w, &eyeglass_twist(&dg.tri, eta, 1).realized)? {
                return Err(Error::Internal(format!("factor_e1 verification: {d}")));
            }
            return Ok(w);
        }
    }
    // Case 3: no drag clears a sphere directly; find one that strictly
    // decreases the lens intersection with the other spheres and recurse.
    let score = |e: &Eyeglass| -> Result<u64, Error> {
        let mut s = 0;
        for &j in &others {
            s += intersection_number(&dg.tri, &e.a.w, &dg.mu[j - 1].w)?;
            s += intersection_number(&dg.tri, &e.b.w, &dg.mu[j - 1].w)?;
        }
        Ok(s)
    };
    let cur = score(eta)?;
    for psi in family.iter().skip(1) {
        let im = apply_eyeglass(psi, eta)?;
        if score(&im)? >= cur || bridge_i(dg, &im, mu)? != 1 {
            continue;
        }
        let inner = factor_e1(dg, orc, &im, i, budget.saturating_sub(tried))?;
        let mut factors = vec![(psi.inverse(), i)];
        factors.extend(inner.factors);
        factors.push((psi.clone(), i));
        return Ok(FactoredWord { factors });
    }
    Err(Error::Budget("factor_e1: no reducing drag in the family".into()))
}

/// A reducing curve disjoint from `lens` whose genus-1 side contains it:
/// after compressing along the lens this cuts off a disk holding only its
/// scars.  Tries the standard spheres, then wedge boundaries with small duals.
fn scar_curve(dg: &HeegaardDiagram, lens: &NormalCurve) -> Result<NormalCurve, Error> {
    let mut cands: Vec<NormalCurve> = dg.mu.to_vec();
    for blk in 0..3usize {
        for (p, q) in [(0i64, 1i64), (1, 0)] {
            let d = slope_curve(&dg.tri, blk, p, q)?;
            if intersection_number(&dg.tri, &d.w, &lens.w)? == 1 {
                cands.push(wedge_boundary(&dg.tri, lens, &d)?);
            }
        }
    }
    for l in cands {
        if intersection_number(&dg.tri, &l.w, &lens.w)? != 0 {
            continue;
        }
        if side_of(dg, &l, lens).map(|g| g != 1).unwrap_or(true) {
            continue;
        }
        if is_reducing(dg, &l)? {
            return Ok(l);
        }
    }
    Err(Error::Budget("no scar curve among the candidates".into()))
}

/// Bounded search for phi in H_i carrying {l1, l2} onto the other two
/// standard spheres; words over twists about the system and sphere curves.
fn match_triplet(
    dg: &HeegaardDiagram,
    i: usize,
    l1: &NormalCurve,
    l2: &NormalCurve,
    budget: usize,
) -> Result<MappingClass, Error> {
    let mut gens = vec![MappingClass::identity(&dg.tri)];
    for c in dg
        .v_system
        .curves
        .iter()
        .chain(dg.w_system.curves.iter())
        .chain(dg.mu.iter())
    {
        gens.push(MappingClass::twist(&dg.tri, c, true));
        gens.push(MappingClass::twist(&dg.tri, c, false));
    }
    let targ: Vec<&NormalCurve> =
        (1..=3).filter(|&j| j != i).map(|j| &dg.mu[j - 1]).collect();
    let mut frontier = vec![MappingClass::identity(&dg.tri)];
    let mut tried = 0usize;
    for _depth in 0..3usize {
        let mut next = Vec::new();
        for f in &frontier {
            tried += 1;
            if tried > budget {
                return Err(Error::Budget(format!("match_triplet: {budget} words tried")));
            }
            let i1 = f.apply(l1)?;
            let i2 = f.apply(l2)?;
            let hit = (i1 == *targ[0] && i2 == *targ[1]) || (i1 == *targ[1] && i2 == *targ[0]);
            if hit && in_stabilizer(dg, f, i)? {
                return Ok(f.clone());
            }
            for g in &gens[1..] {
                next.push(f.compose(g));
            }
        }
        frontier = next;
    }
    Err(Error::Budget("match_triplet: word length exhausted".into()))
}

/// Lemma 4.2: both lenses on the genus-2 side of mu_i (i = 1 or 2).  The
/// support-disjoint case is a single H_i factor; otherwise match the scar
/// triplet onto the standard one and fall through to the Lemma 4.1 machinery.
pub fn factor_same_side(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    eta: &Eyeglass,
    i: usize,
    budget: usize,
) -> Result<FactoredWord, Error> {
    if !(1..=2).contains(&i) {
        return Err(Error::Invalid("sphere index must be 1 or 2".into()));
    }
    let mu = &dg.mu[i - 1];
    if side_of(dg, mu, &eta.a)? != 2 || side_of(dg, mu, &eta.b)? != 2 {
        return Err(Error::Invalid("both lenses must lie on the genus-2 side".into()));
    }
    let t = eyeglass_twist(&dg.tri, eta, 1).realized;
    if eyeglass_disjoint_from(dg, eta, mu)? {
        let w = FactoredWord { factors: vec![(t.clone(), i)] };
        if let Some(d) = verify_factorization(dg, orc, &w, &t)? {
            return Err(Error::Internal(format!("factor_same_side verification: {d}")));
        }
        return Ok(w);
    }
    let l1 = scar_curve(dg, &eta.a)?;
    let l2 = scar_curve(dg, &eta.b)?;
    if intersection_number(&dg.tri, &l1.w, &l2.w)? != 0
        || intersection_number(&dg.tri, &l1.w, &mu.w)? != 0
        || intersection_number(&dg.tri, &l2.w, &mu.w)? != 0
    {
        return Err(Error::Budget("scar curves not in triplet position".into()));
    }
    let phi = match_triplet(dg, i, &l1, &l2, budget)?;
    let im = apply_eyeglass(&phi, eta)?;
    // phi(l1) is one of the other standard spheres and separates phi(eta);
    // the image lands in the Lemma 4.1 setting for that sphere.
    let fl1 = phi.apply(&l1)?;
    let j = (1..=3)
        .find(|&j| fl1 == dg.mu[j - 1])
        .ok_or_else(|| Error::Internal("matched triplet lost the scar curve".into()))?;
    let inner = if eyeglass_disjoint_from(dg, &im, &dg.mu[j - 1])? {
        FactoredWord { factors: vec![(eyeglass_twist(&dg.tri, &im, 1).realized, j)] }
    } else {
        factor_e1(dg, orc, &im, j, budget)?
    };
    let mut factors = vec![(phi.inverse(), i)];
    factors.extend(inner.factors);
    factors.push((phi.clone(), i));
    let w = FactoredWord { factors };
    if let Some(d) = verify_factorization(dg, orc, &w, &t)? {
        return Err(Error::Internal(format!("factor_same_side verification: {d}")));
    }
    Ok(w)
}

/// None = the word verifies: every tag holds and the product equals the
/// target on the battery.  Some(diagnostic) names the first failing check.
pub fn verify_factorization(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    w: &FactoredWord,
    target: &MappingClass,
) -> Result<Option<String>, Error> {
    for (k, (f, tag)) in w.factors.iter().enumerate() {
        if !in_stabilizer(dg, f, *tag)? {
            return Ok(Some(format!("factor {k} is not in H_{tag}")));
        }
    }
    if !equals(&w.product(&dg.tri), target, &orc.h1, &orc.bat)? {
        return Ok(Some("product differs from target".into()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eyeglass::make_eyeglass;
    use crate::heegaard::standard_diagram;
    use crate::homology::identity as id_mat;

    #[test]
    fn stabilizer_membership() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let tmu = MappingClass::twist(&dg.tri, &dg.mu[0], true);
        assert!(in_stabilizer(&dg, &tmu, 1).unwrap());
        // a bridge curve over handles 0 and 1 crosses mu_1 essentially
        let br = bridge_curve(&dg.tri, 0, 1).unwrap();
        let tb = MappingClass::twist(&dg.tri, &br, true);
        assert!(!in_stabilizer(&dg, &tb, 1).unwrap());
        assert!(in_stabilizer(&dg, &tb, 3).unwrap());
    }

    #[test]
    fn visional_move_contract() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        let om = slope_curve(&dg.tri, 2, 1, 0).unwrap();
        let drag = visional_bubble_move(&dg, 1, &om, 0).unwrap();
        assert!(in_stabilizer(&dg, &drag, 1).unwrap());
        // hole-push acts trivially on homology
        assert_eq!(drag.h1_matrix(&orc.h1).unwrap(), id_mat(6));
        // curves inside the bubble side are untouched
        let inside = slope_curve(&dg.tri, 0, 1, 1).unwrap();
        assert_eq!(drag.apply(&inside).unwrap(), inside);
        // drag stays in the Goeritz group: disk-bounding status survives
        let im = drag.apply(&dg.w_system.curves[2]).unwrap();
        assert!(crate::heegaard::bounds_disk(&dg, &im, crate::heegaard::Side::W).unwrap());
        // wrong side rejected
        let bad = slope_curve(&dg.tri, 0, 0, 1).unwrap();
        assert!(visional_bubble_move(&dg, 1, &bad, 0).is_err());
    }

    #[test]
    fn factor_bridge_one() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        // delta_1 sits in the genus-1 side of mu_1, epsilon_3 in the genus-2
        // side; the bridge crosses mu_1 once.
        let eta =
            make_eyeglass(&dg, &dg.v_system.curves[0], &dg.w_system.curves[2], 0).unwrap();
        assert!(separates(&dg, &eta, &dg.mu[0]).unwrap());
        assert_eq!(bridge_i(&dg, &eta, &dg.mu[0]).unwrap(), 1);
        let w = factor_e1(&dg, &orc, &eta, 1, 64).unwrap();
        assert!(w.factors.iter().all(|(_, t)| (1..=3).contains(t)));
        let t = eyeglass_twist(&dg.tri, &eta, 1).realized;
        assert!(verify_factorization(&dg, &orc, &w, &t).unwrap().is_none());
        // bridge 3 input is rejected up front
        assert!(factor_e1(&dg, &orc, &eta, 2, 64).is_err());
    }

    #[test]
    fn factor_same_side_general() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        // drag-conjugate a disjoint fixture so the connector is forced
        // across mu_1 while both lenses stay on the genus-2 side
        let eta0 =
            make_eyeglass(&dg, &dg.v_system.curves[1], &dg.w_system.curves[2], 0).unwrap();
        let psi = &visional_family(&dg, 2).unwrap()[1];
        let eta = apply_eyeglass(psi, &eta0).unwrap();
        assert_eq!(
            intersection_number(&dg.tri, &eta.gamma.w, &dg.mu[0].w).unwrap(),
            4
        );
        assert_eq!(side_of(&dg, &dg.mu[0], &eta.a).unwrap(), 2);
        assert_eq!(side_of(&dg, &dg.mu[0], &eta.b).unwrap(), 2);
        let w = factor_same_side(&dg, &orc, &eta, 1, 400).unwrap();
        assert!(w.factors.len() > 1);
        let t = eyeglass_twist(&dg.tri, &eta, 1).realized;
        assert!(verify_factorization(&dg, &orc, &w, &t).unwrap().is_none());
    }

    #[test]
    fn factor_same_side_trivial_and_verify() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        // both lenses in blocks 1/2 = the genus-2 side of mu_1
        let eta =
            make_eyeglass(&dg, &dg.v_system.curves[1], &dg.w_system.curves[2], 0).unwrap();
        let w = factor_same_side(&dg, &orc, &eta, 1, 64).unwrap();
        let t = eyeglass_twist(&dg.tri, &eta, 1).realized;
        assert!(verify_factorization(&dg, &orc, &w, &t).unwrap().is_none());
        // corrupted factor reported
        let mut bad = w.clone();
        bad.factors[0].0 = MappingClass::twist(&dg.tri, &dg.v_system.curves[0], true);
        assert!(verify_factorization(&dg, &orc, &bad, &t).unwrap().is_some());
        // empty word vs identity
        let empty = FactoredWord { factors: vec![] };
        let idm = MappingClass::identity(&dg.tri);
        assert!(verify_factorization(&dg, &orc, &empty, &idm).unwrap().is_none());
    }
}
