//! Eyeglasses and their twists: lens validation, the three-twist realization,
//! separation and bridge-intersection against a reducing curve, lens
//! splitting and the bridge-reduction step.

use std::rc::Rc;

use crate::arr::Arrangement;
use crate::drawing::NormalCurve;
use crate::heegaard::{bounds_disk, HeegaardDiagram, Side};
use crate::homology::H1;
use crate::mapclass::{equals, Battery, MappingClass};
use crate::reduce::{intersection_number, overlay_reduced};
use crate::ribbon::{band_sum, neighborhood_boundary_opts};
use crate::tri::Triangulation;
use crate::Error;

/// An eyeglass: two disjoint lenses plus a bridge, carried as the lens curves
/// together with the boundary gamma of a regular neighborhood of the whole
/// spectacle (the bridge itself is recoverable from gamma).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eyeglass {
    pub a: NormalCurve,
    pub b: NormalCurve,
    pub gamma: NormalCurve,
}

/// Shared equality oracle (homology action plus a filling battery).
pub struct Oracle {
    pub h1: H1,
    pub bat: Battery,
}

impl Oracle {
    pub fn new(tri: &Rc<Triangulation>) -> Result<Oracle, Error> {
        Ok(Oracle { h1: H1::new(tri)?, bat: Battery::standard(tri)? })
    }
}

#[derive(Debug, Clone)]
pub struct EyeglassTwist {
    pub base: Eyeglass,
    pub sign: i8,
    pub realized: MappingClass,
}

/// Build and validate an eyeglass on the diagram; `skip` picks among the
/// deterministic connector enumeration for the bridge.
pub fn make_eyeglass(
    dg: &HeegaardDiagram,
    a: &NormalCurve,
    b: &NormalCurve,
    skip: usize,
) -> Result<Eyeglass, Error> {
    if a.w == b.w {
        return Err(Error::Invalid("eyeglass lenses must be distinct".into()));
    }
    if intersection_number(&dg.tri, &a.w, &b.w)? != 0 {
        return Err(Error::Invalid("eyeglass lenses must be disjoint".into()));
    }
    if !bounds_disk(dg, a, Side::V)? {
        return Err(Error::Invalid("lens a does not bound a disk in V".into()));
    }
    if !bounds_disk(dg, b, Side::W)? {
        return Err(Error::Invalid("lens b does not bound a disk in W".into()));
    }
    let gamma = neighborhood_boundary_opts(&dg.tri, a, b, None, skip)?;
    Ok(Eyeglass { a: a.clone(), b: b.clone(), gamma })
}

/// Eyeglass with a prescribed number of essential bridge crossings with a
/// wall curve (used to seed reduction fixtures).
pub fn make_eyeglass_walled(
    dg: &HeegaardDiagram,
    a: &NormalCurve,
    b: &NormalCurve,
    wall: &NormalCurve,
    k: usize,
    skip: usize,
) -> Result<Eyeglass, Error> {
    let gamma = neighborhood_boundary_opts(&dg.tri, a, b, Some((wall, k)), skip)?;
    Ok(Eyeglass { a: a.clone(), b: b.clone(), gamma })
}

/// T_eta = tau_a . tau_b . tau_gamma^-1 (sign -1 gives the inverse).
pub fn eyeglass_twist(tri: &Rc<Triangulation>, eta: &Eyeglass, sign: i8) -> EyeglassTwist {
    let pos = sign > 0;
    let ta = MappingClass::twist(tri, &eta.a, pos);
    let tb = MappingClass::twist(tri, &eta.b, pos);
    let tg = MappingClass::twist(tri, &eta.gamma, !pos);
    EyeglassTwist { base: eta.clone(), sign, realized: ta.compose(&tb).compose(&tg) }
}

/// The same spectacle with the lenses listed in the other order (Note 3.1).
pub fn swap_lenses(eta: &Eyeglass) -> Eyeglass {
    Eyeglass { a: eta.b.clone(), b: eta.a.clone(), gamma: eta.gamma.clone() }
}

/// Image of an eyeglass under a mapping class, acting on all three curves.
pub fn apply_eyeglass(f: &MappingClass, eta: &Eyeglass) -> Result<Eyeglass, Error> {
    Ok(Eyeglass { a: f.apply(&eta.a)?, b: f.apply(&eta.b)?, gamma: f.apply(&eta.gamma)? })
}

fn lens_overlay(
    dg: &HeegaardDiagram,
    eta: &Eyeglass,
    mu: &NormalCurve,
) -> Result<Arrangement, Error> {
    let d = overlay_reduced(
        &dg.tri,
        &[mu.w.clone(), eta.a.w.clone(), eta.b.w.clone()],
        &["mu", "a", "b"],
    )?;
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(0, 1) != 0 || arr.crossing_count(0, 2) != 0 {
        return Err(Error::Invalid("lenses must be disjoint from the reducing curve".into()));
    }
    Ok(arr)
}

/// Do the lenses lie in different components of the surface cut along mu?
pub fn separates(dg: &HeegaardDiagram, eta: &Eyeglass, mu: &NormalCurve) -> Result<bool, Error> {
    let arr = lens_overlay(dg, eta, mu)?;
    let dec = arr.cut_components(&[0]);
    if dec.ncomps == 1 {
        return Ok(false);
    }
    Ok(arr.strand_component(&dec, 1) != arr.strand_component(&dec, 2))
}

/// Minimal essential bridge crossings with mu: half the geometric
/// intersection number of gamma with mu.
pub fn bridge_i(dg: &HeegaardDiagram, eta: &Eyeglass, mu: &NormalCurve) -> Result<u64, Error> {
    lens_overlay(dg, eta, mu)?;
    let x = intersection_number(&dg.tri, &eta.gamma.w, &mu.w)?;
    debug_assert_eq!(x % 2, 0);
    Ok(x / 2)
}

/// Split a band-summed lens: given b = b1 #_band b2, produce eyeglasses
/// eta1 = (a,b1,.), eta2 = (a,b2,.) with T_eta = T_eta1 . T_eta2, verified on
/// the battery.  Connector choices are search indices; identity failure is an
/// error.
#[allow(clippy::too_many_arguments)]
pub fn split_lens(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    a: &NormalCurve,
    b1: &NormalCurve,
    b2: &NormalCurve,
    band_skip: usize,
    bridge_skip: usize,
    s1: usize,
    s2: usize,
) -> Result<(Eyeglass, Eyeglass, Eyeglass), Error> {
    let b = band_sum(&dg.tri, b1, b2, band_skip)?;
    let eta = make_eyeglass(dg, a, &b, bridge_skip)?;
    let eta1 = make_eyeglass_walled(dg, a, b1, b2, 0, s1)?;
    let eta2 = make_eyeglass_walled(dg, a, b2, b1, 0, s2)?;
    // Lantern configuration inside the 4-holed sphere bounded by a, b1, b2,
    // gamma: gamma_i must stay clear of gamma and of the other lens, and the
    // two inner curves cross exactly twice.  Cheap to test, and without it the
    // twist identity has no chance.
    let tri = &dg.tri;
    if intersection_number(tri, &eta1.gamma.w, &eta.gamma.w)? != 0
        || intersection_number(tri, &eta2.gamma.w, &eta.gamma.w)? != 0
        || intersection_number(tri, &eta1.gamma.w, &b2.w)? != 0
        || intersection_number(tri, &eta2.gamma.w, &b1.w)? != 0
        || intersection_number(tri, &eta1.gamma.w, &eta2.gamma.w)? != 2
    {
        return Err(Error::Invalid("connectors not in lantern position".into()));
    }
    let t = eyeglass_twist(&dg.tri, &eta, 1).realized;
    let t12 = eyeglass_twist(&dg.tri, &eta1, 1)
        .realized
        .compose(&eyeglass_twist(&dg.tri, &eta2, 1).realized);
    if equals(&t, &t12, &orc.h1, &orc.bat)? {
        return Ok((eta, eta1, eta2));
    }
    // The lantern relation fixes the cyclic order of the inner curves; the
    // other order is the same split with the factors swapped.
    let t21 = eyeglass_twist(&dg.tri, &eta2, 1)
        .realized
        .compose(&eyeglass_twist(&dg.tri, &eta1, 1).realized);
    if equals(&t, &t21, &orc.h1, &orc.bat)? {
        return Ok((eta, eta2, eta1));
    }
    Err(Error::Internal("split identity T_eta = T_eta1 . T_eta2 failed".into()))
}

/// Search small connector indices for a verified split of (a, b1, b2).
pub fn find_split(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    a: &NormalCurve,
    b1: &NormalCurve,
    b2: &NormalCurve,
    budget: usize,
) -> Result<(usize, usize, usize, usize), Error> {
    let mut tried = 0usize;
    for total in 0..8usize {
        for band_skip in 0..=total {
            for bridge_skip in 0..=(total - band_skip) {
                for s1 in 0..=(total - band_skip - bridge_skip) {
                    let s2 = total - band_skip - bridge_skip - s1;
                    tried += 1;
                    if tried > budget {
                        return Err(Error::Budget(format!("no split found in {budget} tries")));
                    }
                    if split_lens(dg, orc, a, b1, b2, band_skip, bridge_skip, s1, s2).is_ok() {
                        return Ok((band_skip, bridge_skip, s1, s2));
                    }
                }
            }
        }
    }
    Err(Error::Budget(format!("no split found in {tried} tries")))
}

/// Full battery form of the Lemma 3.4 conjugation certificate.
pub fn conjugation_certificate(
    dg: &HeegaardDiagram,
    orc: &Oracle,
    eta: &Eyeglass,
    phi2: &MappingClass,
    next: &Eyeglass,
) -> Result<bool, Error> {
    let lhs = eyeglass_twist(&dg.tri, eta, 1).realized;
    let rhs = phi2
        .inverse()
        .compose(&eyeglass_twist(&dg.tri, next, 1).realized)
        .compose(phi2);
    equals(&lhs, &rhs, &orc.h1, &orc.bat)
}

/// One Lemma 3.8 step: find eta' with a once-crossing bridge, return
/// phi2 = T_eta'^{+-1} together with eta_next = phi2(eta) of strictly smaller
/// bridge intersection, and verify the conjugation certificate.
pub fn reduce_bridge(
    dg: &HeegaardDiagram,
    eta: &Eyeglass,
    mu: &NormalCurve,
) -> Result<(MappingClass, Eyeglass), Error> {
    if !separates(dg, eta, mu)? {
        return Err(Error::Invalid("reducing curve must separate the lenses".into()));
    }
    let k = bridge_i(dg, eta, mu)?;
    if k < 2 {
        return Err(Error::Invalid(format!("bridge intersection {k}, nothing to reduce")));
    }
    for skip in 0..6usize {
        let gamma2 = match neighborhood_boundary_opts(&dg.tri, &eta.a, &eta.b, Some((mu, 1)), skip)
        {
            Ok(g) => g,
            Err(_) => break,
        };
        let eta2 = Eyeglass { a: eta.a.clone(), b: eta.b.clone(), gamma: gamma2 };
        for sign in [-1i8, 1] {
            let phi2 = eyeglass_twist(&dg.tri, &eta2, sign).realized;
            let next = apply_eyeglass(&phi2, eta)?;
            if bridge_i(dg, &next, mu)? >= k {
                continue;
            }
            // Lemma 3.4 certificate at the curve level: phi2 fixes both
            // lenses and carries gamma to gamma_next, so by twist naturality
            // T_eta = phi2^-1 . T_{phi2(eta)} . phi2.
            if phi2.apply(&eta.a)? != eta.a
                || phi2.apply(&eta.b)? != eta.b
                || phi2.inverse().apply(&next.gamma)? != eta.gamma
            {
                return Err(Error::Internal("conjugation certificate failed".into()));
            }
            return Ok((phi2, next));
        }
    }
    Err(Error::Budget("no bridge-reducing twist found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heegaard::standard_diagram;

    #[test]
    fn construction_and_errors() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let d1 = &dg.v_system.curves[0];
        let e1 = &dg.w_system.curves[0];
        let e3 = &dg.w_system.curves[2];
        assert!(make_eyeglass(&dg, d1, e3, 0).is_ok());
        // e1 reads x1^2 against V: not a V-lens.
        assert!(make_eyeglass(&dg, e1, d1, 0).is_err());
        assert!(make_eyeglass(&dg, d1, d1, 0).is_err());
    }

    #[test]
    fn twist_algebra() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let h1 = H1::new(&dg.tri).unwrap();
        let bat = Battery::standard(&dg.tri).unwrap();
        let eta = make_eyeglass(&dg, &dg.v_system.curves[0], &dg.w_system.curves[2], 0).unwrap();
        let t = eyeglass_twist(&dg.tri, &eta, 1);
        assert_eq!(t.realized.apply(&eta.a).unwrap(), eta.a);
        assert_eq!(t.realized.apply(&eta.b).unwrap(), eta.b);
        let tbar = eyeglass_twist(&dg.tri, &eta, -1);
        let id = MappingClass::identity(&dg.tri);
        assert!(equals(&t.realized.compose(&tbar.realized), &id, &h1, &bat).unwrap());
        let tsw = eyeglass_twist(&dg.tri, &swap_lenses(&eta), 1);
        assert!(equals(&t.realized, &tsw.realized, &h1, &bat).unwrap());
    }

    #[test]
    fn separation_and_bridge() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let eta = make_eyeglass(&dg, &dg.v_system.curves[0], &dg.w_system.curves[2], 0).unwrap();
        assert!(separates(&dg, &eta, &dg.mu[0]).unwrap());
        let k = bridge_i(&dg, &eta, &dg.mu[0]).unwrap();
        assert_eq!(k % 2, 1);
        assert!(k >= 1);
        // mu_2 has both lenses on its genus-2 side.
        assert!(!separates(&dg, &eta, &dg.mu[1]).unwrap());
    }

    #[test]
    fn split_identity() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        let (bs, ks, s1, s2) =
            find_split(&dg, &orc, &dg.v_system.curves[0], &dg.w_system.curves[2], &dg.mu[1], 200)
                .unwrap();
        let (eta, eta1, eta2) = split_lens(
            &dg,
            &orc,
            &dg.v_system.curves[0],
            &dg.w_system.curves[2],
            &dg.mu[1],
            bs,
            ks,
            s1,
            s2,
        )
        .unwrap();
        assert_eq!(eta.a, eta1.a);
        assert_eq!(eta.a, eta2.a);
        assert_ne!(eta1.b, eta2.b);
    }

    #[test]
    fn reduce_bridge_step() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let a = &dg.v_system.curves[0];
        let b = &dg.w_system.curves[2];
        // Seed: push a bridge-1 eyeglass across mu_1 with another eyeglass
        // twist; the result has bridge intersection 3.
        let eta0 = make_eyeglass(&dg, a, b, 0).unwrap();
        let etap = make_eyeglass_walled(&dg, a, b, &dg.mu[0], 1, 1).unwrap();
        let phi = eyeglass_twist(&dg.tri, &etap, -1).realized;
        let mut eta = apply_eyeglass(&phi, &eta0).unwrap();
        let mut k = bridge_i(&dg, &eta, &dg.mu[0]).unwrap();
        assert_eq!(k, 3);
        while k > 1 {
            let (_, next) = reduce_bridge(&dg, &eta, &dg.mu[0]).unwrap();
            let k2 = bridge_i(&dg, &next, &dg.mu[0]).unwrap();
            assert!(k2 < k);
            eta = next;
            k = k2;
        }
        assert_eq!(k, 1);
    }
}
