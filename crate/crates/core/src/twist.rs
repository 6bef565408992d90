//! Dehn twists as combinatorial splices.  The twist curve is overlaid with
//! the target, and each crossing is replaced by a detour that runs once
//! around the twist curve, stacked by an exact radial coordinate so that all
//! detours spiral consistently.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_traits::Signed;

use crate::arr::{Arrangement, BKind};
use crate::drawing::{as_curve, Drawing, NodeId, NodeKind, NormalCurve};
use crate::geom::Pt;
use crate::homology::orient_strand;
use crate::reduce::reduce_strand;
use crate::tri::Triangulation;
use crate::Error;

/// Global handedness flip pinning "positive" to the convention whose induced
/// action on first homology of the torus is y -> y + <y,c> c with the basis
/// pairing <a,b> = +1.
const CAL: i64 = 1;

fn node_pt(arr: &Arrangement, t: usize, n: NodeId) -> Pt {
    for (k, p) in &arr.tris[t].bpts {
        if matches!(k, BKind::Node(m) if *m == n) {
            return p.clone();
        }
    }
    panic!("node not on triangle boundary");
}

/// Exact parameter of p along segment a->b, by the dominant coordinate.
fn seg_param(a: &Pt, b: &Pt, p: &Pt) -> num_rational::BigRational {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    if dx.abs() >= dy.abs() {
        (&p.x - &a.x) / dx
    } else {
        (&p.y - &a.y) / dy
    }
}

fn osign(a: &Pt, b: &Pt, c: &Pt) -> i64 {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    if v.is_positive() {
        1
    } else {
        -1
    }
}

struct Event {
    /// Index of the crossed twist-curve chord (cycle position).
    a: usize,
    /// Global rank among all events in cyclic order along the twist curve.
    rank: usize,
    /// Side of the twist curve the target approaches from (+1 = left).
    sigma: i64,
    /// Detour punctures, step 1..=K.
    nodes: Vec<NodeId>,
}

/// Image of curve `x` under the Dehn twist about `c`; `positive` selects the
/// handedness.
pub fn twist_curve(
    tri: &Rc<Triangulation>,
    x: &NormalCurve,
    c: &NormalCurve,
    positive: bool,
) -> Result<NormalCurve, Error> {
    if x == c {
        return Ok(x.clone());
    }
    let mut d = Drawing::trace(tri.clone(), &x.w, "x")?;
    let dc = Drawing::trace(tri.clone(), &c.w, "tw")?;
    let sc = d.merge(&dc);
    reduce_strand(&mut d, sc)?;
    if d.strand_nodes(sc).is_empty() {
        return Ok(x.clone());
    }
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(0, sc) == 0 {
        return Ok(x.clone());
    }

    let eps = if positive { CAL } else { -CAL };
    let ori = orient_strand(&d, sc);
    let cyc = d.cycle(sc);
    let kk = cyc.len();
    let pos_in_cyc: BTreeMap<NodeId, usize> =
        cyc.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    // Triangle crossed by the chord cyc[t] -> cyc[t+1].
    let chord_tri: Vec<usize> = (0..kk).map(|t| d.tri_of_slot(cyc[t], ori[&cyc[t]])).collect();

    // Collect crossings of sc with the target, keyed by the target chord.
    struct Raw {
        a: usize,
        tri: usize,
        cparam: num_rational::BigRational,
        tparam: num_rational::BigRational,
        pt: Pt,
    }
    let mut by_target: BTreeMap<(NodeId, NodeId), Vec<Raw>> = BTreeMap::new();
    for x in &arr.crossings {
        let (ic, it) = if x.strands == [sc, 0] {
            (0, 1)
        } else if x.strands == [0, sc] {
            (1, 0)
        } else {
            continue;
        };
        let ta = &arr.tris[x.tri];
        let cch = &ta.chords[x.chords[ic]];
        let tch = &ta.chords[x.chords[it]];
        let pt = ta.verts[x.vert].pt.clone();
        // Orient the twist chord along the canonical traversal.
        let u_slot = d.slot_in(cch.u, x.tri);
        let (from, to) = if ori[&cch.u] == u_slot { (cch.u, cch.v) } else { (cch.v, cch.u) };
        let (pf, ptv) = (node_pt(&arr, x.tri, from), node_pt(&arr, x.tri, to));
        let (tu, tv) = if tch.u < tch.v { (tch.u, tch.v) } else { (tch.v, tch.u) };
        let ptu = node_pt(&arr, x.tri, tu);
        let ptvv = node_pt(&arr, x.tri, tv);
        by_target.entry((tu, tv)).or_default().push(Raw {
            a: pos_in_cyc[&from],
            tri: x.tri,
            cparam: seg_param(&pf, &ptv, &pt),
            tparam: seg_param(&ptu, &ptvv, &pt),
            pt,
        });
    }

    // Global cyclic order of events along the twist curve fixes the spiral
    // interleaving; fractional positions are (rank+1)/(M+1).
    let mut order: Vec<(usize, num_rational::BigRational, (NodeId, NodeId), usize)> = Vec::new();
    for (key, v) in &by_target {
        for (i, r) in v.iter().enumerate() {
            order.push((r.a, r.cparam.clone(), *key, i));
        }
    }
    order.sort_by(|p, q| (p.0, &p.1).cmp(&(q.0, &q.1)));
    let mm = order.len();
    let mut rank_of: BTreeMap<((NodeId, NodeId), usize), usize> = BTreeMap::new();
    for (rank, o) in order.iter().enumerate() {
        rank_of.insert((o.2, o.3), rank);
    }

    // Build events in target-chord order, computing the approach side from
    // the previous point along the chord.
    let mut events: Vec<Event> = Vec::new();
    let mut chains: Vec<(NodeId, NodeId, usize, Vec<usize>)> = Vec::new();
    for (&(tu, tv), raws) in &mut by_target {
        let mut idxs: Vec<usize> = (0..raws.len()).collect();
        idxs.sort_by(|&i, &j| raws[i].tparam.cmp(&raws[j].tparam));
        let t0 = raws[0].tri;
        let mut prev_pt = node_pt(&arr, t0, tu);
        let mut chain = Vec::new();
        for &i in &idxs {
            let r = &raws[i];
            let cch_from = cyc[r.a];
            let cch_to = cyc[(r.a + 1) % kk];
            let pf = node_pt(&arr, r.tri, cch_from);
            let pv = node_pt(&arr, r.tri, cch_to);
            let sigma = osign(&pf, &pv, &prev_pt);
            chain.push(events.len());
            events.push(Event {
                a: r.a,
                rank: rank_of[&((tu, tv), i)],
                sigma,
                nodes: Vec::new(),
            });
            prev_pt = r.pt.clone();
        }
        chains.push((tu, tv, t0, chain));
    }

    // Radial key of event j at its i-th detour step, scaled by K*(M+1).
    let dd = (mm + 1) as i64;
    let key = |ev: &Event, i: usize| -> i64 {
        let delta = -eps * ev.sigma;
        let u_scaled = if delta > 0 {
            i as i64 * dd - (ev.rank as i64 + 1)
        } else {
            (ev.rank as i64 + 1) + (i as i64 - 1) * dd
        };
        ev.sigma * (kk as i64 * dd - 2 * u_scaled)
    };
    // Puncture visited at step i, and the triangle of the step chord i->i+1.
    let visit = |ev: &Event, i: usize| -> usize {
        let delta = -eps * ev.sigma;
        if delta > 0 {
            (ev.a + i) % kk
        } else {
            (ev.a + 1 + kk - (i % kk)) % kk
        }
    };
    let step_tri = |ev: &Event, i: usize| -> usize {
        let delta = -eps * ev.sigma;
        if delta > 0 {
            chord_tri[(ev.a + i) % kk]
        } else {
            chord_tri[(ev.a + kk - (i % kk)) % kk]
        }
    };

    // Passages per twist-curve puncture, then materialize stacked nodes.
    let mut passages: Vec<Vec<(i64, usize, usize)>> = vec![Vec::new(); kk];
    for (j, ev) in events.iter().enumerate() {
        for i in 1..=kk {
            passages[visit(ev, i)].push((key(ev, i), j, i));
        }
    }
    for ev in events.iter_mut() {
        ev.nodes = vec![usize::MAX; kk];
    }
    for q in 0..kk {
        let host = cyc[q];
        let e = d.node(host).edge;
        let out_tri = d.tri_of_slot(host, ori[&host]);
        // +1 when the edge's forward direction points to the left of the
        // twist curve at this puncture.  The curve exits into the dir=+1
        // triangle exactly when it crosses the edge left-to-right.
        let chi: i64 = if d.tri.incs[e][0].tri == out_tri { -1 } else { 1 };
        let mut above: Vec<(i64, usize, usize)> = Vec::new();
        let mut below: Vec<(i64, usize, usize)> = Vec::new();
        for &p in &passages[q] {
            if (p.0 > 0) == (chi == 1) {
                above.push(p);
            } else {
                below.push(p);
            }
        }
        // Insert farthest-first so the nearest passage ends adjacent.
        above.sort_by_key(|p| -p.0.abs());
        below.sort_by_key(|p| -p.0.abs());
        for &(_, j, i) in &below {
            let idx = d.pos(host);
            let n = d.new_node_at(e, idx, 0, NodeKind::Puncture);
            events[j].nodes[i - 1] = n;
        }
        for &(_, j, i) in &above {
            let idx = d.pos(host);
            let n = d.new_node_at(e, idx + 1, 0, NodeKind::Puncture);
            events[j].nodes[i - 1] = n;
        }
    }

    // Link detour chords.
    for ev in &events {
        for i in 1..kk {
            d.link_in(ev.nodes[i - 1], ev.nodes[i], step_tri(ev, i));
        }
    }
    // Rewire each target chord through its detours.
    for (tu, tv, t0, chain) in &chains {
        let mut prev = *tu;
        for &j in chain {
            d.link_in(prev, events[j].nodes[0], *t0);
            prev = events[j].nodes[kk - 1];
        }
        d.link_in(prev, *tv, *t0);
    }

    d.delete_strand(sc);
    d.normalize_all();
    as_curve(tri, &d.weights_of(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::slope_curve;
    use crate::reduce::intersection_number;
    use crate::tri::build_genus_surface;

    #[test]
    fn torus_twist_slopes() {
        let tri = Rc::new(build_genus_surface(1).unwrap());
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 0, 1, 0).unwrap();
        // tau_a^{+-}(b) is a (1, +-1) curve: still meets b once, meets a once.
        for positive in [true, false] {
            let tb = twist_curve(&tri, &b, &a, positive).unwrap();
            assert_eq!(intersection_number(&tri, &tb.w, &b.w).unwrap(), 1);
            assert_eq!(intersection_number(&tri, &tb.w, &a.w).unwrap(), 1);
            assert_ne!(tb, b);
        }
        let tp = twist_curve(&tri, &b, &a, true).unwrap();
        let tm = twist_curve(&tri, &b, &a, false).unwrap();
        assert_ne!(tp, tm);
        // Twisting back recovers b.
        assert_eq!(twist_curve(&tri, &tp, &a, false).unwrap(), b);
        assert_eq!(twist_curve(&tri, &tm, &a, true).unwrap(), b);
        // tau_a fixes a and iterates: i(tau_a^2(b), b) = 2.
        assert_eq!(twist_curve(&tri, &a, &a, true).unwrap(), a);
        let t2 = twist_curve(&tri, &tp, &a, true).unwrap();
        assert_eq!(intersection_number(&tri, &t2.w, &b.w).unwrap(), 2);
    }

    #[test]
    fn torus_twist_matches_slope_arithmetic() {
        let tri = Rc::new(build_genus_surface(1).unwrap());
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 0, 1, 0).unwrap();
        // Image of (2,1) under tau_a has slope (2, 1 -+ 2) up to sign; check
        // intersection numbers against both generators.
        let c = slope_curve(&tri, 0, 2, 1).unwrap();
        for positive in [true, false] {
            let tc = twist_curve(&tri, &c, &a, positive).unwrap();
            assert_eq!(intersection_number(&tri, &tc.w, &a.w).unwrap(), 2);
            let q = if positive ^ (CAL == 1) { 3 } else { 1 };
            let _ = q;
            let ib = intersection_number(&tri, &tc.w, &b.w).unwrap();
            assert!(ib == 1 || ib == 3, "got {ib}");
        }
        let tp = twist_curve(&tri, &c, &a, true).unwrap();
        let tm = twist_curve(&tri, &c, &a, false).unwrap();
        let ip = intersection_number(&tri, &tp.w, &b.w).unwrap();
        let im = intersection_number(&tri, &tm.w, &b.w).unwrap();
        assert_eq!(ip + im, 4, "one direction gives slope q=3, the other q=1");
    }

    #[test]
    fn genus3_twist_localizes() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let a1 = slope_curve(&tri, 0, 0, 1).unwrap();
        let b1 = slope_curve(&tri, 0, 1, 0).unwrap();
        let b2 = slope_curve(&tri, 1, 1, 0).unwrap();
        let tb = twist_curve(&tri, &b1, &a1, true).unwrap();
        assert_eq!(intersection_number(&tri, &tb.w, &b1.w).unwrap(), 1);
        // A twist about a disjoint curve is the identity.
        assert_eq!(twist_curve(&tri, &b2, &a1, true).unwrap(), b2);
    }
}
