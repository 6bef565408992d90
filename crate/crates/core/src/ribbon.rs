//! Curve surgery: the boundary of a regular neighborhood of two disjoint
//! curves joined by a connector arc (equivalently, the band sum of their
//! push-offs).  The connector is found by a deterministic search over the
//! complement cells; callers pick alternatives via `skip` and may constrain
//! how often the connector crosses a third "wall" curve.

use std::collections::{BTreeMap, VecDeque};
use std::rc::Rc;

use crate::arr::{AEKind, Arrangement, BKind};
use crate::drawing::{as_curve, curve_components, Drawing, NodeId, NodeKind, NormalCurve};
use crate::geom::{orient, Pt};
use crate::homology::orient_strand;
use crate::reduce::reduce_strand;
use crate::tri::Triangulation;
use crate::Error;

/// One edge crossing of the connector: the gap interval and the triangle
/// entered across it.
#[derive(Debug, Clone)]
struct Hop {
    edge: usize,
    seg: usize,
    tri: usize,
}

#[derive(Debug, Clone)]
struct Candidate {
    /// (cell, wall pos) of the junction chord on each lens.
    start: (usize, usize),
    end: (usize, usize),
    hops: Vec<Hop>,
}

/// Enumerate connector paths from a chord of `sa` to a chord of `sb` crossing
/// the walls of `sw` exactly `k` times, shortest first, deterministic.
fn connectors(
    arr: &Arrangement,
    sa: usize,
    sb: usize,
    sw: Option<usize>,
    k: usize,
) -> Vec<Candidate> {
    let lowest_wall = |cell: usize, s: usize| -> Option<usize> {
        (0..arr.cell_cycle(cell).len()).find(|&pos| arr.wall_strand(cell, pos) == Some(s))
    };
    // State = (cell, wall crossings used).
    let idx = |cell: usize, used: usize| cell * (k + 1) + used;
    let mut prev: Vec<Option<(usize, Option<Hop>)>> = vec![None; arr.ncells * (k + 1)];
    let mut seeded = vec![false; arr.ncells * (k + 1)];
    let mut queue = VecDeque::new();
    let mut start_of: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for cell in 0..arr.ncells {
        if let Some(pos) = lowest_wall(cell, sa) {
            let s = idx(cell, 0);
            seeded[s] = true;
            start_of.insert(cell, (cell, pos));
            queue.push_back(s);
        }
    }
    while let Some(st) = queue.pop_front() {
        let (cell, used) = (st / (k + 1), st % (k + 1));
        for pos in 0..arr.cell_cycle(cell).len() {
            let (nxt, hop) = match arr.wall_strand(cell, pos) {
                None => {
                    let (c2, _) = arr.arc_twin_pub(cell, pos);
                    let AEKind::Arc { edge, seg, .. } = arr.edge_of(cell, pos).kind else {
                        unreachable!()
                    };
                    (idx(c2, used), Some(Hop { edge, seg, tri: arr.cell_tri(c2) }))
                }
                Some(s) if Some(s) == sw => {
                    if used == k {
                        continue;
                    }
                    let (c2, _) = arr.sub_twin_pub(cell, pos);
                    (idx(c2, used + 1), None)
                }
                Some(_) => continue, // lens chords block the connector interior
            };
            if seeded[nxt] || prev[nxt].is_some() {
                continue;
            }
            prev[nxt] = Some((st, hop));
            queue.push_back(nxt);
        }
    }
    let mut out = Vec::new();
    for cell in 0..arr.ncells {
        let st = idx(cell, k);
        if !(seeded[st] || prev[st].is_some()) {
            continue;
        }
        let Some(endpos) = lowest_wall(cell, sb) else { continue };
        // Backtrack.
        let mut hops = Vec::new();
        let mut cur = st;
        loop {
            if seeded[cur] {
                break;
            }
            let (p, hop) = prev[cur].clone().unwrap();
            if let Some(h) = hop {
                hops.push(h);
            }
            cur = p;
        }
        hops.reverse();
        let scell = cur / (k + 1);
        out.push(Candidate { start: start_of[&scell], end: (cell, endpos), hops });
    }
    out
}

/// Left triangle of an edge (interior left of the edge-forward direction).
fn t_left(tri: &Triangulation, edge: usize) -> usize {
    tri.incs[edge][0].tri
}

struct Lens {
    cyc: Vec<NodeId>,
    /// Per cyclic index: chord triangle to the next node and the out-triangle
    /// at the node itself.
    chord_tri: Vec<usize>,
    out_tri: Vec<usize>,
    /// Junction side: true = connector leaves on the oriented left.
    left: bool,
}

fn lens_data(
    d: &Drawing,
    arr: &Arrangement,
    s: usize,
    junction: (usize, usize),
) -> Result<Lens, Error> {
    let (cell, pos) = junction;
    let ti = arr.cell_tri(cell);
    let de = arr.cell_cycle(cell)[pos];
    let AEKind::Sub { chord, .. } = arr.tris[ti].edges[de.e].kind else {
        return Err(Error::Internal("junction is not a chord wall".into()));
    };
    let ch = &arr.tris[ti].chords[chord];
    let ori = orient_strand(d, s);
    let succ = |n: NodeId| d.node(n).link[ori[&n]].unwrap();
    // Orient the junction chord along the strand: last -> first.
    let (last, first) = if succ(ch.u) == ch.v { (ch.u, ch.v) } else { (ch.v, ch.u) };
    let mut cyc = d.cycle(s);
    let at = cyc.iter().position(|&n| n == first).unwrap();
    cyc.rotate_left(at);
    debug_assert!(cyc.len() < 2 || cyc[1] == succ(first));
    let kk = cyc.len();
    let chord_tri: Vec<usize> = (0..kk).map(|i| d.tri_of_slot(cyc[i], ori[&cyc[i]])).collect();
    let out_tri: Vec<usize> = chord_tri.clone();
    // Side of the junction cell relative to the oriented chord.
    let pl = arr.node_pt(ti, last);
    let pf = arr.node_pt(ti, first);
    let mut left = None;
    for de2 in arr.cell_cycle(cell) {
        let ae = &arr.tris[ti].edges[de2.e];
        for v in [ae.a, ae.b] {
            let p = &arr.tris[ti].verts[v].pt;
            match orient(&pl, &pf, p) {
                1 => left = Some(true),
                -1 => left = Some(false),
                _ => continue,
            }
            break;
        }
        if left.is_some() {
            break;
        }
    }
    Ok(Lens { cyc, chord_tri, out_tri, left: left.expect("junction cell has off-chord points") })
}

/// Parallel-copy punctures of a lens for the neighborhood boundary, keyed by
/// original node.  Copies hug the originals on the junction side.
fn insert_copies(d: &mut Drawing, lens: &Lens, g: usize) -> BTreeMap<NodeId, NodeId> {
    let mut copy = BTreeMap::new();
    for (i, &n) in lens.cyc.iter().enumerate() {
        let e = d.node(n).edge;
        // Oriented left side of the lens sits below the node exactly when the
        // lens exits into the edge's left triangle.
        let left_below = lens.out_tri[i] == t_left(&d.tri, e);
        let above = lens.left != left_below;
        let idx = if above { d.pos(n) + 1 } else { d.pos(n) };
        copy.insert(n, d.new_node_at(e, idx, g, NodeKind::Puncture));
    }
    copy
}

/// Ordered copy list along the boundary walk (the K-on-left traversal):
/// reversed when the junction is on the oriented left.
fn walk_order(lens: &Lens, copy: &BTreeMap<NodeId, NodeId>) -> (Vec<NodeId>, Vec<usize>) {
    let kk = lens.cyc.len();
    let mut nodes = Vec::with_capacity(kk);
    let mut tris = Vec::with_capacity(kk.saturating_sub(1));
    if lens.left {
        // Reverse traversal: n_{K-1}, ..., n_0.
        for i in (0..kk).rev() {
            nodes.push(copy[&lens.cyc[i]]);
        }
        for i in (1..kk).rev() {
            tris.push(lens.chord_tri[i - 1]);
        }
    } else {
        for i in 0..kk {
            nodes.push(copy[&lens.cyc[i]]);
        }
        for i in 0..kk - 1 {
            tris.push(lens.chord_tri[i]);
        }
    }
    (nodes, tris)
}

fn build_gamma(
    d: &mut Drawing,
    arr: &Arrangement,
    sa: usize,
    sb: usize,
    cand: &Candidate,
) -> Result<usize, Error> {
    let la = lens_data(d, arr, sa, cand.start)?;
    let lb = lens_data(d, arr, sb, cand.end)?;
    let t_a = arr.cell_tri(cand.start.0);
    let t_b = arr.cell_tri(cand.end.0);
    let g = d.add_strand("nbhd", true);

    // Connector copies first, so lens copies inserted later hug the originals.
    // Hop segments refer to the pre-insertion edge orders: anchor to the
    // original neighbor below the interval.
    let pre_order = d.order.clone();
    let mut outbound = Vec::new(); // right-side copies, alpha -> beta
    let mut back = Vec::new(); // left-side copies, same index order
    for h in &cand.hops {
        let left_above = h.tri != t_left(&d.tri, h.edge);
        let lower_anchor: Option<NodeId> = if h.seg > 0 {
            Some(pre_order[h.edge][h.seg - 1])
        } else {
            None
        };
        let base = lower_anchor.map_or(0, |n| d.pos(n) + 1);
        let lo = d.new_node_at(h.edge, base, g, NodeKind::Puncture);
        let hi = d.new_node_at(h.edge, base + 1, g, NodeKind::Puncture);
        let (l, r) = if left_above { (hi, lo) } else { (lo, hi) };
        outbound.push(r);
        back.push(l);
    }

    let ca = insert_copies(d, &la, g);
    let cb = insert_copies(d, &lb, g);
    let (an, at) = walk_order(&la, &ca);
    let (bn, bt) = walk_order(&lb, &cb);

    // Assemble the cycle: alpha copy, outbound connector, beta copy, return
    // connector; chord triangles alongside.
    let mut nodes = Vec::new();
    let mut tris = Vec::new();
    nodes.extend(&an);
    tris.extend(&at);
    tris.push(t_a);
    nodes.extend(&outbound);
    for i in 0..cand.hops.len().saturating_sub(1) {
        tris.push(cand.hops[i].tri);
    }
    if !cand.hops.is_empty() {
        tris.push(t_b);
    }
    nodes.extend(&bn);
    tris.extend(&bt);
    tris.push(t_b);
    nodes.extend(back.iter().rev());
    for i in (1..cand.hops.len()).rev() {
        tris.push(cand.hops[i - 1].tri);
    }
    if !cand.hops.is_empty() {
        tris.push(t_a);
    }
    debug_assert_eq!(nodes.len(), tris.len());
    for i in 0..nodes.len() {
        d.link_in(nodes[i], nodes[(i + 1) % nodes.len()], tris[i]);
    }
    Ok(g)
}

fn gamma_of_candidate(
    tri: &Rc<Triangulation>,
    a: &NormalCurve,
    b: &NormalCurve,
    wall: Option<&NormalCurve>,
    k: usize,
    cand: &Candidate,
    d0: &Drawing,
    arr0: &Arrangement,
) -> Result<NormalCurve, Error> {
    let mut d = d0.clone();
    let g = build_gamma(&mut d, arr0, 0, 1, cand)?;
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(g, 0) != 0
        || arr.crossing_count(g, 1) != 0
        || arr.crossing_count(g, g) != 0
    {
        return Err(Error::Internal("neighborhood boundary not embedded".into()));
    }
    if wall.is_some() {
        let sw = 2;
        if arr.crossing_count(g, sw) != 2 * k {
            return Err(Error::Internal("connector wall count off".into()));
        }
    }
    let _ = (tri, a, b);
    for s in (0..d.strands.len()).filter(|&s| s != g) {
        d.delete_strand(s);
    }
    d.normalize_all();
    let c = as_curve(tri, &d.weights_of(g))?;
    if curve_components(tri, &c.multi())?.len() != 1 {
        return Err(Error::Internal("neighborhood boundary disconnected".into()));
    }
    Ok(c)
}

/// gamma = third boundary component of a regular neighborhood of
/// `a` ∪ connector ∪ `b`.  With `wall = Some((w, k))` the connector crosses
/// the curve w exactly k times.  `skip` picks among the enumerated
/// connectors, in deterministic order; candidates whose straight-chord
/// realization fails verification are skipped.
pub fn neighborhood_boundary_opts(
    tri: &Rc<Triangulation>,
    a: &NormalCurve,
    b: &NormalCurve,
    wall: Option<(&NormalCurve, usize)>,
    skip: usize,
) -> Result<NormalCurve, Error> {
    let mut d = Drawing::trace(tri.clone(), &a.w, "a")?;
    let db = Drawing::trace(tri.clone(), &b.w, "b")?;
    let sb = d.merge(&db);
    reduce_strand(&mut d, sb)?;
    if d.strand_nodes(sb).is_empty() || d.strand_nodes(0).is_empty() {
        return Err(Error::Invalid("lens curves must be essential".into()));
    }
    let mut k = 0;
    if let Some((w, kk)) = wall {
        let dw = Drawing::trace(tri.clone(), &w.w, "wall")?;
        let sw = d.merge(&dw);
        reduce_strand(&mut d, sw)?;
        let arr = Arrangement::build(&d)?;
        if arr.crossing_count(0, sw) != 0 || arr.crossing_count(sb, sw) != 0 {
            return Err(Error::Invalid("lenses must be disjoint from the wall".into()));
        }
        k = kk;
    }
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(0, sb) != 0 {
        return Err(Error::Invalid("lens curves must be disjoint".into()));
    }
    let sw = wall.map(|_| 2usize);
    let cands = connectors(&arr, 0, sb, sw, k);
    if cands.is_empty() {
        return Err(Error::Budget("no connector found".into()));
    }
    let mut passed = 0usize;
    let mut last_err = None;
    for cand in &cands {
        match gamma_of_candidate(tri, a, b, wall.map(|(w, _)| w), k, cand, &d, &arr) {
            Ok(c) => {
                if passed == skip {
                    return Ok(c);
                }
                passed += 1;
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::Budget(format!("only {passed} connectors, skip={skip}"))))
}

pub fn neighborhood_boundary(
    tri: &Rc<Triangulation>,
    a: &NormalCurve,
    b: &NormalCurve,
    skip: usize,
) -> Result<NormalCurve, Error> {
    neighborhood_boundary_opts(tri, a, b, None, skip)
}

/// Band sum of two disjoint curves along a connector: same resolution as the
/// neighborhood boundary.
pub fn band_sum(
    tri: &Rc<Triangulation>,
    b1: &NormalCurve,
    b2: &NormalCurve,
    skip: usize,
) -> Result<NormalCurve, Error> {
    neighborhood_boundary(tri, b1, b2, skip)
}

/// Boundary of a regular neighborhood of a ∪ b for a once-crossing pair:
/// the separating commutator curve around the handle spanned by a and b.
pub fn wedge_boundary(
    tri: &Rc<Triangulation>,
    a: &NormalCurve,
    b: &NormalCurve,
) -> Result<NormalCurve, Error> {
    let mut d = Drawing::trace(tri.clone(), &a.w, "a")?;
    let db = Drawing::trace(tri.clone(), &b.w, "b")?;
    let sb = d.merge(&db);
    reduce_strand(&mut d, sb)?;
    let arr = Arrangement::build(&d)?;
    if arr.crossing_count(0, sb) != 1 {
        return Err(Error::Invalid("wedge boundary needs i(a,b) = 1".into()));
    }
    let x = arr
        .crossings
        .iter()
        .find(|c| c.strands == [0, sb] || c.strands == [sb, 0])
        .unwrap()
        .clone();
    let t_x = x.tri;
    let g = d.add_strand("wedge", true);

    // Both-side parallel copies of every node, hugging the originals.
    let mut cl: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut cr: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut clo: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut chi: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut oris = Vec::new();
    for s in [0, sb] {
        let ori = orient_strand(&d, s);
        for n in d.strand_nodes(s) {
            let e = d.node(n).edge;
            let left_below = d.tri_of_slot(n, ori[&n]) == t_left(&d.tri, e);
            let lo = d.new_node_at(e, d.pos(n), g, NodeKind::Puncture);
            let hi = d.new_node_at(e, d.pos(n) + 1, g, NodeKind::Puncture);
            let (l, r) = if left_below { (lo, hi) } else { (hi, lo) };
            cl.insert(n, l);
            cr.insert(n, r);
            clo.insert(n, lo);
            chi.insert(n, hi);
        }
        oris.push(ori);
    }
    // Oriented crossing chords u1 -> u2 (on a) and v1 -> v2 (on b).
    let coriented = |ci: usize, ori: &BTreeMap<NodeId, usize>| -> (NodeId, NodeId) {
        let ch = &arr.tris[t_x].chords[ci];
        // The successor test alone is ambiguous for two-node curves whose
        // chords share endpoints, so also require the chord to leave ch.u
        // into t_x.
        let out = d.tri_of_slot(ch.u, ori[&ch.u]) == t_x
            && d.node(ch.u).link[ori[&ch.u]] == Some(ch.v);
        if out {
            (ch.u, ch.v)
        } else {
            (ch.v, ch.u)
        }
    };
    let (ia, ib) = if x.strands == [0, sb] { (0, 1) } else { (1, 0) };
    let (u1, u2) = coriented(x.chords[ia], &oris[0]);
    let (v1, v2) = coriented(x.chords[ib], &oris[1]);
    // Parallel copy chords away from the crossing.
    for (si, s) in [0usize, sb].into_iter().enumerate() {
        let ori = &oris[si];
        let c1 = if s == 0 { u1 } else { v1 };
        for n in d.strand_nodes(s) {
            if n == c1 {
                continue; // crossing chord handled by the junction
            }
            let m = d.node(n).link[ori[&n]].unwrap();
            let t = d.tri_of_slot(n, ori[&n]);
            d.link_in(cl[&n], cl[&m], t);
            d.link_in(cr[&n], cr[&m], t);
        }
    }
    // Junction: four quadrant chords.  Each pair (u_i, v_j) joins the copy of
    // u_i on the side of a facing v_j with the copy of v_j on the side of b
    // facing u_i.  Sides are measured in the chart of t_x: the boundary
    // neighbor of a node toward lower edge positions probes the side of the
    // node's lo copy (all boundary points sit on the unit circle, so the
    // probe is never collinear with a chord).
    let pt = |n: NodeId| arr.node_pt(t_x, n);
    let (pu1, pu2, pv1, pv2) = (pt(u1), pt(u2), pt(v1), pt(v2));
    let lo_side = |n: NodeId, ps: &Pt, pe: &Pt| -> i8 {
        let ta = &arr.tris[t_x];
        let k = ta
            .bpts
            .iter()
            .position(|(kk, _)| matches!(kk, BKind::Node(m) if *m == n))
            .unwrap();
        let e = d.node(n).edge;
        let dir = d.tri.incs[e][d.tri.inc_in(e, t_x)].dir;
        let k2 = if dir == 1 { k - 1 } else { (k + 1) % ta.bpts.len() };
        orient(ps, pe, &ta.bpts[k2].1)
    };
    let pick = |n: NodeId, ps: &Pt, pe: &Pt, want: i8| -> NodeId {
        if lo_side(n, ps, pe) == want {
            clo[&n]
        } else {
            chi[&n]
        }
    };
    let mut junction = Vec::new();
    for ui in [u1, u2] {
        for vj in [v1, v2] {
            let au = pick(ui, &pu1, &pu2, orient(&pu1, &pu2, &pt(vj)));
            let bv = pick(vj, &pv1, &pv2, orient(&pv1, &pv2, &pt(ui)));
            junction.push((au, bv));
        }
    }
    for (au, bv) in junction {
        d.link_in(au, bv, t_x);
    }
    let arr2 = Arrangement::build(&d)?;
    let (xa, xb, xg) =
        (arr2.crossing_count(g, 0), arr2.crossing_count(g, sb), arr2.crossing_count(g, g));
    if (xa, xb, xg) != (0, 0, 0) {
        return Err(Error::Internal(format!("wedge boundary not embedded: {xa} {xb} {xg}")));
    }
    d.delete_strand(0);
    d.delete_strand(sb);
    d.normalize_all();
    let c = as_curve(tri, &d.weights_of(g))?;
    if curve_components(tri, &c.multi())?.len() != 1 {
        return Err(Error::Internal("wedge boundary disconnected".into()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::H1;
    use crate::path::slope_curve;
    use crate::reduce::intersection_number;
    use crate::tri::build_genus_surface;

    fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn neg(a: &[i64]) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    #[test]
    fn band_of_two_handles() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 1, 0, 1).unwrap();
        let g = neighborhood_boundary(&tri, &a, &b, 0).unwrap();
        assert_eq!(intersection_number(&tri, &g.w, &a.w).unwrap(), 0);
        assert_eq!(intersection_number(&tri, &g.w, &b.w).unwrap(), 0);
        let (ca, cb, cg) =
            (h1.class_of(&a).unwrap(), h1.class_of(&b).unwrap(), h1.class_of(&g).unwrap());
        let sums =
            [vec_add(&ca, &cb), vec_sub(&ca, &cb), neg(&vec_add(&ca, &cb)), vec_sub(&cb, &ca)];
        assert!(sums.contains(&cg), "gamma class {cg:?} not a lens sum");
        assert!(cg.iter().any(|&x| x != 0));
    }

    #[test]
    fn wedge_is_separating() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let h1 = H1::new(&tri).unwrap();
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 0, 1, 0).unwrap();
        let g = wedge_boundary(&tri, &a, &b).unwrap();
        assert!(g.w.iter().any(|&x| x != 0));
        assert_eq!(intersection_number(&tri, &g.w, &a.w).unwrap(), 0);
        assert_eq!(intersection_number(&tri, &g.w, &b.w).unwrap(), 0);
        assert!(h1.class_of(&g).unwrap().iter().all(|&x| x == 0));
        // Cutting along it leaves a genus 1 and a genus 2 piece.
        let d = Drawing::trace(tri.clone(), &g.w, "m").unwrap();
        let arr = Arrangement::build(&d).unwrap();
        let dec = arr.cut_components(&[0]);
        assert_eq!(dec.ncomps, 2);
        let mut gs: Vec<i64> = (0..2).map(|c| arr.cut_genus(&dec, c)).collect();
        gs.sort();
        assert_eq!(gs, vec![1, 2]);
    }

    #[test]
    fn band_same_handle_slopes() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 2, 1, 0).unwrap();
        let g = band_sum(&tri, &a, &b, 0).unwrap();
        assert_eq!(intersection_number(&tri, &g.w, &a.w).unwrap(), 0);
        assert_eq!(intersection_number(&tri, &g.w, &b.w).unwrap(), 0);
    }
}
