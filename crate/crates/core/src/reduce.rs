//! Bigon reduction: isotope one movable strand to minimal position with
//! respect to everything else by pushing it across innermost bigons.
//!
//! A bigon is a disk region whose boundary walk has exactly two corners where
//! ownership switches between the movable strand and the rest; complement
//! regions have empty interior, so such regions are automatically innermost
//! and each push removes exactly two crossings and adds none.

use std::rc::Rc;

use crate::arr::{AEKind, Arrangement, Step};
use crate::drawing::{Drawing, NodeId, NodeKind};
use crate::tri::Triangulation;
use crate::Error;

/// Where a route puncture goes on its edge.  The pushed strand lands on the
/// far side of the other run, so punctures anchor to the traversed target
/// puncture on the side away from the bigon region.
enum GapAnchor {
    /// Traversed target puncture; `region_below` tells which side the bigon
    /// interval was on.
    Beside { p: NodeId, region_below: bool },
    /// Corner teleport: nearest surviving neighbor, insert below/above it,
    /// or a raw index when the edge has no surviving punctures.
    Neighbor { n: NodeId, above: bool },
    Raw { idx: usize },
}

struct Gap {
    edge: usize,
    anchor: GapAnchor,
    /// Triangle of the chord towards the next route node.
    tri: usize,
}

struct Bigon {
    /// Surviving movable-strand endpoints: route runs v0 -> gaps -> u0.
    u0: NodeId,
    v0: NodeId,
    t_x1: usize,
    t_x2: usize,
    deleted: Vec<NodeId>,
    gaps: Vec<Gap>,
    /// Both corners sit on one movable chord and the m-run wraps the whole
    /// strand; the push replaces the strand by a closed route loop.
    wrap: bool,
}

fn chord_of(arr: &Arrangement, cell: usize, pos: usize) -> Option<(usize, usize, bool)> {
    // (tri, chord index, fwd) of a Sub wall piece.
    let ti = arr.cell_tri(cell);
    let de = arr.cell_cycle(cell)[pos];
    match arr.tris[ti].edges[de.e].kind {
        AEKind::Sub { chord, .. } => Some((ti, chord, de.fwd)),
        _ => None,
    }
}

fn find_bigon(d: &Drawing, arr: &Arrangement, m: usize) -> Option<Bigon> {
    for region in 0..arr.nregions {
        let walks = arr.region_walks(region);
        if walks.len() != 1 {
            continue;
        }
        let steps = &walks[0].steps;
        // Indices of wall steps and their owners.
        let walls: Vec<usize> = steps
            .iter()
            .enumerate()
            .filter_map(|(i, s)| matches!(s, Step::Wall { .. }).then_some(i))
            .collect();
        if walls.is_empty() {
            continue;
        }
        let owner = |i: usize| -> usize {
            let Step::Wall { cell, pos } = steps[i] else { unreachable!() };
            arr.wall_strand(cell, pos).expect("wall step has owner")
        };
        let is_m: Vec<bool> = walls.iter().map(|&i| owner(i) == m).collect();
        let k = walls.len();
        let switches: Vec<usize> = (0..k).filter(|&i| is_m[i] != is_m[(i + 1) % k]).collect();
        if switches.len() != 2 || !is_m.iter().any(|&b| b) {
            continue;
        }
        // Both switches must be direct crossing corners (consecutive steps).
        let direct = |wi: usize| -> bool {
            let a = walls[wi];
            let b = walls[(wi + 1) % k];
            (a + 1) % steps.len() == b
        };
        if !switches.iter().all(|&wi| direct(wi)) {
            continue;
        }
        if arr.region_chi(region) != 1 {
            continue;
        }
        // Rotate so the m-run starts at walls[start].
        let start = (0..k)
            .find(|&i| is_m[i] && !is_m[(i + k - 1) % k])
            .expect("m-run start");
        let run: Vec<usize> = (0..k)
            .map(|j| walls[(start + j) % k])
            .collect();
        let mlen = is_m.iter().filter(|&&b| b).count();
        let mrun = &run[..mlen];
        // u0: backward endpoint of the first m chord; the corner vertex is the
        // tail of the first m piece.
        let ep = |stepi: usize, backward: bool| -> NodeId {
            let Step::Wall { cell, pos } = steps[stepi] else { unreachable!() };
            let (ti, ci, fwd) = chord_of(arr, cell, pos).expect("m wall is a chord piece");
            let c = &arr.tris[ti].chords[ci];
            // fwd means directed from the chord's u-side stop to the v-side.
            if fwd == backward {
                c.u
            } else {
                c.v
            }
        };
        let tri_of_step = |stepi: usize| -> usize {
            let (cell, _) = match steps[stepi] {
                Step::Wall { cell, pos } | Step::Gap { cell, pos } => (cell, pos),
            };
            arr.cell_tri(cell)
        };
        let first_chord = {
            let (ti, ci, _) = chord_of(arr, step_cell(steps, mrun[0]), step_pos(steps, mrun[0])).unwrap();
            (ti, ci)
        };
        let last_chord = {
            let i = mrun[mlen - 1];
            let (ti, ci, _) = chord_of(arr, step_cell(steps, i), step_pos(steps, i)).unwrap();
            (ti, ci)
        };
        let wrap = mlen >= 2 && first_chord == last_chord;
        let (u0, v0) = if wrap {
            (usize::MAX, usize::MAX)
        } else {
            (ep(mrun[0], true), ep(mrun[mlen - 1], false))
        };
        let t_x1 = tri_of_step(mrun[0]);
        let t_x2 = tri_of_step(mrun[mlen - 1]);
        // Deleted punctures: the m-run's internal teleport points.  Each wall
        // piece after the first starts either at a crossing vertex (same
        // chord continues, nothing deleted) or at the puncture the walk
        // teleported through.
        let mut deleted = Vec::new();
        for &wi in &mrun[1..] {
            let Step::Wall { cell, pos } = steps[wi] else { unreachable!() };
            let ti = arr.cell_tri(cell);
            let de = arr.cell_cycle(cell)[pos];
            let ae = &arr.tris[ti].edges[de.e];
            let tail = if de.fwd { ae.a } else { ae.b };
            if let crate::arr::VKind::B(bidx) = arr.tris[ti].verts[tail].kind {
                if let crate::arr::BKind::Node(p) = arr.tris[ti].bpts[bidx].0 {
                    deleted.push(p);
                }
            }
        }
        // Gaps of the other run, in walk order starting after the m-run.
        // Each gap is a teleport.  When the following step is a wall starting
        // at a target puncture p, the teleport passes p, and the pushed
        // strand must land on p's far side (away from the bigon region);
        // anchoring to p keeps insertion indices valid after deletions.
        // Consecutive gaps occur only at corner teleports, where any point of
        // the interval between surviving neighbors works.
        let after_m = (mrun[mlen - 1] + 1) % steps.len();
        let before_m = mrun[0];
        let mut gaps: Vec<Gap> = Vec::new();
        let mut i = after_m;
        while i != before_m {
            if let Step::Gap { cell, pos } = steps[i] {
                let ti = arr.cell_tri(cell);
                let de = arr.cell_cycle(cell)[pos];
                let AEKind::Arc { edge, seg, .. } = arr.tris[ti].edges[de.e].kind else {
                    unreachable!("gap step on non-arc wall");
                };
                let j = (i + 1) % steps.len();
                // Triangle entered across the teleport.
                let tri = tri_of_step(j);
                let mut anchor = None;
                if let Step::Wall { cell: wc, pos: wp } = steps[j] {
                    let wti = arr.cell_tri(wc);
                    let wde = arr.cell_cycle(wc)[wp];
                    let ae = &arr.tris[wti].edges[wde.e];
                    let tail = if wde.fwd { ae.a } else { ae.b };
                    if let crate::arr::VKind::B(bidx) = arr.tris[wti].verts[tail].kind {
                        if let crate::arr::BKind::Node(p) = arr.tris[wti].bpts[bidx].0 {
                            let pp = d.pos(p);
                            debug_assert!(seg == pp || seg == pp + 1);
                            anchor = Some(GapAnchor::Beside { p, region_below: seg == pp });
                        }
                    }
                }
                let anchor = anchor.unwrap_or_else(|| {
                    // Corner teleport: nearest surviving neighbor of the
                    // interval, else the edge is (or becomes) empty.
                    let ord = &d.order[edge];
                    if let Some(&n) =
                        ord[..seg].iter().rev().find(|n| !deleted.contains(n))
                    {
                        GapAnchor::Neighbor { n, above: true }
                    } else if let Some(&n) =
                        ord[seg..].iter().find(|n| !deleted.contains(n))
                    {
                        GapAnchor::Neighbor { n, above: false }
                    } else {
                        GapAnchor::Raw { idx: 0 }
                    }
                });
                gaps.push(Gap { edge, anchor, tri });
            }
            i = (i + 1) % steps.len();
        }
        if gaps.is_empty() || (wrap && gaps.len() < 2) {
            continue; // cannot happen for genuine bigons
        }
        return Some(Bigon { u0, v0, t_x1, t_x2, deleted, gaps, wrap });
    }
    None
}

fn step_cell(steps: &[Step], i: usize) -> usize {
    match steps[i] {
        Step::Wall { cell, .. } | Step::Gap { cell, .. } => cell,
    }
}
fn step_pos(steps: &[Step], i: usize) -> usize {
    match steps[i] {
        Step::Wall { pos, .. } | Step::Gap { pos, .. } => pos,
    }
}

fn apply_bigon(d: &mut Drawing, m: usize, b: Bigon) {
    for n in &b.deleted {
        d.remove_node(*n);
    }
    // Insert route punctures.  Anchors survive the deletion, so indices are
    // computed fresh against the current edge orders.
    let mut route = Vec::new();
    for g in &b.gaps {
        let idx = match g.anchor {
            GapAnchor::Beside { p, region_below } => {
                if region_below {
                    d.pos(p) + 1
                } else {
                    d.pos(p)
                }
            }
            GapAnchor::Neighbor { n, above } => {
                if above {
                    d.pos(n) + 1
                } else {
                    d.pos(n)
                }
            }
            GapAnchor::Raw { idx } => idx,
        };
        let n = d.new_node_at(g.edge, idx, m, NodeKind::Puncture);
        route.push(n);
    }
    // Link: v0 -> route[0] in t_x2, route[j] -> route[j+1] in gaps[j].2,
    // route[last] -> u0 in t_x1.  In the wrap case the old strand is gone and
    // the route closes up through the corner triangle.
    for j in 0..route.len() - 1 {
        d.link_in(route[j], route[j + 1], b.gaps[j].tri);
    }
    if b.wrap {
        d.link_in(route[route.len() - 1], route[0], b.t_x1);
    } else {
        d.link_in(b.v0, route[0], b.t_x2);
        d.link_in(route[route.len() - 1], b.u0, b.t_x1);
    }
}

/// Reduce movable strand `m` to minimal position with respect to all other
/// strands.  Closed strands only.
pub fn reduce_strand(d: &mut Drawing, m: usize) -> Result<(), Error> {
    loop {
        let arr = Arrangement::build(d)?;
        let Some(b) = find_bigon(d, &arr, m) else {
            return Ok(());
        };
        apply_bigon(d, m, b);
    }
}

/// Overlay canonical weight vectors as separate strands, sequentially reducing
/// each newcomer against the earlier ones.  Returns the drawing; strand i
/// carries curves[i].
pub fn overlay_reduced(
    tri: &Rc<Triangulation>,
    curves: &[Vec<u32>],
    names: &[&str],
) -> Result<Drawing, Error> {
    let mut d = Drawing::new(tri.clone());
    for (i, w) in curves.iter().enumerate() {
        let nm = names.get(i).copied().unwrap_or("c");
        let part = Drawing::trace(tri.clone(), w, nm)?;
        let s = d.merge(&part);
        reduce_strand(&mut d, s)?;
    }
    Ok(d)
}

/// Geometric intersection number of two canonical multicurves.
pub fn intersection_number(
    tri: &Rc<Triangulation>,
    a: &[u32],
    b: &[u32],
) -> Result<u64, Error> {
    let d = overlay_reduced(tri, &[a.to_vec(), b.to_vec()], &["a", "b"])?;
    let arr = Arrangement::build(&d)?;
    Ok(arr.crossing_count(0, 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::slope_curve;
    use crate::tri::build_genus_surface;

    #[test]
    fn torus_slopes_small() {
        let tri = Rc::new(build_genus_surface(1).unwrap());
        let a = slope_curve(&tri, 0, 0, 1).unwrap();
        let b = slope_curve(&tri, 0, 1, 0).unwrap();
        assert_eq!(intersection_number(&tri, &a.w, &a.w).unwrap(), 0);
        assert_eq!(intersection_number(&tri, &a.w, &b.w).unwrap(), 1);
        let c = slope_curve(&tri, 0, 2, 1).unwrap();
        // |det([[0,1],[2,1]])| = 2 against A=(0,1)... A is the (0,1) line.
        assert_eq!(intersection_number(&tri, &a.w, &c.w).unwrap(), 2);
        assert_eq!(intersection_number(&tri, &b.w, &c.w).unwrap(), 1);
    }
}
