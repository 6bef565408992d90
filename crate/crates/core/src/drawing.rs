//! Traced curve systems: curves and arcs drawn on a triangulation as ordered
//! punctures on edges plus chords inside triangles.
//!
//! Weights (normal coordinates) are the canonical form for isotopy classes of
//! essential multicurves; a `Drawing` is a concrete transverse position used
//! for overlays, twisting and surgery.

use std::rc::Rc;

use crate::tri::Triangulation;
use crate::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Puncture,
    /// Arc endpoint attached to `host` (a puncture of another strand on the
    /// same edge, adjacent in the edge order).  The edge segment between the
    /// terminal and its host is a wall owned by the arc, and the single tail
    /// chord lives in triangle `tri`.
    Terminal { host: NodeId, tri: usize },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub edge: usize,
    pub strand: usize,
    pub kind: NodeKind,
    /// link[i] = chord partner through triangle incs[edge][i].tri.
    pub link: [Option<NodeId>; 2],
}

#[derive(Debug, Clone)]
pub struct StrandInfo {
    pub name: String,
    pub closed: bool,
}

#[derive(Clone)]
pub struct Drawing {
    pub tri: Rc<Triangulation>,
    pub nodes: Vec<Option<Node>>,
    /// Live node ids per edge, ordered along the edge's intrinsic direction.
    pub order: Vec<Vec<NodeId>>,
    pub strands: Vec<StrandInfo>,
}

/// Canonical multicurve: normal coordinates after tightening and removal of
/// trivial components.  May be empty or disconnected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct MultiCurve {
    pub w: Vec<u32>,
}

/// Canonical connected essential simple closed curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct NormalCurve {
    pub w: Vec<u32>,
}

impl NormalCurve {
    pub fn multi(&self) -> MultiCurve {
        MultiCurve { w: self.w.clone() }
    }
    pub fn weight(&self) -> u64 {
        self.w.iter().map(|&x| x as u64).sum()
    }
}

impl MultiCurve {
    pub fn is_empty(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }
}

/// Check admissibility of a weight vector: parity and triangle inequalities.
pub fn admissible(tri: &Triangulation, w: &[u32]) -> bool {
    if w.len() != tri.num_edges() {
        return false;
    }
    for t in &tri.triangles {
        let x = w[t.sides[0].edge] as i64;
        let y = w[t.sides[1].edge] as i64;
        let z = w[t.sides[2].edge] as i64;
        if (x + y + z) % 2 != 0 || x > y + z || y > z + x || z > x + y {
            return false;
        }
    }
    true
}

impl Drawing {
    pub fn new(tri: Rc<Triangulation>) -> Self {
        let order = vec![Vec::new(); tri.num_edges()];
        Drawing { tri, nodes: Vec::new(), order, strands: Vec::new() }
    }

    pub fn add_strand(&mut self, name: &str, closed: bool) -> usize {
        self.strands.push(StrandInfo { name: name.to_string(), closed });
        self.strands.len() - 1
    }

    pub fn node(&self, n: NodeId) -> &Node {
        self.nodes[n].as_ref().expect("dead node")
    }

    pub fn node_mut(&mut self, n: NodeId) -> &mut Node {
        self.nodes[n].as_mut().expect("dead node")
    }

    pub fn alive(&self, n: NodeId) -> bool {
        self.nodes.get(n).map_or(false, |o| o.is_some())
    }

    /// Position of a node in its edge order.
    pub fn pos(&self, n: NodeId) -> usize {
        let e = self.node(n).edge;
        self.order[e].iter().position(|&m| m == n).expect("node not on its edge")
    }

    pub fn new_node_at(&mut self, edge: usize, idx: usize, strand: usize, kind: NodeKind) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Some(Node { edge, strand, kind, link: [None, None] }));
        self.order[edge].insert(idx, id);
        id
    }

    pub fn remove_node(&mut self, n: NodeId) {
        let e = self.node(n).edge;
        let i = self.pos(n);
        self.order[e].remove(i);
        self.nodes[n] = None;
    }

    /// Slot (0/1) of node `n` whose chord lies in triangle `t`.
    pub fn slot_in(&self, n: NodeId, t: usize) -> usize {
        self.tri.inc_in(self.node(n).edge, t)
    }

    /// Triangle of node `n`'s slot `s`.
    pub fn tri_of_slot(&self, n: NodeId, s: usize) -> usize {
        self.tri.incs[self.node(n).edge][s].tri
    }

    /// Create a chord between u and v inside triangle `t`.
    pub fn link_in(&mut self, u: NodeId, v: NodeId, t: usize) {
        let su = self.slot_in(u, t);
        let sv = self.slot_in(v, t);
        self.node_mut(u).link[su] = Some(v);
        self.node_mut(v).link[sv] = Some(u);
    }

    /// Chord partner of `n` in triangle `t`, if any.
    pub fn partner_in(&self, n: NodeId, t: usize) -> Option<NodeId> {
        self.node(n).link[self.slot_in(n, t)]
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.nodes[i].is_some())
    }

    pub fn strand_nodes(&self, s: usize) -> Vec<NodeId> {
        self.live_nodes().filter(|&n| self.node(n).strand == s).collect()
    }

    pub fn weights_of(&self, s: usize) -> Vec<u32> {
        let mut w = vec![0u32; self.tri.num_edges()];
        for n in self.live_nodes() {
            if self.node(n).strand == s {
                w[self.node(n).edge] += 1;
            }
        }
        w
    }

    pub fn weights_of_set(&self, set: &[usize]) -> Vec<u32> {
        let mut w = vec![0u32; self.tri.num_edges()];
        for n in self.live_nodes() {
            if set.contains(&self.node(n).strand) {
                w[self.node(n).edge] += 1;
            }
        }
        w
    }

    /// Canonical trace of an admissible weight vector as a single strand.
    pub fn trace(tri: Rc<Triangulation>, w: &[u32], name: &str) -> Result<Drawing, Error> {
        if !admissible(&tri, w) {
            return Err(Error::Invalid(format!("weights not admissible: {w:?}")));
        }
        let mut d = Drawing::new(tri.clone());
        let s = d.add_strand(name, true);
        for (e, &cnt) in w.iter().enumerate() {
            for i in 0..cnt as usize {
                d.new_node_at(e, i, s, NodeKind::Puncture);
            }
        }
        // Corner arcs per triangle.
        for (t, tr) in tri.triangles.iter().enumerate() {
            let lens: Vec<i64> = tr.sides.iter().map(|sd| w[sd.edge] as i64).collect();
            for c in 0..3 {
                // Corner between side c and side c+1.
                let i = c;
                let j = (c + 1) % 3;
                let n = (lens[i] + lens[j] - lens[(c + 2) % 3]) / 2;
                debug_assert!(n >= 0);
                for a in 0..n {
                    // a-th arc from the corner: side i boundary position
                    // lens[i]-1-a pairs with side j boundary position a.
                    let u = d.node_at_side_pos(t, i, (lens[i] - 1 - a) as usize);
                    let v = d.node_at_side_pos(t, j, a as usize);
                    d.link_in(u, v, t);
                }
            }
        }
        Ok(d)
    }

    /// Node on triangle `t`'s side `side` at boundary-direction position `b`.
    pub fn node_at_side_pos(&self, t: usize, side: usize, b: usize) -> NodeId {
        let sd = self.tri.triangles[t].sides[side];
        let len = self.order[sd.edge].len();
        let idx = if sd.dir == 1 { b } else { len - 1 - b };
        self.order[sd.edge][idx]
    }

    /// Boundary-direction position of node `n` on the side of triangle `t`.
    pub fn side_pos(&self, t: usize, n: NodeId) -> usize {
        let e = self.node(n).edge;
        let idx = self.pos(n);
        let dir = self.tri.incs[e][self.tri.inc_in(e, t)].dir;
        if dir == 1 {
            idx
        } else {
            self.order[e].len() - 1 - idx
        }
    }

    /// Append all strands of `other` (same triangulation), their nodes placed
    /// after existing nodes on every edge.  Returns the strand id offset.
    pub fn merge(&mut self, other: &Drawing) -> usize {
        assert!(Rc::ptr_eq(&self.tri, &other.tri) || self.tri.genus == other.tri.genus);
        let soff = self.strands.len();
        let noff = self.nodes.len();
        self.strands.extend(other.strands.iter().cloned());
        for n in 0..other.nodes.len() {
            let entry = other.nodes[n].clone().map(|mut nd| {
                nd.strand += soff;
                nd.link = [nd.link[0].map(|x| x + noff), nd.link[1].map(|x| x + noff)];
                if let NodeKind::Terminal { host, tri } = nd.kind {
                    nd.kind = NodeKind::Terminal { host: host + noff, tri };
                }
                nd
            });
            self.nodes.push(entry);
        }
        for e in 0..self.order.len() {
            for &n in &other.order[e] {
                self.order[e].push(n + noff);
            }
        }
        soff
    }

    pub fn delete_strand(&mut self, s: usize) {
        let victims: Vec<NodeId> = self.strand_nodes(s);
        for n in victims {
            self.remove_node(n);
        }
    }

    /// Traverse a closed strand component containing `start`, returning the
    /// cyclic node sequence.  The traversal leaves `start` through `slot0`.
    pub fn cycle_from(&self, start: NodeId, slot0: usize) -> Vec<NodeId> {
        let mut seq = vec![start];
        let mut cur = start;
        let mut out = slot0;
        loop {
            let nxt = self.node(cur).link[out].expect("open strand in cycle_from");
            if nxt == start {
                // Came back; ensure we actually entered through the other slot
                // of `start`'s first exit (the cycle is done).
                break;
            }
            let t = self.tri_of_slot(cur, out);
            let sin = self.slot_in(nxt, t);
            seq.push(nxt);
            cur = nxt;
            out = 1 - sin;
        }
        seq
    }

    /// Deterministic cycle of a closed connected strand: starts at the node
    /// with the lowest (edge, position), leaves through slot 0.
    pub fn cycle(&self, strand: usize) -> Vec<NodeId> {
        let mut nodes = self.strand_nodes(strand);
        assert!(!nodes.is_empty());
        nodes.sort_by_key(|&n| (self.node(n).edge, self.pos(n)));
        self.cycle_from(nodes[0], 0)
    }

    /// Path of an open strand from one terminal to the other.
    pub fn path(&self, strand: usize) -> Vec<NodeId> {
        let nodes = self.strand_nodes(strand);
        let mut terms: Vec<NodeId> = nodes
            .iter()
            .copied()
            .filter(|&n| matches!(self.node(n).kind, NodeKind::Terminal { .. }))
            .collect();
        assert_eq!(terms.len(), 2, "open strand needs exactly two terminals");
        terms.sort();
        let start = terms[0];
        let t0 = match self.node(start).kind {
            NodeKind::Terminal { tri, .. } => tri,
            _ => unreachable!(),
        };
        let mut seq = vec![start];
        let mut cur = start;
        let mut out = self.slot_in(start, t0);
        loop {
            let nxt = self.node(cur).link[out].expect("broken arc");
            seq.push(nxt);
            if matches!(self.node(nxt).kind, NodeKind::Terminal { .. }) {
                break;
            }
            let t = self.tri_of_slot(cur, out);
            let sin = self.slot_in(nxt, t);
            cur = nxt;
            out = 1 - sin;
        }
        seq
    }

    /// Split the nodes of a strand into connected components.
    pub fn strand_components(&self, s: usize) -> Vec<Vec<NodeId>> {
        let nodes = self.strand_nodes(s);
        let mut seen: std::collections::BTreeSet<NodeId> = Default::default();
        let mut comps = Vec::new();
        for &n in &nodes {
            if seen.contains(&n) {
                continue;
            }
            let mut stack = vec![n];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                if !seen.insert(x) {
                    continue;
                }
                comp.push(x);
                for sl in 0..2 {
                    if let Some(y) = self.node(x).link[sl] {
                        if !seen.contains(&y) {
                            stack.push(y);
                        }
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps.sort();
        comps
    }

    /// Reassign each extra component of `s` to a fresh strand id; returns all
    /// strand ids now covering the original strand (first is `s`).
    pub fn split_components(&mut self, s: usize) -> Vec<usize> {
        let comps = self.strand_components(s);
        let mut ids = vec![s];
        let closed = self.strands[s].closed;
        for comp in comps.iter().skip(1) {
            let name = format!("{}.{}", self.strands[s].name, ids.len());
            let ns = self.add_strand(&name, closed);
            for &n in comp {
                self.node_mut(n).strand = ns;
            }
            ids.push(ns);
        }
        ids
    }

    /// Remove turnbacks (chords with both endpoints on one edge) from a closed
    /// strand by pulling them across the edge; removes the strand entirely if
    /// it collapses to a trivial loop.  Returns true while changes happen.
    pub fn tighten_strand(&mut self, s: usize) {
        assert!(self.strands[s].closed, "tighten only applies to closed strands");
        loop {
            let Some((u, v, t)) = self.find_turnback(s) else { break };
            let other_t = |d: &Drawing, n: NodeId, t: usize| {
                let e = d.node(n).edge;
                let i = d.tri.inc_in(e, t);
                d.tri.incs[e][1 - i].tri
            };
            let to = other_t(self, u, t);
            let doubled = self.partner_in(u, to) == Some(v);
            if doubled {
                // Trivial two-node loop.
                self.remove_node(u);
                self.remove_node(v);
                continue;
            }
            let w1 = self.partner_in(u, to).expect("closed strand");
            let w2 = self.partner_in(v, to).expect("closed strand");
            self.remove_node(u);
            self.remove_node(v);
            if w1 == v || w2 == u {
                unreachable!("chord endpoints distinct");
            }
            self.link_in(w1, w2, to);
        }
    }

    /// Innermost (for its strand) turnback of strand `s`: a chord (u,v) with
    /// both ends on one edge and no same-strand node strictly between.
    fn find_turnback(&self, s: usize) -> Option<(NodeId, NodeId, usize)> {
        for e in 0..self.order.len() {
            let lst = &self.order[e];
            for (i, &u) in lst.iter().enumerate() {
                if self.node(u).strand != s {
                    continue;
                }
                for sl in 0..2 {
                    let Some(v) = self.node(u).link[sl] else { continue };
                    if self.node(v).edge != e {
                        continue;
                    }
                    let j = self.pos(v);
                    if j <= i {
                        continue;
                    }
                    let between = lst[i + 1..j].iter().any(|&m| self.node(m).strand == s);
                    if !between {
                        return Some((u, v, self.tri_of_slot(u, sl)));
                    }
                }
            }
        }
        None
    }

    /// Does this component have vertex-link weights (2 on every edge)?
    fn component_is_vertex_link(&self, comp: &[NodeId]) -> bool {
        let mut w = vec![0u32; self.tri.num_edges()];
        for &n in comp {
            w[self.node(n).edge] += 1;
        }
        w.iter().all(|&x| x == 2)
    }

    /// Tighten every closed strand and drop trivial components.
    pub fn normalize_all(&mut self) {
        for s in 0..self.strands.len() {
            if !self.strands[s].closed || self.strand_nodes(s).is_empty() {
                continue;
            }
            self.tighten_strand(s);
            for comp in self.strand_components(s) {
                if self.component_is_vertex_link(&comp) {
                    for n in comp {
                        self.remove_node(n);
                    }
                }
            }
        }
    }
}

/// Canonical form of an arbitrary admissible weight vector.
pub fn normalize(tri: &Rc<Triangulation>, w: &[u32]) -> Result<MultiCurve, Error> {
    let mut d = Drawing::trace(tri.clone(), w, "c")?;
    d.normalize_all();
    Ok(MultiCurve { w: d.weights_of_set(&(0..d.strands.len()).collect::<Vec<_>>()) })
}

/// Components of a canonical multicurve as connected canonical curves.
pub fn curve_components(tri: &Rc<Triangulation>, mc: &MultiCurve) -> Result<Vec<NormalCurve>, Error> {
    if mc.is_empty() {
        return Ok(Vec::new());
    }
    let mut d = Drawing::trace(tri.clone(), &mc.w, "c")?;
    d.normalize_all();
    let mut out = Vec::new();
    for s in 0..d.strands.len() {
        for comp in d.strand_components(s) {
            let mut w = vec![0u32; tri.num_edges()];
            for &n in &comp {
                w[d.node(n).edge] += 1;
            }
            out.push(NormalCurve { w });
        }
    }
    out.sort();
    Ok(out)
}

/// Canonical connected curve from weights; errors if empty or disconnected.
pub fn as_curve(tri: &Rc<Triangulation>, w: &[u32]) -> Result<NormalCurve, Error> {
    let mc = normalize(tri, w)?;
    let comps = curve_components(tri, &mc)?;
    match comps.len() {
        0 => Err(Error::Invalid("curve is inessential".into())),
        1 => Ok(comps.into_iter().next().unwrap()),
        n => Err(Error::Invalid(format!("curve has {n} components"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::build_genus_surface;

    fn t3() -> Rc<Triangulation> {
        Rc::new(build_genus_surface(3).unwrap())
    }

    #[test]
    fn vertex_link_is_trivial() {
        let tri = t3();
        let w = vec![2u32; tri.num_edges()];
        assert!(admissible(&tri, &w));
        let mc = normalize(&tri, &w).unwrap();
        assert!(mc.is_empty());
    }

    #[test]
    fn zero_is_admissible_and_trivial() {
        let tri = t3();
        let w = vec![0u32; tri.num_edges()];
        let mc = normalize(&tri, &w).unwrap();
        assert!(mc.is_empty());
    }

    #[test]
    fn trace_round_trip() {
        let tri = t3();
        // Double vertex link: two trivial components.
        let w = vec![4u32; tri.num_edges()];
        let mc = normalize(&tri, &w).unwrap();
        assert!(mc.is_empty());
    }

    #[test]
    fn bad_weights_rejected() {
        let tri = t3();
        let mut w = vec![0u32; tri.num_edges()];
        w[0] = 1; // parity violation in the triangles containing edge 0
        assert!(!admissible(&tri, &w));
        assert!(Drawing::trace(tri.clone(), &w, "x").is_err());
    }
}
