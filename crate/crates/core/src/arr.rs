//! Planar arrangement of a drawing: per-triangle chord subdivisions with exact
//! rational geometry, glued into cells, complement regions and boundary walks.
//!
//! Everything downstream that needs topology of the complement (bigon
//! detection, Euler characteristics of sides, connector search, neighborhood
//! boundaries) runs on this structure.

use std::collections::BTreeMap;

use crate::drawing::{Drawing, NodeId, NodeKind};
use crate::geom::{circle_point_q, dir_cmp, line_intersect, q, segments_cross, sub, Pt, Q};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BKind {
    /// Triangle corner before side `side` (a copy of the surface vertex).
    Corner(usize),
    Node(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VKind {
    /// Boundary point (index into bpts).
    B(usize),
    /// Crossing (index into crossings of this triangle).
    X(usize),
}

#[derive(Debug, Clone)]
pub struct Vert {
    pub pt: Pt,
    pub kind: VKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AEKind {
    /// Boundary arc covering part of edge segment (edge, seg).  `wall_owner`
    /// is the arc strand when the segment is a terminal closure wall.
    Arc { edge: usize, seg: usize, wall_owner: Option<usize> },
    /// Chord sub-segment: `chord` indexes TriArr::chords, `piece` counts from
    /// the chord's u-endpoint.
    Sub { chord: usize, piece: usize },
}

#[derive(Debug, Clone)]
pub struct AEdge {
    pub a: usize,
    pub b: usize,
    pub kind: AEKind,
}

#[derive(Debug, Clone)]
pub struct ChordInfo {
    pub u: NodeId,
    pub v: NodeId,
    pub strand: usize,
    /// Crossing vertex ids along the chord from u to v.
    pub cross_verts: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct DirEdge {
    pub e: usize,
    pub fwd: bool,
}

#[derive(Debug, Clone)]
pub struct TriArr {
    pub t: usize,
    pub bpts: Vec<(BKind, Pt)>,
    pub verts: Vec<Vert>,
    pub edges: Vec<AEdge>,
    pub chords: Vec<ChordInfo>,
    /// Crossing vertices: (vert id, [chord index, chord index]).
    pub crossings: Vec<(usize, [usize; 2])>,
    /// Inner faces as ccw cycles of directed edges.
    pub faces: Vec<Vec<DirEdge>>,
}

impl DirEdge {
    pub fn idx(&self) -> usize {
        2 * self.e + if self.fwd { 0 } else { 1 }
    }
}

fn head(edges: &[AEdge], d: DirEdge) -> usize {
    if d.fwd {
        edges[d.e].b
    } else {
        edges[d.e].a
    }
}
fn tail(edges: &[AEdge], d: DirEdge) -> usize {
    if d.fwd {
        edges[d.e].a
    } else {
        edges[d.e].b
    }
}

/// Direction vector of a directed edge at its tail.  Boundary arcs use the
/// circle tangent, chords the straight segment vector.
fn dir_vec(edges: &[AEdge], verts: &[Vert], nb: usize, d: DirEdge) -> Pt {
    let e = &edges[d.e];
    let (from, to) = if d.fwd { (e.a, e.b) } else { (e.b, e.a) };
    match e.kind {
        AEKind::Sub { .. } => sub(&verts[to].pt, &verts[from].pt),
        AEKind::Arc { .. } => {
            // Arcs connect consecutive boundary points; tangent at `from`,
            // ccw if heading to the next boundary point.
            let p = &verts[from].pt;
            let t = Pt { x: -p.y.clone(), y: p.x.clone() };
            let ccw = (e.b == (e.a + 1) % nb) == d.fwd;
            if ccw {
                t
            } else {
                Pt { x: -t.x, y: -t.y }
            }
        }
    }
}

fn build_tri(d: &Drawing, t: usize, jitter: u64) -> Result<TriArr, Error> {
    let tri = &d.tri;
    // Boundary points in ccw order: corner, nodes of side, corner, ...
    let mut bpts: Vec<(BKind, Pt)> = Vec::new();
    let mut side_start = [0usize; 3];
    for side in 0..3 {
        side_start[side] = bpts.len();
        bpts.push((BKind::Corner(side), Pt { x: q(0), y: q(0) }));
        let e = tri.triangles[t].sides[side].edge;
        let len = d.order[e].len();
        for b in 0..len {
            bpts.push((BKind::Node(d.node_at_side_pos(t, side, b)), Pt { x: q(0), y: q(0) }));
        }
    }
    let nb = bpts.len();
    for (k, bp) in bpts.iter_mut().enumerate() {
        // Deterministic jitter breaks coincidental concurrences; attempt 0 is
        // the plain integer parameterization.
        let h = ((k as u64).wrapping_mul(2654435761) % 97 + 1) * jitter;
        let u = q(k as i64) + q(h as i64) / q(100000);
        bp.1 = circle_point_q(&u);
    }
    let bidx_of_node: BTreeMap<NodeId, usize> = bpts
        .iter()
        .enumerate()
        .filter_map(|(i, (k, _))| match k {
            BKind::Node(n) => Some((*n, i)),
            _ => None,
        })
        .collect();

    let mut verts: Vec<Vert> =
        bpts.iter().enumerate().map(|(i, (_, p))| Vert { pt: p.clone(), kind: VKind::B(i) }).collect();

    // Chords of this triangle (BTreeMap order keeps this deterministic).
    let mut chords: Vec<ChordInfo> = Vec::new();
    for (&n, _) in &bidx_of_node {
        if let Some(m) = d.partner_in(n, t) {
            if n < m {
                chords.push(ChordInfo { u: n, v: m, strand: d.node(n).strand, cross_verts: vec![] });
            }
        }
    }

    let endpoints: Vec<(Pt, Pt)> = chords
        .iter()
        .map(|c| (verts[bidx_of_node[&c.u]].pt.clone(), verts[bidx_of_node[&c.v]].pt.clone()))
        .collect();

    // Crossings.
    let mut crossings: Vec<(usize, [usize; 2])> = Vec::new();
    let mut cross_on_chord: Vec<Vec<(Q, usize)>> = vec![Vec::new(); chords.len()];
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a, b) = endpoints[i].clone();
            let (c, e) = endpoints[j].clone();
            if segments_cross(&a, &b, &c, &e) {
                let p = line_intersect(&a, &b, &c, &e);
                let vid = verts.len();
                verts.push(Vert { pt: p, kind: VKind::X(crossings.len()) });
                crossings.push((vid, [i, j]));
                let ti = param(&a, &b, &verts[vid].pt);
                let tj = param(&c, &e, &verts[vid].pt);
                cross_on_chord[i].push((ti, vid));
                cross_on_chord[j].push((tj, vid));
            }
        }
    }
    // Degeneracy: concurrent chords produce equal crossing points.
    for i in 0..crossings.len() {
        for j in i + 1..crossings.len() {
            if verts[crossings[i].0].pt == verts[crossings[j].0].pt {
                return Err(Error::Internal("concurrent chords".into()));
            }
        }
    }

    // Edges: chord pieces.
    let mut edges: Vec<AEdge> = Vec::new();
    for (ci, lst) in cross_on_chord.iter_mut().enumerate() {
        lst.sort_by(|a, b| a.0.cmp(&b.0));
        chords[ci].cross_verts = lst.iter().map(|(_, v)| *v).collect();
        let mut stops = vec![bidx_of_node[&chords[ci].u]];
        stops.extend(chords[ci].cross_verts.iter().copied());
        stops.push(bidx_of_node[&chords[ci].v]);
        for (piece, w) in stops.windows(2).enumerate() {
            edges.push(AEdge { a: w[0], b: w[1], kind: AEKind::Sub { chord: ci, piece } });
        }
    }

    // Wall segments (terminal closures) of the whole drawing, per (edge, seg).
    let mut wall_segs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for n in d.live_nodes() {
        if let NodeKind::Terminal { host, .. } = d.node(n).kind {
            let e = d.node(n).edge;
            let (iz, ip) = (d.pos(n), d.pos(host));
            debug_assert_eq!(iz.abs_diff(ip), 1, "terminal must be adjacent to host");
            wall_segs.insert((e, iz.max(ip)), d.node(n).strand);
        }
    }

    // Boundary arcs between consecutive boundary points.
    for i in 0..nb {
        let jn = (i + 1) % nb;
        // Which side does this gap belong to, and which boundary position?
        // Gap after boundary index i: find the side containing it.
        let side = (0..3)
            .rev()
            .find(|&s| i >= side_start[s])
            .unwrap();
        let e = tri.triangles[t].sides[side].edge;
        let dir = tri.triangles[t].sides[side].dir;
        let w = d.order[e].len();
        let bpos = i - side_start[side]; // 0 = gap after corner
        let seg = if dir == 1 { bpos } else { w - bpos };
        let wall_owner = wall_segs.get(&(e, seg)).copied();
        edges.push(AEdge { a: i, b: jn, kind: AEKind::Arc { edge: e, seg, wall_owner } });
    }

    // Face tracing.
    let nd = 2 * edges.len();
    let mut out_at: Vec<Vec<DirEdge>> = vec![Vec::new(); verts.len()];
    for (ei, _e) in edges.iter().enumerate() {
        for fwd in [true, false] {
            let de = DirEdge { e: ei, fwd };
            out_at[tail(&edges, de)].push(de);
        }
    }
    for v in 0..verts.len() {
        out_at[v].sort_by(|&x, &y| {
            dir_cmp(&dir_vec(&edges, &verts, nb, x), &dir_vec(&edges, &verts, nb, y))
        });
    }
    // next(dh): at head(dh), clockwise-next from twin(dh).
    let next = |dh: DirEdge| -> DirEdge {
        let v = head(&edges, dh);
        let twin = DirEdge { e: dh.e, fwd: !dh.fwd };
        let lst = &out_at[v];
        let i = lst.iter().position(|&x| x.idx() == twin.idx()).unwrap();
        lst[(i + lst.len() - 1) % lst.len()]
    };
    let mut face_of: Vec<Option<usize>> = vec![None; nd];
    let mut all_faces: Vec<Vec<DirEdge>> = Vec::new();
    for e in 0..edges.len() {
        for fwd in [true, false] {
            let start = DirEdge { e, fwd };
            if face_of[start.idx()].is_some() {
                continue;
            }
            let fid = all_faces.len();
            let mut cyc = Vec::new();
            let mut cur = start;
            loop {
                face_of[cur.idx()] = Some(fid);
                cyc.push(cur);
                cur = next(cur);
                if cur.idx() == start.idx() {
                    break;
                }
            }
            all_faces.push(cyc);
        }
    }
    // Outer face: contains the backward arc from bpt 1 to bpt 0.
    let outer_arc = edges
        .iter()
        .position(|e| matches!(e.kind, AEKind::Arc { .. }) && e.a == 0 && e.b == 1)
        .expect("boundary arc 0-1");
    let outer = face_of[DirEdge { e: outer_arc, fwd: false }.idx()].unwrap();
    let faces: Vec<Vec<DirEdge>> = all_faces
        .into_iter()
        .enumerate()
        .filter_map(|(i, f)| if i == outer { None } else { Some(f) })
        .collect();

    Ok(TriArr { t, bpts, verts, edges, chords, crossings, faces })
}

fn param(a: &Pt, b: &Pt, p: &Pt) -> Q {
    // Parameter of p along segment ab; use the dominant coordinate.
    let dx = &b.x - &a.x;
    if !num_traits::Zero::is_zero(&dx) {
        (&p.x - &a.x) / dx
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

/// A global crossing of two strands.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub tri: usize,
    pub vert: usize,
    /// Chord indices within the triangle.
    pub chords: [usize; 2],
    pub strands: [usize; 2],
}

pub struct Arrangement {
    pub tris: Vec<TriArr>,
    pub cell_base: Vec<usize>,
    pub ncells: usize,
    pub region_of: Vec<usize>,
    pub nregions: usize,
    /// For each (edge, seg): the two (cell, position-in-cycle) instances.
    pub arc_inst: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    pub crossings: Vec<Crossing>,
}

impl Arrangement {
    pub fn build(d: &Drawing) -> Result<Arrangement, Error> {
        'attempt: for jitter in 0..40u64 {
            let mut tris = Vec::new();
            for t in 0..d.tri.num_triangles() {
                match build_tri(d, t, jitter) {
                    Ok(ta) => tris.push(ta),
                    Err(_) => continue 'attempt,
                }
            }
            return Ok(Self::assemble(d, tris));
        }
        Err(Error::Internal("could not reach generic position".into()))
    }

    fn assemble(d: &Drawing, tris: Vec<TriArr>) -> Arrangement {
        let mut cell_base = Vec::with_capacity(tris.len());
        let mut ncells = 0;
        for ta in &tris {
            cell_base.push(ncells);
            ncells += ta.faces.len();
        }
        // Arc instances.
        let mut arc_inst: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (ti, ta) in tris.iter().enumerate() {
            for (fi, cyc) in ta.faces.iter().enumerate() {
                for (pos, de) in cyc.iter().enumerate() {
                    if let AEKind::Arc { edge, seg, .. } = ta.edges[de.e].kind {
                        arc_inst.entry((edge, seg)).or_default().push((cell_base[ti] + fi, pos));
                    }
                }
            }
        }
        // Union-find over passable arcs.
        let mut uf: Vec<usize> = (0..ncells).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        for ((edge, seg), inst) in &arc_inst {
            debug_assert_eq!(inst.len(), 2, "edge segment ({edge},{seg}) has {} sides", inst.len());
            let (ta_idx, _) = cell_locate(&cell_base, inst[0].0);
            let de = tris[ta_idx].faces[inst[0].0 - cell_base[ta_idx]][inst[0].1];
            let passable = match tris[ta_idx].edges[de.e].kind {
                AEKind::Arc { wall_owner, .. } => wall_owner.is_none(),
                _ => unreachable!(),
            };
            if passable {
                let a = find(&mut uf, inst[0].0);
                let b = find(&mut uf, inst[1].0);
                uf[a] = b;
            }
        }
        let mut region_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut region_of = vec![0usize; ncells];
        for c in 0..ncells {
            let r = find(&mut uf, c);
            let nid = region_ids.len();
            let id = *region_ids.entry(r).or_insert(nid);
            region_of[c] = id;
        }
        let nregions = region_ids.len();
        // Global crossings.
        let mut crossings = Vec::new();
        for (ti, ta) in tris.iter().enumerate() {
            for &(vert, ch) in &ta.crossings {
                crossings.push(Crossing {
                    tri: ti,
                    vert,
                    chords: ch,
                    strands: [ta.chords[ch[0]].strand, ta.chords[ch[1]].strand],
                });
            }
        }
        let _ = d;
        Arrangement { tris, cell_base, ncells, region_of, nregions, arc_inst, crossings }
    }

    pub fn cell_tri(&self, cell: usize) -> usize {
        cell_locate(&self.cell_base, cell).0
    }

    pub fn cell_cycle(&self, cell: usize) -> &Vec<DirEdge> {
        let (ti, fi) = cell_locate(&self.cell_base, cell);
        &self.tris[ti].faces[fi]
    }

    pub fn edge_of(&self, cell: usize, pos: usize) -> &AEdge {
        let de = self.cell_cycle(cell)[pos];
        &self.tris[self.cell_tri(cell)].edges[de.e]
    }

    /// Number of crossings between strand `a` and strand `b`.
    pub fn crossing_count(&self, a: usize, b: usize) -> usize {
        self.crossings
            .iter()
            .filter(|c| (c.strands == [a, b]) || (c.strands == [b, a]))
            .count()
    }

    pub fn total_crossings_with(&self, a: usize) -> usize {
        self.crossings.iter().filter(|c| c.strands[0] == a || c.strands[1] == a).count()
    }

    /// Strand owning a wall edge (chord piece or closure wall).
    pub fn wall_strand(&self, cell: usize, pos: usize) -> Option<usize> {
        let ti = self.cell_tri(cell);
        let de = self.cell_cycle(cell)[pos];
        match self.tris[ti].edges[de.e].kind {
            AEKind::Sub { chord, .. } => Some(self.tris[ti].chords[chord].strand),
            AEKind::Arc { wall_owner, .. } => wall_owner,
        }
    }

    /// Region ids adjacent to any wall of strand `s`.
    pub fn regions_of_strand(&self, s: usize) -> Vec<usize> {
        let mut out = std::collections::BTreeSet::new();
        for cell in 0..self.ncells {
            for pos in 0..self.cell_cycle(cell).len() {
                if self.wall_strand(cell, pos) == Some(s) {
                    out.insert(self.region_of[cell]);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Region containing the surface vertex (all corner sectors are interior
    /// to one region since no strand meets the vertex).
    pub fn vertex_region(&self) -> usize {
        for (ti, ta) in self.tris.iter().enumerate() {
            for (fi, cyc) in ta.faces.iter().enumerate() {
                for de in cyc {
                    let e = &ta.edges[de.e];
                    for v in [e.a, e.b] {
                        if matches!(ta.verts[v].kind, VKind::B(b) if matches!(ta.bpts[b].0, BKind::Corner(_)))
                        {
                            return self.region_of[self.cell_base[ti] + fi];
                        }
                    }
                }
            }
        }
        unreachable!("triangles always have corners")
    }

    pub fn cells_of_region(&self, r: usize) -> Vec<usize> {
        (0..self.ncells).filter(|&c| self.region_of[c] == r).collect()
    }
}

fn cell_locate(base: &[usize], cell: usize) -> (usize, usize) {
    let ti = match base.binary_search(&cell) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    (ti, cell - base[ti])
}

// ---------------------------------------------------------------------------
// Region boundary walks and Euler characteristics.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Wall piece at (cell, pos): chord sub-segment or closure wall, region on
    /// its cell side.
    Wall { cell: usize, pos: usize },
    /// Passable boundary arc traversed by the walk at (cell, pos).
    Gap { cell: usize, pos: usize },
}

#[derive(Debug, Clone)]
pub struct Walk {
    pub steps: Vec<Step>,
}

impl Arrangement {
    fn is_wall(&self, cell: usize, pos: usize) -> bool {
        match self.edge_of(cell, pos).kind {
            AEKind::Sub { .. } => true,
            AEKind::Arc { wall_owner, .. } => wall_owner.is_some(),
        }
    }

    /// Glued twin instance of a passable arc.
    fn arc_twin(&self, cell: usize, pos: usize) -> (usize, usize) {
        if let AEKind::Arc { edge, seg, .. } = self.edge_of(cell, pos).kind {
            let inst = &self.arc_inst[&(edge, seg)];
            if inst[0] == (cell, pos) {
                inst[1]
            } else {
                inst[0]
            }
        } else {
            unreachable!()
        }
    }

    /// All boundary walks of a region.  Each walk is the cyclic sequence of
    /// wall pieces and traversed gaps, following each cell's ccw cycle and
    /// teleporting through passable arcs.
    pub fn region_walks(&self, region: usize) -> Vec<Walk> {
        let mut wall_instances: Vec<(usize, usize)> = Vec::new();
        for cell in 0..self.ncells {
            if self.region_of[cell] != region {
                continue;
            }
            for pos in 0..self.cell_cycle(cell).len() {
                if self.is_wall(cell, pos) {
                    wall_instances.push((cell, pos));
                }
            }
        }
        let mut seen: std::collections::BTreeSet<(usize, usize)> = Default::default();
        let mut walks = Vec::new();
        for &start in &wall_instances {
            if seen.contains(&start) {
                continue;
            }
            let mut steps = Vec::new();
            let mut cur = start;
            loop {
                seen.insert(cur);
                steps.push(Step::Wall { cell: cur.0, pos: cur.1 });
                // Advance along the cell cycle; teleport through gaps.
                let (mut cell, mut pos) = cur;
                loop {
                    pos = (pos + 1) % self.cell_cycle(cell).len();
                    if self.is_wall(cell, pos) {
                        cur = (cell, pos);
                        break;
                    }
                    // Passable arc: record and teleport.
                    steps.push(Step::Gap { cell, pos });
                    let (c2, p2) = self.arc_twin(cell, pos);
                    cell = c2;
                    pos = p2;
                }
                if cur == start {
                    break;
                }
            }
            walks.push(Walk { steps });
        }
        walks
    }

    /// Euler characteristic of a region's compactification (cut surface).
    pub fn region_chi(&self, region: usize) -> i64 {
        let cells = self.cells_of_region(region);
        let f = cells.len() as i64;
        // Edges: interior passable arcs once, wall sides once each.
        let mut e = 0i64;
        let mut interior_arcs: std::collections::BTreeSet<(usize, usize)> = Default::default();
        for &cell in &cells {
            for pos in 0..self.cell_cycle(cell).len() {
                match self.edge_of(cell, pos).kind {
                    AEKind::Sub { .. } => e += 1,
                    AEKind::Arc { edge, seg, wall_owner } => {
                        if wall_owner.is_some() {
                            e += 1;
                        } else {
                            interior_arcs.insert((edge, seg));
                        }
                    }
                }
            }
        }
        e += interior_arcs.len() as i64;
        // Vertices: sector classes.  Sector i of a cell sits between cycle
        // positions i-1 and i; sectors merge across passable arcs.
        let mut sector_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &cell in &cells {
            for pos in 0..self.cell_cycle(cell).len() {
                let id = sector_ids.len();
                sector_ids.insert((cell, pos), id);
            }
        }
        let mut uf: Vec<usize> = (0..sector_ids.len()).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        for ((edge, seg), inst) in &self.arc_inst {
            let _ = (edge, seg);
            let (c1, p1) = inst[0];
            if self.region_of[c1] != region {
                continue;
            }
            if self.is_wall(c1, p1) {
                continue;
            }
            let (c2, p2) = inst[1];
            let l1 = self.cell_cycle(c1).len();
            let l2 = self.cell_cycle(c2).len();
            // Sector after arc in c1 (at the arc's head) merges with sector at
            // position p2 in c2 (before c2's instance, same surface point);
            // sector at p1 (before arc) merges with sector after p2.
            let pairs = [
                (((c1, (p1 + 1) % l1)), (c2, p2)),
                ((c1, p1), (c2, (p2 + 1) % l2)),
            ];
            for (a, b) in pairs {
                let x = find(&mut uf, sector_ids[&a]);
                let y = find(&mut uf, sector_ids[&b]);
                uf[x] = y;
            }
        }
        let mut classes: std::collections::BTreeSet<usize> = Default::default();
        for i in 0..sector_ids.len() {
            classes.insert(find(&mut uf, i));
        }
        classes.len() as i64 - e + f
    }

    /// Genus of a region: chi = 2 - 2g - b.
    pub fn region_genus(&self, region: usize) -> i64 {
        let chi = self.region_chi(region);
        let b = self.region_walks(region).len() as i64;
        (2 - chi - b) / 2
    }
}

/// Components of the surface cut along the walls of a chosen strand subset.
/// Walls of other strands are treated as passable.
#[derive(Debug, Clone)]
pub struct CutDecomp {
    pub cut: std::collections::BTreeSet<usize>,
    pub comp_of: Vec<usize>,
    pub ncomps: usize,
}

impl Arrangement {
    fn cut_passable(&self, cut: &std::collections::BTreeSet<usize>, cell: usize, pos: usize) -> bool {
        match self.wall_strand(cell, pos) {
            Some(s) => !cut.contains(&s),
            None => true,
        }
    }

    /// Twin instance of a chord sub-edge: same triangle, adjacent face.
    fn sub_twin(&self, cell: usize, pos: usize) -> (usize, usize) {
        let ti = self.cell_tri(cell);
        let de = self.cell_cycle(cell)[pos];
        for (fi, cyc) in self.tris[ti].faces.iter().enumerate() {
            for (p, d2) in cyc.iter().enumerate() {
                if d2.e == de.e && d2.fwd != de.fwd {
                    return (self.cell_base[ti] + fi, p);
                }
            }
        }
        unreachable!("every inner edge has two sides")
    }

    /// Twin instance of any passable piece (arc teleport or chord side flip).
    fn pass_twin(&self, cell: usize, pos: usize) -> (usize, usize) {
        match self.edge_of(cell, pos).kind {
            AEKind::Sub { .. } => self.sub_twin(cell, pos),
            AEKind::Arc { .. } => self.arc_twin(cell, pos),
        }
    }

    pub fn cut_components(&self, cut: &[usize]) -> CutDecomp {
        let cut: std::collections::BTreeSet<usize> = cut.iter().copied().collect();
        let mut uf: Vec<usize> = (0..self.ncells).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        for cell in 0..self.ncells {
            for pos in 0..self.cell_cycle(cell).len() {
                if self.cut_passable(&cut, cell, pos) {
                    let (c2, _) = self.pass_twin(cell, pos);
                    let a = find(&mut uf, cell);
                    let b = find(&mut uf, c2);
                    uf[a] = b;
                }
            }
        }
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp_of = vec![0usize; self.ncells];
        for c in 0..self.ncells {
            let r = find(&mut uf, c);
            let n = ids.len();
            comp_of[c] = *ids.entry(r).or_insert(n);
        }
        CutDecomp { cut, comp_of, ncomps: ids.len() }
    }

    /// Component containing strand `s` (s must not be in the cut set and must
    /// be disjoint from it, so both sides of s agree).
    pub fn strand_component(&self, dec: &CutDecomp, s: usize) -> usize {
        for cell in 0..self.ncells {
            for pos in 0..self.cell_cycle(cell).len() {
                if self.wall_strand(cell, pos) == Some(s) {
                    return dec.comp_of[cell];
                }
            }
        }
        panic!("strand {s} has no walls");
    }

    /// Euler characteristic of a cut component's compactification.  Same
    /// counting scheme as region_chi with cut walls as the only boundary.
    pub fn cut_chi(&self, dec: &CutDecomp, comp: usize) -> i64 {
        let cells: Vec<usize> =
            (0..self.ncells).filter(|&c| dec.comp_of[c] == comp).collect();
        let f = cells.len() as i64;
        let mut e = 0i64;
        let mut interior: std::collections::BTreeSet<(usize, usize, usize)> = Default::default();
        for &cell in &cells {
            for pos in 0..self.cell_cycle(cell).len() {
                if !self.cut_passable(&dec.cut, cell, pos) {
                    e += 1; // boundary wall, once per side
                } else {
                    // Interior edge once: key by the lower instance.
                    let tw = self.pass_twin(cell, pos);
                    let me = (cell, pos);
                    let k = if me < tw { me } else { tw };
                    interior.insert((k.0, k.1, 0));
                }
            }
        }
        e += interior.len() as i64;
        // Sector classes: sector `pos` of a cell sits between cycle positions
        // pos-1 and pos; sectors merge across every passable piece.
        let mut sector_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &cell in &cells {
            for pos in 0..self.cell_cycle(cell).len() {
                let id = sector_ids.len();
                sector_ids.insert((cell, pos), id);
            }
        }
        let mut uf: Vec<usize> = (0..sector_ids.len()).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        for &cell in &cells {
            let l1 = self.cell_cycle(cell).len();
            for pos in 0..l1 {
                if !self.cut_passable(&dec.cut, cell, pos) {
                    continue;
                }
                let (c2, p2) = self.pass_twin(cell, pos);
                let l2 = self.cell_cycle(c2).len();
                let pairs = [
                    ((cell, (pos + 1) % l1), (c2, p2)),
                    ((cell, pos), (c2, (p2 + 1) % l2)),
                ];
                for (a, b) in pairs {
                    let x = find(&mut uf, sector_ids[&a]);
                    let y = find(&mut uf, sector_ids[&b]);
                    uf[x] = y;
                }
            }
        }
        let mut classes: std::collections::BTreeSet<usize> = Default::default();
        for i in 0..sector_ids.len() {
            classes.insert(find(&mut uf, i));
        }
        classes.len() as i64 - e + f
    }

    /// Boundary circles of a cut component: walks along cut walls, teleporting
    /// through every passable piece.
    pub fn cut_boundary_count(&self, dec: &CutDecomp, comp: usize) -> usize {
        let mut starts: Vec<(usize, usize)> = Vec::new();
        for cell in 0..self.ncells {
            if dec.comp_of[cell] != comp {
                continue;
            }
            for pos in 0..self.cell_cycle(cell).len() {
                if !self.cut_passable(&dec.cut, cell, pos) {
                    starts.push((cell, pos));
                }
            }
        }
        let mut seen: std::collections::BTreeSet<(usize, usize)> = Default::default();
        let mut n = 0;
        for &start in &starts {
            if seen.contains(&start) {
                continue;
            }
            let mut cur = start;
            loop {
                seen.insert(cur);
                let (mut cell, mut pos) = cur;
                loop {
                    pos = (pos + 1) % self.cell_cycle(cell).len();
                    if !self.cut_passable(&dec.cut, cell, pos) {
                        cur = (cell, pos);
                        break;
                    }
                    let (c2, p2) = self.pass_twin(cell, pos);
                    cell = c2;
                    pos = p2;
                }
                if cur == start {
                    break;
                }
            }
            n += 1;
        }
        n
    }

    /// Genus of a cut component.
    pub fn cut_genus(&self, dec: &CutDecomp, comp: usize) -> i64 {
        let chi = self.cut_chi(dec, comp);
        let b = self.cut_boundary_count(dec, comp) as i64;
        (2 - chi - b) / 2
    }

    /// Glued twin across a passable arc (public face of arc_twin).
    pub fn arc_twin_pub(&self, cell: usize, pos: usize) -> (usize, usize) {
        self.arc_twin(cell, pos)
    }

    /// Other side of a chord sub-edge (public face of sub_twin).
    pub fn sub_twin_pub(&self, cell: usize, pos: usize) -> (usize, usize) {
        self.sub_twin(cell, pos)
    }

    /// Boundary point of node `n` on triangle `t`.
    pub fn node_pt(&self, t: usize, n: crate::drawing::NodeId) -> Pt {
        for (k, p) in &self.tris[t].bpts {
            if matches!(k, BKind::Node(m) if *m == n) {
                return p.clone();
            }
        }
        panic!("node not on triangle boundary");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::Drawing;
    use crate::tri::build_genus_surface;
    use std::rc::Rc;

    #[test]
    fn empty_drawing_single_region() {
        let tri = Rc::new(build_genus_surface(3).unwrap());
        let d = Drawing::new(tri);
        let a = Arrangement::build(&d).unwrap();
        assert_eq!(a.nregions, 1);
        // Whole surface: chi = -4, no boundary.
        assert_eq!(a.region_chi(0), -4);
        assert_eq!(a.region_walks(0).len(), 0);
    }

    #[test]
    fn genus1_regions() {
        let tri = Rc::new(build_genus_surface(1).unwrap());
        let d = Drawing::new(tri);
        let a = Arrangement::build(&d).unwrap();
        assert_eq!(a.nregions, 1);
        assert_eq!(a.region_chi(0), 0);
    }
}
