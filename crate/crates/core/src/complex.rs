//! Bounded-radius enumeration of reducing curves under generator words and
//! the induced reducing sphere complex graph.

use std::collections::{BTreeMap, VecDeque};

use crate::drawing::NormalCurve;
use crate::eyeglass::make_eyeglass;
use crate::goeritz::{visional_family, FactoredWord};
use crate::heegaard::{bounds_disk, is_complete, is_reducing, HeegaardDiagram, Side, SphereTriplet};
use crate::mapclass::MappingClass;
use crate::reduce::intersection_number;
use crate::Error;

/// Weight guard used by the CLI when none is given.  Keeps the radius-3
/// enumeration on the standard diagram at desk scale (a couple of minutes)
/// while still producing a connected graph containing the sphere triangle.
pub const DEFAULT_MAX_WEIGHT: u64 = 40;

#[derive(Debug, Clone)]
pub struct ReducingVertex {
    pub curve: NormalCurve,
    /// seed sphere index (1..=3) and generator indices, first applied first
    pub seed: usize,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ComplexGraph {
    pub vertices: Vec<ReducingVertex>,
    pub edges: Vec<(usize, usize)>,
}

/// Desk-scale Goeritz check: the image of every system curve still bounds a
/// disk on its side.
pub fn is_goeritz(dg: &HeegaardDiagram, f: &MappingClass) -> Result<bool, Error> {
    for c in &dg.v_system.curves {
        if !bounds_disk(dg, &f.apply(c)?, Side::V)? {
            return Ok(false);
        }
    }
    for c in &dg.w_system.curves {
        if !bounds_disk(dg, &f.apply(c)?, Side::W)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default generator set: twists about the system and sphere curves, two
/// seeded eyeglass twists, and one visional drag per sphere, each with its
/// inverse.  Anything failing the Goeritz check is dropped.
pub fn default_generators(dg: &HeegaardDiagram) -> Result<Vec<MappingClass>, Error> {
    let mut raw: Vec<MappingClass> = Vec::new();
    for c in dg
        .v_system
        .curves
        .iter()
        .chain(dg.w_system.curves.iter())
        .chain(dg.mu.iter())
    {
        raw.push(MappingClass::twist(&dg.tri, c, true));
    }
    for (a, b) in [(0usize, 2usize), (1, 2)] {
        let eta = make_eyeglass(dg, &dg.v_system.curves[a], &dg.w_system.curves[b], 0)?;
        raw.push(crate::eyeglass::eyeglass_twist(&dg.tri, &eta, 1).realized);
    }
    for i in 1..=3usize {
        let fam = visional_family(dg, i)?;
        if fam.len() > 1 {
            raw.push(fam[1].clone());
        }
    }
    let mut out = Vec::new();
    for g in raw {
        if is_goeritz(dg, &g)? {
            out.push(g.inverse());
            out.push(g);
        }
    }
    Ok(out)
}

/// All images of the three sphere curves under generator words of length at
/// most `l`, deduplicated by canonical form.  Returns the vertices in
/// deterministic order plus the number of images dropped by the weight guard.
pub fn enumerate_reducing(
    dg: &HeegaardDiagram,
    gens: &[MappingClass],
    l: usize,
    max_weight: u64,
) -> Result<(Vec<ReducingVertex>, usize), Error> {
    for (k, g) in gens.iter().enumerate() {
        if !is_goeritz(dg, g)? {
            return Err(Error::Invalid(format!("generator {k} fails the Goeritz check")));
        }
    }
    let mut seen: BTreeMap<Vec<u32>, ReducingVertex> = BTreeMap::new();
    let mut frontier: Vec<Vec<u32>> = Vec::new();
    for (i, mu) in dg.mu.iter().enumerate() {
        let v = ReducingVertex { curve: mu.clone(), seed: i + 1, witness: vec![] };
        frontier.push(mu.w.clone());
        seen.insert(mu.w.clone(), v);
    }
    let mut truncated = 0usize;
    for _depth in 0..l {
        let mut next = Vec::new();
        for key in &frontier {
            let (cur, seed, wit) = {
                let v = &seen[key];
                (v.curve.clone(), v.seed, v.witness.clone())
            };
            for (k, g) in gens.iter().enumerate() {
                let im = g.apply(&cur)?;
                if im.w.iter().map(|&x| x as u64).sum::<u64>() > max_weight {
                    truncated += 1;
                    continue;
                }
                if seen.contains_key(&im.w) {
                    continue;
                }
                if !is_reducing(dg, &im)? {
                    return Err(Error::Internal("generator image is not reducing".into()));
                }
                let mut w2 = wit.clone();
                w2.push(k);
                next.push(im.w.clone());
                seen.insert(im.w.clone(), ReducingVertex { curve: im, seed, witness: w2 });
            }
        }
        frontier = next;
    }
    Ok((seen.into_values().collect(), truncated))
}

/// Edges between distinct vertices with zero geometric intersection.
pub fn build_graph(
    dg: &HeegaardDiagram,
    vertices: Vec<ReducingVertex>,
) -> Result<ComplexGraph, Error> {
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if intersection_number(&dg.tri, &vertices[i].curve.w, &vertices[j].curve.w)? == 0 {
                edges.push((i, j));
            }
        }
    }
    Ok(ComplexGraph { vertices, edges })
}

pub fn components(g: &ComplexGraph) -> Vec<Vec<usize>> {
    let n = g.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = out.len();
        let mut members = vec![];
        let mut q = VecDeque::from([s]);
        comp[s] = c;
        while let Some(u) = q.pop_front() {
            members.push(u);
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = c;
                    q.push_back(v);
                }
            }
        }
        out.push(members);
    }
    out
}

/// Diameter of the largest component (0 for an empty graph).
pub fn largest_diameter(g: &ComplexGraph) -> usize {
    let comps = components(g);
    let Some(big) = comps.iter().max_by_key(|c| c.len()) else { return 0 };
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &g.edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut diam = 0;
    for &s in big {
        let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(s, 0)]);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in adj.get(&u).map(|x| x.as_slice()).unwrap_or(&[]) {
                if !dist.contains_key(&v) {
                    dist.insert(v, dist[&u] + 1);
                    q.push_back(v);
                }
            }
        }
        diam = diam.max(*dist.values().max().unwrap());
    }
    diam
}

/// Indices of the three standard sphere curves, if all are present with all
/// three pairwise edges.
pub fn triangle_indices(dg: &HeegaardDiagram, g: &ComplexGraph) -> Option<[usize; 3]> {
    let mut idx = [usize::MAX; 3];
    for (k, v) in g.vertices.iter().enumerate() {
        for i in 0..3 {
            if v.curve == dg.mu[i] {
                idx[i] = k;
            }
        }
    }
    if idx.contains(&usize::MAX) {
        return None;
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let e = (idx[i].min(idx[j]), idx[i].max(idx[j]));
            if !g.edges.contains(&e) {
                return None;
            }
        }
    }
    Some(idx)
}

/// Replay a witness: the word applied to the seed sphere must reproduce the
/// vertex curve exactly.
pub fn replay_witness(
    dg: &HeegaardDiagram,
    gens: &[MappingClass],
    v: &ReducingVertex,
) -> Result<bool, Error> {
    let mut cur = dg.mu[v.seed - 1].clone();
    for &k in &v.witness {
        cur = gens[k].apply(&cur)?;
    }
    Ok(cur == v.curve)
}

/// Walk a sphere triplet along a factored word, first factor applied being
/// the rightmost.  Each intermediate triplet must be complete and share a
/// curve with its predecessor.
pub fn triplet_walk(
    dg: &HeegaardDiagram,
    start: &SphereTriplet,
    word: &FactoredWord,
) -> Result<Vec<SphereTriplet>, Error> {
    if !is_complete(dg, start)? {
        return Err(Error::Invalid("start triplet is not complete".into()));
    }
    let mut out = vec![start.clone()];
    for (step, (f, tag)) in word.factors.iter().rev().enumerate() {
        let prev = out.last().unwrap().clone();
        let curves: [NormalCurve; 3] = [
            f.apply(&prev.curves[0])?,
            f.apply(&prev.curves[1])?,
            f.apply(&prev.curves[2])?,
        ];
        let t = SphereTriplet { curves };
        if !is_complete(dg, &t)? {
            return Err(Error::Invalid(format!("triplet incomplete after step {step}")));
        }
        if f.apply(&dg.mu[tag - 1])? != dg.mu[tag - 1] {
            return Err(Error::Invalid(format!("factor at step {step} moves its sphere")));
        }
        // whenever the tagged sphere sits in the current triplet it is the
        // shared curve of the consecutive pair
        debug_assert!(
            !prev.curves.contains(&dg.mu[tag - 1])
                || t.curves.iter().any(|c| prev.curves.contains(c))
        );
        out.push(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eyeglass::Oracle;
    use crate::goeritz::factor_e1;
    use crate::heegaard::{standard_diagram, standard_triplet};

    #[test]
    fn radius_zero_triangle() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let gens = default_generators(&dg).unwrap();
        assert!(!gens.is_empty());
        let (verts, trunc) = enumerate_reducing(&dg, &gens, 0, 400).unwrap();
        assert_eq!(verts.len(), 3);
        assert_eq!(trunc, 0);
        let g = build_graph(&dg, verts).unwrap();
        assert_eq!(g.edges.len(), 3);
        assert_eq!(components(&g).len(), 1);
        assert!(triangle_indices(&dg, &g).is_some());
        assert_eq!(largest_diameter(&g), 1);
    }

    #[test]
    fn radius_one_grows_and_replays() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let gens = default_generators(&dg).unwrap();
        let (verts, _) = enumerate_reducing(&dg, &gens, 1, DEFAULT_MAX_WEIGHT).unwrap();
        assert!(verts.len() > 3);
        for v in &verts {
            assert!(replay_witness(&dg, &gens, v).unwrap());
            assert!(v.witness.len() <= 1);
        }
        let g = build_graph(&dg, verts).unwrap();
        assert_eq!(components(&g).len(), 1);
    }

    #[test]
    fn goeritz_filter() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        // a twist about a slope curve that is no system curve shears the
        // diagram and fails the check
        let c = crate::path::slope_curve(&dg.tri, 0, 1, 1).unwrap();
        let f = MappingClass::twist(&dg.tri, &c, true);
        assert!(!is_goeritz(&dg, &f).unwrap());
        assert!(enumerate_reducing(&dg, &[f], 1, 400).is_err());
    }

    #[test]
    fn walk_triplets() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let orc = Oracle::new(&dg.tri).unwrap();
        let t0 = standard_triplet(&dg);
        let empty = FactoredWord { factors: vec![] };
        assert_eq!(triplet_walk(&dg, &t0, &empty).unwrap().len(), 1);
        let tmu = FactoredWord {
            factors: vec![(MappingClass::twist(&dg.tri, &dg.mu[0], true), 1)],
        };
        let walk = triplet_walk(&dg, &t0, &tmu).unwrap();
        assert_eq!(walk[1].curves, walk[0].curves);
        // closed loop with a factorization word
        let eta = make_eyeglass(&dg, &dg.v_system.curves[0], &dg.w_system.curves[2], 0).unwrap();
        let w = factor_e1(&dg, &orc, &eta, 1, 64).unwrap();
        let walk = triplet_walk(&dg, &t0, &w).unwrap();
        assert_eq!(walk.len(), w.factors.len() + 1);
    }
}
