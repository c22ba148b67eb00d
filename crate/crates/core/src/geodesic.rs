//! Geodesic paths: counting, enumeration, confluent tuples, contacts and
//! enclosed areas.
//!
//! A geodesic is identified by its half-edge sequence, not its vertex
//! sequence; parallel edges give distinct geodesics through the same
//! vertices.

use crate::error::{Error, Result};
use crate::map::{DistanceLabeling, PlanarMap, Quadrangulation};

/// A distance-increasing path from an origin, with the half-edge used at
/// each step. `vertices.len() == half_edges.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeodesicPath {
    pub vertices: Vec<usize>,
    pub half_edges: Vec<usize>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_edges.is_empty()
    }

    pub fn origin(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Checks the minimality certificate: each vertex sits at distance equal
    /// to its position along the path.
    pub fn certify(&self, map: &PlanarMap, labels: &DistanceLabeling) -> bool {
        if self.vertices.len() != self.half_edges.len() + 1 {
            return false;
        }
        if self.vertices[0] != labels.origin {
            return false;
        }
        for (j, &h) in self.half_edges.iter().enumerate() {
            if map.tail(h) != self.vertices[j] || map.head(h) != self.vertices[j + 1] {
                return false;
            }
        }
        self.vertices.iter().enumerate().all(|(j, &v)| labels.labels[v] == j)
    }
}

/// Number of distinct geodesics `origin -> target`, counting multi-edges
/// with multiplicity, by dynamic programming over distance-decreasing edges.
/// Returns 1 when `target == origin` (the empty path).
pub fn count_geodesics(q: &Quadrangulation, labels: &DistanceLabeling, target: usize) -> u64 {
    let map = &q.map;
    let d = labels.labels[target];
    if d == 0 {
        return 1;
    }
    // process vertices by increasing label up to d
    let mut order: Vec<usize> = (0..map.n_vertices()).filter(|&v| labels.labels[v] <= d).collect();
    order.sort_by_key(|&v| labels.labels[v]);
    let mut ways = vec![0u64; map.n_vertices()];
    ways[labels.origin] = 1;
    for &v in &order {
        let lv = labels.labels[v];
        if lv == 0 {
            continue;
        }
        let mut acc = 0u64;
        for h in map.half_edges_at(v) {
            let w = map.head(h);
            if labels.labels[w] + 1 == lv {
                acc += ways[w];
            }
        }
        ways[v] = acc;
    }
    ways[target]
}

/// Total number of geodesic paths of length exactly `i` emerging from the
/// origin (summed over all targets at distance `i`).
pub fn count_geodesics_of_length(
    q: &Quadrangulation,
    labels: &DistanceLabeling,
    i: usize,
) -> u64 {
    (0..q.map.n_vertices())
        .filter(|&v| labels.labels[v] == i)
        .map(|v| count_geodesics(q, labels, v))
        .sum()
}

/// All geodesics `origin -> target`, as explicit paths.
pub fn enumerate_geodesics(
    q: &Quadrangulation,
    labels: &DistanceLabeling,
    target: usize,
) -> Vec<GeodesicPath> {
    let map = &q.map;
    let d = labels.labels[target];
    let mut out = Vec::new();
    // walk backwards from the target along predecessor half-edges
    let mut rev_hes: Vec<usize> = Vec::with_capacity(d);
    fn rec(
        map: &PlanarMap,
        labels: &DistanceLabeling,
        v: usize,
        rev_hes: &mut Vec<usize>,
        out: &mut Vec<GeodesicPath>,
        target: usize,
    ) {
        if labels.labels[v] == 0 {
            let half_edges: Vec<usize> = rev_hes.iter().rev().map(|&h| map.alpha(h)).collect();
            let mut vertices = Vec::with_capacity(half_edges.len() + 1);
            vertices.push(v);
            for &h in &half_edges {
                vertices.push(map.head(h));
            }
            debug_assert_eq!(*vertices.last().unwrap(), target);
            out.push(GeodesicPath { vertices, half_edges });
            return;
        }
        for h in map.half_edges_at(v) {
            if labels.labels[map.head(h)] + 1 == labels.labels[v] {
                rev_hes.push(h);
                rec(map, labels, map.head(h), rev_hes, out, target);
                rev_hes.pop();
            }
        }
    }
    rec(map, labels, target, &mut rev_hes, &mut out, target);
    out.sort();
    out
}

/// Distribution of predecessor counts: for each vertex at distance `i`, the
/// number of incident half-edges leading to distance `i-1`.
pub fn predecessor_counts(q: &Quadrangulation, labels: &DistanceLabeling, i: usize) -> Vec<usize> {
    let map = &q.map;
    (0..map.n_vertices())
        .filter(|&v| labels.labels[v] == i)
        .map(|v| {
            map.half_edges_at(v)
                .into_iter()
                .filter(|&h| labels.labels[map.head(h)] + 1 == i)
                .count()
        })
        .collect()
}

/// Whether two geodesics with common endpoints cross topologically.
///
/// Crossings are local events at shared vertices: the strands of the second
/// path must not separate the strands of the first in the rotation order.
/// Along a run of shared edges the second path rides an empty sliver, so the
/// side it entered on must match the side it leaves on; shared vertices with
/// distinct edges on both sides impose only the local condition (the detour
/// between two touch points may wrap around an end of the first path and
/// legitimately return on the other side).
pub fn paths_cross(map: &PlanarMap, p1: &GeodesicPath, p2: &GeodesicPath) -> bool {
    assert_eq!(p1.len(), p2.len(), "confluent geodesics must have equal length");
    let i = p1.len();
    // side of the sliver along the current shared-edge run; the inner Option
    // is None for a run starting at the origin (no entering strand)
    let mut run: Option<Option<bool>> = if i >= 1 && p1.half_edges[0] == p2.half_edges[0] {
        Some(None)
    } else {
        None
    };
    for j in 1..i {
        if p1.vertices[j] != p2.vertices[j] {
            debug_assert!(run.is_none());
            continue;
        }
        let in1 = map.alpha(p1.half_edges[j - 1]);
        let out1 = p1.half_edges[j];
        let side = |x: usize| map.in_arc(x, out1, in1);
        let left_shared = p1.half_edges[j - 1] == p2.half_edges[j - 1];
        let right_shared = p1.half_edges[j] == p2.half_edges[j];
        match (left_shared, right_shared) {
            (true, true) => {} // inside a shared run
            (true, false) => {
                // run ends: the exiting strand must stay on the run's side
                let s = side(p2.half_edges[j]);
                if let Some(Some(r)) = run {
                    if r != s {
                        return true;
                    }
                }
                run = None;
            }
            (false, true) => {
                // run starts: record the entering strand's side
                run = Some(Some(side(map.alpha(p2.half_edges[j - 1]))));
            }
            (false, false) => {
                // isolated touch: the two strands must sit in the same arc
                if side(map.alpha(p2.half_edges[j - 1])) != side(p2.half_edges[j]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether two geodesics share an internal vertex.
pub fn share_internal_vertex(p1: &GeodesicPath, p2: &GeodesicPath) -> bool {
    (1..p1.len()).any(|j| p1.vertices[j] == p2.vertices[j])
}

/// A multiset of `k` pairwise compatible confluent geodesics.
///
/// The weight is the number of linearly ordered tuple configurations the
/// multiset stands for: cutting the sphere along any one of the `k` paths
/// and reading the rest off in nesting order gives `k` distinct ordered
/// juxtapositions, so every multiset carries weight `k`. Totals weighted
/// this way match the tuple series exactly (calibrated against them).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluentTuple {
    pub k: usize,
    pub mode: crate::series::TupleMode,
    pub paths: Vec<GeodesicPath>,
    pub weight: u64,
}

/// Enumerates confluent `k`-tuples between the labeling origin and `target`:
/// multisets of geodesics that are pairwise non-crossing (weak) or pairwise
/// internally disjoint (strong), each with weight `k`.
pub fn enumerate_confluent_tuples(
    q: &Quadrangulation,
    labels: &DistanceLabeling,
    target: usize,
    k: usize,
    mode: crate::series::TupleMode,
) -> Result<Vec<ConfluentTuple>> {
    if k == 0 {
        return Err(Error::ModeUnsupported);
    }
    let geos = enumerate_geodesics(q, labels, target);
    let m = geos.len();
    // pairwise compatibility
    let mut compat = vec![vec![false; m]; m];
    for a in 0..m {
        for b in a..m {
            let ok = match mode {
                crate::series::TupleMode::Weak => !paths_cross(&q.map, &geos[a], &geos[b]),
                crate::series::TupleMode::Strong => !share_internal_vertex(&geos[a], &geos[b]),
            };
            compat[a][b] = ok;
            compat[b][a] = ok;
        }
    }
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(
        geos: &[GeodesicPath],
        compat: &[Vec<bool>],
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
        out: &mut Vec<ConfluentTuple>,
        mode: crate::series::TupleMode,
    ) {
        if pick.len() == k {
            out.push(ConfluentTuple {
                k,
                mode,
                paths: pick.iter().map(|&a| geos[a].clone()).collect(),
                weight: k as u64,
            });
            return;
        }
        for a in start..geos.len() {
            if pick.iter().all(|&b| compat[b][a]) {
                pick.push(a);
                rec(geos, compat, k, a, pick, out, mode); // repetition allowed
                pick.pop();
            }
        }
    }
    rec(&geos, &compat, k, 0, &mut pick, &mut out, mode);
    Ok(out)
}

/// Number of internal vertices shared by a weak pair, each counted once.
pub fn contact_count(pair: &ConfluentTuple) -> usize {
    assert_eq!(pair.k, 2);
    let (p1, p2) = (&pair.paths[0], &pair.paths[1]);
    (1..p1.len()).filter(|&j| p1.vertices[j] == p2.vertices[j]).count()
}

/// Splits the faces of `q` into the two domains delimited by a non-crossing
/// pair of geodesics. Faces are flooded without crossing either path; a
/// component touching the left side of path 1 or the right side of path 2
/// belongs to the first domain, the mirror sides to the second. Degenerate
/// slivers along shared edges contribute nothing.
pub fn domain_areas(q: &Quadrangulation, pair: &ConfluentTuple) -> Result<(usize, usize)> {
    assert_eq!(pair.k, 2);
    let map = &q.map;
    let (p1, p2) = (&pair.paths[0], &pair.paths[1]);
    if paths_cross(map, p1, p2) {
        return Err(Error::PathsCross);
    }
    let nf = map.n_faces();
    let mut blocked = vec![false; map.n_half_edges()];
    let mut shared_edge = vec![false; map.n_half_edges()];
    for &h in p1.half_edges.iter().chain(&p2.half_edges) {
        blocked[h] = true;
        blocked[map.alpha(h)] = true;
    }
    for &h in &p1.half_edges {
        if p2.half_edges.contains(&h) {
            shared_edge[h] = true;
            shared_edge[map.alpha(h)] = true;
        }
    }
    // face components under adjacency through unblocked edges
    let mut face_hes: Vec<Vec<usize>> = vec![Vec::with_capacity(4); nf];
    for h in 0..map.n_half_edges() {
        face_hes[map.face_of(h)].push(h);
    }
    let mut comp = vec![usize::MAX; nf];
    let mut ncomp = 0;
    for f in 0..nf {
        if comp[f] != usize::MAX {
            continue;
        }
        let mut stack = vec![f];
        comp[f] = ncomp;
        while let Some(g) = stack.pop() {
            for &h in &face_hes[g] {
                if !blocked[h] {
                    let g2 = map.face_of(map.alpha(h));
                    if comp[g2] == usize::MAX {
                        comp[g2] = ncomp;
                        stack.push(g2);
                    }
                }
            }
        }
        ncomp += 1;
    }
    // seed assignment: domain 1 is left of the closed walk p1 · reverse(p2)
    let mut side = vec![0u8; ncomp]; // 0 unset, 1 domain1, 2 domain2
    let mut assign = |c: usize, s: u8| -> Result<()> {
        if side[c] == 0 {
            side[c] = s;
            Ok(())
        } else if side[c] == s {
            Ok(())
        } else {
            Err(Error::PathsCross)
        }
    };
    for &h in &p1.half_edges {
        if shared_edge[h] {
            continue;
        }
        assign(comp[map.face_of(h)], 1)?;
        assign(comp[map.face_of(map.alpha(h))], 2)?;
    }
    for &h in &p2.half_edges {
        if shared_edge[h] {
            continue;
        }
        assign(comp[map.face_of(h)], 2)?;
        assign(comp[map.face_of(map.alpha(h))], 1)?;
    }
    let mut n1 = 0;
    let mut n2 = 0;
    for f in 0..nf {
        match side[comp[f]] {
            1 => n1 += 1,
            2 => n2 += 1,
            _ => n2 += 1, // fully degenerate pair: everything on one side
        }
    }
    Ok((n1, n2))
}
