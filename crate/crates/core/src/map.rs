//! Rotation-system representation of maps on the sphere.
//!
//! A map is a pair of permutations on half-edge identifiers: `alpha` (a
//! fixed-point-free involution pairing the two half-edges of each edge) and
//! `sigma` (next half-edge counterclockwise around its vertex). Vertices are
//! the orbits of `sigma`; faces are the orbits of `h -> sigma(alpha(h))`,
//! which traverses each face with the face on a fixed side of the walk.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A connected genus-0 map given by its rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    vertex_rep: Vec<usize>,
    face_rep: Vec<usize>,
}

fn orbits(perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut id = vec![usize::MAX; perm.len()];
    let mut reps = Vec::new();
    for start in 0..perm.len() {
        if id[start] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(start);
        let mut h = start;
        loop {
            id[h] = k;
            h = perm[h];
            if h == start {
                break;
            }
        }
    }
    (id, reps)
}

impl PlanarMap {
    /// Builds and validates a map from its permutation pair.
    pub fn new(alpha: Vec<usize>, sigma: Vec<usize>) -> Result<PlanarMap> {
        let n = alpha.len();
        if n == 0 || n % 2 != 0 || sigma.len() != n {
            return Err(Error::MalformedPermutation);
        }
        let in_range = |p: &[usize]| p.iter().all(|&h| h < n);
        if !in_range(&alpha) || !in_range(&sigma) {
            return Err(Error::MalformedPermutation);
        }
        let mut seen = vec![false; n];
        for &h in &sigma {
            if seen[h] {
                return Err(Error::MalformedPermutation);
            }
            seen[h] = true;
        }
        for h in 0..n {
            if alpha[h] == h || alpha[alpha[h]] != h {
                return Err(Error::NotInvolution);
            }
        }
        let mut sigma_inv = vec![0usize; n];
        for h in 0..n {
            sigma_inv[sigma[h]] = h;
        }
        let (vertex_of, vertex_rep) = orbits(&sigma);
        let phi: Vec<usize> = (0..n).map(|h| sigma[alpha[h]]).collect();
        let (face_of, face_rep) = orbits(&phi);

        // connectivity under <alpha, sigma>
        let mut reach = vec![false; n];
        let mut stack = vec![0usize];
        reach[0] = true;
        while let Some(h) = stack.pop() {
            for nb in [alpha[h], sigma[h]] {
                if !reach[nb] {
                    reach[nb] = true;
                    stack.push(nb);
                }
            }
        }
        let connected = reach.iter().all(|&r| r);
        let euler =
            vertex_rep.len() as i64 - (n / 2) as i64 + face_rep.len() as i64;
        if !connected || euler != 2 {
            return Err(Error::NonPlanar { euler: if connected { euler } else { i64::MIN } });
        }
        Ok(PlanarMap { alpha, sigma, sigma_inv, vertex_of, face_of, vertex_rep, face_rep })
    }

    pub fn n_half_edges(&self) -> usize {
        self.alpha.len()
    }
    pub fn n_edges(&self) -> usize {
        self.alpha.len() / 2
    }
    pub fn n_vertices(&self) -> usize {
        self.vertex_rep.len()
    }
    pub fn n_faces(&self) -> usize {
        self.face_rep.len()
    }

    #[inline]
    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }
    #[inline]
    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }
    #[inline]
    pub fn sigma_inv(&self, h: usize) -> usize {
        self.sigma_inv[h]
    }
    /// Next half-edge along the face walk.
    #[inline]
    pub fn phi(&self, h: usize) -> usize {
        self.sigma[self.alpha[h]]
    }
    /// Vertex the half-edge emanates from.
    #[inline]
    pub fn tail(&self, h: usize) -> usize {
        self.vertex_of[h]
    }
    /// Vertex the half-edge points to.
    #[inline]
    pub fn head(&self, h: usize) -> usize {
        self.vertex_of[self.alpha[h]]
    }
    #[inline]
    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }

    /// All half-edges at `v`, in rotation order starting from the stored
    /// representative.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let start = self.vertex_rep[v];
        let mut h = start;
        loop {
            out.push(h);
            h = self.sigma[h];
            if h == start {
                break;
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.half_edges_at(v).len()
    }

    /// The face walk starting at `h`.
    pub fn face_cycle(&self, h: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = h;
        loop {
            out.push(k);
            k = self.phi(k);
            if k == h {
                break;
            }
        }
        out
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_faces()];
        for h in 0..self.n_half_edges() {
            deg[self.face_of[h]] += 1;
        }
        deg
    }

    /// True iff `x` lies strictly inside the rotation arc from `a`
    /// (exclusive) to `b` (exclusive), walking in `sigma` direction.
    /// `a`, `b`, `x` must all be distinct half-edges at one vertex.
    pub fn in_arc(&self, x: usize, a: usize, b: usize) -> bool {
        let mut h = self.sigma[a];
        while h != b {
            if h == x {
                return true;
            }
            h = self.sigma[h];
        }
        false
    }
}

/// A quadrangulation of the sphere: all faces of degree 4, optionally rooted
/// at a directed half-edge and/or pointed at an origin vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrangulation {
    pub map: PlanarMap,
    pub root: Option<usize>,
    pub origin: Option<usize>,
}

impl Quadrangulation {
    pub fn new(map: PlanarMap, root: Option<usize>, origin: Option<usize>) -> Result<Self> {
        for d in map.face_degrees() {
            if d != 4 {
                return Err(Error::FaceDegreeNot4 { face_len: d });
            }
        }
        if !is_bipartite(&map) {
            return Err(Error::NotBipartite);
        }
        if let Some(r) = root {
            if r >= map.n_half_edges() {
                return Err(Error::MalformedPermutation);
            }
        }
        if let Some(o) = origin {
            if o >= map.n_vertices() {
                return Err(Error::MalformedPermutation);
            }
        }
        Ok(Quadrangulation { map, root, origin })
    }

    /// Builds from raw permutations, validating everything.
    pub fn build(alpha: Vec<usize>, sigma: Vec<usize>, root: Option<usize>, origin: Option<usize>) -> Result<Self> {
        Quadrangulation::new(PlanarMap::new(alpha, sigma)?, root, origin)
    }

    pub fn n_faces(&self) -> usize {
        self.map.n_faces()
    }

    /// The vertex the root half-edge emanates from (the origin of a rooted
    /// quadrangulation).
    pub fn root_tail(&self) -> Option<usize> {
        self.root.map(|r| self.map.tail(r))
    }

    /// Exact graph distances from `origin` by breadth-first search.
    pub fn bfs_labels(&self, origin: usize) -> DistanceLabeling {
        bfs_labels(&self.map, origin)
    }
}

fn is_bipartite(map: &PlanarMap) -> bool {
    let n = map.n_vertices();
    let mut color = vec![u8::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    color[0] = 0;
    queue.push_back(0usize);
    while let Some(v) = queue.pop_front() {
        for h in map.half_edges_at(v) {
            let w = map.head(h);
            if color[w] == u8::MAX {
                color[w] = 1 - color[v];
                queue.push_back(w);
            } else if color[w] == color[v] {
                return false;
            }
        }
    }
    true
}

/// Per-vertex graph distances from a marked origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceLabeling {
    pub origin: usize,
    pub labels: Vec<usize>,
}

pub fn bfs_labels(map: &PlanarMap, origin: usize) -> DistanceLabeling {
    let mut labels = vec![usize::MAX; map.n_vertices()];
    let mut queue = std::collections::VecDeque::new();
    labels[origin] = 0;
    queue.push_back(origin);
    while let Some(v) = queue.pop_front() {
        for h in map.half_edges_at(v) {
            let w = map.head(h);
            if labels[w] == usize::MAX {
                labels[w] = labels[v] + 1;
                queue.push_back(w);
            }
        }
    }
    DistanceLabeling { origin, labels }
}

impl DistanceLabeling {
    /// Checks the defining properties against a map: origin at 0, adjacent
    /// labels differ by exactly 1, and every positive-label vertex has a
    /// predecessor.
    pub fn validate(&self, map: &PlanarMap) -> bool {
        if self.labels[self.origin] != 0 {
            return false;
        }
        for v in 0..map.n_vertices() {
            let lv = self.labels[v];
            let mut has_pred = lv == 0;
            for h in map.half_edges_at(v) {
                let lw = self.labels[map.head(h)];
                if lw + 1 != lv && lw != lv + 1 {
                    return false;
                }
                if lw + 1 == lv {
                    has_pred = true;
                }
            }
            if !has_pred {
                return false;
            }
        }
        true
    }
}

/// Canonical traversal code of a rooted (and optionally pointed) map.
///
/// Half-edges are renumbered in breadth-first discovery order (each vertex's
/// half-edges consecutively, in rotation order starting from its entering
/// half-edge); the code records the renumbered `alpha` partner of every
/// half-edge plus a separator per vertex, which reconstructs the rotation
/// system exactly. Two rooted maps are isomorphic iff their codes are equal.
pub fn canonical_code(map: &PlanarMap, root: usize, marked: Option<usize>) -> Vec<u32> {
    let nh = map.n_half_edges();
    let mut he_index = vec![u32::MAX; nh];
    let mut v_index = vec![u32::MAX; map.n_vertices()];
    let mut order: Vec<(usize, usize)> = Vec::new(); // (vertex, entry half-edge)
    let tail = map.tail(root);
    v_index[tail] = 0;
    order.push((tail, root));
    let mut numbered: Vec<usize> = Vec::with_capacity(nh);
    let mut seps: Vec<usize> = Vec::with_capacity(map.n_vertices());
    let mut qi = 0;
    while qi < order.len() {
        let (_, entry) = order[qi];
        qi += 1;
        let mut h = entry;
        loop {
            he_index[h] = numbered.len() as u32;
            numbered.push(h);
            let w = map.head(h);
            if v_index[w] == u32::MAX {
                v_index[w] = order.len() as u32;
                order.push((w, map.alpha(h)));
            }
            h = map.sigma(h);
            if h == entry {
                break;
            }
        }
        seps.push(numbered.len());
    }
    let mut code = Vec::with_capacity(nh + seps.len() + 1);
    let mut next_sep = 0;
    for (i, &h) in numbered.iter().enumerate() {
        while next_sep < seps.len() && seps[next_sep] == i {
            code.push(u32::MAX);
            next_sep += 1;
        }
        code.push(he_index[map.alpha(h)]);
    }
    code.push(u32::MAX);
    if let Some(m) = marked {
        code.push(v_index[m]);
    }
    code
}

/// Minimal canonical code over all root choices; an isomorphism invariant of
/// the (optionally pointed) unrooted map.
pub fn canonical_form(map: &PlanarMap, marked: Option<usize>) -> Vec<u32> {
    (0..map.n_half_edges())
        .map(|r| canonical_code(map, r, marked))
        .min()
        .unwrap()
}

/// Order of the automorphism group of the (optionally pointed) map.
///
/// Rooted maps are rigid, so the roots realizing the minimal canonical code
/// form a single orbit of the automorphism group acting freely on directed
/// edges; the count of minimizing roots is the group order.
pub fn automorphism_order(map: &PlanarMap, marked: Option<usize>) -> usize {
    let codes: Vec<Vec<u32>> =
        (0..map.n_half_edges()).map(|r| canonical_code(map, r, marked)).collect();
    let min = codes.iter().min().unwrap();
    codes.iter().filter(|c| *c == min).count()
}

/// JSON wire format for maps: 0-based identifiers.
#[derive(Serialize, Deserialize)]
pub struct MapJson {
    pub half_edges: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<usize>,
}

impl Quadrangulation {
    pub fn to_json(&self) -> MapJson {
        MapJson {
            half_edges: self.map.n_half_edges(),
            alpha: (0..self.map.n_half_edges()).map(|h| self.map.alpha(h)).collect(),
            sigma: (0..self.map.n_half_edges()).map(|h| self.map.sigma(h)).collect(),
            root: self.root,
            origin: self.origin,
        }
    }

    pub fn from_json(j: &MapJson) -> Result<Self> {
        if j.alpha.len() != j.half_edges || j.sigma.len() != j.half_edges {
            return Err(Error::MalformedPermutation);
        }
        Quadrangulation::build(j.alpha.clone(), j.sigma.clone(), j.root, j.origin)
    }
}

/// The 2-edge path quadrangulation (the unique one-face quadrangulation),
/// rooted at the end so the origin is a path endpoint. Used in tests and
/// docs.
pub fn path_quadrangulation() -> Quadrangulation {
    // vertices a - b - c; edges {0,1} = a-b, {2,3} = b-c
    let alpha = vec![1, 0, 3, 2];
    let sigma = vec![0, 2, 1, 3];
    Quadrangulation::build(alpha, sigma, Some(0), Some(0)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_map_is_smallest_quadrangulation() {
        let q = path_quadrangulation();
        assert_eq!(q.map.n_vertices(), 3);
        assert_eq!(q.map.n_edges(), 2);
        assert_eq!(q.map.n_faces(), 1);
        assert_eq!(q.map.face_degrees(), vec![4]);
    }

    #[test]
    fn odd_face_rejected() {
        // one edge alone: single face of degree 2
        let alpha = vec![1, 0];
        let sigma = vec![0, 1];
        let m = PlanarMap::new(alpha, sigma).unwrap();
        assert!(matches!(
            Quadrangulation::new(m, None, None),
            Err(Error::FaceDegreeNot4 { face_len: 2 })
        ));
    }

    #[test]
    fn involution_validated() {
        assert!(matches!(
            PlanarMap::new(vec![0, 1], vec![0, 1]),
            Err(Error::NotInvolution)
        ));
        assert!(matches!(
            PlanarMap::new(vec![1, 0, 3], vec![0, 1, 2]),
            Err(Error::MalformedPermutation)
        ));
    }

    #[test]
    fn bfs_labels_on_path() {
        let q = path_quadrangulation();
        let l = q.bfs_labels(0);
        assert_eq!(l.labels, vec![0, 1, 2]);
        assert!(l.validate(&q.map));
        let center = q.bfs_labels(1);
        assert_eq!(center.labels, vec![1, 0, 1]);
    }

    #[test]
    fn path_automorphisms() {
        let q = path_quadrangulation();
        // pointed at the center vertex: the reflection through the path
        assert_eq!(automorphism_order(&q.map, Some(1)), 2);
        // pointed at an end: rigid
        assert_eq!(automorphism_order(&q.map, Some(0)), 1);
        assert_eq!(automorphism_order(&q.map, Some(2)), 1);
    }

    #[test]
    fn json_round_trip() {
        let q = path_quadrangulation();
        let j = q.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: MapJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Quadrangulation::from_json(&back).unwrap(), q);
    }
}
