//! The quadrangulation ↔ well-labeled-tree correspondence and its
//! marked-geodesic extension.
//!
//! Forward direction ([`quad_to_tree`]): faces of a rooted quadrangulation
//! are classified by the distance labels of their corners; each face
//! contributes one tree edge (an existing edge for simple faces, a new
//! diagonal for confluent ones).
//!
//! Inverse direction ([`tree_to_quad`]): every corner is joined by an arch
//! to its successor, the first corner with the next smaller label along the
//! contour; label-1 corners arch to a fresh origin vertex.
//!
//! The geodesic extension cuts a marked geodesic open ([`cut_along_path`]),
//! fills the hole with a ladder of squares ([`unzip_to_spine_tree`]), and
//! relates spine trees to quadrangulations with a geodesic boundary
//! ([`spine_tree_to_boundary`], [`zip_boundary`], [`decompose_irreducible`]).

use crate::error::{Error, Result};
use crate::geodesic::GeodesicPath;
use crate::map::{bfs_labels, PlanarMap, Quadrangulation};
use crate::tree::{SpineTree, WellLabeledTree};

/// Result of the arch construction: the rooted quadrangulation plus the
/// vertex correspondence.
pub struct TreeToQuad {
    pub quad: Quadrangulation,
    /// tree vertex -> quadrangulation vertex
    pub vertex_map: Vec<usize>,
    /// the added origin vertex (label 0)
    pub origin: usize,
}

/// Builds the rooted quadrangulation associated with a well-labeled tree.
///
/// Arches leave every corner toward its successor; within one corner the
/// incoming arch ends are nested by decreasing source position and the
/// outgoing end comes last, which is forced by planarity of the chord
/// diagram. The origin vertex sits in the contour gap following the planted
/// corner; the root is the reversed arch from the planted corner.
pub fn tree_to_quad(t: &WellLabeledTree) -> TreeToQuad {
    assert!(t.root_label() == 1, "tree must be planted at a corner labeled 1");
    assert!(t.n_edges() >= 1, "the single-vertex tree has no quadrangulation");
    let corners = t.corners();
    let m = corners.len();
    let max_label = corners.iter().map(|c| c.label).max().unwrap();

    // successor of each corner: first corner after it (cyclically) whose
    // label is one smaller; label-1 corners keep usize::MAX (origin)
    let mut succ = vec![usize::MAX; m];
    {
        let mut last = vec![usize::MAX; max_label + 2];
        for k in (0..2 * m).rev() {
            let kk = k % m;
            if k < m && corners[kk].label >= 2 {
                let s = last[corners[kk].label - 1];
                debug_assert_ne!(s, usize::MAX);
                succ[kk] = s % m;
            }
            last[corners[kk].label] = k;
        }
    }

    // arch j has half-edges 2j (outgoing, at corner j) and 2j+1 (incoming,
    // at succ(j) or at the origin)
    let mut arrivals: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut origin_arrivals: Vec<usize> = Vec::new();
    for j in 0..m {
        if corners[j].label == 1 {
            origin_arrivals.push(j);
        } else {
            arrivals[succ[j]].push(j);
        }
    }

    let nv = t.n_vertices();
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (j, c) in corners.iter().enumerate() {
        per_vertex[c.vertex].push(j);
    }

    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nv + 1];
    for v in 0..nv {
        for &j in &per_vertex[v] {
            for &s in arrivals[j].iter().rev() {
                rot[v].push(2 * s + 1);
            }
            rot[v].push(2 * j);
        }
    }
    for &s in origin_arrivals.iter().rev() {
        rot[nv].push(2 * s + 1);
    }

    let nh = 2 * m;
    let mut alpha = vec![0usize; nh];
    let mut sigma = vec![0usize; nh];
    for j in 0..m {
        alpha[2 * j] = 2 * j + 1;
        alpha[2 * j + 1] = 2 * j;
    }
    for list in &rot {
        for (p, &h) in list.iter().enumerate() {
            sigma[h] = list[(p + 1) % list.len()];
        }
    }

    let root = 1; // incoming end of the planted corner's arch, at the origin
    let quad = Quadrangulation::build(alpha, sigma, Some(root), None)
        .expect("arch construction always yields a quadrangulation");
    let origin = quad.map.tail(root);
    let vertex_map: Vec<usize> =
        (0..nv).map(|v| quad.map.tail(2 * per_vertex[v][0])).collect();
    let quad = Quadrangulation { origin: Some(origin), ..quad };
    TreeToQuad { quad, vertex_map, origin }
}

/// Result of the face-classification direction: the planted tree plus the
/// vertex correspondence.
pub struct QuadToTree {
    pub tree: WellLabeledTree,
    /// tree vertex (preorder id) -> quadrangulation vertex
    pub quad_vertex: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum TreeItem {
    /// a selected quadrangulation half-edge (tail at the current vertex)
    Edge(usize),
    /// a diagonal of a confluent face: (id, end index at this vertex)
    Diag(usize, usize),
}

/// Applies the face rules to a rooted quadrangulation and reads off the
/// planted well-labeled tree.
pub fn quad_to_tree(q: &Quadrangulation) -> QuadToTree {
    let map = &q.map;
    let root = q.root.expect("quadrangulation must be rooted");
    let origin = map.tail(root);
    let labels = bfs_labels(map, origin);

    let mut is_tree = vec![false; map.n_half_edges()];
    // diagonal ends: anchored after a half-edge in rotation order
    let mut diag_after: Vec<Option<usize>> = vec![None; map.n_half_edges()];
    let mut diag_ends: Vec<[usize; 2]> = Vec::new();
    let mut seen_face = vec![false; map.n_faces()];
    for h0 in 0..map.n_half_edges() {
        let f = map.face_of(h0);
        if seen_face[f] {
            continue;
        }
        seen_face[f] = true;
        let cycle = map.face_cycle(h0);
        debug_assert_eq!(cycle.len(), 4);
        let tl: Vec<usize> = cycle.iter().map(|&h| labels.labels[map.tail(h)]).collect();
        let lmax = *tl.iter().max().unwrap();
        let lmin = *tl.iter().min().unwrap();
        if lmax == lmin + 2 {
            // simple face: the unique descending edge out of the deepest
            // corner; in the face-walk orientation used here it is traversed
            // ascending, so select the half-edge into the deepest corner
            let pos = tl.iter().position(|&l| l == lmax).unwrap();
            let h = cycle[(pos + 3) % 4];
            is_tree[h] = true;
            is_tree[map.alpha(h)] = true;
        } else {
            // confluent face: diagonal between the two label-(i+1) corners
            debug_assert_eq!(lmax, lmin + 1);
            let d = diag_ends.len();
            let mut ends = [usize::MAX; 2];
            let mut n = 0;
            for &h in &cycle {
                if labels.labels[map.head(h)] == lmax {
                    ends[n] = map.alpha(h); // anchor: corner after alpha(h)
                    n += 1;
                }
            }
            debug_assert_eq!(n, 2);
            diag_after[ends[0]] = Some(d);
            diag_after[ends[1]] = Some(d);
            diag_ends.push(ends);
        }
    }

    // per-vertex cyclic item lists, remembering positions
    let nv = map.n_vertices();
    let mut items: Vec<Vec<TreeItem>> = vec![Vec::new(); nv];
    let mut edge_pos = vec![(usize::MAX, usize::MAX); map.n_half_edges()];
    let mut diag_pos = vec![[(usize::MAX, usize::MAX); 2]; diag_ends.len()];
    for v in 0..nv {
        for h in map.half_edges_at(v) {
            if is_tree[h] {
                edge_pos[h] = (v, items[v].len());
                items[v].push(TreeItem::Edge(h));
            }
            if let Some(d) = diag_after[h] {
                let end = if diag_ends[d][0] == h { 0 } else { 1 };
                diag_pos[d][end] = (v, items[v].len());
                items[v].push(TreeItem::Diag(d, end));
            }
        }
    }

    // planted tree root: the head of the root edge, entered at the corner
    // right after alpha(root)
    let w = map.head(root);
    let children: Vec<Vec<usize>> = Vec::new();
    let tlabels: Vec<usize> = Vec::new();
    let quad_vertex: Vec<usize> = Vec::new();

    struct Ctx<'a> {
        map: &'a PlanarMap,
        labels: &'a [usize],
        items: &'a [Vec<TreeItem>],
        edge_pos: &'a [(usize, usize)],
        diag_pos: &'a [[(usize, usize); 2]],
        diag_ends: &'a [[usize; 2]],
        children: Vec<Vec<usize>>,
        tlabels: Vec<usize>,
        quad_vertex: Vec<usize>,
    }

    impl Ctx<'_> {
        fn new_vertex(&mut self, qv: usize) -> usize {
            let id = self.tlabels.len();
            self.children.push(Vec::new());
            self.tlabels.push(self.labels[qv]);
            self.quad_vertex.push(qv);
            id
        }

        /// Expands the tree at `qv` (tree id `tid`), whose entering item
        /// sits at list position `entry` (children follow cyclically).
        fn expand(&mut self, qv: usize, tid: usize, entry: usize, skip_entry: bool) {
            let list = &self.items[qv];
            let len = list.len();
            let take = if skip_entry { len - 1 } else { len };
            for step in 1..=take {
                let item = list[(entry + step) % len];
                match item {
                    TreeItem::Edge(h) => {
                        let cqv = self.map.head(h);
                        let cid = self.new_vertex(cqv);
                        self.children[tid].push(cid);
                        let (pv, pidx) = self.edge_pos[self.map.alpha(h)];
                        debug_assert_eq!(pv, cqv);
                        self.expand(cqv, cid, pidx, true);
                    }
                    TreeItem::Diag(d, end) => {
                        let other = 1 - end;
                        let (pv, pidx) = self.diag_pos[d][other];
                        let cqv = self.map.tail(self.diag_ends[d][other]);
                        debug_assert_eq!(pv, cqv);
                        let cid = self.new_vertex(cqv);
                        self.children[tid].push(cid);
                        self.expand(cqv, cid, pidx, true);
                    }
                }
            }
        }
    }

    let mut ctx = Ctx {
        map,
        labels: &labels.labels,
        items: &items,
        edge_pos: &edge_pos,
        diag_pos: &diag_pos,
        diag_ends: &diag_ends,
        children,
        tlabels,
        quad_vertex,
    };
    let root_id = ctx.new_vertex(w);

    // entry position for the root: the virtual position of alpha(root).
    // Walk w's rotation from alpha(root); the first item encountered after
    // it (including a diagonal anchored at alpha(root) itself) is the first
    // child. We emulate this by finding the item position just before.
    let aroot = map.alpha(root);
    let list_len = ctx.items[w].len();
    debug_assert!(list_len > 0);
    // locate the last item at or before alpha(root) in rotation order:
    // scan backwards from alpha(root) until an anchor position is hit
    let entry_idx;
    {
        // build the rotation of w once, find for each item its anchor order
        let rotation = map.half_edges_at(w);
        let pos_of = |h: usize| rotation.iter().position(|&x| x == h).unwrap();
        let aroot_pos = pos_of(aroot);
        // anchor ordering key: (rotation position, 0 for edge, 1 for diag)
        let mut keyed: Vec<(usize, usize, usize)> = Vec::new(); // (rot pos, kind, item idx)
        for (idx, item) in ctx.items[w].iter().enumerate() {
            match item {
                TreeItem::Edge(h) => keyed.push((pos_of(*h), 0, idx)),
                TreeItem::Diag(d, end) => {
                    let anchor = ctx.diag_ends[*d][*end];
                    keyed.push((pos_of(anchor), 1, idx));
                }
            }
        }
        keyed.sort();
        // find the last keyed item with key <= (aroot_pos, 1): a diagonal
        // anchored at alpha(root) still comes after it, so key (aroot_pos, 0)
        let before = keyed
            .iter()
            .rev()
            .find(|&&(p, kind, _)| (p, kind) <= (aroot_pos, 0))
            .or_else(|| keyed.last());
        entry_idx = before.map(|&(_, _, idx)| idx).unwrap();
    }
    ctx.expand(w, root_id, entry_idx, false);

    debug_assert_eq!(ctx.tlabels.len(), map.n_vertices() - 1, "tree spans all but origin");
    debug_assert_eq!(ctx.tlabels.len(), map.n_faces() + 1, "one edge per face");
    QuadToTree {
        tree: WellLabeledTree { children: ctx.children, labels: ctx.tlabels },
        quad_vertex: ctx.quad_vertex,
    }
}

/// Outcome of cutting a map open along a geodesic: the map with a hole of
/// degree `2i`, plus the half-edge ids of the two copies of the path.
pub struct CutResult {
    pub map: PlanarMap,
    /// left copy, step k from distance k-1 to distance k (original ids)
    pub left: Vec<usize>,
    /// right copy (fresh ids)
    pub right: Vec<usize>,
}

/// Duplicates the edges of `path` and splits its interior vertices so the
/// path becomes a hole bounded by two copies. Distances from the origin are
/// unchanged.
pub fn cut_along_path(q: &Quadrangulation, path: &GeodesicPath) -> CutResult {
    let map = &q.map;
    let i = path.len();
    assert!(i >= 1);
    let nh = map.n_half_edges();
    // rotation lists per vertex
    let mut rot: Vec<Vec<usize>> = (0..map.n_vertices()).map(|v| map.half_edges_at(v)).collect();

    let mut alpha: Vec<usize> = (0..nh).map(|h| map.alpha(h)).collect();
    alpha.extend(std::iter::repeat(0).take(2 * i));
    let right: Vec<usize> = (0..i).map(|k| nh + 2 * k).collect();
    for k in 0..i {
        alpha[nh + 2 * k] = nh + 2 * k + 1;
        alpha[nh + 2 * k + 1] = nh + 2 * k;
    }
    let left = path.half_edges.clone();

    // origin: the hole opens between the copies, with the fresh copy
    // preceding the original in rotation so the hole walk closes up
    let v0 = path.vertices[0];
    {
        let list = &mut rot[v0];
        let p = list.iter().position(|&h| h == left[0]).unwrap();
        list.insert(p, right[0]);
    }
    // target: the reversed fresh strand directly follows the original one
    let vi = path.vertices[i];
    {
        let list = &mut rot[vi];
        let p = list.iter().position(|&h| h == map.alpha(left[i - 1])).unwrap();
        list.insert(p + 1, alpha[right[i - 1]]);
    }
    // interior vertices split in two
    let mut extra_rotations: Vec<Vec<usize>> = Vec::new();
    for k in 1..i {
        let v = path.vertices[k];
        let inc = map.alpha(left[k - 1]); // strand back toward v_{k-1}
        let out = left[k]; // strand toward v_{k+1}
        let list = rot[v].clone();
        let len = list.len();
        let pi = list.iter().position(|&h| h == inc).unwrap();
        // segment from inc (exclusive) to out (exclusive): the right side
        let mut xs = Vec::new();
        let mut p = (pi + 1) % len;
        while list[p] != out {
            xs.push(list[p]);
            p = (p + 1) % len;
        }
        // remaining strands: the left side
        let mut ys = Vec::new();
        p = (p + 1) % len;
        while list[p] != inc {
            ys.push(list[p]);
            p = (p + 1) % len;
        }
        // left vertex keeps the original path ids and the ys
        let mut lrot = vec![inc, out];
        lrot.extend(ys);
        rot[v] = lrot;
        // right vertex gets the copies and the xs
        let mut rrot = vec![alpha[right[k - 1]]];
        rrot.extend(xs);
        rrot.push(right[k]);
        extra_rotations.push(rrot);
    }

    let mut sigma = vec![usize::MAX; nh + 2 * i];
    for list in rot.iter().chain(extra_rotations.iter()) {
        for (p, &h) in list.iter().enumerate() {
            sigma[h] = list[(p + 1) % list.len()];
        }
    }
    let map = PlanarMap::new(alpha, sigma).expect("cut preserves the sphere");
    CutResult { map, left, right }
}

/// Result of [`unzip_to_spine_tree`].
pub struct Unzipped {
    pub spine_tree: SpineTree,
    /// the modified quadrangulation (cut + filled ladder), rooted at the
    /// left 0 -> 1 edge
    pub modified: Quadrangulation,
}

/// Cuts a marked geodesic open, fills the hole with a ladder of `i-1`
/// squares, roots at the left 0→1 edge and applies the face rules; the
/// outcome is a spine tree with the geodesic length as its spine.
pub fn unzip_to_spine_tree(q: &Quadrangulation, path: &GeodesicPath) -> Result<Unzipped> {
    let i = path.len();
    let labels = bfs_labels(&q.map, path.origin());
    if i == 0 || !path.certify(&q.map, &labels) {
        return Err(Error::NotAGeodesic);
    }
    if i == 1 {
        // marking a geodesic of length 1 is rooting at an oriented edge
        let rooted = Quadrangulation {
            map: q.map.clone(),
            root: Some(path.half_edges[0]),
            origin: Some(path.origin()),
        };
        let qt = quad_to_tree(&rooted);
        let spine = vec![0usize];
        let spine_tree = SpineTree { geodesic_len: 1, tree: qt.tree, spine };
        return Ok(Unzipped { spine_tree, modified: rooted });
    }

    let cut = cut_along_path(q, path);
    let back: Vec<usize> = cut.right.clone();
    Ok(fill_and_read_spine(&cut.map, i, &cut.left, &back))
}

/// Fills the hole bounded by `out` (half-edges of one arc, origin to
/// antipode) and `back` (the other arc, same orientation) with `i-1`
/// squares, roots at the first out edge and applies the face rules.
fn fill_and_read_spine(map: &PlanarMap, i: usize, out: &[usize], back: &[usize]) -> Unzipped {
    let nh = map.n_half_edges();
    let mut rot: Vec<Vec<usize>> = (0..map.n_vertices()).map(|v| map.half_edges_at(v)).collect();
    let mut alpha: Vec<usize> = (0..nh).map(|h| map.alpha(h)).collect();
    // chords from the back vertex at distance k to the out vertex at k+1
    for k in 1..=i.saturating_sub(2) {
        let c = alpha.len();
        alpha.push(c + 1);
        alpha.push(c);
        let rv = map.tail(back[k]);
        let p = rot[rv].iter().position(|&h| h == back[k]).unwrap();
        rot[rv].insert(p + 1, c);
        let lv = map.tail(out[k + 1]);
        let p = rot[lv].iter().position(|&h| h == map.alpha(out[k])).unwrap();
        rot[lv].insert(p + 1, c + 1);
    }
    let mut sigma = vec![usize::MAX; alpha.len()];
    for list in rot.iter() {
        for (p, &h) in list.iter().enumerate() {
            sigma[h] = list[(p + 1) % list.len()];
        }
    }
    let filled = Quadrangulation::build(alpha, sigma, Some(out[0]), None)
        .expect("ladder fill closes the hole into squares");
    let origin = filled.map.tail(out[0]);
    let modified = Quadrangulation { origin: Some(origin), ..filled };

    let qt = quad_to_tree(&modified);
    // spine vertices: the heads of the out arc
    let mut tree_of_quad = vec![usize::MAX; modified.map.n_vertices()];
    for (tid, &qv) in qt.quad_vertex.iter().enumerate() {
        tree_of_quad[qv] = tid;
    }
    let spine: Vec<usize> = (0..i).map(|k| tree_of_quad[modified.map.head(out[k])]).collect();
    let spine_tree = SpineTree { geodesic_len: i, tree: qt.tree, spine };
    Unzipped { spine_tree, modified }
}

/// Inverse of [`spine_tree_to_boundary`]: fills the hole with the square
/// ladder and reads the spine tree back off.
pub fn boundary_to_spine_tree(b: &BoundaryQuad) -> SpineTree {
    let i = b.geodesic_len;
    if i == 1 {
        if b.is_single_edge() {
            return SpineTree {
                geodesic_len: 1,
                tree: WellLabeledTree::single_vertex(1),
                spine: vec![0],
            };
        }
        // glue the bigon shut and mark the glued edge
        let (q, p) = zip_boundary(b).expect("length-2 boundaries have no internal pinch");
        let qt = quad_to_tree(&Quadrangulation { root: Some(p.half_edges[0]), ..q });
        return SpineTree { geodesic_len: 1, tree: qt.tree, spine: vec![0] };
    }
    let out: Vec<usize> = (1..=i).map(|k| b.out_edge(k)).collect();
    let back: Vec<usize> = (1..=i).map(|k| b.back_edge(k)).collect();
    fill_and_read_spine(&b.map, i, &out, &back).spine_tree
}

/// Concatenates two boundary quadrangulations at a pinch point: the antipode
/// of `a` is identified with the origin of `b`, arcs composing.
pub fn juxtapose(a: &BoundaryQuad, b: &BoundaryQuad) -> BoundaryQuad {
    let (ia, ib) = (a.geodesic_len, b.geodesic_len);
    let na = a.map.n_half_edges();
    let mut alpha: Vec<usize> = (0..na).map(|h| a.map.alpha(h)).collect();
    alpha.extend((0..b.map.n_half_edges()).map(|h| b.map.alpha(h) + na));
    let mut rot: Vec<Vec<usize>> =
        (0..a.map.n_vertices()).map(|v| a.map.half_edges_at(v)).collect();
    let b_origin_cycle: Vec<usize> = {
        // b's rotation at its origin, starting at the first out edge
        let start = b.out_edge(1);
        let mut cyc = vec![start];
        let mut h = b.map.sigma(start);
        while h != start {
            cyc.push(h);
            h = b.map.sigma(h);
        }
        cyc.iter().map(|&h| h + na).collect()
    };
    for v in 0..b.map.n_vertices() {
        if v != b.origin {
            rot.push(b.map.half_edges_at(v).iter().map(|&h| h + na).collect());
        }
    }
    // splice b's origin rotation into a's hole corner at the antipode,
    // between alpha(out_a(ia)) and alpha(back_a(ia))
    let av = a.out_vertex(ia);
    let list = &mut rot[av];
    let p = list.iter().position(|&h| h == a.map.alpha(a.out_edge(ia))).unwrap();
    for (off, &h) in b_origin_cycle.iter().enumerate() {
        list.insert(p + 1 + off, h);
    }
    let mut sigma = vec![usize::MAX; alpha.len()];
    for lst in rot.iter() {
        for (p, &h) in lst.iter().enumerate() {
            sigma[h] = lst[(p + 1) % lst.len()];
        }
    }
    let map = PlanarMap::new(alpha, sigma).expect("juxtaposition keeps a disk");
    let start = a.out_edge(1);
    let origin = map.tail(start);
    boundary_from_hole(map, ia + ib, origin, start)
}

/// A quadrangulation of the disk whose boundary is two geodesic arcs of
/// length `i` from a marked origin to the antipodal boundary vertex.
#[derive(Clone, Debug)]
pub struct BoundaryQuad {
    pub map: PlanarMap,
    pub geodesic_len: usize,
    pub origin: usize,
    /// the hole walk: `2i` half-edges, first `i` from origin to antipode
    /// (the "out" arc), last `i` back (reverse of the other arc)
    pub walk: Vec<usize>,
}

impl BoundaryQuad {
    /// Vertex at distance `j` on the out arc (`0 <= j <= i`).
    pub fn out_vertex(&self, j: usize) -> usize {
        if j < self.geodesic_len {
            self.map.tail(self.walk[j])
        } else {
            self.map.head(self.walk[self.geodesic_len - 1])
        }
    }

    /// Vertex at distance `j` on the back arc.
    pub fn back_vertex(&self, j: usize) -> usize {
        let i = self.geodesic_len;
        if j == i {
            self.out_vertex(i)
        } else {
            self.map.tail(self.walk[(2 * i - j) % (2 * i)])
        }
    }

    /// Edge (as the out-oriented half-edge) at step `k` (1-based) of the out
    /// arc.
    pub fn out_edge(&self, k: usize) -> usize {
        self.walk[k - 1]
    }

    /// Edge at step `k` of the back arc, oriented away from the origin.
    pub fn back_edge(&self, k: usize) -> usize {
        self.map.alpha(self.walk[2 * self.geodesic_len - k])
    }

    /// Number of interior faces.
    pub fn n_faces(&self) -> usize {
        self.map.n_faces() - 1
    }

    /// Distances `j` (1..i-1) at which the two arcs share a vertex.
    pub fn pinch_points(&self) -> Vec<usize> {
        (1..self.geodesic_len)
            .filter(|&j| self.out_vertex(j) == self.back_vertex(j))
            .collect()
    }

    /// Full validity check: hole walk consistent, interior faces of degree
    /// 4, both arcs geodesic (antipode at distance exactly `i`).
    pub fn validate(&self) -> bool {
        let i = self.geodesic_len;
        if self.walk.len() != 2 * i {
            return false;
        }
        if self.map.tail(self.walk[0]) != self.origin {
            return false;
        }
        let hole = self.map.face_of(self.walk[0]);
        for (k, &h) in self.walk.iter().enumerate() {
            if self.map.face_of(h) != hole {
                return false;
            }
            if self.map.phi(h) != self.walk[(k + 1) % (2 * i)] {
                return false;
            }
        }
        for (f, d) in self.map.face_degrees().into_iter().enumerate() {
            if f != hole && d != 4 {
                return false;
            }
        }
        let labels = bfs_labels(&self.map, self.origin);
        if labels.labels[self.out_vertex(i)] != i {
            return false;
        }
        (0..=i).all(|j| {
            labels.labels[self.out_vertex(j)] == j && labels.labels[self.back_vertex(j)] == j
        })
    }

    /// The doubled single edge: the degenerate boundary quadrangulation with
    /// no interior face, both arcs being the same edge.
    pub fn single_edge() -> BoundaryQuad {
        let map = PlanarMap::new(vec![1, 0], vec![0, 1]).unwrap();
        let origin = map.tail(0);
        BoundaryQuad { map, geodesic_len: 1, origin, walk: vec![0, 1] }
    }

    /// True iff this is a doubled single edge (both arcs the same edge).
    pub fn is_single_edge(&self) -> bool {
        self.geodesic_len == 1 && self.map.n_edges() == 1
    }
}

/// Applies the arch construction to the underlying tree of a spine tree and
/// removes the winding arches (the out-arches of the corners on the spine's
/// far side), reopening the geodesic boundary.
pub fn spine_tree_to_boundary(s: &SpineTree) -> BoundaryQuad {
    assert!(s.validate(), "invalid spine tree");
    let i = s.geodesic_len;
    if i == 1 {
        if s.tree.n_edges() == 0 {
            return BoundaryQuad::single_edge();
        }
        // a plain planted tree: cut the rooted quadrangulation at its root
        let tq = tree_to_quad(&s.tree);
        let root = tq.quad.root.unwrap();
        let map = &tq.quad.map;
        let path = GeodesicPath {
            vertices: vec![map.tail(root), map.head(root)],
            half_edges: vec![root],
        };
        let cut = cut_along_path(&tq.quad, &path);
        let start = cut.left[0]; // the hole sits on the original copy's side
        let origin = cut.map.tail(start);
        return boundary_from_hole(cut.map, 1, origin, start);
    }

    let corners = s.tree.corners();
    let tq = tree_to_quad(&s.tree);
    // winding arches: at spine vertices u_2..u_{i-1}, the corner between the
    // parent edge and the spine child, i.e. the vertex's first corner in
    // contour order (the side the geodesic was unzipped toward)
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); s.tree.n_vertices()];
    for (j, c) in corners.iter().enumerate() {
        per_vertex[c.vertex].push(j);
    }
    let mut dead = vec![false; tq.quad.map.n_half_edges()];
    for jj in 1..i - 1 {
        let u = s.spine[jj];
        let corner = per_vertex[u][0];
        dead[2 * corner] = true;
        dead[2 * corner + 1] = true;
    }
    // root arch stays: its left 0->1 edge becomes the first out edge
    let map = &tq.quad.map;
    let keep: Vec<usize> = (0..map.n_half_edges()).filter(|&h| !dead[h]).collect();
    let mut new_id = vec![usize::MAX; map.n_half_edges()];
    for (idx, &h) in keep.iter().enumerate() {
        new_id[h] = idx;
    }
    let mut alpha = vec![usize::MAX; keep.len()];
    let mut sigma = vec![usize::MAX; keep.len()];
    for &h in &keep {
        alpha[new_id[h]] = new_id[map.alpha(h)];
        let mut nxt = map.sigma(h);
        while dead[nxt] {
            nxt = map.sigma(nxt);
        }
        sigma[new_id[h]] = new_id[nxt];
    }
    let cutmap = PlanarMap::new(alpha, sigma).expect("winding arch removal keeps the sphere");
    // the reopened hole carries the root arch, oriented out of the origin
    let start = new_id[1];
    let origin = cutmap.tail(start);
    boundary_from_hole(cutmap, i, origin, start)
}

/// Assembles a `BoundaryQuad` given the map, the origin and one hole
/// half-edge with tail at the origin heading along an arc.
fn boundary_from_hole(map: PlanarMap, i: usize, origin: usize, start: usize) -> BoundaryQuad {
    let walk = map.face_cycle(start);
    assert_eq!(walk.len(), 2 * i, "hole must have degree 2i");
    let b = BoundaryQuad { map, geodesic_len: i, origin, walk };
    debug_assert!(b.validate());
    b
}

/// Glues the two boundary arcs around the sphere, recovering the closed
/// quadrangulation with its marked geodesic. Inverse of cutting.
pub fn zip_boundary(b: &BoundaryQuad) -> Result<(Quadrangulation, GeodesicPath)> {
    let i = b.geodesic_len;
    let pinches = b.pinch_points();
    if !pinches.is_empty() {
        return Err(Error::HasPinchPoints { pinches });
    }
    let map = &b.map;
    let mut rot: Vec<Vec<usize>> = (0..map.n_vertices()).map(|v| map.half_edges_at(v)).collect();
    let mut dead_he = vec![false; map.n_half_edges()];
    let mut dead_v = vec![false; map.n_vertices()];
    // the back-arc edges disappear; out-arc edges survive as the geodesic
    for k in 1..=i {
        let bk = b.back_edge(k);
        dead_he[bk] = true;
        dead_he[map.alpha(bk)] = true;
    }
    // merge interior arc vertices: left cycle (alpha(o_k), o_{k+1}, ys...),
    // right cycle (alpha(b_k), xs..., b_{k+1}); merged cycle
    // (alpha(o_k), xs..., o_{k+1}, ys...)
    for k in 1..i {
        let lv = map.head(b.out_edge(k));
        let rv = map.head(b.back_edge(k));
        let rlist = rot[rv].clone();
        let len = rlist.len();
        let pa = rlist.iter().position(|&h| h == map.alpha(b.back_edge(k))).unwrap();
        let mut xs = Vec::new();
        let mut p = (pa + 1) % len;
        while rlist[p] != b.back_edge(k + 1) {
            xs.push(rlist[p]);
            p = (p + 1) % len;
        }
        let llist = &mut rot[lv];
        let pl = llist.iter().position(|&h| h == map.alpha(b.out_edge(k))).unwrap();
        let mut merged = vec![map.alpha(b.out_edge(k))];
        merged.extend(xs);
        let llen = llist.len();
        for t in 1..llen {
            merged.push(llist[(pl + t) % llen]);
        }
        *llist = merged;
        rot[rv].clear();
        dead_v[rv] = true;
    }
    // origin: drop the dead strand b_1; antipode: drop alpha(b_i)
    for (v, strand) in [(b.origin, b.back_edge(1)), (b.out_vertex(i), map.alpha(b.back_edge(i)))] {
        let list = &mut rot[v];
        list.retain(|&h| h != strand);
    }
    // rebuild with dead half-edges removed
    let keep: Vec<usize> = (0..map.n_half_edges()).filter(|&h| !dead_he[h]).collect();
    let mut new_id = vec![usize::MAX; map.n_half_edges()];
    for (idx, &h) in keep.iter().enumerate() {
        new_id[h] = idx;
    }
    let mut alpha = vec![usize::MAX; keep.len()];
    let mut sigma = vec![usize::MAX; keep.len()];
    for list in rot.iter() {
        for (p, &h) in list.iter().enumerate() {
            if dead_he[h] {
                continue;
            }
            let mut q = (p + 1) % list.len();
            while dead_he[list[q]] {
                q = (q + 1) % list.len();
            }
            sigma[new_id[h]] = new_id[list[q]];
        }
    }
    for &h in &keep {
        alpha[new_id[h]] = new_id[map.alpha(h)];
    }
    let newmap = PlanarMap::new(alpha, sigma).expect("zip closes the sphere");
    let half_edges: Vec<usize> = (1..=i).map(|k| new_id[b.out_edge(k)]).collect();
    let mut vertices = vec![newmap.tail(half_edges[0])];
    for &h in &half_edges {
        vertices.push(newmap.head(h));
    }
    let quad = Quadrangulation::new(newmap, Some(half_edges[0]), Some(vertices[0]))?;
    Ok((quad, GeodesicPath { vertices, half_edges }))
}

/// One irreducible component of a boundary quadrangulation: a doubled single
/// edge or a pinch-free boundary quadrangulation.
pub fn decompose_irreducible(b: &BoundaryQuad) -> Vec<BoundaryQuad> {
    let i = b.geodesic_len;
    let mut cuts = vec![0usize];
    cuts.extend(b.pinch_points());
    cuts.push(i);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, c) = (w[0], w[1]);
        if c == a + 1 {
            let oe = b.out_edge(c);
            let be = b.back_edge(c);
            if oe == be {
                out.push(BoundaryQuad::single_edge());
                continue;
            }
        }
        out.push(extract_component(b, a, c));
    }
    out
}

/// Extracts the sub-boundary-quadrangulation between pinch distances `a`
/// and `c`.
fn extract_component(b: &BoundaryQuad, a: usize, c: usize) -> BoundaryQuad {
    let map = &b.map;
    let i = b.geodesic_len;
    // half-edges of the component: hole-side halves of the two arc segments,
    // plus everything in faces flooded from their interior sides without
    // crossing arc edges
    let mut arc_he = vec![false; map.n_half_edges()];
    for k in 1..=i {
        for h in [b.out_edge(k), b.back_edge(k)] {
            arc_he[h] = true;
            arc_he[map.alpha(h)] = true;
        }
    }
    let mut keep_he = vec![false; map.n_half_edges()];
    let mut face_hes: Vec<Vec<usize>> = vec![Vec::new(); map.n_faces()];
    for h in 0..map.n_half_edges() {
        face_hes[map.face_of(h)].push(h);
    }
    let hole = map.face_of(b.walk[0]);
    let mut face_in = vec![false; map.n_faces()];
    let mut stack = Vec::new();
    for k in a + 1..=c {
        for h in [b.out_edge(k), b.back_edge(k)] {
            keep_he[map.alpha(h)] = true; // hole-side half becomes new hole
            keep_he[h] = true;
            let f = map.face_of(h);
            if f != hole && !face_in[f] {
                face_in[f] = true;
                stack.push(f);
            }
        }
    }
    while let Some(f) = stack.pop() {
        for &h in &face_hes[f] {
            keep_he[h] = true;
            if !arc_he[h] {
                let g = map.face_of(map.alpha(h));
                if g != hole && !face_in[g] {
                    face_in[g] = true;
                    stack.push(g);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..map.n_half_edges()).filter(|&h| keep_he[h]).collect();
    let mut new_id = vec![usize::MAX; map.n_half_edges()];
    for (idx, &h) in keep.iter().enumerate() {
        new_id[h] = idx;
    }
    let mut alpha = vec![usize::MAX; keep.len()];
    let mut sigma = vec![usize::MAX; keep.len()];
    for &h in &keep {
        alpha[new_id[h]] = new_id[map.alpha(h)];
        let mut nxt = map.sigma(h);
        while !keep_he[nxt] {
            nxt = map.sigma(nxt);
        }
        sigma[new_id[h]] = new_id[nxt];
    }
    let submap = PlanarMap::new(alpha, sigma).expect("component extraction keeps a disk");
    let first = new_id[b.out_edge(a + 1)];
    let origin = submap.tail(first);
    boundary_from_hole(submap, c - a, origin, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::canonical_code;
    use crate::tree::{enumerate_well_labeled_trees, for_each_spine_tree};

    #[test]
    fn one_edge_trees_to_path_quads() {
        for t in enumerate_well_labeled_trees(1).unwrap() {
            let tq = tree_to_quad(&t);
            assert_eq!(tq.quad.n_faces(), 1);
            let labels = bfs_labels(&tq.quad.map, tq.origin);
            for (v, &qv) in tq.vertex_map.iter().enumerate() {
                assert_eq!(labels.labels[qv], t.labels[v]);
            }
        }
    }

    #[test]
    fn labels_equal_distances_exhaustively() {
        for n in 1..=4 {
            for t in enumerate_well_labeled_trees(n).unwrap() {
                let tq = tree_to_quad(&t);
                assert_eq!(tq.quad.n_faces(), n);
                let labels = bfs_labels(&tq.quad.map, tq.origin);
                for (v, &qv) in tq.vertex_map.iter().enumerate() {
                    assert_eq!(labels.labels[qv], t.labels[v], "{}", t.to_text());
                }
            }
        }
    }

    #[test]
    fn round_trip_tree_quad_tree() {
        for n in 1..=4 {
            for t in enumerate_well_labeled_trees(n).unwrap() {
                let tq = tree_to_quad(&t);
                let back = quad_to_tree(&tq.quad);
                assert_eq!(back.tree, t, "tree {}", t.to_text());
            }
        }
    }

    #[test]
    fn round_trip_quad_tree_quad() {
        // distinct trees give distinct rooted quadrangulations, and the
        // rooted canonical code survives the round trip
        for n in 1..=3 {
            let mut seen = std::collections::HashSet::new();
            for t in enumerate_well_labeled_trees(n).unwrap() {
                let tq = tree_to_quad(&t);
                let code = canonical_code(&tq.quad.map, tq.quad.root.unwrap(), None);
                assert!(seen.insert(code), "duplicate quad from {}", t.to_text());
            }
        }
    }

    #[test]
    fn unzip_round_trips_through_fig11_family() {
        // every (quadrangulation, marked geodesic of length 2) with n <= 2:
        // unzip to a spine tree, rebuild the boundary, zip back
        use crate::geodesic::enumerate_geodesics;
        let mut configs = 0usize;
        for n in 1..=2usize {
            let mut weighted = 0usize;
            for t in crate::tree::enumerate_well_labeled_trees(n).unwrap() {
                let tq = tree_to_quad(&t);
                let q = &tq.quad;
                for origin in 0..q.map.n_vertices() {
                    let labels = bfs_labels(&q.map, origin);
                    for target in 0..q.map.n_vertices() {
                        if labels.labels[target] != 2 {
                            continue;
                        }
                        for p in enumerate_geodesics(q, &labels, target) {
                            let unrooted = Quadrangulation {
                                map: q.map.clone(),
                                root: None,
                                origin: Some(origin),
                            };
                            let u = unzip_to_spine_tree(&unrooted, &p).unwrap();
                            assert!(u.spine_tree.validate());
                            assert_eq!(u.spine_tree.n_non_spine_edges(), n);
                            // distances unchanged by unzip + fill
                            let mod_labels = bfs_labels(
                                &u.modified.map,
                                u.modified.origin.unwrap(),
                            );
                            assert!(mod_labels.validate(&u.modified.map));
                            // bijection I then II recovers the configuration
                            let b = spine_tree_to_boundary(&u.spine_tree);
                            assert!(b.pinch_points().is_empty());
                            let (q2, p2) = zip_boundary(&b).unwrap();
                            let c1 = canonical_code(&q.map, p.half_edges[0], None);
                            let c2 = canonical_code(&q2.map, p2.half_edges[0], None);
                            assert_eq!(c1, c2, "zip does not invert unzip");
                            weighted += 1;
                            configs += 1;
                        }
                    }
                }
            }
            // the number of marked-geodesic configurations is 4n [g^n] U_2
            let eng = crate::series::SeriesEngine::new(3);
            let u2 = eng.u_family(2)[2].clone();
            assert_eq!(crate::series::rat(weighted as i64 / (4 * n) as i64), *u2.coeff(n));
        }
        assert_eq!(configs, 4 + 80); // 1 and 10 configurations, times 4n
    }

    #[test]
    fn boundary_spine_round_trip() {
        // bijection I backwards recovers the spine tree, pinched or not
        for i in 1..=3usize {
            for n in 0..=3usize {
                if i == 3 && n == 3 {
                    continue; // keep the test fast
                }
                for_each_spine_tree(i, n, |s| {
                    let b = spine_tree_to_boundary(s);
                    let back = boundary_to_spine_tree(&b);
                    assert_eq!(&back, s, "bijection I inverse failed");
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn zip_rejects_pinched_boundaries() {
        let mut seen_pinched = false;
        for_each_spine_tree(2, 1, |s| {
            let b = spine_tree_to_boundary(s);
            if !b.pinch_points().is_empty() {
                seen_pinched = true;
                assert!(matches!(
                    zip_boundary(&b),
                    Err(crate::error::Error::HasPinchPoints { .. })
                ));
            }
        })
        .unwrap();
        assert!(seen_pinched);
    }

    #[test]
    fn irreducible_decomposition_reassembles() {
        for i in 2..=3usize {
            for n in 0..=2usize {
                for_each_spine_tree(i, n, |s| {
                    let b = spine_tree_to_boundary(s);
                    let parts = decompose_irreducible(&b);
                    assert_eq!(
                        parts.iter().map(|p| p.geodesic_len).sum::<usize>(),
                        i,
                        "boundary lengths must add up"
                    );
                    assert_eq!(parts.iter().map(|p| p.n_faces()).sum::<usize>(), n);
                    for p in &parts {
                        assert!(p.is_single_edge() || p.pinch_points().is_empty());
                    }
                    // concatenation is inverse to the decomposition
                    let mut acc = parts[0].clone();
                    for p in &parts[1..] {
                        acc = juxtapose(&acc, p);
                    }
                    let ca = canonical_code(&acc.map, acc.walk[0], None);
                    let cb = canonical_code(&b.map, b.walk[0], None);
                    assert_eq!(ca, cb, "juxtaposition must reassemble");
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn spine_trees_to_boundaries() {
        use std::collections::HashMap;
        // counts of boundary quads and pinch-free ones match Z_i and U_i
        let eng = crate::series::SeriesEngine::new(4);
        for i in 1..=3usize {
            let u = eng.u_family(i);
            for n in 0..=2usize {
                let mut total = 0usize;
                let mut pinch_free = 0usize;
                let mut seen = HashMap::new();
                for_each_spine_tree(i, n, |s| {
                    let b = spine_tree_to_boundary(s);
                    assert!(b.validate());
                    assert_eq!(b.n_faces(), n);
                    total += 1;
                    if b.pinch_points().is_empty() {
                        pinch_free += 1;
                    }
                    *seen.entry(canonical_code(&b.map, b.walk[0], None)).or_insert(0) += 1;
                })
                .unwrap();
                assert_eq!(
                    crate::series::rat(total as i64),
                    *eng.z_series(i).coeff(n),
                    "Z_{i} at g^{n}"
                );
                assert_eq!(
                    crate::series::rat(pinch_free as i64),
                    *u[i].coeff(n),
                    "U_{i} at g^{n}"
                );
                // boundary quads are rigid: the map from spine trees is injective
                assert!(seen.values().all(|&c| c == 1));
            }
        }
    }
}
