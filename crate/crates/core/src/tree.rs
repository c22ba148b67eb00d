//! Well-labeled plane trees and spine trees.
//!
//! Trees are stored in preorder numbering: vertex 0 is the root (the planted
//! vertex), and children lists are in planar (left-to-right) order. A planted
//! tree carries a distinguished corner at its root, namely the one before the
//! first child; the contour walk starts there.

use crate::error::{Error, Result};

/// Hard cap on exhaustive enumeration size (edge count).
pub const ENUMERATION_CAP: usize = 10;

/// A plane tree with positive integer labels differing by at most one along
/// every edge, planted at a corner of the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WellLabeledTree {
    pub children: Vec<Vec<usize>>,
    pub labels: Vec<usize>,
}

impl WellLabeledTree {
    pub fn single_vertex(label: usize) -> Self {
        WellLabeledTree { children: vec![vec![]], labels: vec![label] }
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn root_label(&self) -> usize {
        self.labels[0]
    }

    /// Checks label positivity and the unit-increment condition.
    pub fn validate(&self) -> bool {
        if self.children.len() != self.labels.len() {
            return false;
        }
        for (v, ch) in self.children.iter().enumerate() {
            if self.labels[v] < 1 {
                return false;
            }
            for &c in ch {
                let d = self.labels[v] as i64 - self.labels[c] as i64;
                if d.abs() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Corners in contour order, starting at the planted corner. A vertex of
    /// degree `d` contributes `d` corners; the total is `2n` for `n` edges.
    /// For the single-vertex tree the one corner is returned.
    pub fn corners(&self) -> Vec<Corner> {
        let mut out = Vec::with_capacity(2 * self.n_edges().max(1));
        self.corner_walk(0, &mut out, true);
        out
    }

    fn corner_walk(&self, v: usize, out: &mut Vec<Corner>, is_root: bool) {
        let ch = &self.children[v];
        out.push(Corner { vertex: v, label: self.labels[v] });
        for (k, &c) in ch.iter().enumerate() {
            self.corner_walk(c, out, false);
            // corner between child k and child k+1; a non-root vertex also
            // has the corner between its last child and the parent edge
            if k + 1 < ch.len() || !is_root {
                out.push(Corner { vertex: v, label: self.labels[v] });
            }
        }
    }

    /// Balanced-parenthesis contour word plus preorder label list, the text
    /// format used by the CLI (`(()) 1,2,3` style).
    pub fn to_text(&self) -> String {
        let mut word = String::with_capacity(2 * self.n_edges());
        self.word_walk(0, &mut word);
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        format!("{} {}", word, labels.join(","))
    }

    fn word_walk(&self, v: usize, out: &mut String) {
        for &c in &self.children[v] {
            out.push('(');
            self.word_walk(c, out);
            out.push(')');
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut parts = text.split_whitespace();
        let word = parts.next().ok_or_else(|| Error::ConfigInvalid("empty tree text".into()))?;
        let labels: Vec<usize> = match parts.next() {
            Some(ls) => ls
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::ConfigInvalid(format!("bad label: {e}")))?,
            None if word == "()" || word.is_empty() => {
                return Err(Error::ConfigInvalid("missing label list".into()))
            }
            None => return Err(Error::ConfigInvalid("missing label list".into())),
        };
        let mut children: Vec<Vec<usize>> = vec![vec![]];
        let mut stack = vec![0usize];
        let mut next = 1usize;
        for c in word.chars() {
            match c {
                '(' => {
                    let parent = *stack.last().unwrap();
                    children.push(vec![]);
                    children[parent].push(next);
                    stack.push(next);
                    next += 1;
                }
                ')' => {
                    stack.pop();
                    if stack.is_empty() {
                        return Err(Error::ConfigInvalid("unbalanced word".into()));
                    }
                }
                _ => return Err(Error::ConfigInvalid(format!("bad character {c:?}"))),
            }
        }
        if stack.len() != 1 || next != labels.len() {
            return Err(Error::ConfigInvalid("word/label mismatch".into()));
        }
        let t = WellLabeledTree { children, labels };
        if !t.validate() {
            return Err(Error::ConfigInvalid("labels violate tree constraints".into()));
        }
        Ok(t)
    }
}

/// A corner of the contour walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub vertex: usize,
    pub label: usize,
}

/// Enumerates every plane tree with `n` edges, positive labels with unit
/// increments, and root label `root_label`, invoking `f` on each. Trees are
/// produced in a fixed deterministic order.
pub fn for_each_labeled_tree(
    n: usize,
    root_label: usize,
    mut f: impl FnMut(&WellLabeledTree),
) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::BudgetExceeded { requested: n, cap: ENUMERATION_CAP });
    }
    assert!(root_label >= 1);
    let mut t = WellLabeledTree { children: vec![vec![]], labels: vec![root_label] };
    let mut stack = vec![0usize]; // current path from root
    gen(&mut t, &mut stack, n, 0, &mut f);
    Ok(())
}

/// Recursive contour-word generator: at each step either open a new child of
/// the current vertex (with one of the three label increments) or close the
/// current vertex.
fn gen(
    t: &mut WellLabeledTree,
    stack: &mut Vec<usize>,
    remaining_opens: usize,
    open_depth_beyond_root: usize,
    f: &mut impl FnMut(&WellLabeledTree),
) {
    if remaining_opens == 0 && open_depth_beyond_root == 0 {
        f(t);
        return;
    }
    if remaining_opens > 0 {
        let v = *stack.last().unwrap();
        let lv = t.labels[v] as i64;
        for d in [-1i64, 0, 1] {
            let lc = lv + d;
            if lc < 1 {
                continue;
            }
            let c = t.labels.len();
            t.children.push(vec![]);
            t.labels.push(lc as usize);
            t.children[v].push(c);
            stack.push(c);
            gen(t, stack, remaining_opens - 1, open_depth_beyond_root + 1, f);
            stack.pop();
            t.children[v].pop();
            t.children.pop();
            t.labels.pop();
        }
    }
    if open_depth_beyond_root > 0 {
        let c = *stack.last().unwrap();
        stack.pop();
        gen(t, stack, remaining_opens, open_depth_beyond_root - 1, f);
        stack.push(c);
    }
}

/// All well-labeled trees with `n` edges (root label 1), collected.
pub fn enumerate_well_labeled_trees(n: usize) -> Result<Vec<WellLabeledTree>> {
    let mut out = Vec::new();
    for_each_labeled_tree(n, 1, |t| out.push(t.clone()))?;
    Ok(out)
}

/// A well-labeled tree with a distinguished spine: a path of vertices with
/// labels exactly `1..=i` starting at the root, all attached subtrees on one
/// fixed side of the spine. The spine child is the first child of each spine
/// vertex; later children form the attached forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineTree {
    pub geodesic_len: usize,
    pub tree: WellLabeledTree,
    /// Vertex ids of the spine, `spine[0] == 0` (the root), length `i`.
    pub spine: Vec<usize>,
}

impl SpineTree {
    /// Validates spine labels, placement and the well-labeled conditions.
    pub fn validate(&self) -> bool {
        let i = self.geodesic_len;
        if i == 0 || self.spine.len() != i || self.spine[0] != 0 {
            return false;
        }
        if !self.tree.validate() || self.tree.root_label() != 1 {
            return false;
        }
        for (j, &u) in self.spine.iter().enumerate() {
            if self.tree.labels[u] != j + 1 {
                return false;
            }
            if j + 1 < i {
                match self.tree.children[u].first() {
                    Some(&c) if c == self.spine[j + 1] => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Count of non-spine edges (the weight carried by the series `Z_i`).
    pub fn n_non_spine_edges(&self) -> usize {
        self.tree.n_edges() - (self.geodesic_len - 1)
    }
}

/// Enumerates every spine tree of geodesic length `i` with `n` non-spine
/// edges: spine labels `1..=i`, and at spine vertex `j` an attached forest
/// whose subtree roots carry labels in `{j-1, j, j+1} ∩ [1, ∞)`.
pub fn for_each_spine_tree(
    i: usize,
    n: usize,
    mut f: impl FnMut(&SpineTree),
) -> Result<()> {
    assert!(i >= 1);
    if n > ENUMERATION_CAP {
        return Err(Error::BudgetExceeded { requested: n, cap: ENUMERATION_CAP });
    }
    // forests[j][m] = forests of m edges attachable at spine label j,
    // represented as labeled trees rooted at a label-j vertex
    let mut per_level: Vec<Vec<Vec<WellLabeledTree>>> = Vec::new();
    for j in 1..=i {
        let mut by_size: Vec<Vec<WellLabeledTree>> = vec![Vec::new(); n + 1];
        for m in 0..=n {
            for_each_labeled_tree(m, j, |t| by_size[m].push(t.clone()))?;
        }
        per_level.push(by_size);
    }
    let mut choice = vec![0usize; i]; // edge budget per level
    distribute(&per_level, &mut choice, 0, n, i, &mut f);
    Ok(())
}

fn distribute(
    per_level: &[Vec<Vec<WellLabeledTree>>],
    choice: &mut Vec<usize>,
    level: usize,
    remaining: usize,
    i: usize,
    f: &mut impl FnMut(&SpineTree),
) {
    if level == i {
        if remaining > 0 {
            return;
        }
        // all size choices fixed; iterate the cartesian product of forests
        let mut picks = vec![0usize; i];
        loop {
            let parts: Vec<&WellLabeledTree> =
                (0..i).map(|j| &per_level[j][choice[j]][picks[j]]).collect();
            f(&assemble_spine_tree(&parts));
            // odometer
            let mut j = 0;
            loop {
                if j == i {
                    return;
                }
                picks[j] += 1;
                if picks[j] < per_level[j][choice[j]].len() {
                    break;
                }
                picks[j] = 0;
                j += 1;
            }
        }
    }
    for m in 0..=remaining {
        choice[level] = m;
        distribute(per_level, choice, level + 1, remaining - m, i, f);
    }
}

/// Grafts per-level forests onto the spine. `parts[j]` is a labeled tree
/// whose root (label `j+1`) stands for spine vertex `j`; its children become
/// the attached forest, placed after the next spine vertex in planar order.
fn assemble_spine_tree(parts: &[&WellLabeledTree]) -> SpineTree {
    let i = parts.len();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut spine = Vec::with_capacity(i);

    fn copy_subtree(
        src: &WellLabeledTree,
        v: usize,
        children: &mut Vec<Vec<usize>>,
        labels: &mut Vec<usize>,
    ) -> usize {
        let id = labels.len();
        labels.push(src.labels[v]);
        children.push(vec![]);
        for &c in &src.children[v] {
            let cid = copy_subtree(src, c, children, labels);
            children[id].push(cid);
        }
        id
    }

    fn build_level(
        parts: &[&WellLabeledTree],
        j: usize,
        children: &mut Vec<Vec<usize>>,
        labels: &mut Vec<usize>,
        spine: &mut Vec<usize>,
    ) -> usize {
        let part = parts[j];
        let id = labels.len();
        labels.push(part.labels[0]);
        children.push(vec![]);
        spine.push(id);
        if j + 1 < parts.len() {
            let nid = build_level(parts, j + 1, children, labels, spine);
            children[id].push(nid);
        }
        for &c in &part.children[0] {
            let cid = copy_subtree(part, c, children, labels);
            children[id].push(cid);
        }
        id
    }

    build_level(parts, 0, &mut children, &mut labels, &mut spine);
    SpineTree { geodesic_len: i, tree: WellLabeledTree { children, labels }, spine }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(n: usize) -> usize {
        let mut c = 1usize;
        for k in 0..n {
            c = c * 2 * (2 * k + 1) / (k + 2);
        }
        c
    }

    fn wlt_count_formula(n: usize) -> usize {
        // 2·3^n·Catalan(n)/(n+2)
        2 * 3usize.pow(n as u32) * catalan(n) / (n + 2)
    }

    #[test]
    fn tree_counts_match_formula() {
        for n in 1..=6 {
            let trees = enumerate_well_labeled_trees(n).unwrap();
            assert_eq!(trees.len(), wlt_count_formula(n), "n={n}");
            for t in &trees {
                assert!(t.validate());
                assert_eq!(t.n_edges(), n);
                assert_eq!(t.root_label(), 1);
            }
            // duplicate-free
            let mut seen = std::collections::HashSet::new();
            for t in &trees {
                assert!(seen.insert(t.to_text()), "duplicate {}", t.to_text());
            }
        }
    }

    #[test]
    fn small_tree_lists() {
        assert_eq!(enumerate_well_labeled_trees(1).unwrap().len(), 2);
        assert_eq!(enumerate_well_labeled_trees(2).unwrap().len(), 9);
        assert_eq!(enumerate_well_labeled_trees(3).unwrap().len(), 54);
    }

    #[test]
    fn budget_cap() {
        assert!(matches!(
            enumerate_well_labeled_trees(ENUMERATION_CAP + 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn corners_count_is_twice_edges() {
        for n in 1..=4 {
            for t in enumerate_well_labeled_trees(n).unwrap() {
                assert_eq!(t.corners().len(), 2 * n, "{}", t.to_text());
            }
        }
        // single vertex: one corner
        let t = WellLabeledTree::single_vertex(1);
        assert_eq!(t.corners().len(), 1);
    }

    #[test]
    fn text_round_trip() {
        for n in 1..=4 {
            for t in enumerate_well_labeled_trees(n).unwrap() {
                let text = t.to_text();
                assert_eq!(WellLabeledTree::from_text(&text).unwrap(), t);
            }
        }
    }

    #[test]
    fn spine_tree_counts_match_z_series() {
        use crate::series::SeriesEngine;
        let eng = SeriesEngine::new(4);
        for i in 1..=3 {
            let z = eng.z_series(i);
            for n in 0..=3 {
                let mut count = 0usize;
                for_each_spine_tree(i, n, |s| {
                    assert!(s.validate(), "invalid spine tree");
                    assert_eq!(s.n_non_spine_edges(), n);
                    count += 1;
                })
                .unwrap();
                assert_eq!(crate::series::rat(count as i64), *z.coeff(n), "i={i} n={n}");
            }
        }
    }

    #[test]
    fn spine_tree_i1_is_plain_tree() {
        // i = 1 degenerates to a well-labeled tree planted at a label-1 corner
        let mut count = 0;
        for_each_spine_tree(1, 2, |s| {
            assert_eq!(s.spine, vec![0]);
            assert!(s.tree.validate());
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 9);
    }
}
