//! Exhaustive enumeration oracles.
//!
//! Every count here runs over the tree-indexed family of rooted
//! quadrangulations with `n` faces. Marked configurations (geodesics,
//! confluent tuples, vertex pairs) are rigid once a directed edge is
//! distinguished, so dividing the rooted total by `4n` (the number of
//! directed edges) gives the count of marked configurations, or the
//! inverse-symmetry-weighted count where symmetries are possible.

use crate::bijection::{spine_tree_to_boundary, tree_to_quad};
use crate::error::Result;
use crate::geodesic::{
    contact_count, domain_areas, enumerate_confluent_tuples, enumerate_geodesics,
};
use crate::map::{automorphism_order, bfs_labels, canonical_form, PlanarMap};
use crate::series::{rat, Rat, TupleMode};
use crate::tree::{for_each_labeled_tree, for_each_spine_tree};

/// Number of quadrangulations with `n` faces and a marked geodesic of
/// length `i` (the coefficient `[g^n] U_i`).
pub fn count_marked_geodesics(n: usize, i: usize) -> Result<u64> {
    let mut total = 0u64;
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let q = &tq.quad;
        for origin in 0..q.map.n_vertices() {
            let labels = bfs_labels(&q.map, origin);
            for target in 0..q.map.n_vertices() {
                if labels.labels[target] == i {
                    total += enumerate_geodesics(q, &labels, target).len() as u64;
                }
            }
        }
    })?;
    let denom = 4 * n as u64;
    assert_eq!(total % denom, 0, "marked geodesics are rigid");
    Ok(total / denom)
}

/// Weighted number of confluent `k`-tuple configurations (`[g^n]` of the
/// weak `U^(k)_i` or strong `(U_i)^k` series).
pub fn count_confluent_tuples(n: usize, i: usize, k: usize, mode: TupleMode) -> Result<u64> {
    let mut total = 0u64;
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let q = &tq.quad;
        for origin in 0..q.map.n_vertices() {
            let labels = bfs_labels(&q.map, origin);
            for target in 0..q.map.n_vertices() {
                if labels.labels[target] != i {
                    continue;
                }
                let tuples = enumerate_confluent_tuples(q, &labels, target, k, mode).unwrap();
                total += tuples.iter().map(|t| t.weight).sum::<u64>();
            }
        }
    })?;
    let denom = 4 * n as u64;
    assert_eq!(total % denom, 0, "weighted tuples are rigid");
    Ok(total / denom)
}

/// Weighted number of weak pairs with a marked contact (`[g^n] U^{(2)pp}_i`):
/// each pair configuration contributes its contact count.
pub fn count_marked_contacts(n: usize, i: usize) -> Result<u64> {
    let mut total = 0u64;
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let q = &tq.quad;
        for origin in 0..q.map.n_vertices() {
            let labels = bfs_labels(&q.map, origin);
            for target in 0..q.map.n_vertices() {
                if labels.labels[target] != i {
                    continue;
                }
                for pair in
                    enumerate_confluent_tuples(q, &labels, target, 2, TupleMode::Weak).unwrap()
                {
                    total += pair.weight * contact_count(&pair) as u64;
                }
            }
        }
    })?;
    let denom = 4 * n as u64;
    assert_eq!(total % denom, 0);
    Ok(total / denom)
}

/// Inverse-symmetry-weighted count of quadrangulations with an ordered pair
/// of marked vertices at distance `i` (the coefficient of the two-point
/// series).
pub fn count_two_point(n: usize, i: usize) -> Result<Rat> {
    let mut total = 0u64;
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let q = &tq.quad;
        for origin in 0..q.map.n_vertices() {
            let labels = bfs_labels(&q.map, origin);
            total +=
                (0..q.map.n_vertices()).filter(|&v| labels.labels[v] == i).count() as u64;
        }
    })?;
    Ok(rat(total as i64) / rat(4 * n as i64))
}

/// Boundary-quadrangulation counts at geodesic length `i` with `n` interior
/// faces: `(total, pinch_free)`, the coefficients of `Z_i` and `U_i`.
pub fn count_boundary_quads(i: usize, n: usize) -> Result<(u64, u64)> {
    let mut total = 0u64;
    let mut pinch_free = 0u64;
    for_each_spine_tree(i, n, |s| {
        let b = spine_tree_to_boundary(s);
        debug_assert!(b.validate());
        total += 1;
        if b.pinch_points().is_empty() {
            pinch_free += 1;
        }
    })?;
    Ok((total, pinch_free))
}

/// The distinct pointed quadrangulations with `n` faces, as (map, vertex,
/// automorphism order) triples, one per isomorphism class.
pub fn pointed_family(n: usize) -> Result<Vec<(PlanarMap, usize, usize)>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let map = &tq.quad.map;
        for v in 0..map.n_vertices() {
            let form = canonical_form(map, Some(v));
            if seen.insert(form) {
                let order = automorphism_order(map, Some(v));
                out.push((map.clone(), v, order));
            }
        }
    })?;
    Ok(out)
}

/// `Σ 1/|Aut|` over the distinct pointed quadrangulations with `n` faces;
/// equals the pointed partition function.
pub fn pointed_partition_by_aut(n: usize) -> Result<Rat> {
    let mut sum = Rat::from_integer(0.into());
    for (_, _, order) in pointed_family(n)? {
        sum += rat(1) / rat(order as i64);
    }
    Ok(sum)
}

/// Exact pointed-ensemble average of the number of geodesics of length `i`
/// emerging from the origin, computed from the exhaustive family with
/// inverse-symmetry weights.
pub fn pointed_average_geodesics(n: usize, i: usize) -> Result<Rat> {
    let mut num = Rat::from_integer(0.into());
    let mut den = Rat::from_integer(0.into());
    for (map, v, order) in pointed_family(n)? {
        let q = crate::map::Quadrangulation { map, root: None, origin: Some(v) };
        let labels = q.bfs_labels(v);
        let count = crate::geodesic::count_geodesics_of_length(&q, &labels, i);
        let w = rat(1) / rat(order as i64);
        num += &w * rat(count as i64);
        den += w;
    }
    Ok(num / den)
}

/// Checks the face partition of every weak pair at size `n`, distance `i`;
/// returns the multiset of `(n1, n2)` splits for strong pairs.
pub fn strong_pair_areas(n: usize, i: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for_each_labeled_tree(n, 1, |t| {
        let tq = tree_to_quad(t);
        let q = &tq.quad;
        for origin in 0..q.map.n_vertices() {
            let labels = bfs_labels(&q.map, origin);
            for target in 0..q.map.n_vertices() {
                if labels.labels[target] != i {
                    continue;
                }
                for pair in
                    enumerate_confluent_tuples(q, &labels, target, 2, TupleMode::Weak).unwrap()
                {
                    let (n1, n2) = domain_areas(q, &pair).unwrap();
                    assert_eq!(n1 + n2, n, "domain areas must partition the faces");
                    let strong = !crate::geodesic::share_internal_vertex(
                        &pair.paths[0],
                        &pair.paths[1],
                    );
                    if strong && i >= 2 {
                        out.push((n1, n2));
                    }
                }
            }
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{ratio, SeriesEngine};

    fn as_u64(r: &Rat) -> u64 {
        assert!(r.is_integer());
        use num_traits::ToPrimitive;
        r.to_integer().to_u64().unwrap()
    }

    #[test]
    fn marked_geodesics_match_u_series() {
        let eng = SeriesEngine::new(3);
        for i in 1..=3 {
            let u = eng.u_family(i);
            for n in 1..=3 {
                let got = count_marked_geodesics(n, i).unwrap();
                assert_eq!(got, as_u64(u[i].coeff(n)), "U_{i} at g^{n}");
            }
        }
    }

    #[test]
    fn weak_pairs_match_series() {
        let eng = SeriesEngine::new(3);
        for i in 1..=3 {
            for n in 1..=3 {
                let got = count_confluent_tuples(n, i, 2, TupleMode::Weak).unwrap();
                let want = eng.u_k_series(i, 2, TupleMode::Weak);
                assert_eq!(got, as_u64(want.coeff(n)), "weak k=2 i={i} n={n}");
            }
        }
    }

    #[test]
    fn strong_pairs_match_series() {
        let eng = SeriesEngine::new(3);
        for i in 1..=3 {
            for n in 1..=3 {
                let got = count_confluent_tuples(n, i, 2, TupleMode::Strong).unwrap();
                let want = eng.u_k_series(i, 2, TupleMode::Strong);
                assert_eq!(got, as_u64(want.coeff(n)), "strong k=2 i={i} n={n}");
            }
        }
    }

    #[test]
    fn weak_triples_match_series() {
        let eng = SeriesEngine::new(2);
        for i in 1..=2 {
            for n in 1..=2 {
                let got = count_confluent_tuples(n, i, 3, TupleMode::Weak).unwrap();
                let want = eng.u_k_series(i, 3, TupleMode::Weak);
                assert_eq!(got, as_u64(want.coeff(n)), "weak k=3 i={i} n={n}");
            }
        }
    }

    #[test]
    fn marked_contacts_match_pinch_series() {
        let eng = SeriesEngine::new(3);
        for i in 1..=3 {
            let pinch = eng.pinch_series(i);
            for n in 1..=3 {
                let got = count_marked_contacts(n, i).unwrap();
                assert_eq!(got, as_u64(pinch.u2pp.coeff(n)), "U^(2)pp_{i} at g^{n}");
            }
        }
    }

    #[test]
    fn two_point_matches_series() {
        let eng = SeriesEngine::new(3);
        for i in 1..=3 {
            let tp = eng.two_point_series(i);
            for n in 1..=3 {
                let got = count_two_point(n, i).unwrap();
                assert_eq!(got, *tp.coeff(n), "two-point i={i} n={n}");
            }
        }
    }

    #[test]
    fn pointed_partition_from_automorphisms() {
        assert_eq!(pointed_partition_by_aut(1).unwrap(), ratio(3, 2));
        assert_eq!(pointed_partition_by_aut(2).unwrap(), ratio(9, 2));
        assert_eq!(pointed_partition_by_aut(3).unwrap(), ratio(45, 2));
    }

    #[test]
    fn pointed_geodesic_averages() {
        // averages of geodesics of length 2 per origin: 2/3 and 20/9
        assert_eq!(pointed_average_geodesics(1, 2).unwrap(), ratio(2, 3));
        assert_eq!(pointed_average_geodesics(2, 2).unwrap(), ratio(20, 9));
    }

    #[test]
    fn unique_strong_pair_splits_evenly() {
        let splits = strong_pair_areas(2, 2).unwrap();
        // the single strong-pair configuration appears 4n/2 = 4 times among
        // rooted multiset instances
        assert_eq!(splits.len(), 4);
        assert!(splits.iter().all(|&s| s == (1, 1)));
    }
}
