//! Exact multigraph isomorphism by backtracking, in a plain mode that
//! ignores levels and a leveled mode that additionally requires an
//! order-preserving correspondence of vertex levels.

use super::graph::{LeveledGraph, VertexId};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoMode {
    /// Multigraph isomorphism; levels and essential flags are ignored.
    Plain,
    /// Additionally requires a level-order-preserving bijection.
    Leveled,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("graph has {got} vertices, above the search cap {cap}")]
    TooLarge { got: usize, cap: usize },
}

pub const DEFAULT_ISO_CAP: usize = 64;

/// Multiplicity matrix keyed by unordered vertex pairs.
fn multiplicity(g: &LeveledGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0usize; n]; n];
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let (a, b) = (edge.lower.0 as usize, edge.upper.0 as usize);
        m[a][b] += 1;
        m[b][a] += 1;
    }
    m
}

/// Per-vertex invariant used for candidate pruning: degree plus the sorted
/// multiset of neighbor degrees counted with multiplicity.
fn vertex_keys(g: &LeveledGraph, mult: &[Vec<usize>]) -> Vec<(usize, Vec<usize>)> {
    let n = g.vertex_count();
    let degree: Vec<usize> = (0..n).map(|v| mult[v].iter().sum()).collect();
    (0..n)
        .map(|v| {
            let mut nbrs = Vec::new();
            for (w, &c) in mult[v].iter().enumerate() {
                for _ in 0..c {
                    nbrs.push(degree[w]);
                }
            }
            nbrs.sort_unstable();
            (degree[v], nbrs)
        })
        .collect()
}

/// Indices of the level class of each vertex, classes sorted ascending.
fn level_classes(g: &LeveledGraph) -> Vec<usize> {
    let levels = g.distinct_levels();
    g.vertex_ids()
        .map(|v| levels.binary_search(g.level(v)).unwrap())
        .collect()
}

/// Decide isomorphism; on success return the vertex mapping from `g1` into
/// `g2`.
pub fn is_isomorphic(
    g1: &LeveledGraph,
    g2: &LeveledGraph,
    mode: IsoMode,
    cap: usize,
) -> Result<Option<Vec<(VertexId, VertexId)>>, IsoError> {
    let n = g1.vertex_count();
    if n > cap || g2.vertex_count() > cap {
        return Err(IsoError::TooLarge {
            got: n.max(g2.vertex_count()),
            cap,
        });
    }
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let m1 = multiplicity(g1);
    let m2 = multiplicity(g2);
    let k1 = vertex_keys(g1, &m1);
    let k2 = vertex_keys(g2, &m2);
    {
        let mut a = k1.clone();
        let mut b = k2.clone();
        a.sort();
        b.sort();
        if a != b {
            return Ok(None);
        }
    }
    let (c1, c2) = match mode {
        IsoMode::Plain => (vec![0usize; n], vec![0usize; n]),
        IsoMode::Leveled => {
            let l1 = g1.distinct_levels();
            let l2 = g2.distinct_levels();
            if l1.len() != l2.len() {
                return Ok(None);
            }
            let c1 = level_classes(g1);
            let c2 = level_classes(g2);
            let mut sizes1 = vec![0usize; l1.len()];
            let mut sizes2 = vec![0usize; l2.len()];
            for &c in &c1 {
                sizes1[c] += 1;
            }
            for &c in &c2 {
                sizes2[c] += 1;
            }
            if sizes1 != sizes2 {
                return Ok(None);
            }
            (c1, c2)
        }
    };

    // Order g1's vertices so each one (after the first) touches an already
    // mapped vertex where possible; improves pruning.
    let order = {
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        let mut frontier: Vec<usize> = Vec::new();
        while order.len() < n {
            let next = frontier
                .iter()
                .copied()
                .find(|&v| !placed[v])
                .or_else(|| (0..n).find(|&v| !placed[v]))
                .unwrap();
            placed[next] = true;
            order.push(next);
            for (w, &c) in m1[next].iter().enumerate() {
                if c > 0 && !placed[w] {
                    frontier.push(w);
                }
            }
        }
        order
    };

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn backtrack(
        depth: usize,
        order: &[usize],
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
        m1: &[Vec<usize>],
        m2: &[Vec<usize>],
        k1: &[(usize, Vec<usize>)],
        k2: &[(usize, Vec<usize>)],
        c1: &[usize],
        c2: &[usize],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'candidates: for w in 0..m2.len() {
            if used[w] || k1[v] != k2[w] || c1[v] != c2[w] {
                continue;
            }
            for u in 0..m1.len() {
                if mapping[u] != usize::MAX && m1[v][u] != m2[w][mapping[u]] {
                    continue 'candidates;
                }
            }
            mapping[v] = w;
            used[w] = true;
            if backtrack(depth + 1, order, mapping, used, m1, m2, k1, k2, c1, c2) {
                return true;
            }
            mapping[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    if backtrack(
        0, &order, &mut mapping, &mut used, &m1, &m2, &k1, &k2, &c1, &c2,
    ) {
        Ok(Some(
            mapping
                .iter()
                .enumerate()
                .map(|(v, &w)| (VertexId(v as u32), VertexId(w as u32)))
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn theta_at(levels: [i64; 4]) -> LeveledGraph {
        let mut g = LeveledGraph::new();
        let a = g.add_vertex(rat(levels[0]), true);
        let b = g.add_vertex(rat(levels[1]), true);
        let c = g.add_vertex(rat(levels[2]), true);
        let d = g.add_vertex(rat(levels[3]), true);
        g.add_edge(a, b);
        g.add_edge(b, c);
        g.add_edge(b, c);
        g.add_edge(c, d);
        g
    }

    #[test]
    fn shifted_theta_matches_in_both_modes() {
        let g1 = theta_at([-10, -1, 1, 10]);
        let g2 = theta_at([0, 3, 5, 20]);
        assert!(is_isomorphic(&g1, &g2, IsoMode::Plain, 64).unwrap().is_some());
        assert!(is_isomorphic(&g1, &g2, IsoMode::Leveled, 64)
            .unwrap()
            .is_some());
    }

    #[test]
    fn betti_mismatch_fails_both_modes() {
        // Theta vs the doubled-band graph with five edges.
        let g1 = theta_at([-10, -1, 1, 10]);
        let mut g2 = LeveledGraph::new();
        let a = g2.add_vertex(rat(-10), true);
        let b = g2.add_vertex(rat(-1), true);
        let c = g2.add_vertex(rat(1), true);
        let d = g2.add_vertex(rat(10), true);
        g2.add_edge(a, b);
        g2.add_edge(b, c);
        g2.add_edge(b, c);
        g2.add_edge(b, c);
        g2.add_edge(c, d);
        assert!(is_isomorphic(&g1, &g2, IsoMode::Plain, 64).unwrap().is_none());
        assert!(is_isomorphic(&g1, &g2, IsoMode::Leveled, 64)
            .unwrap()
            .is_none());
    }

    #[test]
    fn smoothing_normal_forms_match() {
        let g1 = theta_at([-10, -1, 1, 10]).refine(&[rat(0)]);
        let g2 = theta_at([-10, -1, 1, 10]).refine(&[crate::poly::ratio(1, 2)]);
        let s1 = g1.smooth().unwrap();
        let s2 = g2.smooth().unwrap();
        assert!(is_isomorphic(&s1, &s2, IsoMode::Plain, 64).unwrap().is_some());
        assert!(is_isomorphic(&s1, &s2, IsoMode::Leveled, 64)
            .unwrap()
            .is_some());
    }

    #[test]
    fn leveled_mode_sees_level_order() {
        // Two three-vertex paths with a doubled upper edge; in one graph the
        // doubled edge sits below, in the other above. Plain mode cannot
        // tell them apart, leveled mode can.
        let mut g1 = LeveledGraph::new();
        let a = g1.add_vertex(rat(0), true);
        let b = g1.add_vertex(rat(1), true);
        let c = g1.add_vertex(rat(2), true);
        g1.add_edge(a, b);
        g1.add_edge(b, c);
        g1.add_edge(b, c);

        let mut g2 = LeveledGraph::new();
        let a = g2.add_vertex(rat(0), true);
        let b = g2.add_vertex(rat(1), true);
        let c = g2.add_vertex(rat(2), true);
        g2.add_edge(a, b);
        g2.add_edge(a, b);
        g2.add_edge(b, c);

        assert!(is_isomorphic(&g1, &g2, IsoMode::Plain, 64).unwrap().is_some());
        assert!(is_isomorphic(&g1, &g2, IsoMode::Leveled, 64)
            .unwrap()
            .is_none());
    }

    #[test]
    fn mapping_is_a_real_isomorphism() {
        let g1 = theta_at([-10, -1, 1, 10]);
        let g2 = theta_at([4, 6, 7, 11]);
        let mapping = is_isomorphic(&g1, &g2, IsoMode::Leveled, 64)
            .unwrap()
            .unwrap();
        let m1 = multiplicity(&g1);
        let m2 = multiplicity(&g2);
        for &(u, mu) in &mapping {
            for &(v, mv) in &mapping {
                assert_eq!(
                    m1[u.0 as usize][v.0 as usize],
                    m2[mu.0 as usize][mv.0 as usize]
                );
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g1 = theta_at([-10, -1, 1, 10]);
        assert!(matches!(
            is_isomorphic(&g1, &g1, IsoMode::Plain, 3),
            Err(IsoError::TooLarge { .. })
        ));
    }
}
