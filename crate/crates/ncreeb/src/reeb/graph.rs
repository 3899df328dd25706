//! Leveled multigraphs: finite multigraphs with a rational level per vertex
//! and edges strictly monotone in level. These model Reeb graphs of
//! first-coordinate projections together with their induced functions.

use crate::poly::{rational_str, Rational};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} does not increase strictly in level")]
    NonMonotoneEdge { edge: usize },
    #[error("edge {edge} references a missing vertex")]
    DanglingEdge { edge: usize },
    #[error("non-essential vertex v{vertex} must have exactly one lower and one upper edge, has {down} and {up}")]
    NonEssentialDegree { vertex: u32, down: usize, up: usize },
    #[error("graph is disconnected: components of sizes {sizes:?}")]
    Disconnected { sizes: Vec<usize> },
    #[error("level {level} is a vertex level; pick a regular level")]
    VertexLevel { level: String },
    #[error("graph is empty")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub level: Rational,
    pub essential: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub lower: VertexId,
    pub upper: VertexId,
}

/// Finite leveled multigraph. Vertices and edges are indexed densely.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeveledGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl LeveledGraph {
    pub fn new() -> Self {
        LeveledGraph::default()
    }

    pub fn add_vertex(&mut self, level: Rational, essential: bool) -> VertexId {
        self.vertices.push(Vertex { level, essential });
        VertexId(self.vertices.len() as u32 - 1)
    }

    /// Insert an edge with endpoints ordered by level; panics on equal levels
    /// (construct through `validated` for checked building).
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        let (lower, upper) = if self.level(a) < self.level(b) {
            (a, b)
        } else if self.level(b) < self.level(a) {
            (b, a)
        } else {
            panic!("edge endpoints share a level");
        };
        self.edges.push(Edge { lower, upper });
        EdgeId(self.edges.len() as u32 - 1)
    }

    pub fn validated(self) -> Result<Self, GraphError> {
        self.validate()?;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0 as usize]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0 as usize]
    }

    pub fn level(&self, v: VertexId) -> &Rational {
        &self.vertices[v.0 as usize].level
    }

    pub fn essential(&self, v: VertexId) -> bool {
        self.vertices[v.0 as usize].essential
    }

    pub fn down_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| self.edge(e).upper == v)
            .collect()
    }

    pub fn up_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| self.edge(e).lower == v)
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| e.lower == v || e.upper == v)
            .count()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = self.vertex_ids().map(|v| self.degree(v)).collect();
        degs.sort_unstable();
        degs
    }

    /// Lowest and highest vertex level.
    pub fn level_range(&self) -> Option<(Rational, Rational)> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for v in &self.vertices {
            if lo.as_ref().map_or(true, |l| v.level < *l) {
                lo = Some(v.level.clone());
            }
            if hi.as_ref().map_or(true, |h| v.level > *h) {
                hi = Some(v.level.clone());
            }
        }
        lo.zip(hi)
    }

    /// Sorted distinct vertex levels.
    pub fn distinct_levels(&self) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self.vertices.iter().map(|v| v.level.clone()).collect();
        set.into_iter().collect()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.lower.0 as usize >= self.vertices.len() || e.upper.0 as usize >= self.vertices.len()
            {
                return Err(GraphError::DanglingEdge { edge: i });
            }
            if self.level(e.lower) >= self.level(e.upper) {
                return Err(GraphError::NonMonotoneEdge { edge: i });
            }
        }
        let mut down = vec![0usize; self.vertices.len()];
        let mut up = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            up[e.lower.0 as usize] += 1;
            down[e.upper.0 as usize] += 1;
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.essential && (down[i] != 1 || up[i] != 1) {
                return Err(GraphError::NonEssentialDegree {
                    vertex: i as u32,
                    down: down[i],
                    up: up[i],
                });
            }
        }
        Ok(())
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.lower.0 as usize].push(e.upper.0 as usize);
            adj[e.upper.0 as usize].push(e.lower.0 as usize);
        }
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(VertexId(v as u32));
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// First Betti number `E - V + 1` of a connected graph.
    pub fn betti1(&self) -> Result<usize, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let comps = self.components();
        if comps.len() > 1 {
            return Err(GraphError::Disconnected {
                sizes: comps.iter().map(|c| c.len()).collect(),
            });
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    /// Number of edges whose open level span contains `t`.
    pub fn sheet_count(&self, t: &Rational) -> Result<usize, GraphError> {
        if self.vertices.iter().any(|v| v.level == *t) {
            return Err(GraphError::VertexLevel {
                level: rational_str(t),
            });
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| self.level(e.lower) < *t && *t < *self.level(e.upper))
            .count())
    }

    /// Subdivide every edge spanning a requested level by a non-essential
    /// vertex at that level. Levels equal to an edge's endpoint levels are
    /// ignored for that edge.
    pub fn refine(&self, levels: &[Rational]) -> LeveledGraph {
        let mut cuts: Vec<Rational> = levels.to_vec();
        cuts.sort();
        cuts.dedup();
        let mut out = LeveledGraph::new();
        for v in &self.vertices {
            out.add_vertex(v.level.clone(), v.essential);
        }
        for e in &self.edges {
            let lo = self.level(e.lower).clone();
            let hi = self.level(e.upper).clone();
            let mut prev = e.lower;
            for c in &cuts {
                if *c > lo && *c < hi {
                    let mid = out.add_vertex(c.clone(), false);
                    out.edges.push(Edge {
                        lower: prev,
                        upper: mid,
                    });
                    prev = mid;
                }
            }
            out.edges.push(Edge {
                lower: prev,
                upper: e.upper,
            });
        }
        out
    }

    /// Remove every non-essential vertex by concatenating its two incident
    /// edges. With `relax_essential`, degree-(1,1) essential vertices are
    /// removed as well. Idempotent.
    pub fn smooth_with(&self, relax_essential: bool) -> Result<LeveledGraph, GraphError> {
        let n = self.vertices.len();
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            up[e.lower.0 as usize].push(i);
            down[e.upper.0 as usize].push(i);
        }
        let mut removable = vec![false; n];
        for (i, v) in self.vertices.iter().enumerate() {
            let pass_through = down[i].len() == 1 && up[i].len() == 1;
            if !v.essential {
                if !pass_through {
                    return Err(GraphError::NonEssentialDegree {
                        vertex: i as u32,
                        down: down[i].len(),
                        up: up[i].len(),
                    });
                }
                removable[i] = true;
            } else if relax_essential && pass_through {
                removable[i] = true;
            }
        }
        let mut out = LeveledGraph::new();
        let mut vmap = vec![u32::MAX; n];
        for (i, v) in self.vertices.iter().enumerate() {
            if !removable[i] {
                vmap[i] = out.add_vertex(v.level.clone(), v.essential).0;
            }
        }
        // Walk each edge chain from a kept lower endpoint through removable
        // vertices up to the next kept vertex.
        for (i, e) in self.edges.iter().enumerate() {
            if removable[e.lower.0 as usize] {
                continue;
            }
            let mut cursor = i;
            let mut upper = self.edges[cursor].upper;
            while removable[upper.0 as usize] {
                cursor = up[upper.0 as usize][0];
                upper = self.edges[cursor].upper;
            }
            out.edges.push(Edge {
                lower: VertexId(vmap[e.lower.0 as usize]),
                upper: VertexId(vmap[upper.0 as usize]),
            });
        }
        Ok(out)
    }

    /// `smooth_with(false)`: removes exactly the non-essential vertices.
    pub fn smooth(&self) -> Result<LeveledGraph, GraphError> {
        self.smooth_with(false)
    }

    /// Counts of essential vertices with level strictly inside the interval.
    pub fn essential_count_in(&self, lo: &Rational, hi: &Rational) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.essential && v.level > *lo && v.level < *hi)
            .count()
    }
}
