//! Simple undirected graphs on a fixed vertex ordering `0..n`.
//!
//! Adjacency is stored as one `u64` bitmask per vertex, so the order is capped
//! at [`MAX_ORDER`], which is also the largest order the graph6 short header
//! can describe.

mod canon;
mod enumerate;
mod graph6;

pub use canon::{canonical_form, canonical_graph, canonical_labeling, is_isomorphic, CanonicalForm, CANON_MAX_ORDER};
pub use enumerate::{
    enumerate_graph_classes, enumerate_labeled_graphs, labeled_graph, labeled_graph_count, pair_count, LabeledRange,
    ENUM_MAX_ORDER,
};
pub use graph6::{graph6_decode, graph6_encode};

use std::fmt;

use rand::Rng;

use crate::error::{check_order, Error, Result};

/// Largest supported order.
pub const MAX_ORDER: usize = 62;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_order("graph", n, 0, MAX_ORDER)?;
        Ok(Graph { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Ok(Graph::empty(n)?.complement())
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Cycle `0-1-...-(n-1)-0`, `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    /// Star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::Vertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::Domain(format!("loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric with empty diagonal.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_order("graph", n, 0, MAX_ORDER)?;
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for (u, &row) in rows.iter().enumerate() {
            if row & !valid != 0 || row >> u & 1 == 1 {
                return Err(Error::Domain(format!("invalid adjacency row {u}")));
            }
            let mut rest = row;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if rows[v] >> u & 1 == 0 {
                    return Err(Error::Domain(format!("adjacency not symmetric at ({u}, {v})")));
                }
            }
        }
        Ok(Graph { n, rows })
    }

    /// Parses the plain edge-list form `"n; u v; u v; ..."`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut parts = text.split(';');
        let head = parts.next().unwrap_or("").trim();
        let n: usize = head.parse().map_err(|_| Error::Parse {
            offset: 0,
            msg: format!("expected vertex count, found {head:?}"),
        })?;
        let mut offset = head.len() + 1;
        let mut edges = Vec::new();
        for part in parts {
            let fields: Vec<&str> = part.split_whitespace().collect();
            match fields.as_slice() {
                [] => {}
                [u, v] => {
                    let parse = |s: &str| {
                        s.parse::<usize>().map_err(|_| Error::Parse {
                            offset,
                            msg: format!("bad vertex {s:?}"),
                        })
                    };
                    edges.push((parse(u)?, parse(v)?));
                }
                _ => {
                    return Err(Error::Parse {
                        offset,
                        msg: format!("expected \"u v\", found {:?}", part.trim()),
                    })
                }
            }
            offset += part.len() + 1;
        }
        Graph::from_edges(n, &edges)
    }

    /// Uniformly random labeled graph: each pair is an edge with probability 1/2.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<bool>() {
                    g.set_edge(u, v, true);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
    }

    pub fn triangle_count(&self) -> usize {
        let mut t = 0;
        for (u, v) in self.edges() {
            t += (self.rows[u] & self.rows[v]).count_ones() as usize;
        }
        t / 3
    }

    fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.rows[u] |= 1 << v;
            self.rows[v] |= 1 << u;
        } else {
            self.rows[u] &= !(1 << v);
            self.rows[v] &= !(1 << u);
        }
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Complement on the same vertex ordering.
    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        let rows = (0..self.n).map(|v| !self.rows[v] & full & !(1 << v)).collect();
        Graph { n: self.n, rows }
    }

    fn with_new_first_vertex(&self, adjacent: bool) -> Result<Graph> {
        check_order("graph", self.n + 1, 0, MAX_ORDER)?;
        let mut rows = Vec::with_capacity(self.n + 1);
        rows.push(if adjacent { self.full_mask() << 1 } else { 0 });
        rows.extend(self.rows.iter().map(|&r| (r << 1) | u64::from(adjacent)));
        Ok(Graph { n: self.n + 1, rows })
    }

    /// `G ∪ w`: adds an isolated vertex at index 0, shifting old vertices up by one.
    pub fn union_with_vertex(&self) -> Result<Graph> {
        self.with_new_first_vertex(false)
    }

    /// `G ∨ w`: adds a vertex at index 0 adjacent to every old vertex.
    pub fn join_with_vertex(&self) -> Result<Graph> {
        self.with_new_first_vertex(true)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal order");
        let mut rows = vec![0u64; self.n];
        for (u, v) in self.edges() {
            rows[perm[u]] |= 1 << perm[v];
            rows[perm[v]] |= 1 << perm[u];
        }
        Graph { n: self.n, rows }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.full_mask()
    }

    /// Adjacency matrix with the given entry type.
    pub fn adjacency_rows<T: From<u8> + Clone>(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| T::from(u8::from(self.has_edge(u, v)))).collect())
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.n)?;
        let edges: Vec<String> = self.edges().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "{})", edges.join(" "))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&graph6_encode(self))
    }
}
