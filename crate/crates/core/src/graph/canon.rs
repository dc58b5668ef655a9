//! Canonical labeling by partition refinement and individualization.
//!
//! The search explores the tree of equitable ordered partitions. At a leaf the
//! relabeled adjacency rows are compared and the largest is kept. Two leaves
//! with equal relabeled graphs yield an automorphism; children of a node are
//! skipped when they share an orbit with an explored sibling under the found
//! automorphisms that fix the node's individualized prefix.

use super::Graph;
use crate::error::{check_order, Result};

/// Largest order accepted by [`canonical_form`].
pub const CANON_MAX_ORDER: usize = 32;

/// Complete isomorphism invariant: the order followed by the packed upper
/// triangle of the canonically relabeled graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

type Cells = Vec<Vec<usize>>;

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

fn count_in(g: &Graph, v: usize, set: u64) -> u32 {
    (g.neighbors(v) & set).count_ones()
}

fn mask_of(cell: &[usize]) -> u64 {
    cell.iter().fold(0u64, |m, &v| m | 1 << v)
}

/// Refines to the coarsest equitable partition finer than `cells`.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = mask_of(&cells[s]);
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.drain(..) {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell.iter().map(|&v| (count_in(g, v, splitter), v)).collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        if start == 0 && i < keyed.len() {
                            changed = true;
                        }
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            cells = next;
            s += 1;
        }
        if !changed {
            return cells;
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    fn leaf(&mut self, cells: &Cells) {
        let lab: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let n = lab.len();
        let mut pos = vec![0usize; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let rows: Vec<u64> = lab
            .iter()
            .map(|&v| {
                let mut r = 0u64;
                let mut nb = self.g.neighbors(v);
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    r |= 1 << (n - 1 - pos[u]);
                }
                r
            })
            .collect();
        match &self.best {
            None => self.best = Some((rows, lab)),
            Some((best_rows, best_lab)) => match rows.cmp(best_rows) {
                std::cmp::Ordering::Greater => self.best = Some((rows, lab)),
                std::cmp::Ordering::Equal => {
                    let mut gamma = vec![0usize; n];
                    for i in 0..n {
                        gamma[best_lab[i]] = lab[i];
                    }
                    if gamma.iter().enumerate().any(|(i, &x)| i != x) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Less => {}
            },
        }
    }

    fn orbit_roots(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&v| gamma[v] == v) {
                for (v, &w) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    fn search(&mut self, cells: Cells, prefix: &mut Vec<usize>) {
        let cells = refine(self.g, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut candidates = cells[target].clone();
        candidates.sort_unstable();
        let mut explored_roots: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored_roots.is_empty() {
                let roots = self.orbit_roots(prefix);
                if explored_roots.iter().any(|&r| roots[r] == roots[v]) {
                    continue;
                }
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&x| x != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
            explored_roots.push(v);
        }
    }
}

/// Canonical labeling: `lab[i]` is the original vertex placed at position `i`.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>> {
    let n = g.order();
    check_order("canonical form", n, 0, CANON_MAX_ORDER)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut s = Search {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    s.search(vec![(0..n).collect()], &mut Vec::new());
    Ok(s.best.expect("search visits at least one leaf").1)
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    let lab = canonical_labeling(g)?;
    let mut perm = vec![0usize; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        perm[v] = i;
    }
    Ok(g.permute(&perm))
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let c = canonical_graph(g)?;
    let n = c.order();
    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut nbits = 0;
    for u in 0..n {
        for v in u + 1..n {
            acc = (acc << 1) | u8::from(c.has_edge(u, v));
            nbits += 1;
            if nbits == 8 {
                bytes.push(acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        bytes.push(acc << (8 - nbits));
    }
    Ok(CanonicalForm(bytes))
}

/// Isomorphism test via canonical-form equality.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() || g.degree_sequence() != h.degree_sequence() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}
