//! Characteristic-polynomial coefficients from elementary subgraphs.
//!
//! An elementary subgraph has only `K2` and cycle components. The coefficient
//! of `x^(n-i)` in `det(xI - A)` is the sum over elementary subgraphs on `i`
//! vertices of `(-1)^components * 2^cycles`. This is an independent route to
//! the polynomial that [`crate::linalg::IntMatrix::char_poly`] computes by
//! linear algebra.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{check_order, Error, Result};
use crate::family::{FamilyParams, FamilyStep};
use crate::graph::Graph;
use crate::linalg::{IntMatrix, IntPoly};

/// Largest order accepted by the enumerators. Counts grow factorially; `K12`
/// alone has about 2·10^7 Hamiltonian cycles.
pub const SACHS_MAX_ORDER: usize = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ElementarySubgraph {
    /// `K2` components as `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Cycles listed from their least vertex, second vertex smaller than last.
    pub cycles: Vec<Vec<usize>>,
}

impl ElementarySubgraph {
    pub fn span(&self) -> usize {
        2 * self.edges.len() + self.cycles.iter().map(Vec::len).sum::<usize>()
    }

    pub fn components(&self) -> usize {
        self.edges.len() + self.cycles.len()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// `(-1)^p 2^c`
    pub fn weight(&self) -> BigInt {
        let w = BigInt::one() << self.cycle_count();
        if self.components() % 2 == 1 {
            -w
        } else {
            w
        }
    }
}

struct Walker<'a, F> {
    g: &'a Graph,
    n: usize,
    current: ElementarySubgraph,
    visit: F,
}

impl<F: FnMut(&ElementarySubgraph)> Walker<'_, F> {
    /// Decides vertex `v` onward with `need` vertices still to cover.
    fn rec(&mut self, v: usize, used: u64, need: usize) {
        if need == 0 {
            (self.visit)(&self.current);
            return;
        }
        if v >= self.n {
            return;
        }
        if used >> v & 1 == 1 {
            self.rec(v + 1, used, need);
            return;
        }
        let higher_free = (!used & !((1u64 << (v + 1)) - 1) & self.full()).count_ones() as usize;
        if higher_free >= need {
            self.rec(v + 1, used, need);
        }
        if need < 2 {
            return;
        }
        // v as the least vertex of a K2
        let mut nb = self.g.neighbors(v) & !used & !((1u64 << (v + 1)) - 1);
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            self.current.edges.push((v, u));
            self.rec(v + 1, used | 1 << v | 1 << u, need - 2);
            self.current.edges.pop();
        }
        // v as the least vertex of a cycle
        if need >= 3 {
            let mut path = vec![v];
            self.extend_cycle(&mut path, used | 1 << v, need);
        }
    }

    fn extend_cycle(&mut self, path: &mut Vec<usize>, used: u64, need: usize) {
        let start = path[0];
        let last = *path.last().expect("nonempty");
        let above = !((1u64 << (start + 1)) - 1);
        if path.len() >= 3 && self.g.has_edge(last, start) && path[1] < last {
            self.current.cycles.push(path.clone());
            self.rec(start + 1, used, need - path.len());
            self.current.cycles.pop();
        }
        if path.len() == need {
            return;
        }
        let mut nb = self.g.neighbors(last) & !used & above;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            path.push(u);
            self.extend_cycle(path, used | 1 << u, need);
            path.pop();
        }
    }

    fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }
}

fn walk<F: FnMut(&ElementarySubgraph)>(g: &Graph, i: usize, visit: F) -> Result<()> {
    let n = g.order();
    check_order("elementary subgraph enumeration", n, 0, SACHS_MAX_ORDER)?;
    if i > n {
        return Err(Error::Bounds { index: i, len: n });
    }
    let mut w = Walker {
        g,
        n,
        current: ElementarySubgraph::default(),
        visit,
    };
    w.rec(0, 0, i);
    Ok(())
}

/// Every elementary subgraph of `g` spanning exactly `i` vertices, each once.
pub fn enumerate_elementary_subgraphs(g: &Graph, i: usize) -> Result<Vec<ElementarySubgraph>> {
    let mut out = Vec::new();
    walk(g, i, |h| out.push(h.clone()))?;
    Ok(out)
}

/// `c_i = Σ_{H on i vertices} (-1)^p(H) 2^c(H)`; `c_0 = 1`.
pub fn sachs_coefficient(g: &Graph, i: usize) -> Result<BigInt> {
    let mut sum: i128 = 0;
    walk(g, i, |h| {
        let w = 1i128 << h.cycle_count();
        sum += if h.components() % 2 == 1 { -w } else { w };
    })?;
    Ok(BigInt::from(sum))
}

pub fn char_poly_via_sachs(g: &Graph) -> Result<IntPoly> {
    let coeffs = (0..=g.order()).map(|i| sachs_coefficient(g, i)).collect::<Result<Vec<_>>>()?;
    IntPoly::from_coeffs(coeffs)
}

/// Constant terms along a union/join family: `|det A(G_i)| = a` at even `i`
/// and `|det A(complement G_i)| = p` at odd `i`.
pub fn check_family_constant_terms(steps: &[FamilyStep], params: &FamilyParams) -> bool {
    steps.iter().all(|s| {
        if s.i % 2 == 0 {
            IntMatrix::adjacency(&s.graph).determinant().abs() == params.a
        } else {
            IntMatrix::adjacency(&s.graph.complement()).determinant().abs() == params.p
        }
    })
}
