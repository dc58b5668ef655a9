//! Walk matrices, controllability and the odd-square-free condition on
//! `det W / 2^floor(n/2)`, together with checks of the determinant identities
//! relating a graph to its complement and to its one-vertex union and join.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::is_odd_square_free;
use crate::graph::Graph;
use crate::linalg::{bigint_string, IntMatrix};

/// Smallest order at which `2^floor(n/2) | det W` and the DGS criterion apply.
pub const CRITERION_MIN_ORDER: usize = 6;

fn require_nonempty(g: &Graph) -> Result<()> {
    if g.order() == 0 {
        return Err(Error::Size {
            what: "walk matrix",
            got: 0,
            min: 1,
            max: crate::graph::MAX_ORDER,
        });
    }
    Ok(())
}

/// `(-1)^(k(k-1)/2)`
pub fn triangular_sign(k: usize) -> i32 {
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `W = [e, Ae, A^2 e, ..., A^(n-1) e]`, columns built by repeated multiplication.
pub fn walk_matrix(g: &Graph) -> Result<IntMatrix> {
    require_nonempty(g)?;
    let n = g.order();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    cols.push(vec![BigInt::one(); n]);
    for _ in 1..n {
        let prev = cols.last().expect("nonempty");
        let next: Vec<BigInt> = (0..n)
            .map(|v| {
                let mut s = BigInt::zero();
                let mut nb = g.neighbors(v);
                while nb != 0 {
                    s += &prev[nb.trailing_zeros() as usize];
                    nb &= nb - 1;
                }
                s
            })
            .collect();
        cols.push(next);
    }
    IntMatrix::from_columns(&cols)
}

pub fn walk_det(g: &Graph) -> Result<BigInt> {
    Ok(walk_matrix(g)?.determinant())
}

pub fn is_controllable(g: &Graph) -> Result<bool> {
    Ok(!walk_det(g)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkReport {
    pub n: usize,
    #[serde(with = "bigint_string")]
    pub det_signed: BigInt,
    #[serde(with = "bigint_string")]
    pub det_abs: BigInt,
    /// 2-adic valuation of `det_abs`; `None` when the determinant is 0.
    pub v2: Option<u64>,
    /// `det_abs / 2^v2`, or 0 when the determinant is 0.
    #[serde(with = "bigint_string")]
    pub odd_part: BigInt,
    /// `det_abs / 2^floor(n/2)` when nonzero and divisible.
    #[serde(serialize_with = "opt_bigint")]
    pub quotient: Option<BigInt>,
    pub square_free_odd_quotient: bool,
    pub controllable: bool,
    pub condition_c: bool,
    pub criterion_applicable: bool,
}

fn opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl WalkReport {
    /// Builds the report from a known signed determinant of an order-`n` walk matrix.
    pub fn from_det(n: usize, det_signed: BigInt) -> Result<Self> {
        let det_abs = det_signed.abs();
        let controllable = !det_abs.is_zero();
        let half = (n / 2) as u64;
        let (v2, odd_part, quotient) = if controllable {
            let v = det_abs.trailing_zeros().expect("nonzero");
            let odd = &det_abs >> v;
            let q = (v >= half).then(|| &det_abs >> half);
            (Some(v), odd, q)
        } else {
            (None, BigInt::zero(), None)
        };
        let square_free_odd_quotient = match &quotient {
            Some(q) => is_odd_square_free(&q.to_biguint().expect("non-negative"))?,
            None => false,
        };
        Ok(WalkReport {
            n,
            det_signed,
            det_abs,
            v2,
            odd_part,
            quotient,
            square_free_odd_quotient,
            controllable,
            condition_c: square_free_odd_quotient,
            criterion_applicable: n >= CRITERION_MIN_ORDER,
        })
    }

    /// Whether `2^floor(n/2)` divides the determinant (trivially so when it is 0).
    pub fn divisible(&self) -> bool {
        !self.controllable || self.quotient.is_some()
    }
}

pub fn analyze(g: &Graph) -> Result<WalkReport> {
    WalkReport::from_det(g.order(), walk_det(g)?)
}

/// `2^floor(n/2) | det W(g)`, computed without the square-free test.
pub fn walk_det_divisible(g: &Graph) -> Result<bool> {
    let d = walk_det(g)?;
    let half = (g.order() / 2) as u64;
    Ok(d.is_zero() || d.trailing_zeros().expect("nonzero") >= half)
}

/// One signed identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    #[serde(with = "bigint_string")]
    pub lhs: BigInt,
    #[serde(with = "bigint_string")]
    pub rhs: BigInt,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(lhs: BigInt, rhs: BigInt) -> Self {
        let holds = lhs == rhs;
        IdentityCheck { lhs, rhs, holds }
    }
}

fn signed(sign: i32, x: BigInt) -> BigInt {
    if sign < 0 {
        -x
    } else {
        x
    }
}

/// `det W(complement g)` against `(-1)^(n(n-1)/2) det W(g)`.
pub fn verify_complement_det(g: &Graph) -> Result<IdentityCheck> {
    let lhs = walk_det(&g.complement())?;
    let rhs = signed(triangular_sign(g.order()), walk_det(g)?);
    Ok(IdentityCheck::new(lhs, rhs))
}

/// The same comparison on every leading principal `k x k` submatrix, `k = 1..=n`.
pub fn verify_principal_minors(g: &Graph) -> Result<Vec<(usize, IdentityCheck)>> {
    let w = walk_matrix(g)?;
    let wbar = walk_matrix(&g.complement())?;
    (1..=g.order())
        .map(|k| {
            let lhs = wbar.leading_principal_submatrix(k)?.determinant();
            let rhs = signed(triangular_sign(k), w.leading_principal_submatrix(k)?.determinant());
            Ok((k, IdentityCheck::new(lhs, rhs)))
        })
        .collect()
}

/// Union/join determinant identities with the new vertex placed first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionJoinCheck {
    #[serde(with = "bigint_string")]
    pub det_a: BigInt,
    #[serde(with = "bigint_string")]
    pub det_abar: BigInt,
    #[serde(with = "bigint_string")]
    pub det_w: BigInt,
    /// `det W(G ∪ w)`
    #[serde(with = "bigint_string")]
    pub union_lhs: BigInt,
    /// `det A · det W`
    #[serde(with = "bigint_string")]
    pub union_rhs: BigInt,
    /// `det W(G ∨ w)`
    #[serde(with = "bigint_string")]
    pub join_lhs: BigInt,
    /// `|det Ā| · |det W|`
    #[serde(with = "bigint_string")]
    pub join_abs_rhs: BigInt,
    /// `(-1)^n det Ā det W`
    #[serde(with = "bigint_string")]
    pub join_signed_rhs: BigInt,
    pub union_holds: bool,
    pub join_abs_holds: bool,
    pub join_signed_holds: bool,
    /// `det W(G ∨ w) / (det Ā det W)` when the denominator is nonzero.
    pub join_sign_factor: Option<i32>,
}

impl UnionJoinCheck {
    pub fn all_hold(&self) -> bool {
        self.union_holds && self.join_abs_holds && self.join_signed_holds
    }
}

pub fn verify_union_join_det(g: &Graph) -> Result<UnionJoinCheck> {
    require_nonempty(g)?;
    let det_a = IntMatrix::adjacency(g).determinant();
    let det_abar = IntMatrix::adjacency(&g.complement()).determinant();
    let det_w = walk_det(g)?;
    let union_lhs = walk_det(&g.union_with_vertex()?)?;
    let union_rhs = &det_a * &det_w;
    let join_lhs = walk_det(&g.join_with_vertex()?)?;
    let join_plain = &det_abar * &det_w;
    let join_abs_rhs = join_plain.abs();
    let join_signed_rhs = signed(if g.order().is_multiple_of(2) { 1 } else { -1 }, join_plain.clone());
    let join_sign_factor = match (join_plain.sign(), join_lhs.sign()) {
        (Sign::NoSign, _) => None,
        (a, b) if a == b => Some(1),
        (_, Sign::NoSign) => Some(0),
        _ => Some(-1),
    };
    Ok(UnionJoinCheck {
        union_holds: union_lhs == union_rhs,
        join_abs_holds: join_lhs.abs() == join_abs_rhs,
        join_signed_holds: join_lhs == join_signed_rhs,
        det_a,
        det_abar,
        det_w,
        union_lhs,
        union_rhs,
        join_lhs,
        join_abs_rhs,
        join_signed_rhs,
        join_sign_factor,
    })
}

/// Controllability of the one-vertex extensions of a controllable graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SingularExtensionCheck {
    /// The graph itself is not controllable.
    NotApplicable,
    Checked {
        union_controllable: bool,
        adjacency_nonsingular: bool,
        join_controllable: bool,
        complement_nonsingular: bool,
    },
}

impl SingularExtensionCheck {
    /// False only for a checked graph where an equivalence fails.
    pub fn holds(&self) -> bool {
        match *self {
            SingularExtensionCheck::NotApplicable => true,
            SingularExtensionCheck::Checked {
                union_controllable,
                adjacency_nonsingular,
                join_controllable,
                complement_nonsingular,
            } => union_controllable == adjacency_nonsingular && join_controllable == complement_nonsingular,
        }
    }
}

pub fn check_singular_extension(g: &Graph) -> Result<SingularExtensionCheck> {
    if !is_controllable(g)? {
        return Ok(SingularExtensionCheck::NotApplicable);
    }
    Ok(SingularExtensionCheck::Checked {
        union_controllable: is_controllable(&g.union_with_vertex()?)?,
        adjacency_nonsingular: !IntMatrix::adjacency(g).determinant().is_zero(),
        join_controllable: is_controllable(&g.join_with_vertex()?)?,
        complement_nonsingular: !IntMatrix::adjacency(&g.complement()).determinant().is_zero(),
    })
}
