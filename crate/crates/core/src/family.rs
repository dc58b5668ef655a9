//! Alternating union/join families `G_0, G_1, G_2, ...`.
//!
//! `G_i = G_{i-1} ∪ w_i` for odd `i` and `G_{i-1} ∨ w_i` for even `i`, with
//! `w_i` placed at index 0. With `a = |det A(G_0)|`, `b = |det W(G_0)|` and
//! `p = |det A(complement G_1)|`, every step satisfies
//! `|det W(G_i)| = a^ceil(i/2) · b · p^floor(i/2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_order, Error, Result};
use crate::factor::is_odd_square_free;
use crate::graph::{canonical_form, enumerate_graph_classes, graph6_encode, Graph, ENUM_MAX_ORDER, MAX_ORDER};
use crate::linalg::{bigint_string, IntMatrix};
use crate::walk::{analyze, walk_det, WalkReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub n0: usize,
    #[serde(with = "bigint_string")]
    pub a: BigInt,
    #[serde(with = "bigint_string")]
    pub b: BigInt,
    #[serde(with = "bigint_string")]
    pub p: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOp {
    None,
    Union,
    Join,
}

impl std::fmt::Display for StepOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepOp::None => "-",
            StepOp::Union => "union",
            StepOp::Join => "join",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyStep {
    pub i: usize,
    pub graph: Graph,
    pub op_applied: StepOp,
    pub predicted_abs_det: BigInt,
    pub actual_abs_det: BigInt,
    pub walk_report: WalkReport,
}

/// One JSON-lines record per family step.
#[derive(Serialize)]
pub struct StepRecord {
    pub i: usize,
    pub n: usize,
    pub op: StepOp,
    pub graph6: String,
    #[serde(with = "bigint_string")]
    pub predicted_abs_det: BigInt,
    #[serde(with = "bigint_string")]
    pub actual_abs_det: BigInt,
    pub condition_c: bool,
    pub criterion_applicable: bool,
}

impl FamilyStep {
    pub fn record(&self) -> StepRecord {
        StepRecord {
            i: self.i,
            n: self.graph.order(),
            op: self.op_applied,
            graph6: graph6_encode(&self.graph),
            predicted_abs_det: self.predicted_abs_det.clone(),
            actual_abs_det: self.actual_abs_det.clone(),
            condition_c: self.walk_report.condition_c,
            criterion_applicable: self.walk_report.criterion_applicable,
        }
    }
}

/// `G_i` from `G_{i-1}`: union at odd `next_index`, join at even.
pub fn next_graph(g: &Graph, next_index: usize) -> Result<Graph> {
    match next_index {
        0 => Err(Error::Domain("family steps start at index 1".into())),
        i if i % 2 == 1 => g.union_with_vertex(),
        _ => g.join_with_vertex(),
    }
}

pub fn family_params(g0: &Graph) -> Result<FamilyParams> {
    let n0 = g0.order();
    check_order("family starter", n0, 1, MAX_ORDER - 1)?;
    let g1 = next_graph(g0, 1)?;
    Ok(FamilyParams {
        n0,
        a: IntMatrix::adjacency(g0).determinant().abs(),
        b: walk_det(g0)?.abs(),
        p: IntMatrix::adjacency(&g1.complement()).determinant().abs(),
    })
}

/// `a^ceil(i/2) · b · p^floor(i/2)`; `b` at `i = 0`.
pub fn predicted_walk_det(params: &FamilyParams, i: usize) -> BigInt {
    let up = i.div_ceil(2) as u32;
    let down = (i / 2) as u32;
    Pow::pow(&params.a, up) * &params.b * Pow::pow(&params.p, down)
}

/// Steps `0..=k`. Orders stay within [`MAX_ORDER`], so `k <= MAX_ORDER - n0`.
/// A step whose determinant disagrees with the prediction is an error.
pub fn build_family(g0: &Graph, k: usize) -> Result<Vec<FamilyStep>> {
    let params = family_params(g0)?;
    check_order("family final graph", g0.order() + k, 1, MAX_ORDER)?;
    let mut steps = Vec::with_capacity(k + 1);
    let mut g = g0.clone();
    for i in 0..=k {
        let op_applied = if i == 0 {
            StepOp::None
        } else {
            g = next_graph(&g, i)?;
            if i % 2 == 1 {
                StepOp::Union
            } else {
                StepOp::Join
            }
        };
        let walk_report = analyze(&g)?;
        let predicted_abs_det = predicted_walk_det(&params, i);
        let actual_abs_det = walk_report.det_abs.clone();
        if predicted_abs_det != actual_abs_det {
            return Err(Error::Mismatch(format!(
                "step {i} ({}): predicted |det W| = {predicted_abs_det}, computed {actual_abs_det}",
                graph6_encode(&g)
            )));
        }
        steps.push(FamilyStep {
            i,
            graph: g.clone(),
            op_applied,
            predicted_abs_det,
            actual_abs_det,
            walk_report,
        });
    }
    Ok(steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarterVerdict {
    pub starter: bool,
    /// Each failed clause; empty for a valid starter.
    pub reasons: Vec<String>,
}

/// Whether `{a, p} = {1, 2}` and `b / 2^floor(n0/2)` is an odd square-free integer.
pub fn is_dgs_starter(g0: &Graph) -> Result<StarterVerdict> {
    let params = family_params(g0)?;
    starter_verdict(&params)
}

pub fn starter_verdict(params: &FamilyParams) -> Result<StarterVerdict> {
    let mut reasons = Vec::new();
    let one = BigInt::one();
    let two = BigInt::from(2);
    let ap_ok = (params.a == one && params.p == two) || (params.a == two && params.p == one);
    if !ap_ok {
        reasons.push(format!("{{a,p}} = {{{},{}}} ≠ {{1,2}}", params.a, params.p));
    }
    let divisor = BigInt::one() << (params.n0 / 2);
    let (q, r) = params.b.div_rem(&divisor);
    if params.b.is_zero() || !r.is_zero() {
        reasons.push(format!("b = {} not a nonzero multiple of 2^{}", params.b, params.n0 / 2));
    } else if !is_odd_square_free(&q.to_biguint().expect("non-negative"))? {
        reasons.push(format!("b / 2^{} = {q} is not odd and square-free", params.n0 / 2));
    }
    Ok(StarterVerdict {
        starter: reasons.is_empty(),
        reasons,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarterRecord {
    pub graph: Graph,
    pub graph6: String,
    pub params: FamilyParams,
    pub report: WalkReport,
    pub verdict: StarterVerdict,
}

/// Every isomorphism class of order `n` with its family parameters, sorted by
/// `(|det W|, canonical form)`.
pub fn scan_starters(n: usize, connected_only: bool) -> Result<Vec<StarterRecord>> {
    check_order("starter scan", n, 1, ENUM_MAX_ORDER)?;
    let classes = enumerate_graph_classes(n, connected_only)?;
    let mut records = classes
        .into_par_iter()
        .map(|g| {
            let params = family_params(&g)?;
            let report = analyze(&g)?;
            let verdict = starter_verdict(&params)?;
            let key = canonical_form(&g)?;
            Ok((
                key,
                StarterRecord {
                    graph6: graph6_encode(&g),
                    graph: g,
                    params,
                    report,
                    verdict,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|(ka, a), (kb, b)| a.report.det_abs.cmp(&b.report.det_abs).then_with(|| ka.cmp(kb)));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}
