//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use walkdet::census::{build_census, fingerprint, is_dgs_bruteforce, staged_labeled_scan, Census, DgsMethod};
use walkdet::family::{build_family, family_params, predicted_walk_det, scan_starters, StarterRecord};
use walkdet::graph::{enumerate_graph_classes, graph6_decode, graph6_encode};
use walkdet::sachs::char_poly_via_sachs;
use walkdet::walk::{
    analyze, check_singular_extension, is_controllable, verify_complement_det, verify_principal_minors,
    verify_union_join_det,
};
use walkdet::{Error, Graph, IntMatrix};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classes_upto(n_max: usize) -> Vec<Graph> {
    (1..=n_max).flat_map(|n| enumerate_graph_classes(n, false).unwrap()).collect()
}

fn random_graphs(orders: std::ops::RangeInclusive<usize>, total: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders: Vec<usize> = orders.collect();
    (0..total).map(|k| Graph::random(orders[k % orders.len()], &mut rng).unwrap()).collect()
}

fn starters() -> Vec<StarterRecord> {
    scan_starters(6, true).unwrap().into_iter().filter(|r| r.verdict.starter).collect()
}

fn starter_scan_via_cli() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_walkdet"))
        .args(["--json", "scan-starters", "--n", "6", "--connected"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (summary, rows) = lines.split_last().ok_or("no output")?;
    let classes = rows.len();
    let controllable: Vec<&Value> = rows.iter().filter(|r| r["report"]["controllable"] == true).collect();
    let mut dets: BTreeMap<String, usize> = BTreeMap::new();
    for r in &controllable {
        *dets.entry(r["report"]["det_abs"].as_str().unwrap().to_string()).or_default() += 1;
    }
    let starters = rows.iter().filter(|r| r["starter"] == true).count();
    let expect: BTreeMap<String, usize> = [("24".to_string(), 2), ("8".to_string(), 6)].into();
    ensure(classes == 112, || format!("{classes} classes"))?;
    ensure(controllable.len() == 8, || format!("{} controllable", controllable.len()))?;
    ensure(dets == expect, || format!("|det W| multiset {dets:?}"))?;
    ensure(starters == 6, || format!("{starters} starters"))?;
    ensure(summary["summary"]["starters"] == 6, || "summary disagrees".into())?;
    Ok("112 classes, 8 controllable, |det W| {24x2, 8x6}, 6 starters".into())
}

fn complement_identity() -> Check {
    let mut graphs = classes_upto(6);
    let exhaustive = graphs.len();
    graphs.extend(random_graphs(7..=10, 10_000, 21));
    let failures: Vec<String> = graphs
        .par_iter()
        .filter(|g| {
            let whole = verify_complement_det(g).unwrap().holds;
            let minors = verify_principal_minors(g).unwrap().iter().all(|(_, c)| c.holds);
            !(whole && minors)
        })
        .map(graph6_encode)
        .collect();
    ensure(failures.is_empty(), || format!("failures: {failures:?}"))?;
    Ok(format!("{exhaustive} classes (n <= 6) + 10000 random (n = 7..10), all minors"))
}

fn union_join_identity() -> Check {
    // no odd order up to 6 has det(Ā)·det(W) != 0, so random graphs at 7..9 show the odd sign
    let mut graphs = classes_upto(6);
    let exhaustive = graphs.len();
    graphs.extend(random_graphs(7..=9, 3_000, 31));
    let mut factors: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
    for g in &graphs {
        let c = verify_union_join_det(g).unwrap();
        ensure(c.union_holds && c.join_abs_holds, || format!("{g}: {c:?}"))?;
        if let Some(f) = c.join_sign_factor {
            let seen = factors.entry(g.order()).or_default();
            if !seen.contains(&f) {
                seen.push(f);
            }
        }
    }
    for (n, seen) in &factors {
        let expect = if n % 2 == 0 { 1 } else { -1 };
        ensure(seen == &[expect], || format!("n = {n}: join sign factors {seen:?}"))?;
    }
    let observed: Vec<String> = factors.iter().map(|(n, f)| format!("n={n}:{:+}", f[0])).collect();
    Ok(format!("{exhaustive} classes + 3000 random (n = 7..9); join sign factor {}", observed.join(" ")))
}

fn elementary_subgraph_oracle() -> Check {
    let mut graphs = classes_upto(6);
    graphs.extend(random_graphs(7..=7, 100, 41));
    graphs.extend(random_graphs(8..=8, 100, 42));
    let failures: Vec<String> = graphs
        .par_iter()
        .filter(|g| char_poly_via_sachs(g).unwrap() != IntMatrix::adjacency(g).char_poly())
        .map(graph6_encode)
        .collect();
    ensure(failures.is_empty(), || format!("mismatches: {failures:?}"))?;
    Ok(format!("{} graphs, zero coefficient mismatches", graphs.len()))
}

fn divisibility() -> Check {
    let mut graphs: Vec<Graph> = [6, 7].iter().flat_map(|&n| enumerate_graph_classes(n, false).unwrap()).collect();
    let exhaustive = graphs.len();
    graphs.extend(random_graphs(8..=12, 100_000, 51));
    let violations: Vec<String> = graphs
        .par_iter()
        .filter(|g| {
            let r = analyze(g).unwrap();
            let divisor = BigInt::from(1) << (g.order() / 2);
            // checked directly against the determinant, not through the report
            (&r.det_signed % &divisor) != BigInt::from(0) || !r.divisible()
        })
        .map(graph6_encode)
        .collect();
    ensure(violations.is_empty(), || format!("violations: {violations:?}"))?;
    Ok(format!("{exhaustive} classes (n = 6, 7) + 100000 random (n = 8..12)"))
}

fn family_formula() -> Check {
    let starters = starters();
    ensure(starters.len() == 6, || format!("{} starters", starters.len()))?;
    for s in &starters {
        let steps = build_family(&s.graph, 10).map_err(|e| e.to_string())?;
        let params = family_params(&s.graph).unwrap();
        let mut g = s.graph.clone();
        for (i, step) in steps.iter().enumerate().skip(1) {
            // rebuild independently of the library's family builder
            g = if i % 2 == 1 {
                g.union_with_vertex().unwrap()
            } else {
                g.join_with_vertex().unwrap()
            };
            let direct = IntMatrix::from_columns(&walk_columns(&g)).unwrap().determinant().magnitude().clone();
            let direct = BigInt::from(direct);
            ensure(step.graph == g, || format!("{}: step {i} graph differs", s.graph6))?;
            ensure(predicted_walk_det(&params, i) == direct, || {
                format!("{}: step {i} predicted {} vs {direct}", s.graph6, predicted_walk_det(&params, i))
            })?;
            ensure(step.walk_report.condition_c, || format!("{}: step {i} fails condition C", s.graph6))?;
            if params.b == BigInt::from(8) {
                let target = BigInt::from(1) << ((6 + i) / 2);
                ensure(direct == target, || format!("{}: step {i} {direct} != {target}", s.graph6))?;
            }
            if i <= 6 {
                let comp = analyze(&g.complement()).unwrap();
                ensure(comp.condition_c, || format!("{}: complement of step {i} fails condition C", s.graph6))?;
            }
        }
    }
    Ok("6 starters x 10 steps exact; condition C at every step; b = 8 gives 2^floor((6+i)/2)".into())
}

/// Walk-matrix columns by repeated neighbor sums, without matrix products.
fn walk_columns(g: &Graph) -> Vec<Vec<BigInt>> {
    let n = g.order();
    let mut col = vec![BigInt::from(1); n];
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .map(|v| (0..n).filter(|&u| g.has_edge(u, v)).map(|u| col[u].clone()).sum())
            .collect();
        cols.push(std::mem::replace(&mut col, next));
    }
    cols
}

fn small_family_members_dgs() -> Check {
    let t = Instant::now();
    let census7 = build_census(7).unwrap();
    ensure(census7.records().len() == 1044, || format!("{} classes at n = 7", census7.records().len()))?;
    let census_time = t.elapsed();
    let t = Instant::now();
    for s in starters() {
        let steps = build_family(&s.graph, 2).unwrap();
        let v1 = is_dgs_bruteforce(&steps[1].graph, Some(&census7)).unwrap();
        ensure(v1.dgs && v1.method == DgsMethod::Census, || format!("{}: G_1 {v1:?}", s.graph6))?;
        let scan = staged_labeled_scan(&steps[2].graph).unwrap();
        ensure(scan.mates.is_empty(), || format!("{}: G_2 mates {:?}", s.graph6, scan.mates))?;
        ensure(scan.stages.scanned == 1 << 28, || "scan incomplete".into())?;
    }
    Ok(format!(
        "G_1 via 1044-class census ({:.1?}), G_2 via 2^28-graph staged scan ({:.1?}); no mates",
        census_time,
        t.elapsed()
    ))
}

fn census_consistency() -> Check {
    let mut summary = Vec::new();
    for n in [6, 7] {
        let census: Census = build_census(n).unwrap();
        for r in census.records() {
            let fp = r.fingerprint();
            if r.condition_c {
                let class = census.lookup(&fp);
                ensure(class.len() == 1, || format!("{} satisfies condition C but has mates", r.graph6))?;
            }
            let g = r.graph().unwrap();
            let comp_fp = fingerprint(&g.complement()).unwrap();
            ensure(comp_fp == fp.swapped(), || format!("{}: complement fingerprint", r.graph6))?;
            let dgs = census.is_dgs(r);
            let comp_dgs = census.lookup(&comp_fp).len() == 1;
            ensure(dgs == comp_dgs, || format!("{}: DGS not complement-invariant", r.graph6))?;
        }
        summary.push(format!(
            "n={n}: {} classes, {} fingerprints, {} DGS",
            census.records().len(),
            census.class_count(),
            census.dgs_count()
        ));
    }
    Ok(summary.join("; "))
}

fn controllability_extensions() -> Check {
    let graphs = classes_upto(6);
    let mut checked = 0;
    for g in &graphs {
        let own = is_controllable(g).unwrap();
        ensure(own == is_controllable(&g.complement()).unwrap(), || format!("{g}: complement"))?;
        if own {
            checked += 1;
            let det_a = IntMatrix::adjacency(g).determinant();
            let det_abar = IntMatrix::adjacency(&g.complement()).determinant();
            let union = is_controllable(&g.union_with_vertex().unwrap()).unwrap();
            let join = is_controllable(&g.join_with_vertex().unwrap()).unwrap();
            ensure(union == (det_a != BigInt::from(0)), || format!("{g}: union"))?;
            ensure(join == (det_abar != BigInt::from(0)), || format!("{g}: join"))?;
        }
        ensure(check_singular_extension(g).unwrap().holds(), || format!("{g}: library check"))?;
    }
    Ok(format!("{} classes, {checked} controllable", graphs.len()))
}

/// Reference encoder written straight from the format description.
fn reference_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut bits = Vec::new();
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v) as u8);
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(0);
    }
    let mut s = String::new();
    s.push((n as u8 + 63) as char);
    for chunk in bits.chunks(6) {
        let x = chunk.iter().fold(0u8, |acc, &b| acc << 1 | b);
        s.push((x + 63) as char);
    }
    s
}

fn graph6_codec() -> Check {
    let graphs = classes_upto(7);
    for g in &graphs {
        let s = graph6_encode(g);
        ensure(s == reference_graph6(g), || format!("{g:?}: encoder disagrees with reference"))?;
        ensure(graph6_decode(s.as_bytes()).as_ref() == Ok(g), || format!("{s}: round trip"))?;
    }
    let malformed: [(&[u8], usize); 9] = [
        (b"", 0),
        (b"~", 0),
        (b" ", 0),
        (b"B", 1),
        (b"Bww", 2),
        (b"C\x01", 1),
        (b"Dq", 2),
        (b"B@", 1),
        (b">>graph6<<Dq", 12),
    ];
    for (input, offset) in malformed {
        match graph6_decode(input) {
            Err(Error::Parse { offset: got, .. }) => {
                ensure(got == offset, || format!("{input:?}: offset {got}, expected {offset}"))?
            }
            other => return Err(format!("{input:?}: expected parse error, got {other:?}")),
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_walkdet"))
        .args(["analyze", "Dq"])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(2) && stderr.contains("byte 2"), || format!("CLI: {stderr}"))?;
    Ok(format!("{} classes round-trip; {} malformed inputs rejected at the right byte", graphs.len(), malformed.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("starter scan at n = 6", starter_scan_via_cli),
        ("complement walk-determinant identity", complement_identity),
        ("union/join walk-determinant identities", union_join_identity),
        ("elementary-subgraph coefficients", elementary_subgraph_oracle),
        ("2^floor(n/2) divides det W", divisibility),
        ("family determinant formula", family_formula),
        ("first family members are DGS", small_family_members_dgs),
        ("census consistency", census_consistency),
        ("controllability of complements and extensions", controllability_extensions),
        ("graph6 codec", graph6_codec),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] criterion {}: {name} — {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} — {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
