//! Generalized-spectrum census at small orders.
//!
//! Two graphs share the generalized spectrum exactly when the characteristic
//! polynomials of their adjacency matrices and of their complements agree.
//! A census groups every isomorphism class of one order by that pair; a class
//! alone in its group is determined by its generalized spectrum (DGS).

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_order, Error, Result};
use crate::graph::{
    canonical_form, canonical_graph, enumerate_graph_classes, enumerate_labeled_graphs, graph6_decode, graph6_encode,
    CanonicalForm, Graph, ENUM_MAX_ORDER,
};
use crate::linalg::{bigint_string, IntMatrix, IntPoly};
use crate::walk::analyze;

pub const CENSUS_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpectralFingerprint {
    /// `det(xI - A)`
    pub p_g: IntPoly,
    /// `det(xI - Ā)`
    pub p_gbar: IntPoly,
}

impl SpectralFingerprint {
    /// Hex digest used as an index key; equality is always decided on the coefficients.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        for p in [&self.p_g, &self.p_gbar] {
            for c in p.coeffs() {
                h.update(c.to_string().as_bytes());
                h.update(b",");
            }
            h.update(b";");
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Fingerprint of the complement: the two components swapped.
    pub fn swapped(&self) -> SpectralFingerprint {
        SpectralFingerprint {
            p_g: self.p_gbar.clone(),
            p_gbar: self.p_g.clone(),
        }
    }
}

pub fn fingerprint(g: &Graph) -> Result<SpectralFingerprint> {
    if g.order() == 0 {
        return Err(Error::Size {
            what: "fingerprint",
            got: 0,
            min: 1,
            max: crate::graph::MAX_ORDER,
        });
    }
    Ok(SpectralFingerprint {
        p_g: IntMatrix::adjacency(g).char_poly(),
        p_gbar: IntMatrix::adjacency(&g.complement()).char_poly(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// graph6 of the canonical representative.
    pub graph6: String,
    pub n: usize,
    pub edge_count: usize,
    pub fingerprint_hash: String,
    pub char_poly: IntPoly,
    pub complement_char_poly: IntPoly,
    #[serde(with = "bigint_string")]
    pub det_w_abs: BigInt,
    pub condition_c: bool,
    pub controllable: bool,
    pub class_id: usize,
}

impl CensusRecord {
    pub fn fingerprint(&self) -> SpectralFingerprint {
        SpectralFingerprint {
            p_g: self.char_poly.clone(),
            p_gbar: self.complement_char_poly.clone(),
        }
    }

    pub fn graph(&self) -> Result<Graph> {
        graph6_decode(self.graph6.as_bytes())
    }

    fn for_class(g: &Graph) -> Result<Self> {
        let canon = canonical_graph(g)?;
        let fp = fingerprint(&canon)?;
        let report = analyze(&canon)?;
        Ok(CensusRecord {
            graph6: graph6_encode(&canon),
            n: canon.order(),
            edge_count: canon.edge_count(),
            fingerprint_hash: fp.hash_hex(),
            char_poly: fp.p_g,
            complement_char_poly: fp.p_gbar,
            det_w_abs: report.det_abs,
            condition_c: report.condition_c,
            controllable: report.controllable,
            class_id: 0,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSettings {
    pub method: String,
    pub connected_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusHeader {
    pub format_version: u32,
    pub n: usize,
    pub generator_settings: GeneratorSettings,
}

/// Records sorted by `(class_id, graph6)`; class ids follow fingerprint order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub header: CensusHeader,
    records: Vec<CensusRecord>,
    classes: BTreeMap<SpectralFingerprint, Vec<usize>>,
}

impl Census {
    /// Groups records by fingerprint and assigns class ids in fingerprint order.
    pub fn from_records(header: CensusHeader, mut records: Vec<CensusRecord>) -> Self {
        let mut ids: BTreeMap<SpectralFingerprint, usize> = BTreeMap::new();
        for r in &records {
            ids.entry(r.fingerprint()).or_insert(0);
        }
        for (k, id) in ids.values_mut().enumerate() {
            *id = k;
        }
        for r in &mut records {
            r.class_id = ids[&r.fingerprint()];
        }
        records.sort_by(|a, b| (a.class_id, a.n, &a.graph6).cmp(&(b.class_id, b.n, &b.graph6)));
        let mut classes: BTreeMap<SpectralFingerprint, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            classes.entry(r.fingerprint()).or_default().push(i);
        }
        Census {
            header,
            records,
            classes,
        }
    }

    pub fn records(&self) -> &[CensusRecord] {
        &self.records
    }

    /// Fingerprint classes in id order.
    pub fn classes(&self) -> impl Iterator<Item = (&SpectralFingerprint, Vec<&CensusRecord>)> {
        self.classes
            .iter()
            .map(|(fp, idx)| (fp, idx.iter().map(|&i| &self.records[i]).collect()))
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn lookup(&self, fp: &SpectralFingerprint) -> Vec<&CensusRecord> {
        self.classes
            .get(fp)
            .map(|idx| idx.iter().map(|&i| &self.records[i]).collect())
            .unwrap_or_default()
    }

    pub fn find(&self, graph6: &str) -> Option<&CensusRecord> {
        self.records.iter().find(|r| r.graph6 == graph6)
    }

    /// Whether the record is alone in its fingerprint class.
    pub fn is_dgs(&self, record: &CensusRecord) -> bool {
        self.classes.get(&record.fingerprint()).is_some_and(|v| v.len() == 1)
    }

    pub fn dgs_count(&self) -> usize {
        self.classes.values().filter(|v| v.len() == 1).count()
    }

    /// Histogram of fingerprint-class sizes.
    pub fn class_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for v in self.classes.values() {
            *h.entry(v.len()).or_insert(0) += 1;
        }
        h
    }

    /// Adds the records of another census (for example a different order).
    pub fn merge(self, other: Census) -> Census {
        let mut records = self.records;
        records.extend(other.records);
        Census::from_records(self.header, records)
    }

    pub fn covers_order(&self, n: usize) -> bool {
        self.records.iter().any(|r| r.n == n)
    }
}

/// Every isomorphism class of order `n`, grouped by fingerprint.
pub fn build_census(n: usize) -> Result<Census> {
    check_order("census", n, 1, ENUM_MAX_ORDER)?;
    let classes = enumerate_graph_classes(n, false)?;
    let records = classes.par_iter().map(CensusRecord::for_class).collect::<Result<Vec<_>>>()?;
    let header = CensusHeader {
        format_version: CENSUS_FORMAT_VERSION,
        n,
        generator_settings: GeneratorSettings {
            method: "vertex-extension with canonical deduplication".into(),
            connected_only: false,
        },
    };
    Ok(Census::from_records(header, records))
}

/// Header line followed by one JSON record per line.
pub fn write_census<W: Write>(census: &Census, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    let to_io = |e: serde_json::Error| Error::Io(e.to_string());
    serde_json::to_writer(&mut w, &census.header).map_err(to_io)?;
    w.write_all(b"\n")?;
    for r in &census.records {
        serde_json::to_writer(&mut w, r).map_err(to_io)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_census(census: &Census, path: &Path) -> Result<()> {
    write_census(census, std::fs::File::create(path)?)
}

/// Reads a census; a body may hold records of several orders (concatenated files).
pub fn read_census<R: std::io::Read>(input: R) -> Result<Census> {
    let reader = BufReader::new(input);
    let mut header: Option<CensusHeader> = None;
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::CensusLoad { line: lineno, msg };
        match &header {
            None => {
                let h: CensusHeader = serde_json::from_str(&line).map_err(|e| bad(format!("bad header: {e}")))?;
                if h.format_version != CENSUS_FORMAT_VERSION {
                    return Err(bad(format!(
                        "format version {} unsupported (expected {CENSUS_FORMAT_VERSION})",
                        h.format_version
                    )));
                }
                header = Some(h);
            }
            Some(_) => {
                let r: CensusRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
                let g = r.graph().map_err(|e| bad(e.to_string()))?;
                if g.order() != r.n || r.char_poly.degree() != r.n || r.complement_char_poly.degree() != r.n {
                    return Err(bad("record order is inconsistent".into()));
                }
                records.push(r);
            }
        }
    }
    let header = header.ok_or(Error::CensusLoad {
        line: 1,
        msg: "missing header".into(),
    })?;
    Ok(Census::from_records(header, records))
}

pub fn load_census(path: &Path) -> Result<Census> {
    read_census(std::fs::File::open(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DgsMethod {
    Census,
    StagedLabeledScan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgsVerdict {
    pub dgs: bool,
    /// Canonical representatives of the non-isomorphic classes sharing the fingerprint.
    pub mates: Vec<Graph>,
    pub method: DgsMethod,
}

fn mates_from_census(g: &Graph, census: &Census) -> Result<Vec<Graph>> {
    let fp = fingerprint(g)?;
    let own = graph6_encode(&canonical_graph(g)?);
    census
        .lookup(&fp)
        .into_iter()
        .filter(|r| r.graph6 != own)
        .map(CensusRecord::graph)
        .collect()
}

/// Brute-force DGS test for `n <= 8`. Uses `census` when it covers the order;
/// otherwise builds one for `n <= 7` and runs [`staged_labeled_scan`] at 8.
pub fn is_dgs_bruteforce(g: &Graph, census: Option<&Census>) -> Result<DgsVerdict> {
    let n = g.order();
    check_order("DGS check", n, 1, ENUM_MAX_ORDER)?;
    let (mates, method) = match census {
        Some(c) if c.covers_order(n) => (mates_from_census(g, c)?, DgsMethod::Census),
        _ if n < ENUM_MAX_ORDER => (mates_from_census(g, &build_census(n)?)?, DgsMethod::Census),
        _ => (staged_labeled_scan(g)?.mates, DgsMethod::StagedLabeledScan),
    };
    Ok(DgsVerdict {
        dgs: mates.is_empty(),
        mates,
        method,
    })
}

/// Counts of labeled graphs surviving each filter of [`staged_labeled_scan`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanStages {
    pub scanned: u64,
    pub edge_count: u64,
    pub triangles: u64,
    pub closed_walks: u64,
    pub fingerprint: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedScan {
    pub stages: ScanStages,
    pub mates: Vec<Graph>,
}

/// `tr(A^k)` for `k = 1..=n`, in fixed width (n <= 8 keeps entries below 7^8).
fn closed_walks(rows: &[u64]) -> [u64; ENUM_MAX_ORDER] {
    let n = rows.len();
    let mut a = [[0u64; ENUM_MAX_ORDER]; ENUM_MAX_ORDER];
    for (u, &r) in rows.iter().enumerate() {
        for (v, x) in a[u].iter_mut().enumerate().take(n) {
            *x = r >> v & 1;
        }
    }
    let mut p = a;
    let mut out = [0u64; ENUM_MAX_ORDER];
    for (k, slot) in out.iter_mut().enumerate().take(n) {
        *slot = (0..n).map(|i| p[i][i]).sum();
        if k + 1 < n {
            let mut next = [[0u64; ENUM_MAX_ORDER]; ENUM_MAX_ORDER];
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0;
                    let mut nb = rows[j];
                    while nb != 0 {
                        let l = nb.trailing_zeros() as usize;
                        nb &= nb - 1;
                        s += p[i][l];
                    }
                    next[i][j] = s;
                }
            }
            p = next;
        }
    }
    out
}

fn triangles(rows: &[u64]) -> u32 {
    let mut t = 0;
    for (u, &r) in rows.iter().enumerate() {
        let mut nb = r >> (u + 1) << (u + 1);
        while nb != 0 {
            let v = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            t += (r & rows[v]).count_ones();
        }
    }
    t / 3
}

fn complement_rows(rows: &[u64], out: &mut [u64]) {
    let full = (1u64 << rows.len()) - 1;
    for (v, (o, &r)) in out.iter_mut().zip(rows).enumerate() {
        *o = !r & full & !(1 << v);
    }
}

/// Scans every labeled graph of `g`'s order for generalized-cospectral mates.
///
/// Filters, cheapest first: edge count, triangle counts of the graph and its
/// complement, closed-walk counts `tr(A^k)` and `tr(Ā^k)` for `k <= n` (which
/// determine both characteristic polynomials), then canonical form to drop
/// relabelings of `g`, and finally exact fingerprint equality.
pub fn staged_labeled_scan(g: &Graph) -> Result<StagedScan> {
    let n = g.order();
    check_order("staged labeled scan", n, 1, ENUM_MAX_ORDER)?;
    let gbar = g.complement();
    let target_edges = g.edge_count() as u32;
    let target_tri = (triangles(g.rows()), triangles(gbar.rows()));
    let target_walks = (closed_walks(g.rows()), closed_walks(gbar.rows()));
    let target_fp = fingerprint(g)?;
    let own = canonical_form(g)?;

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let range = enumerate_labeled_graphs(n)?;
    let parts = range.partition(4096);

    type Acc = (ScanStages, BTreeMap<CanonicalForm, Graph>);
    let (stages, found) = parts
        .into_par_iter()
        .map(|part| -> Result<Acc> {
            let mut st = ScanStages::default();
            let mut found = BTreeMap::new();
            let mut rows = [0u64; ENUM_MAX_ORDER];
            let mut crow = [0u64; ENUM_MAX_ORDER];
            for mask in part.indices.clone() {
                st.scanned += 1;
                if mask.count_ones() != target_edges {
                    continue;
                }
                st.edge_count += 1;
                rows[..n].fill(0);
                let mut m = mask;
                while m != 0 {
                    let (u, v) = pairs[m.trailing_zeros() as usize];
                    m &= m - 1;
                    rows[u] |= 1 << v;
                    rows[v] |= 1 << u;
                }
                complement_rows(&rows[..n], &mut crow[..n]);
                if (triangles(&rows[..n]), triangles(&crow[..n])) != target_tri {
                    continue;
                }
                st.triangles += 1;
                if (closed_walks(&rows[..n]), closed_walks(&crow[..n])) != target_walks {
                    continue;
                }
                st.closed_walks += 1;
                let h = Graph::from_rows(rows[..n].to_vec())?;
                let cf = canonical_form(&h)?;
                if cf == own || found.contains_key(&cf) {
                    continue;
                }
                if fingerprint(&h)? == target_fp {
                    st.fingerprint += 1;
                    found.insert(cf, canonical_graph(&h)?);
                }
            }
            Ok((st, found))
        })
        .try_reduce(
            || (ScanStages::default(), BTreeMap::new()),
            |(mut a, mut fa), (b, fb)| {
                a.scanned += b.scanned;
                a.edge_count += b.edge_count;
                a.triangles += b.triangles;
                a.closed_walks += b.closed_walks;
                a.fingerprint += b.fingerprint;
                fa.extend(fb);
                Ok((a, fa))
            },
        )?;
    Ok(StagedScan {
        stages,
        mates: found.into_values().collect(),
    })
}
