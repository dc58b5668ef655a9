//! graph6 codec for orders up to 62 (single size byte).
//!
//! Body bits are the upper triangle in column order, `x(0,1), x(0,2), x(1,2),
//! x(0,3), ...`, packed six to a byte, most significant first, each byte
//! offset by 63. Trailing padding bits must be zero.

use super::{Graph, MAX_ORDER};
use crate::error::{Error, Result};

const HEADER: &[u8] = b">>graph6<<";

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn graph6_encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut nbits = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            nbits += 1;
            if nbits == 6 {
                out.push(63 + acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(63 + (acc << (6 - nbits)));
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decodes one graph6 record. An optional `>>graph6<<` prefix is accepted;
/// error offsets count from the start of `text`.
pub fn graph6_decode(text: &[u8]) -> Result<Graph> {
    let start = if text.starts_with(HEADER) { HEADER.len() } else { 0 };
    let data = &text[start..];
    let err = |pos: usize, msg: String| Error::Parse { offset: start + pos, msg };

    let &size = data.first().ok_or_else(|| err(0, "missing size byte".into()))?;
    if !(63..=126).contains(&size) {
        return Err(err(0, format!("illegal size byte {size}")));
    }
    if size == 126 {
        return Err(err(0, format!("orders above {MAX_ORDER} are not supported")));
    }
    let n = (size - 63) as usize;
    let expected = body_len(n);
    let body = &data[1..];
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(1 + i, format!("illegal byte {b}")));
        }
    }
    if body.len() < expected {
        return Err(err(
            1 + body.len(),
            format!("truncated bit field: {} of {expected} bytes", body.len()),
        ));
    }
    if body.len() > expected {
        return Err(err(1 + expected, format!("{} trailing bytes", body.len() - expected)));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let bit = (body[k / 6] - 63) >> (5 - k % 6) & 1;
            if bit == 1 {
                g.set_edge(u, v, true);
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let pad_mask = (1u8 << (6 - k % 6)) - 1;
        if (body[expected - 1] - 63) & pad_mask != 0 {
            return Err(err(expected, "nonzero padding bits".into()));
        }
    }
    Ok(g)
}
