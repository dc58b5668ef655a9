//! Exact integer matrices and characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::one(); dim * dim],
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Domain(format!("row {i} has length {}, expected {dim}", r.len())));
            }
            entries.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Builds from column vectors of equal length.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Domain(format!("column {j} has length {}, expected {dim}", c.len())));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn adjacency(g: &Graph) -> Self {
        let n = g.order();
        let mut m = Self::zeros(n);
        for (u, v) in g.edges() {
            m[(u, v)] = BigInt::one();
            m[(v, u)] = BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| &self[(i, i)]).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rows and columns `0..k`, for `1 <= k <= dim`.
    pub fn leading_principal_submatrix(&self, k: usize) -> Result<IntMatrix> {
        if k == 0 || k > self.dim {
            return Err(Error::Bounds { index: k, len: self.dim });
        }
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.entries[i * k..(i + 1) * k].clone_from_slice(&self.row(i)[..k]);
        }
        Ok(m)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let aik = a[i * n + k].clone();
                for j in k + 1..n {
                    let t = &pivot * &a[i * n + j] - &aik * &a[k * n + j];
                    // exact by Sylvester's identity
                    a[i * n + j] = t.div_floor(&prev);
                }
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
    ///
    /// Every division by `k` is exact for integer matrices; a nonzero
    /// remainder would indicate corrupted arithmetic and panics.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.dim;
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(BigInt::one());
        let mut m = Self::zeros(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &coeffs[k - 1];
            }
            m = next;
            let am = self.mul(&m);
            let (q, r) = am.trace().div_rem(&BigInt::from(k));
            assert!(r.is_zero(), "Faddeev-LeVerrier division by {k} left remainder {r}");
            coeffs.push(-q);
        }
        IntPoly { coeffs }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.dim).map(|i| self.row(i))).finish()
    }
}

/// Monic integer polynomial `x^n + c_1 x^(n-1) + ... + c_n`, highest degree first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// From coefficients highest-degree first; the leading one must be 1.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if c.is_one() => Ok(IntPoly { coeffs }),
            _ => Err(Error::Domain("polynomial must be monic".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `coeffs()[i]` is `c_i`, the coefficient of `x^(n-i)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = n - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if !mag.is_one() || p == 0 {
                write!(f, "{mag}")?;
            }
            match p {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntPoly::from_coeffs(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing `BigInt` as a decimal string.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &IntMatrix) -> BigInt {
        let n = a.dim();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let minor_rows: Vec<Vec<BigInt>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| a[(i, c)].clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(&minor_rows).unwrap();
            let term = &a[(0, j)] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(IntMatrix::identity(5).determinant(), BigInt::one());
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).determinant(), BigInt::zero());
        assert_eq!(m(&[&[2, 3], &[5, 7]]).determinant(), BigInt::from(-1));
        // needs a row swap
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]).determinant(), BigInt::from(-6));
        assert_eq!(IntMatrix::zeros(0).determinant(), BigInt::one());
    }

    #[test]
    fn determinant_matches_cofactor_exhaustive_small() {
        // every 2x2 and 3x3 matrix with entries in -2..=2 (3x3 is 5^9 = 1953125; sample every 7th)
        let vals = [-2i64, -1, 0, 1, 2];
        for code in 0..625usize {
            let e: Vec<i64> = (0..4).map(|k| vals[code / 5usize.pow(k) % 5]).collect();
            let a = m(&[&e[0..2], &e[2..4]]);
            assert_eq!(a.determinant(), cofactor_det(&a));
        }
        for code in (0..1_953_125usize).step_by(7) {
            let e: Vec<i64> = (0..9).map(|k| vals[code / 5usize.pow(k) % 5]).collect();
            let a = m(&[&e[0..3], &e[3..6], &e[6..9]]);
            assert_eq!(a.determinant(), cofactor_det(&a));
        }
    }

    #[test]
    fn char_poly_examples() {
        let k2 = IntMatrix::adjacency(&Graph::complete(2).unwrap());
        assert_eq!(k2.char_poly(), poly(&[1, 0, -1]));
        let k3 = IntMatrix::adjacency(&Graph::complete(3).unwrap());
        assert_eq!(k3.char_poly(), poly(&[1, 0, -3, -2]));
        assert_eq!(k3.char_poly().to_string(), "x^3 - 3x - 2");
        assert_eq!(IntMatrix::zeros(4).char_poly(), poly(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn leading_submatrix() {
        let a = m(&[&[1, 1, 2], &[1, 2, 2], &[1, 1, 2]]);
        assert_eq!(a.leading_principal_submatrix(3).unwrap(), a);
        assert_eq!(a.leading_principal_submatrix(1).unwrap(), m(&[&[1]]));
        let w2 = a.leading_principal_submatrix(2).unwrap();
        assert_eq!(w2, m(&[&[1, 1], &[1, 2]]));
        assert_eq!(w2.determinant(), BigInt::one());
        assert_eq!(a.leading_principal_submatrix(0), Err(Error::Bounds { index: 0, len: 3 }));
        assert!(a.leading_principal_submatrix(4).is_err());
    }

    #[test]
    fn poly_display_and_serde() {
        let p = poly(&[1, -1, 0, 5]);
        assert_eq!(p.to_string(), "x^3 - x^2 + 5");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1","-1","0","5"]"#);
        assert_eq!(serde_json::from_str::<IntPoly>(&json).unwrap(), p);
        assert!(serde_json::from_str::<IntPoly>(r#"["2","1"]"#).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(-9i64..=9, n * n).prop_map(move |e| {
                let rows: Vec<Vec<i64>> = e.chunks(n).map(|c| c.to_vec()).collect();
                IntMatrix::from_rows(&rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn constant_term_is_signed_determinant(a in arb_matrix()) {
            let p = a.char_poly();
            let n = a.dim();
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(p.coeff(n).clone(), sign * a.determinant());
            // p(0) = det(-A)
            prop_assert_eq!(p.eval(&BigInt::zero()), p.coeff(n).clone());
        }

        #[test]
        fn bareiss_matches_cofactor(e in proptest::collection::vec(-2i64..=2, 16), n in 1usize..=4) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| e[i * 4..i * 4 + n].to_vec()).collect();
            let a = IntMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(a.determinant(), cofactor_det(&a));
        }
    }
}
