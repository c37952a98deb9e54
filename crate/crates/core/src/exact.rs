//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] / [`BigRational`]. Lattices are
//! stored as an integer row basis together with one positive common
//! denominator, so that Hermite normal forms stay purely integral.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics if the rows are ragged.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self[(r, k)] * &other[(k, c)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    /// Entries as `i64`, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Panics on a non-square matrix.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Row-style Hermite normal form of the row lattice.
    ///
    /// Zero rows are dropped, pivots are positive and every entry above a
    /// pivot lies in `[0, pivot)`.
    pub fn hnf(&self) -> IntMatrix {
        let mut m: Vec<Vec<BigInt>> = self.row_vecs();
        let ncols = self.cols;
        let mut r = 0;
        for c in 0..ncols {
            if r == m.len() {
                break;
            }
            loop {
                // Smallest nonzero |entry| in column c at or below row r.
                let pivot = (r..m.len())
                    .filter(|&i| !m[i][c].is_zero())
                    .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
                let Some(pi) = pivot else { break };
                m.swap(r, pi);
                let mut done = true;
                for i in r + 1..m.len() {
                    if m[i][c].is_zero() {
                        continue;
                    }
                    let q = m[i][c].div_floor(&m[r][c]);
                    let (head, tail) = m.split_at_mut(i);
                    sub_scaled(&mut tail[0], &head[r], &q);
                    if !tail[0][c].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if m[r][c].is_zero() {
                continue;
            }
            if m[r][c].is_negative() {
                for v in m[r].iter_mut() {
                    *v = -&*v;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    let (head, tail) = m.split_at_mut(r);
                    sub_scaled(&mut head[i], &tail[0], &q);
                }
            }
            r += 1;
        }
        m.truncate(r);
        m.retain(|row| row.iter().any(|v| !v.is_zero()));
        let rows = m.len();
        let data = m.into_iter().flatten().collect();
        IntMatrix {
            rows,
            cols: ncols,
            data,
        }
    }
}

fn sub_scaled(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Solves for integer coordinates of `v` in the lattice `(1/denom)·rowspan(basis)`.
///
/// Returns `Ok(None)` when `v` is not a lattice member (including when it is
/// outside the rational span). The rows of `basis` must be independent.
pub fn solve_in_lattice(
    basis: &IntMatrix,
    denom: &BigInt,
    v: &[BigRational],
) -> Result<Option<Vec<BigInt>>> {
    if v.len() != basis.cols() {
        return Err(Error::DimensionMismatch {
            expected: basis.cols(),
            found: v.len(),
        });
    }
    let k = basis.rows();
    let n = basis.cols();
    let scale = BigRational::from_integer(denom.clone());
    // Augmented system basisᵀ · x = denom · v, n equations, k unknowns.
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|c| {
            let mut row: Vec<BigRational> = (0..k)
                .map(|r| BigRational::from_integer(basis[(r, c)].clone()))
                .collect();
            row.push(&v[c] * &scale);
            row
        })
        .collect();
    let mut pivot_cols = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..k {
        let Some(pi) = (r..n).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, pi);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row[c..=k].iter_mut().zip(&pivot[c..=k]) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() != k {
        return Err(Error::Degenerate("lattice basis rows are dependent".into()));
    }
    if aug[r..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    let mut coords = vec![BigInt::zero(); k];
    for (row, &c) in pivot_cols.iter().enumerate() {
        let x = &aug[row][k];
        if !x.is_integer() {
            return Ok(None);
        }
        coords[c] = x.to_integer();
    }
    Ok(Some(coords))
}

/// A lattice `(1/denom)·rowspan(basis)` with `basis` in Hermite normal form
/// and `gcd(basis entries, denom) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: IntMatrix,
    denom: BigInt,
}

impl Lattice {
    /// The lattice generated by the given rational vectors.
    pub fn from_generators(gens: &[Vec<BigRational>]) -> Result<Self> {
        let dim = gens.first().map_or(0, Vec::len);
        let mut denom = BigInt::one();
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            for x in g {
                denom = denom.lcm(x.denom());
            }
        }
        let rows = gens
            .iter()
            .map(|g| g.iter().map(|x| x.numer() * (&denom / x.denom())).collect())
            .collect();
        Ok(Self::from_integral(IntMatrix::from_rows(rows)?, denom))
    }

    /// The lattice `(1/denom)·rowspan(rows)`; `denom` must be positive.
    pub fn from_integral(rows: IntMatrix, denom: BigInt) -> Self {
        assert!(denom.is_positive(), "lattice denominator must be positive");
        let mut basis = rows.hnf();
        let mut g = denom.clone();
        for v in &basis.data {
            g = g.gcd(v);
        }
        let denom = if g.is_one() {
            denom
        } else {
            for v in basis.data.iter_mut() {
                *v = &*v / &g;
            }
            denom / &g
        };
        Lattice { basis, denom }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as rational coordinate vectors.
    pub fn rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rank())
            .map(|r| {
                self.basis
                    .row(r)
                    .iter()
                    .map(|x| BigRational::new(x.clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn coordinates(&self, v: &[BigRational]) -> Result<Option<Vec<BigInt>>> {
        solve_in_lattice(&self.basis, &self.denom, v)
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Covolume of a full-rank lattice, `|det(basis)| / denom^dim`.
    pub fn covolume(&self) -> Result<BigRational> {
        if !self.basis.is_square() {
            return Err(Error::Degenerate(
                "covolume of a lattice that is not full rank".into(),
            ));
        }
        let n = self.dim() as u32;
        Ok(BigRational::new(
            self.basis.det().abs(),
            num_traits::pow(self.denom.clone(), n as usize),
        ))
    }

    /// `self` scaled by a positive rational.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        assert!(factor.is_positive(), "lattice scale must be positive");
        let rows = self
            .basis
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * factor.numer()).collect())
            .collect();
        Self::from_integral(
            IntMatrix::from_rows(rows).expect("rows come from a matrix"),
            &self.denom * factor.denom(),
        )
    }
}

/// Deterministic primality by trial division, adequate for desk-scale inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n > 0`, ascending.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Integer square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Legendre symbol `(a/p)` for an odd prime `p`, in `{-1, 0, 1}`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let p_i = p as i128;
    let a = (a as i128).rem_euclid(p_i);
    if a == 0 {
        return 0;
    }
    let r = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// `⌈num/den⌉` for `den > 0`.
pub fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    num.div_ceil(den)
}

/// `⌊num/den⌋` for `den > 0`.
pub fn floor_div(num: &BigInt, den: &BigInt) -> BigInt {
    num.div_floor(den)
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
