//! Arithmetic in a definite quaternion algebra `(a, b | Q)` with basis
//! `1, i, j, k`, `i² = a`, `j² = b`, `k = ij = -ji`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// The algebra `(a, b | Q)` together with the prime it is meant to ramify at.
///
/// Equality compares `(a, b, p)` only.
#[derive(Clone)]
pub struct QuaternionAlgebra {
    a: BigInt,
    b: BigInt,
    p: u64,
    /// `e_r · e_s = table[r][s].0 · e_{table[r][s].1}`.
    table: [[(BigInt, usize); 4]; 4],
}

impl QuaternionAlgebra {
    pub fn new(a: i64, b: i64, p: u64) -> Result<Arc<Self>> {
        if a >= 0 || b >= 0 {
            return Err(Error::Precondition(format!(
                "algebra ({a}, {b}) is not definite"
            )));
        }
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let one = BigInt::from(1);
        let m1 = BigInt::from(-1);
        let ab = &a * &b;
        let table = [
            [
                (one.clone(), 0),
                (one.clone(), 1),
                (one.clone(), 2),
                (one.clone(), 3),
            ],
            // i·1 = i, i·i = a, i·j = k, i·k = a j
            [
                (one.clone(), 1),
                (a.clone(), 0),
                (one.clone(), 3),
                (a.clone(), 2),
            ],
            // j·1 = j, j·i = -k, j·j = b, j·k = -b i
            [(one.clone(), 2), (m1.clone(), 3), (b.clone(), 0), (-&b, 1)],
            // k·1 = k, k·i = -a j, k·j = b i, k·k = -ab
            [(one, 3), (-&a, 2), (b.clone(), 1), (-ab, 0)],
        ];
        Ok(Arc::new(QuaternionAlgebra { a, b, p, table }))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl PartialEq for QuaternionAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.p == other.p
    }
}

impl Eq for QuaternionAlgebra {}

impl fmt::Debug for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} | Q) ramified at {}", self.a, self.b, self.p)
    }
}

#[derive(Clone)]
pub struct QuaternionElement {
    algebra: Arc<QuaternionAlgebra>,
    coords: [BigRational; 4],
}

impl QuaternionElement {
    pub fn new(algebra: &Arc<QuaternionAlgebra>, coords: [BigRational; 4]) -> Self {
        QuaternionElement {
            algebra: Arc::clone(algebra),
            coords,
        }
    }

    pub fn from_slice(algebra: &Arc<QuaternionAlgebra>, coords: &[BigRational]) -> Result<Self> {
        let coords: [BigRational; 4] =
            coords
                .to_vec()
                .try_into()
                .map_err(|v: Vec<_>| Error::DimensionMismatch {
                    expected: 4,
                    found: v.len(),
                })?;
        Ok(Self::new(algebra, coords))
    }

    /// Element `(c0 + c1 i + c2 j + c3 k) / den` from integer data.
    pub fn from_ints(algebra: &Arc<QuaternionAlgebra>, c: [i64; 4], den: i64) -> Self {
        let d = BigInt::from(den);
        Self::new(
            algebra,
            c.map(|x| BigRational::new(BigInt::from(x), d.clone())),
        )
    }

    pub fn zero(algebra: &Arc<QuaternionAlgebra>) -> Self {
        Self::from_ints(algebra, [0, 0, 0, 0], 1)
    }

    pub fn one(algebra: &Arc<QuaternionAlgebra>) -> Self {
        Self::from_ints(algebra, [1, 0, 0, 0], 1)
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let t = &self.algebra.table;
        let mut out: [BigRational; 4] = Default::default();
        for (x, row) in self.coords.iter().zip(t) {
            if x.is_zero() {
                continue;
            }
            for (y, (c, idx)) in other.coords.iter().zip(row) {
                if !y.is_zero() {
                    out[*idx] += x * y * c;
                }
            }
        }
        Ok(Self::new(&self.algebra, out))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.coords.clone();
        for (o, x) in out.iter_mut().zip(&other.coords) {
            *o += x;
        }
        Ok(Self::new(&self.algebra, out))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.algebra, self.coords.clone().map(|x| x * s))
    }

    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = self.coords.clone();
        Self::new(&self.algebra, [c0, -c1, -c2, -c3])
    }

    pub fn trd(&self) -> BigRational {
        &self.coords[0] + &self.coords[0]
    }

    pub fn nrd(&self) -> BigRational {
        let [c0, c1, c2, c3] = &self.coords;
        let a = BigRational::from_integer(self.algebra.a.clone());
        let b = BigRational::from_integer(self.algebra.b.clone());
        c0 * c0 - &a * c1 * c1 - &b * c2 * c2 + &a * &b * c3 * c3
    }

    /// `(x, y) = ½ trd(x ȳ)`.
    pub fn try_inner(&self, other: &Self) -> Result<BigRational> {
        self.check_same(other)?;
        let a = BigRational::from_integer(self.algebra.a.clone());
        let b = BigRational::from_integer(self.algebra.b.clone());
        let x = &self.coords;
        let y = &other.coords;
        Ok(&x[0] * &y[0] - &a * &x[1] * &y[1] - &b * &x[2] * &y[2] + &a * &b * &x[3] * &y[3])
    }

    pub fn inner(&self, other: &Self) -> BigRational {
        self.try_inner(other)
            .expect("inner product across algebras")
    }

    /// Integral means reduced trace and reduced norm are both integers.
    pub fn is_integral(&self) -> bool {
        self.trd().is_integer() && self.nrd().is_integer()
    }
}

impl PartialEq for QuaternionElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.algebra == other.algebra
    }
}

impl Eq for QuaternionElement {}

impl fmt::Debug for QuaternionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `c0 + c1*i + c2*j + c3*k`.
impl fmt::Display for QuaternionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.coords;
        write!(f, "{c0} + {c1}*i + {c2}*j + {c3}*k")
    }
}

/// Panics if the operands live in different algebras; use
/// [`QuaternionElement::try_mul`] to get an error instead.
impl Mul for &QuaternionElement {
    type Output = QuaternionElement;
    fn mul(self, rhs: Self) -> QuaternionElement {
        self.try_mul(rhs).expect("product across algebras")
    }
}

impl Add for &QuaternionElement {
    type Output = QuaternionElement;
    fn add(self, rhs: Self) -> QuaternionElement {
        self.try_add(rhs).expect("sum across algebras")
    }
}

impl Sub for &QuaternionElement {
    type Output = QuaternionElement;
    fn sub(self, rhs: Self) -> QuaternionElement {
        self.try_add(&-rhs).expect("difference across algebras")
    }
}

impl Neg for &QuaternionElement {
    type Output = QuaternionElement;
    fn neg(self) -> QuaternionElement {
        QuaternionElement::new(&self.algebra, self.coords.clone().map(|x| -x))
    }
}
