//! Gross lattices, short-vector enumeration and successive minimal bases.
//!
//! All lattice work below is done on the integer Gram matrix of a rank-3
//! basis; quaternion elements only enter when the Gross lattice is extracted
//! from an order and when coordinates are mapped back.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Lattice};
use crate::orders::QuaternionOrder;
use crate::quat::{QuaternionAlgebra, QuaternionElement};

/// Upper limit on enumeration box points before giving up.
const MAX_BOX_POINTS: u128 = 50_000_000;

/// The rank-3 lattice `{2x - trd(x) : x ∈ O}` with a fixed basis.
#[derive(Clone, Debug)]
pub struct GrossLattice {
    algebra: Arc<QuaternionAlgebra>,
    basis: Vec<QuaternionElement>,
    gram: IntMatrix,
}

impl GrossLattice {
    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &[QuaternionElement] {
        &self.basis
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// The element with the given integer coordinates in this basis.
    pub fn element(&self, coords: &[BigInt]) -> QuaternionElement {
        let mut acc = QuaternionElement::zero(&self.algebra);
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = &acc + &b.scale(&BigRational::from_integer(c.clone()));
        }
        acc
    }
}

pub fn gross_lattice(order: &QuaternionOrder) -> Result<GrossLattice> {
    let images: Vec<Vec<BigRational>> = order
        .basis()
        .iter()
        .map(|x| {
            let two_x = x.scale(&BigRational::from_integer(BigInt::from(2)));
            let mut c = two_x.coords().to_vec();
            c[0] -= x.trd();
            c
        })
        .collect();
    let lat = Lattice::from_generators(&images)?;
    if lat.rank() != 3 {
        return Err(Error::NotAnOrder(format!(
            "Gross lattice has rank {} instead of 3",
            lat.rank()
        )));
    }
    let algebra = Arc::clone(order.algebra());
    let basis = lat
        .rational_rows()
        .iter()
        .map(|r| QuaternionElement::from_slice(&algebra, r))
        .collect::<Result<Vec<_>>>()?;
    let mut gram = IntMatrix::zeros(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            let v = basis[r].inner(&basis[c]);
            if !v.is_integer() {
                return Err(Error::NotAnOrder(format!("non-integral Gross pairing {v}")));
            }
            gram[(r, c)] = v.to_integer();
        }
    }
    Ok(GrossLattice {
        algebra,
        basis,
        gram,
    })
}

/// Successive minima `D1 ≤ D2 ≤ D3` (squared-norm convention).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimaTriple {
    pub d1: BigInt,
    pub d2: BigInt,
    pub d3: BigInt,
}

impl MinimaTriple {
    pub fn new(d1: i64, d2: i64, d3: i64) -> Self {
        MinimaTriple {
            d1: d1.into(),
            d2: d2.into(),
            d3: d3.into(),
        }
    }

    pub fn product(&self) -> BigInt {
        &self.d1 * &self.d2 * &self.d3
    }

    pub fn as_array(&self) -> [&BigInt; 3] {
        [&self.d1, &self.d2, &self.d3]
    }
}

impl fmt::Display for MinimaTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d1, self.d2, self.d3)
    }
}

/// A lattice vector in coordinates of the input basis, with its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: [BigInt; 3],
    pub norm: BigInt,
}

fn check_gram3(gram: &IntMatrix) -> Result<()> {
    if gram.rows() != 3 || gram.cols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: gram.rows(),
        });
    }
    if !gram.is_symmetric() {
        return Err(Error::NotPositiveDefinite);
    }
    let m1 = gram[(0, 0)].clone();
    let m2 = &gram[(0, 0)] * &gram[(1, 1)] - &gram[(0, 1)] * &gram[(0, 1)];
    if !m1.is_positive() || !m2.is_positive() || !gram.det().is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

pub fn norm_of(gram: &IntMatrix, v: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for r in 0..v.len() {
        for c in 0..v.len() {
            acc += &v[r] * &gram[(r, c)] * &v[c];
        }
    }
    acc
}

pub fn inner_of(gram: &IntMatrix, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for r in 0..u.len() {
        for c in 0..v.len() {
            acc += &u[r] * &gram[(r, c)] * &v[c];
        }
    }
    acc
}

/// Gram matrix of the rows of `basis` (coordinates w.r.t. `gram`).
pub fn transform_gram(gram: &IntMatrix, basis: &IntMatrix) -> IntMatrix {
    let bt = basis.transpose();
    basis
        .mul(gram)
        .and_then(|m| m.mul(&bt))
        .expect("shapes agree")
}

/// `m = round(num/den)` with ties toward zero, `den > 0`.
fn round_toward_zero_on_ties(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let q = (&two * num.abs() + den - BigInt::one()).div_floor(&(&two * den));
    if num.is_negative() {
        -q
    } else {
        q
    }
}

/// Pairwise size reduction with norm sorting until nothing changes.
///
/// Returns `(reduced gram, U)` with `reduced = U · gram · Uᵀ`, `U` unimodular.
fn pairwise_reduce(gram: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut g = gram.clone();
    let mut u = IntMatrix::identity(3);
    loop {
        // Sort by norm (insertion sort on three rows keeps it simple).
        for j in 1..3 {
            let mut k = j;
            while k > 0 && g[(k, k)] < g[(k - 1, k - 1)] {
                swap_basis(&mut g, &mut u, k, k - 1);
                k -= 1;
            }
        }
        let mut changed = false;
        for j in 1..3 {
            for i in 0..j {
                let q = round_toward_zero_on_ties(&g[(i, j)], &g[(i, i)]);
                if q.is_zero() {
                    continue;
                }
                // b_j -= q b_i
                let gii = g[(i, i)].clone();
                let gij = g[(i, j)].clone();
                for k in 0..3 {
                    if k != j {
                        let v = &g[(j, k)] - &q * &g[(i, k)];
                        g[(j, k)] = v.clone();
                        g[(k, j)] = v;
                    }
                }
                let jj = &g[(j, j)] - BigInt::from(2) * &q * &gij + &q * &q * &gii;
                g[(j, j)] = jj;
                for k in 0..3 {
                    let v = &u[(j, k)] - &q * &u[(i, k)];
                    u[(j, k)] = v;
                }
                changed = true;
            }
        }
        if !changed {
            return (g, u);
        }
    }
}

fn swap_basis(g: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    for k in 0..3 {
        let t = g[(a, k)].clone();
        g[(a, k)] = g[(b, k)].clone();
        g[(b, k)] = t;
    }
    for k in 0..3 {
        let t = g[(k, a)].clone();
        g[(k, a)] = g[(k, b)].clone();
        g[(k, b)] = t;
    }
    for k in 0..3 {
        let t = u[(a, k)].clone();
        u[(a, k)] = u[(b, k)].clone();
        u[(b, k)] = t;
    }
}

fn adjugate_diag(g: &IntMatrix, i: usize) -> BigInt {
    let (a, b) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    &g[(a, a)] * &g[(b, b)] - &g[(a, b)] * &g[(b, a)]
}

/// All nonzero `v ∈ Z³` with `vᵀ·gram·v ≤ bound`, one per `±` pair
/// (first nonzero coordinate positive), sorted by norm then coordinates.
pub fn short_vectors(gram: &IntMatrix, bound: &BigInt) -> Result<Vec<ShortVector>> {
    check_gram3(gram)?;
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    let (red, u) = pairwise_reduce(gram);
    let det = red.det();
    // |w_i|² ≤ bound · (G⁻¹)_ii, exact.
    let radii: Vec<i64> = (0..3)
        .map(|i| {
            let r2 = (bound * adjugate_diag(&red, i)).div_floor(&det);
            r2.sqrt()
                .to_i64()
                .filter(|&r| r < (1 << 30))
                .ok_or_else(|| Error::Degenerate("enumeration radius out of range".into()))
        })
        .collect::<Result<_>>()?;
    let points: u128 = radii.iter().map(|&r| (2 * r as u128) + 1).product();
    if points > MAX_BOX_POINTS {
        return Err(Error::Degenerate(format!(
            "enumeration box of {points} points exceeds limit"
        )));
    }
    let g = red
        .to_i64_rows()
        .ok_or_else(|| Error::Degenerate("reduced Gram entries out of range".into()))?;
    let g: Vec<Vec<i128>> = g
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let bound_i = bound.to_i128().unwrap_or(i128::MAX);
    let uu = u.to_i64_rows().expect("reduction transform is small");

    let mut out = Vec::new();
    for w0 in 0..=radii[0] {
        for w1 in -radii[1]..=radii[1] {
            if w0 == 0 && w1 < 0 {
                continue;
            }
            for w2 in -radii[2]..=radii[2] {
                if w0 == 0 && w1 == 0 && w2 <= 0 {
                    continue;
                }
                let w = [w0 as i128, w1 as i128, w2 as i128];
                let mut n = 0i128;
                for r in 0..3 {
                    for c in 0..3 {
                        n += w[r] * g[r][c] * w[c];
                    }
                }
                if n > bound_i {
                    continue;
                }
                let mut v = [0i128; 3];
                for (k, slot) in v.iter_mut().enumerate() {
                    *slot = (0..3).map(|r| w[r] * uu[r][k] as i128).sum();
                }
                if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    v = v.map(|x| -x);
                }
                out.push(ShortVector {
                    coords: v.map(BigInt::from),
                    norm: BigInt::from(n),
                });
            }
        }
    }
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

fn det3(a: &[BigInt; 3], b: &[BigInt; 3], c: &[BigInt; 3]) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn independent2(a: &[BigInt; 3], b: &[BigInt; 3]) -> bool {
    let c0 = &a[1] * &b[2] - &a[2] * &b[1];
    let c1 = &a[0] * &b[2] - &a[2] * &b[0];
    let c2 = &a[0] * &b[1] - &a[1] * &b[0];
    !(c0.is_zero() && c1.is_zero() && c2.is_zero())
}

/// Candidate ordering among vectors of equal norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LexAscending,
    LexDescending,
}

/// A normalized successive minimal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalBasis {
    /// Rows are coordinates of `β1, β2, β3` in the input basis.
    pub coords: IntMatrix,
    /// Gram matrix `[[D1,x,y],[x,D2,z],[y,z,D3]]` with `0 ≤ x, y`.
    pub gram: IntMatrix,
    pub minima: MinimaTriple,
    /// `x = 0` or `y = 0`, so the sign of `z` was fixed by convention (`z ≥ 0`).
    pub sign_choice_free: bool,
}

impl MinimalBasis {
    pub fn x(&self) -> &BigInt {
        &self.gram[(0, 1)]
    }
    pub fn y(&self) -> &BigInt {
        &self.gram[(0, 2)]
    }
    pub fn z(&self) -> &BigInt {
        &self.gram[(1, 2)]
    }
}

/// Enumeration bound to start from: `⌈8s/7⌉ + 2` with `s = √det / 2`
/// (which is `p` for a Gross lattice).
fn initial_bound(gram: &IntMatrix) -> BigInt {
    let s: BigInt = Roots::sqrt(&gram.det()) / 2;
    let s = s.max(BigInt::one());
    (BigInt::from(8) * s).div_ceil(&BigInt::from(7)) + 2
}

/// Successive minima and per-minimum candidate lists from a sorted list.
fn minima_from_sorted(vecs: &[ShortVector]) -> Option<[BigInt; 3]> {
    let mut span: Vec<&[BigInt; 3]> = Vec::new();
    let mut d: Vec<BigInt> = Vec::new();
    for v in vecs {
        let independent = match span.len() {
            0 => true,
            1 => independent2(span[0], &v.coords),
            _ => !det3(span[0], span[1], &v.coords).is_zero(),
        };
        if independent {
            span.push(&v.coords);
            d.push(v.norm.clone());
            if d.len() == 3 {
                return Some([d[0].clone(), d[1].clone(), d[2].clone()]);
            }
        }
    }
    None
}

/// Sorted short vectors out to a bound that reaches all three minima.
fn vectors_reaching_rank3(gram: &IntMatrix) -> Result<(Vec<ShortVector>, [BigInt; 3])> {
    let mut bound = initial_bound(gram);
    loop {
        let vecs = short_vectors(gram, &bound)?;
        if let Some(d) = minima_from_sorted(&vecs) {
            return Ok((vecs, d));
        }
        bound *= 2;
    }
}

/// Successive minima of the lattice with this Gram matrix.
pub fn successive_minima(gram: &IntMatrix) -> Result<MinimaTriple> {
    check_gram3(gram)?;
    let (_, [d1, d2, d3]) = vectors_reaching_rank3(gram)?;
    Ok(MinimaTriple { d1, d2, d3 })
}

pub fn minimal_basis(lattice: &GrossLattice) -> Result<MinimalBasis> {
    minimal_basis_of_gram(lattice.gram(), TieBreak::LexAscending)
}

/// Normalized successive minimal basis of the lattice with Gram `gram`.
///
/// Picks the first index-1 triple `(β1, β2, β3)` with norms `(D1, D2, D3)`
/// in candidate order, then flips signs so that `x, y ≥ 0`; if `x` or `y`
/// vanishes the remaining sign freedom is used to make `z ≥ 0`.
pub fn minimal_basis_of_gram(gram: &IntMatrix, tie: TieBreak) -> Result<MinimalBasis> {
    check_gram3(gram)?;
    let (vecs, [d1, d2, d3]) = vectors_reaching_rank3(gram)?;
    let pick = |d: &BigInt| -> Vec<&[BigInt; 3]> {
        let mut c: Vec<_> = vecs
            .iter()
            .filter(|v| &v.norm == d)
            .map(|v| &v.coords)
            .collect();
        if tie == TieBreak::LexDescending {
            c.reverse();
        }
        c
    };
    let (c1, c2, c3) = (pick(&d1), pick(&d2), pick(&d3));
    let mut found = None;
    'outer: for b1 in &c1 {
        for b2 in &c2 {
            if !independent2(b1, b2) {
                continue;
            }
            for b3 in &c3 {
                if det3(b1, b2, b3).abs().is_one() {
                    found = Some([(*b1).clone(), (*b2).clone(), (*b3).clone()]);
                    break 'outer;
                }
            }
        }
    }
    let Some([b1, mut b2, mut b3]) = found else {
        return Err(Error::Fault(format!(
            "no index-1 basis attains the minima ({d1},{d2},{d3})"
        )));
    };
    let neg = |v: &mut [BigInt; 3]| {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    };
    if inner_of(gram, &b1, &b2).is_negative() {
        neg(&mut b2);
    }
    if inner_of(gram, &b1, &b3).is_negative() {
        neg(&mut b3);
    }
    let x = inner_of(gram, &b1, &b2);
    let y = inner_of(gram, &b1, &b3);
    let sign_choice_free = x.is_zero() || y.is_zero();
    if sign_choice_free && inner_of(gram, &b2, &b3).is_negative() {
        if x.is_zero() {
            neg(&mut b2);
        } else {
            neg(&mut b3);
        }
    }
    let coords = IntMatrix::from_rows(vec![b1.to_vec(), b2.to_vec(), b3.to_vec()])?;
    let g = transform_gram(gram, &coords);
    Ok(MinimalBasis {
        coords,
        gram: g,
        minima: MinimaTriple { d1, d2, d3 },
        sign_choice_free,
    })
}

/// The 2×2 minor `G_ii G_jj - G_ij²`, the determinant of `⟨b_i, b_j⟩`.
pub fn rank2_det(gram: &IntMatrix, i: usize, j: usize) -> BigInt {
    &gram[(i, i)] * &gram[(j, j)] - &gram[(i, j)] * &gram[(i, j)]
}

/// Every distinct rank-2 sublattice spanned by an independent pair of
/// vectors attaining `D1` and `D2`, as HNF coordinate matrices (2×3),
/// sorted.
pub fn minimal_rank2_sublattices(gram: &IntMatrix) -> Result<Vec<IntMatrix>> {
    check_gram3(gram)?;
    let (vecs, [d1, d2, _]) = vectors_reaching_rank3(gram)?;
    let first: Vec<_> = vecs.iter().filter(|v| v.norm == d1).collect();
    let second: Vec<_> = vecs.iter().filter(|v| v.norm == d2).collect();
    let mut seen = BTreeSet::new();
    for u in &first {
        for v in &second {
            if !independent2(&u.coords, &v.coords) {
                continue;
            }
            let m = IntMatrix::from_rows(vec![u.coords.to_vec(), v.coords.to_vec()])?.hnf();
            seen.insert(m.row_vecs());
        }
    }
    seen.into_iter()
        .map(IntMatrix::from_rows)
        .collect::<Result<Vec<_>>>()
}

/// Gram–Schmidt data of an ordered rank-3 basis, from its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalizationData {
    pub mu21: BigRational,
    pub mu31: BigRational,
    pub mu32: BigRational,
    /// `(b3, b2) / (b2, b2)`.
    pub delta: BigRational,
}

impl OrthogonalizationData {
    /// `|μ21|, |μ31|, |δ| ≤ ½`.
    pub fn is_size_reduced(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.mu21.abs() <= half && self.mu31.abs() <= half && self.delta.abs() <= half
    }
}

pub fn orthogonalization(gram: &IntMatrix) -> OrthogonalizationData {
    let q = |r: usize, c: usize| BigRational::from_integer(gram[(r, c)].clone());
    let mu21 = q(0, 1) / q(0, 0);
    let mu31 = q(0, 2) / q(0, 0);
    let b2star = q(1, 1) - &mu21 * q(0, 1);
    let mu32 = (q(1, 2) - &mu21 * q(0, 2)) / &b2star;
    let delta = q(1, 2) / q(1, 1);
    OrthogonalizationData {
        mu21,
        mu31,
        mu32,
        delta,
    }
}

/// `gcd` of the coordinates is 1.
pub fn is_primitive(coords: &[BigInt]) -> bool {
    coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::orders::standard_maximal_order;

    fn g(rows: &[[i64; 3]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn phi_of_one_vanishes() {
        let o = standard_maximal_order(11).unwrap();
        let one = QuaternionElement::one(o.algebra());
        let two = BigRational::from_integer(int(2));
        assert!((&one.scale(&two)
            - &QuaternionElement::from_slice(
                o.algebra(),
                &[one.trd(), rat(0, 1), rat(0, 1), rat(0, 1)]
            )
            .unwrap())
            .is_zero());
    }

    #[test]
    fn gross_lattice_determinants() {
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            let l = gross_lattice(&standard_maximal_order(p).unwrap()).unwrap();
            assert_eq!(l.gram().det(), int(4 * (p * p) as i64), "p = {p}");
        }
    }

    #[test]
    fn j1728_p11_normalized_gram() {
        let l = gross_lattice(&standard_maximal_order(11).unwrap()).unwrap();
        let mb = minimal_basis(&l).unwrap();
        assert_eq!(mb.gram, g(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]]));
        assert_eq!(mb.minima, MinimaTriple::new(4, 11, 12));
    }

    #[test]
    fn j1728_p7_and_j0_p5() {
        let l = gross_lattice(&standard_maximal_order(7).unwrap()).unwrap();
        assert_eq!(
            minimal_basis(&l).unwrap().gram,
            g(&[[4, 0, 2], [0, 7, 0], [2, 0, 8]])
        );
        let l = gross_lattice(&standard_maximal_order(5).unwrap()).unwrap();
        assert_eq!(
            minimal_basis(&l).unwrap().gram,
            g(&[[3, 1, 1], [1, 7, -3], [1, -3, 7]])
        );
    }

    #[test]
    fn p13_single_type() {
        let l = gross_lattice(&standard_maximal_order(13).unwrap()).unwrap();
        assert_eq!(
            minimal_basis(&l).unwrap().gram,
            g(&[[7, 2, 1], [2, 8, 4], [1, 4, 15]])
        );
    }

    #[test]
    fn short_vectors_j1728_p11() {
        let gram = g(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]]);
        let v = short_vectors(&gram, &int(11)).unwrap();
        let got: Vec<_> = v
            .iter()
            .map(|s| (s.coords.clone(), s.norm.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ([int(1), int(0), int(0)], int(4)),
                ([int(0), int(1), int(0)], int(11))
            ]
        );
    }

    #[test]
    fn short_vectors_small_bounds() {
        for p in [2u64, 5, 11, 13] {
            let l = gross_lattice(&standard_maximal_order(p).unwrap()).unwrap();
            assert!(short_vectors(l.gram(), &int(2)).unwrap().is_empty());
        }
        let v = short_vectors(&g(&[[3, 1, 1], [1, 3, -1], [1, -1, 3]]), &int(3)).unwrap();
        let coords: Vec<_> = v.iter().map(|s| s.coords.clone()).collect();
        assert!(v.iter().all(|s| s.norm == int(3)));
        assert!(minima_from_sorted(&v).is_some(), "{coords:?}");
    }

    #[test]
    fn short_vectors_rejects_indefinite() {
        assert_eq!(
            short_vectors(&g(&[[1, 2, 0], [2, 1, 0], [0, 0, 1]]), &int(5)),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn skewed_basis_is_handled() {
        // Unimodular image of diag(3, 4, 4).
        let base = g(&[[3, 0, 0], [0, 4, 0], [0, 0, 4]]);
        let u = g(&[[1, 7, -3], [0, 1, 5], [0, 0, 1]]);
        let skew = transform_gram(&base, &u);
        assert_eq!(
            successive_minima(&skew).unwrap(),
            MinimaTriple::new(3, 4, 4)
        );
    }

    #[test]
    fn rank2_minors() {
        let j1728 = g(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]]);
        assert_eq!(rank2_det(&j1728, 0, 1), int(44));
        assert_eq!(rank2_det(&j1728, 1, 2), int(132));
        let j0 = g(&[[3, 1, 1], [1, 7, -3], [1, -3, 7]]);
        assert_eq!(rank2_det(&j0, 0, 1), int(20));
    }

    #[test]
    fn rank2_sublattices() {
        let j1728 = g(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]]);
        let subs = minimal_rank2_sublattices(&j1728).unwrap();
        assert_eq!(subs.len(), 1);
        let j0 = g(&[[3, 1, 1], [1, 7, -3], [1, -3, 7]]);
        // <b1,b2>, <b1,b3> and <b1,b2+b3-b1>, all of determinant 4p.
        let subs = minimal_rank2_sublattices(&j0).unwrap();
        assert_eq!(subs.len(), 3);
        for s in &subs {
            assert_eq!(transform_gram(&j0, s).det(), int(20));
        }
    }

    #[test]
    fn orthogonalization_examples() {
        let o = orthogonalization(&g(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]]));
        assert_eq!(o.mu21, rat(0, 1));
        assert_eq!(o.mu31, rat(1, 2));
        assert_eq!(o.delta, rat(0, 1));
        assert!(o.is_size_reduced());
        let o = orthogonalization(&g(&[[3, 1, 1], [1, 7, -3], [1, -3, 7]]));
        assert_eq!(o.mu21, rat(1, 3));
        assert_eq!(o.delta, rat(-3, 7));
        let o = orthogonalization(&g(&[[3, 0, 0], [0, 4, 0], [0, 0, 4]]));
        assert_eq!(
            (o.mu21, o.mu31, o.mu32, o.delta),
            (rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1))
        );
    }

    #[test]
    fn tie_break_orders_agree_on_p13() {
        let l = gross_lattice(&standard_maximal_order(13).unwrap()).unwrap();
        let a = minimal_basis_of_gram(l.gram(), TieBreak::LexAscending).unwrap();
        let d = minimal_basis_of_gram(l.gram(), TieBreak::LexDescending).unwrap();
        assert_eq!(a.gram, d.gram);
        assert_eq!(a.coords.det().abs(), int(1));
    }
}
