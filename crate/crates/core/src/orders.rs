//! Maximal orders of B_p, ℓ-neighbors and type enumeration.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classify::{classify, Classification};
use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, is_prime, legendre, prime_divisors, IntMatrix, Lattice};
use crate::lattice::{gross_lattice, minimal_basis, GrossLattice, MinimaTriple, MinimalBasis};
use crate::quat::{QuaternionAlgebra, QuaternionElement};

/// A rank-4 lattice in a quaternion algebra that is a ring containing 1.
#[derive(Clone, Debug)]
pub struct QuaternionOrder {
    algebra: Arc<QuaternionAlgebra>,
    lattice: Lattice,
}

impl PartialEq for QuaternionOrder {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.lattice == other.lattice
    }
}

impl Eq for QuaternionOrder {}

fn lattice_of(elements: &[QuaternionElement]) -> Result<Lattice> {
    let rows: Vec<Vec<BigRational>> = elements.iter().map(|e| e.coords().to_vec()).collect();
    Lattice::from_generators(&rows)
}

impl QuaternionOrder {
    /// The order generated as a lattice by `gens`; checks the order axioms.
    pub fn from_generators(
        algebra: &Arc<QuaternionAlgebra>,
        gens: &[QuaternionElement],
    ) -> Result<Self> {
        if gens.iter().any(|g| g.algebra() != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let order = Self::from_lattice_unchecked(algebra, lattice_of(gens)?);
        order.check_invariants()?;
        Ok(order)
    }

    fn from_lattice_unchecked(algebra: &Arc<QuaternionAlgebra>, lattice: Lattice) -> Self {
        QuaternionOrder {
            algebra: Arc::clone(algebra),
            lattice,
        }
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<QuaternionElement> {
        self.lattice
            .rational_rows()
            .iter()
            .map(|r| QuaternionElement::from_slice(&self.algebra, r).expect("rank-4 rows"))
            .collect()
    }

    pub fn contains(&self, x: &QuaternionElement) -> bool {
        x.algebra() == &self.algebra && self.lattice.contains(x.coords()).unwrap_or(false)
    }

    /// Rank 4, contains 1, multiplicatively closed, integral basis.
    pub fn check_invariants(&self) -> Result<()> {
        if self.lattice.rank() != 4 {
            return Err(Error::NotAnOrder(format!("rank {}", self.lattice.rank())));
        }
        if !self.contains(&QuaternionElement::one(&self.algebra)) {
            return Err(Error::NotAnOrder("does not contain 1".into()));
        }
        let basis = self.basis();
        for e in &basis {
            if !e.is_integral() {
                return Err(Error::NotAnOrder(format!("{e} is not integral")));
            }
        }
        for a in &basis {
            for b in &basis {
                if !self.contains(&(a * b)) {
                    return Err(Error::NotAnOrder(format!("({a})*({b}) escapes")));
                }
            }
        }
        Ok(())
    }

    /// `√|det(trd(eᵢ eⱼ))|`.
    pub fn reduced_discriminant(&self) -> Result<BigInt> {
        let basis = self.basis();
        let mut t = IntMatrix::zeros(4, 4);
        for (r, a) in basis.iter().enumerate() {
            for (c, b) in basis.iter().enumerate() {
                let v = (a * b).trd();
                if !v.is_integer() {
                    return Err(Error::NotAnOrder(format!("trace pairing value {v}")));
                }
                t[(r, c)] = v.to_integer();
            }
        }
        let d = t.det().abs();
        exact_sqrt(&d)
            .ok_or_else(|| Error::NotAnOrder(format!("trace-form determinant {d} is not a square")))
    }

    /// `[self : sub]` for a full-rank sublattice.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigRational> {
        Ok(sub.covolume()? / self.lattice.covolume()?)
    }
}

/// A left ideal of a maximal order, given by a lattice basis.
#[derive(Clone, Debug)]
pub struct QuaternionIdeal {
    left_order: QuaternionOrder,
    lattice: Lattice,
    norm: BigInt,
}

impl QuaternionIdeal {
    pub fn left_order(&self) -> &QuaternionOrder {
        &self.left_order
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn basis(&self) -> Vec<QuaternionElement> {
        let alg = self.left_order.algebra();
        self.lattice
            .rational_rows()
            .iter()
            .map(|r| QuaternionElement::from_slice(alg, r).expect("rank-4 rows"))
            .collect()
    }
}

fn hurwitz_order() -> Result<QuaternionOrder> {
    let alg = QuaternionAlgebra::new(-1, -1, 2)?;
    let gens = [
        QuaternionElement::from_ints(&alg, [1, 0, 0, 0], 1),
        QuaternionElement::from_ints(&alg, [0, 1, 0, 0], 1),
        QuaternionElement::from_ints(&alg, [0, 0, 1, 0], 1),
        QuaternionElement::from_ints(&alg, [1, 1, 1, 1], 2),
    ];
    QuaternionOrder::from_generators(&alg, &gens)
}

/// Least prime `q ≡ 3 (mod 4)` with `(p/q) = -1`.
pub fn auxiliary_prime(p: u64) -> u64 {
    (3..)
        .step_by(4)
        .find(|&q| is_prime(q) && legendre(p as i64, q) == -1)
        .expect("infinitely many candidates")
}

/// A fixed maximal order of B_p.
///
/// `p = 2`: Hurwitz order in `(-1,-1)`; `p ≡ 3 (mod 4)`: `⟨1, i, (1+j)/2, (i+k)/2⟩`
/// in `(-1,-p)`; `p ≡ 5 (mod 12)`: `⟨1, (1+i)/2, (j-k)/2, (i-k)/3⟩` in `(-3,-p)`;
/// `p ≡ 1 (mod 12)`: saturation of `ℤ⟨1,i,j,k⟩` in `(-q,-p)` with
/// `q = auxiliary_prime(p)`.
pub fn standard_maximal_order(p: u64) -> Result<QuaternionOrder> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = if p == 2 {
        hurwitz_order()?
    } else if p % 4 == 3 {
        let alg = QuaternionAlgebra::new(-1, -(p as i64), p)?;
        let gens = [
            QuaternionElement::from_ints(&alg, [1, 0, 0, 0], 1),
            QuaternionElement::from_ints(&alg, [0, 1, 0, 0], 1),
            QuaternionElement::from_ints(&alg, [1, 0, 1, 0], 2),
            QuaternionElement::from_ints(&alg, [0, 1, 0, 1], 2),
        ];
        QuaternionOrder::from_generators(&alg, &gens)?
    } else if p % 3 == 2 {
        let alg = QuaternionAlgebra::new(-3, -(p as i64), p)?;
        let six = |c: [i64; 4]| QuaternionElement::from_ints(&alg, c, 6);
        let gens = [
            six([6, 0, 0, 0]),
            six([3, 3, 0, 0]),
            six([0, 0, 3, -3]),
            six([0, 2, 0, -2]),
        ];
        QuaternionOrder::from_generators(&alg, &gens)?
    } else {
        let q = auxiliary_prime(p);
        let alg = QuaternionAlgebra::new(-(q as i64), -(p as i64), p)?;
        let gens: Vec<_> = (0..4)
            .map(|l| {
                let mut c = [0i64; 4];
                c[l] = 1;
                QuaternionElement::from_ints(&alg, c, 1)
            })
            .collect();
        saturate_to_maximal(&QuaternionOrder::from_generators(&alg, &gens)?)?
    };
    let d = order.reduced_discriminant()?;
    if d != BigInt::from(p) {
        return Err(Error::Fault(format!(
            "standard order for p = {p} has discriminant {d}"
        )));
    }
    Ok(order)
}

/// Smallest ring containing `lattice`, provided its index over `base`
/// stays at most `max_index`.
fn ring_closure(
    base: &QuaternionOrder,
    mut lattice: Lattice,
    max_index: &BigInt,
) -> Result<Option<QuaternionOrder>> {
    let alg = base.algebra();
    loop {
        let elems: Vec<_> = lattice
            .rational_rows()
            .iter()
            .map(|r| QuaternionElement::from_slice(alg, r))
            .collect::<Result<_>>()?;
        if elems.iter().any(|e| !e.is_integral()) {
            return Ok(None);
        }
        let mut gens = elems.clone();
        for a in &elems {
            for b in &elems {
                gens.push(a * b);
            }
        }
        let next = lattice_of(&gens)?;
        let index = base.lattice.covolume()? / next.covolume()?;
        if !index.is_integer() || &index.to_integer() > max_index {
            return Ok(None);
        }
        if next == lattice {
            let order = QuaternionOrder::from_lattice_unchecked(alg, next);
            return match order.check_invariants() {
                Ok(()) => Ok(Some(order)),
                Err(_) => Ok(None),
            };
        }
        lattice = next;
    }
}

/// One step of enlargement at the prime `ell`: adjoin some `y/ℓ` with
/// `y ∈ O`, `trd(y) ≡ 0 (mod ℓ)` and `nrd(y) ≡ 0 (mod ℓ²)`.
fn enlarge_at(
    order: &QuaternionOrder,
    ell: u64,
    max_index: &BigInt,
) -> Result<Option<QuaternionOrder>> {
    let basis = order.basis();
    let m = (ell as i128) * (ell as i128);
    let reduce = |q: BigRational| -> Result<i128> {
        if !q.is_integer() {
            return Err(Error::NotAnOrder("non-integral pairing".into()));
        }
        Ok(q.to_integer()
            .mod_floor(&BigInt::from(m))
            .to_i128()
            .expect("reduced"))
    };
    let traces: Vec<i128> = basis
        .iter()
        .map(|e| reduce(e.trd()))
        .collect::<Result<_>>()?;
    // nrd(Σ aᵢeᵢ) = Σ aᵢ aⱼ (eᵢ, eⱼ); the off-diagonal pairs carry a factor 2.
    let mut form = [[0i128; 4]; 4];
    for r in 0..4 {
        for c in r..4 {
            let v = basis[r].inner(&basis[c]);
            let v = if r == c { v } else { v * BigInt::from(2) };
            form[r][c] = reduce(v)?;
        }
    }
    let l = ell as i128;
    let mut a = [0i128; 4];
    for a0 in 0..l {
        a[0] = a0;
        for a1 in 0..l {
            a[1] = a1;
            for a2 in 0..l {
                a[2] = a2;
                for a3 in 0..l {
                    a[3] = a3;
                    if a == [0; 4] {
                        continue;
                    }
                    let t: i128 = (0..4).map(|i| a[i] * traces[i]).sum();
                    if t % l != 0 {
                        continue;
                    }
                    let mut n = 0i128;
                    for r in 0..4 {
                        for c in r..4 {
                            n += a[r] * a[c] * form[r][c];
                        }
                    }
                    if n % m != 0 {
                        continue;
                    }
                    let mut y = QuaternionElement::zero(order.algebra());
                    for (ai, e) in a.iter().zip(&basis) {
                        y = &y + &e.scale(&BigRational::from_integer(BigInt::from(*ai)));
                    }
                    let x = y.scale(&BigRational::new(BigInt::one(), BigInt::from(ell)));
                    let mut gens = basis.clone();
                    gens.push(x);
                    if let Some(bigger) = ring_closure(order, lattice_of(&gens)?, max_index)? {
                        return Ok(Some(bigger));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Enlarges an order of B_p to a maximal order containing it.
pub fn saturate_to_maximal(order: &QuaternionOrder) -> Result<QuaternionOrder> {
    let p = BigInt::from(order.algebra().p());
    let mut current = order.clone();
    loop {
        let d = current.reduced_discriminant()?;
        if d == p {
            return Ok(current);
        }
        if !d.is_multiple_of(&p) {
            return Err(Error::NotAnOrder(format!(
                "discriminant {d} not divisible by {p}: wrong algebra presentation"
            )));
        }
        let excess = &d / &p;
        let mut next = None;
        for ell in prime_divisors(&excess) {
            let ell = ell
                .to_u64()
                .ok_or_else(|| Error::Degenerate("saturation prime too large".into()))?;
            if let Some(bigger) = enlarge_at(&current, ell, &excess)? {
                next = Some(bigger);
                break;
            }
        }
        current = next
            .ok_or_else(|| Error::NotAnOrder(format!("saturation stalled at discriminant {d}")))?;
    }
}

/// The `ℓ + 1` left ideals of reduced norm `ℓ`.
pub fn left_ideals_of_norm(order: &QuaternionOrder, ell: u64) -> Result<Vec<QuaternionIdeal>> {
    if !is_prime(ell) || ell == order.algebra().p() {
        return Err(Error::Precondition(format!(
            "ℓ = {ell} must be a prime other than p"
        )));
    }
    let basis = order.basis();
    let ell_q = BigRational::from_integer(BigInt::from(ell));
    let expected_index = BigRational::from_integer(BigInt::from(ell * ell));
    let mut seen = HashSet::new();
    let mut ideals = Vec::new();
    let l = ell as i64;
    for n in 1..l.pow(4) {
        let a = [n % l, (n / l) % l, (n / (l * l)) % l, n / (l * l * l)];
        let mut alpha = QuaternionElement::zero(order.algebra());
        for (ai, e) in a.iter().zip(&basis) {
            alpha = &alpha + &e.scale(&BigRational::from_integer(BigInt::from(*ai)));
        }
        if !(alpha.nrd().to_integer() % l).is_zero() {
            continue;
        }
        let mut gens: Vec<_> = basis.iter().map(|e| e * &alpha).collect();
        gens.extend(basis.iter().map(|e| e.scale(&ell_q)));
        let lat = lattice_of(&gens)?;
        if seen.contains(&lat) {
            continue;
        }
        if order.index_of(&lat)? != expected_index {
            return Err(Error::Fault(format!(
                "ideal of index {} instead of ℓ²",
                order.index_of(&lat)?
            )));
        }
        seen.insert(lat.clone());
        ideals.push(QuaternionIdeal {
            left_order: order.clone(),
            lattice: lat,
            norm: BigInt::from(ell),
        });
    }
    if ideals.len() as u64 != ell + 1 {
        return Err(Error::Fault(format!(
            "found {} ideals of norm {ell}",
            ideals.len()
        )));
    }
    Ok(ideals)
}

/// `O_R(I) = (1/nrd I) · ⟨conj(bᵢ) bⱼ⟩`.
pub fn right_order(ideal: &QuaternionIdeal) -> Result<QuaternionOrder> {
    let basis = ideal.basis();
    let inv = BigRational::new(BigInt::one(), ideal.norm.clone());
    let mut gens = Vec::with_capacity(16);
    for a in &basis {
        let ca = a.conj();
        for b in &basis {
            gens.push((&ca * b).scale(&inv));
        }
    }
    let alg = ideal.left_order.algebra();
    let order = QuaternionOrder::from_generators(alg, &gens)?;
    let d = order.reduced_discriminant()?;
    if d != BigInt::from(alg.p()) {
        return Err(Error::Fault(format!("right order has discriminant {d}")));
    }
    Ok(order)
}

/// The principal left ideal `O·α` for `α ∈ O`, `α ≠ 0`.
pub fn principal_ideal(
    order: &QuaternionOrder,
    alpha: &QuaternionElement,
) -> Result<QuaternionIdeal> {
    if alpha.is_zero() || !order.contains(alpha) {
        return Err(Error::Precondition(
            "generator must be a nonzero element of the order".into(),
        ));
    }
    let gens: Vec<_> = order.basis().iter().map(|e| e * alpha).collect();
    Ok(QuaternionIdeal {
        left_order: order.clone(),
        lattice: lattice_of(&gens)?,
        norm: alpha.nrd().to_integer(),
    })
}

/// One isomorphism class of maximal orders with its lattice data.
#[derive(Clone, Debug)]
pub struct TypeRecord {
    pub order: QuaternionOrder,
    pub gross: GrossLattice,
    pub basis: MinimalBasis,
    pub classification: Classification,
}

impl TypeRecord {
    pub fn from_order(order: QuaternionOrder) -> Result<Self> {
        let gross = gross_lattice(&order)?;
        let basis = minimal_basis(&gross)?;
        let classification = classify(order.algebra().p(), &basis.gram, &basis.minima)?;
        Ok(TypeRecord {
            order,
            gross,
            basis,
            classification,
        })
    }

    pub fn p(&self) -> u64 {
        self.order.algebra().p()
    }

    pub fn minima(&self) -> &MinimaTriple {
        &self.basis.minima
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.basis.gram
    }
}

/// `2`, or `3` when `p = 2`.
pub fn default_ell(p: u64) -> u64 {
    if p == 2 {
        3
    } else {
        2
    }
}

/// All types of maximal orders of B_p, sorted by minima triple, found by
/// breadth-first search over ℓ-neighbors.
pub fn enumerate_types(p: u64, ell: u64) -> Result<Vec<TypeRecord>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime(ell) || ell == p {
        return Err(Error::Precondition(format!(
            "ℓ = {ell} must be a prime other than p"
        )));
    }
    let start = TypeRecord::from_order(standard_maximal_order(p)?)?;
    let mut found: BTreeMap<MinimaTriple, TypeRecord> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(start.order.clone());
    found.insert(start.minima().clone(), start);
    while let Some(order) = queue.pop_front() {
        for ideal in left_ideals_of_norm(&order, ell)? {
            let next = TypeRecord::from_order(right_order(&ideal)?)?;
            if !found.contains_key(next.minima()) {
                queue.push_back(next.order.clone());
                found.insert(next.minima().clone(), next);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Memoized `enumerate_types(p, default_ell(p))`, shareable across threads.
#[derive(Default)]
pub struct TypeCatalog {
    cache: Mutex<BTreeMap<u64, Arc<Vec<TypeRecord>>>>,
}

impl TypeCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: u64) -> Result<Arc<Vec<TypeRecord>>> {
        if let Some(t) = self.cache.lock().expect("catalog lock").get(&p) {
            return Ok(Arc::clone(t));
        }
        let types = Arc::new(enumerate_types(p, default_ell(p))?);
        self.cache
            .lock()
            .expect("catalog lock")
            .insert(p, Arc::clone(&types));
        Ok(types)
    }

    /// Fills the cache for `primes` in parallel.
    pub fn prefetch(&self, primes: &[u64]) -> Result<()> {
        primes.par_iter().try_for_each(|&p| self.get(p).map(|_| ()))
    }
}
