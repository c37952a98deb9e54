//! Classification of a type from its Gross lattice alone.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::error::Result;
use crate::exact::IntMatrix;
use crate::lattice::{is_primitive, short_vectors, MinimaTriple};

/// Which of the special j-invariants 0 and 1728 the type carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialJ {
    None,
    J0,
    J1728,
    Both,
}

impl SpecialJ {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialJ::None => "none",
            SpecialJ::J0 => "j0",
            SpecialJ::J1728 => "j1728",
            SpecialJ::Both => "both",
        }
    }

    pub fn has_j0(self) -> bool {
        matches!(self, SpecialJ::J0 | SpecialJ::Both)
    }

    pub fn has_j1728(self) -> bool {
        matches!(self, SpecialJ::J1728 | SpecialJ::Both)
    }
}

impl fmt::Display for SpecialJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which order of `ℚ(√-p)` containing Frobenius embeds maximally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    /// `ℤ[√-p]`
    SqrtMinusP,
    /// `ℤ[(1+√-p)/2]`
    HalfIntegral,
    Both,
    NotApplicable,
}

impl Embedding {
    pub fn as_str(self) -> &'static str {
        match self {
            Embedding::SqrtMinusP => "sqrt_minus_p",
            Embedding::HalfIntegral => "half_integral",
            Embedding::Both => "both",
            Embedding::NotApplicable => "not_applicable",
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub spine: bool,
    pub special_j: SpecialJ,
    pub embedding: Embedding,
    pub orthogonal: bool,
    pub well_rounded: bool,
}

/// `j ∈ F_p` iff `D3 ≥ p`.
pub fn field_of_definition(p: u64, d3: &BigInt) -> bool {
    d3 >= &BigInt::from(p)
}

pub fn special_j(gram: &IntMatrix) -> Result<SpecialJ> {
    let vecs = short_vectors(gram, &BigInt::from(4))?;
    let has = |n: i64| vecs.iter().any(|v| v.norm == BigInt::from(n));
    Ok(match (has(3), has(4)) {
        (false, false) => SpecialJ::None,
        (true, false) => SpecialJ::J0,
        (false, true) => SpecialJ::J1728,
        (true, true) => SpecialJ::Both,
    })
}

pub fn frobenius_embedding(p: u64, triple: &MinimaTriple, spine: bool) -> Embedding {
    if !spine {
        return Embedding::NotApplicable;
    }
    if p % 4 != 3 {
        return Embedding::SqrtMinusP;
    }
    let p = BigInt::from(p);
    if triple.d3 == &p + 1 {
        Embedding::Both
    } else if triple.d3 == p {
        Embedding::HalfIntegral
    } else {
        Embedding::SqrtMinusP
    }
}

/// Norms `d ≤ bound` of primitive lattice vectors.
pub fn embedded_discriminants(gram: &IntMatrix, bound: &BigInt) -> Result<BTreeSet<BigInt>> {
    Ok(short_vectors(gram, bound)?
        .into_iter()
        .filter(|v| is_primitive(&v.coords))
        .map(|v| v.norm)
        .collect())
}

/// A theorem-stated constraint on minima triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundRule {
    /// spine, `D1 ≠ 3` ⇒ `p ≤ D3 ≤ 8p/7 + 7/4`
    SpineD3Range,
    /// spine, `D1 = 3`, `p ≠ 3` ⇒ `D3 = (4p+1)/3`
    SpineJ0D3,
    /// non-spine ⇒ `D3 ≤ 3p/5 + 5`
    NonSpineD3Upper,
    /// spine ⟺ `D1 D2 < 16p/3`
    SpineIffD1D2,
    /// spine, `p ≠ 2` ⇒ `D1 ≠ D2`
    SpineD1NeD2,
    /// spine, `D1 ≠ 3` ⇒ `D2 ≠ D3`
    SpineD2NeD3,
}

impl BoundRule {
    pub fn id(self) -> &'static str {
        match self {
            BoundRule::SpineD3Range => "spine_d3_range",
            BoundRule::SpineJ0D3 => "spine_j0_d3",
            BoundRule::NonSpineD3Upper => "nonspine_d3_upper",
            BoundRule::SpineIffD1D2 => "spine_iff_d1d2",
            BoundRule::SpineD1NeD2 => "spine_d1_ne_d2",
            BoundRule::SpineD2NeD3 => "spine_d2_ne_d3",
        }
    }
}

impl fmt::Display for BoundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Violated rules, checked with exact integer comparisons.
pub fn validate_bounds(p: u64, t: &MinimaTriple, spine: bool) -> Vec<BoundRule> {
    let pb = BigInt::from(p);
    let n = |v: i64| BigInt::from(v);
    let three = n(3);
    let mut bad = Vec::new();
    if spine && t.d1 != three && !(t.d3 >= pb && n(56) * &t.d3 <= n(64) * &pb + 98) {
        bad.push(BoundRule::SpineD3Range);
    }
    if spine && t.d1 == three && p != 3 && n(3) * &t.d3 != n(4) * &pb + 1 {
        bad.push(BoundRule::SpineJ0D3);
    }
    if !spine && n(5) * &t.d3 > n(3) * &pb + 25 {
        bad.push(BoundRule::NonSpineD3Upper);
    }
    if spine != (n(3) * &t.d1 * &t.d2 < n(16) * &pb) {
        bad.push(BoundRule::SpineIffD1D2);
    }
    if spine && p != 2 && t.d1 == t.d2 {
        bad.push(BoundRule::SpineD1NeD2);
    }
    if spine && t.d1 != three && t.d2 == t.d3 {
        bad.push(BoundRule::SpineD2NeD3);
    }
    bad
}

/// `(orthogonal, well_rounded)` for a normalized Gram matrix.
pub fn structural_flags(gram: &IntMatrix, triple: &MinimaTriple) -> (bool, bool) {
    let orthogonal = (0..3).all(|r| (0..3).all(|c| r == c || gram[(r, c)] == BigInt::from(0)));
    let well_rounded = triple.d1 == triple.d2 && triple.d2 == triple.d3;
    (orthogonal, well_rounded)
}

pub fn classify(p: u64, gram: &IntMatrix, triple: &MinimaTriple) -> Result<Classification> {
    let spine = field_of_definition(p, &triple.d3);
    let (orthogonal, well_rounded) = structural_flags(gram, triple);
    Ok(Classification {
        spine,
        special_j: special_j(gram)?,
        embedding: frobenius_embedding(p, triple, spine),
        orthogonal,
        well_rounded,
    })
}
