//! Supersingular j-invariants over F_{p²} from the Legendre family.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::is_prime;

/// `F_{p²} = F_p[t]/(t² - s)` for odd `p`, `s` the least non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp2Field {
    pub p: u64,
    pub s: u64,
}

/// `a + b·t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp2 {
    pub a: u64,
    pub b: u64,
}

impl Fp2 {
    pub fn in_fp(self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}*t"),
            (a, b) => write!(f, "{a}+{b}*t"),
        }
    }
}

fn mulmod(x: u64, y: u64, p: u64) -> u64 {
    ((x as u128 * y as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

impl Fp2Field {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Precondition(format!(
                "F_(p^2) needs an odd prime, got {p}"
            )));
        }
        let s = (2..p)
            .find(|&s| powmod(s, (p - 1) / 2, p) == p - 1)
            .expect("odd primes have non-residues");
        Ok(Fp2Field { p, s })
    }

    pub fn elem(&self, a: u64, b: u64) -> Fp2 {
        Fp2 {
            a: a % self.p,
            b: b % self.p,
        }
    }

    pub fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        self.elem(x.a + y.a, x.b + y.b)
    }

    pub fn sub(&self, x: Fp2, y: Fp2) -> Fp2 {
        self.elem(x.a + self.p - y.a, x.b + self.p - y.b)
    }

    pub fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p;
        let a = (mulmod(x.a, y.a, p) + mulmod(mulmod(x.b, y.b, p), self.s, p)) % p;
        let b = (mulmod(x.a, y.b, p) + mulmod(x.b, y.a, p)) % p;
        Fp2 { a, b }
    }

    pub fn inv(&self, x: Fp2) -> Option<Fp2> {
        let p = self.p;
        let norm = (mulmod(x.a, x.a, p) + p - mulmod(self.s, mulmod(x.b, x.b, p), p)) % p;
        if norm == 0 {
            return None;
        }
        let ni = powmod(norm, p - 2, p);
        Some(Fp2 {
            a: mulmod(x.a, ni, p),
            b: mulmod((p - x.b) % p, ni, p),
        })
    }

    pub fn pow(&self, mut x: Fp2, mut e: u64) -> Fp2 {
        let mut r = self.elem(1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    /// Horner evaluation of a polynomial with F_p coefficients, constant first.
    pub fn eval(&self, coeffs: &[u64], x: Fp2) -> Fp2 {
        coeffs.iter().rev().fold(self.elem(0, 0), |acc, &c| {
            self.add(self.mul(acc, x), self.elem(c, 0))
        })
    }

    /// `j(λ) = 256 (λ² - λ + 1)³ / (λ² (λ - 1)²)`, `λ ∉ {0, 1}`.
    pub fn legendre_j(&self, l: Fp2) -> Option<Fp2> {
        let one = self.elem(1, 0);
        let l2 = self.mul(l, l);
        let num = self.add(self.sub(l2, l), one);
        let num = self.mul(self.elem(256, 0), self.mul(num, self.mul(num, num)));
        let lm1 = self.sub(l, one);
        let den = self.mul(l2, self.mul(lm1, lm1));
        self.inv(den).map(|d| self.mul(num, d))
    }
}

/// Coefficients of `Σ C(m,i)² λⁱ mod p`, `m = (p-1)/2`, constant first.
pub fn deuring_polynomial(p: u64) -> Result<Vec<u64>> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Precondition(format!(
            "Deuring polynomial needs an odd prime, got {p}"
        )));
    }
    let m = (p - 1) / 2;
    let mut c = 1u64;
    let mut out = vec![1u64];
    for i in 1..=m {
        c = mulmod(mulmod(c, m - i + 1, p), powmod(i, p - 2, p), p);
        out.push(mulmod(c, c, p));
    }
    Ok(out)
}

/// `⌊p/12⌋ + ε(p mod 12)`; 1 for `p ∈ {2, 3}`.
pub fn expected_count(p: u64) -> u64 {
    if p <= 3 {
        return 1;
    }
    p / 12
        + match p % 12 {
            1 => 0,
            5 | 7 => 1,
            _ => 2,
        }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersingularSet {
    pub p: u64,
    /// The non-residue `s` with `t² = s`; `0` for `p = 2`.
    pub nonresidue: u64,
    pub j_list: Vec<Fp2>,
    pub count: usize,
    pub spine_count: usize,
    pub orbit_count: usize,
}

impl SupersingularSet {
    fn from_list(p: u64, nonresidue: u64, j_list: Vec<Fp2>) -> Self {
        let count = j_list.len();
        let spine_count = j_list.iter().filter(|j| j.in_fp()).count();
        SupersingularSet {
            p,
            nonresidue,
            j_list,
            count,
            spine_count,
            orbit_count: spine_count + (count - spine_count) / 2,
        }
    }
}

/// Every supersingular j-invariant in characteristic `p`, sorted.
pub fn supersingular_j_set(p: u64) -> Result<SupersingularSet> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(SupersingularSet::from_list(2, 0, vec![Fp2 { a: 0, b: 0 }]));
    }
    let field = Fp2Field::new(p)?;
    let h = deuring_polynomial(p)?;
    let js: BTreeSet<Fp2> = (0..p)
        .into_par_iter()
        .flat_map_iter(|a| {
            let h = &h;
            (0..p).filter_map(move |b| {
                let l = field.elem(a, b);
                if b == 0 && a <= 1 {
                    return None;
                }
                if field.eval(h, l) != field.elem(0, 0) {
                    return None;
                }
                field.legendre_j(l)
            })
        })
        .collect();
    for j in &js {
        // j^p = j exactly when b = 0 in this basis.
        let frob = field.pow(*j, p);
        if (frob == *j) != j.in_fp() {
            return Err(Error::Fault(format!("Frobenius test disagrees at j = {j}")));
        }
    }
    let set = SupersingularSet::from_list(p, field.s, js.into_iter().collect());
    if set.count as u64 != expected_count(p) {
        return Err(Error::Fault(format!(
            "found {} supersingular j at p = {p}, expected {}",
            set.count,
            expected_count(p)
        )));
    }
    Ok(set)
}

pub fn spine_count(p: u64) -> Result<usize> {
    supersingular_j_set(p).map(|s| s.spine_count)
}
