//! Candidate normalized Gram matrices for spine types with a given first
//! successive minimum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_div, exact_sqrt, floor_div, is_prime, IntMatrix};

/// A Gram matrix `[[D1,x,y],[x,D2,z],[y,z,D3]]` with the search values
/// that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GramCandidate {
    pub d1: BigInt,
    pub x: BigInt,
    pub d2: BigInt,
    pub y: BigInt,
    pub d3: BigInt,
    /// `(D1 D3 - y²) / 4p`.
    pub n: BigInt,
    pub z: BigInt,
}

impl GramCandidate {
    fn new(
        p: &BigInt,
        d1: BigInt,
        x: BigInt,
        d2: BigInt,
        y: BigInt,
        d3: BigInt,
        z: BigInt,
    ) -> Self {
        let n = (&d1 * &d3 - &y * &y) / (BigInt::from(4) * p);
        GramCandidate {
            d1,
            x,
            d2,
            y,
            d3,
            n,
            z,
        }
    }

    fn from_i64(p: u64, g: [[i64; 3]; 3]) -> Self {
        let b = |v: i64| BigInt::from(v);
        Self::new(
            &b(p as i64),
            b(g[0][0]),
            b(g[0][1]),
            b(g[1][1]),
            b(g[0][2]),
            b(g[2][2]),
            b(g[1][2]),
        )
    }

    pub fn gram(&self) -> IntMatrix {
        IntMatrix::from_rows(vec![
            vec![self.d1.clone(), self.x.clone(), self.y.clone()],
            vec![self.x.clone(), self.d2.clone(), self.z.clone()],
            vec![self.y.clone(), self.z.clone(), self.d3.clone()],
        ])
        .expect("3x3")
    }

    /// Names of the candidate invariants this matrix fails.
    pub fn violations(&self, p: u64) -> Vec<&'static str> {
        let p = BigInt::from(p);
        let four_p = BigInt::from(4) * &p;
        let mut bad = Vec::new();
        let res_ok = |d: &BigInt| {
            let r = d.mod_floor(&BigInt::from(4));
            r.is_zero() || r == BigInt::from(3)
        };
        if self.gram().det() != &four_p * &p {
            bad.push("det_4p2");
        }
        if &self.d1 * &self.d2 - &self.x * &self.x != four_p {
            bad.push("minor12_4p");
        }
        if &self.d1 * &self.d3 - &self.y * &self.y != &four_p * &self.n {
            bad.push("minor13_4np");
        }
        if !(&self.d2 * &self.d3 - &self.z * &self.z).is_multiple_of(&four_p) {
            bad.push("minor23_mod_4p");
        }
        let half = &self.d1 / 2;
        if self.x.is_negative() || self.y.is_negative() || self.x > half || self.y > half {
            bad.push("xy_range");
        }
        if BigInt::from(2) * self.z.abs() > self.d2 {
            bad.push("z_range");
        }
        if ![&self.d1, &self.d2, &self.d3].into_iter().all(res_ok) {
            bad.push("residues_0_3_mod_4");
        }
        bad
    }
}

fn check_require(p: u64, d1: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!(
            "REQUIRE p prime: {p} is not prime"
        )));
    }
    if d1 == 0 {
        return Err(Error::Precondition("REQUIRE D1 positive".into()));
    }
    if !d1.is_multiple_of(4) && d1 % 4 != 3 {
        return Err(Error::Precondition(format!(
            "REQUIRE D1 ≡ 0, 3 (mod 4): D1 = {d1}"
        )));
    }
    if 3 * (d1 as u128) * (d1 as u128) > 16 * p as u128 {
        return Err(Error::Precondition(format!(
            "REQUIRE D1 ≤ 4√p/√3 (3·D1² ≤ 16p): D1 = {d1}, p = {p}"
        )));
    }
    Ok(())
}

/// Outer-loop range `[a, b]` for `n`.
pub fn loop_bounds(p: u64, d1: u64) -> (BigInt, BigInt) {
    let p = BigInt::from(p);
    let d1 = BigInt::from(d1);
    let a = ceil_div(
        &(BigInt::from(4) * &p * &d1 - &d1 * &d1),
        &(BigInt::from(16) * &p),
    );
    let b = floor_div(
        &(BigInt::from(32) * &p * &d1 + BigInt::from(49) * &d1),
        &(BigInt::from(112) * &p),
    );
    (a, b)
}

fn residue_ok(d: &BigInt) -> bool {
    let r = d.mod_floor(&BigInt::from(4));
    r.is_zero() || r == BigInt::from(3)
}

/// All candidate Gram matrices, sorted and deduplicated.
pub fn gram_gross(p: u64, d1: u64) -> Result<Vec<GramCandidate>> {
    check_require(p, d1)?;
    if d1 == 3 {
        return Ok(match p % 3 {
            _ if p == 3 => vec![
                GramCandidate::from_i64(3, [[3, 0, 0], [0, 4, -2], [0, -2, 4]]),
                GramCandidate::from_i64(3, [[3, 0, 0], [0, 4, 2], [0, 2, 4]]),
            ],
            2 => {
                let p = p as i64;
                let (d, z) = ((4 * p + 1) / 3, -(2 * p - 1) / 3);
                vec![GramCandidate::from_i64(
                    p as u64,
                    [[3, 1, 1], [1, d, z], [1, z, d]],
                )]
            }
            _ => Vec::new(),
        });
    }
    let pb = BigInt::from(p);
    let d1b = BigInt::from(d1);
    let four_p = BigInt::from(4) * &pb;
    let half = d1 / 2;

    let mut lx = Vec::new();
    for x in 0..=half {
        let x = BigInt::from(x);
        let num = &four_p + &x * &x;
        if num.is_multiple_of(&d1b) {
            let d2 = num / &d1b;
            if d2 >= d1b && residue_ok(&d2) {
                lx.push((x, d2));
            }
        }
    }
    if lx.is_empty() {
        return Ok(Vec::new());
    }
    let (a, b) = loop_bounds(p, d1);
    let mut ly = Vec::new();
    let mut n = a;
    while n <= b {
        for y in 0..=half {
            let y = BigInt::from(y);
            let num = &four_p * &n + &y * &y;
            if num.is_multiple_of(&d1b) {
                let d3 = num / &d1b;
                if d3 >= d1b && residue_ok(&d3) {
                    ly.push((y, d3));
                }
            }
        }
        n += 1;
    }

    let mut out = Vec::new();
    for (x, d2) in &lx {
        for (y, d3) in &ly {
            if d2 > d3 {
                continue;
            }
            // D1 z² - 2xy z + (4p² + D3 x² + D2 y² - D1 D2 D3) = 0
            let c = &four_p * &pb + d3 * x * x + d2 * y * y - &d1b * d2 * d3;
            let disc = BigInt::from(4) * x * x * y * y - BigInt::from(4) * &d1b * &c;
            if disc.is_negative() {
                continue;
            }
            let Some(root) = exact_sqrt(&disc) else {
                continue;
            };
            let two_d1 = BigInt::from(2) * &d1b;
            for num in [
                BigInt::from(2) * x * y + &root,
                BigInt::from(2) * x * y - &root,
            ] {
                if !num.is_multiple_of(&two_d1) {
                    continue;
                }
                let z = num / &two_d1;
                if BigInt::from(2) * z.abs() <= *d2 && (d2 * d3 - &z * &z).is_multiple_of(&four_p) {
                    out.push(GramCandidate::new(
                        &pb,
                        d1b.clone(),
                        x.clone(),
                        d2.clone(),
                        y.clone(),
                        d3.clone(),
                        z,
                    ));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether `-4p` is a square modulo `D1`.
pub fn quadratic_residue_precheck(p: u64, d1: u64) -> bool {
    if d1 == 0 {
        return false;
    }
    let target = (-(4 * p as i128)).rem_euclid(d1 as i128);
    (0..d1 as i128).any(|x| (x * x) % d1 as i128 == target)
}
