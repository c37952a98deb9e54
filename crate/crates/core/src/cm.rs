//! The thirteen rational CM j-invariants: table data, closed-form Gram
//! matrices and recomputation of the constants N_E from lattice data.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{is_prime, IntMatrix};
use crate::lattice::{is_primitive, short_vectors, MinimaTriple};
use crate::orders::{TypeCatalog, TypeRecord};

/// One row of the class-number-one CM tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmRow {
    /// ASCII label, e.g. `-15^3`.
    pub label: &'static str,
    /// `-d` is the discriminant of the CM order.
    pub d: u64,
    pub conductor: u64,
    pub field_disc: i64,
    /// Supersingular primes are those with `p mod modulus ∈ residues`.
    pub modulus: u64,
    pub residues: &'static [u64],
    pub n_e: u64,
}

impl CmRow {
    pub fn is_supersingular(&self, p: u64) -> bool {
        self.residues.contains(&(p % self.modulus))
    }

    pub fn closed_form_family(&self) -> Option<ClosedFormFamily> {
        match self.label {
            "0" => Some(ClosedFormFamily::J0),
            "1728" => Some(ClosedFormFamily::J1728),
            "-15^3" => Some(ClosedFormFamily::MinusFifteenCubed),
            _ => None,
        }
    }
}

const ROWS: [CmRow; 13] = [
    CmRow {
        label: "0",
        d: 3,
        conductor: 1,
        field_disc: -3,
        modulus: 3,
        residues: &[2],
        n_e: 5,
    },
    CmRow {
        label: "2*30^3",
        d: 12,
        conductor: 2,
        field_disc: -3,
        modulus: 12,
        residues: &[5, 11],
        n_e: 41,
    },
    CmRow {
        label: "-3*160^3",
        d: 27,
        conductor: 3,
        field_disc: -3,
        modulus: 27,
        residues: &[2, 5, 8, 11, 14, 17, 20, 23, 26],
        n_e: 167,
    },
    CmRow {
        label: "1728",
        d: 4,
        conductor: 1,
        field_disc: -4,
        modulus: 4,
        residues: &[3],
        n_e: 7,
    },
    CmRow {
        label: "66^3",
        d: 16,
        conductor: 2,
        field_disc: -4,
        modulus: 16,
        residues: &[3, 7, 11, 15],
        n_e: 67,
    },
    CmRow {
        label: "-15^3",
        d: 7,
        conductor: 1,
        field_disc: -7,
        modulus: 7,
        residues: &[3, 5, 6],
        n_e: 13,
    },
    CmRow {
        label: "255^3",
        d: 28,
        conductor: 2,
        field_disc: -7,
        modulus: 28,
        residues: &[3, 5, 13, 17, 19, 27],
        n_e: 181,
    },
    CmRow {
        label: "20^3",
        d: 8,
        conductor: 1,
        field_disc: -8,
        modulus: 8,
        residues: &[5, 7],
        n_e: 23,
    },
    CmRow {
        label: "-32^3",
        d: 11,
        conductor: 1,
        field_disc: -11,
        modulus: 11,
        residues: &[2, 6, 7, 8, 10],
        n_e: 29,
    },
    CmRow {
        label: "-96^3",
        d: 19,
        conductor: 1,
        field_disc: -19,
        modulus: 19,
        residues: &[2, 3, 8, 10, 12, 13, 14, 15, 18],
        n_e: 79,
    },
    CmRow {
        label: "-960^3",
        d: 43,
        conductor: 1,
        field_disc: -43,
        modulus: 43,
        residues: &[
            2, 3, 5, 7, 8, 12, 18, 19, 20, 22, 26, 27, 28, 29, 30, 32, 33, 34, 37, 39, 42,
        ],
        n_e: 433,
    },
    CmRow {
        label: "-5280^3",
        d: 67,
        conductor: 1,
        field_disc: -67,
        modulus: 67,
        residues: &[
            2, 3, 5, 7, 8, 11, 12, 13, 18, 20, 27, 28, 30, 31, 32, 34, 38, 41, 42, 43, 44, 45, 46,
            48, 50, 51, 52, 53, 57, 58, 61, 63, 66,
        ],
        n_e: 1103,
    },
    CmRow {
        label: "-640320^3",
        d: 163,
        conductor: 1,
        field_disc: -163,
        modulus: 163,
        residues: &[
            2, 3, 5, 7, 8, 11, 12, 13, 17, 18, 19, 20, 23, 27, 28, 29, 30, 31, 32, 37, 42, 44, 45,
            48, 50, 52, 59, 63, 66, 67, 68, 70, 72, 73, 75, 76, 78, 79, 80, 82, 86, 89, 92, 94, 98,
            99, 101, 102, 103, 105, 106, 107, 108, 109, 110, 112, 114, 116, 117, 120, 122, 123,
            124, 125, 127, 128, 129, 130, 137, 138, 139, 141, 142, 147, 148, 149, 153, 154, 157,
            159, 162,
        ],
        n_e: 6481,
    },
];

pub fn cm_rows() -> &'static [CmRow] {
    &ROWS
}

/// Looks up a row by label; accepts `−`, `·`, `³` spellings and `12^3` for 1728.
pub fn find_row(label: &str) -> Result<&'static CmRow> {
    let norm: String = label
        .replace('−', "-")
        .replace('·', "*")
        .replace('³', "^3")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let norm = if norm == "12^3" {
        "1728".to_string()
    } else {
        norm
    };
    ROWS.iter()
        .find(|r| r.label == norm)
        .ok_or_else(|| Error::UnknownRow(label.to_string()))
}

/// Families of primes with a printed normalized Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormFamily {
    J0,
    J1728,
    MinusFifteenCubed,
    /// Non-spine types with `D1 = 20`, `p ≡ 13, 17 (mod 20)`.
    Disc20,
}

impl ClosedFormFamily {
    pub fn applies(self, p: u64) -> bool {
        is_prime(p)
            && match self {
                ClosedFormFamily::J0 => p % 3 == 2,
                ClosedFormFamily::J1728 => p % 4 == 3 && p > 3,
                ClosedFormFamily::MinusFifteenCubed => p >= 13 && matches!(p % 7, 3 | 5 | 6),
                ClosedFormFamily::Disc20 => p >= 113 && matches!(p % 20, 13 | 17),
            }
    }

    pub fn gram(self, p: u64) -> Result<IntMatrix> {
        if !self.applies(p) {
            return Err(Error::Precondition(format!(
                "{self:?} closed form does not apply at p = {p}"
            )));
        }
        let p = p as i64;
        let m = match self {
            ClosedFormFamily::J0 => {
                let (d, z) = ((4 * p + 1) / 3, -(2 * p - 1) / 3);
                [[3, 1, 1], [1, d, z], [1, z, d]]
            }
            ClosedFormFamily::J1728 => [[4, 0, 2], [0, p, 0], [2, 0, p + 1]],
            ClosedFormFamily::MinusFifteenCubed => match p % 7 {
                3 => {
                    let z = -(2 * p - 6) / 7;
                    [[7, 3, 2], [3, (4 * p + 9) / 7, z], [2, z, (8 * p + 4) / 7]]
                }
                5 => {
                    let z = -(2 * p - 3) / 7;
                    [[7, 1, 3], [1, (4 * p + 1) / 7, z], [3, z, (8 * p + 9) / 7]]
                }
                _ => {
                    let z = 2 * (p + 1) / 7;
                    [[7, 2, 1], [2, 4 * (p + 1) / 7, z], [1, z, (8 * p + 1) / 7]]
                }
            },
            ClosedFormFamily::Disc20 => {
                let (r, s) = if p % 20 == 13 { (3, 1) } else { (1, 2) };
                let z = (-p + r * s) / 5;
                [
                    [20, 2 * r, 2 * s],
                    [2 * r, (2 * p + r * r) / 5, z],
                    [2 * s, z, (3 * p + s * s) / 5],
                ]
            }
        };
        let g = IntMatrix::from_i64(&m);
        if g.det() != BigInt::from(4 * p * p) {
            return Err(Error::Fault(format!(
                "closed form {self:?} at p = {p} has det {}",
                g.det()
            )));
        }
        Ok(g)
    }
}

/// The types whose Gross lattice has a primitive vector of norm `d`.
pub fn types_embedding(types: &[TypeRecord], d: u64) -> Result<Vec<&TypeRecord>> {
    let d = BigInt::from(d);
    let mut out = Vec::new();
    for t in types {
        let hit = short_vectors(t.gram(), &d)?
            .iter()
            .any(|v| v.norm == d && is_primitive(&v.coords));
        if hit {
            out.push(t);
        }
    }
    Ok(out)
}

/// The reduction of the CM curve at one supersingular prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmPoint {
    pub p: u64,
    pub minima: MinimaTriple,
    pub gram: Vec<Vec<BigInt>>,
    /// `None` when no closed form applies at `p`.
    pub matches_closed_form: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeReport {
    pub label: &'static str,
    pub d: u64,
    pub p_max: u64,
    pub points: Vec<CmPoint>,
    /// Least supersingular `p ≥ 5` from which on every point has `D1 = d`.
    pub n_e: Option<u64>,
}

/// Supersingular primes `5 ≤ p ≤ p_max` for the row.
pub fn supersingular_primes(row: &CmRow, p_max: u64) -> Vec<u64> {
    (5..=p_max)
        .filter(|&p| is_prime(p) && row.is_supersingular(p))
        .collect()
}

fn point(row: &CmRow, p: u64, catalog: &TypeCatalog) -> Result<CmPoint> {
    let types = catalog.get(p)?;
    let hits = types_embedding(&types, row.d)?;
    let [t] = hits.as_slice() else {
        return Err(Error::Fault(format!(
            "{} types at p = {p} carry a primitive vector of norm {}",
            hits.len(),
            row.d
        )));
    };
    let matches_closed_form = match row.closed_form_family() {
        Some(f) if f.applies(p) => Some(&f.gram(p)? == t.gram()),
        _ => None,
    };
    Ok(CmPoint {
        p,
        minima: t.minima().clone(),
        gram: t.gram().row_vecs(),
        matches_closed_form,
    })
}

/// Reduction data at every supersingular prime up to `p_max` and the
/// resulting N_E.
pub fn recompute_ne(row: &'static CmRow, p_max: u64, catalog: &TypeCatalog) -> Result<NeReport> {
    let need = (row.d as u128 + 1).pow(2);
    if (4 * p_max as u128) < need {
        return Err(Error::Precondition(format!(
            "p_max = {p_max} is below (d+1)²/4 for d = {}",
            row.d
        )));
    }
    let primes = supersingular_primes(row, p_max);
    let points: Vec<CmPoint> = primes
        .par_iter()
        .map(|&p| point(row, p, catalog))
        .collect::<Result<_>>()?;
    let d = BigInt::from(row.d);
    let n_e = match points.iter().rposition(|pt| pt.minima.d1 != d) {
        None => points.first().map(|pt| pt.p),
        Some(i) => points.get(i + 1).map(|pt| pt.p),
    };
    Ok(NeReport {
        label: row.label,
        d: row.d,
        p_max,
        points,
        n_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_consistency() {
        assert_eq!(cm_rows().len(), 13);
        for r in cm_rows() {
            assert_eq!(
                r.d as i64,
                (r.conductor * r.conductor) as i64 * -r.field_disc,
                "{}",
                r.label
            );
            assert!(is_prime(r.n_e));
            let bound = (r.d + 1) * (r.d + 1);
            let next = (bound / 4 + 1..)
                .find(|&q| is_prime(q) && 4 * q > bound)
                .unwrap();
            assert!(r.n_e <= next, "{}", r.label);
        }
    }

    #[test]
    fn rows_by_label() {
        let r = find_row("−15³").unwrap();
        assert_eq!(
            (r.d, r.conductor, r.n_e, r.residues),
            (7, 1, 13, &[3u64, 5, 6][..])
        );
        let r = find_row("0").unwrap();
        assert_eq!((r.d, r.n_e, r.modulus, r.residues), (3, 5, 3, &[2u64][..]));
        assert_eq!(find_row("-640320^3").unwrap().n_e, 6481);
        assert_eq!(find_row("12^3").unwrap().label, "1728");
        assert_eq!(find_row("2·30³").unwrap().d, 12);
        assert_eq!(find_row("17"), Err(Error::UnknownRow("17".into())));
    }

    #[test]
    fn closed_forms() {
        let g = |f: ClosedFormFamily, p| f.gram(p).unwrap();
        assert_eq!(
            g(ClosedFormFamily::MinusFifteenCubed, 19),
            IntMatrix::from_i64(&[[7, 1, 3], [1, 11, -5], [3, -5, 23]])
        );
        assert_eq!(
            g(ClosedFormFamily::Disc20, 113),
            IntMatrix::from_i64(&[[20, 6, 2], [6, 47, -22], [2, -22, 68]])
        );
        assert_eq!(
            g(ClosedFormFamily::Disc20, 137),
            IntMatrix::from_i64(&[[20, 2, 4], [2, 55, -27], [4, -27, 83]])
        );
        assert_eq!(
            g(ClosedFormFamily::J1728, 11),
            IntMatrix::from_i64(&[[4, 0, 2], [0, 11, 0], [2, 0, 12]])
        );
        assert_eq!(
            g(ClosedFormFamily::J0, 2),
            IntMatrix::from_i64(&[[3, 1, 1], [1, 3, -1], [1, -1, 3]])
        );
        assert!(ClosedFormFamily::MinusFifteenCubed.gram(11).is_err());
        assert!(ClosedFormFamily::Disc20.gram(53).is_err());
    }

    #[test]
    fn small_ne_values() {
        let catalog = TypeCatalog::new();
        for (label, want) in [("0", 5), ("1728", 7), ("-15^3", 13)] {
            let row = find_row(label).unwrap();
            let rep = recompute_ne(row, 60, &catalog).unwrap();
            assert_eq!(rep.n_e, Some(want), "{label}");
            assert!(rep
                .points
                .iter()
                .all(|pt| pt.matches_closed_form != Some(false)));
        }
        assert!(recompute_ne(find_row("-96^3").unwrap(), 60, &catalog).is_err());
    }
}
