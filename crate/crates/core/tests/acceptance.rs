//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `RECORDED` fail for reasons documented with the
//! project and do not change the exit status. Set `GROSSLAT_EXTENDED=1` to
//! run the large CM rows.

use std::process::ExitCode;
use std::time::Instant;

use grosslat::classify::validate_bounds;
use grosslat::cm::{find_row, recompute_ne, types_embedding, ClosedFormFamily};
use grosslat::exact::{is_prime, IntMatrix};
use grosslat::gramgross::gram_gross;
use grosslat::lattice::{
    minimal_basis_of_gram, minimal_rank2_sublattices, orthogonalization, rank2_det, short_vectors,
    TieBreak,
};
use grosslat::oracle::supersingular_j_set;
use grosslat::verify::p3_grams;
use grosslat::TypeCatalog;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

/// Criteria whose failure is an expected, documented outcome.
const RECORDED: &[(u32, &str)] = &[(
    4,
    "j = 0 lattices have three minimal rank-2 sublattices: <b1,b2>, <b1,b3> and <b1,b2+b3>",
)];

const P_MAX: u64 = 200;

fn primes(hi: u64) -> Vec<u64> {
    (2..=hi).filter(|&p| is_prime(p)).collect()
}

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

type Outcome = Result<String, String>;

fn ensure(errors: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok && errors.len() < 8 {
        errors.push(msg());
    } else if !ok {
        errors.push(String::new());
    }
}

fn finish(errors: Vec<String>, ok_msg: String) -> Outcome {
    if errors.is_empty() {
        Ok(ok_msg)
    } else {
        let shown: Vec<_> = errors.iter().filter(|e| !e.is_empty()).cloned().collect();
        Err(format!("{} problems: {}", errors.len(), shown.join("; ")))
    }
}

fn deuring(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    for p in primes(P_MAX) {
        let types = cat.get(p).map_err(|e| e.to_string())?;
        let ss = supersingular_j_set(p).map_err(|e| e.to_string())?;
        let spine = types
            .iter()
            .filter(|t| t.minima().d3 >= b(p as i64))
            .count();
        ensure(&mut errs, types.len() == ss.orbit_count, || {
            format!("p={p}: {} types vs {} orbits", types.len(), ss.orbit_count)
        });
        ensure(&mut errs, spine == ss.spine_count, || {
            format!(
                "p={p}: {spine} spine types vs {} F_p j-invariants",
                ss.spine_count
            )
        });
    }
    finish(errs, format!("{} primes", primes(P_MAX).len()))
}

fn closed_forms(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let mut n = 0;
    for p in primes(P_MAX) {
        let types = cat.get(p).map_err(|e| e.to_string())?;
        for (fam, applies) in [
            (ClosedFormFamily::J0, p % 3 == 2),
            (ClosedFormFamily::J1728, p % 4 == 3 && p > 3),
        ] {
            if !applies {
                continue;
            }
            n += 1;
            let want = fam.gram(p).map_err(|e| e.to_string())?;
            let hit = types.iter().any(|t| {
                let sj = t.classification.special_j;
                let tagged = if fam == ClosedFormFamily::J0 {
                    sj.has_j0()
                } else {
                    sj.has_j1728()
                };
                tagged && t.gram() == &want
            });
            ensure(&mut errs, hit, || format!("p={p} {fam:?}"));
        }
    }
    let p2 = cat.get(2).map_err(|e| e.to_string())?;
    ensure(
        &mut errs,
        p2.len() == 1 && p2[0].gram() == &IntMatrix::from_i64(&[[3, 1, 1], [1, 3, -1], [1, -1, 3]]),
        || "p=2".into(),
    );
    let p3 = cat.get(3).map_err(|e| e.to_string())?;
    ensure(
        &mut errs,
        p3.len() == 1 && p3_grams().contains(p3[0].gram()),
        || "p=3".into(),
    );
    finish(errs, format!("{n} closed-form matches plus p=2 and p=3"))
}

fn invariant_suite(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let mut count = 0;
    for p in primes(P_MAX) {
        let pb = b(p as i64);
        let four_p = b(4) * &pb;
        let types = cat.get(p).map_err(|e| e.to_string())?;
        for t in types.iter() {
            count += 1;
            let g = t.gram();
            let m = t.minima();
            let spine = m.d3 >= pb;
            let tag = format!("p={p} {m}");
            ensure(&mut errs, g.det() == &four_p * &pb, || format!("{tag} det"));
            let norms = short_vectors(g, &(b(2) * &pb)).map_err(|e| e.to_string())?;
            ensure(
                &mut errs,
                norms.iter().all(|v| {
                    let r = v.norm.mod_floor(&b(4));
                    r == b(0) || r == b(3)
                }),
                || format!("{tag} norm residue"),
            );
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                ensure(
                    &mut errs,
                    rank2_det(g, i, j).is_multiple_of(&four_p),
                    || format!("{tag} minor {i}{j}"),
                );
            }
            ensure(&mut errs, (rank2_det(g, 0, 1) == four_p) == spine, || {
                format!("{tag} minor12 vs spine")
            });
            let prod = m.product();
            let p2 = &pb * &pb;
            ensure(&mut errs, prod >= b(4) * &p2 && prod <= b(8) * &p2, || {
                format!("{tag} product")
            });
            if spine {
                ensure(&mut errs, b(3) * &m.d1 * &m.d1 <= b(16) * &pb, || {
                    format!("{tag} 3D1^2 <= 16p")
                });
                if p != 2 {
                    ensure(&mut errs, m.d1 != m.d2, || format!("{tag} D1 = D2"));
                }
                if m.d1 != b(3) {
                    ensure(&mut errs, m.d2 != m.d3, || format!("{tag} D2 = D3"));
                }
            }
            ensure(&mut errs, orthogonalization(g).is_size_reduced(), || {
                format!("{tag} size reduction")
            });
            let (x, y, z) = (&g[(0, 1)], &g[(0, 2)], &g[(1, 2)]);
            let normalized = !x.is_negative()
                && !y.is_negative()
                && b(2) * x <= m.d1
                && b(2) * y <= m.d1
                && b(2) * z.abs() <= m.d2;
            ensure(&mut errs, normalized, || format!("{tag} normalized bounds"));
            let bad = validate_bounds(p, m, spine);
            ensure(&mut errs, bad.is_empty(), || format!("{tag} {bad:?}"));
            if p >= 3 {
                let c = &t.classification;
                ensure(&mut errs, !c.orthogonal && !c.well_rounded, || {
                    format!("{tag} orthogonal/well-rounded")
                });
            }
        }
    }
    finish(errs, format!("{count} types"))
}

fn uniqueness(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let mut j0_counts = Vec::new();
    let mut spine_types = 0;
    for p in primes(P_MAX).into_iter().filter(|&p| p != 3) {
        let types = cat.get(p).map_err(|e| e.to_string())?;
        for t in types.iter().filter(|t| t.classification.spine) {
            spine_types += 1;
            let tag = format!("p={p} {}", t.minima());
            let asc = minimal_basis_of_gram(t.gross.gram(), TieBreak::LexAscending)
                .map_err(|e| e.to_string())?;
            let desc = minimal_basis_of_gram(t.gross.gram(), TieBreak::LexDescending)
                .map_err(|e| e.to_string())?;
            ensure(&mut errs, asc.gram == desc.gram, || {
                format!("{tag} tie-break orders differ")
            });
            if p == 2 {
                continue;
            }
            let subs = minimal_rank2_sublattices(t.gram())
                .map_err(|e| e.to_string())?
                .len();
            if t.classification.special_j.has_j0() {
                j0_counts.push((p, subs));
            } else {
                ensure(&mut errs, subs == 1, || {
                    format!("{tag} {subs} rank-2 sublattices")
                });
            }
        }
    }
    let bad_j0: Vec<_> = j0_counts.iter().filter(|(_, c)| *c != 2).collect();
    if !bad_j0.is_empty() {
        let found: std::collections::BTreeSet<usize> = bad_j0.iter().map(|(_, c)| *c).collect();
        errs.push(format!(
            "j = 0 sublattice count expected 2, found {found:?} at {} of {} primes (tie-break and j != 0 parts {})",
            bad_j0.len(),
            j0_counts.len(),
            if errs.is_empty() { "pass" } else { "also fail" }
        ));
    }
    finish(
        errs,
        format!("{spine_types} spine types, {} j = 0 types", j0_counts.len()),
    )
}

fn gramgross_checks(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let mut n = 0;
    for p in primes(P_MAX) {
        let types = cat.get(p).map_err(|e| e.to_string())?;
        for t in types.iter().filter(|t| t.classification.spine) {
            n += 1;
            let d1 = u64::try_from(&t.minima().d1).unwrap();
            let cands = gram_gross(p, d1).map_err(|e| format!("p={p} D1={d1}: {e}"))?;
            ensure(
                &mut errs,
                cands.iter().any(|c| &c.gram() == t.gram()),
                || format!("p={p} D1={d1} missing {}", t.gram()),
            );
            for c in &cands {
                let v = c.violations(p);
                ensure(&mut errs, v.is_empty(), || {
                    format!("p={p} {}: {v:?}", c.gram())
                });
            }
        }
    }
    let grams = |p, d1| -> Result<Vec<IntMatrix>, String> {
        Ok(gram_gross(p, d1)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| c.gram())
            .collect())
    };
    let fixed = [
        (
            31,
            7,
            vec![IntMatrix::from_i64(&[[7, 3, 2], [3, 19, -8], [2, -8, 36]])],
        ),
        (
            7,
            4,
            vec![IntMatrix::from_i64(&[[4, 0, 2], [0, 7, 0], [2, 0, 8]])],
        ),
        (
            11,
            3,
            vec![IntMatrix::from_i64(&[[3, 1, 1], [1, 15, -7], [1, -7, 15]])],
        ),
        (13, 3, vec![]),
    ];
    for (p, d1, want) in fixed {
        let got = grams(p, d1)?;
        ensure(&mut errs, got == want, || {
            format!("gram_gross({p},{d1}) = {got:?}")
        });
    }
    finish(errs, format!("{n} spine types and 4 fixed outputs"))
}

fn cm_tables(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let rows: [(&str, u64, u64); 10] = [
        ("0", 5, 300),
        ("1728", 7, 300),
        ("-15^3", 13, 300),
        ("20^3", 23, 300),
        ("-32^3", 29, 300),
        ("2*30^3", 41, 300),
        ("66^3", 67, 300),
        ("-96^3", 79, 300),
        ("-3*160^3", 167, 400),
        ("255^3", 181, 400),
    ];
    for (label, want, p_max) in rows {
        let row = find_row(label).map_err(|e| e.to_string())?;
        let rep = recompute_ne(row, p_max, cat).map_err(|e| e.to_string())?;
        ensure(&mut errs, rep.n_e == Some(want), || {
            format!("{label}: N_E {:?}, want {want}", rep.n_e)
        });
        ensure(
            &mut errs,
            rep.points
                .iter()
                .all(|pt| pt.matches_closed_form != Some(false)),
            || format!("{label}: closed form mismatch"),
        );
    }
    finish(errs, "10 rows".into())
}

fn cm_extended(cat: &TypeCatalog) -> Option<Outcome> {
    if std::env::var("GROSSLAT_EXTENDED").as_deref() != Ok("1") {
        return None;
    }
    let mut errs = Vec::new();
    for (label, want) in [("-960^3", 433), ("-5280^3", 1103), ("-640320^3", 6481)] {
        let row = match find_row(label) {
            Ok(r) => r,
            Err(e) => return Some(Err(e.to_string())),
        };
        let p_max = ((row.d + 1) * (row.d + 1)).div_ceil(4).max(want);
        match recompute_ne(row, p_max, cat) {
            Ok(rep) => ensure(&mut errs, rep.n_e == Some(want), || {
                format!("{label}: N_E {:?}, want {want}", rep.n_e)
            }),
            Err(e) => errs.push(format!("{label}: {e}")),
        }
    }
    Some(finish(errs, "3 rows".into()))
}

fn non_spine_family(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    for p in [113, 137, 157, 173, 193] {
        let types = cat.get(p).map_err(|e| e.to_string())?;
        let want = ClosedFormFamily::Disc20
            .gram(p)
            .map_err(|e| e.to_string())?;
        ensure(
            &mut errs,
            want.det() == b(4 * (p as i64) * (p as i64)),
            || format!("p={p} det"),
        );
        ensure(
            &mut errs,
            types
                .iter()
                .any(|t| !t.classification.spine && t.gram() == &want),
            || format!("p={p}: no non-spine type with Gram {want}"),
        );
    }
    let fixed = [
        (113, [[20, 6, 2], [6, 47, -22], [2, -22, 68]]),
        (137, [[20, 2, 4], [2, 55, -27], [4, -27, 83]]),
    ];
    for (p, g) in fixed {
        let want = IntMatrix::from_i64(&g);
        let types = cat.get(p).map_err(|e| e.to_string())?;
        ensure(&mut errs, types.iter().any(|t| t.gram() == &want), || {
            format!("p={p} instance")
        });
    }
    finish(errs, "5 primes".into())
}

fn tightness(cat: &TypeCatalog) -> Outcome {
    let mut errs = Vec::new();
    let t31 = cat.get(31).map_err(|e| e.to_string())?;
    let hits = types_embedding(&t31, 7).map_err(|e| e.to_string())?;
    ensure(
        &mut errs,
        hits.len() == 1 && hits[0].minima().d3 == b(36),
        || "p=31 D3 != 36".into(),
    );
    ensure(
        &mut errs,
        b(7 * 36) == b(8 * 31 + 4) && b(28 * 36) <= b(32 * 31 + 49),
        || "p=31 bound".into(),
    );
    let t113 = cat.get(113).map_err(|e| e.to_string())?;
    let d20: Vec<_> = t113.iter().filter(|t| t.minima().d1 == b(20)).collect();
    ensure(
        &mut errs,
        d20.len() == 1 && d20[0].minima().d3 == b(68),
        || "p=113 D3 != 68".into(),
    );
    ensure(
        &mut errs,
        b(5 * 68) == b(3 * 113 + 1) && b(5 * 68) <= b(3 * 113 + 25),
        || "p=113 bound".into(),
    );
    finish(errs, "p=31 D3=36, p=113 D3=68".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cat = TypeCatalog::new();
    cat.prefetch(&primes(400)).expect("type enumeration");
    type Criterion = (u32, &'static str, fn(&TypeCatalog) -> Outcome);
    let criteria: [Criterion; 8] = [
        (
            1,
            "type counts match the supersingular j-invariant oracle",
            deuring,
        ),
        (
            2,
            "closed-form Gram matrices for j = 0, 1728, p = 2, 3",
            closed_forms,
        ),
        (3, "lattice invariant suite", invariant_suite),
        (4, "Gram and rank-2 sublattice uniqueness", uniqueness),
        (
            5,
            "Gram-matrix search soundness and containment",
            gramgross_checks,
        ),
        (6, "N_E recomputed from lattice data", cm_tables),
        (7, "D1 = 20 non-spine closed form", non_spine_family),
        (8, "D3 bound tightness witnesses", tightness),
    ];
    let (mut pass, mut fail, mut recorded) = (0, 0, 0);
    for (id, name, run) in criteria {
        let t = Instant::now();
        let outcome = run(&cat);
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => {
                pass += 1;
                println!("PASS  {id}  {name}: {msg} ({secs:.1}s)");
            }
            Err(msg) => {
                let note = RECORDED.iter().find(|(r, _)| *r == id);
                if let Some((_, why)) = note {
                    recorded += 1;
                    println!("FAIL  {id}  {name}: {msg} [recorded: {why}] ({secs:.1}s)");
                } else {
                    fail += 1;
                    println!("FAIL  {id}  {name}: {msg} ({secs:.1}s)");
                }
            }
        }
        if id == 6 {
            match cm_extended(&cat) {
                None => println!("SKIP  6x N_E for d = 43, 67, 163 (set GROSSLAT_EXTENDED=1)"),
                Some(Ok(msg)) => println!("PASS  6x N_E for d = 43, 67, 163: {msg}"),
                Some(Err(msg)) => {
                    fail += 1;
                    println!("FAIL  6x N_E for d = 43, 67, 163: {msg}");
                }
            }
        }
    }
    println!(
        "acceptance: {pass} passed, {} failed ({recorded} recorded) in {:.1}s",
        fail + recorded,
        start.elapsed().as_secs_f64()
    );
    if fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
