//! Cross-module invariant checks over a range of primes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{embedded_discriminants, validate_bounds, Embedding};
use crate::cm::{cm_rows, recompute_ne, types_embedding, ClosedFormFamily};
use crate::error::Result;
use crate::exact::{is_prime, IntMatrix};
use crate::gramgross::{gram_gross, loop_bounds};
use crate::lattice::{
    minimal_basis_of_gram, minimal_rank2_sublattices, orthogonalization, rank2_det, short_vectors,
    successive_minima, TieBreak,
};
use crate::oracle::supersingular_j_set;
use crate::orders::{default_ell, enumerate_types, TypeCatalog, TypeRecord};
use crate::report::big;

/// CM rows whose N_E needs primes in the thousands.
pub const EXTENDED_CM_D: [u64; 3] = [43, 67, 163];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub pmin: u64,
    pub pmax: u64,
    /// The finite-field cross-check is skipped above this prime.
    pub oracle_cap: u64,
    /// The second-ℓ type enumeration is skipped above this prime.
    pub ell_check_cap: u64,
    pub extended_cm: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pmin: 2,
            pmax: 300,
            oracle_cap: 500,
            ell_check_cap: 100,
            extended_cm: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub rule: String,
    pub detail: String,
}

/// Output of the Gram-matrix search for one spine type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramGrossObservation {
    pub d1: BigInt,
    pub outputs: usize,
    /// The matching candidate was found at the lower loop bound `n = a`.
    pub n_equals_a: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeReport {
    pub p: u64,
    pub types: usize,
    pub spine: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub gramgross: Vec<GramGrossObservation>,
    /// Number of minimal rank-2 sublattices of the j = 0 type, if any.
    pub j0_rank2_count: Option<usize>,
}

impl PrimeReport {
    fn check(&mut self, rule: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                rule: rule.to_string(),
                detail: detail(),
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCheck {
    pub label: &'static str,
    pub d: u64,
    pub p_max: u64,
    pub expected: u64,
    pub computed: Option<u64>,
    /// Primes where an applicable closed form disagreed with the lattice.
    pub closed_form_mismatches: Vec<u64>,
}

impl CmCheck {
    pub fn passed(&self) -> bool {
        self.computed == Some(self.expected) && self.closed_form_mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub primes: Vec<PrimeReport>,
    pub cm: Vec<CmCheck>,
}

impl VerifyReport {
    pub fn failure_count(&self) -> usize {
        self.primes.iter().map(|p| p.failures.len()).sum::<usize>()
            + self.cm.iter().filter(|c| !c.passed()).count()
    }

    pub fn check_count(&self) -> usize {
        self.primes.iter().map(|p| p.checks).sum::<usize>() + self.cm.len()
    }

    pub fn to_json(&self) -> Value {
        let obs: Vec<_> = self
            .primes
            .iter()
            .flat_map(|r| r.gramgross.iter().map(move |o| (r.p, o)))
            .collect();
        let multi: Vec<Value> = obs
            .iter()
            .filter(|(_, o)| o.outputs > 1)
            .map(|(p, o)| json!({"p": p, "d1": big(&o.d1), "outputs": o.outputs}))
            .collect();
        let n_a = obs.iter().filter(|(_, o)| o.n_equals_a).count();
        json!({
            "schema": 1,
            "pmin": self.options.pmin,
            "pmax": self.options.pmax,
            "summary": {
                "primes": self.primes.len(),
                "checks": self.check_count(),
                "failures": self.failure_count(),
            },
            "primes": self.primes.iter().map(|r| json!({
                "p": r.p,
                "types": r.types,
                "spine": r.spine,
                "checks": r.checks,
                "failures": r.failures.iter().map(|f| json!({"rule": f.rule, "detail": f.detail})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "gramgross": {
                "spine_types": obs.len(),
                "multiple_outputs": multi,
                "n_equals_a": n_a,
            },
            "j0_rank2_counts": self.primes.iter().filter_map(|r| r.j0_rank2_count.map(|c| json!({"p": r.p, "count": c}))).collect::<Vec<_>>(),
            "cm": self.cm.iter().map(|c| json!({
                "label": c.label,
                "d": c.d,
                "p_max": c.p_max,
                "expected_n_e": c.expected,
                "computed_n_e": c.computed,
                "closed_form_mismatches": c.closed_form_mismatches,
                "passed": c.passed(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn residue_0_3(n: &BigInt) -> bool {
    let r = n.mod_floor(&BigInt::from(4));
    r.is_zero() || r == BigInt::from(3)
}

fn check_type(r: &mut PrimeReport, p: u64, t: &TypeRecord) -> Result<()> {
    let pb = BigInt::from(p);
    let four_p = BigInt::from(4) * &pb;
    let g = t.gram();
    let m = t.minima();
    let tag = m.to_string();
    let spine = t.classification.spine;

    let order_ok = t.order.check_invariants().is_ok() && t.order.reduced_discriminant()? == pb;
    r.check("order_invariants", order_ok, || tag.clone());
    r.check("det_4p2", g.det() == &four_p * &pb, || tag.clone());
    r.check(
        "gross_det_4p2",
        t.gross.gram().det() == &four_p * &pb,
        || tag.clone(),
    );

    let bad_norm = short_vectors(g, &(BigInt::from(2) * &pb))?
        .into_iter()
        .find(|v| !residue_0_3(&v.norm));
    r.check("norm_residues", bad_norm.is_none(), || {
        format!("{tag}: {bad_norm:?}")
    });

    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = rank2_det(g, i, j);
        r.check(
            "rank2_multiple_4p",
            d.is_positive() && d.is_multiple_of(&four_p),
            || format!("{tag}: minor ({i},{j}) = {d}"),
        );
    }
    r.check(
        "minor12_4p_iff_spine",
        (rank2_det(g, 0, 1) == four_p) == spine,
        || tag.clone(),
    );

    let prod = m.product();
    let p2 = &pb * &pb;
    r.check(
        "hermite_product",
        prod >= BigInt::from(4) * &p2 && prod <= BigInt::from(8) * &p2,
        || tag.clone(),
    );
    if spine {
        r.check(
            "first_minimum_bound",
            BigInt::from(3) * &m.d1 * &m.d1 <= BigInt::from(16) * &pb,
            || tag.clone(),
        );
    }

    let (x, y, z) = (&g[(0, 1)], &g[(0, 2)], &g[(1, 2)]);
    let two = BigInt::from(2);
    let normalized = !x.is_negative()
        && !y.is_negative()
        && &two * x <= m.d1
        && &two * y <= m.d1
        && &two * z.abs() <= m.d2;
    r.check("normalized_bounds", normalized, || format!("{tag}: {g}"));
    r.check(
        "size_reduced",
        orthogonalization(g).is_size_reduced(),
        || format!("{tag}: {g}"),
    );

    for rule in validate_bounds(p, m, spine) {
        r.check(rule.id(), false, || tag.clone());
    }
    r.checks += 1;

    let c = &t.classification;
    if p == 2 {
        r.check("structural_flags", c.well_rounded && !c.orthogonal, || {
            tag.clone()
        });
    } else {
        r.check("structural_flags", !c.well_rounded && !c.orthogonal, || {
            tag.clone()
        });
    }

    r.check(
        "minima_brute_force",
        &successive_minima(t.gross.gram())? == m,
        || tag.clone(),
    );

    let small = embedded_discriminants(g, &BigInt::from(8))?;
    let loop_disc = [4, 7, 8].iter().any(|d| small.contains(&BigInt::from(*d)));
    r.check("loop_implies_spine", !loop_disc || spine, || tag.clone());

    if spine && p != 3 {
        let desc = minimal_basis_of_gram(t.gross.gram(), TieBreak::LexDescending)?;
        r.check("gram_unique_tiebreak", &desc.gram == g, || {
            format!("{tag}: {} vs {}", desc.gram, g)
        });
        if t.basis.sign_choice_free {
            r.check("sign_free_means_z_zero", z.is_zero(), || {
                format!("{tag}: {g}")
            });
        }
    }
    if spine && p > 3 {
        let subs = minimal_rank2_sublattices(g)?.len();
        if c.special_j.has_j0() {
            r.j0_rank2_count = Some(subs);
        } else {
            r.check("rank2_sublattice_unique", subs == 1, || {
                format!("{tag}: {subs} sublattices")
            });
        }
    }

    if spine {
        let d1 = m.d1.clone();
        let d1u = u64::try_from(&d1).unwrap_or(u64::MAX);
        match gram_gross(p, d1u) {
            Ok(cands) => {
                let hit = cands.iter().find(|cand| &cand.gram() == g);
                r.check("gramgross_contains", hit.is_some(), || {
                    format!("{tag}: {g}")
                });
                for cand in &cands {
                    let v = cand.violations(p);
                    r.check("gramgross_sound", v.is_empty(), || {
                        format!("{}: {v:?}", cand.gram())
                    });
                }
                let (a, _) = loop_bounds(p, d1u);
                r.gramgross.push(GramGrossObservation {
                    d1,
                    outputs: cands.len(),
                    n_equals_a: hit.is_some_and(|h| h.n == a),
                });
            }
            Err(e) => r.check("gramgross_contains", false, || format!("{tag}: {e}")),
        }
    }
    Ok(())
}

fn closed_form_hit(types: &[TypeRecord], family: ClosedFormFamily, p: u64) -> Result<Option<bool>> {
    if !family.applies(p) {
        return Ok(None);
    }
    let want = family.gram(p)?;
    let found = match family {
        ClosedFormFamily::J0 => types
            .iter()
            .filter(|t| t.classification.special_j.has_j0())
            .any(|t| t.gram() == &want),
        ClosedFormFamily::J1728 => types
            .iter()
            .filter(|t| t.classification.special_j.has_j1728())
            .any(|t| t.gram() == &want),
        ClosedFormFamily::MinusFifteenCubed => {
            let hits = types_embedding(types, 7)?;
            hits.len() == 1 && hits[0].gram() == &want
        }
        ClosedFormFamily::Disc20 => types
            .iter()
            .any(|t| !t.classification.spine && t.gram() == &want),
    };
    Ok(Some(found))
}

/// The two sign variants allowed at `p = 3`.
pub fn p3_grams() -> [IntMatrix; 2] {
    [
        IntMatrix::from_i64(&[[3, 0, 0], [0, 4, 2], [0, 2, 4]]),
        IntMatrix::from_i64(&[[3, 0, 0], [0, 4, -2], [0, -2, 4]]),
    ]
}

fn alternate_ell(p: u64) -> u64 {
    (2..)
        .find(|&l| is_prime(l) && l != p && l != default_ell(p))
        .expect("primes are infinite")
}

/// All checks for one prime.
pub fn check_prime(p: u64, catalog: &TypeCatalog, opts: &VerifyOptions) -> Result<PrimeReport> {
    let types = catalog.get(p)?;
    let mut r = PrimeReport {
        p,
        types: types.len(),
        spine: types.iter().filter(|t| t.classification.spine).count(),
        ..PrimeReport::default()
    };
    for t in types.iter() {
        check_type(&mut r, p, t)?;
    }
    let (n_types, n_spine) = (r.types, r.spine);

    let j0 = types
        .iter()
        .filter(|t| t.classification.special_j.has_j0())
        .count();
    let j1728 = types
        .iter()
        .filter(|t| t.classification.special_j.has_j1728())
        .count();
    let want_j0 = usize::from(p % 3 == 2 || p == 3);
    let want_j1728 = usize::from(p % 4 == 3 || p == 2);
    r.check(
        "special_j_counts",
        j0 == want_j0 && j1728 == want_j1728,
        || format!("j0 types {j0}, j1728 types {j1728}"),
    );
    if p % 4 == 3 {
        let labelled = types
            .iter()
            .filter(|t| t.classification.embedding != Embedding::NotApplicable)
            .count();
        r.check("embedding_partition", labelled == n_spine, || {
            format!("{labelled} vs {n_spine}")
        });
    }

    if p <= opts.oracle_cap {
        let ss = supersingular_j_set(p)?;
        r.check("oracle_orbits", ss.orbit_count == n_types, || {
            format!("oracle {} vs types {n_types}", ss.orbit_count)
        });
        r.check("oracle_spine", ss.spine_count == n_spine, || {
            format!("oracle {} vs lattice {n_spine}", ss.spine_count)
        });
        let has = |j: u64| ss.j_list.iter().any(|x| x.b == 0 && x.a == j % p);
        r.check(
            "oracle_special_j",
            has(0) == (want_j0 == 1) && has(1728) == (want_j1728 == 1),
            || "j = 0 / 1728 presence".into(),
        );
    }

    if p <= opts.ell_check_cap {
        let alt: Vec<_> = enumerate_types(p, alternate_ell(p))?
            .into_iter()
            .map(|t| t.minima().clone())
            .collect();
        let base: Vec<_> = types.iter().map(|t| t.minima().clone()).collect();
        r.check("ell_independence", alt == base, || {
            format!("{alt:?} vs {base:?}")
        });
    }

    for family in [
        ClosedFormFamily::J0,
        ClosedFormFamily::J1728,
        ClosedFormFamily::MinusFifteenCubed,
        ClosedFormFamily::Disc20,
    ] {
        if let Some(ok) = closed_form_hit(&types, family, p)? {
            r.check("closed_form", ok, || format!("{family:?}"));
        }
    }
    if p == 3 {
        let ok = types.len() == 1 && p3_grams().contains(types[0].gram());
        r.check("closed_form", ok, || "p = 3 sign variants".into());
    }
    Ok(r)
}

/// N_E rows checked for this run.
pub fn cm_rows_in_scope(opts: &VerifyOptions) -> Vec<(&'static crate::cm::CmRow, u64)> {
    cm_rows()
        .iter()
        .filter_map(|row| {
            let floor = ((row.d + 1) * (row.d + 1)).div_ceil(4);
            if EXTENDED_CM_D.contains(&row.d) {
                opts.extended_cm.then_some((row, opts.pmax.max(floor)))
            } else {
                (opts.pmin <= 5 && opts.pmax >= floor).then_some((row, opts.pmax))
            }
        })
        .collect()
}

pub fn verify(opts: &VerifyOptions, catalog: &TypeCatalog) -> Result<VerifyReport> {
    let primes: Vec<u64> = (opts.pmin..=opts.pmax).filter(|&p| is_prime(p)).collect();
    let reports = primes
        .par_iter()
        .map(|&p| check_prime(p, catalog, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut cm = Vec::new();
    for (row, p_max) in cm_rows_in_scope(opts) {
        let rep = recompute_ne(row, p_max, catalog)?;
        cm.push(CmCheck {
            label: row.label,
            d: row.d,
            p_max,
            expected: row.n_e,
            computed: rep.n_e,
            closed_form_mismatches: rep
                .points
                .iter()
                .filter(|pt| pt.matches_closed_form == Some(false))
                .map(|pt| pt.p)
                .collect(),
        });
    }
    Ok(VerifyReport {
        options: opts.clone(),
        primes: reports,
        cm,
    })
}

/// Rule identifiers that failed anywhere in the report.
pub fn failed_rules(report: &VerifyReport) -> BTreeSet<String> {
    report
        .primes
        .iter()
        .flat_map(|p| p.failures.iter().map(|f| f.rule.clone()))
        .collect()
}
