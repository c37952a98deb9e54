//! Randomized invariants checked against independent brute-force oracles.

use grosslat::exact::{is_prime, rat, IntMatrix, Lattice};
use grosslat::gramgross::gram_gross;
use grosslat::lattice::{
    minimal_basis_of_gram, short_vectors, successive_minima, transform_gram, TieBreak,
};
use grosslat::oracle::{expected_count, supersingular_j_set};
use grosslat::{enumerate_types, QuaternionAlgebra, QuaternionElement, TypeCatalog};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn catalog() -> &'static TypeCatalog {
    static CATALOG: std::sync::OnceLock<TypeCatalog> = std::sync::OnceLock::new();
    CATALOG.get_or_init(TypeCatalog::new)
}

fn elem(alg: &std::sync::Arc<QuaternionAlgebra>, c: [i64; 4], den: i64) -> QuaternionElement {
    QuaternionElement::from_ints(alg, c, den)
}

fn unimodular() -> impl Strategy<Value = IntMatrix> {
    // Product of elementary row operations.
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6).prop_map(|ops| {
        let mut m = IntMatrix::identity(3);
        for (i, j, k) in ops {
            if i == j {
                continue;
            }
            for c in 0..3 {
                let add = &m[(j, c)] * k;
                m[(i, c)] += add;
            }
        }
        m
    })
}

fn brute_norms(gram: &IntMatrix, bound: i64, r: i64) -> Vec<(Vec<i64>, i64)> {
    let g = gram.to_i64_rows().unwrap();
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let v = [a, b, c];
                let first = v.iter().find(|&&x| x != 0);
                if first.is_none_or(|&x| x < 0) {
                    continue;
                }
                let n: i64 = (0..3)
                    .map(|i| (0..3).map(|j| v[i] * g[i][j] * v[j]).sum::<i64>())
                    .sum();
                if n <= bound {
                    out.push((v.to_vec(), n));
                }
            }
        }
    }
    out.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(a in 1i64..20, b in 1i64..20, x in prop::array::uniform4(-9i64..10), y in prop::array::uniform4(-9i64..10), d in 1i64..6) {
        let alg = QuaternionAlgebra::new(-a, -b, 2).unwrap();
        let (u, v) = (elem(&alg, x, d), elem(&alg, y, 1));
        prop_assert_eq!((&u * &v).nrd(), u.nrd() * v.nrd());
        prop_assert_eq!((&u * &v).conj(), &v.conj() * &u.conj());
        prop_assert_eq!(u.inner(&u), u.nrd());
    }

    #[test]
    fn lattice_ignores_generator_order(rows in prop::collection::vec(prop::array::uniform3(-6i64..7), 3..6), d in 1i64..5) {
        let gens: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x, d)).collect()).collect();
        let mut rev = gens.clone();
        rev.reverse();
        let l1 = Lattice::from_generators(&gens).unwrap();
        let l2 = Lattice::from_generators(&rev).unwrap();
        prop_assert_eq!(&l1, &l2);
        for g in &gens {
            prop_assert!(l1.contains(g).unwrap());
        }
    }

    #[test]
    fn short_vectors_match_brute_force(u in unimodular(), s in prop::array::uniform3(1i64..5)) {
        let diag = IntMatrix::from_i64(&[[s[0], 0, 0], [0, s[1], 0], [0, 0, s[2]]]);
        let gram = transform_gram(&diag, &u);
        let bound = 12;
        let got: Vec<(Vec<i64>, i64)> = short_vectors(&gram, &BigInt::from(bound))
            .unwrap()
            .into_iter()
            .map(|v| (v.coords.iter().map(|c| i64::try_from(c).unwrap()).collect(), i64::try_from(&v.norm).unwrap()))
            .collect();
        // Coefficient range covers the worst case for these small forms.
        let mut want = brute_norms(&gram, bound, 40);
        want.retain(|(_, n)| *n > 0);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn minima_are_basis_invariant(u in unimodular(), p in prop::sample::select(vec![19u64, 43, 67, 101])) {
        let types = catalog().get(p).unwrap();
        for t in types.iter() {
            let g = transform_gram(t.gram(), &u);
            prop_assert_eq!(&successive_minima(&g).unwrap(), t.minima());
            if t.classification.spine {
                let b = minimal_basis_of_gram(&g, TieBreak::LexAscending).unwrap();
                prop_assert_eq!(&b.gram, t.gram());
            }
        }
    }

    #[test]
    fn gram_gross_outputs_are_sound(idx in 0usize..40, d1 in 3u64..40) {
        let primes: Vec<u64> = (5..400).filter(|&p| is_prime(p)).collect();
        let p = primes[idx % primes.len()];
        prop_assume!(d1 % 4 == 0 || d1 % 4 == 3);
        prop_assume!(3 * d1 * d1 <= 16 * p);
        for c in gram_gross(p, d1).unwrap() {
            prop_assert!(c.violations(p).is_empty());
            prop_assert_eq!(c.gram().det(), BigInt::from(4 * p * p));
        }
    }

    #[test]
    fn oracle_count_formula(idx in 0usize..100) {
        let primes: Vec<u64> = (2..300).filter(|&p| is_prime(p)).collect();
        let p = primes[idx % primes.len()];
        prop_assert_eq!(supersingular_j_set(p).unwrap().count as u64, expected_count(p));
    }
}

#[test]
fn mass_formula_weights_types() {
    // Eichler mass formula over left ideal classes: the sum of 1/|O^x| is
    // (p-1)/24. Non-spine types stand for two classes. A norm-3 pair in the
    // Gross lattice adds four units of order 3 or 6, a norm-4 pair two of order 4.
    for p in (5..200).filter(|&p| is_prime(p)) {
        let types = enumerate_types(p, 2).unwrap();
        let mut mass = BigRational::from_integer(0.into());
        for t in types.iter() {
            let vs = short_vectors(t.gram(), &BigInt::from(4)).unwrap();
            let n3 = vs.iter().filter(|v| v.norm == BigInt::from(3)).count() as i64;
            let n4 = vs.iter().filter(|v| v.norm == BigInt::from(4)).count() as i64;
            let units = 2 * (1 + 2 * n3 + n4);
            let classes = if t.classification.spine { 1 } else { 2 };
            mass += rat(classes, units);
        }
        assert_eq!(mass, rat(p as i64 - 1, 24), "p = {p}");
    }
}
