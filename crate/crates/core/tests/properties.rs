use std::sync::Arc;

use detrec::binet::precision::{abs, to_f64};
use detrec::binet::{asymptotic_form, binet_fit, resistance_exact, Precision};
use detrec::cli::pipeline::graph_sizes;
use detrec::expansion::{laplace_expand, ExpandConfig};
use detrec::families::{bapat_handles, builtin, families_equal, FamilyHandle, LAPLACIAN_BUILTINS};
use detrec::linalg::{det_fraction_free, IntMatrix};
use detrec::oracle::{check_identities, resistance_solve};
use detrec::recurrence::{
    fits_order, hankel_minimal_recurrence, minimal_recurrence_of, oracle_sequence,
};
use detrec::reduction::{solve_identity_system, system_reduce_traced, DEFAULT_SUPPORT_CAP};
use detrec::{CharPoly, Sequence, ShiftPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn arb_poly(max_deg: usize) -> impl Strategy<Value = ShiftPoly> {
    prop::collection::vec(-6i64..=6, 0..=max_deg + 1).prop_map(|c| ShiftPoly::from_i64s(&c))
}

fn arb_nonzero(max_deg: usize) -> impl Strategy<Value = ShiftPoly> {
    arb_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_sequence(len: usize) -> impl Strategy<Value = Sequence> {
    (-3i64..5, prop::collection::vec(-50i64..50, len))
        .prop_map(|(start, v)| Sequence::new(start, v.into_iter().map(BigInt::from).collect()))
}

/// The recurrence `c` run forward from `init`.
fn generate(c: &ShiftPoly, init: &[i64], len: usize) -> Sequence {
    let d = c.degree().unwrap();
    let mut v: Vec<BigInt> = init.iter().map(|&x| BigInt::from(x)).collect();
    while v.len() < len {
        let n = v.len();
        let s: BigInt = (1..=d).map(|k| c.coeff(k) * &v[n - k]).sum();
        v.push(-s);
    }
    Sequence::new(0, v)
}

fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    (0..n)
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            BigInt::from(sign * m[0][j]) * cofactor_det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bareiss_matches_cofactor(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 6), 6)) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(det_fraction_free(big), cofactor_det(&rows));
        prop_assert_eq!(IntMatrix::from_rows(&rows).det(), cofactor_det(&rows));
    }
}

fn builtin_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(LAPLACIAN_BUILTINS.to_vec())
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(5), b in arb_poly(5), c in arb_poly(5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &ShiftPoly::zero(), a.clone());
        prop_assert_eq!(&a * &ShiftPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_is_divisible(p in arb_nonzero(4), q in arb_poly(4)) {
        let pq = &p * &q;
        prop_assert_eq!(p.divides(&pq).unwrap(), Some(q));
    }

    #[test]
    fn gcd_divides_both(p in arb_nonzero(4), q in arb_nonzero(4), r in arb_nonzero(2)) {
        let a = &p * &r;
        let b = &q * &r;
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a).unwrap().is_some());
        prop_assert!(g.divides(&b).unwrap().is_some());
        prop_assert!(r.normalized().divides(&g).unwrap().is_some());
    }

    #[test]
    fn operator_composition(p in arb_nonzero(3), q in arb_nonzero(3), s in arb_sequence(20)) {
        let lhs = (&p * &q).apply_all(&s);
        let rhs = p.apply_all(&q.apply_all(&s));
        for n in lhs.indices() {
            prop_assert_eq!(lhs.get(n), rhs.get(n));
        }
    }

    #[test]
    fn char_and_text_round_trip(p in arb_nonzero(6)) {
        prop_assume!(!p.coeff(0).is_zero());
        prop_assert_eq!(ShiftPoly::from_char(&p.to_char()).normalized(), p.normalized());
        prop_assert_eq!(p.to_string().parse::<ShiftPoly>().unwrap(), p.clone());
        let c = p.to_char();
        prop_assert_eq!(c.to_string().parse::<CharPoly>().unwrap(), c);
    }

    #[test]
    fn laplacian_rows_sum_to_zero(name in builtin_name(), n in 3usize..25) {
        let spec = builtin(name).unwrap();
        let sizes = graph_sizes(&spec, 30);
        let n = *sizes.iter().find(|&&s| s >= n).unwrap();
        let l = spec.instantiate(n).unwrap();
        prop_assert!(l.is_symmetric());
        for r in 0..n {
            prop_assert_eq!(l.row(r).iter().sum::<i64>(), 0, "row {} of {} at n={}", r, name, n);
        }
    }

    #[test]
    fn derived_is_minor_of_parent(name in builtin_name(), row in 1usize..4, col in 1usize..4, n in 6usize..14) {
        let spec = Arc::new(builtin(name).unwrap());
        let (num, _) = bapat_handles(&spec, spec.denominator);
        let parent = Arc::new(num);
        let child = FamilyHandle::derived(&parent, row, col);
        let n = n.max(child.min_size());
        let direct = child.instantiate(n).unwrap();
        let via = parent.instantiate(n + 1).unwrap().minor(&[row - 1], &[col - 1]);
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn families_equal_is_reflexive_and_symmetric(name in builtin_name(), a in 1usize..4, b in 1usize..4) {
        let spec = Arc::new(builtin(name).unwrap());
        let (num, _) = bapat_handles(&spec, spec.denominator);
        let parent = Arc::new(num);
        let x = FamilyHandle::derived(&parent, 1, a);
        let y = FamilyHandle::derived(&parent, b, 1);
        let ms = x.min_size().max(y.min_size()).max(spec.min_size);
        prop_assert!(families_equal(&x, &x, ms));
        prop_assert_eq!(families_equal(&x, &y, ms), families_equal(&y, &x, ms));
    }

    #[test]
    fn hankel_finds_the_generating_recurrence(
        c in prop::collection::vec(-4i64..=4, 1..=4),
        init in prop::collection::vec(-9i64..=9, 4),
    ) {
        let mut coeffs = vec![1];
        coeffs.extend(&c);
        let op = ShiftPoly::from_i64s(&coeffs);
        let d = op.degree().unwrap();
        prop_assume!(d >= 1);
        let seq = generate(&op, &init[..d], 3 * d + 12);
        prop_assume!(seq.values.iter().any(|x| !x.is_zero()));
        let found = hankel_minimal_recurrence(&seq).unwrap();
        prop_assert!(found.divides(&op).unwrap().is_some(), "{} does not divide {}", found, op);
        prop_assert!(found.apply_all(&seq).values.iter().all(|x| x.is_zero()));
        let k = found.degree().unwrap();
        prop_assert!(k == 0 || fits_order(&seq, k - 1).is_none());
    }

    #[test]
    fn resistance_is_a_metric(name in builtin_name(), n in 5usize..16, i in 1usize..16, j in 1usize..16, k in 1usize..16) {
        let spec = builtin(name).unwrap();
        let sizes = graph_sizes(&spec, 30);
        let n = *sizes.iter().find(|&&s| s >= n).unwrap();
        let (i, j, k) = (1 + (i - 1) % n, 1 + (j - 1) % n, 1 + (k - 1) % n);
        prop_assume!(i != j && j != k && i != k);
        let r = |a, b| resistance_solve(&spec, n, a, b).unwrap();
        prop_assert_eq!(r(i, j), r(j, i));
        prop_assert!(r(i, j) <= &r(i, k) + &r(k, j));
        prop_assert!(r(i, j) > BigRational::zero());
    }

    #[test]
    fn determinant_ratio_is_linear_solve(name in builtin_name(), n in 3usize..=30) {
        let spec = builtin(name).unwrap();
        let sizes = graph_sizes(&spec, 30);
        prop_assume!(sizes.contains(&n));
        prop_assert_eq!(resistance_exact(&spec, n).unwrap(), resistance_solve(&spec, n, 1, n).unwrap());
    }
}

#[test]
fn ledger_and_reduction_steps_are_sound() {
    for name in ["ladder", "linear2tree", "fan", "path"] {
        let spec = Arc::new(builtin(name).unwrap());
        let (num, den) = bapat_handles(&spec, spec.denominator);
        for h in [num, den] {
            let ms = spec.min_size;
            let e = laplace_expand(&h, &ExpandConfig::new(ms)).unwrap();
            let q = e.identity_system();
            let sizes: Vec<usize> = (ms + 1..=ms + 6).collect();
            assert!(
                check_identities(&e.families, &q.q, &sizes)
                    .unwrap()
                    .is_empty(),
                "{}",
                h.label()
            );
            system_reduce_traced(&q, |st| {
                let d = st
                    .system
                    .iter()
                    .flatten()
                    .filter_map(ShiftPoly::degree)
                    .max()
                    .unwrap_or(1);
                let sizes: Vec<usize> = (ms + d..ms + d + 6).collect();
                let bad = check_identities(&e.families, st.system, &sizes).unwrap();
                assert!(
                    bad.is_empty(),
                    "{} step {}: {:?}",
                    h.label(),
                    st.k,
                    bad.first()
                );
            });
        }
    }
}

#[test]
fn binet_fit_reproduces_exact_terms() {
    let p = Precision::new(50);
    for name in ["path", "linear2tree", "fan", "ladder", "linear3tree"] {
        let spec = Arc::new(builtin(name).unwrap());
        let (num, _) = bapat_handles(&spec, spec.denominator);
        let e = laplace_expand(&num, &ExpandConfig::new(spec.min_size)).unwrap();
        let a = solve_identity_system(
            &detrec::reduction::system_reduce(&e.identity_system()),
            DEFAULT_SUPPORT_CAP,
        )
        .unwrap();
        let (rec, _) = minimal_recurrence_of(&num, &a.normalized).unwrap();
        let v = rec.validity_index.max(num.min_size() as i64);
        let seq = oracle_sequence(&num, num.min_size(), v as usize + rec.degree() + 30).unwrap();
        let bf = binet_fit(&rec, &seq, p, 0).unwrap();
        for n in v..=v + 25 {
            let exact = p.int(seq.get(n).unwrap());
            let err = abs(&(bf.eval_real(n) - &exact));
            let scale = abs(&exact).max(p.one());
            assert!(err <= &scale * &p.tenth_pow(40), "{name} n={n}");
        }
    }
}

#[test]
fn doubling_precision_keeps_constants() {
    let spec = Arc::new(builtin("linear3tree").unwrap());
    let (num, den) = bapat_handles(&spec, spec.denominator);
    let mut constants = Vec::new();
    for digits in [50, 100] {
        let p = Precision::new(digits);
        let mut cs = Vec::new();
        for (h, shift) in [(&num, 8), (&den, 11)] {
            let e = laplace_expand(h, &ExpandConfig::new(spec.min_size)).unwrap();
            let a = solve_identity_system(
                &detrec::reduction::system_reduce(&e.identity_system()),
                DEFAULT_SUPPORT_CAP,
            )
            .unwrap();
            let (rec, _) = minimal_recurrence_of(h, &a.normalized).unwrap();
            let seq = oracle_sequence(
                h,
                h.min_size(),
                rec.validity_index as usize + rec.degree() + 30,
            )
            .unwrap();
            let asym = asymptotic_form(&binet_fit(&rec, &seq, p, shift).unwrap()).unwrap();
            cs.extend(asym.primed_coeffs().into_iter().flatten().map(|c| c.re));
            cs.push(asym.roots[0].value.re.clone());
        }
        constants.push(cs);
    }
    let p = Precision::new(50);
    for (a, b) in constants[0].iter().zip(&constants[1]) {
        let gap = abs(&(a - b));
        assert!(
            gap < p.tenth_pow(25),
            "constant {} moved by {}",
            to_f64(a),
            to_f64(&gap)
        );
    }
    assert!(constants[0].iter().all(|c| to_f64(c).is_finite()));
}
