//! Random-instance checks of normalization against naive dense arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use hironaka::rewrite::{cofactors, normalize_with, reduce_step, reducible_monomials};
use hironaka::Strategy as Redex;
use hironaka::{Monomial, MonomialOrder, Precision, RuleSet, TruncatedSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

type Poly = BTreeMap<Vec<u32>, BigRational>;

fn to_poly(s: &TruncatedSeries) -> Poly {
    s.terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
        .collect()
}

fn add_into(acc: &mut Poly, m: Vec<u32>, c: BigRational) {
    let e = acc.entry(m).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        acc.retain(|_, v| !v.is_zero());
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_into(&mut out, m, ca * cb);
        }
    }
    out
}

fn deg(m: &[u32]) -> u64 {
    m.iter().map(|&e| u64::from(e)).sum()
}

/// Degree first, then the first differing exponent; larger exponent is larger.
fn deglex(a: &[u32], b: &[u32]) -> Ordering {
    deg(a).cmp(&deg(b)).then_with(|| {
        a.iter()
            .zip(b)
            .find(|(x, y)| x != y)
            .map_or(Ordering::Equal, |(x, y)| x.cmp(y))
    })
}

fn series_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, nvars),
            -4i64..=4,
            1i64..=3,
        ),
        1..5,
    )
    .prop_map(move |terms| {
        let terms = terms.into_iter().map(|(e, n, d)| {
            (
                Monomial::new(e),
                BigRational::new(BigInt::from(n), BigInt::from(d)),
            )
        });
        TruncatedSeries::new(nvars, terms, Precision::Exact).unwrap()
    })
}

#[derive(Debug, Clone)]
struct Instance {
    f: TruncatedSeries,
    rules: RuleSet,
    prec: u64,
    seed: Option<u64>,
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=3).prop_flat_map(|n| {
        (
            series_strategy(n, 3),
            prop::collection::vec(
                series_strategy(n, 2).prop_filter("nonzero", |s| !s.is_known_zero()),
                1..=3,
            ),
            1u64..=6,
            prop::option::of(any::<u64>()),
        )
            .prop_map(move |(f, bodies, prec, seed)| Instance {
                f,
                rules: RuleSet::new(n, MonomialOrder::DegLex, bodies).unwrap(),
                prec,
                seed,
            })
    })
}

fn strategy_of(seed: Option<u64>) -> Redex {
    seed.map_or(Redex::Canonical, Redex::Seeded)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cofactor_identity_below_end_precision(inst in instance()) {
        let trace = normalize_with(&inst.f, &inst.rules, inst.prec, strategy_of(inst.seed)).unwrap();
        let q = cofactors(&trace, &inst.rules).unwrap();
        let mut residual = to_poly(&trace.start);
        for (m, c) in to_poly(&trace.end) {
            add_into(&mut residual, m, -c);
        }
        for ((_, rule), qi) in inst.rules.iter().zip(&q) {
            for (m, c) in poly_mul(&to_poly(qi), &to_poly(rule.body())) {
                add_into(&mut residual, m, -c);
            }
        }
        let end = trace.end_precision();
        for m in residual.keys() {
            prop_assert!(!end.admits(deg(m)), "residual term {:?} below {}", m, end);
        }
    }

    #[test]
    fn reduced_monomials_strictly_increase(inst in instance()) {
        let trace = normalize_with(&inst.f, &inst.rules, inst.prec, Redex::Canonical).unwrap();
        for w in trace.steps.windows(2) {
            prop_assert_eq!(
                deglex(w[0].monomial.exponents(), w[1].monomial.exponents()),
                Ordering::Less
            );
        }
    }

    #[test]
    fn end_is_irreducible_and_precise(inst in instance()) {
        let trace = normalize_with(&inst.f, &inst.rules, inst.prec, strategy_of(inst.seed)).unwrap();
        prop_assert!(reducible_monomials(&trace.end, &inst.rules).is_empty());
        prop_assert!(trace.end_precision() >= Precision::Finite(inst.prec));
        trace.validate(&inst.rules).unwrap();
    }

    #[test]
    fn one_step_is_attracted_to_the_normal_form(inst in instance(), pick in any::<prop::sample::Index>()) {
        let alpha = normalize_with(&inst.f, &inst.rules, inst.prec, Redex::Canonical).unwrap().end;
        let redexes = reducible_monomials(&inst.f, &inst.rules);
        prop_assume!(!redexes.is_empty());
        let m = pick.get(&redexes);
        let rule = inst.rules.applicable(m)[0];
        let (g, _) = reduce_step(&inst.f, &inst.rules, m, rule).unwrap();
        let before = inst.f.delta(&alpha).unwrap();
        let after = g.delta(&alpha).unwrap();
        prop_assert!(after.value <= before.value);
    }

    #[test]
    fn delta_is_two_to_minus_degree_of_least_monomial(
        (f, g) in (1usize..=3).prop_flat_map(|n| (series_strategy(n, 4), series_strategy(n, 4)))
    ) {
        let mut diff = to_poly(&f);
        for (m, c) in to_poly(&g) {
            add_into(&mut diff, m, -c);
        }
        prop_assume!(!diff.is_empty());
        let lm = diff.keys().min_by(|a, b| deglex(a, b)).unwrap();
        let expected = BigRational::new(BigInt::one(), BigInt::from(2).pow(deg(lm) as u32));
        let d = f.delta(&g).unwrap();
        prop_assert!(!d.upper_bound);
        prop_assert_eq!(d.value, expected);
    }
}

#[test]
fn geometric_cofactor_matches_naive_product() {
    let n = 2;
    let y = |a| Monomial::var(n, 1, a);
    let body = TruncatedSeries::new(
        n,
        [(y(1), BigRational::one()), (y(2), -BigRational::one())],
        Precision::Exact,
    )
    .unwrap();
    let rules = RuleSet::new(n, MonomialOrder::DegLex, vec![body.clone()]).unwrap();
    let f = TruncatedSeries::term(BigRational::one(), y(1));
    let trace = normalize_with(&f, &rules, 8, Redex::Canonical).unwrap();
    assert_eq!(trace.steps.len(), 7);
    let q = cofactors(&trace, &rules).unwrap();
    let product = poly_mul(&to_poly(&q[0]), &to_poly(&body));
    let expected: Poly = [
        (vec![0, 1], BigRational::one()),
        (vec![0, 8], -BigRational::one()),
    ]
    .into_iter()
    .collect();
    assert_eq!(product, expected);
}
