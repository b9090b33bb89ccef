//! Decision procedures and probes built on normalization: congruence modulo
//! the ideal, standard-basis falsification, confluence and attractivity checks.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    choose_redex, cofactors, normalize, normalize_with, reduce_step, reducible_monomials,
    run_normalization, PrecisionMode, RuleIndex, RuleSet, Strategy,
};
use crate::error::{check_dims, Error, Result};
use crate::monomial::Monomial;
use crate::series::{inverse_power_of_two, Delta, Precision, TruncatedSeries};

/// Outcome of a congruence test `f ≡ g mod I(R)` up to a precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// `f - g - sum q_i s_i` vanishes below the working precision.
    Member { cofactors: Vec<TruncatedSeries> },
    /// `f - g` has a nonzero normal form; only emitted when the caller
    /// asserts that the rules form a standard basis.
    NotMember {
        normal_form_witness: TruncatedSeries,
    },
    /// Nonzero residual without the standard-basis assumption.
    UnknownAtPrecision { residual: TruncatedSeries },
}

/// Decides `f ≡ g` modulo the ideal generated by `rules`, below `precision`.
pub fn congruence_test(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    rules: &RuleSet,
    precision: u64,
    assume_standard_basis: bool,
) -> Result<MembershipVerdict> {
    check_dims(rules.nvars(), f.nvars())?;
    let trace = normalize(&f.sub(g)?, rules, precision)?;
    if trace.end.is_known_zero() {
        return Ok(MembershipVerdict::Member {
            cofactors: cofactors(&trace, rules)?,
        });
    }
    Ok(if assume_standard_basis {
        MembershipVerdict::NotMember {
            normal_form_witness: trace.end,
        }
    } else {
        MembershipVerdict::UnknownAtPrecision {
            residual: trace.end,
        }
    })
}

/// Where a falsification certificate came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    /// The combination cancelling the leading terms of two rules.
    Pairwise(RuleIndex, RuleIndex),
    /// A seeded random combination.
    RandomTrial(u64),
}

/// An element `sum q_i s_i` of the ideal whose normal form is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub source: CertificateSource,
    pub multipliers: Vec<TruncatedSeries>,
    pub combination: TruncatedSeries,
    pub normal_form: TruncatedSeries,
}

/// Total degree bound (exclusive) for random multipliers.
const MULTIPLIER_DEGREE_BOUND: u32 = 3;
const MULTIPLIER_MAX_TERMS: usize = 3;
const MULTIPLIER_COEFF_RANGE: i64 = 3;

fn combine(rules: &RuleSet, multipliers: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(rules.nvars());
    for ((_, rule), q) in rules.iter().zip(multipliers) {
        if !q.is_known_zero() {
            acc = acc.add(&q.mul(rule.body())?)?;
        }
    }
    Ok(acc)
}

fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::new(
        a.exponents()
            .iter()
            .zip(b.exponents())
            .map(|(x, y)| *x.max(y))
            .collect(),
    )
}

fn random_multiplier(rng: &mut ChaCha8Rng, pool: &[Monomial], nvars: usize) -> TruncatedSeries {
    let nterms = rng.gen_range(0..=MULTIPLIER_MAX_TERMS);
    let terms = (0..nterms).map(|_| {
        let m = pool.choose(rng).expect("nonempty pool").clone();
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-MULTIPLIER_COEFF_RANGE..=MULTIPLIER_COEFF_RANGE);
        }
        (m, BigRational::from_integer(c.into()))
    });
    TruncatedSeries::new(nvars, terms, Precision::Exact).expect("dimensions agree")
}

/// Searches for an ideal element with a nonzero normal form, which proves
/// `rules` is not a standard basis of the ideal it generates.
///
/// Every pairwise leading-term cancellation is tried first, then `trials`
/// random combinations. Trial `k` draws from its own ChaCha stream of
/// `seed`, so results do not depend on evaluation order. `None` is
/// inconclusive.
pub fn falsify_standard_basis(
    rules: &RuleSet,
    precision: u64,
    trials: u64,
    seed: u64,
) -> Option<Certificate> {
    let nvars = rules.nvars();
    let check = |source: CertificateSource, multipliers: Vec<TruncatedSeries>| {
        let combination = combine(rules, &multipliers).expect("rule dimensions agree");
        if combination.is_known_zero() {
            return None;
        }
        let trace = run_normalization(
            &combination,
            rules,
            precision,
            Strategy::Canonical,
            PrecisionMode::Capped,
        )
        .expect("canonical capped normalization cannot fail");
        (!trace.end.is_known_zero()).then_some(Certificate {
            source,
            multipliers,
            combination,
            normal_form: trace.end,
        })
    };

    for (i, ri) in rules.iter() {
        for (j, rj) in rules.iter().filter(|(j, _)| *j > i) {
            let l = lcm(ri.leading_monomial(), rj.leading_monomial());
            let mut multipliers = vec![TruncatedSeries::zero(nvars); rules.len()];
            let qi = ri.leading_monomial().divides_same_dim(&l).expect("lcm");
            let qj = rj.leading_monomial().divides_same_dim(&l).expect("lcm");
            multipliers[i.position()] =
                TruncatedSeries::term(BigRational::one() / ri.leading_coefficient(), qi);
            multipliers[j.position()] =
                TruncatedSeries::term(-BigRational::one() / rj.leading_coefficient(), qj);
            if let Some(cert) = check(CertificateSource::Pairwise(i, j), multipliers) {
                return Some(cert);
            }
        }
    }

    if rules.is_empty() {
        return None;
    }
    let pool = Monomial::below_degree(nvars, MULTIPLIER_DEGREE_BOUND);
    (0..trials).find_map(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let multipliers = (0..rules.len())
            .map(|_| random_multiplier(&mut rng, &pool, nvars))
            .collect();
        check(CertificateSource::RandomTrial(trial), multipliers)
    })
}

/// Normal forms reached by several randomized strategies and their pairwise
/// distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub precision: u64,
    /// `(seed, normal form)` per strategy, in input order.
    pub results: Vec<(u64, TruncatedSeries)>,
    /// `(a, b, δ(results[a], results[b]))` for every `a < b`.
    pub distances: Vec<(usize, usize, Delta)>,
}

impl ProbeReport {
    /// A pair of strategies whose normal forms differ below the precision.
    pub fn divergence(&self) -> Option<&(usize, usize, Delta)> {
        let bound = inverse_power_of_two(self.precision);
        self.distances.iter().find(|(_, _, d)| d.value > bound)
    }

    pub fn max_distance(&self) -> BigRational {
        self.distances
            .iter()
            .map(|(_, _, d)| d.value.clone())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// Normalizes `f` once per seed with a uniformly random redex choice and
/// compares the resulting normal forms.
pub fn confluence_probe(
    f: &TruncatedSeries,
    rules: &RuleSet,
    precision: u64,
    seeds: &[u64],
) -> Result<ProbeReport> {
    if seeds.is_empty() {
        return Err(Error::PreconditionFailed("no strategy seeds given".into()));
    }
    let results = seeds
        .iter()
        .map(|&seed| {
            let t = normalize_with(f, rules, precision, Strategy::Seeded(seed))?;
            Ok((seed, t.end))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut distances = Vec::new();
    for a in 0..results.len() {
        for b in a + 1..results.len() {
            distances.push((a, b, results[a].1.delta(&results[b].1)?));
        }
    }
    Ok(ProbeReport {
        precision,
        results,
        distances,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractivityViolation {
    /// One-based index of the offending step.
    pub step: usize,
    pub before: Delta,
    pub after: Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractivityReport {
    pub steps_taken: usize,
    pub violation: Option<AttractivityViolation>,
}

impl AttractivityReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Runs up to `steps` one-step reductions from `f` and checks that none of
/// them increases the distance to the normal form `alpha`.
pub fn attractivity_check(
    f: &TruncatedSeries,
    rules: &RuleSet,
    alpha: &TruncatedSeries,
    steps: usize,
    strategy: Strategy,
) -> Result<AttractivityReport> {
    check_dims(rules.nvars(), f.nvars())?;
    check_dims(rules.nvars(), alpha.nvars())?;
    if let Some(m) = reducible_monomials(alpha, rules).first() {
        return Err(Error::PreconditionFailed(format!(
            "alpha is not a normal form: {m} is reducible"
        )));
    }
    let mut rng = strategy.rng();
    let mut h = f.clone();
    for k in 0..steps {
        let candidates = reducible_monomials(&h, rules);
        if candidates.is_empty() {
            return Ok(AttractivityReport {
                steps_taken: k,
                violation: None,
            });
        }
        let (m, i) = choose_redex(&candidates, rules, rng.as_mut());
        let (g, _) = reduce_step(&h, rules, &m, i)?;
        let before = h.delta(alpha)?;
        let after = g.delta(alpha)?;
        if after.value > before.value {
            return Ok(AttractivityReport {
                steps_taken: k + 1,
                violation: Some(AttractivityViolation {
                    step: k + 1,
                    before,
                    after,
                }),
            });
        }
        h = g;
    }
    Ok(AttractivityReport {
        steps_taken: steps,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    fn opposed_pair() -> RuleSet {
        rules(
            2,
            vec![
                poly(2, &[(1, &[1, 0]), (1, &[0, 1])]),
                poly(2, &[(1, &[1, 0]), (-1, &[0, 1])]),
            ],
        )
    }

    #[test]
    fn congruence_examples() {
        let r = geometric_rule();
        let yy = poly(2, &[(1, &[0, 1])]);
        let zero = TruncatedSeries::zero(2);
        match congruence_test(&yy, &zero, &r, 6, true).unwrap() {
            MembershipVerdict::Member { cofactors } => {
                let expected =
                    TruncatedSeries::new(2, (0..5).map(|k| (y(k), q(1, 1))), Precision::Exact)
                        .unwrap();
                assert_eq!(cofactors, vec![expected]);
            }
            other => panic!("expected Member, got {other:?}"),
        }
        match congruence_test(&yy, &yy, &r, 6, false).unwrap() {
            MembershipVerdict::Member { cofactors } => {
                assert!(cofactors.iter().all(TruncatedSeries::is_exact_zero))
            }
            other => panic!("expected Member, got {other:?}"),
        }
        let one = TruncatedSeries::one(2);
        assert_eq!(
            congruence_test(&one, &zero, &r, 6, true).unwrap(),
            MembershipVerdict::NotMember {
                normal_form_witness: one.clone()
            }
        );
        assert_eq!(
            congruence_test(&one, &zero, &r, 6, false).unwrap(),
            MembershipVerdict::UnknownAtPrecision { residual: one }
        );
    }

    #[test]
    fn falsifier_finds_pairwise_certificate() {
        let r = opposed_pair();
        let cert = falsify_standard_basis(&r, 4, 10, 7).unwrap();
        assert_eq!(cert.source, CertificateSource::Pairwise(ri(1), ri(2)));
        // (x + y) + (x - y) = 2x, and x is divisible by neither LM = y.
        assert_eq!(cert.combination, poly(2, &[(2, &[1, 0])]));
        assert_eq!(cert.normal_form, poly(2, &[(2, &[1, 0])]));
        assert!(reducible_monomials(&cert.normal_form, &r).is_empty());
    }

    #[test]
    fn falsifier_is_silent_on_principal_ideals() {
        assert!(falsify_standard_basis(&geometric_rule(), 6, 200, 1).is_none());
        assert!(falsify_standard_basis(&RuleSet::empty(2, Default::default()), 6, 10, 1).is_none());
    }

    #[test]
    fn falsifier_is_deterministic() {
        let r = rules(
            2,
            vec![
                poly(2, &[(1, &[2, 0]), (1, &[0, 3])]),
                poly(2, &[(1, &[1, 1]), (1, &[0, 4])]),
            ],
        );
        let a = falsify_standard_basis(&r, 8, 50, 3);
        let b = falsify_standard_basis(&r, 8, 50, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn probe_examples() {
        let r = geometric_rule();
        let rep = confluence_probe(&poly(2, &[(1, &[0, 1])]), &r, 5, &[1, 2, 3]).unwrap();
        assert!(rep.divergence().is_none());
        assert!(rep.max_distance() <= inverse_power_of_two(5));

        let r = opposed_pair();
        let f = poly(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        let rep = confluence_probe(&f, &r, 5, &(0..8).collect::<Vec<_>>()).unwrap();
        let (_, _, d) = rep.divergence().expect("the two rules disagree");
        assert_eq!(d.value, q(1, 2));

        let nf = TruncatedSeries::one(2);
        let rep = confluence_probe(&nf, &r, 5, &[4, 5]).unwrap();
        assert!(rep.results.iter().all(|(_, e)| e == &nf));
        assert!(rep.max_distance().is_zero());

        assert!(confluence_probe(&nf, &r, 5, &[]).is_err());
    }

    #[test]
    fn attractivity_examples() {
        let r = geometric_rule();
        let yy = poly(2, &[(1, &[0, 1])]);
        let zero = TruncatedSeries::zero(2);
        let rep = attractivity_check(&yy, &r, &zero, 6, Strategy::Canonical).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.steps_taken, 6);

        let alpha = TruncatedSeries::one(2);
        let rep = attractivity_check(&alpha, &r, &alpha, 3, Strategy::Canonical).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.steps_taken, 0);

        let rs = rules(2, vec![poly(2, &[(1, &[1, 0]), (1, &[0, 2])])]);
        let f = poly(2, &[(2, &[1, 0]), (1, &[0, 1])]);
        let not_normal = poly(2, &[(1, &[1, 0])]);
        assert!(matches!(
            attractivity_check(&f, &rs, &not_normal, 3, Strategy::Canonical),
            Err(Error::PreconditionFailed(_))
        ));
        let normal = poly(2, &[(1, &[0, 1]), (-2, &[0, 2])]);
        assert!(attractivity_check(&f, &rs, &normal, 3, Strategy::Seeded(9))
            .unwrap()
            .holds());
    }
}
