//! Rewriting on truncated formal power series modulo a finite rule set.
//!
//! A rule `s` with leading monomial `LM(s)` (minimum of its support) and
//! leading coefficient `LC(s)` rewrites any series `f` containing a monomial
//! `M = m * LM(s)`:
//!
//! ```text
//! f -> f - (<f|M> / LC(s)) * m * s
//! ```
//!
//! The step clears `M` and only touches monomials strictly above it. Chains of
//! such steps converge in the `2^(-val)` metric; every routine here computes a
//! finite prefix of such a chain, accurate below an explicit precision.

mod cofactor;
mod decide;

use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dims, Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::series::{Coefficient, Precision, TruncatedSeries};

pub use cofactor::{
    cofactors, multiple_to_zero_chain, standard_representation, translate, StandardRepresentation,
    Translation,
};
pub use decide::{
    attractivity_check, confluence_probe, congruence_test, falsify_standard_basis,
    AttractivityReport, AttractivityViolation, Certificate, CertificateSource, MembershipVerdict,
    ProbeReport,
};

/// Upper bound on the length of randomized reduction runs.
pub const MAX_STEPS: usize = 100_000;

/// One-based position of a rule in its [`RuleSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleIndex(usize);

impl RuleIndex {
    /// `None` for index 0.
    pub fn new(one_based: usize) -> Option<Self> {
        (one_based >= 1).then_some(RuleIndex(one_based))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub(crate) fn position(self) -> usize {
        self.0 - 1
    }

    pub(crate) fn from_position(pos: usize) -> Self {
        RuleIndex(pos + 1)
    }
}

impl fmt::Display for RuleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonzero series with its leading data cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    body: TruncatedSeries,
    lm: Monomial,
    lc: Coefficient,
}

impl RewriteRule {
    pub fn new(body: TruncatedSeries, order: MonomialOrder) -> Result<Self> {
        let (lm, lc) = body.leading(order)?;
        Ok(RewriteRule { body, lm, lc })
    }

    pub fn body(&self) -> &TruncatedSeries {
        &self.body
    }

    pub fn leading_monomial(&self) -> &Monomial {
        &self.lm
    }

    pub fn leading_coefficient(&self) -> &Coefficient {
        &self.lc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    nvars: usize,
    order: MonomialOrder,
    rules: Vec<RewriteRule>,
}

impl RuleSet {
    /// Rules keep the order of `bodies`; the first body is rule 1.
    pub fn new(nvars: usize, order: MonomialOrder, bodies: Vec<TruncatedSeries>) -> Result<Self> {
        let rules = bodies
            .into_iter()
            .map(|b| {
                check_dims(nvars, b.nvars())?;
                RewriteRule::new(b, order)
            })
            .collect::<Result<_>>()?;
        Ok(RuleSet {
            nvars,
            order,
            rules,
        })
    }

    pub fn empty(nvars: usize, order: MonomialOrder) -> Self {
        RuleSet {
            nvars,
            order,
            rules: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, index: RuleIndex) -> Result<&RewriteRule> {
        self.rules
            .get(index.position())
            .ok_or(Error::RuleIndexOutOfRange {
                index: index.get(),
                len: self.rules.len(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = (RuleIndex, &RewriteRule)> {
        self.rules
            .iter()
            .enumerate()
            .map(|(i, r)| (RuleIndex::from_position(i), r))
    }

    /// Indices of the rules whose leading monomial divides `m`, increasing.
    pub fn applicable(&self, m: &Monomial) -> Vec<RuleIndex> {
        self.iter()
            .filter(|(_, r)| m.is_divisible_by(&r.lm))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.rules.iter().any(|r| m.is_divisible_by(&r.lm))
    }
}

/// A single application of `f -> f - (c / LC(s_i)) * m * s_i` at `M = m * LM(s_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    /// The reduced monomial `M`.
    pub monomial: Monomial,
    pub rule: RuleIndex,
    /// The quotient `m` with `M = m * LM(s_i)`.
    pub quotient: Monomial,
    /// Coefficient of `M` in the series right before the step.
    pub coeff: Coefficient,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} rule={} m={} c={}",
            self.monomial, self.rule, self.quotient, self.coeff
        )
    }
}

/// A finite reduction chain `start -> ... -> end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub start: TruncatedSeries,
    pub steps: Vec<ReductionStep>,
    pub end: TruncatedSeries,
}

impl ReductionTrace {
    pub fn end_precision(&self) -> Precision {
        self.end.precision()
    }

    /// Line-oriented export, one `step k: M=.. rule=.. m=.. c=..` per step.
    pub fn export(&self) -> String {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| format!("step {}: {s}\n", k + 1))
            .collect()
    }

    /// Replays every step from `start` and checks the result agrees with `end`.
    pub fn validate(&self, rules: &RuleSet) -> Result<()> {
        let mut h = self.start.clone();
        for (k, step) in self.steps.iter().enumerate() {
            if h.coeff(&step.monomial) != step.coeff {
                return Err(Error::InvalidTrace(format!(
                    "step {}: recorded coefficient {} but series has {}",
                    k + 1,
                    step.coeff,
                    h.coeff(&step.monomial)
                )));
            }
            let (next, replayed) = reduce_step(&h, rules, &step.monomial, step.rule)
                .map_err(|e| Error::InvalidTrace(format!("step {}: {e}", k + 1)))?;
            if replayed.quotient != step.quotient {
                return Err(Error::InvalidTrace(format!(
                    "step {}: quotient mismatch",
                    k + 1
                )));
            }
            h = next;
        }
        if h.precision() < self.end.precision() || !h.agrees_with(&self.end)? {
            return Err(Error::InvalidTrace(format!(
                "replay ends at {h}, trace records {}",
                self.end
            )));
        }
        Ok(())
    }
}

/// How the next redex is chosen during normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Smallest reducible monomial, then smallest applicable rule index.
    Canonical,
    /// Uniformly random reducible monomial and applicable rule, seeded.
    Seeded(u64),
}

/// Reducible monomials of the known support of `f`, increasing under the
/// rule set's order.
pub fn reducible_monomials(f: &TruncatedSeries, rules: &RuleSet) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = f
        .support()
        .filter(|m| rules.is_reducible(m))
        .cloned()
        .collect();
    out.sort_by(|a, b| rules.order.cmp_same_dim(a, b));
    out
}

/// Rewrites the monomial `monomial` of `f` with rule `rule`.
pub fn reduce_step(
    f: &TruncatedSeries,
    rules: &RuleSet,
    monomial: &Monomial,
    rule: RuleIndex,
) -> Result<(TruncatedSeries, ReductionStep)> {
    check_dims(rules.nvars, f.nvars())?;
    check_dims(rules.nvars, monomial.nvars())?;
    let r = rules.rule(rule)?;
    let not_reducible = || Error::NotReducible {
        monomial: monomial.clone(),
        rule: rule.get(),
    };
    let coeff = f.coeff(monomial);
    if coeff.is_zero() || !f.precision().admits(monomial.degree()) {
        return Err(not_reducible());
    }
    let quotient = r.lm.divides_same_dim(monomial).ok_or_else(not_reducible)?;
    let scale = &coeff / &r.lc;
    let g = f.sub(&r.body.scale_term(&scale, &quotient)?)?;
    Ok((
        g,
        ReductionStep {
            monomial: monomial.clone(),
            rule,
            quotient,
            coeff,
        },
    ))
}

impl Strategy {
    pub(crate) fn rng(self) -> Option<ChaCha8Rng> {
        match self {
            Strategy::Canonical => None,
            Strategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        }
    }
}

/// Picks a redex among `candidates` (sorted increasingly, nonempty).
pub(crate) fn choose_redex(
    candidates: &[Monomial],
    rules: &RuleSet,
    rng: Option<&mut ChaCha8Rng>,
) -> (Monomial, RuleIndex) {
    match rng {
        None => {
            let m = candidates[0].clone();
            let i = rules.applicable(&m)[0];
            (m, i)
        }
        Some(rng) => {
            let m = candidates.choose(rng).expect("nonempty").clone();
            let i = *rules.applicable(&m).choose(rng).expect("reducible");
            (m, i)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum PrecisionMode {
    /// Fail when a rule's truncation would drop below the target.
    Strict,
    /// Continue at whatever precision the rules still support.
    Capped,
}

pub(crate) fn run_normalization(
    f: &TruncatedSeries,
    rules: &RuleSet,
    target: u64,
    strategy: Strategy,
    mode: PrecisionMode,
) -> Result<ReductionTrace> {
    check_dims(rules.nvars, f.nvars())?;
    let goal = Precision::Finite(target);
    if mode == PrecisionMode::Strict && f.precision() < goal {
        return Err(Error::PrecisionUnattainable {
            target,
            attainable: f.precision(),
        });
    }
    let mut rng = strategy.rng();
    let mut h = f.clone();
    let mut steps = Vec::new();
    loop {
        let bound = goal.min(h.precision());
        let candidates: Vec<Monomial> = reducible_monomials(&h, rules)
            .into_iter()
            .filter(|m| bound.admits(m.degree()))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let (monomial, rule) = choose_redex(&candidates, rules, rng.as_mut());
        if steps.len() >= MAX_STEPS {
            return Err(Error::StepLimitExceeded(MAX_STEPS));
        }
        let (next, step) = reduce_step(&h, rules, &monomial, rule)?;
        if mode == PrecisionMode::Strict && next.precision() < goal {
            return Err(Error::PrecisionUnattainable {
                target,
                attainable: next.precision(),
            });
        }
        h = next;
        steps.push(step);
    }
    // Reducible monomials left above the bound are not part of a normal form.
    if !reducible_monomials(&h, rules).is_empty() {
        h = h.truncate(goal);
    }
    Ok(ReductionTrace {
        start: f.clone(),
        steps,
        end: h,
    })
}

/// Normalizes `f` below `target`, always reducing the smallest reducible
/// monomial with the smallest applicable rule.
///
/// The end of the returned trace has no reducible monomial in its known part.
/// Its precision is at least `target`, or `Exact` when the chain terminated
/// on a polynomial normal form.
pub fn normalize(f: &TruncatedSeries, rules: &RuleSet, target: u64) -> Result<ReductionTrace> {
    run_normalization(f, rules, target, Strategy::Canonical, PrecisionMode::Strict)
}

/// Like [`normalize`] with an explicit redex-selection strategy.
pub fn normalize_with(
    f: &TruncatedSeries,
    rules: &RuleSet,
    target: u64,
    strategy: Strategy,
) -> Result<ReductionTrace> {
    run_normalization(f, rules, target, strategy, PrecisionMode::Strict)
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use num_rational::BigRational;

    pub fn q(n: i64, d: i64) -> Coefficient {
        BigRational::new(n.into(), d.into())
    }

    pub fn poly(nvars: usize, terms: &[(i64, &[u32])]) -> TruncatedSeries {
        poly_p(nvars, terms, Precision::Exact)
    }

    pub fn poly_p(nvars: usize, terms: &[(i64, &[u32])], p: Precision) -> TruncatedSeries {
        TruncatedSeries::new(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), q(*c, 1))),
            p,
        )
        .unwrap()
    }

    pub fn rules(nvars: usize, bodies: Vec<TruncatedSeries>) -> RuleSet {
        RuleSet::new(nvars, MonomialOrder::DegLex, bodies).unwrap()
    }

    pub fn ri(i: usize) -> RuleIndex {
        RuleIndex::new(i).unwrap()
    }

    /// `y^a` in two variables.
    pub fn y(a: u32) -> Monomial {
        Monomial::new(vec![0, a])
    }

    /// `y - y^2` in two variables.
    pub fn geometric_rule() -> RuleSet {
        rules(2, vec![poly(2, &[(1, &[0, 1]), (-1, &[0, 2])])])
    }
}
