//! Cofactor extraction and chain constructions on reduction traces.

use num_traits::Zero;

use super::{normalize, reduce_step, reducible_monomials, ReductionTrace, RuleIndex, RuleSet};
use crate::error::{check_dims, Error, Result};
use crate::monomial::Monomial;
use crate::series::{Precision, TruncatedSeries};

/// Accumulates `q_i += (c / LC(s_i)) * m` over the steps of `trace`, so that
/// `start = end + sum q_i s_i` below the trace's end precision.
pub fn cofactors(trace: &ReductionTrace, rules: &RuleSet) -> Result<Vec<TruncatedSeries>> {
    trace.validate(rules)?;
    let mut q = vec![TruncatedSeries::zero(rules.nvars()); rules.len()];
    for step in &trace.steps {
        let rule = rules.rule(step.rule)?;
        let c = &step.coeff / rule.leading_coefficient();
        let slot = &mut q[step.rule.position()];
        *slot = slot.add(&TruncatedSeries::term(c, step.quotient.clone()))?;
    }
    Ok(q)
}

/// A representation `f = sum q_i s_i` together with the leading-term check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardRepresentation {
    pub trace: ReductionTrace,
    pub cofactors: Vec<TruncatedSeries>,
    pub leading_monomial: Monomial,
    /// `min { LM(q_i s_i) : q_i != 0 }`.
    pub least_product_leading: Monomial,
}

impl StandardRepresentation {
    /// No cancellation of the least leading terms among the `q_i s_i`.
    pub fn is_standard(&self) -> bool {
        self.leading_monomial == self.least_product_leading
    }
}

/// Normalizes `f` and, when it reduces to zero below `precision`, returns the
/// cofactors with the leading-monomial check. `None` means a nonzero residual.
pub fn standard_representation(
    f: &TruncatedSeries,
    rules: &RuleSet,
    precision: u64,
) -> Result<Option<StandardRepresentation>> {
    if f.is_known_zero() {
        return Err(Error::PreconditionFailed(
            "standard representation needs a nonzero series".into(),
        ));
    }
    let trace = normalize(f, rules, precision)?;
    if !trace.end.is_known_zero() {
        return Ok(None);
    }
    let cofactors = cofactors(&trace, rules)?;
    let order = rules.order();
    let (leading_monomial, _) = f.leading(order)?;
    let mut products = Vec::new();
    for ((_, rule), q) in rules.iter().zip(&cofactors) {
        if q.is_known_zero() {
            continue;
        }
        products.push(q.mul(rule.body())?.leading(order)?.0);
    }
    let least_product_leading = order
        .min(products.iter())
        .cloned()
        .ok_or(Error::ZeroOrUnknownLeading)?;
    Ok(Some(StandardRepresentation {
        trace,
        cofactors,
        leading_monomial,
        least_product_leading,
    }))
}

/// The chain `q s_i ->* 0` that reduces `m_k * LM(s_i)` with rule `i` for the
/// support `m_0 < m_1 < ...` of `q`, in increasing order.
pub fn multiple_to_zero_chain(
    q: &TruncatedSeries,
    rule: RuleIndex,
    rules: &RuleSet,
    precision: u64,
) -> Result<ReductionTrace> {
    check_dims(rules.nvars(), q.nvars())?;
    let goal = Precision::Finite(precision);
    let s = rules.rule(rule)?;
    let start = q.mul(s.body())?;
    if start.precision() < goal {
        return Err(Error::PrecisionUnattainable {
            target: precision,
            attainable: start.precision(),
        });
    }
    let mut h = start.clone();
    let mut steps = Vec::new();
    for (m, _) in q.sorted_terms(rules.order()) {
        let target = m.mul(s.leading_monomial())?;
        if !goal.admits(target.degree()) {
            break;
        }
        let (next, step) = reduce_step(&h, rules, &target, rule)?;
        if next.precision() < goal {
            return Err(Error::PrecisionUnattainable {
                target: precision,
                attainable: next.precision(),
            });
        }
        h = next;
        steps.push(step);
    }
    if !h.is_known_zero() {
        h = h.truncate(goal);
    }
    Ok(ReductionTrace {
        start,
        steps,
        end: h,
    })
}

/// Chains `f ->* f'` and `g ->* g'` obtained by replaying a chain of `f - g`
/// on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub f_trace: ReductionTrace,
    pub g_trace: ReductionTrace,
}

impl Translation {
    pub fn f_prime(&self) -> &TruncatedSeries {
        &self.f_trace.end
    }

    pub fn g_prime(&self) -> &TruncatedSeries {
        &self.g_trace.end
    }
}

/// Splits a chain `f - g ->* h` into chains `f ->* f'` and `g ->* g'` with
/// `h = f' - g'` below the common precision.
///
/// Each step `(M, i, m)` is applied to a side only when `M` is in its support;
/// otherwise that side stays put for the step.
pub fn translate(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    trace: &ReductionTrace,
    rules: &RuleSet,
) -> Result<Translation> {
    trace.validate(rules)?;
    if !f.sub(g)?.agrees_with(&trace.start)? {
        return Err(Error::InvalidTrace("trace does not start at f - g".into()));
    }
    let end_precision = trace.end_precision();
    let replay = |side: &TruncatedSeries| -> Result<ReductionTrace> {
        let mut h = side.clone();
        let mut steps = Vec::new();
        for step in &trace.steps {
            if h.coeff(&step.monomial).is_zero() {
                continue;
            }
            let (next, s) = reduce_step(&h, rules, &step.monomial, step.rule)
                .map_err(|e| Error::InvalidTrace(format!("translated step: {e}")))?;
            h = next;
            steps.push(s);
        }
        let unresolved = reducible_monomials(&h, rules)
            .iter()
            .any(|m| !end_precision.admits(m.degree()));
        if unresolved {
            h = h.truncate(end_precision);
        }
        Ok(ReductionTrace {
            start: side.clone(),
            steps,
            end: h,
        })
    };
    Ok(Translation {
        f_trace: replay(f)?,
        g_trace: replay(g)?,
    })
}
