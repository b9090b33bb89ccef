//! Truncated multivariate power series over exact rationals.
//!
//! A [`TruncatedSeries`] stores the known coefficients of `f + O(p)`: every
//! coefficient of total degree `< p` is exact, everything from degree `p` on is
//! unknown. Precision [`Precision::Exact`] marks a polynomial known in full.
//! Arithmetic propagates precision soundly, so results never claim knowledge
//! of coefficients that the inputs did not determine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dims, Error, Result};
use crate::monomial::{Monomial, MonomialOrder};

pub type Coefficient = BigRational;

/// Degree bound below which a series is known exactly.
///
/// `Finite(p) < Exact` for every `p`, so `min` picks the weaker precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Finite(u64),
    Exact,
}

impl Precision {
    /// Whether a monomial of this degree is within the known part.
    pub fn admits(self, degree: u64) -> bool {
        match self {
            Precision::Finite(p) => degree < p,
            Precision::Exact => true,
        }
    }

    pub fn shifted(self, by: u64) -> Precision {
        match self {
            Precision::Finite(p) => Precision::Finite(p.saturating_add(by)),
            Precision::Exact => Precision::Exact,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Precision::Finite(p) => Some(p),
            Precision::Exact => None,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(p) => write!(f, "{p}"),
            Precision::Exact => f.write_str("exact"),
        }
    }
}

/// Valuation of a truncated series: the smallest degree in its support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// The known part is nonzero and its lowest degree is this value.
    Definite(u64),
    /// Known part is zero; the true valuation is at least the precision.
    AtLeast(u64),
    /// The series is exactly zero.
    Infinite,
}

impl Valuation {
    /// Lower bound on the true valuation, `Exact` standing in for infinity.
    pub fn lower_bound(self) -> Precision {
        match self {
            Valuation::Definite(v) | Valuation::AtLeast(v) => Precision::Finite(v),
            Valuation::Infinite => Precision::Exact,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Definite(v) => write!(f, "{v}"),
            Valuation::AtLeast(p) => write!(f, ">={p}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// `2^(-val(f - g))`, possibly only an upper bound when the difference vanishes
/// below the available precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub value: BigRational,
    pub upper_bound: bool,
}

impl Delta {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.upper_bound {
            f.write_str("<=")?;
        }
        write!(f, "{}", self.value)
    }
}

/// `2^(-exponent)` as an exact rational.
pub fn inverse_power_of_two(exponent: u64) -> BigRational {
    let exp = u32::try_from(exponent).expect("valuation exponent exceeds u32");
    BigRational::new(BigInt::one(), BigInt::from(2u8).pow(exp))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    terms: BTreeMap<Monomial, Coefficient>,
    precision: Precision,
}

impl TruncatedSeries {
    /// Builds a series from terms, summing duplicates and dropping zero
    /// coefficients and terms at or above the precision.
    pub fn new<I>(nvars: usize, terms: I, precision: Precision) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Coefficient)>,
    {
        let mut map: BTreeMap<Monomial, Coefficient> = BTreeMap::new();
        for (m, c) in terms {
            check_dims(nvars, m.nvars())?;
            if !precision.admits(m.degree()) {
                continue;
            }
            *map.entry(m).or_insert_with(Coefficient::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries {
            nvars,
            terms: map,
            precision,
        })
    }

    pub fn zero(nvars: usize) -> Self {
        Self::zero_with_precision(nvars, Precision::Exact)
    }

    pub fn zero_with_precision(nvars: usize, precision: Precision) -> Self {
        TruncatedSeries {
            nvars,
            terms: BTreeMap::new(),
            precision,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::term(Coefficient::one(), Monomial::one(nvars))
    }

    /// The exact single-term polynomial `c * m`.
    pub fn term(c: Coefficient, m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TruncatedSeries {
            nvars,
            terms,
            precision: Precision::Exact,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == Precision::Exact
    }

    /// Number of stored (nonzero, known) terms. There is deliberately no
    /// `is_empty`; see [`Self::is_known_zero`] and [`Self::is_exact_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no nonzero coefficient is known (the series may still be
    /// nonzero beyond its precision).
    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// Coefficient of `m`; zero when `m` is absent from the stored support.
    pub fn coeff(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Stored terms sorted increasingly under `order` (leading term first).
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp_same_dim(a.0, b.0));
        v
    }

    /// Forgets every coefficient of degree `>= p` (never raises the precision).
    pub fn truncate(&self, precision: Precision) -> Self {
        let precision = self.precision.min(precision);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| precision.admits(m.degree()))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TruncatedSeries {
            nvars: self.nvars,
            terms,
            precision,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        let precision = self.precision.min(other.precision);
        let mut out = self.truncate(precision).terms;
        for (m, c) in &other.terms {
            if !precision.admits(m.degree()) {
                continue;
            }
            let entry = out.entry(m.clone()).or_insert_with(Coefficient::zero);
            if negate_other {
                *entry -= c;
            } else {
                *entry += c;
            }
            if entry.is_zero() {
                out.remove(m);
            }
        }
        Ok(TruncatedSeries {
            nvars: self.nvars,
            terms: out,
            precision,
        })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            precision: self.precision,
        }
    }

    /// Product with precision `min(p_f + v_g, p_g + v_f)`, where `v` is the
    /// valuation lower bound of the other factor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.nvars, other.nvars)?;
        let from_self = match self.precision {
            Precision::Finite(p) => other.valuation().lower_bound().shifted(p),
            Precision::Exact => Precision::Exact,
        };
        let from_other = match other.precision {
            Precision::Finite(p) => self.valuation().lower_bound().shifted(p),
            Precision::Exact => Precision::Exact,
        };
        let precision = from_self.min(from_other);
        let mut out: BTreeMap<Monomial, Coefficient> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if !precision.admits(ma.degree() + mb.degree()) {
                    continue;
                }
                let m = ma.mul(mb)?;
                *out.entry(m).or_insert_with(Coefficient::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries {
            nvars: self.nvars,
            terms: out,
            precision,
        })
    }

    /// `c * m * self`; the precision shifts up by `deg(m)`.
    pub fn scale_term(&self, c: &Coefficient, m: &Monomial) -> Result<Self> {
        check_dims(self.nvars, m.nvars())?;
        let precision = self.precision.shifted(m.degree());
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(mm, a)| Ok((m.mul(mm)?, c * a)))
                .collect::<Result<_>>()?
        };
        Ok(TruncatedSeries {
            nvars: self.nvars,
            terms,
            precision,
        })
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().map(Monomial::degree).min() {
            Some(v) => Valuation::Definite(v),
            None => match self.precision {
                Precision::Finite(p) => Valuation::AtLeast(p),
                Precision::Exact => Valuation::Infinite,
            },
        }
    }

    /// Leading monomial and coefficient: the minimum of the support under
    /// `order`. Fails when the known part is empty.
    pub fn leading(&self, order: MonomialOrder) -> Result<(Monomial, Coefficient)> {
        // Stored terms all have degree < precision and the order is degree
        // compatible, so the known minimum is the true minimum.
        order
            .min(self.terms.keys())
            .map(|m| (m.clone(), self.terms[m].clone()))
            .ok_or(Error::ZeroOrUnknownLeading)
    }

    /// The ultrametric distance `2^(-val(self - other))`.
    pub fn delta(&self, other: &Self) -> Result<Delta> {
        let diff = self.sub(other)?;
        Ok(match diff.valuation() {
            Valuation::Definite(v) => Delta {
                value: inverse_power_of_two(v),
                upper_bound: false,
            },
            Valuation::AtLeast(p) => Delta {
                value: inverse_power_of_two(p),
                upper_bound: true,
            },
            Valuation::Infinite => Delta {
                value: BigRational::zero(),
                upper_bound: false,
            },
        })
    }

    /// Whether `self` and `other` agree on every coefficient both of them know.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_known_zero())
    }
}

fn write_coefficient_magnitude(f: &mut fmt::Formatter<'_>, c: &Coefficient) -> fmt::Result {
    let a = c.abs();
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for TruncatedSeries {
    /// Canonical text form: terms increasing under deglex, `+ O(p)` suffix
    /// for finite precision, `0` for the exact zero series.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.sorted_terms(MonomialOrder::DegLex) {
            let negative = c.is_negative();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if m.is_one() {
                write_coefficient_magnitude(f, c)?;
            } else if c.abs().is_one() {
                write!(f, "{m}")?;
            } else {
                write_coefficient_magnitude(f, c)?;
                write!(f, "*{m}")?;
            }
        }
        match self.precision {
            Precision::Finite(p) if first => write!(f, "O({p})"),
            Precision::Finite(p) => write!(f, " + O({p})"),
            Precision::Exact if first => f.write_str("0"),
            Precision::Exact => Ok(()),
        }
    }
}
