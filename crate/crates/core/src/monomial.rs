//! Exponent-vector monomials and admissible, degree-compatible monomial orders.
//!
//! A [`Monomial`] over `n` variables is the exponent vector `(μ₁, …, μₙ)` of
//! `x1^μ₁ * … * xn^μₙ`. The derived `Ord` on [`Monomial`] is a structural order
//! used only for deterministic storage; the mathematical order is always
//! supplied by a [`MonomialOrder`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{check_dims, Error, Result};

/// A monomial `x1^a1 * ... * xn^an`, stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    exponents: Box<[u32]>,
}

impl Monomial {
    /// Builds a monomial from its exponent vector.
    ///
    /// Panics if `exponents` is empty: every ambient ring has at least one variable.
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(
            !exponents.is_empty(),
            "a monomial needs at least one variable"
        );
        Monomial {
            exponents: exponents.into_boxed_slice(),
        }
    }

    /// The empty monomial `1` over `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    /// The monomial `x_{var+1}^exp` (variables are zero-indexed here).
    pub fn var(nvars: usize, var: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Self::new(e)
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Total degree `|μ|`.
    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    /// Componentwise exponent sum.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        check_dims(self.nvars(), other.nvars())?;
        let exponents = self
            .exponents
            .iter()
            .zip(other.exponents.iter())
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::new(exponents))
    }

    /// If `self` divides `other`, returns the quotient `other / self`.
    pub fn divides(&self, other: &Monomial) -> Result<Option<Monomial>> {
        check_dims(self.nvars(), other.nvars())?;
        Ok(self.divides_same_dim(other))
    }

    pub(crate) fn divides_same_dim(&self, other: &Monomial) -> Option<Monomial> {
        if self
            .exponents
            .iter()
            .zip(other.exponents.iter())
            .any(|(a, b)| a > b)
        {
            return None;
        }
        let q = self
            .exponents
            .iter()
            .zip(other.exponents.iter())
            .map(|(a, b)| b - a)
            .collect();
        Some(Monomial::new(q))
    }

    pub(crate) fn is_divisible_by(&self, divisor: &Monomial) -> bool {
        divisor
            .exponents
            .iter()
            .zip(self.exponents.iter())
            .all(|(a, b)| a <= b)
    }

    /// All monomials over `nvars` variables of total degree exactly `degree`,
    /// in structural (lexicographic, x1 first) order.
    pub fn of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Monomial>) {
            if slots == 1 {
                prefix.push(remaining);
                out.push(Monomial::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                fill(prefix, remaining - e, slots - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        fill(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
        out
    }

    /// All monomials of total degree `< bound`.
    pub fn below_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
        (0..bound)
            .flat_map(|d| Monomial::of_degree(nvars, d))
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Admissible monomial orders compatible with the total degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Degree first; ties broken lexicographically with `x1` most significant,
    /// the larger exponent at the first difference giving the larger monomial.
    #[default]
    DegLex,
}

impl MonomialOrder {
    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::DegLex => "deglex",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "deglex" => Some(MonomialOrder::DegLex),
            _ => None,
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        check_dims(a.nvars(), b.nvars())?;
        Ok(self.cmp_same_dim(a, b))
    }

    pub(crate) fn cmp_same_dim(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.exponents.cmp(&b.exponents)),
        }
    }

    /// The finite set `{m : m < bound}`, sorted increasingly.
    pub fn monomials_below(&self, bound: &Monomial) -> Vec<Monomial> {
        // Degree compatibility confines the set to degrees <= deg(bound).
        let d = u32::try_from(bound.degree()).unwrap_or(u32::MAX);
        let mut out: Vec<Monomial> = Monomial::below_degree(bound.nvars(), d + 1)
            .into_iter()
            .filter(|m| self.cmp_same_dim(m, bound) == Ordering::Less)
            .collect();
        out.sort_by(|a, b| self.cmp_same_dim(a, b));
        out
    }

    /// The smallest element of a set of monomials.
    pub fn min<'a, I>(&self, monomials: I) -> Option<&'a Monomial>
    where
        I: IntoIterator<Item = &'a Monomial>,
    {
        monomials.into_iter().min_by(|a, b| self.cmp_same_dim(a, b))
    }
}
