//! Text grammar for series and rule files.
//!
//! ```text
//! series  := "O(" nat ")" | ["+" | "-"] product (("+" | "-") product)* ["+" "O(" nat ")"]
//! product := factor ("*" factor)*
//! factor  := nat ["/" nat] | "x" index ["^" nat]
//! ```
//!
//! Variables are `x1..xn`. A missing `O(d)` means the series is exact.
//! Formatting a parsed series with `Display` yields its canonical form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::monomial::{Monomial, MonomialOrder};
use crate::rewrite::RuleSet;
use crate::series::{Coefficient, Precision, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    ZeroDenominator,
    ExponentOverflow,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::ExponentOverflow => f.write_str("exponent too large"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Nat(BigInt),
    Var(String),
    BigO,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(usize, Token)>, (usize, ParseErrorKind)> {
        let mut lx = Lexer {
            chars: text.char_indices().peekable(),
            text,
        };
        let mut out = Vec::new();
        while let Some(&(pos, c)) = lx.chars.peek() {
            let column = text[..pos].chars().count() + 1;
            let tok = match c {
                c if c.is_whitespace() => {
                    lx.chars.next();
                    continue;
                }
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '/' => Token::Slash,
                '^' => Token::Caret,
                '(' => Token::LParen,
                ')' => Token::RParen,
                'O' => Token::BigO,
                c if c.is_ascii_digit() => {
                    let digits = lx.take_while(pos, |c| c.is_ascii_digit());
                    out.push((column, Token::Nat(digits.parse().expect("digits"))));
                    continue;
                }
                c if c.is_ascii_alphabetic() => {
                    let ident = lx.take_while(pos, |c| c.is_ascii_alphanumeric() || c == '_');
                    out.push((column, Token::Var(ident.to_string())));
                    continue;
                }
                other => {
                    return Err((
                        column,
                        ParseErrorKind::Syntax(format!("unexpected `{other}`")),
                    ))
                }
            };
            lx.chars.next();
            out.push((column, tok));
        }
        Ok(out)
    }

    fn take_while(&mut self, start: usize, pred: impl Fn(char) -> bool) -> &'a str {
        let mut end = start;
        while let Some(&(pos, c)) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            end = pos + c.len_utf8();
            self.chars.next();
        }
        &self.text[start..end]
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_column: usize,
    nvars: usize,
}

type PResult<T> = Result<T, (usize, ParseErrorKind)>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_column)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err((self.column(), ParseErrorKind::Syntax(msg.into())))
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Token, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn nat(&mut self, what: &str) -> PResult<BigInt> {
        match self.peek() {
            Some(Token::Nat(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn small_nat<T: TryFrom<BigInt>>(&mut self, what: &str) -> PResult<T> {
        let column = self.column();
        let n = self.nat(what)?;
        T::try_from(n).map_err(|_| (column, ParseErrorKind::ExponentOverflow))
    }

    fn series(&mut self) -> PResult<TruncatedSeries> {
        let mut terms = Vec::new();
        let mut precision = Precision::Exact;
        let mut negative = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            if self.peek() == Some(&Token::BigO) {
                if negative {
                    return self.syntax("big-O term cannot be negated");
                }
                precision = self.big_o()?;
                if self.peek().is_some() {
                    return self.syntax("big-O term must come last");
                }
                break;
            }
            let (c, m) = self.product()?;
            terms.push((m, if negative { -c } else { c }));
            negative = match self.bump() {
                None => break,
                Some(Token::Plus) => false,
                Some(Token::Minus) => true,
                Some(_) => {
                    self.pos -= 1;
                    return self.syntax("expected `+` or `-`");
                }
            };
            if self.peek().is_none() {
                return self.syntax("expected a term");
            }
        }
        Ok(TruncatedSeries::new(self.nvars, terms, precision).expect("dimensions agree"))
    }

    fn big_o(&mut self) -> PResult<Precision> {
        self.expect(Token::BigO, "`O`")?;
        self.expect(Token::LParen, "`(`")?;
        let d: u64 = self.small_nat("a precision")?;
        self.expect(Token::RParen, "`)`")?;
        Ok(Precision::Finite(d))
    }

    fn product(&mut self) -> PResult<(Coefficient, Monomial)> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.nvars];
        loop {
            let column = self.column();
            match self.bump() {
                Some(Token::Nat(n)) => {
                    let mut c = BigRational::from_integer(n);
                    if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        let dcol = self.column();
                        let d = self.nat("a denominator")?;
                        if d.is_zero() {
                            return Err((dcol, ParseErrorKind::ZeroDenominator));
                        }
                        c /= BigRational::from_integer(d);
                    }
                    coeff *= c;
                }
                Some(Token::Var(name)) => {
                    let index = name
                        .strip_prefix('x')
                        .filter(|d| !d.is_empty() && !d.starts_with('0'))
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|i| (1..=self.nvars).contains(i))
                        .ok_or((column, ParseErrorKind::UnknownVariable(name)))?;
                    let mut e = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        e = self.small_nat("an exponent")?;
                    }
                    exps[index - 1] = exps[index - 1]
                        .checked_add(e)
                        .ok_or((column, ParseErrorKind::ExponentOverflow))?;
                }
                _ => {
                    self.pos -= 1;
                    return self.syntax("expected a coefficient or variable");
                }
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, Monomial::new(exps)))
    }
}

fn parse_line(text: &str, nvars: usize, line: usize) -> Result<TruncatedSeries, ParseError> {
    let wrap = |(column, kind)| ParseError { line, column, kind };
    let tokens = Lexer::tokens(text).map_err(wrap)?;
    if tokens.is_empty() {
        return Err(wrap((1, ParseErrorKind::Syntax("empty series".into()))));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
        nvars,
    };
    p.series().map_err(wrap)
}

/// Parses a one-line series over `x1..x{nvars}`.
pub fn parse_series(text: &str, nvars: usize) -> Result<TruncatedSeries, ParseError> {
    assert!(nvars >= 1, "at least one variable is required");
    if let Some(k) = text.find('\n') {
        if !text[k..].trim().is_empty() {
            return Err(ParseError {
                line: 2,
                column: 1,
                kind: ParseErrorKind::Syntax("a series fits on one line".into()),
            });
        }
    }
    parse_line(text.trim_end_matches(['\n', '\r']), nvars, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    Rule {
        line: usize,
        source: crate::error::Error,
    },
}

/// Parses a rule file: one series per line, line `k` defines rule `k`.
/// Trailing blank lines are ignored; blank lines in between are errors.
pub fn parse_rules(
    text: &str,
    nvars: usize,
    order: MonomialOrder,
) -> Result<RuleSet, RuleFileError> {
    let lines: Vec<&str> = text.trim_end().lines().collect();
    let mut bodies = Vec::with_capacity(lines.len());
    for (k, line) in lines.iter().enumerate() {
        let s = parse_line(line.trim_end_matches('\r'), nvars, k + 1)?;
        bodies.push(s);
    }
    for (k, b) in bodies.iter().enumerate() {
        if b.is_known_zero() {
            return Err(RuleFileError::Rule {
                line: k + 1,
                source: crate::error::Error::ZeroOrUnknownLeading,
            });
        }
    }
    Ok(RuleSet::new(nvars, order, bodies).expect("rule bodies are nonzero"))
}
