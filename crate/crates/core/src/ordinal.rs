//! Ordinal notations in Cantor normal form over an abstract base `w`.
//!
//! A notation is a finite sum `w^e0*c0 + w^e1*c1 + ...` with strictly
//! decreasing exponents (themselves notations) and positive integer
//! coefficients. The empty sum is zero. Values are kept in normal form at
//! all times; every constructor and arithmetic operation normalizes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One `w^exponent * coefficient` summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Parity of the finite part `n` in `a = limit + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of_usize(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ordinal syntax error at byte {pos}: {msg}")]
pub struct OrdinalParseError {
    pub pos: usize,
    pub msg: String,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::finite(1)
    }

    /// The base symbol itself, `w = w^1`.
    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn finite(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: Ordinal::zero(),
                    coefficient: n,
                }],
            }
        }
    }

    /// `w^a`.
    pub fn omega_pow(a: Ordinal) -> Ordinal {
        Ordinal {
            terms: vec![Term {
                exponent: a,
                coefficient: 1,
            }],
        }
    }

    /// `w^exponent * coefficient`; zero when the coefficient is zero.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Ordinal {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds a notation from arbitrary summands by ordinal addition, so
    /// out-of-order input is absorbed the same way `add` absorbs it.
    pub fn from_terms<I: IntoIterator<Item = (Ordinal, u64)>>(terms: I) -> Ordinal {
        terms.into_iter().fold(Ordinal::zero(), |acc, (e, c)| {
            acc.add(&Ordinal::monomial(e, c))
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// Coefficient of the exponent-0 summand (0 when absent).
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exponent.is_zero() => t.coefficient,
            _ => 0,
        }
    }

    pub fn parity(&self) -> Parity {
        if self.finite_part().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part() == 0
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Splits `a = prefix + w^e*c` at the last summand.
    pub fn split_last(&self) -> Option<(Ordinal, &Term)> {
        let (last, init) = self.terms.split_last()?;
        Some((
            Ordinal {
                terms: init.to_vec(),
            },
            last,
        ))
    }

    /// Ordinal addition with left absorption.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut merged = None;
        for t in &self.terms {
            match t.exponent.cmp(&lead.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => merged = Some(t.coefficient),
                Ordering::Less => break,
            }
        }
        let mut rest = rhs.terms.iter();
        let first = rest.next().expect("nonempty");
        terms.push(Term {
            exponent: first.exponent.clone(),
            coefficient: first.coefficient + merged.unwrap_or(0),
        });
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Nesting depth of exponents: 0 for finite notations, 1 for
    /// polynomials in `w` with finite exponents, and so on.
    pub fn exponent_depth(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| !t.exponent.is_zero())
            .map(|t| 1 + t.exponent.exponent_depth())
            .max()
            .unwrap_or(0)
    }

    fn fmt_exponent(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_finite() {
            write!(f, "{n}")
        } else if *self == Ordinal::omega() {
            write!(f, "w")
        } else {
            write!(f, "({self})")
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            write!(f, "w")?;
            if t.exponent != Ordinal::one() {
                write!(f, "^")?;
                t.exponent.fmt_exponent(f)?;
            }
            if t.coefficient != 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, OrdinalParseError> {
        Err(OrdinalParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| OrdinalParseError {
                pos: start,
                msg: "number out of range".into(),
            })
    }

    fn is_base(c: Option<char>) -> bool {
        matches!(c, Some('w') | Some('Ω') | Some('ω'))
    }

    fn eat_base(&mut self) -> bool {
        match self.peek() {
            Some(c) if Self::is_base(Some(c)) => {
                self.pos += c.len_utf8();
                true
            }
            _ => false,
        }
    }

    fn ord(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalParseError> {
        if self.eat_base() {
            let exponent = if self.eat('^') {
                self.exponent()?
            } else {
                Ordinal::one()
            };
            let coefficient = if self.eat('*') { self.nat()? } else { 1 };
            Ok(Ordinal::monomial(exponent, coefficient))
        } else if self.eat('(') {
            let inner = self.ord()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            Ok(inner)
        } else {
            Ok(Ordinal::finite(self.nat()?))
        }
    }

    fn exponent(&mut self) -> Result<Ordinal, OrdinalParseError> {
        if self.eat('(') {
            let inner = self.ord()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            Ok(inner)
        } else if self.eat_base() {
            let e = if self.eat('^') {
                self.exponent()?
            } else {
                Ordinal::one()
            };
            Ok(Ordinal::omega_pow(e))
        } else {
            Ok(Ordinal::finite(self.nat()?))
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    /// Accepts `ord := term ('+' term)*`, `term := 'w' ('^' exp)? ('*' nat)? | nat`
    /// where `exp` is a natural number, `w` (optionally raised again), or a
    /// parenthesized notation. `Ω` and `ω` are accepted for `w`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let o = p.ord()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(o)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every notation with at most `max_terms` summands, coefficients in
/// `1..=max_coeff`, and exponent nesting at most `max_depth`, sorted.
pub fn enumerate(max_terms: usize, max_depth: usize, max_coeff: u64) -> Vec<Ordinal> {
    let exps: Vec<Ordinal> = if max_depth == 0 {
        vec![Ordinal::zero()]
    } else {
        enumerate(max_terms, max_depth - 1, max_coeff)
    };
    let mut out = Vec::new();
    // exps is sorted ascending; build strictly decreasing exponent chains
    fn go(
        exps: &[Ordinal],
        below: usize,
        left: usize,
        max_coeff: u64,
        prefix: &mut Vec<Term>,
        out: &mut Vec<Ordinal>,
    ) {
        out.push(Ordinal {
            terms: prefix.clone(),
        });
        if left == 0 {
            return;
        }
        for i in 0..below {
            for c in 1..=max_coeff {
                prefix.push(Term {
                    exponent: exps[i].clone(),
                    coefficient: c,
                });
                go(exps, i, left - 1, max_coeff, prefix, out);
                prefix.pop();
            }
        }
    }
    go(
        &exps,
        exps.len(),
        max_terms,
        max_coeff,
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(Ordinal::zero().cmp(&Ordinal::zero()), Ordering::Equal);
        assert_eq!(o("w").cmp(&o("w^w")), Ordering::Less);
        assert_eq!(o("w*2+3").cmp(&o("w*3")), Ordering::Less);
        assert!(o("w^2") > o("w*100+7"));
        assert!(o("w^w") > o("w^5*9"));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Ordinal::zero().parity(), Parity::Even);
        assert_eq!(o("3").parity(), Parity::Odd);
        assert_eq!(o("w+4").parity(), Parity::Even);
        assert_eq!(o("w^2+w").parity(), Parity::Even);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(Ordinal::omega_pow(Ordinal::zero()), Ordinal::one());
        assert_eq!(o("w*2").add(&o("w+1")), o("w*3+1"));
        assert_eq!(o("w^2+w").add(&o("w^2")), o("w^2*2"));
        assert_eq!(o("w+5").succ(), o("w+6"));
    }

    #[test]
    fn parse_and_display() {
        let a = o("w^2*3+w+1");
        assert_eq!(a.to_string(), "w^2*3+w+1");
        assert_eq!(o("w^w").to_string(), "w^w");
        assert_eq!(o("w^(w+1)*2").to_string(), "w^(w+1)*2");
        assert_eq!(o("1 + w"), o("w"));
        assert_eq!(o("Ω^2"), o("w^2"));
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("w+)".parse::<Ordinal>().is_err());
        let err = "w*x".parse::<Ordinal>().unwrap_err();
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn enumeration_is_sorted_and_normal() {
        let all = enumerate(2, 2, 2);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for a in &all {
            assert_eq!(&a.to_string().parse::<Ordinal>().unwrap(), a);
        }
        assert!(all.contains(&o("w^w*2+w^2")));
    }
}
