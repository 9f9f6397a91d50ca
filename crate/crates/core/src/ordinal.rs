//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a list of terms `ω^e·c` with strictly decreasing
//! exponents and positive coefficients; the empty list is `0`. Comparison is
//! lexicographic on the term list, which is exactly ordinal order for CNF.
//!
//! The text grammar is `0`, naturals, `w`, `w^(<ord>)` (or `w^<nat>`),
//! optional `*<coeff>` and terms joined by `+`, e.g. `w^(w+1)*3+w*2+5`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("terms are not in Cantor normal form (exponents must strictly decrease)")]
    NotCnf,
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Zero, successor or limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Self {
                terms: vec![Term { exp: Self::zero(), coeff: n }],
            }
        }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `ω^e`.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Self::monomial(exp, 1)
    }

    /// `ω^e·c`; zero when `c = 0`.
    pub fn monomial(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Self {
                terms: vec![Term { exp, coeff }],
            }
        }
    }

    /// Builds an ordinal from terms, rejecting anything not in CNF.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, OrdinalError> {
        if terms.iter().any(|t| t.coeff == 0) || terms.windows(2).any(|w| w[0].exp <= w[1].exp) {
            return Err(OrdinalError::NotCnf);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn kind(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.exp.is_zero() => Kind::Successor,
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.kind() == Kind::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.kind() == Kind::Successor
    }

    /// `Some(n)` when the ordinal is the natural `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    /// The coefficient of `ω^exp`, zero if absent.
    pub fn coeff_of(&self, exp: &Ordinal) -> u64 {
        self.terms
            .iter()
            .find(|t| &t.exp == exp)
            .map_or(0, |t| t.coeff)
    }

    /// The finite part: the coefficient of `ω⁰`.
    pub fn finite_part(&self) -> u64 {
        self.coeff_of(&Self::zero())
    }

    pub fn succ(&self) -> Self {
        self.plus(&Self::one())
    }

    /// `ξ` for `self = ξ + 1`.
    pub fn pred(&self) -> Result<Self, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.coeff -= 1;
        if last.coeff == 0 {
            terms.pop();
        }
        Ok(Self { terms })
    }

    /// Ordinal addition `self + other`.
    pub fn plus(&self, other: &Ordinal) -> Self {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= lead.exp)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if terms.last().is_some_and(|t| t.exp == lead.exp) {
            terms.last_mut().unwrap().coeff += lead.coeff;
            rest.next();
        }
        terms.extend(rest.cloned());
        Self { terms }
    }

    /// The least limit ordinal (or `0`) strictly above every natural offset of
    /// `self`'s limit part: `self` with its finite part removed, plus `ω`.
    pub fn next_limit(&self) -> Self {
        let base = Self {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.exp.is_zero())
                .cloned()
                .collect(),
        };
        base.plus(&Self::omega())
    }

    /// Standard fundamental sequence `λ[n]`.
    ///
    /// With `λ = γ + ω^e` (one copy of the last term peeled off): if
    /// `e = β + 1` then `λ[n] = γ + ω^β·n`, and if `e` is a limit then
    /// `λ[n] = γ + ω^{e[n]}`.
    pub fn standard_fundamental(&self, n: u64) -> Result<Self, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let mut gamma = self.terms.clone();
        let last = gamma.pop().unwrap();
        if last.coeff > 1 {
            gamma.push(Term {
                exp: last.exp.clone(),
                coeff: last.coeff - 1,
            });
        }
        let gamma = Self { terms: gamma };
        let tail = if last.exp.is_successor() {
            Self::monomial(last.exp.pred()?, n)
        } else {
            Self::omega_pow(last.exp.standard_fundamental(n)?)
        };
        Ok(gamma.plus(&tail))
    }

    /// Complexity measure used to enumerate ordinals level by level.
    ///
    /// `norm(0) = 0`, otherwise the maximum over terms of the coefficient and
    /// `1 + norm(exponent)` for nonzero exponents. Each level is finite.
    pub fn norm(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| {
                if t.exp.is_zero() {
                    t.coeff
                } else {
                    t.coeff.max(1 + t.exp.norm())
                }
            })
            .max()
            .unwrap_or(0)
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
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            if t.exp == Self::one() {
                write!(f, "w")?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if t.coeff > 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl From<Ordinal> for String {
    fn from(o: Ordinal) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for Ordinal {
    type Error = OrdinalError;
    fn try_from(s: String) -> Result<Self, OrdinalError> {
        s.parse()
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(text: &str) -> Result<Self, OrdinalError> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let ord = parser.ordinal()?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(ord)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> OrdinalError {
        OrdinalError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), OrdinalError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn natural(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Parse {
                position: start,
                message: "natural number out of range".into(),
            })
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms = Vec::new();
        loop {
            if let Some(t) = self.term()? {
                terms.push(t);
            }
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if terms.len() > 1 && terms.iter().any(|t: &Term| t.coeff == 0) {
            return Err(self.error("zero term inside a sum"));
        }
        Ordinal::from_terms(terms.into_iter().filter(|t| t.coeff > 0).collect())
    }

    /// `None` for a literal `0`.
    fn term(&mut self) -> Result<Option<Term>, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    if self.peek() == Some(b'(') {
                        self.pos += 1;
                        let e = self.ordinal()?;
                        self.expect(b')')?;
                        e
                    } else {
                        Ordinal::nat(self.natural()?)
                    }
                } else {
                    Ordinal::one()
                };
                let coeff = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let c = self.natural()?;
                    if c == 0 {
                        return Err(self.error("coefficient must be positive"));
                    }
                    c
                } else {
                    1
                };
                Ok(Some(Term { exp, coeff }))
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.natural()?;
                Ok((n > 0).then(|| Term {
                    exp: Ordinal::zero(),
                    coeff: n,
                }))
            }
            _ => Err(self.error("expected 'w' or a natural number")),
        }
    }
}

/// Shorthand for `ω^2·a + ω·b + c`.
pub fn below_omega_cubed(a: u64, b: u64, c: u64) -> Ordinal {
    Ordinal::monomial(Ordinal::nat(2), a)
        .plus(&Ordinal::monomial(Ordinal::one(), b))
        .plus(&Ordinal::nat(c))
}

/// Level-by-level enumeration of the ordinals below a bound.
///
/// Level `n` holds the ordinals of norm exactly `n`, listed in increasing
/// order; every ordinal below the bound lands in exactly one level.
pub struct LevelEnumerator {
    bound: Ordinal,
    exponents: Option<Box<LevelEnumerator>>,
    known_exps: std::collections::BTreeSet<Ordinal>,
    next_level: u64,
}

impl LevelEnumerator {
    pub fn new(bound: Ordinal) -> Self {
        let exponents = match bound.terms.first() {
            Some(t) if !t.exp.is_zero() => Some(Box::new(Self::new(t.exp.succ()))),
            _ => None,
        };
        Self {
            bound,
            exponents,
            known_exps: std::collections::BTreeSet::new(),
            next_level: 0,
        }
    }

    /// The next level; the first call returns level 0.
    pub fn next_level(&mut self) -> Vec<Ordinal> {
        let level = self.next_level;
        self.next_level += 1;
        if let Some(n) = self.bound.as_nat() {
            return if level < n { vec![Ordinal::nat(level)] } else { Vec::new() };
        }
        if level == 0 {
            return vec![Ordinal::zero()];
        }
        match &mut self.exponents {
            Some(sub) => self.known_exps.extend(sub.next_level()),
            None => {
                self.known_exps.insert(Ordinal::zero());
            }
        }
        let exponents: Vec<Ordinal> = self.known_exps.iter().cloned().collect();
        let mut out = Vec::new();
        level_dfs(&exponents, level, &self.bound, &mut Vec::new(), false, &mut out);
        out
    }
}

fn level_dfs(
    exponents: &[Ordinal],
    level: u64,
    bound: &Ordinal,
    prefix: &mut Vec<Term>,
    hit_level: bool,
    out: &mut Vec<Ordinal>,
) {
    if hit_level {
        out.push(Ordinal {
            terms: prefix.clone(),
        });
    }
    let ceiling = prefix.last().map(|t| t.exp.clone());
    for exp in exponents {
        if ceiling.as_ref().is_some_and(|c| exp >= c) {
            break;
        }
        let exp_norm = if exp.is_zero() { 0 } else { 1 + exp.norm() };
        if exp_norm > level {
            continue;
        }
        for coeff in 1..=level {
            prefix.push(Term {
                exp: exp.clone(),
                coeff,
            });
            let below = Ordinal {
                terms: prefix.clone(),
            } < *bound;
            if below {
                let term_hits = coeff.max(exp_norm) == level;
                level_dfs(exponents, level, bound, prefix, hit_level || term_hits, out);
            }
            prefix.pop();
            if !below {
                break;
            }
        }
    }
}

/// Enumerates ordinals `< bound` level by level (increasing within a level),
/// stopping after `budget` items. Returns the items and whether everything
/// below `bound` was listed.
pub fn enumerate_below(bound: &Ordinal, budget: usize) -> (Vec<Ordinal>, bool) {
    if let Some(n) = bound.as_nat() {
        let take = (n as usize).min(budget);
        return ((0..take as u64).map(Ordinal::nat).collect(), take as u64 == n);
    }
    let mut levels = LevelEnumerator::new(bound.clone());
    let mut out = Vec::new();
    while out.len() < budget {
        let level = levels.next_level();
        let room = budget - out.len();
        out.extend(level.into_iter().take(room));
    }
    (out, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert!(o("0").is_zero());
        let x = o("w^(w)*2+w+3");
        assert_eq!(x.terms().len(), 3);
        assert_eq!(x.to_string(), "w^(w)*2+w+3");
        assert_eq!("w+w^(2)".parse::<Ordinal>(), Err(OrdinalError::NotCnf));
        assert_eq!(o("w^2"), o("w^(2)"));
        assert!(matches!("w^(".parse::<Ordinal>(), Err(OrdinalError::Parse { position: 3, .. })));
        assert!(matches!("w*0".parse::<Ordinal>(), Err(OrdinalError::Parse { .. })));
        assert!(matches!("3+w".parse::<Ordinal>(), Err(OrdinalError::NotCnf)));
    }

    #[test]
    fn order_and_kind() {
        assert!(o("w") > o("1000"));
        assert!(o("w^(2)") > o("w*5+7"));
        assert!(o("w*2") > o("w+9"));
        assert_eq!(o("w+3").kind(), Kind::Successor);
        assert_eq!(o("w^(w)").kind(), Kind::Limit);
        assert_eq!(o("0").kind(), Kind::Zero);
    }

    #[test]
    fn addition_absorbs_smaller_terms() {
        assert_eq!(o("3").plus(&o("w")), o("w"));
        assert_eq!(o("w+3").plus(&o("w")), o("w*2"));
        assert_eq!(o("w^(2)+w").plus(&o("5")), o("w^(2)+w+5"));
        assert_eq!(o("w+5").pred().unwrap(), o("w+4"));
    }

    #[test]
    fn fundamental_sequences() {
        let seq = |l: &str| -> Vec<String> {
            (0..3)
                .map(|n| o(l).standard_fundamental(n).unwrap().to_string())
                .collect()
        };
        assert_eq!(seq("w"), ["0", "1", "2"]);
        assert_eq!(seq("w*2"), ["w", "w+1", "w+2"]);
        assert_eq!(seq("w^(w)"), ["1", "w", "w^(2)"]);
        assert_eq!(seq("w^(2)"), ["0", "w", "w*2"]);
        assert_eq!(seq("w^(2)*2+w*3"), ["w^(2)*2+w*2", "w^(2)*2+w*2+1", "w^(2)*2+w*2+2"]);
        assert!(o("w+1").standard_fundamental(0).is_err());
    }

    #[test]
    fn norm_levels_enumerate_once_in_order() {
        let bound = o("w^(3)");
        let (items, exhausted) = enumerate_below(&bound, 2000);
        assert!(!exhausted);
        let set: std::collections::BTreeSet<_> = items.iter().cloned().collect();
        assert_eq!(set.len(), items.len());
        assert!(items.iter().all(|x| x < &bound));
        // every ω²a+ωb+c with small coefficients shows up early
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!(set.contains(&below_omega_cubed(a, b, c)));
                }
            }
        }
        let (finite, done) = enumerate_below(&o("5"), 100);
        assert_eq!(finite.len(), 5);
        assert!(done);
    }
}
