// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Boolean formulas in conjunctive normal form, conflict counting and a
//! brute-force solution oracle.
//!
//! Assignments are packed into the low `n` bits of a `u32`. Variable `V_k`
//! lives at bit position `n - k`, so `V_1` is the most significant bit and
//! the string `"110"` reads `V_1 V_2 V_3`. The alternative [`BitOrder::LsbV1`]
//! only changes how assignments are rendered and parsed at the boundary.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::reverse_bits;

pub const MAX_VARIABLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },
    #[error("variable v{index} is outside 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("variable count {0} is outside 1..={MAX_VARIABLES}")]
    VariableCount(usize),
    #[error("a formula needs at least one clause")]
    Empty,
    #[error("a clause needs at least one literal")]
    EmptyClause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    /// 1-based variable index.
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: usize) -> Self {
        Literal {
            variable,
            negated: false,
        }
    }

    pub fn neg(variable: usize) -> Self {
        Literal {
            variable,
            negated: true,
        }
    }

    pub fn negate(self) -> Self {
        Literal {
            negated: !self.negated,
            ..self
        }
    }

    pub fn is_satisfied_by(&self, a: Assignment) -> bool {
        a.value(self.variable) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!v{}", self.variable)
        } else {
            write!(f, "v{}", self.variable)
        }
    }
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        if literals.is_empty() {
            return Err(FormulaError::EmptyClause);
        }
        Ok(Clause { literals })
    }

    pub fn unit(literal: Literal) -> Self {
        Clause {
            literals: vec![literal],
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn is_satisfied_by(&self, a: Assignment) -> bool {
        self.literals.iter().any(|l| l.is_satisfied_by(a))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.len() == 1 {
            return write!(f, "{}", self.literals[0]);
        }
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A conjunction of `m ≥ 1` clauses over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formula {
    n: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if n == 0 || n > MAX_VARIABLES {
            return Err(FormulaError::VariableCount(n));
        }
        if clauses.is_empty() {
            return Err(FormulaError::Empty);
        }
        for lit in clauses.iter().flat_map(|c| c.literals.iter()) {
            if lit.variable == 0 || lit.variable > n {
                return Err(FormulaError::VariableOutOfRange {
                    index: lit.variable,
                    n,
                });
            }
        }
        Ok(Formula { n, clauses })
    }

    /// A 1-SAT formula with one unit clause per literal.
    pub fn one_sat(n: usize, literals: &[Literal]) -> Result<Self, FormulaError> {
        Formula::new(n, literals.iter().copied().map(Clause::unit).collect())
    }

    /// Parses the `v1 & !v2 & (v3 | v4)` grammar; `n` is the largest variable
    /// index mentioned.
    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        let clauses = Parser::new(text).formula()?;
        let n = clauses
            .iter()
            .flat_map(|c| c.literals.iter())
            .map(|l| l.variable)
            .max()
            .unwrap_or(0);
        Formula::new(n, clauses)
    }

    /// Parses and widens the variable count to `n`.
    pub fn parse_with_n(text: &str, n: usize) -> Result<Self, FormulaError> {
        let clauses = Parser::new(text).formula()?;
        Formula::new(n, clauses)
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_one_sat(&self) -> bool {
        self.clauses.iter().all(|c| c.literals.len() == 1)
    }

    /// Flips the sign of every occurrence of variable `k`.
    pub fn negate_variable(&self, k: usize) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause {
                literals: c
                    .literals
                    .iter()
                    .map(|l| if l.variable == k { l.negate() } else { *l })
                    .collect(),
            })
            .collect();
        Formula { n: self.n, clauses }
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> {
        let n = self.n;
        (0..1u32 << n).map(move |bits| Assignment { bits, n })
    }

    /// Number of clauses falsified by `a`.
    pub fn conflicts(&self, a: Assignment) -> usize {
        debug_assert_eq!(a.n, self.n, "assignment width mismatch");
        self.clauses
            .iter()
            .filter(|c| !c.is_satisfied_by(a))
            .count()
    }

    /// Exhaustive enumeration of the zero-conflict assignments.
    pub fn solutions(&self) -> BTreeSet<Assignment> {
        self.assignments()
            .filter(|&a| self.conflicts(a) == 0)
            .collect()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src
                .chars()
                .enumerate()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.chars.last().map_or(0, |&(p, _)| p + 1))
    }

    fn error<T>(&self, reason: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Parse {
            position: self.position(),
            reason: reason.into(),
        })
    }

    fn formula(&mut self) -> Result<Vec<Clause>, FormulaError> {
        if self.peek().is_none() {
            return self.error("empty formula");
        }
        let mut clauses = vec![self.clause()?];
        while let Some(c) = self.peek() {
            if c != '&' {
                return self.error(format!("expected '&', found '{c}'"));
            }
            self.pos += 1;
            clauses.push(self.clause()?);
        }
        Ok(clauses)
    }

    fn clause(&mut self) -> Result<Clause, FormulaError> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut literals = vec![self.literal()?];
            loop {
                match self.peek() {
                    Some('|') => {
                        self.pos += 1;
                        literals.push(self.literal()?);
                    }
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return self.error(format!("expected '|' or ')', found '{c}'")),
                    None => return self.error("unclosed '('"),
                }
            }
            Ok(Clause { literals })
        } else {
            Ok(Clause::unit(self.literal()?))
        }
    }

    fn literal(&mut self) -> Result<Literal, FormulaError> {
        let mut negated = false;
        while matches!(self.peek(), Some('!') | Some('~')) {
            negated = !negated;
            self.pos += 1;
        }
        match self.peek() {
            Some('v') | Some('V') => self.pos += 1,
            Some(c) => return self.error(format!("expected variable 'v<k>', found '{c}'")),
            None => return self.error("expected variable, found end of input"),
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected variable index");
        }
        let digits: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let variable: usize = match digits.parse() {
            Ok(v) if v >= 1 => v,
            _ => {
                self.pos = start;
                return self.error(format!("invalid variable index '{digits}'"));
            }
        };
        Ok(Literal { variable, negated })
    }
}

/// How assignment bit strings are written at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitOrder {
    /// `V_1` is the leftmost (most significant) character.
    #[default]
    MsbV1,
    /// `V_1` is the rightmost character.
    LsbV1,
}

impl BitOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            BitOrder::MsbV1 => "msb-v1",
            BitOrder::LsbV1 => "lsb-v1",
        }
    }

    /// Maps an internal (V1 = MSB) index to the external index in this order.
    pub fn to_external(self, bits: u32, n: usize) -> u32 {
        match self {
            BitOrder::MsbV1 => bits,
            BitOrder::LsbV1 => reverse_bits(bits, n),
        }
    }

    /// Inverse of [`BitOrder::to_external`] (the map is an involution).
    pub fn to_internal(self, bits: u32, n: usize) -> u32 {
        self.to_external(bits, n)
    }
}

impl FromStr for BitOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "msb-v1" => Ok(BitOrder::MsbV1),
            "lsb-v1" => Ok(BitOrder::LsbV1),
            other => Err(format!(
                "unknown bit order '{other}' (expected msb-v1 or lsb-v1)"
            )),
        }
    }
}

/// A full truth assignment of `n` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    bits: u32,
    n: usize,
}

impl Assignment {
    pub fn new(bits: u32, n: usize) -> Self {
        assert!(
            (1..=MAX_VARIABLES).contains(&n),
            "variable count {n} out of range"
        );
        assert!(
            bits < 1u32 << n,
            "assignment {bits} does not fit in {n} bits"
        );
        Assignment { bits, n }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn num_variables(self) -> usize {
        self.n
    }

    /// Truth value of `V_k` (1-based).
    pub fn value(self, k: usize) -> bool {
        (self.bits >> (self.n - k)) & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Flips variable `k`.
    pub fn flip(self, k: usize) -> Assignment {
        Assignment {
            bits: self.bits ^ variable_mask(self.n, k),
            n: self.n,
        }
    }

    /// Parses a bit string written in `order`.
    pub fn parse(text: &str, order: BitOrder) -> Result<Self, FormulaError> {
        let n = text.len();
        if n == 0 || n > MAX_VARIABLES {
            return Err(FormulaError::VariableCount(n));
        }
        let external = u32::from_str_radix(text, 2).map_err(|_| FormulaError::Parse {
            position: text.find(|c| c != '0' && c != '1').unwrap_or(0),
            reason: format!("'{text}' is not a bit string"),
        })?;
        Ok(Assignment {
            bits: order.to_internal(external, n),
            n,
        })
    }

    pub fn to_string_in(self, order: BitOrder) -> String {
        format!(
            "{:0width$b}",
            order.to_external(self.bits, self.n),
            width = self.n
        )
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in(BitOrder::MsbV1))
    }
}

/// Bit mask of variable `k` within an `n`-bit assignment.
pub fn variable_mask(n: usize, k: usize) -> u32 {
    1u32 << (n - k)
}

/// Number of differing bit positions.
pub fn hamming_distance(r: Assignment, s: Assignment) -> u32 {
    debug_assert_eq!(r.n, s.n, "assignment width mismatch");
    (r.bits ^ s.bits).count_ones()
}

/// Success probability after `iterations` Grover steps with one marked
/// item among `2^n`.
pub fn grover_success_probability(n: usize, iterations: usize) -> f64 {
    let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
    ((2.0 * iterations as f64 + 1.0) * theta).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    fn a(text: &str) -> Assignment {
        Assignment::parse(text, BitOrder::MsbV1).unwrap()
    }

    #[test]
    fn conflicts_examples() {
        let all = f("v1 & v2 & v3");
        assert_eq!(all.conflicts(a("111")), 0);
        assert_eq!(all.conflicts(a("000")), 3);
        let v1 = Formula::parse_with_n("v1", 3).unwrap();
        for rest in 0..4 {
            assert_eq!(v1.conflicts(Assignment::new(rest, 3)), 1);
        }
    }

    #[test]
    fn solutions_examples() {
        let sols: Vec<String> = f("v1 & v2 & v3")
            .solutions()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sols, ["111"]);

        let sols: Vec<String> = Formula::parse_with_n("!v1", 3)
            .unwrap()
            .solutions()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sols, ["000", "001", "010", "011"]);

        assert!(f("v1 & !v1").solutions().is_empty());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(a("101"), a("101")), 0);
        assert_eq!(hamming_distance(a("101"), a("110")), 2);
        assert_eq!(hamming_distance(a("000"), a("111")), 3);
    }

    #[test]
    fn grover_examples() {
        assert!((grover_success_probability(3, 2) - 0.945).abs() < 0.005);
        for n in 1..10 {
            let p = grover_success_probability(n, 0);
            assert!((p - 2f64.powi(-(n as i32))).abs() < 1e-15);
        }
        assert!((grover_success_probability(2, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_accepts_whitespace_and_negation() {
        let g = f("  v1&!v2 &   v3 ");
        assert_eq!(g.to_string(), "v1 & !v2 & v3");
        assert_eq!(g.num_clauses(), 3);
        assert!(g.is_one_sat());
        let k = f("(v1 | !v3) & v2");
        assert!(!k.is_one_sat());
        assert_eq!(k.to_string(), "(v1 | !v3) & v2");
    }

    #[test]
    fn parse_errors_carry_position() {
        match Formula::parse("v1 & x2") {
            Err(FormulaError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        match Formula::parse("v1 v2") {
            Err(FormulaError::Parse { position, reason }) => {
                assert_eq!(position, 3);
                assert!(reason.contains("'&'"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Formula::parse(""),
            Err(FormulaError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse("v0"),
            Err(FormulaError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse("v1 &"),
            Err(FormulaError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse("(v1 | v2"),
            Err(FormulaError::Parse { .. })
        ));
    }

    #[test]
    fn variable_range_is_checked() {
        assert_eq!(
            Formula::parse_with_n("v4", 3),
            Err(FormulaError::VariableOutOfRange { index: 4, n: 3 })
        );
        assert_eq!(Formula::parse("v17"), Err(FormulaError::VariableCount(17)));
    }

    #[test]
    fn bit_order_round_trip() {
        let s = Assignment::parse("011", BitOrder::MsbV1).unwrap();
        assert_eq!(s.to_string_in(BitOrder::LsbV1), "110");
        assert_eq!(Assignment::parse("110", BitOrder::LsbV1).unwrap(), s);
        assert!(!s.value(1) && s.value(2) && s.value(3));
    }
}
