// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-spin pulses, their text grammar and unitaries.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! sequence := item*
//! item     := (atom | '(' atom+ ')') spin ('^' int)?
//! atom     := axis '~'? ('[' angle ']')? ('^' int)?
//! axis     := 'X' | 'Y' | 'Z'
//! angle    := real | real? 'pi' ('/' real)?       (radians)
//! ```
//!
//! A bare axis is a `π/2` rotation and `~` reverses the axis, so `X~1` is a
//! `π/2` pulse about `−x` on spin 1. `^k` repeats the preceding atom or the
//! whole item. Sequences are written in operator order: the rightmost pulse
//! acts first, so `X1^2 Y1` is a Hadamard gate up to a global phase.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::PulseError;
use crate::hogg::{DenseOperator, StateVector};
use crate::linalg::{self, CMatrix, CVector, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Axis> {
        match c {
            'X' | 'x' => Some(Axis::X),
            'Y' | 'y' => Some(Axis::Y),
            'Z' | 'z' => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn pauli(self) -> CMatrix {
        match self {
            Axis::X => linalg::pauli_x(),
            Axis::Y => linalg::pauli_y(),
            Axis::Z => linalg::pauli_z(),
        }
    }
}

/// Rotation `exp(−iθσ/2)` of one spin. A pulse about a reversed axis
/// (`X̄`, `Ȳ`, `Z̄`) is stored as a negative angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pulse {
    pub spin: usize,
    pub axis: Axis,
    pub angle: f64,
}

const ANGLE_EPS: f64 = 1e-12;

impl Pulse {
    pub fn new(spin: usize, axis: Axis, angle: f64) -> Pulse {
        Pulse { spin, axis, angle }
    }

    /// `π/2` about `axis`, or about the reversed axis when `reversed`.
    pub fn quarter(spin: usize, axis: Axis, reversed: bool) -> Pulse {
        let angle = if reversed { -FRAC_PI_2 } else { FRAC_PI_2 };
        Pulse { spin, axis, angle }
    }

    /// The `2×2` rotation matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (self.angle / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        let mis = Complex64::new(0.0, -s);
        match self.axis {
            Axis::X => [[c, mis], [mis, c]],
            Axis::Y => [[c, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), c]],
            Axis::Z => [[c + mis, ZERO], [ZERO, c - mis]],
        }
    }

    pub fn inverse(&self) -> Pulse {
        Pulse {
            angle: -self.angle,
            ..*self
        }
    }

    /// Angle as a multiple of `π/2`, when it is one.
    fn quarter_turns(&self) -> Option<i64> {
        let k = self.angle / FRAC_PI_2;
        let r = k.round();
        ((k - r).abs() < 1e-9 && r != 0.0).then_some(r as i64)
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = self.axis.letter();
        match self.quarter_turns() {
            Some(k) => {
                let bar = if k < 0 { "~" } else { "" };
                let reps = k.unsigned_abs();
                if reps == 1 {
                    write!(f, "{letter}{bar}{}", self.spin)
                } else {
                    write!(f, "{letter}{bar}{}^{reps}", self.spin)
                }
            }
            None => write!(
                f,
                "{letter}[{}]{}",
                crate::report::format_sig(self.angle),
                self.spin
            ),
        }
    }
}

/// Pulses in written (operator) order: the last pulse acts first.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PulseSequence {
    pub pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<Pulse>) -> Self {
        PulseSequence { pulses }
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    /// Highest spin index used, zero for the empty sequence.
    pub fn max_spin(&self) -> usize {
        self.pulses.iter().map(|p| p.spin).max().unwrap_or(0)
    }

    pub fn validate(&self, n: usize) -> Result<(), PulseError> {
        for p in &self.pulses {
            if p.spin == 0 || p.spin > n {
                return Err(PulseError::InvalidSpin { spin: p.spin, n });
            }
            if !p.angle.is_finite() {
                return Err(PulseError::Parse {
                    position: 0,
                    reason: "non-finite angle".into(),
                });
            }
        }
        Ok(())
    }

    /// Operator product `self · other`: `other` acts first.
    pub fn compose(&self, other: &PulseSequence) -> PulseSequence {
        let mut pulses = self.pulses.clone();
        pulses.extend_from_slice(&other.pulses);
        PulseSequence { pulses }
    }

    /// Inverse sequence: reversed order, negated angles.
    pub fn inverse(&self) -> PulseSequence {
        PulseSequence {
            pulses: self.pulses.iter().rev().map(Pulse::inverse).collect(),
        }
    }

    /// Relabels spin `k` as `n + 1 − k`.
    pub fn mirrored(&self, n: usize) -> PulseSequence {
        PulseSequence {
            pulses: self
                .pulses
                .iter()
                .map(|p| Pulse {
                    spin: n + 1 - p.spin,
                    ..*p
                })
                .collect(),
        }
    }
}

impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pulses.iter().map(Pulse::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for PulseSequence {
    type Err = PulseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequence(s)
    }
}

/// Multiplies `rows` of a matrix or state (indexed by basis state) by the
/// rotation `p` on the left.
pub(crate) fn apply_pulse_rows(data: &mut CMatrix, n: usize, p: &Pulse) {
    let [[a, b], [c, d]] = p.matrix();
    let bit = 1usize << (n - p.spin);
    let cols = data.ncols();
    for r in 0..data.nrows() {
        if r & bit != 0 {
            continue;
        }
        let r1 = r | bit;
        for k in 0..cols {
            let x0 = data[[r, k]];
            let x1 = data[[r1, k]];
            data[[r, k]] = a * x0 + b * x1;
            data[[r1, k]] = c * x0 + d * x1;
        }
    }
}

/// Dense unitary of `seq` on `n` spins.
pub fn sequence_to_unitary(seq: &PulseSequence, n: usize) -> Result<DenseOperator, PulseError> {
    check_dense(n)?;
    seq.validate(n)?;
    let mut u = linalg::identity(1 << n);
    for p in seq.pulses.iter().rev() {
        apply_pulse_rows(&mut u, n, p);
    }
    Ok(DenseOperator::new(n, u))
}

/// `seq` applied to a state.
pub fn apply_sequence(seq: &PulseSequence, psi: &StateVector) -> Result<StateVector, PulseError> {
    let n = psi.num_qubits();
    seq.validate(n)?;
    let mut col = psi.amplitudes().clone().insert_axis(ndarray::Axis(1));
    for p in seq.pulses.iter().rev() {
        apply_pulse_rows(&mut col, n, p);
    }
    let amps: CVector = col.remove_axis(ndarray::Axis(1));
    Ok(StateVector::from_amplitudes(n, amps))
}

pub(crate) fn check_dense(n: usize) -> Result<(), PulseError> {
    use crate::hogg::MAX_DENSE_QUBITS;
    if n == 0 || n > MAX_DENSE_QUBITS {
        Err(PulseError::SpinCount {
            n,
            max: MAX_DENSE_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// Wraps an angle into `(−2π, 2π]`, which keeps rotations exact.
fn wrap_4pi(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(4.0 * PI);
    if t > 2.0 * PI + ANGLE_EPS {
        t -= 4.0 * PI;
    }
    t
}

/// Merges adjacent same-axis pulses on each spin and drops identities.
///
/// Pulses on different spins commute, so a pulse merges with the previous
/// pulse on its own spin regardless of what other spins do in between.
/// Angles are kept modulo `4π`, so the result is exact, not merely equal up
/// to a global phase.
pub fn reduce(seq: &PulseSequence) -> PulseSequence {
    let mut out: Vec<Option<Pulse>> = Vec::with_capacity(seq.len());
    let mut on_spin: HashMap<usize, Vec<usize>> = HashMap::new();
    for p in &seq.pulses {
        let stack = on_spin.entry(p.spin).or_default();
        if let Some(&i) = stack.last() {
            let prev = out[i].as_mut().expect("live pulse");
            if prev.axis == p.axis {
                prev.angle = wrap_4pi(prev.angle + p.angle);
                if prev.angle.abs() < ANGLE_EPS {
                    out[i] = None;
                    stack.pop();
                }
                continue;
            }
        }
        let angle = wrap_4pi(p.angle);
        if angle.abs() < ANGLE_EPS {
            continue;
        }
        out.push(Some(Pulse { angle, ..*p }));
        stack.push(out.len() - 1);
    }
    PulseSequence {
        pulses: out.into_iter().flatten().collect(),
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let chars = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser {
            chars,
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.text.len(), |&(i, _)| i)
    }

    fn err(&self, reason: impl Into<String>) -> PulseError {
        PulseError::Parse {
            position: self.offset(),
            reason: reason.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value.saturating_mul(10).saturating_add(d as usize);
            self.pos += 1;
        }
        (self.pos > start).then_some(value)
    }

    fn exponent(&mut self) -> Result<usize, PulseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        match self.number() {
            Some(k) if k >= 1 => Ok(k),
            _ => Err(self.err("expected a positive exponent after '^'")),
        }
    }

    fn angle(&mut self) -> Result<f64, PulseError> {
        let start = self.offset();
        let mut body = String::new();
        loop {
            match self.peek() {
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    body.push(c);
                    self.pos += 1;
                }
                None => return Err(self.err("unterminated '['")),
            }
        }
        parse_angle(&body).ok_or(PulseError::Parse {
            position: start,
            reason: format!("invalid angle '{body}'"),
        })
    }

    /// One axis atom; returns its pulse template (spin filled in later).
    fn atom(&mut self) -> Result<Vec<(Axis, f64)>, PulseError> {
        let axis = match self.peek().and_then(Axis::from_letter) {
            Some(a) => a,
            None => return Err(self.err("expected X, Y or Z")),
        };
        self.pos += 1;
        let reversed = self.eat('~');
        let mut angle = if self.eat('[') {
            self.angle()?
        } else {
            FRAC_PI_2
        };
        if reversed {
            angle = -angle;
        }
        let reps = self.exponent()?;
        Ok(vec![(axis, angle); reps])
    }

    fn item(&mut self) -> Result<Vec<Pulse>, PulseError> {
        let body = if self.eat('(') {
            if self.peek() == Some(')') {
                return Err(self.err("empty group"));
            }
            let mut body = Vec::new();
            while !self.eat(')') {
                if self.peek().is_none() {
                    return Err(self.err("unterminated '('"));
                }
                body.extend(self.atom()?);
            }
            body
        } else {
            self.atom()?
        };
        let at = self.offset();
        let spin = match self.number() {
            Some(s) if s >= 1 => s,
            _ => {
                return Err(PulseError::Parse {
                    position: at,
                    reason: "expected a spin index 1 or higher".into(),
                })
            }
        };
        let reps = self.exponent()?;
        let once: Vec<Pulse> = body
            .into_iter()
            .map(|(axis, angle)| Pulse { spin, axis, angle })
            .collect();
        Ok(once.repeat(reps))
    }
}

fn parse_angle(body: &str) -> Option<f64> {
    let body = body.trim();
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let value = if let Some(idx) = body.find("pi") {
        let coeff = &body[..idx];
        let coeff: f64 = if coeff.is_empty() {
            1.0
        } else {
            coeff.trim_end_matches('*').parse().ok()?
        };
        let rest = &body[idx + 2..];
        let div: f64 = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')?.parse().ok()?
        };
        coeff * PI / div
    } else {
        body.parse().ok()?
    };
    let value = if neg { -value } else { value };
    value.is_finite().then_some(value)
}

/// Parses the pulse grammar; errors carry the byte offset of the problem.
pub fn parse_sequence(text: &str) -> Result<PulseSequence, PulseError> {
    let mut p = Parser::new(text);
    let mut pulses = Vec::new();
    while p.peek().is_some() {
        pulses.extend(p.item()?);
    }
    Ok(PulseSequence { pulses })
}

/// `X1^2 Y1`, the Hadamard gate on `spin` up to a global phase.
pub fn hadamard(spin: usize) -> PulseSequence {
    PulseSequence::new(vec![
        Pulse::quarter(spin, Axis::X, false),
        Pulse::quarter(spin, Axis::X, false),
        Pulse::quarter(spin, Axis::Y, false),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hogg::walsh_hadamard;

    fn seq(text: &str) -> PulseSequence {
        text.parse().unwrap()
    }

    #[test]
    fn grammar_forms() {
        let s = seq("(XY~X)1 (XY~X~)2");
        assert_eq!(s.len(), 6);
        assert_eq!(s.pulses[1], Pulse::quarter(1, Axis::Y, true));
        assert_eq!(s.pulses[5], Pulse::quarter(2, Axis::X, true));
        assert_eq!(seq("X1^2 Y2 Y3").len(), 4);
        assert_eq!(seq("(X^2 Y)1"), hadamard(1));
        assert_eq!(seq("(XY)2^2").to_string(), "X2 Y2 X2 Y2");
        let z = seq("Z[-pi/4]3");
        assert!((z.pulses[0].angle + PI / 4.0).abs() < 1e-15);
        assert!((seq("X[0.5pi]1").pulses[0].angle - FRAC_PI_2).abs() < 1e-15);
        assert!((seq("Y~[0.3]2").pulses[0].angle + 0.3).abs() < 1e-15);
        assert!(seq("").is_empty());
        assert!(seq("  ").is_empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases = [
            ("X", 1),
            ("X1 Q2", 3),
            ("(XY", 3),
            ("()1", 1),
            ("X1^", 3),
            ("X[abc]1", 2),
            ("X0", 1),
        ];
        for (text, want) in cases {
            match parse_sequence(text) {
                Err(PulseError::Parse { position, .. }) => assert_eq!(position, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trip() {
        for text in ["X1 Y~2 Z3^2", "X~1^3", "Z[0.3]2 X1"] {
            let s = seq(text);
            assert_eq!(seq(&s.to_string()), s);
        }
        assert_eq!(seq("X~1^2").to_string(), "X~1 X~1");
        assert_eq!(reduce(&seq("X~1^2")).to_string(), "X~1^2");
    }

    #[test]
    fn hadamard_from_quarter_pulses() {
        let u = sequence_to_unitary(&seq("X1^2 Y1"), 1).unwrap();
        let w = walsh_hadamard(1).unwrap();
        let al = linalg::align_global_phase(u.entries().iter(), w.entries().iter());
        assert!(al.max_abs_error < 1e-12);
        assert!((al.global_phase.norm() - 1.0).abs() < 1e-12);
        let h3 = sequence_to_unitary(
            &(hadamard(1).compose(&hadamard(2)).compose(&hadamard(3))),
            3,
        )
        .unwrap();
        let al = linalg::align_global_phase(
            h3.entries().iter(),
            walsh_hadamard(3).unwrap().entries().iter(),
        );
        assert!(al.max_abs_error < 1e-12);
    }

    #[test]
    fn rightmost_pulse_acts_first() {
        let xy = sequence_to_unitary(&seq("X1 Y1"), 1).unwrap();
        let x = Pulse::quarter(1, Axis::X, false);
        let y = Pulse::quarter(1, Axis::Y, false);
        let rx = linalg::rotation(&linalg::pauli_x(), x.angle);
        let ry = linalg::rotation(&linalg::pauli_y(), y.angle);
        assert!(linalg::max_abs_diff(xy.entries(), &rx.dot(&ry)) < 1e-15);
    }

    #[test]
    fn matrices_match_exponential_form() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for angle in [0.3, -1.1, PI] {
                let m = Pulse::new(1, axis, angle).matrix();
                let want = linalg::rotation(&axis.pauli(), angle);
                for r in 0..2 {
                    for c in 0..2 {
                        assert!((m[r][c] - want[[r, c]]).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_sequence_is_identity() {
        let u = sequence_to_unitary(&PulseSequence::default(), 3).unwrap();
        assert!(linalg::max_abs_diff(u.entries(), &linalg::identity(8)) < 1e-15);
        assert!(matches!(
            sequence_to_unitary(&seq("X4"), 3),
            Err(PulseError::InvalidSpin { spin: 4, n: 3 })
        ));
    }

    #[test]
    fn state_action_matches_dense() {
        let s = seq("(XY~X)1 Y2 X~3^2");
        let u = sequence_to_unitary(&s, 3).unwrap();
        let psi = apply_sequence(&s, &StateVector::basis(3, 0)).unwrap();
        let col = u.first_column();
        assert!(linalg::max_abs_diff_vec(psi.amplitudes(), col.amplitudes()) < 1e-15);
    }

    #[test]
    fn reduction_merges_and_cancels() {
        assert_eq!(reduce(&seq("X1 X~1 Y2")).to_string(), "Y2");
        assert_eq!(reduce(&seq("X1 Y2 X1")).to_string(), "X1^2 Y2");
        assert_eq!(reduce(&seq("X1^4")).to_string(), "X1^4");
        assert!(reduce(&seq("X1^8")).is_empty());
        assert_eq!(reduce(&seq("X1 Y1 Z2 Y~1 X~1")).to_string(), "Z2");
        for text in ["(XY~X)1(XY~X)2(XY~X)3", "X1 X1 Y1 Y~1 Z2 Z~2^3"] {
            let s = seq(text);
            let a = sequence_to_unitary(&s, 3).unwrap();
            let b = sequence_to_unitary(&reduce(&s), 3).unwrap();
            assert!(
                linalg::max_abs_diff(a.entries(), b.entries()) < 1e-12,
                "{text}"
            );
        }
    }
}
