//! Finite unions of half-open subintervals of `[0, 2π)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, pairwise disjoint intervals `[a, b)` with `0 ≤ a < b ≤ 2π`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { intervals: vec![(0.0, TAU)] }
    }

    /// Normalizes arbitrary `(a, b)` pairs: endpoints are reduced mod 2π,
    /// wrapped intervals are split, and overlapping or touching pieces merged.
    pub fn new(pieces: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut parts = Vec::new();
        for (a, b) in pieces {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Usage(format!("interval ({a}, {b}) has a non-finite endpoint")));
            }
            if b < a {
                return Err(Error::Usage(format!("interval ({a}, {b}) has b < a")));
            }
            let len = b - a;
            if len == 0.0 {
                continue;
            }
            if len >= TAU {
                return Ok(Self::full());
            }
            let start = a.rem_euclid(TAU);
            let end = start + len;
            if end <= TAU {
                parts.push((start, end));
            } else {
                parts.push((start, TAU));
                parts.push((0.0, end - TAU));
            }
        }
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length `|X|`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// `[0, 2π) \ X`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.intervals {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < TAU {
            out.push((cursor, TAU));
        }
        Self { intervals: out }
    }

    /// `X ⊕ x = {y ∈ [0, 2π) : (y − x) mod 2π ∈ X}`.
    pub fn shift(&self, x: f64) -> Self {
        if self.intervals == [(0.0, TAU)] {
            return self.clone();
        }
        Self::new(self.intervals.iter().map(|&(a, b)| (a + x, b + x)))
            .expect("shifted endpoints stay finite")
    }

    /// `true` if `other ⊆ self` (endpoints compared exactly).
    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other
            .intervals
            .iter()
            .all(|&(a, b)| self.intervals.iter().any(|&(c, d)| c <= a && b <= d))
    }
}

/// Parses `a:b,c:d`, where endpoints are arithmetic in numbers and `pi`
/// (`"0:pi,3*pi/2:2*pi"`). `empty` and `full` are accepted too.
impl FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "" | "empty" => return Ok(Self::empty()),
            "full" => return Ok(Self::full()),
            _ => {}
        }
        let mut pieces = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("interval `{part}` is not of the form a:b")))?;
            let a = eval_expr(a)?;
            let b = eval_expr(b)?;
            if !(0.0..=TAU).contains(&a) || !(0.0..=TAU).contains(&b) || a >= b {
                return Err(Error::Parse(format!(
                    "interval `{part}` must satisfy 0 ≤ a < b ≤ 2π"
                )));
            }
            pieces.push((a, b));
        }
        Self::new(pieces).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self.intervals.iter().map(|(a, b)| format!("{a:?}:{b:?}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Evaluates `+ - * /`, parentheses, decimal literals and `pi`.
pub fn eval_expr(text: &str) -> Result<f64> {
    let mut p = ExprParser { src: text.as_bytes(), pos: 0, text };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(p.error("value is not finite"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("expression `{}`: {msg} at offset {}", self.text.trim(), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if c == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            v = if c == b'*' { v * rhs } else { v / rhs };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
                    let save = self.pos;
                    self.pos += 1;
                    if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                        self.pos += 1;
                    }
                    let digits = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == digits {
                        self.pos = save;
                    }
                }
                let lit = &self.text[start..self.pos];
                lit.parse::<f64>().map_err(|_| self.error("bad number"))
            }
            Some(b'p') if self.src[self.pos..].starts_with(b"pi") => {
                self.pos += 2;
                Ok(PI)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
