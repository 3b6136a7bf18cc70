//! Boundary data on the bottom edge of the strip.
//!
//! The datum `f` is a quadratic spline: its derivative is the piecewise-linear
//! interpolant of the knot values and is held constant outside the knot range.
//! This keeps `f` in C^{1,1} with exactly computable Lipschitz constants and a
//! finite, explicit set of points where `f''` jumps.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// What to evaluate in [`BoundarySpline::eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Value,
    Derivative,
    SecondLeft,
    SecondRight,
}

/// A point where the one-sided second derivatives of `f` differ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub y0: f64,
    pub second_left: f64,
    pub second_right: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpline {
    f0: f64,
    abscissas: Vec<f64>,
    slopes: Vec<f64>,
    /// `f` at each knot.
    values: Vec<f64>,
    /// Slope of `f'` on `[t_i, t_{i+1}]`.
    curvatures: Vec<f64>,
}

impl BoundarySpline {
    /// Builds a spline from `f(t_0) = f0` and knots `(t_i, f'(t_i))`.
    pub fn new(f0: f64, knots: &[(f64, f64)]) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Validation("at least one knot is required".into()));
        }
        if !f0.is_finite() {
            return Err(Error::Validation(format!("f0 = {f0} is not finite")));
        }
        for (i, &(t, s)) in knots.iter().enumerate() {
            if !t.is_finite() || !s.is_finite() {
                return Err(Error::Validation(format!("knot {i} = ({t}, {s}) is not finite")));
            }
        }
        for (i, w) in knots.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::Validation(format!(
                    "abscissas must be strictly increasing: knot {} at {} follows {}",
                    i + 1,
                    w[1].0,
                    w[0].0
                )));
            }
        }

        let abscissas: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let slopes: Vec<f64> = knots.iter().map(|k| k.1).collect();
        let mut values = Vec::with_capacity(knots.len());
        let mut curvatures = Vec::with_capacity(knots.len().saturating_sub(1));
        values.push(f0);
        for w in knots.windows(2) {
            let (t0, s0) = w[0];
            let (t1, s1) = w[1];
            let width = t1 - t0;
            curvatures.push((s1 - s0) / width);
            let prev = *values.last().unwrap();
            values.push(prev + 0.5 * width * (s0 + s1));
        }
        let spline = Self {
            f0,
            abscissas,
            slopes,
            values,
            curvatures,
        };
        if spline.curvatures.iter().any(|m| !m.is_finite()) || spline.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("knot data overflows f64".into()));
        }
        Ok(spline)
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn knots(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.abscissas.iter().copied().zip(self.slopes.iter().copied())
    }

    pub fn knot_count(&self) -> usize {
        self.abscissas.len()
    }

    /// Index of the interval `[t_i, t_{i+1})` containing `y`, or `None` on a tail.
    #[inline]
    fn interval(&self, y: f64) -> Option<usize> {
        let n = self.abscissas.len();
        if n < 2 || y < self.abscissas[0] || y >= self.abscissas[n - 1] {
            return None;
        }
        // first knot strictly greater than y, minus one
        Some(self.abscissas.partition_point(|&t| t <= y) - 1)
    }

    /// `f(y)`, no input checks.
    #[inline]
    pub fn value(&self, y: f64) -> f64 {
        let n = self.abscissas.len();
        let first = self.abscissas[0];
        if y < first {
            return self.f0 + self.slopes[0] * (y - first);
        }
        let last = self.abscissas[n - 1];
        if y >= last {
            return self.values[n - 1] + self.slopes[n - 1] * (y - last);
        }
        let i = self.interval(y).unwrap();
        let dy = y - self.abscissas[i];
        self.values[i] + dy * (self.slopes[i] + 0.5 * self.curvatures[i] * dy)
    }

    /// `f'(y)`, no input checks.
    #[inline]
    pub fn derivative(&self, y: f64) -> f64 {
        match self.interval(y) {
            Some(i) => self.slopes[i] + self.curvatures[i] * (y - self.abscissas[i]),
            None if y < self.abscissas[0] => self.slopes[0],
            None => self.slopes[self.slopes.len() - 1],
        }
    }

    /// Slope of `f'` on the piece immediately left of `y`.
    pub fn second_left(&self, y: f64) -> f64 {
        let n = self.abscissas.len();
        if n < 2 || y <= self.abscissas[0] || y > self.abscissas[n - 1] {
            return 0.0;
        }
        // last knot strictly less than y
        let i = self.abscissas.partition_point(|&t| t < y) - 1;
        self.curvatures[i]
    }

    /// Slope of `f'` on the piece immediately right of `y`.
    pub fn second_right(&self, y: f64) -> f64 {
        self.interval(y).map_or(0.0, |i| self.curvatures[i])
    }

    /// Checked closed-form evaluation.
    pub fn eval(&self, y: f64, quantity: Quantity) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::Domain(format!("evaluation point {y} is not finite")));
        }
        Ok(match quantity {
            Quantity::Value => self.value(y),
            Quantity::Derivative => self.derivative(y),
            Quantity::SecondLeft => self.second_left(y),
            Quantity::SecondRight => self.second_right(y),
        })
    }

    /// `(L_f, L'_f)`: sup of `|f'|` and Lipschitz constant of `f'`.
    pub fn lipschitz_constants(&self) -> (f64, f64) {
        let slope = self.slopes.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        let curvature = self.curvatures.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        (slope, curvature)
    }

    /// Interior knots where the incoming and outgoing slopes of `f'` differ.
    ///
    /// The first and last knot are never reported; see [`Self::slope_breaks`].
    pub fn kinks(&self) -> Vec<Kink> {
        let n = self.abscissas.len();
        (1..n.saturating_sub(1))
            .filter(|&i| self.curvatures[i - 1] != self.curvatures[i])
            .map(|i| Kink {
                y0: self.abscissas[i],
                second_left: self.curvatures[i - 1],
                second_right: self.curvatures[i],
            })
            .collect()
    }

    /// Every knot where `f''` jumps, including jumps into the constant tails.
    pub fn slope_breaks(&self) -> Vec<f64> {
        self.abscissas
            .iter()
            .copied()
            .filter(|&t| self.second_left(t) != self.second_right(t))
            .collect()
    }

    /// Writes the spline-spec text format.
    pub fn to_spec_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "f0 {}", self.f0).unwrap();
        for (t, s) in self.knots() {
            writeln!(out, "knot {t} {s}").unwrap();
        }
        out
    }
}

/// Parses the line-based spline-spec format.
///
/// ```text
/// # comment
/// f0 0
/// knot -1 0.5
/// knot 0 0
/// ```
pub fn parse_spline(text: &str) -> Result<BoundarySpline> {
    let mut f0: Option<f64> = None;
    let mut knots = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| err(format!("cannot parse `{s}` as a real number")))
        };
        match (fields[0], f0.is_some()) {
            ("f0", false) => {
                if fields.len() != 2 {
                    return Err(err(format!("expected `f0 <real>`, got `{line}`")));
                }
                f0 = Some(number(fields[1])?);
            }
            ("f0", true) => return Err(err("duplicate `f0` line".into())),
            (_, false) => return Err(err(format!("first line must be `f0 <real>`, got `{line}`"))),
            ("knot", true) => {
                if fields.len() != 3 {
                    return Err(err(format!("expected `knot <t> <s>`, got `{line}`")));
                }
                let knot = (number(fields[1])?, number(fields[2])?);
                if let Some(&(prev, _)) = knots.last() {
                    if !(knot.0 > prev) {
                        return Err(err(format!("knot at {} does not follow {prev}", knot.0)));
                    }
                }
                knots.push(knot);
            }
            (other, true) => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let f0 = f0.ok_or_else(|| Error::Validation("missing `f0` line".into()))?;
    BoundarySpline::new(f0, &knots)
}
