use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::exactnum::{format_rational, int, Rational};

/// A continuous piecewise-linear function on the whole ρ-line with integer
/// slopes, given by its breakpoints and the slopes of the segments between
/// them (`slopes.len() == breakpoints.len() + 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<(Rational, Rational)>,
    slopes: Vec<i64>,
    /// Value at ρ = 0, kept so a function without breakpoints is pinned.
    value_at_zero: Rational,
}

impl PiecewiseLinear {
    /// The line `value + slope * ρ`.
    pub fn line(value_at_zero: Rational, slope: i64) -> PiecewiseLinear {
        PiecewiseLinear {
            breakpoints: vec![],
            slopes: vec![slope],
            value_at_zero,
        }
    }

    /// Lower envelope `min_i (b_i + m_i ρ)` of finitely many lines.
    pub fn lower_envelope(lines: &[(i64, Rational)]) -> PiecewiseLinear {
        assert!(!lines.is_empty());
        // sort by slope descending: steepest line wins at ρ → -∞
        let mut ls: Vec<(i64, Rational)> = lines.to_vec();
        ls.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        ls.dedup_by(|b, a| a.0 == b.0);
        // hull of lines (m_i decreasing): keep those that attain the min somewhere
        let mut hull: Vec<(i64, Rational)> = Vec::new();
        for l in ls {
            while hull.len() >= 2 {
                let (m1, b1) = &hull[hull.len() - 2];
                let (m2, b2) = &hull[hull.len() - 1];
                // crossing of l1 and l2 versus crossing of l1 and l
                let x12 = (b2 - b1) / int(m1 - m2);
                let x1l = (&l.1 - b1) / int(m1 - l.0);
                if x1l <= x12 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(l);
        }
        let mut breakpoints = Vec::new();
        let mut slopes = vec![hull[0].0];
        for w in hull.windows(2) {
            let (m1, b1) = &w[0];
            let (m2, b2) = &w[1];
            let x = (b2 - b1) / int(m1 - m2);
            let y = b1 + int(*m1) * &x;
            breakpoints.push((x, y));
            slopes.push(*m2);
        }
        let value_at_zero = hull.iter().map(|(_, b)| b.clone()).min().unwrap();
        PiecewiseLinear {
            breakpoints,
            slopes,
            value_at_zero,
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn value_at_zero(&self) -> &Rational {
        &self.value_at_zero
    }

    /// Index of the segment containing ρ; breakpoints belong to the segment on their right.
    fn segment(&self, rho: &Rational) -> usize {
        self.breakpoints.partition_point(|(x, _)| x <= rho)
    }

    pub fn value(&self, rho: &Rational) -> Rational {
        if self.breakpoints.is_empty() {
            return &self.value_at_zero + int(self.slopes[0]) * rho;
        }
        let k = self.segment(rho);
        let (x, y) = if k == 0 {
            &self.breakpoints[0]
        } else {
            &self.breakpoints[k - 1]
        };
        y + int(self.slopes[k]) * (rho - x)
    }

    /// Slope on `(ρ, ρ + ε)`.
    pub fn slope_right(&self, rho: &Rational) -> i64 {
        self.slopes[self.segment(rho)]
    }

    /// Slope on `(ρ - ε, ρ)`.
    pub fn slope_left(&self, rho: &Rational) -> i64 {
        self.slopes[self.breakpoints.partition_point(|(x, _)| x < rho)]
    }

    pub fn slope_at_minus_infinity(&self) -> i64 {
        self.slopes[0]
    }

    pub fn slope_at_plus_infinity(&self) -> i64 {
        *self.slopes.last().unwrap()
    }

    fn from_samples(xs: Vec<Rational>, left: i64, right: i64, f: impl Fn(&Rational) -> Rational) -> Self {
        if xs.is_empty() {
            return PiecewiseLinear::line(f(&Rational::zero()), left);
        }
        let pts: Vec<(Rational, Rational)> = xs.into_iter().map(|x| {
            let y = f(&x);
            (x, y)
        }).collect();
        let mut slopes = vec![left];
        for w in pts.windows(2) {
            let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            slopes.push(s.to_integer().to_i64().expect("integer slope"));
        }
        slopes.push(right);
        let mut out = PiecewiseLinear {
            breakpoints: pts,
            slopes,
            value_at_zero: f(&Rational::zero()),
        };
        out.simplify();
        out
    }

    fn simplify(&mut self) {
        let mut bps = Vec::new();
        let mut slopes = vec![self.slopes[0]];
        for (i, bp) in self.breakpoints.iter().enumerate() {
            let next = self.slopes[i + 1];
            if next != *slopes.last().unwrap() {
                bps.push(bp.clone());
                slopes.push(next);
            }
        }
        self.breakpoints = bps;
        self.slopes = slopes;
    }

    fn combine(&self, o: &PiecewiseLinear, sign: i64) -> PiecewiseLinear {
        let mut xs: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(o.breakpoints.iter())
            .map(|(x, _)| x.clone())
            .collect();
        xs.sort();
        xs.dedup();
        PiecewiseLinear::from_samples(
            xs,
            self.slopes[0] + sign * o.slopes[0],
            self.slope_at_plus_infinity() + sign * o.slope_at_plus_infinity(),
            |x| self.value(x) + int(sign) * o.value(x),
        )
    }

    pub fn add(&self, o: &PiecewiseLinear) -> PiecewiseLinear {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &PiecewiseLinear) -> PiecewiseLinear {
        self.combine(o, -1)
    }
}

impl fmt::Display for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slope {}", self.slopes[0])?;
        for (i, (x, y)) in self.breakpoints.iter().enumerate() {
            write!(f, " | ({x}, {y}) slope {}", self.slopes[i + 1])?;
        }
        Ok(())
    }
}

impl Serialize for PiecewiseLinear {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let bps: Vec<[String; 2]> = self
            .breakpoints
            .iter()
            .map(|(x, y)| [format_rational(x), format_rational(y)])
            .collect();
        let mut st = s.serialize_struct("PiecewiseLinear", 3)?;
        st.serialize_field("breakpoints", &bps)?;
        st.serialize_field("slopes", &self.slopes)?;
        st.serialize_field("value_at_zero", &format_rational(&self.value_at_zero))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn envelope_of_two_lines() {
        // min(2ρ, ρ)
        let f = PiecewiseLinear::lower_envelope(&[(2, int(0)), (1, int(0))]);
        assert_eq!(f.breakpoints(), &[(int(0), int(0))]);
        assert_eq!(f.slopes(), &[2, 1]);
        assert_eq!(f.value(&int(-3)), int(-6));
        assert_eq!(f.value(&rat(1, 2)), rat(1, 2));
        assert_eq!(f.slope_left(&int(0)), 2);
        assert_eq!(f.slope_right(&int(0)), 1);
    }

    #[test]
    fn dominated_lines_drop_out() {
        let f = PiecewiseLinear::lower_envelope(&[(3, int(0)), (2, int(5)), (0, int(1))]);
        assert_eq!(f.slopes(), &[3, 0]);
        assert_eq!(f.breakpoints(), &[(rat(1, 3), int(1))]);
    }

    #[test]
    fn difference() {
        let a = PiecewiseLinear::lower_envelope(&[(1, int(1)), (0, int(2))]);
        let b = PiecewiseLinear::lower_envelope(&[(3, int(0)), (2, int(0))]);
        let h = a.sub(&b);
        for x in [int(-2), int(0), rat(1, 2), int(3)] {
            assert_eq!(h.value(&x), a.value(&x) - b.value(&x));
        }
        assert_eq!(h.value(&int(0)), int(1));
        assert_eq!(h.slope_at_minus_infinity(), 1 - 3);
        assert_eq!(h.slope_at_plus_infinity(), 0 - 2);
    }
}
