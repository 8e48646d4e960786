use num_traits::{Signed, Zero};

use super::PolyError;
use crate::rational::{int, Rational};

/// Axis-aligned box `[lo_1, hi_1] x ... x [lo_n, hi_n]` with `lo_i < hi_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxRegion {
    intervals: Vec<(Rational, Rational)>,
}

impl BoxRegion {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, PolyError> {
        if intervals.is_empty() {
            return Err(PolyError::EmptyRegion);
        }
        if let Some(axis) = intervals.iter().position(|(lo, hi)| lo >= hi) {
            return Err(PolyError::DegenerateInterval { axis });
        }
        Ok(BoxRegion { intervals })
    }

    /// The same interval on every one of `n` axes.
    pub fn cube(n: usize, lo: Rational, hi: Rational) -> Result<Self, PolyError> {
        Self::new(vec![(lo, hi); n])
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.n()
            && self
                .intervals
                .iter()
                .zip(point)
                .all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    pub fn contains_interior(&self, point: &[Rational]) -> bool {
        point.len() == self.n()
            && self
                .intervals
                .iter()
                .zip(point)
                .all(|((lo, hi), x)| lo < x && x < hi)
    }

    /// `H = { x : (a_1 x_1, ..., a_n x_n) in K }`.
    pub fn rescale_region(&self, a: &[Rational]) -> Result<BoxRegion, PolyError> {
        if a.len() != self.n() {
            return Err(PolyError::DimensionMismatch {
                expected: self.n(),
                found: a.len(),
            });
        }
        if let Some(i) = a.iter().position(Zero::is_zero) {
            return Err(PolyError::ZeroScale { index: i });
        }
        let intervals = self
            .intervals
            .iter()
            .zip(a)
            .map(|((lo, hi), ai)| {
                let (p, q) = (lo / ai, hi / ai);
                if ai.is_negative() {
                    (q, p)
                } else {
                    (p, q)
                }
            })
            .collect();
        Ok(BoxRegion { intervals })
    }

    /// Uniform grid with `resolution` points per axis, endpoints included,
    /// in lexicographic order of the axis indices.
    pub fn grid(&self, resolution: usize) -> Result<Vec<Vec<Rational>>, PolyError> {
        if resolution < 2 {
            return Err(PolyError::GridResolution { resolution });
        }
        let axes: Vec<Vec<Rational>> = self
            .intervals
            .iter()
            .map(|(lo, hi)| {
                let step = (hi - lo) / int(resolution as i64 - 1);
                (0..resolution)
                    .map(|k| lo + &step * int(k as i64))
                    .collect()
            })
            .collect();
        let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(points.len() * axis.len());
            for prefix in &points {
                for v in axis {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                }
            }
            points = next;
        }
        Ok(points)
    }
}
