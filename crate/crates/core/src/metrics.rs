//! Detection metrics over per-variant classifier confidence.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// One classified spectrum variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub step: usize,
    pub fraction: f64,
    pub p_machine: f64,
}

/// Machine probability along one spectrum, ordered by strictly increasing
/// step.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceCurve {
    pub spectrum_id: String,
    points: Vec<CurvePoint>,
}

impl ConfidenceCurve {
    pub fn new(spectrum_id: impl Into<String>) -> Self {
        Self { spectrum_id: spectrum_id.into(), points: Vec::new() }
    }

    pub fn push(&mut self, point: CurvePoint) -> Result<()> {
        if !(0.0..=1.0).contains(&point.p_machine) {
            return Err(Error::ProbabilityOutOfRange { value: point.p_machine });
        }
        if let Some(last) = self.points.last() {
            if point.step <= last.step {
                return Err(Error::NonMonotonicCurve { step: point.step, prev: last.step });
            }
        }
        self.points.push(point);
        Ok(())
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The first step from which the machine probability stays at or above the
/// threshold for every remaining point; `None` when the final point is
/// still below it.
pub fn flip_point(curve: &ConfidenceCurve, threshold: f64) -> Option<usize> {
    let points = curve.points();
    let mut flip = None;
    for point in points.iter().rev() {
        if point.p_machine >= threshold {
            flip = Some(point.step);
        } else {
            break;
        }
    }
    flip
}

/// Undetected substitution percentage: the flip step over the final step,
/// as a percentage. A curve that flips at step 0 scores 0 regardless of
/// length; a curve that never flips has no value.
pub fn usp(curve: &ConfidenceCurve, threshold: f64) -> Option<f64> {
    let flip = flip_point(curve, threshold)?;
    let last = curve.points().last()?.step;
    if flip == 0 || last == 0 {
        return Some(0.0);
    }
    Some(flip as f64 / last as f64 * 100.0)
}

/// Number of label changes between consecutive points, where the label at
/// a point is machine iff its probability is at or above the threshold.
pub fn hesitation_count(curve: &ConfidenceCurve, threshold: f64) -> usize {
    curve
        .points()
        .windows(2)
        .filter(|w| (w[0].p_machine >= threshold) != (w[1].p_machine >= threshold))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(probs: &[f64]) -> ConfidenceCurve {
        let mut c = ConfidenceCurve::new("test");
        for (i, &p) in probs.iter().enumerate() {
            c.push(CurvePoint { step: i, fraction: 0.0, p_machine: p }).unwrap();
        }
        c
    }

    #[test]
    fn flip_point_hand_enumeration() {
        let c = curve(&[0.2, 0.4, 0.7, 0.8, 0.9]);
        assert_eq!(flip_point(&c, 0.5), Some(2));
    }

    #[test]
    fn flip_point_edges() {
        assert_eq!(flip_point(&curve(&[0.9, 0.8, 0.7]), 0.5), Some(0));
        assert_eq!(flip_point(&curve(&[0.1, 0.2, 0.3]), 0.5), None);
        // A dip after an early crossing pushes the flip later.
        assert_eq!(flip_point(&curve(&[0.7, 0.2, 0.8, 0.9]), 0.5), Some(2));
        assert_eq!(flip_point(&ConfidenceCurve::new("empty"), 0.5), None);
    }

    #[test]
    fn flip_point_threshold_is_inclusive() {
        let c = curve(&[0.1, 0.5, 0.5]);
        assert_eq!(flip_point(&c, 0.5), Some(1));
    }

    #[test]
    fn usp_arithmetic() {
        let c = curve(&[0.2, 0.4, 0.7, 0.8, 0.9, 0.9]); // flips at 2 of 5
        let got = usp(&c, 0.5).unwrap();
        assert!((got - 40.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn usp_edges() {
        assert_eq!(usp(&curve(&[0.9, 0.9]), 0.5), Some(0.0));
        assert_eq!(usp(&curve(&[0.1, 0.2]), 0.5), None);
        assert_eq!(usp(&curve(&[0.9]), 0.5), Some(0.0));
    }

    #[test]
    fn hesitations_count_label_changes() {
        assert_eq!(hesitation_count(&curve(&[0.1, 0.2, 0.7, 0.9]), 0.5), 1);
        assert_eq!(hesitation_count(&curve(&[0.6, 0.6, 0.6]), 0.5), 0);
        assert_eq!(hesitation_count(&curve(&[0.4, 0.6, 0.4, 0.6]), 0.5), 3);
        assert_eq!(hesitation_count(&curve(&[0.4]), 0.5), 0);
    }

    #[test]
    fn curve_rejects_bad_points() {
        let mut c = curve(&[0.5]);
        assert!(matches!(
            c.push(CurvePoint { step: 0, fraction: 0.0, p_machine: 0.9 }),
            Err(Error::NonMonotonicCurve { .. })
        ));
        assert!(matches!(
            c.push(CurvePoint { step: 1, fraction: 0.0, p_machine: 1.5 }),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }
}
