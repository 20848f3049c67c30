use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl MatchCounts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        MatchCounts { tp, fp, fn_ }
    }

    /// Counts seen from the other side: fp and fn exchange roles.
    pub fn swapped(self) -> Self {
        MatchCounts::new(self.tp, self.fn_, self.fp)
    }
}

impl Add for MatchCounts {
    type Output = MatchCounts;

    fn add(self, rhs: Self) -> Self {
        MatchCounts::new(self.tp + rhs.tp, self.fp + rhs.fp, self.fn_ + rhs.fn_)
    }
}

impl AddAssign for MatchCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    /// Metrics from precision and recall; f1 is their harmonic mean.
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        Metrics {
            precision,
            recall,
            f1: harmonic(precision, recall),
        }
    }
}

/// 2pr/(p+r), or 0 when both are 0.
pub fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall and F1; empty denominators give 0.
pub fn prf(c: MatchCounts) -> Metrics {
    Metrics::from_pr(ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn_))
}

/// Mean precision, mean recall, and F1 as the harmonic mean of those two means.
pub fn aggregate<'a>(per_type: impl IntoIterator<Item = &'a Metrics>) -> Option<Metrics> {
    let (mut p, mut r, mut n) = (0.0, 0.0, 0usize);
    for m in per_type {
        p += m.precision;
        r += m.recall;
        n += 1;
    }
    (n > 0).then(|| Metrics::from_pr(p / n as f64, r / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic() {
        let m = prf(MatchCounts::new(2, 1, 1));
        assert!((m.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(prf(MatchCounts::default()), Metrics::default());
    }

    #[test]
    fn medication_strict_cell() {
        let m = prf(MatchCounts::new(39, 10, 11));
        assert_eq!(format!("{:.2} {:.2} {:.2}", m.precision, m.recall, m.f1), "0.80 0.78 0.79");
    }

    #[test]
    fn single_type_aggregate() {
        let m = Metrics::from_pr(0.8, 0.6);
        assert_eq!(aggregate([&m]), Some(m));
        assert_eq!(aggregate(std::iter::empty()), None);
    }

    #[test]
    fn harmonic_not_mean_of_f1() {
        let a = Metrics::from_pr(1.0, 0.2);
        let b = Metrics::from_pr(0.2, 1.0);
        let agg = aggregate([&a, &b]).unwrap();
        assert!((agg.f1 - 0.6).abs() < 1e-12);
        assert!((agg.f1 - (a.f1 + b.f1) / 2.0).abs() > 0.1);
    }
}
