//! Paired t-test for comparing two systems on the same items.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
}

/// Student's t on the differences `a[i] - b[i]`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Degenerate("need at least two pairs".into()));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::Argument("non-finite sample value".into()));
    }
    let nf = n as f64;
    let mean = diffs.iter().sum::<f64>() / nf;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var == 0.0 {
        return Err(Error::Degenerate("differences have zero variance".into()));
    }
    let t = mean / (var / nf).sqrt();
    let df = nf - 1.0;
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Degenerate(e.to_string()))?;
    let p = (2.0 * dist.cdf(-t.abs())).min(1.0);
    Ok(TTest { t, df, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_samples_are_degenerate() {
        let a = [1.0, 2.0, 3.0];
        assert!(matches!(paired_t_test(&a, &a), Err(Error::Degenerate(_))));
        assert!(paired_t_test(&[1.0], &[2.0]).is_err());
        assert!(paired_t_test(&[1.0, 2.0], &[2.0]).is_err());
    }

    #[test]
    fn hand_computed_statistic() {
        // d = (1, 2, 3): mean 2, sd 1, t = 2 / (1 / sqrt 3)
        let r = paired_t_test(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(r.t, 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(r.df, 2.0);
        // df = 2: P(|T| > t) = 1 - t / sqrt(2 + t^2)
        assert_abs_diff_eq!(r.p, 1.0 - r.t / (2.0 + r.t * r.t).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn p_falls_as_offset_grows() {
        let b: Vec<f64> = (0..10).map(|i| (i as f64 * 0.37).sin()).collect();
        let noise: Vec<f64> = (0..10).map(|i| (i as f64 * 1.3).cos() * 0.1).collect();
        let mut last = 1.1;
        for step in 0..8 {
            let off = step as f64 * 0.02;
            let a: Vec<f64> = b.iter().zip(&noise).map(|(x, e)| x + e + off).collect();
            let p = paired_t_test(&a, &b).unwrap().p;
            assert!(p < last, "offset {off}: p {p} !< {last}");
            last = p;
        }
    }
}
