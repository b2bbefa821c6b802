use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorSummary {
    pub rmse: f64,
    pub max_err: f64,
    pub n_eval: usize,
    /// Points skipped because the denominator vanished or nothing covered them.
    pub n_flagged: usize,
}

/// RMSE and maximum absolute error over the entries whose flag is false.
pub fn metrics(true_vals: &[f64], approx_vals: &[f64], flags: &[bool]) -> Result<ErrorSummary> {
    if approx_vals.len() != true_vals.len() {
        return Err(Error::DimensionMismatch {
            expected: true_vals.len(),
            got: approx_vals.len(),
        });
    }
    if flags.len() != true_vals.len() {
        return Err(Error::DimensionMismatch {
            expected: true_vals.len(),
            got: flags.len(),
        });
    }
    let mut sq = 0.0;
    let mut max_err: f64 = 0.0;
    let mut used = 0usize;
    for ((t, a), flagged) in true_vals.iter().zip(approx_vals).zip(flags) {
        if *flagged {
            continue;
        }
        let r = (t - a).abs();
        sq += r * r;
        max_err = max_err.max(r);
        used += 1;
    }
    if used == 0 {
        return Err(Error::AllFlagged);
    }
    Ok(ErrorSummary {
        rmse: (sq / used as f64).sqrt().min(max_err),
        max_err,
        n_eval: true_vals.len(),
        n_flagged: true_vals.len() - used,
    })
}

/// [`metrics`] for evaluations that report flagged points as `None`.
pub fn metrics_opt(true_vals: &[f64], approx_vals: &[Option<f64>]) -> Result<ErrorSummary> {
    let flags: Vec<bool> = approx_vals.iter().map(Option::is_none).collect();
    let approx: Vec<f64> = approx_vals.iter().map(|v| v.unwrap_or(0.0)).collect();
    metrics(true_vals, &approx, &flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_residuals() {
        let v = [1.0, -2.0, 3.5];
        let s = metrics(&v, &v, &[false; 3]).unwrap();
        assert_eq!((s.rmse, s.max_err, s.n_flagged), (0.0, 0.0, 0));
    }

    #[test]
    fn three_four() {
        let s = metrics(&[0.0, 0.0], &[3.0, -4.0], &[false, false]).unwrap();
        assert!((s.rmse - 12.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.max_err, 4.0);
        assert_eq!(s.n_eval, 2);
    }

    #[test]
    fn one_flagged() {
        let s = metrics_opt(&[0.0, 0.0], &[None, Some(2.0)]).unwrap();
        assert_eq!((s.rmse, s.max_err, s.n_flagged), (2.0, 2.0, 1));
    }

    #[test]
    fn all_flagged_is_an_error() {
        assert_eq!(metrics(&[1.0], &[1.0], &[true]), Err(Error::AllFlagged));
        assert!(metrics(&[1.0], &[1.0, 2.0], &[false]).is_err());
    }
}
