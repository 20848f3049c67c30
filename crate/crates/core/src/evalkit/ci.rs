use super::EvalError;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    pub confidence: f64,
}

/// x with I_x(a, b) = p, by bisection on the regularized incomplete beta function.
fn beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Exact (Clopper-Pearson) binomial interval.
pub fn clopper_pearson(successes: u64, n: u64, confidence: f64) -> Result<Interval, EvalError> {
    if n == 0 || successes > n || !(confidence > 0.0 && confidence < 1.0) {
        return Err(EvalError::Domain { successes, n, confidence });
    }
    let alpha = 1.0 - confidence;
    let (k, n_f) = (successes as f64, n as f64);
    let low = if successes == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, k, n_f - k + 1.0)
    };
    let high = if successes == n {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, k + 1.0, n_f - k)
    };
    Ok(Interval { low, high, confidence })
}
