use crate::error::{Error, Result};

/// Row sums must be within this of 1.
const SUM_TOL: f64 = 1e-12;

/// Checks that `p` is a probability vector: nonempty, finite, nonnegative, sums to 1.
pub fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Domain("empty probability vector".into()));
    }
    if let Some(i) = p.iter().position(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(Error::Domain(format!("entry {i} = {} is not a probability", p[i])));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::Domain(format!("probabilities sum to {sum}, not 1")));
    }
    Ok(())
}

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Domain(format!(
            "length mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    validate_distribution(p)?;
    validate_distribution(q)
}

/// `½ Σ |p_i − q_i|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `Σ p_i ln(p_i / q_i)`; terms with `p_i = 0` vanish and any `p_i > 0 = q_i` gives `+∞`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        sum += a * (a / b).ln();
    }
    // Rounding can push a true zero slightly negative.
    Ok(sum.max(0.0))
}
