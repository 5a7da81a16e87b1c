//! Distances between finite probability distributions.

use crate::error::{Error, Result};

/// Half the L1 distance between two distributions over the same outcomes.
pub fn statistical_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::contract(format!(
            "distributions over {} and {} outcomes",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Empirical distribution of `counts`.
pub fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(statistical_distance(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(statistical_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        let d = statistical_distance(&[0.75, 0.25], &[0.5, 0.5]).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert!(statistical_distance(&[1.0], &[0.5, 0.5]).is_err());
    }

    /// max over events V of |P(V) - Q(V)| equals half the L1 distance.
    #[test]
    fn matches_maximum_over_events() {
        let p = [0.1, 0.4, 0.2, 0.3];
        let q = [0.25, 0.25, 0.25, 0.25];
        let best = (0u32..16)
            .map(|set| {
                (0..4)
                    .filter(|i| set >> i & 1 == 1)
                    .map(|i| p[i] - q[i])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0f64, f64::max);
        assert!((best - statistical_distance(&p, &q).unwrap()).abs() < 1e-12);
    }
}
