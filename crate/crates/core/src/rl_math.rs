//! Entropy-control arithmetic for policy-gradient training on the packing MDP.
//!
//! These functions work on recorded probability vectors rather than on a
//! network, so an external learner can log its decisions and audit them here.
//!
//! * [`entropy_delta_estimate`]: first-order entropy change of a softmax
//!   policy, `-beta * Cov_{a~pi}(ln pi(a), A(a))`.
//! * [`clipped_ratios`]: importance ratios with a fraction `phi` of the
//!   high-covariance decisions detached (ratio 0).
//! * [`drift_adjusted_objective`]: subtracts `beta * |ln(pi_new / pi_old)|`
//!   at first-placement decisions.

use serde::{Deserialize, Serialize};

use crate::error::{PackError, Result};

pub const PROB_TOLERANCE: f64 = 1e-9;

/// One logged policy decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub probs_old: Vec<f64>,
    pub probs_new: Vec<f64>,
    pub action: usize,
    pub advantage: f64,
    #[serde(default)]
    pub is_first_step: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<f64>,
}

impl DecisionRecord {
    pub fn validate(&self) -> Result<()> {
        check_distribution(&self.probs_old).map_err(as_record_error)?;
        check_distribution(&self.probs_new).map_err(as_record_error)?;
        if self.probs_old.len() != self.probs_new.len() {
            return Err(PackError::InvalidRecord(format!(
                "old and new distributions differ in length ({} vs {})",
                self.probs_old.len(),
                self.probs_new.len()
            )));
        }
        if self.action >= self.probs_old.len() {
            return Err(PackError::InvalidRecord(format!(
                "chosen action {} outside {} actions",
                self.action,
                self.probs_old.len()
            )));
        }
        if !self.advantage.is_finite() {
            return Err(PackError::InvalidRecord("advantage is not finite".into()));
        }
        Ok(())
    }

    /// `pi_new(a_t) / pi_old(a_t)`.
    pub fn ratio(&self) -> Result<f64> {
        self.validate()?;
        let old = self.probs_old[self.action];
        if old == 0.0 {
            return Err(PackError::InvalidRecord("old policy gives the chosen action probability 0".into()));
        }
        Ok(self.probs_new[self.action] / old)
    }
}

fn as_record_error(e: PackError) -> PackError {
    match e {
        PackError::InvalidInput(m) => PackError::InvalidRecord(m),
        other => other,
    }
}

pub fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(PackError::InvalidInput("empty distribution".into()));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(PackError::InvalidInput("probabilities must be finite and non-negative".into()));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(PackError::InvalidInput(format!("probabilities sum to {sum}, not 1")));
    }
    Ok(())
}

/// `p ln p` with the convention `0 ln 0 = 0`.
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

pub fn entropy(probs: &[f64]) -> Result<f64> {
    check_distribution(probs)?;
    Ok(-probs.iter().map(|&p| plogp(p)).sum::<f64>())
}

/// Covariance of `ln pi(a)` and `A(a)` under `a ~ pi`.
///
/// Actions with zero probability carry zero weight and are skipped.
pub fn logp_advantage_covariance(probs: &[f64], advantages: &[f64]) -> Result<f64> {
    check_distribution(probs)?;
    if probs.len() != advantages.len() {
        return Err(PackError::InvalidInput(format!(
            "{} probabilities but {} advantages",
            probs.len(),
            advantages.len()
        )));
    }
    let support = || probs.iter().zip(advantages).filter(|(p, _)| **p > 0.0);
    let mean_logp: f64 = support().map(|(p, _)| p * p.ln()).sum();
    let mean_adv: f64 = support().map(|(p, a)| p * a).sum();
    Ok(support()
        .map(|(p, a)| p * (p.ln() - mean_logp) * (a - mean_adv))
        .sum())
}

pub fn entropy_delta_estimate(probs: &[f64], advantages: &[f64], beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(PackError::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    Ok(-beta * logp_advantage_covariance(probs, advantages)?)
}

/// Per-decision covariance contribution within a batch:
/// `(ln pi_old(a_t) - mean ln pi_old) * (A_t - mean A)`.
pub fn node_covariances(records: &[DecisionRecord]) -> Result<Vec<f64>> {
    if records.is_empty() {
        return Ok(Vec::new());
    }
    let mut logp = Vec::with_capacity(records.len());
    for r in records {
        r.validate()?;
        let p = r.probs_old[r.action];
        if p == 0.0 {
            return Err(PackError::InvalidRecord("old policy gives the chosen action probability 0".into()));
        }
        logp.push(p.ln());
    }
    let n = records.len() as f64;
    let mean_logp = logp.iter().sum::<f64>() / n;
    let mean_adv = records.iter().map(|r| r.advantage).sum::<f64>() / n;
    Ok(logp
        .iter()
        .zip(records)
        .map(|(lp, r)| (lp - mean_logp) * (r.advantage - mean_adv))
        .collect())
}

/// Fills each record's `covariance` from [`node_covariances`].
pub fn annotate_covariances(records: &mut [DecisionRecord]) -> Result<()> {
    let covs = node_covariances(records)?;
    for (r, c) in records.iter_mut().zip(covs) {
        r.covariance = Some(c);
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Decisions to detach: the top `ceil(phi * |high|)` of the decisions whose
/// covariance is strictly above the batch median, largest first, earlier
/// records winning ties.
pub fn clip_selection(covariances: &[f64], phi: f64) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(PackError::InvalidInput(format!("phi must lie in [0, 1], got {phi}")));
    }
    let mut selected = vec![false; covariances.len()];
    if covariances.is_empty() {
        return Ok(selected);
    }
    let m = median(covariances);
    let mut high: Vec<usize> = (0..covariances.len()).filter(|&i| covariances[i] > m).collect();
    high.sort_by(|&a, &b| covariances[b].total_cmp(&covariances[a]));
    let take = (phi * high.len() as f64).ceil() as usize;
    for &i in high.iter().take(take) {
        selected[i] = true;
    }
    Ok(selected)
}

pub fn clipped_ratios(records: &[DecisionRecord], phi: f64) -> Result<Vec<f64>> {
    let covs = node_covariances(records)?;
    let selected = clip_selection(&covs, phi)?;
    records
        .iter()
        .zip(selected)
        .map(|(r, clip)| if clip { Ok(0.0) } else { r.ratio() })
        .collect()
}

/// `|ln(pi_new(a_t) / pi_old(a_t))|`.
pub fn drift_penalty(record: &DecisionRecord) -> Result<f64> {
    record.validate()?;
    let (old, new) = (record.probs_old[record.action], record.probs_new[record.action]);
    if old == 0.0 || new == 0.0 {
        return Err(PackError::InvalidRecord("chosen action has probability 0".into()));
    }
    Ok((new / old).ln().abs())
}

pub fn drift_adjusted_objective(objective: f64, record: &DecisionRecord, beta: f64) -> Result<f64> {
    if !record.is_first_step {
        return Ok(objective);
    }
    Ok(objective - beta * drift_penalty(record)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(old: &[f64], new: &[f64], action: usize, advantage: f64) -> DecisionRecord {
        DecisionRecord {
            probs_old: old.to_vec(),
            probs_new: new.to_vec(),
            action,
            advantage,
            is_first_step: false,
            covariance: None,
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&[0.25; 4]).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        // -(0.8 ln 0.8 + 0.2 ln 0.2)
        let oracle = -(0.8f64 * 0.8f64.ln() + 0.2 * 0.2f64.ln());
        assert!((entropy(&[0.8, 0.2]).unwrap() - oracle).abs() < 1e-15);
        assert!((entropy(&[0.8, 0.2]).unwrap() - 0.500402).abs() < 1e-6);
        assert!(entropy(&[0.5, 0.4]).is_err());
        assert!(entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn covariance_examples() {
        assert!(logp_advantage_covariance(&[0.25; 4], &[1.0, -2.0, 3.0, 0.5]).unwrap().abs() < 1e-15);
        let c = logp_advantage_covariance(&[0.8, 0.2], &[1.0, 0.0]).unwrap();
        assert!((c - 0.22181).abs() < 1e-5, "{c}");
        assert!(logp_advantage_covariance(&[0.7, 0.2, 0.1], &[2.0; 3]).unwrap().abs() < 1e-15);
        assert!(logp_advantage_covariance(&[0.5, 0.5], &[1.0]).is_err());
    }

    #[test]
    fn entropy_delta_examples() {
        let d = entropy_delta_estimate(&[0.8, 0.2], &[1.0, 0.0], 1.0).unwrap();
        assert!((d + 0.22181).abs() < 1e-5);
        assert_eq!(entropy_delta_estimate(&[0.5, 0.5], &[1.0, 0.0], 1.0).unwrap(), 0.0);
        assert!(d < 0.0);
        assert!(entropy_delta_estimate(&[0.5, 0.5], &[1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn phi_zero_gives_plain_ratios() {
        let recs = vec![
            record(&[0.5, 0.5], &[0.6, 0.4], 0, 1.0),
            record(&[0.2, 0.8], &[0.1, 0.9], 1, -0.5),
            record(&[0.9, 0.1], &[0.8, 0.2], 1, 2.0),
        ];
        let r = clipped_ratios(&recs, 0.0).unwrap();
        assert_eq!(r, vec![0.6 / 0.5, 0.9 / 0.8, 0.2 / 0.1]);
    }

    #[test]
    fn unchanged_policy_ratios_are_one() {
        let recs = vec![record(&[0.3, 0.7], &[0.3, 0.7], 0, 1.0), record(&[0.3, 0.7], &[0.3, 0.7], 1, 0.0)];
        assert_eq!(clipped_ratios(&recs, 0.0).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn clipped_node_gets_zero_ratio() {
        // chosen log-probs ln 0.1, ln 0.5, ln 0.9 (mean -1.0339), advantages
        // -1, 0, 1 (mean 0): covariances 1.26889, 0, 0.92834. The median is
        // 0.92834, so only the first node is high-covariance.
        let recs = vec![
            record(&[0.1, 0.9], &[0.2, 0.8], 0, -1.0),
            record(&[0.5, 0.5], &[0.5, 0.5], 0, 0.0),
            record(&[0.9, 0.1], &[0.95, 0.05], 0, 1.0),
        ];
        let covs = node_covariances(&recs).unwrap();
        assert!((covs[0] - 1.26889).abs() < 1e-5);
        assert_eq!(covs[1], 0.0);
        assert!((covs[2] - 0.92834).abs() < 1e-5);
        let r = clipped_ratios(&recs, 0.5).unwrap();
        assert_eq!(r, vec![0.0, 1.0, 0.95 / 0.9]);
        assert_eq!(clipped_ratios(&recs, 1.0).unwrap(), r);
        assert_eq!(clip_selection(&[3.0, 1.0, 2.0, 4.0], 1.0).unwrap(), vec![true, false, false, true]);
        assert_eq!(clip_selection(&[3.0, 1.0, 2.0, 4.0], 0.5).unwrap(), vec![false, false, false, true]);
    }

    #[test]
    fn zero_old_probability_is_invalid() {
        let recs = vec![record(&[0.0, 1.0], &[0.5, 0.5], 0, 1.0)];
        assert!(matches!(clipped_ratios(&recs, 0.0), Err(PackError::InvalidRecord(_))));
        assert!(clipped_ratios(&[record(&[0.5, 0.5], &[0.5, 0.5], 0, 1.0)], 1.5).is_err());
    }

    #[test]
    fn drift_examples() {
        let mut r = record(&[0.2, 0.8], &[0.2 * std::f64::consts::E, 1.0 - 0.2 * std::f64::consts::E], 0, 0.0);
        assert_eq!(drift_adjusted_objective(3.0, &r, 0.5).unwrap(), 3.0);
        r.is_first_step = true;
        assert!((drift_adjusted_objective(3.0, &r, 0.5).unwrap() - 2.5).abs() < 1e-12);
        let same = DecisionRecord { is_first_step: true, ..record(&[0.4, 0.6], &[0.4, 0.6], 1, 1.0) };
        assert_eq!(drift_adjusted_objective(3.0, &same, 0.5).unwrap(), 3.0);
        let dead = DecisionRecord { is_first_step: true, ..record(&[0.4, 0.6], &[0.0, 1.0], 0, 1.0) };
        assert!(matches!(drift_adjusted_objective(3.0, &dead, 0.5), Err(PackError::InvalidRecord(_))));
    }
}
