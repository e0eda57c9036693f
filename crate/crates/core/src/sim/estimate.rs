//! Energy and occupation estimators over post-selected shots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::sampler::SampleSet;

/// A term measured as a signed parity of sampled columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermImage {
    pub coefficient: f64,
    /// Sign carried by the Z-only image (±1).
    pub sign: f64,
    pub columns: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Per-shot group value and its mean/variance.
fn group_stats(samples: &SampleSet, terms: &[TermImage]) -> Result<(f64, f64)> {
    if samples.shots == 0 {
        return Err(Error::InsufficientSamples("no shots left after post-selection".into()));
    }
    if let Some(c) = terms.iter().flat_map(|t| &t.columns).find(|&&c| c >= samples.n_columns) {
        return Err(Error::IndexOutOfRange(format!("column {c} of {}", samples.n_columns)));
    }
    let n = samples.shots as f64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for shot in 0..samples.shots {
        let v: f64 = terms
            .iter()
            .map(|t| {
                let z = if samples.parity(shot, &t.columns) { -1.0 } else { 1.0 };
                t.coefficient * t.sign * z
            })
            .sum();
        s1 += v;
        s2 += v * v;
    }
    let mean = s1 / n;
    let var = if samples.shots > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok((mean, var / n))
}

/// `constant + Σ_groups Σ_terms c·⟨image⟩`; stderr adds the per-group
/// variances of the mean.
pub fn estimate_energy(constant: f64, groups: &[(SampleSet, Vec<TermImage>)]) -> Result<Estimate> {
    let mut value = constant;
    let mut var = 0.0;
    for (k, (s, terms)) in groups.iter().enumerate() {
        let (m, v) = group_stats(s, terms).map_err(|e| match e {
            Error::InsufficientSamples(msg) => Error::InsufficientSamples(format!("group {k}: {msg}")),
            e => e,
        })?;
        value += m;
        var += v;
    }
    Ok(Estimate { value, stderr: var.sqrt() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Occupations {
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub rmse: Option<f64>,
}

/// `n_i = (1 − ⟨B_i⟩)/2` for each mode image; RMSE against `reference`
/// when given.
pub fn estimate_occupations(samples: &SampleSet, images: &[TermImage], reference: Option<&[f64]>) -> Result<Occupations> {
    let mut values = Vec::with_capacity(images.len());
    let mut stderr = Vec::with_capacity(images.len());
    for img in images {
        let unit = TermImage { coefficient: 1.0, ..img.clone() };
        let (m, v) = group_stats(samples, std::slice::from_ref(&unit))?;
        values.push((1.0 - m) / 2.0);
        stderr.push(v.sqrt() / 2.0);
    }
    let rmse = match reference {
        Some(r) if r.len() != values.len() => {
            return Err(Error::Dimension(format!("{} reference occupations for {} modes", r.len(), values.len())));
        }
        Some(r) => Some(rmse(&values, r)),
        None => None,
    };
    Ok(Occupations { values, stderr, rmse })
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(cols: usize, shots: usize) -> SampleSet {
        let mut s = SampleSet::empty(cols, 0, 0.0, [0; 8]);
        for _ in 0..shots {
            s.push_row(&vec![0; s.stride()]);
        }
        s
    }

    #[test]
    fn zero_samples_give_plus_one() {
        let t = vec![TermImage { coefficient: 1.0, sign: 1.0, columns: vec![0] }];
        let e = estimate_energy(0.0, &[(zeros(1, 10), t)]).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn empty_group_is_an_error() {
        let t = vec![TermImage { coefficient: 1.0, sign: 1.0, columns: vec![0] }];
        assert!(matches!(estimate_energy(0.0, &[(zeros(1, 0), t)]), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn linear_in_coefficients() {
        let mut s = SampleSet::empty(2, 0, 0.0, [0; 8]);
        for k in 0..40u64 {
            s.push_row(&[k % 3 | (k % 5 == 0) as u64 * 2]);
        }
        let t = |a: f64, b: f64| {
            vec![
                TermImage { coefficient: a, sign: 1.0, columns: vec![0] },
                TermImage { coefficient: b, sign: -1.0, columns: vec![0, 1] },
            ]
        };
        let e1 = estimate_energy(0.0, &[(s.clone(), t(1.0, 0.0))]).unwrap().value;
        let e2 = estimate_energy(0.0, &[(s.clone(), t(0.0, 1.0))]).unwrap().value;
        let e = estimate_energy(0.0, &[(s, t(2.0, -3.0))]).unwrap().value;
        assert!((e - (2.0 * e1 - 3.0 * e2)).abs() < 1e-12);
    }

    #[test]
    fn occupations_and_rmse() {
        let mut s = SampleSet::empty(2, 0, 0.0, [0; 8]);
        for _ in 0..8 {
            s.push_row(&[0b01]);
        }
        let imgs: Vec<_> = (0..2).map(|c| TermImage { coefficient: 1.0, sign: 1.0, columns: vec![c] }).collect();
        let o = estimate_occupations(&s, &imgs, Some(&[1.0, 0.0])).unwrap();
        assert_eq!(o.values, vec![1.0, 0.0]);
        assert_eq!(o.rmse, Some(0.0));
    }
}
