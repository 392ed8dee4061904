//! Single-realization versions of the moment conditions, and truncation.

use crate::error::{invalid, Result};
use crate::field::{FieldSample, TruncationRecord};

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid(format!("epsilon must be > 0, got {eps}"));
    }
    Ok(())
}

/// `(1/n^2) sum X_ij^2 I(|X_ij| > eps sqrt(n))` over the stored entries.
pub fn lindeberg_sum(field: &FieldSample, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let n = field.order() as f64;
    let t = eps * n.sqrt();
    let s: f64 = field.entries.iter().filter(|x| x.abs() > t).map(|x| x * x).sum();
    Ok(s / (n * n))
}

/// `(1/n^2) sum_{j <= i} |sigma^2_ij - 1|` from the declared profile.
pub fn variance_deviation(field: &FieldSample) -> Result<f64> {
    let Some(profile) = &field.profile else {
        return invalid("variance deviation needs a declared variance profile");
    };
    if !field.is_triangular() {
        return invalid("variance deviation is defined for triangular fields");
    }
    let n = field.order();
    let mut s = 0.0;
    for i in 1..=n {
        for j in 1..=i {
            s += (profile.variance(i, j) - 1.0).abs();
        }
    }
    Ok(s / (n * n) as f64)
}

/// Zeroes entries with `|X| > eps sqrt(n)` and records the cut. Re-applying
/// the same `eps` is a no-op.
pub fn truncate(field: &FieldSample, eps: f64) -> Result<FieldSample> {
    check_eps(eps)?;
    let threshold = eps * (field.order() as f64).sqrt();
    let mut out = field.clone();
    let mut zeroed = 0;
    for x in out.entries.iter_mut() {
        if x.abs() > threshold {
            *x = 0.0;
            zeroed += 1;
        }
    }
    let seen = field.provenance.truncations.iter().any(|r| r.eps == eps);
    if zeroed > 0 || !seen {
        out.provenance
            .truncations
            .push(TruncationRecord { eps, threshold, zeroed });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{gen_gaussian_field, RngStream, VarianceProfile};
    use crate::index_lattice::triangle_len;

    #[test]
    fn lindeberg_examples() {
        let mut e = vec![0.0; triangle_len(4)];
        e[0] = 10.0;
        let f = FieldSample::from_lex(4, e, None).unwrap();
        assert_eq!(lindeberg_sum(&f, 1.0).unwrap(), 6.25);
        assert_eq!(lindeberg_sum(&f, 6.0).unwrap(), 0.0);
        assert!(lindeberg_sum(&f, 0.0).is_err());
    }

    #[test]
    fn variance_deviation_examples() {
        let n = 50;
        let unit = FieldSample::from_lex(n, vec![0.0; triangle_len(n)], Some(VarianceProfile::unit())).unwrap();
        assert_eq!(variance_deviation(&unit).unwrap(), 0.0);
        let two = FieldSample::from_lex(
            n,
            vec![0.0; triangle_len(n)],
            Some(VarianceProfile::Uniform { variance: 2.0 }),
        )
        .unwrap();
        let v = variance_deviation(&two).unwrap();
        assert!((v - triangle_len(n) as f64 / (n * n) as f64).abs() < 1e-15);
        let bare = FieldSample::from_lex(n, vec![0.0; triangle_len(n)], None).unwrap();
        assert!(variance_deviation(&bare).is_err());
    }

    #[test]
    fn truncation_examples() {
        let n = 4;
        let mut e = vec![0.5; triangle_len(n)];
        e[3] = 2.0 * 1.0 * 2.0;
        let f = FieldSample::from_lex(n, e.clone(), None).unwrap();
        let t = truncate(&f, 1.0).unwrap();
        assert_eq!(t.entries[3], 0.0);
        assert!(t.entries.iter().enumerate().all(|(k, &x)| k == 3 || x == 0.5));
        assert_eq!(
            t.provenance.truncations,
            vec![TruncationRecord {
                eps: 1.0,
                threshold: 2.0,
                zeroed: 1
            }]
        );
        assert_eq!(truncate(&t, 1.0).unwrap(), t);
        let same = truncate(&f, 10.0).unwrap();
        assert_eq!(same.entries, f.entries);
    }

    #[test]
    fn gaussian_health() {
        let f = gen_gaussian_field(1000, None, &mut RngStream::new(8, 0)).unwrap();
        assert!(lindeberg_sum(&f, 0.1).unwrap() < 0.01);
        assert_eq!(truncate(&f, 5.0).unwrap().provenance.truncations[0].zeroed, 0);
    }
}
