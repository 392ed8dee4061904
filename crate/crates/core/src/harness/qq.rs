//! Wachter (Q-Q) pairs: law quantiles against ordered eigenvalues.

use std::io::Write;

use crate::cdf::StepCdf;
use crate::error::{invalid, Result};
use crate::laws::LimitLaw;
use crate::spectra::SpectralSample;

/// Row `k` pairs `quantile((k - 1/2)/n)` with `lambda_k`. Levels inside an
/// atom map to the atom location.
pub fn qq_data(s: &SpectralSample, quantile: impl Fn(f64) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
    let n = s.order();
    s.eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, &l)| Ok((quantile((k as f64 + 0.5) / n as f64)?, l)))
        .collect()
}

/// [`qq_data`] against a limit law.
pub fn qq_against<L: LimitLaw + ?Sized>(s: &SpectralSample, law: &L) -> Result<Vec<(f64, f64)>> {
    qq_data(s, |p| law.quantile(p))
}

/// Generalized inverse of a step CDF: smallest jump point with `F >= p`.
pub fn step_quantile(f: &StepCdf, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("quantile level {p} outside [0, 1]"));
    }
    let k = f.cumulative().partition_point(|&c| c < p).min(f.points().len() - 1);
    Ok(f.points()[k])
}

/// `max |q - lambda|` over the rows, skipping `trim` rows at each end.
pub fn qq_max_gap(rows: &[(f64, f64)], trim: usize) -> f64 {
    if rows.len() <= 2 * trim {
        return 0.0;
    }
    rows[trim..rows.len() - trim]
        .iter()
        .map(|(q, l)| (q - l).abs())
        .fold(0.0, f64::max)
}

pub fn write_qq_csv(rows: &[(f64, f64)], mut w: impl Write) -> Result<()> {
    writeln!(w, "q_law,lambda")?;
    for (q, l) in rows {
        writeln!(w, "{q:e},{l:e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::MarchenkoPastur;

    #[test]
    fn self_qq_is_diagonal() {
        let s = SpectralSample::new(vec![0.3, -1.0, 2.0, 2.0, 5.0]).unwrap();
        let f = crate::spectra::esd(&s).unwrap();
        let rows = qq_data(&s, |p| step_quantile(&f, p)).unwrap();
        assert!(rows.iter().all(|(q, l)| q == l));
    }

    #[test]
    fn atom_levels_map_to_zero() {
        let law = MarchenkoPastur::new(4.0).unwrap();
        for n in [10, 100, 101] {
            let s = SpectralSample::new((0..n).map(|k| k as f64).collect()).unwrap();
            let rows = qq_against(&s, &law).unwrap();
            let zeros = rows.iter().take_while(|(q, _)| *q == 0.0).count();
            assert_eq!(zeros, (0.75 * n as f64).ceil() as usize, "n = {n}");
            assert!(rows[zeros].0 >= law.support().0);
        }
    }

    #[test]
    fn gap_trims_extremes() {
        let rows = vec![(0.0, 9.0), (1.0, 1.1), (2.0, 2.0), (3.0, -9.0)];
        assert!((qq_max_gap(&rows, 1) - 0.1).abs() < 1e-12);
        assert_eq!(qq_max_gap(&rows, 2), 0.0);
        let mut buf = Vec::new();
        write_qq_csv(&rows[..1], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "q_law,lambda\n0e0,9e0\n");
    }
}
