//! Sample covariance `X X^T / n` of ARCH(1) rows against Marchenko-Pastur,
//! including the atom `1 - 1/y` at zero when `p > n`.
//!
//! ```text
//! cargo run --release --example marchenko_pastur_panel
//! ```

use rmtlab::diagnostics::kolmogorov_distance;
use rmtlab::field::{gen_panel, Arch1};
use rmtlab::laws::LimitLaw;
use rmtlab::matrix::RectMatrix;
use rmtlab::spectra::{covariance_eigenvalues, esd};
use rmtlab::{MarchenkoPastur, RngStream};

fn main() -> rmtlab::Result<()> {
    let arch1 = Arch1 { omega: 1.0, beta: 0.3 };
    for (p, n) in [(500, 1000), (1000, 250)] {
        let y = p as f64 / n as f64;
        let law = MarchenkoPastur::new(y)?;
        let x = RectMatrix::from_field(&gen_panel(p, n, arch1, &RngStream::new(11, 0))?)?;
        let spectrum = covariance_eigenvalues(&x, false)?;
        let zeros = spectrum.eigenvalues().iter().filter(|l| l.abs() < 1e-6).count();
        println!("p = {p}, n = {n}, y = {y}");
        println!("  support            {:?}", law.support());
        println!(
            "  kolmogorov         {:.5}",
            kolmogorov_distance(&esd(&spectrum)?, &law)
        );
        println!(
            "  zero fraction      {:.4} (atom mass {:.4})",
            zeros as f64 / p as f64,
            law.atom_mass()
        );
    }
    Ok(())
}
