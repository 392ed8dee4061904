//! Martingale-difference entries from a nonlinear ARCH random field still
//! produce the semicircle: the distance matches that of i.i.d. Gaussian
//! entries at the same size.
//!
//! ```text
//! cargo run --release --example arch_universality
//! ```

use rmtlab::diagnostics::{levy_distance, lindeberg_sum};
use rmtlab::field::{gen_arch_field, gen_gaussian_field, ArchSpec};
use rmtlab::matrix::build_wigner;
use rmtlab::spectra::{eigenvalues, esd};
use rmtlab::{RngStream, Semicircle};

fn main() -> rmtlab::Result<()> {
    let n = 1000;
    let spec = ArchSpec::default();
    println!("ARCH field: {spec:?}");
    println!(
        "{:>5} {:>10} {:>10} {:>12} {:>12}",
        "seed", "sigma_hat", "levy ARCH", "levy Gauss", "Lindeberg .1"
    );
    for seed in 1..=5 {
        let raw = gen_arch_field(n, &spec, &mut RngStream::new(seed, 0))?;
        let arch = raw.normalized();
        let gauss = gen_gaussian_field(n, None, &mut RngStream::new(seed, 1))?;
        let d = |f| -> rmtlab::Result<f64> { Ok(levy_distance(&esd(&eigenvalues(&build_wigner(f)?)?)?, &Semicircle)) };
        println!(
            "{seed:>5} {:>10.4} {:>10.5} {:>12.5} {:>12.2e}",
            raw.sigma_hat,
            d(&arch)?,
            d(&gauss)?,
            lindeberg_sum(&arch, 0.1)?
        );
    }
    Ok(())
}
