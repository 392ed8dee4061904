//! Gaussian Wigner matrices: Levy and Kolmogorov distance of the ESD to the
//! semicircle law as `n` grows.
//!
//! ```text
//! cargo run --release --example semicircle_convergence
//! ```

use rmtlab::diagnostics::{kolmogorov_distance, levy_distance};
use rmtlab::field::gen_gaussian_field;
use rmtlab::matrix::build_wigner;
use rmtlab::spectra::{eigenvalues, esd};
use rmtlab::{RngStream, Semicircle};

fn main() -> rmtlab::Result<()> {
    println!("{:>6} {:>10} {:>12}", "n", "levy", "kolmogorov");
    for n in [250, 500, 1000, 2000] {
        let field = gen_gaussian_field(n, None, &mut RngStream::new(42, 0))?;
        let spectrum = eigenvalues(&build_wigner(&field)?)?;
        let f = esd(&spectrum)?;
        println!(
            "{n:>6} {:>10.5} {:>12.5}",
            levy_distance(&f, &Semicircle),
            kolmogorov_distance(&f, &Semicircle)
        );
    }
    Ok(())
}
