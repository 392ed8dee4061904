//! Limit law for Gaussian entries with variance profile `a_i^2 a_j^2`:
//! solve the fixed-point equation, invert the transform, and compare with a
//! simulated spectrum. Writes `vp_law.csv` (x, pdf, cdf).
//!
//! ```text
//! cargo run --release --example variance_profile_limit
//! ```

use std::fs::File;

use rmtlab::diagnostics::kolmogorov_distance;
use rmtlab::field::{gen_gaussian_field, sample_profile_from_sequence};
use rmtlab::laws::{vp_cdf, vp_default_grid, vp_fixed_point, write_law_csv, DiscreteMeasure, VP_MAX_ITER, VP_TOL};
use rmtlab::matrix::build_wigner;
use rmtlab::spectra::{eigenvalues, esd};
use rmtlab::{RngStream, Semicircle, UpperPoint};

fn main() -> rmtlab::Result<()> {
    // nu = delta_1 reduces to the semicircle
    let z = UpperPoint::new(0.5, 0.2)?;
    let fp = vp_fixed_point(&DiscreteMeasure::point(1.0)?, z, VP_TOL, VP_MAX_ITER)?;
    println!(
        "delta_1 at z = {}: s = {:.12} ({} iterations)",
        z.z(),
        fp.s,
        fp.iterations
    );
    println!("semicircle transform:    {:.12}", Semicircle::transform(z.z()));

    let weights = [0.5, 1.0, 1.5, 2.0];
    let nu = DiscreteMeasure::uniform(&weights)?;
    let law = vp_cdf(&nu, &vp_default_grid(&nu, 2001), 1e-3)?;
    println!("\nnu uniform on {weights:?}: recovered mass {:.4}", law.total_mass());

    let n = 1200;
    let a_sq: Vec<f64> = (0..n).map(|j| weights[j % weights.len()]).collect();
    let profile = sample_profile_from_sequence(n, &a_sq)?;
    let field = gen_gaussian_field(n, Some(&profile), &mut RngStream::new(3, 0))?;
    let f = esd(&eigenvalues(&build_wigner(&field)?)?)?;
    println!(
        "n = {n}: kolmogorov to the fixed-point law {:.4}",
        kolmogorov_distance(&f, &law)
    );

    write_law_csv(&law, 801, 0.2, File::create("vp_law.csv")?)?;
    println!("wrote vp_law.csv");
    Ok(())
}
