//! Three routes to Stieltjes transforms: eigenvalues, the resolvent trace,
//! and the covariance transform recovered from the symmetrized block matrix
//! `B = [[0, X], [X^T, 0]] / sqrt(n)`.
//!
//! ```text
//! cargo run --release --example stieltjes_identity
//! ```

use rmtlab::field::gen_gaussian_field;
use rmtlab::matrix::{build_cov, build_wigner, RectMatrix};
use rmtlab::spectra::{covariance_stieltjes_via_block, eigenvalues, stieltjes_from_eigs, stieltjes_resolvent};
use rmtlab::{RngStream, Semicircle, UpperPoint};

fn main() -> rmtlab::Result<()> {
    let z = UpperPoint::new(0.3, 0.5)?;
    let w = build_wigner(&gen_gaussian_field(24, None, &mut RngStream::new(5, 0))?)?;
    let by_eigs = stieltjes_from_eigs(&eigenvalues(&w)?, z);
    let by_resolvent = stieltjes_resolvent(&w, z)?;
    println!("Wigner n = 24 at z = {}", z.z());
    println!("  eigenvalues  {by_eigs:.12}");
    println!("  resolvent    {by_resolvent:.12}");
    println!("  semicircle   {:.12}", Semicircle::transform(z.z()));

    let mut rng = RngStream::new(9, 0);
    for (p, n) in [(6, 10), (10, 6)] {
        let data = (0..p * n).map(|_| rng.gaussian()).collect();
        let x = RectMatrix::new(p, n, data)?;
        let direct = stieltjes_from_eigs(&eigenvalues(&build_cov(&x))?, z);
        let via = covariance_stieltjes_via_block(&x, z)?;
        println!("covariance {p} x {n} (exchanged: {})", via.exchanged);
        println!("  direct       {direct:.12}");
        println!("  via block    {:.12}", via.value);
        println!("  rel. error   {:.2e}", (direct - via.value).norm() / direct.norm());
    }
    Ok(())
}
