//! The analytic conditions behind the universality proof, evaluated
//! numerically: Lindeberg sums, the perturbation bound for `s`, and the
//! size of the resolvent partials.
//!
//! ```text
//! cargo run --release --example conditions
//! ```

use rmtlab::diagnostics::{
    entry_matrix, lindeberg_sum, partial_scaling, partials_max_relative_error, perturbation_bound, truncate,
};
use rmtlab::field::{gen_arch_field, ArchSpec};
use rmtlab::index_lattice::triangle_len;
use rmtlab::{RngStream, UpperPoint};

fn main() -> rmtlab::Result<()> {
    println!("Lindeberg sums of the normalized ARCH field");
    for n in [100, 200, 400, 800] {
        let f = gen_arch_field(n, &ArchSpec::default(), &mut RngStream::new(1, 0))?.normalized();
        let cut = truncate(&f, 0.1)?;
        println!(
            "  n = {n:>4}: L(0.05) = {:.3e}  L(0.1) = {:.3e}  zeroed at 0.1: {}",
            lindeberg_sum(&f, 0.05)?,
            lindeberg_sum(&f, 0.1)?,
            cut.provenance.truncations[0].zeroed
        );
    }

    let z = UpperPoint::new(0.2, 0.7)?;
    let n = 12;
    let mut rng = RngStream::new(7, 0);
    let x: Vec<f64> = (0..triangle_len(n)).map(|_| rng.gaussian()).collect();
    let y: Vec<f64> = (0..triangle_len(n)).map(|_| rng.gaussian()).collect();
    let c = perturbation_bound(n, &x, &y, z)?;
    println!(
        "\nperturbation |s(x) - s(y)| = {:.4e} <= {:.4e}: {}",
        c.lhs, c.rhs, c.holds
    );

    let m = entry_matrix(n, &x)?;
    println!(
        "analytic vs finite-difference partials: {:.2e}",
        partials_max_relative_error(&m, z)?
    );
    let fit = partial_scaling(&[8, 16, 32, 64], UpperPoint::new(0.0, 2.0)?, &[1, 2, 3])?;
    for (n, m) in fit.sizes.iter().zip(&fit.max_partial) {
        println!("  n = {n:>2}: max |ds/dx| = {m:.3e}");
    }
    println!("fitted exponent at z = 2i: {:.3} (asymptotically -1.5)", fit.exponent);
    Ok(())
}
