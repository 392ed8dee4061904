//! Lindeberg replacement: swap the entries of a martingale-filled matrix for
//! Gaussian ones one at a time and split `s(X) - s(Z)` into the first-,
//! second- and third-order terms.
//!
//! ```text
//! cargo run --release --example swap_diagnostic
//! ```

use rmtlab::diagnostics::{swap_decomposition, SwapOptions};
use rmtlab::field::{gen_gaussian_field, gen_martingale_matrix_fill, Arch1};
use rmtlab::{RngStream, UpperPoint};

fn main() -> rmtlab::Result<()> {
    let n = 16;
    let z = UpperPoint::i();
    let mut rng = RngStream::new(2024, 0);
    let x = gen_martingale_matrix_fill(n, Arch1 { omega: 1.0, beta: 0.3 }, &mut rng)?;
    let zf = gen_gaussian_field(n, None, &mut rng)?;
    let r = swap_decomposition(&x.entries, &zf.entries, n, z, SwapOptions::default(), &mut rng)?;

    println!("n = {n}, a = {}, z = i", r.a);
    println!("  s(X) - s(Z)  {:.6e}", r.delta);
    println!("  R1           {:.6e}", r.r1);
    println!("  R2           {:.6e}", r.r2);
    println!("  R3           {:.6e}", r.r3);
    println!("  residual     {:.2e}", r.residual);
    println!("  L3 fitted    {:.3e} (ceiling {:.3e})", r.l3_fitted, r.l3_ceiling);
    println!(
        "  |R3| bound   {:.3e} (ceiling {:.3e}), holds: {}",
        r.r3_bound, r.r3_bound_ceiling, r.bound_holds
    );
    println!("  structure    {}", r.bound_structure);
    Ok(())
}
