//! Q-Q data: ordered covariance eigenvalues against Marchenko-Pastur
//! quantiles. Writes `qq.csv` (q_law, lambda) for plotting.
//!
//! ```text
//! cargo run --release --example wachter_qq
//! ```

use std::fs::File;

use rmtlab::field::{gen_panel, Arch1};
use rmtlab::harness::{qq_against, qq_max_gap, write_qq_csv};
use rmtlab::matrix::RectMatrix;
use rmtlab::spectra::covariance_eigenvalues;
use rmtlab::{MarchenkoPastur, RngStream};

fn main() -> rmtlab::Result<()> {
    let (p, n) = (400, 800);
    let x = RectMatrix::from_field(&gen_panel(
        p,
        n,
        Arch1 { omega: 1.0, beta: 0.3 },
        &RngStream::new(1, 0),
    )?)?;
    let spectrum = covariance_eigenvalues(&x, false)?;
    let rows = qq_against(&spectrum, &MarchenkoPastur::new(p as f64 / n as f64)?)?;
    for &(q, l) in rows.iter().step_by(50) {
        println!("{q:>8.4} {l:>8.4}");
    }
    println!("max gap (5 trimmed per side): {:.4}", qq_max_gap(&rows, 5));
    write_qq_csv(&rows, File::create("qq.csv")?)?;
    println!("wrote qq.csv");
    Ok(())
}
