//! Build a tridiagonal Laplacian with a prescribed spectrum and check it.
//!
//! ```text
//! cargo run --release --example inverse_eigenvalue -- 32 linear 1 10
//! ```

use syncforge::synthesis::{place_eigenvalues, synthesize, Placement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(32), |s| s.parse())?;
    let placement: Placement = args.get(1).map_or(Ok(Placement::Linear), |s| s.parse())?;
    let lo: f64 = args.get(2).map_or(Ok(1.0), |s| s.parse())?;
    let hi: f64 = args.get(3).map_or(Ok(10.0), |s| s.parse())?;

    let spec = place_eigenvalues(placement, lo, hi, n - 1)?;
    let (laplacian, report) = synthesize(&spec)?;
    let l = laplacian.matrix();

    println!("N = {n}, {placement:?} eigenvalues on [{lo}, {hi}]");
    println!("max |entry|          {:.4}", report.max_entry);
    println!("max |off-diagonal|   {:.4}", report.max_offdiag_entry);
    println!("max |row sum|        {:.3e}", report.row_sum_residual);
    println!("spectral deviation   {:.3e}", report.spectral_residual);
    println!("symmetric            {}", laplacian.is_symmetric(1e-12));
    println!();
    println!("{:>4} {:>12} {:>12} {:>12}", "k", "c_k", "a_k", "b_{k+1}");
    for k in 0..n.min(8) {
        let c = if k > 0 { l.sub()[k - 1] } else { f64::NAN };
        let b = if k + 1 < n { l.sup()[k] } else { f64::NAN };
        println!("{:>4} {:>12.5} {:>12.5} {:>12.5}", k + 1, c, l.diag()[k], b);
    }
    if n > 8 {
        println!("   …");
    }
    Ok(())
}
