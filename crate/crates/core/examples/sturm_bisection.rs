//! Eigenvalues of a tridiagonal matrix by Sturm-sequence bisection, compared
//! with the closed form for the path Laplacian and with a dense Jacobi sweep.

use std::f64::consts::PI;

use syncforge::tridiag::{householder_tridiagonalize, symmetric_eigenvalues_jacobi, DenseMatrix, TridiagonalMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 12;
    let t = TridiagonalMatrix::path_laplacian(n)?;
    let eig = t.eigenvalues()?;
    let worst = eig
        .iter()
        .enumerate()
        .map(|(k, e)| (e - 4.0 * (k as f64 * PI / (2.0 * n as f64)).sin().powi(2)).abs())
        .fold(0.0, f64::max);
    println!("path Laplacian, N = {n}: max deviation from 4 sin²(kπ/2N) = {worst:.2e}");
    println!("eigenvalues below 1.0: {}", t.count_below(1.0));

    let v = t.null_vector()?;
    println!("null vector: first {:.6}, last {:.6} (1/√N = {:.6})", v[0], v[n - 1], 1.0 / (n as f64).sqrt());

    // A dense symmetric matrix, reduced to tridiagonal form and solved both ways.
    let a = DenseMatrix::from_fn(6, 6, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
    let (tri, _q) = householder_tridiagonalize(&a)?;
    let bisect = tri.eigenvalues()?;
    let jacobi = symmetric_eigenvalues_jacobi(&a);
    println!("\n{:>4} {:>20} {:>20}", "k", "bisection", "jacobi");
    for (k, (x, y)) in bisect.iter().zip(&jacobi).enumerate() {
        println!("{:>4} {:>20.15} {:>20.15}", k + 1, x, y);
    }
    Ok(())
}
