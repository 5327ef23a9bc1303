//! Which spectra `{0, λ₂, λ₃}` a symmetric 3×3 tridiagonal Laplacian can have.

use syncforge::synthesis::{symmetric_3x3_feasible, SymmetricFeasibility};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (l2, l3) in [(1.0, 3.0), (1.0, 2.0), (1.0, 2.5), (2.0, 5.0)] {
        let f = symmetric_3x3_feasible(l2, l3)?;
        print!("(λ₂, λ₃) = ({l2}, {l3}): ");
        if !f.feasible {
            println!("infeasible");
            continue;
        }
        println!("feasible{}", if f.boundary { " (on the boundary)" } else { "" });
        for (x, y) in &f.solutions {
            let eig = SymmetricFeasibility::matrix(*x, *y).eigenvalues()?;
            println!("    x = {x:.6}, y = {y:.6}  eigenvalues {eig:.6?}");
        }
    }

    println!();
    for l3 in [2, 3, 4, 6] {
        let row: String = (1..=l3)
            .map(|l2| if symmetric_3x3_feasible(l2 as f64, l3 as f64).is_ok_and(|f| f.feasible) { '#' } else { '.' })
            .collect();
        println!("λ₃ = {l3}: λ₂ = 1..{l3} {row}");
    }
    Ok(())
}
