//! Kriging the centre cell of a 17×17 grid of unit cells from the other 288
//! cells under the cell-averaged log covariance.
//!
//! Run with `cargo run --release --example table1`.

use dewijs::kriging::{reproduce_table1, screening_report};

fn main() -> dewijs::Result<()> {
    let table = reproduce_table1()?;
    print!("{}", table.report());
    println!("weights sum to {:.15}", table.solution.weight_sum());
    println!("prediction variance {:.6}", table.solution.prediction_variance);
    for radius in 1..=4 {
        println!("sum |w| beyond Chebyshev radius {radius}: {:.4}", screening_report(&table.solution, radius));
    }
    Ok(())
}
