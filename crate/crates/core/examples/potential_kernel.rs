//! The potential kernel of the simple random walk and its logarithmic
//! growth.

use std::f64::consts::PI;

use dewijs::lattice::PotentialKernelTable;

fn main() -> dewijs::Result<()> {
    let table = PotentialKernelTable::new(64)?;
    println!("a(s, t) for 0 <= t <= s <= 4");
    for s in 0..=4 {
        let row: Vec<String> = (0..=s).map(|t| format!("{:.10}", table.get(s, t).unwrap())).collect();
        println!("  s = {s}: {}", row.join("  "));
    }
    println!("4/pi = {:.10}", 4.0 / PI);
    println!("discrete Laplacian residual {:.2e}", table.laplacian_residual());
    for s in [4, 8, 16, 32, 64] {
        let offset = table.get(s, 0).unwrap() - 2.0 / PI * (s as f64).ln();
        println!("a({s}, 0) - (2/pi) log {s} = {offset:.10}");
    }
    Ok(())
}
