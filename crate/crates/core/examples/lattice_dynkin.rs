//! On a box of `Z²`, kriging an interior point from the boundary under the
//! random-walk potential kernel gives exactly the walk's hitting
//! probabilities.

use std::sync::Arc;

use dewijs::lattice::{hitting_probabilities, BoundaryKriging, LatticeDomain, PotentialKernelTable};
use dewijs::LatticePoint;

fn main() -> dewijs::Result<()> {
    let domain = LatticeDomain::square_box(5)?;
    let table = Arc::new(PotentialKernelTable::new(domain.diameter())?);
    let x = LatticePoint::new(1, 0);

    let hitting = hitting_probabilities(&domain, x)?;
    let weights = BoundaryKriging::new(&domain, &table)?.weights(x)?;

    println!("{:>8} {:>14} {:>14}", "site", "hitting", "kriging");
    for ((p, h), w) in domain.boundary().iter().zip(&hitting).zip(&weights) {
        println!("{:>8} {h:>14.10} {w:>14.10}", p.to_string());
    }
    let dev = hitting.iter().zip(&weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max deviation {dev:.2e}");
    Ok(())
}
