//! Kriging an interior point of the disk from arc segments of the circle.
//! The segment weights approach the Poisson-kernel mass of each segment.

use dewijs::continuum::{discretized_circle_kriging, harmonic_identity_check};
use dewijs::Point;

fn main() -> dewijs::Result<()> {
    let x0 = Point::new(0.5, 0.0);
    let mut previous: Option<f64> = None;
    for n in [45, 90, 180, 360] {
        let ck = discretized_circle_kriging(x0, n)?;
        let err = ck.max_error();
        match previous {
            Some(p) => println!("n = {n:>3}  max error {err:.3e}  ratio {:.2}", p / err),
            None => println!("n = {n:>3}  max error {err:.3e}"),
        }
        previous = Some(err);
    }

    for y in [Point::new(2.0, 0.0), Point::new(0.0, 1.0), Point::new(-1.5, 2.5)] {
        let r = harmonic_identity_check(x0, y)?;
        println!("harmonic identity at y = {y}: residual {r:.2e}");
    }
    Ok(())
}
