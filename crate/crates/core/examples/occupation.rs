//! Occupation times of the simple random walk reproduce the potential-kernel
//! inner product of a nearest-neighbour dipole.

use dewijs::lattice::occupation_identity_check;
use dewijs::{Contrast, LatticePoint};

fn main() -> dewijs::Result<()> {
    let dipole = Contrast::lattice_dipole(LatticePoint::ORIGIN, LatticePoint::new(1, 0));
    for horizon in [10_000, 100_000] {
        let r = occupation_identity_check(&dipole, &dipole, horizon, 200_000, 1, 8)?;
        println!(
            "T = {horizon:>6}: estimate {:.4} ± {:.4}, kernel value {:.4}, relative error {:.4}",
            r.estimate, r.std_error, r.kernel_value, r.relative_error
        );
    }
    Ok(())
}
