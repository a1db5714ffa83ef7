//! Contrasts (zero-mass signed measures), their inner products under the
//! available generalized covariances, and the spectral densities of the
//! lattice and continuum Markov models.

use std::f64::consts::PI;
use std::sync::Arc;

use dewijs::kernels::inner_product;
use dewijs::lattice::PotentialKernelTable;
use dewijs::{Atom, Contrast, Kernel, SpectralModel};

fn main() -> dewijs::Result<()> {
    let sigma = Contrast::new(vec![Atom::point(0.0, 0.0, 1.0), Atom::point(1.0, 0.0, -1.0)])?;
    let nu = Contrast::new(vec![Atom::point(0.0, 2.0, 1.0), Atom::point(1.0, 2.0, -1.0)])?;
    for kernel in [Kernel::Log, Kernel::bessel_k0(0.1)?, Kernel::Log.shifted(3.0)] {
        println!("<sigma, nu> under {:<10} = {:.12}", kernel.name(), inner_product(&sigma, &nu, &kernel)?.value);
    }

    let cells = Contrast::new(vec![Atom::cell(0, 0, 1.0), Atom::cell(3, 1, -1.0)])?;
    println!("cell contrast variance      = {:.12}", inner_product(&cells, &cells, &Kernel::CellLog)?.value);

    let table = Arc::new(PotentialKernelTable::new(4)?);
    let walk = Contrast::new(vec![Atom::lattice(0, 0, 1.0), Atom::lattice(2, 1, -1.0)])?;
    let v = inner_product(&walk, &walk, &Kernel::lattice_potential(table))?.value;
    println!("lattice dipole variance     = {v:.12}");

    println!("\nspectral densities at (w, e) = (0.3, 0.2)");
    for model in [
        SpectralModel::stationary_ar(0.9)?,
        SpectralModel::IntrinsicAr,
        SpectralModel::gen_ou(0.5)?,
        SpectralModel::DeWijs,
    ] {
        println!("  {model:?}: {:.6}", model.density(0.3, 0.2)?);
    }
    println!("  intrinsic AR / de Wijs near 0: {:.6}", {
        let (w, e) = (1e-3, 1e-3);
        SpectralModel::IntrinsicAr.density(w, e)? / SpectralModel::DeWijs.density(w, e)?
    });
    println!("  (expected ratio 4; de Wijs covariance scale 1/(2 pi) = {:.6})", 1.0 / (2.0 * PI));
    Ok(())
}
