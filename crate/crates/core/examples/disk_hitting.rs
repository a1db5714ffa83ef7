//! Exit points of Brownian motion from the unit disk, sampled by
//! walk-on-spheres and by an Euler scheme, against the Poisson kernel.

use dewijs::continuum::{
    chi_square, chi_square_quantile, expected_counts, sample_hitting, total_variation, Method,
};
use dewijs::Point;

fn main() -> dewijs::Result<()> {
    let x0 = Point::new(0.5, 0.0);
    let n = 200_000;
    let bins = 36;

    let wos = sample_hitting(x0, n, Method::WalkOnSpheres, 7, 8)?;
    let euler = sample_hitting(x0, n, Method::Euler { step: 1e-4 }, 7, 8)?;
    let expected = expected_counts(x0, bins, n)?;
    let (w, e) = (wos.histogram(bins), euler.histogram(bins));

    println!("{:>8} {:>10} {:>10} {:>10}", "bin", "expected", "wos", "euler");
    for k in 0..bins {
        println!("{k:>8} {:>10.1} {:>10} {:>10}", expected[k], w[k], e[k]);
    }
    println!("chi-square (wos)   {:.2}", chi_square(&w, &expected));
    println!("chi-square (euler) {:.2}", chi_square(&e, &expected));
    println!("99.9% quantile     {:.2}", chi_square_quantile(bins - 1, 0.999));
    println!("total variation    {:.4}", total_variation(&w, &e));
    Ok(())
}
