//! Intrinsic kriging for the de Wijs process (logarithmic generalized
//! covariance) together with the machinery used to check its Markov
//! property numerically.
//!
//! Kriging weights on a boundary are obtained two ways and compared:
//!
//! * by solving the constrained (sum-to-one) kriging system under a
//!   generalized covariance ([`kriging`]);
//! * from first-hitting distributions of Brownian motion on the disk
//!   ([`continuum`]) or of the simple random walk on `Z^2` ([`lattice`]).
//!
//! The [`kernels`] module evaluates the generalized covariances (log,
//! Bessel `K0`, cell-averaged log, random-walk potential kernel) and the
//! spectral densities of the lattice/continuum Gaussian Markov models.
//! Index objects of the field are zero-mass signed measures, see
//! [`contrast`].
//!
//! Runnable examples live in `examples/`; the `dewijs` binary exposes the
//! reproduction and verification runs from the command line ([`cli`]).

pub mod cli;
pub mod continuum;
pub mod contrast;
mod error;
pub mod kernels;
pub mod kriging;
pub mod lattice;
mod point;
pub mod quadrature;
pub mod rng;

pub use contrast::{Atom, Contrast, Location, Space, Support};
pub use error::{Error, Result};
pub use kernels::{Kernel, SpectralModel};
pub use kriging::{KrigingProblem, KrigingSolution};
pub use point::{LatticePoint, Point};
