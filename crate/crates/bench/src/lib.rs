//! Seeded inputs shared by the benchmarks.

use quasicop::sample;
use quasicop::{AxisGrid, GridFunction, Mesh, UnivariateGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A seeded ordered pair of quasi-copulas on `{0, 1/n, ..., 1}^2`.
pub fn quasi_copula_pair(n: usize, seed: u64) -> (GridFunction, GridFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axis = AxisGrid::uniform_unit(n);
    let fx = UnivariateGrid::identity(axis.clone()).expect("unit axis");
    let fy = UnivariateGrid::identity(axis).expect("unit axis");
    sample::quasi_pair(&mut rng, &fx, &fy)
}

/// A seeded pair of distributions on `{0, 1/n, ..., 1}^2` ordered as
/// pointwise minimum and maximum, so the sandwich problem is feasible.
pub fn feasible_pair(n: usize, seed: u64) -> (GridFunction, GridFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = Mesh::square(AxisGrid::uniform_unit(n));
    let f = sample::copula(&mut rng, &mesh, 3);
    let g = sample::copula(&mut rng, &mesh, 3);
    (f.pointwise_min(&g).expect("same mesh"), f.pointwise_max(&g).expect("same mesh"))
}

pub fn copula(n: usize, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample::copula(&mut rng, &Mesh::square(AxisGrid::uniform_unit(n)), 4)
}
