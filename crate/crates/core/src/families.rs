//! Standard copulas sampled on unit meshes.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grid::{AxisGrid, AxisKind, GridFunction, Mesh};
use crate::number::{ratio, Coord, Rational};

fn unit_fn(mesh: Mesh, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<GridFunction> {
    if mesh.kind() != AxisKind::Unit {
        return Err(Error::KindMismatch);
    }
    GridFunction::from_fn(mesh, |x, y| match (x, y) {
        (Coord::Finite(u), Coord::Finite(v)) => f(u, v),
        _ => unreachable!("unit meshes hold finite coordinates"),
    })
}

/// Upper Frechet-Hoeffding bound `M(u, v) = min(u, v)`.
pub fn upper(mesh: Mesh) -> Result<GridFunction> {
    unit_fn(mesh, |u, v| u.min(v).clone())
}

/// Lower Frechet-Hoeffding bound `W(u, v) = max(u + v - 1, 0)`.
pub fn lower(mesh: Mesh) -> Result<GridFunction> {
    unit_fn(mesh, |u, v| (u + v - Rational::one()).max(Rational::zero()))
}

/// Independence copula `u * v`.
pub fn product(mesh: Mesh) -> Result<GridFunction> {
    unit_fn(mesh, |u, v| u * v)
}

/// The proper quasi-copula on `{0, 1/3, 2/3, 1}^2` with value 0 at
/// `(1/3, 1/3)` and 1/3 at the other three interior points. The centre cell
/// has volume -1/3.
pub fn proper_quasi_copula() -> GridFunction {
    let mesh = Mesh::square(AxisGrid::uniform_unit(3));
    let third = ratio(1, 3);
    let two = ratio(2, 3);
    let z = Rational::zero();
    let one = Rational::one();
    let values = vec![
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), third.clone(), third.clone()],
        vec![z.clone(), third.clone(), third.clone(), two.clone()],
        vec![z, third, two, one],
    ];
    GridFunction::new(mesh, values).expect("valid quasi-copula")
}
