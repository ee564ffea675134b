//! Extension of a grid function to its whole domain.
//!
//! Along an axis, a cell with two finite ends is interpolated linearly. A
//! cell reaching `-inf` from the finite end `a < 0` uses the rational rule
//! `A(x) = A(-inf) + (a / x) (A(a) - A(-inf))`, and a cell reaching `+inf`
//! from `a > 0` uses `A(x) = A(inf) - (a / x) (A(inf) - A(a))`. The plane
//! extension applies the horizontal rule first and then the vertical one,
//! which is the tensor product of the two one-dimensional weights.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Mesh};
use crate::number::{Coord, Rational};

/// Weight of the upper end of the cell containing `x`, with the cell index.
fn axis_weight(axis: &crate::grid::AxisGrid, x: &Coord) -> Result<(usize, Rational)> {
    let k = axis.cell_containing(x).ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
    let (lo, hi) = (&axis.coords()[k], &axis.coords()[k + 1]);
    let w = match (lo, hi, x) {
        (Coord::Finite(lo), Coord::Finite(hi), Coord::Finite(x)) => (x - lo) / (hi - lo),
        (Coord::NegInf, Coord::Finite(_), Coord::NegInf) => Rational::zero(),
        (Coord::NegInf, Coord::Finite(a), Coord::Finite(x)) if a.is_negative() => a / x,
        (Coord::Finite(_), Coord::PosInf, Coord::PosInf) => Rational::one(),
        (Coord::Finite(a), Coord::PosInf, Coord::Finite(x)) if a.is_positive() => Rational::one() - a / x,
        (Coord::NegInf, _, _) | (_, Coord::PosInf, _) => {
            return Err(Error::Precondition(format!(
                "no rational extension through {x}: the finite end of an unbounded cell must be negative toward -inf and positive toward inf"
            )))
        }
        _ => return Err(Error::OutsideDomain(x.to_string())),
    };
    Ok((k, w))
}

/// The bilinear / linear-rational extension of a grid function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolatedFunction {
    base: GridFunction,
}

impl InterpolatedFunction {
    pub fn new(base: GridFunction) -> Self {
        InterpolatedFunction { base }
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    pub fn evaluate(&self, x: &Coord, y: &Coord) -> Result<Rational> {
        let mesh = self.base.mesh();
        let (i, wx) = axis_weight(mesh.x(), x)?;
        let (j, wy) = axis_weight(mesh.y(), y)?;
        let f = |di: usize, dj: usize| self.base.get(i + di, j + dj);
        let one = Rational::one();
        let (ux, uy) = (&one - &wx, &one - &wy);
        Ok(&ux * &uy * f(0, 0) + &wx * &uy * f(1, 0) + &ux * &wy * f(0, 1) + &wx * &wy * f(1, 1))
    }

    /// Volume of the rectangle `[x1, x2] x [y1, y2]` under the extension.
    pub fn volume(&self, x1: &Coord, x2: &Coord, y1: &Coord, y2: &Coord) -> Result<Rational> {
        Ok(self.evaluate(x1, y1)? + self.evaluate(x2, y2)? - self.evaluate(x2, y1)? - self.evaluate(x1, y2)?)
    }

    /// Samples the extension on another mesh of the same kind.
    pub fn restrict(&self, target: &Mesh) -> Result<GridFunction> {
        if target.kind() != self.base.mesh().kind() {
            return Err(Error::KindMismatch);
        }
        let mut values = Vec::with_capacity(target.x().len());
        for x in target.x().coords() {
            let row = target.y().coords().iter().map(|y| self.evaluate(x, y)).collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        GridFunction::new(target.clone(), values)
    }
}
