//! Meshes, grid functions on them, rectangle volumes and the (A)/(B)/(C)
//! classification of discrete quasi-distributions.
//!
//! A mesh is the product of two axis grids. On the extended kind each axis
//! starts at `-inf` and ends at `+inf`; on the unit kind it starts at 0 and
//! ends at 1. Grid values are exact rationals with `values[i][j] = F(x_i, y_j)`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{format_rational, Coord, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// The extended real line with `-inf`/`+inf` sentinels.
    Extended,
    /// The unit interval.
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Strictly increasing coordinates of one mesh axis, sentinels included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisGrid {
    kind: AxisKind,
    coords: Vec<Coord>,
}

impl AxisGrid {
    pub fn new(kind: AxisKind, coords: Vec<Coord>) -> Result<Self> {
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAxis("axis not increasing".into()));
        }
        match kind {
            AxisKind::Extended => {
                if coords.len() < 3 {
                    return Err(Error::InvalidAxis("extended axis needs at least 3 coordinates".into()));
                }
                if coords.first() != Some(&Coord::NegInf) || coords.last() != Some(&Coord::PosInf) {
                    return Err(Error::InvalidAxis("extended axis must run from -inf to inf".into()));
                }
                let inner = &coords[1..coords.len() - 1];
                if inner.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidAxis("infinite coordinate inside the axis".into()));
                }
            }
            AxisKind::Unit => {
                if coords.len() < 2 {
                    return Err(Error::InvalidAxis("unit axis needs at least 2 coordinates".into()));
                }
                if coords.first() != Some(&Coord::Finite(Rational::zero()))
                    || coords.last() != Some(&Coord::Finite(Rational::one()))
                {
                    return Err(Error::InvalidAxis("unit axis must run from 0 to 1".into()));
                }
            }
        }
        Ok(AxisGrid { kind, coords })
    }

    /// Extended axis `-inf < finite... < inf`.
    pub fn extended(finite: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut coords = vec![Coord::NegInf];
        coords.extend(finite.into_iter().map(Coord::Finite));
        coords.push(Coord::PosInf);
        AxisGrid::new(AxisKind::Extended, coords)
    }

    /// Unit axis from coordinates that already include 0 and 1.
    pub fn unit(coords: impl IntoIterator<Item = Rational>) -> Result<Self> {
        AxisGrid::new(AxisKind::Unit, coords.into_iter().map(Coord::Finite).collect())
    }

    /// `{0, 1/n, ..., 1}`.
    pub fn uniform_unit(n: usize) -> Self {
        assert!(n >= 1);
        let n = n as i64;
        AxisGrid::unit((0..=n).map(|k| crate::number::ratio(k, n))).expect("uniform unit axis")
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Index of the top sentinel.
    pub fn last(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn position(&self, coord: &Coord) -> Option<usize> {
        self.coords.binary_search(coord).ok()
    }

    /// Index `k` with `coords[k] <= x <= coords[k + 1]`, preferring the lower cell.
    pub fn cell_containing(&self, x: &Coord) -> Option<usize> {
        if x < &self.coords[0] || x > &self.coords[self.last()] {
            return None;
        }
        let k = match self.coords.binary_search(x) {
            Ok(k) => k.saturating_sub(1),
            Err(k) => k - 1,
        };
        Some(k.min(self.last() - 1))
    }

    /// The axis under `x -> -x` (extended) or `x -> 1 - x` (unit); index `i` maps to `last - i`.
    pub fn reflected(&self) -> AxisGrid {
        let coords = self
            .coords
            .iter()
            .rev()
            .map(|c| match self.kind {
                AxisKind::Extended => c.negate(),
                AxisKind::Unit => Coord::Finite(Rational::one() - c.as_finite().expect("unit coordinate")),
            })
            .collect();
        AxisGrid { kind: self.kind, coords }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mesh {
    x: AxisGrid,
    y: AxisGrid,
}

impl Mesh {
    pub fn new(x: AxisGrid, y: AxisGrid) -> Result<Self> {
        if x.kind() != y.kind() {
            return Err(Error::KindMismatch);
        }
        Ok(Mesh { x, y })
    }

    pub fn square(axis: AxisGrid) -> Self {
        Mesh { x: axis.clone(), y: axis }
    }

    pub fn x(&self) -> &AxisGrid {
        &self.x
    }

    pub fn y(&self) -> &AxisGrid {
        &self.y
    }

    pub fn axis(&self, axis: Axis) -> &AxisGrid {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
        }
    }

    pub fn kind(&self) -> AxisKind {
        self.x.kind()
    }

    /// Number of elementary cells `p * q`.
    pub fn cell_count(&self) -> usize {
        self.x.last() * self.y.last()
    }

    pub fn transpose(&self) -> Mesh {
        Mesh { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn contains_point(&self, i: usize, j: usize) -> bool {
        i < self.x.len() && j < self.y.len()
    }

    pub fn contains_rect(&self, rect: &IndexRect) -> bool {
        rect.i2 < self.x.len() && rect.j2 < self.y.len()
    }

    /// True for points with an index on the sentinel frame.
    pub fn on_frame(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.x.last() || j == self.y.last()
    }

    pub fn describe_point(&self, i: usize, j: usize) -> String {
        format!("({}, {})", self.x.coords[i], self.y.coords[j])
    }
}

/// Rectangle with distinct standard corners, given by axis indices.
///
/// Corners: `a = (i1, j1)`, `b = (i2, j1)`, `c = (i2, j2)`, `d = (i1, j2)`.
/// `a` and `c` are the main corners, `b` and `d` the opposite ones. The
/// derived order is the lexicographic scan order `(i1, j1, i2, j2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexRect {
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
}

impl IndexRect {
    pub fn new(i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Self> {
        if i1 >= i2 || j1 >= j2 {
            return Err(Error::InvalidGrid(format!("degenerate rectangle [{i1}, {i2}] x [{j1}, {j2}]")));
        }
        Ok(IndexRect { i1, j1, i2, j2 })
    }

    /// Elementary cell with south-west corner `(i, j)`.
    pub fn cell(i: usize, j: usize) -> Self {
        IndexRect { i1: i, j1: j, i2: i + 1, j2: j + 1 }
    }

    pub fn i1(&self) -> usize {
        self.i1
    }
    pub fn i2(&self) -> usize {
        self.i2
    }
    pub fn j1(&self) -> usize {
        self.j1
    }
    pub fn j2(&self) -> usize {
        self.j2
    }

    pub fn main_corners(&self) -> [(usize, usize); 2] {
        [(self.i1, self.j1), (self.i2, self.j2)]
    }

    pub fn opposite_corners(&self) -> [(usize, usize); 2] {
        [(self.i2, self.j1), (self.i1, self.j2)]
    }

    pub fn touches_frame(&self, mesh: &Mesh) -> bool {
        self.i1 == 0 || self.j1 == 0 || self.i2 == mesh.x().last() || self.j2 == mesh.y().last()
    }

    /// Interiors intersect.
    pub fn overlaps(&self, other: &IndexRect) -> bool {
        self.i1 < other.i2 && other.i1 < self.i2 && self.j1 < other.j2 && other.j1 < self.j2
    }

    pub fn transpose(&self) -> IndexRect {
        IndexRect { i1: self.j1, j1: self.i1, i2: self.j2, j2: self.i2 }
    }

    /// Image under the reflection of one axis whose last index is `last`.
    pub fn reflect(&self, axis: Axis, last: usize) -> IndexRect {
        match axis {
            Axis::X => IndexRect { i1: last - self.i2, i2: last - self.i1, ..*self },
            Axis::Y => IndexRect { j1: last - self.j2, j2: last - self.j1, ..*self },
        }
    }

    pub fn describe(&self, mesh: &Mesh) -> String {
        format!(
            "[{}, {}] x [{}, {}]",
            mesh.x().coords()[self.i1],
            mesh.x().coords()[self.i2],
            mesh.y().coords()[self.j1],
            mesh.y().coords()[self.j2]
        )
    }
}

/// A function on a mesh with values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridFunction {
    mesh: Mesh,
    values: Vec<Vec<Rational>>,
}

impl GridFunction {
    pub fn new(mesh: Mesh, values: Vec<Vec<Rational>>) -> Result<Self> {
        if values.len() != mesh.x().len() || values.iter().any(|row| row.len() != mesh.y().len()) {
            return Err(Error::InvalidGrid(format!("value matrix must be {} x {}", mesh.x().len(), mesh.y().len())));
        }
        for (i, row) in values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() || v > &Rational::one() {
                    return Err(Error::ValueOutOfRange { i, j, value: format_rational(v) });
                }
            }
        }
        Ok(GridFunction { mesh, values })
    }

    pub fn from_fn(mesh: Mesh, mut f: impl FnMut(&Coord, &Coord) -> Rational) -> Result<Self> {
        let values = mesh.x().coords().iter().map(|x| mesh.y().coords().iter().map(|y| f(x, y)).collect()).collect();
        GridFunction::new(mesh, values)
    }

    pub fn from_fn_indexed(mesh: Mesh, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let (p, q) = (mesh.x().len(), mesh.y().len());
        let values = (0..p).map(|i| (0..q).map(|j| f(i, j)).collect()).collect();
        GridFunction::new(mesh, values)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }

    pub fn at(&self, point: (usize, usize)) -> &Rational {
        &self.values[point.0][point.1]
    }

    /// Copy with one value replaced; bypasses nothing, the value must stay in `[0, 1]`.
    pub fn with_value(&self, i: usize, j: usize, value: Rational) -> Result<Self> {
        if value.is_negative() || value > Rational::one() {
            return Err(Error::ValueOutOfRange { i, j, value: format_rational(&value) });
        }
        let mut out = self.clone();
        out.values[i][j] = value;
        Ok(out)
    }

    /// `F(a) + F(c) - F(b) - F(d)`.
    pub fn volume(&self, rect: &IndexRect) -> Result<Rational> {
        if !self.mesh.contains_rect(rect) {
            return Err(Error::IndexOutOfRange(*rect));
        }
        Ok(self.volume_unchecked(rect))
    }

    pub(crate) fn volume_unchecked(&self, r: &IndexRect) -> Rational {
        let v = &self.values;
        &v[r.i1][r.j1] + &v[r.i2][r.j2] - &v[r.i2][r.j1] - &v[r.i1][r.j2]
    }

    /// Column `F(x_i, top)` indexed by `i`.
    pub fn top_row_x(&self) -> Vec<Rational> {
        let top = self.mesh.y().last();
        self.values.iter().map(|row| row[top].clone()).collect()
    }

    /// Row `F(top, y_j)` indexed by `j`.
    pub fn top_row_y(&self) -> Vec<Rational> {
        self.values[self.mesh.x().last()].clone()
    }

    pub fn same_mesh(&self, other: &GridFunction) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch);
        }
        Ok(())
    }

    /// First point in scan order where `self > other`, if any.
    pub fn first_exceeding(&self, other: &GridFunction) -> Option<(usize, usize)> {
        for (i, (r1, r2)) in self.values.iter().zip(&other.values).enumerate() {
            for (j, (a, b)) in r1.iter().zip(r2).enumerate() {
                if a > b {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn le(&self, other: &GridFunction) -> bool {
        self.mesh == other.mesh && self.first_exceeding(other).is_none()
    }

    /// First failure of groundedness or normalization, in scan order.
    fn grounding_violation(&self) -> Option<Violation> {
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if (i == 0 || j == 0) && !v.is_zero() {
                    return Some(Violation::Point { i, j, value: v.clone() });
                }
            }
        }
        let (p, q) = (self.mesh.x().last(), self.mesh.y().last());
        let top = &self.values[p][q];
        if !top.is_one() {
            return Some(Violation::Point { i: p, j: q, value: top.clone() });
        }
        None
    }

    pub fn is_grounded(&self) -> bool {
        self.grounding_violation().is_none()
    }

    fn require_grounded(&self) -> Result<()> {
        match self.grounding_violation() {
            Some(Violation::Point { i, j, value }) => Err(Error::NotGrounded { i, j, value: format_rational(&value) }),
            _ => Ok(()),
        }
    }

    /// Evaluates conditions (A), (B) and (C).
    ///
    /// (B) scans every rectangle touching the sentinel frame; (C) scans the
    /// elementary cells, which suffices by additivity of the volume.
    pub fn classify(&self) -> Classification {
        if let Some(v) = self.grounding_violation() {
            return Classification {
                holds_a: false,
                holds_b: false,
                holds_c: false,
                a_violation: Some(v),
                b_violation: None,
                c_violation: None,
            };
        }
        let (p, q) = (self.mesh.x().last(), self.mesh.y().last());
        let mut b_violation = None;
        'scan: for i1 in 0..p {
            for j1 in 0..q {
                for i2 in i1 + 1..=p {
                    for j2 in j1 + 1..=q {
                        if i1 != 0 && j1 != 0 && i2 != p && j2 != q {
                            continue;
                        }
                        let rect = IndexRect { i1, j1, i2, j2 };
                        let volume = self.volume_unchecked(&rect);
                        if volume.is_negative() {
                            b_violation = Some(Violation::Rect { rect, volume });
                            break 'scan;
                        }
                    }
                }
            }
        }
        let mut c_violation = None;
        'cells: for i in 0..p {
            for j in 0..q {
                let rect = IndexRect::cell(i, j);
                let volume = self.volume_unchecked(&rect);
                if volume.is_negative() {
                    c_violation = Some(Violation::Rect { rect, volume });
                    break 'cells;
                }
            }
        }
        let holds_b = b_violation.is_none();
        Classification {
            holds_a: true,
            holds_b,
            holds_c: holds_b && c_violation.is_none(),
            a_violation: None,
            b_violation,
            c_violation,
        }
    }

    /// The univariate margins `F(., top)` and `F(top, .)`.
    pub fn margins(&self) -> Result<(UnivariateGrid, UnivariateGrid)> {
        self.require_grounded()?;
        Ok((
            UnivariateGrid::new(self.mesh.x().clone(), self.top_row_x())?,
            UnivariateGrid::new(self.mesh.y().clone(), self.top_row_y())?,
        ))
    }

    /// Identity margins, i.e. `F(u, 1) = u` and `F(1, v) = v` on a unit mesh.
    pub fn has_uniform_margins(&self) -> bool {
        self.mesh.kind() == AxisKind::Unit
            && self.top_row_x().iter().zip(self.mesh.x().coords()).all(|(v, c)| Some(v) == c.as_finite())
            && self.top_row_y().iter().zip(self.mesh.y().coords()).all(|(v, c)| Some(v) == c.as_finite())
    }

    /// First coordinate where the margins of `self` and `other` differ.
    pub fn margin_mismatch(&self, other: &GridFunction) -> Option<(Axis, String)> {
        let x = self.mesh.x();
        for (i, (a, b)) in self.top_row_x().iter().zip(other.top_row_x()).enumerate() {
            if *a != b {
                return Some((Axis::X, x.coords()[i].to_string()));
            }
        }
        let y = self.mesh.y();
        for (j, (a, b)) in self.top_row_y().iter().zip(other.top_row_y()).enumerate() {
            if *a != b {
                return Some((Axis::Y, y.coords()[j].to_string()));
            }
        }
        None
    }

    pub(crate) fn require_common_margins(&self, other: &GridFunction) -> Result<()> {
        match self.margin_mismatch(other) {
            Some((axis, coord)) => Err(Error::MarginMismatch { axis, coord }),
            None => Ok(()),
        }
    }

    /// Reflection `F^d(-x, y) = F_Y(y) - F(x, y)` (axis x) or its mirror for
    /// axis y. On unit meshes `-x` reads `1 - x`.
    pub fn reflect(&self, axis: Axis) -> Result<GridFunction> {
        self.require_grounded()?;
        let (p, q) = (self.mesh.x().last(), self.mesh.y().last());
        let values: Vec<Vec<Rational>> = match axis {
            Axis::X => {
                (0..=p).map(|i| (0..=q).map(|j| &self.values[p][j] - &self.values[p - i][j]).collect()).collect()
            }
            Axis::Y => {
                (0..=p).map(|i| (0..=q).map(|j| &self.values[i][q] - &self.values[i][q - j]).collect()).collect()
            }
        };
        let mesh = match axis {
            Axis::X => Mesh { x: self.mesh.x.reflected(), y: self.mesh.y.clone() },
            Axis::Y => Mesh { x: self.mesh.x.clone(), y: self.mesh.y.reflected() },
        };
        GridFunction::new(mesh, values)
    }

    pub fn transpose(&self) -> GridFunction {
        let (p, q) = (self.mesh.x().len(), self.mesh.y().len());
        let values = (0..q).map(|j| (0..p).map(|i| self.values[i][j].clone()).collect()).collect();
        GridFunction { mesh: self.mesh.transpose(), values }
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(&Rational, &Rational) -> Rational) -> GridFunction {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| f(a, b)).collect())
            .collect();
        GridFunction { mesh: self.mesh.clone(), values }
    }

    pub fn pointwise_min(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| a.min(b).clone()))
    }

    pub fn pointwise_max(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| a.max(b).clone()))
    }
}

/// Pointwise infimum and supremum of grid functions sharing mesh and margins.
///
/// Envelopes across distinct margins are rejected.
pub fn envelope(fs: &[GridFunction]) -> Result<(GridFunction, GridFunction)> {
    let (first, rest) = fs.split_first().ok_or_else(|| Error::Precondition("empty family".into()))?;
    first.require_grounded()?;
    for f in rest {
        first.same_mesh(f)?;
        f.require_grounded()?;
        first.require_common_margins(f)?;
    }
    let mut lower = first.clone();
    let mut upper = first.clone();
    for f in rest {
        lower = lower.pointwise_min(f)?;
        upper = upper.pointwise_max(f)?;
    }
    Ok((lower, upper))
}

/// A failed condition together with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Point { i: usize, j: usize, value: Rational },
    Rect { rect: IndexRect, volume: Rational },
}

/// Verdicts for conditions (A), (B), (C).
///
/// When (A) fails, (B) and (C) fail with it and carry no separate witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub holds_a: bool,
    pub holds_b: bool,
    pub holds_c: bool,
    pub a_violation: Option<Violation>,
    pub b_violation: Option<Violation>,
    pub c_violation: Option<Violation>,
}

impl Classification {
    pub fn is_quasi_distribution(&self) -> bool {
        self.holds_b
    }

    pub fn is_distribution(&self) -> bool {
        self.holds_c
    }
}

/// A univariate distribution sampled on one axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariateGrid {
    axis: AxisGrid,
    values: Vec<Rational>,
}

impl UnivariateGrid {
    pub fn new(axis: AxisGrid, values: Vec<Rational>) -> Result<Self> {
        if values.len() != axis.len() {
            return Err(Error::InvalidMargin(format!("expected {} values, got {}", axis.len(), values.len())));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidMargin("value at the bottom coordinate must be 0".into()));
        }
        if !values[values.len() - 1].is_one() {
            return Err(Error::InvalidMargin("value at the top coordinate must be 1".into()));
        }
        if let Some(k) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidMargin(format!("decreasing after coordinate {}", axis.coords()[k])));
        }
        Ok(UnivariateGrid { axis, values })
    }

    pub fn from_fn(axis: AxisGrid, f: impl Fn(&Coord) -> Rational) -> Result<Self> {
        let values = axis.coords().iter().map(f).collect();
        UnivariateGrid::new(axis, values)
    }

    /// `F(u) = u` on a unit axis.
    pub fn identity(axis: AxisGrid) -> Result<Self> {
        if axis.kind() != AxisKind::Unit {
            return Err(Error::KindMismatch);
        }
        let values = axis.coords().iter().map(|c| c.as_finite().cloned().unwrap_or_default()).collect();
        UnivariateGrid::new(axis, values)
    }

    pub fn axis(&self) -> &AxisGrid {
        &self.axis
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Sorted distinct values; always contains 0 and 1.
    pub fn range(&self) -> Vec<Rational> {
        let mut out = self.values.clone();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::number::{int, ratio};

    fn quarters() -> Mesh {
        Mesh::square(AxisGrid::uniform_unit(4))
    }

    #[test]
    fn axis_validation() {
        let err = AxisGrid::extended(vec![ratio(1, 2), ratio(-1, 2)]).unwrap_err();
        assert!(err.to_string().contains("axis not increasing"));
        assert!(AxisGrid::extended(vec![]).is_err());
        assert!(AxisGrid::extended(vec![int(0), ratio(1, 4)]).is_ok());
        assert!(AxisGrid::unit(vec![int(0), ratio(1, 2)]).is_err());
        assert!(AxisGrid::new(
            AxisKind::Extended,
            vec![Coord::NegInf, Coord::PosInf, Coord::Finite(int(1)), Coord::PosInf]
        )
        .is_err());
        let x = AxisGrid::extended(vec![int(-1), int(2)]).unwrap();
        assert_eq!(x.cell_containing(&Coord::Finite(int(-5))), Some(0));
        assert_eq!(x.cell_containing(&Coord::Finite(int(-1))), Some(0));
        assert_eq!(x.cell_containing(&Coord::Finite(int(0))), Some(1));
        assert_eq!(x.cell_containing(&Coord::PosInf), Some(2));
        assert_eq!(x.cell_containing(&Coord::NegInf), Some(0));
    }

    #[test]
    fn volumes_of_basic_copulas() {
        let r = IndexRect::new(1, 3, 1, 3).unwrap();
        assert_eq!(families::product(quarters()).unwrap().volume(&r).unwrap(), ratio(1, 4));
        assert_eq!(families::upper(quarters()).unwrap().volume(&r).unwrap(), ratio(1, 2));
        assert!(families::upper(quarters()).unwrap().volume(&IndexRect::new(0, 5, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn degenerate_rectangles_are_rejected() {
        assert!(IndexRect::new(1, 1, 0, 2).is_err());
        assert!(IndexRect::new(2, 1, 0, 2).is_err());
    }

    #[test]
    fn classify_copula_and_quasi_copula() {
        let m = families::upper(quarters()).unwrap().classify();
        assert!(m.holds_a && m.holds_b && m.holds_c);

        let q = families::proper_quasi_copula().classify();
        assert!(q.holds_a && q.holds_b && !q.holds_c);
        assert_eq!(
            q.c_violation,
            Some(Violation::Rect { rect: IndexRect::new(1, 2, 1, 2).unwrap(), volume: ratio(-1, 3) })
        );
    }

    #[test]
    fn classify_detects_ungrounded() {
        let f = families::product(quarters()).unwrap().with_value(1, 0, ratio(1, 10)).unwrap();
        let c = f.classify();
        assert!(!c.holds_a && !c.holds_b && !c.holds_c);
        assert_eq!(c.a_violation, Some(Violation::Point { i: 1, j: 0, value: ratio(1, 10) }));
        assert!(f.margins().is_err());
    }

    #[test]
    fn classify_b_failure_on_frame() {
        // Not increasing along the top row: a frame rectangle goes negative.
        let mesh = Mesh::square(AxisGrid::uniform_unit(2));
        let v = |a: i64, b: i64| ratio(a, b);
        let f = GridFunction::new(
            mesh,
            vec![vec![int(0), int(0), int(0)], vec![int(0), v(1, 2), v(1, 4)], vec![int(0), v(1, 2), int(1)]],
        )
        .unwrap();
        let c = f.classify();
        assert!(c.holds_a && !c.holds_b && !c.holds_c);
        assert!(matches!(c.b_violation, Some(Violation::Rect { .. })));
        assert!(c.c_violation.is_some());
    }

    #[test]
    fn copula_margins_are_identity() {
        let (fx, fy) = families::lower(quarters()).unwrap().margins().unwrap();
        assert_eq!(fx, UnivariateGrid::identity(AxisGrid::uniform_unit(4)).unwrap());
        assert_eq!(fy, fx);
    }

    #[test]
    fn envelope_singleton_and_mismatch() {
        let pi = families::product(quarters()).unwrap();
        let (lo, hi) = envelope(std::slice::from_ref(&pi)).unwrap();
        assert_eq!(lo, pi);
        assert_eq!(hi, pi);
        assert!(envelope(&[]).is_err());
    }

    #[test]
    fn reflection_swaps_frechet_bounds() {
        let w = families::lower(quarters()).unwrap();
        let m = families::upper(quarters()).unwrap();
        assert_eq!(w.reflect(Axis::X).unwrap(), m);
        assert_eq!(w.reflect(Axis::Y).unwrap(), m);
        assert_eq!(m.reflect(Axis::X).unwrap().reflect(Axis::X).unwrap(), m);
    }

    #[test]
    fn rect_reflection_swaps_corner_roles() {
        let r = IndexRect::new(0, 1, 1, 3).unwrap();
        let s = r.reflect(Axis::X, 4);
        assert_eq!((s.i1(), s.i2(), s.j1(), s.j2()), (3, 4, 1, 3));
        assert!(r.overlaps(&IndexRect::new(0, 2, 2, 4).unwrap()));
        assert!(!r.overlaps(&IndexRect::new(1, 2, 0, 4).unwrap()));
    }
}
