use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction, IndexRect, Mesh};
use crate::number::Rational;

/// A finite family of rectangles with pairwise disjoint interiors.
///
/// Closed members may share boundary points; multiplicities add there.
/// Members are kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RectGaggle {
    members: Vec<IndexRect>,
}

impl RectGaggle {
    pub fn new(mut members: Vec<IndexRect>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyGaggle);
        }
        members.sort();
        for (k, r) in members.iter().enumerate() {
            if let Some(s) = members[k + 1..].iter().find(|s| r.overlaps(s)) {
                return Err(Error::OverlappingGaggle(*r, *s));
            }
        }
        Ok(RectGaggle { members })
    }

    pub fn single(rect: IndexRect) -> Self {
        RectGaggle { members: vec![rect] }
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<IndexRect>) -> Self {
        RectGaggle { members }
    }

    pub fn members(&self) -> &[IndexRect] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fits(&self, mesh: &Mesh) -> Result<()> {
        match self.members.iter().find(|r| !mesh.contains_rect(r)) {
            Some(r) => Err(Error::IndexOutOfRange(*r)),
            None => Ok(()),
        }
    }

    /// Signed corner counts: `+1` per main corner, `-1` per opposite corner.
    pub fn multiplicity(&self) -> MultiplicityMap {
        let mut entries = BTreeMap::new();
        for r in &self.members {
            for p in r.main_corners() {
                *entries.entry(p).or_insert(0) += 1;
            }
            for p in r.opposite_corners() {
                *entries.entry(p).or_insert(0) -= 1;
            }
        }
        entries.retain(|_, m| *m != 0);
        MultiplicityMap { entries }
    }

    pub fn reflect(&self, axis: Axis, last: usize) -> RectGaggle {
        let mut members: Vec<_> = self.members.iter().map(|r| r.reflect(axis, last)).collect();
        members.sort();
        RectGaggle { members }
    }

    pub fn transpose(&self) -> RectGaggle {
        let mut members: Vec<_> = self.members.iter().map(IndexRect::transpose).collect();
        members.sort();
        RectGaggle { members }
    }

    pub fn describe(&self, mesh: &Mesh) -> String {
        let parts: Vec<_> = self.members.iter().map(|r| r.describe(mesh)).collect();
        parts.join(" + ")
    }
}

/// Nonzero multiplicities keyed by grid point `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityMap {
    entries: BTreeMap<(usize, usize), i64>,
}

impl MultiplicityMap {
    pub fn get(&self, point: (usize, usize)) -> i64 {
        self.entries.get(&point).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(p, m)| (*p, *m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl GridFunction {
    /// `sum_x F(x) m_G(x)`.
    pub fn gaggle_volume(&self, gaggle: &RectGaggle) -> Result<Rational> {
        gaggle.fits(self.mesh())?;
        Ok(gaggle
            .multiplicity()
            .iter()
            .fold(Rational::zero(), |acc, (p, m)| acc + self.at(p) * Rational::from_integer(m.into())))
    }
}

/// `L(G) = sum_{m > 0} B m + sum_{m < 0} A m`.
pub fn l_value(lower: &GridFunction, upper: &GridFunction, gaggle: &RectGaggle) -> Result<Rational> {
    lower.same_mesh(upper)?;
    gaggle.fits(lower.mesh())?;
    Ok(gaggle.multiplicity().iter().fold(Rational::zero(), |acc, (p, m)| {
        let f = if m > 0 { upper } else { lower };
        acc + f.at(p) * Rational::from_integer(m.into())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::grid::AxisGrid;
    use crate::number::{int, ratio};

    fn rect(i1: usize, i2: usize, j1: usize, j2: usize) -> IndexRect {
        IndexRect::new(i1, i2, j1, j2).unwrap()
    }

    #[test]
    fn single_rectangle_multiplicity() {
        let m = RectGaggle::single(rect(1, 3, 0, 2)).multiplicity();
        assert_eq!(m.get((1, 0)), 1);
        assert_eq!(m.get((3, 2)), 1);
        assert_eq!(m.get((3, 0)), -1);
        assert_eq!(m.get((1, 2)), -1);
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn touching_main_corners_add() {
        let g = RectGaggle::new(vec![rect(0, 1, 0, 1), rect(1, 2, 1, 2)]).unwrap();
        assert_eq!(g.multiplicity().get((1, 1)), 2);
    }

    #[test]
    fn shared_edge_cancels() {
        let g = RectGaggle::new(vec![rect(0, 1, 0, 2), rect(1, 2, 0, 2)]).unwrap();
        let m = g.multiplicity();
        assert_eq!(m.get((1, 0)), 0);
        assert_eq!(m.get((1, 2)), 0);
        assert_eq!(m, RectGaggle::single(rect(0, 2, 0, 2)).multiplicity());
    }

    #[test]
    fn overlap_and_empty_rejected() {
        assert!(matches!(RectGaggle::new(vec![rect(0, 2, 0, 2), rect(1, 3, 1, 3)]), Err(Error::OverlappingGaggle(..))));
        assert!(matches!(RectGaggle::new(vec![]), Err(Error::EmptyGaggle)));
    }

    #[test]
    fn lower_bound_gaggle_volume_is_zero() {
        let w = families::lower(Mesh::square(AxisGrid::uniform_unit(2))).unwrap();
        let g = RectGaggle::new(vec![rect(0, 1, 0, 1), rect(1, 2, 1, 2)]).unwrap();
        assert_eq!(w.gaggle_volume(&g).unwrap(), int(0));
    }

    #[test]
    fn l_value_examples() {
        let mesh = Mesh::square(AxisGrid::uniform_unit(4));
        let w = families::lower(mesh.clone()).unwrap();
        let m = families::upper(mesh).unwrap();
        assert_eq!(l_value(&w, &m, &RectGaggle::single(rect(1, 3, 1, 3))).unwrap(), int(1));
        let q = families::proper_quasi_copula();
        assert_eq!(l_value(&q, &q, &RectGaggle::single(rect(1, 2, 1, 2))).unwrap(), ratio(-1, 3));
        assert!(l_value(&w, &q, &RectGaggle::single(rect(1, 2, 1, 2))).is_err());
    }
}
