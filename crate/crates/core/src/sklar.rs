//! Sklar decomposition and composition at grid scale, imprecise copulas,
//! restricted p-boxes and the grouping of distribution families by margins.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::grid::{envelope, Axis, AxisGrid, AxisKind, GridFunction, IndexRect, Mesh, UnivariateGrid, Violation};
use crate::interp::InterpolatedFunction;
use crate::number::{Coord, Rational};
use crate::rectcalc::{check_coherence, exact_cap, CoherenceReport};

/// Splits a quasi-distribution into a grid copula on the margin ranges and
/// its two margins.
///
/// The copula mesh has the sorted distinct margin values as coordinates,
/// and `C(F_X(x_i), F_Y(y_j)) = F(x_i, y_j)`. Mesh coordinates sharing a
/// margin value must carry identical rows. Every quasi-distribution does,
/// so a mismatch is reported before the (B) check as the more specific error.
pub fn sklar_decompose(f: &GridFunction) -> Result<(GridFunction, UnivariateGrid, UnivariateGrid)> {
    let (fx, fy) = f.margins()?;
    let xs = collapse(f, Axis::X, &fx)?;
    let ys = collapse(&f.transpose(), Axis::Y, &fy)?;
    if !f.classify().holds_b {
        return Err(Error::Precondition("input is not a quasi-distribution".into()));
    }
    let unit = Mesh::new(AxisGrid::unit(fx.range())?, AxisGrid::unit(fy.range())?)?;
    let c = GridFunction::from_fn_indexed(unit, |k, l| f.get(xs[k], ys[l]).clone())?;
    Ok((c, fx, fy))
}

/// One representative index per distinct margin value, after checking that
/// indices sharing a value carry equal rows of `f`.
fn collapse(f: &GridFunction, axis: Axis, margin: &UnivariateGrid) -> Result<Vec<usize>> {
    let values = margin.values();
    let coords = f.mesh().x().coords();
    let mut reps: Vec<usize> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match reps.last() {
            Some(&r) if &values[r] == v => {
                if f.values()[r] != f.values()[i] {
                    return Err(Error::InconsistentCollapse {
                        axis,
                        first: coords[r].to_string(),
                        second: coords[i].to_string(),
                    });
                }
            }
            _ => reps.push(i),
        }
    }
    Ok(reps)
}

/// `F(x_i, y_j) = C(F_X(x_i), F_Y(y_j))`, evaluating `C` through its
/// bilinear extension where the margin values fall between mesh points.
pub fn sklar_compose(c: &GridFunction, fx: &UnivariateGrid, fy: &UnivariateGrid) -> Result<GridFunction> {
    if c.mesh().kind() != AxisKind::Unit {
        return Err(Error::KindMismatch);
    }
    if !c.classify().holds_b || !c.has_uniform_margins() {
        return Err(Error::Precondition("input is not a quasi-copula".into()));
    }
    let ext = InterpolatedFunction::new(c.clone());
    let mesh = Mesh::new(fx.axis().clone(), fy.axis().clone())?;
    let mut values = Vec::with_capacity(fx.values().len());
    for u in fx.values() {
        let u = Coord::finite(u.clone());
        let row =
            fy.values().iter().map(|v| ext.evaluate(&u, &Coord::finite(v.clone()))).collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    GridFunction::new(mesh, values)
}

/// Verdict for one of the four mixed-volume axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub holds: bool,
    /// First failing rectangle in lexicographic order and its mixed volume.
    pub witness: Option<(IndexRect, Rational)>,
}

/// Axioms IC1 to IC4 for a pair `(P, Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ICReport {
    pub axioms: [AxiomVerdict; 4],
}

impl ICReport {
    pub fn passes(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }
}

/// The mixed volumes of IC1..IC4 on one rectangle.
pub fn mixed_volumes(p: &GridFunction, q: &GridFunction, r: &IndexRect) -> [Rational; 4] {
    let [a, c] = r.main_corners();
    let [b, d] = r.opposite_corners();
    [
        p.at(a) + q.at(c) - p.at(b) - p.at(d),
        q.at(a) + p.at(c) - p.at(b) - p.at(d),
        q.at(a) + q.at(c) - q.at(b) - p.at(d),
        q.at(a) + q.at(c) - p.at(b) - q.at(d),
    ]
}

/// Evaluates IC1..IC4 over every rectangle of a common unit mesh.
pub fn check_imprecise(p: &GridFunction, q: &GridFunction) -> Result<ICReport> {
    p.same_mesh(q)?;
    if p.mesh().kind() != AxisKind::Unit {
        return Err(Error::KindMismatch);
    }
    let (pl, ql) = (p.mesh().x().last(), p.mesh().y().last());
    let mut witnesses: [Option<(IndexRect, Rational)>; 4] = Default::default();
    for i1 in 0..pl {
        for j1 in 0..ql {
            for i2 in i1 + 1..=pl {
                for j2 in j1 + 1..=ql {
                    let r = IndexRect::new(i1, i2, j1, j2)?;
                    for (k, v) in mixed_volumes(p, q, &r).into_iter().enumerate() {
                        if witnesses[k].is_none() && v.is_negative() {
                            witnesses[k] = Some((r, v));
                        }
                    }
                }
            }
        }
    }
    Ok(ICReport { axioms: witnesses.map(|w| AxiomVerdict { holds: w.is_none(), witness: w }) })
}

/// A pair of quasi-copulas `P <= Q` on a common unit mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpreciseCopulaGrid {
    lower: GridFunction,
    upper: GridFunction,
}

impl ImpreciseCopulaGrid {
    pub fn new(lower: GridFunction, upper: GridFunction) -> Result<Self> {
        lower.same_mesh(&upper)?;
        if lower.mesh().kind() != AxisKind::Unit {
            return Err(Error::KindMismatch);
        }
        for (name, f) in [("lower", &lower), ("upper", &upper)] {
            if !f.classify().holds_b || !f.has_uniform_margins() {
                return Err(Error::Precondition(format!("{name} function is not a quasi-copula")));
            }
        }
        if let Some((i, j)) = lower.first_exceeding(&upper) {
            return Err(Error::NotOrdered { i, j });
        }
        Ok(ImpreciseCopulaGrid { lower, upper })
    }

    pub fn lower(&self) -> &GridFunction {
        &self.lower
    }

    pub fn upper(&self) -> &GridFunction {
        &self.upper
    }
}

/// Bounds `A <= B` sharing fixed margins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPBox {
    lower: GridFunction,
    upper: GridFunction,
    margins: (UnivariateGrid, UnivariateGrid),
}

impl RestrictedPBox {
    pub fn new(lower: GridFunction, upper: GridFunction) -> Result<Self> {
        lower.same_mesh(&upper)?;
        for (name, f) in [("lower", &lower), ("upper", &upper)] {
            if !f.classify().holds_b {
                return Err(Error::Precondition(format!("{name} function is not a quasi-distribution")));
            }
        }
        if let Some((axis, coord)) = lower.margin_mismatch(&upper) {
            return Err(Error::MarginMismatch { axis, coord });
        }
        if let Some((i, j)) = lower.first_exceeding(&upper) {
            return Err(Error::NotOrdered { i, j });
        }
        let margins = lower.margins()?;
        Ok(RestrictedPBox { lower, upper, margins })
    }

    pub fn lower(&self) -> &GridFunction {
        &self.lower
    }

    pub fn upper(&self) -> &GridFunction {
        &self.upper
    }

    pub fn margins(&self) -> &(UnivariateGrid, UnivariateGrid) {
        &self.margins
    }
}

/// Composes a coherent pair `(P, Q)` with fixed margins into a p-box.
///
/// Coherence is checked on `(P, Q)` with `max_rects`, then exactly on the
/// composed bounds; a failure at either stage returns
/// [`Error::Incoherent`] with its report.
pub fn build_pbox(
    p: &GridFunction,
    q: &GridFunction,
    fx: &UnivariateGrid,
    fy: &UnivariateGrid,
    max_rects: usize,
) -> Result<RestrictedPBox> {
    let pair = ImpreciseCopulaGrid::new(p.clone(), q.clone())?;
    let report = check_coherence(pair.lower(), pair.upper(), max_rects)?;
    if !report.coherent() {
        return Err(Error::Incoherent(Box::new(report)));
    }
    let a = sklar_compose(pair.lower(), fx, fy)?;
    let b = sklar_compose(pair.upper(), fx, fy)?;
    let composed = check_coherence(&a, &b, exact_cap(a.mesh()))?;
    if !composed.coherent() {
        return Err(Error::Incoherent(Box::new(composed)));
    }
    RestrictedPBox::new(a, b)
}

/// Why a grid is not in a p-box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipFailure {
    MeshMismatch,
    NotDistribution(Option<Violation>),
    MarginMismatch { axis: Axis, coord: String },
    BelowLower { i: usize, j: usize },
    AboveUpper { i: usize, j: usize },
}

/// Whether `f` is a distribution with the box margins lying between its bounds.
pub fn pbox_member(pbox: &RestrictedPBox, f: &GridFunction) -> std::result::Result<(), MembershipFailure> {
    if pbox.lower.same_mesh(f).is_err() {
        return Err(MembershipFailure::MeshMismatch);
    }
    let class = f.classify();
    if !class.holds_c {
        return Err(MembershipFailure::NotDistribution(class.a_violation.or(class.b_violation).or(class.c_violation)));
    }
    if let Some((axis, coord)) = f.margin_mismatch(&pbox.lower) {
        return Err(MembershipFailure::MarginMismatch { axis, coord });
    }
    if let Some((i, j)) = pbox.lower.first_exceeding(f) {
        return Err(MembershipFailure::BelowLower { i, j });
    }
    if let Some((i, j)) = f.first_exceeding(&pbox.upper) {
        return Err(MembershipFailure::AboveUpper { i, j });
    }
    Ok(())
}

/// Distributions sharing one margin pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyGroup {
    pub margins: (UnivariateGrid, UnivariateGrid),
    /// Positions of the members in the input list.
    pub members: Vec<usize>,
    /// Pointwise infimum and supremum of the members.
    pub envelope: (GridFunction, GridFunction),
    pub coherence: CoherenceReport,
    /// The envelope pair carried to the margin-range unit mesh.
    pub copulas: ImpreciseCopulaGrid,
    pub copula_coherence: CoherenceReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    /// Groups in order of first appearance.
    pub groups: Vec<FamilyGroup>,
}

/// Groups distributions by margins and derives the envelope bounds and the
/// imprecise copula of each group.
pub fn analyze_family(fs: &[GridFunction], max_rects: usize) -> Result<FamilyReport> {
    if fs.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    let mut keyed: Vec<((UnivariateGrid, UnivariateGrid), Vec<usize>)> = Vec::new();
    for (k, f) in fs.iter().enumerate() {
        if !f.classify().holds_c {
            return Err(Error::Precondition(format!("member {k} is not a distribution")));
        }
        let key = f.margins()?;
        match keyed.iter_mut().find(|(m, _)| *m == key) {
            Some((_, members)) => members.push(k),
            None => keyed.push((key, vec![k])),
        }
    }
    let mut groups = Vec::with_capacity(keyed.len());
    for (margins, members) in keyed {
        let chosen: Vec<GridFunction> = members.iter().map(|&k| fs[k].clone()).collect();
        let (lower, upper) = envelope(&chosen)?;
        let coherence = check_coherence(&lower, &upper, max_rects)?;
        let (p, _, _) = sklar_decompose(&lower)?;
        let (q, _, _) = sklar_decompose(&upper)?;
        let copula_coherence = check_coherence(&p, &q, max_rects)?;
        let copulas = ImpreciseCopulaGrid::new(p, q)?;
        groups.push(FamilyGroup { margins, members, envelope: (lower, upper), coherence, copulas, copula_coherence });
    }
    Ok(FamilyReport { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::number::{int, ratio};

    fn quarters_ext() -> AxisGrid {
        AxisGrid::extended([0, 1, 2, 3, 4].map(|k| ratio(k, 4))).unwrap()
    }

    /// `2x` clamped to `[0, 1]`.
    fn f2(axis: AxisGrid) -> UnivariateGrid {
        UnivariateGrid::from_fn(axis, |c| match c {
            Coord::NegInf => int(0),
            Coord::PosInf => int(1),
            Coord::Finite(x) => (x * int(2)).clamp(int(0), int(1)),
        })
        .unwrap()
    }

    #[test]
    fn compose_examples() {
        let unit = Mesh::square(AxisGrid::uniform_unit(2));
        let m = f2(quarters_ext());
        let at = |c: &GridFunction| c.get(2, 2).clone();
        assert_eq!(at(&sklar_compose(&families::upper(unit.clone()).unwrap(), &m, &m).unwrap()), ratio(1, 2));
        assert_eq!(at(&sklar_compose(&families::product(unit.clone()).unwrap(), &m, &m).unwrap()), ratio(1, 4));
        assert_eq!(at(&sklar_compose(&families::lower(unit).unwrap(), &m, &m).unwrap()), int(0));
    }

    #[test]
    fn decompose_collapses_flat_margins() {
        let m = f2(quarters_ext());
        let w = families::lower(Mesh::square(AxisGrid::uniform_unit(2))).unwrap();
        let g = sklar_compose(&w, &m, &m).unwrap();
        let (c, fx, fy) = sklar_decompose(&g).unwrap();
        assert_eq!(c, w);
        assert_eq!(fx, m);
        assert_eq!(fy, m);
    }

    #[test]
    fn decompose_of_copula_is_identity() {
        let pi = families::product(Mesh::square(AxisGrid::uniform_unit(4))).unwrap();
        assert_eq!(sklar_decompose(&pi).unwrap().0, pi);
    }

    #[test]
    fn inconsistent_collapse_detected() {
        // Two x coordinates share the margin value 1 but differ inside.
        let mesh = Mesh::square(AxisGrid::extended([ratio(-1, 1), ratio(1, 1)]).unwrap());
        let values = vec![
            vec![int(0), int(0), int(0), int(0)],
            vec![int(0), int(0), ratio(1, 2), ratio(1, 2)],
            vec![int(0), int(0), ratio(1, 2), int(1)],
            vec![int(0), ratio(1, 2), ratio(1, 2), int(1)],
        ];
        let f = GridFunction::new(mesh, values).unwrap();
        assert!(!f.classify().holds_b);
        assert!(matches!(sklar_decompose(&f), Err(Error::InconsistentCollapse { axis: Axis::X, .. })));
    }

    #[test]
    fn imprecise_examples() {
        let mesh = Mesh::square(AxisGrid::uniform_unit(4));
        let w = families::lower(mesh.clone()).unwrap();
        let m = families::upper(mesh.clone()).unwrap();
        let pi = families::product(mesh).unwrap();
        assert!(check_imprecise(&w, &m).unwrap().passes());
        assert!(check_imprecise(&pi, &pi).unwrap().passes());
        let q = families::proper_quasi_copula();
        let r = check_imprecise(&q, &q).unwrap();
        assert!(!r.axioms[0].holds);
        assert_eq!(r.axioms[0].witness, Some((IndexRect::new(1, 2, 1, 2).unwrap(), ratio(-1, 3))));
    }

    #[test]
    fn pbox_from_frechet_pair() {
        let unit = Mesh::square(AxisGrid::uniform_unit(2));
        let w = families::lower(unit.clone()).unwrap();
        let m = families::upper(unit).unwrap();
        let fx = f2(quarters_ext());
        let pbox = build_pbox(&w, &m, &fx, &fx, 4).unwrap();
        let g = sklar_compose(&w, &fx, &fx).unwrap();
        assert_eq!(pbox.lower(), &g);
        assert_eq!(pbox_member(&pbox, &g), Ok(()));
    }

    #[test]
    fn quasi_copula_is_never_a_member() {
        let thirds = Mesh::square(AxisGrid::uniform_unit(3));
        let w = families::lower(thirds.clone()).unwrap();
        let m = families::upper(thirds.clone()).unwrap();
        let id = UnivariateGrid::identity(thirds.x().clone()).unwrap();
        let pbox = build_pbox(&w, &m, &id, &id, 9).unwrap();
        let q = families::proper_quasi_copula();
        assert!(matches!(pbox_member(&pbox, &q), Err(MembershipFailure::NotDistribution(_))));
    }
}
