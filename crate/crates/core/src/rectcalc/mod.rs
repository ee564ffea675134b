//! Multiplicities over gaggles, the functional `L`, the infima `P_O` and
//! `P_M`, `gamma`, the pair conditions (Q1)/(Q2) and the coherence test for
//! a pair of quasi-distributions.
//!
//! Every search takes a `max_rects` cap on the number of gaggle members.
//! Below the number of elementary cells the cap gives an upper estimate of
//! the infimum found by enumeration; at or above it the result is exact and
//! comes from [`exact`]'s subset minimisation.

mod enumerate;
pub(crate) mod exact;
mod gaggle;
pub(crate) mod weights;

use num_traits::{Signed, Zero};

use crate::construct::{sandwich_decide, FeasibilityCertificate};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, IndexRect, Mesh};
use crate::number::{Bound, Rational};

pub use gaggle::{l_value, MultiplicityMap, RectGaggle};

use enumerate::{Best, RectTable};
use weights::{PairWeights, Ratio};

/// Members tried by lexicographic search before falling back to the
/// subset minimiser's witness in exact mode.
const SMALL_WITNESS_MEMBERS: usize = 2;

/// Gaggle size at which bounds become exact for `mesh`.
pub fn exact_cap(mesh: &Mesh) -> usize {
    mesh.cell_count()
}

pub fn is_exact(mesh: &Mesh, max_rects: usize) -> bool {
    max_rects >= exact_cap(mesh)
}

/// Which corner role the point plays in `P_O` (opposite) or `P_M` (main).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Opposite,
    Main,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Opposite => Side::Main,
            Side::Main => Side::Opposite,
        }
    }

    fn sign(self) -> i64 {
        match self {
            Side::Opposite => -1,
            Side::Main => 1,
        }
    }
}

/// Value of `P_O` or `P_M` at a point, with the gaggle attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub value: Bound,
    pub witness: Option<RectGaggle>,
    /// True when the search covered every gaggle on the mesh.
    pub exact: bool,
}

/// Verdicts for (Q1) `A <= B` and (Q2) `L >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QReport {
    pub q1: bool,
    pub q1_violation: Option<(usize, usize)>,
    pub q2: bool,
    /// A gaggle with negative `L`, with that value.
    pub q2_witness: Option<(RectGaggle, Rational)>,
    pub exact: bool,
}

impl QReport {
    pub fn passes(&self) -> bool {
        self.q1 && self.q2
    }
}

/// A point where `B - A` exceeds `P_O` or `P_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundFailure {
    pub point: (usize, usize),
    pub side: Side,
    pub gap: Rational,
    pub bound: BoundValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    pub feasibility: FeasibilityCertificate,
    /// `B - A <= P_O` everywhere, i.e. `B` is the supremum of the sandwich.
    pub sup_attained: bool,
    /// `B - A <= P_M` everywhere, i.e. `A` is the infimum of the sandwich.
    pub inf_attained: bool,
    pub failures: Vec<BoundFailure>,
    pub exact: bool,
}

impl CoherenceReport {
    pub fn feasible(&self) -> bool {
        self.feasibility.is_feasible()
    }

    pub fn coherent(&self) -> bool {
        self.feasible() && self.sup_attained && self.inf_attained
    }
}

fn check_point(mesh: &Mesh, point: (usize, usize)) -> Result<()> {
    if mesh.contains_point(point.0, point.1) {
        Ok(())
    } else {
        Err(Error::PointOutOfRange(point.0, point.1))
    }
}

fn check_cap(max_rects: usize) -> Result<()> {
    if max_rects == 0 {
        return Err(Error::Precondition("max_rects must be positive".into()));
    }
    Ok(())
}

fn gaggle_from_indices(table: &RectTable, members: &[usize]) -> RectGaggle {
    RectGaggle::from_sorted_unchecked(members.iter().map(|&k| table.rects[k]).collect())
}

/// Covers a cell set by vertical runs within each cell column.
pub(crate) fn gaggle_from_cells(cells: &[(usize, usize)]) -> Option<RectGaggle> {
    let mut members = Vec::new();
    let mut k = 0;
    while k < cells.len() {
        let (i, j1) = cells[k];
        let mut j2 = j1 + 1;
        k += 1;
        while k < cells.len() && cells[k] == (i, j2) {
            j2 += 1;
            k += 1;
        }
        members.push(IndexRect::new(i, i + 1, j1, j2).expect("nonempty run"));
    }
    if members.is_empty() {
        None
    } else {
        members.sort();
        Some(RectGaggle::from_sorted_unchecked(members))
    }
}

fn small_table(mesh: &Mesh) -> Option<RectTable> {
    RectTable::new(mesh.x().last(), mesh.y().last()).ok()
}

/// Exact bound at one point from the subset minimiser.
fn exact_point_bound(
    weights: &PairWeights,
    table: Option<&RectTable>,
    point: (usize, usize),
    side: Side,
) -> Result<BoundValue> {
    let mut best: Option<(Ratio, Vec<(usize, usize)>)> = None;
    for magnitude in [1i64, 2] {
        let target = side.sign() * magnitude;
        if let Some(found) = exact::min_cell_subset(weights, Some((point, target)))? {
            let r = Ratio { l: found.l, m: magnitude };
            if best.as_ref().is_none_or(|(b, _)| r.less_than(b)) {
                best = Some((r, found.cells));
            }
        }
    }
    let Some((ratio, cells)) = best else {
        return Ok(BoundValue { value: Bound::Infinite, witness: None, exact: true });
    };
    let idx = weights.index(point.0, point.1);
    let small = table.and_then(|t| {
        enumerate::first_matching(t, weights, SMALL_WITNESS_MEMBERS, |v| {
            let m = v.mult[idx];
            m.signum() == side.sign() && Ratio { l: v.l, m: m.abs() }.equals(&ratio)
        })
        .map(|members| gaggle_from_indices(t, &members))
    });
    let witness = small.or_else(|| gaggle_from_cells(&cells));
    Ok(BoundValue { value: Bound::Finite(weights.to_rational(ratio.l, ratio.m)), witness, exact: true })
}

/// Exact `P_O` or `P_M` value without a witness search.
pub(crate) fn exact_bound_value(
    lower: &GridFunction,
    upper: &GridFunction,
    point: (usize, usize),
    side: Side,
) -> Result<Bound> {
    let weights = PairWeights::new(lower, upper)?;
    check_point(lower.mesh(), point)?;
    let mut best: Option<Ratio> = None;
    for magnitude in [1i64, 2] {
        if let Some(found) = exact::min_cell_subset(&weights, Some((point, side.sign() * magnitude)))? {
            let r = Ratio { l: found.l, m: magnitude };
            if best.is_none_or(|b| r.less_than(&b)) {
                best = Some(r);
            }
        }
    }
    Ok(match best {
        Some(r) => Bound::Finite(weights.to_rational(r.l, r.m)),
        None => Bound::Infinite,
    })
}

fn bound_from_best(weights: &PairWeights, table: &RectTable, best: Option<Best>, exact: bool) -> BoundValue {
    match best {
        Some(b) => BoundValue {
            value: Bound::Finite(weights.to_rational(b.ratio.l, b.ratio.m)),
            witness: Some(gaggle_from_indices(table, &b.members)),
            exact,
        },
        None => BoundValue { value: Bound::Infinite, witness: None, exact },
    }
}

/// `P_O(x)` (opposite) or `P_M(x)` (main) over gaggles with at most
/// `max_rects` members: the minimum of `L(G) / |m_G(x)|` over gaggles where
/// `x` has multiplicity of the requested sign, or `+inf` when none exists.
pub fn p_bound(
    lower: &GridFunction,
    upper: &GridFunction,
    point: (usize, usize),
    side: Side,
    max_rects: usize,
) -> Result<BoundValue> {
    check_cap(max_rects)?;
    let weights = PairWeights::new(lower, upper)?;
    check_point(lower.mesh(), point)?;
    let mesh = lower.mesh();
    if is_exact(mesh, max_rects) {
        return exact_point_bound(&weights, small_table(mesh).as_ref(), point, side);
    }
    let table = RectTable::new(mesh.x().last(), mesh.y().last())?;
    let best = enumerate::point_bound(&table, &weights, point, side == Side::Opposite, max_rects);
    Ok(bound_from_best(&weights, &table, best, false))
}

/// `min(P_O(x), B(x) - A(x))`, the largest admissible raise of `A` at `x`.
pub fn gamma(lower: &GridFunction, upper: &GridFunction, point: (usize, usize), max_rects: usize) -> Result<Rational> {
    lower.same_mesh(upper)?;
    check_point(lower.mesh(), point)?;
    if let Some((i, j)) = lower.first_exceeding(upper) {
        return Err(Error::NotOrdered { i, j });
    }
    let gap = upper.at(point) - lower.at(point);
    let bound = p_bound(lower, upper, point, Side::Opposite, max_rects)?;
    Ok(match bound.value {
        Bound::Finite(v) if v < gap => v,
        _ => gap,
    })
}

/// Conditions (Q1) and (Q2). The (Q2) witness is the first gaggle with
/// negative `L` by member count and lexicographic order; in exact mode a
/// minimiser is used when no small gaggle is negative.
pub fn check_q(lower: &GridFunction, upper: &GridFunction, max_rects: usize) -> Result<QReport> {
    check_cap(max_rects)?;
    let weights = PairWeights::new(lower, upper)?;
    let mesh = lower.mesh();
    let q1_violation = lower.first_exceeding(upper);
    let exact = is_exact(mesh, max_rects);
    let table = small_table(mesh);

    let witness = if exact {
        let min = exact::min_cell_subset(&weights, None)?.expect("unconstrained search is feasible");
        if min.l < 0 {
            table
                .as_ref()
                .and_then(|t| {
                    enumerate::first_matching(t, &weights, SMALL_WITNESS_MEMBERS.min(max_rects), |v| v.l < 0)
                        .map(|m| gaggle_from_indices(t, &m))
                })
                .or_else(|| gaggle_from_cells(&min.cells))
        } else {
            None
        }
    } else {
        let table = table.ok_or_else(|| Error::TooLarge("mesh too large for bounded enumeration".into()))?;
        enumerate::first_matching(&table, &weights, max_rects, |v| v.l < 0).map(|m| gaggle_from_indices(&table, &m))
    };
    let q2_witness = match witness {
        Some(g) => {
            let l = l_value(lower, upper, &g)?;
            debug_assert!(l.is_negative());
            Some((g, l))
        }
        None => None,
    };
    Ok(QReport { q1: q1_violation.is_none(), q1_violation, q2: q2_witness.is_none(), q2_witness, exact })
}

pub(crate) fn require_quasi_pair(lower: &GridFunction, upper: &GridFunction) -> Result<()> {
    lower.same_mesh(upper)?;
    for (name, f) in [("lower", lower), ("upper", upper)] {
        if !f.classify().holds_b {
            return Err(Error::Precondition(format!("{name} function is not a quasi-distribution")));
        }
    }
    lower.require_common_margins(upper)?;
    if let Some((i, j)) = lower.first_exceeding(upper) {
        return Err(Error::NotOrdered { i, j });
    }
    Ok(())
}

/// Decides whether `(A, B)` is coherent: some distribution lies between them
/// and both bounds are attained, i.e. `B - A <= P_O` and `B - A <= P_M` at
/// every grid point.
pub fn check_coherence(lower: &GridFunction, upper: &GridFunction, max_rects: usize) -> Result<CoherenceReport> {
    check_cap(max_rects)?;
    require_quasi_pair(lower, upper)?;
    let mesh = lower.mesh();
    let exact = is_exact(mesh, max_rects);
    let feasibility = sandwich_decide(lower, upper)?;
    if !feasibility.is_feasible() {
        return Ok(CoherenceReport {
            feasibility,
            sup_attained: false,
            inf_attained: false,
            failures: Vec::new(),
            exact,
        });
    }
    let weights = PairWeights::new(lower, upper)?;
    let table = small_table(mesh);
    let mut failures = Vec::new();
    let limited = if exact {
        None
    } else {
        let t = table.as_ref().ok_or_else(|| Error::TooLarge("mesh too large for bounded enumeration".into()))?;
        Some(enumerate::all_point_bounds(t, &weights, max_rects))
    };

    for i in 0..=mesh.x().last() {
        for j in 0..=mesh.y().last() {
            let gap = upper.get(i, j) - lower.get(i, j);
            // Feasibility gives L >= 0, hence both bounds are nonnegative.
            if gap.is_zero() {
                continue;
            }
            for side in [Side::Opposite, Side::Main] {
                let bound = match (&limited, &table) {
                    (Some((opp, main)), Some(t)) => {
                        let slot =
                            if side == Side::Opposite { &opp[weights.index(i, j)] } else { &main[weights.index(i, j)] };
                        bound_from_best(&weights, t, slot.clone(), false)
                    }
                    _ => exact_point_bound(&weights, table.as_ref(), (i, j), side)?,
                };
                if bound.value < Bound::Finite(gap.clone()) {
                    failures.push(BoundFailure { point: (i, j), side, gap: gap.clone(), bound });
                }
            }
        }
    }
    let sup_attained = !failures.iter().any(|f| f.side == Side::Opposite);
    let inf_attained = !failures.iter().any(|f| f.side == Side::Main);
    Ok(CoherenceReport { feasibility, sup_attained, inf_attained, failures, exact })
}
