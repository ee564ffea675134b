use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::number::{Bound, Rational};
use crate::rectcalc::{check_q, exact_bound_value, is_exact, require_quasi_pair, Side};

use super::sandwich::validate_sandwich;

/// One raise of the running lower function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchStep {
    pub point: (usize, usize),
    pub t: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchTrace {
    /// Raises with positive `t`, in sweep order.
    pub steps: Vec<PatchStep>,
    pub final_grid: GridFunction,
}

/// Exact `gamma` of the running pair, computed without a witness search.
fn current_gamma(lower: &GridFunction, upper: &GridFunction, point: (usize, usize)) -> Result<Rational> {
    let gap = upper.at(point) - lower.at(point);
    if gap.is_zero() {
        return Ok(gap);
    }
    Ok(match exact_bound_value(lower, upper, point, Side::Opposite)? {
        Bound::Finite(v) if v < gap => v,
        _ => gap,
    })
}

/// Builds a distribution in `[lower, upper]` by raising `lower` at each grid
/// point, in lexicographic order, by its current `gamma`.
///
/// Requires `max_rects` at the exact cap and a pair passing (Q1) and (Q2).
/// `gamma` never increases along the sweep, so one pass leaves it zero
/// everywhere; the result is validated before it is returned.
pub fn patch_sweep(lower: &GridFunction, upper: &GridFunction, max_rects: usize) -> Result<PatchTrace> {
    require_quasi_pair(lower, upper)?;
    let mesh = lower.mesh();
    if !is_exact(mesh, max_rects) {
        return Err(Error::Precondition(format!(
            "patching needs exact bounds: max_rects must be at least {}",
            mesh.cell_count()
        )));
    }
    let report = check_q(lower, upper, max_rects)?;
    if !report.passes() {
        return Err(Error::QCheckFailed(Box::new(report)));
    }

    let mut current = lower.clone();
    let mut steps = Vec::new();
    for i in 0..=mesh.x().last() {
        for j in 0..=mesh.y().last() {
            let t = current_gamma(&current, upper, (i, j))?;
            if t.is_negative() {
                return Err(Error::PostValidation(format!("negative gamma {t} at ({i}, {j})")));
            }
            if t.is_zero() {
                continue;
            }
            let raised = current.get(i, j) + &t;
            current = current.with_value(i, j, raised)?;
            steps.push(PatchStep { point: (i, j), t });
        }
    }
    validate_sandwich(lower, upper, &current)?;
    Ok(PatchTrace { steps, final_grid: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::grid::{AxisGrid, Mesh};
    use crate::number::ratio;

    fn halves() -> Mesh {
        Mesh::square(AxisGrid::uniform_unit(2))
    }

    #[test]
    fn frechet_pair_patches_to_upper() {
        let w = families::lower(halves()).unwrap();
        let m = families::upper(halves()).unwrap();
        let trace = patch_sweep(&w, &m, 4).unwrap();
        assert_eq!(trace.steps, vec![PatchStep { point: (1, 1), t: ratio(1, 2) }]);
        assert_eq!(trace.final_grid, m);
    }

    #[test]
    fn lower_to_product() {
        let w = families::lower(halves()).unwrap();
        let pi = families::product(halves()).unwrap();
        let trace = patch_sweep(&w, &pi, 4).unwrap();
        assert_eq!(trace.steps, vec![PatchStep { point: (1, 1), t: ratio(1, 4) }]);
        assert_eq!(trace.final_grid.get(1, 1), &ratio(1, 4));
    }

    #[test]
    fn copula_pair_needs_no_patch() {
        let pi = families::product(Mesh::square(AxisGrid::uniform_unit(3))).unwrap();
        let trace = patch_sweep(&pi, &pi, 9).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_grid, pi);
    }

    #[test]
    fn rejects_bounded_cap_and_failing_pairs() {
        let w = families::lower(halves()).unwrap();
        let m = families::upper(halves()).unwrap();
        assert!(matches!(patch_sweep(&w, &m, 3), Err(Error::Precondition(_))));
        let q = families::proper_quasi_copula();
        assert!(matches!(patch_sweep(&q, &q, 9), Err(Error::QCheckFailed(_))));
    }

    #[test]
    fn wider_frechet_sweep_is_valid() {
        let mesh = Mesh::square(AxisGrid::uniform_unit(4));
        let w = families::lower(mesh.clone()).unwrap();
        let m = families::upper(mesh).unwrap();
        let trace = patch_sweep(&w, &m, 16).unwrap();
        validate_sandwich(&w, &m, &trace.final_grid).unwrap();
    }
}
