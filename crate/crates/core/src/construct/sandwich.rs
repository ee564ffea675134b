use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, IndexRect};
use crate::number::Rational;
use crate::rectcalc::{check_q, exact_cap, l_value, require_quasi_pair, RectGaggle};

use super::lp::LinearSystem;

/// Outcome of the sandwich problem with a checkable certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityCertificate {
    /// A distribution between the bounds with their margins.
    Feasible { witness: GridFunction },
    /// A gaggle with negative `L`, which rules out every sandwich.
    Infeasible { gaggle: RectGaggle, l_value: Rational },
}

impl FeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityCertificate::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&GridFunction> {
        match self {
            FeasibilityCertificate::Feasible { witness } => Some(witness),
            FeasibilityCertificate::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<(&RectGaggle, &Rational)> {
        match self {
            FeasibilityCertificate::Feasible { .. } => None,
            FeasibilityCertificate::Infeasible { gaggle, l_value } => Some((gaggle, l_value)),
        }
    }

    /// Re-checks the certificate against `(lower, upper)` from scratch.
    pub fn verify(&self, lower: &GridFunction, upper: &GridFunction) -> Result<()> {
        match self {
            FeasibilityCertificate::Feasible { witness } => validate_sandwich(lower, upper, witness),
            FeasibilityCertificate::Infeasible { gaggle, l_value: stored } => {
                gaggle.fits(lower.mesh())?;
                let l = l_value(lower, upper, gaggle)?;
                if &l != stored {
                    return Err(Error::PostValidation(format!("certificate L is {l}, reported {stored}")));
                }
                if !l.is_negative() {
                    return Err(Error::PostValidation("certificate L is not negative".into()));
                }
                Ok(())
            }
        }
    }
}

/// Checks that `f` is a distribution with the margins of `lower` lying in `[lower, upper]`.
pub(crate) fn validate_sandwich(lower: &GridFunction, upper: &GridFunction, f: &GridFunction) -> Result<()> {
    lower.same_mesh(f)?;
    let class = f.classify();
    if !class.holds_c {
        return Err(Error::PostValidation(format!("grid is not a distribution: {class:?}")));
    }
    if let Some((axis, coord)) = f.margin_mismatch(lower) {
        return Err(Error::PostValidation(format!("margin differs on the {axis} axis at {coord}")));
    }
    if let Some((i, j)) = lower.first_exceeding(f) {
        return Err(Error::PostValidation(format!("below the lower bound at ({i}, {j})")));
    }
    if let Some((i, j)) = f.first_exceeding(upper) {
        return Err(Error::PostValidation(format!("above the upper bound at ({i}, {j})")));
    }
    Ok(())
}

/// Decides whether a distribution lies between `lower` and `upper`.
///
/// Solves the cell-volume system in exact arithmetic. Frame values are fixed
/// by groundedness and the common margins; the unknowns are
/// `z = F - lower` at the remaining points. An infeasible system is
/// certified by a gaggle with negative `L` from the exact (Q2) search.
pub fn sandwich_decide(lower: &GridFunction, upper: &GridFunction) -> Result<FeasibilityCertificate> {
    require_quasi_pair(lower, upper)?;
    let mesh = lower.mesh();
    let (p, q) = (mesh.x().last(), mesh.y().last());
    let inner = |i: usize, j: usize| -> Option<usize> {
        (i > 0 && i < p && j > 0 && j < q).then(|| (i - 1) * (q - 1) + (j - 1))
    };
    let vars = (p - 1) * (q - 1);
    let mut sys = LinearSystem::new(vars);
    for i in 0..p {
        for j in 0..q {
            let cell = IndexRect::cell(i, j);
            let [a, c] = cell.main_corners();
            let [b, d] = cell.opposite_corners();
            let mut terms = Vec::new();
            for ((pi, pj), m) in [(a, 1), (c, 1), (b, -1), (d, -1)] {
                if let Some(k) = inner(pi, pj) {
                    terms.push((k, Rational::from_integer((-m).into())));
                }
            }
            sys.add_le(&terms, lower.volume(&cell)?);
        }
    }
    for i in 1..p {
        for j in 1..q {
            let k = inner(i, j).expect("interior point");
            sys.add_le(&[(k, Rational::from_integer(1.into()))], upper.get(i, j) - lower.get(i, j));
        }
    }

    match sys.solve() {
        Some(z) => {
            let witness = GridFunction::from_fn_indexed(mesh.clone(), |i, j| match inner(i, j) {
                Some(k) => lower.get(i, j) + &z[k],
                None => lower.get(i, j).clone(),
            })?;
            validate_sandwich(lower, upper, &witness)?;
            Ok(FeasibilityCertificate::Feasible { witness })
        }
        None => {
            let report = check_q(lower, upper, exact_cap(mesh))?;
            match report.q2_witness {
                Some((gaggle, l_value)) if !l_value.is_zero() => {
                    Ok(FeasibilityCertificate::Infeasible { gaggle, l_value })
                }
                _ => Err(Error::PostValidation(
                    "linear system is infeasible but no gaggle with negative L exists".into(),
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::grid::{AxisGrid, Mesh};
    use crate::number::ratio;

    #[test]
    fn frechet_pair_is_feasible() {
        for n in [2, 3, 4] {
            let mesh = Mesh::square(AxisGrid::uniform_unit(n));
            let w = families::lower(mesh.clone()).unwrap();
            let m = families::upper(mesh).unwrap();
            let cert = sandwich_decide(&w, &m).unwrap();
            assert!(cert.is_feasible());
            cert.verify(&w, &m).unwrap();
        }
    }

    #[test]
    fn copula_sandwich_is_the_copula() {
        let pi = families::product(Mesh::square(AxisGrid::uniform_unit(3))).unwrap();
        let cert = sandwich_decide(&pi, &pi).unwrap();
        assert_eq!(cert.witness(), Some(&pi));
    }

    #[test]
    fn proper_quasi_copula_is_infeasible() {
        let q = families::proper_quasi_copula();
        let cert = sandwich_decide(&q, &q).unwrap();
        let (g, l) = cert.certificate().unwrap();
        assert_eq!(g, &RectGaggle::single(IndexRect::new(1, 2, 1, 2).unwrap()));
        assert_eq!(l, &ratio(-1, 3));
        cert.verify(&q, &q).unwrap();
    }

    #[test]
    fn unordered_pair_rejected() {
        let mesh = Mesh::square(AxisGrid::uniform_unit(2));
        let w = families::lower(mesh.clone()).unwrap();
        let m = families::upper(mesh).unwrap();
        assert!(matches!(sandwich_decide(&m, &w), Err(Error::NotOrdered { .. })));
    }
}
