//! Exact calculus for discrete bivariate quasi-distributions, copulas and
//! imprecise copulas on finite meshes.
//!
//! All values are exact rationals. The infinite ends of the extended plane
//! are symbolic sentinels and never enter arithmetic.

pub mod construct;
pub mod error;
pub mod families;
pub mod grid;
pub mod interp;
pub mod number;
pub mod rectcalc;
pub mod sample;
pub mod sklar;

pub use construct::{patch_sweep, sandwich_decide, FeasibilityCertificate, PatchStep, PatchTrace};
pub use error::{Error, Result};
pub use grid::{
    envelope, Axis, AxisGrid, AxisKind, Classification, GridFunction, IndexRect, Mesh, UnivariateGrid, Violation,
};
pub use interp::InterpolatedFunction;
pub use number::{format_rational, parse_rational, Bound, Coord, Rational};
pub use rectcalc::{
    check_coherence, check_q, exact_cap, gamma, is_exact, l_value, p_bound, BoundFailure, BoundValue, CoherenceReport,
    MultiplicityMap, QReport, RectGaggle, Side,
};
pub use sklar::{
    analyze_family, build_pbox, check_imprecise, mixed_volumes, pbox_member, sklar_compose, sklar_decompose,
    AxiomVerdict, FamilyGroup, FamilyReport, ICReport, ImpreciseCopulaGrid, MembershipFailure, RestrictedPBox,
};
