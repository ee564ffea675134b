//! Sandwich distributions `A <= F <= B` with the common margins of `A`, `B`.

pub mod lp;
mod patch;
mod sandwich;

pub use patch::{patch_sweep, PatchStep, PatchTrace};
pub use sandwich::{sandwich_decide, FeasibilityCertificate};
