//! Homotopy pseudo-orbit shadowing for expanding and hyperbolic multivalued dynamical systems.
//!
//! A multivalued system is a pair of spaces `X0`, `X1` with two maps `iota, sigma: X1 -> X0`.
//! Pseudo-orbits carry paths that join `sigma(x_{i-1})` to `iota(x_i)`; shadowing replaces them
//! by genuine orbits, and homotopy semi-conjugacies between systems induce maps of orbit spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod associated;
pub mod error;
pub mod expanding;
pub mod hsc;
pub mod hyperbolic;
pub mod io;
pub mod orbit;
pub mod path;
pub mod space;
pub mod symbolic;
pub mod system;
pub mod trace;

pub use num_complex::Complex64;

pub use associated::{
    associated_expanding, classify_henon, inverse_limit_conjugacy, y0_independence,
    AssociatedSystem, Direction, HenonClass, InverseLimitOrbit,
};
pub use error::{Error, Result};
pub use expanding::{
    induced_map_expanding, lift_path, make_circle_system, make_polynomial_system, shadow_expanding,
    uniqueness_radius,
};
pub use hsc::{apply_hsc, compose_hsc, hpo_homotopy_check, HomotopyCheck, HomotopySemiConjugacy};
pub use hyperbolic::{
    check_bcc, check_occ, make_henon_system, shadow_hyperbolic, CrossedSystem, HenonParams,
};
pub use orbit::{shift_orbit, HomotopyPseudoOrbit, Orbit, WindowKind};
pub use path::PolyPath;
pub use space::{Metric, Point, Space};
pub use symbolic::{code_orbit, enumerate_periodic, graph_system, higher_block, GraphSystem};
pub use system::{validate_orbit, ExpansionCertificate, Family, MultivaluedSystem, Perturbation};
pub use trace::{ShadowTrace, StageRecord};
