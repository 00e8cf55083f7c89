//! Numerical laboratory for complex-dilated one-dimensional Schrödinger
//! operators.
//!
//! The crate builds finite-difference Hamiltonians -d²/dx² + V on a box,
//! applies complex dilation to uncover resonances, classifies discrete
//! spectra into isolated, resonance, continuum, and embedded-candidate
//! points, and checks a family of eigenvalue-sum estimates against those
//! spectra with fully reproducible reports.

pub mod angle;
pub mod bounds;
pub mod config;
pub mod error;
pub mod lapack;
pub mod operator;
pub mod potential;
pub mod quad;
pub mod region;
pub mod report;
pub mod spectral;

pub use angle::ComplexAngle;
pub use bounds::{
    alpha_required, box_check, lhs_sum, rhs, theorem_region, verify, verify_with_classification,
    BoundInputs, BoundParams, BoundReport, BoxCheck, LPolicy, LTConstants, SpectrumUse, TheoremId,
};
pub use error::{Error, Result};
pub use operator::{assemble, laplacian_matrix, DilatedHamiltonian, Form, Grid, Scheme};
pub use potential::{
    cphi_condition, critical_angle, gaussian_decay_coefficient, gaussian_norm_closed_form,
    lp_norm_quadrature, lp_norm_quadrature_tol, negative_part, norm_monotonicity_scan, Family,
    PartMap, Potential, ScanPoint,
};
pub use region::{contains, eps_axis, parse_region_tag, region_tag, rotate_region, same_arc, Region};
pub use spectral::{
    classify, classify_from_spectra, eigenvalues, eigenvalues_with, hausdorff_distance,
    ray_distance, rotate_spectrum, trajectory, EigenPair, SpectrumClassification, Tolerances,
    TrajectoryPath,
};
