//! Physical implementability of Hermitian- and trace-preserving linear maps.
//!
//! A quantum device can only run completely positive trace-preserving (CPTP)
//! maps. Many maps of practical interest -- most prominently the inverses of
//! noise channels -- are Hermitian- and trace-preserving (HPTP) but not
//! completely positive. Such a map can still be *simulated* by writing it as
//! a signed combination of channels, `N = sum_a eta_a O_a`, and Monte-Carlo
//! sampling the channels with probabilities `|eta_a| / sum |eta|` and sign
//! corrections. The price is the l1 norm of the coefficients: the measure
//! `nu(N) = log2 min sum_a |eta_a|` (the *physical implementability*) is
//! exactly the log of the sampling-cost factor of that simulation.
//!
//! This crate computes `nu` by semidefinite programming over Choi operators,
//! returns certified optimal two-channel quasiprobability decompositions,
//! exposes the closed-form values known for the inverses of standard noise
//! families, and simulates the resulting error-mitigation protocol with
//! Hoeffding-bound shot planning.
//!
//! The module layout mirrors the pipeline:
//!
//! * [`matrix`] -- dense complex linear algebra primitives.
//! * [`channel`] -- linear maps as Choi operators; Kraus and superoperator
//!   conversions, composition, tensoring, inverses, classification, and
//!   superchannel conjugation.
//! * [`zoo`] -- named noise families, Weyl operators, seeded random channels,
//!   and the analytic `nu` formulas for inverse noise maps.
//! * [`sdp`] -- problem builders for every semidefinite program used here and
//!   a solver contract with certified duality gaps.
//! * [`implementability`] -- the measure layer: `nu` certificates,
//!   quasiprobability decompositions, trace-norm bounds, robustness.
//! * [`mitigation`] -- the sampling protocol: shot planning, seeded runs, and
//!   exact brute-force expectation oracles.
//! * [`verify`] -- executable property suites used by the CLI and tests.

pub mod channel;
pub mod error;
pub mod implementability;
pub mod matrix;
pub mod mitigation;
pub mod sdp;
pub mod verify;
pub mod zoo;

pub mod guide;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

// The sdp module links against BLAS/LAPACK through the cone solver.
extern crate openblas_src as _openblas_src;
