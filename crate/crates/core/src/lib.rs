//! Convex Bethe Ansatz systems solved as minima of Yang–Yang Morse
//! functions, with applications to the zeros of Wilson, Askey-Wilson and
//! continuous Hahn polynomials.

pub mod bethe_system;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod polyzeros;
pub mod potentials;
pub mod quadrature;
pub mod report;
pub mod rootfind;
pub mod solver;
pub mod verify;

pub use bethe_system::{make_rho, make_rho_tilde_and_beta, BetheSystem, SystemType, WeightVector};
pub use bounds::{bound_box, family_k_pm, kappa_pm, BoundBox};
pub use config::{parse_config, Config, Problem};
pub use error::{Error, Result};
pub use polyzeros::{
    de_residual, eval_poly, family_to_bethe, zeros_via_bethe, zeros_via_oracle, Family, PolynomialSpec,
};
pub use potentials::{CoupledParameter, PotentialKind};
pub use solver::{solve, solve_from, BetheSolution, SolverConfig};
