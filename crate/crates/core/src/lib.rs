//! Jet-based verification of the symplectic and contact geometry carried by
//! exact solutions of the Euler and Navier-Stokes equations.

pub mod cli;
pub mod contact;
pub mod expr;
pub mod exterior;
pub mod jets;
pub mod scenarios;
pub mod symplectic;
pub mod trace;
pub mod vec3;
pub mod verify;

use contact::ContactError;
use exterior::linalg::SolveError;
use exterior::{FormError, RestrictError};
use expr::ExprError;
use jets::JetError;
use scenarios::ScenarioError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Restrict(#[from] RestrictError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error("degenerate two-form (Liouville coefficient {liouville:e})")]
    Degenerate { liouville: f64 },
    #[error("regime error: {0}")]
    Regime(&'static str),
    #[error("{identity} needs steady pressure; use {instead}")]
    OutOfScope {
        identity: &'static str,
        instead: &'static str,
    },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
