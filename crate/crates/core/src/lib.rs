//! Exact q-series and certified numerics for elliptic-function identities:
//! Eisenstein series, theta functions and their moduli, hypergeometric
//! inversion, Fourier-series elliptic functions, and a verification harness
//! that reports residuals for each identity.

#[cfg(feature = "cli")]
pub mod cli;
pub mod eisenstein;
pub mod ellf;
pub mod error;
pub mod format;
pub mod hyper;
pub mod inversion;
pub mod jacobi;
pub mod qseries;
pub mod report;
pub mod suites;
mod tail;
pub mod theta;
pub mod trig;

pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use qseries::QSeries;
pub use report::{Residual, VerificationReport};
pub use suites::{run_suite, Suite, SuiteOptions};
pub use theta::Level;
