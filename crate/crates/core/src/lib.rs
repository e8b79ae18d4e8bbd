//! Explicit second-kind Padé approximants for the E-functions
//! `phi_lambda(z) = sum z^nu / ((lambda+1)...(lambda+nu))`, machine-checked
//! certificates for their arithmetic and analytic properties, and rigorous
//! evaluation of the resulting Baker-type lower bound.

pub mod baker;
pub mod certificates;
pub mod efunction;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod pade;
pub mod stress;

pub use error::{PadeError, Result};
pub use efunction::{phi_coefficient, phi_enclosure, validate_config, LambdaConfig};
