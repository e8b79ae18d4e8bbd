//! Exact scalars, prime machinery and rigorous real enclosures.

pub mod elementary;
pub mod fixed;
pub mod interval;
pub mod logexpr;
pub mod primes;
pub mod quadratic;
pub mod rational;

pub use elementary::{exp_enclosure, log_enclosure, sqrt_enclosure};
pub use interval::RatInterval;
pub use logexpr::{decide_nonneg, precision_cap, Decision, LogExpr, Status};
pub use primes::{
    prime_power_product, verify_rising_factorial_denominators, Factored, PrimePowerProduct,
    RisingDenominatorCertificate,
};
pub use quadratic::{AlgebraicRatio, QuadElem, QuadraticInt};
pub use rational::{bracket_factorial, rising_factorial, Rational};
