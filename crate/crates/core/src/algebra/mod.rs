//! Exact scalar and series arithmetic: the substrate for every other module.
//!
//! [`Cyc`] is an element of the cyclotomic field Q(zeta_m), stored in
//! canonical reduced form so that equality of values is equality of
//! representations. [`Series`] is a truncated multivariate formal series
//! over [`Cyc`] with per-variable exponent lattices and windows.

pub mod cyclotomic;
pub mod series;

pub use cyclotomic::Cyc;
pub use series::{Series, VarSet, VarSpec};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for the arbitrary-precision rationals used everywhere.
pub type Rat = BigRational;

/// Integer-to-rational convenience.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a rational; panics on `q == 0`.
pub fn ratq(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// n! as a rational.
pub fn factorial(n: u64) -> Rat {
    let mut f = BigInt::from(1);
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Rat::from_integer(f)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return rat(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}
