//! Operadic groups and the renormalization group in exact arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinatorics`] enumerates set partitions and the block permutations
//!   used by every composition formula;
//! * [`formal_diffeo`] holds truncated multivariate formal diffeomorphisms,
//!   their Faà di Bruno composition and a brute-force substitution oracle;
//! * [`operad_group`] defines the [`Operad`](operad_group::Operad) interface,
//!   the group and pre-Lie structures attached to any symmetric operad, an
//!   axiom checker and the endomorphism operad;
//! * [`graphs`] implements decorated, enumerated, colored graphs and their
//!   canonical monomials;
//! * [`contraction_operad`] builds the contraction operad on diagram classes
//!   and its model-specific suboperads;
//! * [`wick_rg`] contains the Wick generating operator and the operadic
//!   morphism into the endomorphism operad of coupling space.
//!
//! All coefficients are [`Rational`]s, so every identity is checked exactly.

pub mod combinatorics;
pub mod contraction_operad;
mod error;
pub mod fixtures;
pub mod formal_diffeo;
pub mod graphs;
pub mod operad_group;
pub mod wick_rg;

pub use error::{Error, Result};

use num_bigint::BigInt;

/// Exact ground field.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            if q == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(s.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?),
    };
    Ok(parsed)
}

/// Small random rational used by samplers: numerator in `-4..=4`, denominator in `1..=3`.
pub(crate) fn random_rational<R: rand::Rng + ?Sized>(rng: &mut R) -> Rational {
    let p = rng.gen_range(-4i64..=4);
    let q = rng.gen_range(1i64..=3);
    rat(p, q)
}

/// Nonzero variant of [`random_rational`].
pub(crate) fn random_nonzero_rational<R: rand::Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if r != int(0) {
            return r;
        }
    }
}
