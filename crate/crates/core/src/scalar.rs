use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Num;

use crate::error::{Error, Result};

/// Coefficient field for every linear object in the crate.
///
/// Row reduction and kernel computations test coefficients for exact zero, so only exact
/// fields such as [`Rational`] give meaningful slice computations. Evaluation and composition
/// are also usable with floating point types.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialEq + Num + Neg<Output = T> + Send + Sync + 'static
{
}

/// Arbitrary-precision rationals, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    Rational::from_str(trimmed).map_err(|e| Error::Parse {
        pos: 0,
        message: format!("invalid rational {trimmed:?}: {e}"),
    })
}

/// Builds a scalar from a nonnegative decimal digit string.
pub(crate) fn scalar_from_digits<S: Scalar>(digits: &str) -> Option<S> {
    // `from_str_radix` on ratios insists on a '/', so accumulate digit by digit instead.
    let small: Vec<S> = (0..10).scan(S::zero(), |acc, _| {
        let current = acc.clone();
        *acc = acc.clone() + S::one();
        Some(current)
    })
    .collect();
    let ten = small[9].clone() + S::one();
    if digits.is_empty() {
        return None;
    }
    digits.bytes().try_fold(S::zero(), |acc, b| {
        b.is_ascii_digit().then(|| acc * ten.clone() + small[(b - b'0') as usize].clone())
    })
}
