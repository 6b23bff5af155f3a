//! Exact scalars, fraction-free linear algebra and Laurent characters.

mod character;
mod matrix;
mod sparse;

pub use character::{CharacterJson, LaurentCharacter, TermJson, Weight};
pub use matrix::{rank, rank_and_kernel, rank_bareiss, rank_sparse, rref, ExactMatrix, Rref};
pub(crate) use sparse::{axpy, sparse_from_map};
pub use sparse::{SparseMatrix, SparseVec};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn scalar_to_string(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a terminating decimal such as `"-0.25"`.
pub fn parse_scalar(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let ip_val: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().ok()? };
        let fp_val: BigInt = fp.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let mag = BigRational::new(ip_val * &den + fp_val, den);
        return Some(if neg { -mag } else { mag });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn scalar_to_f64(x: &ExactScalar) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for huge numerators/denominators
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Integer power with negative exponents allowed (base must be nonzero then).
pub fn scalar_pow(base: &ExactScalar, exp: i64) -> ExactScalar {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// `n choose k` as an exact integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
