//! Exact Gaussian rationals, the coefficient field ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// An element `re + im·i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussScalar {
    re: BigRational,
    im: BigRational,
}

impl GaussScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn imag(im: BigRational) -> Self {
        Self { re: BigRational::zero(), im }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::imag(BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `(-i)^k` and friends: `i^k` for any integer exponent.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn scale_int(&self, k: i128) -> Self {
        if k == 1 {
            return self.clone();
        }
        let k = BigRational::from_integer(BigInt::from(k));
        Self { re: &self.re * &k, im: &self.im * &k }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for GaussScalar {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussScalar {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussScalar {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn add(self, rhs: &GaussScalar) -> GaussScalar {
        GaussScalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussScalar {
    type Output = GaussScalar;
    fn add(self, rhs: GaussScalar) -> GaussScalar {
        GaussScalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&GaussScalar> for GaussScalar {
    fn add_assign(&mut self, rhs: &GaussScalar) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussScalar> for GaussScalar {
    fn sub_assign(&mut self, rhs: &GaussScalar) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Sub<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn sub(self, rhs: &GaussScalar) -> GaussScalar {
        GaussScalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussScalar {
    type Output = GaussScalar;
    fn sub(self, rhs: GaussScalar) -> GaussScalar {
        GaussScalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Mul<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn mul(self, rhs: &GaussScalar) -> GaussScalar {
        // Most coefficients in this engine are purely real or purely imaginary.
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussScalar::real(&self.re * &rhs.re),
            (true, false) => GaussScalar { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => GaussScalar { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => GaussScalar {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl Mul for GaussScalar {
    type Output = GaussScalar;
    fn mul(self, rhs: GaussScalar) -> GaussScalar {
        &self * &rhs
    }
}

impl<'a> Div<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussScalar) -> GaussScalar {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar { re: -&self.re, im: -&self.im }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussScalar {
    /// True when the rendering is a single signed token with no inner `+`.
    pub(crate) fn is_simple(&self) -> bool {
        self.re.is_zero() || self.im.is_zero()
    }
}

/// Renders as `p/q`, `r/s*i` or `p/q+r/s*i`.
impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = || {
            if self.im.is_one() {
                "i".to_string()
            } else if (-&self.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(&self.im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im()),
            (false, false) => {
                let imag = im();
                if imag.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(&self.re), imag)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), imag)
                }
            }
        }
    }
}

/// Parses a plain rational `p`, `p/q` or `-p/q`. Floats are rejected.
pub fn parse_rational(src: &str) -> Result<BigRational, Error> {
    let s = src.trim();
    let bad = || Error::Parse { line: 1, column: 1, message: format!("not an exact rational: {src:?}") };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational the same way scalars do.
pub fn format_rational(r: &BigRational) -> String {
    fmt_rational(r)
}

#[cfg(test)]
pub(crate) fn rational_from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse_roundtrip() {
        let z = GaussScalar::new(
            BigRational::new(3.into(), 4.into()),
            BigRational::new((-2).into(), 5.into()),
        );
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GaussScalar::one());
        assert!(GaussScalar::zero().inv().is_none());
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&GaussScalar::i() * &GaussScalar::i(), -GaussScalar::one());
        assert_eq!(GaussScalar::i_pow(-1), -GaussScalar::i());
        assert_eq!(GaussScalar::i_pow(6), -GaussScalar::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussScalar::from_ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(GaussScalar::i().to_string(), "i");
        let z = GaussScalar::new(rational_from_int(1), BigRational::new((-1).into(), 3.into()));
        assert_eq!(z.to_string(), "1-1/3*i");
        let z = GaussScalar::new(BigRational::new(1.into(), 2.into()), rational_from_int(2));
        assert_eq!(z.to_string(), "1/2+2*i");
    }

    #[test]
    fn reduced_denominators() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
