//! Gaussian rationals: the exact coefficient field of every series.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact complex number with arbitrary-precision rational parts.
pub type Scalar = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(re: i64) -> Scalar {
    Complex::new(rational(re, 1), BigRational::zero())
}

pub fn gaussian(re: i64, im: i64) -> Scalar {
    Complex::new(rational(re, 1), rational(im, 1))
}

pub fn from_rational(re: BigRational) -> Scalar {
    Complex::new(re, BigRational::zero())
}

/// The imaginary unit.
pub fn imag_unit() -> Scalar {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn is_real(c: &Scalar) -> bool {
    c.im.is_zero()
}

/// Multiplicative inverse; `None` for zero.
pub fn inverse(c: &Scalar) -> Option<Scalar> {
    if c.is_zero() {
        return None;
    }
    let norm = &c.re * &c.re + &c.im * &c.im;
    Some(Complex::new(&c.re / &norm, -&c.im / &norm))
}

pub fn pow(c: &Scalar, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..k {
        acc *= c;
    }
    acc
}

/// Exact integer square root of a non-negative integer, if it is a perfect square.
pub fn perfect_sqrt(k: u64) -> Option<u64> {
    let r = (k as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == k)
}

/// Compact human form: `3/2`, `-i`, `1/2+3*i`; readable back by the CLI grammar.
pub fn format(c: &Scalar) -> String {
    fn rat(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    match (c.re.is_zero(), c.im.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => rat(&c.re),
        (re_zero, false) => {
            let mag = c.im.abs();
            let im = if mag.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rat(&mag))
            };
            let sign = if c.im.is_negative() { "-" } else { "+" };
            if re_zero {
                if c.im.is_negative() {
                    format!("-{im}")
                } else {
                    im
                }
            } else {
                format!("{}{}{}", rat(&c.re), sign, im)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gaussian() {
        let c = gaussian(1, 2);
        let inv = inverse(&c).unwrap();
        assert_eq!(c * inv, Scalar::one());
        assert!(inverse(&Scalar::zero()).is_none());
    }

    #[test]
    fn formatting() {
        assert_eq!(format(&gaussian(0, -1)), "-i");
        assert_eq!(format(&gaussian(3, 0)), "3");
        assert_eq!(
            format(&Complex::new(rational(1, 2), rational(-3, 1))),
            "1/2-3*i"
        );
        assert_eq!(format(&Scalar::zero()), "0");
    }

    #[test]
    fn squares() {
        assert_eq!(perfect_sqrt(16), Some(4));
        assert_eq!(perfect_sqrt(1), Some(1));
        assert_eq!(perfect_sqrt(3), None);
    }
}
