//! Constants generated from exact integer and rational arithmetic, cached
//! per bit precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::BigFloat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Pi,
    Sqrt2,
    Ln2,
}

fn cached(kind: Constant, prec: u32, build: fn(u32) -> BigFloat) -> BigFloat {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), BigFloat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(kind, prec)) {
        return v.clone();
    }
    let v = build(prec);
    cache.lock().unwrap().insert((kind, prec), v.clone());
    v
}

/// √2 from the integer square root of 2·4^(prec+4).
pub(crate) fn sqrt2(prec: u32) -> BigFloat {
    cached(Constant::Sqrt2, prec, |prec| {
        let k = prec as i64 + 4;
        let r = (BigInt::from(2) << (2 * k) as u64).sqrt();
        BigFloat::from_parts(r, -k, prec)
    })
}

/// arctan(1/m) as an exact rational partial sum, truncated once the next
/// term drops below 2^-bits.
fn arctan_inverse(m: u32, bits: u32) -> BigRational {
    let m2 = BigInt::from(m) * m;
    let threshold = BigInt::one() << bits as u64;
    let mut power = BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        let den = &power * (2 * k + 1);
        let term = BigRational::new(BigInt::one(), den.clone());
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        if den > threshold {
            return sum;
        }
        power *= &m2;
        k += 1;
    }
}

/// π = 16·arctan(1/5) − 4·arctan(1/239), summed exactly and rounded once.
pub(crate) fn pi(prec: u32) -> BigFloat {
    cached(Constant::Pi, prec, |prec| {
        let bits = prec + 16;
        let pi = arctan_inverse(5, bits) * BigInt::from(16)
            - arctan_inverse(239, bits) * BigInt::from(4);
        BigFloat::from_rational(&pi, prec)
    })
}

/// ln 2 = 2·atanh(1/3), fixed-point with guard bits.
pub(crate) fn ln2(prec: u32) -> BigFloat {
    cached(Constant::Ln2, prec, |prec| {
        let bits = prec as u64 + 32;
        let one = BigInt::one() << bits;
        let mut power = BigInt::from(3);
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        loop {
            let term = &one / (&power * (2 * k + 1));
            if term.is_zero() {
                break;
            }
            sum += term;
            power *= 9;
            k += 1;
        }
        BigFloat::from_parts(sum << 1u32, -(bits as i64), prec)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert_eq!(
            p.to_decimal_string(50),
            "3.1415926535897932384626433832795028841971693993751"
        );
    }

    #[test]
    fn sqrt2_digits() {
        assert_eq!(
            sqrt2(200).to_decimal_string(40),
            "1.414213562373095048801688724209698078570"
        );
    }

    #[test]
    fn ln2_digits() {
        assert_eq!(
            ln2(200).to_decimal_string(40),
            "0.6931471805599453094172321214581765680755"
        );
    }

    #[test]
    fn cache_is_per_precision() {
        assert_eq!(pi(64).prec(), 64);
        assert_eq!(pi(128).prec(), 128);
        assert_eq!(pi(64).to_f64(), std::f64::consts::PI);
    }
}
