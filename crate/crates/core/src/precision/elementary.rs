//! exp and ln at the value's own precision.

use super::{constants, BigFloat};

const EXP_HALVINGS: i64 = 12;

impl BigFloat {
    /// e^x. Panics if the result exponent would not fit (|x| > ~1e15).
    pub fn exp(&self) -> BigFloat {
        let prec = self.prec();
        if self.is_zero() {
            return BigFloat::from_i64(1, prec);
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "exp argument out of range: {xf}");
        let n = (xf / std::f64::consts::LN_2).round() as i64;
        let n_bits = 64 - n.unsigned_abs().leading_zeros();
        let wp = prec + EXP_HALVINGS as u32 + 24 + n_bits;
        let x = self.with_prec(wp);
        let ln2 = constants::ln2(wp);
        let r = (&x - &ln2 * BigFloat::from_i64(n, wp)).ldexp(-EXP_HALVINGS);

        let one = BigFloat::from_i64(1, wp);
        let mut sum = one.clone();
        let mut term = one;
        let cutoff = -(wp as i64) - 4;
        for k in 1.. {
            term = &term * &r / BigFloat::from_i64(k, wp);
            if term.top().is_none_or(|t| t < cutoff) {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..EXP_HALVINGS {
            sum = &sum * &sum;
        }
        sum.ldexp(n).with_prec(prec)
    }

    /// Natural logarithm. Panics for x <= 0.
    pub fn ln(&self) -> BigFloat {
        assert!(self.is_positive(), "ln of non-positive value");
        let prec = self.prec();
        let mut e = self.top().unwrap();
        let wp = prec + 24 + (64 - e.unsigned_abs().leading_zeros());
        let mut m = self.with_prec(wp).ldexp(-e);
        // m in [1/2, 1); move it into [1/√2, √2)
        if m.to_f64() < std::f64::consts::FRAC_1_SQRT_2 {
            m = m.ldexp(1);
            e -= 1;
        }
        let one = BigFloat::from_i64(1, wp);
        let z = (&m - &one) / (&m + &one);
        let z2 = &z * &z;
        let mut power = z.clone();
        let mut sum = z;
        let cutoff = -(wp as i64) - 4;
        for k in 1.. {
            power = &power * &z2;
            let term = &power / BigFloat::from_i64(2 * k + 1, wp);
            if term.top().is_none_or(|t| t < cutoff) {
                break;
            }
            sum = &sum + &term;
        }
        let ln_m = sum.ldexp(1);
        let result = if e == 0 {
            ln_m
        } else {
            constants::ln2(wp) * BigFloat::from_i64(e, wp) + ln_m
        };
        result.with_prec(prec)
    }

    /// ln(1+x) with relative accuracy for tiny x. Panics for x <= -1.
    pub fn ln_1p(&self) -> BigFloat {
        let prec = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let extra = self.top().map_or(0, |t| (-t).max(0)) as u32;
        let wp = prec + extra + 8;
        let one_plus = BigFloat::from_i64(1, wp) + self.with_prec(wp);
        one_plus.ln().with_prec(prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 220;

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    #[test]
    fn exp_known_values() {
        assert_eq!(
            f(1.0).exp().to_decimal_string(50),
            "2.7182818284590452353602874713526624977572470937000"
        );
        assert_eq!(
            f(10.0).exp().to_decimal_string(40),
            "22026.46579480671651695790064528424436635"
        );
        assert_eq!(f(0.0).exp(), f(1.0));
        let small = f(-700.0).exp().to_f64();
        assert!((small / (-700f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ln_known_values() {
        assert_eq!(
            f(10.0).ln().to_decimal_string(40),
            "2.302585092994045684017991454684364207601"
        );
        assert_eq!(f(1.0).ln(), f(0.0));
        assert!((f(0.3).ln().to_f64() - 0.3f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn exp_ln_inverse() {
        for x in [-50.0, -1.5, 1e-20, 0.25, 3.0, 123.456] {
            let back = f(x).exp().ln();
            let err = (&back - &f(x)).abs();
            let tol = BigFloat::from_f64(1e-60 * x.abs().max(1.0), P);
            assert!(err <= tol, "x={x}");
        }
    }

    #[test]
    fn ln_1p_keeps_relative_accuracy() {
        let x = f(1e-30);
        let l = x.ln_1p();
        // ln(1+x) = x - x^2/2 + ...
        let expect = &x - &(&x * &x).ldexp(-1);
        let rel = ((&l - &expect) / &expect).abs().to_f64();
        assert!(rel < 1e-60);
    }
}
