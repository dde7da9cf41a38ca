//! Gauss–Legendre rules at arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::precision::BigFloat;

/// Nodes and weights on [−1, 1].
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<BigFloat>,
    pub weights: Vec<BigFloat>,
}

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: &BigFloat) -> (BigFloat, BigFloat) {
    let prec = x.prec();
    let mut prev = BigFloat::from_i64(1, prec);
    let mut cur = x.clone();
    for k in 1..n {
        let k = k as i64;
        let next = (BigFloat::from_i64(2 * k + 1, prec) * x * &cur
            - BigFloat::from_i64(k, prec) * &prev)
            / BigFloat::from_i64(k + 1, prec);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn derivative(n: usize, x: &BigFloat, pn: &BigFloat, pn1: &BigFloat) -> BigFloat {
    let prec = x.prec();
    BigFloat::from_i64(n as i64, prec) * (x * pn - pn1) / (x * x - BigFloat::from_i64(1, prec))
}

fn build(n: usize, prec: u32) -> GaussRule {
    let wp = prec + 16;
    let mut positive = Vec::with_capacity(n / 2 + 1);
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = BigFloat::from_f64(guess, wp);
        for _ in 0..100 {
            let (pn, pn1) = legendre_pair(n, &x);
            let step = &pn / derivative(n, &x, &pn, &pn1);
            x = &x - &step;
            if step.is_zero() || step.abs() <= BigFloat::from_i64(1, wp).ldexp(-(wp as i64) + 4) {
                break;
            }
        }
        let (pn, pn1) = legendre_pair(n, &x);
        let dp = derivative(n, &x, &pn, &pn1);
        let one = BigFloat::from_i64(1, wp);
        let w = BigFloat::from_i64(2, wp) / ((&one - &x * &x) * &dp * &dp);
        positive.push((x, w));
    }
    let has_middle = n % 2 == 1;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x, w) in &positive[..n / 2] {
        nodes.push(-x.with_prec(prec));
        weights.push(w.with_prec(prec));
    }
    if has_middle {
        nodes.push(BigFloat::zero(prec));
        weights.push(positive[n / 2].1.with_prec(prec));
    }
    for (x, w) in positive[..n / 2].iter().rev() {
        nodes.push(x.with_prec(prec));
        weights.push(w.with_prec(prec));
    }
    GaussRule { nodes, weights }
}

/// Cached `n`-point rule at `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&(n, prec)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build(n, prec));
    cache.lock().unwrap().insert((n, prec), Arc::clone(&rule));
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn apply(rule: &GaussRule, f: impl Fn(&BigFloat) -> BigFloat) -> BigFloat {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .fold(BigFloat::zero(P), |acc, (x, w)| acc + w * f(x))
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [5, 32] {
            let rule = gauss_legendre(n, P);
            assert_eq!(rule.nodes.len(), n);
            let total = apply(&rule, |_| BigFloat::from_i64(1, P));
            assert!((total - BigFloat::from_i64(2, P)).abs() < BigFloat::from_f64(1e-55, P));
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let rule = gauss_legendre(32, P);
        let got = apply(&rule, |x| x.powi(62));
        let want = BigFloat::from_i64(2, P) / BigFloat::from_i64(63, P);
        assert!((got - want).abs() < BigFloat::from_f64(1e-55, P));
        let odd = apply(&rule, |x| x.powi(61));
        assert!(odd.abs() < BigFloat::from_f64(1e-55, P));
    }

    #[test]
    fn exponential_integral() {
        let rule = gauss_legendre(32, P);
        let got = apply(&rule, |x| x.exp());
        let e = BigFloat::from_i64(1, P).exp();
        let want = &e - BigFloat::from_i64(1, P) / &e;
        assert!((got - want).abs() < BigFloat::from_f64(1e-55, P));
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = gauss_legendre(7, P);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes[3].abs() < BigFloat::from_f64(1e-55, P));
        assert_eq!(rule.nodes[0], -rule.nodes[6].clone());
    }
}
