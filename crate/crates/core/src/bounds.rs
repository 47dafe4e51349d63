//! Failure and miscorrection bounds for collaborative decoding and the frame
//! error rates they induce over a channel that corrupts each of the `N`
//! transmitted rows independently with probability `p_i`.
//!
//! Every quantity is evaluated in the natural-log domain and exponentiated
//! once at the end.

use crate::error::{Error, Result};
use crate::rs_code::RsSpec;

/// Values below this are reported as zero with `underflow` set.
pub const UNDERFLOW: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    /// Natural log of the unclamped value (`-inf` for an exact zero).
    pub ln: f64,
    pub underflow: bool,
}

impl BoundValue {
    pub fn from_ln(ln: f64) -> BoundValue {
        let ln = ln.min(0.0);
        let v = ln.exp();
        if v < UNDERFLOW {
            BoundValue { value: 0.0, ln, underflow: ln > f64::NEG_INFINITY }
        } else {
            BoundValue { value: v.clamp(0.0, 1.0), ln, underflow: false }
        }
    }

    pub fn zero() -> BoundValue {
        BoundValue { value: 0.0, ln: f64::NEG_INFINITY, underflow: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsInput {
    pub q: usize,
    pub l: usize,
    pub f_max: usize,
    /// Transmitted rows per interleaved word.
    pub n_rows: usize,
    pub p_i: f64,
}

impl BoundsInput {
    /// `m` is the redundancy `n - k` of the component code.
    pub fn new(q: usize, l: usize, m: usize, n_rows: usize, p_i: f64) -> Result<BoundsInput> {
        if m == 0 {
            return Err(Error::Bounds("redundancy must be at least 1".into()));
        }
        let input = BoundsInput { q, l, f_max: l.min(m - 1), n_rows, p_i };
        input.validate()?;
        Ok(input)
    }

    pub fn for_code(spec: &RsSpec, l: usize, p_i: f64) -> Result<BoundsInput> {
        BoundsInput::new(spec.field().size(), l, spec.m(), spec.n(), p_i)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::Bounds(format!("field size {} too small", self.q)));
        }
        if self.l == 0 || self.n_rows == 0 {
            return Err(Error::Bounds("l and N must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p_i) {
            return Err(Error::Bounds(format!("p_i = {} outside [0, 1]", self.p_i)));
        }
        Ok(())
    }

    pub fn with_p(&self, p_i: f64) -> BoundsInput {
        BoundsInput { p_i, ..*self }
    }
}

/// `ln n!` for small and moderate `n`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

struct LnFactorials(Vec<f64>);

impl LnFactorials {
    fn upto(n: usize) -> LnFactorials {
        let mut t = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..=n {
            acc += (i as f64).ln();
            t.push(acc);
        }
        LnFactorials(t)
    }

    fn binomial(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n, "C({n}, {k})");
    LnFactorials::upto(n).binomial(n, k)
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| *t > f64::NEG_INFINITY).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn ln_q(q: usize) -> f64 {
    (q as f64).ln()
}

/// Probability bound that `f >= 2` uniform nonzero rows of length `l` are
/// linearly dependent: `q^-(l+1-f) (1 - q^-f) / (1 - q^-1)`.
pub fn p_dependent_bound(f: usize, l: usize, q: usize) -> Result<f64> {
    if f < 2 {
        return Err(Error::Bounds(format!("dependence bound needs f >= 2, got {f}")));
    }
    let q = q as f64;
    let e = l as f64 + 1.0 - f as f64;
    Ok((q.powf(-e) * (1.0 - q.powi(-(f as i32))) / (1.0 - 1.0 / q)).min(1.0))
}

fn ln_p_failure(f: usize, l: usize, q: usize, f_max: usize) -> f64 {
    if f < 2 {
        f64::NEG_INFINITY
    } else if f <= f_max {
        -((l as f64 + 1.0 - f as f64).max(0.0)) * ln_q(q)
    } else {
        0.0
    }
}

/// Detected-failure bound: 0 below two errors, `q^-(l+1-f)` up to `f_max`,
/// 1 beyond.
pub fn p_failure_bound(f: usize, l: usize, q: usize, f_max: usize) -> f64 {
    ln_p_failure(f, l, q, f_max).exp()
}

fn ln_p_valid(lf: &LnFactorials, t: usize, q: usize) -> f64 {
    lf.binomial(q, t) - t as f64 * ln_q(q)
}

/// Fraction `C(q, t) q^-t` of monic degree-`t` polynomials with `t` distinct
/// roots in the field.
pub fn p_valid_fraction(t: usize, q: usize) -> Result<f64> {
    if t > q {
        return Err(Error::Bounds(format!("t = {t} exceeds q = {q}")));
    }
    Ok(ln_p_valid(&LnFactorials::upto(q), t, q).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Validity {
    Exact,
    Factorial,
}

/// `ln sum_{t=2}^{top} P_v(t) q^-((l-t)(f-t))`, `top = min(f - 1, cap)`.
fn ln_p_error(f: usize, l: usize, q: usize, cap: usize, validity: Validity, lf: &LnFactorials) -> f64 {
    let top = (f.saturating_sub(1)).min(cap).min(q);
    log_sum_exp((2..=top).map(|t| {
        let pv = match validity {
            Validity::Exact => ln_p_valid(lf, t, q),
            Validity::Factorial => -lf.0[t],
        };
        pv - ((l - t) * (f - t)) as f64 * ln_q(q)
    }))
}

fn factorials_for(q: usize, f: usize) -> LnFactorials {
    LnFactorials::upto(q.max(f))
}

/// Miscorrection bound with exact `P_v`, summing `t` up to `min(f - 1, l)`.
pub fn p_error_bound(f: usize, l: usize, q: usize) -> f64 {
    p_error_bound_capped(f, l, q, l)
}

/// As [`p_error_bound`] with the summation index also capped at `f_max`.
pub fn p_error_bound_capped(f: usize, l: usize, q: usize, f_max: usize) -> f64 {
    let lf = factorials_for(q, f);
    ln_p_error(f, l, q, f_max.min(l), Validity::Exact, &lf).exp().min(1.0)
}

/// Relaxed miscorrection bound using `P_v(t) <= 1/t!`.
pub fn p_error_bound_relaxed(f: usize, l: usize, q: usize, f_max: usize) -> f64 {
    let lf = factorials_for(q, f);
    ln_p_error(f, l, q, f_max.min(l), Validity::Factorial, &lf).exp().min(1.0)
}

/// Last-summand approximation `q^-(l+1-f) / (f-1)!`; 0 for `f < 3`.
pub fn p_error_approx(f: usize, l: usize, q: usize) -> f64 {
    if f < 3 {
        return 0.0;
    }
    (-ln_factorial(f - 1) - (l as f64 + 1.0 - f as f64) * ln_q(q)).exp().min(1.0)
}

fn ln_fer(input: &BoundsInput, ln_per_weight: impl Fn(usize) -> f64) -> Result<f64> {
    input.validate()?;
    let n = input.n_rows;
    let p = input.p_i;
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let lf = LnFactorials::upto(n);
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    Ok(log_sum_exp((2..=n).map(|t| {
        let tail = if t == n { 0.0 } else { (n - t) as f64 * lq };
        lf.binomial(n, t) + t as f64 * lp + tail + ln_per_weight(t)
    })))
}

/// Frame error rate bound: binomial mixture of the detected-failure bound.
pub fn fer_bound(input: &BoundsInput) -> Result<BoundValue> {
    let ln = ln_fer(input, |t| ln_p_failure(t, input.l, input.q, input.f_max))?;
    Ok(BoundValue::from_ln(ln))
}

/// Frame miscorrection rate bound: binomial mixture of the exact-`P_v`
/// miscorrection bound.
pub fn fer_error_bound(input: &BoundsInput) -> Result<BoundValue> {
    let lf = factorials_for(input.q, input.n_rows);
    let cap = input.f_max.min(input.l);
    let ln = ln_fer(input, |t| ln_p_error(t, input.l, input.q, cap, Validity::Exact, &lf))?;
    Ok(BoundValue::from_ln(ln))
}

/// Exact probability that `f` uniform nonzero rows of `GF(q)^l` are linearly
/// dependent.
pub fn p_dependent_exact(f: usize, l: usize, q: usize) -> f64 {
    if f > l {
        return 1.0;
    }
    let ql = (q as f64).powi(l as i32);
    1.0 - (1..f).map(|i| (ql - (q as f64).powi(i as i32)) / (ql - 1.0)).product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    /// Counts `f`-tuples of nonzero vectors of `GF(q)^l` (`q` in {4, 8})
    /// that are linearly dependent, by enumeration.
    fn enumerate_dependent(q: usize, l: usize, f: usize) -> (u64, u64) {
        let field = crate::gf::Field::new(q.trailing_zeros(), if q == 4 { 0x7 } else { 0xB }).unwrap();
        let size = q.pow(l as u32);
        let decode = |x: usize| -> Vec<u16> { (0..l).map(|i| ((x / q.pow(i as u32)) % q) as u16).collect() };
        let encode = |v: &[u16]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * q + d as usize) };
        fn rec(
            depth: usize,
            f: usize,
            span: &[bool],
            dependent: bool,
            size: usize,
            add: &dyn Fn(&[bool], usize) -> Vec<bool>,
        ) -> u64 {
            if depth == f {
                return u64::from(dependent);
            }
            let remaining = (f - depth) as u32;
            if dependent {
                return ((size - 1) as u64).pow(remaining);
            }
            let mut total = 0;
            for r in 1..size {
                if span[r] {
                    total += ((size - 1) as u64).pow(remaining - 1);
                } else if remaining > 1 {
                    total += rec(depth + 1, f, &add(span, r), false, size, add);
                }
            }
            total
        }
        let add = |span: &[bool], r: usize| -> Vec<bool> {
            let rv = decode(r);
            let mut out = span.to_vec();
            for x in (0..size).filter(|&x| span[x]) {
                let xv = decode(x);
                for c in 1..q as u16 {
                    let y: Vec<u16> = xv
                        .iter()
                        .zip(&rv)
                        .map(|(&a, &b)| {
                            (crate::gf::FieldElement(a)
                                + field.mul(crate::gf::FieldElement(b), crate::gf::FieldElement(c)))
                            .0
                        })
                        .collect();
                    out[encode(&y)] = true;
                }
            }
            out
        };
        let mut span = vec![false; size];
        span[0] = true;
        let dependent = rec(0, f, &span, false, size, &add);
        (dependent, ((size - 1) as u64).pow(f as u32))
    }

    #[test]
    fn dependence_bound_examples() {
        assert!(close(p_dependent_bound(2, 3, 8).unwrap(), 9.0 / 512.0, 1e-14));
        assert!(p_dependent_bound(1, 3, 8).is_err());
        let mut prev = 1.0;
        for l in 2..40 {
            let v = p_dependent_bound(2, l, 16).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn dependence_bound_dominates_enumeration() {
        for (q, l, f) in [
            (8, 1, 2),
            (8, 2, 2),
            (8, 3, 2),
            (4, 1, 2),
            (4, 2, 2),
            (4, 3, 2),
            (4, 4, 2),
            (4, 2, 3),
            (4, 3, 3),
            (4, 4, 3),
        ] {
            let (dep, total) = enumerate_dependent(q, l, f);
            let exact = dep as f64 / total as f64;
            assert!(close(exact, p_dependent_exact(f, l, q), 1e-12), "q={q} l={l} f={f}");
            assert!(p_dependent_bound(f, l, q).unwrap() >= exact, "q={q} l={l} f={f}");
        }
        let (dep, total) = enumerate_dependent(8, 3, 2);
        assert_eq!(dep * 511, 7 * total);
    }

    #[test]
    fn failure_bound_examples() {
        assert_eq!(p_failure_bound(1, 16, 256, 15), 0.0);
        assert_eq!(p_failure_bound(0, 16, 256, 15), 0.0);
        assert_eq!(p_failure_bound(16, 16, 256, 15), 1.0);
        assert!(close(p_failure_bound(15, 16, 256, 15), 256f64.powi(-2), 1e-12));
        assert!(close(p_failure_bound(4, 4, 16, 4), 1.0 / 16.0, 1e-12));
    }

    #[test]
    fn valid_fraction_examples() {
        assert!(close(p_valid_fraction(1, 8).unwrap(), 1.0, 1e-12));
        assert!(close(p_valid_fraction(1, 256).unwrap(), 1.0, 1e-12));
        assert!(close(p_valid_fraction(2, 8).unwrap(), 0.4375, 1e-12));
        for q in [8, 256] {
            for t in 0..=20.min(q) {
                let bound = (-ln_factorial(t)).exp();
                assert!(p_valid_fraction(t, q).unwrap() <= bound * (1.0 + 1e-12), "t={t} q={q}");
            }
        }
        assert!(p_valid_fraction(9, 8).is_err());
    }

    #[test]
    fn error_bound_small_f_vanishes() {
        for l in 1..20 {
            assert_eq!(p_error_bound(2, l, 256), 0.0);
            assert_eq!(p_error_bound(1, l, 256), 0.0);
            assert_eq!(p_error_approx(2, l, 256), 0.0);
        }
    }

    #[test]
    fn error_bound_is_dominated_by_last_summand() {
        let relaxed = p_error_bound_relaxed(15, 16, 256, 15);
        let approx = p_error_approx(15, 16, 256);
        let ratio = relaxed / approx;
        assert!((1.0..=1.01).contains(&ratio), "ratio {ratio}");
        // the exact fraction differs from 1/t! by prod (1 - i/q)
        let exact = p_error_bound(15, 16, 256);
        let shrink: f64 = (1..14).map(|i| 1.0 - i as f64 / 256.0).product();
        assert!(close(exact / approx, shrink, 0.01), "{} vs {shrink}", exact / approx);
    }

    #[test]
    fn error_bound_below_failure_bound() {
        for (q, l, m) in [(256, 16, 16), (16, 4, 7), (8, 4, 5), (256, 8, 16), (64, 12, 20)] {
            let f_max = l.min(m - 1);
            for f in 2..=f_max {
                let pe = p_error_bound_capped(f, l, q, f_max);
                assert!(pe <= p_failure_bound(f, l, q, f_max), "q={q} l={l} f={f}");
                assert!(p_error_bound_relaxed(f, l, q, f_max) >= pe);
            }
        }
    }

    #[test]
    fn log_binomial_matches_exact_integers() {
        for n in 0..=32u64 {
            let mut c: u64 = 1;
            for k in 0..=n {
                let got = ln_binomial(n as usize, k as usize).exp();
                assert!(close(got, c as f64, 1e-12), "C({n},{k})");
                c = c * (n - k) / (k + 1);
            }
        }
    }

    fn direct_fer(input: &BoundsInput, per_weight: impl Fn(usize) -> f64) -> f64 {
        let n = input.n_rows;
        let p = input.p_i;
        let mut c = 1.0f64;
        let mut sum = 0.0;
        for t in 0..=n {
            if t >= 2 {
                sum += c * p.powi(t as i32) * (1.0 - p).powi((n - t) as i32) * per_weight(t);
            }
            c = c * (n - t) as f64 / (t + 1) as f64;
        }
        sum
    }

    #[test]
    fn fer_matches_direct_summation() {
        for (q, l, m, n) in [(8, 4, 5, 8), (16, 4, 7, 16), (256, 16, 16, 32), (256, 16, 16, 204)] {
            for p in [1e-3, 0.01, 0.05, 0.1, 0.3, 0.7] {
                let input = BoundsInput::new(q, l, m, n, p).unwrap();
                let fer = fer_bound(&input).unwrap().value;
                let direct = direct_fer(&input, |t| p_failure_bound(t, l, q, input.f_max));
                assert!(close(fer, direct, 1e-10), "q={q} n={n} p={p}: {fer} vs {direct}");
                let fe = fer_error_bound(&input).unwrap().value;
                let direct_e = direct_fer(&input, |t| p_error_bound_capped(t, l, q, input.f_max));
                if direct_e > 1e-290 {
                    assert!(close(fe, direct_e, 1e-9), "q={q} n={n} p={p}: {fe} vs {direct_e}");
                }
            }
        }
    }

    #[test]
    fn fer_endpoints() {
        let input = BoundsInput::new(256, 16, 16, 204, 0.0).unwrap();
        assert_eq!(fer_bound(&input).unwrap().value, 0.0);
        assert_eq!(fer_error_bound(&input).unwrap().value, 0.0);
        assert!(close(fer_bound(&input.with_p(1.0)).unwrap().value, 1.0, 1e-12));
        assert!(BoundsInput::new(256, 16, 16, 204, 1.5).is_err());
        assert!(BoundsInput::new(256, 16, 16, 204, -0.1).is_err());
    }

    #[test]
    fn fer_monotone_in_p_and_n() {
        let base = BoundsInput::new(256, 16, 16, 204, 0.0).unwrap();
        let mut prev = 0.0;
        for i in 0..=60 {
            let p = 10f64.powf(-3.0 + i as f64 / 30.0);
            let v = fer_bound(&base.with_p(p)).unwrap().value;
            assert!(v >= prev, "p={p}");
            prev = v;
        }
        for p in [0.01, 0.05] {
            let mut prev = 0.0;
            for n in 17..=255 {
                let v = fer_bound(&BoundsInput { n_rows: n, ..base.with_p(p) }).unwrap().value;
                assert!(v >= prev * (1.0 - 1e-12), "n={n}");
                prev = v;
            }
        }
    }

    #[test]
    fn flagship_gap_between_failure_and_miscorrection() {
        let base = BoundsInput::new(256, 16, 16, 204, 0.0).unwrap();
        for i in 0..=20 {
            let p = 10f64.powf(-3.0 + i as f64 / 10.0);
            let fer = fer_bound(&base.with_p(p)).unwrap();
            let fe = fer_error_bound(&base.with_p(p)).unwrap();
            assert!(fe.ln <= fer.ln);
        }
        let fer = fer_bound(&base.with_p(0.01)).unwrap();
        let fe = fer_error_bound(&base.with_p(0.01)).unwrap();
        assert!(fer.ln - fe.ln >= 10.0 * std::f64::consts::LN_10);
    }

    #[test]
    fn underflow_is_flagged() {
        let v = BoundValue::from_ln(-800.0);
        assert_eq!(v.value, 0.0);
        assert!(v.underflow);
        assert!(!BoundValue::zero().underflow);
    }
}
