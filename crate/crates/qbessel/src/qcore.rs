//! q-Pochhammer symbols, basic hypergeometric series (Gasper–Rahman
//! normalisation) and deterministic truncated sums over ℕ and ℤ.

use crate::error::{QError, Result};
use crate::scalar::Real;
use std::collections::VecDeque;

/// The deformation parameter together with precision settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QContext<T> {
    q: T,
    sqrt_q: T,
    working_precision: u32,
    default_tol: f64,
}

impl<T: Real> QContext<T> {
    pub fn new(q: f64) -> Result<Self> {
        Self::from_scalar(T::c(q))
    }

    pub fn from_scalar(q: T) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) {
            return Err(QError::InvalidQ(q.f64()));
        }
        if T::DIGITS < 15 {
            return Err(QError::InsufficientPrecision(T::DIGITS));
        }
        Ok(Self {
            q,
            sqrt_q: q.sqrt(),
            working_precision: T::DIGITS,
            default_tol: 1e-12,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.default_tol = tol;
        self
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn working_precision(&self) -> u32 {
        self.working_precision
    }

    pub fn default_tol(&self) -> f64 {
        self.default_tol
    }

    /// Context for base q².
    pub fn squared(&self) -> Self {
        Self {
            q: self.q * self.q,
            sqrt_q: self.q,
            ..*self
        }
    }

    /// q^e for integer e.
    pub fn pow(&self, e: i64) -> T {
        powi(self.q, e)
    }

    /// q^{e2/2}.
    pub fn pow_half(&self, e2: i64) -> T {
        powi(self.sqrt_q, e2)
    }
}

pub(crate) fn powi<T: Real>(x: T, e: i64) -> T {
    let e = i32::try_from(e).expect("exponent fits in i32");
    x.powi(e)
}

/// Truncation rule for bilateral sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// Sum exactly over `lo..=hi`.
    Fixed { lo: i64, hi: i64 },
    /// Start from `lo..=hi` and grow until three consecutive boundary terms
    /// on each side fall below the tail tolerance.
    Adaptive { lo: i64, hi: i64 },
}

impl Window {
    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            Window::Fixed { lo, hi } | Window::Adaptive { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub tail_tol: f64,
    pub window: Window,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 4000,
            tail_tol: 1e-12,
            window: Window::Adaptive { lo: -30, hi: 40 },
        }
    }
}

impl TruncationPolicy {
    pub fn fixed(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "window lower bound exceeds upper bound");
        Self {
            window: Window::Fixed { lo, hi },
            ..Self::default()
        }
    }

    pub fn adaptive(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "window lower bound exceeds upper bound");
        Self {
            window: Window::Adaptive { lo, hi },
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub est_error: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl<T: Real> SeriesResult<T> {
    pub fn exact(value: T, terms_used: usize) -> Self {
        Self {
            value,
            est_error: 0.0,
            terms_used,
            converged: true,
        }
    }
}

/// (a;q)_n.
pub fn qpoch_finite<T: Real>(a: T, ctx: &QContext<T>, n: usize) -> T {
    let mut p = T::one();
    let mut t = a;
    for _ in 0..n {
        p = p * (T::one() - t);
        t = t * ctx.q();
    }
    p
}

/// (a;q)_∞ to the full precision of `T`.
pub fn qpoch_inf<T: Real>(a: T, ctx: &QContext<T>) -> T {
    let eps = T::eps() * T::c(0.25);
    let mut p = T::one();
    let mut t = a;
    while t.abs() >= eps {
        p = p * (T::one() - t);
        t = t * ctx.q();
    }
    p
}

/// (a;q)_∞ with a first-order tail bound.
pub fn qpoch_infinite<T: Real>(
    a: T,
    ctx: &QContext<T>,
    policy: &TruncationPolicy,
) -> SeriesResult<T> {
    let cut = T::c(policy.tail_tol).min(T::eps() * T::c(0.25));
    let mut p = T::one();
    let mut t = a;
    let mut k = 0usize;
    while t.abs() >= cut {
        if k >= policy.max_terms {
            let est = 2.0 * (t.abs() / (T::one() - ctx.q()) * p.abs()).f64();
            return SeriesResult {
                value: p,
                est_error: est,
                terms_used: k,
                converged: false,
            };
        }
        p = p * (T::one() - t);
        t = t * ctx.q();
        k += 1;
    }
    let est = 2.0 * (t.abs() / (T::one() - ctx.q()) * p.abs()).f64();
    SeriesResult {
        value: p,
        est_error: est,
        terms_used: k,
        converged: est <= policy.tail_tol,
    }
}

/// A series parameter; `Pow(m)` stands for q^m exactly, so that q^{-n}
/// terminates a series without relying on floating-point cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QParam<T> {
    Zero,
    Pow(i64),
    Value(T),
}

impl<T: Real> QParam<T> {
    pub fn value(&self, ctx: &QContext<T>) -> T {
        match *self {
            QParam::Zero => T::zero(),
            QParam::Pow(m) => ctx.pow(m),
            QParam::Value(v) => v,
        }
    }

    /// 1 − a q^k, exactly zero when a = q^{-k}.
    fn factor(&self, ctx: &QContext<T>, k: usize) -> T {
        match *self {
            QParam::Zero => T::one(),
            QParam::Pow(m) if m + k as i64 == 0 => T::zero(),
            QParam::Pow(m) => T::one() - ctx.pow(m + k as i64),
            QParam::Value(v) => T::one() - v * ctx.pow(k as i64),
        }
    }

    fn terminates_at(&self) -> Option<usize> {
        match *self {
            QParam::Pow(m) if m <= 0 => Some((-m) as usize),
            _ => None,
        }
    }
}

/// _rφ_s(upper; lower; q, z).
pub fn rphis<T: Real>(
    upper: &[QParam<T>],
    lower: &[QParam<T>],
    ctx: &QContext<T>,
    z: T,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let r = upper.len() as i64;
    let s = lower.len() as i64;
    let balance = 1 + s - r;
    let stop = upper.iter().filter_map(QParam::terminates_at).min();
    let eps = T::eps();

    let mut term = T::one();
    let mut sum = T::one();
    let mut small_run = 0usize;
    let mut tail = [0.0f64; 3];
    let mut k = 0usize;
    loop {
        if stop == Some(k) {
            return Ok(SeriesResult::exact(sum, k + 1));
        }
        if k + 1 >= policy.max_terms {
            return Err(QError::NonConvergent(policy.max_terms));
        }
        let mut num = T::one();
        for a in upper {
            num = num * a.factor(ctx, k);
        }
        let mut den = T::one() - ctx.pow(k as i64 + 1);
        for b in lower {
            let f = b.factor(ctx, k);
            if f.abs() <= eps * T::c(4.0) {
                return Err(QError::PoleInLowerParameter(k + 1));
            }
            den = den * f;
        }
        let mut shift = T::one();
        let g = -ctx.pow(k as i64);
        if balance >= 0 {
            for _ in 0..balance {
                shift = shift * g;
            }
        } else {
            for _ in 0..(-balance) {
                shift = shift / g;
            }
        }
        term = term * num / den * shift * z;
        sum = sum + term;
        k += 1;
        tail.rotate_left(1);
        tail[2] = term.abs().f64();
        if stop.is_none() {
            if term.abs() <= eps * sum.abs() || term == T::zero() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 {
                let est = 2.0 * tail.iter().sum::<f64>();
                return Ok(SeriesResult {
                    value: sum,
                    est_error: est,
                    terms_used: k + 1,
                    converged: est <= policy.tail_tol.max(eps.f64() * sum.abs().f64() * 8.0),
                });
            }
        }
    }
}

/// Σ_{x∈ℤ} term(x), summed in ascending index order.
pub fn bilateral_sum<T: Real, F: FnMut(i64) -> T>(
    mut term: F,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let (lo, hi) = policy.window.bounds();
    let mut lo = lo;
    let mut terms: VecDeque<T> = (lo..=hi).map(&mut term).collect();
    let tol = T::c(policy.tail_tol);
    let edge = |v: &VecDeque<T>, left: bool| -> f64 {
        let n = v.len().min(3);
        let it: Box<dyn Iterator<Item = &T>> = if left {
            Box::new(v.iter().take(n))
        } else {
            Box::new(v.iter().rev().take(n))
        };
        it.map(|t| t.abs().f64()).sum()
    };
    if let crate::qcore::Window::Adaptive { .. } = policy.window {
        let step = 5;
        let mut hi = hi;
        loop {
            let left_ok = terms.iter().take(3).all(|t| t.abs() < tol);
            let right_ok = terms.iter().rev().take(3).all(|t| t.abs() < tol);
            if left_ok && right_ok {
                break;
            }
            if terms.len() + step > policy.max_terms {
                return Err(QError::NonConvergent(policy.max_terms));
            }
            if !left_ok {
                for _ in 0..step {
                    lo -= 1;
                    terms.push_front(term(lo));
                }
            }
            if !right_ok {
                for _ in 0..step {
                    hi += 1;
                    terms.push_back(term(hi));
                }
            }
        }
    }
    let mut sum = T::zero();
    for t in &terms {
        sum = sum + *t;
    }
    let est = 2.0 * (edge(&terms, true) + edge(&terms, false));
    Ok(SeriesResult {
        value: sum,
        est_error: est,
        terms_used: terms.len(),
        converged: est <= policy.tail_tol * 6.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext<f64> {
        QContext::new(q).unwrap()
    }

    #[test]
    fn rejects_q_outside_unit_interval() {
        assert!(QContext::<f64>::new(1.0).is_err());
        assert!(QContext::<f64>::new(0.0).is_err());
        assert!(QContext::<f64>::new(-0.2).is_err());
    }

    #[test]
    fn finite_products() {
        let c = ctx(0.5);
        assert_eq!(qpoch_finite(0.7, &c, 0), 1.0);
        assert_eq!(qpoch_finite(0.5, &c, 2), 0.375);
        assert_eq!(qpoch_finite(1.0, &c, 3), 0.0);
    }

    #[test]
    fn infinite_product_trivial_points() {
        let c = ctx(0.5);
        let p = TruncationPolicy::default();
        assert_eq!(qpoch_infinite(0.0, &c, &p).value, 1.0);
        assert_eq!(qpoch_infinite(1.0, &c, &p).value, 0.0);
    }

    #[test]
    fn terminating_series_stops_exactly() {
        let c = ctx(0.5);
        let p = TruncationPolicy::default();
        let r = rphis(&[QParam::Pow(0), QParam::Zero], &[QParam::Value(0.3)], &c, 0.9, &p).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.est_error, 0.0);
    }

    #[test]
    fn pole_is_reported() {
        let c = ctx(0.5);
        let p = TruncationPolicy::default();
        let r = rphis(&[QParam::Zero], &[QParam::Pow(-1)], &c, 0.3, &p);
        assert!(matches!(r, Err(QError::PoleInLowerParameter(2))));
    }

    #[test]
    fn geometric_bilateral() {
        let c = ctx(0.5);
        let p = TruncationPolicy::adaptive(-5, 5).with_tol(1e-15);
        let r = bilateral_sum(|x: i64| c.pow(x.abs()), &p).unwrap();
        assert!((r.value - 3.0).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn zero_bilateral() {
        let r = bilateral_sum(|_| 0.0f64, &TruncationPolicy::fixed(-3, 3)).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.est_error, 0.0);
    }
}
