//! Wall polynomials and Jackson's third (Hahn–Exton) q-Bessel function for
//! integer order, plus the generating-function relations.

use crate::error::{QError, Result};
use crate::qcore::{
    bilateral_sum, qpoch_finite, qpoch_inf, rphis, QContext, QParam, SeriesResult,
    TruncationPolicy,
};
use crate::scalar::{sign, Real};
use std::collections::HashMap;

/// Gaussian binomial [n k]_q.
pub fn qbinomial<T: Real>(n: i64, k: i64, ctx: &QContext<T>) -> T {
    if k < 0 || k > n {
        return T::zero();
    }
    qpoch_finite(ctx.pow(n - k + 1), ctx, k as usize) / qpoch_finite(ctx.q(), ctx, k as usize)
}

/// J_ν(x; q) for real x ≥ 0 straight from the _1φ_1 definition; negative
/// orders go through the reflection formula once.
pub fn qbessel<T: Real>(nu: i64, x: T, ctx: &QContext<T>) -> T {
    assert!(x >= T::zero(), "q-Bessel argument must be non-negative");
    if nu < 0 {
        let n = -nu;
        return sign::<T>(n) * ctx.pow_half(n) * qbessel(n, x * ctx.pow(n), ctx);
    }
    let policy = TruncationPolicy::default().with_max_terms(2000);
    let phi = rphis(
        &[QParam::Zero],
        &[QParam::Pow(nu + 1)],
        ctx,
        ctx.q() * x,
        &policy,
    )
    .expect("1phi1 with q^(nu+1), nu >= 0, has no poles and always converges")
    .value;
    x.sqrt().powi(nu as i32) * qpoch_inf(ctx.pow(nu + 1), ctx) / qpoch_inf(ctx.q(), ctx) * phi
}

/// J_ν(q^y; q) on the lattice, via the pole-free expansion
/// J_ν(x) = x^{ν/2}/(q;q)_∞ Σ_k (−1)^k q^{k(k−1)/2+(ν+1)k} (q^{k+1}x;q)_∞/(q;q)_k.
/// For x = q^y the terms with k < −y vanish identically, and the exponents
/// are combined before exponentiation, so large arguments lose nothing.
pub fn qbessel_lattice<T: Real>(nu: i64, y: i64, ctx: &QContext<T>) -> T {
    if nu < 0 {
        let n = -nu;
        return sign::<T>(n) * ctx.pow_half(n) * qbessel_lattice(n, y + n, ctx);
    }
    let eps = T::eps();
    let k0 = (-y).max(0);
    let mut qq_k = qpoch_finite(ctx.q(), ctx, k0 as usize);
    let mut sum = T::zero();
    let mut quiet = 0;
    for k in k0..k0 + 400 {
        if k > k0 {
            qq_k = qq_k * (T::one() - ctx.pow(k));
        }
        let e2 = y * nu + k * (k - 1) + 2 * (nu + 1) * k;
        let t = sign::<T>(k) * ctx.pow_half(e2) * qpoch_inf(ctx.pow(k + 1 + y), ctx) / qq_k;
        sum = sum + t;
        if t.abs() <= eps * sum.abs() * T::c(0.5) || t == T::zero() {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum / qpoch_inf(ctx.q(), ctx)
}

/// Memo table for lattice q-Bessel values; most identity sums revisit the
/// same (ν, y) pairs many times.
#[derive(Debug, Clone)]
pub struct BesselTable<T> {
    ctx: QContext<T>,
    map: HashMap<(i64, i64), T>,
}

impl<T: Real> BesselTable<T> {
    pub fn new(ctx: QContext<T>) -> Self {
        Self {
            ctx,
            map: HashMap::new(),
        }
    }

    pub fn ctx(&self) -> &QContext<T> {
        &self.ctx
    }

    pub fn get(&mut self, nu: i64, y: i64) -> T {
        let ctx = self.ctx;
        *self
            .map
            .entry((nu, y))
            .or_insert_with(|| qbessel_lattice(nu, y, &ctx))
    }
}

/// p_n(q^x; a; q) as the terminating _2φ_1(q^{-n}, 0; aq; q, q^{x+1}).
pub fn wall_poly<T: Real>(n: usize, x: i64, a: T, ctx: &QContext<T>) -> Result<T> {
    let policy = TruncationPolicy::default();
    rphis(
        &[QParam::Pow(-(n as i64)), QParam::Zero],
        &[QParam::Value(a * ctx.q())],
        ctx,
        ctx.pow(x + 1),
        &policy,
    )
    .map(|r| r.value)
}

/// The second form, (−a)^n q^{n(n+1)/2}/(aq;q)_n · _2φ_0(q^{-n}, q^{-x}; −; q, q^x/a).
pub fn wall_poly_2phi0<T: Real>(n: usize, x: i64, a: T, ctx: &QContext<T>) -> Result<T> {
    let policy = TruncationPolicy::default();
    let ni = n as i64;
    let phi = rphis(
        &[QParam::Pow(-ni), QParam::Pow(-x)],
        &[],
        ctx,
        ctx.pow(x) / a,
        &policy,
    )?
    .value;
    Ok((-a).powi(n as i32) * ctx.pow_half(ni * (ni + 1)) / qpoch_finite(a * ctx.q(), ctx, n) * phi)
}

/// p̄_n(q^x; a; q), orthonormal in both n and x for 0 < a < 1/q.
pub fn wall_orthonormal<T: Real>(n: usize, x: usize, a: T, ctx: &QContext<T>) -> Result<T> {
    if !(a > T::zero() && a * ctx.q() < T::one()) {
        return Err(QError::Domain(format!(
            "Wall parameter a = {} must satisfy 0 < a < 1/q",
            a.f64()
        )));
    }
    let aq = a * ctx.q();
    let radicand = aq.powi(x as i32 - n as i32) * qpoch_inf(aq, ctx) * qpoch_finite(aq, ctx, n)
        / (qpoch_finite(ctx.q(), ctx, n) * qpoch_finite(ctx.q(), ctx, x));
    let p = wall_poly(n, x as i64, a, ctx)?;
    Ok(sign::<T>((n + x) as i64) * radicand.sqrt() * p)
}

/// p̄_n(q^x; q^α; q) for integer α ≥ 0 with the exponents folded together.
///
/// The _2φ_1 form alternates with growing terms once n > x, so that regime
/// switches to the _2φ_0 form, whose terms are dominated by the last one.
pub fn wall_orthonormal_lattice<T: Real>(n: i64, x: i64, alpha: i64, ctx: &QContext<T>) -> T {
    assert!(n >= 0 && x >= 0 && alpha >= 0);
    let a1 = ctx.pow(alpha + 1);
    let q = ctx.q();
    let pref = sign::<T>(n + x)
        * (qpoch_inf(a1, ctx) * qpoch_finite(a1, ctx, n as usize)
            / (qpoch_finite(q, ctx, n as usize) * qpoch_finite(q, ctx, x as usize)))
        .sqrt();
    let mut s = T::zero();
    if x >= n {
        for k in 0..=n {
            let e2 = (alpha + 1) * (x - n) - 2 * n * k + k * (k - 1) + 2 * (x + 1) * k;
            s = s + sign::<T>(k) * qbinomial(n, k, ctx) / qpoch_finite(a1, ctx, k as usize)
                * ctx.pow_half(e2);
        }
    } else {
        for k in 0..=x {
            let e2 = (alpha + 1) * (x - n) + 2 * alpha * n + n * (n + 1) - 2 * n * k + k * (k - 1)
                - 2 * alpha * k;
            s = s + sign::<T>(n + k)
                * qbinomial(n, k, ctx)
                * qbinomial(x, k, ctx)
                * qpoch_finite(q, ctx, k as usize)
                * ctx.pow_half(e2);
        }
        s = s / qpoch_finite(a1, ctx, n as usize);
    }
    pref * s
}

fn one_sided<T: Real, F: FnMut(usize) -> T>(
    mut term: F,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let eps = T::eps();
    let mut sum = T::zero();
    let mut tail = [0.0f64; 3];
    let mut quiet = 0;
    for m in 0..policy.max_terms {
        let t = term(m);
        sum = sum + t;
        tail.rotate_left(1);
        tail[2] = t.abs().f64();
        if t.abs() <= eps * sum.abs() || t == T::zero() {
            quiet += 1;
            if quiet >= 3 {
                let est = 2.0 * tail.iter().sum::<f64>();
                return Ok(SeriesResult {
                    value: sum,
                    est_error: est,
                    terms_used: m + 1,
                    converged: true,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(QError::NonConvergent(policy.max_terms))
}

/// Pole-free x^{ν/2}(q^{ν+1};q)_∞/((q,t;q)_∞) · _1φ_1(t; q^{ν+1}; q, qx), valid for
/// every integer ν because (q^{ν+1};q)_∞/(q^{ν+1};q)_k = (q^{ν+1+k};q)_∞.
fn genfun_rhs<T: Real>(nu: i64, x: T, t: T, ctx: &QContext<T>, policy: &TruncationPolicy) -> Result<T> {
    let q = ctx.q();
    let mut tk = T::one();
    let mut qk = T::one();
    let s = one_sided(
        |k| {
            let ki = k as i64;
            if k > 0 {
                tk = tk * (T::one() - t * ctx.pow(ki - 1));
                qk = qk * (T::one() - ctx.pow(ki));
            }
            let head = sign::<T>(ki) * ctx.pow_half(ki * (ki - 1)) * (q * x).powi(k as i32);
            tk * head * qpoch_inf(ctx.pow(nu + 1 + ki), ctx) / qk
        },
        policy,
    )?;
    Ok(x.sqrt().powi(nu as i32) / (qpoch_inf(q, ctx) * qpoch_inf(t, ctx)) * s.value)
}

/// |Σ_m q^{−νm/2} J_ν(xq^m) t^m/(q;q)_m − x^{ν/2}(q^{ν+1};q)_∞/(q,t;q)_∞ · _1φ_1(t; q^{ν+1}; q, qx)|.
pub fn genfun_check<T: Real>(
    nu: i64,
    x: T,
    t: T,
    ctx: &QContext<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    if t.abs() >= T::one() {
        return Err(QError::Domain("generating function needs |t| < 1".into()));
    }
    if nu < 0 && x <= T::zero() {
        return Err(QError::Domain("negative order needs x > 0".into()));
    }
    let mut qq = T::one();
    let lhs = one_sided(
        |m| {
            let mi = m as i64;
            if m > 0 {
                qq = qq * (T::one() - ctx.pow(mi));
            }
            ctx.pow_half(-nu * mi) * qbessel(nu, x * ctx.pow(mi), ctx) * t.powi(m as i32) / qq
        },
        policy,
    )?;
    let rhs = genfun_rhs(nu, x, t, ctx, policy)?;
    Ok(SeriesResult {
        value: (lhs.value - rhs).abs(),
        est_error: lhs.est_error,
        terms_used: lhs.terms_used,
        converged: lhs.converged,
    })
}

/// The Wall-polynomial specialisation t = q^{ν+1} of the generating function.
pub fn wall_genfun_check<T: Real>(
    n: usize,
    nu: i64,
    x: T,
    ctx: &QContext<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    if nu < 0 {
        return Err(QError::Domain("t = q^(nu+1) needs nu >= 0".into()));
    }
    let order = nu - n as i64;
    if order < 0 && x <= T::zero() {
        return Err(QError::Domain("negative order needs x > 0".into()));
    }
    let mut qq = T::one();
    let lhs = one_sided(
        |m| {
            let mi = m as i64;
            if m > 0 {
                qq = qq * (T::one() - ctx.pow(mi));
            }
            ctx.pow_half(-order * mi) * qbessel(order, x * ctx.pow(mi), ctx) * ctx.pow(mi * (nu + 1))
                / qq
        },
        policy,
    )?;
    let rhs = x.sqrt().powi(order as i32) * qpoch_inf(ctx.q() * x, ctx) / qpoch_inf(ctx.q(), ctx)
        * wall_poly(n, nu, x, ctx)?;
    Ok(SeriesResult {
        value: (lhs.value - rhs).abs(),
        est_error: lhs.est_error,
        terms_used: lhs.terms_used,
        converged: lhs.converged,
    })
}

/// Σ_{x∈ℤ} J_ν(q^{x+m}) J_ν(q^{x+n}) q^x, returned raw.
pub fn hankel_inner<T: Real>(
    nu: i64,
    m: i64,
    n: i64,
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let ctx = *table.ctx();
    bilateral_sum(|x| table.get(nu, x + m) * table.get(nu, x + n) * ctx.pow(x), policy)
}

/// |Σ_x J_ν(q^{x+m})J_ν(q^{x+n})q^x − δ_{mn} q^{−n}|.
pub fn hankel_orthogonality<T: Real>(
    nu: i64,
    m: i64,
    n: i64,
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let ctx = *table.ctx();
    let s = hankel_inner(nu, m, n, table, policy)?;
    let target = if m == n { ctx.pow(-n) } else { T::zero() };
    Ok(SeriesResult {
        value: (s.value - target).abs(),
        ..s
    })
}
