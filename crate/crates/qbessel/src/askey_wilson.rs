//! Askey–Wilson polynomials in one and d variables, and the numerical limit
//! transition from the d-variable polynomials to multivariate q-Bessel functions.

use crate::error::{QError, Result};
use crate::multivariate::multi_factors;
use crate::qcore::{qpoch_finite, qpoch_inf, QContext};
use crate::qfunctions::BesselTable;
use crate::scalar::Real;

/// p_n(x; a, b, c, d | q), with x the symmetric variable (the polynomial is in x + 1/x).
///
/// Evaluated as a^{−n} Σ_k (q^{−n}, abcdq^{n−1}, ax, a/x; q)_k q^k/(q;q)_k
/// · (abq^k, acq^k, adq^k; q)_{n−k}, which clears the lower parameters of the
/// ₄φ₃ and so never divides by (ab;q)_k.
pub fn aw_poly<T: Real>(n: usize, x: T, a: T, b: T, c: T, d: T, ctx: &QContext<T>) -> Result<T> {
    if a.is_zero() || x.is_zero() {
        return Err(QError::Domain("a and x must be non-zero".into()));
    }
    let q = ctx.q();
    let qn = ctx.pow(-(n as i64));
    let abcd = a * b * c * d * ctx.pow(n as i64 - 1);
    // (1 − axq^k)(1 − aq^k/x) through the symmetric variable only
    let sym = x + x.recip();
    let mut s = T::zero();
    let mut up = T::one(); // (q^{−n}, abcdq^{n−1}, ax, a/x; q)_k q^k / (q;q)_k
    let mut qk = T::one();
    for k in 0..=n {
        let rest = qpoch_finite(a * b * qk, ctx, n - k) * qpoch_finite(a * c * qk, ctx, n - k) * qpoch_finite(a * d * qk, ctx, n - k);
        s = s + up * rest;
        let aq = a * qk;
        up = up * (T::one() - qn * qk) * (T::one() - abcd * qk) * (T::one() - aq * sym + aq * aq) * q / (T::one() - q * qk);
        qk = qk * q;
    }
    Ok(s / a.powi(n as i32))
}

/// The same polynomial from the textbook ₄φ₃ with explicit lower parameters.
/// An independent summation path for cross-checks.
pub fn aw_poly_direct<T: Real>(n: usize, x: T, a: T, b: T, c: T, d: T, ctx: &QContext<T>) -> Result<T> {
    let q = ctx.q();
    let (ab, ac, ad) = (a * b, a * c, a * d);
    for k in 0..n {
        let qk = ctx.pow(k as i64);
        for (i, v) in [ab, ac, ad].into_iter().enumerate() {
            if (T::one() - v * qk).abs().f64() < 1e-14 {
                return Err(QError::PoleInLowerParameter(i + 1));
            }
        }
    }
    let qn = ctx.pow(-(n as i64));
    let abcd = a * b * c * d * ctx.pow(n as i64 - 1);
    let mut s = T::zero();
    let mut term = T::one();
    let mut qk = T::one();
    for _ in 0..=n {
        s = s + term;
        term = term * (T::one() - qn * qk) * (T::one() - abcd * qk) * (T::one() - a * x * qk) * (T::one() - a / x * qk) * q
            / ((T::one() - q * qk) * (T::one() - ab * qk) * (T::one() - ac * qk) * (T::one() - ad * qk));
        qk = qk * q;
    }
    let pre = qpoch_finite(ab, ctx, n) * qpoch_finite(ac, ctx, n) * qpoch_finite(ad, ctx, n) / a.powi(n as i32);
    Ok(pre * s)
}

/// P_d(n; x; α | q) = Π_j p_{n_j}(x_j; α_j q^{N_{j−1}}, α_j/α_0² q^{N_{j−1}}, (α_{j+1}/α_j) x_{j+1}^{±1}),
/// with α = (α_0, …, α_{d+2}) and x_{d+1} = α_{d+2}.
pub fn multi_aw<T: Real>(n: &[usize], x: &[T], alpha: &[T], ctx: &QContext<T>) -> Result<T> {
    let d = n.len();
    if x.len() != d || alpha.len() != d + 3 {
        return Err(QError::Domain(format!("need |x| = {d} and |alpha| = {}", d + 3)));
    }
    let xx = |j: usize| if j == d + 1 { alpha[d + 2] } else { x[j - 1] };
    let mut big_n = 0i64;
    let mut p = T::one();
    for j in 1..=d {
        let shift = ctx.pow(big_n);
        let ratio = alpha[j + 1] / alpha[j];
        p = p * aw_poly(
            n[j - 1],
            xx(j),
            alpha[j] * shift,
            alpha[j] / (alpha[0] * alpha[0]) * shift,
            ratio * xx(j + 1),
            ratio / xx(j + 1),
            ctx,
        )?;
        big_n += n[j - 1] as i64;
    }
    Ok(p)
}

/// Which substitution and normalizer to use in the limit transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitVariant {
    /// α(m), x(m) and C_m exactly as displayed with the statement of the limit.
    AsPrinted,
    /// Shifted last parameter and evaluation points, with a normalizer that
    /// cancels the growth of every factor; this is the variant that converges.
    Corrected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSchedule {
    pub nu: Vec<i64>,
    pub x: Vec<i64>,
    pub lambda: Vec<i64>,
    pub m_values: Vec<i64>,
    pub variant: LimitVariant,
}

impl LimitSchedule {
    pub fn new(nu: Vec<i64>, x: Vec<i64>, lambda: Vec<i64>) -> Self {
        Self {
            nu,
            x,
            lambda,
            m_values: (1..=8).collect(),
            variant: LimitVariant::Corrected,
        }
    }

    /// Λ_j = ν_0 − Σ_{k≤j} λ_k for j = 1..d.
    pub fn big_lambda(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .scan(self.nu[0], |acc, l| {
                *acc -= l;
                Some(*acc)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitPoint {
    pub m: i64,
    pub ratio: f64,
    pub target: f64,
    pub rel_error: f64,
}

/// (q;q)_∞^d Π_j q^{−y_j ν'_j/2} J_ν(x, Λ), where (ν'_j, y_j) are the order and
/// lattice exponent of the j-th factor of J_ν(x, Λ).
pub fn limit_target<T: Real>(nu: &[i64], x: &[i64], big_lambda: &[i64], ctx: &QContext<T>) -> T {
    let mut table = BesselTable::new(*ctx);
    let qq = qpoch_inf(ctx.q(), ctx);
    multi_factors(nu, x, big_lambda)
        .into_iter()
        .fold(T::one(), |p, (o, y)| p * qq * ctx.pow_half(-o * y) * table.get(o, y))
}

/// Decimal digits needed at step m: 15 + 2m·log10(1/q).
pub fn required_digits(m: i64, q: f64) -> u32 {
    (15.0 + 2.0 * m as f64 * (1.0 / q).log10()).ceil() as u32
}

/// P_d(λ+m; x(m); α(m)) / C_m for one m.
pub fn limit_ratio<T: Real>(s: &LimitSchedule, m: i64, ctx: &QContext<T>) -> Result<T> {
    let (nu, x, lam) = (&s.nu, &s.x, &s.lambda);
    let d = lam.len();
    if nu.len() != d + 2 || x.len() != d {
        return Err(QError::Domain("need |nu| = d + 2 and |x| = d".into()));
    }
    let n: Vec<usize> = lam
        .iter()
        .map(|l| usize::try_from(l + m).map_err(|_| QError::DegreeNegative(l + m)))
        .collect::<Result<_>>()?;
    let need = required_digits(m, ctx.q().f64());
    if need > T::DIGITS {
        return Err(QError::InsufficientPrecision(need));
    }
    let xx = |j: usize| if j == d + 1 { nu[d + 1] } else { x[j - 1] };
    // exponents in half units
    let mut a2: Vec<i64> = vec![-2 * m, nu[0]];
    a2.extend((1..=d).map(|j| nu[j] - 2 * j as i64 * m));
    let mut cm = T::one();
    let xm: Vec<T>;
    match s.variant {
        LimitVariant::AsPrinted => {
            a2.push(2 * (nu[d + 1] + m));
            xm = (1..=d).map(|j| ctx.pow_half(nu[j - 1] - 2 * (nu[0] + x[j - 1] - m))).collect();
            for j in 1..=d {
                let nj = lam[j - 1] + m;
                cm = cm
                    * ctx.pow_half((nu[j - 1] - 2 * (nu[j] - nu[0] - xx(j) + m)) * nj)
                    * qpoch_finite(ctx.pow(nu[j] - nu[j - 1] - 2 * m), ctx, nj as usize);
            }
        }
        LimitVariant::Corrected => {
            a2.push(nu[d] - 2 * (nu[0] + nu[d + 1] - m - 1));
            xm = (1..=d).map(|j| ctx.pow_half(nu[j - 1] - 2 * (nu[0] + x[j - 1] - m - 1))).collect();
            let mut big_l = 0;
            for j in 1..=d {
                let nj = lam[j - 1] + m;
                cm = cm
                    * ctx.pow_half(-(nu[j - 1] + 2 * big_l) * nj)
                    * qpoch_finite(ctx.pow(big_l + nu[0] + xx(j + 1) - 2 * m - 1), ctx, nj as usize);
                big_l += lam[j - 1];
            }
        }
    }
    if cm.is_zero() {
        return Err(QError::PoleInLowerParameter(0));
    }
    let alpha: Vec<T> = a2.into_iter().map(|e| ctx.pow_half(e)).collect();
    Ok(multi_aw(&n, &xm, &alpha, ctx)? / cm)
}

/// Relative error of the normalized ratio against the prefactored
/// multivariate q-Bessel target at every scheduled m. Points that hit a pole
/// or a negative degree are skipped.
pub fn limit_check<T: Real>(s: &LimitSchedule, ctx: &QContext<T>) -> Result<Vec<LimitPoint>> {
    if s.m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QError::Domain("m schedule must be strictly increasing".into()));
    }
    let target = limit_target(&s.nu, &s.x, &s.big_lambda(), ctx);
    let mut out = Vec::with_capacity(s.m_values.len());
    for &m in &s.m_values {
        let ratio = match limit_ratio(s, m, ctx) {
            Ok(r) => r,
            Err(QError::PoleInLowerParameter(_)) | Err(QError::DegreeNegative(_)) => continue,
            Err(e) => return Err(e),
        };
        let rel_error = if target.is_zero() {
            ratio.abs().f64()
        } else {
            ((ratio - target) / target).abs().f64()
        };
        out.push(LimitPoint {
            m,
            ratio: ratio.f64(),
            target: target.f64(),
            rel_error,
        });
    }
    Ok(out)
}

/// Smallest m* such that the error sequence is strictly decreasing from m* on.
pub fn monotone_onset(points: &[LimitPoint]) -> Option<i64> {
    let mut onset = points.first()?.m;
    for w in points.windows(2) {
        if w[1].rel_error >= w[0].rel_error {
            onset = w[1].m;
        }
    }
    Some(onset)
}

/// Ratio / target at each point: for the printed normalizer this is the
/// empirical constant the displayed prefactor would have to supply.
pub fn fitted_ratios(points: &[LimitPoint]) -> Vec<(i64, f64)> {
    points.iter().map(|p| (p.m, p.ratio / p.target)).collect()
}
