//! Multivariate q-Bessel functions and the 3nj-symbols R and S built from
//! products of 6j-symbols, with their orthogonality, duality and the
//! multivariate Biedenharn–Elliott expansion.

use crate::check::Check;
use crate::coupling::{verify_biedenharn_elliott, Recoupler};
use crate::error::{QError, Result};
use crate::qcore::{bilateral_sum, QContext, SeriesResult, TruncationPolicy, Window};
use crate::qfunctions::{qbessel, BesselTable};
use crate::repr::cg_coefficient;
use crate::scalar::{sign, Real};
use std::collections::HashMap;

/// Integer vector with the reversal (hat) and drop-first (prime) accessors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn norm(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn hat(&self) -> Self {
        MultiIndex(hat(&self.0))
    }

    pub fn prime(&self) -> Self {
        MultiIndex(self.0[1..].to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn hat(v: &[i64]) -> Vec<i64> {
    v.iter().rev().copied().collect()
}

/// Order and lattice exponent of each factor of J_ν(x, λ); the boundary
/// conventions λ_0 = ν_0 and x_{d+1} = ν_{d+1} are applied here.
pub fn multi_factors(nu: &[i64], x: &[i64], lam: &[i64]) -> Vec<(i64, i64)> {
    let d = x.len();
    assert_eq!(nu.len(), d + 2, "nu needs d + 2 entries");
    assert_eq!(lam.len(), d, "lambda needs d entries");
    let xx = |j: usize| if j == d + 1 { nu[d + 1] } else { x[j - 1] };
    let ll = |j: usize| if j == 0 { nu[0] } else { lam[j - 1] };
    (1..=d)
        .map(|j| (nu[j] - xx(j + 1) - ll(j - 1), xx(j) - xx(j + 1) + ll(j) - ll(j - 1)))
        .collect()
}

/// J_ν(x, λ) in the base of `table`.
pub fn multi_qbessel_cached<T: Real>(nu: &[i64], x: &[i64], lam: &[i64], table: &mut BesselTable<T>) -> T {
    multi_factors(nu, x, lam)
        .into_iter()
        .fold(T::one(), |p, (o, y)| p * table.get(o, y))
}

pub fn multi_qbessel<T: Real>(nu: &[i64], x: &[i64], lam: &[i64], ctx: &QContext<T>) -> T {
    multi_qbessel_cached(nu, x, lam, &mut BesselTable::new(*ctx))
}

/// Nested sum Σ_{i_{n}} ⋯ Σ_{i_1} f(i), innermost index first, each level a
/// bilateral sum under `policy`.
pub fn nested_sum<T: Real, F: FnMut(&[i64]) -> T>(
    dims: usize,
    policy: &TruncationPolicy,
    mut f: F,
) -> Result<SeriesResult<T>> {
    let mut idx = vec![0i64; dims];
    let mut err: Option<QError> = None;
    let mut worst = 0.0f64;
    let mut ok = true;
    let top = level(dims, &mut idx, policy, &mut f, &mut err, &mut worst, &mut ok);
    if let Some(e) = err {
        return Err(e);
    }
    let top = top?;
    Ok(SeriesResult {
        value: top.value,
        est_error: top.est_error + worst,
        terms_used: top.terms_used,
        converged: top.converged && ok,
    })
}

fn level<T: Real, F: FnMut(&[i64]) -> T>(
    pos: usize,
    idx: &mut Vec<i64>,
    policy: &TruncationPolicy,
    f: &mut F,
    err: &mut Option<QError>,
    worst: &mut f64,
    ok: &mut bool,
) -> Result<SeriesResult<T>> {
    if pos == 0 {
        return Ok(SeriesResult::exact(f(idx), 1));
    }
    bilateral_sum(
        |v| {
            idx[pos - 1] = v;
            if pos == 1 {
                return f(idx);
            }
            match level(pos - 1, idx, policy, f, err, worst, ok) {
                Ok(r) => {
                    *worst = worst.max(r.est_error);
                    *ok &= r.converged;
                    r.value
                }
                Err(e) => {
                    err.get_or_insert(e);
                    T::zero()
                }
            }
        },
        policy,
    )
}

/// Σ_x J_ν(x,λ) J_ν(x,λ') q^{x_1} against δ_{λλ'} q^{ν_{d+1}+ν_0−λ_d}.
pub fn multi_orthogonality<T: Real>(
    nu: &[i64],
    lam: &[i64],
    lam2: &[i64],
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let d = lam.len();
    let ctx = *table.ctx();
    let s = nested_sum(d, policy, |x| {
        multi_qbessel_cached(nu, x, lam, table) * multi_qbessel_cached(nu, x, lam2, table) * ctx.pow(x[0])
    })?;
    let target = if lam == lam2 {
        ctx.pow(nu[d + 1] + nu[0] - lam[d - 1])
    } else {
        T::zero()
    };
    Ok(Check::against_sum(target, s))
}

/// The same sum with every factor's argument exponent halved, the variant
/// that appears inside the induction argument. Evaluated on a fixed window.
pub fn multi_orthogonality_halved<T: Real>(
    nu: &[i64],
    lam: &[i64],
    lam2: &[i64],
    ctx: &QContext<T>,
    window: (i64, i64),
) -> Result<Check<T>> {
    let d = lam.len();
    let mut cache: HashMap<(i64, i64), T> = HashMap::new();
    let mut j = |o: i64, e2: i64| *cache.entry((o, e2)).or_insert_with(|| qbessel(o, ctx.pow_half(e2), ctx));
    let policy = TruncationPolicy::fixed(window.0, window.1);
    let s = nested_sum(d, &policy, |x| {
        let a: T = multi_factors(nu, x, lam).into_iter().fold(T::one(), |p, (o, y)| p * j(o, y));
        let b: T = multi_factors(nu, x, lam2).into_iter().fold(T::one(), |p, (o, y)| p * j(o, y));
        a * b * ctx.pow(x[0])
    })?;
    let target = if lam == lam2 {
        ctx.pow(nu[d + 1] + nu[0] - lam[d - 1])
    } else {
        T::zero()
    };
    Ok(Check::against_sum(target, s))
}

/// J_ν(x,λ) vs J_{ν̂}(λ̂, x̂).
pub fn self_duality<T: Real>(nu: &[i64], x: &[i64], lam: &[i64], table: &mut BesselTable<T>) -> Check<T> {
    let a = multi_qbessel_cached(nu, x, lam, table);
    let b = multi_qbessel_cached(&hat(nu), &hat(lam), &hat(x), table);
    Check::exact(a, b)
}

fn check_3nj(n: &[i64], r: &[i64], s: &[i64]) -> usize {
    let k = r.len();
    assert!(k >= 1, "3nj-symbols need k >= 1");
    assert_eq!(s.len(), k, "r and s must have equal length");
    assert_eq!(n.len(), k + 2, "n needs k + 2 entries");
    k
}

/// R^{x,n}_{r,s} = Π_j R^{x,s_{j−1},n_{j+1},r_{j+1}}_{r_j,s_j}, s_0 = n_1, r_{k+1} = n_{k+2}.
pub fn threenj_r<T: Real>(x: i64, n: &[i64], r: &[i64], s: &[i64], rc: &mut Recoupler<T>) -> T {
    let k = check_3nj(n, r, s);
    let s_ = |j: usize| if j == 0 { n[0] } else { s[j - 1] };
    let r_ = |j: usize| if j == k + 1 { n[k + 1] } else { r[j - 1] };
    (1..=k).fold(T::one(), |p, j| p * rc.r(x, s_(j - 1), n[j], r_(j + 1), r_(j), s_(j)))
}

/// S^{x,n}_{r,s} = Π_j R^{s_{j+1},n_1,r_{j−1},n_{j+2}}_{r_j,s_j}, s_{k+1} = x, r_0 = n_2.
pub fn threenj_s<T: Real>(x: i64, n: &[i64], r: &[i64], s: &[i64], rc: &mut Recoupler<T>) -> T {
    let k = check_3nj(n, r, s);
    let s_ = |j: usize| if j == k + 1 { x } else { s[j - 1] };
    let r_ = |j: usize| if j == 0 { n[1] } else { r[j - 1] };
    (1..=k).fold(T::one(), |p, j| p * rc.r(s_(j + 1), n[0], r_(j - 1), n[j + 1], r_(j), s_(j)))
}

/// ν(x, n) = (n_1, x+n_2, …, x+n_{k+1}, n_{k+2}).
pub fn nu_of(x: i64, n: &[i64]) -> Vec<i64> {
    let k = n.len() - 2;
    let mut v = vec![n[0]];
    v.extend(n[1..=k].iter().map(|m| x + m));
    v.push(n[k + 1]);
    v
}

/// R^{x,n}_{r,s} vs (−q)^{r_1+s_k−n_1−n_{k+2}} J_{ν(x,n)}(r, s; q²).
pub fn corollary_bridge<T: Real>(x: i64, n: &[i64], r: &[i64], s: &[i64], rc: &mut Recoupler<T>) -> Check<T> {
    let k = check_3nj(n, r, s);
    let a = threenj_r(x, n, r, s, rc);
    let e = r[0] + s[k - 1] - n[0] - n[k + 1];
    let ctx = *rc.ctx();
    let mut t2 = BesselTable::new(ctx.squared());
    let b = sign::<T>(e) * ctx.pow(e) * multi_qbessel_cached(&nu_of(x, n), r, s, &mut t2);
    Check::exact(a, b)
}

/// R^{x,n}_{r,s} vs R^{x,n̂}_{ŝ,r̂}.
pub fn threenj_duality<T: Real>(x: i64, n: &[i64], r: &[i64], s: &[i64], rc: &mut Recoupler<T>) -> Check<T> {
    Check::exact(threenj_r(x, n, r, s, rc), threenj_r(x, &hat(n), &hat(s), &hat(r), rc))
}

/// Split k = k1 + k2: R^{x,n}_{r,s} vs R^{x,(n¹,r_{k1+1})}_{r¹,s¹} R^{x,(s_{k1},n²)}_{r²,s²}.
pub fn threenj_factorization<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    k1: usize,
    rc: &mut Recoupler<T>,
) -> Check<T> {
    let k = check_3nj(n, r, s);
    assert!(k1 >= 1 && k1 < k, "split point must leave both halves non-empty");
    let mut na = n[..=k1].to_vec();
    na.push(r[k1]);
    let mut nb = vec![s[k1 - 1]];
    nb.extend_from_slice(&n[k1 + 1..]);
    let whole = threenj_r(x, n, r, s, rc);
    let split = threenj_r(x, &na, &r[..k1], &s[..k1], rc) * threenj_r(x, &nb, &r[k1..], &s[k1..], rc);
    Check::exact(whole, split)
}

/// Σ_r R^{x,n}_{r,s} R^{x,n}_{r,s'} vs δ_{s,s'}.
pub fn threenj_orthogonality<T: Real>(
    x: i64,
    n: &[i64],
    s: &[i64],
    s2: &[i64],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let v = nested_sum(s.len(), policy, |r| threenj_r(x, n, r, s, rc) * threenj_r(x, n, r, s2, rc))?;
    Ok(Check::against_sum(if s == s2 { T::one() } else { T::zero() }, v))
}

/// Σ_r S^{x,n}_{r,s} S^{x,n}_{r,s'} vs δ_{s,s'}.
pub fn s_orthogonality<T: Real>(
    x: i64,
    n: &[i64],
    s: &[i64],
    s2: &[i64],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let v = nested_sum(s.len(), policy, |r| threenj_s(x, n, r, s, rc) * threenj_s(x, n, r, s2, rc))?;
    Ok(Check::against_sum(if s == s2 { T::one() } else { T::zero() }, v))
}

/// R^{x,n}_{r,s} = Σ_{t∈ℤ^{k−1}} S^{x,n}_{(t,r_1),s} R^{r_1,n'}_{r',t}.
pub fn verify_multivariate_be<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let k = check_3nj(n, r, s);
    if k < 2 {
        return Err(QError::Domain("multivariate Biedenharn-Elliott needs k >= 2".into()));
    }
    let lhs = threenj_r(x, n, r, s, rc);
    let rhs = nested_sum(k - 1, policy, |t| {
        let mut tr = t.to_vec();
        tr.push(r[0]);
        threenj_s(x, n, &tr, s, rc) * threenj_r(r[0], &n[1..], &r[1..], t, rc)
    })?;
    Ok(Check::against_sum(lhs, rhs))
}

/// Which A-coefficient to use in the q-Bessel form of the multivariate
/// Biedenharn–Elliott expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeCoefficient {
    /// Exponent |t|+|s|−|n|−(k−2)n_1−s_k+r_2 and orders s_{j+1}−n_1+t_{j−1}+n_{j+2}.
    AsPrinted,
    /// Exponent gains t_{k−1}; orders use −n_{j+2}. This is what the S-form implies.
    Corrected,
}

/// A^{r_1}_{t,s} for t ∈ ℤ^{k−1}, in base q.
pub fn multi_be_coefficient<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    t: &[i64],
    variant: BeCoefficient,
    table: &mut BesselTable<T>,
) -> T {
    let k = r.len();
    let ctx = *table.ctx();
    let tt = |j: usize| match j {
        0 => n[1],
        j if j == k => r[0],
        j => t[j - 1],
    };
    let ss = |j: usize| if j == k + 1 { x } else { s[j - 1] };
    let mut e: i64 = t.iter().sum::<i64>() + s.iter().sum::<i64>() - n.iter().sum::<i64>()
        - (k as i64 - 2) * n[0]
        - s[k - 1]
        + r[1];
    let order_sign = match variant {
        BeCoefficient::AsPrinted => 1,
        BeCoefficient::Corrected => {
            e += tt(k - 1);
            -1
        }
    };
    let mut a = sign::<T>(e) * ctx.pow_half(e);
    for j in 1..=k {
        a = a * table.get(
            ss(j + 1) - n[0] + tt(j - 1) + order_sign * n[j + 1],
            ss(j) + tt(j) - n[0] - n[j + 1],
        );
    }
    a
}

/// J_{ν(x,n)}(r,s) vs Σ_t A^{r_1}_{t,s} J_{ν(r_1,n')}(r', t), all in base q.
pub fn verify_multivariate_be_j<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    variant: BeCoefficient,
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let k = check_3nj(n, r, s);
    if k < 2 {
        return Err(QError::Domain("multivariate Biedenharn-Elliott needs k >= 2".into()));
    }
    let lhs = multi_qbessel_cached(&nu_of(x, n), r, s, table);
    let inner_nu = nu_of(r[0], &n[1..]);
    let rhs = nested_sum(k - 1, policy, |t| {
        multi_be_coefficient(x, n, r, s, t, variant, table) * multi_qbessel_cached(&inner_nu, &r[1..], t, table)
    })?;
    Ok(Check::against_sum(lhs, rhs))
}

/// The one-variable parameters (P, Q, R, ν, μ1, μ2) that a k = 2 instance maps to,
/// together with the prefactor exponent e in R^{x,n}_{r,s} = (−q)^e J J.
pub fn be_parameter_map(x: i64, n: &[i64], r: &[i64], s: &[i64]) -> ([i64; 3], i64, i64, i64, i64) {
    assert!(r.len() == 2 && s.len() == 2 && n.len() == 4);
    let pqr = [r[0] - n[0], r[1] - s[0], n[3] - s[1]];
    let nu = x - n[0];
    let mu1 = n[1] - r[1];
    let mu2 = n[0] - s[0] + n[2] - n[3];
    let e = r[0] + s[1] - n[0] - n[3];
    (pqr, nu, mu1, mu2, e)
}

/// Cross-match of a k = 2 multivariate instance with the one-variable
/// product formula in base q². Returns the larger of the two side mismatches.
pub fn be_cross_match<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let (pqr, nu, mu1, mu2, e) = be_parameter_map(x, n, r, s);
    let ctx = *rc.ctx();
    let pref = sign::<T>(e) * ctx.pow(e);
    let multi = verify_multivariate_be(x, n, r, s, rc, policy)?;
    let mut rc2 = Recoupler::new(ctx.squared());
    let one = verify_biedenharn_elliott(pqr, nu, mu1, mu2, &mut rc2, policy)?;
    Ok(((multi.lhs - pref * one.lhs).abs().f64()).max((multi.rhs - pref * one.rhs).abs().f64()))
}

/// n_j = (n_{k+3−j}, …, n_{k+2}, n_1, …, n_{k+2−j}): rotation right by j.
pub fn rotate_labels(n: &[i64], j: usize) -> Vec<i64> {
    let mut v = n.to_vec();
    let len = v.len();
    v.rotate_right(j % len);
    v
}

/// S^{x,n}_{s,r} vs Σ_{s_k} ⋯ Σ_{s_1} Π_{j=1}^{k+1} S^{x,n_j}_{s_{j−1},s_j}, s_0 = r, s_{k+1} = s.
/// The k² summation indices run over the fixed window of `policy`.
pub fn verify_s_composition<T: Real>(
    x: i64,
    n: &[i64],
    r: &[i64],
    s: &[i64],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let k = check_3nj(n, r, s);
    let lhs = threenj_s(x, n, s, r, rc);
    let (lo, hi) = policy.window.bounds();
    let fixed = TruncationPolicy {
        window: Window::Fixed { lo, hi },
        ..*policy
    };
    let rot: Vec<Vec<i64>> = (1..=k + 1).map(|j| rotate_labels(n, j)).collect();
    let rhs = nested_sum(k * k, &fixed, |flat| {
        let chain = |j: usize| -> Vec<i64> {
            if j == 0 {
                r.to_vec()
            } else if j == k + 1 {
                s.to_vec()
            } else {
                flat[(j - 1) * k..j * k].to_vec()
            }
        };
        (1..=k + 1).fold(T::one(), |p, j| p * threenj_s(x, &rot[j - 1], &chain(j - 1), &chain(j), rc))
    })?;
    Ok(Check::against_sum(lhs, rhs))
}

/// C_{x,r,n} = Π_{j=1}^{k+1} C_{r_{j−1},n_j,r_j}, r_0 = x, r_{k+1} = n_{k+2}.
pub fn multi_cg<T: Real>(x: i64, r: &[i64], n: &[i64], ctx: &QContext<T>) -> T {
    let k = r.len();
    assert_eq!(n.len(), k + 2);
    let rr = |j: usize| match j {
        0 => x,
        j if j == k + 1 => n[k + 1],
        j => r[j - 1],
    };
    (1..=k + 1).fold(T::one(), |p, j| p * cg_coefficient(rr(j - 1), n[j - 1], rr(j), ctx))
}

/// C_{x,r,n} vs Σ_s R^{x,n}_{r,s} C_{x,ŝ,n̂}; negative s are killed by the
/// zero convention, so each s_j runs over 0..=hi.
pub fn cg_expansion<T: Real>(
    x: i64,
    r: &[i64],
    n: &[i64],
    hi: i64,
    rc: &mut Recoupler<T>,
) -> Result<Check<T>> {
    let ctx = *rc.ctx();
    let lhs = multi_cg(x, r, n, &ctx);
    let policy = TruncationPolicy::fixed(0, hi);
    let rhs = nested_sum(r.len(), &policy, |s| threenj_r(x, n, r, s, rc) * multi_cg(x, &hat(s), &hat(n), &ctx))?;
    Ok(Check::against_sum(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_accessors() {
        let v = MultiIndex(vec![1, -2, 5]);
        assert_eq!(v.hat().hat(), v);
        assert_eq!(v.hat().norm(), v.norm());
        assert_eq!(v.prime().len(), 2);
    }

    #[test]
    fn single_factor_reduces() {
        let f = multi_factors(&[1, 2, 3], &[4], &[5]);
        assert_eq!(f, vec![(2 - 3 - 1, 4 - 3 + 5 - 1)]);
    }

    #[test]
    fn rotation_cycles() {
        let n = vec![1, 2, 3, 4];
        assert_eq!(rotate_labels(&n, 1), vec![4, 1, 2, 3]);
        assert_eq!(rotate_labels(&n, 4), n);
    }

    #[test]
    fn cg_product_zero_convention() {
        let c = QContext::<f64>::new(0.5).unwrap();
        assert_eq!(multi_cg(1, &[-1], &[0, 1, 2], &c), 0.0);
    }
}
