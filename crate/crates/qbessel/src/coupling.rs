//! 6j-symbols in closed form, the binary coupling-tree calculus, and the
//! summation identities (backcoupling, Biedenharn–Elliott, hexagon,
//! Yang–Baxter, q-Hankel factorisation) evaluated numerically.
//!
//! Every identity is evaluated exactly as it is usually stated. Some of them
//! do not hold; the residuals say so, and nothing here hides that.

use crate::check::Check;
use crate::error::{QError, Result};
use crate::qcore::{bilateral_sum, QContext, SeriesResult, TruncationPolicy};
use crate::qfunctions::{qbessel_lattice, BesselTable};
use crate::repr::cg_coefficient;
use crate::scalar::{sign, Real};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// R_{p1,r1;p2,r2} = δ_{r1,r2} (−q)^{p1−p2} J_{r1}(q^{2p1−2p2}; q²).
pub fn sixj_closed<T: Real>(p1: i64, r1: i64, p2: i64, r2: i64, ctx: &QContext<T>) -> T {
    if r1 != r2 {
        return T::zero();
    }
    let e = p1 - p2;
    sign::<T>(e) * ctx.pow(e) * qbessel_lattice(r1, e, &ctx.squared())
}

/// Tree-move weight R^{x,n1,n2,n3}_{a,b} = (−q)^{a+b−n1−n3} J_{x−n1+n2−n3}(q^{2(a+b−n1−n3)}; q²).
pub fn recoupling_r<T: Real>(x: i64, n1: i64, n2: i64, n3: i64, a: i64, b: i64, ctx: &QContext<T>) -> T {
    let e = a + b - n1 - n3;
    sign::<T>(e) * ctx.pow(e) * qbessel_lattice(x - n1 + n2 - n3, e, &ctx.squared())
}

/// Cached evaluator for 6j-symbols (base q²) and q-Bessel values (base q).
#[derive(Debug, Clone)]
pub struct Recoupler<T> {
    ctx: QContext<T>,
    base_q: BesselTable<T>,
    base_q2: BesselTable<T>,
}

impl<T: Real> Recoupler<T> {
    pub fn new(ctx: QContext<T>) -> Self {
        Self {
            ctx,
            base_q: BesselTable::new(ctx),
            base_q2: BesselTable::new(ctx.squared()),
        }
    }

    pub fn ctx(&self) -> &QContext<T> {
        &self.ctx
    }

    /// J_ν(q^y; q).
    pub fn j(&mut self, nu: i64, y: i64) -> T {
        self.base_q.get(nu, y)
    }

    /// J_ν(q^{2y}; q²).
    pub fn j2(&mut self, nu: i64, y: i64) -> T {
        self.base_q2.get(nu, y)
    }

    pub fn sixj(&mut self, p1: i64, r1: i64, p2: i64, r2: i64) -> T {
        if r1 != r2 {
            return T::zero();
        }
        let e = p1 - p2;
        sign::<T>(e) * self.ctx.pow(e) * self.j2(r1, e)
    }

    pub fn r(&mut self, x: i64, n1: i64, n2: i64, n3: i64, a: i64, b: i64) -> T {
        let e = a + b - n1 - n3;
        sign::<T>(e) * self.ctx.pow(e) * self.j2(x - n1 + n2 - n3, e)
    }
}

/// Labelled full binary tree; leaves carry tensor-factor labels, internal
/// nodes carry intermediate coupling labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf(i64),
    Node {
        label: i64,
        left: Box<BinaryTree>,
        right: Box<BinaryTree>,
    },
}

impl BinaryTree {
    pub fn leaf(n: i64) -> Self {
        BinaryTree::Leaf(n)
    }

    pub fn node(label: i64, left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node {
            label,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn label(&self) -> i64 {
        match self {
            BinaryTree::Leaf(n) => *n,
            BinaryTree::Node { label, .. } => *label,
        }
    }

    pub fn leaves(&self) -> Vec<i64> {
        match self {
            BinaryTree::Leaf(n) => vec![*n],
            BinaryTree::Node { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    /// Swap the two children of the root.
    pub fn flip(&self) -> Self {
        match self {
            BinaryTree::Leaf(_) => self.clone(),
            BinaryTree::Node { label, left, right } => BinaryTree::Node {
                label: *label,
                left: right.clone(),
                right: left.clone(),
            },
        }
    }

    /// Two-leaf trees are Clebsch–Gordan coefficients C_{x,n1,n2}.
    pub fn cg_value<T: Real>(&self, ctx: &QContext<T>) -> Option<T> {
        match self {
            BinaryTree::Node { label, left, right } => match (&**left, &**right) {
                (BinaryTree::Leaf(a), BinaryTree::Leaf(b)) => Some(cg_coefficient(*label, *a, *b, ctx)),
                _ => None,
            },
            BinaryTree::Leaf(_) => None,
        }
    }

    /// Right comb x(n1, p1'(n2, n3)), the 1(23) coupling.
    pub fn right_comb(x: i64, n: [i64; 3], p1: i64) -> Self {
        Self::node(x, Self::leaf(n[0]), Self::node(p1, Self::leaf(n[1]), Self::leaf(n[2])))
    }

    /// Left comb x(p2'(n1, n2), n3), the (12)3 coupling.
    pub fn left_comb(x: i64, n: [i64; 3], p2: i64) -> Self {
        Self::node(x, Self::node(p2, Self::leaf(n[0]), Self::leaf(n[1])), Self::leaf(n[2]))
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryTree::Leaf(n) => write!(f, "{n}"),
            BinaryTree::Node { label, left, right } => write!(f, "{label}({left}, {right})"),
        }
    }
}

/// Racah backcoupling in q-Bessel form:
/// J_{r123}(q^{p1+p2}) vs Σ_p J_{r132}(q^{p+p1}) J_{r312}(q^{p+p2}) q^p.
pub fn verify_backcoupling<T: Real>(
    x: i64,
    n: [i64; 3],
    p1: i64,
    p2: i64,
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let r = |i: usize, j: usize, k: usize| x - n[i] + n[j] - n[k];
    let (r123, r132, r312) = (r(0, 1, 2), r(0, 2, 1), r(2, 0, 1));
    let ctx = *rc.ctx();
    let lhs = rc.j(r123, p1 + p2);
    let rhs = bilateral_sum(|p| rc.j(r132, p + p1) * rc.j(r312, p + p2) * ctx.pow(p), policy)?;
    Ok(Check::against_sum(lhs, rhs))
}

/// Backcoupling in tree-label form: R^{x,n1,n2,n3}_{p1,p2} vs
/// Σ_p R^{x,n1,n3,n2}_{p1,p} R^{x,n3,n1,n2}_{p,p2}.
pub fn verify_backcoupling_r<T: Real>(
    x: i64,
    n: [i64; 3],
    p1: i64,
    p2: i64,
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let [n1, n2, n3] = n;
    let lhs = rc.r(x, n1, n2, n3, p1, p2);
    let rhs = bilateral_sum(|p| rc.r(x, n1, n3, n2, p1, p) * rc.r(x, n3, n1, n2, p, p2), policy)?;
    Ok(Check::against_sum(lhs, rhs))
}

/// A^{μ1,μ2,μ}_{P,Q,R}.
pub fn be_coefficient<T: Real>(pqr: [i64; 3], mu1: i64, mu2: i64, mu: i64, rc: &mut Recoupler<T>) -> T {
    let [p, q, r] = pqr;
    let ctx = *rc.ctx();
    sign::<T>(mu1 + mu2)
        * ctx.pow_half(2 * mu - mu1 - mu2)
        * rc.j(mu2 - mu1 + p - q, mu - mu1)
        * rc.j(mu1 - mu2 + q - r, mu - mu2)
}

/// Product formula J_{ν+μ1}(q^{P−Q}) J_{ν+μ2}(q^{Q−R}) = Σ_μ A^{μ1,μ2,μ}_{P,Q,R} J_{ν+μ}(q^{P−R}).
pub fn verify_biedenharn_elliott<T: Real>(
    pqr: [i64; 3],
    nu: i64,
    mu1: i64,
    mu2: i64,
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let [p, q, r] = pqr;
    let lhs = rc.j(nu + mu1, p - q) * rc.j(nu + mu2, q - r);
    let rhs = bilateral_sum(
        |mu| be_coefficient(pqr, mu1, mu2, mu, rc) * rc.j(nu + mu, p - r),
        policy,
    )?;
    Ok(Check::against_sum(lhs, rhs))
}

/// Pentagon in tree-label form:
/// R^{x,n1,n2,p1}_{r1,p2} R^{x,p2,n3,n4}_{p1,r2} = Σ_p R^{r1,n2,n3,n4}_{p1,p} R^{x,n1,p,n4}_{r1,r2} R^{r2,n1,n2,n3}_{p,p2}.
pub fn verify_biedenharn_elliott_r<T: Real>(
    x: i64,
    n: [i64; 4],
    p: [i64; 2],
    r: [i64; 2],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let [n1, n2, n3, n4] = n;
    let [p1, p2] = p;
    let [r1, r2] = r;
    let lhs = rc.r(x, n1, n2, p1, r1, p2) * rc.r(x, p2, n3, n4, p1, r2);
    let rhs = bilateral_sum(
        |s| rc.r(r1, n2, n3, n4, p1, s) * rc.r(x, n1, s, n4, r1, r2) * rc.r(r2, n1, n2, n3, s, p2),
        policy,
    )?;
    Ok(Check::against_sum(lhs, rhs))
}

/// Hexagon in tree-label form; both sides are bilateral sums over r.
pub fn verify_hexagon<T: Real>(
    x: i64,
    n: [i64; 4],
    p: [i64; 4],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let [n1, n2, n3, n4] = n;
    let [p1, p2, p3, p4] = p;
    let lhs = bilateral_sum(
        |r| rc.r(x, p1, n3, n4, p2, r) * rc.r(r, n2, n1, n3, p3, p1) * rc.r(x, p3, n2, n4, p4, r),
        policy,
    )?;
    let rhs = bilateral_sum(
        |r| rc.r(x, n1, n2, p2, r, p1) * rc.r(r, n2, n4, n3, p2, p4) * rc.r(x, n1, n3, p4, r, p3),
        policy,
    )?;
    Ok(Check::sums(lhs, rhs))
}

fn hexagon_j_side<T: Real>(
    x: i64,
    n: [i64; 4],
    p: [i64; 4],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let [n1, n2, n3, n4] = n;
    let [p1, p2, p3, p4] = p;
    let ctx = *rc.ctx();
    bilateral_sum(
        |r| {
            sign::<T>(p2 + p4)
                * ctx.pow_half(2 * (r - n4) + p2 + p4)
                * rc.j(r - n2 + n1 - n3, p1 + p3 - n2 - n3)
                * rc.j(x - p1 + n3 - n4, r + p2 - p1 - n4)
                * rc.j(x - p3 + n2 - n4, r + p4 - p3 - n4)
        },
        policy,
    )
}

/// Hexagon in q-Bessel form; the right side is the left side with
/// (n1,n2,p1,p3) ↔ (n4,n3,p2,p4).
pub fn verify_hexagon_j<T: Real>(
    x: i64,
    n: [i64; 4],
    p: [i64; 4],
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let [n1, n2, n3, n4] = n;
    let [p1, p2, p3, p4] = p;
    let lhs = hexagon_j_side(x, n, p, rc, policy)?;
    let rhs = hexagon_j_side(x, [n4, n3, n2, n1], [p2, p1, p4, p3], rc, policy)?;
    Ok(Check::sums(lhs, rhs))
}

/// 6j orthogonality: Σ_{p1,r1} R_{p1,r1;p2,r2} R_{p1,r1;p3,r3} vs δδ.
/// Only r1 = r2 = r3 survives the Kronecker factor, leaving a sum over p1.
pub fn sixj_orthogonality<T: Real>(
    p2: i64,
    r2: i64,
    p3: i64,
    r3: i64,
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<Check<T>> {
    let target = if p2 == p3 && r2 == r3 { T::one() } else { T::zero() };
    if r2 != r3 {
        return Ok(Check::exact(T::zero(), target));
    }
    let s = bilateral_sum(|p1| rc.sixj(p1, r2, p2, r2) * rc.sixj(p1, r2, p3, r3), policy)?;
    Ok(Check::against_sum(target, s))
}

/// C_{x,n+p1,n} C_{n+p1,m,k} = Σ_{p2} R_{p1,r;p2,r} C_{x,k−p2,k} C_{k−p2,m,n} with x − r = n − m + k.
/// The sum runs over all of ℤ; the second field reports the largest term
/// with p2 > k, which the zero convention should make vanish.
pub fn cg_contraction<T: Real>(
    x: i64,
    n: i64,
    m: i64,
    k: i64,
    p1: i64,
    rc: &mut Recoupler<T>,
    policy: &TruncationPolicy,
) -> Result<(Check<T>, f64)> {
    let ctx = *rc.ctx();
    let r = x - n + m - k;
    let c = |a, b, d| cg_coefficient(a, b, d, &ctx);
    let lhs = c(x, n + p1, n) * c(n + p1, m, k);
    let mut outside = 0.0f64;
    let rhs = bilateral_sum(
        |p2| {
            let t = rc.sixj(p1, r, p2, r) * c(x, k - p2, k) * c(k - p2, m, n);
            if p2 > k {
                outside = outside.max(t.abs().f64());
            }
            t
        },
        policy,
    )?;
    Ok((Check::against_sum(lhs, rhs), outside))
}

/// Column (u, v) → nonzero entries ((u', v'), value).
pub type YbOperator<T> = BTreeMap<(i64, i64), Vec<((i64, i64), T)>>;

/// The operator R(u,v) on ℓ²(window)⊗ℓ²(window), as a sparse map from
/// column (i, j) to its image. The basis vector e_i ⊗ e_j is read as
/// e_{x−a} ⊗ e_{b−x} with x = 0, i.e. a = −i and b = j; the definition leaves
/// x free and the image depends on that choice.
pub fn yb_operator<T: Real>(
    u: i64,
    v: i64,
    window: (i64, i64),
    rc: &mut Recoupler<T>,
) -> YbOperator<T> {
    let (lo, hi) = window;
    let mut op = BTreeMap::new();
    for i in lo..=hi {
        for j in lo..=hi {
            let (a, b, x) = (-i, j, 0);
            let mut col = Vec::new();
            for y in (lo + a)..=(hi + a) {
                let tgt = (b - y, y - a);
                if (lo..=hi).contains(&tgt.0) && (lo..=hi).contains(&tgt.1) {
                    let val = rc.r(u, a, v, b, x, y);
                    if val != T::zero() {
                        col.push((tgt, val));
                    }
                }
            }
            op.insert((i, j), col);
        }
    }
    op
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YangBaxterReport {
    pub unitarity_defect: f64,
    pub triple_residual: f64,
}

type Triple = (i64, i64, i64);

fn apply_pair<T: Real>(
    op: &YbOperator<T>,
    slots: (usize, usize),
    v: &HashMap<Triple, T>,
) -> HashMap<Triple, T> {
    let mut out: HashMap<Triple, T> = HashMap::new();
    for (&key, &c) in v {
        let arr = [key.0, key.1, key.2];
        if let Some(col) = op.get(&(arr[slots.0], arr[slots.1])) {
            for &((s, t), w) in col {
                let mut k = arr;
                k[slots.0] = s;
                k[slots.1] = t;
                let e = out.entry((k[0], k[1], k[2])).or_insert(T::zero());
                *e = *e + c * w;
            }
        }
    }
    out
}

/// Unitarity defect of R(u,v) and the Yang–Baxter residual
/// R12(u,w)R13(v,w)R23(u,v) − R23(u,v)R13(v,w)R12(u,w), both measured on
/// interior coordinates (a quarter of the window trimmed from each side).
pub fn yang_baxter_residual<T: Real>(
    uvw: [i64; 3],
    window: (i64, i64),
    rc: &mut Recoupler<T>,
) -> Result<YangBaxterReport> {
    let (lo, hi) = window;
    let margin = (hi - lo) / 4;
    if margin < 1 {
        return Err(QError::InsufficientWindow);
    }
    let (ilo, ihi) = (lo + margin, hi - margin);
    let inside = |i: i64| (ilo..=ihi).contains(&i);
    let [u, v, w] = uvw;
    let r_uv = yb_operator(u, v, window, rc);
    let r_uw = yb_operator(u, w, window, rc);
    let r_vw = yb_operator(v, w, window, rc);

    let mut unitarity = 0.0f64;
    let cols: Vec<_> = r_uv.iter().filter(|(k, _)| inside(k.0) && inside(k.1)).collect();
    for (ka, ca) in &cols {
        for (kb, cb) in &cols {
            let mut dot = T::zero();
            for (ta, va) in ca.iter() {
                for (tb, vb) in cb.iter() {
                    if ta == tb {
                        dot = dot + *va * *vb;
                    }
                }
            }
            let target = if ka == kb { T::one() } else { T::zero() };
            unitarity = unitarity.max((dot - target).abs().f64());
        }
    }

    let mut triple = 0.0f64;
    for i in ilo..=ihi {
        for j in ilo..=ihi {
            for k in ilo..=ihi {
                let mut e = HashMap::new();
                e.insert((i, j, k), T::one());
                let l = apply_pair(&r_uw, (0, 1), &apply_pair(&r_vw, (0, 2), &apply_pair(&r_uv, (1, 2), &e)));
                let r = apply_pair(&r_uv, (1, 2), &apply_pair(&r_vw, (0, 2), &apply_pair(&r_uw, (0, 1), &e)));
                for (key, val) in l.iter() {
                    if inside(key.0) && inside(key.1) && inside(key.2) {
                        let other = r.get(key).copied().unwrap_or(T::zero());
                        triple = triple.max((*val - other).abs().f64());
                    }
                }
                for (key, val) in r.iter() {
                    if inside(key.0) && inside(key.1) && inside(key.2) && !l.contains_key(key) {
                        triple = triple.max(val.abs().f64());
                    }
                }
            }
        }
    }
    Ok(YangBaxterReport {
        unitarity_defect: unitarity,
        triple_residual: triple,
    })
}

/// (H_ν f)(n) = Σ_x f(q^x) J_ν(q^{x+n}) q^x on the output window.
pub fn qhankel_transform<T: Real, F: Fn(i64) -> T>(
    f: F,
    nu: i64,
    out: (i64, i64),
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<Vec<(i64, T)>> {
    let ctx = *table.ctx();
    (out.0..=out.1)
        .map(|n| bilateral_sum(|x| f(x) * table.get(nu, x + n) * ctx.pow(x), policy).map(|s| (n, s.value)))
        .collect()
}

/// max_n |(H_{r123} f)(n) − (H_{r312} H_{r132} f)(n)| for the test function
/// f(q^x) = q^{x²/2}.
pub fn qhankel_factorization_residual<T: Real>(
    x: i64,
    n: [i64; 3],
    out: (i64, i64),
    table: &mut BesselTable<T>,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let ctx = *table.ctx();
    let r = |i: usize, j: usize, k: usize| x - n[i] + n[j] - n[k];
    let f = |y: i64| ctx.pow_half(y * y);
    let direct = qhankel_transform(f, r(0, 1, 2), out, table, policy)?;
    let (lo, hi) = policy.window.bounds();
    let inner: HashMap<i64, T> = qhankel_transform(f, r(0, 2, 1), (lo - 20, hi + 20), table, policy)?
        .into_iter()
        .collect();
    let g = |y: i64| inner.get(&y).copied().unwrap_or(T::zero());
    let fixed = TruncationPolicy::fixed(lo - 20, hi + 20);
    let composed = qhankel_transform(g, r(2, 0, 1), out, table, &fixed)?;
    Ok(direct
        .iter()
        .zip(composed.iter())
        .map(|((_, a), (_, b))| (*a - *b).abs().f64())
        .fold(0.0, f64::max))
}
