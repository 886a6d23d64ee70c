//! Truncated matrix model of the representation π₀ of A_q(SU(2)), its tensor
//! powers through the coproduct, the γγ* eigenvectors and the Clebsch–Gordan
//! coefficients. The inner product of two three-fold eigenvectors is the
//! independent oracle for the 6j-symbols.

use crate::error::{QError, Result};
use crate::qcore::QContext;
use crate::qfunctions::wall_orthonormal_lattice;
use crate::scalar::Real;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Alpha,
        Generator::Beta,
        Generator::Gamma,
        Generator::Delta,
    ];

    /// Δ(g) as a list of simple tensors g₁ ⊗ g₂.
    pub fn coproduct(self) -> [(Generator, Generator); 2] {
        use Generator::*;
        match self {
            Alpha => [(Alpha, Alpha), (Beta, Gamma)],
            Beta => [(Alpha, Beta), (Beta, Delta)],
            Gamma => [(Gamma, Alpha), (Delta, Gamma)],
            Delta => [(Delta, Delta), (Gamma, Beta)],
        }
    }

    /// π₀(g) e_n = coef · e_{n'}; `None` when the image leaves ℓ²(ℕ) or the
    /// truncated space.
    pub fn act(self, n: usize, q: f64, dim: usize) -> Option<(usize, f64)> {
        use Generator::*;
        match self {
            Alpha if n == 0 => None,
            Alpha => Some((n - 1, (1.0 - q.powi(2 * n as i32)).sqrt())),
            Beta => Some((n, -q.powi(n as i32 + 1))),
            Gamma => Some((n, q.powi(n as i32))),
            Delta if n + 1 >= dim => None,
            Delta => Some((n + 1, (1.0 - q.powi(2 * n as i32 + 2)).sqrt())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFock {
    dim: usize,
}

impl TruncatedFock {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "truncated Fock space needs at least two states");
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Default N = 60 at q = 0.5, scaled with log q for other bases.
    pub fn for_q(q: f64) -> Self {
        let n = (60.0 * 0.5f64.ln() / q.ln()).ceil() as usize;
        Self::new(n.max(8))
    }
}

/// Dense row-major matrix of a generator in the truncated model.
#[derive(Clone, Debug, PartialEq)]
pub struct GenOperator {
    pub tag: Generator,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl GenOperator {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }
}

pub fn pi0_matrix(tag: Generator, fock: TruncatedFock, ctx: &QContext<f64>) -> GenOperator {
    let dim = fock.dim();
    let mut data = vec![0.0; dim * dim];
    for n in 0..dim {
        if let Some((m, c)) = tag.act(n, ctx.q(), dim) {
            data[m * dim + n] = c;
        }
    }
    GenOperator { tag, dim, data }
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    c
}

/// Largest interior entry of the residuals of all defining relations.
pub fn check_defining_relations(fock: TruncatedFock, ctx: &QContext<f64>) -> f64 {
    let n = fock.dim();
    assert!(n >= 4, "relation check needs N >= 4");
    let q = ctx.q();
    let [a, b, g, d] = Generator::ALL.map(|t| pi0_matrix(t, fock, ctx).data);
    let m = |x: &[f64], y: &[f64]| matmul(x, y, n);
    let id: Vec<f64> = (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect();
    let comb = |terms: &[(f64, &[f64])]| -> Vec<f64> {
        (0..n * n).map(|i| terms.iter().map(|(c, v)| c * v[i]).sum()).collect()
    };
    let (ab, ba, ag, ga) = (m(&a, &b), m(&b, &a), m(&a, &g), m(&g, &a));
    let (bd, db, gd, dg) = (m(&b, &d), m(&d, &b), m(&g, &d), m(&d, &g));
    let (bg, gb, ad, da) = (m(&b, &g), m(&g, &b), m(&a, &d), m(&d, &a));
    let residuals = [
        comb(&[(1.0, &ab), (-q, &ba)]),
        comb(&[(1.0, &ag), (-q, &ga)]),
        comb(&[(1.0, &bd), (-q, &db)]),
        comb(&[(1.0, &gd), (-q, &dg)]),
        comb(&[(1.0, &bg), (-1.0, &gb)]),
        comb(&[(1.0, &ad), (-q, &bg), (-1.0, &id)]),
        comb(&[(1.0, &da), (-1.0 / q, &bg), (-1.0, &id)]),
    ];
    let mut worst = 0.0f64;
    for r in &residuals {
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                worst = worst.max(r[i * n + j].abs());
            }
        }
    }
    worst
}

/// C_{x,m,n}: zero for negative labels, otherwise p̄_{min(m,n)}(q^{2x}; q^{2|n−m|}; q²).
pub fn cg_coefficient<T: Real>(x: i64, m: i64, n: i64, ctx: &QContext<T>) -> T {
    if x < 0 || m < 0 || n < 0 {
        return T::zero();
    }
    wall_orthonormal_lattice(m.min(n), x, (n - m).abs(), &ctx.squared())
}

/// The coefficient with the degree taken literally as max(m, n); kept only to
/// document that it is not an eigenvector coefficient.
pub fn cg_coefficient_max_degree<T: Real>(x: i64, m: i64, n: i64, ctx: &QContext<T>) -> T {
    if x < 0 || m < 0 || n < 0 {
        return T::zero();
    }
    wall_orthonormal_lattice(m.max(n), x, (n - m).abs(), &ctx.squared())
}

/// Coupling scheme of an eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    S12,
    S21,
    S1_23,
    S12_3,
}

impl Scheme {
    pub fn arity(self) -> usize {
        match self {
            Scheme::S12 | Scheme::S21 => 2,
            Scheme::S1_23 | Scheme::S12_3 => 3,
        }
    }
}

pub type SparseVec = BTreeMap<Vec<usize>, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledVector {
    pub scheme: Scheme,
    pub x: i64,
    pub p: i64,
    pub r: i64,
    pub coeffs: SparseVec,
}

impl CoupledVector {
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &CoupledVector) -> f64 {
        inner(&self.coeffs, &other.coeffs)
    }
}

pub fn inner(a: &SparseVec, b: &SparseVec) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, v)| large.get(k).map(|w| v * w))
        .sum()
}

pub fn coupled_vector(
    scheme: Scheme,
    x: i64,
    p: i64,
    r: i64,
    fock: TruncatedFock,
    ctx: &QContext<f64>,
) -> CoupledVector {
    assert!(x >= 0, "eigenvalue label must be non-negative");
    let dim = fock.dim() as i64;
    let c = |a: i64, b: i64, d: i64| cg_coefficient(a, b, d, ctx);
    let mut coeffs = SparseVec::new();
    let mut put = |key: Vec<i64>, v: f64| {
        if v != 0.0 && key.iter().all(|&i| (0..dim).contains(&i)) {
            coeffs.insert(key.into_iter().map(|i| i as usize).collect(), v);
        }
    };
    match scheme {
        Scheme::S12 | Scheme::S21 => {
            let p = if scheme == Scheme::S12 { p } else { -p };
            for m in 0..dim {
                put(vec![m, m + p], c(x, m, m + p));
            }
        }
        Scheme::S1_23 => {
            for n in 0..dim {
                for m in 0..dim {
                    let k = x - r - n + m;
                    put(vec![n, m, k], c(x, n, n + p) * c(n + p, m, k));
                }
            }
        }
        Scheme::S12_3 => {
            for n in 0..dim {
                for m in 0..dim {
                    let k = x - r - n + m;
                    put(vec![n, m, k], c(x, k - p, k) * c(k - p, n, m));
                }
            }
        }
    }
    CoupledVector {
        scheme,
        x,
        p,
        r,
        coeffs,
    }
}

/// Bracketing of an iterated coproduct on three factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracketing {
    /// (1 ⊗ Δ)Δ
    Right,
    /// (Δ ⊗ 1)Δ
    Left,
}

/// Simple tensors making up the iterated coproduct of `g`.
pub fn tensor_words(g: Generator, arity: usize, bracket: Bracketing) -> Vec<Vec<Generator>> {
    match arity {
        1 => vec![vec![g]],
        2 => g.coproduct().iter().map(|&(a, b)| vec![a, b]).collect(),
        3 => {
            let mut out = Vec::new();
            for (a, b) in g.coproduct() {
                match bracket {
                    Bracketing::Right => {
                        for (c, d) in b.coproduct() {
                            out.push(vec![a, c, d]);
                        }
                    }
                    Bracketing::Left => {
                        for (c, d) in a.coproduct() {
                            out.push(vec![c, d, b]);
                        }
                    }
                }
            }
            out
        }
        _ => panic!("only up to three tensor factors are modelled"),
    }
}

/// π(g) on a sparse tensor vector.
pub fn apply_generator(
    g: Generator,
    v: &SparseVec,
    arity: usize,
    bracket: Bracketing,
    fock: TruncatedFock,
    ctx: &QContext<f64>,
) -> SparseVec {
    let q = ctx.q();
    let mut out = SparseVec::new();
    for word in tensor_words(g, arity, bracket) {
        'entries: for (key, &val) in v {
            let mut new_key = key.clone();
            let mut coef = val;
            for (slot, gen) in word.iter().enumerate() {
                match gen.act(key[slot], q, fock.dim()) {
                    Some((i, c)) => {
                        new_key[slot] = i;
                        coef *= c;
                    }
                    None => continue 'entries,
                }
            }
            *out.entry(new_key).or_insert(0.0) += coef;
        }
    }
    out
}

/// π(γγ*) = −q^{-1} π(γ)π(β).
pub fn apply_gamma_gamma_star(
    v: &SparseVec,
    arity: usize,
    bracket: Bracketing,
    fock: TruncatedFock,
    ctx: &QContext<f64>,
) -> SparseVec {
    let b = apply_generator(Generator::Beta, v, arity, bracket, fock, ctx);
    let mut g = apply_generator(Generator::Gamma, &b, arity, bracket, fock, ctx);
    for c in g.values_mut() {
        *c *= -1.0 / ctx.q();
    }
    g
}

fn interior(key: &[usize], fock: TruncatedFock) -> bool {
    key.iter().all(|&i| i + 1 < fock.dim())
}

/// max |a − b| over interior coordinates.
pub fn interior_distance(a: &SparseVec, b: &SparseVec, fock: TruncatedFock) -> f64 {
    let mut worst = 0.0f64;
    for (k, v) in a {
        if interior(k, fock) {
            worst = worst.max((v - b.get(k).copied().unwrap_or(0.0)).abs());
        }
    }
    for (k, v) in b {
        if interior(k, fock) && !a.contains_key(k) {
            worst = worst.max(v.abs());
        }
    }
    worst
}

fn bracket_of(s: Scheme) -> Bracketing {
    match s {
        Scheme::S12_3 => Bracketing::Left,
        _ => Bracketing::Right,
    }
}

/// Interior residual of π(γγ*)v − q^{2x}v.
pub fn eigen_residual(v: &CoupledVector, fock: TruncatedFock, ctx: &QContext<f64>) -> f64 {
    let arity = v.scheme.arity();
    let w = apply_gamma_gamma_star(&v.coeffs, arity, bracket_of(v.scheme), fock, ctx);
    let lambda = ctx.pow(2 * v.x);
    let scaled: SparseVec = v.coeffs.iter().map(|(k, c)| (k.clone(), lambda * c)).collect();
    interior_distance(&w, &scaled, fock)
}

/// Interior residual of the generator action table on coupled vectors:
/// α lowers x, δ raises it, β raises p, γ lowers p.
pub fn action_residual(
    scheme: Scheme,
    g: Generator,
    x: i64,
    p: i64,
    r: i64,
    fock: TruncatedFock,
    ctx: &QContext<f64>,
) -> f64 {
    let q = ctx.q();
    let v = coupled_vector(scheme, x, p, r, fock, ctx);
    let lhs = apply_generator(g, &v.coeffs, scheme.arity(), bracket_of(scheme), fock, ctx);
    let (coef, x2, p2) = match g {
        Generator::Alpha => ((1.0 - q.powi(2 * x as i32)).sqrt(), x - 1, p),
        Generator::Beta => (-q.powi(x as i32 + 1), x, p + 1),
        Generator::Gamma => (q.powi(x as i32), x, p - 1),
        Generator::Delta => ((1.0 - q.powi(2 * x as i32 + 2)).sqrt(), x + 1, p),
    };
    let rhs: SparseVec = if x2 < 0 {
        SparseVec::new()
    } else {
        coupled_vector(scheme, x2, p2, r, fock, ctx)
            .coeffs
            .into_iter()
            .map(|(k, c)| (k, coef * c))
            .collect()
    };
    interior_distance(&lhs, &rhs, fock)
}

/// Largest interior discrepancy between (1⊗Δ)Δ(g) and (Δ⊗1)Δ(g) over basis vectors.
pub fn coassociativity_defect(g: Generator, fock: TruncatedFock, ctx: &QContext<f64>) -> f64 {
    let n = fock.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut e = SparseVec::new();
                e.insert(vec![i, j, k], 1.0);
                let a = apply_generator(g, &e, 3, Bracketing::Right, fock, ctx);
                let b = apply_generator(g, &e, 3, Bracketing::Left, fock, ctx);
                worst = worst.max(interior_distance(&a, &b, fock));
            }
        }
    }
    worst
}

/// ⟨e^{1(23)}_{x,p1,r1}, e^{(12)3}_{x,p2,r2}⟩ on the truncated space.
pub fn sixj_oracle(
    x: i64,
    p1: i64,
    r1: i64,
    p2: i64,
    r2: i64,
    fock: TruncatedFock,
    ctx: &QContext<f64>,
) -> Result<f64> {
    SixjOracle::new(fock, *ctx).eval(x, p1, r1, p2, r2)
}

/// The same inner products with the coupled vectors memoised, for grids
/// where each vector takes part in many overlaps.
#[derive(Debug, Clone)]
pub struct SixjOracle {
    fock: TruncatedFock,
    ctx: QContext<f64>,
    cache: HashMap<(Scheme, i64, i64, i64), CoupledVector>,
}

impl SixjOracle {
    pub fn new(fock: TruncatedFock, ctx: QContext<f64>) -> Self {
        Self {
            fock,
            ctx,
            cache: HashMap::new(),
        }
    }

    fn ensure(&mut self, key: (Scheme, i64, i64, i64)) -> Result<()> {
        let (fock, ctx) = (self.fock, self.ctx);
        let (scheme, x, p, r) = key;
        let n = self
            .cache
            .entry(key)
            .or_insert_with(|| coupled_vector(scheme, x, p, r, fock, &ctx))
            .norm_sq();
        if n < 1.0 - 1e-8 {
            return Err(QError::InsufficientTruncation(n));
        }
        Ok(())
    }

    pub fn eval(&mut self, x: i64, p1: i64, r1: i64, p2: i64, r2: i64) -> Result<f64> {
        let (ka, kb) = ((Scheme::S1_23, x, p1, r1), (Scheme::S12_3, x, p2, r2));
        self.ensure(ka)?;
        self.ensure(kb)?;
        Ok(self.cache[&ka].dot(&self.cache[&kb]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext<f64> {
        QContext::new(0.5).unwrap()
    }

    #[test]
    fn gamma_is_diagonal_powers() {
        let g = pi0_matrix(Generator::Gamma, TruncatedFock::new(3), &ctx());
        assert_eq!([g.get(0, 0), g.get(1, 1), g.get(2, 2)], [1.0, 0.5, 0.25]);
    }

    #[test]
    fn boundary_drops() {
        assert_eq!(Generator::Alpha.act(0, 0.5, 5), None);
        assert_eq!(Generator::Delta.act(4, 0.5, 5), None);
    }

    #[test]
    fn negative_labels_vanish() {
        let c = ctx();
        assert_eq!(cg_coefficient(0, -1, 3, &c), 0.0);
        assert_eq!(cg_coefficient(-1, 0, 0, &c), 0.0);
    }

    #[test]
    fn flipped_scheme_negates_p() {
        let c = ctx();
        let f = TruncatedFock::new(20);
        let a = coupled_vector(Scheme::S21, 1, 2, 0, f, &c);
        let b = coupled_vector(Scheme::S12, 1, -2, 0, f, &c);
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn word_counts() {
        assert_eq!(tensor_words(Generator::Alpha, 3, Bracketing::Left).len(), 4);
        assert_eq!(tensor_words(Generator::Beta, 2, Bracketing::Right).len(), 2);
    }
}
