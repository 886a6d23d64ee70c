//! The identity catalogue: ids, the statement each id checks, its labels,
//! and the evaluation that turns one parameter assignment into a residual.

use crate::askey_wilson::{aw_poly, aw_poly_direct, limit_check, LimitSchedule, LimitVariant};
use crate::check::Check;
use crate::coupling::*;
use crate::error::{QError, Result};
use crate::multivariate::*;
use crate::qcore::{qpoch_finite, qpoch_inf, QContext, SeriesResult, TruncationPolicy};
use crate::qfunctions::*;
use crate::repr::{sixj_oracle, TruncatedFock};
use crate::scalar::{BigFloat, Real};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Integer parameter assignment, label → value.
pub type Params = BTreeMap<String, i64>;

macro_rules! identities {
    ($( $var:ident = $id:literal, $anchor:literal, [$($lab:literal),*] ;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Identity { $($var),* }

        impl Identity {
            pub const ALL: &'static [Identity] = &[$(Identity::$var),*];

            pub fn id(self) -> &'static str {
                match self { $(Identity::$var => $id),* }
            }

            /// The statement the identity checks.
            pub fn anchor(self) -> &'static str {
                match self { $(Identity::$var => $anchor),* }
            }

            /// Accepted labels; a trailing `*` marks an indexed family (`n*` = n1, n2, …).
            pub fn labels(self) -> &'static [&'static str] {
                match self { $(Identity::$var => &[$($lab),*]),* }
            }
        }
    };
}

identities! {
    QpochRecurrence = "qpoch-recurrence",
        "(a;q)_{n+1} = (a;q)_n (1 − aq^n) and (a;q)_∞ = (a;q)_n (aq^n;q)_∞, a = q^a",
        ["n", "a"];
    WallConsistency = "wall-consistency",
        "Wall polynomial: ₂φ₁ and ₂φ₀ representations agree, a = q^alpha, x ∈ ℤ≥0",
        ["n", "x", "alpha"];
    HankelOrthogonality = "hankel-orthogonality",
        "Σ_x J_ν(q^{x+m};q) J_ν(q^{x+n};q) q^x = δ_{m,n} q^{−n}",
        ["nu", "m", "n"];
    Genfun = "genfun",
        "Σ_m q^{−νm/2} J_ν(xq^m) t^m/(q;q)_m = x^{ν/2}(q^{ν+1};q)_∞/(q,t;q)_∞ ₁φ₁(t; q^{ν+1}; q, qx), x = q^x, t = q^t",
        ["nu", "x", "t"];
    WallGenfun = "wall-genfun",
        "generating function at t = q^{ν+1}: Wall polynomial p_n(x; q^ν) against the q-Bessel sum, x = q^x",
        ["n", "nu", "x"];
    SixjOracle = "sixj-oracle",
        "6j closed form R_{p1,r1;p2,r2} = δ_{r1,r2}(−q)^{p1−p2} J_{r1}(q^{2p1−2p2}; q²) vs the Fock-space inner product (dimension N)",
        ["x", "p1", "r1", "p2", "r2", "N"];
    SixjOrthogonality = "sixj-orthogonality",
        "Σ_{p1,r1} R_{p1,r1;p2,r2} R_{p1,r1;p3,r3} = δ_{p2,p3} δ_{r2,r3}",
        ["p2", "r2", "p3", "r3"];
    Backcoupling = "backcoupling",
        "backcoupling Σ_p R R = δ; form 0 q-Bessel form, 1 tree-label form",
        ["x", "n1", "n2", "n3", "p1", "p2", "form"];
    BiedenharnElliott = "biedenharn-elliott",
        "pentagon; form 0: J_{ν+μ1}(q^{P−Q}) J_{ν+μ2}(q^{Q−R}) = Σ_μ A J_{ν+μ}(q^{P−R}); form 1: tree-label form",
        ["P", "Q", "R", "nu", "mu1", "mu2", "x", "n*", "p1", "p2", "r1", "r2", "form"];
    Hexagon = "hexagon",
        "hexagon identity; form 0 tree-label form, 1 q-Bessel form",
        ["x", "n*", "p*", "form"];
    YangBaxter = "yang-baxter",
        "R12 R13 R23 = R23 R13 R12 for the 6j operator, plus unitarity, on the window lo..hi",
        ["u", "v", "w", "lo", "hi"];
    QhankelFactorization = "qhankel-factorization",
        "H_{r123} = H_{r312} H_{r132} on f(q^x) = q^{x²/2}, outputs lo..hi",
        ["x", "n1", "n2", "n3", "lo", "hi"];
    MultiOrthogonality = "multi-orthogonality",
        "Σ_x J_ν(x,λ) J_ν(x,λ′) q^{x_1} = δ_{λ,λ′} q^{ν_{d+1}+ν_0−λ_d}; λ′ = lamp*; form 1 halves the exponents",
        ["d", "nu*", "lam*", "lamp*", "form"];
    MultiDuality = "multi-duality",
        "form 0: J_ν(x,λ) = J_{ν̂}(λ̂,x̂); form 1: R^{x,n}_{r,s} = R^{x,n̂}_{ŝ,r̂}",
        ["d", "nu*", "x*", "lam*", "k", "x", "n*", "r*", "s*", "form"];
    ThreenjProduct = "threenj-product",
        "R^{x,n}_{r,s} = R^{x,(n¹,r_{k1+1})}_{r¹,s¹} R^{x,(s_{k1},n²)}_{r²,s²} for every split, and Σ_r R_{r,s} R_{r,s′} = δ_{s,s′} (s′ = sp*)",
        ["k", "x", "n*", "r*", "s*", "sp*"];
    ThreenjCorollary = "threenj-corollary",
        "R^{x,n}_{r,s} = (−q)^{r_1+s_k−n_1−n_{k+2}} J_{ν(x,n)}(r,s; q²)",
        ["k", "x", "n*", "r*", "s*"];
    SLemma = "s-lemma",
        "S^{x,n}_{r,s} = Π_j R^{s_{j+1},n_1,r_{j−1},n_{j+2}}_{r_j,s_j}: Σ_r S_{r,s} S_{r,s′} = δ_{s,s′} (s′ = sp*)",
        ["k", "x", "n*", "s*", "sp*"];
    MultiBe = "multi-be",
        "R^{x,n}_{r,s} = Σ_t S^{x,n}_{(t,r_1),s} R^{r_1,n′}_{r′,t}; form 0 S-form, 1 q-Bessel form as printed, 2 corrected, 3 k=2 cross-match",
        ["k", "x", "n*", "r*", "s*", "form"];
    SComposition = "s-composition",
        "S^{x,n}_{s,r} = Σ_{s_k}⋯Σ_{s_1} Π_j S^{x,n_j}_{s_{j−1},s_j} with rotated labels; indices over lo..hi",
        ["k", "x", "n*", "r*", "s*", "lo", "hi"];
    CgExpansion = "cg-expansion",
        "C_{x,r,n} = Σ_s R^{x,n}_{r,s} C_{x,ŝ,n̂}, s over 0..hi",
        ["k", "x", "r*", "n*", "hi"];
    AwSymmetry = "aw-symmetry",
        "p_n(x;a,b,c,d|q) symmetric in a,b,c,d and in x ↔ 1/x; both summation paths agree; x, a..d = q^{e/2}",
        ["n", "ex", "ea", "eb", "ec", "ed"];
    AwLimit = "aw-limit",
        "P_d(λ+m; x(m); α(m))/C_m → (q;q)^d_∞ Π q^{…} J_ν(x,Λ): relative error at step m; form 0 corrected, 1 as printed",
        ["d", "nu*", "x*", "lam*", "m", "form"];
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Identity {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .iter()
            .copied()
            .find(|i| i.id() == s)
            .ok_or_else(|| QError::PlanInvalid(format!("unknown identity id `{s}`")))
    }
}

impl Identity {
    pub fn accepts_label(self, label: &str) -> bool {
        self.labels().iter().any(|l| match l.strip_suffix('*') {
            Some(stem) => label
                .strip_prefix(stem)
                .is_some_and(|idx| !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit())),
            None => *l == label,
        })
    }

    fn default_of(self, label: &str) -> i64 {
        match (self, label) {
            (_, "d") | (_, "k") => 2,
            (Identity::SixjOracle, "N") => 60,
            (Identity::AwLimit, "m") => 8,
            (Identity::WallConsistency, "alpha") => 1,
            (Identity::Genfun, "t") => 1,
            (Identity::QpochRecurrence, "n") | (Identity::AwSymmetry, "n") => 3,
            (Identity::AwSymmetry, "ex") => 1,
            (Identity::AwSymmetry, "ea") => 1,
            (Identity::AwSymmetry, "eb") => 2,
            (Identity::AwSymmetry, "ec") => 3,
            (Identity::AwSymmetry, "ed") => 5,
            (Identity::YangBaxter, "lo") => -10,
            (Identity::YangBaxter, "hi") => 10,
            (Identity::QhankelFactorization, "lo") => -3,
            (Identity::QhankelFactorization, "hi") => 3,
            (Identity::SComposition, "lo") => -10,
            (Identity::SComposition, "hi") => 12,
            (Identity::CgExpansion, "hi") => 40,
            _ => 0,
        }
    }
}

struct Args<'a> {
    id: Identity,
    p: &'a Params,
}

impl Args<'_> {
    fn get(&self, l: &str) -> i64 {
        self.p.get(l).copied().unwrap_or_else(|| self.id.default_of(l))
    }

    fn vec(&self, stem: &str, len: usize) -> Vec<i64> {
        (1..=len).map(|i| self.get(&format!("{stem}{i}"))).collect()
    }

    /// Same as `vec` but indexed from 0.
    fn vec0(&self, stem: &str, len: usize) -> Vec<i64> {
        (0..len).map(|i| self.get(&format!("{stem}{i}"))).collect()
    }

    fn dim(&self, l: &str, max: i64) -> Result<usize> {
        let v = self.get(l);
        if !(1..=max).contains(&v) {
            return Err(QError::Domain(format!("{l} = {v} outside 1..={max}")));
        }
        Ok(v as usize)
    }

    fn nonneg(&self, l: &str) -> Result<usize> {
        usize::try_from(self.get(l)).map_err(|_| QError::Domain(format!("{l} must be non-negative")))
    }
}

/// Residual of one evaluation with its truncation bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub residual: f64,
    pub est_error: f64,
    pub converged: bool,
}

impl Outcome {
    fn exact(residual: f64) -> Self {
        Self {
            residual,
            est_error: 0.0,
            converged: true,
        }
    }

    fn worst(self, other: Outcome) -> Self {
        Self {
            residual: self.residual.max(other.residual),
            est_error: self.est_error.max(other.est_error),
            converged: self.converged && other.converged,
        }
    }
}

impl<T: Real> From<Check<T>> for Outcome {
    fn from(c: Check<T>) -> Self {
        Self {
            residual: c.residual(),
            est_error: c.est_error,
            converged: c.converged,
        }
    }
}

impl<T: Real> From<SeriesResult<T>> for Outcome {
    fn from(s: SeriesResult<T>) -> Self {
        Self {
            residual: s.value.abs().f64(),
            est_error: s.est_error,
            converged: s.converged,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Evaluate one identity at one parameter assignment.
pub fn evaluate<T: Real>(id: Identity, p: &Params, ctx: QContext<T>, policy: &TruncationPolicy) -> Result<Outcome> {
    let a = Args { id, p };
    let g = |l: &str| a.get(l);
    use Identity::*;
    Ok(match id {
        QpochRecurrence => {
            let n = a.nonneg("n")?;
            let x = ctx.pow(g("a"));
            let pn = qpoch_finite(x, &ctx, n);
            let r1 = qpoch_finite(x, &ctx, n + 1) - pn * (T::one() - x * ctx.pow(n as i64));
            let r2 = qpoch_inf(x, &ctx) - pn * qpoch_inf(x * ctx.pow(n as i64), &ctx);
            Outcome::exact(r1.abs().f64().max(r2.abs().f64()))
        }
        WallConsistency => {
            let n = a.nonneg("n")?;
            let x = g("x");
            if x < 0 {
                return Err(QError::Domain("x must be non-negative".into()));
            }
            // the ₂φ₁ sum alternates and cancels for n > x, so it is always taken wide;
            // the ₂φ₀ side runs at campaign precision
            let wide = QContext::<BigFloat>::new(ctx.q().f64())?;
            let lhs = wall_poly(n, x, wide.pow(g("alpha")), &wide)?.f64();
            let rhs = wall_poly_2phi0(n, x, ctx.pow(g("alpha")), &ctx)?.f64();
            Outcome::exact((lhs - rhs).abs())
        }
        HankelOrthogonality => {
            let mut t = BesselTable::new(ctx);
            hankel_orthogonality(g("nu"), g("m"), g("n"), &mut t, policy)?.into()
        }
        Genfun => genfun_check(g("nu"), ctx.pow(g("x")), ctx.pow(g("t")), &ctx, policy)?.into(),
        WallGenfun => wall_genfun_check(a.nonneg("n")?, g("nu"), ctx.pow(g("x")), &ctx, policy)?.into(),
        SixjOracle => {
            let c64 = QContext::<f64>::new(ctx.q().f64())?;
            let n = a.nonneg("N")?;
            let (x, p1, r1, p2, r2) = (g("x"), g("p1"), g("r1"), g("p2"), g("r2"));
            let oracle = sixj_oracle(x, p1, r1, p2, r2, TruncatedFock::new(n), &c64)?;
            Outcome::exact((sixj_closed(p1, r1, p2, r2, &ctx).f64() - oracle).abs())
        }
        SixjOrthogonality => {
            let mut rc = Recoupler::new(ctx);
            sixj_orthogonality(g("p2"), g("r2"), g("p3"), g("r3"), &mut rc, policy)?.into()
        }
        Backcoupling => {
            let mut rc = Recoupler::new(ctx);
            let n = [g("n1"), g("n2"), g("n3")];
            match g("form") {
                0 => verify_backcoupling(g("x"), n, g("p1"), g("p2"), &mut rc, policy)?.into(),
                _ => verify_backcoupling_r(g("x"), n, g("p1"), g("p2"), &mut rc, policy)?.into(),
            }
        }
        BiedenharnElliott => {
            let mut rc = Recoupler::new(ctx);
            match g("form") {
                0 => verify_biedenharn_elliott([g("P"), g("Q"), g("R")], g("nu"), g("mu1"), g("mu2"), &mut rc, policy)?
                    .into(),
                _ => {
                    let n = a.vec("n", 4);
                    verify_biedenharn_elliott_r(
                        g("x"),
                        [n[0], n[1], n[2], n[3]],
                        [g("p1"), g("p2")],
                        [g("r1"), g("r2")],
                        &mut rc,
                        policy,
                    )?
                    .into()
                }
            }
        }
        Hexagon => {
            let mut rc = Recoupler::new(ctx);
            let (n, pp) = (a.vec("n", 4), a.vec("p", 4));
            let n = [n[0], n[1], n[2], n[3]];
            let pp = [pp[0], pp[1], pp[2], pp[3]];
            match g("form") {
                0 => verify_hexagon(g("x"), n, pp, &mut rc, policy)?.into(),
                _ => verify_hexagon_j(g("x"), n, pp, &mut rc, policy)?.into(),
            }
        }
        YangBaxter => {
            let mut rc = Recoupler::new(ctx);
            let r = yang_baxter_residual([g("u"), g("v"), g("w")], (g("lo"), g("hi")), &mut rc)?;
            Outcome::exact(r.unitarity_defect.max(r.triple_residual))
        }
        QhankelFactorization => {
            let mut t = BesselTable::new(ctx);
            let n = [g("n1"), g("n2"), g("n3")];
            Outcome::exact(qhankel_factorization_residual(g("x"), n, (g("lo"), g("hi")), &mut t, policy)?)
        }
        MultiOrthogonality => {
            let d = a.dim("d", 3)?;
            let (nu, l1, l2) = (a.vec0("nu", d + 2), a.vec("lam", d), a.vec("lamp", d));
            match g("form") {
                0 => multi_orthogonality(&nu, &l1, &l2, &mut BesselTable::new(ctx), policy)?.into(),
                _ => multi_orthogonality_halved(&nu, &l1, &l2, &ctx, policy.window.bounds())?.into(),
            }
        }
        MultiDuality => match g("form") {
            0 => {
                let d = a.dim("d", 4)?;
                self_duality(&a.vec0("nu", d + 2), &a.vec("x", d), &a.vec("lam", d), &mut BesselTable::new(ctx)).into()
            }
            _ => {
                let k = a.dim("k", 4)?;
                let mut rc = Recoupler::new(ctx);
                threenj_duality(g("x"), &a.vec("n", k + 2), &a.vec("r", k), &a.vec("s", k), &mut rc).into()
            }
        },
        ThreenjProduct => {
            let k = a.dim("k", 4)?;
            let (x, n, r, s) = (g("x"), a.vec("n", k + 2), a.vec("r", k), a.vec("s", k));
            let mut rc = Recoupler::new(ctx);
            let mut out = if k == 1 {
                let direct = recoupling_r(x, n[0], n[1], n[2], r[0], s[0], &ctx);
                Outcome::from(Check::exact(threenj_r(x, &n, &r, &s, &mut rc), direct))
            } else {
                (1..k)
                    .map(|k1| Outcome::from(threenj_factorization(x, &n, &r, &s, k1, &mut rc)))
                    .reduce(Outcome::worst)
                    .expect("k >= 2")
            };
            if k <= 3 {
                let o = threenj_orthogonality(x, &n, &s, &a.vec("sp", k), &mut rc, policy)?;
                out = out.worst(o.into());
            }
            out
        }
        ThreenjCorollary => {
            let k = a.dim("k", 4)?;
            let mut rc = Recoupler::new(ctx);
            corollary_bridge(g("x"), &a.vec("n", k + 2), &a.vec("r", k), &a.vec("s", k), &mut rc).into()
        }
        SLemma => {
            let k = a.dim("k", 3)?;
            let mut rc = Recoupler::new(ctx);
            s_orthogonality(g("x"), &a.vec("n", k + 2), &a.vec("s", k), &a.vec("sp", k), &mut rc, policy)?.into()
        }
        MultiBe => {
            let k = a.dim("k", 3)?;
            let (x, n, r, s) = (g("x"), a.vec("n", k + 2), a.vec("r", k), a.vec("s", k));
            match g("form") {
                0 => verify_multivariate_be(x, &n, &r, &s, &mut Recoupler::new(ctx), policy)?.into(),
                1 | 2 => {
                    let v = if g("form") == 1 {
                        BeCoefficient::AsPrinted
                    } else {
                        BeCoefficient::Corrected
                    };
                    verify_multivariate_be_j(x, &n, &r, &s, v, &mut BesselTable::new(ctx), policy)?.into()
                }
                _ => {
                    if k != 2 {
                        return Err(QError::Domain("the cross-match needs k = 2".into()));
                    }
                    Outcome::exact(be_cross_match(x, &n, &r, &s, &mut Recoupler::new(ctx), policy)?)
                }
            }
        }
        SComposition => {
            let k = a.dim("k", 2)?;
            let window = TruncationPolicy::fixed(g("lo"), g("hi"));
            let mut rc = Recoupler::new(ctx);
            verify_s_composition(g("x"), &a.vec("n", k + 2), &a.vec("r", k), &a.vec("s", k), &mut rc, &window)?.into()
        }
        CgExpansion => {
            let k = a.dim("k", 3)?;
            let mut rc = Recoupler::new(ctx);
            cg_expansion(g("x"), &a.vec("r", k), &a.vec("n", k + 2), g("hi"), &mut rc)?.into()
        }
        AwSymmetry => {
            let n = a.nonneg("n")?;
            let e = |l: &str| ctx.pow_half(g(l));
            let (x, pa, pb, pc, pd) = (e("ex"), e("ea"), e("eb"), e("ec"), e("ed"));
            let base = aw_poly(n, x, pa, pb, pc, pd, &ctx)?.f64();
            let variants = [
                aw_poly(n, x, pb, pa, pc, pd, &ctx)?,
                aw_poly(n, x, pc, pb, pa, pd, &ctx)?,
                aw_poly(n, x, pd, pb, pc, pa, &ctx)?,
                aw_poly(n, T::one() / x, pa, pb, pc, pd, &ctx)?,
                aw_poly_direct(n, x, pa, pb, pc, pd, &ctx)?,
            ];
            Outcome::exact(variants.iter().map(|v| rel(v.f64(), base)).fold(0.0, f64::max))
        }
        AwLimit => {
            let d = a.dim("d", 3)?;
            let mut s = LimitSchedule::new(a.vec0("nu", d + 2), a.vec("x", d), a.vec("lam", d));
            s.m_values = vec![g("m")];
            s.variant = if g("form") == 0 {
                LimitVariant::Corrected
            } else {
                LimitVariant::AsPrinted
            };
            // the limit always needs the wide type, whatever the campaign precision
            let wide = QContext::<BigFloat>::new(ctx.q().f64())?;
            let pts = limit_check(&s, &wide)?;
            let pt = pts.first().ok_or(QError::DegreeNegative(g("m")))?;
            Outcome::exact(pt.rel_error)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for &i in Identity::ALL {
            assert_eq!(i.id().parse::<Identity>().unwrap(), i);
        }
        assert_eq!(Identity::ALL.len(), 22);
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn label_families() {
        assert!(Identity::MultiBe.accepts_label("n3"));
        assert!(!Identity::MultiBe.accepts_label("n"));
        assert!(Identity::MultiOrthogonality.accepts_label("lamp2"));
        assert!(!Identity::HankelOrthogonality.accepts_label("q"));
    }

    #[test]
    fn hexagon_all_zero_passes() {
        let c = QContext::<f64>::new(0.5).unwrap();
        let o = evaluate(Identity::Hexagon, &Params::new(), c, &TruncationPolicy::default()).unwrap();
        assert!(o.residual < 1e-8, "{o:?}");
    }
}
