//! Basic hypergeometric building blocks: q-Pochhammer symbols, a terminating
//! and a non-terminating rφs, and a bilateral sum with its tail estimate.

use qbessel::qcore::{bilateral_sum, qpoch_finite, qpoch_infinite, rphis, QParam};
use qbessel::qfunctions::qbinomial;
use qbessel::{BigFloat, QContext, Real, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let policy = TruncationPolicy::default();

    let inf = qpoch_infinite(0.5, &c, &policy);
    println!("(q;q)_5 = {:.15}", qpoch_finite(0.5, &c, 5));
    println!("(q;q)_inf = {:.15}  ({} terms, est err {:.1e})", inf.value, inf.terms_used, inf.est_error);

    // q-Chu–Vandermonde: 2φ1(q^-n, b; c; q, q) = (c/b;q)_n / (c;q)_n · b^n
    let (n, b, cc) = (4usize, 0.3, 0.7);
    let lhs = rphis(&[QParam::Pow(-(n as i64)), QParam::Value(b)], &[QParam::Value(cc)], &c, 0.5, &policy)?;
    let rhs = qpoch_finite(cc / b, &c, n) / qpoch_finite(cc, &c, n) * b.powi(n as i32);
    println!("q-Chu-Vandermonde: {:.15} vs {:.15}", lhs.value, rhs);
    // the terminating sum alternates and loses ~4 digits in f64
    let w = QContext::<BigFloat>::new(0.5)?;
    let f = BigFloat::c;
    let wide = rphis(&[QParam::Pow(-(n as i64)), QParam::Value(f(b))], &[QParam::Value(f(cc))], &w, f(0.5), &policy)?;
    println!("  in wide precision: {:.15}", wide.value.f64());

    // q-binomial theorem, non-terminating: 1φ0(a;;q,z) = (az;q)_∞/(z;q)_∞
    let (a, z) = (0.4, 0.3);
    let s = rphis(&[QParam::Value(a)], &[], &c, z, &policy)?;
    let closed = qpoch_infinite(a * z, &c, &policy).value / qpoch_infinite(z, &c, &policy).value;
    println!("q-binomial theorem: {:.15} vs {closed:.15} ({} terms)", s.value, s.terms_used);

    println!("[6 choose 3]_q = {}", qbinomial(6, 3, &c));

    // Σ_x q^|x| = (1+q)/(1−q)
    let g = bilateral_sum(|x| c.pow(x.abs()), &policy)?;
    println!("Σ q^|x| = {:.15} (exact 3), est err {:.1e}, converged {}", g.value, g.est_error, g.converged);
    Ok(())
}
