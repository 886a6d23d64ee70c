//! Askey–Wilson polynomials and the limit in which suitably scaled
//! multivariable AW polynomials approach the multivariate q-Bessel function.
//!
//! The ratio needs about 2m·log10(1/q) extra digits, so it is evaluated in
//! wide precision.

use qbessel::askey_wilson::*;
use qbessel::{BigFloat, QContext, Real};

fn main() -> qbessel::Result<()> {
    let w = QContext::<BigFloat>::new(0.5)?;
    let f = BigFloat::c;

    let p = aw_poly(3, f(1.3), f(0.2), f(0.4), f(0.5), f(-0.3), &w)?;
    let p_inv = aw_poly(3, f(1.0) / f(1.3), f(0.2), f(0.4), f(0.5), f(-0.3), &w)?;
    println!("p_3(1.3) = {:+.15e}, p_3(1/1.3) = {:+.15e}", p.f64(), p_inv.f64());
    let m = multi_aw(&[1, 2], &[f(1.2), f(0.8)], &[f(0.3), f(0.5), f(0.4), f(0.6), f(-0.2)], &w)?;
    println!("two-variable polynomial: {:+.12e}", m.f64());

    for m in [4, 8, 16] {
        println!("digits needed at m={m}: {}", required_digits(m, 0.5));
    }

    for variant in [LimitVariant::Corrected, LimitVariant::AsPrinted] {
        let mut s = LimitSchedule::new(vec![0, 1, 0], vec![1], vec![0]);
        s.variant = variant;
        println!("{variant:?} schedule:");
        let pts = limit_check(&s, &w)?;
        for p in &pts {
            println!("  m={} ratio {:+.6e} target {:+.6e} rel err {:.2e}", p.m, p.ratio, p.target, p.rel_error);
        }
        println!("  monotone from m = {:?}; fitted ratios {:?}", monotone_onset(&pts), fitted_ratios(&pts).iter().map(|(m, r)| format!("{m}:{r:.2}")).collect::<Vec<_>>());
    }
    Ok(())
}
