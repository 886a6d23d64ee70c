//! Jackson q-Bessel functions on the lattice q^y and the discrete q-Hankel
//! orthogonality Σ_x J_ν(q^{x+m}) J_ν(q^{x+n}) q^x = δ_mn q^{−n}.

use qbessel::qfunctions::{genfun_check, hankel_inner, qbessel, qbessel_lattice, BesselTable};
use qbessel::{BigFloat, QContext, Real, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let policy = TruncationPolicy::default();

    for y in [-6, -2, 0, 3] {
        println!("J_1(q^{y:>2}) = {:+.15e}", qbessel_lattice(1, y, &c));
    }
    // the direct power series cancels badly at large argument; the lattice form does not
    let w = QContext::<BigFloat>::new(0.5)?;
    let wide = qbessel(1, w.pow(-6), &w).f64();
    println!("direct series at q^-6: f64 {:+.15e}, wide {:+.15e}", qbessel(1, c.pow(-6), &c), wide);

    let mut table = BesselTable::new(c);
    for (m, n) in [(0, 0), (0, 1), (2, -1), (-3, -3)] {
        let s = hankel_inner(0, m, n, &mut table, &policy)?;
        println!("<{m},{n}> = {:+.3e}  (expected {}, {} terms)", s.value, if m == n { c.pow(-n) } else { 0.0 }, s.terms_used);
    }

    let g = genfun_check(2, 0.8, 0.6, &c, &policy)?;
    println!("generating function residual {:.1e}", g.value);
    Ok(())
}
