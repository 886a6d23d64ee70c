//! 3nj symbols of the comb trees, written as sums of 6j's (R) and as
//! multivariate q-Bessel functions (S).

use qbessel::multivariate::*;
use qbessel::coupling::Recoupler;
use qbessel::{QContext, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let mut rc = Recoupler::new(QContext::<f64>::new(0.5)?);
    let policy = TruncationPolicy::default();
    let (x, n, r, s) = (1, [0, 1, -1, 2], [1, 0], [0, -1]);

    println!("R = {:+.15e}", threenj_r(x, &n, &r, &s, &mut rc));
    println!("S = {:+.15e}", threenj_s(x, &n, &r, &s, &mut rc));
    println!("ν for the bridge: {:?}", nu_of(x, &n));
    println!("bridge residual {:.1e}", corollary_bridge(x, &n, &r, &s, &mut rc).residual());
    println!("duality residual {:.1e}", threenj_duality(x, &n, &r, &s, &mut rc).residual());
    println!("factorization at k1=1: {:.1e}", threenj_factorization(x, &n, &r, &s, 1, &mut rc).residual());

    let o = threenj_orthogonality(x, &n, &s, &s, &mut rc, &policy)?;
    println!("orthogonality, equal labels: {:.6} vs {:.6}", o.lhs, o.rhs);
    let o = s_orthogonality(x, &n, &s, &[1, 1], &mut rc, &policy)?;
    println!("S orthogonality, distinct labels: {:+.1e}", o.lhs);

    println!("rotating labels: {:?} -> {:?}", n, rotate_labels(&n, 1));
    Ok(())
}
