//! Multivariate q-Bessel functions: products of one-variable J's along a chain
//! of labels, their orthogonality, and self-duality under x ↔ Λ.

use qbessel::multivariate::{multi_factors, multi_orthogonality, multi_orthogonality_halved, multi_qbessel, self_duality};
use qbessel::qfunctions::BesselTable;
use qbessel::{QContext, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let policy = TruncationPolicy::default();
    let mut table = BesselTable::new(c);

    let (nu, x, lam) = ([0, 1, -1, 2], [1, -2], [0, 3]);
    println!("factors (order, lattice exponent): {:?}", multi_factors(&nu, &x, &lam));
    println!("J_ν(x, Λ) = {:+.15e}", multi_qbessel(&nu, &x, &lam, &c));
    println!("self-duality residual {:.1e}", self_duality(&nu, &x, &lam, &mut table).residual());

    for (l, l2) in [([0, 0], [0, 0]), ([1, -1], [1, -1]), ([1, 0], [0, 1])] {
        let o = multi_orthogonality(&nu, &l, &l2, &mut table, &policy)?;
        println!("⟨{l:?}, {l2:?}⟩: {:+.6e} vs {:+.6e} (residual {:.1e})", o.lhs, o.rhs, o.residual());
    }
    // with every exponent halved the sum is no longer orthogonal
    let h = multi_orthogonality_halved(&nu, &[1, 0], &[0, 1], &c, (-40, 40))?;
    println!("halved exponents: residual {:.2e}", h.residual());
    Ok(())
}
