//! The multivariate Biedenharn–Elliott identity, in 3nj form and in q-Bessel
//! form, plus the Clebsch–Gordan expansion it rests on.

use qbessel::coupling::Recoupler;
use qbessel::multivariate::*;
use qbessel::qfunctions::BesselTable;
use qbessel::{QContext, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let policy = TruncationPolicy::default();
    let mut rc = Recoupler::new(c);
    let mut table = BesselTable::new(c);
    let (x, n, r, s) = (0, [1, 0, -1, 1], [0, 1], [1, -1]);

    let be = verify_multivariate_be(x, &n, &r, &s, &mut rc, &policy)?;
    println!("3nj form: residual {:.1e} ({} terms)", be.residual(), be.terms_used);
    println!("k=2 matches the one-variable identity at {:?}: {:.1e}", be_parameter_map(x, &n, &r, &s), be_cross_match(x, &n, &r, &s, &mut rc, &policy)?);

    for v in [BeCoefficient::AsPrinted, BeCoefficient::Corrected] {
        let j = verify_multivariate_be_j(x, &n, &r, &s, v, &mut table, &policy)?;
        println!("q-Bessel form, {v:?} coefficient: residual {:.2e}", j.residual());
    }

    let k3 = verify_multivariate_be(1, &[0, 1, 0, -1, 1], &[1, 0, 0], &[0, 1, -1], &mut rc, &policy)?;
    println!("k=3: residual {:.1e}", k3.residual());

    let cg = cg_expansion(1, &[1, 1], &[1, 0, 1, 0], 40, &mut rc)?;
    println!("CG expansion: residual {:.1e}; C = {:+.12e}", cg.residual(), multi_cg(1, &[1, 1], &[1, 0, 1, 0], &c));
    Ok(())
}
