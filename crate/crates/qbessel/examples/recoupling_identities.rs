//! Backcoupling, Biedenharn–Elliott and hexagon relations for the 6j symbols.
//!
//! Biedenharn–Elliott holds to rounding. Backcoupling and the hexagon, in the
//! form usually written down, do not: the residuals below are O(1).

use qbessel::coupling::*;
use qbessel::{QContext, TruncationPolicy};

fn main() -> qbessel::Result<()> {
    let mut rc = Recoupler::new(QContext::<f64>::new(0.5)?);
    let policy = TruncationPolicy::default();

    let be = verify_biedenharn_elliott([1, 0, -1], 2, 1, 0, &mut rc, &policy)?;
    println!("Biedenharn-Elliott: lhs {:+.12e} rhs {:+.12e} residual {:.1e}", be.lhs, be.rhs, be.residual());
    let be_r = verify_biedenharn_elliott_r(0, [1, 0, -1, 2], [0, 1], [1, -1], &mut rc, &policy)?;
    println!("  tree form residual {:.1e}", be_r.residual());

    let ortho = sixj_orthogonality(1, 0, 1, 0, &mut rc, &policy)?;
    println!("6j orthogonality residual {:.1e}", ortho.residual());

    let back = verify_backcoupling(0, [1, 0, -1], 1, 0, &mut rc, &policy)?;
    println!("backcoupling as stated: residual {:.2}", back.residual());
    let hex = verify_hexagon(0, [0, 0, -1, 0], [-1, 0, 0, 0], &mut rc, &policy)?;
    let hex_j = verify_hexagon_j(0, [0, 0, -1, 0], [-1, 0, 0, 0], &mut rc, &policy)?;
    println!("hexagon as stated: residual {:.2} (q-Bessel form {:.2})", hex.residual(), hex_j.residual());
    Ok(())
}
