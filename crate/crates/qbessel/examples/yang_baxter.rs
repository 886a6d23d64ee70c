use qbessel::coupling::{yang_baxter_residual, yb_operator, Recoupler};
use qbessel::QContext;

// The braid operator built from R-matrices on a finite label window.
// Both the triple-product relation and unitarity are reported. The
// operator leaves one label free; with it pinned to 0 neither holds.
fn main() -> qbessel::Result<()> {
    let mut rc = Recoupler::new(QContext::<f64>::new(0.5)?);
    let op = yb_operator(0, 1, (-4, 4), &mut rc);
    println!("operator on window [-4, 4]: {} columns", op.len());
    for uvw in [[0, 0, 0], [1, -1, 0], [1, 1, 1]] {
        let r = yang_baxter_residual(uvw, (-10, 10), &mut rc)?;
        println!("{uvw:?}: triple product {:.1e}, unitarity defect {:.2}", r.triple_residual, r.unitarity_defect);
    }
    Ok(())
}
