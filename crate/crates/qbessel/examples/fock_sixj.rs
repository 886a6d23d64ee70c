//! The 6j symbol computed two ways: the closed form in q-Bessel functions, and
//! the overlap of coupled eigenvectors built in a truncated Fock space.

use qbessel::coupling::sixj_closed;
use qbessel::repr::{check_defining_relations, coupled_vector, eigen_residual, Scheme, SixjOracle, TruncatedFock};
use qbessel::QContext;

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let fock = TruncatedFock::for_q(0.5);
    println!("Fock truncation N = {}", fock.dim());
    println!("defining relations defect: {:.1e}", check_defining_relations(TruncatedFock::new(10), &c));

    let v = coupled_vector(Scheme::S12_3, 1, 0, 1, fock, &c);
    println!("coupled vector: |v|² = {:.15}, eigen-residual {:.1e}", v.norm_sq(), eigen_residual(&v, fock, &c));

    let mut oracle = SixjOracle::new(fock, c);
    println!("  p1 r1 p2 r2   closed form          overlap");
    for (p1, r1, p2, r2) in [(0, 0, 0, 0), (1, 1, -1, 1), (2, -1, 0, -1), (1, 0, 2, 1)] {
        println!(
            "  {p1:>2} {r1:>2} {p2:>2} {r2:>2}  {:+.15e}  {:+.15e}",
            sixj_closed(p1, r1, p2, r2, &c),
            oracle.eval(1, p1, r1, p2, r2)?
        );
    }
    Ok(())
}
