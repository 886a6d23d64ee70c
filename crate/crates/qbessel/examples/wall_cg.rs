//! Little q-Jacobi (Wall) polynomials and their role as quantum SU(2)
//! Clebsch–Gordan coefficients.

use qbessel::qfunctions::{wall_orthonormal_lattice, wall_poly, wall_poly_2phi0};
use qbessel::repr::cg_coefficient;
use qbessel::{BigFloat, QContext, Real};

fn main() -> qbessel::Result<()> {
    let c = QContext::<f64>::new(0.5)?;
    let w = QContext::<BigFloat>::new(0.5)?;
    let a = 0.7;

    println!(" n  x   2φ1 (f64)            2φ0 (f64)            2φ1 (wide)");
    for (n, x) in [(2, 5), (4, 1), (6, 0), (8, 2)] {
        let p1 = wall_poly(n, x, a, &c)?;
        let p0 = wall_poly_2phi0(n, x, a, &c)?;
        let wide = wall_poly(n, x, BigFloat::c(a), &w)?.f64();
        println!("{n:>2} {x:>2}  {p1:+.12e}  {p0:+.12e}  {wide:+.12e}");
    }

    // orthonormality on the lattice: Σ_x w_n(x) w_m(x) = δ_nm
    let dot = |n, m| (0..200).map(|x| wall_orthonormal_lattice(n, x, 2, &c) * wall_orthonormal_lattice(m, x, 2, &c)).sum::<f64>();
    println!("<3,3> = {:.15}, <3,5> = {:+.1e}", dot(3, 3), dot(3, 5));

    for (x, m, n) in [(0, 0, 0), (1, 2, 1), (2, -1, 3)] {
        println!("C({x}; {m}, {n}) = {:+.12e}", cg_coefficient(x, m, n, &c));
    }
    Ok(())
}
