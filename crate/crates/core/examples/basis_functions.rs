//! Open uniform knot vectors, B-spline evaluation and Gauss rules.
//!
//! `cargo run --example basis_functions`

use mfs::{eval_basis_1d, gauss_legendre, Continuity, KnotVector};

pub fn run() -> mfs::Result<()> {
    for c in [Continuity::C0, Continuity::Cpm1] {
        let kv = KnotVector::open_uniform(3, 4, c);
        println!("p=3 {c}: {} functions, knots {:?}", kv.n_functions(), kv.knots());
        for x in [0.0, 0.3, 0.5, 1.0] {
            let e = eval_basis_1d(kv.degree(), kv.knots(), x)?;
            let sum: f64 = e.values.iter().sum();
            let dsum: f64 = e.derivs.iter().sum();
            println!("  x={x}: functions {}.. values {:.4?} (sum {sum:.3}, derivative sum {dsum:.1e})", e.first, e.values);
        }
    }
    let (points, weights) = gauss_legendre(3);
    // exact value is 2/5
    let integral: f64 = points.iter().zip(&weights).map(|(x, w)| w * x.powi(4)).sum();
    println!("3-point Gauss: nodes {points:.4?}, integral of x^4 over [-1,1] = {integral:.12}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
