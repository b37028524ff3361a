//! Spline spaces, basis supports and the cluster hierarchy.
//!
//! `cargo run --example spline_space`

use mfs::{build_space, classify_level, dof_support, Continuity};

pub fn run() -> mfs::Result<()> {
    for (d, p, c, s) in [(1, 2, Continuity::C0, 2), (1, 2, Continuity::Cpm1, 1), (2, 3, Continuity::Cpm1, 2)] {
        let space = build_space(d, p, c, s)?;
        println!(
            "d={d} p={p} {c} s={s}: {} elements/dim, {} dofs/dim, N={}",
            space.elems_per_dim(),
            space.dofs_per_dim(),
            space.n_dofs()
        );
        for i in 0..=s {
            let clusters = classify_level(&space, i)?;
            let q: usize = clusters.iter().map(|cl| cl.q()).sum();
            println!("  level {i}: {} clusters, {q} unknowns eliminated", clusters.len());
        }
    }

    let space = build_space(1, 2, Continuity::Cpm1, 1)?;
    for j in 0..space.dofs_per_dim() {
        let sup = dof_support(&space, &[j, 0, 0])?;
        println!(
            "  cpm1 p=2 dof {j}: elements {}..={}, eliminated at level {}",
            sup.lo[0],
            sup.hi[0],
            space.dof_level(j)
        );
    }
    let l0 = classify_level(&space, 0)?;
    println!("  first cluster: interior {:?}, interface {:?}", l0[0].interior, l0[0].interface);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
