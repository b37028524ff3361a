//! Element matrices, level-0 fronts and static condensation of one front.
//!
//! `cargo run --example element_fronts`

use mfs::{build_space, classify_level, schur_eliminate, Assembler, Continuity};

pub fn run() -> mfs::Result<()> {
    // one linear element of length h = 1/2: K = [[2,-2],[-2,2]], M = (1/12)[[2,1],[1,2]]
    let space = build_space(1, 1, Continuity::C0, 1)?;
    let asm = Assembler::new(&space);
    let em = asm.element_matrix(&[0, 0, 0])?;
    println!("linear element: K = {:?}, M = {:.5?}, load = {:?}", em.stiffness, em.mass, em.load);

    let space = build_space(2, 2, Continuity::C0, 2)?;
    let asm = Assembler::new(&space);
    let clusters = classify_level(&space, 0)?;
    let inner = clusters.iter().find(|c| !c.touches_boundary(&space)).expect("an interior cluster");
    let front = asm.build_front(inner)?;
    println!(
        "biquadratic element front at block {:?}: size {}, q = {} (bubble), r = {}",
        &inner.block[..2],
        front.size(),
        front.q(),
        front.r()
    );
    let factored = schur_eliminate(front)?;
    let r = factored.r();
    let asym = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| (factored.schur[i * r + j] - factored.schur[j * r + i]).abs())
        .fold(0.0f64, f64::max);
    println!(
        "  after condensation: {}x{} Schur complement (max asymmetry {asym:.1e}), {} flops, {} factor entries",
        r,
        r,
        factored.flops,
        factored.factor_entries()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
