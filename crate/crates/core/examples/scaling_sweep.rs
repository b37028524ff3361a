//! Scaling sweeps over the number of levels with log-log exponent fits.
//!
//! `cargo run --release --example scaling_sweep`

use mfs::{build_space, fit_scaling, solve, Continuity};

fn sweep(d: usize, p: usize, c: Continuity, levels: std::ops::RangeInclusive<usize>) -> mfs::Result<()> {
    let mut flops = Vec::new();
    let mut bytes = Vec::new();
    for s in levels {
        let space = build_space(d, p, c, s)?;
        let (_, cost) = solve(&space)?;
        let n = space.n_dofs() as f64;
        flops.push((n, cost.total_flops as f64));
        bytes.push((n, cost.total_factor_bytes as f64));
    }
    let f = fit_scaling(&flops)?;
    let m = fit_scaling(&bytes)?;
    println!(
        "{d}D {c} p={p}: flops ~ N^{:.3} (r2 {:.4}), memory ~ N^{:.3} (r2 {:.4})",
        f.exponent, f.r2, m.exponent, m.r2
    );
    Ok(())
}

pub fn run() -> mfs::Result<()> {
    sweep(1, 2, Continuity::C0, 4..=10)?;
    sweep(1, 3, Continuity::Cpm1, 4..=9)?;
    sweep(2, 1, Continuity::C0, 2..=6)?;
    sweep(2, 2, Continuity::Cpm1, 1..=4)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
