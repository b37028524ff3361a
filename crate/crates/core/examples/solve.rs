//! End-to-end solves with exact FLOP and factor-memory counters.
//!
//! The model problem `-Δu + u = 1` with natural boundary conditions has the
//! exact solution `u = 1`, whose spline coefficients are all ones.
//!
//! `cargo run --release --example solve`

use mfs::{build_space, solve, solve_with, Continuity, SolveOptions};

pub fn run() -> mfs::Result<()> {
    for (d, p, c, s) in [(1, 2, Continuity::C0, 2), (2, 3, Continuity::Cpm1, 2), (3, 1, Continuity::C0, 1)] {
        let space = build_space(d, p, c, s)?;
        let (solution, cost) = solve(&space)?;
        let err = solution.values.iter().map(|v| (v - 1.0).abs()).fold(0.0f64, f64::max);
        println!(
            "d={d} p={p} {c} s={s}: N={} residual {:.1e}, max |u - 1| {err:.1e}",
            space.n_dofs(),
            solution.residual_norm
        );
        println!("  {} flops, {} bytes of factors", cost.total_flops, cost.total_factor_bytes);
        for l in &cost.per_level {
            println!(
                "  level {}: {} fronts, q={} r={}, {} flops, {} entries",
                l.i, l.n_clusters, l.q_rep, l.r_rep, l.flops, l.entries
            );
        }
    }

    let space = build_space(2, 2, Continuity::Cpm1, 3)?;
    let (a, _) = solve(&space)?;
    let (b, _) = solve_with(&space, &SolveOptions { threads: 4 })?;
    println!("threaded run identical to sequential: {}", a == b);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
