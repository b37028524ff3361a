//! Closed-form predictors next to measured counters.
//!
//! `cargo run --release --example cost_predictions`

use mfs::{build_space, compare, predict_qr, predict_total, schur_cost_model, solve, Continuity};

pub fn run() -> mfs::Result<()> {
    let (f, e) = schur_cost_model(64.0, 64.0);
    println!("cost model for q = r = 64: {f} flops, {e} entries");
    println!("predicted (q, r) for 3D c0 p=2 at level 0: {:?}", predict_qr(3, 2, Continuity::C0, 0));

    for (d, c) in [(1, Continuity::C0), (2, Continuity::Cpm1), (3, Continuity::Cpm1)] {
        let pr = predict_total(d, 3, c, 3)?;
        println!(
            "{d}D {c} p=3 s=3: flops ~ {} ({:.3e}), memory ~ {} ({:.3e})",
            pr.dominant_flops.tag, pr.dominant_flops.value, pr.dominant_memory.tag, pr.dominant_memory.value
        );
    }

    let space = build_space(2, 2, Continuity::Cpm1, 4)?;
    let (_, measured) = solve(&space)?;
    let predicted = predict_total(2, 2, Continuity::Cpm1, 4)?;
    let cmp = compare(&measured, &predicted);
    println!(
        "2D cpm1 p=2 s=4: measured/predicted flops {:.3}, memory {:.3}, drift {}",
        cmp.total_flops_ratio, cmp.total_memory_ratio, cmp.flops_drift
    );
    for l in &cmp.per_level {
        println!(
            "  level {}: flops ratio {:.3}, q ratio {:.2}, r ratio {:.2}",
            l.i, l.flops_ratio, l.q_ratio, l.r_ratio
        );
    }
    println!("cost model on measured front sizes / counter: {:.3}", measured.model_flops() / measured.total_flops as f64);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
