//! The elimination tree, its schedule and a JSON dump.
//!
//! `cargo run --example elimination_tree`

use mfs::{build_space, build_tree, schedule, Continuity, NodeId};

pub fn run() -> mfs::Result<()> {
    // eight trilinear elements
    let space = build_space(3, 1, Continuity::C0, 1)?;
    let tree = build_tree(&space)?;
    println!("3D trilinear, s=1: {} nodes, N = {}", tree.n_nodes(), space.n_dofs());
    for (i, level) in tree.levels().iter().enumerate() {
        let sizes: Vec<_> = level.iter().map(|c| (c.q(), c.r())).collect();
        println!("  level {i}: (q, r) = {sizes:?}");
    }

    let space = build_space(1, 2, Continuity::C0, 2)?;
    let tree = build_tree(&space)?;
    let plan = schedule(&tree);
    let show = |ids: &[NodeId]| ids.iter().map(|id| format!("{}.{}", id.level, id.index)).collect::<Vec<_>>().join(" ");
    println!("1D quadratic, s=2: elimination {}", show(&plan.elimination));
    println!("  back-substitution {}", show(&plan.back_substitution));
    println!("  children of the root: {:?}", tree.children(NodeId { level: 2, index: 0 }));
    println!("{}", serde_json::to_string(&tree.dump()).expect("serializable"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
