//! Build a few wiring topologies and inspect their structure.
//!
//! `cargo run --example topology_analysis`

use selfcal::topology::Topology;

fn main() -> selfcal::Result<()> {
    // Three branches of length two hanging off antenna 3.
    let tree = Topology::from_edges(7, 3, [(3, 1), (1, 2), (3, 4), (4, 5), (3, 6), (6, 7)])?;
    let candidates = [
        ("star(8, 1)", Topology::star(8, 1)?),
        ("daisy(8, 1)", Topology::daisy(8, 1)?),
        ("daisy(8, 4)", Topology::daisy(8, 4)?),
        ("branching tree", tree),
    ];

    for (name, t) in &candidates {
        let profile = t.calibration_distances();
        println!("{name}: {} antennas, reference {}, kind {}", t.m(), t.reference(), t.kind_label());
        println!("  edges        {:?}", t.edges());
        println!("  max degree   {}", t.max_degree());
        println!("  distances    {:?}", profile.antennas.iter().zip(&profile.distances).collect::<Vec<_>>());
        println!("  mean d       {} ({:.4})", profile.mean, selfcal::rational::to_f64(profile.mean));
        println!("  chains       {:?}", t.decompose_chains());
    }

    // Invalid wiring is rejected with a specific reason.
    let cycle = Topology::from_edges(4, 1, [(1, 2), (2, 3), (3, 1)]);
    println!("\ncyclic candidate: {}", cycle.unwrap_err());
    let matrix = candidates[3].1.interconnection_matrix();
    println!("interconnection matrix of the branching tree:\n{matrix}");
    Ok(())
}
