//! Parallel sounding schedules: who transmits to whom in each slot.
//!
//! `cargo run --example measurement_schedule`

use selfcal::crlb::time_to_collect;
use selfcal::topology::Topology;

fn main() -> selfcal::Result<()> {
    for t in [Topology::daisy(6, 1)?, Topology::star(6, 1)?, Topology::from_edges(6, 1, [(1, 2), (1, 3), (3, 4), (3, 5), (5, 6)])?] {
        let schedule = t.measurement_schedule(1e-3);
        schedule.validate(&t).expect("schedule covers every directed edge once");
        println!(
            "{} (N_max = {}): {} slots, {} s per round",
            t.kind_label(),
            t.max_degree(),
            time_to_collect(&t),
            schedule.collection_time()
        );
        for (i, slot) in schedule.slots.iter().enumerate() {
            let pairs: Vec<String> = slot.iter().map(|(tx, rx)| format!("{tx}->{rx}")).collect();
            println!("  slot {i:>2}: {}", pairs.join("  "));
        }
    }
    println!("\nJSON form of the daisy schedule:");
    println!("{}", serde_json::to_string(&Topology::daisy(6, 1)?.measurement_schedule(1e-3))?);
    Ok(())
}
