//! Runs the whole experiment gallery with its default budgets and
//! prints one verdict line per scenario. The sufficiency benchmark and
//! the wrong-herd estimate are Monte Carlo heavy; expect a couple of
//! minutes on one core.
//!
//! ```bash
//! cargo run --release -p oblearn --example gallery_tour
//! ```

use oblearn::experiments::{run_gallery, SCENARIOS};

fn main() -> oblearn::Result<()> {
    let out = std::path::Path::new("out");
    let mut failures = 0;
    for s in &SCENARIOS {
        let t0 = std::time::Instant::now();
        let report = run_gallery(s.name, Some(out), 0)?;
        let dt = t0.elapsed().as_secs_f64();
        println!(
            "{:<4} {:<20} {:>9} {:>7.1}s  {} artifact(s)",
            s.id,
            s.name,
            if report.passed { "holds" } else { "VIOLATED" },
            dt,
            report.artifacts.len(),
        );
        if !report.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
    println!("\nreports and CSVs under {}", out.display());
    Ok(())
}
