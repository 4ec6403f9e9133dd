//! Regenerates the committed synthetic fixtures. Run from the repo root:
//!
//! ```text
//! cargo run -p nerlab-core --example gen_fixtures
//! ```
//!
//! The outputs are deterministic; golden tests assert that the committed
//! files match what this produces.

use nerlab_core::conll::serialize_conll;
use nerlab_core::stats::compute_stats;
use nerlab_core::synth::SynthConfig;

fn main() -> std::io::Result<()> {
    let golden = SynthConfig::new(400, 42).generate();
    std::fs::write(
        "crates/core/tests/fixtures/synth_golden.conll",
        serialize_conll(&golden),
    )?;
    let stats = compute_stats(&golden).expect("golden corpus is non-empty");
    println!("golden corpus stats:");
    println!("  sentences {}", stats.sentences);
    println!("  tokens    {}", stats.tokens);
    println!("  entities  {}", stats.entities);
    println!("  per-type  {:?}", stats.per_type_counts);
    println!(
        "  e/s {} density% {}",
        stats.entities_per_sentence_display(),
        stats.entity_density_pct_display()
    );

    let train = SynthConfig::new(160, 7).generate();
    std::fs::write(
        "crates/cli/tests/fixtures/synth_train.conll",
        serialize_conll(&train),
    )?;
    let test = SynthConfig::new(60, 7001).generate();
    std::fs::write(
        "crates/cli/tests/fixtures/synth_test.conll",
        serialize_conll(&test),
    )?;
    println!(
        "cli fixtures: train {} sentences, test {} sentences",
        train.sentences.len(),
        test.sentences.len()
    );
    Ok(())
}
