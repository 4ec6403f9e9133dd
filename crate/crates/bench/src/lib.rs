//! Shared corpus builders for the benchmark targets.

use nerlab_core::conll::Dataset;
use nerlab_core::synth::SynthConfig;

/// Benchmark corpus roughly the size of a small annotated dataset.
pub fn bench_corpus(sentences: usize) -> Dataset {
    SynthConfig::new(sentences, 0xBE7C).generate()
}

/// Held-out split drawn from the same lexicon.
pub fn bench_heldout(sentences: usize) -> Dataset {
    SynthConfig::new(sentences, 0xE7A1).generate()
}
