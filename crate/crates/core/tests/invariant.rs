//! Runs synthesis with the per-step dense invariant check enabled. Kept as
//! its own test binary so the environment variable stays process-local.

use pauli_synth::bench::{self, RandomSpec};
use pauli_synth::synth::{self, Mode, SynthConfig, CHECK_ENV};
use pauli_synth::Topology;

#[test]
fn every_step_preserves_the_product() {
    std::env::set_var(CHECK_ENV, "1");
    let topologies = [Topology::line(4), Topology::cycle(5), Topology::complete(3), Topology::grid(2, 2)];
    for (i, topo) in topologies.iter().enumerate() {
        for seed in 0..10u64 {
            let poly = bench::random_polynomial(&RandomSpec::new(topo.num_qubits(), 12, 100 * i as u64 + seed)).unwrap();
            for mode in [Mode::ArbitraryOrder, Mode::CommutingSets] {
                let cfg = SynthConfig { mode, ..SynthConfig::default() };
                // panics inside synthesis if the invariant breaks
                synth::synthesize(&poly, topo, &cfg).unwrap();
            }
        }
    }
}
