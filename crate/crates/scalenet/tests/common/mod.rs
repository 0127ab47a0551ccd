//! Shared helpers for integration tests.
//!
//! Random deployments at test scale are almost never feasible (the route
//! partition has far more cells than there are nodes), so the tests that
//! need working systems construct them deliberately: nodes are placed one
//! per partition cell along straight chords, which makes every
//! source-destination segment cross only occupied cells.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalenet::builder::Instance;
use scalenet::geometry::{build_disk_partition, Disk, Point, Segment};

/// Places one node inside every cell crossed by each chord (all chords must
/// lie inside the unit disk) and pairs each node with another node of the
/// same chain at chain-distance at most `pair_span`.
pub fn chain_instance(c: f64, chords: &[(Point, Point)], pair_span: usize, seed: u64) -> Instance {
    let partition = build_disk_partition(1.0, c / 16.0).expect("partition");
    let mut nodes: Vec<Point> = Vec::new();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for &(a, b) in chords {
        let seg = Segment::new(a, b);
        // One node at the parameter midpoint of every crossed cell, so any
        // sub-segment between two chain nodes meets only occupied cells.
        let mut chain = Vec::new();
        for footprint in partition.cell_footprints(&seg).expect("inside disk") {
            chain.push(nodes.len());
            nodes.push(seg.at(0.5 * (footprint.enter + footprint.exit)));
        }
        chains.push(chain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sd_pairs = vec![(0usize, 0usize); nodes.len()];
    for chain in &chains {
        for (pos, &node) in chain.iter().enumerate() {
            let lo = pos.saturating_sub(pair_span);
            let hi = (pos + pair_span).min(chain.len() - 1);
            let dest = loop {
                let cand = rng.gen_range(lo..=hi);
                if cand != pos {
                    break chain[cand];
                }
            };
            sd_pairs[node] = (node, dest);
        }
    }
    Instance {
        n: nodes.len() as u64,
        gamma: 0.0,
        seed,
        disk: Disk::new(1.0),
        nodes,
        sd_pairs,
    }
}

/// A single diameter-ish chord through generic territory.
pub fn single_chain(c: f64, seed: u64) -> Instance {
    chain_instance(
        c,
        &[(Point::new(-0.83, -0.11), Point::new(0.79, 0.17))],
        4,
        seed,
    )
}

/// Three roughly parallel chords; with transmitter spacing below the chord
/// separation the color classes mix nodes of different chains, so slots
/// carry several simultaneous transmitters.
pub fn parallel_chains(c: f64, seed: u64) -> Instance {
    chain_instance(
        c,
        &[
            (Point::new(-0.72, -0.41), Point::new(0.70, -0.38)),
            (Point::new(-0.80, 0.02), Point::new(0.78, 0.05)),
            (Point::new(-0.69, 0.44), Point::new(0.71, 0.47)),
        ],
        3,
        seed,
    )
}
