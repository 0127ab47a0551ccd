//! Multihop wireless systems on random disk deployments: construction via
//! partition routing and interference-graph coloring, verification under
//! distance-based and SINR success criteria, and a Monte Carlo harness that
//! measures how throughput scales with network size.

pub mod analysis;
pub mod builder;
pub mod geometry;
pub mod harness;
pub mod propagation;

pub use geometry::{build_disk_partition, Disk, Partition, Point, Segment};
