//! System construction for a sampled instance: straight-line routes through
//! the disk partition with balanced relay apportioning, transmitter sets via
//! greedy interference-graph coloring, round-based scheduling, and
//! independent verification of compatibility and both success criteria.

use crate::geometry::{build_disk_partition, Disk, GeometryError, Partition, Point, Segment};
use crate::propagation::{
    self, DcParams, PropagationError, PropagationModel, RadioParams, TxConfig,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("instance needs at least 2 nodes, got {0}")]
    TooFewNodes(u64),
    #[error("C too large for region: C = {c} must be below half the radius {radius}")]
    CTooLarge { c: f64, radius: f64 },
    #[error("node {node} carries {load} hops, exceeding the declared round count {l}")]
    LoadExceedsRounds { node: usize, load: u32, l: u64 },
    #[error("instance is invalid: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// A sampled deployment: node positions on the disk of radius `n^gamma` and
/// one source-destination pair per node.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub n: u64,
    pub gamma: f64,
    pub seed: u64,
    pub disk: Disk,
    pub nodes: Vec<Point>,
    pub sd_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: u64,
    gamma: f64,
    seed: u64,
    nodes: Vec<(f64, f64)>,
    pairs: Vec<(usize, usize)>,
}

impl Instance {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(InstanceJson {
            n: self.n,
            gamma: self.gamma,
            seed: self.seed,
            nodes: self.nodes.iter().map(|p| (p.x, p.y)).collect(),
            pairs: self.sd_pairs.clone(),
        })
        .expect("instance serialization cannot fail")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self, BuildError> {
        let raw: InstanceJson = serde_json::from_value(value)
            .map_err(|e| BuildError::InvalidInstance(e.to_string()))?;
        let disk = Disk::new((raw.n as f64).powf(raw.gamma));
        let inst = Instance {
            n: raw.n,
            gamma: raw.gamma,
            seed: raw.seed,
            disk,
            nodes: raw.nodes.into_iter().map(|(x, y)| Point::new(x, y)).collect(),
            sd_pairs: raw.pairs,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.nodes.len() != self.n as usize || self.sd_pairs.len() != self.n as usize {
            return Err(BuildError::InvalidInstance(format!(
                "expected {} nodes and pairs, got {} and {}",
                self.n,
                self.nodes.len(),
                self.sd_pairs.len()
            )));
        }
        for (i, p) in self.nodes.iter().enumerate() {
            if !self.disk.contains(p, 1e-9) {
                return Err(BuildError::InvalidInstance(format!(
                    "node {i} at ({}, {}) lies outside the disk",
                    p.x, p.y
                )));
            }
        }
        for (i, &(s, d)) in self.sd_pairs.iter().enumerate() {
            if s >= self.nodes.len() || d >= self.nodes.len() || s == d {
                return Err(BuildError::InvalidInstance(format!(
                    "pair {i} = ({s}, {d}) is out of range or degenerate"
                )));
            }
        }
        Ok(())
    }
}

/// Samples `n` node positions uniformly on the disk of radius `n^gamma` and
/// a destination for each source, uniform over the other nodes. Fully
/// determined by the seed.
pub fn sample_instance(n: u64, gamma: f64, seed: u64) -> Result<Instance, BuildError> {
    if n < 2 {
        return Err(BuildError::TooFewNodes(n));
    }
    let radius = (n as f64).powf(gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let r = radius * rng.gen::<f64>().sqrt();
        let ang = rng.gen_range(0.0..std::f64::consts::TAU);
        nodes.push(Point::new(r * ang.cos(), r * ang.sin()));
    }
    let mut sd_pairs = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let k = rng.gen_range(0..n as usize - 1);
        let d = if k >= i { k + 1 } else { k };
        sd_pairs.push((i, d));
    }
    Ok(Instance {
        n,
        gamma,
        seed,
        disk: Disk::new(radius),
        nodes,
        sd_pairs,
    })
}

/// One multihop route: consecutive hops `(transmitter, receiver)` chaining
/// from the source to the destination, loop-free.
#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    pub pair: usize,
    pub hops: Vec<(usize, usize)>,
}

/// Outcome of route selection over the partition.
#[derive(Clone, Debug)]
pub struct RoutePlan {
    pub routes: Vec<Route>,
    /// Number of source-destination lines crossing each cell.
    pub cell_x: Vec<u32>,
    /// Number of nodes in each cell.
    pub cell_y: Vec<u32>,
    /// Maximum per-node transmit load; drives the round count.
    pub l: u64,
    /// `max over intersected cells of ceil(X_i / Y_i)`, the analysis bound.
    pub load_ceiling: u64,
    pub feasible: bool,
    pub empty_cell_hit: bool,
    pub max_hop_length: f64,
    /// Cell count of the partition used.
    pub m: u64,
}

/// Builds a route for every pair by intersecting its straight line with the
/// partition cells (`z = C/2`, partition scale `w = z/8`) and apportioning
/// relay duty as equally as possible within each cell.
///
/// Requires `C` below half the disk radius. If any intersected cell holds no
/// node the plan is infeasible (reported, not retried).
pub fn build_routes(instance: &Instance, c: f64) -> Result<RoutePlan, BuildError> {
    let partition = route_partition(instance, c)?;
    build_routes_in(instance, c, &partition)
}

/// The partition used by route selection: cells of diameter at most `C/2`.
pub fn route_partition(instance: &Instance, c: f64) -> Result<Partition, BuildError> {
    let radius = instance.disk.radius;
    if !c.is_finite() || c <= 0.0 || c >= radius / 2.0 {
        return Err(BuildError::CTooLarge { c, radius });
    }
    Ok(build_disk_partition(radius, c / 16.0)?)
}

/// As [`build_routes`], reusing a prebuilt partition (it must come from
/// [`route_partition`] with the same `C`).
pub fn build_routes_in(
    instance: &Instance,
    c: f64,
    partition: &Partition,
) -> Result<RoutePlan, BuildError> {
    let radius = instance.disk.radius;
    if !c.is_finite() || c <= 0.0 || c >= radius / 2.0 {
        return Err(BuildError::CTooLarge { c, radius });
    }
    instance.validate()?;
    let m = partition.len();

    let mut cell_nodes: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (i, p) in instance.nodes.iter().enumerate() {
        cell_nodes[partition.cell_of(p)?].push(i as u32);
    }
    let cell_y: Vec<u32> = cell_nodes.iter().map(|v| v.len() as u32).collect();

    let mut cell_x = vec![0u32; m];
    let mut route_cells: Vec<Vec<usize>> = Vec::with_capacity(instance.sd_pairs.len());
    let mut feasible = true;
    for &(s, d) in &instance.sd_pairs {
        let seg = Segment::new(instance.nodes[s], instance.nodes[d]);
        let cells = partition.cells_intersected(&seg)?;
        for &cell in &cells {
            cell_x[cell] += 1;
            if cell_y[cell] == 0 {
                feasible = false;
            }
        }
        route_cells.push(cells);
    }

    let mut load_ceiling = 0u64;
    for cell in 0..m {
        if cell_x[cell] > 0 && cell_y[cell] > 0 {
            let ceil = (cell_x[cell] as u64).div_ceil(cell_y[cell] as u64);
            load_ceiling = load_ceiling.max(ceil);
        }
    }

    if !feasible {
        return Ok(RoutePlan {
            routes: Vec::new(),
            cell_x,
            cell_y,
            l: 0,
            load_ceiling,
            feasible: false,
            empty_cell_hit: true,
            max_hop_length: 0.0,
            m: m as u64,
        });
    }

    // Relay duty per cell: only routes that cross the cell strictly between
    // their endpoint cells need a relay there; endpoint cells contribute the
    // source and destination themselves.
    let mut interior_count = vec![0u32; m];
    let mut relay_of: Vec<Vec<u32>> = vec![Vec::new(); instance.sd_pairs.len()];
    for (ri, cells) in route_cells.iter().enumerate() {
        if cells.len() < 3 {
            continue;
        }
        for &cell in &cells[1..cells.len() - 1] {
            let members = &cell_nodes[cell];
            let relay = members[(interior_count[cell] as usize) % members.len()];
            interior_count[cell] += 1;
            relay_of[ri].push(relay);
        }
    }

    let mut node_load = vec![0u32; instance.nodes.len()];
    let mut routes = Vec::with_capacity(instance.sd_pairs.len());
    let mut max_hop_length = 0.0_f64;
    for (ri, &(s, d)) in instance.sd_pairs.iter().enumerate() {
        let mut transmitters: Vec<usize> = Vec::with_capacity(relay_of[ri].len() + 1);
        transmitters.push(s);
        transmitters.extend(relay_of[ri].iter().map(|&v| v as usize));
        let mut hops = Vec::with_capacity(transmitters.len());
        for (j, &tx) in transmitters.iter().enumerate() {
            let rx = if j + 1 < transmitters.len() {
                transmitters[j + 1]
            } else {
                d
            };
            hops.push((tx, rx));
            node_load[tx] += 1;
            max_hop_length =
                max_hop_length.max(instance.nodes[tx].dist(&instance.nodes[rx]));
        }
        debug_assert!({
            let mut seen = transmitters.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == transmitters.len()
        });
        routes.push(Route { pair: ri, hops });
    }
    let l = node_load.iter().copied().max().unwrap_or(0) as u64;
    debug_assert!(l <= load_ceiling);

    Ok(RoutePlan {
        routes,
        cell_x,
        cell_y,
        l,
        load_ceiling,
        feasible: true,
        empty_cell_hit: false,
        max_hop_length,
        m: m as u64,
    })
}

/// Node coloring of the interference graph: edges join nodes at distance
/// `C(2+D)` or less; same-color nodes may transmit simultaneously.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmitterSets {
    /// Color of each node, in `0..s`.
    pub color_of: Vec<u32>,
    /// Number of colors used.
    pub s: u64,
    pub max_degree: u64,
}

/// Greedy coloring in node-index order with the lowest available color;
/// uses at most `max_degree + 1` colors.
pub fn color_transmitters(instance: &Instance, c: f64, d: f64) -> TransmitterSets {
    let n = instance.nodes.len();
    let threshold2 = {
        let t = c * (2.0 + d);
        t * t
    };
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if instance.nodes[i].dist2(&instance.nodes[j]) <= threshold2 {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    let max_degree = adj.iter().map(|v| v.len()).max().unwrap_or(0) as u64;
    let mut color_of = vec![u32::MAX; n];
    let mut used = Vec::new();
    for i in 0..n {
        used.clear();
        used.resize(adj[i].len() + 1, false);
        for &j in &adj[i] {
            let cj = color_of[j as usize];
            if cj != u32::MAX && (cj as usize) < used.len() {
                used[cj as usize] = true;
            }
        }
        color_of[i] = used.iter().position(|&u| !u).unwrap() as u32;
    }
    let s = color_of.iter().copied().max().map_or(0, |c| c as u64 + 1);
    TransmitterSets {
        color_of,
        s,
        max_degree,
    }
}

/// A route with one slot per hop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduledRoute {
    pub pair: usize,
    pub hops: Vec<(usize, usize)>,
    pub slots: Vec<usize>,
}

/// A compatible set of scheduled routes operating with the given period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct System {
    pub period: usize,
    pub routes: Vec<ScheduledRoute>,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "S")]
    pub s: u64,
}

impl System {
    /// Hops transmitting in each slot; index 0 holds slot 1.
    pub fn hop_sets(&self) -> Vec<Vec<(usize, usize)>> {
        let mut sets = vec![Vec::new(); self.period];
        for route in &self.routes {
            for (hop, &slot) in route.hops.iter().zip(&route.slots) {
                sets[slot - 1].push(*hop);
            }
        }
        sets
    }
}

/// Schedules every hop in rounds: round `l`, slot `(l-1)S + j`, hosts for
/// each node of color `j` its next unscheduled hop in route-index order.
/// The period is `L * S`.
pub fn schedule(
    routes: &[Route],
    txsets: &TransmitterSets,
    l: u64,
) -> Result<System, BuildError> {
    let n = txsets.color_of.len();
    let mut pending: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ri, route) in routes.iter().enumerate() {
        for (hi, &(tx, _)) in route.hops.iter().enumerate() {
            pending[tx].push((ri, hi));
        }
    }
    for (node, hops) in pending.iter().enumerate() {
        if hops.len() as u64 > l {
            return Err(BuildError::LoadExceedsRounds {
                node,
                load: hops.len() as u32,
                l,
            });
        }
    }
    let s = txsets.s as usize;
    let mut scheduled: Vec<ScheduledRoute> = routes
        .iter()
        .map(|r| ScheduledRoute {
            pair: r.pair,
            hops: r.hops.clone(),
            slots: vec![0; r.hops.len()],
        })
        .collect();
    for (node, hops) in pending.iter().enumerate() {
        let color = txsets.color_of[node] as usize;
        for (round, &(ri, hi)) in hops.iter().enumerate() {
            scheduled[ri].slots[hi] = round * s + color + 1;
        }
    }
    let system = System {
        period: (l as usize) * s,
        routes: scheduled,
        l,
        s: txsets.s,
    };
    debug_assert!(verify_compatibility(&system));
    Ok(system)
}

/// Independent compatibility audit: no node transmits twice in one slot.
/// Does not trust the construction; re-derives the per-slot transmitters.
pub fn verify_compatibility(system: &System) -> bool {
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for route in &system.routes {
        if route.hops.len() != route.slots.len() {
            return false;
        }
        for (&(tx, _), &slot) in route.hops.iter().zip(&route.slots) {
            if slot == 0 || slot > system.period {
                return false;
            }
            seen.push((slot, tx));
        }
    }
    let len = seen.len();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == len
}

/// Per-slot verdicts of the distance criterion.
#[derive(Clone, Debug)]
pub struct DcVerdict {
    pub per_slot: Vec<bool>,
    pub ok: bool,
}

/// Checks, slot by slot, that every hop is at most `C` long and that the
/// slot's transmitters are pairwise at least `C(2+D)` apart.
pub fn verify_dc_success(system: &System, instance: &Instance, dc: &DcParams) -> DcVerdict {
    let spacing2 = dc.spacing() * dc.spacing();
    let mut per_slot = Vec::with_capacity(system.period);
    for hops in system.hop_sets() {
        let mut ok = true;
        for &(tx, rx) in &hops {
            if instance.nodes[tx].dist(&instance.nodes[rx]) > dc.c {
                ok = false;
            }
        }
        for i in 0..hops.len() {
            for j in (i + 1)..hops.len() {
                if instance.nodes[hops[i].0].dist2(&instance.nodes[hops[j].0]) < spacing2 {
                    ok = false;
                }
            }
        }
        per_slot.push(ok);
    }
    let ok = per_slot.iter().all(|&b| b);
    DcVerdict { per_slot, ok }
}

/// A hop that failed the SINR threshold.
#[derive(Clone, Copy, Debug)]
pub struct FailingHop {
    pub slot: usize,
    pub tx: usize,
    pub rx: usize,
    pub sinr: f64,
}

/// Per-slot SINR report.
#[derive(Clone, Debug)]
pub struct SinrVerdict {
    /// Minimum SINR over the hops of each slot; empty slots report infinity.
    pub per_slot_min: Vec<f64>,
    pub failing: Vec<FailingHop>,
    pub ok: bool,
}

/// Computes the exact SINR of every hop against all other same-slot
/// transmitters and compares with the threshold in `radio`.
pub fn verify_sinr_success(
    system: &System,
    instance: &Instance,
    radio: &RadioParams,
    model: &PropagationModel,
) -> Result<SinrVerdict, BuildError> {
    let mut per_slot_min = Vec::with_capacity(system.period);
    let mut failing = Vec::new();
    for (slot_idx, hops) in system.hop_sets().iter().enumerate() {
        let mut slot_min = f64::INFINITY;
        for (hi, &(tx, rx)) in hops.iter().enumerate() {
            let interferers: Vec<Point> = hops
                .iter()
                .enumerate()
                .filter(|&(hj, _)| hj != hi)
                .map(|(_, &(other_tx, _))| instance.nodes[other_tx])
                .collect();
            let cfg = TxConfig::new(instance.nodes[tx], instance.nodes[rx], interferers)?;
            let value = propagation::sinr(&cfg, radio, model)?;
            slot_min = slot_min.min(value);
            if value < radio.beta {
                failing.push(FailingHop {
                    slot: slot_idx + 1,
                    tx,
                    rx,
                    sinr: value,
                });
            }
        }
        per_slot_min.push(slot_min);
    }
    let ok = failing.is_empty();
    Ok(SinrVerdict {
        per_slot_min,
        failing,
        ok,
    })
}

/// Throughput of a successful system, in bits per slot per pair.
pub fn throughput(system: &System, w: f64) -> f64 {
    assert!(system.period > 0, "throughput of an empty system");
    w / system.period as f64
}

/// Summary of one construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildReport {
    pub feasible: bool,
    pub empty_cell_hit: bool,
    /// Max per-node route load (rounds); absent when infeasible.
    #[serde(rename = "L")]
    pub l: Option<u64>,
    #[serde(rename = "S")]
    pub s: u64,
    /// Cell count of the route partition.
    #[serde(rename = "M")]
    pub m: u64,
    pub p: Option<u64>,
    pub lambda: Option<f64>,
    pub max_hop_length: Option<f64>,
}

/// Full construction pipeline: routes, coloring, schedule.
pub struct BuildOutcome {
    pub report: BuildReport,
    pub system: Option<System>,
    pub plan: RoutePlan,
    pub txsets: TransmitterSets,
}

/// Runs route selection, coloring and scheduling; on an infeasible instance
/// the report carries `feasible = false` and no system is produced.
pub fn build(instance: &Instance, dc: &DcParams, w_bits: f64) -> Result<BuildOutcome, BuildError> {
    let partition = route_partition(instance, dc.c)?;
    build_in(instance, dc, w_bits, &partition)
}

/// As [`build`], reusing a prebuilt route partition.
pub fn build_in(
    instance: &Instance,
    dc: &DcParams,
    w_bits: f64,
    partition: &Partition,
) -> Result<BuildOutcome, BuildError> {
    let plan = build_routes_in(instance, dc.c, partition)?;
    let txsets = color_transmitters(instance, dc.c, dc.d);
    if !plan.feasible {
        let report = BuildReport {
            feasible: false,
            empty_cell_hit: plan.empty_cell_hit,
            l: None,
            s: txsets.s,
            m: plan.m,
            p: None,
            lambda: None,
            max_hop_length: None,
        };
        return Ok(BuildOutcome {
            report,
            system: None,
            plan,
            txsets,
        });
    }
    let system = schedule(&plan.routes, &txsets, plan.l)?;
    let report = BuildReport {
        feasible: true,
        empty_cell_hit: false,
        l: Some(plan.l),
        s: txsets.s,
        m: plan.m,
        p: Some(system.period as u64),
        lambda: Some(throughput(&system, w_bits)),
        max_hop_length: Some(plan.max_hop_length),
    };
    Ok(BuildOutcome {
        report,
        system: Some(system),
        plan,
        txsets,
    })
}
