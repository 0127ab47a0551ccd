//! Planar primitives and the explicit ring partition of a disk.
//!
//! The partition places generator sites on concentric rings so that any two
//! sites are at least `u/2` apart and every disk point is within `2u` of a
//! site. Cells are implicit: a point belongs to the nearest site (ties to the
//! lowest site index), which makes every cell convex without ever
//! materializing polygons.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("partition requires w > 0, got {0}")]
    NonPositiveScale(f64),
    #[error("partition requires radius >= 2w (radius {radius}, w {w})")]
    RadiusTooSmall { radius: f64, w: f64 },
    #[error("point ({x}, {y}) lies outside the disk of radius {radius}")]
    OutsideDisk { x: f64, y: f64, radius: f64 },
    #[error("cell sampling starved: no hits in cell {cell} after {samples} samples")]
    SamplingStarved { cell: usize, samples: usize },
}

/// A location in the plane, in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point { x, y }
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// The circular network region, centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub radius: f64,
}

impl Disk {
    pub fn new(radius: f64) -> Self {
        assert!(radius > 0.0, "disk radius must be positive");
        Disk { radius }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        p.x.hypot(p.y) <= self.radius * (1.0 + tol)
    }
}

/// A straight line segment between two points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn at(&self, t: f64) -> Point {
        Point {
            x: self.a.x + t * (self.b.x - self.a.x),
            y: self.a.y + t * (self.b.y - self.a.y),
        }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(&self.b)
    }
}

/// Relative tolerance used when deciding whether a point lies inside the disk.
const DISK_TOL: f64 = 1e-9;

/// Bisection tolerance of the cell walk, as a fraction of the segment's
/// parameter range.
const WALK_TOL: f64 = 1e-12;

/// One cell of a segment walk, with the parameter interval the segment
/// spends inside it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellFootprint {
    pub cell: usize,
    pub enter: f64,
    pub exit: f64,
}

/// Monte Carlo estimates produced by [`Partition::cell_stats`]. Both values
/// are one-sided underestimates of the true cell diameter and area.
#[derive(Clone, Copy, Debug)]
pub struct CellStats {
    pub diameter: f64,
    pub area: f64,
    pub hits: usize,
    /// Binomial standard error of the area estimate.
    pub area_std_err: f64,
}

/// Generator sites on a disk, inducing implicit nearest-site cells.
///
/// Invariants (enforced by construction, see [`build_disk_partition`]):
/// distinct sites are at least `u/2` apart, every disk point is within `2u`
/// of a site, and `w <= u < 2w`. Each cell has diameter at most `4u <= 8w`
/// and area at least `pi*u^2/16 > w^2/8`.
#[derive(Clone, Debug)]
pub struct Partition {
    sites: Vec<Point>,
    u: f64,
    w: f64,
    radius: f64,
    grid: SiteGrid,
}

impl Partition {
    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> Point {
        self.sites[i]
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Index of the nearest site; ties broken by lowest site index.
    pub fn cell_of(&self, p: &Point) -> Result<usize, GeometryError> {
        if !Disk::new(self.radius).contains(p, DISK_TOL) {
            return Err(GeometryError::OutsideDisk {
                x: p.x,
                y: p.y,
                radius: self.radius,
            });
        }
        Ok(self.nearest_site(p))
    }

    fn nearest_site(&self, p: &Point) -> usize {
        self.grid.nearest(&self.sites, p)
    }

    /// Cells traversed by `seg` from `a` to `b`, in order, without repeats.
    ///
    /// Walks the segment: from the current cell, the exit parameter is located
    /// by bisection on the "nearest site changes" predicate (valid because
    /// cells are convex, so the segment meets each cell in one interval).
    pub fn cells_intersected(&self, seg: &Segment) -> Result<Vec<usize>, GeometryError> {
        Ok(self
            .cell_footprints(seg)?
            .into_iter()
            .map(|f| f.cell)
            .collect())
    }

    /// As [`Partition::cells_intersected`], also reporting each cell's
    /// parameter interval `[enter, exit]` along the segment.
    pub fn cell_footprints(&self, seg: &Segment) -> Result<Vec<CellFootprint>, GeometryError> {
        let first = self.cell_of(&seg.a)?;
        let last = self.cell_of(&seg.b)?;
        if seg.a == seg.b {
            return Ok(vec![CellFootprint {
                cell: first,
                enter: 0.0,
                exit: 1.0,
            }]);
        }
        let mut cells = vec![CellFootprint {
            cell: first,
            enter: 0.0,
            exit: 1.0,
        }];
        let mut current = first;
        let mut t_lo = 0.0_f64;
        while current != last {
            // cell(t_lo) == current, cell(1.0) != current.
            let mut lo = t_lo;
            let mut hi = 1.0_f64;
            while hi - lo > WALK_TOL {
                let mid = 0.5 * (lo + hi);
                if self.nearest_site(&seg.at(mid)) == current {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let next = self.nearest_site(&seg.at(hi));
            debug_assert!(next != current);
            debug_assert!(
                cells.iter().all(|f| f.cell != next),
                "convex walk revisited a cell"
            );
            cells.last_mut().unwrap().exit = hi;
            cells.push(CellFootprint {
                cell: next,
                enter: hi,
                exit: 1.0,
            });
            current = next;
            t_lo = hi;
        }
        Ok(cells)
    }

    /// Monte Carlo diameter/area estimates for one cell.
    ///
    /// Rejection-samples the disk uniformly, retains points whose nearest site
    /// is `cell`; the area estimate is hit-fraction times the disk area and
    /// the diameter estimate is the max pairwise distance among retained
    /// points. Both are underestimates, which suits one-sided checks.
    pub fn cell_stats(
        &self,
        cell: usize,
        samples: usize,
        seed: u64,
    ) -> Result<CellStats, GeometryError> {
        assert!(samples >= 1000, "cell_stats requires at least 1000 samples");
        assert!(cell < self.sites.len(), "cell index out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.radius;
        let mut retained: Vec<Point> = Vec::new();
        let mut drawn = 0usize;
        while drawn < samples {
            let x = rng.gen_range(-r..=r);
            let y = rng.gen_range(-r..=r);
            if x * x + y * y > r * r {
                continue;
            }
            drawn += 1;
            let p = Point::new(x, y);
            if self.nearest_site(&p) == cell {
                retained.push(p);
            }
        }
        if retained.is_empty() {
            return Err(GeometryError::SamplingStarved { cell, samples });
        }
        let frac = retained.len() as f64 / samples as f64;
        let disk_area = PI * r * r;
        let mut diameter = 0.0_f64;
        for i in 0..retained.len() {
            for j in (i + 1)..retained.len() {
                diameter = diameter.max(retained[i].dist(&retained[j]));
            }
        }
        Ok(CellStats {
            diameter,
            area: frac * disk_area,
            hits: retained.len(),
            area_std_err: disk_area * (frac * (1.0 - frac) / samples as f64).sqrt(),
        })
    }
}

/// Builds the ring partition of a disk of the given radius.
///
/// Chooses `m` with `radius = (m + 1/2)w + r`, `0 <= r < w`, sets
/// `u = radius / (m + 1/2)`, then places one site at the center, the six
/// vertices of a regular hexagon of side `u` on ring 1, and on each ring
/// `d = 2..=m` (radius `d*u`) points walked at chord spacing `u/2`, stopping
/// so the closing chord stays in `[u/2, u]`.
pub fn build_disk_partition(radius: f64, w: f64) -> Result<Partition, GeometryError> {
    if !w.is_finite() || w <= 0.0 {
        return Err(GeometryError::NonPositiveScale(w));
    }
    if !radius.is_finite() || radius < 2.0 * w {
        return Err(GeometryError::RadiusTooSmall { radius, w });
    }
    // radius = (m + 1/2) w + r with 0 <= r < w  =>  m = floor(radius/w + 1/2) - 1
    let m = (radius / w + 0.5).floor() as usize - 1;
    debug_assert!(m >= 1);
    let u = radius / (m as f64 + 0.5);
    debug_assert!(u >= w && u < 2.0 * w * (1.0 + 1e-12));

    let mut sites = vec![Point::new(0.0, 0.0)];
    // Ring 1: regular hexagon of side u, vertices at distance u from center.
    for j in 0..6 {
        let ang = PI / 3.0 * j as f64;
        sites.push(Point::new(u * ang.cos(), u * ang.sin()));
    }
    // Rings d >= 2: chord u/2 on radius d*u means a central angle step of
    // 2*asin(1/(4d)); the closing chord rule keeps floor(2*pi/step) points.
    for d in 2..=m {
        let ring_r = d as f64 * u;
        let step = 2.0 * (1.0 / (4.0 * d as f64)).asin();
        let count = (2.0 * PI / step).floor() as usize;
        for j in 0..count {
            let ang = step * j as f64;
            sites.push(Point::new(ring_r * ang.cos(), ring_r * ang.sin()));
        }
    }

    let grid = SiteGrid::build(&sites, u, radius);
    Ok(Partition {
        sites,
        u,
        w,
        radius,
        grid,
    })
}

/// Uniform hash grid over the sites with bucket side `u`.
///
/// Every disk point is within `2u` of its nearest site, so scanning the
/// 7x7 bucket neighborhood of the query point finds every candidate at
/// minimal distance, including exact ties.
#[derive(Clone, Debug)]
struct SiteGrid {
    bucket: f64,
    cells: HashMap<(i32, i32), Vec<u32>>,
}

impl SiteGrid {
    fn build(sites: &[Point], u: f64, _radius: f64) -> Self {
        let mut cells: HashMap<(i32, i32), Vec<u32>> = HashMap::new();
        for (i, s) in sites.iter().enumerate() {
            let key = ((s.x / u).floor() as i32, (s.y / u).floor() as i32);
            cells.entry(key).or_default().push(i as u32);
        }
        SiteGrid { bucket: u, cells }
    }

    fn scan(
        &self,
        sites: &[Point],
        p: &Point,
        bx: i32,
        by: i32,
        radius: i32,
    ) -> (usize, f64) {
        let mut best = usize::MAX;
        let mut best_d2 = f64::INFINITY;
        for dx in -radius..=radius {
            for dy in -radius..=radius {
                if let Some(ids) = self.cells.get(&(bx + dx, by + dy)) {
                    for &i in ids {
                        let d2 = sites[i as usize].dist2(p);
                        let i = i as usize;
                        if d2 < best_d2 || (d2 == best_d2 && i < best) {
                            best_d2 = d2;
                            best = i;
                        }
                    }
                }
            }
        }
        (best, best_d2)
    }

    fn nearest(&self, sites: &[Point], p: &Point) -> usize {
        let bx = (p.x / self.bucket).floor() as i32;
        let by = (p.y / self.bucket).floor() as i32;
        // Any site outside the 3x3 block differs by more than one full bucket
        // in some coordinate, so it is strictly farther than `u`; a best
        // within `u` can neither be beaten nor tied from outside.
        let (best, best_d2) = self.scan(sites, p, bx, by, 1);
        if best_d2 <= self.bucket * self.bucket {
            return best;
        }
        let (best, _) = self.scan(sites, p, bx, by, 3);
        debug_assert!(best != usize::MAX, "grid search found no site");
        best
    }
}
