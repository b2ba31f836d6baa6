//! Uniform cubic grid over points of the unit sphere, stored densely as
//! per-cell index ranges.

use crate::geom::{angle_to_chord, geodesic_dist, UnitVec, Vec3};

/// Lower corner of the gridded cube; a little below -1 so unit vectors
/// never need clamping.
const ORIGIN: f64 = -1.0 - 1e-9;

/// Buckets point indices by cubic cell. Queries return candidates from the
/// cells overlapping the query ball; callers apply the exact distance test.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    cell: f64,
    dim: i32,
    /// `items[start[c]..start[c + 1]]` are the points of cell `c`.
    start: Vec<u32>,
    items: Vec<u32>,
}

impl SpatialGrid {
    /// `cell_size` is clamped from below so the grid never has more than
    /// about 10^6 cells. Points must lie on (or within rounding of) the
    /// unit sphere.
    pub fn build<'a>(points: impl IntoIterator<Item = &'a Vec3>, cell_size: f64) -> Self {
        let cell = cell_size.max(2e-2);
        let dim = (-2.0 * ORIGIN / cell).floor() as i32 + 1;
        let mut grid = SpatialGrid {
            cell,
            dim,
            start: Vec::new(),
            items: Vec::new(),
        };
        let cells: Vec<usize> = points
            .into_iter()
            .map(|p| {
                let [x, y, z] = grid.coords(p);
                grid.flat(x, y, z)
            })
            .collect();
        let total = (dim as usize).pow(3);
        let mut start = vec![0u32; total + 1];
        for &c in &cells {
            start[c + 1] += 1;
        }
        for c in 0..total {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut items = vec![0u32; cells.len()];
        for (i, &c) in cells.iter().enumerate() {
            items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid.start = start;
        grid.items = items;
        grid
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    #[inline]
    fn coords(&self, p: &Vec3) -> [i32; 3] {
        let f = |v: f64| (((v - ORIGIN) / self.cell).floor() as i32).clamp(0, self.dim - 1);
        [f(p.x), f(p.y), f(p.z)]
    }

    #[inline]
    fn flat(&self, x: i32, y: i32, z: i32) -> usize {
        ((x * self.dim + y) * self.dim + z) as usize
    }

    #[inline]
    fn bucket(&self, x: i32, y: i32, z: i32) -> &[u32] {
        let d = self.dim;
        if x < 0 || y < 0 || z < 0 || x >= d || y >= d || z >= d {
            return &[];
        }
        let c = self.flat(x, y, z);
        &self.items[self.start[c] as usize..self.start[c + 1] as usize]
    }

    /// Calls `f` with every index whose cell intersects the axis-aligned box
    /// of half-width `radius` around `q`. Indices arrive grouped by cell, not
    /// sorted.
    pub fn for_each_candidate(&self, q: &Vec3, radius: f64, mut f: impl FnMut(usize)) {
        let lo = self.coords(&q.add_scalar(-radius));
        let hi = self.coords(&q.add_scalar(radius));
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    self.bucket(x, y, z).iter().for_each(|&i| f(i as usize));
                }
            }
        }
    }

    /// Indices of points within Euclidean distance `radius` of `q`, sorted.
    pub fn within(&self, points: &[Vec3], q: &Vec3, radius: f64) -> Vec<usize> {
        let r2 = radius * radius;
        let mut out = Vec::new();
        self.for_each_candidate(q, radius, |i| {
            if (points[i] - q).norm_squared() <= r2 {
                out.push(i);
            }
        });
        out.sort_unstable();
        out
    }

    /// Whether some point lies at geodesic distance strictly below `theta`
    /// from `q`; the same answer as comparing the full-scan minimum.
    pub fn any_within_geodesic(&self, points: &[UnitVec], q: &UnitVec, theta: f64) -> bool {
        let qv = q.vec();
        let reach = angle_to_chord(theta) * (1.0 + 1e-9) + 1e-12;
        let lo = self.coords(&qv.add_scalar(-reach));
        let hi = self.coords(&qv.add_scalar(reach));
        let reach2 = reach * reach;
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    for &i in self.bucket(x, y, z) {
                        let p = &points[i as usize];
                        if (p.vec() - qv).norm_squared() <= reach2 && geodesic_dist(q, p) < theta {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Smallest geodesic distance from `q` to any of `points` (which must be
    /// the points the grid was built from). Equal, bit for bit, to the
    /// minimum of [`geodesic_dist`] over a full scan.
    pub fn nearest_geodesic(&self, points: &[UnitVec], q: &UnitVec) -> f64 {
        self.nearest_geodesic_capped(points, q, f64::INFINITY)
    }

    /// Like [`SpatialGrid::nearest_geodesic`] when the nearest point lies
    /// within Euclidean distance `cap`; otherwise some value above `cap` in
    /// arc length (possibly infinity), found without searching further out.
    pub fn nearest_geodesic_capped(&self, points: &[UnitVec], q: &UnitVec, cap: f64) -> f64 {
        let qv = q.vec();
        let home = self.coords(qv);
        let mut best_chord2 = f64::INFINITY;
        let mut best_geo = f64::INFINITY;
        for ring in 0..=self.dim {
            self.for_each_in_ring(home, ring, |i| {
                let p = &points[i];
                let c2 = (p.vec() - qv).norm_squared();
                // a chord longer by a relative 1e-9 is a strictly longer arc,
                // far beyond the rounding of either formula
                if c2 <= best_chord2 * (1.0 + 1e-9) + 1e-30 {
                    best_chord2 = best_chord2.min(c2);
                    best_geo = best_geo.min(geodesic_dist(q, p));
                }
            });
            // Points beyond this ring are at least `ring * cell` away.
            let reach = ring as f64 * self.cell;
            let needed = best_chord2.sqrt().min(cap);
            if needed.is_finite() && needed * (1.0 + 1e-9) + 1e-12 < reach {
                break;
            }
        }
        best_geo
    }

    fn for_each_in_ring(&self, home: [i32; 3], ring: i32, mut f: impl FnMut(usize)) {
        let mut visit = |x: i32, y: i32, z: i32| {
            self.bucket(x, y, z).iter().for_each(|&i| f(i as usize));
        };
        let [hx, hy, hz] = home;
        if ring == 0 {
            visit(hx, hy, hz);
            return;
        }
        for dx in -ring..=ring {
            for dy in -ring..=ring {
                if dx.abs() == ring || dy.abs() == ring {
                    for dz in -ring..=ring {
                        visit(hx + dx, hy + dy, hz + dz);
                    }
                } else {
                    visit(hx + dx, hy + dy, hz - ring);
                    visit(hx + dx, hy + dy, hz + ring);
                }
            }
        }
    }
}
