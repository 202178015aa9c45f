//! Planar rasters of the parameter plane: per-cell winding numbers and the
//! connected components of the complement of a locus.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use super::{polygon_winding, BoundaryCurve};

/// Rectangular grid of `nx * ny` cells, row-major with row 0 at `im_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl GridSpec {
    /// Bounding box of the curve, widened by `pad` of its extent on every side.
    pub fn around(curve: &BoundaryCurve, nx: usize, ny: usize, pad: f64) -> Self {
        let (x0, x1, y0, y1) = curve.bounding_box();
        let (px, py) = ((x1 - x0) * pad, (y1 - y0) * pad);
        Self { nx, ny, re_min: x0 - px, re_max: x1 + px, im_min: y0 - py, im_max: y1 + py }
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / self.ny as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.re_min + (i as f64 + 0.5) * self.dx(),
            self.im_min + (j as f64 + 0.5) * self.dy(),
        )
    }

    fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fi = (z.re - self.re_min) / self.dx();
        let fj = (z.im - self.im_min) / self.dy();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }
}

/// Winding number of the curve about every cell centre.
pub fn winding_grid(curve: &BoundaryCurve, grid: &GridSpec) -> Vec<i64> {
    (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| (0..grid.nx).map(move |i| polygon_winding(&curve.points, grid.cell_center(i, j))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub winding: i64,
    pub cells: usize,
    pub touches_border: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub grid: GridSpec,
    /// Region index per cell, `None` for cells the curve passes through.
    pub labels: Vec<Option<u32>>,
    pub regions: Vec<Region>,
}

impl RegionMap {
    /// Components that do not reach the grid border and hold at least
    /// `min_cells` cells. Very small components are rasterization pockets
    /// where two branches of the curve run within a cell of each other.
    pub fn bounded(&self, min_cells: usize) -> Vec<Region> {
        self.regions
            .iter()
            .filter(|r| !r.touches_border && r.cells >= min_cells)
            .copied()
            .collect()
    }
}

/// Flood fill (4-connected) of the grid with the rasterized curve as a wall.
///
/// Filling by equal winding alone would join regions that only touch at a
/// self-intersection of the curve.
pub fn region_map(curve: &BoundaryCurve, grid: &GridSpec) -> RegionMap {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut wall = vec![false; nx * ny];
    let step = 0.25 * grid.dx().min(grid.dy());
    for s in curve.points.windows(2) {
        let (p, q) = (s[0], s[1]);
        let n = ((q - p).norm() / step).ceil() as usize + 1;
        for k in 0..=n {
            let z = p + (q - p) * (k as f64 / n as f64);
            if let Some((i, j)) = grid.cell_of(z) {
                wall[j * nx + i] = true;
            }
        }
    }

    let mut labels: Vec<Option<u32>> = vec![None; nx * ny];
    let mut regions = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if wall[start] || labels[start].is_some() {
            continue;
        }
        let id = regions.len() as u32;
        labels[start] = Some(id);
        queue.push_back(start);
        let mut cells = 0;
        let mut touches_border = false;
        while let Some(idx) = queue.pop_front() {
            cells += 1;
            let (i, j) = (idx % nx, idx / nx);
            if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                touches_border = true;
            }
            let mut visit = |n: usize| {
                if !wall[n] && labels[n].is_none() {
                    labels[n] = Some(id);
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(idx - 1);
            }
            if i + 1 < nx {
                visit(idx + 1);
            }
            if j > 0 {
                visit(idx - nx);
            }
            if j + 1 < ny {
                visit(idx + nx);
            }
        }
        let (i, j) = (start % nx, start / nx);
        let winding = polygon_winding(&curve.points, grid.cell_center(i, j));
        regions.push(Region { winding, cells, touches_border });
    }
    RegionMap { grid: *grid, labels, regions }
}
