//! Grid-based component counting for zero sets in `[-L, L]^n`.
//!
//! Function signs are sampled on the `(r + 1)^n` vertices of a uniform grid.
//! A cell belongs to the surface when its corner signs are not all strictly
//! positive or all strictly negative; face-adjacent surface cells are merged
//! with a union-find. Components whose cells reach the outer layer of the
//! grid are reported as unbounded.

mod mesh;
mod nesting;

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadric::{radial_profile, spectral, substitute, QuarticCoefficients, DEFAULT_TOL};
use crate::Evaluate;

pub use mesh::{export_mesh, write_mesh, MeshFormat, MeshSummary};
pub use nesting::{nesting, Nesting};

/// Environment variable holding the oracle memory budget in bytes.
pub const MEM_BUDGET_ENV: &str = "COXVAR_MEM_BUDGET";
pub const DEFAULT_MEM_BUDGET: u64 = 1 << 30;
pub const MIN_RESOLUTION: usize = 16;

/// Memory budget from [`MEM_BUDGET_ENV`], falling back to 1 GiB.
pub fn memory_budget() -> u64 {
    std::env::var(MEM_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEM_BUDGET)
}

/// A uniform grid of `r^n` cells on `[-L, L]^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "r")]
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64, resolution: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::Unsupported(format!("the grid oracle supports n in 2..=4, got {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!("box half-width must be positive, got {half_width}")));
        }
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidArgument(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let grid = Self {
            n,
            half_width,
            resolution,
        };
        if grid.cell_count()? >= u64::from(u32::MAX) {
            return Err(Error::ResourceLimit {
                needed: grid.cell_count()?,
                budget: u64::from(u32::MAX) - 1,
            });
        }
        Ok(grid)
    }

    pub fn default_resolution(n: usize) -> usize {
        match n {
            2 => 512,
            3 => 128,
            _ => 48,
        }
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    /// Coordinate of grid line `i` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        if i == self.resolution {
            self.half_width
        } else {
            -self.half_width + self.cell_size() * i as f64
        }
    }

    fn pow(base: usize, n: usize) -> Result<u64> {
        (base as u64)
            .checked_pow(n as u32)
            .ok_or(Error::Overflow("grid size"))
    }

    pub fn cell_count(&self) -> Result<u64> {
        Self::pow(self.resolution, self.n)
    }

    pub fn vertex_count(&self) -> Result<u64> {
        Self::pow(self.resolution + 1, self.n)
    }

    /// Bytes needed by [`count_components`]: one sign byte per vertex and,
    /// per cell, a surface flag, union-find parent and rank, and a label.
    pub fn memory_estimate(&self) -> Result<u64> {
        let cells = self.cell_count()?;
        cells
            .checked_mul(10)
            .and_then(|b| b.checked_add(self.vertex_count().ok()?))
            .ok_or(Error::Overflow("memory estimate"))
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        let needed = self.memory_estimate()?;
        if needed > budget {
            return Err(Error::ResourceLimit { needed, budget });
        }
        Ok(())
    }
}

/// Box half-width used when the spectral data gives no scale.
pub const DEGENERATE_HALF_WIDTH: f64 = 8.0;

/// Picks a box large enough for the features of `q` with the default
/// resolution for its dimension.
///
/// The base size is `4 max(1, E^{1/2^m})` with `E` the larger of the centre
/// coordinate and `|F(c)| / min |λ|` of the substituted quadric, or
/// [`DEGENERATE_HALF_WIDTH`] without a centre. It is then
/// widened to twice the largest radial feature of the chamber profile (the
/// outer end of compact pieces, the inner end of unbounded ones).
pub fn auto_box(q: &QuarticCoefficients) -> Result<GridSpec> {
    let qf = substitute(q);
    let sd = spectral(&qf);
    let zero = DEFAULT_TOL * qf.zero_scale();
    let root = 1.0 / f64::from(1u32 << q.m);

    let min_eig = [sd.lambda_rep, sd.lambda_axis]
        .into_iter()
        .map(f64::abs)
        .filter(|&v| v > zero)
        .fold(f64::INFINITY, f64::min);
    let mut half_width = match (sd.center, sd.center_value) {
        (Some(c), Some(fc)) if min_eig.is_finite() => {
            let extent = c.abs().max(fc.abs() / min_eig);
            4.0 * extent.powf(root).max(1.0)
        }
        _ => DEGENERATE_HALF_WIDTH,
    };

    if let Ok(pieces) = radial_profile(q, DEFAULT_TOL) {
        for p in &pieces {
            let s = p.s_max.unwrap_or(p.s_min);
            if s.is_finite() {
                half_width = half_width.max(2.0 * s.powf(root));
            }
        }
    }
    GridSpec::new(q.n, half_width, GridSpec::default_resolution(q.n))
}

/// Per-component statistics in cell units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStats {
    pub label: u32,
    pub cells: u64,
    pub bbox_min: Vec<usize>,
    pub bbox_max: Vec<usize>,
    pub touches_boundary: bool,
    /// Lowest linear index among the component's cells.
    pub first_cell: usize,
}

impl ComponentStats {
    pub fn compact(&self) -> bool {
        !self.touches_boundary
    }

    /// Whether `other`'s bounding box lies inside this one.
    pub fn bbox_contains(&self, other: &Self) -> bool {
        self.bbox_min.iter().zip(&other.bbox_min).all(|(a, b)| a <= b)
            && self.bbox_max.iter().zip(&other.bbox_max).all(|(a, b)| a >= b)
    }
}

/// Cell labels and vertex signs of a processed grid.
#[derive(Debug, Clone)]
pub struct LabeledGrid {
    pub grid: GridSpec,
    signs: Vec<i8>,
    labels: Vec<u32>,
    pub components: Vec<ComponentStats>,
}

const NO_LABEL: u32 = u32::MAX;

impl LabeledGrid {
    pub fn cell_index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.grid.resolution + c)
    }

    pub fn cell_coords(&self, mut index: usize) -> Vec<usize> {
        let r = self.grid.resolution;
        (0..self.grid.n)
            .map(|_| {
                let c = index % r;
                index /= r;
                c
            })
            .collect()
    }

    pub fn label(&self, cell: usize) -> Option<u32> {
        let l = self.labels[cell];
        (l != NO_LABEL).then_some(l)
    }

    /// Common corner sign of a cell off the surface.
    pub fn cell_sign(&self, cell: usize) -> Option<i8> {
        if self.labels[cell] != NO_LABEL {
            return None;
        }
        let coords = self.cell_coords(cell);
        let v = coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * (self.grid.resolution + 1) + c);
        Some(self.signs[v])
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Samples `f` and labels the surface cells of `grid`.
pub fn label_components<E: Evaluate + ?Sized>(f: &E, grid: &GridSpec) -> Result<LabeledGrid> {
    label_components_with_budget(f, grid, memory_budget())
}

pub fn label_components_with_budget<E: Evaluate + ?Sized>(
    f: &E,
    grid: &GridSpec,
    budget: u64,
) -> Result<LabeledGrid> {
    let n = grid.n;
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    grid.check_budget(budget)?;
    let r = grid.resolution;
    let rv = r + 1;
    let n_vertices = grid.vertex_count()? as usize;
    let n_cells = grid.cell_count()? as usize;

    const CHUNK: usize = 4096;
    let mut signs = vec![0i8; n_vertices];
    signs.par_chunks_mut(CHUNK).enumerate().for_each(|(k, chunk)| {
        let mut x = vec![0.0; n];
        for (j, s) in chunk.iter_mut().enumerate() {
            let mut idx = k * CHUNK + j;
            for xi in x.iter_mut() {
                *xi = grid.coord(idx % rv);
                idx /= rv;
            }
            *s = sign_of(f.value(&x));
        }
    });

    let corner_offsets: Vec<usize> = (0..1usize << n)
        .map(|mask| {
            (0..n)
                .filter(|d| mask >> d & 1 == 1)
                .map(|d| rv.pow(d as u32))
                .sum()
        })
        .collect();
    let mut surface = vec![false; n_cells];
    surface.par_chunks_mut(CHUNK).enumerate().for_each(|(k, chunk)| {
        for (j, s) in chunk.iter_mut().enumerate() {
            let mut idx = k * CHUNK + j;
            let mut base = 0;
            let mut stride = 1;
            for _ in 0..n {
                base += (idx % r) * stride;
                idx /= r;
                stride *= rv;
            }
            let first = signs[base];
            *s = first == 0 || corner_offsets[1..].iter().any(|&o| signs[base + o] != first);
        }
    });

    let cell_strides: Vec<usize> = (0..n).map(|d| r.pow(d as u32)).collect();
    let mut uf = UnionFind::<u32>::new(n_cells);
    let mut coords = vec![0usize; n];
    for cell in 0..n_cells {
        if surface[cell] {
            for d in 0..n {
                if coords[d] + 1 < r && surface[cell + cell_strides[d]] {
                    uf.union(cell as u32, (cell + cell_strides[d]) as u32);
                }
            }
        }
        advance(&mut coords, r);
    }

    let mut labels = vec![NO_LABEL; n_cells];
    let mut by_root: HashMap<u32, u32> = HashMap::new();
    let mut components: Vec<ComponentStats> = Vec::new();
    coords.iter_mut().for_each(|c| *c = 0);
    for cell in 0..n_cells {
        if surface[cell] {
            let root = uf.find_mut(cell as u32);
            let next = components.len() as u32;
            let label = *by_root.entry(root).or_insert(next);
            if label == next {
                components.push(ComponentStats {
                    label,
                    cells: 0,
                    bbox_min: coords.clone(),
                    bbox_max: coords.clone(),
                    touches_boundary: false,
                    first_cell: cell,
                });
            }
            let st = &mut components[label as usize];
            st.cells += 1;
            for ((lo, hi), &c) in st.bbox_min.iter_mut().zip(&mut st.bbox_max).zip(&coords) {
                *lo = (*lo).min(c);
                *hi = (*hi).max(c);
            }
            if coords.iter().any(|&c| c == 0 || c + 1 == r) {
                st.touches_boundary = true;
            }
            labels[cell] = label;
        }
        advance(&mut coords, r);
    }

    Ok(LabeledGrid {
        grid: *grid,
        signs,
        labels,
        components,
    })
}

fn advance(coords: &mut [usize], r: usize) {
    for c in coords.iter_mut() {
        *c += 1;
        if *c < r {
            return;
        }
        *c = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub label: u32,
    pub cells: u64,
    pub compact: bool,
    /// Per-axis `[lo, hi]` extent of the component's cells.
    pub bbox: Vec<[f64; 2]>,
}

/// Oracle output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub total: u64,
    pub compact: u64,
    /// `(outer, inner)` label pairs.
    pub nesting_pairs: Vec<(u32, u32)>,
    /// Pairs for which no ray gave a clean parity.
    pub indeterminate_pairs: Vec<(u32, u32)>,
    pub grid: GridSpec,
    pub components: Vec<ComponentSummary>,
}

impl ComponentReport {
    pub fn unbounded(&self) -> u64 {
        self.total - self.compact
    }

    pub fn from_labeled(lg: &LabeledGrid) -> Self {
        let nest = nesting(lg);
        let g = &lg.grid;
        let components: Vec<ComponentSummary> = lg
            .components
            .iter()
            .map(|c| ComponentSummary {
                label: c.label,
                cells: c.cells,
                compact: c.compact(),
                bbox: (0..g.n)
                    .map(|d| [g.coord(c.bbox_min[d]), g.coord(c.bbox_max[d] + 1)])
                    .collect(),
            })
            .collect();
        Self {
            total: components.len() as u64,
            compact: components.iter().filter(|c| c.compact).count() as u64,
            nesting_pairs: nest.pairs,
            indeterminate_pairs: nest.indeterminate,
            grid: *g,
            components,
        }
    }
}

/// Counts connected components of `{f = 0}` inside the grid box.
pub fn count_components<E: Evaluate + ?Sized>(f: &E, grid: &GridSpec) -> Result<ComponentReport> {
    Ok(ComponentReport::from_labeled(&label_components(f, grid)?))
}

pub fn count_components_with_budget<E: Evaluate + ?Sized>(
    f: &E,
    grid: &GridSpec,
    budget: u64,
) -> Result<ComponentReport> {
    Ok(ComponentReport::from_labeled(&label_components_with_budget(f, grid, budget)?))
}
