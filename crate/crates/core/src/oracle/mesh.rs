//! Surface extraction for inspection: OBJ triangles for `n = 3`, CSV line
//! segments for `n = 2`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::GridSpec;
use crate::error::{Error, Result};
use crate::Evaluate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    /// Wavefront OBJ, `n = 3`.
    Obj,
    /// `x1,y1,x2,y2` segment rows, `n = 2`.
    Csv,
}

impl MeshFormat {
    pub fn for_dim(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Self::Csv),
            3 => Ok(Self::Obj),
            _ => Err(Error::Unsupported(format!("mesh export needs n = 2 or 3, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshSummary {
    pub format: MeshFormat,
    pub vertices: usize,
    /// Triangles for OBJ, segments for CSV.
    pub elements: usize,
}

/// Writes the zero set of `f` sampled on `grid` to `path`.
pub fn export_mesh<E: Evaluate + ?Sized>(f: &E, grid: &GridSpec, path: &Path) -> Result<MeshSummary> {
    let mut out = BufWriter::new(File::create(path)?);
    let summary = write_mesh(f, grid, &mut out)?;
    out.flush()?;
    Ok(summary)
}

/// Like [`export_mesh`] but into any writer.
pub fn write_mesh<E: Evaluate + ?Sized, W: Write>(f: &E, grid: &GridSpec, out: &mut W) -> Result<MeshSummary> {
    let format = MeshFormat::for_dim(grid.n)?;
    if f.dim() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            found: f.dim(),
        });
    }
    let needed = grid.vertex_count()?.saturating_mul(8);
    let budget = super::memory_budget();
    if needed > budget {
        return Err(Error::ResourceLimit { needed, budget });
    }
    let values = sample(f, grid)?;
    let mut ext = Extractor {
        f,
        grid,
        values: &values,
        edge_points: HashMap::new(),
        points: Vec::new(),
    };
    match format {
        MeshFormat::Obj => {
            let triangles = ext.triangles();
            writeln!(out, "# coxvar zero-set mesh")?;
            for p in &ext.points {
                writeln!(out, "v {} {} {}", p[0], p[1], p[2])?;
            }
            for t in &triangles {
                writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
            }
            Ok(MeshSummary {
                format,
                vertices: ext.points.len(),
                elements: triangles.len(),
            })
        }
        MeshFormat::Csv => {
            let segments = ext.segments();
            writeln!(out, "x1,y1,x2,y2")?;
            for [a, b] in &segments {
                let (p, q) = (&ext.points[*a as usize], &ext.points[*b as usize]);
                writeln!(out, "{},{},{},{}", p[0], p[1], q[0], q[1])?;
            }
            Ok(MeshSummary {
                format,
                vertices: ext.points.len(),
                elements: segments.len(),
            })
        }
    }
}

fn sample<E: Evaluate + ?Sized>(f: &E, grid: &GridSpec) -> Result<Vec<f64>> {
    let n = grid.n;
    let rv = grid.resolution + 1;
    let mut values = vec![0.0; grid.vertex_count()? as usize];
    values.par_chunks_mut(4096).enumerate().for_each(|(k, chunk)| {
        let mut x = vec![0.0; n];
        for (j, v) in chunk.iter_mut().enumerate() {
            let mut idx = k * 4096 + j;
            for xi in x.iter_mut() {
                *xi = grid.coord(idx % rv);
                idx /= rv;
            }
            *v = f.value(&x);
        }
    });
    Ok(values)
}

struct Extractor<'a, E: ?Sized> {
    f: &'a E,
    grid: &'a GridSpec,
    values: &'a [f64],
    edge_points: HashMap<(usize, usize), u32>,
    points: Vec<Vec<f64>>,
}

fn inside(v: f64) -> bool {
    v < 0.0
}

impl<E: Evaluate + ?Sized> Extractor<'_, E> {
    fn position(&self, vertex: usize) -> Vec<f64> {
        let rv = self.grid.resolution + 1;
        let mut idx = vertex;
        (0..self.grid.n)
            .map(|_| {
                let c = self.grid.coord(idx % rv);
                idx /= rv;
                c
            })
            .collect()
    }

    /// Crossing point on the grid edge `a`–`b`: bisect once, then
    /// interpolate linearly on the half that holds the sign change.
    fn edge_point(&mut self, a: usize, b: usize) -> u32 {
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.edge_points.get(&key) {
            return id;
        }
        let (a, b) = key;
        let (pa, pb) = (self.position(a), self.position(b));
        let (fa, fb) = (self.values[a], self.values[b]);
        let pm: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| 0.5 * (x + y)).collect();
        let fm = self.f.value(&pm);
        let ((p0, f0), (p1, f1)) = if inside(fm) == inside(fa) {
            ((pm, fm), (pb, fb))
        } else {
            ((pa, fa), (pm, fm))
        };
        let t = if f0 != f1 && (f0 - f1).is_finite() {
            (f0 / (f0 - f1)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let p = p0.iter().zip(&p1).map(|(x, y)| x + t * (y - x)).collect();
        let id = self.points.len() as u32;
        self.points.push(p);
        self.edge_points.insert(key, id);
        id
    }

    fn triangles(&mut self) -> Vec<[u32; 3]> {
        let r = self.grid.resolution;
        let rv = r + 1;
        let stride = [1, rv, rv * rv];
        let corner = |mask: usize| (0..3).filter(|d| mask >> d & 1 == 1).map(|d| stride[d]).sum::<usize>();
        // Freudenthal split of the unit cube along its main diagonal.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let tets: Vec<[usize; 4]> = perms
            .iter()
            .map(|p| {
                let a = 1 << p[0];
                let b = a | 1 << p[1];
                [corner(0), corner(a), corner(b), corner(7)]
            })
            .collect();

        let mut tris = Vec::new();
        for k in 0..r {
            for j in 0..r {
                for i in 0..r {
                    let base = i + j * rv + k * rv * rv;
                    for tet in &tets {
                        let verts = tet.map(|o| base + o);
                        self.tet(verts, &mut tris);
                    }
                }
            }
        }
        tris
    }

    fn tet(&mut self, verts: [usize; 4], tris: &mut Vec<[u32; 3]>) {
        let (ins, outs): (Vec<usize>, Vec<usize>) = verts.iter().partition(|&&v| inside(self.values[v]));
        let quads: Vec<Vec<u32>> = match (ins.len(), outs.len()) {
            (1, 3) => vec![outs.iter().map(|&o| self.edge_point(ins[0], o)).collect()],
            (3, 1) => vec![ins.iter().map(|&i| self.edge_point(i, outs[0])).collect()],
            (2, 2) => vec![vec![
                self.edge_point(ins[0], outs[0]),
                self.edge_point(ins[0], outs[1]),
                self.edge_point(ins[1], outs[1]),
                self.edge_point(ins[1], outs[0]),
            ]],
            _ => return,
        };
        let centroid = |vs: &[usize]| -> Vec<f64> {
            let mut c = vec![0.0; 3];
            for &v in vs {
                for (ci, pi) in c.iter_mut().zip(self.position(v)) {
                    *ci += pi / vs.len() as f64;
                }
            }
            c
        };
        let outward: Vec<f64> = centroid(&outs).iter().zip(centroid(&ins)).map(|(o, i)| o - i).collect();
        for poly in quads {
            for w in 1..poly.len() - 1 {
                let mut t = [poly[0], poly[w], poly[w + 1]];
                if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                    continue;
                }
                if dot(&self.normal(t), &outward) < 0.0 {
                    t.swap(1, 2);
                }
                tris.push(t);
            }
        }
    }

    fn normal(&self, t: [u32; 3]) -> Vec<f64> {
        let p: Vec<&Vec<f64>> = t.iter().map(|&i| &self.points[i as usize]).collect();
        let u: Vec<f64> = (0..3).map(|d| p[1][d] - p[0][d]).collect();
        let v: Vec<f64> = (0..3).map(|d| p[2][d] - p[0][d]).collect();
        vec![
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    }

    fn segments(&mut self) -> Vec<[u32; 2]> {
        let r = self.grid.resolution;
        let rv = r + 1;
        let mut segs = Vec::new();
        for j in 0..r {
            for i in 0..r {
                let v00 = i + j * rv;
                let (v10, v01, v11) = (v00 + 1, v00 + rv, v00 + rv + 1);
                for tri in [[v00, v10, v11], [v00, v11, v01]] {
                    let (ins, outs): (Vec<usize>, Vec<usize>) =
                        tri.iter().partition(|&&v| inside(self.values[v]));
                    let seg = match (ins.len(), outs.len()) {
                        (1, 2) => [self.edge_point(ins[0], outs[0]), self.edge_point(ins[0], outs[1])],
                        (2, 1) => [self.edge_point(ins[0], outs[0]), self.edge_point(ins[1], outs[0])],
                        _ => continue,
                    };
                    if seg[0] != seg[1] {
                        segs.push(seg);
                    }
                }
            }
        }
        segs
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
