//! Radial structure of the zero set inside the fundamental chamber.
//!
//! On the closed positive orthant write `s = Σ X_i` and
//! `φ = Σ X_i² / s² ∈ [1/n, 1]`. Since `Σ_{i<j} X_i X_j = s²(1 − φ)/2`,
//!
//! ```text
//! F = s² (W − A φ / 2) + C s + D,
//! ```
//!
//! so with `u = 1/s` the zero set is `A φ / 2 = D u² + C u + W`. For
//! `A ≠ 0` the level `φ = h(u)` is a quadratic in `u`, and a connected
//! piece of the zero set in the chamber `X_1 ≥ … ≥ X_n ≥ 0` is a maximal
//! `u`-interval on which `h(u) ∈ [1/n, 1]`. Inside the chamber every level
//! set of `φ` is connected, `φ = 1/n` is the diagonal ray and `φ = 1` the
//! coordinate axis. A level `φ` meets
//!
//! * the wall `X_1 = X_2` iff `φ ≤ 1/2`,
//! * the walls `X_k = X_{k+1}`, `2 ≤ k ≤ n − 1`, always,
//! * the coordinate wall `X_n = 0` iff `φ ≥ 1/(n − 1)`.
//!
//! For `A = 0` the zero set is a union of spheres `s = 1/u` over the
//! positive roots of `D u² + C u + W`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{QuadricClass, QuadricKind, QuarticCoefficients, SpectralData};
use crate::error::{Error, Result};

/// Why the radial analysis declined to decide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum Degeneracy {
    /// `D = 0`: the origin lies on the locus.
    OriginOnLocus,
    /// Two radial roots coincide (`A = 0` family).
    SphereTangency,
    /// The asymptotic level `2W/A` sits on a critical level of `φ`.
    AsymptoticCritical { phi: f64 },
    /// The extremum of `h` sits on a critical level of `φ`.
    Tangency { phi: f64 },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::OriginOnLocus => write!(f, "origin lies on the locus (D = 0)"),
            Degeneracy::SphereTangency => write!(f, "coincident radial roots"),
            Degeneracy::AsymptoticCritical { phi } => {
                write!(f, "asymptotic direction on critical level φ = {phi}")
            }
            Degeneracy::Tangency { phi } => write!(f, "tangency at critical level φ = {phi}"),
        }
    }
}

/// Global shape of a chamber piece, read off its two ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceShape {
    /// Runs from the diagonal ray to the coordinate axis: meets every ray
    /// of the chamber and closes up into a shell around the origin.
    Shell,
    /// Both ends on the diagonal ray.
    DiagonalLoop,
    /// Both ends on the coordinate axis.
    AxisLoop,
    /// Leaves every ball.
    Unbounded,
}

/// One connected piece of the zero set in the closed fundamental chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberPiece {
    pub shape: PieceShape,
    /// Smallest `Σ X_i` on the piece.
    pub s_min: f64,
    /// Largest `Σ X_i`; absent for unbounded pieces.
    pub s_max: Option<f64>,
    pub phi_min: f64,
    pub phi_max: f64,
    /// Indexed by wall: `k < n − 1` is `X_k = X_{k+1}` (0-based), `n − 1`
    /// is `X_{n-1} = 0`.
    pub touched_walls: Vec<bool>,
}

impl ChamberPiece {
    pub fn compact(&self) -> bool {
        self.s_max.is_some()
    }

    pub fn touches_all_walls(&self) -> bool {
        self.touched_walls.iter().all(|&t| t)
    }
}

/// Which walls of the fundamental chamber a set with `φ`-range `[lo, hi]`
/// meets.
pub(crate) fn walls_for_phi_range(n: usize, lo: f64, hi: f64) -> Vec<bool> {
    const SLACK: f64 = 1e-12;
    let mut walls = vec![true; n];
    walls[0] = lo <= 0.5 + SLACK;
    walls[n - 1] = hi >= 1.0 / (n as f64 - 1.0) - SLACK;
    walls
}

/// `α u² + β u + γ`.
#[derive(Debug, Clone, Copy)]
struct Quadratic {
    a2: f64,
    a1: f64,
    a0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Level {
    Lo,
    Hi,
}

/// A maximal `u`-interval with `h(u) ∈ [lo, hi]`; `start = None` means the
/// interval reaches `u → 0⁺`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: Option<(f64, Level)>,
    end: (f64, Level),
}

impl Quadratic {
    fn eval(&self, u: f64) -> f64 {
        (self.a2 * u + self.a1) * u + self.a0
    }

    fn vertex(&self) -> Option<f64> {
        (self.a2 != 0.0).then(|| -self.a1 / (2.0 * self.a2))
    }

    /// Positive solutions of `h(u) = level`.
    fn positive_roots(&self, level: f64) -> Vec<f64> {
        let (a, b, c) = (self.a2, self.a1, self.a0 - level);
        let mut roots = Vec::new();
        if a == 0.0 {
            if b != 0.0 {
                roots.push(-c / b);
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                if q != 0.0 {
                    roots.push(q / a);
                    roots.push(c / q);
                } else {
                    roots.push(0.0);
                }
            }
        }
        roots.retain(|&u| u > 0.0 && u.is_finite());
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }

    /// Maximal intervals of `u > 0` on which `lo ≤ h(u) ≤ hi`. Endpoints
    /// are assumed transversal (checked by the caller).
    fn preimage(&self, lo: f64, hi: f64) -> Vec<Segment> {
        let mut breaks: Vec<(f64, Level)> = self
            .positive_roots(lo)
            .into_iter()
            .map(|u| (u, Level::Lo))
            .chain(self.positive_roots(hi).into_iter().map(|u| (u, Level::Hi)))
            .collect();
        breaks.sort_by(|x, y| x.0.total_cmp(&y.0));

        let inside = |u: f64| {
            let v = self.eval(u);
            v >= lo && v <= hi
        };
        let mut segments = Vec::new();
        let mut prev: Option<(f64, Level)> = None;
        for &b in &breaks {
            let mid = match prev {
                Some((p, _)) => 0.5 * (p + b.0),
                None => 0.5 * b.0,
            };
            if inside(mid) {
                segments.push(Segment { start: prev, end: b });
            }
            prev = Some(b);
        }
        segments
    }
}

fn critical_levels(n: usize) -> Vec<f64> {
    let mut levels = vec![1.0 / n as f64, 0.5, 1.0 / (n as f64 - 1.0), 1.0];
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

enum Mode {
    /// `A = 0`: positive radial roots `u`.
    Spheres(Vec<f64>),
    /// `A ≠ 0`: `φ = h(u)`.
    Levels(Quadratic),
}

fn mode(q: &QuarticCoefficients, tol: f64, levels: &[f64]) -> std::result::Result<Mode, Degeneracy> {
    let scale = q.scale();
    if q.d.abs() <= tol * scale {
        return Err(Degeneracy::OriginOnLocus);
    }
    let w = q.w();
    if q.a.abs() <= tol * scale {
        let w = if w.abs() <= tol * scale { 0.0 } else { w };
        let disc = q.c * q.c - 4.0 * q.d * w;
        if w != 0.0 && disc.abs() <= tol * (q.c * q.c + (4.0 * q.d * w).abs()) {
            return Err(Degeneracy::SphereTangency);
        }
        let poly = Quadratic {
            a2: q.d,
            a1: q.c,
            a0: w,
        };
        return Ok(Mode::Spheres(poly.positive_roots(0.0)));
    }

    let h = Quadratic {
        a2: 2.0 * q.d / q.a,
        a1: 2.0 * q.c / q.a,
        a0: 2.0 * w / q.a,
    };
    let near = |v: f64| levels.iter().copied().find(|&l| (v - l).abs() <= tol);
    if let Some(phi) = near(h.a0) {
        return Err(Degeneracy::AsymptoticCritical { phi });
    }
    if let Some(u) = h.vertex() {
        if u > 0.0 {
            if let Some(phi) = near(h.eval(u)) {
                return Err(Degeneracy::Tangency { phi });
            }
        }
    }
    Ok(Mode::Levels(h))
}

/// Connected pieces of the zero set in the closed fundamental chamber,
/// ordered by increasing `s_min`.
///
/// `tol` is relative to the coefficient scale for `D` and `A`, and absolute
/// in `φ` for tangency tests against the critical levels
/// `1/n, 1/2, 1/(n−1), 1`.
pub fn radial_profile(
    q: &QuarticCoefficients,
    tol: f64,
) -> std::result::Result<Vec<ChamberPiece>, Degeneracy> {
    let n = q.n;
    let phi_lo = 1.0 / n as f64;
    let levels = critical_levels(n);
    let mut pieces = match mode(q, tol, &levels)? {
        Mode::Spheres(roots) => roots
            .into_iter()
            .map(|u| ChamberPiece {
                shape: PieceShape::Shell,
                s_min: 1.0 / u,
                s_max: Some(1.0 / u),
                phi_min: phi_lo,
                phi_max: 1.0,
                touched_walls: vec![true; n],
            })
            .collect(),
        Mode::Levels(h) => h
            .preimage(phi_lo, 1.0)
            .into_iter()
            .map(|seg| piece_from_segment(&h, seg, n))
            .collect::<Vec<_>>(),
    };
    pieces.sort_by(|x, y| x.s_min.total_cmp(&y.s_min));
    Ok(pieces)
}

fn piece_from_segment(h: &Quadratic, seg: Segment, n: usize) -> ChamberPiece {
    let level_value = |l: Level| if l == Level::Lo { 1.0 / n as f64 } else { 1.0 };
    let (u_end, end_level) = seg.end;
    let mut phi_min = level_value(end_level);
    let mut phi_max = phi_min;
    let mut extend = |v: f64| {
        phi_min = phi_min.min(v);
        phi_max = phi_max.max(v);
    };
    let u_start = match seg.start {
        Some((u, l)) => {
            extend(level_value(l));
            u
        }
        None => {
            extend(h.a0);
            0.0
        }
    };
    if let Some(v) = h.vertex() {
        if v > u_start && v < u_end {
            extend(h.eval(v));
        }
    }
    let shape = match seg.start {
        None => PieceShape::Unbounded,
        Some((_, l)) if l != end_level => PieceShape::Shell,
        Some((_, Level::Lo)) => PieceShape::DiagonalLoop,
        Some((_, Level::Hi)) => PieceShape::AxisLoop,
    };
    ChamberPiece {
        shape,
        s_min: 1.0 / u_end,
        s_max: seg.start.map(|(u, _)| 1.0 / u),
        phi_min,
        phi_max,
        touched_walls: walls_for_phi_range(n, phi_min, phi_max),
    }
}

/// A wall of the fundamental chamber `X_0 ≥ X_1 ≥ … ≥ X_{n-1} ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    /// `X_{n-1} = 0` (equivalently any `X_i = 0` by symmetry).
    Coordinate,
    /// `X_k = X_{k+1}`, `0 ≤ k < n − 1`.
    Diagonal(usize),
}

impl Face {
    /// Range of `φ` over the face inside the closed chamber.
    fn phi_range(&self, n: usize) -> Result<(f64, f64)> {
        let nf = n as f64;
        match *self {
            Face::Coordinate => Ok((1.0 / (nf - 1.0), 1.0)),
            Face::Diagonal(0) => Ok((1.0 / nf, 0.5)),
            Face::Diagonal(k) if k + 1 < n => Ok((1.0 / nf, 1.0)),
            Face::Diagonal(k) => Err(Error::InvalidArgument(format!(
                "no diagonal wall {k} in dimension {n}"
            ))),
        }
    }

    /// Index into [`ChamberPiece::touched_walls`].
    pub fn wall_index(&self, n: usize) -> usize {
        match *self {
            Face::Coordinate => n - 1,
            Face::Diagonal(k) => k,
        }
    }
}

/// Which sheet of the quadric a contact refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sheet {
    /// Two-sheeted case, the sheet on the origin side of the centre.
    Near,
    /// Two-sheeted case, the sheet beyond the centre along the axis.
    Far,
    /// Any other case: the whole quadric.
    Whole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contact {
    Intersects,
    Misses,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceContact {
    pub sheet: Sheet,
    pub contact: Contact,
}

/// Whether each sheet of the quadric, restricted to the closed fundamental
/// chamber, meets `face`.
///
/// The face restricts `φ` to a sub-interval; every level in it meets the
/// face, so a sheet meets the face iff some `u` in the sheet's `s`-range
/// has `h(u)` in that interval.
pub fn face_intersection(
    q: &QuarticCoefficients,
    sd: &SpectralData,
    class: &QuadricClass,
    face: Face,
    tol: f64,
) -> Result<Vec<FaceContact>> {
    let n = q.n;
    let (lo, hi) = face.phi_range(n)?;
    let sheets: Vec<(Sheet, f64, f64)> = match (class.kind, sd.center) {
        (QuadricKind::TwoSheetedHyperboloid, Some(c)) => {
            let split = n as f64 * c;
            // u = 1/s; the near sheet has s < split.
            let u_split = if split > 0.0 { 1.0 / split } else { f64::INFINITY };
            vec![(Sheet::Near, u_split, f64::INFINITY), (Sheet::Far, 0.0, u_split)]
        }
        _ => vec![(Sheet::Whole, 0.0, f64::INFINITY)],
    };

    let levels = [lo, hi];
    let decide = |u_lo: f64, u_hi: f64| -> Contact {
        match mode(q, tol, &levels) {
            Err(_) => Contact::Indeterminate,
            Ok(Mode::Spheres(roots)) => {
                if roots.iter().any(|&u| u > u_lo && u < u_hi) {
                    Contact::Intersects
                } else {
                    Contact::Misses
                }
            }
            Ok(Mode::Levels(h)) => {
                let hit = h.preimage(lo, hi).iter().any(|seg| {
                    let a = seg.start.map_or(0.0, |s| s.0);
                    let b = seg.end.0;
                    a < u_hi && b > u_lo
                });
                if hit {
                    Contact::Intersects
                } else {
                    Contact::Misses
                }
            }
        }
    };

    Ok(sheets
        .into_iter()
        .map(|(sheet, u_lo, u_hi)| FaceContact {
            sheet,
            contact: if u_lo >= u_hi {
                Contact::Misses
            } else {
                decide(u_lo, u_hi)
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::{classify, spectral, substitute, DEFAULT_TOL};

    fn profile(a: f64, b: f64, c: f64, d: f64, n: usize) -> Vec<ChamberPiece> {
        radial_profile(&QuarticCoefficients::new(a, b, c, d, n).unwrap(), DEFAULT_TOL).unwrap()
    }

    fn shapes(p: &[ChamberPiece]) -> Vec<PieceShape> {
        p.iter().map(|c| c.shape).collect()
    }

    #[test]
    fn unit_sphere_is_one_shell() {
        let p = profile(0.0, 1.0, 0.0, -1.0, 3);
        assert_eq!(shapes(&p), vec![PieceShape::Shell]);
        assert!((p[0].s_min - 1.0).abs() < 1e-15);
        assert!(p[0].touches_all_walls());
    }

    #[test]
    fn concentric_spheres() {
        // (σ1 − 1)(σ1 − 4).
        let p = profile(0.0, 1.0, -5.0, 4.0, 2);
        assert_eq!(shapes(&p), vec![PieceShape::Shell, PieceShape::Shell]);
        assert!((p[0].s_min - 1.0).abs() < 1e-12);
        assert!((p[1].s_min - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_without_quadratic_part() {
        // A = B = 0: C σ1 + D.
        let p = profile(0.0, 0.0, 2.0, -6.0, 3);
        assert_eq!(p.len(), 1);
        assert!((p[0].s_min - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shell_plus_unbounded_piece() {
        // h(u) = (2/A)(D u² + C u + W), A = 4, B = -1/2, C = -2, D = 1, n = 2:
        // h(0) = 3/4 ∈ (1/2, 1), vertex value 1/4 < 1/2.
        let p = profile(4.0, -0.5, -2.0, 1.0, 2);
        assert_eq!(shapes(&p), vec![PieceShape::Shell, PieceShape::Unbounded]);
        assert_eq!(p[1].touched_walls, vec![true, false]);
        assert!(p[0].touches_all_walls());
    }

    #[test]
    fn diagonal_loop() {
        // Concave h with h(0) < 1/n and vertex value in (1/n, 1).
        // A = 1, B = -0.5 → W = 0, h = 2(D u² + C u); C = 1, D = -0.5:
        // vertex u = 1, value 1.
        let p = profile(1.0, -0.5, 1.0, -0.4, 2);
        // vertex u = 1.25, value 2(−0.625 + 1.25) = 1.25 > 1 → two shells.
        assert_eq!(shapes(&p), vec![PieceShape::Shell, PieceShape::Shell]);
        let p = profile(1.0, -0.5, 1.0, -0.6, 2);
        // vertex u = 5/6, value 2(−5/12 + 5/6) = 5/6 ∈ (1/2, 1).
        assert_eq!(shapes(&p), vec![PieceShape::DiagonalLoop]);
        assert_eq!(p[0].touched_walls, vec![true, false]);
    }

    #[test]
    fn degeneracies_are_reported() {
        let q = QuarticCoefficients::new(1.0, 1.0, 1.0, 0.0, 3).unwrap();
        assert_eq!(radial_profile(&q, DEFAULT_TOL), Err(Degeneracy::OriginOnLocus));
        // A = 0, B = 1, C = -2, D = 1: (σ1 − 1)².
        let q = QuarticCoefficients::new(0.0, 1.0, -2.0, 1.0, 3).unwrap();
        assert_eq!(radial_profile(&q, DEFAULT_TOL), Err(Degeneracy::SphereTangency));
        // h(0) = 2W/A = 1 + 2B/A = 1/2 for B/A = -1/4.
        let q = QuarticCoefficients::new(4.0, -1.0, -2.0, 1.0, 3).unwrap();
        assert!(matches!(
            radial_profile(&q, DEFAULT_TOL),
            Err(Degeneracy::AsymptoticCritical { .. })
        ));
    }

    #[test]
    fn wall_ranges_by_dimension() {
        assert_eq!(walls_for_phi_range(2, 0.5, 0.9), vec![true, false]);
        assert_eq!(walls_for_phi_range(3, 0.4, 0.45), vec![true, true, false]);
        assert_eq!(walls_for_phi_range(3, 0.6, 1.0), vec![false, true, true]);
        assert_eq!(walls_for_phi_range(4, 0.25, 0.34), vec![true, true, true, true]);
    }

    fn contacts(a: f64, b: f64, c: f64, d: f64, n: usize, face: Face) -> Vec<FaceContact> {
        let q = QuarticCoefficients::new(a, b, c, d, n).unwrap();
        let qf = substitute(&q);
        let sd = spectral(&qf);
        let cls = classify(&qf, &sd, DEFAULT_TOL);
        face_intersection(&q, &sd, &cls, face, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn sphere_meets_every_face() {
        for face in [Face::Coordinate, Face::Diagonal(0), Face::Diagonal(1)] {
            let c = contacts(0.0, 1.0, 0.0, -1.0, 3, face);
            assert_eq!(c, vec![FaceContact { sheet: Sheet::Whole, contact: Contact::Intersects }]);
        }
    }

    #[test]
    fn small_ellipsoid_misses_the_coordinate_wall() {
        // n = 3, λ_rep = 1, λ_axis = 4, centre c = 1 on the diagonal.
        // F(c) = D − 12; D = 11.9 gives a small ellipsoid.
        let c = contacts(-2.0, 2.0, -8.0, 11.9, 3, Face::Coordinate);
        assert_eq!(c[0].contact, Contact::Misses);
        let c = contacts(-2.0, 2.0, -8.0, 11.9, 3, Face::Diagonal(0));
        assert_eq!(c[0].contact, Contact::Intersects);
    }

    #[test]
    fn two_sheeted_far_sheet_misses_coordinate_wall() {
        // A = 4, B = -1.1, n = 3: 2W/A = 1 + 2B/A = 0.45 ∈ (1/3, 1/2).
        let q = QuarticCoefficients::new(4.0, -1.1, -3.0, 1.0, 3).unwrap();
        let qf = substitute(&q);
        let sd = spectral(&qf);
        let cls = classify(&qf, &sd, DEFAULT_TOL);
        assert_eq!(cls.kind, QuadricKind::TwoSheetedHyperboloid);
        let coord = face_intersection(&q, &sd, &cls, Face::Coordinate, DEFAULT_TOL).unwrap();
        assert_eq!(coord[0], FaceContact { sheet: Sheet::Near, contact: Contact::Intersects });
        assert_eq!(coord[1], FaceContact { sheet: Sheet::Far, contact: Contact::Misses });
        for k in 0..2 {
            let diag = face_intersection(&q, &sd, &cls, Face::Diagonal(k), DEFAULT_TOL).unwrap();
            assert!(diag.iter().all(|c| c.contact == Contact::Intersects));
        }
        assert!(face_intersection(&q, &sd, &cls, Face::Diagonal(2), DEFAULT_TOL).is_err());
    }
}
