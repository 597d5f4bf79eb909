//! Global component structure from the chamber picture.
//!
//! The closed chamber `x_0 ≥ x_1 ≥ … ≥ x_{n-1} ≥ 0` is a fundamental domain
//! of `B_n`. A connected piece of the variety inside it is copied into all
//! `2^n n!` chambers; two copies are the same global component exactly when
//! they are related through walls the piece touches. Reflecting a connected
//! set across a mirror it meets gives one set, across a mirror it misses
//! gives two.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{group_order, SignedPermutation};
use crate::quadric::{
    classify, radial_profile, spectral_with_tol, substitute, ChamberPiece, PieceShape,
    QuadricClass, QuarticCoefficients, DEFAULT_TOL,
};

/// Largest `n` for which [`orbit_component_count`] enumerates chambers.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 6;

/// A reflecting hyperplane `x_i = 0` or `x_i = ±x_j` (`i < j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mirror {
    Coordinate(usize),
    Difference(usize, usize),
    Sum(usize, usize),
}

impl Mirror {
    /// Integer normal vector.
    pub fn normal(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        match *self {
            Mirror::Coordinate(i) => v[i] = 1,
            Mirror::Difference(i, j) => {
                v[i] = 1;
                v[j] = -1;
            }
            Mirror::Sum(i, j) => {
                v[i] = 1;
                v[j] = 1;
            }
        }
        v
    }

    /// Signed side of `x`: `normal · x`.
    pub fn side(&self, x: &[f64]) -> f64 {
        match *self {
            Mirror::Coordinate(i) => x[i],
            Mirror::Difference(i, j) => x[i] - x[j],
            Mirror::Sum(i, j) => x[i] + x[j],
        }
    }
}

/// The `n²` mirrors of `B_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorArrangement {
    pub n: usize,
    pub mirrors: Vec<Mirror>,
}

impl MirrorArrangement {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut mirrors: Vec<Mirror> = (0..n).map(Mirror::Coordinate).collect();
        for i in 0..n {
            for j in i + 1..n {
                mirrors.push(Mirror::Difference(i, j));
                mirrors.push(Mirror::Sum(i, j));
            }
        }
        Ok(Self { n, mirrors })
    }

    pub fn len(&self) -> usize {
        self.mirrors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mirrors.is_empty()
    }

    /// Sign pattern of a point off every mirror; `None` if it lies on one.
    pub fn sign_vector(&self, x: &[f64]) -> Option<Vec<bool>> {
        self.mirrors
            .iter()
            .map(|m| {
                let s = m.side(x);
                (s != 0.0).then_some(s > 0.0)
            })
            .collect()
    }
}

/// A connected piece of the variety in the closed fundamental chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberComponent {
    pub id: usize,
    /// Indexed like the simple reflections: `k < n − 1` is `x_k = x_{k+1}`,
    /// `n − 1` is `x_{n-1} = 0`.
    pub touched_faces: Vec<bool>,
    pub compact_in_chamber: bool,
}

impl ChamberComponent {
    pub fn from_piece(id: usize, piece: &ChamberPiece) -> Self {
        Self {
            id,
            touched_faces: piece.touched_walls.clone(),
            compact_in_chamber: piece.compact(),
        }
    }
}

/// Components produced by reflecting a connected set across one mirror.
pub fn glue_across_mirror(touches_mirror: bool) -> u32 {
    if touches_mirror {
        1
    } else {
        2
    }
}

/// Global components generated by one chamber component, by union-find over
/// all chamber copies.
pub fn orbit_component_count(cc: &ChamberComponent, n: usize) -> Result<u64> {
    orbit_component_count_with_limit(cc, n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn orbit_component_count_with_limit(cc: &ChamberComponent, n: usize, limit: usize) -> Result<u64> {
    if cc.touched_faces.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cc.touched_faces.len(),
        });
    }
    if n > limit {
        return Err(Error::Unsupported(format!(
            "orbit enumeration for n = {n} exceeds the limit {limit}"
        )));
    }
    let chambers = SignedPermutation::all(n)?;
    let index: HashMap<&SignedPermutation, usize> =
        chambers.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let reflections: Vec<SignedPermutation> = (0..n)
        .filter(|&k| cc.touched_faces[k])
        .map(|k| SignedPermutation::simple_reflection(n, k))
        .collect::<Result<_>>()?;

    // The chamber g·C shares the wall g(H_k) with g·s_k·C.
    let mut uf = UnionFind::<usize>::new(chambers.len());
    for (i, g) in chambers.iter().enumerate() {
        for s in &reflections {
            uf.union(i, index[&g.compose(s)]);
        }
    }
    let mut roots = uf.into_labeling();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len() as u64)
}

/// `[B_n : W_J]` for the standard parabolic subgroup generated by the
/// touched walls: runs of consecutive simple reflections form `A_k` factors
/// of order `(k+1)!`, the run ending at the coordinate wall a `B_k` factor
/// of order `2^k k!`.
pub fn parabolic_index(touched: &[bool]) -> Result<u64> {
    let n = touched.len();
    let mut order: u128 = 1;
    let mut k = 0;
    for (i, &t) in touched.iter().enumerate() {
        if t {
            k += 1;
        }
        let run_ends = !t || i + 1 == n;
        if run_ends && k > 0 {
            let ends_at_coordinate = t && i + 1 == n;
            let factor: u128 = if ends_at_coordinate {
                (1..=k as u128).map(|j| 2 * j).product()
            } else {
                (1..=k as u128 + 1).product()
            };
            order = order.checked_mul(factor).ok_or(Error::Overflow("parabolic order"))?;
            k = 0;
        }
    }
    let group = u128::from(group_order(n)?);
    u64::try_from(group / order).map_err(|_| Error::Overflow("parabolic index"))
}

/// Predicted shape of the whole variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `2^n + 1` components: one compact shell around the origin and `2^n`
    /// unbounded ones.
    MaxComponents,
    /// `2^n` compact components, each a sphere.
    AllCompact,
    /// Two concentric spheres.
    NestedPair,
    /// One sphere around the origin.
    SingleSphere,
    Empty,
    Undecided,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::MaxComponents => "max_components",
            Kind::AllCompact => "all_compact",
            Kind::NestedPair => "nested_pair",
            Kind::SingleSphere => "single_sphere",
            Kind::Empty => "empty",
            Kind::Undecided => "undecided",
        }
    }

    pub fn is_decided(&self) -> bool {
        *self != Kind::Undecided
    }
}

/// Betti numbers `b_0, …, b_{n-1}` for the kinds whose components are all
/// spheres or contractible.
pub fn betti_report(kind: Kind, n: usize) -> Option<Vec<u64>> {
    if n < 2 {
        return None;
    }
    let pow = 1u64.checked_shl(n as u32)?;
    let (b0, top) = match kind {
        Kind::MaxComponents => (pow.checked_add(1)?, 1),
        Kind::AllCompact => (pow, pow),
        Kind::NestedPair => (2, 2),
        Kind::SingleSphere => (1, 1),
        Kind::Empty | Kind::Undecided => return None,
    };
    let mut betti = vec![0; n];
    betti[0] = b0;
    betti[n - 1] = top;
    Some(betti)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricCharacteristic {
    pub kind: Kind,
    pub total_components: u64,
    pub compact_components: u64,
    pub unbounded_components: u64,
    pub nested: bool,
    pub betti: Option<Vec<u64>>,
    pub quadric: QuadricClass,
    /// Pieces in the fundamental chamber; empty when the radial analysis
    /// was degenerate.
    pub chamber_pieces: Vec<ChamberPiece>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl GeometricCharacteristic {
    fn undecided(quadric: QuadricClass, pieces: Vec<ChamberPiece>, reason: String) -> Self {
        Self {
            kind: Kind::Undecided,
            total_components: 0,
            compact_components: 0,
            unbounded_components: 0,
            nested: false,
            betti: None,
            quadric,
            chamber_pieces: pieces,
            reason: Some(reason),
        }
    }
}

/// Whether the global component generated by `piece` is a sphere.
fn piece_is_sphere(piece: &ChamberPiece, n: usize) -> bool {
    let walls = &piece.touched_walls;
    match piece.shape {
        PieceShape::Shell => true,
        // Spindle around the diagonal: glued by the permutations only.
        PieceShape::DiagonalLoop => !walls[n - 1],
        // Spindle around a half-axis: every wall but x_0 = x_1.
        PieceShape::AxisLoop => !walls[0] && walls[1..].iter().all(|&t| t),
        PieceShape::Unbounded => false,
    }
}

fn copies(piece: &ChamberPiece, n: usize) -> Result<u64> {
    if n <= DEFAULT_ENUMERATION_LIMIT {
        orbit_component_count(&ChamberComponent::from_piece(0, piece), n)
    } else {
        parabolic_index(&piece.touched_walls)
    }
}

pub fn predict(q: &QuarticCoefficients) -> GeometricCharacteristic {
    predict_with_tol(q, DEFAULT_TOL)
}

/// Predicts the component structure of the zero set of `q` in `R^n`.
///
/// The substituted quadric is classified for reporting; the decision itself
/// comes from the radial profile in the fundamental chamber and orbit
/// gluing. Degenerate configurations and shapes outside the named kinds are
/// returned as [`Kind::Undecided`].
pub fn predict_with_tol(q: &QuarticCoefficients, tol: f64) -> GeometricCharacteristic {
    let n = q.n;
    let qf = substitute(q);
    let sd = spectral_with_tol(&qf, tol);
    let quadric = classify(&qf, &sd, tol);

    let pieces = match radial_profile(q, tol) {
        Ok(p) => p,
        Err(deg) => return GeometricCharacteristic::undecided(quadric, Vec::new(), deg.to_string()),
    };

    if pieces.is_empty() {
        return GeometricCharacteristic {
            kind: Kind::Empty,
            total_components: 0,
            compact_components: 0,
            unbounded_components: 0,
            nested: false,
            betti: None,
            quadric,
            chamber_pieces: pieces,
            reason: None,
        };
    }

    let mut total = 0u64;
    let mut compact = 0u64;
    for piece in &pieces {
        let k = match copies(piece, n) {
            Ok(k) => k,
            Err(e) => return GeometricCharacteristic::undecided(quadric, pieces, e.to_string()),
        };
        total += k;
        if piece.compact() {
            compact += k;
        }
    }
    let unbounded = total - compact;
    let shells = pieces.iter().filter(|p| p.shape == PieceShape::Shell).count();
    let pow = 1u64.checked_shl(n as u32).filter(|_| n < 63);

    let kind = match (pieces.len(), shells) {
        (1, 1) => Kind::SingleSphere,
        (2, 2) => Kind::NestedPair,
        _ => match pow {
            Some(p) if total == p + 1 && compact == 1 && shells == 1 => Kind::MaxComponents,
            Some(p)
                if unbounded == 0 && total == p && pieces.iter().all(|x| piece_is_sphere(x, n)) =>
            {
                Kind::AllCompact
            }
            _ => {
                return GeometricCharacteristic::undecided(
                    quadric,
                    pieces,
                    format!(
                        "{total} components ({compact} compact) outside the named families"
                    ),
                )
            }
        },
    };

    GeometricCharacteristic {
        kind,
        total_components: total,
        compact_components: compact,
        unbounded_components: unbounded,
        nested: kind == Kind::NestedPair,
        betti: betti_report(kind, n),
        quadric,
        chamber_pieces: pieces,
        reason: None,
    }
}
