use super::LabeledGrid;

/// Nesting relation among compact components.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Nesting {
    /// `(outer, inner)` label pairs.
    pub pairs: Vec<(u32, u32)>,
    pub indeterminate: Vec<(u32, u32)>,
}

enum Parity {
    Inside,
    Outside,
    Ambiguous,
}

/// Decides which compact components enclose which by axis-parallel ray
/// parity.
///
/// From a cell of the candidate inner component, a ray walks along an axis
/// to the grid edge and counts the runs of outer-component cells it passes.
/// A run counts as a crossing when the off-surface cells flanking it have
/// opposite signs; equal signs mean the ray grazed the surface and the next
/// axis or direction is tried. Only pairs whose bounding boxes nest are
/// tested.
pub fn nesting(lg: &LabeledGrid) -> Nesting {
    let mut out = Nesting::default();
    let compact: Vec<_> = lg.components.iter().filter(|c| c.compact()).collect();
    for outer in &compact {
        for inner in &compact {
            if outer.label == inner.label || !outer.bbox_contains(inner) {
                continue;
            }
            match parity(lg, outer.label, inner.first_cell) {
                Parity::Inside => out.pairs.push((outer.label, inner.label)),
                Parity::Outside => {}
                Parity::Ambiguous => out.indeterminate.push((outer.label, inner.label)),
            }
        }
    }
    // Mutual containment can only come from identical boxes and grazing
    // rays; such pairs are not trusted.
    let mutual: Vec<(u32, u32)> = out
        .pairs
        .iter()
        .copied()
        .filter(|&(a, b)| out.pairs.contains(&(b, a)))
        .collect();
    if !mutual.is_empty() {
        out.pairs.retain(|p| !mutual.contains(p));
        out.indeterminate.extend(mutual);
    }
    out
}

fn parity(lg: &LabeledGrid, outer: u32, start: usize) -> Parity {
    let r = lg.grid.resolution as isize;
    let origin = lg.cell_coords(start);
    for axis in 0..lg.grid.n {
        for dir in [1isize, -1] {
            if let Some(crossings) = crossings_along(lg, outer, &origin, axis, dir, r) {
                return if crossings % 2 == 1 {
                    Parity::Inside
                } else {
                    Parity::Outside
                };
            }
        }
    }
    Parity::Ambiguous
}

fn crossings_along(
    lg: &LabeledGrid,
    outer: u32,
    origin: &[usize],
    axis: usize,
    dir: isize,
    r: isize,
) -> Option<u32> {
    let mut coords = origin.to_vec();
    let mut pos = origin[axis] as isize;
    let mut crossings = 0;
    let mut prev = lg.cell_index(&coords);
    let mut run_start: Option<usize> = None;
    loop {
        pos += dir;
        if pos < 0 || pos >= r {
            // A run reaching the grid edge has no outer flank.
            return run_start.is_none().then_some(crossings);
        }
        coords[axis] = pos as usize;
        let cell = lg.cell_index(&coords);
        let in_outer = lg.label(cell) == Some(outer);
        match (run_start, in_outer) {
            (None, true) => run_start = Some(prev),
            (Some(before), false) => {
                let a = lg.cell_sign(before)?;
                let b = lg.cell_sign(cell)?;
                if a == 0 || b == 0 || a == b {
                    return None;
                }
                crossings += 1;
                run_start = None;
            }
            _ => {}
        }
        prev = cell;
    }
}

#[cfg(test)]
mod tests {
    use super::super::{label_components, GridSpec};
    use super::*;
    use crate::Evaluate;

    struct Annulus;

    impl Evaluate for Annulus {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            let r2 = x[0] * x[0] + x[1] * x[1];
            (r2 - 1.0) * (r2 - 4.0)
        }
    }

    struct TwoDiscs;

    impl Evaluate for TwoDiscs {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            let a = (x[0] - 1.5).powi(2) + x[1] * x[1] - 0.5;
            let b = (x[0] + 1.5).powi(2) + x[1] * x[1] - 0.5;
            a * b
        }
    }

    #[test]
    fn concentric_circles_nest() {
        let lg = label_components(&Annulus, &GridSpec::new(2, 3.0, 128).unwrap()).unwrap();
        assert_eq!(lg.components.len(), 2);
        let nest = nesting(&lg);
        assert_eq!(nest.pairs.len(), 1);
        let (outer, inner) = nest.pairs[0];
        assert!(lg.components[outer as usize].cells > lg.components[inner as usize].cells);
    }

    #[test]
    fn separate_circles_do_not_nest() {
        let lg = label_components(&TwoDiscs, &GridSpec::new(2, 3.0, 128).unwrap()).unwrap();
        assert_eq!(lg.components.len(), 2);
        let nest = nesting(&lg);
        assert!(nest.pairs.is_empty());
        assert!(nest.indeterminate.is_empty());
    }
}
