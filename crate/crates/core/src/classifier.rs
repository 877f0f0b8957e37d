//! Rasterizes traced boundary-image curves, extracts connected components
//! of their complement in a viewport, and classifies each component from
//! interior-witness images.
//!
//! The underlying dichotomy: a connected set avoiding the boundary image is
//! either entirely inside the image of the domain or entirely outside it.
//! One witness inside a component therefore fills it; trusting the converse
//! (no witness, hence excluded) is a sampling statement, so it is gated on
//! a density threshold and otherwise reported as undetermined.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{TracedCurve, Viewport};
use crate::maps::EvalResult;
use crate::xplane::XPoint;

const CURVE: i32 = -2;
const UNLABELED: i32 = -1;

/// Cell grid over a viewport: curve band, or component label.
#[derive(Clone, Debug)]
pub struct Raster {
    pub vp: Viewport,
    /// Row-major `j * resolution + i`; `CURVE`, `UNLABELED`, or a
    /// component id `>= 0`.
    cells: Vec<i32>,
}

impl Raster {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.vp.resolution + i
    }

    pub fn is_curve(&self, i: usize, j: usize) -> bool {
        self.cells[self.idx(i, j)] == CURVE
    }

    /// Component id of a cell, if labeled.
    pub fn component_of(&self, i: usize, j: usize) -> Option<u32> {
        let v = self.cells[self.idx(i, j)];
        (v >= 0).then_some(v as u32)
    }

    pub fn curve_cell_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == CURVE).count()
    }

    pub fn unlabeled_cell_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == UNLABELED).count()
    }
}

/// Mark every cell a polyline meets as curve, then thicken the band by one
/// cell of 8-connected dilation (so 4-connected flood fill cannot leak
/// diagonally across the curve).
pub fn rasterize_curves(curves: &[TracedCurve], vp: &Viewport) -> Raster {
    let n = vp.resolution;
    let mut cells = vec![UNLABELED; n * n];
    let (cw, ch) = vp.cell_size();
    let step = 0.5 * cw.min(ch);
    let mark = |x: f64, y: f64, cells: &mut Vec<i32>| {
        if let Some((i, j)) = vp.cell_of(x, y) {
            cells[j * n + i] = CURVE;
        }
    };
    for c in curves {
        for run in &c.runs {
            if run.len() == 1 {
                mark(run[0].0, run[0].1, &mut cells);
            }
            for w in run.windows(2) {
                let (a, b) = (w[0], w[1]);
                let len = (b.0 - a.0).hypot(b.1 - a.1);
                let steps = (len / step).ceil() as usize + 1;
                for s in 0..=steps {
                    let t = s as f64 / steps as f64;
                    mark(a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t, &mut cells);
                }
            }
        }
    }
    // one round of 8-connected dilation
    let base: Vec<usize> = (0..cells.len()).filter(|&k| cells[k] == CURVE).collect();
    for k in base {
        let (i, j) = (k % n, k / n);
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if (0..n as i64).contains(&ii) && (0..n as i64).contains(&jj) {
                    cells[jj as usize * n + ii as usize] = CURVE;
                }
            }
        }
    }
    Raster { vp: *vp, cells }
}

/// One 4-connected component of the non-curve cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub id: u32,
    pub cell_count: usize,
    pub touches_viewport_edge: bool,
}

/// 4-connected flood fill labeling every non-curve cell.
pub fn label_components(r: &mut Raster) -> Vec<ComponentInfo> {
    let n = r.vp.resolution;
    let mut out = Vec::new();
    let mut next = 0i32;
    for start in 0..r.cells.len() {
        if r.cells[start] != UNLABELED {
            continue;
        }
        let id = next;
        next += 1;
        let mut count = 0usize;
        let mut touches = false;
        let mut queue = VecDeque::from([start]);
        r.cells[start] = id;
        while let Some(k) = queue.pop_front() {
            count += 1;
            let (i, j) = (k % n, k / n);
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                touches = true;
            }
            let mut push = |kk: usize, cells: &mut Vec<i32>| {
                if cells[kk] == UNLABELED {
                    cells[kk] = id;
                    queue.push_back(kk);
                }
            };
            if i > 0 {
                push(k - 1, &mut r.cells);
            }
            if i + 1 < n {
                push(k + 1, &mut r.cells);
            }
            if j > 0 {
                push(k - n, &mut r.cells);
            }
            if j + 1 < n {
                push(k + n, &mut r.cells);
            }
        }
        out.push(ComponentInfo {
            id: id as u32,
            cell_count: count,
            touches_viewport_edge: touches,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Filled,
    Excluded,
    Undetermined,
}

/// Classification of one complement component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub id: u32,
    pub status: Status,
    /// Image points that landed in this component.
    pub witness_points: Vec<(f64, f64)>,
    pub touches_viewport_edge: bool,
    pub area_fraction: f64,
}

/// Witness density threshold: a component is only called excluded when the
/// expected number of witnesses for its area is at least this many.
pub const WITNESS_QUANTUM: f64 = 3.0;
/// Components smaller than this many cells are raster artifacts.
pub const MIN_COMPONENT_CELLS: usize = 4;
/// A witness buried this deep in the curve band means the raster is too
/// coarse to trust.
pub const MAX_BAND_THICKNESS: usize = 3;

/// True when every cell within Chebyshev radius 2 of `(i, j)` is curve:
/// the band is then locally thicker than [`MAX_BAND_THICKNESS`] cells in
/// every direction. Cells outside the raster count as non-curve.
fn deep_in_band(r: &Raster, i: usize, j: usize) -> bool {
    let n = r.vp.resolution as i64;
    for dj in -2i64..=2 {
        for di in -2i64..=2 {
            let (ii, jj) = (i as i64 + di, j as i64 + dj);
            if !(0..n).contains(&ii) || !(0..n).contains(&jj) {
                return false;
            }
            if !r.is_curve(ii as usize, jj as usize) {
                return false;
            }
        }
    }
    true
}

/// Classify components from witness images.
///
/// A component holding at least one witness is filled (by the dichotomy it
/// is then entirely inside the image). A component with no witness is
/// excluded only when enough witnesses landed in the viewport for its area;
/// otherwise it stays undetermined. When the map is finite on the closure
/// of its domain, every edge-touching component (the window onto the
/// component of infinity) is forced excluded, and a witness there is a
/// consistency error.
pub fn classify(
    raster: &Raster,
    components: &[ComponentInfo],
    witnesses: &[(XPoint, EvalResult)],
    map_finite_on_closure: bool,
) -> Result<Vec<ComponentReport>> {
    let (cw, ch) = raster.vp.cell_size();
    let cell = cw.min(ch);
    let n_total = (raster.vp.resolution * raster.vp.resolution) as f64;

    let mut per_comp: Vec<Vec<(f64, f64)>> = vec![Vec::new(); components.len()];
    let mut in_viewport = 0usize;
    for (z, w) in witnesses {
        let (x, y) = match w.value.finite() {
            Some(p) => p,
            None => continue, // at infinity: outside every finite window
        };
        if !w.err_radius.is_finite() || w.err_radius >= cell {
            return Err(Error::Precision(format!(
                "witness at {z} has err_radius {} >= cell size {cell}",
                w.err_radius
            )));
        }
        let (i, j) = match raster.vp.cell_of(x, y) {
            Some(c) => c,
            None => continue,
        };
        in_viewport += 1;
        if raster.is_curve(i, j) {
            if deep_in_band(raster, i, j) {
                return Err(Error::Resolution(format!(
                    "raster too coarse: witness at {z} maps into a curve band \
                     thicker than {MAX_BAND_THICKNESS} cells"
                )));
            }
            continue; // on the boundary image itself: uninformative
        }
        if let Some(id) = raster.component_of(i, j) {
            per_comp[id as usize].push((x, y));
        }
    }

    let mut reports = Vec::with_capacity(components.len());
    for (c, wit) in components.iter().zip(per_comp) {
        let area_fraction = c.cell_count as f64 / n_total;
        let forced_excluded = map_finite_on_closure && c.touches_viewport_edge;
        if forced_excluded && !wit.is_empty() {
            return Err(Error::Consistency(format!(
                "map is finite on the domain closure, yet component {} \
                 (touching the viewport edge) received {} witness(es)",
                c.id,
                wit.len()
            )));
        }
        let status = if c.cell_count < MIN_COMPONENT_CELLS {
            Status::Undetermined
        } else if !wit.is_empty() {
            Status::Filled
        } else if forced_excluded {
            Status::Excluded
        } else if in_viewport as f64 * area_fraction >= WITNESS_QUANTUM {
            Status::Excluded
        } else {
            Status::Undetermined
        };
        reports.push(ComponentReport {
            id: c.id,
            status,
            witness_points: wit,
            touches_viewport_edge: c.touches_viewport_edge,
            area_fraction,
        });
    }
    Ok(reports)
}

/// Result of checking classified components against an expectation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectOutcome {
    /// False when undetermined components made the check inconclusive.
    pub conclusive: bool,
    pub pass: bool,
    /// `(component id, expected, actual, representative point)`.
    pub diffs: Vec<(u32, Status, Status, (f64, f64))>,
}

/// Multi-source BFS distance (in cells) from the curve band.
fn curve_distance_field(r: &Raster) -> Vec<u32> {
    let n = r.vp.resolution;
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::new();
    for k in 0..n * n {
        if r.cells[k] == CURVE {
            dist[k] = 0;
            queue.push_back(k);
        }
    }
    if queue.is_empty() {
        // no curve at all: distance from the viewport edge instead
        for k in 0..n * n {
            let (i, j) = (k % n, k / n);
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                dist[k] = 0;
                queue.push_back(k);
            }
        }
    }
    while let Some(k) = queue.pop_front() {
        let (i, j) = (k % n, k / n);
        let d = dist[k] + 1;
        for (ii, jj) in [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ] {
            if ii < n && jj < n {
                let kk = jj * n + ii;
                if dist[kk] > d {
                    dist[kk] = d;
                    queue.push_back(kk);
                }
            }
        }
    }
    dist
}

/// Check each component's status against an expectation evaluated at its
/// representative point (the cell center farthest from the curve band).
/// Undetermined components make the outcome inconclusive, not failing.
pub fn expect_outcome(
    raster: &Raster,
    reports: &[ComponentReport],
    expectation: &dyn Fn(f64, f64) -> Status,
) -> ExpectOutcome {
    let n = raster.vp.resolution;
    let dist = curve_distance_field(raster);
    // representative cell per component: farthest from the curve
    let mut rep: Vec<Option<(usize, usize, u32)>> = vec![None; reports.len()];
    for k in 0..n * n {
        if let Some(id) = raster.component_of(k % n, k / n) {
            let id = id as usize;
            if id < rep.len() && rep[id].map_or(true, |(_, _, d)| dist[k] > d) {
                rep[id] = Some((k % n, k / n, dist[k]));
            }
        }
    }
    let mut out = ExpectOutcome {
        conclusive: true,
        pass: true,
        diffs: Vec::new(),
    };
    for r in reports {
        if r.status == Status::Undetermined {
            out.conclusive = false;
            continue;
        }
        let (i, j, _) = rep[r.id as usize].expect("labeled component has cells");
        let (x, y) = raster.vp.cell_center(i, j);
        let expected = expectation(x, y);
        if expected != r.status {
            out.pass = false;
            out.diffs.push((r.id, expected, r.status, (x, y)));
        }
    }
    out
}
