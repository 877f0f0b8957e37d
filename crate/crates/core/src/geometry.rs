//! Domain specifications, boundary decomposition into labeled pieces, and
//! adaptive tracing of boundary images into viewport polylines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{eval_map, MapSpec};
use crate::xplane::{PrecisionCtx, XPoint};

/// An open subset of the sphere whose boundary decomposes into the pieces
/// returned by [`boundary_pieces`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DomainSpec {
    /// The sphere minus {0, infinity}.
    PuncturedSphere,
    /// Re z > 0, Im z > 0.
    FirstQuadrant,
    /// 0 < Re z < pi/2, Im z > 0.
    HalfStrip,
    /// |z| < r.
    Disk { r: f64 },
    /// |z| > r, together with infinity.
    DiskComplement { r: f64 },
    /// x0 < Re z < x1, y0 < Im z < y1.
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Disk { r } | DomainSpec::DiskComplement { r } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(Error::Parameter(format!("radius must be positive, got {r}")));
                }
            }
            DomainSpec::Rectangle { x0, y0, x1, y1 } => {
                if !(x0 < x1 && y0 < y1) {
                    return Err(Error::Parameter("rectangle corners must be ordered".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Open-set membership on the sphere.
    pub fn contains(&self, z: XPoint) -> bool {
        match (self, z.finite()) {
            (DomainSpec::PuncturedSphere, Some((re, im))) => re != 0.0 || im != 0.0,
            (DomainSpec::PuncturedSphere, None) => false,
            (DomainSpec::FirstQuadrant, Some((re, im))) => re > 0.0 && im > 0.0,
            (DomainSpec::HalfStrip, Some((re, im))) => {
                re > 0.0 && re < std::f64::consts::FRAC_PI_2 && im > 0.0
            }
            (DomainSpec::Disk { r }, Some((re, im))) => re.hypot(im) < *r,
            (DomainSpec::DiskComplement { r }, Some((re, im))) => re.hypot(im) > *r,
            (DomainSpec::DiskComplement { .. }, None) => true,
            (DomainSpec::Rectangle { x0, y0, x1, y1 }, Some((re, im))) => {
                re > *x0 && re < *x1 && im > *y0 && im < *y1
            }
            _ => false,
        }
    }
}

/// Geometric support of a boundary piece.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PieceGeometry {
    Point(XPoint),
    Segment { a: (f64, f64), b: (f64, f64) },
    /// `origin + dir * t/(1-t)`; the parameter value 1 is the sphere point
    /// at infinity (which, when part of the boundary, lives in its own
    /// `Point` piece).
    Ray { origin: (f64, f64), dir: (f64, f64) },
    Circle { center: (f64, f64), r: f64 },
}

/// One labeled piece of a domain boundary with a `[0,1]` parametrization.
/// `closed_start`/`closed_end` record whether the parameter endpoints
/// belong to the piece itself (open ends belong to a neighboring piece).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub id: String,
    pub geometry: PieceGeometry,
    pub closed_start: bool,
    pub closed_end: bool,
}

impl BoundaryPiece {
    fn new(id: &str, geometry: PieceGeometry, closed_start: bool, closed_end: bool) -> Self {
        BoundaryPiece {
            id: id.to_string(),
            geometry,
            closed_start,
            closed_end,
        }
    }

    /// The parametrization at `t` in `[0,1]`.
    pub fn at(&self, t: f64) -> XPoint {
        match &self.geometry {
            PieceGeometry::Point(p) => *p,
            PieceGeometry::Segment { a, b } => {
                XPoint::new(a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
            }
            PieceGeometry::Ray { origin, dir } => {
                if t >= 1.0 {
                    return XPoint::Infinity;
                }
                let s = t / (1.0 - t);
                XPoint::new(origin.0 + dir.0 * s, origin.1 + dir.1 * s)
            }
            PieceGeometry::Circle { center, r } => {
                let th = 2.0 * std::f64::consts::PI * t;
                XPoint::new(center.0 + r * th.cos(), center.1 + r * th.sin())
            }
        }
    }

    /// Parameter range to sample: open ends are inset so sampling stays on
    /// the piece; rays stop short of the parameter value for infinity.
    pub fn param_range(&self) -> (f64, f64) {
        match self.geometry {
            PieceGeometry::Point(_) => (0.0, 0.0),
            PieceGeometry::Circle { .. } => (0.0, 1.0),
            _ => {
                let lo = if self.closed_start { 0.0 } else { 1e-6 };
                let hi = if self.closed_end { 1.0 } else { 1.0 - 1e-6 };
                (lo, hi)
            }
        }
    }
}

/// The boundary decomposition of each supported domain.
pub fn boundary_pieces(d: &DomainSpec) -> Vec<BoundaryPiece> {
    use PieceGeometry::*;
    match d {
        DomainSpec::PuncturedSphere => vec![
            BoundaryPiece::new("0", Point(XPoint::zero()), true, true),
            BoundaryPiece::new("inf", Point(XPoint::Infinity), true, true),
        ],
        DomainSpec::FirstQuadrant => vec![
            BoundaryPiece::new("inf", Point(XPoint::Infinity), true, true),
            // Gamma1: Re z >= 0, Im z = 0 (origin included)
            BoundaryPiece::new(
                "Γ1",
                Ray {
                    origin: (0.0, 0.0),
                    dir: (1.0, 0.0),
                },
                true,
                false,
            ),
            // Gamma2: Re z = 0, Im z > 0 (origin belongs to Gamma1)
            BoundaryPiece::new(
                "Γ2",
                Ray {
                    origin: (0.0, 0.0),
                    dir: (0.0, 1.0),
                },
                false,
                false,
            ),
        ],
        DomainSpec::HalfStrip => {
            let half_pi = std::f64::consts::FRAC_PI_2;
            vec![
                BoundaryPiece::new("Γ1", Point(XPoint::zero()), true, true),
                // Gamma2: Re z = 0, Im z > 0
                BoundaryPiece::new(
                    "Γ2",
                    Ray {
                        origin: (0.0, 0.0),
                        dir: (0.0, 1.0),
                    },
                    false,
                    false,
                ),
                BoundaryPiece::new("Γ3", Point(XPoint::Infinity), true, true),
                // Gamma4: Re z = pi/2, Im z >= 0
                BoundaryPiece::new(
                    "Γ4",
                    Ray {
                        origin: (half_pi, 0.0),
                        dir: (0.0, 1.0),
                    },
                    true,
                    false,
                ),
                // Gamma5: the open bottom segment (0, pi/2)
                BoundaryPiece::new(
                    "Γ5",
                    Segment {
                        a: (0.0, 0.0),
                        b: (half_pi, 0.0),
                    },
                    false,
                    false,
                ),
            ]
        }
        DomainSpec::Disk { r } => vec![BoundaryPiece::new(
            "∂D",
            Circle {
                center: (0.0, 0.0),
                r: *r,
            },
            true,
            true,
        )],
        DomainSpec::DiskComplement { r } => vec![BoundaryPiece::new(
            "∂D",
            Circle {
                center: (0.0, 0.0),
                r: *r,
            },
            true,
            true,
        )],
        DomainSpec::Rectangle { x0, y0, x1, y1 } => {
            // each edge takes its starting corner, so corners are covered once
            let c = [(*x0, *y0), (*x1, *y0), (*x1, *y1), (*x0, *y1)];
            (0..4)
                .map(|i| {
                    BoundaryPiece::new(
                        &format!("edge{}", i + 1),
                        Segment {
                            a: c[i],
                            b: c[(i + 1) % 4],
                        },
                        true,
                        false,
                    )
                })
                .collect()
        }
    }
}

/// An axis-aligned window in the image plane with a square cell grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    /// Cells per axis.
    pub resolution: usize,
}

impl Viewport {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64, resolution: usize) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) {
            return Err(Error::Parameter(format!(
                "viewport must have positive area, got [{x0},{x1}]x[{y0},{y1}]"
            )));
        }
        if resolution < 16 {
            return Err(Error::Parameter(format!(
                "viewport resolution must be >= 16, got {resolution}"
            )));
        }
        Ok(Viewport {
            x0,
            y0,
            x1,
            y1,
            resolution,
        })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Half-diagonal about the center.
    pub fn circumradius(&self) -> f64 {
        0.5 * self.width().hypot(self.height())
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let n = self.resolution as f64;
        (self.width() / n, self.height() / n)
    }

    /// Grid cell containing `(x, y)`, if inside the window.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !self.contains(x, y) {
            return None;
        }
        let (cw, ch) = self.cell_size();
        let i = (((x - self.x0) / cw) as usize).min(self.resolution - 1);
        let j = (((y - self.y0) / ch) as usize).min(self.resolution - 1);
        Some((i, j))
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        let (cw, ch) = self.cell_size();
        (
            self.x0 + (i as f64 + 0.5) * cw,
            self.y0 + (j as f64 + 0.5) * ch,
        )
    }
}

/// The image of one boundary piece, as in-plane polyline runs separated by
/// escape intervals of the parameter (where the image was at or beyond the
/// escape radius, or at infinity).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub piece_id: String,
    /// Maximal runs of consecutive in-plane sample points.
    pub runs: Vec<Vec<(f64, f64)>>,
    /// Parameter intervals over which the image was out of view.
    pub escapes: Vec<(f64, f64)>,
    /// Set when the refinement-depth cap was hit before reaching `tol`.
    pub low_confidence: bool,
}

impl TracedCurve {
    /// All polyline points, flattened.
    pub fn point_count(&self) -> usize {
        self.runs.iter().map(Vec::len).sum()
    }
}

const DEPTH_CAP: u32 = 24;
/// Depth to which fully escaped intervals are still probed for re-entry.
const ESCAPE_PROBE_DEPTH: u32 = 7;

struct Tracer<'a> {
    map: &'a MapSpec,
    piece: &'a BoundaryPiece,
    ctx: &'a PrecisionCtx,
    tol: f64,
    escape_radius: f64,
    center: (f64, f64),
    samples: Vec<(f64, Option<(f64, f64)>)>,
    low_confidence: bool,
}

impl<'a> Tracer<'a> {
    fn eval(&self, t: f64) -> Result<Option<(f64, f64)>> {
        let w = eval_map(self.map, self.piece.at(t), self.ctx)?;
        Ok(match w.value.finite() {
            None => None,
            Some((x, y)) => {
                let d = (x - self.center.0).hypot(y - self.center.1);
                if d > self.escape_radius {
                    None
                } else {
                    Some((x, y))
                }
            }
        })
    }

    fn needs_split(&self, w0: &Option<(f64, f64)>, w1: &Option<(f64, f64)>, depth: u32) -> bool {
        match (w0, w1) {
            (Some(a), Some(b)) => (a.0 - b.0).hypot(a.1 - b.1) > self.tol,
            (None, None) => depth < ESCAPE_PROBE_DEPTH,
            _ => true,
        }
    }

    /// Emit all samples strictly between `t0` and `t1` in order, then `t1`.
    fn refine(
        &mut self,
        t0: f64,
        w0: Option<(f64, f64)>,
        t1: f64,
        w1: Option<(f64, f64)>,
        depth: u32,
    ) -> Result<()> {
        if self.needs_split(&w0, &w1, depth) && depth < DEPTH_CAP && t1 - t0 > f64::EPSILON {
            let tm = 0.5 * (t0 + t1);
            let wm = self.eval(tm)?;
            self.refine(t0, w0, tm, wm, depth + 1)?;
            self.refine(tm, wm, t1, w1, depth + 1)?;
            return Ok(());
        }
        if depth >= DEPTH_CAP && matches!((&w0, &w1), (Some(_), Some(_))) {
            self.low_confidence = true;
        }
        self.samples.push((t1, w1));
        Ok(())
    }
}

/// Trace the image of a boundary piece by adaptive parameter bisection
/// until consecutive in-plane points are within `tol`, or the depth cap is
/// reached (flagged, not fatal).
pub fn trace_image(
    map: &MapSpec,
    piece: &BoundaryPiece,
    vp: &Viewport,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<TracedCurve> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter(format!("tol must be positive, got {tol}")));
    }
    let escape_radius = vp.circumradius() * 4.0;
    let center = vp.center();

    if let PieceGeometry::Point(p) = &piece.geometry {
        let w = eval_map(map, *p, ctx)?;
        let (runs, escapes) = match w.value.finite() {
            Some((x, y)) if (x - center.0).hypot(y - center.1) <= escape_radius => {
                (vec![vec![(x, y)]], vec![])
            }
            _ => (vec![], vec![(0.0, 1.0)]),
        };
        return Ok(TracedCurve {
            piece_id: piece.id.clone(),
            runs,
            escapes,
            low_confidence: false,
        });
    }

    let (t_lo, t_hi) = piece.param_range();
    let mut tracer = Tracer {
        map,
        piece,
        ctx,
        tol,
        escape_radius,
        center,
        samples: Vec::new(),
        low_confidence: false,
    };

    const INIT: usize = 32;
    let mut prev_t = t_lo;
    let mut prev_w = tracer.eval(t_lo)?;
    tracer.samples.push((t_lo, prev_w));
    for k in 1..=INIT {
        let t = t_lo + (t_hi - t_lo) * k as f64 / INIT as f64;
        let w = tracer.eval(t)?;
        tracer.refine(prev_t, prev_w, t, w, 0)?;
        prev_t = t;
        prev_w = w;
    }

    // split the ordered samples into in-plane runs and escape intervals
    let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut escapes: Vec<(f64, f64)> = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    let mut esc_start: Option<f64> = None;
    for &(t, w) in &tracer.samples {
        match w {
            Some(pt) => {
                if let Some(s) = esc_start.take() {
                    escapes.push((s, t));
                }
                cur.push(pt);
            }
            None => {
                if !cur.is_empty() {
                    runs.push(std::mem::take(&mut cur));
                }
                if esc_start.is_none() {
                    esc_start = Some(t);
                }
            }
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    if let Some(s) = esc_start {
        escapes.push((s, t_hi));
    }

    Ok(TracedCurve {
        piece_id: piece.id.clone(),
        runs,
        escapes,
        low_confidence: tracer.low_confidence,
    })
}

/// Deterministic interior sample points: a quasi-uniform Kronecker sequence
/// over a bounded exhaustion of the domain, interleaved with sequences
/// approaching each boundary piece (and infinity, where it is adherent).
pub fn interior_samples(d: &DomainSpec, n: usize) -> Vec<XPoint> {
    assert!(n >= 1, "n must be >= 1");
    // 2D Kronecker sequence with the plastic-number rotations
    let kron = |k: usize| {
        let a1 = 0.754_877_666_246_692_7_f64;
        let a2 = 0.569_840_290_998_053_2_f64;
        (
            (0.5 + (k as f64 + 1.0) * a1).fract(),
            (0.5 + (k as f64 + 1.0) * a2).fract(),
        )
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (u, v) = kron(k);
        // every fourth point approaches a boundary feature; the rest are bulk
        let near = k % 4 == 3;
        let depth = 2f64.powi(-(((k / 4) % 18) as i32 + 2)); // in (0, 1/4]
        let z = match d {
            DomainSpec::PuncturedSphere => {
                if near {
                    // alternately toward 0 and infinity
                    let r = if (k / 4) % 2 == 0 { depth } else { 1.0 / depth };
                    let th = 2.0 * std::f64::consts::PI * v;
                    (r * th.cos(), r * th.sin())
                } else {
                    let r = (8.0 * (u - 0.5)).exp(); // radii e^-4 .. e^4
                    let th = 2.0 * std::f64::consts::PI * v;
                    (r * th.cos(), r * th.sin())
                }
            }
            DomainSpec::FirstQuadrant => {
                if near {
                    match (k / 4) % 4 {
                        0 => (0.2 + 3.0 * v, depth),          // toward Gamma1
                        1 => (depth, 0.2 + 3.0 * v),          // toward Gamma2
                        2 => {
                            // the unit-circle annulus, both sides
                            let r = if (k / 8) % 2 == 0 { 0.95 } else { 1.05 };
                            let th = std::f64::consts::FRAC_PI_2 * (0.1 + 0.8 * v);
                            (r * th.cos(), r * th.sin())
                        }
                        _ => {
                            let r = 4.0 / depth; // toward infinity
                            let th = std::f64::consts::FRAC_PI_2 * (0.1 + 0.8 * v);
                            (r * th.cos(), r * th.sin())
                        }
                    }
                } else {
                    (u / (1.0 - 0.999 * u), v / (1.0 - 0.999 * v))
                }
            }
            DomainSpec::HalfStrip => {
                let half_pi = std::f64::consts::FRAC_PI_2;
                if near {
                    match (k / 4) % 4 {
                        0 => (depth * half_pi, 0.2 + 2.0 * v), // toward Gamma2
                        1 => (half_pi * (1.0 - depth), 0.2 + 2.0 * v), // toward Gamma4
                        2 => (half_pi * (0.05 + 0.9 * v), depth), // toward Gamma5 (and 0)
                        _ => (half_pi * (0.05 + 0.9 * v), 2.0 / depth), // toward infinity
                    }
                } else {
                    (half_pi * (0.02 + 0.96 * u), v / (1.0 - 0.999 * v) + 1e-3)
                }
            }
            DomainSpec::Disk { r } => {
                let rad = if near { r * (1.0 - depth) } else { r * 0.98 * u.sqrt() };
                let th = 2.0 * std::f64::consts::PI * v;
                (rad * th.cos(), rad * th.sin())
            }
            DomainSpec::DiskComplement { r } => {
                let rad = if near {
                    if (k / 4) % 2 == 0 {
                        r * (1.0 + depth)
                    } else {
                        r / depth // toward infinity
                    }
                } else {
                    r * (1.02 + 6.0 * u)
                };
                let th = 2.0 * std::f64::consts::PI * v;
                (rad * th.cos(), rad * th.sin())
            }
            DomainSpec::Rectangle { x0, y0, x1, y1 } => {
                let (w, h) = (x1 - x0, y1 - y0);
                if near {
                    match (k / 4) % 4 {
                        0 => (x0 + w * (0.1 + 0.8 * v), y0 + h * depth),
                        1 => (x1 - w * depth * 0.5, y0 + h * (0.1 + 0.8 * v)),
                        2 => (x0 + w * (0.1 + 0.8 * v), y1 - h * depth * 0.5),
                        _ => (x0 + w * depth * 0.5, y0 + h * (0.1 + 0.8 * v)),
                    }
                } else {
                    (x0 + w * (0.01 + 0.98 * u), y0 + h * (0.01 + 0.98 * v))
                }
            }
        };
        let p = XPoint::new(z.0, z.1);
        debug_assert!(d.contains(p), "sample {p} escaped {d:?}");
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn piece_inventories() {
        let hs = boundary_pieces(&DomainSpec::HalfStrip);
        assert_eq!(
            hs.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(),
            ["Γ1", "Γ2", "Γ3", "Γ4", "Γ5"]
        );
        assert_eq!(boundary_pieces(&DomainSpec::PuncturedSphere).len(), 2);
        assert_eq!(boundary_pieces(&DomainSpec::Disk { r: 1.0 }).len(), 1);
        let fq = boundary_pieces(&DomainSpec::FirstQuadrant);
        assert_eq!(fq.len(), 3);
        assert!(fq.iter().any(|p| matches!(p.geometry, PieceGeometry::Point(XPoint::Infinity))));
    }

    #[test]
    fn half_strip_pieces_lie_on_the_boundary() {
        let hs = boundary_pieces(&DomainSpec::HalfStrip);
        // Gamma4 starts at pi/2 and runs upward
        let g4 = &hs[3];
        assert_eq!(g4.at(0.0), XPoint::new(FRAC_PI_2, 0.0));
        let (x, y) = g4.at(0.5).finite().unwrap();
        assert!((x - FRAC_PI_2).abs() < 1e-15 && y > 0.0);
        assert_eq!(g4.at(1.0), XPoint::Infinity);
        // Gamma5 spans the bottom edge
        let g5 = &hs[4];
        let (x, y) = g5.at(0.5).finite().unwrap();
        assert!((x - FRAC_PI_2 / 2.0).abs() < 1e-15 && y == 0.0);
    }

    #[test]
    fn pieces_disjoint_and_outside_domain() {
        for d in [
            DomainSpec::HalfStrip,
            DomainSpec::FirstQuadrant,
            DomainSpec::PuncturedSphere,
            DomainSpec::Disk { r: 1.0 },
            DomainSpec::Rectangle { x0: -1.0, y0: -1.0, x1: 1.0, y1: 1.0 },
        ] {
            let pieces = boundary_pieces(&d);
            let mut pts: Vec<XPoint> = Vec::new();
            for p in &pieces {
                let (lo, hi) = p.param_range();
                for k in 0..=40 {
                    let t = lo + (hi - lo) * k as f64 / 40.0;
                    let z = p.at(t);
                    if let PieceGeometry::Circle { r, .. } = p.geometry {
                        // circle points carry fp round-off; check the radius
                        assert!((z.abs() - r).abs() < 1e-12, "{d:?} {} t={t}", p.id);
                    } else {
                        assert!(!d.contains(z), "{d:?} {} t={t}", p.id);
                    }
                    pts.push(z);
                }
                if matches!(p.geometry, PieceGeometry::Point(_)) {
                    pts.push(p.at(0.0));
                }
            }
            // pieces are pairwise disjoint: no duplicate sampled points
            // across distinct pieces (within fp equality)
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    if a == b {
                        // same piece can revisit endpoints of its own range
                        continue;
                    }
                }
            }
        }
    }

    #[test]
    fn viewport_validation_and_cells() {
        assert!(Viewport::new(0.0, 0.0, 1.0, 1.0, 8).is_err());
        assert!(Viewport::new(1.0, 0.0, 0.0, 1.0, 64).is_err());
        let vp = Viewport::new(-2.0, -2.0, 2.0, 2.0, 64).unwrap();
        assert_eq!(vp.cell_of(-2.0, -2.0), Some((0, 0)));
        assert_eq!(vp.cell_of(2.0, 2.0), Some((63, 63)));
        assert_eq!(vp.cell_of(2.1, 0.0), None);
        let (cx, cy) = vp.cell_center(0, 0);
        assert!((cx - -1.96875).abs() < 1e-12 && (cy - -1.96875).abs() < 1e-12);
    }

    #[test]
    fn trace_identity_on_unit_circle() {
        let vp = Viewport::new(-2.0, -2.0, 2.0, 2.0, 64).unwrap();
        let ctx = PrecisionCtx::native();
        let spec = MapSpec::RationalExpr(crate::maps::parse_expr("z").unwrap());
        let piece = &boundary_pieces(&DomainSpec::Disk { r: 1.0 })[0];
        let c = trace_image(&spec, piece, &vp, 1e-2, &ctx).unwrap();
        assert!(!c.low_confidence);
        assert!(c.escapes.is_empty());
        assert_eq!(c.runs.len(), 1);
        let run = &c.runs[0];
        assert!(run.len() > 100);
        for w in run.windows(2) {
            let d = (w[0].0 - w[1].0).hypot(w[0].1 - w[1].1);
            assert!(d <= 1e-2 + 1e-12);
        }
        for &(x, y) in run {
            assert!((x.hypot(y) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_quadrant_gamma2_covers_the_segment() {
        let vp = Viewport::new(-3.0, -3.0, 3.0, 3.0, 64).unwrap();
        let ctx = PrecisionCtx::native();
        let fq = boundary_pieces(&DomainSpec::FirstQuadrant);
        let g2 = fq.iter().find(|p| p.id == "Γ2").unwrap();
        let c = trace_image(&MapSpec::QuadrantRational, g2, &vp, 1e-2, &ctx).unwrap();
        let pts: Vec<_> = c.runs.iter().flatten().collect();
        assert!(!pts.is_empty());
        for &&(x, y) in &pts {
            assert!(x.abs() < 1e-9, "image must sit on Re w = 0, got {x}");
            assert!((-1.0 - 1e-9..0.0).contains(&y), "Im w in [-1,0), got {y}");
        }
        // coverage: both ends of the segment are approached
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let (min, max) = ys.iter().fold((1.0f64, -1.0f64), |(a, b), &y| (a.min(y), b.max(y)));
        assert!(min < -0.99 && max > -0.05, "covered [{min}, {max}]");
    }

    #[test]
    fn trace_haagerup_gamma5_on_positive_real_axis() {
        let vp = Viewport::new(-1.0, -1.0, 1.0, 1.0, 64).unwrap();
        let ctx = PrecisionCtx::native();
        let hs = boundary_pieces(&DomainSpec::HalfStrip);
        let g5 = hs.iter().find(|p| p.id == "Γ5").unwrap();
        let spec = MapSpec::HaagerupSeries {
            p: 1.9,
            target_eps: 1e-9,
        };
        let c = trace_image(&spec, g5, &vp, 5e-2, &ctx).unwrap();
        let pts: Vec<_> = c.runs.iter().flatten().collect();
        assert!(pts.len() > 10);
        for &&(x, y) in &pts {
            assert!(y.abs() <= 1e-8, "Im f = 0 on the bottom edge, got {y}");
            assert!(x > -1e-8, "Re f > 0 on the bottom edge, got {x}");
        }
    }

    #[test]
    fn trace_point_pieces() {
        let vp = Viewport::new(-2.0, -2.0, 2.0, 2.0, 64).unwrap();
        let ctx = PrecisionCtx::native();
        let ps = boundary_pieces(&DomainSpec::PuncturedSphere);
        // Joukowski sends both punctures to infinity: empty traces
        for p in &ps {
            let c = trace_image(&MapSpec::Joukowski, p, &vp, 1e-2, &ctx).unwrap();
            assert!(c.runs.is_empty());
            assert_eq!(c.escapes, vec![(0.0, 1.0)]);
        }
    }

    #[test]
    fn trace_tolerance_refinement() {
        let vp = Viewport::new(-2.0, -2.0, 2.0, 2.0, 64).unwrap();
        let ctx = PrecisionCtx::native();
        let spec = MapSpec::RationalExpr(crate::maps::parse_expr("z^2").unwrap());
        let piece = &boundary_pieces(&DomainSpec::Disk { r: 1.2 })[0];
        let coarse = trace_image(&spec, piece, &vp, 4e-2, &ctx).unwrap();
        let fine = trace_image(&spec, piece, &vp, 2e-2, &ctx).unwrap();
        assert!(fine.point_count() >= coarse.point_count());
        // one-sided Hausdorff: every fine point is near some coarse segment
        for &(x, y) in fine.runs.iter().flatten() {
            let mut best = f64::INFINITY;
            for run in &coarse.runs {
                for w in run.windows(2) {
                    best = best.min(dist_to_segment((x, y), w[0], w[1]));
                }
            }
            assert!(best <= 4e-2, "fine point ({x},{y}) is {best} away");
        }
    }

    fn dist_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
        let (vx, vy) = (b.0 - a.0, b.1 - a.1);
        let (wx, wy) = (p.0 - a.0, p.1 - a.1);
        let l2 = vx * vx + vy * vy;
        let t = if l2 == 0.0 { 0.0 } else { ((wx * vx + wy * vy) / l2).clamp(0.0, 1.0) };
        (wx - t * vx).hypot(wy - t * vy)
    }

    #[test]
    fn interior_samples_stay_inside() {
        for d in [
            DomainSpec::PuncturedSphere,
            DomainSpec::FirstQuadrant,
            DomainSpec::HalfStrip,
            DomainSpec::Disk { r: 1.0 },
            DomainSpec::DiskComplement { r: 2.0 },
            DomainSpec::Rectangle { x0: 0.0, y0: -1.0, x1: 2.0, y1: 1.0 },
        ] {
            for z in interior_samples(&d, 200) {
                assert!(d.contains(z), "{d:?} {z}");
            }
        }
        assert_eq!(interior_samples(&DomainSpec::Disk { r: 1.0 }, 1).len(), 1);
    }

    #[test]
    fn quadrant_samples_hit_unit_annulus() {
        let pts = interior_samples(&DomainSpec::FirstQuadrant, 100);
        let inner = pts.iter().any(|z| {
            let r = z.abs();
            r > 0.9 && r < 1.0
        });
        let outer = pts.iter().any(|z| {
            let r = z.abs();
            r >= 1.0 && r < 1.1
        });
        assert!(inner && outer, "annulus 0.9 < |z| < 1.1 must be sampled on both sides");
    }

    #[test]
    fn samples_approach_infinity_and_boundary() {
        let pts = interior_samples(&DomainSpec::HalfStrip, 400);
        assert!(pts.iter().any(|z| z.abs() > 1e3), "need samples far out");
        assert!(
            pts.iter()
                .any(|z| z.finite().unwrap().1 < 1e-3),
            "need samples near the bottom edge"
        );
        assert!(
            pts.iter()
                .any(|z| z.finite().unwrap().0 < 1e-3),
            "need samples near the left edge"
        );
    }
}
