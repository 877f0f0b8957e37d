//! Executable forms of the modulus principles: the finite maximum-modulus
//! check, the minimum-modulus dichotomy, and the zero certificate for
//! polynomials (the fundamental-theorem-of-algebra demonstration).

use serde::{Deserialize, Serialize};

use crate::classifier::{classify, label_components, rasterize_curves, Status};
use crate::error::{Error, Result};
use crate::geometry::{boundary_pieces, interior_samples, trace_image, DomainSpec, Viewport};
use crate::maps::{eval_map, Expr, MapSpec};
use crate::xplane::{PrecisionCtx, XPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// The image covers the disk of radius `m_inf` about 0.
    Fill,
    /// `|f| >= m_inf` throughout the closure.
    Containment,
    Inconclusive,
}

/// Boundary/interior modulus statistics and the supported branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusReport {
    /// `sup |f|` over boundary samples.
    pub m_sup: f64,
    /// `inf |f|` over boundary samples.
    pub m_inf: f64,
    pub interior_max: f64,
    pub interior_min: f64,
    /// Sampling-gap allowance used in all comparisons.
    pub tol: f64,
    pub branch: Branch,
}

/// `|f|` along a boundary piece at `n` parameters; errors if the map hits
/// infinity there (the principles assume a finite map on the closure).
fn boundary_moduli(
    f: &MapSpec,
    d: &DomainSpec,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<(Vec<f64>, f64)> {
    let mut moduli = Vec::new();
    let mut lipschitz = 0.0f64;
    for piece in boundary_pieces(d) {
        let (lo, hi) = piece.param_range();
        if lo == hi {
            let w = eval_map(f, piece.at(lo), ctx)?;
            match w.value.finite() {
                Some((x, y)) => moduli.push(x.hypot(y)),
                None => {
                    return Err(Error::Premise(format!(
                        "map is not finite on the closure: infinite at {}",
                        piece.at(lo)
                    )))
                }
            }
            continue;
        }
        // Lipschitz estimate from finite differences at 4x density
        let dense = 4 * n;
        let mut prev: Option<(XPoint, f64)> = None;
        for k in 0..=dense {
            let t = lo + (hi - lo) * k as f64 / dense as f64;
            let z = piece.at(t);
            let w = eval_map(f, z, ctx)?;
            let (x, y) = w.value.finite().ok_or_else(|| {
                Error::Premise(format!("map is not finite on the closure: infinite at {z}"))
            })?;
            let m = x.hypot(y);
            if k % 4 == 0 {
                moduli.push(m);
            }
            if let Some((pz, pm)) = prev {
                let gap = match (z.finite(), pz.finite()) {
                    (Some((a, b)), Some((c, dd))) => (a - c).hypot(b - dd),
                    _ => f64::INFINITY,
                };
                if gap > 0.0 && gap.is_finite() {
                    lipschitz = lipschitz.max((m - pm).abs() / gap);
                }
            }
            prev = Some((z, m));
        }
    }
    Ok((moduli, lipschitz))
}

/// Largest geometric gap between consecutive boundary samples at density `n`.
fn boundary_gap(d: &DomainSpec, n: usize) -> f64 {
    let mut h = 0.0f64;
    for piece in boundary_pieces(d) {
        let (lo, hi) = piece.param_range();
        if lo == hi {
            continue;
        }
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=n {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            if let Some((x, y)) = piece.at(t).finite() {
                if let Some((px, py)) = prev {
                    h = h.max((x - px).hypot(y - py));
                }
                prev = Some((x, y));
            }
        }
    }
    h
}

fn interior_moduli(
    f: &MapSpec,
    d: &DomainSpec,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<(f64, f64)> {
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for z in interior_samples(d, n) {
        let w = eval_map(f, z, ctx)?;
        let m = match w.value.finite() {
            Some((x, y)) => x.hypot(y),
            None => f64::INFINITY,
        };
        max = max.max(m);
        min = min.min(m);
    }
    Ok((max, min))
}

/// The finite maximum-modulus check: for a map finite on the closed
/// domain, the interior modulus never exceeds the boundary supremum
/// (up to the sampling-gap allowance `L*h` plus evaluation error).
pub fn finmax_check(
    f: &MapSpec,
    d: &DomainSpec,
    n_boundary: usize,
    n_interior: usize,
    ctx: &PrecisionCtx,
) -> Result<ModulusReport> {
    d.validate()?;
    let (moduli, lipschitz) = boundary_moduli(f, d, n_boundary, ctx)?;
    let h = boundary_gap(d, n_boundary);
    let tol = lipschitz * h + 1e-9;
    let m_sup = moduli.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m_inf = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    let (interior_max, interior_min) = interior_moduli(f, d, n_interior, ctx)?;
    if interior_max > m_sup + tol {
        return Err(Error::Consistency(format!(
            "interior modulus {interior_max} exceeds boundary supremum \
             {m_sup} + tol {tol}: the map cannot be finite and holomorphic \
             on the closure"
        )));
    }
    Ok(ModulusReport {
        m_sup,
        m_inf,
        interior_max,
        interior_min,
        tol,
        branch: Branch::Inconclusive,
    })
}

/// The minimum-modulus dichotomy: either the image covers the full disk of
/// radius `m = inf |f|(boundary)` (branch `Fill`, confirmed by classifying
/// sampled points of that disk as filled), or `|f| >= m` throughout
/// (branch `Containment`).
pub fn minmp_dichotomy(
    f: &MapSpec,
    d: &DomainSpec,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<ModulusReport> {
    d.validate()?;
    let (moduli, lipschitz) = boundary_moduli(f, d, n, ctx)?;
    let h = boundary_gap(d, n);
    let tol = lipschitz * h + 1e-9;
    let m_sup = moduli.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m_inf = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    let (interior_max, interior_min) = interior_moduli(f, d, n, ctx)?;

    let mut report = ModulusReport {
        m_sup,
        m_inf,
        interior_max,
        interior_min,
        tol,
        branch: Branch::Inconclusive,
    };
    if interior_min >= m_inf - tol {
        report.branch = Branch::Containment;
        return Ok(report);
    }
    // some interior modulus dips below m: the fill branch; confirm that
    // sampled points of the disk B_m land in filled components
    let half = (m_sup.max(m_inf) * 1.2 + 0.5).max(m_inf * 1.5);
    let (raster, reports) = classify_image(f, d, half, 4 * n, ctx)?;
    let mut probes = vec![(0.0, 0.0)];
    for k in 0..8 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        probes.push((0.5 * m_inf * th.cos(), 0.5 * m_inf * th.sin()));
    }
    for (x, y) in probes {
        let (i, j) = raster
            .vp
            .cell_of(x, y)
            .ok_or_else(|| Error::Parameter("probe escaped the viewport".into()))?;
        if raster.is_curve(i, j) {
            return Ok(report); // probe on the curve band: inconclusive
        }
        let id = raster.component_of(i, j).unwrap();
        match reports.iter().find(|c| c.id == id).map(|c| c.status) {
            Some(Status::Filled) => {}
            _ => return Ok(report), // undetermined: inconclusive
        }
    }
    report.branch = Branch::Fill;
    Ok(report)
}

/// Whether `z` keeps at least the given relative margin from the domain
/// boundary. Domains without a cheap distance formula keep everything.
fn away_from_boundary(d: &DomainSpec, z: XPoint, frac: f64) -> bool {
    let Some((x, y)) = z.finite() else {
        return false;
    };
    match d {
        DomainSpec::Disk { r } => x.hypot(y) <= r * (1.0 - frac),
        DomainSpec::DiskComplement { r } => x.hypot(y) >= r * (1.0 + frac),
        DomainSpec::Rectangle { x0, y0, x1, y1 } => {
            let m = frac * (x1 - x0).min(y1 - y0);
            x >= x0 + m && x <= x1 - m && y >= y0 + m && y <= y1 - m
        }
        _ => true,
    }
}

/// Trace the boundary image, rasterize, and classify components from
/// witness evaluations. Retries at doubled raster resolution when a
/// witness image buries itself in a too-thick curve band.
fn classify_image(
    f: &MapSpec,
    d: &DomainSpec,
    half: f64,
    n_witness: usize,
    ctx: &PrecisionCtx,
) -> Result<(crate::classifier::Raster, Vec<crate::classifier::ComponentReport>)> {
    // bulk witnesses only: samples hugging the boundary map onto the traced
    // curve itself and certify nothing the modulus probes need, while
    // risking spurious too-coarse-raster reports at curve self-crossings
    let witnesses: Vec<_> = interior_samples(d, n_witness)
        .into_iter()
        .filter(|z| away_from_boundary(d, *z, 0.05))
        .map(|z| eval_map(f, z, ctx).map(|w| (z, w)))
        .collect::<Result<_>>()?;
    let finite = map_finite_on_closure(f, d);
    let pieces = boundary_pieces(d);
    let mut last_err = None;
    for resolution in [128usize, 256, 512] {
        let vp = Viewport::new(-half, -half, half, half, resolution)?;
        let (cw, _) = vp.cell_size();
        let curves: Vec<_> = pieces
            .iter()
            .map(|piece| trace_image(f, piece, &vp, 0.75 * cw, ctx))
            .collect::<Result<_>>()?;
        let mut raster = rasterize_curves(&curves, &vp);
        let comps = label_components(&mut raster);
        match classify(&raster, &comps, &witnesses, finite) {
            Ok(reports) => return Ok((raster, reports)),
            Err(e @ Error::Resolution(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

/// Maps that stay finite on the closed domain: expression maps without
/// division or negative powers, on bounded domains.
pub fn map_finite_on_closure(f: &MapSpec, d: &DomainSpec) -> bool {
    fn no_poles(e: &Expr) -> bool {
        match e {
            Expr::Z | Expr::Const { .. } => true,
            Expr::Neg(a) => no_poles(a),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => no_poles(a) && no_poles(b),
            Expr::Div(_, _) => false,
            Expr::Pow(a, n) => *n >= 0 && no_poles(a),
        }
    }
    let bounded = matches!(
        d,
        DomainSpec::Disk { .. } | DomainSpec::Rectangle { .. }
    );
    match f {
        MapSpec::RationalExpr(e) => bounded && no_poles(e),
        _ => false,
    }
}

/// Certificate that a polynomial vanishes inside the disk of radius `r`:
/// verifies the premise `min |f| on the circle > |f(0)|` (with a
/// sampling-gap allowance), then classifies the image of the disk and
/// requires `w = 0` to land in a filled component.
pub fn fta_zero_certificate(poly: &MapSpec, r: f64, ctx: &PrecisionCtx) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let d = DomainSpec::Disk { r };
    let (moduli, lipschitz) = boundary_moduli(poly, &d, 512, ctx)?;
    let h = boundary_gap(&d, 512);
    let tol = lipschitz * h + 1e-9;
    let min_bd = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    let at0 = eval_map(poly, XPoint::zero(), ctx)?;
    let f0 = at0.value.abs();
    // the premise min |f|(circle) > |f(0)| is rejected only on genuine
    // evidence of failure (equality within the sampling allowance is let
    // through; the classifier below remains the actual certificate)
    if min_bd < f0 - tol {
        return Err(Error::Premise(format!(
            "boundary minimum modulus {min_bd} (tol {tol}) does not exceed \
             |f(0)| = {f0}; choose a larger radius"
        )));
    }
    let max_bd = moduli.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let half = max_bd * 1.2 + 0.5;
    let (raster, reports) = classify_image(poly, &d, half, 600, ctx)?;
    let (i, j) = raster.vp.cell_of(0.0, 0.0).expect("origin is in the viewport");
    if raster.is_curve(i, j) {
        return Err(Error::Resolution(
            "w = 0 falls on the rasterized boundary image; premise margin \
             too small for this resolution"
                .into(),
        ));
    }
    let id = raster.component_of(i, j).unwrap();
    match reports.iter().find(|c| c.id == id).map(|c| c.status) {
        Some(Status::Filled) => Ok(()),
        other => Err(Error::Consistency(format!(
            "w = 0 lies in a component with status {other:?}; expected \
             filled (the polynomial must vanish inside the disk)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::parse_expr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn expr_map(src: &str) -> MapSpec {
        MapSpec::RationalExpr(parse_expr(src).unwrap())
    }

    /// Monic polynomial of the given degree with lower coefficients in the
    /// complex unit box, as a Horner-form expression tree.
    fn monic_poly(degree: usize, rng: &mut ChaCha8Rng) -> (MapSpec, f64) {
        let mut acc = Expr::Const { re: 1.0, im: 0.0 };
        let mut coeff_sum = 1.0;
        for _ in 0..degree {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            coeff_sum += re.hypot(im);
            acc = Expr::Add(
                Box::new(Expr::Mul(Box::new(acc), Box::new(Expr::Z))),
                Box::new(Expr::Add(
                    Box::new(Expr::Const { re, im: 0.0 }),
                    Box::new(Expr::Const { re: 0.0, im }),
                )),
            );
        }
        (MapSpec::RationalExpr(acc), coeff_sum)
    }

    #[test]
    fn finmax_identity_and_square() {
        let ctx = PrecisionCtx::native();
        let r = finmax_check(&expr_map("z"), &DomainSpec::Disk { r: 1.0 }, 256, 300, &ctx).unwrap();
        assert!((r.m_sup - 1.0).abs() < 1e-6);
        assert!(r.interior_max < 1.0);
        let r = finmax_check(&expr_map("z^2"), &DomainSpec::Disk { r: 2.0 }, 256, 300, &ctx).unwrap();
        assert!((r.m_sup - 4.0).abs() < 1e-6);
        assert!(r.interior_max <= 4.0 + r.tol);
    }

    #[test]
    fn finmax_random_polynomials() {
        let ctx = PrecisionCtx::native();
        let d = DomainSpec::Disk { r: 1.0 };
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (poly, _) = monic_poly(5, &mut rng);
            let r = finmax_check(&poly, &d, 256, 300, &ctx).unwrap();
            // brute-force oracle at twice the density agrees
            let r2 = finmax_check(&poly, &d, 512, 600, &ctx).unwrap();
            assert!(r2.interior_max <= r.m_sup + r.tol + r2.tol, "seed {seed}");
        }
    }

    #[test]
    fn finmax_rejects_poles_on_closure() {
        let ctx = PrecisionCtx::native();
        // 1/z blows up at the puncture-free disk center? no: pole at 0 is
        // inside the domain, not the boundary; use a boundary pole instead
        let r = finmax_check(
            &expr_map("1/(z-1)"),
            &DomainSpec::Disk { r: 1.0 },
            64,
            50,
            &ctx,
        );
        match r {
            // the exact sample z=1 gives infinity -> premise error; if the
            // samples miss the pole the huge modulus violates the principle
            Err(Error::Premise(_)) | Err(Error::Consistency(_)) => {}
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn minmp_identity_fill_and_containment() {
        let ctx = PrecisionCtx::native();
        let fill =
            minmp_dichotomy(&expr_map("z"), &DomainSpec::Disk { r: 1.0 }, 200, &ctx).unwrap();
        assert_eq!(fill.branch, Branch::Fill, "{fill:?}");
        assert!((fill.m_inf - 1.0).abs() < 1e-6);
        let cont = minmp_dichotomy(
            &expr_map("z"),
            &DomainSpec::DiskComplement { r: 1.0 },
            200,
            &ctx,
        )
        .unwrap();
        assert_eq!(cont.branch, Branch::Containment, "{cont:?}");
        assert!(cont.interior_min >= 1.0 - cont.tol);
    }

    #[test]
    fn minmp_square_plus_one_fills() {
        let ctx = PrecisionCtx::native();
        let r = minmp_dichotomy(&expr_map("z^2+1"), &DomainSpec::Disk { r: 2.0 }, 200, &ctx)
            .unwrap();
        // roots at +-i are inside, so the interior modulus dips to ~0
        assert_eq!(r.branch, Branch::Fill, "{r:?}");
        assert!(r.interior_min < 0.5);
        assert!((r.m_inf - 3.0).abs() < 0.05);
    }

    #[test]
    fn minmp_fill_stable_under_density_increase() {
        let ctx = PrecisionCtx::native();
        let d = DomainSpec::Disk { r: 2.0 };
        let a = minmp_dichotomy(&expr_map("z^2+1"), &d, 150, &ctx).unwrap();
        let b = minmp_dichotomy(&expr_map("z^2+1"), &d, 300, &ctx).unwrap();
        assert_eq!(a.branch, Branch::Fill);
        assert_eq!(b.branch, Branch::Fill);
    }

    #[test]
    fn fta_examples() {
        let ctx = PrecisionCtx::native();
        fta_zero_certificate(&expr_map("z^2+1"), 2.0, &ctx).unwrap();
        fta_zero_certificate(&expr_map("z-5"), 10.0, &ctx).unwrap();
        match fta_zero_certificate(&expr_map("z^2+1"), 0.5, &ctx) {
            Err(Error::Premise(_)) => {}
            other => panic!("expected premise error, got {other:?}"),
        }
    }

    #[test]
    fn fta_random_monic_polynomials() {
        let ctx = PrecisionCtx::native();
        for degree in 1..=6usize {
            let mut rng = ChaCha8Rng::seed_from_u64(degree as u64 * 7 + 1);
            let (poly, coeff_sum) = monic_poly(degree, &mut rng);
            let r = 2.0 * (1.0 + coeff_sum);
            fta_zero_certificate(&poly, r, &ctx)
                .unwrap_or_else(|e| panic!("degree {degree}: {e}"));
        }
    }
}
