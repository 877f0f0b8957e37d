//! The map catalog: two closed-form rational examples, the slowly
//! converging power series, and user-supplied rational expressions.

pub mod expr;
pub mod series;
pub mod zeta;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Arith, Complex};
use crate::xplane::{PrecisionCtx, XPoint};

pub use expr::{parse_expr, print_expr, Expr};
pub use series::{haagerup_tail_bound, pairs_needed};

/// A map from the catalog, paired with its evaluation parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    /// `z + 1/z` on the sphere punctured at 0 and infinity.
    Joukowski,
    /// `2z / (z^2 - 1)` on the closed first quadrant.
    QuadrantRational,
    /// The alternating series `z^-p - (pi-z)^-p + ...` on the half-strip.
    HaagerupSeries { p: f64, target_eps: f64 },
    /// A parsed rational expression in `z`.
    RationalExpr(Expr),
}

/// A computed value together with a radius certifying where the true value
/// lies. Infinite results carry radius 0 (they are exact limit conventions
/// or genuine poles).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: XPoint,
    pub err_radius: f64,
}

impl EvalResult {
    pub fn exact(value: XPoint) -> Self {
        EvalResult {
            value,
            err_radius: 0.0,
        }
    }
}

/// `z + 1/z`; 0 and infinity both map to infinity.
pub fn eval_joukowski(z: XPoint) -> EvalResult {
    match z.finite() {
        None => EvalResult::exact(XPoint::Infinity),
        Some((re, im)) if re == 0.0 && im == 0.0 => EvalResult::exact(XPoint::Infinity),
        Some((re, im)) => {
            let d = re * re + im * im;
            let (wr, wi) = (re + re / d, im - im / d);
            if !(wr.is_finite() && wi.is_finite()) {
                return EvalResult::exact(XPoint::Infinity);
            }
            EvalResult {
                value: XPoint::new(wr, wi),
                err_radius: 8.0 * f64::EPSILON * (wr.hypot(wi) + 1.0),
            }
        }
    }
}

/// `2z / (z^2 - 1)` on the closed first quadrant (including infinity);
/// the pole z = 1 maps to infinity, infinity maps to 0.
pub fn eval_quadrant_rational(z: XPoint) -> Result<EvalResult> {
    let (re, im) = match z.finite() {
        None => return Ok(EvalResult::exact(XPoint::zero())),
        Some(c) => c,
    };
    if re < 0.0 || im < 0.0 {
        return Err(Error::Domain(format!(
            "{z} is outside the closed first quadrant"
        )));
    }
    if re == 1.0 && im == 0.0 {
        return Ok(EvalResult::exact(XPoint::Infinity));
    }
    // denominator z^2 - 1
    let (dr, di) = (re * re - im * im - 1.0, 2.0 * re * im);
    let d2 = dr * dr + di * di;
    let (nr, ni) = (2.0 * re, 2.0 * im);
    let (wr, wi) = ((nr * dr + ni * di) / d2, (ni * dr - nr * di) / d2);
    if !(wr.is_finite() && wi.is_finite()) {
        return Ok(EvalResult::exact(XPoint::Infinity));
    }
    let m = wr.hypot(wi);
    // conditioning degrades near the pole; scale by |num|,|den| sensitivity
    let cond = 1.0 + (nr.hypot(ni) + m * (2.0 * (re * re + im * im) + 1.0)) / d2.sqrt();
    Ok(EvalResult {
        value: XPoint::new(wr, wi),
        err_radius: 8.0 * f64::EPSILON * cond,
    })
}

/// Series evaluation on the closed half-strip `0 <= Re z <= pi/2, Im z >= 0`
/// with certified truncation error at most `target_eps`. Limit conventions:
/// `0 -> infinity`, `infinity -> 0`.
pub fn eval_haagerup(z: XPoint, p: f64, target_eps: f64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Parameter(format!("p must be in (1,2), got {p}")));
    }
    if !(target_eps > 0.0 && target_eps.is_finite()) {
        return Err(Error::Parameter(format!(
            "target_eps must be positive, got {target_eps}"
        )));
    }
    let (re, im) = match z.finite() {
        None => return Ok(EvalResult::exact(XPoint::zero())),
        Some(c) => c,
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(0.0..=half_pi).contains(&re) || im < 0.0 {
        return Err(Error::Domain(format!(
            "{z} is outside the closed half-strip 0 <= Re z <= pi/2, Im z >= 0"
        )));
    }
    if re == 0.0 && im == 0.0 {
        return Ok(EvalResult::exact(XPoint::Infinity));
    }
    if ctx.is_native() {
        let a = crate::real::F64Arith;
        let (v, err) = series::haagerup_eval_in(&a, &a.c_from_f64(re, im), &p, target_eps);
        Ok(EvalResult {
            value: XPoint::new(v.re, v.im),
            err_radius: err,
        })
    } else {
        let a = ctx.big();
        let (v, err) =
            series::haagerup_eval_in(&a, &a.c_from_f64(re, im), &a.from_f64(p), target_eps);
        let (vr, vi) = a.c_to_f64(&v);
        // folding back to f64 costs at most half an ulp of each coordinate
        Ok(EvalResult {
            value: XPoint::new(vr, vi),
            err_radius: err + f64::EPSILON * vr.hypot(vi),
        })
    }
}

/// Evaluate any catalog map at a point of its domain.
pub fn eval_map(spec: &MapSpec, z: XPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    match spec {
        MapSpec::Joukowski => Ok(eval_joukowski(z)),
        MapSpec::QuadrantRational => eval_quadrant_rational(z),
        MapSpec::HaagerupSeries { p, target_eps } => eval_haagerup(z, *p, *target_eps, ctx),
        MapSpec::RationalExpr(e) => {
            let (value, err_radius) = expr::eval_expr_xpoint(e, z)?;
            Ok(EvalResult { value, err_radius })
        }
    }
}
