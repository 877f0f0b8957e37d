//! Certified verification of the sector-containment claims for the
//! alternating series map: boundary inequalities on the three non-point
//! boundary pieces, interior containment in the angular sector, the
//! real-variable inequality equivalent to it, and two counterexamples
//! showing why partial-sum (termwise) arguments fail.
//!
//! "Certified" always means the strict inequality holds with margin
//! exceeding the full error radius (truncation plus rounding); anything
//! less is reported inconclusive, never silently passed.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::series::haagerup_direct_in;
use crate::maps::eval_haagerup;
use crate::real::{Arith, Complex, C};
use crate::xplane::{in_sector_in, AngleSector, PrecisionCtx, XPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    Inconclusive,
    Violation,
}

/// One sample of a boundary check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaSample {
    pub z: (f64, f64),
    pub f: (f64, f64),
    pub err_radius: f64,
    /// Smallest slack among the inequalities checked at this sample.
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub p: f64,
    pub piece: String,
    pub samples: Vec<GammaSample>,
    pub all_certified: bool,
}

/// Default logarithmic heights, covering `[1e-3, 1e3]`.
pub fn log_samples(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 10f64.powf(-3.0 + 6.0 * (k as f64 + 0.5) / n as f64))
        .collect()
}

/// Default abscissas strictly inside `(0, pi/2)`.
pub fn gamma5_samples(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| FRAC_PI_2 * (0.01 + 0.98 * (k as f64 + 0.5) / n as f64))
        .collect()
}

/// Truncation target scaled to the magnitude of the value, which decays
/// like `y^(1-p)` far up the strip.
fn adaptive_eps(p: f64, y: f64) -> f64 {
    1e-12 * y.max(1.0).powf(1.0 - p)
}

fn eval(z: (f64, f64), p: f64, eps: f64, ctx: &PrecisionCtx) -> Result<((f64, f64), f64)> {
    let r = eval_haagerup(XPoint::new(z.0, z.1), p, eps, ctx)?;
    let (x, y) = r
        .value
        .finite()
        .ok_or_else(|| Error::Precision("unexpected infinite value".into()))?;
    Ok(((x, y), r.err_radius))
}

/// On the right edge `Re z = pi/2, Im z >= 0`: `Re f = 0` and `Im f <= 0`.
pub fn check_gamma4(p: f64, ys: &[f64], ctx: &PrecisionCtx) -> Result<CheckReport> {
    AngleSector::new(p)?;
    let mut samples = Vec::with_capacity(ys.len());
    for &y in ys {
        if y < 0.0 {
            return Err(Error::Domain(format!("Im z must be >= 0, got {y}")));
        }
        let ((fr, fi), err) = eval((FRAC_PI_2, y), p, adaptive_eps(p, y), ctx)?;
        let margin = (err - fr.abs()).min(err - fi);
        let verdict = if fr.abs() <= err && fi <= err {
            Verdict::Certified
        } else {
            Verdict::Violation
        };
        let s = GammaSample {
            z: (FRAC_PI_2, y),
            f: (fr, fi),
            err_radius: err,
            margin,
            verdict,
        };
        if verdict == Verdict::Violation {
            return Err(Error::Violation(format!(
                "right-edge claim fails at Im z = {y}: f = {fr}+{fi}i, err {err}"
            )));
        }
        samples.push(s);
    }
    Ok(CheckReport {
        p,
        piece: "Γ4".into(),
        samples,
        all_certified: true,
    })
}

/// On the bottom edge `t in (0, pi/2)`: `Im f = 0` and `Re f > 0`, plus the
/// termwise comparison `(k*pi+t)^-p > (k*pi+pi-t)^-p` for `k = 0..=10`.
pub fn check_gamma5(p: f64, ts: &[f64], ctx: &PrecisionCtx) -> Result<CheckReport> {
    AngleSector::new(p)?;
    let mut samples = Vec::with_capacity(ts.len());
    let mut all_certified = true;
    for &t in ts {
        if !(t > 0.0 && t < FRAC_PI_2) {
            return Err(Error::Domain(format!("t must be in (0, pi/2), got {t}")));
        }
        for k in 0..=10u32 {
            let k = k as f64;
            if (k * PI + t).powf(-p) <= (k * PI + PI - t).powf(-p) {
                return Err(Error::Violation(format!(
                    "termwise monotonicity fails at k={k}, t={t}"
                )));
            }
        }
        let ((fr, fi), err) = eval((t, 0.0), p, adaptive_eps(p, 0.0), ctx)?;
        let margin = (err - fi.abs()).min(fr - err);
        let verdict = if fi.abs() > err || fr < -err {
            Verdict::Violation
        } else if fr > err {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        };
        if verdict == Verdict::Violation {
            return Err(Error::Violation(format!(
                "bottom-edge claim fails at t = {t}: f = {fr}+{fi}i, err {err}"
            )));
        }
        all_certified &= verdict == Verdict::Certified;
        samples.push(GammaSample {
            z: (t, 0.0),
            f: (fr, fi),
            err_radius: err,
            margin,
            verdict,
        });
    }
    Ok(CheckReport {
        p,
        piece: "Γ5".into(),
        samples,
        all_certified,
    })
}

/// On the left edge `z = iy, y > 0`: `Re f < 0` and
/// `Im f < Re f * tan(-pi*p/2)`, both strict with certified margin.
pub fn check_gamma2(p: f64, ys: &[f64], ctx: &PrecisionCtx) -> Result<CheckReport> {
    AngleSector::new(p)?;
    let tanv = (-PI * p / 2.0).tan();
    debug_assert!(tanv > 0.0, "tan(-pi p/2) > 0 for p in (1,2)");
    let mut samples = Vec::with_capacity(ys.len());
    let mut all_certified = true;
    for &y in ys {
        if y <= 0.0 {
            return Err(Error::Domain(format!("Im z must be > 0, got {y}")));
        }
        let ((fr, fi), err) = eval((0.0, y), p, adaptive_eps(p, y), ctx)?;
        let g = fr * tanv - fi; // must be > 0
        let g_err = err * (tanv + 1.0);
        let margin = (-fr - err).min(g - g_err);
        let verdict = if -fr > err && g > g_err {
            Verdict::Certified
        } else if fr > err || g < -g_err {
            Verdict::Violation
        } else {
            Verdict::Inconclusive
        };
        if verdict == Verdict::Violation {
            return Err(Error::Violation(format!(
                "left-edge claim fails at y = {y}: f = {fr}+{fi}i, err {err}"
            )));
        }
        all_certified &= verdict == Verdict::Certified;
        samples.push(GammaSample {
            z: (0.0, y),
            f: (fr, fi),
            err_radius: err,
            margin,
            verdict,
        });
    }
    Ok(CheckReport {
        p,
        piece: "Γ2".into(),
        samples,
        all_certified,
    })
}

/// One grid point of the interior check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcpPoint {
    pub z: (f64, f64),
    pub f: (f64, f64),
    pub err_radius: f64,
    /// `-Im f` (must exceed the error radius).
    pub im_margin: f64,
    /// Distance from `f` to the boundary of the angular sector.
    pub sector_dist: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcpReport {
    pub p: f64,
    pub grid: (usize, usize),
    pub points: Vec<AcpPoint>,
    pub all_certified: bool,
}

/// Distance from `w` to the ray `{r e^{i theta} : r >= 0}`.
fn ray_dist(wx: f64, wy: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    if wx * c + wy * s <= 0.0 {
        wx.hypot(wy)
    } else {
        (wx * s - wy * c).abs()
    }
}

/// Interior containment: on an `nx` x `ny` grid strictly inside the
/// half-strip (linear in `Re`, logarithmic in `Im` over `[1e-3, 1e3]`),
/// certify `Im f < -err` and that `f` sits inside the sector
/// `-pi*p/2 < arg w <= 0` with distance to its boundary exceeding the
/// error radius. Also spot-checks the termwise mechanism
/// `Im[(k*pi+z)^-p] < 0` for `k = 0..=10`.
pub fn check_interior_acp(
    p: f64,
    nx: usize,
    ny: usize,
    ctx: &PrecisionCtx,
) -> Result<AcpReport> {
    let sector = AngleSector::new(p)?;
    if nx == 0 || ny == 0 {
        return Err(Error::Parameter("grid must be nonempty".into()));
    }
    let lower = sector.lower_angle();
    let mut points = Vec::with_capacity(nx * ny);
    let mut all_certified = true;
    for j in 0..ny {
        let y = 10f64.powf(-3.0 + 6.0 * (j as f64 + 0.5) / ny as f64);
        for i in 0..nx {
            let x = FRAC_PI_2 * (i as f64 + 0.5) / nx as f64;
            let ((fr, fi), err) = eval((x, y), p, adaptive_eps(p, y), ctx)?;
            let arg = fi.atan2(fr);
            let dist = ray_dist(fr, fi, 0.0).min(ray_dist(fr, fi, lower));
            let inside = arg < 0.0 && arg > lower;
            let verdict = if inside && -fi > err && dist > err {
                Verdict::Certified
            } else if !inside && dist > err {
                Verdict::Violation
            } else {
                Verdict::Inconclusive
            };
            if verdict == Verdict::Violation {
                return Err(Error::Violation(format!(
                    "interior containment fails at z = {x}+{y}i: f = {fr}+{fi}i \
                     lies outside the sector by {dist} > err {err}"
                )));
            }
            all_certified &= verdict == Verdict::Certified;
            if (i + j) % 7 == 0 {
                // termwise mechanism spot check
                for k in 0..=10i64 {
                    let u = C::new(k as f64 * PI + x, y);
                    let w = crate::real::F64Arith.cpow_real(&u, &(-p));
                    if w.im >= 0.0 {
                        return Err(Error::Violation(format!(
                            "termwise interior mechanism fails at k={k}, z={x}+{y}i"
                        )));
                    }
                }
            }
            points.push(AcpPoint {
                z: (x, y),
                f: (fr, fi),
                err_radius: err,
                im_margin: -fi,
                sector_dist: dist,
                verdict,
            });
        }
    }
    Ok(AcpReport {
        p,
        grid: (nx, ny),
        points,
        all_certified,
    })
}

/// Result of the literal real-variable form of the interior inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarResult {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub eps: f64,
    pub n_terms: usize,
    /// True when `margin > 2 * eps`; false means inconclusive, not refuted.
    pub certified: bool,
}

/// Per-series truncation tail `pi^-p * (N^-p + N^(1-p)/(p-1))`.
fn star_tail(n: usize, p: f64) -> f64 {
    let n = n as f64;
    PI.powf(-p) * (n.powf(-p) + n.powf(1.0 - p) / (p - 1.0))
}

const STAR_TERM_CAP: usize = 20_000_000;

/// Compare the two real series
///
/// `sum_k sin(p*arccot(y/(pi k+x))) / ((pi k+x)^2+y^2)^(p/2)` and
/// `sum_k sin(p*arccot(-y/(pi k+pi-x))) / ((pi k+pi-x)^2+y^2)^(p/2)`,
///
/// with `arccot` valued in `(0, pi)` (so `arccot(u) = pi/2 - atan(u)`).
/// Both are truncated with tail bound at most `eps`; the inequality is
/// certified strict when `lhs - rhs > 2*eps`.
pub fn inequality_star(p: f64, x: f64, y: f64, eps: f64) -> Result<StarResult> {
    AngleSector::new(p)?;
    if !(x > 0.0 && x < FRAC_PI_2 && y > 0.0) {
        return Err(Error::Domain(format!(
            "need x in (0, pi/2) and y > 0, got x={x}, y={y}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::Parameter("eps must be positive".into()));
    }
    if star_tail(STAR_TERM_CAP, p) > eps {
        return Err(Error::Parameter(format!(
            "eps = {eps} needs more than {STAR_TERM_CAP} terms of the \
             literal series; use a larger eps"
        )));
    }
    let (mut lo, mut hi) = (1usize, STAR_TERM_CAP);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if star_tail(mid, p) <= eps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let n = lo;
    let term = |base: f64, yy: f64| -> f64 {
        let phi = FRAC_PI_2 - (yy / base).atan(); // arccot in (0, pi)
        (p * phi).sin() * (base * base + y * y).powf(-p / 2.0)
    };
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for k in (0..n).rev() {
        let kpi = k as f64 * PI;
        lhs += term(kpi + x, y);
        rhs += term(kpi + PI - x, -y);
    }
    let margin = lhs - rhs;
    Ok(StarResult {
        lhs,
        rhs,
        margin,
        eps,
        n_terms: n,
        certified: margin > 2.0 * eps,
    })
}

/// A computed counterexample value with its sector diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResult {
    pub z: (f64, f64),
    pub p: f64,
    pub value: (f64, f64),
    pub arg: f64,
    /// `arg / (-pi*p/2) - 1`: positive iff the argument overshoots the
    /// lower sector boundary.
    pub excess: f64,
    pub mantissa_bits: u32,
    pub in_sector: bool,
}

/// The sum of the first 100 pair differences at `z = 1e-30 + 1e-6 i`,
/// `p = 19/10`, computed in high precision. Its argument overshoots the
/// sector boundary by a relative excess of at least `3.5e-18`, so the
/// partial sum is outside the sector even though the full series is not.
pub fn counterexample_sum100(ctx: &PrecisionCtx) -> Result<CounterexampleResult> {
    if ctx.mantissa_bits < 212 {
        return Err(Error::Precision(format!(
            "refusing to run with {} mantissa bits: the decision margin is \
             ~1e-18 relative against terms of size ~1e11, which needs at \
             least 212 bits",
            ctx.mantissa_bits
        )));
    }
    let a = ctx.big();
    let z = C::new(a.parse_dec("1e-30"), a.parse_dec("1e-6"));
    let p = a.div(&a.from_i64(19), &a.from_i64(10));
    let s = haagerup_direct_in(&a, &z, &p, 100);
    let arg = a.carg(&s);
    let lower = a.neg(&a.div(&a.mul(&a.pi(), &p), &a.from_i64(2)));
    let one = a.from_i64(1);
    let excess = a.to_f64(&a.sub(&a.div(&arg, &lower), &one));
    let in_sector = in_sector_in(&a, &s, &p);
    let (vr, vi) = a.c_to_f64(&s);
    let result = CounterexampleResult {
        z: (1e-30, 1e-6),
        p: 1.9,
        value: (vr, vi),
        arg: a.to_f64(&arg),
        excess,
        mantissa_bits: ctx.mantissa_bits,
        in_sector,
    };
    if excess < 3.5e-18 || in_sector {
        return Err(Error::Consistency(format!(
            "expected the 100-pair sum to overshoot the sector boundary by \
             at least 3.5e-18 relative; got excess {excess}"
        )));
    }
    Ok(result)
}

/// Already the single pair `-(pi-z)^-p + (pi+z)^-p` leaves the sector at
/// `z = pi/4 + 1e-2 i`, `p = 19/10`. Double precision suffices here.
pub fn counterexample_pairterm(ctx: &PrecisionCtx) -> Result<CounterexampleResult> {
    let p = 1.9;
    let (zr, zi) = (FRAC_PI_2 / 2.0, 1e-2);
    let (w, arg) = if ctx.is_native() {
        let a = crate::real::F64Arith;
        let w = a.csub(
            &a.cpow_real(&C::new(PI + zr, zi), &(-p)),
            &a.cpow_real(&C::new(PI - zr, -zi), &(-p)),
        );
        ((w.re, w.im), w.im.atan2(w.re))
    } else {
        let a = ctx.big();
        let pb = a.from_f64(p);
        let w = a.csub(
            &a.cpow_real(&a.c_from_f64(PI + zr, zi), &a.neg(&pb)),
            &a.cpow_real(&a.c_from_f64(PI - zr, -zi), &a.neg(&pb)),
        );
        let arg = a.to_f64(&a.carg(&w));
        (a.c_to_f64(&w), arg)
    };
    let lower = -PI * p / 2.0;
    let in_sector = arg <= 0.0 && arg > lower;
    let result = CounterexampleResult {
        z: (zr, zi),
        p,
        value: w,
        arg,
        excess: arg / lower - 1.0,
        mantissa_bits: ctx.mantissa_bits,
        in_sector,
    };
    if in_sector {
        return Err(Error::Consistency(format!(
            "expected the single pair term to be outside the sector; got \
             arg {arg} inside"
        )));
    }
    Ok(result)
}

/// The naive claim would need every term `-(k*pi+pi-z)^-p` to stay in the
/// sector; near the real axis their arguments are close to `-pi`, far
/// outside `[-pi*p/2, 0]`. Verifies this for the `k = 0` term at each
/// sample.
pub fn refute_naive_claim(p: f64, zs: &[(f64, f64)], ctx: &PrecisionCtx) -> Result<Vec<f64>> {
    AngleSector::new(p)?;
    let _ = ctx;
    let lower = -PI * p / 2.0;
    let a = crate::real::F64Arith;
    let mut args = Vec::with_capacity(zs.len());
    for &(x, y) in zs {
        if !(x > 0.0 && x < FRAC_PI_2 && y > 0.0) {
            return Err(Error::Domain(format!("sample {x}+{y}i not inside the strip")));
        }
        let w = a.cneg(&a.cpow_real(&C::new(PI - x, -y), &(-p)));
        let arg = a.carg(&w);
        if (lower..=0.0).contains(&arg) {
            return Err(Error::Consistency(format!(
                "term argument {arg} unexpectedly inside [{lower}, 0] at {x}+{y}i"
            )));
        }
        args.push(arg);
    }
    Ok(args)
}
