//! The extended complex plane: points, argument conventions, principal
//! powers and the angular sector used by the series containment checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Arith, BigArith, Complex, F64Arith, C};

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum XPoint {
    Finite { re: f64, im: f64 },
    Infinity,
}

impl XPoint {
    pub fn new(re: f64, im: f64) -> Self {
        assert!(re.is_finite() && im.is_finite(), "finite parts required");
        XPoint::Finite { re, im }
    }

    pub fn zero() -> Self {
        XPoint::Finite { re: 0.0, im: 0.0 }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, XPoint::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XPoint::Finite { re, im } if *re == 0.0 && *im == 0.0)
    }

    /// Finite coordinates, if any.
    pub fn finite(&self) -> Option<(f64, f64)> {
        match self {
            XPoint::Finite { re, im } => Some((*re, *im)),
            XPoint::Infinity => None,
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            XPoint::Finite { re, im } => re.hypot(*im),
            XPoint::Infinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for XPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XPoint::Finite { re, im } => write!(f, "{}{}{}i", re, if *im < 0.0 { "" } else { "+" }, im),
            XPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Working precision for a computation. 53 bits selects the native `f64`
/// backend; anything above runs on arbitrary-precision floats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionCtx {
    pub mantissa_bits: u32,
}

impl PrecisionCtx {
    pub fn new(mantissa_bits: u32) -> Result<Self> {
        if mantissa_bits < 53 {
            return Err(Error::Parameter(format!(
                "mantissa_bits must be >= 53, got {mantissa_bits}"
            )));
        }
        Ok(PrecisionCtx { mantissa_bits })
    }

    pub fn native() -> Self {
        PrecisionCtx { mantissa_bits: 53 }
    }

    pub fn is_native(&self) -> bool {
        self.mantissa_bits <= 53
    }

    /// Unit roundoff of this context.
    pub fn ulp(&self) -> f64 {
        2f64.powi(1 - self.mantissa_bits.min(1074) as i32)
    }

    pub fn big(&self) -> BigArith {
        BigArith::new(self.mantissa_bits)
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        PrecisionCtx::native()
    }
}

/// The half-open angular sector { w : -pi*p/2 < arg w <= 0 } for p in (1,2).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AngleSector {
    p: f64,
}

impl AngleSector {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0 && p < 2.0) {
            return Err(Error::Parameter(format!("p must be in (1,2), got {p}")));
        }
        Ok(AngleSector { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Lower (excluded) boundary angle -pi*p/2.
    pub fn lower_angle(&self) -> f64 {
        -std::f64::consts::PI * self.p / 2.0
    }
}

/// Principal argument in (-pi, pi]; arg(0) = 0 by convention.
pub fn arg_of(w: XPoint) -> Result<f64> {
    match w {
        XPoint::Finite { re, im } => Ok(F64Arith.atan2(&im, &re)),
        XPoint::Infinity => Err(Error::ArgAtInfinity),
    }
}

/// `z^(-p)` by the principal branch; real and positive for real z > 0.
/// Total on the sphere through the limit convention 0 -> inf, inf -> 0.
pub fn principal_power_neg(z: XPoint, p: f64, ctx: &PrecisionCtx) -> XPoint {
    match z {
        XPoint::Infinity => XPoint::zero(),
        XPoint::Finite { re, im } => {
            if re == 0.0 && im == 0.0 {
                return XPoint::Infinity;
            }
            if ctx.is_native() {
                let a = F64Arith;
                let w = a.cpow_real(&C::new(re, im), &(-p));
                XPoint::new(w.re, w.im)
            } else {
                let a = ctx.big();
                let w = a.cpow_real(&a.c_from_f64(re, im), &a.from_f64(-p));
                let (wr, wi) = a.c_to_f64(&w);
                XPoint::new(wr, wi)
            }
        }
    }
}

/// Sector membership; the lower boundary arg = -pi*p/2 is excluded.
pub fn in_sector(w: XPoint, s: &AngleSector) -> Result<bool> {
    let arg = arg_of(w)?;
    Ok(arg <= 0.0 && arg > s.lower_angle())
}

/// Backend-generic sector membership for certified work.
pub fn in_sector_in<A: Arith>(a: &A, w: &C<A::Num>, p: &A::Num) -> bool {
    let arg = a.carg(w);
    let zero = a.from_i64(0);
    if a.gt(&arg, &zero) {
        return false;
    }
    let lower = a.neg(&a.div(&a.mul(&a.pi(), p), &a.from_i64(2)));
    a.gt(&arg, &lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn arg_conventions() {
        assert_eq!(arg_of(XPoint::zero()).unwrap(), 0.0);
        assert_eq!(arg_of(XPoint::new(-1.0, 0.0)).unwrap(), PI);
        assert!((arg_of(XPoint::new(0.0, -1.0)).unwrap() + PI / 2.0).abs() < 1e-15);
        assert_eq!(arg_of(XPoint::new(3.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(
            arg_of(XPoint::Infinity),
            Err(Error::ArgAtInfinity)
        ));
    }

    #[test]
    fn power_examples() {
        let ctx = PrecisionCtx::native();
        // 2^-1 = 0.5
        let w = principal_power_neg(XPoint::new(2.0, 0.0), 1.0, &ctx);
        let (re, im) = w.finite().unwrap();
        assert!((re - 0.5).abs() < 1e-15 && im == 0.0);
        // (-1)^(-1/2) = exp(-i pi/2) = -i
        let w = principal_power_neg(XPoint::new(-1.0, 0.0), 0.5, &ctx);
        let (re, im) = w.finite().unwrap();
        assert!(re.abs() < 1e-15 && (im + 1.0).abs() < 1e-15);
        // i^(-19/10) = exp(-i 0.95 pi), checked against 200-bit evaluation
        let hi = PrecisionCtx::new(200).unwrap();
        let w = principal_power_neg(XPoint::new(0.0, 1.0), 1.9, &hi);
        let (re, im) = w.finite().unwrap();
        assert!((re - -0.987688340595138).abs() < 1e-12);
        assert!((im - -0.156434465040231).abs() < 1e-12);
    }

    #[test]
    fn power_limit_conventions() {
        let ctx = PrecisionCtx::native();
        assert!(principal_power_neg(XPoint::zero(), 1.5, &ctx).is_infinity());
        assert!(principal_power_neg(XPoint::Infinity, 1.5, &ctx).is_zero());
    }

    #[test]
    fn sector_membership() {
        let s = AngleSector::new(1.9).unwrap();
        assert!(in_sector(XPoint::new(1.0, 0.0), &s).unwrap());
        assert!(!in_sector(XPoint::new(0.0, 1.0), &s).unwrap());
        // boundary angle itself is excluded
        let th = -0.95 * PI;
        assert!(!in_sector(XPoint::new(th.cos(), th.sin()), &s).unwrap());
        assert!(in_sector(XPoint::zero(), &s).unwrap(), "arg 0 = 0 is inside");
    }

    #[test]
    fn sector_validation() {
        assert!(AngleSector::new(1.0).is_err());
        assert!(AngleSector::new(2.0).is_err());
        assert!(AngleSector::new(2.5).is_err());
    }

    #[test]
    fn power_modulus_invariant() {
        let ctx = PrecisionCtx::native();
        for &(re, im, p) in &[(1.5, 2.0, 1.1), (-0.3, 0.4, 1.9), (2.0, -1.0, 1.5)] {
            let z = XPoint::new(re, im);
            let w = principal_power_neg(z, p, &ctx);
            let expect = z.abs().powf(-p);
            assert!((w.abs() - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn power_conjugation_off_cut() {
        let ctx = PrecisionCtx::native();
        for &(re, im, p) in &[(1.5, 2.0, 1.3), (0.2, -0.9, 1.9), (3.0, 0.5, 1.5)] {
            let w = principal_power_neg(XPoint::new(re, im), p, &ctx);
            let wc = principal_power_neg(XPoint::new(re, -im), p, &ctx);
            let (a, b) = w.finite().unwrap();
            let (c, d) = wc.finite().unwrap();
            assert!((a - c).abs() < 1e-13 * (1.0 + a.abs()));
            assert!((b + d).abs() < 1e-13 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn precision_refinement() {
        // doubling the mantissa moves the result by at most 2^(1-b) relative
        for &bits in &[64u32, 96, 128] {
            let lo = PrecisionCtx::new(bits).unwrap();
            let hi = PrecisionCtx::new(bits * 2).unwrap();
            let z = XPoint::new(1.25, 0.75);
            let (a, b) = principal_power_neg(z, 1.7, &lo).finite().unwrap();
            let (c, d) = principal_power_neg(z, 1.7, &hi).finite().unwrap();
            let tol = 2f64.powi(1 - bits as i32) * (c.abs() + d.abs() + 1.0) * 4.0;
            assert!((a - c).abs() <= tol && (b - d).abs() <= tol);
        }
    }
}
