//! Scalar arithmetic backends.
//!
//! All numeric code is written once against the [`Arith`] trait and runs
//! either on native `f64` or on arbitrary-precision floats, selected by the
//! precision context. Values are immutable; a backend handle is cheap to
//! clone.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::rc::Rc;

use astro_float::{BigFloat, Consts, RoundingMode};

const RM: RoundingMode = RoundingMode::ToEven;

pub trait Arith: Clone {
    type Num: Clone + std::fmt::Debug;

    fn bits(&self) -> u32;
    fn from_f64(&self, x: f64) -> Self::Num;
    fn from_i64(&self, x: i64) -> Self::Num;
    fn to_f64(&self, x: &Self::Num) -> f64;
    /// Parse a decimal literal at full context precision.
    fn parse_dec(&self, s: &str) -> Self::Num;

    fn add(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn sub(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn mul(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn div(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn neg(&self, a: &Self::Num) -> Self::Num;
    fn abs(&self, a: &Self::Num) -> Self::Num;

    fn sqrt(&self, a: &Self::Num) -> Self::Num;
    fn ln(&self, a: &Self::Num) -> Self::Num;
    fn exp(&self, a: &Self::Num) -> Self::Num;
    fn sin(&self, a: &Self::Num) -> Self::Num;
    fn cos(&self, a: &Self::Num) -> Self::Num;
    fn tan(&self, a: &Self::Num) -> Self::Num;
    fn atan(&self, a: &Self::Num) -> Self::Num;

    fn pi(&self) -> Self::Num;
    fn cmp(&self, a: &Self::Num, b: &Self::Num) -> Ordering;
    fn is_zero(&self, a: &Self::Num) -> bool;

    fn lt(&self, a: &Self::Num, b: &Self::Num) -> bool {
        self.cmp(a, b) == Ordering::Less
    }
    fn gt(&self, a: &Self::Num, b: &Self::Num) -> bool {
        self.cmp(a, b) == Ordering::Greater
    }
    fn le(&self, a: &Self::Num, b: &Self::Num) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    fn is_negative(&self, a: &Self::Num) -> bool {
        self.cmp(a, &self.from_i64(0)) == Ordering::Less
    }

    /// Four-quadrant arctangent with the convention `atan2(0, x) = 0` for
    /// `x >= 0` and `= pi` for `x < 0` (no signed zeros).
    fn atan2(&self, y: &Self::Num, x: &Self::Num) -> Self::Num {
        let zero = self.from_i64(0);
        if self.is_zero(y) {
            return if self.lt(x, &zero) { self.pi() } else { zero };
        }
        if self.is_zero(x) {
            let half_pi = self.div(&self.pi(), &self.from_i64(2));
            return if self.gt(y, &zero) {
                half_pi
            } else {
                self.neg(&half_pi)
            };
        }
        let r = self.atan(&self.div(y, x));
        if self.gt(x, &zero) {
            r
        } else if self.gt(y, &zero) {
            self.add(&r, &self.pi())
        } else {
            self.sub(&r, &self.pi())
        }
    }
}

/// Native double-precision backend.
#[derive(Clone, Copy, Debug, Default)]
pub struct F64Arith;

impl Arith for F64Arith {
    type Num = f64;

    fn bits(&self) -> u32 {
        53
    }
    fn from_f64(&self, x: f64) -> f64 {
        x
    }
    fn from_i64(&self, x: i64) -> f64 {
        x as f64
    }
    fn to_f64(&self, x: &f64) -> f64 {
        *x
    }
    fn parse_dec(&self, s: &str) -> f64 {
        s.parse().unwrap_or(f64::NAN)
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn div(&self, a: &f64, b: &f64) -> f64 {
        a / b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn abs(&self, a: &f64) -> f64 {
        a.abs()
    }

    fn sqrt(&self, a: &f64) -> f64 {
        a.sqrt()
    }
    fn ln(&self, a: &f64) -> f64 {
        a.ln()
    }
    fn exp(&self, a: &f64) -> f64 {
        a.exp()
    }
    fn sin(&self, a: &f64) -> f64 {
        a.sin()
    }
    fn cos(&self, a: &f64) -> f64 {
        a.cos()
    }
    fn tan(&self, a: &f64) -> f64 {
        a.tan()
    }
    fn atan(&self, a: &f64) -> f64 {
        a.atan()
    }

    fn pi(&self) -> f64 {
        std::f64::consts::PI
    }
    fn cmp(&self, a: &f64, b: &f64) -> Ordering {
        a.partial_cmp(b).expect("NaN in comparison")
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }

    fn atan2(&self, y: &f64, x: &f64) -> f64 {
        if *y == 0.0 {
            // canonicalize: no negative-zero branch, arg(positive) = 0
            return if *x < 0.0 { std::f64::consts::PI } else { 0.0 };
        }
        y.atan2(*x)
    }
}

/// Arbitrary-precision backend over `astro-float`.
#[derive(Clone)]
pub struct BigArith {
    prec: usize,
    cc: Rc<RefCell<Consts>>,
}

impl std::fmt::Debug for BigArith {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BigArith({} bits)", self.prec)
    }
}

impl BigArith {
    pub fn new(bits: u32) -> Self {
        BigArith {
            prec: bits as usize,
            cc: Rc::new(RefCell::new(
                Consts::new().expect("constants cache allocation"),
            )),
        }
    }
}

impl Arith for BigArith {
    type Num = BigFloat;

    fn bits(&self) -> u32 {
        self.prec as u32
    }
    fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }
    fn from_i64(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.prec)
    }
    fn to_f64(&self, x: &BigFloat) -> f64 {
        use astro_float::WORD_BIT_SIZE;
        if x.is_zero() {
            return 0.0;
        }
        if x.is_inf_pos() {
            return f64::INFINITY;
        }
        if x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _n, sign, e, _)) = x.as_raw_parts() else {
            return f64::NAN;
        };
        // value = 0.mantissa * 2^e, mantissa packed little-endian
        let nw = words.len();
        let hi = words[nw - 1] as u128;
        let lo = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
        let m = ((hi << WORD_BIT_SIZE) | lo) as f64;
        let scale = e as i64 - 2 * WORD_BIT_SIZE as i64;
        let mag = m * 2f64.powi(scale.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
        if sign == astro_float::Sign::Neg {
            -mag
        } else {
            mag
        }
    }
    fn parse_dec(&self, s: &str) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        BigFloat::parse(s, astro_float::Radix::Dec, self.prec, RM, &mut cc)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }
    fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }
    fn abs(&self, a: &BigFloat) -> BigFloat {
        let mut v = a.clone();
        v.set_sign(astro_float::Sign::Pos);
        v
    }

    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, RM)
    }
    fn ln(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.ln(self.prec, RM, &mut cc)
    }
    fn exp(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.exp(self.prec, RM, &mut cc)
    }
    fn sin(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.sin(self.prec, RM, &mut cc)
    }
    fn cos(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.cos(self.prec, RM, &mut cc)
    }
    fn tan(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.tan(self.prec, RM, &mut cc)
    }
    fn atan(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        a.atan(self.prec, RM, &mut cc)
    }

    fn pi(&self) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        cc.pi(self.prec, RM)
    }
    fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("NaN in comparison"),
        }
    }
    fn is_zero(&self, a: &BigFloat) -> bool {
        a.is_zero()
    }
}

/// Complex value over a backend scalar.
#[derive(Clone, Debug)]
pub struct C<N> {
    pub re: N,
    pub im: N,
}

impl<N> C<N> {
    pub fn new(re: N, im: N) -> Self {
        C { re, im }
    }
}

/// Complex operations, provided for every backend.
pub trait Complex: Arith {
    fn c_from_f64(&self, re: f64, im: f64) -> C<Self::Num> {
        C::new(self.from_f64(re), self.from_f64(im))
    }
    fn c_zero(&self) -> C<Self::Num> {
        C::new(self.from_i64(0), self.from_i64(0))
    }
    fn c_to_f64(&self, z: &C<Self::Num>) -> (f64, f64) {
        (self.to_f64(&z.re), self.to_f64(&z.im))
    }
    fn cadd(&self, a: &C<Self::Num>, b: &C<Self::Num>) -> C<Self::Num> {
        C::new(self.add(&a.re, &b.re), self.add(&a.im, &b.im))
    }
    fn csub(&self, a: &C<Self::Num>, b: &C<Self::Num>) -> C<Self::Num> {
        C::new(self.sub(&a.re, &b.re), self.sub(&a.im, &b.im))
    }
    fn cneg(&self, a: &C<Self::Num>) -> C<Self::Num> {
        C::new(self.neg(&a.re), self.neg(&a.im))
    }
    fn cconj(&self, a: &C<Self::Num>) -> C<Self::Num> {
        C::new(a.re.clone(), self.neg(&a.im))
    }
    fn cmul(&self, a: &C<Self::Num>, b: &C<Self::Num>) -> C<Self::Num> {
        C::new(
            self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        )
    }
    fn cscale(&self, a: &C<Self::Num>, s: &Self::Num) -> C<Self::Num> {
        C::new(self.mul(&a.re, s), self.mul(&a.im, s))
    }
    fn cdiv(&self, a: &C<Self::Num>, b: &C<Self::Num>) -> C<Self::Num> {
        let d = self.cabs2(b);
        let n = self.cmul(a, &self.cconj(b));
        C::new(self.div(&n.re, &d), self.div(&n.im, &d))
    }
    fn cabs2(&self, a: &C<Self::Num>) -> Self::Num {
        self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im))
    }
    fn cabs(&self, a: &C<Self::Num>) -> Self::Num {
        self.sqrt(&self.cabs2(a))
    }
    /// Principal argument in (-pi, pi]; arg(0) = 0 and arg(-x) = +pi for x > 0.
    fn carg(&self, a: &C<Self::Num>) -> Self::Num {
        self.atan2(&a.im, &a.re)
    }
    /// Principal branch of `z^e` for real exponent `e`; caller excludes z = 0.
    fn cpow_real(&self, z: &C<Self::Num>, e: &Self::Num) -> C<Self::Num> {
        let two = self.from_i64(2);
        let ln_r = self.div(&self.ln(&self.cabs2(z)), &two);
        let theta = self.carg(z);
        let mag = self.exp(&self.mul(e, &ln_r));
        let phi = self.mul(e, &theta);
        C::new(
            self.mul(&mag, &self.cos(&phi)),
            self.mul(&mag, &self.sin(&phi)),
        )
    }
}

impl<T: Arith> Complex for T {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_roundtrip_f64() {
        let a = BigArith::new(128);
        for &x in &[0.0, 1.0, -2.5, 1e-30, 3.141592653589793, -1e18] {
            let b = a.from_f64(x);
            assert_eq!(a.to_f64(&b), x, "roundtrip {x}");
        }
    }

    #[test]
    fn big_pi_matches_f64() {
        let a = BigArith::new(212);
        assert!((a.to_f64(&a.pi()) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn atan2_conventions_match() {
        let f = F64Arith;
        let b = BigArith::new(106);
        let cases = [
            (0.0, 1.0),
            (0.0, -1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (-1.0, 0.0),
            (1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
        ];
        for &(y, x) in &cases {
            let vf = f.atan2(&y, &x);
            let vb = b.to_f64(&b.atan2(&b.from_f64(y), &b.from_f64(x)));
            assert!((vf - vb).abs() < 1e-14, "atan2({y},{x}): {vf} vs {vb}");
        }
    }

    #[test]
    fn cpow_real_agrees_across_backends() {
        let f = F64Arith;
        let b = BigArith::new(212);
        let e = -1.9;
        for &(re, im) in &[(2.0, 0.0), (0.0, 1.0), (1.5, -0.5), (-1.0, 0.25)] {
            let zf = f.c_from_f64(re, im);
            let zb = b.c_from_f64(re, im);
            let wf = f.cpow_real(&zf, &e);
            let wb = b.cpow_real(&zb, &b.from_f64(e));
            let (wr, wi) = b.c_to_f64(&wb);
            assert!((wf.re - wr).abs() < 1e-12 * (1.0 + wr.abs()));
            assert!((wf.im - wi).abs() < 1e-12 * (1.0 + wi.abs()));
        }
    }
}
