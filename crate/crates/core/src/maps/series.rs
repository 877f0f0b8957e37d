//! The alternating power series `f(z) = z^-p - (pi-z)^-p + (pi+z)^-p - ...`
//! on the closed half-strip `0 <= Re z <= pi/2, Im z >= 0`.
//!
//! Partial sums are taken in pairs `(k*pi+z)^-p - ((k+1)*pi-z)^-p`. Two
//! evaluation routes exist:
//!
//! * direct pair summation with the closed-form tail bound
//!   `T(N,p) = 2*pi^-p*(N^-p + N^(1-p)/(p-1))`, and
//! * a Hurwitz-zeta difference `pi^-p*(H(p, z/pi) - H(p, 1 - z/pi))`
//!   accelerated by Euler-Maclaurin, used when the direct route would need
//!   an infeasible number of pairs for the requested accuracy.
//!
//! Both routes report a certified truncation bound plus a modeled rounding
//! budget.

use crate::error::{Error, Result};
use crate::maps::zeta::{hurwitz_sum, C_ROUND};
use crate::real::{Complex, C};

/// Largest pair count the direct route will take on.
pub const DIRECT_PAIR_LIMIT: usize = 20_000;

/// Upper bound for the modulus of the tail `sum_{k>=N} pair_k(z)`, uniform
/// over the closed strip: each pair term has modulus at most `(k*pi)^-p`
/// because `Re z >= 0` and `Re((k+1)*pi - z) >= k*pi + pi/2`.
pub fn haagerup_tail_bound(n_pairs: usize, p: f64) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Parameter(format!("p must be in (1,2), got {p}")));
    }
    if n_pairs == 0 {
        return Err(Error::Parameter("N must be >= 1".into()));
    }
    let n = n_pairs as f64;
    Ok(2.0 * std::f64::consts::PI.powf(-p) * (n.powf(-p) + n.powf(1.0 - p) / (p - 1.0)))
}

/// Smallest `N` with `T(N,p) <= eps`, if within the direct-route limit.
pub fn pairs_needed(p: f64, eps: f64) -> Option<usize> {
    if haagerup_tail_bound(DIRECT_PAIR_LIMIT, p).ok()? > eps {
        return None;
    }
    let (mut lo, mut hi) = (1usize, DIRECT_PAIR_LIMIT);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if haagerup_tail_bound(mid, p).unwrap() <= eps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Sum of the first `n_pairs` pairs, in the written order of the series.
/// The subtrahend arguments are formed as `k*pi + (pi - z)` so that at
/// `z = pi/2` both halves of every pair are identical and cancel exactly.
pub fn haagerup_direct_in<A: Complex>(
    a: &A,
    z: &C<A::Num>,
    p: &A::Num,
    n_pairs: usize,
) -> C<A::Num> {
    let pi = a.pi();
    let neg_p = a.neg(p);
    let w = C::new(a.sub(&pi, &z.re), a.neg(&z.im)); // pi - z
    let mut sum = a.c_zero();
    for k in 0..n_pairs {
        let kpi = a.mul(&a.from_i64(k as i64), &pi);
        let u = C::new(a.add(&kpi, &z.re), z.im.clone());
        let v = C::new(a.add(&kpi, &w.re), w.im.clone());
        let pair = a.csub(&a.cpow_real(&u, &neg_p), &a.cpow_real(&v, &neg_p));
        sum = a.cadd(&sum, &pair);
    }
    sum
}

/// Rounding-model estimate for a direct summation of `n_pairs` pairs.
fn direct_round_estimate<A: Complex>(a: &A, z: &C<A::Num>, p: f64, n_pairs: usize) -> f64 {
    let ulp = 2f64.powi(1 - a.bits().min(1074) as i32);
    let (zr, zi) = a.c_to_f64(z);
    let mut mag = 0.0;
    for k in 0..n_pairs.min(64) {
        // magnitudes decay; summing the first few plus a k^-p tail estimate
        let r = ((k as f64 * std::f64::consts::PI + zr).powi(2) + zi * zi).sqrt();
        if r > 0.0 {
            mag += 2.0 * r.powf(-p) * (1.0 + (p * r.ln()).abs());
        }
    }
    C_ROUND * ulp * mag * (1.0 + (n_pairs as f64).ln())
}

/// Evaluate the series at a finite strip point `z != 0` with certified
/// truncation error at most `target_eps` (plus the reported rounding
/// budget). Returns the value and the total error radius.
pub fn haagerup_eval_in<A: Complex>(
    a: &A,
    z: &C<A::Num>,
    p: &A::Num,
    target_eps: f64,
) -> (C<A::Num>, f64) {
    let p_f = a.to_f64(p);
    if let Some(n) = pairs_needed(p_f, target_eps) {
        let value = haagerup_direct_in(a, z, p, n);
        let err = haagerup_tail_bound(n, p_f).unwrap() + direct_round_estimate(a, z, p_f, n);
        return (value, err);
    }
    // accelerated route: f = pi^-p * (H(p, z/pi) - H(p, 1 - z/pi))
    let pi = a.pi();
    let scale_f = std::f64::consts::PI.powf(-p_f);
    let eps_each = target_eps / (2.0 * scale_f);
    let q1 = C::new(a.div(&z.re, &pi), a.div(&z.im, &pi));
    let one = a.from_i64(1);
    let q2 = C::new(a.sub(&one, &q1.re), a.neg(&q1.im));
    let s1 = hurwitz_sum(a, p, &q1, eps_each);
    let s2 = hurwitz_sum(a, p, &q2, eps_each);
    let diff = a.csub(&s1.value, &s2.value);
    let scale = a.exp(&a.mul(&a.neg(p), &a.ln(&pi)));
    let value = a.cscale(&diff, &scale);
    let ulp = 2f64.powi(1 - a.bits().min(1074) as i32);
    let (vr, vi) = a.c_to_f64(&value);
    let err = scale_f * (s1.trunc + s2.trunc + s1.round + s2.round) + 8.0 * ulp * vr.hypot(vi);
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{Arith, BigArith, F64Arith};
    use std::f64::consts::PI;

    #[test]
    fn tail_bound_matches_summation_oracle() {
        // oracle: 2*sum_{k>=100} (k*pi)^-1.9 summed directly to 10^7 terms,
        // plus an integral remainder for the rest
        let p = 1.9f64;
        let mut s = 0.0;
        for k in (100..10_000_000u64).rev() {
            s += 2.0 * (k as f64 * PI).powf(-p);
        }
        let m = 1e7f64;
        s += 2.0 * PI.powf(-p) * m.powf(1.0 - p) / (p - 1.0);
        let t = haagerup_tail_bound(100, p).unwrap();
        assert!(t >= s, "bound {t} must dominate oracle {s}");
        assert!((t - 4.0e-3).abs() < 0.3e-3, "expected about 4.0e-3, got {t}");
        // and the bound is not wildly loose
        assert!(t < 1.1 * s + 2.0 * (100.0 * PI).powf(-p));
    }

    #[test]
    fn tail_bound_monotone_and_vanishing() {
        let a = haagerup_tail_bound(1, 1.5).unwrap();
        let b = haagerup_tail_bound(2, 1.5).unwrap();
        assert!(a > b);
        assert!(haagerup_tail_bound(1_000_000_000, 1.5).unwrap() < 1e-4);
    }

    #[test]
    fn tail_bound_rejects_bad_p() {
        assert!(haagerup_tail_bound(10, 1.0).is_err());
        assert!(haagerup_tail_bound(10, 2.3).is_err());
    }

    #[test]
    fn tail_bound_dominates_partial_sums() {
        // |sum_{k=N}^{M} pair_k(z)| <= T(N,p) on sampled strip points
        let a = F64Arith;
        let samples = [(0.3, 0.2), (1.0, 1.0), (1.5, 0.001), (0.01, 5.0)];
        for &(x, y) in &samples {
            let z = a.c_from_f64(x, y);
            for &p in &[1.1, 1.5, 1.9] {
                let n = 50;
                for m in [60, 200, 1000] {
                    let lo = haagerup_direct_in(&a, &z, &p, n);
                    let hi = haagerup_direct_in(&a, &z, &p, m);
                    let d = a.csub(&hi, &lo);
                    let t = haagerup_tail_bound(n, p).unwrap();
                    assert!(a.cabs(&d) <= t, "p={p} z=({x},{y}) m={m}");
                }
            }
        }
    }

    #[test]
    fn exact_zero_at_half_pi_any_truncation() {
        let f = F64Arith;
        let z = f.c_from_f64(PI / 2.0, 0.0);
        for n in [1, 2, 7, 100] {
            let s = haagerup_direct_in(&f, &z, &1.7, n);
            assert!(s.re == 0.0 && s.im == 0.0, "n={n}");
        }
        let b = BigArith::new(212);
        let half_pi = b.div(&b.pi(), &b.from_i64(2));
        let z = crate::real::C::new(half_pi, b.from_i64(0));
        let s = haagerup_direct_in(&b, &z, &b.from_f64(1.9), 50);
        assert!(b.is_zero(&s.re) && b.is_zero(&s.im));
    }

    // independent oracle: direct 212-bit summation of many pairs with an
    // Euler-Maclaurin-free integral-test remainder window
    fn oracle_212(x: f64, y: f64, p: f64, n_pairs: usize) -> (f64, f64, f64) {
        let b = BigArith::new(212);
        let z = b.c_from_f64(x, y);
        let s = haagerup_direct_in(&b, &z, &b.from_f64(p), n_pairs);
        let (sr, si) = b.c_to_f64(&s);
        // pair difference bound: p*|pi-2z|*(k*pi)^(-p-1), summed for k>=N
        let n = n_pairs as f64;
        let seg = ((PI - 2.0 * x).powi(2) + (2.0 * y).powi(2)).sqrt();
        let tail = p * seg * PI.powf(-p - 1.0) * (n.powf(-p - 1.0) + n.powf(-p) / p);
        (sr, si, tail)
    }

    #[test]
    fn accelerated_route_matches_direct_oracle() {
        let a = F64Arith;
        for &(x, y, p) in &[(1.0, 1.0, 1.5), (0.5, 0.01, 1.9), (0.0, 2.0, 1.3)] {
            let eps = 1e-12;
            let (v, err) = haagerup_eval_in(&a, &a.c_from_f64(x, y), &p, eps);
            assert!(err <= eps + 1e-10, "err {err}");
            let (or, oi, otail) = oracle_212(x, y, p, 40_000);
            let tol = err + otail + 1e-12;
            assert!((v.re - or).abs() <= tol, "re {} vs {or}, tol {tol}", v.re);
            assert!((v.im - oi).abs() <= tol, "im {} vs {oi}, tol {tol}", v.im);
        }
    }

    #[test]
    fn refinement_under_eps_tightening() {
        let a = F64Arith;
        let z = a.c_from_f64(0.7, 0.4);
        for &p in &[1.1, 1.5, 1.9] {
            let eps = 1e-6;
            let (v1, _) = haagerup_eval_in(&a, &z, &p, eps);
            let (v2, _) = haagerup_eval_in(&a, &z, &p, eps / 10.0);
            let d = a.csub(&v1, &v2);
            assert!(a.cabs(&d) <= eps + eps / 10.0);
        }
    }

    #[test]
    fn large_imaginary_part_is_feasible() {
        let a = F64Arith;
        let (v, err) = haagerup_eval_in(&a, &a.c_from_f64(0.8, 1000.0), &1.1, 1e-9);
        assert!(err <= 1e-9 + 1e-10);
        // magnitude decays like y^(1-p); the value must be small but nonzero
        let m = a.cabs(&v);
        assert!(m > 1e-3 && m < 1.0, "unexpected magnitude {m}");
        assert!(v.im < 0.0);
    }
}
