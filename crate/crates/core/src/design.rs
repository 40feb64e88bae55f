//! Parameter records for quasisymmetric 2-designs.
//!
//! A quasisymmetric 2-(v,k,λ) design has blocks of size k on v points,
//! every pair of points in λ blocks, and two distinct blocks meeting in
//! either `x` or `y` points. Here the larger intersection number is always
//! stored as `x`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{qu, to_u64, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("block size must satisfy 1 < k < v (got v={v}, k={k})")]
    BlockSize { v: u64, k: u64 },
    #[error("lambda must be at least 1")]
    ZeroLambda,
    #[error("intersection numbers must be distinct (x = y = {0})")]
    EqualIntersections(u64),
    #[error("intersection numbers must be below the block size (k={k}, x={x})")]
    IntersectionTooLarge { k: u64, x: u64 },
    #[error("derived r or b is not an integer")]
    NonIntegral,
    #[error("complement is not a design: {0}")]
    ComplementNotDesign(String),
    #[error("q must be a power of two with q >= 2 (got {0})")]
    NotPowerOfTwo(u64),
    #[error("ARD requires n >= 2 (got {0})")]
    ArdOrder(u64),
    #[error("parameters are not quasisymmetric: {0}")]
    NotQuasisymmetric(String),
    #[error("parameter arithmetic overflowed")]
    Overflow,
}

/// A candidate parameter set `(v, k, λ, x, y)` with `1 < k < v`,
/// `k > x > y >= 0` and `λ >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QsdParams {
    v: u64,
    k: u64,
    lambda: u64,
    x: u64,
    y: u64,
}

impl QsdParams {
    /// Validates and normalizes. Intersection numbers given in either order
    /// are stored with `x > y`.
    pub fn new(v: u64, k: u64, lambda: u64, x: u64, y: u64) -> Result<Self, DesignError> {
        if k <= 1 || k >= v {
            return Err(DesignError::BlockSize { v, k });
        }
        if lambda == 0 {
            return Err(DesignError::ZeroLambda);
        }
        if x == y {
            return Err(DesignError::EqualIntersections(x));
        }
        let (x, y) = if x > y { (x, y) } else { (y, x) };
        if x >= k {
            return Err(DesignError::IntersectionTooLarge { k, x });
        }
        Ok(QsdParams { v, k, lambda, x, y })
    }

    pub fn v(&self) -> u64 {
        self.v
    }
    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn lambda(&self) -> u64 {
        self.lambda
    }
    pub fn x(&self) -> u64 {
        self.x
    }
    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn tuple(&self) -> (u64, u64, u64, u64, u64) {
        (self.v, self.k, self.lambda, self.x, self.y)
    }
}

impl std::fmt::Display for QsdParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},x={},y={})",
            self.v, self.k, self.lambda, self.x, self.y
        )
    }
}

/// Replication number `r` and block count `b`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedParams {
    pub r: Q,
    pub b: Q,
    pub integral: bool,
}

impl DerivedParams {
    pub fn r_u64(&self) -> Option<u64> {
        to_u64(&self.r)
    }
    pub fn b_u64(&self) -> Option<u64> {
        to_u64(&self.b)
    }
}

/// `r = λ(v-1)/(k-1)` and `b = vr/k`.
pub fn derive_params(p: &QsdParams) -> DerivedParams {
    let r = qu(p.lambda) * qu(p.v - 1) / qu(p.k - 1);
    let b = qu(p.v) * &r / qu(p.k);
    let integral = r.is_integer() && b.is_integer();
    DerivedParams { r, b, integral }
}

/// All seven parameters as exact rationals. The evaluation point for the
/// eigenvalue and inequality formulas, which are also evaluated at
/// non-integral points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParams {
    pub v: Q,
    pub k: Q,
    pub lambda: Q,
    pub x: Q,
    pub y: Q,
    pub r: Q,
    pub b: Q,
}

impl RationalParams {
    pub fn new(p: &QsdParams, d: &DerivedParams) -> Self {
        RationalParams {
            v: qu(p.v),
            k: qu(p.k),
            lambda: qu(p.lambda),
            x: qu(p.x),
            y: qu(p.y),
            r: d.r.clone(),
            b: d.b.clone(),
        }
    }
}

/// Parameters of the complementary design `{X \ B}`.
///
/// Requires integral `r` and `b`; fails when the complement intersection
/// number `v - 2k + y` would be negative or `λ' = b - 2r + λ` is not
/// positive.
pub fn complement(
    p: &QsdParams,
    d: &DerivedParams,
) -> Result<(QsdParams, DerivedParams), DesignError> {
    let (Some(r), Some(b)) = (d.r_u64(), d.b_u64()) else {
        return Err(DesignError::NonIntegral);
    };
    let (v, k, lambda, x, y) = (
        p.v as i128,
        p.k as i128,
        p.lambda as i128,
        p.x as i128,
        p.y as i128,
    );
    let shift = v - 2 * k;
    if shift + y < 0 {
        return Err(DesignError::ComplementNotDesign(format!(
            "complement intersection number v-2k+y = {} is negative",
            shift + y
        )));
    }
    let lambda_c = b as i128 - 2 * r as i128 + lambda;
    if lambda_c <= 0 {
        return Err(DesignError::ComplementNotDesign(format!(
            "complement lambda b-2r+lambda = {lambda_c} is not positive"
        )));
    }
    let pc = QsdParams::new(
        p.v,
        p.v - p.k,
        lambda_c as u64,
        (shift + x) as u64,
        (shift + y) as u64,
    )?;
    let dc = derive_params(&pc);
    Ok((pc, dc))
}

/// Blokhuis–Haemers family: `v = q³`, `k = q²(q-1)/2`,
/// `λ = q(q³-q²-2)/4`, `x = k/2`, `y = x - q²/4` for `q` a power of two.
pub fn bh_family(q: u64) -> Result<QsdParams, DesignError> {
    if q < 2 || !q.is_power_of_two() {
        return Err(DesignError::NotPowerOfTwo(q));
    }
    let q2 = q.checked_mul(q).ok_or(DesignError::Overflow)?;
    let q3 = q2.checked_mul(q).ok_or(DesignError::Overflow)?;
    let k = q2.checked_mul(q - 1).ok_or(DesignError::Overflow)? / 2;
    let lambda = q.checked_mul(q3 - q2 - 2).ok_or(DesignError::Overflow)? / 4;
    let x = k / 2;
    let y = x - q2 / 4;
    QsdParams::new(q3, k, lambda, x, y)
}

/// Order `n` and index `t` of an affine resolvable design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArdParams {
    pub n: u64,
    pub t: u64,
}

/// Design parameters of an ARD(n,t): `v = n²((n-1)t+1)`, `k = v/n`,
/// `λ = nt+1`, `x = (n-1)t+1`, `y = 0`.
pub fn ard_params(a: ArdParams) -> Result<QsdParams, DesignError> {
    let ArdParams { n, t } = a;
    if n < 2 {
        return Err(DesignError::ArdOrder(n));
    }
    let x = (n - 1)
        .checked_mul(t)
        .and_then(|m| m.checked_add(1))
        .ok_or(DesignError::Overflow)?;
    let k = n.checked_mul(x).ok_or(DesignError::Overflow)?;
    let v = n.checked_mul(k).ok_or(DesignError::Overflow)?;
    let lambda = n
        .checked_mul(t)
        .and_then(|m| m.checked_add(1))
        .ok_or(DesignError::Overflow)?;
    if x == 0 {
        return Err(DesignError::NotQuasisymmetric(
            "cross-class intersection equals the parallel-class intersection".into(),
        ));
    }
    QsdParams::new(v, k, lambda, x, 0)
}

/// Recognizes the ARD parameter shape. Says nothing about whether a
/// resolution actually exists.
pub fn detect_ard(p: &QsdParams) -> Option<ArdParams> {
    if p.y != 0 || !p.v.is_multiple_of(p.k) {
        return None;
    }
    let n = p.v / p.k;
    if n < 2 {
        return None;
    }
    let kk = (p.k as u128) * (p.k as u128);
    if !kk.is_multiple_of(p.v as u128) || kk / p.v as u128 != p.x as u128 {
        return None;
    }
    if !(p.x - 1).is_multiple_of(n - 1) {
        return None;
    }
    let t = (p.x - 1) / (n - 1);
    if p.lambda as u128 != n as u128 * t as u128 + 1 {
        return None;
    }
    Some(ArdParams { n, t })
}

/// `r = n²t + n + 1` and `b = n·r` for an ARD(n,t).
pub fn ard_counts(a: ArdParams) -> (u64, u64) {
    let r = a.n * a.n * a.t + a.n + 1;
    (r, a.n * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(v: u64, k: u64, l: u64, x: u64, y: u64) -> QsdParams {
        QsdParams::new(v, k, l, x, y).unwrap()
    }

    #[test]
    fn derive_examples() {
        let d = derive_params(&p(23, 7, 21, 3, 1));
        assert_eq!((d.r.clone(), d.b.clone()), (q(77), q(253)));
        assert!(d.integral);
        let d = derive_params(&p(77, 33, 24, 15, 12));
        assert_eq!((d.r, d.b), (q(57), q(133)));
        let d = derive_params(&p(8, 2, 1, 1, 0));
        assert_eq!((d.r, d.b), (q(7), q(28)));
    }

    #[test]
    fn derive_non_integral() {
        let d = derive_params(&p(10, 4, 1, 1, 0));
        assert!(!d.integral);
        assert_eq!(d.r, crate::rational::frac(9, 3));
        assert_eq!(d.b, crate::rational::frac(15, 2));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            QsdParams::new(7, 7, 1, 1, 0),
            Err(DesignError::BlockSize { .. })
        ));
        assert!(matches!(
            QsdParams::new(7, 1, 1, 1, 0),
            Err(DesignError::BlockSize { .. })
        ));
        assert_eq!(QsdParams::new(7, 3, 0, 1, 0), Err(DesignError::ZeroLambda));
        assert_eq!(
            QsdParams::new(7, 3, 1, 1, 1),
            Err(DesignError::EqualIntersections(1))
        );
        assert!(matches!(
            QsdParams::new(7, 3, 1, 3, 1),
            Err(DesignError::IntersectionTooLarge { .. })
        ));
        // swapped input is normalized
        assert_eq!(p(23, 7, 21, 1, 3), p(23, 7, 21, 3, 1));
    }

    #[test]
    fn complement_examples() {
        let w = p(23, 7, 21, 3, 1);
        let (c, dc) = complement(&w, &derive_params(&w)).unwrap();
        assert_eq!(c, p(23, 16, 120, 12, 10));
        assert_eq!((dc.b.clone(), dc.r.clone()), (q(253), q(176)));

        let e = p(8, 2, 1, 1, 0);
        let (c, dc) = complement(&e, &derive_params(&e)).unwrap();
        assert_eq!(c, p(8, 6, 15, 5, 4));
        assert_eq!((dc.b.clone(), dc.r.clone()), (q(28), q(21)));

        let (cc, _) = complement(&c, &dc).unwrap();
        assert_eq!(cc, e);
    }

    #[test]
    fn complement_errors() {
        let np = p(10, 4, 1, 1, 0);
        assert_eq!(
            complement(&np, &derive_params(&np)),
            Err(DesignError::NonIntegral)
        );
        // k > v/2 with y small: v-2k+y < 0
        let big = p(8, 6, 15, 5, 1);
        assert!(matches!(
            complement(&big, &derive_params(&big)),
            Err(DesignError::ComplementNotDesign(_))
        ));
    }

    #[test]
    fn bh_examples() {
        assert_eq!(bh_family(2).unwrap(), p(8, 2, 1, 1, 0));
        let b4 = bh_family(4).unwrap();
        assert_eq!(b4, p(64, 24, 46, 12, 8));
        let d = derive_params(&b4);
        assert_eq!((d.r, d.b), (q(126), q(336)));
        let b8 = bh_family(8).unwrap();
        assert_eq!(b8, p(512, 224, 892, 112, 96));
        let d = derive_params(&b8);
        assert_eq!((d.r, d.b), (q(2044), q(4672)));
        for bad in [0, 1, 3, 6, 12] {
            assert_eq!(bh_family(bad), Err(DesignError::NotPowerOfTwo(bad)));
        }
    }

    #[test]
    fn ard_examples() {
        let a = ard_params(ArdParams { n: 14, t: 2 }).unwrap();
        assert_eq!(a, p(5292, 378, 29, 27, 0));
        let h = ard_params(ArdParams { n: 2, t: 1 }).unwrap();
        assert_eq!(h, p(8, 4, 3, 2, 0));
        let d = derive_params(&h);
        assert_eq!((d.r, d.b), (q(7), q(14)));
        assert_eq!(ard_counts(ArdParams { n: 2, t: 1 }), (7, 14));
        for n in 2..10 {
            let a = ard_params(ArdParams { n, t: 0 }).unwrap();
            assert_eq!((a.x(), a.lambda()), (1, 1));
        }
        assert_eq!(
            ard_params(ArdParams { n: 1, t: 3 }),
            Err(DesignError::ArdOrder(1))
        );
    }

    #[test]
    fn detect_examples() {
        assert_eq!(
            detect_ard(&p(5292, 378, 29, 27, 0)),
            Some(ArdParams { n: 14, t: 2 })
        );
        assert_eq!(detect_ard(&p(23, 7, 21, 3, 1)), None);
        assert_eq!(
            detect_ard(&p(8, 4, 3, 2, 0)),
            Some(ArdParams { n: 2, t: 1 })
        );
    }

    #[test]
    fn detect_inverts_ard_on_grid() {
        for n in 2..=20 {
            for t in 0..=20 {
                let a = ArdParams { n, t };
                if let Ok(pp) = ard_params(a) {
                    assert_eq!(detect_ard(&pp), Some(a));
                    let d = derive_params(&pp);
                    let (r, b) = ard_counts(a);
                    assert_eq!((d.r, d.b), (qu(r), qu(b)));
                }
            }
        }
    }
}
