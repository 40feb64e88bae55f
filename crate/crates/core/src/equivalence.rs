//! Computational check that Hobart's inequality, Calderbank's inequality and
//! Neumaier's inequality are the same condition on a quasisymmetric 2-design.
//!
//! The argument runs through the block-graph eigenvalues:
//!
//! 1. With `V = (K-R)(K-S)/M` and `M = K+RS`, the parenthetical part of (H)
//!    equals `-(K-R)(KR+R²-2KS+2R²S-KS²-RS²) / (K²(S+1)²)`.
//! 2. Multiplying (H) by `vK²(S+1)²(x-y)⁴(v-1)³ / (b³(k²-k-vy+y)²)` and
//!    eliminating `λ`, `r`, `b` leaves the polynomial
//!    `(v-1)(v-2)xy + k²(k-1)(k-3) + 2k(k-1)(x+y) - k(k-1)v(x+y-1)`,
//!    which is (C) written in `x, y` instead of `k-x, k-y`.
//! 3. (N) and (C) differ by the positive factor `r²(v-k)/(k(x-y)²)`.
//!
//! Each link is evaluated exactly at points `(v,k,x,y)` that need not be
//! integral, with `b` fixed by equality in Calderbank–Cowen. Identities are
//! checked for exact equality; a single failing point is reported with its
//! full rational coordinates.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block_graph::{eigenvalues_at, regular_set_at, Eigenvalues};
use crate::criteria::{b_from_cc, calderbank_at, hobart_at, krein_at, neumaier_at, CriteriaError};
use crate::design::RationalParams;
use crate::rational::{checked_div, fmt_q, frac, q, sign, square, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("tuple violates its domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("rejection sampling exceeded {attempts} attempts for {count} tuples")]
    RejectionBound { attempts: u64, count: usize },
    #[error("sample count must be at least 1")]
    EmptySample,
}

/// A point `(v,k,x,y)` with everything the substitution chain needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTuple {
    pub params: RationalParams,
    pub eig: Eigenvalues,
}

impl RationalTuple {
    /// Derives `b` from Calderbank–Cowen equality, then `r = bk/v`,
    /// `λ = r(k-1)/(v-1)` and the eigenvalues, checking the domain
    /// `0 <= y < x < k < v`, `v > 2`, `b > 0`, `K != 0`, `S < -1`,
    /// `M != 0`, `k²-k-vy+y != 0` and `b-K-1 != 0`.
    pub fn new(v: Q, k: Q, x: Q, y: Q) -> Result<Self, EquivalenceError> {
        let dom = |m: &str| Err(EquivalenceError::Domain(m.to_string()));
        if !(y >= Q::zero() && y < x && x < k && k < v) {
            return dom("need 0 <= y < x < k < v");
        }
        if v <= q(2) {
            return dom("need v > 2");
        }
        let b = b_from_cc(&v, &k, &x, &y)?;
        if !b.is_positive() {
            return dom("need b > 0");
        }
        let r = &b * &k / &v;
        let lambda = &r * (&k - Q::one()) / (&v - Q::one());
        let params = RationalParams { v, k, lambda, x, y, r, b };
        let eig = eigenvalues_at(&params).map_err(CriteriaError::from)?;
        if eig.k.is_zero() {
            return dom("need K != 0");
        }
        if eig.s >= q(-1) {
            return dom("need S < -1");
        }
        if (&eig.k + &eig.r * &eig.s).is_zero() {
            return dom("need M != 0");
        }
        if nexus_numerator(&params).is_zero() {
            return dom("need k^2-k-vy+y != 0");
        }
        if (&params.b - &eig.k - Q::one()).is_zero() {
            return dom("need b-K-1 != 0");
        }
        Ok(RationalTuple { params, eig })
    }

    /// `r > λ > 0`, `K > R > 0` and `M > 0`: the region where every
    /// multiplier in the chain is a positive quantity of a plausible design.
    pub fn in_conservative_domain(&self) -> bool {
        let p = &self.params;
        let m = &self.eig.k + &self.eig.r * &self.eig.s;
        p.r > p.lambda
            && p.lambda.is_positive()
            && self.eig.k > self.eig.r
            && self.eig.r.is_positive()
            && m.is_positive()
    }

    pub fn describe(&self) -> String {
        let p = &self.params;
        format!(
            "v={} k={} x={} y={} b={} r={} lambda={} K={} R={} S={}",
            fmt_q(&p.v),
            fmt_q(&p.k),
            fmt_q(&p.x),
            fmt_q(&p.y),
            fmt_q(&p.b),
            fmt_q(&p.r),
            fmt_q(&p.lambda),
            fmt_q(&self.eig.k),
            fmt_q(&self.eig.r),
            fmt_q(&self.eig.s)
        )
    }
}

/// `k² - k - vy + y`, nonzero exactly when `kλ != ry` on the design surface.
fn nexus_numerator(p: &RationalParams) -> Q {
    &p.k * &p.k - &p.k - &p.v * &p.y + &p.y
}

/// Both sides of the parenthetical identity, with `b` replaced by
/// `(K-R)(K-S)/(K+RS)`.
pub fn a_paren_identity(eig: &Eigenvalues) -> Result<(Q, Q), EquivalenceError> {
    let one = Q::one();
    let two = &one + &one;
    let Eigenvalues { k, r, s } = eig;
    let m = k + r * s;
    let vertices = checked_div(&((k - r) * (k - s)), &m)
        .ok_or(CriteriaError::Undefined("(K-R)(K-S)/M"))?;
    let lhs = crate::criteria::hobart_paren(&vertices, eig)?;
    let poly = k * r + r * r - &two * k * s + &two * r * r * s - k * s * s - r * s * s;
    let rhs = checked_div(&(-(k - r) * poly), &(k * k * square(&(s + &one))))
        .ok_or(CriteriaError::Undefined("K^2(S+1)^2"))?;
    Ok((lhs, rhs))
}

/// `(v-1)(v-2)xy + k²(k-1)(k-3) + 2k(k-1)(x+y) - k(k-1)v(x+y-1)`.
pub fn final_polynomial(v: &Q, k: &Q, x: &Q, y: &Q) -> Q {
    let one = Q::one();
    let two = &one + &one;
    let three = &two + &one;
    let kk1 = k * (k - &one);
    (v - &one) * (v - &two) * x * y + k * &kk1 * (k - &three) + &two * &kk1 * (x + y)
        - &kk1 * v * (x + y - &one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainLink {
    /// `b = (K-R)(K-S)/M`
    VertexCount,
    /// parenthetical part of (H) equals its closed form
    AParen,
    /// the final polynomial equals (C)
    FinalPolynomial,
    /// (H) times the multiplier chain equals (C)
    HobartScaling,
    /// sign(H) = sign(C)
    SignHobart,
    /// sign(N) = sign(C)
    SignNeumaier,
    /// sign(Q¹₁₁ - bound) = sign(C)
    SignKrein,
}

impl std::fmt::Display for ChainLink {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChainLink::VertexCount => "b = (K-R)(K-S)/M",
            ChainLink::AParen => "A-paren identity",
            ChainLink::FinalPolynomial => "final polynomial = (C)",
            ChainLink::HobartScaling => "scaled (H) = (C)",
            ChainLink::SignHobart => "sign(H) = sign(C)",
            ChainLink::SignNeumaier => "sign(N) = sign(C)",
            ChainLink::SignKrein => "sign(Krein) = sign(C)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub hobart: Q,
    pub calderbank: Q,
    pub neumaier: Q,
    pub final_poly: Q,
    /// Common sign of (H), (C), (N) when all links hold.
    pub sign: i8,
    pub failed: Vec<ChainLink>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.failed.is_empty()
    }
}

pub fn verify_chain(t: &RationalTuple) -> Result<ChainReport, EquivalenceError> {
    let p = &t.params;
    let eig = &t.eig;
    let one = Q::one();
    let mut failed = Vec::new();

    let m = &eig.k + &eig.r * &eig.s;
    if p.b != (&eig.k - &eig.r) * (&eig.k - &eig.s) / &m {
        failed.push(ChainLink::VertexCount);
    }

    let (lhs, rhs) = a_paren_identity(eig)?;
    if lhs != rhs {
        failed.push(ChainLink::AParen);
    }

    let c = calderbank_at(&p.v, &p.k, &p.x, &p.y);
    let fp = final_polynomial(&p.v, &p.k, &p.x, &p.y);
    if fp != c {
        failed.push(ChainLink::FinalPolynomial);
    }

    let h = hobart_at(p, eig)?;
    let xy = &p.x - &p.y;
    let multiplier = &p.v
        * square(&eig.k)
        * square(&(&eig.s + &one))
        * square(&square(&xy))
        * square(&(&p.v - &one))
        * (&p.v - &one)
        / (square(&p.b) * &p.b * square(&nexus_numerator(p)));
    if &h * multiplier != c {
        failed.push(ChainLink::HobartScaling);
    }
    if sign(&h) != sign(&c) {
        failed.push(ChainLink::SignHobart);
    }

    let rs = regular_set_at(p).map_err(CriteriaError::from)?;
    let n = neumaier_at(p, &rs.degree).slack;
    if sign(&n) != sign(&c) {
        failed.push(ChainLink::SignNeumaier);
    }

    let krein = krein_at(p, eig)?;
    if sign(&krein.margin()) != sign(&c) {
        failed.push(ChainLink::SignKrein);
    }

    Ok(ChainReport {
        sign: sign(&c),
        hobart: h,
        calderbank: c,
        neumaier: n,
        final_poly: fp,
        failed,
    })
}

/// Deterministic sample of tuples in the conservative domain.
///
/// Coordinates are rationals with denominators in `1..=4`: `v` in `(2, 60]`,
/// then `k` in `(1, v)`, `x` in `(y, k)` and `y` in `[0, x)`, with `y = 0`
/// drawn one time in eight.
pub fn sample_domain(seed: u64, count: usize) -> Result<Vec<RationalTuple>, EquivalenceError> {
    const ATTEMPTS_PER_TUPLE: u64 = 1000;
    if count == 0 {
        return Err(EquivalenceError::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = ATTEMPTS_PER_TUPLE * count as u64;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(EquivalenceError::RejectionBound {
                attempts: max_attempts,
                count,
            });
        }
        let Some(v) = draw_above(&mut rng, &q(2), 60) else {
            continue;
        };
        let Some(k) = draw_between(&mut rng, &q(1), &v) else {
            continue;
        };
        let y = if rng.gen_ratio(1, 8) {
            Q::zero()
        } else {
            match draw_between(&mut rng, &Q::zero(), &k) {
                Some(y) => y,
                None => continue,
            }
        };
        let Some(x) = draw_between(&mut rng, &y, &k) else {
            continue;
        };
        match RationalTuple::new(v, k, x, y) {
            Ok(t) if t.in_conservative_domain() => out.push(t),
            _ => continue,
        }
    }
    Ok(out)
}

fn draw_den<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(1..=4)
}

fn draw_above<R: Rng>(rng: &mut R, low: &Q, high: i64) -> Option<Q> {
    let d = draw_den(rng);
    let lo = (low * q(d)).floor().to_integer().to_i64()? + 1;
    let hi = high * d;
    (lo <= hi).then(|| frac(rng.gen_range(lo..=hi), d))
}

/// A rational strictly between `low` and `high` with a small denominator.
fn draw_between<R: Rng>(rng: &mut R, low: &Q, high: &Q) -> Option<Q> {
    let d = draw_den(rng);
    let lo = (low * q(d)).floor().to_integer().to_i64()? + 1;
    let hi = (high * q(d)).ceil().to_integer().to_i64()? - 1;
    (lo <= hi).then(|| frac(rng.gen_range(lo..=hi), d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFailure {
    pub index: usize,
    pub links: Vec<ChainLink>,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceSummary {
    pub checked: usize,
    pub by_sign: [usize; 3],
    pub failures: Vec<ChainFailure>,
}

/// Verifies every tuple in parallel. Failures come back sorted by index.
pub fn verify_all(tuples: &[RationalTuple]) -> EquivalenceSummary {
    let results: Vec<(usize, Result<ChainReport, EquivalenceError>)> = tuples
        .par_iter()
        .enumerate()
        .map(|(i, t)| (i, verify_chain(t)))
        .collect();
    let mut by_sign = [0usize; 3];
    let mut failures = Vec::new();
    for (index, res) in results {
        match res {
            Ok(r) if r.holds() => by_sign[(r.sign + 1) as usize] += 1,
            Ok(r) => failures.push(ChainFailure {
                index,
                links: r.failed,
                witness: tuples[index].describe(),
            }),
            Err(e) => failures.push(ChainFailure {
                index,
                links: Vec::new(),
                witness: format!("{}: {e}", tuples[index].describe()),
            }),
        }
    }
    failures.sort_by_key(|f| f.index);
    EquivalenceSummary {
        checked: tuples.len(),
        by_sign,
        failures,
    }
}

/// Grid used to certify `final_polynomial ≡ calderbank_at`. Both sides have
/// degree at most 2 in `v`, 4 in `k` and 1 in each of `x`, `y`, so agreement
/// on `v ∈ 0..=4`, `k ∈ 0..=6`, `x, y ∈ 0..=3` forces equality as
/// polynomials.
pub fn polynomial_grid_mismatches() -> Vec<(i64, i64, i64, i64)> {
    let mut bad = Vec::new();
    for v in 0..=4 {
        for k in 0..=6 {
            for x in 0..=3 {
                for y in 0..=3 {
                    let (qv, qk, qx, qy) = (q(v), q(k), q(x), q(y));
                    if final_polynomial(&qv, &qk, &qx, &qy) != calderbank_at(&qv, &qk, &qx, &qy) {
                        bad.push((v, k, x, y));
                    }
                }
            }
        }
    }
    bad
}
