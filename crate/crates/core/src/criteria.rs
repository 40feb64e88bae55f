//! Feasibility inequalities for quasisymmetric 2-designs, evaluated exactly.
//!
//! * Calderbank–Cowen: `1 - 1/b <= T(v,k,x,y)`, equality iff 2-design.
//! * Neumaier (N): `B(B-A) <= AC`, equality iff 3-design.
//! * Calderbank (C): a quadratic in `x̄ = k-x`, `ȳ = k-y`, equality iff 3-design.
//! * Hobart (H): a spectral inequality in the block-graph eigenvalues,
//!   also available in its Krein form `Q¹₁₁ >= (v-2k)²(v-1)/(k(v-k)(v-2))`.
//! * Shrikhande's exclusion of ARD(n,t) with `n ≡ 2 (mod 4)` and a prime
//!   `≡ 3 (mod 4)` in the squarefree part of `n`.
//!
//! For every genuine 2-design (N), (C) and (H) agree in sign; a report whose
//! Calderbank–Cowen slack is zero but whose signs disagree is an error.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block_graph::{
    eigenvalues_at, regular_set_at, BlockGraphError, Eigenvalues, RegularSetParams, SrgParams,
};
use crate::design::{
    complement, derive_params, detect_ard, ArdParams, DerivedParams, QsdParams, RationalParams,
};
use crate::rational::{checked_div, cube, fmt_q, qu, sign, square, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("{0} is undefined (division by zero)")]
    Undefined(&'static str),
    #[error("Calderbank-Cowen bound T = {0} admits no positive b")]
    NoPositiveB(String),
    #[error(transparent)]
    BlockGraph(#[from] BlockGraphError),
    #[error("sign disagreement at a 2-design point: N={n}, C={c}, H={h}")]
    SignDisagreement { n: String, c: String, h: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Equality,
    Fail,
}

impl Verdict {
    pub fn of(value: &Q) -> Self {
        match sign(value) {
            1 => Verdict::Pass,
            0 => Verdict::Equality,
            _ => Verdict::Fail,
        }
    }

    pub fn holds(self) -> bool {
        self != Verdict::Fail
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Equality => "equality",
            Verdict::Fail => "fail",
        })
    }
}

/// Right-hand side `T` of the Calderbank–Cowen inequality.
pub fn cc_bound(v: &Q, k: &Q, x: &Q, y: &Q) -> Result<Q, CriteriaError> {
    let one = Q::one();
    let kvk = k * (v - k);
    let outer = checked_div(&kvk, &(v * (v - &one))).ok_or(CriteriaError::Undefined("T"))?;
    let inner_num = (v - &one) * (k * Q::from_integer(2.into()) - x - y) - &kvk;
    let inner = checked_div(&inner_num, &((k - x) * (k - y))).ok_or(CriteriaError::Undefined("T"))?;
    Ok(outer * inner)
}

/// `T - (1 - 1/b)`. Zero exactly at 2-designs; negative is a violation.
pub fn cc_slack(v: &Q, k: &Q, x: &Q, y: &Q, b: &Q) -> Result<Q, CriteriaError> {
    let t = cc_bound(v, k, x, y)?;
    let inv_b = checked_div(&Q::one(), b).ok_or(CriteriaError::Undefined("1/b"))?;
    Ok(t - (Q::one() - inv_b))
}

/// The block count forced by equality in Calderbank–Cowen: `b = 1/(1-T)`.
pub fn b_from_cc(v: &Q, k: &Q, x: &Q, y: &Q) -> Result<Q, CriteriaError> {
    let t = cc_bound(v, k, x, y)?;
    if t >= Q::one() {
        return Err(CriteriaError::NoPositiveB(fmt_q(&t)));
    }
    Ok(Q::one() / (Q::one() - t))
}

/// The three counts of Neumaier's inequality and its slack `AC - B(B-A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeumaierTerms {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub slack: Q,
}

impl NeumaierTerms {
    /// `B = C = 0`: every triple count is zero, an equality with no blocks
    /// through any triple (e.g. `k = 2`).
    pub fn degenerate(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }
}

pub fn neumaier_at(p: &RationalParams, degree: &Q) -> NeumaierTerms {
    let one = Q::one();
    let two = &one + &one;
    let a = (&p.v - &one) * (&p.v - &two);
    let b = &p.r * (&p.k - &one) * (&p.k - &two);
    let c = &p.r * degree * (&p.x - &one) * (&p.x - &two)
        + &p.r * (&p.r - &one - degree) * (&p.y - &one) * (&p.y - &two);
    let slack = &a * &c - &b * (&b - &a);
    NeumaierTerms { a, b, c, slack }
}

pub fn neumaier(p: &QsdParams, d: &DerivedParams, rs: &RegularSetParams) -> NeumaierTerms {
    neumaier_at(&RationalParams::new(p, d), &rs.degree)
}

/// `(v-1)(v-2)x̄ȳ - k(v-k)(v-2)(x̄+ȳ) + k(v-k)(k(v-k)-1)`.
pub fn calderbank_at(v: &Q, k: &Q, x: &Q, y: &Q) -> Q {
    let one = Q::one();
    let two = &one + &one;
    let xb = k - x;
    let yb = k - y;
    let kvk = k * (v - k);
    (v - &one) * (v - &two) * &xb * &yb - &kvk * (v - &two) * (&xb + &yb)
        + &kvk * (&kvk - &one)
}

pub fn calderbank(p: &QsdParams) -> Q {
    calderbank_at(&qu(p.v()), &qu(p.k()), &qu(p.x()), &qu(p.y()))
}

/// `1 + R³/K² - (R+1)³/(b-K-1)²`.
pub fn hobart_paren(b: &Q, ev: &Eigenvalues) -> Result<Q, CriteriaError> {
    let one = Q::one();
    let t1 = checked_div(&cube(&ev.r), &square(&ev.k)).ok_or(CriteriaError::Undefined("R^3/K^2"))?;
    let t2 = checked_div(&cube(&(&ev.r + &one)), &square(&(b - &ev.k - &one)))
        .ok_or(CriteriaError::Undefined("(R+1)^3/(b-K-1)^2"))?;
    Ok(one + t1 - t2)
}

fn check_not_square(ev: &Eigenvalues) -> Result<(), CriteriaError> {
    if ev.s == -Q::one() {
        Err(BlockGraphError::SquareDesign.into())
    } else {
        Ok(())
    }
}

pub fn hobart_at(p: &RationalParams, ev: &Eigenvalues) -> Result<Q, CriteriaError> {
    check_not_square(ev)?;
    let one = Q::one();
    let two = &one + &one;
    let paren = hobart_paren(&p.b, ev)?;
    let factor = checked_div(&(&p.v - &two), &p.v).ok_or(CriteriaError::Undefined("(v-2)/v"))?;
    let vk2 = &p.v - &p.k * &two;
    let second = checked_div(
        &(square(&vk2) * &p.lambda),
        &(square(&p.k) * (&p.k - &one) * (&p.v - &p.k)),
    )
    .ok_or(CriteriaError::Undefined("(v-2k)^2 lambda / (k^2(k-1)(v-k))"))?;
    Ok(factor * paren - second)
}

/// Left-hand side of Hobart's inequality.
pub fn hobart(p: &QsdParams, d: &DerivedParams, s: &SrgParams) -> Result<Q, CriteriaError> {
    let ev = Eigenvalues {
        k: s.k.clone(),
        r: s.r.clone(),
        s: s.s.clone(),
    };
    hobart_at(&RationalParams::new(p, d), &ev)
}

/// Krein form of Hobart's inequality.
///
/// The left side is normalized as `Q¹₁₁ = ((v-1)²/b)·(1 + R³/K² - (R+1)³/(b-K-1)²)`.
/// This normalization is a reconstruction: it is the scaling under which
/// `lhs - rhs = H · v(v-1)²/(b(v-2))`, so the two forms agree in sign for `b > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KreinForm {
    pub lhs: Q,
    pub rhs: Q,
}

impl KreinForm {
    pub fn margin(&self) -> Q {
        &self.lhs - &self.rhs
    }
}

pub fn krein_at(p: &RationalParams, ev: &Eigenvalues) -> Result<KreinForm, CriteriaError> {
    check_not_square(ev)?;
    let one = Q::one();
    let two = &one + &one;
    let paren = hobart_paren(&p.b, ev)?;
    let scale = checked_div(&square(&(&p.v - &one)), &p.b).ok_or(CriteriaError::Undefined("(v-1)^2/b"))?;
    let rhs = checked_div(
        &(square(&(&p.v - &p.k * &two)) * (&p.v - &one)),
        &(&p.k * (&p.v - &p.k) * (&p.v - &two)),
    )
    .ok_or(CriteriaError::Undefined("(v-2k)^2(v-1)/(k(v-k)(v-2))"))?;
    Ok(KreinForm {
        lhs: scale * paren,
        rhs,
    })
}

pub fn krein_form(p: &QsdParams, d: &DerivedParams, s: &SrgParams) -> Result<KreinForm, CriteriaError> {
    let ev = Eigenvalues {
        k: s.k.clone(),
        r: s.r.clone(),
        s: s.s.clone(),
    };
    krein_at(&RationalParams::new(p, d), &ev)
}

/// Product of the primes dividing `n` to an odd power.
pub fn squarefree_part(n: u64) -> u64 {
    assert!(n >= 1, "squarefree_part of 0");
    let mut rest = n;
    let mut out = 1;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out * rest
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when no ARD(n,t) can exist: `n ≡ 2 (mod 4)` and the squarefree
/// part of `n` has a prime factor `≡ 3 (mod 4)`. Independent of `t`.
pub fn shrikhande_ard(a: ArdParams) -> bool {
    a.n % 4 == 2
        && prime_factors(squarefree_part(a.n))
            .iter()
            .any(|p| p % 4 == 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum ShrikhandeStatus {
    Excluded { ard: ArdParams, via_complement: bool },
    NotExcluded { ard: ArdParams, via_complement: bool },
    NotArdShaped,
}

impl ShrikhandeStatus {
    pub fn is_excluded(&self) -> bool {
        matches!(self, ShrikhandeStatus::Excluded { .. })
    }
}

impl std::fmt::Display for ShrikhandeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (word, ard, via) = match self {
            ShrikhandeStatus::NotArdShaped => return f.write_str("not-ARD-shaped"),
            ShrikhandeStatus::Excluded { ard, via_complement } => ("excluded", ard, via_complement),
            ShrikhandeStatus::NotExcluded { ard, via_complement } => {
                ("not-excluded", ard, via_complement)
            }
        };
        write!(f, "{word} ARD({},{})", ard.n, ard.t)?;
        if *via {
            f.write_str(" (complement)")?;
        }
        Ok(())
    }
}

/// ARD detection on `p`, or failing that on its complement, plus the
/// Shrikhande verdict. A design exists iff its complement does, so an
/// excluded complement excludes `p`.
pub fn shrikhande_status(p: &QsdParams, d: &DerivedParams) -> ShrikhandeStatus {
    let found = detect_ard(p).map(|a| (a, false)).or_else(|| {
        complement(p, d)
            .ok()
            .and_then(|(pc, _)| detect_ard(&pc))
            .map(|a| (a, true))
    });
    match found {
        None => ShrikhandeStatus::NotArdShaped,
        Some((ard, via_complement)) if shrikhande_ard(ard) => ShrikhandeStatus::Excluded {
            ard,
            via_complement,
        },
        Some((ard, via_complement)) => ShrikhandeStatus::NotExcluded {
            ard,
            via_complement,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub cc_slack: Q,
    pub neumaier: NeumaierTerms,
    pub c_value: Q,
    /// `None` when `K = 0` or `b - K - 1 = 0`.
    pub h_value: Option<Q>,
    pub krein: Option<KreinForm>,
    pub shrikhande: ShrikhandeStatus,
    pub signs_agree: bool,
}

impl CriterionReport {
    pub fn n_slack(&self) -> &Q {
        &self.neumaier.slack
    }
    pub fn cc_verdict(&self) -> Verdict {
        Verdict::of(&self.cc_slack)
    }
    pub fn n_verdict(&self) -> Verdict {
        Verdict::of(&self.neumaier.slack)
    }
    pub fn c_verdict(&self) -> Verdict {
        Verdict::of(&self.c_value)
    }
    pub fn h_verdict(&self) -> Option<Verdict> {
        self.h_value.as_ref().map(Verdict::of)
    }
    pub fn krein_verdict(&self) -> Option<Verdict> {
        self.krein.as_ref().map(|k| Verdict::of(&k.margin()))
    }
    pub fn krein_margin(&self) -> Option<Q> {
        self.krein.as_ref().map(KreinForm::margin)
    }
    /// Equality in (N) with all triple counts zero.
    pub fn degenerate_triple(&self) -> bool {
        self.neumaier.degenerate()
    }
}

/// Evaluates every criterion. Hobart and Krein values are omitted where they
/// are undefined; the sign cross-check is enforced whenever the
/// Calderbank–Cowen slack is zero.
pub fn full_report(p: &QsdParams) -> Result<CriterionReport, CriteriaError> {
    let d = derive_params(p);
    let pt = RationalParams::new(p, &d);
    let cc = cc_slack(&pt.v, &pt.k, &pt.x, &pt.y, &pt.b)?;
    let rs = regular_set_at(&pt)?;
    let neu = neumaier_at(&pt, &rs.degree);
    let c_value = calderbank(p);
    let ev = eigenvalues_at(&pt)?;
    let h_value = hobart_at(&pt, &ev).ok();
    let krein = krein_at(&pt, &ev).ok();

    let sn = sign(&neu.slack);
    let sc = sign(&c_value);
    let mut signs_agree = sn == sc;
    if let Some(h) = &h_value {
        signs_agree &= sign(h) == sc;
    }
    if let Some(k) = &krein {
        signs_agree &= sign(&k.margin()) == sc;
    }
    if cc.is_zero() && !signs_agree {
        return Err(CriteriaError::SignDisagreement {
            n: fmt_q(&neu.slack),
            c: fmt_q(&c_value),
            h: h_value.as_ref().map(fmt_q).unwrap_or_else(|| "-".into()),
        });
    }
    Ok(CriterionReport {
        cc_slack: cc,
        neumaier: neu,
        c_value,
        h_value,
        krein,
        shrikhande: shrikhande_status(p, &d),
        signs_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block_graph::{block_graph_params, regular_set_params};
    use crate::rational::{frac, q};

    fn p(v: u64, k: u64, l: u64, x: u64, y: u64) -> QsdParams {
        QsdParams::new(v, k, l, x, y).unwrap()
    }

    #[test]
    fn cc_examples() {
        assert_eq!(cc_slack(&q(23), &q(7), &q(3), &q(1), &q(253)).unwrap(), q(0));
        assert_eq!(cc_slack(&q(8), &q(2), &q(1), &q(0), &q(28)).unwrap(), q(0));
        let s = cc_slack(&q(8), &q(2), &q(1), &q(0), &q(29)).unwrap();
        assert_eq!(s, frac(27, 28) - frac(28, 29));
        assert!(s < q(0));
    }

    #[test]
    fn b_from_cc_examples() {
        assert_eq!(b_from_cc(&q(23), &q(7), &q(3), &q(1)).unwrap(), q(253));
        assert_eq!(b_from_cc(&q(6), &q(3), &q(2), &q(1)).unwrap(), q(10));
        assert_eq!(b_from_cc(&q(8), &q(2), &q(1), &q(0)).unwrap(), q(28));
        assert!(matches!(
            b_from_cc(&q(8), &q(2), &q(2), &q(0)),
            Err(CriteriaError::Undefined(_))
        ));
        assert_eq!(
            b_from_cc(&q(5), &q(3), &q(2), &q(0)),
            Err(CriteriaError::NoPositiveB("1".into()))
        );
    }

    #[test]
    fn b_from_cc_rejects_t_at_least_one() {
        // (7,3,2,0): T = (12/42)(6*6-12)/3 = 8/7
        let t = cc_bound(&q(7), &q(3), &q(2), &q(0)).unwrap();
        assert_eq!(t, frac(8, 7));
        assert!(matches!(
            b_from_cc(&q(7), &q(3), &q(2), &q(0)),
            Err(CriteriaError::NoPositiveB(_))
        ));
    }

    fn neu(v: u64, k: u64, l: u64, x: u64, y: u64) -> NeumaierTerms {
        let pp = p(v, k, l, x, y);
        let d = derive_params(&pp);
        neumaier(&pp, &d, &regular_set_params(&pp, &d).unwrap())
    }

    #[test]
    fn neumaier_examples() {
        let n = neu(23, 7, 21, 3, 1);
        assert_eq!((n.a.clone(), n.b.clone(), n.c.clone(), n.slack.clone()), (q(462), q(2310), q(9240), q(0)));
        assert!(!n.degenerate());
        let n = neu(6, 3, 2, 2, 1);
        assert_eq!((n.a.clone(), n.b.clone(), n.c.clone(), n.slack.clone()), (q(20), q(10), q(0), q(100)));
        let n = neu(8, 2, 1, 1, 0);
        assert_eq!((n.b.clone(), n.c.clone(), n.slack.clone()), (q(0), q(0), q(0)));
        assert!(n.degenerate());
    }

    #[test]
    fn calderbank_examples() {
        assert_eq!(calderbank(&p(23, 7, 21, 3, 1)), q(0));
        assert_eq!(calderbank(&p(6, 3, 2, 2, 1)), q(4));
        assert_eq!(calderbank(&p(8, 2, 1, 1, 0)), q(0));
    }

    fn hob(v: u64, k: u64, l: u64, x: u64, y: u64) -> (Q, KreinForm) {
        let pp = p(v, k, l, x, y);
        let d = derive_params(&pp);
        let s = block_graph_params(&pp, &d).unwrap();
        (hobart(&pp, &d, &s).unwrap(), krein_form(&pp, &d, &s).unwrap())
    }

    #[test]
    fn hobart_and_krein_examples() {
        let (h, k) = hob(23, 7, 21, 3, 1);
        assert_eq!(h, q(0));
        assert_eq!((k.lhs, k.rhs), (frac(297, 392), frac(297, 392)));
        let (h, k) = hob(6, 3, 2, 2, 1);
        assert_eq!(h, frac(16, 27));
        assert_eq!((k.lhs, k.rhs), (frac(20, 9), q(0)));
        let (h, _) = hob(8, 2, 1, 1, 0);
        assert_eq!(h, q(0));
        // v = 2k
        let (_, k) = hob(8, 4, 3, 2, 0);
        assert_eq!(k.rhs, q(0));
    }

    #[test]
    fn hobart_paren_witt() {
        let ev = Eigenvalues { k: q(140), r: q(25), s: q(-3) };
        assert_eq!(hobart_paren(&q(253), &ev).unwrap(), frac(621, 1568));
    }

    #[test]
    fn hobart_undefined_cases() {
        let pt = RationalParams {
            v: q(10),
            k: q(4),
            lambda: q(2),
            x: q(2),
            y: q(1),
            r: q(6),
            b: q(15),
        };
        let zero_k = Eigenvalues { k: q(0), r: q(1), s: q(-2) };
        assert!(matches!(hobart_at(&pt, &zero_k), Err(CriteriaError::Undefined(_))));
        let square = Eigenvalues { k: q(3), r: q(1), s: q(-1) };
        assert!(matches!(
            hobart_at(&pt, &square),
            Err(CriteriaError::BlockGraph(BlockGraphError::SquareDesign))
        ));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(14), 14);
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(9), 1);
        assert_eq!(squarefree_part(1), 1);
        assert_eq!(squarefree_part(2 * 2 * 2 * 7 * 7 * 11), 22);
    }

    #[test]
    fn squarefree_matches_brute_force() {
        for n in 1u64..2000 {
            // largest square divisor by enumeration
            let sq = (1..=n).rev().find(|m| n % (m * m) == 0).unwrap();
            assert_eq!(squarefree_part(n), n / (sq * sq), "n={n}");
        }
    }

    #[test]
    fn shrikhande_examples() {
        assert!(shrikhande_ard(ArdParams { n: 14, t: 2 }));
        for t in 0..5 {
            assert!(!shrikhande_ard(ArdParams { n: 4, t }));
            assert!(shrikhande_ard(ArdParams { n: 6, t }));
        }
        assert!(!shrikhande_ard(ArdParams { n: 2, t: 1 }));
        assert!(!shrikhande_ard(ArdParams { n: 10, t: 0 }));
        assert!(shrikhande_ard(ArdParams { n: 22, t: 0 }));
    }

    #[test]
    fn shrikhande_through_complement() {
        // affine plane of order 6 and its complement
        let ap = p(36, 6, 1, 1, 0);
        let d = derive_params(&ap);
        assert_eq!(
            shrikhande_status(&ap, &d),
            ShrikhandeStatus::Excluded { ard: ArdParams { n: 6, t: 0 }, via_complement: false }
        );
        let (c, dc) = complement(&ap, &d).unwrap();
        assert_eq!(
            shrikhande_status(&c, &dc),
            ShrikhandeStatus::Excluded { ard: ArdParams { n: 6, t: 0 }, via_complement: true }
        );
    }

    #[test]
    fn full_report_examples() {
        let r = full_report(&p(23, 7, 21, 3, 1)).unwrap();
        assert_eq!(r.cc_slack, q(0));
        assert_eq!(*r.n_slack(), q(0));
        assert_eq!(r.c_value, q(0));
        assert_eq!(r.h_value, Some(q(0)));
        assert_eq!(r.krein_margin(), Some(q(0)));
        assert_eq!(r.shrikhande, ShrikhandeStatus::NotArdShaped);
        assert!(r.signs_agree);

        let r = full_report(&p(5292, 378, 29, 27, 0)).unwrap();
        assert!(r.shrikhande.is_excluded());

        let r = full_report(&p(77, 33, 24, 15, 12)).unwrap();
        assert_eq!(r.n_verdict(), Verdict::Pass);
        assert_eq!(r.c_verdict(), Verdict::Pass);
        assert_eq!(r.h_verdict(), Some(Verdict::Pass));
        assert_eq!(r.c_value, q(14352));
    }

    #[test]
    fn full_report_off_the_design_surface() {
        // cc_slack != 0, so the signs may legitimately disagree
        let r = full_report(&p(23, 7, 21, 4, 1)).unwrap();
        assert_eq!(r.cc_slack, frac(140, 2277));
        assert_eq!(r.c_value, q(-420));
        assert_eq!(r.n_verdict(), Verdict::Pass);
        assert!(!r.signs_agree);
    }
}
