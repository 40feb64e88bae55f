//! The block graph of a quasisymmetric design.
//!
//! Blocks are vertices; two blocks are adjacent when they meet in the larger
//! intersection number `x`. For a quasisymmetric 2-design this graph is
//! strongly regular with eigenvalues
//!
//! ```text
//! K = ((r-1)k - (b-1)y) / (x-y)     multiplicity 1
//! R = (r - λ - k + y) / (x-y)       multiplicity v-1
//! S = -(k-y) / (x-y)                multiplicity b-v
//! ```
//!
//! and `M = K + RS`, `Λ = R + S + M`. The blocks through a fixed point form a
//! regular set of size `r` with degree `d` and nexus `e`.
//!
//! Eigenvalues are exact rationals; integrality is a feasibility question
//! answered by the scanner, not an error here.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::design::{DerivedParams, QsdParams, RationalParams};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockGraphError {
    #[error("derived r or b is not an integer")]
    NonIntegral,
    #[error("b = {b} <= v = {v}: multiplicity b-v of S is not positive")]
    Degenerate { v: u64, b: u64 },
    #[error("S = -1 (x = k): a multiple of a symmetric design")]
    SquareDesign,
    #[error("x = y: eigenvalues undefined")]
    EqualIntersections,
}

/// Parameters `(V, K, Λ, M)` and spectrum of a strongly regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgParams {
    pub vertices: u64,
    pub k: Q,
    pub lambda: Q,
    pub mu: Q,
    pub r: Q,
    pub s: Q,
    pub mult_r: u64,
    pub mult_s: u64,
}

impl SrgParams {
    pub fn is_integral(&self) -> bool {
        [&self.k, &self.lambda, &self.mu, &self.r, &self.s]
            .iter()
            .all(|q| q.is_integer())
    }
}

/// The three block-graph eigenvalues at an arbitrary rational point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalues {
    pub k: Q,
    pub r: Q,
    pub s: Q,
}

pub fn eigenvalues_at(p: &RationalParams) -> Result<Eigenvalues, BlockGraphError> {
    let xy = &p.x - &p.y;
    if xy.is_zero() {
        return Err(BlockGraphError::EqualIntersections);
    }
    let one = Q::one();
    let k = ((&p.r - &one) * &p.k - (&p.b - &one) * &p.y) / &xy;
    let r = (&p.r - &p.lambda - &p.k + &p.y) / &xy;
    let s = -(&p.k - &p.y) / &xy;
    Ok(Eigenvalues { k, r, s })
}

/// Strongly regular parameters of the intersection-`x` graph.
pub fn block_graph_params(p: &QsdParams, d: &DerivedParams) -> Result<SrgParams, BlockGraphError> {
    let (Some(b), Some(_)) = (d.b_u64(), d.r_u64()) else {
        return Err(BlockGraphError::NonIntegral);
    };
    if b <= p.v() {
        return Err(BlockGraphError::Degenerate { v: p.v(), b });
    }
    let ev = eigenvalues_at(&RationalParams::new(p, d))?;
    if ev.s == -Q::one() {
        return Err(BlockGraphError::SquareDesign);
    }
    let mu = &ev.k + &ev.r * &ev.s;
    let lambda = &ev.r + &ev.s + &mu;
    Ok(SrgParams {
        vertices: b,
        k: ev.k,
        lambda,
        mu,
        r: ev.r,
        s: ev.s,
        mult_r: p.v() - 1,
        mult_s: b - p.v(),
    })
}

/// Size, degree and nexus of the regular set of blocks on a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSetParams {
    pub size: Q,
    pub degree: Q,
    pub nexus: Q,
}

pub fn regular_set_at(p: &RationalParams) -> Result<RegularSetParams, BlockGraphError> {
    let xy = &p.x - &p.y;
    if xy.is_zero() {
        return Err(BlockGraphError::EqualIntersections);
    }
    let one = Q::one();
    let degree =
        ((&p.lambda - &one) * (&p.k - &one) - (&p.r - &one) * (&p.y - &one)) / &xy;
    let nexus = (&p.lambda * &p.k - &p.r * &p.y) / &xy;
    Ok(RegularSetParams {
        size: p.r.clone(),
        degree,
        nexus,
    })
}

/// `d = ((λ-1)(k-1) - (r-1)(y-1)) / (x-y)` and `e = (λk - ry) / (x-y)`.
pub fn regular_set_params(
    p: &QsdParams,
    d: &DerivedParams,
) -> Result<RegularSetParams, BlockGraphError> {
    regular_set_at(&RationalParams::new(p, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgViolation {
    ProductRelation,
    SumRelation,
    MultiplicitySum,
}

impl std::fmt::Display for SrgViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SrgViolation::ProductRelation => "RS = M-K",
            SrgViolation::SumRelation => "R+S = Lambda-M",
            SrgViolation::MultiplicitySum => "1 + mult_R + mult_S = V",
        })
    }
}

/// Re-checks the eigenvalue relations and the multiplicity count.
pub fn srg_sanity(s: &SrgParams) -> Vec<SrgViolation> {
    let mut out = Vec::new();
    if &s.r * &s.s != &s.mu - &s.k {
        out.push(SrgViolation::ProductRelation);
    }
    if &s.r + &s.s != &s.lambda - &s.mu {
        out.push(SrgViolation::SumRelation);
    }
    if 1 + s.mult_r as u128 + s.mult_s as u128 != s.vertices as u128 {
        out.push(SrgViolation::MultiplicitySum);
    }
    out
}

/// `140^1 25^22 (-3)^230`
pub fn spectrum_string(s: &SrgParams) -> String {
    let term = |q: &Q, m: u64| {
        if q < &Q::zero() {
            format!("({})^{m}", fmt_q(q))
        } else {
            format!("{}^{m}", fmt_q(q))
        }
    };
    format!("{} {} {}", term(&s.k, 1), term(&s.r, s.mult_r), term(&s.s, s.mult_s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{complement, derive_params};
    use crate::rational::q;

    fn srg_of(v: u64, k: u64, l: u64, x: u64, y: u64) -> SrgParams {
        let p = QsdParams::new(v, k, l, x, y).unwrap();
        block_graph_params(&p, &derive_params(&p)).unwrap()
    }

    fn rs_of(v: u64, k: u64, l: u64, x: u64, y: u64) -> RegularSetParams {
        let p = QsdParams::new(v, k, l, x, y).unwrap();
        regular_set_params(&p, &derive_params(&p)).unwrap()
    }

    #[test]
    fn witt_block_graph() {
        let s = srg_of(23, 7, 21, 3, 1);
        assert_eq!(s.vertices, 253);
        assert_eq!((s.k.clone(), s.lambda.clone(), s.mu.clone()), (q(140), q(87), q(65)));
        assert_eq!((s.r.clone(), s.s.clone()), (q(25), q(-3)));
        assert_eq!((s.mult_r, s.mult_s), (22, 230));
        assert_eq!(spectrum_string(&s), "140^1 25^22 (-3)^230");
        assert!(srg_sanity(&s).is_empty());
    }

    #[test]
    fn small_block_graphs() {
        let s = srg_of(8, 2, 1, 1, 0);
        assert_eq!(
            (s.vertices, s.k.clone(), s.lambda.clone(), s.mu.clone()),
            (28, q(12), q(6), q(4))
        );
        assert_eq!((s.r.clone(), s.s.clone(), s.mult_r, s.mult_s), (q(4), q(-2), 7, 20));

        let s = srg_of(6, 3, 2, 2, 1);
        assert_eq!(
            (s.vertices, s.k.clone(), s.lambda.clone(), s.mu.clone()),
            (10, q(3), q(0), q(1))
        );
        assert_eq!((s.r.clone(), s.s.clone(), s.mult_r, s.mult_s), (q(1), q(-2), 5, 4));
    }

    #[test]
    fn regular_sets() {
        let r = rs_of(23, 7, 21, 3, 1);
        assert_eq!((r.size, r.degree, r.nexus), (q(77), q(60), q(35)));
        let r = rs_of(6, 3, 2, 2, 1);
        assert_eq!((r.size, r.degree, r.nexus), (q(5), q(2), q(1)));
        let r = rs_of(8, 2, 1, 1, 0);
        assert_eq!((r.size, r.degree, r.nexus), (q(7), q(6), q(2)));
    }

    #[test]
    fn sanity_detects_tampering() {
        let mut s = srg_of(8, 2, 1, 1, 0);
        assert!(srg_sanity(&s).is_empty());
        s.r = q(5);
        let v = srg_sanity(&s);
        assert!(v.contains(&SrgViolation::ProductRelation));
        assert_eq!(v[0].to_string(), "RS = M-K");
        let mut s = srg_of(8, 2, 1, 1, 0);
        s.mult_s = 19;
        assert_eq!(srg_sanity(&s), vec![SrgViolation::MultiplicitySum]);
    }

    #[test]
    fn errors() {
        let p = QsdParams::new(10, 4, 1, 1, 0).unwrap();
        assert_eq!(
            block_graph_params(&p, &derive_params(&p)),
            Err(BlockGraphError::NonIntegral)
        );
        // 2-(7,3,1): b = v
        let p = QsdParams::new(7, 3, 1, 1, 0).unwrap();
        assert_eq!(
            block_graph_params(&p, &derive_params(&p)),
            Err(BlockGraphError::Degenerate { v: 7, b: 7 })
        );
    }

    #[test]
    fn square_design_rejected_at_rational_level() {
        // x = k can only be reached through RationalParams
        let pt = RationalParams {
            v: q(7),
            k: q(3),
            lambda: q(2),
            x: q(3),
            y: q(1),
            r: q(6),
            b: q(14),
        };
        assert_eq!(eigenvalues_at(&pt).unwrap().s, q(-1));
    }

    #[test]
    fn complement_has_same_graph() {
        for (v, k, l, x, y) in [(23, 7, 21, 3, 1), (8, 2, 1, 1, 0), (6, 3, 2, 2, 1), (64, 24, 46, 12, 8)] {
            let p = QsdParams::new(v, k, l, x, y).unwrap();
            let d = derive_params(&p);
            let (pc, dc) = complement(&p, &d).unwrap();
            assert_eq!(
                block_graph_params(&p, &d).unwrap(),
                block_graph_params(&pc, &dc).unwrap()
            );
        }
    }

    #[test]
    fn bh_family_integral_spectrum() {
        for qv in [2, 4, 8, 16, 32] {
            let p = crate::design::bh_family(qv).unwrap();
            let d = derive_params(&p);
            assert!(d.integral);
            let s = block_graph_params(&p, &d).unwrap();
            assert!(s.is_integral());
            assert!(srg_sanity(&s).is_empty());
            let rs = regular_set_params(&p, &d).unwrap();
            assert!(rs.degree.is_integer() && rs.nexus.is_integer());
        }
    }
}
