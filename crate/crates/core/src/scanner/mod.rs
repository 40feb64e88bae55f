//! Exhaustive parameter scans and the embedded tables.
//!
//! With the Calderbank–Cowen filter on (the default), `λ` is not iterated:
//! equality in the bound fixes `b`, and hence `λ = bk(k-1)/(v(v-1))`, for
//! each `(v,k,x,y)`. Tuples whose forced `λ` is not a positive integer within
//! the cap are counted but never classified. With the filter off every
//! `λ ≤ lambda_max` is tried.

mod tables;

pub use tables::{embedded_rows, lookup, reproduce_tables, RowCheck, RowReport, TableReport, TableRow};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block_graph::{block_graph_params, regular_set_params, RegularSetParams, SrgParams};
use crate::criteria::{full_report, CriterionReport, Verdict};
use crate::design::{derive_params, DerivedParams, QsdParams};
use crate::rational::{fmt_q, qu, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filter {
    Integrality,
    SrgIntegrality,
    RegularSetIntegrality,
    Cc,
    N,
    C,
    H,
    Krein,
    Shrikhande,
}

impl Filter {
    pub const ALL: [Filter; 9] = [
        Filter::Integrality,
        Filter::SrgIntegrality,
        Filter::RegularSetIntegrality,
        Filter::Cc,
        Filter::N,
        Filter::C,
        Filter::H,
        Filter::Krein,
        Filter::Shrikhande,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Filter::Integrality => "integrality",
            Filter::SrgIntegrality => "srg-integrality",
            Filter::RegularSetIntegrality => "regular-set-integrality",
            Filter::Cc => "cc",
            Filter::N => "n",
            Filter::C => "c",
            Filter::H => "h",
            Filter::Krein => "krein",
            Filter::Shrikhande => "shrikhande",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Filter::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Filter::ALL.iter().map(|f| f.name()).collect();
                format!("unknown filter `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Feasible,
    Infeasible { reasons: Vec<String> },
    ExternallyExcluded { citations: Vec<String> },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Feasible => "feasible",
            Status::Infeasible { .. } => "infeasible",
            Status::ExternallyExcluded { .. } => "externally-excluded",
        }
    }

    /// Not ruled out by any local criterion.
    pub fn survives(&self) -> bool {
        !matches!(self, Status::Infeasible { .. })
    }

    pub fn notes(&self) -> &[String] {
        match self {
            Status::Feasible => &[],
            Status::Infeasible { reasons } => reasons,
            Status::ExternallyExcluded { citations } => citations,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeasibilityVerdict {
    pub params: QsdParams,
    pub derived: DerivedParams,
    /// Present when `r`, `b` are integral and `b > v`.
    pub srg: Option<SrgParams>,
    pub regular_set: Option<RegularSetParams>,
    pub report: Option<CriterionReport>,
    pub table_row: Option<&'static TableRow>,
    pub status: Status,
}

/// Every filter enabled.
pub fn classify(p: &QsdParams) -> FeasibilityVerdict {
    classify_with(p, &Filter::ALL.into_iter().collect())
}

fn integer_in(q: &Q, lo: &Q, hi: &Q) -> bool {
    q.is_integer() && q >= lo && q <= hi
}

/// Runs every enabled check and records all failures.
pub fn classify_with(p: &QsdParams, filters: &BTreeSet<Filter>) -> FeasibilityVerdict {
    let on = |f: Filter| filters.contains(&f);
    let d = derive_params(p);
    let mut reasons = Vec::new();

    if on(Filter::Integrality) {
        if !d.r.is_integer() {
            reasons.push(format!("integrality: r = {}", fmt_q(&d.r)));
        }
        if !d.b.is_integer() {
            reasons.push(format!("integrality: b = {}", fmt_q(&d.b)));
        }
        if d.b <= qu(p.v()) {
            reasons.push(format!("integrality: b = {} <= v", fmt_q(&d.b)));
        }
    }

    let srg = block_graph_params(p, &d).ok();
    if on(Filter::SrgIntegrality) {
        if let Some(s) = &srg {
            for (name, val) in [("K", &s.k), ("R", &s.r), ("S", &s.s), ("Lambda", &s.lambda), ("M", &s.mu)] {
                if !val.is_integer() {
                    reasons.push(format!("srg-integrality: {name} = {}", fmt_q(val)));
                }
            }
            if !(s.k > s.r && s.r > s.s) {
                reasons.push(format!(
                    "srg-integrality: eigenvalues not ordered K > R > S ({}, {}, {})",
                    fmt_q(&s.k),
                    fmt_q(&s.r),
                    fmt_q(&s.s)
                ));
            }
            if s.lambda < Q::zero() || s.mu < Q::zero() {
                reasons.push(format!(
                    "srg-integrality: Lambda = {}, M = {} negative",
                    fmt_q(&s.lambda),
                    fmt_q(&s.mu)
                ));
            }
        }
    }

    let regular_set = regular_set_params(p, &d).ok();
    if on(Filter::RegularSetIntegrality) {
        if let Some(rs) = &regular_set {
            if !integer_in(&rs.degree, &Q::zero(), &(&d.r - Q::one())) {
                reasons.push(format!("regular-set-integrality: d = {}", fmt_q(&rs.degree)));
            }
            if !integer_in(&rs.nexus, &Q::zero(), &d.r) {
                reasons.push(format!("regular-set-integrality: e = {}", fmt_q(&rs.nexus)));
            }
        }
    }

    let report = match full_report(p) {
        Ok(r) => Some(r),
        Err(e) => {
            reasons.push(format!("criteria: {e}"));
            None
        }
    };
    let mut citations = Vec::new();
    if let Some(rep) = &report {
        if on(Filter::Cc) && !rep.cc_slack.is_zero() {
            reasons.push(format!("cc: cc_slack = {}", fmt_q(&rep.cc_slack)));
        }
        let mut sign_check = |f: Filter, label: &str, value: Option<Q>| {
            if !on(f) {
                return;
            }
            match value {
                Some(v) if Verdict::of(&v) == Verdict::Fail => {
                    reasons.push(format!("{f}: {label} = {} < 0", fmt_q(&v)))
                }
                Some(_) => {}
                None => reasons.push(format!("{f}: {label} undefined")),
            }
        };
        sign_check(Filter::N, "n_slack", Some(rep.n_slack().clone()));
        sign_check(Filter::C, "c_value", Some(rep.c_value.clone()));
        sign_check(Filter::H, "h_value", rep.h_value.clone());
        sign_check(Filter::Krein, "krein_margin", rep.krein_margin());
        if on(Filter::Shrikhande) && rep.shrikhande.is_excluded() {
            citations.push(format!("Shrikhande: {}", rep.shrikhande));
        }
    }

    let table_row = lookup(p);
    if let Some(row) = table_row {
        if !row.comment.is_empty() {
            citations.push(format!("table {}: {}", row.table, row.comment));
        }
    }

    let status = if !reasons.is_empty() {
        Status::Infeasible { reasons }
    } else if !citations.is_empty() {
        Status::ExternallyExcluded { citations }
    } else {
        Status::Feasible
    };
    FeasibilityVerdict {
        params: *p,
        derived: d,
        srg,
        regular_set,
        report,
        table_row,
        status,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("invalid range: {0}")]
    Range(String),
    #[error("{count} candidates exceed the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRange {
    pub v_min: u64,
    pub v_max: u64,
    pub k_max: Option<u64>,
    pub lambda_max: u64,
    pub filters: BTreeSet<Filter>,
    /// Only `k <= v/2`.
    pub canonical_half: bool,
    pub survivors_only: bool,
    pub candidate_cap: u128,
}

pub const DEFAULT_LAMBDA_MAX: u64 = 10_000;
pub const DEFAULT_CANDIDATE_CAP: u128 = 50_000_000;

impl ScanRange {
    pub fn up_to(v_max: u64) -> Self {
        ScanRange {
            v_min: 4,
            v_max,
            k_max: None,
            lambda_max: DEFAULT_LAMBDA_MAX,
            filters: Filter::ALL.into_iter().collect(),
            canonical_half: true,
            survivors_only: false,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.v_min < 4 {
            return Err(ScanError::Range(format!("v_min = {} < 4", self.v_min)));
        }
        if self.filters.is_empty() {
            return Err(ScanError::Range("no filters enabled".into()));
        }
        if self.lambda_max == 0 {
            return Err(ScanError::Range("lambda_max = 0".into()));
        }
        Ok(())
    }

    fn k_range(&self, v: u64) -> std::ops::RangeInclusive<u64> {
        let mut hi = if self.canonical_half { v / 2 } else { v - 1 };
        if let Some(k) = self.k_max {
            hi = hi.min(k);
        }
        2..=hi
    }

    /// `(v,k,x,y)` tuples in range.
    pub fn tuple_count(&self) -> u128 {
        (self.v_min..=self.v_max)
            .flat_map(|v| self.k_range(v))
            .map(|k| (k as u128) * (k as u128 - 1) / 2)
            .sum()
    }

    /// Tuples handed to the enumerator: one per `(v,k,x,y)` with the CC
    /// filter on, `lambda_max` per tuple otherwise.
    pub fn candidate_count(&self) -> u128 {
        let t = self.tuple_count();
        if self.filters.contains(&Filter::Cc) {
            t
        } else {
            t * self.lambda_max as u128
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub range: ScanRange,
    pub tuples: u128,
    pub candidates: u128,
    /// Candidates that passed the prefilter and were classified.
    pub classified: u64,
    pub survivors: u64,
    pub verdicts: Vec<FeasibilityVerdict>,
}

/// `λ` forced by equality in the Calderbank–Cowen bound, if it is a positive
/// integer: `λ = k(k-1)(k-x)(k-y) / den` with
/// `den = v(v-1)(k-x)(k-y) - k(v-k)((v-1)(2k-x-y) - k(v-k))`.
pub fn cc_lambda(v: u64, k: u64, x: u64, y: u64) -> Option<u64> {
    let (v, k, x, y) = (v as i128, k as i128, x as i128, y as i128);
    let kx_ky = (k - x) * (k - y);
    let den = v * (v - 1) * kx_ky - k * (v - k) * ((v - 1) * (2 * k - x - y) - k * (v - k));
    let num = k * (k - 1) * kx_ky;
    if den <= 0 || num % den != 0 {
        return None;
    }
    u64::try_from(num / den).ok().filter(|&l| l > 0)
}

/// `r` and `b` integral.
fn integral_rb(v: u64, k: u64, lambda: u64) -> bool {
    let (v, k, l) = (v as u128, k as u128, lambda as u128);
    let rn = l * (v - 1);
    rn % (k - 1) == 0 && (v * (rn / (k - 1))) % k == 0
}

fn scan_v(range: &ScanRange, v: u64) -> (u64, Vec<FeasibilityVerdict>) {
    let use_cc = range.filters.contains(&Filter::Cc);
    let prefilter_rb = range.filters.contains(&Filter::Integrality);
    let mut classified = 0;
    let mut out = Vec::new();
    let mut visit = |p: QsdParams| {
        classified += 1;
        let verdict = classify_with(&p, &range.filters);
        if !range.survivors_only || verdict.status.survives() {
            out.push(verdict);
        }
    };
    for k in range.k_range(v) {
        for x in 1..k {
            for y in 0..x {
                if use_cc {
                    if let Some(l) = cc_lambda(v, k, x, y).filter(|&l| l <= range.lambda_max) {
                        if !prefilter_rb || integral_rb(v, k, l) {
                            visit(QsdParams::new(v, k, l, x, y).expect("valid by construction"));
                        }
                    }
                } else {
                    for l in 1..=range.lambda_max {
                        if !prefilter_rb || integral_rb(v, k, l) {
                            visit(QsdParams::new(v, k, l, x, y).expect("valid by construction"));
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|vd| vd.params.tuple());
    (classified, out)
}

/// Classifies every candidate in range. Output is sorted by
/// `(v,k,λ,x,y)` and does not depend on the rayon pool size.
pub fn scan(range: &ScanRange) -> Result<ScanOutput, ScanError> {
    range.validate()?;
    let candidates = range.candidate_count();
    if candidates > range.candidate_cap {
        return Err(ScanError::CapExceeded {
            count: candidates,
            cap: range.candidate_cap,
        });
    }
    let parts: Vec<(u64, Vec<FeasibilityVerdict>)> = (range.v_min..=range.v_max)
        .into_par_iter()
        .map(|v| scan_v(range, v))
        .collect();
    let classified = parts.iter().map(|(c, _)| c).sum();
    let verdicts: Vec<FeasibilityVerdict> = parts.into_iter().flat_map(|(_, v)| v).collect();
    let survivors = verdicts.iter().filter(|v| v.status.survives()).count() as u64;
    Ok(ScanOutput {
        range: range.clone(),
        tuples: range.tuple_count(),
        candidates,
        classified,
        survivors,
        verdicts,
    })
}
