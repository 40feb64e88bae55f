use num_integer::Roots;
use num_traits::Zero;

use super::{ExplicitDesign, OracleError};
use crate::block_graph::{block_graph_params, regular_set_params, SrgParams};
use crate::criteria::{full_report, CriterionReport};
use crate::design::{complement, derive_params, QsdParams};
use crate::rational::{fmt_q, q, qu, square, Q};

type Bits = Vec<u64>;

fn bits_of(items: impl IntoIterator<Item = usize>, len: usize) -> Bits {
    let mut out = vec![0u64; len.div_ceil(64)];
    for i in items {
        out[i / 64] |= 1 << (i % 64);
    }
    out
}

fn and_count(a: &Bits, b: &Bits) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

fn has(a: &Bits, i: usize) -> bool {
    a[i / 64] >> (i % 64) & 1 == 1
}

/// Block graph as counted from the blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasuredSrg {
    pub vertices: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub r: i64,
    pub s: i64,
    pub mult_r: u64,
    pub mult_s: u64,
    /// `(A-RI)(A-SI) = c·J`
    pub annihilator: i64,
}

/// Sums over ordered pairs `(v,w)` of points distinct from a fixed `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSums {
    /// `Σ 1`
    pub a: u64,
    /// `Σ λ_uvw`
    pub b: u64,
    /// `Σ λ_uvw(λ_uvw - 1)`
    pub c: u64,
    /// `Σ (λ_uvw - B/A)²`, summed term by term
    pub spread: Q,
}

/// Everything counted directly from an explicit design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measured {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
    pub r: u64,
    pub x: u64,
    pub y: u64,
    pub srg: MeasuredSrg,
    pub degree: u64,
    pub nexus: u64,
    pub triples: TripleSums,
    /// Every triple of points lies in the same number of blocks.
    pub three_design: bool,
}

/// Counts every quantity the formulas predict. Fails if the design is not a
/// quasisymmetric 2-design or if a count that must be constant is not.
pub fn measure(d: &ExplicitDesign) -> Result<Measured, OracleError> {
    let v = d.v();
    let k = d.k();
    let blocks = d.blocks();
    let nb = blocks.len();
    let point_bits: Vec<Bits> = blocks.iter().map(|b| bits_of(b.iter().copied(), v)).collect();

    // pairs and replication
    let mut pair = vec![0u64; v * v];
    let mut reps = vec![0u64; v];
    for b in blocks {
        for (i, &p) in b.iter().enumerate() {
            reps[p] += 1;
            for &q in &b[i + 1..] {
                pair[p * v + q] += 1;
            }
        }
    }
    let lambda = pair[1];
    for p in 0..v {
        for q in p + 1..v {
            if pair[p * v + q] != lambda {
                return Err(OracleError::NotTwoDesign(format!(
                    "points {p},{q} lie in {} blocks, points 0,1 in {lambda}",
                    pair[p * v + q]
                )));
            }
        }
    }
    if lambda == 0 {
        return Err(OracleError::NotTwoDesign("lambda = 0".into()));
    }
    let r = reps[0];
    if reps.iter().any(|&x| x != r) {
        return Err(OracleError::NotTwoDesign("replication is not constant".into()));
    }

    // intersections
    let mut meets = vec![0u64; nb * nb];
    let mut sizes = std::collections::BTreeSet::new();
    for i in 0..nb {
        for j in i + 1..nb {
            let m = and_count(&point_bits[i], &point_bits[j]);
            meets[i * nb + j] = m;
            meets[j * nb + i] = m;
            sizes.insert(m as usize);
        }
    }
    if sizes.len() != 2 {
        return Err(OracleError::NotQuasisymmetric(sizes.into_iter().collect()));
    }
    let y = *sizes.first().unwrap() as u64;
    let x = *sizes.last().unwrap() as u64;

    // block graph on intersection x
    let adj: Vec<Bits> = (0..nb)
        .map(|i| bits_of((0..nb).filter(|&j| j != i && meets[i * nb + j] == x), nb))
        .collect();
    let srg = measure_srg(&adj)?;

    // regular sets of blocks through each point
    let mut degree = None;
    let mut nexus = None;
    for u in 0..v {
        let on_u = bits_of((0..nb).filter(|&i| blocks[i].binary_search(&u).is_ok()), nb);
        for (i, a) in adj.iter().enumerate() {
            let n = and_count(a, &on_u);
            let slot = if has(&on_u, i) { &mut degree } else { &mut nexus };
            match *slot {
                None => *slot = Some(n),
                Some(prev) if prev == n => {}
                Some(prev) => {
                    return Err(OracleError::Invalid(format!(
                        "blocks on point {u} are not a regular set ({prev} vs {n})"
                    )))
                }
            }
        }
    }

    // triple sums around each point
    let mut triples: Option<TripleSums> = None;
    let mut lo = u64::MAX;
    let mut hi = 0u64;
    let mut count = vec![0u64; v * v];
    for u in 0..v {
        count.iter_mut().for_each(|c| *c = 0);
        for blk in blocks.iter().filter(|b| b.binary_search(&u).is_ok()) {
            for &a in blk.iter().filter(|&&a| a != u) {
                for &b in blk.iter().filter(|&&b| b != u && b != a) {
                    count[a * v + b] += 1;
                }
            }
        }
        let ordered = || {
            (0..v)
                .filter(move |&a| a != u)
                .flat_map(move |a| (0..v).filter(move |&b| b != u && b != a).map(move |b| (a, b)))
        };
        let (mut sa, mut sb, mut sc) = (0u64, 0u64, 0u64);
        for (a, b) in ordered() {
            let l = count[a * v + b];
            sa += 1;
            sb += l;
            sc += l * l.saturating_sub(1);
            lo = lo.min(l);
            hi = hi.max(l);
        }
        let mean = qu(sb) / qu(sa);
        let spread = ordered().fold(Q::zero(), |acc, (a, b)| {
            acc + square(&(qu(count[a * v + b]) - &mean))
        });
        let here = TripleSums { a: sa, b: sb, c: sc, spread };
        match &triples {
            None => triples = Some(here),
            Some(t) if *t == here => {}
            Some(_) => {
                return Err(OracleError::Invalid(format!(
                    "triple sums around point {u} differ from point 0"
                )))
            }
        }
    }

    Ok(Measured {
        v: v as u64,
        k: k as u64,
        lambda,
        b: nb as u64,
        r,
        x,
        y,
        srg,
        degree: degree.unwrap_or(0),
        nexus: nexus.unwrap_or(0),
        triples: triples.expect("v >= 1"),
        three_design: lo == hi,
    })
}

fn measure_srg(adj: &[Bits]) -> Result<MeasuredSrg, OracleError> {
    let n = adj.len();
    let deg: Vec<u64> = adj.iter().map(|a| a.iter().map(|w| w.count_ones() as u64).sum()).collect();
    let k = deg[0];
    if deg.iter().any(|&d| d != k) {
        return Err(OracleError::NotStronglyRegular("not regular".into()));
    }
    // A² entries
    let mut sq = vec![0u64; n * n];
    let (mut lam, mut mu) = (None, None);
    for i in 0..n {
        sq[i * n + i] = k;
        for j in i + 1..n {
            let c = and_count(&adj[i], &adj[j]);
            sq[i * n + j] = c;
            sq[j * n + i] = c;
            let slot = if has(&adj[i], j) { &mut lam } else { &mut mu };
            match *slot {
                None => *slot = Some(c),
                Some(p) if p == c => {}
                Some(p) => {
                    return Err(OracleError::NotStronglyRegular(format!(
                        "common neighbour counts {p} and {c}"
                    )))
                }
            }
        }
    }
    let (Some(lambda), Some(mu)) = (lam, mu) else {
        return Err(OracleError::NotStronglyRegular("complete or empty graph".into()));
    };

    // eigenvalues other than k are the roots of t² - (Λ-M)t - (K-M)
    let (ki, li, mi) = (k as i64, lambda as i64, mu as i64);
    let disc = (li - mi) * (li - mi) + 4 * (ki - mi);
    let root = disc.sqrt();
    if root * root != disc || (li - mi + root) % 2 != 0 {
        return Err(OracleError::Spectrum(format!("discriminant {disc}")));
    }
    let r = (li - mi + root) / 2;
    let s = (li - mi - root) / 2;

    // (A-RI)(A-SI) = A² - (R+S)A + RS·I must be a multiple of J
    let entry = |i: usize, j: usize| {
        let a = if i != j && has(&adj[i], j) { 1 } else { 0 };
        let id = if i == j { 1 } else { 0 };
        sq[i * n + j] as i64 - (r + s) * a + r * s * id
    };
    let c = entry(0, 0);
    for i in 0..n {
        for j in 0..n {
            if entry(i, j) != c {
                return Err(OracleError::Spectrum(format!(
                    "(A-RI)(A-SI) is not constant at ({i},{j})"
                )));
            }
        }
    }
    if c * n as i64 != (ki - r) * (ki - s) {
        return Err(OracleError::Spectrum("(A-RI)(A-SI)·1 != (K-R)(K-S)·1".into()));
    }
    // trace A = 0 fixes the multiplicities
    let num = -ki - (n as i64 - 1) * s;
    if r == s || num % (r - s) != 0 {
        return Err(OracleError::Spectrum("non-integral multiplicity".into()));
    }
    let mult_r = num / (r - s);
    let mult_s = n as i64 - 1 - mult_r;
    if mult_r < 0 || mult_s < 0 {
        return Err(OracleError::Spectrum("negative multiplicity".into()));
    }
    Ok(MeasuredSrg {
        vertices: n as u64,
        k,
        lambda,
        mu,
        r,
        s,
        mult_r: mult_r as u64,
        mult_s: mult_s as u64,
        annihilator: c,
    })
}

/// A measured value that disagrees with its formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub quantity: String,
    pub measured: String,
    pub predicted: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: measured {}, predicted {}",
            self.quantity, self.measured, self.predicted
        )
    }
}

#[derive(Default)]
struct Checker {
    prefix: &'static str,
    out: Vec<Mismatch>,
}

impl Checker {
    fn eq(&mut self, quantity: &str, measured: Q, predicted: &Q) {
        if &measured != predicted {
            self.out.push(Mismatch {
                quantity: format!("{}{quantity}", self.prefix),
                measured: fmt_q(&measured),
                predicted: fmt_q(predicted),
            });
        }
    }

    fn flag(&mut self, quantity: &str, measured: bool, predicted: bool) {
        if measured != predicted {
            self.out.push(Mismatch {
                quantity: format!("{}{quantity}", self.prefix),
                measured: measured.to_string(),
                predicted: predicted.to_string(),
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub params: QsdParams,
    pub measured: Measured,
    pub srg: SrgParams,
    pub criteria: CriterionReport,
    pub complement_params: QsdParams,
    pub complement_measured: Measured,
}

fn measured_params(m: &Measured) -> Result<QsdParams, OracleError> {
    QsdParams::new(m.v, m.k, m.lambda, m.x, m.y).map_err(|e| OracleError::Invalid(e.to_string()))
}

fn check_formulas(c: &mut Checker, m: &Measured) -> Result<(QsdParams, SrgParams, CriterionReport), OracleError> {
    let p = measured_params(m)?;
    let d = derive_params(&p);
    c.eq("r", qu(m.r), &d.r);
    c.eq("b", qu(m.b), &d.b);

    let s = block_graph_params(&p, &d).map_err(|e| OracleError::Invalid(e.to_string()))?;
    c.eq("V", qu(m.srg.vertices), &qu(s.vertices));
    c.eq("K", qu(m.srg.k), &s.k);
    c.eq("Lambda", qu(m.srg.lambda), &s.lambda);
    c.eq("M", qu(m.srg.mu), &s.mu);
    c.eq("R", q(m.srg.r), &s.r);
    c.eq("S", q(m.srg.s), &s.s);
    c.eq("mult_R", qu(m.srg.mult_r), &qu(s.mult_r));
    c.eq("mult_S", qu(m.srg.mult_s), &qu(s.mult_s));

    let rs = regular_set_params(&p, &d).map_err(|e| OracleError::Invalid(e.to_string()))?;
    c.eq("d", qu(m.degree), &rs.degree);
    c.eq("e", qu(m.nexus), &rs.nexus);

    let report = full_report(&p).map_err(|e| OracleError::Invalid(e.to_string()))?;
    let n = &report.neumaier;
    c.eq("A", qu(m.triples.a), &n.a);
    c.eq("B", qu(m.triples.b), &n.b);
    c.eq("C", qu(m.triples.c), &n.c);
    let (a, b, cc) = (qu(m.triples.a), qu(m.triples.b), qu(m.triples.c));
    c.eq("sum (lambda_uvw - B/A)^2", m.triples.spread.clone(), &(&b + &cc - &b * &b / &a));
    c.eq("cc_slack", Q::zero(), &report.cc_slack);
    c.flag("3-design vs N equality", m.three_design, report.neumaier.slack.is_zero());
    c.flag("3-design vs C equality", m.three_design, report.c_value.is_zero());
    c.flag(
        "3-design vs H equality",
        m.three_design,
        report.h_value.as_ref().is_some_and(Q::is_zero),
    );
    Ok((p, s, report))
}

/// Measures `d` and its complement and compares every count with the
/// formulas. Any disagreement is an error listing each quantity.
pub fn verify_design(d: &ExplicitDesign) -> Result<OracleReport, OracleError> {
    let measured = measure(d)?;
    let mut c = Checker::default();
    let (params, srg, criteria) = check_formulas(&mut c, &measured)?;

    let comp = d.complement()?;
    let complement_measured = measure(&comp)?;
    let (cp, _) = complement(&params, &derive_params(&params))
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    c.prefix = "complement ";
    let mp = measured_params(&complement_measured)?;
    for (name, got, want) in [
        ("v", mp.v(), cp.v()),
        ("k", mp.k(), cp.k()),
        ("lambda", mp.lambda(), cp.lambda()),
        ("x", mp.x(), cp.x()),
        ("y", mp.y(), cp.y()),
    ] {
        c.eq(name, qu(got), &qu(want));
    }
    check_formulas(&mut c, &complement_measured)?;
    c.flag("block graph", complement_measured.srg == measured.srg, true);

    if !c.out.is_empty() {
        return Err(OracleError::Mismatch(c.out));
    }
    Ok(OracleReport {
        params,
        measured,
        srg,
        criteria,
        complement_params: cp,
        complement_measured,
    })
}
