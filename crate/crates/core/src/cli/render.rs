//! Text, CSV and JSON renderings. Rationals are always `p/q` strings.

use serde_json::{json, Value};

use crate::block_graph::spectrum_string;
use crate::equivalence::EquivalenceSummary;
use crate::oracle::OracleReport;
use crate::rational::fmt_q;
use crate::scanner::{FeasibilityVerdict, ScanOutput, TableReport};

pub const CSV_COLUMNS: [&str; 22] = [
    "v", "k", "lambda", "x", "y", "r", "b", "V", "K", "R", "S", "Lambda", "M", "d", "e",
    "cc_slack", "n_slack", "c_value", "h_value", "krein_margin", "status", "reasons",
];

pub fn verdict_json(vd: &FeasibilityVerdict) -> Value {
    let p = &vd.params;
    json!({
        "v": p.v(),
        "k": p.k(),
        "lambda": p.lambda(),
        "x": p.x(),
        "y": p.y(),
        "r": fmt_q(&vd.derived.r),
        "b": fmt_q(&vd.derived.b),
        "block_graph": vd.srg.as_ref().map(|s| json!({
            "V": s.vertices,
            "K": fmt_q(&s.k),
            "Lambda": fmt_q(&s.lambda),
            "M": fmt_q(&s.mu),
            "R": fmt_q(&s.r),
            "S": fmt_q(&s.s),
            "mult_R": s.mult_r,
            "mult_S": s.mult_s,
            "spectrum": spectrum_string(s),
        })),
        "regular_set": vd.regular_set.as_ref().map(|rs| json!({
            "d": fmt_q(&rs.degree),
            "e": fmt_q(&rs.nexus),
        })),
        "criteria": vd.report.as_ref().map(|r| json!({
            "cc_slack": fmt_q(&r.cc_slack),
            "n_slack": fmt_q(r.n_slack()),
            "c_value": fmt_q(&r.c_value),
            "h_value": r.h_value.as_ref().map(fmt_q),
            "krein_margin": r.krein_margin().as_ref().map(fmt_q),
            "shrikhande": r.shrikhande.to_string(),
            "signs_agree": r.signs_agree,
        })),
        "table": vd.table_row.map(|row| json!({"table": row.table, "comment": row.comment})),
        "status": vd.status.name(),
        "reasons": vd.status.notes(),
    })
}

pub fn verdict_record(vd: &FeasibilityVerdict) -> Vec<String> {
    let p = &vd.params;
    let opt = |q: Option<&crate::rational::Q>| q.map(fmt_q).unwrap_or_default();
    let s = vd.srg.as_ref();
    let rs = vd.regular_set.as_ref();
    let rep = vd.report.as_ref();
    vec![
        p.v().to_string(),
        p.k().to_string(),
        p.lambda().to_string(),
        p.x().to_string(),
        p.y().to_string(),
        fmt_q(&vd.derived.r),
        fmt_q(&vd.derived.b),
        s.map(|s| s.vertices.to_string()).unwrap_or_default(),
        opt(s.map(|s| &s.k)),
        opt(s.map(|s| &s.r)),
        opt(s.map(|s| &s.s)),
        opt(s.map(|s| &s.lambda)),
        opt(s.map(|s| &s.mu)),
        opt(rs.map(|r| &r.degree)),
        opt(rs.map(|r| &r.nexus)),
        opt(rep.map(|r| &r.cc_slack)),
        opt(rep.map(|r| r.n_slack())),
        opt(rep.map(|r| &r.c_value)),
        opt(rep.and_then(|r| r.h_value.as_ref())),
        opt(rep.and_then(|r| r.krein_margin()).as_ref()),
        vd.status.name().to_string(),
        vd.status.notes().join("; "),
    ]
}

pub fn verdicts_csv<'a>(verdicts: impl IntoIterator<Item = &'a FeasibilityVerdict>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for vd in verdicts {
        w.write_record(verdict_record(vd)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn verdict_text(vd: &FeasibilityVerdict) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<14}{v}\n"));
    line("parameters", vd.params.to_string());
    line("r, b", format!("{}, {}", fmt_q(&vd.derived.r), fmt_q(&vd.derived.b)));
    match &vd.srg {
        Some(s) => {
            line(
                "block graph",
                format!(
                    "({},{},{},{})",
                    s.vertices,
                    fmt_q(&s.k),
                    fmt_q(&s.lambda),
                    fmt_q(&s.mu)
                ),
            );
            line("spectrum", spectrum_string(s));
        }
        None => line("block graph", "-".into()),
    }
    if let Some(rs) = &vd.regular_set {
        line("d, e", format!("{}, {}", fmt_q(&rs.degree), fmt_q(&rs.nexus)));
    }
    if let Some(r) = &vd.report {
        let or_dash = |q: Option<&crate::rational::Q>| q.map(fmt_q).unwrap_or_else(|| "-".into());
        line("cc_slack", fmt_q(&r.cc_slack));
        line("n_slack", fmt_q(r.n_slack()));
        line("c_value", fmt_q(&r.c_value));
        line("h_value", or_dash(r.h_value.as_ref()));
        line("krein_margin", or_dash(r.krein_margin().as_ref()));
        line("shrikhande", r.shrikhande.to_string());
    }
    if let Some(row) = vd.table_row {
        line("table", format!("{} {}", row.table, row.comment));
    }
    line("status", vd.status.name().to_string());
    for note in vd.status.notes() {
        line("", format!("- {note}"));
    }
    out
}

fn scan_header(o: &ScanOutput) -> Value {
    let r = &o.range;
    json!({
        "v_min": r.v_min,
        "v_max": r.v_max,
        "k_max": r.k_max,
        "lambda_max": r.lambda_max,
        "canonical_half": r.canonical_half,
        "survivors_only": r.survivors_only,
        "filters": r.filters.iter().map(|f| f.name()).collect::<Vec<_>>(),
        "tuples": o.tuples.to_string(),
        "candidates": o.candidates.to_string(),
        "classified": o.classified,
        "survivors": o.survivors,
        "note": "with the cc filter on, lambda is forced by equality in the Calderbank-Cowen bound; tuples whose forced lambda is not an integer in 1..=lambda_max are counted in `tuples` but not classified",
    })
}

pub fn scan_json(o: &ScanOutput) -> Value {
    json!({
        "header": scan_header(o),
        "verdicts": o.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    })
}

pub fn scan_text(o: &ScanOutput) -> String {
    let h = scan_header(o);
    let mut out = String::new();
    for (k, v) in h.as_object().expect("object") {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    for vd in &o.verdicts {
        let notes = vd.status.notes();
        out.push_str(&format!(
            "{} r={} b={} {}",
            vd.params,
            fmt_q(&vd.derived.r),
            fmt_q(&vd.derived.b),
            vd.status.name()
        ));
        if !notes.is_empty() {
            out.push_str(&format!(" [{}]", notes.join("; ")));
        }
        out.push('\n');
    }
    out
}

pub fn scan_header_lines(o: &ScanOutput) -> String {
    let h = scan_header(o);
    h.as_object()
        .expect("object")
        .iter()
        .map(|(k, v)| format!("# {k}: {v}\n"))
        .collect()
}

pub fn tables_json(t: &TableReport) -> Value {
    json!({
        "ok": t.ok(),
        "rows": t.rows.iter().map(|r| json!({
            "table": r.row.table,
            "printed": {
                "v": r.row.v, "k": r.row.k, "lambda": r.row.lambda,
                "y": r.row.y, "x": r.row.x, "r": r.row.r, "b": r.row.b,
                "comment": r.row.comment,
            },
            "r": r.r,
            "b": r.b,
            "checks": r.checks,
            "verdict": verdict_json(&r.verdict),
        })).collect::<Vec<_>>(),
    })
}

pub fn tables_text(t: &TableReport) -> String {
    let mut out = String::new();
    for table in [1u8, 2] {
        let rows: Vec<_> = t.rows.iter().filter(|r| r.row.table == table).collect();
        out.push_str(&format!(
            "{:>5} {:>4} {:>5} {:>4} {:>4} {:>5} {:>5}  {:<5} {:<20} comment\n",
            "v", "k", "lambda", "y", "x", "r", "b", "check", "status"
        ));
        for r in rows {
            out.push_str(&format!(
                "{:>5} {:>4} {:>5} {:>4} {:>4} {:>5} {:>5}  {:<5} {:<20} {}\n",
                r.row.v,
                r.row.k,
                r.row.lambda,
                r.row.y,
                r.row.x,
                r.r,
                r.b,
                if r.ok() { "ok" } else { "FAIL" },
                r.verdict.status.name(),
                r.row.comment
            ));
        }
        out.push('\n');
    }
    for f in t.failures() {
        out.push_str(&format!("failed: {f}\n"));
    }
    out.push_str(&format!(
        "{} rows, {} failed checks\n",
        t.rows.len(),
        t.failures().len()
    ));
    out
}

pub fn equivalence_json(seed: u64, s: &EquivalenceSummary, grid_mismatches: usize) -> Value {
    json!({
        "seed": seed,
        "checked": s.checked,
        "sign_counts": {"negative": s.by_sign[0], "zero": s.by_sign[1], "positive": s.by_sign[2]},
        "grid_mismatches": grid_mismatches,
        "failures": s.failures.iter().map(|f| json!({
            "index": f.index,
            "links": f.links.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "witness": f.witness,
        })).collect::<Vec<_>>(),
    })
}

pub fn equivalence_text(seed: u64, s: &EquivalenceSummary, grid_mismatches: usize) -> String {
    let mut out = format!(
        "seed {seed}: checked {} tuples (sign -: {}, 0: {}, +: {})\n",
        s.checked, s.by_sign[0], s.by_sign[1], s.by_sign[2]
    );
    out.push_str(&format!("polynomial grid mismatches: {grid_mismatches}\n"));
    for f in &s.failures {
        let links: Vec<String> = f.links.iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("tuple {} fails [{}]: {}\n", f.index, links.join(", "), f.witness));
    }
    out.push_str(&format!("{} failures\n", s.failures.len() + grid_mismatches));
    out
}

pub fn oracle_json(name: &str, res: &Result<OracleReport, String>) -> Value {
    match res {
        Err(e) => json!({"design": name, "ok": false, "error": e}),
        Ok(r) => {
            let m = &r.measured;
            json!({
                "design": name,
                "ok": true,
                "v": m.v, "k": m.k, "lambda": m.lambda, "b": m.b, "r": m.r, "x": m.x, "y": m.y,
                "block_graph": {
                    "V": m.srg.vertices, "K": m.srg.k, "Lambda": m.srg.lambda, "M": m.srg.mu,
                    "R": m.srg.r, "S": m.srg.s, "mult_R": m.srg.mult_r, "mult_S": m.srg.mult_s,
                },
                "d": m.degree,
                "e": m.nexus,
                "triple_sums": {
                    "A": m.triples.a, "B": m.triples.b, "C": m.triples.c,
                    "spread": fmt_q(&m.triples.spread),
                },
                "three_design": m.three_design,
                "n_slack": fmt_q(r.criteria.n_slack()),
                "c_value": fmt_q(&r.criteria.c_value),
                "h_value": r.criteria.h_value.as_ref().map(fmt_q),
                "complement": r.complement_params.to_string(),
            })
        }
    }
}

pub fn oracle_text(name: &str, res: &Result<OracleReport, String>) -> String {
    match res {
        Err(e) => format!("{name}: FAIL {e}\n"),
        Ok(r) => {
            let m = &r.measured;
            format!(
                "{name}: ok {} b={} r={} intersections {{{},{}}} block graph ({},{},{},{}) \
                 spectrum {}^1 {}^{} {}^{} d={} e={} (A,B,C)=({},{},{}) 3-design={} \
                 N={} C={} H={} complement {}\n",
                r.params,
                m.b,
                m.r,
                m.y,
                m.x,
                m.srg.vertices,
                m.srg.k,
                m.srg.lambda,
                m.srg.mu,
                m.srg.k,
                m.srg.r,
                m.srg.mult_r,
                paren(m.srg.s),
                m.srg.mult_s,
                m.degree,
                m.nexus,
                m.triples.a,
                m.triples.b,
                m.triples.c,
                m.three_design,
                fmt_q(r.criteria.n_slack()),
                fmt_q(&r.criteria.c_value),
                r.criteria.h_value.as_ref().map(fmt_q).unwrap_or_else(|| "-".into()),
                r.complement_params
            )
        }
    }
}

fn paren(n: i64) -> String {
    if n < 0 {
        format!("({n})")
    } else {
        n.to_string()
    }
}

/// Two-column `key,value` CSV.
pub fn pairs_csv(pairs: &[(String, String)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in pairs {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Flattens a JSON object into dotted `key,value` pairs.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    go(&format!("{prefix}.{i}"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
