//! Report rendering: aligned human-readable text by default, machine
//! readable JSON behind `--json`. Both are byte-deterministic for a given
//! input.

use std::collections::BTreeMap;

use serde::Serialize;

use kronq::decompose::Decomposition;
use kronq::ext::BigradedDims;
use kronq::graded::GradedMap;
use kronq::model::AdmissibilityReport;
use kronq::oracle::ExhaustiveReport;
use kronq::rep::{Family, IndecomposableLabel, Representation};

use crate::document::field_name;

#[derive(Serialize)]
pub struct LabelJson {
    pub family: String,
    pub k: i64,
    pub shift: i64,
}

pub fn label_json(label: &IndecomposableLabel) -> LabelJson {
    let (family, k) = match label.family {
        Family::LineBundle(k) => ("LineBundle", k),
        Family::TorsionZero(k) => ("TorsionZero", k as i64),
        Family::TorsionInfinity(k) => ("TorsionInfinity", k as i64),
    };
    LabelJson { family: family.to_string(), k, shift: label.shift }
}

pub fn label_line(label: &IndecomposableLabel) -> String {
    label.to_string()
}

fn matrix_rows(m: &kronq::matrix::Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

pub fn map_blocks_json(map: &GradedMap) -> BTreeMap<String, Vec<Vec<String>>> {
    map.blocks().iter().map(|(&deg, m)| (deg.to_string(), matrix_rows(m))).collect()
}

fn render_map(out: &mut String, name: &str, map: &GradedMap) {
    out.push_str(&format!("{name}:\n"));
    if map.blocks().is_empty() {
        out.push_str("  (zero)\n");
    }
    for (&deg, m) in map.blocks() {
        let rows: Vec<String> =
            matrix_rows(m).into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        out.push_str(&format!("  degree {deg}: [{}]\n", rows.join(", ")));
    }
}

#[derive(Serialize)]
pub struct DecomposeJson {
    pub d: i64,
    pub field: String,
    pub summands: Vec<LabelJson>,
    pub verified: bool,
    pub phi: BTreeMap<String, Vec<Vec<String>>>,
    pub psi: BTreeMap<String, Vec<Vec<String>>>,
}

pub fn decompose_report(rep: &Representation, dec: &Decomposition, json: bool) -> String {
    if json {
        let doc = DecomposeJson {
            d: rep.d,
            field: field_name(rep.field()),
            summands: dec.summands.iter().map(label_json).collect(),
            verified: true,
            phi: map_blocks_json(&dec.base_change.phi),
            psi: map_blocks_json(&dec.base_change.psi),
        };
        return serde_json::to_string_pretty(&doc).unwrap();
    }
    let mut out = String::new();
    out.push_str(&format!("field: {}\n", field_name(rep.field())));
    out.push_str(&format!("d: {}\n", rep.d));
    out.push_str(&format!("summands: {}\n", dec.summands.len()));
    for label in &dec.summands {
        out.push_str(&format!("  {}\n", label_line(label)));
    }
    out.push_str("base change: verified entrywise\n");
    render_map(&mut out, "phi", &dec.base_change.phi);
    render_map(&mut out, "psi", &dec.base_change.psi);
    out
}

#[derive(Serialize)]
pub struct ExtJson {
    pub d: i64,
    pub field: String,
    pub bigraded: Vec<(u8, i64, usize)>,
    pub total: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_kernel: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_cokernel: Option<BTreeMap<String, usize>>,
}

pub fn profile_json(profile: &BTreeMap<i64, usize>) -> BTreeMap<String, usize> {
    profile.iter().map(|(&deg, &dim)| (deg.to_string(), dim)).collect()
}

pub fn ext_report(
    rep: &Representation,
    big: &BigradedDims,
    total: &BTreeMap<i64, usize>,
    cone: Option<&(BTreeMap<i64, usize>, BTreeMap<i64, usize>)>,
    json: bool,
) -> String {
    if json {
        let doc = ExtJson {
            d: rep.d,
            field: field_name(rep.field()),
            bigraded: big.table.iter().map(|(&(h, i), &dim)| (h, i, dim)).collect(),
            total: profile_json(total),
            cone_kernel: cone.map(|(k, _)| profile_json(k)),
            cone_cokernel: cone.map(|(_, c)| profile_json(c)),
        };
        return serde_json::to_string_pretty(&doc).unwrap();
    }
    let mut out = String::new();
    out.push_str(&format!("field: {}\n", field_name(rep.field())));
    out.push_str(&format!("d: {}\n", rep.d));
    out.push_str("bigraded (h, internal) -> dim:\n");
    if big.table.is_empty() {
        out.push_str("  (zero)\n");
    }
    for (&(h, internal), &dim) in &big.table {
        out.push_str(&format!("  ({h}, {internal}) -> {dim}\n"));
    }
    out.push_str("total profile (degree -> dim):\n");
    if total.is_empty() {
        out.push_str("  (zero)\n");
    }
    for (&deg, &dim) in total {
        out.push_str(&format!("  {deg}: {dim}\n"));
    }
    if let Some((kernel, cokernel)) = cone {
        out.push_str("cone evaluation map, raw kernel (degree -> dim):\n");
        for (&deg, &dim) in kernel {
            out.push_str(&format!("  {deg}: {dim}\n"));
        }
        out.push_str("cone evaluation map, raw cokernel (degree -> dim):\n");
        for (&deg, &dim) in cokernel {
            out.push_str(&format!("  {deg}: {dim}\n"));
        }
    }
    out
}

#[derive(Serialize)]
pub struct ScanEntryJson {
    #[serde(flatten)]
    pub label: LabelJson,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_shift: Option<i64>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<usize>>,
}

#[derive(Serialize)]
pub struct ScanJson {
    pub n: i64,
    pub d: i64,
    pub kmax: usize,
    pub checks: Vec<String>,
    pub entries: Vec<ScanEntryJson>,
}

/// Dims in degrees `0..=n` of the profile placed by the witness shift.
pub fn placed_profile(profile: &BTreeMap<i64, usize>, shift: i64, n: i64) -> Vec<usize> {
    (0..=n).map(|i| profile.get(&(i + shift)).copied().unwrap_or(0)).collect()
}

pub struct ScanRow {
    pub label: IndecomposableLabel,
    pub report: AdmissibilityReport,
    pub profile: BTreeMap<i64, usize>,
}

pub fn scan_report_text(
    n: i64,
    d: i64,
    kmax: usize,
    checks: &[kronq::model::Check],
    rows: &[ScanRow],
    json: bool,
) -> String {
    if json {
        let doc = ScanJson {
            n,
            d,
            kmax,
            checks: checks.iter().map(|c| c.name().to_string()).collect(),
            entries: rows
                .iter()
                .map(|row| ScanEntryJson {
                    label: label_json(&row.label),
                    admissible: row.report.admissible,
                    witness_shift: row.report.witness_shift,
                    failures: row.report.failures.iter().map(|c| c.name().to_string()).collect(),
                    cohomology: row
                        .report
                        .witness_shift
                        .map(|s| placed_profile(&row.profile, s, n)),
                })
                .collect(),
        };
        return serde_json::to_string_pretty(&doc).unwrap();
    }
    let mut out = String::new();
    let names: Vec<&str> = checks.iter().map(|c| c.name()).collect();
    out.push_str(&format!("n={n} d={d} kmax={kmax} checks={}\n", names.join(",")));
    out.push_str("admissible:\n");
    let mut any = false;
    for row in rows.iter().filter(|r| r.report.admissible) {
        let shift = row.report.witness_shift.expect("admissible rows carry a witness");
        let dims: Vec<String> =
            placed_profile(&row.profile, shift, n).iter().map(usize::to_string).collect();
        let fam = IndecomposableLabel { family: row.label.family, shift: row.label.shift };
        out.push_str(&format!("  {}  cohomology {}\n", label_line(&fam), dims.join(",")));
        any = true;
    }
    if !any {
        out.push_str("  (none)\n");
    }
    out.push_str("excluded:\n");
    for row in rows.iter().filter(|r| !r.report.admissible) {
        let fails: Vec<&str> = row.report.failures.iter().map(|c| c.name()).collect();
        out.push_str(&format!("  {}: {}\n", label_line(&row.label), fails.join(", ")));
    }
    out
}

#[derive(Serialize)]
pub struct CheckJson {
    pub profiles: usize,
    pub instances: usize,
    pub disagreements: usize,
    pub counterexamples: Vec<String>,
}

pub fn check_report(report: &ExhaustiveReport, json: bool) -> String {
    if json {
        let doc = CheckJson {
            profiles: report.profiles,
            instances: report.instances,
            disagreements: report.counterexamples.len(),
            counterexamples: report.counterexamples.iter().map(|c| c.to_string()).collect(),
        };
        return serde_json::to_string_pretty(&doc).unwrap();
    }
    let mut out = String::new();
    out.push_str(&format!(
        "profiles={} instances={} disagreements={}\n",
        report.profiles,
        report.instances,
        report.counterexamples.len()
    ));
    if report.consistent() {
        out.push_str("consistent\n");
    } else {
        for c in &report.counterexamples {
            out.push_str(&format!("  {c}\n"));
        }
    }
    out
}
