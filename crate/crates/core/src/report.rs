//! End-to-end pipeline: prepare an instance, evaluate the selected bounds,
//! round, certify, and render the result as a table, CSV or JSON.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::bounds::{self, Certificate, CertificateKind, RoundingOptions};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fmt::sig;
use crate::instances;
use crate::model::{Instance, SignProgram, ZeroOneProgram};
use crate::penalty::{self, PenaltyBound, PenaltyMethod};
use crate::reduction::{homogenize, MaxCutInstance};
use crate::relaxations::{self, BoundName, BoundReport, BoundStatus, Relaxed};
use crate::sdp::{SdpSolution, Sense, SolverConfig};

/// Brute force runs automatically up to this many variables.
pub const AUTO_BRUTE_FORCE_MAX_N: usize = 18;

/// Significant digits in CSV and table output.
pub const REPORT_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteForceMode {
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relaxations to run; brute force is governed by `brute_force`.
    pub selectors: Vec<BoundName>,
    pub solver: SolverConfig,
    pub rho_override: Option<f64>,
    pub brute_force: BruteForceMode,
    /// Hyperplane rounding of the min Q₊ solution; `None` skips it.
    pub rounding: Option<RoundingOptions>,
    pub lasserre_redundant: bool,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            selectors: default_selectors(),
            solver: SolverConfig::default(),
            rho_override: None,
            brute_force: BruteForceMode::Auto,
            rounding: Some(RoundingOptions::default()),
            lasserre_redundant: true,
            exec: Exec::default(),
        }
    }
}

pub fn default_selectors() -> Vec<BoundName> {
    BoundName::ALL.into_iter().filter(|n| *n != BoundName::BruteForce).collect()
}

/// Parse a comma-separated selector list; `all` selects every relaxation.
pub fn parse_selectors(s: &str) -> Result<Vec<BoundName>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(default_selectors());
            continue;
        }
        let name = BoundName::parse(part).ok_or_else(|| Error::Invalid(format!("unknown bound selector `{part}`")))?;
        out.push(name);
    }
    if out.is_empty() {
        return Err(Error::Invalid("no bound selected".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Both forms of an instance plus its MAX-CUT reduction.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// All-equality 0/1 form, in original units.
    pub zero_one: ZeroOneProgram,
    pub sign: SignProgram,
    pub penalty: PenaltyBound,
    pub maxcut: MaxCutInstance,
}

/// Expand inequalities, switch domains and build Q.
pub fn prepare(inst: &Instance, solver: &SolverConfig, rho_override: Option<f64>) -> Result<Prepared> {
    let (zero_one, sign) = match inst {
        Instance::ZeroOne(p) => {
            let p = if p.all_eq() { p.clone() } else { p.slack_expand()? };
            let q = p.to_sign_form()?;
            (p, q)
        }
        Instance::Sign(q) => (q.to_zero_one(), q.clone()),
    };
    let penalty = match rho_override {
        Some(r) => PenaltyBound::fixed(r)?,
        None => penalty::rho(sign.c(), sign.f(), solver)?,
    };
    let maxcut = homogenize(&sign, &penalty);
    Ok(Prepared { zero_one, sign, penalty, maxcut })
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub prepared: Prepared,
    pub report: BoundReport,
    pub certificate: Certificate,
    /// The min Q₊ solution, when computed.
    pub min_solution: Option<SdpSolution>,
}

fn run_bound(name: BoundName, prep: &Prepared, opts: &SolveOptions) -> Result<Relaxed> {
    let cfg = &opts.solver;
    match name {
        BoundName::MaxcutShorMin => relaxations::shor_maxcut(&prep.maxcut, Sense::Min, cfg),
        BoundName::MaxcutShorMax => relaxations::shor_maxcut(&prep.maxcut, Sense::Max, cfg),
        BoundName::Lasserre1 => relaxations::lasserre1(&prep.sign, opts.lasserre_redundant, cfg),
        BoundName::LpBox => {
            if crate::linalg::is_zero(prep.sign.f()) {
                relaxations::lp_box(&prep.sign)
            } else {
                Ok(Relaxed::skipped("lp_box needs F = 0"))
            }
        }
        BoundName::ConvexQuadratic => relaxations::convex_quadratic_relaxation(&prep.sign, cfg),
        BoundName::CopositiveDnn => relaxations::copositive_dnn(&prep.zero_one, cfg),
        BoundName::BruteForce => {
            let bf = instances::brute_force_with(&prep.sign, opts.exec)?;
            Ok(if bf.feasible() { Relaxed::exact(bf.value) } else { Relaxed::infeasible("no feasible point") })
        }
    }
}

/// Run the selected bounds, rounding and the certificate on a prepared
/// instance.
pub fn solve_prepared(prep: Prepared, opts: &SolveOptions) -> Result<SolveOutcome> {
    opts.solver.validate()?;
    let mut names = opts.selectors.clone();
    let want_bf = match opts.brute_force {
        BruteForceMode::Always => true,
        BruteForceMode::Never => false,
        BruteForceMode::Auto => prep.sign.n() <= AUTO_BRUTE_FORCE_MAX_N,
    };
    if want_bf {
        names.push(BoundName::BruteForce);
    }
    names.sort();
    names.dedup();

    let results = opts.exec.map(names.clone(), |name| {
        let start = Instant::now();
        let r = run_bound(name, &prep, opts).unwrap_or_else(|e| Relaxed::failed(&e.to_string()));
        (name, r, start.elapsed().as_secs_f64())
    });

    let mut report = BoundReport::for_program(&prep.sign);
    let mut min_solution = None;
    for (name, r, secs) in results {
        if name == BoundName::CopositiveDnn {
            report.insert_original(name, &r, secs);
        } else {
            report.insert_raw(name, &r, secs);
        }
        if name == BoundName::MaxcutShorMin && r.status.usable() {
            min_solution = r.sdp;
        }
    }

    if let (Some(ropts), Some(sol)) = (opts.rounding, min_solution.as_ref()) {
        report.rounding = Some(bounds::gw_round_with(&sol.x, &prep.maxcut, ropts, opts.exec)?);
    }
    let certificate = bounds::certify(&report, &prep.penalty);
    Ok(SolveOutcome { prepared: prep, report, certificate, min_solution })
}

pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveOutcome> {
    let prep = prepare(inst, &opts.solver, opts.rho_override)?;
    solve_prepared(prep, opts)
}

/// 100·(a − b)/|b|.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    100.0 * (a - b) / b.abs()
}

fn delta_vs_min_q(report: &BoundReport, name: BoundName) -> Option<f64> {
    let min_q = report.get(BoundName::MaxcutShorMin).filter(|e| e.status.usable())?;
    let e = report.get(name).filter(|e| e.status.usable() || e.name == BoundName::BruteForce)?;
    if name == BoundName::MaxcutShorMin || !e.value.is_finite() || e.value == 0.0 {
        return None;
    }
    Some(relative_difference(min_q.value, e.value))
}

fn method_name(m: PenaltyMethod) -> &'static str {
    match m {
        PenaltyMethod::ClosedForm => "closed_form",
        PenaltyMethod::Sdp => "sdp",
        PenaltyMethod::Override => "override",
    }
}

fn opt_sig(v: Option<f64>) -> String {
    v.map(|v| sig(v, REPORT_DIGITS)).unwrap_or_default()
}

pub const SOLVE_CSV_HEADER: &str = "bound,raw,value,status,inflation,delta_pct";

/// One CSV line per bound; `timing` appends a seconds column.
pub fn solve_csv(out: &SolveOutcome, timing: bool) -> String {
    let mut s = String::from(SOLVE_CSV_HEADER);
    if timing {
        s.push_str(",seconds");
    }
    s.push('\n');
    for e in out.report.entries() {
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            e.name.as_str(),
            sig(e.raw, REPORT_DIGITS),
            sig(e.value, REPORT_DIGITS),
            e.status.as_str(),
            sig(e.inflation * out.report.scale(), REPORT_DIGITS),
            opt_sig(delta_vs_min_q(&out.report, e.name))
        );
        if timing {
            let _ = write!(s, ",{}", sig(e.seconds, 4));
        }
        s.push('\n');
    }
    s
}

pub fn solve_table(out: &SolveOutcome, timing: bool) -> String {
    let p = &out.prepared;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n={} m={} rho={} ({}) M={} nodes={}",
        p.sign.n(),
        p.sign.m(),
        sig(p.penalty.rho, REPORT_DIGITS),
        method_name(p.penalty.method),
        sig(p.penalty.penalty_weight(), REPORT_DIGITS),
        p.maxcut.n_nodes()
    );
    let _ = writeln!(
        s,
        "units: original = {} * raw + {}",
        sig(p.sign.scale(), REPORT_DIGITS),
        sig(p.sign.offset(), REPORT_DIGITS)
    );
    let mut header = format!(
        "{:<18} {:>18} {:>18} {:<16} {:>12} {:>12}",
        "bound", "raw", "value", "status", "inflation", "delta_pct"
    );
    if timing {
        header.push_str(&format!(" {:>10}", "seconds"));
    }
    let _ = writeln!(s, "{header}");
    for e in out.report.entries() {
        let _ = write!(
            s,
            "{:<18} {:>18} {:>18} {:<16} {:>12} {:>12}",
            e.name.as_str(),
            sig(e.raw, REPORT_DIGITS),
            sig(e.value, REPORT_DIGITS),
            e.status.as_str(),
            sig(e.inflation * out.report.scale(), 3),
            opt_sig(delta_vs_min_q(&out.report, e.name))
        );
        if timing {
            let _ = write!(s, " {:>10}", sig(e.seconds, 4));
        }
        s.push('\n');
        if matches!(e.status, BoundStatus::Skipped | BoundStatus::Failed) && !e.note.is_empty() {
            let _ = writeln!(s, "  {}: {}", e.name.as_str(), e.note);
        }
    }
    if let (Some(lo), Some(hi)) = (out.report.get(BoundName::MaxcutShorMin), out.report.get(BoundName::MaxcutShorMax)) {
        if lo.status.usable() && hi.status.usable() {
            let up = bounds::nesterov_sandwich(lo.raw, hi.raw);
            let _ = writeln!(
                s,
                "sandwich: f* in [{}, {}]",
                sig(lo.value, REPORT_DIGITS),
                sig(out.report.to_original(up), REPORT_DIGITS)
            );
        }
    }
    if let Some(r) = &out.report.rounding {
        let _ = writeln!(
            s,
            "rounding: value={} feasible={} trial={}",
            sig(r.recovered.objective, REPORT_DIGITS),
            r.recovered.feasible,
            r.trial
        );
    }
    let _ = writeln!(s, "certificate: {} ({})", out.certificate.label(), out.certificate.explanation);
    s
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    bound: &'a str,
    raw: Option<f64>,
    value: Option<f64>,
    status: &'a str,
    inflation: f64,
    delta_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
    #[serde(skip_serializing_if = "str::is_empty")]
    note: &'a str,
}

#[derive(Serialize)]
struct JsonRounding<'a> {
    x: &'a [u8],
    value: f64,
    raw: f64,
    form_value: f64,
    feasible: bool,
    trial: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    n: usize,
    m: usize,
    rho: f64,
    rho_method: &'a str,
    penalty_m: f64,
    scale: f64,
    offset: f64,
    bounds: Vec<JsonEntry<'a>>,
    sandwich_upper: Option<f64>,
    rounding: Option<JsonRounding<'a>>,
    certificate: &'a str,
    explanation: &'a str,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn solve_json(out: &SolveOutcome, timing: bool) -> String {
    let p = &out.prepared;
    let rep = &out.report;
    let bounds = rep
        .entries()
        .iter()
        .map(|e| JsonEntry {
            bound: e.name.as_str(),
            raw: finite(e.raw),
            value: finite(e.value),
            status: e.status.as_str(),
            inflation: e.inflation * rep.scale(),
            delta_pct: delta_vs_min_q(rep, e.name),
            seconds: timing.then_some(e.seconds),
            note: &e.note,
        })
        .collect();
    let sandwich_upper = match (rep.get(BoundName::MaxcutShorMin), rep.get(BoundName::MaxcutShorMax)) {
        (Some(lo), Some(hi)) if lo.status.usable() && hi.status.usable() => {
            Some(rep.to_original(bounds::nesterov_sandwich(lo.raw, hi.raw)))
        }
        _ => None,
    };
    let rounding = rep.rounding.as_ref().map(|r| JsonRounding {
        x: &r.recovered.x_zero_one,
        value: r.recovered.objective,
        raw: r.recovered.raw_objective,
        form_value: r.value,
        feasible: r.recovered.feasible,
        trial: r.trial,
    });
    let doc = JsonReport {
        n: p.sign.n(),
        m: p.sign.m(),
        rho: p.penalty.rho,
        rho_method: method_name(p.penalty.method),
        penalty_m: p.penalty.penalty_weight(),
        scale: p.sign.scale(),
        offset: p.sign.offset(),
        bounds,
        sandwich_upper,
        rounding,
        certificate: out.certificate.label(),
        explanation: &out.certificate.explanation,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Human-readable summary of a rounding run.
pub fn rounding_text(out: &SolveOutcome) -> String {
    let mut s = String::new();
    let Some(r) = &out.report.rounding else {
        return "rounding: no min Q+ solution available\n".into();
    };
    let x: Vec<String> = r.recovered.x_zero_one.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "x = [{}]", x.join(", "));
    let _ = writeln!(s, "objective = {}", sig(r.recovered.objective, REPORT_DIGITS));
    let _ = writeln!(s, "raw = {}", sig(r.recovered.raw_objective, REPORT_DIGITS));
    let _ = writeln!(s, "Q value = {}", sig(r.value, REPORT_DIGITS));
    let _ = writeln!(s, "feasible = {}", r.recovered.feasible);
    let _ = writeln!(s, "trial = {}", r.trial);
    if let Some(e) = out.report.get(BoundName::MaxcutShorMin) {
        let _ = writeln!(s, "min Q+ = {}", sig(e.raw, REPORT_DIGITS));
        let _ = writeln!(s, "gap to min Q+ = {}", sig(r.value - e.raw, REPORT_DIGITS));
    }
    s
}

pub fn certificate_text(out: &SolveOutcome) -> String {
    let mut s = format!("certificate: {}\n{}\n", out.certificate.label(), out.certificate.explanation);
    match &out.certificate.kind {
        CertificateKind::Feasible { point, value } => {
            let x: Vec<String> = point.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "x = [{}]\nobjective = {}", x.join(", "), sig(*value, REPORT_DIGITS));
        }
        CertificateKind::InfeasibleByGap { min_q, rho } => {
            let _ =
                writeln!(s, "min Q+ (inflated) = {}\nrho = {}", sig(*min_q, REPORT_DIGITS), sig(*rho, REPORT_DIGITS));
        }
        CertificateKind::Unknown => {}
    }
    s
}

/// Timing sidecar: one `bound seconds` line per entry.
pub fn timing_log(out: &SolveOutcome) -> String {
    out.report.entries().iter().map(|e| format!("{} {}\n", e.name.as_str(), sig(e.seconds, 6))).collect()
}

/// The swept parameter of a comparison run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    B,
    K,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::B => "b",
            SweepAxis::K => "k",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub base: instances::GeneratorSpec,
    pub axis: SweepAxis,
    pub values: Vec<i64>,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param: i64,
    pub seed: u64,
    pub result: std::result::Result<SolveOutcome, String>,
}

/// Solve every (value, seed) cell; rows come back in sweep order.
pub fn run_sweep(sweep: &Sweep, opts: &SolveOptions) -> Result<Vec<SweepRow>> {
    if sweep.values.is_empty() || sweep.seeds.is_empty() {
        return Err(Error::Invalid("empty sweep".into()));
    }
    let cells: Vec<(i64, u64)> = sweep.values.iter().flat_map(|&v| sweep.seeds.iter().map(move |&s| (v, s))).collect();
    let inner = SolveOptions { exec: Exec::Serial, ..opts.clone() };
    Ok(opts.exec.map(cells, |(param, seed)| {
        let mut spec = sweep.base;
        spec.seed = seed;
        match sweep.axis {
            SweepAxis::B => spec.b = param,
            SweepAxis::K => spec.k = param,
        }
        let result =
            spec.generate().and_then(|g| solve(&Instance::Sign(g.sign().clone()), &inner)).map_err(|e| e.to_string());
        SweepRow { param, seed, result }
    }))
}

pub fn sweep_csv(axis: SweepAxis, selectors: &[BoundName], rows: &[SweepRow]) -> String {
    let mut names: Vec<BoundName> = selectors.to_vec();
    if rows.iter().any(|r| r.result.as_ref().is_ok_and(|o| o.report.get(BoundName::BruteForce).is_some())) {
        names.push(BoundName::BruteForce);
    }
    names.sort();
    names.dedup();
    let mut s = format!("{},seed", axis.as_str());
    for n in &names {
        let _ = write!(s, ",{},{}_status", n.as_str(), n.as_str());
    }
    s.push_str(",certificate,rounding_feasible,error\n");
    for row in rows {
        let _ = write!(s, "{},{}", row.param, row.seed);
        match &row.result {
            Ok(out) => {
                for n in &names {
                    match out.report.get(*n) {
                        Some(e) => {
                            let _ = write!(s, ",{},{}", sig(e.value, REPORT_DIGITS), e.status.as_str());
                        }
                        None => s.push_str(",,"),
                    }
                }
                let feasible =
                    out.report.rounding.as_ref().map(|r| r.recovered.feasible.to_string()).unwrap_or_default();
                let _ = writeln!(s, ",{},{},", out.certificate.label(), feasible);
            }
            Err(e) => {
                for _ in &names {
                    s.push_str(",,");
                }
                let _ = writeln!(s, ",,,{}", e.replace([',', '\n'], ";"));
            }
        }
    }
    s
}

/// How often min Q₊ beats each other lower bound (tolerance 1e-6 relative).
pub fn win_counts(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    for other in [BoundName::Lasserre1, BoundName::LpBox, BoundName::ConvexQuadratic, BoundName::CopositiveDnn] {
        let (mut better, mut worse, mut tie) = (0, 0, 0);
        for out in rows.iter().filter_map(|r| r.result.as_ref().ok()) {
            let (Some(a), Some(b)) = (out.report.get(BoundName::MaxcutShorMin), out.report.get(other)) else {
                continue;
            };
            if a.status != BoundStatus::Converged || b.status != BoundStatus::Converged {
                continue;
            }
            let tol = 1e-6 * (1.0 + a.value.abs().max(b.value.abs()));
            if a.value > b.value + tol {
                better += 1;
            } else if a.value < b.value - tol {
                worse += 1;
            } else {
                tie += 1;
            }
        }
        if better + worse + tie > 0 {
            let _ = writeln!(s, "min Q+ vs {}: higher {better}, lower {worse}, tied {tie}", other.as_str());
        }
    }
    let failures = rows.iter().filter(|r| r.result.is_err()).count();
    if failures > 0 {
        let _ = writeln!(s, "failed rows: {failures}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Family, GeneratorSpec};

    #[test]
    fn selectors() {
        assert_eq!(
            parse_selectors("lp_box,maxcut_shor_min").unwrap(),
            vec![BoundName::MaxcutShorMin, BoundName::LpBox]
        );
        assert_eq!(parse_selectors("all").unwrap().len(), 6);
        assert!(parse_selectors("nope").is_err());
        assert!(parse_selectors("").is_err());
    }

    #[test]
    fn knapsack_pipeline() {
        let q = instances::knapsack_fixed(4, 34).unwrap();
        let out = solve(&Instance::Sign(q), &SolveOptions::default()).unwrap();
        let bf = out.report.get(BoundName::BruteForce).unwrap();
        assert_eq!(bf.value, 34.0);
        assert!(out.report.chain_violations(1e-4).is_empty(), "{:?}", out.report);
        assert_eq!(out.report.get(BoundName::LpBox).unwrap().status, BoundStatus::Converged);
        assert_eq!(out.certificate.label(), "Feasible");
        let csv = solve_csv(&out, false);
        assert!(csv.starts_with(SOLVE_CSV_HEADER));
        assert_eq!(csv.lines().count(), 8);
        assert!(solve_json(&out, false).contains("\"certificate\": \"Feasible\""));
    }

    #[test]
    fn quadratic_skips_lp() {
        let q = instances::quadratic_knapsack_random(6, 5.0, 1, 0.5, 2).unwrap();
        let out = solve(&Instance::Sign(q), &SolveOptions::default()).unwrap();
        let lp = out.report.get(BoundName::LpBox).unwrap();
        assert_eq!(lp.status, BoundStatus::Skipped);
        assert!(solve_table(&out, false).contains("lp_box needs F = 0"));
    }

    #[test]
    fn kcluster_units_and_certificate() {
        let (_, q) = instances::kcluster(6, 7, 0.3, 4).unwrap();
        let out = solve(&Instance::Sign(q), &SolveOptions::default()).unwrap();
        assert_eq!(out.certificate.label(), "InfeasibleByGap");
        let (_, q) = instances::kcluster(6, 2, 0.3, 4).unwrap();
        let out = solve(&Instance::Sign(q.clone()), &SolveOptions::default()).unwrap();
        let bf = instances::brute_force(&q).unwrap();
        let e = out.report.get(BoundName::BruteForce).unwrap();
        assert!((e.value - q.to_original(bf.value)).abs() < 1e-12);
        // The DNN value is reported in the same units.
        let dnn = out.report.get(BoundName::CopositiveDnn).unwrap();
        assert!(dnn.value <= e.value + 1e-4 * (1.0 + e.value.abs()));
    }

    #[test]
    fn sweep_rows_in_order() {
        let base = GeneratorSpec { family: Family::KnapsackFixed, n: 4, ..Default::default() };
        let sweep = Sweep { base, axis: SweepAxis::B, values: vec![-2, 0, 2], seeds: vec![0] };
        let opts = SolveOptions { selectors: vec![BoundName::MaxcutShorMin, BoundName::LpBox], ..Default::default() };
        let rows = run_sweep(&sweep, &opts).unwrap();
        let params: Vec<i64> = rows.iter().map(|r| r.param).collect();
        assert_eq!(params, vec![-2, 0, 2]);
        let csv = sweep_csv(SweepAxis::B, &opts.selectors, &rows);
        assert!(csv.starts_with("b,seed,maxcut_shor_min,maxcut_shor_min_status,lp_box,lp_box_status,brute_force"));
        assert_eq!(csv.lines().count(), 4);
        let serial = SolveOptions { exec: Exec::Serial, ..opts.clone() };
        assert_eq!(csv, sweep_csv(SweepAxis::B, &opts.selectors, &run_sweep(&sweep, &serial).unwrap()));
        assert!(run_sweep(&Sweep { values: vec![], ..sweep }, &opts).is_err());
    }

    #[test]
    fn serial_and_parallel_reports_agree() {
        let inst = Instance::Sign(instances::knapsack_random(8, 10.0, 2, 4).unwrap());
        let par = solve(&inst, &SolveOptions::default()).unwrap();
        let ser = solve(&inst, &SolveOptions { exec: Exec::Serial, ..Default::default() }).unwrap();
        assert_eq!(solve_csv(&par, false), solve_csv(&ser, false));
        assert_eq!(rounding_text(&par), rounding_text(&ser));
    }
}
