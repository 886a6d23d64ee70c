//! Campaign engine: a JSON plan names an identity, an integer grid per label,
//! a list of q values and a tolerance; every grid point becomes one
//! [`CaseResult`], emitted in grid order as JSON lines and closed by a summary.

mod registry;

pub use registry::{evaluate, Identity, Outcome, Params};

use crate::error::{QError, Result};
use crate::qcore::{QContext, TruncationPolicy, Window};
use crate::scalar::{BigFloat, Real};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

/// One label's values: `[lo, hi]` (inclusive), `{"values": [...]}`, or a bare integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridAxis {
    Range([i64; 2]),
    Values { values: Vec<i64> },
    Single(i64),
}

impl GridAxis {
    pub fn points(&self) -> Vec<i64> {
        match self {
            GridAxis::Range([lo, hi]) => (*lo..=*hi).collect(),
            GridAxis::Values { values } => values.clone(),
            GridAxis::Single(v) => vec![*v],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QList {
    One(f64),
    Many(Vec<f64>),
}

impl QList {
    pub fn values(&self) -> Vec<f64> {
        match self {
            QList::One(q) => vec![*q],
            QList::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(default)]
    pub max_terms: Option<usize>,
    #[serde(default)]
    pub tail_tol: Option<f64>,
    #[serde(default)]
    pub window: Option<[i64; 2]>,
    #[serde(default)]
    pub adaptive: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignPlan {
    pub identity: String,
    pub grid: BTreeMap<String, GridAxis>,
    pub q: QList,
    pub tol: f64,
    #[serde(default)]
    pub truncation: Option<TruncationSpec>,
    /// Working decimal digits; above 15 the wide scalar type is used.
    #[serde(default)]
    pub precision: Option<u32>,
}

/// A plan file holds either a single plan or `{"campaigns": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanFile {
    Many { campaigns: Vec<CampaignPlan> },
    One(CampaignPlan),
}

impl PlanFile {
    pub fn parse(text: &str) -> Result<Vec<CampaignPlan>> {
        let f: PlanFile = serde_json::from_str(text).map_err(|e| QError::PlanInvalid(e.to_string()))?;
        Ok(match f {
            PlanFile::Many { campaigns } => campaigns,
            PlanFile::One(p) => vec![p],
        })
    }
}

/// Command-line overrides applied on top of every plan.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub window: Option<(i64, i64)>,
    pub precision: Option<u32>,
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Wide,
}

impl Precision {
    pub fn for_digits(d: u32) -> Result<Self> {
        match d {
            0..=15 => Ok(Precision::Double),
            d if d <= BigFloat::DIGITS => Ok(Precision::Wide),
            d => Err(QError::PlanInvalid(format!(
                "precision {d} exceeds the {} digits available",
                BigFloat::DIGITS
            ))),
        }
    }
}

fn build_policy(t: Option<&TruncationSpec>, ov: &Overrides) -> Result<TruncationPolicy> {
    let mut policy = TruncationPolicy::default();
    if let Some(t) = t {
        if let Some(m) = t.max_terms {
            policy.max_terms = m;
        }
        if let Some(tt) = t.tail_tol {
            policy.tail_tol = tt;
        }
        if let Some([lo, hi]) = t.window {
            policy.window = Window::Adaptive { lo, hi };
        }
        if t.adaptive == Some(false) {
            let (lo, hi) = policy.window.bounds();
            policy.window = Window::Fixed { lo, hi };
        }
    }
    if let Some(m) = ov.max_terms {
        policy.max_terms = m;
    }
    if let Some((lo, hi)) = ov.window {
        policy.window = match policy.window {
            Window::Fixed { .. } => Window::Fixed { lo, hi },
            Window::Adaptive { .. } => Window::Adaptive { lo, hi },
        };
    }
    let (lo, hi) = policy.window.bounds();
    if lo > hi {
        return Err(QError::PlanInvalid(format!("window {lo}:{hi} is empty")));
    }
    Ok(policy)
}

/// A validated plan: everything needed to run the cases.
#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub identity: Identity,
    pub grid: Vec<(String, Vec<i64>)>,
    pub q: Vec<f64>,
    pub tol: f64,
    pub policy: TruncationPolicy,
    pub precision: Precision,
}

impl Campaign {
    pub fn from_plan(plan: &CampaignPlan, ov: &Overrides) -> Result<Self> {
        let identity: Identity = plan.identity.parse()?;
        if plan.grid.is_empty() {
            return Err(QError::PlanInvalid("empty grid".into()));
        }
        let mut grid = Vec::new();
        for (label, axis) in &plan.grid {
            if !identity.accepts_label(label) {
                return Err(QError::PlanInvalid(format!("`{label}` is not a label of {identity}")));
            }
            let pts = axis.points();
            if pts.is_empty() {
                return Err(QError::PlanInvalid(format!("label `{label}` has no values")));
            }
            grid.push((label.clone(), pts));
        }
        let q = plan.q.values();
        if q.is_empty() || q.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
            return Err(QError::PlanInvalid("q values must be non-empty and lie in (0,1)".into()));
        }
        let tol = ov.tol.unwrap_or(plan.tol);
        if tol.is_nan() || tol < 0.0 {
            return Err(QError::PlanInvalid("tolerance must be a non-negative number".into()));
        }
        let policy = build_policy(plan.truncation.as_ref(), ov)?;
        let precision = Precision::for_digits(ov.precision.or(plan.precision).unwrap_or(15))?;
        Ok(Self {
            identity,
            grid,
            q,
            tol,
            policy,
            precision,
        })
    }

    /// Every (q, assignment) pair in deterministic order: q outermost, then
    /// labels in lexicographic order with the last label varying fastest.
    pub fn points(&self) -> Vec<(f64, Params)> {
        let mut assignments = vec![Params::new()];
        for (label, values) in &self.grid {
            assignments = assignments
                .into_iter()
                .flat_map(|a| {
                    values.iter().map(move |v| {
                        let mut b = a.clone();
                        b.insert(label.clone(), *v);
                        b
                    })
                })
                .collect();
        }
        self.q
            .iter()
            .flat_map(|&q| assignments.iter().map(move |a| (q, a.clone())))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub identity: String,
    pub params: Params,
    pub q: f64,
    pub residual: f64,
    pub est_error: f64,
    pub converged: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

/// Evaluate one case. Evaluation errors become a failed case, never a panic
/// or an abort.
pub fn eval_single(
    identity: Identity,
    params: &Params,
    q: f64,
    policy: &TruncationPolicy,
    precision: Precision,
    tol: f64,
) -> CaseResult {
    let start = Instant::now();
    let out = match precision {
        Precision::Double => QContext::<f64>::new(q).and_then(|c| evaluate(identity, params, c, policy)),
        Precision::Wide => QContext::<BigFloat>::new(q).and_then(|c| evaluate(identity, params, c, policy)),
    };
    let (outcome, error) = match out {
        Ok(o) => (o, None),
        Err(e) => (
            Outcome {
                residual: f64::INFINITY,
                est_error: f64::INFINITY,
                converged: false,
            },
            Some(e.to_string()),
        ),
    };
    // a zero tolerance is unattainable by contract, even for exact identities
    let pass = error.is_none() && outcome.converged && tol > 0.0 && outcome.residual <= tol;
    CaseResult {
        identity: identity.id().to_string(),
        params: params.clone(),
        q,
        residual: outcome.residual,
        est_error: outcome.est_error,
        converged: outcome.converged,
        pass,
        error,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Validate and run a single assignment; unlike a plan, an empty assignment
/// (all labels at their defaults) is allowed.
pub fn eval_request(identity: &str, params: &Params, q: f64, tol: f64, ov: &Overrides) -> Result<CaseResult> {
    let id: Identity = identity.parse()?;
    if let Some(bad) = params.keys().find(|l| !id.accepts_label(l)) {
        return Err(QError::PlanInvalid(format!("`{bad}` is not a label of {id}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(QError::PlanInvalid(format!("q = {q} outside (0,1)")));
    }
    let policy = build_policy(None, ov)?;
    let precision = Precision::for_digits(ov.precision.unwrap_or(15))?;
    Ok(eval_single(id, params, q, &policy, precision, ov.tol.unwrap_or(tol)))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Breakdown {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub identity_breakdown: BTreeMap<String, Breakdown>,
    /// Indices (in report order) of the failed cases.
    pub failures: Vec<usize>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a Summary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub cases: Vec<CaseResult>,
    pub summary: Summary,
}

impl Report {
    pub fn from_cases(cases: Vec<CaseResult>) -> Self {
        let mut s = Summary::default();
        for (i, c) in cases.iter().enumerate() {
            s.total += 1;
            let b = s.identity_breakdown.entry(c.identity.clone()).or_default();
            b.total += 1;
            if c.pass {
                s.passed += 1;
                b.passed += 1;
            } else {
                s.failed += 1;
                b.failed += 1;
                s.failures.push(i);
            }
            s.max_residual = s.max_residual.max(c.residual);
            b.max_residual = b.max_residual.max(c.residual);
        }
        Report { cases, summary: s }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// JSON lines: one object per case, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for c in &self.cases {
            serde_json::to_writer(&mut w, c)?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut w, &SummaryLine { summary: &self.summary })?;
        w.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

/// Validate every plan, then run all cases (in parallel when `jobs` > 1),
/// keeping grid order in the report.
pub fn run_campaign(plans: &[CampaignPlan], ov: &Overrides) -> Result<Report> {
    if plans.is_empty() {
        return Err(QError::PlanInvalid("no campaigns in plan".into()));
    }
    let campaigns: Vec<Campaign> = plans.iter().map(|p| Campaign::from_plan(p, ov)).collect::<Result<_>>()?;
    let work: Vec<(&Campaign, f64, Params)> = campaigns
        .iter()
        .flat_map(|c| c.points().into_iter().map(move |(q, p)| (c, q, p)))
        .collect();
    let run = |(c, q, p): &(&Campaign, f64, Params)| eval_single(c.identity, p, *q, &c.policy, c.precision, c.tol);
    let jobs = ov.jobs.unwrap_or(1).max(1);
    let cases = if jobs == 1 {
        work.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| QError::PlanInvalid(e.to_string()))?;
        pool.install(|| work.par_iter().map(run).collect())
    };
    Ok(Report::from_cases(cases))
}

/// Blank out the timing field so two reports can be compared byte for byte.
pub fn strip_timing(jsonl: &str) -> String {
    jsonl
        .lines()
        .map(|l| match serde_json::from_str::<serde_json::Value>(l) {
            Ok(mut v) => {
                if let Some(o) = v.as_object_mut() {
                    o.remove("wall_time_ms");
                }
                v.to_string()
            }
            Err(_) => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(json: &str) -> Vec<CampaignPlan> {
        PlanFile::parse(json).unwrap()
    }

    #[test]
    fn empty_grid_is_invalid() {
        let p = plan(r#"{"identity":"hankel-orthogonality","grid":{},"q":0.5,"tol":1e-8}"#);
        assert!(matches!(run_campaign(&p, &Overrides::default()), Err(QError::PlanInvalid(_))));
    }

    #[test]
    fn unknown_identity_is_invalid() {
        let p = plan(r#"{"identity":"nope","grid":{"n":[0,1]},"q":0.5,"tol":1e-8}"#);
        assert!(matches!(run_campaign(&p, &Overrides::default()), Err(QError::PlanInvalid(_))));
    }

    #[test]
    fn bad_q_is_invalid() {
        let p = plan(r#"{"identity":"genfun","grid":{"nu":1},"q":[0.5,1.0],"tol":1e-8}"#);
        assert!(run_campaign(&p, &Overrides::default()).is_err());
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let p = plan(r#"{"identity":"hankel-orthogonality","grid":{"n":[0,1],"m":[0,1]},"q":[0.3,0.5],"tol":1e-8}"#);
        let c = Campaign::from_plan(&p[0], &Overrides::default()).unwrap();
        let pts = c.points();
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[1].1["n"], 1);
        assert_eq!(pts[2].1["m"], 1);
        assert_eq!(pts[4].0, 0.5);
    }

    #[test]
    fn zero_tolerance_fails_everything() {
        let p = plan(r#"{"identity":"multi-duality","grid":{"nu1":[0,1]},"q":0.5,"tol":0}"#);
        let r = run_campaign(&p, &Overrides::default()).unwrap();
        assert_eq!(r.summary.failed, 2);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn errors_are_recorded_not_raised() {
        let p = plan(r#"{"identity":"multi-be","grid":{"k":1},"q":0.5,"tol":1e-8}"#);
        let r = run_campaign(&p, &Overrides::default()).unwrap();
        assert!(!r.cases[0].pass);
        assert!(r.cases[0].error.is_some());
    }
}
