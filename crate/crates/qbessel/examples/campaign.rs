//! Running a verification campaign from a JSON plan, the same path the
//! `qverify` binary takes.

use qbessel::verifier::{run_campaign, Identity, Overrides, PlanFile};

const PLAN: &str = r#"{"campaigns": [
  {"identity": "hankel-orthogonality", "grid": {"nu": [0, 1], "m": [-2, 2], "n": [-2, 2]}, "q": [0.3, 0.5], "tol": 1e-10},
  {"identity": "biedenharn-elliott", "grid": {"P": [-1, 1], "Q": [-1, 1]}, "q": 0.5, "tol": 1e-8},
  {"identity": "backcoupling", "grid": {"p1": [-1, 1]}, "q": 0.5, "tol": 1e-8}
]}"#;

fn main() -> qbessel::Result<()> {
    for id in Identity::ALL.iter().take(4) {
        println!("{:<22} {:?}", id.id(), id.labels());
    }
    let plans = PlanFile::parse(PLAN)?;
    let report = run_campaign(&plans, &Overrides { jobs: Some(4), ..Default::default() })?;
    for c in report.cases.iter().filter(|c| !c.pass).take(3) {
        println!("FAIL {} {:?} residual {:.2e}", c.identity, c.params, c.residual);
    }
    let s = &report.summary;
    println!("{} cases, {} passed, {} failed, max residual {:.2e}", s.total, s.passed, s.failed, s.max_residual);
    for (id, b) in &s.identity_breakdown {
        println!("  {id:<22} {}/{}", b.passed, b.total);
    }
    println!("exit code would be {}", report.exit_code());
    Ok(())
}
