//! One line per acceptance criterion. Rows the underlying statement gets wrong
//! (checked independently, see README) are listed in `known_defect`; they are
//! reported as FAIL, but only an unexpected failure, or a known defect that
//! starts passing, makes this binary exit nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use landokh::pretzel::PretzelSpec;
use landokh::verify::{run_suite, Caps, RowReport, SuiteReport};

const SEED: u64 = 2024;

// time budgets, seconds
const BUDGET_PROPS: f64 = 1.0;
const BUDGET_GMS: f64 = 60.0;
const BUDGET_JMIN: f64 = 30.0;
const BUDGET_MAIN1: f64 = 10.0;
const BUDGET_MAIN2: f64 = 20.0;
const BUDGET_GLUE: f64 = 30.0;

fn timed(suite: &str) -> (SuiteReport, Duration) {
    let t = Instant::now();
    let r = run_suite(suite, SEED, Caps::default()).expect("suite exists");
    (r, t.elapsed())
}

/// Rows whose predicted value is known to be wrong.
fn known_defect(suite: &str, row: &RowReport) -> bool {
    let spec_of = |name: &str| name.split_whitespace().next().and_then(|s| s.parse::<PretzelSpec>().ok());
    match suite {
        // P(p, q, -1): the complex is a cone, not S^0
        "main1" => spec_of(&row.name).is_some_and(|s| s.r == 1),
        // P(p, -1, -1): a single S^0, not two
        "main2" => spec_of(&row.name).is_some_and(|s| s.q == 1 && s.r == 1),
        "grading" => spec_of(&row.name).is_some_and(|s| {
            let [a, b, c] = s.signed();
            (a > 0 && b > 0 && c == -1) || (a > 0 && b == -1 && c == -1)
        }),
        _ => false,
    }
}

struct Tally {
    unexpected: usize,
}

impl Tally {
    fn line(&mut self, n: u32, title: &str, rows: &[(&str, &RowReport)], elapsed: Option<(Duration, f64)>) {
        let total = rows.len();
        let failed: Vec<&(&str, &RowReport)> = rows.iter().filter(|(_, r)| !r.pass).collect();
        let unexpected: Vec<&str> =
            failed.iter().filter(|(s, r)| !known_defect(s, r)).map(|(_, r)| r.name.as_str()).collect();
        let healed: Vec<&str> =
            rows.iter().filter(|(s, r)| r.pass && known_defect(s, r)).map(|(_, r)| r.name.as_str()).collect();
        let mut pass = failed.is_empty();
        let mut notes = vec![format!("{}/{} rows", total - failed.len(), total)];
        if let Some((t, budget)) = elapsed {
            let secs = t.as_secs_f64();
            notes.push(format!("{secs:.2}s (budget {budget}s)"));
            if secs > budget {
                pass = false;
                self.unexpected += 1;
                notes.push("over budget".into());
            }
        }
        if !failed.is_empty() {
            notes.push(format!("{} known-defect", failed.len() - unexpected.len()));
        }
        if !unexpected.is_empty() {
            self.unexpected += unexpected.len();
            notes.push(format!("unexpected: {}", unexpected.join(", ")));
        }
        if !healed.is_empty() {
            self.unexpected += healed.len();
            notes.push(format!("known defect now passes: {}", healed.join(", ")));
        }
        println!("{} criterion {n} ({title}): {}", if pass { "PASS" } else { "FAIL" }, notes.join("; "));
    }
}

fn rows<'a>(r: &'a SuiteReport) -> Vec<(&'a str, &'a RowReport)> {
    r.rows.iter().map(|x| (r.suite.as_str(), x)).collect()
}

fn main() -> ExitCode {
    let mut tally = Tally { unexpected: 0 };

    let (props, t) = timed("props");
    tally.line(1, "path/cycle table", &rows(&props), Some((t, BUDGET_PROPS)));

    let (gms, t) = timed("gms");
    tally.line(2, "brute force vs independence complex", &rows(&gms), Some((t, BUDGET_GMS)));

    let (jmin, t) = timed("jmin");
    tally.line(3, "j_min identity", &rows(&jmin), Some((t, BUDGET_JMIN)));

    let (main1, t) = timed("main1");
    tally.line(4, "deformed P(p,q,-r)", &rows(&main1), Some((t, BUDGET_MAIN1)));

    let (main2, t) = timed("main2");
    tally.line(5, "P(p,-q,-r) five cases", &rows(&main2), Some((t, BUDGET_MAIN2)));

    // torsion: every extreme group computed in 2, 4, 5
    let torsion: Vec<RowReport> = [&gms, &main1, &main2]
        .iter()
        .flat_map(|r| r.rows.iter())
        .filter_map(|r| {
            r.torsion_free.map(|tf| RowReport { name: r.name.clone(), pass: tf, detail: String::new(), torsion_free: None })
        })
        .collect();
    let torsion_rows: Vec<(&str, &RowReport)> = torsion.iter().map(|r| ("torsion", r)).collect();
    tally.line(6, "torsion-free", &torsion_rows, None);

    let (grading, _) = timed("grading");
    tally.line(7, "grading predictions", &rows(&grading), None);

    let (glue, t) = timed("glue");
    tally.line(8, "subdivision / C_8 gluing", &rows(&glue), Some((t, BUDGET_GLUE)));

    let det: Vec<RowReport> = [&props, &gms, &jmin, &main1, &main2, &grading, &glue]
        .iter()
        .map(|r| {
            let again = run_suite(&r.suite, SEED, Caps::default()).unwrap();
            RowReport {
                name: r.suite.clone(),
                pass: again.to_json() == r.to_json(),
                detail: String::new(),
                torsion_free: None,
            }
        })
        .collect();
    let det_rows: Vec<(&str, &RowReport)> = det.iter().map(|r| ("determinism", r)).collect();
    tally.line(9, "byte-identical reruns", &det_rows, None);

    if tally.unexpected == 0 {
        println!("acceptance: only documented defects fail");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} unexpected outcome(s)", tally.unexpected);
        ExitCode::FAILURE
    }
}
