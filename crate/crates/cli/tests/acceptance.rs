//! One line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{printed, transcriptions as tr};
use tightframe::embeddings::golden;
use tightframe::embeddings::height::hessian_continuation_check;
use tightframe::embeddings::hermitian::{
    affine_span_dimension, random_exact_vector, random_vector, veronese_point,
};
use tightframe::embeddings::maurer_cartan::{derive_maurer_cartan, differential_oracle_error};
use tightframe::embeddings::survey::tightness_survey;
use tightframe::normal_form::hurwitz_gram_defect;
use tightframe::pipeline::rule_system;

const K2_BUDGET: Duration = Duration::from_secs(5);
const K4_BUDGET: Duration = Duration::from_secs(60);
const PIPELINE_BUDGET: Duration = Duration::from_secs(120);
/// Relative tolerance on printed equation counts.
const COUNT_TOLERANCE: f64 = 0.20;
const INVARIANT_TOLERANCE: f64 = 1e-12;
const ORACLE_TOLERANCE: f64 = 1e-8;
const HEIGHT_TRIALS: usize = 50;
const ORACLE_CURVES: usize = 10;
const PROPERTY_CASES: u32 = 64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(count: usize, printed: usize) -> bool {
    (count as f64 - printed as f64).abs() <= COUNT_TOLERANCE * printed as f64
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let t = start.elapsed();
    ensure(t < budget, format!("{detail}; took {t:.2?}, budget {budget:?}"))?;
    Ok(format!("{detail} in {t:.2?}"))
}

fn golden_k2() -> Outcome {
    timed(K2_BUDGET, || {
        let m = derive_maurer_cartan(2).map_err(|e| e.to_string())?;
        ensure(m == golden::complex_plane(), "derived matrix differs from the transcription")?;
        Ok("9x9 matrix equal entrywise".into())
    })
}

fn golden_k4() -> Outcome {
    timed(K4_BUDGET, || {
        let m = derive_maurer_cartan(4).map_err(|e| e.to_string())?;
        let bad = golden::pattern_mismatches(&golden::quaternion_plane_pattern(), &m);
        ensure(bad.is_empty(), format!("entries differ: {bad:?}"))?;
        Ok("15x15 matrix equal entrywise".into())
    })
}

fn normal_form_transcriptions() -> Outcome {
    let q = tr::quadratic_form_mismatches();
    ensure(q.is_empty(), format!("quadratic forms differ for mu in {q:?}"))?;
    let (rules, same_len) = tr::rule_mismatches();
    ensure(rules.is_empty() && same_len, format!("rules differ at {rules:?}"))?;
    Ok("4 quadratic forms, 16 rules".into())
}

fn equation_generation() -> Outcome {
    let derived = tr::first_rule_equations();
    ensure(derived.len() == 6, format!("{} equations from the first rule", derived.len()))?;
    ensure(derived == tr::corrected_first_rule_equations(), "first-rule equations differ")?;
    let missing = tr::printed_lines_missing(&derived);
    let sys = rule_system(2).map_err(|e| e.to_string())?;
    let (generated, nonzero) = (sys.generated_count(), sys.nonzero_count());
    ensure(
        generated == printed::PRINTED_EQUATION_COUNT && nonzero == printed::PRINTED_EQUATION_COUNT,
        format!("{generated} generated, {nonzero} nonzero"),
    )?;
    Ok(format!(
        "6 equations (printed lines {:?} corrected), {generated} generated / {nonzero} nonzero",
        missing.iter().map(|i| i + 1).collect::<Vec<_>>()
    ))
}

fn iiihat() -> Outcome {
    ensure(tr::iiihat_reproduced(), "replayed relations do not span the printed constraints")?;
    Ok("2 vanishing entries and 3 relations reproduced".into())
}

fn full_pipeline() -> Outcome {
    timed(PIPELINE_BUDGET, || {
        let out = Command::new(env!("CARGO_BIN_EXE_tightframe"))
            .args(["verify-proof", "--k", "2", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), format!("verify-proof exited {:?}", out.status.code()))?;
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let v = &report["verdict"];
        ensure(v["matches"] == true, "final matrix does not match")?;
        let stages = report["stages"].as_array().cloned().unwrap_or_default();
        let changes = stages.iter().filter(|s| !s["shape"].is_null()).count();
        ensure(changes == 4, format!("{changes} frame changes recorded"))?;
        let published: Vec<&serde_json::Value> = stages.iter().flat_map(|s| s["published"].as_array().into_iter().flatten()).collect();
        let failing: Vec<&str> =
            published.iter().filter(|c| c["agrees"] != true).filter_map(|c| c["parameter"].as_str()).collect();
        ensure(failing == ["a_2_0"], format!("published values failing: {failing:?}"))?;
        let count = v["final_equations"]["generated"].as_u64().unwrap_or(0) as usize;
        ensure(within(count, printed::PRINTED_FINAL_COUNT), format!("{count} final equations"))?;
        Ok(format!(
            "exit 0, 4 changes, {}/{} published values agree (a_2 misprint), {count} final equations vs ~{}",
            published.len() - 1,
            published.len(),
            printed::PRINTED_FINAL_COUNT
        ))
    })
}

fn hurwitz() -> Outcome {
    for k in [1, 2, 4, 8] {
        let defect = hurwitz_gram_defect(k).map_err(|e| e.to_string())?;
        ensure(defect.iter().flatten().all(|p| p.is_zero()), format!("k = {k} fails"))?;
    }
    Ok("exact for k = 1, 2, 4, 8".into())
}

fn run_property<S: proptest::strategy::Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn properties() -> Outcome {
    use proptest::prelude::*;
    run_property("d^2 = 0", (prop::sample::select(vec![5usize, 8, 14]), 0usize..15, 0usize..15), |(n, r, c)| {
        common::d_squared(n, r, c)
    })?;
    run_property(
        "wedge",
        (common::one_form(6), common::one_form(6), common::one_form(6), -5i64..=5),
        |(f, g, h, c)| common::wedge_laws(&f, &g, &h, c),
    )?;
    run_property("frame change", (common::shifts(5), common::shifts(5)), |(a, b)| common::frame_laws(&a, &b))?;
    run_property("solver", common::linear_system(5), |(rows, consistent)| common::solver_soundness(&rows, consistent))?;
    Ok(format!("4 suites x {PROPERTY_CASES} cases"))
}

fn numeric_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for k in [1, 2, 4, 8] {
        for _ in 0..20 {
            let p = veronese_point(&random_vector(k, &mut rng), 0).map_err(|e| e.to_string())?;
            worst = worst.max(p.invariant_defect());
            let e = veronese_point(&random_exact_vector(k, &mut rng), 0).map_err(|e| e.to_string())?;
            ensure(e.satisfies_invariants(), format!("exact invariants fail for k = {k}"))?;
        }
    }
    ensure(worst < INVARIANT_TOLERANCE, format!("float invariant defect {worst:e}"))?;
    let mut spans = Vec::new();
    for k in [1, 2, 4] {
        let points: Vec<_> = (0..4 * (3 * k + 4))
            .map(|_| veronese_point(&random_vector(k, &mut rng), 0))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let d = affine_span_dimension(k, &points).map_err(|e| e.to_string())?;
        ensure(d == 3 * k + 2, format!("span {d} for k = {k}"))?;
        spans.push(d);
        let survey = tightness_survey(k, HEIGHT_TRIALS, 7 + k as u64).map_err(|e| e.to_string())?;
        ensure(
            survey.perfect_runs == HEIGHT_TRIALS,
            format!("k = {k}: {}/{HEIGHT_TRIALS} heights with indices 0, k, 2k", survey.perfect_runs),
        )?;
    }
    let mut hessian = 0.0f64;
    for k in [1, 2, 4] {
        for _ in 0..3 {
            let p = random_vector(k, &mut rng);
            let q = random_vector(k, &mut rng);
            let xi: Vec<f64> = (0..k + 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let c = hessian_continuation_check(&p, &q, &xi).map_err(|e| e.to_string())?;
            ensure(c.holds, format!("Hessian identity off by {:e} for k = {k}", c.max_error))?;
            hessian = hessian.max(c.max_error);
        }
    }
    Ok(format!(
        "invariant defect {worst:.1e}, spans {spans:?}, {HEIGHT_TRIALS}/{HEIGHT_TRIALS} perfect heights per k, Hessian error {hessian:.1e}"
    ))
}

fn finite_difference_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for k in [1, 2] {
        let m = derive_maurer_cartan(k).map_err(|e| e.to_string())?;
        for _ in 0..ORACLE_CURVES {
            let x0 = random_vector(k, &mut rng);
            let theta = std::array::from_fn(|_| random_vector(k, &mut rng));
            worst = worst.max(differential_oracle_error(&m, &x0, &theta));
        }
    }
    ensure(worst < ORACLE_TOLERANCE, format!("max error {worst:e}"))?;
    Ok(format!("{ORACLE_CURVES} curves per k, max error {worst:.1e}"))
}

fn octonion_generation() -> Outcome {
    let sys = rule_system(8).map_err(|e| e.to_string())?;
    let n = sys.generated_count();
    ensure(within(n, printed::PRINTED_K8_COUNT), format!("{n} generated"))?;
    Ok(format!(
        "{n} generated ({} nonzero, {} distinct) vs ~{}; staged solve not attempted",
        sys.nonzero_count(),
        sys.len(),
        printed::PRINTED_K8_COUNT
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("golden matrix k=2", golden_k2),
        ("golden matrix k=4", golden_k4),
        ("normal-form transcriptions", normal_form_transcriptions),
        ("equation generation", equation_generation),
        ("third fundamental form replay", iiihat),
        ("full pipeline k=2", full_pipeline),
        ("Hurwitz identity", hurwitz),
        ("kernel properties", properties),
        ("numeric embedding suite", numeric_suite),
        ("finite-difference oracle", finite_difference_oracle),
        ("k=8 generation size", octonion_generation),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("{:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("{:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
