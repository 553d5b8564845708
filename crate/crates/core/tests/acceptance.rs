//! Acceptance harness: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`. Tolerances and sample sizes are
//! pinned below.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::{ls_minimizer, max_abs_diff, shapley_by_orders};
use tugames::axioms::{check, Axiom, SamplePlan, Verdict};
use tugames::game::nullified_game;
use tugames::io::{emit_game, parse_game};
use tugames::sample::Generator;
use tugames::theorems::{
    dragan_average, random_affine_weights, reconstruct_from_ngc, rule_panel, verify_corollary2, verify_lemmas,
    RuleClass,
};
use tugames::transforms::NullifiedKind;
use tugames::values::{
    cis_value, ensc_value, extract_coefficients, fit_sigma, least_square_value, potential, shapley_value,
    sigma_shapley_value, LsWeights, Weights,
};
use tugames::{Game, Rational, Scalar, SolutionRule};

const TOL_IDENTITY: f64 = 1e-9;
const TOL_ORACLE: f64 = 1e-6;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(ok: bool, failure: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(failure())
    }
}

fn games<T: Scalar>(n: usize, count: usize, salt: u64) -> Vec<Game<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ salt ^ ((n as u64) << 32));
    (0..count).map(|_| Generator::Uniform.sample(n, &mut rng).unwrap()).collect()
}

fn dragan_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 3..=8 {
        for v in games::<f64>(n, 200, 1) {
            worst = worst.max(max_abs_diff(&dragan_average(&v).unwrap().0, &shapley_value(&v).0));
        }
    }
    ensure(worst <= TOL_IDENTITY, || format!("float deviation {worst:.3e}"))?;
    for n in 3..=6 {
        for (k, v) in games::<Rational>(n, 200, 1).iter().enumerate() {
            ensure(dragan_average(v).unwrap() == shapley_value(v), || format!("rational mismatch n={n} game {k}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("n=3..8 float max deviation {worst:.1e}, exact for n<=6, {:.1}s", elapsed.as_secs_f64()))
}

fn round_trip_rules<T: Scalar>() -> Vec<SolutionRule<T>> {
    let mut rules = vec![SolutionRule::shapley(), SolutionRule::cis(), SolutionRule::ensc(), SolutionRule::ed()];
    rules.extend((0..5).map(|k| SolutionRule::affine(random_affine_weights(SEED, k, None))));
    rules
}

fn sigma_round_trip_in<T: Scalar>() -> Result<f64, String> {
    let mut worst = 0.0f64;
    for rule in round_trip_rules::<T>() {
        for n in 3..=5 {
            let coeffs = extract_coefficients(&rule, n).map_err(|e| e.to_string())?;
            let sigma = fit_sigma(&coeffs).map_err(|e| format!("{}: {e}", rule.name()))?;
            ensure(sigma[n - 1].approx_eq(&T::one(), TOL_IDENTITY), || format!("{} n={n}: sigma(n) = {}", rule.name(), sigma[n - 1]))?;
            for v in games::<T>(n, 34, 2) {
                let a = rule.evaluate(&v).unwrap();
                let b = sigma_shapley_value(&v, &sigma).unwrap();
                worst = worst.max(max_abs_diff(&a.0, &b.0));
                ensure(a.approx_eq(&b, TOL_IDENTITY), || format!("{} n={n}: {a} vs {b}", rule.name()))?;
            }
        }
    }
    Ok(worst)
}

fn sigma_round_trip() -> Outcome {
    let worst = sigma_round_trip_in::<f64>()?;
    sigma_round_trip_in::<Rational>()?;
    Ok(format!("9 rules x 102 games, sigma(n)=1, float max deviation {worst:.1e}, exact in rational mode"))
}

fn expect(report: &tugames::axioms::CheckReport<f64>, expected: Verdict) -> Result<(), String> {
    ensure(report.verdict == expected, || format!("expected {expected}: {}", report.summary()))
}

fn composition_dichotomy() -> Outcome {
    let plan = SamplePlan::new(500, 3, 6, SEED);
    let panel = rule_panel::<f64>(SEED);
    let mut passed = 0;
    for p in panel.iter().filter(|p| matches!(p.class, RuleClass::Affine | RuleClass::Egalitarian)) {
        for axiom in [Axiom::Cu, Axiom::Cdi, Axiom::Cdo] {
            expect(&check(axiom, &p.rule, &plan).unwrap(), Verdict::PassedSample)?;
            passed += 1;
        }
    }
    let mut violated = 0;
    for ed in [(1, 4), (1, 2), (3, 4)] {
        let rule = SolutionRule::affine(random_affine_weights::<f64>(SEED, 3, Some(ed)));
        for axiom in [Axiom::Cu, Axiom::Cdi, Axiom::Cdo] {
            expect(&check(axiom, &rule, &plan).unwrap(), Verdict::Violated)?;
            violated += 1;
        }
    }
    Ok(format!("{passed} passing cells (500 trials), {violated} mixture cells with witnesses"))
}

fn active_consistency() -> Outcome {
    let plan = SamplePlan::new(500, 3, 6, SEED);
    let panel = rule_panel::<f64>(SEED);
    let mut cells = 0;
    for p in &panel {
        let expected = match p.class {
            RuleClass::Affine => Verdict::PassedSample,
            RuleClass::Egalitarian | RuleClass::Mixture => Verdict::Violated,
            _ => continue,
        };
        expect(&check(Axiom::Ac, &p.rule, &plan).unwrap(), expected)?;
        cells += 1;
    }
    let power = SolutionRule::power(2.0);
    let mut failures = Vec::new();
    for (axiom, expected) in
        [(Axiom::E, Verdict::PassedSample), (Axiom::Ac, Verdict::PassedSample), (Axiom::Tlb, Verdict::Violated), (Axiom::L, Verdict::Violated)]
    {
        if let Err(e) = expect(&check(axiom, &power, &plan).unwrap(), expected) {
            failures.push(format!("power:2 {axiom}: {e}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{cells} AC cells, power:2 separates AC from L"))
}

fn nullified_consistency() -> Outcome {
    use NullifiedKind::{Hm, F, M};
    let plan = SamplePlan::new(300, 3, 5, SEED);
    let pass = Verdict::PassedSample;
    let fail = Verdict::Violated;
    let cells: Vec<(SolutionRule<f64>, NullifiedKind, Verdict)> = vec![
        (SolutionRule::shapley(), Hm, pass),
        (SolutionRule::shapley(), F, fail),
        (SolutionRule::shapley(), M, fail),
        (SolutionRule::cis(), Hm, fail),
        (SolutionRule::cis(), F, pass),
        (SolutionRule::cis(), M, fail),
        (SolutionRule::ensc(), Hm, fail),
        (SolutionRule::ensc(), F, fail),
        (SolutionRule::ensc(), M, pass),
    ];
    for (rule, kind, expected) in &cells {
        expect(&check(Axiom::Ngc(*kind), rule, &plan).unwrap(), *expected)?;
    }
    let independence: Vec<(SolutionRule<f64>, Axiom, Verdict)> = vec![
        (SolutionRule::standalone(), Axiom::E, fail),
        (SolutionRule::standalone(), Axiom::Eg, pass),
        (SolutionRule::standalone(), Axiom::Ngc(F), pass),
        (SolutionRule::marginal(), Axiom::E, fail),
        (SolutionRule::marginal(), Axiom::Eg, pass),
        (SolutionRule::marginal(), Axiom::Ngc(Hm), pass),
        (SolutionRule::marginal(), Axiom::Ngc(M), pass),
        (SolutionRule::dictator(0), Axiom::E, pass),
        (SolutionRule::dictator(0), Axiom::Eg, fail),
        (SolutionRule::dictator(0), Axiom::Ngc(Hm), pass),
        (SolutionRule::dictator(0), Axiom::Ngc(F), pass),
        (SolutionRule::dictator(0), Axiom::Ngc(M), pass),
    ];
    let failures: Vec<String> = independence
        .iter()
        .filter_map(|(rule, axiom, expected)| {
            expect(&check(*axiom, rule, &plan).unwrap(), *expected).err().map(|e| format!("{} {axiom}: {e}", rule.name()))
        })
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("3x3 matrix and 12 independence claims".into())
}

fn reconstruction() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=5 {
        for v in games::<Rational>(n, 100, 6) {
            let start = Instant::now();
            let hm = reconstruct_from_ngc(NullifiedKind::Hm, &v).unwrap();
            slowest = slowest.max(start.elapsed());
            ensure(hm == shapley_value(&v), || format!("HM mismatch at n={n}"))?;
            ensure(reconstruct_from_ngc(NullifiedKind::F, &v).unwrap() == cis_value(&v), || format!("F mismatch n={n}"))?;
            ensure(reconstruct_from_ngc(NullifiedKind::M, &v).unwrap() == ensc_value(&v), || format!("M mismatch n={n}"))?;
        }
    }
    ensure(slowest < Duration::from_secs(10), || format!("HM took {slowest:?}"))?;
    Ok(format!("300 games exact, slowest HM solve {:.1}ms", slowest.as_secs_f64() * 1e3))
}

fn least_squares() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let n = 3 + case % 3;
        let v: Game<f64> = Generator::Uniform.sample(n, &mut rng).unwrap();
        let m: Vec<f64> = (0..n).map(|s| rng.gen_range(if s == 0 { 0.0625 } else { 0.0 }..2.0)).collect();
        let x = least_square_value(&v, &LsWeights::new(Weights::Fixed(m.clone()))).unwrap();
        worst = worst.max(max_abs_diff(&x.0, &ls_minimizer(&v, &m)));
    }
    ensure(worst <= TOL_ORACLE, || format!("oracle deviation {worst:.3e}"))?;

    let exact = SolutionRule::least_square(LsWeights::new(Weights::family("m", |n| {
        (1..=n).map(|s| Rational::from_ratio(s as i64 + 1, 3)).collect()
    })));
    expect_exact(check(Axiom::E, &exact, &SamplePlan::new(60, 3, 5, SEED)).unwrap())?;
    let float = SolutionRule::least_square(LsWeights::new(Weights::family("m", |n| {
        (1..=n).map(|s| (s as f64 + 1.0) / 3.0).collect()
    })));
    for n in 3..=6 {
        let coeffs = extract_coefficients(&float, n).unwrap();
        ensure(coeffs.els, || format!("n={n}: ELS conditions fail"))?;
    }
    let c2 = verify_corollary2::<f64>(&SamplePlan::new(300, 3, 5, SEED)).unwrap();
    ensure(c2.confirmed(), || c2.summary())?;
    Ok(format!("oracle max deviation {worst:.1e}, exact efficiency, corollary clauses confirmed"))
}

fn expect_exact(report: tugames::axioms::CheckReport<Rational>) -> Result<(), String> {
    ensure(report.passed(), || report.summary())
}

fn shapley_triangle_in<T: Scalar>(max_n: usize) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for n in 2..=max_n {
        for v in games::<T>(n, 100, 8) {
            let direct = shapley_value(&v);
            let orders = shapley_by_orders(&v);
            let p = potential(&v);
            let diffs: Vec<T> = (0..n).map(|i| p.clone() - potential(&nullified_game(&v, v.grand().without(i)))).collect();
            worst = worst.max(max_abs_diff(&direct.0, &orders)).max(max_abs_diff(&direct.0, &diffs));
            let agree = |other: &[T]| direct.0.iter().zip(other).all(|(a, b)| a.approx_eq(b, TOL_IDENTITY));
            ensure(agree(&orders) && agree(&diffs), || format!("disagreement at n={n}"))?;
        }
    }
    Ok(worst)
}

fn shapley_triangle() -> Outcome {
    let worst = shapley_triangle_in::<f64>(7)?;
    shapley_triangle_in::<Rational>(7)?;
    Ok(format!("n=2..7, 100 games each, float max deviation {worst:.1e}, exact in rational mode"))
}

fn lemma_suite() -> Outcome {
    let float = verify_lemmas::<f64>(&SamplePlan::new(100, 3, 6, SEED)).unwrap();
    ensure(float.confirmed(), || float.summary())?;
    let exact = verify_lemmas::<Rational>(&SamplePlan::new(100, 3, 5, SEED)).unwrap();
    ensure(exact.confirmed(), || exact.summary())?;
    Ok(format!("{} float clauses and {} exact clauses confirmed", float.clauses.len(), exact.clauses.len()))
}

fn tugames(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tugames")).args(args).output().expect("binary runs")
}

fn cli_contract() -> Outcome {
    let generators = ["uniform", "additive", "unanimity_mixture", "two_active:1,2", "single_active:1", "symmetric"];
    for k in 0..1000u64 {
        let g: Generator = generators[k as usize % generators.len()].parse().unwrap();
        let n = 2 + (k as usize % 5);
        if k % 2 == 0 {
            let v: Game<f64> = g.generate(n, k).unwrap();
            ensure(parse_game::<f64>(&emit_game(&v)).unwrap() == v, || format!("float round trip {k}"))?;
        } else {
            let v: Game<Rational> = g.generate(n, k).unwrap();
            ensure(parse_game::<Rational>(&emit_game(&v)).unwrap() == v, || format!("rational round trip {k}"))?;
        }
    }

    let dir = tempfile::TempDir::new().unwrap();
    let args = ["check", "ed", "AC", "--seed", "3", "--format", "json"];
    let first = tugames(&args);
    ensure(first.status.code() == Some(1), || format!("check ed AC exited {:?}", first.status.code()))?;
    ensure(tugames(&args).stdout == first.stdout, || "check report not byte-identical".into())?;
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    ensure(report["witness"].is_object(), || "no witness".into())?;
    let path = dir.path().join("report.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let replay = tugames(&["replay", path.to_str().unwrap()]);
    ensure(replay.status.code() == Some(1), || "witness did not replay".into())?;

    let verify = ["verify", "t2", "--format", "json"];
    let t2 = tugames(&verify);
    ensure(t2.status.code() == Some(0), || String::from_utf8_lossy(&t2.stdout).into_owned())?;
    ensure(tugames(&verify).stdout == t2.stdout, || "suite report not byte-identical".into())?;
    Ok("1000 round trips, replayable witness, verify t2 exit 0, byte-identical reports".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("psi average equals Shapley", dragan_identity),
        ("sigma round trip for ELS rules", sigma_round_trip),
        ("composition dichotomy", composition_dichotomy),
        ("active consistency and the power rule", active_consistency),
        ("nullified-game consistency table", nullified_consistency),
        ("reconstruction from NGC", reconstruction),
        ("least-square values", least_squares),
        ("Shapley triangle", shapley_triangle),
        ("lemma suite", lemma_suite),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
