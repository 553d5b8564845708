//! Executable verification suites for the characterization results, and the
//! constructive solver behind the nullified-game uniqueness argument.
//!
//! Suites are falsifiers: `confirmed_sample` means every clause held on the
//! sample, never that a result was proven.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::axioms::{check, Axiom, CheckReport, SamplePlan, Verdict};
use crate::error::{Error, Result};
use crate::game::{nullified_game, Allocation, Coalition, Game};
use crate::io::game_to_json;
use crate::sample::Generator;
use crate::scalar::{binomial, max_deviation, Scalar, TAU};
use crate::transforms::{reduce_hm, NullifiedKind};
use crate::values::{
    extract_coefficients, fit_sigma, psi_value, shapley_value, sigma_shapley_value, LsWeights, SolutionRule, Weights,
};

const PANEL_SALT: u64 = 0x9a4e_1c3d_77b2_0f15;
/// Random affine combinations with `α_n = 0` in the panel.
pub const PANEL_COMBOS: usize = 8;
/// Egalitarian weights of the panel's mixtures.
pub const MIXTURE_WEIGHTS: [(i64, i64); 4] = [(1, 4), (1, 2), (3, 4), (1, 8)];

/// How a panel rule relates to the affine family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleClass {
    /// Affine combination of `ψ^1..ψ^{n−1}` (`α_n = 0`).
    Affine,
    Egalitarian,
    /// ELS with `α_n ∈ (0,1)`.
    Mixture,
    PropDivision,
    Power,
    Standalone,
    Marginal,
    Dictator,
}

#[derive(Clone)]
pub struct PanelRule<T: Scalar> {
    pub rule: SolutionRule<T>,
    pub class: RuleClass,
}

fn panel_rng(seed: u64, index: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ PANEL_SALT);
    rng.set_stream(index * 64 + n as u64);
    rng
}

/// Random `α` with `α_n = 0`: `α_1..α_{n−2}` uniform on `[−1, 1]`, `α_{n−1}` closes
/// the sum. With `ed_weight = w`, the combination is mixed as `(1−w)α + w·e_n`.
pub fn random_affine_weights<T: Scalar>(seed: u64, index: u64, ed_weight: Option<(i64, i64)>) -> Weights<T> {
    let label = match ed_weight {
        Some((a, b)) => format!("combo{index}+ed{a}/{b}"),
        None => format!("combo{index}"),
    };
    Weights::family(label, move |n| {
        let mut rng = panel_rng(seed, index, n);
        let mut alpha: Vec<T> = (1..n - 1).map(|_| T::sample_uniform(&mut rng, -1.0, 1.0)).collect();
        let partial: T = alpha.iter().cloned().sum();
        alpha.push(T::one() - partial);
        alpha.push(T::zero());
        if let Some((a, b)) = ed_weight {
            let w = T::from_ratio(a, b);
            let keep = T::one() - w.clone();
            for x in alpha.iter_mut() {
                *x = x.clone() * keep.clone();
            }
            alpha[n - 1] = w;
        }
        alpha
    })
}

/// Random nonnegative least-square weights with `m(1) > 0`.
pub fn random_ls_weights<T: Scalar>(seed: u64, index: u64) -> LsWeights<T> {
    LsWeights::new(Weights::family(format!("m{index}"), move |n| {
        let mut rng = panel_rng(seed ^ 0x15, index, n);
        (0..n).map(|s| T::sample_uniform(&mut rng, if s == 0 { 0.0625 } else { 0.0 }, 2.0)).collect()
    }))
}

/// `m(s) = 1/C(n−2, s−1)` for `s < n`, whose least-square value is Shapley.
pub fn shapley_ls_weights<T: Scalar>() -> LsWeights<T> {
    LsWeights::new(Weights::family("shapley-m", |n| {
        (1..=n).map(|s| if s < n { T::from_ratio(1, binomial(n - 2, s - 1)) } else { T::zero() }).collect()
    }))
}

/// Canonical members, random combinations and mixtures, and the counterexample rules.
pub fn rule_panel<T: Scalar>(seed: u64) -> Vec<PanelRule<T>> {
    let mut panel = vec![
        PanelRule { rule: SolutionRule::shapley(), class: RuleClass::Affine },
        PanelRule { rule: SolutionRule::cis(), class: RuleClass::Affine },
        PanelRule { rule: SolutionRule::ensc(), class: RuleClass::Affine },
        PanelRule { rule: SolutionRule::ed(), class: RuleClass::Egalitarian },
    ];
    for k in 0..PANEL_COMBOS as u64 {
        panel.push(PanelRule {
            rule: SolutionRule::affine(random_affine_weights(seed, k, None)),
            class: RuleClass::Affine,
        });
    }
    for (k, w) in MIXTURE_WEIGHTS.iter().enumerate() {
        panel.push(PanelRule {
            rule: SolutionRule::affine(random_affine_weights(seed, k as u64, Some(*w))),
            class: RuleClass::Mixture,
        });
    }
    panel.extend([
        PanelRule { rule: SolutionRule::prop_division(), class: RuleClass::PropDivision },
        PanelRule { rule: SolutionRule::power(2.0), class: RuleClass::Power },
        PanelRule { rule: SolutionRule::standalone(), class: RuleClass::Standalone },
        PanelRule { rule: SolutionRule::marginal(), class: RuleClass::Marginal },
        PanelRule { rule: SolutionRule::dictator(0), class: RuleClass::Dictator },
    ]);
    panel
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence<T> {
    /// Checker run with the verdict the claim predicts.
    Check { expected: Verdict, report: Box<CheckReport<T>> },
    /// Two computations compared on sampled cases.
    Identity { cases: usize, max_deviation: f64, witness: Option<String> },
    /// `premises ⇒ conclusion` on sampled verdicts.
    Implication { premises: Vec<(Axiom, Verdict)>, conclusion: Box<CheckReport<T>> },
    /// Deterministic fact with an explanation.
    Fact { detail: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause<T> {
    pub claim: String,
    pub holds: bool,
    pub evidence: Evidence<T>,
}

impl<T: Scalar> Clause<T> {
    fn check(claim: String, expected: Verdict, report: CheckReport<T>) -> Self {
        Self { claim, holds: report.verdict == expected, evidence: Evidence::Check { expected, report: Box::new(report) } }
    }

    fn fact(claim: String, holds: bool, detail: String) -> Self {
        Self { claim, holds, evidence: Evidence::Fact { detail } }
    }

    pub fn to_json(&self) -> Value {
        let evidence = match &self.evidence {
            Evidence::Check { expected, report } => {
                json!({ "type": "check", "expected": expected.to_string(), "report": report.to_json() })
            }
            Evidence::Identity { cases, max_deviation, witness } => {
                json!({ "type": "identity", "cases": cases, "max_deviation": max_deviation, "witness": witness })
            }
            Evidence::Implication { premises, conclusion } => json!({
                "type": "implication",
                "premises": premises.iter().map(|(a, v)| json!({ "axiom": a.name(), "verdict": v.to_string() })).collect::<Vec<_>>(),
                "conclusion": conclusion.to_json(),
            }),
            Evidence::Fact { detail } => json!({ "type": "fact", "detail": detail }),
        };
        json!({ "claim": self.claim, "holds": self.holds, "evidence": evidence })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    ConfirmedSample,
    Refuted,
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ConfirmedSample => "confirmed_sample",
            Self::Refuted => "refuted",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult<T> {
    pub theorem: String,
    pub clauses: Vec<Clause<T>>,
    pub overall: Overall,
}

impl<T: Scalar> SuiteResult<T> {
    fn new(theorem: &str, clauses: Vec<Clause<T>>) -> Self {
        let overall = if clauses.iter().all(|c| c.holds) { Overall::ConfirmedSample } else { Overall::Refuted };
        Self { theorem: theorem.to_string(), clauses, overall }
    }

    pub fn confirmed(&self) -> bool {
        self.overall == Overall::ConfirmedSample
    }

    pub fn failing(&self) -> impl Iterator<Item = &Clause<T>> {
        self.clauses.iter().filter(|c| !c.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem,
            "overall": self.overall.to_string(),
            "clauses": self.clauses.iter().map(Clause::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}\n", self.theorem, self.overall);
        for c in &self.clauses {
            out.push_str(&format!("  [{}] {}\n", if c.holds { "ok" } else { "FAIL" }, c.claim));
            if !c.holds {
                match &c.evidence {
                    Evidence::Check { report, .. } | Evidence::Implication { conclusion: report, .. } => {
                        for line in report.summary().lines() {
                            out.push_str(&format!("        {line}\n"));
                        }
                    }
                    Evidence::Identity { max_deviation, witness, .. } => {
                        out.push_str(&format!("        max deviation {max_deviation:.3e}"));
                        if let Some(w) = witness {
                            out.push_str(&format!("; {w}"));
                        }
                        out.push('\n');
                    }
                    Evidence::Fact { detail } => out.push_str(&format!("        {detail}\n")),
                }
            }
        }
        out
    }
}

/// Suite identifiers accepted by [`verify`].
pub const SUITES: [&str; 6] = ["t1", "t2", "t3", "c2", "t4", "lemmas"];

pub fn verify<T: Scalar>(suite: &str, plan: &SamplePlan) -> Result<SuiteResult<T>> {
    match suite.trim().to_ascii_lowercase().as_str() {
        "t1" | "theorem1" => verify_theorem1(plan),
        "t2" | "theorem2" => verify_theorem2(plan),
        "t3" | "theorem3" => verify_theorem3(plan),
        "c2" | "corollary2" => verify_corollary2(plan),
        "t4" | "theorem4" => verify_theorem4(plan),
        "lemmas" => verify_lemmas(plan),
        _ => Err(Error::UnknownSuite(suite.to_string())),
    }
}

/// Runs checker jobs in parallel, preserving job order.
fn run_checks<T: Scalar>(
    jobs: Vec<(&SolutionRule<T>, Axiom)>,
    plan: &SamplePlan,
) -> Result<Vec<CheckReport<T>>> {
    jobs.into_par_iter().map(|(rule, axiom)| check(axiom, rule, plan)).collect()
}

/// Compares two computations over sampled games.
fn identity_clause<T: Scalar>(
    claim: String,
    plan: &SamplePlan,
    cases: usize,
    generator: Generator,
    compare: impl Fn(&Game<T>) -> Result<(Vec<T>, Vec<T>)> + Sync,
) -> Result<Clause<T>> {
    type Case<T> = (usize, Game<T>, Vec<T>, Vec<T>);
    let results: Vec<Case<T>> = (0..cases)
        .into_par_iter()
        .map(|k| {
            let n = plan.n_for_trial(k);
            let v = generator.sample_in(n, &mut plan.rng_for_trial(k), plan.worth_range)?;
            let (a, b) = compare(&v)?;
            Ok((k, v, a, b))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    let mut witness = None;
    for (k, v, a, b) in &results {
        worst = worst.max(max_deviation(a, b));
        let equal = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, TAU));
        if !equal && witness.is_none() {
            witness = Some(format!(
                "case {k}: {:?} vs {:?} on {}",
                a.iter().map(ToString::to_string).collect::<Vec<_>>(),
                b.iter().map(ToString::to_string).collect::<Vec<_>>(),
                game_to_json(v)
            ));
        }
    }
    Ok(Clause { claim, holds: witness.is_none(), evidence: Evidence::Identity { cases, max_deviation: worst, witness } })
}

fn els_rules<T: Scalar>(seed: u64) -> Vec<SolutionRule<T>> {
    let mut rules = vec![SolutionRule::shapley(), SolutionRule::cis(), SolutionRule::ensc(), SolutionRule::ed()];
    for k in 0..5 {
        rules.push(SolutionRule::affine(random_affine_weights(seed, k, None)));
    }
    rules.push(SolutionRule::affine(random_affine_weights(seed, 5, Some((1, 2)))));
    rules.push(SolutionRule::least_square(LsWeights::new(Weights::family("ones", |n| vec![T::one(); n]))));
    rules
}

/// Coefficient extraction, σ fitting and σ-Shapley round trip for ELS rules;
/// conversely, σ-Shapley with `σ(n) = 1` is efficient, linear and symmetric.
pub fn verify_theorem1<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    let mut clauses = Vec::new();
    for rule in els_rules::<T>(plan.seed) {
        let mut sigmas = BTreeMap::new();
        let mut problems = Vec::new();
        for n in plan.n_min..=plan.n_max {
            let coeffs = extract_coefficients(&rule, n)?;
            if !coeffs.els {
                problems.push(format!("n={n}: coefficients fail p_n = 1/n or q_k = -k/(n-k) p_k"));
                continue;
            }
            let sigma = fit_sigma(&coeffs)?;
            if !sigma[n - 1].approx_eq(&T::one(), TAU) {
                problems.push(format!("n={n}: sigma(n) = {}", sigma[n - 1]));
            }
            sigmas.insert(n, sigma);
        }
        let shown: Vec<String> = sigmas
            .iter()
            .map(|(n, s)| format!("n={n}: [{}]", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        clauses.push(Clause::fact(
            format!("{}: ELS coefficient form with sigma(n) = 1", rule.name()),
            problems.is_empty(),
            if problems.is_empty() { format!("sigma {}", shown.join("; ")) } else { problems.join("; ") },
        ));
        if problems.is_empty() {
            clauses.push(identity_clause(
                format!("{}: sigma-Shapley with the fitted sigma reproduces the rule", rule.name()),
                plan,
                plan.trials,
                Generator::Uniform,
                |v| Ok((rule.evaluate(v)?.0, sigma_shapley_value(v, &sigmas[&v.n()])?.0)),
            )?);
        }
    }

    let sigma_family = |index: u64, top: (i64, i64)| {
        let seed = plan.seed;
        Weights::family(format!("sigma{index}"), move |n| {
            let mut rng = panel_rng(seed ^ 0x51, index, n);
            let mut sigma: Vec<T> = (1..n).map(|_| T::sample_uniform(&mut rng, -2.0, 2.0)).collect();
            sigma.push(T::from_ratio(top.0, top.1));
            sigma
        })
    };
    for index in 0..2 {
        let rule = SolutionRule::sigma_shapley(sigma_family(index, (1, 1)));
        let reports = run_checks(vec![(&rule, Axiom::E), (&rule, Axiom::L), (&rule, Axiom::Sym)], plan)?;
        for report in reports {
            clauses.push(Clause::check(
                format!("random sigma with sigma(n) = 1 satisfies {}", report.axiom),
                Verdict::PassedSample,
                report,
            ));
        }
    }
    let doubled = sigma_family(7, (2, 1));
    clauses.push(identity_clause(
        "random sigma with sigma(n) = 2: total payoff is 2 v(N)".into(),
        plan,
        plan.trials,
        Generator::Uniform,
        |v| {
            let total = sigma_shapley_value(v, &doubled.resolve(v.n())?)?.total();
            Ok((vec![total], vec![T::from_i64(2) * v.grand_worth().clone()]))
        },
    )?);
    Ok(SuiteResult::new("theorem1", clauses))
}

/// CU, CD_I and CD_O hold exactly for the affine combinations with `α_n = 0` and ED.
pub fn verify_theorem2<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    let panel: Vec<PanelRule<T>> = rule_panel(plan.seed)
        .into_iter()
        .filter(|p| matches!(p.class, RuleClass::Affine | RuleClass::Egalitarian | RuleClass::Mixture | RuleClass::PropDivision))
        .collect();
    let axioms = [Axiom::Cu, Axiom::Cdi, Axiom::Cdo];
    let jobs = panel.iter().flat_map(|p| axioms.iter().map(move |a| (&p.rule, *a))).collect();
    let reports = run_checks(jobs, plan)?;
    let clauses = panel
        .iter()
        .flat_map(|p| axioms.iter().map(move |a| (p, *a)))
        .zip(reports)
        .map(|((p, axiom), report)| {
            let expected = match (p.class, axiom) {
                (RuleClass::Affine | RuleClass::Egalitarian, _) => Verdict::PassedSample,
                (RuleClass::Mixture, _) => Verdict::Violated,
                // Proportional division is not linear, so it sits outside the dichotomy.
                (_, Axiom::Cdo) => Verdict::Violated,
                _ => Verdict::PassedSample,
            };
            let claim = match expected {
                Verdict::PassedSample => format!("{} satisfies {axiom}", p.rule.name()),
                Verdict::Violated => format!("{} violates {axiom}", p.rule.name()),
            };
            Clause::check(claim, expected, report)
        })
        .collect();
    Ok(SuiteResult::new("theorem2", clauses))
}

fn verdict_claim(rule: &str, axiom: Axiom, expected: Verdict) -> String {
    match expected {
        Verdict::PassedSample => format!("{rule} satisfies {axiom}"),
        Verdict::Violated => format!("{rule} violates {axiom}"),
    }
}

/// Material implication over sampled verdicts.
fn implication_clause<T: Scalar>(
    label: &str,
    rule: &str,
    premises: &[(Axiom, &CheckReport<T>)],
    conclusion: &CheckReport<T>,
) -> Clause<T> {
    let applicable = premises.iter().all(|(_, r)| r.passed());
    let names: Vec<&str> = premises.iter().map(|(a, _)| a.name()).collect();
    let claim = if applicable {
        format!("{label}: {rule} satisfies {}, so it satisfies {}", names.join(", "), conclusion.axiom)
    } else {
        format!("{label}: not applicable to {rule} (premises {} not all satisfied)", names.join(", "))
    };
    Clause {
        claim,
        holds: !applicable || conclusion.passed(),
        evidence: Evidence::Implication {
            premises: premises.iter().map(|(a, r)| (*a, r.verdict)).collect(),
            conclusion: Box::new(conclusion.clone()),
        },
    }
}

/// Verdicts for every (rule, axiom) pair, computed in parallel.
struct VerdictTable<T> {
    reports: HashMap<(usize, Axiom), CheckReport<T>>,
}

impl<T: Scalar> VerdictTable<T> {
    fn compute(panel: &[PanelRule<T>], axioms: &[Axiom], plan: &SamplePlan) -> Result<Self> {
        let keys: Vec<(usize, Axiom)> =
            (0..panel.len()).flat_map(|k| axioms.iter().map(move |a| (k, *a))).collect();
        let jobs = keys.iter().map(|(k, a)| (&panel[*k].rule, *a)).collect();
        let reports = run_checks(jobs, plan)?;
        Ok(Self { reports: keys.into_iter().zip(reports).collect() })
    }

    fn get(&self, rule: usize, axiom: Axiom) -> &CheckReport<T> {
        &self.reports[&(rule, axiom)]
    }
}

/// AC singles out `α_n = 0` among ELS values; the power rule separates AC from
/// linearity; the premises E, TLB and SYM and the implication to RNP.
pub fn verify_theorem3<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    let panel: Vec<PanelRule<T>> = rule_panel(plan.seed)
        .into_iter()
        .filter(|p| matches!(p.class, RuleClass::Affine | RuleClass::Egalitarian | RuleClass::Mixture | RuleClass::Power))
        .collect();
    let axioms = [Axiom::E, Axiom::L, Axiom::Sym, Axiom::Ac, Axiom::Tlb, Axiom::Rnp];
    let table = VerdictTable::compute(&panel, &axioms, plan)?;
    let mut clauses = Vec::new();
    for (k, p) in panel.iter().enumerate() {
        let name = p.rule.name();
        match p.class {
            RuleClass::Power => {
                // Published claim: satisfies E and AC, violates TLB and L.
                for (axiom, expected) in [
                    (Axiom::E, Verdict::PassedSample),
                    (Axiom::Ac, Verdict::PassedSample),
                    (Axiom::Tlb, Verdict::Violated),
                    (Axiom::L, Verdict::Violated),
                ] {
                    clauses.push(Clause::check(verdict_claim(name, axiom, expected), expected, table.get(k, axiom).clone()));
                }
            }
            class => {
                let expected = if class == RuleClass::Affine { Verdict::PassedSample } else { Verdict::Violated };
                clauses.push(Clause::check(verdict_claim(name, Axiom::Ac, expected), expected, table.get(k, Axiom::Ac).clone()));
                for axiom in [Axiom::E, Axiom::Tlb, Axiom::Sym] {
                    clauses.push(Clause::check(
                        format!("{} (premise)", verdict_claim(name, axiom, Verdict::PassedSample)),
                        Verdict::PassedSample,
                        table.get(k, axiom).clone(),
                    ));
                }
            }
        }
        clauses.push(implication_clause(
            "E, L and AC imply RNP",
            name,
            &[(Axiom::E, table.get(k, Axiom::E)), (Axiom::L, table.get(k, Axiom::L)), (Axiom::Ac, table.get(k, Axiom::Ac))],
            table.get(k, Axiom::Rnp),
        ));
    }
    Ok(SuiteResult::new("theorem3", clauses))
}

/// Least-square values satisfy AC and CM; an affine combination with a negative
/// size coefficient violates CM and so is no least-square value.
pub fn verify_corollary2<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    let mut rules: Vec<SolutionRule<T>> = vec![
        SolutionRule::least_square(LsWeights::new(Weights::family("ones", |n| vec![T::one(); n]))),
        SolutionRule::least_square(shapley_ls_weights()),
    ];
    for k in 0..4 {
        rules.push(SolutionRule::least_square(random_ls_weights(plan.seed, k)));
    }
    let jobs = rules.iter().flat_map(|r| [(r, Axiom::Ac), (r, Axiom::Cm)]).collect();
    let reports = run_checks(jobs, plan)?;
    let mut clauses: Vec<Clause<T>> = reports
        .into_iter()
        .map(|r| Clause::check(format!("{} satisfies {}", r.rule, r.axiom), Verdict::PassedSample, r))
        .collect();

    for rule in &rules {
        let mut problems = Vec::new();
        for n in plan.n_min..=plan.n_max {
            let coeffs = extract_coefficients(rule, n)?;
            if !coeffs.els {
                problems.push(format!("n={n}: not an ELS coefficient form"));
            }
            if !coeffs.satisfies_igp() {
                problems.push(format!("n={n}: egalitarian component present"));
            }
            match &coeffs.symmetric {
                Some(sym) if (1..n).all(|s| sym.p[s - 1].approx_ge(&T::zero(), TAU)) => {}
                _ => problems.push(format!("n={n}: some p_s < 0 for s < n")),
            }
        }
        clauses.push(Clause::fact(
            format!("{}: affine form with alpha_n = 0 and p_s >= 0 for s < n", rule.name()),
            problems.is_empty(),
            if problems.is_empty() { "coefficients extracted for every n in range".into() } else { problems.join("; ") },
        ));
    }

    let bad = SolutionRule::affine(Weights::family("2psi1-psi2", |n| {
        let mut alpha = vec![T::zero(); n];
        alpha[0] = T::from_i64(2);
        alpha[1] = -T::one();
        alpha
    }));
    let report = check(Axiom::Cm, &bad, plan)?;
    clauses.push(Clause::check(format!("{} violates CM", bad.name()), Verdict::Violated, report));
    let mut negative = Vec::new();
    for n in plan.n_min.max(3)..=plan.n_max {
        let coeffs = extract_coefficients(&bad, n)?;
        if let Some(sym) = &coeffs.symmetric {
            if let Some(s) = (1..n).find(|&s| sym.p[s - 1] < T::zero()) {
                negative.push(format!("n={n}: p_{s} = {}", sym.p[s - 1]));
            }
        }
    }
    clauses.push(Clause::fact(
        format!("{} has a negative size coefficient, so no least-square weights reproduce it", bad.name()),
        !negative.is_empty(),
        if negative.is_empty() { "no negative coefficient found".into() } else { negative.join("; ") },
    ));
    Ok(SuiteResult::new("corollary2", clauses))
}

/// The value-versus-reduction table and the independence examples.
pub fn verify_theorem4<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    if plan.n_min < 3 {
        return Err(Error::PlayerCountTooSmall { n: plan.n_min, required: 3 });
    }
    use NullifiedKind::{Hm, F, M};
    let pass = Verdict::PassedSample;
    let fail = Verdict::Violated;
    type Row<T> = (SolutionRule<T>, Vec<(Axiom, Verdict)>);
    let rows: Vec<Row<T>> = vec![
        (SolutionRule::shapley(), vec![(Axiom::E, pass), (Axiom::Eg, pass), (Axiom::Ngc(Hm), pass), (Axiom::Ngc(F), fail), (Axiom::Ngc(M), fail)]),
        (SolutionRule::cis(), vec![(Axiom::E, pass), (Axiom::Eg, pass), (Axiom::Ngc(Hm), fail), (Axiom::Ngc(F), pass), (Axiom::Ngc(M), fail)]),
        (SolutionRule::ensc(), vec![(Axiom::E, pass), (Axiom::Eg, pass), (Axiom::Ngc(Hm), fail), (Axiom::Ngc(F), fail), (Axiom::Ngc(M), pass)]),
        (SolutionRule::standalone(), vec![(Axiom::E, fail), (Axiom::Eg, pass), (Axiom::Ngc(F), pass)]),
        (SolutionRule::marginal(), vec![(Axiom::E, fail), (Axiom::Eg, pass), (Axiom::Ngc(Hm), pass), (Axiom::Ngc(M), pass)]),
        (SolutionRule::dictator(0), vec![(Axiom::E, pass), (Axiom::Eg, fail), (Axiom::Ngc(Hm), pass), (Axiom::Ngc(F), pass), (Axiom::Ngc(M), pass)]),
    ];
    let jobs = rows.iter().flat_map(|(r, cells)| cells.iter().map(move |(a, _)| (r, *a))).collect();
    let reports = run_checks(jobs, plan)?;
    let clauses = rows
        .iter()
        .flat_map(|(r, cells)| cells.iter().map(move |(a, e)| (r, *a, *e)))
        .zip(reports)
        .map(|((r, axiom, expected), report)| Clause::check(verdict_claim(r.name(), axiom, expected), expected, report))
        .collect();
    Ok(SuiteResult::new("theorem4", clauses))
}

/// Implication lemmas on the rule panel, IGP of every `ψ^s`, null preservation
/// under the HM reduction, and the averaging identity for `ψ^s`.
pub fn verify_lemmas<T: Scalar>(plan: &SamplePlan) -> Result<SuiteResult<T>> {
    plan.validate()?;
    let mut clauses = Vec::new();

    for n in plan.n_min..=plan.n_max {
        let restricted = plan.restricted_to(n);
        let psis: Vec<SolutionRule<T>> = (1..n).map(SolutionRule::psi).collect();
        let reports = run_checks(psis.iter().map(|r| (r, Axiom::Igp)).collect(), &restricted)?;
        for report in reports {
            clauses.push(Clause::check(format!("n={n}: {} satisfies IGP", report.rule), Verdict::PassedSample, report));
        }
    }

    let panel: Vec<PanelRule<T>> = rule_panel(plan.seed);
    let axioms = [Axiom::E, Axiom::L, Axiom::Sym, Axiom::Cu, Axiom::Rnp, Axiom::Tlb, Axiom::Ac, Axiom::Eg, Axiom::Mr];
    let table = VerdictTable::compute(&panel, &axioms, plan)?;
    for (k, p) in panel.iter().enumerate() {
        let name = p.rule.name();
        let r = |a| table.get(k, a);
        clauses.push(implication_clause("L and CU imply RNP", name, &[(Axiom::L, r(Axiom::L)), (Axiom::Cu, r(Axiom::Cu))], r(Axiom::Rnp)));
        clauses.push(implication_clause("L and SYM imply TLB", name, &[(Axiom::L, r(Axiom::L)), (Axiom::Sym, r(Axiom::Sym))], r(Axiom::Tlb)));
        clauses.push(implication_clause(
            "E, TLB and AC imply L",
            name,
            &[(Axiom::E, r(Axiom::E)), (Axiom::Tlb, r(Axiom::Tlb)), (Axiom::Ac, r(Axiom::Ac))],
            r(Axiom::L),
        ));
        clauses.push(implication_clause(
            "E, L and AC imply RNP",
            name,
            &[(Axiom::E, r(Axiom::E)), (Axiom::L, r(Axiom::L)), (Axiom::Ac, r(Axiom::Ac))],
            r(Axiom::Rnp),
        ));
        clauses.push(implication_clause("E and EG imply MR", name, &[(Axiom::E, r(Axiom::E)), (Axiom::Eg, r(Axiom::Eg))], r(Axiom::Mr)));
    }

    clauses.push(null_preservation_clause(plan)?);
    clauses.push(identity_clause(
        "average of psi^1..psi^(n-1) equals the Shapley value".into(),
        plan,
        plan.trials,
        Generator::Uniform,
        |v| Ok((dragan_average(v)?.0, shapley_value(v).0)),
    )?);
    Ok(SuiteResult::new("lemmas", clauses))
}

/// `(1/(n−1)) Σ_{s<n} ψ^s(v)`.
pub fn dragan_average<T: Scalar>(v: &Game<T>) -> Result<Allocation<T>> {
    let n = v.n();
    let mut acc = Allocation::zeros(n);
    for s in 1..n {
        acc = acc.plus(&psi_value(v, s)?);
    }
    Ok(acc.scaled(&T::from_ratio(1, n as i64 - 1)))
}

/// A null player of `v` stays null in `R^{HM,N∖{j}}(Sh(v), v)` for every `j ≠ i`.
fn null_preservation_clause<T: Scalar>(plan: &SamplePlan) -> Result<Clause<T>> {
    let shapley = SolutionRule::<T>::shapley();
    let cases = plan.trials;
    let failures: Vec<String> = (0..cases)
        .into_par_iter()
        .map(|k| -> Result<Option<String>> {
            let n = plan.n_for_trial(k).max(3);
            let mut rng = plan.rng_for_trial(k);
            let null = k % n;
            let w: Game<T> = Generator::Uniform.sample_in(n, &mut rng, plan.worth_range)?;
            let v = nullified_game(&w, Coalition::grand(n).without(null));
            for j in (0..n).filter(|&j| j != null) {
                let reduced = reduce_hm(&shapley, &v, Coalition::grand(n).without(j))?;
                if !reduced.is_null_player(null) {
                    return Ok(Some(format!("case {k}: player {} not null after reducing by {}", null + 1, j + 1)));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Clause::fact(
        format!("null players stay null in HM reductions of Shapley ({cases} games)"),
        failures.is_empty(),
        if failures.is_empty() { "no failures".into() } else { failures[0].clone() },
    ))
}

/// `x_i = (total + Σ_{j≠i} d(i,j)) / n` from efficiency and pairwise differences.
fn from_differences<T: Scalar>(n: usize, total: T, diff: impl Fn(usize, usize) -> T) -> Allocation<T> {
    let size = T::from_usize(n);
    Allocation(
        (0..n)
            .map(|i| {
                let spread: T = (0..n).filter(|&j| j != i).map(|j| diff(i, j)).sum();
                (total.clone() + spread) / size.clone()
            })
            .collect(),
    )
}

/// The allocation forced by E, EG and the given nullified-game consistency.
pub fn reconstruct_from_ngc<T: Scalar>(kind: NullifiedKind, v: &Game<T>) -> Result<Allocation<T>> {
    let n = v.n();
    if n < 3 {
        return Err(Error::PlayerCountTooSmall { n, required: 3 });
    }
    let grand = v.grand();
    Ok(match kind {
        NullifiedKind::F => from_differences(n, v.grand_worth().clone(), |i, j| {
            v.singleton_worth(i).clone() - v.singleton_worth(j).clone()
        }),
        NullifiedKind::M => from_differences(n, v.grand_worth().clone(), |i, j| {
            v.worth(grand.without(j)).clone() - v.worth(grand.without(i)).clone()
        }),
        NullifiedKind::Hm => HmReconstruction { v, memo: HashMap::new() }.solve(grand),
    })
}

/// Induction on the number of null players, run on the nullified games `v|_S`.
///
/// For active `a, b` the HM reduction to `{a, b}` with EG gives
/// `φ_a(v) − φ_b(v) = [φ_a + φ_b](v|_{N∖{b}}) − [φ_a + φ_b](v|_{N∖{a}})`, and both
/// right-hand games have more null players. For a null `k` and an active `a` the
/// same identity with `b = k` reads `φ_k(v) = [φ_a + φ_k](v|_{N∖{a}}) / 2`.
/// Efficiency then fixes the level.
struct HmReconstruction<'a, T> {
    v: &'a Game<T>,
    /// Keyed by the active set `S`, which determines the subgame `v|_S`.
    memo: HashMap<Coalition, Allocation<T>>,
}

impl<T: Scalar> HmReconstruction<'_, T> {
    /// `k ∈ s` is null in `v|_s`.
    fn is_null_within(&self, s: Coalition, k: usize) -> bool {
        s.without(k).subsets().all(|t| {
            (self.v.worth(t.with(k)).clone() - self.v.worth(t).clone()).is_zero_within(crate::scalar::TAU_NULL)
        })
    }

    fn solve(&mut self, s: Coalition) -> Allocation<T> {
        let active = Coalition::from_players(s.players().filter(|&k| !self.is_null_within(s, k)));
        if let Some(x) = self.memo.get(&active) {
            return x.clone();
        }
        let v = self.v;
        let n = v.n();
        let worth = v.worth(active).clone();
        let mut pay = Allocation::zeros(n);
        let players: Vec<usize> = active.players().collect();
        match players.as_slice() {
            [] => {}
            // One active player: E, EG and MR give it everything.
            &[i] => pay.0[i] = worth,
            // Two active players: EG fixes the difference, E the sum.
            &[i, j] => {
                let two = T::from_i64(2);
                let diff = v.singleton_worth(i).clone() - v.singleton_worth(j).clone();
                pay.0[i] = (worth.clone() + diff.clone()) / two.clone();
                pay.0[j] = (worth - diff) / two;
            }
            _ => {
                let subs: HashMap<usize, Allocation<T>> =
                    players.iter().map(|&a| (a, self.solve(active.without(a)))).collect();
                let lead = players[0];
                let half = T::from_ratio(1, 2);
                let mut null_total = T::zero();
                for k in (0..n).filter(|k| !active.contains(*k)) {
                    pay.0[k] = (subs[&lead][lead].clone() + subs[&lead][k].clone()) * half.clone();
                    null_total = null_total + pay.0[k].clone();
                }
                let rest = worth - null_total;
                let diff = |a: usize, b: usize| {
                    (subs[&b][a].clone() + subs[&b][b].clone()) - (subs[&a][a].clone() + subs[&a][b].clone())
                };
                let count = T::from_usize(players.len());
                for &a in &players {
                    let spread: T = players.iter().filter(|&&b| b != a).map(|&b| diff(a, b)).sum();
                    pay.0[a] = (rest.clone() + spread) / count.clone();
                }
            }
        }
        self.memo.insert(active, pay.clone());
        pay
    }
}
