//! Falsification checkers for the sixteen axioms.
//!
//! Every checker samples games from a seeded plan and instantiates the axiom's
//! finite quantifiers (coalitions, players, pairs, permutations) exhaustively per
//! sampled game. A verdict of `passed_sample` means no counterexample was found;
//! `violated` carries a replayable witness.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::{
    additive_game, linear_combination, nullified_game, permute_game, replace_grand, validate_player_count,
    Allocation, Coalition, Game, Permutation,
};
use crate::io::{game_to_json, parse_game};
use crate::linalg;
use crate::sample::{uniform_allocation, Generator};
use crate::scalar::{Scalar, TAU_CHECK};
use crate::transforms::{
    comp_down_insider, comp_down_outsider, comp_up_residual, reduce_ac, reduce_nullified, NullifiedKind,
};
use crate::values::{extract_coefficients, SolutionRule};

/// Draws of a sampled game before giving up on a rule's domain guard.
const MAX_RESAMPLES: usize = 64;
/// Random games added to the indicator basis when fitting the TLB map.
const TLB_EXTRA_FIT_GAMES: usize = 16;
/// Permutations tried per game when exhaustive enumeration is too large.
const SAMPLED_PERMUTATIONS: usize = 16;
const EXHAUSTIVE_PERMUTATIONS_UP_TO: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    E,
    L,
    Sym,
    Igp,
    Rnp,
    Cu,
    Cdi,
    Cdo,
    Ac,
    Tlb,
    Cm,
    Eg,
    Mr,
    Ngc(NullifiedKind),
}

impl Axiom {
    pub const ALL: [Axiom; 16] = [
        Axiom::E,
        Axiom::L,
        Axiom::Sym,
        Axiom::Igp,
        Axiom::Rnp,
        Axiom::Cu,
        Axiom::Cdi,
        Axiom::Cdo,
        Axiom::Ac,
        Axiom::Tlb,
        Axiom::Cm,
        Axiom::Eg,
        Axiom::Mr,
        Axiom::Ngc(NullifiedKind::Hm),
        Axiom::Ngc(NullifiedKind::F),
        Axiom::Ngc(NullifiedKind::M),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::E => "E",
            Self::L => "L",
            Self::Sym => "SYM",
            Self::Igp => "IGP",
            Self::Rnp => "RNP",
            Self::Cu => "CU",
            Self::Cdi => "CDI",
            Self::Cdo => "CDO",
            Self::Ac => "AC",
            Self::Tlb => "TLB",
            Self::Cm => "CM",
            Self::Eg => "EG",
            Self::Mr => "MR",
            Self::Ngc(NullifiedKind::Hm) => "HM-NGC",
            Self::Ngc(NullifiedKind::F) => "F-NGC",
            Self::Ngc(NullifiedKind::M) => "M-NGC",
        }
    }

    pub fn min_players(self) -> usize {
        match self {
            Self::Ngc(_) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.trim().to_ascii_uppercase().chars().filter(|c| !matches!(c, '_' | '-' | ' ')).collect();
        let axiom = match norm.as_str() {
            "E" => Self::E,
            "L" => Self::L,
            "SYM" => Self::Sym,
            "IGP" => Self::Igp,
            "RNP" => Self::Rnp,
            "CU" => Self::Cu,
            "CDI" => Self::Cdi,
            "CDO" => Self::Cdo,
            "AC" => Self::Ac,
            "TLB" => Self::Tlb,
            "CM" => Self::Cm,
            "EG" => Self::Eg,
            "MR" => Self::Mr,
            "HMNGC" | "NGCHM" => Self::Ngc(NullifiedKind::Hm),
            "FNGC" | "NGCF" => Self::Ngc(NullifiedKind::F),
            "MNGC" | "NGCM" => Self::Ngc(NullifiedKind::M),
            _ => return Err(Error::UnknownAxiom(s.to_string())),
        };
        Ok(axiom)
    }
}

/// Sampling parameters shared by all checkers.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Range of i.i.d. uniform worths.
    pub worth_range: (f64, f64),
    /// Range of the random provisional worth `t` in the composition axioms.
    pub t_range: (f64, f64),
    /// Float-mode tolerance; exact mode compares exactly.
    pub tol: f64,
    pub parallel: bool,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self {
            trials: 200,
            n_min: 3,
            n_max: 5,
            seed: 0,
            worth_range: (-10.0, 10.0),
            t_range: (-20.0, 20.0),
            tol: TAU_CHECK,
            parallel: true,
        }
    }
}

impl SamplePlan {
    pub fn new(trials: usize, n_min: usize, n_max: usize, seed: u64) -> Self {
        Self { trials, n_min, n_max, seed, ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_n_range(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidPlan("at least one trial is required".into()));
        }
        validate_player_count(self.n_min)?;
        validate_player_count(self.n_max)?;
        if self.n_min > self.n_max {
            return Err(Error::InvalidPlan(format!("empty player range {}..={}", self.n_min, self.n_max)));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidPlan(format!("tolerance {} must be nonnegative", self.tol)));
        }
        Ok(())
    }

    /// Player counts cycle through the range so every count is exercised.
    pub fn n_for_trial(&self, trial: usize) -> usize {
        self.n_min + trial % (self.n_max - self.n_min + 1)
    }

    /// Independent stream per trial, so serial and parallel runs agree.
    pub fn rng_for_trial(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    pub fn restricted_to(&self, n: usize) -> Self {
        self.clone().with_n_range(n, n)
    }
}

/// One instantiation of an axiom: the games and parameters needed to compare
/// both sides.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe<T> {
    /// `Σ φ_i(v) = v(N)`.
    Efficiency { v: Game<T> },
    /// `φ(cv + dw) = cφ(v) + dφ(w)`.
    Linearity { v: Game<T>, w: Game<T>, c: T, d: T },
    /// `φ_{π(i)}(πv) = φ_i(v)`.
    Symmetry { v: Game<T>, pi: Permutation },
    /// `φ(x̂) = x`.
    Igp { x: Allocation<T> },
    /// `φ(φ(v)^) = φ(v)`.
    Rnp { v: Game<T> },
    /// `φ(v) = φ(v^t) + φ(U(φ(v^t), v))`.
    CompUp { v: Game<T>, t: T },
    /// `φ(v) = φ(D_I(φ(v^t), v))`.
    CompDownInsider { v: Game<T>, t: T },
    /// `φ(v) = φ(D_O(φ(v^t), v))`.
    CompDownOutsider { v: Game<T>, t: T },
    /// `φ_i(R^{AC,S}(φ(v), v)) = φ_i(v)` for `i ∈ S`.
    ActiveConsistency { v: Game<T>, s: Coalition },
    /// `φ_i(R) − φ_j(R) = γ·d(v)` with `R = R^{AC,{i,j}}(φ(v), v)`.
    Tlb { v: Game<T>, i: usize, j: usize, gamma: Vec<T> },
    /// `φ_i(w + δe_T) ≥ φ_i(w)` for `i ∈ T`.
    Monotonicity { w: Game<T>, t: Coalition, delta: T },
    /// `φ_i(v) − v({i}) = φ_j(v) − v({j})` when all others are null.
    EqualGain { v: Game<T>, i: usize, j: usize },
    /// `φ_i(v) = v(N)` when all others are null.
    SingleActive { v: Game<T>, i: usize },
    /// `φ_i(R^{I,S}(φ(v), v)) = φ_i(v)` for `i ∈ S`.
    Ngc { kind: NullifiedKind, v: Game<T>, s: Coalition },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// Every actual coordinate must be at least the expected one.
    AtLeast,
}

/// Both sides of a probe, coordinate by coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome<T> {
    pub expected: Vec<T>,
    pub actual: Vec<T>,
    pub relation: Relation,
    /// Player (0-based) behind each coordinate, where meaningful.
    pub players: Option<Vec<usize>>,
}

impl<T: Scalar> Outcome<T> {
    fn new(expected: Vec<T>, actual: Vec<T>) -> Self {
        Self { expected, actual, relation: Relation::Equal, players: None }
    }

    fn for_players(mut self, players: Coalition) -> Self {
        self.players = Some(players.players().collect());
        self
    }

    /// Largest violation of the relation, as a double.
    pub fn deviation(&self) -> f64 {
        self.expected
            .iter()
            .zip(&self.actual)
            .map(|(e, a)| {
                let gap = (a.clone() - e.clone()).to_f64();
                match self.relation {
                    Relation::Equal => gap.abs(),
                    Relation::AtLeast => (-gap).max(0.0),
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.expected.iter().zip(&self.actual).all(|(e, a)| match self.relation {
            Relation::Equal => a.approx_eq(e, tol),
            Relation::AtLeast => a.approx_ge(e, tol),
        })
    }
}

fn phi<T: Scalar>(rule: &SolutionRule<T>, v: &Game<T>, known: Option<&Allocation<T>>) -> Result<Allocation<T>> {
    match known {
        Some(x) => Ok(x.clone()),
        None => rule.evaluate(v),
    }
}

fn pick<T: Scalar>(x: &Allocation<T>, s: Coalition) -> Vec<T> {
    s.players().map(|i| x[i].clone()).collect()
}

/// `(v(S∪{i}) − v(S∪{j}))_{S ⊆ N∖{i,j}}` in submask order.
pub fn pair_contrasts<T: Scalar>(v: &Game<T>, i: usize, j: usize) -> Vec<T> {
    let rest = v.grand().without(i).without(j);
    rest.subsets().map(|s| v.worth(s.with(i)).clone() - v.worth(s.with(j)).clone()).collect()
}

/// `φ_i(R^{AC,{i,j}}(φ(v), v)) − φ_j(R^{AC,{i,j}}(φ(v), v))`; for two players the
/// reduced game is `v` itself.
fn pair_bargain<T: Scalar>(rule: &SolutionRule<T>, v: &Game<T>, x: &Allocation<T>, i: usize, j: usize) -> Result<T> {
    let pair = Coalition::from_players([i, j]);
    let reduced = v.map(|t, w| w.clone() - x.sum_over(t - pair));
    let y = rule.evaluate(&reduced)?;
    Ok(y[i].clone() - y[j].clone())
}

impl<T: Scalar> Probe<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Efficiency { .. } => "efficiency",
            Self::Linearity { .. } => "linearity",
            Self::Symmetry { .. } => "symmetry",
            Self::Igp { .. } => "igp",
            Self::Rnp { .. } => "rnp",
            Self::CompUp { .. } => "comp_up",
            Self::CompDownInsider { .. } => "comp_down_insider",
            Self::CompDownOutsider { .. } => "comp_down_outsider",
            Self::ActiveConsistency { .. } => "active_consistency",
            Self::Tlb { .. } => "tlb",
            Self::Monotonicity { .. } => "monotonicity",
            Self::EqualGain { .. } => "equal_gain",
            Self::SingleActive { .. } => "single_active",
            Self::Ngc { .. } => "ngc",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Igp { x } => x.n(),
            Self::Monotonicity { w, .. } => w.n(),
            Self::Efficiency { v }
            | Self::Linearity { v, .. }
            | Self::Symmetry { v, .. }
            | Self::Rnp { v }
            | Self::CompUp { v, .. }
            | Self::CompDownInsider { v, .. }
            | Self::CompDownOutsider { v, .. }
            | Self::ActiveConsistency { v, .. }
            | Self::Tlb { v, .. }
            | Self::EqualGain { v, .. }
            | Self::SingleActive { v, .. }
            | Self::Ngc { v, .. } => v.n(),
        }
    }

    /// Evaluates both sides from scratch.
    pub fn evaluate(&self, rule: &SolutionRule<T>) -> Result<Outcome<T>> {
        self.evaluate_with(rule, None)
    }

    /// `known` is the rule's value on the probe's primary game (`v`, `w`, or `x̂`).
    pub fn evaluate_with(&self, rule: &SolutionRule<T>, known: Option<&Allocation<T>>) -> Result<Outcome<T>> {
        Ok(match self {
            Self::Efficiency { v } => {
                let x = phi(rule, v, known)?;
                Outcome::new(vec![v.grand_worth().clone()], vec![x.total()])
            }
            Self::Linearity { v, w, c, d } => {
                let combined = linear_combination(&[(c.clone(), v), (d.clone(), w)])?;
                let expected = phi(rule, v, known)?.scaled(c).plus(&rule.evaluate(w)?.scaled(d));
                Outcome::new(expected.0, rule.evaluate(&combined)?.0)
            }
            Self::Symmetry { v, pi } => {
                let x = phi(rule, v, known)?;
                let y = rule.evaluate(&permute_game(v, pi)?)?;
                let actual = (0..v.n()).map(|i| y[pi.image(i)].clone()).collect();
                Outcome::new(x.0, actual)
            }
            Self::Igp { x } => {
                let y = phi(rule, &additive_game(x), known)?;
                Outcome::new(x.0.clone(), y.0)
            }
            Self::Rnp { v } => {
                let x = phi(rule, v, known)?;
                let y = rule.evaluate(&additive_game(&x))?;
                Outcome::new(x.0, y.0)
            }
            Self::CompUp { v, t } => {
                let x = phi(rule, v, known)?;
                let provisional = rule.evaluate(&replace_grand(v, t))?;
                let rest = rule.evaluate(&comp_up_residual(&provisional, v))?;
                Outcome::new(x.0, provisional.plus(&rest).0)
            }
            Self::CompDownInsider { v, t } => {
                let x = phi(rule, v, known)?;
                let provisional = rule.evaluate(&replace_grand(v, t))?;
                Outcome::new(x.0, rule.evaluate(&comp_down_insider(&provisional, v))?.0)
            }
            Self::CompDownOutsider { v, t } => {
                let x = phi(rule, v, known)?;
                let provisional = rule.evaluate(&replace_grand(v, t))?;
                Outcome::new(x.0, rule.evaluate(&comp_down_outsider(&provisional, v))?.0)
            }
            Self::ActiveConsistency { v, s } => {
                let x = phi(rule, v, known)?;
                let y = rule.evaluate(&reduce_ac(&x, v, *s)?)?;
                Outcome::new(pick(&x, *s), pick(&y, *s)).for_players(*s)
            }
            Self::Tlb { v, i, j, gamma } => {
                let x = phi(rule, v, known)?;
                let predicted = dot(gamma, &pair_contrasts(v, *i, *j))?;
                let actual = pair_bargain(rule, v, &x, *i, *j)?;
                Outcome::new(vec![predicted], vec![actual]).for_players(Coalition::from_players([*i, *j]))
            }
            Self::Monotonicity { w, t, delta } => {
                let x = phi(rule, w, known)?;
                let raised = w.map(|s, worth| if s == *t { worth.clone() + delta.clone() } else { worth.clone() });
                let y = rule.evaluate(&raised)?;
                let mut out = Outcome::new(pick(&x, *t), pick(&y, *t)).for_players(*t);
                out.relation = Relation::AtLeast;
                out
            }
            Self::EqualGain { v, i, j } => {
                let x = phi(rule, v, known)?;
                let gain = |k: usize| x[k].clone() - v.singleton_worth(k).clone();
                Outcome::new(vec![gain(*i)], vec![gain(*j)]).for_players(Coalition::from_players([*i, *j]))
            }
            Self::SingleActive { v, i } => {
                let x = phi(rule, v, known)?;
                Outcome::new(vec![v.grand_worth().clone()], vec![x[*i].clone()])
                    .for_players(Coalition::singleton(*i))
            }
            Self::Ngc { kind, v, s } => {
                let x = phi(rule, v, known)?;
                let y = rule.evaluate(&reduce_nullified(*kind, rule, v, *s)?)?;
                Outcome::new(pick(&x, *s), pick(&y, *s)).for_players(*s)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let mut obj = match self {
            Self::Efficiency { v } | Self::Rnp { v } => json!({ "game": game_to_json(v) }),
            Self::Linearity { v, w, c, d } => json!({
                "game": game_to_json(v),
                "other_game": game_to_json(w),
                "c": c.to_string(),
                "d": d.to_string(),
            }),
            Self::Symmetry { v, pi } => json!({
                "game": game_to_json(v),
                "permutation": pi.as_slice().iter().map(|p| p + 1).collect::<Vec<_>>(),
            }),
            Self::Igp { x } => json!({ "x": x.iter().map(ToString::to_string).collect::<Vec<_>>() }),
            Self::CompUp { v, t } | Self::CompDownInsider { v, t } | Self::CompDownOutsider { v, t } => {
                json!({ "game": game_to_json(v), "t": t.to_string() })
            }
            Self::ActiveConsistency { v, s } => json!({ "game": game_to_json(v), "S": s.key() }),
            Self::Tlb { v, i, j, gamma } => json!({
                "game": game_to_json(v),
                "i": i + 1,
                "j": j + 1,
                "gamma": gamma.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
            Self::Monotonicity { w, t, delta } => {
                json!({ "game": game_to_json(w), "T": t.key(), "delta": delta.to_string() })
            }
            Self::EqualGain { v, i, j } => json!({ "game": game_to_json(v), "i": i + 1, "j": j + 1 }),
            Self::SingleActive { v, i } => json!({ "game": game_to_json(v), "i": i + 1 }),
            Self::Ngc { kind, v, s } => {
                json!({ "game": game_to_json(v), "S": s.key(), "reduction": kind.to_string() })
            }
        };
        obj["kind"] = json!(self.kind());
        obj
    }

    /// Inverse of [`Probe::to_json`].
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidGameFile(format!("witness probe: {what}"));
        let field = |name: &str| value.get(name).ok_or_else(|| bad(&format!("missing {name:?}")));
        let game = |name: &str| -> Result<Game<T>> { parse_game(&field(name)?.to_string()) };
        let scalar = |name: &str| -> Result<T> {
            let text = field(name)?.as_str().ok_or_else(|| bad(&format!("{name:?} must be a string")))?;
            T::parse_literal(text).map_err(|m| bad(&m))
        };
        let player = |name: &str| -> Result<usize> {
            match field(name)?.as_u64() {
                Some(p) if p >= 1 => Ok(p as usize - 1),
                _ => Err(bad(&format!("{name:?} must be a 1-based player"))),
            }
        };
        let coalition = |name: &str| -> Result<Coalition> {
            let text = field(name)?.as_str().ok_or_else(|| bad(&format!("{name:?} must be a string")))?;
            text.split(',')
                .map(|p| p.trim().parse::<usize>().ok().filter(|&p| p >= 1).map(|p| p - 1))
                .collect::<Option<Vec<_>>>()
                .map(Coalition::from_players)
                .ok_or_else(|| bad(&format!("bad coalition {text:?}")))
        };
        let scalars = |name: &str| -> Result<Vec<T>> {
            field(name)?
                .as_array()
                .ok_or_else(|| bad(&format!("{name:?} must be an array")))?
                .iter()
                .map(|x| x.as_str().ok_or_else(|| bad("expected a string")).and_then(|s| T::parse_literal(s).map_err(|m| bad(&m))))
                .collect()
        };
        let kind = field("kind")?.as_str().ok_or_else(|| bad("kind must be a string"))?;
        Ok(match kind {
            "efficiency" => Self::Efficiency { v: game("game")? },
            "rnp" => Self::Rnp { v: game("game")? },
            "linearity" => Self::Linearity { v: game("game")?, w: game("other_game")?, c: scalar("c")?, d: scalar("d")? },
            "symmetry" => {
                let map = field("permutation")?
                    .as_array()
                    .ok_or_else(|| bad("permutation must be an array"))?
                    .iter()
                    .map(|p| p.as_u64().filter(|&p| p >= 1).map(|p| p as usize - 1))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad("permutation entries must be 1-based players"))?;
                Self::Symmetry { v: game("game")?, pi: Permutation::new(map)? }
            }
            "igp" => Self::Igp { x: Allocation(scalars("x")?) },
            "comp_up" => Self::CompUp { v: game("game")?, t: scalar("t")? },
            "comp_down_insider" => Self::CompDownInsider { v: game("game")?, t: scalar("t")? },
            "comp_down_outsider" => Self::CompDownOutsider { v: game("game")?, t: scalar("t")? },
            "active_consistency" => Self::ActiveConsistency { v: game("game")?, s: coalition("S")? },
            "tlb" => Self::Tlb { v: game("game")?, i: player("i")?, j: player("j")?, gamma: scalars("gamma")? },
            "monotonicity" => Self::Monotonicity { w: game("game")?, t: coalition("T")?, delta: scalar("delta")? },
            "equal_gain" => Self::EqualGain { v: game("game")?, i: player("i")?, j: player("j")? },
            "single_active" => Self::SingleActive { v: game("game")?, i: player("i")? },
            "ngc" => {
                let kind = match field("reduction")?.as_str() {
                    Some("HM") => NullifiedKind::Hm,
                    Some("F") => NullifiedKind::F,
                    Some("M") => NullifiedKind::M,
                    _ => return Err(bad("reduction must be HM, F or M")),
                };
                Self::Ngc { kind, v: game("game")?, s: coalition("S")? }
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        })
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::WeightLength { expected: b.len(), found: a.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).sum())
}

/// A counterexample: the probe that failed and both sides of it.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    /// Trial that produced the probe; `None` for probes found while fitting.
    pub trial: Option<usize>,
    pub probe: Probe<T>,
    pub outcome: Outcome<T>,
    pub deviation: f64,
}

impl<T: Scalar> Witness<T> {
    pub fn replay(&self, rule: &SolutionRule<T>) -> Result<Outcome<T>> {
        self.probe.evaluate(rule)
    }

    pub fn to_json(&self) -> Value {
        let strings = |xs: &[T]| xs.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut obj = json!({
            "trial": self.trial,
            "n": self.probe.n(),
            "probe": self.probe.to_json(),
            "expected": strings(&self.outcome.expected),
            "actual": strings(&self.outcome.actual),
            "relation": match self.outcome.relation { Relation::Equal => "equal", Relation::AtLeast => "at_least" },
            "deviation": self.deviation,
        });
        if let Some(players) = &self.outcome.players {
            obj["players"] = json!(players.iter().map(|p| p + 1).collect::<Vec<_>>());
        }
        obj
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PassedSample,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PassedSample => "passed_sample",
            Self::Violated => "violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<T> {
    pub axiom: Axiom,
    pub rule: String,
    pub verdict: Verdict,
    pub witness: Option<Witness<T>>,
    /// Planned trials.
    pub trials: usize,
    /// Trials completed up to and including the one that produced the witness.
    pub trials_run: usize,
    /// Probes skipped because a derived game fell outside the rule's domain.
    pub skipped: usize,
    pub seed: u64,
    pub n_range: (usize, usize),
    pub mode: &'static str,
    pub tol: f64,
    pub note: Option<String>,
}

impl<T: Scalar> CheckReport<T> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::PassedSample
    }

    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom.name(),
            "rule": self.rule,
            "verdict": self.verdict.to_string(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "trials": self.trials,
            "trials_run": self.trials_run,
            "skipped": self.skipped,
            "seed": self.seed,
            "n_range": [self.n_range.0, self.n_range.1],
            "mode": self.mode,
            "tol": if T::EXACT { 0.0 } else { self.tol },
            "note": self.note,
        })
    }

    pub fn summary(&self) -> String {
        let mut line = format!(
            "{} on {}: {} ({} of {} trials, n in {}..={}, seed {}, {}",
            self.axiom, self.rule, self.verdict, self.trials_run, self.trials, self.n_range.0, self.n_range.1, self.seed, T::MODE
        );
        if self.skipped > 0 {
            line.push_str(&format!(", {} probes skipped", self.skipped));
        }
        line.push(')');
        if let Some(w) = &self.witness {
            line.push_str(&format!(
                "\n  witness: {} probe on n={}, deviation {:.3e}\n  expected {:?}\n  actual   {:?}",
                w.probe.kind(),
                w.probe.n(),
                w.deviation,
                w.outcome.expected.iter().map(ToString::to_string).collect::<Vec<_>>(),
                w.outcome.actual.iter().map(ToString::to_string).collect::<Vec<_>>(),
            ));
        }
        if let Some(note) = &self.note {
            line.push_str(&format!("\n  note: {note}"));
        }
        line
    }
}

/// A probe plus the rule's value on its primary game, when already known.
type Planned<T> = (Probe<T>, Option<Allocation<T>>);

enum Stop<T> {
    Found(Witness<T>),
    Failed(Error),
}

fn sample_admissible<T: Scalar>(
    rule: &SolutionRule<T>,
    generator: Generator,
    n: usize,
    rng: &mut ChaCha8Rng,
    plan: &SamplePlan,
) -> Result<(Game<T>, Allocation<T>)> {
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        let v = generator.sample_in(n, rng, plan.worth_range)?;
        match rule.evaluate(&v) {
            Ok(x) => return Ok((v, x)),
            Err(Error::DomainGuardFailed { .. }) => last = Some(v),
            Err(e) => return Err(e),
        }
    }
    let shown = last.map(|v| game_to_json(&v).to_string()).unwrap_or_default();
    Err(Error::DomainGuardFailed {
        rule: rule.name().to_string(),
        reason: format!("no admissible game in {MAX_RESAMPLES} draws; last draw {shown}"),
    })
}

/// Evaluates planned probes; returns the first violation.
fn run_probes<T: Scalar>(
    rule: &SolutionRule<T>,
    planned: Vec<Planned<T>>,
    tol: f64,
    trial: Option<usize>,
    skipped: &AtomicUsize,
) -> Result<Option<Witness<T>>> {
    for (probe, known) in planned {
        match probe.evaluate_with(rule, known.as_ref()) {
            Ok(outcome) if !outcome.holds(tol) => {
                let deviation = outcome.deviation();
                return Ok(Some(Witness { trial, probe, outcome, deviation }));
            }
            Ok(_) => {}
            Err(Error::DomainGuardFailed { .. }) => {
                skipped.fetch_add(1, Ordering::Relaxed);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn run_trials<T, F>(axiom: Axiom, rule: &SolutionRule<T>, plan: &SamplePlan, probes_for: F) -> Result<CheckReport<T>>
where
    T: Scalar,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Vec<Planned<T>>> + Sync,
{
    plan.validate()?;
    if plan.n_min < axiom.min_players() {
        return Err(Error::PlayerCountTooSmall { n: plan.n_min, required: axiom.min_players() });
    }
    let skipped: Vec<AtomicUsize> = (0..plan.trials).map(|_| AtomicUsize::new(0)).collect();
    let trial = |k: usize| -> Option<(usize, Stop<T>)> {
        let n = plan.n_for_trial(k);
        let mut rng = plan.rng_for_trial(k);
        let outcome = probes_for(n, &mut rng).and_then(|planned| run_probes(rule, planned, plan.tol, Some(k), &skipped[k]));
        match outcome {
            Ok(None) => None,
            Ok(Some(w)) => Some((k, Stop::Found(w))),
            Err(e) => Some((k, Stop::Failed(e))),
        }
    };
    let stop = if plan.parallel {
        (0..plan.trials).into_par_iter().find_map_first(trial)
    } else {
        (0..plan.trials).find_map(trial)
    };
    let last = stop.as_ref().map_or(plan.trials - 1, |(k, _)| *k);
    let mut report = CheckReport {
        axiom,
        rule: rule.name().to_string(),
        verdict: Verdict::PassedSample,
        witness: None,
        trials: plan.trials,
        trials_run: last + 1,
        skipped: skipped[..=last].iter().map(|s| s.load(Ordering::Relaxed)).sum(),
        seed: plan.seed,
        n_range: (plan.n_min, plan.n_max),
        mode: T::MODE,
        tol: plan.tol,
        note: None,
    };
    match stop {
        None => {}
        Some((_, Stop::Found(w))) => {
            report.verdict = Verdict::Violated;
            report.witness = Some(w);
        }
        Some((_, Stop::Failed(e))) => return Err(e),
    }
    Ok(report)
}

fn uniform_trial<T: Scalar>(
    rule: &SolutionRule<T>,
    n: usize,
    rng: &mut ChaCha8Rng,
    plan: &SamplePlan,
    probes: impl FnOnce(&Game<T>, &mut ChaCha8Rng) -> Vec<Probe<T>>,
) -> Result<Vec<Planned<T>>> {
    let (v, x) = sample_admissible(rule, Generator::Uniform, n, rng, plan)?;
    Ok(probes(&v, rng).into_iter().map(|p| (p, Some(x.clone()))).collect())
}

pub fn check_e<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::E, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, _| vec![Probe::Efficiency { v: v.clone() }])
    })
}

pub fn check_l<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::L, rule, plan, |n, rng| {
        let (v, x) = sample_admissible(rule, Generator::Uniform, n, rng, plan)?;
        let (w, _) = sample_admissible(rule, Generator::Uniform, n, rng, plan)?;
        let c = T::sample_uniform(rng, -3.0, 3.0);
        let d = T::sample_uniform(rng, -3.0, 3.0);
        Ok(vec![(Probe::Linearity { v, w, c, d }, Some(x))])
    })
}

fn permutations_for<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Permutation> {
    if n <= EXHAUSTIVE_PERMUTATIONS_UP_TO {
        return Permutation::all(n).into_iter().filter(|p| *p != Permutation::identity(n)).collect();
    }
    let mut perms: Vec<Permutation> = (0..n - 1).map(|k| Permutation::transposition(n, k, k + 1)).collect();
    for _ in 0..SAMPLED_PERMUTATIONS {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        perms.push(Permutation::new(map).expect("shuffled identity is a permutation"));
    }
    perms
}

pub fn check_sym<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Sym, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, rng| {
            permutations_for(n, rng).into_iter().map(|pi| Probe::Symmetry { v: v.clone(), pi }).collect()
        })
    })
}

pub fn check_igp<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Igp, rule, plan, |n, rng| {
        let (lo, hi) = plan.worth_range;
        let mut last = None;
        for _ in 0..MAX_RESAMPLES {
            let x: Allocation<T> = uniform_allocation(n, rng, lo, hi);
            match rule.evaluate(&additive_game(&x)) {
                Ok(y) => return Ok(vec![(Probe::Igp { x }, Some(y))]),
                Err(Error::DomainGuardFailed { .. }) => last = Some(x),
                Err(e) => return Err(e),
            }
        }
        Err(Error::DomainGuardFailed {
            rule: rule.name().to_string(),
            reason: format!("no admissible additive game in {MAX_RESAMPLES} draws; last x = {}", last.unwrap()),
        })
    })
}

pub fn check_rnp<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Rnp, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, _| vec![Probe::Rnp { v: v.clone() }])
    })
}

/// `t = v(N)`, `t = 0` and one uniform draw.
fn provisional_worths<T: Scalar>(v: &Game<T>, rng: &mut ChaCha8Rng, plan: &SamplePlan) -> [T; 3] {
    [v.grand_worth().clone(), T::zero(), T::sample_uniform(rng, plan.t_range.0, plan.t_range.1)]
}

fn check_composition<T: Scalar>(
    axiom: Axiom,
    rule: &SolutionRule<T>,
    plan: &SamplePlan,
    make: fn(Game<T>, T) -> Probe<T>,
) -> Result<CheckReport<T>> {
    run_trials(axiom, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, rng| {
            provisional_worths(v, rng, plan).into_iter().map(|t| make(v.clone(), t)).collect()
        })
    })
}

pub fn check_cu<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    check_composition(Axiom::Cu, rule, plan, |v, t| Probe::CompUp { v, t })
}

pub fn check_cdi<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    check_composition(Axiom::Cdi, rule, plan, |v, t| Probe::CompDownInsider { v, t })
}

pub fn check_cdo<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    check_composition(Axiom::Cdo, rule, plan, |v, t| Probe::CompDownOutsider { v, t })
}

pub fn check_ac<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Ac, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, _| {
            let grand = v.grand();
            Coalition::all(n)
                .filter(|s| !s.is_empty() && *s != grand)
                .map(|s| Probe::ActiveConsistency { v: v.clone(), s })
                .collect()
        })
    })
}

/// Fitted `γ^{i,j}` for one player count, or a fitting-set witness.
enum TlbFit<T> {
    Maps(Vec<(usize, usize, Vec<T>)>),
    Broken(Witness<T>),
}

fn fit_tlb<T: Scalar>(rule: &SolutionRule<T>, n: usize, plan: &SamplePlan, skipped: &AtomicUsize) -> Result<TlbFit<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream((1 << 40) + n as u64);
    let mut fitting: Vec<Game<T>> = Coalition::all(n).skip(1).map(|s| crate::game::indicator_game(n, s)).collect();
    for _ in 0..TLB_EXTRA_FIT_GAMES {
        fitting.push(Generator::Uniform.sample_in(n, &mut rng, plan.worth_range)?);
    }
    let mut evaluated = Vec::new();
    for g in fitting {
        match rule.evaluate(&g) {
            Ok(x) => evaluated.push((g, x)),
            Err(Error::DomainGuardFailed { .. }) => {
                skipped.fetch_add(1, Ordering::Relaxed);
            }
            Err(e) => return Err(e),
        }
    }
    let mut maps = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            let mut used = Vec::new();
            for (g, x) in &evaluated {
                match pair_bargain(rule, g, x, i, j) {
                    Ok(diff) => {
                        rows.push(pair_contrasts(g, i, j));
                        rhs.push(diff);
                        used.push((g, x));
                    }
                    Err(Error::DomainGuardFailed { .. }) => {
                        skipped.fetch_add(1, Ordering::Relaxed);
                    }
                    Err(e) => return Err(e),
                }
            }
            let gamma = linalg::least_squares(&rows, &rhs).map_err(|_| Error::DomainGuardFailed {
                rule: rule.name().to_string(),
                reason: format!("TLB fitting set for players {},{} is rank deficient", i + 1, j + 1),
            })?;
            for (g, x) in used {
                let probe = Probe::Tlb { v: g.clone(), i, j, gamma: gamma.clone() };
                let outcome = probe.evaluate_with(rule, Some(x))?;
                if !outcome.holds(plan.tol) {
                    let deviation = outcome.deviation();
                    return Ok(TlbFit::Broken(Witness { trial: None, probe, outcome, deviation }));
                }
            }
            maps.push((i, j, gamma));
        }
    }
    Ok(TlbFit::Maps(maps))
}

/// Fits each `γ^{i,j}` on the indicator games plus random games, then checks the
/// fitted maps on fresh sampled games.
pub fn check_tlb<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    plan.validate()?;
    let fit_skipped = AtomicUsize::new(0);
    let mut fits = Vec::new();
    for n in plan.n_min..=plan.n_max {
        match fit_tlb(rule, n, plan, &fit_skipped)? {
            TlbFit::Maps(maps) => fits.push(maps),
            TlbFit::Broken(w) => {
                return Ok(CheckReport {
                    axiom: Axiom::Tlb,
                    rule: rule.name().to_string(),
                    verdict: Verdict::Violated,
                    witness: Some(w),
                    trials: plan.trials,
                    trials_run: 0,
                    skipped: fit_skipped.into_inner(),
                    seed: plan.seed,
                    n_range: (plan.n_min, plan.n_max),
                    mode: T::MODE,
                    tol: plan.tol,
                    note: Some(format!("fitted map fails on its own fitting set at n={n}")),
                });
            }
        }
    }
    let mut report = run_trials(Axiom::Tlb, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, _| {
            fits[n - plan.n_min]
                .iter()
                .map(|(i, j, gamma)| Probe::Tlb { v: v.clone(), i: *i, j: *j, gamma: gamma.clone() })
                .collect()
        })
    })?;
    report.skipped += fit_skipped.into_inner();
    Ok(report)
}

/// Raises one coalition's worth by `δ > 0` and compares its members' payoffs.
/// Symmetric linear rules additionally get the certificate `p_s ≥ 0` for `s < n`.
pub fn check_cm<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    let mut report = run_trials(Axiom::Cm, rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |w, rng| {
            Coalition::all(n)
                .skip(1)
                .map(|t| Probe::Monotonicity { w: w.clone(), t, delta: T::sample_uniform(rng, 0.0625, 10.0) })
                .collect()
        })
    })?;
    report.note = cm_certificate(rule, plan);
    Ok(report)
}

fn cm_certificate<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Option<String> {
    let mut parts = Vec::new();
    for n in plan.n_min..=plan.n_max {
        let coeffs = extract_coefficients(rule, n).ok()?;
        let sym = coeffs.symmetric?;
        let negative: Vec<String> =
            (1..n).filter(|&s| sym.p[s - 1] < T::zero()).map(|s| format!("p_{s}={}", sym.p[s - 1])).collect();
        parts.push(if negative.is_empty() {
            format!("n={n}: p_s >= 0 for all s < n")
        } else {
            format!("n={n}: negative {}", negative.join(", "))
        });
    }
    Some(format!("coefficient certificate: {}", parts.join("; ")))
}

/// Games `w|_{{i,j}}` for every pair, with occasional degenerate draws where `i`,
/// `j` or both are null too.
pub fn check_eg<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Eg, rule, plan, |n, rng| {
        let w: Game<T> = Generator::Uniform.sample_in(n, rng, plan.worth_range)?;
        let mut planned = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let carrier = match rng.gen_range(0..8) {
                    0 => Coalition::singleton(i),
                    1 => Coalition::singleton(j),
                    2 => Coalition::EMPTY,
                    _ => Coalition::from_players([i, j]),
                };
                planned.push((Probe::EqualGain { v: nullified_game(&w, carrier), i, j }, None));
            }
        }
        Ok(planned)
    })
}

pub fn check_mr<T: Scalar>(rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Mr, rule, plan, |n, rng| {
        let w: Game<T> = Generator::Uniform.sample_in(n, rng, plan.worth_range)?;
        Ok((0..n)
            .map(|i| (Probe::SingleActive { v: nullified_game(&w, Coalition::singleton(i)), i }, None))
            .collect())
    })
}

pub fn check_ngc<T: Scalar>(kind: NullifiedKind, rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    run_trials(Axiom::Ngc(kind), rule, plan, |n, rng| {
        uniform_trial(rule, n, rng, plan, |v, _| {
            Coalition::all(n).filter(|s| s.size() >= 2).map(|s| Probe::Ngc { kind, v: v.clone(), s }).collect()
        })
    })
}

/// Dispatches to the checker for `axiom`.
pub fn check<T: Scalar>(axiom: Axiom, rule: &SolutionRule<T>, plan: &SamplePlan) -> Result<CheckReport<T>> {
    match axiom {
        Axiom::E => check_e(rule, plan),
        Axiom::L => check_l(rule, plan),
        Axiom::Sym => check_sym(rule, plan),
        Axiom::Igp => check_igp(rule, plan),
        Axiom::Rnp => check_rnp(rule, plan),
        Axiom::Cu => check_cu(rule, plan),
        Axiom::Cdi => check_cdi(rule, plan),
        Axiom::Cdo => check_cdo(rule, plan),
        Axiom::Ac => check_ac(rule, plan),
        Axiom::Tlb => check_tlb(rule, plan),
        Axiom::Cm => check_cm(rule, plan),
        Axiom::Eg => check_eg(rule, plan),
        Axiom::Mr => check_mr(rule, plan),
        Axiom::Ngc(kind) => check_ngc(kind, rule, plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::values::Weights;

    fn plan() -> SamplePlan {
        SamplePlan::new(40, 3, 4, 7)
    }

    fn passes<T: Scalar>(axiom: Axiom, rule: &SolutionRule<T>) -> bool {
        check(axiom, rule, &plan()).unwrap().passed()
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("cd_i".parse::<Axiom>().unwrap(), Axiom::Cdi);
        assert!("XYZ".parse::<Axiom>().is_err());
    }

    #[test]
    fn efficiency() {
        assert!(passes(Axiom::E, &SolutionRule::<f64>::ed()));
        assert!(passes(Axiom::E, &SolutionRule::<f64>::dictator(0)));
        let report = check_e(&SolutionRule::<Rational>::standalone(), &plan()).unwrap();
        assert_eq!(report.verdict, Verdict::Violated);
        assert!(report.witness.unwrap().deviation > TAU_CHECK);
    }

    #[test]
    fn linearity() {
        assert!(passes(Axiom::L, &SolutionRule::<Rational>::shapley()));
        assert!(!passes(Axiom::L, &SolutionRule::<f64>::power(2.0)));
        assert!(!passes(Axiom::L, &SolutionRule::<f64>::prop_division()));
    }

    #[test]
    fn symmetry() {
        assert!(passes(Axiom::Sym, &SolutionRule::<Rational>::psi(2)));
        assert!(passes(Axiom::Sym, &SolutionRule::<f64>::cis()));
        let report = check_sym(&SolutionRule::<f64>::dictator(1), &plan()).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn igp_and_rnp() {
        assert!(passes(Axiom::Igp, &SolutionRule::<Rational>::psi(1)));
        assert!(passes(Axiom::Igp, &SolutionRule::<Rational>::shapley()));
        assert!(!passes(Axiom::Igp, &SolutionRule::<Rational>::ed()));
        assert!(passes(Axiom::Rnp, &SolutionRule::<Rational>::ed()));
        assert!(!passes(Axiom::Rnp, &SolutionRule::<f64>::power(2.0)));
    }

    #[test]
    fn composition() {
        let half = SolutionRule::<Rational>::affine(Weights::family("half-ed", |n| {
            let mut a = vec![Rational::from_i64(0); n];
            a[0] = Rational::from_ratio(1, 2);
            a[n - 1] = Rational::from_ratio(1, 2);
            a
        }));
        for axiom in [Axiom::Cu, Axiom::Cdi, Axiom::Cdo] {
            assert!(passes(axiom, &SolutionRule::<Rational>::shapley()), "{axiom}");
            assert!(passes(axiom, &SolutionRule::<Rational>::ed()), "{axiom}");
            assert!(passes(axiom, &SolutionRule::<Rational>::cis()), "{axiom}");
            assert!(!passes(axiom, &half), "{axiom}");
        }
        assert!(passes(Axiom::Cu, &SolutionRule::<f64>::prop_division()));
        assert!(passes(Axiom::Cdi, &SolutionRule::<f64>::prop_division()));
        assert!(!passes(Axiom::Cdo, &SolutionRule::<f64>::prop_division()));
    }

    #[test]
    fn active_consistency() {
        assert!(passes(Axiom::Ac, &SolutionRule::<Rational>::ensc()));
        assert!(!passes(Axiom::Ac, &SolutionRule::<Rational>::ed()));
    }

    #[test]
    fn power_rule_fails_active_consistency() {
        // n = 3, S = {1,2}, singletons (0,0,1), all other worths 0:
        // φ = (−1/3, −1/3, 2/3) but φ_1(R^{AC,S}) = −7/27.
        let v: Game<Rational> = Game::from_fn(3, |s| {
            if s == Coalition::singleton(2) { Rational::from_i64(1) } else { Rational::from_i64(0) }
        });
        let probe = Probe::ActiveConsistency { v, s: Coalition::from_players([0, 1]) };
        let out = probe.evaluate(&SolutionRule::power(2.0)).unwrap();
        assert_eq!(out.expected[0], Rational::from_ratio(-1, 3));
        assert_eq!(out.actual[0], Rational::from_ratio(-7, 27));
    }

    #[test]
    fn tlb() {
        assert!(passes(Axiom::Tlb, &SolutionRule::<Rational>::cis()));
        assert!(passes(Axiom::Tlb, &SolutionRule::<f64>::shapley()));
        assert!(!passes(Axiom::Tlb, &SolutionRule::<f64>::power(2.0)));
    }

    #[test]
    fn cis_tlb_map_is_the_singleton_difference() {
        let p = SamplePlan::new(1, 3, 3, 0);
        let TlbFit::Maps(maps) = fit_tlb(&SolutionRule::<Rational>::cis(), 3, &p, &AtomicUsize::new(0)).unwrap()
        else {
            panic!("CIS must fit");
        };
        let (_, _, gamma) = &maps[0];
        assert_eq!(gamma, &vec![Rational::from_i64(1), Rational::from_i64(0)]);
    }

    #[test]
    fn coalitional_monotonicity() {
        assert!(passes(Axiom::Cm, &SolutionRule::<Rational>::shapley()));
        assert!(passes(Axiom::Cm, &SolutionRule::<Rational>::cis()));
        let bad = SolutionRule::<Rational>::affine(Weights::family("2psi1-psi2", |n| {
            let mut a = vec![Rational::from_i64(0); n];
            a[0] = Rational::from_i64(2);
            a[1] = Rational::from_i64(-1);
            a
        }));
        let report = check_cm(&bad, &plan()).unwrap();
        assert!(!report.passed());
        assert!(report.note.unwrap().contains("negative p_2"));
    }

    #[test]
    fn equal_gain_and_single_active() {
        assert!(passes(Axiom::Eg, &SolutionRule::<Rational>::shapley()));
        assert!(passes(Axiom::Eg, &SolutionRule::<Rational>::marginal()));
        assert!(!passes(Axiom::Eg, &SolutionRule::<Rational>::dictator(0)));
        assert!(passes(Axiom::Mr, &SolutionRule::<Rational>::shapley()));
        assert!(!passes(Axiom::Mr, &SolutionRule::<Rational>::ed()));
    }

    #[test]
    fn nullified_consistency() {
        use NullifiedKind::*;
        assert!(passes(Axiom::Ngc(Hm), &SolutionRule::<Rational>::shapley()));
        assert!(passes(Axiom::Ngc(F), &SolutionRule::<Rational>::cis()));
        assert!(passes(Axiom::Ngc(M), &SolutionRule::<Rational>::ensc()));
        assert!(!passes(Axiom::Ngc(Hm), &SolutionRule::<Rational>::cis()));
        assert!(!passes(Axiom::Ngc(F), &SolutionRule::<Rational>::ensc()));
        let err = check_ngc(Hm, &SolutionRule::<f64>::shapley(), &SamplePlan::new(5, 2, 3, 0)).unwrap_err();
        assert!(matches!(err, Error::PlayerCountTooSmall { .. }));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let rule = SolutionRule::<f64>::psi(2);
        for axiom in [Axiom::Ac, Axiom::Cu, Axiom::Igp] {
            let p = plan();
            assert_eq!(check(axiom, &rule, &p).unwrap(), check(axiom, &rule, &p.clone().serial()).unwrap());
        }
    }

    #[test]
    fn witnesses_replay_and_round_trip() {
        let rule = SolutionRule::<Rational>::ed();
        let report = check_ac(&rule, &plan()).unwrap();
        let w = report.witness.clone().unwrap();
        assert_eq!(w.replay(&rule).unwrap(), w.outcome);
        let back = Probe::<Rational>::from_json(&w.probe.to_json()).unwrap();
        assert_eq!(back, w.probe);
        assert_eq!(report.to_json()["verdict"], "violated");
    }
}
