use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Allocation, Game};
use crate::scalar::Scalar;

use super::least_squares::{least_square_value, LsWeights};

type WeightFn<T> = Arc<dyn Fn(usize) -> Vec<T> + Send + Sync>;
type EvalFn<T> = Arc<dyn Fn(&Game<T>) -> Result<Allocation<T>> + Send + Sync>;

/// Size-indexed weight vector (`w[s − 1]` for size `s`), either pinned to one
/// player count or given as a family over all player counts.
#[derive(Clone)]
pub enum Weights<T> {
    Fixed(Vec<T>),
    Family { label: String, build: WeightFn<T> },
}

impl<T: Scalar> Weights<T> {
    pub fn family(label: impl Into<String>, build: impl Fn(usize) -> Vec<T> + Send + Sync + 'static) -> Self {
        Self::Family { label: label.into(), build: Arc::new(build) }
    }

    pub fn resolve(&self, n: usize) -> Result<Vec<T>> {
        let w = match self {
            Self::Fixed(w) => w.clone(),
            Self::Family { build, .. } => build(n),
        };
        if w.len() != n {
            return Err(Error::WeightLength { expected: n, found: w.len() });
        }
        Ok(w)
    }

    fn describe(&self) -> String {
        match self {
            Self::Fixed(w) => w.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            Self::Family { label, .. } => label.clone(),
        }
    }
}

impl<T: Scalar> fmt::Debug for Weights<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weights({})", self.describe())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiSize {
    /// `ψ^s` for a fixed `s`.
    Exact(usize),
    /// `ψ^{n−k}`.
    FromTop(usize),
}

impl PsiSize {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Self::Exact(s) => s,
            Self::FromTop(k) => n.saturating_sub(k),
        }
    }
}

#[derive(Clone)]
pub enum RuleKind<T> {
    Ed,
    Cis,
    Ensc,
    Shapley,
    Psi(PsiSize),
    SigmaShapley(Weights<T>),
    Affine(Weights<T>),
    LeastSquare(LsWeights<T>),
    Standalone,
    Marginal,
    /// 0-based index of the player who receives `v(N)`.
    Dictator(usize),
    PropDivision,
    /// `v({i})^α` plus an equal split of the remainder.
    Power(f64),
    Custom(EvalFn<T>),
}

/// Named, evaluable map from games to allocations.
#[derive(Clone)]
pub struct SolutionRule<T> {
    name: String,
    kind: RuleKind<T>,
}

impl<T: Scalar> fmt::Debug for SolutionRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SolutionRule({})", self.name)
    }
}

impl<T: Scalar> SolutionRule<T> {
    pub fn new(name: impl Into<String>, kind: RuleKind<T>) -> Self {
        Self { name: name.into(), kind }
    }

    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(&Game<T>) -> Result<Allocation<T>> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, RuleKind::Custom(Arc::new(eval)))
    }

    pub fn ed() -> Self {
        Self::new("ed", RuleKind::Ed)
    }

    pub fn cis() -> Self {
        Self::new("cis", RuleKind::Cis)
    }

    pub fn ensc() -> Self {
        Self::new("ensc", RuleKind::Ensc)
    }

    pub fn shapley() -> Self {
        Self::new("shapley", RuleKind::Shapley)
    }

    pub fn psi(s: usize) -> Self {
        Self::new(format!("psi:{s}"), RuleKind::Psi(PsiSize::Exact(s)))
    }

    pub fn psi_from_top(k: usize) -> Self {
        Self::new(format!("psi:n-{k}"), RuleKind::Psi(PsiSize::FromTop(k)))
    }

    pub fn sigma_shapley(sigma: Weights<T>) -> Self {
        Self::new(format!("sigma-shapley[{}]", sigma.describe()), RuleKind::SigmaShapley(sigma))
    }

    pub fn affine(alpha: Weights<T>) -> Self {
        Self::new(format!("affine[{}]", alpha.describe()), RuleKind::Affine(alpha))
    }

    pub fn least_square(m: LsWeights<T>) -> Self {
        Self::new(format!("least-square[{}]", m.describe()), RuleKind::LeastSquare(m))
    }

    pub fn standalone() -> Self {
        Self::new("standalone", RuleKind::Standalone)
    }

    pub fn marginal() -> Self {
        Self::new("marginal", RuleKind::Marginal)
    }

    /// `dictator` is 0-based; the name uses the 1-based index.
    pub fn dictator(dictator: usize) -> Self {
        Self::new(format!("dictator:{}", dictator + 1), RuleKind::Dictator(dictator))
    }

    pub fn prop_division() -> Self {
        Self::new("propdiv", RuleKind::PropDivision)
    }

    pub fn power(alpha: f64) -> Self {
        Self::new(format!("power:{alpha}"), RuleKind::Power(alpha))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &RuleKind<T> {
        &self.kind
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Domain guard: rejects games on which the rule is undefined.
    pub fn admits(&self, v: &Game<T>) -> Result<()> {
        let n = v.n();
        match &self.kind {
            RuleKind::PropDivision => {
                let singles: T = (0..n).map(|k| v.singleton_worth(k).clone()).sum();
                if singles.is_zero_within(crate::scalar::TAU) {
                    return Err(self.guard_failure("sum of singleton worths is zero"));
                }
            }
            RuleKind::Power(alpha) => {
                let integral = alpha.fract() == 0.0 && *alpha >= 0.0;
                if !integral && (0..n).any(|k| v.singleton_worth(k) < &T::zero()) {
                    return Err(self.guard_failure("negative singleton worth with a non-integer exponent"));
                }
                if *alpha < 0.0 && (0..n).any(|k| v.singleton_worth(k).is_zero()) {
                    return Err(self.guard_failure("zero singleton worth with a negative exponent"));
                }
            }
            RuleKind::Psi(size) => {
                let s = size.resolve(n);
                if s == 0 || s > n {
                    return Err(Error::SizeOutOfRange { s, n });
                }
            }
            RuleKind::Dictator(d) if *d >= n => return Err(Error::PlayerOutOfRange { player: *d, n }),
            _ => {}
        }
        Ok(())
    }

    fn guard_failure(&self, reason: &str) -> Error {
        Error::DomainGuardFailed { rule: self.name.clone(), reason: reason.into() }
    }

    pub fn evaluate(&self, v: &Game<T>) -> Result<Allocation<T>> {
        self.admits(v)?;
        let n = v.n();
        let pay = match &self.kind {
            RuleKind::Ed => super::ed_value(v),
            RuleKind::Cis => super::cis_value(v),
            RuleKind::Ensc => super::ensc_value(v),
            RuleKind::Shapley => super::shapley_value(v),
            RuleKind::Psi(size) => super::psi_value(v, size.resolve(n))?,
            RuleKind::SigmaShapley(sigma) => super::sigma_shapley_value(v, &sigma.resolve(n)?)?,
            RuleKind::Affine(alpha) => super::affine_value(v, &alpha.resolve(n)?)?,
            RuleKind::LeastSquare(m) => least_square_value(v, m)?,
            RuleKind::Standalone => super::standalone_value(v),
            RuleKind::Marginal => super::marginal_value(v),
            RuleKind::Dictator(d) => super::dictator_value(v, *d)?,
            RuleKind::PropDivision => {
                let singles: T = (0..n).map(|k| v.singleton_worth(k).clone()).sum();
                let scale = v.grand_worth().clone() / singles;
                Allocation((0..n).map(|i| v.singleton_worth(i).clone() * scale.clone()).collect())
            }
            RuleKind::Power(alpha) => {
                let powered = (0..n).map(|i| power(v.singleton_worth(i), *alpha)).collect::<Result<Vec<T>>>()?;
                let rest = (v.grand_worth().clone() - powered.iter().cloned().sum::<T>()) / T::from_usize(n);
                Allocation(powered.into_iter().map(|p| p + rest.clone()).collect())
            }
            RuleKind::Custom(eval) => eval(v)?,
        };
        if pay.iter().any(|x| !x.is_finite_val()) {
            return Err(Error::NonFinite);
        }
        Ok(pay)
    }

    /// `true` for the built-in rules known to be efficient, linear and symmetric.
    pub fn is_builtin_els(&self) -> bool {
        matches!(
            self.kind,
            RuleKind::Ed
                | RuleKind::Cis
                | RuleKind::Ensc
                | RuleKind::Shapley
                | RuleKind::Psi(_)
                | RuleKind::Affine(_)
                | RuleKind::LeastSquare(_)
        )
    }
}

fn power<T: Scalar>(base: &T, alpha: f64) -> Result<T> {
    if alpha.fract() == 0.0 && alpha.abs() <= u32::MAX as f64 {
        let p = base.powi(alpha.abs() as u32);
        return Ok(if alpha < 0.0 { T::one() / p } else { p });
    }
    T::from_f64(base.to_f64().powf(alpha)).ok_or(Error::NonFinite)
}
