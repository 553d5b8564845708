//! Least-square values: efficient payoff vectors minimizing the size-weighted
//! variance of coalition excesses around the average excess.
//!
//! With `e(S,x) = v(S) − x(S)` and `ē = (2^n−1)^{-1} Σ_{S≠∅} e(S,x)`, each term
//! `e(S,x) − ē` is affine in `x`: `b_S − c_S·x` with `b_S = v(S) − v̄` and
//! `c_S = 1_S − κ·1`, where `v̄` is the mean nonempty worth and
//! `κ = 2^{n−1}/(2^n−1)`. Stationarity of the Lagrangian gives the bordered system
//!
//! ```text
//! [ H  1 ] [x]   [ g    ]      H = Σ m(|S|) c_S c_Sᵀ
//! [ 1ᵀ 0 ] [λ] = [ v(N) ]      g = Σ m(|S|) b_S c_S
//! ```

use crate::error::{Error, Result};
use crate::game::{Allocation, Coalition, Game};
use crate::linalg::{self, SolveError};
use crate::scalar::Scalar;

use super::rule::Weights;

/// Weight `m(s)` per coalition size `s = 1..=n`, plus an optional weight on the
/// empty coalition's term.
#[derive(Clone)]
pub struct LsWeights<T> {
    pub m: Weights<T>,
    /// When set, the objective also carries `m(0)·(e(∅,x) − ē)²`.
    pub empty_weight: Option<T>,
}

impl<T: Scalar> std::fmt::Debug for LsWeights<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LsWeights({})", self.describe())
    }
}

impl<T: Scalar> LsWeights<T> {
    pub fn new(m: Weights<T>) -> Self {
        Self { m, empty_weight: None }
    }

    pub fn with_empty_weight(mut self, w: T) -> Self {
        self.empty_weight = Some(w);
        self
    }

    pub(crate) fn describe(&self) -> String {
        let base = match &self.m {
            Weights::Fixed(w) => w.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            Weights::Family { label, .. } => label.clone(),
        };
        match &self.empty_weight {
            Some(w) => format!("{base};empty={w}"),
            None => base,
        }
    }

    /// Resolves and validates `m` for `n` players.
    pub fn resolve(&self, n: usize) -> Result<Vec<T>> {
        let m = self.m.resolve(n)?;
        if m.iter().chain(self.empty_weight.iter()).any(|w| w < &T::zero()) {
            return Err(Error::InvalidWeights("least-square weights must be nonnegative".into()));
        }
        if !m[..n - 1].iter().any(|w| w > &T::zero()) {
            return Err(Error::InvalidWeights("some size s in 1..n-1 needs a positive weight".into()));
        }
        Ok(m)
    }
}

fn mean_excess_shift<T: Scalar>(n: usize) -> T {
    T::from_ratio(1 << (n - 1), (1 << n) - 1)
}

pub fn least_square_value<T: Scalar>(v: &Game<T>, weights: &LsWeights<T>) -> Result<Allocation<T>> {
    let n = v.n();
    let m = weights.resolve(n)?;
    let count = T::from_i64((1 << n) - 1);
    let mean_worth: T = v.worths().iter().cloned().sum::<T>() / count;
    let kappa = mean_excess_shift::<T>(n);

    let dim = n + 1;
    let mut kkt = vec![vec![T::zero(); dim]; dim];
    let mut rhs = vec![T::zero(); dim];
    let mut accumulate = |weight: &T, b: T, c: &[T]| {
        for r in 0..n {
            rhs[r] = rhs[r].clone() + weight.clone() * b.clone() * c[r].clone();
            for col in 0..n {
                kkt[r][col] = kkt[r][col].clone() + weight.clone() * c[r].clone() * c[col].clone();
            }
        }
    };
    let mut c = vec![T::zero(); n];
    for s in Coalition::all(n).skip(1) {
        let weight = &m[s.size() - 1];
        if weight.is_zero() {
            continue;
        }
        for (i, ci) in c.iter_mut().enumerate() {
            let member = if s.contains(i) { T::one() } else { T::zero() };
            *ci = member - kappa.clone();
        }
        accumulate(weight, v.worth(s).clone() - mean_worth.clone(), &c);
    }
    if let Some(weight) = &weights.empty_weight {
        let c_empty = vec![-kappa.clone(); n];
        accumulate(weight, -mean_worth.clone(), &c_empty);
    }
    for r in 0..n {
        kkt[r][n] = T::one();
        kkt[n][r] = T::one();
    }
    rhs[n] = v.grand_worth().clone();

    let solution = linalg::solve(&kkt, &rhs).map_err(|e| match e {
        SolveError::Singular => Error::DegenerateObjective("stationarity system is singular".into()),
        SolveError::IllConditioned(c) => {
            Error::DegenerateObjective(format!("stationarity system condition number {c:.3e}"))
        }
    })?;
    Ok(Allocation(solution[..n].to_vec()))
}

/// Weighted excess variance `Σ_{S≠∅} m(|S|)(e(S,x) − ē)²`, evaluated directly.
pub fn ls_objective<T: Scalar>(v: &Game<T>, x: &[T], weights: &LsWeights<T>) -> Result<T> {
    let n = v.n();
    let m = weights.resolve(n)?;
    let alloc = Allocation(x.to_vec());
    let excess = |s: Coalition| v.worth(s).clone() - alloc.sum_over(s);
    let mean: T = Coalition::all(n).skip(1).map(excess).sum::<T>() / T::from_i64((1 << n) - 1);
    let mut total: T = Coalition::all(n)
        .skip(1)
        .map(|s| {
            let d = excess(s) - mean.clone();
            m[s.size() - 1].clone() * d.clone() * d
        })
        .sum();
    if let Some(w) = &weights.empty_weight {
        total = total + w.clone() * mean.clone() * mean;
    }
    Ok(total)
}
