//! Transformed and reduced games used by the composition, active-player and
//! nullified-game consistency axioms.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::game::{dual_game, nullified_game, Allocation, Coalition, Game};
use crate::scalar::Scalar;
use crate::values::SolutionRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReducedGameKind {
    /// Active-player reduction `R^{AC,S}`.
    Ac,
    /// Nullified reduction with the outsiders acting as one block (`R^{HM,S}`).
    Hm,
    /// Projection-style nullified reduction (`R^{F,S}`).
    F,
    /// Complement-style nullified reduction (`R^{M,S}`).
    M,
    CompUp,
    CompDownInsider,
    CompDownOutsider,
}

/// The three nullified-game reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NullifiedKind {
    Hm,
    F,
    M,
}

impl NullifiedKind {
    pub const ALL: [NullifiedKind; 3] = [NullifiedKind::Hm, NullifiedKind::F, NullifiedKind::M];

    pub fn as_reduced(self) -> ReducedGameKind {
        match self {
            Self::Hm => ReducedGameKind::Hm,
            Self::F => ReducedGameKind::F,
            Self::M => ReducedGameKind::M,
        }
    }
}

impl fmt::Display for NullifiedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hm => "HM",
            Self::F => "F",
            Self::M => "M",
        })
    }
}

/// `U(x,v)(S) = v(S) − Σ_{i∈S} x_i`.
pub fn comp_up_residual<T: Scalar>(x: &Allocation<T>, v: &Game<T>) -> Game<T> {
    v.map(|s, w| w.clone() - x.sum_over(s))
}

/// `D_I(x,v)`: `v(N)` on the grand coalition, `Σ_{i∈S} x_i` on proper coalitions.
pub fn comp_down_insider<T: Scalar>(x: &Allocation<T>, v: &Game<T>) -> Game<T> {
    let grand = v.grand();
    v.map(|s, w| if s == grand { w.clone() } else { x.sum_over(s) })
}

/// `D_O(x,v)(S) = v(N) − Σ_{i∉S} x_i` for nonempty `S`.
pub fn comp_down_outsider<T: Scalar>(x: &Allocation<T>, v: &Game<T>) -> Game<T> {
    let n = v.n();
    let total = v.grand_worth().clone();
    v.map(|s, _| total.clone() - x.sum_over(s.complement(n)))
}

/// `R^{AC,S}(x,v)(T) = v(T) − Σ_{i∈T∖S} x_i`, for `S ⊊ N`.
pub fn reduce_ac<T: Scalar>(x: &Allocation<T>, v: &Game<T>, s: Coalition) -> Result<Game<T>> {
    if s == v.grand() {
        return Err(Error::NotProperSubset);
    }
    Ok(v.map(|t, w| w.clone() - x.sum_over(t - s)))
}

fn check_reduction_coalition<T: Scalar>(v: &Game<T>, s: Coalition) -> Result<()> {
    if !s.is_subset_of(v.grand()) {
        return Err(Error::CoalitionOutOfRange(format!("{s}")));
    }
    if s.size() < 2 {
        return Err(Error::CoalitionTooSmall { size: s.size() });
    }
    Ok(())
}

/// `R^{HM,S}`: `v(T ∪ O) − Σ_{j∈O} φ_j(v|_{T∪O})` when `T ∩ S ≠ ∅`, where `O = N∖S`.
///
/// The rule is evaluated on the `2^|S|` nullified games `v|_{T∪O}`, once each.
pub fn reduce_hm<T: Scalar>(rule: &SolutionRule<T>, v: &Game<T>, s: Coalition) -> Result<Game<T>> {
    check_reduction_coalition(v, s)?;
    reduce_hm_unchecked(v, s, |g| rule.evaluate(g))
}

/// `R^{HM,S}` with an arbitrary evaluator for the nullified games.
pub(crate) fn reduce_hm_unchecked<T: Scalar>(
    v: &Game<T>,
    s: Coalition,
    mut eval: impl FnMut(&Game<T>) -> Result<Allocation<T>>,
) -> Result<Game<T>> {
    let n = v.n();
    let outside = s.complement(n);
    let mut memo: HashMap<Coalition, T> = HashMap::new();
    let mut worth = vec![T::zero(); 1 << n];
    for t in Coalition::all(n) {
        if (t & s).is_empty() {
            continue;
        }
        let key = t | outside;
        let paid = match memo.get(&key) {
            Some(p) => p.clone(),
            None => {
                let pay = eval(&nullified_game(v, key))?;
                let p = pay.sum_over(outside);
                memo.insert(key, p.clone());
                p
            }
        };
        worth[t.mask()] = v.worth(key).clone() - paid;
    }
    Game::new(n, worth)
}

/// `R^{F,S}`: `v(N) − Σ_{j∉S} φ_j(v|_{{j}})` when `S ⊆ T`, else `v(T ∩ S)`.
pub fn reduce_f<T: Scalar>(rule: &SolutionRule<T>, v: &Game<T>, s: Coalition) -> Result<Game<T>> {
    check_reduction_coalition(v, s)?;
    let n = v.n();
    let mut paid = T::zero();
    for j in s.complement(n).players() {
        let pay = rule.evaluate(&nullified_game(v, Coalition::singleton(j)))?;
        paid = paid + pay[j].clone();
    }
    let top = v.grand_worth().clone() - paid;
    Ok(v.map(|t, _| if s.is_subset_of(t) { top.clone() } else { v.worth(t & s).clone() }))
}

/// `R^{M,S}`: `v(T ∪ O) − Σ_{j∈O} φ_j(v*|_{{j}})` when `T ∩ S ≠ ∅`, where `O = N∖S`.
pub fn reduce_m<T: Scalar>(rule: &SolutionRule<T>, v: &Game<T>, s: Coalition) -> Result<Game<T>> {
    check_reduction_coalition(v, s)?;
    let n = v.n();
    let outside = s.complement(n);
    let dual = dual_game(v);
    let mut paid = T::zero();
    for j in outside.players() {
        let pay = rule.evaluate(&nullified_game(&dual, Coalition::singleton(j)))?;
        paid = paid + pay[j].clone();
    }
    Ok(v.map(|t, _| {
        if (t & s).is_empty() {
            T::zero()
        } else {
            v.worth(t | outside).clone() - paid.clone()
        }
    }))
}

/// Dispatches to the nullified reduction of the given kind.
pub fn reduce_nullified<T: Scalar>(
    kind: NullifiedKind,
    rule: &SolutionRule<T>,
    v: &Game<T>,
    s: Coalition,
) -> Result<Game<T>> {
    match kind {
        NullifiedKind::Hm => reduce_hm(rule, v, s),
        NullifiedKind::F => reduce_f(rule, v, s),
        NullifiedKind::M => reduce_m(rule, v, s),
    }
}
