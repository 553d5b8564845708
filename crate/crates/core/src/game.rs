//! Player sets, coalitions and characteristic-function games.
//!
//! Players are indexed from 0 internally; player `i` occupies bit `i` of a
//! [`Coalition`] mask. Files and human-readable output use 1-based indices.

use std::fmt;
use std::ops::{BitAnd, BitOr, Deref, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, TAU_NULL};

pub const MIN_PLAYERS: usize = 2;
pub const MAX_PLAYERS: usize = 20;

pub fn validate_player_count(n: usize) -> Result<()> {
    if (MIN_PLAYERS..=MAX_PLAYERS).contains(&n) {
        Ok(())
    } else {
        Err(Error::PlayerCount { n, min: MIN_PLAYERS, max: MAX_PLAYERS })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn grand(n: usize) -> Self {
        Self(((1u64 << n) - 1) as u32)
    }

    pub const fn singleton(player: usize) -> Self {
        Self(1 << player)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        Self(players.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub const fn mask(self) -> usize {
        self.0 as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 & (1 << player) != 0
    }

    pub const fn with(self, player: usize) -> Self {
        Self(self.0 | (1 << player))
    }

    pub const fn without(self, player: usize) -> Self {
        Self(self.0 & !(1 << player))
    }

    pub const fn complement(self, n: usize) -> Self {
        Self(Self::grand(n).0 & !self.0)
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn players(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Every subset of `self` (including the empty set and `self`), in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(Coalition(cur))
        })
    }

    /// Every coalition of an `n`-player game, by mask.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << n).map(Coalition)
    }

    /// 1-based, comma-separated member list (`"1,3"`); empty string for the empty set.
    pub fn key(self) -> String {
        self.players().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl BitOr for Coalition {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl BitAnd for Coalition {
    type Output = Self;

    fn bitand(self, rhs: Self) -> Self {
        Self(self.0 & rhs.0)
    }
}

impl Sub for Coalition {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self(self.0 & !rhs.0)
    }
}

/// Payoff vector; entry `i` is the payoff of player `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation<T>(pub Vec<T>);

impl<T: Scalar> Allocation<T> {
    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> T {
        self.0.iter().cloned().sum()
    }

    pub fn mean(&self) -> T {
        self.total() / T::from_usize(self.n())
    }

    /// Sum of payoffs over the members of `s`.
    pub fn sum_over(&self, s: Coalition) -> T {
        s.players().map(|i| self.0[i].clone()).sum()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n() && self.0.iter().zip(&other.0).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for Allocation<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T: Scalar> fmt::Display for Allocation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Bijection on players: `map[i]` is the image of player `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n {
                return Err(Error::InvalidPermutation(format!("image {j} out of range for {n} players")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!("image {j} repeated")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Self { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, player: usize) -> usize {
        self.map[player]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, s: Coalition) -> Coalition {
        Coalition::from_players(s.players().map(|i| self.map[i]))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { map: other.map.iter().map(|&j| self.map[j]).collect() }
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { map: cur.clone() });
            let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| cur[k] < cur[k + 1]) else {
                break;
            };
            let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
            cur.swap(k, l);
            cur[k + 1..].reverse();
        }
        out
    }
}

/// TU-game on `n` players: a dense table of `2^n` worths with `worth[∅] = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Game<T> {
    n: usize,
    worth: Vec<T>,
}

impl<T: Scalar> Game<T> {
    pub fn new(n: usize, worth: Vec<T>) -> Result<Self> {
        validate_player_count(n)?;
        if worth.len() != 1 << n {
            return Err(Error::WorthTableLength { expected: 1 << n, found: worth.len() });
        }
        if !worth[0].is_zero() {
            return Err(Error::NonZeroEmptySet);
        }
        if worth.iter().any(|w| !w.is_finite_val()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, worth })
    }

    /// Builds a game from a worth function; the value at `∅` is forced to zero.
    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> T) -> Self {
        assert!((1..=MAX_PLAYERS).contains(&n), "player count {n} out of range");
        let worth = Coalition::all(n).map(|s| if s.is_empty() { T::zero() } else { f(s) }).collect();
        Self { n, worth }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_| T::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn worth(&self, s: Coalition) -> &T {
        &self.worth[s.mask()]
    }

    pub fn grand_worth(&self) -> &T {
        &self.worth[self.grand().mask()]
    }

    pub fn singleton_worth(&self, player: usize) -> &T {
        &self.worth[1 << player]
    }

    pub fn worths(&self) -> &[T] {
        &self.worth
    }

    pub fn into_worths(self) -> Vec<T> {
        self.worth
    }

    pub fn map(&self, mut f: impl FnMut(Coalition, &T) -> T) -> Self {
        Self::from_fn(self.n, |s| f(s, &self.worth[s.mask()]))
    }

    pub fn scaled(&self, c: &T) -> Self {
        self.map(|_, w| w.clone() * c.clone())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        same_n(self, other)?;
        Ok(self.map(|s, w| w.clone() + other.worth(s).clone()))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        same_n(self, other)?;
        Ok(self.map(|s, w| w.clone() - other.worth(s).clone()))
    }

    /// Pointwise comparison within `tol` (exact in rational mode).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.worth.iter().zip(&other.worth).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// `v(S ∪ {i}) − v(S)` for `i ∉ S`.
    pub fn marginal(&self, s: Coalition, player: usize) -> T {
        self.worth(s.with(player)).clone() - self.worth(s).clone()
    }

    pub fn is_null_player(&self, player: usize) -> bool {
        self.is_null_player_within(player, TAU_NULL)
    }

    pub fn is_null_player_within(&self, player: usize, tol: f64) -> bool {
        let rest = self.grand().without(player);
        rest.subsets().all(|s| self.marginal(s, player).is_zero_within(tol))
    }
}

fn same_n<T>(a: &Game<T>, b: &Game<T>) -> Result<()> {
    if a.n == b.n {
        Ok(())
    } else {
        Err(Error::MixedPlayerCount { expected: a.n, found: b.n })
    }
}

fn check_coalition(n: usize, s: Coalition) -> Result<()> {
    if s.is_subset_of(Coalition::grand(n)) {
        Ok(())
    } else {
        Err(Error::CoalitionOutOfRange(format!("{s:?}")))
    }
}

/// `u_T(S) = 1` iff `T ⊆ S`.
pub fn unanimity_game<T: Scalar>(n: usize, t: Coalition) -> Result<Game<T>> {
    validate_player_count(n)?;
    check_coalition(n, t)?;
    if t.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    Ok(Game::from_fn(n, |s| if t.is_subset_of(s) { T::one() } else { T::zero() }))
}

/// `v*(S) = v(N) − v(N∖S)`.
pub fn dual_game<T: Scalar>(v: &Game<T>) -> Game<T> {
    let grand = v.grand();
    let total = v.grand_worth().clone();
    v.map(|s, _| total.clone() - v.worth(grand - s).clone())
}

/// `x̂(S) = Σ_{i∈S} x_i`.
pub fn additive_game<T: Scalar>(x: &Allocation<T>) -> Game<T> {
    Game::from_fn(x.n(), |s| x.sum_over(s))
}

/// `πv` with `(πv)(πS) = v(S)`.
pub fn permute_game<T: Scalar>(v: &Game<T>, pi: &Permutation) -> Result<Game<T>> {
    if pi.n() != v.n() {
        return Err(Error::InvalidPermutation(format!(
            "permutation on {} players applied to a {}-player game",
            pi.n(),
            v.n()
        )));
    }
    let inv = pi.inverse();
    Ok(Game::from_fn(v.n(), |s| v.worth(inv.apply(s)).clone()))
}

/// `v^t`: `v` with the grand-coalition worth replaced by `t`.
pub fn replace_grand<T: Scalar>(v: &Game<T>, t: &T) -> Game<T> {
    let grand = v.grand();
    v.map(|s, w| if s == grand { t.clone() } else { w.clone() })
}

/// `v|_S(T) = v(T ∩ S)`; every player outside `S` is null in the result.
pub fn nullified_game<T: Scalar>(v: &Game<T>, s: Coalition) -> Game<T> {
    Game::from_fn(v.n(), |t| v.worth(t & s).clone())
}

/// Null players, detected exactly in rational mode and within `TAU_NULL` otherwise.
pub fn null_players<T: Scalar>(v: &Game<T>) -> Coalition {
    Coalition::from_players((0..v.n()).filter(|&i| v.is_null_player(i)))
}

pub fn linear_combination<T: Scalar>(terms: &[(T, &Game<T>)]) -> Result<Game<T>> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidGameFile("empty linear combination".into()));
    };
    let n = first.n();
    for (_, g) in terms {
        if g.n() != n {
            return Err(Error::MixedPlayerCount { expected: n, found: g.n() });
        }
    }
    Ok(Game::from_fn(n, |s| terms.iter().map(|(c, g)| c.clone() * g.worth(s).clone()).sum()))
}

/// Indicator game `e_S`: worth 1 on `S` and 0 elsewhere.
pub fn indicator_game<T: Scalar>(n: usize, s: Coalition) -> Game<T> {
    Game::from_fn(n, |t| if t == s { T::one() } else { T::zero() })
}
