//! Seeded random game generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{additive_game, nullified_game, validate_player_count, Allocation, Coalition, Game};
use crate::scalar::Scalar;

/// Default worth range for sampled games.
pub const WORTH_RANGE: (f64, f64) = (-10.0, 10.0);

/// Named game generator. Player indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// i.i.d. worths on every nonempty coalition.
    Uniform,
    /// `x̂` for a uniform payoff vector `x`.
    Additive,
    /// Random combination of up to `n` unanimity games.
    UnanimityMixture,
    /// `w|_{{i,j}}` for uniform `w`: every other player is null.
    TwoActive(usize, usize),
    /// `w|_{{i}}` for uniform `w`.
    SingleActive(usize),
    /// Worth depends only on coalition size.
    Symmetric,
}

impl Generator {
    fn check(self, n: usize) -> Result<()> {
        validate_player_count(n)?;
        let players: &[usize] = match &self {
            Self::TwoActive(i, j) => {
                if i == j {
                    return Err(Error::UnknownGenerator(format!("two_active needs distinct players, got {self}")));
                }
                &[*i, *j]
            }
            Self::SingleActive(i) => std::slice::from_ref(i),
            _ => &[],
        };
        match players.iter().find(|&&p| p >= n) {
            Some(&p) => Err(Error::PlayerOutOfRange { player: p, n }),
            None => Ok(()),
        }
    }

    pub fn sample<T: Scalar, R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Result<Game<T>> {
        self.sample_in(n, rng, WORTH_RANGE)
    }

    pub fn sample_in<T: Scalar, R: Rng + ?Sized>(self, n: usize, rng: &mut R, range: (f64, f64)) -> Result<Game<T>> {
        self.check(n)?;
        let (lo, hi) = range;
        Ok(match self {
            Self::Uniform => uniform_game(n, rng, lo, hi),
            Self::Additive => additive_game(&uniform_allocation(n, rng, lo, hi)),
            Self::UnanimityMixture => unanimity_mixture(n, rng, lo, hi),
            Self::TwoActive(i, j) => {
                nullified_game(&uniform_game(n, rng, lo, hi), Coalition::from_players([i, j]))
            }
            Self::SingleActive(i) => nullified_game(&uniform_game(n, rng, lo, hi), Coalition::singleton(i)),
            Self::Symmetric => {
                let by_size: Vec<T> = (0..=n).map(|_| T::sample_uniform(rng, lo, hi)).collect();
                Game::from_fn(n, |s| by_size[s.size()].clone())
            }
        })
    }

    /// Deterministic game from a seed.
    pub fn generate<T: Scalar>(self, n: usize, seed: u64) -> Result<Game<T>> {
        self.sample(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => f.write_str("uniform"),
            Self::Additive => f.write_str("additive"),
            Self::UnanimityMixture => f.write_str("unanimity_mixture"),
            Self::TwoActive(i, j) => write!(f, "two_active:{},{}", i + 1, j + 1),
            Self::SingleActive(i) => write!(f, "single_active:{}", i + 1),
            Self::Symmetric => f.write_str("symmetric"),
        }
    }
}

/// Parses `uniform`, `two_active:1,2`, `single_active:3` and friends; players are 1-based.
impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownGenerator(s.to_string());
        let (name, args) = match s.split_once(':') {
            Some((name, args)) => (name, Some(args)),
            None => (s, None),
        };
        let players = |args: Option<&str>| -> Result<Vec<usize>> {
            args.ok_or_else(unknown)?
                .split(',')
                .map(|p| match p.trim().parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(unknown()),
                })
                .collect()
        };
        let g = match name.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "uniform" => Self::Uniform,
            "additive" => Self::Additive,
            "unanimity_mixture" | "unanimity" => Self::UnanimityMixture,
            "symmetric" => Self::Symmetric,
            "two_active" => match players(args)?.as_slice() {
                &[i, j] => Self::TwoActive(i, j),
                _ => return Err(unknown()),
            },
            "single_active" => match players(args)?.as_slice() {
                &[i] => Self::SingleActive(i),
                _ => return Err(unknown()),
            },
            _ => return Err(unknown()),
        };
        if args.is_some() && !matches!(g, Self::TwoActive(..) | Self::SingleActive(_)) {
            return Err(unknown());
        }
        Ok(g)
    }
}

pub fn uniform_game<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R, lo: f64, hi: f64) -> Game<T> {
    Game::from_fn(n, |s| if s.is_empty() { T::zero() } else { T::sample_uniform(rng, lo, hi) })
}

pub fn uniform_allocation<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R, lo: f64, hi: f64) -> Allocation<T> {
    Allocation((0..n).map(|_| T::sample_uniform(rng, lo, hi)).collect())
}

fn unanimity_mixture<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R, lo: f64, hi: f64) -> Game<T> {
    let carriers: Vec<(Coalition, T)> = (0..rng.gen_range(1..=n))
        .map(|_| (Coalition(rng.gen_range(1..1u32 << n)), T::sample_uniform(rng, lo, hi)))
        .collect();
    Game::from_fn(n, |s| {
        carriers.iter().filter(|(t, _)| t.is_subset_of(s)).map(|(_, c)| c.clone()).sum()
    })
}
