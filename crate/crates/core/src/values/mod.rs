//! Allocation rules: the ELS family (ED, CIS, ENSC, Shapley, the per-size `ψ^s`
//! solutions and their affine combinations, σ-Shapley, least-square values), the
//! counterexample rules used to separate axioms, coefficient extraction and the
//! Shapley potential.

mod coefficients;
mod least_squares;
mod rule;

pub use coefficients::{extract_coefficients, fit_sigma, LinearCoefficients, SymmetricCoefficients};
pub use least_squares::{least_square_value, ls_objective, LsWeights};
pub use rule::{PsiSize, RuleKind, SolutionRule, Weights};

use crate::error::{Error, Result};
use crate::game::{dual_game, Allocation, Coalition, Game};
use crate::scalar::{binomial, Scalar};

/// Egalitarian division `v(N)/n`.
pub fn ed_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    let share = v.grand_worth().clone() / T::from_usize(v.n());
    Allocation(vec![share; v.n()])
}

/// Stand-alone worth plus an equal split of what remains.
pub fn cis_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    let n = v.n();
    let singles: T = (0..n).map(|k| v.singleton_worth(k).clone()).sum();
    let rest = (v.grand_worth().clone() - singles) / T::from_usize(n);
    Allocation((0..n).map(|i| v.singleton_worth(i).clone() + rest.clone()).collect())
}

/// CIS value of the dual game.
pub fn ensc_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    cis_value(&dual_game(v))
}

/// `s!(n−s−1)!/n!` for `s = 0..n−1`, exact before conversion.
fn shapley_weights<T: Scalar>(n: usize) -> Vec<T> {
    (0..n).map(|s| T::from_ratio(1, n as i64 * binomial(n - 1, s))).collect()
}

/// Marginal-contribution subset sum.
pub fn shapley_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    let n = v.n();
    let weights = shapley_weights::<T>(n);
    let mut pay = vec![T::zero(); n];
    for s in Coalition::all(n) {
        let w = &weights;
        for i in s.complement(n).players() {
            pay[i] = pay[i].clone() + w[s.size()].clone() * v.marginal(s, i);
        }
    }
    Allocation(pay)
}

/// `ψ^s` for `1 ≤ s ≤ n`; `ψ^n` is the egalitarian division.
pub fn psi_value<T: Scalar>(v: &Game<T>, s: usize) -> Result<Allocation<T>> {
    let n = v.n();
    if s == 0 || s > n {
        return Err(Error::SizeOutOfRange { s, n });
    }
    if s == n {
        return Ok(ed_value(v));
    }
    let mut total = T::zero();
    let mut outside = vec![T::zero(); n];
    for c in Coalition::all(n).filter(|c| c.size() == s) {
        let w = v.worth(c);
        total = total + w.clone();
        for i in c.complement(n).players() {
            outside[i] = outside[i].clone() + w.clone();
        }
    }
    let base = v.grand_worth().clone() / T::from_usize(n);
    let avg_all = total / T::from_i64(binomial(n, s));
    let lead = T::from_ratio(n as i64 - 1, s as i64);
    let denom_out = T::from_i64(binomial(n - 1, s));
    Ok(Allocation(
        outside
            .into_iter()
            .map(|out| base.clone() + lead.clone() * (avg_all.clone() - out / denom_out.clone()))
            .collect(),
    ))
}

/// `v_σ(S) = σ(|S|)·v(S)` for nonempty `S`; `sigma[s − 1]` holds `σ(s)`.
pub fn sigma_scaled_game<T: Scalar>(v: &Game<T>, sigma: &[T]) -> Result<Game<T>> {
    if sigma.len() != v.n() {
        return Err(Error::WeightLength { expected: v.n(), found: sigma.len() });
    }
    Ok(v.map(|s, w| sigma[s.size() - 1].clone() * w.clone()))
}

pub fn sigma_shapley_value<T: Scalar>(v: &Game<T>, sigma: &[T]) -> Result<Allocation<T>> {
    Ok(shapley_value(&sigma_scaled_game(v, sigma)?))
}

/// `Σ_s α_s ψ^s(v)`; `alpha[s − 1]` holds `α_s`, and the weights must sum to one.
pub fn affine_value<T: Scalar>(v: &Game<T>, alpha: &[T]) -> Result<Allocation<T>> {
    let n = v.n();
    check_affine(alpha, n)?;
    let mut pay = Allocation::zeros(n);
    for (k, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        pay = pay.plus(&psi_value(v, k + 1)?.scaled(a));
    }
    Ok(pay)
}

pub(crate) fn check_affine<T: Scalar>(alpha: &[T], n: usize) -> Result<()> {
    if alpha.len() != n {
        return Err(Error::WeightLength { expected: n, found: alpha.len() });
    }
    let sum: T = alpha.iter().cloned().sum();
    if !sum.approx_eq(&T::one(), crate::scalar::TAU) {
        return Err(Error::WeightsNotAffine { sum: sum.to_string() });
    }
    Ok(())
}

/// Shapley potential `P(v) = Σ_{S≠∅} (|S|−1)!(n−|S|)!/n! · v(S)`.
pub fn potential<T: Scalar>(v: &Game<T>) -> T {
    let n = v.n();
    let weights: Vec<T> = (1..=n).map(|s| T::from_ratio(1, n as i64 * binomial(n - 1, s - 1))).collect();
    Coalition::all(n).skip(1).map(|s| weights[s.size() - 1].clone() * v.worth(s).clone()).sum()
}

pub fn standalone_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    Allocation((0..v.n()).map(|i| v.singleton_worth(i).clone()).collect())
}

/// `v(N) − v(N∖{i})`.
pub fn marginal_value<T: Scalar>(v: &Game<T>) -> Allocation<T> {
    let grand = v.grand();
    Allocation((0..v.n()).map(|i| v.grand_worth().clone() - v.worth(grand.without(i)).clone()).collect())
}

pub fn dictator_value<T: Scalar>(v: &Game<T>, dictator: usize) -> Result<Allocation<T>> {
    if dictator >= v.n() {
        return Err(Error::PlayerOutOfRange { player: dictator, n: v.n() });
    }
    let mut pay = Allocation::zeros(v.n());
    pay.0[dictator] = v.grand_worth().clone();
    Ok(pay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{additive_game, unanimity_game};
    use crate::scalar::Rational;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    fn alloc(v: &[(i64, i64)]) -> Allocation<Rational> {
        Allocation(v.iter().map(|&(a, b)| q(a, b)).collect())
    }

    fn u(n: usize, players: &[usize]) -> Game<Rational> {
        unanimity_game(n, Coalition::from_players(players.iter().map(|p| p - 1))).unwrap()
    }

    fn sample(n: usize) -> Game<Rational> {
        Game::from_fn(n, |s| q((s.mask() as i64 * 7919) % 23 - 11, 4))
    }

    #[test]
    fn ed_examples() {
        let v = Game::from_fn(3, |s| if s.size() == 3 { q(9, 1) } else { q(1, 1) });
        assert_eq!(ed_value(&v), alloc(&[(3, 1), (3, 1), (3, 1)]));
        assert_eq!(ed_value(&Game::<Rational>::zero(4)), Allocation::zeros(4));
        let w = sample(4);
        assert_eq!(ed_value(&w), psi_value(&w, 4).unwrap());
    }

    #[test]
    fn cis_examples() {
        let v = Game::from_fn(3, |s| match s.mask() {
            1 => q(3, 1),
            7 => q(9, 1),
            _ => q(0, 1),
        });
        assert_eq!(cis_value(&v), alloc(&[(5, 1), (2, 1), (2, 1)]));
        let x = alloc(&[(1, 2), (-3, 1), (5, 3)]);
        assert_eq!(cis_value(&additive_game(&x)), x);
        assert_eq!(cis_value(&u(3, &[1, 2])), alloc(&[(1, 3), (1, 3), (1, 3)]));
    }

    #[test]
    fn ensc_examples() {
        assert_eq!(ensc_value(&u(3, &[1, 2])), alloc(&[(2, 3), (2, 3), (-1, 3)]));
        let x = alloc(&[(1, 2), (-3, 1), (5, 3)]);
        assert_eq!(ensc_value(&additive_game(&x)), x);
        // marginal form of the definition
        let v = sample(4);
        let m = marginal_value(&v);
        let rest = (v.grand_worth().clone() - m.total()) / q(4, 1);
        let expected = Allocation(m.0.iter().map(|x| x.clone() + rest.clone()).collect());
        assert_eq!(ensc_value(&v), expected);
    }

    #[test]
    fn shapley_examples() {
        assert_eq!(shapley_value(&u(3, &[1, 2])), alloc(&[(1, 2), (1, 2), (0, 1)]));
        let sym = Game::from_fn(4, |s| q(s.size() as i64 * s.size() as i64, 3));
        assert_eq!(shapley_value(&sym), alloc(&[(4, 3); 4]));
        let x = alloc(&[(1, 2), (-3, 1), (5, 3), (0, 1)]);
        assert_eq!(shapley_value(&additive_game(&x)), x);
    }

    #[test]
    fn psi_examples() {
        for n in 3..=5 {
            let v = sample(n);
            assert_eq!(psi_value(&v, 1).unwrap(), cis_value(&v));
            assert_eq!(psi_value(&v, n - 1).unwrap(), ensc_value(&v));
            let x = Allocation((0..n).map(|i| q(i as i64 * 3 - 2, 5)).collect());
            for s in 1..n {
                assert_eq!(psi_value(&additive_game(&x), s).unwrap(), x);
            }
        }
        assert_eq!(psi_value(&sample(3), 0), Err(Error::SizeOutOfRange { s: 0, n: 3 }));
        assert_eq!(psi_value(&sample(3), 4), Err(Error::SizeOutOfRange { s: 4, n: 3 }));
    }

    #[test]
    fn sigma_shapley_examples() {
        let v = sample(4);
        assert_eq!(sigma_shapley_value(&v, &vec![q(1, 1); 4]).unwrap(), shapley_value(&v));
        let only_grand = [q(0, 1), q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(sigma_shapley_value(&v, &only_grand).unwrap(), ed_value(&v));
        let delta = q(1, 2);
        let discounted: Vec<Rational> = (1..=4).map(|s| delta.powi(4 - s)).collect();
        assert_eq!(discounted[3], q(1, 1));
        let pay = sigma_shapley_value(&v, &discounted).unwrap();
        assert_eq!(pay.total(), v.grand_worth().clone());
    }

    #[test]
    fn affine_examples() {
        for n in 3..=5 {
            let v = sample(n);
            let mut uniform = vec![q(1, n as i64 - 1); n];
            uniform[n - 1] = q(0, 1);
            assert_eq!(affine_value(&v, &uniform).unwrap(), shapley_value(&v));
            let mut ed = vec![q(0, 1); n];
            ed[n - 1] = q(1, 1);
            assert_eq!(affine_value(&v, &ed).unwrap(), ed_value(&v));
            let mut cis = vec![q(0, 1); n];
            cis[0] = q(1, 1);
            assert_eq!(affine_value(&v, &cis).unwrap(), cis_value(&v));
        }
        assert!(matches!(affine_value(&sample(3), &[q(1, 1), q(1, 1), q(0, 1)]), Err(Error::WeightsNotAffine { .. })));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&u(3, &[1, 2, 3])), q(1, 3));
        assert_eq!(potential(&Game::<Rational>::zero(3)), q(0, 1));
        let v = sample(5);
        let sh = shapley_value(&v);
        for i in 0..5 {
            let without = crate::game::nullified_game(&v, v.grand().without(i));
            assert_eq!(sh[i], potential(&v) - potential(&without));
        }
    }

    #[test]
    fn counterexample_rules() {
        let x = alloc(&[(1, 2), (-3, 1), (5, 3)]);
        assert_eq!(standalone_value(&additive_game(&x)), x);
        assert_eq!(marginal_value(&u(3, &[1, 2])), alloc(&[(1, 1), (1, 1), (0, 1)]));
        let v = sample(4);
        let d = dictator_value(&v, 0).unwrap();
        assert_eq!(d[0], v.grand_worth().clone());
        assert!(d[1..].iter().all(|p| p == &q(0, 1)));
    }
}
