use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{indicator_game, linear_combination, validate_player_count, Coalition, Game};
use crate::scalar::{binomial, Scalar, TAU};

use super::rule::SolutionRule;

const LINEARITY_SPOT_CHECKS: usize = 3;
const SPOT_CHECK_SEED: u64 = 0x5eed_c0ef;

/// Size-and-membership coefficients: `φ_i(v) = Σ_{S∋i} p_{|S|} v(S) + Σ_{S∌i} q_{|S|} v(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricCoefficients<T> {
    /// `p[s − 1]` for `s = 1..=n`.
    pub p: Vec<T>,
    /// `q[s − 1]` for `s = 1..n`.
    pub q: Vec<T>,
}

/// Per-player coefficient table of a linear rule, `p_i(S) = φ_i(e_S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCoefficients<T> {
    pub n: usize,
    /// `table[i][S.mask()]`; the column for `∅` is zero.
    pub table: Vec<Vec<T>>,
    /// Present iff every `p_i(S)` depends only on `|S|` and whether `i ∈ S`.
    pub symmetric: Option<SymmetricCoefficients<T>>,
    /// Symmetric form with `p_n = 1/n` and `q_k = −k/(n−k)·p_k`.
    pub els: bool,
}

impl<T: Scalar> LinearCoefficients<T> {
    /// `q_k = −k/(n−k)·p_k` for every `k < n`.
    pub fn satisfies_sigma_condition(&self) -> bool {
        let Some(sym) = &self.symmetric else { return false };
        let n = self.n;
        (1..n).all(|k| {
            let expected = -(T::from_ratio(k as i64, (n - k) as i64) * sym.p[k - 1].clone());
            sym.q[k - 1].approx_eq(&expected, TAU)
        })
    }

    /// `φ(x̂) = x` for every `x`, read off the table: `Σ_{S∋k} p_i(S) = [i = k]`.
    /// Among ELS values this singles out the affine combinations with `α_n = 0`.
    pub fn satisfies_igp(&self) -> bool {
        let n = self.n;
        self.table.iter().enumerate().all(|(i, row)| {
            (0..n).all(|k| {
                let total: T = Coalition::all(n).filter(|s| s.contains(k)).map(|s| row[s.mask()].clone()).sum();
                let target = if i == k { T::one() } else { T::zero() };
                total.approx_eq(&target, TAU)
            })
        })
    }

    /// Evaluates `Σ_S p_i(S) v(S)`.
    pub fn apply(&self, v: &Game<T>) -> Vec<T> {
        self.table
            .iter()
            .map(|row| row.iter().zip(v.worths()).map(|(p, w)| p.clone() * w.clone()).sum())
            .collect()
    }
}

pub fn extract_coefficients<T: Scalar>(rule: &SolutionRule<T>, n: usize) -> Result<LinearCoefficients<T>> {
    validate_player_count(n)?;
    spot_check_linearity(rule, n)?;

    let mut table = vec![vec![T::zero(); 1 << n]; n];
    for s in Coalition::all(n).skip(1) {
        let pay = rule.evaluate(&indicator_game(n, s))?;
        for (i, x) in pay.0.into_iter().enumerate() {
            table[i][s.mask()] = x;
        }
    }
    let symmetric = symmetric_form(&table, n);
    let mut coeffs = LinearCoefficients { n, table, symmetric, els: false };
    coeffs.els = coeffs.symmetric.as_ref().is_some_and(|sym| {
        sym.p[n - 1].approx_eq(&T::from_ratio(1, n as i64), TAU)
    }) && coeffs.satisfies_sigma_condition();
    Ok(coeffs)
}

fn spot_check_linearity<T: Scalar>(rule: &SolutionRule<T>, n: usize) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    for _ in 0..LINEARITY_SPOT_CHECKS {
        let v = Game::from_fn(n, |_| T::sample_uniform(&mut rng, -10.0, 10.0));
        let w = Game::from_fn(n, |_| T::sample_uniform(&mut rng, -10.0, 10.0));
        let c = T::sample_uniform(&mut rng, -3.0, 3.0);
        let d = T::sample_uniform(&mut rng, -3.0, 3.0);
        let mixed = rule.evaluate(&linear_combination(&[(c.clone(), &v), (d.clone(), &w)])?)?;
        let combined = rule.evaluate(&v)?.scaled(&c).plus(&rule.evaluate(&w)?.scaled(&d));
        if !mixed.approx_eq(&combined, TAU) {
            return Err(Error::NotLinear {
                rule: rule.name().to_string(),
                detail: format!("φ(cv + dw) = {mixed} but cφ(v) + dφ(w) = {combined}"),
            });
        }
    }
    Ok(())
}

fn symmetric_form<T: Scalar>(table: &[Vec<T>], n: usize) -> Option<SymmetricCoefficients<T>> {
    let mut p: Vec<Option<T>> = vec![None; n];
    let mut q: Vec<Option<T>> = vec![None; n.saturating_sub(1)];
    for s in Coalition::all(n).skip(1) {
        let size = s.size();
        for (i, row) in table.iter().enumerate() {
            let slot = if s.contains(i) { &mut p[size - 1] } else { &mut q[size - 1] };
            match slot {
                Some(existing) if !existing.approx_eq(&row[s.mask()], TAU) => return None,
                Some(_) => {}
                None => *slot = Some(row[s.mask()].clone()),
            }
        }
    }
    Some(SymmetricCoefficients {
        p: p.into_iter().map(|x| x.unwrap_or_else(T::zero)).collect(),
        q: q.into_iter().map(|x| x.unwrap_or_else(T::zero)).collect(),
    })
}

/// `σ(s) = n·C(n−1, s−1)·p_s`; requires the σ-representability condition on `q`.
pub fn fit_sigma<T: Scalar>(coeffs: &LinearCoefficients<T>) -> Result<Vec<T>> {
    let n = coeffs.n;
    let Some(sym) = &coeffs.symmetric else {
        return Err(Error::NotSigmaRepresentable("coefficients are not symmetric".into()));
    };
    if !coeffs.satisfies_sigma_condition() {
        return Err(Error::NotSigmaRepresentable("q_k differs from -k/(n-k)·p_k".into()));
    }
    Ok((1..=n).map(|s| T::from_i64(n as i64 * binomial(n - 1, s - 1)) * sym.p[s - 1].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::values::Weights;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    #[test]
    fn ed_coefficients() {
        let c = extract_coefficients(&SolutionRule::<Rational>::ed(), 4).unwrap();
        for (i, row) in c.table.iter().enumerate() {
            for s in Coalition::all(4) {
                let expected = if s == Coalition::grand(4) { q(1, 4) } else { q(0, 1) };
                assert_eq!(row[s.mask()], expected, "player {i} coalition {s}");
            }
        }
        assert!(c.els);
        assert_eq!(fit_sigma(&c).unwrap(), vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn cis_coefficients() {
        for n in 2..=5 {
            let c = extract_coefficients(&SolutionRule::<Rational>::cis(), n).unwrap();
            let sym = c.symmetric.clone().unwrap();
            assert_eq!(sym.p[0], q(n as i64 - 1, n as i64));
            assert_eq!(sym.q[0], q(-1, n as i64));
            assert_eq!(sym.p[n - 1], q(1, n as i64));
            for s in 2..n {
                assert_eq!(sym.p[s - 1], q(0, 1));
                assert_eq!(sym.q[s - 1], q(0, 1));
            }
            assert_eq!(sym.q[0], -(q(1, n as i64 - 1) * sym.p[0].clone()));
            assert!(c.els);
            let mut sigma = vec![q(0, 1); n];
            sigma[0] = q(n as i64 - 1, 1);
            sigma[n - 1] = q(1, 1);
            assert_eq!(fit_sigma(&c).unwrap(), sigma);
        }
    }

    #[test]
    fn shapley_sigma_is_one() {
        for n in 2..=6 {
            let c = extract_coefficients(&SolutionRule::<Rational>::shapley(), n).unwrap();
            assert_eq!(fit_sigma(&c).unwrap(), vec![q(1, 1); n]);
        }
    }

    #[test]
    fn sigma_shapley_satisfies_sigma_condition_without_efficiency() {
        let sigma = Weights::Fixed(vec![q(3, 1), q(-1, 2), q(5, 7), q(2, 1)]);
        let c = extract_coefficients(&SolutionRule::sigma_shapley(sigma), 4).unwrap();
        assert!(c.satisfies_sigma_condition());
        assert!(!c.els);
        assert_eq!(fit_sigma(&c).unwrap(), vec![q(3, 1), q(-1, 2), q(5, 7), q(2, 1)]);
    }

    #[test]
    fn igp_on_coefficients() {
        assert!(extract_coefficients(&SolutionRule::<Rational>::shapley(), 4).unwrap().satisfies_igp());
        assert!(extract_coefficients(&SolutionRule::<Rational>::psi(2), 4).unwrap().satisfies_igp());
        assert!(!extract_coefficients(&SolutionRule::<Rational>::ed(), 4).unwrap().satisfies_igp());
    }

    #[test]
    fn nonlinear_rules_are_rejected() {
        let err = extract_coefficients(&SolutionRule::<f64>::power(2.0), 3).unwrap_err();
        assert!(matches!(err, Error::NotLinear { .. }));
    }

    #[test]
    fn asymmetric_rules_have_no_symmetric_form() {
        let c = extract_coefficients(&SolutionRule::<Rational>::dictator(0), 3).unwrap();
        assert!(c.symmetric.is_none());
        assert!(matches!(fit_sigma(&c), Err(Error::NotSigmaRepresentable(_))));
    }

    #[test]
    fn standalone_is_symmetric_but_not_sigma() {
        // p_1 = 1, q_1 = 0 breaks q_1 = −p_1/(n−1)
        let c = extract_coefficients(&SolutionRule::<Rational>::standalone(), 3).unwrap();
        assert!(c.symmetric.is_some());
        assert!(!c.satisfies_sigma_condition());
        assert!(fit_sigma(&c).is_err());
    }
}
