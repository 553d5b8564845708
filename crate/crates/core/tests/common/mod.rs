//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's value formulas or linear solver.

#![allow(dead_code)]

use tugames::{Coalition, Game, Permutation, Scalar};

/// Shapley value as the average marginal contribution over all `n!` orders.
pub fn shapley_by_orders<T: Scalar>(v: &Game<T>) -> Vec<T> {
    let n = v.n();
    let orders = Permutation::all(n);
    let mut total = vec![T::zero(); n];
    for order in &orders {
        let mut before = Coalition::EMPTY;
        for &i in order.as_slice() {
            let with = before.with(i);
            total[i] = total[i].clone() + v.worth(with).clone() - v.worth(before).clone();
            before = with;
        }
    }
    let count = T::from_usize(orders.len());
    total.into_iter().map(|x| x / count.clone()).collect()
}

/// `Σ_{S≠∅} m(|S|)(e(S,x) − ē)²` with `ē` the mean excess over nonempty `S`.
pub fn ls_objective_f64(v: &Game<f64>, m: &[f64], x: &[f64]) -> f64 {
    let excess = excesses(v, x);
    let mean = excess.iter().sum::<f64>() / excess.len() as f64;
    Coalition::all(v.n())
        .skip(1)
        .zip(&excess)
        .map(|(s, e)| m[s.size() - 1] * (e - mean).powi(2))
        .sum()
}

fn excesses(v: &Game<f64>, x: &[f64]) -> Vec<f64> {
    Coalition::all(v.n()).skip(1).map(|s| v.worth(s) - s.players().map(|i| x[i]).sum::<f64>()).collect()
}

fn ls_gradient(v: &Game<f64>, m: &[f64], x: &[f64]) -> Vec<f64> {
    let n = v.n();
    let excess = excesses(v, x);
    let mean = excess.iter().sum::<f64>() / excess.len() as f64;
    let kappa = (1u64 << (n - 1)) as f64 / ((1u64 << n) - 1) as f64;
    let mut grad = vec![0.0; n];
    for (s, e) in Coalition::all(n).skip(1).zip(&excess) {
        let w = 2.0 * m[s.size() - 1] * (e - mean);
        for (i, g) in grad.iter_mut().enumerate() {
            *g += w * (kappa - if s.contains(i) { 1.0 } else { 0.0 });
        }
    }
    grad
}

/// Projected gradient descent on `{x : Σx = v(N)}` with backtracking, from the
/// equal split. Runs at most `1e5` iterations.
pub fn ls_minimizer(v: &Game<f64>, m: &[f64]) -> Vec<f64> {
    let n = v.n();
    let mut x = vec![v.grand_worth() / n as f64; n];
    let mut f = ls_objective_f64(v, m, &x);
    let mut step = 1.0;
    for _ in 0..100_000 {
        let mut g = ls_gradient(v, m, &x);
        let mean = g.iter().sum::<f64>() / n as f64;
        g.iter_mut().for_each(|gi| *gi -= mean);
        let norm2: f64 = g.iter().map(|gi| gi * gi).sum();
        if norm2 < 1e-26 {
            break;
        }
        step *= 2.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let ft = ls_objective_f64(v, m, &trial);
            if ft <= f - 0.5 * step * norm2 {
                x = trial;
                f = ft;
                break;
            }
            step *= 0.5;
            if step < 1e-30 {
                return x;
            }
        }
    }
    x
}

pub fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).to_f64().abs()).fold(0.0, f64::max)
}
