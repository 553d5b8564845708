//! Small dense linear solves over either scalar mode.

use crate::scalar::Scalar;

/// Condition-number ceiling beyond which a float system is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    Singular,
    IllConditioned(f64),
}

/// Gauss-Jordan inverse with partial pivoting. Exact for rationals.
pub fn invert<T: Scalar>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>, SolveError> {
    let dim = a.len();
    let mut work: Vec<Vec<T>> = a.to_vec();
    let mut inv: Vec<Vec<T>> =
        (0..dim).map(|r| (0..dim).map(|c| if r == c { T::one() } else { T::zero() }).collect()).collect();
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&r1, &r2| {
                let (x, y) = (work[r1][col].abs_val(), work[r2][col].abs_val());
                x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if work[pivot][col].is_zero() {
            return Err(SolveError::Singular);
        }
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let p = work[col][col].clone();
        for c in 0..dim {
            work[col][c] = work[col][c].clone() / p.clone();
            inv[col][c] = inv[col][c].clone() / p.clone();
        }
        for r in 0..dim {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let f = work[r][col].clone();
            for c in 0..dim {
                let w = work[col][c].clone() * f.clone();
                work[r][c] = work[r][c].clone() - w;
                let i = inv[col][c].clone() * f.clone();
                inv[r][c] = inv[r][c].clone() - i;
            }
        }
    }
    if !T::EXACT {
        let cond = norm1(a) * norm1(&inv);
        if !cond.is_finite() || cond > MAX_CONDITION {
            return Err(SolveError::IllConditioned(cond));
        }
    }
    Ok(inv)
}

pub fn mat_vec<T: Scalar>(a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r.clone() * v.clone()).sum()).collect()
}

pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>, SolveError> {
    Ok(mat_vec(&invert(a)?, b))
}

/// Least-squares fit of `rows · γ ≈ rhs` through the normal equations.
pub fn least_squares<T: Scalar>(rows: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>, SolveError> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut gram = vec![vec![T::zero(); dim]; dim];
    let mut moment = vec![T::zero(); dim];
    for (row, y) in rows.iter().zip(rhs) {
        for r in 0..dim {
            if row[r].is_zero() {
                continue;
            }
            moment[r] = moment[r].clone() + row[r].clone() * y.clone();
            for c in 0..dim {
                gram[r][c] = gram[r][c].clone() + row[r].clone() * row[c].clone();
            }
        }
    }
    solve(&gram, &moment)
}

fn norm1<T: Scalar>(a: &[Vec<T>]) -> f64 {
    let dim = a.len();
    (0..dim).map(|c| a.iter().map(|row| row[c].abs_val().to_f64()).sum::<f64>()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn exact_solve() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(&a, &[r(3), r(5)]).unwrap();
        assert_eq!(x, vec![Rational::from_ratio(4, 5), Rational::from_ratio(7, 5)]);
    }

    #[test]
    fn singular_systems_are_rejected() {
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert_eq!(solve(&a, &[r(1), r(2)]), Err(SolveError::Singular));
        let f = vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-15]];
        assert!(matches!(solve(&f, &[1.0, 1.0]), Err(SolveError::IllConditioned(_)) | Err(SolveError::Singular)));
    }

    #[test]
    fn overdetermined_fit() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let g = least_squares(&rows, &[1.0, 2.0, 3.0]).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-12 && (g[1] - 2.0).abs() < 1e-12);
    }
}
