//! Exact linear algebra over the rationals and the integers.
//!
//! Small dense systems only: centralizer ranks, apartment constraint
//! solving, kernel bases. Everything is exact; integer ranks use
//! fraction-free elimination in `i128`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rank over `Q` of an integer matrix, by fraction-free (Bareiss)
/// elimination. Entries must stay within `i128` during elimination, which
/// holds comfortably for the 0/±1 matrices this crate produces.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let (nr, nc) = (m.len(), m[0].len());
    let mut rank = 0;
    let mut prev: i128 = 1;
    let mut col = 0;
    while rank < nr && col < nc {
        let pivot_row = (rank..nr).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][col];
        for r in rank + 1..nr {
            for c in col + 1..nc {
                m[r][c] = (pivot * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nr = m.len();
    if nr == 0 {
        return Vec::new();
    }
    let nc = m[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..nc {
        if row == nr {
            break;
        }
        let Some(pr) = (row..nr).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].clone();
        for c in col..nc {
            let v = &m[row][c] / &inv;
            m[row][c] = v;
        }
        for r in 0..nr {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..nc {
                let v = &m[r][c] - &f * &m[row][c];
                m[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : Ax = 0}`.
pub fn kernel_basis(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let nc = rows[0].len();
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; nc];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..nc {
        if pivot_set[free] {
            continue;
        }
        let mut vec = vec![Rat::zero(); nc];
        vec[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            vec[p] = -m[r][free].clone();
        }
        basis.push(vec);
    }
    basis
}

/// Solve the square system `Ax = b` by Gaussian elimination; `None` if
/// singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some((0..n).map(|r| m[r][n].clone()).collect())
}

/// Outcome of solving an underdetermined affine system `Ax = b`.
pub struct AffineSolution {
    /// The minimum-norm solution (lies in the row space of `A`).
    pub point: Vec<Rat>,
    /// Basis of the solution set's direction space, `ker A`.
    pub directions: Vec<Vec<Rat>>,
}

/// Minimum-norm solution of `Ax = b` in `Q^nc` plus a kernel basis; `None`
/// when the system is inconsistent. Redundant rows are dropped first.
pub fn solve_affine(rows: &[Vec<Rat>], rhs: &[Rat], nc: usize) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len());
    debug_assert!(rows.iter().all(|r| r.len() == nc));
    // reduce the augmented system to find an independent subset and check
    // consistency
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs.iter())
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&nc) {
        return None; // 0 = nonzero
    }
    let indep_rows: Vec<Vec<Rat>> = aug
        .iter()
        .take(pivots.len())
        .map(|r| r[..nc].to_vec())
        .collect();
    let indep_rhs: Vec<Rat> = aug.iter().take(pivots.len()).map(|r| r[nc].clone()).collect();

    let point = if indep_rows.is_empty() {
        vec![Rat::zero(); nc]
    } else {
        // x = Aᵀ (A Aᵀ)⁻¹ b has minimal Euclidean norm among solutions
        let k = indep_rows.len();
        let mut gram = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut s = Rat::zero();
                for c in 0..nc {
                    s += &indep_rows[i][c] * &indep_rows[j][c];
                }
                gram[i][j] = s;
            }
        }
        let y = solve_square(&gram, &indep_rhs).expect("Gram matrix of independent rows");
        let mut x = vec![Rat::zero(); nc];
        for (i, yi) in y.iter().enumerate() {
            for c in 0..nc {
                x[c] += yi * &indep_rows[i][c];
            }
        }
        x
    };
    debug_assert!(rows
        .iter()
        .zip(rhs.iter())
        .all(|(r, b)| { dot(r, &point) == *b }));
    let directions = if indep_rows.is_empty() {
        (0..nc)
            .map(|i| {
                let mut v = vec![Rat::zero(); nc];
                v[i] = Rat::one();
                v
            })
            .collect()
    } else {
        kernel_basis(&indep_rows)
    };
    Some(AffineSolution { point, directions })
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Scale a rational vector to a primitive integer vector (for stable
/// perturbation directions).
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .map(|x| x.denom().clone())
        .fold(BigInt::one(), |acc, d| {
            let g = num_integer::Integer::gcd(&acc, &d);
            acc / g * d
        });
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let g = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_rank() {
        assert_eq!(rank_i64(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank_i64(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_i64(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(
            rank_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            2
        );
    }

    #[test]
    fn kernel() {
        let rows = vec![vec![rat(1), rat(1), rat(1)]];
        let basis = kernel_basis(&rows);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(dot(&rows[0], v).is_zero());
        }
    }

    #[test]
    fn affine_solution_minimal_norm() {
        // x + y = 2 in Q²: least-norm solution is (1, 1)
        let sol = solve_affine(&[vec![rat(1), rat(1)]], &[rat(2)], 2).unwrap();
        assert_eq!(sol.point, vec![rat(1), rat(1)]);
        assert_eq!(sol.directions.len(), 1);
        // inconsistent: x + y = 1 and x + y = 2
        assert!(solve_affine(
            &[vec![rat(1), rat(1)], vec![rat(1), rat(1)]],
            &[rat(1), rat(2)],
            2
        )
        .is_none());
        // redundant rows are fine
        let sol = solve_affine(
            &[vec![rat(1), rat(1)], vec![rat(2), rat(2)]],
            &[rat(2), rat(4)],
            2,
        )
        .unwrap();
        assert_eq!(sol.point, vec![rat(1), rat(1)]);
    }

    #[test]
    fn empty_system_spans_everything() {
        let sol = solve_affine(&[], &[], 3).unwrap();
        assert_eq!(sol.point, vec![rat(0), rat(0), rat(0)]);
        assert_eq!(sol.directions.len(), 3);
        let rows: Vec<Vec<Rat>> = vec![];
        assert_eq!(rank_rat(&rows), 0);
    }

    #[test]
    fn primitive_vector() {
        let v = vec![rat_frac(1, 2), rat_frac(-1, 3), rat(0)];
        let ints = primitive_integer_vector(&v);
        assert_eq!(
            ints,
            vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]
        );
    }
}
