//! Exact linear algebra over Q: reduced row echelon form, a deterministic
//! particular solution (free variables set to zero), and kernel bases.

use crate::arith::Rational;

#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce().len()
    }

    /// In-place RREF; returns the pivot column of each pivot row.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (row..self.rows).find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            self.swap_rows(row, pivot_row);
            let inv = self.get(row, col).recip().unwrap();
            for k in col..self.cols {
                let v = self.get(row, k) * &inv;
                self.set(row, k, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for k in col..self.cols {
                        let v = self.get(r, k) - &(&factor * self.get(row, k));
                        self.set(r, k, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }
}

/// Solves `A x = rhs` exactly. Returns the deterministic particular solution
/// with every free variable zero, or `None` when inconsistent.
pub fn solve(a: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    debug_assert_eq!(a.rows, rhs.len());
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, rhs[i].clone());
    }
    let pivots = aug.reduce();
    if pivots.last() == Some(&a.cols) {
        return None; // pivot in the rhs column: inconsistent
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug.get(row, a.cols).clone();
    }
    Some(x)
}

/// A basis of the kernel of `A`, in the deterministic free-variable order.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = m.reduce();
    let pivot_set: Vec<usize> = pivots.clone();
    let mut basis = Vec::new();
    for free in 0..a.cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); a.cols];
        v[free] = Rational::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -m.get(row, free);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&c| q(c)).collect()).collect(),
        )
    }

    #[test]
    fn solve_square_system() {
        let a = mat(&[&[2, 1], &[1, -1]]);
        let x = solve(&a, &[q(5), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let a = mat(&[&[1, 1, 1]]);
        let x = solve(&a, &[q(7)]).unwrap();
        assert_eq!(x, vec![q(7), q(0), q(0)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[q(1), q(3)]).is_none());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for i in 0..a.rows {
                let mut acc = Rational::zero();
                for j in 0..a.cols {
                    let t = a.get(i, j) * &v[j];
                    acc += &t;
                }
                assert!(acc.is_zero());
            }
        }
        assert_eq!(mat(&[&[1, 0], &[0, 1]]).rank(), 2);
    }
}
