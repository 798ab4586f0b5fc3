//! Dense matrices over an abstract scalar, sized for the small systems this
//! crate solves: exact rational elimination for ranks, determinants and
//! inverses, and a one-sided Jacobi SVD for floating-point rank decisions.

use num::ToPrimitive;

use crate::rational::Rational;

/// Field-like scalar: exact (`Rational`) or approximate (`f64`).
pub trait Scalar:
    Clone
    + std::fmt::Debug
    + PartialEq
    + num::Zero
    + num::One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
{
    /// Magnitude used for pivot selection. Exact scalars may round; pivoting
    /// only needs a reasonable ordering, correctness never depends on it.
    fn pivot_magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn pivot_magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Rational {
    fn pivot_magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
            }
            acc
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Determinant by elimination with partial pivoting. Exact for exact
    /// scalars. Panics if the matrix is not square.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .pivot_magnitude()
                        .total_cmp(&a[(y, col)].pivot_magnitude())
                });
            let Some(p) = pivot else { return T::zero() };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let d = a[(col, col)].clone();
            det = det * d.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / d.clone();
                for c in col..n {
                    let sub = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - sub;
                }
            }
        }
        det
    }

    /// Row rank by elimination with exact zero tests. Meaningful for exact
    /// scalars; floating-point callers should use [`singular_values`].
    pub fn rank_exact(&self) -> usize {
        let mut space = RowSpace::new(self.cols);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
        }
        space.rank()
    }

    /// Solve `self * X = rhs` for square invertible `self`; `None` when
    /// singular. Gauss-Jordan with partial pivoting (exact for exact scalars).
    pub fn solve(&self, rhs: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .pivot_magnitude()
                        .total_cmp(&a[(y, col)].pivot_magnitude())
                })?;
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap_rows(pivot, col);
            }
            let d = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / d.clone();
            }
            for c in 0..b.cols {
                b[(col, c)] = b[(col, c)].clone() / d.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let sub = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - sub;
                }
                for c in 0..b.cols {
                    let sub = factor.clone() * b[(col, c)].clone();
                    b[(r, c)] = b[(r, c)].clone() - sub;
                }
            }
        }
        Some(b)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Incrementally maintained row-echelon basis; supports early-exit rank
/// computations over exact scalars.
pub struct RowSpace<T> {
    cols: usize,
    /// Reduced rows, each with the column of its leading nonzero entry.
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> RowSpace<T> {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the basis; if independent, absorb it and return
    /// true.
    pub fn insert(&mut self, mut row: Vec<T>) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        for (pivot_col, basis_row) in &self.rows {
            if row[*pivot_col].is_zero() {
                continue;
            }
            let factor = row[*pivot_col].clone() / basis_row[*pivot_col].clone();
            for c in *pivot_col..self.cols {
                let sub = factor.clone() * basis_row[c].clone();
                row[c] = row[c].clone() - sub;
            }
        }
        let Some(lead) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        self.rows.push((lead, row));
        self.rows.sort_by_key(|(lead, _)| *lead);
        true
    }
}

/// Singular values (descending) via one-sided Jacobi orthogonalization of
/// columns. Intended for the modest dense matrices this crate produces.
pub fn singular_values(a: &Mat<f64>) -> Vec<f64> {
    let mut a = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Vec::new();
    }
    const MAX_SWEEPS: usize = 64;
    const EPS: f64 = 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= EPS * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut svals: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt())
        .collect();
    svals.sort_by(|x, y| y.total_cmp(x));
    svals
}

/// Count singular values above `rel_tol * max`, and report the spectral gap
/// at the cut (ratio of the last accepted to the first rejected value;
/// infinite when nothing is rejected or the matrix is zero).
pub fn rank_from_singular_values(svals: &[f64], rel_tol: f64) -> (usize, f64) {
    let max = svals.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return (0, f64::INFINITY);
    }
    let tol = rel_tol * max;
    let rank = svals.iter().take_while(|&&s| s > tol).count();
    let gap = if rank == 0 {
        f64::INFINITY
    } else if rank < svals.len() && svals[rank] > 0.0 {
        svals[rank - 1] / svals[rank]
    } else {
        f64::INFINITY
    };
    (rank, gap)
}
