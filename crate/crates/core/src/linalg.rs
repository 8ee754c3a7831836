//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free in the forward phase (Bareiss on
//! integer-scaled rows) followed by rational back-substitution, with the
//! pivot always the first nonzero entry in scan order. The deterministic
//! pivot choice keeps kernel bases and class representatives reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged row lengths".into()));
        }
        Ok(QMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, scalar::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = scalar::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect())
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension("matmul shape mismatch".into()));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows_vec()).pivots.len()
    }
}

/// Reduced row echelon form with unit pivots, together with pivot columns.
pub struct Rref {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &out {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_zero() && !gcd.is_one() {
        for x in &mut out {
            *x = &*x / &gcd;
        }
    }
    out
}

/// Fraction-free forward elimination (Bareiss with column skipping), then
/// rational back-substitution to unit-pivot reduced echelon form.
pub fn rref(matrix: &[Vec<Scalar>]) -> Rref {
    let nrows = matrix.len();
    let ncols = matrix.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|r| clear_denominators(r)).collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row >= nrows {
            break;
        }
        // first nonzero entry in this column at or below pivot_row
        let Some(found) = (pivot_row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        let pivot_val = m[pivot_row][col].clone();
        for r in pivot_row + 1..nrows {
            let factor = m[r][col].clone();
            for c in 0..ncols {
                let num = &pivot_val * &m[r][c] - &factor * &m[pivot_row][c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[r][c] = q;
            }
        }
        prev = pivot_val;
        pivots.push(col);
        pivot_row += 1;
    }

    // Back-substitution over Q.
    let mut rows: Vec<Vec<Scalar>> = m
        .into_iter()
        .take(pivots.len())
        .map(|r| r.into_iter().map(Scalar::from_integer).collect::<Vec<_>>())
        .collect();
    for i in (0..pivots.len()).rev() {
        let p = pivots[i];
        let inv = {
            let lead = rows[i][p].clone();
            lead.recip()
        };
        for c in 0..ncols {
            let v = rows[i][c].clone() * &inv;
            rows[i][c] = v;
        }
        for j in 0..i {
            let factor = rows[j][p].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..ncols {
                let v = rows[j][c].clone() - &factor * &rows[i][c];
                rows[j][c] = v;
            }
        }
    }
    Rref { rows, pivots }
}

/// Basis of the nullspace of the linear map `x -> M x`, one reduced-echelon
/// vector per free column, free columns in ascending order.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Scalar>> {
    let r = rref(&m.rows_vec());
    let pivot_set: Vec<usize> = r.pivots.clone();
    let mut basis = Vec::new();
    for free in 0..m.ncols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![scalar::zero(); m.ncols()];
        v[free] = scalar::one();
        for (row_idx, &p) in pivot_set.iter().enumerate() {
            v[p] = -r.rows[row_idx][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// One exact solution of `M x = b` with free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(m: &QMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.nrows() {
        return Err(Error::Dimension(format!(
            "rhs length {} vs {} rows",
            b.len(),
            m.nrows()
        )));
    }
    let mut aug = m.rows_vec();
    for (row, bv) in aug.iter_mut().zip(b.iter()) {
        row.push(bv.clone());
    }
    if aug.is_empty() {
        // no equations: x = 0 works
        return Ok(Some(vec![scalar::zero(); m.ncols()]));
    }
    let r = rref(&aug);
    let last = m.ncols();
    if r.pivots.contains(&last) {
        return Ok(None);
    }
    let mut x = vec![scalar::zero(); m.ncols()];
    for (row_idx, &p) in r.pivots.iter().enumerate() {
        x[p] = r.rows[row_idx][last].clone();
    }
    Ok(Some(x))
}

/// An incrementally built row space kept in reduced echelon form. Inserting a
/// vector reduces it against the stored rows; if a residual survives it is
/// normalized, back-eliminated against the store, and kept.
#[derive(Debug, Clone)]
pub struct RowSpace {
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.reduce_with_coeffs(v).1
    }

    /// Residual plus the coefficients taken on each stored row (in storage
    /// order). Because rows are fully reduced, coefficients are unique.
    pub fn reduce_with_coeffs(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut residual = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            let c = residual[p].clone();
            if !c.is_zero() {
                for (rv, rr) in residual.iter_mut().zip(row.iter()) {
                    *rv -= &c * rr;
                }
            }
            coeffs.push(c);
        }
        (coeffs, residual)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Insert a vector; returns `true` when it enlarged the space.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        let mut residual = self.reduce(v);
        let Some(p) = residual.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = residual[p].clone().recip();
        for x in residual.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            let c = row[p].clone();
            if !c.is_zero() {
                for (rv, nv) in row.iter_mut().zip(residual.iter()) {
                    *rv -= &c * nv;
                }
            }
        }
        // keep rows ordered by pivot column
        match self.pivots.iter().position(|&q| q > p) {
            Some(idx) => {
                self.rows.insert(idx, residual);
                self.pivots.insert(idx, p);
            }
            None => {
                self.rows.push(residual);
                self.pivots.push(p);
            }
        }
        true
    }
}

/// `(nilpotent, index)` for a family of square blocks: the index is the
/// smallest `t` with `block^t = 0`, maximized over blocks. A block whose
/// `n`-th power is nonzero is not nilpotent.
pub fn nilpotency_of_blocks(blocks: &[QMatrix]) -> Result<(bool, Option<u32>)> {
    let mut index = 0u32;
    for block in blocks {
        let n = block.nrows();
        if n == 0 {
            continue;
        }
        let mut power = QMatrix::identity(n);
        let mut t = 0u32;
        while !power.is_zero() {
            if t as usize >= n {
                return Ok((false, None));
            }
            power = power.matmul(block)?;
            t += 1;
        }
        index = index.max(t);
    }
    Ok((true, Some(index)))
}

/// Signature data of a symmetric rational matrix, computed by exact
/// congruence diagonalization (simultaneous row/column operations). By
/// Sylvester's law of inertia the counts are basis independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

pub fn inertia_of_symmetric(m: &QMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::Dimension("matrix is not symmetric".into()));
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut positive = 0usize;
    let mut negative = 0usize;
    let mut zero = 0usize;

    for step in 0..n {
        if a.get(step, step).is_zero() {
            // prefer a later nonzero diagonal entry
            if let Some(j) = (step + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                swap_sym(&mut a, step, j);
            } else if let Some((i, j)) = first_offdiag(&a, step) {
                // all remaining diagonal entries vanish; a(i,j) != 0 makes
                // the (i,i) entry 2*a(i,j) after adding row/col j into i
                add_row_col(&mut a, i, j);
                if i != step {
                    swap_sym(&mut a, step, i);
                }
            } else {
                zero = n - step;
                break;
            }
        }
        let pivot = a.get(step, step).clone();
        if pivot.is_positive() {
            positive += 1;
        } else {
            negative += 1;
        }
        for i in step + 1..n {
            let f = a.get(i, step) / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = a.get(i, j) - &f * a.get(step, j);
                a.set(i, j, v);
            }
            for j in 0..n {
                let v = a.get(j, i) - &f * a.get(j, step);
                a.set(j, i, v);
            }
        }
    }
    Ok(Inertia {
        positive,
        negative,
        zero,
    })
}

fn swap_sym(a: &mut QMatrix, i: usize, j: usize) {
    let n = a.nrows();
    for c in 0..n {
        let x = a.get(i, c).clone();
        let y = a.get(j, c).clone();
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let x = a.get(r, i).clone();
        let y = a.get(r, j).clone();
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

fn first_offdiag(a: &QMatrix, from: usize) -> Option<(usize, usize)> {
    let n = a.nrows();
    for i in from..n {
        for j in i + 1..n {
            if !a.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn add_row_col(a: &mut QMatrix, i: usize, j: usize) {
    let n = a.nrows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: Vec<Vec<i64>>) -> QMatrix {
        QMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_simple() {
        let m = mat(vec![vec![2, 4], vec![1, 2]]);
        let r = rref(&m.rows_vec());
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rows[0], vec![int(1), int(2)]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = mat(vec![vec![1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let img = m.apply(v).unwrap();
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(vec![vec![1, 1], vec![0, 1]]);
        let x = solve(&m, &[int(3), int(1)]).unwrap().unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let m2 = mat(vec![vec![1, 1], vec![2, 2]]);
        assert!(solve(&m2, &[int(1), int(3)]).unwrap().is_none());
    }

    #[test]
    fn rowspace_incremental() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&[int(1), int(2), int(0)]));
        assert!(rs.insert(&[int(0), int(1), int(1)]));
        assert!(!rs.insert(&[int(1), int(3), int(1)]));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&[int(2), int(5), int(1)]));
        assert!(!rs.contains(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn rowspace_coeffs_are_exact() {
        let mut rs = RowSpace::new(2);
        rs.insert(&[int(2), int(0)]);
        rs.insert(&[int(0), int(3)]);
        let (coeffs, residual) = rs.reduce_with_coeffs(&[ratio(1, 2), int(5)]);
        assert!(residual.iter().all(|x| x.is_zero()));
        assert_eq!(coeffs, vec![ratio(1, 2), int(5)]);
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        let m = mat(vec![vec![0, 1], vec![1, 0]]);
        let i = inertia_of_symmetric(&m).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        assert_eq!(i.signature(), 0);
    }

    #[test]
    fn inertia_of_definite_forms() {
        let m = mat(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(inertia_of_symmetric(&m).unwrap().signature(), 2);
        let m = mat(vec![vec![-2, 1], vec![1, -2]]);
        assert_eq!(inertia_of_symmetric(&m).unwrap().signature(), -2);
    }

    #[test]
    fn inertia_counts_zero_block() {
        let m = mat(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]);
        let i = inertia_of_symmetric(&m).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 0, 2));
    }
}
