//! Exact linear algebra over a prime field F_p and over the integers
//! (Smith normal form). Everything downstream reduces to these kernels,
//! solvers and rank computations.

use serde::{Deserialize, Serialize};

/// Dense matrix over F_p. Entries are always reduced, `0 <= e < p`.
/// 0 x n and n x 0 matrices are legal and show up constantly (zero objects).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FieldMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<u64>,
}

impl FieldMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FieldMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                m.set(i, j, e.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zero(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j) % p);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        assert_eq!(self.p, other.p);
        let mut out = Self::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = (*e + o) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = (*e + self.p - o) % self.p;
        }
        out
    }

    pub fn neg(&self) -> FieldMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = (self.p - *e) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> FieldMatrix {
        let c = c % self.p;
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = (*e * c) % self.p;
        }
        out
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = Self::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zero(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Self::zero(self.p, self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j));
            }
        }
        out
    }

    pub fn block_diag(p: u64, blocks: &[&FieldMatrix]) -> FieldMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zero(p, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j));
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Submatrix of the given row and column ranges.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> FieldMatrix {
        let mut out = Self::zero(self.p, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(p: u64, rows: usize, cols: &[Vec<u64>]) -> FieldMatrix {
        let mut out = Self::zero(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j] % self.p).sum::<u64>() % self.p)
            .collect()
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // Fermat: p prime.
        let mut r = 1u64;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    /// Reduced row echelon form with deterministic pivoting (first nonzero
    /// in row-major order). Returns (rref, pivot column indices).
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            for j in 0..m.cols {
                let (a, b) = (m.get(r, j), m.get(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
            let inv = m.inv_mod(m.get(r, c));
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % m.p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = (m.get(i, j) + (m.p - f) * m.get(r, j)) % m.p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut pivot_rows: Vec<Option<usize>> = vec![None; self.cols];
        for (row, col) in pivots.iter().copied().enumerate() {
            pivot_rows[col] = Some(row);
        }
        for free in 0..self.cols {
            if piv_iter.peek() == Some(&free) {
                piv_iter.next();
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for c in 0..self.cols {
                if let Some(row) = pivot_rows[c] {
                    v[c] = (self.p - m.get(row, free)) % self.p;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of self * x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let bm = FieldMatrix::from_columns(self.p, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&bm);
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![0u64; self.cols];
        for (row, col) in pivots.iter().copied().enumerate() {
            x[col] = m.get(row, self.cols);
        }
        Some(x)
    }

    /// One solution X of self * X = B, column by column.
    pub fn solve_matrix(&self, b: &FieldMatrix) -> Option<FieldMatrix> {
        assert_eq!(self.rows, b.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(FieldMatrix::from_columns(self.p, self.cols, &cols))
    }

    /// One solution X of X * self = B.
    pub fn solve_left(&self, b: &FieldMatrix) -> Option<FieldMatrix> {
        assert_eq!(self.cols, b.cols);
        Some(self.transpose().solve_matrix(&b.transpose())?.transpose())
    }

    pub fn inverse(&self) -> Option<FieldMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let inv = self.solve_matrix(&FieldMatrix::identity(self.p, self.rows))?;
        if self.mul(&inv).is_identity() && inv.mul(self).is_identity() {
            Some(inv)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Row-major entry list (used by fingerprints and serialization).
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
}

/// Integer matrix used for K0 presentations. Entries stay tiny (relation
/// rows have entries in {-2..2}); i128 with checked arithmetic gives ample
/// headroom and a loud failure rather than silent wraparound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &e) in row.iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out
                        .get(i, j)
                        .checked_add(a.checked_mul(other.get(k, j)).expect("overflow"))
                        .expect("overflow");
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        // Fraction-free Gaussian elimination (Bareiss).
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m.get(k, k) == 0 {
                let Some(sw) = (k + 1..n).find(|&i| m.get(i, k) != 0) else { return 0 };
                for j in 0..n {
                    let (a, b) = (m.get(k, j), m.get(sw, j));
                    m.set(k, j, b);
                    m.set(sw, j, a);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j).checked_mul(m.get(k, k)).expect("overflow")
                        - m.get(i, k).checked_mul(m.get(k, j)).expect("overflow"))
                        / prev;
                    m.set(i, j, v);
                }
                m.set(i, k, 0);
            }
            prev = m.get(k, k);
        }
        sign * m.get(n - 1, n - 1)
    }
}

/// Smith normal form: U * m * V = D diagonal with d_i | d_{i+1},
/// U and V unimodular.
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries d_1 | d_2 | ...
    pub fn invariant_factors(&self) -> Vec<i128> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).abs())
            .filter(|&x| x != 0)
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);

    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..d.cols {
            let (x, y) = (d.get(a, j), d.get(b, j));
            d.set(a, j, y);
            d.set(b, j, x);
        }
        for j in 0..u.cols {
            let (x, y) = (u.get(a, j), u.get(b, j));
            u.set(a, j, y);
            u.set(b, j, x);
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..d.rows {
            let (x, y) = (d.get(i, a), d.get(i, b));
            d.set(i, a, y);
            d.set(i, b, x);
        }
        for i in 0..v.rows {
            let (x, y) = (v.get(i, a), v.get(i, b));
            v.set(i, a, y);
            v.set(i, b, x);
        }
    };
    // row_i -= q * row_t  (and mirror on U)
    let add_row = |d: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: i128| {
        for j in 0..d.cols {
            let val = d.get(i, j).checked_sub(q.checked_mul(d.get(t, j)).expect("overflow")).expect("overflow");
            d.set(i, j, val);
        }
        for j in 0..u.cols {
            let val = u.get(i, j).checked_sub(q.checked_mul(u.get(t, j)).expect("overflow")).expect("overflow");
            u.set(i, j, val);
        }
    };
    let add_col = |d: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: i128| {
        for i in 0..d.rows {
            let val = d.get(i, j).checked_sub(q.checked_mul(d.get(i, t)).expect("overflow")).expect("overflow");
            d.set(i, j, val);
        }
        for i in 0..v.rows {
            let val = v.get(i, j).checked_sub(q.checked_mul(v.get(i, t)).expect("overflow")).expect("overflow");
            v.set(i, j, val);
        }
    };

    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // smallest-magnitude nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                let x = d.get(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut d, &mut u, t, bi);
        swap_cols(&mut d, &mut v, t, bj);

        let mut clean = true;
        for i in t + 1..d.rows {
            let q = d.get(i, t).div_euclid(d.get(t, t));
            if q != 0 {
                add_row(&mut d, &mut u, i, t, q);
            }
            if d.get(i, t) != 0 {
                clean = false;
            }
        }
        for j in t + 1..d.cols {
            let q = d.get(t, j).div_euclid(d.get(t, t));
            if q != 0 {
                add_col(&mut d, &mut v, j, t, q);
            }
            if d.get(t, j) != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility fixup: fold a violating row into row t and redo
        let piv = d.get(t, t);
        let bad = (t + 1..d.rows)
            .flat_map(|i| (t + 1..d.cols).map(move |j| (i, j)))
            .find(|&(i, j)| d.get(i, j) % piv != 0);
        if let Some((i, _)) = bad {
            add_row(&mut d, &mut u, t, i, -1);
            continue;
        }
        if d.get(t, t) < 0 {
            add_row(&mut d, &mut u, t, t, 2); // negate row t
        }
        t += 1;
    }
    Snf { d, u, v }
}
