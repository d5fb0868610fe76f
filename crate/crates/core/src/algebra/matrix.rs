//! Dense square matrices over a [`Ring`] with division-free determinants.

use std::collections::HashMap;
use std::fmt;

use super::mpoly::MPoly;
use super::ring::Ring;
use super::tpoly::TPoly;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

/// The spec-level matrix of t-polynomials (B(t), Id − B(t)).
pub type RingMatrix = Matrix<TPoly>;

impl<R: Ring> Matrix<R> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> R>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<S: Ring, F: FnMut(&R) -> S>(&self, f: F) -> Matrix<S> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<S: Ring, E, F: FnMut(&R) -> Result<S, E>>(&self, f: F) -> Result<Matrix<S>, E> {
        Ok(Matrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.data[i * n + j].add(&a.mul(b));
                    out.data[i * n + j] = v;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len());
        Matrix::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Minor on the given row and column sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> R {
        self.submatrix(rows, cols).det()
    }

    /// Exact determinant without division: cofactor expansion up to 6×6, Berkowitz above.
    pub fn det(&self) -> R {
        if self.n <= 6 {
            self.det_cofactor()
        } else {
            self.det_berkowitz()
        }
    }

    /// Laplace expansion along rows, memoised on the set of used columns.
    pub fn det_cofactor(&self) -> R {
        let n = self.n;
        if n == 0 {
            return R::one();
        }
        // memo[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
        let mut memo: HashMap<u32, R> = HashMap::new();
        fn rec<R: Ring>(m: &Matrix<R>, mask: u32, memo: &mut HashMap<u32, R>) -> R {
            let n = m.n;
            let k = mask.count_ones() as usize;
            if k == 0 {
                return R::one();
            }
            if let Some(v) = memo.get(&mask) {
                return v.clone();
            }
            let row = n - k;
            let mut acc = R::zero();
            let mut sign_pos = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let a = m.get(row, col);
                if !a.is_zero() {
                    let sub = rec(m, mask & !(1 << col), memo);
                    if !sub.is_zero() {
                        let t = a.mul(&sub);
                        acc = if sign_pos { acc.add(&t) } else { acc.sub(&t) };
                    }
                }
                sign_pos = !sign_pos;
            }
            memo.insert(mask, acc.clone());
            acc
        }
        rec(self, (1u32 << n) - 1, &mut memo)
    }

    /// Determinant from the Berkowitz characteristic polynomial: det = (−1)^n · c_0.
    pub fn det_berkowitz(&self) -> R {
        let cs = self.charpoly_coeffs();
        let c0 = cs[self.n].clone();
        if self.n % 2 == 0 {
            c0
        } else {
            c0.neg()
        }
    }

    /// Coefficients of det(t·Id − M), highest degree first (length n + 1), via Berkowitz.
    pub fn charpoly_coeffs(&self) -> Vec<R> {
        let n = self.n;
        let mut p: Vec<R> = vec![R::one()];
        for k in 0..n {
            // Leading k×k block A, new diagonal entry a, row R = M[k][0..k], column C = M[0..k][k].
            let a = self.get(k, k);
            let mut q: Vec<R> = Vec::with_capacity(k + 2);
            q.push(R::one());
            q.push(a.neg());
            let mut v: Vec<R> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for j in 0..k {
                // q[j+2] = −R·A^j·C
                let mut s = R::zero();
                for (i, vi) in v.iter().enumerate() {
                    let r = self.get(k, i);
                    if !r.is_zero() && !vi.is_zero() {
                        s = s.add(&r.mul(vi));
                    }
                }
                q.push(s.neg());
                if j + 1 < k {
                    let mut nv = vec![R::zero(); k];
                    for (i, slot) in nv.iter_mut().enumerate() {
                        let mut acc = R::zero();
                        for (l, vl) in v.iter().enumerate() {
                            let x = self.get(i, l);
                            if !x.is_zero() && !vl.is_zero() {
                                acc = acc.add(&x.mul(vl));
                            }
                        }
                        *slot = acc;
                    }
                    v = nv;
                }
            }
            let mut np = vec![R::zero(); k + 2];
            for (i, slot) in np.iter_mut().enumerate() {
                let mut acc = R::zero();
                for (j, pj) in p.iter().enumerate() {
                    if j > i {
                        break;
                    }
                    let qq = &q[i - j];
                    if !qq.is_zero() && !pj.is_zero() {
                        acc = acc.add(&qq.mul(pj));
                    }
                }
                *slot = acc;
            }
            p = np;
        }
        p
    }
}

impl Matrix<MPoly> {
    /// det(t·Id − M) as a monic TPoly.
    pub fn charpoly(&self) -> TPoly {
        TPoly::from_coeffs_high(self.charpoly_coeffs())
    }

    /// Lifts constant entries into t-polynomials.
    pub fn to_tpoly(&self) -> RingMatrix {
        self.map(|c| TPoly::constant(c.clone()))
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
