//! Exact dense linear algebra over the prime fields F_p.
//!
//! Everything downstream (kernels, cokernels, hom spaces, the approximation
//! engines) reduces to row reduction here, so the reduction is written to be
//! canonical: pivots are chosen as the first nonzero entry scanning rows
//! top-down within each column, columns left to right.  Two runs on equal
//! input produce bit-for-bit equal output, which the golden-trace tests rely
//! on.
//!
//! Matrices act on column vectors: a morphism with matrix `A` sends `v` to
//! `A v`, and `compose(g, f)` is the product `g * f`.

use crate::error::Error;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p, so a^(p-2) works; p stays small here.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Dense row-major matrix over F_p.  Entries are kept reduced to `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mat{}x{}/F{}{:?}", self.rows, self.cols, self.p, self.to_rows())
    }
}

impl Mat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Mat {
        assert!(is_prime(p), "modulus {p} is not prime");
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Mat, Error> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged row lengths in matrix literal".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for &v in row {
                data.push(v % p);
            }
        }
        Ok(Mat { p, rows: r, cols: c, data })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + self.p - b) % self.p)
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        Mat::zeros(self.p, self.rows, self.cols).sub(self)
    }

    pub fn scale(&self, s: u64) -> Mat {
        let s = s % self.p;
        let data = self.data.iter().map(|&a| a * s % self.p).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product `self * other` (i.e. `self ∘ other` on column vectors).
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + a * other.get(k, c)) % self.p;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = Mat::zeros(self.p, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.p, other.p);
        let mut out = Mat::zeros(self.p, self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, c, other.get(r, c));
            }
        }
        out
    }

    pub fn hstack_all(p: u64, parts: &[Mat]) -> Mat {
        let rows = parts.first().map_or(0, Mat::rows);
        let mut out = Mat::zeros(p, rows, 0);
        for part in parts {
            out = out.hstack(part);
        }
        out
    }

    pub fn vstack_all(p: u64, parts: &[Mat]) -> Mat {
        let cols = parts.first().map_or(0, Mat::cols);
        let mut out = Mat::zeros(p, 0, cols);
        for part in parts {
            out = out.vstack(part);
        }
        out
    }

    pub fn block_diag(p: u64, parts: &[Mat]) -> Mat {
        let rows = parts.iter().map(Mat::rows).sum();
        let cols = parts.iter().map(Mat::cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for part in parts {
            for r in 0..part.rows {
                for c in 0..part.cols {
                    out.set(r0 + r, c0 + c, part.get(r, c));
                }
            }
            r0 += part.rows;
            c0 += part.cols;
        }
        out
    }

    /// Copy `block` into `self` with upper-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Mat::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Mat {
        self.submatrix(0, c, self.rows, 1)
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(row, c), m.get(pr, c));
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in 0..m.cols {
                m.set(row, c, m.get(row, c) * inv % p);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    for c in 0..m.cols {
                        let v = (m.get(r, c) + (p - factor) * m.get(row, c)) % p;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical null-space basis, one column per free column of the RREF,
    /// ordered by ascending free-column index.
    pub fn kernel_basis(&self) -> Mat {
        let Rref { matrix: r, pivots } = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Mat::zeros(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = r.get(prow, fc);
                if v != 0 {
                    out.set(pc, k, self.p - v);
                }
            }
        }
        out
    }

    /// One solution `X` of `self * X = rhs` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "solve: rhs row mismatch");
        assert_eq!(self.p, rhs.p);
        let aug = self.hstack(rhs);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.p, self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(prow, self.cols + c));
            }
        }
        Some(x)
    }

    /// Canonical projection `F^rows -> coker(self)` onto a complement of the
    /// column space, spanned by the standard basis vectors at the non-pivot
    /// coordinates of the column space.
    pub fn cokernel_projection(&self) -> Mat {
        let Rref { matrix: r, pivots } = self.transpose().rref();
        // Rows of `r` form the canonical basis of the column space of `self`;
        // `pivots` are coordinates of F^rows where that basis has identity.
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let non_pivot: Vec<usize> = (0..self.rows).filter(|i| !pivot_set.contains(i)).collect();
        let mut proj = Mat::zeros(self.p, non_pivot.len(), self.rows);
        for (out_row, &j) in non_pivot.iter().enumerate() {
            proj.set(out_row, j, 1);
            // subtract the column-space component determined by the pivot coords
            for (brow, &pc) in pivots.iter().enumerate() {
                let v = r.get(brow, j);
                if v != 0 {
                    let cur = proj.get(out_row, pc);
                    proj.set(out_row, pc, (cur + self.p - v) % self.p);
                }
            }
        }
        proj
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let sol = self.solve(&Mat::identity(self.p, self.rows))?;
        if self.matmul(&sol).is_identity() {
            Some(sol)
        } else {
            None
        }
    }
}

pub struct Rref {
    pub matrix: Mat,
    pub pivots: Vec<usize>,
}

/// Linear system in several unknown matrices `X_0 .. X_{k-1}` whose equations
/// are sums of two-sided products: `Σ_t P_t · X_{i_t} · Q_t = R`.
///
/// Unknowns are vectorized row-major and solved with the same deterministic
/// reduction as everything else, so particular solutions and kernel bases are
/// reproducible.
pub struct MatSystem {
    p: u64,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    coeff_rows: Vec<Vec<u64>>,
    rhs: Vec<u64>,
}

impl MatSystem {
    pub fn new(p: u64, shapes: Vec<(usize, usize)>) -> MatSystem {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for &(r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        MatSystem { p, shapes, offsets, total, coeff_rows: Vec::new(), rhs: Vec::new() }
    }

    /// Add the equation `Σ_t P_t · X_{unknown_t} · Q_t = rhs`.
    /// `P_t = None` / `Q_t = None` stand for identity factors.
    pub fn add_equation(&mut self, terms: &[(usize, Option<&Mat>, Option<&Mat>)], rhs: &Mat) {
        let (er, ec) = (rhs.rows(), rhs.cols());
        for term in terms {
            let (u, pm, qm) = *term;
            let (xr, xc) = self.shapes[u];
            let pr = pm.map_or(er, Mat::rows);
            let pc = pm.map_or(er, Mat::cols);
            let qr = qm.map_or(xc, Mat::rows);
            let qc = qm.map_or(xc, Mat::cols);
            assert_eq!(pc, xr, "term shape: P cols vs X rows");
            assert_eq!(qr, xc, "term shape: Q rows vs X cols");
            assert_eq!((pr, qc), (er, ec), "term shape vs rhs shape");
        }
        for i in 0..er {
            for j in 0..ec {
                let mut row = vec![0u64; self.total];
                for &(u, pm, qm) in terms {
                    let (xr, xc) = self.shapes[u];
                    let off = self.offsets[u];
                    for k in 0..xr {
                        let pik = match pm {
                            Some(p) => p.get(i, k),
                            None => u64::from(i == k),
                        };
                        if pik == 0 {
                            continue;
                        }
                        for l in 0..xc {
                            let qlj = match qm {
                                Some(q) => q.get(l, j),
                                None => u64::from(l == j),
                            };
                            if qlj == 0 {
                                continue;
                            }
                            let idx = off + k * xc + l;
                            row[idx] = (row[idx] + pik * qlj) % self.p;
                        }
                    }
                }
                self.coeff_rows.push(row);
                self.rhs.push(rhs.get(i, j));
            }
        }
    }

    fn coeff_mat(&self) -> Mat {
        Mat::from_rows(self.p, &self.coeff_rows).expect("coefficient rows are rectangular")
    }

    fn unvectorize(&self, v: &Mat, col: usize) -> Vec<Mat> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| {
                let mut m = Mat::zeros(self.p, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, v.get(off + i * c + j, col));
                    }
                }
                m
            })
            .collect()
    }

    /// One solution (free variables zero), or `None` if inconsistent.
    pub fn solve_particular(&self) -> Option<Vec<Mat>> {
        let coeff = self.coeff_mat();
        let mut rhs = Mat::zeros(self.p, self.rhs.len(), 1);
        for (i, &v) in self.rhs.iter().enumerate() {
            rhs.set(i, 0, v);
        }
        let sol = if self.coeff_rows.is_empty() {
            Mat::zeros(self.p, self.total, 1)
        } else {
            coeff.solve(&rhs)?
        };
        Some(self.unvectorize(&sol, 0))
    }

    /// Basis of the homogeneous solution space, as tuples of matrices.
    pub fn kernel(&self) -> Vec<Vec<Mat>> {
        let basis = if self.coeff_rows.is_empty() {
            Mat::identity(self.p, self.total)
        } else {
            self.coeff_mat().kernel_basis()
        };
        (0..basis.cols()).map(|k| self.unvectorize(&basis, k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat2(rows: &[Vec<u64>]) -> Mat {
        Mat::from_rows(2, rows).unwrap()
    }

    #[test]
    fn rref_canonical_form() {
        // det = 25, so invertible mod 7 but singular mod 5
        let m = Mat::from_rows(7, &[vec![2, 4, 1], vec![1, 2, 3], vec![3, 1, 0]]).unwrap();
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert!(r.matrix.is_identity());
        assert_eq!(Mat::from_rows(5, &[vec![2, 4, 1], vec![1, 2, 3], vec![3, 1, 0]])
            .unwrap()
            .rank(), 2);

        let s = Mat::from_rows(3, &[vec![1, 2, 0], vec![1, 1, 0]]).unwrap();
        let r = s.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix.to_rows(), vec![vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn kernel_of_known_map() {
        // x + y = 0 over F_2: kernel spanned by (1, 1)
        let m = mat2(&[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.to_rows(), vec![vec![1], vec![1]]);
        assert!(m.matmul(&k).is_zero());
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = mat2(&[vec![1, 1], vec![1, 1]]);
        let b = mat2(&[vec![0], vec![1]]);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn cokernel_projection_complements_column_space() {
        let a = mat2(&[vec![1], vec![1], vec![0]]);
        let proj = a.cokernel_projection();
        assert_eq!(proj.rows(), 2);
        assert!(proj.matmul(&a).is_zero());
        assert_eq!(proj.rank(), 2);
        // canonical choice: complement coordinates are the non-pivot ones {1, 2}
        assert_eq!(proj.to_rows(), vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn zero_sized_edges() {
        let empty = Mat::zeros(2, 0, 3);
        assert_eq!(empty.kernel_basis().cols(), 3);
        assert_eq!(empty.rank(), 0);
        let tall = Mat::zeros(2, 3, 0);
        assert_eq!(tall.cokernel_projection().rows(), 3);
        assert_eq!(tall.rank(), 0);
        let id0 = Mat::identity(2, 0);
        assert!(id0.is_identity());
    }

    #[test]
    fn mat_system_sylvester_style() {
        // Solve X * N = M * X over F_2 with N = M = the 2x2 nilpotent Jordan block:
        // solutions are the polynomials in M, a 2-dimensional space.
        let n = mat2(&[vec![0, 0], vec![1, 0]]);
        let mut sys = MatSystem::new(2, vec![(2, 2)]);
        let zero = Mat::zeros(2, 2, 2);
        sys.add_equation(&[(0, None, Some(&n)), (0, Some(&n.neg()), None)], &zero);
        let basis = sys.kernel();
        assert_eq!(basis.len(), 2);
        for sol in basis {
            assert_eq!(sol[0].matmul(&n), n.matmul(&sol[0]));
        }
    }

    fn arb_mat(p: u64, max_dim: usize) -> impl Strategy<Value = Mat> {
        (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |data| {
                let rows: Vec<Vec<u64>> =
                    data.chunks(c.max(1)).take(r).map(<[u64]>::to_vec).collect();
                let rows = if c == 0 { vec![vec![]; r] } else { rows };
                Mat::from_rows(p, &rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_and_rank_nullity(m in prop_oneof![arb_mat(2, 4), arb_mat(3, 4), arb_mat(5, 3)]) {
            let k = m.kernel_basis();
            prop_assert!(m.matmul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
        }

        #[test]
        fn cokernel_exactness(m in prop_oneof![arb_mat(2, 4), arb_mat(3, 4)]) {
            let proj = m.cokernel_projection();
            prop_assert!(proj.matmul(&m).is_zero());
            prop_assert_eq!(proj.rank(), proj.rows());
            prop_assert_eq!(proj.rows() + m.rank(), m.rows());
        }

        #[test]
        fn rref_idempotent(m in arb_mat(5, 4)) {
            let r1 = m.rref().matrix;
            let r2 = r1.rref().matrix;
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn solve_recovers_consistent_rhs(
            (a, x) in arb_mat(3, 4).prop_flat_map(|a| {
                let p = a.p();
                let cols = a.cols();
                (Just(a), proptest::collection::vec(0..p, cols))
            })
        ) {
            let mut xv = Mat::zeros(a.p(), a.cols(), 1);
            for (i, &v) in x.iter().enumerate() { xv.set(i, 0, v); }
            let b = a.matmul(&xv);
            let sol = a.solve(&b).expect("consistent by construction");
            prop_assert_eq!(a.matmul(&sol), b);
        }
    }
}
