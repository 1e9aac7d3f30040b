//! Exact integer matrices and lattice algorithms.
//!
//! Everything here is over Z with arbitrary-precision entries: Smith normal
//! form with unimodular transforms, kernel bases, lattice bases, and exact
//! linear solves over a lattice basis. No floating point, no modular
//! shortcuts — these are the ground-truth routines the rest of the crate
//! (homology oracles, Tate cohomology) is checked against.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("columns are not inside the target lattice")]
    NotInLattice,
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from rows of machine integers (test/fixture helper).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows {
            return Err(MatrixError::Dimension("hstack row mismatch".into()));
        }
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// The submatrix of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row\[a\] -= q * row\[b\]
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) - q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col\[a\] -= q * col\[b\]
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) - q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.set(a, j, v);
        }
    }
}

/// Smith normal form data: `u * m * v = d` with `u, v` unimodular and `d`
/// diagonal, non-negative, each entry dividing the next.
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// The nonzero diagonal entries d_1 | d_2 | ... | d_rank.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Rounded division: q minimizing |a - q*b| (ties toward floor).
fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_zero() {
        return q;
    }
    let two_r: BigInt = r.abs() * 2;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form with transforms, pivoting on the smallest nonzero entry
/// to limit coefficient growth.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());
    let mut t = 0usize;
    while t < n {
        // find the smallest-magnitude nonzero entry in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows() {
            for j in t..d.cols() {
                if d.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d.get(i, j).abs() < d.get(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        // clear column t then row t; column clearing uses row ops (mirrored
        // into u), row clearing uses column ops (mirrored into v); repeat
        // until both stay clear
        loop {
            let mut dirty = false;
            for i in (t + 1)..d.rows() {
                while !d.get(i, t).is_zero() {
                    let q = div_rounded(d.get(i, t), d.get(t, t));
                    d.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        // remainder is strictly smaller: promote it to pivot
                        d.swap_rows(i, t);
                        u.swap_rows(i, t);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..d.cols() {
                while !d.get(t, j).is_zero() {
                    let q = div_rounded(d.get(t, j), d.get(t, t));
                    d.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(j, t);
                        v.swap_cols(j, t);
                        dirty = true;
                    }
                }
            }
            // column ops may have re-dirtied column t
            let col_clean = ((t + 1)..d.rows()).all(|i| d.get(i, t).is_zero());
            if col_clean && !dirty {
                break;
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let mut rank = 0;
    while rank < n && !d.get(rank, rank).is_zero() {
        rank += 1;
    }
    // enforce the divisibility chain d_1 | d_2 | ...
    let mut i = 0;
    while i + 1 < rank {
        let a = d.get(i, i).clone();
        let b = d.get(i + 1, i + 1).clone();
        if (&b % &a).is_zero() {
            i += 1;
            continue;
        }
        // fold the pair (a, b) into (gcd, lcm) via a local 2x2 reduction:
        // put b into row i (column op), then Euclid the 2x2 block
        let minus_one = BigInt::from(-1);
        d.col_sub(i, i + 1, &minus_one); // col i += col i+1 => entry (i+1, i) = b
        v.col_sub(i, i + 1, &minus_one);
        loop {
            // Euclid on the 2x2 block at (i, i)
            let mut progress = false;
            if !d.get(i + 1, i).is_zero() {
                let q = div_rounded(d.get(i + 1, i), d.get(i, i));
                d.row_sub(i + 1, i, &q);
                u.row_sub(i + 1, i, &q);
                if !d.get(i + 1, i).is_zero() {
                    d.swap_rows(i, i + 1);
                    u.swap_rows(i, i + 1);
                    progress = true;
                }
            }
            if !d.get(i, i + 1).is_zero() {
                let q = div_rounded(d.get(i, i + 1), d.get(i, i));
                d.col_sub(i + 1, i, &q);
                v.col_sub(i + 1, i, &q);
                if !d.get(i, i + 1).is_zero() {
                    d.swap_cols(i, i + 1);
                    v.swap_cols(i, i + 1);
                    progress = true;
                }
            }
            if d.get(i + 1, i).is_zero() && d.get(i, i + 1).is_zero() && !progress {
                break;
            }
        }
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
        if d.get(i + 1, i + 1).is_negative() {
            d.negate_row(i + 1);
            u.negate_row(i + 1);
        }
        // gcd may now violate divisibility with the *previous* entry
        i = i.saturating_sub(1);
    }
    Snf { u, d, v, rank }
}

/// Basis of the integer kernel of `m : Z^cols -> Z^rows`, as matrix columns.
/// The kernel of an integer matrix is a saturated sublattice, so this basis
/// extends to a basis of Z^cols.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_columns(&cols)
}

/// A basis (as columns) of the lattice spanned by the columns of `m`.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let mv = m.mul(&snf.v).expect("shape");
    let cols: Vec<usize> = (0..snf.rank).collect();
    mv.select_columns(&cols)
}

/// Solve `basis * y = b` exactly over Z, where the columns of `basis` are
/// Z-linearly independent. Errors when some column of `b` is outside the
/// spanned lattice.
pub fn solve_in_lattice(basis: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, MatrixError> {
    if basis.rows() != b.rows() {
        return Err(MatrixError::Dimension("solve_in_lattice rows".into()));
    }
    let snf = smith_normal_form(basis);
    if snf.rank != basis.cols() {
        return Err(MatrixError::Dimension(
            "basis columns are not independent".into(),
        ));
    }
    let c = snf.u.mul(b).expect("shape");
    let mut z = IntMatrix::zero(basis.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..basis.rows() {
            if i < snf.rank {
                let di = snf.d.get(i, i);
                let (q, r) = (c.get(i, j) / di, c.get(i, j) % di);
                if !r.is_zero() {
                    return Err(MatrixError::NotInLattice);
                }
                z.set(i, j, q);
            } else if !c.get(i, j).is_zero() {
                return Err(MatrixError::NotInLattice);
            }
        }
    }
    snf.v.mul(&z).map_err(|_| MatrixError::Dimension("v*z".into()))
}

/// Does the lattice spanned by the columns of `gens` contain `v`?
pub fn lattice_contains(gens: &IntMatrix, v: &IntMatrix) -> bool {
    let basis = lattice_basis(gens);
    if basis.cols() == 0 {
        return v.is_zero();
    }
    solve_in_lattice(&basis, v).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det3(m: &IntMatrix) -> BigInt {
        assert_eq!((m.rows(), m.cols()), (3, 3));
        let e = |i: usize, j: usize| m.get(i, j).clone();
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    }

    #[test]
    fn snf_of_diag_2_3_is_1_6() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 2);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn snf_transforms_multiply_back() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&m);
        let umv = snf.u.mul(&m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(umv, snf.d);
        // known SNF of this classic example: diag(2, 2, 156)
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn snf_of_zero_and_identity() {
        let z = IntMatrix::zero(2, 3);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.rank, 0);
        let id = IntMatrix::identity(4);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.rank, 4);
        assert!(snf.diagonal().iter().all(|d| d.is_one()));
    }

    #[test]
    fn kernel_of_a_rank_one_map() {
        // (x, y) -> x + y : kernel spanned by (1, -1)
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        // the basis vector is primitive: gcd of coordinates is 1
        let g = num_integer::gcd(
            k.get(0, 0).clone(),
            k.get(1, 0).clone(),
        );
        assert!(g.is_one());
    }

    #[test]
    fn solve_recovers_coordinates() {
        let basis = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3], vec![4, 0]]);
        let y_expected = IntMatrix::from_rows(&[vec![3], vec![-2]]);
        let b = basis.mul(&y_expected).unwrap();
        let y = solve_in_lattice(&basis, &b).unwrap();
        assert_eq!(y, y_expected);
        // a vector outside the lattice is rejected
        let bad = IntMatrix::from_rows(&[vec![1], vec![0], vec![0]]);
        assert_eq!(
            solve_in_lattice(&basis, &bad).unwrap_err(),
            MatrixError::NotInLattice
        );
    }

    #[test]
    fn lattice_membership() {
        let gens = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let even = IntMatrix::from_rows(&[vec![4], vec![-6]]);
        let odd = IntMatrix::from_rows(&[vec![1], vec![0]]);
        assert!(lattice_contains(&gens, &even));
        assert!(!lattice_contains(&gens, &odd));
    }

    proptest! {
        #[test]
        fn snf_is_invariant_of_the_lattice_and_preserves_det(
            entries in prop::collection::vec(-9i64..=9, 9),
        ) {
            let m = IntMatrix::from_rows(&[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
                entries[6..9].to_vec(),
            ]);
            let snf = smith_normal_form(&m);
            // u m v = d
            let umv = snf.u.mul(&m).unwrap().mul(&snf.v).unwrap();
            prop_assert_eq!(&umv, &snf.d);
            // divisibility chain and non-negativity
            let diag = snf.diagonal();
            for w in diag.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(diag.iter().all(|d| d.is_positive()));
            // |det| preserved (transforms are unimodular)
            let product: BigInt = diag.iter().product();
            let dm = det3(&m).abs();
            if snf.rank == 3 {
                prop_assert_eq!(product, dm);
            } else {
                prop_assert!(dm.is_zero());
            }
        }

        #[test]
        fn kernel_columns_are_killed_and_complete(
            entries in prop::collection::vec(-6i64..=6, 12),
        ) {
            // 3x4 matrix: kernel rank = 4 - rank
            let m = IntMatrix::from_rows(&[
                entries[0..4].to_vec(),
                entries[4..8].to_vec(),
                entries[8..12].to_vec(),
            ]);
            let k = kernel_basis(&m);
            prop_assert!(m.mul(&k).unwrap().is_zero());
            let snf = smith_normal_form(&m);
            prop_assert_eq!(k.cols(), 4 - snf.rank);
        }
    }
}
