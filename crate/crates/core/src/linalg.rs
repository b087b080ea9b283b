//! Exact integer and rational matrix routines: Smith normal form with
//! unimodular certificates, Hermite row echelon, saturation, and rational
//! rank/kernel. Everything is arbitrary-precision; no floats anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> IMat {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IMat {
        let c = rows.first().map_or(0, |x| x.len());
        IMat::from_rows_n(rows, c)
    }

    /// Like `from_rows` but keeps the column count of an empty row list.
    pub fn from_rows_n(rows: Vec<Vec<BigInt>>, cols: usize) -> IMat {
        let r = rows.len();
        assert!(rows.iter().all(|x| x.len() == cols));
        IMat { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> IMat {
        IMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let tmp = self[(a, j)].clone();
            self[(a, j)] = self[(b, j)].clone();
            self[(b, j)] = tmp;
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let tmp = self[(i, a)].clone();
            self[(i, a)] = self[(i, b)].clone();
            self[(i, b)] = tmp;
        }
    }

    /// row a += k * row b
    pub fn add_row(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let add = k * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col a += k * col b
    pub fn add_col(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.rows {
            let add = k * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    pub fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        serde_json::json!(rows)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// U·M·V = D with U, V unimodular and D diagonal with d1 | d2 | ... .
/// `vinv` is V^{-1}, kept for saturation.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
    pub vinv: IMat,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Order of the torsion subgroup of the cokernel of the row lattice.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors().iter().product()
    }
}

/// Smith normal form with transformation certificates. Each call verifies
/// U·M·V = D and |det U| = |det V| = 1 before returning.
pub fn snf(m: &IMat) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IMat::identity(r);
    let mut v = IMat::identity(c);
    let mut vinv = IMat::identity(c);

    let mut k = 0;
    while k < r.min(c) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..r {
            for j in k..c {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        vinv.swap_rows(k, pj);

        // clear column and row k; restart if a remainder shrinks the pivot
        let mut dirty = false;
        for i in k + 1..r {
            if !d[(i, k)].is_zero() {
                let q = div_round(&d[(i, k)], &d[(k, k)]);
                let neg_q = -q;
                d.add_row(i, k, &neg_q);
                u.add_row(i, k, &neg_q);
                if !d[(i, k)].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in k + 1..c {
            if !d[(k, j)].is_zero() {
                let q = div_round(&d[(k, j)], &d[(k, k)]);
                let neg_q = -q.clone();
                d.add_col(j, k, &neg_q);
                v.add_col(j, k, &neg_q);
                vinv.add_row(k, j, &q);
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut fixed = true;
        'scan: for i in k + 1..r {
            for j in k + 1..c {
                if !(&d[(i, j)] % &d[(k, k)]).is_zero() {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }

    let out = Snf { u, d, v, vinv };
    verify_snf(m, &out);
    out
}

fn verify_snf(m: &IMat, s: &Snf) {
    assert_eq!(s.u.mul(m).mul(&s.v), s.d, "SNF certificate U·M·V = D failed");
    assert!(s.u.det().abs().is_one(), "U is not unimodular");
    assert!(s.v.det().abs().is_one(), "V is not unimodular");
    assert_eq!(s.v.mul(&s.vinv), IMat::identity(m.cols), "V·V^-1 != I");
    let n = s.d.rows.min(s.d.cols);
    for i in 0..n {
        for j in 0..s.d.cols {
            if i != j {
                assert!(s.d[(i, j)].is_zero(), "D not diagonal");
            }
        }
        if i + 1 < n && !s.d[(i + 1, i + 1)].is_zero() {
            assert!(
                (&s.d[(i + 1, i + 1)] % &s.d[(i, i)]).is_zero(),
                "divisibility chain broken"
            );
        }
    }
}

/// Round-to-nearest integer division, which keeps SNF pivots shrinking.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Row Hermite normal form: echelon rows with positive pivots, entries above
/// each pivot reduced to [0, pivot); zero rows dropped. Canonical for the row
/// lattice.
pub fn hnf_rows(m: &IMat) -> IMat {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let cols = m.cols;
    let mut done: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < cols && !rows.is_empty() {
        // euclidean reduction within this column
        loop {
            let mut nonzero: Vec<usize> =
                (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            nonzero.sort_by_key(|&i| rows[i][col].abs());
            let p = nonzero[0];
            if nonzero.len() == 1 {
                if rows[p][col].is_negative() {
                    for x in rows[p].iter_mut() {
                        *x = -x.clone();
                    }
                }
                let pivot_row = rows.remove(p);
                // reduce earlier pivot rows above this pivot
                for r in done.iter_mut() {
                    let q = num_integer::Integer::div_floor(&r[col], &pivot_row[col]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let sub = &q * &pivot_row[j];
                            r[j] -= sub;
                        }
                    }
                }
                done.push(pivot_row);
                break;
            }
            for &i in &nonzero[1..] {
                let q = div_round(&rows[i][col], &rows[p][col]);
                for j in 0..cols {
                    let sub = &q * &rows[p][j];
                    rows[i][j] -= sub;
                }
            }
        }
        col += 1;
    }
    IMat::from_rows_n(done, cols)
}

/// Basis (in HNF) of the saturation of the row lattice of `m`: the smallest
/// sublattice containing it with torsion-free quotient.
pub fn saturation(m: &IMat) -> IMat {
    let s = snf(m);
    let r = s.rank();
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| s.vinv.row(i).to_vec()).collect();
    hnf_rows(&IMat::from_rows_n(rows, m.cols))
}

/// Integer coordinates of `v` in the HNF basis rows, if `v` lies in the
/// lattice they span.
pub fn express_in_rows(basis: &IMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(basis.cols, v.len());
    let mut rest: Vec<BigInt> = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); basis.rows];
    for i in 0..basis.rows {
        let pivot_col = (0..basis.cols).find(|&j| !basis[(i, j)].is_zero())?;
        let (q, r) = num_integer::Integer::div_rem(&rest[pivot_col], &basis[(i, pivot_col)]);
        if !r.is_zero() {
            return None;
        }
        for j in 0..basis.cols {
            let sub = &q * &basis[(i, j)];
            rest[j] -= sub;
        }
        coeffs[i] = q;
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Rational rank by Gaussian elimination.
pub fn rank_rational(m: &IMat) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    gauss_rank(&mut a, m.cols)
}

pub(crate) fn gauss_rank(a: &mut [Vec<BigRational>], cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..cols {
                    let sub = &f * &a[rank][j];
                    a[i][j] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Basis of the right kernel {x : M x = 0}, exact and deterministic.
pub fn kernel_basis(m: &IMat) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let cols = m.cols;
    let rows = a.len();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..cols {
                    let sub = &f * &a[rank][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut vec = vec![BigRational::zero(); cols];
        vec[free] = BigRational::one();
        for col in 0..cols {
            let p = pivot_of_col[col];
            if p != usize::MAX {
                vec[col] = -a[p][free].clone();
            }
        }
        basis.push(vec);
    }
    basis
}
