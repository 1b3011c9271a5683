//! Dense linear algebra over F_{q^m} and F_q-rank of vectors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FieldTower};
use crate::nt;

/// Row-major matrix over F_{q^m}.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
    tower: Arc<FieldTower>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.tower.label())?;
        for r in 0..self.rows {
            let row: Vec<u64> = self.row(r).iter().map(|x| x.enc()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && *self.tower == *other.tower
    }
}

impl Eq for Mat {}

impl Mat {
    pub fn new(
        tower: Arc<FieldTower>,
        rows: usize,
        cols: usize,
        data: Vec<FieldElem>,
    ) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.enc() >= tower.size()) {
            return Err(Error::ElementOutOfRange(bad.enc()));
        }
        Ok(Mat {
            rows,
            cols,
            data,
            tower,
        })
    }

    pub fn zeros(tower: Arc<FieldTower>, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
            tower,
        }
    }

    pub fn identity(tower: Arc<FieldTower>, n: usize) -> Mat {
        let mut m = Mat::zeros(tower, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElem::ONE;
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty list needs `cols`.
    pub fn from_rows(
        tower: Arc<FieldTower>,
        cols: usize,
        rows: &[Vec<FieldElem>],
    ) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Mat::new(tower, rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    /// Encodings, row by row.
    pub fn to_enc_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter()
            .map(|r| r.iter().map(|x| x.enc()).collect())
            .collect()
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(FieldElem) -> FieldElem) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
            tower: self.tower.clone(),
        }
    }

    /// Entrywise x -> x^(q^j).
    pub fn frobenius(&self, j: i64) -> Mat {
        let t = self.tower.clone();
        self.map(|x| t.frobenius(x, j))
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if *self.tower != *other.tower {
            return Err(Error::TowerMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let t = &self.tower;
        let mut out = Mat::zeros(t.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !a.is_zero() {
                    // dst += a * row_k  ==  dst -= (-a) * row_k
                    t.axpy(dst, t.neg(a), other.row(k));
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn stack(ms: &[Mat]) -> Result<Mat> {
        let first = ms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("nothing to stack".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in ms {
            if m.cols != first.cols {
                return Err(Error::DimensionMismatch(format!(
                    "stacking {} and {} columns",
                    first.cols, m.cols
                )));
            }
            if *m.tower != *first.tower {
                return Err(Error::TowerMismatch);
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(Mat {
            rows,
            cols: first.cols,
            data,
            tower: first.tower.clone(),
        })
    }

    /// Rows `0..n`.
    pub fn take_rows(&self, n: usize) -> Mat {
        let n = n.min(self.rows);
        Mat {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
            tower: self.tower.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Reduced row echelon form and rank. Pivots are chosen in the leftmost
/// nonzero column, topmost nonzero row; zero rows end up at the bottom.
pub fn rref(m: &Mat) -> (Mat, usize) {
    let t = m.tower.clone();
    let cols = m.cols;
    let mut a = m.clone();
    let mut rank = 0;
    for c in 0..cols {
        if rank == a.rows {
            break;
        }
        let Some(piv) = (rank..a.rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.data.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = t.inv(a.get(rank, c)).expect("pivot is nonzero");
        t.scale(&mut a.data[rank * cols..(rank + 1) * cols], inv);
        let pivot_row: Vec<FieldElem> = a.row(rank)[c..].to_vec();
        for r in 0..a.rows {
            if r == rank {
                continue;
            }
            let f = a.get(r, c);
            if !f.is_zero() {
                t.axpy(&mut a.data[r * cols + c..(r + 1) * cols], f, &pivot_row);
            }
        }
        rank += 1;
    }
    (a, rank)
}

pub fn rank(m: &Mat) -> usize {
    let mut rs = RowSpace::new(m.tower.clone(), m.cols);
    for r in m.row_iter() {
        rs.insert(r);
        if rs.dim() == m.cols {
            break;
        }
    }
    rs.dim()
}

/// RREF basis (nonzero rows only) of the sum of the row spaces.
pub fn row_space_sum(ms: &[Mat]) -> Result<Mat> {
    let stacked = Mat::stack(ms)?;
    let (r, k) = rref(&stacked);
    Ok(r.take_rows(k))
}

pub fn row_space_equal(a: &Mat, b: &Mat) -> Result<bool> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} columns",
            a.cols, b.cols
        )));
    }
    if *a.tower != *b.tower {
        return Err(Error::TowerMismatch);
    }
    let (ra, ka) = rref(a);
    let (rb, kb) = rref(b);
    Ok(ka == kb && ra.take_rows(ka) == rb.take_rows(kb))
}

/// Incrementally maintained RREF basis of a subspace of F_{q^m}^n.
#[derive(Clone)]
pub struct RowSpace {
    tower: Arc<FieldTower>,
    cols: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(tower: Arc<FieldTower>, cols: usize) -> Self {
        RowSpace {
            tower,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_mat(m: &Mat) -> Self {
        let mut rs = RowSpace::new(m.tower.clone(), m.cols);
        for r in m.row_iter() {
            rs.insert(r);
        }
        rs
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `row` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, row: &[FieldElem]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        if self.rows.len() == self.cols {
            return false;
        }
        let t = &*self.tower;
        let mut r = row.to_vec();
        for (basis, &piv) in self.rows.iter().zip(&self.pivots) {
            let f = r[piv];
            if !f.is_zero() {
                t.axpy(&mut r[piv..], f, &basis[piv..]);
            }
        }
        let Some(c) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = t.inv(r[c]).expect("nonzero");
        t.scale(&mut r[c..], inv);
        for basis in self.rows.iter_mut() {
            let f = basis[c];
            if !f.is_zero() {
                t.axpy(&mut basis[c..], f, &r[c..]);
            }
        }
        let at = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, r);
        true
    }

    /// Whether `row` already lies in the span.
    pub fn contains(&self, row: &[FieldElem]) -> bool {
        let t = &*self.tower;
        let mut r = row.to_vec();
        for (basis, &piv) in self.rows.iter().zip(&self.pivots) {
            let f = r[piv];
            if !f.is_zero() {
                t.axpy(&mut r[piv..], f, &basis[piv..]);
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    /// The basis as a matrix in RREF.
    pub fn to_mat(&self) -> Mat {
        let mut data = Vec::with_capacity(self.rows.len() * self.cols);
        for r in &self.rows {
            data.extend_from_slice(r);
        }
        Mat {
            rows: self.rows.len(),
            cols: self.cols,
            data,
            tower: self.tower.clone(),
        }
    }
}

/// Rank over F_2 of bitmask rows.
fn binary_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in (0..64).rev() {
        let mask = 1u64 << bit;
        let Some(i) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, i);
        let piv = rows[rank];
        for (j, r) in rows.iter_mut().enumerate() {
            if j != rank && *r & mask != 0 {
                *r ^= piv;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over F_p of digit rows.
pub(crate) fn prime_rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(i) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, i);
        let inv = nt::inv_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = nt::mul_mod(*x, inv, p);
        }
        let piv = rows[rank].clone();
        for (j, r) in rows.iter_mut().enumerate() {
            if j == rank || r[c] == 0 {
                continue;
            }
            let f = r[c];
            for (x, &y) in r.iter_mut().zip(&piv) {
                *x = (*x + p - nt::mul_mod(f, y, p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// dim over F_q of the F_q-span of the entries of `v` (the rank weight).
///
/// Expands every product `b·v_i`, with `b` running over a basis of F_q/F_p,
/// into its F_p coordinates; the F_p-rank of that matrix is `e` times the
/// F_q-dimension.
pub fn q_rank(tower: &FieldTower, v: &[FieldElem]) -> usize {
    let e = tower.e() as usize;
    let basis = tower.base_field_basis();
    let rank_p = if tower.p() == 2 {
        let rows = v
            .iter()
            .flat_map(|&x| basis.iter().map(move |&b| tower.mul(b, x).enc()))
            .filter(|&r| r != 0)
            .collect();
        binary_rank(rows)
    } else {
        let rows: Vec<Vec<u64>> = v
            .iter()
            .filter(|x| !x.is_zero())
            .flat_map(|&x| basis.iter().map(move |&b| tower.coeffs(tower.mul(b, x))))
            .collect();
        prime_rank(rows, tower.p())
    };
    assert_eq!(rank_p % e, 0, "F_p-rank of an F_q-space is a multiple of e");
    rank_p / e
}

pub fn rank_distance(tower: &FieldTower, u: &[FieldElem], v: &[FieldElem]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    let diff: Vec<FieldElem> = u.iter().zip(v).map(|(&a, &b)| tower.sub(a, b)).collect();
    Ok(q_rank(tower, &diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, e: u32, m: u32) -> Arc<FieldTower> {
        Arc::new(FieldTower::build(p, e, m).unwrap())
    }

    fn random_mat(t: &Arc<FieldTower>, rows: usize, cols: usize, seed: u64) -> Mat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..rows * cols).map(|_| t.random(&mut rng)).collect();
        Mat::new(t.clone(), rows, cols, data).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let t = tower(2, 1, 4);
        let id = Mat::identity(t.clone(), 5);
        assert_eq!(rref(&id), (id.clone(), 5));
        let z = Mat::zeros(t, 3, 4);
        assert_eq!(rref(&z), (z.clone(), 0));
    }

    #[test]
    fn rref_matches_incremental_kernel() {
        for (p, m) in [(2, 6), (3, 3), (2, 20)] {
            let t = tower(p, 1, m);
            for seed in 0..20 {
                let a = random_mat(&t, 4, 6, seed);
                let (r, k) = rref(&a);
                assert_eq!(r.take_rows(k), RowSpace::from_mat(&a).to_mat());
                assert_eq!(rank(&a), k);
                // idempotent
                assert_eq!(rref(&r).0, r);
            }
        }
    }

    #[test]
    fn row_space_ops() {
        let t = tower(2, 1, 5);
        let g = random_mat(&t, 3, 5, 1);
        let (gr, k) = rref(&g);
        let gr = gr.take_rows(k);
        let sum = row_space_sum(&[g.clone(), g.clone()]).unwrap();
        assert_eq!(sum, gr);
        let z = Mat::zeros(t.clone(), 2, 5);
        assert_eq!(row_space_sum(&[g.clone(), z]).unwrap(), gr);
        let mut rows = g.to_rows();
        rows.reverse();
        let perm = Mat::from_rows(t.clone(), 5, &rows).unwrap();
        assert!(row_space_equal(&g, &perm).unwrap());
        let other = Mat::zeros(t, 1, 4);
        assert!(row_space_sum(&[g.clone(), other.clone()]).is_err());
        assert!(row_space_equal(&g, &other).is_err());
    }

    #[test]
    fn q_rank_basics() {
        let t = tower(2, 1, 4);
        let z = vec![t.zero(); 3];
        assert_eq!(q_rank(&t, &z), 0);
        assert_eq!(q_rank(&t, &[t.one(), t.zero(), t.zero()]), 1);
        let b = t.elem(2).unwrap();
        assert_eq!(q_rank(&t, &[t.one(), b, t.add(b, t.one())]), 2);
        let basis = t.subfield_basis(4).unwrap();
        assert_eq!(q_rank(&t, &basis), 4);
    }

    #[test]
    fn q_rank_over_nonprime_base() {
        // F_4 ⊆ F_64: 1 and any element of F_4 are F_4-dependent
        let t = tower(2, 2, 3);
        let g = t.base_field_basis()[1];
        assert_eq!(q_rank(&t, &[t.one(), g]), 1);
        let beta = t.primitive_element();
        assert_eq!(q_rank(&t, &t.power_basis(beta, 3)), 3);
    }

    #[test]
    fn rank_distance_errors_and_zero() {
        let t = tower(3, 1, 3);
        let u = vec![t.one(), t.elem(5).unwrap()];
        assert_eq!(rank_distance(&t, &u, &u).unwrap(), 0);
        assert!(rank_distance(&t, &u, &u[..1]).is_err());
    }

    #[test]
    fn matmul_identity() {
        let t = tower(3, 1, 2);
        let a = random_mat(&t, 3, 4, 5);
        let id = Mat::identity(t, 4);
        assert_eq!(a.matmul(&id).unwrap(), a);
        assert!(a.matmul(&a).is_err());
    }
}
