//! Exact rational linear algebra: canonical subspaces and small solves.
//!
//! A [`Subspace`] is stored as the reduced row-echelon basis of its row
//! space, so two subspaces are equal exactly when their stored matrices are.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Row-reduces `rows` in place to reduced row-echelon form, drops zero rows,
/// and returns the pivot column of each remaining row.
fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

/// Returns the row space of `rows` in canonical form.
pub fn canonicalize(rows: Vec<Vec<Rational>>, ambient: usize) -> Result<Subspace> {
    if let Some(bad) = rows.iter().find(|r| r.len() != ambient) {
        return Err(Error::input(alloc::format!(
            "row of length {} in ambient dimension {ambient}",
            bad.len()
        )));
    }
    Ok(Subspace::from_rows_unchecked(rows, ambient))
}

impl Subspace {
    pub(crate) fn from_rows_unchecked(mut rows: Vec<Vec<Rational>>, ambient: usize) -> Self {
        rref(&mut rows, ambient);
        Subspace { ambient, basis: rows }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut row = vec![Rational::zero(); ambient];
                row[i] = Rational::one();
                row
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Span of integer vectors.
    pub fn span_ints(rows: &[&[i64]], ambient: usize) -> Result<Self> {
        canonicalize(rows.iter().map(|r| rational::ints(r)).collect(), ambient)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// The reduced row-echelon basis.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("rref rows are nonzero"))
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::input(alloc::format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace) -> Subspace {
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_rows_unchecked(rows, self.ambient)
    }

    /// Exact intersection by Zassenhaus elimination on `[u | u]`, `[w | 0]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.intersect_unchecked(other))
    }

    pub(crate) fn intersect_unchecked(&self, other: &Subspace) -> Subspace {
        let n = self.ambient;
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(n);
        }
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.basis {
            rows.push(u.iter().chain(u.iter()).cloned().collect());
        }
        for w in &other.basis {
            rows.push(w.iter().cloned().chain(core::iter::repeat_n(Rational::zero(), n)).collect());
        }
        let pivots = rref(&mut rows, 2 * n);
        let meet = rows
            .into_iter()
            .zip(pivots)
            .filter(|&(_, p)| p >= n)
            .map(|(row, _)| row[n..].to_vec())
            .collect();
        Subspace::from_rows_unchecked(meet, n)
    }

    /// Subtracts from `v` its components along the pivot columns; the
    /// result is zero exactly when `v` lies in the subspace.
    pub(crate) fn residue(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &factor * y;
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::input(alloc::format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &[Rational]) -> bool {
        self.residue(v).iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.basis.iter().all(|v| other.contains_unchecked(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    /// Because the basis is reduced, these are the entries of `v` at the
    /// pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient || !self.contains_unchecked(v) {
            return None;
        }
        Some(self.pivots().into_iter().map(|p| v[p].clone()).collect())
    }

    /// Columns that carry no pivot. The unit vectors on these columns span a
    /// complement of the subspace.
    pub fn free_columns(&self) -> Vec<usize> {
        let pivots = self.pivots();
        (0..self.ambient).filter(|c| !pivots.contains(c)).collect()
    }

    /// Image of a subspace of the ambient space under the projection onto
    /// the complement spanned by the free-column unit vectors, written in
    /// those coordinates.
    pub fn project_to_complement(&self, s: &Subspace) -> Subspace {
        let free = self.free_columns();
        let rows = s
            .basis
            .iter()
            .map(|v| {
                let r = self.residue(v);
                free.iter().map(|&c| r[c].clone()).collect()
            })
            .collect();
        Subspace::from_rows_unchecked(rows, free.len())
    }

    /// Re-expresses a subspace of `self` in the coordinates given by
    /// [`Subspace::coordinates`].
    pub fn restrict(&self, s: &Subspace) -> Option<Subspace> {
        let rows = s
            .basis
            .iter()
            .map(|v| self.coordinates(v))
            .collect::<Option<Vec<_>>>()?;
        Some(Subspace::from_rows_unchecked(rows, self.dim()))
    }

    /// Embeds into a larger ambient space at column offset `offset`.
    pub(crate) fn embed(&self, ambient: usize, offset: usize) -> Subspace {
        let rows = self
            .basis
            .iter()
            .map(|v| {
                let mut row = vec![Rational::zero(); ambient];
                row[offset..offset + v.len()].clone_from_slice(v);
                row
            })
            .collect();
        Subspace::from_rows_unchecked(rows, ambient)
    }

    /// Span of all `u ⊗ w`, with `(a, b)` mapped to `a * dim(other) + b`.
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let n = self.ambient * other.ambient;
        let mut rows = Vec::with_capacity(self.dim() * other.dim());
        for u in &self.basis {
            for w in &other.basis {
                rows.push(u.iter().flat_map(|x| w.iter().map(move |y| x * y)).collect());
            }
        }
        Subspace::from_rows_unchecked(rows, n)
    }
}

/// Rank of a list of rational vectors.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut rows = rows.to_vec();
    rref(&mut rows, ncols).len()
}

/// Determinant of a square integer matrix.
pub fn determinant(a: &[Vec<i64>]) -> Result<Rational> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::input("matrix is not square"));
    }
    let mut m: Vec<Vec<Rational>> = a.iter().map(|r| rational::ints(r)).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
    }
    Ok(det)
}

/// Solves `A x = b` for a unimodular integer matrix `A`.
pub fn solve_unimodular(a: &[Vec<i64>], b: &[i64]) -> Result<Vec<i64>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::input("system is not square"));
    }
    let det = determinant(a)?;
    if det.abs() != Rational::one() {
        return Err(Error::NotUnimodular);
    }
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = rational::ints(row);
            r.push(rational::int(bi));
            r
        })
        .collect();
    rref(&mut aug, n);
    aug.iter()
        .map(|row| rational::to_i64(&row[n]).ok_or_else(|| Error::input("solution overflows i64")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]], n: usize) -> Subspace {
        Subspace::span_ints(rows, n).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(q(&[&[2, 0], &[0, 3]], 2), Subspace::full(2));
        let s = q(&[&[1, 1], &[2, 2]], 2);
        assert_eq!(s.basis(), &[rational::ints(&[1, 1])]);
        let z = canonicalize(vec![], 3).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(z, Subspace::zero(3));
        assert!(canonicalize(vec![rational::ints(&[1, 2])], 3).is_err());
    }

    #[test]
    fn sum_examples() {
        let e1 = q(&[&[1, 0]], 2);
        let e2 = q(&[&[0, 1]], 2);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(2));
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        let s = q(&[&[1, 0, 0]], 3).sum(&q(&[&[1, 1, 0]], 3)).unwrap();
        assert_eq!(s.basis(), &[rational::ints(&[1, 0, 0]), rational::ints(&[0, 1, 0])]);
        assert!(e1.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = q(&[&[1, 0, 0], &[0, 1, 0]], 3);
        let b = q(&[&[0, 1, 0], &[0, 0, 1]], 3);
        assert_eq!(a.intersect(&b).unwrap(), q(&[&[0, 1, 0]], 3));
        assert_eq!(a.intersect(&Subspace::full(3)).unwrap(), a);
        let e1 = q(&[&[1, 0]], 2);
        let e2 = q(&[&[0, 1]], 2);
        assert_eq!(e1.intersect(&e2).unwrap(), Subspace::zero(2));
        assert!(e1.intersect(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn intersect_skew_planes() {
        let a = q(&[&[1, 1, 0], &[0, 1, 1]], 3);
        let b = q(&[&[1, 0, 0], &[0, 0, 1]], 3);
        // (1,1,0) - (0,1,1) = (1,0,-1)
        assert_eq!(a.intersect(&b).unwrap(), q(&[&[1, 0, -1]], 3));
    }

    #[test]
    fn contains_examples() {
        let s = q(&[&[1, 1]], 2);
        assert!(s.contains(&rational::ints(&[2, 2])).unwrap());
        assert!(!q(&[&[1, 0]], 2).contains(&rational::ints(&[0, 1])).unwrap());
        assert!(Subspace::zero(2).contains(&rational::ints(&[0, 0])).unwrap());
        assert!(s.contains(&rational::ints(&[1])).is_err());
    }

    #[test]
    fn solve_unimodular_examples() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(solve_unimodular(&id, &[1, -2, 0]).unwrap(), vec![1, -2, 0]);
        assert_eq!(solve_unimodular(&[vec![1, 0], vec![1, 1]], &[1, 3]).unwrap(), vec![1, 2]);
        assert_eq!(
            solve_unimodular(&[vec![2, 0], vec![0, 1]], &[1, 1]),
            Err(Error::NotUnimodular)
        );
    }

    #[test]
    fn coordinates_and_complement() {
        let f = q(&[&[0, 1]], 2);
        assert_eq!(f.coordinates(&rational::ints(&[0, -3])), Some(rational::ints(&[-3])));
        assert_eq!(f.coordinates(&rational::ints(&[1, 0])), None);
        assert_eq!(f.free_columns(), vec![0]);
        let img = f.project_to_complement(&q(&[&[-1, 4]], 2));
        assert_eq!(img, Subspace::full(1));
        assert_eq!(f.project_to_complement(&f), Subspace::zero(1));
    }

    #[test]
    fn tensor_of_lines() {
        let t = q(&[&[1, 1]], 2).tensor(&q(&[&[1, 0]], 2));
        assert_eq!(t, q(&[&[1, 0, 1, 0]], 4));
        assert_eq!(Subspace::full(2).tensor(&Subspace::full(3)), Subspace::full(6));
    }
}
