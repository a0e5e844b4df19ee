//! Invariant divisors, their Picard-basis coordinates, intersection numbers
//! with invariant curves, and divisor polytopes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fan::{BottMatrix, Wall, WallRelation};
use crate::polyhedron;

/// `sum m_rho D_rho` over all `2k` rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantDivisor {
    pub m: Vec<i64>,
}

/// `sum a_i D_{k+i}` in the Picard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedDivisor {
    pub a: Vec<i64>,
}

impl InvariantDivisor {
    pub fn new(m: Vec<i64>) -> Self {
        InvariantDivisor { m }
    }

    pub fn zero(rays: usize) -> Self {
        InvariantDivisor { m: vec![0; rays] }
    }

    /// The prime divisor `D_ray`.
    pub fn prime(rays: usize, ray: usize) -> Self {
        let mut m = vec![0; rays];
        m[ray - 1] = 1;
        InvariantDivisor { m }
    }

    /// `D_1 + ... + D_{2k}`.
    pub fn anticanonical(rays: usize) -> Self {
        InvariantDivisor { m: vec![1; rays] }
    }

    pub fn coeff(&self, ray: usize) -> i64 {
        self.m[ray - 1]
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn add(&self, other: &InvariantDivisor) -> InvariantDivisor {
        InvariantDivisor { m: self.m.iter().zip(&other.m).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: i64) -> InvariantDivisor {
        InvariantDivisor { m: self.m.iter().map(|x| s * x).collect() }
    }

    pub(crate) fn check(&self, c: &BottMatrix) -> Result<()> {
        if self.m.len() != c.ray_count() {
            return Err(Error::input(alloc::format!(
                "divisor has {} coefficients, the fan has {} rays",
                self.m.len(),
                c.ray_count()
            )));
        }
        Ok(())
    }
}

impl ReducedDivisor {
    pub fn new(a: Vec<i64>) -> Self {
        ReducedDivisor { a }
    }

    /// The same class as an invariant divisor supported on `D_{k+1..2k}`.
    pub fn embed(&self) -> InvariantDivisor {
        let k = self.a.len();
        let mut m = vec![0; 2 * k];
        m[k..].copy_from_slice(&self.a);
        InvariantDivisor { m }
    }

    pub fn neg(&self) -> ReducedDivisor {
        ReducedDivisor { a: self.a.iter().map(|x| -x).collect() }
    }

    pub(crate) fn check(&self, c: &BottMatrix) -> Result<()> {
        if self.a.len() != c.height() {
            return Err(Error::input(alloc::format!(
                "reduced divisor has {} coefficients, the tower has height {}",
                self.a.len(),
                c.height()
            )));
        }
        Ok(())
    }
}

/// Rewrites `D` in the Picard basis using
/// `D_i ~ D_{k+i} - sum_{l < i} c_{l,i} D_{k+l}`.
pub fn reduce(c: &BottMatrix, d: &InvariantDivisor) -> Result<ReducedDivisor> {
    d.check(c)?;
    let k = c.height();
    let a = (1..=k)
        .map(|j| d.coeff(k + j) + d.coeff(j) - (j + 1..=k).map(|i| c.entry(j, i) * d.coeff(i)).sum::<i64>())
        .collect();
    Ok(ReducedDivisor { a })
}

/// `-K` in the Picard basis; `a_i = 2 - sum_{l > i} c_{i,l}`.
pub fn anticanonical(c: &BottMatrix) -> ReducedDivisor {
    reduce(c, &InvariantDivisor::anticanonical(c.ray_count())).expect("length matches")
}

/// Closed-form value of `D . V(tau)` together with a flag that is set when
/// the matrix has negative entries (the value is still exact, but the
/// positivity conclusions drawn from it need a non-negative matrix).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedIntersection {
    pub value: i64,
    pub negative_matrix: bool,
}

/// Intersection of `sum a_i D_{k+i}` with the curve of wall `w` by the
/// recursion on the indices absent from the wall.
///
/// Let `i_1 < ... < i_r` be the indices whose ray `v_i` is not on the wall
/// and `i_j` the pivot. With `b_{i_m} = c_{i_j,i_m} + sum_{t=j+1}^{m-1}
/// c_{i_t,i_m} b_{i_t}` for `m > j`, the value is
/// `a_{i_j} + sum_{l > j} a_{i_l} b_{i_l}`.
pub fn curve_intersection_closed(c: &BottMatrix, a: &ReducedDivisor, w: Wall) -> Result<ClosedIntersection> {
    a.check(c)?;
    c.check_wall(w)?;
    let k = c.height();
    let absent: Vec<usize> = (1..=k).filter(|&i| i == w.pivot || w.mask & (1 << (i - 1)) != 0).collect();
    let j = absent.iter().position(|&i| i == w.pivot).expect("pivot is absent");
    let later = &absent[j + 1..];
    let mut b: Vec<i64> = Vec::with_capacity(later.len());
    for (m, &im) in later.iter().enumerate() {
        let bm = c.entry(w.pivot, im) + later[..m].iter().zip(&b).map(|(&it, &bt)| c.entry(it, im) * bt).sum::<i64>();
        b.push(bm);
    }
    let value = a.a[w.pivot - 1] + later.iter().zip(&b).map(|(&il, &bl)| a.a[il - 1] * bl).sum::<i64>();
    Ok(ClosedIntersection { value, negative_matrix: !c.is_nonneg() })
}

/// Intersection read off the wall relation: `D_rho . V(tau)` is 1 for the two
/// opposite rays, the relation coefficient for rays on the wall, 0 otherwise.
pub fn curve_intersection_oracle(c: &BottMatrix, d: &InvariantDivisor, w: Wall) -> Result<i64> {
    d.check(c)?;
    let rel = c.wall_relation(w)?;
    Ok(intersect_with_relation(d, &rel))
}

/// Same as [`curve_intersection_oracle`] with a precomputed relation.
pub fn intersect_with_relation(d: &InvariantDivisor, rel: &WallRelation) -> i64 {
    d.m.iter().zip(rel.coeffs()).map(|(m, x)| m * x).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub bound: i64,
}

/// `{x : <x, v_rho> >= -m_rho for every ray}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPolytope {
    pub dim: usize,
    pub inequalities: Vec<HalfSpace>,
}

pub fn polytope(c: &BottMatrix, d: &InvariantDivisor) -> Result<DivisorPolytope> {
    d.check(c)?;
    let inequalities = c
        .rays()
        .into_iter()
        .map(|ray| HalfSpace { normal: ray.vector, bound: -d.coeff(ray.index) })
        .collect();
    Ok(DivisorPolytope { dim: c.height(), inequalities })
}

/// Affine dimension, `-1` for the empty polytope.
pub fn polytope_dim(p: &DivisorPolytope) -> i32 {
    let sys: Vec<(Vec<i64>, i64)> = p.inequalities.iter().map(|h| (h.normal.clone(), h.bound)).collect();
    polyhedron::affine_dimension(p.dim, &sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> BottMatrix {
        BottMatrix::from_upper(3, |i, j| match (i, j) {
            (1, 2) => 1,
            (2, 3) => 2,
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn reduce_examples() {
        let h1 = BottMatrix::hirzebruch(1);
        assert_eq!(reduce(&h1, &InvariantDivisor::new(vec![1, 1, 1, 1])).unwrap().a, vec![1, 2]);
        let c = k3();
        assert_eq!(reduce(&c, &InvariantDivisor::new(vec![0, 0, 0, 3, -1, 4])).unwrap().a, vec![3, -1, 4]);
        assert_eq!(reduce(&c, &InvariantDivisor::anticanonical(6)).unwrap().a, vec![1, 0, 2]);
        assert!(reduce(&c, &InvariantDivisor::new(vec![1, 2])).is_err());
    }

    #[test]
    fn anticanonical_examples() {
        assert_eq!(anticanonical(&BottMatrix::identity(3).unwrap()).a, vec![2, 2, 2]);
        for r in -2..5 {
            assert_eq!(anticanonical(&BottMatrix::hirzebruch(r)).a, vec![2 - r, 2]);
        }
        assert_eq!(anticanonical(&k3()).a, vec![1, 0, 2]);
    }

    #[test]
    fn closed_intersection_on_hirzebruch() {
        let r = 3;
        let h = BottMatrix::hirzebruch(r);
        let d = ReducedDivisor::new(vec![5, 7]);
        let on_v4 = h.wall_from_rays(&[4]).unwrap();
        assert_eq!(curve_intersection_closed(&h, &d, on_v4).unwrap().value, 5 + 7 * r);
        let on_v1 = h.wall_from_rays(&[1]).unwrap();
        assert_eq!(curve_intersection_closed(&h, &d, on_v1).unwrap().value, 7);
    }

    #[test]
    fn closed_intersection_of_basis_curve() {
        let c = k3();
        for p in 1..=3 {
            let w = Wall { mask: 0, pivot: p };
            let mut a = vec![0; 3];
            a[p - 1] = 1;
            assert_eq!(curve_intersection_closed(&c, &ReducedDivisor::new(a), w).unwrap().value, 1);
        }
    }

    #[test]
    fn closed_intersection_flags_negative_matrix() {
        let c = BottMatrix::hirzebruch(-2);
        let w = c.wall_from_rays(&[4]).unwrap();
        let res = curve_intersection_closed(&c, &ReducedDivisor::new(vec![1, 1]), w).unwrap();
        assert!(res.negative_matrix);
        assert_eq!(res.value, 1 - 2);
    }

    #[test]
    fn oracle_examples() {
        let h1 = BottMatrix::hirzebruch(1);
        let on_v2 = h1.wall_from_rays(&[2]).unwrap();
        assert_eq!(curve_intersection_oracle(&h1, &InvariantDivisor::prime(4, 2), on_v2).unwrap(), -1);
        let r = 4;
        let h = BottMatrix::hirzebruch(r);
        let on_v4 = h.wall_from_rays(&[4]).unwrap();
        assert_eq!(curve_intersection_oracle(&h, &InvariantDivisor::prime(4, 4), on_v4).unwrap(), r);
        let sq = BottMatrix::identity(2).unwrap();
        let on_v2 = sq.wall_from_rays(&[2]).unwrap();
        assert_eq!(curve_intersection_oracle(&sq, &InvariantDivisor::prime(4, 1), on_v2).unwrap(), 1);
    }

    #[test]
    fn polytope_examples() {
        let h1 = BottMatrix::hirzebruch(1);
        let p = polytope(&h1, &InvariantDivisor::new(vec![0, 0, 1, 1])).unwrap();
        let listed: Vec<(Vec<i64>, i64)> = p.inequalities.iter().map(|h| (h.normal.clone(), h.bound)).collect();
        assert_eq!(listed, vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, 1], -1), (vec![0, -1], -1)]);
        assert_eq!(polytope_dim(&p), 2);
        let seg = polytope(&h1, &InvariantDivisor::new(vec![0, 0, 1, 0])).unwrap();
        assert_eq!(polytope_dim(&seg), 1);
        let pt = polytope(&h1, &InvariantDivisor::zero(4)).unwrap();
        assert!(pt.inequalities.iter().all(|h| h.bound == 0));
        assert_eq!(polytope_dim(&pt), 0);
        let p1 = BottMatrix::identity(1).unwrap();
        assert_eq!(polytope_dim(&polytope(&p1, &InvariantDivisor::prime(2, 2)).unwrap()), 1);
    }
}
