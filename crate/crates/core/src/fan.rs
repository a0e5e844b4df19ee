//! The fan of a Bott tower.
//!
//! Rays are numbered `1..=2k`: ray `i <= k` is `e_i`, ray `k + i` is
//! `-e_i + sum_{j > i} c_{i,j} e_j`. A maximal cone picks, for each `i`,
//! either ray `i` (bit `i - 1` clear) or ray `k + i` (bit set). A wall drops
//! one index, the pivot, from that choice.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;

/// Largest supported tower height; cones are `u32` bitmasks.
pub const MAX_HEIGHT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BottMatrix {
    k: usize,
    // row-major k x k, unit diagonal, zero below it
    entries: Vec<i64>,
    nonneg: bool,
}

/// Validates a full matrix. Negative entries are accepted and only tagged.
pub fn validate(rows: &[Vec<i64>]) -> Result<BottMatrix> {
    BottMatrix::from_rows(rows)
}

impl BottMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 || k > MAX_HEIGHT {
            return Err(Error::input(alloc::format!("height must be in 1..={MAX_HEIGHT}, got {k}")));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::input(alloc::format!("row {} has length {}, expected {k}", i + 1, row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x != 1 {
                    return Err(Error::input(alloc::format!("diagonal entry ({0},{0}) is {x}, expected 1", i + 1)));
                }
                if j < i && x != 0 {
                    return Err(Error::input(alloc::format!(
                        "entry ({},{}) below the diagonal is {x}",
                        i + 1,
                        j + 1
                    )));
                }
            }
            entries.extend_from_slice(row);
        }
        let nonneg = entries.iter().all(|&x| x >= 0);
        Ok(BottMatrix { k, entries, nonneg })
    }

    /// Builds a matrix from its strictly upper entries `c(i, j)`, `1 <= i < j <= k`.
    pub fn from_upper(k: usize, c: impl Fn(usize, usize) -> i64) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (1..=k)
            .map(|i| {
                (1..=k)
                    .map(|j| match j.cmp(&i) {
                        core::cmp::Ordering::Less => 0,
                        core::cmp::Ordering::Equal => 1,
                        core::cmp::Ordering::Greater => c(i, j),
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::from_upper(k, |_, _| 0)
    }

    /// The height-2 tower with `c_{1,2} = r`, i.e. the Hirzebruch surface `H_r`.
    pub fn hirzebruch(r: i64) -> Self {
        Self::from_rows(&[vec![1, r], vec![0, 1]]).expect("2x2 unit upper-triangular")
    }

    pub fn height(&self) -> usize {
        self.k
    }

    pub fn ray_count(&self) -> usize {
        2 * self.k
    }

    /// `c_{i,j}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[(i - 1) * self.k + (j - 1)]
    }

    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    pub fn is_identity(&self) -> bool {
        (1..=self.k).all(|i| (i + 1..=self.k).all(|j| self.entry(i, j) == 0))
    }

    /// `sum_{j > i} c_{i,j}`.
    pub fn row_sum(&self, i: usize) -> i64 {
        (i + 1..=self.k).map(|j| self.entry(i, j)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.k).map(<[i64]>::to_vec).collect()
    }

    /// Top-left `m x m` block: the matrix of the `m`-th stage of the tower.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.k {
            return Err(Error::input(alloc::format!("stage {m} out of range 1..={}", self.k)));
        }
        Self::from_upper(m, |i, j| self.entry(i, j))
    }

    pub fn ray(&self, index: usize) -> Vec<i64> {
        let k = self.k;
        assert!((1..=2 * k).contains(&index), "ray index {index} out of range");
        let mut v = vec![0; k];
        if index <= k {
            v[index - 1] = 1;
        } else {
            let m = index - k;
            v[m - 1] = -1;
            for j in m + 1..=k {
                v[j - 1] = self.entry(m, j);
            }
        }
        v
    }

    pub fn rays(&self) -> Vec<Ray> {
        (1..=2 * self.k).map(|index| Ray { index, vector: self.ray(index) }).collect()
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = MaximalCone> {
        (0..1u32 << self.k).map(|selection| MaximalCone { selection })
    }

    /// All `k * 2^(k-1)` walls, ordered by pivot then mask.
    pub fn walls(&self) -> impl Iterator<Item = Wall> {
        let k = self.k;
        (1..=k).flat_map(move |pivot| {
            let bit = 1u32 << (pivot - 1);
            (0..1u32 << k).filter(move |m| m & bit == 0).map(move |mask| Wall { mask, pivot })
        })
    }

    pub fn check_wall(&self, w: Wall) -> Result<()> {
        if w.pivot == 0 || w.pivot > self.k || w.mask >> self.k != 0 || w.mask & (1 << (w.pivot - 1)) != 0 {
            return Err(Error::input(alloc::format!(
                "wall (mask {}, pivot {}) is not a wall of a height-{} tower",
                w.mask, w.pivot, self.k
            )));
        }
        Ok(())
    }

    pub fn check_cone(&self, c: MaximalCone) -> Result<()> {
        if c.selection >> self.k != 0 {
            return Err(Error::input(alloc::format!("cone mask {} exceeds height {}", c.selection, self.k)));
        }
        Ok(())
    }

    /// The wall spanned by exactly these `k - 1` rays.
    pub fn wall_from_rays(&self, rays: &[usize]) -> Result<Wall> {
        let k = self.k;
        let mut seen = vec![false; k];
        let mut mask = 0u32;
        for &r in rays {
            if r == 0 || r > 2 * k {
                return Err(Error::input(alloc::format!("ray {r} out of range")));
            }
            let i = if r > k { r - k } else { r };
            if core::mem::replace(&mut seen[i - 1], true) {
                return Err(Error::input(alloc::format!("rays {i} and {} never share a cone", i + k)));
            }
            if r > k {
                mask |= 1 << (i - 1);
            }
        }
        let missing: Vec<usize> = (1..=k).filter(|&i| !seen[i - 1]).collect();
        match missing[..] {
            [pivot] => Ok(Wall { mask, pivot }),
            _ => Err(Error::input(alloc::format!("a wall has {} rays, got {}", k - 1, rays.len()))),
        }
    }

    pub fn cone_matrix(&self, cone: MaximalCone) -> Vec<Vec<i64>> {
        cone.ray_indices(self.k).map(|r| self.ray(r)).collect()
    }

    /// Solves for the relation `v_p + v_{k+p} + sum c_rho v_rho = 0` over the
    /// rays of the wall, in the unimodular basis of an adjacent cone.
    pub fn wall_relation(&self, w: Wall) -> Result<WallRelation> {
        self.check_wall(w)?;
        let k = self.k;
        let (inner, outer) = w.opposite_rays(k);
        let cone = w.adjacent_cones().0;
        let basis: Vec<usize> = cone.ray_indices(k).collect();
        // columns are the cone's rays
        let a: Vec<Vec<i64>> = (0..k).map(|row| basis.iter().map(|&r| self.ray(r)[row]).collect()).collect();
        let rhs: Vec<i64> = self.ray(outer).iter().map(|x| -x).collect();
        let x = linalg::solve_unimodular(&a, &rhs)?;
        let mut coeffs = vec![0i64; 2 * k];
        for (&r, &xi) in basis.iter().zip(&x) {
            coeffs[r - 1] = xi;
        }
        assert_eq!(coeffs[inner - 1], 1, "smooth complete fan: opposite ray must enter with coefficient 1");
        coeffs[outer - 1] = 1;
        let rel = WallRelation { wall: w, coeffs };
        assert!(rel.holds(self), "wall relation does not vanish");
        Ok(rel)
    }

    /// Relations for every wall, in [`BottMatrix::walls`] order.
    pub fn wall_relations(&self) -> Vec<WallRelation> {
        self.walls().map(|w| self.wall_relation(w).expect("walls() yields valid walls")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub index: usize,
    pub vector: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalCone {
    pub selection: u32,
}

impl MaximalCone {
    pub fn ray_indices(self, k: usize) -> impl Iterator<Item = usize> {
        (1..=k).map(move |i| if self.selection & (1 << (i - 1)) != 0 { k + i } else { i })
    }

    pub fn contains_ray(self, k: usize, ray: usize) -> bool {
        self.ray_indices(k).any(|r| r == ray)
    }

    /// The `k` walls bounding this cone.
    pub fn walls(self, k: usize) -> impl Iterator<Item = Wall> {
        (1..=k).map(move |pivot| Wall { mask: self.selection & !(1 << (pivot - 1)), pivot })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    /// Selection bits for the non-pivot indices; the pivot bit is clear.
    pub mask: u32,
    /// 1-based index whose ray pair `{v_p, v_{k+p}}` is omitted.
    pub pivot: usize,
}

impl Wall {
    pub fn ray_indices(self, k: usize) -> Vec<usize> {
        (1..=k)
            .filter(|&i| i != self.pivot)
            .map(|i| if self.mask & (1 << (i - 1)) != 0 { k + i } else { i })
            .collect()
    }

    /// `(p, k + p)`: the rays completing the wall to its two adjacent cones.
    pub fn opposite_rays(self, k: usize) -> (usize, usize) {
        (self.pivot, k + self.pivot)
    }

    pub fn adjacent_cones(self) -> (MaximalCone, MaximalCone) {
        let bit = 1 << (self.pivot - 1);
        (MaximalCone { selection: self.mask }, MaximalCone { selection: self.mask | bit })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: Wall,
    coeffs: Vec<i64>,
}

impl WallRelation {
    /// Coefficient of ray `ray` (1-based); zero for rays off the wall.
    pub fn coeff(&self, ray: usize) -> i64 {
        self.coeffs[ray - 1]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn holds(&self, c: &BottMatrix) -> bool {
        let k = c.height();
        let mut sum = vec![0i64; k];
        for (idx, &x) in self.coeffs.iter().enumerate() {
            for (s, v) in sum.iter_mut().zip(c.ray(idx + 1)) {
                *s += x * v;
            }
        }
        sum.iter().all(|&s| s == 0)
    }
}
