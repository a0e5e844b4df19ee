//! Decreasing `Z`-filtrations and their algebra: direct sum, tensor
//! product, twist by a divisor.
//!
//! A [`Filtration`] is stored by its jumps. A step `(l, S)` means
//! `E(i) = S` for `l <= i` up to the next step; below the first step the
//! filtration is the whole space. Steps strictly decrease and the last one
//! is the zero subspace, so every filtration is exhaustive and separated.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::rational::Rational;

use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    ambient: usize,
    steps: Vec<(i64, Subspace)>,
}

impl Filtration {
    pub fn new(ambient: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        let mut prev_level = None;
        let mut prev = Subspace::full(ambient);
        for (level, s) in &steps {
            if s.ambient_dim() != ambient {
                return Err(Error::input(alloc::format!(
                    "subspace at level {level} lives in dimension {}, expected {ambient}",
                    s.ambient_dim()
                )));
            }
            if prev_level.is_some_and(|p| p >= *level) {
                return Err(Error::input("filtration levels must strictly increase"));
            }
            if s.dim() >= prev.dim() || !s.is_subspace_of(&prev) {
                return Err(Error::input(alloc::format!(
                    "subspace at level {level} is not a proper subspace of the previous step"
                )));
            }
            prev_level = Some(*level);
            prev = s.clone();
        }
        if !prev.is_zero() {
            return Err(Error::input("filtration must end in the zero subspace"));
        }
        Ok(Filtration { ambient, steps })
    }

    /// `E(i)` is everything for `i <= degree` and zero above.
    pub fn constant(ambient: usize, degree: i64) -> Self {
        let steps = if ambient == 0 { Vec::new() } else { alloc::vec![(degree + 1, Subspace::zero(ambient))] };
        Filtration { ambient, steps }
    }

    /// The filtration of the trivial bundle: jump to zero at level 1.
    pub fn trivial(ambient: usize) -> Self {
        Self::constant(ambient, 0)
    }

    /// `E(i) = span{v_j : d_j >= i}` for a basis `v` with degrees `d`.
    pub fn from_graded_basis(vectors: &[Vec<Rational>], degrees: &[i64]) -> Result<Self> {
        let ambient = vectors.len();
        if degrees.len() != ambient {
            return Err(Error::input("need one degree per basis vector"));
        }
        if vectors.iter().any(|v| v.len() != ambient) || crate::linalg::rank(vectors, ambient) != ambient {
            return Err(Error::input("vectors do not form a basis"));
        }
        let candidates = degrees.iter().map(|d| d + 1).collect();
        Ok(Filtration::from_levels(ambient, candidates, |i| {
            let rows = vectors.iter().zip(degrees).filter(|(_, &d)| d >= i).map(|(v, _)| v.clone()).collect();
            Subspace::from_rows_unchecked(rows, ambient)
        }))
    }

    /// Builds the canonical filtration from an evaluator that is the whole
    /// space below the smallest candidate, constant between consecutive
    /// candidates, and zero at the largest one.
    pub(crate) fn from_levels(ambient: usize, candidates: BTreeSet<i64>, value: impl Fn(i64) -> Subspace) -> Self {
        let mut steps = Vec::new();
        let mut prev = Subspace::full(ambient);
        for level in candidates {
            let s = value(level);
            debug_assert!(s.is_subspace_of(&prev));
            if s != prev {
                prev = s.clone();
                steps.push((level, s));
            }
        }
        debug_assert!(prev.is_zero());
        Filtration { ambient, steps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn jump_levels(&self) -> impl Iterator<Item = i64> + '_ {
        self.steps.iter().map(|(l, _)| *l)
    }

    /// `E(i)`.
    pub fn at(&self, i: i64) -> Subspace {
        match self.steps.iter().rev().find(|(l, _)| *l <= i) {
            Some((_, s)) => s.clone(),
            None => Subspace::full(self.ambient),
        }
    }

    /// Nonzero graded pieces as `(i, dim E(i)/E(i+1))`, increasing in `i`.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        let mut prev = self.ambient;
        self.steps
            .iter()
            .map(|(l, s)| {
                let d = prev - s.dim();
                prev = s.dim();
                (l - 1, d)
            })
            .collect()
    }

    /// Multiset of degrees, each `i` repeated `dim E(i)/E(i+1)` times.
    pub fn degrees(&self) -> Vec<i64> {
        self.graded_dims().into_iter().flat_map(|(i, d)| core::iter::repeat_n(i, d)).collect()
    }

    /// `sum_i i * dim E(i)/E(i+1)`.
    pub fn first_chern_coefficient(&self) -> i64 {
        self.graded_dims().iter().map(|&(i, d)| i * d as i64).sum()
    }

    /// Largest `i` with `v` in `E(i)`; `None` for the zero vector.
    pub fn degree_of(&self, v: &[Rational]) -> Option<i64> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        // the last step is zero, so a nonzero vector always drops out
        self.steps.iter().find(|(_, s)| !s.contains_unchecked(v)).map(|(l, _)| l - 1)
    }

    /// Distinct values: the whole space followed by every step.
    pub fn subspaces(&self) -> impl Iterator<Item = Subspace> + '_ {
        core::iter::once(Subspace::full(self.ambient)).chain(self.steps.iter().map(|(_, s)| s.clone()))
    }

    /// `i -> E(i - by)`.
    pub fn shift(&self, by: i64) -> Self {
        Filtration { ambient: self.ambient, steps: self.steps.iter().map(|(l, s)| (l + by, s.clone())).collect() }
    }

    pub fn direct_sum(&self, other: &Filtration) -> Self {
        let n = self.ambient + other.ambient;
        let candidates = self.jump_levels().chain(other.jump_levels()).collect();
        Filtration::from_levels(n, candidates, |i| {
            self.at(i).embed(n, 0).sum_unchecked(&other.at(i).embed(n, self.ambient))
        })
    }

    /// `(E (x) F)(i) = sum_{s + t = i} E(s) (x) F(t)`.
    pub fn tensor(&self, other: &Filtration) -> Self {
        let n = self.ambient * other.ambient;
        if n == 0 {
            return Filtration { ambient: 0, steps: Vec::new() };
        }
        let candidates = self.jump_levels().flat_map(|a| other.jump_levels().map(move |b| a + b - 1)).collect();
        // E(s) is constant on [l_j, l_{j+1} - 1]; the largest F(i - s) on each
        // such run is at its right end, so s ranges over l_j - 1.
        let tops: Vec<i64> = self.jump_levels().map(|l| l - 1).collect();
        Filtration::from_levels(n, candidates, |i| {
            tops.iter().fold(Subspace::zero(n), |acc, &s| acc.sum_unchecked(&self.at(s).tensor(&other.at(i - s))))
        })
    }

    /// Induced filtration `E(i) ∩ F` written in the coordinates of `F`.
    pub fn restrict_to(&self, f: &Subspace) -> Self {
        let candidates = self.jump_levels().collect();
        Filtration::from_levels(f.dim(), candidates, |i| {
            f.restrict(&self.at(i).intersect_unchecked(f)).expect("intersection lies in F")
        })
    }

    /// Filtration `E(i) / (E(i) ∩ F)` on `E / F`, in the complement
    /// coordinates of [`Subspace::project_to_complement`].
    pub fn quotient_by(&self, f: &Subspace) -> Self {
        let candidates = self.jump_levels().collect();
        Filtration::from_levels(f.ambient_dim() - f.dim(), candidates, |i| f.project_to_complement(&self.at(i)))
    }
}

/// Klyachko data: a vector space with one filtration per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiltrationBundle {
    rank: usize,
    filtrations: Vec<Filtration>,
}

impl FiltrationBundle {
    pub fn new(rank: usize, filtrations: Vec<Filtration>) -> Result<Self> {
        if let Some(f) = filtrations.iter().find(|f| f.ambient != rank) {
            return Err(Error::input(alloc::format!(
                "filtration on a space of dimension {}, bundle rank {rank}",
                f.ambient
            )));
        }
        Ok(FiltrationBundle { rank, filtrations })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ray_count(&self) -> usize {
        self.filtrations.len()
    }

    pub fn filtrations(&self) -> &[Filtration] {
        &self.filtrations
    }

    /// Filtration on ray `ray` (1-based).
    pub fn filtration(&self, ray: usize) -> &Filtration {
        &self.filtrations[ray - 1]
    }

    fn check_same_fan(&self, other: &FiltrationBundle) -> Result<()> {
        if self.ray_count() != other.ray_count() {
            return Err(Error::input(alloc::format!(
                "bundles live on fans with {} and {} rays",
                self.ray_count(),
                other.ray_count()
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &FiltrationBundle, rank: usize, f: impl Fn(&Filtration, &Filtration) -> Filtration) -> Result<Self> {
        self.check_same_fan(other)?;
        let filtrations = self.filtrations.iter().zip(&other.filtrations).map(|(a, b)| f(a, b)).collect();
        Ok(FiltrationBundle { rank, filtrations })
    }

    /// First Chern class: coefficient `sum_i i dim E^rho(i)/E^rho(i+1)` at each ray.
    pub fn c1(&self) -> InvariantDivisor {
        InvariantDivisor::new(self.filtrations.iter().map(Filtration::first_chern_coefficient).collect())
    }
}

/// The line bundle `O(D)`: jump at `m_rho` on each ray.
pub fn line_bundle(d: &InvariantDivisor) -> FiltrationBundle {
    FiltrationBundle { rank: 1, filtrations: d.m.iter().map(|&m| Filtration::constant(1, m)).collect() }
}

/// Rank-`rank` trivial bundle on a fan with `rays` rays.
pub fn trivial_bundle(rays: usize, rank: usize) -> FiltrationBundle {
    FiltrationBundle { rank, filtrations: (0..rays).map(|_| Filtration::trivial(rank)).collect() }
}

pub fn direct_sum(e: &FiltrationBundle, f: &FiltrationBundle) -> Result<FiltrationBundle> {
    e.zip_with(f, e.rank + f.rank, Filtration::direct_sum)
}

pub fn tensor(e: &FiltrationBundle, f: &FiltrationBundle) -> Result<FiltrationBundle> {
    e.zip_with(f, e.rank * f.rank, Filtration::tensor)
}

/// `E (x) O(D)`: the filtration on ray `rho` becomes `i -> E^rho(i - m_rho)`.
pub fn twist(e: &FiltrationBundle, d: &InvariantDivisor) -> Result<FiltrationBundle> {
    if d.len() != e.ray_count() {
        return Err(Error::input(alloc::format!(
            "divisor has {} coefficients, bundle has {} rays",
            d.len(),
            e.ray_count()
        )));
    }
    let filtrations = e.filtrations.iter().zip(&d.m).map(|(f, &m)| f.shift(m)).collect();
    Ok(FiltrationBundle { rank: e.rank, filtrations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use alloc::vec;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span_ints(&[v], v.len()).unwrap()
    }

    /// Two-step filtration: whole space up to 0, `s` at level 1, zero from 2.
    fn two_step(s: Subspace) -> Filtration {
        let n = s.ambient_dim();
        Filtration::new(n, vec![(1, s), (2, Subspace::zero(n))]).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_steps() {
        let z = Subspace::zero(2);
        assert!(Filtration::new(2, vec![(1, line(&[1, 0]))]).is_err());
        assert!(Filtration::new(2, vec![(2, line(&[1, 0])), (1, z.clone())]).is_err());
        assert!(Filtration::new(2, vec![(1, Subspace::full(2)), (2, z.clone())]).is_err());
        assert!(Filtration::new(2, vec![(1, line(&[1, 0])), (2, line(&[0, 1])), (3, z)]).is_err());
    }

    #[test]
    fn evaluation_and_degrees() {
        let f = two_step(line(&[1, 1]));
        assert_eq!(f.at(-5), Subspace::full(2));
        assert_eq!(f.at(0), Subspace::full(2));
        assert_eq!(f.at(1), line(&[1, 1]));
        assert!(f.at(2).is_zero());
        assert_eq!(f.graded_dims(), vec![(0, 1), (1, 1)]);
        assert_eq!(f.first_chern_coefficient(), 1);
        assert_eq!(f.degree_of(&rational::ints(&[2, 2])), Some(1));
        assert_eq!(f.degree_of(&rational::ints(&[1, 0])), Some(0));
        assert_eq!(f.degree_of(&rational::ints(&[0, 0])), None);
    }

    #[test]
    fn line_bundle_examples() {
        let o = line_bundle(&InvariantDivisor::zero(4));
        assert_eq!(o, trivial_bundle(4, 1));
        let d1 = line_bundle(&InvariantDivisor::prime(4, 1));
        let degs: Vec<Vec<i64>> = d1.filtrations().iter().map(Filtration::degrees).collect();
        assert_eq!(degs, vec![vec![1], vec![0], vec![0], vec![0]]);
        assert_eq!(d1.c1(), InvariantDivisor::prime(4, 1));
    }

    #[test]
    fn direct_sum_examples() {
        let oo = direct_sum(&trivial_bundle(4, 1), &trivial_bundle(4, 1)).unwrap();
        assert_eq!(oo, trivial_bundle(4, 2));
        let xi = line_bundle(&InvariantDivisor::new(vec![0, 0, 3, 0]));
        let s = direct_sum(&trivial_bundle(4, 1), &xi).unwrap();
        assert_eq!(s.filtration(3).degrees(), vec![0, 3]);
        assert_eq!(s.filtration(3).at(1), line(&[0, 1]));
        let zero_rank = trivial_bundle(4, 0);
        assert_eq!(direct_sum(&s, &zero_rank).unwrap(), s);
        assert!(direct_sum(&s, &trivial_bundle(2, 1)).is_err());
    }

    #[test]
    fn tensor_examples() {
        let a = line_bundle(&InvariantDivisor::new(vec![1, -2]));
        let b = line_bundle(&InvariantDivisor::new(vec![3, 5]));
        assert_eq!(tensor(&a, &b).unwrap(), line_bundle(&InvariantDivisor::new(vec![4, 3])));

        let e = FiltrationBundle::new(2, vec![two_step(line(&[1, 2])), Filtration::trivial(2)]).unwrap();
        assert_eq!(tensor(&e, &trivial_bundle(2, 1)).unwrap(), e);
        let shifted = tensor(&e, &line_bundle(&InvariantDivisor::new(vec![2, 0]))).unwrap();
        assert_eq!(shifted.filtration(1).degrees(), vec![2, 3]);
        assert_eq!(shifted.filtration(1).at(3), line(&[1, 2]));
    }

    #[test]
    fn tensor_of_rank_two_filtrations() {
        // degrees {0,1} with lines e1 and e2 tensored with itself: degrees {0,1,1,2}
        let f = two_step(line(&[1, 0]));
        let g = two_step(line(&[0, 1]));
        let t = f.tensor(&g);
        assert_eq!(t.degrees(), vec![0, 1, 1, 2]);
        // e1 (x) e2 is the top piece
        assert_eq!(t.at(2), line(&[0, 1, 0, 0]));
    }

    #[test]
    fn twist_examples() {
        let e = FiltrationBundle::new(2, vec![two_step(line(&[1, 0])), two_step(line(&[0, 1]))]).unwrap();
        assert_eq!(twist(&e, &InvariantDivisor::zero(2)).unwrap(), e);
        let t = twist(&e, &InvariantDivisor::new(vec![1, 0])).unwrap();
        assert_eq!(t.filtration(1).degrees(), vec![1, 2]);
        assert_eq!(twist(&t, &InvariantDivisor::new(vec![-1, 0])).unwrap(), e);
        assert!(twist(&e, &InvariantDivisor::zero(3)).is_err());
    }

    #[test]
    fn restriction_and_quotient() {
        let f = two_step(line(&[1, 0]));
        let sub = line(&[1, 0]);
        assert_eq!(f.restrict_to(&sub).degrees(), vec![1]);
        assert_eq!(f.quotient_by(&sub).degrees(), vec![0]);
        let other = line(&[0, 1]);
        assert_eq!(f.restrict_to(&other).degrees(), vec![0]);
        assert_eq!(f.quotient_by(&other).degrees(), vec![1]);
    }
}
