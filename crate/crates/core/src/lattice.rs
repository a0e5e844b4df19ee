//! Subspace lattices and adapted bases.
//!
//! A finite family of subspaces admits a basis `B` with `B ∩ V` a basis of
//! every member `V` exactly when the lattice it generates under `+` and `∩`
//! is distributive. Two independent deciders live here: the lattice closure
//! with a triple check of the distributive law, and a constructive search
//! for an adapted basis that is verified member by member.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::linalg::{self, Subspace};
use crate::rational::Rational;

/// Closure of `subspaces` together with `0` and the whole space under sum
/// and intersection, or `None` once more than `limit` elements appear.
fn closure_bounded(subspaces: impl IntoIterator<Item = Subspace>, ambient: usize, limit: usize) -> Option<BTreeSet<Subspace>> {
    let mut all: BTreeSet<Subspace> = subspaces.into_iter().collect();
    all.insert(Subspace::zero(ambient));
    all.insert(Subspace::full(ambient));
    if all.len() > limit {
        return None;
    }
    let mut frontier: Vec<Subspace> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<Subspace> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for a in &frontier {
            for b in &snapshot {
                for c in [a.sum_unchecked(b), a.intersect_unchecked(b)] {
                    if !all.contains(&c) {
                        all.insert(c.clone());
                        next.push(c);
                        if all.len() > limit {
                            return None;
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Some(all)
}

fn check_ambient<'a>(subspaces: impl IntoIterator<Item = &'a Subspace>, ambient: usize) -> Result<()> {
    match subspaces.into_iter().find(|s| s.ambient_dim() != ambient) {
        Some(s) => Err(Error::input(alloc::format!(
            "subspace of dimension {} in a family over dimension {ambient}",
            s.ambient_dim()
        ))),
        None => Ok(()),
    }
}

/// Smallest family containing `subspaces`, `0` and the whole space that is
/// closed under sum and intersection.
pub fn lattice_closure(subspaces: &[Subspace], ambient: usize, cap: usize) -> Result<BTreeSet<Subspace>> {
    check_ambient(subspaces, ambient)?;
    closure_bounded(subspaces.iter().cloned(), ambient, cap).ok_or(Error::ClosureCapExceeded { cap })
}

/// Checks `A ∩ (B + C) = (A ∩ B) + (A ∩ C)` on every triple.
pub fn is_distributive(lattice: &BTreeSet<Subspace>) -> bool {
    let elems: Vec<&Subspace> = lattice.iter().collect();
    for a in &elems {
        let meets: Vec<Subspace> = elems.iter().map(|b| a.intersect_unchecked(b)).collect();
        for (i, b) in elems.iter().enumerate() {
            for (j, c) in elems.iter().enumerate().skip(i + 1) {
                let lhs = a.intersect_unchecked(&b.sum_unchecked(c));
                if lhs != meets[i].sum_unchecked(&meets[j]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Decides whether `subspaces` generate a distributive lattice.
///
/// A distributive lattice of subspaces of a `d`-dimensional space consists
/// of spans of subsets of one basis, so it has at most `2^d` elements; a
/// closure that outgrows this is reported as non-distributive. Closures
/// that exceed `cap` before either outcome is known are an error.
pub fn generates_distributive_lattice(subspaces: &[Subspace], ambient: usize, cap: usize) -> Result<bool> {
    check_ambient(subspaces, ambient)?;
    let boolean_bound = if ambient >= usize::BITS as usize - 1 { usize::MAX } else { 1usize << ambient };
    let limit = boolean_bound.min(cap);
    match closure_bounded(subspaces.iter().cloned(), ambient, limit) {
        Some(lattice) => Ok(is_distributive(&lattice)),
        None if limit == boolean_bound => Ok(false),
        None => Err(Error::ClosureCapExceeded { cap }),
    }
}

/// A basis compatible with a family of filtrations, with the multidegree
/// of each vector: entry `j` is the largest level of filtration `j` that
/// contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub labels: Vec<usize>,
    pub vectors: Vec<Vec<Rational>>,
    pub multidegrees: Vec<Vec<i64>>,
}

impl AdaptedBasis {
    /// For every filtration `j` and level `i`: `E_j(i)` is spanned by the
    /// vectors whose `j`-th degree is at least `i`, and the vectors form a
    /// basis of the whole space.
    pub fn verify(&self, family: &[&Filtration], ambient: usize) -> bool {
        if self.vectors.len() != ambient || linalg::rank(&self.vectors, ambient) != ambient {
            return false;
        }
        family.iter().enumerate().all(|(j, f)| {
            f.jump_levels().all(|level| {
                let rows = self
                    .vectors
                    .iter()
                    .zip(&self.multidegrees)
                    .filter(|(_, deg)| deg[j] >= level)
                    .map(|(v, _)| v.clone())
                    .collect();
                Subspace::from_rows_unchecked(rows, ambient) == f.at(level)
            })
        })
    }
}

/// Searches for a basis adapted to every filtration in `family`.
///
/// For each multidegree `chi` (one candidate level per filtration, visited
/// from the top down) let `W(chi)` be the intersection of the filtration
/// pieces and `W(>chi)` the sum of `W` over the multidegrees one step
/// higher. A complement of `W(>chi)` in `W(chi)` is added to the basis. In
/// the distributive case these complements are the graded pieces and their
/// union is adapted; otherwise the count or the verification fails.
pub fn adapted_basis(family: &[&Filtration], labels: &[usize], ambient: usize) -> Option<AdaptedBasis> {
    assert_eq!(family.len(), labels.len());
    let tops: Vec<Vec<i64>> = family.iter().map(|f| f.jump_levels().map(|l| l - 1).collect()).collect();
    if ambient == 0 {
        return Some(AdaptedBasis { labels: labels.to_vec(), vectors: Vec::new(), multidegrees: Vec::new() });
    }

    let mut pieces: BTreeMap<Vec<usize>, Subspace> = BTreeMap::new();
    let piece = |idx: &[usize], cache: &mut BTreeMap<Vec<usize>, Subspace>| -> Subspace {
        if let Some(s) = cache.get(idx) {
            return s.clone();
        }
        let s = family.iter().zip(idx).zip(&tops).fold(Subspace::full(ambient), |acc, ((f, &i), t)| {
            match t.get(i) {
                Some(&level) => acc.intersect_unchecked(&f.at(level)),
                None => Subspace::zero(ambient),
            }
        });
        cache.insert(idx.to_vec(), s.clone());
        s
    };

    let mut order: Vec<Vec<usize>> = vec![Vec::new()];
    for t in &tops {
        order = order
            .into_iter()
            .flat_map(|prefix| {
                (0..t.len()).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    order.sort_by_key(|idx| core::cmp::Reverse(idx.iter().sum::<usize>()));

    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    for idx in &order {
        let w = piece(idx, &mut pieces);
        if w.is_zero() {
            continue;
        }
        let mut covered = Subspace::zero(ambient);
        for j in 0..idx.len() {
            let mut up = idx.clone();
            up[j] += 1;
            covered = covered.sum_unchecked(&piece(&up, &mut pieces));
        }
        for v in w.basis() {
            if !covered.contains_unchecked(v) {
                covered = covered.sum_unchecked(&Subspace::from_rows_unchecked(vec![v.clone()], ambient));
                vectors.push(v.clone());
            }
        }
        if vectors.len() > ambient {
            return None;
        }
    }

    let multidegrees = vectors
        .iter()
        .map(|v| family.iter().map(|f| f.degree_of(v).expect("basis vectors are nonzero")).collect())
        .collect();
    let basis = AdaptedBasis { labels: labels.to_vec(), vectors, multidegrees };
    basis.verify(family, ambient).then_some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span_ints(&[v], v.len()).unwrap()
    }

    fn two_step(s: Subspace) -> Filtration {
        let n = s.ambient_dim();
        Filtration::new(n, vec![(1, s), (2, Subspace::zero(n))]).unwrap()
    }

    #[test]
    fn closure_examples() {
        let l = lattice_closure(&[line(&[1, 0]), line(&[0, 1])], 2, 100).unwrap();
        assert_eq!(l.len(), 4);
        let l = lattice_closure(&[line(&[1, 0]), line(&[0, 1]), line(&[1, 1])], 2, 100).unwrap();
        assert_eq!(l.len(), 5);
        assert!(!is_distributive(&l));
        let v1 = line(&[1, 0, 0]);
        let v2 = Subspace::span_ints(&[&[1, 0, 0], &[0, 1, 0]], 3).unwrap();
        let l = lattice_closure(&[v1.clone(), v2.clone()], 3, 100).unwrap();
        assert_eq!(l, [v1, v2, Subspace::zero(3), Subspace::full(3)].into_iter().collect());
        assert!(is_distributive(&l));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let gens = [line(&[1, 0]), line(&[0, 1]), line(&[1, 1])];
        assert_eq!(lattice_closure(&gens, 2, 4), Err(Error::ClosureCapExceeded { cap: 4 }));
        assert!(lattice_closure(&gens, 3, 10).is_err());
    }

    #[test]
    fn boolean_bound_decides_generic_lines() {
        // four generic lines in Q^3 generate an infinite lattice
        let gens = [line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[0, 0, 1]), line(&[1, 1, 1])];
        assert_eq!(generates_distributive_lattice(&gens, 3, 4096), Ok(false));
        assert_eq!(generates_distributive_lattice(&gens[..3], 3, 4096), Ok(true));
    }

    #[test]
    fn adapted_basis_for_two_lines() {
        let f = two_step(line(&[1, 0]));
        let g = two_step(line(&[1, 1]));
        let b = adapted_basis(&[&f, &g], &[1, 2], 2).unwrap();
        assert_eq!(b.vectors.len(), 2);
        let mut degs = b.multidegrees.clone();
        degs.sort();
        assert_eq!(degs, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn no_adapted_basis_for_three_lines() {
        let fs = [two_step(line(&[1, 0])), two_step(line(&[0, 1])), two_step(line(&[1, 1]))];
        let family: Vec<&Filtration> = fs.iter().collect();
        assert!(adapted_basis(&family, &[1, 2, 3], 2).is_none());
    }

    #[test]
    fn adapted_basis_for_flag_and_line() {
        let flag = Filtration::new(
            3,
            vec![
                (1, Subspace::span_ints(&[&[1, 0, 0], &[0, 1, 0]], 3).unwrap()),
                (3, line(&[1, 0, 0])),
                (4, Subspace::zero(3)),
            ],
        )
        .unwrap();
        let other = two_step(line(&[0, 1, 1]));
        let b = adapted_basis(&[&flag, &other], &[1, 2], 3).unwrap();
        assert!(b.verify(&[&flag, &other], 3));
    }
}
