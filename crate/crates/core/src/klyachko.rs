//! Equivariant vector bundles on Bott towers through their filtrations:
//! compatibility on cones, splitting, tangent bundles, subbundles and
//! quotients, and the sign normalization of a Bott matrix column.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::divisor::{self, InvariantDivisor};
use crate::error::{Error, Result};
use crate::fan::{BottMatrix, MaximalCone};
use crate::filtration::{self, Filtration, FiltrationBundle};
use crate::lattice::{self, AdaptedBasis};
use crate::linalg::Subspace;

fn check_fan(c: &BottMatrix, e: &FiltrationBundle) -> Result<()> {
    if e.ray_count() != c.ray_count() {
        return Err(Error::Input(format!(
            "bundle has filtrations on {} rays, the fan has {}",
            e.ray_count(),
            c.ray_count()
        )));
    }
    Ok(())
}

/// `E(i)` is the whole space for `i <= 0`, `s` at `1`, zero from `2` on.
fn two_step(s: &Subspace) -> Filtration {
    let n = s.ambient_dim();
    Filtration::from_levels(n, [1, 2].into_iter().collect(), |i| if i == 1 { s.clone() } else { Subspace::zero(n) })
}

/// Runs both deciders on a family of filtrations, with an optional extra
/// subspace that must also be spanned by part of the adapted basis.
fn decide(
    family: &[&Filtration],
    labels: &[usize],
    extra: Option<&Subspace>,
    ambient: usize,
    cap: usize,
    context: &dyn Fn() -> alloc::string::String,
) -> Result<Option<AdaptedBasis>> {
    let mut subspaces: Vec<Subspace> = family.iter().flat_map(|f| f.subspaces()).collect();
    let extra_filtration = extra.map(two_step);
    let mut members: Vec<&Filtration> = family.to_vec();
    let mut member_labels = labels.to_vec();
    if let (Some(s), Some(f)) = (extra, &extra_filtration) {
        subspaces.push(s.clone());
        members.push(f);
        member_labels.push(0);
    }
    let distributive = lattice::generates_distributive_lattice(&subspaces, ambient, cap)?;
    let basis = lattice::adapted_basis(&members, &member_labels, ambient);
    if distributive != basis.is_some() {
        return Err(Error::DeciderDisagreement(format!(
            "{}: lattice test says {distributive}, adapted basis {}",
            context(),
            if basis.is_some() { "found" } else { "not found" }
        )));
    }
    Ok(basis)
}

/// Outcome of the per-cone compatibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    /// Adapted basis of each maximal cone checked, in cone order.
    pub bases: Vec<(MaximalCone, AdaptedBasis)>,
    /// First cone without an adapted basis, if any.
    pub failing_cone: Option<MaximalCone>,
}

impl Compatibility {
    pub fn holds(&self) -> bool {
        self.failing_cone.is_none()
    }
}

/// Checks that on every maximal cone the filtrations of its rays admit a
/// common adapted basis.
pub fn compatibility(c: &BottMatrix, e: &FiltrationBundle, cap: usize) -> Result<Compatibility> {
    check_fan(c, e)?;
    let k = c.height();
    let mut bases = Vec::new();
    for cone in c.maximal_cones() {
        let rays: Vec<usize> = cone.ray_indices(k).collect();
        let family: Vec<&Filtration> = rays.iter().map(|&r| e.filtration(r)).collect();
        let context = || format!("cone {:#b}", cone.selection);
        match decide(&family, &rays, None, e.rank(), cap, &context)? {
            Some(b) => bases.push((cone, b)),
            None => return Ok(Compatibility { bases, failing_cone: Some(cone) }),
        }
    }
    Ok(Compatibility { bases, failing_cone: None })
}

pub fn is_compatible(c: &BottMatrix, e: &FiltrationBundle, cap: usize) -> Result<bool> {
    compatibility(c, e, cap).map(|r| r.holds())
}

/// A basis adapted to all filtrations at once, if the bundle splits
/// equivariantly into line bundles.
pub fn splitting(c: &BottMatrix, e: &FiltrationBundle, cap: usize) -> Result<Option<AdaptedBasis>> {
    check_fan(c, e)?;
    let rays: Vec<usize> = (1..=c.ray_count()).collect();
    let family: Vec<&Filtration> = e.filtrations().iter().collect();
    decide(&family, &rays, None, e.rank(), cap, &|| "all rays".into())
}

pub fn is_split(c: &BottMatrix, e: &FiltrationBundle, cap: usize) -> Result<bool> {
    splitting(c, e, cap).map(|b| b.is_some())
}

/// Tangent bundle: on ray `rho` the whole space up to level 0, the line
/// through `v_rho` at level 1, zero above.
pub fn tangent_bundle(c: &BottMatrix) -> FiltrationBundle {
    let k = c.height();
    let filtrations = c
        .rays()
        .iter()
        .map(|ray| two_step(&Subspace::span_ints(&[&ray.vector], k).expect("ray has length k")))
        .collect();
    FiltrationBundle::new(k, filtrations).expect("filtrations live in dimension k")
}

/// For every maximal cone, each ray outside it is the negative of a ray
/// of the cone.
pub fn tangent_splits_geometric(c: &BottMatrix) -> bool {
    let k = c.height();
    let rays: Vec<Vec<i64>> = c.rays().into_iter().map(|r| r.vector).collect();
    c.maximal_cones().all(|cone| {
        let inside: Vec<usize> = cone.ray_indices(k).collect();
        (1..=2 * k).filter(|r| !inside.contains(r)).all(|r| {
            inside.iter().any(|&s| rays[s - 1].iter().zip(&rays[r - 1]).all(|(a, b)| *a == -*b))
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbundleCheck {
    pub is_subbundle: bool,
    /// `E^rho(i) ∩ F` in the coordinates of the reduced basis of `F`.
    pub induced: FiltrationBundle,
}

/// Whether `f0` carries an equivariant subbundle: on every cone an adapted
/// basis of `E` must contain a basis of `f0`.
pub fn subbundle_check(c: &BottMatrix, e: &FiltrationBundle, f0: &Subspace, cap: usize) -> Result<SubbundleCheck> {
    check_fan(c, e)?;
    if f0.ambient_dim() != e.rank() {
        return Err(Error::Input(format!(
            "subspace of dimension {} in a bundle of rank {}",
            f0.ambient_dim(),
            e.rank()
        )));
    }
    let induced = FiltrationBundle::new(f0.dim(), e.filtrations().iter().map(|f| f.restrict_to(f0)).collect())?;
    let k = c.height();
    let extra = (!f0.is_zero() && !f0.is_full()).then_some(f0);
    let mut is_subbundle = true;
    for cone in c.maximal_cones() {
        let rays: Vec<usize> = cone.ray_indices(k).collect();
        let family: Vec<&Filtration> = rays.iter().map(|&r| e.filtration(r)).collect();
        let context = || format!("cone {:#b} with subspace", cone.selection);
        if decide(&family, &rays, extra, e.rank(), cap, &context)?.is_none() {
            is_subbundle = false;
            break;
        }
    }
    Ok(SubbundleCheck { is_subbundle, induced })
}

/// `E / F` with filtrations `E^rho(i) / F^rho(i)`, written in the
/// complement spanned by the unit vectors off the pivots of `f0`.
pub fn quotient(c: &BottMatrix, e: &FiltrationBundle, f0: &Subspace, cap: usize) -> Result<FiltrationBundle> {
    if !subbundle_check(c, e, f0, cap)?.is_subbundle {
        return Err(Error::NotASubbundle);
    }
    FiltrationBundle::new(e.rank() - f0.dim(), e.filtrations().iter().map(|f| f.quotient_by(f0)).collect())
}

/// One step of sign normalization on the last column of a Bott matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationStep {
    /// The input with its last column replaced by absolute values.
    pub normalized: BottMatrix,
    /// `(O + xi) (x) L` and `O + eta` have the same jumps on every ray.
    pub identity_holds: bool,
    /// The two sides agree as sums of line-bundle classes.
    pub isomorphic: bool,
    pub lhs: FiltrationBundle,
    pub rhs: FiltrationBundle,
}

/// Compares `(O + xi) (x) L` with `O + eta` on the tower of height `k - 1`,
/// where `xi` jumps at `c_{i,k}`, `eta` at `|c_{i,k}|` and `L` at
/// `-c_{i,k}` where that is positive, all on the rays `v_{k-1+i}`.
pub fn normalization_step(c: &BottMatrix) -> Result<NormalizationStep> {
    let k = c.height();
    let column: Vec<i64> = (1..k).map(|i| c.entry(i, k)).collect();
    let normalized = BottMatrix::from_upper(k, |i, j| if j == k { c.entry(i, j).abs() } else { c.entry(i, j) })?;
    let on_upper_rays = |f: &dyn Fn(i64) -> i64| {
        let mut m = alloc::vec![0; k - 1];
        m.extend(column.iter().map(|&x| f(x)));
        InvariantDivisor::new(m)
    };
    let xi = on_upper_rays(&|x| x);
    let eta = on_upper_rays(&|x| x.abs());
    let l = on_upper_rays(&|x| if x < 0 { -x } else { 0 });
    let rays = 2 * (k - 1);
    let trivial = filtration::trivial_bundle(rays, 1);
    let lhs = filtration::tensor(
        &filtration::direct_sum(&trivial, &filtration::line_bundle(&xi))?,
        &filtration::line_bundle(&l),
    )?;
    let rhs = filtration::direct_sum(&trivial, &filtration::line_bundle(&eta))?;
    let sorted = |f: &Filtration| {
        let mut d = f.degrees();
        d.sort_unstable();
        d
    };
    let identity_holds = lhs.filtrations().iter().zip(rhs.filtrations()).all(|(a, b)| sorted(a) == sorted(b));
    let isomorphic = if k == 1 {
        true
    } else {
        let base = c.leading(k - 1)?;
        let class = |d: &InvariantDivisor| divisor::reduce(&base, d).map(|r| r.a);
        let mut left = [class(&l)?, class(&xi.add(&l))?];
        let mut right = [class(&InvariantDivisor::zero(rays))?, class(&eta)?];
        left.sort();
        right.sort();
        left == right
    };
    Ok(NormalizationStep { normalized, identity_holds, isomorphic, lhs, rhs })
}

/// Applies [`normalization_step`] to the leading blocks of heights
/// `2..=k` in turn. Each step changes coordinates on the tower above it, so
/// the result is the entrywise absolute value of `c`.
pub fn normalize(c: &BottMatrix) -> Result<BottMatrix> {
    let k = c.height();
    let mut rows = c.rows();
    for j in 2..=k {
        let step = normalization_step(&BottMatrix::from_rows(&leading_rows(&rows, j))?)?;
        for (i, row) in rows.iter_mut().enumerate().take(j - 1) {
            row[j - 1] = step.normalized.entry(i + 1, j);
        }
    }
    BottMatrix::from_rows(&rows)
}

fn leading_rows(rows: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    rows[..m].iter().map(|r| r[..m].to_vec()).collect()
}

/// Distinct subspaces appearing in the filtrations of `e`.
pub fn all_subspaces(e: &FiltrationBundle) -> BTreeSet<Subspace> {
    e.filtrations().iter().flat_map(|f| f.subspaces()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CLOSURE_CAP as CAP;
    use alloc::vec;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span_ints(&[v], v.len()).unwrap()
    }

    #[test]
    fn tangent_of_p1_is_o2() {
        let c = BottMatrix::identity(1).unwrap();
        let t = tangent_bundle(&c);
        assert_eq!(t.rank(), 1);
        assert_eq!(t.c1().m, vec![1, 1]);
    }

    #[test]
    fn tangent_on_hirzebruch() {
        let c = BottMatrix::hirzebruch(3);
        let t = tangent_bundle(&c);
        assert_eq!(t.filtration(3).at(1), line(&[-1, 3]));
        assert_eq!(t.c1().m, vec![1; 4]);
        assert!(is_compatible(&c, &t, CAP).unwrap());
    }

    #[test]
    fn three_lines_on_one_cone_are_incompatible() {
        let c = BottMatrix::identity(3).unwrap();
        let mut fs = vec![Filtration::trivial(2); 6];
        fs[0] = two_step(&line(&[1, 0]));
        fs[1] = two_step(&line(&[0, 1]));
        fs[2] = two_step(&line(&[1, 1]));
        let e = FiltrationBundle::new(2, fs).unwrap();
        let report = compatibility(&c, &e, CAP).unwrap();
        assert_eq!(report.failing_cone, Some(MaximalCone { selection: 0 }));
    }

    #[test]
    fn splitting_of_tangent_bundles() {
        let square = BottMatrix::identity(2).unwrap();
        assert!(is_split(&square, &tangent_bundle(&square), CAP).unwrap());
        let h1 = BottMatrix::hirzebruch(1);
        assert!(!is_split(&h1, &tangent_bundle(&h1), CAP).unwrap());
        assert!(tangent_splits_geometric(&BottMatrix::identity(3).unwrap()));
        assert!(!tangent_splits_geometric(&BottMatrix::hirzebruch(2)));
        let c = BottMatrix::from_upper(3, |i, j| i64::from((i, j) == (2, 3))).unwrap();
        assert!(!tangent_splits_geometric(&c));
    }

    #[test]
    fn line_bundles_split() {
        let c = BottMatrix::hirzebruch(2);
        let l = filtration::line_bundle(&InvariantDivisor::new(vec![1, -2, 0, 3]));
        assert!(is_split(&c, &l, CAP).unwrap());
        assert!(is_compatible(&c, &l, CAP).unwrap());
    }

    #[test]
    fn coordinate_line_in_hirzebruch_tangent() {
        let c = BottMatrix::hirzebruch(2);
        let t = tangent_bundle(&c);
        let f0 = line(&[0, 1]);
        let check = subbundle_check(&c, &t, &f0, CAP).unwrap();
        assert!(check.is_subbundle);
        assert_eq!(check.induced.c1().m, vec![0, 1, 0, 1]);
        let q = quotient(&c, &t, &f0, CAP).unwrap();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.c1().m, vec![1, 0, 1, 0]);
    }

    #[test]
    fn generic_line_is_not_a_subbundle() {
        let c = BottMatrix::hirzebruch(1);
        let t = tangent_bundle(&c);
        let f0 = line(&[1, 1]);
        let check = subbundle_check(&c, &t, &f0, CAP).unwrap();
        assert!(!check.is_subbundle);
        assert_eq!(check.induced.c1().m, vec![0; 4]);
        assert_eq!(quotient(&c, &t, &f0, CAP), Err(Error::NotASubbundle));
    }

    #[test]
    fn quotient_by_everything_and_nothing() {
        let c = BottMatrix::hirzebruch(1);
        let t = tangent_bundle(&c);
        assert_eq!(quotient(&c, &t, &Subspace::full(2), CAP).unwrap().rank(), 0);
        assert_eq!(quotient(&c, &t, &Subspace::zero(2), CAP).unwrap(), t);
        let full = subbundle_check(&c, &t, &Subspace::full(2), CAP).unwrap();
        assert!(full.is_subbundle);
        assert_eq!(full.induced, t);
    }

    #[test]
    fn normalization_of_a_negative_column() {
        let c = BottMatrix::hirzebruch(-2);
        let step = normalization_step(&c).unwrap();
        assert!(step.identity_holds);
        assert!(step.isomorphic);
        assert_eq!(step.normalized, BottMatrix::hirzebruch(2));
        let mut jumps = step.lhs.filtration(2).degrees();
        jumps.sort();
        assert_eq!(jumps, vec![0, 2]);

        let c = BottMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, 3], vec![0, 0, 1]]).unwrap();
        let step = normalization_step(&c).unwrap();
        assert!(step.identity_holds);
        assert_eq!(step.normalized.entry(1, 3), 1);
        assert_eq!(step.normalized.entry(2, 3), 3);
    }

    #[test]
    fn mixed_signs_satisfy_the_identity_but_not_isomorphism() {
        let c = BottMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let step = normalization_step(&c).unwrap();
        assert!(step.identity_holds);
        assert!(!step.isomorphic);
    }

    #[test]
    fn normalize_takes_absolute_values() {
        let c = BottMatrix::from_rows(&[vec![1, -2, 1], vec![0, 1, -3], vec![0, 0, 1]]).unwrap();
        let n = normalize(&c).unwrap();
        assert_eq!(n.rows(), vec![vec![1, 2, 1], vec![0, 1, 3], vec![0, 0, 1]]);
    }
}
