//! Chern classes, slopes and slope semistability on Hirzebruch surfaces.
//!
//! The Hirzebruch surface `H_r` is the Bott tower of height 2 with
//! `c_{1,2} = r`; its rays are `e_1, e_2, -e_1 + r e_2, -e_2`. Divisors
//! are paired through the intersection table of the four invariant prime
//! divisors, polarizations are `H = a D_3 + b D_4` with `a, b > 0`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::divisor::{self, InvariantDivisor};
use crate::error::{Error, Result};
use crate::fan::BottMatrix;
use crate::filtration::{self, FiltrationBundle};
use crate::klyachko;
use crate::linalg::Subspace;
use crate::positivity;
use crate::rational::{self, Rational};

/// Intersection numbers `D_i . D_j` on `H_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePairing {
    pub r: i64,
    pub table: [[i64; 4]; 4],
}

impl SurfacePairing {
    pub fn new(r: i64) -> Self {
        let table = [[0, 1, 0, 1], [1, -r, 1, 0], [0, 1, 0, 1], [1, 0, 1, r]];
        SurfacePairing { r, table }
    }

    /// The table read off the wall relations of the fan: `D_i . D_j` is the
    /// coefficient of `D_j` against the curve `D_i`.
    pub fn from_fan(r: i64) -> Result<Self> {
        let c = BottMatrix::hirzebruch(r);
        let mut table = [[0; 4]; 4];
        for (i, row) in table.iter_mut().enumerate() {
            let rel = c.wall_relation(c.wall_from_rays(&[i + 1])?)?;
            for (j, x) in row.iter_mut().enumerate() {
                *x = divisor::intersect_with_relation(&InvariantDivisor::prime(4, j + 1), &rel);
            }
        }
        Ok(SurfacePairing { r, table })
    }

    pub fn matrix(&self) -> BottMatrix {
        BottMatrix::hirzebruch(self.r)
    }

    pub fn pair(&self, d: &InvariantDivisor, e: &InvariantDivisor) -> Result<i64> {
        for x in [d, e] {
            if x.len() != 4 {
                return Err(Error::Input(format!("a divisor on a surface has 4 coefficients, got {}", x.len())));
            }
        }
        Ok((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| d.m[i] * e.m[j] * self.table[i][j]).sum())
    }

    fn check_bundle(&self, e: &FiltrationBundle) -> Result<()> {
        if e.ray_count() != 4 {
            return Err(Error::Input(format!("bundle has {} rays, a Hirzebruch surface has 4", e.ray_count())));
        }
        Ok(())
    }
}

/// The ample class `a D_3 + b D_4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub a: i64,
    pub b: i64,
}

impl Polarization {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::Input(format!("polarization needs a, b > 0, got a = {a}, b = {b}")));
        }
        Ok(Polarization { a, b })
    }

    pub fn divisor(&self) -> InvariantDivisor {
        InvariantDivisor::new(vec![0, 0, self.a, self.b])
    }

    pub fn scale(&self, t: i64) -> Result<Self> {
        Polarization::new(self.a * t, self.b * t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    pub rank: usize,
    pub c1: InvariantDivisor,
    pub c2: i64,
}

impl ChernData {
    pub fn line(d: &InvariantDivisor) -> Self {
        ChernData { rank: 1, c1: d.clone(), c2: 0 }
    }
}

pub fn c1(e: &FiltrationBundle) -> InvariantDivisor {
    e.c1()
}

/// `c1(E) . H`.
pub fn degree(e: &FiltrationBundle, h: Polarization, pairing: &SurfacePairing) -> Result<i64> {
    pairing.check_bundle(e)?;
    pairing.pair(&e.c1(), &h.divisor())
}

/// The same degree from ray weights `D_rho . H = (b, a, b, a + b r)`.
pub fn degree_weighted(e: &FiltrationBundle, h: Polarization, r: i64) -> Result<i64> {
    SurfacePairing::new(r).check_bundle(e)?;
    let weights = [h.b, h.a, h.b, h.a + h.b * r];
    Ok(e.filtrations().iter().zip(weights).map(|(f, w)| w * f.first_chern_coefficient()).sum())
}

pub fn slope(e: &FiltrationBundle, h: Polarization, pairing: &SurfacePairing) -> Result<Rational> {
    if e.rank() == 0 {
        return Err(Error::Unsupported("slope of a rank 0 bundle".into()));
    }
    Ok(Rational::new(degree(e, h, pairing)?.into(), (e.rank() as i64).into()))
}

/// Total Chern class of a direct sum: ranks and `c1` add, and
/// `c2 = sum c2_i + sum_{i<j} c1_i . c1_j`.
pub fn chern_whitney(parts: &[ChernData], pairing: &SurfacePairing) -> Result<ChernData> {
    let mut total = ChernData { rank: 0, c1: InvariantDivisor::zero(4), c2: 0 };
    for p in parts {
        total.c2 += p.c2 + pairing.pair(&total.c1, &p.c1)?;
        total.c1 = total.c1.add(&p.c1);
        total.rank += p.rank;
    }
    Ok(total)
}

/// `E (x) L` for rank-2 `E`: `c1 + 2L`, `c2 + c1 . L + L . L`.
pub fn chern_twist_rank2(cd: &ChernData, l: &InvariantDivisor, pairing: &SurfacePairing) -> Result<ChernData> {
    if cd.rank != 2 {
        return Err(Error::Unsupported(format!("rank 2 twist formula applied to rank {}", cd.rank)));
    }
    Ok(ChernData {
        rank: 2,
        c1: cd.c1.add(&l.scale(2)),
        c2: cd.c2 + pairing.pair(&cd.c1, l)? + pairing.pair(l, l)?,
    })
}

/// `c(T) = prod (1 + D_i)`.
pub fn tangent_chern(pairing: &SurfacePairing) -> ChernData {
    let mut cd = chern_whitney(
        &(1..=4).map(|i| ChernData::line(&InvariantDivisor::prime(4, i))).collect::<Vec<_>>(),
        pairing,
    )
    .expect("prime divisors have 4 coefficients");
    cd.rank = 2;
    cd
}

/// `c2 - (n - 1) / (2n) c1^2` for rank `n`.
pub fn discriminant(cd: &ChernData, pairing: &SurfacePairing) -> Result<Rational> {
    if cd.rank == 0 {
        return Err(Error::Unsupported("discriminant of a rank 0 bundle".into()));
    }
    let n = cd.rank as i64;
    let c1sq = pairing.pair(&cd.c1, &cd.c1)?;
    Ok(rational::int(cd.c2) - Rational::new(((n - 1) * c1sq).into(), (2 * n).into()))
}

/// Chern data where a Whitney-type formula applies: bundles that split
/// into line bundles, and rank-2 twists of the tangent bundle.
pub fn chern_data(e: &FiltrationBundle, pairing: &SurfacePairing, cap: usize) -> Result<ChernData> {
    pairing.check_bundle(e)?;
    let c = pairing.matrix();
    if let Some(basis) = klyachko::splitting(&c, e, cap)? {
        let lines: Vec<ChernData> =
            basis.multidegrees.iter().map(|deg| ChernData::line(&InvariantDivisor::new(deg.clone()))).collect();
        return chern_whitney(&lines, pairing);
    }
    let t = klyachko::tangent_bundle(&c);
    if e.rank() == 2 {
        let diff = e.c1().add(&t.c1().scale(-1));
        if diff.m.iter().all(|x| x % 2 == 0) {
            let l = InvariantDivisor::new(diff.m.iter().map(|x| x / 2).collect());
            if filtration::twist(&t, &l)? == *e {
                return chern_twist_rank2(&tangent_chern(pairing), &l, pairing);
            }
        }
    }
    Err(Error::Unsupported("c2 is only available for split bundles and twists of the tangent bundle".into()))
}

/// A line in the fibre and its degree as a subsheaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub line: Subspace,
    pub degree: i64,
}

fn require_rank2(e: &FiltrationBundle) -> Result<()> {
    if e.rank() != 2 {
        return Err(Error::Unsupported(format!("semistability is decided for rank 2 only, got rank {}", e.rank())));
    }
    Ok(())
}

fn induced_degree(e: &FiltrationBundle, f: &Subspace, h: Polarization, pairing: &SurfacePairing) -> Result<i64> {
    let induced = FiltrationBundle::new(f.dim(), e.filtrations().iter().map(|x| x.restrict_to(f)).collect())?;
    degree(&induced, h, pairing)
}

/// Lines occurring in the filtrations, plus one line that occurs in none
/// of them. The degree of a line only depends on which filtration lines it
/// equals, so the last candidate stands for every other line.
pub fn destabilizing_candidates(
    e: &FiltrationBundle,
    h: Polarization,
    pairing: &SurfacePairing,
) -> Result<Vec<Candidate>> {
    require_rank2(e)?;
    pairing.check_bundle(e)?;
    let lines: BTreeSet<Subspace> = klyachko::all_subspaces(e).into_iter().filter(|s| s.dim() == 1).collect();
    let generic = (1..)
        .map(|t| Subspace::span_ints(&[&[1, t]], 2).expect("length 2"))
        .find(|l| !lines.contains(l))
        .expect("finitely many lines are excluded");
    let mut ordered: Vec<Subspace> = lines.into_iter().collect();
    ordered.push(generic);
    ordered
        .into_iter()
        .map(|line| Ok(Candidate { degree: induced_degree(e, &line, h, pairing)?, line }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semistability {
    pub semistable: bool,
    pub slope: Rational,
    pub max_destabilizer: Candidate,
    pub candidates: Vec<Candidate>,
}

/// Semistable iff no line has degree above `mu(E)`; equality is allowed.
pub fn is_semistable_rank2(e: &FiltrationBundle, h: Polarization, pairing: &SurfacePairing) -> Result<Semistability> {
    let candidates = destabilizing_candidates(e, h, pairing)?;
    let slope = slope(e, h, pairing)?;
    let max = candidates.iter().max_by_key(|c| c.degree).expect("the generic line is always present").clone();
    Ok(Semistability { semistable: rational::int(max.degree) <= slope, slope, max_destabilizer: max, candidates })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsheafSlope {
    pub sub_slope: Rational,
    pub slope: Rational,
    /// `mu(F) <= mu(E)`.
    pub holds: bool,
}

/// Compares the slope of the subsheaf with fibre `f` and filtrations
/// `E^rho(i) ∩ f` against the slope of `E`, for any rank.
pub fn subsheaf_slope(
    e: &FiltrationBundle,
    f: &Subspace,
    h: Polarization,
    pairing: &SurfacePairing,
) -> Result<SubsheafSlope> {
    if f.ambient_dim() != e.rank() || f.is_zero() || f.is_full() {
        return Err(Error::Input("the subspace must be a proper nonzero subspace of the fibre".into()));
    }
    let sub_slope = Rational::new(induced_degree(e, f, h, pairing)?.into(), (f.dim() as i64).into());
    let slope = slope(e, h, pairing)?;
    Ok(SubsheafSlope { holds: sub_slope <= slope, sub_slope, slope })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub semistable: bool,
    pub discriminant_zero: bool,
}

/// Checks both hypotheses for a rank-2 bundle on `H_r`.
pub fn verify_hypotheses(
    e: &FiltrationBundle,
    h: Polarization,
    pairing: &SurfacePairing,
    cap: usize,
) -> Result<Hypotheses> {
    let semistable = is_semistable_rank2(e, h, pairing)?.semistable;
    let delta = discriminant(&chern_data(e, pairing, cap)?, pairing)?;
    Ok(Hypotheses { semistable, discriminant_zero: delta == rational::zero() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundlePositivity {
    pub ample: bool,
    pub nef: bool,
}

/// For a semistable bundle with vanishing discriminant, ampleness and
/// nefness are read off `det E = c1(E)`.
pub fn positivity_from_determinant(
    c: &BottMatrix,
    e: &FiltrationBundle,
    hypotheses: Hypotheses,
) -> Result<BundlePositivity> {
    if !hypotheses.semistable {
        return Err(Error::HypothesisNotMet("the bundle is not semistable".into()));
    }
    if !hypotheses.discriminant_zero {
        return Err(Error::HypothesisNotMet("the discriminant is not zero".into()));
    }
    let det = divisor::reduce(c, &e.c1())?;
    Ok(BundlePositivity { ample: positivity::is_ample(c, &det)?, nef: positivity::is_nef(c, &det)? })
}
