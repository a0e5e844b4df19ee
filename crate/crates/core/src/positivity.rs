//! Positivity of line bundles on Bott towers.
//!
//! For a non-negative Bott matrix the divisor `sum a_i D_{k+i}` is `s`-jet
//! ample exactly when every `a_i >= s`, nef when every `a_i >= 0`, and nef
//! and big under the condition checked by [`is_nef_and_big`]. Each closed
//! form has an oracle that works from the fan alone: the minimum of
//! `D . C` over invariant curves, and the dimension of the divisor
//! polytope.

use alloc::string::String;
use alloc::vec::Vec;

use crate::divisor::{self, InvariantDivisor, ReducedDivisor};
use crate::error::{Error, Result};
use crate::fan::{BottMatrix, WallRelation};
use crate::klyachko;

fn require_nonneg(c: &BottMatrix) -> Result<()> {
    if c.is_nonneg() {
        Ok(())
    } else {
        Err(Error::RequiresNonnegMatrix)
    }
}

fn checked<'a>(c: &BottMatrix, a: &'a ReducedDivisor) -> Result<&'a [i64]> {
    require_nonneg(c)?;
    if a.a.len() != c.height() {
        return Err(Error::Input(alloc::format!(
            "reduced divisor has {} coefficients, the tower has height {}",
            a.a.len(),
            c.height()
        )));
    }
    Ok(&a.a)
}

/// Largest `s` such that the divisor is `s`-jet ample: `min a_i`, or `-1`
/// when the divisor is not globally generated.
pub fn sjet_closed(c: &BottMatrix, a: &ReducedDivisor) -> Result<i64> {
    let a = checked(c, a)?;
    let min = a.iter().copied().min().expect("height is at least 1");
    Ok(min.max(-1))
}

pub fn is_ample(c: &BottMatrix, a: &ReducedDivisor) -> Result<bool> {
    Ok(checked(c, a)?.iter().all(|&x| x > 0))
}

pub fn is_nef(c: &BottMatrix, a: &ReducedDivisor) -> Result<bool> {
    Ok(checked(c, a)?.iter().all(|&x| x >= 0))
}

/// `a_k > 0`, every `a_i >= 0`, and each `i < k` with `a_i = 0` has some
/// `c_{i,j} != 0` with `j > i`.
pub fn is_nef_and_big(c: &BottMatrix, a: &ReducedDivisor) -> Result<bool> {
    let a = checked(c, a)?;
    let k = c.height();
    Ok(a[k - 1] > 0
        && a.iter().all(|&x| x >= 0)
        && (1..k).all(|i| a[i - 1] != 0 || (i + 1..=k).any(|j| c.entry(i, j) != 0)))
}

/// Minimum of `D . V(tau)` over all walls. Works for any Bott matrix.
pub fn sjet_oracle(c: &BottMatrix, d: &InvariantDivisor) -> Result<i64> {
    d.check(c)?;
    Ok(sjet_oracle_with(&c.wall_relations(), d))
}

/// [`sjet_oracle`] with the wall relations computed once by the caller.
pub fn sjet_oracle_with(relations: &[WallRelation], d: &InvariantDivisor) -> i64 {
    relations
        .iter()
        .map(|rel| divisor::intersect_with_relation(d, rel))
        .min()
        .expect("a tower has at least one wall")
}

/// Minimum over all walls of the closed-form curve intersection. Exact
/// for any Bott matrix.
pub fn min_intersection_closed(c: &BottMatrix, a: &ReducedDivisor) -> Result<i64> {
    let mut min = i64::MAX;
    for w in c.walls() {
        min = min.min(divisor::curve_intersection_closed(c, a, w)?.value);
    }
    Ok(min)
}

/// Bigness of a nef divisor: its polytope is full-dimensional.
pub fn big_oracle(c: &BottMatrix, d: &InvariantDivisor) -> Result<bool> {
    if sjet_oracle(c, d)? < 0 {
        return Err(Error::NotNef);
    }
    is_big_polytope(c, d)
}

/// Whether the polytope of `D` is full-dimensional. On a complete toric
/// variety this is bigness for every divisor, nef or not.
pub fn is_big_polytope(c: &BottMatrix, d: &InvariantDivisor) -> Result<bool> {
    let p = divisor::polytope(c, d)?;
    Ok(divisor::polytope_dim(&p) == c.height() as i32)
}

/// Every row sum `sum_{j > i} c_{i,j}` is at most 1.
pub fn is_fano(c: &BottMatrix) -> Result<bool> {
    require_nonneg(c)?;
    Ok((1..=c.height()).all(|i| c.row_sum(i) <= 1))
}

/// Every row sum is at most 2.
pub fn is_weak_fano(c: &BottMatrix) -> Result<bool> {
    require_nonneg(c)?;
    Ok((1..=c.height()).all(|i| c.row_sum(i) <= 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subtraction {
    pub ample: bool,
    pub nef: bool,
}

fn subtraction_args(c: &BottMatrix, a: &ReducedDivisor, j: usize, j_prime: Option<usize>) -> Result<()> {
    if !is_ample(c, a)? {
        return Err(Error::Input("the divisor must be ample".into()));
    }
    let n = c.ray_count();
    let bad = j == 0 || j > n || j_prime.is_some_and(|jp| jp <= j || jp > n);
    if bad {
        return Err(Error::Input(alloc::format!("need 1 <= j < j' <= {n}")));
    }
    Ok(())
}

/// Case analysis for `D - D_j` and `D - D_j - D_j'` on an ample `D`, read
/// only from the coefficient attached to each index: `b_l = a_l` for
/// `l <= k` and `a_{l-k}` otherwise.
///
/// The double-subtraction ample rule ignores the contribution of `c_{i,j}`
/// to the other coefficients when a prime divisor `D_j` with `j <= k` is
/// rewritten in the Picard basis, so it can call an ample divisor
/// non-ample; [`subtraction_direct`] is the exact answer.
pub fn mustata_check(c: &BottMatrix, a: &ReducedDivisor, j: usize, j_prime: Option<usize>) -> Result<Subtraction> {
    subtraction_args(c, a, j, j_prime)?;
    let k = c.height();
    let b = |l: usize| if l <= k { a.a[l - 1] } else { a.a[l - k - 1] };
    Ok(match j_prime {
        None => Subtraction { ample: b(j) > 1, nef: true },
        Some(jp) if jp == k + j => Subtraction { ample: a.a[j - 1] > 2, nef: a.a[j - 1] != 1 },
        Some(jp) => Subtraction { ample: b(j) > 1 && b(jp) > 1, nef: true },
    })
}

/// Positivity of `D - D_j (- D_j')` from its reduction.
pub fn subtraction_direct(c: &BottMatrix, a: &ReducedDivisor, j: usize, j_prime: Option<usize>) -> Result<Subtraction> {
    subtraction_args(c, a, j, j_prime)?;
    let n = c.ray_count();
    let mut d = a.embed().add(&InvariantDivisor::prime(n, j).scale(-1));
    if let Some(jp) = j_prime {
        d = d.add(&InvariantDivisor::prime(n, jp).scale(-1));
    }
    let r = divisor::reduce(c, &d)?;
    Ok(Subtraction { ample: is_ample(c, &r)?, nef: is_nef(c, &r)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    ClosedForm,
    Oracle,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    /// Largest `s` with the divisor `s`-jet ample; `-1` if not globally generated.
    pub s_jet_level: i64,
    pub ample: bool,
    pub nef: bool,
    /// Unknown when only the closed forms ran on a divisor that is not nef.
    pub big: Option<bool>,
    pub nef_and_big: bool,
    pub via: Via,
    pub warnings: Vec<String>,
}

fn closed_report(c: &BottMatrix, a: &ReducedDivisor) -> Result<PositivityReport> {
    let nef = is_nef(c, a)?;
    let nef_and_big = is_nef_and_big(c, a)?;
    Ok(PositivityReport {
        s_jet_level: sjet_closed(c, a)?,
        ample: is_ample(c, a)?,
        nef,
        big: nef.then_some(nef_and_big),
        nef_and_big,
        via: Via::ClosedForm,
        warnings: Vec::new(),
    })
}

fn oracle_report(c: &BottMatrix, d: &InvariantDivisor) -> Result<PositivityReport> {
    let s = sjet_oracle(c, d)?.max(-1);
    let big = is_big_polytope(c, d)?;
    Ok(PositivityReport {
        s_jet_level: s,
        ample: s >= 1,
        nef: s >= 0,
        big: Some(big),
        nef_and_big: s >= 0 && big,
        via: Via::Oracle,
        warnings: Vec::new(),
    })
}

/// Positivity of `d` by the closed forms, by the oracles, or by both with
/// a cross-check. Without the oracle a matrix with negative entries is
/// refused; with it the criteria on `a` are skipped, only the curve
/// intersection recursion is checked against the wall relations, and a
/// warning is recorded.
pub fn classify_divisor(c: &BottMatrix, d: &InvariantDivisor, oracle: bool) -> Result<PositivityReport> {
    d.check(c)?;
    if !oracle {
        return closed_report(c, &divisor::reduce(c, d)?);
    }
    let mut from_oracle = oracle_report(c, d)?;
    if !c.is_nonneg() {
        let closed = min_intersection_closed(c, &divisor::reduce(c, d)?)?;
        let oracle = sjet_oracle(c, d)?;
        if closed != oracle {
            return Err(Error::DeciderDisagreement(alloc::format!(
                "minimal curve intersection: recursion gives {closed}, wall relations give {oracle}"
            )));
        }
        from_oracle.warnings.push("closed forms skipped: the matrix has negative entries".into());
        return Ok(from_oracle);
    }
    let closed = closed_report(c, &divisor::reduce(c, d)?)?;
    let agree = closed.s_jet_level == from_oracle.s_jet_level
        && closed.ample == from_oracle.ample
        && closed.nef == from_oracle.nef
        && closed.nef_and_big == from_oracle.nef_and_big
        && closed.big.is_none_or(|b| Some(b) == from_oracle.big);
    if !agree {
        return Err(Error::DeciderDisagreement(alloc::format!(
            "closed form {closed:?} against oracle {from_oracle:?}"
        )));
    }
    Ok(PositivityReport { big: from_oracle.big, via: Via::Both, ..closed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyReport {
    pub fano: bool,
    pub weak_fano: bool,
    pub tangent_splits: bool,
    pub anticanonical: ReducedDivisor,
    pub sjet_of_minus_k: i64,
}

pub fn classify_variety(c: &BottMatrix) -> Result<VarietyReport> {
    let anticanonical = divisor::anticanonical(c);
    let sjet_of_minus_k = sjet_closed(c, &anticanonical)?;
    assert!(sjet_of_minus_k <= 2 && ((sjet_of_minus_k == 2) == c.is_identity()));
    Ok(VarietyReport {
        fano: is_fano(c)?,
        weak_fano: is_weak_fano(c)?,
        tangent_splits: klyachko::tangent_splits_geometric(c),
        anticanonical,
        sjet_of_minus_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn red(a: &[i64]) -> ReducedDivisor {
        ReducedDivisor::new(a.to_vec())
    }

    fn k3(c12: i64, c13: i64, c23: i64) -> BottMatrix {
        BottMatrix::from_upper(3, |i, j| match (i, j) {
            (1, 2) => c12,
            (1, 3) => c13,
            _ => c23,
        })
        .unwrap()
    }

    #[test]
    fn jet_levels() {
        let h1 = BottMatrix::hirzebruch(1);
        assert_eq!(sjet_closed(&h1, &red(&[2, 2])), Ok(2));
        assert_eq!(sjet_closed(&h1, &red(&[0, 0])), Ok(0));
        assert_eq!(sjet_closed(&h1, &red(&[-4, 3])), Ok(-1));
        assert_eq!(sjet_closed(&k3(1, 0, 2), &red(&[3, 1, 2])), Ok(1));
        assert_eq!(sjet_closed(&BottMatrix::hirzebruch(-1), &red(&[1, 1])), Err(Error::RequiresNonnegMatrix));
    }

    #[test]
    fn oracle_jet_levels() {
        let h1 = BottMatrix::hirzebruch(1);
        assert_eq!(sjet_oracle(&h1, &red(&[2, 2]).embed()), Ok(2));
        assert_eq!(sjet_oracle(&h1, &InvariantDivisor::prime(4, 3)), Ok(0));
        let h2 = BottMatrix::hirzebruch(2);
        assert_eq!(sjet_oracle(&h2, &InvariantDivisor::anticanonical(4)), Ok(0));
    }

    #[test]
    fn ample_nef_big() {
        let h1 = BottMatrix::hirzebruch(1);
        assert!(is_ample(&h1, &red(&[1, 1])).unwrap());
        assert!(!is_ample(&h1, &red(&[0, 1])).unwrap());
        assert!(is_nef(&h1, &red(&[0, 1])).unwrap());
        assert!(!is_nef(&h1, &red(&[-1, 1])).unwrap());
        assert!(is_nef_and_big(&h1, &red(&[0, 1])).unwrap());
        let square = BottMatrix::identity(2).unwrap();
        assert!(!is_nef_and_big(&square, &red(&[0, 1])).unwrap());
        assert!(!is_nef_and_big(&h1, &red(&[1, 0])).unwrap());
    }

    #[test]
    fn polytope_bigness() {
        let h1 = BottMatrix::hirzebruch(1);
        assert_eq!(big_oracle(&h1, &red(&[0, 1]).embed()), Ok(true));
        assert_eq!(big_oracle(&h1, &red(&[1, 0]).embed()), Ok(false));
        assert_eq!(big_oracle(&BottMatrix::identity(2).unwrap(), &red(&[1, 1]).embed()), Ok(true));
        assert_eq!(big_oracle(&h1, &red(&[-1, 1]).embed()), Err(Error::NotNef));
    }

    #[test]
    fn fano_conditions() {
        assert!(is_fano(&BottMatrix::identity(3).unwrap()).unwrap());
        let h2 = BottMatrix::hirzebruch(2);
        assert!(!is_fano(&h2).unwrap());
        assert!(is_weak_fano(&h2).unwrap());
        let c = k3(1, 1, 1);
        assert!(!is_fano(&c).unwrap());
        assert!(is_weak_fano(&c).unwrap());
    }

    #[test]
    fn subtraction_rules() {
        let h1 = BottMatrix::hirzebruch(1);
        assert!(mustata_check(&h1, &red(&[2, 2]), 1, None).unwrap().ample);
        let s = mustata_check(&h1, &red(&[1, 2]), 1, Some(3)).unwrap();
        assert!(!s.nef);
        assert_eq!(subtraction_direct(&h1, &red(&[1, 2]), 1, Some(3)).unwrap(), s);
        let s = mustata_check(&h1, &red(&[2, 2]), 1, Some(2)).unwrap();
        assert!(s.ample);
        assert_eq!(subtraction_direct(&h1, &red(&[2, 2]), 1, Some(2)).unwrap(), s);
    }

    #[test]
    fn subtraction_rule_misses_the_correction_terms() {
        // D - D_1 - D_2 reduces to a = (1, 1), which is ample
        let h1 = BottMatrix::hirzebruch(1);
        assert!(!mustata_check(&h1, &red(&[1, 2]), 1, Some(2)).unwrap().ample);
        assert!(subtraction_direct(&h1, &red(&[1, 2]), 1, Some(2)).unwrap().ample);
    }

    #[test]
    fn subtraction_needs_an_ample_divisor() {
        let h1 = BottMatrix::hirzebruch(1);
        assert!(matches!(mustata_check(&h1, &red(&[0, 2]), 1, None), Err(Error::Input(_))));
        assert!(matches!(mustata_check(&h1, &red(&[2, 2]), 2, Some(2)), Err(Error::Input(_))));
    }

    #[test]
    fn divisor_reports() {
        let h1 = BottMatrix::hirzebruch(1);
        let r = classify_divisor(&h1, &red(&[0, 1]).embed(), true).unwrap();
        assert_eq!(r.via, Via::Both);
        assert!(r.nef && r.nef_and_big && !r.ample);
        let r = classify_divisor(&h1, &red(&[-1, 1]).embed(), false).unwrap();
        assert_eq!(r.big, None);
        let neg = BottMatrix::hirzebruch(-1);
        assert_eq!(classify_divisor(&neg, &InvariantDivisor::zero(4), false), Err(Error::RequiresNonnegMatrix));
        let r = classify_divisor(&neg, &InvariantDivisor::anticanonical(4), true).unwrap();
        assert_eq!(r.via, Via::Oracle);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn variety_reports() {
        let r = classify_variety(&BottMatrix::identity(2).unwrap()).unwrap();
        assert!(r.fano && r.weak_fano && r.tangent_splits);
        assert_eq!((r.anticanonical.a.clone(), r.sjet_of_minus_k), (vec![2, 2], 2));
        let r = classify_variety(&BottMatrix::hirzebruch(1)).unwrap();
        assert!(r.fano && r.weak_fano && !r.tangent_splits);
        assert_eq!((r.anticanonical.a.clone(), r.sjet_of_minus_k), (vec![1, 2], 1));
        let r = classify_variety(&BottMatrix::hirzebruch(3)).unwrap();
        assert!(!r.fano && !r.weak_fano && !r.tangent_splits);
        assert_eq!((r.anticanonical.a.clone(), r.sjet_of_minus_k), (vec![-1, 2], -1));
    }
}
