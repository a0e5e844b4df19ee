//! Affine dimension of `{x : A x >= b}` by exact Fourier–Motzkin elimination.
//!
//! Feasibility of a mixed system of strict and non-strict inequalities is
//! decided by eliminating every variable. An inequality is an implicit
//! equality of the polyhedron when making it strict renders the system
//! infeasible; the dimension is the ambient dimension minus the rank of the
//! implicit equalities.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::Zero;

use crate::linalg;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<BigInt>,
    rhs: BigInt,
    strict: bool,
}

impl Constraint {
    fn normalized(mut self) -> Self {
        let g = self.coeffs.iter().chain(core::iter::once(&self.rhs)).fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && g != BigInt::from(1) {
            for c in self.coeffs.iter_mut() {
                *c /= &g;
            }
            self.rhs /= &g;
        }
        self
    }

    /// `0 >= rhs` or `0 > rhs` once every coefficient is gone.
    fn trivially_satisfied(&self) -> bool {
        if self.strict {
            self.rhs.sign() == Sign::Minus
        } else {
            self.rhs.sign() != Sign::Plus
        }
    }
}

fn feasible(mut system: Vec<Constraint>, nvars: usize) -> bool {
    for var in 0..nvars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = BTreeSet::new();
        for c in system {
            match c.coeffs[var].sign() {
                Sign::Plus => pos.push(c),
                Sign::Minus => neg.push(c),
                Sign::NoSign => {
                    next.insert(c);
                }
            }
        }
        for p in &pos {
            for n in &neg {
                let a = &p.coeffs[var];
                let b = -&n.coeffs[var];
                let combined = Constraint {
                    coeffs: p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * a).collect(),
                    rhs: &p.rhs * &b + &n.rhs * a,
                    strict: p.strict || n.strict,
                }
                .normalized();
                next.insert(combined);
            }
        }
        system = Vec::with_capacity(next.len());
        for c in next {
            if c.coeffs.iter().all(Zero::is_zero) {
                if !c.trivially_satisfied() {
                    return false;
                }
            } else {
                system.push(c);
            }
        }
    }
    system.iter().all(Constraint::trivially_satisfied)
}

/// Affine dimension of `{x in Q^n : <normal_i, x> >= bound_i}`; `-1` if empty.
pub fn affine_dimension(n: usize, inequalities: &[(Vec<i64>, i64)]) -> i32 {
    let system: Vec<Constraint> = inequalities
        .iter()
        .map(|(normal, bound)| {
            assert_eq!(normal.len(), n, "normal has wrong length");
            Constraint {
                coeffs: normal.iter().map(|&x| BigInt::from(x)).collect(),
                rhs: BigInt::from(*bound),
                strict: false,
            }
        })
        .collect();
    if !feasible(system.clone(), n) {
        return -1;
    }
    let equalities: Vec<Vec<Rational>> = (0..system.len())
        .filter(|&i| {
            let mut probe = system.clone();
            probe[i].strict = true;
            !feasible(probe, n)
        })
        .map(|i| system[i].coeffs.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    (n - linalg::rank(&equalities, n)) as i32
}
