//! Rank-two lattices in an imaginary quadratic field `Q(ω)`.
//!
//! Elements `u + vω` are pairs of rationals. A lattice is kept in a
//! canonical basis `{(d1, e), (0, d2)}` with `d1, d2 > 0` and
//! `0 <= e < d2`, which makes equality and index computations exact.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Integer scalar usable for lattice arithmetic.
pub trait LatticeInt: Integer + Signed + Clone + fmt::Debug + fmt::Display {}
impl<T: Integer + Signed + Clone + fmt::Debug + fmt::Display> LatticeInt for T {}

/// `a x² + b x + c` with `a > 0`, `gcd(a, b, c) = 1`, `b² - 4ac < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPoly<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: LatticeInt> QuadraticPoly<T> {
    /// Normalises sign and content; rejects degenerate or real-rooted input.
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter(
                "leading coefficient is zero".into(),
            ));
        }
        let g = a.gcd(&b).gcd(&c);
        let s = if a.is_negative() { -g } else { g };
        let (a, b, c) = (a / s.clone(), b / s.clone(), c / s);
        let four = T::one() + T::one() + T::one() + T::one();
        let disc = b.clone() * b.clone() - four * a.clone() * c.clone();
        if !disc.is_negative() {
            return Err(Error::InvalidParameter(
                "discriminant is not negative; ω would be real".into(),
            ));
        }
        Ok(QuadraticPoly { a, b, c })
    }

    pub fn discriminant(&self) -> T {
        let four = T::one() + T::one() + T::one() + T::one();
        self.b.clone() * self.b.clone() - four * self.a.clone() * self.c.clone()
    }

    /// `ω` is an algebraic integer.
    pub fn is_monic(&self) -> bool {
        self.a.is_one()
    }
}

/// `u + vω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElement<T: Clone + Integer> {
    pub u: Ratio<T>,
    pub v: Ratio<T>,
}

impl<T: LatticeInt> QuadElement<T> {
    pub fn new(u: Ratio<T>, v: Ratio<T>) -> Self {
        QuadElement { u, v }
    }

    pub fn from_ints(u: T, v: T) -> Self {
        QuadElement {
            u: Ratio::from_integer(u),
            v: Ratio::from_integer(v),
        }
    }

    /// Product in `Q(ω)` using `ω² = -(b/a)ω - c/a`.
    pub fn mul(&self, other: &Self, poly: &QuadraticPoly<T>) -> Self {
        let a = Ratio::from_integer(poly.a.clone());
        let b = Ratio::from_integer(poly.b.clone());
        let c = Ratio::from_integer(poly.c.clone());
        let vv = self.v.clone() * other.v.clone();
        QuadElement {
            u: self.u.clone() * other.u.clone() - vv.clone() * c / a.clone(),
            v: self.u.clone() * other.v.clone() + self.v.clone() * other.u.clone() - vv * b / a,
        }
    }
}

/// A full-rank `Z`-module in `Q(ω)` with its generators and canonical basis.
#[derive(Debug, Clone)]
pub struct PeriodLattice<T: Clone + Integer> {
    poly: QuadraticPoly<T>,
    generators: Vec<QuadElement<T>>,
    basis: [QuadElement<T>; 2],
}

impl<T: LatticeInt> PartialEq for PeriodLattice<T> {
    /// Equality of the underlying modules.
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.basis == other.basis
    }
}

impl<T: LatticeInt> PeriodLattice<T> {
    /// The `Z`-span of `generators`.
    pub fn from_generators(
        poly: QuadraticPoly<T>,
        generators: Vec<QuadElement<T>>,
    ) -> Result<Self> {
        let basis = canonical_basis(&generators)?;
        let lattice = PeriodLattice {
            poly,
            generators,
            basis,
        };
        if !lattice.generators.iter().all(|g| lattice.contains(g)) {
            return Err(Error::Inconsistent(
                "canonical basis does not span the generators".into(),
            ));
        }
        Ok(lattice)
    }

    /// `Z + Zω`.
    pub fn standard(poly: QuadraticPoly<T>) -> Self {
        let gens = vec![
            QuadElement::from_ints(T::one(), T::zero()),
            QuadElement::from_ints(T::zero(), T::one()),
        ];
        Self::from_generators(poly, gens).expect("1 and ω are independent")
    }

    pub fn poly(&self) -> &QuadraticPoly<T> {
        &self.poly
    }

    pub fn generators(&self) -> &[QuadElement<T>] {
        &self.generators
    }

    pub fn basis(&self) -> &[QuadElement<T>; 2] {
        &self.basis
    }

    /// Whether `x` is an integer combination of the basis.
    pub fn contains(&self, x: &QuadElement<T>) -> bool {
        let [b1, b2] = &self.basis;
        let s = x.u.clone() / b1.u.clone();
        if !s.is_integer() {
            return false;
        }
        let t = (x.v.clone() - s * b1.v.clone()) / b2.v.clone();
        t.is_integer()
    }

    /// Covolume in `(u, v)` coordinates.
    pub fn determinant(&self) -> Ratio<T> {
        self.basis[0].u.clone() * self.basis[1].v.clone()
    }
}

/// The period lattice generated by `1, ω, ω², ω³`.
pub fn period_lattice<T: LatticeInt>(poly: QuadraticPoly<T>) -> Result<PeriodLattice<T>> {
    let one = QuadElement::from_ints(T::one(), T::zero());
    let omega = QuadElement::from_ints(T::zero(), T::one());
    let omega2 = omega.mul(&omega, &poly);
    let omega3 = omega2.mul(&omega, &poly);
    PeriodLattice::from_generators(poly, vec![one, omega, omega2, omega3])
}

/// Generalised index `[outer : inner] = det(inner) / det(outer)`.
pub fn lattice_index<T: LatticeInt>(
    inner: &PeriodLattice<T>,
    outer: &PeriodLattice<T>,
) -> Result<Ratio<T>> {
    if inner.poly != outer.poly {
        return Err(Error::InvalidParameter(
            "lattices live in different fields".into(),
        ));
    }
    Ok(inner.determinant() / outer.determinant())
}

/// Row reduction of the generators over a common denominator.
fn canonical_basis<T: LatticeInt>(gens: &[QuadElement<T>]) -> Result<[QuadElement<T>; 2]> {
    let denom = gens
        .iter()
        .flat_map(|g| [g.u.denom().clone(), g.v.denom().clone()])
        .fold(T::one(), |acc, d| acc.lcm(&d));
    let scaled = |r: &Ratio<T>| (r.clone() * Ratio::from_integer(denom.clone())).to_integer();
    let mut rows: Vec<(T, T)> = gens.iter().map(|g| (scaled(&g.u), scaled(&g.v))).collect();

    // first column: Euclid on the pivot entries
    loop {
        let pivot = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.0.is_zero())
            .min_by(|a, b| a.1 .0.abs().cmp(&b.1 .0.abs()))
            .map(|(i, _)| i);
        let Some(pivot) = pivot else {
            return Err(Error::RankDeficient);
        };
        let (px, py) = rows[pivot].clone();
        let mut done = true;
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot || row.0.is_zero() {
                continue;
            }
            let q = row.0.div_floor(&px);
            row.0 = row.0.clone() - q.clone() * px.clone();
            row.1 = row.1.clone() - q * py.clone();
            if !row.0.is_zero() {
                done = false;
            }
        }
        if done {
            let (mut d1, mut e) = rows.swap_remove(pivot);
            if d1.is_negative() {
                d1 = -d1;
                e = -e;
            }
            let d2 = rows.iter().fold(T::zero(), |acc, r| acc.gcd(&r.1));
            if d2.is_zero() {
                return Err(Error::RankDeficient);
            }
            let e = e.mod_floor(&d2);
            let lift = |x: T| Ratio::new(x, denom.clone());
            return Ok([
                QuadElement::new(lift(d1), lift(e)),
                QuadElement::new(Ratio::zero(), lift(d2)),
            ]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;
    use proptest::prelude::*;

    fn poly(a: i64, b: i64, c: i64) -> QuadraticPoly<i64> {
        QuadraticPoly::new(a, b, c).unwrap()
    }

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn poly_validation() {
        assert!(QuadraticPoly::new(1i64, 0, -2).is_err());
        assert!(QuadraticPoly::new(0i64, 1, 1).is_err());
        let p = QuadraticPoly::new(-2i64, -2, -2).unwrap();
        assert_eq!((p.a, p.b, p.c), (1, 1, 1));
    }

    #[test]
    fn eisenstein_and_gaussian_lattices_are_standard() {
        for pl in [poly(1, 1, 1), poly(1, 0, 1), poly(1, 1, 2), poly(1, 0, 5)] {
            let l = period_lattice(pl.clone()).unwrap();
            let std = PeriodLattice::standard(pl);
            assert_eq!(l, std);
            assert_eq!(lattice_index(&l, &std).unwrap(), Ratio::one());
        }
    }

    #[test]
    fn half_i_lattice() {
        let pl = poly(4, 0, 1);
        let l = period_lattice(pl.clone()).unwrap();
        assert_eq!(l.basis()[0], QuadElement::new(r(1, 4), r(0, 1)));
        assert_eq!(l.basis()[1], QuadElement::new(r(0, 1), r(1, 4)));
        let std = PeriodLattice::standard(pl);
        assert_eq!(lattice_index(&l, &std).unwrap(), r(1, 16));
        assert_eq!(lattice_index(&std, &l).unwrap(), r(16, 1));
    }

    #[test]
    fn bigint_instantiation() {
        let pl = QuadraticPoly::new(BigInt::from(4), BigInt::from(0), BigInt::from(1)).unwrap();
        let l = period_lattice(pl.clone()).unwrap();
        let idx = lattice_index(&l, &PeriodLattice::standard(pl)).unwrap();
        assert_eq!(idx, Ratio::new(BigInt::from(1), BigInt::from(16)));
    }

    #[test]
    fn rank_deficient_input() {
        let gens = vec![
            QuadElement::from_ints(1i64, 2),
            QuadElement::from_ints(2, 4),
        ];
        assert_eq!(
            PeriodLattice::from_generators(poly(1, 0, 1), gens).unwrap_err(),
            Error::RankDeficient
        );
        assert_eq!(
            PeriodLattice::from_generators(poly(1, 0, 1), vec![]).unwrap_err(),
            Error::RankDeficient
        );
    }

    #[test]
    fn index_requires_same_field() {
        let a = PeriodLattice::standard(poly(1, 0, 1));
        let b = PeriodLattice::standard(poly(1, 1, 1));
        assert!(lattice_index(&a, &b).is_err());
    }

    fn generators() -> impl Strategy<Value = Vec<(i64, i64, i64, i64)>> {
        prop::collection::vec((-12i64..=12, 1i64..=6, -12i64..=12, 1i64..=6), 2..6)
    }

    fn build(g: &[(i64, i64, i64, i64)]) -> Option<PeriodLattice<i64>> {
        let gens = g
            .iter()
            .map(|&(a, b, c, d)| QuadElement::new(r(a, b), r(c, d)))
            .collect();
        PeriodLattice::from_generators(poly(2, 1, 3), gens).ok()
    }

    proptest! {
        #[test]
        fn index_is_multiplicative(a in generators(), b in generators(), c in generators()) {
            if let (Some(l1), Some(l2), Some(l3)) = (build(&a), build(&b), build(&c)) {
                let lhs = lattice_index(&l1, &l3).unwrap();
                let rhs = lattice_index(&l2, &l3).unwrap() * lattice_index(&l1, &l2).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn basis_and_generators_span_the_same_module(a in generators()) {
            if let Some(l) = build(&a) {
                for g in l.generators() {
                    prop_assert!(l.contains(g));
                }
                // the basis lies in the span: rebuilding from it gives the same lattice
                let again = PeriodLattice::from_generators(l.poly().clone(), l.basis().to_vec()).unwrap();
                prop_assert_eq!(&again, &l);
                // and a lattice generated by generators plus basis is no larger
                let mut both = l.generators().to_vec();
                both.extend(l.basis().iter().cloned());
                let joined = PeriodLattice::from_generators(l.poly().clone(), both).unwrap();
                prop_assert_eq!(&joined, &l);
            }
        }

        #[test]
        fn monic_omega_gives_standard_lattice(b in -6i64..=6, c in 1i64..=20) {
            if b * b - 4 * c < 0 {
                let pl = poly(1, b, c);
                prop_assert_eq!(period_lattice(pl.clone()).unwrap(), PeriodLattice::standard(pl));
            }
        }
    }
}
