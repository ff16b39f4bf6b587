//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ_m]`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}`, i.e. as
//! integer polynomials reduced modulo the cyclotomic polynomial `Φ_m`. The
//! representation is unique, so equality is coefficient equality and a
//! rational integer is recognised by vanishing non-constant coordinates.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_complex::Complex;
use num_traits::{Float, FloatConst, Zero};
use once_cell::sync::Lazy;

use crate::arith::{gcd, totient};
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// `Φ_m` with coefficients from the constant term up.
///
/// Computed by exact division of `x^m - 1` by `Φ_d` for every proper divisor
/// `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic_polynomial: m must be positive");
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        poly = exact_div(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

/// Quotient of `num` by the monic `den`; the division must be exact.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Per-conductor data shared by all elements of `Z[ζ_m]`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicBasis {
    m: u32,
    phi: usize,
    poly: Vec<i64>,
    /// `powers[k]` is `ζ^k` in the power basis, `k in 0..m`.
    powers: Vec<Vec<i64>>,
}

static BASES: Lazy<Mutex<HashMap<u32, Arc<CyclotomicBasis>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl CyclotomicBasis {
    pub fn get(m: u32) -> Arc<CyclotomicBasis> {
        let mut bases = BASES.lock().unwrap_or_else(|e| e.into_inner());
        bases
            .entry(m)
            .or_insert_with(|| Arc::new(CyclotomicBasis::build(m)))
            .clone()
    }

    fn build(m: u32) -> CyclotomicBasis {
        let poly = cyclotomic_polynomial(m);
        let phi = poly.len() - 1;
        debug_assert_eq!(phi as u32, totient(m));
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow term
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
        }
        CyclotomicBasis {
            m,
            phi,
            poly,
            powers,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// `φ(m)`, the rank of `Z[ζ_m]` over `Z`.
    pub fn rank(&self) -> usize {
        self.phi
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    /// `ζ^k` in the power basis, `k` taken modulo `m`.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.m as i64) as usize]
    }
}

/// An element of `Z[ζ_m]` with coefficients in `T`.
#[derive(Clone)]
pub struct Cyclotomic<T> {
    basis: Arc<CyclotomicBasis>,
    coeffs: Vec<T>,
}

impl<T: Coeff> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        self.basis.m == other.basis.m && self.coeffs == other.coeffs
    }
}

impl<T: Coeff> Eq for Cyclotomic<T> {}

impl<T: Coeff> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[m={}](", self.basis.m)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}ζ")?,
                _ => write!(f, "{c}ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl<T: Coeff> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn int<T: Coeff>(n: i64) -> T {
    T::from_i64(n).expect("small integer fits every coefficient type")
}

/// `acc += c * n` without materialising `n` for the common `0, ±1` cases.
fn add_scaled<T: Coeff>(acc: &mut T, c: &T, n: i64) {
    match n {
        0 => {}
        1 => *acc = acc.clone() + c.clone(),
        -1 => *acc = acc.clone() - c.clone(),
        _ => *acc = acc.clone() + c.clone() * int::<T>(n),
    }
}

impl<T: Coeff> Cyclotomic<T> {
    pub fn zero(m: u32) -> Self {
        let basis = CyclotomicBasis::get(m);
        let coeffs = vec![T::zero(); basis.phi];
        Cyclotomic { basis, coeffs }
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, T::one())
    }

    pub fn from_int(m: u32, n: T) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = n;
        z
    }

    /// `ζ^k`.
    pub fn zeta_power(m: u32, k: i64) -> Self {
        let mut z = Self::zero(m);
        let pow = z.basis.power(k).to_vec();
        for (c, n) in z.coeffs.iter_mut().zip(pow) {
            *c = int(n);
        }
        z
    }

    /// Builds `Σ c_i ζ^i` from an arbitrary-length coefficient list, reducing
    /// modulo `Φ_m`.
    pub fn from_poly(m: u32, poly: Vec<T>) -> Self {
        let basis = CyclotomicBasis::get(m);
        let coeffs = reduce(&basis, poly);
        Cyclotomic { basis, coeffs }
    }

    /// Builds `Σ_k counts[k] ζ^k` from exponents taken modulo `m`.
    pub fn from_cyclic(m: u32, counts: &[T]) -> Self {
        let mut z = Self::zero(m);
        for (k, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pow = z.basis.powers[k % m as usize].clone();
            for (acc, n) in z.coeffs.iter_mut().zip(pow) {
                add_scaled(acc, c, n);
            }
        }
        z
    }

    pub fn conductor(&self) -> u32 {
        self.basis.m
    }

    pub fn basis(&self) -> &Arc<CyclotomicBasis> {
        &self.basis
    }

    /// Coordinates in the power basis, length `φ(m)`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<&T> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_conductor(&self, other: &Self) -> Result<()> {
        if self.basis.m != other.basis.m {
            return Err(Error::ConductorMismatch {
                left: self.basis.m,
                right: other.basis.m,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_conductor(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs,
        }
    }

    fn neg_ref(&self) -> Self {
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let phi = self.basis.phi;
        let mut prod = vec![T::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs: reduce(&self.basis, prod),
        }
    }

    pub fn scale(&self, n: &T) -> Self {
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * n.clone()).collect(),
        }
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_zeta_power(&self, k: i64) -> Self {
        self.mul_unchecked(&Self::zeta_power(self.basis.m, k))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.basis.m);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// The automorphism `σ_t : ζ ↦ ζ^t`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let m = self.basis.m;
        if gcd(t.rem_euclid(m as i64) as u64, m as u64) != 1 {
            return Err(Error::NotAUnit(t, m));
        }
        let mut out = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pow = self.basis.power(t * i as i64);
            for (acc, &n) in out.coeffs.iter_mut().zip(pow) {
                add_scaled(acc, c, n);
            }
        }
        Ok(out)
    }

    /// Complex conjugation `σ_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// `z · conj(z)`, the squared absolute value under every embedding.
    pub fn modulus_squared(&self) -> Self {
        self.mul_unchecked(&self.conj())
    }

    /// Value under the embedding `ζ ↦ exp(2πi/m)`.
    pub fn complex_embed<F: Float + FloatConst>(&self) -> Complex<F> {
        let m = F::from(self.basis.m).expect("conductor fits a float");
        let step = F::TAU() / m;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex::new(F::zero(), F::zero()), |acc, (k, c)| {
                let w = F::from(c.to_f64().unwrap_or(f64::NAN)).unwrap_or(F::nan());
                let ang = step * F::from(k).unwrap();
                acc + Complex::new(ang.cos(), ang.sin()) * w
            })
    }

    /// Converts the coefficient type.
    pub fn convert<U: Coeff>(&self) -> Cyclotomic<U> {
        Cyclotomic {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| U::from_decimal(&c.to_decimal()).expect("coefficient fits target type"))
                .collect(),
        }
    }
}

fn reduce<T: Coeff>(basis: &CyclotomicBasis, mut poly: Vec<T>) -> Vec<T> {
    let phi = basis.phi;
    for d in (phi..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[d], T::zero());
        if c.is_zero() {
            continue;
        }
        for i in 0..phi {
            add_scaled(&mut poly[d - phi + i], &c, -basis.poly[i]);
        }
    }
    poly.resize(phi, T::zero());
    poly
}

impl<T: Coeff> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.checked_add(rhs).expect("conductor mismatch")
    }
}

impl<T: Coeff> Add for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Self) -> Cyclotomic<T> {
        &self + &rhs
    }
}

impl<T: Coeff> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self.checked_sub(rhs).expect("conductor mismatch")
    }
}

impl<T: Coeff> Sub for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        &self - &rhs
    }
}

impl<T: Coeff> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.checked_mul(rhs).expect("conductor mismatch")
    }
}

impl<T: Coeff> Mul for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        &self * &rhs
    }
}

impl<T: Coeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.neg_ref()
    }
}

impl<T: Coeff> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.neg_ref()
    }
}
