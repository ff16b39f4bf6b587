//! Valuations of cyclotomic integers at a prime above `p`.
//!
//! Let `W_k = Z/p^k` and `R_k = W_k[x]/(g)` where `g` is the modulus of the
//! finite field `F_q`, read over `W_k`. Since `p ∤ m`, the prime `p` is
//! unramified in `Z[ζ_m]`, and `R_k` is the truncation of the completion of
//! `Z[ζ_m]` at the prime `P` for which `ζ ≡ γ (mod P)`, `γ = g^{(q-1)/m}`
//! with `g` the field's generator. The embedding sends `ζ` to the
//! Teichmüller lift of `γ`, obtained by iterating `z ↦ z^q`.
//!
//! Valuations at the other primes above `p` are obtained by applying a
//! Galois automorphism to the argument first: for a unit `t` modulo `m`,
//! `P_t := σ_{-t}^{-1}(P)` satisfies `ord_{P_t}(z) = ord_P(σ_{-t}(z))`.
//! With this indexing Stickelberger's theorem reads
//! `ord_{P_t} j(α) = A_H(tα)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::finite_field::FiniteField;
use crate::scalar::Coeff;

/// Maximum number of precision doublings in [`valuation_adaptive`].
pub const MAX_DOUBLINGS: u32 = 8;

/// A `p`-adic valuation, exact or bounded below by the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Exact(v) => s.serialize_u32(*v),
            Valuation::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// The truncated completion `R_k` together with the image of `ζ_m`.
#[derive(Debug, Clone)]
pub struct PadicContext {
    p: u64,
    f: usize,
    m: u32,
    k: u32,
    pk: BigInt,
    /// Monic modulus over `Z/p^k`, constant term first, length `f + 1`.
    modulus: Vec<BigInt>,
    zeta_hat: Vec<BigInt>,
    /// Image of `ζ^i` for `i in 0..φ(m)`.
    zeta_powers: Vec<Vec<BigInt>>,
}

impl PadicContext {
    /// Lifts `γ = generator^{(q-1)/m}` to its Teichmüller representative in
    /// `R_k`.
    pub fn new(field: &FiniteField, m: u32, k: u32) -> Result<Self> {
        let q = field.order() as u64;
        if m == 0 || !(q - 1).is_multiple_of(m as u64) {
            return Err(Error::InvalidParameter(format!(
                "m = {m} does not divide q - 1 = {}",
                q - 1
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("precision k must be >= 1".into()));
        }
        let p = field.p() as u64;
        let f = field.degree() as usize;
        let pk = BigInt::from(p).pow(k);
        let modulus = field.modulus().iter().map(|&c| BigInt::from(c)).collect();
        let mut ctx = PadicContext {
            p,
            f,
            m,
            k,
            pk,
            modulus,
            zeta_hat: Vec::new(),
            zeta_powers: Vec::new(),
        };

        let gamma = field.exp((q - 1) / m as u64);
        let mut z: Vec<BigInt> = field.coeffs(gamma).into_iter().map(BigInt::from).collect();
        let mut stable = false;
        for _ in 0..=k {
            let next = ctx.pow(&z, q);
            if next == z {
                stable = true;
                break;
            }
            z = next;
        }
        if !stable {
            return Err(Error::Inconsistent(
                "Teichmüller iteration did not stabilise".into(),
            ));
        }
        if !ctx.is_one(&ctx.pow(&z, m as u64)) {
            return Err(Error::Inconsistent(
                "lifted root of unity has wrong order".into(),
            ));
        }

        let phi = crate::arith::totient(m) as usize;
        let mut powers = Vec::with_capacity(phi);
        let mut cur = ctx.one();
        for _ in 0..phi {
            powers.push(cur.clone());
            cur = ctx.mul(&cur, &z);
        }
        ctx.zeta_powers = powers;
        ctx.zeta_hat = z;
        Ok(ctx)
    }

    /// Default precision `f·r + 2`.
    pub fn default_precision(f: u32, r: u32) -> u32 {
        f * r + 2
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// The Teichmüller lift of `ζ`, as `f` coordinates over `Z/p^k`.
    pub fn zeta_hat(&self) -> &[BigInt] {
        &self.zeta_hat
    }

    /// Image of a cyclotomic integer in `R_k`.
    pub fn embed<T: Coeff>(&self, z: &Cyclotomic<T>) -> Result<Vec<BigInt>> {
        if z.conductor() != self.m {
            return Err(Error::ConductorMismatch {
                left: z.conductor(),
                right: self.m,
            });
        }
        let mut acc = vec![BigInt::zero(); self.f];
        for (c, pow) in z.coeffs().iter().zip(&self.zeta_powers) {
            if c.is_zero() {
                continue;
            }
            let c = c.to_bigint();
            for (a, b) in acc.iter_mut().zip(pow) {
                *a += &c * b;
            }
        }
        for a in acc.iter_mut() {
            *a = a.mod_floor(&self.pk);
        }
        Ok(acc)
    }

    /// `ord_P(z)` at the canonical prime, truncated at the precision `k`.
    pub fn valuation<T: Coeff>(&self, z: &Cyclotomic<T>) -> Result<Valuation> {
        let image = self.embed(z)?;
        let p = BigInt::from(self.p);
        let v = image
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                let mut c = c.clone();
                let mut v = 0u32;
                while c.is_multiple_of(&p) {
                    c /= &p;
                    v += 1;
                }
                v
            })
            .min();
        Ok(match v {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.k),
        })
    }

    /// `ord_{P_t}(z)` where `P_t = σ_{-t}^{-1}(P)`; `t = 1` is the prime
    /// carrying the exponent `A_H(α)` of a Jacobi sum `j(α)`.
    pub fn valuation_at_coset_prime<T: Coeff>(
        &self,
        z: &Cyclotomic<T>,
        t: i64,
    ) -> Result<Valuation> {
        self.valuation(&z.galois(-t)?)
    }

    fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.f];
        v[0] = BigInt::one();
        v
    }

    fn is_one(&self, a: &[BigInt]) -> bool {
        a[0].is_one() && a[1..].iter().all(Zero::is_zero)
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.f;
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for d in (f..prod.len()).rev() {
            let c = std::mem::take(&mut prod[d]);
            if c.is_zero() {
                continue;
            }
            for i in 0..f {
                prod[d - f + i] -= &c * &self.modulus[i];
            }
        }
        prod.truncate(f);
        for c in prod.iter_mut() {
            *c = c.mod_floor(&self.pk);
        }
        prod
    }

    fn pow(&self, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// `ord_P(z)` starting at precision `k0`, doubling up to [`MAX_DOUBLINGS`]
/// times while the result is only a lower bound. Zero is reported as
/// `AtLeast(k0)` without retries. With `coset = Some(t)` the valuation is
/// taken at `P_t` instead of the canonical prime.
pub fn valuation_adaptive<T: Coeff>(
    z: &Cyclotomic<T>,
    field: &FiniteField,
    k0: u32,
    coset: Option<i64>,
) -> Result<Valuation> {
    let m = z.conductor();
    let mut k = k0;
    let mut ctx = PadicContext::new(field, m, k)?;
    if z.is_zero() {
        return Ok(Valuation::AtLeast(k0));
    }
    let z = match coset {
        Some(t) => z.galois(-t)?,
        None => z.clone(),
    };
    for _ in 0..MAX_DOUBLINGS {
        let v = ctx.valuation(&z)?;
        if v.exact().is_some() {
            return Ok(v);
        }
        k *= 2;
        ctx = PadicContext::new(field, m, k)?;
    }
    ctx.valuation(&z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;
    use proptest::prelude::*;

    type Z = Cyclotomic<i64>;

    #[test]
    fn trivial_conductor_maps_zeta_to_one() {
        let field = build_field(7, 1).unwrap();
        let ctx = PadicContext::new(&field, 1, 5).unwrap();
        assert_eq!(ctx.zeta_hat(), &[BigInt::one()]);
    }

    #[test]
    fn f9_fourth_root_of_unity() {
        let field = build_field(3, 2).unwrap();
        let ctx = PadicContext::new(&field, 4, 4).unwrap();
        let z = ctx.zeta_hat().to_vec();
        let z2 = ctx.mul(&z, &z);
        let minus_one = vec![BigInt::from(80), BigInt::zero()];
        assert_eq!(z2, minus_one);
        assert!(ctx.is_one(&ctx.mul(&z2, &z2)));
    }

    #[test]
    fn zeta_hat_reduces_to_field_root() {
        for (p, f, m) in [
            (2u64, 4u32, 5u32),
            (3, 2, 8),
            (7, 4, 5),
            (13, 1, 3),
            (2, 6, 9),
        ] {
            let field = build_field(p, f).unwrap();
            let ctx = PadicContext::new(&field, m, 3).unwrap();
            let reduced: Vec<u32> = ctx
                .zeta_hat()
                .iter()
                .map(|c| (c % BigInt::from(p)).try_into().unwrap())
                .collect();
            let gamma = field.exp((field.order() as u64 - 1) / m as u64);
            assert_eq!(field.from_coeffs(&reduced), gamma);
            // order exactly m in F_q^*
            let order = (1..=m)
                .find(|&d| field.pow(gamma, d as u64) == crate::finite_field::FqElement::ONE);
            assert_eq!(order, Some(m));
        }
    }

    #[test]
    fn valuation_examples() {
        let field = build_field(2, 4).unwrap();
        let ctx = PadicContext::new(&field, 5, 14).unwrap();
        assert_eq!(
            ctx.valuation(&Z::from_int(5, 2)).unwrap(),
            Valuation::Exact(1)
        );
        assert_eq!(ctx.valuation(&Z::one(5)).unwrap(), Valuation::Exact(0));
        assert_eq!(
            ctx.valuation(&Z::from_int(5, 16)).unwrap(),
            Valuation::Exact(4)
        );
        assert_eq!(ctx.valuation(&Z::zero(5)).unwrap(), Valuation::AtLeast(14));
        assert!(matches!(
            ctx.valuation(&Z::one(3)),
            Err(Error::ConductorMismatch { .. })
        ));
    }

    #[test]
    fn rejects_bad_conductor() {
        let field = build_field(3, 2).unwrap();
        assert!(PadicContext::new(&field, 5, 4).is_err());
    }

    #[test]
    fn adaptive_precision_recovers_large_valuation() {
        let field = build_field(3, 2).unwrap();
        let z = Z::from_int(4, 3i64.pow(9));
        assert_eq!(
            valuation_adaptive(&z, &field, 2, None).unwrap(),
            Valuation::Exact(9)
        );
    }

    fn element(m: u32) -> impl Strategy<Value = Z> {
        let phi = crate::arith::totient(m) as usize;
        prop::collection::vec(-30i64..=30, phi).prop_map(move |c| Z::from_poly(m, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn valuation_is_additive(a in element(5), b in element(5)) {
            let field = build_field(2, 4).unwrap();
            let ctx = PadicContext::new(&field, 5, 12).unwrap();
            let (va, vb) = (ctx.valuation(&a).unwrap(), ctx.valuation(&b).unwrap());
            let vab = ctx.valuation(&(&a * &b)).unwrap();
            if let (Some(x), Some(y)) = (va.exact(), vb.exact()) {
                if x + y < 12 {
                    prop_assert_eq!(vab, Valuation::Exact(x + y));
                }
            }
        }

        #[test]
        fn conjugate_valuations_sum_to_norm(a in element(4)) {
            let field = build_field(3, 2).unwrap();
            let ctx = PadicContext::new(&field, 4, 10).unwrap();
            let v = ctx.valuation(&a).unwrap();
            let vc = ctx.valuation(&a.conj()).unwrap();
            let vn = ctx.valuation(&a.modulus_squared()).unwrap();
            if let (Some(x), Some(y), Some(n)) = (v.exact(), vc.exact(), vn.exact()) {
                prop_assert_eq!(x + y, n);
            }
        }
    }
}
