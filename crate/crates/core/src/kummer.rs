//! Heights of Kummer Calabi-Yau varieties.
//!
//! For a Calabi-Yau resolution `X` of `A/G` (`A` an abelian variety of
//! dimension `n >= 2`, `|G|` prime to `p`), the Artin-Mazur formal group of
//! `X` is isomorphic to that of `A`, whose height is read off the `p`-rank:
//! `1` if `A` is ordinary, `2` if the `p`-rank is `n - 1`, `∞` otherwise.

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::fermat::HeightValue;

/// Default bound on `p` for the `O(p)` point count.
pub const DEFAULT_EC_BUDGET: u64 = 1_000_000;

/// `y² = x³ + ax + b` over `F_p`, `p >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllipticCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl EllipticCurve {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::InvalidParameter(format!(
                "characteristic {p} < 5 is not supported"
            )));
        }
        let a = a.rem_euclid(p as i64) as u64;
        let b = b.rem_euclid(p as i64) as u64;
        let pp = p as u128;
        let disc = (4 * (a as u128).pow(3) + 27 * (b as u128).pow(2)) % pp;
        if disc == 0 {
            return Err(Error::SingularCurve { p, a, b });
        }
        Ok(EllipticCurve { p, a, b })
    }

    /// `y² = x³ + 1`.
    pub fn fermat_cubic(p: u64) -> Result<Self> {
        Self::new(p, 0, 1)
    }

    /// `#E(F_p)` including the point at infinity, as
    /// `1 + Σ_x (1 + (x³ + ax + b | p))`.
    pub fn count_points(&self) -> Result<u64> {
        self.count_points_with_budget(DEFAULT_EC_BUDGET)
    }

    pub fn count_points_with_budget(&self, budget: u64) -> Result<u64> {
        if self.p > budget {
            return Err(Error::BudgetExceeded {
                what: "elliptic-curve point count p",
                needed: self.p as u128,
                budget: budget as u128,
            });
        }
        let p = self.p;
        let mut is_square = vec![false; p as usize];
        for y in 0..p {
            is_square[(y * y % p) as usize] = true;
        }
        let mut n = 1u64;
        for x in 0..p {
            let rhs = ((x * x % p * x) % p + self.a * x % p + self.b) % p;
            n += match rhs {
                0 => 1,
                v if is_square[v as usize] => 2,
                _ => 0,
            };
        }
        Ok(n)
    }

    /// `a_p = p + 1 - #E(F_p)`.
    pub fn trace(&self) -> Result<i64> {
        Ok(self.p as i64 + 1 - self.count_points()? as i64)
    }

    /// `0` for a supersingular curve (`a_p = 0`, valid for `p >= 5`), else `1`.
    pub fn p_rank(&self) -> Result<u32> {
        Ok(u32::from(self.trace()? != 0))
    }
}

/// Dimension and `p`-rank of an abelian variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbelianData {
    pub dimension: u32,
    pub p_rank: u32,
}

impl AbelianData {
    pub fn new(dimension: u32, p_rank: u32) -> Result<Self> {
        if p_rank > dimension {
            return Err(Error::InvalidParameter(format!(
                "p-rank {p_rank} exceeds dimension {dimension}"
            )));
        }
        Ok(AbelianData { dimension, p_rank })
    }

    /// An elliptic curve as a one-dimensional abelian variety.
    pub fn from_curve(e: &EllipticCurve) -> Result<Self> {
        Self::new(1, e.p_rank()?)
    }

    /// `p`-rank and dimension are additive on products.
    pub fn product(factors: &[AbelianData]) -> Self {
        AbelianData {
            dimension: factors.iter().map(|a| a.dimension).sum(),
            p_rank: factors.iter().map(|a| a.p_rank).sum(),
        }
    }

    pub fn power(self, k: u32) -> Self {
        AbelianData::product(&vec![self; k as usize])
    }
}

/// Height of the Artin-Mazur formal group of `A`, `dim A >= 2`.
pub fn abelian_height(a: &AbelianData) -> Result<HeightValue> {
    let n = a.dimension;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension {n} < 2")));
    }
    Ok(if a.p_rank == n {
        HeightValue::Finite(1)
    } else if a.p_rank + 1 == n {
        HeightValue::Finite(2)
    } else {
        HeightValue::Infinite
    })
}

/// Height of a Kummer Calabi-Yau resolution of `A/G`. The caller attests
/// that `|G|` is prime to `p`.
pub fn kummer_height(a: &AbelianData) -> Result<HeightValue> {
    abelian_height(a)
}

/// The Kummer example built on `E³` with `E : y² = x³ + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerExample {
    pub p: u64,
    pub curve: EllipticCurve,
    #[serde(rename = "N")]
    pub point_count: u64,
    pub a_p: i64,
    pub p_rank: u32,
    pub abelian_dim: u32,
    pub abelian_p_rank: u32,
    pub height: HeightValue,
}

pub fn kummer_example(p: u64) -> Result<KummerExample> {
    kummer_example_for_curve(EllipticCurve::fermat_cubic(p)?)
}

/// Heights for the resolution of `E³/G` for any curve `E`.
pub fn kummer_example_for_curve(curve: EllipticCurve) -> Result<KummerExample> {
    let point_count = curve.count_points()?;
    let a_p = curve.p as i64 + 1 - point_count as i64;
    let e = AbelianData::new(1, u32::from(a_p != 0))?;
    let cube = e.power(3);
    Ok(KummerExample {
        p: curve.p,
        curve,
        point_count,
        a_p,
        p_rank: e.p_rank,
        abelian_dim: cube.dimension,
        abelian_p_rank: cube.p_rank,
        height: kummer_height(&cube)?,
    })
}

pub fn kummer_example_height(p: u64) -> Result<HeightValue> {
    Ok(kummer_example(p)?.height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;

    #[test]
    fn point_count_examples() {
        let e5 = EllipticCurve::fermat_cubic(5).unwrap();
        assert_eq!(e5.count_points().unwrap(), 6);
        assert_eq!(e5.p_rank().unwrap(), 0);
        let e7 = EllipticCurve::fermat_cubic(7).unwrap();
        assert_eq!(e7.count_points().unwrap(), 12);
        assert_eq!(e7.trace().unwrap(), -4);
        assert_eq!(e7.p_rank().unwrap(), 1);
    }

    #[test]
    fn counts_match_pair_enumeration() {
        for p in [5u64, 7, 11, 13, 29] {
            for (a, b) in [(0i64, 1i64), (1, 1), (2, 3), (-1, 0)] {
                let Ok(e) = EllipticCurve::new(p, a, b) else {
                    continue;
                };
                let mut n = 1;
                for x in 0..p {
                    for y in 0..p {
                        if (y * y) % p == (x * x * x + e.a * x + e.b) % p {
                            n += 1;
                        }
                    }
                }
                assert_eq!(e.count_points().unwrap(), n, "p={p} a={a} b={b}");
            }
        }
    }

    #[test]
    fn hasse_bound() {
        for p in primes_in(5, 400) {
            let t = EllipticCurve::new(p, 2, 7).map(|e| e.trace().unwrap());
            if let Ok(t) = t {
                assert!((t * t) as u64 <= 4 * p);
            }
        }
    }

    #[test]
    fn rejects_bad_curves() {
        assert_eq!(EllipticCurve::new(4, 0, 1), Err(Error::NotPrime(4)));
        assert!(EllipticCurve::new(3, 0, 1).is_err());
        assert!(matches!(
            EllipticCurve::new(7, 0, 0),
            Err(Error::SingularCurve { .. })
        ));
        let e = EllipticCurve::new(1_000_003, 0, 1).unwrap();
        assert!(matches!(
            e.count_points(),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn height_from_p_rank_cases() {
        let h = |n, f| abelian_height(&AbelianData::new(n, f).unwrap()).unwrap();
        assert_eq!(h(3, 3), HeightValue::Finite(1));
        assert_eq!(h(3, 2), HeightValue::Finite(2));
        assert_eq!(h(3, 1), HeightValue::Infinite);
        assert_eq!(h(3, 0), HeightValue::Infinite);
        assert_eq!(h(2, 1), HeightValue::Finite(2));
        assert!(abelian_height(&AbelianData::new(1, 1).unwrap()).is_err());
        assert!(AbelianData::new(2, 3).is_err());
        for (n, f) in [(3, 3), (3, 2), (3, 1)] {
            let a = AbelianData::new(n, f).unwrap();
            assert_eq!(kummer_height(&a).unwrap(), abelian_height(&a).unwrap());
        }
    }

    #[test]
    fn product_ranks_add() {
        let ordinary = AbelianData::new(1, 1).unwrap();
        let ss = AbelianData::new(1, 0).unwrap();
        assert_eq!(
            AbelianData::product(&[ordinary, ordinary, ss]),
            AbelianData {
                dimension: 3,
                p_rank: 2
            }
        );
        assert_eq!(
            ss.power(3),
            AbelianData {
                dimension: 3,
                p_rank: 0
            }
        );
    }

    #[test]
    fn kummer_example_values() {
        assert_eq!(kummer_example_height(7).unwrap(), HeightValue::Finite(1));
        assert_eq!(kummer_example_height(5).unwrap(), HeightValue::Infinite);
        let ex = kummer_example(13).unwrap();
        assert_ne!(ex.a_p, 0);
        assert_eq!(ex.height, HeightValue::Finite(1));
        assert!(kummer_example_height(3).is_err());
    }
}
