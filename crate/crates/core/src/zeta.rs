//! Zeta functions and point counts of Fermat varieties.
//!
//! `Z(X/F_q, T) = P(T)^{(-1)^{r-1}} / ((1-T)(1-qT)⋯(1-q^rT))` with
//! `P(T) = Π_α (1 - j(α)T)`. The product is expanded in `Z[ζ_m][T]` and
//! every coefficient must land in `Z`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::character_sums::{Character, JacobiTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::finite_field::{build_field, FermatParams, FqElement};

/// Default bound on the number of projective candidates enumerated.
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaData {
    pub params: FermatParams,
    /// Coefficients of `P(T)`, constant term first.
    #[serde(serialize_with = "serialize_bigints")]
    pub p_coeffs: Vec<BigInt>,
    /// `i` for each pole factor `(1 - q^i T)`.
    pub pole_exponents: Vec<u32>,
    /// `(-1)^{r-1}`.
    pub sign: i32,
}

fn serialize_bigints<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_str_radix(10)))
}

impl ZetaData {
    pub fn degree(&self) -> usize {
        self.p_coeffs.len() - 1
    }

    /// Checks `c_{d-k} q^{rk} = ε q^{rd/2} c_k` with `ε = ±1`, the
    /// coefficient form of `j ↦ q^r / j` permuting the roots. Returns `None`
    /// when `rd` is odd.
    pub fn functional_equation_holds(&self) -> Option<bool> {
        let d = self.degree();
        let r = self.params.r as usize;
        if (r * d) % 2 == 1 {
            return None;
        }
        let q = BigInt::from(self.params.q);
        let half = q.pow((r * d / 2) as u32);
        let lead = &self.p_coeffs[d];
        let eps = if *lead == half {
            BigInt::one()
        } else if *lead == -&half {
            -BigInt::one()
        } else {
            return Some(false);
        };
        Some((0..=d).all(|k| {
            &self.p_coeffs[d - k] * q.pow((r * k) as u32) == &eps * &half * &self.p_coeffs[k]
        }))
    }
}

/// Expands `Π (1 - j T)` over the table.
pub fn zeta_from_table(table: &JacobiTable) -> Result<ZetaData> {
    let m = table.params.m;
    let mut poly: Vec<Cyclotomic<BigInt>> = vec![Cyclotomic::one(m)];
    for (_, j) in table.iter() {
        let mut next = poly.clone();
        next.push(Cyclotomic::zero(m));
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] - &(c * j);
        }
        poly = next;
    }
    let p_coeffs = poly
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.as_integer().cloned().ok_or_else(|| {
                Error::Inconsistent(format!(
                    "coefficient of T^{k} in P(T) is not a rational integer"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let r = table.params.r;
    Ok(ZetaData {
        params: table.params,
        p_coeffs,
        pole_exponents: (0..=r).collect(),
        sign: if r % 2 == 1 { 1 } else { -1 },
    })
}

/// `Z(X_m^r / F_q, T)` with Jacobi sums computed from scratch.
pub fn zeta_fermat(params: &FermatParams) -> Result<ZetaData> {
    let field = Arc::new(build_field(params.p, params.f)?);
    let chi = Character::new(field, params.m)?;
    let table = JacobiTable::compute(*params, &chi)?;
    zeta_from_table(&table)
}

/// Power sums `Σ_α j(α)^s` for `s = 1..=max_s` from the coefficients of
/// `P(T)` via Newton's identities: `s c_s = -Σ_{i=1}^{s} p_i c_{s-i}`.
pub fn power_sums(p_coeffs: &[BigInt], max_s: u32) -> Vec<BigInt> {
    let coeff = |k: usize| p_coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
    let mut sums: Vec<BigInt> = Vec::with_capacity(max_s as usize);
    for s in 1..=max_s as usize {
        let mut acc = -BigInt::from(s) * coeff(s);
        for i in 1..s {
            acc -= &sums[i - 1] * coeff(s - i);
        }
        sums.push(acc);
    }
    sums
}

/// `N_s = Σ_{i=0}^{r} q^{is} + (-1)^r Σ_α j(α)^s`, the number of points over
/// `F_{q^s}`.
pub fn point_count_from_zeta(zeta: &ZetaData, s: u32) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "extension degree s must be >= 1".into(),
        ));
    }
    let FermatParams { q, r, .. } = zeta.params;
    let ps = power_sums(&zeta.p_coeffs, s).pop().expect("s >= 1");
    let qs = BigInt::from(q).pow(s);
    let mut n: BigInt = (0..=r).map(|i| qs.pow(i)).sum();
    if r % 2 == 0 {
        n += ps;
    } else {
        n -= ps;
    }
    if n.is_negative() {
        return Err(Error::Inconsistent(format!("negative point count {n}")));
    }
    Ok(n)
}

/// The same count evaluated directly in `Z[ζ_m]` from the Jacobi sums.
pub fn point_count_from_table(table: &JacobiTable, s: u32) -> Result<BigInt> {
    let FermatParams { q, r, m, .. } = table.params;
    let total = table
        .iter()
        .fold(Cyclotomic::<BigInt>::zero(m), |acc, (_, j)| {
            &acc + &j.pow(s)
        });
    let ps = total
        .as_integer()
        .cloned()
        .ok_or_else(|| Error::Inconsistent("power sum of Jacobi sums is not rational".into()))?;
    let qs = BigInt::from(q).pow(s);
    let base: BigInt = (0..=r).map(|i| qs.pow(i)).sum();
    Ok(if r % 2 == 0 { base + ps } else { base - ps })
}

/// Number of projective candidates `(Q^{r+2} - 1)/(Q - 1)` over `F_Q`.
pub fn projective_candidates(field_order: u64, r: u32) -> u128 {
    let q = field_order as u128;
    (0..r + 2)
        .map(|i| q.saturating_pow(i))
        .fold(0u128, u128::saturating_add)
}

/// Counts points of `X_0^m + … + X_{r+1}^m = 0` over `F_{q^s}` by
/// enumerating representatives whose first nonzero coordinate is `1`.
pub fn brute_force_point_count(params: &FermatParams, s: u32) -> Result<u64> {
    brute_force_point_count_with_budget(params, s, DEFAULT_POINT_BUDGET)
}

pub fn brute_force_point_count_with_budget(
    params: &FermatParams,
    s: u32,
    budget: u64,
) -> Result<u64> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "extension degree s must be >= 1".into(),
        ));
    }
    let degree = params.f * s;
    let big_q = (params.p as u128).checked_pow(degree).unwrap_or(u128::MAX);
    let needed = if big_q > u64::MAX as u128 {
        u128::MAX
    } else {
        projective_candidates(big_q as u64, params.r)
    };
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "projective point enumeration",
            needed,
            budget: budget as u128,
        });
    }
    let field = build_field(params.p, degree)?;
    let powers: Vec<FqElement> = field
        .elements()
        .map(|x| field.pow(x, params.m as u64))
        .collect();
    let coords = params.r as usize + 2;

    fn count_tails(
        field: &crate::finite_field::FiniteField,
        powers: &[FqElement],
        free: usize,
        partial: FqElement,
    ) -> u64 {
        if free == 0 {
            return u64::from(partial.is_zero());
        }
        field
            .elements()
            .map(|x| {
                count_tails(
                    field,
                    powers,
                    free - 1,
                    field.add(partial, powers[x.index()]),
                )
            })
            .sum()
    }

    // leading coordinate fixed to 1 at each position, zeros before it
    Ok((0..coords)
        .map(|lead| count_tails(&field, &powers, coords - 1 - lead, FqElement::ONE))
        .sum())
}
