//! Jacobi sums of the Fermat variety.
//!
//! For `α = (a_0, …, a_{r+1}) ∈ A_{m,r}` and the canonical character `χ` of
//! order `m` (`χ(g) = ζ` for the field's generator `g`),
//!
//! ```text
//! j(α) = (-1)^r Σ χ(v_1)^{a_1} ⋯ χ(v_{r+1})^{a_{r+1}},   1 + v_1 + … + v_{r+1} = 0,
//! ```
//!
//! the sum running over `v_i ∈ F_q^*`. Writing `f_a(x) = χ(x)^a` (and
//! `f_a(0) = 0`), the sum is `(-1)^r (f_{a_1} ∗ ⋯ ∗ f_{a_{r+1}})(-1)` for
//! convolution over the additive group of `F_q`. Three routes are provided:
//!
//! * [`jacobi_sum`]: convolution of homogeneous functions. A function with
//!   `g(λy) = χ(λ)^d g(y)` is determined by `g(0)` and `g(1)`, and
//!   convolving it with `f_a` only needs the two-variable sums
//!   `Σ_{x ≠ 0,1} χ(x)^d χ(1-x)^a`, read off the cyclotomic numbers of `χ`.
//!   Cost `O(q + r·m²)`.
//! * [`jacobi_sum_dense`]: the same convolution on dense tables, `O(r·q²)`.
//! * [`jacobi_sum_naive`]: direct enumeration of the solution set, the
//!   independent oracle.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fermat::{enumerate_alpha, AlphaVector};
use crate::finite_field::{FermatParams, FiniteField, FqElement};
use crate::scalar::Coeff;

/// Default bound on `q^r` for the enumeration oracle.
pub const DEFAULT_NAIVE_BUDGET: u64 = 10_000_000;

/// Default bound on `r·q²` for dense convolution.
pub const DEFAULT_DENSE_BUDGET: u64 = 50_000_000;

const NO_EXPONENT: u32 = u32::MAX;

/// The character `χ : F_q^* → μ_m` with `χ(g) = ζ_m`.
#[derive(Debug, Clone)]
pub struct Character {
    field: Arc<FiniteField>,
    m: u32,
    /// `χ(x) = ζ^{exponents[x]}`, i.e. `dlog(x) mod m`.
    exponents: Vec<u32>,
    /// `cyclotomic_numbers[c·m + d] = #{x ≠ 0, 1 : χ(x) = ζ^c, χ(1-x) = ζ^d}`.
    cyclotomic_numbers: Vec<u64>,
    /// Exponent of `χ(-1)`.
    minus_one: u32,
}

impl Character {
    pub fn new(field: Arc<FiniteField>, m: u32) -> Result<Self> {
        let q = field.order();
        if m == 0 || !(q - 1).is_multiple_of(m) {
            return Err(Error::InvalidParameter(format!(
                "character order {m} does not divide q - 1 = {}",
                q - 1
            )));
        }
        let exponents: Vec<u32> = field
            .elements()
            .map(|x| match field.dlog(x) {
                Ok(l) => l % m,
                Err(_) => NO_EXPONENT,
            })
            .collect();
        let mut cyclotomic_numbers = vec![0u64; (m * m) as usize];
        for x in field.units() {
            let y = field.sub(FqElement::ONE, x);
            if y.is_zero() {
                continue;
            }
            let (c, d) = (exponents[x.index()], exponents[y.index()]);
            cyclotomic_numbers[(c * m + d) as usize] += 1;
        }
        let minus_one = exponents[field.neg(FqElement::ONE).index()];
        Ok(Character {
            field,
            m,
            exponents,
            cyclotomic_numbers,
            minus_one,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// `e` with `χ(x) = ζ^e`; `None` at zero.
    pub fn exponent(&self, x: FqElement) -> Option<u32> {
        match self.exponents[x.index()] {
            NO_EXPONENT => None,
            e => Some(e),
        }
    }

    /// `χ(x)^a`, or `None` at zero.
    pub fn eval<T: Coeff>(&self, x: FqElement, a: u32) -> Option<Cyclotomic<T>> {
        self.exponent(x)
            .map(|e| Cyclotomic::zeta_power(self.m, (e as u64 * a as u64 % self.m as u64) as i64))
    }

    /// `#{x ∈ F_q \ {0,1} : χ(x) = ζ^c, χ(1-x) = ζ^d}`.
    pub fn cyclotomic_number(&self, c: u32, d: u32) -> u64 {
        self.cyclotomic_numbers[((c % self.m) * self.m + d % self.m) as usize]
    }

    /// `Σ_{x ≠ 0,1} χ(x)^b χ(1-x)^a`.
    pub fn pair_sum<T: Coeff>(&self, b: u32, a: u32) -> Cyclotomic<T> {
        let m = self.m as u64;
        let mut counts = vec![T::zero(); self.m as usize];
        for c in 0..m {
            for d in 0..m {
                let n = self.cyclotomic_numbers[(c * m + d) as usize];
                if n == 0 {
                    continue;
                }
                let e = ((b as u64 * c + a as u64 * d) % m) as usize;
                counts[e] = counts[e].clone() + T::from_u64(n).expect("count fits");
            }
        }
        Cyclotomic::from_cyclic(self.m, &counts)
    }

    fn check_alpha(&self, alpha: &AlphaVector) -> Result<()> {
        if alpha.m() != self.m {
            return Err(Error::ConductorMismatch {
                left: alpha.m(),
                right: self.m,
            });
        }
        Ok(())
    }
}

/// The canonical character of order `m` on `field`.
pub fn character_table(field: Arc<FiniteField>, m: u32) -> Result<Character> {
    Character::new(field, m)
}

/// A dense function `F_q → Z[ζ_m]`, indexed by element encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction<T: Coeff> {
    m: u32,
    values: Vec<Cyclotomic<T>>,
}

impl<T: Coeff> GroupFunction<T> {
    pub fn from_values(m: u32, values: Vec<Cyclotomic<T>>) -> Self {
        GroupFunction { m, values }
    }

    /// `f_a(x) = χ(x)^a` on `F_q^*`, zero at `0`.
    pub fn character_power(chi: &Character, a: u32) -> Self {
        let values = chi
            .field
            .elements()
            .map(|x| chi.eval(x, a).unwrap_or_else(|| Cyclotomic::zero(chi.m)))
            .collect();
        GroupFunction { m: chi.m, values }
    }

    pub fn value(&self, x: FqElement) -> &Cyclotomic<T> {
        &self.values[x.index()]
    }

    pub fn values(&self) -> &[Cyclotomic<T>] {
        &self.values
    }

    /// `(self ∗ other)(y) = Σ_x self(x) other(y - x)`.
    pub fn convolve(&self, other: &Self, field: &FiniteField) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::ConductorMismatch {
                left: self.m,
                right: other.m,
            });
        }
        if self.values.len() != field.order() as usize
            || other.values.len() != field.order() as usize
        {
            return Err(Error::InvalidParameter(
                "table length differs from q".into(),
            ));
        }
        let mut out = vec![Cyclotomic::zero(self.m); self.values.len()];
        for x in field.elements() {
            let fx = &self.values[x.index()];
            if fx.is_zero() {
                continue;
            }
            for z in field.elements() {
                // y = x + z, so other(y - x) = other(z)
                let gz = &other.values[z.index()];
                if gz.is_zero() {
                    continue;
                }
                let y = field.add(x, z);
                out[y.index()] = &out[y.index()] + &(fx * gz);
            }
        }
        Ok(GroupFunction {
            m: self.m,
            values: out,
        })
    }
}

/// A function with `g(λy) = χ(λ)^degree · g(y)` for all `λ ≠ 0`, stored as
/// its values at `0` and `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousFunction<T: Coeff> {
    pub degree: u32,
    pub at_zero: Cyclotomic<T>,
    pub at_one: Cyclotomic<T>,
}

impl<T: Coeff> HomogeneousFunction<T> {
    /// `f_a`.
    pub fn character_power(chi: &Character, a: u32) -> Self {
        HomogeneousFunction {
            degree: a % chi.m,
            at_zero: Cyclotomic::zero(chi.m),
            at_one: Cyclotomic::one(chi.m),
        }
    }

    pub fn value(&self, x: FqElement, chi: &Character) -> Cyclotomic<T> {
        match chi.exponent(x) {
            None => self.at_zero.clone(),
            Some(e) => self.at_one.mul_zeta_power(e as i64 * self.degree as i64),
        }
    }

    /// `self ∗ f_a`, again homogeneous of degree `degree + a`.
    ///
    /// At `1`: the `x = 0` term gives `g(0)`, the others `g(1) Σ_{x≠0,1}
    /// χ(x)^d χ(1-x)^a`. At `0`: `g(1) χ(-1)^a Σ_{x≠0} χ(x)^{d+a}`, which is
    /// `(q-1) g(1) χ(-1)^a` when `d + a ≡ 0` and zero otherwise.
    pub fn convolve_character_power(&self, chi: &Character, a: u32) -> Self {
        let m = chi.m;
        let a = a % m;
        let degree = (self.degree + a) % m;
        let at_one = &self.at_zero + &(&self.at_one * &chi.pair_sum::<T>(self.degree, a));
        let at_zero = if degree == 0 {
            let q_minus_one = T::from_u64(chi.field.order() as u64 - 1).expect("q fits");
            self.at_one
                .mul_zeta_power(chi.minus_one as i64 * a as i64)
                .scale(&q_minus_one)
        } else {
            Cyclotomic::zero(m)
        };
        HomogeneousFunction {
            degree,
            at_zero,
            at_one,
        }
    }

    pub fn to_dense(&self, chi: &Character) -> GroupFunction<T> {
        GroupFunction {
            m: chi.m,
            values: chi.field.elements().map(|x| self.value(x, chi)).collect(),
        }
    }
}

fn sign<T: Coeff>(z: Cyclotomic<T>, r: u32) -> Cyclotomic<T> {
    if r.is_multiple_of(2) {
        z
    } else {
        -z
    }
}

/// `j(α)` by homogeneous convolution.
pub fn jacobi_sum<T: Coeff>(alpha: &AlphaVector, chi: &Character) -> Result<Cyclotomic<T>> {
    chi.check_alpha(alpha)?;
    let exps = alpha.sum_exponents();
    let mut g = HomogeneousFunction::<T>::character_power(chi, exps[0]);
    for &a in &exps[1..] {
        g = g.convolve_character_power(chi, a);
    }
    // (g)(-1) = χ(-1)^degree · g(1)
    let at_minus_one = g
        .at_one
        .mul_zeta_power(chi.minus_one as i64 * g.degree as i64);
    Ok(sign(at_minus_one, alpha.r()))
}

/// `j(α)` by dense convolution over `F_q`.
pub fn jacobi_sum_dense<T: Coeff>(alpha: &AlphaVector, chi: &Character) -> Result<Cyclotomic<T>> {
    jacobi_sum_dense_with_budget(alpha, chi, DEFAULT_DENSE_BUDGET)
}

pub fn jacobi_sum_dense_with_budget<T: Coeff>(
    alpha: &AlphaVector,
    chi: &Character,
    budget: u64,
) -> Result<Cyclotomic<T>> {
    chi.check_alpha(alpha)?;
    let q = chi.field.order() as u128;
    let needed = q * q * alpha.r() as u128;
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "dense convolution r·q^2",
            needed,
            budget: budget as u128,
        });
    }
    let exps = alpha.sum_exponents();
    let mut g = GroupFunction::<T>::character_power(chi, exps[0]);
    for &a in &exps[1..] {
        g = g.convolve(&GroupFunction::character_power(chi, a), &chi.field)?;
    }
    let minus_one = chi.field.neg(FqElement::ONE);
    Ok(sign(g.value(minus_one).clone(), alpha.r()))
}

/// `j(α)` by enumerating all `(v_1, …, v_{r+1}) ∈ (F_q^*)^{r+1}` with
/// `1 + Σ v_i = 0`.
pub fn jacobi_sum_naive<T: Coeff>(alpha: &AlphaVector, chi: &Character) -> Result<Cyclotomic<T>> {
    jacobi_sum_naive_with_budget(alpha, chi, DEFAULT_NAIVE_BUDGET)
}

pub fn jacobi_sum_naive_with_budget<T: Coeff>(
    alpha: &AlphaVector,
    chi: &Character,
    budget: u64,
) -> Result<Cyclotomic<T>> {
    chi.check_alpha(alpha)?;
    let field = &chi.field;
    let r = alpha.r();
    let needed = (field.order() as u128).saturating_pow(r);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "naive Jacobi sum q^r",
            needed,
            budget: budget as u128,
        });
    }
    let exps = alpha.sum_exponents();
    let m = chi.m as u64;
    let mut counts = vec![0i64; chi.m as usize];
    let minus_one = field.neg(FqElement::ONE);

    // depth-first over v_1..v_r carrying the partial sum and the exponent;
    // v_{r+1} = -1 - (v_1 + … + v_r)
    fn walk(
        chi: &Character,
        exps: &[u32],
        depth: usize,
        partial: FqElement,
        exponent: u64,
        target: FqElement,
        counts: &mut [i64],
    ) {
        let field = &chi.field;
        let m = chi.m as u64;
        if depth + 1 == exps.len() {
            let last = field.sub(target, partial);
            if let Some(e) = chi.exponent(last) {
                let total = (exponent + e as u64 * exps[depth] as u64) % m;
                counts[total as usize] += 1;
            }
            return;
        }
        for v in field.units() {
            let e = chi.exponent(v).expect("unit") as u64;
            walk(
                chi,
                exps,
                depth + 1,
                field.add(partial, v),
                (exponent + e * exps[depth] as u64) % m,
                target,
                counts,
            );
        }
    }
    walk(chi, exps, 0, FqElement::ZERO, 0, minus_one, &mut counts);
    debug_assert!(counts.len() as u64 == m);
    let counts: Vec<T> = counts
        .into_iter()
        .map(|c| T::from_i64(c).expect("count fits"))
        .collect();
    Ok(sign(Cyclotomic::from_cyclic(chi.m, &counts), r))
}

/// Units of `Z/m`, ascending.
pub fn unit_group(m: u32) -> Vec<u32> {
    (1..m).filter(|&t| gcd(t as u64, m as u64) == 1).collect()
}

/// `j(α)` for every `α ∈ A_{m,r}`.
///
/// One representative per orbit of `(Z/m)^*` is evaluated (in parallel) and
/// the rest of the orbit is filled in through `j(tα) = σ_t(j(α))`.
#[derive(Debug, Clone)]
pub struct JacobiTable {
    pub params: FermatParams,
    pub alphas: Vec<AlphaVector>,
    pub sums: Vec<Cyclotomic<BigInt>>,
}

impl JacobiTable {
    pub fn compute(params: FermatParams, chi: &Character) -> Result<Self> {
        if chi.m != params.m || chi.field.order() as u64 != params.q {
            return Err(Error::InvalidParameter(
                "character does not match parameters".into(),
            ));
        }
        let alphas = enumerate_alpha(params.m, params.r)?;
        let units = unit_group(params.m);
        let orbit: Vec<(AlphaVector, u32)> = alphas
            .iter()
            .map(|a| a.orbit_representative(&units))
            .collect();
        let mut reps: Vec<AlphaVector> = orbit.iter().map(|(rep, _)| rep.clone()).collect();
        reps.sort();
        reps.dedup();
        let rep_sums: HashMap<AlphaVector, Cyclotomic<BigInt>> = reps
            .into_par_iter()
            .map(|rep| jacobi_sum::<BigInt>(&rep, chi).map(|j| (rep, j)))
            .collect::<Result<_>>()?;
        let sums = orbit
            .iter()
            .map(|(rep, t)| {
                // alpha = t^{-1} · rep
                let inv = crate::arith::inverse_mod(*t as i64, params.m).expect("unit");
                rep_sums[rep].galois(inv as i64)
            })
            .collect::<Result<_>>()?;
        Ok(JacobiTable {
            params,
            alphas,
            sums,
        })
    }

    pub fn get(&self, alpha: &AlphaVector) -> Option<&Cyclotomic<BigInt>> {
        self.alphas.binary_search(alpha).ok().map(|i| &self.sums[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AlphaVector, &Cyclotomic<BigInt>)> {
        self.alphas.iter().zip(&self.sums)
    }
}

const JACOBI_CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct JacobiCacheFile {
    format_version: u32,
    p: u64,
    m: u32,
    r: u32,
    entries: Vec<JacobiCacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct JacobiCacheEntry {
    alpha: Vec<u32>,
    coeffs: Vec<String>,
}

/// JSON cache of Jacobi-sum tables keyed by `(p, m, r)`.
#[derive(Debug, Clone)]
pub struct JacobiCache {
    dir: PathBuf,
}

impl JacobiCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        JacobiCache { dir: dir.into() }
    }

    pub fn path_for(&self, params: &FermatParams) -> PathBuf {
        self.dir.join(format!(
            "jacobi-v{JACOBI_CACHE_VERSION}-p{}-m{}-r{}.json",
            params.p, params.m, params.r
        ))
    }

    pub fn load_or_compute(&self, params: FermatParams, chi: &Character) -> Result<JacobiTable> {
        if let Some(table) = self.load(&params) {
            return Ok(table);
        }
        let table = JacobiTable::compute(params, chi)?;
        self.store(&table)?;
        Ok(table)
    }

    /// Reads a cached table; `None` on a miss or a malformed entry.
    pub fn load(&self, params: &FermatParams) -> Option<JacobiTable> {
        read_jacobi(&self.path_for(params), params)
    }

    /// Writes via a temporary file and rename, so concurrent writers of the
    /// same table leave one complete copy.
    pub fn store(&self, table: &JacobiTable) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let file = JacobiCacheFile {
            format_version: JACOBI_CACHE_VERSION,
            p: table.params.p,
            m: table.params.m,
            r: table.params.r,
            entries: table
                .iter()
                .map(|(alpha, j)| JacobiCacheEntry {
                    alpha: alpha.components().to_vec(),
                    coeffs: j.coeffs().iter().map(|c| c.to_str_radix(10)).collect(),
                })
                .collect(),
        };
        let path = self.path_for(&table.params);
        let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
        let body = serde_json::to_vec(&file).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&tmp, body).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))
    }
}

fn read_jacobi(path: &Path, params: &FermatParams) -> Option<JacobiTable> {
    let bytes = fs::read(path).ok()?;
    let file: JacobiCacheFile = serde_json::from_slice(&bytes).ok()?;
    if file.format_version != JACOBI_CACHE_VERSION
        || (file.p, file.m, file.r) != (params.p, params.m, params.r)
    {
        return None;
    }
    let alphas = enumerate_alpha(params.m, params.r).ok()?;
    if file.entries.len() != alphas.len() {
        return None;
    }
    let mut sums = Vec::with_capacity(alphas.len());
    for (alpha, entry) in alphas.iter().zip(file.entries) {
        if alpha.components() != entry.alpha.as_slice() {
            return None;
        }
        let coeffs: Option<Vec<BigInt>> = entry
            .coeffs
            .iter()
            .map(|c| BigInt::from_decimal(c))
            .collect();
        let coeffs = coeffs?;
        if coeffs.len() != crate::arith::totient(params.m) as usize {
            return None;
        }
        sums.push(Cyclotomic::from_poly(params.m, coeffs));
    }
    Some(JacobiTable {
        params: *params,
        alphas,
        sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;
    use proptest::prelude::*;

    type Z = Cyclotomic<i64>;

    fn chi(p: u64, f: u32, m: u32) -> Character {
        Character::new(Arc::new(build_field(p, f).unwrap()), m).unwrap()
    }

    #[test]
    fn character_examples() {
        let c = chi(3, 2, 4);
        let g = c.field().generator();
        assert_eq!(c.eval::<i64>(FqElement::ONE, 1), Some(Z::one(4)));
        assert_eq!(c.eval::<i64>(g, 1).unwrap().pow(4), Z::one(4));
        assert_eq!(
            c.eval::<i64>(c.field().mul(g, g), 1),
            Some(Z::from_int(4, -1))
        );
        assert_eq!(c.eval::<i64>(FqElement::ZERO, 1), None);
        assert!(Character::new(Arc::new(build_field(3, 2).unwrap()), 5).is_err());
    }

    #[test]
    fn character_is_multiplicative_of_exact_order() {
        let c = chi(2, 4, 5);
        let field = c.field().clone();
        for x in field.units() {
            for y in field.units() {
                let xy = field.mul(x, y);
                assert_eq!(
                    c.eval::<i64>(xy, 1).unwrap(),
                    &c.eval::<i64>(x, 1).unwrap() * &c.eval::<i64>(y, 1).unwrap()
                );
            }
        }
        let g = field.generator();
        assert_eq!(c.eval::<i64>(g, 1), Some(Z::zeta_power(5, 1)));
    }

    #[test]
    fn fermat_cubic_over_f7() {
        let c = chi(7, 1, 3);
        for alpha in enumerate_alpha(3, 1).unwrap() {
            let j: Z = jacobi_sum(&alpha, &c).unwrap();
            assert_eq!(j.modulus_squared(), Z::from_int(3, 7));
            // oracle: the literal double loop
            let field = c.field();
            let mut direct = Z::zero(3);
            for v1 in field.units() {
                let v2 = field.sub(field.neg(FqElement::ONE), v1);
                if v2.is_zero() {
                    continue;
                }
                let a = alpha.sum_exponents();
                direct = &direct
                    + &(&c.eval::<i64>(v1, a[0]).unwrap() * &c.eval::<i64>(v2, a[1]).unwrap());
            }
            assert_eq!(j, -direct);
        }
    }

    #[test]
    fn three_routes_agree_on_small_fields() {
        for (p, f, m, r) in [
            (3u64, 2u32, 4u32, 2u32),
            (7, 1, 3, 1),
            (13, 1, 3, 1),
            (5, 2, 4, 2),
            (7, 1, 6, 2),
            (2, 4, 5, 2),
        ] {
            let c = chi(p, f, m);
            for alpha in enumerate_alpha(m, r).unwrap() {
                let fast: Z = jacobi_sum(&alpha, &c).unwrap();
                let dense: Z = jacobi_sum_dense(&alpha, &c).unwrap();
                let naive: Z = jacobi_sum_naive(&alpha, &c).unwrap();
                assert_eq!(fast, naive, "p={p} m={m} {alpha}");
                assert_eq!(dense, naive, "p={p} m={m} {alpha}");
            }
        }
    }

    #[test]
    fn naive_budget() {
        let c = chi(2, 4, 5);
        let alpha = AlphaVector::new(5, vec![1; 5]).unwrap();
        assert!(matches!(
            jacobi_sum_naive_with_budget::<i64>(&alpha, &c, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        let wrong = AlphaVector::new(3, vec![1, 1, 1]).unwrap();
        assert!(matches!(
            jacobi_sum::<i64>(&wrong, &c),
            Err(Error::ConductorMismatch { .. })
        ));
    }

    #[test]
    fn homogeneous_convolution_matches_dense() {
        let c = chi(3, 2, 8);
        let field = c.field().clone();
        for (a, b) in [(1u32, 1u32), (3, 5), (2, 6), (7, 7)] {
            let fast =
                HomogeneousFunction::<i64>::character_power(&c, a).convolve_character_power(&c, b);
            let dense = GroupFunction::<i64>::character_power(&c, a)
                .convolve(&GroupFunction::character_power(&c, b), &field)
                .unwrap();
            assert_eq!(fast.to_dense(&c), dense, "a={a} b={b}");
        }
    }

    #[test]
    fn galois_equivariance() {
        let c = chi(2, 4, 5);
        for alpha in enumerate_alpha(5, 3).unwrap().iter().step_by(7) {
            let j: Cyclotomic<BigInt> = jacobi_sum(alpha, &c).unwrap();
            for t in unit_group(5) {
                let jt: Cyclotomic<BigInt> =
                    jacobi_sum(&alpha.scale(t as i64).unwrap(), &c).unwrap();
                assert_eq!(jt, j.galois(t as i64).unwrap());
            }
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let params = FermatParams::new(2, 5, 3).unwrap();
        let field = Arc::new(build_field(params.p, params.f).unwrap());
        let c = Character::new(field, params.m).unwrap();
        let table = JacobiTable::compute(params, &c).unwrap();
        assert_eq!(table.alphas.len(), 204);
        for (alpha, j) in table.iter() {
            assert_eq!(j, &jacobi_sum::<BigInt>(alpha, &c).unwrap());
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = JacobiCache::new(dir.path());
        let params = FermatParams::new(3, 4, 2).unwrap();
        let c = Character::new(Arc::new(build_field(3, 2).unwrap()), 4).unwrap();
        let computed = cache.load_or_compute(params, &c).unwrap();
        let loaded = cache.load(&params).unwrap();
        assert_eq!(computed.sums, loaded.sums);
        fs::write(cache.path_for(&params), "[]").unwrap();
        assert!(cache.load(&params).is_none());
    }

    fn random_table(len: usize, m: u32) -> impl Strategy<Value = Vec<Vec<i64>>> {
        let phi = crate::arith::totient(m) as usize;
        prop::collection::vec(prop::collection::vec(-3i64..=3, phi), len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn convolution_commutes_and_associates(
            a in random_table(25, 4), b in random_table(25, 4), c in random_table(25, 4)
        ) {
            let field = build_field(5, 2).unwrap();
            let mk = |t: Vec<Vec<i64>>| GroupFunction::from_values(4, t.into_iter().map(|v| Z::from_poly(4, v)).collect());
            let (fa, fb, fc) = (mk(a), mk(b), mk(c));
            prop_assert_eq!(fa.convolve(&fb, &field).unwrap(), fb.convolve(&fa, &field).unwrap());
            let left = fa.convolve(&fb, &field).unwrap().convolve(&fc, &field).unwrap();
            let right = fa.convolve(&fb.convolve(&fc, &field).unwrap(), &field).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
