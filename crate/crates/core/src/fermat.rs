//! Combinatorial invariants of the Fermat variety
//! `X_m^r(p) : X_0^m + … + X_{r+1}^m = 0` over `F_q`.
//!
//! The Frobenius eigenvalues on middle cohomology are the Jacobi sums `j(α)`
//! indexed by `α ∈ A_{m,r}`. Their valuations are given combinatorially by
//! the Stickelberger exponents `A_H(α)`, from which the Newton slopes and the
//! height of the Artin-Mazur formal group follow without evaluating any
//! character sum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{gcd, inverse_mod, order_mod};
use crate::error::{Error, Result};
use crate::finite_field::FermatParams;

/// Default bound on `|A_{m,r}|`.
pub const DEFAULT_ALPHA_BUDGET: u64 = 1_000_000;

/// An element `(a_0, …, a_{r+1})` of `A_{m,r}`: `0 < a_i < m` and
/// `Σ a_i ≡ 0 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlphaVector {
    m: u32,
    components: Vec<u32>,
}

impl AlphaVector {
    pub fn new(m: u32, components: Vec<u32>) -> Result<Self> {
        if components.len() < 3 {
            return Err(Error::InvalidParameter(
                "an exponent vector needs r + 2 >= 3 components".into(),
            ));
        }
        if let Some(a) = components.iter().find(|&&a| a == 0 || a >= m) {
            return Err(Error::InvalidParameter(format!(
                "component {a} not in (0, {m})"
            )));
        }
        let sum: u64 = components.iter().map(|&a| a as u64).sum();
        if !sum.is_multiple_of(m as u64) {
            return Err(Error::InvalidParameter(format!(
                "components sum to {sum}, not a multiple of {m}"
            )));
        }
        Ok(AlphaVector { m, components })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.components.len() as u32 - 2
    }

    /// All components, `a_0` first.
    pub fn components(&self) -> &[u32] {
        &self.components
    }

    /// The exponents `a_1, …, a_{r+1}` entering the Jacobi sum.
    pub fn sum_exponents(&self) -> &[u32] {
        &self.components[1..]
    }

    /// `tα`, componentwise modulo `m`.
    pub fn scale(&self, t: i64) -> Result<Self> {
        let m = self.m as i64;
        let t = t.rem_euclid(m);
        if gcd(t as u64, m as u64) != 1 {
            return Err(Error::NotAUnit(t, self.m));
        }
        Ok(AlphaVector {
            m: self.m,
            components: self
                .components
                .iter()
                .map(|&a| ((a as i64 * t) % m) as u32)
                .collect(),
        })
    }

    /// `-α = (m - a_0, …, m - a_{r+1})`.
    pub fn negate(&self) -> Self {
        self.scale(-1).expect("-1 is a unit")
    }

    /// Lexicographically least element of the orbit `{tα : t ∈ group}`.
    pub fn orbit_representative(&self, group: &[u32]) -> (AlphaVector, u32) {
        group
            .iter()
            .map(|&t| (self.scale(t as i64).expect("group of units"), t))
            .min()
            .expect("non-empty group")
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `|A_{m,r}| = ((m-1)^{r+2} + (-1)^{r+2}(m-1)) / m`.
pub fn alpha_count(m: u32, r: u32) -> u128 {
    let base = (m - 1) as i128;
    let n = base.pow(r + 2);
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    ((n + sign * base) / m as i128) as u128
}

/// Lists `A_{m,r}` in lexicographic order.
pub fn enumerate_alpha(m: u32, r: u32) -> Result<Vec<AlphaVector>> {
    enumerate_alpha_with_budget(m, r, DEFAULT_ALPHA_BUDGET)
}

pub fn enumerate_alpha_with_budget(m: u32, r: u32, budget: u64) -> Result<Vec<AlphaVector>> {
    if m < 2 || r < 1 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2 and r >= 1, got m = {m}, r = {r}"
        )));
    }
    let needed = alpha_count(m, r);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "|A_{m,r}|",
            needed,
            budget: budget as u128,
        });
    }
    let free = r as usize + 1;
    let mut out = Vec::with_capacity(needed as usize);
    let mut head = vec![1u32; free];
    loop {
        let sum: u64 = head.iter().map(|&a| a as u64).sum();
        let last = ((m as u64 - sum % m as u64) % m as u64) as u32;
        if last != 0 {
            let mut components = head.clone();
            components.push(last);
            out.push(AlphaVector { m, components });
        }
        // odometer over the free components
        let mut i = free;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if head[i] + 1 < m {
                head[i] += 1;
                break;
            }
            head[i] = 1;
        }
    }
}

/// `H = {p^j mod m : 0 <= j < f}`, in the order of the powers.
pub fn subgroup_h(p: u64, m: u32) -> Result<Vec<u32>> {
    let f = order_mod(p, m as u64)?;
    let base = (p % m as u64) as u32;
    let mut out = Vec::with_capacity(f as usize);
    let mut t = 1u32;
    for _ in 0..f {
        out.push(t);
        t = ((t as u64 * base as u64) % m as u64) as u32;
    }
    Ok(out)
}

/// `A_H(α) = Σ_{t ∈ H} [ Σ_{j=1}^{r+1} ⟨t a_j / m⟩ ]`.
pub fn stickelberger_exponent(alpha: &AlphaVector, h: &[u32]) -> u32 {
    let m = alpha.m as u64;
    h.iter()
        .map(|&t| {
            let frac_sum: u64 = alpha
                .sum_exponents()
                .iter()
                .map(|&a| (t as u64 * a as u64) % m)
                .sum();
            (frac_sum / m) as u32
        })
        .sum()
}

/// `A_H(α)` for the subgroup generated by `p`.
pub fn stickelberger_ah(alpha: &AlphaVector, p: u64) -> Result<u32> {
    Ok(stickelberger_exponent(alpha, &subgroup_h(p, alpha.m)?))
}

/// Stickelberger exponents of all of `A_{m,r}`, computed once per `H`-orbit.
#[derive(Debug, Clone)]
pub struct StickelbergerTable {
    pub params: FermatParams,
    pub alphas: Vec<AlphaVector>,
    pub exponents: Vec<u32>,
}

impl StickelbergerTable {
    pub fn new(params: FermatParams) -> Result<Self> {
        let alphas = enumerate_alpha(params.m, params.r)?;
        let h = subgroup_h(params.p, params.m)?;
        let mut memo: HashMap<AlphaVector, u32> = HashMap::new();
        let exponents = alphas
            .iter()
            .map(|alpha| {
                let (rep, _) = alpha.orbit_representative(&h);
                *memo
                    .entry(rep)
                    .or_insert_with_key(|rep| stickelberger_exponent(rep, &h))
            })
            .collect();
        Ok(StickelbergerTable {
            params,
            alphas,
            exponents,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AlphaVector, u32)> {
        self.alphas.iter().zip(self.exponents.iter().copied())
    }
}

/// Height of a one-dimensional formal group: a positive integer or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeightValue {
    Finite(u32),
    Infinite,
}

impl HeightValue {
    /// `Finite(c)` for a positive count, `Infinite` for zero.
    pub fn from_count(c: u32) -> Self {
        if c == 0 {
            HeightValue::Infinite
        } else {
            HeightValue::Finite(c)
        }
    }

    pub fn is_infinite(self) -> bool {
        self == HeightValue::Infinite
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Finite(h) => write!(f, "{h}"),
            HeightValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HeightValue::Finite(h) => s.serialize_u32(*h),
            HeightValue::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Height together with the number of slope-deficient eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermatHeight {
    pub height: HeightValue,
    /// `#{α : A_H(α) < f}`.
    pub deficient: u32,
}

/// Height of the Artin-Mazur formal group from the slope-`[0, 1)` part of
/// the middle cohomology: the number of `α` with `A_H(α) < f`.
///
/// Only the Jacobi-sum eigenvalues are counted; the slopes `ord_P(q)/f`
/// of the algebraic part are integers `>= 1` when `r >= 2` and never fall
/// in `[0, 1)`.
pub fn height_fermat(params: &FermatParams) -> Result<FermatHeight> {
    let table = StickelbergerTable::new(*params)?;
    Ok(height_from_table(&table))
}

pub fn height_from_table(table: &StickelbergerTable) -> FermatHeight {
    let f = table.params.f;
    let deficient = table.exponents.iter().filter(|&&a| a < f).count() as u32;
    FermatHeight {
        height: HeightValue::from_count(deficient),
        deficient,
    }
}

/// The congruence prediction for Fermat Calabi-Yau varieties (`m = r + 2`,
/// `r >= 2`): height one iff `p ≡ 1 (mod m)`, otherwise infinite.
pub fn predicted_height(params: &FermatParams) -> HeightValue {
    if params.p % params.m as u64 == 1 {
        HeightValue::Finite(1)
    } else {
        HeightValue::Infinite
    }
}

/// Newton slopes `A_H(α)/f` with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeMultiset {
    pub f: u32,
    pub slopes: Vec<(Rational64, usize)>,
}

impl SlopeMultiset {
    pub fn from_exponents(f: u32, exponents: impl IntoIterator<Item = u32>) -> Self {
        let mut counts: BTreeMap<Rational64, usize> = BTreeMap::new();
        for a in exponents {
            *counts
                .entry(Rational64::new(a as i64, f as i64))
                .or_default() += 1;
        }
        SlopeMultiset {
            f,
            slopes: counts.into_iter().collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.slopes.iter().map(|(_, n)| n).sum()
    }

    pub fn multiplicity(&self, slope: Rational64) -> usize {
        self.slopes
            .iter()
            .find(|(s, _)| *s == slope)
            .map_or(0, |(_, n)| *n)
    }

    /// The multiset under `λ ↦ r - λ`.
    pub fn reflect(&self, r: u32) -> Self {
        let mut slopes: Vec<_> = self
            .slopes
            .iter()
            .map(|(s, n)| (Rational64::from_integer(r as i64) - s, *n))
            .collect();
        slopes.sort();
        SlopeMultiset { f: self.f, slopes }
    }
}

impl Serialize for SlopeMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            slope: String,
            multiplicity: usize,
        }
        s.collect_seq(self.slopes.iter().map(|(slope, n)| Entry {
            slope: slope.to_string(),
            multiplicity: *n,
        }))
    }
}

pub fn newton_slopes(params: &FermatParams) -> Result<SlopeMultiset> {
    let table = StickelbergerTable::new(*params)?;
    Ok(SlopeMultiset::from_exponents(params.f, table.exponents))
}

/// Primitive Hodge numbers of the middle cohomology: `α` contributes to
/// `H^{r-ℓ,ℓ}` with `ℓ = Σ_{j=0}^{r+1} ⟨a_j/m⟩ - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HodgeVector(pub Vec<u64>);

impl HodgeVector {
    pub fn get(&self, l: usize) -> u64 {
        self.0.get(l).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

pub fn hodge_numbers_fermat(m: u32, r: u32) -> Result<HodgeVector> {
    let mut h = vec![0u64; r as usize + 1];
    for alpha in enumerate_alpha(m, r)? {
        let weight: u32 = alpha.components.iter().sum::<u32>() / m;
        h[weight as usize - 1] += 1;
    }
    Ok(HodgeVector(h))
}

/// Whether `-1` lies in the subgroup of `(Z/m)^*` generated by `p`, i.e.
/// `p^ν ≡ -1 (mod m)` for some `ν >= 1`. Requires even `r` and `m >= 4`.
pub fn fully_rigged_fermat(p: u64, m: u32, r: u32) -> Result<bool> {
    if !r.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "dimension r = {r} must be even"
        )));
    }
    if m < 4 {
        return Err(Error::InvalidParameter(format!(
            "degree m = {m} must be >= 4"
        )));
    }
    Ok(subgroup_h(p, m)?.contains(&(m - 1)))
}

/// Artin-type supersingularity (infinite height) next to Shioda-type
/// supersingularity (fully rigged) for a Fermat Calabi-Yau of even dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArtinComparison {
    pub additive_type: bool,
    pub fully_rigged: bool,
}

impl ArtinComparison {
    /// True when the variety is of additive type but not fully rigged.
    pub fn separates_notions(&self) -> bool {
        self.additive_type && !self.fully_rigged
    }
}

pub fn artin_comparison(p: u64, m: u32, r: u32) -> Result<ArtinComparison> {
    if m != r + 2 {
        return Err(Error::InvalidParameter(format!(
            "need m = r + 2, got m = {m}, r = {r}"
        )));
    }
    let params = FermatParams::new(p, m, r)?;
    let fully_rigged = fully_rigged_fermat(p, m, r)?;
    let additive_type = height_fermat(&params)?.height.is_infinite();
    Ok(ArtinComparison {
        additive_type,
        fully_rigged,
    })
}

/// `h <= h^{r-1,1} + 1` for a finite height `h`.
pub fn hodge_bound_holds(height: HeightValue, hodge: &HodgeVector) -> bool {
    match height {
        HeightValue::Finite(h) => h as u64 <= hodge.get(1) + 1,
        HeightValue::Infinite => true,
    }
}

/// `t^{-1}` with `t·a ≡ 1` for every component, when `α` is a multiple of
/// `(1, …, 1)`.
pub fn diagonal_unit(alpha: &AlphaVector) -> Option<u32> {
    let a = alpha.components[0];
    if alpha.components.iter().all(|&x| x == a) {
        inverse_mod(a as i64, alpha.m)
    } else {
        None
    }
}
