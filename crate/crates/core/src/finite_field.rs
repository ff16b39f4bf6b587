//! Finite fields `F_q = F_{p^f}` with a canonical modulus, a canonical
//! primitive generator and dense discrete-logarithm tables.
//!
//! Elements are encoded as integers `Σ c_i p^i` where `c_0 + c_1 x + … +
//! c_{f-1} x^{f-1}` is the element's polynomial representative. The modulus
//! is the first monic irreducible polynomial in the order of its coefficient
//! tuple `(c_{f-1}, …, c_0)`, which coincides with the numeric order of the
//! same encoding; the generator is the least encoding of multiplicative
//! order `q - 1`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, order_mod, prime_factors};
use crate::error::{Error, Result};

/// Default upper bound on the field size for which tables are built.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 24;

/// Parameters of the Fermat variety `X_m^r(p)` over `F_q`, `q = p^f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FermatParams {
    pub p: u64,
    pub m: u32,
    pub r: u32,
    /// Multiplicative order of `p` modulo `m`.
    pub f: u32,
    pub q: u64,
}

impl FermatParams {
    pub fn new(p: u64, m: u32, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 3 {
            return Err(Error::InvalidParameter(format!(
                "degree m = {m} must be >= 3"
            )));
        }
        if r < 1 {
            return Err(Error::InvalidParameter("dimension r must be >= 1".into()));
        }
        let f = order_mod(p, m as u64)?;
        let q = p
            .checked_pow(f)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{f} overflows")))?;
        Ok(FermatParams { p, m, r, f, q })
    }

    /// True when `m = r + 2`, the Calabi-Yau case.
    pub fn is_calabi_yau(&self) -> bool {
        self.m == self.r + 2
    }
}

/// An element of `F_q`, stored as its integer encoding `Σ c_i p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElement(pub u32);

impl FqElement {
    pub const ZERO: FqElement = FqElement(0);
    pub const ONE: FqElement = FqElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field `F_{p^f}` with its discrete-log tables.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term up, length `f + 1`.
    modulus: Vec<u32>,
    generator: FqElement,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `exp[k] = generator^k` for `k in 0..q-1`.
    exp: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElement {
        self.generator
    }

    /// The full discrete-log table, indexed by element encoding.
    pub fn dlog_table(&self) -> &[u32] {
        &self.log
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> {
        (0..self.q).map(FqElement)
    }

    pub fn units(&self) -> impl Iterator<Item = FqElement> {
        (1..self.q).map(FqElement)
    }

    /// Coefficients `c_0, …, c_{f-1}` of an element.
    pub fn coeffs(&self, x: FqElement) -> Vec<u32> {
        let mut v = x.0;
        (0..self.f)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FqElement {
        debug_assert!(coeffs.len() <= self.f as usize);
        FqElement(
            coeffs
                .iter()
                .rev()
                .fold(0u32, |acc, &c| acc * self.p + c % self.p),
        )
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElement {
        FqElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        if self.f == 1 {
            let s = a.0 + b.0;
            return FqElement(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.f {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        FqElement(out)
    }

    pub fn neg(&self, a: FqElement) -> FqElement {
        if self.f == 1 {
            return FqElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.f {
            let c = x % self.p;
            out += ((self.p - c) % self.p) * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        FqElement(out)
    }

    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        if a.is_zero() || b.is_zero() {
            return FqElement::ZERO;
        }
        let n = self.q as u64 - 1;
        let k = (self.log[a.index()] as u64 + self.log[b.index()] as u64) % n;
        FqElement(self.exp[k as usize])
    }

    pub fn pow(&self, a: FqElement, e: u64) -> FqElement {
        if a.is_zero() {
            return if e == 0 {
                FqElement::ONE
            } else {
                FqElement::ZERO
            };
        }
        let n = self.q as u64 - 1;
        let k = (self.log[a.index()] as u64 % n) * (e % n) % n;
        FqElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FqElement) -> Result<FqElement> {
        let l = self.dlog(a)? as u64;
        let n = self.q as u64 - 1;
        Ok(FqElement(self.exp[((n - l) % n) as usize]))
    }

    /// The absolute Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, a: FqElement) -> FqElement {
        self.pow(a, self.p as u64)
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> FqElement {
        FqElement(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm to the base of the canonical generator.
    pub fn dlog(&self, x: FqElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::ZeroLog);
        }
        Ok(self.log[x.index()])
    }
}

/// Builds `F_{p^f}` with the default table budget.
pub fn build_field(p: u64, f: u32) -> Result<FiniteField> {
    build_field_with_budget(p, f, DEFAULT_TABLE_BUDGET)
}

pub fn build_field_with_budget(p: u64, f: u32, max_q: u64) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidParameter(
            "extension degree must be >= 1".into(),
        ));
    }
    let q = (p as u128).checked_pow(f).unwrap_or(u128::MAX);
    let budget = max_q.min(u32::MAX as u64);
    if q > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "field size q",
            needed: q,
            budget: budget as u128,
        });
    }
    let p32 = p as u32;
    let q32 = q as u32;
    let modulus = smallest_irreducible(p, f);
    let ring = PolyRing {
        p,
        modulus: &modulus,
    };

    let n = q as u64 - 1;
    let cofactors: Vec<u64> = prime_factors(n).into_iter().map(|l| n / l).collect();
    let generator = (1..q32)
        .find(|&cand| {
            let g = ring.decode(cand, f);
            cofactors.iter().all(|&e| !ring.is_one(&ring.pow(&g, e)))
        })
        .expect("F_q^* is cyclic");

    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![NO_LOG; q as usize];
    let g = ring.decode(generator, f);
    let mut cur = vec![1u64];
    for k in 0..n {
        let enc = ring.encode(&cur, f);
        exp.push(enc);
        log[enc as usize] = k as u32;
        cur = ring.mul(&cur, &g);
    }
    if !ring.is_one(&cur) {
        return Err(Error::Inconsistent("generator order check".into()));
    }

    Ok(FiniteField {
        p: p32,
        f,
        q: q32,
        modulus: modulus.iter().map(|&c| c as u32).collect(),
        generator: FqElement(generator),
        log,
        exp,
    })
}

/// The lexicographically first monic irreducible of degree `f` over `F_p`.
/// Degree one gives `x`.
fn smallest_irreducible(p: u64, f: u32) -> Vec<u64> {
    let count = p.pow(f);
    for tail in 0..count {
        let mut poly = Vec::with_capacity(f as usize + 1);
        let mut v = tail;
        for _ in 0..f {
            poly.push(v % p);
            v /= p;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Rabin's test: `g` of degree `n` is irreducible iff `x^{p^n} ≡ x` and
/// `gcd(x^{p^{n/l}} - x, g) = 1` for every prime `l | n`.
pub(crate) fn is_irreducible(g: &[u64], p: u64) -> bool {
    let n = g.len() - 1;
    if n == 1 {
        return true;
    }
    if g[0] == 0 {
        return false;
    }
    let ring = PolyRing { p, modulus: g };
    let x = vec![0, 1];
    let frob_iter = |k: u64| {
        let mut t = x.clone();
        for _ in 0..k {
            t = ring.pow(&t, p);
        }
        t
    };
    if trim(frob_iter(n as u64)) != x {
        return false;
    }
    for l in prime_factors(n as u64) {
        let mut t = frob_iter(n as u64 / l);
        t.resize(t.len().max(2), 0);
        t[1] = (t[1] + p - 1) % p;
        let d = poly_gcd(trim(t), g.to_vec(), p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = crate::arith::pow_mod(b[db], p - 2, p);
    while a.len() > db && !(a.len() == 1 && a[0] == 0) {
        let top = a.len() - 1;
        let c = a[top] * lead_inv % p;
        if c != 0 {
            for (x, &bi) in a[top - db..].iter_mut().zip(b) {
                *x = (*x + p - c * bi % p) % p;
            }
        }
        a.pop();
        if a.is_empty() {
            a.push(0);
        }
    }
    trim(a)
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = trim(a);
    b = trim(b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `F_p[x]/(modulus)` for table construction.
struct PolyRing<'a> {
    p: u64,
    modulus: &'a [u64],
}

impl PolyRing<'_> {
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        poly_rem(prod, self.modulus, self.p)
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = poly_rem(a.to_vec(), self.modulus, self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &[u64]) -> bool {
        a.len() == 1 && a[0] == 1
    }

    fn decode(&self, mut v: u32, f: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(f as usize);
        for _ in 0..f {
            out.push(v as u64 % self.p);
            v /= self.p as u32;
        }
        trim(out)
    }

    fn encode(&self, a: &[u64], f: u32) -> u32 {
        let mut out = 0u64;
        for i in (0..f as usize).rev() {
            out = out * self.p + a.get(i).copied().unwrap_or(0);
        }
        out as u32
    }
}

const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CachedField {
    format_version: u32,
    p: u32,
    f: u32,
    modulus: Vec<u32>,
    generator: u32,
    dlog: Vec<u32>,
}

/// On-disk cache of field tables keyed by `(p, f)` and the format version.
#[derive(Debug, Clone)]
pub struct FieldCache {
    dir: PathBuf,
}

impl FieldCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FieldCache { dir: dir.into() }
    }

    pub fn path_for(&self, p: u64, f: u32) -> PathBuf {
        self.dir
            .join(format!("field-v{CACHE_FORMAT_VERSION}-p{p}-f{f}.json"))
    }

    /// Loads the field from the cache, building and storing it on a miss.
    /// A corrupt or mismatched entry is rebuilt.
    pub fn load_or_build(&self, p: u64, f: u32) -> Result<FiniteField> {
        let path = self.path_for(p, f);
        if let Some(field) = read_cached(&path, p, f) {
            return Ok(field);
        }
        let field = build_field(p, f)?;
        self.store(&field)?;
        Ok(field)
    }

    pub fn store(&self, field: &FiniteField) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let entry = CachedField {
            format_version: CACHE_FORMAT_VERSION,
            p: field.p,
            f: field.f,
            modulus: field.modulus.clone(),
            generator: field.generator.0,
            dlog: field.log.clone(),
        };
        let path = self.path_for(field.p as u64, field.f);
        let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
        let body = serde_json::to_vec(&entry).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&tmp, body).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))
    }
}

fn read_cached(path: &Path, p: u64, f: u32) -> Option<FiniteField> {
    let bytes = fs::read(path).ok()?;
    let entry: CachedField = serde_json::from_slice(&bytes).ok()?;
    if entry.format_version != CACHE_FORMAT_VERSION || entry.p as u64 != p || entry.f != f {
        return None;
    }
    let q = (p as u32).checked_pow(f)?;
    if entry.dlog.len() != q as usize || entry.modulus.len() != f as usize + 1 {
        return None;
    }
    let modulus: Vec<u64> = entry.modulus.iter().map(|&c| c as u64).collect();
    if modulus != smallest_irreducible(p, f) {
        return None;
    }
    let mut exp = vec![NO_LOG; q as usize - 1];
    for (x, &k) in entry.dlog.iter().enumerate().skip(1) {
        let slot = exp.get_mut(k as usize)?;
        if *slot != NO_LOG {
            return None;
        }
        *slot = x as u32;
    }
    if exp.first() != Some(&1) || exp.get(1 % (q as usize - 1)) != Some(&entry.generator) {
        return None;
    }
    // spot-check the table against polynomial arithmetic
    let ring = PolyRing {
        p,
        modulus: &modulus,
    };
    let g = ring.decode(entry.generator, f);
    let step = ((q as usize - 1) / 64).max(1);
    for k in (0..q as usize - 2).step_by(step) {
        let next = ring.mul(&ring.decode(exp[k], f), &g);
        if ring.encode(&next, f) != exp[k + 1] {
            return None;
        }
    }
    let mut dlog = entry.dlog;
    dlog[0] = NO_LOG;
    Some(FiniteField {
        p: p as u32,
        f,
        q,
        modulus: entry.modulus,
        generator: FqElement(entry.generator),
        log: dlog,
        exp,
    })
}

/// True if `gcd(p, m) = 1` and `m | q - 1`.
pub fn supports_character_of_order(field: &FiniteField, m: u32) -> bool {
    gcd(field.p as u64, m as u64) == 1 && (field.q - 1).is_multiple_of(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_generators() {
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.generator(), FqElement(2));
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(f2.generator(), FqElement(1));
        assert_eq!(f2.dlog(FqElement(1)).unwrap(), 0);
    }

    #[test]
    fn f9_has_order_eight_generator() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        // x^2 + 1 is the first irreducible quadratic over F_3
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let g = f9.generator();
        let mut x = FqElement::ONE;
        for k in 1..=8 {
            x = f9.mul(x, g);
            assert_eq!(x == FqElement::ONE, k == 8, "g^{k}");
        }
        assert_eq!(f9.dlog_table().len(), 9);
    }

    #[test]
    fn dlog_examples() {
        let f = build_field(2, 4).unwrap();
        let g = f.generator();
        assert_eq!(f.dlog(FqElement::ONE).unwrap(), 0);
        assert_eq!(f.dlog(g).unwrap(), 1);
        assert_eq!(f.dlog(f.mul(g, g)).unwrap(), 2);
        assert_eq!(f.dlog(FqElement::ZERO), Err(Error::ZeroLog));
    }

    #[test]
    fn rejects_composite_and_oversized() {
        assert_eq!(build_field(9, 1), Err(Error::NotPrime(9)));
        assert!(matches!(
            build_field_with_budget(2, 20, 1 << 16),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rabin_test_matches_trial_division() {
        // brute force: a degree-n polynomial is reducible iff it has a monic
        // factor of degree in 1..=n/2
        fn divides(d: &[u64], g: &[u64], p: u64) -> bool {
            let r = poly_rem(g.to_vec(), d, p);
            r.len() == 1 && r[0] == 0
        }
        for (p, n) in [(2u64, 4u32), (3, 3), (3, 4), (5, 2)] {
            for tail in 0..p.pow(n) {
                let mut g: Vec<u64> = (0..n).map(|i| tail / p.pow(i) % p).collect();
                g.push(1);
                let mut reducible = false;
                for d in 1..=n / 2 {
                    for t in 0..p.pow(d) {
                        let mut h: Vec<u64> = (0..d).map(|i| t / p.pow(i) % p).collect();
                        h.push(1);
                        if divides(&h, &g, p) {
                            reducible = true;
                        }
                    }
                }
                assert_eq!(is_irreducible(&g, p), !reducible, "{g:?} mod {p}");
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for (p, f) in [(2u64, 6u32), (3, 4), (5, 3), (7, 2)] {
            let field = build_field(p, f).unwrap();
            let fixed: Vec<_> = field
                .elements()
                .filter(|&x| field.frobenius(x) == x)
                .collect();
            assert_eq!(fixed.len() as u64, p);
            assert!(fixed.iter().all(|x| (x.0 as u64) < p));
            for x in field.elements().step_by(7) {
                for y in field.elements().step_by(5) {
                    assert_eq!(
                        field.frobenius(field.add(x, y)),
                        field.add(field.frobenius(x), field.frobenius(y))
                    );
                    assert_eq!(
                        field.frobenius(field.mul(x, y)),
                        field.mul(field.frobenius(x), field.frobenius(y))
                    );
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(build_field(3, 5).unwrap(), build_field(3, 5).unwrap());
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FieldCache::new(dir.path());
        let built = cache.load_or_build(5, 2).unwrap();
        assert!(cache.path_for(5, 2).exists());
        let loaded = cache.load_or_build(5, 2).unwrap();
        assert_eq!(built, loaded);
        fs::write(cache.path_for(5, 2), b"{\"format_version\": 1}").unwrap();
        assert_eq!(cache.load_or_build(5, 2).unwrap(), built);
    }

    #[test]
    fn fermat_params_validation() {
        let fp = FermatParams::new(2, 5, 3).unwrap();
        assert_eq!((fp.f, fp.q), (4, 16));
        assert!(fp.is_calabi_yau());
        assert_eq!(FermatParams::new(10, 5, 3), Err(Error::NotPrime(10)));
        assert!(matches!(
            FermatParams::new(5, 5, 3),
            Err(Error::NotCoprime { .. })
        ));
        assert!(FermatParams::new(5, 2, 3).is_err());
        assert!(FermatParams::new(5, 3, 0).is_err());
    }
}
