//! Coefficient fields: exact rationals and word-size prime fields.
//!
//! Every algebraic structure in this crate is generic over a [`Field`]
//! context object that owns the arithmetic. Two contexts are provided:
//! [`Rationals`] (arbitrary-precision `BigRational` elements) and
//! [`PrimeField`] (a fixed odd prime `p < 2^62`, elements are `u64`).
//!
//! The module also carries the modular plumbing used by the linear-algebra
//! layer: deterministic Miller-Rabin, prime streams, CRT accumulation and
//! rational-number reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Default prime for mod-p runs, `2^31 - 1`. Retry with another prime when a
/// spurious exponent collides with an integer.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Runtime description of a coefficient field, used by file formats and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldCtx {
    Rationals,
    PrimeField { modulus: u64 },
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => write!(f, "rational"),
            FieldCtx::PrimeField { modulus } => write!(f, "prime {}", modulus),
        }
    }
}

/// Field arithmetic context. Elements are plain data; the context performs
/// all operations, so a `u64` can serve as a prime-field element.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Self::Elem {
        let d = self.from_i64(den);
        let i = self.inv(&d).expect("denominator must be a unit in the field");
        self.mul(&self.from_i64(num), &i)
    }

    /// Image of an exact rational in the field; `None` when the denominator
    /// is not a unit (e.g. divisible by p).
    fn embed_rational(&self, q: &BigRational) -> Option<Self::Elem>;

    fn ctx(&self) -> FieldCtx;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// Parse an element from `fmt_elem` output (integers and `a/b` fractions).
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The exact rational field ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn embed_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn ctx(&self) -> FieldCtx {
        FieldCtx::Rationals
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse_elem(&self, s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        } else {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// The prime field 𝔽_p for an odd prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1u64 << 62), "modulus out of range");
        assert!(is_prime_u64(p), "modulus must be prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let m = n.mod_floor(&p);
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        let mut t = t % self.p as i128;
        if t < 0 {
            t += self.p as i128;
        }
        Some(t as u64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn embed_rational(&self, q: &BigRational) -> Option<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        let di = self.inv(&den)?;
        Some(self.mul(&num, &di))
    }
    fn ctx(&self) -> FieldCtx {
        FieldCtx::PrimeField { modulus: self.p }
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Option<u64> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            let dv = self.reduce_i64(d);
            let di = self.inv(&dv)?;
            Some(self.mul(&self.reduce_i64(n), &di))
        } else {
            let sign = s.starts_with('-');
            let digits = s.trim_start_matches('-');
            let mut acc: u64 = 0;
            for c in digits.chars() {
                let d = c.to_digit(10)? as u64;
                acc = self.add(&self.mul(&acc, &10), &d);
            }
            Some(if sign { self.neg(&acc) } else { acc })
        }
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, a, m);
        }
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest prime below `start`, or below `start - 1` if `start` itself
/// is prime and `strictly_below` is set.
pub fn prev_prime(start: u64, strictly_below: bool) -> u64 {
    let mut n = if strictly_below { start - 1 } else { start };
    if n % 2 == 0 {
        n -= 1;
    }
    while !is_prime_u64(n) {
        n -= 2;
    }
    n
}

/// A descending stream of primes for multi-prime modular computations.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    /// Primes just below `2^62`, for CRT-based reconstruction.
    pub fn large() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }

    /// Primes starting at the given bound (inclusive).
    pub fn from(bound: u64) -> Self {
        PrimeStream { next: bound }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        let p = prev_prime(self.next, false);
        self.next = p - 2;
        Some(p)
    }
}

/// Incremental CRT accumulator over `BigInt`, keeping residues in the
/// symmetric range `(-m/2, m/2]`.
#[derive(Debug, Clone)]
pub struct CrtAccum {
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl CrtAccum {
    pub fn new() -> Self {
        CrtAccum { residue: BigInt::zero(), modulus: BigInt::one() }
    }

    pub fn push(&mut self, r: u64, p: u64) {
        let p_big = BigInt::from(p);
        let r_big = BigInt::from(r);
        if self.modulus.is_one() {
            self.residue = r_big;
            self.modulus = p_big;
        } else {
            // x = residue + modulus * t,  t = (r - residue)/modulus mod p
            let pm = self.modulus.mod_floor(&p_big);
            let inv = mod_inverse_bigint(&pm, &p_big).expect("coprime moduli");
            let diff = (&r_big - self.residue.mod_floor(&p_big)).mod_floor(&p_big);
            let t = (diff * inv).mod_floor(&p_big);
            self.residue = &self.residue + &self.modulus * t;
            self.modulus = &self.modulus * p_big;
        }
        // symmetric representative
        let half = &self.modulus >> 1;
        if self.residue > half {
            self.residue -= &self.modulus;
        }
    }
}

impl Default for CrtAccum {
    fn default() -> Self {
        Self::new()
    }
}

fn mod_inverse_bigint(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Rational-number reconstruction: the unique `n/d` with
/// `n ≡ d·residue (mod modulus)`, `|n|, d ≤ sqrt(modulus/2)`, if it exists.
pub fn rational_reconstruct(residue: &BigInt, modulus: &BigInt) -> Option<BigRational> {
    if residue.is_zero() {
        return Some(BigRational::zero());
    }
    let r0 = residue.mod_floor(modulus);
    let bound2: BigInt = modulus / 2;
    // lattice reduction via EEA, stop when remainder^2 < m/2
    let (mut r_prev, mut r_cur) = (modulus.clone(), r0);
    let (mut t_prev, mut t_cur) = (BigInt::zero(), BigInt::one());
    while &r_cur * &r_cur > bound2 {
        if r_cur.is_zero() {
            return None;
        }
        let q = &r_prev / &r_cur;
        let r_next = &r_prev - &q * &r_cur;
        let t_next = &t_prev - &q * &t_cur;
        r_prev = std::mem::replace(&mut r_cur, r_next);
        t_prev = std::mem::replace(&mut t_cur, t_next);
    }
    if t_cur.is_zero() || &t_cur * &t_cur * BigInt::from(2) > *modulus {
        return None;
    }
    if t_cur.gcd(&r_cur).is_one() {
        let (n, d) = if t_cur.sign() == Sign::Minus {
            (-r_cur, -t_cur)
        } else {
            (r_cur, t_cur)
        };
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Reduce a rational mod p; `None` if the denominator vanishes mod p.
pub fn rational_mod_p(q: &BigRational, fp: &PrimeField) -> Option<u64> {
    fp.embed_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(DEFAULT_PRIME);
        let a = f.from_i64(-5);
        assert_eq!(a, DEFAULT_PRIME - 5);
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), 1);
        assert_eq!(f.from_ratio(1, 2), (DEFAULT_PRIME + 1) / 2);
    }

    #[test]
    fn miller_rabin_agrees_with_small_sieve() {
        let mut primes = vec![];
        for n in 2..200u64 {
            if (2..n).all(|d| n % d != 0) {
                primes.push(n);
            }
        }
        for n in 2..200u64 {
            assert_eq!(is_prime_u64(n), primes.contains(&n), "n={}", n);
        }
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(!is_prime_u64((1 << 62) - 1));
    }

    #[test]
    fn crt_and_rational_reconstruction_roundtrip() {
        let want = BigRational::new(BigInt::from(-123456789i64), BigInt::from(987654321i64));
        let mut acc = CrtAccum::new();
        for p in PrimeStream::large().take(3) {
            let fp = PrimeField::new(p);
            acc.push(fp.embed_rational(&want).unwrap(), p);
        }
        let got = rational_reconstruct(&acc.residue, &acc.modulus).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn parse_and_format_elements() {
        let q = Rationals;
        let e = q.parse_elem("-3/4").unwrap();
        assert_eq!(q.fmt_elem(&e), "-3/4");
        let f = PrimeField::new(101);
        assert_eq!(f.parse_elem("-1").unwrap(), 100);
        assert_eq!(f.parse_elem("1/2").unwrap(), 51);
    }
}
