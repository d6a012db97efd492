//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored lowest degree first with a nonzero leading
//! coefficient (the zero polynomial has an empty vector). Over ℚ the gcd
//! runs on primitive integer polynomials to keep coefficients small.

use crate::field::{Field, PrimeField, Rationals};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F: Field> {
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map(|c| field.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one(field: &F) -> Self {
        Poly { coeffs: vec![field.one()] }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &F) -> Self {
        Poly { coeffs: vec![field.zero(), field.one()] }
    }

    /// Build from integer coefficients, lowest degree first.
    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree as isize with zero polynomial mapped to -1, for bookkeeping.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading_coeff(&self, field: &F) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| field.zero())
    }

    pub fn coeff(&self, field: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_one(&self, field: &F) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == field.one()
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Poly::new(field, out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.sub(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Poly::new(field, out)
    }

    pub fn neg(&self, field: &F) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect() }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &t);
            }
        }
        Poly::new(field, out)
    }

    pub fn mul_scalar(&self, field: &F, s: &F::Elem) -> Self {
        if field.is_zero(s) {
            return Poly::zero();
        }
        Poly::new(field, self.coeffs.iter().map(|c| field.mul(c, s)).collect())
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, field: &F, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out: Vec<F::Elem> = Vec::with_capacity(self.coeffs.len() + k);
        out.resize(k, field.zero());
        out.extend(self.coeffs.iter().cloned());
        Poly { coeffs: out }
    }

    /// Quotient and remainder; panics on zero divisor.
    pub fn divmod(&self, field: &F, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.deg() < divisor.deg() {
            return (Poly::zero(), self.clone());
        }
        let dlc = divisor.leading_coeff(field);
        let dinv = field.inv(&dlc).expect("leading coefficient must be a unit");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let qlen = rem.len() - dd;
        let mut q = vec![field.zero(); qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + dd].clone();
            if field.is_zero(&top) {
                continue;
            }
            let c = field.mul(&top, &dinv);
            q[i] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = field.mul(&c, d);
                rem[i + j] = field.sub(&rem[i + j], &t);
            }
        }
        (Poly::new(field, q), Poly::new(field, rem))
    }

    pub fn rem(&self, field: &F, divisor: &Self) -> Self {
        self.divmod(field, divisor).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, field: &F, divisor: &Self) -> Self {
        let (q, r) = self.divmod(field, divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn derivative(&self, field: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(field.mul(&field.from_i64(i as i64), c));
        }
        Poly::new(field, out)
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// Composition self(other(x)).
    pub fn compose(&self, field: &F, other: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(field, other);
            acc = acc.add(field, &Poly::constant(field, c.clone()));
        }
        acc
    }

    /// Taylor shift: p(x + c).
    pub fn taylor_shift(&self, field: &F, c: &F::Elem) -> Self {
        if self.is_zero() || field.is_zero(c) {
            return self.clone();
        }
        // Horner on p(x) = a_n x^n + ... with x -> (x + c)
        let mut acc = Poly::zero();
        let shift = Poly::new(field, vec![c.clone(), field.one()]);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(field, &shift);
            acc = acc.add(field, &Poly::constant(field, a.clone()));
        }
        acc
    }

    pub fn pow(&self, field: &F, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    pub fn make_monic(&self, field: &F) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(&self.leading_coeff(field)).unwrap();
        self.mul_scalar(field, &inv)
    }

    /// gcd, canonically normalized (monic over 𝔽_p, primitive with positive
    /// leading coefficient over ℚ).
    pub fn gcd(&self, field: &F, other: &Self) -> Self
    where
        F: PolyOps,
    {
        F::poly_gcd(field, self, other)
    }

    /// Canonical scalar normalization: monic over 𝔽_p, primitive integer
    /// coefficients with positive leading coefficient over ℚ.
    pub fn canonicalize(&self, field: &F) -> Self
    where
        F: PolyOps,
    {
        F::poly_canonicalize(field, self)
    }

    /// Squarefree part (product of distinct irreducible factors).
    pub fn squarefree_part(&self, field: &F) -> Self
    where
        F: PolyOps,
    {
        if self.deg() <= 0 {
            return Poly::one(field);
        }
        let d = self.derivative(field);
        let g = self.gcd(field, &d);
        self.div_exact(field, &g).canonicalize(field)
    }

    /// Yun's squarefree decomposition: returns [(g_i, i)] with
    /// `self = unit * prod g_i^i`, each `g_i` squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self, field: &F) -> Vec<(Self, usize)>
    where
        F: PolyOps,
    {
        let mut out = vec![];
        if self.deg() <= 0 {
            return out;
        }
        let f = self.canonicalize(field);
        let fp = f.derivative(field);
        let mut a = f.gcd(field, &fp);
        let mut b = f.div_exact(field, &a);
        let mut c = fp.div_exact(field, &a);
        let mut i = 1usize;
        loop {
            let d = c.sub(field, &b.derivative(field));
            if b.deg() <= 0 {
                break;
            }
            a = b.gcd(field, &d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(field, &a);
            c = d.div_exact(field, &a);
            i += 1;
        }
        out
    }

    /// Interpolate the unique polynomial of degree < points.len() through the
    /// given (x, y) pairs. Points must be distinct.
    pub fn interpolate(field: &F, points: &[(F::Elem, F::Elem)]) -> Self {
        // Newton's divided differences
        let n = points.len();
        let mut coef: Vec<F::Elem> = points.iter().map(|(_, y)| y.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = field.sub(&coef[i], &coef[i - 1]);
                let den = field.sub(&points[i].0, &points[i - j].0);
                coef[i] = field.div(&num, &den).expect("distinct interpolation points");
            }
        }
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            let lin = Poly::new(field, vec![field.neg(&points[i].0), field.one()]);
            acc = acc.mul(field, &lin);
            acc = acc.add(field, &Poly::constant(field, coef[i].clone()));
        }
        acc
    }

    pub fn to_string_pretty(&self, field: &F, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let cs = field.fmt_elem(c);
            let term = match i {
                0 => cs,
                1 => {
                    if cs == "1" {
                        var.to_string()
                    } else if cs == "-1" {
                        format!("-{}", var)
                    } else {
                        format!("{}*{}", cs, var)
                    }
                }
                _ => {
                    if cs == "1" {
                        format!("{}^{}", var, i)
                    } else if cs == "-1" {
                        format!("-{}^{}", var, i)
                    } else {
                        format!("{}*{}^{}", cs, var, i)
                    }
                }
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (k, t) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(t);
            } else if let Some(st) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(st);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

/// Field-specific polynomial plumbing (gcd strategy and canonical scaling).
pub trait PolyOps: Field + Sized {
    fn poly_gcd(field: &Self, a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self>;
    fn poly_canonicalize(field: &Self, a: &Poly<Self>) -> Poly<Self>;
}

impl PolyOps for PrimeField {
    fn poly_gcd(field: &Self, a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.make_monic(field)
    }

    fn poly_canonicalize(field: &Self, a: &Poly<Self>) -> Poly<Self> {
        a.make_monic(field)
    }
}

impl PolyOps for Rationals {
    fn poly_gcd(field: &Self, a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        if a.is_zero() {
            return Self::poly_canonicalize(field, b);
        }
        if b.is_zero() {
            return Self::poly_canonicalize(field, a);
        }
        let u = to_primitive_zpoly(a);
        let v = to_primitive_zpoly(b);
        // primitive PRS for small inputs, modular gcd otherwise
        let small = (u.len().min(v.len()) <= 8)
            || (u.len().max(v.len()) <= 24
                && u.iter().chain(v.iter()).all(|c| c.bits() <= 128));
        if small {
            let mut u = u;
            let mut v = v;
            if u.len() < v.len() {
                std::mem::swap(&mut u, &mut v);
            }
            while !v.is_empty() {
                let r = zpoly_pseudo_rem(&u, &v);
                u = v;
                v = zpoly_primitive(r);
            }
            return from_zpoly(field, &u);
        }
        modular_gcd_zz(field, &u, &v)
    }

    fn poly_canonicalize(field: &Self, a: &Poly<Self>) -> Poly<Self> {
        if a.is_zero() {
            return Poly::zero();
        }
        from_zpoly(field, &to_primitive_zpoly(a))
    }
}

/// Modular gcd of primitive integer polynomials: monic gcds mod word-size
/// primes, CRT-lifted, rationally reconstructed, certified by exact division.
fn modular_gcd_zz(field: &Rationals, u: &[BigInt], v: &[BigInt]) -> Poly<Rationals> {
    use crate::field::{rational_reconstruct, CrtAccum, PrimeField, PrimeStream};
    let up = from_zpoly(field, u);
    let vp = from_zpoly(field, v);
    let mut primes = PrimeStream::large();
    let mut best_deg = usize::MAX;
    let mut accums: Vec<CrtAccum> = vec![];
    let mut since = 0usize;
    for _ in 0..512 {
        let p = primes.next().unwrap();
        let fp = PrimeField::new(p);
        let (Some(ap), Some(bp)) = (map_poly(&fp, &up), map_poly(&fp, &vp)) else {
            continue;
        };
        // skip primes that drop the leading coefficient
        if ap.deg() != up.deg() || bp.deg() != vp.deg() {
            continue;
        }
        let g = PrimeField::poly_gcd(&fp, &ap, &bp);
        let d = g.deg().max(0) as usize;
        if g.deg() <= 0 {
            return Poly::one(field); // certified coprime
        }
        if d < best_deg {
            best_deg = d;
            accums = vec![CrtAccum::new(); d + 1];
            since = 0;
        } else if d > best_deg {
            continue; // unlucky prime
        }
        for (i, acc) in accums.iter_mut().enumerate() {
            acc.push(g.coeff(&fp, i), p);
        }
        since += 1;
        if since >= 1 {
            // try reconstruction
            let mut coeffs = Vec::with_capacity(best_deg + 1);
            let mut ok = true;
            for acc in &accums {
                match rational_reconstruct(&acc.residue, &acc.modulus) {
                    Some(c) => coeffs.push(c),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let cand = Poly::new(field, coeffs).canonicalize(field);
                if !cand.is_zero()
                    && up.divmod(field, &cand).1.is_zero()
                    && vp.divmod(field, &cand).1.is_zero()
                {
                    return cand;
                }
            }
        }
    }
    // fall back to the slow certain path
    let mut uu = u.to_vec();
    let mut vv = v.to_vec();
    if uu.len() < vv.len() {
        std::mem::swap(&mut uu, &mut vv);
    }
    while !vv.is_empty() {
        let r = zpoly_pseudo_rem(&uu, &vv);
        uu = vv;
        vv = zpoly_primitive(r);
    }
    from_zpoly(field, &uu)
}

// --- integer polynomial helpers for the ℚ gcd path ---

fn to_primitive_zpoly(a: &Poly<Rationals>) -> Vec<BigInt> {
    let mut den_lcm = BigInt::one();
    for c in &a.coeffs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut z: Vec<BigInt> = a
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    zpoly_primitive_in_place(&mut z);
    z
}

fn zpoly_primitive(mut z: Vec<BigInt>) -> Vec<BigInt> {
    zpoly_primitive_in_place(&mut z);
    z
}

fn zpoly_primitive_in_place(z: &mut Vec<BigInt>) {
    while z.last().map(|c| c.is_zero()).unwrap_or(false) {
        z.pop();
    }
    if z.is_empty() {
        return;
    }
    let mut content = BigInt::zero();
    for c in z.iter() {
        content = content.gcd(c);
        if content.is_one() {
            break;
        }
    }
    if z.last().unwrap().is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for c in z.iter_mut() {
            *c = &*c / &content;
        }
    }
}

fn zpoly_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        // r = lb*r - lr*x^(dr-db)*b
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            let idx = dr - db + j;
            let t = &lr * bc;
            r[idx] = &r[idx] - t;
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
    }
    r
}

fn from_zpoly(_field: &Rationals, z: &[BigInt]) -> Poly<Rationals> {
    Poly {
        coeffs: z.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
    }
}

/// Content of a ℚ-polynomial: the positive rational c with `self = c * primitive`.
pub fn content_q(a: &Poly<Rationals>) -> BigRational {
    if a.is_zero() {
        return BigRational::zero();
    }
    let mut den_lcm = BigInt::one();
    for c in &a.coeffs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut num_gcd = BigInt::zero();
    for c in &a.coeffs {
        num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
    }
    BigRational::new(num_gcd, den_lcm)
}

/// Map a ℚ-polynomial into another field (e.g. reduce mod p). `None` if any
/// coefficient fails to embed.
pub fn map_poly<F: Field>(field: &F, a: &Poly<Rationals>) -> Option<Poly<F>> {
    let mut out = Vec::with_capacity(a.coeffs.len());
    for c in &a.coeffs {
        out.push(field.embed_rational(c)?);
    }
    Some(Poly::new(field, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gcd_textbook_case() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let q = Rationals;
        let a = Poly::from_i64(&q, &[-1, 0, 1]);
        let b = Poly::from_i64(&q, &[-1, 1]);
        let g = a.gcd(&q, &b);
        assert_eq!(g, Poly::from_i64(&q, &[-1, 1]));
    }

    #[test]
    fn product_textbook_case() {
        // (x^2+1)(x-1) = x^3 - x^2 + x - 1
        let q = Rationals;
        let a = Poly::from_i64(&q, &[1, 0, 1]);
        let b = Poly::from_i64(&q, &[-1, 1]);
        assert_eq!(a.mul(&q, &b), Poly::from_i64(&q, &[-1, 1, -1, 1]));
    }

    #[test]
    fn a7_is_squarefree() {
        // A7(F2) = 1 + x - 24x^2 - 145x^3 - 192x^4 + 96x^5 + 128x^7
        let q = Rationals;
        let a7 = Poly::from_i64(&q, &[1, 1, -24, -145, -192, 96, 0, 128]);
        let g = a7.gcd(&q, &a7.derivative(&q));
        assert_eq!(g.deg(), 0);
    }

    #[test]
    fn divmod_reconstruction_random_mod_p() {
        let f = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let a = Poly::new(
                &f,
                (0..rng.gen_range(0..10)).map(|_| rng.gen_range(0..DEFAULT_PRIME)).collect(),
            );
            let b = Poly::new(
                &f,
                (0..rng.gen_range(1..8)).map(|_| rng.gen_range(0..DEFAULT_PRIME)).collect(),
            );
            if b.is_zero() {
                continue;
            }
            let (qq, r) = a.divmod(&f, &b);
            assert!(r.deg() < b.deg());
            let back = qq.mul(&f, &b).add(&f, &r);
            assert_eq!(back, a);
        }
    }

    #[test]
    fn ring_axioms_random_mod_p() {
        let f = PrimeField::new(101);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            Poly::new(&f, (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..101)).collect())
        };
        for _ in 0..1000 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let c = rand_poly(&mut rng);
            let ab_c = a.mul(&f, &b).mul(&f, &c);
            let a_bc = a.mul(&f, &b.mul(&f, &c));
            assert_eq!(ab_c, a_bc);
            let dist = a.mul(&f, &b.add(&f, &c));
            let dist2 = a.mul(&f, &b).add(&f, &a.mul(&f, &c));
            assert_eq!(dist, dist2);
        }
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let q = Rationals;
        // x^3 (1-16x)^2
        let x = Poly::x(&q);
        let lin = Poly::from_i64(&q, &[1, -16]);
        let f = x.pow(&q, 3).mul(&q, &lin.pow(&q, 2));
        let decomp = f.squarefree_decomposition(&q);
        assert_eq!(decomp.len(), 2);
        let (g2, m2) = &decomp[0];
        let (g3, m3) = &decomp[1];
        assert_eq!((*m2, *m3), (2, 3));
        assert_eq!(g2.canonicalize(&q), Poly::from_i64(&q, &[-1, 16]).canonicalize(&q));
        assert_eq!(g3.canonicalize(&q), x.canonicalize(&q));
    }

    #[test]
    fn taylor_shift_and_compose() {
        let q = Rationals;
        let p = Poly::from_i64(&q, &[1, 2, 3]);
        let c = q.from_i64(5);
        let shifted = p.taylor_shift(&q, &c);
        // check at a few points: shifted(x) = p(x+5)
        for t in [-2i64, 0, 1, 3] {
            let x = q.from_i64(t);
            let lhs = shifted.eval(&q, &x);
            let rhs = p.eval(&q, &q.from_i64(t + 5));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = PrimeField::new(101);
        let p = Poly::from_i64(&f, &[3, 1, 4, 1, 5]);
        let pts: Vec<(u64, u64)> = (0..5).map(|i| (i as u64, p.eval(&f, &(i as u64)))).collect();
        let q = Poly::interpolate(&f, &pts);
        assert_eq!(p, q);
    }
}
