//! Truncated local solutions x^ρ · Σ_k F_k(x) · ln(x)^k.
//!
//! The exponent offset ρ is kept as an exact rational even for mod-p
//! coefficients, so half-integer exponents stay visible in the mod-p regime.
//! `blocks[k]` holds the power series multiplying ln(x)^k, all of the same
//! truncation length.

use crate::field::Field;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct LogSeries<F: Field> {
    /// Exponent offset ρ: the series represents x^ρ · Σ blocks[k] ln(x)^k.
    pub rho: BigRational,
    /// blocks[k][n] = coefficient of x^(ρ+n) ln(x)^k.
    pub blocks: Vec<Vec<F::Elem>>,
    /// Number of valid coefficients per block.
    pub trunc: usize,
}

impl<F: Field> LogSeries<F> {
    pub fn zero(field: &F, trunc: usize) -> Self {
        LogSeries {
            rho: BigRational::zero(),
            blocks: vec![vec![field.zero(); trunc]],
            trunc,
        }
    }

    /// Plain power series (log level 0, ρ = 0) from coefficients.
    pub fn from_coeffs(field: &F, mut coeffs: Vec<F::Elem>, trunc: usize) -> Self {
        coeffs.resize(trunc, field.zero());
        LogSeries { rho: BigRational::zero(), blocks: vec![coeffs], trunc }
    }

    pub fn max_log_power(&self, field: &F) -> usize {
        for k in (0..self.blocks.len()).rev() {
            if self.blocks[k].iter().any(|c| !field.is_zero(c)) {
                return k;
            }
        }
        0
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|c| field.is_zero(c)))
    }

    /// Is this a log-free series with integer exponent ≥ 0 (an analytic
    /// candidate)?
    pub fn is_analytic(&self, field: &F) -> bool {
        self.max_log_power(field) == 0
            && self.rho.is_integer()
            && !self.rho.is_negative()
    }

    pub fn coeff(&self, field: &F, k: usize, n: usize) -> F::Elem {
        self.blocks
            .get(k)
            .and_then(|b| b.get(n))
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    /// Coefficient of x^e ln^k when e − ρ is a nonnegative integer in range.
    pub fn coeff_at_exponent(&self, field: &F, k: usize, e: &BigRational) -> F::Elem {
        let diff = e - &self.rho;
        if !diff.is_integer() || diff.is_negative() {
            return field.zero();
        }
        let n = diff.to_integer();
        if n >= BigInt::from(self.trunc) {
            return field.zero();
        }
        let n = usize::try_from(n).unwrap();
        self.coeff(field, k, n)
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        LogSeries {
            rho: self.rho.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|c| field.mul(c, s)).collect())
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Add two series whose exponents differ by an integer. The result is
    /// truncated to the overlap of valid windows.
    pub fn add(&self, field: &F, other: &Self) -> Self {
        let diff = &other.rho - &self.rho;
        assert!(diff.is_integer(), "exponent offsets differ by a non-integer");
        let (base, hi, shift) = if diff.is_negative() {
            let s = usize::try_from(-diff.to_integer()).unwrap();
            (other, self, s)
        } else {
            let s = usize::try_from(diff.to_integer()).unwrap();
            (self, other, s)
        };
        // hi starts `shift` places above base
        let trunc = base.trunc.min(hi.trunc + shift);
        let levels = base.blocks.len().max(hi.blocks.len());
        let mut blocks = Vec::with_capacity(levels);
        for k in 0..levels {
            let mut b = vec![field.zero(); trunc];
            for (n, slot) in b.iter_mut().enumerate() {
                let mut v = base.coeff(field, k, n);
                if n >= shift {
                    v = field.add(&v, &hi.coeff(field, k, n - shift));
                }
                *slot = v;
            }
            blocks.push(b);
        }
        LogSeries { rho: base.rho.clone(), blocks, trunc }
    }

    /// Product of two log-series (log levels convolve, exponents add).
    pub fn mul(&self, field: &F, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let levels = self.blocks.len() + other.blocks.len() - 1;
        let mut blocks = vec![vec![field.zero(); trunc]; levels];
        for (k1, b1) in self.blocks.iter().enumerate() {
            for (k2, b2) in other.blocks.iter().enumerate() {
                let out = &mut blocks[k1 + k2];
                for n1 in 0..trunc.min(b1.len()) {
                    if field.is_zero(&b1[n1]) {
                        continue;
                    }
                    let lim = trunc - n1;
                    for n2 in 0..lim.min(b2.len()) {
                        let t = field.mul(&b1[n1], &b2[n2]);
                        out[n1 + n2] = field.add(&out[n1 + n2], &t);
                    }
                }
            }
        }
        LogSeries { rho: &self.rho + &other.rho, blocks, trunc }
    }

    /// d/dx. The exponent offset drops by one; the same number of
    /// coefficients stays valid because the offset absorbs the shift.
    pub fn derivative(&self, field: &F) -> Self {
        let mut blocks = vec![vec![field.zero(); self.trunc]; self.blocks.len()];
        for k in 0..self.blocks.len() {
            for n in 0..self.trunc {
                // (ρ+n)·c_{k,n} + (k+1)·c_{k+1,n}
                let c = self.coeff(field, k, n);
                let mut v = field.zero();
                if !field.is_zero(&c) {
                    let e = &self.rho + BigRational::from_integer(n.into());
                    let fe = field
                        .embed_rational(&e)
                        .expect("exponent must embed in the coefficient field");
                    v = field.mul(&fe, &c);
                }
                if k + 1 < self.blocks.len() {
                    let t = field.mul(
                        &field.from_i64((k + 1) as i64),
                        &self.coeff(field, k + 1, n),
                    );
                    v = field.add(&v, &t);
                }
                blocks[k][n] = v;
            }
        }
        LogSeries {
            rho: &self.rho - BigRational::one(),
            blocks,
            trunc: self.trunc,
        }
    }

    /// Multiply by a polynomial given as a coefficient slice (x^0 first).
    pub fn mul_poly_coeffs(&self, field: &F, poly: &[F::Elem]) -> Self {
        let mut blocks = vec![vec![field.zero(); self.trunc]; self.blocks.len()];
        for (k, b) in self.blocks.iter().enumerate() {
            for (j, pc) in poly.iter().enumerate() {
                if field.is_zero(pc) || j >= self.trunc {
                    continue;
                }
                for n in 0..(self.trunc - j).min(b.len()) {
                    let t = field.mul(pc, &b[n]);
                    blocks[k][n + j] = field.add(&blocks[k][n + j], &t);
                }
            }
        }
        LogSeries { rho: self.rho.clone(), blocks, trunc: self.trunc }
    }

    /// Normalize representation: strip trailing zero log blocks and pull the
    /// valuation into ρ.
    pub fn normalized(&self, field: &F) -> Self {
        let mut blocks = self.blocks.clone();
        while blocks.len() > 1
            && blocks
                .last()
                .map(|b| b.iter().all(|c| field.is_zero(c)))
                .unwrap_or(false)
        {
            blocks.pop();
        }
        let mut val = self.trunc;
        for b in &blocks {
            for (n, c) in b.iter().enumerate() {
                if !field.is_zero(c) {
                    val = val.min(n);
                    break;
                }
            }
        }
        if val == self.trunc || val == 0 {
            return LogSeries { rho: self.rho.clone(), blocks, trunc: self.trunc };
        }
        let trunc = self.trunc - val;
        let blocks = blocks.iter().map(|b| b[val..].to_vec()).collect();
        LogSeries {
            rho: &self.rho + BigRational::from_integer(val.into()),
            blocks,
            trunc,
        }
    }

    /// Truncate to fewer terms.
    pub fn truncated(&self, n: usize) -> Self {
        let trunc = self.trunc.min(n);
        LogSeries {
            rho: self.rho.clone(),
            blocks: self.blocks.iter().map(|b| b[..trunc.min(b.len())].to_vec()).collect(),
            trunc,
        }
    }

    /// First `n` coefficients of the log-free block (for display and tests).
    pub fn analytic_prefix(&self, field: &F, n: usize) -> Vec<F::Elem> {
        (0..n.min(self.trunc)).map(|i| self.coeff(field, 0, i)).collect()
    }
}

/// A set of local solutions at the origin for one operator.
#[derive(Debug, Clone)]
pub struct SolutionBasis<F: Field> {
    pub members: Vec<LogSeries<F>>,
    /// Exponent at which each member entered (its leading exponent).
    pub entry_exponents: Vec<BigRational>,
}

impl<F: Field> SolutionBasis<F> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Multiset of maximal log powers, one entry per member (sorted).
    pub fn log_profile(&self, field: &F) -> Vec<usize> {
        let mut v: Vec<usize> = self.members.iter().map(|m| m.max_log_power(field)).collect();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn derivative_of_exponential_series() {
        // d/dx Σ x^n/n! = same series
        let f = q();
        let mut c = vec![];
        let mut fact = f.one();
        for n in 0..10u64 {
            if n > 0 {
                fact = f.mul(&fact, &f.from_i64(n as i64));
            }
            c.push(f.inv(&fact).unwrap());
        }
        let s = LogSeries::from_coeffs(&f, c, 10);
        let d = s.derivative(&f).normalized(&f);
        for n in 0..9 {
            assert_eq!(d.coeff(&f, 0, n), s.coeff(&f, 0, n), "n={}", n);
        }
    }

    #[test]
    fn derivative_with_log_block() {
        // d/dx (ln x) = 1/x: series x^0·ln(x) -> x^{-1}·1
        let f = q();
        let s = LogSeries {
            rho: BigRational::zero(),
            blocks: vec![vec![f.zero(); 4], {
                let mut b = vec![f.zero(); 4];
                b[0] = f.one();
                b
            }],
            trunc: 4,
        };
        let d = s.derivative(&f).normalized(&f);
        assert_eq!(d.rho, BigRational::from_integer((-1).into()));
        assert_eq!(d.coeff(&f, 0, 0), f.one());
        assert_eq!(d.max_log_power(&f), 0);
    }

    #[test]
    fn product_convolves_logs_and_exponents() {
        let f = q();
        // (x^{1/2}·1) * (x^{1/2}·ln x) = x·ln x
        let half = BigRational::new(1.into(), 2.into());
        let a = LogSeries {
            rho: half.clone(),
            blocks: vec![{
                let mut b = vec![f.zero(); 4];
                b[0] = f.one();
                b
            }],
            trunc: 4,
        };
        let b = LogSeries {
            rho: half,
            blocks: vec![vec![f.zero(); 4], {
                let mut v = vec![f.zero(); 4];
                v[0] = f.one();
                v
            }],
            trunc: 4,
        };
        let p = a.mul(&f, &b);
        assert_eq!(p.rho, BigRational::one());
        assert_eq!(p.max_log_power(&f), 1);
        assert_eq!(p.coeff(&f, 1, 0), f.one());
    }

    #[test]
    fn add_aligns_integer_offsets() {
        let f = q();
        let a = LogSeries {
            rho: BigRational::zero(),
            blocks: vec![vec![f.one(), f.zero(), f.zero(), f.zero()]],
            trunc: 4,
        };
        let b = LogSeries {
            rho: BigRational::from_integer(2.into()),
            blocks: vec![vec![f.one(), f.one()]],
            trunc: 2,
        };
        let s = a.add(&f, &b);
        assert_eq!(s.rho, BigRational::zero());
        assert_eq!(s.trunc, 4);
        assert_eq!(s.coeff(&f, 0, 0), f.one());
        assert_eq!(s.coeff(&f, 0, 2), f.one());
        assert_eq!(s.coeff(&f, 0, 3), f.one());
    }
}
