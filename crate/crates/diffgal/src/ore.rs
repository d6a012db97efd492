//! Noncommutative arithmetic in the Ore ring K(x)[D] with D·a = a·D + a'.
//!
//! Products, formal adjoints, right Euclidean division, right GCDs, least
//! common left multiples, gauge transforms, and application of operators to
//! rational functions. Two canonical presentations are used throughout:
//! monic (head coefficient 1) and polynomial-cleared (polynomial
//! coefficients, overall content 1). Normalizing steps record what they did
//! in an [`OreProductTrace`] so Remark-style head-polynomial corrections stay
//! auditable.

use crate::field::{Field, Rationals};
use crate::poly::{content_q, Poly, PolyOps};
use crate::ratfn::{map_ratfn, ExpIntegrate, RatFn};
use num_traits::{Signed, Zero};

/// A linear differential operator Σ aᵢ(x)·Dⁱ; index i holds the coefficient
/// of Dⁱ.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp<F: Field> {
    pub coeffs: Vec<RatFn<F>>,
}

/// Which canonical presentation a result refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Monic,
    Cleared,
    AsIs,
}

/// Bookkeeping for normalizations applied during operator algebra: replaying
/// `factor` against the output reproduces the input.
#[derive(Debug, Clone)]
pub struct OreProductTrace<F: Field> {
    pub normalization: Normalization,
    /// The operator was left-multiplied by this rational function.
    pub correction: RatFn<F>,
}

impl<F: Field + PolyOps> DiffOp<F> {
    pub fn new(field: &F, mut coeffs: Vec<RatFn<F>>) -> Self {
        let _ = field;
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: vec![] }
    }

    pub fn one(field: &F) -> Self {
        DiffOp { coeffs: vec![RatFn::one(field)] }
    }

    /// The derivation D itself.
    pub fn d(field: &F) -> Self {
        DiffOp { coeffs: vec![RatFn::zero(), RatFn::one(field)] }
    }

    /// D^k.
    pub fn d_pow(field: &F, k: usize) -> Self {
        let mut coeffs = vec![RatFn::zero(); k + 1];
        coeffs[k] = RatFn::one(field);
        DiffOp { coeffs }
    }

    pub fn from_ratfn(r: RatFn<F>) -> Self {
        if r.is_zero() {
            DiffOp::zero()
        } else {
            DiffOp { coeffs: vec![r] }
        }
    }

    /// Build from polynomial coefficients, index = power of D.
    pub fn from_polys(field: &F, polys: &[Poly<F>]) -> Self {
        DiffOp::new(
            field,
            polys.iter().map(|p| RatFn::poly(field, p.clone())).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn ord(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, i: usize) -> RatFn<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn leading(&self) -> RatFn<F> {
        self.coeffs.last().cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(field, &other.coeff(i)));
        }
        DiffOp::new(field, out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(field, &other.coeff(i)));
        }
        DiffOp::new(field, out)
    }

    pub fn neg(&self, field: &F) -> Self {
        DiffOp { coeffs: self.coeffs.iter().map(|c| c.neg(field)).collect() }
    }

    pub fn mul_ratfn(&self, field: &F, r: &RatFn<F>) -> Self {
        if r.is_zero() {
            return DiffOp::zero();
        }
        DiffOp::new(field, self.coeffs.iter().map(|c| c.mul(field, r)).collect())
    }

    /// Ore product self · other (apply `other` first).
    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return DiffOp::zero();
        }
        // T_i = D^i ∘ other, built incrementally
        let mut acc = DiffOp::zero();
        let mut t = other.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(field, &t.mul_ratfn(field, a));
            }
            if i + 1 < self.coeffs.len() {
                t = t.d_compose(field);
            }
        }
        acc
    }

    /// D ∘ self = self·D + self'.
    fn d_compose(&self, field: &F) -> Self {
        let mut out = vec![RatFn::zero(); self.coeffs.len() + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j + 1] = out[j + 1].add(field, c);
            out[j] = out[j].add(field, &c.derivative(field));
        }
        DiffOp::new(field, out)
    }

    /// Formal adjoint Σ (−D)ⁱ ∘ aᵢ.
    pub fn adjoint(&self, field: &F) -> Self {
        let q = self.coeffs.len();
        if q == 0 {
            return DiffOp::zero();
        }
        let mut out = vec![RatFn::zero(); q];
        // (−D)^i ∘ a = Σ_j (−1)^i C(i,j) a^{(i−j)} D^j
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut deriv = a.clone();
            // j from i down to 0; a^{(i-j)}
            let mut ders = vec![a.clone()];
            for _ in 0..i {
                deriv = deriv.derivative(field);
                ders.push(deriv.clone());
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for j in 0..=i {
                let c = binomial_i64(i, j) * sign;
                let term = ders[i - j].mul_scalar(field, &field.from_i64(c));
                out[j] = out[j].add(field, &term);
            }
        }
        DiffOp::new(field, out)
    }

    /// Right Euclidean division: self = Q·divisor + R with ord R < ord divisor.
    pub fn right_divide(&self, field: &F, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "right division by zero operator");
        let mut rem = self.clone();
        let mut q = DiffOp::zero();
        let dlc = divisor.leading();
        let dord = divisor.order().unwrap();
        while !rem.is_zero() && rem.order().unwrap() >= dord {
            let k = rem.order().unwrap() - dord;
            let c = rem.leading().div(field, &dlc).unwrap();
            // term = c · D^k
            let mut term = DiffOp::d_pow(field, k).mul_ratfn(field, &c);
            // term must LEFT-multiply divisor: q += c D^k; rem -= (c D^k)·divisor
            let sub = term.mul(field, divisor);
            rem = rem.sub(field, &sub);
            q = q.add(field, &term);
            // numerical safety: ensure order decreased
            if !rem.is_zero() && rem.order().unwrap() >= dord + k + 1 {
                term = DiffOp::zero();
                let _ = term;
                unreachable!("right division failed to reduce order");
            }
        }
        (q, rem)
    }

    /// Left division via the adjoint anti-automorphism:
    /// self = divisor·Q + R.
    pub fn left_divide(&self, field: &F, divisor: &Self) -> (Self, Self) {
        let sa = self.adjoint(field);
        let da = divisor.adjoint(field);
        let (q, r) = sa.right_divide(field, &da);
        (q.adjoint(field), r.adjoint(field))
    }

    /// Right greatest common divisor by the Euclidean scheme, monic-normalized.
    pub fn rgcd(&self, field: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.right_divide(field, &b);
            a = b;
            b = r;
        }
        a.monic(field).0
    }

    /// Least common left multiple via the quotient-module method: the minimal
    /// operator annihilating ker(self) + ker(other).
    pub fn lclm(&self, field: &F, other: &Self) -> Self {
        assert!(!self.is_zero() && !other.is_zero());
        let na = self.order().unwrap();
        let nb = other.order().unwrap();
        let dim = na + nb;
        // vector = (D^k mod self, D^k mod other) as coefficient rows
        let mut vecs: Vec<Vec<RatFn<F>>> = vec![];
        let mut cur_a = DiffOp::one(field);
        let mut cur_b = DiffOp::one(field);
        for k in 0..=dim {
            let mut row = Vec::with_capacity(dim);
            for i in 0..na {
                row.push(cur_a.coeff(i));
            }
            for i in 0..nb {
                row.push(cur_b.coeff(i));
            }
            vecs.push(row);
            if k < dim {
                cur_a = cur_a.d_compose(field);
                let (_, ra) = cur_a.right_divide(field, self);
                cur_a = ra;
                cur_b = cur_b.d_compose(field);
                let (_, rb) = cur_b.right_divide(field, other);
                cur_b = rb;
            }
        }
        // find minimal k with vecs[k] dependent on previous
        for k in 1..=dim {
            let a_mat: Vec<Vec<RatFn<F>>> = (0..dim)
                .map(|coord| (0..k).map(|j| vecs[j][coord].clone()).collect())
                .collect();
            let b_vec: Vec<RatFn<F>> = (0..dim).map(|coord| vecs[k][coord].neg(field)).collect();
            if let Some(cs) = crate::linalg::solve_ratfn_exact(field, &a_mat, &b_vec) {
                let mut coeffs = cs;
                coeffs.push(RatFn::one(field));
                return DiffOp::new(field, coeffs);
            }
        }
        unreachable!("lclm always exists at order na+nb");
    }

    /// Monic form: divide by the head coefficient. Returns the trace.
    pub fn monic(&self, field: &F) -> (Self, OreProductTrace<F>) {
        if self.is_zero() {
            return (
                DiffOp::zero(),
                OreProductTrace { normalization: Normalization::Monic, correction: RatFn::one(field) },
            );
        }
        let lc = self.leading();
        let inv = lc.inv(field).unwrap();
        let out = self.mul_ratfn(field, &inv);
        (out, OreProductTrace { normalization: Normalization::Monic, correction: lc })
    }

    pub fn is_monic(&self, field: &F) -> bool {
        !self.is_zero() && self.leading() == RatFn::one(field)
    }

    /// Apply the operator to a rational function.
    pub fn apply_ratfn(&self, field: &F, y: &RatFn<F>) -> RatFn<F> {
        let mut acc = RatFn::zero();
        let mut der = y.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(field, &c.mul(field, &der));
            }
            if i + 1 < self.coeffs.len() {
                der = der.derivative(field);
            }
        }
        acc
    }

    /// Gauge transform: the operator whose solutions are f·y for solutions y
    /// of self, where f'/f = u. Computed by substituting D → D − u.
    pub fn gauge_transform(&self, field: &F, u: &RatFn<F>) -> Self {
        // (D - u)^i built incrementally
        let mut acc = DiffOp::zero();
        let shifted = DiffOp::new(field, vec![u.neg(field), RatFn::one(field)]);
        let mut pow = DiffOp::one(field);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(field, &pow.mul_ratfn(field, a));
            }
            if i + 1 < self.coeffs.len() {
                pow = shifted.mul(field, &pow);
            }
        }
        acc
    }

    /// Log-derivative of the Wronskian: −a_{q−1}/a_q.
    pub fn wronskian_logderivative(&self, field: &F) -> RatFn<F> {
        let q = match self.order() {
            Some(q) if q >= 1 => q,
            _ => return RatFn::zero(),
        };
        self.coeff(q - 1).div(field, &self.coeff(q)).unwrap().neg(field)
    }

    /// Substitute x → x + c in all coefficients (base-point translation).
    pub fn translate(&self, field: &F, c: &F::Elem) -> Self {
        DiffOp::new(
            field,
            self.coeffs
                .iter()
                .map(|r| {
                    if r.is_zero() {
                        RatFn::zero()
                    } else {
                        RatFn::new(
                            field,
                            r.num.taylor_shift(field, c),
                            r.den.taylor_shift(field, c),
                        )
                    }
                })
                .collect(),
        )
    }

    /// Substitute x → 1/x and clear: the operator at infinity.
    /// D_x = −t² D_t under x = 1/t.
    pub fn at_infinity(&self, field: &F) -> Self {
        // build by composing: each a_i(x) D^i → a_i(1/t) (−t² D_t)^i
        let t = RatFn::x(field);
        let minus_t2 = RatFn::poly(field, Poly::new(field, vec![field.zero(), field.zero(), field.neg(&field.one())]));
        let gen = DiffOp::new(field, vec![RatFn::zero(), minus_t2]);
        let inv_t = t.inv(field).unwrap();
        let mut acc = DiffOp::zero();
        let mut pow = DiffOp::one(field);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                let ai = a.compose_ratfn(field, &inv_t);
                acc = acc.add(field, &pow.mul_ratfn(field, &ai));
            }
            if i + 1 < self.coeffs.len() {
                pow = gen.mul(field, &pow);
            }
        }
        acc
    }

    pub fn to_string_pretty(&self, field: &F) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string_pretty(field, "x");
            let t = match i {
                0 => cs,
                1 => format!("({})*Dx", cs),
                _ => format!("({})*Dx^{}", cs, i),
            };
            parts.push(t);
        }
        parts.join(" + ")
    }
}

impl DiffOp<Rationals> {
    /// Polynomial-cleared form over ℚ: all coefficients polynomials with
    /// overall content 1 and positive head. Returns the trace.
    pub fn cleared(&self, field: &Rationals) -> (Vec<Poly<Rationals>>, OreProductTrace<Rationals>) {
        if self.is_zero() {
            return (
                vec![],
                OreProductTrace { normalization: Normalization::Cleared, correction: RatFn::one(field) },
            );
        }
        let mut lcm = Poly::one(field);
        for c in &self.coeffs {
            let g = lcm.gcd(field, &c.den);
            lcm = lcm.mul(field, &c.den.div_exact(field, &g));
        }
        let mut polys: Vec<Poly<Rationals>> = self
            .coeffs
            .iter()
            .map(|c| c.num.mul(field, &lcm.div_exact(field, &c.den)))
            .collect();
        // overall content
        let mut content = num_rational::BigRational::new(0.into(), 1.into());
        for p in &polys {
            let c = content_q(p);
            content = if content.numer().is_zero() {
                c
            } else {
                rational_gcd(&content, &c)
            };
        }
        if polys.last().map(|p| p.leading_coeff(field).is_negative()).unwrap_or(false) {
            content = -content;
        }
        if !content.is_zero() {
            let inv = content.recip();
            for p in polys.iter_mut() {
                *p = p.mul_scalar(field, &inv);
            }
        }
        // corr · cleared = original (left multiplication by rational function)
        let corr = RatFn::constant(field, content)
            .mul(field, &RatFn::new(field, Poly::one(field), lcm));
        (
            polys,
            OreProductTrace { normalization: Normalization::Cleared, correction: corr },
        )
    }

    /// Reduce an operator over ℚ mod p; `None` when a denominator dies.
    pub fn mod_p(&self, fp: &crate::field::PrimeField) -> Option<DiffOp<crate::field::PrimeField>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(map_ratfn(fp, c)?);
        }
        Some(DiffOp::new(fp, out))
    }
}

fn rational_gcd(a: &num_rational::BigRational, b: &num_rational::BigRational) -> num_rational::BigRational {
    use num_integer::Integer;
    // gcd(a/b, c/d) = gcd(a d, c b) / (b d) reduced; standard content gcd
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    let den = a.denom() * b.denom();
    num_rational::BigRational::new(num, den)
}

fn binomial_i64(n: usize, k: usize) -> i64 {
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i as i64 + 1);
    }
    acc
}

/// Wronskian rationality: true iff exp(∫ −a_{q−1}/a_q) is a rational function.
pub fn is_wronskian_rational<F: Field + PolyOps + ExpIntegrate>(field: &F, l: &DiffOp<F>) -> bool {
    let w = l.wronskian_logderivative(field);
    F::exp_integral_rational(field, &w).is_some()
}

/// The Wronskian itself when rational (up to a constant).
pub fn rational_wronskian<F: Field + PolyOps + ExpIntegrate>(
    field: &F,
    l: &DiffOp<F>,
) -> Option<RatFn<F>> {
    let w = l.wronskian_logderivative(field);
    F::exp_integral_rational(field, &w)
}

/// Verification-only variant of the duality relation on the other side:
/// checks adjoint(L)·S = adjoint(S)·L exactly.
pub fn verify_dual_intertwiner<F: Field + PolyOps>(field: &F, l: &DiffOp<F>, s: &DiffOp<F>) -> bool {
    let lhs = l.adjoint(field).mul(field, s);
    let rhs = s.adjoint(field).mul(field, l);
    lhs.sub(field, &rhs).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use rand::{Rng, SeedableRng};

    type Q = Rationals;

    fn q() -> Q {
        Rationals
    }

    fn op_q(polys: &[&[i64]]) -> DiffOp<Q> {
        let f = q();
        DiffOp::from_polys(&f, &polys.iter().map(|c| Poly::from_i64(&f, c)).collect::<Vec<_>>())
    }

    #[test]
    fn leibniz_base_case() {
        // D·x = x·D + 1
        let f = q();
        let d = DiffOp::d(&f);
        let x = DiffOp::from_ratfn(RatFn::x(&f));
        let prod = d.mul(&f, &x);
        assert_eq!(prod, op_q(&[&[1], &[0, 1]]));
    }

    #[test]
    fn difference_of_squares() {
        // (D+1)(D−1) = D²−1
        let f = q();
        let a = op_q(&[&[1], &[1]]);
        let b = op_q(&[&[-1], &[1]]);
        assert_eq!(a.mul(&f, &b), op_q(&[&[-1], &[0], &[1]]));
    }

    #[test]
    fn adjoint_basics() {
        let f = q();
        // adjoint(D) = −D
        let d = DiffOp::d(&f);
        assert_eq!(d.adjoint(&f), op_q(&[&[0], &[-1]]));
        // adjoint(x·D) = −x·D − 1
        let xd = DiffOp::new(&f, vec![RatFn::zero(), RatFn::x(&f)]);
        assert_eq!(xd.adjoint(&f), op_q(&[&[-1], &[0, -1]]));
    }

    #[test]
    fn adjoint_involutive_and_antimultiplicative_random() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rand_op = |rng: &mut rand_chacha::ChaCha8Rng| {
            let ord = rng.gen_range(1..4usize);
            let coeffs: Vec<RatFn<PrimeField>> = (0..=ord)
                .map(|_| {
                    RatFn::new(
                        &fp,
                        Poly::new(&fp, (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..997)).collect()),
                        Poly::new(&fp, vec![1, rng.gen_range(0..9)]),
                    )
                })
                .collect();
            DiffOp::new(&fp, coeffs)
        };
        for _ in 0..1000 {
            let a = rand_op(&mut rng);
            if a.is_zero() {
                continue;
            }
            let adj2 = a.adjoint(&fp).adjoint(&fp);
            assert_eq!(adj2, a);
        }
        for _ in 0..200 {
            let a = rand_op(&mut rng);
            let b = rand_op(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let lhs = a.mul(&fp, &b).adjoint(&fp);
            let rhs = b.adjoint(&fp).mul(&fp, &a.adjoint(&fp));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn right_division_examples() {
        let f = q();
        // (D²−1) ÷ (D−1) = (D+1, 0)
        let a = op_q(&[&[-1], &[0], &[1]]);
        let b = op_q(&[&[-1], &[1]]);
        let (quo, rem) = a.right_divide(&f, &b);
        assert_eq!(quo, op_q(&[&[1], &[1]]));
        assert!(rem.is_zero());
        // D² ÷ (x·D−1): Q = (1/x)·D, R = 0
        let d2 = DiffOp::d_pow(&f, 2);
        let xd1 = DiffOp::new(&f, vec![RatFn::from_i64(&f, -1), RatFn::x(&f)]);
        let (quo, rem) = d2.right_divide(&f, &xd1);
        assert!(rem.is_zero());
        let back = quo.mul(&f, &xd1);
        assert_eq!(back, d2);
    }

    #[test]
    fn product_division_random_mod_p() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let l3 = DiffOp::new(
                &fp,
                (0..4)
                    .map(|_| RatFn::poly(&fp, Poly::new(&fp, (0..3).map(|_| rng.gen_range(1..100)).collect())))
                    .collect(),
            );
            let l2 = DiffOp::new(
                &fp,
                (0..3)
                    .map(|_| RatFn::poly(&fp, Poly::new(&fp, (0..3).map(|_| rng.gen_range(1..100)).collect())))
                    .collect(),
            );
            let prod = l3.mul(&fp, &l2);
            let (quo, rem) = prod.right_divide(&fp, &l2);
            assert!(rem.is_zero());
            assert_eq!(quo, l3);
        }
    }

    #[test]
    fn rgcd_and_lclm_basics() {
        let f = q();
        // rgcd(D², D) = D
        let g = DiffOp::d_pow(&f, 2).rgcd(&f, &DiffOp::d(&f));
        assert_eq!(g, DiffOp::d(&f));
        // lclm(D−1, D+1) = D²−1 up to left unit
        let a = op_q(&[&[-1], &[1]]);
        let b = op_q(&[&[1], &[1]]);
        let m = a.lclm(&f, &b);
        let (mm, _) = m.monic(&f);
        assert_eq!(mm, op_q(&[&[-1], &[0], &[1]]));
        // both right-divide the lclm
        assert!(mm.right_divide(&f, &a).1.is_zero());
        assert!(mm.right_divide(&f, &b).1.is_zero());
    }

    #[test]
    fn gauge_transform_examples() {
        let f = q();
        // gauge(D, u) = D − u
        let u = RatFn::new(&f, Poly::from_i64(&f, &[2]), Poly::from_i64(&f, &[1, 3]));
        let g = DiffOp::d(&f).gauge_transform(&f, &u);
        assert_eq!(g, DiffOp::new(&f, vec![u.neg(&f), RatFn::one(&f)]));
        // gauge(gauge(L, u), −u) = L
        let l = op_q(&[&[1, 2], &[0, 0, 3], &[1]]);
        let back = l.gauge_transform(&f, &u).gauge_transform(&f, &u.neg(&f));
        assert_eq!(back, l);
    }

    #[test]
    fn apply_and_wronskian() {
        let f = q();
        // (D−1) applied to x → 1−x
        let dm1 = op_q(&[&[-1], &[1]]);
        let y = RatFn::x(&f);
        assert_eq!(dm1.apply_ratfn(&f, &y), RatFn::poly(&f, Poly::from_i64(&f, &[1, -1])));
        // L = D²: W-logderiv 0, rational
        let d2 = DiffOp::d_pow(&f, 2);
        assert!(d2.wronskian_logderivative(&f).is_zero());
        assert!(is_wronskian_rational(&f, &d2));
        // L = D² + (1/(2x))D: W = x^{−1/2}, not rational
        let l = DiffOp::new(
            &f,
            vec![
                RatFn::zero(),
                RatFn::new(&f, Poly::one(&f), Poly::from_i64(&f, &[0, 2])),
                RatFn::one(&f),
            ],
        );
        assert!(!is_wronskian_rational(&f, &l));
    }

    #[test]
    fn order2_rational_wronskian_conjugates_adjoint() {
        // order-2 L with rational W satisfies L·W = W·adjoint(L)
        let f = q();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            // W = x^a (1-4x)^b, p1 = -W'/W, p0 random rational
            let a = rng.gen_range(-3..4i64);
            let b = rng.gen_range(-3..4i64);
            let w = RatFn::x(&f)
                .pow_i64(&f, a)
                .unwrap()
                .mul(&f, &RatFn::poly(&f, Poly::from_i64(&f, &[1, -4])).pow_i64(&f, b).unwrap());
            let p1 = w.derivative(&f).div(&f, &w).unwrap().neg(&f);
            let p0 = RatFn::new(
                &f,
                Poly::from_i64(&f, &[rng.gen_range(-5..5), rng.gen_range(-5..5)]),
                Poly::from_i64(&f, &[1, rng.gen_range(-3..3)]),
            );
            let l = DiffOp::new(&f, vec![p0, p1, RatFn::one(&f)]);
            let w_op = DiffOp::from_ratfn(w.clone());
            let lhs = l.mul(&f, &w_op);
            let rhs = w_op.mul(&f, &l.adjoint(&f));
            assert!(lhs.sub(&f, &rhs).is_zero());
        }
    }

    #[test]
    fn left_divide_roundtrip() {
        let f = q();
        let a = op_q(&[&[1], &[2, 1], &[1]]);
        let b = op_q(&[&[3], &[1]]);
        let prod = b.mul(&f, &a);
        let (quo, rem) = prod.left_divide(&f, &b);
        assert!(rem.is_zero());
        assert_eq!(quo, a);
    }

    #[test]
    fn cleared_form_roundtrip() {
        let f = q();
        let l = DiffOp::new(
            &f,
            vec![
                RatFn::new(&f, Poly::from_i64(&f, &[1, 2]), Poly::from_i64(&f, &[0, 0, 3])),
                RatFn::new(&f, Poly::from_i64(&f, &[5]), Poly::from_i64(&f, &[0, 1])),
                RatFn::one(&f),
            ],
        );
        let (polys, trace) = l.cleared(&f);
        // replay: correction · cleared == original
        let cleared_op = DiffOp::from_polys(&f, &polys);
        let back = cleared_op.mul_ratfn(&f, &trace.correction);
        assert_eq!(back, l);
        assert_eq!(trace.normalization, Normalization::Cleared);
    }
}
