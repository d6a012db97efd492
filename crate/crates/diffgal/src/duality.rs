//! Homomorphisms of an operator with its adjoint: closed-form intertwiners
//! for orders three and four, Calabi-Yau order-drop conditions, the
//! self-adjoint decomposition L = r·(Y_L·Y_R + 1), and invariant
//! quadratic/alternating first integrals.
//!
//! All closed-form coefficient formulas are written in monic coordinates;
//! inputs are monic-normalized up front and the trace records the head that
//! was divided out. Certificates verify L·R − adjoint(R)·adjoint(L) = 0
//! exactly, and re-verify the identity on random rational arguments as an
//! independent path.

use crate::construct::{companion, tensor_connection, ConnectionSystem, KxSolve, TensorSpec};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ore::{rational_wronskian, DiffOp};
use crate::poly::PolyOps;
use crate::ratfn::{ExpIntegrate, RatFn};
use crate::ratsol::{rational_solutions_inhomogeneous, rational_system_solutions, ScalarNullspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Differential Galois group verdict from the self-duality diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaloisVerdict {
    /// Orthogonal group SO(q, C).
    SO(usize),
    /// Symplectic group Sp(q, C); q is necessarily even.
    Sp(usize),
    /// No verdict: a required rational object is missing.
    None,
}

/// A verified homomorphism L·R = adjoint(R)·adjoint(L).
#[derive(Debug, Clone)]
pub struct IntertwinerCertificate<F: Field> {
    pub l: DiffOp<F>,
    pub r: DiffOp<F>,
    /// The rational seed (a₂ or a₃) the construction started from.
    pub seed: RatFn<F>,
    /// L·R − adjoint(R)·adjoint(L); must be the zero operator.
    pub identity_residual: DiffOp<F>,
    pub galois_verdict: GaloisVerdict,
}

impl<F: Field + PolyOps> IntertwinerCertificate<F> {
    pub fn is_valid(&self) -> bool {
        self.identity_residual.is_zero()
    }
}

/// L = r·(Y_L·Y_R + 1) with both Y's self-adjoint.
#[derive(Debug, Clone)]
pub struct SelfAdjointDecomposition<F: Field> {
    pub r: RatFn<F>,
    pub y_left: DiffOp<F>,
    pub y_right: DiffOp<F>,
}

/// A symmetric or alternating matrix of rational functions defining a first
/// integral on the companion module.
#[derive(Debug, Clone)]
pub struct FirstIntegralForm<F: Field> {
    pub b: Vec<Vec<RatFn<F>>>,
    pub kind: FormKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symmetric,
    Alternating,
}

fn monic_coeffs<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Vec<RatFn<F>> {
    let (m, _) = l.monic(field);
    m.coeffs.clone()
}

/// Is the operator self-adjoint (coefficientwise equal to its adjoint)?
pub fn is_self_adjoint<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> bool {
    l.adjoint(field).sub(field, l).is_zero()
}

/// Independent verification path: apply both sides of the identity to a few
/// random rational functions and compare the images exactly.
fn verify_on_arguments<F: Field + PolyOps>(field: &F, lhs: &DiffOp<F>, rhs: &DiffOp<F>) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11d);
    for _ in 0..3 {
        let y = RatFn::new(
            field,
            crate::poly::Poly::from_i64(field, &[rng.gen_range(1..9), rng.gen_range(1..9)]),
            crate::poly::Poly::from_i64(field, &[1, rng.gen_range(1..5)]),
        );
        let a = lhs.apply_ratfn(field, &y);
        let b = rhs.apply_ratfn(field, &y);
        if !a.sub(field, &b).is_zero() {
            return false;
        }
    }
    true
}

/// The adjoint normalized to a monic head for a monic input:
/// (−1)^q · Σ(−D)ⁱ∘aᵢ. The duality identity L·R = adjoint(R)·adjoint(L)
/// holds with this signed adjoint of L at every order; at even order it
/// coincides with the plain adjoint.
pub fn adjoint_monic_signed<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> DiffOp<F> {
    let a = l.adjoint(field);
    match l.order() {
        Some(q) if q % 2 == 1 => a.neg(field),
        _ => a,
    }
}

fn certificate<F: Field + PolyOps>(
    field: &F,
    l: &DiffOp<F>,
    r: &DiffOp<F>,
    seed: &RatFn<F>,
    verdict: GaloisVerdict,
) -> Result<IntertwinerCertificate<F>> {
    let lhs = l.mul(field, r);
    let rhs = r.adjoint(field).mul(field, &adjoint_monic_signed(field, l));
    let residual = lhs.sub(field, &rhs);
    if !residual.is_zero() {
        return Err(Error::CertificationFailed(
            "intertwiner identity residual is nonzero".into(),
        ));
    }
    if !verify_on_arguments(field, &lhs, &rhs) {
        return Err(Error::CertificationFailed(
            "independent argument check failed".into(),
        ));
    }
    Ok(IntertwinerCertificate {
        l: l.clone(),
        r: r.clone(),
        seed: seed.clone(),
        identity_residual: residual,
        galois_verdict: verdict,
    })
}

// ---------------------------------------------------------------------------
// order three
// ---------------------------------------------------------------------------

struct Ord3Data<F: Field> {
    p2: RatFn<F>,
    p1: RatFn<F>,
    p0: RatFn<F>,
}

fn ord3_data<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Result<Ord3Data<F>> {
    if l.order() != Some(3) {
        return Err(Error::Unsupported("order-3 operator required".into()));
    }
    let c = monic_coeffs(field, l);
    Ok(Ord3Data { p2: c[2].clone(), p1: c[1].clone(), p0: c[0].clone() })
}

/// C₁⁽³⁾: vanishes iff the symmetric square drops to order five.
pub fn c1_order3<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Result<RatFn<F>> {
    let d = ord3_data(field, l)?;
    let (p2, p1, p0) = (&d.p2, &d.p1, &d.p0);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p1p = p1.derivative(field);
    let c = |n: i64| RatFn::from_i64(field, n);
    // 36 p1 p2 − 108 p0 − 8 p2³ − 36 p2 p2' + 54 p1' − 18 p2''
    let mut acc = p1.mul(field, p2).mul(field, &c(36));
    acc = acc.sub(field, &p0.mul(field, &c(108)));
    acc = acc.sub(field, &p2.mul(field, p2).mul(field, p2).mul(field, &c(8)));
    acc = acc.sub(field, &p2.mul(field, &p2p).mul(field, &c(36)));
    acc = acc.add(field, &p1p.mul(field, &c(54)));
    acc = acc.sub(field, &p2pp.mul(field, &c(18)));
    Ok(acc)
}

/// The order-five operator N₅ with C₁⁽³⁾·N₅ = 9D⁵ + 30p₂D⁴ + Q₃D³ + Q₂D² + Q₁D + Q₀.
fn n5_order3<F: Field + PolyOps>(field: &F, d: &Ord3Data<F>, c1: &RatFn<F>) -> Result<DiffOp<F>> {
    let (p2, p1, p0) = (&d.p2, &d.p1, &d.p0);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p1p = p1.derivative(field);
    let p1pp = p1p.derivative(field);
    let p0p = p0.derivative(field);
    let p0pp = p0p.derivative(field);
    let q3 = p2
        .mul(field, p2)
        .mul(field, &c(25))
        .add(field, &p1.mul(field, &c(45)))
        .add(field, &p2p.mul(field, &c(15)));
    let q2 = p1
        .mul(field, p2)
        .mul(field, &c(75))
        .add(field, &p0.mul(field, &c(45)))
        .add(field, &p1p.mul(field, &c(45)));
    let p2sq = p2.mul(field, p2);
    let mut q1 = p1.mul(field, p1).mul(field, &c(36));
    q1 = q1.sub(field, &p2sq.mul(field, &p2sq).mul(field, &c(4)));
    q1 = q1.add(field, &p2.mul(field, p0).mul(field, &c(42)));
    q1 = q1.add(field, &p2sq.mul(field, p1).mul(field, &c(22)));
    q1 = q1.add(field, &p1pp.mul(field, &c(9)));
    q1 = q1.add(field, &p0p.mul(field, &c(63)));
    q1 = q1.sub(field, &p2p.mul(field, &p2sq).mul(field, &c(18)));
    q1 = q1.add(field, &p2.mul(field, &p1p).mul(field, &c(48)));
    q1 = q1.sub(field, &p1.mul(field, &p2p).mul(field, &c(3)));
    q1 = q1.sub(field, &p2.mul(field, &p2pp).mul(field, &c(9)));
    let p2cb = p2sq.mul(field, p2);
    let mut q0 = p1.mul(field, p1).mul(field, p2).mul(field, &c(36));
    q0 = q0.sub(field, &p1.mul(field, p0).mul(field, &c(36)));
    q0 = q0.sub(field, &p1.mul(field, &p2cb).mul(field, &c(8)));
    q0 = q0.add(field, &p2sq.mul(field, p0).mul(field, &c(8)));
    q0 = q0.sub(field, &p2pp.mul(field, p1).mul(field, &c(18)));
    q0 = q0.add(field, &p2pp.mul(field, &p2p).mul(field, &c(18)));
    q0 = q0.add(field, &p2p.mul(field, &p2p).mul(field, p2).mul(field, &c(36)));
    q0 = q0.add(field, &p2p.mul(field, p0).mul(field, &c(102)));
    q0 = q0.sub(field, &p2p.mul(field, &p1p).mul(field, &c(54)));
    q0 = q0.add(field, &p2p.mul(field, &p2cb).mul(field, &c(8)));
    q0 = q0.add(field, &p0pp.mul(field, &c(18)));
    q0 = q0.add(field, &p2.mul(field, &p0p).mul(field, &c(42)));
    q0 = q0.add(field, &p1.mul(field, &p1p).mul(field, &c(54)));
    q0 = q0.sub(field, &p2p.mul(field, p1).mul(field, p2).mul(field, &c(72)));
    let c1_inv = c1
        .inv(field)
        .ok_or_else(|| Error::Degenerate("C1^(3) = 0: symmetric-square case".into()))?;
    let coeffs = vec![
        q0,
        q1,
        q2,
        q3,
        p2.mul(field, &c(30)),
        c(9),
    ];
    Ok(DiffOp::new(field, coeffs).mul_ratfn(field, &c1_inv))
}

/// E₃ for the order-3 consistency route 6a₀' + 4p₂a₀ = E₃(a₂).
fn e3_order3<F: Field + PolyOps>(field: &F, d: &Ord3Data<F>) -> DiffOp<F> {
    let (p2, p1, p0) = (&d.p2, &d.p1, &d.p0);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p1p = p1.derivative(field);
    let coef1 = p1
        .mul(field, &c(4))
        .add(field, &p2.mul(field, p2).mul(field, &c(2)))
        .sub(field, &p2p.mul(field, &c(3)));
    let mut coef0 = p1.mul(field, p2).mul(field, &c(4));
    coef0 = coef0.sub(field, &p0.mul(field, &c(4)));
    coef0 = coef0.sub(field, &p2pp.mul(field, &c(6)));
    coef0 = coef0.add(field, &p1p.mul(field, &c(6)));
    coef0 = coef0.sub(field, &p2.mul(field, &p2p).mul(field, &c(4)));
    DiffOp::new(field, vec![coef0, coef1, p2.mul(field, &c(3)), c(1)])
}

/// Order-two intertwiner for a monic order-three operator from the rational
/// solution a₂ of its symmetric square (the a₂-seed route).
pub fn intertwiner_ord3<F: Field + PolyOps + ExpIntegrate>(
    field: &F,
    l3: &DiffOp<F>,
    a2: &RatFn<F>,
) -> Result<IntertwinerCertificate<F>> {
    if a2.is_zero() {
        return Err(Error::Degenerate("zero seed rejected".into()));
    }
    let (lm, _) = l3.monic(field);
    let d = ord3_data(field, &lm)?;
    let c1 = c1_order3(field, &lm)?;
    if c1.is_zero() {
        return Err(Error::Degenerate(
            "C1^(3) = 0: operator is a symmetric square, order-2 intertwiner degenerate".into(),
        ));
    }
    let half = field.from_ratio(1, 2);
    let a2p = a2.derivative(field);
    let a1 = d.p2.mul(field, a2).neg(field).sub(field, &a2p.mul_scalar(field, &half));
    let n5 = n5_order3(field, &d, &c1)?;
    let a0 = n5.apply_ratfn(field, a2);
    // consistency check through the inhomogeneous route:
    // 6 a0' + 4 p2 a0 = E3(a2)
    let e3 = e3_order3(field, &d);
    let lhs = a0
        .derivative(field)
        .mul_scalar(field, &field.from_i64(6))
        .add(field, &d.p2.mul(field, &a0).mul_scalar(field, &field.from_i64(4)));
    let rhs = e3.apply_ratfn(field, a2);
    if !lhs.sub(field, &rhs).is_zero() {
        return Err(Error::CertificationFailed(
            "order-3 a0 consistency route disagrees".into(),
        ));
    }
    let r2 = DiffOp::new(field, vec![a0, a1, a2.clone()]);
    let verdict = verdict_for(field, &lm, a2, 3, FormKind::Symmetric);
    certificate(field, &lm, &r2, a2, verdict)
}

// ---------------------------------------------------------------------------
// order four
// ---------------------------------------------------------------------------

struct Ord4Data<F: Field> {
    p3: RatFn<F>,
    p2: RatFn<F>,
    p1: RatFn<F>,
    p0: RatFn<F>,
}

fn ord4_data<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Result<Ord4Data<F>> {
    if l.order() != Some(4) {
        return Err(Error::Unsupported("order-4 operator required".into()));
    }
    let c = monic_coeffs(field, l);
    Ok(Ord4Data { p3: c[3].clone(), p2: c[2].clone(), p1: c[1].clone(), p0: c[0].clone() })
}

/// C₁⁽⁴⁾, the Calabi-Yau condition: vanishes iff the exterior square drops to
/// order five.
pub fn c1_order4<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Result<RatFn<F>> {
    let d = ord4_data(field, l)?;
    let (p3, p2, p1) = (&d.p3, &d.p2, &d.p1);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p2p = p2.derivative(field);
    // 4 p2 p3 − 8 p1 − p3³ + 8 p2' − 4 p3'' − 6 p3 p3'
    let mut acc = p2.mul(field, p3).mul(field, &c(4));
    acc = acc.sub(field, &p1.mul(field, &c(8)));
    acc = acc.sub(field, &p3.mul(field, p3).mul(field, p3));
    acc = acc.add(field, &p2p.mul(field, &c(8)));
    acc = acc.sub(field, &p3pp.mul(field, &c(4)));
    acc = acc.sub(field, &p3.mul(field, &p3p).mul(field, &c(6)));
    Ok(acc)
}

/// Calabi-Yau-style condition dispatcher for orders 3 and 4.
pub fn calabi_yau_condition<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Result<RatFn<F>> {
    match l.order() {
        Some(3) => c1_order3(field, l),
        Some(4) => c1_order4(field, l),
        _ => Err(Error::Unsupported("Calabi-Yau condition defined for orders 3 and 4".into())),
    }
}

/// N₅ for the order-4 exterior route: C₁⁽⁴⁾·N₅ = 4D⁵ + 10p₃D⁴ + Q₃D³ + Q₂D² + Q₁D + Q₀.
fn n5_order4_ext<F: Field + PolyOps>(field: &F, d: &Ord4Data<F>, c1: &RatFn<F>) -> Result<DiffOp<F>> {
    let (p3, p2, p1, p0) = (&d.p3, &d.p2, &d.p1, &d.p0);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p1p = p1.derivative(field);
    let p1pp = p1p.derivative(field);
    let p0p = p0.derivative(field);
    let p3sq = p3.mul(field, p3);
    let q3 = p3sq
        .mul(field, &c(7))
        .add(field, &p2.mul(field, &c(8)))
        .add(field, &p3p.mul(field, &c(8)));
    let q2 = p2
        .mul(field, p3)
        .mul(field, &c(14))
        .sub(field, &p1.mul(field, &c(4)))
        .add(field, &p2p.mul(field, &c(16)));
    let mut q1 = p2.mul(field, p2).mul(field, &c(4));
    q1 = q1.sub(field, &p0.mul(field, &c(16)));
    q1 = q1.add(field, &p3sq.mul(field, p2).mul(field, &c(5)));
    q1 = q1.sub(field, &p3.mul(field, p1).mul(field, &c(2)));
    q1 = q1.sub(field, &p3sq.mul(field, &p3sq));
    q1 = q1.add(field, &p1p.mul(field, &c(8)));
    q1 = q1.add(field, &p2pp.mul(field, &c(4)));
    q1 = q1.sub(field, &p3sq.mul(field, &p3p).mul(field, &c(6)));
    q1 = q1.add(field, &p3.mul(field, &p2p).mul(field, &c(14)));
    q1 = q1.sub(field, &p3.mul(field, &p3pp).mul(field, &c(4)));
    let p3cb = p3sq.mul(field, p3);
    let mut q0 = p3.mul(field, p2).mul(field, p2).mul(field, &c(4));
    q0 = q0.sub(field, &p2.mul(field, &p3cb));
    q0 = q0.add(field, &p3sq.mul(field, p1));
    q0 = q0.sub(field, &p0.mul(field, p3).mul(field, &c(8)));
    q0 = q0.sub(field, &p2.mul(field, p1).mul(field, &c(4)));
    q0 = q0.add(field, &p3p.mul(field, &p3pp).mul(field, &c(4)));
    q0 = q0.sub(field, &p2.mul(field, &p3pp).mul(field, &c(4)));
    q0 = q0.add(field, &p1pp.mul(field, &c(4)));
    q0 = q0.add(field, &p3p.mul(field, &p3p).mul(field, p3).mul(field, &c(6)));
    q0 = q0.add(field, &p3cb.mul(field, &p3p));
    q0 = q0.sub(field, &p3.mul(field, p2).mul(field, &p3p).mul(field, &c(10)));
    q0 = q0.add(field, &p3p.mul(field, p1).mul(field, &c(8)));
    q0 = q0.sub(field, &p3p.mul(field, &p2p).mul(field, &c(8)));
    q0 = q0.add(field, &p2.mul(field, &p2p).mul(field, &c(8)));
    q0 = q0.add(field, &p3.mul(field, &p1p).mul(field, &c(6)));
    q0 = q0.sub(field, &p0p.mul(field, &c(8)));
    let c1_inv = c1
        .inv(field)
        .ok_or_else(|| Error::Degenerate("C1^(4) = 0: Calabi-Yau degenerate case".into()))?;
    let coeffs = vec![q0, q1, q2, q3, p3.mul(field, &c(10)), c(4)];
    Ok(DiffOp::new(field, coeffs).mul_ratfn(field, &c1_inv))
}

/// E₃ for the order-4 exterior consistency route 2a₀' + p₃a₀ = E₃(a₂).
fn e3_order4_ext<F: Field + PolyOps>(field: &F, d: &Ord4Data<F>) -> DiffOp<F> {
    let (p3, p2, p1) = (&d.p3, &d.p2, &d.p1);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p2p = p2.derivative(field);
    let coef1 = p3.mul(field, p3).add(field, p2);
    let mut coef0 = p2.mul(field, p3);
    coef0 = coef0.sub(field, p1);
    coef0 = coef0.add(field, &p2p.mul(field, &c(2)));
    coef0 = coef0.sub(field, &p3pp.mul(field, &c(2)));
    coef0 = coef0.sub(field, &p3.mul(field, &p3p));
    DiffOp::new(field, vec![coef0, coef1, p3.mul(field, &c(2)), c(1)])
}

/// Order-two intertwiner for a monic order-four operator from the rational
/// solution a₂ of its exterior square.
pub fn intertwiner_ord4_ext<F: Field + PolyOps + ExpIntegrate>(
    field: &F,
    l4: &DiffOp<F>,
    a2: &RatFn<F>,
) -> Result<IntertwinerCertificate<F>> {
    if a2.is_zero() {
        return Err(Error::Degenerate("zero seed rejected".into()));
    }
    let (lm, _) = l4.monic(field);
    let d = ord4_data(field, &lm)?;
    let c1 = c1_order4(field, &lm)?;
    if c1.is_zero() {
        return Err(Error::Degenerate(
            "C1^(4) = 0: exterior square drops to order five, order-2 intertwiner degenerate".into(),
        ));
    }
    let a2p = a2.derivative(field);
    let a1 = d.p3.mul(field, a2).neg(field).sub(field, &a2p);
    let n5 = n5_order4_ext(field, &d, &c1)?;
    let a0 = n5.apply_ratfn(field, a2);
    // consistency: 2 a0' + p3 a0 = E3(a2)
    let e3 = e3_order4_ext(field, &d);
    let lhs = a0
        .derivative(field)
        .mul_scalar(field, &field.from_i64(2))
        .add(field, &d.p3.mul(field, &a0));
    let rhs = e3.apply_ratfn(field, a2);
    if !lhs.sub(field, &rhs).is_zero() {
        return Err(Error::CertificationFailed(
            "order-4 exterior a0 consistency route disagrees".into(),
        ));
    }
    let r2 = DiffOp::new(field, vec![a0, a1, a2.clone()]);
    let verdict = verdict_for(field, &lm, a2, 4, FormKind::Alternating);
    certificate(field, &lm, &r2, a2, verdict)
}

/// N₃ for the order-4 symmetric route.
fn n3_order4_sym<F: Field + PolyOps>(field: &F, d: &Ord4Data<F>) -> DiffOp<F> {
    let (p3, p2, p1) = (&d.p3, &d.p2, &d.p1);
    let r = |n: i64, m: i64| RatFn::constant(field, field.from_ratio(n, m));
    let p3p = p3.derivative(field);
    let p2p = p2.derivative(field);
    let coef1 = p3p
        .mul(field, &r(9, 2))
        .add(field, &p3.mul(field, p3).mul(field, &r(3, 1)))
        .add(field, &p2.mul(field, &r(2, 1)));
    let coef0 = p2p
        .mul(field, &r(3, 1))
        .sub(field, &p1.mul(field, &r(2, 1)))
        .add(field, &p2.mul(field, p3).mul(field, &r(2, 1)));
    DiffOp::new(
        field,
        vec![coef0, coef1, p3.mul(field, &r(15, 2)), r(5, 1)],
    )
}

/// N₅ for the order-4 symmetric route (monic head).
fn n5_order4_sym<F: Field + PolyOps>(field: &F, d: &Ord4Data<F>) -> DiffOp<F> {
    let (p3, p2, p1, p0) = (&d.p3, &d.p2, &d.p1, &d.p0);
    let r = |n: i64, m: i64| RatFn::constant(field, field.from_ratio(n, m));
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p3ppp = p3pp.derivative(field);
    let p3pppp = p3ppp.derivative(field);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p2ppp = p2pp.derivative(field);
    let p1p = p1.derivative(field);
    let p0p = p0.derivative(field);
    let p3sq = p3.mul(field, p3);
    let p3cb = p3sq.mul(field, p3);
    let coef3 = p3sq
        .mul(field, &r(17, 4))
        .sub(field, &p3p.mul(field, &r(7, 4)))
        .add(field, &p2.mul(field, &r(9, 2)));
    let mut q2 = p3cb.mul(field, &r(3, 2));
    q2 = q2.add(field, &p2.mul(field, p3).mul(field, &r(17, 2)));
    q2 = q2.sub(field, &p1.mul(field, &r(5, 2)));
    q2 = q2.sub(field, &p3pp.mul(field, &r(45, 2)));
    q2 = q2.sub(field, &p3.mul(field, &p3p).mul(field, &r(21, 4)));
    q2 = q2.add(field, &p2p.mul(field, &r(15, 1)));
    let mut q1 = p2.mul(field, p2).mul(field, &r(2, 1));
    q1 = q1.sub(field, &p1.mul(field, p3).mul(field, &r(2, 1)));
    q1 = q1.add(field, &p2.mul(field, &p3sq).mul(field, &r(4, 1)));
    q1 = q1.sub(field, &p0.mul(field, &r(4, 1)));
    q1 = q1.sub(field, &p3p.mul(field, &p3p).mul(field, &r(27, 4)));
    q1 = q1.sub(field, &p3.mul(field, &p3pp).mul(field, &r(105, 4)));
    q1 = q1.sub(field, &p3sq.mul(field, &p3p).mul(field, &r(9, 2)));
    q1 = q1.add(field, &p2.mul(field, &p3p).mul(field, &r(3, 2)));
    q1 = q1.add(field, &p3.mul(field, &p2p).mul(field, &r(33, 2)));
    q1 = q1.add(field, &p2pp.mul(field, &r(15, 1)));
    q1 = q1.sub(field, &p3ppp.mul(field, &r(55, 2)));
    q1 = q1.sub(field, &p1p.mul(field, &r(3, 2)));
    let mut q0 = p3.mul(field, p2).mul(field, p2).mul(field, &r(2, 1));
    q0 = q0.sub(field, &p0.mul(field, p3).mul(field, &r(2, 1)));
    q0 = q0.sub(field, &p1.mul(field, p2).mul(field, &r(2, 1)));
    q0 = q0.sub(field, &p3pppp.mul(field, &r(10, 1)));
    q0 = q0.sub(field, &p0p.mul(field, &r(3, 1)));
    q0 = q0.sub(field, &p3.mul(field, &p3ppp).mul(field, &r(15, 1)));
    q0 = q0.sub(field, &p2p.mul(field, &p3p).mul(field, &r(3, 2)));
    q0 = q0.add(field, &p2.mul(field, &p2p).mul(field, &r(5, 1)));
    q0 = q0.sub(field, &p3p.mul(field, &p3pp).mul(field, &r(9, 1)));
    q0 = q0.add(field, &p1.mul(field, &p3p).mul(field, &r(4, 1)));
    q0 = q0.sub(field, &p2.mul(field, &p3pp).mul(field, &r(4, 1)));
    q0 = q0.add(field, &p2ppp.mul(field, &r(5, 1)));
    q0 = q0.add(field, &p3.mul(field, &p2pp).mul(field, &r(15, 2)));
    q0 = q0.sub(field, &p3sq.mul(field, &p3pp).mul(field, &r(6, 1)));
    q0 = q0.sub(field, &p2.mul(field, p3).mul(field, &p3p).mul(field, &r(4, 1)));
    q0 = q0.add(field, &p2p.mul(field, &p3sq).mul(field, &r(3, 1)));
    DiffOp::new(
        field,
        vec![q0, q1, q2, coef3, p3.mul(field, &r(15, 4)), r(1, 1)],
    )
}

/// E₃ for the order-4 symmetric route.
fn e3_order4_sym<F: Field + PolyOps>(field: &F, d: &Ord4Data<F>) -> DiffOp<F> {
    let (p3, p2, p1) = (&d.p3, &d.p2, &d.p1);
    let c = |n: i64| RatFn::from_i64(field, n);
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p2p = p2.derivative(field);
    let coef1 = p2
        .mul(field, &c(4))
        .sub(field, &p3p.mul(field, &c(7)))
        .add(field, &p3.mul(field, p3).mul(field, &c(2)));
    let mut coef0 = p2.mul(field, p3).mul(field, &c(4));
    coef0 = coef0.sub(field, &p1.mul(field, &c(4)));
    coef0 = coef0.sub(field, &p3pp.mul(field, &c(16)));
    coef0 = coef0.add(field, &p2p.mul(field, &c(10)));
    coef0 = coef0.sub(field, &p3.mul(field, &p3p).mul(field, &c(8)));
    DiffOp::new(field, vec![coef0, coef1, p3.mul(field, &c(3)), c(1)])
}

/// Order-three intertwiner for a monic order-four operator from the rational
/// solution a₃ of its symmetric square. The a₁ integration constants are
/// resolved by linear re-injection into the identity.
pub fn intertwiner_ord4_sym<F>(
    field: &F,
    l4: &DiffOp<F>,
    a3: &RatFn<F>,
) -> Result<IntertwinerCertificate<F>>
where
    F: Field + PolyOps + ExpIntegrate + crate::frobenius::ExponentField + ScalarNullspace + KxSolve,
{
    if a3.is_zero() {
        return Err(Error::Degenerate("zero seed rejected".into()));
    }
    let (lm, _) = l4.monic(field);
    let d = ord4_data(field, &lm)?;
    let half = field.from_ratio(1, 2);
    let a2 = d
        .p3
        .mul(field, a3)
        .neg(field)
        .sub(field, &a3.derivative(field).mul_scalar(field, &half));
    // a1 from N3(a1) = N5(a3), constants fixed by re-injection
    let n3 = n3_order4_sym(field, &d);
    let n5 = n5_order4_sym(field, &d);
    let rhs = n5.apply_ratfn(field, a3);
    let (particular, kernel) = rational_solutions_inhomogeneous(field, &n3, &rhs)?;
    let Some(particular) = particular else {
        return Err(Error::NoSolution(
            "no rational a1 consistent with the identity".into(),
        ));
    };
    let e3 = e3_order4_sym(field, &d);
    let e3a3 = e3.apply_ratfn(field, a3);
    let build = |a1: &RatFn<F>| -> DiffOp<F> {
        // a0 = −p3 a1 − (3/2) a1' + (1/4) E3(a3)
        let quarter = field.from_ratio(1, 4);
        let three_half = field.from_ratio(3, 2);
        let a0 = d
            .p3
            .mul(field, a1)
            .neg(field)
            .sub(field, &a1.derivative(field).mul_scalar(field, &three_half))
            .add(field, &e3a3.mul_scalar(field, &quarter));
        DiffOp::new(field, vec![a0, a1.clone(), a2.clone(), a3.clone()])
    };
    let residual_of = |r3: &DiffOp<F>| -> DiffOp<F> {
        let lhs = lm.mul(field, r3);
        let rhs = r3.adjoint(field).mul(field, &adjoint_monic_signed(field, &lm));
        lhs.sub(field, &rhs)
    };
    // residual is affine in the kernel coefficients: solve Σ tᵢ Δᵢ = −res0
    let res0 = residual_of(&build(&particular));
    let mut deltas = vec![];
    for k in &kernel {
        let shifted = particular.add(field, k);
        let resk = residual_of(&build(&shifted));
        deltas.push(resk.sub(field, &res0));
    }
    let a1 = if res0.is_zero() {
        particular
    } else {
        // flatten residual operators into scalar equations over the base field
        let mut rows: Vec<Vec<F::Elem>> = vec![];
        let mut rhs_vec: Vec<F::Elem> = vec![];
        let max_ord = res0.coeffs.len().max(deltas.iter().map(|o| o.coeffs.len()).max().unwrap_or(0));
        for i in 0..max_ord {
            // common denominator across this coefficient position
            let mut entries: Vec<RatFn<F>> = vec![res0.coeff(i)];
            for dop in &deltas {
                entries.push(dop.coeff(i));
            }
            let cleared = crate::linalg::clear_row(field, &entries);
            let maxdeg = cleared.iter().map(|p| p.deg().max(0) as usize).max().unwrap_or(0);
            for m in 0..=maxdeg {
                let r0 = cleared[0].coeff(field, m);
                let row: Vec<F::Elem> = cleared[1..].iter().map(|p| p.coeff(field, m)).collect();
                if row.iter().all(|e| field.is_zero(e)) && field.is_zero(&r0) {
                    continue;
                }
                rows.push(row);
                rhs_vec.push(field.neg(&r0));
            }
        }
        let mat = crate::linalg::Mat::from_rows(field, &rows);
        let Some(t) = mat.solve(field, &rhs_vec) else {
            return Err(Error::NoSolution(
                "no rational a1 consistent with the identity".into(),
            ));
        };
        let mut a1 = particular.clone();
        for (ti, k) in t.iter().zip(kernel.iter()) {
            a1 = a1.add(field, &k.mul_scalar(field, ti));
        }
        a1
    };
    let r3 = build(&a1);
    let verdict = verdict_for(field, &lm, a3, 4, FormKind::Symmetric);
    certificate(field, &lm, &r3, a3, verdict)
}

/// The order-two operator E₂ whose rational solutions would provide an
/// order-one intertwiner for an order-four operator. Findings are reported
/// without interpretation.
pub fn order1_intertwiner_equation<F: Field + PolyOps>(field: &F, l4: &DiffOp<F>) -> Result<DiffOp<F>> {
    let (lm, _) = l4.monic(field);
    let d = ord4_data(field, &lm)?;
    let (p3, p2, p1, p0) = (&d.p3, &d.p2, &d.p1, &d.p0);
    let c = |n: i64| RatFn::from_i64(field, n);
    let c1 = c1_order4(field, &lm)?;
    let p3p = p3.derivative(field);
    let p3pp = p3p.derivative(field);
    let p3ppp = p3pp.derivative(field);
    let p2p = p2.derivative(field);
    let p2pp = p2p.derivative(field);
    let p2ppp = p2pp.derivative(field);
    let p1p = p1.derivative(field);
    let p1pp = p1p.derivative(field);
    let p0p = p0.derivative(field);
    let p3sq = p3.mul(field, p3);
    let mut q1 = p2.mul(field, &p3sq).mul(field, &c(212));
    q1 = q1.sub(field, &p3sq.mul(field, &p3sq).mul(field, &c(66)));
    q1 = q1.sub(field, &p1.mul(field, p3).mul(field, &c(440)));
    q1 = q1.add(field, &p2.mul(field, p2).mul(field, &c(144)));
    q1 = q1.sub(field, &p0.mul(field, &c(1600)));
    q1 = q1.add(field, &p3p.mul(field, &p3p).mul(field, &c(54)));
    q1 = q1.sub(field, &p2.mul(field, &p3p).mul(field, &c(292)));
    q1 = q1.sub(field, &p3ppp.mul(field, &c(60)));
    q1 = q1.sub(field, &p2pp.mul(field, &c(40)));
    q1 = q1.add(field, &p1p.mul(field, &c(520)));
    q1 = q1.add(field, &p2p.mul(field, p3).mul(field, &c(580)));
    q1 = q1.sub(field, &p3sq.mul(field, &p3p).mul(field, &c(423)));
    q1 = q1.sub(field, &p3.mul(field, &p3pp).mul(field, &c(390)));
    let p3cb = p3sq.mul(field, p3);
    let mut q0 = p2.mul(field, &p3cb).mul(field, &c(-22));
    q0 = q0.add(field, &p1.mul(field, &p3sq).mul(field, &c(22)));
    q0 = q0.sub(field, &p1.mul(field, p2).mul(field, &c(72)));
    q0 = q0.add(field, &p2.mul(field, p2).mul(field, p3).mul(field, &c(72)));
    q0 = q0.sub(field, &p0.mul(field, p3).mul(field, &c(400)));
    q0 = q0.sub(field, &p2p.mul(field, &p3sq).mul(field, &c(13)));
    q0 = q0.add(field, &p2p.mul(field, &p3p).mul(field, &c(18)));
    q0 = q0.sub(field, &p2ppp.mul(field, &c(20)));
    q0 = q0.sub(field, &p2pp.mul(field, p3).mul(field, &c(50)));
    q0 = q0.add(field, &p1p.mul(field, p3).mul(field, &c(180)));
    q0 = q0.sub(field, &p1.mul(field, &p3p).mul(field, &c(52)));
    q0 = q0.sub(field, &p3.mul(field, p2).mul(field, &p3p).mul(field, &c(128)));
    q0 = q0.sub(field, &p0p.mul(field, &c(200)));
    q0 = q0.add(field, &p1pp.mul(field, &c(80)));
    q0 = q0.sub(field, &p2.mul(field, &p3pp).mul(field, &c(80)));
    q0 = q0.add(field, &p2p.mul(field, p2).mul(field, &c(108)));
    let s105 = RatFn::constant(field, field.from_ratio(1, 105));
    let s105_2 = RatFn::constant(field, field.from_ratio(2, 105));
    Ok(DiffOp::new(
        field,
        vec![q0.mul(field, &s105_2), q1.mul(field, &s105), c1],
    ))
}

// ---------------------------------------------------------------------------
// self-adjoint decomposition and verdicts
// ---------------------------------------------------------------------------

/// L₄ = r·(Y_L·Y_R + 1) from an order-2 intertwiner certificate.
pub fn self_adjoint_decomposition<F: Field + PolyOps + ExpIntegrate>(
    field: &F,
    l4: &DiffOp<F>,
    cert: &IntertwinerCertificate<F>,
) -> Result<SelfAdjointDecomposition<F>> {
    if cert.r.order() != Some(2) {
        return Err(Error::Unsupported(
            "decomposition needs an order-2 intertwiner certificate".into(),
        ));
    }
    let (lm, _) = l4.monic(field);
    let a2 = cert.r.coeff(2);
    let a1 = cert.r.coeff(1);
    // Y_L = R₂·(1/r) self-adjoint forces (log r)' = (a1 − a2')/a2
    let u = a1.sub(field, &a2.derivative(field)).div(field, &a2).unwrap();
    let r0 = F::exp_integral_rational(field, &u).ok_or_else(|| {
        Error::NoSolution("no rational r making Y_L self-adjoint".into())
    })?;
    // G = r·Y_L is independent of the constant in r
    let r0_inv = r0.inv(field).unwrap();
    let g = cert
        .r
        .mul(field, &DiffOp::from_ratfn(r0_inv))
        .mul_ratfn(field, &r0);
    // L = G·Y_R + c·r0: left-divide
    let (y_right, rem) = lm.left_divide(field, &g);
    if rem.order().is_some() && rem.order() != Some(0) {
        return Err(Error::NoSolution(
            "left division remainder is not a function".into(),
        ));
    }
    let rem_fn = rem.coeff(0);
    let c = rem_fn.div(field, &r0).ok_or(Error::NoSolution("zero remainder".into()))?;
    if !c.is_constant() || c.is_zero() {
        return Err(Error::NoSolution(
            "remainder is not a constant multiple of r".into(),
        ));
    }
    let r = r0.mul(field, &c);
    let y_left = g.mul_ratfn(field, &r.inv(field).unwrap());
    // invariants
    if !is_self_adjoint(field, &y_left) || !is_self_adjoint(field, &y_right) {
        return Err(Error::CertificationFailed("Y factors are not self-adjoint".into()));
    }
    let recon = y_left
        .mul(field, &y_right)
        .add(field, &DiffOp::one(field))
        .mul_ratfn(field, &r);
    if !recon.sub(field, &lm).is_zero() {
        return Err(Error::CertificationFailed("decomposition identity failed".into()));
    }
    // r·α₂·β₂ = 1
    let alpha2 = y_left.coeff(2);
    let beta2 = y_right.coeff(2);
    let prod = r.mul(field, &alpha2).mul(field, &beta2);
    if !prod.sub(field, &RatFn::one(field)).is_zero() {
        return Err(Error::CertificationFailed("r·α₂·β₂ = 1 failed".into()));
    }
    // head-coefficient law: 1/β₂ = r·α₂ = a₂
    let inv_beta = beta2.inv(field).unwrap();
    if !inv_beta.sub(field, &a2).is_zero() {
        return Err(Error::CertificationFailed("1/β₂ = a₂ failed".into()));
    }
    // companion relation: L₂ = (1/r)·Y_R intertwines on the other side
    let l2 = y_right.mul_ratfn(field, &r.inv(field).unwrap());
    let lhs = l2.adjoint(field).mul(field, &lm);
    let rhs = lm.adjoint(field).mul(field, &l2);
    if !lhs.sub(field, &rhs).is_zero() {
        return Err(Error::CertificationFailed("companion intertwining relation failed".into()));
    }
    Ok(SelfAdjointDecomposition { r, y_left, y_right })
}

/// Verdict: requires a rational Wronskian and the rational seed; symmetric
/// seeds give SO(q), alternating seeds give Sp(q) (even q only).
fn verdict_for<F: Field + PolyOps + ExpIntegrate>(
    field: &F,
    l: &DiffOp<F>,
    seed: &RatFn<F>,
    q: usize,
    kind: FormKind,
) -> GaloisVerdict {
    if seed.is_zero() {
        return GaloisVerdict::None;
    }
    if rational_wronskian(field, l).is_none() {
        return GaloisVerdict::None;
    }
    match kind {
        FormKind::Symmetric => GaloisVerdict::SO(q),
        FormKind::Alternating => {
            if q % 2 == 0 {
                GaloisVerdict::Sp(q)
            } else {
                GaloisVerdict::None
            }
        }
    }
}

// ---------------------------------------------------------------------------
// first integrals
// ---------------------------------------------------------------------------

/// Rational first-integral form for an operator with a certified verdict:
/// the symmetric (SO) or alternating (Sp) matrix B with B' + AᵀB + BA = 0,
/// found as a rational solution of the Sym²/Ext² of the dual companion
/// system.
pub fn first_integral<F>(field: &F, l: &DiffOp<F>, kind: FormKind) -> Result<FirstIntegralForm<F>>
where
    F: crate::frobenius::ExponentField + ScalarNullspace + KxSolve,
{
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    let comp = companion(field, &l.monic(field).0);
    // dual system Z' = −Aᵀ Z
    let mut dual = vec![vec![RatFn::<F>::zero(); q]; q];
    for i in 0..q {
        for j in 0..q {
            dual[i][j] = comp.a[j][i].neg(field);
        }
    }
    let dual_sys = ConnectionSystem { dim: q, a: dual, provenance: "dual companion".into() };
    let spec = match kind {
        FormKind::Symmetric => TensorSpec::SymPower(2),
        FormKind::Alternating => TensorSpec::ExtSquare,
    };
    let tensor = tensor_connection(field, &dual_sys, spec, None);
    let sols = rational_system_solutions(field, &tensor, 0xf157)?;
    if sols.is_empty() {
        return Err(Error::NoSolution(
            "no rational invariant form: verdict inconsistency".into(),
        ));
    }
    let w = &sols[0];
    let mut b = vec![vec![RatFn::<F>::zero(); q]; q];
    match kind {
        FormKind::Symmetric => {
            // monomial basis ordering of sym² (exponent vectors)
            let mut idx = 0;
            for i in 0..q {
                for j in i..q {
                    // monomial z_i z_j; order must match construct::monomials(q, 2)
                    let _ = (i, j);
                    idx += 1;
                }
            }
            let _ = idx;
            let monos = sym2_monomials(q);
            let half = field.from_ratio(1, 2);
            for (t, (i, j)) in monos.iter().enumerate() {
                if i == j {
                    b[*i][*j] = w[t].clone();
                } else {
                    let hv = w[t].mul_scalar(field, &half);
                    b[*i][*j] = hv.clone();
                    b[*j][*i] = hv;
                }
            }
        }
        FormKind::Alternating => {
            let mut t = 0;
            for i in 0..q {
                for j in (i + 1)..q {
                    b[i][j] = w[t].clone();
                    b[j][i] = w[t].neg(field);
                    t += 1;
                }
            }
        }
    }
    // verify B' + AᵀB + BA = 0
    for i in 0..q {
        for j in 0..q {
            let mut acc = b[i][j].derivative(field);
            for k in 0..q {
                // (AᵀB)_{ij} = Σ_k A[k][i] B[k][j]
                if !comp.a[k][i].is_zero() && !b[k][j].is_zero() {
                    acc = acc.add(field, &comp.a[k][i].mul(field, &b[k][j]));
                }
                // (BA)_{ij} = Σ_k B[i][k] A[k][j]
                if !b[i][k].is_zero() && !comp.a[k][j].is_zero() {
                    acc = acc.add(field, &b[i][k].mul(field, &comp.a[k][j]));
                }
            }
            if !acc.is_zero() {
                return Err(Error::CertificationFailed(
                    "invariant-form matrix equation failed".into(),
                ));
            }
        }
    }
    Ok(FirstIntegralForm { b, kind })
}

/// Pairs (i, j), i ≤ j, in the order produced by the sym² monomial basis of
/// `construct::monomials(q, 2)`.
fn sym2_monomials(q: usize) -> Vec<(usize, usize)> {
    let mut out = vec![];
    // monomials(q, 2) is lexicographic with leading variable exponent
    // descending: (2,0,..), (1,1,0,..), (1,0,1,..), ..., (0,2,0,..), ...
    for i in 0..q {
        for j in i..q {
            out.push((i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{sym_power, sym_square};
    use crate::ratsol::rational_solutions;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use crate::poly::Poly;

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn c1_vanishes_for_symmetric_squares() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        for _ in 0..5 {
            let m2 = DiffOp::new(
                &fp,
                vec![
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..40), rng.gen_range(1..40)])),
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..40)])),
                    RatFn::one(&fp),
                ],
            );
            let l3 = sym_square(&fp, &m2).unwrap();
            let c1 = c1_order3(&fp, &l3).unwrap();
            assert!(c1.is_zero(), "C1^(3) must vanish for symmetric squares");
            let l4 = sym_power(&fp, &m2, 3).unwrap();
            let c14 = c1_order4(&fp, &l4).unwrap();
            assert!(c14.is_zero(), "C1^(4) must vanish for symmetric cubes");
            // degenerate error paths
            let e2 = order1_intertwiner_equation(&fp, &l4).unwrap();
            assert!(e2.order().unwrap_or(0) <= 1, "E2 degenerates when C1^(4)=0");
        }
    }

    #[test]
    fn e2_scaling_invariance() {
        let f = q();
        // E2 uses only monic coefficients, so E2(cL) = E2(L)
        let l = DiffOp::from_polys(
            &f,
            &[
                Poly::from_i64(&f, &[1, 1]),
                Poly::from_i64(&f, &[0, 2]),
                Poly::from_i64(&f, &[3]),
                Poly::from_i64(&f, &[1, 0, 1]),
                Poly::from_i64(&f, &[1]),
            ],
        );
        let scaled = l.mul_ratfn(&f, &RatFn::from_i64(&f, 7));
        let e2a = order1_intertwiner_equation(&f, &l).unwrap();
        let e2b = order1_intertwiner_equation(&f, &scaled).unwrap();
        assert_eq!(e2a, e2b);
    }

    fn random_selfadjoint_order2(
        fp: &PrimeField,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> DiffOp<PrimeField> {
        use rand::Rng;
        // α·D² + α'·D + γ is self-adjoint
        let alpha = RatFn::poly(
            fp,
            Poly::new(fp, vec![rng.gen_range(1..20), rng.gen_range(1..20), rng.gen_range(1..20)]),
        );
        let gamma = RatFn::poly(fp, Poly::new(fp, vec![rng.gen_range(1..20), rng.gen_range(1..20)]));
        DiffOp::new(fp, vec![gamma, alpha.derivative(fp), alpha])
    }

    #[test]
    fn random_order3_certificates_mod_p() {
        use rand::Rng;
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut done = 0;
        let mut tries = 0;
        while done < 5 && tries < 20 {
            tries += 1;
            // M with rational Wronskian: p1 = −W'/W for W = x^a(1+x)^b
            let a = rng.gen_range(-2..3i64);
            let b = rng.gen_range(-2..3i64);
            let w = RatFn::x(&fp)
                .pow_i64(&fp, a)
                .unwrap()
                .mul(&fp, &RatFn::poly(&fp, Poly::from_i64(&fp, &[1, 1])).pow_i64(&fp, b).unwrap());
            let p1 = w.derivative(&fp).div(&fp, &w).unwrap().neg(&fp);
            let p0 = RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..9), rng.gen_range(1..9)]));
            let m = DiffOp::new(&fp, vec![p0, p1, RatFn::one(&fp)]);
            let s2 = sym_square(&fp, &m).unwrap();
            // equivalence image under a random order-1 intertwiner, then a
            // function gauge (a plain gauge alone would stay a symmetric
            // square and keep C1^(3) = 0)
            let rop = DiffOp::new(
                &fp,
                vec![
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..9), rng.gen_range(1..9)])),
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..9)])),
                ],
            );
            let Ok(img) = crate::construct::image_annihilator(&fp, &s2, &rop) else {
                continue;
            };
            if img.order() != Some(3) {
                continue;
            }
            let u = RatFn::new(
                &fp,
                Poly::from_i64(&fp, &[rng.gen_range(0..5)]),
                Poly::from_i64(&fp, &[1, 1]),
            );
            let l3 = img.gauge_transform(&fp, &u);
            let s2l3 = sym_square(&fp, &l3).unwrap();
            if s2l3.order() != Some(6) {
                continue; // need the generic order for the a₂ seed route
            }
            let rep = rational_solutions(&fp, &s2l3).unwrap();
            if rep.solutions.is_empty() {
                continue;
            }
            let cert = intertwiner_ord3(&fp, &l3, &rep.solutions[0]).unwrap();
            assert!(cert.is_valid());
            done += 1;
        }
        assert!(done >= 3, "too few certificates built: {}", done);
    }

    #[test]
    fn random_order4_decomposition_mod_p() {
        use rand::Rng;
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut done = 0;
        let mut tries = 0;
        while done < 3 && tries < 12 {
            tries += 1;
            let yl = random_selfadjoint_order2(&fp, &mut rng);
            let yr = random_selfadjoint_order2(&fp, &mut rng);
            let r = RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..9), rng.gen_range(1..9)]));
            let l4 = yl
                .mul(&fp, &yr)
                .add(&fp, &DiffOp::one(&fp))
                .mul_ratfn(&fp, &r);
            let e2 = ext_square_local(&fp, &l4);
            let rep = rational_solutions(&fp, &e2).unwrap();
            if rep.solutions.is_empty() {
                continue;
            }
            // pick the seed that matches 1/β₂ up to scalar: theory says the
            // rational solution of Ext²(L₄) is 1/β₂ itself (dimension 1 here)
            let cert = intertwiner_ord4_ext(&fp, &l4, &rep.solutions[0]).unwrap();
            assert!(cert.is_valid());
            assert_eq!(cert.galois_verdict, GaloisVerdict::Sp(4));
            let dec = self_adjoint_decomposition(&fp, &l4, &cert).unwrap();
            assert!(is_self_adjoint(&fp, &dec.y_left));
            assert!(is_self_adjoint(&fp, &dec.y_right));
            done += 1;
        }
        assert!(done >= 2, "too few decompositions: {}", done);
    }

    fn ext_square_local(fp: &PrimeField, l: &DiffOp<PrimeField>) -> DiffOp<PrimeField> {
        crate::construct::ext_square(fp, l).unwrap()
    }

    #[test]
    fn first_integral_order2_wronskian_form() {
        let f = q();
        // W = x³: alternating form B = [[0, 1/W], [−1/W, 0]] up to scalar
        let l = DiffOp::new(
            &f,
            vec![
                RatFn::from_i64(&f, 1),
                RatFn::new(&f, Poly::from_i64(&f, &[-3]), Poly::x(&f)),
                RatFn::one(&f),
            ],
        );
        let form = first_integral(&f, &l, FormKind::Alternating).unwrap();
        let want = RatFn::new(&f, Poly::one(&f), Poly::x(&f).pow(&f, 3));
        let ratio = form.b[0][1].div(&f, &want).unwrap();
        assert!(ratio.is_constant());
        assert_eq!(form.b[1][0], form.b[0][1].neg(&f));
    }
}
