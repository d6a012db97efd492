//! Constructions: companion systems, symmetric/exterior powers through
//! connection matrices and minimal annihilators, hypergeometric operators,
//! rational pullbacks, and annihilators of operator-images of solutions.
//!
//! Symmetric and exterior squares are computed deterministically from the
//! connection matrix: the minimal annihilator of the cyclic module vector
//! (e0⊙e0 resp. e0∧e1). Order drops come out exactly, with no series
//! guessing involved.

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, PrimeStream, Rationals};
use crate::frobenius::ExponentField;
use crate::linalg::{clear_row, solve_poly_system_fp, solve_poly_system_qq, Mat};
use crate::ore::DiffOp;
use crate::poly::{Poly, PolyOps};
use crate::ratfn::{map_ratfn, RatFn};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// First-order system Y' = A·Y with rational-function entries.
#[derive(Debug, Clone)]
pub struct ConnectionSystem<F: Field> {
    pub dim: usize,
    pub a: Vec<Vec<RatFn<F>>>,
    pub provenance: String,
}

/// Which tensor construction to apply to a connection system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorSpec {
    SymPower(usize),
    ExtSquare,
    Product,
}

/// Companion system of an operator: superdiagonal ones, last row -a_i/a_q,
/// so that Y = (y, y', ..., y^{q-1}) satisfies Y' = A·Y.
pub fn companion<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> ConnectionSystem<F> {
    let q = l.order().expect("companion of the zero operator");
    assert!(q >= 1);
    let lc = l.leading();
    let mut a = vec![vec![RatFn::<F>::zero(); q]; q];
    for i in 0..q.saturating_sub(1) {
        a[i][i + 1] = RatFn::one(field);
    }
    for j in 0..q {
        a[q - 1][j] = l.coeff(j).div(field, &lc).unwrap().neg(field);
    }
    ConnectionSystem { dim: q, a, provenance: "companion".into() }
}

/// Monomials of total degree n in `dim` variables; each is an exponent vector.
fn monomials(dim: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if dim == 1 {
            let mut m = prefix.clone();
            m.push(n);
            out.push(m);
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            rec(dim - 1, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    rec(dim, n, &mut vec![], &mut out);
    out
}

/// Tensor construction on a connection system.
pub fn tensor_connection<F: Field + PolyOps>(
    field: &F,
    s: &ConnectionSystem<F>,
    spec: TensorSpec,
    other: Option<&ConnectionSystem<F>>,
) -> ConnectionSystem<F> {
    match spec {
        TensorSpec::SymPower(n) => {
            let monos = monomials(s.dim, n);
            let index = |m: &Vec<usize>| monos.iter().position(|x| x == m).unwrap();
            let dim = monos.len();
            let mut a = vec![vec![RatFn::<F>::zero(); dim]; dim];
            // d(prod y_i^{m_i}) = sum_i m_i sum_k A[i][k] · (monomial with i -> k)
            for (col, m) in monos.iter().enumerate() {
                for i in 0..s.dim {
                    if m[i] == 0 {
                        continue;
                    }
                    let mult = field.from_i64(m[i] as i64);
                    for k in 0..s.dim {
                        if s.a[i][k].is_zero() {
                            continue;
                        }
                        let mut m2 = m.clone();
                        m2[i] -= 1;
                        m2[k] += 1;
                        let row = index(&m2);
                        let t = s.a[i][k].mul_scalar(field, &mult);
                        a[col][row] = a[col][row].add(field, &t);
                    }
                }
            }
            ConnectionSystem { dim, a, provenance: format!("sym^{} of {}", n, s.provenance) }
        }
        TensorSpec::ExtSquare => {
            let q = s.dim;
            let mut pairs = vec![];
            for i in 0..q {
                for j in (i + 1)..q {
                    pairs.push((i, j));
                }
            }
            let dim = pairs.len();
            let index = |i: usize, j: usize| pairs.iter().position(|&(a, b)| (a, b) == (i, j)).unwrap();
            let mut a = vec![vec![RatFn::<F>::zero(); dim]; dim];
            // d(w_ij) = sum_k A[i][k] w_kj + sum_k A[j][k] w_ik, w antisymmetric
            for (col, &(i, j)) in pairs.iter().enumerate() {
                for k in 0..q {
                    if !s.a[i][k].is_zero() && k != j {
                        let (r, c, sign) = if k < j { (k, j, 1) } else { (j, k, -1) };
                        let row = index(r, c);
                        let t = s.a[i][k].mul_scalar(field, &field.from_i64(sign));
                        a[col][row] = a[col][row].add(field, &t);
                    }
                    if !s.a[j][k].is_zero() && k != i {
                        let (r, c, sign) = if i < k { (i, k, 1) } else { (k, i, -1) };
                        let row = index(r, c);
                        let t = s.a[j][k].mul_scalar(field, &field.from_i64(sign));
                        a[col][row] = a[col][row].add(field, &t);
                    }
                }
            }
            ConnectionSystem { dim, a, provenance: format!("ext^2 of {}", s.provenance) }
        }
        TensorSpec::Product => {
            let o = other.expect("tensor product needs a second system");
            let dim = s.dim * o.dim;
            let idx = |i: usize, j: usize| i * o.dim + j;
            let mut a = vec![vec![RatFn::<F>::zero(); dim]; dim];
            for i in 0..s.dim {
                for j in 0..o.dim {
                    let col = idx(i, j);
                    for k in 0..s.dim {
                        if !s.a[i][k].is_zero() {
                            let row = idx(k, j);
                            a[col][row] = a[col][row].add(field, &s.a[i][k]);
                        }
                    }
                    for k in 0..o.dim {
                        if !o.a[j][k].is_zero() {
                            let row = idx(i, k);
                            a[col][row] = a[col][row].add(field, &o.a[j][k]);
                        }
                    }
                }
            }
            ConnectionSystem { dim, a, provenance: format!("{} (x) {}", s.provenance, o.provenance) }
        }
    }
}

/// Fields over which K(x) linear systems are solved with the modular
/// machinery.
pub trait KxSolve: ExponentField {
    fn solve_system(
        field: &Self,
        a: &[Vec<Poly<Self>>],
        b: &[Poly<Self>],
        seed: u64,
    ) -> Option<Vec<RatFn<Self>>>;

    /// Scalar samples of rational-function rows for rank probing.
    fn probe_samples(
        field: &Self,
        vectors: &[Vec<RatFn<Self>>],
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)>;

    /// Scalar samples of polynomial rows (skipping zeros of `den`).
    fn probe_poly_samples(
        field: &Self,
        vectors: &[Vec<Poly<Self>>],
        den: &Poly<Self>,
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)>;
}

impl KxSolve for PrimeField {
    fn solve_system(
        field: &Self,
        a: &[Vec<Poly<Self>>],
        b: &[Poly<Self>],
        seed: u64,
    ) -> Option<Vec<RatFn<Self>>> {
        solve_poly_system_fp(field, a, b, seed)
    }

    fn probe_samples(
        field: &Self,
        vectors: &[Vec<RatFn<Self>>],
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        'point: for _ in 0..50 {
            let xi = rng.gen_range(1..field.modulus());
            let mut rows = vec![];
            for v in vectors {
                let mut row = vec![];
                for e in v {
                    match e.eval(field, &xi) {
                        Some(val) => row.push(val),
                        None => continue 'point,
                    }
                }
                rows.push(row);
            }
            return Some((*field, rows));
        }
        None
    }

    fn probe_poly_samples(
        field: &Self,
        vectors: &[Vec<Poly<Self>>],
        den: &Poly<Self>,
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let xi = rng.gen_range(1..field.modulus());
            if field.is_zero(&den.eval(field, &xi)) {
                continue;
            }
            let rows = vectors
                .iter()
                .map(|v| v.iter().map(|e| e.eval(field, &xi)).collect())
                .collect();
            return Some((*field, rows));
        }
        None
    }
}

impl KxSolve for Rationals {
    fn solve_system(
        field: &Self,
        a: &[Vec<Poly<Self>>],
        b: &[Poly<Self>],
        seed: u64,
    ) -> Option<Vec<RatFn<Self>>> {
        solve_poly_system_qq(field, a, b, seed)
    }

    fn probe_samples(
        _field: &Self,
        vectors: &[Vec<RatFn<Self>>],
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)> {
        let mut primes = PrimeStream::large();
        'prime: for _ in 0..8 {
            let p = primes.next().unwrap();
            let fp = PrimeField::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            let mut reduced = vec![];
            for v in vectors {
                let mut row = vec![];
                for e in v {
                    match map_ratfn(&fp, e) {
                        Some(r) => row.push(r),
                        None => continue 'prime,
                    }
                }
                reduced.push(row);
            }
            'point: for _ in 0..50 {
                let xi = rng.gen_range(1..p);
                let mut rows = vec![];
                for v in &reduced {
                    let mut row = vec![];
                    for e in v {
                        match e.eval(&fp, &xi) {
                            Some(val) => row.push(val),
                            None => continue 'point,
                        }
                    }
                    rows.push(row);
                }
                return Some((fp, rows));
            }
        }
        None
    }

    fn probe_poly_samples(
        _field: &Self,
        vectors: &[Vec<Poly<Self>>],
        den: &Poly<Self>,
        seed: u64,
    ) -> Option<(PrimeField, Vec<Vec<u64>>)> {
        let mut primes = PrimeStream::large();
        'prime: for _ in 0..8 {
            let p = primes.next().unwrap();
            let fp = PrimeField::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            let mut reduced: Vec<Vec<Poly<PrimeField>>> = vec![];
            for v in vectors {
                let mut row = vec![];
                for e in v {
                    match crate::poly::map_poly(&fp, e) {
                        Some(r) => row.push(r),
                        None => continue 'prime,
                    }
                }
                reduced.push(row);
            }
            let denp = match crate::poly::map_poly(&fp, den) {
                Some(d) => d,
                None => continue 'prime,
            };
            for _ in 0..50 {
                let xi = rng.gen_range(1..p);
                if fp.is_zero(&denp.eval(&fp, &xi)) {
                    continue;
                }
                let rows = reduced
                    .iter()
                    .map(|v| v.iter().map(|e| e.eval(&fp, &xi)).collect())
                    .collect();
                return Some((fp, rows));
            }
        }
        None
    }
}

/// The minimal linear dependency among polynomial iterate vectors
/// v_k = u_k / d^k: finds the smallest k and coefficients with
/// Σ_{i<k} c_i·v_i = −v_k, returned as a monic operator. Working with
/// polynomial vectors over one common denominator keeps gcd normalization
/// out of the hot loop.
fn minimal_dependency_poly<F: KxSolve>(
    field: &F,
    us: &[Vec<Poly<F>>],
    den: &Poly<F>,
    seed: u64,
) -> Result<DiffOp<F>> {
    let max_order = us.len() - 1;
    let dim = us[0].len();
    if us[0].iter().all(|e| e.is_zero()) {
        return Ok(DiffOp::one(field));
    }
    // probe the first dependent index mod a prime at a random point; scaling
    // each vector by d(ξ)^{-k} ≠ 0 does not change the rank profile
    let mut start_k = 1usize;
    if let Some((fp, rows)) = F::probe_poly_samples(field, us, den, seed) {
        let mut rank_rows: Vec<Vec<u64>> = vec![];
        let mut k = 0usize;
        while k < rows.len() {
            let r_before = if rank_rows.is_empty() {
                0
            } else {
                Mat::from_rows(&fp, &rank_rows).rank(&fp)
            };
            rank_rows.push(rows[k].clone());
            let r_after = Mat::from_rows(&fp, &rank_rows).rank(&fp);
            if r_after == r_before {
                break;
            }
            k += 1;
        }
        start_k = k.max(1);
    }
    // solve at k = start_k, then grow; a bad probe point only
    // under-estimates and the exact solve certifies
    for k in start_k..=max_order {
        // Σ_{i<k} c_i·u_i·d^{k−i} = −u_k
        let mut dpow = vec![Poly::one(field)];
        for _ in 0..k {
            let next = dpow.last().unwrap().mul(field, den);
            dpow.push(next);
        }
        let mut a = vec![];
        let mut b = vec![];
        for coord in 0..dim {
            let row: Vec<Poly<F>> = (0..k)
                .map(|i| us[i][coord].mul(field, &dpow[k - i]))
                .collect();
            a.push(row);
            b.push(us[k][coord].neg(field));
        }
        if let Some(cs) = F::solve_system(field, &a, &b, seed) {
            let mut coeffs = cs;
            coeffs.push(RatFn::one(field));
            return Ok(DiffOp::new(field, coeffs));
        }
    }
    Err(Error::Degenerate(
        "no linear dependency found within the module dimension".into(),
    ))
}

/// Common-denominator form of a connection system: A = N/d with polynomial
/// N and a single denominator d (the lcm of all entry denominators).
pub fn poly_connection<F: Field + PolyOps>(
    field: &F,
    sys: &ConnectionSystem<F>,
) -> (Vec<Vec<Poly<F>>>, Poly<F>) {
    let mut den = Poly::one(field);
    for row in &sys.a {
        for e in row {
            if e.is_zero() {
                continue;
            }
            let g = den.gcd(field, &e.den);
            den = den.mul(field, &e.den.div_exact(field, &g));
        }
    }
    let num = sys
        .a
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        Poly::zero()
                    } else {
                        e.num.mul(field, &den.div_exact(field, &e.den))
                    }
                })
                .collect()
        })
        .collect();
    (num, den)
}

/// Minimal annihilator of the functional ⟨v, Y⟩ over solutions Y' = A·Y:
/// the module action is v -> v' + Aᵀ·v, iterated as polynomial vectors
/// u_k with v_k = u_k/d^k via u_{k+1} = d·u_k' − k·d'·u_k + (d·A)ᵀ·u_k.
pub fn minimal_annihilator<F: KxSolve>(
    field: &F,
    sys: &ConnectionSystem<F>,
    v: &[RatFn<F>],
    seed: u64,
) -> Result<DiffOp<F>> {
    assert_eq!(v.len(), sys.dim);
    if v.iter().all(|e| e.is_zero()) {
        return Err(Error::Degenerate("zero module vector".into()));
    }
    let (n, d) = poly_connection(field, sys);
    let u0 = clear_row(field, v);
    let dprime = d.derivative(field);
    let mut us = vec![u0];
    for k in 0..sys.dim {
        let prev = us.last().unwrap();
        let mut next = Vec::with_capacity(sys.dim);
        for i in 0..sys.dim {
            // d·u_i' − k·d'·u_i + Σ_j (d·A)[j][i]·u_j
            let mut acc = prev[i].derivative(field).mul(field, &d).sub(
                field,
                &prev[i]
                    .mul(field, &dprime)
                    .mul_scalar(field, &field.from_i64(k as i64)),
            );
            for (j, uj) in prev.iter().enumerate() {
                if n[j][i].is_zero() || uj.is_zero() {
                    continue;
                }
                acc = acc.add(field, &n[j][i].mul(field, uj));
            }
            next.push(acc);
        }
        us.push(next);
    }
    minimal_dependency_poly(field, &us, &d, seed)
}

/// Symmetric square of an operator (annihilates all products of solutions).
pub fn sym_square<F: KxSolve>(field: &F, l: &DiffOp<F>) -> Result<DiffOp<F>> {
    sym_power(field, l, 2)
}

/// Symmetric n-th power.
pub fn sym_power<F: KxSolve>(field: &F, l: &DiffOp<F>, n: usize) -> Result<DiffOp<F>> {
    assert!(l.ord() >= 1);
    let comp = companion(field, l);
    let sys = tensor_connection(field, &comp, TensorSpec::SymPower(n), None);
    // cyclic vector: the monomial y^n, first in the ordering
    let monos = monomials(comp.dim, n);
    let target: Vec<usize> = {
        let mut m = vec![0; comp.dim];
        m[0] = n;
        m
    };
    let pos = monos.iter().position(|m| *m == target).unwrap();
    let mut v = vec![RatFn::<F>::zero(); sys.dim];
    v[pos] = RatFn::one(field);
    match minimal_annihilator(field, &sys, &v, 0x5e11) {
        Ok(op) => Ok(op),
        Err(_) => fallback_random_vector(field, &sys),
    }
}

/// Exterior square of an operator (annihilates the minors y·z' − z·y' of
/// solution pairs). For order two this is D − W'/W.
pub fn ext_square<F: KxSolve>(field: &F, l: &DiffOp<F>) -> Result<DiffOp<F>> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    assert!(q >= 2, "exterior square needs order >= 2");
    if q == 2 {
        let w = l.wronskian_logderivative(field);
        return Ok(DiffOp::new(field, vec![w.neg(field), RatFn::one(field)]));
    }
    let comp = companion(field, l);
    let sys = tensor_connection(field, &comp, TensorSpec::ExtSquare, None);
    // cyclic vector e0 ∧ e1 = w_{01}, first pair in the ordering
    let mut v = vec![RatFn::<F>::zero(); sys.dim];
    v[0] = RatFn::one(field);
    match minimal_annihilator(field, &sys, &v, 0xe872) {
        Ok(op) => Ok(op),
        Err(_) => fallback_random_vector(field, &sys),
    }
}

/// Degenerate cyclic vector: retry with random small-integer vectors.
fn fallback_random_vector<F: KxSolve>(field: &F, sys: &ConnectionSystem<F>) -> Result<DiffOp<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa11bac);
    for _ in 0..4 {
        let v: Vec<RatFn<F>> = (0..sys.dim)
            .map(|_| RatFn::from_i64(field, rng.gen_range(1..7)))
            .collect();
        if let Ok(op) = minimal_annihilator(field, sys, &v, rng.gen()) {
            return Ok(op);
        }
    }
    Err(Error::Degenerate("tensor-power annihilator not found".into()))
}

/// Gauss hypergeometric operator z(1−z)D² + (c−(a+b+1)z)D − ab.
pub fn hypergeometric_operator(
    qq: &Rationals,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Result<DiffOp<Rationals>> {
    use num_traits::Signed;
    if c.is_integer() && !c.is_positive() {
        return Err(Error::Degenerate(
            "lower parameter c is a nonpositive integer: series undefined".into(),
        ));
    }
    let z = Poly::x(qq);
    let z1z = z.mul(qq, &Poly::from_i64(qq, &[1, -1]));
    let lin = Poly::new(qq, vec![c.clone(), -(a + b + BigRational::from_integer(1.into()))]);
    let cst = Poly::constant(qq, -(a * b));
    Ok(DiffOp::new(
        qq,
        vec![RatFn::poly(qq, cst), RatFn::poly(qq, lin), RatFn::poly(qq, z1z)],
    ))
}

/// ₂F₁ series oracle: Σ (a)_n (b)_n / ((c)_n n!) zⁿ coefficients via the
/// Pochhammer term ratio.
pub fn gauss_series_coeffs(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    n: usize,
) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n);
    let mut term = BigRational::from_integer(1.into());
    for k in 0..n {
        out.push(term.clone());
        let kk = BigRational::from_integer(k.into());
        let one = BigRational::from_integer(1.into());
        let num = (a + &kk) * (b + &kk);
        let den = (c + &kk) * (&kk + one);
        term = term * num / den;
    }
    out
}

/// Substitute z → p(x) into an operator (rational pullback): D_z = (1/p')·D_x.
pub fn pullback<F: Field + PolyOps>(field: &F, l: &DiffOp<F>, p: &RatFn<F>) -> DiffOp<F> {
    assert!(!p.derivative(field).is_zero(), "pullback by a constant");
    let dp_inv = p.derivative(field).inv(field).unwrap();
    let gen = DiffOp::new(field, vec![RatFn::zero(), dp_inv]);
    let mut acc = DiffOp::zero();
    let mut pow = DiffOp::one(field);
    for (i, a) in l.coeffs.iter().enumerate() {
        if !a.is_zero() {
            let ai = a.compose_ratfn(field, p);
            acc = acc.add(field, &pow.mul_ratfn(field, &ai));
        }
        if i + 1 < l.coeffs.len() {
            pow = gen.mul(field, &pow);
        }
    }
    acc
}

/// Minimal M with M·R ≡ 0 modulo left multiples of L: the annihilator of
/// R(y) over solutions y of L. Returns the order-zero marker `1` when R
/// maps every solution to zero (R ≡ 0 mod L).
pub fn image_annihilator<F: KxSolve>(field: &F, l: &DiffOp<F>, r: &DiffOp<F>) -> Result<DiffOp<F>> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    let (_, w0) = r.right_divide(field, l);
    if w0.is_zero() {
        return Ok(DiffOp::one(field));
    }
    // cleared form of L: head h and coefficient polynomials a_j; the
    // iteration D∘w mod L then has the polynomial form
    // ω_{k+1,j} = h·(ω_{k,j−1} + ω_{k,j}') − k·h'·ω_{k,j} − ω_{k,q−1}·a_j
    // for w_k = ω_k / h^k.
    let (polys, _) = crate::frobenius::clear_denominators(field, l);
    let h = polys.last().unwrap().clone();
    let hprime = h.derivative(field);
    let v0: Vec<RatFn<F>> = (0..q).map(|i| w0.coeff(i)).collect();
    let u0 = clear_row(field, &v0);
    let mut us = vec![u0];
    for k in 0..q {
        let prev = us.last().unwrap();
        let top = prev[q - 1].clone();
        let mut next = Vec::with_capacity(q);
        for j in 0..q {
            let mut brace = prev[j].derivative(field);
            if j > 0 {
                brace = brace.add(field, &prev[j - 1]);
            }
            let mut acc = brace.mul(field, &h);
            acc = acc.sub(
                field,
                &prev[j]
                    .mul(field, &hprime)
                    .mul_scalar(field, &field.from_i64(k as i64)),
            );
            if !top.is_zero() && !polys[j].is_zero() {
                acc = acc.sub(field, &top.mul(field, &polys[j]));
            }
            next.push(acc);
        }
        us.push(next);
    }
    minimal_dependency_poly(field, &us, &h, 0x1a6e)
}

/// Solve S·M = L·R by right division; errors when M does not right-divide
/// L·R exactly (R is then not an intertwiner from M to L).
pub fn complete_intertwining<F: Field + PolyOps>(
    field: &F,
    l: &DiffOp<F>,
    m: &DiffOp<F>,
    r: &DiffOp<F>,
) -> Result<DiffOp<F>> {
    let prod = l.mul(field, r);
    let (s, rem) = prod.right_divide(field, m);
    if !rem.is_zero() {
        return Err(Error::NoSolution("nonzero remainder: not an intertwiner".into()));
    }
    let back = s.mul(field, m);
    if back.sub(field, &prod).is_zero() {
        Ok(s)
    } else {
        Err(Error::CertificationFailed("intertwining identity".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::frobenius::{annihilates, frobenius_basis};
    use crate::series::LogSeries;

    fn q() -> Rationals {
        Rationals
    }

    fn op_q(polys: &[&[i64]]) -> DiffOp<Rationals> {
        let f = q();
        DiffOp::from_polys(&f, &polys.iter().map(|c| Poly::from_i64(&f, c)).collect::<Vec<_>>())
    }

    #[test]
    fn companion_examples() {
        let f = q();
        let c = companion(&f, &DiffOp::d_pow(&f, 2));
        assert_eq!(c.a[0][1], RatFn::one(&f));
        assert!(c.a[1][0].is_zero() && c.a[1][1].is_zero());
        // D² + x: last row (−x, 0)
        let l = op_q(&[&[0, 1], &[0], &[1]]);
        let c = companion(&f, &l);
        assert_eq!(c.a[1][0], RatFn::poly(&f, Poly::from_i64(&f, &[0, -1])));
        assert!(c.a[1][1].is_zero());
    }

    #[test]
    fn minimal_annihilator_of_companion_e1() {
        let f = q();
        let l = DiffOp::d_pow(&f, 2);
        let c = companion(&f, &l);
        let mut v = vec![RatFn::<Rationals>::zero(); 2];
        v[0] = RatFn::one(&f);
        let m = minimal_annihilator(&f, &c, &v, 7).unwrap();
        assert_eq!(m, DiffOp::d_pow(&f, 2));
    }

    #[test]
    fn sym_square_of_d2_is_d3() {
        let f = q();
        let s = sym_square(&f, &DiffOp::d_pow(&f, 2)).unwrap();
        assert_eq!(s, DiffOp::d_pow(&f, 3));
    }

    #[test]
    fn ext_square_of_order2_is_wronskian_op() {
        let f = q();
        let l = DiffOp::new(
            &f,
            vec![
                RatFn::from_i64(&f, 5),
                RatFn::new(&f, Poly::from_i64(&f, &[3]), Poly::x(&f)),
                RatFn::one(&f),
            ],
        );
        let e = ext_square(&f, &l).unwrap();
        let w = l.wronskian_logderivative(&f);
        assert_eq!(e, DiffOp::new(&f, vec![w.neg(&f), RatFn::one(&f)]));
    }

    #[test]
    fn ext_square_of_2dim_system_is_trace() {
        let f = q();
        // system [[0,1],[p,r]]: Ext² is 1-dim with entry trace = r
        let p = RatFn::from_i64(&f, 7);
        let r = RatFn::new(&f, Poly::from_i64(&f, &[1, 1]), Poly::x(&f));
        let sys = ConnectionSystem {
            dim: 2,
            a: vec![vec![RatFn::zero(), RatFn::one(&f)], vec![p, r.clone()]],
            provenance: "test".into(),
        };
        let e = tensor_connection(&f, &sys, TensorSpec::ExtSquare, None);
        assert_eq!(e.dim, 1);
        assert_eq!(e.a[0][0], r);
    }

    #[test]
    fn sym_square_dimension_bookkeeping_mod_p() {
        // Sym²(Sym²(order-2)) drops to order 5: the C1^(3) = 0 case
        let fp = PrimeField::new(DEFAULT_PRIME);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..3 {
            let m2 = DiffOp::new(
                &fp,
                vec![
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..50), rng.gen_range(1..50)])),
                    RatFn::poly(&fp, Poly::new(&fp, vec![rng.gen_range(1..50)])),
                    RatFn::one(&fp),
                ],
            );
            let l3 = sym_square(&fp, &m2).unwrap();
            assert_eq!(l3.order(), Some(3));
            let s = sym_square(&fp, &l3).unwrap();
            assert_eq!(s.order(), Some(5), "C1^(3) = 0 case");
        }
    }

    #[test]
    fn hypergeometric_annihilates_oracle_series() {
        let f = q();
        let half = BigRational::new(1.into(), 2.into());
        let one = BigRational::from_integer(1.into());
        // K-type: 2F1(1/2,1/2;1;16x): 1 + 4x + 36x² + 400x³
        let hyp = hypergeometric_operator(&f, &half, &half, &one).unwrap();
        let lk = pullback(&f, &hyp, &RatFn::poly(&f, Poly::from_i64(&f, &[0, 16])));
        let coeffs = gauss_series_coeffs(&half, &half, &one, 20);
        let scaled: Vec<BigRational> = coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * BigRational::from_integer(num_bigint::BigInt::from(16u64).pow(n as u32)))
            .collect();
        assert_eq!(scaled[1], BigRational::from_integer(4.into()));
        assert_eq!(scaled[2], BigRational::from_integer(36.into()));
        assert_eq!(scaled[3], BigRational::from_integer(400.into()));
        let s = LogSeries::from_coeffs(&f, scaled, 20);
        assert!(annihilates(&f, &lk, &s, 0));
        // E-type: 2F1(1/2,−1/2;1;16x): 1 − 4x − 12x² − ...
        let mhalf = -half.clone();
        let hyp_e = hypergeometric_operator(&f, &half, &mhalf, &one).unwrap();
        let le = pullback(&f, &hyp_e, &RatFn::poly(&f, Poly::from_i64(&f, &[0, 16])));
        let ce = gauss_series_coeffs(&half, &mhalf, &one, 20);
        let scaled_e: Vec<BigRational> = ce
            .iter()
            .enumerate()
            .map(|(n, c)| c * BigRational::from_integer(num_bigint::BigInt::from(16u64).pow(n as u32)))
            .collect();
        assert_eq!(scaled_e[1], BigRational::from_integer((-4).into()));
        assert_eq!(scaled_e[2], BigRational::from_integer((-12).into()));
        let se = LogSeries::from_coeffs(&f, scaled_e, 20);
        assert!(annihilates(&f, &le, &se, 0));
        // constant solution for a = 0
        let zero = BigRational::from_integer(0.into());
        let h0 = hypergeometric_operator(&f, &zero, &half, &one).unwrap();
        let ones = LogSeries::from_coeffs(&f, vec![f.one()], 4);
        assert!(annihilates(&f, &h0, &ones, 0));
    }

    #[test]
    fn hypergeometric_rejects_bad_c() {
        let f = q();
        let half = BigRational::new(1.into(), 2.into());
        let zero = BigRational::from_integer(0.into());
        assert!(hypergeometric_operator(&f, &half, &half, &zero).is_err());
    }

    #[test]
    fn pullback_examples() {
        let f = q();
        // pullback(D − 1, x²) = D − 2x up to normalization (solutions e^{x²})
        let l = op_q(&[&[-1], &[1]]);
        let p = RatFn::poly(&f, Poly::from_i64(&f, &[0, 0, 1]));
        let got = pullback(&f, &l, &p);
        let cleared = got.mul_ratfn(&f, &RatFn::poly(&f, Poly::from_i64(&f, &[0, 2])));
        assert_eq!(cleared, op_q(&[&[0, -2], &[1]]));
        // pullback(pullback(L, p), id) = pullback(L, p)
        let id = RatFn::x(&f);
        let l2 = op_q(&[&[1, 2], &[0, 3], &[1]]);
        let lp = pullback(&f, &l2, &p);
        assert_eq!(pullback(&f, &lp, &id), lp);
    }

    #[test]
    fn image_annihilator_derivative_of_d2() {
        // image of {1, x} under D is {0, 1}: annihilator D
        let f = q();
        let m = image_annihilator(&f, &DiffOp::d_pow(&f, 2), &DiffOp::d(&f)).unwrap();
        assert_eq!(m, DiffOp::d(&f));
    }

    #[test]
    fn complete_intertwining_examples() {
        let f = q();
        let s = complete_intertwining(&f, &DiffOp::d(&f), &DiffOp::d(&f), &DiffOp::one(&f)).unwrap();
        assert_eq!(s, DiffOp::one(&f));
        let err = complete_intertwining(
            &f,
            &DiffOp::d_pow(&f, 2),
            &op_q(&[&[1], &[0], &[1]]),
            &DiffOp::one(&f),
        );
        assert!(err.is_err());
    }

    #[test]
    fn sym_and_ext_annihilate_solution_products() {
        let f = q();
        // Airy: D² − x, ordinary origin
        let airy = op_q(&[&[0, -1], &[0], &[1]]);
        let n = 24;
        let basis = frobenius_basis(&f, &airy, n).unwrap();
        assert_eq!(basis.len(), 2);
        let s2 = sym_square(&f, &airy).unwrap();
        let e2 = ext_square(&f, &airy).unwrap();
        for a in &basis.members {
            for b in &basis.members {
                let prod = a.mul(&f, b);
                assert!(annihilates(&f, &s2, &prod, 4));
                let wr = a.mul(&f, &b.derivative(&f)).add(
                    &f,
                    &b.mul(&f, &a.derivative(&f)).scale(&f, &f.from_i64(-1)),
                );
                assert!(annihilates(&f, &e2, &wr, 4));
            }
        }
    }

    #[test]
    fn sym4_of_order2_has_order5() {
        let f = q();
        let airy = op_q(&[&[0, -1], &[0], &[1]]);
        let s4 = sym_power(&f, &airy, 4).unwrap();
        assert_eq!(s4.order(), Some(5));
    }
}
