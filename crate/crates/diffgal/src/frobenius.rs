//! Local analysis at singular points: indicial polynomials, local exponents,
//! apparent-singularity detection, and Frobenius bases of truncated
//! log-series solutions.
//!
//! Operators are rewritten in θ = x·d/dx form, `x^v · L = Σ_j x^j b_j(θ)`
//! with `b_0 ≠ 0`; `b_0` is the indicial polynomial at the origin. Resonant
//! exponent classes are handled by the full log-ladder: coefficients carry
//! linear forms in the free parameters introduced at each resonance, so one
//! sequential pass produces the complete basis. Block ordering is
//! deterministic: descending exponent, then ascending log level.

use crate::error::{Error, Result};
use crate::field::{
    rational_reconstruct, Field, PrimeField, PrimeStream, Rationals,
};
use crate::ore::DiffOp;
use crate::poly::{Poly, PolyOps};
use crate::ratfn::ExpIntegrate;
use crate::series::{LogSeries, SolutionBasis};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default series truncation length.
pub const DEFAULT_TRUNCATION: usize = 600;

/// Guard terms beyond the minimum needed when solving for log-free
/// combinations; 2·(order)² by default.
pub fn guard_margin(order: usize) -> usize {
    2 * order * order
}

/// θ-form of an operator: `L = x^offset · Σ_j x^j b_j(θ)` with `b_0 ≠ 0`,
/// together with the polynomial that cleared the denominators.
#[derive(Debug, Clone)]
pub struct ThetaForm<F: Field> {
    /// (shift j, b_j as a polynomial in λ).
    pub terms: Vec<(usize, Poly<F>)>,
    /// Global power of x: the cleared operator equals x^offset·Σ x^j b_j(θ).
    pub offset: isize,
    /// Denominator-clearing polynomial: cleared = clearing · original.
    pub clearing: Poly<F>,
}

/// Clear an operator to polynomial coefficients: returns coefficient
/// polynomials and the multiplier polynomial (lcm of denominators).
pub fn clear_denominators<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> (Vec<Poly<F>>, Poly<F>) {
    let mut lcm = Poly::one(field);
    for c in &l.coeffs {
        if c.is_zero() {
            continue;
        }
        let g = lcm.gcd(field, &c.den);
        lcm = lcm.mul(field, &c.den.div_exact(field, &g));
    }
    let polys = l
        .coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                Poly::zero()
            } else {
                c.num.mul(field, &lcm.div_exact(field, &c.den))
            }
        })
        .collect();
    (polys, lcm)
}

/// Falling factorial λ(λ−1)···(λ−i+1) as a λ-polynomial.
fn falling_factorial<F: Field>(field: &F, i: usize) -> Poly<F> {
    let mut acc = Poly::one(field);
    for t in 0..i {
        let lin = Poly::new(field, vec![field.from_i64(-(t as i64)), field.one()]);
        acc = acc.mul(field, &lin);
    }
    acc
}

pub fn theta_form<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> ThetaForm<F> {
    assert!(!l.is_zero(), "theta form of the zero operator");
    let q = l.order().unwrap();
    let (polys, clearing) = clear_denominators(field, l);
    // x^q L = Σ_i (a_i x^{q-i}) [θ]_i ; collect coefficient of x^k
    let mut by_shift: Vec<Poly<F>> = vec![];
    for (i, a) in polys.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let ax = a.shift_up(field, q - i);
        let ff = falling_factorial(field, i);
        for (k, c) in ax.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            if by_shift.len() <= k {
                by_shift.resize(k + 1, Poly::zero());
            }
            by_shift[k] = by_shift[k].add(field, &ff.mul_scalar(field, c));
        }
    }
    let j0 = by_shift
        .iter()
        .position(|p| !p.is_zero())
        .expect("nonzero operator has a nonzero theta term");
    let terms: Vec<(usize, Poly<F>)> = by_shift
        .into_iter()
        .enumerate()
        .skip(j0)
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| (k - j0, p))
        .collect();
    ThetaForm { terms, offset: j0 as isize - q as isize, clearing }
}

/// Indicial polynomial of L at the origin (the b_0 of the θ-form).
pub fn indicial_poly_at_zero<F: Field + PolyOps>(field: &F, l: &DiffOp<F>) -> Poly<F> {
    let tf = theta_form(field, l);
    tf.terms[0].1.clone()
}

/// Apply the *cleared* operator to a log-series: the image of
/// clearing(x)·L. Exact on the full valid window.
pub fn apply_cleared<F: Field + PolyOps>(
    field: &F,
    tf: &ThetaForm<F>,
    s: &LogSeries<F>,
) -> LogSeries<F> {
    let klev = s.blocks.len();
    let n = s.trunc;
    let mut blocks = vec![vec![field.zero(); n]; klev];
    // precompute λ-derivatives of each b_j up to order klev−1, scaled by 1/s!
    for (j, b) in &tf.terms {
        let mut derivs = Vec::with_capacity(klev);
        let mut cur = b.clone();
        let mut fact = field.one();
        for sidx in 0..klev {
            if sidx > 0 {
                cur = cur.derivative(field);
                fact = field.mul(&fact, &field.from_i64(sidx as i64));
            }
            // store b^{(s)} / s! · s! = we need C(k, s)·b^{(s)}; use b^{(s)} directly
            derivs.push(cur.clone());
            let _ = &fact;
        }
        // contribution: in (k, m) -> out (k−s, m+j), factor C(k,s)·b^{(s)}(ρ+m)
        for k in 0..klev {
            for sidx in 0..=k {
                let bk = &derivs[sidx];
                if bk.is_zero() {
                    continue;
                }
                let binom = field.from_i64(binom_i64(k, sidx));
                for m in 0..n {
                    if *j + m >= n {
                        break;
                    }
                    let c = s.coeff(field, k, m);
                    if field.is_zero(&c) {
                        continue;
                    }
                    let e = &s.rho + BigRational::from_integer(m.into());
                    let ee = field
                        .embed_rational(&e)
                        .expect("exponent embeds in coefficient field");
                    let val = bk.eval(field, &ee);
                    let t = field.mul(&field.mul(&binom, &val), &c);
                    let slot = &mut blocks[k - sidx][m + j];
                    *slot = field.add(slot, &t);
                }
            }
        }
    }
    LogSeries {
        rho: &s.rho + BigRational::from_integer(BigInt::from(tf.offset)),
        blocks,
        trunc: n,
    }
}

fn binom_i64(n: usize, k: usize) -> i64 {
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i as i64 + 1);
    }
    acc
}

/// Apply an operator to a log-series exactly (the clearing polynomial is
/// divided back out as a power series).
pub fn apply_op<F: Field + PolyOps>(field: &F, l: &DiffOp<F>, s: &LogSeries<F>) -> LogSeries<F> {
    let tf = theta_form(field, l);
    let img = apply_cleared(field, &tf, s);
    divide_series_by_poly(field, &img, &tf.clearing)
}

/// Divide a log-series by a polynomial: c = x^k·c̃ with c̃(0) ≠ 0; multiply
/// by the inverse power series of c̃ and shift ρ by −k.
pub fn divide_series_by_poly<F: Field + PolyOps>(
    field: &F,
    s: &LogSeries<F>,
    c: &Poly<F>,
) -> LogSeries<F> {
    assert!(!c.is_zero());
    let k = c.coeffs.iter().position(|x| !field.is_zero(x)).unwrap();
    let unit: Vec<F::Elem> = c.coeffs[k..].to_vec();
    // inverse series of unit to length s.trunc
    let n = s.trunc;
    let mut inv = vec![field.zero(); n];
    let u0 = field.inv(&unit[0]).unwrap();
    inv[0] = u0.clone();
    for m in 1..n {
        let mut acc = field.zero();
        for i in 1..=m.min(unit.len() - 1) {
            let t = field.mul(&unit[i], &inv[m - i]);
            acc = field.add(&acc, &t);
        }
        inv[m] = field.neg(&field.mul(&u0, &acc));
    }
    let mut out = s.mul_poly_coeffs(field, &inv);
    out.rho = &out.rho - BigRational::from_integer(k.into());
    out
}

/// True if the operator annihilates the series through its valid window,
/// allowing `slack` trailing terms of noise.
pub fn annihilates<F: Field + PolyOps>(
    field: &F,
    l: &DiffOp<F>,
    s: &LogSeries<F>,
    slack: usize,
) -> bool {
    let tf = theta_form(field, l);
    let img = apply_cleared(field, &tf, s);
    let lim = img.trunc.saturating_sub(slack);
    for b in &img.blocks {
        for c in b.iter().take(lim) {
            if !field.is_zero(c) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// root finding for indicial polynomials
// ---------------------------------------------------------------------------

/// Rational roots of an indicial polynomial, with multiplicity, plus the
/// degree of the unaccounted factor and any spurious (unliftable mod-p)
/// roots.
#[derive(Debug, Clone, Default)]
pub struct IndicialRoots {
    pub rational: Vec<(BigRational, usize)>,
    pub residual_degree: usize,
    pub spurious: Vec<String>,
}

pub trait ExponentField: Field + PolyOps + ExpIntegrate + Sized {
    fn indicial_roots(field: &Self, b0: &Poly<Self>) -> IndicialRoots;
}

impl ExponentField for Rationals {
    fn indicial_roots(field: &Self, b0: &Poly<Self>) -> IndicialRoots {
        let mut out = IndicialRoots::default();
        let mut rem = b0.canonicalize(field);
        // candidates via roots modulo two large primes + CRT + reconstruction
        let mut candidates: Vec<BigRational> = vec![];
        let mut prime_iter = PrimeStream::large();
        let mut prime_roots: Vec<(u64, Vec<u64>)> = vec![];
        while prime_roots.len() < 2 {
            let p = prime_iter.next().unwrap();
            let fp = PrimeField::new(p);
            if let Some(bp) = crate::poly::map_poly(&fp, &rem) {
                if bp.deg() == rem.deg() {
                    prime_roots.push((p, roots_mod_p(&fp, &bp)));
                }
            }
        }
        let (p1, r1) = &prime_roots[0];
        let (p2, r2) = &prime_roots[1];
        for a in r1 {
            for b in r2 {
                let mut acc = crate::field::CrtAccum::new();
                acc.push(*a, *p1);
                acc.push(*b, *p2);
                if let Some(c) = rational_reconstruct(&acc.residue, &acc.modulus) {
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
        for c in candidates {
            let lin = Poly::new(field, vec![field.neg(&c), field.one()]);
            let mut mult = 0;
            loop {
                let (quo, r) = rem.divmod(field, &lin);
                if r.is_zero() {
                    mult += 1;
                    rem = quo;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.rational.push((c, mult));
            }
        }
        out.residual_degree = rem.deg().max(0) as usize;
        sort_roots(&mut out.rational);
        out
    }
}

impl ExponentField for PrimeField {
    fn indicial_roots(field: &Self, b0: &Poly<Self>) -> IndicialRoots {
        let mut out = IndicialRoots::default();
        let mut rem = b0.make_monic(field);
        for r in roots_mod_p(field, &rem) {
            let lin = Poly::new(field, vec![field.neg(&r), field.one()]);
            let mut mult = 0;
            loop {
                let (quo, rr) = rem.divmod(field, &lin);
                if rr.is_zero() {
                    mult += 1;
                    rem = quo;
                } else {
                    break;
                }
            }
            if mult == 0 {
                continue;
            }
            match lift_root(field, r) {
                Some(c) => out.rational.push((c, mult)),
                None => out.spurious.push(format!("{} (mod {})", r, field.modulus())),
            }
        }
        out.residual_degree = rem.deg().max(0) as usize;
        sort_roots(&mut out.rational);
        out
    }
}

fn sort_roots(v: &mut [(BigRational, usize)]) {
    v.sort_by(|a, b| a.0.cmp(&b.0));
}

/// Lift a mod-p root to a small rational exponent; roots that do not lift
/// are spurious candidates in the sense of the non-minimal-order remark.
fn lift_root(fp: &PrimeField, r: u64) -> Option<BigRational> {
    let c = rational_reconstruct(&BigInt::from(r), &BigInt::from(fp.modulus()))?;
    let num_ok = c.numer().abs() <= BigInt::from(100_000u64);
    let den_ok = c.denom() <= &BigInt::from(64u64);
    if num_ok && den_ok {
        Some(c)
    } else {
        None
    }
}

/// All roots of a polynomial in 𝔽_p (Cantor–Zassenhaus on the linear part).
pub fn roots_mod_p(fp: &PrimeField, f: &Poly<PrimeField>) -> Vec<u64> {
    let f = f.make_monic(fp);
    if f.deg() <= 0 {
        return vec![];
    }
    // x^p mod f
    let xp = powmod_poly(fp, &Poly::x(fp), fp.modulus(), &f);
    let lin = xp.sub(fp, &Poly::x(fp));
    let g = f.gcd(fp, &lin);
    let mut roots = vec![];
    split_linear(fp, &g, &mut roots, 1);
    roots.sort_unstable();
    roots
}

fn powmod_poly(fp: &PrimeField, base: &Poly<PrimeField>, mut e: u64, m: &Poly<PrimeField>) -> Poly<PrimeField> {
    let mut acc = Poly::one(fp);
    let mut b = base.rem(fp, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(fp, &b).rem(fp, m);
        }
        b = b.mul(fp, &b).rem(fp, m);
        e >>= 1;
    }
    acc
}

fn split_linear(fp: &PrimeField, g: &Poly<PrimeField>, roots: &mut Vec<u64>, depth: u64) {
    match g.deg() {
        d if d <= 0 => {}
        1 => {
            // root of c0 + c1 x
            let c0 = g.coeff(fp, 0);
            let c1 = g.coeff(fp, 1);
            let r = fp.neg(&fp.mul(&c0, &fp.inv(&c1).unwrap()));
            roots.push(r);
        }
        _ => {
            // random split: gcd(g, (x+a)^((p-1)/2) − 1)
            let mut a = depth.wrapping_mul(0x9E3779B97F4A7C15) % fp.modulus();
            loop {
                let shift = Poly::new(fp, vec![a, 1]);
                let h = powmod_poly(fp, &shift, (fp.modulus() - 1) / 2, g);
                let h1 = h.sub(fp, &Poly::one(fp));
                let d = g.gcd(fp, &h1);
                if d.deg() > 0 && d.deg() < g.deg() {
                    let rest = g.div_exact(fp, &d);
                    split_linear(fp, &d, roots, depth + 1);
                    split_linear(fp, &rest, roots, depth + 1);
                    return;
                }
                a = (a + 1) % fp.modulus();
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Frobenius basis at the origin
// ---------------------------------------------------------------------------

type LinForm<F> = Vec<<F as Field>::Elem>;

fn lin_zero<F: Field>(field: &F, nparams: usize) -> LinForm<F> {
    vec![field.zero(); nparams]
}

fn lin_grow<F: Field>(field: &F, v: &mut LinForm<F>, nparams: usize) {
    while v.len() < nparams {
        v.push(field.zero());
    }
}

/// Frobenius basis of truncated log-series solutions at the origin.
///
/// Requires a regular or regular-singular origin; only exponents read from
/// the rational part of the indicial polynomial are generated. Over 𝔽_p a
/// resonance collision caused by the prime is reported as
/// [`Error::PrimeCollision`].
pub fn frobenius_basis<F: ExponentField>(
    field: &F,
    l: &DiffOp<F>,
    trunc: usize,
) -> Result<SolutionBasis<F>> {
    let tf = theta_form(field, l);
    let b0 = &tf.terms[0].1;
    let roots = F::indicial_roots(field, b0);
    // group by integer difference
    let mut classes: Vec<Vec<(BigRational, usize)>> = vec![];
    'outer: for (r, m) in &roots.rational {
        for class in classes.iter_mut() {
            if (&class[0].0 - r).is_integer() {
                class.push((r.clone(), *m));
                continue 'outer;
            }
        }
        classes.push(vec![(r.clone(), *m)]);
    }
    let mut members: Vec<(BigRational, usize, LogSeries<F>)> = vec![];
    for mut class in classes {
        class.sort_by(|a, b| a.0.cmp(&b.0));
        let base = class[0].0.clone();
        let mu: usize = class.iter().map(|(_, m)| m).sum();
        let mut resonance: std::collections::HashMap<usize, usize> = Default::default();
        let mut max_off = 0usize;
        for (r, m) in &class {
            let off = (r - &base).to_integer().to_usize().unwrap();
            resonance.insert(off, *m);
            max_off = max_off.max(off);
        }
        assert!(trunc > max_off + 4, "truncation too short for exponent spread");
        let sols = solve_class(field, &tf, &base, mu, &resonance, trunc)?;
        for (intro_off, level, series) in sols {
            let e = &base + BigRational::from_integer(intro_off.into());
            members.push((e, level, series));
        }
    }
    // descending exponent, then ascending log level
    members.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut basis = SolutionBasis { members: vec![], entry_exponents: vec![] };
    for (e, _lvl, s) in members {
        basis.members.push(s.normalized(field));
        basis.entry_exponents.push(e);
    }
    Ok(basis)
}

/// Solve one exponent class with the parameterized log-ladder.
/// Returns (introduction offset, log level, series) triples.
#[allow(clippy::type_complexity)]
fn solve_class<F: ExponentField>(
    field: &F,
    tf: &ThetaForm<F>,
    base: &BigRational,
    mu: usize,
    resonance: &std::collections::HashMap<usize, usize>,
    trunc: usize,
) -> Result<Vec<(usize, usize, LogSeries<F>)>> {
    let klev = mu; // log levels 0..mu-1
    let b0 = &tf.terms[0].1;
    // λ-derivatives of every b_j up to order klev−1
    let mut term_derivs: Vec<(usize, Vec<Poly<F>>)> = vec![];
    for (j, b) in &tf.terms {
        let mut ds = vec![b.clone()];
        for s in 1..klev {
            let d = ds[s - 1].derivative(field);
            ds.push(d);
        }
        term_derivs.push((*j, ds));
    }
    let base_elem = field.embed_rational(base).ok_or_else(|| match field.ctx() {
        crate::field::FieldCtx::PrimeField { modulus } => Error::PrimeCollision { prime: modulus },
        _ => Error::Degenerate("exponent does not embed".into()),
    })?;
    // sol[k][n] = linear form in parameters
    let mut sol: Vec<Vec<LinForm<F>>> = vec![vec![]; klev];
    let mut nparams = 0usize;
    let mut param_meta: Vec<(usize, usize)> = vec![]; // (intro offset n, log level k)
    let mut e_n = base_elem.clone();
    for n in 0..trunc {
        if n > 0 {
            e_n = field.add(&e_n, &field.one());
        }
        // rhs[j] = −Σ_{jj≥1} Σ_s C(j+s, s) b_jj^{(s)}(base + n − jj) · sol[j+s][n−jj]
        let mut rhs: Vec<LinForm<F>> = vec![lin_zero(field, nparams); klev];
        for (jj, ds) in &term_derivs {
            if *jj == 0 || *jj > n {
                continue;
            }
            let m = n - *jj;
            let e_m = {
                // base + m
                let mut e = base_elem.clone();
                for _ in 0..m {
                    e = field.add(&e, &field.one());
                }
                e
            };
            for k in 0..klev {
                for s in 0..=k {
                    let j = k - s;
                    let bval = ds[s].eval(field, &e_m);
                    if field.is_zero(&bval) {
                        continue;
                    }
                    let coef = field.mul(&field.from_i64(binom_i64(k, s)), &bval);
                    let src = &sol[k][m];
                    let dst = &mut rhs[j];
                    lin_grow(field, dst, nparams);
                    for (t, sv) in src.iter().enumerate() {
                        if field.is_zero(sv) {
                            continue;
                        }
                        let add = field.mul(&coef, sv);
                        dst[t] = field.sub(&dst[t], &add);
                    }
                }
            }
        }
        // local matrix: diag b0(e_n), multiplicities
        let m_res = resonance.get(&n).cloned().unwrap_or(0);
        // derivative values of b0 at e_n
        let mut b0v = vec![];
        {
            let mut cur = b0.clone();
            for s in 0..klev {
                if s > 0 {
                    cur = cur.derivative(field);
                }
                b0v.push(cur.eval(field, &e_n));
            }
        }
        if m_res == 0 && field.is_zero(&b0v[0]) {
            // an unexpected resonance: over F_p this is a prime collision
            return Err(match field.ctx() {
                crate::field::FieldCtx::PrimeField { modulus } => {
                    Error::PrimeCollision { prime: modulus }
                }
                _ => Error::Degenerate(format!(
                    "indicial root at offset {} not in the rational root list",
                    n
                )),
            });
        }
        for s in 0..m_res {
            if !field.is_zero(&b0v[s]) {
                return Err(Error::Degenerate(
                    "resonance multiplicity mismatch".into(),
                ));
            }
        }
        // introduce new parameters for free coordinates k < m_res
        let mut f_n: Vec<LinForm<F>> = vec![lin_zero(field, nparams); klev];
        for k in 0..m_res.min(klev) {
            nparams += 1;
            param_meta.push((n, k));
            for row in f_n.iter_mut() {
                lin_grow(field, row, nparams);
            }
            for row in rhs.iter_mut() {
                lin_grow(field, row, nparams);
            }
            let slot = &mut f_n[k];
            slot[nparams - 1] = field.one();
        }
        // solve for f_k, k from high to low (k ≥ m_res):
        // equation j = k − m_res: Σ_{k' ≥ k} C(k', k'−j) b0^{(k'−j)}(e_n) f_{k'} = rhs_j
        for k in (m_res..klev).rev() {
            let j = k - m_res;
            let mut acc = rhs[j].clone();
            lin_grow(field, &mut acc, nparams);
            for kp in (k + 1)..klev {
                let s = kp - j;
                if s >= klev {
                    continue;
                }
                let coef = field.mul(&field.from_i64(binom_i64(kp, s)), &b0v[s]);
                if field.is_zero(&coef) {
                    continue;
                }
                let src = f_n[kp].clone();
                for (t, sv) in src.iter().enumerate() {
                    if field.is_zero(sv) {
                        continue;
                    }
                    let sub = field.mul(&coef, sv);
                    acc[t] = field.sub(&acc[t], &sub);
                }
            }
            // leading coefficient C(k, m_res)·b0^{(m_res)}(e_n)
            let lead = field.mul(&field.from_i64(binom_i64(k, m_res)), &b0v[m_res]);
            let linv = field.inv(&lead).ok_or(Error::Degenerate(
                "vanishing leading resonance coefficient".into(),
            ))?;
            for v in acc.iter_mut() {
                *v = field.mul(v, &linv);
            }
            f_n[k] = acc;
        }
        // consistency: equations j with j + m_res ≥ klev have no unknowns
        if m_res > 0 {
            for j in (klev - m_res.min(klev))..klev {
                let mut acc = rhs[j].clone();
                lin_grow(field, &mut acc, nparams);
                // subtract solved contributions Σ_{k' ≥ j+m_res}: none (k' would exceed klev−1)
                for kp in 0..klev {
                    if kp < j {
                        continue;
                    }
                    let s = kp - j;
                    let coef = field.mul(&field.from_i64(binom_i64(kp, s)), &b0v[s]);
                    if field.is_zero(&coef) {
                        continue;
                    }
                    for (t, sv) in f_n[kp].iter().enumerate() {
                        if field.is_zero(sv) {
                            continue;
                        }
                        let sub = field.mul(&coef, sv);
                        acc[t] = field.sub(&acc[t], &sub);
                    }
                }
                if acc.iter().any(|c| !field.is_zero(c)) {
                    return Err(match field.ctx() {
                        crate::field::FieldCtx::PrimeField { modulus } => {
                            Error::PrimeCollision { prime: modulus }
                        }
                        _ => Error::Degenerate(
                            "log ladder inconsistent: origin is not regular singular".into(),
                        ),
                    });
                }
            }
        }
        for k in 0..klev {
            lin_grow(field, &mut f_n[k], nparams);
            sol[k].push(f_n[k].clone());
        }
    }
    if nparams != mu {
        return Err(Error::Degenerate(format!(
            "expected {} solutions in class, found {}",
            mu, nparams
        )));
    }
    // instantiate basis members
    let mut out = vec![];
    for t in 0..nparams {
        let mut blocks = vec![vec![field.zero(); trunc]; klev];
        for k in 0..klev {
            for n in 0..trunc {
                let v = sol[k][n].get(t).cloned().unwrap_or_else(|| field.zero());
                blocks[k][n] = v;
            }
        }
        let series = LogSeries { rho: base.clone(), blocks, trunc };
        let (intro, level) = param_meta[t];
        out.push((intro, level, series));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// singular points
// ---------------------------------------------------------------------------

/// Where to do local analysis.
#[derive(Debug, Clone)]
pub enum PointSpec<F: Field> {
    /// A rational point x = c.
    Finite(F::Elem),
    /// The roots of a polynomial factor of the leading coefficient.
    FactorRoots(Poly<F>),
    /// The point at infinity.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Ordinary,
    RegularTrue,
    Apparent,
    IrregularFlag,
}

#[derive(Debug, Clone)]
pub struct SingularPoint<F: Field> {
    pub location: PointSpec<F>,
    /// Rational local exponents with multiplicity.
    pub exponents: Vec<(BigRational, usize)>,
    /// λ-degree of the indicial part not accounted for by rational roots
    /// (reported as factor + degree, not numeric roots).
    pub residual_indicial_degree: usize,
    /// Spurious mod-p roots, if any.
    pub spurious: Vec<String>,
    pub has_logs: Option<bool>,
    pub classification: PointClass,
}

/// Indicial data of L at a point.
pub fn indicial_data<F: ExponentField>(
    field: &F,
    l: &DiffOp<F>,
    pt: &PointSpec<F>,
) -> Result<SingularPoint<F>> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    let local = match pt {
        PointSpec::Finite(c) => l.translate(field, c),
        PointSpec::Infinity => l.at_infinity(field),
        PointSpec::FactorRoots(f) => {
            return indicial_data_at_factor(field, l, f);
        }
    };
    let b0 = indicial_poly_at_zero(field, &local);
    let roots = F::indicial_roots(field, &b0);
    let nroots: usize = roots.rational.iter().map(|(_, m)| m).sum();
    let is_ordinary = b0.deg() == q as isize
        && roots.residual_degree == 0
        && roots
            .rational
            .iter()
            .all(|(r, m)| *m == 1 && r.is_integer() && !r.is_negative())
        && {
            let set: Vec<BigInt> = roots.rational.iter().map(|(r, _)| r.to_integer()).collect();
            (0..q).all(|i| set.contains(&BigInt::from(i)))
        };
    let degenerate_b0 = b0.deg() < q as isize;
    let mut sp = SingularPoint {
        location: pt.clone(),
        exponents: roots.rational.clone(),
        residual_indicial_degree: roots.residual_degree,
        spurious: roots.spurious.clone(),
        has_logs: None,
        classification: if degenerate_b0 {
            PointClass::IrregularFlag
        } else if is_ordinary {
            PointClass::Ordinary
        } else {
            PointClass::RegularTrue
        },
    };
    if sp.classification == PointClass::RegularTrue {
        // check apparency: exponents {0,...,q−2,q}, all analytic, no logs
        if exponents_are_apparent(&roots, q) {
            let basis = frobenius_basis(field, &local, 4 * q + 8)?;
            let all_analytic = basis.len() == q
                && basis
                    .members
                    .iter()
                    .all(|m| m.is_analytic(field));
            sp.has_logs = Some(!all_analytic);
            if all_analytic {
                sp.classification = PointClass::Apparent;
            }
        } else if nroots == q && roots.residual_degree == 0 {
            let basis = frobenius_basis(field, &local, (4 * q + 8).max(spread(&roots) + 8))?;
            sp.has_logs = Some(basis.members.iter().any(|m| m.max_log_power(field) > 0));
        }
    }
    Ok(sp)
}

fn spread(roots: &IndicialRoots) -> usize {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (r, _) in &roots.rational {
        if lo.as_ref().map(|l| r < l).unwrap_or(true) {
            lo = Some(r.clone());
        }
        if hi.as_ref().map(|h| r > h).unwrap_or(true) {
            hi = Some(r.clone());
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => (h - l).to_integer().to_usize().unwrap_or(0),
        _ => 0,
    }
}

fn exponents_are_apparent(roots: &IndicialRoots, q: usize) -> bool {
    if roots.residual_degree != 0 {
        return false;
    }
    let mut want: Vec<BigInt> = (0..=q as i64)
        .filter(|&i| i != q as i64 - 1)
        .map(BigInt::from)
        .collect();
    let mut got: Vec<BigInt> = vec![];
    for (r, m) in &roots.rational {
        if !r.is_integer() {
            return false;
        }
        for _ in 0..*m {
            got.push(r.to_integer());
        }
    }
    want.sort();
    got.sort();
    want == got
}

/// Indicial analysis at the roots of an irreducible (or at least squarefree)
/// factor of the leading coefficient, without algebraic extensions: the
/// indicial polynomial is computed mod the factor and candidate rational
/// exponents are verified by divisibility.
fn indicial_data_at_factor<F: ExponentField>(
    field: &F,
    l: &DiffOp<F>,
    f: &Poly<F>,
) -> Result<SingularPoint<F>> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    let (polys, _) = clear_denominators(field, l);
    // valuations and cofactors
    let mut vals = vec![];
    for a in &polys {
        if a.is_zero() {
            vals.push((usize::MAX, Poly::zero()));
            continue;
        }
        let mut v = 0usize;
        let mut cur = a.clone();
        loop {
            let (quo, r) = cur.divmod(field, f);
            if r.is_zero() {
                v += 1;
                cur = quo;
            } else {
                break;
            }
        }
        vals.push((v, cur));
    }
    let m = vals
        .iter()
        .enumerate()
        .filter(|(_, (v, _))| *v != usize::MAX)
        .map(|(i, (v, _))| *v as isize - i as isize)
        .min()
        .unwrap();
    // indicial polynomial: Σ_{v_i − i = m} (u_i·f'^{v_i} mod f)·[λ]_i with
    // coefficients in K[x]/(f); candidate rational exponents r are tested by
    // Ind(r) ≡ 0 mod f
    let fprime = f.derivative(field);
    let test = |r: &BigRational| -> bool {
        let relem = match field.embed_rational(r) {
            Some(e) => e,
            None => return false,
        };
        let mut acc = Poly::zero();
        for (i, (v, u)) in vals.iter().enumerate() {
            if *v == usize::MAX || *v as isize - i as isize != m {
                continue;
            }
            // [r]_i
            let mut ff = field.one();
            for t in 0..i {
                ff = field.mul(&ff, &field.sub(&relem, &field.from_i64(t as i64)));
            }
            let um = u.mul(field, &fprime.pow(field, *v)).rem(field, f);
            acc = acc.add(field, &um.mul_scalar(field, &ff));
        }
        acc.rem(field, f).is_zero()
    };
    let bound = 2 * (q as i64 + f.deg().max(0) as i64 + polys.iter().map(|p| p.deg()).max().unwrap_or(0) as i64);
    let mut exponents = vec![];
    let mut total = 0usize;
    for num in (-2 * bound)..=(2 * bound) {
        if total >= q {
            break;
        }
        let r = BigRational::from_integer(num.into());
        if test(&r) {
            exponents.push((r, 1));
            total += 1;
        }
    }
    for num in (-2 * bound)..=(2 * bound) {
        if total >= q {
            break;
        }
        if num % 2 == 0 {
            continue;
        }
        let r = BigRational::new(num.into(), 2.into());
        if test(&r) {
            exponents.push((r, 1));
            total += 1;
        }
    }
    sort_roots(&mut exponents);
    // multiplicities are not separated here; residual degree covers the rest
    let residual = q.saturating_sub(total);
    let sp = SingularPoint {
        location: PointSpec::FactorRoots(f.clone()),
        exponents,
        residual_indicial_degree: residual,
        spurious: vec![],
        has_logs: None,
        // the log check at factor roots happens in is_apparent via mod-p roots
        classification: PointClass::RegularTrue,
    };
    Ok(sp)
}

/// Apparent-singularity test: exponents {0,…,q−2,q} and a full basis of
/// analytic solutions (no logs).
///
/// At rational points the check is exact. At factor roots the log check runs
/// modulo primes where the factor has a root (the paper's regime); a handful
/// of primes must agree.
pub fn is_apparent_q(qq: &Rationals, l: &DiffOp<Rationals>, pt: &PointSpec<Rationals>) -> Result<bool> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    match pt {
        PointSpec::Finite(_) | PointSpec::Infinity => {
            let sp = indicial_data(qq, l, pt)?;
            Ok(sp.classification == PointClass::Apparent)
        }
        PointSpec::FactorRoots(f) => {
            let sp = indicial_data(qq, l, pt)?;
            let mut expanded = IndicialRoots {
                rational: sp.exponents.clone(),
                residual_degree: sp.residual_indicial_degree,
                spurious: vec![],
            };
            expanded.rational = sp.exponents.clone();
            if !exponents_are_apparent(&expanded, q) {
                return Ok(false);
            }
            // mod-p log check at an actual root of f
            let mut agree = 0;
            let mut primes = PrimeStream::from(crate::field::DEFAULT_PRIME);
            let mut tested = 0;
            while agree < 2 && tested < 25 {
                let p = primes.next().unwrap();
                let fp = PrimeField::new(p);
                let (fp_op, fpoly) = match (l.mod_p(&fp), crate::poly::map_poly(&fp, f)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                let roots = roots_mod_p(&fp, &fpoly);
                let Some(&alpha) = roots.first() else { continue };
                tested += 1;
                let local = fp_op.translate(&fp, &alpha);
                match frobenius_basis(&fp, &local, 4 * q + 8) {
                    Ok(basis) => {
                        let all_analytic = basis.len() == q
                            && basis.members.iter().all(|m| m.is_analytic(&fp));
                        if !all_analytic {
                            return Ok(false);
                        }
                        agree += 1;
                    }
                    Err(Error::PrimeCollision { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            if agree < 2 {
                return Err(Error::Degenerate(
                    "could not find primes with factor roots for apparency check".into(),
                ));
            }
            Ok(true)
        }
    }
}

/// Multiset of maximal log powers of a basis (ascending).
pub fn log_structure_profile<F: Field>(field: &F, basis: &SolutionBasis<F>) -> Vec<usize> {
    basis.log_profile(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;

    fn q() -> Rationals {
        Rationals
    }

    fn op_q(polys: &[&[i64]]) -> DiffOp<Rationals> {
        let f = q();
        DiffOp::from_polys(&f, &polys.iter().map(|c| Poly::from_i64(&f, c)).collect::<Vec<_>>())
    }

    #[test]
    fn theta_form_of_d2() {
        // x^2 D^2 = θ(θ−1): b_0 = λ(λ−1), offset −2
        let f = q();
        let d2 = DiffOp::d_pow(&f, 2);
        let tf = theta_form(&f, &d2);
        assert_eq!(tf.offset, -2);
        assert_eq!(tf.terms.len(), 1);
        assert_eq!(tf.terms[0].1, Poly::from_i64(&f, &[0, -1, 1]));
    }

    #[test]
    fn frobenius_basis_of_d2() {
        // D²: basis {1, x}
        let f = q();
        let basis = frobenius_basis(&f, &DiffOp::d_pow(&f, 2), 8).unwrap();
        assert_eq!(basis.len(), 2);
        // descending exponent: x first, then 1
        assert_eq!(basis.members[0].rho, BigRational::one());
        assert_eq!(basis.members[1].rho, BigRational::zero());
        for m in &basis.members {
            assert_eq!(m.max_log_power(&f), 0);
        }
    }

    #[test]
    fn frobenius_geometric_series() {
        // (1−x)D − 1 annihilates Σ x^n
        let f = q();
        let l = op_q(&[&[-1], &[1, -1]]);
        let basis = frobenius_basis(&f, &l, 10).unwrap();
        assert_eq!(basis.len(), 1);
        let s = &basis.members[0];
        for n in 0..10 {
            assert_eq!(s.coeff(&f, 0, n), f.one(), "n={}", n);
        }
        assert!(annihilates(&f, &l, s, 0));
    }

    #[test]
    fn frobenius_resonant_log_case() {
        // x·D² + D = (θ/x)·θ/... has double exponent 0 at origin: basis {1, ln x}
        let f = q();
        let l = DiffOp::new(
            &f,
            vec![
                crate::ratfn::RatFn::zero(),
                crate::ratfn::RatFn::one(&f),
                crate::ratfn::RatFn::x(&f),
            ],
        );
        let basis = frobenius_basis(&f, &l, 8).unwrap();
        assert_eq!(basis.len(), 2);
        let profile = basis.log_profile(&f);
        assert_eq!(profile, vec![0, 1]);
        for m in &basis.members {
            assert!(annihilates(&f, &l, m, 0));
        }
    }

    #[test]
    fn frobenius_integer_spread_resonance() {
        // x D² : θ-form x·D²... exponents {0, 2}? Actually xD² has b0 = λ(λ−1) shifted:
        // use the spec example: x·D² − D has exponents {0, 2}: solutions 1, x²
        let f = q();
        let l = DiffOp::new(
            &f,
            vec![
                crate::ratfn::RatFn::zero(),
                crate::ratfn::RatFn::from_i64(&f, -1),
                crate::ratfn::RatFn::x(&f),
            ],
        );
        let basis = frobenius_basis(&f, &l, 8).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis.members[0].rho, BigRational::from_integer(2.into()));
        assert_eq!(basis.members[1].rho, BigRational::zero());
        for m in &basis.members {
            assert!(annihilates(&f, &l, m, 0));
            assert_eq!(m.max_log_power(&f), 0);
        }
    }

    #[test]
    fn apparent_singularity_example() {
        // (x·Dx − 1)·Dx = x·D² − D: at 0 exponents {0, 2}, apparent for q = 2
        let f = q();
        let l = DiffOp::new(
            &f,
            vec![
                crate::ratfn::RatFn::zero(),
                crate::ratfn::RatFn::from_i64(&f, -1),
                crate::ratfn::RatFn::x(&f),
            ],
        );
        let sp = indicial_data(&f, &l, &PointSpec::Finite(f.zero())).unwrap();
        assert_eq!(sp.classification, PointClass::Apparent);
        // ordinary point: x = 1
        let sp1 = indicial_data(&f, &l, &PointSpec::Finite(f.one())).unwrap();
        assert_eq!(sp1.classification, PointClass::Ordinary);
    }

    #[test]
    fn indicial_at_zero_of_d2() {
        let f = q();
        let sp = indicial_data(&f, &DiffOp::d_pow(&f, 2), &PointSpec::Finite(f.zero())).unwrap();
        assert_eq!(sp.classification, PointClass::Ordinary);
        assert_eq!(sp.exponents.len(), 2);
    }

    #[test]
    fn mod_p_basis_matches_q_basis() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        let f = q();
        let l = op_q(&[&[-1], &[1, -1]]);
        let lp = l.mod_p(&fp).unwrap();
        let bq = frobenius_basis(&f, &l, 12).unwrap();
        let bp = frobenius_basis(&fp, &lp, 12).unwrap();
        assert_eq!(bq.len(), bp.len());
        for n in 0..12 {
            let cq = bq.members[0].coeff(&f, 0, n);
            let cp = bp.members[0].coeff(&fp, 0, n);
            assert_eq!(fp.embed_rational(&cq).unwrap(), cp);
        }
    }

    #[test]
    fn roots_mod_p_finds_all() {
        let fp = PrimeField::new(101);
        // (x−3)(x−5)(x−10)
        let f = Poly::from_i64(&fp, &[-3, 1])
            .mul(&fp, &Poly::from_i64(&fp, &[-5, 1]))
            .mul(&fp, &Poly::from_i64(&fp, &[-10, 1]));
        let mut roots = roots_mod_p(&fp, &f);
        roots.sort_unstable();
        assert_eq!(roots, vec![3, 5, 10]);
    }
}
