//! Right-factor detection and extraction through rational solutions of the
//! exterior square, and irreducibility probing by sweeping the free
//! coefficients of the general analytic solution.
//!
//! The extraction follows the series procedure: once the exterior-square
//! combination coefficients d_{k,p} are fixed, the series collected in front
//! of dS_j/dx (taken from the highest log power downward) are members of the
//! right factor's solution space; their minimal annihilator is guessed and
//! certified by exact right division.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::frobenius::{annihilates, ExponentField};
use crate::guess::guess_on_top_block;
use crate::ore::DiffOp;
use crate::poly::PolyOps;
use crate::ratsol::{CombinationMode, CombinationSolution, ScalarNullspace};
use crate::series::{LogSeries, SolutionBasis};

/// Everything the extraction saw: the collections per S_j, the candidate
/// factor and its certification.
#[derive(Debug, Clone)]
pub struct FactorExtractionReport<F: Field> {
    pub combination: CombinationSolution<F>,
    /// (basis index j, collection series in front of dS_j/dx), nonzero only.
    pub collections: Vec<(usize, LogSeries<F>)>,
    pub right_factor: Option<DiffOp<F>>,
    pub left_cofactor: Option<DiffOp<F>>,
    /// Division residual was exactly zero.
    pub residual_zero: bool,
    /// Uniqueness of the factorization is assumed, not checked.
    pub uniqueness_checked: bool,
}

/// Collection series in front of dS_j/dx for an antisymmetric combination
/// Σ_{k<p} c_{kp}(S_k S_p' − S_p S_k'): C_j = Σ_{k<j} c_{kj} S_k − Σ_{p>j} c_{jp} S_p.
pub fn collect_over_derivative<F: Field>(
    field: &F,
    basis: &SolutionBasis<F>,
    coefficients: &[(usize, usize, F::Elem)],
    j: usize,
) -> Option<LogSeries<F>> {
    let mut acc: Option<LogSeries<F>> = None;
    let mut add_term = |idx: usize, c: F::Elem| {
        if field.is_zero(&c) {
            return;
        }
        let t = basis.members[idx].scale(field, &c);
        acc = Some(match acc.take() {
            None => t,
            Some(a) => a.add(field, &t),
        });
    };
    for (k, p, c) in coefficients {
        if *p == j {
            add_term(*k, c.clone());
        } else if *k == j {
            add_term(*p, field.neg(c));
        }
    }
    acc
}

/// Extract a right factor of `l` from a certified exterior-square
/// combination. The basis is scanned by descending maximal log power.
pub fn extract_right_factor<F: ExponentField + ScalarNullspace>(
    field: &F,
    l: &DiffOp<F>,
    basis: &SolutionBasis<F>,
    comb: &CombinationSolution<F>,
) -> Result<FactorExtractionReport<F>> {
    if comb.mode != CombinationMode::Ext {
        return Err(Error::Unsupported(
            "factor extraction uses exterior-square combinations".into(),
        ));
    }
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    // order indices by descending max log power
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(basis.members[j].max_log_power(field)));
    let mut collections = vec![];
    for &j in &order {
        if let Some(c) = collect_over_derivative(field, basis, &comb.coefficients, j) {
            if !c.is_zero(field) {
                collections.push((j, c.normalized(field)));
            }
        }
    }
    let mut report = FactorExtractionReport {
        combination: comb.clone(),
        collections: collections.clone(),
        right_factor: None,
        left_cofactor: None,
        residual_zero: false,
        uniqueness_checked: false,
    };
    let Some((_, candidate_series)) = collections.first() else {
        return Ok(report); // all collections empty: no factor via this route
    };
    // guess the minimal annihilator of the collected series, certify by
    // right division of l
    let max_d = candidate_series.trunc / 3;
    'orders: for ord in 1..q {
        let mut d = 1usize;
        while (ord + 1) * (d + 1) + 10 + ord <= candidate_series.trunc && d <= max_d {
            let fam = guess_on_top_block(field, candidate_series, ord, d, 10)?;
            if let Some(b) = fam.basis.first() {
                let (_, rem) = l.right_divide(field, b);
                if rem.is_zero() {
                    let (quo, rem2) = l.right_divide(field, b);
                    debug_assert!(rem2.is_zero());
                    report.right_factor = Some(b.clone());
                    report.left_cofactor = Some(quo);
                    report.residual_zero = true;
                    break 'orders;
                } else {
                    return Err(Error::CertificationFailed(
                        "guessed annihilator does not right-divide the operator".into(),
                    ));
                }
            }
            d += 2;
        }
    }
    Ok(report)
}

/// Pairwise proportionality of the nonzero collections (the "identical
/// combinations" phenomenon): true when every pair is a scalar multiple.
pub fn collections_pairwise_proportional<F: Field>(
    field: &F,
    collections: &[(usize, LogSeries<F>)],
) -> bool {
    if collections.len() < 2 {
        return true;
    }
    let (_, first) = &collections[0];
    for (_, other) in &collections[1..] {
        if (&first.rho - &other.rho) != num_rational::BigRational::from_integer(0.into()) {
            return false;
        }
        // find the ratio from the first nonzero coefficient, then compare
        let mut ratio: Option<F::Elem> = None;
        let levels = first.blocks.len().max(other.blocks.len());
        let n = first.trunc.min(other.trunc);
        for k in 0..levels {
            for m in 0..n {
                let a = first.coeff(field, k, m);
                let b = other.coeff(field, k, m);
                match &ratio {
                    None => {
                        if field.is_zero(&a) != field.is_zero(&b) {
                            return false;
                        }
                        if !field.is_zero(&a) {
                            ratio = Some(field.div(&b, &a).unwrap());
                        }
                    }
                    Some(r) => {
                        let want = field.mul(&a, r);
                        if want != b {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Verdict of an irreducibility probe.
#[derive(Debug, Clone)]
pub enum ProbeVerdict<F: Field> {
    Reducible { factor: DiffOp<F>, cofactor: DiffOp<F> },
    /// Not a proof of irreducibility unless `exhaustive` is set.
    NoFactorFound,
}

#[derive(Debug, Clone)]
pub struct IrreducibilityProbe<F: Field> {
    pub verdict: ProbeVerdict<F>,
    pub candidates_tried: u64,
    pub budget: u64,
    /// The swept space was complete for the reduced parameterization.
    pub exhaustive: bool,
}

/// Sweep combinations of the analytic solutions at the origin, guessing the
/// minimal annihilator of each candidate; reducible on the first certified
/// order < ord(L). When the analytic space is s-dimensional the sweep runs
/// over the projective combinations with coefficients in [1, budget] on the
/// last s−1 coordinates (the dimension reduction of the survey procedure).
pub fn irreducibility_probe<F: ExponentField + ScalarNullspace>(
    field: &F,
    l: &DiffOp<F>,
    basis: &SolutionBasis<F>,
    budget: u64,
) -> Result<IrreducibilityProbe<F>> {
    let q = l.order().ok_or(Error::Degenerate("zero operator".into()))?;
    let analytic: Vec<&LogSeries<F>> = basis
        .members
        .iter()
        .filter(|m| m.is_analytic(field))
        .collect();
    if analytic.is_empty() {
        return Ok(IrreducibilityProbe {
            verdict: ProbeVerdict::NoFactorFound,
            candidates_tried: 0,
            budget,
            exhaustive: false,
        });
    }
    let s = analytic.len();
    // candidate parameter tuples (projective: first coefficient fixed to 1)
    let mut tried = 0u64;
    let mut exhaustive = true;
    let mut stack: Vec<Vec<u64>> = vec![vec![]];
    // enumerate tuples in [0, budget]^(s−1), lexicographically; budget capped
    let per_coord = budget.min(if s > 1 {
        ((budget as f64).powf(1.0 / (s as f64 - 1.0)) as u64).max(1)
    } else {
        1
    });
    while let Some(t) = stack.pop() {
        if t.len() == s - 1 {
            tried += 1;
            if tried > budget {
                exhaustive = false;
                break;
            }
            // candidate = analytic[0] + Σ t_i · analytic[i+1]
            let mut cand = analytic[0].clone();
            for (i, &ti) in t.iter().enumerate() {
                let c = field.from_i64(ti as i64);
                if field.is_zero(&c) {
                    continue;
                }
                cand = cand.add(field, &analytic[i + 1].scale(field, &c));
            }
            let cand = cand.normalized(field);
            if cand.is_zero(field) {
                continue;
            }
            for ord in 1..q {
                let mut d = 1usize;
                while (ord + 1) * (d + 1) + 10 + ord <= cand.trunc && d <= cand.trunc / 3 {
                    let fam = guess_ode(field, &cand, ord, d, 10).unwrap_or(crate::guess::OdeFamily {
                        basis: vec![],
                        nullity: 0,
                        q: ord,
                        d,
                    });
                    if let Some(b) = fam.basis.first() {
                        let (quo, rem) = l.right_divide(field, b);
                        if rem.is_zero() && annihilates(field, b, &cand, 10) {
                            return Ok(IrreducibilityProbe {
                                verdict: ProbeVerdict::Reducible {
                                    factor: b.clone(),
                                    cofactor: quo,
                                },
                                candidates_tried: tried,
                                budget,
                                exhaustive: false,
                            });
                        }
                    }
                    d += 2;
                }
            }
        } else {
            for v in (0..=per_coord).rev() {
                let mut t2 = t.clone();
                t2.push(v);
                stack.push(t2);
            }
        }
    }
    if s > 1 && per_coord < budget {
        // the grid was coarsened: not a complete sweep of [1, p]^{s−1}
        exhaustive = exhaustive && false;
    }
    Ok(IrreducibilityProbe {
        verdict: ProbeVerdict::NoFactorFound,
        candidates_tried: tried,
        budget,
        exhaustive,
    })
}

use crate::guess::guess_ode;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{ext_square, pullback};
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use crate::frobenius::frobenius_basis;
    use crate::poly::Poly;
    use crate::ratfn::RatFn;
    use crate::ratsol::{combination_search, denominator_ansatz, AnsatzMode};

    #[test]
    fn extract_factor_from_product_mod_p() {
        let fp = PrimeField::new(DEFAULT_PRIME);
        // L2: E-type operator (pullback of Gauss by 16x), reduced mod p
        let qq = Rationals;
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let mhalf = -half.clone();
        let one = num_rational::BigRational::from_integer(1.into());
        let hyp = crate::construct::hypergeometric_operator(&qq, &half, &mhalf, &one).unwrap();
        let le = pullback(&qq, &hyp, &RatFn::poly(&qq, Poly::from_i64(&qq, &[0, 16])));
        let l2 = le.mod_p(&fp).unwrap();
        // L3: random with ordinary origin
        let l3 = DiffOp::from_polys(
            &fp,
            &[
                Poly::new(&fp, vec![3, 1]),
                Poly::new(&fp, vec![5]),
                Poly::new(&fp, vec![2, 7]),
                Poly::new(&fp, vec![1, 1]),
            ],
        );
        let l5 = l3.mul(&fp, &l2);
        let basis = frobenius_basis(&fp, &l5, 200).unwrap();
        assert_eq!(basis.len(), 5);
        let e2l5 = ext_square(&fp, &l5).unwrap();
        let ansatz = denominator_ansatz(&fp, &e2l5, AnsatzMode::ExactIntegerExponents).unwrap();
        let comb = combination_search(&fp, &basis, CombinationMode::Ext, &ansatz, Some(&e2l5))
            .unwrap()
            .expect("ext combination must exist for a product with order-2 right factor");
        let report = extract_right_factor(&fp, &l5, &basis, &comb).unwrap();
        assert!(report.residual_zero);
        let b = report.right_factor.unwrap();
        // recовered factor equals L2 up to left unit
        let (bm, _) = b.monic(&fp);
        let (l2m, _) = l2.monic(&fp);
        assert!(bm.sub(&fp, &l2m).is_zero(), "recovered factor must equal L2");
        // and Ext²(recovered) = D − W'/W of the factor
        let eb = ext_square(&fp, &b).unwrap();
        let w = b.wronskian_logderivative(&fp);
        assert!(eb
            .sub(&fp, &DiffOp::new(&fp, vec![w.neg(&fp), RatFn::one(&fp)]))
            .is_zero());
    }

    #[test]
    fn probe_finds_factor_of_d2() {
        // D² has right factor D (constant candidate)
        let f = Rationals;
        let d2 = DiffOp::d_pow(&f, 2);
        let basis = frobenius_basis(&f, &d2, 40).unwrap();
        let probe = irreducibility_probe(&f, &d2, &basis, 10).unwrap();
        match probe.verdict {
            ProbeVerdict::Reducible { factor, cofactor } => {
                let prod = cofactor.mul(&f, &factor);
                let (pm, _) = prod.monic(&f);
                assert!(pm.sub(&f, &d2).is_zero());
            }
            ProbeVerdict::NoFactorFound => panic!("D² is reducible"),
        }
    }
}
