//! F-singularity criteria for complete intersections: the Fedder-style
//! F-purity test (`ω^{p-1} ∉ m^[p]`), the Glassbrenner-style F-regularity
//! test with an explicit test element (`prefactors·c·ω^{q-1} ∉ m^[q]`),
//! homogeneous-system-of-parameters verification by linear elimination
//! plus a Gröbner dimension check, and the truncated product-expression
//! evaluator behind all of them.
//!
//! Variable zeroing is a strengthening device throughout: a product that
//! survives after substituting selected variables by zero certainly
//! survives without the substitution, so "holds under zeroing" proves the
//! unzeroed claim while "vanishes under zeroing" is merely inconclusive.

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

use crate::groebner::{GbError, GroebnerBasis, Ideal};
use crate::ring::{Poly, Ring, RingCtx, RingError};

#[derive(Debug, Error)]
pub enum FsingError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error("expected {expected} elements, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("element {index} is not homogeneous")]
    Inhomogeneous { index: usize },
    #[error("inconsistent linear identifications: element {index} reduces to a nonzero constant")]
    Inconsistent { index: usize },
    #[error("exponent {expr} is negative at p = {p}")]
    NegativeExponent { expr: String, p: u32 },
    #[error("empty q list")]
    EmptyQList,
    #[error("term budget exceeded: {terms} terms after factor {step} of {total}")]
    Budget {
        terms: usize,
        step: usize,
        total: usize,
    },
}

/// An exponent expression evaluated per characteristic, as used in witness
/// prefactors (`p-2`, `p^2-3`, ...) and q lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QExpr {
    P,
    PMinus(u32),
    PSquared,
    PSquaredMinus(u32),
    Int(u64),
}

impl QExpr {
    pub fn eval(self, p: u32) -> Result<u64, FsingError> {
        let (value, shortfall) = match self {
            QExpr::P => (p as u64, 0),
            QExpr::PMinus(k) => {
                let k = k as u64;
                ((p as u64).saturating_sub(k), k.saturating_sub(p as u64))
            }
            QExpr::PSquared => (p as u64 * p as u64, 0),
            QExpr::PSquaredMinus(k) => {
                let (sq, k) = (p as u64 * p as u64, k as u64);
                (sq.saturating_sub(k), k.saturating_sub(sq))
            }
            QExpr::Int(n) => (n, 0),
        };
        if shortfall > 0 {
            return Err(FsingError::NegativeExponent {
                expr: self.render(),
                p,
            });
        }
        Ok(value)
    }

    pub fn render(self) -> String {
        match self {
            QExpr::P => "p".to_string(),
            QExpr::PMinus(k) => format!("p-{}", k),
            QExpr::PSquared => "p^2".to_string(),
            QExpr::PSquaredMinus(k) => format!("p^2-{}", k),
            QExpr::Int(n) => n.to_string(),
        }
    }
}

/// Outcome of eliminating linear elements: the smaller ring, the images of
/// the elements that were not consumed, and the substitution table.
#[derive(Debug, Clone)]
pub struct EliminationResult {
    pub residual: Ring,
    /// Images (in the residual ring) of the elements not consumed by a
    /// substitution, in input order.
    pub images: Vec<Poly>,
    /// Input indices of `images`.
    pub remaining_indices: Vec<usize>,
    /// (eliminated variable, its image in the residual ring), in
    /// elimination order.
    pub substitutions: Vec<(String, Poly)>,
}

fn plain_variable(f: &Poly) -> Option<usize> {
    if f.term_count() == 1 {
        let t = &f.terms()[0];
        if t.mono.degree() == 1 {
            return t.mono.support().first().copied();
        }
    }
    None
}

/// Eliminates variables cut out by linear elements. Plain-variable
/// elements are substituted to zero first; multi-term homogeneous linear
/// elements are then consumed in input order, always solving for the
/// lexicographically last variable present. Substitutions compose eagerly,
/// so every recorded image lives in the residual ring. Elements that are
/// not consumed (nonlinear ones, and linear ones that reduce to a single
/// variable or to zero) are returned as images.
pub fn linear_eliminate(ring: &Ring, elements: &[Poly]) -> Result<EliminationResult, FsingError> {
    for el in elements {
        if !RingCtx::same(el.ring(), ring) {
            return Err(RingError::RingMismatch.into());
        }
    }
    let n = ring.nvars();
    // Per-variable replacement in the original ring; entries never mention
    // an eliminated variable.
    let mut rhs: Vec<Option<Poly>> = vec![None; n];
    let mut order: Vec<usize> = Vec::new();
    let mut consumed = vec![false; elements.len()];

    let set_sub = |rhs: &mut Vec<Option<Poly>>,
                   order: &mut Vec<usize>,
                   v: usize,
                   e: Poly|
     -> Result<(), FsingError> {
        let name = ring.var_name(v).to_string();
        let binding: HashMap<String, Poly> = [(name, e.clone())].into();
        for r in rhs.iter_mut().flatten() {
            *r = r.substitute(ring, &binding)?;
        }
        rhs[v] = Some(e);
        order.push(v);
        Ok(())
    };
    let reduce = |rhs: &[Option<Poly>], f: &Poly| -> Result<Poly, FsingError> {
        let mut bindings = HashMap::new();
        for (i, slot) in rhs.iter().enumerate() {
            if let Some(r) = slot {
                bindings.insert(ring.var_name(i).to_string(), r.clone());
            }
        }
        if bindings.is_empty() {
            return Ok(f.clone());
        }
        Ok(f.substitute(ring, &bindings)?)
    };

    // Pass 1: elements that are plain variables vanish outright.
    for (k, el) in elements.iter().enumerate() {
        if let Some(v) = plain_variable(el) {
            if rhs[v].is_none() {
                set_sub(&mut rhs, &mut order, v, Poly::zero(ring))?;
                consumed[k] = true;
            }
        }
    }
    // Pass 2: remaining linear elements identify variables, in input order.
    for (k, el) in elements.iter().enumerate() {
        if consumed[k] {
            continue;
        }
        let r = reduce(&rhs, el)?;
        if r.is_zero() {
            continue;
        }
        if r.total_degree() == Some(0) {
            return Err(FsingError::Inconsistent { index: k });
        }
        if !(r.is_homogeneous() && r.total_degree() == Some(1) && r.term_count() >= 2) {
            continue;
        }
        let pivot = r
            .terms()
            .iter()
            .map(|t| t.mono.support()[0])
            .max_by(|a, b| ring.var_name(*a).cmp(ring.var_name(*b)))
            .expect("nonzero linear form has a variable");
        let a = r
            .terms()
            .iter()
            .find(|t| t.mono.support()[0] == pivot)
            .expect("pivot present")
            .coeff;
        let pivot_poly = Poly::var(ring, ring.var_name(pivot))?.scale(a);
        let rest = r.sub(&pivot_poly);
        let image = rest.scale(ring.cneg(ring.cinv(a)));
        set_sub(&mut rhs, &mut order, pivot, image)?;
        consumed[k] = true;
    }

    let kept: Vec<String> = (0..n)
        .filter(|&i| rhs[i].is_none())
        .map(|i| ring.var_name(i).to_string())
        .collect();
    let residual = RingCtx::new(ring.p(), &kept, ring.order())?;
    let empty = HashMap::new();
    let mut bindings: HashMap<String, Poly> = HashMap::new();
    let mut substitutions = Vec::with_capacity(order.len());
    for &v in &order {
        let image = rhs[v]
            .as_ref()
            .expect("eliminated variable has an image")
            .substitute(&residual, &empty)?;
        bindings.insert(ring.var_name(v).to_string(), image.clone());
        substitutions.push((ring.var_name(v).to_string(), image));
    }
    let mut images = Vec::new();
    let mut remaining_indices = Vec::new();
    for (k, el) in elements.iter().enumerate() {
        if consumed[k] {
            continue;
        }
        images.push(el.substitute(&residual, &bindings)?);
        remaining_indices.push(k);
    }
    Ok(EliminationResult {
        residual,
        images,
        remaining_indices,
        substitutions,
    })
}

/// Result of an h.s.o.p. check: the verdict plus the elimination path and
/// the residual Gröbner basis that witnessed it.
#[derive(Debug, Clone)]
pub struct HsopReport {
    pub holds: bool,
    pub elimination: EliminationResult,
    pub basis: GroebnerBasis,
}

/// True iff `elements` form a homogeneous system of parameters: as many
/// homogeneous elements as variables, with zero-dimensional quotient.
/// Verified via linear elimination followed by a Gröbner dimension test on
/// the residual ring.
pub fn hsop_check(ring: &Ring, elements: &[Poly], budget: u64) -> Result<HsopReport, FsingError> {
    if elements.len() != ring.nvars() {
        return Err(FsingError::CountMismatch {
            expected: ring.nvars(),
            got: elements.len(),
        });
    }
    for (i, el) in elements.iter().enumerate() {
        if !el.is_homogeneous() {
            return Err(FsingError::Inhomogeneous { index: i });
        }
    }
    let elimination = linear_eliminate(ring, elements)?;
    let ideal = Ideal::new(&elimination.residual, elimination.images.clone());
    let basis = ideal.groebner(budget)?;
    let holds = basis.dim_is_zero();
    Ok(HsopReport {
        holds,
        elimination,
        basis,
    })
}

/// One factor of a product expression: a polynomial raised to a
/// nonnegative power.
#[derive(Debug, Clone)]
pub struct ProductFactor {
    pub poly: Poly,
    pub exponent: u64,
}

/// A product of polynomial powers, evaluated after substituting the listed
/// variables by zero, truncated modulo `m^[q]` when `truncation_q` is set.
#[derive(Debug, Clone)]
pub struct ProductExpr {
    pub ring: Ring,
    pub factors: Vec<ProductFactor>,
    pub zeroed_vars: Vec<String>,
    pub truncation_q: Option<u64>,
}

/// Evaluates a product expression. Zeroing is applied to every factor
/// first; factors with exponent zero are skipped (empty-product
/// convention, even when the base vanishes). Single-term factors are
/// multiplied first, then the rest by ascending term count, truncating
/// throughout, so the fixed monomial part prunes the expansion as early as
/// possible. The accumulated term count is capped by `term_budget`.
pub fn eval_product_expr(expr: &ProductExpr, term_budget: u64) -> Result<Poly, FsingError> {
    let ring = &expr.ring;
    if let Some(q) = expr.truncation_q {
        ring.p_power_exponent(q)?;
    }
    let mut zeroed: Vec<Poly> = Vec::new();
    for f in &expr.factors {
        if f.exponent == 0 {
            continue;
        }
        if !RingCtx::same(f.poly.ring(), ring) {
            return Err(RingError::RingMismatch.into());
        }
        let fz = f.poly.zero_vars(&expr.zeroed_vars)?;
        if fz.is_zero() {
            return Ok(Poly::zero(ring));
        }
        zeroed.push(fz);
    }
    let exponents: Vec<u64> = expr
        .factors
        .iter()
        .filter(|f| f.exponent > 0)
        .map(|f| f.exponent)
        .collect();
    let mut idx: Vec<usize> = (0..zeroed.len()).collect();
    // Single-term factors first, then ascending size; ties keep input order.
    idx.sort_by_key(|&i| (zeroed[i].term_count() > 1, zeroed[i].term_count(), i));

    let total = idx.len();
    let mut acc = Poly::one(ring);
    for (step, &i) in idx.iter().enumerate() {
        let power = zeroed[i].pow_trunc(exponents[i], expr.truncation_q)?;
        acc = match expr.truncation_q {
            Some(q) => acc.trunc_mul(&power, q)?,
            None => acc.mul(&power)?,
        };
        if acc.is_zero() {
            return Ok(acc);
        }
        if acc.term_count() as u64 > term_budget {
            return Err(FsingError::Budget {
                terms: acc.term_count(),
                step: step + 1,
                total,
            });
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionStatus {
    Holds,
    Fails,
    Inconclusive,
}

impl CriterionStatus {
    pub fn name(self) -> &'static str {
        match self {
            CriterionStatus::Holds => "holds",
            CriterionStatus::Fails => "fails",
            CriterionStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of a criterion evaluation. `Holds` always carries the nonzero
/// surviving polynomial; `Fails` means the reduced product is exactly zero
/// with no zeroing applied; a zero product under zeroing, or a blown
/// budget, is `Inconclusive` for the unzeroed claim.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub status: CriterionStatus,
    pub q: u64,
    pub survivor: Option<Poly>,
    pub zeroed_vars: Vec<String>,
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

fn product_outcome(
    ring: &Ring,
    factors: Vec<ProductFactor>,
    zeroed_vars: &[String],
    q: u64,
    budget: u64,
    started: Instant,
) -> Result<CriterionResult, FsingError> {
    let expr = ProductExpr {
        ring: ring.clone(),
        factors,
        zeroed_vars: zeroed_vars.to_vec(),
        truncation_q: Some(q),
    };
    match eval_product_expr(&expr, budget) {
        Ok(result) => {
            let status = if !result.is_zero() {
                CriterionStatus::Holds
            } else if zeroed_vars.is_empty() {
                CriterionStatus::Fails
            } else {
                CriterionStatus::Inconclusive
            };
            let note = match status {
                CriterionStatus::Inconclusive => Some(
                    "product vanishes under variable zeroing; no conclusion for the unzeroed claim"
                        .to_string(),
                ),
                _ => None,
            };
            Ok(CriterionResult {
                status,
                q,
                survivor: if result.is_zero() { None } else { Some(result) },
                zeroed_vars: zeroed_vars.to_vec(),
                note,
                elapsed_ms: started.elapsed().as_millis() as u64,
            })
        }
        Err(FsingError::Budget { terms, step, total }) => Ok(CriterionResult {
            status: CriterionStatus::Inconclusive,
            q,
            survivor: None,
            zeroed_vars: zeroed_vars.to_vec(),
            note: Some(format!(
                "term budget exceeded: {} terms in the partial product after factor {} of {}",
                terms, step, total
            )),
            elapsed_ms: started.elapsed().as_millis() as u64,
        }),
        Err(e) => Err(e),
    }
}

/// Fedder's criterion for a complete intersection: with ω the product of
/// the generators, the quotient is F-pure iff `ω^{p-1} ∉ m^[p]`. The
/// caller asserts the generators form a regular sequence. Optional zeroing
/// strengthens a `Holds` verdict only.
pub fn fedder_ci_check(
    ideal: &Ideal,
    zeroed_vars: &[String],
    budget: u64,
) -> Result<CriterionResult, FsingError> {
    let started = Instant::now();
    let q = ideal.ring.p() as u64;
    let factors = ideal
        .gens
        .iter()
        .map(|g| ProductFactor {
            poly: g.clone(),
            exponent: q - 1,
        })
        .collect();
    product_outcome(&ideal.ring, factors, zeroed_vars, q, budget, started)
}

/// A Glassbrenner witness: test element, optional monomial prefactors with
/// per-characteristic exponents, the complete-intersection generators, and
/// the zeroing that strengthens the claim.
#[derive(Debug, Clone)]
pub struct WitnessSpec {
    pub ring: Ring,
    pub test_element: Poly,
    pub prefactors: Vec<(Poly, QExpr)>,
    pub ci_generators: Vec<Poly>,
    pub zeroed_vars: Vec<String>,
}

/// Glassbrenner's criterion through the complete-intersection colon
/// formula: F-regular iff `prefactors·c·ω^{q-1} ∉ m^[q]` for some q. Tries
/// the given q values in order and holds at the first nonzero product.
pub fn glassbrenner_ci_check(
    spec: &WitnessSpec,
    q_list: &[u64],
    budget: u64,
) -> Result<CriterionResult, FsingError> {
    if q_list.is_empty() {
        return Err(FsingError::EmptyQList);
    }
    let started = Instant::now();
    let ring = &spec.ring;
    let p = ring.p();
    let mut last = None;
    for &q in q_list {
        ring.p_power_exponent(q)?;
        let mut factors = Vec::with_capacity(spec.prefactors.len() + 1 + spec.ci_generators.len());
        for (poly, qexpr) in &spec.prefactors {
            factors.push(ProductFactor {
                poly: poly.clone(),
                exponent: qexpr.eval(p)?,
            });
        }
        factors.push(ProductFactor {
            poly: spec.test_element.clone(),
            exponent: 1,
        });
        for g in &spec.ci_generators {
            factors.push(ProductFactor {
                poly: g.clone(),
                exponent: q - 1,
            });
        }
        let outcome = product_outcome(ring, factors, &spec.zeroed_vars, q, budget, started)?;
        if outcome.status == CriterionStatus::Holds {
            return Ok(outcome);
        }
        last = Some(outcome);
    }
    Ok(last.expect("nonempty q list"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::DEFAULT_BUDGET;
    use crate::ring::MonomialOrder::GrevLex;

    fn pv(ring: &Ring, n: &str) -> Poly {
        Poly::var(ring, n).unwrap()
    }

    #[test]
    fn qexpr_eval_and_render() {
        assert_eq!(QExpr::P.eval(5).unwrap(), 5);
        assert_eq!(QExpr::PMinus(2).eval(2).unwrap(), 0);
        assert_eq!(QExpr::PSquared.eval(3).unwrap(), 9);
        assert_eq!(QExpr::PSquaredMinus(3).eval(2).unwrap(), 1);
        assert_eq!(QExpr::Int(7).eval(2).unwrap(), 7);
        assert!(matches!(
            QExpr::PMinus(3).eval(2),
            Err(FsingError::NegativeExponent { .. })
        ));
        assert_eq!(QExpr::PSquaredMinus(3).render(), "p^2-3");
    }

    #[test]
    fn eliminate_plain_variable_keeps_reduced_sum() {
        let r = RingCtx::new(5, &["x", "y"], GrevLex).unwrap();
        let els = [pv(&r, "x"), pv(&r, "x").add(&pv(&r, "y"))];
        let out = linear_eliminate(&r, &els).unwrap();
        assert_eq!(out.residual.vars(), ["y".to_string()]);
        assert_eq!(out.images.len(), 1);
        assert_eq!(out.images[0].to_string(), "y");
        assert_eq!(out.remaining_indices, [1]);
        assert_eq!(out.substitutions.len(), 1);
        assert_eq!(out.substitutions[0].0, "x");
        assert!(out.substitutions[0].1.is_zero());
    }

    #[test]
    fn eliminate_difference_identifies_later_variable() {
        let r = RingCtx::new(7, &["x", "y"], GrevLex).unwrap();
        let els = [pv(&r, "x").sub(&pv(&r, "y"))];
        let out = linear_eliminate(&r, &els).unwrap();
        assert_eq!(out.residual.vars(), ["x".to_string()]);
        assert!(out.images.is_empty());
        assert_eq!(out.substitutions[0].0, "y");
        assert_eq!(out.substitutions[0].1.to_string(), "x");
    }

    #[test]
    fn eliminate_composes_chained_identifications() {
        let r = RingCtx::new(3, &["x", "y", "z"], GrevLex).unwrap();
        let els = [pv(&r, "x").sub(&pv(&r, "y")), pv(&r, "y").sub(&pv(&r, "z"))];
        let out = linear_eliminate(&r, &els).unwrap();
        assert_eq!(out.residual.vars(), ["x".to_string()]);
        let subs: HashMap<_, _> = out
            .substitutions
            .iter()
            .map(|(n, p)| (n.clone(), p.to_string()))
            .collect();
        assert_eq!(subs["y"], "x");
        assert_eq!(subs["z"], "x");
    }

    #[test]
    fn eliminate_three_term_linear_form() {
        let r = RingCtx::new(7, &["u", "v", "w"], GrevLex).unwrap();
        let els = [pv(&r, "u").add(&pv(&r, "v")).add(&pv(&r, "w"))];
        let out = linear_eliminate(&r, &els).unwrap();
        assert_eq!(out.residual.vars(), ["u".to_string(), "v".to_string()]);
        assert_eq!(out.substitutions[0].0, "w");
        assert_eq!(out.substitutions[0].1.to_string(), "6*u + 6*v");
    }

    #[test]
    fn eliminate_detects_inconsistency() {
        let r = RingCtx::new(5, &["x"], GrevLex).unwrap();
        let els = [pv(&r, "x"), pv(&r, "x").sub(&Poly::one(&r))];
        assert!(matches!(
            linear_eliminate(&r, &els),
            Err(FsingError::Inconsistent { index: 1 })
        ));
    }

    #[test]
    fn hsop_on_the_variables_themselves() {
        let r = RingCtx::new(3, &["x", "y", "z"], GrevLex).unwrap();
        let els = [pv(&r, "x"), pv(&r, "y"), pv(&r, "z")];
        let report = hsop_check(&r, &els, DEFAULT_BUDGET).unwrap();
        assert!(report.holds);
        assert_eq!(report.elimination.residual.nvars(), 0);
    }

    #[test]
    fn hsop_rejects_wrong_count_and_inhomogeneous() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        assert!(matches!(
            hsop_check(&r, &[pv(&r, "x")], DEFAULT_BUDGET),
            Err(FsingError::CountMismatch {
                expected: 2,
                got: 1
            })
        ));
        let inhom = pv(&r, "x").add(&Poly::one(&r));
        assert!(matches!(
            hsop_check(&r, &[pv(&r, "x"), inhom], DEFAULT_BUDGET),
            Err(FsingError::Inhomogeneous { index: 1 })
        ));
    }

    #[test]
    fn hsop_verdict_is_scaling_and_permutation_invariant() {
        let r = RingCtx::new(5, &["x", "y"], GrevLex).unwrap();
        let f = pv(&r, "x").add(&pv(&r, "y"));
        let g = pv(&r, "x").pow_trunc(2, None).unwrap();
        let a = hsop_check(&r, &[f.clone(), g.clone()], DEFAULT_BUDGET).unwrap();
        let b = hsop_check(&r, &[g.scale(3), f.scale(2)], DEFAULT_BUDGET).unwrap();
        assert!(a.holds && b.holds);
    }

    #[test]
    fn product_of_nothing_is_one() {
        let r = RingCtx::new(3, &["x"], GrevLex).unwrap();
        let expr = ProductExpr {
            ring: r.clone(),
            factors: vec![],
            zeroed_vars: vec![],
            truncation_q: Some(3),
        };
        assert_eq!(
            eval_product_expr(&expr, DEFAULT_BUDGET).unwrap(),
            Poly::one(&r)
        );
    }

    #[test]
    fn zero_exponent_factor_is_skipped_even_if_base_vanishes() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        let expr = ProductExpr {
            ring: r.clone(),
            factors: vec![
                ProductFactor {
                    poly: pv(&r, "x"),
                    exponent: 0,
                },
                ProductFactor {
                    poly: pv(&r, "y"),
                    exponent: 1,
                },
            ],
            zeroed_vars: vec!["x".to_string()],
            truncation_q: None,
        };
        assert_eq!(
            eval_product_expr(&expr, DEFAULT_BUDGET)
                .unwrap()
                .to_string(),
            "y"
        );
    }

    #[test]
    fn truncated_product_matches_post_hoc_truncation() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        let f = pv(&r, "x").add(&pv(&r, "y"));
        let g = pv(&r, "x").add(&Poly::constant(&r, 2).mul(&pv(&r, "y")).unwrap());
        let make = |q| ProductExpr {
            ring: r.clone(),
            factors: vec![
                ProductFactor {
                    poly: f.clone(),
                    exponent: 2,
                },
                ProductFactor {
                    poly: g.clone(),
                    exponent: 3,
                },
            ],
            zeroed_vars: vec![],
            truncation_q: q,
        };
        let full = eval_product_expr(&make(None), DEFAULT_BUDGET).unwrap();
        for q in [3u64, 9] {
            let truncated = eval_product_expr(&make(Some(q)), DEFAULT_BUDGET).unwrap();
            assert_eq!(truncated, full.trunc(q));
        }
    }

    #[test]
    fn budget_overflow_is_reported() {
        let r = RingCtx::new(5, &["x", "y", "z"], GrevLex).unwrap();
        let f = pv(&r, "x").add(&pv(&r, "y")).add(&pv(&r, "z"));
        let expr = ProductExpr {
            ring: r.clone(),
            factors: vec![ProductFactor {
                poly: f,
                exponent: 4,
            }],
            zeroed_vars: vec![],
            truncation_q: Some(5),
        };
        assert!(matches!(
            eval_product_expr(&expr, 3),
            Err(FsingError::Budget { .. })
        ));
    }

    #[test]
    fn fedder_principal_variable_holds() {
        for p in [2u32, 3, 5] {
            let r = RingCtx::new(p, &["x", "y"], GrevLex).unwrap();
            let ideal = Ideal::new(&r, vec![pv(&r, "x")]);
            let res = fedder_ci_check(&ideal, &[], DEFAULT_BUDGET).unwrap();
            assert_eq!(res.status, CriterionStatus::Holds);
            let survivor = res.survivor.unwrap();
            assert_eq!(survivor, pv(&r, "x").pow_trunc(p as u64 - 1, None).unwrap());
        }
    }

    #[test]
    fn fedder_square_fails_unzeroed_but_is_inconclusive_zeroed() {
        let r = RingCtx::new(2, &["x", "y"], GrevLex).unwrap();
        let x2 = pv(&r, "x").pow_trunc(2, None).unwrap();
        let ideal = Ideal::new(&r, vec![x2]);
        let res = fedder_ci_check(&ideal, &[], DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, CriterionStatus::Fails);
        assert!(res.survivor.is_none());

        let sum = Ideal::new(&r, vec![pv(&r, "x").add(&pv(&r, "y"))]);
        let zeroed = ["x".to_string(), "y".to_string()];
        let res = fedder_ci_check(&sum, &zeroed, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, CriterionStatus::Inconclusive);
    }

    #[test]
    fn fedder_zeroing_strengthens_holds() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        let ideal = Ideal::new(&r, vec![pv(&r, "x").add(&pv(&r, "y"))]);
        let zeroed = ["y".to_string()];
        let res = fedder_ci_check(&ideal, &zeroed, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, CriterionStatus::Holds);
        assert_eq!(res.survivor.unwrap().to_string(), "x^2");
        let unzeroed = fedder_ci_check(&ideal, &[], DEFAULT_BUDGET).unwrap();
        assert_eq!(unzeroed.status, CriterionStatus::Holds);
    }

    #[test]
    fn glassbrenner_principal_variable_holds_at_p() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        let spec = WitnessSpec {
            ring: r.clone(),
            test_element: Poly::one(&r),
            prefactors: vec![],
            ci_generators: vec![pv(&r, "x")],
            zeroed_vars: vec![],
        };
        let res = glassbrenner_ci_check(&spec, &[3], DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, CriterionStatus::Holds);
        assert_eq!(res.q, 3);
        assert_eq!(res.survivor.unwrap().to_string(), "x^2");
        assert!(matches!(
            glassbrenner_ci_check(&spec, &[], DEFAULT_BUDGET),
            Err(FsingError::EmptyQList)
        ));
    }

    #[test]
    fn glassbrenner_is_invariant_under_factor_permutation() {
        let r = RingCtx::new(3, &["x", "y"], GrevLex).unwrap();
        let gens = vec![pv(&r, "x"), pv(&r, "y")];
        let mut reversed = gens.clone();
        reversed.reverse();
        let spec = |g: Vec<Poly>| WitnessSpec {
            ring: r.clone(),
            test_element: Poly::one(&r),
            prefactors: vec![],
            ci_generators: g,
            zeroed_vars: vec![],
        };
        let a = glassbrenner_ci_check(&spec(gens), &[3], DEFAULT_BUDGET).unwrap();
        let b = glassbrenner_ci_check(&spec(reversed), &[3], DEFAULT_BUDGET).unwrap();
        assert_eq!(a.survivor.unwrap(), b.survivor.unwrap());
    }
}
