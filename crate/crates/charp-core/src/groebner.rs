//! Buchberger Gröbner engine: reduced bases, normal forms, bracket powers,
//! and the zero-dimensionality test through leading-term ideals.
//!
//! The engine is deliberately simple — normal pair selection plus the
//! coprime-leading-term and chain criteria — because every ideal that
//! matters here has at most a dozen generators in at most a dozen variables
//! after linear elimination. A pair-reduction budget turns runaway inputs
//! into an explicit [`GbError::Budget`] instead of a wrong or hung answer.

use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

use crate::ring::{cmp_mono, Monomial, Poly, Ring, RingError, Term};

/// Default resource budget: caps S-polynomial reductions per basis
/// computation, and accumulated term counts in truncated-product
/// evaluation. Sized with ample headroom over the largest legitimate
/// workload (under one million terms).
pub const DEFAULT_BUDGET: u64 = 4_000_000;

#[derive(Debug, Error)]
pub enum GbError {
    #[error("pair-reduction budget exhausted after {spent} reductions")]
    Budget { spent: u64 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A finitely generated ideal: a ring plus its generator list (zeros
/// dropped, order preserved).
#[derive(Debug, Clone)]
pub struct Ideal {
    pub ring: Ring,
    pub gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ring: ring.clone(),
            gens,
        }
    }

    pub fn groebner(&self, budget: u64) -> Result<GroebnerBasis, GbError> {
        buchberger(&self.ring, &self.gens, budget)
    }
}

/// A reduced Gröbner basis: monic, pairwise tail-reduced, sorted ascending
/// by leading monomial. Unique for a given ideal and monomial order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    polys: Vec<Poly>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        crate::ring::RingCtx::same(&self.ring, &other.ring) && self.polys == other.polys
    }
}

impl Eq for GroebnerBasis {}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Remainder of `f` under multivariate division by the basis; zero
    /// exactly when `f` lies in the ideal.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        normal_form(f, &self.polys)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Minimal generators of the leading-term ideal (an antichain under
    /// divisibility).
    pub fn lead_monomials(&self) -> Vec<Monomial> {
        let mut lts: Vec<Monomial> = self
            .polys
            .iter()
            .filter_map(|g| g.lead().map(|t| t.mono.clone()))
            .collect();
        let mut keep = Vec::new();
        for (i, m) in lts.iter().enumerate() {
            let redundant = lts
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && other.divides(m) && (!m.divides(other) || j < i));
            if !redundant {
                keep.push(m.clone());
            }
        }
        lts = keep;
        lts
    }

    /// True when the quotient by the ideal is a finite-dimensional vector
    /// space: the leading-term ideal contains a pure power of every
    /// variable.
    pub fn dim_is_zero(&self) -> bool {
        let n = self.ring.nvars();
        let lts = self.lead_monomials();
        (0..n).all(|i| {
            lts.iter()
                .any(|m| m.exps()[i] > 0 && m.support().len() == 1)
        })
    }

    /// Krull dimension of the quotient by the leading-term ideal.
    pub fn quotient_dim(&self) -> usize {
        monomial_quotient_dim(self.ring.nvars(), &self.lead_monomials())
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u64,
}

/// Heap ordering for normal selection: smallest lcm degree first, ties by
/// exponent vector then indices, all total and deterministic.
struct PairKey(Pair);

impl PartialEq for PairKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_key(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for PairKey {}
impl PairKey {
    fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .deg
            .cmp(&other.0.deg)
            .then_with(|| self.0.lcm.exps().cmp(other.0.lcm.exps()))
            .then_with(|| (self.0.i, self.0.j).cmp(&(other.0.i, other.0.j)))
    }
}
impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed so the BinaryHeap pops the smallest key.
        other.cmp_key(self)
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(ring: &Ring, gens: &[Poly], budget: u64) -> Result<GroebnerBasis, GbError> {
    let order = ring.order();
    let mut basis: Vec<Poly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    basis.sort_by(|a, b| cmp_mono(order, &a.lead().unwrap().mono, &b.lead().unwrap().mono));

    let mut heap: BinaryHeap<PairKey> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let push_pair = |heap: &mut BinaryHeap<PairKey>,
                     pending: &mut HashSet<(usize, usize)>,
                     basis: &[Poly],
                     i: usize,
                     j: usize| {
        let lcm = basis[i]
            .lead()
            .unwrap()
            .mono
            .lcm(&basis[j].lead().unwrap().mono);
        let deg = lcm.degree();
        pending.insert((i, j));
        heap.push(PairKey(Pair { i, j, lcm, deg }));
    };
    for j in 1..basis.len() {
        for i in 0..j {
            push_pair(&mut heap, &mut pending, &basis, i, j);
        }
    }

    let mut spent = 0u64;
    while let Some(PairKey(pair)) = heap.pop() {
        pending.remove(&(pair.i, pair.j));
        let (f, g) = (&basis[pair.i], &basis[pair.j]);
        let (ltf, ltg) = (&f.lead().unwrap().mono, &g.lead().unwrap().mono);
        // Coprime-leading-term criterion: the S-polynomial reduces to zero.
        if ltf.coprime(ltg) {
            continue;
        }
        // Chain criterion: skip when some other leading term divides the
        // lcm and both connecting pairs were already handled.
        let chained = basis.iter().enumerate().any(|(k, h)| {
            k != pair.i
                && k != pair.j
                && h.lead().unwrap().mono.divides(&pair.lcm)
                && !pending.contains(&key(pair.i, k))
                && !pending.contains(&key(pair.j, k))
        });
        if chained {
            continue;
        }
        if spent >= budget {
            return Err(GbError::Budget { spent });
        }
        spent += 1;
        let s = s_polynomial(f, g, &pair.lcm)?;
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let new_idx = basis.len();
        basis.push(r);
        for i in 0..new_idx {
            push_pair(&mut heap, &mut pending, &basis, i, new_idx);
        }
    }

    Ok(reduce_basis(ring, basis))
}

#[inline]
fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn s_polynomial(f: &Poly, g: &Poly, lcm: &Monomial) -> Result<Poly, RingError> {
    // f and g are monic, so no coefficient adjustment is needed.
    let a = f.mul_term(1, &f.lead().unwrap().mono.quotient(lcm))?;
    let b = g.mul_term(1, &g.lead().unwrap().mono.quotient(lcm))?;
    Ok(a.sub(&b))
}

/// Minimizes and inter-reduces a basis into the unique reduced form.
fn reduce_basis(ring: &Ring, mut basis: Vec<Poly>) -> GroebnerBasis {
    let order = ring.order();
    basis.sort_by(|a, b| cmp_mono(order, &a.lead().unwrap().mono, &b.lead().unwrap().mono));
    // Minimize: drop elements whose leading term is divisible by another
    // kept leading term.
    let mut kept: Vec<Poly> = Vec::new();
    for g in basis {
        let lt = &g.lead().unwrap().mono;
        if !kept.iter().any(|h| h.lead().unwrap().mono.divides(lt)) {
            kept.push(g);
        }
    }
    // Inter-reduce tails.
    let mut reduced: Vec<Poly> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Poly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        reduced.push(normal_form(&kept[i], &others).monic());
    }
    reduced.sort_by(|a, b| cmp_mono(order, &a.lead().unwrap().mono, &b.lead().unwrap().mono));
    GroebnerBasis {
        ring: ring.clone(),
        polys: reduced,
    }
}

/// Remainder of multivariate division of `f` by `divisors` (each nonzero).
/// The divisor tried first is always the earliest in the slice, which makes
/// the result deterministic for a fixed slice order; for a reduced Gröbner
/// basis the remainder is independent of that choice.
pub fn normal_form(f: &Poly, divisors: &[Poly]) -> Poly {
    normal_form_impl(f, divisors, None)
}

/// Division with cofactors: returns `(r, q)` with `f = sum q_i d_i + r` and
/// no term of `r` divisible by any divisor leading term.
pub fn normal_form_ext(f: &Poly, divisors: &[Poly]) -> (Poly, Vec<Poly>) {
    let mut cof = vec![Poly::zero(f.ring()); divisors.len()];
    let r = normal_form_impl(f, divisors, Some(&mut cof));
    (r, cof)
}

fn normal_form_impl(f: &Poly, divisors: &[Poly], mut cofactors: Option<&mut Vec<Poly>>) -> Poly {
    let ring = f.ring().clone();
    let mut h = f.clone();
    let mut rem: Vec<Term> = Vec::new();
    'outer: while let Some(lead) = h.lead().cloned() {
        for (k, g) in divisors.iter().enumerate() {
            let ltg = g.lead().expect("zero divisor polynomial");
            if ltg.mono.divides(&lead.mono) {
                let c = ring.cmul(lead.coeff, ring.cinv(ltg.coeff));
                let m = ltg.mono.quotient(&lead.mono);
                // Exponents only shrink here, so the multiplication cannot
                // overflow.
                let sub = g.mul_term(c, &m).expect("no overflow in division");
                h = h.sub(&sub);
                if let Some(cof) = cofactors.as_deref_mut() {
                    let add =
                        Poly::from_sorted_terms_unchecked(&ring, vec![Term { coeff: c, mono: m }]);
                    cof[k] = cof[k].add(&add);
                }
                continue 'outer;
            }
        }
        // The leading term is irreducible; emit it. Subsequent leads are
        // strictly smaller, so `rem` stays sorted descending.
        rem.push(lead.clone());
        let lead_poly = Poly::from_sorted_terms_unchecked(&ring, vec![lead]);
        h = h.sub(&lead_poly);
    }
    Poly::from_sorted_terms_unchecked(&ring, rem)
}

/// Generators of the bracket power `I^[q]`: each generator raised to the
/// `q`-th power. Because `q` is a power of the characteristic, these
/// generate the ideal of all `q`-th powers of elements of `I`.
pub fn bracket_power(gens: &[Poly], q: u64) -> Result<Vec<Poly>, RingError> {
    let e = match gens.first() {
        Some(g) => g.ring().p_power_exponent(q)?,
        None => return Ok(Vec::new()),
    };
    gens.iter().map(|g| g.frobenius_pow(e)).collect()
}

/// The colon ideal `(I^[q] : I)` for a complete intersection `I`, via the
/// closed form `(omega^(q-1)) + I^[q]` where `omega` is the product of the
/// generators. The caller is responsible for the regular-sequence
/// hypothesis.
pub fn ci_colon(gens: &[Poly], q: u64) -> Result<Vec<Poly>, RingError> {
    assert!(!gens.is_empty(), "ci_colon needs at least one generator");
    let ring = gens[0].ring().clone();
    ring.p_power_exponent(q)?;
    let mut omega = Poly::one(&ring);
    for g in gens {
        omega = omega.mul(g)?;
    }
    let mut out = vec![omega.pow_trunc(q - 1, None)?];
    out.extend(bracket_power(gens, q)?);
    Ok(out)
}

/// Krull dimension of `k[x_1..x_n]/M` for a monomial ideal `M`: the size of
/// the largest variable subset touching no generator entirely, computed by
/// branch and bound over the generator supports.
pub fn monomial_quotient_dim(nvars: usize, gens: &[Monomial]) -> usize {
    assert!(
        nvars <= 128,
        "dimension search supports at most 128 variables"
    );
    let supports: Vec<u128> = gens
        .iter()
        .filter(|m| !m.is_one())
        .map(|m| m.support().iter().fold(0u128, |acc, &i| acc | (1u128 << i)))
        .collect();
    if gens.iter().any(|m| m.is_one()) {
        // The ideal is the unit ideal; the quotient is the zero ring.
        return 0;
    }
    let all = if nvars == 128 {
        !0u128
    } else {
        (1u128 << nvars) - 1
    };
    let mut best = 0usize;
    search(all, &supports, &mut best);
    best
}

fn search(alive: u128, supports: &[u128], best: &mut usize) {
    let size = alive.count_ones() as usize;
    if size <= *best {
        return;
    }
    // Find a generator fully inside the candidate set; if none, the set is
    // independent.
    match supports.iter().find(|&&s| s & !alive == 0) {
        None => *best = size,
        Some(&s) => {
            let mut rest = s;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                rest ^= v;
                search(alive & !v, supports, best);
            }
        }
    }
}

/// Least `n <= cap` with `f^n` in the ideal presented by `gb`, if any.
/// Powers are reduced incrementally, which is sound because the normal form
/// is a linear section of the quotient map.
pub fn power_membership(f: &Poly, gb: &GroebnerBasis, cap: u32) -> Result<Option<u32>, RingError> {
    let mut h = gb.normal_form(f);
    for n in 1..=cap {
        if h.is_zero() {
            return Ok(Some(n));
        }
        if n < cap {
            h = gb.normal_form(&h.mul(f)?);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{MonomialOrder, RingCtx};

    fn ring(p: u32, vars: &[&str]) -> Ring {
        RingCtx::new(p, vars, MonomialOrder::GrevLex).unwrap()
    }

    fn pv(r: &Ring, name: &str) -> Poly {
        Poly::var(r, name).unwrap()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(5, &["x", "y"]);
        let x2 = pv(&r, "x").pow_trunc(2, None).unwrap();
        let xy = pv(&r, "x").mul(&pv(&r, "y")).unwrap();
        let gb = buchberger(&r, &[x2.clone(), xy.clone()], DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.polys(), &[xy, x2]);
    }

    #[test]
    fn principal_ideal_basis_is_monic_generator() {
        let r = ring(7, &["x", "y"]);
        let f = pv(&r, "x").scale(3).add(&pv(&r, "y"));
        let gb = buchberger(&r, std::slice::from_ref(&f), DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.polys(), &[f.monic()]);
    }

    #[test]
    fn normal_form_of_generator_is_zero() {
        let r = ring(3, &["x", "y"]);
        let f = pv(&r, "x").mul(&pv(&r, "y")).unwrap().add(&Poly::one(&r));
        let g = pv(&r, "y").pow_trunc(2, None).unwrap().sub(&pv(&r, "x"));
        let gb = buchberger(&r, &[f.clone(), g.clone()], DEFAULT_BUDGET).unwrap();
        assert!(gb.contains(&f));
        assert!(gb.contains(&g));
        let prod = f.mul(&g).unwrap();
        assert!(gb.contains(&prod));
    }

    #[test]
    fn units_survive_the_maximal_ideal() {
        let r = ring(5, &["x", "y"]);
        let gb = buchberger(&r, &[pv(&r, "x"), pv(&r, "y")], DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.normal_form(&Poly::one(&r)), Poly::one(&r));
    }

    #[test]
    fn bracket_power_of_maximal_ideal() {
        let r = ring(3, &["x", "y"]);
        let out = bracket_power(&[pv(&r, "x"), pv(&r, "y")], 9).unwrap();
        assert_eq!(out[0], pv(&r, "x").pow_trunc(9, None).unwrap());
        assert_eq!(out[1], pv(&r, "y").pow_trunc(9, None).unwrap());
        assert!(bracket_power(&[pv(&r, "x")], 6).is_err());
    }

    #[test]
    fn ci_colon_small_cases() {
        // I = (x, y), q = 2, p = 2: (xy) + (x^2, y^2).
        let r = ring(2, &["x", "y"]);
        let out = ci_colon(&[pv(&r, "x"), pv(&r, "y")], 2).unwrap();
        let xy = pv(&r, "x").mul(&pv(&r, "y")).unwrap();
        assert_eq!(out[0], xy);
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn dimension_zero_detection() {
        let r = ring(5, &["x", "y"]);
        let x2 = pv(&r, "x").pow_trunc(2, None).unwrap();
        let y3 = pv(&r, "y").pow_trunc(3, None).unwrap();
        let gb = buchberger(&r, &[x2, y3], DEFAULT_BUDGET).unwrap();
        assert!(gb.dim_is_zero());
        assert_eq!(gb.quotient_dim(), 0);

        let gb = buchberger(&r, &[pv(&r, "x")], DEFAULT_BUDGET).unwrap();
        assert!(!gb.dim_is_zero());
        assert_eq!(gb.quotient_dim(), 1);
    }

    #[test]
    fn monomial_dimension_matches_staircase() {
        let r = ring(5, &["x", "y"]);
        let xy = pv(&r, "x").mul(&pv(&r, "y")).unwrap();
        let gb = buchberger(&r, &[xy], DEFAULT_BUDGET).unwrap();
        // k[x,y]/(xy): the axes; dimension 1.
        assert_eq!(gb.quotient_dim(), 1);
    }

    #[test]
    fn power_membership_of_generator_is_one() {
        let r = ring(3, &["x", "y"]);
        let f = pv(&r, "x").add(&pv(&r, "y"));
        let gb = buchberger(&r, std::slice::from_ref(&f), DEFAULT_BUDGET).unwrap();
        assert_eq!(power_membership(&f, &gb, 8).unwrap(), Some(1));
        // y is not in the radical of (x).
        let gb = buchberger(&r, &[pv(&r, "x")], DEFAULT_BUDGET).unwrap();
        assert_eq!(power_membership(&pv(&r, "y"), &gb, 8).unwrap(), None);
        // x is in sqrt((x^3)) with exact power 3.
        let x3 = pv(&r, "x").pow_trunc(3, None).unwrap();
        let gb = buchberger(&r, &[x3], DEFAULT_BUDGET).unwrap();
        assert_eq!(power_membership(&pv(&r, "x"), &gb, 8).unwrap(), Some(3));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = ring(7, &["x", "y", "z"]);
        // Any non-trivial ideal exhausts a zero budget.
        let f = pv(&r, "x").mul(&pv(&r, "y")).unwrap().sub(&pv(&r, "z"));
        let g = pv(&r, "y").mul(&pv(&r, "z")).unwrap().sub(&pv(&r, "x"));
        match buchberger(&r, &[f, g], 0) {
            Err(GbError::Budget { spent: 0 }) => {}
            other => panic!(
                "expected budget error, got {:?}",
                other.map(|g| g.polys().len())
            ),
        }
    }

    #[test]
    fn division_reconstruction() {
        let r = ring(7, &["x", "y"]);
        let d1 = pv(&r, "x").pow_trunc(2, None).unwrap().sub(&pv(&r, "y"));
        let d2 = pv(&r, "x").mul(&pv(&r, "y")).unwrap().sub(&Poly::one(&r));
        let f = pv(&r, "x")
            .pow_trunc(3, None)
            .unwrap()
            .add(&pv(&r, "y").scale(4));
        let (rem, cof) = normal_form_ext(&f, &[d1.clone(), d2.clone()]);
        let mut rebuilt = rem.clone();
        for (q, d) in cof.iter().zip([&d1, &d2]) {
            rebuilt = rebuilt.add(&q.mul(d).unwrap());
        }
        assert_eq!(rebuilt, f);
    }
}
