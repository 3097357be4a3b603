//! Sparse multivariate polynomials over a prime field `F_p`.
//!
//! Polynomials are stored as term lists sorted strictly descending in the
//! ring's monomial order, with nonzero coefficients and no duplicate
//! monomials, so equal polynomials have identical representations.
//!
//! Beyond plain ring arithmetic the module provides the two operations that
//! make characteristic-p membership checks cheap:
//!
//! * [`Poly::trunc_mul`]: multiplication reduced modulo the bracket power
//!   `m^[q]` of the maximal ideal (a monomial lies in `m^[q]` exactly when
//!   some exponent is `>= q`, so reduction is termwise deletion, applied to
//!   every intermediate term product rather than only at the end);
//! * [`Poly::frobenius_pow`]: `f^(p^e)` by scaling exponents, since
//!   coefficients in `F_p` are fixed by Frobenius.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest representable exponent; construction fails beyond this rather
/// than wrapping.
pub const EXP_BOUND: u32 = u16::MAX as u32;

/// Largest supported characteristic.
pub const MAX_CHAR: u32 = 1 << 20;

/// Shared, immutable ring context. All polynomial operations require their
/// operands to belong to equal contexts.
pub type Ring = Arc<RingCtx>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} out of range (2..=2^20)")]
    CharOutOfRange(u32),
    #[error("variable list is empty or contains duplicates")]
    BadVariables,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent exceeds bound {}", EXP_BOUND)]
    ExponentOverflow,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("{0} is not a power of the characteristic")]
    NotPPower(u64),
}

/// Monomial order tag. Graded reverse lexicographic is the default
/// everywhere; lexicographic is available for experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
}

impl MonomialOrder {
    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::GrevLex => "grevlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

/// The ring `F_p[vars]` with a fixed monomial order. Variable positions in
/// exponent vectors follow the declaration order.
#[derive(Debug)]
pub struct RingCtx {
    p: u32,
    vars: Vec<String>,
    index: HashMap<String, usize>,
    order: MonomialOrder,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl RingCtx {
    /// Builds a ring context, checking primality of `p` and uniqueness of
    /// the variable names.
    pub fn new<S: AsRef<str>>(p: u32, vars: &[S], order: MonomialOrder) -> Result<Ring, RingError> {
        if !(2..=MAX_CHAR).contains(&p) {
            return Err(RingError::CharOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        // An empty variable list is allowed: k[∅] = k (residual rings of a
        // full elimination).
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || index.insert(v.clone(), i).is_some() {
                return Err(RingError::BadVariables);
            }
        }
        Ok(Arc::new(RingCtx {
            p,
            vars,
            index,
            order,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Structural ring equality: same characteristic, same variables in the
    /// same order, same monomial order.
    pub fn same(a: &Ring, b: &Ring) -> bool {
        Arc::ptr_eq(a, b) || (a.p == b.p && a.order == b.order && a.vars == b.vars)
    }

    // Coefficient arithmetic on residues in `0..p`.

    #[inline]
    pub fn cadd(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn csub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn cneg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn cmul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn cpow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.cmul(acc, base);
            }
            base = self.cmul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem; panics on zero.
    pub fn cinv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.cpow(a, self.p as u64 - 2)
    }

    /// Checks that `q` is a power of `p` and returns the exponent `e` with
    /// `q = p^e` (with `e >= 1`).
    pub fn p_power_exponent(&self, q: u64) -> Result<u32, RingError> {
        let mut v = q;
        let mut e = 0u32;
        while v > 1 && v.is_multiple_of(self.p as u64) {
            v /= self.p as u64;
            e += 1;
        }
        if v == 1 && e >= 1 {
            Ok(e)
        } else {
            Err(RingError::NotPPower(q))
        }
    }
}

/// Exponent vector of a monomial; length always equals the ring's variable
/// count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Box<[u16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0u16; nvars].into_boxed_slice())
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, RingError> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            let s = *a as u32 + *b as u32;
            if s > EXP_BOUND {
                return Err(RingError::ExponentOverflow);
            }
            out.push(s as u16);
        }
        Ok(Monomial(out.into_boxed_slice()))
    }

    /// True when the exponents are coordinatewise coprime, i.e. the two
    /// monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables appearing with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Total comparison of monomials under `order`. Returns `Greater` when `a`
/// is the larger monomial.
#[inline]
pub fn cmp_mono(order: MonomialOrder, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match order {
        MonomialOrder::Lex => {
            for (x, y) in a.0.iter().zip(b.0.iter()) {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        }
        MonomialOrder::GrevLex => {
            match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {}
                ord => return ord,
            }
            // Equal degree: the monomial whose rightmost differing exponent
            // is smaller is the larger monomial.
            for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
    }
}

/// One term of a polynomial: a nonzero coefficient in `0..p` and a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: u32,
    pub mono: Monomial,
}

/// A polynomial in canonical form: terms sorted strictly descending in the
/// ring's monomial order, no zero coefficients, no duplicate monomials. The
/// empty term list is zero.
#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    terms: Vec<Term>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        RingCtx::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: u32) -> Poly {
        let c = c % ring.p();
        let mut terms = Vec::new();
        if c != 0 {
            terms.push(Term {
                coeff: c,
                mono: Monomial::one(ring.nvars()),
            });
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Poly, RingError> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0u16; ring.nvars()];
        exps[i] = 1;
        Ok(Poly {
            ring: ring.clone(),
            terms: vec![Term {
                coeff: 1,
                mono: Monomial(exps.into_boxed_slice()),
            }],
        })
    }

    /// Builds a polynomial from arbitrary `(coefficient, exponents)` pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_terms<I>(ring: &Ring, items: I) -> Result<Poly, RingError>
    where
        I: IntoIterator<Item = (u32, Vec<u16>)>,
    {
        let mut map: HashMap<Monomial, u32> = HashMap::new();
        for (c, exps) in items {
            if exps.len() != ring.nvars() {
                return Err(RingError::BadVariables);
            }
            let c = c % ring.p();
            if c == 0 {
                continue;
            }
            let m = Monomial(exps.into_boxed_slice());
            let entry = map.entry(m).or_insert(0);
            *entry = ring.cadd(*entry, c);
        }
        Ok(Poly::from_map(ring, map))
    }

    /// Collects a monomial->coefficient map into canonical sorted form.
    fn from_map(ring: &Ring, map: HashMap<Monomial, u32>) -> Poly {
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        let order = ring.order();
        terms.sort_unstable_by(|a, b| cmp_mono(order, &b.mono, &a.mono));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from terms already in strictly descending order
    /// with nonzero reduced coefficients; only checked in debug builds.
    pub(crate) fn from_sorted_terms_unchecked(ring: &Ring, terms: Vec<Term>) -> Poly {
        let p = Poly {
            ring: ring.clone(),
            terms,
        };
        debug_assert!(p.is_canonical());
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the ring's order.
    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    /// True when every term has the same total degree (0 is homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(first) => {
                let d = first.mono.degree();
                self.terms.iter().all(|t| t.mono.degree() == d)
            }
        }
    }

    fn assert_same_ring(&self, other: &Poly) {
        assert!(
            RingCtx::same(&self.ring, &other.ring),
            "operands belong to different rings"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_ring(other);
        let ring = &self.ring;
        let order = ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let a = &self.terms[i];
            let b = &other.terms[j];
            match cmp_mono(order, &a.mono, &b.mono) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ring.cadd(a.coeff, b.coeff);
                    if c != 0 {
                        out.push(Term {
                            coeff: c,
                            mono: a.mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Poly {
        let ring = &self.ring;
        Poly {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: ring.cneg(t.coeff),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let ring = &self.ring;
        let c = c % ring.p();
        if c == 0 {
            return Poly::zero(ring);
        }
        Poly {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: ring.cmul(t.coeff, c),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    /// Divides by the leading coefficient; zero is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(t) => self.scale(self.ring.cinv(t.coeff)),
        }
    }

    /// Multiplies by a single term. Exponent overflow is an error.
    pub fn mul_term(&self, coeff: u32, mono: &Monomial) -> Result<Poly, RingError> {
        let ring = &self.ring;
        let coeff = coeff % ring.p();
        if coeff == 0 {
            return Ok(Poly::zero(ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term {
                coeff: ring.cmul(t.coeff, coeff),
                mono: t.mono.mul(mono)?,
            });
        }
        // Multiplying every monomial by a fixed monomial preserves the
        // relative order, so the result is already sorted.
        Ok(Poly {
            ring: ring.clone(),
            terms,
        })
    }

    /// Full product, merged and canonicalized. Fails on exponent overflow.
    pub fn mul(&self, other: &Poly) -> Result<Poly, RingError> {
        self.mul_impl(other, None)
    }

    /// Product reduced modulo `m^[q]`: every intermediate term product with
    /// any exponent `>= q` is dropped on the spot. Sound because `m^[q]` is
    /// an ideal, so multiples of dropped terms stay inside it.
    pub fn trunc_mul(&self, other: &Poly, q: u64) -> Result<Poly, RingError> {
        self.ring.p_power_exponent(q)?;
        self.mul_impl(other, Some(q))
    }

    fn mul_impl(&self, other: &Poly, q: Option<u64>) -> Result<Poly, RingError> {
        self.assert_same_ring(other);
        let ring = &self.ring;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(ring));
        }
        // Iterate with the shorter polynomial outermost so the hash map of
        // partial sums is probed in long cache-friendly runs.
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let nv = ring.nvars();
        let mut map: HashMap<Monomial, u32> =
            HashMap::with_capacity(small.terms.len() * big.terms.len() / 2 + 8);
        let mut scratch = vec![0u16; nv];
        for ta in &small.terms {
            'prod: for tb in &big.terms {
                let exps = ta.mono.0.iter().zip(tb.mono.0.iter());
                for (dst, (&ea, &eb)) in scratch.iter_mut().zip(exps) {
                    let s = ea as u32 + eb as u32;
                    if let Some(q) = q {
                        if s as u64 >= q {
                            continue 'prod;
                        }
                    }
                    if s > EXP_BOUND {
                        return Err(RingError::ExponentOverflow);
                    }
                    *dst = s as u16;
                }
                let c = ring.cmul(ta.coeff, tb.coeff);
                let mono = Monomial(scratch.clone().into_boxed_slice());
                let entry = map.entry(mono).or_insert(0);
                *entry = ring.cadd(*entry, c);
            }
        }
        Ok(Poly::from_map(ring, map))
    }

    /// `f^(p^e)` by scaling every exponent by `p^e`; coefficients are fixed
    /// by Frobenius in `F_p`.
    pub fn frobenius_pow(&self, e: u32) -> Result<Poly, RingError> {
        let ring = &self.ring;
        let scale = (ring.p() as u64)
            .checked_pow(e)
            .ok_or(RingError::ExponentOverflow)?;
        if scale == 1 {
            return Ok(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = Vec::with_capacity(ring.nvars());
            for &x in t.mono.0.iter() {
                let s = x as u64 * scale;
                if s > EXP_BOUND as u64 {
                    return Err(RingError::ExponentOverflow);
                }
                exps.push(s as u16);
            }
            terms.push(Term {
                coeff: t.coeff,
                mono: Monomial(exps.into_boxed_slice()),
            });
        }
        // Scaling all exponents uniformly preserves both supported orders.
        Ok(Poly {
            ring: ring.clone(),
            terms,
        })
    }

    /// `f^n`, optionally reduced modulo `m^[q]` throughout.
    ///
    /// With truncation the exponent is factored in base p,
    /// `n = sum d_i p^i`, and the power assembled as the product of
    /// `frobenius_pow(f^(d_i), i)`; for `n = q - 1` this is the familiar
    /// factorization `f^(q-1) = prod_i frobenius_pow(f^(p-1), i)`. Without
    /// truncation, plain binary powering. Both agree with repeated
    /// multiplication.
    pub fn pow_trunc(&self, n: u64, q: Option<u64>) -> Result<Poly, RingError> {
        let ring = &self.ring;
        if n == 0 {
            return Ok(Poly::one(ring));
        }
        match q {
            None => {
                let mut acc: Option<Poly> = None;
                let mut base = self.clone();
                let mut n = n;
                loop {
                    if n & 1 == 1 {
                        acc = Some(match acc {
                            None => base.clone(),
                            Some(a) => a.mul(&base)?,
                        });
                    }
                    n >>= 1;
                    if n == 0 {
                        break;
                    }
                    base = base.mul(&base)?;
                }
                Ok(acc.unwrap())
            }
            Some(q) => {
                ring.p_power_exponent(q)?;
                let p = ring.p() as u64;
                // Base-p digits of n, least significant first.
                let mut digits = Vec::new();
                let mut v = n;
                while v > 0 {
                    digits.push(v % p);
                    v /= p;
                }
                let mut acc = Poly::one(ring);
                for (i, &d) in digits.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    // Small truncated power, then one Frobenius scaling.
                    let small = self.pow_binary_trunc(d, q)?;
                    let factor = small.frobenius_pow(i as u32)?;
                    acc = acc.trunc_mul(&factor, q)?;
                }
                Ok(acc)
            }
        }
    }

    /// Binary powering with truncation after every multiplication; sound
    /// because `m^[q]`-reduced multiplication is the quotient-ring product.
    fn pow_binary_trunc(&self, n: u64, q: u64) -> Result<Poly, RingError> {
        let mut acc: Option<Poly> = None;
        let mut base = self.trunc(q);
        let mut n = n;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.trunc_mul(&base, q)?,
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.trunc_mul(&base, q)?;
        }
        Ok(acc.unwrap_or_else(|| Poly::one(&self.ring)))
    }

    /// Reduction modulo `m^[q]` alone: deletes every term with an exponent
    /// `>= q`.
    pub fn trunc(&self, q: u64) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.mono.0.iter().all(|&e| (e as u64) < q))
                .cloned()
                .collect(),
        }
    }

    /// Applies the ring homomorphism determined by `bindings` (variables of
    /// `self` mapped to polynomials over `target`); unbound variables that
    /// occur in the polynomial must exist in `target` under the same name.
    pub fn substitute(
        &self,
        target: &Ring,
        bindings: &HashMap<String, Poly>,
    ) -> Result<Poly, RingError> {
        let src = &self.ring;
        if target.p() != src.p() {
            return Err(RingError::RingMismatch);
        }
        for (name, img) in bindings {
            if src.var_index(name).is_none() {
                return Err(RingError::UnknownVariable(name.clone()));
            }
            if !RingCtx::same(img.ring(), target) {
                return Err(RingError::RingMismatch);
            }
        }
        let mut used = vec![false; src.nvars()];
        for t in &self.terms {
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        // Per source variable: either a polynomial image or the index of
        // the same-named target variable; unused variables need neither.
        enum Image<'a> {
            Poly(&'a Poly),
            Var(usize),
            Unused,
        }
        let mut images = Vec::with_capacity(src.nvars());
        for (i, v) in src.vars().iter().enumerate() {
            match bindings.get(v) {
                Some(img) => images.push(Image::Poly(img)),
                None if used[i] => {
                    let idx = target
                        .var_index(v)
                        .ok_or_else(|| RingError::UnknownVariable(v.clone()))?;
                    images.push(Image::Var(idx));
                }
                None => images.push(Image::Unused),
            }
        }
        let mut acc = Poly::zero(target);
        for t in &self.terms {
            // Direct part: variables mapping to target variables.
            let mut exps = vec![0u16; target.nvars()];
            let mut poly_part: Option<Poly> = None;
            let mut coeff = t.coeff;
            let mut dead = false;
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &images[i] {
                    Image::Unused => unreachable!("positive exponent on unused variable"),
                    Image::Var(j) => {
                        let s = exps[*j] as u32 + e as u32;
                        if s > EXP_BOUND {
                            return Err(RingError::ExponentOverflow);
                        }
                        exps[*j] = s as u16;
                    }
                    Image::Poly(img) => {
                        if img.is_zero() {
                            dead = true;
                            break;
                        }
                        let pw = img.pow_trunc(e as u64, None)?;
                        poly_part = Some(match poly_part {
                            None => pw,
                            Some(acc) => acc.mul(&pw)?,
                        });
                    }
                }
            }
            if dead || coeff == 0 {
                continue;
            }
            let mono = Monomial(exps.into_boxed_slice());
            let term_image = match poly_part {
                None => {
                    let mut p = Poly::one(target);
                    p = p.mul_term(coeff, &mono)?;
                    p
                }
                Some(pp) => {
                    coeff %= target.p();
                    pp.mul_term(coeff, &mono)?
                }
            };
            acc = acc.add(&term_image);
        }
        Ok(acc)
    }

    /// Substitution of selected variables by zero within the same ring.
    pub fn zero_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Poly, RingError> {
        let mut idxs = Vec::with_capacity(vars.len());
        for v in vars {
            let i = self
                .ring
                .var_index(v.as_ref())
                .ok_or_else(|| RingError::UnknownVariable(v.as_ref().to_string()))?;
            idxs.push(i);
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| idxs.iter().all(|&i| t.mono.0[i] == 0))
                .cloned()
                .collect(),
        })
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: &str) -> Result<Poly, RingError> {
        let ring = &self.ring;
        let i = ring
            .var_index(v)
            .ok_or_else(|| RingError::UnknownVariable(v.to_string()))?;
        let mut terms = Vec::new();
        for t in &self.terms {
            let e = t.mono.0[i];
            if e == 0 {
                continue;
            }
            let c = ring.cmul(t.coeff, e as u32 % ring.p());
            if c == 0 {
                continue;
            }
            let mut exps = t.mono.0.to_vec();
            exps[i] = e - 1;
            terms.push(Term {
                coeff: c,
                mono: Monomial(exps.into_boxed_slice()),
            });
        }
        let order = ring.order();
        terms.sort_unstable_by(|a, b| cmp_mono(order, &b.mono, &a.mono));
        Ok(Poly {
            ring: ring.clone(),
            terms,
        })
    }

    /// Checks the canonical-form invariants; used by debug assertions and
    /// the randomized suites.
    pub fn is_canonical(&self) -> bool {
        let order = self.ring.order();
        if self
            .terms
            .iter()
            .any(|t| t.coeff == 0 || t.coeff >= self.ring.p())
        {
            return false;
        }
        self.terms
            .windows(2)
            .all(|w| cmp_mono(order, &w[0].mono, &w[1].mono) == std::cmp::Ordering::Greater)
    }

    /// Renders one term in the canonical text form, e.g. `3*x^2*y`.
    fn render_term(&self, t: &Term, out: &mut String) {
        use std::fmt::Write;
        let mut first = true;
        if t.coeff != 1 || t.mono.is_one() {
            write!(out, "{}", t.coeff).unwrap();
            first = false;
        }
        for (i, &e) in t.mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(self.ring.var_name(i));
            if e > 1 {
                write!(out, "^{}", e).unwrap();
            }
        }
    }
}

impl fmt::Display for Poly {
    /// Canonical text form: terms in descending order joined by ` + `,
    /// coefficients in `0..p`. Parses back to an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            self.render_term(t, &mut s);
        }
        write!(f, "{}", s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, vars: &[&str]) -> Ring {
        RingCtx::new(p, vars, MonomialOrder::GrevLex).unwrap()
    }

    /// Tiny expression helper for tests: parses `x`, products, sums via the
    /// public constructors.
    fn v(r: &Ring, name: &str) -> Poly {
        Poly::var(r, name).unwrap()
    }

    #[test]
    fn primality_is_enforced() {
        assert!(RingCtx::new(4, &["x"], MonomialOrder::GrevLex).is_err());
        assert!(RingCtx::new(1, &["x"], MonomialOrder::GrevLex).is_err());
        assert!(RingCtx::new(65537, &["x"], MonomialOrder::GrevLex).is_ok());
        assert_eq!(
            RingCtx::new(9, &["x"], MonomialOrder::GrevLex).unwrap_err(),
            RingError::NotPrime(9)
        );
    }

    #[test]
    fn duplicate_variables_rejected_but_empty_list_allowed() {
        assert!(RingCtx::new(3, &["x", "x"], MonomialOrder::GrevLex).is_err());
        let k = RingCtx::new(3, &[] as &[&str], MonomialOrder::GrevLex).unwrap();
        assert_eq!(k.nvars(), 0);
        assert_eq!(
            Poly::one(&k).mul(&Poly::constant(&k, 2)).unwrap(),
            Poly::constant(&k, 2)
        );
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let r = ring(5, &["x", "y"]);
        let f = v(&r, "x").add(&v(&r, "y"));
        assert_eq!(f.add(&Poly::zero(&r)), f);
        // (x + y) + (x - y) = 2x
        let g = v(&r, "x").sub(&v(&r, "y"));
        assert_eq!(f.add(&g), v(&r, "x").scale(2));
    }

    #[test]
    fn char_two_annihilation() {
        let r = ring(2, &["x"]);
        let x = v(&r, "x");
        assert!(x.add(&x).is_zero());
    }

    #[test]
    fn product_difference_of_squares() {
        let r = ring(7, &["x", "y"]);
        let f = v(&r, "x").add(&v(&r, "y"));
        let g = v(&r, "x").sub(&v(&r, "y"));
        let x2 = v(&r, "x").mul(&v(&r, "x")).unwrap();
        let y2 = v(&r, "y").mul(&v(&r, "y")).unwrap();
        assert_eq!(f.mul(&g).unwrap(), x2.sub(&y2));
    }

    #[test]
    fn freshmans_dream() {
        let r = ring(2, &["x", "y"]);
        let f = v(&r, "x").add(&v(&r, "y"));
        let sq = f.mul(&f).unwrap();
        let expect = Poly::from_terms(&r, vec![(1, vec![2, 0]), (1, vec![0, 2])]).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn truncation_kills_qth_powers() {
        let r = ring(3, &["x"]);
        let x = v(&r, "x");
        let xq1 = x.pow_trunc(2, None).unwrap();
        assert!(xq1.trunc_mul(&x, 3).unwrap().is_zero());
        // (x+y)^2 mod m^[2] at p=2: squares die, cross terms cancel.
        let r2 = ring(2, &["x", "y"]);
        let f = v(&r2, "x").add(&v(&r2, "y"));
        assert!(f.trunc_mul(&f, 2).unwrap().is_zero());
    }

    #[test]
    fn trunc_requires_p_power() {
        let r = ring(3, &["x"]);
        let x = v(&r, "x");
        assert_eq!(x.trunc_mul(&x, 4).unwrap_err(), RingError::NotPPower(4));
        assert!(x.trunc_mul(&x, 9).is_ok());
    }

    #[test]
    fn frobenius_scales_exponents() {
        let r = ring(3, &["x", "y"]);
        let f = v(&r, "x").add(&v(&r, "y"));
        let cubed = f.frobenius_pow(1).unwrap();
        let expect = Poly::from_terms(&r, vec![(1, vec![3, 0]), (1, vec![0, 3])]).unwrap();
        assert_eq!(cubed, expect);
        assert_eq!(f.frobenius_pow(0).unwrap(), f);
    }

    #[test]
    fn frobenius_fixes_coefficients() {
        let r = ring(5, &["x"]);
        let f = v(&r, "x").scale(2);
        let p5 = f.frobenius_pow(1).unwrap();
        assert_eq!(p5.lead().unwrap().coeff, 2); // 2^5 = 32 = 2 mod 5
        assert_eq!(p5.lead().unwrap().mono.exps(), &[5]);
    }

    #[test]
    fn pow_binomial_vanishing() {
        // (x+y)^3 mod m^[3] at p=3: pure cubes die, the middle binomials
        // have coefficient divisible by 3.
        let r = ring(3, &["x", "y"]);
        let f = v(&r, "x").add(&v(&r, "y"));
        assert!(f.pow_trunc(3, Some(3)).unwrap().is_zero());
        assert_eq!(f.pow_trunc(1, None).unwrap(), f);
    }

    #[test]
    fn zero_pow_zero_is_one() {
        let r = ring(3, &["x"]);
        let z = Poly::zero(&r);
        assert_eq!(z.pow_trunc(0, None).unwrap(), Poly::one(&r));
        assert!(z.pow_trunc(2, None).unwrap().is_zero());
    }

    #[test]
    fn substitute_zero_and_identity() {
        let r = ring(5, &["x", "y", "z"]);
        let f = v(&r, "x").mul(&v(&r, "y")).unwrap().add(&v(&r, "z"));
        assert_eq!(f.substitute(&r, &HashMap::new()).unwrap(), f);
        let mut b = HashMap::new();
        b.insert("x".to_string(), Poly::zero(&r));
        assert_eq!(f.substitute(&r, &b).unwrap(), v(&r, "z"));
        assert_eq!(f.zero_vars(&["x"]).unwrap(), v(&r, "z"));
    }

    #[test]
    fn substitute_into_smaller_ring() {
        let big = ring(5, &["x", "y"]);
        let small = ring(5, &["y"]);
        let f = v(&big, "x").add(&v(&big, "y"));
        let mut b = HashMap::new();
        b.insert("x".to_string(), v(&small, "y").scale(4));
        // x -> -y gives x + y -> 0.
        assert!(f.substitute(&small, &b).unwrap().is_zero());
    }

    #[test]
    fn derivative_basics() {
        let r = ring(2, &["x"]);
        let x2 = v(&r, "x").mul(&v(&r, "x")).unwrap();
        assert!(x2.partial_derivative("x").unwrap().is_zero());

        let r3 = ring(3, &["x", "y"]);
        let f = v(&r3, "x").mul(&v(&r3, "x")).unwrap().add(&v(&r3, "y"));
        let fx = f.partial_derivative("x").unwrap();
        assert_eq!(fx, v(&r3, "x").scale(2));
        assert!(f.partial_derivative("z").is_err());
    }

    #[test]
    fn exponent_overflow_detected() {
        let r = ring(2, &["x"]);
        let big = Poly::from_terms(&r, vec![(1, vec![u16::MAX])]).unwrap();
        assert_eq!(
            big.mul(&v(&r, "x")).unwrap_err(),
            RingError::ExponentOverflow
        );
        assert_eq!(
            big.frobenius_pow(1).unwrap_err(),
            RingError::ExponentOverflow
        );
    }

    #[test]
    fn grevlex_vs_lex_leading_terms() {
        // f = x*z + y^2: grevlex picks y^2 (rightmost smaller), lex picks x*z.
        let rg = ring(5, &["x", "y", "z"]);
        let f = Poly::from_terms(&rg, vec![(1, vec![1, 0, 1]), (1, vec![0, 2, 0])]).unwrap();
        assert_eq!(f.lead().unwrap().mono.exps(), &[0, 2, 0]);
        let rl = RingCtx::new(5, &["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let f = Poly::from_terms(&rl, vec![(1, vec![1, 0, 1]), (1, vec![0, 2, 0])]).unwrap();
        assert_eq!(f.lead().unwrap().mono.exps(), &[1, 0, 1]);
    }

    #[test]
    fn rendering_is_canonical() {
        let r = ring(7, &["x", "y"]);
        let f =
            Poly::from_terms(&r, vec![(3, vec![2, 1]), (1, vec![1, 0]), (6, vec![0, 0])]).unwrap();
        assert_eq!(f.to_string(), "3*x^2*y + x + 6");
        assert_eq!(Poly::zero(&r).to_string(), "0");
        assert_eq!(Poly::one(&r).to_string(), "1");
    }
}
