//! Deterministic randomized self-checks of the kernel's algebraic
//! invariants. Every suite draws its cases from a seeded ChaCha stream, so
//! a report is reproducible from the seed alone; failures carry enough
//! detail to replay the offending case by hand.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fsing::QExpr;
use crate::groebner::{normal_form_ext, Ideal};
use crate::matrix::{commutator, indeterminate_matrices, jacobian, SymbolicMatrix};
use crate::ring::{MonomialOrder, Poly, Ring, RingCtx};
use crate::script::{
    parse_poly, parse_script, render_script, Check, Expr, IdealRef, IdealSource, Script, Stmt,
};

/// Outcome of one suite: how many cases ran and what failed.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

/// Outcome of every suite.
#[derive(Debug, Clone)]
pub struct PropReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl PropReport {
    /// Total failures across suites.
    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failures.len()).sum()
    }

    /// One line per suite plus any failure details.
    pub fn render(&self) -> String {
        let mut out = format!("property suites (seed {}):\n", self.seed);
        for s in &self.suites {
            out.push_str(&format!(
                "  {}: {} cases, {} failures\n",
                s.name,
                s.cases,
                s.failures.len()
            ));
            for f in s.failures.iter().take(3) {
                out.push_str(&format!("    {f}\n"));
            }
        }
        out
    }
}

/// Cases per suite.
pub const CASES: usize = 200;

/// Runs every suite with sub-seeds derived from `seed`.
pub fn run_all(seed: u64) -> PropReport {
    let suites = vec![
        truncation_suite(seed.wrapping_add(1), CASES),
        powering_suite(seed.wrapping_add(2), CASES),
        spoly_suite(seed.wrapping_add(3), CASES),
        membership_suite(seed.wrapping_add(4), CASES),
        commutator_suite(seed.wrapping_add(5), CASES),
        determinant_suite(seed.wrapping_add(6), CASES),
        roundtrip_suite(seed.wrapping_add(7), CASES),
    ];
    PropReport { seed, suites }
}

const PRIMES: &[u32] = &[2, 3, 5, 7];
const VAR_POOL: &[&str] = &["t", "u", "v"];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_ring(r: &mut ChaCha8Rng) -> Ring {
    let p = PRIMES[r.gen_range(0..PRIMES.len())];
    let nv = r.gen_range(1..=VAR_POOL.len());
    RingCtx::new(p, &VAR_POOL[..nv], MonomialOrder::GrevLex).unwrap()
}

fn random_poly(r: &mut ChaCha8Rng, ring: &Ring, max_terms: usize, max_exp: u16) -> Poly {
    let nt = r.gen_range(0..=max_terms);
    let items = (0..nt)
        .map(|_| {
            let c = r.gen_range(0..ring.p());
            let exps = (0..ring.nvars())
                .map(|_| r.gen_range(0..=max_exp))
                .collect();
            (c, exps)
        })
        .collect::<Vec<_>>();
    Poly::from_terms(ring, items).unwrap()
}

fn record(failures: &mut Vec<String>, case: usize, detail: String) {
    failures.push(format!("case {case}: {detail}"));
}

// ---------------------------------------------------------------------------
// Suite 1: truncated multiplication
// ---------------------------------------------------------------------------

// trunc_mul must agree with multiplying in full and then dropping every
// term with some exponent >= q, and truncation must be idempotent.
fn truncation_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let ring = random_ring(&mut r);
        let p = ring.p() as u64;
        let q = p.pow(r.gen_range(1..=2));
        let f = random_poly(&mut r, &ring, 6, 4);
        let g = random_poly(&mut r, &ring, 6, 4);
        let fast = f.trunc_mul(&g, q).unwrap();
        let slow = f.mul(&g).unwrap().trunc(q);
        if fast != slow {
            record(
                &mut failures,
                case,
                format!("trunc_mul({f}, {g}, {q}) = {fast}, expected {slow}"),
            );
        }
        if fast.trunc(q) != fast {
            record(
                &mut failures,
                case,
                format!("truncation not idempotent on {fast}"),
            );
        }
        // Truncating the inputs first must not change the result.
        let pre = f.trunc(q).trunc_mul(&g.trunc(q), q).unwrap();
        if pre != fast {
            record(
                &mut failures,
                case,
                format!("input truncation changed the product: {pre} vs {fast}"),
            );
        }
    }
    SuiteReport {
        name: "truncated multiplication agrees with multiply-then-truncate",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 2: powering
// ---------------------------------------------------------------------------

// The base-p factored truncated power must agree with naive repeated
// truncated multiplication, the plain power with naive multiplication, and
// p-th powers with the Frobenius exponent scaling.
fn powering_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let ring = random_ring(&mut r);
        let p = ring.p() as u64;
        let f = random_poly(&mut r, &ring, 4, 3);

        let n = r.gen_range(0..=5u64);
        let plain = f.pow_trunc(n, None).unwrap();
        let mut naive = Poly::one(&ring);
        for _ in 0..n {
            naive = naive.mul(&f).unwrap();
        }
        if plain != naive {
            record(
                &mut failures,
                case,
                format!("({f})^{n} = {plain}, naive product {naive}"),
            );
        }

        let q = p.pow(2);
        let n = r.gen_range(0..=(2 * p + 3));
        let fast = f.pow_trunc(n, Some(q)).unwrap();
        let mut naive = Poly::one(&ring);
        for _ in 0..n {
            naive = naive.trunc_mul(&f, q).unwrap();
        }
        if fast != naive {
            record(
                &mut failures,
                case,
                format!("({f})^{n} mod m^[{q}] = {fast}, naive {naive}"),
            );
        }

        let frob = f.frobenius_pow(1).unwrap();
        let bymul = f.pow_trunc(p, None).unwrap();
        if frob != bymul {
            record(
                &mut failures,
                case,
                format!("({f})^{p} = {bymul}, Frobenius scaling {frob}"),
            );
        }
    }
    SuiteReport {
        name: "factored truncated powers agree with naive multiplication",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 3: S-polynomials of a computed basis reduce to zero
// ---------------------------------------------------------------------------

fn spoly(f: &Poly, g: &Poly) -> Poly {
    let ring = f.ring().clone();
    let lf = f.lead().unwrap();
    let lg = g.lead().unwrap();
    let lcm = lf.mono.lcm(&lg.mono);
    let uf = lf.mono.quotient(&lcm);
    let ug = lg.mono.quotient(&lcm);
    let a = f.mul_term(ring.cinv(lf.coeff), &uf).unwrap();
    let b = g.mul_term(ring.cinv(lg.coeff), &ug).unwrap();
    a.sub(&b)
}

fn spoly_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let ring = random_ring(&mut r);
        let gens: Vec<Poly> = (0..r.gen_range(1..=3))
            .map(|_| random_poly(&mut r, &ring, 3, 2))
            .filter(|f| !f.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let gb = match Ideal::new(&ring, gens.clone()).groebner(2_000_000) {
            Ok(gb) => gb,
            Err(e) => {
                record(
                    &mut failures,
                    case,
                    format!("basis computation failed: {e}"),
                );
                continue;
            }
        };
        for g in &gens {
            let nf = gb.normal_form(g);
            if !nf.is_zero() {
                record(
                    &mut failures,
                    case,
                    format!("generator {g} has nonzero normal form {nf}"),
                );
            }
        }
        let basis = gb.polys();
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let s = spoly(&basis[i], &basis[j]);
                let nf = gb.normal_form(&s);
                if !nf.is_zero() {
                    record(
                        &mut failures,
                        case,
                        format!("S({}, {}) reduces to {nf}, not zero", basis[i], basis[j]),
                    );
                }
            }
        }
    }
    SuiteReport {
        name: "every S-polynomial of a computed basis reduces to zero",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 4: membership against an independent linear-algebra oracle
// ---------------------------------------------------------------------------

// All monomial exponent vectors of total degree <= d in nv variables.
fn monomials_up_to(nv: usize, d: u16) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nv];
    fn go(i: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    go(0, d, &mut cur, &mut out);
    out
}

// Decides solvability of a dense F_p linear system by Gaussian elimination.
fn fp_system_solvable(p: u64, mut rows: Vec<Vec<u64>>, ncols: usize) -> bool {
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(found) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = mod_inverse(rows[pivot_row][col] % p, p);
        for x in rows[pivot_row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_multiple_of(p) {
                let factor = rows[i][col] % p;
                let (head, tail) = if i < pivot_row {
                    let (a, b) = rows.split_at_mut(pivot_row);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[pivot_row])
                };
                for (x, &pv) in head.iter_mut().zip(tail.iter()) {
                    *x = (*x + (p - factor) * pv) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    // Inconsistent iff some row is zero on the unknowns with nonzero rhs.
    !rows
        .iter()
        .any(|row| row[..ncols].iter().all(|&x| x % p == 0) && row[ncols] % p != 0)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn coeff_of(f: &Poly, exps: &[u16]) -> u64 {
    f.terms()
        .iter()
        .find(|t| t.mono.exps() == exps)
        .map(|t| u64::from(t.coeff))
        .unwrap_or(0)
}

// Membership of f in the principal ideal (g): in a domain, f = q*g forces
// deg q = deg f - deg g, so searching coefficients of q over all monomials
// of that degree bound is a complete decision procedure.
fn principal_membership_by_linear_algebra(f: &Poly, g: &Poly) -> bool {
    if f.is_zero() {
        return true;
    }
    if g.is_zero() {
        return false;
    }
    let ring = f.ring();
    let p = u64::from(ring.p());
    let df = f.total_degree().unwrap();
    let dg = g.total_degree().unwrap();
    if df < dg {
        return false;
    }
    let unknowns = monomials_up_to(ring.nvars(), (df - dg) as u16);
    let targets = monomials_up_to(ring.nvars(), df as u16);
    // One equation per target monomial m: sum over unknown monomials u of
    // q_u * coeff(g, m - u) = coeff(f, m).
    let rows = targets
        .iter()
        .map(|m| {
            let mut row = Vec::with_capacity(unknowns.len() + 1);
            for u in &unknowns {
                if m.iter().zip(u.iter()).all(|(a, b)| a >= b) {
                    let diff: Vec<u16> = m.iter().zip(u.iter()).map(|(a, b)| a - b).collect();
                    row.push(coeff_of(g, &diff));
                } else {
                    row.push(0);
                }
            }
            row.push(coeff_of(f, m));
            row
        })
        .collect();
    fp_system_solvable(p, rows, unknowns.len())
}

fn membership_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let ring = random_ring(&mut r);

        // Principal ideals: division-by-basis membership must coincide with
        // the complete bounded linear-algebra search.
        let g = random_poly(&mut r, &ring, 3, 2);
        if !g.is_zero() {
            let f = if r.gen_bool(0.5) {
                random_poly(&mut r, &ring, 3, 2).mul(&g).unwrap()
            } else {
                random_poly(&mut r, &ring, 4, 3)
            };
            let gb = Ideal::new(&ring, vec![g.clone()])
                .groebner(2_000_000)
                .unwrap();
            let by_division = gb.normal_form(&f).is_zero();
            let by_linear_algebra = principal_membership_by_linear_algebra(&f, &g);
            if by_division != by_linear_algebra {
                record(
                    &mut failures,
                    case,
                    format!("membership of {f} in ({g}): division {by_division}, linear algebra {by_linear_algebra}"),
                );
            }
        }

        // General ideals: the division identity f = sum(q_i d_i) + r must
        // hold exactly, the remainder must be fully reduced, and explicit
        // combinations of the generators must reduce to zero.
        let gens: Vec<Poly> = (0..r.gen_range(1..=3))
            .map(|_| random_poly(&mut r, &ring, 3, 2))
            .filter(|f| !f.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let gb = match Ideal::new(&ring, gens.clone()).groebner(2_000_000) {
            Ok(gb) => gb,
            Err(e) => {
                record(
                    &mut failures,
                    case,
                    format!("basis computation failed: {e}"),
                );
                continue;
            }
        };
        let f = random_poly(&mut r, &ring, 5, 3);
        let (rem, quots) = normal_form_ext(&f, gb.polys());
        let mut rebuilt = rem.clone();
        for (q, d) in quots.iter().zip(gb.polys()) {
            rebuilt = rebuilt.add(&q.mul(d).unwrap());
        }
        if rebuilt != f {
            record(
                &mut failures,
                case,
                format!("division identity broken for {f}: rebuilt {rebuilt}"),
            );
        }
        let reduced = rem.terms().iter().all(|t| {
            gb.polys()
                .iter()
                .all(|d| !d.lead().unwrap().mono.divides(&t.mono))
        });
        if !reduced {
            record(
                &mut failures,
                case,
                format!("remainder {rem} is not fully reduced"),
            );
        }
        if gb.normal_form(&rem) != rem {
            record(
                &mut failures,
                case,
                format!("normal form is not idempotent on {rem}"),
            );
        }
        let mut member = Poly::zero(&ring);
        for gen in &gens {
            member = member.add(&random_poly(&mut r, &ring, 2, 2).mul(gen).unwrap());
        }
        if !gb.normal_form(&member).is_zero() {
            record(
                &mut failures,
                case,
                format!("explicit combination {member} does not reduce to zero"),
            );
        }
    }
    SuiteReport {
        name: "ideal membership matches an independent linear-algebra oracle",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 5: commutator identities
// ---------------------------------------------------------------------------

fn commutator_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let p = PRIMES[r.gen_range(0..PRIMES.len())];
        let n = r.gen_range(2..=5usize);
        let (_ring, x, y) = indeterminate_matrices(n, p, MonomialOrder::GrevLex).unwrap();
        let c = commutator(&x, &y).unwrap();

        let tr = c.trace().unwrap();
        if !tr.is_zero() {
            record(
                &mut failures,
                case,
                format!("trace of the {n}x{n} commutator is {tr}"),
            );
        }

        let swapped = commutator(&y, &x).unwrap();
        for i in 0..n {
            for j in 0..n {
                if *swapped.at(i, j) != c.at(i, j).neg() {
                    record(
                        &mut failures,
                        case,
                        format!("[Y,X] entry ({i},{j}) is not -[X,Y]"),
                    );
                }
            }
        }

        // Scalar specialization: substituting random matrices A, B must give
        // the numeric commutator AB - BA over F_p.
        if n <= 3 {
            let scalar_ring = RingCtx::new(p, &["s"], MonomialOrder::GrevLex).unwrap();
            let a: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| u64::from(r.gen_range(0..p))).collect())
                .collect();
            let b: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| u64::from(r.gen_range(0..p))).collect())
                .collect();
            let mut bindings = HashMap::new();
            for i in 0..n {
                for j in 0..n {
                    bindings.insert(
                        format!("x{}{}", i + 1, j + 1),
                        Poly::constant(&scalar_ring, a[i][j] as u32),
                    );
                    bindings.insert(
                        format!("y{}{}", i + 1, j + 1),
                        Poly::constant(&scalar_ring, b[i][j] as u32),
                    );
                }
            }
            let pp = u64::from(p);
            for i in 0..n {
                for j in 0..n {
                    let mut ab = 0u64;
                    let mut ba = 0u64;
                    for k in 0..n {
                        ab += a[i][k] * b[k][j] % pp;
                        ba += b[i][k] * a[k][j] % pp;
                    }
                    let numeric = ((ab % pp) + pp - (ba % pp)) % pp;
                    let evaluated = c.at(i, j).substitute(&scalar_ring, &bindings).unwrap();
                    let expected = Poly::constant(&scalar_ring, numeric as u32);
                    if evaluated != expected {
                        record(
                            &mut failures,
                            case,
                            format!("entry ({i},{j}) evaluates to {evaluated}, numeric commutator {expected}"),
                        );
                    }
                }
            }
        }
    }
    SuiteReport {
        name: "commutator entries: zero trace, antisymmetry, scalar specialization",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 6: determinants and jacobians
// ---------------------------------------------------------------------------

fn naive_derivative(f: &Poly, var: usize) -> Poly {
    let ring = f.ring();
    let items = f
        .terms()
        .iter()
        .filter(|t| t.mono.exps()[var] > 0)
        .map(|t| {
            let e = t.mono.exps()[var];
            let c = ring.cmul(t.coeff, u32::from(e) % ring.p());
            let mut exps = t.mono.exps().to_vec();
            exps[var] -= 1;
            (c, exps)
        })
        .collect::<Vec<_>>();
    Poly::from_terms(ring, items).unwrap()
}

fn determinant_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let ring = random_ring(&mut r);

        let n = r.gen_range(2..=3usize);
        let entries: Vec<Poly> = (0..n * n)
            .map(|_| random_poly(&mut r, &ring, 2, 2))
            .collect();
        let m = SymbolicMatrix::from_entries(n, n, entries.clone()).unwrap();
        let cofactor = m.det().unwrap();
        let permutation = m.det_permutation_expansion().unwrap();
        if cofactor != permutation {
            record(
                &mut failures,
                case,
                format!(
                    "{n}x{n} determinant: cofactor {cofactor}, permutation expansion {permutation}"
                ),
            );
        }
        if n == 2 {
            let manual = entries[0]
                .mul(&entries[3])
                .unwrap()
                .sub(&entries[1].mul(&entries[2]).unwrap());
            if cofactor != manual {
                record(
                    &mut failures,
                    case,
                    format!("2x2 determinant {cofactor} != ad - bc = {manual}"),
                );
            }
        }

        // A repeated row forces determinant zero.
        let row: Vec<Poly> = (0..n).map(|_| random_poly(&mut r, &ring, 2, 2)).collect();
        let mut degenerate = Vec::new();
        degenerate.extend(row.iter().cloned());
        degenerate.extend(row.iter().cloned());
        for _ in 2..n {
            degenerate.extend((0..n).map(|_| random_poly(&mut r, &ring, 2, 2)));
        }
        let dm = SymbolicMatrix::from_entries(n, n, degenerate).unwrap();
        let dd = dm.det().unwrap();
        if !dd.is_zero() {
            record(
                &mut failures,
                case,
                format!("determinant with a repeated row is {dd}"),
            );
        }

        // Jacobian entries are partial derivatives.
        let f = random_poly(&mut r, &ring, 4, 3);
        let vars: Vec<&str> = (0..ring.nvars()).map(|i| ring.var_name(i)).collect();
        let jac = jacobian(std::slice::from_ref(&f), &vars).unwrap();
        for (v, _) in vars.iter().enumerate() {
            let expected = naive_derivative(&f, v);
            if *jac.at(0, v) != expected {
                record(
                    &mut failures,
                    case,
                    format!(
                        "d({f})/d{} = {}, expected {expected}",
                        vars[v],
                        jac.at(0, v)
                    ),
                );
            }
        }
    }
    SuiteReport {
        name: "determinants match the permutation expansion; jacobians differentiate",
        cases,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Suite 7: script round trip
// ---------------------------------------------------------------------------

fn random_expr(r: &mut ChaCha8Rng, names: &[String], depth: usize) -> Expr {
    if depth == 0 || r.gen_bool(0.3) {
        return if r.gen_bool(0.4) || names.is_empty() {
            Expr::Int(r.gen_range(0..=9))
        } else {
            Expr::Name(names[r.gen_range(0..names.len())].clone())
        };
    }
    match r.gen_range(0..5) {
        0 => Expr::Add(
            Box::new(random_expr(r, names, depth - 1)),
            Box::new(random_expr(r, names, depth - 1)),
        ),
        1 => Expr::Sub(
            Box::new(random_expr(r, names, depth - 1)),
            Box::new(random_expr(r, names, depth - 1)),
        ),
        2 => Expr::Mul(
            Box::new(random_expr(r, names, depth - 1)),
            Box::new(random_expr(r, names, depth - 1)),
        ),
        3 => Expr::Neg(Box::new(random_expr(r, names, depth - 1))),
        _ => Expr::Pow(
            Box::new(random_expr(r, names, depth - 1)),
            r.gen_range(0..=4),
        ),
    }
}

fn random_qexpr(r: &mut ChaCha8Rng) -> QExpr {
    match r.gen_range(0..5) {
        0 => QExpr::P,
        1 => QExpr::PMinus(r.gen_range(1..=2)),
        2 => QExpr::PSquared,
        3 => QExpr::PSquaredMinus(r.gen_range(1..=3)),
        _ => QExpr::Int(r.gen_range(1..=9)),
    }
}

fn random_ideal_ref(r: &mut ChaCha8Rng, names: &[String], ideals: &[String]) -> IdealRef {
    if !ideals.is_empty() && r.gen_bool(0.5) {
        IdealRef::Named(ideals[r.gen_range(0..ideals.len())].clone())
    } else {
        let k = r.gen_range(1..=2);
        IdealRef::Inline((0..k).map(|_| random_expr(r, names, 2)).collect())
    }
}

fn random_script(r: &mut ChaCha8Rng) -> Script {
    let p = PRIMES[r.gen_range(0..PRIMES.len())];
    let nv = r.gen_range(1..=3usize);
    let vars: Vec<String> = (0..nv).map(|i| VAR_POOL[i].to_string()).collect();
    let mut statements = vec![Stmt::Ring {
        p,
        vars: vars.clone(),
    }];
    let mut names = vars;
    let mut ideals: Vec<String> = Vec::new();
    for i in 0..r.gen_range(0..=3usize) {
        let name = format!("f{i}");
        statements.push(Stmt::PolyBind {
            name: name.clone(),
            expr: random_expr(r, &names, 3),
        });
        names.push(name);
    }
    for i in 0..r.gen_range(0..=2usize) {
        let name = format!("I{i}");
        let k = r.gen_range(1..=3);
        statements.push(Stmt::IdealBind {
            name: name.clone(),
            source: IdealSource::List((0..k).map(|_| random_expr(r, &names, 2)).collect()),
        });
        ideals.push(name);
    }
    for _ in 0..r.gen_range(1..=3usize) {
        let check = match r.gen_range(0..4) {
            0 => Check::Fpure {
                ideal: random_ideal_ref(r, &names, &ideals),
                zero: (0..r.gen_range(0..=2))
                    .map(|_| names[r.gen_range(0..names.len())].clone())
                    .collect(),
            },
            1 => Check::Freg {
                ideal: random_ideal_ref(r, &names, &ideals),
                witness: random_expr(r, &names, 2),
                prefactors: (0..r.gen_range(0..=2))
                    .map(|_| (random_expr(r, &names, 2), random_qexpr(r)))
                    .collect(),
                q_list: (0..r.gen_range(1..=3)).map(|_| random_qexpr(r)).collect(),
                zero: (0..r.gen_range(0..=2))
                    .map(|_| names[r.gen_range(0..names.len())].clone())
                    .collect(),
            },
            2 => Check::Dim0 {
                ideal: random_ideal_ref(r, &names, &ideals),
            },
            _ => Check::Member {
                element: random_expr(r, &names, 2),
                ideal: random_ideal_ref(r, &names, &ideals),
            },
        };
        statements.push(Stmt::Check(check));
    }
    Script { statements }
}

fn roundtrip_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        // Scripts: parse inverts canonical rendering, and rendering the
        // reparse reproduces the text byte for byte.
        let script = random_script(&mut r);
        let text = render_script(&script);
        match parse_script(&text) {
            Ok(reparsed) => {
                if reparsed != script {
                    record(
                        &mut failures,
                        case,
                        format!("reparse changed the script:\n{text}"),
                    );
                } else if render_script(&reparsed) != text {
                    record(
                        &mut failures,
                        case,
                        format!("second render differs:\n{text}"),
                    );
                }
            }
            Err(e) => record(
                &mut failures,
                case,
                format!("canonical text failed to parse ({e}):\n{text}"),
            ),
        }

        // Polynomials: the canonical display of a polynomial evaluates back
        // to the same polynomial.
        let ring = random_ring(&mut r);
        let f = random_poly(&mut r, &ring, 5, 4);
        match parse_poly(&ring, &f.to_string()) {
            Ok(back) => {
                if back != f {
                    record(
                        &mut failures,
                        case,
                        format!("display {f} parsed back as {back}"),
                    );
                }
            }
            Err(e) => record(
                &mut failures,
                case,
                format!("display {f} failed to parse: {e}"),
            ),
        }
    }
    SuiteReport {
        name: "script and polynomial text round-trips through the parser",
        cases,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_under_the_default_seed() {
        let report = run_all(42);
        assert_eq!(report.suites.len(), 7);
        for s in &report.suites {
            assert_eq!(s.cases, CASES);
        }
        assert_eq!(report.failures(), 0, "\n{}", report.render());
    }

    #[test]
    fn report_is_deterministic_per_seed() {
        let a = run_all(7);
        let b = run_all(7);
        assert_eq!(a.render(), b.render());
        assert_eq!(a.failures(), b.failures());
    }

    #[test]
    fn linear_algebra_oracle_agrees_on_known_cases() {
        let ring = RingCtx::new(5, &["t", "u"], MonomialOrder::GrevLex).unwrap();
        let t = Poly::var(&ring, "t").unwrap();
        let u = Poly::var(&ring, "u").unwrap();
        let g = t.add(&u);
        let f = g.mul(&g).unwrap();
        assert!(principal_membership_by_linear_algebra(&f, &g));
        assert!(!principal_membership_by_linear_algebra(&t, &g));
        assert!(principal_membership_by_linear_algebra(
            &Poly::zero(&ring),
            &g
        ));
        assert!(!principal_membership_by_linear_algebra(
            &f,
            &Poly::zero(&ring)
        ));
    }

    #[test]
    fn solver_detects_inconsistency() {
        // x + y = 1, x + y = 2 over F_3.
        assert!(!fp_system_solvable(
            3,
            vec![vec![1, 1, 1], vec![1, 1, 2]],
            2
        ));
        assert!(fp_system_solvable(3, vec![vec![1, 1, 1], vec![1, 2, 2]], 2));
        // Underdetermined but consistent.
        assert!(fp_system_solvable(5, vec![vec![2, 4, 3]], 2));
    }
}
