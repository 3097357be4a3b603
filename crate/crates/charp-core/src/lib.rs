//! A small exact computer-algebra kernel for characteristic-p commutative
//! algebra, specialized to the questions that arise around commutator
//! matrices of generic matrices:
//!
//! * sparse multivariate polynomial arithmetic over a prime field `F_p`,
//!   including multiplication truncated modulo bracket powers `m^[q]` of the
//!   maximal ideal and Frobenius-factored powering ([`ring`]);
//! * a Buchberger Gröbner engine with normal forms, bracket powers, and
//!   zero-dimensionality tests ([`groebner`]);
//! * constructors for matrices of indeterminates, commutator matrices
//!   `C = XY - YX`, their ideal families, Jacobians, and symbolic
//!   determinants ([`matrix`]);
//! * Fedder-style F-purity and Glassbrenner-style F-regularity checks for
//!   complete intersections, with h.s.o.p. verification by linear
//!   elimination ([`fsing`]);
//! * certificate-producing reproduction runs for the specific commutator
//!   rings `T`, `A_3`, `A_4`, the structural splitting checks at `n = 5, 6`,
//!   and the known F-purity table ([`repro`], [`cert`]);
//! * a small script language and JSON writer for driving the kernel from
//!   the command line ([`script`]).

pub mod cert;
pub mod fsing;
pub mod groebner;
pub mod matrix;
pub mod props;
pub mod repro;
pub mod ring;
pub mod script;

pub use cert::{
    canonical_json, write_certificate, Certificate, CertificateDocument, ClaimPerf, Overall, Perf,
    Step, StepStatus,
};
pub use fsing::{
    eval_product_expr, fedder_ci_check, glassbrenner_ci_check, hsop_check, linear_eliminate,
    CriterionResult, CriterionStatus, EliminationResult, FsingError, HsopReport, ProductExpr,
    ProductFactor, QExpr, WitnessSpec,
};
pub use groebner::{
    bracket_power, ci_colon, normal_form, power_membership, GbError, GroebnerBasis, Ideal,
    DEFAULT_BUDGET,
};
pub use matrix::{
    commutator, ideal_from_family, indeterminate_matrices, indeterminate_matrices_named, jacobian,
    IdealFamily, MatrixError, SymbolicMatrix,
};
pub use props::{run_all as run_property_suites, PropReport, SuiteReport};
pub use repro::{
    check_known_fpurity, known_fpurity_suite, repro_a3, repro_a3_tampered, repro_a4,
    repro_a4_tampered, repro_bn_bookkeeping, repro_t, repro_t_tampered, repro_theorem_splits,
    run_claim, ReproError, CLAIMS,
};
pub use ring::{MonomialOrder, Poly, Ring, RingCtx, RingError};
pub use script::{
    evaluate, parse_poly, parse_script, render_expr, render_script, run_script, Check, Evaluated,
    Expr, IdealRef, IdealSource, Script, ScriptError, Stmt,
};
