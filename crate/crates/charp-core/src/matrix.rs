//! Matrices of indeterminates, commutator matrices `C = XY - YX`, the
//! generator families cut out of them, Jacobian matrices, and exact
//! symbolic determinants.

use thiserror::Error;

use crate::ring::{MonomialOrder, Poly, Ring, RingCtx, RingError};

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix shapes are incompatible")]
    Shape,
    #[error("matrix size must be at least 1")]
    EmptySize,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A rows x cols grid of polynomials over one ring.
#[derive(Debug, Clone)]
pub struct SymbolicMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>, // row-major
}

impl SymbolicMatrix {
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<Poly>,
    ) -> Result<SymbolicMatrix, MatrixError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(MatrixError::Shape);
        }
        Ok(SymbolicMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn at(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &SymbolicMatrix) -> Result<SymbolicMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape);
        }
        let ring = self.entries[0].ring().clone();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j))?);
                }
                entries.push(acc);
            }
        }
        SymbolicMatrix::from_entries(self.rows, other.cols, entries)
    }

    pub fn sub(&self, other: &SymbolicMatrix) -> Result<SymbolicMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Shape);
        }
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        SymbolicMatrix::from_entries(self.rows, self.cols, entries)
    }

    pub fn trace(&self) -> Result<Poly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape);
        }
        let ring = self.entries[0].ring().clone();
        let mut acc = Poly::zero(&ring);
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        Ok(acc)
    }

    /// Exact determinant by cofactor expansion, expanding along the row or
    /// column with the most zero entries (ties to fewer total terms, then
    /// to the earlier index). Intended for the small symbolic minors that
    /// arise here (size <= 8).
    pub fn det(&self) -> Result<Poly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape);
        }
        let ring = self.entries[0].ring().clone();
        let n = self.rows;
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..n).collect();
        Ok(self.det_rec(&ring, &rows, &cols)?)
    }

    fn line_cost(&self, idxs: &[(usize, usize)]) -> (usize, usize) {
        let nonzero = idxs
            .iter()
            .filter(|(i, j)| !self.at(*i, *j).is_zero())
            .count();
        let terms: usize = idxs.iter().map(|(i, j)| self.at(*i, *j).term_count()).sum();
        (nonzero, terms)
    }

    fn det_rec(&self, ring: &Ring, rows: &[usize], cols: &[usize]) -> Result<Poly, RingError> {
        let n = rows.len();
        if n == 0 {
            return Ok(Poly::one(ring));
        }
        if n == 1 {
            return Ok(self.at(rows[0], cols[0]).clone());
        }
        // Pick the sparsest row or column of the submatrix.
        let mut best: Option<(bool, usize, (usize, usize))> = None;
        for (ri, &r) in rows.iter().enumerate() {
            let cost = self.line_cost(&cols.iter().map(|&c| (r, c)).collect::<Vec<_>>());
            if best.as_ref().is_none_or(|b| cost < b.2) {
                best = Some((true, ri, cost));
            }
        }
        for (ci, &c) in cols.iter().enumerate() {
            let cost = self.line_cost(&rows.iter().map(|&r| (r, c)).collect::<Vec<_>>());
            if best.as_ref().is_none_or(|b| cost < b.2) {
                best = Some((false, ci, cost));
            }
        }
        let (along_row, pos, _) = best.unwrap();
        let mut acc = Poly::zero(ring);
        if along_row {
            let r = rows[pos];
            let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            for (ci, &c) in cols.iter().enumerate() {
                let e = self.at(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = self.det_rec(ring, &sub_rows, &sub_cols)?;
                let signed = if (pos + ci) % 2 == 0 {
                    minor
                } else {
                    minor.neg()
                };
                acc = acc.add(&signed.mul(e)?);
            }
        } else {
            let c = cols[pos];
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            for (ri, &r) in rows.iter().enumerate() {
                let e = self.at(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
                let minor = self.det_rec(ring, &sub_rows, &sub_cols)?;
                let signed = if (pos + ri) % 2 == 0 {
                    minor
                } else {
                    minor.neg()
                };
                acc = acc.add(&signed.mul(e)?);
            }
        }
        Ok(acc)
    }

    /// Determinant by direct permutation expansion; exponential, only for
    /// cross-checking small matrices.
    pub fn det_permutation_expansion(&self) -> Result<Poly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape);
        }
        let ring = self.entries[0].ring().clone();
        let n = self.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = Poly::zero(&ring);
        permute(&mut perm, 0, &mut |perm, sign| {
            let mut prod = Poly::one(&ring);
            for (i, &j) in perm.iter().enumerate() {
                prod = prod.mul(self.at(i, j))?;
            }
            if sign < 0 {
                prod = prod.neg();
            }
            acc = acc.add(&prod);
            Ok(())
        })?;
        Ok(acc)
    }
}

/// Heap's-style recursive permutation walk carrying the permutation sign.
fn permute<F>(perm: &mut Vec<usize>, k: usize, f: &mut F) -> Result<(), RingError>
where
    F: FnMut(&[usize], i32) -> Result<(), RingError>,
{
    let n = perm.len();
    if k == n {
        let sign = permutation_sign(perm);
        return f(perm, sign);
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, f)?;
        perm.swap(k, i);
    }
    Ok(())
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Variable name for entry (i, j) of matrix `prefix`, 1-based. Sizes above
/// 9 get an underscore separator to stay unambiguous.
pub fn entry_name(prefix: &str, i: usize, j: usize) -> String {
    if i <= 9 && j <= 9 {
        format!("{}{}{}", prefix, i, j)
    } else {
        format!("{}_{}_{}", prefix, i, j)
    }
}

/// Builds `F_p[x_11..x_nn, y_11..y_nn]` (row-major, x block first) together
/// with the two generic matrices X and Y.
pub fn indeterminate_matrices(
    n: usize,
    p: u32,
    order: MonomialOrder,
) -> Result<(Ring, SymbolicMatrix, SymbolicMatrix), MatrixError> {
    indeterminate_matrices_named(n, p, order, "x", "y")
}

/// Same as [`indeterminate_matrices`], with caller-chosen variable prefixes.
pub fn indeterminate_matrices_named(
    n: usize,
    p: u32,
    order: MonomialOrder,
    first: &str,
    second: &str,
) -> Result<(Ring, SymbolicMatrix, SymbolicMatrix), MatrixError> {
    if n == 0 {
        return Err(MatrixError::EmptySize);
    }
    let mut vars = Vec::with_capacity(2 * n * n);
    for prefix in [first, second] {
        for i in 1..=n {
            for j in 1..=n {
                vars.push(entry_name(prefix, i, j));
            }
        }
    }
    let ring = RingCtx::new(p, &vars, order)?;
    let build = |prefix: &str| -> Result<SymbolicMatrix, MatrixError> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(Poly::var(&ring, &entry_name(prefix, i, j))?);
            }
        }
        SymbolicMatrix::from_entries(n, n, entries)
    };
    let a = build(first)?;
    let b = build(second)?;
    Ok((ring, a, b))
}

/// The commutator `XY - YX`.
pub fn commutator(x: &SymbolicMatrix, y: &SymbolicMatrix) -> Result<SymbolicMatrix, MatrixError> {
    if !x.is_square() || x.rows != y.rows || x.cols != y.cols {
        return Err(MatrixError::Shape);
    }
    x.mul(y)?.sub(&y.mul(x)?)
}

/// The generator families cut out of a commutator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealFamily {
    /// All diagonal entries c_ii (their sum is zero, so this list is
    /// never minimal).
    Diagonal,
    /// The anti-diagonal entries c_{i,n+1-i}.
    AntiDiagonal,
    /// Diagonal plus anti-diagonal entries verbatim (odd sizes list the
    /// center entry once).
    CrossDiagonal,
    /// The first n-1 diagonal entries plus the anti-diagonal — the minimal
    /// generator choice for the cross-diagonal ideal that drops the
    /// trace-redundant corner. 2n-2 generators for odd n (center entry
    /// deduplicated), 2n-1 for even n.
    TraceAdjustedCross,
    /// All off-diagonal entries c_ij, i != j.
    OffDiagonal,
}

impl IdealFamily {
    pub fn name(self) -> &'static str {
        match self {
            IdealFamily::Diagonal => "diagonal",
            IdealFamily::AntiDiagonal => "anti-diagonal",
            IdealFamily::CrossDiagonal => "cross-diagonal",
            IdealFamily::TraceAdjustedCross => "trace-adjusted-cross",
            IdealFamily::OffDiagonal => "off-diagonal",
        }
    }
}

/// Selects the family's generators from a square commutator matrix.
/// Order is deterministic: diagonal entries by increasing row first, then
/// anti-diagonal entries by increasing row; off-diagonal row-major.
pub fn ideal_from_family(
    c: &SymbolicMatrix,
    family: IdealFamily,
) -> Result<Vec<Poly>, MatrixError> {
    if !c.is_square() {
        return Err(MatrixError::Shape);
    }
    let n = c.rows;
    let mut out = Vec::new();
    let push_diag = |out: &mut Vec<Poly>, upto: usize| {
        for i in 0..upto {
            out.push(c.at(i, i).clone());
        }
    };
    let push_anti = |out: &mut Vec<Poly>, skip_center: bool| {
        for i in 0..n {
            let j = n - 1 - i;
            if skip_center && i == j {
                continue;
            }
            out.push(c.at(i, j).clone());
        }
    };
    match family {
        IdealFamily::Diagonal => push_diag(&mut out, n),
        IdealFamily::AntiDiagonal => push_anti(&mut out, false),
        IdealFamily::CrossDiagonal => {
            push_diag(&mut out, n);
            // For odd n the center entry is on both diagonals; list it once.
            push_anti(&mut out, n % 2 == 1);
        }
        IdealFamily::TraceAdjustedCross => {
            push_diag(&mut out, n - 1);
            // The center entry of odd sizes already appears among the first
            // n-1 diagonal entries.
            push_anti(&mut out, n % 2 == 1);
        }
        IdealFamily::OffDiagonal => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(c.at(i, j).clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of partial derivatives: rows follow `polys`, columns follow
/// `vars`.
pub fn jacobian(polys: &[Poly], vars: &[&str]) -> Result<SymbolicMatrix, MatrixError> {
    assert!(!polys.is_empty() && !vars.is_empty());
    let mut entries = Vec::with_capacity(polys.len() * vars.len());
    for f in polys {
        for v in vars {
            entries.push(f.partial_derivative(v)?);
        }
    }
    SymbolicMatrix::from_entries(polys.len(), vars.len(), entries)
}
