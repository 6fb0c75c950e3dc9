//! Skew-symmetric matrix Lie algebras with the trace form `-1/2 tr(AB)`.
//!
//! Elements of `so(N)` carry coordinates in the basis `X_ij = E_ij - E_ji`,
//! `i < j`, ordered lexicographically. Under the trace form this basis is
//! orthonormal and the coordinate of `X_ij` in `A` is simply `A[(i, j)]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{arg, Error, Result};

/// Relative singular-value threshold used for every rank decision.
pub const RANK_TOL: f64 = 1e-8;
/// Tolerance for the skew-symmetry invariant of [`AlgElement`].
pub const SKEW_TOL: f64 = 1e-12;
/// Orthonormality tolerance for [`Subspace`] bases.
pub const ORTHO_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct AlgElement {
    entries: DMatrix<f64>,
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElement(so({}))", self.ambient_dim())?;
        write!(f, "{}", self.entries)
    }
}

impl AlgElement {
    /// Wraps a square matrix, rejecting anything that is not skew to
    /// `1e-12 * max(1, |A|)`.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return arg(format!(
                "algebra element must be a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            ));
        }
        let asym = (&entries + entries.transpose()).norm();
        if asym > SKEW_TOL * entries.norm().max(1.0) {
            return arg(format!("matrix is not skew-symmetric (|A+A^T| = {asym:e})"));
        }
        Ok(Self { entries })
    }

    /// Skips the skew check; callers guarantee skewness by construction.
    pub(crate) fn from_skew_unchecked(entries: DMatrix<f64>) -> Self {
        debug_assert!(entries.is_square());
        Self { entries }
    }

    pub fn zero(n: usize) -> Self {
        Self { entries: DMatrix::zeros(n, n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    /// Builds `sum_k c_k X_{i_k j_k}` from coordinates in the lexicographic basis.
    pub fn from_coords(n: usize, coords: &DVector<f64>) -> Result<Self> {
        if coords.len() != so_dim(n) {
            return arg(format!("so({n}) has dimension {}, got {} coordinates", so_dim(n), coords.len()));
        }
        let mut m = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = coords[k];
                m[(j, i)] = -coords[k];
                k += 1;
            }
        }
        Ok(Self { entries: m })
    }

    pub fn coords(&self) -> DVector<f64> {
        let n = self.ambient_dim();
        let mut v = DVector::zeros(so_dim(n));
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                v[k] = self.entries[(i, j)];
                k += 1;
            }
        }
        v
    }

    /// Commutator without the dimension check of [`bracket`].
    ///
    /// # Panics
    /// If the orders differ.
    pub fn lie(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "bracket of mismatched orders");
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        Self { entries: ab - ba }
    }

    /// Trace form without the dimension check of [`inner`].
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "inner product of mismatched orders");
        // -1/2 tr(AB) = 1/2 sum_ij A_ij B_ij for skew A.
        0.5 * self.entries.dot(&other.entries)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `g A g^{-1}` for orthogonal `g`.
    pub fn conjugate_by(&self, g: &DMatrix<f64>) -> Self {
        Self { entries: g * &self.entries * g.transpose() }
    }

    /// Matrix exponential; orthogonal since the element is skew.
    pub fn exp(&self) -> DMatrix<f64> {
        self.entries.clone().exp()
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        AlgElement { entries: &self.entries + &rhs.entries }
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        AlgElement { entries: &self.entries - &rhs.entries }
    }
}

impl Mul<f64> for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: f64) -> AlgElement {
        AlgElement { entries: &self.entries * rhs }
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        AlgElement { entries: -&self.entries }
    }
}

pub fn so_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `X_ij` (0-based, `i < j`) in the lexicographic basis of `so(n)`.
pub fn so_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// `X_ij = E_ij - E_ji` with **1-based** indices `1 <= i < j <= n`, matching
/// the usual notation `X_12, X_13, ...`.
pub fn basis_element(i: usize, j: usize, n: usize) -> Result<AlgElement> {
    if i == 0 || j > n || i >= j {
        return arg(format!("basis_element needs 1 <= i < j <= n, got ({i}, {j}, {n})"));
    }
    Ok(x(i - 1, j - 1, n))
}

/// 0-based `X_ij`; `i > j` yields `-X_ji`.
pub(crate) fn x(i: usize, j: usize, n: usize) -> AlgElement {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    AlgElement { entries: m }
}

pub fn bracket(a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
    check_same(a, b)?;
    Ok(a.lie(b))
}

pub fn inner(a: &AlgElement, b: &AlgElement) -> Result<f64> {
    check_same(a, b)?;
    Ok(a.dot(b))
}

fn check_same(a: &AlgElement, b: &AlgElement) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return arg(format!("ambient orders differ: {} vs {}", a.ambient_dim(), b.ambient_dim()));
    }
    Ok(())
}

/// An orthonormal list of coordinate vectors in a labelled ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Vec<DVector<f64>>,
    ambient_dim: usize,
    ambient_label: String,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, ambient_label: impl Into<String>) -> Self {
        Self { basis: Vec::new(), ambient_dim, ambient_label: ambient_label.into() }
    }

    /// Accepts an already orthonormal basis (checked to [`ORTHO_TOL`]).
    pub fn from_orthonormal(
        basis: Vec<DVector<f64>>,
        ambient_dim: usize,
        ambient_label: impl Into<String>,
    ) -> Result<Self> {
        for (i, u) in basis.iter().enumerate() {
            if u.len() != ambient_dim {
                return arg(format!("basis vector {i} has length {}, expected {ambient_dim}", u.len()));
            }
            for (j, v) in basis.iter().enumerate().skip(i) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (u.dot(v) - expect).abs() > ORTHO_TOL {
                    return arg(format!("basis is not orthonormal at ({i}, {j})"));
                }
            }
        }
        Ok(Self { basis, ambient_dim, ambient_label: ambient_label.into() })
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(indices: &[usize], ambient_dim: usize, ambient_label: impl Into<String>) -> Self {
        let basis = indices.iter().map(|&i| unit(ambient_dim, i)).collect();
        Self { basis, ambient_dim, ambient_label: ambient_label.into() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ambient_label(&self) -> &str {
        &self.ambient_label
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.ambient_label = label.into();
        self
    }

    /// Columns are the basis vectors.
    pub fn basis_matrix(&self) -> DMatrix<f64> {
        if self.basis.is_empty() {
            return DMatrix::zeros(self.ambient_dim, 0);
        }
        DMatrix::from_columns(&self.basis)
    }

    pub fn projector(&self) -> DMatrix<f64> {
        let b = self.basis_matrix();
        &b * b.transpose()
    }

    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.ambient_dim);
        for u in &self.basis {
            out.axpy(u.dot(v), u, 1.0);
        }
        out
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<f64>) -> DVector<f64> {
        v - self.project(v)
    }

    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        self.residual(v).norm()
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.distance(v) <= tol
    }

    /// Frobenius distance between orthogonal projectors; zero iff equal.
    pub fn gap(&self, other: &Subspace) -> f64 {
        (self.projector() - other.projector()).norm()
    }

    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient_dim == other.ambient_dim && self.dim() == other.dim() && self.gap(other) <= tol
    }

    /// Largest `|<u, v>|` over basis pairs.
    pub fn max_overlap(&self, other: &Subspace) -> f64 {
        let mut worst: f64 = 0.0;
        for u in &self.basis {
            for v in &other.basis {
                worst = worst.max(u.dot(v).abs());
            }
        }
        worst
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let all: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        span_of(self.ambient_dim, &all, RANK_TOL).relabel(self.ambient_label.clone())
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let mut all = self.basis.clone();
        all.extend((0..self.ambient_dim).map(|i| unit(self.ambient_dim, i)));
        let full = span_of(self.ambient_dim, &all, RANK_TOL);
        let rest = full.basis[self.dim()..].to_vec();
        Subspace { basis: rest, ambient_dim: self.ambient_dim, ambient_label: self.ambient_label.clone() }
    }

    /// `self ∩ other`, via the null space of `(I - P_other) B_self`.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 {
            return self.clone();
        }
        let b = self.basis_matrix();
        let q = DMatrix::identity(self.ambient_dim, self.ambient_dim) - other.projector();
        let kernel = null_space_abs(&(q * &b), RANK_TOL);
        let vecs: Vec<_> = kernel.iter().map(|c| &b * c).collect();
        span_of(self.ambient_dim, &vecs, RANK_TOL).relabel(self.ambient_label.clone())
    }

    /// Image under a linear map of the ambient space.
    pub fn map(&self, op: &DMatrix<f64>) -> Subspace {
        let imgs: Vec<_> = self.basis.iter().map(|u| op * u).collect();
        span_of(op.nrows(), &imgs, RANK_TOL).relabel(self.ambient_label.clone())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// Orthonormal basis of the span, by twice-iterated modified Gram–Schmidt in
/// input order. A vector is discarded when its residual norm falls below
/// `tol` times the largest input norm.
pub fn span_of(ambient_dim: usize, vectors: &[DVector<f64>], tol: f64) -> Subspace {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    if scale == 0.0 {
        return Subspace { basis, ambient_dim, ambient_label: String::new() };
    }
    for v in vectors {
        assert_eq!(v.len(), ambient_dim, "span_of: vector length mismatch");
        let mut r = v.clone();
        for _ in 0..2 {
            for u in &basis {
                let c = u.dot(&r);
                r.axpy(-c, u, 1.0);
            }
        }
        let nr = r.norm();
        if nr > tol * scale {
            basis.push(r / nr);
        }
        if basis.len() == ambient_dim {
            break;
        }
    }
    Subspace { basis, ambient_dim, ambient_label: String::new() }
}

/// Singular values, largest first.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol` times the largest.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Rank of a list of vectors stacked as columns.
pub fn rank_of(ambient_dim: usize, vectors: &[DVector<f64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(vectors);
    debug_assert_eq!(m.nrows(), ambient_dim);
    rank(&m, RANK_TOL)
}

/// Orthonormal basis of `ker m`, using the relative rank policy.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    null_space_below(m, |top| if top > 0.0 { tol * top } else { f64::INFINITY })
}

/// Kernel with an absolute singular value cutoff, for maps whose scale is
/// known (e.g. a projector applied to an orthonormal basis).
pub fn null_space_abs(m: &DMatrix<f64>, cutoff: f64) -> Vec<DVector<f64>> {
    null_space_below(m, |_| cutoff)
}

fn null_space_below(m: &DMatrix<f64>, cutoff_for: impl Fn(f64) -> f64) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad to at least square so the SVD returns a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = cutoff_for(top);
    let kernel: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    let out = span_of(cols, &kernel, 1e-6);
    out.basis
}

/// Smallest bracket-closed subspace of `so(N)` containing the generators.
///
/// Every pair of basis elements is bracketed exactly once; a bracket whose
/// residual against the current basis exceeds `RANK_TOL` (relative to unit
/// basis elements) is added. The loop ends when the pair frontier catches up
/// with the basis, which is the "one full pass adds nothing" certificate.
pub fn lie_closure(generators: &[AlgElement], max_dim: usize) -> Result<Subspace> {
    let Some(first) = generators.first() else {
        return Ok(Subspace::zero(0, "so(0)"));
    };
    let n = first.ambient_dim();
    if generators.iter().any(|g| g.ambient_dim() != n) {
        return arg("lie_closure: generators of mixed order");
    }
    let label = format!("so({n})");
    let coords: Vec<_> = generators.iter().map(AlgElement::coords).collect();
    let start = span_of(so_dim(n), &coords, RANK_TOL);
    if start.dim() > max_dim {
        return Err(Error::Divergence { dim: start.dim(), max_dim });
    }
    let mut basis = start.basis;
    let mut elements: Vec<AlgElement> =
        basis.iter().map(|c| AlgElement::from_coords(n, c).expect("coordinate length")).collect();
    let mut done = 0;
    while done < elements.len() {
        let j = done;
        for i in 0..j {
            let c = elements[i].lie(&elements[j]).coords();
            let mut r = c;
            for _ in 0..2 {
                for u in &basis {
                    let k = u.dot(&r);
                    r.axpy(-k, u, 1.0);
                }
            }
            let nr = r.norm();
            if nr > RANK_TOL {
                let u = r / nr;
                elements.push(AlgElement::from_coords(n, &u).expect("coordinate length"));
                basis.push(u);
                if basis.len() > max_dim {
                    return Err(Error::Divergence { dim: basis.len(), max_dim });
                }
            }
        }
        done += 1;
    }
    Ok(Subspace { basis, ambient_dim: so_dim(n), ambient_label: label })
}

/// Converts each basis vector of an `so(N)` coordinate subspace back to a matrix.
pub fn elements_of(space: &Subspace, n: usize) -> Vec<AlgElement> {
    space.basis().iter().map(|c| AlgElement::from_coords(n, c).expect("subspace of so(n) coordinates")).collect()
}
