//! Riemann tensor of `M` at the base point, Jacobi spectra, sectional
//! curvature and the curvature (holonomy) algebra.
//!
//! Sign convention: `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`, so the
//! sectional curvature is `<R(X,Y)Y, X>`. For a normal homogeneous space the
//! Levi-Civita connection at `o` is `nabla_X Y = 1/2 [X,Y]_m`, which gives
//!
//! ```text
//! R(X,Y)Z = -[[X,Y]_h, Z] - 1/2 [[X,Y]_m, Z]_m + 1/4 [X, [Y,Z]_m]_m - 1/4 [Y, [X,Z]_m]_m
//! ```
//!
//! On `p x p x p` this reduces to
//! `-[[X,Y],Z] - 1/2<X,JY>JZ + 1/4<Y,JZ>JX + 1/4<Z,JX>JY`, and it yields
//! `R_V|_p = 1/4 id`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{arg, Error, Result};
use crate::exec::Exec;
use crate::homspace::StiefelSpace;
use crate::liealg::{self, span_of, AlgElement, Subspace, RANK_TOL};

/// Absolute gap separating distinct eigenvalues of a unit Jacobi operator.
pub const CLUSTER_GAP: f64 = 1e-6;
/// Allowed `|T v - lambda v|` for eigenspace basis vectors.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Allowed asymmetry of an assembled Jacobi operator before symmetrising.
pub const SYMMETRY_TOL: f64 = 1e-10;

fn curvature_of(space: &StiefelSpace, x: &AlgElement, y: &AlgElement, z: &AlgElement) -> DVector<f64> {
    let xy = x.lie(y);
    let xy_h = space.h_part(&xy);
    let xy_m = space.m_part(&xy);
    let yz_m = space.m_part(&y.lie(z));
    let xz_m = space.m_part(&x.lie(z));
    let mut r = -space.m_coords(&xy_h.lie(z));
    r -= space.m_coords(&xy_m.lie(z)) * 0.5;
    r += space.m_coords(&x.lie(&yz_m)) * 0.25;
    r -= space.m_coords(&y.lie(&xz_m)) * 0.25;
    r
}

/// `R(X,Y)Z` at the base point, all arguments and the result in m-coordinates.
pub fn curvature(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> Result<DVector<f64>> {
    for v in [x, y, z] {
        space.check_vector(v, false)?;
    }
    Ok(curvature_of(space, &space.tangent(x), &space.tangent(y), &space.tangent(z)))
}

/// The operator `Z -> R(X,Y)Z` on m-coordinates. Skew for the trace metric.
pub fn curvature_operator(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
    space.check_vector(x, false)?;
    space.check_vector(y, false)?;
    let (xm, ym) = (space.tangent(x), space.tangent(y));
    let d = space.dim_m();
    let mut op = DMatrix::zeros(d, d);
    for (c, e) in space.m_basis().iter().enumerate() {
        op.column_mut(c).copy_from(&curvature_of(space, &xm, &ym, e));
    }
    Ok(op)
}

/// Dense table of `R(e_a, e_b) e_c` over the m basis, for contraction-heavy
/// consumers such as the totally geodesic checker.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    dim: usize,
    data: Vec<f64>,
}

impl CurvatureTensor {
    pub fn new(space: &StiefelSpace, exec: Exec) -> Self {
        let d = space.dim_m();
        let basis = space.m_basis();
        let rows: Vec<Vec<f64>> = exec.map_range(0..d, |a| {
            let mut slab = vec![0.0; d * d * d];
            for b in (a + 1)..d {
                let ab = &basis[a];
                for c in 0..d {
                    let r = curvature_of(space, ab, &basis[b], &basis[c]);
                    slab[(b * d + c) * d..(b * d + c + 1) * d].copy_from_slice(r.as_slice());
                }
            }
            slab
        });
        let mut data = vec![0.0; d * d * d * d];
        for (a, slab) in rows.iter().enumerate() {
            for b in (a + 1)..d {
                for c in 0..d {
                    for e in 0..d {
                        let v = slab[(b * d + c) * d + e];
                        data[((a * d + b) * d + c) * d + e] = v;
                        data[((b * d + a) * d + c) * d + e] = -v;
                    }
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `<R(e_a, e_b) e_c, e_e>`.
    pub fn get(&self, a: usize, b: usize, c: usize, e: usize) -> f64 {
        let d = self.dim;
        self.data[((a * d + b) * d + c) * d + e]
    }

    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for a in 0..d {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..d {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..d {
                    let w = xy * z[c];
                    if w == 0.0 {
                        continue;
                    }
                    let base = ((a * d + b) * d + c) * d;
                    for e in 0..d {
                        out[e] += w * self.data[base + e];
                    }
                }
            }
        }
        out
    }

    /// Largest `|P_perp R(u,v)w|` over basis triples of the orthonormal
    /// columns of `basis` (the R-invariance defect of their span).
    pub fn invariance_defect(&self, basis: &DMatrix<f64>) -> f64 {
        let d = self.dim;
        let k = basis.ncols();
        if k == 0 {
            return 0.0;
        }
        debug_assert_eq!(basis.nrows(), d);
        // Stage 1: contract slot a.  s1[i][b][c][e]
        let mut s1 = vec![0.0; k * d * d * d];
        for i in 0..k {
            let dst = &mut s1[i * d * d * d..(i + 1) * d * d * d];
            for a in 0..d {
                let w = basis[(a, i)];
                if w == 0.0 {
                    continue;
                }
                let src = &self.data[a * d * d * d..(a + 1) * d * d * d];
                for (o, s) in dst.iter_mut().zip(src) {
                    *o += w * s;
                }
            }
        }
        // Stage 2: contract slot b for j > i (antisymmetry).  s2[(i,j)][c][e]
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
        let mut s2 = vec![0.0; pairs.len() * d * d];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let dst = &mut s2[p * d * d..(p + 1) * d * d];
            for b in 0..d {
                let w = basis[(b, j)];
                if w == 0.0 {
                    continue;
                }
                let src = &s1[(i * d + b) * d * d..(i * d + b + 1) * d * d];
                for (o, s) in dst.iter_mut().zip(src) {
                    *o += w * s;
                }
            }
        }
        // Stage 3: contract slot c, project out the span.
        let mut worst: f64 = 0.0;
        let mut out = DVector::zeros(d);
        for p in 0..pairs.len() {
            for l in 0..k {
                out.fill(0.0);
                for c in 0..d {
                    let w = basis[(c, l)];
                    if w == 0.0 {
                        continue;
                    }
                    let src = &s2[(p * d + c) * d..(p * d + c + 1) * d];
                    for (e, s) in src.iter().enumerate() {
                        out[e] += w * s;
                    }
                }
                let coeffs = basis.transpose() * &out;
                let resid = &out - basis * coeffs;
                worst = worst.max(resid.norm());
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub space: Subspace,
}

/// Eigenvalue -> eigenspace decomposition of a symmetric operator, sorted
/// ascending, with eigenvalues closer than the clustering gap merged.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pairs: Vec<Eigenpair>,
    source_dim: usize,
}

impl SpectralData {
    pub fn from_symmetric(t: &DMatrix<f64>, gap: f64, label: &str) -> Result<Self> {
        Self::decompose(t, gap, label, Some(EIGEN_RESIDUAL_TOL))
    }

    /// Like [`SpectralData::from_symmetric`], but without the per-vector
    /// residual check. Clusters merged across a tiny spectral gap are still
    /// invariant subspaces, which is all some callers need.
    pub fn clustered(t: &DMatrix<f64>, gap: f64, label: &str) -> Self {
        Self::decompose(t, gap, label, None).expect("no residual check requested")
    }

    fn decompose(t: &DMatrix<f64>, gap: f64, label: &str, residual_tol: Option<f64>) -> Result<Self> {
        let d = t.nrows();
        let eig = SymmetricEigen::new(t.clone());
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(last) if eig.eigenvalues[i] - eig.eigenvalues[*last.last().unwrap()] <= gap => last.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let mut pairs = Vec::with_capacity(clusters.len());
        for cl in clusters {
            let value = cl.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / cl.len() as f64;
            let vecs: Vec<DVector<f64>> = cl.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
            let space = span_of(d, &vecs, RANK_TOL).relabel(label);
            if let Some(tol) = residual_tol {
                for v in space.basis() {
                    let r = (t * v - v * value).norm();
                    if r > tol {
                        return Err(Error::Degeneracy(format!(
                            "eigenvector residual {r:e} at merged eigenvalue {value}"
                        )));
                    }
                }
            }
            pairs.push(Eigenpair { value, space });
        }
        Ok(Self { pairs, source_dim: d })
    }

    pub fn pairs(&self) -> &[Eigenpair] {
        &self.pairs
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.space.dim()).collect()
    }

    /// `(eigenvalue, multiplicity)` list.
    pub fn profile(&self) -> Vec<(f64, usize)> {
        self.pairs.iter().map(|p| (p.value, p.space.dim())).collect()
    }

    pub fn find(&self, value: f64, tol: f64) -> Option<&Eigenpair> {
        self.pairs.iter().find(|p| (p.value - value).abs() <= tol)
    }

    /// Orthogonal projection onto the `index`-th eigenspace.
    pub fn projection(&self, index: usize) -> DMatrix<f64> {
        self.pairs[index].space.projector()
    }
}

/// Matrix of the Jacobi operator `R_X = R(., X)X` on m-coordinates, before
/// symmetrisation.
pub fn jacobi_matrix(space: &StiefelSpace, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    space.check_vector(x, false)?;
    let xm = space.tangent(x);
    let d = space.dim_m();
    let mut t = DMatrix::zeros(d, d);
    for (c, e) in space.m_basis().iter().enumerate() {
        t.column_mut(c).copy_from(&curvature_of(space, e, &xm, &xm));
    }
    Ok(t)
}

/// Eigen-decomposition of `R_X` for a unit `X` in m.
pub fn jacobi_spectrum(space: &StiefelSpace, x: &DVector<f64>) -> Result<SpectralData> {
    space.check_vector(x, false)?;
    if (x.norm() - 1.0).abs() > 1e-10 {
        return arg(format!("jacobi_spectrum needs a unit vector, |X| = {}", x.norm()));
    }
    let t = jacobi_matrix(space, x)?;
    let asym = (&t - t.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::Consistency(format!("Jacobi operator asymmetric by {asym:e}")));
    }
    let sym = (&t + t.transpose()) * 0.5;
    SpectralData::from_symmetric(&sym, CLUSTER_GAP, &format!("m of StiefelSpace({})", space.n()))
}

/// `lambda_pm(t) = (5 +- sqrt(9 + 16 sin^2 2t)) / 8`, the eigenvalues of
/// `R_X` on `J a` for `X = cos t X_13 + sin t X_24`.
pub fn lambda_pm(t: f64) -> Result<(f64, f64)> {
    if !(-1e-12..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&t) {
        return arg(format!("t = {t} outside [0, pi/4]"));
    }
    let s = (2.0 * t).sin();
    let root = (9.0 + 16.0 * s * s).sqrt();
    Ok(((5.0 + root) / 8.0, (5.0 - root) / 8.0))
}

fn gram_det(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.norm_squared() * y.norm_squared() - x.dot(y).powi(2)
}

/// Sectional curvature of `span{X, Y}`.
pub fn sectional(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    let g = gram_det(x, y);
    if g <= 1e-10 {
        return arg("sectional curvature of linearly dependent vectors");
    }
    let r = curvature(space, x, y, y)?;
    Ok(r.dot(x) / g)
}

/// Bracket-only route to the sectional curvature of a normal homogeneous
/// space: `(|[X,Y]_h|^2 + 1/4 |[X,Y]_m|^2) / (|X|^2 |Y|^2 - <X,Y>^2)`.
pub fn sectional_oracle(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    space.check_vector(x, false)?;
    space.check_vector(y, false)?;
    let g = gram_det(x, y);
    if g <= 1e-10 {
        return arg("sectional curvature of linearly dependent vectors");
    }
    let b = space.tangent(x).lie(&space.tangent(y));
    let h = space.h_part(&b).norm();
    let m = space.m_coords(&b).norm();
    Ok((h * h + 0.25 * m * m) / g)
}

/// Curvature operators `R(e_a, e_b)`, `a < b`, as elements of `so(dim m)`.
pub fn curvature_operators(space: &StiefelSpace) -> Vec<AlgElement> {
    let d = space.dim_m();
    let mut ops = Vec::with_capacity(d * (d - 1) / 2);
    for a in 0..d {
        for b in (a + 1)..d {
            let op =
                curvature_operator(space, &liealg::unit(d, a), &liealg::unit(d, b)).expect("basis vectors lie in m");
            let skew = (&op - op.transpose()) * 0.5;
            ops.push(AlgElement::from_skew_unchecked(skew));
        }
    }
    ops
}

/// Lie algebra generated by all curvature operators (coordinates in
/// `so(dim m)`). By Ambrose–Singer this is the holonomy algebra.
pub fn holonomy_algebra(space: &StiefelSpace) -> Result<Subspace> {
    let d = space.dim_m();
    liealg::lie_closure(&curvature_operators(space), d * (d - 1) / 2)
}

/// Dimension of `{B in gl(d) : [A, B] = 0 for every A}`. One means the
/// matrices act absolutely irreducibly.
pub fn commutant_dim(ops: &[DMatrix<f64>]) -> usize {
    let Some(first) = ops.first() else { return 0 };
    let d = first.nrows();
    let mut rows = DMatrix::zeros(ops.len() * d * d, d * d);
    for (k, a) in ops.iter().enumerate() {
        // [A, E_pq] has entries A_ip delta_qj - delta_ip A_qj at (i, j).
        for p in 0..d {
            for q in 0..d {
                let col = p * d + q;
                for i in 0..d {
                    rows[(k * d * d + i * d + q, col)] += a[(i, p)];
                }
                for j in 0..d {
                    rows[(k * d * d + p * d + j, col)] -= a[(q, j)];
                }
            }
        }
    }
    liealg::null_space(&rows, RANK_TOL).len()
}

/// Coefficients of `R(e_a ∧ e_b) = sum_{c<d} <R(e_a,e_b) e_d, e_c> e_c ∧ e_d`,
/// listed as `((c, d), coefficient)`.
pub fn wedge_image(space: &StiefelSpace, a: usize, b: usize) -> Result<Vec<((usize, usize), f64)>> {
    let d = space.dim_m();
    if a >= d || b >= d || a == b {
        return arg(format!("wedge indices ({a}, {b}) invalid for dim m = {d}"));
    }
    let op = curvature_operator(space, &liealg::unit(d, a), &liealg::unit(d, b))?;
    let mut out = Vec::new();
    for c in 0..d {
        for e in (c + 1)..d {
            out.push(((c, e), op[(c, e)]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::{apply_j, build_space, singular_representative};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn complex_plane_acts_by_minus_half_j() {
        let s = build_space(3).unwrap();
        let y = s.e(1, 3);
        let jy = apply_j(&s, &y).unwrap();
        let z = s.e(1, 5);
        let r = curvature(&s, &y, &jy, &z).unwrap();
        assert!((r + apply_j(&s, &z).unwrap() * 0.5).norm() < 1e-14);
    }

    #[test]
    fn vertical_plane_curvature() {
        let s = build_space(4).unwrap();
        let r = curvature(&s, &s.e(1, 2), &s.e(1, 3), &s.e(1, 3)).unwrap();
        assert!((r - s.e(1, 2) * 0.25).norm() < 1e-14);
    }

    #[test]
    fn rejects_wrong_length() {
        let s = build_space(2).unwrap();
        let bad = DVector::zeros(4);
        assert!(curvature(&s, &bad, &s.e(1, 2), &s.e(1, 3)).is_err());
    }

    #[test]
    fn lambda_endpoints() {
        assert_eq!(lambda_pm(0.0).unwrap(), (1.0, 0.25));
        let (p, m) = lambda_pm(FRAC_PI_4).unwrap();
        assert!((p - 1.25).abs() < 1e-15 && m.abs() < 1e-15);
        let (p, m) = lambda_pm(std::f64::consts::PI / 6.0).unwrap();
        let r21 = 21f64.sqrt();
        assert!((p - (5.0 + r21) / 8.0).abs() < 1e-14 && (m - (5.0 - r21) / 8.0).abs() < 1e-14);
        assert!(lambda_pm(1.0).is_err());
    }

    #[test]
    fn hopf_berger_sectionals() {
        let s = build_space(4).unwrap();
        let x = (s.e(1, 3) + s.e(2, 4)) * FRAC_1_SQRT_2;
        let jx = apply_j(&s, &x).unwrap();
        assert!((sectional(&s, &x, &jx).unwrap() - 1.25).abs() < 1e-14);
        assert!((sectional(&s, &s.e(1, 2), &x).unwrap() - 0.25).abs() < 1e-14);
        assert!((sectional(&s, &s.e(1, 2), &s.e(1, 3)).unwrap() - 0.25).abs() < 1e-14);
        assert!(sectional(&s, &x, &(&x * 2.0)).is_err());
    }

    #[test]
    fn jacobi_of_v_is_quarter_on_p() {
        let s = build_space(5).unwrap();
        let spec = jacobi_spectrum(&s, &s.e(1, 2)).unwrap();
        assert_eq!(spec.profile().len(), 2);
        let (v0, m0) = spec.profile()[0];
        let (v1, m1) = spec.profile()[1];
        assert!(v0.abs() < 1e-12 && m0 == 1);
        assert!((v1 - 0.25).abs() < 1e-12 && m1 == 10);
        assert!(spec.pairs()[1].space.basis().iter().all(|b| b[0].abs() < 1e-12));
    }

    #[test]
    fn jacobi_requires_unit_vector() {
        let s = build_space(3).unwrap();
        assert!(jacobi_spectrum(&s, &(s.e(1, 3) * 2.0)).is_err());
    }

    #[test]
    fn tensor_matches_direct_evaluation() {
        let s = build_space(3).unwrap();
        let t = CurvatureTensor::new(&s, Exec::Sequential);
        let (x, _) = singular_representative(&s, 0.3).unwrap();
        let y = s.e(1, 2) + s.e(2, 5) * 0.7;
        let z = s.e(1, 4) - s.e(2, 3);
        let direct = curvature(&s, &x, &y, &z).unwrap();
        assert!((t.apply(&x, &y, &z) - direct).norm() < 1e-13);
        let par = CurvatureTensor::new(&s, Exec::Parallel);
        assert_eq!(t.data, par.data);
    }

    #[test]
    fn invariance_defect_of_m_and_of_a_bad_plane() {
        let s = build_space(3).unwrap();
        let t = CurvatureTensor::new(&s, Exec::Sequential);
        let d = s.dim_m();
        assert!(t.invariance_defect(&DMatrix::identity(d, d)) < 1e-14);
        let u = (s.e(1, 3) + s.e(1, 2)) * FRAC_1_SQRT_2;
        let bad = DMatrix::from_columns(&[u, s.e(2, 4)]);
        assert!(t.invariance_defect(&bad) > 1e-3);
    }

    #[test]
    fn commutant_of_full_algebra_is_scalars() {
        let gens: Vec<DMatrix<f64>> =
            (0..3).flat_map(|i| ((i + 1)..4).map(move |j| liealg::x(i, j, 4).into_entries())).collect();
        assert_eq!(commutant_dim(&gens), 1);
        // so(2) on R^2 commutes with all of C.
        assert_eq!(commutant_dim(&[liealg::x(0, 1, 2).into_entries()]), 2);
    }
}
