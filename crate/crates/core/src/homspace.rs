//! Reductive scaffold of `M = V2(R^{n+2}) = SO(n+2)/SO(n)` at the base point.
//!
//! `g = so(n+2)`, `h = so(n)` acting on the last `n` coordinates, and
//! `m = z + p` with `z = R X_12` (the fibre of `M -> G2(R^{n+2})`) and
//! `p = span{X_1j, X_2j : 3 <= j <= n+2}` (horizontal).
//!
//! Tangent vectors are `m`-coordinate vectors of length `2n+1` in the fixed
//! order `X_12, X_13, ..., X_1,n+2, X_23, ..., X_2,n+2`. A "p-vector" is an
//! `m`-vector with vanishing first coordinate. The `X_ij` are orthonormal for
//! the trace form, so no rescaling of the metric is applied.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::liealg::{self, null_space, so_dim, so_index, AlgElement, Subspace, RANK_TOL};

/// Tolerance for "this vector lies in p / m".
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Absolute eigenvalue gap below which two roots are considered colliding.
pub const ROOT_GAP: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct StiefelSpace {
    n: usize,
    g: Subspace,
    h: Subspace,
    m: Subspace,
    z: Subspace,
    p: Subspace,
    m_basis: Vec<AlgElement>,
    v: AlgElement,
    j: DMatrix<f64>,
}

/// 0-based matrix position of the `m` basis vector with coordinate `k`.
fn m_pair(n: usize, k: usize) -> (usize, usize) {
    match k {
        0 => (0, 1),
        k if k <= n => (0, k + 1),
        k => (1, k - n + 1),
    }
}

pub fn build_space(n: usize) -> Result<StiefelSpace> {
    if n < 2 {
        return arg(format!("V2(R^{}) is excluded: n must be at least 2, got {n}", n + 2));
    }
    let order = n + 2;
    let dim_m = 2 * n + 1;
    let label_g = format!("so({order})");
    let m_basis: Vec<AlgElement> = (0..dim_m)
        .map(|k| {
            let (i, j) = m_pair(n, k);
            liealg::x(i, j, order)
        })
        .collect();
    let m_idx: Vec<usize> = (0..dim_m)
        .map(|k| {
            let (i, j) = m_pair(n, k);
            so_index(i, j, order)
        })
        .collect();
    let mut h_idx = Vec::new();
    for i in 2..order {
        for j in (i + 1)..order {
            h_idx.push(so_index(i, j, order));
        }
    }
    let all: Vec<usize> = (0..so_dim(order)).collect();
    let g = Subspace::coordinate(&all, so_dim(order), label_g.clone());
    let h = Subspace::coordinate(&h_idx, so_dim(order), label_g.clone());
    let m = Subspace::coordinate(&m_idx, so_dim(order), label_g.clone());
    let z = Subspace::coordinate(&m_idx[..1], so_dim(order), label_g.clone());
    let p = Subspace::coordinate(&m_idx[1..], so_dim(order), label_g);
    let v = m_basis[0].clone();

    let mut space = StiefelSpace { n, g, h, m, z, p, m_basis, v, j: DMatrix::zeros(0, 0) };

    // J = -ad_V on p, assembled column by column.
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for col in 0..2 * n {
        let img = -&space.v.lie(&space.m_basis[col + 1]);
        let c = space.m_coords(&img);
        if c[0].abs() > MEMBERSHIP_TOL || space.h_part(&img).norm() > MEMBERSHIP_TOL {
            return Err(Error::Consistency("ad_V does not preserve p".into()));
        }
        j.column_mut(col).copy_from(&c.rows(1, 2 * n));
    }
    // Index formulas: J X_1j = X_2j, J X_2j = -X_1j.
    let mut expected = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        expected[(n + k, k)] = 1.0;
        expected[(k, n + k)] = -1.0;
    }
    if (&j - &expected).norm() > 1e-14 {
        return Err(Error::Consistency("J disagrees with its index formulas".into()));
    }
    space.j = j;
    Ok(space)
}

impl StiefelSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix order `n + 2`.
    pub fn order(&self) -> usize {
        self.n + 2
    }

    pub fn dim_m(&self) -> usize {
        2 * self.n + 1
    }

    pub fn dim_h(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }
    pub fn h(&self) -> &Subspace {
        &self.h
    }
    pub fn m(&self) -> &Subspace {
        &self.m
    }
    pub fn z(&self) -> &Subspace {
        &self.z
    }
    pub fn p(&self) -> &Subspace {
        &self.p
    }

    /// `V = X_12`.
    pub fn v(&self) -> &AlgElement {
        &self.v
    }

    /// `J` on p-coordinates (`2n x 2n`).
    pub fn j_matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    /// `J` extended by zero on `z`, acting on m-coordinates.
    pub fn j_on_m(&self) -> DMatrix<f64> {
        let d = self.dim_m();
        let mut out = DMatrix::zeros(d, d);
        out.view_mut((1, 1), (d - 1, d - 1)).copy_from(&self.j);
        out
    }

    pub fn m_basis(&self) -> &[AlgElement] {
        &self.m_basis
    }

    /// m-coordinate index of `X_ij` (1-based, `i` in {1, 2}, `i < j`).
    pub fn m_index(&self, i: usize, j: usize) -> Option<usize> {
        match (i, j) {
            (1, 2) => Some(0),
            (1, j) if (3..=self.n + 2).contains(&j) => Some(j - 2),
            (2, j) if (3..=self.n + 2).contains(&j) => Some(self.n + j - 2),
            _ => None,
        }
    }

    /// Unit m-vector for `X_ij` (1-based).
    ///
    /// # Panics
    /// If `X_ij` is not an m basis vector.
    pub fn e(&self, i: usize, j: usize) -> DVector<f64> {
        let k = self.m_index(i, j).unwrap_or_else(|| panic!("X_{i}{j} is not in m"));
        liealg::unit(self.dim_m(), k)
    }

    /// Matrix of the tangent vector with the given m-coordinates.
    pub fn tangent(&self, coords: &DVector<f64>) -> AlgElement {
        debug_assert_eq!(coords.len(), self.dim_m());
        let order = self.order();
        let mut a = DMatrix::zeros(order, order);
        for (k, c) in coords.iter().enumerate() {
            let (i, j) = m_pair(self.n, k);
            a[(i, j)] = *c;
            a[(j, i)] = -*c;
        }
        AlgElement::from_skew_unchecked(a)
    }

    /// m-coordinates of the m-component of an element of g.
    pub fn m_coords(&self, a: &AlgElement) -> DVector<f64> {
        let e = a.entries();
        DVector::from_fn(self.dim_m(), |k, _| {
            let (i, j) = m_pair(self.n, k);
            e[(i, j)]
        })
    }

    pub fn h_part(&self, a: &AlgElement) -> AlgElement {
        let mut e = a.entries().clone();
        e.rows_mut(0, 2).fill(0.0);
        e.columns_mut(0, 2).fill(0.0);
        AlgElement::from_skew_unchecked(e)
    }

    pub fn m_part(&self, a: &AlgElement) -> AlgElement {
        self.tangent(&self.m_coords(a))
    }

    /// Checks the argument is an m-vector; with `horizontal`, also that its
    /// z-component vanishes.
    pub fn check_vector(&self, v: &DVector<f64>, horizontal: bool) -> Result<()> {
        if v.len() != self.dim_m() {
            return arg(format!("expected an m-vector of length {}, got {}", self.dim_m(), v.len()));
        }
        if horizontal && v[0].abs() > MEMBERSHIP_TOL * v.norm().max(1.0) {
            return arg(format!("vector has z-component {:e}; expected a p-vector", v[0]));
        }
        Ok(())
    }

    /// Verifies the decomposition invariants: orthogonal sums, dimensions,
    /// reductivity `[h, m] ⊆ m`, and `J^2 = -1` with `J` orthogonal.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let pairs = [
            ("h", &self.h, "m", &self.m),
            ("z", &self.z, "p", &self.p),
            ("h", &self.h, "z", &self.z),
            ("h", &self.h, "p", &self.p),
        ];
        for (a, sa, b, sb) in pairs {
            if sa.max_overlap(sb) > 1e-12 {
                return Err(Error::Consistency(format!("{a} is not orthogonal to {b}")));
            }
        }
        if self.h.dim() + self.m.dim() != self.g.dim() || !self.z.sum(&self.p).same_as(&self.m, 1e-12) {
            return Err(Error::Consistency("g = h + m or m = z + p fails".into()));
        }
        if self.z.dim() != 1 || self.p.dim() != 2 * n || self.h.dim() != n * (n - 1) / 2 {
            return Err(Error::Consistency("unexpected summand dimensions".into()));
        }
        let order = self.order();
        for hc in self.h.basis() {
            let hx = AlgElement::from_coords(order, hc)?;
            for mx in &self.m_basis {
                let b = hx.lie(mx);
                if self.h_part(&b).norm() > 1e-12 {
                    return Err(Error::Consistency("[h, m] has an h-component".into()));
                }
            }
        }
        let id = DMatrix::<f64>::identity(2 * n, 2 * n);
        if (&self.j * &self.j + &id).norm() > 1e-12 || (self.j.transpose() * &self.j - &id).norm() > 1e-12 {
            return Err(Error::Consistency("J is not an orthogonal complex structure".into()));
        }
        Ok(())
    }
}

/// `J Y = -[V, Y]` for a p-vector `Y`.
pub fn apply_j(space: &StiefelSpace, y: &DVector<f64>) -> Result<DVector<f64>> {
    space.check_vector(y, true)?;
    Ok(-space.m_coords(&space.v.lie(&space.tangent(y))))
}

/// Naturally reductive defect `U(X, Y)`, defined by
/// `2<U(X,Y), Z> = <[Z,X]_m, Y> + <X, [Z,Y]_m>` for all `Z` in m.
pub fn u_tensor(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    space.check_vector(x, false)?;
    space.check_vector(y, false)?;
    let xm = space.tangent(x);
    let ym = space.tangent(y);
    Ok(DVector::from_fn(space.dim_m(), |c, _| {
        let zc = &space.m_basis[c];
        let zx = space.m_coords(&zc.lie(&xm));
        let zy = space.m_coords(&zc.lie(&ym));
        0.5 * (zx.dot(y) + x.dot(&zy))
    }))
}

/// O'Neill tensor `A_X Y = 1/2 [X, Y]^v` for horizontal `X, Y`, as an m-vector.
pub fn oneill_a(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    space.check_vector(x, true)?;
    space.check_vector(y, true)?;
    let b = space.tangent(x).lie(&space.tangent(y));
    let mut out = DVector::zeros(space.dim_m());
    out[0] = 0.5 * b.entries()[(0, 1)];
    Ok(out)
}

/// Closed form `1/2 <X, JY> V`, the independent route for [`oneill_a`].
pub fn oneill_a_closed_form(space: &StiefelSpace, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let jy = apply_j(space, y)?;
    let mut out = DVector::zeros(space.dim_m());
    out[0] = 0.5 * x.dot(&jy);
    Ok(out)
}

/// `Y -> (nabla_Y X*)_o = 1/2 [X, Y]_m` on m-coordinates; skew-adjoint.
pub fn nabla_operator(space: &StiefelSpace, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    space.check_vector(x, false)?;
    let xm = space.tangent(x);
    let d = space.dim_m();
    let mut op = DMatrix::zeros(d, d);
    for (c, e) in space.m_basis.iter().enumerate() {
        op.column_mut(c).copy_from(&(space.m_coords(&xm.lie(e)) * 0.5));
    }
    Ok(op)
}

#[derive(Clone, Debug)]
pub struct RootDecomposition {
    pub a: Subspace,
    pub p_theta1: Subspace,
    pub p_theta2: Subspace,
    pub p_sum: Subspace,
    pub p_diff: Subspace,
    /// `(theta(X_13), theta(X_24))` for `theta_1` and `theta_2`.
    pub theta_values: [(f64, f64); 2],
}

impl RootDecomposition {
    pub fn dims(&self) -> [usize; 5] {
        [self.a.dim(), self.p_theta1.dim(), self.p_theta2.dim(), self.p_sum.dim(), self.p_diff.dim()]
    }

    pub fn summands(&self) -> [&Subspace; 5] {
        [&self.a, &self.p_theta1, &self.p_theta2, &self.p_sum, &self.p_diff]
    }
}

/// `-ad_H^2` restricted to p, in m-coordinates (zero on z).
pub fn ad_squared_on_p(space: &StiefelSpace, h: &DVector<f64>) -> DMatrix<f64> {
    let hm = space.tangent(h);
    let d = space.dim_m();
    let mut op = DMatrix::zeros(d, d);
    for c in 1..d {
        let img = -&hm.lie(&hm.lie(&space.m_basis[c]));
        op.column_mut(c).copy_from(&space.m_coords(&img));
    }
    op
}

/// Restricted root decomposition of p for `a = span{X_13, X_24}`.
///
/// The commuting family `-ad_H^2`, `H` in a, is diagonalised through a
/// generic combination of `H = X_13`, `X_24` and `(X_13 + X_24)/sqrt 2`; the
/// last one separates `theta_1 + theta_2` from `theta_1 - theta_2`, whose
/// squares agree on the first two.
pub fn root_decomposition(space: &StiefelSpace) -> Result<RootDecomposition> {
    let n = space.n;
    let d = space.dim_m();
    let h1 = space.e(1, 3);
    let h2 = space.e(2, 4);
    let h3 = (&h1 + &h2) / 2f64.sqrt();
    let ops = [ad_squared_on_p(space, &h1), ad_squared_on_p(space, &h2), ad_squared_on_p(space, &h3)];
    let weights = [1.0, 3f64.sqrt(), 0.3];
    let combo = &ops[0] * weights[0] + &ops[1] * weights[1] + &ops[2] * weights[2];

    // Diagonalise on p only (drop the z row/column).
    let sub = combo.view((1, 1), (d - 1, d - 1)).into_owned();
    let eig = nalgebra::SymmetricEigen::new((&sub + sub.transpose()) * 0.5);

    // Signatures (values of theta^2 on h1, h2, h3) of each summand.
    let signatures: [(&str, [f64; 3]); 5] = [
        ("a", [0.0, 0.0, 0.0]),
        ("theta1", [1.0, 0.0, 0.5]),
        ("theta2", [0.0, 1.0, 0.5]),
        ("sum", [1.0, 1.0, 2.0]),
        ("diff", [1.0, 1.0, 0.0]),
    ];
    let expected: Vec<f64> = signatures.iter().map(|(_, s)| s.iter().zip(&weights).map(|(a, b)| a * b).sum()).collect();
    for i in 0..expected.len() {
        for k in (i + 1)..expected.len() {
            if (expected[i] - expected[k]).abs() < ROOT_GAP {
                return Err(Error::Degeneracy("root signatures collide".into()));
            }
        }
    }

    let mut buckets: Vec<Vec<DVector<f64>>> = vec![Vec::new(); 5];
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        let mut v = DVector::zeros(d);
        v.rows_mut(1, d - 1).copy_from(&eig.eigenvectors.column(idx));
        let joint: Vec<f64> = ops.iter().map(|op| v.dot(&(op * &v))).collect();
        let Some(slot) =
            signatures.iter().position(|(_, s)| s.iter().zip(&joint).all(|(a, b)| (a - b).abs() < ROOT_GAP))
        else {
            return Err(Error::Degeneracy(format!(
                "eigenvector with eigenvalue {lam} matches no root signature {joint:?}"
            )));
        };
        if (lam - expected[slot]).abs() > ROOT_GAP {
            return Err(Error::Degeneracy(format!("eigenvalue {lam} off its cluster")));
        }
        buckets[slot].push(v);
    }
    let label = format!("m of StiefelSpace({n})");
    let mut parts = buckets.into_iter().map(|vs| liealg::span_of(d, &vs, RANK_TOL).relabel(label.clone()));
    let rd = RootDecomposition {
        a: parts.next().unwrap(),
        p_theta1: parts.next().unwrap(),
        p_theta2: parts.next().unwrap(),
        p_sum: parts.next().unwrap(),
        p_diff: parts.next().unwrap(),
        theta_values: [(1.0, 0.0), (0.0, 1.0)],
    };
    let expect_dims = [2, n - 2, n - 2, 1, 1];
    if rd.dims() != expect_dims {
        return Err(Error::Degeneracy(format!("root space dimensions {:?}, expected {expect_dims:?}", rd.dims())));
    }
    Ok(rd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitType {
    /// `t = 0`: isotropy of type `S(O(n-1) x O(1))`.
    SingularReal,
    /// `t = pi/4`: isotropy of type `S(O(n-2) x O(2))`.
    SingularComplex,
    Principal,
}

/// `cos(t) X_13 + sin(t) X_24` for `t` in `[0, pi/4]`, with its orbit type.
pub fn singular_representative(space: &StiefelSpace, t: f64) -> Result<(DVector<f64>, OrbitType)> {
    const EDGE: f64 = 1e-12;
    if !(-EDGE..=FRAC_PI_4 + EDGE).contains(&t) {
        return arg(format!("t = {t} outside [0, pi/4]"));
    }
    let v = space.e(1, 3) * t.cos() + space.e(2, 4) * t.sin();
    let kind = if t.abs() <= EDGE {
        OrbitType::SingularReal
    } else if (t - FRAC_PI_4).abs() <= EDGE {
        OrbitType::SingularComplex
    } else {
        OrbitType::Principal
    };
    Ok((v, kind))
}

/// `dim {Z in p : [Z, X] = 0}`.
pub fn centralizer_dim_in_p(space: &StiefelSpace, x: &DVector<f64>) -> usize {
    let xm = space.tangent(x);
    let cols: Vec<DVector<f64>> = (1..space.dim_m()).map(|c| space.m_basis[c].lie(&xm).coords()).collect();
    let map = DMatrix::from_columns(&cols);
    null_space(&map, RANK_TOL).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn build_dimensions() {
        let s2 = build_space(2).unwrap();
        assert_eq!((s2.dim_m(), s2.dim_h(), s2.p().dim()), (5, 1, 4));
        let s4 = build_space(4).unwrap();
        assert_eq!((s4.dim_m(), s4.dim_h()), (9, 6));
        assert!(build_space(1).is_err());
        assert!(build_space(0).is_err());
    }

    #[test]
    fn m_for_n2_is_the_five_listed_generators() {
        let s = build_space(2).unwrap();
        let names: Vec<(usize, usize)> = (0..5).map(|k| m_pair(2, k)).collect();
        assert_eq!(names, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn j_examples() {
        let s = build_space(4).unwrap();
        assert_eq!(apply_j(&s, &s.e(1, 3)).unwrap(), s.e(2, 3));
        let t: f64 = 0.37;
        let y = s.e(1, 3) * t.cos() + s.e(2, 4) * t.sin();
        let expect = s.e(2, 3) * t.cos() - s.e(1, 4) * t.sin();
        assert!((apply_j(&s, &y).unwrap() - expect).norm() < 1e-15);
        let y = (s.e(1, 3) + s.e(2, 4)) * FRAC_1_SQRT_2;
        let xp = (s.e(2, 3) - s.e(1, 4)) * FRAC_1_SQRT_2;
        assert!((apply_j(&s, &y).unwrap() - xp).norm() < 1e-15);
        assert!(apply_j(&s, &s.e(1, 2)).is_err());
    }

    #[test]
    fn u_tensor_examples() {
        let s = build_space(3).unwrap();
        assert!(u_tensor(&s, &s.e(1, 3), &s.e(2, 4)).unwrap().norm() < 1e-14);
        assert!(u_tensor(&s, &s.e(1, 2), &s.e(1, 2)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn oneill_examples() {
        let s = build_space(3).unwrap();
        let a = oneill_a(&s, &s.e(1, 3), &s.e(2, 3)).unwrap();
        assert!((a - s.e(1, 2) * -0.5).norm() < 1e-15);
        assert!(oneill_a(&s, &s.e(1, 3), &s.e(2, 4)).unwrap().norm() < 1e-15);
        let x = s.e(1, 4) + s.e(2, 5) * 0.3;
        assert!(oneill_a(&s, &x, &x).unwrap().norm() < 1e-15);
        assert!(oneill_a(&s, &s.e(1, 2), &x).is_err());
    }

    #[test]
    fn nabla_examples() {
        let s = build_space(3).unwrap();
        let x = s.e(1, 3);
        let op = nabla_operator(&s, &x).unwrap();
        let jx = apply_j(&s, &x).unwrap();
        assert!((&op * s.e(1, 2) - &jx * 0.5).norm() < 1e-15);
        assert!((&op + op.transpose()).norm() < 1e-15);
        let opv = nabla_operator(&s, &s.e(1, 2)).unwrap();
        let y = s.e(1, 4) - s.e(2, 5) * 2.0;
        assert!((&opv * &y + apply_j(&s, &y).unwrap() * 0.5).norm() < 1e-15);
    }

    #[test]
    fn root_decomposition_dims() {
        assert_eq!(root_decomposition(&build_space(4).unwrap()).unwrap().dims(), [2, 2, 2, 1, 1]);
        assert_eq!(root_decomposition(&build_space(2).unwrap()).unwrap().dims(), [2, 0, 0, 1, 1]);
    }

    #[test]
    fn root_spaces_match_named_spans() {
        let s = build_space(5).unwrap();
        let rd = root_decomposition(&s).unwrap();
        let d = s.dim_m();
        let span = |vs: Vec<DVector<f64>>| liealg::span_of(d, &vs, 1e-10);
        assert!(rd.a.same_as(&span(vec![s.e(1, 3), s.e(2, 4)]), 1e-10));
        assert!(rd.p_theta1.same_as(&span((5..=7).map(|j| s.e(1, j)).collect()), 1e-10));
        assert!(rd.p_theta2.same_as(&span((5..=7).map(|j| s.e(2, j)).collect()), 1e-10));
        assert!(rd.p_sum.same_as(&span(vec![s.e(2, 3) - s.e(1, 4)]), 1e-10));
        assert!(rd.p_diff.same_as(&span(vec![s.e(2, 3) + s.e(1, 4)]), 1e-10));
        let ja = rd.a.map(&s.j_on_m());
        assert!(ja.same_as(&rd.p_sum.sum(&rd.p_diff), 1e-10));
    }

    #[test]
    fn representatives() {
        let s = build_space(4).unwrap();
        let (v, k) = singular_representative(&s, 0.0).unwrap();
        assert_eq!((v, k), (s.e(1, 3), OrbitType::SingularReal));
        let (v, k) = singular_representative(&s, FRAC_PI_4).unwrap();
        assert!((v - (s.e(1, 3) + s.e(2, 4)) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert_eq!(k, OrbitType::SingularComplex);
        let (v, k) = singular_representative(&s, std::f64::consts::PI / 6.0).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert_eq!(k, OrbitType::Principal);
        assert!(singular_representative(&s, -0.1).is_err());
        assert!(singular_representative(&s, 0.9).is_err());
    }

    #[test]
    fn centralizer_dimensions_by_orbit_type() {
        for n in 2..=6 {
            let s = build_space(n).unwrap();
            let at = |t: f64| centralizer_dim_in_p(&s, &singular_representative(&s, t).unwrap().0);
            assert_eq!(at(0.0), n, "n = {n}");
            assert_eq!(at(FRAC_PI_4), 3, "n = {n}");
            assert_eq!(at(0.4), 2, "n = {n}");
        }
    }
}
