//! Isometric actions `(l, k) . gH = l g k H` of subgroups `L x K` of
//! `G x K_1` on Stiefel manifolds `V_k(F^n) = G/H`, represented by their
//! infinitesimal generators inside real orthogonal algebras.
//!
//! Realification: a complex entry `a + bi` becomes the block `[[a, -b], [b, a]]`
//! (coordinates interleaved as `x_1, y_1, x_2, y_2, ...`); a quaternion entry
//! `q` becomes left multiplication by `q` on `(1, i, j, k)`, so quaternionic
//! matrices commute with right scalar multiplication. `G` is `SO(n)`, `SU(n)`
//! or `Sp(n)`; `H` is the copy of `SO/SU/Sp(n-k)` on the last `n-k` coordinates;
//! `K_1` is `SO(k)`, `U(k)` or `Sp(k)` on the first `k` coordinates (for `U(k)`
//! the trace is compensated on the last block so that it lies in `SU(n)`).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::exec::Exec;
use crate::homspace::StiefelSpace;
use crate::liealg::{self, lie_closure, null_space, rank_of, so_dim, span_of, AlgElement, Subspace, RANK_TOL};
use crate::octonion::Octonions;
use crate::sampling;

/// Orthogonality bound for the polarity check.
pub const POLAR_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn real_dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }
}

fn skew(m: DMatrix<f64>) -> AlgElement {
    AlgElement::from_skew_unchecked(m)
}

/// Places `a` as a diagonal block at `offset` in a `d x d` zero matrix.
fn embed(a: &DMatrix<f64>, offset: usize, d: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(d, d);
    out.view_mut((offset, offset), a.shape()).copy_from(a);
    out
}

fn embed_all(elems: &[AlgElement], offset: usize, d: usize) -> Vec<AlgElement> {
    elems.iter().map(|e| skew(embed(e.entries(), offset, d))).collect()
}

fn so_basis(d: usize) -> Vec<AlgElement> {
    (0..d).flat_map(|i| ((i + 1)..d).map(move |j| liealg::x(i, j, d))).collect()
}

/// `{A in so(d) : [A, S] = 0 for all S}`, orthonormal in `so(d)` coordinates.
pub fn commutant_in_so(d: usize, structures: &[DMatrix<f64>]) -> Vec<AlgElement> {
    let basis = so_basis(d);
    if structures.is_empty() {
        return basis;
    }
    let rows = structures.len() * d * d;
    let mut sys = DMatrix::zeros(rows, basis.len());
    for (c, x) in basis.iter().enumerate() {
        for (s, st) in structures.iter().enumerate() {
            let comm = x.entries() * st - st * x.entries();
            for (r, v) in comm.iter().enumerate() {
                sys[(s * d * d + r, c)] = *v;
            }
        }
    }
    null_space(&sys, RANK_TOL)
        .iter()
        .map(|coef| {
            let mut m = DMatrix::zeros(d, d);
            for (c, x) in basis.iter().enumerate() {
                m += x.entries() * coef[c];
            }
            skew(m)
        })
        .collect()
}

/// Block-diagonal repetition of a square block.
fn block_diag(block: &DMatrix<f64>, copies: usize) -> DMatrix<f64> {
    let b = block.nrows();
    let mut out = DMatrix::zeros(b * copies, b * copies);
    for c in 0..copies {
        out.view_mut((c * b, c * b), (b, b)).copy_from(block);
    }
    out
}

fn j2() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// Multiplication by `i` on `C^m` realified.
pub fn complex_structure(m: usize) -> DMatrix<f64> {
    block_diag(&j2(), m)
}

/// Quaternion product of `(a, b, c, d) = a + bi + cj + dk`.
fn qmul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

fn unit_q(i: usize) -> [f64; 4] {
    let mut q = [0.0; 4];
    q[i] = 1.0;
    q
}

/// Matrix of `x -> q x` (left) or `x -> x q` (right) on `H = R^4`.
fn quaternion_mult(q: [f64; 4], left: bool) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    for c in 0..4 {
        let v = if left { qmul(q, unit_q(c)) } else { qmul(unit_q(c), q) };
        for r in 0..4 {
            m[(r, c)] = v[r];
        }
    }
    m
}

/// Right multiplication by `i`, `j`, `k` on `H^m` realified.
pub fn right_structures(m: usize) -> Vec<DMatrix<f64>> {
    (1..4).map(|u| block_diag(&quaternion_mult(unit_q(u), false), m)).collect()
}

/// Anti-linear `j` on `C^{2m}`: `(z_1, z_2) -> (-conj z_2, conj z_1)` on
/// consecutive pairs; anticommutes with `i` and squares to `-1`.
pub fn quaternionic_structure(m: usize) -> DMatrix<f64> {
    let block = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, -1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0,
        ],
    );
    block_diag(&block, m)
}

/// `su(n)` realified in `so(2n)`: real and imaginary off-diagonal parts and
/// traceless imaginary diagonals.
fn su_realified(n: usize) -> Vec<AlgElement> {
    let d = 2 * n;
    let mut out = Vec::new();
    let id2 = DMatrix::<f64>::identity(2, 2);
    for p in 0..n {
        for q in (p + 1)..n {
            let mut re = DMatrix::zeros(d, d);
            re.view_mut((2 * p, 2 * q), (2, 2)).copy_from(&id2);
            re.view_mut((2 * q, 2 * p), (2, 2)).copy_from(&(-&id2));
            out.push(skew(re));
            let mut im = DMatrix::zeros(d, d);
            im.view_mut((2 * p, 2 * q), (2, 2)).copy_from(&j2());
            im.view_mut((2 * q, 2 * p), (2, 2)).copy_from(&j2());
            out.push(skew(im));
        }
    }
    for p in 0..n.saturating_sub(1) {
        let mut dg = DMatrix::zeros(d, d);
        dg.view_mut((2 * p, 2 * p), (2, 2)).copy_from(&j2());
        dg.view_mut((2 * p + 2, 2 * p + 2), (2, 2)).copy_from(&(-j2()));
        out.push(skew(dg));
    }
    out
}

/// Imaginary part of the complex trace of a realified matrix.
fn complex_trace_im(a: &DMatrix<f64>) -> f64 {
    (0..a.nrows() / 2).map(|p| a[(2 * p + 1, 2 * p)]).sum()
}

fn sp_realified(n: usize) -> Vec<AlgElement> {
    commutant_in_so(4 * n, &right_structures(n))
}

/// Nine anticommuting symmetric square roots of the identity of order 16:
/// `[[0, L_a], [-L_a, 0]]` for the seven octonion units, `[[0, I], [I, 0]]`
/// and `diag(I, -I)`. Verified by the anticommutation self-test.
pub fn gamma_matrices() -> Result<Vec<DMatrix<f64>>> {
    let o = Octonions::standard()?;
    let id = DMatrix::<f64>::identity(8, 8);
    let z = DMatrix::<f64>::zeros(8, 8);
    let assemble = |a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>| {
        let mut m = DMatrix::zeros(16, 16);
        m.view_mut((0, 0), (8, 8)).copy_from(a);
        m.view_mut((0, 8), (8, 8)).copy_from(b);
        m.view_mut((8, 0), (8, 8)).copy_from(c);
        m.view_mut((8, 8), (8, 8)).copy_from(d);
        m
    };
    let mut g: Vec<DMatrix<f64>> = (1..8)
        .map(|a| {
            let l = o.left(a);
            assemble(&z, &l, &(-&l), &z)
        })
        .collect();
    g.push(assemble(&z, &id, &id, &z));
    g.push(assemble(&id, &z, &z, &(-&id)));
    let defect = gamma_defect(&g);
    if defect > 1e-12 {
        return Err(Error::Construction(format!("gamma anticommutation defect {defect:e}")));
    }
    Ok(g)
}

/// Largest entry of `G_a G_b + G_b G_a - 2 delta_ab I` and of `G_a - G_a^T`.
pub fn gamma_defect(g: &[DMatrix<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, ga) in g.iter().enumerate() {
        let d = ga.nrows();
        worst = worst.max((ga - ga.transpose()).amax());
        for (b, gb) in g.iter().enumerate() {
            let mut ac = ga * gb + gb * ga;
            if a == b {
                ac -= DMatrix::identity(d, d) * 2.0;
            }
            worst = worst.max(ac.amax());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubalgebraKind {
    /// `so(n)`.
    So { n: usize },
    /// `so(q) + so(r)` as diagonal blocks of `so(q + r)`.
    SoPair { q: usize, r: usize },
    /// `u(m)` in `so(2m)`: commutant of the complex structure.
    U { m: usize },
    /// `sp(m) + sp(1)` in `so(4m)`.
    SpSp1 { m: usize },
    /// `spin(9)` in `so(16)`.
    Spin9,
    /// `spin(7)` in `so(8)`, spanned by `L_a L_b`.
    Spin7,
    /// `g_2` in `so(7)`: stabiliser of the associative 3-form.
    G2,
    /// `su(n)` realified in `so(2n)`.
    Su { n: usize },
    /// `su(n-1) + u(1)` in `su(n)`, realified.
    SuU1 { n: usize },
    /// `sp(n)` realified in `so(4n)`.
    Sp { n: usize },
    /// `sp(m)` in `su(2m)`, realified in `so(4m)`.
    SpInSu { m: usize },
    /// `sp(n-1) + sp(1)` in `sp(n)`, realified.
    SpSp1InSp { n: usize },
}

impl SubalgebraKind {
    pub fn dim(self) -> usize {
        match self {
            SubalgebraKind::So { n } => so_dim(n),
            SubalgebraKind::SoPair { q, r } => so_dim(q) + so_dim(r),
            SubalgebraKind::U { m } => m * m,
            SubalgebraKind::SpSp1 { m } => 2 * m * m + m + 3,
            SubalgebraKind::Spin9 => 36,
            SubalgebraKind::Spin7 => 21,
            SubalgebraKind::G2 => 14,
            SubalgebraKind::Su { n } => n * n - 1,
            SubalgebraKind::SuU1 { n } => (n - 1) * (n - 1),
            SubalgebraKind::Sp { n } => 2 * n * n + n,
            SubalgebraKind::SpInSu { m } => 2 * m * m + m,
            SubalgebraKind::SpSp1InSp { n } => 2 * (n - 1) * (n - 1) + (n - 1) + 3,
        }
    }

    /// Order of the real orthogonal algebra containing the subalgebra.
    pub fn ambient_order(self) -> usize {
        match self {
            SubalgebraKind::So { n } => n,
            SubalgebraKind::SoPair { q, r } => q + r,
            SubalgebraKind::U { m } => 2 * m,
            SubalgebraKind::SpSp1 { m } | SubalgebraKind::SpInSu { m } => 4 * m,
            SubalgebraKind::Spin9 => 16,
            SubalgebraKind::Spin7 => 8,
            SubalgebraKind::G2 => 7,
            SubalgebraKind::Su { n } | SubalgebraKind::SuU1 { n } => 2 * n,
            SubalgebraKind::Sp { n } | SubalgebraKind::SpSp1InSp { n } => 4 * n,
        }
    }
}

fn g2_basis() -> Result<Vec<AlgElement>> {
    let o = Octonions::standard()?;
    let so7 = so_basis(7);
    let triples: Vec<(usize, usize, usize)> =
        (0..7).flat_map(|i| ((i + 1)..7).flat_map(move |j| ((j + 1)..7).map(move |k| (i, j, k)))).collect();
    // phi on R^7 = Im O with e_{a+1} at index a.
    let phi = |a: usize, b: usize, c: usize| o.phi(a + 1, b + 1, c + 1);
    let mut sys = DMatrix::zeros(triples.len(), so7.len());
    for (col, x) in so7.iter().enumerate() {
        let a = x.entries();
        for (row, &(i, j, k)) in triples.iter().enumerate() {
            // (A . phi)(e_i, e_j, e_k) = -phi(Ae_i, e_j, e_k) - ...
            let mut v = 0.0;
            for l in 0..7 {
                v -= a[(l, i)] * phi(l, j, k) + a[(l, j)] * phi(i, l, k) + a[(l, k)] * phi(i, j, l);
            }
            sys[(row, col)] = v;
        }
    }
    Ok(null_space(&sys, RANK_TOL)
        .iter()
        .map(|coef| {
            let mut m = DMatrix::zeros(7, 7);
            for (c, x) in so7.iter().enumerate() {
                m += x.entries() * coef[c];
            }
            skew(m)
        })
        .collect())
}

fn products(mats: &[DMatrix<f64>]) -> Vec<AlgElement> {
    let mut out = Vec::new();
    for a in 0..mats.len() {
        for b in (a + 1)..mats.len() {
            let p = &mats[a] * &mats[b];
            out.push(skew((&p - p.transpose()) * 0.5));
        }
    }
    out
}

/// Generators of the requested subalgebra, verified to be independent,
/// bracket-closed and of the advertised dimension.
pub fn subalgebra(kind: SubalgebraKind) -> Result<Vec<AlgElement>> {
    let elems = match kind {
        SubalgebraKind::So { n } => so_basis(n),
        SubalgebraKind::SoPair { q, r } => {
            let mut v = embed_all(&so_basis(q), 0, q + r);
            v.extend(embed_all(&so_basis(r), q, q + r));
            v
        }
        SubalgebraKind::U { m } => commutant_in_so(2 * m, &[complex_structure(m)]),
        SubalgebraKind::SpSp1 { m } => {
            let rs = right_structures(m);
            let mut v = commutant_in_so(4 * m, &rs);
            v.extend(rs.into_iter().map(skew));
            v
        }
        SubalgebraKind::Spin9 => products(&gamma_matrices()?),
        SubalgebraKind::Spin7 => {
            let o = Octonions::standard()?;
            products(&(1..8).map(|a| o.left(a)).collect::<Vec<_>>())
        }
        SubalgebraKind::G2 => g2_basis()?,
        SubalgebraKind::Su { n } => su_realified(n),
        SubalgebraKind::SuU1 { n } => {
            if n < 2 {
                return arg("su(n-1) + u(1) needs n >= 2");
            }
            let d = 2 * n;
            let mut v = embed_all(&su_realified(n - 1), 0, d);
            let mut u1 = DMatrix::zeros(d, d);
            for p in 0..n - 1 {
                u1.view_mut((2 * p, 2 * p), (2, 2)).copy_from(&j2());
            }
            u1.view_mut((2 * n - 2, 2 * n - 2), (2, 2)).copy_from(&(j2() * -((n - 1) as f64)));
            v.push(skew(u1));
            v
        }
        SubalgebraKind::Sp { n } => sp_realified(n),
        SubalgebraKind::SpInSu { m } => commutant_in_so(4 * m, &[complex_structure(2 * m), quaternionic_structure(m)]),
        SubalgebraKind::SpSp1InSp { n } => {
            if n < 2 {
                return arg("sp(n-1) + sp(1) needs n >= 2");
            }
            let d = 4 * n;
            let mut v = embed_all(&sp_realified(n - 1), 0, d);
            v.extend(embed_all(&sp_realified(1), 4 * (n - 1), d));
            v
        }
    };
    verify_generators(&elems, kind.ambient_order(), kind.dim(), &format!("{kind:?}"))?;
    Ok(elems)
}

fn verify_generators(elems: &[AlgElement], order: usize, dim: usize, what: &str) -> Result<()> {
    let coords: Vec<DVector<f64>> = elems.iter().map(AlgElement::coords).collect();
    let r = rank_of(so_dim(order), &coords);
    if elems.len() != dim || r != dim {
        return Err(Error::Construction(format!("{what}: {} generators of rank {r}, expected {dim}", elems.len())));
    }
    let closed = lie_closure(elems, so_dim(order))?;
    if closed.dim() != dim {
        return Err(Error::Construction(format!("{what}: bracket closure has dimension {}", closed.dim())));
    }
    Ok(())
}

/// `G`, `H` and `K_1` for `V_k(F^n)` realified.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub order: usize,
    pub g: Subspace,
    pub h: Subspace,
    pub g_basis: Vec<AlgElement>,
    pub k1: Vec<AlgElement>,
}

impl Ambient {
    pub fn new(field: Field, n: usize, k: usize) -> Result<Self> {
        if k < 1 || k >= n {
            return arg(format!("V_{k}({}^{n}) needs 1 <= k < n", field.symbol()));
        }
        let r = field.real_dim();
        let order = r * n;
        let (g_basis, h_small, k1_small) = match field {
            Field::R => (so_basis(n), so_basis(n - k), so_basis(k)),
            Field::C => {
                let uk = commutant_in_so(2 * k, &[complex_structure(k)]);
                (su_realified(n), su_realified(n - k), uk)
            }
            Field::H => (sp_realified(n), sp_realified(n - k), sp_realified(k)),
        };
        let h_elems = embed_all(&h_small, r * k, order);
        let mut k1 = embed_all(&k1_small, 0, order);
        if field == Field::C {
            // Trace compensation on the last n - k complex coordinates.
            for e in &mut k1 {
                let c = -complex_trace_im(e.entries()) / (n - k) as f64;
                let mut m = e.entries().clone();
                for p in k..n {
                    m.view_mut((2 * p, 2 * p), (2, 2)).copy_from(&(j2() * c));
                }
                *e = skew(m);
            }
        }
        let dim = so_dim(order);
        let coords = |v: &[AlgElement]| v.iter().map(AlgElement::coords).collect::<Vec<_>>();
        let label = format!("so({order})");
        let g = span_of(dim, &coords(&g_basis), RANK_TOL).relabel(label.clone());
        let h = span_of(dim, &coords(&h_elems), RANK_TOL).relabel(label);
        Ok(Self { field, n, k, order, g, h, g_basis, k1 })
    }

    pub fn dim_m(&self) -> usize {
        self.g.dim() - self.h.dim()
    }

    /// m-component of an element of g, in `so(order)` coordinates.
    fn m_part(&self, x: &AlgElement) -> DVector<f64> {
        self.h.residual(&x.coords())
    }
}

/// An action of `L x K` on `V_k(F^n)` by its generators.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub label: String,
    pub ambient: Ambient,
    pub left: Vec<AlgElement>,
    pub right: Vec<AlgElement>,
}

impl ActionSpec {
    pub fn new(
        label: impl Into<String>,
        ambient: Ambient,
        left: Vec<AlgElement>,
        right: Vec<AlgElement>,
    ) -> Result<Self> {
        let label = label.into();
        let order = ambient.order;
        for (side, gens) in [("left", &left), ("right", &right)] {
            if gens.iter().any(|x| x.ambient_dim() != order) {
                return arg(format!("{label}: {side} generators must lie in so({order})"));
            }
            if gens.iter().any(|x| ambient.g.distance(&x.coords()) > 1e-10 * x.norm().max(1.0)) {
                return Err(Error::Construction(format!("{label}: {side} generator outside g")));
            }
            if !gens.is_empty() {
                verify_generators(gens, order, gens.len(), &format!("{label} {side}"))?;
            }
        }
        // The right factor must normalise H.
        let h_elems = liealg::elements_of(&ambient.h, order);
        for eta in &right {
            if ambient.k1.is_empty() || ambient.h.dim() == 0 {
                break;
            }
            for x in &h_elems {
                if ambient.m_part(&eta.lie(x)).norm() > 1e-10 {
                    return Err(Error::Construction(format!("{label}: right generator does not normalise H")));
                }
            }
        }
        Ok(Self { label, ambient, left, right })
    }

    pub fn dim_m(&self) -> usize {
        self.ambient.dim_m()
    }

    /// Orbit tangent vectors at `gH`, pulled back to `o`:
    /// `(Ad_{g^-1} xi)_m` for left and `eta_m` for right generators.
    pub fn orbit_vectors(&self, g: &DMatrix<f64>) -> Vec<DVector<f64>> {
        let gt = g.transpose();
        self.left
            .iter()
            .map(|xi| self.ambient.m_part(&xi.conjugate_by(&gt)))
            .chain(self.right.iter().map(|eta| self.ambient.m_part(eta)))
            .collect()
    }

    /// Seeded random point `exp(Z)`, `Z` a Gaussian combination of a basis of g.
    pub fn sample_point(&self, seed: u64) -> DMatrix<f64> {
        let mut rng = sampling::rng(seed);
        let c = sampling::gaussian_vector(&mut rng, self.ambient.g_basis.len());
        let mut z = DMatrix::zeros(self.ambient.order, self.ambient.order);
        for (x, w) in self.ambient.g_basis.iter().zip(c.iter()) {
            z += x.entries() * *w;
        }
        z.exp()
    }
}

/// Orbit dimension at a seeded random point.
pub fn orbit_dimension(spec: &ActionSpec, seed: u64) -> usize {
    let g = spec.sample_point(seed);
    rank_of(so_dim(spec.ambient.order), &spec.orbit_vectors(&g))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub label: String,
    pub dim_m: usize,
    pub sample_count: usize,
    pub orbit_dims: Vec<usize>,
    pub cohomogeneity: usize,
    pub transitive: bool,
    pub seed: u64,
    /// What the rank computation certifies.
    pub certificate: &'static str,
}

pub const CERTIFICATE: &str = "infinitesimal rank at seeded points; transitivity additionally uses that an open orbit of a compact group in a connected manifold is everything";

pub fn cohomogeneity(spec: &ActionSpec, samples: usize, seed: u64, exec: Exec) -> Result<OrbitReport> {
    if samples < 5 {
        return arg(format!("cohomogeneity needs at least 5 samples, got {samples}"));
    }
    let orbit_dims = exec.map_range(0..samples, |i| orbit_dimension(spec, sampling::derive_seed(seed, i as u64)));
    let top = orbit_dims.iter().copied().max().unwrap_or(0);
    let coh = spec.dim_m() - top.min(spec.dim_m());
    Ok(OrbitReport {
        label: spec.label.clone(),
        dim_m: spec.dim_m(),
        sample_count: samples,
        orbit_dims,
        cohomogeneity: coh,
        transitive: coh == 0,
        seed,
        certificate: CERTIFICATE,
    })
}

/// Expected outcome of a catalogued action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Exactly(usize),
    AtLeast(usize),
}

impl Expectation {
    pub fn holds(self, c: usize) -> bool {
        match self {
            Expectation::Exactly(e) => c == e,
            Expectation::AtLeast(e) => c >= e,
        }
    }
}

/// Catalogued actions with their parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionRow {
    /// `SO(n-1) x SO(k)` on `V_k(R^n)`.
    SoSo { n: usize, k: usize },
    /// `Spin(9) x SO(2)` on `V_2(R^16)`.
    Spin9So2,
    /// `Sp(m)Sp(1) x SO(2)` on `V_2(R^4m)`.
    SpSp1So2 { m: usize },
    /// `U(m) x SO(2)` on `V_2(R^2m)`.
    USo2 { m: usize },
    /// `U(m) x SO(3)` on `V_3(R^2m)`.
    USo3 { m: usize },
    /// `G_2 x SO(3)` on `V_3(R^7)`.
    G2So3,
    /// `Sp(m) x U(2)` on `V_2(C^2m)`.
    SpU2 { m: usize },
    /// `Sp(m) x U(3)` on `V_3(C^2m)`.
    SpU3 { m: usize },
    /// `S(U(n-1) x U(1)) x U(k)` on `V_k(C^n)`.
    SuU1Uk { n: usize, k: usize },
    /// `[Sp(n-1) x Sp(1)] x Sp(k)` on `V_k(H^n)`.
    SpSp1Spk { n: usize, k: usize },
    /// `Spin(7)` alone on `V_k(R^8)`.
    Spin7Left { k: usize },
    /// `G_2` alone on `V_k(R^7)`.
    G2Left { k: usize },
    /// `[SO(q) x SO(n+2-q)] x SO(2)` on `V_2(R^{n+2})`.
    Polar { n: usize, q: usize },
}

pub const ROW_IDS: [&str; 13] = [
    "so-so",
    "spin9-so2",
    "spsp1-so2",
    "u-so2",
    "u-so3",
    "g2-so3",
    "sp-u2",
    "sp-u3",
    "suu1-u",
    "spsp1-sp",
    "spin7",
    "g2",
    "polar",
];

/// Optional overrides for row parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct RowParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub q: Option<usize>,
}

impl ActionRow {
    /// Row by identifier, defaulting to the smallest valid parameters.
    pub fn from_id(id: &str, p: RowParams) -> Result<Self> {
        Ok(match id {
            "so-so" => ActionRow::SoSo { n: p.n.unwrap_or(5), k: p.k.unwrap_or(2) },
            "spin9-so2" => ActionRow::Spin9So2,
            "spsp1-so2" => ActionRow::SpSp1So2 { m: p.m.unwrap_or(2) },
            "u-so2" => ActionRow::USo2 { m: p.m.unwrap_or(2) },
            "u-so3" => ActionRow::USo3 { m: p.m.unwrap_or(3) },
            "g2-so3" => ActionRow::G2So3,
            "sp-u2" => ActionRow::SpU2 { m: p.m.unwrap_or(2) },
            "sp-u3" => ActionRow::SpU3 { m: p.m.unwrap_or(3) },
            "suu1-u" => ActionRow::SuU1Uk { n: p.n.unwrap_or(4), k: p.k.unwrap_or(2) },
            "spsp1-sp" => ActionRow::SpSp1Spk { n: p.n.unwrap_or(4), k: p.k.unwrap_or(2) },
            "spin7" => ActionRow::Spin7Left { k: p.k.unwrap_or(2) },
            "g2" => ActionRow::G2Left { k: p.k.unwrap_or(2) },
            "polar" => ActionRow::Polar { n: p.n.unwrap_or(4), q: p.q.unwrap_or(3) },
            _ => return arg(format!("unknown action row {id:?}; expected one of {}", ROW_IDS.join(", "))),
        })
    }

    /// The ten cohomogeneity-one rows at their smallest parameters.
    pub fn table() -> Vec<ActionRow> {
        ["so-so", "spin9-so2", "spsp1-so2", "u-so2", "u-so3", "g2-so3", "sp-u2", "sp-u3", "suu1-u", "spsp1-sp"]
            .iter()
            .map(|id| ActionRow::from_id(id, RowParams::default()).expect("catalogued id"))
            .collect()
    }

    /// Left-only actions that are transitive.
    pub fn transitive() -> Vec<ActionRow> {
        vec![ActionRow::Spin7Left { k: 2 }, ActionRow::Spin7Left { k: 3 }, ActionRow::G2Left { k: 2 }]
    }

    /// Left-only actions of cohomogeneity at least two by dimension count.
    pub fn dimension_counting() -> Vec<ActionRow> {
        vec![ActionRow::Spin7Left { k: 5 }, ActionRow::Spin7Left { k: 6 }, ActionRow::G2Left { k: 5 }]
    }

    pub fn expectation(self) -> Expectation {
        match self {
            ActionRow::Spin7Left { k } | ActionRow::G2Left { k } if k <= 3 => Expectation::Exactly(0),
            ActionRow::Spin7Left { .. } | ActionRow::G2Left { .. } => Expectation::AtLeast(2),
            ActionRow::Polar { .. } => Expectation::Exactly(2),
            _ => Expectation::Exactly(1),
        }
    }

    pub fn label(self) -> String {
        match self {
            ActionRow::SoSo { n, k } => format!("SO({})xSO({k}) on V{k}(R^{n})", n - 1),
            ActionRow::Spin9So2 => "Spin(9)xSO(2) on V2(R^16)".into(),
            ActionRow::SpSp1So2 { m } => format!("Sp({m})Sp(1)xSO(2) on V2(R^{})", 4 * m),
            ActionRow::USo2 { m } => format!("U({m})xSO(2) on V2(R^{})", 2 * m),
            ActionRow::USo3 { m } => format!("U({m})xSO(3) on V3(R^{})", 2 * m),
            ActionRow::G2So3 => "G2xSO(3) on V3(R^7)".into(),
            ActionRow::SpU2 { m } => format!("Sp({m})xU(2) on V2(C^{})", 2 * m),
            ActionRow::SpU3 { m } => format!("Sp({m})xU(3) on V3(C^{})", 2 * m),
            ActionRow::SuU1Uk { n, k } => format!("S(U({})xU(1))xU({k}) on V{k}(C^{n})", n - 1),
            ActionRow::SpSp1Spk { n, k } => format!("[Sp({})xSp(1)]xSp({k}) on V{k}(H^{n})", n - 1),
            ActionRow::Spin7Left { k } => format!("Spin(7) on V{k}(R^8)"),
            ActionRow::G2Left { k } => format!("G2 on V{k}(R^7)"),
            ActionRow::Polar { n, q } => format!("[SO({q})xSO({})]xSO(2) on V2(R^{})", n + 2 - q, n + 2),
        }
    }
}

/// Assembles the generators of a catalogued action.
pub fn build_action(row: ActionRow) -> Result<ActionSpec> {
    let label = row.label();
    let (ambient, left, with_right) = match row {
        ActionRow::SoSo { n, k } => {
            if n < 3 || k < 1 || k >= n {
                return arg(format!("{label}: needs 1 <= k < n, n >= 3"));
            }
            // SO(n-1) fixing e_1.
            (Ambient::new(Field::R, n, k)?, embed_all(&subalgebra(SubalgebraKind::So { n: n - 1 })?, 1, n), true)
        }
        ActionRow::Spin9So2 => (Ambient::new(Field::R, 16, 2)?, subalgebra(SubalgebraKind::Spin9)?, true),
        ActionRow::SpSp1So2 { m } => {
            if m < 1 {
                return arg("Sp(m)Sp(1) needs m >= 1");
            }
            (Ambient::new(Field::R, 4 * m, 2)?, subalgebra(SubalgebraKind::SpSp1 { m })?, true)
        }
        ActionRow::USo2 { m } | ActionRow::USo3 { m } => {
            let k = if matches!(row, ActionRow::USo2 { .. }) { 2 } else { 3 };
            if 2 * m <= k {
                return arg(format!("{label}: needs 2m > {k}"));
            }
            (Ambient::new(Field::R, 2 * m, k)?, subalgebra(SubalgebraKind::U { m })?, true)
        }
        ActionRow::G2So3 => (Ambient::new(Field::R, 7, 3)?, subalgebra(SubalgebraKind::G2)?, true),
        ActionRow::SpU2 { m } | ActionRow::SpU3 { m } => {
            let k = if matches!(row, ActionRow::SpU2 { .. }) { 2 } else { 3 };
            if 2 * m <= k {
                return arg(format!("{label}: needs 2m > {k}"));
            }
            (Ambient::new(Field::C, 2 * m, k)?, subalgebra(SubalgebraKind::SpInSu { m })?, true)
        }
        ActionRow::SuU1Uk { n, k } => {
            if n < 3 || k < 1 || k >= n {
                return arg(format!("{label}: needs 1 <= k < n, n >= 3"));
            }
            (Ambient::new(Field::C, n, k)?, subalgebra(SubalgebraKind::SuU1 { n })?, true)
        }
        ActionRow::SpSp1Spk { n, k } => {
            if n < 3 || k < 1 || k >= n {
                return arg(format!("{label}: needs 1 <= k < n, n >= 3"));
            }
            (Ambient::new(Field::H, n, k)?, subalgebra(SubalgebraKind::SpSp1InSp { n })?, true)
        }
        ActionRow::Spin7Left { k } => {
            if !(1..8).contains(&k) {
                return arg(format!("{label}: needs 1 <= k < 8"));
            }
            (Ambient::new(Field::R, 8, k)?, subalgebra(SubalgebraKind::Spin7)?, false)
        }
        ActionRow::G2Left { k } => {
            if !(1..7).contains(&k) {
                return arg(format!("{label}: needs 1 <= k < 7"));
            }
            (Ambient::new(Field::R, 7, k)?, subalgebra(SubalgebraKind::G2)?, false)
        }
        ActionRow::Polar { n, q } => {
            if n < 2 || q < 2 || q > n {
                return arg(format!("{label}: needs 2 <= q <= n"));
            }
            (Ambient::new(Field::R, n + 2, 2)?, polar_blocks(n, q), true)
        }
    };
    let right = if with_right { ambient.k1.clone() } else { Vec::new() };
    ActionSpec::new(label, ambient, left, right)
}

/// `so(B1) + so(B2)` with `B1 = {1,2} u {5..q+2}`, `B2 = {3,4} u {q+3..n+2}`
/// (1-based), so that `a = span{X_13, X_24}` is a section through `o`.
fn polar_blocks(n: usize, q: usize) -> Vec<AlgElement> {
    let order = n + 2;
    let b1: Vec<usize> = [0, 1].into_iter().chain(4..q + 2).collect();
    let b2: Vec<usize> = [2, 3].into_iter().chain(q + 2..order).collect();
    let mut out = Vec::new();
    for b in [&b1, &b2] {
        for (x, &i) in b.iter().enumerate() {
            for &j in &b[x + 1..] {
                out.push(liealg::x(i.min(j), i.max(j), order));
            }
        }
    }
    out
}

/// `(s, t)` grid for section points `exp(s X_13 + t X_24) o`, away from the
/// walls `s = 0`, `t = 0`, `s = +-t` and their `pi/2` translates.
pub fn section_grid(count: usize) -> Vec<(f64, f64)> {
    let cols = (count as f64).sqrt().ceil() as usize;
    (0..count)
        .map(|i| {
            let (a, b) = (i % cols, i / cols);
            (0.17 + 0.29 * a as f64, 0.23 + 0.31 * b as f64 + 0.013 * a as f64)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarityReport {
    pub label: String,
    pub grid: Vec<(f64, f64)>,
    pub orbit_dims: Vec<usize>,
    /// Indices of grid points where orbit dim + 2 < dim M.
    pub non_generic: Vec<usize>,
    pub cohomogeneity: usize,
    /// Largest `|<orbit vector, Y>|`, `Y` in `{X_13, X_24}`.
    pub orthogonality_residual: f64,
    /// Largest distance of `V` from the orbit tangent span.
    pub vertical_residual: f64,
    pub at_origin_residual: f64,
    pub passed: bool,
}

/// Verifies that `a = span{X_13, X_24}` meets the orbits of the polar row
/// orthogonally along the section and that the cohomogeneity is two.
pub fn polarity_check(spec: &ActionSpec, space: &StiefelSpace, grid: &[(f64, f64)]) -> Result<PolarityReport> {
    let amb = &spec.ambient;
    if amb.field != Field::R || amb.k != 2 || amb.n != space.order() {
        return arg(format!("{} is not an action on V2(R^{})", spec.label, space.order()));
    }
    let e13 = space.e(1, 3);
    let e24 = space.e(2, 4);
    let v = space.e(1, 2);
    let dim_m = space.dim_m();
    let point = |s: f64, t: f64| -> (f64, f64, usize) {
        let x = &(&space.tangent(&e13) * s) + &(&space.tangent(&e24) * t);
        let g_inv = (-&x).exp();
        let vecs: Vec<DVector<f64>> = spec
            .left
            .iter()
            .map(|xi| space.m_coords(&xi.conjugate_by(&g_inv)))
            .chain(spec.right.iter().map(|eta| space.m_coords(eta)))
            .collect();
        let orth = vecs.iter().map(|w| w.dot(&e13).abs().max(w.dot(&e24).abs())).fold(0.0, f64::max);
        let span = span_of(dim_m, &vecs, RANK_TOL);
        (orth, span.distance(&v), span.dim())
    };
    let (at_origin, _, _) = point(0.0, 0.0);
    let mut orthogonality: f64 = at_origin;
    let mut vertical: f64 = 0.0;
    let mut orbit_dims = Vec::with_capacity(grid.len());
    let mut non_generic = Vec::new();
    for (i, &(s, t)) in grid.iter().enumerate() {
        let (o, vd, dim) = point(s, t);
        orthogonality = orthogonality.max(o);
        vertical = vertical.max(vd);
        if dim + 2 < dim_m {
            non_generic.push(i);
        }
        orbit_dims.push(dim);
    }
    let top = orbit_dims.iter().copied().max().unwrap_or(0);
    let coh = dim_m - top.min(dim_m);
    Ok(PolarityReport {
        label: spec.label.clone(),
        grid: grid.to_vec(),
        orbit_dims,
        non_generic,
        cohomogeneity: coh,
        orthogonality_residual: orthogonality,
        vertical_residual: vertical,
        at_origin_residual: at_origin,
        passed: orthogonality <= POLAR_TOL && vertical <= POLAR_TOL && coh == 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::build_space;

    #[test]
    fn small_subalgebra_dimensions() {
        assert_eq!(subalgebra(SubalgebraKind::U { m: 3 }).unwrap().len(), 9);
        assert_eq!(subalgebra(SubalgebraKind::G2).unwrap().len(), 14);
        assert_eq!(subalgebra(SubalgebraKind::Spin7).unwrap().len(), 21);
        assert_eq!(subalgebra(SubalgebraKind::SpSp1 { m: 2 }).unwrap().len(), 13);
        assert_eq!(subalgebra(SubalgebraKind::SpInSu { m: 2 }).unwrap().len(), 10);
        assert_eq!(subalgebra(SubalgebraKind::SuU1 { n: 3 }).unwrap().len(), 4);
    }

    #[test]
    fn structures_behave() {
        let j = quaternionic_structure(2);
        let i = complex_structure(4);
        let id = DMatrix::<f64>::identity(8, 8);
        assert!((&j * &j + &id).amax() < 1e-15);
        assert!((&i * &j + &j * &i).amax() < 1e-15);
        let r = right_structures(1);
        assert!((&r[0] * &r[1] - &r[2]).amax() < 1e-15 || (&r[0] * &r[1] + &r[2]).amax() < 1e-15);
        for a in &r {
            assert!((a * a + DMatrix::<f64>::identity(4, 4)).amax() < 1e-15);
        }
    }

    #[test]
    fn u_commutant_matches_explicit_basis() {
        // u(m) = su(m) + R i, compared as subspaces of so(2m).
        let m = 3;
        let dim = so_dim(2 * m);
        let comm: Vec<_> = commutant_in_so(2 * m, &[complex_structure(m)]).iter().map(AlgElement::coords).collect();
        let mut explicit: Vec<_> = su_realified(m).iter().map(AlgElement::coords).collect();
        explicit.push(skew(complex_structure(m)).coords());
        assert!(span_of(dim, &comm, RANK_TOL).same_as(&span_of(dim, &explicit, RANK_TOL), 1e-10));
    }

    #[test]
    fn sp_in_su_is_traceless() {
        for x in subalgebra(SubalgebraKind::SpInSu { m: 2 }).unwrap() {
            assert!(complex_trace_im(x.entries()).abs() < 1e-12);
        }
    }

    #[test]
    fn ambient_dimensions() {
        assert_eq!(Ambient::new(Field::R, 5, 2).unwrap().dim_m(), 7);
        assert_eq!(Ambient::new(Field::C, 4, 2).unwrap().dim_m(), 12);
        assert_eq!(Ambient::new(Field::H, 4, 2).unwrap().dim_m(), 26);
        assert!(Ambient::new(Field::R, 3, 3).is_err());
    }

    #[test]
    fn first_row_orbit_dimension() {
        let spec = build_action(ActionRow::SoSo { n: 5, k: 2 }).unwrap();
        assert_eq!(spec.left.len(), 6);
        assert_eq!(spec.right.len(), 1);
        assert_eq!(spec.dim_m(), 7);
        assert_eq!(orbit_dimension(&spec, 1), 6);
    }

    #[test]
    fn empty_spec_has_point_orbits() {
        let spec = ActionSpec::new("trivial", Ambient::new(Field::R, 4, 2).unwrap(), vec![], vec![]).unwrap();
        assert_eq!(orbit_dimension(&spec, 3), 0);
        assert!(cohomogeneity(&spec, 4, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn g2_transitive_on_v2() {
        let spec = build_action(ActionRow::G2Left { k: 2 }).unwrap();
        assert_eq!(orbit_dimension(&spec, 5), 11);
    }

    #[test]
    fn polar_at_origin_and_grid() {
        let space = build_space(4).unwrap();
        let spec = build_action(ActionRow::Polar { n: 4, q: 3 }).unwrap();
        let r = polarity_check(&spec, &space, &section_grid(20)).unwrap();
        assert!(r.at_origin_residual < 1e-14);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn row_parsing() {
        assert_eq!(ActionRow::from_id("u-so3", RowParams::default()).unwrap(), ActionRow::USo3 { m: 3 });
        assert!(ActionRow::from_id("nope", RowParams::default()).is_err());
        assert_eq!(ActionRow::table().len(), 10);
    }
}
