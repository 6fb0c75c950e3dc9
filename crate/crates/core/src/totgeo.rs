//! Totally geodesic subspaces of m: the candidate catalog, reflective
//! fixed spaces, Tojo's criterion, negative controls and the horizontality
//! transport check for horizontal candidates.
//!
//! Tojo's criterion: `s` is the tangent space of a totally geodesic
//! submanifold iff `exp(t S) s` is R-invariant for all `X` in `s` and all `t`,
//! where `S = -nabla X*` acts on m as `Y -> -1/2 [X, Y]_m`. It is checked at
//! sampled `(X, t)` together with an exact first-order screen.

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::curvature::{CurvatureTensor, SpectralData, CLUSTER_GAP};
use crate::error::{arg, Error, Result};
use crate::exec::Exec;
use crate::homspace::{apply_j, nabla_operator, StiefelSpace, MEMBERSHIP_TOL};
use crate::liealg::{self, null_space_abs, span_of, AlgElement, Subspace, RANK_TOL};
use crate::sampling;

/// Residual at or below which a candidate passes.
pub const PASS_TOL: f64 = 1e-8;
/// Residual at or above which a candidate is classified as failing.
pub const FAIL_THRESHOLD: f64 = 1e-3;
/// Default transport times; the checker also uses their negatives and 0.
pub const DEFAULT_T_SAMPLES: [f64; 5] = [0.1, 0.3, 0.7, 1.1, 1.5];
/// Residual bound for the horizontality transport check.
pub const TRANSPORT_TOL: f64 = 1e-9;

/// A candidate tangent space `s` of a totally geodesic submanifold through `o`.
#[derive(Clone, Debug)]
pub struct TgCandidate {
    label: String,
    subspace: Subspace,
    expected_dim: usize,
}

impl TgCandidate {
    fn new(label: String, subspace: Subspace, expected_dim: usize) -> Result<Self> {
        if subspace.dim() != expected_dim {
            return Err(Error::Construction(format!(
                "{label}: span has dimension {}, expected {expected_dim}",
                subspace.dim()
            )));
        }
        Ok(Self { label, subspace, expected_dim })
    }

    /// Wraps an arbitrary subspace of m, e.g. the span of a single vector.
    pub fn custom(label: impl Into<String>, subspace: Subspace) -> Self {
        let expected_dim = subspace.dim();
        Self { label: label.into(), subspace, expected_dim }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn expected_dim(&self) -> usize {
        self.expected_dim
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

impl Serialize for TgCandidate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: Vec<Vec<f64>> = self.subspace.basis().iter().map(|v| v.iter().copied().collect()).collect();
        let mut st = s.serialize_struct("TgCandidate", 3)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("expected_dim", &self.expected_dim)?;
        st.serialize_field("basis", &basis)?;
        st.end()
    }
}

fn m_label(space: &StiefelSpace) -> String {
    format!("m of StiefelSpace({})", space.n())
}

fn span_in_m(space: &StiefelSpace, vecs: &[DVector<f64>]) -> Subspace {
    span_of(space.dim_m(), vecs, RANK_TOL).relabel(m_label(space))
}

/// Tangent space of `V_2(R^{p'})`: `span{X_12, X_1j, X_2j : 3 <= j <= p'}`.
pub fn candidate_stiefel(space: &StiefelSpace, p_prime: usize) -> Result<TgCandidate> {
    let n = space.n();
    if !(3..=n + 1).contains(&p_prime) {
        return arg(format!("stiefel:{p_prime} needs 3 <= p' <= {}", n + 1));
    }
    let mut vecs = vec![space.e(1, 2)];
    vecs.extend((3..=p_prime).map(|j| space.e(1, j)));
    vecs.extend((3..=p_prime).map(|j| space.e(2, j)));
    TgCandidate::new(format!("stiefel:{p_prime}"), span_in_m(space, &vecs), 2 * (p_prime - 2) + 1)
}

/// Tangent space of `S^p x S^q`:
/// `span{X_13, ..., X_1,p+2} + span{X_2,p+3, ..., X_2,p+2+q}`.
pub fn candidate_spheres(space: &StiefelSpace, p: usize, q: usize) -> Result<TgCandidate> {
    let n = space.n();
    if p < 1 || p + q > n {
        return arg(format!("spheres:{p},{q} needs p >= 1 and p + q <= {n}"));
    }
    let mut vecs: Vec<_> = (3..=p + 2).map(|j| space.e(1, j)).collect();
    vecs.extend((p + 3..=p + 2 + q).map(|j| space.e(2, j)));
    TgCandidate::new(format!("spheres:{p},{q}"), span_in_m(space, &vecs), p + q)
}

/// Hopf-Berger sphere: `span{X_12} + span{(X_1,2i-1 + X_2,2i)/sqrt 2,
/// (X_2,2i-1 - X_1,2i)/sqrt 2 : 2 <= i <= k}`; without the vertical part only
/// the totally real half `span{(X_1,2i-1 + X_2,2i)/sqrt 2}` is kept.
pub fn candidate_hopf_berger(space: &StiefelSpace, k: usize, with_vertical: bool) -> Result<TgCandidate> {
    let n = space.n();
    let kmax = n / 2 + 1;
    let name = if with_vertical { "hopf" } else { "hopf-real" };
    if !(2..=kmax).contains(&k) {
        return arg(format!("{name}:{k} needs 2 <= k <= {kmax}"));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut vecs = Vec::new();
    if with_vertical {
        vecs.push(space.e(1, 2));
    }
    for i in 2..=k {
        vecs.push((space.e(1, 2 * i - 1) + space.e(2, 2 * i)) * s);
        if with_vertical {
            vecs.push((space.e(2, 2 * i - 1) - space.e(1, 2 * i)) * s);
        }
    }
    let dim = if with_vertical { 2 * k - 1 } else { k - 1 };
    TgCandidate::new(format!("{name}:{k}"), span_in_m(space, &vecs), dim)
}

/// Involutions whose fixed point components are reflective submanifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectiveCase {
    /// `g = diag(I_p, -I_q)`, `p + q = n + 2`, `3 <= p <= n + 1`.
    Block { p: usize },
    /// `g = diag(-1, 1, I_p, -I_q)`, `p + q = n`, `1 <= p <= n`.
    Mixed { p: usize },
    /// Conjugation by `diag(J_1, J')` with `J'` the complex structure that
    /// pairs coordinates `(3,4), (5,6), ...`; `n` even.
    Complex,
}

/// Matrix of `Ad_g` on m-coordinates, after checking that `g` normalises `H`.
pub fn ad_on_m(space: &StiefelSpace, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let order = space.order();
    if g.nrows() != order || g.ncols() != order {
        return arg(format!("group element must be {order} x {order}"));
    }
    if (g.transpose() * g - DMatrix::identity(order, order)).amax() > 1e-12 {
        return arg("group element is not orthogonal");
    }
    for hc in space.h().basis() {
        let img = AlgElement::from_coords(order, hc)?.conjugate_by(g);
        if space.m_coords(&img).norm() > MEMBERSHIP_TOL {
            return Err(Error::Construction("element does not normalise H".into()));
        }
    }
    let d = space.dim_m();
    let mut a = DMatrix::zeros(d, d);
    for (c, e) in space.m_basis().iter().enumerate() {
        a.column_mut(c).copy_from(&space.m_coords(&e.conjugate_by(g)));
    }
    Ok(a)
}

/// `+1` eigenspace of an involutive `Ad_g` on m.
pub fn fixed_space_of(space: &StiefelSpace, g: &DMatrix<f64>, label: impl Into<String>) -> Result<TgCandidate> {
    let a = ad_on_m(space, g)?;
    let d = space.dim_m();
    let id = DMatrix::identity(d, d);
    if (&a * &a - &id).amax() > 1e-12 {
        return Err(Error::Construction("Ad_g is not an involution on m".into()));
    }
    let fixed = null_space_abs(&(a - id), RANK_TOL);
    let sub = span_in_m(space, &fixed);
    Ok(TgCandidate::custom(label, sub))
}

/// The involution used for a reflective case.
pub fn reflective_involution(space: &StiefelSpace, case: ReflectiveCase) -> Result<DMatrix<f64>> {
    let n = space.n();
    let order = space.order();
    let mut g = DMatrix::zeros(order, order);
    match case {
        ReflectiveCase::Block { p } => {
            if !(3..=n + 1).contains(&p) {
                return arg(format!("reflective:1,{p} needs 3 <= p <= {}", n + 1));
            }
            for i in 0..order {
                g[(i, i)] = if i < p { 1.0 } else { -1.0 };
            }
        }
        ReflectiveCase::Mixed { p } => {
            if !(1..=n).contains(&p) {
                return arg(format!("reflective:2,{p} needs 1 <= p <= {n}"));
            }
            g[(0, 0)] = -1.0;
            g[(1, 1)] = 1.0;
            for i in 2..order {
                g[(i, i)] = if i < p + 2 { 1.0 } else { -1.0 };
            }
        }
        ReflectiveCase::Complex => {
            if !n.is_multiple_of(2) {
                return arg(format!("reflective:3 needs n even, got {n}"));
            }
            for b in 0..order / 2 {
                g[(2 * b, 2 * b + 1)] = -1.0;
                g[(2 * b + 1, 2 * b)] = 1.0;
            }
        }
    }
    Ok(g)
}

pub fn reflective_fixed_space(space: &StiefelSpace, case: ReflectiveCase) -> Result<TgCandidate> {
    let g = reflective_involution(space, case)?;
    let (label, dim) = match case {
        ReflectiveCase::Block { p } => (format!("reflective:1,{p}"), 2 * (p - 2) + 1),
        ReflectiveCase::Mixed { p } => (format!("reflective:2,{p}"), space.n()),
        ReflectiveCase::Complex => ("reflective:3".to_string(), space.n() + 1),
    };
    let c = fixed_space_of(space, &g, label.clone())?;
    TgCandidate::new(label, c.subspace, dim)
}

/// `Ad` of the permutation swapping the first two coordinates, on m.
/// It carries the mixed-case fixed space onto `spheres:p,n-p`.
pub fn swap_12_on_m(space: &StiefelSpace) -> DMatrix<f64> {
    let order = space.order();
    let mut g = DMatrix::identity(order, order);
    g.swap_rows(0, 1);
    let d = space.dim_m();
    let mut a = DMatrix::zeros(d, d);
    for (c, e) in space.m_basis().iter().enumerate() {
        a.column_mut(c).copy_from(&space.m_coords(&e.conjugate_by(&g)));
    }
    a
}

/// Every catalog candidate for this `n`, in a fixed order.
pub fn catalog(space: &StiefelSpace) -> Result<Vec<TgCandidate>> {
    let n = space.n();
    let mut out = Vec::new();
    for p in 3..=n + 1 {
        out.push(candidate_stiefel(space, p)?);
    }
    for p in 1..=n {
        for q in 0..=(n - p) {
            out.push(candidate_spheres(space, p, q)?);
        }
    }
    for k in 2..=n / 2 + 1 {
        out.push(candidate_hopf_berger(space, k, true)?);
        out.push(candidate_hopf_berger(space, k, false)?);
    }
    for p in 3..=n + 1 {
        out.push(reflective_fixed_space(space, ReflectiveCase::Block { p })?);
    }
    for p in 1..=n {
        out.push(reflective_fixed_space(space, ReflectiveCase::Mixed { p })?);
    }
    if n.is_multiple_of(2) {
        out.push(reflective_fixed_space(space, ReflectiveCase::Complex)?);
    }
    Ok(out)
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| Error::Argument(format!("bad integer {x:?}")))).collect()
}

/// Candidates named by a label: `all`, `stiefel:P`, `spheres:P,Q`, `hopf:K`,
/// `hopf-real:K`, `reflective:1,P`, `reflective:2,P` or `reflective:3`.
pub fn parse_candidates(space: &StiefelSpace, label: &str) -> Result<Vec<TgCandidate>> {
    if label == "all" {
        return catalog(space);
    }
    let (kind, rest) = label.split_once(':').ok_or_else(|| Error::Argument(format!("unknown candidate {label:?}")))?;
    let nums = parse_usizes(rest)?;
    let one = match (kind, nums.as_slice()) {
        ("stiefel", [p]) => candidate_stiefel(space, *p)?,
        ("spheres", [p, q]) => candidate_spheres(space, *p, *q)?,
        ("hopf", [k]) => candidate_hopf_berger(space, *k, true)?,
        ("hopf-real", [k]) => candidate_hopf_berger(space, *k, false)?,
        ("reflective", [1, p]) => reflective_fixed_space(space, ReflectiveCase::Block { p: *p })?,
        ("reflective", [2, p]) => reflective_fixed_space(space, ReflectiveCase::Mixed { p: *p })?,
        ("reflective", [3]) => reflective_fixed_space(space, ReflectiveCase::Complex)?,
        _ => return arg(format!("unknown candidate {label:?}")),
    };
    Ok(vec![one])
}

/// Rotates the candidate by `exp(epsilon K)` for a seeded Gaussian skew `K`
/// on m with `|K|_F^2 = dim m`.
pub fn perturb(candidate: &TgCandidate, epsilon: f64, seed: u64) -> Result<TgCandidate> {
    if !(0.0..1.0).contains(&epsilon) {
        return arg(format!("epsilon must lie in [0, 1), got {epsilon}"));
    }
    let d = candidate.subspace.ambient_dim();
    let k = sampling::skew_matrix(&mut sampling::rng(seed), d);
    let rot = (k * epsilon).exp();
    let sub = candidate.subspace.map(&rot);
    TgCandidate::new(format!("{}:perturbed", candidate.label), sub, candidate.expected_dim)
}

/// `count` seeded perturbations cycling through catalog candidates of
/// dimension at least 2 (lines are always totally geodesic).
pub fn perturbation_controls(
    catalog: &[TgCandidate],
    count: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<TgCandidate>> {
    let pool: Vec<&TgCandidate> = catalog.iter().filter(|c| c.dim() >= 2).collect();
    if pool.is_empty() {
        return arg("no candidate of dimension >= 2 to perturb");
    }
    (0..count).map(|i| perturb(pool[i % pool.len()], epsilon, sampling::derive_seed(seed, i as u64))).collect()
}

#[derive(Clone, Debug)]
pub struct TojoOptions {
    /// Transport times; negatives and 0 are added by the checker.
    pub t_samples: Vec<f64>,
    /// Directions per candidate; `None` means `2 dim s`.
    pub dir_samples: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    /// Stop once a residual reaches this value (negative controls only).
    pub stop_at: Option<f64>,
    pub exec: Exec,
}

impl Default for TojoOptions {
    fn default() -> Self {
        Self {
            t_samples: DEFAULT_T_SAMPLES.to_vec(),
            dir_samples: None,
            seed: 0,
            tol: PASS_TOL,
            stop_at: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TojoReport {
    pub candidate: TgCandidate,
    pub t_samples: Vec<f64>,
    pub directions_tested: usize,
    pub max_residual: f64,
    /// `R_X`-invariance plus `[S, pi_lambda]`-invariance of `s` at `t = 0`.
    /// Reported separately: a full pass should imply it.
    pub first_order_residual: f64,
    pub first_order_pass: bool,
    /// Full criterion: `max_residual <= tol`.
    pub passed: bool,
}

/// Reusable checker holding the curvature tensor of one space.
pub struct TojoChecker<'a> {
    space: &'a StiefelSpace,
    tensor: CurvatureTensor,
}

struct DirectionResult {
    residual: f64,
    first_order: f64,
    stopped: bool,
}

impl<'a> TojoChecker<'a> {
    pub fn new(space: &'a StiefelSpace, exec: Exec) -> Self {
        Self { space, tensor: CurvatureTensor::new(space, exec) }
    }

    pub fn space(&self) -> &StiefelSpace {
        self.space
    }

    pub fn tensor(&self) -> &CurvatureTensor {
        &self.tensor
    }

    /// `R_X = R(., X) X` from the tensor.
    fn jacobi(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.tensor.dim();
        let mut t = DMatrix::zeros(d, d);
        for c in 0..d {
            for b in 0..d {
                if x[b] == 0.0 {
                    continue;
                }
                for e2 in 0..d {
                    let w = x[b] * x[e2];
                    if w == 0.0 {
                        continue;
                    }
                    for e in 0..d {
                        t[(e, c)] += w * self.tensor.get(c, b, e2, e);
                    }
                }
            }
        }
        t
    }

    /// Largest `|P_perp M u|` over basis columns `u`.
    fn leak(basis: &DMatrix<f64>, proj_perp: &DMatrix<f64>, op: &DMatrix<f64>) -> f64 {
        let img = proj_perp * (op * basis);
        img.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Exact first-order screen along `X`: `R_X s ⊆ s` and
    /// `[S, pi_lambda] s ⊆ s` for every eigenprojection of `R_X`.
    fn first_order(
        &self,
        basis: &DMatrix<f64>,
        proj_perp: &DMatrix<f64>,
        x: &DVector<f64>,
        s_op: &DMatrix<f64>,
    ) -> f64 {
        let rx = self.jacobi(x);
        let sym = (&rx + rx.transpose()) * 0.5;
        let mut worst = Self::leak(basis, proj_perp, &sym);
        let spec = SpectralData::clustered(&sym, CLUSTER_GAP, "m");
        for i in 0..spec.pairs().len() {
            let pi = spec.projection(i);
            let comm = s_op * &pi - &pi * s_op;
            worst = worst.max(Self::leak(basis, proj_perp, &comm));
        }
        worst
    }

    fn direction(
        &self,
        basis: &DMatrix<f64>,
        proj_perp: &DMatrix<f64>,
        x: &DVector<f64>,
        ts: &[f64],
        stop_at: Option<f64>,
    ) -> DirectionResult {
        let s_op = -nabla_operator(self.space, x).expect("direction lies in m");
        let first_order = self.first_order(basis, proj_perp, x, &s_op);
        let mut residual: f64 = 0.0;
        for &t in ts {
            let phi = (&s_op * t).exp();
            let moved = &phi * basis;
            residual = residual.max(self.tensor.invariance_defect(&moved));
            if stop_at.is_some_and(|s| residual >= s) {
                return DirectionResult { residual, first_order, stopped: true };
            }
        }
        DirectionResult { residual, first_order, stopped: false }
    }

    pub fn check(&self, candidate: &TgCandidate, opts: &TojoOptions) -> Result<TojoReport> {
        let sub = candidate.subspace();
        let d = self.space.dim_m();
        if sub.ambient_dim() != d {
            return arg(format!("candidate lives in dimension {}, m has {d}", sub.ambient_dim()));
        }
        if opts.t_samples.is_empty() {
            return arg("t_samples must be nonempty");
        }
        let k = sub.dim();
        let dirs = opts.dir_samples.unwrap_or(2 * k);
        if dirs < k {
            return arg(format!("dir_samples {dirs} below dim s = {k}"));
        }
        let mut ts: Vec<f64> = std::iter::once(0.0).chain(opts.t_samples.iter().flat_map(|&t| [t, -t])).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        if k == 0 {
            return Ok(TojoReport {
                candidate: candidate.clone(),
                t_samples: ts,
                directions_tested: 0,
                max_residual: 0.0,
                first_order_residual: 0.0,
                first_order_pass: true,
                passed: true,
            });
        }
        let basis = sub.basis_matrix();
        let proj_perp = DMatrix::identity(d, d) - sub.projector();
        let directions: Vec<DVector<f64>> = (0..dirs)
            .map(|i| {
                let c = sampling::unit_vector(&mut sampling::derived(opts.seed, i as u64), k);
                &basis * c
            })
            .collect();

        let results: Vec<DirectionResult> = if opts.stop_at.is_some() {
            let mut out = Vec::new();
            for x in &directions {
                let r = self.direction(&basis, &proj_perp, x, &ts, opts.stop_at);
                let stop = r.stopped;
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        } else {
            opts.exec.map(&directions, |x| self.direction(&basis, &proj_perp, x, &ts, None))
        };
        let max_residual = results.iter().map(|r| r.residual).fold(0.0, f64::max);
        let first_order_residual = results.iter().map(|r| r.first_order).fold(0.0, f64::max);
        let first_order_pass = first_order_residual <= opts.tol;
        Ok(TojoReport {
            candidate: candidate.clone(),
            t_samples: ts,
            directions_tested: results.len(),
            max_residual,
            first_order_residual,
            first_order_pass,
            passed: max_residual <= opts.tol,
        })
    }

    /// Checks many candidates; output order follows input order.
    pub fn check_all(&self, candidates: &[TgCandidate], opts: &TojoOptions) -> Result<Vec<TojoReport>> {
        let inner = TojoOptions { exec: Exec::Sequential, ..opts.clone() };
        opts.exec.map(candidates, |c| self.check(c, &inner)).into_iter().collect()
    }
}

/// One-shot Tojo check.
pub fn tojo_check(
    space: &StiefelSpace,
    candidate: &TgCandidate,
    t_samples: &[f64],
    dir_samples: usize,
    seed: u64,
) -> Result<TojoReport> {
    let opts =
        TojoOptions { t_samples: t_samples.to_vec(), dir_samples: Some(dir_samples), seed, ..Default::default() };
    TojoChecker::new(space, opts.exec).check(candidate, &opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub label: String,
    pub t_samples: Vec<f64>,
    /// Largest distance of the transported vector from `span{V, JY}`.
    pub plane_residual: f64,
    /// Largest `|<w, u>|` over basis vectors `u` of `s`.
    pub orthogonality_residual: f64,
    pub passed: bool,
}

/// Transports the vertical vector back along the geodesic `exp(tY) o`,
/// `w(t) = exp(t nabla_Y) (Ad_{exp(-tY)} V)_m`, and checks that `w(t)`
/// stays in `span{V, JY}` and orthogonal to `s`.
pub fn horizontality_transport(
    space: &StiefelSpace,
    candidate: &TgCandidate,
    y: &DVector<f64>,
    t_samples: &[f64],
) -> Result<TransportReport> {
    let sub = candidate.subspace();
    for u in sub.basis() {
        if u.len() != space.dim_m() || u[0].abs() > MEMBERSHIP_TOL {
            return arg(format!("{} is not horizontal", candidate.label()));
        }
    }
    space.check_vector(y, true)?;
    if (y.norm() - 1.0).abs() > 1e-10 || !sub.contains(y, 1e-10) {
        return arg("Y must be a unit vector of the candidate");
    }
    let jy = apply_j(space, y)?;
    let plane = span_in_m(space, &[space.e(1, 2), jy]);
    let ym = space.tangent(y);
    let nabla = nabla_operator(space, y)?;
    let mut plane_residual: f64 = 0.0;
    let mut orth: f64 = 0.0;
    for &t in t_samples {
        let g = (&ym * (-t)).exp();
        let moved = space.v().conjugate_by(&g);
        let w = (&nabla * t).exp() * space.m_coords(&moved);
        plane_residual = plane_residual.max(plane.distance(&w));
        for u in sub.basis() {
            orth = orth.max(w.dot(u).abs());
        }
    }
    Ok(TransportReport {
        label: candidate.label().to_string(),
        t_samples: t_samples.to_vec(),
        plane_residual,
        orthogonality_residual: orth,
        passed: plane_residual <= TRANSPORT_TOL && orth <= TRANSPORT_TOL,
    })
}

/// Largest `|<J u, v>|` over basis pairs: zero iff the span is totally real.
pub fn total_reality_defect(space: &StiefelSpace, sub: &Subspace) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for u in sub.basis() {
        let ju = apply_j(space, u)?;
        for v in sub.basis() {
            worst = worst.max(ju.dot(v).abs());
        }
    }
    Ok(worst)
}

/// Distance of `J (s ∩ p)` from `s ∩ p`: zero iff `s ∩ p` is J-invariant.
pub fn complex_defect(space: &StiefelSpace, sub: &Subspace) -> Result<f64> {
    let hp = sub.intersection(&span_in_m(
        space,
        &(1..space.dim_m()).map(|i| liealg::unit(space.dim_m(), i)).collect::<Vec<_>>(),
    ));
    let mut worst: f64 = 0.0;
    for u in hp.basis() {
        worst = worst.max(hp.distance(&apply_j(space, u)?));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::build_space;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn candidate_dimensions_and_bounds() {
        let s = build_space(4).unwrap();
        assert_eq!(candidate_stiefel(&s, 4).unwrap().dim(), 5);
        assert_eq!(candidate_stiefel(&s, 3).unwrap().dim(), 3);
        assert!(candidate_stiefel(&s, 6).is_err());
        assert_eq!(candidate_spheres(&s, 2, 2).unwrap().dim(), 4);
        assert_eq!(candidate_spheres(&s, 4, 0).unwrap().dim(), 4);
        assert!(candidate_spheres(&build_space(2).unwrap(), 3, 0).is_err());
        assert_eq!(candidate_hopf_berger(&s, 3, true).unwrap().dim(), 5);
        assert_eq!(candidate_hopf_berger(&s, 3, false).unwrap().dim(), 2);
        assert!(candidate_hopf_berger(&build_space(3).unwrap(), 4, true).is_err());
    }

    #[test]
    fn reflective_cases_match_catalog() {
        let s = build_space(4).unwrap();
        let c1 = reflective_fixed_space(&s, ReflectiveCase::Block { p: 4 }).unwrap();
        assert!(c1.subspace().same_as(candidate_stiefel(&s, 4).unwrap().subspace(), 1e-12));
        let c2 = reflective_fixed_space(&s, ReflectiveCase::Mixed { p: 2 }).unwrap();
        assert_eq!(c2.dim(), 4);
        let swapped = c2.subspace().map(&swap_12_on_m(&s));
        assert!(swapped.same_as(candidate_spheres(&s, 2, 2).unwrap().subspace(), 1e-12));
        let c3 = reflective_fixed_space(&s, ReflectiveCase::Complex).unwrap();
        assert!(c3.subspace().same_as(candidate_hopf_berger(&s, 3, true).unwrap().subspace(), 1e-12));
        assert!(reflective_fixed_space(&build_space(3).unwrap(), ReflectiveCase::Complex).is_err());
    }

    #[test]
    fn block_form_complex_structure_is_conjugate() {
        // J' = [[0, -I], [I, 0]] on the last n coordinates.
        let s = build_space(4).unwrap();
        let order = s.order();
        let half = s.n() / 2;
        let mut g = DMatrix::zeros(order, order);
        g[(0, 1)] = -1.0;
        g[(1, 0)] = 1.0;
        for i in 0..half {
            g[(2 + i, 2 + half + i)] = -1.0;
            g[(2 + half + i, 2 + i)] = 1.0;
        }
        let block = fixed_space_of(&s, &g, "block").unwrap();
        let hopf = candidate_hopf_berger(&s, 3, true).unwrap();
        assert_eq!(block.dim(), 5);
        assert!(!block.subspace().same_as(hopf.subspace(), 1e-6));
        // Interleave: coordinate 2 + half + i -> 2 + 2i + 1, 2 + i -> 2 + 2i.
        let mut perm = DMatrix::zeros(order, order);
        perm[(0, 0)] = 1.0;
        perm[(1, 1)] = 1.0;
        for i in 0..half {
            perm[(2 + 2 * i, 2 + i)] = 1.0;
            perm[(3 + 2 * i, 2 + half + i)] = 1.0;
        }
        let moved = block.subspace().map(&ad_on_m(&s, &perm).unwrap());
        assert!(moved.same_as(hopf.subspace(), 1e-12));
    }

    #[test]
    fn non_normalising_element_rejected() {
        let s = build_space(2).unwrap();
        let g = (&liealg::x(1, 2, 4) * 0.3).exp();
        assert!(matches!(ad_on_m(&s, &g), Err(Error::Construction(_))));
    }

    #[test]
    fn tojo_on_stiefel_and_line() {
        let s = build_space(4).unwrap();
        let c = candidate_stiefel(&s, 4).unwrap();
        let r = tojo_check(&s, &c, &DEFAULT_T_SAMPLES, 10, 1).unwrap();
        assert!(r.passed && r.max_residual <= PASS_TOL, "{}", r.max_residual);
        let x = (s.e(1, 3) * 0.6 + s.e(2, 5) * 0.8 + s.e(1, 2) * 0.3).normalize();
        let line = TgCandidate::custom("line", span_in_m(&s, &[x]));
        assert!(tojo_check(&s, &line, &DEFAULT_T_SAMPLES, 2, 3).unwrap().passed);
    }

    #[test]
    fn perturbed_spheres_fail() {
        let s = build_space(4).unwrap();
        let c = perturb(&candidate_spheres(&s, 2, 2).unwrap(), 0.05, 7).unwrap();
        assert_eq!(c.label(), "spheres:2,2:perturbed");
        assert_eq!(c.dim(), 4);
        let r = tojo_check(&s, &c, &DEFAULT_T_SAMPLES, 8, 7).unwrap();
        assert!(!r.passed && r.max_residual >= FAIL_THRESHOLD, "{}", r.max_residual);
    }

    #[test]
    fn perturb_zero_and_determinism() {
        let s = build_space(3).unwrap();
        let c = candidate_hopf_berger(&s, 2, true).unwrap();
        assert!(perturb(&c, 0.0, 5).unwrap().subspace().same_as(c.subspace(), 1e-14));
        let a = perturb(&c, 0.05, 5).unwrap();
        let b = perturb(&c, 0.05, 5).unwrap();
        assert_eq!(a.subspace().basis(), b.subspace().basis());
        assert!(perturb(&c, 1.5, 5).is_err());
    }

    #[test]
    fn transport_examples() {
        let s = build_space(4).unwrap();
        let c = candidate_spheres(&s, 2, 2).unwrap();
        let r = horizontality_transport(&s, &c, &s.e(1, 3), &[0.0, 0.3, 0.7, 1.2]).unwrap();
        assert!(r.passed, "{r:?}");
        let h = candidate_hopf_berger(&s, 3, false).unwrap();
        let y = (s.e(1, 3) + s.e(2, 4)) * FRAC_1_SQRT_2;
        assert!(horizontality_transport(&s, &h, &y, &[0.3, 0.7, 1.2]).unwrap().passed);
        let st = candidate_stiefel(&s, 4).unwrap();
        assert!(horizontality_transport(&s, &st, &s.e(1, 3), &[0.3]).is_err());
    }

    #[test]
    fn parse_labels() {
        let s = build_space(4).unwrap();
        assert_eq!(parse_candidates(&s, "spheres:2,1").unwrap()[0].dim(), 3);
        assert_eq!(parse_candidates(&s, "reflective:3").unwrap()[0].dim(), 5);
        assert_eq!(parse_candidates(&s, "reflective:1,5").unwrap()[0].dim(), 7);
        assert!(parse_candidates(&s, "torus:2").is_err());
        assert!(parse_candidates(&s, "stiefel:x").is_err());
        assert_eq!(parse_candidates(&s, "all").unwrap().len(), catalog(&s).unwrap().len());
    }

    #[test]
    fn reality_and_complexity() {
        let s = build_space(5).unwrap();
        let sp = candidate_spheres(&s, 3, 2).unwrap();
        assert!(total_reality_defect(&s, sp.subspace()).unwrap() < 1e-15);
        let h = candidate_hopf_berger(&s, 3, true).unwrap();
        assert!(complex_defect(&s, h.subspace()).unwrap() < 1e-12);
    }
}
