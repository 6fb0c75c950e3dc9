//! Closed-form Jacobi spectra along the segment `cos t X_13 + sin t X_24` and
//! at `X_13`, and sweeps comparing them with computed spectra.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6};

use nalgebra::DVector;
use serde::Serialize;

use crate::curvature::{jacobi_spectrum, lambda_pm, CLUSTER_GAP};
use crate::error::{arg, Error, Result};
use crate::exec::Exec;
use crate::homspace::{build_space, singular_representative, OrbitType, StiefelSpace};
use crate::liealg::{span_of, Subspace, RANK_TOL};

/// Lower end of the open sweep interval `(T_MIN, pi/4]`.
pub const T_MIN: f64 = 0.02;
/// Minimum distance kept between interior grid points and eigenvalue crossings.
pub const COLLISION_MARGIN: f64 = 0.02;
/// Eigenvalue match tolerance for the tables.
pub const TABLE_TOL: f64 = 1e-9;

/// `(value, multiplicity)` with coinciding values merged, ascending.
pub type Profile = Vec<(f64, usize)>;

fn merged(mut raw: Vec<(f64, usize)>) -> Profile {
    raw.retain(|&(_, m)| m > 0);
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Profile = Vec::new();
    for (v, m) in raw {
        match out.last_mut() {
            Some(last) if (v - last.0).abs() <= CLUSTER_GAP => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    out
}

/// Spectrum of `R_X` for `X = cos t X_13 + sin t X_24`:
/// `0 (x2)`, `1/4`, `lambda_+`, `lambda_-`, `cos^2 t (x n-2)`, `sin^2 t (x n-2)`.
pub fn table1_expected(n: usize, t: f64) -> Result<Profile> {
    if n < 2 {
        return arg(format!("n must be at least 2, got {n}"));
    }
    let (lp, lm) = lambda_pm(t)?;
    let (c, s) = (t.cos(), t.sin());
    Ok(merged(vec![(0.0, 2), (0.25, 1), (lp, 1), (lm, 1), (c * c, n - 2), (s * s, n - 2)]))
}

/// Value of `t` in `(0, pi/4)` where `lambda_-(t) = sin^2 t`.
pub fn lambda_minus_crossing() -> f64 {
    let f = |t: f64| lambda_pm(t).map(|(_, m)| m).unwrap_or(f64::NAN) - t.sin().powi(2);
    let (mut lo, mut hi) = (1e-3, FRAC_PI_4 - 1e-3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Uniform grid of `steps` values in `(T_MIN, pi/4]`, with interior points
/// moved to `COLLISION_MARGIN` from the two eigenvalue crossings
/// (`sin^2 t = 1/4` at `pi/6`, and `lambda_- = sin^2 t`). The endpoint
/// `pi/4` is kept.
pub fn table1_grid(steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return arg("t-steps must be positive");
    }
    let crossings = [FRAC_PI_6, lambda_minus_crossing()];
    let h = (FRAC_PI_4 - T_MIN) / steps as f64;
    let grid = (0..steps)
        .map(|i| {
            let mut t = T_MIN + (i + 1) as f64 * h;
            if i + 1 < steps {
                for c in crossings {
                    if (t - c).abs() < COLLISION_MARGIN {
                        t = if t < c { c - COLLISION_MARGIN } else { c + COLLISION_MARGIN };
                    }
                }
            }
            t
        })
        .collect();
    Ok(grid)
}

/// One computed-versus-closed-form spectrum comparison.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub t: f64,
    pub orbit_type: OrbitType,
    pub expected: Profile,
    pub observed: Profile,
    /// Largest `|observed - expected|` over paired eigenvalues; infinite on a
    /// multiplicity mismatch.
    pub max_deviation: f64,
    pub matched: bool,
}

fn compare(n: usize, t: f64, orbit_type: OrbitType, expected: Profile, observed: Profile) -> SpectrumRow {
    let same_shape = expected.len() == observed.len() && expected.iter().zip(&observed).all(|(e, o)| e.1 == o.1);
    let max_deviation = if same_shape {
        expected.iter().zip(&observed).map(|(e, o)| (e.0 - o.0).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    SpectrumRow { n, t, orbit_type, expected, observed, max_deviation, matched: max_deviation <= TABLE_TOL }
}

/// Compares the computed spectrum with [`table1_expected`] at one `t`.
pub fn table1_row(space: &StiefelSpace, t: f64) -> Result<SpectrumRow> {
    let (x, kind) = singular_representative(space, t)?;
    let observed = jacobi_spectrum(space, &x)?.profile();
    Ok(compare(space.n(), t, kind, table1_expected(space.n(), t)?, observed))
}

/// Table 1 rows for every `n` in `ns` and every grid value, ordered by `(n, t)`.
pub fn table1_sweep(ns: &[usize], steps: usize, exec: Exec) -> Result<Vec<SpectrumRow>> {
    let grid = table1_grid(steps)?;
    let spaces = ns.iter().map(|&n| build_space(n)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, f64)> = (0..spaces.len()).flat_map(|s| grid.iter().map(move |&t| (s, t))).collect();
    exec.map(&jobs, |&(s, t)| table1_row(&spaces[s], t)).into_iter().collect()
}

/// Expected eigenspaces of `R_{X_13}`, in m-coordinates:
/// `0` on `a + p_theta2 = span{X_13, X_24, ..., X_2,n+2}`,
/// `1/4` on `span{X_12, X_23}`,
/// `1` on `span{X_14, ..., X_1,n+2}`.
pub fn table2_expected(space: &StiefelSpace) -> Vec<(f64, Subspace)> {
    let n = space.n();
    let d = space.dim_m();
    let label = format!("m of StiefelSpace({n})");
    let span = |v: Vec<DVector<f64>>| span_of(d, &v, RANK_TOL).relabel(label.clone());
    let zero: Vec<_> = std::iter::once(space.e(1, 3)).chain((4..=n + 2).map(|j| space.e(2, j))).collect();
    let quarter = vec![space.e(1, 2), space.e(2, 3)];
    let one: Vec<_> = (4..=n + 2).map(|j| space.e(1, j)).collect();
    vec![(0.0, span(zero)), (0.25, span(quarter)), (1.0, span(one))]
}

/// Table 2 comparison: eigenvalues, multiplicities and eigenspace gaps.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub expected: Profile,
    pub observed: Profile,
    pub max_eigenvalue_deviation: f64,
    /// Largest projector distance between computed and expected eigenspaces.
    pub max_subspace_gap: f64,
    pub matched: bool,
}

pub fn table2_row(space: &StiefelSpace) -> Result<Table2Row> {
    let spec = jacobi_spectrum(space, &space.e(1, 3))?;
    let expected = table2_expected(space);
    let profile: Profile = expected.iter().map(|(v, s)| (*v, s.dim())).collect();
    let row = compare(space.n(), 0.0, OrbitType::SingularReal, profile.clone(), spec.profile());
    let mut gap: f64 = if row.matched { 0.0 } else { f64::INFINITY };
    if row.matched {
        for (pair, (_, sub)) in spec.pairs().iter().zip(&expected) {
            gap = gap.max(pair.space.gap(sub));
        }
    }
    Ok(Table2Row {
        n: space.n(),
        expected: profile,
        observed: row.observed,
        max_eigenvalue_deviation: row.max_deviation,
        max_subspace_gap: gap,
        matched: row.matched && gap <= TABLE_TOL,
    })
}

/// Unit eigenvectors of `R_X` for `lambda_+ = 5/4` and `lambda_- = 0` at
/// `t = pi/4` inside `J a = span{X_23, X_14}`, fixed up to sign by requiring
/// a positive `X_23` coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexEndpoint {
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

pub fn complex_endpoint(space: &StiefelSpace) -> Result<ComplexEndpoint> {
    let (x, _) = singular_representative(space, FRAC_PI_4)?;
    let spec = jacobi_spectrum(space, &x)?;
    let ja = span_of(space.dim_m(), &[space.e(2, 3), space.e(1, 4)], RANK_TOL);
    let (lp, lm) = lambda_pm(FRAC_PI_4)?;
    let pick = |value: f64| -> Result<DVector<f64>> {
        let pair = spec
            .find(value, TABLE_TOL)
            .ok_or_else(|| Error::Consistency(format!("no eigenvalue {value} at t = pi/4")))?;
        // Component of the eigenspace inside J a.
        let inter = pair.space.intersection(&ja);
        if inter.dim() != 1 {
            return Err(Error::Consistency(format!("eigenvalue {value} meets J a in dim {}", inter.dim())));
        }
        let mut v = inter.basis()[0].clone();
        let i23 = space.m_index(2, 3).expect("X_23 is in m");
        if v[i23] < 0.0 {
            v = -v;
        }
        Ok(v)
    };
    let xp = pick(lp)?;
    let xm = pick(lm)?;
    Ok(ComplexEndpoint {
        x_plus: xp.iter().copied().collect(),
        x_minus: xm.iter().copied().collect(),
        lambda_plus: lp,
        lambda_minus: lm,
    })
}

/// Closed-form eigenvectors at `t = pi/4`: `(X_23 -+ X_14)/sqrt 2`.
pub fn complex_endpoint_expected(space: &StiefelSpace) -> (DVector<f64>, DVector<f64>) {
    let (a, b) = (space.e(2, 3), space.e(1, 4));
    ((&a - &b) * FRAC_1_SQRT_2, (&a + &b) * FRAC_1_SQRT_2)
}
