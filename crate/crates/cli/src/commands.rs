//! The verification suites behind each subcommand. Every function returns a
//! finished report; failures of individual checks never abort a run.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use serde_json::json;
use stiefel_core::actions::{self, ActionRow};
use stiefel_core::curvature::{self, commutant_dim, curvature_operators, holonomy_algebra, lambda_pm, wedge_image};
use stiefel_core::liealg::so_dim;
use stiefel_core::tables::{self, TABLE_TOL};
use stiefel_core::totgeo::{self, TojoChecker, TojoOptions, FAIL_THRESHOLD};
use stiefel_core::{build_space, sampling, Exec, Result};

use crate::report::{Check, RunReport};

/// Endpoint values of `lambda_+-` are exact up to this tolerance.
pub const ENDPOINT_TOL: f64 = 1e-12;
/// Sectional curvature oracle agreement.
pub const ORACLE_TOL: f64 = 1e-9;
/// Wedge identities of the curvature operator.
pub const WEDGE_TOL: f64 = 1e-9;
/// Fraction of perturbed controls that must fail.
pub const CONTROL_FAIL_FRACTION: f64 = 0.95;

/// Lower-case identifier built from a free-form label.
pub fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

#[derive(Clone, Debug)]
pub struct TablesParams {
    pub ns: Vec<usize>,
    pub t_steps: usize,
    pub seed: u64,
    pub exec: Exec,
}

pub fn tables(p: &TablesParams) -> Result<RunReport> {
    let mut report = RunReport::new("tables", p.seed);
    report.param("n", &p.ns).param("t_steps", p.t_steps);
    let grid = tables::table1_grid(p.t_steps)?;
    let rows = tables::table1_sweep(&p.ns, p.t_steps, p.exec)?;
    for (i, row) in rows.iter().enumerate() {
        let name = format!("table1_n{:02}_t{:02}", row.n, i % grid.len());
        report.push(Check::residual(name, row.max_deviation, row.matched, row));
    }
    for &n in &p.ns {
        let space = build_space(n)?;
        let name = format!("table2_n{n:02}");
        match tables::table2_row(&space) {
            Ok(row) => {
                let r = row.max_eigenvalue_deviation.max(row.max_subspace_gap);
                report.push(Check::residual(name, r, row.matched, &row));
            }
            Err(e) => report.push(Check::errored(name, e)),
        }
        let name = format!("complex_endpoint_n{n:02}");
        match tables::complex_endpoint(&space) {
            Ok(ce) => {
                let (ep, em) = tables::complex_endpoint_expected(&space);
                let dp = ep.iter().zip(&ce.x_plus).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let dm = em.iter().zip(&ce.x_minus).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let r = dp.max(dm);
                report.push(Check::residual(name, r, r <= TABLE_TOL, &ce));
            }
            Err(e) => report.push(Check::errored(name, e)),
        }
    }
    let (a, b) = (lambda_pm(0.0)?, lambda_pm(FRAC_PI_4)?);
    let r = [a.0 - 1.0, a.1 - 0.25, b.0 - 1.25, b.1].iter().map(|x| x.abs()).fold(0.0, f64::max);
    report.push(Check::residual(
        "lambda_pm_endpoints",
        r,
        r <= ENDPOINT_TOL,
        json!({ "t0": [a.0, a.1], "t_pi_4": [b.0, b.1] }),
    ));
    Ok(report.finish())
}

#[derive(Clone, Debug)]
pub struct TgParams {
    pub n: usize,
    pub candidates: Vec<String>,
    pub t_samples: Vec<f64>,
    pub tol: f64,
    pub dirs: Option<usize>,
    pub controls: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub exec: Exec,
}

pub fn verify_tg(p: &TgParams) -> Result<RunReport> {
    let mut report = RunReport::new("verify-tg", p.seed);
    report
        .param("n", p.n)
        .param("candidate", &p.candidates)
        .param("t_samples", &p.t_samples)
        .param("tol", p.tol)
        .param("dirs", p.dirs)
        .param("controls", p.controls)
        .param("epsilon", p.epsilon);
    let space = build_space(p.n)?;
    let mut cands = Vec::new();
    for label in &p.candidates {
        cands.extend(totgeo::parse_candidates(&space, label)?);
    }
    let checker = TojoChecker::new(&space, p.exec);
    let opts = TojoOptions {
        t_samples: p.t_samples.clone(),
        dir_samples: p.dirs,
        seed: p.seed,
        tol: p.tol,
        stop_at: None,
        exec: p.exec,
    };
    for r in checker.check_all(&cands, &opts)? {
        let c = &r.candidate;
        let details = json!({
            "label": c.label(),
            "dim": c.dim(),
            "expected_dim": c.expected_dim(),
            "directions_tested": r.directions_tested,
            "first_order_residual": r.first_order_residual,
            "first_order_pass": r.first_order_pass,
            "t_samples": r.t_samples,
        });
        // The first-order screen must agree with the full criterion.
        let passed = r.passed && r.first_order_pass;
        report.push(Check::residual(format!("tg_{}", slug(c.label())), r.max_residual, passed, details));
    }
    if p.candidates.iter().any(|c| c == "all") && p.controls > 0 {
        let catalog = totgeo::catalog(&space)?;
        let controls = totgeo::perturbation_controls(&catalog, p.controls, p.epsilon, p.seed)?;
        let opts = TojoOptions { stop_at: Some(FAIL_THRESHOLD), ..opts };
        let results = checker.check_all(&controls, &opts)?;
        let failing = results.iter().filter(|r| r.max_residual >= FAIL_THRESHOLD).count();
        let min = results.iter().map(|r| r.max_residual).fold(f64::INFINITY, f64::min);
        let fraction = failing as f64 / results.len() as f64;
        report.push(Check::value(
            "tg_controls_failing_fraction",
            fraction,
            fraction >= CONTROL_FAIL_FRACTION,
            json!({
                "count": results.len(),
                "failing": failing,
                "fail_threshold": FAIL_THRESHOLD,
                "min_residual": min,
                "required_fraction": CONTROL_FAIL_FRACTION,
            }),
        ));
    }
    Ok(report.finish())
}

#[derive(Clone, Debug)]
pub struct HolonomyParams {
    pub n: usize,
    pub seed: u64,
}

pub fn holonomy(p: &HolonomyParams) -> Result<RunReport> {
    let mut report = RunReport::new("holonomy", p.seed);
    report.param("n", p.n);
    let space = build_space(p.n)?;
    let d = space.dim_m();
    let alg = holonomy_algebra(&space)?;
    let full = so_dim(d);
    report.push(Check::value(
        "holonomy_algebra_dim",
        alg.dim() as f64,
        alg.dim() == full,
        json!({ "dim_m": d, "so_dim_m": full }),
    ));
    let ops: Vec<DMatrix<f64>> = curvature_operators(&space).iter().map(|a| a.entries().clone()).collect();
    let comm = commutant_dim(&ops);
    report.push(Check::value("holonomy_commutant_dim", comm as f64, comm == 1, json!({ "generators": ops.len() })));
    for j in [(1, 3), (1, 4), (2, 3), (2, 4)] {
        let a = space.m_index(1, 2).expect("X_12 is in m");
        let b = space.m_index(j.0, j.1).expect("wedge partner is in m");
        let image = wedge_image(&space, a, b)?;
        let (lo, hi) = (a.min(b), a.max(b));
        let sign = if a < b { 1.0 } else { -1.0 };
        let mut r: f64 = 0.0;
        let mut diag = 0.0;
        for ((c, e), coef) in image {
            let expect = if (c, e) == (lo, hi) { sign * 0.25 } else { 0.0 };
            if (c, e) == (lo, hi) {
                diag = sign * coef;
            }
            r = r.max((coef - expect).abs());
        }
        let name = format!("wedge_x12_x{}{}", j.0, j.1);
        report.push(Check::residual(name, r, r <= WEDGE_TOL, json!({ "eigenvalue": diag })));
    }
    Ok(report.finish())
}

#[derive(Clone, Debug)]
pub struct ActionsParams {
    pub rows: Vec<ActionRow>,
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

/// Rows selected by `--all`: the cohomogeneity-one table, the transitive
/// triple and the dimension-counting triple.
pub fn all_rows() -> Vec<ActionRow> {
    let mut rows = ActionRow::table();
    rows.extend(ActionRow::transitive());
    rows.extend(ActionRow::dimension_counting());
    rows
}

pub fn actions_verify(p: &ActionsParams) -> Result<RunReport> {
    let mut report = RunReport::new("actions verify", p.seed);
    let labels: Vec<String> = p.rows.iter().map(|r| r.label()).collect();
    report.param("rows", &labels).param("samples", p.samples);
    let results = p.exec.map(&p.rows, |&row| {
        let spec = actions::build_action(row)?;
        actions::cohomogeneity(&spec, p.samples, p.seed, Exec::Sequential)
    });
    for (row, res) in p.rows.iter().zip(results) {
        let name = format!("action_{}", slug(&row.label()));
        let expectation = row.expectation();
        match res {
            Ok(orbit) => {
                let passed = expectation.holds(orbit.cohomogeneity);
                let details = json!({ "expectation": expectation, "report": orbit });
                report.push(Check::value(name, orbit.cohomogeneity as f64, passed, details));
            }
            Err(e) => report.push(Check::errored(name, e)),
        }
    }
    Ok(report.finish())
}

#[derive(Clone, Debug)]
pub struct PolarParams {
    pub n: usize,
    pub q: usize,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

pub fn actions_polar(p: &PolarParams) -> Result<RunReport> {
    let mut report = RunReport::new("actions polar", p.seed);
    report.param("n", p.n).param("q", p.q).param("grid", p.grid).param("samples", p.samples);
    let spec = actions::build_action(ActionRow::Polar { n: p.n, q: p.q })?;
    let space = build_space(p.n)?;
    let pr = actions::polarity_check(&spec, &space, &actions::section_grid(p.grid))?;
    let tol = actions::POLAR_TOL;
    report.push(Check::residual(
        "polar_orthogonality",
        pr.orthogonality_residual,
        pr.orthogonality_residual <= tol,
        json!({ "at_origin": pr.at_origin_residual, "grid": pr.grid }),
    ));
    report.push(Check::residual(
        "polar_vertical_in_orbit",
        pr.vertical_residual,
        pr.vertical_residual <= tol,
        json!({ "grid_points": pr.grid.len() }),
    ));
    report.push(Check::value(
        "polar_section_cohomogeneity",
        pr.cohomogeneity as f64,
        pr.cohomogeneity == 2,
        json!({ "orbit_dims": pr.orbit_dims, "non_generic": pr.non_generic }),
    ));
    let orbit = actions::cohomogeneity(&spec, p.samples, p.seed, p.exec)?;
    report.push(Check::value(
        "polar_sampled_cohomogeneity",
        orbit.cohomogeneity as f64,
        orbit.cohomogeneity == 2,
        &orbit,
    ));
    Ok(report.finish())
}

#[derive(Clone, Debug)]
pub struct OracleParams {
    pub ns: Vec<usize>,
    pub pairs: usize,
    pub seed: u64,
    pub exec: Exec,
}

pub fn oracle(p: &OracleParams) -> Result<RunReport> {
    let mut report = RunReport::new("oracle", p.seed);
    report.param("n", &p.ns).param("pairs", p.pairs);
    for &n in &p.ns {
        let space = build_space(n)?;
        let d = space.dim_m();
        let base = sampling::derive_seed(p.seed, n as u64);
        let devs: Vec<Result<f64>> = p.exec.map_range(0..p.pairs, |i| {
            let mut rng = sampling::derived(base, i as u64);
            let x = sampling::gaussian_vector(&mut rng, d);
            let y = sampling::gaussian_vector(&mut rng, d);
            Ok((curvature::sectional(&space, &x, &y)? - curvature::sectional_oracle(&space, &x, &y)?).abs())
        });
        let name = format!("oracle_n{n:02}");
        match devs.into_iter().collect::<Result<Vec<f64>>>() {
            Ok(devs) => {
                let r = devs.iter().copied().fold(0.0, f64::max);
                report.push(Check::residual(name, r, r <= ORACLE_TOL, json!({ "pairs": devs.len() })));
            }
            Err(e) => report.push(Check::errored(name, e)),
        }
    }
    Ok(report.finish())
}
