//! Sequential and parallel execution must produce bit-identical results.

use stiefel_core::actions::{self, ActionRow};
use stiefel_core::curvature::CurvatureTensor;
use stiefel_core::totgeo::{self, TojoChecker, TojoOptions};
use stiefel_core::{build_space, tables, Exec};

#[test]
fn table1_sweep_is_policy_independent() {
    let a = tables::table1_sweep(&[3, 5], 8, Exec::Sequential).unwrap();
    let b = tables::table1_sweep(&[3, 5], 8, Exec::Parallel).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.n, x.t.to_bits()), (y.n, y.t.to_bits()));
        assert_eq!(x.observed, y.observed);
    }
}

#[test]
fn tensor_and_tojo_are_policy_independent() {
    let space = build_space(4).unwrap();
    let (ts, tp) = (CurvatureTensor::new(&space, Exec::Sequential), CurvatureTensor::new(&space, Exec::Parallel));
    let d = ts.dim();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    assert_eq!(ts.get(a, b, c, e).to_bits(), tp.get(a, b, c, e).to_bits());
                }
            }
        }
    }
    let catalog = totgeo::catalog(&space).unwrap();
    let run = |exec| {
        let opts = TojoOptions { seed: 3, exec, ..Default::default() };
        TojoChecker::new(&space, exec).check_all(&catalog, &opts).unwrap()
    };
    for (x, y) in run(Exec::Sequential).iter().zip(&run(Exec::Parallel)) {
        assert_eq!(x.max_residual.to_bits(), y.max_residual.to_bits());
        assert_eq!(x.first_order_residual.to_bits(), y.first_order_residual.to_bits());
    }
}

#[test]
fn cohomogeneity_is_policy_independent() {
    let spec = actions::build_action(ActionRow::G2So3).unwrap();
    let a = actions::cohomogeneity(&spec, 12, 9, Exec::Sequential).unwrap();
    let b = actions::cohomogeneity(&spec, 12, 9, Exec::Parallel).unwrap();
    assert_eq!(a.orbit_dims, b.orbit_dims);
    assert_eq!(a.cohomogeneity, b.cohomogeneity);
}
