use nalgebra::DVector;
use proptest::prelude::*;
use stiefel_core::actions::{self, ActionRow, RowParams};
use stiefel_core::curvature::{curvature, sectional, sectional_oracle};
use stiefel_core::homspace::{oneill_a, oneill_a_closed_form, u_tensor};
use stiefel_core::liealg::{basis_element, elements_of, inner, lie_closure, so_dim, span_of, RANK_TOL};
use stiefel_core::sampling;
use stiefel_core::totgeo::{self, TgCandidate, TojoChecker, TojoOptions};
use stiefel_core::{build_space, AlgElement, Exec, StiefelSpace};

fn skew(seed: u64, index: u64, order: usize) -> AlgElement {
    AlgElement::new(sampling::skew_matrix(&mut sampling::derived(seed, index), order)).unwrap()
}

fn tangent_vectors(space: &StiefelSpace, seed: u64, count: usize) -> Vec<DVector<f64>> {
    let mut rng = sampling::rng(seed);
    (0..count).map(|_| sampling::gaussian_vector(&mut rng, space.dim_m())).collect()
}

fn horizontal_vectors(space: &StiefelSpace, seed: u64, count: usize) -> Vec<DVector<f64>> {
    tangent_vectors(space, seed, count)
        .into_iter()
        .map(|mut v| {
            v[0] = 0.0;
            v
        })
        .collect()
}

#[test]
fn coordinate_basis_is_orthonormal_up_to_order_18() {
    for order in 2..=18 {
        let basis: Vec<AlgElement> = (1..=order)
            .flat_map(|i| ((i + 1)..=order).map(move |j| (i, j)))
            .map(|(i, j)| basis_element(i, j, order).unwrap())
            .collect();
        assert_eq!(basis.len(), so_dim(order));
        for (a, x) in basis.iter().enumerate() {
            for (b, y) in basis.iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_eq!(inner(x, y).unwrap(), expect, "order {order}, pair ({a}, {b})");
            }
        }
    }
}

#[test]
fn reductive_invariants_hold_up_to_n_16() {
    for n in 2..=16 {
        build_space(n).unwrap().check_invariants().unwrap();
    }
}

#[test]
fn hopf_candidates_are_complex_and_spheres_totally_real() {
    for n in 2..=8 {
        let space = build_space(n).unwrap();
        for k in 2..=(n / 2 + 1) {
            let c = totgeo::candidate_hopf_berger(&space, k, true).unwrap();
            assert!(totgeo::complex_defect(&space, c.subspace()).unwrap() <= 1e-12, "hopf:{k} at n = {n}");
        }
        for p in 0..=n {
            for q in 0..=(n - p) {
                let Ok(c) = totgeo::candidate_spheres(&space, p, q) else { continue };
                assert_eq!(totgeo::total_reality_defect(&space, c.subspace()).unwrap(), 0.0, "spheres:{p},{q}");
            }
        }
    }
}

#[test]
fn orbit_dimension_is_seed_independent_for_every_row() {
    let mut rows = ActionRow::table();
    rows.extend(ActionRow::transitive());
    rows.extend(ActionRow::dimension_counting());
    rows.push(ActionRow::from_id("polar", RowParams::default()).unwrap());
    for row in rows {
        let spec = actions::build_action(row).unwrap();
        let dims = Exec::default().map_range(0..50, |s| actions::orbit_dimension(&spec, s as u64));
        assert!(dims.iter().all(|&d| d == dims[0]), "{}: {dims:?}", row.label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_is_bilinear_antisymmetric_and_jacobi(order in 2usize..=9, seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (x, y, z) = (skew(seed, 0, order), skew(seed, 1, order), skew(seed, 2, order));
        prop_assert!((&x.lie(&y) + &y.lie(&x)).norm() <= 1e-10);
        let lin = &(&(&x * a) + &(&y * b)).lie(&z) - &(&(&x.lie(&z) * a) + &(&y.lie(&z) * b));
        prop_assert!(lin.norm() <= 1e-10);
        let jac = &(&x.lie(&y.lie(&z)) + &y.lie(&z.lie(&x))) + &z.lie(&x.lie(&y));
        prop_assert!(jac.norm() <= 1e-10, "Jacobi residual {}", jac.norm());
    }

    #[test]
    fn inner_product_is_ad_and_conjugation_invariant(order in 2usize..=9, seed in any::<u64>()) {
        let (a, b, c) = (skew(seed, 0, order), skew(seed, 1, order), skew(seed, 2, order));
        prop_assert!((c.lie(&a).dot(&b) + a.dot(&c.lie(&b))).abs() <= 1e-10);
        let g = c.exp();
        prop_assert!((a.conjugate_by(&g).dot(&b.conjugate_by(&g)) - a.dot(&b)).abs() <= 1e-10);
    }

    #[test]
    fn lie_closure_is_idempotent(order in 3usize..=6, seed in any::<u64>(), block in 2usize..=3) {
        // Two random elements of so(block) inside so(order), plus one of its
        // complement: the closure is a proper subalgebra.
        let embed = |k: &AlgElement, off: usize| {
            let mut m = nalgebra::DMatrix::zeros(order, order);
            let d = k.ambient_dim();
            m.view_mut((off, off), (d, d)).copy_from(k.entries());
            AlgElement::new(m).unwrap()
        };
        let small = block.min(order - 1);
        let gens = vec![
            embed(&skew(seed, 0, small), 0),
            embed(&skew(seed, 1, small), 0),
            embed(&skew(seed, 2, order - small), small),
        ];
        let once = lie_closure(&gens, so_dim(order)).unwrap();
        let twice = lie_closure(&elements_of(&once, order), so_dim(order)).unwrap();
        prop_assert_eq!(once.dim(), twice.dim());
        prop_assert!(once.same_as(&twice, 1e-9));
        prop_assert!(once.dim() <= so_dim(small) + so_dim(order - small));
    }

    #[test]
    fn curvature_symmetries(n in 2usize..=7, seed in any::<u64>()) {
        let space = build_space(n).unwrap();
        let v = tangent_vectors(&space, seed, 4);
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        let r = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>| curvature(&space, a, b, c).unwrap();
        let bianchi = r(x, y, z) + r(y, z, x) + r(z, x, y);
        prop_assert!(bianchi.amax() <= 1e-9, "Bianchi residual {}", bianchi.amax());
        let pair = r(x, y, z).dot(w) - r(z, w, x).dot(y);
        prop_assert!(pair.abs() <= 1e-9, "pair symmetry residual {pair}");
        prop_assert!((r(x, y, z) + r(y, x, z)).amax() <= 1e-12);
        prop_assert!((r(x, y, z).dot(w) + r(x, y, w).dot(z)).abs() <= 1e-9);
    }

    #[test]
    fn sectional_matches_bracket_oracle(n in 2usize..=8, seed in any::<u64>()) {
        let space = build_space(n).unwrap();
        let v = tangent_vectors(&space, seed, 2);
        let k = sectional(&space, &v[0], &v[1]).unwrap();
        let o = sectional_oracle(&space, &v[0], &v[1]).unwrap();
        prop_assert!((k - o).abs() <= 1e-9, "{k} vs {o}");
        prop_assert!(k >= -1e-12, "normal homogeneous spaces have K >= 0");
    }

    #[test]
    fn naturally_reductive_and_oneill(n in 2usize..=8, seed in any::<u64>()) {
        let space = build_space(n).unwrap();
        let v = tangent_vectors(&space, seed, 2);
        prop_assert!(u_tensor(&space, &v[0], &v[1]).unwrap().amax() <= 1e-10);
        let h = horizontal_vectors(&space, seed ^ 1, 2);
        let a = oneill_a(&space, &h[0], &h[1]).unwrap();
        let c = oneill_a_closed_form(&space, &h[0], &h[1]).unwrap();
        prop_assert!((a - c).amax() <= 1e-10);
    }

    #[test]
    fn full_pass_implies_first_order_screen(n in 2usize..=5, seed in any::<u64>(), pick in any::<usize>(), mode in 0usize..3) {
        let space = build_space(n).unwrap();
        let catalog = totgeo::catalog(&space).unwrap();
        let candidate = match mode {
            // Random line: always totally geodesic.
            0 => {
                let x = sampling::unit_vector(&mut sampling::rng(seed), space.dim_m());
                TgCandidate::custom("line", span_of(space.dim_m(), &[x], RANK_TOL))
            }
            1 => catalog[pick % catalog.len()].clone(),
            _ => totgeo::perturb(&catalog[pick % catalog.len()], 1e-3, seed).unwrap(),
        };
        let checker = TojoChecker::new(&space, Exec::Sequential);
        let opts = TojoOptions { seed, exec: Exec::Sequential, ..Default::default() };
        let report = checker.check(&candidate, &opts).unwrap();
        if mode < 2 {
            prop_assert!(report.passed, "{} residual {}", candidate.label(), report.max_residual);
        }
        if report.passed {
            prop_assert!(report.first_order_pass, "{}: first-order residual {}", candidate.label(), report.first_order_residual);
        }
    }

    #[test]
    fn orbit_dimension_stable_under_base_seed(seed in any::<u64>(), id in prop::sample::select(vec!["so-so", "u-so2", "u-so3", "sp-u2", "suu1-u", "g2"])) {
        let spec = actions::build_action(ActionRow::from_id(id, RowParams::default()).unwrap()).unwrap();
        let first = actions::orbit_dimension(&spec, seed);
        for i in 1..50 {
            prop_assert_eq!(actions::orbit_dimension(&spec, sampling::derive_seed(seed, i)), first);
        }
    }
}
