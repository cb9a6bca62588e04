use masseylab::linalg::{kernel_basis, rat, Rational};
use masseylab::massey::{
    admissible_triple_count, massey_pair_sum_scan, massey_with_primitives, MasseyStatus,
};
use masseylab::models::{BlowupSpec, CircleBundleSpec, ModelSpec, QkOrbifoldSpec};
use masseylab::spec_file::{export_algebra, load_algebra};
use masseylab::{
    betti_vector, cohomology_basis, cup, massey_scan, massey_triple, Algebra, Cochain,
    CohomologyClass,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_cocycle(rng: &mut StdRng, alg: &Algebra, k: usize) -> Cochain {
    let z = kernel_basis(alg.differential_matrix(k).unwrap());
    let mut v = vec![rat(0); alg.dim(k)];
    for b in z.vectors() {
        let c = rat(rng.gen_range(-3..=3));
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    alg.cochain(k, v).unwrap()
}

fn basis_triples(alg: &Algebra, top: usize) -> Vec<[CohomologyClass; 3]> {
    let bases: Vec<Vec<CohomologyClass>> = (0..=top)
        .map(|k| cohomology_basis(alg, k).unwrap())
        .collect();
    let mut out = Vec::new();
    for p1 in 1..=top {
        for p2 in 1..=top {
            for p3 in 1..=top {
                if p1 + p2 + p3 - 1 > top {
                    continue;
                }
                for a in &bases[p1] {
                    for b in &bases[p2] {
                        for c in &bases[p3] {
                            out.push([a.clone(), b.clone(), c.clone()]);
                        }
                    }
                }
            }
        }
    }
    out
}

fn models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::ThreeSasakian(QkOrbifoldSpec::unit(2)),
        ModelSpec::ThreeSasakian(QkOrbifoldSpec {
            k: 2,
            lambdas: vec![rat(3), Rational::new((-2).into(), 5.into())],
        }),
        ModelSpec::Blowup(BlowupSpec::new(2)),
        ModelSpec::SasakiCircle(CircleBundleSpec::new(2, 10)),
    ]
}

#[test]
fn verdict_is_independent_of_primitive_choice() {
    let mut rng = StdRng::seed_from_u64(3);
    for spec in models() {
        let alg = spec.build().unwrap();
        let top = alg.top_analyzable_degree();
        for [c1, c2, c3] in basis_triples(&alg, top) {
            let r = massey_triple(&c1, &c2, &c3).unwrap();
            let Some(base) = r.defined() else { continue };
            let [p1, p2, p3] = r.degrees;
            for _ in 0..25 {
                let x = base
                    .x
                    .add(&random_cocycle(&mut rng, &alg, p1 + p2 - 1))
                    .unwrap();
                let y = base
                    .y
                    .add(&random_cocycle(&mut rng, &alg, p2 + p3 - 1))
                    .unwrap();
                let moved = massey_with_primitives(&c1, &c2, &c3, &x, &y).unwrap();
                let moved = moved.defined().unwrap();
                assert_eq!(moved.trivial, base.trivial, "{spec}");
                assert_eq!(moved.indeterminacy, base.indeterminacy);
                let diff: Vec<Rational> = moved
                    .representative
                    .coords()
                    .iter()
                    .zip(base.representative.coords())
                    .map(|(a, b)| a - b)
                    .collect();
                assert!(base.indeterminacy.member(&diff).unwrap(), "{spec}");
            }
        }
    }
}

#[test]
fn undefined_status_matches_cup_products() {
    for spec in models() {
        let alg = spec.build().unwrap();
        for [c1, c2, c3] in basis_triples(&alg, alg.top_analyzable_degree()) {
            let left = !cup(&c1, &c2).unwrap().is_zero();
            let right = !cup(&c2, &c3).unwrap().is_zero();
            match massey_triple(&c1, &c2, &c3).unwrap().status {
                MasseyStatus::Undefined {
                    left_product_nonzero,
                    right_product_nonzero,
                } => {
                    assert!(left || right);
                    assert_eq!((left_product_nonzero, right_product_nonzero), (left, right));
                }
                MasseyStatus::Defined(_) => assert!(!left && !right),
            }
        }
    }
}

#[test]
fn scans_are_complete() {
    for spec in models() {
        let alg = spec.build().unwrap();
        let top = alg.top_analyzable_degree();
        let betti = betti_vector(&alg, top).unwrap();
        let report = massey_scan(&alg, top).unwrap();
        assert_eq!(report.entries.len(), admissible_triple_count(&betti, top));
        assert_eq!(report.entries.len(), basis_triples(&alg, top).len());
        assert_eq!(report.defined, report.trivial + report.nontrivial);
    }
}

#[test]
fn three_sasakian_non_formality_iff_second_betti_at_least_two() {
    for k in 1..=6 {
        let alg = ModelSpec::ThreeSasakian(QkOrbifoldSpec::unit(k))
            .build()
            .unwrap();
        let report = massey_scan(&alg, 7).unwrap();
        assert_eq!(report.nontrivial > 0, k >= 2, "k = {k}");
        if k >= 2 {
            assert_eq!(
                report.first_nontrivial().unwrap().triple_label(),
                "<a1, a1, a2>"
            );
        }
    }
}

#[test]
fn circle_model_is_independent_of_euler_coefficient() {
    for k in 1..=3 {
        let runs: Vec<_> = [1, 10, 1000]
            .iter()
            .map(|&ell| {
                let alg = ModelSpec::SasakiCircle(CircleBundleSpec::new(k, ell))
                    .build()
                    .unwrap();
                let scan = massey_pair_sum_scan(&alg, 7, 1).unwrap();
                (
                    betti_vector(&alg, 7).unwrap(),
                    scan.defined,
                    scan.nontrivial,
                )
            })
            .collect();
        assert_eq!(runs[0].0, vec![1, 0, k, 0, 0, k, 0, 1]);
        assert_eq!(runs[0].2, 0);
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "k = {k}");
    }
}

#[test]
fn built_in_models_round_trip_through_files() {
    let specs = [
        ModelSpec::QkOrbifold(QkOrbifoldSpec::unit(2)),
        ModelSpec::ThreeSasakian(QkOrbifoldSpec::unit(2)),
        ModelSpec::Blowup(BlowupSpec::new(2)),
        ModelSpec::SasakiCircle(CircleBundleSpec::new(2, 10)),
    ];
    for spec in specs {
        let alg = spec.build().unwrap();
        let text = export_algebra(&alg);
        let back = load_algebra(&text).unwrap();
        assert_eq!(back.label(), alg.label());
        assert_eq!(export_algebra(&back), text, "{spec}");
        let top = alg.top_analyzable_degree();
        assert_eq!(
            betti_vector(&back, top).unwrap(),
            betti_vector(&alg, top).unwrap()
        );
    }
}
