use driftlap_core::bounds::{
    cheng_yang_upper, gap_bound_thm11, hile_protter_check, ppw_check, recursion_audit, yang_first_check,
    ConstantsBundle, GapExponent,
};
use driftlap_core::discretize::{assemble_schrodinger, Grid};
use driftlap_core::eigensolve::{smallest_k_pairs, Method, SolverConfig};
use driftlap_core::model_space::weighted_mean_of_f;
use driftlap_core::oracles::{interval_spectrum, ou_spectrum, product_spectrum, sphere_spectrum, torus_spectrum};
use driftlap_core::{Domain, Spectrum, WeightFunction};
use proptest::prelude::*;

fn sequence() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..5, 0.05f64..10.0, prop::collection::vec(0.0f64..3.0, 2..24)).prop_map(|(n, first, steps)| {
        let mut v = vec![first];
        for s in steps {
            let last = *v.last().unwrap();
            v.push(last + s);
        }
        (n, v)
    })
}

/// Extends a prefix with values chosen inside the interval allowed by the
/// first Yang inequality, so every prefix satisfies it.
fn yang_admissible(n: usize, c: f64, first: f64, fractions: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let mut v = vec![first];
    for &t in fractions {
        let k = v.len() as f64;
        let sum: f64 = v.iter().sum();
        let sum_sq: f64 = v.iter().map(|x| x * x).sum();
        let sum_mu: f64 = v.iter().map(|x| x + c).sum();
        let sum_lmu: f64 = v.iter().map(|x| x * (x + c)).sum();
        let b = -2.0 * sum - 4.0 / nf * sum_mu;
        let cc = sum_sq + 4.0 / nf * sum_lmu;
        let disc = b * b - 4.0 * k * cc;
        if disc < 0.0 {
            break;
        }
        let hi = (-b + disc.sqrt()) / (2.0 * k);
        let last = *v.last().unwrap();
        if hi <= last {
            break;
        }
        v.push(last + t * (hi - last));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn yang_first_implies_hile_protter_implies_ppw((n, v) in sequence()) {
        let s = Spectrum::from_values(v.clone(), 1, "random", n);
        for k in 1..v.len() {
            let y = yang_first_check(&s, n, k, 0.0).unwrap();
            let hp = hile_protter_check(&s, n, k, 0.0).unwrap();
            let ppw = ppw_check(&s, n, k, 0.0).unwrap();
            if y.holds() {
                prop_assert!(hp.holds(), "k={} {:?} {:?}", k, y, hp);
            }
            if hp.holds() {
                prop_assert!(ppw.holds(), "k={} {:?} {:?}", k, hp, ppw);
            }
        }
    }

    #[test]
    fn recursion_quantity_is_nonnegative_under_yang_first(
        n in 1usize..5,
        c in 0.0f64..3.0,
        first in 0.05f64..10.0,
        fractions in prop::collection::vec(0.0f64..0.999, 1..30),
    ) {
        let v = yang_admissible(n, c, first, &fractions);
        let s = Spectrum::from_values(v, 1, "admissible", n);
        for r in recursion_audit(&s, n, c).unwrap() {
            if let Some(p) = &r.premise {
                prop_assert!(p.holds());
            }
            let scale = r.state.t_mean.max(1.0);
            prop_assert!(r.state.f >= -1e-12 * scale, "{:?}", r.state);
        }
    }

    #[test]
    fn upper_bounds_are_monotone_in_c(
        lambda1 in 0.01f64..50.0,
        n in 1usize..6,
        k in 1usize..60,
        c1 in 0.0f64..10.0,
        dc in 0.0f64..10.0,
    ) {
        let c2 = c1 + dc;
        let c0 = 1.0 + 4.0 / n as f64;
        prop_assert!(cheng_yang_upper(lambda1, n, k, c1, c0) <= cheng_yang_upper(lambda1, n, k, c2, c0) + 1e-9);
        let b1 = ConstantsBundle::flat(n).with_c(c1);
        let b2 = ConstantsBundle::flat(n).with_c(c2);
        let g1 = gap_bound_thm11(lambda1, &b1, k, GapExponent::K).unwrap();
        let g2 = gap_bound_thm11(lambda1, &b2, k, GapExponent::K).unwrap();
        prop_assert!(g1 <= g2);
    }

    #[test]
    fn flat_bundle_specializes(lambda1 in 0.01f64..50.0, n in 1usize..6, k in 1usize..60) {
        let c0 = 1.0 + 4.0 / n as f64;
        let g = gap_bound_thm11(lambda1, &ConstantsBundle::flat(n), k, GapExponent::K).unwrap();
        let direct = 4.0 * lambda1 * (c0 / n as f64).sqrt() * (k as f64).powf(1.0 / n as f64);
        prop_assert!((g - direct).abs() <= 4.0 * f64::EPSILON * direct);
    }

    #[test]
    fn product_spectrum_commutes(m in 1usize..4, r in 0.3f64..3.0, a in 0.1f64..2.0, k in 1usize..30) {
        let s1 = sphere_spectrum(m, r, 80).unwrap();
        let s2 = ou_spectrum(1, a, 80).unwrap();
        let p = product_spectrum(&s1, &s2, k).unwrap();
        let q = product_spectrum(&s2, &s1, k).unwrap();
        prop_assert_eq!(p.eigenvalues, q.eigenvalues);
    }

    #[test]
    fn weighted_mean_is_translation_equivariant(a in -1.0f64..1.0, b in -2.0f64..2.0, t in -5.0f64..5.0) {
        let d = Domain::interval(-1.0, 2.0).unwrap();
        let f = WeightFunction::affine_quadratic(a, vec![b], 0.0);
        let g = WeightFunction::affine_quadratic(a, vec![b], t);
        let m1 = weighted_mean_of_f(&d, &f, 256).unwrap();
        let m2 = weighted_mean_of_f(&d, &g, 256).unwrap();
        prop_assert!((m2 - m1 - t).abs() < 1e-10 * (1.0 + m1.abs() + t.abs()));
    }

    #[test]
    fn interval_spectrum_is_domain_monotone(l in 0.5f64..5.0, dl in 0.0f64..5.0) {
        let small = interval_spectrum(l, 10).unwrap();
        let large = interval_spectrum(l + dl, 10).unwrap();
        for (a, b) in small.eigenvalues.iter().zip(&large.eigenvalues) {
            prop_assert!(b <= a);
        }
    }
}

#[test]
fn oracle_spectra_satisfy_the_chain() {
    let pi = std::f64::consts::PI;
    let catalog = [
        (interval_spectrum(pi, 40).unwrap(), 1),
        (driftlap_core::oracles::box_spectrum(&[pi, pi], 40).unwrap(), 2),
        (torus_spectrum(&[2.0 * pi, 2.0 * pi], 40).unwrap().with_index_base(1), 2),
        (ou_spectrum(2, 0.25, 40).unwrap().with_index_base(1), 2),
    ];
    for (s, n) in &catalog {
        for k in 1..30 {
            let y = yang_first_check(s, *n, k, 0.0).unwrap();
            let hp = hile_protter_check(s, *n, k, 0.0).unwrap();
            let p = ppw_check(s, *n, k, 0.0).unwrap();
            if y.holds() {
                assert!(hp.holds());
            }
            if hp.holds() {
                assert!(p.holds());
            }
        }
    }
}

#[test]
fn iterative_solver_is_deterministic_and_orthonormal() {
    let d = Domain::box_domain(vec![0.0, 0.0], vec![1.0, 1.5]).unwrap();
    let f = WeightFunction::quadratic(2, 0.3);
    let g = Grid::new(&d, vec![40, 50]).unwrap();
    let op = assemble_schrodinger(&d, &f, &g).unwrap();
    let cfg = SolverConfig { k: 8, method: Method::Iterative, ..SolverConfig::default() };
    let a = smallest_k_pairs(&op, &cfg).unwrap();
    let b = smallest_k_pairs(&op, &cfg).unwrap();
    assert_eq!(a.values, b.values);
    for i in 0..8 {
        for j in 0..8 {
            let d: f64 = a.vectors[i].iter().zip(&a.vectors[j]).map(|(x, y)| x * y).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((d - expect).abs() < 1e-8, "({i},{j}) {d}");
        }
    }
    let dense = smallest_k_pairs(&op, &SolverConfig { method: Method::Dense, ..cfg }).unwrap();
    for (x, y) in a.values.iter().zip(&dense.values) {
        assert!((x - y).abs() < 1e-8 * y.abs().max(1.0));
    }
}
