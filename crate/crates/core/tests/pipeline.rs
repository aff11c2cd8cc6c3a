use std::f64::consts::PI;

use num_complex::Complex64 as C;

use orbitchar::coherent::{verify_translates_eigen, CoherentFamily};
use orbitchar::compact_char::{dimension, weight_multiplicities, weyl_character};
use orbitchar::cycle_integral::{
    compare_with_pairing, holomorphy_probe, integrate_character_cycle, CycleOptions,
};
use orbitchar::eigendist::{pair_algebra, verify_eigendistribution};
use orbitchar::fixed_point::{
    admissible_contraction_choices, coefficient_table, component_representative, discrete_series,
    euler_coefficient_with, induced_expression, Route,
};
use orbitchar::lie_core::{build_root_system, Weight};
use orbitchar::orbit_geom::{conormal_circle_cycle, dlogf_graph_cycle, omega_orbit_cycle};
use orbitchar::real_structure::{
    CartanElement, Component, FixedPoint, OrbitLabel, StandardSheafDescriptor,
};
use orbitchar::testfn::TestFunction;

#[test]
fn compact_examples() {
    let a1 = build_root_system("A1").unwrap();
    let a2 = build_root_system("A2").unwrap();
    let v = |rs, l: &[i64], th: &[f64]| weyl_character(rs, &Weight::from_ints(l), th).unwrap();
    assert!((v(&a1, &[0], &[0.4]) - 1.0).norm() < 1e-12);
    assert!((v(&a1, &[1], &[PI / 3.0]) - 1.0).norm() < 1e-12);
    assert!((v(&a1, &[2], &[PI / 2.0]) + 1.0).norm() < 1e-12);
    let m = weight_multiplicities(&a2, &Weight::from_ints(&[1, 1])).unwrap();
    assert_eq!(m[&Weight::from_ints(&[0, 0])], 2);
    assert_eq!(dimension(&a2, &Weight::from_ints(&[1, 1])).unwrap(), 8);
    for mm in 0..6 {
        assert_eq!(
            dimension(&a1, &Weight::from_ints(&[mm])).unwrap(),
            mm as u64 + 1
        );
    }
}

#[test]
fn recipes_agree_on_every_choice() {
    let sheaves = [
        StandardSheafDescriptor::new(OrbitLabel::UpperHalfPlane, C::new(-2.0, 0.0), 1).unwrap(),
        StandardSheafDescriptor::new(OrbitLabel::LowerHalfPlane, C::new(-1.0, 0.0), 1).unwrap(),
        StandardSheafDescriptor::new(OrbitLabel::RealCircle, C::new(0.0, 0.5), -1).unwrap(),
    ];
    for sheaf in &sheaves {
        for comp in Component::all() {
            let t = component_representative(comp);
            for x in FixedPoint::for_cartan(comp.kind()) {
                let mut seen = Vec::new();
                for choice in admissible_contraction_choices(t, x).unwrap() {
                    for route in [Route::Contracting, Route::Expanding] {
                        seen.push(euler_coefficient_with(sheaf, comp, x, choice, route).unwrap());
                    }
                }
                assert!(
                    seen.windows(2).all(|w| w[0] == w[1]),
                    "{comp} {x}: {seen:?}"
                );
            }
        }
        assert_eq!(coefficient_table(sheaf).unwrap().len(), 12);
    }
}

#[test]
fn discrete_series_through_both_cycles() {
    let phi = TestFunction::gaussian([0.2, -0.1, 0.3], 0.8)
        .unwrap()
        .with_id("g");
    for k in 1..=2 {
        let l = C::new(-f64::from(k), 0.0);
        let e = discrete_series(OrbitLabel::UpperHalfPlane, k).unwrap();
        let g = compare_with_pairing(
            "graph",
            &e,
            &dlogf_graph_cycle(OrbitLabel::UpperHalfPlane, l).unwrap(),
            &phi,
        )
        .unwrap();
        let o = compare_with_pairing(
            "orbit",
            &e,
            &omega_orbit_cycle(OrbitLabel::UpperHalfPlane, l).unwrap(),
            &phi,
        )
        .unwrap();
        assert!(g.rel_error < 1e-6 && o.rel_error < 1e-6, "{g:?} {o:?}");
    }
}

#[test]
fn lower_sheet_discrete_series() {
    let phi = TestFunction::gaussian([-0.3, 0.2, 0.1], 0.9)
        .unwrap()
        .with_id("g");
    let e = discrete_series(OrbitLabel::LowerHalfPlane, 2).unwrap();
    let cyc = omega_orbit_cycle(OrbitLabel::LowerHalfPlane, C::new(-2.0, 0.0)).unwrap();
    let r = compare_with_pairing("lower", &e, &cyc, &phi).unwrap();
    assert!(r.rel_error < 1e-6, "{r:?}");
}

#[test]
fn cycle_orientation_and_tails() {
    let phi = TestFunction::gaussian([0.1, 0.4, -0.2], 0.7).unwrap();
    let opts = CycleOptions::default();
    let cyc = conormal_circle_cycle(C::new(0.0, 0.5));
    let a = integrate_character_cycle(&cyc, &phi, &opts).unwrap();
    let b = integrate_character_cycle(&cyc.flipped(), &phi, &opts).unwrap();
    assert_eq!(a.value, -b.value);
    assert!(a.converged);
    assert!(
        a.tails.windows(2).all(|w| w[1] <= w[0] + 1e-12),
        "{:?}",
        a.tails
    );
    let pairing = pair_algebra(&induced_expression(1, C::new(0.0, 0.5)).unwrap(), &phi).unwrap();
    assert!((a.value - pairing.value).norm() <= 1e-6 * pairing.value.norm());
}

#[test]
fn integral_is_holomorphic_in_the_parameter() {
    let phi = TestFunction::gaussian([0.0, 0.3, 0.1], 0.8).unwrap();
    let p = holomorphy_probe(conormal_circle_cycle, &phi, C::new(0.0, 0.5), 1e-4).unwrap();
    assert!(p.stable, "{p:?}");
}

#[test]
fn principal_series_eigen() {
    let battery = TestFunction::battery(2, 11);
    let nu = C::new(0.0, 0.7);
    let r = verify_eigendistribution(&induced_expression(-1, nu).unwrap(), nu, &battery).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn translates_stay_eigendistributions() {
    let fam = CoherentFamily::new(discrete_series(OrbitLabel::UpperHalfPlane, 1).unwrap());
    let reports = verify_translates_eigen(&fam, &[-1, 1, 2], &TestFunction::battery(3, 7)).unwrap();
    for (n, r) in reports {
        assert!(r.pass, "translate {n}: {r:?}");
    }
    // the translate at l = 0 is the antisymmetrized member
    let z = fam.member(1);
    assert!(z.check_symmetry());
    assert!(z
        .evaluate_group(CartanElement::Compact { theta: 0.8 })
        .is_ok());
}
