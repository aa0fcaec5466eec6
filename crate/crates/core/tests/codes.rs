use approx::assert_abs_diff_eq;
use spinqec::codes::{
    catalog_code, generate_code, multi_qudit_code, solve_coefficients, spin72_code, verify_kl,
    CodeFamily, CodePair, MultiQuditCode, OperatorChoice, CATALOG_NAMES,
};
use spinqec::spin::TOL;

#[test]
fn every_catalog_code_satisfies_kl_at_its_order() {
    for name in CATALOG_NAMES {
        let code = catalog_code(name).unwrap();
        let report = verify_kl(&code, code.order(), OperatorChoice::SingleSpin, TOL).unwrap();
        assert!(
            report.passed,
            "{name}: cross {:.2e} diag {:.2e}",
            report.normalized_cross_violation, report.normalized_diag_violation
        );
    }
}

#[test]
fn multi_qudit_codes_satisfy_collective_kl() {
    for which in [
        MultiQuditCode::ThreeSpinThreeHalves,
        MultiQuditCode::FourSpinSevenHalves,
    ] {
        let code = multi_qudit_code(which);
        let report = verify_kl(&code, code.order(), OperatorChoice::Collective, TOL).unwrap();
        assert!(report.passed, "{}", which.name());
    }
}

#[test]
fn generated_codes_satisfy_kl_and_mirror_symmetry() {
    for order in 1..=4 {
        for family in [CodeFamily::Even, CodeFamily::Odd] {
            let code = generate_code(order, family).unwrap();
            let spin = code.system().spins()[0];
            let mut zero: Vec<f64> = CodePair::support(code.zero_logical())
                .into_iter()
                .map(|i| spin.m(i))
                .collect();
            let mut one: Vec<f64> = CodePair::support(code.one_logical())
                .into_iter()
                .map(|i| -spin.m(i))
                .collect();
            zero.sort_by(f64::total_cmp);
            one.sort_by(f64::total_cmp);
            assert_eq!(zero, one, "N={order} {family}");

            let sol = solve_coefficients(order, family).unwrap();
            assert!(sol.relative_residual(&sol.squares_f64()) < TOL);
        }
    }
}

#[test]
fn generated_first_order_even_code_is_the_primary_code() {
    let generated = generate_code(1, CodeFamily::Even).unwrap();
    let (g0, g1) = generated.phase_fixed();
    let (p0, p1) = spin72_code().phase_fixed();
    assert!(g0.max_abs_diff(&p0) < 1e-14);
    assert!(g1.max_abs_diff(&p1) < 1e-14);
    // without phase fixing |1_L> differs by an overall sign
    let diff = generated.one_logical() + spin72_code().one_logical();
    assert!(diff.norm() < 1e-14);
}

#[test]
fn generated_codes_reproduce_catalog_entries() {
    let cases = [
        (1, CodeFamily::Odd, "spin92"),
        (2, CodeFamily::Even, "spin232"),
        (3, CodeFamily::Even, "spin472"),
        (4, CodeFamily::Odd, "spin812"),
    ];
    for (order, family, name) in cases {
        let generated = generate_code(order, family).unwrap();
        let catalogued = catalog_code(name).unwrap();
        for (g, c) in generated
            .codewords()
            .into_iter()
            .zip(catalogued.codewords())
        {
            let squares = |k: &spinqec::spin::Ket| -> Vec<f64> {
                k.to_vec().iter().map(|a| a.norm_sqr()).collect()
            };
            for (a, b) in squares(g).iter().zip(squares(c)) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn second_order_odd_family_matches_catalogued_fractions() {
    let sol = solve_coefficients(2, CodeFamily::Odd).unwrap();
    let got = sol.squares_f64();
    for (g, w) in got.iter().zip([1.0 / 16.0, 10.0 / 16.0, 5.0 / 16.0]) {
        assert_abs_diff_eq!(*g, w, epsilon = 1e-15);
    }
}

#[test]
fn fifth_order_code_is_generated_and_verified() {
    let code = generate_code(5, CodeFamily::Odd).unwrap();
    assert_eq!(code.system().dim(), 122);
    let sol = solve_coefficients(5, CodeFamily::Odd).unwrap();
    assert!(sol.condition_number > 1e12);
}
