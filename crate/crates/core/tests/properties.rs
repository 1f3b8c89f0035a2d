mod common;

use common::*;
use kcc::expr::{canonicalize, evaluate, parse, Binding, Expr, Value};
use kcc::models::{builtin, tractor_seat_case};
use kcc::numerics::expm;
use kcc::stability::{
    char_poly, char_poly_symbolic, eigen_verdict, find_fixed_points, hurwitz_determinants, hurwitz_verdict,
    SearchBox, Verdict,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::symbol("x")),
        Just(Expr::symbol("y")),
        (-5i64..=5).prop_map(Expr::int),
        (1i64..=5, 2i64..=7).prop_map(|(n, d)| Expr::ratio(n, d)),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::mul),
            (inner.clone(), 0i64..=3).prop_map(|(b, k)| Expr::pow(b, k)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, Expr::add(vec![Expr::int(3), Expr::pow(b, 2)]))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::sub(a, b)),
        ]
    })
}

fn at(e: &Expr, x: f64, y: f64) -> Option<f64> {
    let b = Binding::new().with("x", Value::Float(x)).with("y", Value::Float(y));
    let v = evaluate(e, &b).ok()?.to_f64();
    v.is_finite().then_some(v)
}

/// Five-point central difference in `x`.
fn fd(e: &Expr, x: f64, y: f64) -> Option<f64> {
    let h = 1e-3;
    let f = |d: f64| at(e, x + d, y);
    Some((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
}

fn matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (prop::collection::vec(-1.0f64..1.0, n * n), 0.0f64..2.0)
        .prop_map(move |(v, shift)| DMatrix::from_row_slice(n, n, &v) - DMatrix::identity(n, n) * shift)
}

fn any_matrix() -> impl Strategy<Value = DMatrix<f64>> {
    (2usize..=5).prop_flat_map(matrix)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn derivatives_match_finite_differences(e in expr(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let d = e.differentiate("x");
        let exact = at(&d, x, y);
        let approx = fd(&e, x, y);
        prop_assume!(exact.is_some() && approx.is_some());
        let (exact, approx) = (exact.unwrap(), approx.unwrap());
        prop_assume!(exact.abs() < 1e6);
        prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1.0), "d/dx {} = {}: {exact} vs {approx}", e, d);
    }

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let back = parse(&e.to_string()).unwrap();
        prop_assert!(same(&e, &back), "{}", e);
        prop_assert_eq!(back.to_string(), e.to_string());
    }

    #[test]
    fn canonical_form_is_idempotent(e in expr()) {
        let c = canonicalize(&e).unwrap();
        let again = canonicalize(&c.to_expr()).unwrap();
        prop_assert_eq!(c.to_expr().to_string(), again.to_expr().to_string());
        prop_assert!(same(&e, &c.to_expr()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, max_global_rejects: 5000, ..ProptestConfig::default() })]

    #[test]
    fn routh_hurwitz_agrees_with_eigenvalues(p in any_matrix()) {
        let cp = char_poly(&p).unwrap();
        let n = cp.degree();
        let delta = hurwitz_determinants(&cp);
        prop_assume!(cp.a(n as i64).abs() > 1e-6 && delta.iter().all(|d| d.abs() > 1e-6));
        let (rh, _) = hurwitz_verdict(&cp, 1e-9);
        let (ev, eig) = eigen_verdict(&p, 1e-9);
        prop_assume!(ev != Verdict::Indeterminate);
        prop_assert_eq!(rh, ev, "eigenvalues {:?}", eig);
    }

    #[test]
    fn faddeev_leverrier_matches_determinants(p in any_matrix()) {
        let cp = char_poly(&p).unwrap();
        let n = p.nrows();
        for lambda in [0.0, 1.0, -1.0, 2.0] {
            let det = (DMatrix::identity(n, n) * lambda - &p).determinant();
            let got = cp.eval(lambda);
            prop_assert!((got - det).abs() <= 1e-9 * det.abs().max(1.0), "λ = {lambda}: {got} vs {det}");
        }
    }

    #[test]
    fn last_hurwitz_determinant_factors(p in any_matrix()) {
        let cp = char_poly(&p).unwrap();
        let d = hurwitz_determinants(&cp);
        let n = cp.degree();
        let want = cp.a(n as i64) * d[n - 2];
        prop_assert!((d[n - 1] - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn exponential_semigroup(a in any_matrix(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let lhs = expm(&(&a * (s + t))).unwrap();
        let rhs = expm(&(&a * s)).unwrap() * expm(&(&a * t)).unwrap();
        let scale = lhs.amax().max(1.0);
        prop_assert!((lhs - rhs).amax() <= 1e-10 * scale);
    }

    #[test]
    fn symbolic_and_numeric_characteristic_polynomials_agree(
        v in prop::collection::vec(-9i64..=9, 9),
        d in prop::collection::vec(1i64..=4, 9),
    ) {
        let entries: Vec<Expr> = v.iter().zip(&d).map(|(n, d)| Expr::ratio(*n, *d)).collect();
        let rows: Vec<Vec<Expr>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let sym = char_poly_symbolic(&rows);
        let num: Vec<f64> = v.iter().zip(&d).map(|(n, d)| *n as f64 / *d as f64).collect();
        let cp = char_poly(&DMatrix::from_row_slice(3, 3, &num)).unwrap();
        for (k, a) in sym.iter().enumerate() {
            let exact = evaluate(a, &Binding::new()).unwrap().to_f64();
            prop_assert!((exact - cp.coeffs[k]).abs() <= 1e-9 * exact.abs().max(1.0));
        }
    }
}

#[test]
fn fixed_points_survive_grid_refinement() {
    let cases: Vec<(&str, Binding, SearchBox)> = vec![
        ("wound_strings", Binding::new(), SearchBox::cube(2, -4.0, 4.0)),
        ("wound_strings", Binding::new(), SearchBox::cube(2, -10.0, 10.0)),
        ("airfoil", airfoil_params("2017/256", "83/4"), SearchBox::cube(2, -1.0, 1.0)),
        ("airfoil", airfoil_params("71/16384", "3/16"), SearchBox::cube(2, -10.0, 10.0)),
        ("tractor_seat", tractor_seat_case(9).unwrap(), SearchBox::cube(3, -10.0, 10.0)),
    ];
    for (name, params, bx) in cases {
        let m = builtin(name).unwrap();
        let coarse = find_fixed_points(&m, &params, &bx, 9).unwrap();
        let fine = find_fixed_points(&m, &params, &bx, 17).unwrap();
        assert_eq!(coarse.len(), fine.len(), "{name}");
        for (a, b) in coarse.iter().zip(&fine) {
            let d = a.x.iter().zip(&b.x).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
            assert!(d < 1e-6, "{name}: {:?} vs {:?}", a.x, b.x);
        }
    }
}
