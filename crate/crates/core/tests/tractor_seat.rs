use kcc::expr::Binding;
use kcc::kcc::kcc_deviation;
use kcc::models::{builtin, tractor_seat_case};
use kcc::numerics::{focusing_profile, matrix_exp_solution, probe_times};
use kcc::stability::{count_stable, SearchBox, Verdict, DEFAULT_TOL};

#[test]
fn every_case_has_one_unstable_fixed_point() {
    let m = builtin("tractor_seat").unwrap();
    for case in 1..=9 {
        let p = tractor_seat_case(case).unwrap();
        let c = count_stable(&m, &p, &SearchBox::cube(3, -10.0, 10.0), 9, DEFAULT_TOL).unwrap();
        assert_eq!(c.reports.len(), 1, "case {case}");
        assert_eq!(c.reports[0].fixed_point.x, vec![0.0; 3], "case {case}");
        assert_eq!(c.reports[0].verdict, Verdict::Unstable, "case {case}");
        assert_eq!(c.k, 0);
    }
}

#[test]
fn defaults_are_case_one() {
    let m = builtin("tractor_seat").unwrap();
    let d = m.bind_params(&Binding::new()).unwrap();
    let c1 = m.bind_params(&tractor_seat_case(1).unwrap()).unwrap();
    for name in &m.params {
        assert_eq!(d.get(name).unwrap().to_f64(), c1.get(name).unwrap().to_f64(), "{name}");
    }
    assert!(tractor_seat_case(0).is_err() && tractor_seat_case(10).is_err());
}

/// With `ξ(0) = 0` and `ξ'(0) = W`, `‖ξ‖² − t²|W|² = t³ WᵀA22W + O(t⁴)`, so
/// near `t = 0` the damping block decides the sign, not the curvature.
#[test]
fn small_time_focusing_follows_the_damping_form() {
    let m = builtin("tractor_seat").unwrap();
    let w = [1e-5, 1e-4, 1e-4];
    let w2: f64 = w.iter().map(|v| v * v).sum();
    for case in [1, 9] {
        let b = m.bind_params(&tractor_seat_case(case).unwrap()).unwrap();
        let dev = kcc_deviation(&m).at_fixed_point(&b, &[0.0; 3]).unwrap();
        let form: f64 = (0..3).map(|i| (0..3).map(|j| w[i] * dev.a22[(i, j)] * w[j]).sum::<f64>()).sum::<f64>() / w2;
        let t = 1e-5;
        let tr = matrix_exp_solution(&dev, &w, &[0.0, t]).unwrap();
        let xi = &tr.states[1][..3];
        let ns: f64 = xi.iter().map(|v| v * v).sum::<f64>() / w2;
        let lead = (ns - t * t) / t.powi(3);
        assert!((lead - form).abs() < 1e-2 * form.abs(), "case {case}: {lead} vs {form}");
        assert!(form < 0.0);
        let prof = focusing_profile(&matrix_exp_solution(&dev, &w, &probe_times(0.5)).unwrap(), &w, 0.5).unwrap();
        assert!(prof.norm_sq[1] < prof.t_sq[1], "case {case}: first probe sample bunches");
    }
}

/// Deviation coefficients against the hand-derived linear system. The damping
/// terms of the third row act on `ξ̇2` and `ξ̇3`.
#[test]
fn deviation_system_matches_the_mass_spring_damper_chain() {
    let m = builtin("tractor_seat").unwrap();
    let p = tractor_seat_case(9).unwrap();
    let b = m.bind_params(&p).unwrap();
    let v = |n: &str| b.get(n).unwrap().to_f64();
    let (m1, m2, m3) = (v("M1"), v("M2"), v("M3"));
    let (k1, k2, k3, c1, c2, c3) = (v("K1"), v("K2"), v("K3"), v("C1"), v("C2"), v("C3"));
    let a21 = [
        [-(k1 + k2) / m1, k2 / m1, 0.0],
        [k2 / m2, -(k2 + k3) / m2, k3 / m2],
        [0.0, -k3 / m3, k3 / m3],
    ];
    let a22 = [
        [-(c1 + c2) / m1, c2 / m1, 0.0],
        [c2 / m2, -(c2 + c3) / m2, c3 / m2],
        [0.0, -c3 / m3, c3 / m3],
    ];
    let dev = kcc_deviation(&m).at_fixed_point(&b, &[0.0; 3]).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((dev.a21[(i, j)] - a21[i][j]).abs() <= 1e-12 * a21[i][j].abs().max(1.0), "A21[{i}][{j}]");
            assert!((dev.a22[(i, j)] - a22[i][j]).abs() <= 1e-12 * a22[i][j].abs().max(1.0), "A22[{i}][{j}]");
        }
    }
}
