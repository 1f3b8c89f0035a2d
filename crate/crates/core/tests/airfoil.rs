mod common;

use common::*;
use kcc::models::builtin;
use kcc::stability::{
    airfoil_region_conditions, count_stable, find_fixed_points, Region, SearchBox, Verdict, DEFAULT_TOL,
};

#[test]
fn two_stable_points_in_c5() {
    let m = builtin("airfoil").unwrap();
    let p = airfoil_params("2017/256", "83/4");
    assert_eq!(airfoil_region_conditions(q("2017/256"), q("83/4")).unwrap().label, Some(Region::C5));
    let c = count_stable(&m, &p, &SearchBox::cube(2, -1.0, 1.0), 9, DEFAULT_TOL).unwrap();
    let got: Vec<(Vec<f64>, Verdict)> = c.reports.iter().map(|r| (r.fixed_point.x.clone(), r.verdict)).collect();
    let want = [([-0.1550, 0.1202], Verdict::Stable), ([0.0, 0.0], Verdict::Unstable), ([0.1550, -0.1202], Verdict::Stable)];
    assert_eq!(got.len(), 3);
    for ((x, v), (wx, wv)) in got.iter().zip(&want) {
        assert!((x[0] - wx[0]).abs() < 5e-4 && (x[1] - wx[1]).abs() < 5e-4, "{x:?}");
        assert_eq!(v, wv);
    }
    assert_eq!(c.k, 2);
}

#[test]
fn one_stable_point_in_c2() {
    let m = builtin("airfoil").unwrap();
    let p = airfoil_params("71/16384", "3/16");
    assert_eq!(airfoil_region_conditions(q("71/16384"), q("3/16")).unwrap().label, Some(Region::C2));
    let c = count_stable(&m, &p, &SearchBox::cube(2, -10.0, 10.0), 9, DEFAULT_TOL).unwrap();
    assert_eq!(c.reports.len(), 1);
    assert_eq!(c.reports[0].fixed_point.x, vec![0.0, 0.0]);
    assert_eq!(c.reports[0].verdict, Verdict::Stable);
    assert_eq!(c.k, 1);
}

#[test]
fn newton_roots_match_the_closed_form() {
    let m = builtin("airfoil").unwrap();
    for (ms, vs) in [("2017/256", "83/4"), ("1/2", "3"), ("40", "100"), ("3", "200")] {
        let (mf, vf) = (rational_f64(ms), rational_f64(vs));
        let ext = airfoil_fixed_point_extent(mf, vf);
        let fps = find_fixed_points(&m, &airfoil_params(ms, vs), &airfoil_box(mf, vf), 9).unwrap();
        if ext == [0.0, 0.0] {
            assert_eq!(fps.len(), 1, "{ms} {vs}");
            continue;
        }
        assert_eq!(fps.len(), 3, "{ms} {vs}");
        let hi = &fps[2].x;
        assert!((hi[0].abs() - ext[0]).abs() <= 1e-9 * ext[0].max(1.0), "{hi:?} vs {ext:?}");
        assert!((hi[1].abs() - ext[1]).abs() <= 1e-9 * ext[1].max(1.0), "{hi:?} vs {ext:?}");
    }
}

#[test]
fn region_label_predicts_the_count() {
    let m = builtin("airfoil").unwrap();
    for region in Region::ALL {
        let pts = sample_region(region, 10, 101 + region as u64);
        assert_eq!(pts.len(), 10, "{region}");
        for (ms, vs) in pts {
            let bx = airfoil_box(rational_f64(&ms), rational_f64(&vs));
            let c = count_stable(&m, &airfoil_params(&ms, &vs), &bx, 9, DEFAULT_TOL).unwrap();
            assert_eq!(c.indeterminate, 0, "{region} at ({ms}, {vs})");
            assert_eq!(c.k, region.stable_count(), "{region} at ({ms}, {vs})");
        }
    }
}
