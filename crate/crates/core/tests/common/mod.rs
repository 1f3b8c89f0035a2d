#![allow(dead_code)]

use kcc::expr::{parse, parse_rational, semantically_equal, Binding, Expr, Value};

pub fn q(s: &str) -> Value {
    Value::Exact(parse_rational(s).expect("rational literal"))
}

pub fn e(s: &str) -> Expr {
    parse(s).expect("expression literal")
}

pub fn same(a: &Expr, b: &Expr) -> bool {
    semantically_equal(a, b).expect("canonicalizable")
}

pub fn airfoil_params(minf: &str, v: &str) -> Binding {
    Binding::new().with("Minf", q(minf)).with("V", q(v))
}

/// Published deviation curvature tensor of the wound-string model, row-major.
pub const WS4: [&str; 4] = [
    "-(2*C^2*a^6*x1^6 + 7*C^2*a^4*m^2*x1^4*x2^2 + 8*C^2*a^2*m^4*x1^2*x2^4 + 3*C^2*m^6*x2^6 \
      - 3*y2*x1^5*a^2*y1*m^2*x2^3 - 2*a^4*x1^6*x2^2 + a^2*m^2*x1^4*x2^4 + 2*a^2*x1^6*x2^2*y2^2 \
      - m^2*x1^4*x2^4*y2^2)/(x1^4*x2^2*(a^2*x1^2 + m^2*x2^2)^2)",
    "-(3*C^2*a^6*x1^4 + 6*C^2*a^4*m^2*x1^2*x2^2 + 3*C^2*a^2*m^4*x2^4 + 3*a^2*m^2*x1^2*x2^4*y1^2 \
      - 3*a^2*m^2*x1^2*x2^4 - 2*a^2*x1^3*x2^3*y1*y2 + m^2*x1*x2^5*y1*y2)/(x1*x2^3*(a^2*x1^2 + m^2*x2^2)^2)",
    "-a^2*m^2*(3*C^2*a^4*x1^4 + 6*C^2*a^2*m^2*x1^2*x2^2 + 3*C^2*m^4*x2^4 + a^2*x1^5*x2*y1*y2 \
      - 2*y2*m^2*y1*x1^3*x2^3 - 3*a^2*x1^4*x2^2 + 3*y2^2*x1^4*x2^2)/(x1^3*x2*(a^2*x1^2 + m^2*x2^2)^2)",
    "-a^2*(3*C^2*a^6*x1^6 + 8*C^2*a^4*m^2*x1^4*x2^2 + 7*C^2*a^2*m^4*x1^2*x2^4 + 2*C^2*m^6*x2^6 \
      - y1^2*x2^4*m^2*a^2*x1^4 + 2*m^4*x1^2*x2^6*y1^2 + a^2*m^2*x1^4*x2^4 - 2*m^4*x1^2*x2^6 \
      - 3*m^2*x1^3*x2^5*y1*y2)/(x1^2*x2^4*(a^2*x1^2 + m^2*x2^2)^2)",
];

/// Maximum absolute difference between two equally shaped traces.
pub fn max_diff(a: &kcc::numerics::Trace, b: &kcc::numerics::Trace) -> f64 {
    assert_eq!(a.len(), b.len());
    a.states
        .iter()
        .zip(&b.states)
        .flat_map(|(u, v)| u.iter().zip(v).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

/// Log-uniform sampling windows `(M lo, M hi, V lo, V hi)` that contain
/// each region's visible part of the parameter plane.
pub const REGION_WINDOWS: [(f64, f64, f64, f64); 5] = [
    (10.0, 1e4, 0.5, 1e3),
    (1e-4, 1e4, 1e-3, 30.0),
    (10.0, 1e4, 20.0, 1e3),
    (4e-3, 8.0, 0.5, 500.0),
    (2e-2, 10.0, 1.0, 30.0),
];

/// A dyadic rational close to `v`, exact once parsed.
pub fn dyadic(v: f64) -> String {
    let scale = 1u64 << 24;
    let n = (v * scale as f64).round().max(1.0) as u64;
    format!("{n}/{scale}")
}

/// Airfoil positions bounding every fixed point at `(M, V)`: the nonzero
/// pair solves `x2² = 5(50M − V²)/(M(MV² − 5000))`, `x1` follows linearly.
pub fn airfoil_fixed_point_extent(m: f64, v: f64) -> [f64; 2] {
    let s = 5.0 * (50.0 * m - v * v) / (m * (m * v * v - 5000.0));
    if s <= 0.0 {
        return [0.0, 0.0];
    }
    let x2 = s.sqrt();
    let x1 = x2 * (m * m * v * v * s - 1000.0 * m * s - 50.0 * m + 5.0 * v * v) / (200.0 * m);
    [x1.abs(), x2]
}

/// Search box twice the closed-form extent on each axis, at least `[−1, 1]`.
pub fn airfoil_box(m: f64, v: f64) -> kcc::stability::SearchBox {
    let h = airfoil_fixed_point_extent(m, v).map(|e| (2.0 * e).max(1.0));
    kcc::stability::SearchBox::new(vec![-h[0], -h[1]], h.to_vec()).unwrap()
}

/// `count` rational parameter points whose first satisfied region is
/// `region`, drawn deterministically from `seed`.
pub fn sample_region(region: kcc::stability::Region, count: usize, seed: u64) -> Vec<(String, String)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mlo, mhi, vlo, vhi) = REGION_WINDOWS[region as usize];
    let mut out = Vec::with_capacity(count);
    for _ in 0..2_000_000 {
        if out.len() == count {
            break;
        }
        let m = dyadic(10f64.powf(rng.gen_range(mlo.log10()..mhi.log10())));
        let v = dyadic(10f64.powf(rng.gen_range(vlo.log10()..vhi.log10())));
        let r = kcc::stability::airfoil_region_conditions(q(&m), q(&v)).unwrap();
        if r.label == Some(region) {
            out.push((m, v));
        }
    }
    out
}

pub fn rational_f64(s: &str) -> f64 {
    q(s).to_f64()
}
