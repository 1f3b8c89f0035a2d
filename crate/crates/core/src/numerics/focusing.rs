//! Focusing diagnostic: the adapted squared norm `‖ξ(t)‖²/‖W‖²` compared
//! with `t²` just after `t = 0`.

use std::fmt;

use serde::Serialize;

use super::trace::{format_f64, Trace};
use crate::error::{Error, Result};

/// Default right end of the probe window `(0, t_probe]`.
pub const DEFAULT_T_PROBE: f64 = 0.5;
/// Samples used when a profile is generated on its own grid.
pub const PROBE_SAMPLES: usize = 100;
/// Relative band around `t²` treated as equality.
pub const EQUALITY_BAND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FocusVerdict {
    /// `‖ξ‖² < t²` at every probe sample.
    Bunching,
    /// `‖ξ‖² > t²` at every probe sample.
    Dispersing,
    Mixed,
}

impl fmt::Display for FocusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FocusVerdict::Bunching => "bunching",
            FocusVerdict::Dispersing => "dispersing",
            FocusVerdict::Mixed => "mixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocusingProfile {
    pub times: Vec<f64>,
    pub norm_sq: Vec<f64>,
    pub t_sq: Vec<f64>,
    pub verdict: FocusVerdict,
    pub t_probe: f64,
}

impl FocusingProfile {
    /// Header `t,norm_sq,t_sq`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,norm_sq,t_sq\n");
        for ((t, n), s) in self.times.iter().zip(&self.norm_sq).zip(&self.t_sq) {
            out.push_str(&format!("{},{},{}\n", format_f64(*t), format_f64(*n), format_f64(*s)));
        }
        out
    }
}

/// Profile of a deviation trace whose first `n` columns are `ξ`, with
/// `ξ(0) = 0` and `ξ̇(0) = W`.
pub fn focusing_profile(trace: &Trace, w: &[f64], t_probe: f64) -> Result<FocusingProfile> {
    let n = w.len();
    let w_sq: f64 = w.iter().map(|v| v * v).sum();
    if w_sq == 0.0 || !w_sq.is_finite() {
        return Err(Error::InvalidArgument("W must be nonzero and finite".into()));
    }
    if t_probe.is_nan() || t_probe <= 0.0 {
        return Err(Error::InvalidArgument(format!("probe window must be positive, got {t_probe}")));
    }
    if trace.states.first().is_some_and(|s| s.len() < n) {
        return Err(Error::Dimension("trace has fewer columns than W".into()));
    }
    let norm_sq: Vec<f64> =
        trace.states.iter().map(|s| s[..n].iter().map(|v| v * v).sum::<f64>() / w_sq).collect();
    let t_sq: Vec<f64> = trace.times.iter().map(|t| t * t).collect();
    let window: Vec<usize> =
        (0..trace.times.len()).filter(|&k| trace.times[k] > 0.0 && trace.times[k] <= t_probe * (1.0 + 1e-12)).collect();
    if window.len() < 3 {
        return Err(Error::DegenerateTrace(format!(
            "{} samples in the probe window (0, {t_probe}], need at least 3",
            window.len()
        )));
    }
    let mut below = true;
    let mut above = true;
    for &k in &window {
        let d = norm_sq[k] - t_sq[k];
        let band = EQUALITY_BAND * t_sq[k];
        below &= d < -band;
        above &= d > band;
    }
    let verdict = match (below, above) {
        (true, _) => FocusVerdict::Bunching,
        (_, true) => FocusVerdict::Dispersing,
        _ => FocusVerdict::Mixed,
    };
    Ok(FocusingProfile { times: trace.times.clone(), norm_sq, t_sq, verdict, t_probe })
}

/// `0` followed by [`PROBE_SAMPLES`] uniform times in `(0, t_probe]`.
pub fn probe_times(t_probe: f64) -> Vec<f64> {
    (0..=PROBE_SAMPLES).map(|k| t_probe * k as f64 / PROBE_SAMPLES as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_of(f: impl Fn(f64) -> f64) -> Trace {
        let times = probe_times(DEFAULT_T_PROBE);
        let states = times.iter().map(|&t| vec![f(t), 0.0]).collect();
        Trace { times, states, names: vec!["xi1".into(), "dxi1".into()], dt: 0.005, method: "test".into() }
    }

    #[test]
    fn equality_is_mixed() {
        let p = focusing_profile(&trace_of(|t| 3.0 * t), &[3.0], DEFAULT_T_PROBE).unwrap();
        assert_eq!(p.verdict, FocusVerdict::Mixed);
        assert_eq!(p.norm_sq[0], 0.0);
    }

    #[test]
    fn sine_bunches_and_sinh_disperses() {
        let p = focusing_profile(&trace_of(|t| 2.0 * (t / 2.0).sin()), &[1.0], DEFAULT_T_PROBE).unwrap();
        assert_eq!(p.verdict, FocusVerdict::Bunching);
        let p = focusing_profile(&trace_of(|t| 2.0 * (t / 2.0).sinh()), &[1.0], DEFAULT_T_PROBE).unwrap();
        assert_eq!(p.verdict, FocusVerdict::Dispersing);
    }

    #[test]
    fn short_trace_is_degenerate() {
        let mut tr = trace_of(|t| t);
        tr.times.truncate(2);
        tr.states.truncate(2);
        assert!(matches!(focusing_profile(&tr, &[1.0], 0.5), Err(Error::DegenerateTrace(_))));
    }

    #[test]
    fn csv_header() {
        let p = focusing_profile(&trace_of(|t| t), &[1.0], 0.5).unwrap();
        assert!(p.to_csv().starts_with("t,norm_sq,t_sq\n0.0000000000000000e0,"));
    }
}
