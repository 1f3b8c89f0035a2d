//! Sampled time series and their CSV form.

use serde::Serialize;

use crate::error::{Error, Result};

/// States sampled on a uniform time grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trace {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Column names of a state vector.
    pub names: Vec<String>,
    /// Grid spacing (zero for a single sample).
    pub dt: f64,
    pub method: String,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        Some((*self.times.last()?, self.states.last()?.as_slice()))
    }

    /// Column `name` over time.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidArgument(format!("trace has no column `{name}`")))?;
        Ok(self.states.iter().map(|s| s[k]).collect())
    }

    /// Header `t,<names>` then one row per sample, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            out.push_str(&format_f64(*t));
            for v in s {
                out.push(',');
                out.push_str(&format_f64(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `n` sample count for a grid from 0 to at least `t_end` with step `dt`.
pub(crate) fn grid_steps(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {dt}")));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("end time must be positive, got {t_end}")));
    }
    Ok((t_end / dt - 1e-9).ceil().max(1.0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let tr = Trace {
            times: vec![0.0, 0.5],
            states: vec![vec![1.0, -2.0], vec![0.1, 1.0 / 3.0]],
            names: vec!["x1".into(), "y1".into()],
            dt: 0.5,
            method: "test".into(),
        };
        let csv = tr.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x1,y1");
        assert_eq!(lines[2], "5.0000000000000000e-1,1.0000000000000001e-1,3.3333333333333331e-1");
        let back: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
        assert_eq!(tr.column("y1").unwrap(), vec![-2.0, 1.0 / 3.0]);
        assert!(tr.column("z").is_err());
    }

    #[test]
    fn grid_rules() {
        assert_eq!(grid_steps(10.0, 1e-3).unwrap(), 10000);
        assert_eq!(grid_steps(1.0, 0.3).unwrap(), 4);
        assert!(grid_steps(1.0, 0.0).is_err());
        assert!(grid_steps(-1.0, 0.1).is_err());
    }
}
