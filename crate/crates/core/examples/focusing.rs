//! Focusing test near `t = 0⁺`: compare `‖ξ(t)‖²/‖W‖²` with `t²` at the four
//! wound-strings fixed points, where the exact answer is `4 sin²(t/2)`.
//!
//! ```text
//! cargo run --example focusing
//! ```

use kcc::expr::Binding;
use kcc::kcc::kcc_deviation;
use kcc::models::builtin;
use kcc::numerics::{focusing_profile, matrix_exp_solution, probe_times, DEFAULT_T_PROBE};

fn main() -> kcc::Result<()> {
    let model = builtin("wound_strings")?;
    let params = model.bind_params(&Binding::new())?;
    let w = [1e-5, 1e-4];
    for x in [[-2.0, -1.0], [-2.0, 1.0], [2.0, -1.0], [2.0, 1.0]] {
        let dev = kcc_deviation(&model).at_fixed_point(&params, &x)?;
        let trace = matrix_exp_solution(&dev, &w, &probe_times(DEFAULT_T_PROBE))?;
        let prof = focusing_profile(&trace, &w, DEFAULT_T_PROBE)?;
        let last = prof.times.len() - 1;
        println!(
            "{x:?}: {:?}  (at t = {}: |xi|^2/|W|^2 = {:.6}, t^2 = {:.6})",
            prof.verdict, prof.times[last], prof.norm_sq[last], prof.t_sq[last]
        );
    }
    Ok(())
}
