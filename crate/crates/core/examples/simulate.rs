//! RK4 integration of the full airfoil system near a stable fixed point,
//! plus the deviation vector along the same trajectory.
//!
//! ```text
//! cargo run --example simulate
//! ```

use kcc::expr::{parse_rational, Binding};
use kcc::models::builtin;
use kcc::numerics::{integrate, integrate_deviation};

fn main() -> kcc::Result<()> {
    let model = builtin("airfoil")?;
    let params = Binding::new()
        .with("Minf", parse_rational("2017/256").expect("rational"))
        .with("V", parse_rational("83/4").expect("rational"));
    let x0 = [0.155, -0.12];
    let traj = integrate(&model, &params, &x0, &[0.0, 0.0], 5.0, 1e-3)?;
    let (t, s) = traj.last().expect("non-empty trace");
    println!("t = {t}: state {s:?}");
    let dev = integrate_deviation(&model, &params, &x0, &[1e-4, 1e-5], 5.0, 1e-3)?;
    for (t, s) in dev.times.iter().zip(&dev.states).step_by(1000) {
        println!("t = {t:.1}  xi = ({:.3e}, {:.3e})", s[0], s[1]);
    }
    Ok(())
}
