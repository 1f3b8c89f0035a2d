//! Newton search for the fixed points of the airfoil model inside a box.
//!
//! ```text
//! cargo run --example fixed_points
//! ```

use kcc::expr::{parse_rational, Binding};
use kcc::models::builtin;
use kcc::stability::{find_fixed_points, SearchBox};

fn main() -> kcc::Result<()> {
    let model = builtin("airfoil")?;
    let params = Binding::new()
        .with("Minf", parse_rational("2017/256").expect("rational"))
        .with("V", parse_rational("83/4").expect("rational"));
    let points = find_fixed_points(&model, &params, &SearchBox::cube(2, -10.0, 10.0), 9)?;
    for fp in &points {
        println!("x = {:?}  residual = {:.1e}  backward error = {:.1e}", fp.x, fp.residual, fp.backward_error);
    }
    Ok(())
}
