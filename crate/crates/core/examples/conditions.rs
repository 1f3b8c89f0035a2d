//! Semialgebraic system whose real solutions are the Jacobi-stable fixed
//! points: fixed-point equations, nonvanishing denominators and the
//! Hurwitz inequalities, all as polynomials.
//!
//! ```text
//! cargo run --example conditions
//! ```

use kcc::models::builtin;
use kcc::stability::assemble_semialgebraic;

fn main() -> kcc::Result<()> {
    let model = builtin("wound_strings")?;
    let sys = assemble_semialgebraic(&model)?;
    println!("variables: {}", sys.variables.join(", "));
    for e in sys.equation_exprs() {
        println!("{e} = 0");
    }
    for e in sys.inequation_exprs() {
        println!("{e} != 0");
    }
    for p in &sys.parameter_inequations {
        println!("{} != 0  (parameters)", p.to_expr(&sys.variables));
    }
    for e in sys.inequality_exprs() {
        println!("{e} > 0");
    }
    Ok(())
}
