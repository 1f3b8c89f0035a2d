//! Jacobi stability of every fixed point of the wound-strings model through
//! the Routh-Hurwitz test on the deviation curvature tensor, cross-checked
//! against its eigenvalues.
//!
//! ```text
//! cargo run --example classify
//! ```

use kcc::expr::Binding;
use kcc::models::builtin;
use kcc::stability::{count_stable, SearchBox, DEFAULT_TOL};

fn main() -> kcc::Result<()> {
    let model = builtin("wound_strings")?;
    let count = count_stable(&model, &Binding::new(), &SearchBox::cube(2, -4.0, 4.0), 9, DEFAULT_TOL)?;
    for r in &count.reports {
        println!(
            "x = {:?}  a = {:?}  delta = {:?}  {} (eigenvalues: {})",
            r.fixed_point.x, r.char_poly, r.hurwitz, r.verdict, r.eigen_verdict
        );
    }
    println!("k = {}", count.k);
    Ok(())
}
