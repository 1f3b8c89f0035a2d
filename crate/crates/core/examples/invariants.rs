//! Symbolic KCC invariants of the wound-strings model: nonlinear connection,
//! deviation curvature tensor and the damping-free check of the first
//! invariant.
//!
//! ```text
//! cargo run --example invariants
//! ```

use kcc::expr::canonicalize;
use kcc::kcc::kcc_invariants;
use kcc::models::builtin;

fn main() -> kcc::Result<()> {
    let model = builtin("wound_strings")?;
    let inv = kcc_invariants(&model);
    for (i, row) in inv.n.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            println!("N[{}][{}] = {}", i + 1, j + 1, canonicalize(e)?.to_expr());
        }
    }
    for (i, row) in inv.p.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            println!("P[{}][{}] = {}", i + 1, j + 1, canonicalize(e)?.to_expr());
        }
    }
    for (i, e) in inv.epsilon.iter().enumerate() {
        println!("eps[{}] = {}", i + 1, canonicalize(e)?.to_expr());
    }
    Ok(())
}
