//! Airfoil parameter-region test: signs of the six boundary polynomials at
//! `(M∞, V)` and the predicted number of Jacobi-stable fixed points.
//!
//! ```text
//! cargo run --example region
//! ```

use kcc::expr::parse_rational;
use kcc::stability::airfoil_region_conditions;

fn main() -> kcc::Result<()> {
    for (m, v) in [("2017/256", "83/4"), ("71/16384", "3/16"), ("1", "1")] {
        let rep = airfoil_region_conditions(
            parse_rational(m).expect("rational"),
            parse_rational(v).expect("rational"),
        )?;
        match rep.label {
            Some(r) => println!("(Minf, V) = ({m}, {v}): signs {:?}, region {r}, k = {}", rep.signs, r.stable_count()),
            None => println!("(Minf, V) = ({m}, {v}): signs {:?}, no region", rep.signs),
        }
    }
    Ok(())
}
