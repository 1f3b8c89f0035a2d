//! Linear deviation system `ξ'' = A21 ξ + A22 ξ'` of the tractor-seat chain,
//! symbolically and at the origin for one parameter case.
//!
//! ```text
//! cargo run --example deviation
//! ```

use kcc::expr::canonicalize;
use kcc::kcc::kcc_deviation;
use kcc::models::{builtin, tractor_seat_case};

fn main() -> kcc::Result<()> {
    let model = builtin("tractor_seat")?;
    let dev = kcc_deviation(&model);
    for (name, block) in [("A21", &dev.a21), ("A22", &dev.a22)] {
        for (i, row) in block.iter().enumerate() {
            let cells = row.iter().map(|e| Ok(canonicalize(e)?.to_expr().to_string())).collect::<kcc::Result<Vec<_>>>()?;
            println!("{name}[{}] = [{}]", i + 1, cells.join(", "));
        }
    }
    let params = model.bind_params(&tractor_seat_case(9)?)?;
    let num = dev.at_fixed_point(&params, &[0.0; 3])?;
    println!("at the origin, case 9:\nA21 = {}A22 = {}", num.a21, num.a22);
    Ok(())
}
