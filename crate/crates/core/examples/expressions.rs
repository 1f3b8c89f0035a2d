//! Expression layer on its own: parse, differentiate, canonicalize to a
//! single rational function and evaluate exactly.
//!
//! ```text
//! cargo run --example expressions
//! ```

use kcc::expr::{canonicalize, evaluate, parse, parse_rational, Binding};

fn main() -> kcc::Result<()> {
    let e = parse("(x^2 - 1)/(x - 1) + y/(2*x)").map_err(kcc::Error::from)?;
    let d = e.differentiate("x");
    println!("f     = {e}");
    println!("df/dx = {d}");
    println!("canon = {}", canonicalize(&d)?.to_expr());
    let at = Binding::new().with("x", parse_rational("3").expect("rational")).with("y", parse_rational("1/2").expect("rational"));
    println!("df/dx(3, 1/2) = {}", evaluate(&d, &at)?);
    Ok(())
}
