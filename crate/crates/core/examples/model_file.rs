//! Define a model in the text format, convert a linear-acceleration system
//! `M ẍ + f(x, ẋ) = 0` to standard form and classify its fixed points.
//!
//! ```text
//! cargo run --example model_file
//! ```

use kcc::expr::Binding;
use kcc::models::ModelFile;
use kcc::stability::{count_stable, SearchBox, DEFAULT_TOL};

const SOURCE: &str = "\
# damped Duffing oscillator
model duffing
mode linear-accel
params k=-1 b=1 c=1/5
vars x1
M[1][1] = 1
f[1] = c*y1 + k*x1 + b*x1^3
";

fn main() -> kcc::Result<()> {
    let model = ModelFile::parse(SOURCE)?.to_model()?;
    println!("G1 = {}", model.g[0]);
    let count = count_stable(&model, &Binding::new(), &SearchBox::cube(1, -3.0, 3.0), 9, DEFAULT_TOL)?;
    for r in &count.reports {
        println!("x = {:?}: {}", r.fixed_point.x, r.verdict);
    }
    println!("k = {}", count.k);
    Ok(())
}
