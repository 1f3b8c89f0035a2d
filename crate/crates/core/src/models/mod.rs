//! Built-in models and the model file loader.

mod file;

use crate::error::{Error, Result};
use crate::expr::{parse_rational, Binding};
use crate::kcc::Model;

pub use file::{load, Mode, ModelFile};

const WOUND_STRINGS: &str = include_str!("../../models/wound_strings.kcc");
const AIRFOIL: &str = include_str!("../../models/airfoil.kcc");
const TRACTOR_SEAT: &str = include_str!("../../models/tractor_seat.kcc");
const TRACTOR_SEAT_KCC: &str = include_str!("../../models/tractor_seat_kcc.kcc");

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["wound_strings", "airfoil", "tractor_seat"];

/// Source text of a built-in model.
pub fn builtin_source(name: &str) -> Result<&'static str> {
    match name {
        "wound_strings" => Ok(WOUND_STRINGS),
        "airfoil" => Ok(AIRFOIL),
        "tractor_seat" => Ok(TRACTOR_SEAT),
        "tractor_seat_kcc" => Ok(TRACTOR_SEAT_KCC),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// One of the shipped models. `tractor_seat_kcc` is the tractor seat
/// written directly in standard form.
pub fn builtin(name: &str) -> Result<Model> {
    ModelFile::parse(builtin_source(name)?)?.to_model()
}

/// A built-in name or a path to a model file.
pub fn resolve(spec: &str) -> Result<Model> {
    match builtin_source(spec) {
        Ok(src) => ModelFile::parse(src)?.to_model(),
        Err(_) if std::path::Path::new(spec).exists() => load(spec),
        Err(e) => Err(e),
    }
}

/// Tractor seat configurations 1..=9: M1, M2, M3, K1, K2, C1, C2. K3 and C3
/// are not part of the table.
const SEAT_TABLE: [[&str; 7]; 9] = [
    ["31/5", "325/7", "130/7", "22600", "37730", "920", "159"],
    ["31/5", "325/7", "130/7", "15000", "37730", "750", "159"],
    ["31/5", "325/7", "130/7", "25000", "37730", "750", "159"],
    ["31/5", "325/7", "130/7", "20000", "37730", "500", "159"],
    ["31/5", "325/7", "130/7", "20000", "37730", "750", "159"],
    ["31/5", "325/7", "130/7", "20000", "37730", "1000", "159"],
    ["31/5", "36", "14", "20000", "37730", "750", "159"],
    ["31/5", "46", "19", "20000", "37730", "750", "159"],
    ["31/5", "57", "23", "20000", "37730", "750", "159"],
];

/// Parameters of tractor seat configuration `case` (1-based), with
/// `K3 = C3 = 1000`.
pub fn tractor_seat_case(case: usize) -> Result<Binding> {
    let row = SEAT_TABLE
        .get(case.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidArgument(format!("tractor seat case {case} not in 1..=9")))?;
    let names = ["M1", "M2", "M3", "K1", "K2", "C1", "C2"];
    let mut b: Binding =
        names.iter().zip(row).map(|(n, v)| (*n, parse_rational(v).expect("table literal"))).collect();
    b.set("K3", parse_rational("1000").unwrap());
    b.set("C3", parse_rational("1000").unwrap());
    Ok(b)
}
