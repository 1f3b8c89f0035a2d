//! Text and JSON renderings of expression matrices and tensors. Indices in
//! the text form are 1-based.

use serde_json::Value as Json;

use super::{Matrix, Tensor3, Tensor4};
use crate::expr::Expr;

pub fn matrix_text(name: &str, m: &Matrix) -> String {
    let mut out = String::new();
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.push_str(&format!("{name}[{}][{}] = {e}\n", i + 1, j + 1));
        }
    }
    out
}

pub fn tensor3_text(name: &str, t: &Tensor3) -> String {
    let mut out = String::new();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in a.iter().enumerate() {
            for (k, e) in b.iter().enumerate() {
                out.push_str(&format!("{name}[{}][{}][{}] = {e}\n", i + 1, j + 1, k + 1));
            }
        }
    }
    out
}

pub fn tensor4_text(name: &str, t: &Tensor4) -> String {
    let mut out = String::new();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in a.iter().enumerate() {
            for (k, c) in b.iter().enumerate() {
                for (l, e) in c.iter().enumerate() {
                    out.push_str(&format!(
                        "{name}[{}][{}][{}][{}] = {e}\n",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1
                    ));
                }
            }
        }
    }
    out
}

fn row_json(r: &[Expr]) -> Json {
    Json::Array(r.iter().map(|e| Json::String(e.to_string())).collect())
}

pub fn matrix_json(m: &Matrix) -> Json {
    Json::Array(m.iter().map(|r| row_json(r)).collect())
}

pub fn tensor3_json(t: &Tensor3) -> Json {
    Json::Array(t.iter().map(matrix_json).collect())
}

pub fn tensor4_json(t: &Tensor4) -> Json {
    Json::Array(t.iter().map(tensor3_json).collect())
}
