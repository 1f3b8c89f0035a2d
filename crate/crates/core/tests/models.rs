mod common;

use common::*;
use kcc::models::{builtin, load, ModelFile, BUILTIN_NAMES};
use kcc::Error;

#[test]
fn builtins_round_trip_through_model_files() {
    for name in BUILTIN_NAMES {
        let m = builtin(name).unwrap();
        let text = ModelFile::from_model(&m).to_text();
        let back = ModelFile::parse(&text).unwrap().to_model().unwrap();
        assert_eq!(back.vars, m.vars);
        assert_eq!(back.params, m.params);
        for (a, b) in m.g.iter().zip(&back.g) {
            assert!(same(a, b), "{name}");
        }
        for p in &m.params {
            assert_eq!(back.defaults.get(p).map(|v| v.to_string()), m.defaults.get(p).map(|v| v.to_string()));
        }
    }
}

#[test]
fn tractor_seat_forms_agree() {
    let lin = builtin("tractor_seat").unwrap();
    let std = builtin("tractor_seat_kcc").unwrap();
    assert_eq!(lin.vars, std.vars);
    for (a, b) in lin.g.iter().zip(&std.g) {
        assert!(same(a, b));
    }
}

#[test]
fn files_load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("duffing.kcc");
    std::fs::write(
        &path,
        "# undamped Duffing oscillator\nmodel duffing\nmode linear-accel\nparams k=1 b\nvars x1\nM[1][1] = 1\nf[1] = k*x1 + b*x1^3\n",
    )
    .unwrap();
    let m = load(&path).unwrap();
    assert!(same(&m.g[0], &e("(k*x1 + b*x1^3)/2")));
    assert!(m.defaults.get("b").is_none());
    assert!(matches!(m.bind_params(&kcc::expr::Binding::new()), Err(Error::MissingParameter(_))));
    assert!(matches!(kcc::models::resolve(dir.path().join("nope.kcc").to_str().unwrap()), Err(Error::UnknownModel(_))));
}

#[test]
fn singular_mass_matrix_is_rejected() {
    let src = "model s\nmode linear-accel\nvars x1 x2\nM[1][1] = 1\nM[1][2] = 1\nM[2][1] = 1\nM[2][2] = 1\nf[1] = x1\nf[2] = x2\n";
    assert!(matches!(ModelFile::parse(src).unwrap().to_model(), Err(Error::SingularMassMatrix)));
}
