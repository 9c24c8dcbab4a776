#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use orbring_core::{parse_rational, OrbifoldDatum, Rational, Result};
use serde_json::Value;

pub const FILES: [&str; 8] = [
    "bg_z2", "bg_s3", "c2_z2", "c2_z3", "p2_z2", "p2_z3", "kummer", "sign_z2",
];

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> Arc<OrbifoldDatum> {
    Arc::new(OrbifoldDatum::load(path(name)).unwrap_or_else(|e| panic!("{name}: {e}")))
}

pub fn json(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path(name)).unwrap()).unwrap()
}

pub fn from_value(v: &Value) -> Result<OrbifoldDatum> {
    OrbifoldDatum::from_json(&v.to_string())
}

pub fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}
