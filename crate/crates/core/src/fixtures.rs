//! The degree-8 free curve and degree-9 very free curve, shipped as curve
//! files under `fixtures/` and validated whenever they are loaded.

use std::path::PathBuf;

use crate::curve::CurveMap;

pub const DEGREE8_TEXT: &str = include_str!("../fixtures/degree8.curve");
pub const DEGREE9_TEXT: &str = include_str!("../fixtures/degree9.curve");
pub const DEGREE1_TEXT: &str = include_str!("../fixtures/degree1.curve");

/// Directory holding the fixture files in the source tree.
pub fn directory() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn degree8() -> CurveMap {
    CurveMap::parse(DEGREE8_TEXT).expect("degree-8 fixture validates")
}

pub fn degree9() -> CurveMap {
    CurveMap::parse(DEGREE9_TEXT).expect("degree-9 fixture validates")
}

/// `(S, S, T, T, 0, 0)`.
pub fn degree1() -> CurveMap {
    CurveMap::parse(DEGREE1_TEXT).expect("degree-1 fixture validates")
}
