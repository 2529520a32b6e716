//! JSON file formats (schema "cpb-1") for complexes, labels, packings, and
//! pipeline reports. Serialization is deterministic and lossless: floats are
//! written in shortest round-trip decimal form and re-parse to the exact
//! same bits; infinite radii (horocycles) are written as the string "inf".

use std::path::Path;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{build_complex, BlackHoleRecord, Complex, ComplexError, FaceId, Vertex};
use crate::geometry::{Circle, EuclCircle, Geometry};
use crate::layout::Packing;
use crate::solver::Label;
use crate::workbench::pipelines::{PipelineReport, SCHEMA};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?} (expected {SCHEMA:?})")]
    Schema(String),
    #[error("wrong file kind {got:?} (expected {expected:?})")]
    Kind { expected: &'static str, got: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A float that survives JSON: finite values as numbers, infinities as the
/// strings "inf" / "-inf". NaN is rejected on write.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            Err(serde::ser::Error::custom("NaN is not serializable"))
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::F(x) => Ok(Num(x)),
            Raw::S(s) => match s.as_str() {
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                other => Err(D::Error::custom(format!("bad float literal {other:?}"))),
            },
        }
    }
}

fn check_header(schema: &str, kind: &str, expected: &'static str) -> Result<(), IoError> {
    if schema != SCHEMA {
        return Err(IoError::Schema(schema.to_string()));
    }
    if kind != expected {
        return Err(IoError::Kind {
            expected,
            got: kind.to_string(),
        });
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub schema: String,
    pub kind: String,
    pub faces: Vec<[Vertex; 3]>,
    #[serde(default)]
    pub surgeries: Vec<BlackHoleRecord>,
}

pub fn complex_to_json(k: &Complex) -> String {
    let file = ComplexFile {
        schema: SCHEMA.to_string(),
        kind: "complex".to_string(),
        faces: k.faces().to_vec(),
        surgeries: k.surgeries().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("complex serialization cannot fail")
}

pub fn complex_from_json(s: &str) -> Result<Complex, IoError> {
    let file: ComplexFile = serde_json::from_str(s)?;
    check_header(&file.schema, &file.kind, "complex")?;
    Ok(build_complex(file.faces)?.with_surgeries(file.surgeries)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LabelFile {
    pub schema: String,
    pub kind: String,
    pub geometry: Geometry,
    /// Radii by vertex id (1-based order).
    pub radii: Vec<Num>,
}

pub fn label_to_json(label: &Label) -> String {
    let file = LabelFile {
        schema: SCHEMA.to_string(),
        kind: "label".to_string(),
        geometry: label.geom,
        radii: label.radii().iter().map(|&r| Num(r)).collect(),
    };
    serde_json::to_string_pretty(&file).expect("label serialization cannot fail")
}

pub fn label_from_json(s: &str) -> Result<Label, IoError> {
    let file: LabelFile = serde_json::from_str(s)?;
    check_header(&file.schema, &file.kind, "label")?;
    let mut label = Label::uniform(file.geometry, file.radii.len(), 1.0);
    for (i, r) in file.radii.iter().enumerate() {
        label.set(i + 1, r.0);
    }
    Ok(label)
}

/// One serialized circle: both the intrinsic data and the drawn euclidean
/// circle, so round trips are bit-exact.
#[derive(Debug, Serialize, Deserialize)]
pub struct CircleFile {
    pub center: [f64; 2],
    pub radius: Num,
    pub eucl_center: [f64; 2],
    pub eucl_radius: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PackingFile {
    pub schema: String,
    pub kind: String,
    pub geometry: Geometry,
    pub circles: Vec<Option<CircleFile>>,
    pub tree: Vec<(FaceId, Option<FaceId>)>,
}

pub fn packing_to_json(p: &Packing) -> String {
    let circles = p
        .circles
        .iter()
        .map(|c| {
            c.as_ref().map(|c| CircleFile {
                center: [c.center.re, c.center.im],
                radius: Num(c.radius),
                eucl_center: [c.eucl.center.re, c.eucl.center.im],
                eucl_radius: c.eucl.radius,
            })
        })
        .collect();
    let file = PackingFile {
        schema: SCHEMA.to_string(),
        kind: "packing".to_string(),
        geometry: p.geom,
        circles,
        tree: p.tree.clone(),
    };
    serde_json::to_string_pretty(&file).expect("packing serialization cannot fail")
}

pub fn packing_from_json(s: &str) -> Result<Packing, IoError> {
    let file: PackingFile = serde_json::from_str(s)?;
    check_header(&file.schema, &file.kind, "packing")?;
    let circles = file
        .circles
        .into_iter()
        .map(|c| {
            c.map(|c| Circle {
                center: Complex64::new(c.center[0], c.center[1]),
                radius: c.radius.0,
                eucl: EuclCircle::new(
                    Complex64::new(c.eucl_center[0], c.eucl_center[1]),
                    c.eucl_radius,
                ),
            })
        })
        .collect();
    Ok(Packing {
        geom: file.geometry,
        circles,
        tree: file.tree,
    })
}

pub fn report_to_json(report: &PipelineReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

pub fn report_from_json(s: &str) -> Result<PipelineReport, IoError> {
    let report: PipelineReport = serde_json::from_str(s)?;
    if report.schema != SCHEMA {
        return Err(IoError::Schema(report.schema));
    }
    Ok(report)
}

pub fn save(path: &Path, contents: &str) -> Result<(), IoError> {
    Ok(std::fs::write(path, contents)?)
}

pub fn load(path: &Path) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}
