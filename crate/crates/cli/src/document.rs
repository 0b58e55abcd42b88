//! On-disk representation format.
//!
//! Degrees are serialized as decimal string keys so the document stays
//! order-independent and integer-safe; scalars are exact strings ("p/q" or
//! an integer), never floats. Canonical serialization (what
//! [`from_representation`] emits) round-trips bit-exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use kronq::graded::{GradedMap, GradedVectorSpace};
use kronq::matrix::Mat;
use kronq::rep::Representation;
use kronq::scalar::{Scalar, ScalarField};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockDoc {
    pub degree: i64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RepresentationDocument {
    pub d: i64,
    pub field: String,
    #[serde(rename = "V")]
    pub v: BTreeMap<String, usize>,
    #[serde(rename = "W")]
    pub w: BTreeMap<String, usize>,
    pub alpha: Vec<BlockDoc>,
    pub beta: Vec<BlockDoc>,
}

pub fn parse_field(s: &str) -> Result<ScalarField, String> {
    if s == "Q" {
        return Ok(ScalarField::Rational);
    }
    if let Some(p) = s.strip_prefix("Fp:") {
        let p: u32 = p.parse().map_err(|_| format!("field: invalid prime '{p}'"))?;
        return ScalarField::prime(p).map_err(|e| format!("field: {e}"));
    }
    Err(format!("field: expected \"Q\" or \"Fp:<p>\", found '{s}'"))
}

pub fn field_name(field: ScalarField) -> String {
    match field {
        ScalarField::Rational => "Q".to_string(),
        ScalarField::Prime(p) => format!("Fp:{p}"),
    }
}

pub fn parse_scalar(field: ScalarField, s: &str) -> Result<Scalar, String> {
    match field {
        ScalarField::Rational => {
            let (numer, denom) = match s.split_once('/') {
                Some((n, d)) => (n, Some(d)),
                None => (s, None),
            };
            let n = BigInt::from_str(numer.trim())
                .map_err(|_| format!("invalid rational '{s}'"))?;
            let d = match denom {
                Some(d) => {
                    BigInt::from_str(d.trim()).map_err(|_| format!("invalid rational '{s}'"))?
                }
                None => BigInt::from(1),
            };
            if d.is_zero() {
                return Err(format!("invalid rational '{s}': zero denominator"));
            }
            Ok(Scalar::Rat(BigRational::new(n, d)))
        }
        ScalarField::Prime(_) => {
            let v: i64 = s.trim().parse().map_err(|_| format!("invalid residue '{s}'"))?;
            Ok(field.from_i64(v))
        }
    }
}

fn parse_dims(map: &BTreeMap<String, usize>, which: &str) -> Result<Vec<(i64, usize)>, String> {
    let mut out = Vec::new();
    for (key, &dim) in map {
        let degree: i64 =
            key.parse().map_err(|_| format!("{which}: invalid degree key '{key}'"))?;
        if dim == 0 {
            return Err(format!(
                "{which}[{key}]: dimension must be >= 1 (omit absent degrees)"
            ));
        }
        out.push((degree, dim));
    }
    Ok(out)
}

fn parse_blocks(
    blocks: &[BlockDoc],
    which: &str,
    field: ScalarField,
    source: &GradedVectorSpace,
    target: &GradedVectorSpace,
    degree: i64,
) -> Result<GradedMap, String> {
    let mut out: BTreeMap<i64, Mat> = BTreeMap::new();
    for (ix, block) in blocks.iter().enumerate() {
        let at = |msg: String| format!("{which}[{ix}] (degree {}): {msg}", block.degree);
        if out.contains_key(&block.degree) {
            return Err(at("duplicate block degree".to_string()));
        }
        let rows = target.dim(block.degree + degree);
        let cols = source.dim(block.degree);
        if block.matrix.len() != rows {
            return Err(at(format!("expected {rows} rows, found {}", block.matrix.len())));
        }
        let mut mat = Mat::zero(field, rows, cols);
        for (r, row) in block.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(at(format!("row {r}: expected {cols} entries, found {}", row.len())));
            }
            for (c, entry) in row.iter().enumerate() {
                let value = parse_scalar(field, entry).map_err(|e| at(format!("row {r}: {e}")))?;
                mat.set(r, c, value);
            }
        }
        if cols == 0 || rows == 0 {
            continue;
        }
        if !mat.is_zero() {
            out.insert(block.degree, mat);
        }
    }
    GradedMap::new(source.clone(), target.clone(), degree, out).map_err(|e| format!("{which}: {e}"))
}

pub fn to_representation(doc: &RepresentationDocument) -> Result<Representation, String> {
    let field = parse_field(&doc.field)?;
    if doc.d == 0 {
        return Err("d must be nonzero".to_string());
    }
    let v = GradedVectorSpace::from_dims(field, parse_dims(&doc.v, "V")?);
    let w = GradedVectorSpace::from_dims(field, parse_dims(&doc.w, "W")?);
    for block in &doc.alpha {
        if v.dim(block.degree) == 0 {
            return Err(format!(
                "alpha: block at degree {} but V has dimension 0 there",
                block.degree
            ));
        }
    }
    for block in &doc.beta {
        if v.dim(block.degree) == 0 {
            return Err(format!(
                "beta: block at degree {} but V has dimension 0 there",
                block.degree
            ));
        }
    }
    let alpha = parse_blocks(&doc.alpha, "alpha", field, &v, &w, 0)?;
    let beta = parse_blocks(&doc.beta, "beta", field, &v, &w, doc.d)?;
    let rep = Representation::new(doc.d, v, w, alpha, beta).map_err(|e| e.to_string())?;
    Ok(rep)
}

fn dims_doc(space: &GradedVectorSpace) -> BTreeMap<String, usize> {
    space.dims().iter().map(|(&deg, &dim)| (deg.to_string(), dim)).collect()
}

fn blocks_doc(map: &GradedMap) -> Vec<BlockDoc> {
    map.blocks()
        .iter()
        .map(|(&degree, mat)| BlockDoc {
            degree,
            matrix: (0..mat.rows())
                .map(|r| (0..mat.cols()).map(|c| mat.get(r, c).to_string()).collect())
                .collect(),
        })
        .collect()
}

pub fn from_representation(rep: &Representation) -> RepresentationDocument {
    RepresentationDocument {
        d: rep.d,
        field: field_name(rep.field()),
        v: dims_doc(&rep.v),
        w: dims_doc(&rep.w),
        alpha: blocks_doc(&rep.alpha),
        beta: blocks_doc(&rep.beta),
    }
}
