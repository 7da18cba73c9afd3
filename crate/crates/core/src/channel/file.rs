//! Channel tensor files.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! "CTNS"  magic
//! u16     version (1)
//! u32     m, u32 l, u32 n_elems
//! u8      has_coefficients (0 or 1)
//! f64x2   m*l*n_elems (re, im) pairs, row-major (m, l, k)   -- if has_coefficients
//! f64     m*l power gains, row-major (m, l)
//! ```
//!
//! A JSON mirror with the same field names (`m`, `l`, `n_elems`,
//! `has_coefficients`, `coefficients` as nested `[m][l][k] -> [re, im]`,
//! `power_gains` as nested `[m][l]`) is accepted for hand-written fixtures.
//! When coefficients are present the power gains are recomputed from them.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{aggregate_power, LinkGainTensor};
use crate::error::{Error, Result, TensorLoadError};

pub const MAGIC: &[u8; 4] = b"CTNS";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 * 3 + 1;

pub fn encode(t: &LinkGainTensor) -> Vec<u8> {
    let n_coef = t.coefficients.as_ref().map_or(0, |c| c.len());
    let mut out = Vec::with_capacity(HEADER_LEN + n_coef * 16 + t.power_gains.len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for dim in [t.m, t.l, t.n_elems] {
        out.extend_from_slice(&(dim as u32).to_le_bytes());
    }
    out.push(t.coefficients.is_some() as u8);
    if let Some(c) = &t.coefficients {
        for h in c {
            out.extend_from_slice(&h.re.to_le_bytes());
            out.extend_from_slice(&h.im.to_le_bytes());
        }
    }
    for g in &t.power_gains {
        out.extend_from_slice(&g.to_le_bytes());
    }
    out
}

fn read_f64(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

fn read_u32(bytes: &[u8], at: usize) -> usize {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize
}

pub fn decode(bytes: &[u8]) -> Result<LinkGainTensor, TensorLoadError> {
    if bytes.len() < HEADER_LEN {
        return Err(TensorLoadError::MalformedHeader(format!(
            "{} bytes is shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(TensorLoadError::MalformedHeader("bad magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(TensorLoadError::Version(version));
    }
    let (m, l, k) = (read_u32(bytes, 6), read_u32(bytes, 10), read_u32(bytes, 14));
    let has_coef = match bytes[18] {
        0 => false,
        1 => true,
        other => {
            return Err(TensorLoadError::MalformedHeader(format!(
                "has_coefficients byte is {other}"
            )))
        }
    };
    if has_coef && k == 0 {
        return Err(TensorLoadError::MalformedHeader(
            "n_elems must be >= 1 when coefficients are present".into(),
        ));
    }
    let n_coef = if has_coef { m * l * k } else { 0 };
    let expected = HEADER_LEN + n_coef * 16 + m * l * 8;
    if bytes.len() != expected {
        return Err(TensorLoadError::DimensionMismatch(format!(
            "header m={m}, l={l}, n_elems={k} needs {expected} bytes, file has {}",
            bytes.len()
        )));
    }

    let mut at = HEADER_LEN;
    let coefficients = if has_coef {
        let mut c = Vec::with_capacity(n_coef);
        for i in 0..n_coef {
            let h = Complex64::new(read_f64(bytes, at), read_f64(bytes, at + 8));
            if !h.is_finite() {
                return Err(TensorLoadError::NonFinite(format!("coefficient {i}")));
            }
            c.push(h);
            at += 16;
        }
        Some(c)
    } else {
        None
    };
    let mut stored = Vec::with_capacity(m * l);
    for i in 0..m * l {
        let g = read_f64(bytes, at);
        if !g.is_finite() {
            return Err(TensorLoadError::NonFinite(format!("power gain {i}")));
        }
        stored.push(g);
        at += 8;
    }
    assemble(m, l, k, coefficients, stored)
}

fn assemble(
    m: usize,
    l: usize,
    n_elems: usize,
    coefficients: Option<Vec<Complex64>>,
    stored: Vec<f64>,
) -> Result<LinkGainTensor, TensorLoadError> {
    let power_gains = match &coefficients {
        Some(c) => aggregate_power(c, n_elems),
        None => {
            if let Some(i) = stored.iter().position(|g| *g < 0.0) {
                return Err(TensorLoadError::DimensionMismatch(format!(
                    "power gain {i} is negative"
                )));
            }
            stored
        }
    };
    Ok(LinkGainTensor {
        m,
        l,
        n_elems,
        coefficients,
        power_gains,
        scatter: None,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct TensorJson {
    m: usize,
    l: usize,
    n_elems: usize,
    #[serde(default)]
    has_coefficients: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_gains: Option<Vec<Vec<f64>>>,
}

fn mismatch(msg: String) -> TensorLoadError {
    TensorLoadError::DimensionMismatch(msg)
}

pub fn decode_json(text: &str) -> Result<LinkGainTensor, TensorLoadError> {
    let doc: TensorJson = serde_json::from_str(text)?;
    let (m, l, k) = (doc.m, doc.l, doc.n_elems);
    let has_coef = doc.has_coefficients.unwrap_or(doc.coefficients.is_some());
    if has_coef != doc.coefficients.is_some() {
        return Err(TensorLoadError::MalformedHeader(
            "has_coefficients disagrees with the coefficients field".into(),
        ));
    }

    let coefficients = match doc.coefficients {
        Some(rows) => {
            if rows.len() != m {
                return Err(mismatch(format!("header m={m}, coefficients has {} rows", rows.len())));
            }
            let mut flat = Vec::with_capacity(m * l * k);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != l {
                    return Err(mismatch(format!("coefficients[{i}] has {} BSs, header l={l}", row.len())));
                }
                for (j, link) in row.iter().enumerate() {
                    if link.len() != k {
                        return Err(mismatch(format!(
                            "coefficients[{i}][{j}] has {} elements, header n_elems={k}",
                            link.len()
                        )));
                    }
                    for (e, [re, im]) in link.iter().enumerate() {
                        if !re.is_finite() || !im.is_finite() {
                            return Err(TensorLoadError::NonFinite(format!("coefficients[{i}][{j}][{e}]")));
                        }
                        flat.push(Complex64::new(*re, *im));
                    }
                }
            }
            if k == 0 {
                return Err(TensorLoadError::MalformedHeader(
                    "n_elems must be >= 1 when coefficients are present".into(),
                ));
            }
            Some(flat)
        }
        None => None,
    };

    let stored = match doc.power_gains {
        Some(rows) => {
            if rows.len() != m {
                return Err(mismatch(format!("header m={m}, power_gains has {} rows", rows.len())));
            }
            let mut flat = Vec::with_capacity(m * l);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != l {
                    return Err(mismatch(format!("power_gains[{i}] has {} entries, header l={l}", row.len())));
                }
                for (j, g) in row.iter().enumerate() {
                    if !g.is_finite() {
                        return Err(TensorLoadError::NonFinite(format!("power_gains[{i}][{j}]")));
                    }
                    flat.push(*g);
                }
            }
            flat
        }
        None if coefficients.is_some() => Vec::new(),
        None => {
            return Err(TensorLoadError::MalformedHeader(
                "neither coefficients nor power_gains present".into(),
            ))
        }
    };
    assemble(m, l, k, coefficients, stored)
}

pub fn encode_json(t: &LinkGainTensor) -> String {
    let coefficients = t.coefficients.as_ref().map(|c| {
        (0..t.m)
            .map(|i| {
                (0..t.l)
                    .map(|j| {
                        let base = (i * t.l + j) * t.n_elems;
                        c[base..base + t.n_elems].iter().map(|h| [h.re, h.im]).collect()
                    })
                    .collect()
            })
            .collect()
    });
    let doc = TensorJson {
        m: t.m,
        l: t.l,
        n_elems: t.n_elems,
        has_coefficients: Some(t.coefficients.is_some()),
        coefficients,
        power_gains: Some(t.power_gains.chunks(t.l.max(1)).map(<[f64]>::to_vec).collect()),
    };
    serde_json::to_string_pretty(&doc).expect("tensor json is always serializable")
}

/// Reads a binary or JSON tensor file, sniffing the magic bytes.
pub fn import_tensor(path: impl AsRef<Path>) -> Result<LinkGainTensor> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(TensorLoadError::Missing(path.to_path_buf()).into());
    }
    let bytes = fs::read(path).map_err(TensorLoadError::from)?;
    let tensor = if bytes.starts_with(MAGIC) {
        decode(&bytes)?
    } else {
        let text = String::from_utf8(bytes).map_err(|_| {
            TensorLoadError::MalformedHeader("neither CTNS magic nor UTF-8 JSON".into())
        })?;
        decode_json(&text)?
    };
    Ok(tensor)
}

/// Writes the binary format.
pub fn export_tensor(path: impl AsRef<Path>, t: &LinkGainTensor) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(t)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_single_coefficient() {
        let t = decode_json(r#"{"m":1,"l":1,"n_elems":1,"coefficients":[[[[1.0,0.0]]]]}"#).unwrap();
        assert_eq!(t.power_gains, vec![1.0]);
    }

    #[test]
    fn json_two_elements_average() {
        let t = decode_json(
            r#"{"m":1,"l":1,"n_elems":2,"has_coefficients":true,"coefficients":[[[[1.0,0.0],[0.0,1.0]]]]}"#,
        )
        .unwrap();
        assert_eq!(t.power_gains, vec![1.0]);
    }

    #[test]
    fn json_row_count_mismatch() {
        let err = decode_json(r#"{"m":2,"l":1,"n_elems":1,"power_gains":[[0.5]]}"#).unwrap_err();
        assert!(matches!(err, TensorLoadError::DimensionMismatch(_)), "{err}");
    }

    #[test]
    fn binary_truncated_is_dimension_mismatch() {
        let t = LinkGainTensor::from_power_gains(2, 1, vec![0.1, 0.2]).unwrap();
        let mut bytes = encode(&t);
        bytes.truncate(bytes.len() - 8);
        assert!(matches!(decode(&bytes), Err(TensorLoadError::DimensionMismatch(_))));
    }

    #[test]
    fn binary_bad_magic_and_version() {
        let t = LinkGainTensor::from_power_gains(1, 1, vec![0.1]).unwrap();
        let mut bytes = encode(&t);
        bytes[0] = b'X';
        assert!(matches!(decode(&bytes), Err(TensorLoadError::MalformedHeader(_))));
        let mut bytes = encode(&t);
        bytes[4] = 9;
        assert!(matches!(decode(&bytes), Err(TensorLoadError::Version(9))));
        assert!(matches!(decode(b"CT"), Err(TensorLoadError::MalformedHeader(_))));
    }

    #[test]
    fn binary_non_finite() {
        let t = LinkGainTensor::from_coefficients(1, 1, 1, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let mut bytes = encode(&t);
        bytes[HEADER_LEN..HEADER_LEN + 8].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(decode(&bytes), Err(TensorLoadError::NonFinite(_))));
    }

    #[test]
    fn json_mirror_roundtrip() {
        let t = LinkGainTensor::from_coefficients(
            2,
            2,
            2,
            (0..8).map(|i| Complex64::new(i as f64 * 0.25, -0.5)).collect(),
        )
        .unwrap();
        assert_eq!(decode_json(&encode_json(&t)).unwrap(), t);
    }
}
