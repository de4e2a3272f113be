//! Textual and JSON forms of (possibly complex) family parameters: plain
//! numbers for real values, `"re+imi"` / `"re-imi"` strings otherwise.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::Deserialize;

use crate::error::{Error, Result};

pub fn parse_param(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let bad = || Error::Validation(format!("cannot parse parameter '{s}' (expected a number or re+imi)"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(Complex64::new(v, 0.0));
    }
    let body = t.strip_suffix('i').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn format_param(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Comma-separated list, e.g. `0.3,-0.2,0.5+0.1i,0.5-0.1i,0.1`.
pub fn parse_param_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_param).collect()
}

/// Serde adapter for `Vec<Complex64>` parameter lists.
pub mod param_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for z in v {
            if z.im == 0.0 {
                seq.serialize_element(&z.re)?;
            } else {
                seq.serialize_element(&format_param(*z))?;
            }
        }
        seq.end()
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<Raw>::deserialize(de)?;
        raw.into_iter()
            .map(|r| match r {
                Raw::Num(v) => Ok(Complex64::new(v, 0.0)),
                Raw::Text(s) => parse_param(&s).map_err(de::Error::custom),
            })
            .collect()
    }
}
