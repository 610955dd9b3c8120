//! Deterministic report serialization.
//!
//! Fixed contracts so reruns with identical configs produce identical
//! bytes: CSV floats use a %g-style 12-significant-digit format, column
//! order is frozen, and every JSON document carries a top-level
//! `schema_version`.

use crate::model::CampaignReport;
use crate::quad::ConvergenceRow;
use crate::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;

/// Version stamp carried by every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

/// Formats a float with 12 significant digits, %g style: fixed notation for
/// decimal exponents in [-4, 12), scientific otherwise, trailing zeros
/// trimmed.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("e-format always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_fraction(&fixed)
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Campaign rows as CSV with the frozen column order.
pub fn campaign_csv(report: &CampaignReport) -> String {
    let mut out = String::from("seed,|S|,S(N),|T|,Z(N),density3_S,density3_remainder\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.seed,
            r.s_size,
            r.s_count_at_n,
            r.t_size,
            r.z,
            fmt_g12(r.density3_s),
            fmt_g12(r.density3_remainder)
        );
    }
    out
}

/// Quadrature convergence table as CSV.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("level,value,error_estimate,evaluations\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.level,
            fmt_g12(r.value),
            fmt_g12(r.error_estimate),
            r.evaluations
        );
    }
    out
}

/// Serializes any report as pretty JSON with a top-level "schema_version".
/// Non-object payloads are wrapped under a "data" key.
pub fn versioned_json(payload: &impl Serialize) -> Result<String> {
    let value = serde_json::to_value(payload).map_err(|e| Error::Parse(e.to_string()))?;
    let wrapped = match value {
        serde_json::Value::Object(mut map) => {
            map.insert(
                "schema_version".to_string(),
                serde_json::Value::from(SCHEMA_VERSION),
            );
            serde_json::Value::Object(map)
        }
        other => serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "data": other,
        }),
    };
    serde_json::to_string_pretty(&wrapped).map_err(|e| Error::Parse(e.to_string()))
}
