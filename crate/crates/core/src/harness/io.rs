use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::clifford::{Spinor, SpinorSpace, C64};
use crate::error::{Result, SpinorError};

/// Value of the `format` field in spinor files.
pub const SPINOR_FORMAT: &str = "spinorlab/1";

/// Serializes a spinor. Every number is written with 17 significant digits,
/// which reproduces each `f64` exactly on load.
pub fn spinor_to_json(psi: &Spinor) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": \"{SPINOR_FORMAT}\",");
    let _ = writeln!(out, "  \"n\": {},", psi.space().n());
    out.push_str("  \"coeffs\": [\n");
    let len = psi.coeffs().len();
    for (i, c) in psi.coeffs().iter().enumerate() {
        let sep = if i + 1 == len { "" } else { "," };
        let _ = writeln!(out, "    [{:.16e}, {:.16e}]{sep}", c.re, c.im);
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn spinor_from_json(text: &str) -> Result<Spinor> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        SpinorError::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| SpinorError::Parse("top level must be an object".into()))?;

    match obj.get("format").and_then(Value::as_str) {
        Some(SPINOR_FORMAT) => {}
        Some(other) => {
            return Err(SpinorError::Parse(format!(
                "field \"format\": unsupported format {other:?}, expected {SPINOR_FORMAT:?}"
            )))
        }
        None => {
            return Err(SpinorError::Parse(
                "field \"format\": missing or not a string".into(),
            ))
        }
    }

    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| {
        SpinorError::Parse("field \"n\": missing or not a nonnegative integer".into())
    })?;
    let space = SpinorSpace::new(n as usize)?;

    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| SpinorError::Parse("field \"coeffs\": missing or not an array".into()))?;
    if coeffs.len() != space.dim() {
        return Err(SpinorError::Dimension(format!(
            "field \"coeffs\": dimension {n} needs {} coefficients, found {}",
            space.dim(),
            coeffs.len()
        )));
    }
    let parsed = coeffs
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                SpinorError::Parse(format!("field \"coeffs[{i}]\": expected [re, im]"))
            })?;
            let part = |slot: usize| {
                pair[slot].as_f64().ok_or_else(|| {
                    SpinorError::Parse(format!("field \"coeffs[{i}][{slot}]\": expected a number"))
                })
            };
            Ok(C64::new(part(0)?, part(1)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Spinor::new(space, parsed)
}

pub fn save_spinor(psi: &Spinor, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, spinor_to_json(psi))?;
    Ok(())
}

pub fn load_spinor(path: impl AsRef<Path>) -> Result<Spinor> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpinorError::Io(format!("{}: {e}", path.display())))?;
    spinor_from_json(&text)
}
