//! File formats and the sample shorthands accepted on the command line.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::parse_rational;
use crate::samples::{cantor_samples, dd_samples, mix_samples, SampleSet};

/// Resolves a sample specification:
///
/// * `dd4`, `dd6`: Dubuc-Deslauriers 4- and 6-point samples,
/// * `dd:N`: the `N`-point scheme, `N` even,
/// * `mix:W`: `(1 - W) dd4 + W dd6` for a rational `W`,
/// * `cantor`: samples of the Cantor-type ternary scheme,
/// * anything else: a SampleSet JSON file.
pub fn parse_samples(spec: &str) -> Result<SampleSet> {
    match spec {
        "dd4" => return Ok(dd_samples(2)),
        "dd6" => return Ok(dd_samples(3)),
        "cantor" => return Ok(cantor_samples()),
        _ => {}
    }
    if let Some(n) = spec.strip_prefix("dd:") {
        let n: u32 = n
            .parse()
            .map_err(|_| Error::Parse(format!("point count in {spec:?}")))?;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Parse(format!("{spec:?}: point count must be even and positive")));
        }
        return Ok(dd_samples(n / 2));
    }
    if let Some(w) = spec.strip_prefix("mix:") {
        return mix_samples(&dd_samples(2), &dd_samples(3), &parse_rational(w)?);
    }
    read_json(spec)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(value)? + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
