//! Named profile resolution for the CLI.

use crate::CliError;
use euler_gauss_core::sequence::{profiles, CoefficientSequence};
use std::path::Path;

/// Built-in names, or a path to a sequence JSON file.
pub fn resolve(name: &str, radius: i64) -> Result<CoefficientSequence, CliError> {
    match name {
        "lemma61" => Ok(profiles::lemma61()),
        "line" => Ok(profiles::line()),
        "circle25" => Ok(profiles::circle25()),
        "powerlog" => CoefficientSequence::power_log(radius)
            .map_err(|e| CliError::Config(e.to_string())),
        "gibbs-like" => CoefficientSequence::gibbs_like(radius)
            .map_err(|e| CliError::Config(e.to_string())),
        "zero" => Ok(CoefficientSequence::empty()),
        path if Path::new(path).exists() => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{path}: {e}")))?;
            let schema: serde_json::Value =
                serde_json::from_str(include_str!("../schemas/sequence.schema.json")).unwrap();
            crate::schema::validate(&value, &schema).map_err(CliError::Config)?;
            CoefficientSequence::from_json(&value).map_err(|e| CliError::Config(e.to_string()))
        }
        other => Err(CliError::Config(format!(
            "unknown profile '{other}' (expected lemma61 | powerlog | line | circle25 | gibbs-like | zero | path to sequence JSON)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_profiles_resolve() {
        for name in ["lemma61", "line", "circle25", "powerlog", "gibbs-like", "zero"] {
            assert!(resolve(name, 4).is_ok(), "{name}");
        }
        assert!(resolve("bogus", 4).is_err());
    }
}
