//! JSON state files: an array of `{modes: [N₁,N₂,N₃,N₄], re, im}` records.
//! Entries not listed are zero; a repeated mode tuple is rejected.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{ModeBasis, ModeOccupation, StateVector};
use crate::error::{Error, Result};
use crate::fock::Cutoff;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub modes: [u32; 4],
    pub re: f64,
    pub im: f64,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        message: e.to_string(),
    }
}

/// Parses a state file. Errors carry the 1-based line of the offending record.
pub fn state_from_json(text: &str, cutoff: Cutoff, basis: ModeBasis) -> Result<StateVector> {
    let raw: Vec<&RawValue> = serde_json::from_str(text).map_err(json_error)?;
    let mut state = StateVector::zeros(cutoff, basis);
    let mut seen: HashMap<[u32; 4], usize> = HashMap::new();
    for item in raw {
        let offset = item.get().as_ptr() as usize - text.as_ptr() as usize;
        let line = line_of(text, offset);
        let rec: StateRecord = serde_json::from_str(item.get()).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if !rec.re.is_finite() || !rec.im.is_finite() {
            return Err(Error::Parse {
                line,
                message: "non-finite coefficient".into(),
            });
        }
        if seen.insert(rec.modes, line).is_some() {
            return Err(Error::DuplicateMode {
                counts: rec.modes,
                line,
            });
        }
        let i = super::index(&ModeOccupation::new(rec.modes, basis), cutoff)?;
        state.coeffs[i] = Complex64::new(rec.re, rec.im);
    }
    Ok(state)
}

/// Serializes the nonzero coefficients, one record per line, in index order.
pub fn state_to_json(state: &StateVector) -> String {
    let lines: Vec<String> = state
        .nonzero()
        .map(|(modes, c)| {
            let rec = StateRecord {
                modes,
                re: c.re,
                im: c.im,
            };
            format!("  {}", serde_json::to_string(&rec).expect("record serializes"))
        })
        .collect();
    if lines.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", lines.join(",\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cutoff(n: u32) -> Cutoff {
        Cutoff::new(n).unwrap()
    }

    #[test]
    fn parses_sparse_records() {
        let text = r#"[
  {"modes": [0,0,0,0], "re": 0.6, "im": 0.0},
  {"modes": [1,0,2,0], "re": 0.0, "im": 0.8}
]"#;
        let s = state_from_json(text, cutoff(2), ModeBasis::Spacetime).unwrap();
        assert_eq!(s.coeffs()[0], Complex64::new(0.6, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let back = state_from_json(&state_to_json(&s), cutoff(2), ModeBasis::Spacetime).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn empty_list_is_zero_state() {
        let s = state_from_json("[]", cutoff(1), ModeBasis::Spacetime).unwrap();
        assert_eq!(s.norm(), 0.0);
        assert_eq!(state_to_json(&s), "[]\n");
    }

    #[test]
    fn duplicate_reports_line() {
        let text = "[\n{\"modes\":[1,0,0,0],\"re\":1,\"im\":0},\n\n{\"modes\":[1,0,0,0],\"re\":2,\"im\":0}\n]";
        let err = state_from_json(text, cutoff(2), ModeBasis::Spacetime).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateMode {
                counts: [1, 0, 0, 0],
                line: 4
            }
        );
    }

    #[test]
    fn out_of_cutoff_is_domain_error() {
        let text = r#"[{"modes":[3,0,0,0],"re":1,"im":0}]"#;
        let err = state_from_json(text, cutoff(2), ModeBasis::Spacetime).unwrap_err();
        assert!(matches!(err, Error::OccupationOutOfRange { .. }));
    }

    #[test]
    fn malformed_record_is_parse_error() {
        let text = "[\n{\"modes\":[1,0,0],\"re\":1,\"im\":0}\n]";
        let err = state_from_json(text, cutoff(2), ModeBasis::Spacetime).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            state_from_json("{", cutoff(2), ModeBasis::Spacetime),
            Err(Error::Parse { .. })
        ));
    }
}
