//! Problem files: margins, optional correlation or moment targets, options.
//!
//! ```json
//! {
//!   "m": 3,
//!   "p": ["1/2", "1/2", "1/2"],
//!   "rho": [{"i": 1, "j": 2, "value": "0.9"}, ...],
//!   "options": {"mode": "rays", "objective": "none", "seed": 7, "n": 1000}
//! }
//! ```
//!
//! Numbers may be given as strings (`"3/10"`, `"0.3"`) or JSON numbers; both
//! are read as exact rationals. Pair indices are 1-based.

use clap::ValueEnum;
use frechet_core::exact::{pair_index, pairs, parse_rational, Rational, MAX_DIMENSION};
use frechet_core::model::{mu2_from_rho, CorrelationSpec, FrechetClass, PairMoments};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Json(serde_json::Number),
}

impl Number {
    fn parse(&self) -> Result<Rational, String> {
        let text = match self {
            Number::Text(s) => s.clone(),
            Number::Json(n) => n.to_string(),
        };
        parse_rational(&text).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub value: Number,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Work over the enumerated ray densities.
    #[default]
    Rays,
    /// Work over the 2^m support points with no ray enumeration.
    Direct,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    None,
    MinHigherMoments,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub mode: Option<Mode>,
    pub objective: Option<Objective>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub m: usize,
    pub p: Vec<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<PairEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu2: Option<Vec<PairEntry>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Rho(CorrelationSpec),
    Mu2(PairMoments),
}

/// A spec that passed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub class: FrechetClass,
    pub target: Option<Target>,
    pub options: Options,
}

impl Problem {
    pub fn m(&self) -> usize {
        self.class.dimension()
    }

    /// Second-order moment target, if any.
    pub fn mu2(&self) -> Result<Option<PairMoments>, CliError> {
        match &self.target {
            None => Ok(None),
            Some(Target::Mu2(mu2)) => Ok(Some(mu2.clone())),
            Some(Target::Rho(rho)) => Ok(Some(mu2_from_rho(&self.class, rho)?)),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<ProblemSpec, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::invalid(format!("problem file: {e}")))
}

fn pair_values(m: usize, field: &str, entries: &[PairEntry]) -> Result<Vec<Rational>, CliError> {
    let mut values: Vec<Option<Rational>> = vec![None; m * (m - 1) / 2];
    for (k, e) in entries.iter().enumerate() {
        if !(1 <= e.i && e.i < e.j && e.j <= m) {
            return Err(CliError::invalid(format!(
                "{field}[{k}]: need 1 <= i < j <= {m}, got i = {}, j = {}",
                e.i, e.j
            )));
        }
        let slot = &mut values[pair_index(m, e.i - 1, e.j - 1)];
        if slot.is_some() {
            return Err(CliError::invalid(format!(
                "{field}[{k}]: duplicate pair ({}, {})",
                e.i, e.j
            )));
        }
        let v = e
            .value
            .parse()
            .map_err(|msg| CliError::invalid(format!("{field}[{k}].value: {msg}")))?;
        *slot = Some(v);
    }
    let missing: Vec<String> = pairs(m)
        .into_iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|((i, j), _)| format!("({}, {})", i + 1, j + 1))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::invalid(format!(
            "{field}: every pair must be given; missing {}",
            missing.join(", ")
        )));
    }
    Ok(values.into_iter().map(Option::unwrap).collect())
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<Problem, CliError> {
        let m = self.m;
        if !(1..=MAX_DIMENSION).contains(&m) {
            return Err(CliError::invalid(format!(
                "m: must lie in 1..={MAX_DIMENSION}, got {m}"
            )));
        }
        if self.p.len() != m {
            return Err(CliError::invalid(format!(
                "p: expected {m} margins, got {}",
                self.p.len()
            )));
        }
        let p = self
            .p
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.parse()
                    .map_err(|msg| CliError::invalid(format!("p[{k}]: {msg}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let class = FrechetClass::new(p)?;
        let target = match (&self.rho, &self.mu2) {
            (Some(_), Some(_)) => {
                return Err(CliError::invalid("give either rho or mu2, not both"));
            }
            (Some(rho), None) => Some(Target::Rho(CorrelationSpec::new(
                m,
                pair_values(m, "rho", rho)?,
            )?)),
            (None, Some(mu2)) => {
                let moments = PairMoments::new(m, pair_values(m, "mu2", mu2)?)?;
                moments.check_range()?;
                Some(Target::Mu2(moments))
            }
            (None, None) => None,
        };
        Ok(Problem {
            class,
            target,
            options: self.options.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use frechet_core::exact::ratio;

    fn spec(json: &str) -> Result<Problem, CliError> {
        parse_spec(json)?.validate()
    }

    #[test]
    fn reads_strings_and_numbers_exactly() {
        let p = spec(r#"{"m": 2, "p": ["1/2", 0.25], "rho": [{"i": 1, "j": 2, "value": 0.3}]}"#)
            .unwrap();
        assert_eq!(p.class.p(), &[ratio(1, 2), ratio(1, 4)]);
        let Some(Target::Rho(rho)) = p.target else {
            panic!()
        };
        assert_eq!(rho.values(), &[ratio(3, 10)]);
    }

    #[test]
    fn positional_errors() {
        let cases = [
            (r#"{"m": 2, "p": ["1/2"]}"#, "p: expected 2"),
            (r#"{"m": 2, "p": ["1/2", "x"]}"#, "p[1]"),
            (r#"{"m": 2, "p": ["1/2", "1"]}"#, "p_2"),
            (
                r#"{"m": 3, "p": ["1/2","1/2","1/2"], "rho": [{"i": 2, "j": 1, "value": "0"}]}"#,
                "rho[0]",
            ),
            (
                r#"{"m": 2, "p": ["1/2","1/2"], "rho": [{"i": 1, "j": 2, "value": "0"}, {"i": 1, "j": 2, "value": "0"}]}"#,
                "rho[1]: duplicate",
            ),
            (
                r#"{"m": 3, "p": ["1/2","1/2","1/2"], "mu2": [{"i": 1, "j": 2, "value": "0"}]}"#,
                "missing (1, 3), (2, 3)",
            ),
            (
                r#"{"m": 2, "p": ["1/2","1/2"], "bogus": 1}"#,
                "unknown field",
            ),
            (r#"{"m": 2, "p": ["1/2","1/2"],"#, "line 1"),
        ];
        for (json, needle) in cases {
            let err = spec(json).unwrap_err();
            assert_eq!(err.code, crate::EXIT_INVALID, "{json}");
            assert!(
                err.message.contains(needle),
                "{} lacks {needle}",
                err.message
            );
        }
    }

    #[test]
    fn rejects_both_targets() {
        let err = spec(
            r#"{"m": 2, "p": ["1/2","1/2"], "rho": [{"i":1,"j":2,"value":"0"}], "mu2": [{"i":1,"j":2,"value":"0"}]}"#,
        )
        .unwrap_err();
        assert!(err.message.contains("either rho or mu2"));
    }
}
