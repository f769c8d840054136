//! JSON problem files.
//!
//! A problem file looks like
//!
//! ```json
//! {
//!   "states": ["low", "high"],
//!   "actions": ["0", "1", "2"],
//!   "payoff": [["0", "-4"], ["-1", "-1"], ["-4", "0"]]
//! }
//! ```
//!
//! Rationals are strings such as `"3"`, `"-4"` or `"7/2"`; plain JSON
//! integers are accepted on input. Output always uses strings.
//!
//! A polynomial file describes payoffs polynomial in a continuous action:
//!
//! ```json
//! {
//!   "interval": ["0", "2"],
//!   "states": ["0", "2"],
//!   "coefficients": [["0", "0", "-1"], ["-4", "4", "-1"]]
//! }
//! ```
//!
//! where `coefficients[j][d]` multiplies `a^d` in state `j`.

use qcc_core::{parse_rational, DecisionProblem, PolynomialProblem, Rational};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RationalField {
    Text(String),
    Integer(i64),
}

impl RationalField {
    fn parse(&self, field: &str) -> Result<Rational, CliError> {
        match self {
            RationalField::Integer(n) => Ok(Rational::from_integer((*n).into())),
            RationalField::Text(s) => {
                parse_rational(s).map_err(|_| CliError::Input(format!("{field}: malformed rational {s:?}")))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFileIn {
    states: Vec<String>,
    actions: Vec<RationalField>,
    payoff: Vec<Vec<RationalField>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub payoff: Vec<Vec<String>>,
}

impl From<&DecisionProblem> for ProblemFile {
    fn from(problem: &DecisionProblem) -> Self {
        ProblemFile {
            states: problem.states().to_vec(),
            actions: problem.actions().iter().map(ToString::to_string).collect(),
            payoff: problem
                .rows()
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
}

pub fn parse_problem(text: &str) -> Result<DecisionProblem, CliError> {
    let raw: ProblemFileIn = serde_json::from_str(text).map_err(json_error)?;
    let actions = raw
        .actions
        .iter()
        .enumerate()
        .map(|(i, a)| a.parse(&format!("actions[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut payoff = Vec::with_capacity(raw.payoff.len());
    for (i, row) in raw.payoff.iter().enumerate() {
        payoff.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| v.parse(&format!("payoff[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    DecisionProblem::new(actions, raw.states, payoff).map_err(|e| CliError::Input(e.to_string()))
}

pub fn serialize_problem(problem: &DecisionProblem) -> String {
    serde_json::to_string_pretty(&ProblemFile::from(problem)).expect("problem file serializes")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFileIn {
    interval: [RationalField; 2],
    states: Vec<String>,
    coefficients: Vec<Vec<RationalField>>,
}

pub fn parse_polynomial_problem(text: &str) -> Result<PolynomialProblem, CliError> {
    let raw: PolyFileIn = serde_json::from_str(text).map_err(json_error)?;
    let lower = raw.interval[0].parse("interval[0]")?;
    let upper = raw.interval[1].parse("interval[1]")?;
    let mut coefficients = Vec::with_capacity(raw.coefficients.len());
    for (j, poly) in raw.coefficients.iter().enumerate() {
        coefficients.push(
            poly.iter()
                .enumerate()
                .map(|(d, c)| c.parse(&format!("coefficients[{j}][{d}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    PolynomialProblem::new(lower, upper, raw.states, coefficients).map_err(|e| CliError::Input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = r#"{
        "states": ["t0", "t1"],
        "actions": ["0", "1", "2"],
        "payoff": [["0", "-4"], ["-1", "-1"], ["-4", "0"]]
    }"#;

    #[test]
    fn parses_strings_and_integers() {
        let p = parse_problem(P1).unwrap();
        let expected = DecisionProblem::from_integers(&[[0, -4], [-1, -1], [-4, 0]]).unwrap();
        assert_eq!(p.rows(), expected.rows());
        assert_eq!(p.actions(), expected.actions());
        assert_eq!(p.states(), &["t0".to_string(), "t1".to_string()][..]);
        let mixed = r#"{"states": ["a"], "actions": [0, "7/2"], "payoff": [[-4], ["1/3"]]}"#;
        let q = parse_problem(mixed).unwrap();
        assert_eq!(q.actions()[1].to_string(), "7/2");
        assert_eq!(q.payoff(1, 0).to_string(), "1/3");
    }

    #[test]
    fn round_trip() {
        let p = parse_problem(P1).unwrap();
        let text = serialize_problem(&p);
        assert_eq!(parse_problem(&text).unwrap(), p);
        assert!(text.contains("\"-4\""));
    }

    #[test]
    fn diagnostics_name_the_location() {
        let bad_rational = r#"{"states": ["a"], "actions": ["0"], "payoff": [["x"]]}"#;
        let msg = parse_problem(bad_rational).unwrap_err().to_string();
        assert!(msg.contains("payoff[0][0]"), "{msg}");

        let bad_json = "{\n  \"states\": [\"a\"],\n  \"actions\": [\"0\"]\n  \"payoff\": [[\"1\"]]\n}";
        let msg = parse_problem(bad_json).unwrap_err().to_string();
        assert!(msg.contains("line 4"), "{msg}");

        let mismatch = r#"{"states": ["a", "b"], "actions": ["0"], "payoff": [["1"]]}"#;
        let err = parse_problem(mismatch).unwrap_err();
        assert!(matches!(err, CliError::Input(_)));

        let unordered = r#"{"states": ["a"], "actions": ["1", "0"], "payoff": [["1"], ["2"]]}"#;
        assert!(parse_problem(unordered).is_err());
    }

    #[test]
    fn polynomial_file() {
        let text = r#"{"interval": ["0", "2"], "states": ["0", "2"],
                       "coefficients": [["0", "0", "-1"], [-4, 4, -1]]}"#;
        let poly = parse_polynomial_problem(text).unwrap();
        assert_eq!(poly.coefficients()[1].len(), 3);
        let bad = r#"{"interval": ["2", "0"], "states": ["0"], "coefficients": [["1"]]}"#;
        assert!(parse_polynomial_problem(bad).is_err());
    }
}
