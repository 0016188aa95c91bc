//! The data mini-language: `power:p` is r^p, `const:c` is the constant c, and terms are
//! joined with `+`, as in `power:-0.5+const:1`.

use fhl_core::RadialFunction;

use crate::error::CliError;

/// Parsed data term list `(coefficient, exponent)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub text: String,
    pub terms: Vec<(f64, f64)>,
}

impl DataSpec {
    pub fn parse(name: &str, text: &str) -> Result<Self, CliError> {
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let item = raw.trim();
            let (kind, value) = item
                .split_once(':')
                .ok_or_else(|| CliError::param(name, format!("term '{item}' is not of the form power:p or const:c")))?;
            let x: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::param(name, format!("'{value}' in term '{item}' is not a number")))?;
            if !x.is_finite() {
                return Err(CliError::param(name, format!("'{value}' is not finite")));
            }
            match kind.trim() {
                "power" => terms.push((1.0, x)),
                "const" => terms.push((x, 0.0)),
                other => return Err(CliError::param(name, format!("unknown term kind '{other}' (power, const)"))),
            }
        }
        Ok(DataSpec {
            text: text.to_string(),
            terms,
        })
    }

    pub fn function(&self) -> RadialFunction {
        RadialFunction::powers(&self.terms)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.0 >= 0.0)
    }

    /// Bounded near the origin (every nonzero term has a nonnegative exponent).
    pub fn is_bounded(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 0.0 || t.1 >= 0.0)
    }
}
