//! JSON input documents.

use std::collections::BTreeMap;
use std::path::Path;

use intlocus::exterior::{Form, MultiVector};
use intlocus::{Chart, RatFunc, Rational};
use serde::{Deserialize, Serialize};

use crate::parser::{parse_expression, parse_rational, Value};
use crate::CliError;

/// On-disk layout. Every list entry in `spaces`, `families`, `sequences` and
/// `poisson` names a definition; `vectors` hold rationals written as strings.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub variables: Vec<String>,
    #[serde(default)]
    pub definitions: BTreeMap<String, String>,
    #[serde(default)]
    pub spaces: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub families: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub sequences: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub poisson: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub vectors: BTreeMap<String, Vec<String>>,
}

/// A validated document: parsed definitions over one shared chart.
#[derive(Clone, Debug)]
pub struct Document {
    pub chart: Chart,
    pub definitions: BTreeMap<String, Value>,
    pub raw: RawDocument,
    vectors: BTreeMap<String, Vec<Rational>>,
}

impl Document {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed document: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawDocument) -> Result<Self, CliError> {
        let chart = Chart::new(&raw.variables).map_err(|e| CliError::Input(format!("variables: {e}")))?;
        for reserved in ["d", "D"] {
            if chart.index_of(reserved).is_some() {
                return Err(CliError::Input(format!("'{reserved}' is reserved and cannot be a variable")));
            }
        }
        let mut definitions = BTreeMap::new();
        for (name, text) in &raw.definitions {
            let v = parse_expression(text, &chart)
                .map_err(|e| CliError::Input(format!("definition '{name}': {e}")))?;
            definitions.insert(name.clone(), v);
        }
        let mut vectors = BTreeMap::new();
        for (name, entries) in &raw.vectors {
            let parsed = entries
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| CliError::Input(format!("vector '{name}': bad rational '{s}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            vectors.insert(name.clone(), parsed);
        }
        let doc = Document { chart, definitions, raw, vectors };
        for (group, table) in [("space", &doc.raw.spaces), ("family", &doc.raw.families), ("sequence", &doc.raw.sequences)] {
            for (name, members) in table {
                for m in members {
                    doc.form(m, Some(1)).map_err(|e| CliError::Input(format!("{group} '{name}': {e}")))?;
                }
            }
        }
        for (name, members) in &doc.raw.poisson {
            for m in members {
                doc.multivector(m, Some(2)).map_err(|e| CliError::Input(format!("poisson '{name}': {e}")))?;
            }
        }
        Ok(doc)
    }

    pub fn value(&self, name: &str) -> Result<&Value, CliError> {
        self.definitions
            .get(name)
            .ok_or_else(|| CliError::Input(format!("no definition named '{name}'")))
    }

    /// A named form, checking its degree when `degree` is given. Named
    /// functions are accepted as 0-forms.
    pub fn form(&self, name: &str, degree: Option<usize>) -> Result<Form, CliError> {
        let f = match self.value(name)? {
            Value::Form(f) => f.clone(),
            Value::Scalar(s) => Form::scalar(&self.chart, s.clone()),
            other => return Err(CliError::Input(format!("'{name}' is a {}, not a form", other.kind()))),
        };
        match degree {
            Some(d) if f.degree() != d => {
                Err(CliError::Input(format!("'{name}' is a {}-form, expected a {d}-form", f.degree())))
            }
            _ => Ok(f),
        }
    }

    pub fn multivector(&self, name: &str, degree: Option<usize>) -> Result<MultiVector, CliError> {
        match self.value(name)? {
            Value::Vector(v) if degree.is_none_or(|d| d == v.degree()) => Ok(v.clone()),
            other => Err(CliError::Input(format!(
                "'{name}' is a {}, expected a {}",
                other.kind(),
                degree.map_or("polyvector".to_string(), |d| format!("{d}-vector"))
            ))),
        }
    }

    pub fn function(&self, name: &str) -> Result<RatFunc, CliError> {
        match self.value(name)? {
            Value::Scalar(f) => Ok(f.clone()),
            other => Err(CliError::Input(format!("'{name}' is a {}, not a function", other.kind()))),
        }
    }

    fn group<'a>(table: &'a BTreeMap<String, Vec<String>>, what: &str, name: &str) -> Result<&'a [String], CliError> {
        table
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::Input(format!("no {what} named '{name}'")))
    }

    pub fn space(&self, name: &str) -> Result<Vec<Form>, CliError> {
        Self::group(&self.raw.spaces, "space", name)?.iter().map(|m| self.form(m, Some(1))).collect()
    }

    pub fn family(&self, name: &str) -> Result<Vec<Form>, CliError> {
        Self::group(&self.raw.families, "family", name)?.iter().map(|m| self.form(m, Some(1))).collect()
    }

    pub fn sequence(&self, name: &str) -> Result<Vec<Form>, CliError> {
        Self::group(&self.raw.sequences, "sequence", name)?.iter().map(|m| self.form(m, Some(1))).collect()
    }

    pub fn poisson_group(&self, name: &str) -> Result<Vec<MultiVector>, CliError> {
        Self::group(&self.raw.poisson, "poisson group", name)?
            .iter()
            .map(|m| self.multivector(m, Some(2)))
            .collect()
    }

    /// A named vector from `vectors`, or an inline comma-separated list.
    pub fn vector(&self, text: &str) -> Result<Vec<Rational>, CliError> {
        match self.vectors.get(text) {
            Some(v) => Ok(v.clone()),
            None => parse_rational_list(text),
        }
    }

    /// Names of definitions of a given kind, in sorted order.
    pub fn names_where(&self, pred: impl Fn(&Value) -> bool) -> Vec<String> {
        self.definitions.iter().filter(|(_, v)| pred(v)).map(|(k, _)| k.clone()).collect()
    }
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Input("empty list of rationals".into()));
    }
    text.split(',')
        .map(|s| parse_rational(s).ok_or_else(|| CliError::Input(format!("bad rational '{}'", s.trim()))))
        .collect()
}
