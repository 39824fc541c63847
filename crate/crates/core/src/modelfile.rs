//! Model files: a TOML document describing the ambient space, the equations,
//! the prime and optional symbol algebras.
//!
//! ```toml
//! label = "quartic_f17"
//!
//! [ambient]
//! weights = [1, 1, 1, 1]
//! vars = ["X0", "X1", "X2", "X3"]
//!
//! [equation]
//! expr = "X0^4 + 47*X1^4 - 103*X2^4 - 17*47*103*X3^4"
//!
//! [arith]
//! p = 17
//!
//! [algebra]
//! n = 2
//! a = 17
//! f_num = "20*X0^2 + 611*X1^2 + 927*X2^2"
//! f_den = "X0^2"
//! ```
//!
//! `expr` may also be an array of strings, and `[[algebra]]` may repeat.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{AmbientSpace, ModelSpec};
use crate::torsor::SymbolAlgebra;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize, Clone)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(i) => i.to_string(),
            Number::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    weights: Vec<u32>,
    vars: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquation {
    expr: OneOrMany<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArith {
    p: u64,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    n: u64,
    a: Number,
    f_num: String,
    #[serde(default = "one")]
    f_den: String,
}

fn one() -> String {
    "1".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    label: Option<String>,
    ambient: RawAmbient,
    equation: RawEquation,
    arith: RawArith,
    #[serde(default)]
    algebra: Option<OneOrMany<RawAlgebra>>,
}

/// A parsed and validated model file.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub model: ModelSpec,
    pub algebras: Vec<SymbolAlgebra>,
}

impl ModelFile {
    pub fn parse(text: &str, default_label: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim().to_string()))?;
        let ambient = AmbientSpace::new(raw.ambient.vars, raw.ambient.weights)?;
        let exprs = raw.equation.expr.into_vec();
        let refs: Vec<&str> = exprs.iter().map(String::as_str).collect();
        let label = raw.label.unwrap_or_else(|| default_label.to_string());
        let model = ModelSpec::parse(ambient, &refs, raw.arith.p, label)?;
        let algebras = raw
            .algebra
            .map(OneOrMany::into_vec)
            .unwrap_or_default()
            .into_iter()
            .map(|a| {
                SymbolAlgebra::parse(a.n, &a.a.text(), &a.f_num, &a.f_den, model.vars())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelFile { model, algebras })
    }

    /// Reads a file; the label defaults to the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
        ModelFile::parse(&text, stem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTIC: &str = r#"
label = "quartic_f17"
[ambient]
weights = [1, 1, 1, 1]
vars = ["X0", "X1", "X2", "X3"]
[equation]
expr = "X0^4 + 47*X1^4 - 103*X2^4 - 17*47*103*X3^4"
[arith]
p = 17
[algebra]
n = 2
a = 17
f_num = "20*X0^2 + (47*13)*X1^2 + (103*9)*X2^2"
f_den = "X0^2"
"#;

    #[test]
    fn parses_the_quartic() {
        let f = ModelFile::parse(QUARTIC, "x").unwrap();
        assert_eq!(f.model.label(), "quartic_f17");
        assert_eq!(f.model.prime(), 17);
        assert_eq!(f.algebras.len(), 1);
        assert_eq!(f.algebras[0].n(), 2);
        assert_eq!(f.algebras[0].a().to_string(), "17");
    }

    #[test]
    fn arrays_and_repeated_algebras() {
        let text = r#"
[ambient]
weights = [1, 1, 1]
vars = ["x", "y", "z"]
[equation]
expr = ["x^2 + y^2 - z^2"]
[arith]
p = 13
[[algebra]]
n = 2
a = "13"
f_num = "x"
f_den = "z"
[[algebra]]
n = 2
a = "-13/2"
f_num = "y"
f_den = "z"
"#;
        let f = ModelFile::parse(text, "conic").unwrap();
        assert_eq!(f.model.label(), "conic");
        assert_eq!(f.algebras.len(), 2);
        assert_eq!(f.algebras[1].a().to_string(), "-13/2");
    }

    #[test]
    fn errors() {
        assert!(matches!(ModelFile::parse("[ambient]\nweights = 1", "x"), Err(Error::Parse(_))));
        let bad_prime = QUARTIC.replace("p = 17", "p = 18");
        assert!(matches!(ModelFile::parse(&bad_prime, "x"), Err(Error::Domain(_))));
        let unknown = QUARTIC.replace("[arith]", "[arith]\nq = 3");
        assert!(matches!(ModelFile::parse(&unknown, "x"), Err(Error::Parse(_))));
    }
}
