//! Job configuration files.
//!
//! A job is a TOML document with flat keys; see `docs/config.md` for the
//! full grammar. Field elements may be written as integers or as strings in
//! any form accepted by [`Field::parse`].

use std::path::Path;

use serde::Deserialize;

use crate::census::{BPattern, Strategy, Tier};
use crate::code::EvalParams;
use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::symbolic::Selection;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Str(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ElementList {
    /// `"all"`, `"nonzero"` or a comma-separated list.
    Text(String),
    List(Vec<Scalar>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum MatrixSpec {
    /// `"a,b;c,d"`
    Text(String),
    /// One string or list per row.
    Rows(Vec<RowSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RowSpec {
    Text(String),
    List(Vec<Scalar>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: u64,
    #[serde(default = "one")]
    m: u32,
    modulus: Option<Vec<u64>>,
    n: Option<usize>,
    k: usize,
    alpha: ElementList,
    nu: Option<ElementList>,
    #[serde(rename = "B")]
    b: Option<MatrixSpec>,
    reference: Option<ElementList>,
    selection: Option<[[usize; 3]; 2]>,
    tier: Option<String>,
    threads: Option<usize>,
    limit: Option<usize>,
    strategy: Option<String>,
}

fn one() -> u32 {
    1
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub field: Field,
    pub params: EvalParams,
    /// Coefficient matrix, possibly with wildcards.
    pub pattern: BPattern,
    pub reference: Option<Vec<Felt>>,
    pub selection: Option<Selection>,
    pub tier: Tier,
    pub threads: usize,
    pub limit: usize,
    pub strategy: Strategy,
}

fn scalar(field: &Field, s: &Scalar) -> Result<Felt> {
    match s {
        Scalar::Int(v) => Ok(field.from_int(*v)),
        Scalar::Str(t) => field.parse(t),
    }
}

fn elements(field: &Field, spec: &ElementList, what: &str) -> Result<Vec<Felt>> {
    match spec {
        ElementList::Text(t) if t.trim() == "all" => Ok(field.elements().collect()),
        ElementList::Text(t) if t.trim() == "nonzero" => Ok(field.elements().filter(|e| !e.is_zero()).collect()),
        ElementList::Text(t) => t
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| field.parse(s))
            .collect::<Result<_>>()
            .map_err(|e| Error::Parse(format!("{what}: {e}"))),
        ElementList::List(items) => items
            .iter()
            .map(|s| scalar(field, s))
            .collect::<Result<_>>()
            .map_err(|e| Error::Parse(format!("{what}: {e}"))),
    }
}

fn pattern_cell(field: &Field, s: &Scalar) -> Result<Option<Felt>> {
    match s {
        Scalar::Str(t) if t.trim() == "*" => Ok(None),
        other => scalar(field, other).map(Some),
    }
}

fn parse_pattern(field: &Field, spec: &MatrixSpec) -> Result<BPattern> {
    match spec {
        MatrixSpec::Text(t) => BPattern::parse(field, t),
        MatrixSpec::Rows(rows) => {
            let rows = rows
                .iter()
                .map(|row| match row {
                    RowSpec::Text(t) => t
                        .split(',')
                        .map(|tok| pattern_cell(field, &Scalar::Str(tok.trim().to_string())))
                        .collect::<Result<Vec<_>>>(),
                    RowSpec::List(items) => items.iter().map(|s| pattern_cell(field, s)).collect(),
                })
                .collect::<Result<Vec<_>>>()?;
            BPattern::from_rows(field, rows)
        }
    }
}

impl JobConfig {
    pub fn from_toml_str(text: &str) -> Result<JobConfig> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        let field = Field::new(raw.p, raw.m, raw.modulus.as_deref())?;
        let alpha = elements(&field, &raw.alpha, "alpha")?;
        if let Some(n) = raw.n {
            if n != alpha.len() {
                return Err(Error::InvalidParams(format!(
                    "n = {n} but alpha lists {} points",
                    alpha.len()
                )));
            }
        }
        let nu = raw.nu.as_ref().map(|s| elements(&field, s, "nu")).transpose()?;
        let params = EvalParams::new(&field, raw.k, alpha, nu)?;
        let (n, k) = (params.n(), params.k());
        let pattern = match &raw.b {
            Some(spec) => parse_pattern(&field, spec)?,
            None => BPattern::new(&field, k, n - k, vec![Some(Felt::ZERO); k * (n - k)])?,
        };
        if pattern.rows() != k || pattern.cols() != n - k {
            return Err(Error::Dimension(format!(
                "B is {} x {}, expected {k} x {}",
                pattern.rows(),
                pattern.cols(),
                n - k
            )));
        }
        let reference = raw
            .reference
            .as_ref()
            .map(|s| elements(&field, s, "reference"))
            .transpose()?;
        Ok(JobConfig {
            params,
            pattern,
            reference,
            selection: raw.selection.map(|[r, c]| (r, c)),
            tier: raw.tier.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            threads: raw.threads.unwrap_or(0),
            limit: raw.limit.unwrap_or(0),
            strategy: raw.strategy.as_deref().map(parse_strategy).transpose()?.unwrap_or_default(),
            field,
        })
    }

    pub fn from_path(path: &Path) -> Result<JobConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// The coefficient matrix, rejecting wildcards.
    pub fn fixed_b(&self) -> Result<crate::matrix::Matrix> {
        if self.pattern.has_wildcards() {
            return Err(Error::InvalidParams("this command needs B without wildcards".into()));
        }
        self.pattern.instantiate(&[])
    }
}

pub fn parse_strategy(s: &str) -> Result<Strategy> {
    match s {
        "sieve" => Ok(Strategy::Sieve),
        "early-exit" => Ok(Strategy::EarlyExit),
        "exhaustive" => Ok(Strategy::Exhaustive),
        _ => Err(Error::Parse(format!("unknown strategy '{s}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = JobConfig::from_toml_str(
            r#"
            p = 7
            k = 2
            alpha = [1, 2, 3, 4]
            B = ["*, 1", "0, *"]
            tier = "standard"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.params.n(), 4);
        assert_eq!(cfg.pattern.wildcards(), vec![(0, 0), (1, 1)]);
        assert_eq!(cfg.tier, Tier::Standard);
        assert!(cfg.fixed_b().is_err());
    }

    #[test]
    fn extension_and_text_forms() {
        let cfg = JobConfig::from_toml_str(
            r#"
            p = 3
            m = 2
            k = 3
            alpha = "1, 2, z, z^2, z^3, z^5, z^6, z^7"
            B = "*,*,*,0,0;*,*,*,0,0;*,*,*,0,0"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.params.n(), 8);
        assert_eq!(cfg.pattern.wildcards().len(), 9);
    }

    #[test]
    fn rejects_bad_input() {
        let dup = "p = 7\nk = 2\nalpha = [1, 2, 1]\n";
        match JobConfig::from_toml_str(dup) {
            Err(Error::InvalidParams(msg)) => assert!(msg.contains('1'), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(JobConfig::from_toml_str("p = 7\nk = 2\nalpha = [1,2,3]\nB = [\"1,2\", \"3,4\"]\n").is_err());
        assert!(JobConfig::from_toml_str("p = 8\nk = 2\nalpha = [1,2,3]\n").is_err());
        assert!(JobConfig::from_toml_str("p = 7\nk = 2\nalpha = [1,2,3]\nbogus = 1\n").is_err());
        assert!(JobConfig::from_toml_str("p = 7\nk = 2\nn = 4\nalpha = [1,2,3]\n").is_err());
    }
}
