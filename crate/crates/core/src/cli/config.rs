//! JSON configuration: generator families, their cumulants, and Toeplitz
//! variables written as N expression strings each.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::ncpoly::{parse_expr, Alphabet, ParseError};
use crate::rational::{parse_rational, Rational};
use crate::scalar_space::{CumulantSpec, Distribution, MomentFunctional, DEFAULT_DEGREE_CAP, MAX_DEGREE_CAP};
use crate::toeplitz::TVariable;

pub const DEGREE_CAP_ENV: &str = "TOEPFREE_DEGREE_CAP";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Io(String),
    Syntax { line: usize, column: usize, msg: String },
    Schema { pointer: String, msg: String },
    Duplicate { kind: &'static str, name: String },
    EntryCount { variable: String, expected: usize, found: usize },
    Expression { pointer: String, error: ParseError },
    Invalid { pointer: String, msg: String },
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::Io(_) => "io-error",
            ConfigError::Syntax { .. } => "json-syntax",
            ConfigError::Schema { .. } => "schema",
            ConfigError::Duplicate { .. } => "duplicate-name",
            ConfigError::EntryCount { .. } => "schema",
            ConfigError::Expression { error, .. } => error.code(),
            ConfigError::Invalid { .. } => "invalid-config",
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(msg) => write!(f, "io-error: {msg}"),
            ConfigError::Syntax { line, column, msg } => {
                write!(f, "json-syntax: {msg} at line {line} column {column}")
            }
            ConfigError::Schema { pointer, msg } => write!(f, "schema: {msg} at {pointer}"),
            ConfigError::Duplicate { kind, name } => write!(f, "duplicate-name: {kind} {name:?}"),
            ConfigError::EntryCount { variable, expected, found } => write!(
                f,
                "schema: variable {variable:?} has {found} entries, expected {expected}"
            ),
            ConfigError::Expression { pointer, error } => {
                let detail = error.to_string();
                let detail = detail.strip_prefix(error.code()).unwrap_or(&detail);
                let detail = detail.trim_start_matches(':').trim_start();
                write!(f, "{}: {detail} in {pointer}", error.code())
            }
            ConfigError::Invalid { pointer, msg } => write!(f, "invalid-config: {msg} at {pointer}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    order: usize,
    degree_cap: Option<usize>,
    families: Vec<RawFamily>,
    variables: Vec<RawVariable>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: String,
    generators: Vec<RawGenerator>,
    #[serde(default)]
    joint_cumulants: Vec<RawJoint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    id: String,
    distribution: Option<RawDistribution>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    kind: String,
    variance: Option<Number>,
    rate: Option<Number>,
    value: Option<Number>,
    cumulants: Option<BTreeMap<String, Number>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    args: Vec<String>,
    value: Number,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: String,
    entries: Vec<String>,
}

/// A validated configuration with every expression already parsed.
#[derive(Debug)]
pub struct Config {
    pub order: usize,
    pub degree_cap: usize,
    pub functional: Arc<MomentFunctional>,
    variables: Vec<(String, TVariable)>,
}

impl Config {
    pub fn variable(&self, name: &str) -> Option<&TVariable> {
        self.variables.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn variables(&self) -> &[(String, TVariable)] {
        &self.variables
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.functional.alphabet()
    }
}

pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    let env_cap = std::env::var(DEGREE_CAP_ENV).ok();
    parse_config(&text, env_cap.as_deref())
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn number(value: &Number, pointer: &str) -> Result<Rational, ConfigError> {
    match value {
        Number::Int(i) => Ok(Rational::from_integer((*i).into())),
        Number::Text(t) => parse_rational(t.trim()).ok_or_else(|| ConfigError::Invalid {
            pointer: pointer.to_string(),
            msg: format!("{t:?} is not a rational p or p/q"),
        }),
    }
}

fn distribution(raw: &RawDistribution, pointer: &str) -> Result<Distribution, ConfigError> {
    let param = |v: &Option<Number>, field: &str, default: Option<i64>| -> Result<Rational, ConfigError> {
        match (v, default) {
            (Some(v), _) => number(v, &format!("{pointer}/{field}")),
            (None, Some(d)) => Ok(Rational::from_integer(d.into())),
            (None, None) => Err(ConfigError::Schema {
                pointer: pointer.to_string(),
                msg: format!("missing field `{field}`"),
            }),
        }
    };
    match raw.kind.as_str() {
        "semicircular" => Ok(Distribution::Semicircular(param(&raw.variance, "variance", Some(1))?)),
        "free_poisson" => Ok(Distribution::FreePoisson(param(&raw.rate, "rate", Some(1))?)),
        "constant" => Ok(Distribution::Constant(param(&raw.value, "value", None)?)),
        "custom" => {
            let mut table = BTreeMap::new();
            for (order, v) in raw.cumulants.iter().flatten() {
                let at = format!("{pointer}/cumulants/{order}");
                let n: usize = order.parse().ok().filter(|&n| n >= 1).ok_or_else(|| ConfigError::Invalid {
                    pointer: at.clone(),
                    msg: format!("cumulant order {order:?} is not a positive integer"),
                })?;
                table.insert(n, number(v, &at)?);
            }
            Ok(Distribution::Custom(table))
        }
        other => Err(ConfigError::Invalid {
            pointer: format!("{pointer}/kind"),
            msg: format!("unknown distribution {other:?}"),
        }),
    }
}

fn degree_cap(raw: Option<usize>, env: Option<&str>) -> Result<usize, ConfigError> {
    let (cap, pointer) = match (raw, env) {
        (Some(cap), _) => (cap, "/degree_cap".to_string()),
        (None, Some(text)) => {
            let cap = text.trim().parse().map_err(|_| ConfigError::Invalid {
                pointer: format!("${DEGREE_CAP_ENV}"),
                msg: format!("{text:?} is not a positive integer"),
            })?;
            (cap, format!("${DEGREE_CAP_ENV}"))
        }
        (None, None) => return Ok(DEFAULT_DEGREE_CAP),
    };
    if cap == 0 || cap > MAX_DEGREE_CAP {
        return Err(ConfigError::Invalid { pointer, msg: format!("degree cap must be in 1..={MAX_DEGREE_CAP}") });
    }
    Ok(cap)
}

/// Parses and validates configuration text. `env_cap` is the value of the
/// degree-cap environment variable, consulted only when the file sets none.
pub fn parse_config(text: &str, env_cap: Option<&str>) -> Result<Config, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        if inner.is_syntax() || inner.is_eof() {
            ConfigError::Syntax {
                line: inner.line(),
                column: inner.column(),
                msg: inner.to_string().split(" at line").next().unwrap_or_default().to_string(),
            }
        } else {
            let msg = inner.to_string();
            let msg = msg.split(" at line").next().unwrap_or_default().to_string();
            ConfigError::Schema { pointer: pointer_of(e.path()), msg }
        }
    })?;
    de.end().map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: "trailing characters".into(),
    })?;

    if raw.order == 0 {
        return Err(ConfigError::Invalid { pointer: "/N".into(), msg: "N must be at least 1".into() });
    }
    let cap = degree_cap(raw.degree_cap, env_cap)?;

    let mut alphabet = Alphabet::new();
    let mut family_names = HashSet::new();
    for (fi, family) in raw.families.iter().enumerate() {
        if !family_names.insert(family.name.as_str()) {
            return Err(ConfigError::Duplicate { kind: "family", name: family.name.clone() });
        }
        for (gi, g) in family.generators.iter().enumerate() {
            if alphabet.lookup(&g.id).is_some() {
                return Err(ConfigError::Duplicate { kind: "generator", name: g.id.clone() });
            }
            alphabet.add(&g.id, &family.name).map_err(|e| ConfigError::Invalid {
                pointer: format!("/families/{fi}/generators/{gi}/id"),
                msg: e.to_string(),
            })?;
        }
    }

    let mut spec = CumulantSpec::new(cap).map_err(|e| ConfigError::Invalid {
        pointer: "/degree_cap".into(),
        msg: e.to_string(),
    })?;
    for (fi, family) in raw.families.iter().enumerate() {
        for (gi, g) in family.generators.iter().enumerate() {
            let Some(d) = &g.distribution else { continue };
            let pointer = format!("/families/{fi}/generators/{gi}/distribution");
            let dist = distribution(d, &pointer)?;
            let sym = alphabet.lookup(&g.id).expect("generator was just added");
            spec.set_distribution(&alphabet, sym, &dist)
                .map_err(|e| ConfigError::Invalid { pointer, msg: e.to_string() })?;
        }
        for (ji, joint) in family.joint_cumulants.iter().enumerate() {
            let pointer = format!("/families/{fi}/joint_cumulants/{ji}");
            let mut tuple = Vec::with_capacity(joint.args.len());
            for (ai, id) in joint.args.iter().enumerate() {
                let sym = alphabet.lookup(id).ok_or_else(|| ConfigError::Expression {
                    pointer: format!("{pointer}/args/{ai}"),
                    error: ParseError::UnknownSymbol { name: id.clone(), pos: 0 },
                })?;
                if alphabet.generator(sym).family != family.name {
                    return Err(ConfigError::Invalid {
                        pointer: format!("{pointer}/args/{ai}"),
                        msg: format!("generator {id:?} is not in family {:?}", family.name),
                    });
                }
                tuple.push(sym);
            }
            let value = number(&joint.value, &format!("{pointer}/value"))?;
            spec.set(&alphabet, &tuple, value)
                .map_err(|e| ConfigError::Invalid { pointer, msg: e.to_string() })?;
        }
    }

    let mut names = HashSet::new();
    let mut variables = Vec::with_capacity(raw.variables.len());
    for (vi, var) in raw.variables.iter().enumerate() {
        if !names.insert(var.name.as_str()) {
            return Err(ConfigError::Duplicate { kind: "variable", name: var.name.clone() });
        }
        if var.entries.len() != raw.order {
            return Err(ConfigError::EntryCount {
                variable: var.name.clone(),
                expected: raw.order,
                found: var.entries.len(),
            });
        }
        let entries = var
            .entries
            .iter()
            .enumerate()
            .map(|(ei, text)| {
                parse_expr(text, &alphabet).map_err(|error| ConfigError::Expression {
                    pointer: format!("/variables/{vi}/entries/{ei}"),
                    error,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tv = TVariable::new(entries).expect("entry count checked above");
        variables.push((var.name.clone(), tv));
    }

    let functional = Arc::new(MomentFunctional::new(Arc::new(alphabet), spec));
    Ok(Config { order: raw.order, degree_cap: cap, functional, variables })
}
