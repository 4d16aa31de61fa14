//! Hamiltonian files.
//!
//! Coordinate text:
//!
//! ```text
//! # penaltykit coordinate 1
//! # source: cnot
//! # variables: i:target j:control k:result a:ancilla
//! # offset: 0
//! 0 0 1
//! 0 1 2
//! ```
//!
//! One `row col coeff` line per nonzero entry, `row <= col`, in row-major
//! order, each coupling counted once. Coefficients are exact: `3`, `-1/2`.
//!
//! The JSON document carries the same content. Both writers are canonical,
//! so loading a file and writing it again reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use penaltykit_core::gates::GateRole;
use penaltykit_core::hamiltonian::QuboMatrix;
use penaltykit_core::poly::{Coeff, VarId, VarKind};
use penaltykit_core::GateSpec;
use penaltykit_core::Penalty;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const COORDINATE_MAGIC: &str = "# penaltykit coordinate 1";
pub const JSON_FORMAT: &str = "penaltykit-hamiltonian";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Coordinate { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
    #[error("unknown role `{role}` for variable `{name}`")]
    Role { name: String, role: String },
    #[error("not a penaltykit Hamiltonian file")]
    Unrecognized,
}

/// A QUBO plus the metadata the file formats carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianDoc {
    /// What produced the matrix: a gate name, an operation, a constraint.
    pub source: String,
    /// One role per variable: a gate role or a variable kind.
    pub roles: Vec<String>,
    pub qubo: QuboMatrix,
}

fn kind_of_role(name: &str, role: &str) -> Result<VarKind, FormatError> {
    if let Some(k) = VarKind::parse(role) {
        return Ok(k);
    }
    match role {
        "control" | "target" => Ok(VarKind::Input),
        "result" => Ok(VarKind::Output),
        _ => Err(FormatError::Role { name: name.into(), role: role.into() }),
    }
}

impl HamiltonianDoc {
    /// Roles default to the variable kinds.
    pub fn new(source: impl Into<String>, qubo: QuboMatrix) -> Self {
        let roles = qubo.vars().iter().map(|v| v.kind().as_str().to_string()).collect();
        Self { source: source.into(), roles, qubo }
    }

    /// The penalty's matrix with its dropped constant restored as the
    /// offset, unless `drop_offset`.
    pub fn from_penalty(p: &Penalty, source: &str, drop_offset: bool) -> Self {
        let mut poly = p.poly().clone();
        if !drop_offset {
            poly.add_constant(p.dropped_offset());
        }
        let qubo = QuboMatrix::from_poly(&poly).unwrap_or_else(|_| unreachable!("penalties are quadratic"));
        Self::new(source, qubo)
    }

    pub fn from_gate(g: &GateSpec) -> Self {
        let qubo = g.qubo();
        let roles = qubo
            .vars()
            .iter()
            .map(|v| g.role(v.name()).map(GateRole::as_str).unwrap_or(v.kind().as_str()).to_string())
            .collect();
        Self { source: format!("gate:{}", g.name), roles, qubo }
    }

    fn entries(&self) -> Vec<(usize, usize, Coeff)> {
        let q = &self.qubo;
        let mut out: Vec<(usize, usize, Coeff)> = Vec::new();
        for r in 0..q.len() {
            if q.linear()[r] != Coeff::from(0) {
                out.push((r, r, q.linear()[r]));
            }
            out.extend(q.quadratic().range((r, r)..(r + 1, 0)).filter(|(_, c)| **c != Coeff::from(0)).map(|(&(a, b), c)| (a, b, *c)));
        }
        out
    }

    pub fn to_coordinate(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{COORDINATE_MAGIC}");
        let _ = writeln!(s, "# source: {}", self.source);
        let vars: Vec<String> =
            self.qubo.vars().iter().zip(&self.roles).map(|(v, r)| format!("{}:{r}", v.name())).collect();
        let _ = writeln!(s, "# variables: {}", vars.join(" "));
        let _ = writeln!(s, "# offset: {}", self.qubo.offset());
        for (r, c, v) in self.entries() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_coordinate(text: &str) -> Result<Self, FormatError> {
        let err = |line: usize, message: String| FormatError::Coordinate { line, message };
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
        let header = |lines: &mut dyn Iterator<Item = (usize, &str)>, key: &str| -> Result<(usize, String), FormatError> {
            let (no, l) = lines.next().ok_or_else(|| err(0, format!("missing `# {key}:` header")))?;
            l.strip_prefix(&format!("# {key}: "))
                .or_else(|| (l == format!("# {key}:")).then_some(""))
                .map(|v| (no, v.to_string()))
                .ok_or_else(|| err(no, format!("expected `# {key}: ...`")))
        };
        match lines.next() {
            Some((_, l)) if l == COORDINATE_MAGIC => {}
            _ => return Err(FormatError::Unrecognized),
        }
        let (_, source) = header(&mut lines, "source")?;
        let (vno, vars) = header(&mut lines, "variables")?;
        let (ono, offset) = header(&mut lines, "offset")?;
        let mut names = Vec::new();
        let mut roles = Vec::new();
        for item in vars.split_whitespace() {
            let (n, r) = item.split_once(':').ok_or_else(|| err(vno, format!("expected `name:role`, found `{item}`")))?;
            names.push(VarId::new(n, kind_of_role(n, r)?));
            roles.push(r.to_string());
        }
        let offset: Coeff = parse_coeff(&offset).ok_or_else(|| err(ono, format!("bad offset `{offset}`")))?;
        let n = names.len();
        let mut linear = vec![Coeff::from(0); n];
        let mut quad = BTreeMap::new();
        let mut last: Option<(usize, usize)> = None;
        for (no, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            let [r, c, v] = f.as_slice() else {
                return Err(err(no, format!("expected `row col coeff`, found `{l}`")));
            };
            let idx = |s: &str| s.parse::<usize>().ok().filter(|&k| k < n);
            let (Some(r), Some(c)) = (idx(r), idx(c)) else {
                return Err(err(no, format!("index out of range for {n} variables")));
            };
            if r > c {
                return Err(err(no, "entries must satisfy row <= col".into()));
            }
            if last.is_some_and(|p| p >= (r, c)) {
                return Err(err(no, "entries must be in row-major order without repeats".into()));
            }
            last = Some((r, c));
            let v = parse_coeff(v).ok_or_else(|| err(no, format!("bad coefficient `{v}`")))?;
            if v == Coeff::from(0) {
                return Err(err(no, "zero entries are not written".into()));
            }
            if r == c {
                linear[r] = v;
            } else {
                quad.insert((r, c), v);
            }
        }
        let qubo = QuboMatrix::new(names, linear, quad, offset).map_err(|e| err(vno, e.to_string()))?;
        Ok(Self { source, roles, qubo })
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDoc {
            format: JSON_FORMAT.into(),
            version: 1,
            source: self.source.clone(),
            variables: self
                .qubo
                .vars()
                .iter()
                .zip(&self.roles)
                .map(|(v, r)| JsonVar { name: v.name().into(), role: r.clone() })
                .collect(),
            offset: self.qubo.offset().to_string(),
            entries: self.entries().into_iter().map(|(row, col, v)| JsonEntry { row, col, value: v.to_string() }).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).unwrap_or_else(|_| unreachable!());
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: JsonDoc = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        if doc.format != JSON_FORMAT || doc.version != 1 {
            return Err(FormatError::Unrecognized);
        }
        let bad = |what: String| FormatError::Json(what);
        let mut names = Vec::new();
        for v in &doc.variables {
            names.push(VarId::new(v.name.clone(), kind_of_role(&v.name, &v.role)?));
        }
        let n = names.len();
        let mut linear = vec![Coeff::from(0); n];
        let mut quad = BTreeMap::new();
        for e in &doc.entries {
            let v = parse_coeff(&e.value).ok_or_else(|| bad(format!("bad coefficient `{}`", e.value)))?;
            if e.row >= n || e.col >= n || e.row > e.col {
                return Err(bad(format!("bad entry ({}, {})", e.row, e.col)));
            }
            if e.row == e.col {
                linear[e.row] += v;
            } else {
                *quad.entry((e.row, e.col)).or_insert(Coeff::from(0)) += v;
            }
        }
        let offset = parse_coeff(&doc.offset).ok_or_else(|| bad(format!("bad offset `{}`", doc.offset)))?;
        let qubo = QuboMatrix::new(names, linear, quad, offset).map_err(|e| bad(e.to_string()))?;
        Ok(Self { source: doc.source, roles: doc.variables.into_iter().map(|v| v.role).collect(), qubo })
    }

    /// Reads either format, deciding by content.
    pub fn load(text: &str) -> Result<Self, FormatError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_coordinate(text)
        }
    }
}

fn parse_coeff(s: &str) -> Option<Coeff> {
    let c: Coeff = s.parse().ok()?;
    // Only the reduced spelling is accepted, so files stay canonical.
    (c.to_string() == s).then_some(c)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    format: String,
    version: u32,
    source: String,
    variables: Vec<JsonVar>,
    offset: String,
    entries: Vec<JsonEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVar {
    name: String,
    role: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEntry {
    row: usize,
    col: usize,
    value: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use penaltykit_core::gates::{cnot_gate, fredkin_gate};

    const CNOT_COO: &str = "\
# penaltykit coordinate 1
# source: gate:cnot
# variables: i:target j:control k:result a:ancilla
# offset: 0
0 0 1
0 1 2
0 2 -2
0 3 -4
1 1 1
1 2 -2
1 3 -4
2 2 1
2 3 4
3 3 4
";

    #[test]
    fn cnot_coordinate_text() {
        let doc = HamiltonianDoc::from_gate(&cnot_gate());
        assert_eq!(doc.to_coordinate(), CNOT_COO);
        assert_eq!(HamiltonianDoc::from_coordinate(CNOT_COO).unwrap(), doc);
    }

    #[test]
    fn json_round_trip() {
        let doc = HamiltonianDoc::from_gate(&fredkin_gate());
        let text = doc.to_json();
        let back = HamiltonianDoc::load(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rational_offset() {
        let q = QuboMatrix::new(vec![VarId::input("x")], vec![Coeff::new(1, 2)], BTreeMap::new(), Coeff::new(-3, 4)).unwrap();
        let doc = HamiltonianDoc::new("test", q);
        let text = doc.to_coordinate();
        assert!(text.contains("# offset: -3/4\n0 0 1/2\n"));
        assert_eq!(HamiltonianDoc::load(&text).unwrap(), doc);
        assert_eq!(HamiltonianDoc::load(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn rejects_malformed() {
        let bad = CNOT_COO.replace("0 3 -4", "3 0 -4");
        assert!(matches!(HamiltonianDoc::from_coordinate(&bad), Err(FormatError::Coordinate { line: 8, .. })));
        let bad = CNOT_COO.replace("1 1 1\n", "");
        let bad = bad.replace("2 2 1", "2 2 2/4");
        assert!(matches!(HamiltonianDoc::from_coordinate(&bad), Err(FormatError::Coordinate { line: 11, .. })));
        let bad = CNOT_COO.replace("k:result", "k:wizard");
        assert!(matches!(HamiltonianDoc::from_coordinate(&bad), Err(FormatError::Role { .. })));
        assert_eq!(HamiltonianDoc::load("hello"), Err(FormatError::Unrecognized));
        assert!(matches!(HamiltonianDoc::load("{\"format\": 1}"), Err(FormatError::Json(_))));
    }
}
