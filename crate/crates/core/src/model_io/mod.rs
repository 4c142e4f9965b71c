//! Line-oriented text format for models and relations.
//!
//! ```text
//! # comment
//! kind pa
//! meta source hand-written
//! states s t u v
//! actions a
//! trans s -a-> {u:1/2, v:1/2}
//! trans t -a-> u
//! ```
//!
//! * `kind` is one of `lts ctmc dtmc imc pa ma futs` and comes first.
//! * `trans s -a-> t` is an action step (LTS, IMC); in PA and MA files
//!   the target is a distribution `{t1:p1, t2:p2}` or a state, read as the
//!   point distribution on it.
//! * `trans s -RATE-> t` is a timed transition (CTMC, DTMC, IMC, MA).
//!   Rates are `3`, `3/4` or `0.25`.
//! * `futs` files declare components as `component LABELS : SEMIRINGS`
//!   with semirings `bool` / `real`, innermost first, and clauses
//!   `trans K s -l-> {…}` with a 1-based component index `K`. Level-2
//!   values nest braces: `{{u:1}:true}`.
//!
//! Relations are written one block per line: `{s1 s2}`.

mod parse;
mod relation;
mod write;

pub use parse::{parse_model, ParseError, SemanticError};
pub use relation::{parse_relation, serialize_partition, RelationError};
pub use write::{serialize_futs, serialize_model, write_continuation};

use std::fmt;
use std::str::FromStr;

use crate::encodings::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Lts,
    Ctmc,
    Dtmc,
    Imc,
    Pa,
    Ma,
    Futs,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Lts,
        ModelKind::Ctmc,
        ModelKind::Dtmc,
        ModelKind::Imc,
        ModelKind::Pa,
        ModelKind::Ma,
        ModelKind::Futs,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ModelKind::Lts => "lts",
            ModelKind::Ctmc => "ctmc",
            ModelKind::Dtmc => "dtmc",
            ModelKind::Imc => "imc",
            ModelKind::Pa => "pa",
            ModelKind::Ma => "ma",
            ModelKind::Futs => "futs",
        }
    }

    fn has_actions(self) -> bool {
        matches!(self, ModelKind::Lts | ModelKind::Imc | ModelKind::Pa | ModelKind::Ma)
    }

    fn has_rates(self) -> bool {
        matches!(self, ModelKind::Ctmc | ModelKind::Dtmc | ModelKind::Imc | ModelKind::Ma)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL.into_iter().find(|k| k.keyword() == s).ok_or_else(|| format!("unknown model kind `{s}`"))
    }
}

/// A parsed and validated model file.
#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub kind: ModelKind,
    pub model: Model,
    /// `meta` lines in file order.
    pub metadata: Vec<(String, String)>,
}

impl ModelDocument {
    pub fn new(kind: ModelKind, model: Model) -> Self {
        ModelDocument { kind, model, metadata: Vec::new() }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
