//! Dialects, grammar, parser, and canonical serializer for structured
//! action sequences.
//!
//! Two text dialects are supported:
//!
//! * **ChemTrans** — bracketed phrases with typed key/value components:
//!
//!   ```text
//!   sequence  := phrase+
//!   phrase    := "[" type "]" [ component ("&" component)* ]
//!   component := [ role ":" ] "(" (key ":" value "&")* ")"
//!   ```
//!
//!   Whitespace around tokens is insignificant. Values are read greedily
//!   up to the next top-level `&` or `)`, so text such as `1:1` or
//!   `200 mL` needs no escaping. A key may itself contain a colon
//!   (e.g. `batch:each`): the key/value split happens at the first colon
//!   that is followed by whitespace (or ends the field), falling back to
//!   the first colon when no such position exists.
//!
//! * **OpenExp** — verb-first phrases separated by `;`:
//!
//!   ```text
//!   sequence := action (";" action)* ["."]
//!   action   := TYPE free-text
//!   ```
//!
//!   The first whitespace-delimited token of each segment is the action
//!   type; the remainder is kept as free text. A trailing standalone `.`
//!   terminator is accepted and dropped from the canonical form.
//!
//! Canonical form uses single spaces exactly: `[ type ] role: ( key:
//! value & ... & )` with components joined by ` & ` and phrases joined
//! by a single space (ChemTrans), or `TYPE text` phrases joined by
//! ` ; ` (OpenExp). Action-type names are lowercased in ChemTrans and
//! uppercased in OpenExp; unknown type names are kept verbatim (after
//! case normalization) and flagged by the validity checker rather than
//! coerced or dropped.

mod parse;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The text dialect an action sequence is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    ChemTrans,
    OpenExp,
}

/// Action-type vocabulary of the ChemTrans dialect (lowercase), plus the
/// `noaction` sentinel used by type matching.
pub const CHEMTRANS_TYPES: &[&str] = &[
    "add",
    "settemp",
    "yield",
    "evaporate",
    "dry",
    "wash",
    "filter",
    "column",
    "extract",
    "quench",
    "distill",
    "reflux",
    "recrystallize",
    "triturate",
    "transfer",
    "noaction",
];

/// Action-type vocabulary of the OpenExp dialect (uppercase), plus the
/// `NOACTION` sentinel used by type matching.
pub const OPENEXP_TYPES: &[&str] = &[
    "ADD",
    "COLLECTLAYER",
    "CONCENTRATE",
    "DEGAS",
    "DRYSOLID",
    "DRYSOLUTION",
    "EXTRACT",
    "FILTER",
    "FOLLOWOTHERPROCEDURE",
    "MAKESOLUTION",
    "MICROWAVE",
    "PARTITION",
    "PH",
    "PHASESEPARATION",
    "PURIFY",
    "QUENCH",
    "RECRYSTALLIZE",
    "REFLUX",
    "SETTEMPERATURE",
    "SONICATE",
    "STIR",
    "TRITURATE",
    "WAIT",
    "WASH",
    "YIELD",
    "NOACTION",
];

impl Dialect {
    /// Known action-type names for this dialect, in canonical case.
    pub fn vocabulary(self) -> &'static [&'static str] {
        match self {
            Dialect::ChemTrans => CHEMTRANS_TYPES,
            Dialect::OpenExp => OPENEXP_TYPES,
        }
    }

    /// Case-normalize a raw type name into this dialect's convention.
    pub fn canonical_type_name(self, raw: &str) -> String {
        match self {
            Dialect::ChemTrans => raw.to_lowercase(),
            Dialect::OpenExp => raw.to_uppercase(),
        }
    }

    /// Name of the sentinel type used for unmatched phrases.
    pub fn noaction_name(self) -> &'static str {
        match self {
            Dialect::ChemTrans => "noaction",
            Dialect::OpenExp => "NOACTION",
        }
    }

    /// Name of the yield-reporting action removed by detokenization.
    pub fn yield_name(self) -> &'static str {
        match self {
            Dialect::ChemTrans => "yield",
            Dialect::OpenExp => "YIELD",
        }
    }
}

/// A case-normalized action-type name tied to its dialect.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionType {
    pub name: String,
    pub dialect: Dialect,
}

impl ActionType {
    /// Normalize `raw` into the dialect's canonical case. Unknown names
    /// are preserved (see [`ActionType::is_known`]), never coerced.
    pub fn new(raw: &str, dialect: Dialect) -> Self {
        ActionType { name: dialect.canonical_type_name(raw.trim()), dialect }
    }

    /// The sentinel type pairing unmatched phrases.
    pub fn noaction(dialect: Dialect) -> Self {
        ActionType { name: dialect.noaction_name().to_string(), dialect }
    }

    /// Whether the name belongs to the dialect's vocabulary.
    pub fn is_known(&self) -> bool {
        self.dialect.vocabulary().contains(&self.name.as_str())
    }

    /// Whether this is the unmatched-phrase sentinel.
    pub fn is_noaction(&self) -> bool {
        self.name == self.dialect.noaction_name()
    }
}

/// One `key: value` field of a component. Keys are nonempty; a parsed
/// value never contains a top-level `&` or `)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arg {
    pub key: String,
    pub value: String,
}

/// Key used to carry OpenExp free text inside the structured form.
pub(crate) const TEXT_KEY: &str = "text";

/// A role-tagged group of key/value fields, e.g.
/// `reagent: ( name: ice water & type: pure & )`. The role is empty when
/// the dialect omits one (OpenExp free text, or roleless ChemTrans
/// groups).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub role: String,
    pub args: Vec<Arg>,
}

impl Component {
    /// Wrap dialect-free text (OpenExp payload) as a component.
    pub(crate) fn free_text(text: &str) -> Self {
        Component {
            role: String::new(),
            args: vec![Arg { key: TEXT_KEY.to_string(), value: text.to_string() }],
        }
    }

    /// The free-text payload if this component wraps one.
    pub(crate) fn as_free_text(&self) -> Option<&str> {
        match self.args.as_slice() {
            [Arg { key, value }] if self.role.is_empty() && key == TEXT_KEY => Some(value),
            _ => None,
        }
    }
}

/// One action phrase: a type plus its (possibly empty) components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub action_type: ActionType,
    pub components: Vec<Component>,
}

/// A parsed sequence of action phrases. `source_text` keeps the text the
/// sequence was parsed from (or the canonical serialization, after
/// [`canonicalize`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSequence {
    pub dialect: Dialect,
    pub actions: Vec<Action>,
    pub source_text: String,
}

/// Errors raised by parsing and detokenization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    /// The input contained no phrase at all.
    #[error("empty input")]
    EmptyInput,
    /// Structurally malformed input. `offset` is a byte offset into the
    /// original text, always within `0..=text.len()`.
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    /// A placeholder token had no entry in the substitution table.
    #[error("unmapped placeholder token `{token}`")]
    UnmappedToken { token: String },
}

/// One problem found by [`check_validity`]: a byte offset into the
/// checked text plus a human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityIssue {
    pub offset: usize,
    pub message: String,
}

/// Validity verdict for a piece of text. `is_valid` holds exactly when
/// `errors` is empty: the text parses, delimiters balance, and every
/// action type is in the dialect vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub is_valid: bool,
    pub errors: Vec<ValidityIssue>,
}

impl ValidityReport {
    fn from_errors(errors: Vec<ValidityIssue>) -> Self {
        ValidityReport { is_valid: errors.is_empty(), errors }
    }
}

/// Parse `text` in the given dialect.
///
/// Unknown action types are retained (case-normalized) rather than
/// rejected; only structural problems fail. Whitespace-only input yields
/// [`SchemaError::EmptyInput`]. On success `source_text` is the original
/// input.
pub fn parse(text: &str, dialect: Dialect) -> Result<ActionSequence, SchemaError> {
    parse_with_offsets(text, dialect).map(|(seq, _)| seq)
}

/// Parse and also report the byte offset of each action-type token
/// (used by the validity checker to point at unknown types).
pub(crate) fn parse_with_offsets(
    text: &str,
    dialect: Dialect,
) -> Result<(ActionSequence, Vec<usize>), SchemaError> {
    match dialect {
        Dialect::ChemTrans => parse::chemtrans(text),
        Dialect::OpenExp => parse::openexp(text),
    }
}

/// Collapse internal whitespace runs to single spaces and trim.
pub(crate) fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn serialize_arg(arg: &Arg, out: &mut String) {
    let key = collapse_ws(&arg.key);
    let value = collapse_ws(&arg.value);
    if value.is_empty() {
        out.push_str(&format!("{key}: & "));
    } else {
        out.push_str(&format!("{key}: {value} & "));
    }
}

/// Canonical text of a single component (ChemTrans shape).
pub(crate) fn serialize_component(component: &Component) -> String {
    let mut out = String::new();
    let role = collapse_ws(&component.role);
    if !role.is_empty() {
        out.push_str(&role);
        out.push_str(": ");
    }
    out.push_str("( ");
    for arg in &component.args {
        serialize_arg(arg, &mut out);
    }
    out.push(')');
    out
}

/// Canonical text of a single action phrase.
pub(crate) fn serialize_action(action: &Action, dialect: Dialect) -> String {
    let name = dialect.canonical_type_name(&action.action_type.name);
    match dialect {
        Dialect::ChemTrans => {
            let mut out = format!("[ {name} ]");
            if !action.components.is_empty() {
                out.push(' ');
                let parts: Vec<String> =
                    action.components.iter().map(serialize_component).collect();
                out.push_str(&parts.join(" & "));
            }
            out
        }
        Dialect::OpenExp => {
            let mut parts: Vec<String> = Vec::new();
            for component in &action.components {
                let text = match component.as_free_text() {
                    Some(t) => collapse_ws(t),
                    None => serialize_component(component),
                };
                if !text.is_empty() {
                    parts.push(text);
                }
            }
            if parts.is_empty() {
                name
            } else {
                format!("{name} {}", parts.join(" "))
            }
        }
    }
}

/// Render the canonical text of a sequence.
///
/// The output is fully normalized (canonical type case, single spaces),
/// so `serialize(x) == serialize(&canonicalize(x))` for any sequence and
/// `parse(&serialize(x), x.dialect)` succeeds for well-formed content.
pub fn serialize(seq: &ActionSequence) -> String {
    let parts: Vec<String> =
        seq.actions.iter().map(|a| serialize_action(a, seq.dialect)).collect();
    match seq.dialect {
        Dialect::ChemTrans => parts.join(" "),
        Dialect::OpenExp => parts.join(" ; "),
    }
}

/// Structurally normalize a sequence: canonical type case, whitespace
/// collapsed in roles, keys, and values, and `source_text` replaced by
/// the canonical serialization. Idempotent.
pub fn canonicalize(seq: &ActionSequence) -> ActionSequence {
    let actions: Vec<Action> = seq
        .actions
        .iter()
        .map(|a| Action {
            action_type: ActionType::new(&a.action_type.name, seq.dialect),
            components: a
                .components
                .iter()
                .map(|c| Component {
                    role: collapse_ws(&c.role),
                    args: c
                        .args
                        .iter()
                        .map(|arg| Arg {
                            key: collapse_ws(&arg.key),
                            value: collapse_ws(&arg.value),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let canonical = ActionSequence {
        dialect: seq.dialect,
        actions,
        source_text: String::new(),
    };
    let text = serialize(&canonical);
    ActionSequence { source_text: text, ..canonical }
}

/// Canonical text of `text`: parse then serialize.
pub fn canonical_text(text: &str, dialect: Dialect) -> Result<String, SchemaError> {
    Ok(serialize(&parse(text, dialect)?))
}

/// Check structural validity and vocabulary membership of `text`.
///
/// Never panics and never aborts early: parse failures and unknown
/// action types all land in the report with byte offsets.
pub fn check_validity(text: &str, dialect: Dialect) -> ValidityReport {
    match parse_with_offsets(text, dialect) {
        Err(SchemaError::EmptyInput) => ValidityReport::from_errors(vec![ValidityIssue {
            offset: 0,
            message: "empty input".to_string(),
        }]),
        Err(SchemaError::Parse { offset, expected }) => {
            ValidityReport::from_errors(vec![ValidityIssue {
                offset,
                message: format!("expected {expected}"),
            }])
        }
        Err(err) => ValidityReport::from_errors(vec![ValidityIssue {
            offset: 0,
            message: err.to_string(),
        }]),
        Ok((seq, type_offsets)) => {
            let mut errors = Vec::new();
            for (action, offset) in seq.actions.iter().zip(type_offsets) {
                if !action.action_type.is_known() {
                    errors.push(ValidityIssue {
                        offset,
                        message: format!(
                            "unknown action type `{}`",
                            action.action_type.name
                        ),
                    });
                }
            }
            ValidityReport::from_errors(errors)
        }
    }
}

/// Remove yield-reporting actions from a sequence (used when loading
/// OpenExp corpora whose yield chemicals carry no usable mapping).
pub fn remove_yield_actions(seq: &ActionSequence) -> ActionSequence {
    let actions: Vec<Action> = seq
        .actions
        .iter()
        .filter(|a| a.action_type.name != seq.dialect.yield_name())
        .cloned()
        .collect();
    let pruned = ActionSequence { dialect: seq.dialect, actions, source_text: String::new() };
    let text = serialize(&pruned);
    ActionSequence { source_text: text, ..pruned }
}

/// Replace placeholder tokens (`$k$` for substances, `@k@` for
/// durations, `k` numeric) in OpenExp text with their original forms and
/// drop `YIELD` actions together with their components.
///
/// `YIELD` phrases are removed *before* substitution, so placeholders
/// that only occur inside them need no table entry. Any placeholder left
/// in the remaining text without a table entry is an error. The result
/// is canonical OpenExp text.
pub fn detokenize_openexp(
    text: &str,
    table: &BTreeMap<String, String>,
) -> Result<String, SchemaError> {
    let seq = parse(text, Dialect::OpenExp)?;
    let kept = remove_yield_actions(&seq);
    let actions: Vec<Action> = kept
        .actions
        .iter()
        .map(|a| {
            let components = a
                .components
                .iter()
                .map(|c| {
                    let args = c
                        .args
                        .iter()
                        .map(|arg| {
                            Ok(Arg {
                                key: arg.key.clone(),
                                value: replace_placeholders(&arg.value, table)?,
                            })
                        })
                        .collect::<Result<Vec<_>, SchemaError>>()?;
                    Ok(Component { role: c.role.clone(), args })
                })
                .collect::<Result<Vec<_>, SchemaError>>()?;
            Ok(Action { action_type: a.action_type.clone(), components })
        })
        .collect::<Result<Vec<_>, SchemaError>>()?;
    let out =
        ActionSequence { dialect: Dialect::OpenExp, actions, source_text: String::new() };
    Ok(serialize(&out))
}

/// Substitute every `$k$` / `@k@` token in `text` via `table`.
fn replace_placeholders(
    text: &str,
    table: &BTreeMap<String, String>,
) -> Result<String, SchemaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let delim = chars[i];
        if delim == '$' || delim == '@' {
            // A token is delim, one or more digits, then the same delim.
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 && j < chars.len() && chars[j] == delim {
                let token: String = chars[i..=j].iter().collect();
                match table.get(&token) {
                    Some(replacement) => out.push_str(replacement),
                    None => return Err(SchemaError::UnmappedToken { token }),
                }
                i = j + 1;
                continue;
            }
        }
        out.push(delim);
        i += 1;
    }
    Ok(out)
}
