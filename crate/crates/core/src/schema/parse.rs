//! Dialect parsers. Both report structural problems as
//! [`SchemaError::Parse`] with byte offsets into the original text and
//! return the byte offset of every action-type token for the validity
//! checker.
//!
//! Scanning works on bytes: every delimiter is ASCII, so positions used
//! for slicing always fall on character boundaries.

use super::{
    collapse_ws, Action, ActionSequence, ActionType, Arg, Component, Dialect, SchemaError,
};

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, bytes: text.as_bytes(), pos: 0 }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8, expected: &str) -> Result<(), SchemaError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn error(&self, expected: &str) -> SchemaError {
        SchemaError::Parse { offset: self.pos, expected: expected.to_string() }
    }
}

/// Parse ChemTrans text: bracketed typed phrases with `&`-separated
/// key/value components.
pub(super) fn chemtrans(text: &str) -> Result<(ActionSequence, Vec<usize>), SchemaError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.at_end() {
        return Err(SchemaError::EmptyInput);
    }
    let mut actions = Vec::new();
    let mut type_offsets = Vec::new();
    while !cur.at_end() {
        cur.expect(b'[', "`[`")?;
        cur.skip_ws();
        let type_start = cur.pos;
        while cur
            .peek()
            .is_some_and(|b| !b.is_ascii_whitespace() && b != b']' && b != b'[')
        {
            cur.pos += 1;
        }
        if cur.pos == type_start {
            return Err(cur.error("action type"));
        }
        let type_name = &cur.text[type_start..cur.pos];
        cur.skip_ws();
        cur.expect(b']', "`]`")?;
        let mut components = Vec::new();
        cur.skip_ws();
        while !cur.at_end() && cur.peek() != Some(b'[') {
            components.push(component(&mut cur)?);
            cur.skip_ws();
            if cur.peek() == Some(b'&') {
                cur.pos += 1;
                cur.skip_ws();
                if cur.at_end() || cur.peek() == Some(b'[') {
                    return Err(cur.error("component after `&`"));
                }
            } else {
                break;
            }
        }
        actions.push(Action {
            action_type: ActionType::new(type_name, Dialect::ChemTrans),
            components,
        });
        type_offsets.push(type_start);
        cur.skip_ws();
        if !cur.at_end() && cur.peek() != Some(b'[') {
            return Err(cur.error("`[`"));
        }
    }
    Ok((
        ActionSequence {
            dialect: Dialect::ChemTrans,
            actions,
            source_text: text.to_string(),
        },
        type_offsets,
    ))
}

/// One `role: ( key: value & ... )` group. The role may be omitted.
fn component(cur: &mut Cursor) -> Result<Component, SchemaError> {
    cur.skip_ws();
    let role_start = cur.pos;
    loop {
        match cur.peek() {
            Some(b'(') => break,
            Some(b'[') | Some(b']') | Some(b')') | Some(b'&') | None => {
                return Err(cur.error("`(`"));
            }
            Some(_) => cur.pos += 1,
        }
    }
    let role_text = cur.text[role_start..cur.pos].trim();
    let role = if role_text.is_empty() {
        String::new()
    } else if let Some(stripped) = role_text.strip_suffix(':') {
        collapse_ws(stripped)
    } else {
        return Err(cur.error("`:` after role"));
    };
    cur.pos += 1; // consume '('
    let mut args = Vec::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => return Err(cur.error("`)`")),
            Some(b')') => {
                cur.pos += 1;
                break;
            }
            _ => {}
        }
        let arg_start = cur.pos;
        let mut depth = 0usize;
        loop {
            match cur.peek() {
                None => return Err(cur.error("`)`")),
                Some(b'(') => depth += 1,
                Some(b')') => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                Some(b'&') if depth == 0 => break,
                Some(b'[') | Some(b']') => return Err(cur.error("`)`")),
                Some(_) => {}
            }
            cur.pos += 1;
        }
        let raw = &cur.text[arg_start..cur.pos];
        if raw.trim().is_empty() {
            return Err(SchemaError::Parse {
                offset: arg_start,
                expected: "argument".to_string(),
            });
        }
        let (key, value) = split_arg(raw).ok_or(SchemaError::Parse {
            offset: arg_start,
            expected: "`:` in argument".to_string(),
        })?;
        if key.is_empty() {
            return Err(SchemaError::Parse {
                offset: arg_start,
                expected: "argument key".to_string(),
            });
        }
        args.push(Arg { key, value });
        if cur.peek() == Some(b'&') {
            cur.pos += 1;
        } else {
            cur.pos += 1; // consume ')'
            break;
        }
    }
    Ok(Component { role, args })
}

/// Split an argument into key and value.
///
/// The split happens at the first colon followed by whitespace or the
/// end of the field — this is what lets keys like `batch:each` and
/// values like `1:1` coexist — falling back to the first colon anywhere
/// when no such position exists.
fn split_arg(raw: &str) -> Option<(String, String)> {
    let mut fallback = None;
    let mut split_at = None;
    for (i, ch) in raw.char_indices() {
        if ch == ':' {
            if fallback.is_none() {
                fallback = Some(i);
            }
            let next = raw[i + ch.len_utf8()..].chars().next();
            if next.is_none_or(char::is_whitespace) {
                split_at = Some(i);
                break;
            }
        }
    }
    let idx = split_at.or(fallback)?;
    Some((collapse_ws(&raw[..idx]), collapse_ws(&raw[idx + 1..])))
}

/// Parse OpenExp text: `;`-separated verb-first segments with an
/// optional final `.` terminator.
pub(super) fn openexp(text: &str) -> Result<(ActionSequence, Vec<usize>), SchemaError> {
    if text.trim().is_empty() {
        return Err(SchemaError::EmptyInput);
    }
    let bytes = text.as_bytes();
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 0..=bytes.len() {
        if i == bytes.len() || bytes[i] == b';' {
            segments.push((start, i));
            start = i + 1;
        }
    }
    let last = segments.len() - 1;
    let mut actions = Vec::new();
    let mut type_offsets = Vec::new();
    for (idx, (seg_start, seg_end)) in segments.into_iter().enumerate() {
        let raw = &text[seg_start..seg_end];
        let trimmed = raw.trim();
        if trimmed.is_empty() || (idx == last && trimmed == ".") {
            if idx == last && !actions.is_empty() && trimmed == "." {
                // Lone terminator segment: accepted and dropped.
                continue;
            }
            return Err(SchemaError::Parse {
                offset: seg_start,
                expected: "action".to_string(),
            });
        }
        let type_offset = seg_start + (raw.len() - raw.trim_start().len());
        let (token, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((token, rest)) => (token, rest.trim()),
            None => (trimmed, ""),
        };
        let rest = if idx == last {
            rest.strip_suffix(" .").unwrap_or(if rest == "." { "" } else { rest })
        } else {
            rest
        };
        let payload = collapse_ws(rest);
        let components = if payload.is_empty() {
            Vec::new()
        } else {
            vec![Component::free_text(&payload)]
        };
        actions.push(Action {
            action_type: ActionType::new(token, Dialect::OpenExp),
            components,
        });
        type_offsets.push(type_offset);
    }
    Ok((
        ActionSequence { dialect: Dialect::OpenExp, actions, source_text: text.to_string() },
        type_offsets,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{check_validity, parse, serialize, SchemaError};
    use super::split_arg;
    use crate::schema::Dialect;

    #[test]
    fn split_arg_at_colon_before_whitespace() {
        assert_eq!(split_arg("name: ice water"), Some(("name".into(), "ice water".into())));
    }

    #[test]
    fn split_arg_keeps_colon_keys_together() {
        assert_eq!(
            split_arg("batch:each: portions"),
            Some(("batch:each".into(), "portions".into()))
        );
    }

    #[test]
    fn split_arg_falls_back_to_first_colon() {
        assert_eq!(split_arg("name:ice water"), Some(("name".into(), "ice water".into())));
    }

    #[test]
    fn split_arg_allows_colons_inside_values() {
        assert_eq!(split_arg("concentration: 1:1"), Some(("concentration".into(), "1:1".into())));
    }

    #[test]
    fn split_arg_with_trailing_colon_gives_empty_value() {
        assert_eq!(split_arg("name:"), Some(("name".into(), String::new())));
    }

    #[test]
    fn split_arg_without_colon_is_none() {
        assert_eq!(split_arg("no separator here"), None);
    }

    #[test]
    fn error_offsets_point_into_the_input() {
        let cases = [
            "[",
            "[ ]",
            "[ add",
            "[ add ] reagent ( name: x & )",
            "[ add ] reagent: ( name x & )",
            "[ add ] reagent: ( name: x & ",
            "[ add ] reagent: ( & )",
            "[ add ] ( a: b & ) trailing",
            "[ add ] reagent: ( a: b & ) & [ dry ]",
        ];
        for text in cases {
            match parse(text, Dialect::ChemTrans) {
                Err(SchemaError::Parse { offset, .. }) => {
                    assert!(offset <= text.len(), "offset out of range for {text:?}");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn missing_colon_after_role_is_rejected() {
        let err = parse("[ add ] reagent ( name: x & )", Dialect::ChemTrans).unwrap_err();
        assert_eq!(
            err,
            SchemaError::Parse { offset: 16, expected: "`:` after role".to_string() }
        );
    }

    #[test]
    fn nested_parens_stay_inside_values() {
        let text = "[ add ] reagent: ( note: see (the appendix) & )";
        let seq = parse(text, Dialect::ChemTrans).unwrap();
        assert_eq!(seq.actions[0].components[0].args[0].value, "see (the appendix)");
        assert_eq!(serialize(&seq), text);
    }

    #[test]
    fn roleless_component_parses() {
        let text = "[ settemp ] ( value: 25 C & )";
        let seq = parse(text, Dialect::ChemTrans).unwrap();
        assert_eq!(seq.actions[0].components[0].role, "");
        assert_eq!(serialize(&seq), text);
    }

    #[test]
    fn openexp_rejects_empty_segments() {
        let err = parse("ADD a ;; STIR b", Dialect::OpenExp).unwrap_err();
        assert_eq!(err, SchemaError::Parse { offset: 7, expected: "action".to_string() });
        assert!(parse("ADD a ; STIR b ;", Dialect::OpenExp).is_err());
    }

    #[test]
    fn openexp_lone_terminator_segment_is_dropped() {
        let seq = parse("ADD a ; STIR b ; .", Dialect::OpenExp).unwrap();
        assert_eq!(seq.actions.len(), 2);
    }

    #[test]
    fn openexp_type_offsets_flag_unknown_types() {
        let report = check_validity("ADD a ; BLEND b", Dialect::OpenExp);
        assert!(!report.is_valid);
        assert_eq!(report.errors[0].offset, 8);
        assert!(report.errors[0].message.contains("BLEND"));
    }

    #[test]
    fn validity_is_total_over_arbitrary_bytes() {
        for text in ["", "   ", "[[", "]", "( )", "a;b;;", "[ x ] ((", "\u{1F9EA} ; mix"] {
            let chem = check_validity(text, Dialect::ChemTrans);
            let open = check_validity(text, Dialect::OpenExp);
            for issue in chem.errors.iter().chain(open.errors.iter()) {
                assert!(issue.offset <= text.len());
            }
        }
    }
}
