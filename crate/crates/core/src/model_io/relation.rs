use std::collections::HashMap;

use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown state `{name}`")]
    UnknownState { line: usize, col: usize, name: String },
    #[error("{line}:{col}: state `{name}` appears in more than one block")]
    Overlap { line: usize, col: usize, name: String },
}

/// One `{a b c}` line per block, blocks ordered by their smallest member.
pub fn serialize_partition(p: &Partition, names: &[String]) -> String {
    let mut out = String::new();
    for block in p.blocks() {
        let members: Vec<&str> = block.iter().map(|&i| names[i].as_str()).collect();
        out.push('{');
        out.push_str(&members.join(" "));
        out.push_str("}\n");
    }
    out
}

/// Reads blocks of state names. States that are not mentioned form
/// singleton blocks; blank lines and `#` comments are skipped.
pub fn parse_relation(text: &str, names: &[String]) -> Result<Partition, RelationError> {
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut keys: Vec<usize> = (0..names.len()).collect();
    let mut seen = vec![false; names.len()];
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let col_of = |byte: usize| content[..byte].chars().count() + 1;
        if !trimmed.starts_with('{') || !trimmed.ends_with('}') {
            return Err(RelationError::Syntax { line, col: col_of(lead), message: "expected `{state ...}`".into() });
        }
        let inner_start = lead + 1;
        let inner = &trimmed[1..trimmed.len() - 1];
        if let Some(off) = inner.find(['{', '}']) {
            return Err(RelationError::Syntax {
                line,
                col: col_of(inner_start + off),
                message: "one block per line".into(),
            });
        }
        let mut rep = None;
        let mut offset = 0;
        for word in inner.split_whitespace() {
            let at = inner[offset..].find(word).unwrap() + offset;
            offset = at + word.len();
            let col = col_of(inner_start + at);
            let &i =
                index.get(word).ok_or_else(|| RelationError::UnknownState { line, col, name: word.to_string() })?;
            if seen[i] {
                return Err(RelationError::Overlap { line, col, name: word.to_string() });
            }
            seen[i] = true;
            let r = *rep.get_or_insert(i);
            keys[i] = r;
        }
    }
    Ok(Partition::from_keys(&keys))
}
