//! Small text grammars shared by the library and the CLI: integer tuples,
//! top-level comma splitting, and parenthesised argument lists.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Splits on `sep` at parenthesis depth zero; surrounding whitespace is trimmed
/// and empty items are dropped.
pub fn split_top_level(text: &str, sep: char) -> Result<Vec<&str>> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced ')' in {text:?}")));
                }
            }
            c if c == sep && depth == 0 => {
                items.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in {text:?}")));
    }
    items.push(text[start..].trim());
    Ok(items.into_iter().filter(|s| !s.is_empty()).collect())
}

/// Strips one pair of enclosing parentheses, if present.
pub fn strip_parens(text: &str) -> Option<&str> {
    let text = text.trim();
    text.strip_prefix('(').and_then(|t| t.strip_suffix(')'))
}

/// Parses `(1,0),(2,1)` into coordinate vectors. A bare integer is read as a
/// one-coordinate tuple.
pub fn tuples<S: Scalar>(text: &str) -> Result<Vec<Vec<S>>> {
    split_top_level(text, ',')?
        .into_iter()
        .map(|item| {
            let inner = strip_parens(item).unwrap_or(item);
            split_top_level(inner, ',')?
                .into_iter()
                .map(|c| S::from_str(c).map_err(|_| Error::Parse(format!("bad integer {c:?}"))))
                .collect()
        })
        .collect()
}
