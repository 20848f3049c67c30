//! Unicode scalar offset helpers.
//!
//! All spans in the crate count `char`s, never bytes.

/// Number of Unicode scalar values in `s`.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Byte offset of the `idx`-th scalar, or `s.len()` when `idx` is the end.
fn byte_offset(s: &str, idx: usize) -> Option<usize> {
    if idx == 0 {
        return Some(0);
    }
    let mut count = 0;
    for (b, _) in s.char_indices() {
        if count == idx {
            return Some(b);
        }
        count += 1;
    }
    (count == idx).then_some(s.len())
}

/// Slice `s` by scalar offsets `[start, end)`.
pub fn slice_chars(s: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let b0 = byte_offset(s, start)?;
    let b1 = byte_offset(s, end)?;
    Some(&s[b0..b1])
}

/// Scalar offsets of every occurrence of `needle` in `haystack`, leftmost first.
pub fn find_all_chars(haystack: &str, needle: &str) -> Vec<usize> {
    if needle.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (b, _) in haystack.char_indices() {
        if haystack[b..].starts_with(needle) {
            out.push(haystack[..b].chars().count());
        }
    }
    out
}

/// Lowercase, trim and collapse internal whitespace.
pub fn squash(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
