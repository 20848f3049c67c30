use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Script {
    Latin,
    Thai,
    Digit,
    Mixed,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub script: Script,
}

impl Token {
    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }

    pub fn is_numeric(&self) -> bool {
        is_numeric_fragment(&self.surface)
    }
}

/// Characters that always separate tokens.
pub fn is_separator(ch: char) -> bool {
    ch.is_whitespace() || matches!(ch, '(' | ')' | '[' | ']' | '*')
}

/// Digits with optional `.` or `/`, e.g. "40", "0.5", "1/2".
pub fn is_numeric_fragment(s: &str) -> bool {
    !s.is_empty()
        && s.chars().any(|c| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/')
        && !s.starts_with(['.', '/'])
        && !s.ends_with('/')
}

/// Digits joined by a hyphen, e.g. "4-6".
pub fn is_numeric_range(s: &str) -> bool {
    match s.split_once('-') {
        Some((a, b)) => is_numeric_fragment(a) && is_numeric_fragment(b),
        None => false,
    }
}

fn is_thai(ch: char) -> bool {
    ('\u{0E00}'..='\u{0E7F}').contains(&ch)
}

fn classify(surface: &str) -> Script {
    if surface.starts_with("«TH:") || surface.chars().any(is_thai) {
        return Script::Thai;
    }
    let letters = surface.chars().any(|c| c.is_alphabetic());
    let digits = surface.chars().any(|c| c.is_ascii_digit());
    match (letters, digits) {
        (true, true) => Script::Mixed,
        (true, false) => Script::Latin,
        (false, true) => Script::Digit,
        (false, false) => Script::Symbol,
    }
}

fn is_x(ch: char) -> bool {
    ch == 'x' || ch == 'X'
}

/// Split a separator-free chunk at every `x` that sits between two numeric fragments.
fn split_chunk(chars: &[char], start: usize, end: usize, out: &mut Vec<(usize, usize)>) {
    let xs: Vec<usize> = (start..end).filter(|&i| is_x(chars[i])).collect();
    let mut cut_from = start;
    for (k, &p) in xs.iter().enumerate() {
        let right_end = xs.get(k + 1).copied().unwrap_or(end);
        let left: String = chars[cut_from..p].iter().collect();
        let right: String = chars[p + 1..right_end].iter().collect();
        if is_numeric_fragment(&left) && is_numeric_fragment(&right) {
            out.push((cut_from, p));
            cut_from = p + 1;
        }
    }
    out.push((cut_from, end));
}

/// Split text into tokens with Unicode scalar offsets.
///
/// Separators are whitespace, `(`, `)`, `[`, `]`, `*`, and an `x` between two numeric
/// fragments ("1x1", "0.5x1", and the standalone `x` of "1 x 1").
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if is_separator(chars[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !is_separator(chars[i]) {
            i += 1;
        }
        split_chunk(&chars, start, i, &mut spans);
    }
    let surf = |&(s, e): &(usize, usize)| chars[s..e].iter().collect::<String>();
    let surfaces: Vec<String> = spans.iter().map(surf).collect();
    let mut tokens = Vec::with_capacity(spans.len());
    for (k, (&(start, end), surface)) in spans.iter().zip(&surfaces).enumerate() {
        let standalone_x = surface.chars().count() == 1 && surface.chars().all(is_x);
        if standalone_x
            && k > 0
            && k + 1 < spans.len()
            && is_numeric_fragment(&surfaces[k - 1])
            && is_numeric_fragment(&surfaces[k + 1])
        {
            continue;
        }
        tokens.push(Token {
            start,
            end,
            surface: surface.clone(),
            script: classify(surface),
        });
    }
    tokens
}
