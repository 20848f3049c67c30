use serde::Deserialize;
use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;
use thiserror::Error;

const NUMBER_WORDS: [(&str, &str); 13] = [
    ("one", "1"),
    ("two", "2"),
    ("three", "3"),
    ("four", "4"),
    ("five", "5"),
    ("six", "6"),
    ("seven", "7"),
    ("eight", "8"),
    ("nine", "9"),
    ("ten", "10"),
    ("eleven", "11"),
    ("twelve", "12"),
    ("half", "0.5"),
];

#[derive(Debug, Error)]
pub enum EquivalenceError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("equivalence JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0:?} belongs to more than one class")]
    Overlap(String),
}

#[derive(Deserialize)]
struct ClassFile {
    classes: Vec<Vec<String>>,
}

/// Synonym classes over normalized strings.
#[derive(Debug, Clone, Default)]
pub struct EquivalenceLexicon {
    classes: Vec<Vec<String>>,
    index: HashMap<String, usize>,
    exact: bool,
}

fn format_number(v: f64) -> String {
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn normalize_token(tok: &str) -> String {
    let tok = tok.trim_end_matches([',', ';', ':']);
    let tok = match tok.strip_suffix('.') {
        Some(head) if !head.contains('.') && head.chars().all(char::is_alphabetic) => head,
        _ => tok,
    };
    if let Some((_, digits)) = NUMBER_WORDS.iter().find(|(w, _)| *w == tok) {
        return digits.to_string();
    }
    if crate::sigparse::is_numeric_fragment(tok) {
        if let Some(v) = crate::sigparse::parse_number(tok) {
            return format_number(v);
        }
    }
    tok.to_string()
}

/// Lowercase, trim, collapse whitespace, unify number words and fractions.
pub fn normalize(s: &str) -> String {
    s.to_lowercase()
        .split_whitespace()
        .map(normalize_token)
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

impl EquivalenceLexicon {
    pub fn new(classes: Vec<Vec<String>>) -> Result<Self, EquivalenceError> {
        let mut index = HashMap::new();
        let mut norm_classes = Vec::new();
        for (i, class) in classes.into_iter().enumerate() {
            let mut members: Vec<String> = class.iter().map(|m| normalize(m)).filter(|m| !m.is_empty()).collect();
            members.dedup();
            for m in &members {
                if index.insert(m.clone(), i).is_some_and(|prev| prev != i) {
                    return Err(EquivalenceError::Overlap(m.clone()));
                }
            }
            norm_classes.push(members);
        }
        Ok(EquivalenceLexicon {
            classes: norm_classes,
            index,
            exact: false,
        })
    }

    pub fn from_json(json: &str) -> Result<Self, EquivalenceError> {
        let f: ClassFile = serde_json::from_str(json)?;
        Self::new(f.classes)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EquivalenceError> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|source| EquivalenceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&json)
    }

    /// The shipped lexicon, parsed once.
    pub fn shipped() -> &'static EquivalenceLexicon {
        static SHIPPED: OnceLock<EquivalenceLexicon> = OnceLock::new();
        SHIPPED.get_or_init(|| Self::from_json(crate::data::EQUIVALENCE_JSON).expect("shipped equivalence lexicon is valid"))
    }

    /// No classes and no normalization: plain string equality.
    pub fn identity() -> Self {
        EquivalenceLexicon {
            exact: true,
            ..Default::default()
        }
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn class_of(&self, s: &str) -> Option<usize> {
        self.index.get(&normalize(s)).copied()
    }

    fn same_class(&self, a: &str, b: &str) -> bool {
        matches!((self.index.get(a), self.index.get(b)), (Some(x), Some(y)) if x == y)
    }

    /// Equal after normalization, in one class, or token-by-token equivalent.
    pub fn equivalent(&self, a: &str, b: &str) -> bool {
        if self.exact {
            return a == b;
        }
        let (na, nb) = (normalize(a), normalize(b));
        if na == nb || self.same_class(&na, &nb) {
            return true;
        }
        let (ta, tb): (Vec<&str>, Vec<&str>) = (na.split(' ').collect(), nb.split(' ').collect());
        ta.len() == tb.len() && ta.iter().zip(&tb).all(|(x, y)| x == y || self.same_class(x, y))
    }

    /// Every element of each list has an equivalent in the other.
    pub fn equivalent_sets(&self, a: &[String], b: &[String]) -> bool {
        let covered = |xs: &[String], ys: &[String]| xs.iter().all(|x| ys.iter().any(|y| self.equivalent(x, y)));
        covered(a, b) && covered(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize("  For Three   MOS. "), "for 3 mos");
        assert_eq!(normalize("1/2"), "0.5");
        assert_eq!(normalize("0.50"), "0.5");
        assert_eq!(normalize("m.g."), "m.g.");
    }

    #[test]
    fn synonyms() {
        let eq = EquivalenceLexicon::shipped();
        assert!(eq.equivalent("oral", "by mouth"));
        assert!(eq.equivalent("Once daily", "OD"));
        assert!(eq.equivalent("after a meal", "after meals"));
        assert!(eq.equivalent("for three months", "for 3 mos."));
        assert!(eq.equivalent("«TH:mon-fri»", "Monday to Friday"));
        assert!(!eq.equivalent("once daily", "twice daily"));
    }

    #[test]
    fn identity_is_exact() {
        let eq = EquivalenceLexicon::identity();
        assert!(eq.equivalent("oral", "oral"));
        assert!(!eq.equivalent("oral", "Oral"));
    }

    #[test]
    fn overlapping_classes_rejected() {
        let r = EquivalenceLexicon::new(vec![vec!["a".into(), "b".into()], vec!["B".into()]]);
        assert!(matches!(r, Err(EquivalenceError::Overlap(_))));
    }

    #[test]
    fn ingredient_sets() {
        let eq = EquivalenceLexicon::shipped();
        let a = vec!["Sulfamethoxazole".to_string(), "trimethoprim".to_string()];
        let b = vec!["trimethoprim".to_string(), "sulfamethoxazole".to_string()];
        assert!(eq.equivalent_sets(&a, &b));
        assert!(!eq.equivalent_sets(&a, &b[..1]));
    }
}
