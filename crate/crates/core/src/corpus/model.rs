use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityType {
    Medication,
    Strength,
    Unit,
    Mode,
    Instructions,
}

impl EntityType {
    pub const ALL: [EntityType; 5] = [
        EntityType::Medication,
        EntityType::Strength,
        EntityType::Unit,
        EntityType::Mode,
        EntityType::Instructions,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Medication => "Medication",
            EntityType::Strength => "Strength",
            EntityType::Unit => "Unit",
            EntityType::Mode => "Mode",
            EntityType::Instructions => "Instructions",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Types limited to one annotation per statement.
    pub fn is_singular(self) -> bool {
        self != EntityType::Instructions
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
    #[default]
    Unassigned,
}

impl Split {
    pub const ALL: [Split; 4] = [Split::Train, Split::Validation, Split::Test, Split::Unassigned];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Split::ALL
            .into_iter()
            .find(|sp| sp.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown split {s:?}"))
    }
}

/// How a predicted span was located in the statement text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    #[default]
    Exact,
    /// Located, but the span includes separator characters such as `(`.
    BoundaryInclusive,
    /// Not found in the text; `start == end == len(text)` and `surface` holds the model value.
    Unaligned,
}

impl Alignment {
    pub fn is_exact(&self) -> bool {
        *self == Alignment::Exact
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityAnnotation {
    #[serde(rename = "type")]
    pub entity_type: EntityType,
    pub start: usize,
    pub end: usize,
    #[serde(rename = "text")]
    pub surface: String,
    pub zero_width: bool,
    #[serde(rename = "inferred", default, skip_serializing_if = "Option::is_none")]
    pub inferred_value: Option<String>,
    #[serde(default, skip_serializing_if = "Alignment::is_exact")]
    pub alignment: Alignment,
}

impl EntityAnnotation {
    pub fn span(entity_type: EntityType, start: usize, end: usize, surface: impl Into<String>) -> Self {
        EntityAnnotation {
            entity_type,
            start,
            end,
            surface: surface.into(),
            zero_width: false,
            inferred_value: None,
            alignment: Alignment::Exact,
        }
    }

    pub fn zero_width(entity_type: EntityType, at: usize, inferred: impl Into<String>) -> Self {
        EntityAnnotation {
            entity_type,
            start: at,
            end: at,
            surface: String::new(),
            zero_width: true,
            inferred_value: Some(inferred.into()),
            alignment: Alignment::Exact,
        }
    }

    pub fn unaligned(entity_type: EntityType, text_len: usize, value: impl Into<String>) -> Self {
        EntityAnnotation {
            entity_type,
            start: text_len,
            end: text_len,
            surface: value.into(),
            zero_width: false,
            inferred_value: None,
            alignment: Alignment::Unaligned,
        }
    }

    /// The value this annotation contributes: inferred value for zero-width, else the surface.
    pub fn value(&self) -> &str {
        if self.zero_width {
            self.inferred_value.as_deref().unwrap_or("")
        } else {
            &self.surface
        }
    }

    /// True when the annotation does not point at characters of the text.
    pub fn is_textless(&self) -> bool {
        self.zero_width || self.alignment == Alignment::Unaligned
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub active_ingredients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity_of_dose_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dose_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_to_meal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
}

impl ExpansionRecord {
    pub fn is_empty(&self) -> bool {
        *self == ExpansionRecord::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedicationStatement {
    pub id: String,
    #[serde(default)]
    pub split: Split,
    pub text: String,
    #[serde(default)]
    pub ner: Vec<EntityAnnotation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ex: Option<ExpansionRecord>,
}

impl MedicationStatement {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        MedicationStatement {
            id: id.into(),
            split: Split::Unassigned,
            text: text.into(),
            ner: Vec::new(),
            ex: None,
        }
    }

    /// First annotation of the given type.
    pub fn first(&self, ty: EntityType) -> Option<&EntityAnnotation> {
        self.ner.iter().find(|a| a.entity_type == ty)
    }
}
