use super::model::{EntityType, MedicationStatement, Split};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Instance counts indexed by [`EntityType::index`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EntityCounts(pub [usize; 5]);

impl EntityCounts {
    pub fn get(&self, ty: EntityType) -> usize {
        self.0[ty.index()]
    }
}

impl std::ops::AddAssign for EntityCounts {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub per_split: BTreeMap<Split, EntityCounts>,
}

impl CorpusStats {
    pub fn total(&self) -> EntityCounts {
        let mut t = EntityCounts::default();
        for c in self.per_split.values() {
            t += *c;
        }
        t
    }

    pub fn split(&self, split: Split) -> EntityCounts {
        self.per_split.get(&split).copied().unwrap_or_default()
    }
}

/// Per-split instance counts; zero-width annotations count as instances.
pub fn corpus_stats(corpus: &[MedicationStatement]) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for s in corpus {
        let entry = stats.per_split.entry(s.split).or_default();
        for a in &s.ner {
            entry.0[a.entity_type.index()] += 1;
        }
    }
    stats
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12}", "split")?;
        for ty in EntityType::ALL {
            write!(f, " {:>12}", ty.as_str())?;
        }
        writeln!(f)?;
        let mut rows: Vec<(String, EntityCounts)> =
            self.per_split.iter().map(|(s, c)| (s.to_string(), *c)).collect();
        rows.push(("total".to_string(), self.total()));
        for (name, c) in rows {
            write!(f, "{name:<12}")?;
            for n in c.0 {
                write!(f, " {n:>12}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
