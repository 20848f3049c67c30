use super::model::{MedicationStatement, Split};
use super::CorpusError;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self, CorpusError> {
        let r = SplitRatios { train, validation, test };
        let parts = [train, validation, test];
        let positive = parts.iter().all(|p| p.is_finite() && *p > 0.0);
        if !positive || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CorpusError::BadRatios(parts));
        }
        Ok(r)
    }

    /// Rounded train and validation shares; the remainder goes to test.
    pub fn counts(&self, n: usize) -> (usize, usize, usize) {
        let mut train = (self.train * n as f64).round() as usize;
        let mut val = (self.validation * n as f64).round() as usize;
        if train > n {
            train = n;
        }
        if train + val > n {
            val = n - train;
        }
        (train, val, n - train - val)
    }
}

impl std::str::FromStr for SplitRatios {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let [a, b, c] = parts[..] else {
            return Err(format!("expected three comma-separated ratios, got {s:?}"));
        };
        SplitRatios::new(a, b, c).map_err(|e| e.to_string())
    }
}

/// Assign split labels.
///
/// Statements are ordered by id (then text, then input position) before a ChaCha8
/// shuffle seeded with `seed`; the first `round(train*n)` shuffled statements become
/// train, the next `round(validation*n)` validation and the rest test. Labels therefore
/// depend on ids and seed, not on input order.
pub fn split_corpus(
    mut corpus: Vec<MedicationStatement>,
    ratios: SplitRatios,
    seed: u64,
) -> Result<Vec<MedicationStatement>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let n = corpus.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (&corpus[a].id, &corpus[a].text, a).cmp(&(&corpus[b].id, &corpus[b].text, b))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let (train, val, _) = ratios.counts(n);
    for (rank, &idx) in order.iter().enumerate() {
        corpus[idx].split = if rank < train {
            Split::Train
        } else if rank < train + val {
            Split::Validation
        } else {
            Split::Test
        };
    }
    Ok(corpus)
}
