//! Corpus files: one `d_F f d_K class` row per line, `#` comments, and an
//! optional trailing `negative` marker for non-dihedral controls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lseries::splitting_of_two;

pub const REFERENCE_CORPUS: &str = include_str!("../data/corpus.txt");
pub const NEGATIVE_CONTROLS: &str = include_str!("../data/negative_controls.txt");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub d_f: i64,
    pub f: u64,
    /// Expected discriminant of K.
    pub d_k: u128,
    pub class: String,
    pub negative_control: bool,
}

impl CorpusRow {
    /// Whether the row's verdict came out as expected.
    pub fn expected(&self, verdict: bool) -> bool {
        verdict != self.negative_control
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRow>> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| Error::Parse(format!("corpus line {}: {m}", ln + 1));
        let tok: Vec<&str> = line.split_whitespace().collect();
        let negative_control = match tok.len() {
            4 => false,
            5 if tok[4] == "negative" => true,
            _ => return Err(err(format!("expected `d_F f d_K class [negative]`, got {line:?}"))),
        };
        let d_f: i64 = tok[0].parse().map_err(|_| err(format!("bad d_F {:?}", tok[0])))?;
        let f: u64 = tok[1].parse().map_err(|_| err(format!("bad conductor {:?}", tok[1])))?;
        let d_k: u128 = tok[2].parse().map_err(|_| err(format!("bad d_K {:?}", tok[2])))?;
        let class = tok[3].to_string();
        if !["split", "inert", "ramified"].contains(&class.as_str()) {
            return Err(err(format!("unknown class {class:?}")));
        }
        if d_f <= 1 || f == 0 {
            return Err(err("d_F must exceed 1 and f must be positive".into()));
        }
        let actual = splitting_of_two(d_f).name();
        if actual != class {
            return Err(err(format!("2 is {actual} in Q(sqrt({d_f})), row says {class}")));
        }
        rows.push(CorpusRow { d_f, f, d_k, class, negative_control });
    }
    Ok(rows)
}

pub fn reference_corpus() -> Vec<CorpusRow> {
    parse_corpus(REFERENCE_CORPUS).expect("bundled corpus parses")
}

pub fn negative_controls() -> Vec<CorpusRow> {
    parse_corpus(NEGATIVE_CONTROLS).expect("bundled negative controls parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files() {
        let rows = reference_corpus();
        assert_eq!(rows.len(), 60);
        for class in ["split", "inert", "ramified"] {
            assert_eq!(rows.iter().filter(|r| r.class == class).count(), 20);
        }
        assert!(rows.iter().all(|r| !r.negative_control));
        let neg = negative_controls();
        assert!(neg.len() >= 3 && neg.iter().all(|r| r.negative_control));
    }

    #[test]
    fn strict_rows() {
        assert!(parse_corpus("44 3 2732361984 ramified\n").is_ok());
        assert!(parse_corpus("44 3 2732361984 split\n").is_err());
        assert!(parse_corpus("44 3 2732361984\n").is_err());
        assert!(parse_corpus("44 3 2732361984 ramified extra\n").is_err());
        assert!(parse_corpus("").unwrap().is_empty());
    }
}
