use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// Identifier of a relation label inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    Hit,
    Su,
    Sci,
    Unified,
}

impl SchemeId {
    /// Published inventory size for each scheme.
    pub fn expected_cardinality(self) -> usize {
        match self {
            SchemeId::Hit => 22,
            SchemeId::Su => 18,
            SchemeId::Sci => 26,
            SchemeId::Unified => 17,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeId::Hit => "HIT",
            SchemeId::Su => "SU",
            SchemeId::Sci => "SCI",
            SchemeId::Unified => "UNIFIED",
        })
    }
}

impl FromStr for SchemeId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HIT" => Ok(SchemeId::Hit),
            "SU" => Ok(SchemeId::Su),
            "SCI" => Ok(SchemeId::Sci),
            "UNIFIED" => Ok(SchemeId::Unified),
            _ => Err(CoreError::Malformed(format!("unknown scheme `{s}`"))),
        }
    }
}

/// An ordered relation label inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationScheme {
    pub scheme_id: SchemeId,
    labels: Vec<String>,
}

impl RelationScheme {
    pub fn new(scheme_id: SchemeId, labels: Vec<String>) -> Result<Self, CoreError> {
        let mut seen = BTreeSet::new();
        for label in &labels {
            if label.is_empty() {
                return Err(CoreError::Malformed("empty relation label".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(CoreError::Malformed(format!("duplicate label `{label}`")));
            }
        }
        Ok(RelationScheme { scheme_id, labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cardinality(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Whether this inventory has the scheme's published size. Shipped
    /// configuration prefills only attested labels, so partial inventories
    /// are expected.
    pub fn matches_expected_cardinality(&self) -> bool {
        self.cardinality() == self.scheme_id.expected_cardinality()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_cardinalities() {
        assert_eq!(SchemeId::Hit.expected_cardinality(), 22);
        assert_eq!(SchemeId::Su.expected_cardinality(), 18);
        assert_eq!(SchemeId::Sci.expected_cardinality(), 26);
        assert_eq!(SchemeId::Unified.expected_cardinality(), 17);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let labels = vec!["joint".to_string(), "joint".to_string()];
        assert!(RelationScheme::new(SchemeId::Su, labels).is_err());
    }

    #[test]
    fn cardinality_tracks_labels() {
        let s = RelationScheme::new(
            SchemeId::Unified,
            vec!["joint".into(), "explanation".into()],
        )
        .unwrap();
        assert_eq!(s.cardinality(), 2);
        assert!(s.contains("joint"));
        assert!(!s.matches_expected_cardinality());
    }
}
