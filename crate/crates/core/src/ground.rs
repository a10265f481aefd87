use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// The finite universe of elements (features) being selected from.
///
/// Elements are identified by dense indices `0..len()`; labels are only
/// used for display and serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::GroundSetTooSmall(labels.len()));
        }
        Ok(GroundSet { labels })
    }

    /// A ground set labelled `X0, X1, ...`.
    pub fn indexed(size: usize) -> Result<Self> {
        GroundSet::new((0..size).map(|i| format!("X{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                index,
                size: self.len(),
            })
        }
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<Subset> {
        Subset::from_indices(self.len(), indices)
    }

    pub fn member_labels(&self, subset: &Subset) -> Vec<String> {
        subset.iter().map(|i| self.labels[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_two_elements() {
        assert_eq!(GroundSet::indexed(1), Err(Error::GroundSetTooSmall(1)));
        assert_eq!(GroundSet::indexed(0), Err(Error::GroundSetTooSmall(0)));
        let g = GroundSet::new(["A", "B", "C"]).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.label(2), "C");
        assert!(g.check_index(3).is_err());
    }
}
