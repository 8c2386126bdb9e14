//! Ordered, named variable sets.

use std::fmt;
use std::sync::Arc;

struct VarSetData {
    name: String,
    labels: Vec<String>,
}

/// An ordered list of unique variable labels; exponent vectors index into it.
#[derive(Clone)]
pub struct VarSet(Arc<VarSetData>);

impl VarSet {
    /// Panics on duplicate labels.
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len(), "duplicate variable labels");
        VarSet(Arc::new(VarSetData { name: name.into(), labels }))
    }

    /// Labels `prefix[0] … prefix[n-1]`.
    pub fn indexed(name: impl Into<String>, prefix: &str, n: usize) -> Self {
        Self::new(name, (0..n).map(|i| format!("{prefix}[{i}]")).collect())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    /// A new set holding these labels followed by `extra`.
    pub fn extended(&self, name: impl Into<String>, extra: &[String]) -> VarSet {
        let mut labels = self.0.labels.clone();
        labels.extend_from_slice(extra);
        VarSet::new(name, labels)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.name == other.0.name && self.0.labels == other.0.labels)
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({}, {} vars)", self.0.name, self.len())
    }
}
