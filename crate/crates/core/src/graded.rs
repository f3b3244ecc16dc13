//! Graded vector spaces with an ordered, labelled basis.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Grading {
    #[default]
    Z,
    Z2,
}

impl Grading {
    pub fn normalize(&self, d: i64) -> i64 {
        match self {
            Grading::Z => d,
            Grading::Z2 => d.rem_euclid(2),
        }
    }

    pub fn eq_deg(&self, a: i64, b: i64) -> bool {
        self.normalize(a) == self.normalize(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    grading: Grading,
    basis: Vec<BasisElement>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl GradedSpace {
    pub fn new(grading: Grading, basis: Vec<(String, i64)>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut elems = Vec::with_capacity(basis.len());
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, (label, degree)) in basis.into_iter().enumerate() {
            if seen.insert(label.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate basis label {label:?}")));
            }
            let degree = grading.normalize(degree);
            by_degree.entry(degree).or_default().push(i);
            elems.push(BasisElement { label, degree });
        }
        Ok(GradedSpace { grading, basis: elems, by_degree })
    }

    pub fn empty(grading: Grading) -> Self {
        GradedSpace { grading, basis: Vec::new(), by_degree: BTreeMap::new() }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Basis indices of the given degree, in basis order.
    pub fn in_degree(&self, d: i64) -> &[usize] {
        self.by_degree.get(&self.grading.normalize(d)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.in_degree(d).len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    /// Smallest and largest occupied degree, if any.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = *self.by_degree.keys().next()?;
        let hi = *self.by_degree.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn label_index(&self) -> HashMap<String, usize> {
        self.basis.iter().enumerate().map(|(i, b)| (b.label.clone(), i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_degrees_are_reduced() {
        let v = GradedSpace::new(Grading::Z2, vec![("a".into(), 3), ("b".into(), -2)]).unwrap();
        assert_eq!(v.degree(0), 1);
        assert_eq!(v.degree(1), 0);
        assert_eq!(v.in_degree(5), &[0]);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(GradedSpace::new(Grading::Z, vec![("a".into(), 0), ("a".into(), 1)]).is_err());
    }
}
