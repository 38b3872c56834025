//! A single coordinate patch: a dimension and distinct coordinate names.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    coords: Vec<String>,
}

impl Chart {
    pub fn new(coords: Vec<String>) -> Result<Arc<Chart>> {
        if coords.is_empty() {
            return Err(Error::Precondition(
                "chart needs at least one coordinate".into(),
            ));
        }
        for (i, c) in coords.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Precondition(
                    "coordinate names must be nonempty".into(),
                ));
            }
            if coords[..i].contains(c) {
                return Err(Error::Precondition(format!(
                    "duplicate coordinate name {c:?}"
                )));
            }
        }
        Ok(Arc::new(Chart { coords }))
    }

    /// Standard chart with coordinates x1..xn.
    pub fn standard(dim: usize) -> Arc<Chart> {
        Chart::new((1..=dim).map(|i| format!("x{i}")).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn name(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn same(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    pub fn require_same(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<()> {
        if Chart::same(a, b) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(
                format!("({})", a.coords.join(", ")),
                format!("({})", b.coords.join(", ")),
            ))
        }
    }
}
