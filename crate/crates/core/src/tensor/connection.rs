//! Torsion-free connection coefficients Γᵏᵢⱼ = Γᵏⱼᵢ on a chart.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::chart::Chart;
use crate::scalar::ScalarField;

#[derive(Clone, Debug)]
pub struct ConnectionCoefficients {
    chart: Arc<Chart>,
    // canonical key (k, i, j) with i <= j
    gamma: BTreeMap<(usize, usize, usize), ScalarField>,
}

impl ConnectionCoefficients {
    pub fn flat(chart: Arc<Chart>) -> Self {
        ConnectionCoefficients {
            chart,
            gamma: BTreeMap::new(),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> ScalarField {
        let key = if i <= j { (k, i, j) } else { (k, j, i) };
        self.gamma
            .get(&key)
            .cloned()
            .unwrap_or_else(|| ScalarField::zero(self.chart.dim()))
    }

    /// Sets Γᵏᵢⱼ (and by symmetry Γᵏⱼᵢ).
    pub fn set(&mut self, k: usize, i: usize, j: usize, value: ScalarField) {
        let n = self.chart.dim();
        assert!(k < n && i < n && j < n, "connection index out of range");
        let key = if i <= j { (k, i, j) } else { (k, j, i) };
        if value.is_zero() {
            self.gamma.remove(&key);
        } else {
            self.gamma.insert(key, value);
        }
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.values().all(|v| v.is_zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &ScalarField)> {
        self.gamma.iter().filter(|(_, v)| !v.is_zero())
    }
}
