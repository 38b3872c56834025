//! The fixed Riemannian background metric and constant-rank morphism fields.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarField};
use crate::tensor::Chart;

/// A constant positive-definite background metric on a chart. Defaults to
/// the Euclidean metric; component values of the obstruction tensors (not
/// their vanishing flags) depend on it, so reports record it.
#[derive(Clone, Debug)]
pub struct RiemannianBackground {
    chart: Arc<Chart>,
    metric: Matrix<Rational>,
}

impl RiemannianBackground {
    pub fn euclidean(chart: Arc<Chart>) -> Self {
        use num_traits::Zero;
        let n = chart.dim();
        let metric = Matrix::identity(n, &Rational::zero());
        RiemannianBackground { chart, metric }
    }

    /// User-supplied constant metric; must be symmetric positive-definite
    /// (exact leading-principal-minor test).
    pub fn with_metric(chart: Arc<Chart>, metric: Matrix<Rational>) -> Result<Self> {
        use num_traits::Signed;
        let n = chart.dim();
        if metric.rows() != n || metric.cols() != n {
            return Err(Error::Precondition(
                "metric size must match chart dimension".into(),
            ));
        }
        if metric != metric.transpose() {
            return Err(Error::Precondition(
                "background metric must be symmetric".into(),
            ));
        }
        for k in 1..=n {
            let minor = Matrix::from_fn(k, k, |r, c| metric.get(r, c).clone());
            if !minor.det().is_positive() {
                return Err(Error::Precondition(format!(
                    "background metric is not positive-definite (leading {k}x{k} minor)"
                )));
            }
        }
        Ok(RiemannianBackground { chart, metric })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn metric(&self) -> &Matrix<Rational> {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn is_euclidean(&self) -> bool {
        use num_traits::Zero;
        self.metric == Matrix::identity(self.dim(), &Rational::zero())
    }

    pub fn det(&self) -> Rational {
        self.metric.det()
    }
}

/// A constant-rank bundle morphism into the cotangent bundle, stored as the
/// matrix whose rows are the one-form images of the domain's basis sections.
#[derive(Clone, Debug)]
pub struct MorphismField {
    chart: Arc<Chart>,
    rows: Matrix<ScalarField>,
    rank: usize,
    sample_points: Vec<Vec<Rational>>,
}

impl MorphismField {
    /// Certifies that the declared rank holds generically and at every
    /// sample point.
    pub fn new(
        chart: Arc<Chart>,
        rows: Matrix<ScalarField>,
        rank: usize,
        sample_points: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if rows.cols() != chart.dim() {
            return Err(Error::Precondition(
                "morphism rows must have chart-dimension entries".into(),
            ));
        }
        let generic = rows.rank();
        if generic != rank {
            return Err(Error::RankInconsistency(format!(
                "declared rank {rank} but generic rank {generic}"
            )));
        }
        for p in &sample_points {
            let at = rows.eval(p)?.rank();
            if at != rank {
                return Err(Error::RankInconsistency(format!(
                    "declared rank {rank} but rank {at} at a sample point"
                )));
            }
        }
        Ok(MorphismField {
            chart,
            rows,
            rank,
            sample_points,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// Number of domain basis sections.
    pub fn domain_rank(&self) -> usize {
        self.rows.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &Matrix<ScalarField> {
        &self.rows
    }

    pub fn sample_points(&self) -> &[Vec<Rational>] {
        &self.sample_points
    }

    /// Row a as a one-form component vector.
    pub fn one_form(&self, a: usize) -> Vec<ScalarField> {
        self.rows.row(a).to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;

    #[test]
    fn positive_definiteness_is_checked() {
        let chart = Chart::standard(2);
        let good = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(2)]]);
        assert!(RiemannianBackground::with_metric(chart.clone(), good).is_ok());
        let bad = Matrix::from_rows(
            vec![vec![1, 2], vec![2, 1]]
                .into_iter()
                .map(|r| r.into_iter().map(int).collect())
                .collect(),
        );
        assert!(RiemannianBackground::with_metric(chart.clone(), bad).is_err());
        let asym = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
        assert!(RiemannianBackground::with_metric(chart, asym).is_err());
    }

    #[test]
    fn morphism_rank_certification() {
        let chart = Chart::standard(2);
        let x = ScalarField::variable(0, 2);
        let one = ScalarField::one(2);
        let zero = ScalarField::zero(2);
        // rows (1, 0), (x1, 0): generic rank 1
        let rows = Matrix::from_rows(vec![vec![one, zero.clone()], vec![x, zero]]);
        assert!(
            MorphismField::new(chart.clone(), rows.clone(), 1, vec![vec![int(1), int(0)]]).is_ok()
        );
        assert!(MorphismField::new(chart, rows, 2, vec![]).is_err());
    }
}
