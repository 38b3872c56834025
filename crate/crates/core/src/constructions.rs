//! Explicit generators: the affine-tangent construction over a distribution,
//! the closed-but-non-integrable q-form, and leafwise-parallel product
//! extensions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, VectorFieldSpan};
use crate::scalar::{Rational, ScalarField};
use crate::tensor::{
    covariant_derivative, exterior_derivative, wedge_product, Chart, ConnectionCoefficients,
    Symmetry, TensorField,
};

/// Output of [`build_affine_tangent`].
#[derive(Clone, Debug)]
pub struct AffineTangent {
    /// Base chart extended by one fiber coordinate per corank.
    pub chart: Arc<Chart>,
    /// The square-zero (1,1) tensor sending base directions to the fiber
    /// along the annihilator of the distribution.
    pub theta: TensorField,
    /// The annihilator rows used to present the quotient (recorded because
    /// the presentation depends on this deterministic choice of basis).
    pub annihilator: Matrix<ScalarField>,
    /// Sample points of the base, zero-extended to the total chart.
    pub samples: Vec<Vec<Rational>>,
}

/// Builds the total chart Σ × fiber and the tensor Θ(∂_{yᵃ}) = Σ_μ Aᵃ_μ ∂_{tᵘ},
/// Θ(∂_{tᵘ}) = 0, where A is a constant-rank annihilator matrix of the
/// distribution obtained by exact elimination. The output satisfies Θ² = 0,
/// has vanishing Nijenhuis tensor, and is integrable exactly when the input
/// distribution is.
pub fn build_affine_tangent(dist: &VectorFieldSpan) -> Result<AffineTangent> {
    let base = dist.chart().clone();
    let s = base.dim();
    let c = s - dist.rank();
    if c == 0 {
        return Err(Error::Precondition(
            "the distribution is the whole tangent bundle; the construction needs positive corank"
                .into(),
        ));
    }
    // annihilator rows: left nullspace of the generator matrix
    let rows: Vec<Vec<ScalarField>> = match dist.generator_matrix() {
        None => (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        if i == j {
                            ScalarField::one(s)
                        } else {
                            ScalarField::zero(s)
                        }
                    })
                    .collect()
            })
            .collect(),
        Some(m) => m.transpose().nullspace(),
    };
    if rows.len() != c {
        return Err(Error::RankInconsistency(format!(
            "annihilator has {} rows, expected corank {c}",
            rows.len()
        )));
    }
    let ann_base = Matrix::from_fn(c, s, |r, j| rows[r][j].clone());
    // certify the annihilator rank at the distribution's samples
    for p in dist.sample_points() {
        if ann_base.eval(p)?.rank() != c {
            return Err(Error::RankInconsistency(
                "annihilator rank drops at a sample point".into(),
            ));
        }
    }
    let mut coords = base.coords().to_vec();
    for mu in 1..=c {
        coords.push(format!("t{mu}"));
    }
    let chart = Chart::new(coords)?;
    let n = s + c;
    let ann = ann_base.map(|f| f.extend_vars(n));
    let mut theta = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
    for a in 0..s {
        for mu in 0..c {
            theta.set(&[s + mu], &[a], ann.get(mu, a).clone());
        }
    }
    let samples: Vec<Vec<Rational>> = dist
        .sample_points()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.resize(n, Rational::from_integer(0.into()));
            q
        })
        .collect();
    Ok(AffineTangent {
        chart,
        theta,
        annihilator: ann,
        samples,
    })
}

/// Output of [`build_nin_form`].
#[derive(Clone, Debug)]
pub struct ClosedNonIntegrableForm {
    pub chart: Arc<Chart>,
    /// The closed q-form (dx¹∧dx² + dx³∧dx⁴) ∧ η ∧ dx⁶ ∧ … ∧ dx^{q+2}.
    pub zeta: TensorField,
    /// η = dx⁵ + x¹dx² − x³dx⁴.
    pub eta: TensorField,
    /// One-forms whose functional combinations are exactly the ξ with
    /// ξ∧ζ = 0: η, dx⁶, …, dx^{q+2}.
    pub divisor_forms: Vec<TensorField>,
    /// The nonzero witness dη ∧ η ∧ dx⁶ ∧ … ∧ dx^{q+2}.
    pub witness: TensorField,
    /// The simultaneous kernel of the divisor forms (non-involutive).
    pub kernel: VectorFieldSpan,
}

/// The algebraically constant closed q-form on an n-chart, 3 ≤ q ≤ n−2,
/// n ≥ 5, that is not integrable.
pub fn build_nin_form(n: usize, q: usize) -> Result<ClosedNonIntegrableForm> {
    if n < 5 || q < 3 || q + 2 > n {
        return Err(Error::Precondition(format!(
            "need n ≥ 5 and 3 ≤ q ≤ n−2, got (n, q) = ({n}, {q})"
        )));
    }
    let chart = Chart::standard(n);
    let sf = |c: i64| ScalarField::constant(Rational::from_integer(c.into()), n);
    let x = |i: usize| ScalarField::variable(i, n);
    let dx = |i: usize| {
        let mut f = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
        f.set(&[], &[i], sf(1));
        f
    };
    // ω = dx1∧dx2 + dx3∧dx4
    let mut omega = TensorField::zero(chart.clone(), (0, 2), Symmetry::Antisymmetric);
    omega.set(&[], &[0, 1], sf(1));
    omega.set(&[], &[2, 3], sf(1));
    // η = dx5 + x1 dx2 − x3 dx4
    let mut eta = TensorField::zero(chart.clone(), (0, 1), Symmetry::Antisymmetric);
    eta.set(&[], &[4], sf(1));
    eta.set(&[], &[1], x(0));
    eta.set(&[], &[3], -&x(2));
    let mut zeta = wedge_product(&omega, &eta)?;
    let mut divisor_forms = vec![eta.clone()];
    let mut trailing: Option<TensorField> = None;
    for i in 5..q + 2 {
        zeta = wedge_product(&zeta, &dx(i))?;
        trailing = Some(match trailing {
            None => dx(i),
            Some(t) => wedge_product(&t, &dx(i))?,
        });
        divisor_forms.push(dx(i));
    }
    let deta = exterior_derivative(&eta)?;
    let mut witness = wedge_product(&deta, &eta)?;
    if let Some(t) = &trailing {
        witness = wedge_product(&witness, t)?;
    }
    // simultaneous kernel of the divisor forms
    let rows = Matrix::from_fn(divisor_forms.len(), n, |r, j| {
        divisor_forms[r].component(&[], &[j])
    });
    let gens: Vec<TensorField> = rows
        .nullspace()
        .into_iter()
        .map(|v| TensorField::from_vector(chart.clone(), v))
        .collect();
    let rank = gens.len();
    let kernel = VectorFieldSpan::new(
        chart.clone(),
        gens,
        rank,
        vec![vec![Rational::from_integer(0.into()); n]],
    )?;
    Ok(ClosedNonIntegrableForm {
        chart,
        zeta,
        eta,
        divisor_forms,
        witness,
        kernel,
    })
}

/// Output of [`product_extension`].
#[derive(Clone, Debug)]
pub struct ProductExtension {
    pub metric: TensorField,
    pub cometric: TensorField,
    pub connection: ConnectionCoefficients,
}

/// Zero-pads leafwise data (a (0,2) tensor, a (2,0) tensor, and torsion-free
/// connection coefficients on the first `leaf_dim` coordinates) to the whole
/// chart, after checking the leafwise parallelism identities exactly. The
/// extended tensors are parallel for the extended connection.
pub fn product_extension(
    chart: &Arc<Chart>,
    leaf_dim: usize,
    g_leaf: &Matrix<ScalarField>,
    theta_leaf: &Matrix<ScalarField>,
    gamma_leaf: &ConnectionCoefficients,
) -> Result<ProductExtension> {
    let n = chart.dim();
    let s = leaf_dim;
    if s == 0 || s > n {
        return Err(Error::Precondition(
            "leaf dimension must lie in 1..=dim".into(),
        ));
    }
    if g_leaf.rows() != s || g_leaf.cols() != s || theta_leaf.rows() != s || theta_leaf.cols() != s
    {
        return Err(Error::Precondition(
            "leaf tensors must be leaf_dim × leaf_dim".into(),
        ));
    }
    for i in 0..s {
        for j in 0..s {
            if g_leaf.get(i, j) != g_leaf.get(j, i) || theta_leaf.get(i, j) != theta_leaf.get(j, i)
            {
                return Err(Error::Precondition("leaf tensors must be symmetric".into()));
            }
        }
    }
    // leafwise parallelism: ∂ᵢ g_{jk} = Γˡᵢⱼ g_{lk} + Γˡᵢₖ g_{jl}
    for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let mut rhs = ScalarField::zero(n);
                for l in 0..s {
                    rhs = &rhs + &(&gamma_leaf.get(l, i, j) * g_leaf.get(l, k));
                    rhs = &rhs + &(&gamma_leaf.get(l, i, k) * g_leaf.get(j, l));
                }
                if g_leaf.get(j, k).partial(i) != rhs {
                    return Err(Error::Precondition(format!(
                        "leafwise parallelism of the metric fails at (i,j,k) = ({}, {}, {})",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
                let mut rhs_t = ScalarField::zero(n);
                for l in 0..s {
                    rhs_t = &rhs_t - &(&gamma_leaf.get(j, i, l) * theta_leaf.get(l, k));
                    rhs_t = &rhs_t - &(&gamma_leaf.get(k, i, l) * theta_leaf.get(j, l));
                }
                if theta_leaf.get(j, k).partial(i) != rhs_t {
                    return Err(Error::Precondition(format!(
                        "leafwise parallelism of the cometric fails at (i,j,k) = ({}, {}, {})",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
    }
    let mut metric = TensorField::zero(chart.clone(), (0, 2), Symmetry::Symmetric);
    let mut cometric = TensorField::zero(chart.clone(), (2, 0), Symmetry::Symmetric);
    for i in 0..s {
        for j in i..s {
            metric.set(&[], &[i, j], g_leaf.get(i, j).clone());
            cometric.set(&[i, j], &[], theta_leaf.get(i, j).clone());
        }
    }
    let mut connection = ConnectionCoefficients::flat(chart.clone());
    for k in 0..s {
        for i in 0..s {
            for j in i..s {
                connection.set(k, i, j, gamma_leaf.get(k, i, j));
            }
        }
    }
    // the contract: both extensions are parallel
    debug_assert!(covariant_derivative(&metric, &connection)?.is_zero());
    debug_assert!(covariant_derivative(&cometric, &connection)?.is_zero());
    Ok(ProductExtension {
        metric,
        cometric,
        connection,
    })
}
