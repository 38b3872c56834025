//! Shared deterministic generators for the integration suites.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use nijenhuis::scalar::{rational, Polynomial, Rational, ScalarField};
use nijenhuis::tensor::{Chart, ConnectionCoefficients, Symmetry, TensorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-4i64..=4);
    let d = rng.gen_range(1i64..=3);
    rational::ratio(n, d)
}

/// Sparse polynomial with total degree ≤ max_deg and a handful of terms.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let terms = rng.gen_range(0..=max_terms);
    let mut entries = Vec::new();
    for _ in 0..terms {
        let mut exp = vec![0u32; nvars];
        let mut budget = max_deg;
        for e in exp.iter_mut() {
            let d = rng.gen_range(0..=budget);
            *e = d;
            budget -= d;
            if budget == 0 {
                break;
            }
        }
        entries.push((exp, random_rational(rng)));
    }
    Polynomial::from_terms(nvars, entries)
}

pub fn random_field(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32) -> ScalarField {
    ScalarField::from_poly(random_poly(rng, nvars, max_deg, 3))
}

pub fn random_vector_field(rng: &mut ChaCha8Rng, chart: &Arc<Chart>, max_deg: u32) -> TensorField {
    let n = chart.dim();
    let comps = (0..n).map(|_| random_field(rng, n, max_deg)).collect();
    TensorField::from_vector(chart.clone(), comps)
}

pub fn random_tensor11(rng: &mut ChaCha8Rng, chart: &Arc<Chart>, max_deg: u32) -> TensorField {
    let n = chart.dim();
    let mut t = TensorField::zero(chart.clone(), (1, 1), Symmetry::None);
    for k in 0..n {
        for i in 0..n {
            t.set(&[k], &[i], random_field(rng, n, max_deg));
        }
    }
    t
}

pub fn random_form(
    rng: &mut ChaCha8Rng,
    chart: &Arc<Chart>,
    q: usize,
    max_deg: u32,
) -> TensorField {
    let n = chart.dim();
    let mut t = TensorField::zero(chart.clone(), (0, q), Symmetry::Antisymmetric);
    for idx in nijenhuis::tensor::increasing_tuples(n, q) {
        t.set(&[], &idx, random_field(rng, n, max_deg));
    }
    t
}

pub fn random_connection(
    rng: &mut ChaCha8Rng,
    chart: &Arc<Chart>,
    max_deg: u32,
) -> ConnectionCoefficients {
    let n = chart.dim();
    let mut conn = ConnectionCoefficients::flat(chart.clone());
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                conn.set(k, i, j, random_field(rng, n, max_deg));
            }
        }
    }
    conn
}

pub fn origin(n: usize) -> Vec<Vec<Rational>> {
    vec![vec![rational::int(0); n]]
}

pub fn sf(c: i64, n: usize) -> ScalarField {
    ScalarField::constant(rational::int(c), n)
}

pub fn x(i: usize, n: usize) -> ScalarField {
    ScalarField::variable(i, n)
}

pub fn coord(chart: &Arc<Chart>, k: usize) -> TensorField {
    TensorField::coordinate_vector(chart.clone(), k)
}
