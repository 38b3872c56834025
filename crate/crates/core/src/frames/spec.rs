//! The bracket coefficient table of a Θ-orbit frame and the finite
//! conditions on it: vanishing of the Nijenhuis tensor, integrability of
//! the kernel filtration, the Jacobi identity, and the three-orbit
//! counterexample generator.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{csd_predicate, JordanProfile, Matrix};
use crate::scalar::Rational;

/// A basis grouped into Θ-orbits (lengths weakly decreasing, summing to the
/// dimension) together with an antisymmetric bracket table with rational
/// structure constants. Θ acts by the orbit shift: the first vector of each
/// orbit is annihilated, every other one is sent to its predecessor.
#[derive(Clone, Debug, PartialEq)]
pub struct LieFrameSpec {
    orbits: Vec<usize>,
    // key (a, b) with a < b; value = full coefficient vector over the basis
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl LieFrameSpec {
    pub fn new(orbits: Vec<usize>) -> Result<Self> {
        if orbits.is_empty() || orbits.contains(&0) {
            return Err(Error::Precondition("orbit lengths must be positive".into()));
        }
        if orbits.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(
                "orbit lengths must be weakly decreasing".into(),
            ));
        }
        Ok(LieFrameSpec {
            orbits,
            brackets: BTreeMap::new(),
        })
    }

    pub fn abelian(orbits: Vec<usize>) -> Result<Self> {
        LieFrameSpec::new(orbits)
    }

    pub fn n(&self) -> usize {
        self.orbits.iter().sum()
    }

    pub fn orbits(&self) -> &[usize] {
        &self.orbits
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn profile(&self) -> JordanProfile {
        JordanProfile::new(self.orbits.clone()).unwrap()
    }

    /// Global basis index of position `pos` (1-based) in `orbit` (0-based).
    pub fn global_index(&self, orbit: usize, pos: usize) -> usize {
        debug_assert!(pos >= 1 && pos <= self.orbits[orbit]);
        self.orbits[..orbit].iter().sum::<usize>() + pos - 1
    }

    /// Orbit and 1-based position of a global basis index.
    pub fn orbit_position(&self, idx: usize) -> (usize, usize) {
        let mut rest = idx;
        for (o, &d) in self.orbits.iter().enumerate() {
            if rest < d {
                return (o, rest + 1);
            }
            rest -= d;
        }
        panic!("basis index {idx} out of range");
    }

    /// Sets [e_a, e_b] = Σ coeffs_k e_k; antisymmetry is enforced by
    /// storage.
    pub fn set_bracket(&mut self, a: usize, b: usize, coeffs: Vec<Rational>) -> Result<()> {
        let n = self.n();
        if a >= n || b >= n || coeffs.len() != n {
            return Err(Error::IndexRange(
                "bracket indices or coefficient length out of range".into(),
            ));
        }
        if a == b {
            if coeffs.iter().any(|c| !c.is_zero()) {
                return Err(Error::Precondition("[x,x] must vanish".into()));
            }
            return Ok(());
        }
        let (key, flip) = if a < b {
            ((a, b), false)
        } else {
            ((b, a), true)
        };
        let stored: Vec<Rational> = if flip {
            coeffs.into_iter().map(|c| -c).collect()
        } else {
            coeffs
        };
        if stored.iter().all(|c| c.is_zero()) {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, stored);
        }
        Ok(())
    }

    /// Coefficient vector of [e_a, e_b].
    pub fn bracket(&self, a: usize, b: usize) -> Vec<Rational> {
        let n = self.n();
        if a == b {
            return vec![Rational::zero(); n];
        }
        let (key, flip) = if a < b {
            ((a, b), false)
        } else {
            ((b, a), true)
        };
        match self.brackets.get(&key) {
            None => vec![Rational::zero(); n],
            Some(v) if flip => v.iter().map(|c| -c).collect(),
            Some(v) => v.clone(),
        }
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Rational>)> {
        self.brackets.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// The orbit-shift matrix of Θ on the frame.
    pub fn theta_matrix(&self) -> Matrix<Rational> {
        let n = self.n();
        let mut m = Matrix::zero(n, n, &Rational::zero());
        for (o, &d) in self.orbits.iter().enumerate() {
            for pos in 2..=d {
                m.set(
                    self.global_index(o, pos - 1),
                    self.global_index(o, pos),
                    num_traits::One::one(),
                );
            }
        }
        m
    }

    /// C-coefficient: the coefficient of the target orbit's k-th vector in
    /// [a-orbit's i-th, b-orbit's j-th]; zero outside the index rectangle.
    pub fn c_coeff(&self, oa: usize, i: i64, ob: usize, j: i64, oc: usize, k: i64) -> Rational {
        if i < 1 || j < 1 || k < 1 {
            return Rational::zero();
        }
        let (p, q, r) = (
            self.orbits[oa] as i64,
            self.orbits[ob] as i64,
            self.orbits[oc] as i64,
        );
        if i > p || j > q || k > r {
            return Rational::zero();
        }
        let a = self.global_index(oa, i as usize);
        let b = self.global_index(ob, j as usize);
        let t = self.global_index(oc, k as usize);
        self.bracket(a, b)[t].clone()
    }

    /// E-coefficient E(i,j,s) = C(i, j, i+j−s+1) for an ordered orbit
    /// triple.
    pub fn e_coeff(&self, oa: usize, i: i64, ob: usize, j: i64, oc: usize, s: i64) -> Rational {
        self.c_coeff(oa, i, ob, j, oc, i + j - s + 1)
    }
}

/// Reindexed bracket coefficients per ordered orbit triple, on the index
/// domain where they can be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct ECoefficients {
    /// (orbitA, orbitB, orbitC) → map (i, j, s) → value.
    pub tables: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64, i64), Rational>>,
}

impl ECoefficients {
    pub fn value(&self, triple: (usize, usize, usize), i: i64, j: i64, s: i64) -> Rational {
        self.tables
            .get(&triple)
            .and_then(|t| t.get(&(i, j, s)))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Inverse reindexing: C(i,j,k) = E(i,j,i+j−k+1).
    pub fn c_value(&self, triple: (usize, usize, usize), i: i64, j: i64, k: i64) -> Rational {
        self.value(triple, i, j, i + j - k + 1)
    }
}

/// Bijective reindexing E(i,j,s) = C(i,j,i+j−s+1) over every ordered orbit
/// triple; round-trips exactly with [`ECoefficients::c_value`].
pub fn reindex_c_e(spec: &LieFrameSpec) -> ECoefficients {
    let m = spec.num_orbits();
    let mut tables = BTreeMap::new();
    for oa in 0..m {
        for ob in 0..m {
            for oc in 0..m {
                let (p, q, r) = (
                    spec.orbits()[oa] as i64,
                    spec.orbits()[ob] as i64,
                    spec.orbits()[oc] as i64,
                );
                let mut table = BTreeMap::new();
                for i in 1..=p {
                    for j in 1..=q {
                        for k in 1..=r {
                            let c = spec.c_coeff(oa, i, ob, j, oc, k);
                            if !c.is_zero() {
                                table.insert((i, j, i + j - k + 1), c);
                            }
                        }
                    }
                }
                if !table.is_empty() {
                    tables.insert((oa, ob, oc), table);
                }
            }
        }
    }
    ECoefficients { tables }
}

/// A violated linear condition on the E-table.
#[derive(Clone, Debug)]
pub struct EWitness {
    pub triple: (usize, usize, usize),
    pub i: i64,
    pub j: i64,
    pub s: i64,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Vanishing of the Nijenhuis tensor for the orbit-shift Θ on a
/// left-invariant frame: for every ordered orbit triple,
/// E(i,j,s) + E(i−1,j−1,s) = E(i−1,j,s) + E(i,j−1,s) whenever i+j ≥ s+2,
/// with the boundary zeros built into the table.
pub fn frame_nijenhuis_vanishes(spec: &LieFrameSpec) -> (bool, Option<EWitness>) {
    let m = spec.num_orbits();
    for oa in 0..m {
        for ob in 0..m {
            for oc in 0..m {
                let (p, q, r) = (
                    spec.orbits()[oa] as i64,
                    spec.orbits()[ob] as i64,
                    spec.orbits()[oc] as i64,
                );
                for i in 1..=p {
                    for j in 1..=q {
                        for s in (i + j - r - 1)..=(i + j - 2) {
                            let lhs = spec.e_coeff(oa, i, ob, j, oc, s)
                                + spec.e_coeff(oa, i - 1, ob, j - 1, oc, s);
                            let rhs = spec.e_coeff(oa, i - 1, ob, j, oc, s)
                                + spec.e_coeff(oa, i, ob, j - 1, oc, s);
                            if lhs != rhs {
                                return (
                                    false,
                                    Some(EWitness {
                                        triple: (oa, ob, oc),
                                        i,
                                        j,
                                        s,
                                        lhs,
                                        rhs,
                                    }),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    (true, None)
}

/// Integrability of Ker Θˡ on the frame: C(i,j,k) = 0 whenever i,j ≤ l < k,
/// over all ordered orbit triples. With `level = None` the condition is
/// required for every l at once: C(i,j,k) = 0 whenever k > max(i,j).
pub fn kernel_integrability_frame(
    spec: &LieFrameSpec,
    level: Option<usize>,
) -> (bool, Option<EWitness>) {
    for ((a, b), coeffs) in spec.bracket_entries() {
        let (oa, i) = spec.orbit_position(*a);
        let (ob, j) = spec.orbit_position(*b);
        for (t, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (oc, k) = spec.orbit_position(t);
            let violates = match level {
                Some(l) => i <= l && j <= l && k > l,
                None => k > i.max(j),
            };
            if violates {
                let (i, j, k) = (i as i64, j as i64, k as i64);
                return (
                    false,
                    Some(EWitness {
                        triple: (oa, ob, oc),
                        i,
                        j,
                        s: i + j - k + 1,
                        lhs: c.clone(),
                        rhs: Rational::zero(),
                    }),
                );
            }
        }
    }
    (true, None)
}

/// Exact Jacobi identity over all basis triples.
pub fn jacobi_check(spec: &LieFrameSpec) -> (bool, Option<(usize, usize, usize)>) {
    let n = spec.n();
    let bracket_with_vector = |a: usize, v: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (m, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (t, c) in spec.bracket(a, m).iter().enumerate() {
                if !c.is_zero() {
                    out[t] += coeff * c;
                }
            }
        }
        out
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut total = bracket_with_vector(a, &spec.bracket(b, c));
                for (t, v) in bracket_with_vector(b, &spec.bracket(c, a))
                    .into_iter()
                    .enumerate()
                {
                    total[t] += v;
                }
                for (t, v) in bracket_with_vector(c, &spec.bracket(a, b))
                    .into_iter()
                    .enumerate()
                {
                    total[t] += v;
                }
                if total.iter().any(|x| !x.is_zero()) {
                    return (false, Some((a, b, c)));
                }
            }
        }
    }
    (true, None)
}

/// The coefficient max(0, i + min(0, j−p)) populating the counterexample
/// bracket table.
pub fn counterexample_coefficient(i: i64, j: i64, p: i64) -> Rational {
    Rational::from_integer(0.max(i + 0.min(j - p)).into())
}

/// A step-2 nilpotent algebra whose orbit-shift tensor has vanishing
/// Nijenhuis tensor while Ker Θᵖ is non-integrable, built inside the given
/// non-(csd) profile: sources are the two shortest orbits, values land in
/// the longest orbit and are central.
pub fn counterexample_within_profile(profile: &JordanProfile) -> Result<LieFrameSpec> {
    if csd_predicate(profile) {
        return Err(Error::Precondition(
            "profile is controlled by the Nijenhuis tensor; no counterexample exists".into(),
        ));
    }
    let m = profile.blocks().len();
    let (src_i, src_j, target) = (m - 1, m - 2, 0usize);
    build_three_orbit(profile.blocks().to_vec(), src_i, src_j, target)
}

/// The three-orbit counterexample with blocks exactly (r, q, p), p ≤ q < r.
pub fn build_counterexample(p: usize, q: usize, r: usize) -> Result<LieFrameSpec> {
    if !(p <= q && q < r) {
        return Err(Error::Precondition(format!(
            "block lengths must satisfy p ≤ q < r, got ({p}, {q}, {r})"
        )));
    }
    build_three_orbit(vec![r, q, p], 2, 1, 0)
}

fn build_three_orbit(
    orbits: Vec<usize>,
    src_i: usize,
    src_j: usize,
    target: usize,
) -> Result<LieFrameSpec> {
    let mut spec = LieFrameSpec::new(orbits)?;
    let p = spec.orbits()[src_i] as i64;
    let q = spec.orbits()[src_j] as i64;
    let n = spec.n();
    for i in 1..=p {
        for j in 1..=q {
            let coeff = counterexample_coefficient(i, j, p);
            if coeff.is_zero() {
                continue;
            }
            let k = (i + j - p + 1) as usize;
            let mut v = vec![Rational::zero(); n];
            v[spec.global_index(target, k)] = coeff;
            spec.set_bracket(
                spec.global_index(src_i, i as usize),
                spec.global_index(src_j, j as usize),
                v,
            )?;
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;

    fn heisenberg() -> LieFrameSpec {
        // three orbits of length 1, [e0, e1] = e2
        let mut spec = LieFrameSpec::new(vec![1, 1, 1]).unwrap();
        spec.set_bracket(0, 1, vec![int(0), int(0), int(1)])
            .unwrap();
        spec
    }

    #[test]
    fn reindexing_round_trips() {
        let spec = build_counterexample(2, 3, 4).unwrap();
        let e = reindex_c_e(&spec);
        let m = spec.num_orbits();
        for oa in 0..m {
            for ob in 0..m {
                for oc in 0..m {
                    for i in 1..=spec.orbits()[oa] as i64 {
                        for j in 1..=spec.orbits()[ob] as i64 {
                            for k in 1..=spec.orbits()[oc] as i64 {
                                assert_eq!(
                                    e.c_value((oa, ob, oc), i, j, k),
                                    spec.c_coeff(oa, i, ob, j, oc, k)
                                );
                            }
                        }
                    }
                }
            }
        }
        // all-zero brackets give an empty table
        assert!(reindex_c_e(&LieFrameSpec::abelian(vec![2, 1]).unwrap())
            .tables
            .is_empty());
    }

    #[test]
    fn single_bracket_reindex_value() {
        // [e_1, ẽ_1] = ê_2 for blocks (1,1,2): E(1,1,1) = 1 on triple (2,1,0)
        let spec = build_counterexample(1, 1, 2).unwrap();
        let e = reindex_c_e(&spec);
        assert_eq!(e.value((2, 1, 0), 1, 1, 1), int(1));
    }

    #[test]
    fn abelian_passes_everything() {
        let spec = LieFrameSpec::abelian(vec![3, 2]).unwrap();
        assert!(frame_nijenhuis_vanishes(&spec).0);
        assert!(kernel_integrability_frame(&spec, None).0);
        assert!(jacobi_check(&spec).0);
    }

    #[test]
    fn heisenberg_cases() {
        let h = heisenberg();
        assert!(jacobi_check(&h).0);
        // Θ = 0: the Nijenhuis condition is vacuous
        assert!(frame_nijenhuis_vanishes(&h).0);
        // all kernels are everything, so integrability holds at every level
        assert!(kernel_integrability_frame(&h, Some(1)).0);

        // orbits (2,1) with [e1, ẽ1] = e2 (final vector of the 2-orbit):
        // both the Nijenhuis condition and level-1 kernel integrability fail
        let mut bad = LieFrameSpec::new(vec![2, 1]).unwrap();
        bad.set_bracket(0, 2, vec![int(0), int(1), int(0)]).unwrap();
        assert!(!frame_nijenhuis_vanishes(&bad).0);
        assert!(!kernel_integrability_frame(&bad, Some(1)).0);

        // [e2, ẽ1] = e2 leaves N = 0 and every kernel integrable, matching
        // the theory for the controlled profile 2 1
        let mut fine = LieFrameSpec::new(vec![2, 1]).unwrap();
        fine.set_bracket(1, 2, vec![int(0), int(1), int(0)])
            .unwrap();
        assert!(frame_nijenhuis_vanishes(&fine).0);
        assert!(kernel_integrability_frame(&fine, None).0);
    }

    #[test]
    fn jacobi_failure_detected() {
        // [e0,e1] = e0, [e0,e2] = e1, [e1,e2] = 0 breaks Jacobi
        let mut spec = LieFrameSpec::new(vec![1, 1, 1]).unwrap();
        spec.set_bracket(0, 1, vec![int(1), int(0), int(0)])
            .unwrap();
        spec.set_bracket(0, 2, vec![int(0), int(1), int(0)])
            .unwrap();
        let (ok, witness) = jacobi_check(&spec);
        assert!(!ok);
        assert_eq!(witness, Some((0, 1, 2)));
    }

    #[test]
    fn counterexample_assertions() {
        for (p, q, r) in [
            (1usize, 1usize, 2usize),
            (1, 2, 3),
            (2, 2, 3),
            (2, 3, 4),
            (3, 3, 4),
        ] {
            let spec = build_counterexample(p, q, r).unwrap();
            assert!(jacobi_check(&spec).0, "jacobi for ({p},{q},{r})");
            assert!(
                frame_nijenhuis_vanishes(&spec).0,
                "nijenhuis for ({p},{q},{r})"
            );
            let (ok, witness) = kernel_integrability_frame(&spec, Some(p));
            assert!(!ok, "kernel level {p} must fail for ({p},{q},{r})");
            assert!(witness.is_some());
            // corner value on the oriented source triple is exactly p
            let (pi, qi) = (p as i64, p as i64);
            assert_eq!(spec.e_coeff(2, pi, 1, qi, 0, pi), int(p as i64));
        }
        assert!(build_counterexample(2, 1, 3).is_err());
        assert!(build_counterexample(1, 2, 2).is_err());
    }

    #[test]
    fn counterexample_coefficient_table() {
        // blocks (2,3,4): values of the coefficient on the index rectangle
        let e = |i, j| counterexample_coefficient(i, j, 2);
        assert_eq!(e(1, 1), int(0));
        assert_eq!(e(2, 1), int(1));
        assert_eq!(e(1, 2), int(1));
        assert_eq!(e(2, 2), int(2));
        assert_eq!(e(1, 3), int(1));
        assert_eq!(e(2, 3), int(2));
    }

    #[test]
    fn profile_counterexample_uses_shortest_blocks() {
        let profile = JordanProfile::new(vec![4, 2, 2, 1]).unwrap();
        let spec = counterexample_within_profile(&profile).unwrap();
        assert_eq!(spec.profile(), profile);
        assert!(frame_nijenhuis_vanishes(&spec).0);
        assert!(!kernel_integrability_frame(&spec, Some(1)).0);
        let csd = JordanProfile::new(vec![2, 2, 1]).unwrap();
        assert!(counterexample_within_profile(&csd).is_err());
    }
}
