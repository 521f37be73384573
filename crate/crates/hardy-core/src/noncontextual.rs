//! The noncontextual realistic model for the four dichotomic observables and
//! the exact bound it places on the paradoxical joint event.
//!
//! A noncontextual assignment gives definite ±1 values to all four
//! observables at once — spin, spin′, orbit, orbit′ — so a statistical model
//! is a probability distribution over the 16 possible sign patterns. The
//! four joint probabilities probed in the experiment are then marginal sums
//! over those patterns, and the bound
//!
//! ```text
//! p4 ≤ p1 + p2 + p3
//! ```
//!
//! holds for every such model because each pattern contributing to `p4` also
//! contributes to one of the other three sums. [`max_gap_over_models`] makes
//! the bound computational: the gap is linear in the distribution, so its
//! maximum over the probability simplex sits on a deterministic vertex, and
//! enumerating all 16 vertices shows the maximum is exactly zero.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;

/// Number of deterministic sign patterns for four dichotomic observables.
pub const PATTERN_COUNT: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum NchvError {
    WrongLength { got: usize },
    NegativeProbability { index: usize, value: f64 },
    NotNormalized { sum: f64 },
    MarginalOutOfRange { label: &'static str, value: f64 },
}

impl fmt::Display for NchvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongLength { got } => {
                write!(f, "expected {PATTERN_COUNT} probabilities, got {got}")
            }
            Self::NegativeProbability { index, value } => {
                write!(f, "probability {index} is negative: {value}")
            }
            Self::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1 within 1e-12")
            }
            Self::MarginalOutOfRange { label, value } => {
                write!(f, "marginal {label} = {value} outside [0, 1]")
            }
        }
    }
}

impl core::error::Error for NchvError {}

/// Sign pattern of assignment row `row` (0-based) as
/// `[spin, spin′, orbit, orbit′]`, each ±1.
///
/// Rows count in binary with spin as the most significant bit: row 0 assigns
/// −1 to everything, row 15 assigns +1 to everything.
pub fn vertex_signs(row: usize) -> [i8; 4] {
    debug_assert!(row < PATTERN_COUNT);
    let bit = |k: usize| if row >> k & 1 == 1 { 1 } else { -1 };
    [bit(3), bit(2), bit(1), bit(0)]
}

/// Probability distribution over the 16 deterministic assignments.
#[derive(Clone, Debug, PartialEq)]
pub struct NchvDistribution {
    p: [f64; PATTERN_COUNT],
}

impl NchvDistribution {
    /// Validates nonnegativity and normalization (sum within 1e-12 of 1).
    pub fn new(p: &[f64]) -> Result<Self, NchvError> {
        if p.len() != PATTERN_COUNT {
            return Err(NchvError::WrongLength { got: p.len() });
        }
        for (index, &value) in p.iter().enumerate() {
            if value < 0.0 {
                return Err(NchvError::NegativeProbability { index, value });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(NchvError::NotNormalized { sum });
        }
        let mut arr = [0.0; PATTERN_COUNT];
        arr.copy_from_slice(p);
        Ok(Self { p: arr })
    }

    /// The deterministic model concentrated on one assignment row.
    pub fn vertex(row: usize) -> Self {
        let mut p = [0.0; PATTERN_COUNT];
        p[row] = 1.0;
        Self { p }
    }

    pub fn uniform() -> Self {
        Self { p: [1.0 / PATTERN_COUNT as f64; PATTERN_COUNT] }
    }

    /// Uniform sample from the probability simplex (normalized unit-rate
    /// exponential draws).
    pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut p = [0.0; PATTERN_COUNT];
        let mut sum = 0.0;
        for slot in p.iter_mut() {
            let u: f64 = rng.random();
            *slot = -(1.0 - u).ln();
            sum += *slot;
        }
        if sum <= 0.0 {
            return Self::uniform();
        }
        for slot in p.iter_mut() {
            *slot /= sum;
        }
        Self { p }
    }

    #[inline]
    pub fn probabilities(&self) -> &[f64; PATTERN_COUNT] {
        &self.p
    }
}

/// The four marginal probabilities of the paradox chain, labeled as in
/// [`crate::hardy::JointProbabilityTable`]:
/// `p1 = P(spin=+1, orbit=+1)`, `p2 = P(spin=−1, orbit′=−1)`,
/// `p3 = P(spin′=−1, orbit=−1)`, `p4 = P(spin′=−1, orbit′=−1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HardyMarginals {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl HardyMarginals {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self, NchvError> {
        for (label, value) in [("p1", p1), ("p2", p2), ("p3", p3), ("p4", p4)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(NchvError::MarginalOutOfRange { label, value });
            }
        }
        Ok(Self { p1, p2, p3, p4 })
    }

    pub fn values(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}

/// Whether assignment row `row` contributes to each of the four marginals.
fn pattern_membership(row: usize) -> [bool; 4] {
    let [spin, spin_alt, orbit, orbit_alt] = vertex_signs(row);
    [
        spin > 0 && orbit > 0,
        spin < 0 && orbit_alt < 0,
        spin_alt < 0 && orbit < 0,
        spin_alt < 0 && orbit_alt < 0,
    ]
}

/// Marginal sums of a noncontextual distribution.
pub fn marginals(d: &NchvDistribution) -> HardyMarginals {
    let mut m = [0.0; 4];
    for row in 0..PATTERN_COUNT {
        let member = pattern_membership(row);
        for k in 0..4 {
            if member[k] {
                m[k] += d.probabilities()[row];
            }
        }
    }
    HardyMarginals { p1: m[0], p2: m[1], p3: m[2], p4: m[3] }
}

/// Signed violation of the noncontextual bound:
/// `gap = p4 − (p1 + p2 + p3)`. Nonpositive means the bound holds.
pub fn inequality_gap(m: &HardyMarginals) -> f64 {
    m.p4 - (m.p1 + m.p2 + m.p3)
}

/// Maximizes the gap over all noncontextual models.
///
/// The gap is linear in the distribution, so the maximum over the simplex is
/// attained at one of the 16 deterministic vertices; all of them are
/// evaluated exactly. Returns the maximum (which is 0) and the first
/// attaining vertex row.
pub fn max_gap_over_models() -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for row in 0..PATTERN_COUNT {
        let gap = inequality_gap(&marginals(&NchvDistribution::vertex(row)));
        if gap > best {
            best = gap;
            arg = row;
        }
    }
    (best, arg)
}

/// The all-versus-nothing consequence as a checkable implication: if the
/// first three marginals are each ≤ `tol`, the fourth must be ≤ `3·tol`
/// (vacuously true otherwise).
pub fn p123_zero_implies_p4_zero(d: &NchvDistribution, tol: f64) -> bool {
    let m = marginals(d);
    if m.p1 <= tol && m.p2 <= tol && m.p3 <= tol {
        m.p4 <= 3.0 * tol
    } else {
        true
    }
}

/// 1-based rows contributing to each marginal; test/report helper mirroring
/// the term-inclusion structure of the bound's proof.
pub fn marginal_index_sets() -> [Vec<usize>; 4] {
    let mut sets: [Vec<usize>; 4] = Default::default();
    for row in 0..PATTERN_COUNT {
        let member = pattern_membership(row);
        for k in 0..4 {
            if member[k] {
                sets[k].push(row + 1);
            }
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn sign_table_counts_in_binary() {
        assert_eq!(vertex_signs(0), [-1, -1, -1, -1]);
        assert_eq!(vertex_signs(15), [1, 1, 1, 1]);
        // Row 11 in 1-based counting: (+1, −1, +1, −1).
        assert_eq!(vertex_signs(10), [1, -1, 1, -1]);
        assert_eq!(vertex_signs(3), [-1, -1, 1, 1]);
    }

    #[test]
    fn marginal_index_sets_match_the_proof_structure() {
        let [s1, s2, s3, s4] = marginal_index_sets();
        assert_eq!(s1, alloc::vec![11, 12, 15, 16]);
        assert_eq!(s2, alloc::vec![1, 3, 5, 7]);
        assert_eq!(s3, alloc::vec![1, 2, 9, 10]);
        assert_eq!(s4, alloc::vec![1, 3, 9, 11]);
        // Every row in the fourth set appears in the union of the first
        // three, which is the whole content of the bound.
        for row in &s4 {
            assert!(
                s1.contains(row) || s2.contains(row) || s3.contains(row),
                "row {row} not covered"
            );
        }
    }

    #[test]
    fn vertex_marginals() {
        let m = marginals(&NchvDistribution::vertex(0));
        assert_eq!(m.values(), [0.0, 1.0, 1.0, 1.0]);

        let m = marginals(&NchvDistribution::vertex(15));
        assert_eq!(m.values(), [1.0, 0.0, 0.0, 0.0]);

        let m = marginals(&NchvDistribution::uniform());
        assert_eq!(m.values(), [0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn gap_examples() {
        // Quantum working-point values violate the bound by the full p4.
        let quantum = HardyMarginals::new(0.0, 0.0, 0.0, 0.0902).unwrap();
        assert_eq!(inequality_gap(&quantum), 0.0902);

        let zero = HardyMarginals::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(inequality_gap(&zero), 0.0);

        // First deterministic vertex: 1 − (0 + 1 + 1).
        let m = marginals(&NchvDistribution::vertex(0));
        assert_eq!(inequality_gap(&m), -1.0);
    }

    #[test]
    fn simplex_maximum_is_exactly_zero() {
        let (max_gap, arg) = max_gap_over_models();
        assert_eq!(max_gap, 0.0);
        assert_eq!(arg, 2); // row 3 in 1-based counting: (−,−,+,−)
        for row in 0..PATTERN_COUNT {
            let gap = inequality_gap(&marginals(&NchvDistribution::vertex(row)));
            assert!(gap == 0.0 || gap == -1.0, "vertex {row} gap {gap}");
        }
    }

    #[test]
    fn implication_examples() {
        // Vertex with all four marginals zero.
        assert!(p123_zero_implies_p4_zero(&NchvDistribution::vertex(3), 1e-12));
        // Uniform: premise false, vacuously true.
        assert!(p123_zero_implies_p4_zero(&NchvDistribution::uniform(), 1e-12));
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(matches!(
            NchvDistribution::new(&[1.0; 4]),
            Err(NchvError::WrongLength { got: 4 })
        ));
        let mut p = [1.0 / 16.0; 16];
        p[3] = -1e-6;
        assert!(matches!(
            NchvDistribution::new(&p),
            Err(NchvError::NegativeProbability { index: 3, .. })
        ));
        let p = [0.1; 16];
        assert!(matches!(NchvDistribution::new(&p), Err(NchvError::NotNormalized { .. })));
        assert!(HardyMarginals::new(0.0, 0.0, 0.0, 1.2).is_err());
    }

    #[test]
    fn random_models_never_violate() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x4e43_4856);
        for _ in 0..10_000 {
            let d = NchvDistribution::sample_uniform(&mut rng);
            assert!(inequality_gap(&marginals(&d)) <= 1e-12);
        }
    }

    fn simplex_strategy() -> impl Strategy<Value = NchvDistribution> {
        prop::collection::vec(0.0_f64..1.0, PATTERN_COUNT).prop_filter_map("positive sum", |xs| {
            let sum: f64 = xs.iter().sum();
            if sum <= 0.0 {
                return None;
            }
            let p: Vec<f64> = xs.iter().map(|x| x / sum).collect();
            NchvDistribution::new(&p).ok()
        })
    }

    proptest! {
        #[test]
        fn marginals_are_linear(
            a in simplex_strategy(),
            b in simplex_strategy(),
            w in 0.0_f64..1.0,
        ) {
            let mixed: Vec<f64> = a
                .probabilities()
                .iter()
                .zip(b.probabilities().iter())
                .map(|(x, y)| w * x + (1.0 - w) * y)
                .collect();
            // Renormalize against rounding before validating.
            let sum: f64 = mixed.iter().sum();
            let mixed: Vec<f64> = mixed.iter().map(|x| x / sum).collect();
            let lhs = marginals(&NchvDistribution::new(&mixed).unwrap());
            let ma = marginals(&a);
            let mb = marginals(&b);
            for k in 0..4 {
                let expected = w * ma.values()[k] + (1.0 - w) * mb.values()[k];
                prop_assert!((lhs.values()[k] - expected).abs() < 1e-12);
            }
        }

        #[test]
        fn implication_holds_for_every_model(d in simplex_strategy()) {
            prop_assert!(p123_zero_implies_p4_zero(&d, 1e-12));
            prop_assert!(inequality_gap(&marginals(&d)) <= 1e-12);
        }
    }
}
