//! Constructors for standard noise families, discrete Weyl operators, the
//! closed-form implementability of inverse noise maps, and seeded random
//! channel generation.
//!
//! # Randomness
//!
//! All random constructors are deterministic functions of an explicit 64-bit
//! seed. The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), keyed from the
//! seed by `SeedableRng::seed_from_u64` (a SplitMix64 expansion), and
//! Gaussian variates come from the Box-Muller transform applied to 53-bit
//! uniform doubles. Fixing the algorithm keeps seeds reproducible across
//! platforms and ports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{KrausSet, LinearMapRep, MixedUnitarySpec};
use crate::error::{Error, Result};
use crate::matrix::{orthonormalize_columns, CMatrix, C64};

/// A parametrized noise family with a closed-form `nu` for its inverse map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NamedFamily {
    /// Qubit amplitude damping with decay probability `epsilon`.
    AmplitudeDamping { epsilon: f64 },
    /// Generalized amplitude damping with decay `y` and thermal occupation
    /// `n`, both in `[0, 1]`.
    GeneralizedAmplitudeDamping { y: f64, n: f64 },
    /// Qudit depolarizing channel: identity with probability `1 - epsilon`,
    /// uniform Weyl twirl with probability `epsilon`.
    Depolarizing { dim: usize, epsilon: f64 },
    /// Qubit dephasing: `(1 - epsilon) rho + epsilon Z rho Z`.
    DephasingQubit { epsilon: f64 },
}

impl NamedFamily {
    /// System dimension the family acts on.
    pub fn dim(&self) -> usize {
        match self {
            NamedFamily::Depolarizing { dim, .. } => *dim,
            _ => 2,
        }
    }

    /// Check the documented parameter ranges for constructing the channel.
    pub fn validate(&self) -> Result<()> {
        let in_unit = |name: &str, v: f64| -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} = {v} outside [0, 1]"
                )))
            }
        };
        match *self {
            NamedFamily::AmplitudeDamping { epsilon } => in_unit("epsilon", epsilon),
            NamedFamily::GeneralizedAmplitudeDamping { y, n } => {
                in_unit("y", y)?;
                in_unit("n", n)
            }
            NamedFamily::Depolarizing { dim, epsilon } => {
                if dim < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "depolarizing dimension {dim} must be >= 2"
                    )));
                }
                in_unit("epsilon", epsilon)
            }
            NamedFamily::DephasingQubit { epsilon } => in_unit("epsilon", epsilon),
        }
    }

    /// Build the channel itself (always CPTP).
    pub fn to_map(&self) -> Result<LinearMapRep> {
        self.validate()?;
        Ok(match *self {
            NamedFamily::AmplitudeDamping { epsilon } => amplitude_damping(epsilon)?.to_map(),
            NamedFamily::GeneralizedAmplitudeDamping { y, n } => {
                generalized_amplitude_damping(y, n)?.to_map()
            }
            NamedFamily::Depolarizing { dim, epsilon } => depolarizing(dim, epsilon)?,
            NamedFamily::DephasingQubit { epsilon } => dephasing_qubit(epsilon)?,
        })
    }

    /// Closed-form `nu` (base-2 log) of the *inverse* map of this channel.
    ///
    /// Valid strictly inside the invertibility range: `epsilon < 1` for
    /// amplitude damping and depolarizing, `y < 1` for generalized amplitude
    /// damping, `epsilon < 1/2` for dephasing.
    pub fn analytic_nu_inverse(&self) -> Result<f64> {
        self.validate()?;
        let singular = |what: &str| {
            Err(Error::InvalidParameter(format!(
                "no analytic inverse value at or beyond the singular point ({what})"
            )))
        };
        match *self {
            NamedFamily::AmplitudeDamping { epsilon } => {
                if epsilon >= 1.0 {
                    return singular("epsilon = 1");
                }
                Ok(((1.0 + epsilon) / (1.0 - epsilon)).log2())
            }
            NamedFamily::GeneralizedAmplitudeDamping { y, n } => {
                if y >= 1.0 {
                    return singular("y = 1");
                }
                // The closed form gives the linear-scale cost
                // gamma = (1 + |y - 2 n y|) / (1 - y); report nu = log2 gamma.
                Ok(((1.0 + (y - 2.0 * n * y).abs()) / (1.0 - y)).log2())
            }
            NamedFamily::Depolarizing { dim, epsilon } => {
                if epsilon >= 1.0 {
                    return singular("epsilon = 1");
                }
                let d2 = (dim * dim) as f64;
                Ok(((1.0 + (1.0 - 2.0 / d2) * epsilon) / (1.0 - epsilon)).log2())
            }
            NamedFamily::DephasingQubit { epsilon } => {
                if epsilon >= 0.5 {
                    return singular("epsilon = 1/2");
                }
                Ok((1.0 / (1.0 - 2.0 * epsilon)).log2())
            }
        }
    }
}

/// Closed-form `nu` of the inverse map of a named channel.
pub fn analytic_nu_inverse(family: &NamedFamily) -> Result<f64> {
    family.analytic_nu_inverse()
}

/// Qubit amplitude damping: Kraus operators
/// `A0 = |0><0| + sqrt(1-eps)|1><1|`, `A1 = sqrt(eps)|0><1|`.
pub fn amplitude_damping(epsilon: f64) -> Result<KrausSet> {
    NamedFamily::AmplitudeDamping { epsilon }.validate()?;
    let a0 = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - epsilon).sqrt()]]);
    let a1 = CMatrix::from_real_rows(&[&[0.0, epsilon.sqrt()], &[0.0, 0.0]]);
    KrausSet::new(2, vec![a0, a1])
}

/// Generalized amplitude damping with decay `y` and thermal occupation `n`:
/// the four Kraus operators interpolating between decay towards `|0>`
/// (weight `1 - n`) and towards `|1>` (weight `n`). At `n = 0` this reduces
/// to plain amplitude damping.
pub fn generalized_amplitude_damping(y: f64, n: f64) -> Result<KrausSet> {
    NamedFamily::GeneralizedAmplitudeDamping { y, n }.validate()?;
    let a1 = CMatrix::from_real_rows(&[
        &[(1.0 - n).sqrt(), 0.0],
        &[0.0, ((1.0 - n) * (1.0 - y)).sqrt()],
    ]);
    let a2 = CMatrix::from_real_rows(&[&[0.0, (y * (1.0 - n)).sqrt()], &[0.0, 0.0]]);
    let a3 = CMatrix::from_real_rows(&[&[(n * (1.0 - y)).sqrt(), 0.0], &[0.0, n.sqrt()]]);
    let a4 = CMatrix::from_real_rows(&[&[0.0, 0.0], &[(y * n).sqrt(), 0.0]]);
    KrausSet::new(2, vec![a1, a2, a3, a4])
}

/// Discrete Weyl operator `W_{x,z} = X^x Z^z` on a d-dimensional system,
/// where `X|k> = |k+1 mod d>` and `Z|k> = zeta^k |k>` with `zeta = exp(2 pi
/// i / d)`. Entries: `W[k, l] = delta_{k, (l+x) mod d} * zeta^(l z)`.
pub fn weyl_operator(d: usize, x: usize, z: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} must be >= 2"
        )));
    }
    if x >= d || z >= d {
        return Err(Error::InvalidParameter(format!(
            "Weyl indices ({x}, {z}) out of range for dimension {d}"
        )));
    }
    Ok(CMatrix::from_fn(d, d, |k, l| {
        if k == (l + x) % d {
            let phase = 2.0 * std::f64::consts::PI * ((l * z) % d) as f64 / d as f64;
            C64::new(phase.cos(), phase.sin())
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// All `d^2` Weyl operators in lexicographic `(x, z)` order.
pub fn weyl_family(d: usize) -> Result<Vec<CMatrix>> {
    let mut out = Vec::with_capacity(d * d);
    for x in 0..d {
        for z in 0..d {
            out.push(weyl_operator(d, x, z)?);
        }
    }
    Ok(out)
}

/// Qudit depolarizing channel
/// `rho -> (1 - eps) rho + (eps / d^2) sum_{x,z} W rho W^dag`,
/// assembled as a mixed-unitary map over the Weyl family.
pub fn depolarizing(d: usize, epsilon: f64) -> Result<LinearMapRep> {
    NamedFamily::Depolarizing { dim: d, epsilon }.validate()?;
    let uniform = epsilon / (d * d) as f64;
    let mut terms = Vec::with_capacity(d * d);
    for (idx, w) in weyl_family(d)?.into_iter().enumerate() {
        let coeff = if idx == 0 {
            1.0 - epsilon + uniform
        } else {
            uniform
        };
        terms.push((coeff, w));
    }
    Ok(MixedUnitarySpec::new(d, terms)?.to_map())
}

/// The inverse of the depolarizing channel as an explicit signed
/// mixed-unitary spec: identity coefficient `1 + (d^2-1) eps / (d^2 (1-eps))`
/// and `-eps / (d^2 (1-eps))` on every non-identity Weyl operator.
pub fn depolarizing_inverse_spec(d: usize, epsilon: f64) -> Result<MixedUnitarySpec> {
    NamedFamily::Depolarizing { dim: d, epsilon }.validate()?;
    if epsilon >= 1.0 {
        return Err(Error::InvalidParameter(
            "depolarizing channel is not invertible at epsilon = 1".into(),
        ));
    }
    let d2 = (d * d) as f64;
    let neg = -epsilon / (d2 * (1.0 - epsilon));
    let mut terms = Vec::with_capacity(d * d);
    for (idx, w) in weyl_family(d)?.into_iter().enumerate() {
        let coeff = if idx == 0 {
            1.0 + (d2 - 1.0) * epsilon / (d2 * (1.0 - epsilon))
        } else {
            neg
        };
        terms.push((coeff, w));
    }
    MixedUnitarySpec::new(d, terms)
}

/// Qubit dephasing channel `rho -> (1 - eps) rho + eps Z rho Z`.
pub fn dephasing_qubit(epsilon: f64) -> Result<LinearMapRep> {
    NamedFamily::DephasingQubit { epsilon }.validate()?;
    let z = weyl_operator(2, 0, 1)?;
    Ok(
        MixedUnitarySpec::new(2, vec![(1.0 - epsilon, CMatrix::identity(2)), (epsilon, z)])?
            .to_map(),
    )
}

/// The inverse of the qubit dephasing channel as a signed mixed-unitary
/// spec: `(1-eps)/(1-2eps)` on the identity and `-eps/(1-2eps)` on `Z`.
pub fn dephasing_inverse_spec(epsilon: f64) -> Result<MixedUnitarySpec> {
    NamedFamily::DephasingQubit { epsilon }.validate()?;
    if epsilon >= 0.5 {
        return Err(Error::InvalidParameter(
            "dephasing channel is not invertible at epsilon = 1/2".into(),
        ));
    }
    let z = weyl_operator(2, 0, 1)?;
    let denom = 1.0 - 2.0 * epsilon;
    MixedUnitarySpec::new(
        2,
        vec![
            ((1.0 - epsilon) / denom, CMatrix::identity(2)),
            (-epsilon / denom, z),
        ],
    )
}

/// One standard-normal pair via Box-Muller on 53-bit uniforms.
fn normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    // 1 - u1 lies in (0, 1], keeping the logarithm finite.
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Matrix of independent standard complex Gaussian entries.
fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let (re, im) = normal_pair(rng);
        C64::new(re, im)
    })
}

/// Haar-like random isometry (`rows x cols`, `rows >= cols`): QR
/// orthonormalization of a Gaussian matrix.
pub fn random_isometry_with_rng(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        if let Ok(q) = orthonormalize_columns(&gaussian_matrix(rows, cols, rng)) {
            return q;
        }
        // Rank deficiency has probability zero; retry on the measure-zero
        // numerical corner.
    }
}

/// Haar-like random unitary.
pub fn random_unitary_with_rng(d: usize, rng: &mut impl Rng) -> CMatrix {
    random_isometry_with_rng(d, d, rng)
}

pub fn random_unitary(d: usize, seed: u64) -> CMatrix {
    random_unitary_with_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Seeded random CPTP channel: orthonormalize a `(d * kraus_count) x d`
/// Gaussian matrix into an isometry and slice it into `kraus_count` Kraus
/// blocks, so `sum_K K^dag K = I` holds by construction.
pub fn random_cptp_with_rng(d: usize, kraus_count: usize, rng: &mut impl Rng) -> Result<KrausSet> {
    if kraus_count < 1 {
        return Err(Error::InvalidParameter("kraus_count must be >= 1".into()));
    }
    let isometry = random_isometry_with_rng(d * kraus_count, d, rng);
    let ops = (0..kraus_count)
        .map(|block| CMatrix::from_fn(d, d, |i, j| isometry[(block * d + i, j)]))
        .collect();
    KrausSet::new(d, ops)
}

pub fn random_cptp(d: usize, kraus_count: usize, seed: u64) -> Result<KrausSet> {
    random_cptp_with_rng(d, kraus_count, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Seeded random HPTP map: `(1 + eta) C1 - eta C2` for two random channels
/// and `eta` uniform in `[0, 2]`. The signed combination of channels is HP
/// and TP by construction; it is CPTP only when the draw happens to keep the
/// Choi operator positive.
pub fn random_hptp_with_rng(d: usize, rng: &mut impl Rng) -> LinearMapRep {
    let eta2: f64 = 2.0 * rng.random::<f64>();
    let a = random_cptp_with_rng(d, 2, rng)
        .expect("kraus_count >= 1")
        .to_map();
    let b = random_cptp_with_rng(d, 2, rng)
        .expect("kraus_count >= 1")
        .to_map();
    let choi = a.choi().scale_re(1.0 + eta2).sub(&b.choi().scale_re(eta2));
    LinearMapRep::from_choi(d, choi).expect("dimensions agree by construction")
}

pub fn random_hptp(d: usize, seed: u64) -> LinearMapRep {
    random_hptp_with_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Seeded random density matrix `G G^dag / tr(G G^dag)`.
pub fn random_density_with_rng(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(d, d, rng);
    let rho = g.mul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale_re(1.0 / tr).hermitian_part()
}

pub fn random_density(d: usize, seed: u64) -> CMatrix {
    random_density_with_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::DEFAULT_CLASSIFY_TOL;
    use crate::matrix;
    use crate::testutil::test_density;

    #[test]
    fn amplitude_damping_limits() {
        let id = amplitude_damping(0.0).unwrap().to_map();
        assert!(id.choi().max_abs_diff(LinearMapRep::identity(2).choi()) < 1e-15);

        let constant = amplitude_damping(1.0).unwrap().to_map();
        let rho = test_density(2, 4);
        let out = constant.apply(&rho).unwrap();
        assert!(out.max_abs_diff(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-12);

        let half = amplitude_damping(0.5).unwrap().to_map();
        let out = half.apply(&CMatrix::diag_real(&[0.0, 1.0])).unwrap();
        assert!(out.max_abs_diff(&CMatrix::diag_real(&[0.5, 0.5])) < 1e-15);

        assert!(amplitude_damping(1.2).is_err());
    }

    #[test]
    fn gad_reduces_to_amplitude_damping_at_zero_occupation() {
        for y in [0.1, 0.5, 0.9] {
            let gad = generalized_amplitude_damping(y, 0.0).unwrap().to_map();
            let ad = amplitude_damping(y).unwrap().to_map();
            assert!(gad.choi().max_abs_diff(ad.choi()) < 1e-12);
        }
        let id = generalized_amplitude_damping(0.0, 0.7).unwrap().to_map();
        assert!(id.choi().max_abs_diff(LinearMapRep::identity(2).choi()) < 1e-12);
    }

    #[test]
    fn gad_is_complete_on_a_parameter_grid() {
        for iy in 0..5 {
            for inn in 0..5 {
                let (y, n) = (0.2 * iy as f64, 0.25 * inn as f64);
                let dev = generalized_amplitude_damping(y, n)
                    .unwrap()
                    .completeness_deviation();
                assert!(dev < 1e-12, "completeness deviation {dev} at y={y} n={n}");
            }
        }
    }

    #[test]
    fn gad_inverse_choi_matches_closed_form() {
        let (y, n) = (0.4, 0.3);
        let inv = generalized_amplitude_damping(y, n)
            .unwrap()
            .to_map()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let c = 1.0 / (1.0 - y);
        let s = 1.0 / (1.0 - y).sqrt();
        let expected = CMatrix::from_real_rows(&[
            &[(1.0 - y + n * y) * c, 0.0, 0.0, s],
            &[0.0, -n * y * c, 0.0, 0.0],
            &[0.0, 0.0, (n * y - y) * c, 0.0],
            &[s, 0.0, 0.0, (1.0 - n * y) * c],
        ]);
        assert!(inv.choi().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn weyl_operator_basics() {
        assert!(
            weyl_operator(3, 0, 0)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(3))
                < 1e-15
        );
        // d = 2: W_{1,1} = XZ = [[0, -1], [1, 0]].
        let xz = weyl_operator(2, 1, 1).unwrap();
        let expected = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(xz.max_abs_diff(&expected) < 1e-15);
        assert!(weyl_operator(2, 2, 0).is_err());
    }

    #[test]
    fn weyl_orthogonality() {
        for d in 2..=5 {
            let family = weyl_family(d).unwrap();
            for (a, wa) in family.iter().enumerate() {
                for (b, wb) in family.iter().enumerate() {
                    let overlap = wa.adjoint().mul(wb).trace();
                    let expected = if a == b { d as f64 } else { 0.0 };
                    assert!(
                        (overlap - C64::new(expected, 0.0)).norm() < 1e-12,
                        "d={d} pair ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn depolarizing_limits_and_classification() {
        let id = depolarizing(2, 0.0).unwrap();
        assert!(id.choi().max_abs_diff(LinearMapRep::identity(2).choi()) < 1e-14);

        // Complete twirl sends everything to the maximally mixed state.
        for d in [2usize, 3] {
            let full = depolarizing(d, 1.0).unwrap();
            let rho = test_density(d, 17 + d as u64);
            let out = full.apply(&rho).unwrap();
            assert!(out.max_abs_diff(&CMatrix::identity(d).scale_re(1.0 / d as f64)) < 1e-12);
        }

        let map = depolarizing(2, 0.1).unwrap();
        assert!(map.is_cptp(DEFAULT_CLASSIFY_TOL));
        assert!(matrix::is_psd(map.choi(), 1e-10).unwrap());
    }

    #[test]
    fn depolarizing_inverse_matches_mixed_unitary_closed_form() {
        for (d, eps) in [(2usize, 0.1), (2, 0.4), (3, 0.2)] {
            let inv = depolarizing(d, eps)
                .unwrap()
                .inverse(crate::channel::DEFAULT_COND_LIMIT)
                .unwrap();
            let spec = depolarizing_inverse_spec(d, eps).unwrap();
            assert!(inv.choi().max_abs_diff(spec.to_map().choi()) < 1e-11);
            // Identity coefficient of the closed form.
            let d2 = (d * d) as f64;
            let expected = 1.0 + (d2 - 1.0) * eps / (d2 * (1.0 - eps));
            assert!((spec.terms()[0].0 - expected).abs() < 1e-15);
        }

        // Orthogonal mixed-unitary maps realize the cost as a trace-norm
        // ratio: |J|_1 / d = (1 + (1 - 2/d^2) eps) / (1 - eps); at d = 2,
        // eps = 0.1 that is 1.05 / 0.9.
        let spec = depolarizing_inverse_spec(2, 0.1).unwrap();
        let ratio = matrix::trace_norm(spec.to_map().choi()).unwrap() / 2.0;
        assert!((ratio - 1.05 / 0.9).abs() < 1e-12, "ratio {ratio}");
    }

    #[test]
    fn dephasing_behaviour() {
        let id = dephasing_qubit(0.0).unwrap();
        assert!(id.choi().max_abs_diff(LinearMapRep::identity(2).choi()) < 1e-15);

        // eps = 1/2 annihilates off-diagonals.
        let rho = test_density(2, 23);
        let out = dephasing_qubit(0.5).unwrap().apply(&rho).unwrap();
        assert!(out[(0, 1)].norm() < 1e-14 && out[(1, 0)].norm() < 1e-14);
        assert!((out[(0, 0)] - rho[(0, 0)]).norm() < 1e-14);

        let inv = dephasing_qubit(0.25)
            .unwrap()
            .inverse(crate::channel::DEFAULT_COND_LIMIT)
            .unwrap();
        let spec = dephasing_inverse_spec(0.25).unwrap();
        assert!(inv.choi().max_abs_diff(spec.to_map().choi()) < 1e-12);
    }

    #[test]
    fn analytic_values_match_frozen_constants() {
        let cases = [
            (
                NamedFamily::AmplitudeDamping { epsilon: 0.5 },
                1.584_962_500_721_156,
            ),
            (
                NamedFamily::GeneralizedAmplitudeDamping { y: 0.5, n: 0.25 },
                1.321_928_094_887_362_4,
            ),
            (
                NamedFamily::Depolarizing {
                    dim: 2,
                    epsilon: 0.1,
                },
                0.222_392_421_336_448_02,
            ),
            (NamedFamily::DephasingQubit { epsilon: 0.25 }, 1.0),
        ];
        for (family, expected) in cases {
            assert!((family.analytic_nu_inverse().unwrap() - expected).abs() < 1e-12);
        }

        assert!(NamedFamily::AmplitudeDamping { epsilon: 1.0 }
            .analytic_nu_inverse()
            .is_err());
        assert!(NamedFamily::GeneralizedAmplitudeDamping { y: 1.0, n: 0.3 }
            .analytic_nu_inverse()
            .is_err());
        assert!(NamedFamily::DephasingQubit { epsilon: 0.5 }
            .analytic_nu_inverse()
            .is_err());
    }

    #[test]
    fn random_cptp_is_complete_and_deterministic() {
        for (d, k, seed) in [(2usize, 1usize, 7u64), (2, 3, 8), (3, 2, 9), (4, 2, 10)] {
            let set = random_cptp(d, k, seed).unwrap();
            assert!(set.completeness_deviation() < 1e-10);
            let again = random_cptp(d, k, seed).unwrap();
            for (a, b) in set.operators().iter().zip(again.operators()) {
                assert_eq!(a, b, "same seed must reproduce the channel exactly");
            }
        }
        // kraus_count = 1 gives a unitary channel.
        let u = random_cptp(3, 1, 11).unwrap();
        let op = &u.operators()[0];
        assert!(op.adjoint().mul(op).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        assert!(random_cptp(2, 0, 1).is_err());
    }

    #[test]
    fn random_hptp_classifies_hp_and_tp() {
        for seed in 0..8u64 {
            let map = random_hptp(2, seed);
            let class = map.classify(DEFAULT_CLASSIFY_TOL);
            assert!(class.is_hp && class.is_tp, "seed {seed}: {class:?}");
        }
    }

    #[test]
    fn random_density_is_a_state() {
        let rho = random_density(4, 3);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(matrix::is_psd(&rho, 1e-10).unwrap());
    }
}
