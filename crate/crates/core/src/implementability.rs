//! The measure layer: `nu` certificates with primal and dual witnesses,
//! optimal and canonical quasiprobability decompositions, trace-norm bounds,
//! and the robustness measure.
//!
//! `nu(N)` is the base-2 logarithm of the smallest total weight
//! `sum_a |eta_a|` over decompositions `N = sum_a eta_a O_a` into channels.
//! It is computed here by solving the primal and dual semidefinite programs
//! independently and certifying the gap between them; the linear-scale value
//! `2^nu` is the sampling-cost factor quoted throughout.

use serde::{Deserialize, Serialize};

use crate::channel::{LinearMapRep, DEFAULT_CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{self, partial_trace, tensor_product, trace_norm, CMatrix, Subsystem};
use crate::sdp::{self, DEFAULT_SOLVER_TOL};

/// Terms with `|eta|` at or below this are dropped from decompositions.
/// Solver residuals sit near 1e-9, so normalizing a block of that size would
/// amplify noise into the channel; dropping it perturbs the recombination by
/// less than the 1e-7 budget.
pub const TERM_COLLAPSE_TOL: f64 = 1e-8;

/// Tolerance used to classify decomposition channels as CPTP.
pub const CHANNEL_TOL: f64 = 1e-6;

/// Output of the implementability solve: the measure, the optimal primal
/// pair, the dual witnesses, and the certified gap between the two programs.
#[derive(Debug, Clone)]
pub struct NuCertificate {
    /// The measure, base-2 log of the optimal total weight, clamped below
    /// at zero (trace preservation forces `p1 + p2 >= 1`).
    pub nu: f64,
    pub p1: f64,
    pub p2: f64,
    pub j1: CMatrix,
    pub j2: CMatrix,
    pub dual_m: CMatrix,
    pub dual_n: CMatrix,
    pub dual_k: CMatrix,
    /// Primal objective `p1 + p2` as returned by the solver.
    pub primal_value: f64,
    /// Dual objective `tr[M J_N]` from the independent dual solve.
    pub dual_value: f64,
    /// `|primal - dual| / max(1, |primal|)` across the two solves.
    pub gap: f64,
}

impl NuCertificate {
    /// Linear-scale sampling cost `2^nu`.
    pub fn cost(&self) -> f64 {
        self.nu.exp2()
    }
}

/// Blend a solver dual triple `(M, N, K)` toward the strictly feasible
/// interior point `(0, I/d, I/d)` just far enough to cancel any PSD
/// violation of the two cone constraints. The trace constraints are
/// preserved exactly and the objective shrinks by the (tiny) blend weight.
fn repair_dual_witness(
    d: usize,
    m: CMatrix,
    n: CMatrix,
    k: CMatrix,
) -> (CMatrix, CMatrix, CMatrix) {
    let id = CMatrix::identity(d);
    let plus = m.add(&tensor_product(&n, &id)).hermitian_part();
    let minus = tensor_product(&k, &id).sub(&m).hermitian_part();
    let violation = (-matrix::min_eigenvalue(&plus).unwrap())
        .max(-matrix::min_eigenvalue(&minus).unwrap())
        .max(0.0);
    if violation == 0.0 {
        return (m, n, k);
    }
    let dd = d as f64;
    let theta = ((violation * dd) / (1.0 + violation * dd) * (1.0 + 1e-6)).min(1.0);
    let shift = id.scale_re(theta / dd);
    (
        m.scale_re(1.0 - theta),
        n.scale_re(1.0 - theta).add(&shift),
        k.scale_re(1.0 - theta).add(&shift),
    )
}

/// Compute `nu` with a full certificate. Solves the primal and dual programs
/// separately so the certificate carries witnesses for both sides.
pub fn nu(map: &LinearMapRep, tol: f64) -> Result<NuCertificate> {
    let (primal, pv) = sdp::build_primal_nu(map)?;
    let psol = primal.solve_optimal(tol)?;
    let (dual, dv) = sdp::build_dual_nu(map)?;
    let dsol = dual.solve_optimal(tol)?;

    let p1 = psol.scalar(pv.p1);
    let p2 = psol.scalar(pv.p2);
    let cost = (p1 + p2).max(1.0);
    let (dual_m, dual_n, dual_k) = repair_dual_witness(
        map.dim(),
        dsol.matrix(dv.m).clone(),
        dsol.matrix(dv.n).clone(),
        dsol.matrix(dv.k).clone(),
    );
    let dual_value = dual_m.re_trace_product(map.choi());
    let gap = (psol.primal_value - dual_value).abs() / psol.primal_value.abs().max(1.0);
    Ok(NuCertificate {
        nu: cost.log2(),
        p1,
        p2,
        j1: psol.matrix(pv.j1).clone(),
        j2: psol.matrix(pv.j2).clone(),
        dual_m,
        dual_n,
        dual_k,
        primal_value: psol.primal_value,
        dual_value,
        gap,
    })
}

/// `nu` at the default solver tolerance, without keeping the certificate.
pub fn nu_value(map: &LinearMapRep) -> Result<f64> {
    Ok(nu(map, DEFAULT_SOLVER_TOL)?.nu)
}

/// `nu` from the primal program alone; used by property sweeps where the
/// dual witness is not needed.
pub fn nu_primal_value(map: &LinearMapRep, tol: f64) -> Result<f64> {
    let (primal, _) = sdp::build_primal_nu(map)?;
    let sol = primal.solve_optimal(tol)?;
    Ok(sol.primal_value.max(1.0).log2())
}

/// A signed ensemble of channels `{(eta_a, O_a)}` whose weighted Choi sum
/// reproduces a target map. The total weight `sum |eta_a|` is the sampling
/// cost of simulating the target by sign-corrected channel sampling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuasiDecomposition {
    terms: Vec<(f64, LinearMapRep)>,
}

impl QuasiDecomposition {
    /// Validate and wrap a signed channel ensemble: terms must be non-empty,
    /// share one dimension, recombine to a trace-preserving weight (signed
    /// sum 1 within 1e-9), and each channel must be CPTP within
    /// [`CHANNEL_TOL`].
    pub fn new(terms: Vec<(f64, LinearMapRep)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("empty decomposition".into()));
        }
        let dim = terms[0].1.dim();
        for (eta, channel) in &terms {
            if channel.dim() != dim {
                return Err(Error::DimensionMismatch(
                    "decomposition terms act on different systems".into(),
                ));
            }
            if !eta.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            if !channel.is_cptp(CHANNEL_TOL) {
                return Err(Error::InvalidInput(format!(
                    "decomposition term with eta = {eta} is not a channel"
                )));
            }
        }
        let signed: f64 = terms.iter().map(|(eta, _)| eta).sum();
        if (signed - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "signed coefficients sum to {signed}, expected 1"
            )));
        }
        Ok(Self { terms })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }

    pub fn terms(&self) -> &[(f64, LinearMapRep)] {
        &self.terms
    }

    /// `sum |eta_a|`, the linear-scale sampling cost.
    pub fn total_cost(&self) -> f64 {
        self.terms.iter().map(|(eta, _)| eta.abs()).sum()
    }

    /// Base-2 log of the total cost.
    pub fn log_cost(&self) -> f64 {
        self.total_cost().log2()
    }

    /// The weighted Choi sum `sum_a eta_a J_a`.
    pub fn recombine(&self) -> CMatrix {
        let d = self.dim();
        let mut acc = CMatrix::zeros(d * d, d * d);
        for (eta, channel) in &self.terms {
            acc = acc.add(&channel.choi().scale_re(*eta));
        }
        acc
    }

    /// Largest entry deviation between the recombination and a target Choi.
    pub fn recombination_residual(&self, target: &LinearMapRep) -> f64 {
        self.recombine().max_abs_diff(target.choi())
    }
}

/// Nudge an almost-CPTP Choi operator onto the channel set by alternating
/// eigenvalue clipping with an exact marginal correction. Dividing a solver
/// block by a small weight can amplify its feasibility residual well past
/// the classification tolerance; this repairs that without re-solving. A
/// feasible input passes through unchanged.
fn project_to_channel(dim: usize, choi: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(dim);
    let mut x = choi.hermitian_part();
    for _ in 0..32 {
        let eig = matrix::eig_hermitian(&x).expect("hermitian by construction");
        let psd_violation = -eig.eigenvalues.last().copied().unwrap_or(0.0);
        if psd_violation > 0.0 {
            let clipped: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
            x = crate::matrix::HermitianEigen {
                eigenvalues: clipped,
                eigenvectors: eig.eigenvectors,
            }
            .reconstruct()
            .hermitian_part();
        }
        let delta = id.sub(&partial_trace(&x, (dim, dim), Subsystem::First).unwrap());
        let marginal_dev = delta.max_abs();
        if psd_violation.max(0.0) <= 1e-13 && marginal_dev <= 1e-13 {
            break;
        }
        x = x.add(&tensor_product(&delta, &id.scale_re(1.0 / dim as f64)));
    }
    x
}

/// Normalize a PSD block with marginal `p I` into a channel Choi, repairing
/// amplified solver residuals.
fn normalized_channel(dim: usize, block: &CMatrix, weight: f64) -> Result<LinearMapRep> {
    LinearMapRep::from_choi(dim, project_to_channel(dim, &block.scale_re(1.0 / weight)))
}

/// Turn a certificate's primal pair into the two-channel decomposition
/// `{(p1, J1/p1), (-p2, J2/p2)}`; a weight at or below
/// [`TERM_COLLAPSE_TOL`] collapses to a single CPTP term.
pub fn decompose_two_channel(cert: &NuCertificate) -> Result<QuasiDecomposition> {
    let dim = (cert.j1.rows() as f64).sqrt() as usize;
    if cert.p1 <= 0.0 {
        return Err(Error::InvalidInput(
            "certificate has non-positive leading weight".into(),
        ));
    }
    let mut terms = vec![(cert.p1, normalized_channel(dim, &cert.j1, cert.p1)?)];
    if cert.p2 > TERM_COLLAPSE_TOL {
        terms.push((-cert.p2, normalized_channel(dim, &cert.j2, cert.p2)?));
    }
    QuasiDecomposition::new(terms)
}

/// Solve for `nu` and return the optimal two-channel decomposition aligned
/// exactly with the target: the positive block is reconstructed as
/// `J_N + J2`, so the recombination reproduces the target Choi to floating
/// point rather than to solver tolerance.
pub fn optimal_decomposition(
    map: &LinearMapRep,
    tol: f64,
) -> Result<(NuCertificate, QuasiDecomposition)> {
    let cert = nu(map, tol)?;
    let d = map.dim();
    let p2 = cert.j2.trace().re / d as f64;
    let decomposition = if p2 > TERM_COLLAPSE_TOL {
        let ch2 = normalized_channel(d, &cert.j2, p2)?;
        // Rebuild the positive block from the repaired negative one; the
        // recombination then reproduces the target to floating point, so the
        // positive channel is used raw rather than re-projected.
        let j1 = map.choi().add(&ch2.choi().scale_re(p2));
        let p1 = j1.trace().re / d as f64;
        let ch1 = LinearMapRep::from_choi(d, j1.scale_re(1.0 / p1))?;
        QuasiDecomposition::new(vec![(p1, ch1), (-p2, ch2)])?
    } else {
        // The map itself is a channel up to solver noise.
        let p1 = map.choi().trace().re / d as f64;
        let ch1 = LinearMapRep::from_choi(d, map.choi().scale_re(1.0 / p1))?;
        QuasiDecomposition::new(vec![(p1, ch1)])?
    };
    Ok((cert, decomposition))
}

/// The always-feasible (generally suboptimal) decomposition through the
/// completely depolarizing channel: `eta1 = (|J_N|_1 + 1) d`, `J1 = I / d`,
/// `eta2 = eta1 - 1`, `J2 = (eta1 J1 - J_N) / eta2`. Its recombination is
/// exact by construction and its cost `2 eta1 - 1` upper-bounds `2^nu`.
pub fn canonical_decomposition(map: &LinearMapRep) -> Result<QuasiDecomposition> {
    map.require_hptp(DEFAULT_CLASSIFY_TOL)?;
    let d = map.dim();
    let norm = trace_norm(map.choi())?;
    let eta1 = (norm + 1.0) * d as f64;
    let eta2 = eta1 - 1.0;
    let j1 = CMatrix::identity(d * d).scale_re(1.0 / d as f64);
    let j2 = j1.scale_re(eta1).sub(map.choi()).scale_re(1.0 / eta2);
    QuasiDecomposition::new(vec![
        (eta1, LinearMapRep::from_choi(d, j1)?),
        (-eta2, LinearMapRep::from_choi(d, j2)?),
    ])
}

/// Merge a signed channel ensemble into at most two channels by grouping
/// terms by coefficient sign; convexity of the channel set keeps each group
/// a channel and the total cost is preserved exactly.
pub fn sign_split(terms: &[(f64, LinearMapRep)]) -> Result<QuasiDecomposition> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("empty ensemble".into()));
    }
    let dim = terms[0].1.dim();
    for (_, channel) in terms {
        if channel.dim() != dim {
            return Err(Error::DimensionMismatch(
                "ensemble terms act on different systems".into(),
            ));
        }
        if !channel.is_cptp(CHANNEL_TOL) {
            return Err(Error::InvalidInput("ensemble term is not a channel".into()));
        }
    }
    let mut pos_weight = 0.0;
    let mut neg_weight = 0.0;
    let mut pos_sum = CMatrix::zeros(dim * dim, dim * dim);
    let mut neg_sum = CMatrix::zeros(dim * dim, dim * dim);
    for (eta, channel) in terms {
        if *eta >= 0.0 {
            pos_weight += eta;
            pos_sum = pos_sum.add(&channel.choi().scale_re(*eta));
        } else {
            neg_weight += -eta;
            neg_sum = neg_sum.add(&channel.choi().scale_re(-eta));
        }
    }
    let mut out = Vec::new();
    if pos_weight > TERM_COLLAPSE_TOL {
        out.push((pos_weight, normalized_channel(dim, &pos_sum, pos_weight)?));
    }
    if neg_weight > TERM_COLLAPSE_TOL {
        out.push((-neg_weight, normalized_channel(dim, &neg_sum, neg_weight)?));
    }
    QuasiDecomposition::new(out)
}

/// Trace-norm sandwich on the sampling cost:
/// `|J_N|_1 / d <= 2^nu <= |J_N|_1`.
pub fn trace_norm_bounds(map: &LinearMapRep) -> Result<(f64, f64)> {
    let norm = trace_norm(map.choi())?;
    Ok((norm / map.dim() as f64, norm))
}

/// Robustness of physical implementability: the least `s >= 0` such that
/// `(N + s T) / (1 + s)` is a channel for some channel `T`. Satisfies
/// `2^nu = 2R + 1`.
pub fn robustness(map: &LinearMapRep, tol: f64) -> Result<f64> {
    let (p, vars) = sdp::build_robustness_primal(map)?;
    let sol = p.solve_optimal(tol)?;
    Ok(sol.scalar(vars.s).max(0.0))
}

/// One residual check inside a certificate report.
#[derive(Debug, Clone, Serialize)]
pub struct CertCheck {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Recomputed feasibility and consistency residuals for a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub checks: Vec<CertCheck>,
    pub passed: bool,
}

fn check(name: &'static str, residual: f64, threshold: f64) -> CertCheck {
    CertCheck {
        name,
        residual,
        threshold,
        passed: residual <= threshold,
    }
}

/// Recompute every invariant of a `nu` certificate against the map it was
/// produced for: primal feasibility, PSD-ness, weight normalization, dual
/// feasibility, and the duality gap.
pub fn validate_certificate(map: &LinearMapRep, cert: &NuCertificate) -> CertificateReport {
    let d = map.dim();
    let id = CMatrix::identity(d);
    let mut checks = Vec::new();

    let recombined = cert.j1.sub(&cert.j2);
    checks.push(check(
        "choi_decomposition",
        recombined.max_abs_diff(map.choi()),
        1e-7,
    ));
    let marg1 = partial_trace(&cert.j1, (d, d), Subsystem::First).unwrap();
    checks.push(check(
        "marginal_j1",
        marg1.max_abs_diff(&id.scale_re(cert.p1)),
        1e-7,
    ));
    let marg2 = partial_trace(&cert.j2, (d, d), Subsystem::First).unwrap();
    checks.push(check(
        "marginal_j2",
        marg2.max_abs_diff(&id.scale_re(cert.p2)),
        1e-7,
    ));
    // PSD variables carry the solver contract: min eigenvalue >= -10 tol at
    // the block's own scale.
    let min1 = matrix::min_eigenvalue(&cert.j1.hermitian_part()).unwrap();
    checks.push(check(
        "j1_psd",
        (-min1).max(0.0),
        1e-7 * cert.j1.frobenius_norm().max(1.0),
    ));
    let min2 = matrix::min_eigenvalue(&cert.j2.hermitian_part()).unwrap();
    checks.push(check(
        "j2_psd",
        (-min2).max(0.0),
        1e-7 * cert.j2.frobenius_norm().max(1.0),
    ));
    checks.push(check(
        "weight_difference",
        (cert.p1 - cert.p2 - 1.0).abs(),
        1e-6,
    ));
    checks.push(check(
        "cost_consistency",
        (cert.nu.exp2() - (cert.p1 + cert.p2)).abs(),
        1e-6,
    ));

    checks.push(check(
        "dual_trace_n",
        (cert.dual_n.trace().re - 1.0).abs(),
        1e-7,
    ));
    checks.push(check(
        "dual_trace_k",
        (cert.dual_k.trace().re - 1.0).abs(),
        1e-7,
    ));
    let plus = cert
        .dual_m
        .add(&tensor_product(&cert.dual_n, &id))
        .hermitian_part();
    let min_plus = matrix::min_eigenvalue(&plus).unwrap();
    checks.push(check("dual_feasible_plus", (-min_plus).max(0.0), 1e-8));
    let minus = tensor_product(&cert.dual_k, &id)
        .sub(&cert.dual_m)
        .hermitian_part();
    let min_minus = matrix::min_eigenvalue(&minus).unwrap();
    checks.push(check("dual_feasible_minus", (-min_minus).max(0.0), 1e-8));

    let dual_obj = cert.dual_m.re_trace_product(map.choi());
    let primal_obj = cert.p1 + cert.p2;
    checks.push(check(
        "duality_gap",
        (dual_obj - primal_obj).abs() / primal_obj.abs().max(1.0),
        1e-6,
    ));

    let passed = checks.iter().all(|c| c.passed);
    CertificateReport { checks, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::DEFAULT_COND_LIMIT;
    use crate::zoo;

    const LOG2_3: f64 = 1.584_962_500_721_156;

    fn inverse_of(map: LinearMapRep) -> LinearMapRep {
        map.inverse(DEFAULT_COND_LIMIT).unwrap()
    }

    #[test]
    fn nu_vanishes_on_channels() {
        for seed in [5u64, 6, 7] {
            let map = zoo::random_cptp(2, 2, seed).unwrap().to_map();
            let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
            assert!(cert.nu <= 1e-6, "nu = {} at seed {seed}", cert.nu);
            assert!(cert.nu >= 0.0);
            assert!(validate_certificate(&map, &cert).passed);
        }
    }

    #[test]
    fn nu_of_inverse_amplitude_damping() {
        let map = inverse_of(zoo::amplitude_damping(0.5).unwrap().to_map());
        let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
        assert!((cert.nu - LOG2_3).abs() < 1e-6);
        assert!(cert.gap < 1e-6);
        let report = validate_certificate(&map, &cert);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn nu_of_inverse_depolarizing_qutrit() {
        let map = inverse_of(zoo::depolarizing(3, 0.2).unwrap());
        let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
        // log2((1 + (1 - 2/9) * 0.2) / 0.8)
        assert!(
            (cert.nu - 0.530_514_716_698_779_6).abs() < 1e-6,
            "nu {}",
            cert.nu
        );
    }

    #[test]
    fn two_channel_decomposition_from_certificates() {
        // Identity map: single CPTP term.
        let id = LinearMapRep::identity(2);
        let cert = nu(&id, DEFAULT_SOLVER_TOL).unwrap();
        let dec = decompose_two_channel(&cert).unwrap();
        assert_eq!(dec.terms().len(), 1);
        assert!((dec.total_cost() - 1.0).abs() < 1e-6);

        // Inverse dephasing at eps = 1/4: weights (1.5, -0.5).
        let map = inverse_of(zoo::dephasing_qubit(0.25).unwrap());
        let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
        let dec = decompose_two_channel(&cert).unwrap();
        assert_eq!(dec.terms().len(), 2);
        assert!((dec.terms()[0].0 - 1.5).abs() < 1e-6);
        assert!((dec.terms()[1].0 + 0.5).abs() < 1e-6);
        assert!(dec.recombination_residual(&map) < 1e-7);
    }

    #[test]
    fn optimal_decomposition_recombines_exactly() {
        for seed in [11u64, 12] {
            let map = zoo::random_hptp(2, seed);
            let (cert, dec) = optimal_decomposition(&map, DEFAULT_SOLVER_TOL).unwrap();
            assert!(dec.recombination_residual(&map) < 1e-12, "seed {seed}");
            assert!((dec.total_cost() - cert.cost()).abs() < 1e-6);
        }
    }

    #[test]
    fn canonical_decomposition_is_valid_and_suboptimal() {
        // Identity on d = 2: |J|_1 = 2, eta1 = 6, cost 11.
        let id = LinearMapRep::identity(2);
        let dec = canonical_decomposition(&id).unwrap();
        assert!((dec.terms()[0].0 - 6.0).abs() < 1e-12);
        assert!((dec.total_cost() - 11.0).abs() < 1e-12);
        assert!(dec.recombination_residual(&id) < 1e-10);

        for map in [
            inverse_of(zoo::amplitude_damping(0.4).unwrap().to_map()),
            inverse_of(zoo::dephasing_qubit(0.3).unwrap()),
        ] {
            let dec = canonical_decomposition(&map).unwrap();
            assert!(dec.recombination_residual(&map) < 1e-10);
            let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
            assert!(dec.total_cost() >= cert.cost() - 1e-9);
        }
    }

    #[test]
    fn sign_split_preserves_cost() {
        let o1 = zoo::random_cptp(2, 2, 21).unwrap().to_map();
        let o2 = zoo::random_cptp(2, 2, 22).unwrap().to_map();
        let o3 = zoo::random_cptp(2, 2, 23).unwrap().to_map();

        // Already two terms: cost unchanged.
        let two = vec![(1.5, o1.clone()), (-0.5, o2.clone())];
        let split = sign_split(&two).unwrap();
        assert!((split.total_cost() - 2.0).abs() < 1e-12);

        // Three-term synthetic ensemble: cost 1.5 + 0.3 + 0.8 = 2.6.
        let three = vec![(1.5, o1.clone()), (0.3, o2.clone()), (-0.8, o3.clone())];
        let split = sign_split(&three).unwrap();
        assert_eq!(split.terms().len(), 2);
        assert!((split.total_cost() - 2.6).abs() < 1e-12);
        let mut direct = CMatrix::zeros(4, 4);
        for (eta, ch) in &three {
            direct = direct.add(&ch.choi().scale_re(*eta));
        }
        assert!(split.recombine().max_abs_diff(&direct) < 1e-12);

        // All-positive ensemble: a single convex channel.
        let convex = vec![(0.4, o1), (0.6, o2)];
        let split = sign_split(&convex).unwrap();
        assert_eq!(split.terms().len(), 1);
        assert!(split.terms()[0].1.is_cptp(1e-8));

        assert!(sign_split(&[]).is_err());
    }

    #[test]
    fn bounds_sandwich_the_cost() {
        // For a channel the lower bound is exactly 1.
        let cptp = zoo::amplitude_damping(0.3).unwrap().to_map();
        let (lower, upper) = trace_norm_bounds(&cptp).unwrap();
        assert!((lower - 1.0).abs() < 1e-10);
        assert!(upper >= 1.0);

        // Inverse amplitude damping near the singular point: cost 39,
        // trace norm 40, ratio 0.975.
        let map = inverse_of(zoo::amplitude_damping(0.95).unwrap().to_map());
        let (lower, upper) = trace_norm_bounds(&map).unwrap();
        let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
        let cost = cert.cost();
        assert!((cost - 39.0).abs() < 2e-4, "cost {cost}");
        assert!((upper - 40.0).abs() < 1e-8);
        assert!(lower - 1e-6 <= cost && cost <= upper + 1e-6);
        assert!(cost / upper >= 0.9);
    }

    #[test]
    fn robustness_equivalence() {
        let cptp = zoo::amplitude_damping(0.3).unwrap().to_map();
        assert!(robustness(&cptp, DEFAULT_SOLVER_TOL).unwrap() < 1e-6);

        let map = inverse_of(zoo::dephasing_qubit(0.25).unwrap());
        let r = robustness(&map, DEFAULT_SOLVER_TOL).unwrap();
        assert!((r - 0.5).abs() < 1e-6);

        for seed in [31u64, 32] {
            let map = zoo::random_hptp(2, seed);
            let r = robustness(&map, DEFAULT_SOLVER_TOL).unwrap();
            let cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
            assert!(
                (cert.cost() - (2.0 * r + 1.0)).abs() < 1e-6,
                "seed {seed}: 2^nu = {}, 2R+1 = {}",
                cert.cost(),
                2.0 * r + 1.0
            );
        }
    }

    #[test]
    fn validation_catches_perturbed_certificates() {
        let map = inverse_of(zoo::dephasing_qubit(0.25).unwrap());
        let mut cert = nu(&map, DEFAULT_SOLVER_TOL).unwrap();
        assert!(validate_certificate(&map, &cert).passed);

        cert.j1[(0, 0)] += crate::matrix::C64::new(1e-3, 0.0);
        let report = validate_certificate(&map, &cert);
        assert!(!report.passed);
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.iter().any(|c| c.name == "choi_decomposition"));
    }
}
