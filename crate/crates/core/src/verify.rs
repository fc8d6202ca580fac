//! Executable property suites: every structural fact the rest of the crate
//! relies on, run as seeded numerical sweeps with explicit residuals and
//! thresholds. The CLI `verify` subcommand and the acceptance tests both
//! drive these functions.
//!
//! Suites:
//!
//! * `analytic` -- SDP values against the closed-form inverse-map formulas on
//!   parameter grids for all four noise families.
//! * `duality` -- primal/dual agreement, hand-constructed dual witnesses,
//!   the subchannel relaxation, and the unsimplified robustness program.
//! * `properties` -- faithfulness, additivity, subadditivity, unitary
//!   invariance, superchannel monotonicity, trace-norm bounds and their
//!   saturation, robustness equivalence, and decomposition validity.
//! * `mitigation` -- estimator unbiasedness, shot-value boundedness,
//!   Hoeffding coverage, determinism, and cost monotonicity of the plan.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    apply_superchannel, KrausSet, LinearMapRep, MixedUnitarySpec, RectKraus, DEFAULT_COND_LIMIT,
};
use crate::error::{Error, Result};
use crate::implementability::{
    canonical_decomposition, nu, nu_primal_value, optimal_decomposition, robustness,
    trace_norm_bounds, validate_certificate,
};
use crate::matrix::{self, tensor_product, CMatrix};
use crate::mitigation::{self, DiagObservable, RunOptions};
use crate::sdp::{self, DEFAULT_SOLVER_TOL};
use crate::zoo::{self, NamedFamily};

/// Verification suite selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Properties,
    Analytic,
    Duality,
    Mitigation,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "properties" => Ok(Suite::Properties),
            "analytic" => Ok(Suite::Analytic),
            "duality" => Ok(Suite::Duality),
            "mitigation" => Ok(Suite::Mitigation),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!("unknown suite '{other}'"))),
        }
    }
}

/// One verified property: residual against threshold, with context.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn new(
        suite: &'static str,
        name: impl Into<String>,
        residual: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            passed: residual <= threshold,
            residual,
            threshold,
            detail: detail.into(),
        }
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    mitigation::shot_seed(seed, salt)
}

/// Run one suite (or all) with the given base seed.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    match suite {
        Suite::Analytic => analytic_suite(),
        Suite::Duality => duality_suite(seed),
        Suite::Properties => properties_suite(seed),
        Suite::Mitigation => mitigation_suite(seed),
        Suite::All => {
            let mut out = analytic_suite()?;
            out.extend(duality_suite(seed)?);
            out.extend(properties_suite(seed)?);
            out.extend(mitigation_suite(seed)?);
            Ok(out)
        }
    }
}

fn inverse_of(map: &LinearMapRep) -> Result<LinearMapRep> {
    map.inverse(DEFAULT_COND_LIMIT)
}

// ---------------------------------------------------------------------------
// Analytic suite
// ---------------------------------------------------------------------------

fn eps_grid(max_inclusive: f64) -> Vec<f64> {
    // 0.05, 0.10, ... up to the family's well-conditioned range.
    let mut out = Vec::new();
    let mut k = 1;
    loop {
        let eps = 0.05 * k as f64;
        if eps > max_inclusive + 1e-12 {
            break;
        }
        out.push(eps);
        k += 1;
    }
    out
}

/// Families and parameter grids for the analytic cross-validation.
pub fn analytic_grid() -> Vec<NamedFamily> {
    let mut grid = Vec::new();
    for eps in eps_grid(0.90) {
        grid.push(NamedFamily::AmplitudeDamping { epsilon: eps });
        grid.push(NamedFamily::Depolarizing {
            dim: 2,
            epsilon: eps,
        });
        grid.push(NamedFamily::Depolarizing {
            dim: 3,
            epsilon: eps,
        });
    }
    for eps in eps_grid(0.45) {
        grid.push(NamedFamily::DephasingQubit { epsilon: eps });
    }
    for iy in 0..5 {
        for inn in 0..5 {
            grid.push(NamedFamily::GeneralizedAmplitudeDamping {
                y: 0.1 + 0.2 * iy as f64,
                n: 0.25 * inn as f64,
            });
        }
    }
    grid
}

fn family_label(family: &NamedFamily) -> &'static str {
    match family {
        NamedFamily::AmplitudeDamping { .. } => "amplitude_damping",
        NamedFamily::GeneralizedAmplitudeDamping { .. } => "generalized_amplitude_damping",
        NamedFamily::Depolarizing { dim: 2, .. } => "depolarizing_d2",
        NamedFamily::Depolarizing { .. } => "depolarizing_d3",
        NamedFamily::DephasingQubit { .. } => "dephasing",
    }
}

fn analytic_suite() -> Result<Vec<Check>> {
    let mut worst: std::collections::BTreeMap<&'static str, (f64, usize, String)> =
        std::collections::BTreeMap::new();
    for family in analytic_grid() {
        let expected = family.analytic_nu_inverse()?;
        let map = inverse_of(&family.to_map()?)?;
        let cert = nu(&map, DEFAULT_SOLVER_TOL)?;
        let residual = (cert.nu - expected).abs();
        let entry = worst
            .entry(family_label(&family))
            .or_insert((0.0, 0, String::new()));
        entry.1 += 1;
        if residual >= entry.0 {
            *entry = (residual, entry.1, format!("worst at {family:?}"));
        }
    }
    Ok(worst
        .into_iter()
        .map(|(label, (residual, count, detail))| {
            Check::new(
                "analytic",
                format!("sdp_matches_formula/{label}"),
                residual,
                1e-5,
                format!("{count} instances; {detail}"),
            )
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Duality suite
// ---------------------------------------------------------------------------

/// The hand-constructed dual witness certifying the inverse amplitude
/// damping cost: feasible for every decay parameter and attaining
/// `(1 + eps) / (1 - eps)`. The same triple certifies the low-occupation
/// branch of generalized amplitude damping.
fn ad_dual_witness() -> (CMatrix, CMatrix, CMatrix) {
    let m = CMatrix::from_real_rows(&[
        &[1.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 1.0],
        &[1.0, 0.0, -2.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
    ]);
    let n = CMatrix::from_real_rows(&[&[-1.0, -1.0], &[-1.0, 2.0]]);
    let k = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]);
    (m, n, k)
}

/// Witness for the high-occupation branch (`n > 1/2`): the basis-reversal
/// conjugate of the low-occupation witness.
fn gad_high_occupation_witness() -> (CMatrix, CMatrix, CMatrix) {
    let m = CMatrix::from_real_rows(&[
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, -2.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 1.0],
    ]);
    let n = CMatrix::from_real_rows(&[&[2.0, -1.0], &[-1.0, -1.0]]);
    let k = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 1.0]]);
    (m, n, k)
}

/// Max dual-infeasibility of a witness triple: trace deviations and negative
/// eigenvalues of the two cone constraints.
fn witness_infeasibility(m: &CMatrix, n: &CMatrix, k: &CMatrix, d: usize) -> f64 {
    let id = CMatrix::identity(d);
    let tn = (n.trace().re - 1.0).abs();
    let tk = (k.trace().re - 1.0).abs();
    let plus = m.add(&tensor_product(n, &id)).hermitian_part();
    let minus = tensor_product(k, &id).sub(m).hermitian_part();
    let e_plus = (-matrix::min_eigenvalue(&plus).unwrap()).max(0.0);
    let e_minus = (-matrix::min_eigenvalue(&minus).unwrap()).max(0.0);
    tn.max(tk).max(e_plus).max(e_minus)
}

fn duality_test_maps(seed: u64) -> Result<Vec<(String, LinearMapRep)>> {
    let mut maps: Vec<(String, LinearMapRep)> = vec![
        ("identity".into(), LinearMapRep::identity(2)),
        (
            "inverse_ad_0.5".into(),
            inverse_of(&zoo::amplitude_damping(0.5)?.to_map())?,
        ),
        (
            "inverse_gad_0.5_0.25".into(),
            inverse_of(&zoo::generalized_amplitude_damping(0.5, 0.25)?.to_map())?,
        ),
        (
            "inverse_depolarizing_d2_0.3".into(),
            inverse_of(&zoo::depolarizing(2, 0.3)?)?,
        ),
        (
            "inverse_depolarizing_d3_0.2".into(),
            inverse_of(&zoo::depolarizing(3, 0.2)?)?,
        ),
        (
            "inverse_dephasing_0.25".into(),
            inverse_of(&zoo::dephasing_qubit(0.25)?)?,
        ),
        ("cptp_ad_0.4".into(), zoo::amplitude_damping(0.4)?.to_map()),
    ];
    for i in 0..20u64 {
        maps.push((
            format!("random_hptp_{i}"),
            zoo::random_hptp(2, mix(seed, 100 + i)),
        ));
    }
    Ok(maps)
}

fn duality_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // Strong duality with full certificate validation on every test map.
    let mut max_gap = 0.0f64;
    let mut max_gap_at = String::new();
    let mut cert_ok = true;
    let mut cert_detail = String::from("all certificates valid");
    let maps = duality_test_maps(seed)?;
    for (name, map) in &maps {
        let cert = nu(map, DEFAULT_SOLVER_TOL)?;
        if cert.gap >= max_gap {
            max_gap = cert.gap;
            max_gap_at = name.clone();
        }
        let report = validate_certificate(map, &cert);
        if !report.passed {
            cert_ok = false;
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            cert_detail = format!("{name}: failed {failed:?}");
        }
    }
    checks.push(Check::new(
        "duality",
        "nu_primal_dual_gap",
        max_gap,
        1e-6,
        format!("{} maps; worst at {max_gap_at}", maps.len()),
    ));
    checks.push(Check::new(
        "duality",
        "nu_certificates_validate",
        if cert_ok { 0.0 } else { 1.0 },
        0.5,
        cert_detail,
    ));

    // Robustness primal/dual agreement on the same maps.
    let mut max_rgap = 0.0f64;
    for (_, map) in &maps {
        let p = sdp::build_robustness_primal(map)?
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)?;
        let d = sdp::build_robustness_dual(map)?
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)?;
        max_rgap = max_rgap.max((p.primal_value - d.primal_value).abs());
    }
    checks.push(Check::new(
        "duality",
        "robustness_primal_dual_gap",
        max_rgap,
        1e-6,
        format!("{} maps", maps.len()),
    ));

    // Amplitude-damping witness across the decay grid: feasible, attains
    // (1 + eps)/(1 - eps), and never exceeds the SDP optimum.
    let (m, n, k) = ad_dual_witness();
    let mut worst_obj = 0.0f64;
    let mut worst_feas = 0.0f64;
    let mut worst_bound = 0.0f64;
    for eps in eps_grid(0.90) {
        let map = inverse_of(&zoo::amplitude_damping(eps)?.to_map())?;
        let objective = m.re_trace_product(map.choi());
        let expected = (1.0 + eps) / (1.0 - eps);
        worst_obj = worst_obj.max((objective - expected).abs() / expected);
        worst_feas = worst_feas.max(witness_infeasibility(&m, &n, &k, 2));
        let cost = nu_primal_value(&map, DEFAULT_SOLVER_TOL)?.exp2();
        worst_bound = worst_bound.max(objective - cost);
    }
    checks.push(Check::new(
        "duality",
        "ad_witness_objective",
        worst_obj,
        1e-9,
        "tr[M J] = (1+eps)/(1-eps) across the grid",
    ));
    checks.push(Check::new(
        "duality",
        "ad_witness_feasible",
        worst_feas,
        1e-12,
        "",
    ));
    checks.push(Check::new(
        "duality",
        "ad_witness_lower_bounds_sdp",
        worst_bound,
        1e-6,
        "feasible dual value never exceeds the optimum",
    ));

    // Generalized amplitude damping witnesses, both occupation branches.
    let (m2, n2, k2) = gad_high_occupation_witness();
    let mut worst_low = 0.0f64;
    let mut worst_high = 0.0f64;
    let mut worst_gad_feas = witness_infeasibility(&m2, &n2, &k2, 2);
    for iy in 1..=4 {
        let y = 0.2 * iy as f64;
        for inn in 0..=4 {
            let occ = 0.25 * inn as f64;
            let map = inverse_of(&zoo::generalized_amplitude_damping(y, occ)?.to_map())?;
            if occ <= 0.5 {
                let objective = m.re_trace_product(map.choi());
                let expected = (1.0 + y - 2.0 * occ * y) / (1.0 - y);
                worst_low = worst_low.max((objective - expected).abs() / expected);
                worst_gad_feas = worst_gad_feas.max(witness_infeasibility(&m, &n, &k, 2));
            }
            if occ >= 0.5 {
                let objective = m2.re_trace_product(map.choi());
                let expected = (1.0 - y + 2.0 * occ * y) / (1.0 - y);
                worst_high = worst_high.max((objective - expected).abs() / expected);
            }
        }
    }
    checks.push(Check::new(
        "duality",
        "gad_witness_low_occupation",
        worst_low,
        1e-9,
        "tr[M J] = (1 + y - 2ny)/(1 - y) for n <= 1/2",
    ));
    checks.push(Check::new(
        "duality",
        "gad_witness_high_occupation",
        worst_high,
        1e-9,
        "tr[M J] = (1 - y + 2ny)/(1 - y) for n >= 1/2",
    ));
    checks.push(Check::new(
        "duality",
        "gad_witness_feasible",
        worst_gad_feas,
        1e-12,
        "",
    ));

    // The unsimplified three-variable robustness program agrees with the
    // simplified one on a spot-check set.
    let mut spot: Vec<LinearMapRep> = vec![
        inverse_of(&zoo::dephasing_qubit(0.25)?)?,
        inverse_of(&zoo::amplitude_damping(0.4)?.to_map())?,
    ];
    for i in 0..3u64 {
        spot.push(zoo::random_hptp(2, mix(seed, 300 + i)));
    }
    let mut worst_simpl = 0.0f64;
    for map in &spot {
        let simplified = sdp::build_robustness_primal(map)?
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)?;
        let full = sdp::build_robustness_unsimplified(map)?
            .0
            .solve_optimal(DEFAULT_SOLVER_TOL)?;
        worst_simpl = worst_simpl.max((simplified.primal_value - full.primal_value).abs());
    }
    checks.push(Check::new(
        "duality",
        "robustness_simplification",
        worst_simpl,
        1e-6,
        format!("{} spot checks of the unsimplified program", spot.len()),
    ));

    Ok(checks)
}

// ---------------------------------------------------------------------------
// Properties suite
// ---------------------------------------------------------------------------

/// Sampled superchannel: an isometric embedding into `A (x) E` followed by a
/// random channel on the joint system and tracing out the environment.
fn random_superchannel(
    d: usize,
    d_env: usize,
    rng: &mut impl Rng,
) -> Result<(RectKraus, RectKraus)> {
    let isometry = zoo::random_isometry_with_rng(d * d_env, d, rng);
    let pre = RectKraus::new(d, d * d_env, vec![isometry])?;
    let joint = zoo::random_cptp_with_rng(d * d_env, 2, rng)?;
    let trace_out = RectKraus::trace_out_ancilla(d, d_env);
    let mut post_ops = Vec::new();
    for kraus in joint.operators() {
        for t in trace_out.operators() {
            post_ops.push(t.mul(kraus));
        }
    }
    let post = RectKraus::new(d * d_env, d, post_ops)?;
    Ok((pre, post))
}

fn properties_suite(seed: u64) -> Result<Vec<Check>> {
    let tol = DEFAULT_SOLVER_TOL;
    let samples = 20u64;
    let mut checks = Vec::new();

    // Faithfulness: channels have vanishing nu.
    let mut worst = 0.0f64;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 1000 + i));
        let kraus_count = 1 + (rng.random::<f64>() * 4.0) as usize;
        let map = zoo::random_cptp_with_rng(2, kraus_count, &mut rng)?.to_map();
        worst = worst.max(nu_primal_value(&map, tol)?);
    }
    checks.push(Check::new(
        "properties",
        "faithfulness_nu_of_channels",
        worst,
        1e-6,
        format!("{samples} random channels"),
    ));

    // Faithfulness, converse direction: a clearly positive nu certifies
    // that the map is not completely positive.
    let mut violations = 0usize;
    let mut considered = 0usize;
    for (_, map) in duality_test_maps(seed)? {
        if nu_primal_value(&map, tol)? > 1e-4 {
            considered += 1;
            if map.classify(1e-8).is_cp {
                violations += 1;
            }
        }
    }
    checks.push(Check::new(
        "properties",
        "faithfulness_positive_nu_not_cp",
        violations as f64,
        0.5,
        format!("{considered} maps with nu > 1e-4"),
    ));

    // Additivity under tensor products (4x4 joint system).
    let mut worst = 0.0f64;
    for i in 0..samples {
        let a = zoo::random_hptp(2, mix(seed, 2000 + 2 * i));
        let b = zoo::random_hptp(2, mix(seed, 2001 + 2 * i));
        let joint = LinearMapRep::tensor(&a, &b);
        let lhs = nu_primal_value(&joint, tol)?;
        let rhs = nu_primal_value(&a, tol)? + nu_primal_value(&b, tol)?;
        worst = worst.max((lhs - rhs).abs());
    }
    checks.push(Check::new(
        "properties",
        "additivity_tensor",
        worst,
        1e-4,
        format!("{samples} random pairs, 16x16 Choi solves"),
    ));

    // Subadditivity under composition.
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples {
        let a = zoo::random_hptp(2, mix(seed, 3000 + 2 * i));
        let b = zoo::random_hptp(2, mix(seed, 3001 + 2 * i));
        let composed = LinearMapRep::compose(&a, &b)?;
        let excess = nu_primal_value(&composed, tol)?
            - nu_primal_value(&a, tol)?
            - nu_primal_value(&b, tol)?;
        worst = worst.max(excess);
    }
    checks.push(Check::new(
        "properties",
        "subadditivity_composition",
        worst,
        1e-6,
        format!("{samples} random pairs; residual is max excess"),
    ));

    // Invariance under unitary pre- and post-processing.
    let mut worst = 0.0f64;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 4000 + i));
        let map = zoo::random_hptp_with_rng(2, &mut rng);
        let u = KrausSet::new(2, vec![zoo::random_unitary_with_rng(2, &mut rng)])?.to_map();
        let v = KrausSet::new(2, vec![zoo::random_unitary_with_rng(2, &mut rng)])?.to_map();
        let conjugated = LinearMapRep::compose(&u, &LinearMapRep::compose(&map, &v)?)?;
        worst = worst.max((nu_primal_value(&conjugated, tol)? - nu_primal_value(&map, tol)?).abs());
    }
    checks.push(Check::new(
        "properties",
        "unitary_invariance",
        worst,
        1e-6,
        format!("{samples} random maps with random unitaries"),
    ));

    // Superchannels never increase the measure.
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 5000 + i));
        let map = zoo::random_hptp_with_rng(2, &mut rng);
        let d_env = 1 + (i % 2) as usize;
        let (pre, post) = random_superchannel(2, d_env, &mut rng)?;
        let transformed = apply_superchannel(&map, &pre, &post)?;
        worst = worst.max(nu_primal_value(&transformed, tol)? - nu_primal_value(&map, tol)?);
    }
    checks.push(Check::new(
        "properties",
        "superchannel_monotonicity",
        worst,
        1e-6,
        format!("{samples} sampled superchannels, d_env in {{1, 2}}"),
    ));

    // Trace-norm sandwich on every test map.
    let mut worst = f64::NEG_INFINITY;
    let maps = duality_test_maps(seed)?;
    for (_, map) in &maps {
        let (lower, upper) = trace_norm_bounds(map)?;
        let cost = nu_primal_value(map, tol)?.exp2();
        worst = worst.max(lower - cost).max(cost - upper);
    }
    checks.push(Check::new(
        "properties",
        "trace_norm_bounds",
        worst,
        1e-6,
        format!("{} maps; residual is max bound violation", maps.len()),
    ));

    // Exact saturation of the lower bound for signed mixtures of mutually
    // orthogonal unitaries.
    let mut worst = 0.0f64;
    let mut mixed: Vec<LinearMapRep> = vec![
        zoo::depolarizing_inverse_spec(2, 0.3)?.to_map(),
        zoo::depolarizing_inverse_spec(3, 0.2)?.to_map(),
        zoo::dephasing_inverse_spec(0.25)?.to_map(),
        zoo::dephasing_inverse_spec(0.4)?.to_map(),
    ];
    for i in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 6000 + i));
        let s = 0.1 + 0.4 * rng.random::<f64>();
        let weyl = zoo::weyl_family(2)?;
        let mut terms: Vec<(f64, CMatrix)> = vec![(1.0 + s, weyl[0].clone())];
        for w in &weyl[1..] {
            terms.push((-s / 3.0, w.clone()));
        }
        mixed.push(MixedUnitarySpec::new(2, terms)?.to_map());
    }
    for map in &mixed {
        let (lower, _) = trace_norm_bounds(map)?;
        let cost = nu_primal_value(map, tol)?.exp2();
        worst = worst.max((cost - lower).abs());
    }
    checks.push(Check::new(
        "properties",
        "mixed_unitary_lower_bound_saturation",
        worst,
        1e-6,
        format!("{} orthogonal mixed-unitary maps", mixed.len()),
    ));

    // Numerical probe of the upper bound becoming tight for inverse
    // amplitude damping near the singular point.
    let map = inverse_of(&zoo::amplitude_damping(0.95)?.to_map())?;
    let (_, upper) = trace_norm_bounds(&map)?;
    let ratio = nu_primal_value(&map, tol)?.exp2() / upper;
    checks.push(Check::new(
        "properties",
        "ad_upper_bound_ratio_at_0.95",
        0.9 - ratio,
        0.0,
        format!("2^nu / |J|_1 = {ratio:.6}, required >= 0.9"),
    ));

    // Subchannel relaxation does not change the optimum.
    let mut worst = 0.0f64;
    for i in 0..samples {
        let map = zoo::random_hptp(2, mix(seed, 7000 + i));
        let channel = sdp::build_primal_nu(&map)?
            .0
            .solve_optimal(tol)?
            .primal_value;
        let subchannel = sdp::build_cptn_nu(&map)?.0.solve_optimal(tol)?.primal_value;
        worst = worst.max((channel - subchannel).abs());
    }
    checks.push(Check::new(
        "properties",
        "subchannel_relaxation_equality",
        worst,
        1e-6,
        format!("{samples} random HPTP maps"),
    ));

    // Robustness equivalence 2^nu = 2R + 1, pinned at the dephasing point.
    let mut worst = 0.0f64;
    for (_, map) in &maps {
        let r = robustness(map, tol)?;
        let cost = nu_primal_value(map, tol)?.exp2();
        worst = worst.max((cost - (2.0 * r + 1.0)).abs());
    }
    let r_deph = robustness(&inverse_of(&zoo::dephasing_qubit(0.25)?)?, tol)?;
    checks.push(Check::new(
        "properties",
        "robustness_equivalence",
        worst,
        1e-6,
        format!("{} maps", maps.len()),
    ));
    checks.push(Check::new(
        "properties",
        "robustness_inverse_dephasing_quarter",
        (r_deph - 0.5).abs(),
        1e-6,
        "R = 1/2 at eps = 1/4",
    ));

    // Decompositions: recombination residuals and canonical suboptimality.
    let mut worst_recombine = 0.0f64;
    let mut worst_order = f64::NEG_INFINITY;
    for (_, map) in &maps {
        let (cert, optimal) = optimal_decomposition(map, tol)?;
        let canonical = canonical_decomposition(map)?;
        worst_recombine = worst_recombine
            .max(optimal.recombination_residual(map))
            .max(canonical.recombination_residual(map));
        worst_order = worst_order.max(cert.cost() - canonical.total_cost());
    }
    checks.push(Check::new(
        "properties",
        "decomposition_recombination",
        worst_recombine,
        1e-7,
        format!("optimal and canonical, {} maps", maps.len()),
    ));
    checks.push(Check::new(
        "properties",
        "canonical_cost_dominates_optimal",
        worst_order,
        1e-9,
        "residual is max( optimal - canonical )",
    ));

    Ok(checks)
}

// ---------------------------------------------------------------------------
// Mitigation suite
// ---------------------------------------------------------------------------

fn mitigation_test_noises() -> Result<Vec<(String, LinearMapRep)>> {
    let deph = zoo::dephasing_qubit(0.25)?;
    let ad = zoo::amplitude_damping(0.3)?.to_map();
    Ok(vec![
        ("amplitude_damping_0.3".into(), ad.clone()),
        ("dephasing_0.25".into(), deph.clone()),
        ("depolarizing_d2_0.1".into(), zoo::depolarizing(2, 0.1)?),
        (
            "gad_0.5_0.25".into(),
            zoo::generalized_amplitude_damping(0.5, 0.25)?.to_map(),
        ),
        ("dephasing_x_ad".into(), LinearMapRep::tensor(&deph, &ad)),
        (
            "depolarizing_x_dephasing".into(),
            LinearMapRep::tensor(&zoo::depolarizing(2, 0.1)?, &deph),
        ),
    ])
}

fn mitigation_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // Unbiasedness of the exact enumeration oracle over the noise grid.
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for (ni, (_, noise)) in mitigation_test_noises()?.iter().enumerate() {
        let d = noise.dim();
        let n_qubits = d.trailing_zeros() as usize;
        let inv = inverse_of(noise)?;
        let (_, dec) = optimal_decomposition(&inv, DEFAULT_SOLVER_TOL)?;
        let mut observables = vec![DiagObservable::parity(n_qubits)];
        for oi in 0..2u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 8000 + 10 * ni as u64 + oi));
            let values: Vec<f64> = (0..d).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            observables.push(DiagObservable::new(n_qubits, values)?);
        }
        for si in 0..3u64 {
            let rho = zoo::random_density(d, mix(seed, 8800 + 10 * ni as u64 + si));
            for obs in &observables {
                let target: f64 = (0..d).map(|x| rho[(x, x)].re * obs.value(x)).sum();
                let exact = mitigation::exact_estimator_mean(&rho, noise, obs, &dec)?;
                worst = worst.max((exact - target).abs());
                count += 1;
            }
        }
    }
    checks.push(Check::new(
        "mitigation",
        "exact_estimator_unbiased",
        worst,
        1e-10,
        format!("{count} (noise, state, observable) triples"),
    ));

    // Boundedness of recorded shot values.
    let noise = zoo::dephasing_qubit(0.25)?;
    let inv = inverse_of(&noise)?;
    let (_, dec) = optimal_decomposition(&inv, DEFAULT_SOLVER_TOL)?;
    let cost = dec.total_cost();
    let plan = mitigation::plan(dec, 0.1, 0.1)?;
    let rho = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let parity = DiagObservable::parity(1);
    let report = mitigation::run(
        &rho,
        &noise,
        &parity,
        &plan,
        mix(seed, 9000),
        RunOptions {
            record_shots: true,
            parallel: false,
        },
    )?;
    let max_x = report
        .per_shot
        .as_ref()
        .unwrap()
        .iter()
        .map(|r| r.x_value.abs())
        .fold(0.0f64, f64::max);
    checks.push(Check::new(
        "mitigation",
        "shot_values_bounded_by_cost",
        max_x - cost,
        1e-12,
        format!("max |X| = {max_x:.6}, 2^nu = {cost:.6}"),
    ));

    // Hoeffding coverage: empirical failure rate over seeded repetitions
    // stays within the planned bound plus binomial slack.
    let repetitions = 200u64;
    for (label, noise, rho, target) in [
        (
            "hoeffding_coverage_dephasing",
            zoo::dephasing_qubit(0.25)?,
            CMatrix::diag_real(&[1.0, 0.0]),
            1.0,
        ),
        (
            "hoeffding_coverage_ad_plus",
            zoo::amplitude_damping(0.3)?.to_map(),
            CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]),
            0.0,
        ),
    ] {
        let (delta, eps_fail) = (0.05, 0.05);
        let inv = inverse_of(&noise)?;
        let (_, dec) = optimal_decomposition(&inv, DEFAULT_SOLVER_TOL)?;
        let plan = mitigation::plan(dec, delta, eps_fail)?;
        let mut failures = 0u64;
        for rep in 0..repetitions {
            let report = mitigation::run(
                &rho,
                &noise,
                &parity,
                &plan,
                mix(seed, 9100 + rep),
                RunOptions::default(),
            )?;
            if (report.estimate - target).abs() > delta {
                failures += 1;
            }
        }
        let rate = failures as f64 / repetitions as f64;
        checks.push(Check::new(
            "mitigation",
            label,
            rate,
            eps_fail + 0.03,
            format!("{failures}/{repetitions} failures at M = {}", plan.shots),
        ));
    }

    // Determinism: identical seeds give identical serialized reports, and
    // parallel execution reproduces sequential output exactly.
    let noise = zoo::dephasing_qubit(0.25)?;
    let inv = inverse_of(&noise)?;
    let (_, dec) = optimal_decomposition(&inv, DEFAULT_SOLVER_TOL)?;
    let plan = mitigation::plan(dec, 0.1, 0.1)?;
    let opts = RunOptions {
        record_shots: true,
        parallel: false,
    };
    let a = mitigation::run(&rho, &noise, &parity, &plan, mix(seed, 9500), opts)?;
    let b = mitigation::run(&rho, &noise, &parity, &plan, mix(seed, 9500), opts)?;
    let c = mitigation::run(
        &rho,
        &noise,
        &parity,
        &plan,
        mix(seed, 9500),
        RunOptions {
            record_shots: true,
            parallel: true,
        },
    )?;
    let identical = a == b && a == c;
    checks.push(Check::new(
        "mitigation",
        "seeded_determinism",
        if identical { 0.0 } else { 1.0 },
        0.5,
        "two sequential runs and one parallel run compared",
    ));

    // A suboptimal decomposition always plans more shots when nu > 0.
    let canonical = canonical_decomposition(&inv)?;
    let (_, optimal) = optimal_decomposition(&inv, DEFAULT_SOLVER_TOL)?;
    let m_canonical = mitigation::plan(canonical, 0.05, 0.05)?.shots;
    let m_optimal = mitigation::plan(optimal, 0.05, 0.05)?.shots;
    checks.push(Check::new(
        "mitigation",
        "canonical_plan_needs_more_shots",
        if m_canonical > m_optimal { 0.0 } else { 1.0 },
        0.5,
        format!("canonical M = {m_canonical}, optimal M = {m_optimal}"),
    ));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!(Suite::parse("analytic").unwrap(), Suite::Analytic);
        assert_eq!(Suite::parse("all").unwrap(), Suite::All);
        assert!(Suite::parse("bogus").is_err());
    }

    #[test]
    fn analytic_grid_is_large_enough() {
        // The cross-validation needs a substantial instance count.
        assert!(analytic_grid().len() >= 40);
    }

    #[test]
    fn witnesses_are_feasible() {
        let (m, n, k) = ad_dual_witness();
        assert!(witness_infeasibility(&m, &n, &k, 2) <= 1e-12);
        let (m, n, k) = gad_high_occupation_witness();
        assert!(witness_infeasibility(&m, &n, &k, 2) <= 1e-12);
    }

    #[test]
    fn sampled_superchannels_preserve_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d_env in [1usize, 2] {
            let (pre, post) = random_superchannel(2, d_env, &mut rng).unwrap();
            let n = zoo::amplitude_damping(0.2).unwrap().to_map();
            let out = apply_superchannel(&n, &pre, &post).unwrap();
            assert!(out.is_cptp(1e-9));
        }
    }
}
