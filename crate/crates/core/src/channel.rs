//! Linear maps on a d-dimensional system, stored canonically as Choi
//! operators, with conversions to Kraus and superoperator form, composition,
//! tensoring, inversion, CP/TP/HP classification and superchannel
//! conjugation.
//!
//! # Conventions
//!
//! The Choi operator of a map `N` is `J = sum_{ij} |i><j| (x) N(|i><j|)`: the
//! first tensor factor carries the input copy, the second the output, and the
//! composite basis index is `(i, k) = i*d + k`. Under this ordering:
//!
//! * `N` is Hermitian-preserving iff `J = J^dag`;
//! * `N` is trace-preserving iff the partial trace over the *second* factor
//!   is the identity;
//! * `N` is completely positive iff `J >= 0`;
//! * `N` is trace non-increasing iff that partial trace is `<= I`.
//!
//! Vectorization is row-major, `vec(rho)[i*d + j] = rho[i, j]`, which fixes
//! the action `N(rho)[b, b'] = sum_{c,a} rho[c, a] * J[c*d + b, a*d + b']`
//! (the transpose of `rho` pairs with the input-copy factor) and the
//! Choi/superoperator interconversion as the exact index shuffle
//!
//! ```text
//! S[b*d + b', c*d + a] = J[c*d + b, a*d + b'].
//! ```
//!
//! Applying the shuffle twice is the identity, so the conversion is a
//! bijection with no arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    self, partial_trace, tensor_product, CMatrix, Subsystem, C64, HERMITICITY_TOL,
};

/// Default tolerance for CP/TP/HP classification checks.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// Default condition-number limit above which a superoperator is treated as
/// non-invertible (constant channels, depolarizing at eps -> 1).
pub const DEFAULT_COND_LIMIT: f64 = 1e12;

/// A linear map on a d-dimensional system, stored as its d^2 x d^2 Choi
/// operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMapRep {
    dim: usize,
    choi: CMatrix,
}

/// Outcome of the Choi-criterion checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClass {
    /// Hermitian-preserving: `J = J^dag`.
    pub is_hp: bool,
    /// Trace-preserving: output marginal of `J` equals `I`.
    pub is_tp: bool,
    /// Completely positive: `J >= 0`.
    pub is_cp: bool,
    /// A valid subchannel: completely positive with output marginal `<= I`.
    /// (The marginal condition alone would be implied by `is_tp`.)
    pub is_tn: bool,
}

impl MapClass {
    pub fn is_cptp(&self) -> bool {
        self.is_cp && self.is_tp
    }

    pub fn is_hptp(&self) -> bool {
        self.is_hp && self.is_tp
    }
}

impl LinearMapRep {
    /// Wrap an existing Choi operator. The matrix must be `d^2 x d^2`.
    pub fn from_choi(dim: usize, choi: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if choi.rows() != n || choi.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Choi operator for dimension {dim} must be {n}x{n}, got {}x{}",
                choi.rows(),
                choi.cols()
            )));
        }
        Ok(Self { dim, choi })
    }

    /// The identity map: `J = |Gamma><Gamma|` with `|Gamma> = sum_i |ii>`.
    pub fn identity(dim: usize) -> Self {
        let choi = CMatrix::from_fn(dim * dim, dim * dim, |row, col| {
            let (i, k) = (row / dim, row % dim);
            let (j, l) = (col / dim, col % dim);
            if i == k && j == l {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { dim, choi }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> CMatrix {
        self.choi
    }

    /// Partial trace of the Choi operator over the output factor; equals the
    /// identity exactly when the map is trace-preserving.
    pub fn output_marginal(&self) -> CMatrix {
        partial_trace(&self.choi, (self.dim, self.dim), Subsystem::First)
            .expect("Choi dimensions are consistent by construction")
    }

    /// Apply the map to a `d x d` operator.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.dim;
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "state is {}x{}, map expects {d}x{d}",
                rho.rows(),
                rho.cols()
            )));
        }
        let mut out = CMatrix::zeros(d, d);
        for b in 0..d {
            for b2 in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..d {
                    for a in 0..d {
                        acc += rho[(c, a)] * self.choi[(c * d + b, a * d + b2)];
                    }
                }
                out[(b, b2)] = acc;
            }
        }
        Ok(out)
    }

    /// The `d^2 x d^2` matrix `S` with `S vec(rho) = vec(N(rho))` for
    /// row-major `vec`.
    pub fn superoperator(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d * d, d * d, |row, col| {
            let (b, b2) = (row / d, row % d);
            let (c, a) = (col / d, col % d);
            self.choi[(c * d + b, a * d + b2)]
        })
    }

    /// Inverse of [`superoperator`](Self::superoperator): the same index
    /// shuffle applied to a superoperator matrix.
    pub fn from_superoperator(dim: usize, s: &CMatrix) -> Result<Self> {
        let n = dim * dim;
        if s.rows() != n || s.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "superoperator for dimension {dim} must be {n}x{n}, got {}x{}",
                s.rows(),
                s.cols()
            )));
        }
        let choi = CMatrix::from_fn(n, n, |row, col| {
            let (c, b) = (row / dim, row % dim);
            let (a, b2) = (col / dim, col % dim);
            s[(b * dim + b2, c * dim + a)]
        });
        Ok(Self { dim, choi })
    }

    /// Composition `outer . inner`, computed as a superoperator product.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.dim != inner.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose maps of dimensions {} and {}",
                outer.dim, inner.dim
            )));
        }
        let s = outer.superoperator().mul(&inner.superoperator());
        Self::from_superoperator(outer.dim, &s)
    }

    /// Tensor product of two maps, with the subsystem interleave applied so
    /// the result is a Choi operator for the joint system in the convention
    /// above (joint input copy first, joint output second).
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let (d1, d2) = (a.dim, b.dim);
        let d = d1 * d2;
        let choi = CMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            let (i1, i2) = (i / d2, i % d2);
            let (k1, k2) = (k / d2, k % d2);
            let (j1, j2) = (j / d2, j % d2);
            let (l1, l2) = (l / d2, l % d2);
            a.choi[(i1 * d1 + k1, j1 * d1 + l1)] * b.choi[(i2 * d2 + k2, j2 * d2 + l2)]
        });
        Self { dim: d, choi }
    }

    /// Classify the map against the four Choi criteria, each within `tol`.
    pub fn classify(&self, tol: f64) -> MapClass {
        let is_hp = self.choi.hermiticity_deviation() <= tol;
        let marginal = self.output_marginal();
        let id = CMatrix::identity(self.dim);
        let is_tp = marginal.max_abs_diff(&id) <= tol;
        let herm = self.choi.hermitian_part();
        let spectrum = matrix::eig_hermitian(&herm)
            .expect("hermitian part is exactly Hermitian")
            .eigenvalues;
        let is_cp = is_hp && spectrum.last().copied().unwrap_or(0.0) >= -tol;
        let slack = marginal.sub(&id).hermitian_part();
        let max_slack = matrix::eig_hermitian(&slack)
            .expect("hermitian part is exactly Hermitian")
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(0.0);
        let is_tn = is_cp && max_slack <= tol;
        MapClass {
            is_hp,
            is_tp,
            is_cp,
            is_tn,
        }
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        self.classify(tol).is_cptp()
    }

    /// Error unless the map is Hermitian- and trace-preserving within `tol`.
    pub fn require_hptp(&self, tol: f64) -> Result<()> {
        let class = self.classify(tol);
        if !class.is_hp {
            return Err(Error::NotHptp(format!(
                "Choi operator is not Hermitian (deviation {:.3e})",
                self.choi.hermiticity_deviation()
            )));
        }
        if !class.is_tp {
            let id = CMatrix::identity(self.dim);
            return Err(Error::NotHptp(format!(
                "map is not trace-preserving (marginal deviation {:.3e})",
                self.output_marginal().max_abs_diff(&id)
            )));
        }
        Ok(())
    }

    /// The linear inverse map, obtained by inverting the superoperator.
    ///
    /// Requires a trace-preserving input and a superoperator condition number
    /// within `cond_limit`; constant channels and the completely depolarizing
    /// channel are rejected here. The inverse of an HP map is HP, so the
    /// output Choi is symmetrized to remove inversion roundoff in that case.
    pub fn inverse(&self, cond_limit: f64) -> Result<Self> {
        let id = CMatrix::identity(self.dim);
        if self.output_marginal().max_abs_diff(&id) > DEFAULT_CLASSIFY_TOL {
            return Err(Error::NotHptp(
                "inverse requires a trace-preserving map".into(),
            ));
        }
        let s = self.superoperator();
        let cond = matrix::condition_number(&s);
        if !cond.is_finite() || cond > cond_limit {
            return Err(Error::NotInvertible {
                cond,
                limit: cond_limit,
            });
        }
        let s_inv = matrix::invert(&s).map_err(|_| Error::NotInvertible {
            cond,
            limit: cond_limit,
        })?;
        let mut inv = Self::from_superoperator(self.dim, &s_inv)?;
        if self.choi.hermiticity_deviation() <= HERMITICITY_TOL {
            inv.choi = inv.choi.hermitian_part();
        }
        Ok(inv)
    }
}

/// A Kraus representation: a list of `d x d` operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(dim: usize, operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidInput("empty Kraus set".into()));
        }
        for op in &operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `max |sum_K K^dag K - I|`; zero for a trace-preserving set.
    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Choi operator `J = sum_{ij} |i><j| (x) (sum_K K|i><j|K^dag)`, i.e.
    /// `J[(i,k),(j,l)] = sum_K K[k,i] conj(K[l,j])`. Positive semidefinite
    /// for any Kraus set.
    pub fn to_map(&self) -> LinearMapRep {
        let d = self.dim;
        let choi = CMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            self.operators
                .iter()
                .map(|op| op[(k, i)] * op[(l, j)].conj())
                .sum()
        });
        LinearMapRep { dim: d, choi }
    }
}

/// Choi operator of a Kraus set.
pub fn choi_from_kraus(k: &KrausSet) -> LinearMapRep {
    k.to_map()
}

/// A signed mixture of unitary conjugations `sum_i r_i U_i . U_i^dag` with
/// real coefficients summing to one. Coefficients may be negative, so this
/// describes HPTP maps in general, not only channels.
#[derive(Debug, Clone)]
pub struct MixedUnitarySpec {
    dim: usize,
    terms: Vec<(f64, CMatrix)>,
}

impl MixedUnitarySpec {
    /// Validates that every operator is unitary within `1e-10` and that the
    /// coefficients sum to one within `1e-12`.
    pub fn new(dim: usize, terms: Vec<(f64, CMatrix)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("empty mixed-unitary spec".into()));
        }
        let id = CMatrix::identity(dim);
        for (_, u) in &terms {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "unitary is {}x{}, expected {dim}x{dim}",
                    u.rows(),
                    u.cols()
                )));
            }
            let dev = u.adjoint().mul(u).max_abs_diff(&id);
            if dev > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "operator is not unitary: |U^dag U - I| = {dev:.3e}"
                )));
            }
        }
        let total: f64 = terms.iter().map(|(r, _)| r).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixed-unitary coefficients sum to {total}, expected 1"
            )));
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(f64, CMatrix)] {
        &self.terms
    }

    /// Choi operator `sum_i r_i (I (x) U_i) |Gamma><Gamma| (I (x) U_i)^dag`.
    pub fn to_map(&self) -> LinearMapRep {
        let d = self.dim;
        let mut choi = CMatrix::zeros(d * d, d * d);
        for (r, u) in &self.terms {
            let single = KrausSet::new(d, vec![u.clone()])
                .expect("validated unitary")
                .to_map();
            choi = choi.add(&single.choi.scale_re(*r));
        }
        LinearMapRep { dim: d, choi }
    }
}

/// Choi operator of a signed mixed-unitary map.
pub fn choi_from_mixed_unitary(s: &MixedUnitarySpec) -> LinearMapRep {
    s.to_map()
}

/// A completely positive map between systems of different dimensions, given
/// by rectangular Kraus operators (`dim_out x dim_in`). Used internally to
/// realize superchannels; the public [`LinearMapRep`] stays square.
#[derive(Debug, Clone)]
pub struct RectKraus {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<CMatrix>,
}

impl RectKraus {
    pub fn new(dim_in: usize, dim_out: usize, operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidInput("empty Kraus set".into()));
        }
        for op in &operators {
            if op.rows() != dim_out || op.cols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "rectangular Kraus operator is {}x{}, expected {dim_out}x{dim_in}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            operators,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.operators {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.max_abs_diff(&CMatrix::identity(self.dim_in))
    }

    /// Superoperator (`dim_out^2 x dim_in^2`): `sum_K K (x) conj(K)` in
    /// row-major vectorization.
    pub fn superoperator(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim_out * self.dim_out, self.dim_in * self.dim_in);
        for k in &self.operators {
            acc = acc.add(&tensor_product(k, &k.conj()));
        }
        acc
    }

    /// Prepend an ancilla in `|0>`: the isometric channel `rho -> rho (x)
    /// |0><0|` from dimension `dim` to `dim * env`.
    pub fn append_ancilla(dim: usize, env: usize) -> Self {
        let v = CMatrix::from_fn(dim * env, dim, |row, col| {
            let (a, e) = (row / env, row % env);
            if a == col && e == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            dim_in: dim,
            dim_out: dim * env,
            operators: vec![v],
        }
    }

    /// Trace out the trailing ancilla: Kraus operators `I (x) <e|` from
    /// dimension `dim * env` to `dim`.
    pub fn trace_out_ancilla(dim: usize, env: usize) -> Self {
        let ops = (0..env)
            .map(|e| {
                CMatrix::from_fn(dim, dim * env, |row, col| {
                    let (a, e2) = (col / env, col % env);
                    if a == row && e2 == e {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self {
            dim_in: dim * env,
            dim_out: dim,
            operators: ops,
        }
    }
}

/// Conjugate a map by a superchannel: `Theta(N) = post . (N (x) id_E) . pre`
/// with CPTP `pre: A -> A(x)E` and `post: A(x)E -> A`, `d_E <= d_A`.
///
/// Superchannels send channels to channels and never increase the physical
/// implementability of a map.
pub fn apply_superchannel(
    map: &LinearMapRep,
    pre: &RectKraus,
    post: &RectKraus,
) -> Result<LinearMapRep> {
    let da = map.dim();
    if pre.dim_in() != da || post.dim_out() != da || pre.dim_out() != post.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "superchannel dimensions do not line up: pre {}->{}, map {da}, post {}->{}",
            pre.dim_in(),
            pre.dim_out(),
            post.dim_in(),
            post.dim_out()
        )));
    }
    if !pre.dim_out().is_multiple_of(da) {
        return Err(Error::DimensionMismatch(format!(
            "pre output dimension {} is not a multiple of the system dimension {da}",
            pre.dim_out()
        )));
    }
    let de = pre.dim_out() / da;
    if de > da {
        return Err(Error::DimensionMismatch(format!(
            "environment dimension {de} exceeds system dimension {da}"
        )));
    }
    for (name, k) in [("pre", pre), ("post", post)] {
        let dev = k.completeness_deviation();
        if dev > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "{name} map is not trace-preserving: completeness deviation {dev:.3e}"
            )));
        }
    }
    let mid = LinearMapRep::tensor(map, &LinearMapRep::identity(de)).superoperator();
    let s = post.superoperator().mul(&mid).mul(&pre.superoperator());
    LinearMapRep::from_superoperator(da, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{hadamard, sigma_x, sigma_z, test_density, test_hermitian};
    use proptest::prelude::*;

    fn amplitude_damping_kraus(eps: f64) -> KrausSet {
        let a0 = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - eps).sqrt()]]);
        let a1 = CMatrix::from_real_rows(&[&[0.0, eps.sqrt()], &[0.0, 0.0]]);
        KrausSet::new(2, vec![a0, a1]).unwrap()
    }

    fn dephasing_map(eps: f64) -> LinearMapRep {
        MixedUnitarySpec::new(2, vec![(1.0 - eps, CMatrix::identity(2)), (eps, sigma_z())])
            .unwrap()
            .to_map()
    }

    #[test]
    fn identity_kraus_gives_maximally_entangled_choi() {
        let k = KrausSet::new(2, vec![CMatrix::identity(2)]).unwrap();
        assert_eq!(k.to_map(), LinearMapRep::identity(2));
        // |Gamma><Gamma| support on {|00>, |11>} only.
        let j = LinearMapRep::identity(2);
        assert_eq!(j.choi()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(j.choi()[(0, 3)], C64::new(1.0, 0.0));
        assert_eq!(j.choi()[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn amplitude_damping_choi_entry() {
        // At eps = 0.5 the (|11>, |00>) Choi entry is sqrt(1 - eps) = 1/sqrt2.
        let j = amplitude_damping_kraus(0.5).to_map();
        assert!((j.choi()[(3, 0)] - C64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(matrix::is_psd(j.choi(), 1e-10).unwrap());
    }

    #[test]
    fn single_unitary_kraus_conjugates_the_entangled_projector() {
        let k = KrausSet::new(2, vec![sigma_x()]).unwrap();
        let gamma = LinearMapRep::identity(2).into_choi();
        let ix = tensor_product(&CMatrix::identity(2), &sigma_x());
        let expected = ix.mul(&gamma).mul(&ix.adjoint());
        assert!(k.to_map().choi().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn mixed_unitary_construction() {
        let single = MixedUnitarySpec::new(2, vec![(1.0, CMatrix::identity(2))])
            .unwrap()
            .to_map();
        assert_eq!(single, LinearMapRep::identity(2));

        let deph = dephasing_map(0.25);
        assert!(deph.choi().hermiticity_deviation() < 1e-15);
        assert!(deph.output_marginal().max_abs_diff(&CMatrix::identity(2)) < 1e-15);

        // Representation cross-check: same channel from Kraus operators.
        let k = KrausSet::new(
            2,
            vec![
                CMatrix::identity(2).scale_re(0.75f64.sqrt()),
                sigma_z().scale_re(0.25f64.sqrt()),
            ],
        )
        .unwrap();
        assert!(deph.choi().max_abs_diff(k.to_map().choi()) < 1e-15);

        assert!(
            MixedUnitarySpec::new(2, vec![(0.5, CMatrix::identity(2))]).is_err(),
            "coefficients must sum to one"
        );
        assert!(
            MixedUnitarySpec::new(2, vec![(1.0, sigma_z().scale_re(0.5))]).is_err(),
            "operators must be unitary"
        );
    }

    #[test]
    fn apply_identity_and_kraus_consistency() {
        let rho = test_density(2, 9);
        let id = LinearMapRep::identity(2);
        assert!(id.apply(&rho).unwrap().max_abs_diff(&rho) < 1e-15);

        // Direct Kraus evaluation oracle for amplitude damping on |1><1|.
        let eps = 0.37;
        let map = amplitude_damping_kraus(eps).to_map();
        let one = CMatrix::diag_real(&[0.0, 1.0]);
        let out = map.apply(&one).unwrap();
        assert!(out.max_abs_diff(&CMatrix::diag_real(&[eps, 1.0 - eps])) < 1e-14);

        // Trace preserved.
        assert!((out.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn superoperator_round_trip_and_consistency() {
        let id = LinearMapRep::identity(3);
        assert!(id.superoperator().max_abs_diff(&CMatrix::identity(9)) < 1e-15);

        let map = amplitude_damping_kraus(0.3).to_map();
        let back = LinearMapRep::from_superoperator(2, &map.superoperator()).unwrap();
        assert_eq!(&map, &back, "choi -> super -> choi is an exact shuffle");

        // S vec(rho) = vec(N(rho)) on a random state, for a unitary channel.
        let u = KrausSet::new(2, vec![hadamard()]).unwrap().to_map();
        let rho = test_density(2, 21);
        let s = u.superoperator();
        let vec_rho = CMatrix::new(4, 1, rho.data().to_vec()).unwrap();
        let lhs = s.mul(&vec_rho);
        let rhs = u.apply(&rho).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((lhs[(i * 2 + j, 0)] - rhs[(i, j)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn compose_with_identity_and_dephasing_algebra() {
        let map = amplitude_damping_kraus(0.4).to_map();
        let composed = LinearMapRep::compose(&map, &LinearMapRep::identity(2)).unwrap();
        assert!(composed.choi().max_abs_diff(map.choi()) < 1e-13);

        // dephasing(e1) . dephasing(e2) = dephasing(e1 + e2 - 2 e1 e2)
        let (e1, e2) = (0.2, 0.3);
        let composed = LinearMapRep::compose(&dephasing_map(e1), &dephasing_map(e2)).unwrap();
        let expected = dephasing_map(e1 + e2 - 2.0 * e1 * e2);
        assert!(composed.choi().max_abs_diff(expected.choi()) < 1e-13);
    }

    #[test]
    fn inverse_of_amplitude_damping_matches_closed_form() {
        let eps = 0.5;
        let map = amplitude_damping_kraus(eps).to_map();
        let inv = map.inverse(DEFAULT_COND_LIMIT).unwrap();
        let s = 1.0 / (1.0 - eps).sqrt();
        let expected = CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, s],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, -eps / (1.0 - eps), 0.0],
            &[s, 0.0, 0.0, 1.0 / (1.0 - eps)],
        ]);
        assert!(inv.choi().max_abs_diff(&expected) < 1e-12);
        assert_eq!(inv.choi()[(2, 2)], C64::new(-1.0, 0.0));

        // Composing back yields the identity map.
        let round = LinearMapRep::compose(&inv, &map).unwrap();
        assert!(round.choi().max_abs_diff(LinearMapRep::identity(2).choi()) < 1e-8);

        // The inverse map is HPTP but neither CP nor TN.
        let class = inv.classify(DEFAULT_CLASSIFY_TOL);
        assert!(class.is_hp && class.is_tp && !class.is_cp && !class.is_tn);
    }

    #[test]
    fn inverse_restores_noisy_gates_in_expectation() {
        // The effective-channel identity behind mitigating noisy gates:
        // U = O . O^{-1} . U for invertible noise O.
        let noise = amplitude_damping_kraus(0.3).to_map();
        let inverse = noise.inverse(DEFAULT_COND_LIMIT).unwrap();
        let gate = KrausSet::new(2, vec![hadamard()]).unwrap().to_map();
        let effective =
            LinearMapRep::compose(&noise, &LinearMapRep::compose(&inverse, &gate).unwrap())
                .unwrap();
        assert!(effective.choi().max_abs_diff(gate.choi()) < 1e-10);
    }

    #[test]
    fn inverse_of_unitary_channel_is_adjoint_channel() {
        let u = KrausSet::new(2, vec![hadamard()]).unwrap().to_map();
        let inv = u.inverse(DEFAULT_COND_LIMIT).unwrap();
        let expected = KrausSet::new(2, vec![hadamard().adjoint()])
            .unwrap()
            .to_map();
        assert!(inv.choi().max_abs_diff(expected.choi()) < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular_maps() {
        // Constant map to |0><0| (amplitude damping at eps = 1).
        let map = amplitude_damping_kraus(1.0).to_map();
        assert!(matches!(
            map.inverse(DEFAULT_COND_LIMIT),
            Err(Error::NotInvertible { .. })
        ));
        // Non-TP input is rejected up front.
        let half = LinearMapRep::from_choi(2, dephasing_map(0.25).choi().scale_re(0.5)).unwrap();
        assert!(matches!(
            half.inverse(DEFAULT_COND_LIMIT),
            Err(Error::NotHptp(_))
        ));
    }

    #[test]
    fn classify_flags() {
        let cptp = amplitude_damping_kraus(0.5).to_map();
        let class = cptp.classify(DEFAULT_CLASSIFY_TOL);
        assert!(class.is_hp && class.is_tp && class.is_cp && class.is_tn);

        // Subnormalized Kraus set: completely positive, trace non-increasing.
        let sub = KrausSet::new(
            2,
            vec![
                CMatrix::identity(2).scale_re((0.5 * 0.75f64).sqrt()),
                sigma_z().scale_re((0.5 * 0.25f64).sqrt()),
            ],
        )
        .unwrap()
        .to_map();
        let class = sub.classify(DEFAULT_CLASSIFY_TOL);
        assert!(class.is_tn && !class.is_tp && class.is_cp);

        // Random non-Hermitian Choi: not HP.
        let raw = crate::testutil::test_matrix(4, 4, 77);
        let class = LinearMapRep::from_choi(2, raw).unwrap().classify(1e-8);
        assert!(!class.is_hp && !class.is_cp);
    }

    #[test]
    fn tensor_respects_products() {
        let id4 = LinearMapRep::tensor(&LinearMapRep::identity(2), &LinearMapRep::identity(2));
        assert!(id4.choi().max_abs_diff(LinearMapRep::identity(4).choi()) < 1e-15);

        // apply(a (x) b, rho (x) sigma) = apply(a, rho) (x) apply(b, sigma)
        let a = amplitude_damping_kraus(0.3).to_map();
        let b = dephasing_map(0.2);
        let rho = test_density(2, 31);
        let sigma = test_density(2, 32);
        let joint = LinearMapRep::tensor(&a, &b)
            .apply(&tensor_product(&rho, &sigma))
            .unwrap();
        let expected = tensor_product(&a.apply(&rho).unwrap(), &b.apply(&sigma).unwrap());
        assert!(joint.max_abs_diff(&expected) < 1e-13);

        // TP closed under tensor.
        let marginal = LinearMapRep::tensor(&a, &b).output_marginal();
        assert!(marginal.max_abs_diff(&CMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn trivial_superchannel_is_identity_on_maps() {
        let n = amplitude_damping_kraus(0.35).to_map();
        for de in [1usize, 2] {
            let pre = RectKraus::append_ancilla(2, de);
            let post = RectKraus::trace_out_ancilla(2, de);
            let out = apply_superchannel(&n, &pre, &post).unwrap();
            assert!(out.choi().max_abs_diff(n.choi()) < 1e-12);
        }
    }

    #[test]
    fn superchannel_preserves_channels() {
        let n = dephasing_map(0.3);
        let pre = RectKraus::append_ancilla(2, 2);
        // Post-processing: conjugate by a Hadamard on the system after
        // tracing out the ancilla.
        let h = hadamard();
        let post_ops = RectKraus::trace_out_ancilla(2, 2)
            .operators
            .iter()
            .map(|k| h.mul(k))
            .collect();
        let post = RectKraus::new(4, 2, post_ops).unwrap();
        let out = apply_superchannel(&n, &pre, &post).unwrap();
        assert!(out.is_cptp(1e-9));
    }

    #[test]
    fn superchannel_rejects_bad_inputs() {
        let n = LinearMapRep::identity(2);
        let pre = RectKraus::append_ancilla(2, 2);
        let post = RectKraus::trace_out_ancilla(2, 2);
        let bad_post = RectKraus::trace_out_ancilla(3, 2);
        assert!(apply_superchannel(&n, &pre, &bad_post).is_err());

        // Non-TP pre map.
        let half = RectKraus::new(
            2,
            4,
            pre.operators.iter().map(|k| k.scale_re(0.5)).collect(),
        )
        .unwrap();
        assert!(apply_superchannel(&n, &half, &post).is_err());
    }

    #[test]
    fn hermitian_inputs_stay_hermitian_under_hp_maps() {
        let map = dephasing_map(0.15);
        let x = test_hermitian(2, 5);
        let out = map.apply(&x).unwrap();
        assert!(out.hermiticity_deviation() < 1e-13);
    }

    #[test]
    fn inverse_composed_with_original_is_identity_across_the_zoo() {
        let mut channels = vec![
            amplitude_damping_kraus(0.3).to_map(),
            amplitude_damping_kraus(0.7).to_map(),
            dephasing_map(0.1),
            dephasing_map(0.4),
        ];
        for (y, n) in [(0.3, 0.2), (0.6, 0.8)] {
            channels.push(
                crate::zoo::generalized_amplitude_damping(y, n)
                    .unwrap()
                    .to_map(),
            );
        }
        for (d, eps) in [(2usize, 0.2), (3, 0.3)] {
            channels.push(crate::zoo::depolarizing(d, eps).unwrap());
        }
        for channel in &channels {
            let inverse = channel.inverse(DEFAULT_COND_LIMIT).unwrap();
            let round = LinearMapRep::compose(&inverse, channel).unwrap();
            let residual = matrix::trace_norm(
                &round
                    .choi()
                    .sub(LinearMapRep::identity(channel.dim()).choi()),
            )
            .unwrap();
            assert!(residual <= 1e-7, "residual {residual:.3e}");
        }
    }

    proptest! {
        // Kraus, Choi, and superoperator evaluation paths agree on random
        // channels and states.
        #[test]
        fn prop_representations_agree(seed in 0u64..1000, state_seed in 0u64..1000) {
            let kraus = crate::zoo::random_cptp(2, 2, seed).unwrap();
            let rho = crate::zoo::random_density(2, state_seed);

            // Direct Kraus evaluation.
            let mut direct = CMatrix::zeros(2, 2);
            for k in kraus.operators() {
                direct = direct.add(&k.mul(&rho).mul(&k.adjoint()));
            }
            // Through the Choi operator.
            let map = kraus.to_map();
            let via_choi = map.apply(&rho).unwrap();
            // Through the superoperator.
            let vec_rho = CMatrix::new(4, 1, rho.data().to_vec()).unwrap();
            let vec_out = map.superoperator().mul(&vec_rho);
            let via_super = CMatrix::from_fn(2, 2, |i, j| vec_out[(i * 2 + j, 0)]);

            prop_assert!(direct.max_abs_diff(&via_choi) < 1e-10);
            prop_assert!(direct.max_abs_diff(&via_super) < 1e-10);
        }
    }
}
