//! Generators with prescribed dimensions and bound-check experiments.
//!
//! Digit-restriction sets realize target dimensions exactly (their
//! Hausdorff, box, and packing dimensions coincide), plane families are
//! drawn from graph-chart parameters, and each experiment compares a
//! box-count slope against the applicable dimension bound. Box counting
//! approximates dimension from the upper side, so a lower bound holding
//! here checks consistency, not sharpness; every report carries that
//! caveat.

mod bounds;
mod suite;

pub use bounds::{BoundDirection, BoundReport, ExtensionMode, UnionBoundKind};
pub use suite::{
    extension_experiment, run_suite, standard_suite, union_bound_experiment, ExperimentCell,
    ExperimentOutput, ExtensionRun, NamedProfile, ScaleWindow, SuiteConfig, UnionRun,
    SCHEMA_VERSION,
};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{
    hyperplane_to_affine, line_to_affine, points_on_plane, AffineError, AffinePlane,
    HyperplaneParams, LineParams,
};
use crate::dimest::DimError;
use crate::exact::Rational;

/// Dyadic depth standing in for a full interval coordinate.
const FULL_DEPTH: u32 = 20;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("malformed experiment: {0}")]
    Malformed(String),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Dim(#[from] DimError),
}

/// A digit-restriction subset of [0, 1]: base-b expansions of the given
/// depth whose digits all lie in an allowed set. Its dimension is
/// log|digits| / log(base) in every sense used here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCantorSpec")]
pub struct CantorSpec {
    base: u32,
    digits: Vec<u32>,
    depth: u32,
}

#[derive(Deserialize)]
struct RawCantorSpec {
    base: u32,
    digits: Vec<u32>,
    depth: u32,
}

impl TryFrom<RawCantorSpec> for CantorSpec {
    type Error = ExperimentError;

    fn try_from(raw: RawCantorSpec) -> Result<Self, ExperimentError> {
        CantorSpec::new(raw.base, raw.digits, raw.depth)
    }
}

impl CantorSpec {
    /// Digits are sorted and deduplicated; out-of-range digits, an empty
    /// digit set, base < 2, and depth 0 are rejected.
    pub fn new(base: u32, mut digits: Vec<u32>, depth: u32) -> Result<Self, ExperimentError> {
        if base < 2 {
            return Err(ExperimentError::Malformed(format!("base {base} is below 2")));
        }
        if depth == 0 {
            return Err(ExperimentError::Malformed("depth 0 generates nothing".into()));
        }
        digits.sort_unstable();
        digits.dedup();
        if digits.is_empty() {
            return Err(ExperimentError::Malformed("no digits allowed".into()));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(ExperimentError::Malformed(format!("digit {d} outside base {base}")));
        }
        Ok(CantorSpec { base, digits, depth })
    }

    /// The full interval at the default dyadic depth.
    pub fn full_interval() -> Self {
        CantorSpec::new(2, vec![0, 1], FULL_DEPTH).expect("valid")
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// log|digits| / log(base); exactly 0.0 for one digit and exactly 1.0
    /// for all digits.
    pub fn target_dim(&self) -> f64 {
        (self.digits.len() as f64).ln() / (f64::from(self.base)).ln()
    }

    /// Finest dyadic scale the generator resolves: floor(depth log2 base).
    /// Counting below this scale sees single samples, not the set.
    pub fn resolution(&self) -> i64 {
        (f64::from(self.depth) * f64::from(self.base).log2()).floor() as i64
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        let base = BigInt::from(self.base);
        let mut numer = BigInt::from(0u32);
        let mut denom = BigInt::from(1u32);
        for _ in 0..self.depth {
            let d = self.digits[rng.gen_range(0..self.digits.len())];
            numer = &numer * &base + d;
            denom *= &base;
        }
        Rational::new(numer, denom).expect("positive denominator")
    }
}

/// Points of a digit-restriction set, digits drawn uniformly. The output
/// is exact (denominators divide base^depth) and depends only on the
/// arguments.
pub fn gen_cantor_points(spec: &CantorSpec, count: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| spec.sample(&mut rng)).collect()
}

/// In-plane subset shape: the full chart cube, or one digit-restriction
/// set per chart coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetSpec {
    Full,
    Cantor(Vec<CantorSpec>),
}

impl SubsetSpec {
    pub fn is_full(&self) -> bool {
        matches!(self, SubsetSpec::Full)
    }

    /// Per-coordinate generators, with the full cube spelled out as full
    /// intervals.
    pub fn coord_specs(&self, k: usize) -> Vec<CantorSpec> {
        match self {
            SubsetSpec::Full => vec![CantorSpec::full_interval(); k],
            SubsetSpec::Cantor(specs) => specs.clone(),
        }
    }

    /// Subset dimension s: exactly k for the full cube, else the sum of
    /// coordinate dimensions.
    pub fn dim(&self, k: usize) -> f64 {
        match self {
            SubsetSpec::Full => k as f64,
            SubsetSpec::Cantor(specs) => specs.iter().map(CantorSpec::target_dim).sum(),
        }
    }
}

/// Which dimension notion the in-plane subsets are asserted to carry.
/// The generators here produce sets where both coincide; the marker
/// selects which union bound is legitimate to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SubsetKind {
    #[default]
    Hausdorff,
    Packing,
}

/// A family of k-planes in R^n drawn from graph-chart parameters, plus
/// the shape of the in-plane subset taken on each plane.
///
/// Lines take interleaved parameters (slope_1, intercept_1, ..); a
/// hyperplane takes its n-1 slopes then the intercept. Only k = 1 and
/// k = n-1 have such charts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamilySpec")]
pub struct FamilySpec {
    n: usize,
    k: usize,
    param_spec: Vec<CantorSpec>,
    subset_spec: SubsetSpec,
    #[serde(default)]
    subset_kind: SubsetKind,
    #[serde(default)]
    bound: Option<UnionBoundKind>,
}

#[derive(Deserialize)]
struct RawFamilySpec {
    n: usize,
    k: usize,
    param_spec: Vec<CantorSpec>,
    subset_spec: SubsetSpec,
    #[serde(default)]
    subset_kind: SubsetKind,
    #[serde(default)]
    bound: Option<UnionBoundKind>,
}

impl TryFrom<RawFamilySpec> for FamilySpec {
    type Error = ExperimentError;

    fn try_from(raw: RawFamilySpec) -> Result<Self, ExperimentError> {
        let spec = FamilySpec::new(raw.n, raw.k, raw.param_spec, raw.subset_spec)?;
        Ok(spec.with_subset_kind(raw.subset_kind).with_bound(raw.bound))
    }
}

impl FamilySpec {
    pub fn new(
        n: usize,
        k: usize,
        param_spec: Vec<CantorSpec>,
        subset_spec: SubsetSpec,
    ) -> Result<Self, ExperimentError> {
        if n < 2 || k == 0 || k >= n {
            return Err(ExperimentError::Malformed(format!(
                "no parameterized family on A({n}, {k})"
            )));
        }
        if k != 1 && k != n - 1 {
            return Err(ExperimentError::Malformed(format!(
                "only lines and hyperplanes have graph charts, got k={k} in R^{n}"
            )));
        }
        let want = if k == 1 { 2 * (n - 1) } else { n };
        if param_spec.len() != want {
            return Err(ExperimentError::Malformed(format!(
                "expected {want} parameter coordinates, got {}",
                param_spec.len()
            )));
        }
        if let SubsetSpec::Cantor(specs) = &subset_spec {
            if specs.len() != k {
                return Err(ExperimentError::Malformed(format!(
                    "expected {k} in-plane coordinate specs, got {}",
                    specs.len()
                )));
            }
        }
        Ok(FamilySpec {
            n,
            k,
            param_spec,
            subset_spec,
            subset_kind: SubsetKind::Hausdorff,
            bound: None,
        })
    }

    pub fn with_subset_kind(mut self, kind: SubsetKind) -> Self {
        self.subset_kind = kind;
        self
    }

    /// Pin the union bound to check instead of the inferred default.
    pub fn with_bound(mut self, bound: Option<UnionBoundKind>) -> Self {
        self.bound = bound;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn param_spec(&self) -> &[CantorSpec] {
        &self.param_spec
    }

    pub fn subset_spec(&self) -> &SubsetSpec {
        &self.subset_spec
    }

    pub fn subset_kind(&self) -> SubsetKind {
        self.subset_kind
    }

    /// Target parameter dimension t: the sum of coordinate dimensions.
    pub fn t_target(&self) -> f64 {
        self.param_spec.iter().map(CantorSpec::target_dim).sum()
    }

    /// Target subset dimension s.
    pub fn subset_dim(&self) -> f64 {
        self.subset_spec.dim(self.k)
    }

    /// The bound this family checks: a pinned choice wins; packing-type
    /// subsets take the packing variant; full hyperplane subsets in
    /// dimension three and higher take the stronger hyperplane bound; the
    /// plane defaults to the generic union bound, where the hyperplane
    /// variant stays opt-in.
    pub fn bound_kind(&self) -> UnionBoundKind {
        if let Some(kind) = self.bound {
            return kind;
        }
        if self.subset_kind == SubsetKind::Packing {
            return UnionBoundKind::PackingSubsetUnion;
        }
        if self.k == self.n - 1 && self.n >= 3 && self.subset_spec.is_full() {
            UnionBoundKind::HyperplaneUnion
        } else {
            UnionBoundKind::SubsetUnion
        }
    }

    /// The plane a parameter vector names through the graph chart.
    pub fn plane_from_params(&self, params: &[Rational]) -> Result<AffinePlane, ExperimentError> {
        if params.len() != self.param_spec.len() {
            return Err(ExperimentError::Malformed(format!(
                "expected {} parameters, got {}",
                self.param_spec.len(),
                params.len()
            )));
        }
        let plane = if self.k == 1 {
            let slopes: Vec<Rational> = params.iter().step_by(2).cloned().collect();
            let intercepts: Vec<Rational> = params.iter().skip(1).step_by(2).cloned().collect();
            line_to_affine(&LineParams { slopes, intercepts })?
        } else {
            hyperplane_to_affine(&HyperplaneParams {
                a: params[..self.n - 1].to_vec(),
                b: params[self.n - 1].clone(),
            })?
        };
        Ok(plane)
    }
}

/// One drawn plane together with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    plane: AffinePlane,
    params: Vec<Rational>,
}

impl FamilyMember {
    pub fn plane(&self) -> &AffinePlane {
        &self.plane
    }

    pub fn params(&self) -> &[Rational] {
        &self.params
    }
}

/// A drawn family: members plus the `FamilySpec` they were drawn from.
/// Duplicate members are kept; a one-digit coordinate generator
/// deliberately repeats one plane.
#[derive(Debug, Clone)]
pub struct PlaneFamily {
    spec: FamilySpec,
    members: Vec<FamilyMember>,
}

/// Draw a family of `count` planes. Parameters are sampled coordinate by
/// coordinate from one stream, so the output is a function of the
/// arguments alone.
pub fn gen_plane_family(
    spec: &FamilySpec,
    count: usize,
    seed: u64,
) -> Result<PlaneFamily, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(count);
    for _ in 0..count {
        let params: Vec<Rational> = spec.param_spec.iter().map(|c| c.sample(&mut rng)).collect();
        let plane = spec.plane_from_params(&params)?;
        members.push(FamilyMember { plane, params });
    }
    Ok(PlaneFamily { spec: spec.clone(), members })
}

impl PlaneFamily {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Parameter vectors, the set whose box dimension measures t.
    pub fn param_points(&self) -> Vec<Vec<Rational>> {
        self.members.iter().map(|m| m.params.clone()).collect()
    }

    /// Sample points of the union of in-plane subsets, `per_plane` from
    /// each member through its chart.
    pub fn union_points(
        &self,
        per_plane: usize,
        seed: u64,
    ) -> Result<Vec<Vec<Rational>>, ExperimentError> {
        self.union_points_scaled(per_plane, &Rational::one(), seed)
    }

    /// union_points with every chart coordinate multiplied by a factor;
    /// factor 1 reproduces union_points bit for bit, smaller factors
    /// shrink each subset toward its chart origin.
    pub fn union_points_scaled(
        &self,
        per_plane: usize,
        factor: &Rational,
        seed: u64,
    ) -> Result<Vec<Vec<Rational>>, ExperimentError> {
        let specs = self.spec.subset_spec.coord_specs(self.spec.k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(per_plane * self.members.len());
        for member in &self.members {
            let coords: Vec<Vec<Rational>> = (0..per_plane)
                .map(|_| specs.iter().map(|c| &c.sample(&mut rng) * factor).collect())
                .collect();
            out.extend(points_on_plane(&member.plane, &coords)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{affine_to_hyperplane, affine_to_line};
    use crate::dimest::{estimate_dim, profile_points};
    use crate::exact::rational::rat;

    fn middle_thirds(depth: u32) -> CantorSpec {
        CantorSpec::new(3, vec![0, 2], depth).unwrap()
    }

    fn half_dim(depth: u32) -> CantorSpec {
        CantorSpec::new(4, vec![0, 3], depth).unwrap()
    }

    #[test]
    fn cantor_points_stay_inside_their_digit_set() {
        let spec = middle_thirds(6);
        let points = gen_cantor_points(&spec, 200, 5);
        assert_eq!(points.len(), 200);
        for x in &points {
            // x * 3^6 must be an integer whose base-3 digits are 0 or 2
            let scaled = x * &Rational::from_int(3i64.pow(6));
            assert_eq!(scaled.denom(), &BigInt::from(1));
            let mut m = scaled.numer().clone();
            for _ in 0..6 {
                let d = &m % 3;
                assert!(d == BigInt::from(0) || d == BigInt::from(2), "digit {d} in {x}");
                m /= 3;
            }
            assert_eq!(m, BigInt::from(0));
        }
    }

    #[test]
    fn one_digit_specs_collapse_to_a_point() {
        let spec = CantorSpec::new(3, vec![1], 4).unwrap();
        let points = gen_cantor_points(&spec, 10, 1);
        // 1/3 + 1/9 + 1/27 + 1/81
        assert!(points.iter().all(|x| x == &rat(40, 81)));
        assert_eq!(spec.target_dim(), 0.0);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let spec = half_dim(10);
        assert_eq!(gen_cantor_points(&spec, 50, 9), gen_cantor_points(&spec, 50, 9));
        assert_ne!(gen_cantor_points(&spec, 50, 9), gen_cantor_points(&spec, 50, 10));
    }

    #[test]
    fn calibration_recovers_known_dimensions() {
        let thirds = gen_cantor_points(&middle_thirds(10), 4000, 11);
        let pts: Vec<Vec<Rational>> = thirds.into_iter().map(|x| vec![x]).collect();
        let scales: Vec<i64> = (2..=10).collect();
        let est = estimate_dim(&profile_points(&pts, &scales).unwrap(), (4, 10)).unwrap();
        let target = 2f64.ln() / 3f64.ln();
        assert!((est.slope - target).abs() <= 0.05, "slope {} vs {}", est.slope, target);

        let full = gen_cantor_points(&CantorSpec::new(2, vec![0, 1], 12).unwrap(), 3000, 12);
        let pts: Vec<Vec<Rational>> = full.into_iter().map(|x| vec![x]).collect();
        let scales: Vec<i64> = (1..=8).collect();
        let est = estimate_dim(&profile_points(&pts, &scales).unwrap(), (3, 8)).unwrap();
        assert!((est.slope - 1.0).abs() <= 0.05, "slope {}", est.slope);

        let point = gen_cantor_points(&CantorSpec::new(3, vec![1], 8).unwrap(), 500, 13);
        let pts: Vec<Vec<Rational>> = point.into_iter().map(|x| vec![x]).collect();
        let est = estimate_dim(&profile_points(&pts, &scales).unwrap(), (3, 8)).unwrap();
        assert_eq!(est.slope, 0.0);
    }

    #[test]
    fn resolution_floor_matches_hand_values() {
        assert_eq!(middle_thirds(8).resolution(), 12); // 8 log2(3) = 12.68
        assert_eq!(CantorSpec::new(2, vec![0, 1], 20).unwrap().resolution(), 20);
        assert_eq!(half_dim(10).resolution(), 20);
    }

    #[test]
    fn bad_cantor_specs_are_rejected() {
        assert!(CantorSpec::new(1, vec![0], 3).is_err());
        assert!(CantorSpec::new(3, vec![], 3).is_err());
        assert!(CantorSpec::new(3, vec![3], 3).is_err());
        assert!(CantorSpec::new(3, vec![0, 2], 0).is_err());
        // digits arrive unsorted with repeats and come out canonical
        let spec = CantorSpec::new(5, vec![4, 0, 4, 2], 2).unwrap();
        assert_eq!(spec.digits(), &[0, 2, 4]);
        // serde enforces the same checks
        assert!(serde_json::from_str::<CantorSpec>(r#"{"base": 3, "digits": [7], "depth": 2}"#)
            .is_err());
    }

    #[test]
    fn line_families_round_trip_their_parameters() {
        let spec = FamilySpec::new(2, 1, vec![half_dim(8), half_dim(8)], SubsetSpec::Full).unwrap();
        let family = gen_plane_family(&spec, 50, 21).unwrap();
        assert_eq!(family.len(), 50);
        for member in family.members() {
            let lp = affine_to_line(member.plane()).unwrap();
            assert_eq!(lp.slopes, vec![member.params()[0].clone()]);
            assert_eq!(lp.intercepts, vec![member.params()[1].clone()]);
        }
    }

    #[test]
    fn hyperplane_families_round_trip_their_parameters() {
        let spec =
            FamilySpec::new(3, 2, vec![half_dim(6), half_dim(6), half_dim(6)], SubsetSpec::Full)
                .unwrap();
        let family = gen_plane_family(&spec, 30, 22).unwrap();
        for member in family.members() {
            let hp = affine_to_hyperplane(member.plane()).unwrap();
            assert_eq!(hp.a, member.params()[..2].to_vec());
            assert_eq!(hp.b, member.params()[2]);
        }
    }

    #[test]
    fn parameter_dimension_is_measured_not_assumed() {
        // two half-dimensional coordinates make t = 1
        let spec =
            FamilySpec::new(2, 1, vec![half_dim(10), half_dim(10)], SubsetSpec::Full).unwrap();
        assert_eq!(spec.t_target(), 1.0);
        let family = gen_plane_family(&spec, 1300, 23).unwrap();
        // log2 N of a base-4 digit set climbs in two-scale stairs, so the
        // fit window spans whole stairs: even endpoints, slope exactly 1
        // in the saturated count
        let scales: Vec<i64> = (1..=6).collect();
        let est = estimate_dim(&profile_points(&family.param_points(), &scales).unwrap(), (2, 6))
            .unwrap();
        assert!((est.slope - 1.0).abs() <= 0.08, "measured t {}", est.slope);
    }

    #[test]
    fn full_parameter_cube_measures_its_dimension() {
        let spec = FamilySpec::new(
            2,
            1,
            vec![CantorSpec::full_interval(), CantorSpec::full_interval()],
            SubsetSpec::Full,
        )
        .unwrap();
        assert_eq!(spec.t_target(), 2.0);
        let family = gen_plane_family(&spec, 3000, 24).unwrap();
        let scales: Vec<i64> = (1..=4).collect();
        let est = estimate_dim(&profile_points(&family.param_points(), &scales).unwrap(), (1, 4))
            .unwrap();
        assert!((est.slope - 2.0).abs() <= 0.1, "measured t {}", est.slope);
    }

    #[test]
    fn subset_points_lie_on_their_planes() {
        let spec = FamilySpec::new(
            2,
            1,
            vec![half_dim(8), half_dim(8)],
            SubsetSpec::Cantor(vec![middle_thirds(6)]),
        )
        .unwrap();
        assert!((spec.subset_dim() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        let family = gen_plane_family(&spec, 8, 31).unwrap();
        let pts = family.union_points(5, 32).unwrap();
        assert_eq!(pts.len(), 40);
        for (chunk, member) in pts.chunks(5).zip(family.members()) {
            for p in chunk {
                assert!(member.plane().contains(p));
            }
        }
    }

    #[test]
    fn scaled_subsets_shrink_toward_the_chart_origin() {
        let spec = FamilySpec::new(2, 1, vec![half_dim(8), half_dim(8)], SubsetSpec::Full).unwrap();
        let family = gen_plane_family(&spec, 4, 41).unwrap();
        let full = family.union_points(6, 42).unwrap();
        let scaled = family.union_points_scaled(6, &Rational::one(), 42).unwrap();
        assert_eq!(full, scaled);
        let half = family.union_points_scaled(6, &rat(1, 2), 42).unwrap();
        assert_eq!(half.len(), full.len());
        assert_ne!(half, full);
        for (i, p) in half.iter().enumerate() {
            assert!(family.members()[i / 6].plane().contains(p));
        }
    }

    #[test]
    fn family_generation_is_deterministic() {
        let spec = FamilySpec::new(2, 1, vec![half_dim(8), half_dim(8)], SubsetSpec::Full).unwrap();
        let a = gen_plane_family(&spec, 20, 7).unwrap();
        let b = gen_plane_family(&spec, 20, 7).unwrap();
        for (x, y) in a.members().iter().zip(b.members()) {
            assert_eq!(x.params(), y.params());
            assert_eq!(x.plane(), y.plane());
        }
    }

    #[test]
    fn malformed_family_specs_are_rejected() {
        let c = || half_dim(6);
        // k = 2 in R^4 has no graph chart here
        assert!(FamilySpec::new(4, 2, vec![c(); 4], SubsetSpec::Full).is_err());
        assert!(FamilySpec::new(2, 0, vec![c(); 2], SubsetSpec::Full).is_err());
        assert!(FamilySpec::new(2, 2, vec![c(); 2], SubsetSpec::Full).is_err());
        // lines in R^3 need 4 parameter coordinates
        assert!(FamilySpec::new(3, 1, vec![c(); 3], SubsetSpec::Full).is_err());
        // hyperplanes in R^3 need 3
        assert!(FamilySpec::new(3, 2, vec![c(); 4], SubsetSpec::Full).is_err());
        // one in-plane spec per chart coordinate
        assert!(FamilySpec::new(3, 2, vec![c(); 3], SubsetSpec::Cantor(vec![c()])).is_err());
        // serde path enforces the same
        let json = serde_json::json!({
            "n": 4, "k": 2,
            "param_spec": [{"base": 2, "digits": [0, 1], "depth": 4}],
            "subset_spec": "full"
        });
        assert!(serde_json::from_value::<FamilySpec>(json).is_err());
    }

    #[test]
    fn bound_kind_inference_follows_the_shape() {
        let line = FamilySpec::new(2, 1, vec![half_dim(6); 2], SubsetSpec::Full).unwrap();
        assert_eq!(line.bound_kind(), UnionBoundKind::SubsetUnion);
        let hyper = FamilySpec::new(3, 2, vec![half_dim(6); 3], SubsetSpec::Full).unwrap();
        assert_eq!(hyper.bound_kind(), UnionBoundKind::HyperplaneUnion);
        let packing = FamilySpec::new(2, 1, vec![half_dim(6); 2], SubsetSpec::Full)
            .unwrap()
            .with_subset_kind(SubsetKind::Packing);
        assert_eq!(packing.bound_kind(), UnionBoundKind::PackingSubsetUnion);
        let pinned = FamilySpec::new(3, 2, vec![half_dim(6); 3], SubsetSpec::Full)
            .unwrap()
            .with_bound(Some(UnionBoundKind::SubsetUnion));
        assert_eq!(pinned.bound_kind(), UnionBoundKind::SubsetUnion);
    }
}
