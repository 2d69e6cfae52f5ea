//! Experiment cells and the standard suite runner.
//!
//! Each cell fixes a family, sample sizes, profile scales with an explicit
//! fit window, a tolerance, and a seed, so a run is a pure function of its
//! config. Outputs are sorted by experiment id before they are returned.

use serde::{Deserialize, Serialize};

use super::bounds::{extension_note, union_note, BoundDirection, BoundReport};
use super::{
    gen_plane_family, CantorSpec, ExperimentError, ExtensionMode, FamilySpec, SubsetKind,
    SubsetSpec, UnionBoundKind,
};
use crate::dimest::{estimate_dim, profile_points, CountProfile, DimEstimate};
use crate::exact::rational::rat;
use crate::exact::Rational;

/// Config schema this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// In-plane sampling draws from a stream salted away from the family
/// stream, so parameter draws and subset draws never alias.
const SUBSET_SALT: u64 = 0x7375_6273;

/// Scales to profile plus the window the slope is fitted on. The window
/// is explicit configuration: coarse and saturated scales are excluded by
/// choice, never automatically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScaleWindow")]
pub struct ScaleWindow {
    scales: Vec<i64>,
    fit: (i64, i64),
}

#[derive(Deserialize)]
struct RawScaleWindow {
    scales: Vec<i64>,
    fit: (i64, i64),
}

impl TryFrom<RawScaleWindow> for ScaleWindow {
    type Error = ExperimentError;

    fn try_from(raw: RawScaleWindow) -> Result<Self, ExperimentError> {
        ScaleWindow::new(raw.scales, raw.fit)
    }
}

impl ScaleWindow {
    pub fn new(scales: Vec<i64>, fit: (i64, i64)) -> Result<Self, ExperimentError> {
        if scales.is_empty() {
            return Err(ExperimentError::Malformed("no scales to profile".into()));
        }
        if scales.iter().any(|&r| r < 0) {
            return Err(ExperimentError::Malformed("scales must be nonnegative".into()));
        }
        if scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::Malformed("scales must strictly increase".into()));
        }
        if fit.0 > fit.1 {
            return Err(ExperimentError::Malformed(format!(
                "fit window ({}, {}) is reversed",
                fit.0, fit.1
            )));
        }
        let inside = scales.iter().filter(|&&r| fit.0 <= r && r <= fit.1).count();
        if inside < 3 {
            return Err(ExperimentError::Malformed(format!(
                "fit window ({}, {}) holds {inside} of the scales, needs 3",
                fit.0, fit.1
            )));
        }
        Ok(ScaleWindow { scales, fit })
    }

    /// Convenience for the common contiguous case.
    pub fn range(lo: i64, hi: i64, fit: (i64, i64)) -> Result<Self, ExperimentError> {
        ScaleWindow::new((lo..=hi).collect(), fit)
    }

    pub fn scales(&self) -> &[i64] {
        &self.scales
    }

    pub fn fit(&self) -> (i64, i64) {
        self.fit
    }

    pub fn max_scale(&self) -> i64 {
        *self.scales.last().expect("nonempty")
    }

    fn estimate(
        &self,
        points: &[Vec<Rational>],
    ) -> Result<(CountProfile, DimEstimate), ExperimentError> {
        let profile = profile_points(points, &self.scales)?;
        let est = estimate_dim(&profile, self.fit)?;
        Ok((profile, est))
    }
}

fn check_resolution(
    id: &str,
    what: &str,
    specs: &[CantorSpec],
    window: &ScaleWindow,
) -> Result<(), ExperimentError> {
    for spec in specs {
        if spec.resolution() < window.max_scale() {
            return Err(ExperimentError::Malformed(format!(
                "{id}: {what} generator resolves scale {} but the window reaches {}",
                spec.resolution(),
                window.max_scale()
            )));
        }
    }
    Ok(())
}

fn default_tolerance() -> f64 {
    0.1
}

fn default_restriction() -> Rational {
    rat(1, 2)
}

/// Sizes, windows, and tolerance for one union experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnionRun {
    pub id: String,
    pub planes: usize,
    pub points_per_plane: usize,
    pub param_scales: ScaleWindow,
    pub union_scales: ScaleWindow,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

/// Sizes, window, restriction factor, and tolerance for one extension
/// experiment. The base set E restricts every chart coordinate by the
/// factor; the extension F uses the full chart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionRun {
    pub id: String,
    pub planes: usize,
    pub points_per_plane: usize,
    pub scales: ScaleWindow,
    #[serde(default = "default_restriction")]
    pub restriction: Rational,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

/// One named count profile kept alongside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedProfile {
    pub name: String,
    pub profile: CountProfile,
}

/// A report plus the profiles behind its estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub report: BoundReport,
    pub profiles: Vec<NamedProfile>,
}

fn named(name: &str, profile: CountProfile) -> NamedProfile {
    NamedProfile { name: name.into(), profile }
}

fn positive(id: &str, planes: usize, points_per_plane: usize) -> Result<(), ExperimentError> {
    if planes == 0 || points_per_plane == 0 {
        return Err(ExperimentError::Malformed(format!("{id}: empty sample budget")));
    }
    Ok(())
}

/// Build the union F of in-plane subsets over a drawn family, measure the
/// family dimension t on the parameter vectors and the dimension of F on
/// its samples, and check the applicable lower bound at the measured t.
pub fn union_bound_experiment(
    spec: &FamilySpec,
    run: &UnionRun,
    seed: u64,
) -> Result<ExperimentOutput, ExperimentError> {
    if spec.n() > 3 {
        return Err(ExperimentError::Malformed(format!(
            "{}: ambient dimension is capped at three",
            run.id
        )));
    }
    positive(&run.id, run.planes, run.points_per_plane)?;
    let kind = spec.bound_kind();
    if kind == UnionBoundKind::HyperplaneUnion
        && (spec.k() != spec.n() - 1 || !spec.subset_spec().is_full())
    {
        return Err(ExperimentError::Malformed(format!(
            "{}: the hyperplane union bound needs full hyperplane subsets",
            run.id
        )));
    }
    if kind == UnionBoundKind::SubsetUnion && spec.subset_kind() == SubsetKind::Packing {
        return Err(ExperimentError::Malformed(format!(
            "{}: the Hausdorff-subset union bound does not cover packing-type subsets",
            run.id
        )));
    }
    check_resolution(&run.id, "parameter", spec.param_spec(), &run.param_scales)?;
    let coord_specs = spec.subset_spec().coord_specs(spec.k());
    check_resolution(&run.id, "in-plane", &coord_specs, &run.union_scales)?;

    let family = gen_plane_family(spec, run.planes, seed)?;
    let (param_profile, t_est) = run.param_scales.estimate(&family.param_points())?;
    let points = family.union_points(run.points_per_plane, seed ^ SUBSET_SALT)?;
    let (union_profile, f_est) = run.union_scales.estimate(&points)?;

    let bound = kind.value(spec.n(), spec.k(), spec.subset_dim(), t_est.slope);
    let report = BoundReport::new(
        &run.id,
        BoundDirection::Lower,
        f_est,
        Some(t_est),
        bound,
        run.tolerance,
        union_note(),
    );
    Ok(ExperimentOutput {
        report,
        profiles: vec![named("params", param_profile), named("union", union_profile)],
    })
}

/// Build a base set E of restricted in-plane subsets and its extension F
/// by full in-plane subsets over the same family and coordinate stream,
/// then check the relation the mode asserts between their dimensions.
pub fn extension_experiment(
    spec: &FamilySpec,
    mode: ExtensionMode,
    run: &ExtensionRun,
    seed: u64,
) -> Result<ExperimentOutput, ExperimentError> {
    if spec.n() > 3 {
        return Err(ExperimentError::Malformed(format!(
            "{}: ambient dimension is capped at three",
            run.id
        )));
    }
    positive(&run.id, run.planes, run.points_per_plane)?;
    if !spec.subset_spec().is_full() {
        return Err(ExperimentError::Malformed(format!(
            "{}: extension experiments replace full in-plane subsets with full planes",
            run.id
        )));
    }
    match mode {
        ExtensionMode::Dim1Lines if spec.k() != 1 => {
            return Err(ExperimentError::Malformed(format!(
                "{}: line extension needs k = 1, got k = {}",
                run.id,
                spec.k()
            )));
        }
        ExtensionMode::HyperplaneFulldim if spec.k() != spec.n() - 1 => {
            return Err(ExperimentError::Malformed(format!(
                "{}: hyperplane extension needs k = n - 1, got k = {}",
                run.id,
                spec.k()
            )));
        }
        _ => {}
    }
    if !run.restriction.is_positive() || run.restriction > Rational::one() {
        return Err(ExperimentError::Malformed(format!(
            "{}: restriction factor {} is outside (0, 1]",
            run.id, run.restriction
        )));
    }
    let coord_specs = spec.subset_spec().coord_specs(spec.k());
    check_resolution(&run.id, "in-plane", &coord_specs, &run.scales)?;

    let family = gen_plane_family(spec, run.planes, seed)?;
    let subset_seed = seed ^ SUBSET_SALT;
    // same coordinate stream for both sets: restriction 1 makes E = F
    let base = family.union_points_scaled(run.points_per_plane, &run.restriction, subset_seed)?;
    let full = family.union_points(run.points_per_plane, subset_seed)?;
    let (base_profile, e_est) = run.scales.estimate(&base)?;
    let (ext_profile, f_est) = run.scales.estimate(&full)?;

    let bound = mode.bound_value(spec.k(), e_est.slope);
    let report = BoundReport::new(
        &run.id,
        mode.direction(),
        f_est,
        Some(e_est),
        bound,
        run.tolerance,
        extension_note(),
    );
    Ok(ExperimentOutput {
        report,
        profiles: vec![named("base", base_profile), named("extension", ext_profile)],
    })
}

/// One self-contained experiment in a suite config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentCell {
    Union {
        family: FamilySpec,
        #[serde(flatten)]
        run: UnionRun,
        seed: u64,
    },
    Extension {
        family: FamilySpec,
        mode: ExtensionMode,
        #[serde(flatten)]
        run: ExtensionRun,
        seed: u64,
    },
}

impl ExperimentCell {
    pub fn id(&self) -> &str {
        match self {
            ExperimentCell::Union { run, .. } => &run.id,
            ExperimentCell::Extension { run, .. } => &run.id,
        }
    }

    pub fn run(&self) -> Result<ExperimentOutput, ExperimentError> {
        match self {
            ExperimentCell::Union { family, run, seed } => {
                union_bound_experiment(family, run, *seed)
            }
            ExperimentCell::Extension { family, mode, run, seed } => {
                extension_experiment(family, *mode, run, *seed)
            }
        }
    }
}

/// A versioned list of experiment cells with unique ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawSuiteConfig")]
pub struct SuiteConfig {
    schema: u32,
    cells: Vec<ExperimentCell>,
}

#[derive(Deserialize)]
struct RawSuiteConfig {
    schema: u32,
    cells: Vec<ExperimentCell>,
}

impl TryFrom<RawSuiteConfig> for SuiteConfig {
    type Error = ExperimentError;

    fn try_from(raw: RawSuiteConfig) -> Result<Self, ExperimentError> {
        if raw.schema != SCHEMA_VERSION {
            return Err(ExperimentError::Malformed(format!(
                "config schema {} is not the supported {SCHEMA_VERSION}",
                raw.schema
            )));
        }
        SuiteConfig::new(raw.cells)
    }
}

impl SuiteConfig {
    pub fn new(cells: Vec<ExperimentCell>) -> Result<Self, ExperimentError> {
        let mut ids: Vec<&str> = cells.iter().map(ExperimentCell::id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(ExperimentError::Malformed(format!("duplicate experiment id {}", w[0])));
        }
        if cells.iter().any(|c| c.id().is_empty()) {
            return Err(ExperimentError::Malformed("empty experiment id".into()));
        }
        Ok(SuiteConfig { schema: SCHEMA_VERSION, cells })
    }

    pub fn schema(&self) -> u32 {
        self.schema
    }

    pub fn cells(&self) -> &[ExperimentCell] {
        &self.cells
    }

    /// Override every cell's tolerance, for callers whose flags outrank
    /// the config file.
    pub fn set_tolerance(&mut self, tolerance: f64) {
        for cell in &mut self.cells {
            match cell {
                ExperimentCell::Union { run, .. } => run.tolerance = tolerance,
                ExperimentCell::Extension { run, .. } => run.tolerance = tolerance,
            }
        }
    }

    /// Override every cell's seed, for the same reason.
    pub fn set_seed(&mut self, seed: u64) {
        for cell in &mut self.cells {
            match cell {
                ExperimentCell::Union { seed: s, .. } => *s = seed,
                ExperimentCell::Extension { seed: s, .. } => *s = seed,
            }
        }
    }
}

/// Run every cell and return the outputs sorted by experiment id.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<ExperimentOutput>, ExperimentError> {
    let mut outputs =
        config.cells.iter().map(ExperimentCell::run).collect::<Result<Vec<_>, _>>()?;
    outputs.sort_by(|a, b| a.report.id.cmp(&b.report.id));
    Ok(outputs)
}

/// The pinned default suite: line unions over three subset shapes, a
/// repeated single line, a hyperplane union in R^3, and the extension
/// relations, with one fixed-point cell where restriction 1 forces E = F.
///
/// Every fit window starts at least two scales above the profiled
/// minimum and its top scale stays below a tenth of the sample count.
/// The R^3 cells use parallel translates (slopes pinned at zero, the
/// intercept sweeping the full interval): the union is then an exact
/// dyadic box, counts are powers of two, and the slope reads exactly.
pub fn standard_suite() -> SuiteConfig {
    let c = |base: u32, digits: &[u32], depth: u32| {
        CantorSpec::new(base, digits.to_vec(), depth).expect("valid")
    };
    let half = || c(4, &[0, 3], 10); // dimension 1/2, resolves scale 20
    let thirds = || c(3, &[0, 2], 8); // dimension log2/log3, resolves scale 12
    let frozen = || c(3, &[1], 6); // one point, resolves scale 9
    let zero = || c(3, &[0], 6); // the point 0, resolves scale 9
    let full = CantorSpec::full_interval;
    let w = |lo, hi, fit| ScaleWindow::range(lo, hi, fit).expect("valid");

    let line_t1 = || FamilySpec::new(2, 1, vec![half(), half()], SubsetSpec::Full).expect("valid");
    let translates =
        || FamilySpec::new(3, 2, vec![zero(), zero(), full()], SubsetSpec::Full).expect("valid");
    let cells = vec![
        ExperimentCell::Union {
            family: FamilySpec::new(2, 1, vec![frozen(), frozen()], SubsetSpec::Full)
                .expect("valid"),
            run: UnionRun {
                id: "union-lines-single".into(),
                planes: 16,
                points_per_plane: 500,
                param_scales: w(0, 6, (2, 6)),
                union_scales: w(0, 9, (3, 8)),
                tolerance: 0.1,
            },
            seed: 1001,
        },
        ExperimentCell::Union {
            family: line_t1(),
            run: UnionRun {
                id: "union-lines-full".into(),
                planes: 1500,
                points_per_plane: 40,
                // base-4 digit sets climb log2 N in two-scale stairs, so
                // parameter fits span whole stairs (even endpoints)
                param_scales: w(0, 6, (2, 6)),
                union_scales: w(0, 6, (2, 6)),
                tolerance: 0.1,
            },
            seed: 1002,
        },
        ExperimentCell::Union {
            family: FamilySpec::new(2, 1, vec![half(), half()], SubsetSpec::Cantor(vec![thirds()]))
                .expect("valid"),
            run: UnionRun {
                id: "union-lines-cantor".into(),
                planes: 1500,
                points_per_plane: 24,
                param_scales: w(0, 6, (2, 6)),
                union_scales: w(0, 6, (3, 6)),
                tolerance: 0.1,
            },
            seed: 1003,
        },
        ExperimentCell::Union {
            family: FamilySpec::new(2, 1, vec![half(), half()], SubsetSpec::Cantor(vec![thirds()]))
                .expect("valid")
                .with_subset_kind(SubsetKind::Packing),
            run: UnionRun {
                id: "union-lines-packing".into(),
                planes: 900,
                points_per_plane: 24,
                param_scales: w(0, 6, (2, 6)),
                union_scales: w(0, 6, (3, 6)),
                tolerance: 0.1,
            },
            seed: 1004,
        },
        ExperimentCell::Union {
            family: translates(),
            run: UnionRun {
                id: "union-planes-hyper".into(),
                planes: 1200,
                points_per_plane: 96,
                param_scales: w(0, 6, (2, 6)),
                union_scales: w(0, 4, (2, 4)),
                tolerance: 0.1,
            },
            seed: 1005,
        },
        ExperimentCell::Extension {
            family: line_t1(),
            mode: ExtensionMode::PositiveMeasure,
            run: ExtensionRun {
                id: "ext-lines-measure".into(),
                planes: 900,
                points_per_plane: 48,
                scales: w(0, 6, (2, 6)),
                restriction: rat(1, 2),
                tolerance: 0.1,
            },
            seed: 1006,
        },
        ExperimentCell::Extension {
            family: line_t1(),
            mode: ExtensionMode::Dim1Lines,
            run: ExtensionRun {
                id: "ext-lines-dim1".into(),
                planes: 900,
                points_per_plane: 48,
                scales: w(0, 6, (2, 6)),
                restriction: rat(1, 2),
                tolerance: 0.1,
            },
            seed: 1007,
        },
        ExperimentCell::Extension {
            family: translates(),
            mode: ExtensionMode::HyperplaneFulldim,
            run: ExtensionRun {
                id: "ext-hyper-fulldim".into(),
                planes: 800,
                points_per_plane: 96,
                scales: w(0, 4, (2, 4)),
                restriction: rat(1, 2),
                tolerance: 0.1,
            },
            seed: 1008,
        },
        ExperimentCell::Extension {
            family: line_t1(),
            mode: ExtensionMode::HyperplaneFulldim,
            run: ExtensionRun {
                id: "ext-lines-fixed".into(),
                planes: 400,
                points_per_plane: 40,
                scales: w(0, 5, (2, 5)),
                restriction: Rational::one(),
                tolerance: 0.1,
            },
            seed: 1009,
        },
    ];
    SuiteConfig::new(cells).expect("unique ids")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(depth: u32) -> CantorSpec {
        CantorSpec::new(4, vec![0, 3], depth).unwrap()
    }

    fn frozen() -> CantorSpec {
        CantorSpec::new(3, vec![1], 6).unwrap()
    }

    fn mini_single_cell(id: &str) -> ExperimentCell {
        ExperimentCell::Union {
            family: FamilySpec::new(2, 1, vec![frozen(), frozen()], SubsetSpec::Full).unwrap(),
            run: UnionRun {
                id: id.into(),
                planes: 6,
                points_per_plane: 700,
                param_scales: ScaleWindow::range(1, 5, (1, 5)).unwrap(),
                union_scales: ScaleWindow::range(2, 8, (3, 8)).unwrap(),
                tolerance: 0.1,
            },
            seed: 5,
        }
    }

    #[test]
    fn scale_windows_are_validated() {
        assert!(ScaleWindow::new(vec![], (1, 3)).is_err());
        assert!(ScaleWindow::new(vec![-1, 2, 3], (1, 3)).is_err());
        assert!(ScaleWindow::new(vec![1, 1, 2], (1, 2)).is_err());
        assert!(ScaleWindow::new(vec![1, 2, 3], (3, 1)).is_err());
        assert!(ScaleWindow::new(vec![1, 2, 3], (2, 3)).is_err());
        assert!(ScaleWindow::new(vec![1, 2, 3], (1, 3)).is_ok());
        assert!(
            serde_json::from_str::<ScaleWindow>(r#"{"scales": [1, 2], "fit": [1, 2]}"#).is_err()
        );
    }

    #[test]
    fn single_line_union_reports_dimension_one() {
        let out = mini_single_cell("single").run().unwrap();
        let r = &out.report;
        // every parameter vector is the same point, so measured t is 0
        let t = r.reference_dim.as_ref().unwrap();
        assert_eq!(t.slope, 0.0);
        assert!((r.bound_value - 1.0).abs() < 1e-12);
        assert!((r.measured_dim.slope - 1.0).abs() <= 0.1, "slope {}", r.measured_dim.slope);
        assert!(r.satisfied);
        assert_eq!(out.profiles.len(), 2);
        assert_eq!(out.profiles[0].name, "params");
        assert_eq!(out.profiles[1].name, "union");
    }

    #[test]
    fn line_union_clears_its_bound() {
        let spec = FamilySpec::new(2, 1, vec![half(10), half(10)], SubsetSpec::Full).unwrap();
        let run = UnionRun {
            id: "lines".into(),
            planes: 700,
            points_per_plane: 24,
            param_scales: ScaleWindow::range(1, 6, (2, 6)).unwrap(),
            union_scales: ScaleWindow::range(1, 6, (3, 6)).unwrap(),
            tolerance: 0.1,
        };
        let out = union_bound_experiment(&spec, &run, 40).unwrap();
        let r = &out.report;
        let t = r.reference_dim.as_ref().unwrap().slope;
        assert!((t - 1.0).abs() <= 0.15, "measured t {t}");
        assert!((r.bound_value - (1.0 + t / 2.0)).abs() < 1e-12);
        assert!(r.satisfied, "margin {}", r.margin);
        assert!(r.margin > 0.0, "expected slack above the bound, got {}", r.margin);
    }

    #[test]
    fn fixed_point_extension_has_exact_zero_margin() {
        let spec = FamilySpec::new(2, 1, vec![half(8), half(8)], SubsetSpec::Full).unwrap();
        let run = ExtensionRun {
            id: "fixed".into(),
            planes: 80,
            points_per_plane: 30,
            scales: ScaleWindow::range(1, 6, (2, 6)).unwrap(),
            restriction: Rational::one(),
            tolerance: 0.1,
        };
        let out = extension_experiment(&spec, ExtensionMode::HyperplaneFulldim, &run, 9).unwrap();
        let r = &out.report;
        assert_eq!(r.margin, 0.0);
        assert!(r.satisfied);
        assert_eq!(r.reference_dim.as_ref().unwrap().slope, r.measured_dim.slope);
        assert_eq!(out.profiles[0].profile, out.profiles[1].profile);
    }

    #[test]
    fn restricted_extension_stays_within_tolerance() {
        let spec = FamilySpec::new(2, 1, vec![half(8), half(8)], SubsetSpec::Full).unwrap();
        let run = ExtensionRun {
            id: "restricted".into(),
            planes: 350,
            points_per_plane: 24,
            scales: ScaleWindow::range(1, 6, (2, 6)).unwrap(),
            restriction: rat(1, 2),
            tolerance: 0.1,
        };
        let out = extension_experiment(&spec, ExtensionMode::PositiveMeasure, &run, 11).unwrap();
        let r = &out.report;
        assert!(r.satisfied, "margin {}", r.margin);
        let e = r.reference_dim.as_ref().unwrap().slope;
        assert!((r.bound_value - (2.0 * e - 1.0)).abs() < 1e-12);
        // halving the chart should barely move a box-count slope
        assert!((r.measured_dim.slope - e).abs() <= 0.15);
    }

    #[test]
    fn suite_outputs_sort_and_reproduce() {
        let config =
            SuiteConfig::new(vec![mini_single_cell("b-cell"), mini_single_cell("a-cell")]).unwrap();
        let first = run_suite(&config).unwrap();
        let ids: Vec<&str> = first.iter().map(|o| o.report.id.as_str()).collect();
        assert_eq!(ids, ["a-cell", "b-cell"]);
        let second = run_suite(&config).unwrap();
        assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
        // config survives a serde round trip byte for byte
        let json = serde_json::to_string(&config).unwrap();
        let back: SuiteConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn suite_overrides_reach_every_cell() {
        let mut config =
            SuiteConfig::new(vec![mini_single_cell("b-cell"), mini_single_cell("a-cell")]).unwrap();
        config.set_tolerance(0.2);
        config.set_seed(99);
        for cell in config.cells() {
            match cell {
                ExperimentCell::Union { run, seed, .. } => {
                    assert_eq!(run.tolerance, 0.2);
                    assert_eq!(*seed, 99);
                }
                ExperimentCell::Extension { .. } => unreachable!(),
            }
        }
    }

    #[test]
    fn invalid_configs_and_runs_are_rejected() {
        // duplicate ids
        assert!(SuiteConfig::new(vec![mini_single_cell("dup"), mini_single_cell("dup")]).is_err());
        // wrong schema version
        let json = serde_json::json!({"schema": 2, "cells": []});
        assert!(serde_json::from_value::<SuiteConfig>(json).is_err());

        // line extension needs k = 1: hyperplanes in R^3 do not qualify
        let hyper =
            FamilySpec::new(3, 2, vec![half(8), half(8), half(8)], SubsetSpec::Full).unwrap();
        let run = ExtensionRun {
            id: "x".into(),
            planes: 5,
            points_per_plane: 5,
            scales: ScaleWindow::range(1, 4, (1, 4)).unwrap(),
            restriction: rat(1, 2),
            tolerance: 0.1,
        };
        assert!(extension_experiment(&hyper, ExtensionMode::Dim1Lines, &run, 1).is_err());
        // restriction outside (0, 1]
        let line = FamilySpec::new(2, 1, vec![half(8), half(8)], SubsetSpec::Full).unwrap();
        let mut bad = run.clone();
        bad.restriction = Rational::from_int(2);
        assert!(extension_experiment(&line, ExtensionMode::PositiveMeasure, &bad, 1).is_err());
        // packing-type subsets cannot take the Hausdorff-subset bound
        let mismarked = FamilySpec::new(2, 1, vec![half(8), half(8)], SubsetSpec::Full)
            .unwrap()
            .with_subset_kind(SubsetKind::Packing)
            .with_bound(Some(UnionBoundKind::SubsetUnion));
        let urun = UnionRun {
            id: "y".into(),
            planes: 5,
            points_per_plane: 5,
            param_scales: ScaleWindow::range(1, 4, (1, 4)).unwrap(),
            union_scales: ScaleWindow::range(1, 4, (1, 4)).unwrap(),
            tolerance: 0.1,
        };
        assert!(union_bound_experiment(&mismarked, &urun, 1).is_err());
        // window outruns the generator resolution
        let coarse = FamilySpec::new(
            2,
            1,
            vec![half(8), half(8)],
            SubsetSpec::Cantor(vec![CantorSpec::new(3, vec![0, 2], 4).unwrap()]),
        )
        .unwrap();
        let mut deep = urun.clone();
        deep.union_scales = ScaleWindow::range(2, 8, (3, 8)).unwrap();
        assert!(union_bound_experiment(&coarse, &deep, 1).is_err());
        // ambient dimension capped at three
        let big = FamilySpec::new(4, 3, vec![half(8); 4], SubsetSpec::Full).unwrap();
        assert!(union_bound_experiment(&big, &urun, 1).is_err());
    }

    #[test]
    fn standard_suite_is_well_formed() {
        let suite = standard_suite();
        assert_eq!(suite.schema(), SCHEMA_VERSION);
        assert_eq!(suite.cells().len(), 9);
        let json = serde_json::to_string(&suite).unwrap();
        let back: SuiteConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }
}
