//! Box-counting dimension estimation at finite scales.
//!
//! The slope of log2 N(r) against r over an explicit scale window stands in
//! for packing and Hausdorff dimension. That proxy is an upper-box-flavored
//! quantity: an estimate below a claimed lower bound flags a bug, while
//! upper-bound checks are honest only on sets whose box and packing
//! dimensions coincide (the digit-restriction generators used throughout).
//! Window selection is deliberately explicit, never automatic.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::AffinePlane;
use crate::exact::rational::Rational;
use crate::nets::{canonical_rep_index, Net, NetElement, NetError, Space};

#[derive(Debug, Error, PartialEq)]
pub enum DimError {
    #[error("need at least 3 scales in the fit window, found {0}")]
    InsufficientScales(usize),
    #[error("profile is inconsistent: {0}")]
    Malformed(String),
}

/// Covering counts N(r) over increasing scales r. Counts of a fixed set
/// are nondecreasing in r because dyadic cells refine, and the constructor
/// enforces that shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct CountProfile {
    scales: Vec<i64>,
    counts: Vec<u64>,
}

#[derive(Deserialize)]
struct RawProfile {
    scales: Vec<i64>,
    counts: Vec<u64>,
}

impl TryFrom<RawProfile> for CountProfile {
    type Error = DimError;

    fn try_from(raw: RawProfile) -> Result<Self, DimError> {
        CountProfile::new(raw.scales, raw.counts)
    }
}

impl CountProfile {
    pub fn new(scales: Vec<i64>, counts: Vec<u64>) -> Result<Self, DimError> {
        if scales.len() != counts.len() {
            return Err(DimError::Malformed(format!(
                "{} scales against {} counts",
                scales.len(),
                counts.len()
            )));
        }
        if scales.is_empty() {
            return Err(DimError::Malformed("empty profile".into()));
        }
        if scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DimError::Malformed("scales must be strictly increasing".into()));
        }
        if counts.contains(&0) {
            return Err(DimError::Malformed("counts must be positive".into()));
        }
        if counts.windows(2).any(|w| w[0] > w[1]) {
            return Err(DimError::Malformed("counts must be nondecreasing in r".into()));
        }
        Ok(CountProfile { scales, counts })
    }

    pub fn scales(&self) -> &[i64] {
        &self.scales
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    /// Two columns, `r,N`, one row per scale.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,N\n");
        for (r, n) in self.scales.iter().zip(&self.counts) {
            writeln!(out, "{r},{n}").expect("string write");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, DimError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "r,N" => {}
            other => {
                return Err(DimError::Malformed(format!("expected header 'r,N', got {other:?}")))
            }
        }
        let mut scales = Vec::new();
        let mut counts = Vec::new();
        for line in lines {
            let (r, n) = line
                .trim()
                .split_once(',')
                .ok_or_else(|| DimError::Malformed(format!("bad row {line:?}")))?;
            scales.push(
                r.trim().parse().map_err(|e| DimError::Malformed(format!("bad scale: {e}")))?,
            );
            counts.push(
                n.trim().parse().map_err(|e| DimError::Malformed(format!("bad count: {e}")))?,
            );
        }
        CountProfile::new(scales, counts)
    }
}

/// Least-squares fit of log2 N(r) against r over the scales actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimEstimate {
    pub slope: f64,
    pub stderr: f64,
    pub window: (i64, i64),
    pub residual_max: f64,
}

/// Number of distinct dyadic cells of side 2^-r meeting the point set,
/// computed exactly: a cell is the vector of floor(coordinate * 2^r).
pub fn box_count_points(points: &[Vec<Rational>], r: i64) -> usize {
    assert!(!points.is_empty(), "need at least one point");
    assert!(r >= 0, "cells wider than the unit scale are not meaningful");
    let dim = points[0].len();
    let mut cells: HashSet<Vec<BigInt>> = HashSet::new();
    for p in points {
        assert_eq!(p.len(), dim, "points must share the ambient dimension");
        cells.insert(p.iter().map(|c| c.floor_shift(r)).collect());
    }
    cells.len()
}

/// Counts over a whole scale ladder. Monotone by construction, so the
/// profile invariants always hold.
pub fn profile_points(points: &[Vec<Rational>], scales: &[i64]) -> Result<CountProfile, DimError> {
    let counts = scales.iter().map(|&r| box_count_points(points, r) as u64).collect();
    CountProfile::new(scales.to_vec(), counts)
}

/// Number of distinct canonical net representatives among the planes; the
/// plane-family analogue of a box count at the net's scale.
pub fn box_count_planes(planes: &[AffinePlane], net: &Net) -> Result<usize, NetError> {
    match net.space() {
        Space::Affine { n, k } => {
            if let Some(p) = planes.iter().find(|p| p.n() != *n || p.k() != *k) {
                return Err(NetError::Malformed(format!(
                    "plane of shape ({}, {}) counted against a net on {}",
                    p.n(),
                    p.k(),
                    net.space()
                )));
            }
        }
        other => return Err(NetError::Malformed(format!("plane family counted against {other}"))),
    }
    let mut reps: HashSet<usize> = HashSet::new();
    for plane in planes {
        reps.insert(canonical_rep_index(net, &NetElement::Affine(plane.clone()))?);
    }
    Ok(reps.len())
}

/// Slope of log2 N(r) over the scales with window.0 <= r <= window.1.
pub fn estimate_dim(profile: &CountProfile, window: (i64, i64)) -> Result<DimEstimate, DimError> {
    let selected: Vec<(f64, f64)> = profile
        .scales
        .iter()
        .zip(&profile.counts)
        .filter(|(r, _)| (window.0..=window.1).contains(r))
        .map(|(&r, &n)| (r as f64, (n as f64).log2()))
        .collect();
    if selected.len() < 3 {
        return Err(DimError::InsufficientScales(selected.len()));
    }
    let m = selected.len() as f64;
    let rbar = selected.iter().map(|(r, _)| r).sum::<f64>() / m;
    let ybar = selected.iter().map(|(_, y)| y).sum::<f64>() / m;
    let sxx: f64 = selected.iter().map(|(r, _)| (r - rbar) * (r - rbar)).sum();
    let sxy: f64 = selected.iter().map(|(r, y)| (r - rbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let mut sse = 0.0f64;
    let mut residual_max = 0.0f64;
    for (r, y) in &selected {
        let e = y - (ybar + slope * (r - rbar));
        sse += e * e;
        residual_max = residual_max.max(e.abs());
    }
    let stderr = (sse.max(0.0) / (m - 2.0) / sxx).sqrt();
    let used: Vec<i64> =
        profile.scales.iter().copied().filter(|r| (window.0..=window.1).contains(r)).collect();
    Ok(DimEstimate {
        slope,
        stderr,
        window: (used[0], *used.last().expect("nonempty")),
        residual_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{complement_basis, line_to_affine, make_affine, LineParams};
    use crate::exact::rational::rat;
    use crate::exact::vecs;
    use crate::nets::build_net;

    /// Depth-m endpoints of the middle-thirds set: all sums of digits in
    /// {0, 2} over 3^-1 .. 3^-m.
    fn cantor_endpoints(m: u32) -> Vec<Vec<Rational>> {
        let mut xs = vec![Rational::from_int(0)];
        for i in 1..=m {
            let step = Rational::new(2, BigInt::from(3).pow(i)).expect("nonzero");
            let mut next = Vec::with_capacity(xs.len() * 2);
            for x in &xs {
                next.push(x.clone());
                next.push(x + &step);
            }
            xs = next;
        }
        xs.into_iter().map(|x| vec![x]).collect()
    }

    #[test]
    fn counting_oracles_by_hand() {
        let single = vec![vec![rat(3, 7), rat(1, 2)]];
        for r in [0, 3, 7] {
            assert_eq!(box_count_points(&single, r), 1);
        }
        let pair = vec![vec![rat(0, 1)], vec![rat(1, 1)]];
        assert_eq!(box_count_points(&pair, 1), 2);
        assert_eq!(box_count_points(&pair, 0), 2);
    }

    #[test]
    fn cantor_endpoint_cells_match_direct_division() {
        // depth 7 at r = ceil(7 log2 3) = 12: endpoint spacing 3^-7 exceeds
        // the cell width 2^-12, so every endpoint gets its own cell
        let points = cantor_endpoints(7);
        assert_eq!(points.len(), 128);
        let r = 12;
        use num_integer::Integer;
        let oracle: HashSet<BigInt> = points
            .iter()
            .map(|p| (p[0].numer().clone() << 12u32).div_floor(p[0].denom()))
            .collect();
        assert_eq!(box_count_points(&points, r), oracle.len());
        assert_eq!(oracle.len(), 128);
    }

    #[test]
    fn exact_power_laws_recover_their_exponent() {
        let doubling = CountProfile::new((0..=6).collect(), (0..=6).map(|r| 1 << r).collect());
        let est = estimate_dim(&doubling.unwrap(), (0, 6)).unwrap();
        assert!((est.slope - 1.0).abs() < 1e-12);
        assert!(est.stderr < 1e-12 && est.residual_max < 1e-12);
        assert_eq!(est.window, (0, 6));

        let flat = CountProfile::new(vec![2, 3, 4, 5], vec![17, 17, 17, 17]).unwrap();
        let est = estimate_dim(&flat, (2, 5)).unwrap();
        assert_eq!(est.slope, 0.0);

        // an actual 3-d sample grid, counted rather than synthesized
        let cube: Vec<Vec<Rational>> =
            (0..512i64).map(|v| vec![rat(v / 64, 8), rat((v / 8) % 8, 8), rat(v % 8, 8)]).collect();
        let profile = profile_points(&cube, &[0, 1, 2, 3]).unwrap();
        assert_eq!(profile.counts(), &[1, 8, 64, 512]);
        let est = estimate_dim(&profile, (1, 3)).unwrap();
        assert!((est.slope - 3.0).abs() < 1e-12);
    }

    #[test]
    fn middle_thirds_slope_lands_near_its_dimension() {
        let points = cantor_endpoints(10);
        let scales: Vec<i64> = (0..=10).collect();
        let profile = profile_points(&points, &scales).unwrap();
        let est = estimate_dim(&profile, (4, 10)).unwrap();
        let target = 2f64.ln() / 3f64.ln();
        assert!((est.slope - target).abs() <= 0.05, "slope {}", est.slope);
        assert!(est.stderr < 0.05);
        assert!(est.residual_max < 0.2);
    }

    #[test]
    fn unit_square_grid_is_two_dimensional() {
        let grid: Vec<Vec<Rational>> = (0..32i64)
            .flat_map(|i| (0..32i64).map(move |j| vec![rat(i, 32), rat(j, 32)]))
            .collect();
        let profile = profile_points(&grid, &[1, 2, 3, 4, 5]).unwrap();
        let est = estimate_dim(&profile, (2, 5)).unwrap();
        assert!((est.slope - 2.0).abs() < 1e-12, "slope {}", est.slope);
    }

    #[test]
    fn counts_are_monotone_in_scale_and_inclusion() {
        let points: Vec<Vec<Rational>> = (0..60i64)
            .map(|i| vec![rat((i * i * 37 + 11) % 256, 256), rat((i * 93 + 5) % 256, 256)])
            .collect();
        // profile construction already enforces monotonicity in r
        let scales: Vec<i64> = (0..=8).collect();
        let full = profile_points(&points, &scales).unwrap();
        let part = profile_points(&points[..20], &scales).unwrap();
        for (a, b) in part.counts().iter().zip(full.counts()) {
            assert!(a <= b, "a subset never meets more cells");
        }
    }

    #[test]
    fn product_sets_count_subadditively() {
        let a = cantor_endpoints(8);
        let b: Vec<Vec<Rational>> = (0..64).map(|i| vec![rat(i, 64)]).collect();
        let product: Vec<Vec<Rational>> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| vec![x[0].clone(), y[0].clone()]))
            .collect();
        let scales: Vec<i64> = (2..=5).collect();
        let sa = estimate_dim(&profile_points(&a, &scales).unwrap(), (2, 5)).unwrap().slope;
        let sb = estimate_dim(&profile_points(&b, &scales).unwrap(), (2, 5)).unwrap().slope;
        let sab = estimate_dim(&profile_points(&product, &scales).unwrap(), (2, 5)).unwrap().slope;
        assert!(sab <= sa + sb + 0.1, "{sab} vs {sa} + {sb}");
    }

    #[test]
    fn narrow_windows_are_rejected() {
        let profile = CountProfile::new(vec![1, 2, 3, 4], vec![2, 4, 8, 16]).unwrap();
        assert_eq!(estimate_dim(&profile, (3, 4)), Err(DimError::InsufficientScales(2)));
        assert_eq!(estimate_dim(&profile, (9, 12)), Err(DimError::InsufficientScales(0)));
    }

    #[test]
    fn malformed_profiles_are_rejected() {
        assert!(CountProfile::new(vec![1, 2], vec![3]).is_err());
        assert!(CountProfile::new(vec![], vec![]).is_err());
        assert!(CountProfile::new(vec![1, 1], vec![2, 2]).is_err());
        assert!(CountProfile::new(vec![1, 2], vec![0, 2]).is_err());
        assert!(CountProfile::new(vec![1, 2], vec![4, 2]).is_err());
    }

    #[test]
    fn csv_round_trips_and_validates() {
        let profile = CountProfile::new(vec![2, 3, 5], vec![4, 9, 30]).unwrap();
        let csv = profile.to_csv();
        assert_eq!(csv, "r,N\n2,4\n3,9\n5,30\n");
        assert_eq!(CountProfile::from_csv(&csv).unwrap(), profile);
        assert!(CountProfile::from_csv("N,r\n1,1\n").is_err());
        assert!(CountProfile::from_csv("r,N\n2;4\n").is_err());
        assert!(CountProfile::from_csv("r,N\n2,four\n").is_err());
    }

    #[test]
    fn single_plane_occupies_one_cell() {
        let net = build_net(Space::Affine { n: 2, k: 1 }, 2, 200_000).unwrap();
        let plane = match &net.elements()[0] {
            NetElement::Affine(p) => p.clone(),
            _ => unreachable!("affine net"),
        };
        assert_eq!(box_count_planes(std::slice::from_ref(&plane), &net).unwrap(), 1);

        // a pair within 2^-(r+2) of each other shares its representative
        let basis = complement_basis(plane.direction()).unwrap();
        let shift = |c: Rational| {
            let t = vecs::scale(&basis.vectors()[0], &c);
            make_affine(plane.direction(), &t).unwrap()
        };
        let c0 = plane.coords()[0].clone();
        let near = vec![shift(c0.clone() + &Rational::pow2(-7)), shift(c0 - &Rational::pow2(-7))];
        assert_eq!(box_count_planes(&near, &net).unwrap(), 1);
    }

    #[test]
    fn parallel_lines_fill_the_intercept_range() {
        let r: i64 = 3;
        let net = build_net(Space::Affine { n: 2, k: 1 }, r, 400_000).unwrap();
        let lines: Vec<AffinePlane> = (0..(1i64 << r))
            .map(|i| {
                line_to_affine(&LineParams {
                    slopes: vec![rat(0, 1)],
                    intercepts: vec![rat(i, 1 << r)],
                })
                .unwrap()
            })
            .collect();
        let reps = box_count_planes(&lines, &net).unwrap();
        assert!(
            reps >= (1 << (r - 1)) as usize && reps <= ((1 << r) + 1) as usize,
            "2^{r} spaced lines landed on {reps} representatives"
        );
    }

    #[test]
    fn plane_counts_reject_mismatched_nets() {
        let grass_net = build_net(Space::Grass { n: 2, k: 1 }, 1, 50_000).unwrap();
        let line =
            line_to_affine(&LineParams { slopes: vec![rat(0, 1)], intercepts: vec![rat(0, 1)] })
                .unwrap();
        assert!(matches!(box_count_planes(&[line], &grass_net), Err(NetError::Malformed(_))));
    }
}
