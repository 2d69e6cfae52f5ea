//! Separated covering nets on G(n, k) and on A(n, k) with translations
//! restricted to the unit box.
//!
//! A net at scale r is a greedy packing: candidates from a deterministic
//! dyadic enumeration are accepted exactly when their certified distance to
//! every earlier element is at least 2^-(r+1). Construction stops once a
//! fixed-seed probe audit confirms every probe has an element within 2^-r.
//! The audit is statistical, not a proof of covering; its probe count and
//! worst representative distance are recorded on the net.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{complement_basis, make_affine, rho_affine, AffineError, AffinePlane};
use crate::exact::dyadic::Dyadic;
use crate::exact::rational::Rational;
use crate::exact::vecs;
use crate::grassmann::{compare_rho, rho, rho_squared_single_angle, GrassError, GrassPoint};

/// Probes drawn for every covering audit.
const AUDIT_PROBES: usize = 1000;
/// Fixed audit seed: the probe set is part of the construction, not an input.
const AUDIT_SEED: u64 = 0x6e6574;
/// Dyadic depth of audit probe coordinates.
const PROBE_DEPTH: i64 = 20;
/// Candidate enumeration never goes past this depth; the budget runs out
/// far earlier in any feasible configuration.
const MAX_DEPTH: i64 = 32;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("candidate budget exhausted after {examined} candidates ({accepted} accepted)")]
    BudgetExhausted { examined: usize, accepted: usize },
    #[error("no net element within the covering radius")]
    NotCovered,
    #[error("net data is inconsistent: {0}")]
    Malformed(String),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Grass(#[from] GrassError),
}

/// The space a net lives in. Affine nets restrict translations to
/// complement coordinates in [0, 1]^(n-k); directions are unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Space {
    Grass { n: usize, k: usize },
    Affine { n: usize, k: usize },
}

impl Space {
    pub fn n(&self) -> usize {
        match *self {
            Space::Grass { n, .. } | Space::Affine { n, .. } => n,
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            Space::Grass { k, .. } | Space::Affine { k, .. } => k,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Grass { n, k } => write!(f, "G({n}, {k})"),
            Space::Affine { n, k } => write!(f, "A({n}, {k})"),
        }
    }
}

/// One net element. The JSON shapes of the two variants are disjoint, so
/// serialization needs no tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetElement {
    Grass(GrassPoint),
    Affine(AffinePlane),
}

fn element_matches(space: &Space, e: &NetElement) -> bool {
    match (space, e) {
        (Space::Grass { n, k }, NetElement::Grass(g)) => g.n() == *n && g.k() == *k,
        (Space::Affine { n, k }, NetElement::Affine(p)) => p.n() == *n && p.k() == *k,
        _ => false,
    }
}

/// Outcome of the fixed-seed covering audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub probes: usize,
    pub covered: usize,
    /// Certified upper bound on the worst probe-to-representative distance.
    pub max_rep_distance: Dyadic,
}

/// A greedy net: elements in insertion order, pairwise certified at least
/// `separation` apart, with the audit that stopped the construction.
///
/// Deserialization revalidates shapes and the separation value but not the
/// pairwise distances; that certificate is established at build time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNet")]
pub struct Net {
    space: Space,
    r: i64,
    separation: Dyadic,
    elements: Vec<NetElement>,
    audit: AuditReport,
}

#[derive(Deserialize)]
struct RawNet {
    space: Space,
    r: i64,
    separation: Dyadic,
    elements: Vec<NetElement>,
    audit: AuditReport,
}

impl TryFrom<RawNet> for Net {
    type Error = NetError;

    fn try_from(raw: RawNet) -> Result<Self, NetError> {
        if raw.r < 1 {
            return Err(NetError::Malformed(format!("scale {} is below 1", raw.r)));
        }
        if raw.separation != Dyadic::pow2(-(raw.r + 1)) {
            return Err(NetError::Malformed(format!(
                "separation {} does not match scale {}",
                raw.separation, raw.r
            )));
        }
        if raw.audit.covered > raw.audit.probes {
            return Err(NetError::Malformed("audit covers more probes than it drew".into()));
        }
        if let Some(e) = raw.elements.iter().find(|e| !element_matches(&raw.space, e)) {
            return Err(NetError::Malformed(format!(
                "element {:?} lies outside the declared space {}",
                e, raw.space
            )));
        }
        Ok(Net {
            space: raw.space,
            r: raw.r,
            separation: raw.separation,
            elements: raw.elements,
            audit: raw.audit,
        })
    }
}

impl Net {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn separation(&self) -> &Dyadic {
        &self.separation
    }

    pub fn elements(&self) -> &[NetElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn audit(&self) -> &AuditReport {
        &self.audit
    }
}

/// Number of net elements within 2^-(r-l) of a center, counted with
/// certified comparisons. `ambiguous` holds elements whose distance could
/// not be placed on either side of the radius; they belong to the upper
/// count only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallCount {
    pub center: NetElement,
    pub l: i64,
    pub count: usize,
    pub ambiguous: usize,
}

impl BallCount {
    pub fn upper(&self) -> usize {
        self.count + self.ambiguous
    }
}

/// sqrt(x) + sqrt(y) against c, decided exactly by squaring twice.
fn cmp_sqrt_sum(x: &Rational, y: &Rational, c: &Rational) -> Ordering {
    debug_assert!(!x.is_negative() && !y.is_negative());
    if c.is_negative() {
        return Ordering::Greater;
    }
    let s = &(&c.square() - x) - y;
    if s.is_negative() {
        return Ordering::Greater;
    }
    (Rational::from_int(4) * x * y).cmp_value(&s.square())
}

fn cmp_affine_dist(a: &AffinePlane, b: &AffinePlane, q: &Rational) -> Option<Ordering> {
    let dt = vecs::sub(&a.translation(), &b.translation());
    let shift_sq = vecs::norm_sq(&dt);
    if let Some(dir_sq) = rho_squared_single_angle(a.direction(), b.direction()) {
        return Some(cmp_sqrt_sum(&dir_sq, &shift_sq, q));
    }
    // Only A(4, 2) lacks a rational squared angle; refine an enclosure of
    // the distance until it clears the threshold, and give up on a tie.
    let mut p = 8;
    while p <= 192 {
        let sample = rho_affine(a, b, p).expect("same shape");
        let lo = sample.value.lo().to_rational();
        let hi = sample.value.hi().to_rational();
        if &lo > q {
            return Some(Ordering::Greater);
        }
        if &hi < q {
            return Some(Ordering::Less);
        }
        if lo == hi && &lo == q {
            return Some(Ordering::Equal);
        }
        p *= 2;
    }
    None
}

/// Distance between two elements against a threshold. `None` means the
/// comparison stayed ambiguous at the precision cap; callers treat that
/// conservatively (reject as a candidate, exclude from covering).
fn cmp_dist(a: &NetElement, b: &NetElement, q: &Rational) -> Option<Ordering> {
    match (a, b) {
        (NetElement::Grass(x), NetElement::Grass(y)) => {
            Some(compare_rho(x, y, q).expect("elements share the space"))
        }
        (NetElement::Affine(x), NetElement::Affine(y)) => cmp_affine_dist(x, y, q),
        _ => panic!("mixed net elements"),
    }
}

fn element_distance_hi(a: &NetElement, b: &NetElement, p: i64) -> Dyadic {
    match (a, b) {
        (NetElement::Grass(x), NetElement::Grass(y)) => {
            rho(x, y, p).expect("elements share the space").value.hi().clone()
        }
        (NetElement::Affine(x), NetElement::Affine(y)) => {
            rho_affine(x, y, p).expect("elements share the space").value.hi().clone()
        }
        _ => panic!("mixed net elements"),
    }
}

/// The plane with the given direction whose translation has the given
/// coordinates in the canonical complement basis.
fn plane_with_coords(v: &GrassPoint, coords: &[Rational]) -> Result<AffinePlane, AffineError> {
    let basis = complement_basis(v)?;
    let mut t = vecs::zeros(v.n());
    for (c, b) in coords.iter().zip(basis.vectors()) {
        t = vecs::add(&t, &vecs::scale(b, c));
    }
    make_affine(v, &t)
}

fn random_point(n: usize, k: usize, rng: &mut ChaCha8Rng) -> GrassPoint {
    let scale = 1i64 << PROBE_DEPTH;
    loop {
        let cols: Vec<Vec<Rational>> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::new(rng.gen_range(-scale..=scale), scale).expect("nonzero"))
                    .collect()
            })
            .collect();
        if let Ok(p) = GrassPoint::span(&cols) {
            return p;
        }
    }
}

fn random_element(space: &Space, rng: &mut ChaCha8Rng) -> NetElement {
    let scale = 1i64 << PROBE_DEPTH;
    match *space {
        Space::Grass { n, k } => NetElement::Grass(random_point(n, k, rng)),
        Space::Affine { n, k } => {
            let v = random_point(n, k, rng);
            let coords: Vec<Rational> = (0..n - k)
                .map(|_| Rational::new(rng.gen_range(0..=scale), scale).expect("nonzero"))
                .collect();
            NetElement::Affine(plane_with_coords(&v, &coords).expect("k < n"))
        }
    }
}

fn probe_set(space: &Space, count: usize, seed: u64) -> Vec<NetElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(space, &mut rng)).collect()
}

fn grid(prefix: &mut Vec<i64>, ranges: &[(i64, i64)], out: &mut Vec<Vec<i64>>) {
    match ranges.split_first() {
        None => out.push(prefix.clone()),
        Some((&(lo, hi), rest)) => {
            for m in lo..=hi {
                prefix.push(m);
                grid(prefix, rest, out);
                prefix.pop();
            }
        }
    }
}

/// Canonical depth-`depth` spanning vectors: every coordinate in [-1, 1]
/// with denominator 2^depth, the first coordinate of maximal absolute value
/// equal to +1, and at least one coordinate of exact depth `depth` so each
/// vector appears once across depths. Order: leading index, then the free
/// mantissas lexicographically.
fn new_spanning_vectors(n: usize, depth: i64) -> Vec<Vec<Rational>> {
    let scale = 1i64 << depth;
    let mut out = Vec::new();
    for lead in 0..n {
        let ranges: Vec<(i64, i64)> = (0..n - 1)
            .map(|j| if j < lead { (-(scale - 1), scale - 1) } else { (-scale, scale) })
            .collect();
        let mut frees = Vec::new();
        grid(&mut Vec::new(), &ranges, &mut frees);
        for free in frees {
            if depth > 0 && free.iter().all(|m| m % 2 == 0) {
                continue;
            }
            let mut v = Vec::with_capacity(n);
            v.extend(free[..lead].iter().map(|&m| Rational::new(m, scale).expect("nonzero")));
            v.push(Rational::from_int(1));
            v.extend(free[lead..].iter().map(|&m| Rational::new(m, scale).expect("nonzero")));
            out.push(v);
        }
    }
    out
}

/// Depth-`depth` grid points of [0, 1]^m not present one level coarser.
fn new_coord_tuples(m: usize, depth: i64) -> Vec<Vec<Rational>> {
    let scale = 1i64 << depth;
    let mut cells = Vec::new();
    grid(&mut Vec::new(), &vec![(0, scale); m], &mut cells);
    cells
        .into_iter()
        .filter(|c| depth == 0 || c.iter().any(|m| m % 2 != 0))
        .map(|c| c.iter().map(|&m| Rational::new(m, scale).expect("nonzero")).collect())
        .collect()
}

/// Deterministic candidate stream, depth-major. Lines come straight from
/// the canonical vectors, hyperplanes from their orthogonal complements,
/// and the one middle shape G(4, 2) from pairs of vectors. Affine spaces
/// cross directions with translation grids over [0, 1]^(n-k).
struct Enumerator {
    space: Space,
    vectors: Vec<Vec<Rational>>,
    dirs: Vec<(GrassPoint, i64)>,
    coords: Vec<(Vec<Rational>, i64)>,
}

impl Enumerator {
    fn new(space: Space) -> Self {
        Enumerator { space, vectors: Vec::new(), dirs: Vec::new(), coords: Vec::new() }
    }

    fn new_directions(&mut self, depth: i64) -> Vec<GrassPoint> {
        let (n, k) = (self.space.n(), self.space.k());
        let fresh = new_spanning_vectors(n, depth);
        if k == 1 {
            return fresh
                .iter()
                .map(|v| GrassPoint::line_through(v).expect("nonzero vector"))
                .collect();
        }
        if k + 1 == n {
            return fresh
                .iter()
                .map(|v| {
                    GrassPoint::line_through(v).expect("nonzero vector").orthogonal_complement()
                })
                .collect();
        }
        let start = self.vectors.len();
        self.vectors.extend(fresh);
        let mut out = Vec::new();
        for j in start..self.vectors.len() {
            for i in 0..j {
                if let Ok(p) = GrassPoint::span(&[self.vectors[i].clone(), self.vectors[j].clone()])
                {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Feeds every depth-`depth` candidate to `visit` in a fixed order;
    /// stops early and returns false when `visit` does.
    fn for_each_new(&mut self, depth: i64, visit: &mut impl FnMut(NetElement) -> bool) -> bool {
        match self.space {
            Space::Grass { .. } => {
                for d in self.new_directions(depth) {
                    if !visit(NetElement::Grass(d)) {
                        return false;
                    }
                }
            }
            Space::Affine { n, k } => {
                let nd = self.new_directions(depth);
                self.dirs.extend(nd.into_iter().map(|d| (d, depth)));
                self.coords.extend(new_coord_tuples(n - k, depth).into_iter().map(|c| (c, depth)));
                for (v, dv) in &self.dirs {
                    for (c, dc) in &self.coords {
                        if *dv < depth && *dc < depth {
                            continue;
                        }
                        let plane = plane_with_coords(v, c).expect("k < n");
                        if !visit(NetElement::Affine(plane)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn run_audit(elements: &[NetElement], probes: &[NetElement], r: i64) -> Option<AuditReport> {
    let radius = Rational::pow2(-r);
    let mut reps = Vec::with_capacity(probes.len());
    for probe in probes {
        let idx = elements.iter().position(|e| {
            matches!(cmp_dist(probe, e, &radius), Some(Ordering::Less | Ordering::Equal))
        })?;
        reps.push(idx);
    }
    let mut worst = Dyadic::zero();
    for (probe, &idx) in probes.iter().zip(&reps) {
        worst = worst.max(element_distance_hi(probe, &elements[idx], r + 6));
    }
    Some(AuditReport { probes: probes.len(), covered: probes.len(), max_rep_distance: worst })
}

/// Greedy net at scale r. Enumerates candidates depth by depth, accepts
/// those certified at least 2^-(r+1) from every earlier element, and stops
/// at the first depth whose end-of-depth audit covers all probes. The
/// budget caps how many candidates are ever examined.
pub fn build_net(space: Space, r: i64, candidate_budget: usize) -> Result<Net, NetError> {
    let (n, k) = (space.n(), space.k());
    assert!(r >= 1, "net scale must be at least 1");
    assert!(n <= 4, "net construction is limited to ambient dimension 4");
    assert!(k >= 1 && k < n, "need a proper plane dimension");
    let sep = Rational::pow2(-(r + 1));
    let probes = probe_set(&space, AUDIT_PROBES, AUDIT_SEED);
    let mut stream = Enumerator::new(space);
    let mut elements: Vec<NetElement> = Vec::new();
    let mut examined = 0usize;
    for depth in 0..=MAX_DEPTH {
        let completed = stream.for_each_new(depth, &mut |cand| {
            if examined == candidate_budget {
                return false;
            }
            examined += 1;
            let separated = elements.iter().all(|e| {
                matches!(cmp_dist(e, &cand, &sep), Some(Ordering::Greater | Ordering::Equal))
            });
            if separated {
                elements.push(cand);
            }
            true
        });
        if !completed {
            return Err(NetError::BudgetExhausted { examined, accepted: elements.len() });
        }
        if let Some(audit) = run_audit(&elements, &probes, r) {
            return Ok(Net { space, r, separation: Dyadic::pow2(-(r + 1)), elements, audit });
        }
    }
    Err(NetError::BudgetExhausted { examined, accepted: elements.len() })
}

/// Index of the first element (insertion order) within certified distance
/// 2^-r of x. The audit is statistical, so a probe off the audited set can
/// still fail to be covered.
pub fn canonical_rep_index(net: &Net, x: &NetElement) -> Result<usize, NetError> {
    let radius = Rational::pow2(-net.r);
    net.elements
        .iter()
        .position(|e| matches!(cmp_dist(x, e, &radius), Some(Ordering::Less | Ordering::Equal)))
        .ok_or(NetError::NotCovered)
}

pub fn canonical_rep<'a>(net: &'a Net, x: &NetElement) -> Result<&'a NetElement, NetError> {
    Ok(&net.elements[canonical_rep_index(net, x)?])
}

/// Count of net elements within 2^-(r-l) of x.
pub fn ball_count(net: &Net, x: &NetElement, l: i64) -> BallCount {
    assert!(net.r - l >= 1, "ball radius must stay below scale 1/2");
    let radius = Rational::pow2(-(net.r - l));
    let mut count = 0;
    let mut ambiguous = 0;
    for e in &net.elements {
        match cmp_dist(x, e, &radius) {
            Some(Ordering::Less | Ordering::Equal) => count += 1,
            Some(Ordering::Greater) => {}
            None => ambiguous += 1,
        }
    }
    BallCount { center: x.clone(), l, count, ambiguous }
}
