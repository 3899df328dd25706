//! Domains cut out by finitely many strict polynomial inequalities, the
//! circle-arrangement builders, the product lift into one higher dimension,
//! and sampled transversality checks on boundary strata.

use crate::poly::{
    rat, rational_str, Polynomial, Rational, RationalPoint, SphereOrientation,
};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("domain build failed:\n{}", .0.join("\n"))]
    Build(Vec<String>),
    #[error("domain must have at least one constraint")]
    NoConstraints,
    #[error("constraint {index} has {got} variables, domain is {expected}-dimensional")]
    ConstraintDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: domain is {expected}-dimensional, point has {got}")]
    PointDimension { expected: usize, got: usize },
    #[error("second factor of a product lift must be 2-dimensional, got {got}")]
    FactorNotPlanar { got: usize },
    #[error("unsupported domain shape: {reason}; use the grid oracle instead")]
    UnsupportedShape { reason: String },
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

/// The open neighborhood the inequality representation is taken in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Neighborhood {
    WholeSpace,
    Ball {
        center: RationalPoint,
        radius: Rational,
    },
}

/// A constraint whose zero set is a cylinder over a circle in the coordinate
/// plane spanned by the sweep coordinate `x1` and `offset_coord`. In ambient
/// dimension 2 this is just a circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleInfo {
    pub offset_coord: usize,
    pub center_sweep: Rational,
    pub center_offset: Rational,
    pub radius: Rational,
    pub orientation: SphereOrientation,
}

impl CircleInfo {
    /// Extreme values of the sweep coordinate on the circle.
    pub fn sweep_extremes(&self) -> (Rational, Rational) {
        (
            &self.center_sweep - &self.radius,
            &self.center_sweep + &self.radius,
        )
    }

    fn polynomial(&self, ambient_dim: usize) -> Polynomial {
        let mut center = vec![Rational::zero(); ambient_dim];
        center[0] = self.center_sweep.clone();
        center[self.offset_coord] = self.center_offset.clone();
        // Build the circle in its own plane, then lift; coordinates outside
        // the plane must not appear in the polynomial.
        let plane_center = RationalPoint::new(vec![
            self.center_sweep.clone(),
            self.center_offset.clone(),
        ]);
        let circle =
            Polynomial::sphere(&plane_center, &self.radius, 2, self.orientation).unwrap();
        let map: BTreeMap<usize, usize> = [(0, 0), (1, self.offset_coord)].into_iter().collect();
        circle.substitute_coords(&map, ambient_dim).unwrap()
    }
}

/// Geometric provenance of the constraint list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainShape {
    /// One entry per constraint; entry `i` describes constraint `i`.
    Circles(Vec<CircleInfo>),
    General,
}

/// An open set `{x in U : f_j(x) > 0 for all j}` together with the data the
/// rest of the pipeline needs: constraint polynomials, the neighborhood, the
/// builder shape, and which constraint pairs are expected to intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCDomain {
    ambient_dim: usize,
    constraints: Vec<Polynomial>,
    neighborhood: Neighborhood,
    shape: DomainShape,
    expected_intersections: Vec<(usize, usize)>,
    provenance: Option<String>,
}

/// Three-way classification of a point against the domain closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Outside => "outside",
        };
        write!(f, "{s}")
    }
}

impl NCDomain {
    pub fn new(
        ambient_dim: usize,
        constraints: Vec<Polynomial>,
        neighborhood: Neighborhood,
    ) -> Result<Self, DomainError> {
        Self::with_shape(
            ambient_dim,
            constraints,
            neighborhood,
            DomainShape::General,
            Vec::new(),
            None,
        )
    }

    pub fn with_shape(
        ambient_dim: usize,
        constraints: Vec<Polynomial>,
        neighborhood: Neighborhood,
        shape: DomainShape,
        expected_intersections: Vec<(usize, usize)>,
        provenance: Option<String>,
    ) -> Result<Self, DomainError> {
        if constraints.is_empty() {
            return Err(DomainError::NoConstraints);
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.num_vars() != ambient_dim {
                return Err(DomainError::ConstraintDimension {
                    index: i,
                    expected: ambient_dim,
                    got: c.num_vars(),
                });
            }
        }
        if let DomainShape::Circles(infos) = &shape {
            if infos.len() != constraints.len() {
                return Err(DomainError::Build(vec![format!(
                    "shape lists {} circles for {} constraints",
                    infos.len(),
                    constraints.len()
                )]));
            }
        }
        Ok(NCDomain {
            ambient_dim,
            constraints,
            neighborhood,
            shape,
            expected_intersections,
            provenance,
        })
    }

    /// A plain disk: one inside-positive circle.
    pub fn disk(center: &RationalPoint, radius: &Rational) -> Result<Self, DomainError> {
        let info = CircleInfo {
            offset_coord: 1,
            center_sweep: center.coord(0).clone(),
            center_offset: center.coord(1).clone(),
            radius: radius.clone(),
            orientation: SphereOrientation::InsidePositive,
        };
        let poly = Polynomial::sphere(center, radius, 2, SphereOrientation::InsidePositive)?;
        NCDomain::with_shape(
            2,
            vec![poly],
            Neighborhood::WholeSpace,
            DomainShape::Circles(vec![info]),
            Vec::new(),
            Some("disk".to_string()),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[Polynomial] {
        &self.constraints
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn neighborhood(&self) -> &Neighborhood {
        &self.neighborhood
    }

    pub fn shape(&self) -> &DomainShape {
        &self.shape
    }

    pub fn expected_intersections(&self) -> &[(usize, usize)] {
        &self.expected_intersections
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Circle data when every constraint is a circle or circle cylinder.
    pub fn circles(&self) -> Option<&[CircleInfo]> {
        match &self.shape {
            DomainShape::Circles(infos) => Some(infos),
            DomainShape::General => None,
        }
    }

    fn in_neighborhood(&self, x: &RationalPoint) -> bool {
        match &self.neighborhood {
            Neighborhood::WholeSpace => true,
            Neighborhood::Ball { center, radius } => {
                let mut d2 = Rational::zero();
                for i in 0..self.ambient_dim {
                    let d = x.coord(i) - center.coord(i);
                    d2 += &d * &d;
                }
                d2 < radius * radius
            }
        }
    }

    fn in_neighborhood_closure(&self, x: &RationalPoint) -> bool {
        match &self.neighborhood {
            Neighborhood::WholeSpace => true,
            Neighborhood::Ball { center, radius } => {
                let mut d2 = Rational::zero();
                for i in 0..self.ambient_dim {
                    let d = x.coord(i) - center.coord(i);
                    d2 += &d * &d;
                }
                d2 <= radius * radius
            }
        }
    }

    /// Exact three-way membership of a point against the domain closure.
    pub fn closure_membership(&self, x: &RationalPoint) -> Result<Membership, DomainError> {
        if x.dim() != self.ambient_dim {
            return Err(DomainError::PointDimension {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        let mut any_zero = false;
        for c in &self.constraints {
            let v = c.eval(x)?;
            if v.is_negative() {
                return Ok(Membership::Outside);
            }
            if v.is_zero() {
                any_zero = true;
            }
        }
        if any_zero {
            if self.in_neighborhood_closure(x) {
                Ok(Membership::Boundary)
            } else {
                Ok(Membership::Outside)
            }
        } else if self.in_neighborhood(x) {
            Ok(Membership::Interior)
        } else {
            Ok(Membership::Outside)
        }
    }

    /// Indices of constraints vanishing at `x`.
    pub fn active_set(&self, x: &RationalPoint) -> Result<Vec<usize>, DomainError> {
        let mut active = Vec::new();
        for (j, c) in self.constraints.iter().enumerate() {
            if c.eval(x)?.is_zero() {
                active.push(j);
            }
        }
        Ok(active)
    }
}

/// One horizontal band of holes: `holes` circles of radius
/// `(upper - lower) / 2` tangent to the lines `x1 = lower` and `x1 = upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub lower: Rational,
    pub upper: Rational,
    pub holes: usize,
}

impl Band {
    pub fn new(lower: Rational, upper: Rational, holes: usize) -> Self {
        Band {
            lower,
            upper,
            holes,
        }
    }

    pub fn radius(&self) -> Rational {
        (&self.upper - &self.lower) / rat(2)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.upper + &self.lower) / rat(2)
    }
}

/// Specification of a circle-arrangement domain: a large outer circle with
/// bands of hole circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSpec {
    pub bands: Vec<Band>,
    pub outer_center: RationalPoint,
    pub outer_radius: Rational,
}

impl BandSpec {
    pub fn new(bands: Vec<Band>, outer_center: RationalPoint, outer_radius: Rational) -> Self {
        BandSpec {
            bands,
            outer_center,
            outer_radius,
        }
    }

    /// Deterministic hole offsets for one band: spaced `3r` apart, centered
    /// symmetrically about the axis through the outer center, in ascending
    /// order. Odd counts place one hole on the axis.
    pub fn hole_offsets(holes: usize, radius: &Rational) -> Vec<Rational> {
        let step = rat(3) * radius;
        let n = holes as i64;
        let mut out = Vec::with_capacity(holes);
        if n % 2 == 1 {
            let half = (n - 1) / 2;
            for j in -half..=half {
                out.push(&step * rat(j));
            }
        } else {
            let half = n / 2;
            for j in -half..=half {
                if j != 0 {
                    out.push(&step * rat(j));
                }
            }
        }
        out
    }

    /// Hole circle layout (per band, ascending offsets), without validation.
    pub fn hole_circles(&self) -> Vec<CircleInfo> {
        let cy = self.outer_center.coord(1);
        let mut out = Vec::new();
        for band in &self.bands {
            let r = band.radius();
            let mid = band.midpoint();
            for offset in Self::hole_offsets(band.holes, &r) {
                out.push(CircleInfo {
                    offset_coord: 1,
                    center_sweep: mid.clone(),
                    center_offset: cy + &offset,
                    radius: r.clone(),
                    orientation: SphereOrientation::OutsidePositive,
                });
            }
        }
        out
    }

    /// Smallest outer radius the builder accepts for these bands, with the
    /// stated center: three times the largest band-endpoint distance from the
    /// center plus the largest hole offset.
    pub fn minimal_outer_radius(bands: &[Band], center_sweep: &Rational) -> Rational {
        let mut max_dist = Rational::zero();
        let mut max_offset = Rational::zero();
        for band in bands {
            for t in [&band.lower, &band.upper] {
                let d = (t - center_sweep).abs();
                if d > max_dist {
                    max_dist = d;
                }
            }
            let r = band.radius();
            for o in Self::hole_offsets(band.holes, &r) {
                let a = o.abs();
                if a > max_offset {
                    max_offset = a;
                }
            }
        }
        rat(3) * max_dist + max_offset
    }

    /// A generous default outer circle for these bands: centered on the band
    /// midrange, radius twice the minimum, rounded up to an integer.
    pub fn suggest_outer(bands: &[Band]) -> (RationalPoint, Rational) {
        assert!(!bands.is_empty(), "no bands to enclose");
        let lo = bands.first().unwrap().lower.clone();
        let hi = bands.last().unwrap().upper.clone();
        let center = (lo + hi) / rat(2);
        let min = Self::minimal_outer_radius(bands, &center);
        let doubled = min * rat(2);
        let radius = if doubled.is_integer() {
            doubled.clone() + rat(1)
        } else {
            doubled.ceil()
        };
        (
            RationalPoint::new(vec![center, Rational::zero()]),
            radius,
        )
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.outer_center.dim() != 2 {
            errs.push(format!(
                "outer_center must be 2-dimensional, got {}",
                self.outer_center.dim()
            ));
            return errs;
        }
        if !self.outer_radius.is_positive() {
            errs.push("outer_radius must be positive".to_string());
        }
        for (j, band) in self.bands.iter().enumerate() {
            if band.lower >= band.upper {
                errs.push(format!(
                    "band {} has lower {} >= upper {}",
                    j,
                    rational_str(&band.lower),
                    rational_str(&band.upper)
                ));
            }
            if band.holes == 0 {
                errs.push(format!("band {j} has no holes"));
            }
        }
        for j in 1..self.bands.len() {
            if self.bands[j - 1].upper > self.bands[j].lower {
                errs.push(format!(
                    "bands {} and {} overlap: {} > {}",
                    j - 1,
                    j,
                    rational_str(&self.bands[j - 1].upper),
                    rational_str(&self.bands[j].lower)
                ));
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        let cx = self.outer_center.coord(0);
        let cy = self.outer_center.coord(1);
        if !self.bands.is_empty() {
            let min_radius = Self::minimal_outer_radius(&self.bands, cx);
            if self.outer_radius < min_radius {
                errs.push(format!(
                    "outer_radius {} is below the separation floor {}",
                    rational_str(&self.outer_radius),
                    rational_str(&min_radius)
                ));
            }
        }
        // Packing: every hole stays at least one radius away from the outer
        // circle, i.e. dist(hole center, outer center) <= R - 2r.
        for hole in self.hole_circles() {
            let dx = &hole.center_sweep - cx;
            let dy = &hole.center_offset - cy;
            let d2 = &dx * &dx + &dy * &dy;
            let slack = &self.outer_radius - rat(2) * &hole.radius;
            if !slack.is_positive() || d2 > &slack * &slack {
                errs.push(format!(
                    "hole at ({}, {}) radius {} cannot be packed inside outer radius {}",
                    rational_str(&hole.center_sweep),
                    rational_str(&hole.center_offset),
                    rational_str(&hole.radius),
                    rational_str(&self.outer_radius)
                ));
            }
        }
        errs
    }
}

/// Expand a band spec into its circle-arrangement domain: one inside-positive
/// outer circle followed by the outside-positive hole circles, bands in
/// order, offsets ascending. Hole circles of consecutive bands that share a
/// boundary level and an offset are tangent; those pairs are recorded as
/// expected intersections.
pub fn build_band_domain(spec: &BandSpec) -> Result<NCDomain, DomainError> {
    let errs = spec.validate();
    if !errs.is_empty() {
        return Err(DomainError::Build(errs));
    }
    let outer = CircleInfo {
        offset_coord: 1,
        center_sweep: spec.outer_center.coord(0).clone(),
        center_offset: spec.outer_center.coord(1).clone(),
        radius: spec.outer_radius.clone(),
        orientation: SphereOrientation::InsidePositive,
    };
    let holes = spec.hole_circles();
    let mut errs = Vec::new();
    let mut expected = Vec::new();
    for i in 0..holes.len() {
        for j in (i + 1)..holes.len() {
            let a = &holes[i];
            let b = &holes[j];
            let dx = &a.center_sweep - &b.center_sweep;
            let dy = &a.center_offset - &b.center_offset;
            let d2 = &dx * &dx + &dy * &dy;
            let rsum = &a.radius + &b.radius;
            let r2 = &rsum * &rsum;
            if d2 < r2 {
                errs.push(format!(
                    "holes {} and {} overlap",
                    i + 1,
                    j + 1
                ));
            } else if d2 == r2 {
                // Tangent pair at a shared band boundary.
                expected.push((i + 1, j + 1));
            }
        }
    }
    if !errs.is_empty() {
        return Err(DomainError::Build(errs));
    }
    let mut infos = vec![outer];
    infos.extend(holes);
    let constraints: Vec<Polynomial> = infos.iter().map(|c| c.polynomial(2)).collect();
    NCDomain::with_shape(
        2,
        constraints,
        Neighborhood::WholeSpace,
        DomainShape::Circles(infos),
        expected,
        Some("band_builder".to_string()),
    )
}

/// Intersect the cylinder over `d1` (along a fresh last coordinate) with the
/// cylinder over `d2` (spread over the first and the fresh coordinate):
/// the result lives in one dimension higher and its slice at `x1 = t` is the
/// product of the factor slices at `t`.
pub fn lift_product(d1: &NCDomain, d2: &NCDomain) -> Result<NCDomain, DomainError> {
    if d2.ambient_dim() != 2 {
        return Err(DomainError::FactorNotPlanar {
            got: d2.ambient_dim(),
        });
    }
    let k = d1.ambient_dim();
    let new_dim = k + 1;
    let id_map: BTreeMap<usize, usize> = (0..k).map(|i| (i, i)).collect();
    let factor_map: BTreeMap<usize, usize> = [(0, 0), (1, k)].into_iter().collect();
    let mut constraints = Vec::new();
    for c in d1.constraints() {
        constraints.push(c.substitute_coords(&id_map, new_dim)?);
    }
    for c in d2.constraints() {
        constraints.push(c.substitute_coords(&factor_map, new_dim)?);
    }
    let neighborhood = match (d1.neighborhood(), d2.neighborhood()) {
        (Neighborhood::WholeSpace, Neighborhood::WholeSpace) => Neighborhood::WholeSpace,
        _ => {
            // Conservative enclosing ball around both neighborhoods.
            let big = |n: &Neighborhood, dim: usize| -> (Vec<Rational>, Rational) {
                match n {
                    Neighborhood::WholeSpace => (vec![Rational::zero(); dim], rat(0)),
                    Neighborhood::Ball { center, radius } => {
                        (center.coords().to_vec(), radius.clone())
                    }
                }
            };
            let (c1, r1) = big(d1.neighborhood(), k);
            let (c2, r2) = big(d2.neighborhood(), 2);
            let mut center = c1;
            center.push(c2[1].clone());
            let radius = if r1.is_zero() || r2.is_zero() {
                // One factor is unbounded; fall back to the bounded one
                // stretched by the other's data.
                (r1 + r2 + rat(1)) * rat(2)
            } else {
                (r1 + r2) * rat(2)
            };
            Neighborhood::Ball {
                center: RationalPoint::new(center),
                radius,
            }
        }
    };
    let l1 = d1.constraint_count();
    let shape = match (d1.shape(), d2.shape()) {
        (DomainShape::Circles(a), DomainShape::Circles(b)) => {
            let mut infos = a.clone();
            for c in b {
                let mut lifted = c.clone();
                lifted.offset_coord = k;
                infos.push(lifted);
            }
            DomainShape::Circles(infos)
        }
        _ => DomainShape::General,
    };
    let mut expected: Vec<(usize, usize)> = d1.expected_intersections().to_vec();
    expected.extend(
        d2.expected_intersections()
            .iter()
            .map(|&(a, b)| (a + l1, b + l1)),
    );
    // Cylinders from different factors intersect whenever their sweep
    // extents overlap.
    if let (DomainShape::Circles(a), DomainShape::Circles(b)) = (d1.shape(), d2.shape()) {
        for (i, ca) in a.iter().enumerate() {
            let (alo, ahi) = ca.sweep_extremes();
            for (j, cb) in b.iter().enumerate() {
                let (blo, bhi) = cb.sweep_extremes();
                if alo <= bhi && blo <= ahi {
                    expected.push((i, l1 + j));
                }
            }
        }
    }
    NCDomain::with_shape(
        new_dim,
        constraints,
        neighborhood,
        shape,
        expected,
        Some("lift_product".to_string()),
    )
}

/// Rank of a matrix of exact rationals by Gaussian elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        match pivot {
            None => {
                col += 1;
            }
            Some(p) => {
                m.swap(rank, p);
                let pv = m[rank][col].clone();
                for r in (rank + 1)..nrows {
                    if m[r][col].is_zero() {
                        continue;
                    }
                    let factor = &m[r][col] / &pv;
                    for c in col..ncols {
                        let delta = &factor * &m[rank][c];
                        m[r][c] = &m[r][c] - &delta;
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// One evaluated boundary sample in a transversality report.
#[derive(Debug, Clone)]
pub struct StratumSample {
    pub point: RationalPoint,
    pub active: Vec<usize>,
    pub gradients: Vec<Vec<Rational>>,
    pub rank: usize,
    pub ok: bool,
}

/// Result of sampling the boundary strata: at every sample the normal family
/// of the active constraints must have rank equal to the number of active
/// constraints.
#[derive(Debug, Clone)]
pub struct TransversalityReport {
    pub samples: Vec<StratumSample>,
    pub skipped: Vec<(RationalPoint, String)>,
    pub pass: bool,
}

impl TransversalityReport {
    pub fn failing(&self) -> impl Iterator<Item = &StratumSample> {
        self.samples.iter().filter(|s| !s.ok)
    }
}

/// Evaluate the transversality condition at the given boundary samples.
/// Samples on no constraint are skipped with a warning entry.
pub fn check_transversality(
    domain: &NCDomain,
    samples: &[RationalPoint],
) -> Result<TransversalityReport, DomainError> {
    let mut out = TransversalityReport {
        samples: Vec::new(),
        skipped: Vec::new(),
        pass: true,
    };
    for x in samples {
        if x.dim() != domain.ambient_dim() {
            return Err(DomainError::PointDimension {
                expected: domain.ambient_dim(),
                got: x.dim(),
            });
        }
        let active = domain.active_set(x)?;
        if active.is_empty() {
            out.skipped
                .push((x.clone(), "sample lies on no constraint zero set".to_string()));
            continue;
        }
        let gradients: Vec<Vec<Rational>> = active
            .iter()
            .map(|&j| domain.constraints()[j].gradient(x))
            .collect::<Result<_, _>>()?;
        let rank = rational_rank(&gradients);
        let ok = rank == active.len();
        if !ok {
            out.pass = false;
        }
        out.samples.push(StratumSample {
            point: x.clone(),
            active,
            gradients,
            rank,
            ok,
        });
    }
    Ok(out)
}

/// Rational points on each constraint circle via the tangent half-angle
/// parametrization; `per_circle` points per constraint. Only available for
/// circle-shaped domains.
pub fn sample_circle_points(
    domain: &NCDomain,
    per_circle: usize,
) -> Result<Vec<RationalPoint>, DomainError> {
    let infos = domain.circles().ok_or_else(|| DomainError::UnsupportedShape {
        reason: "default boundary sampling needs circle constraints".to_string(),
    })?;
    let dim = domain.ambient_dim();
    let mut out = Vec::new();
    for info in infos {
        for p in 0..per_circle {
            let mut coords = vec![Rational::zero(); dim];
            // Alternate parameter values 0, 1, -1, 2, -2, ... plus the
            // leftmost point in place of the unreachable parameter.
            if p == 1 {
                coords[0] = &info.center_sweep - &info.radius;
                coords[info.offset_coord] = info.center_offset.clone();
            } else {
                let t = if p == 0 {
                    rat(0)
                } else {
                    let half = (p / 2) as i64;
                    if p % 2 == 0 {
                        rat(half)
                    } else {
                        rat(-(half + 1))
                    }
                };
                let t2 = &t * &t;
                let denom = rat(1) + &t2;
                let cos = (rat(1) - &t2) / &denom;
                let sin = rat(2) * &t / &denom;
                coords[0] = &info.center_sweep + &info.radius * cos;
                coords[info.offset_coord] = &info.center_offset + &info.radius * sin;
            }
            out.push(RationalPoint::new(coords));
        }
    }
    Ok(out)
}

/// Sweep-coordinate extremes of every constraint circle, with the extreme
/// points, grouped by level. These are the singular values of the projection
/// to the first coordinate restricted to the boundary. Only defined for
/// 2-dimensional circle arrangements.
pub fn singular_levels(
    domain: &NCDomain,
) -> Result<Vec<(Rational, Vec<RationalPoint>)>, DomainError> {
    if domain.ambient_dim() != 2 {
        return Err(DomainError::UnsupportedShape {
            reason: format!(
                "singular levels need a 2-dimensional circle arrangement, got dimension {}",
                domain.ambient_dim()
            ),
        });
    }
    let infos = domain.circles().ok_or_else(|| DomainError::UnsupportedShape {
        reason: "singular levels need circle constraints".to_string(),
    })?;
    let mut grouped: BTreeMap<Rational, Vec<RationalPoint>> = BTreeMap::new();
    for info in infos {
        let (lo, hi) = info.sweep_extremes();
        for level in [lo, hi] {
            let point = RationalPoint::new(vec![level.clone(), info.center_offset.clone()]);
            grouped.entry(level).or_default().push(point);
        }
    }
    Ok(grouped.into_iter().collect())
}

/// Singular level values for any circle-cylinder domain (used for oracle
/// level snapping in dimensions 2 and 3).
pub fn singular_level_values(domain: &NCDomain) -> Option<Vec<Rational>> {
    let infos = domain.circles()?;
    let mut levels: Vec<Rational> = Vec::new();
    for info in infos {
        let (lo, hi) = info.sweep_extremes();
        for l in [lo, hi] {
            if !levels.contains(&l) {
                levels.push(l);
            }
        }
    }
    levels.sort();
    Some(levels)
}
