//! Conics in the hyperbolic-de Sitter plane: classification, focal data,
//! cycles and the orthoptic conic.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::linalg::{self, CVec3};
use crate::projective::{
    conic_intersections, join, meet, polar_conic, ContactPattern, GeometryContext, HLine, HPoint, IntersectionSet,
    Region, SymForm3,
};
use crate::sample::ConicParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HypClass {
    Ellipse,
    ConvexHyperbola,
    ConcaveHyperbola,
    Semihyperbola,
    DeSitterEllipse,
    DeSitterHyperbola,
    EllipticParabola,
    DeSitterEllipticParabola,
    ConvexHypParabola,
    ConcaveHypParabola,
    DeSitterParabola,
    OsculatingParabola,
    Circle,
    Horocycle,
    Hypercycle,
    Degenerate,
}

impl HypClass {
    pub const ALL: [HypClass; 16] = [
        HypClass::Ellipse,
        HypClass::ConvexHyperbola,
        HypClass::ConcaveHyperbola,
        HypClass::Semihyperbola,
        HypClass::DeSitterEllipse,
        HypClass::DeSitterHyperbola,
        HypClass::EllipticParabola,
        HypClass::DeSitterEllipticParabola,
        HypClass::ConvexHypParabola,
        HypClass::ConcaveHypParabola,
        HypClass::DeSitterParabola,
        HypClass::OsculatingParabola,
        HypClass::Circle,
        HypClass::Horocycle,
        HypClass::Hypercycle,
        HypClass::Degenerate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HypClass::Ellipse => "Ellipse",
            HypClass::ConvexHyperbola => "ConvexHyperbola",
            HypClass::ConcaveHyperbola => "ConcaveHyperbola",
            HypClass::Semihyperbola => "Semihyperbola",
            HypClass::DeSitterEllipse => "DeSitterEllipse",
            HypClass::DeSitterHyperbola => "DeSitterHyperbola",
            HypClass::EllipticParabola => "EllipticParabola",
            HypClass::DeSitterEllipticParabola => "DeSitterEllipticParabola",
            HypClass::ConvexHypParabola => "ConvexHypParabola",
            HypClass::ConcaveHypParabola => "ConcaveHypParabola",
            HypClass::DeSitterParabola => "DeSitterParabola",
            HypClass::OsculatingParabola => "OsculatingParabola",
            HypClass::Circle => "Circle",
            HypClass::Horocycle => "Horocycle",
            HypClass::Hypercycle => "Hypercycle",
            HypClass::Degenerate => "Degenerate",
        }
    }

    /// Contact pattern with the absolute implied by the class.
    pub fn pattern(&self) -> Option<ContactPattern> {
        use HypClass::*;
        Some(match self {
            Ellipse | ConvexHyperbola | ConcaveHyperbola | Semihyperbola | DeSitterEllipse | DeSitterHyperbola => {
                ContactPattern::Simple
            }
            EllipticParabola | DeSitterEllipticParabola | ConvexHypParabola | ConcaveHypParabola | DeSitterParabola => {
                ContactPattern::Tangent
            }
            OsculatingParabola => ContactPattern::Osculating,
            Circle | Hypercycle => ContactPattern::DoubleContact,
            Horocycle => ContactPattern::Hyperosculating,
            Degenerate => return None,
        })
    }
}

impl std::fmt::Display for HypClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for HypClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HypClass::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::ValidationError(format!("unknown class {s}")))
    }
}

/// A class together with its evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: HypClass,
    /// Intersection with the absolute (absent for degenerate forms).
    pub points: Option<IntersectionSet>,
    /// Common tangents with the absolute, as line coordinates.
    pub tangents: Option<IntersectionSet>,
}

pub(crate) fn require_hyperbolic(ctx: &GeometryContext) -> Result<()> {
    if !ctx.is_hyperbolic() {
        return Err(Error::WrongContext("hyperbolic absolute required".into()));
    }
    Ok(())
}

/// Real simple elements (multiplicity 1) of an intersection set.
fn simple_real(is: &IntersectionSet) -> usize {
    is.points.iter().filter(|(p, m)| *m == 1 && p.is_real()).count()
}

/// Region of the real points of an indefinite conic that does not cross the absolute.
fn real_points_region(s: &SymForm3, ctx: &GeometryContext, avoid: &[HPoint]) -> Region {
    let cp = ConicParam::new(s).expect("indefinite");
    let mut best = (0.0f64, Region::Ideal);
    for k in 0..7 {
        let v = cp.point(0.37 + k as f64 * 0.45);
        let hv = HPoint::from_real(&v);
        if avoid.iter().any(|a| a.distance(&hv) < 1e-3) {
            continue;
        }
        let o = ctx.omega(&v, &v).abs();
        if o > best.0 {
            best = (o, ctx.region(&v));
        }
    }
    best.1
}

/// Classify a conic with respect to a hyperbolic absolute.
///
/// Degenerate forms classify as [`HypClass::Degenerate`] without evidence.
pub fn classify(s: &SymForm3, ctx: &GeometryContext) -> Result<Classification> {
    require_hyperbolic(ctx)?;
    let s = s.normalize()?;
    if s.is_degenerate() {
        return Ok(Classification { class: HypClass::Degenerate, points: None, tangents: None });
    }
    let (pos, neg) = s.signature();
    if pos == 0 || neg == 0 {
        return Err(Error::DefiniteForm);
    }
    let o = ctx.absolute();
    let pts = conic_intersections(&s, o)?;
    let tans = conic_intersections(&s.dual()?, &o.dual()?)?;
    let class = match pts.pattern {
        ContactPattern::Simple => {
            if tans.pattern != ContactPattern::Simple {
                return Err(Error::IllConditioned(format!(
                    "absolute points {} but absolute tangents {}",
                    pts.pattern, tans.pattern
                )));
            }
            match (pts.real_count(), tans.real_count()) {
                (0, 0) => match real_points_region(&s, ctx, &[]) {
                    Region::Hyperbolic => HypClass::Ellipse,
                    _ => HypClass::DeSitterEllipse,
                },
                (0, 4) => HypClass::DeSitterHyperbola,
                (4, 0) => HypClass::ConvexHyperbola,
                (4, 4) => HypClass::ConcaveHyperbola,
                (2, 2) => HypClass::Semihyperbola,
                (r, t) => {
                    return Err(Error::IllConditioned(format!("{r} real absolute points with {t} real tangents")))
                }
            }
        }
        ContactPattern::Tangent => {
            let rp = simple_real(&pts) > 0;
            let rt = simple_real(&tans) > 0;
            match (rp, rt) {
                (true, false) => HypClass::ConvexHypParabola,
                (true, true) => HypClass::ConcaveHypParabola,
                (false, true) => HypClass::DeSitterParabola,
                (false, false) => {
                    let touch: Vec<HPoint> = pts.points.iter().filter(|p| p.1 == 2).map(|p| p.0).collect();
                    match real_points_region(&s, ctx, &touch) {
                        Region::Hyperbolic => HypClass::EllipticParabola,
                        _ => HypClass::DeSitterEllipticParabola,
                    }
                }
            }
        }
        ContactPattern::Osculating => HypClass::OsculatingParabola,
        ContactPattern::DoubleContact => {
            if pts.points[0].0.is_real() {
                HypClass::Hypercycle
            } else {
                HypClass::Circle
            }
        }
        ContactPattern::Hyperosculating => HypClass::Horocycle,
    };
    Ok(Classification { class, points: Some(pts), tangents: Some(tans) })
}

/// A focal line with its type (hyperbolic, tangent to the absolute, or de Sitter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalLine {
    pub line: HLine,
    /// `None` for non-real lines.
    pub region: Option<Region>,
}

/// A focus with its region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Focus {
    pub point: HPoint,
    pub region: Option<Region>,
}

/// Region of a real point; `None` if not real.
pub fn point_region(p: &HPoint, ctx: &GeometryContext) -> Option<Region> {
    p.to_real().map(|v| ctx.region(&v))
}

/// Type of a real line: hyperbolic if it crosses the absolute, ideal if
/// tangent, de Sitter if it misses it.
pub fn line_region(l: &HLine, ctx: &GeometryContext) -> Option<Region> {
    let v = l.to_real()?;
    Some(match ctx.line_region(&v) {
        Region::DeSitter => Region::Hyperbolic,
        Region::Ideal => Region::Ideal,
        Region::Hyperbolic => Region::DeSitter,
    })
}

const MATCHINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// For each of the three matchings of the four (repeated) elements, the pair
/// of "joins"; a repeated element is joined with itself through `same`.
fn matched_pairs(
    elems: &[HPoint],
    pair: impl Fn(&CVec3, &CVec3) -> CVec3,
    same: impl Fn(&CVec3) -> CVec3,
) -> Vec<[CVec3; 2]> {
    let mut out: Vec<[CVec3; 2]> = Vec::new();
    for m in MATCHINGS {
        let mk = |(i, j): (usize, usize)| {
            let (a, b) = (elems[i].coords, elems[j].coords);
            if elems[i].distance(&elems[j]) < 1e-7 {
                linalg::cnormalize(&same(&a))
            } else {
                linalg::cnormalize(&pair(&a, &b))
            }
        };
        let pr = [mk(m[0]), mk(m[1])];
        let dup = out.iter().any(|q| {
            let d = |x: &CVec3, y: &CVec3| linalg::cparallel(x, y) < 1e-7;
            (d(&q[0], &pr[0]) && d(&q[1], &pr[1])) || (d(&q[0], &pr[1]) && d(&q[1], &pr[0]))
        });
        if !dup {
            out.push(pr);
        }
    }
    out
}

fn absolute_points(s: &SymForm3, ctx: &GeometryContext) -> Result<IntersectionSet> {
    conic_intersections(s, ctx.absolute())
}

/// Focal lines: joins of matched absolute points, grouped in pairs.
///
/// A repeated absolute point is joined to itself along its tangent to the absolute.
pub fn focal_lines(s: &SymForm3, ctx: &GeometryContext) -> Result<Vec<[FocalLine; 2]>> {
    let pts = absolute_points(s, ctx)?;
    let o = ctx.absolute().cmatrix();
    let pairs = matched_pairs(&pts.expanded(), |a, b| a.cross(b), |a| o * a);
    Ok(pairs
        .into_iter()
        .map(|pr| {
            pr.map(|c| {
                let line = HLine::new(c);
                FocalLine { line, region: line_region(&line, ctx) }
            })
        })
        .collect())
}

/// Foci as absolute poles of the focal lines of the polar conic.
pub fn foci(s: &SymForm3, ctx: &GeometryContext) -> Result<Vec<[Focus; 2]>> {
    let sp = polar_conic(s, ctx)?;
    let oi = linalg::to_complex_mat(&ctx.omega_inv());
    Ok(focal_lines(&sp, ctx)?
        .into_iter()
        .map(|pr| {
            pr.map(|fl| {
                let point = HPoint::new(linalg::cnormalize(&(oi * fl.line.coeffs)));
                Focus { point, region: point_region(&point, ctx) }
            })
        })
        .collect())
}

/// Foci as intersections of matched common tangents of the conic and the absolute.
pub fn foci_by_tangents(s: &SymForm3, ctx: &GeometryContext) -> Result<Vec<[Focus; 2]>> {
    let tans = conic_intersections(&s.dual()?, &ctx.absolute().dual()?)?;
    let oi = linalg::to_complex_mat(&ctx.omega_inv());
    let pairs = matched_pairs(&tans.expanded(), |a, b| a.cross(b), |a| oi * a);
    Ok(pairs
        .into_iter()
        .map(|pr| {
            pr.map(|c| {
                let point = HPoint::new(c);
                Focus { point, region: point_region(&point, ctx) }
            })
        })
        .collect())
}

/// Centers (meets of focal-line pairs) and axes (joins of focus pairs).
///
/// Only defined when the conic has four distinct absolute points.
pub fn centers_axes(s: &SymForm3, ctx: &GeometryContext) -> Result<(Vec<Focus>, Vec<FocalLine>)> {
    let pts = absolute_points(s, ctx)?;
    if pts.pattern != ContactPattern::Simple {
        return Err(Error::NoSelfPolarTriangle);
    }
    let centers = focal_lines(s, ctx)?
        .iter()
        .map(|[a, b]| {
            let p = meet(&a.line, &b.line).normalized();
            Focus { point: p, region: point_region(&p, ctx) }
        })
        .collect();
    let axes = foci(s, ctx)?
        .iter()
        .map(|[a, b]| {
            let l = join(&a.point, &b.point).normalized();
            FocalLine { line: l, region: line_region(&l, ctx) }
        })
        .collect();
    Ok((centers, axes))
}

/// Directors (poles of focal lines w.r.t. the conic) and directrices (polars of foci).
pub fn directors_directrices(s: &SymForm3, ctx: &GeometryContext) -> Result<(Vec<Focus>, Vec<FocalLine>)> {
    let sd = linalg::to_complex_mat(&s.dual()?.matrix());
    let sm = s.cmatrix();
    let directors = focal_lines(s, ctx)?
        .iter()
        .flatten()
        .map(|fl| {
            let p = HPoint::new(linalg::cnormalize(&(sd * fl.line.coeffs)));
            Focus { point: p, region: point_region(&p, ctx) }
        })
        .collect();
    let directrices = foci(s, ctx)?
        .iter()
        .flatten()
        .map(|f| {
            let l = HLine::new(linalg::cnormalize(&(sm * f.point.coords)));
            FocalLine { line: l, region: line_region(&l, ctx) }
        })
        .collect();
    Ok((directors, directrices))
}

/// Everything focal about a conic.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalData {
    pub focal_line_pairs: Vec<[FocalLine; 2]>,
    pub focus_pairs: Vec<[Focus; 2]>,
    pub centers: Vec<Focus>,
    pub axes: Vec<FocalLine>,
    pub directors: Vec<Focus>,
    pub directrices: Vec<FocalLine>,
}

pub fn focal_data(s: &SymForm3, ctx: &GeometryContext) -> Result<FocalData> {
    let (centers, axes) = match centers_axes(s, ctx) {
        Ok(x) => x,
        Err(Error::NoSelfPolarTriangle) => (vec![], vec![]),
        Err(e) => return Err(e),
    };
    let (directors, directrices) = directors_directrices(s, ctx)?;
    Ok(FocalData {
        focal_line_pairs: focal_lines(s, ctx)?,
        focus_pairs: foci(s, ctx)?,
        centers,
        axes,
        directors,
        directrices,
    })
}

/// The cycle `Ω(x,x) + c·Ω(x,p)² = 0`.
pub fn cycle_from_center(p: &Vector3<f64>, cparam: f64, ctx: &GeometryContext) -> Result<SymForm3> {
    require_hyperbolic(ctx)?;
    let op = ctx.absolute().matrix() * p;
    let s = ctx.absolute().add(&SymForm3::outer(&op).scale(cparam));
    let (pos, neg) = s.signature();
    if pos == 0 || neg == 0 {
        return Err(Error::EmptyConic);
    }
    Ok(s)
}

/// Circle of hyperbolic radius `r` about the hyperbolic point `p`.
pub fn circle(p: &Vector3<f64>, r: f64, ctx: &GeometryContext) -> Result<SymForm3> {
    let n = -ctx.omega(p, p);
    if n <= 0.0 {
        return Err(Error::WrongContext("circle center must be a hyperbolic point".into()));
    }
    let c = 1.0 / (n * r.cosh().powi(2));
    cycle_from_center(p, c, ctx)
}

/// Locus of points whose tangent pair is conjugate w.r.t. the absolute:
/// `tr(Ω⁻¹S)·S − S Ω⁻¹ S`.
pub fn orthoptic_conic(s: &SymForm3, ctx: &GeometryContext) -> Result<SymForm3> {
    if s.is_degenerate() {
        return Err(Error::DegenerateConic);
    }
    let sm = s.normalize()?.matrix();
    let oi = ctx.omega_inv();
    let m = sm * (oi * sm).trace() - sm * oi * sm;
    let f = SymForm3::from_matrix(&m);
    if f.is_degenerate() {
        return Err(Error::DegenerateConic);
    }
    f.normalize()
}
