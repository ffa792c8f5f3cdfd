//! Spherical conics in canonical form `x²/a² + y²/b² − z²/c² = 0`, `a > b`.
//!
//! Coordinates are such that the x axis is the major axis, y the minor
//! axis and z the principal axis of the cone.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{HLine, HPoint, SymForm3};

/// Semi-axis parameters and the rotation into canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCanonical {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Rows are the major, minor and principal axes: `v_canonical = rotation · v`.
    pub rotation: Matrix3<f64>,
}

impl SphericalCanonical {
    pub fn form(&self) -> SymForm3 {
        canonical_form(self.a, self.b, self.c)
    }

    pub fn to_canonical(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn from_canonical(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.transpose() * v
    }
}

pub fn canonical_form(a: f64, b: f64, c: f64) -> SymForm3 {
    SymForm3::diag(1.0 / (a * a), 1.0 / (b * b), -1.0 / (c * c))
}

/// Diagonalize a cone of signature (+,+,−) by a rotation.
///
/// The parameters come from the literal eigenvalues of `s` (after a global
/// sign flip if needed), so `diag(1/4, 1, −1)` yields `a = 2, b = c = 1`.
pub fn canonicalize_spherical(s: &SymForm3) -> Result<SphericalCanonical> {
    if s.is_degenerate() {
        return Err(Error::DegenerateConic);
    }
    let sign = match s.signature() {
        (2, 1) => 1.0,
        (1, 2) => -1.0,
        _ => return Err(Error::WrongSignature),
    };
    let (w, v) = linalg::jacobi_eigen(&(s.matrix() * sign));
    // ascending: w[0] < 0 < w[1] <= w[2]
    let (l3, l1, l2) = (w[0], w[1], w[2]);
    if (l2 - l1) <= 1e-8 * l2.abs().max(l3.abs()) {
        return Err(Error::CircularCone);
    }
    let e1 = linalg::fix_sign(v.column(1).into_owned());
    let e2 = linalg::fix_sign(v.column(2).into_owned());
    let e3 = e1.cross(&e2);
    let rotation = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    Ok(SphericalCanonical { a: 1.0 / l1.sqrt(), b: 1.0 / l2.sqrt(), c: 1.0 / (-l3).sqrt(), rotation })
}

pub(crate) fn check(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a > b && b > 0.0 && c > 0.0) {
        return Err(Error::WrongSignature);
    }
    Ok(())
}

/// Planes whose parallel sections of the cone are circles.
pub fn cyclic_planes(a: f64, b: f64, c: f64) -> Result<[HLine; 2]> {
    check(a, b, c)?;
    let p = (1.0 / (b * b) - 1.0 / (a * a)).sqrt();
    let q = (1.0 / (c * c) + 1.0 / (a * a)).sqrt();
    let n = (p * p + q * q).sqrt();
    Ok([HLine::real(0.0, p / n, q / n), HLine::real(0.0, p / n, -q / n)])
}

/// Cocyclic lines as unit vectors in the upper hemisphere; the foci are `±F`.
pub fn foci(a: f64, b: f64, c: f64) -> Result<[Vector3<f64>; 2]> {
    check(a, b, c)?;
    let x = (a * a - b * b).sqrt();
    let z = (b * b + c * c).sqrt();
    let n = (x * x + z * z).sqrt();
    Ok([Vector3::new(x / n, 0.0, z / n), Vector3::new(-x / n, 0.0, z / n)])
}

pub fn foci_points(a: f64, b: f64, c: f64) -> Result<[HPoint; 2]> {
    let f = foci(a, b, c)?;
    Ok([HPoint::from_real(&f[0]), HPoint::from_real(&f[1])])
}

/// Director lines (poles of the cyclic planes) and directrix planes (polars of the foci).
///
/// Director `i` belongs to cyclic plane `i`; directrix `i` to focus `i`.
pub fn directors_directrices(a: f64, b: f64, c: f64) -> Result<([Vector3<f64>; 2], [HLine; 2])> {
    check(a, b, c)?;
    let y = b * (1.0 - b * b / (a * a)).sqrt();
    let z = c * (1.0 + c * c / (a * a)).sqrt();
    let n = (y * y + z * z).sqrt();
    let directors = [Vector3::new(0.0, y / n, -z / n), Vector3::new(0.0, y / n, z / n)];
    let p = (a * a - b * b).sqrt() / (a * a);
    let q = (b * b + c * c).sqrt() / (c * c);
    let directrices = [HLine::real(p, 0.0, -q), HLine::real(-p, 0.0, -q)];
    Ok((directors, directrices))
}

/// Which coordinate axis a cylinder projection runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Major,
    Minor,
    Principal,
}

/// `p u² + q v² = rhs` in the two coordinates orthogonal to `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarConic {
    pub axis: Axis,
    /// Indices of the coordinates `u`, `v`.
    pub coords: (usize, usize),
    pub p: f64,
    pub q: f64,
    pub rhs: f64,
}

impl PlanarConic {
    pub fn is_hyperbola(&self) -> bool {
        self.p * self.q < 0.0
    }

    pub fn residual(&self, v: &Vector3<f64>) -> f64 {
        let (i, j) = self.coords;
        self.p * v[i] * v[i] + self.q * v[j] * v[j] - self.rhs
    }
}

/// Orthogonal projections of the spherical conic along its three axes.
pub fn axis_projections(a: f64, b: f64, c: f64) -> Result<[PlanarConic; 3]> {
    check(a, b, c)?;
    let (ia, ib, ic) = (1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
    Ok([
        PlanarConic { axis: Axis::Principal, coords: (0, 1), p: ia + ic, q: ib + ic, rhs: ic },
        PlanarConic { axis: Axis::Major, coords: (1, 2), p: ib - ia, q: -(ia + ic), rhs: -ia },
        PlanarConic { axis: Axis::Minor, coords: (0, 2), p: ib - ia, q: ib + ic, rhs: ib },
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `(1/a²−λ)x² + (1/b²−λ)y² − (1/c²+λ)z² = 0`
    SharedFocalLines,
    /// `x²/(a²−λ) + y²/(b²−λ) − z²/(c²+λ) = 0`
    Confocal,
}

/// Open parameter intervals on which the family member is a real nondegenerate conic.
pub fn family_window(a: f64, b: f64, c: f64, kind: FamilyKind) -> [(f64, f64); 2] {
    match kind {
        FamilyKind::SharedFocalLines => [(-1.0 / (c * c), 1.0 / (a * a)), (1.0 / (a * a), 1.0 / (b * b))],
        FamilyKind::Confocal => [(-c * c, b * b), (b * b, a * a)],
    }
}

pub fn family_member(a: f64, b: f64, c: f64, lambda: f64, kind: FamilyKind) -> Result<SymForm3> {
    check(a, b, c)?;
    let w = family_window(a, b, c, kind);
    if !w.iter().any(|&(lo, hi)| lambda > lo && lambda < hi) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(match kind {
        FamilyKind::SharedFocalLines => {
            SymForm3::diag(1.0 / (a * a) - lambda, 1.0 / (b * b) - lambda, -(1.0 / (c * c) + lambda))
        }
        FamilyKind::Confocal => SymForm3::diag(1.0 / (a * a - lambda), 1.0 / (b * b - lambda), -1.0 / (c * c + lambda)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialFlags {
    pub right_angle_locus: bool,
    pub thales_envelope: bool,
    pub spherical_parabola: bool,
}

/// Flags for the three special classes, each decided at relative tolerance 1e-9.
///
/// The right-angle locus satisfies `1/b² = 1/a² + 1/c²` (the endpoints of the
/// arc are the normals of the cyclic planes and lie on the conic); the
/// Thales envelope is its polar, `a² = b² + c²`; the parabola has `a = c`.
pub fn special_flags(a: f64, b: f64, c: f64) -> SpecialFlags {
    let rel = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs());
    SpecialFlags {
        right_angle_locus: rel(1.0 / (b * b), 1.0 / (a * a) + 1.0 / (c * c)),
        thales_envelope: rel(a * a, b * b + c * c),
        spherical_parabola: rel(a, c),
    }
}

/// Point of the upper component at parameter `t`: `(a cos t, b sin t, c)` normalized.
pub fn spherical_point(a: f64, b: f64, c: f64, t: f64) -> Vector3<f64> {
    Vector3::new(a * t.cos(), b * t.sin(), c).normalize()
}

/// Angular diameter of one component: the angle between `(a,0,c)` and `(−a,0,c)`.
pub fn component_diameter(a: f64, c: f64) -> f64 {
    2.0 * a.atan2(c)
}
