//! Symmetric forms, homogeneous points and lines, polarity and intersections.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg::{self, adjugate, cdot, cnorm, cross_matrix, to_complex, to_complex_mat, CMat3, CVec3, C64};
use crate::poly::{self, BinaryRoot};
use crate::tol;

/// A real symmetric 3x3 form, stored as its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymForm3 {
    m: [f64; 6],
}

impl SymForm3 {
    pub const fn new(m00: f64, m01: f64, m02: f64, m11: f64, m12: f64, m22: f64) -> Self {
        SymForm3 { m: [m00, m01, m02, m11, m12, m22] }
    }

    pub const fn from_entries(m: [f64; 6]) -> Self {
        SymForm3 { m }
    }

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, 0.0, 0.0, b, 0.0, c)
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0, 1.0)
    }

    /// Symmetric part of `m`.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let s = (m + m.transpose()) * 0.5;
        Self::new(s[(0, 0)], s[(0, 1)], s[(0, 2)], s[(1, 1)], s[(1, 2)], s[(2, 2)])
    }

    /// `v vᵀ`
    pub fn outer(v: &Vector3<f64>) -> Self {
        Self::from_matrix(&(v * v.transpose()))
    }

    /// `(u vᵀ + v uᵀ) / 2`
    pub fn sym_outer(u: &Vector3<f64>, v: &Vector3<f64>) -> Self {
        Self::from_matrix(&(u * v.transpose()))
    }

    pub fn entries(&self) -> [f64; 6] {
        self.m
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        let [a, b, c, d, e, f] = self.m;
        Matrix3::new(a, b, c, b, d, e, c, e, f)
    }

    pub fn cmatrix(&self) -> CMat3 {
        to_complex_mat(&self.matrix())
    }

    pub fn frobenius(&self) -> f64 {
        self.matrix().norm()
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3] + self.m[5]
    }

    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { m: self.m.map(|x| x * k) }
    }

    pub fn add(&self, o: &SymForm3) -> Self {
        let mut m = self.m;
        for (x, y) in m.iter_mut().zip(o.m) {
            *x += y;
        }
        Self { m }
    }

    /// `λ self + μ other`
    pub fn combine(&self, l: f64, o: &SymForm3, mu: f64) -> Self {
        self.scale(l).add(&o.scale(mu))
    }

    /// Unit Frobenius norm, nonnegative trace; first nonzero entry positive if the trace vanishes.
    pub fn normalize(&self) -> Result<SymForm3> {
        let amax = self.m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if amax <= tol::ZERO {
            return Err(Error::ZeroForm);
        }
        // pre-scale by the largest entry so that proportional inputs agree bit for bit
        let pre = self.scale(1.0 / amax);
        let n = pre.frobenius();
        let mut out = pre.scale(1.0 / n);
        let tr = out.trace();
        let flip = if tr.abs() > 1e-12 {
            tr < 0.0
        } else {
            let first = out.m.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
            first < 0.0
        };
        if flip {
            out = out.scale(-1.0);
        }
        Ok(out)
    }

    /// Normalized determinant: `det / ‖f‖³`.
    pub fn relative_det(&self) -> f64 {
        let n = self.frobenius();
        if n == 0.0 {
            return 0.0;
        }
        self.det() / (n * n * n)
    }

    /// Number of singular values above [`tol::RANK`] relative to the largest.
    pub fn rank(&self) -> usize {
        linalg::rank_with(&self.cmatrix(), tol::RANK)
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank() < 3
    }

    /// Counts of positive and negative eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        let (w, _) = linalg::jacobi_eigen(&self.matrix());
        let big = w.abs().max();
        let pos = w.iter().filter(|&&x| x > tol::RANK * big).count();
        let neg = w.iter().filter(|&&x| x < -tol::RANK * big).count();
        (pos, neg)
    }

    pub fn adjugate(&self) -> SymForm3 {
        Self::from_matrix(&adjugate(&self.matrix()))
    }

    /// The dual (line) conic: normalized adjugate.
    pub fn dual(&self) -> Result<SymForm3> {
        if self.is_degenerate() {
            return Err(Error::DegenerateConic);
        }
        self.adjugate().normalize()
    }

    pub fn eval(&self, p: &HPoint) -> C64 {
        self.bilinear(p, p)
    }

    pub fn bilinear(&self, p: &HPoint, q: &HPoint) -> C64 {
        cdot(&p.coords, &(self.cmatrix() * q.coords))
    }

    pub fn eval_real(&self, v: &Vector3<f64>) -> f64 {
        self.bilinear_real(v, v)
    }

    pub fn bilinear_real(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u.dot(&(self.matrix() * v))
    }

    /// True when the two forms agree up to a nonzero real factor.
    pub fn proportional(&self, o: &SymForm3, tol: f64) -> bool {
        match (self.normalize(), o.normalize()) {
            (Ok(a), Ok(b)) => {
                let d1 = a.m.iter().zip(b.m).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                let d2 = a.m.iter().zip(b.m).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
                d1.min(d2) <= tol
            }
            _ => false,
        }
    }

    /// Projective distance of two forms: zero iff proportional.
    pub fn projective_residual(&self, o: &SymForm3) -> f64 {
        match (self.normalize(), o.normalize()) {
            (Ok(a), Ok(b)) => {
                let d1 = a.m.iter().zip(b.m).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                let d2 = a.m.iter().zip(b.m).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
                d1.min(d2)
            }
            _ => f64::INFINITY,
        }
    }

    /// `Gᵀ S G`: the form pulled back along the point map `x ↦ G x`.
    pub fn pullback(&self, g: &Matrix3<f64>) -> SymForm3 {
        Self::from_matrix(&(g.transpose() * self.matrix() * g))
    }
}

macro_rules! homogeneous {
    ($name:ident, $field:ident) => {
        impl $name {
            pub fn new(c: CVec3) -> Self {
                $name { $field: c }
            }

            pub fn real(x: f64, y: f64, z: f64) -> Self {
                Self::from_real(&Vector3::new(x, y, z))
            }

            pub fn from_real(v: &Vector3<f64>) -> Self {
                $name { $field: to_complex(v) }
            }

            pub fn is_real(&self) -> bool {
                linalg::imag_ratio(&self.$field) <= tol::REAL
            }

            /// Real representative (largest entry scaled to 1) when the element is real.
            pub fn to_real(&self) -> Option<Vector3<f64>> {
                if !self.is_real() {
                    return None;
                }
                Some(linalg::cnormalize(&self.$field).map(|z| z.re))
            }

            /// Real part of the normalized coordinates, regardless of reality.
            pub fn real_part(&self) -> Vector3<f64> {
                linalg::cnormalize(&self.$field).map(|z| z.re)
            }

            pub fn normalized(&self) -> Self {
                $name { $field: linalg::cnormalize(&self.$field) }
            }

            pub fn conj(&self) -> Self {
                $name { $field: self.$field.map(|z| z.conj()) }
            }

            /// Zero iff the two triples are proportional.
            pub fn distance(&self, o: &Self) -> f64 {
                linalg::cparallel(&self.$field, &o.$field)
            }

            pub fn same(&self, o: &Self, tol: f64) -> bool {
                self.distance(o) <= tol
            }
        }
    };
}

/// A point of the complex projective plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub coords: CVec3,
}

/// A line of the complex projective plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLine {
    pub coeffs: CVec3,
}

homogeneous!(HPoint, coords);
homogeneous!(HLine, coeffs);

impl HPoint {
    /// Reinterpret as a line with the same coordinates.
    pub fn as_line(&self) -> HLine {
        HLine { coeffs: self.coords }
    }

    pub fn lies_on(&self, l: &HLine) -> bool {
        incidence(l, self) <= 1e-9
    }
}

impl HLine {
    pub fn as_point(&self) -> HPoint {
        HPoint { coords: self.coeffs }
    }
}

/// Line through two points.
pub fn join(p: &HPoint, q: &HPoint) -> HLine {
    HLine { coeffs: p.coords.cross(&q.coords) }
}

/// Intersection of two lines.
pub fn meet(l: &HLine, m: &HLine) -> HPoint {
    HPoint { coords: l.coeffs.cross(&m.coeffs) }
}

/// Scale-free incidence residual `|⟨ℓ,p⟩| / (|ℓ||p|)`.
pub fn incidence(l: &HLine, p: &HPoint) -> f64 {
    let d = cnorm(&l.coeffs) * cnorm(&p.coords);
    if d == 0.0 {
        return 0.0;
    }
    cdot(&l.coeffs, &p.coords).norm() / d
}

/// Scale-free residual `|f(p,p)| / (‖f‖ |p|²)`.
pub fn on_conic_residual(f: &SymForm3, p: &HPoint) -> f64 {
    let n = cnorm(&p.coords);
    f.eval(p).norm() / (f.frobenius() * n * n)
}

/// Region of a real point relative to a hyperbolic absolute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Hyperbolic,
    Ideal,
    DeSitter,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::Hyperbolic => "hyperbolic",
            Region::Ideal => "ideal",
            Region::DeSitter => "de-sitter",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    Spherical,
    Hyperbolic,
}

/// The absolute conic together with its kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryContext {
    absolute: SymForm3,
    kind: GeometryKind,
}

impl GeometryContext {
    /// Ω = x² + y² + z².
    pub fn spherical() -> Self {
        GeometryContext { absolute: SymForm3::identity(), kind: GeometryKind::Spherical }
    }

    /// Ω = x² + y² − z².
    pub fn hyperbolic() -> Self {
        GeometryContext { absolute: SymForm3::diag(1.0, 1.0, -1.0), kind: GeometryKind::Hyperbolic }
    }

    /// Arbitrary nondegenerate absolute, rescaled to `|det| = 1`.
    ///
    /// The sign is chosen so that a definite form is positive and an
    /// indefinite one has signature (+,+,−).
    pub fn new(absolute: SymForm3) -> Result<Self> {
        if absolute.is_degenerate() {
            return Err(Error::DegenerateConic);
        }
        let (pos, neg) = absolute.signature();
        let (sign, kind) = match (pos, neg) {
            (3, 0) => (1.0, GeometryKind::Spherical),
            (0, 3) => (-1.0, GeometryKind::Spherical),
            (2, 1) => (1.0, GeometryKind::Hyperbolic),
            (1, 2) => (-1.0, GeometryKind::Hyperbolic),
            _ => return Err(Error::WrongSignature),
        };
        let k = absolute.det().abs().cbrt();
        Ok(GeometryContext { absolute: absolute.scale(sign / k), kind })
    }

    pub fn absolute(&self) -> &SymForm3 {
        &self.absolute
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind == GeometryKind::Hyperbolic
    }

    pub fn omega(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        self.absolute.bilinear_real(u, v)
    }

    /// Ω⁻¹ (the dual absolute as a matrix, with `Ω Ω⁻¹ = I`).
    pub fn omega_inv(&self) -> Matrix3<f64> {
        self.absolute.matrix().try_inverse().expect("absolute is nondegenerate")
    }

    /// A timelike vector fixing the sheet of the hyperboloid: `Ω(t,t) < 0`.
    pub fn time(&self) -> Vector3<f64> {
        let (w, v) = linalg::jacobi_eigen(&self.absolute.matrix());
        let t = linalg::fix_sign(v.column(0).into_owned());
        if self.kind == GeometryKind::Hyperbolic {
            t / (-w[0]).sqrt()
        } else {
            t
        }
    }

    /// Region of a real point, with a deadband on the unit-scaled absolute value.
    pub fn region(&self, v: &Vector3<f64>) -> Region {
        let n = v.norm_squared();
        let o = self.omega(v, v) / n;
        if o < -tol::REGION {
            Region::Hyperbolic
        } else if o > tol::REGION {
            Region::DeSitter
        } else {
            Region::Ideal
        }
    }

    /// Region of a real line: the region of its absolute pole.
    pub fn line_region(&self, l: &Vector3<f64>) -> Region {
        self.region(&(self.omega_inv() * l))
    }
}

/// Polar line of `p` with respect to `f`.
pub fn polar_of_point(f: &SymForm3, p: &HPoint) -> HLine {
    HLine { coeffs: f.cmatrix() * p.coords }
}

/// Pole of `l` with respect to the nondegenerate form `f`.
pub fn pole_of_line(f: &SymForm3, l: &HLine) -> Result<HPoint> {
    let d = f.dual()?;
    Ok(HPoint { coords: d.cmatrix() * l.coeffs })
}

/// The polar conic `Ω S⁻¹ Ω`.
pub fn polar_conic(s: &SymForm3, ctx: &GeometryContext) -> Result<SymForm3> {
    let d = s.dual()?;
    let o = ctx.absolute().matrix();
    SymForm3::from_matrix(&(o * d.matrix() * o)).normalize()
}

/// The pair of tangents from a point to a conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPair {
    pub form: SymForm3,
    pub lines: [HLine; 2],
}

/// Tangents to `s` through the real point `p`: `S(p,p) S − (Sp)(Sp)ᵀ`.
///
/// A point on the conic yields its tangent counted twice.
pub fn tangent_pair_from_point(s: &SymForm3, p: &HPoint) -> Result<TangentPair> {
    let v = p.to_real().ok_or(Error::IllConditioned("tangent pair needs a real point".into()))?;
    let v = v / v.norm();
    let sn = s.normalize()?;
    let sp = sn.matrix() * v;
    let spp = v.dot(&sp);
    if spp.abs() <= 1e-12 {
        let t = HLine::from_real(&sp);
        return Ok(TangentPair { form: SymForm3::outer(&sp), lines: [t, t] });
    }
    let m = sn.matrix() * spp - sp * sp.transpose();
    let form = SymForm3::from_matrix(&m);
    let (a, b) = split_degenerate(&to_complex_mat(&m))?;
    Ok(TangentPair { form, lines: [HLine::new(a), HLine::new(b)] })
}

/// Factor a complex symmetric form of rank ≤ 2 as `(a bᵀ + b aᵀ)/2`.
///
/// For rank one the two factors coincide.
pub fn split_degenerate(m: &CMat3) -> Result<(CVec3, CVec3)> {
    let s = linalg::singular_values(m);
    if s[0] == 0.0 {
        return Err(Error::ZeroForm);
    }
    let m = m / C64::new(s[0], 0.0);
    if s[1] <= tol::MEMBER_RANK * s[0] {
        let i = (0..3).max_by(|&i, &j| m[(i, i)].norm().total_cmp(&m[(j, j)].norm())).unwrap();
        let r = m[(i, i)].sqrt();
        let l: CVec3 = m.column(i).into_owned() / r * C64::new(s[0].sqrt(), 0.0);
        return Ok((l, l));
    }
    let b = adjugate(&m);
    let i = (0..3).max_by(|&i, &j| b[(i, i)].norm().total_cmp(&b[(j, j)].norm())).unwrap();
    let bii = b[(i, i)];
    let c = if bii.norm() < 1e-300 {
        m
    } else {
        let p: CVec3 = b.column(i).into_owned() / (-bii).sqrt();
        m + cross_matrix(&p)
    };
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for r in 0..3 {
        for k in 0..3 {
            if c[(r, k)].norm() > best {
                best = c[(r, k)].norm();
                bi = r;
                bj = k;
            }
        }
    }
    let a: CVec3 = c.row(bi).transpose().into_owned();
    let bb: CVec3 = c.column(bj).into_owned();
    // c = a' bᵀ with a' ∝ column, b ∝ row; rescale so that (a bᵀ + b aᵀ)/2 = m
    let cij = c[(bi, bj)];
    let col = bb;
    let row = a;
    let l1 = col / cij * C64::new(s[0], 0.0);
    let l2 = row;
    Ok((l1, l2))
}

/// Coefficients of `det(λ S + μ T)` as a binary cubic (λ³ first).
pub fn pencil_cubic(s: &SymForm3, t: &SymForm3) -> [f64; 4] {
    let a = s.matrix();
    let b = t.matrix();
    [a.determinant(), (adjugate(&a) * b).trace(), (a * adjugate(&b)).trace(), b.determinant()]
}

/// Multiplicity pattern of the four intersection points of two conics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactPattern {
    /// 1+1+1+1
    Simple,
    /// 2+1+1
    Tangent,
    /// 2+2
    DoubleContact,
    /// 3+1
    Osculating,
    /// 4
    Hyperosculating,
}

impl ContactPattern {
    pub fn multiplicities(&self) -> &'static [usize] {
        match self {
            ContactPattern::Simple => &[1, 1, 1, 1],
            ContactPattern::Tangent => &[2, 1, 1],
            ContactPattern::DoubleContact => &[2, 2],
            ContactPattern::Osculating => &[3, 1],
            ContactPattern::Hyperosculating => &[4],
        }
    }
}

impl std::fmt::Display for ContactPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = self.multiplicities();
        let s: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join("+"))
    }
}

/// The intersection of two conics, counted with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionSet {
    pub points: Vec<(HPoint, usize)>,
    /// Index pairs of complex-conjugate points.
    pub conjugate_pairs: Vec<(usize, usize)>,
    pub pattern: ContactPattern,
}

impl IntersectionSet {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.1).sum()
    }

    pub fn real_count(&self) -> usize {
        self.points.iter().filter(|p| p.0.is_real()).map(|p| p.1).sum()
    }

    /// Points repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<HPoint> {
        self.points.iter().flat_map(|(p, m)| std::iter::repeat_n(*p, *m)).collect()
    }
}

/// Two points spanning the line `l`.
fn line_basis(l: &CVec3) -> (CVec3, CVec3) {
    let k = (0..3).max_by(|&i, &j| l[i].norm().total_cmp(&l[j].norm())).unwrap();
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let z = C64::new(0.0, 0.0);
    let mut r1 = CVec3::new(z, z, z);
    r1[i] = l[k];
    r1[k] = -l[i];
    let mut r2 = CVec3::new(z, z, z);
    r2[j] = l[k];
    r2[k] = -l[j];
    (r1, r2)
}

/// Both intersections of a line with a conic.
pub fn line_conic(l: &CVec3, s: &CMat3) -> [CVec3; 2] {
    let (r1, r2) = line_basis(l);
    let a = cdot(&r1, &(s * r1));
    let b = cdot(&r1, &(s * r2));
    let c = cdot(&r2, &(s * r2));
    let roots = poly::homogeneous_quadratic(a, b, c);
    roots.map(|(x, y)| r1 * x + r2 * y)
}

/// Second intersection of the line through `p` (on the conic) in direction `r`.
fn second_point(p: &CVec3, r: &CVec3, s: &CMat3) -> CVec3 {
    let srr = cdot(r, &(s * r));
    let spr = cdot(p, &(s * r));
    p * srr - r * (spr * 2.0)
}

fn member(s: &CMat3, t: &CMat3, root: &BinaryRoot) -> CMat3 {
    s * root.lambda + t * root.mu
}

/// A point on the line `l` different from `p`, far from it.
fn other_on_line(l: &CVec3, p: &CVec3) -> CVec3 {
    let (r1, r2) = line_basis(l);
    if linalg::cparallel(&r1, p) > linalg::cparallel(&r2, p) {
        r1
    } else {
        r2
    }
}

fn rel_rank(m: &CMat3) -> usize {
    linalg::rank_with(m, tol::MEMBER_RANK)
}

fn singular_point(m: &CMat3) -> CVec3 {
    let b = adjugate(m);
    let j = (0..3).max_by(|&i, &j| b.column(i).norm().total_cmp(&b.column(j).norm())).unwrap();
    let v: CVec3 = b.column(j).into_owned();
    if cnorm(&v) > 0.0 {
        return v;
    }
    // fall back to the null vector from the SVD
    let svd = m.svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = (0..3).min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j])).unwrap();
    vt.row(k).transpose().map(|z| z.conj())
}

/// Intersection points of two conics with multiplicities.
///
/// The multiplicity pattern is read off the root structure of
/// `det(λS + μT)` and the rank of the members at multiple roots; the points
/// are then obtained by intersecting transversal lines of a degenerate member
/// with `S`.
pub fn conic_intersections(s: &SymForm3, t: &SymForm3) -> Result<IntersectionSet> {
    let s = s.normalize()?;
    let t = t.normalize()?;
    if s.proportional(&t, 1e-12) {
        return Err(Error::ProportionalConics);
    }
    let cubic = pencil_cubic(&s, &t);
    let polish = |rs: Vec<poly::BinaryRoot>| -> Vec<poly::BinaryRoot> {
        rs.into_iter().map(|r| if r.multiplicity == 2 { poly::polish_double(cubic, &r) } else { r }).collect()
    };
    let roots = polish(poly::binary_cubic_roots(cubic).ok_or(Error::AllDegenerate)?);
    let sm = s.cmatrix();
    let tm = t.cmatrix();
    // intersect with whichever of the two is better conditioned
    let base = if s.relative_det().abs() >= t.relative_det().abs() { sm } else { tm };
    match intersect_at_roots(&sm, &tm, &base, &roots) {
        Err(Error::IllConditioned(msg)) if roots.len() == 3 => {
            // a contact just outside the cubic's multiplicity threshold
            intersect_at_roots(&sm, &tm, &base, &polish(merge_closest(&roots))).map_err(|_| Error::IllConditioned(msg))
        }
        r => r,
    }
}

fn root_distance(a: &BinaryRoot, b: &BinaryRoot) -> f64 {
    let na = (a.lambda.norm_sqr() + a.mu.norm_sqr()).sqrt();
    let nb = (b.lambda.norm_sqr() + b.mu.norm_sqr()).sqrt();
    (a.lambda * b.mu - a.mu * b.lambda).norm() / (na * nb)
}

/// Replace the two closest of three simple roots by their mean, counted twice.
fn merge_closest(roots: &[BinaryRoot]) -> Vec<BinaryRoot> {
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let &(i, j, k) = pairs
        .iter()
        .min_by(|x, y| root_distance(&roots[x.0], &roots[x.1]).total_cmp(&root_distance(&roots[y.0], &roots[y.1])))
        .unwrap();
    let (a, b) = (roots[i], roots[j]);
    let unit = |r: &BinaryRoot| {
        let n = (r.lambda.norm_sqr() + r.mu.norm_sqr()).sqrt();
        let big = if r.lambda.norm() >= r.mu.norm() { r.lambda } else { r.mu };
        let ph = big.conj() / big.norm();
        (r.lambda * ph / n, r.mu * ph / n)
    };
    let (la, ma) = unit(&a);
    let (lb, mb) = unit(&b);
    // align the sign of b with a before averaging
    let sgn = if (la.conj() * lb + ma.conj() * mb).re >= 0.0 { 1.0 } else { -1.0 };
    let (mut l, mut m) = ((la + lb * sgn) * 0.5, (ma + mb * sgn) * 0.5);
    if l.im.abs() + m.im.abs() <= 1e-4 * (l.norm() + m.norm()) {
        l = C64::new(l.re, 0.0);
        m = C64::new(m.re, 0.0);
    }
    vec![BinaryRoot { lambda: l, mu: m, multiplicity: 2 }, roots[k]]
}

fn intersect_at_roots(sm: &CMat3, tm: &CMat3, base: &CMat3, roots: &[BinaryRoot]) -> Result<IntersectionSet> {
    let (sm, tm, base) = (*sm, *tm, *base);
    let mut mults: Vec<usize> = roots.iter().map(|r| r.multiplicity).collect();
    mults.sort();
    let pts: Vec<(CVec3, usize)>;
    let pattern;
    match mults.as_slice() {
        [1, 1, 1] => {
            pattern = ContactPattern::Simple;
            // best-conditioned rank-2 member, real roots preferred
            let mut best: Option<(f64, CMat3)> = None;
            for r in roots {
                let m = member(&sm, &tm, r);
                let sv = linalg::singular_values(&m);
                let score = sv[1] / sv[0] + if r.is_real() { 1.0 } else { 0.0 };
                if best.as_ref().is_none_or(|b| score > b.0) {
                    best = Some((score, m));
                }
            }
            let m = best.unwrap().1;
            let (l1, l2) = split_degenerate(&m)?;
            let mut v = Vec::new();
            for l in [l1, l2] {
                for p in line_conic(&l, &base) {
                    v.push((p, 1));
                }
            }
            pts = v;
        }
        [1, 2] => {
            let dbl = roots.iter().find(|r| r.multiplicity == 2).unwrap();
            let sgl = roots.iter().find(|r| r.multiplicity == 1).unwrap();
            let md = member(&sm, &tm, dbl);
            if rel_rank(&md) <= 1 {
                pattern = ContactPattern::DoubleContact;
                let (l, _) = split_degenerate(&md)?;
                let [a, b] = line_conic(&l, &base);
                pts = vec![(a, 2), (b, 2)];
            } else {
                pattern = ContactPattern::Tangent;
                let ms = member(&sm, &tm, sgl);
                let p = singular_point(&md);
                let _ = ms;
                // lines of the double-root member pass through the tangency point
                let (l1, l2) = split_degenerate(&md)?;
                let mut v = vec![(p, 2)];
                for l in [l1, l2] {
                    let r = other_on_line(&l, &p);
                    v.push((second_point(&p, &r, &base), 1));
                }
                pts = v;
            }
        }
        [3] => {
            let m = member(&sm, &tm, &roots[0]);
            if rel_rank(&m) <= 1 {
                pattern = ContactPattern::Hyperosculating;
                let (l, _) = split_degenerate(&m)?;
                let p = adjugate(&base) * l;
                pts = vec![(p, 4)];
            } else {
                pattern = ContactPattern::Osculating;
                let p = singular_point(&m);
                let (l1, l2) = split_degenerate(&m)?;
                // the secant is the line along which p is a simple root
                let pick = |l: &CVec3| {
                    let r = other_on_line(l, &p);
                    let spr = cdot(&p, &(base * r)).norm();
                    let srr = cdot(&r, &(base * r)).norm();
                    (spr / (srr + 1e-300), r)
                };
                let (s1, r1) = pick(&l1);
                let (s2, r2) = pick(&l2);
                let r = if s1 > s2 { r1 } else { r2 };
                pts = vec![(p, 3), (second_point(&p, &r, &base), 1)];
            }
        }
        _ => return Err(Error::IllConditioned(format!("unexpected root structure {mults:?}"))),
    }
    let points: Vec<(HPoint, usize)> = pts.into_iter().map(|(v, m)| (HPoint::new(linalg::cnormalize(&v)), m)).collect();
    if pattern == ContactPattern::Simple {
        for i in 0..4 {
            for j in i + 1..4 {
                if points[i].0.distance(&points[j].0) <= tol::CLUSTER {
                    return Err(Error::IllConditioned(format!(
                        "points {i} and {j} coincide (separation {:.3e}) but the pencil cubic has simple roots",
                        points[i].0.distance(&points[j].0)
                    )));
                }
            }
        }
    }
    let mut conjugate_pairs = Vec::new();
    for i in 0..points.len() {
        if points[i].0.is_real() {
            continue;
        }
        let c = points[i].0.conj();
        let j = (0..points.len())
            .filter(|&j| j != i)
            .min_by(|&a, &b| points[a].0.distance(&c).total_cmp(&points[b].0.distance(&c)));
        if let Some(j) = j {
            if i < j && points[j].0.distance(&c) < 1e-6 {
                conjugate_pairs.push((i, j));
            }
        }
    }
    Ok(IntersectionSet { points, conjugate_pairs, pattern })
}
