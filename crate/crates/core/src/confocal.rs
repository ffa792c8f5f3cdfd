//! Confocal families, confocal coordinates and the Ivory maps.
//!
//! A family is the dual pencil through the base and the absolute. With
//! `D = S⁻¹` the member at `λ` is `S_λ = (D − λΩ⁻¹)⁻¹`; for the spherical
//! canonical cone this is `x²/(a²−λ) + y²/(b²−λ) − z²/(c²+λ) = 0`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat3, C64};
use crate::metric::on_sheet;
use crate::poly;
use crate::projective::{conic_intersections, pencil_cubic, GeometryContext, GeometryKind, HPoint, Region, SymForm3};
use crate::spherical;
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfocalFamily {
    base: SymForm3,
    /// `S⁻¹` of the base, kept unnormalized so that `λ` has a fixed scale.
    dual: Matrix3<f64>,
    ctx: GeometryContext,
    params: Option<(f64, f64, f64)>,
}

impl ConfocalFamily {
    /// The family through a nondegenerate base. `λ` is measured in the scale of `base` as given.
    pub fn new(base: &SymForm3, ctx: &GeometryContext) -> Result<Self> {
        if base.is_degenerate() {
            return Err(Error::DegenerateConic);
        }
        let dual = base.matrix().try_inverse().ok_or(Error::DegenerateConic)?;
        Ok(Self { base: *base, dual, ctx: *ctx, params: None })
    }

    /// The family of the canonical cone `x²/a² + y²/b² − z²/c² = 0`.
    pub fn spherical(a: f64, b: f64, c: f64) -> Result<Self> {
        spherical::check(a, b, c)?;
        let mut f = Self::new(&spherical::canonical_form(a, b, c), &GeometryContext::spherical())?;
        f.dual = Matrix3::from_diagonal(&Vector3::new(a * a, b * b, -c * c));
        f.params = Some((a, b, c));
        Ok(f)
    }

    pub fn hyperbolic(base: &SymForm3) -> Result<Self> {
        Self::new(base, &GeometryContext::hyperbolic())
    }

    pub fn base(&self) -> &SymForm3 {
        &self.base
    }

    pub fn ctx(&self) -> &GeometryContext {
        &self.ctx
    }

    /// `(a, b, c)` for a family built by [`ConfocalFamily::spherical`].
    pub fn params(&self) -> Option<(f64, f64, f64)> {
        self.params
    }

    fn dual_member(&self, lambda: f64) -> Matrix3<f64> {
        self.dual - self.ctx.omega_inv() * lambda
    }

    /// `S_λ`, unnormalized.
    pub fn member(&self, lambda: f64) -> Result<SymForm3> {
        let m = SymForm3::from_matrix(&self.dual_member(lambda));
        if m.is_degenerate() {
            return Err(Error::DegenerateMemberAt(format!("{lambda}")));
        }
        let inv = m.matrix().try_inverse().ok_or_else(|| Error::DegenerateMemberAt(format!("{lambda}")))?;
        Ok(SymForm3::from_matrix(&inv))
    }

    /// The same family with `S_λ` as its base; parameters shift by `λ`.
    pub fn rebased(&self, lambda: f64) -> Result<Self> {
        let base = self.member(lambda)?;
        Ok(Self { base, dual: self.dual_member(lambda), ctx: self.ctx, params: None })
    }

    /// Parameters at which the member degenerates: `λ = 1/n` for the eigenvalues `n` of `Ω⁻¹S`.
    pub fn degenerate_parameters(&self) -> Vec<C64> {
        match self.spectrum() {
            Ok(sp) => sp.iter().filter(|n| n.norm() > 0.0).map(|n| n.inv()).collect(),
            Err(_) => vec![],
        }
    }

    /// Distinct eigenvalues of `Ω⁻¹S`; fails when the matrix is not diagonalizable.
    fn spectrum(&self) -> Result<Vec<C64>> {
        let s = &self.base;
        let o = self.ctx.absolute();
        let cubic = pencil_cubic(s, o);
        let roots = poly::binary_cubic_roots(cubic).ok_or(Error::NonDiagonalizablePair)?;
        let roots: Vec<_> =
            roots.into_iter().map(|r| if r.multiplicity == 2 { poly::polish_double(cubic, &r) } else { r }).collect();
        // det(λS + μΩ) = 0 means S v = −(μ/λ) Ω v
        let n_of = |r: &poly::BinaryRoot| -r.mu / r.lambda;
        let sm = s.cmatrix();
        let om = o.cmatrix();
        let diagonalizable = |n: C64, mult: usize| {
            let m: CMat3 = sm - om * n;
            linalg::rank_with(&m, tol::MEMBER_RANK) <= 3 - mult
        };
        let mut out = Vec::new();
        for r in &roots {
            let n = n_of(r);
            if r.multiplicity > 1 && !diagonalizable(n, r.multiplicity) {
                return Err(Error::NonDiagonalizablePair);
            }
            out.push(n);
        }
        Ok(out)
    }

    /// Columns: real eigenvectors of `Ω⁻¹S`, ordered by eigenvalue.
    ///
    /// Spacelike columns have their largest entry positive; a timelike one
    /// points to the upper sheet.
    pub fn canonical_basis(&self) -> Result<Matrix3<f64>> {
        if self.params.is_some() {
            return Ok(Matrix3::identity());
        }
        let sp = self.spectrum()?;
        if sp.iter().any(|n| n.im.abs() > tol::REAL * n.norm().max(1.0)) {
            return Err(Error::NoQuadrilateral);
        }
        let mut ns: Vec<f64> = sp.iter().map(|n| n.re).collect();
        ns.sort_by(f64::total_cmp);
        let s = self.base.matrix();
        let o = self.ctx.absolute().matrix();
        let mut cols: Vec<Vector3<f64>> = Vec::new();
        for (i, &n) in ns.iter().enumerate() {
            let svd = (s - o * n).svd(false, true);
            let vt = svd.v_t.unwrap();
            let mut order = [0usize, 1, 2];
            order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
            // an eigenvalue listed twice owns a two-dimensional eigenspace
            let k = if i > 0 && ns[i - 1] == n { order[1] } else { order[0] };
            let v: Vector3<f64> = vt.row(k).transpose();
            let v = if self.ctx.kind() == GeometryKind::Hyperbolic && self.ctx.region(&v) == Region::Hyperbolic {
                on_sheet(v, &self.ctx)
            } else {
                linalg::fix_sign(v)
            };
            cols.push(v.normalize());
        }
        Ok(Matrix3::from_columns(&cols))
    }

    /// The representative of a real intersection of `S_λ` and `S_μ` in the closed positive quadrant.
    pub fn corner(&self, lambda: f64, mu: f64) -> Result<Vector3<f64>> {
        let basis = self.canonical_basis()?;
        let inv = basis.try_inverse().ok_or(Error::NoQuadrilateral)?;
        let set = conic_intersections(&self.member(lambda)?, &self.member(mu)?).map_err(|_| Error::NoQuadrilateral)?;
        let mut best: Option<(Vector3<f64>, Vector3<f64>)> = None;
        for (p, _) in &set.points {
            let Some(v) = p.to_real() else { continue };
            let reps = match self.ctx.kind() {
                GeometryKind::Spherical => {
                    let u = v.normalize();
                    vec![u, -u]
                }
                GeometryKind::Hyperbolic => {
                    if self.ctx.region(&v) != Region::Hyperbolic {
                        continue;
                    }
                    let u = on_sheet(v, &self.ctx);
                    vec![u / (-self.ctx.omega(&u, &u)).sqrt()]
                }
            };
            for u in reps {
                let c = inv * u;
                if c.iter().all(|&x| x >= -1e-9 * c.norm()) {
                    let better = best.as_ref().is_none_or(|(_, bc)| lex_less(&c, bc));
                    if better {
                        best = Some((u, c));
                    }
                }
            }
        }
        best.map(|b| b.0).ok_or(Error::NoQuadrilateral)
    }
}

fn lex_less(a: &Vector3<f64>, b: &Vector3<f64>) -> bool {
    for i in 0..3 {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

/// Normalized `S_λ`; the hyperbolic confocal member.
pub fn hyperbolic_confocal_member(family: &ConfocalFamily, lambda: f64) -> Result<SymForm3> {
    if !family.ctx.is_hyperbolic() {
        return Err(Error::WrongContext("hyperbolic family expected".into()));
    }
    family.member(lambda)?.normalize()
}

/// Linear map taking the base of a family onto `S_λ` and every `S_μ` into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct IvoryMap {
    pub matrix: Matrix3<f64>,
    pub lambda: f64,
    pub ctx: GeometryContext,
}

impl IvoryMap {
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    /// `‖MᵀΩ − ΩM‖`, relative.
    pub fn self_adjoint_residual(&self) -> f64 {
        let o = self.ctx.absolute().matrix();
        (self.matrix.transpose() * o - o * self.matrix).norm() / (self.matrix.norm() * o.norm())
    }
}

/// `F_λ = diag(√(a²−λ)/a, √(b²−λ)/b, √(c²+λ)/c)` for `−c² < λ < b²`.
pub fn spherical_ivory_map(a: f64, b: f64, c: f64, lambda: f64) -> Result<IvoryMap> {
    spherical::check(a, b, c)?;
    if !(lambda > -c * c && lambda < b * b) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let d = Vector3::new((a * a - lambda).sqrt() / a, (b * b - lambda).sqrt() / b, (c * c + lambda).sqrt() / c);
    Ok(IvoryMap { matrix: Matrix3::from_diagonal(&d), lambda, ctx: GeometryContext::spherical() })
}

/// `F_λ = √(I − λΩ⁻¹S)` with the principal branch, which is continuous from `λ = 0`.
///
/// `F_λ` is Ω-self-adjoint, `F_λᵀ Ω F_λ = Ω − λS` and `F_λᵀ S_λ F_λ = S`.
pub fn ivory_map(family: &ConfocalFamily, lambda: f64) -> Result<IvoryMap> {
    let sp = family.spectrum()?;
    for n in &sp {
        let z = C64::new(1.0, 0.0) - n * lambda;
        if z.im.abs() <= tol::REAL * z.norm() && z.re <= 0.0 {
            return Err(Error::LambdaOutOfRange(lambda));
        }
    }
    let mut ns: Vec<C64> = Vec::new();
    for n in sp {
        if !ns.iter().any(|m| (m - n).norm() <= tol::CLUSTER * m.norm().max(1.0)) {
            ns.push(n);
        }
    }
    let nm = linalg::to_complex_mat(&(family.ctx.omega_inv() * family.base.matrix()));
    let id = CMat3::identity();
    let mut f = CMat3::zeros();
    for (i, ni) in ns.iter().enumerate() {
        let mut term = id * (C64::new(1.0, 0.0) - ni * lambda).sqrt();
        for (j, nj) in ns.iter().enumerate() {
            if i != j {
                term = term * (nm - id * *nj) / (ni - nj);
            }
        }
        f += term;
    }
    let im = f.map(|z| z.im).norm();
    let re = f.map(|z| z.re);
    if im > 1e-8 * re.norm() {
        return Err(Error::IllConditioned(format!("square root has imaginary part {im:e}")));
    }
    Ok(IvoryMap { matrix: re, lambda, ctx: family.ctx })
}

pub fn hyperbolic_ivory_map(family: &ConfocalFamily, lambda: f64) -> Result<IvoryMap> {
    if !family.ctx.is_hyperbolic() {
        return Err(Error::WrongContext("hyperbolic family expected".into()));
    }
    ivory_map(family, lambda)
}

/// The two parameters `λ < μ` of the members through `x`.
///
/// `x ∈ S_λ` iff `xᵀ adj(D − λΩ⁻¹) x = 0`, a quadratic in `λ`.
pub fn confocal_coordinates(x: &HPoint, family: &ConfocalFamily) -> Result<(f64, f64)> {
    let v = x.to_real().ok_or(Error::NoRealCoordinates)?;
    let v = v / v.norm();
    let e = family.ctx.omega_inv();
    let s = family.dual.norm() / e.norm();
    let d = family.dual;
    let b = -e * s;
    let q = |m: &Matrix3<f64>| v.dot(&(linalg::adjugate(m) * v));
    let q0 = q(&d);
    let q2 = q(&b);
    let q1 = q(&(d + b)) - q0 - q2;
    let size = q0.abs() + q1.abs() + q2.abs();
    if q2.abs() <= 1e-12 * size {
        return Err(Error::NoRealCoordinates);
    }
    let disc = q1 * q1 - 4.0 * q0 * q2;
    let rel = disc / (q1 * q1 + 4.0 * (q0 * q2).abs());
    if rel.abs() <= 1e-12 {
        return Err(Error::TangentPoint);
    }
    if rel < 0.0 {
        return Err(Error::NoRealCoordinates);
    }
    let w = -0.5 * (q1 + q1.signum() * disc.sqrt());
    let (r1, r2) = if w == 0.0 { (0.0, 0.0) } else { (w / q2, q0 / w) };
    let (l, m) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    Ok((l * s, m * s))
}

/// Diagonals of a confocal quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvoryReport {
    /// `vᵢ ∈ S_{λ₁} ∩ S_{μᵢ}`
    pub v: [Vector3<f64>; 2],
    /// `wᵢ ∈ S_{λ₂} ∩ S_{μᵢ}`
    pub w: [Vector3<f64>; 2],
    /// `dist(v₁, w₂)`
    pub d12: f64,
    /// `dist(v₂, w₁)`
    pub d21: f64,
    pub delta: f64,
}

/// Distance of two normalized representatives, by the chord formula.
pub fn distance(u: &Vector3<f64>, v: &Vector3<f64>, ctx: &GeometryContext) -> f64 {
    let d = u - v;
    match ctx.kind() {
        GeometryKind::Spherical => 2.0 * (0.5 * d.norm()).min(1.0).asin(),
        // Ω(u−v, u−v) = 4 sinh²(d/2) on the sheet
        GeometryKind::Hyperbolic => 2.0 * (0.5 * ctx.omega(&d, &d).max(0.0).sqrt()).asinh(),
    }
}

pub fn ivory_check(family: &ConfocalFamily, lambda: [f64; 2], mu: [f64; 2]) -> Result<IvoryReport> {
    let v = [family.corner(lambda[0], mu[0])?, family.corner(lambda[0], mu[1])?];
    let w = [family.corner(lambda[1], mu[0])?, family.corner(lambda[1], mu[1])?];
    let d12 = distance(&v[0], &w[1], &family.ctx);
    let d21 = distance(&v[1], &w[0], &family.ctx);
    Ok(IvoryReport { v, w, d12, d21, delta: (d12 - d21).abs() })
}
