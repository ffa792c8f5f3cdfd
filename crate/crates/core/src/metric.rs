//! Distances in the hyperbolic plane read off the bilinear form of the absolute.
//!
//! A vector with `Ω(v,v) = −1` on the upper sheet is a point, a vector with
//! `Ω(v,v) = 1` is a co-oriented line (its polar), and an isotropic vector
//! on the sheet side is a horocycle `H_x = {y : Ω(x,y) = −1}`.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::error::{Error, Result};
use crate::hyperbolic::require_hyperbolic;
use crate::linalg;
use crate::projective::{GeometryContext, HLine, Region, SymForm3};
use crate::sample::ConicParam;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeoKind {
    HypPoint,
    DeSitterPoint,
    IdealVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoElement {
    pub vector: Vector3<f64>,
    pub kind: GeoKind,
}

pub(crate) fn on_sheet(v: Vector3<f64>, ctx: &GeometryContext) -> Vector3<f64> {
    if ctx.omega(&v, &ctx.time()) > 0.0 {
        -v
    } else {
        v
    }
}

impl GeoElement {
    /// Scaled to `Ω(v,v) = −1` on the upper sheet.
    pub fn hyp_point(v: &Vector3<f64>, ctx: &GeometryContext) -> Result<Self> {
        require_hyperbolic(ctx)?;
        if ctx.region(v) != Region::Hyperbolic {
            return Err(Error::WrongContext("not a hyperbolic point".into()));
        }
        let v = on_sheet(*v, ctx) / (-ctx.omega(v, v)).sqrt();
        Ok(Self { vector: v, kind: GeoKind::HypPoint })
    }

    /// Scaled to `Ω(v,v) = 1`; the sign of `v` is kept.
    pub fn de_sitter(v: &Vector3<f64>, ctx: &GeometryContext) -> Result<Self> {
        require_hyperbolic(ctx)?;
        if ctx.region(v) != Region::DeSitter {
            return Err(Error::WrongContext("not a de Sitter point".into()));
        }
        Ok(Self { vector: v / ctx.omega(v, v).sqrt(), kind: GeoKind::DeSitterPoint })
    }

    /// Isotropic vector moved to the sheet side. Its length selects the horocycle.
    pub fn ideal(v: &Vector3<f64>, ctx: &GeometryContext) -> Result<Self> {
        require_hyperbolic(ctx)?;
        if ctx.region(v) != Region::Ideal {
            return Err(Error::WrongContext("not an isotropic vector".into()));
        }
        Ok(Self { vector: on_sheet(*v, ctx), kind: GeoKind::IdealVector })
    }

    /// Dispatch on the region of `v`.
    pub fn from_vector(v: &Vector3<f64>, ctx: &GeometryContext) -> Result<Self> {
        require_hyperbolic(ctx)?;
        match ctx.region(v) {
            Region::Hyperbolic => Self::hyp_point(v, ctx),
            Region::DeSitter => Self::de_sitter(v, ctx),
            Region::Ideal => Self::ideal(v, ctx),
        }
    }

    /// The pole `Ω⁻¹ℓ` of a line, so that `Ω(pole, x) = ℓ(x)` before scaling.
    pub fn from_line(l: &Vector3<f64>, ctx: &GeometryContext) -> Result<Self> {
        Self::from_vector(&(ctx.omega_inv() * l), ctx)
    }

    pub fn region(&self) -> Region {
        match self.kind {
            GeoKind::HypPoint => Region::Hyperbolic,
            GeoKind::DeSitterPoint => Region::DeSitter,
            GeoKind::IdealVector => Region::Ideal,
        }
    }
}

/// Metric meaning of `Ω(x,y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interpretation {
    /// `Ω = −cosh d`
    PointPoint { dist: f64 },
    /// `Ω = sinh d`, positive on the side the de Sitter vector points to.
    PointLine { dist: f64 },
    /// `Ω = −e^d`, negative inside the horocycle.
    PointHorocycle { dist: f64 },
    /// `Ω = cos θ`, θ the angle where the two half-plane functionals differ in sign.
    LineAngle { angle: f64 },
    /// `Ω = ±1`
    LineParallel { sign: f64 },
    /// `Ω = ±cosh d`, d the common perpendicular.
    LineDistance { dist: f64, sign: f64 },
    /// `Ω = e^d`, negative if the line crosses the horocycle.
    LineHorocycle { dist: f64 },
    /// `Ω = −2e^d`, negative if the horocycles cross.
    HorocycleHorocycle { dist: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingResult {
    pub value: f64,
    pub interpretation: Interpretation,
}

impl PairingResult {
    /// The decoded distance or angle.
    pub fn metric(&self) -> f64 {
        match self.interpretation {
            Interpretation::PointPoint { dist }
            | Interpretation::PointLine { dist }
            | Interpretation::PointHorocycle { dist }
            | Interpretation::LineDistance { dist, .. }
            | Interpretation::LineHorocycle { dist }
            | Interpretation::HorocycleHorocycle { dist } => dist,
            Interpretation::LineAngle { angle } => angle,
            Interpretation::LineParallel { .. } => 0.0,
        }
    }
}

pub fn pairing(x: &GeoElement, y: &GeoElement, ctx: &GeometryContext) -> PairingResult {
    use GeoKind::*;
    let v = ctx.omega(&x.vector, &y.vector);
    let interpretation = match (x.kind, y.kind) {
        (HypPoint, HypPoint) => Interpretation::PointPoint { dist: (-v).max(1.0).acosh() },
        (HypPoint, DeSitterPoint) | (DeSitterPoint, HypPoint) => Interpretation::PointLine { dist: v.asinh() },
        (HypPoint, IdealVector) | (IdealVector, HypPoint) => Interpretation::PointHorocycle { dist: (-v).ln() },
        (DeSitterPoint, DeSitterPoint) => {
            let a = ctx.absolute().matrix();
            let m = (a * x.vector).cross(&(a * y.vector));
            let region =
                if m.norm() <= tol::RANK * x.vector.norm() * y.vector.norm() { Region::Ideal } else { ctx.region(&m) };
            match region {
                Region::Hyperbolic => Interpretation::LineAngle { angle: v.clamp(-1.0, 1.0).acos() },
                Region::Ideal => Interpretation::LineParallel { sign: v.signum() },
                Region::DeSitter => Interpretation::LineDistance { dist: v.abs().max(1.0).acosh(), sign: v.signum() },
            }
        }
        (DeSitterPoint, IdealVector) | (IdealVector, DeSitterPoint) => {
            Interpretation::LineHorocycle { dist: v.abs().ln() }
        }
        (IdealVector, IdealVector) => Interpretation::HorocycleHorocycle { dist: (-v / 2.0).ln() },
    };
    PairingResult { value: v, interpretation }
}

fn hyp_arg(x: &GeoElement) -> Result<()> {
    if x.kind != GeoKind::HypPoint {
        return Err(Error::WrongContext("argument must be a hyperbolic point".into()));
    }
    Ok(())
}

/// `sinh dist(x,F)` for hyperbolic `F`, `cosh dist(x,F°)` for de Sitter `F`.
pub fn delta_focus(f: &GeoElement, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
    hyp_arg(x)?;
    let v = ctx.omega(&f.vector, &x.vector);
    match f.kind {
        GeoKind::HypPoint => Ok((v * v - 1.0).max(0.0).sqrt()),
        GeoKind::DeSitterPoint => Ok((1.0 + v * v).sqrt()),
        GeoKind::IdealVector => Err(Error::IdealFocus),
    }
}

/// `|sinh dist(x,d)|`, `cosh dist(x,d°)` or `e^{dist(x,H_d)}` by the type of `d`.
///
/// For a line tangent to the absolute the horocycle is the one of the pole
/// `Ω⁻¹d` at the scale of the given coefficients.
pub fn delta_directrix(d: &HLine, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
    hyp_arg(x)?;
    let l = d.to_real().ok_or(Error::NoRealCoordinates)?;
    let pole = GeoElement::from_line(&l, ctx)?;
    let v = ctx.omega(&pole.vector, &x.vector);
    Ok(match pole.kind {
        GeoKind::DeSitterPoint => v.abs(),
        GeoKind::HypPoint | GeoKind::IdealVector => -v,
    })
}

/// Relative size of `Ω(E,E)` and `S(E,E)` below which the center counts as isotropic.
pub const CENTER_GUARD: f64 = 1e-5;

/// `ε = √(Ω(E,E)·S(F,d°) / (S(E,E)·Ω(F,d°)))` with `E = d ∩ F°`.
///
/// The quotient loses all precision when `E` approaches the absolute or the
/// conic, so both are required to stay above [`CENTER_GUARD`].
pub fn eccentricity(s: &SymForm3, f: &Vector3<f64>, d: &Vector3<f64>, ctx: &GeometryContext) -> Result<f64> {
    require_hyperbolic(ctx)?;
    let s = s.normalize()?;
    let a = ctx.absolute().matrix();
    let e = d.cross(&(a * f));
    let dpole = ctx.omega_inv() * d;
    let scale = e.norm_squared();
    let (oee, see) = (ctx.omega(&e, &e), s.eval_real(&e));
    let ofd = d.dot(f);
    if scale <= tol::ZERO * (d.norm() * f.norm()).powi(2)
        || oee.abs() <= CENTER_GUARD * scale
        || see.abs() <= CENTER_GUARD * scale
        || ofd.abs() <= tol::RANK * d.norm() * f.norm()
    {
        return Err(Error::DegenerateCenter);
    }
    let sfd = s.bilinear_real(f, &dpole);
    Ok((oee * sfd / (see * ofd)).abs().sqrt())
}

fn real_line(l: &HLine) -> Result<Vector3<f64>> {
    l.to_real().ok_or(Error::NoRealCoordinates)
}

/// `sinh dist(x,ℓ)` (signed), `cosh dist(x,ℓ°)` or `e^{dist(x,H)}` by the type of `ℓ`.
pub fn line_factor(l: &HLine, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
    hyp_arg(x)?;
    let pole = GeoElement::from_line(&real_line(l)?, ctx)?;
    let v = ctx.omega(&pole.vector, &x.vector);
    Ok(match pole.kind {
        GeoKind::DeSitterPoint => v,
        _ => -v,
    })
}

/// `d₁(x)·d₂(x)` for a pair of lines; constant along a conic with these focal lines.
pub fn bifocal_line_product(l1: &HLine, l2: &HLine, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
    Ok(line_factor(l1, x, ctx)? * line_factor(l2, x, ctx)?)
}

/// `dᵢ(ξ) = Ω(p̂ᵢ, ξ̂°)`: the sine, exponential, cosine or cosh term of the
/// point `p` against the oriented hyperbolic line `ξ`.
pub fn point_factor(p: &Vector3<f64>, xi: &HLine, ctx: &GeometryContext) -> Result<f64> {
    let l = real_line(xi)?;
    let pole = GeoElement::from_line(&l, ctx)?;
    if pole.kind != GeoKind::DeSitterPoint {
        return Err(Error::WrongContext("line must cross the absolute".into()));
    }
    if linalg::parallel(p, &pole.vector) <= tol::RANK {
        return Err(Error::UndefinedForPolar);
    }
    let pe = GeoElement::from_vector(p, ctx)?;
    Ok(ctx.omega(&pe.vector, &pole.vector))
}

/// `d₁(ξ)·d₂(ξ)` for a pair of points; constant along the tangents of a conic with these foci.
pub fn bifocal_focus_product(p1: &Vector3<f64>, p2: &Vector3<f64>, xi: &HLine, ctx: &GeometryContext) -> Result<f64> {
    Ok(point_factor(p1, xi, ctx)? * point_factor(p2, xi, ctx)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BifocalMode {
    Sum,
    Difference,
}

/// What `δᵢ` measures for a focus of the given type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    /// `dist(x, F)` for a hyperbolic focus.
    DistToPoint,
    /// Signed `dist(x, F°)` for a de Sitter focus.
    DistToPolar,
    /// `dist(x, H_F)` for an ideal focus, `H_F` fixed by the scale of `F`.
    DistToHorocycle,
}

impl DeltaKind {
    fn of(kind: GeoKind) -> Self {
        match kind {
            GeoKind::HypPoint => DeltaKind::DistToPoint,
            GeoKind::DeSitterPoint => DeltaKind::DistToPolar,
            GeoKind::IdealVector => DeltaKind::DistToHorocycle,
        }
    }
}

/// `|δ₁ + δ₂| = constant` or `|δ₁ − δ₂| = constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifocalDescriptor {
    pub mode: BifocalMode,
    pub constant: f64,
    pub delta_kinds: [DeltaKind; 2],
    pub mu: f64,
    pub foci: [GeoElement; 2],
}

/// `δ` of a hyperbolic point against a normalized focus.
pub fn delta(f: &GeoElement, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
    hyp_arg(x)?;
    let v = ctx.omega(&f.vector, &x.vector);
    Ok(match f.kind {
        GeoKind::HypPoint => (-v).max(1.0).acosh(),
        GeoKind::DeSitterPoint => v.asinh(),
        GeoKind::IdealVector => (-v).ln(),
    })
}

impl BifocalDescriptor {
    pub fn deltas(&self, x: &GeoElement, ctx: &GeometryContext) -> Result<(f64, f64)> {
        Ok((delta(&self.foci[0], x, ctx)?, delta(&self.foci[1], x, ctx)?))
    }

    /// Deviation of `|δ₁ ± δ₂|` from the constant at `x`.
    pub fn residual(&self, x: &GeoElement, ctx: &GeometryContext) -> Result<f64> {
        let (d1, d2) = self.deltas(x, ctx)?;
        let v = match self.mode {
            BifocalMode::Sum => d1 + d2,
            BifocalMode::Difference => d1 - d2,
        };
        Ok((v.abs() - self.constant).abs())
    }
}

/// Coefficients `(α, B, C, D)` with `S ∝ αΩ + Bℓ₁ℓ₁ᵀ + Cℓ₂ℓ₂ᵀ + D(ℓ₁ℓ₂ᵀ + ℓ₂ℓ₁ᵀ)`.
fn fit(s: &SymForm3, l1: &Vector3<f64>, l2: &Vector3<f64>, ctx: &GeometryContext) -> Result<[f64; 4]> {
    let basis = [*ctx.absolute(), SymForm3::outer(l1), SymForm3::outer(l2), SymForm3::sym_outer(l1, l2).scale(2.0)];
    let target = s.normalize()?;
    let w = [1.0, 2f64.sqrt(), 2f64.sqrt(), 1.0, 2f64.sqrt(), 1.0];
    let a = DMatrix::from_fn(6, 4, |i, j| basis[j].entries()[i] * w[i]);
    let b = DVector::from_fn(6, |i, _| target.entries()[i] * w[i]);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-10 * sv.max() {
        return Err(Error::IllConditioned("focal lines are nearly dependent".into()));
    }
    let x = svd.solve(&b, 1e-13).map_err(|e| Error::IllConditioned(e.to_string()))?;
    let res = (&a * &x - &b).norm();
    if res > 1e-6 {
        return Err(Error::IllConditioned(format!("foci do not span the conic (residual {res:e})")));
    }
    Ok([x[0], x[1], x[2], x[3]])
}

/// A hyperbolic point on the real conic, as far from the absolute as the sampling finds.
fn conic_point(s: &SymForm3, ctx: &GeometryContext) -> Option<GeoElement> {
    let cp = ConicParam::new(s)?;
    let mut best: Option<(f64, Vector3<f64>)> = None;
    for k in 0..128 {
        let x = cp.point(std::f64::consts::PI * (k as f64 + 0.37) / 128.0);
        let o = ctx.omega(&x, &x) / x.norm_squared();
        if o < -1e-3 && best.is_none_or(|(b, _)| o < b) {
            best = Some((o, x));
        }
    }
    best.and_then(|(_, x)| GeoElement::hyp_point(&x, ctx).ok())
}

/// Sum or difference description of a conic by a pair of real foci.
///
/// Only one of the two factors of the defining quartic vanishes on the conic;
/// where the factor is not fixed by the signs alone it is picked at a
/// hyperbolic point of the conic.
pub fn bifocal_descriptor(s: &SymForm3, pair: [&Vector3<f64>; 2], ctx: &GeometryContext) -> Result<BifocalDescriptor> {
    use GeoKind::*;
    require_hyperbolic(ctx)?;
    let f = [GeoElement::from_vector(pair[0], ctx)?, GeoElement::from_vector(pair[1], ctx)?];
    let a = ctx.absolute().matrix();
    // the swap puts the pair into one of the canonical orders of the case table
    let swap = matches!(
        (f[0].kind, f[1].kind),
        (HypPoint, DeSitterPoint) | (IdealVector, DeSitterPoint) | (IdealVector, HypPoint)
    );
    let g = if swap { [f[1], f[0]] } else { f };
    let [alpha, b, c, d] = fit(s, &(a * g[0].vector), &(a * g[1].vector), ctx)?;
    let empty = || Err(Error::EmptyConic);
    let acosh = |m: f64| if m >= 1.0 - 1e-12 { Some(m.max(1.0).acosh()) } else { None };
    let (mu, candidates): (f64, Vec<(BifocalMode, f64)>) = match (g[0].kind, g[1].kind) {
        (DeSitterPoint, DeSitterPoint) => {
            let mu = d / b;
            let c = if mu > 0.0 {
                acosh(mu).map(|k| (BifocalMode::Sum, k))
            } else {
                acosh(-mu).map(|k| (BifocalMode::Difference, k))
            };
            match c {
                Some(c) => (mu, vec![c]),
                None => return empty(),
            }
        }
        (HypPoint, HypPoint) => {
            let mu = d / b;
            let Some(k) = acosh(-mu) else { return empty() };
            (mu, vec![(BifocalMode::Sum, k), (BifocalMode::Difference, k)])
        }
        (DeSitterPoint, HypPoint) => {
            let mu = d / c;
            let k = (-mu).asinh().abs();
            (mu, vec![(BifocalMode::Sum, k), (BifocalMode::Difference, k)])
        }
        (DeSitterPoint, IdealVector) => {
            let mu = d / c;
            if mu < 0.0 {
                (mu, vec![(BifocalMode::Sum, (-mu).ln().abs())])
            } else {
                (mu, vec![(BifocalMode::Difference, mu.ln().abs())])
            }
        }
        (HypPoint, IdealVector) => {
            let mu = d / c;
            if mu >= 0.0 {
                return empty();
            }
            let k = (-mu).ln().abs();
            (mu, vec![(BifocalMode::Sum, k), (BifocalMode::Difference, k)])
        }
        (IdealVector, IdealVector) => {
            let r = alpha / (2.0 * d);
            if r.is_nan() || r <= 0.0 {
                return empty();
            }
            (r, vec![(BifocalMode::Sum, r.ln().abs())])
        }
        _ => unreachable!("pair reordered above"),
    };
    let mut desc = BifocalDescriptor {
        mode: candidates[0].0,
        constant: candidates[0].1,
        delta_kinds: [DeltaKind::of(f[0].kind), DeltaKind::of(f[1].kind)],
        mu,
        foci: f,
    };
    if candidates.len() > 1 {
        let x = conic_point(s, ctx).ok_or(Error::EmptyConic)?;
        let mut best = f64::MAX;
        for (mode, k) in candidates {
            let trial = BifocalDescriptor { mode, constant: k, ..desc };
            let r = trial.residual(&x, ctx)?;
            if r < best {
                best = r;
                desc = trial;
            }
        }
    }
    Ok(desc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> GeometryContext {
        GeometryContext::hyperbolic()
    }

    #[test]
    fn point_point() {
        let c = ctx();
        let x = GeoElement::hyp_point(&Vector3::new(0.0, 0.0, 1.0), &c).unwrap();
        assert_eq!(pairing(&x, &x, &c).value, -1.0);
        assert_eq!(pairing(&x, &x, &c).metric(), 0.0);
        let y = GeoElement::hyp_point(&Vector3::new(0.0, 1f64.sinh(), 1f64.cosh()), &c).unwrap();
        let p = pairing(&x, &y, &c);
        assert!((p.value + 1f64.cosh()).abs() < 1e-15);
        assert!((p.metric() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sheet_is_enforced() {
        let c = ctx();
        let x = GeoElement::hyp_point(&Vector3::new(0.0, 0.0, -2.0), &c).unwrap();
        assert_eq!(x.vector, Vector3::new(0.0, 0.0, 1.0));
        let h = GeoElement::ideal(&Vector3::new(-1.0, 0.0, -1.0), &c).unwrap();
        assert_eq!(h.vector, Vector3::new(1.0, 0.0, 1.0));
        assert!(GeoElement::hyp_point(&Vector3::new(1.0, 0.0, 0.0), &c).is_err());
    }

    #[test]
    fn horocycle_scale_shifts_distance() {
        let c = ctx();
        let x = GeoElement::hyp_point(&Vector3::new(0.2, 0.1, 1.0), &c).unwrap();
        let h = Vector3::new(1.0, 0.0, 1.0);
        let d0 = pairing(&x, &GeoElement::ideal(&h, &c).unwrap(), &c).metric();
        let d1 = pairing(&x, &GeoElement::ideal(&(h * 0.5f64.exp()), &c).unwrap(), &c).metric();
        assert!((d1 - d0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn focus_on_itself() {
        let c = ctx();
        let x = GeoElement::hyp_point(&Vector3::new(0.3, 0.0, 1.0), &c).unwrap();
        assert!(delta_focus(&x, &x, &c).unwrap().abs() < 1e-7);
        let d = HLine::real(1.0, 0.0, -0.3);
        assert!(delta_directrix(&d, &x, &c).unwrap().abs() < 1e-15);
        let ideal = GeoElement::ideal(&Vector3::new(1.0, 0.0, 1.0), &c).unwrap();
        assert_eq!(delta_focus(&ideal, &x, &c), Err(Error::IdealFocus));
    }
}
