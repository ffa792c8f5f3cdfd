//! Random geometry and a rational parameterization of conics.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};
use crate::hyperbolic::{classify, HypClass};
use crate::linalg;
use crate::projective::{GeometryContext, SymForm3};

/// Uniformly random rotation (unit quaternion method).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let u3: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (w, x, y, z) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - z * w),
        2.0 * (x * z + y * w),
        2.0 * (x * y + z * w),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - x * w),
        2.0 * (x * z - y * w),
        2.0 * (y * z + x * w),
        1.0 - 2.0 * (x * x + y * y),
    )
}

pub fn rotation_z(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Boost along the x axis preserving x² + y² − z².
pub fn boost_x(r: f64) -> Matrix3<f64> {
    let (s, c) = (r.sinh(), r.cosh());
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c)
}

/// Random sheet-preserving isometry of x² + y² − z² with rapidity at most `max_r`.
pub fn random_lorentz<R: Rng + ?Sized>(rng: &mut R, max_r: f64) -> Matrix3<f64> {
    let a = rng.gen::<f64>() * std::f64::consts::TAU;
    let b = rng.gen::<f64>() * std::f64::consts::TAU;
    let r = rng.gen::<f64>() * max_r;
    rotation_z(a) * boost_x(r) * rotation_z(b)
}

/// Random form with entries uniform in [−1, 1].
pub fn random_form<R: Rng + ?Sized>(rng: &mut R) -> SymForm3 {
    let mut e = [0.0; 6];
    for x in &mut e {
        *x = rng.gen_range(-1.0..1.0);
    }
    SymForm3::from_entries(e)
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// `exp(U(ln lo, ln hi))`
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Spherical semi-axes `(a, b, c)`, log-uniform in `[0.2, 5]`, with `a > b`
/// and the two positive eigenvalues at least 1e-3 apart relative.
pub fn spherical_params<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    loop {
        let x = log_uniform(rng, 0.2, 5.0);
        let y = log_uniform(rng, 0.2, 5.0);
        let c = log_uniform(rng, 0.2, 5.0);
        let (a, b) = if x > y { (x, y) } else { (y, x) };
        if (a - b) > 1e-3 * a {
            return (a, b, c);
        }
    }
}

/// Random real hyperbolic conic whose class is in `want`, by rejection.
///
/// Draws are generic forms with entries in `[−1, 1]`, centered forms
/// `diag(±p, ±q, −1)` with `p, q` log-uniform in `[0.05, 20]`, or members
/// `Ω + k·(t mᵀ + m tᵀ)/2` of the family tangent to the absolute at
/// `(1,0,1)`, in proportions 3:4:3; each is then moved by a random
/// isometry of rapidity at most 1.
pub fn random_hyperbolic_conic<R: Rng + ?Sized>(
    rng: &mut R,
    want: &[HypClass],
    max_tries: usize,
) -> Result<(HypClass, SymForm3)> {
    let ctx = GeometryContext::hyperbolic();
    let omega = SymForm3::diag(1.0, 1.0, -1.0);
    for _ in 0..max_tries {
        let draw = rng.gen_range(0..10);
        let s = if draw < 3 {
            random_form(rng)
        } else if draw < 7 {
            let sign = |r: &mut R| if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            let p = sign(rng) * log_uniform(rng, 0.05, 20.0);
            let q = sign(rng) * log_uniform(rng, 0.05, 20.0);
            SymForm3::diag(p, q, -1.0)
        } else {
            let t = Vector3::new(1.0, 0.0, -1.0);
            let m = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let k = rng.gen_range(-4.0..4.0);
            omega.add(&SymForm3::sym_outer(&t, &m).scale(k))
        };
        let s = s.pullback(&random_lorentz(rng, 1.0));
        if let Ok(c) = classify(&s, &ctx) {
            if want.contains(&c.class) {
                return Ok((c.class, s));
            }
        }
    }
    Err(Error::SamplerExhausted(max_tries))
}

/// Rational parameterization of a real nondegenerate indefinite conic.
///
/// Every line through a fixed real point `p0` of the conic meets it once
/// more; the direction `q` of the line gives `S(q,q) p0 − 2 S(p0,q) q`.
#[derive(Debug, Clone, Copy)]
pub struct ConicParam {
    s: SymForm3,
    p0: Vector3<f64>,
    u: Vector3<f64>,
    w: Vector3<f64>,
}

impl ConicParam {
    /// `None` when the form is definite (no real points).
    pub fn new(s: &SymForm3) -> Option<Self> {
        let s = s.normalize().ok()?;
        let (vals, vecs) = linalg::jacobi_eigen(&s.matrix());
        let big = vals.abs().max();
        if vals[0] >= -1e-12 * big || vals[2] <= 1e-12 * big {
            return None;
        }
        let p0 = vecs.column(2).into_owned() / vals[2].sqrt() + vecs.column(0).into_owned() / (-vals[0]).sqrt();
        let p0 = p0.normalize();
        let u = p0.cross(&vecs.column(1).into_owned()).normalize();
        let w = p0.cross(&u).normalize();
        Some(ConicParam { s, p0, u, w })
    }

    pub fn base_point(&self) -> Vector3<f64> {
        self.p0
    }

    /// Point for the parameter `t` (period π), scaled to unit length.
    pub fn point(&self, t: f64) -> Vector3<f64> {
        let q = self.u * t.cos() + self.w * t.sin();
        let x = self.p0 * self.s.eval_real(&q) - q * (2.0 * self.s.bilinear_real(&self.p0, &q));
        let n = x.norm();
        if n < 1e-14 {
            return self.p0;
        }
        x / n
    }

    /// Tangent line at the point for `t`.
    pub fn tangent(&self, t: f64) -> Vector3<f64> {
        self.s.matrix() * self.point(t)
    }
}
