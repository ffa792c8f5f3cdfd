//! Binary cubics and quadratics with complex roots.

use crate::linalg::C64;

/// A root `(λ:μ)` of a binary form together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryRoot {
    pub lambda: C64,
    pub mu: C64,
    pub multiplicity: usize,
}

impl BinaryRoot {
    pub fn is_real(&self) -> bool {
        let n = (self.lambda.norm_sqr() + self.mu.norm_sqr()).sqrt();
        // fix the phase so the larger coordinate is real
        let k = if self.lambda.norm() >= self.mu.norm() { self.lambda } else { self.mu };
        let ph = k.conj() / k.norm();
        let l = self.lambda * ph;
        let m = self.mu * ph;
        l.im.abs() + m.im.abs() <= crate::tol::REAL * n
    }

    /// Real representative, if the root is real.
    pub fn real(&self) -> Option<(f64, f64)> {
        if !self.is_real() {
            return None;
        }
        let k = if self.lambda.norm() >= self.mu.norm() { self.lambda } else { self.mu };
        let ph = k.conj() / k.norm();
        Some(((self.lambda * ph).re, (self.mu * ph).re))
    }
}

fn eval_binary(c: &[f64; 4], l: f64, m: f64) -> f64 {
    c[0] * l * l * l + c[1] * l * l * m + c[2] * l * m * m + c[3] * m * m * m
}

/// Coefficients of the cubic after substituting `λ = cλ' − sμ'`, `μ = sλ' + cμ'`.
fn rotate(c: &[f64; 4], th: f64) -> [f64; 4] {
    let (s, co) = th.sin_cos();
    let at = |l: f64, m: f64| eval_binary(c, co * l - s * m, s * l + co * m);
    let c3 = at(1.0, 0.0);
    let c0 = at(0.0, 1.0);
    let pp = at(1.0, 1.0) - c3 - c0;
    let pm = at(1.0, -1.0) - c3 + c0;
    let c1 = 0.5 * (pp + pm);
    let c2 = 0.5 * (pp - pm);
    [c3, c2, c1, c0]
}

/// Roots of `c0 λ³ + c1 λ²μ + c2 λμ² + c3 μ³` with multiplicities summing to 3.
///
/// Returns `None` when the cubic vanishes identically.
pub fn binary_cubic_roots(c: [f64; 4]) -> Option<Vec<BinaryRoot>> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    let c = c.map(|x| x / scale);
    let mut best = (0.0, c, 0.0f64);
    for k in 0..8 {
        let th = k as f64 * std::f64::consts::PI / 8.0;
        let r = rotate(&c, th);
        if r[0].abs() > best.2 {
            best = (th, r, r[0].abs());
        }
    }
    let (th, r, lead) = best;
    if lead < 1e-13 {
        return None;
    }
    let a = r[1] / r[0];
    let b = r[2] / r[0];
    let cc = r[3] / r[0];
    let roots = monic_cubic_roots(a, b, cc);
    let (s, co) = th.sin_cos();
    Some(roots.into_iter().map(|(t, m)| BinaryRoot { lambda: t * co - s, mu: t * s + co, multiplicity: m }).collect())
}

/// Refine a double root of `c0 λ³ + c1 λ²μ + c2 λμ² + c3 μ³` as a simple root of the derivative.
pub fn polish_double(c: [f64; 4], r: &BinaryRoot) -> BinaryRoot {
    // dehomogenize on the larger coordinate; q(x) = q0 x³ + q1 x² + q2 x + q3
    let flip = r.lambda.norm() < r.mu.norm();
    let (q, mut x) =
        if flip { ([c[0], c[1], c[2], c[3]], r.lambda / r.mu) } else { ([c[3], c[2], c[1], c[0]], r.mu / r.lambda) };
    let d1 = |x: C64| (x * 3.0 * q[0] + 2.0 * q[1]) * x + q[2];
    let d2 = |x: C64| x * 6.0 * q[0] + 2.0 * q[1];
    for _ in 0..4 {
        let g = d2(x);
        if g.norm() == 0.0 {
            break;
        }
        let nx = x - d1(x) / g;
        if d1(nx).norm() >= d1(x).norm() {
            break;
        }
        x = nx;
    }
    if r.is_real() {
        x = C64::new(x.re, 0.0);
    }
    let one = C64::new(1.0, 0.0);
    let (lambda, mu) = if flip { (x, one) } else { (one, x) };
    BinaryRoot { lambda, mu, multiplicity: r.multiplicity }
}

fn newton(a: f64, b: f64, c: f64, mut t: C64) -> C64 {
    for _ in 0..3 {
        let f = ((t + a) * t + b) * t + c;
        let d = (t * 3.0 + 2.0 * a) * t + b;
        if d.norm() == 0.0 {
            break;
        }
        let nt = t - f / d;
        let nf = ((nt + a) * nt + b) * nt + c;
        if nf.norm() < f.norm() {
            t = nt;
        } else {
            break;
        }
    }
    t
}

/// Roots of `t³ + a t² + b t + c`, clustered into multiplicities.
///
/// A double root is declared when the discriminant vanishes to 1e-7 relative
/// to its two terms; forms carry rounding that splits multiple roots like
/// the square root of the error.
pub fn monic_cubic_roots(a: f64, b: f64, c: f64) -> Vec<(C64, usize)> {
    let r = a.abs().max(b.abs().sqrt()).max(c.abs().cbrt()).max(1e-300);
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let re = |x: f64| C64::new(x, 0.0);
    if p.abs() <= 1e-7 * r * r && q.abs() <= 1e-7 * r * r * r {
        return vec![(re(shift), 3)];
    }
    let disc = 4.0 * p * p * p + 27.0 * q * q;
    if disc.abs() <= 1e-7 * (4.0 * p.abs().powi(3) + 27.0 * q * q) {
        let ud = -3.0 * q / (2.0 * p);
        let us = 3.0 * q / p;
        return vec![(re(ud + shift), 2), (newton(a, b, c, re(us + shift)), 1)];
    }
    let mut out = Vec::with_capacity(3);
    if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        for k in 0..3 {
            let u = m * (th - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            out.push((newton(a, b, c, re(u + shift)), 1));
        }
    } else {
        let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let u1 = (-q / 2.0 + d).cbrt();
        let u2 = (-q / 2.0 - d).cbrt();
        let t0 = newton(a, b, c, re(u1 + u2 + shift)).re;
        let e = a + t0;
        let f = b + e * t0;
        let disc2 = e * e / 4.0 - f;
        let im = (-disc2).max(0.0).sqrt();
        let z = newton(a, b, c, C64::new(-e / 2.0, im));
        out.push((re(t0), 1));
        out.push((z, 1));
        out.push((z.conj(), 1));
    }
    out
}

/// Roots `(s:t)` of `α s² + 2β s t + γ t²` over the complex numbers.
pub fn homogeneous_quadratic(alpha: C64, beta: C64, gamma: C64) -> [(C64, C64); 2] {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let sq = (beta * beta - alpha * gamma).sqrt();
    let sq = if (beta.conj() * sq).re < 0.0 { -sq } else { sq };
    let qq = -(beta + sq);
    let n = alpha.norm().max(beta.norm()).max(gamma.norm());
    if n == 0.0 {
        return [(one, zero), (zero, one)];
    }
    if qq.norm() <= 1e-300 {
        // β = 0 and αγ = 0
        return if alpha.norm() >= gamma.norm() { [(zero, one), (zero, one)] } else { [(one, zero), (one, zero)] };
    }
    // roots s/t = qq/α and s/t = γ/qq, written homogeneously
    [(qq, alpha), (gamma, qq)]
}
