#![allow(dead_code)]

use ckconic::SymForm3;
use nalgebra::{Complex, Matrix3, Matrix4, Vector3};

fn pmul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn psub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).collect()
}

fn pscale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// Coefficients in y of S(x, y, 1): (a, b(x), c(x)), polynomials low degree first.
fn in_y(s: &Matrix3<f64>) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let a = vec![s[(1, 1)]];
    let b = vec![2.0 * s[(1, 2)], 2.0 * s[(0, 1)]];
    let c = vec![s[(2, 2)], 2.0 * s[(0, 2)], s[(0, 0)]];
    (a, b, c)
}

/// Resultant in y of S(x,y,1) and T(x,y,1): a quartic in x.
pub fn resultant_quartic(s: &Matrix3<f64>, t: &Matrix3<f64>) -> Vec<f64> {
    let (a1, b1, c1) = in_y(s);
    let (a2, b2, c2) = in_y(t);
    let ac = psub(&pmul(&a1, &c2), &pmul(&a2, &c1));
    let ab = psub(&pmul(&a1, &b2), &pmul(&a2, &b1));
    let bc = psub(&pmul(&b1, &c2), &pmul(&b2, &c1));
    let mut r = psub(&pmul(&ac, &ac), &pmul(&ab, &bc));
    r.resize(5, 0.0);
    r
}

/// Roots of a quartic (low degree first) via the companion matrix.
pub fn quartic_roots(p: &[f64]) -> Vec<Complex<f64>> {
    let lead = p[4];
    let mut m = Matrix4::<f64>::zeros();
    for i in 1..4 {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..4 {
        m[(i, 3)] = -p[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Multiplicity pattern from clustering the quartic's roots with a loose radius.
pub fn cluster(roots: &[Complex<f64>], radius: f64) -> Vec<usize> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut m = 1;
        for j in i + 1..roots.len() {
            if !used[j] && (roots[i] - roots[j]).norm() <= radius * (1.0 + roots[i].norm().max(roots[j].norm())) {
                used[j] = true;
                m += 1;
            }
        }
        out.push(m);
    }
    out.sort();
    out
}

/// Intersection multiplicities of two conics, computed independently of the library:
/// a generic projective change of coordinates followed by the y-resultant.
///
/// `radius` is the relative clustering radius; a 4-fold root spreads like
/// the fourth root of the rounding error, so special contacts need ~1e-3.
type Pattern = (Vec<usize>, Vec<Complex<f64>>, Matrix3<f64>);

pub fn resultant_pattern(s: &SymForm3, t: &SymForm3, radius: f64) -> Pattern {
    // distinct points sharing an x coordinate would merge, so try a few
    // generic charts and keep the finest clustering
    let charts = [
        Matrix3::new(1.0, 0.31, -0.17, 0.23, 1.0, 0.29, -0.13, 0.37, 1.0),
        Matrix3::new(0.9, -0.41, 0.27, 0.35, 1.1, -0.19, 0.21, -0.33, 1.0),
        Matrix3::new(1.0, 0.12, 0.44, -0.28, 0.8, 0.15, 0.38, 0.22, 1.2),
    ];
    let mut best: Option<Pattern> = None;
    for g in charts {
        let s2 = g.transpose() * s.normalize().unwrap().matrix() * g;
        let t2 = g.transpose() * t.normalize().unwrap().matrix() * g;
        let roots = quartic_roots(&resultant_quartic(&s2, &t2));
        let pat = cluster(&roots, radius);
        if best.as_ref().is_none_or(|b| pat.len() > b.0.len()) {
            best = Some((pat, roots, g));
        }
    }
    best.unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

pub fn v3(x: f64, y: f64, z: f64) -> Vector3<f64> {
    Vector3::new(x, y, z)
}

use ckconic::hyperbolic::HypClass;

/// `(x−h)²/a² + y²/b² = 1` in the chart z = 1.
pub fn shifted_ellipse(h: f64, a: f64, b: f64) -> SymForm3 {
    SymForm3::new(1.0 / (a * a), 0.0, -h / (a * a), 1.0 / (b * b), 0.0, h * h / (a * a) - 1.0)
}

/// `(x−h)²/a² − y²/b² = 1` in the chart z = 1.
pub fn shifted_hyperbola(h: f64, a: f64, b: f64) -> SymForm3 {
    SymForm3::new(1.0 / (a * a), 0.0, -h / (a * a), -1.0 / (b * b), 0.0, h * h / (a * a) - 1.0)
}

/// `a x² − 2xz + y²/b² = 0`
pub fn semihyperbola(a: f64, b: f64) -> SymForm3 {
    SymForm3::new(a, 0.0, -1.0, 1.0 / (b * b), 0.0, 0.0)
}

/// `(x−(1−a))²/a² + y²/b² = 1`, `b² < a < 1`.
pub fn elliptic_parabola(a: f64, b: f64) -> SymForm3 {
    shifted_ellipse(1.0 - a, a, b)
}

pub fn omega() -> SymForm3 {
    SymForm3::diag(1.0, 1.0, -1.0)
}

/// Ω + k·t⊙m with t the tangent of Ω at (1,0,1).
pub fn tangent_family(k: f64, m: Vector3<f64>) -> SymForm3 {
    let t = Vector3::new(1.0, 0.0, -1.0);
    omega().add(&SymForm3::sym_outer(&t, &m).scale(k))
}

pub fn golden_corpus() -> Vec<(HypClass, SymForm3)> {
    use HypClass::*;
    let ell = |a: f64, b: f64| SymForm3::diag(1.0 / (a * a), 1.0 / (b * b), -1.0);
    let t = Vector3::new(1.0, 0.0, -1.0);
    let mut v = vec![
        (Ellipse, ell(0.8, 0.5)),
        (Ellipse, ell(0.6, 0.3)),
        (Ellipse, ell(0.95, 0.2)),
        // directrices tangent to the absolute
        (Ellipse, ell(0.8, 0.8 / 1.64f64.sqrt())),
        (ConvexHyperbola, shifted_hyperbola(0.0, 0.5, 0.5)),
        (ConvexHyperbola, shifted_hyperbola(0.0, 0.8, 2.0)),
        (ConvexHyperbola, shifted_hyperbola(0.0, 0.9, 0.3)),
        (ConcaveHyperbola, shifted_ellipse(0.0, 1.5, 0.5)),
        (ConcaveHyperbola, shifted_ellipse(0.0, 3.0, 0.9)),
        (ConcaveHyperbola, shifted_ellipse(0.1, 1.2, 0.6)),
        (Semihyperbola, semihyperbola(0.0, 0.6)),
        (Semihyperbola, semihyperbola(1.0, 0.5)),
        (Semihyperbola, semihyperbola(-1.5, 0.8)),
        // circular arc: a = 1/b²
        (Semihyperbola, semihyperbola(1.5625, 0.8)),
        (DeSitterEllipse, shifted_ellipse(0.0, 2.0, 1.5)),
        (DeSitterEllipse, shifted_ellipse(0.0, 1.3, 1.1)),
        (DeSitterHyperbola, shifted_hyperbola(0.0, 1.5, 1.0)),
        (DeSitterHyperbola, shifted_ellipse(3.0, 1.0, 0.5)),
        // a = 2b²: directrix tangent to the absolute
        (EllipticParabola, elliptic_parabola(0.5, 0.5)),
        (EllipticParabola, elliptic_parabola(0.6, 0.4)),
        (EllipticParabola, elliptic_parabola(0.3, 0.5)),
        (DeSitterEllipticParabola, shifted_ellipse(0.5, 1.5, 1.5)),
        (DeSitterEllipticParabola, shifted_ellipse(0.3, 1.3, 1.3)),
        (ConvexHypParabola, shifted_hyperbola(0.5, 0.5, 0.5)),
        (ConvexHypParabola, shifted_hyperbola(0.7, 0.3, 0.3)),
        (ConcaveHypParabola, shifted_ellipse(0.5, 0.5, 0.9)),
        (ConcaveHypParabola, shifted_hyperbola(1.5, 0.5, 0.5)),
        (DeSitterParabola, shifted_ellipse(1.5, 0.5, 0.3)),
        (DeSitterParabola, shifted_ellipse(2.0, 1.0, 2.0)),
        (OsculatingParabola, tangent_family(0.8, Vector3::new(1.0, 0.5, -1.0))),
        (OsculatingParabola, tangent_family(-0.5, Vector3::new(1.0, -0.7, -1.0))),
        (Circle, SymForm3::diag(1.0, 1.0, -0.25)),
        (Circle, omega().add(&SymForm3::diag(0.0, 0.0, -0.5))),
        (Horocycle, omega().add(&SymForm3::outer(&t).scale(0.8))),
        (Horocycle, omega().add(&SymForm3::outer(&t).scale(-0.3))),
        (Hypercycle, omega().add(&SymForm3::diag(-0.5, 0.0, 0.0))),
        (Hypercycle, omega().add(&SymForm3::diag(0.5, 0.0, 0.0))),
        (Degenerate, SymForm3::diag(1.0, -1.0, 0.0)),
        (Degenerate, SymForm3::outer(&Vector3::new(0.3, 0.1, 1.0))),
    ];
    // the same shapes moved by isometries
    let base: Vec<(HypClass, SymForm3)> = v.iter().take(21).cloned().collect();
    for (i, (c, s)) in base.into_iter().enumerate() {
        let g = ckconic::sample::rotation_z(0.4 * i as f64) * ckconic::sample::boost_x(0.15 + 0.05 * i as f64);
        let gi = g.try_inverse().unwrap();
        v.push((c, s.pullback(&gi)));
    }
    v
}

/// Ellipse perimeter by the arithmetic-geometric mean.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let (mut x, mut y) = (a.max(b), a.min(b));
    let mut c2 = x * x - y * y;
    let mut sum = 0.5 * c2;
    let mut pow = 0.5;
    for _ in 0..40 {
        let (nx, ny) = ((x + y) / 2.0, (x * y).sqrt());
        let c = (x - y) / 2.0;
        c2 = c * c;
        pow *= 2.0;
        sum += pow * c2;
        x = nx;
        y = ny;
        if c2 <= 1e-34 * x * x {
            break;
        }
    }
    2.0 * std::f64::consts::PI / x * (a.max(b).powi(2) - sum)
}

/// Semi-axes of the section of the cone `s` by the plane `n·v = t`.
pub fn plane_section_axes(s: &Matrix3<f64>, n: &Vector3<f64>, t: f64) -> Option<(f64, f64)> {
    let n = n.normalize();
    let seed = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u1 = n.cross(&seed).normalize();
    let u2 = n.cross(&u1);
    let m = nalgebra::Matrix2::new(u1.dot(&(s * u1)), u1.dot(&(s * u2)), u2.dot(&(s * u1)), u2.dot(&(s * u2)));
    let g = nalgebra::Vector2::new(t * u1.dot(&(s * n)), t * u2.dot(&(s * n)));
    let k = t * t * n.dot(&(s * n));
    let mi = m.try_inverse()?;
    let rhs = -(k - g.dot(&(mi * g)));
    let e = m.symmetric_eigenvalues();
    let (a2, b2) = (rhs / e[0], rhs / e[1]);
    if a2 <= 0.0 || b2 <= 0.0 {
        return None;
    }
    Some((a2.sqrt(), b2.sqrt()))
}

/// `1 − 4πA/P²` for an ellipse with semi-axes `a`, `b`.
pub fn isoperimetric_defect(a: f64, b: f64) -> f64 {
    let p = ellipse_perimeter(a, b);
    1.0 - 4.0 * std::f64::consts::PI * std::f64::consts::PI * a * b / (p * p)
}
