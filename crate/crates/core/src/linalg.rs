//! Small dense helpers: adjugates, complex vectors, a cyclic Jacobi eigensolver.

use nalgebra::{ComplexField, Matrix3, Vector3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CVec3 = Vector3<C64>;
pub type CMat3 = Matrix3<C64>;

pub fn adjugate<T: ComplexField + Copy>(m: &Matrix3<T>) -> Matrix3<T> {
    let c = |i: usize, j: usize| m[(i, j)];
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| c(r0, c0) * c(r1, c1) - c(r0, c1) * c(r1, c0);
    Matrix3::new(
        cof(1, 2, 1, 2),
        -cof(0, 2, 1, 2),
        cof(0, 1, 1, 2),
        -cof(1, 2, 0, 2),
        cof(0, 2, 0, 2),
        -cof(0, 1, 0, 2),
        cof(1, 2, 0, 1),
        -cof(0, 2, 0, 1),
        cof(0, 1, 0, 1),
    )
}

/// Cross-product matrix `[p]x` with `[p]x v = p x v`.
pub fn cross_matrix<T: ComplexField + Copy>(p: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3::new(z, -p[2], p[1], p[2], z, -p[0], -p[1], p[0], z)
}

pub fn to_complex(v: &Vector3<f64>) -> CVec3 {
    v.map(|x| C64::new(x, 0.0))
}

pub fn to_complex_mat(m: &Matrix3<f64>) -> CMat3 {
    m.map(|x| C64::new(x, 0.0))
}

/// Bilinear product without conjugation.
pub fn cdot(a: &CVec3, b: &CVec3) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cnorm(v: &CVec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scale so the entry of largest modulus becomes 1.
pub fn cnormalize(v: &CVec3) -> CVec3 {
    let k = (0..3).max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm())).unwrap();
    let s = v[k];
    if s.norm() == 0.0 {
        return *v;
    }
    v.map(|z| z / s)
}

/// Relative size of the imaginary part after [`cnormalize`].
pub fn imag_ratio(v: &CVec3) -> f64 {
    let n = cnormalize(v);
    n.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// `|a x b| / (|a||b|)`: zero iff proportional.
pub fn cparallel(a: &CVec3, b: &CVec3) -> f64 {
    let d = cnorm(a) * cnorm(b);
    if d == 0.0 {
        return 0.0;
    }
    cnorm(&a.cross(b)) / d
}

pub fn parallel(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let d = a.norm() * b.norm();
    if d == 0.0 {
        return 0.0;
    }
    a.cross(b).norm() / d
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat3) -> [f64; 3] {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2]]
}

pub fn rank_with(m: &CMat3, tol: f64) -> usize {
    let s = singular_values(m);
    if s[0] == 0.0 {
        return 0;
    }
    1 + (s[1] > tol * s[0]) as usize + (s[2] > tol * s[0]) as usize
}

/// Eigen-decomposition of a real symmetric 3x3 matrix by cyclic Jacobi sweeps.
///
/// Eigenvalues are returned ascending; column `k` of the matrix is the
/// eigenvector of eigenvalue `k`.
pub fn jacobi_eigen(m: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = Matrix3::<f64>::identity();
    for _ in 0..64 {
        let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
        if off <= 1e-300 || off.sqrt() <= f64::EPSILON * 1e-3 * a.norm() {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut r = Matrix3::<f64>::identity();
            r[(p, p)] = c;
            r[(q, q)] = c;
            r[(p, q)] = s;
            r[(q, p)] = -s;
            a = r.transpose() * a * r;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            v *= r;
        }
    }
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let vals = Vector3::new(a[(idx[0], idx[0])], a[(idx[1], idx[1])], a[(idx[2], idx[2])]);
    let vecs = Matrix3::from_columns(&[
        v.column(idx[0]).into_owned(),
        v.column(idx[1]).into_owned(),
        v.column(idx[2]).into_owned(),
    ]);
    (vals, vecs)
}

/// Flip `v` so its largest-magnitude component is positive.
pub fn fix_sign(v: Vector3<f64>) -> Vector3<f64> {
    let k = v.iamax();
    if v[k] < 0.0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_times_matrix_is_det() {
        let m = Matrix3::new(2.0, 1.0, 0.5, 1.0, -3.0, 0.25, 0.5, 0.25, 4.0);
        let p = m * adjugate(&m);
        let d = m.determinant();
        assert!((p - Matrix3::identity() * d).norm() < 1e-12);
    }

    #[test]
    fn jacobi_recovers_spectrum() {
        let m = Matrix3::new(4.0, 1.0, -2.0, 1.0, 2.0, 0.0, -2.0, 0.0, 3.0);
        let (w, v) = jacobi_eigen(&m);
        assert!((v.transpose() * v - Matrix3::identity()).norm() < 1e-13);
        let d = v.transpose() * m * v;
        for i in 0..3 {
            assert!((d[(i, i)] - w[i]).abs() < 1e-12);
        }
        assert!(w[0] <= w[1] && w[1] <= w[2]);
        assert!((w.sum() - m.trace()).abs() < 1e-12);
    }

    #[test]
    fn cross_matrix_matches_cross() {
        let p = Vector3::new(1.0, -2.0, 0.5);
        let q = Vector3::new(0.3, 0.7, -1.1);
        assert!((cross_matrix(&p) * q - p.cross(&q)).norm() < 1e-15);
    }
}
