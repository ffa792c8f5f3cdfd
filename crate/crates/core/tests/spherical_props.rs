mod common;

use ckconic::linalg::parallel;
use ckconic::sample::{random_rotation, spherical_params};
use ckconic::spherical::*;
use ckconic::{conic_intersections, SymForm3};
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn ellipse_perimeter_helper() {
    assert!((common::ellipse_perimeter(1.0, 1.0) - std::f64::consts::TAU).abs() < 1e-14);
    // degenerate ellipse: four times the major semi-axis
    assert!((common::ellipse_perimeter(1.0, 1e-12) - 4.0).abs() < 1e-9);
    assert!(common::isoperimetric_defect(2.0, 1.0) > 0.1);
}

#[test]
fn canonicalization_round_trip() {
    let mut r = rng(1);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let rot = random_rotation(&mut r);
        let s = canonical_form(a, b, c).pullback(&rot).scale(r.gen_range(-3.0..3.0));
        let Ok(k) = canonicalize_spherical(&s) else { panic!("rejected") };
        assert!(common::rel(k.a, a) < 1e-9 || !s.scale(1.0).is_degenerate());
        let ratio = k.a / a;
        assert!((k.b / b - ratio).abs() < 1e-8 * ratio && (k.c / c - ratio).abs() < 1e-8 * ratio);
        assert!((k.rotation * k.rotation.transpose() - Matrix3::identity()).norm() < 1e-12);
        assert!((k.rotation.determinant() - 1.0).abs() < 1e-12);
        for i in 0..3 {
            let row: Vector3<f64> = k.rotation.row(i).transpose();
            let want: Vector3<f64> = rot.row(i).transpose();
            assert!(parallel(&row, &want) < 1e-7, "{}", parallel(&row, &want));
        }
    }
}

#[test]
fn parallel_sections_of_cyclic_planes_are_circles() {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let s = canonical_form(a, b, c).matrix();
        for pl in cyclic_planes(a, b, c).unwrap() {
            let n = pl.to_real().unwrap();
            let t = r.gen_range(0.1..3.0);
            let (p, q) = common::plane_section_axes(&s, &n, t).expect("section is an ellipse");
            worst = worst.max(common::isoperimetric_defect(p, q).abs());
            assert!(common::rel(p, q) < 1e-7);
        }
        // a generic plane through the same point is not cyclic
        let n = Vector3::new(0.3, 0.2, 1.0);
        if let Some((p, q)) = common::plane_section_axes(&s, &n, 1.0) {
            assert!(common::rel(p, q) > 1e-6);
        }
    }
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn directrices_are_polars_of_foci() {
    let mut r = rng(3);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let s = canonical_form(a, b, c).matrix();
        let f = foci(a, b, c).unwrap();
        let (dirs, dx) = directors_directrices(a, b, c).unwrap();
        for i in 0..2 {
            let pol = s * f[i];
            assert!(parallel(&pol, &dx[i].to_real().unwrap()) <= 1e-10);
        }
        // directors are poles of the cyclic planes
        let cp = cyclic_planes(a, b, c).unwrap();
        for i in 0..2 {
            assert!(parallel(&(s * dirs[i]), &cp[i].to_real().unwrap()) <= 1e-10);
        }
    }
}

#[test]
fn foci_are_dual_to_cyclic_planes_of_the_polar_cone() {
    let mut r = rng(4);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let polar = canonical_form(a, b, c).dual().unwrap();
        let k = canonicalize_spherical(&polar).unwrap();
        let f = foci(a, b, c).unwrap();
        for pl in cyclic_planes(k.a, k.b, k.c).unwrap() {
            let n = k.from_canonical(&pl.to_real().unwrap());
            let best = f.iter().map(|x| parallel(x, &n)).fold(f64::MAX, f64::min);
            assert!(best <= 1e-9, "{best}");
        }
    }
}

#[test]
fn cyclic_traces_are_asymptotes_of_major_projection() {
    let mut r = rng(5);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let [_, major, _] = axis_projections(a, b, c).unwrap();
        assert!(major.is_hyperbola());
        // p y² + q z² = rhs has asymptotes y/z = ±√(−q/p)
        let slope = (-major.q / major.p).sqrt();
        for pl in cyclic_planes(a, b, c).unwrap() {
            let l = pl.to_real().unwrap();
            // trace l1 y + l2 z = 0 in the (y, z) plane
            let s = (l[2] / l[1]).abs();
            assert!(common::rel(s, slope) <= 1e-9);
        }
    }
}

#[test]
fn projections_contain_sampled_points() {
    let mut r = rng(6);
    for _ in 0..100 {
        let (a, b, c) = spherical_params(&mut r);
        let pr = axis_projections(a, b, c).unwrap();
        for _ in 0..10 {
            let v = spherical_point(a, b, c, r.gen_range(0.0..std::f64::consts::TAU));
            assert!(canonical_form(a, b, c).eval_real(&v).abs() < 1e-12);
            for p in &pr {
                let scale = p.p.abs().max(p.q.abs()).max(p.rhs.abs());
                assert!(p.residual(&v).abs() <= 1e-9 * scale);
            }
        }
    }
}

#[test]
fn orthogonality_iff_conjugacy_through_a_cocyclic_line() {
    let mut r = rng(7);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let si = canonical_form(a, b, c).dual().unwrap().matrix();
        for f in foci(a, b, c).unwrap() {
            let w = ckconic::sample::random_unit(&mut r);
            let n1 = f.cross(&w).normalize();
            let n2 = f.cross(&n1);
            // orthogonal planes through F are conjugate
            let conj = n1.dot(&(si * n2)) / (si * n1).norm() / n2.norm();
            assert!(conj.abs() < 1e-10, "{conj}");
            // a non-orthogonal pair is not
            let n3 = (n2 + 0.3 * n1).normalize();
            assert!(n1.dot(&(si * n3)).abs() / (si * n1).norm() > 1e-4);
        }
    }
}

#[test]
fn family_members_keep_their_invariants() {
    let mut r = rng(8);
    for _ in 0..200 {
        let (a, b, c) = spherical_params(&mut r);
        let f0 = foci(a, b, c).unwrap();
        let cp0 = cyclic_planes(a, b, c).unwrap();
        for kind in [FamilyKind::Confocal, FamilyKind::SharedFocalLines] {
            assert!(family_member(a, b, c, 0.0, kind).unwrap().proportional(&canonical_form(a, b, c), 1e-14));
            let w = family_window(a, b, c, kind)[r.gen_range(0..2)];
            let l = r.gen_range(w.0..w.1);
            let m = family_member(a, b, c, l, kind).unwrap();
            let Ok(k) = canonicalize_spherical(&m) else { continue };
            match kind {
                FamilyKind::Confocal => {
                    let f = foci(k.a, k.b, k.c).unwrap();
                    for x in &f {
                        let x = k.from_canonical(x);
                        let best = f0.iter().map(|y| parallel(&x, y)).fold(f64::MAX, f64::min);
                        assert!(best < 1e-8, "{best}");
                    }
                }
                FamilyKind::SharedFocalLines => {
                    for pl in cyclic_planes(k.a, k.b, k.c).unwrap() {
                        let n = k.from_canonical(&pl.to_real().unwrap());
                        let best = cp0.iter().map(|y| parallel(&n, &y.to_real().unwrap())).fold(f64::MAX, f64::min);
                        assert!(best < 1e-8, "{best}");
                    }
                }
            }
        }
    }
}

#[test]
fn confocal_conics_cross_at_right_angles() {
    let mut r = rng(9);
    let mut checked = 0;
    for _ in 0..100 {
        let (a, b, c) = spherical_params(&mut r);
        let l1 = r.gen_range(-c * c * 0.95..b * b * 0.95);
        let l2 = r.gen_range(b * b + 0.05 * (a * a - b * b)..a * a * 0.99 + b * b * 0.01);
        let s1 = family_member(a, b, c, l1, FamilyKind::Confocal).unwrap();
        let s2 = family_member(a, b, c, l2, FamilyKind::Confocal).unwrap();
        let Ok(set) = conic_intersections(&s1, &s2) else { continue };
        for p in set.points.iter().filter_map(|(p, _)| p.to_real()) {
            let v = p.normalize();
            let (g1, g2) = (s1.matrix() * v, s2.matrix() * v);
            assert!((g1.dot(&g2) / g1.norm() / g2.norm()).abs() < 1e-9);
            checked += 1;
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn right_angle_locus_sees_its_arc_at_right_angles() {
    let mut r = rng(10);
    for _ in 0..100 {
        let b: f64 = r.gen_range(0.3..3.0);
        let c: f64 = r.gen_range(0.3..3.0);
        // 1/b² = 1/a² + 1/c² forces a > b
        let a: f64 = 1.0 / (1.0 / (b * b) - 1.0 / (c * c)).sqrt();
        if !a.is_finite() || a <= b * 1.001 {
            continue;
        }
        assert!(special_flags(a, b, c).right_angle_locus);
        let [p1, p2] = cyclic_planes(a, b, c).unwrap().map(|l| l.to_real().unwrap().normalize());
        let s = canonical_form(a, b, c);
        assert!(s.eval_real(&p1).abs() < 1e-10 * s.frobenius());
        for _ in 0..10 {
            let x = spherical_point(a, b, c, r.gen_range(0.0..std::f64::consts::TAU));
            let (x1, x2) = if p1.dot(&x) > 0.0 { (p1, p2) } else { (-p1, -p2) };
            assert!((x1.dot(&x2) - x.dot(&x1) * x.dot(&x2)).abs() < 1e-10);
        }
    }
}

#[test]
fn special_flags_reject_generic_parameters() {
    let mut r = rng(11);
    for _ in 0..100 {
        let (a, b, c) = spherical_params(&mut r);
        let f = special_flags(a, b, c);
        assert!(!f.right_angle_locus && !f.thales_envelope && !f.spherical_parabola);
    }
    let _ = SymForm3::identity();
}
