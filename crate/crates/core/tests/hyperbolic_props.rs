mod common;

use ckconic::hyperbolic::{
    centers_axes, circle, classify, cycle_from_center, directors_directrices, focal_lines, foci, foci_by_tangents,
    orthoptic_conic, HypClass,
};
use ckconic::sample::{random_lorentz, ConicParam};
use ckconic::{incidence, tangent_pair_from_point, GeometryContext, HLine, HPoint, Region, SymForm3};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx() -> GeometryContext {
    GeometryContext::hyperbolic()
}

#[test]
fn golden_corpus_agrees_with_oracle() {
    let corpus = common::golden_corpus();
    assert_eq!(corpus.len(), 60);
    for c in HypClass::ALL {
        assert!(corpus.iter().any(|(k, _)| *k == c), "{c} missing");
    }
    for (i, (want, s)) in corpus.iter().enumerate() {
        let got = classify(s, &ctx()).unwrap();
        assert_eq!(got.class, *want, "instance {i}");
        if let Some(p) = want.pattern() {
            let (pat, _, _) = common::resultant_pattern(s, &common::omega(), 2e-3);
            let want_m: Vec<usize> = {
                let mut m = p.multiplicities().to_vec();
                m.sort();
                m
            };
            assert_eq!(pat, want_m, "instance {i} ({want})");
        }
    }
}

#[test]
fn class_survives_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (want, s) in common::golden_corpus() {
        for _ in 0..3 {
            let g = random_lorentz(&mut rng, 1.0);
            let s2 = s.pullback(&g.try_inverse().unwrap());
            assert_eq!(classify(&s2, &ctx()).unwrap().class, want);
        }
    }
}

#[test]
fn foci_agree_both_ways() {
    for (c, s) in common::golden_corpus() {
        if c == HypClass::Degenerate {
            continue;
        }
        let a: Vec<HPoint> = foci(&s, &ctx()).unwrap().iter().flatten().map(|f| f.point).collect();
        let b: Vec<HPoint> = foci_by_tangents(&s, &ctx()).unwrap().iter().flatten().map(|f| f.point).collect();
        for p in &a {
            assert!(b.iter().any(|q| q.distance(p) < 1e-8), "{c}: focus {p:?} not among {b:?}");
        }
        for q in &b {
            assert!(a.iter().any(|p| q.distance(p) < 1e-8), "{c}");
        }
    }
}

#[test]
fn every_conic_has_real_foci_and_focal_lines() {
    for (c, s) in common::golden_corpus() {
        if c == HypClass::Degenerate {
            continue;
        }
        let fl = focal_lines(&s, &ctx()).unwrap();
        assert!(fl.iter().any(|[a, b]| a.region.is_some() && b.region.is_some()), "{c}");
        let fo = foci(&s, &ctx()).unwrap();
        assert!(fo.iter().any(|[a, b]| a.region.is_some() && b.region.is_some()), "{c}");
    }
}

#[test]
fn focal_line_type_matches_contact_with_conic() {
    // a real focal line crosses the absolute iff it crosses the conic
    for (c, s) in common::golden_corpus() {
        if c == HypClass::Degenerate {
            continue;
        }
        let sd = s.normalize().unwrap();
        let sadj = sd.adjugate();
        for fl in focal_lines(&s, &ctx()).unwrap().iter().flatten() {
            let (Some(r), Some(l)) = (fl.region, fl.line.to_real()) else { continue };
            let l = l.normalize();
            let v = -sadj.eval_real(&l);
            let conic_side = if v.abs() < 1e-9 {
                Region::Ideal
            } else if v > 0.0 {
                Region::Hyperbolic
            } else {
                Region::DeSitter
            };
            assert_eq!(r, conic_side, "{c}");
        }
    }
}

#[test]
fn centers_and_axes_form_a_common_self_polar_triangle() {
    let o = common::omega();
    for (c, s) in common::golden_corpus() {
        if c.pattern() != Some(ckconic::ContactPattern::Simple) {
            continue;
        }
        let (centers, axes) = centers_axes(&s, &ctx()).unwrap();
        assert_eq!(centers.len(), 3);
        let sn = s.normalize().unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                let (p, q) = (&centers[i].point, &centers[j].point);
                let sc = |f: &SymForm3| {
                    f.bilinear(p, q).norm() / (ckconic::linalg::cnorm(&p.coords) * ckconic::linalg::cnorm(&q.coords))
                };
                assert!(sc(&sn) < 1e-9 && sc(&o) < 1e-9, "{c}");
                // the line through two centers is an axis
                let l = ckconic::join(p, q);
                assert!(axes.iter().any(|a| a.line.distance(&l) < 1e-8), "{c}");
            }
        }
        let sd = sn.dual().unwrap();
        let od = o.dual().unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                let (p, q) = (axes[i].line.as_point(), axes[j].line.as_point());
                let sc = |f: &SymForm3| {
                    f.bilinear(&p, &q).norm() / (ckconic::linalg::cnorm(&p.coords) * ckconic::linalg::cnorm(&q.coords))
                };
                assert!(sc(&sd) < 1e-9 && sc(&od) < 1e-9, "{c}");
            }
        }
    }
    let t = common::tangent_family(0.8, Vector3::new(1.0, 0.5, -1.0));
    assert_eq!(centers_axes(&t, &ctx()), Err(ckconic::Error::NoSelfPolarTriangle));
}

#[test]
fn directors_on_axes_and_directrices_through_centers() {
    for (c, s) in common::golden_corpus() {
        if c.pattern() != Some(ckconic::ContactPattern::Simple) {
            continue;
        }
        let (centers, axes) = centers_axes(&s, &ctx()).unwrap();
        let (directors, directrices) = directors_directrices(&s, &ctx()).unwrap();
        for d in &directors {
            assert!(axes.iter().any(|a| incidence(&a.line, &d.point) < 1e-9), "{c}");
        }
        for d in &directrices {
            assert!(centers.iter().any(|p| incidence(&d.line, &p.point) < 1e-9), "{c}");
        }
    }
}

#[test]
fn directrix_tangency_thresholds() {
    // ellipse: b = a/√(1+a²)
    let a = 0.8f64;
    let b = a / (1.0 + a * a).sqrt();
    let s = SymForm3::diag(1.0 / (a * a), 1.0 / (b * b), -1.0);
    let (_, dirs) = directors_directrices(&s, &ctx()).unwrap();
    let x = a * a * ((1.0 - b * b) / (a * a - b * b)).sqrt();
    assert!((x - 1.0).abs() < 1e-12);
    assert!(dirs.iter().any(|d| d.region == Some(Region::Ideal) && d.line.same(&HLine::real(1.0, 0.0, -1.0), 1e-9)));
    // elliptic parabola: a = 2b², and d2 = {x = 1}
    let (a, b) = (0.5f64, 0.5f64);
    let s = common::elliptic_parabola(a, b);
    let (_, dirs) = directors_directrices(&s, &ctx()).unwrap();
    let d1 = 1.0 + 2.0 * a * (a - b * b) / (-a + 2.0 * b * b - a * b * b);
    assert!(dirs.iter().any(|d| d.line.same(&HLine::real(1.0, 0.0, -d1), 1e-9)));
    assert!(dirs.iter().any(|d| d.line.same(&HLine::real(1.0, 0.0, -1.0), 1e-9)));
    let f1 = 1.0 - 2.0 * (a - b * b) / (1.0 - b * b);
    let fs = foci(&s, &ctx()).unwrap();
    assert!(fs.iter().flatten().any(|f| f.point.same(&HPoint::real(f1, 0.0, 1.0), 1e-9)));
}

#[test]
fn semihyperbola_foci_formulas() {
    for (a, b) in [(0.5f64, 0.7f64), (-1.0, 0.4), (1.2, 0.9)] {
        let s = common::semihyperbola(a, b);
        let r = (b.powi(4) - a * b * b + 1.0).sqrt();
        let f1 = HPoint::real(b * b / (1.0 - r), 0.0, 1.0);
        let f2 = HPoint::real(b * b / (1.0 + r), 0.0, 1.0);
        let fs: Vec<_> = foci(&s, &ctx()).unwrap().into_iter().flatten().collect();
        let hit = |p: &HPoint| fs.iter().find(|f| f.point.distance(p) < 1e-9).map(|f| f.region);
        assert_eq!(hit(&f1), Some(Some(Region::DeSitter)));
        assert_eq!(hit(&f2), Some(Some(Region::Hyperbolic)));
        let (_, dirs) = directors_directrices(&s, &ctx()).unwrap();
        for x in [b * b / (a * b * b - 1.0 + r), b * b / (a * b * b - 1.0 - r)] {
            assert!(dirs.iter().any(|d| d.line.same(&HLine::real(1.0, 0.0, -x), 1e-9)));
        }
    }
}

#[test]
fn horocycle_has_coincident_ideal_foci() {
    let s = omega_plus_tt(0.8);
    let fs = foci(&s, &ctx()).unwrap();
    assert!(fs.iter().any(|[a, b]| a.point.distance(&b.point) < 1e-9
        && a.region == Some(Region::Ideal)
        && a.point.same(&HPoint::real(1.0, 0.0, 1.0), 1e-9)));
}

fn omega_plus_tt(k: f64) -> SymForm3 {
    common::omega().add(&SymForm3::outer(&Vector3::new(1.0, 0.0, -1.0)).scale(k))
}

#[test]
fn circle_focal_lines_are_limits_of_ellipses() {
    let c = SymForm3::diag(1.0, 1.0, -0.25);
    let fl = focal_lines(&c, &ctx()).unwrap();
    // the tangents at (1, ±i, 0) to the absolute, and the line at infinity through them
    let e = SymForm3::diag(1.0, 1.0 + 1e-3, -0.25);
    let fle = focal_lines(&e, &ctx()).unwrap();
    for l in fl.iter().flatten() {
        assert!(fle.iter().flatten().any(|m| m.line.distance(&l.line) < 5e-2));
    }
}

#[test]
fn cycles_by_center_type() {
    let c = ctx();
    let h = cycle_from_center(&Vector3::new(0.0, 0.0, 1.0), 1.0 / 1.2f64.cosh().powi(2), &c).unwrap();
    assert_eq!(classify(&h, &c).unwrap().class, HypClass::Circle);
    let r = 0.7f64;
    let ci = circle(&Vector3::new(0.0, 0.0, 1.0), r, &c).unwrap();
    assert!(ci.proportional(&SymForm3::diag(1.0, 1.0, -r.tanh().powi(2)), 1e-12));
    let hc = cycle_from_center(&Vector3::new(1.0, 0.0, 1.0), 0.6, &c).unwrap();
    assert_eq!(classify(&hc, &c).unwrap().class, HypClass::Horocycle);
    let p = Vector3::new(1.0, 0.2, 0.3);
    let hy = cycle_from_center(&p, 0.4, &c).unwrap();
    assert_eq!(classify(&hy, &c).unwrap().class, HypClass::Hypercycle);
    // equidistant from the polar line of p
    let cp = ConicParam::new(&hy).unwrap();
    let pn = p / c.omega(&p, &p).sqrt();
    let mut d = vec![];
    for k in 0..40 {
        let x = cp.point(k as f64 * 0.0785);
        if c.omega(&x, &x) >= 0.0 {
            continue;
        }
        let x = x / (-c.omega(&x, &x)).sqrt();
        d.push(c.omega(&x, &pn).abs().asinh());
    }
    assert!(d.len() > 5);
    let (lo, hi) = d.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi - lo < 1e-10, "{}", hi - lo);
    assert_eq!(cycle_from_center(&Vector3::new(0.0, 0.0, 1.0), 2.0, &c), Err(ckconic::Error::EmptyConic));
}

#[test]
fn orthoptic_points_see_conic_at_right_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let od = common::omega().dual().unwrap();
    let mut checked = 0;
    for (c, s) in common::golden_corpus() {
        if c == HypClass::Degenerate {
            continue;
        }
        let Ok(orth) = orthoptic_conic(&s, &ctx()) else { continue };
        let Some(cp) = ConicParam::new(&orth) else { continue };
        for _ in 0..5 {
            let x = cp.point(rand::Rng::gen_range(&mut rng, 0.0..3.1));
            let Ok(tp) = tangent_pair_from_point(&s, &HPoint::from_real(&x)) else { continue };
            let (a, b) = (tp.lines[0].coeffs, tp.lines[1].coeffs);
            let v = od.bilinear(&HPoint::new(a), &HPoint::new(b)).norm()
                / (ckconic::linalg::cnorm(&a) * ckconic::linalg::cnorm(&b));
            assert!(v < 1e-9, "{c}: {v}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}
