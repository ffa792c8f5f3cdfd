use ckconic::confocal::ConfocalFamily;
use ckconic::error::Error;
use ckconic::input::{parse_spec, ConicSpec};
use ckconic::projective::{GeometryKind, SymForm3};
use ckconic::render::*;
use ckconic::spherical;

fn demo(name: &str) -> Scene {
    demos().into_iter().find(|d| d.0 == name).unwrap().1
}

fn svg_ok(svg: &str) {
    let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    for n in doc.descendants() {
        for a in n.attributes() {
            assert!(!a.name().contains("href"), "external reference {}", a.name());
            assert!(!a.value().contains("url("), "external reference {}", a.value());
        }
    }
}

#[test]
fn absolute_only_scene_is_one_circle() {
    let s = Scene::new(Chart::Bck).with(Element::conic(SymForm3::diag(2.0, 2.0, -2.0)));
    let svg = render(&s).unwrap();
    svg_ok(&svg);
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(svg.matches("<path").count(), 0);
}

#[test]
fn empty_scenes_are_rejected() {
    assert_eq!(render(&Scene::new(Chart::Bck)), Err(Error::EmptyScene));
    let notes_only = Scene::new(Chart::GnomonicZ).with(Element::Note("nothing".into()));
    assert_eq!(render(&notes_only), Err(Error::EmptyScene));
}

#[test]
fn demos_are_deterministic_and_valid() {
    let a: Vec<String> = demos().iter().map(|(_, s)| render(s).unwrap()).collect();
    let b: Vec<String> = demos().iter().map(|(_, s)| render(s).unwrap()).collect();
    assert_eq!(a, b);
    assert!(a.len() >= 6);
    for svg in &a {
        svg_ok(svg);
    }
}

#[test]
fn confocal_nets_are_orthogonal() {
    for name in ["hyperbolic-confocal", "spherical-confocal"] {
        let s = demo(name);
        let t = trace(&s).unwrap();
        let angles = crossing_angles(&s, &t);
        assert!(angles.len() >= 16, "{name}: {} crossings", angles.len());
        for a in angles {
            assert!((a - 90.0).abs() <= 0.1, "{name}: crossing at {a}°");
        }
    }
}

#[test]
fn non_confocal_crossings_are_not_right_angles() {
    let s = demo("hyperbolic-conics");
    let t = trace(&s).unwrap();
    assert!(crossing_angles(&s, &t).iter().any(|a| (a - 90.0).abs() > 1.0));
}

#[test]
fn gnomonic_trichotomy() {
    let (a, b, c) = (1.6, 0.9, 1.0);
    let conic = |chart: Chart| {
        let s = Scene::new(chart).with(Element::conic(spherical::canonical_form(a, b, c)));
        trace(&s).unwrap().polylines
    };
    let foci_visible = |chart: Chart| {
        spherical::foci(a, b, c)
            .unwrap()
            .iter()
            .filter(|f| chart.project(f).is_some_and(|p| chart.default_viewport().contains(p)))
            .count()
    };
    let z = conic(Chart::GnomonicZ);
    assert!(z.len() == 1 && z[0].closed);
    assert_eq!(foci_visible(Chart::GnomonicZ), 2);
    let x = conic(Chart::GnomonicX);
    assert!(x.len() == 2 && x.iter().all(|p| !p.closed));
    assert_eq!(foci_visible(Chart::GnomonicX), 2);
    let y = conic(Chart::GnomonicY);
    assert!(y.len() == 2 && y.iter().all(|p| !p.closed));
    for f in spherical::foci(a, b, c).unwrap() {
        assert!(Chart::GnomonicY.project(&f).is_none());
    }
}

#[test]
fn focal_lines_are_not_asymptotes() {
    let (a, b, c) = (1.6, 0.9, 1.0);
    // in the x chart the conic is w²/c² − u²/b² = 1/a² with asymptotes w = ±(c/b)u
    for l in spherical::cyclic_planes(a, b, c).unwrap() {
        let n = l.to_real().unwrap();
        let slope = (n[1] / n[2]).abs();
        assert!((slope - c / b).abs() > 0.1, "slope {slope}");
    }
}

#[test]
fn de_sitter_parts_are_dashed() {
    let hyperbola = SymForm3::diag(4.0, -1.0, -0.25);
    let mut s = Scene::new(Chart::Bck).with(Element::conic(hyperbola));
    let t = trace(&s).unwrap();
    assert!(t.polylines.iter().any(|p| p.stroke == Stroke::Dashed));
    assert!(t.polylines.iter().any(|p| p.stroke == Stroke::Solid));
    for p in t.polylines.iter().filter(|p| p.stroke == Stroke::Solid) {
        assert!(p.points.iter().all(|q| q.0.hypot(q.1) <= 1.0 + 1e-9));
    }
    assert!(render(&s).unwrap().contains("stroke-dasharray"));
    s.de_sitter = false;
    let t = trace(&s).unwrap();
    assert!(t.polylines.iter().all(|p| p.stroke == Stroke::Solid));
    let circle = Scene::new(Chart::Bck).with(Element::conic(SymForm3::diag(1.0, 1.0, -0.25)));
    assert!(!render(&circle).unwrap().contains("stroke-dasharray"));
}

#[test]
fn chords_stay_close_to_the_curve() {
    let r = 0.5;
    let s = Scene::new(Chart::Bck).with(Element::conic(SymForm3::diag(1.0, 1.0, -r * r)));
    let t = trace(&s).unwrap();
    let tol = 1e-3 * s.viewport.size();
    for w in t.polylines[0].points.windows(2) {
        let half = 0.5 * (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
        assert!(r - (r * r - half * half).sqrt() <= tol);
    }
}

#[test]
fn non_real_elements_get_a_legend_note() {
    let s = Scene::new(Chart::GnomonicZ)
        .with(Element::conic(spherical::canonical_form(2.0, 1.0, 1.0)))
        .with(Element::conic(SymForm3::identity()));
    let svg = render(&s).unwrap();
    assert!(svg.contains("1 non-real element omitted"));
    let s = Scene::new(Chart::Bck)
        .with(Element::Conic { form: SymForm3::diag(1.0, 1.0, -0.25), label: Some("a < b & c".into()) });
    svg_ok(&render(&s).unwrap());
}

#[test]
fn scenes_from_records() {
    let specs = parse_spec("absolute = hyperbolic\nform = 1, 0, 0, 1, 0, -0.25\nlabel = circle\n").unwrap();
    let s = Scene::from_specs(Chart::Bck, &specs).unwrap();
    assert!(render(&s).unwrap().contains("circle"));
    assert!(matches!(Scene::from_specs(Chart::GnomonicX, &specs), Err(Error::WrongContext(_))));
    let sph = [ConicSpec::new(GeometryKind::Spherical, spherical::canonical_form(2.0, 1.0, 1.0))];
    assert!(Scene::from_specs(Chart::GnomonicY, &sph).is_ok());
}

#[test]
fn rendered_net_of_another_family() {
    let fam = ConfocalFamily::spherical(2.0, 1.2, 0.7).unwrap();
    let s = confocal_net(Chart::GnomonicZ, &fam, &[-0.3, 0.2, 0.8, 1.6, 2.5, 3.2]).unwrap();
    let t = trace(&s).unwrap();
    let angles = crossing_angles(&s, &t);
    assert!(!angles.is_empty());
    assert!(angles.iter().all(|a| (a - 90.0).abs() <= 0.1));
}
