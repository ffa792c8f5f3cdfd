//! Deterministic SVG figures in the disk model and in gnomonic charts.
//!
//! Conics and lines are traced as projective curves, split where they leave
//! the viewport, pass through infinity or cross the absolute, and refined
//! until every chord deviates from the curve by at most `1e-3` of the
//! viewport size.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use svg::node::element::{Circle, Group, Path, Rectangle, Text};
use svg::Document;

use crate::error::{Error, Result};
use crate::input::ConicSpec;
use crate::linalg;
use crate::projective::{split_degenerate, GeometryContext, GeometryKind, HLine, HPoint, SymForm3};
use crate::sample::ConicParam;

type V3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Beltrami–Cayley–Klein disk `(x/z, y/z)` of the hyperbolic plane.
    Bck,
    /// Central projection of the sphere to the tangent plane at `(1,0,0)`.
    GnomonicX,
    GnomonicY,
    GnomonicZ,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::Bck, Chart::GnomonicX, Chart::GnomonicY, Chart::GnomonicZ];

    pub fn name(&self) -> &'static str {
        match self {
            Chart::Bck => "bck",
            Chart::GnomonicX => "gnomonic-x",
            Chart::GnomonicY => "gnomonic-y",
            Chart::GnomonicZ => "gnomonic-z",
        }
    }

    pub fn geometry(&self) -> GeometryKind {
        match self {
            Chart::Bck => GeometryKind::Hyperbolic,
            _ => GeometryKind::Spherical,
        }
    }

    pub fn context(&self) -> GeometryContext {
        match self.geometry() {
            GeometryKind::Hyperbolic => GeometryContext::hyperbolic(),
            GeometryKind::Spherical => GeometryContext::spherical(),
        }
    }

    /// Indices of the chart coordinates and of the projection center.
    fn axes(&self) -> (usize, usize, usize) {
        match self {
            Chart::Bck | Chart::GnomonicZ => (0, 1, 2),
            Chart::GnomonicX => (1, 2, 0),
            Chart::GnomonicY => (2, 0, 1),
        }
    }

    /// Chart coordinates, `None` on the line at infinity.
    pub fn project(&self, v: &V3) -> Option<(f64, f64)> {
        let (i, j, k) = self.axes();
        if v[k].abs() <= 1e-12 * v.norm() {
            return None;
        }
        Some((v[i] / v[k], v[j] / v[k]))
    }

    pub fn lift(&self, (u, w): (f64, f64)) -> V3 {
        let (i, j, k) = self.axes();
        let mut v = V3::zeros();
        v[i] = u;
        v[j] = w;
        v[k] = 1.0;
        v
    }

    pub fn default_viewport(&self) -> Viewport {
        match self {
            Chart::Bck => Viewport::square(1.25),
            _ => Viewport::square(3.0),
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Chart::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::ValidationError(format!("unknown chart {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn square(r: f64) -> Self {
        Viewport { xmin: -r, xmax: r, ymin: -r, ymax: r }
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }

    pub fn size(&self) -> f64 {
        (self.xmax - self.xmin).max(self.ymax - self.ymin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Conic {
        form: SymForm3,
        label: Option<String>,
    },
    Point {
        at: HPoint,
        label: Option<String>,
    },
    Line {
        line: HLine,
        label: Option<String>,
    },
    /// Free text for the legend.
    Note(String),
}

impl Element {
    pub fn conic(form: SymForm3) -> Self {
        Element::Conic { form, label: None }
    }

    fn label(&self) -> Option<&str> {
        match self {
            Element::Conic { label, .. } | Element::Point { label, .. } | Element::Line { label, .. } => {
                label.as_deref()
            }
            Element::Note(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub chart: Chart,
    pub elements: Vec<Element>,
    pub viewport: Viewport,
    /// Draw the parts outside the absolute (dashed); otherwise clip to the disk.
    pub de_sitter: bool,
}

impl Scene {
    pub fn new(chart: Chart) -> Self {
        Scene { chart, elements: vec![], viewport: chart.default_viewport(), de_sitter: true }
    }

    pub fn with(mut self, e: Element) -> Self {
        self.elements.push(e);
        self
    }

    /// Scene of parsed records; every record must live in the chart's geometry.
    pub fn from_specs(chart: Chart, specs: &[ConicSpec]) -> Result<Self> {
        let mut s = Scene::new(chart);
        for spec in specs {
            if spec.absolute != chart.geometry() {
                return Err(Error::WrongContext(format!("{:?} conic in the {chart} chart", spec.absolute)));
            }
            s.elements.push(Element::Conic { form: spec.form, label: spec.label.clone() });
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    /// Index of the element in the scene.
    pub element: usize,
    pub stroke: Stroke,
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Geometry of a scene after sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Traced {
    pub polylines: Vec<Polyline>,
    pub points: Vec<(usize, (f64, f64))>,
    /// Elements without real points.
    pub omitted: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cat {
    Hidden,
    Shown(Stroke),
}

const GRID: usize = 720;
const MAX_DEPTH: u32 = 14;

struct Tracer<'a> {
    scene: &'a Scene,
    ctx: GeometryContext,
    tol: f64,
}

/// Stroke, points and parameter of the open run.
type Run = (Stroke, Vec<(f64, f64)>, f64);

impl Tracer<'_> {
    fn cat(&self, v: &V3) -> Cat {
        let Some(p) = self.scene.chart.project(v) else { return Cat::Hidden };
        if !self.scene.viewport.contains(p) {
            return Cat::Hidden;
        }
        if self.ctx.is_hyperbolic() && self.ctx.omega(v, v) > 0.0 {
            return if self.scene.de_sitter { Cat::Shown(Stroke::Dashed) } else { Cat::Hidden };
        }
        Cat::Shown(Stroke::Solid)
    }

    fn at(&self, c: &dyn Fn(f64) -> V3, t: f64) -> (f64, f64) {
        self.scene.chart.project(&c(t)).expect("visible parameter")
    }

    /// Parameter next to the category change in `(a, b)`, on the side of `keep`.
    fn boundary(&self, c: &dyn Fn(f64) -> V3, mut a: f64, mut b: f64, keep_a: bool) -> f64 {
        let ca = self.cat(&c(a));
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if self.cat(&c(m)) == ca {
                a = m;
            } else {
                b = m;
            }
        }
        if keep_a {
            a
        } else {
            b
        }
    }

    fn refine(&self, c: &dyn Fn(f64) -> V3, a: f64, b: f64, depth: u32, out: &mut Vec<(f64, f64)>) {
        let (pa, pb) = (self.at(c, a), self.at(c, b));
        let m = 0.5 * (a + b);
        let vm = c(m);
        if self.cat(&vm) == Cat::Hidden {
            out.push(pb);
            return;
        }
        let pm = self.scene.chart.project(&vm).expect("visible");
        let (dx, dy) = (pb.0 - pa.0, pb.1 - pa.1);
        let len = dx.hypot(dy);
        let dev = if len > 0.0 {
            ((pm.0 - pa.0) * dy - (pm.1 - pa.1) * dx).abs() / len
        } else {
            (pm.0 - pa.0).hypot(pm.1 - pa.1)
        };
        if depth < MAX_DEPTH && dev > self.tol {
            self.refine(c, a, m, depth + 1, out);
            self.refine(c, m, b, depth + 1, out);
        } else {
            out.push(pb);
        }
    }

    /// Visible pieces of the closed projective curve `c` on `[0, π]`.
    fn curve(&self, element: usize, c: &dyn Fn(f64) -> V3) -> Vec<Polyline> {
        let pi = std::f64::consts::PI;
        let ts: Vec<f64> = (0..=GRID).map(|k| pi * k as f64 / GRID as f64).collect();
        let cats: Vec<Cat> = ts.iter().map(|&t| self.cat(&c(t))).collect();
        let mut out: Vec<Polyline> = vec![];
        let mut starts: Vec<f64> = vec![];
        let mut cur: Option<Run> = None;
        for k in 0..GRID {
            let (t0, t1) = (ts[k], ts[k + 1]);
            let (c0, c1) = (cats[k], cats[k + 1]);
            if let (Cat::Shown(s), None) = (c0, &cur) {
                cur = Some((s, vec![self.at(c, t0)], t0));
            }
            if c0 == c1 {
                if let Some((_, pts, _)) = cur.as_mut() {
                    self.refine(c, t0, t1, 0, pts);
                }
                continue;
            }
            if let Some((s, mut pts, t_start)) = cur.take() {
                let tb = self.boundary(c, t0, t1, true);
                self.refine(c, t0, tb, 0, &mut pts);
                out.push(Polyline { element, stroke: s, points: pts, closed: false });
                starts.push(t_start);
            }
            if let Cat::Shown(s) = c1 {
                let tb = self.boundary(c, t0, t1, false);
                let mut pts = vec![self.at(c, tb)];
                self.refine(c, tb, t1, 0, &mut pts);
                cur = Some((s, pts, tb));
            }
        }
        if let Some((s, mut pts, t_start)) = cur.take() {
            // c(π) and c(0) are the same projective point
            if t_start == 0.0 {
                out.push(Polyline { element, stroke: s, points: pts, closed: true });
            } else if starts.first() == Some(&0.0) {
                let head = out.remove(0);
                pts.extend(head.points.into_iter().skip(1));
                out.insert(0, Polyline { element, stroke: s, points: pts, closed: false });
            } else {
                out.push(Polyline { element, stroke: s, points: pts, closed: false });
            }
        }
        out
    }
}

fn line_curve(l: &V3) -> impl Fn(f64) -> V3 {
    let n = l.normalize();
    let seed = if n[0].abs() < 0.6 { V3::x() } else { V3::y() };
    let u = n.cross(&seed).normalize();
    let w = n.cross(&u);
    move |t: f64| u * t.cos() + w * t.sin()
}

/// Sample every element of the scene.
pub fn trace(scene: &Scene) -> Result<Traced> {
    let ctx = scene.chart.context();
    let tracer = Tracer { scene, ctx, tol: 1e-3 * scene.viewport.size() };
    let mut polylines = vec![];
    let mut points = vec![];
    let mut omitted = 0;
    for (i, e) in scene.elements.iter().enumerate() {
        match e {
            Element::Conic { form, .. } => {
                if ctx.is_hyperbolic() && form.proportional(ctx.absolute(), 1e-12) {
                    continue;
                }
                if form.is_degenerate() {
                    let Ok((l, m)) = split_degenerate(&form.cmatrix()) else {
                        omitted += 1;
                        continue;
                    };
                    let real = |v: &linalg::CVec3| HLine::new(*v).to_real();
                    match (real(&l), real(&m)) {
                        (Some(l), Some(m)) => {
                            polylines.extend(tracer.curve(i, &line_curve(&l)));
                            if linalg::parallel(&l, &m) > 1e-9 {
                                polylines.extend(tracer.curve(i, &line_curve(&m)));
                            }
                        }
                        _ => omitted += 1,
                    }
                    continue;
                }
                match ConicParam::new(form) {
                    Some(cp) => polylines.extend(tracer.curve(i, &|t| cp.point(t))),
                    None => omitted += 1,
                }
            }
            Element::Line { line, .. } => match line.to_real() {
                Some(l) => polylines.extend(tracer.curve(i, &line_curve(&l))),
                None => omitted += 1,
            },
            Element::Point { at, .. } => match at.to_real() {
                Some(v) => {
                    if let Some(p) = scene.chart.project(&v).filter(|p| scene.viewport.contains(*p)) {
                        points.push((i, p));
                    }
                }
                None => omitted += 1,
            },
            Element::Note(_) => {}
        }
    }
    Ok(Traced { polylines, points, omitted })
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

fn num(x: f64) -> String {
    let s = format!("{x:.5}");
    if s == "-0.00000" {
        "0.00000".into()
    } else {
        s
    }
}

fn path_data(pl: &Polyline) -> String {
    let mut d = String::new();
    for (k, (x, y)) in pl.points.iter().enumerate() {
        d.push_str(if k == 0 { "M" } else { " L" });
        d.push_str(&format!("{} {}", num(*x), num(-y)));
    }
    if pl.closed {
        d.push_str(" Z");
    }
    d
}

/// SVG document of the scene. Identical scenes give identical bytes.
pub fn render(scene: &Scene) -> Result<String> {
    if !scene.elements.iter().any(|e| !matches!(e, Element::Note(_))) {
        return Err(Error::EmptyScene);
    }
    let traced = trace(scene)?;
    let vp = scene.viewport;
    let size = vp.size();
    let sw = num(0.004 * size);
    let legend_h = 0.06 * size;
    let labels: Vec<(usize, &str)> = scene
        .elements
        .iter()
        .enumerate()
        .filter(|(_, e)| !matches!(e, Element::Note(_)))
        .filter_map(|(i, e)| e.label().map(|l| (i, l)))
        .collect();
    let notes: Vec<&str> =
        scene.elements.iter().filter_map(|e| if let Element::Note(s) = e { Some(s.as_str()) } else { None }).collect();
    let mut legend: Vec<(Option<usize>, String)> = labels.iter().map(|(i, l)| (Some(*i), l.to_string())).collect();
    legend.extend(notes.iter().map(|n| (None, n.to_string())));
    if traced.omitted > 0 {
        let s = if traced.omitted == 1 { "" } else { "s" };
        legend.push((None, format!("{} non-real element{s} omitted", traced.omitted)));
    }
    let height = vp.ymax - vp.ymin + legend_h * legend.len() as f64;
    let mut doc = Document::new()
        .set("viewBox", format!("{} {} {} {}", num(vp.xmin), num(-vp.ymax), num(vp.xmax - vp.xmin), num(height)))
        .set("width", "600")
        .set("height", num(600.0 * height / (vp.xmax - vp.xmin)));
    doc = doc.add(
        Rectangle::new()
            .set("x", num(vp.xmin))
            .set("y", num(-vp.ymax))
            .set("width", num(vp.xmax - vp.xmin))
            .set("height", num(height))
            .set("fill", "white"),
    );
    if scene.chart == Chart::Bck {
        doc = doc.add(
            Circle::new()
                .set("cx", "0")
                .set("cy", "0")
                .set("r", "1")
                .set("fill", "none")
                .set("stroke", "black")
                .set("stroke-width", sw.clone()),
        );
    }
    let mut curves = Group::new().set("fill", "none").set("stroke-width", sw.clone()).set("stroke-linejoin", "round");
    for pl in &traced.polylines {
        let mut p = Path::new().set("d", path_data(pl)).set("stroke", PALETTE[pl.element % PALETTE.len()]);
        if pl.stroke == Stroke::Dashed {
            p = p.set("stroke-dasharray", format!("{} {}", num(0.02 * size), num(0.012 * size)));
        }
        curves = curves.add(p);
    }
    doc = doc.add(curves);
    for (i, (x, y)) in &traced.points {
        doc = doc.add(
            Circle::new()
                .set("cx", num(*x))
                .set("cy", num(-y))
                .set("r", num(0.008 * size))
                .set("fill", PALETTE[i % PALETTE.len()]),
        );
    }
    if !legend.is_empty() {
        let fs = 0.035 * size;
        let mut g = Group::new().set("font-family", "sans-serif").set("font-size", num(fs));
        for (k, (i, text)) in legend.iter().enumerate() {
            let y = -vp.ymin + legend_h * (k as f64 + 0.75);
            let mut t = Text::new(text.clone()).set("x", num(vp.xmin + 0.02 * size)).set("y", num(y));
            t = t.set("fill", i.map_or("black", |i| PALETTE[i % PALETTE.len()]));
            g = g.add(t);
        }
        doc = doc.add(g);
    }
    Ok(doc.to_string() + "\n")
}

fn segment_crossing(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> Option<(f64, f64)> {
    let r = (b.0 - a.0, b.1 - a.1);
    let s = (d.0 - c.0, d.1 - c.1);
    let den = r.0 * s.1 - r.1 * s.0;
    if den.abs() < 1e-300 {
        return None;
    }
    let q = (c.0 - a.0, c.1 - a.1);
    let t = (q.0 * s.1 - q.1 * s.0) / den;
    let u = (q.0 * r.1 - q.1 * r.0) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((a.0 + t * r.0, a.1 + t * r.1))
}

/// Newton on `S₁ = S₂ = 0` in chart coordinates from a sampled crossing.
fn polish(chart: Chart, s1: &SymForm3, s2: &SymForm3, mut p: (f64, f64)) -> Option<V3> {
    let (i, j, _) = chart.axes();
    for _ in 0..30 {
        let v = chart.lift(p);
        let (g1, g2) = (s1.matrix() * v * 2.0, s2.matrix() * v * 2.0);
        let (f1, f2) = (s1.eval_real(&v), s2.eval_real(&v));
        let det = g1[i] * g2[j] - g1[j] * g2[i];
        if det.abs() < 1e-300 {
            return None;
        }
        let du = (f1 * g2[j] - f2 * g1[j]) / det;
        let dw = (g1[i] * f2 - g2[i] * f1) / det;
        p = (p.0 - du, p.1 - dw);
        if du.hypot(dw) < 1e-15 * (1.0 + p.0.hypot(p.1)) {
            break;
        }
    }
    let v = chart.lift(p);
    let r = s1.eval_real(&v).abs() / (s1.frobenius() * v.norm_squared())
        + s2.eval_real(&v).abs() / (s2.frobenius() * v.norm_squared());
    (r < 1e-10).then_some(v)
}

/// Intersection angles in degrees, in the geometry of the chart, at the
/// crossings of the sampled curves of distinct conics.
pub fn crossing_angles(scene: &Scene, traced: &Traced) -> Vec<f64> {
    let ctx = scene.chart.context();
    let dual = ctx.omega_inv();
    let mut out = vec![];
    let conics: Vec<Option<&SymForm3>> =
        scene.elements.iter().map(|e| if let Element::Conic { form, .. } = e { Some(form) } else { None }).collect();
    for (a, pa) in traced.polylines.iter().enumerate() {
        for pb in &traced.polylines[a + 1..] {
            if pa.element == pb.element {
                continue;
            }
            let (Some(s1), Some(s2)) = (conics[pa.element], conics[pb.element]) else { continue };
            for sa in pa.points.windows(2) {
                for sb in pb.points.windows(2) {
                    let Some(p) = segment_crossing(sa[0], sa[1], sb[0], sb[1]) else { continue };
                    let Some(v) = polish(scene.chart, s1, s2, p) else { continue };
                    let (l1, l2) = (s1.matrix() * v, s2.matrix() * v);
                    let ip = |x: &V3, y: &V3| (x.transpose() * dual * y)[0];
                    let c = ip(&l1, &l2) / (ip(&l1, &l1) * ip(&l2, &l2)).sqrt();
                    out.push(c.abs().min(1.0).acos().to_degrees());
                }
            }
        }
    }
    out
}

/// Confocal family members at the given parameters.
pub fn confocal_net(chart: Chart, family: &crate::confocal::ConfocalFamily, lambdas: &[f64]) -> Result<Scene> {
    let mut s = Scene::new(chart);
    for &l in lambdas {
        s.elements.push(Element::Conic { form: family.member(l)?, label: None });
    }
    Ok(s)
}

/// The bundled demo scenes by name.
pub fn demos() -> Vec<(&'static str, Scene)> {
    use crate::confocal::ConfocalFamily;
    use crate::spherical;
    let hyp = GeometryContext::hyperbolic();
    let lbl = |s: &str| Some(s.to_string());
    let mut out = vec![];

    let ellipse = SymForm3::diag(1.0 / 0.64, 1.0 / 0.25, -1.0);
    let mut classes = Scene::new(Chart::Bck)
        .with(Element::Conic { form: ellipse, label: lbl("ellipse a=0.8 b=0.5") })
        .with(Element::Conic { form: SymForm3::diag(1.0, 1.0, -0.25), label: lbl("circle r=0.5") })
        .with(Element::Conic { form: SymForm3::diag(4.0, -1.0, -0.25), label: lbl("convex hyperbola") })
        .with(Element::Conic { form: SymForm3::diag(1.0, 1.0, 1.0), label: lbl("empty conic") });
    if let Ok(pairs) = crate::hyperbolic::foci(&ellipse, &hyp) {
        for f in pairs.iter().flatten().filter(|f| f.point.is_real()) {
            classes.elements.push(Element::Point { at: f.point, label: None });
        }
    }
    out.push(("hyperbolic-conics", classes));

    let (p, q) = (0.8, 0.5);
    if let Ok(fam) = ConfocalFamily::hyperbolic(&SymForm3::diag(1.0 / (p * p), 1.0 / (q * q), -1.0)) {
        let ls = [-2.0, -0.6, 0.0, 0.15, 0.3, 0.4, 0.5, 0.6];
        if let Ok(s) = confocal_net(Chart::Bck, &fam, &ls) {
            out.push(("hyperbolic-confocal", s.with(Element::Note("confocal ellipses and hyperbolas".into()))));
        }
    }

    let (a, b, c) = (1.6, 0.9, 1.0);
    if let Ok(fam) = ConfocalFamily::spherical(a, b, c) {
        let ls = [-0.5, -0.1, 0.3, 0.7, 0.9, 1.3, 1.8, 2.3];
        if let Ok(s) = confocal_net(Chart::GnomonicZ, &fam, &ls) {
            out.push(("spherical-confocal", s.with(Element::Note("confocal spherical conics".into()))));
        }
    }

    for (name, chart) in
        [("sphere-x", Chart::GnomonicX), ("sphere-y", Chart::GnomonicY), ("sphere-z", Chart::GnomonicZ)]
    {
        let mut s =
            Scene::new(chart).with(Element::Conic { form: spherical::canonical_form(a, b, c), label: lbl("conic") });
        if let Ok(f) = spherical::foci_points(a, b, c) {
            for x in f {
                s.elements.push(Element::Point { at: x, label: None });
            }
        }
        if let Ok(ls) = spherical::cyclic_planes(a, b, c) {
            for l in ls {
                s.elements.push(Element::Line { line: l, label: None });
            }
        }
        out.push((name, s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_names_round_trip() {
        for c in Chart::ALL {
            assert_eq!(c.name().parse::<Chart>().unwrap(), c);
        }
    }

    #[test]
    fn project_and_lift() {
        for c in Chart::ALL {
            let p = (0.3, -0.7);
            let q = c.project(&(c.lift(p) * -2.5)).unwrap();
            assert!((q.0 - p.0).abs() < 1e-15 && (q.1 - p.1).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_circle_is_one_closed_loop() {
        let s = Scene::new(Chart::GnomonicZ).with(Element::conic(SymForm3::diag(1.0, 1.0, -1.0)));
        let t = trace(&s).unwrap();
        assert_eq!(t.polylines.len(), 1);
        assert!(t.polylines[0].closed);
        for p in &t.polylines[0].points {
            assert!((p.0.hypot(p.1) - 1.0).abs() < 1e-12);
        }
    }
}
