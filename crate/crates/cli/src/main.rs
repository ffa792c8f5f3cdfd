use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::Vector3;

use ckconic::confocal::{ivory_check, ConfocalFamily};
use ckconic::error::Error;
use ckconic::harness::{self, TheoremId, VerificationReport, VerifyConfig};
use ckconic::hyperbolic::{self, FocalLine, Focus};
use ckconic::input::{parse_spec, print_spec, ConicSpec};
use ckconic::projective::{GeometryKind, HLine, HPoint, Region};
use ckconic::render::{self, Chart, Scene};
use ckconic::spherical;

/// Conics in the hyperbolic plane and on the sphere.
#[derive(Parser)]
#[command(name = "ckconic", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Io {
    /// Conic records; standard input when absent.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Class and focal data of every record.
    Classify {
        #[command(flatten)]
        io: Io,
    },
    /// Foci with their regions.
    Foci {
        #[command(flatten)]
        io: Io,
    },
    /// Members of the confocal family of the first record, as records.
    Confocal {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<f64>,
    },
    /// Ivory check of the quadrilateral `λ₁, λ₂, μ₁, μ₂` in the family of the first record.
    Ivory {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1.., required = true)]
        lambda: Vec<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Randomized check of a theorem.
    Verify {
        /// Theorem identifier; omit with --list.
        theorem: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Off-family perturbation of the sampled conics (negative control).
        #[arg(long, default_value_t = 0.0)]
        perturbation: f64,
        /// Print the registered theorems.
        #[arg(long)]
        list: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// SVG figure of the records or of a bundled demo scene.
    Render {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "bck", value_parser = ["bck", "gnomonic-x", "gnomonic-y", "gnomonic-z"])]
        chart: String,
        /// Bundled scene instead of --input; `list` prints the names.
        #[arg(long)]
        demo: Option<String>,
        /// Clip the disk chart to the hyperbolic plane.
        #[arg(long)]
        clip: bool,
    },
}

enum Fail {
    Usage(String),
    Domain(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e.to_string())
    }
}

type Out = Result<(String, bool), Fail>;

fn read_specs(io: &Io) -> Result<Vec<ConicSpec>, Fail> {
    let text = match &io.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?,
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| Fail::Usage(e.to_string()))?,
    };
    Ok(parse_spec(&text)?)
}

fn num(x: f64) -> String {
    let s = format!("{x:.8}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn vec3(v: &Vector3<f64>) -> String {
    format!("{},{},{}", num(v[0]), num(v[1]), num(v[2]))
}

/// Real points are scaled to `z = 1` when finite in the chart, else to unit length.
fn point_text(p: &HPoint) -> String {
    match p.to_real() {
        None => "complex".into(),
        Some(v) if v[2].abs() > 1e-12 * v.norm() => vec3(&(v / v[2])),
        Some(v) => vec3(&ckconic::linalg::fix_sign(v.normalize())),
    }
}

fn line_text(l: &HLine) -> String {
    match l.to_real() {
        None => "complex".into(),
        Some(v) => vec3(&ckconic::linalg::fix_sign(v.normalize())),
    }
}

fn region_text(r: Option<Region>) -> String {
    r.map_or("complex".into(), |r| r.to_string())
}

fn header(out: &mut String, i: usize, s: &ConicSpec) {
    let kind = match s.absolute {
        GeometryKind::Spherical => "spherical",
        GeometryKind::Hyperbolic => "hyperbolic",
    };
    let _ = write!(out, "record={} absolute={kind}", i + 1);
    if let Some(l) = &s.label {
        let _ = write!(out, " label=\"{l}\"");
    }
}

fn focus_lines(out: &mut String, tag: &str, pairs: &[[Focus; 2]]) {
    for (k, pair) in pairs.iter().enumerate() {
        for (j, f) in pair.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {tag} pair={} index={} region={} point={}",
                k + 1,
                j + 1,
                region_text(f.region),
                point_text(&f.point)
            );
        }
    }
}

fn focal_line_lines(out: &mut String, tag: &str, pairs: &[[FocalLine; 2]]) {
    for (k, pair) in pairs.iter().enumerate() {
        for (j, f) in pair.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {tag} pair={} index={} region={} line={}",
                k + 1,
                j + 1,
                region_text(f.region),
                line_text(&f.line)
            );
        }
    }
}

fn spherical_dump(out: &mut String, s: &ConicSpec, full: bool) -> Result<(), Fail> {
    let k = spherical::canonicalize_spherical(&s.form)?;
    let (a, b, c) = (k.a, k.b, k.c);
    let back = |v: &Vector3<f64>| k.from_canonical(v);
    let flags = spherical::special_flags(a, b, c);
    if full {
        let _ = writeln!(
            out,
            "  class=SphericalConic a={} b={} c={} right_angle_locus={} thales_envelope={} parabola={}",
            num(a),
            num(b),
            num(c),
            flags.right_angle_locus,
            flags.thales_envelope,
            flags.spherical_parabola
        );
    }
    for (j, f) in spherical::foci(a, b, c)?.iter().enumerate() {
        let _ = writeln!(out, "  focus index={} region=sphere point={}", j + 1, vec3(&back(f)));
    }
    if full {
        for (j, l) in spherical::cyclic_planes(a, b, c)?.iter().enumerate() {
            let v = back(&l.to_real().expect("real plane"));
            let _ = writeln!(out, "  focal_line index={} region=sphere line={}", j + 1, vec3(&v.normalize()));
        }
        let (dirs, dirx) = spherical::directors_directrices(a, b, c)?;
        for (j, d) in dirs.iter().enumerate() {
            let _ = writeln!(out, "  director index={} point={}", j + 1, vec3(&back(d).normalize()));
        }
        for (j, d) in dirx.iter().enumerate() {
            let v = back(&d.to_real().expect("real plane"));
            let _ = writeln!(out, "  directrix index={} line={}", j + 1, vec3(&v.normalize()));
        }
    }
    Ok(())
}

fn classify(io: &Io, full: bool) -> Out {
    let specs = read_specs(io)?;
    let mut out = String::new();
    for (i, s) in specs.iter().enumerate() {
        header(&mut out, i, s);
        out.push('\n');
        match s.absolute {
            GeometryKind::Spherical => spherical_dump(&mut out, s, full)?,
            GeometryKind::Hyperbolic => {
                let ctx = s.context();
                let cls = hyperbolic::classify(&s.form, &ctx)?;
                if full {
                    let _ = writeln!(out, "  class={}", cls.class.name());
                }
                if cls.class == hyperbolic::HypClass::Degenerate {
                    continue;
                }
                let fd = hyperbolic::focal_data(&s.form, &ctx)?;
                focus_lines(&mut out, "focus", &fd.focus_pairs);
                if full {
                    focal_line_lines(&mut out, "focal_line", &fd.focal_line_pairs);
                    for (j, c) in fd.centers.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  center index={} region={} point={}",
                            j + 1,
                            region_text(c.region),
                            point_text(&c.point)
                        );
                    }
                    for (j, l) in fd.axes.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  axis index={} region={} line={}",
                            j + 1,
                            region_text(l.region),
                            line_text(&l.line)
                        );
                    }
                    for (j, d) in fd.directors.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  director index={} region={} point={}",
                            j + 1,
                            region_text(d.region),
                            point_text(&d.point)
                        );
                    }
                    for (j, d) in fd.directrices.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  directrix index={} region={} line={}",
                            j + 1,
                            region_text(d.region),
                            line_text(&d.line)
                        );
                    }
                }
            }
        }
    }
    Ok((out, true))
}

fn first(io: &Io) -> Result<ConicSpec, Fail> {
    read_specs(io)?.into_iter().next().ok_or_else(|| Fail::Domain("input has no records".into()))
}

fn confocal(io: &Io, lambda: &[f64]) -> Out {
    let base = first(io)?;
    let fam = ConfocalFamily::new(&base.form, &base.context())?;
    let mut specs = vec![];
    for &l in lambda {
        let m = fam.member(l)?;
        specs.push(ConicSpec { absolute: base.absolute, form: m, label: Some(format!("lambda={l}")) });
    }
    Ok((print_spec(&specs), true))
}

fn ivory(io: &Io, lambda: &[f64], tolerance: Option<f64>) -> Out {
    let [l1, l2, m1, m2] = lambda else {
        return Err(Fail::Usage("--lambda needs four values l1,l2,m1,m2".into()));
    };
    let base = first(io)?;
    let fam = ConfocalFamily::new(&base.form, &base.context())?;
    let id = match base.absolute {
        GeometryKind::Spherical => TheoremId::IVORY_SPH,
        GeometryKind::Hyperbolic => TheoremId::IVORY_HYP,
    };
    let r = ivory_check(&fam, [*l1, *l2], [*m1, *m2])?;
    let note = format!("d12={} d21={}", num(r.d12), num(r.d21));
    let rep = VerificationReport::single(id, r.delta, note, tolerance.unwrap_or(id.tolerance()));
    Ok((rep.to_text(), rep.passed()))
}

fn verify(
    theorem: Option<&str>,
    trials: usize,
    seed: u64,
    tolerance: Option<f64>,
    perturbation: f64,
    list: bool,
) -> Out {
    if list {
        let mut out = String::new();
        for (id, cite, tol) in harness::list_theorems() {
            let _ = writeln!(out, "{id} tolerance={tol:e} {cite}");
        }
        return Ok((out, true));
    }
    let Some(name) = theorem else {
        return Err(Fail::Usage("verify needs a theorem identifier or --list".into()));
    };
    let id: TheoremId = name.parse().map_err(|_| Fail::Usage(format!("unknown theorem {name}; see --list")))?;
    if trials == 0 {
        return Err(Fail::Usage("--trials must be at least 1".into()));
    }
    let mut config = VerifyConfig::new(id, trials, seed);
    config.perturbation = perturbation;
    if let Some(t) = tolerance {
        config.tolerance = t;
    }
    let rep = harness::verify_with(id, &config)?;
    Ok((rep.to_text(), rep.passed()))
}

fn render_cmd(io: &Io, chart: &str, demo: Option<&str>, clip: bool) -> Out {
    let mut scene = match demo {
        Some("list") => {
            let names: Vec<&str> = render::demos().iter().map(|d| d.0).collect();
            return Ok((names.join("\n") + "\n", true));
        }
        Some(name) => render::demos()
            .into_iter()
            .find(|d| d.0 == name)
            .map(|d| d.1)
            .ok_or_else(|| Fail::Usage(format!("unknown demo {name}")))?,
        None => {
            let chart: Chart = chart.parse()?;
            Scene::from_specs(chart, &read_specs(io)?)?
        }
    };
    scene.de_sitter = !clip;
    Ok((render::render(&scene)?, true))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (res, out) = match &cli.cmd {
        Cmd::Classify { io } => (classify(io, true), &io.out),
        Cmd::Foci { io } => (classify(io, false), &io.out),
        Cmd::Confocal { io, lambda } => (confocal(io, lambda), &io.out),
        Cmd::Ivory { io, lambda, tolerance } => (ivory(io, lambda, *tolerance), &io.out),
        Cmd::Verify { theorem, trials, seed, tolerance, perturbation, list, out } => {
            (verify(theorem.as_deref(), *trials, *seed, *tolerance, *perturbation, *list), out)
        }
        Cmd::Render { io, chart, demo, clip } => (render_cmd(io, chart, demo.as_deref(), *clip), &io.out),
    };
    let res = res.and_then(|(text, ok)| emit(out, &text).map(|_| ok));
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
