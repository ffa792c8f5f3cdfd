use ckconic::linalg::singular_values;
use ckconic::pencil::{degenerate_members, dual_pencil_member, pencil_type, Pencil, Split};
use ckconic::sample::random_form;
use ckconic::{conic_intersections, line_conic, on_conic_residual, HPoint, SymForm3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn members_are_singular() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let pen = Pencil::points(random_form(&mut rng), random_form(&mut rng)).unwrap();
        let ms = degenerate_members(&pen).unwrap();
        assert_eq!(ms.iter().map(|m| m.multiplicity).sum::<usize>(), 3);
        for m in &ms {
            let s = singular_values(&m.form);
            assert!(s[2] / s[0] <= 1e-8, "σ3/σ1 = {}", s[2] / s[0]);
        }
    }
}

#[test]
fn split_lines_carry_the_base_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let p = random_form(&mut rng);
        let q = random_form(&mut rng);
        let pen = Pencil::points(p, q).unwrap();
        let (pn, qn) = (p.normalize().unwrap(), q.normalize().unwrap());
        let base = conic_intersections(&p, &q).unwrap();
        for m in degenerate_members(&pen).unwrap() {
            if m.rank != 2 {
                continue;
            }
            let Split::Lines(a, b) = m.split else { unreachable!() };
            for l in [a, b] {
                for x in line_conic(&l.coeffs, &pn.cmatrix()) {
                    let x = HPoint::new(x);
                    assert!(on_conic_residual(&qn, &x) < 1e-8);
                    assert!(base.points.iter().any(|(b, _)| b.distance(&x) < 1e-6));
                }
            }
        }
    }
}

#[test]
fn type_is_symmetric_and_scale_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let p = random_form(&mut rng);
        let q = random_form(&mut rng);
        let t = pencil_type(&Pencil::points(p, q).unwrap()).unwrap();
        assert_eq!(t, pencil_type(&Pencil::points(q, p).unwrap()).unwrap());
        assert_eq!(t, pencil_type(&Pencil::points(p.scale(-3.0), q.scale(0.2)).unwrap()).unwrap());
    }
}

#[test]
fn confocal_dual_pencil_matches_closed_form() {
    let (a, b, c) = (2.0f64, 1.0f64, 0.7f64);
    let sd = SymForm3::diag(a * a, b * b, -c * c);
    let pen = Pencil::lines(sd, SymForm3::identity()).unwrap();
    for lam in [-0.3, 0.4, 2.0] {
        let m = dual_pencil_member(&pen, 1.0, -lam).unwrap();
        let want = SymForm3::diag(1.0 / (a * a - lam), 1.0 / (b * b - lam), -1.0 / (c * c + lam));
        assert!(m.proportional(&want, 1e-12));
    }
    assert!(dual_pencil_member(&pen, 1.0, -b * b).is_err());
    assert!(dual_pencil_member(&pen, 0.0, 1.0).unwrap().proportional(&SymForm3::identity(), 1e-14));
}
