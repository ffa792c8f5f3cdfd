//! Pencils `λP + μQ` of point or line conics.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat3, C64};
use crate::poly;
use crate::projective::{conic_intersections, pencil_cubic, split_degenerate, ContactPattern, HLine, HPoint, SymForm3};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilSpace {
    PointConics,
    LineConics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pencil {
    pub p: SymForm3,
    pub q: SymForm3,
    pub space: PencilSpace,
}

impl Pencil {
    pub fn new(p: SymForm3, q: SymForm3, space: PencilSpace) -> Result<Self> {
        if p.proportional(&q, 1e-12) {
            return Err(Error::ProportionalConics);
        }
        Ok(Pencil { p, q, space })
    }

    pub fn points(p: SymForm3, q: SymForm3) -> Result<Self> {
        Self::new(p, q, PencilSpace::PointConics)
    }

    pub fn lines(p: SymForm3, q: SymForm3) -> Result<Self> {
        Self::new(p, q, PencilSpace::LineConics)
    }

    pub fn member(&self, lambda: f64, mu: f64) -> SymForm3 {
        self.p.combine(lambda, &self.q, mu)
    }
}

/// The factors of a degenerate member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Split {
    /// A degenerate point conic is a pair of lines.
    Lines(HLine, HLine),
    /// A degenerate line conic is a pair of points.
    Points(HPoint, HPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateMember {
    pub param: (C64, C64),
    /// `λP + μQ`; complex for non-real roots.
    pub form: CMat3,
    pub rank: usize,
    pub split: Split,
    pub multiplicity: usize,
}

impl DegenerateMember {
    pub fn is_real(&self) -> bool {
        poly::BinaryRoot { lambda: self.param.0, mu: self.param.1, multiplicity: 1 }.is_real()
    }

    /// The member as a real form, when the root is real.
    pub fn real_form(&self) -> Option<SymForm3> {
        let r = poly::BinaryRoot { lambda: self.param.0, mu: self.param.1, multiplicity: 1 }.real()?;
        let _ = r;
        let k = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .max_by(|a, b| self.form[*a].norm().total_cmp(&self.form[*b].norm()))
            .unwrap();
        let ph = self.form[k];
        Some(SymForm3::from_matrix(&self.form.map(|z| (z / ph).re)))
    }
}

/// All roots of `det(λP + μQ) = 0` with their members and factorizations.
pub fn degenerate_members(pen: &Pencil) -> Result<Vec<DegenerateMember>> {
    let p = pen.p.normalize()?;
    let q = pen.q.normalize()?;
    let roots = poly::binary_cubic_roots(pencil_cubic(&p, &q)).ok_or(Error::AllDegenerate)?;
    let mut out = Vec::with_capacity(3);
    for r in roots {
        let form = p.cmatrix() * r.lambda + q.cmatrix() * r.mu;
        let rank = linalg::rank_with(&form, tol::MEMBER_RANK).min(2);
        let (a, b) = split_degenerate(&form)?;
        let split = match pen.space {
            PencilSpace::PointConics => Split::Lines(HLine::new(a), HLine::new(b)),
            PencilSpace::LineConics => Split::Points(HPoint::new(a), HPoint::new(b)),
        };
        out.push(DegenerateMember { param: (r.lambda, r.mu), form, rank, split, multiplicity: r.multiplicity });
    }
    Ok(out)
}

/// Pencil types along the multiplicity lattice of the base locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PencilType {
    /// 1+1+1+1
    FourDistinctPoints,
    /// 2+1+1
    SimpleContact,
    /// 2+2
    DoubleContact,
    /// 3+1
    Osculating,
    /// 4
    Hyperosculating,
}

impl From<ContactPattern> for PencilType {
    fn from(c: ContactPattern) -> Self {
        match c {
            ContactPattern::Simple => PencilType::FourDistinctPoints,
            ContactPattern::Tangent => PencilType::SimpleContact,
            ContactPattern::DoubleContact => PencilType::DoubleContact,
            ContactPattern::Osculating => PencilType::Osculating,
            ContactPattern::Hyperosculating => PencilType::Hyperosculating,
        }
    }
}

/// Type of the pencil, from the base points (or base lines for a line pencil).
pub fn pencil_type(pen: &Pencil) -> Result<PencilType> {
    Ok(conic_intersections(&pen.p, &pen.q)?.pattern.into())
}

/// Dual of the member `λP + μQ` of a pencil of line conics.
pub fn dual_pencil_member(pen: &Pencil, lambda: f64, mu: f64) -> Result<SymForm3> {
    let m = pen.member(lambda, mu);
    m.dual().map_err(|_| Error::DegenerateMemberAt(format!("{lambda}:{mu}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_and_sphere() {
        let pen = Pencil::points(SymForm3::diag(1.0, 1.0, -1.0), SymForm3::identity()).unwrap();
        let ms = degenerate_members(&pen).unwrap();
        assert_eq!(ms.iter().map(|m| m.multiplicity).sum::<usize>(), 3);
        let dbl = ms.iter().find(|m| m.multiplicity == 2).unwrap();
        assert_eq!(dbl.rank, 1);
        // z² up to scale
        assert!(dbl.real_form().unwrap().proportional(&SymForm3::diag(0.0, 0.0, 1.0), 1e-12));
        let sgl = ms.iter().find(|m| m.multiplicity == 1).unwrap();
        assert!(sgl.real_form().unwrap().proportional(&SymForm3::diag(1.0, 1.0, 0.0), 1e-12));
    }

    #[test]
    fn third_diagonal_pair() {
        // base points (±1, ±1); pairs x² − z², y² − z² span; third pair is x² − y²
        let p = SymForm3::diag(1.0, 0.0, -1.0);
        let q = SymForm3::diag(0.0, 1.0, -1.0);
        let ms = degenerate_members(&Pencil::points(p, q).unwrap()).unwrap();
        assert_eq!(ms.len(), 3);
        assert!(ms.iter().any(|m| m.real_form().unwrap().proportional(&SymForm3::diag(1.0, -1.0, 0.0), 1e-12)));
    }

    #[test]
    fn concentric_circles_touch_doubly() {
        let pen = Pencil::points(SymForm3::diag(1.0, 1.0, -0.25), SymForm3::diag(1.0, 1.0, -0.5)).unwrap();
        assert_eq!(pencil_type(&pen).unwrap(), PencilType::DoubleContact);
    }
}
