//! The four standard Deligne-Lusztig surface families.
//!
//! A2 is modelled explicitly as the blow-up of `P^2` at all of its rational
//! points: a rational point is a pair (base point, rational line through it).
//! The other families are handled through their image varieties `Z` in
//! projective space.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{prime_power, Fe, Field, GfError};
use crate::projgeom::{enumerate_projective, enumerate_variety, GeomError, HomogPoly, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("no closed-form point count is known for {0}")]
    UnsupportedFamilyForClosedForm(FamilyTag),
    #[error("{count} points do not split evenly into components of {per} points")]
    NonDivisibleCount { count: u64, per: u64 },
    #[error("q = {0} is not a prime power")]
    InvalidQ(u64),
    #[error("field has {found} elements, expected {expected}")]
    WrongField { expected: u64, found: u64 },
    #[error("unknown surface family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, SurfaceError>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyTag {
    #[serde(rename = "A2")]
    A2,
    #[serde(rename = "2A3")]
    TwistedA3,
    #[serde(rename = "2A4")]
    TwistedA4,
    #[serde(rename = "C2")]
    C2,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::A2 => "A2",
            FamilyTag::TwistedA3 => "2A3",
            FamilyTag::TwistedA4 => "2A4",
            FamilyTag::C2 => "C2",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(FamilyTag::A2),
            "2A3" => Ok(FamilyTag::TwistedA3),
            "2A4" => Ok(FamilyTag::TwistedA4),
            "C2" => Ok(FamilyTag::C2),
            _ => Err(SurfaceError::UnknownFamily(s.to_string())),
        }
    }
}

/// Which divisor of the surface carries the rational points.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Divisor {
    D1,
    D2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFamily {
    tag: FamilyTag,
    q: u64,
}

impl SurfaceFamily {
    pub fn new(tag: FamilyTag, q: u64) -> Result<SurfaceFamily> {
        prime_power(q).ok_or(SurfaceError::InvalidQ(q))?;
        Ok(SurfaceFamily { tag, q })
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn delta(&self) -> u32 {
        match self.tag {
            FamilyTag::A2 | FamilyTag::C2 => 1,
            FamilyTag::TwistedA3 | FamilyTag::TwistedA4 => 2,
        }
    }

    /// `q^delta`, the order of the evaluation field.
    pub fn eval_order(&self) -> u64 {
        self.q.pow(self.delta())
    }

    /// `#P^1(GF(q^delta))`.
    pub fn fiber_points(&self) -> u64 {
        self.eval_order() + 1
    }

    pub fn eval_field(&self) -> Result<Field> {
        Ok(Field::of_order(self.eval_order())?)
    }

    /// Dimension of the ambient projective space of `Z`.
    pub fn ambient_dim(&self) -> usize {
        match self.tag {
            FamilyTag::A2 => 2,
            FamilyTag::TwistedA3 | FamilyTag::C2 => 3,
            FamilyTag::TwistedA4 => 4,
        }
    }

    /// The divisor whose components carry every rational point.
    pub fn point_divisor(&self) -> Divisor {
        match self.tag {
            FamilyTag::TwistedA4 => Divisor::D2,
            _ => Divisor::D1,
        }
    }

    /// The other divisor, used for the `a D_j` twist.
    pub fn twist_divisor(&self) -> Divisor {
        match self.point_divisor() {
            Divisor::D1 => Divisor::D2,
            Divisor::D2 => Divisor::D1,
        }
    }
}

impl fmt::Display for SurfaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(q={})", self.tag, self.q)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountProvenance {
    ClosedForm,
    Derived,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub value: u64,
    pub provenance: CountProvenance,
}

/// `#S(GF(q^delta))` from the closed forms (A2 and 2A4 only).
pub fn closed_form_point_count(fam: &SurfaceFamily) -> Result<u64> {
    let q = fam.q;
    match fam.tag {
        FamilyTag::A2 => Ok((q * q + q + 1) * (q + 1)),
        FamilyTag::TwistedA4 => Ok((q.pow(5) + 1) * (q.pow(3) + 1) * (q * q + 1)),
        tag => Err(SurfaceError::UnsupportedFamilyForClosedForm(tag)),
    }
}

/// `#Z(GF(q^delta)) * (q^delta + 1)`: the count of the blow-up of `Z` at every
/// rational point.
pub fn blowup_point_count(fam: &SurfaceFamily) -> Result<u64> {
    Ok(z_points(fam)?.len() as u64 * fam.fiber_points())
}

/// Closed form where one exists, otherwise the brute-force blow-up count.
pub fn surface_point_count(fam: &SurfaceFamily) -> Result<PointCount> {
    match closed_form_point_count(fam) {
        Ok(value) => Ok(PointCount { value, provenance: CountProvenance::ClosedForm }),
        Err(SurfaceError::UnsupportedFamilyForClosedForm(_)) => Ok(PointCount {
            value: blowup_point_count(fam)?,
            provenance: CountProvenance::Derived,
        }),
        Err(e) => Err(e),
    }
}

/// The defining equations of `Z` over `GF(q^delta)`.
pub fn z_equations(fam: &SurfaceFamily) -> Result<Vec<HomogPoly>> {
    let field = fam.eval_field()?;
    let q = fam.q as u32;
    let power_sum = |nvars: usize, e: u32| {
        HomogPoly::from_terms(
            &field,
            nvars,
            e,
            (0..nvars).map(|i| {
                let mut v = vec![0; nvars];
                v[i] = e;
                (v, Fe::ONE)
            }),
        )
    };
    Ok(match fam.tag {
        FamilyTag::A2 => Vec::new(),
        FamilyTag::TwistedA3 => vec![power_sum(4, q + 1)?],
        FamilyTag::C2 => {
            // X0^q X3 - X0 X3^q + X1 X2^q - X1^q X2
            let minus = field.neg(Fe::ONE);
            vec![HomogPoly::from_terms(
                &field,
                4,
                q + 1,
                [
                    (vec![q, 0, 0, 1], Fe::ONE),
                    (vec![1, 0, 0, q], minus),
                    (vec![0, 1, q, 0], Fe::ONE),
                    (vec![0, q, 1, 0], minus),
                ],
            )?]
        }
        FamilyTag::TwistedA4 => vec![power_sum(5, q + 1)?, power_sum(5, q.pow(3) + 1)?],
    })
}

/// Rational points of `Z` over `GF(q^delta)`.
pub fn z_points(fam: &SurfaceFamily) -> Result<Vec<ProjPoint>> {
    let field = fam.eval_field()?;
    Ok(enumerate_variety(&z_equations(fam)?, fam.ambient_dim(), &field)?)
}

/// A rational point of the A2 surface: a point of `P^2` and a rational line
/// through it (a direction on the exceptional curve over that point).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfacePointA2 {
    /// Index of `base` in the canonical order of `P^2(GF(q))`.
    pub base_index: usize,
    pub base: ProjPoint,
    /// Dual coordinates of the line.
    pub line: ProjPoint,
}

impl SurfacePointA2 {
    pub fn label(&self, field: &Field) -> String {
        format!("{};{}", self.base.to_text(field), self.line.to_text(field))
    }
}

/// Lines of `P^2` through `p`, in canonical order.
pub fn lines_through(p: &ProjPoint, field: &Field) -> Result<Vec<ProjPoint>> {
    Ok(enumerate_projective(2, field)?
        .into_iter()
        .filter(|l| l.dot(field, p.coords()).is_zero())
        .collect())
}

/// All rational points of the A2 surface: base points in canonical order, then
/// lines in canonical order.
pub fn a2_points(q: u64, field: &Field) -> Result<Vec<SurfacePointA2>> {
    if field.q() as u64 != q {
        return Err(SurfaceError::WrongField { expected: q, found: field.q() as u64 });
    }
    let planes = enumerate_projective(2, field)?;
    let mut out = Vec::with_capacity(planes.len() * (q as usize + 1));
    for (base_index, base) in planes.iter().enumerate() {
        for line in planes.iter().filter(|l| l.dot(field, base.coords()).is_zero()) {
            out.push(SurfacePointA2 { base_index, base: base.clone(), line: line.clone() });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorData {
    pub b_component_count: u64,
    pub points_per_component: u64,
    pub d1_dot_d2: Option<i64>,
    pub carrier: Divisor,
    pub count_provenance: CountProvenance,
}

pub fn divisor_data(fam: &SurfaceFamily) -> Result<DivisorData> {
    let count = surface_point_count(fam)?;
    divisor_data_from_count(fam, count)
}

pub fn divisor_data_from_count(fam: &SurfaceFamily, count: PointCount) -> Result<DivisorData> {
    let per = fam.fiber_points();
    if !count.value.is_multiple_of(per) {
        return Err(SurfaceError::NonDivisibleCount { count: count.value, per });
    }
    Ok(DivisorData {
        b_component_count: count.value / per,
        points_per_component: per,
        d1_dot_d2: None,
        carrier: fam.point_divisor(),
        count_provenance: count.provenance,
    })
}
