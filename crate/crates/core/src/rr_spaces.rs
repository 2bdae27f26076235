//! Section spaces `L(nH - sum m_j B_j)` on the A2 surface.
//!
//! A section is a plane form of degree `n` vanishing to order `m_j` at the
//! `j`-th rational point of `P^2`. Its value at a surface point `(P, L)` is the
//! order-`m_j` Taylor coefficient of the form along the line `L`, taken through
//! the fixed parametrization `P + tQ` where `Q` is the first point of `L` (in
//! canonical order) other than `P`.

use thiserror::Error;

use crate::dl_surfaces::SurfacePointA2;
use crate::gf::{Fe, Field, GfError};
use crate::linalg::Matrix;
use crate::projgeom::{enumerate_projective, monomial_basis, GeomError, HomogPoly, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RrError {
    #[error("multiplicity vector has {found} entries, expected {expected}")]
    IndexOutOfRange { expected: usize, found: usize },
    #[error("field has {found} elements, expected {expected}")]
    WrongField { expected: u64, found: u64 },
    #[error("section has a nonzero Taylor coefficient of order {order} below the required {required}")]
    InsufficientVanishing { order: u32, required: u32 },
    #[error("sections must be plane forms (3 variables), got {0}")]
    NotPlanar(usize),
    #[error("line does not pass through the base point")]
    NotIncident,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, RrError>;

/// Number of rational points of `P^2(GF(q))`.
pub fn plane_point_count(q: u64) -> usize {
    (q * q + q + 1) as usize
}

/// Divisor data `(n; m_1, ..., m_{q^2+q+1})`, multiplicities indexed by the
/// canonical order of `P^2(GF(q))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineBundleA2 {
    pub degree: u32,
    pub mult: Vec<u32>,
}

impl LineBundleA2 {
    pub fn new(q: u64, degree: u32, mult: Vec<u32>) -> Result<LineBundleA2> {
        let expected = plane_point_count(q);
        if mult.len() != expected {
            return Err(RrError::IndexOutOfRange { expected, found: mult.len() });
        }
        Ok(LineBundleA2 { degree, mult })
    }

    /// Multiplicities for the first points in canonical order, zero elsewhere.
    pub fn with_leading(q: u64, degree: u32, leading: &[u32]) -> Result<LineBundleA2> {
        let expected = plane_point_count(q);
        if leading.len() > expected {
            return Err(RrError::IndexOutOfRange { expected, found: leading.len() });
        }
        let mut mult = leading.to_vec();
        mult.resize(expected, 0);
        Ok(LineBundleA2 { degree, mult })
    }

    /// Multiplicities placed at explicit point indices.
    pub fn at_points(q: u64, degree: u32, points: &[usize], mults: &[u32]) -> Result<LineBundleA2> {
        let expected = plane_point_count(q);
        let mut mult = vec![0; expected];
        for (&idx, &m) in points.iter().zip(mults) {
            *mult.get_mut(idx).ok_or(RrError::IndexOutOfRange { expected, found: idx + 1 })? = m;
        }
        Ok(LineBundleA2 { degree, mult })
    }

    pub fn q_from_len(&self) -> Option<u64> {
        (1..=256u64).find(|&q| plane_point_count(q) == self.mult.len())
    }

    /// `i1 * self + i2 * other`.
    pub fn combine(&self, i1: u32, other: &LineBundleA2, i2: u32) -> LineBundleA2 {
        LineBundleA2 {
            degree: i1 * self.degree + i2 * other.degree,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| i1 * a + i2 * b).collect(),
        }
    }
}

fn check_field(bundle: &LineBundleA2, field: &Field) -> Result<()> {
    let q = field.q() as u64;
    let expected = plane_point_count(q);
    if bundle.mult.len() != expected {
        return Err(RrError::IndexOutOfRange { expected, found: bundle.mult.len() });
    }
    Ok(())
}

/// `C(n, k) mod p` by Lucas' theorem.
fn binomial_mod(n: u32, k: u32, field: &Field) -> Fe {
    let p = field.p();
    let (mut n, mut k) = (n, k);
    let mut acc: u64 = 1;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return Fe::ZERO;
        }
        let mut c: u64 = 1;
        for i in 0..ki.min(ni - ki) {
            c = c * (ni - i) as u64 / (i + 1) as u64;
        }
        acc = acc * (c % p as u64) % p as u64;
        n /= p;
        k /= p;
    }
    Fe(acc as u32)
}

/// One row per Taylor coefficient of order `< m_j` at each constrained point,
/// columns indexed by [`monomial_basis`]`(3, n)`.
///
/// At `P_j` (pivot coordinate `k0`) the chart is `X = P_j + y1 e_{k1} + y2 e_{k2}`
/// with `k1 < k2` the other two coordinates; rows run over `(a, b)` with
/// `a + b < m_j`, grouped by order, `a` descending.
pub fn vanishing_matrix(bundle: &LineBundleA2, field: &Field) -> Result<Matrix> {
    check_field(bundle, field)?;
    let points = enumerate_projective(2, field)?;
    let monos = monomial_basis(3, bundle.degree);
    let mut rows = Vec::new();
    for (j, &m) in bundle.mult.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let p = points[j].coords();
        let pivot = p.iter().position(|c| !c.is_zero()).expect("normalized point");
        let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
        let (k1, k2) = (others[0], others[1]);
        for order in 0..m {
            for a in (0..=order).rev() {
                let b = order - a;
                let row = monos
                    .iter()
                    .map(|e| {
                        let c1 = field.mul(
                            binomial_mod(e[k1], a, field),
                            if a <= e[k1] { field.pow(p[k1], (e[k1] - a) as u64) } else { Fe::ZERO },
                        );
                        let c2 = field.mul(
                            binomial_mod(e[k2], b, field),
                            if b <= e[k2] { field.pow(p[k2], (e[k2] - b) as u64) } else { Fe::ZERO },
                        );
                        field.mul(field.pow(p[pivot], e[pivot] as u64), field.mul(c1, c2))
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    Ok(Matrix::from_rows(field, monos.len(), rows))
}

/// A basis of the section space, reduced echelon in the monomial order.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    pub bundle: LineBundleA2,
    pub polys: Vec<HomogPoly>,
}

impl SectionBasis {
    pub fn dim(&self) -> usize {
        self.polys.len()
    }
}

pub fn section_basis(bundle: &LineBundleA2, field: &Field) -> Result<SectionBasis> {
    let kernel = vanishing_matrix(bundle, field)?.kernel();
    let polys = kernel
        .row_iter()
        .map(|row| HomogPoly::from_dense(field, 3, bundle.degree, row))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SectionBasis { bundle: bundle.clone(), polys })
}

/// `(n(n+3) - sum m_j(m_j+1)) / 2 + 1`. Only a dimension when the bundle is
/// excellent; see [`excellence_checks`].
pub fn h0_formula(bundle: &LineBundleA2) -> i64 {
    let n = bundle.degree as i64;
    let s: i64 = bundle.mult.iter().map(|&m| m as i64 * (m as i64 + 1)).sum();
    (n * (n + 3) - s) / 2 + 1
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub detail: String,
    pub passed: bool,
}

/// The four numerical conditions under which the h0 formula is guaranteed.
///
/// `labels` lists point indices in the order the conditions number them
/// (`m_1` is the multiplicity at `labels[0]`, ...). Indices missing from it
/// follow in canonical order.
pub fn excellence_checks(bundle: &LineBundleA2, q: u64, labels: &[usize]) -> Vec<Condition> {
    let order = full_label_order(labels, bundle.mult.len());
    let m: Vec<i64> = order.iter().map(|&j| bundle.mult[j] as i64).collect();
    let n = bundle.degree as i64;
    let top3: i64 = m.iter().take(3).sum();
    let total: i64 = m.iter().sum();
    let bound = 3 * (q as i64 - 1);
    let sorted_at = m.windows(2).position(|w| w[0] < w[1]);
    vec![
        Condition {
            name: "degree-cap",
            detail: format!("{n} <= {bound}"),
            passed: n <= bound,
        },
        Condition {
            name: "three-largest",
            detail: format!("{n} >= {top3}"),
            passed: n >= top3,
        },
        Condition {
            name: "non-increasing",
            detail: match sorted_at {
                None => "multiplicities non-increasing".into(),
                Some(i) => format!("m_{} = {} < m_{} = {}", i + 1, m[i], i + 2, m[i + 1]),
            },
            passed: sorted_at.is_none(),
        },
        Condition {
            name: "anticanonical",
            detail: format!("{} > {total}", 3 * n),
            passed: 3 * n > total,
        },
    ]
}

pub(crate) fn full_label_order(labels: &[usize], len: usize) -> Vec<usize> {
    let mut order: Vec<usize> = labels.iter().copied().filter(|&i| i < len).collect();
    order.extend((0..len).filter(|i| !labels.contains(i)));
    order
}

/// Coefficients of `s(base + t dir)` up to `t^order`.
fn line_expansion(s: &HomogPoly, base: &[Fe], dir: &[Fe], order: u32) -> Result<Vec<Fe>> {
    if base.len() != s.nvars() || dir.len() != s.nvars() {
        return Err(GeomError::ArityMismatch { expected: s.nvars(), found: base.len() }.into());
    }
    let field = s.field();
    let len = order as usize + 1;
    let mut total = vec![Fe::ZERO; len];
    for (e, c) in s.terms() {
        let mut acc = vec![Fe::ZERO; len];
        acc[0] = c;
        for ((&b, &d), &ei) in base.iter().zip(dir).zip(e) {
            if ei == 0 {
                continue;
            }
            let factor: Vec<Fe> = (0..len as u32)
                .map(|k| {
                    if k > ei {
                        Fe::ZERO
                    } else {
                        field.mul(
                            binomial_mod(ei, k, field),
                            field.mul(field.pow(b, (ei - k) as u64), field.pow(d, k as u64)),
                        )
                    }
                })
                .collect();
            let mut next = vec![Fe::ZERO; len];
            for (i, &x) in acc.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in factor.iter().take(len - i).enumerate() {
                    next[i + j] = field.add(next[i + j], field.mul(x, y));
                }
            }
            acc = next;
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t = field.add(*t, a);
        }
    }
    Ok(total)
}

/// Coefficient of `t^order` in `s(base + t dir)`, after checking that all lower
/// coefficients vanish.
pub fn taylor_coefficient(s: &HomogPoly, base: &[Fe], dir: &[Fe], order: u32) -> Result<Fe> {
    let coeffs = line_expansion(s, base, dir, order)?;
    if let Some(k) = coeffs[..order as usize].iter().position(|c| !c.is_zero()) {
        return Err(RrError::InsufficientVanishing { order: k as u32, required: order });
    }
    Ok(coeffs[order as usize])
}

/// First point of `line` (canonical order) other than `base`.
pub fn second_point(base: &ProjPoint, line: &ProjPoint, field: &Field) -> Result<ProjPoint> {
    if !line.dot(field, base.coords()).is_zero() {
        return Err(RrError::NotIncident);
    }
    Ok(enumerate_projective(2, field)?
        .into_iter()
        .find(|p| p != base && line.dot(field, p.coords()).is_zero())
        .expect("a projective line has at least three points"))
}

/// Value of the section `s` at a surface point whose base carries multiplicity `mult`.
pub fn eval_section(s: &HomogPoly, pt: &SurfacePointA2, mult: u32) -> Result<Fe> {
    if s.nvars() != 3 {
        return Err(RrError::NotPlanar(s.nvars()));
    }
    if mult == 0 {
        return Ok(s.eval(&pt.base)?);
    }
    let q = second_point(&pt.base, &pt.line, s.field())?;
    taylor_coefficient(s, pt.base.coords(), q.coords(), mult)
}

/// Same as [`eval_section`] with a precomputed second point.
pub(crate) fn eval_section_with(s: &HomogPoly, base: &ProjPoint, second: &ProjPoint, mult: u32) -> Result<Fe> {
    if mult == 0 {
        return Ok(s.eval(base)?);
    }
    taylor_coefficient(s, base.coords(), second.coords(), mult)
}
