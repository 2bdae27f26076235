//! Projective points, homogeneous polynomials and rational points of hypersurface
//! intersections.
//!
//! Points are kept normalized (first nonzero coordinate equal to one). The
//! canonical point order sorts by number of nonzero coordinates, then by the
//! positions of those coordinates, then by coordinate codes. Over GF(2) this lists
//! `P^1` as `[1:0], [0:1], [1:1]` and starts `P^2` with the three coordinate
//! points.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{Fe, Field, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("expected {expected} variables, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("exponent vector {0:?} does not match the polynomial's degree")]
    BadExponent(Vec<u32>),
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeTooLarge { degree: u32, bound: u64 },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, GeomError>;

/// A normalized point of projective space.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    coords: Vec<Fe>,
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero representative.
    pub fn new(field: &Field, coords: &[Fe]) -> Result<ProjPoint> {
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or(GeomError::ZeroPoint)?;
        let inv = field.inv(lead)?;
        Ok(ProjPoint { coords: coords.iter().map(|&c| field.mul(inv, c)).collect() })
    }

    pub fn from_codes(field: &Field, codes: &[u32]) -> Result<ProjPoint> {
        let coords = codes
            .iter()
            .map(|&c| field.element(c))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(field, &coords)
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    /// Dot product with another coordinate vector (incidence test for dual points).
    pub fn dot(&self, field: &Field, other: &[Fe]) -> Fe {
        self.coords
            .iter()
            .zip(other)
            .fold(Fe::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }

    pub fn to_text(&self, field: &Field) -> String {
        self.coords.iter().map(|&c| field.to_digits(c)).collect::<Vec<_>>().join(",")
    }

    pub fn parse_text(field: &Field, s: &str) -> std::result::Result<ProjPoint, GeomError> {
        let coords = s
            .split(',')
            .map(|d| field.parse_digits(d.trim()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(field, &coords)
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| {
                let support = |p: &ProjPoint| -> Vec<usize> {
                    p.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
                };
                support(self).cmp(&support(other))
            })
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All points of `P^dim(GF(q))` in canonical order.
pub fn enumerate_projective(dim: usize, field: &Field) -> Result<Vec<ProjPoint>> {
    if dim == 0 {
        return Err(GeomError::ZeroDimension);
    }
    let q = field.q() as usize;
    let mut out = Vec::new();
    for pivot in 0..=dim {
        let free = dim - pivot;
        let count = q.pow(free as u32);
        for mut idx in 0..count {
            let mut coords = vec![Fe::ZERO; dim + 1];
            coords[pivot] = Fe::ONE;
            for slot in coords[pivot + 1..].iter_mut().rev() {
                *slot = Fe((idx % q) as u32);
                idx /= q;
            }
            out.push(ProjPoint { coords });
        }
    }
    out.sort();
    Ok(out)
}

/// Number of points of `P^dim(GF(q))`.
pub fn projective_count(dim: u32, q: u64) -> u64 {
    (q.pow(dim + 1) - 1) / (q - 1)
}

/// Exponent vectors of all monomials of the given degree, `X_0^d` first
/// (lexicographically descending).
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if nvars == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(nvars - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    }
    out
}

/// A homogeneous polynomial with coefficients in a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Fe>,
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly(deg {} in {} vars: ", self.degree, self.nvars)?;
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{}*{:?}", self.field.to_digits(c), e))
            .collect();
        write!(f, "{})", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl HomogPoly {
    /// Degrees above `q^3 + 1` are rejected; the constructions never need them.
    pub fn degree_bound(field: &Field) -> u64 {
        (field.q() as u64).pow(3) + 1
    }

    pub fn zero(field: &Field, nvars: usize, degree: u32) -> Result<HomogPoly> {
        let bound = Self::degree_bound(field);
        if degree as u64 > bound {
            return Err(GeomError::DegreeTooLarge { degree, bound });
        }
        Ok(HomogPoly { field: field.clone(), nvars, degree, terms: BTreeMap::new() })
    }

    pub fn from_terms(
        field: &Field,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Fe)>,
    ) -> Result<HomogPoly> {
        let mut poly = HomogPoly::zero(field, nvars, degree)?;
        for (e, c) in terms {
            poly.add_term(e, c)?;
        }
        Ok(poly)
    }

    /// Dense coefficient vector indexed by [`monomial_basis`].
    pub fn from_dense(field: &Field, nvars: usize, degree: u32, coeffs: &[Fe]) -> Result<HomogPoly> {
        let basis = monomial_basis(nvars, degree);
        assert_eq!(basis.len(), coeffs.len(), "dense coefficient length");
        HomogPoly::from_terms(field, nvars, degree, basis.into_iter().zip(coeffs.iter().copied()))
    }

    pub fn monomial(field: &Field, exps: Vec<u32>, coeff: Fe) -> Result<HomogPoly> {
        let degree = exps.iter().sum();
        HomogPoly::from_terms(field, exps.len(), degree, [(exps, coeff)])
    }

    /// Adds `c * x^e` to the polynomial.
    pub fn add_term(&mut self, e: Vec<u32>, c: Fe) -> Result<()> {
        if e.len() != self.nvars || e.iter().sum::<u32>() != self.degree {
            return Err(GeomError::BadExponent(e));
        }
        let field = &self.field;
        let entry = self.terms.entry(e).or_insert(Fe::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in monomial order (`X_0^d` first).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Fe)> {
        self.terms.iter().rev().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u32]) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    /// Dense coefficients indexed by [`monomial_basis`].
    pub fn to_dense(&self) -> Vec<Fe> {
        monomial_basis(self.nvars, self.degree).iter().map(|e| self.coeff(e)).collect()
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Fe) -> HomogPoly {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(e, &v)| (e.clone(), self.field.mul(c, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if other.nvars != self.nvars {
            return Err(GeomError::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.field != other.field {
            return Err(GfError::FieldMismatch.into());
        }
        let mut out = HomogPoly::zero(&self.field, self.nvars, self.degree + other.degree)?;
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(ca, cb))?;
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &HomogPoly) -> Result<()> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch.into());
        }
        if other.nvars != self.nvars {
            return Err(GeomError::ArityMismatch { expected: self.nvars, found: other.nvars });
        }
        if other.degree != self.degree {
            return Err(GeomError::BadExponent(vec![other.degree]));
        }
        Ok(())
    }

    /// Value at an arbitrary coordinate vector (not necessarily normalized).
    pub fn eval_coords(&self, x: &[Fe]) -> Result<Fe> {
        if x.len() != self.nvars {
            return Err(GeomError::ArityMismatch { expected: self.nvars, found: x.len() });
        }
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (e, &c) in &self.terms {
            let mut term = c;
            for (&xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    term = f.mul(term, f.pow(xi, ei as u64));
                }
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Value at the normalized representative of `p`.
    pub fn eval(&self, p: &ProjPoint) -> Result<Fe> {
        self.eval_coords(p.coords())
    }

    /// Text form: an optional header, then one `e0,e1,... : coeff` line per term.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# field={} nvars={} degree={}\n",
            self.field.descriptor(),
            self.nvars,
            self.degree
        );
        for (e, c) in self.terms() {
            let exps: Vec<String> = e.iter().map(u32::to_string).collect();
            s.push_str(&format!("{} : {}\n", exps.join(","), self.field.to_digits(c)));
        }
        s
    }

    /// Parses [`HomogPoly::to_text`] output. Without a header the shape is
    /// inferred from the first term.
    pub fn parse_text(field: &Field, text: &str) -> Result<HomogPoly> {
        let mut shape: Option<(usize, u32)> = None;
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            let perr = |msg: &str| GeomError::Parse { line: lineno, msg: msg.to_string() };
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let mut nvars = None;
                let mut degree = None;
                for kv in header.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("nvars", v)) => nvars = v.parse().ok(),
                        Some(("degree", v)) => degree = v.parse().ok(),
                        _ => {}
                    }
                }
                if let (Some(n), Some(d)) = (nvars, degree) {
                    shape = Some((n, d));
                }
                continue;
            }
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| perr("expected `exponents : coeff`"))?;
            let e = lhs
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| perr("bad exponent"))?;
            let c = field.parse_digits(rhs.trim()).map_err(|_| perr("bad coefficient"))?;
            shape.get_or_insert((e.len(), e.iter().sum()));
            terms.push((e, c));
        }
        let (nvars, degree) = shape.ok_or(GeomError::Parse { line: 0, msg: "empty polynomial".into() })?;
        HomogPoly::from_terms(field, nvars, degree, terms)
    }
}

/// Rational points of `P^dim` on which every equation vanishes, in canonical order.
pub fn enumerate_variety(eqs: &[HomogPoly], dim: usize, field: &Field) -> Result<Vec<ProjPoint>> {
    for eq in eqs {
        if eq.nvars() != dim + 1 {
            return Err(GeomError::ArityMismatch { expected: dim + 1, found: eq.nvars() });
        }
        if eq.field() != field {
            return Err(GfError::FieldMismatch.into());
        }
    }
    let all = enumerate_projective(dim, field)?;
    Ok(all
        .into_par_iter()
        .filter(|p| eqs.iter().all(|eq| eq.eval(p).map(|v| v.is_zero()).unwrap_or(false)))
        .collect())
}

/// Writes points one per line as comma-separated element digit strings.
pub fn points_to_text(field: &Field, pts: &[ProjPoint]) -> String {
    pts.iter().map(|p| p.to_text(field) + "\n").collect()
}

pub fn parse_points(field: &Field, text: &str) -> Result<Vec<ProjPoint>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            ProjPoint::parse_text(field, l.trim())
                .map_err(|e| GeomError::Parse { line: i + 1, msg: e.to_string() })
        })
        .collect()
}
