//! Codes on the projective bundle `P(V1 + V2)` over a Deligne-Lusztig surface.
//!
//! A section of `O(b)` on the bundle is a tuple of sections `g_{i1,i2}` of
//! `V1^{i1} V2^{i2}` (one per `i1 + i2 = b`), and its value at the fiber point
//! `[u0:u1]` over a surface point `P` is `sum u0^{i1} u1^{i2} g_{i1,i2}(P)`.
//! Generator rows are therefore `u0^{i1} u1^{i2} g(P)` for each component and
//! each basis section `g`, with columns ordered by surface point and then by the
//! canonical order of `P^1`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::{independent_rows, FormatError, LinearCode};
use crate::dl_surfaces::{
    a2_points, closed_form_point_count, z_points, FamilyTag, SurfaceError, SurfaceFamily,
};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;
use crate::params::binomial;
use crate::projgeom::{enumerate_projective, monomial_basis, GeomError, HomogPoly};
use crate::rr_spaces::{
    eval_section_with, excellence_checks, second_point, section_basis, LineBundleA2, RrError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesisViolation(Vec<String>),
    #[error("evaluation map is not injective: {rows} candidate rows have rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("twists a > 0 have no section-space model")]
    UnsupportedTwist,
    #[error("no code construction for family {0}")]
    UnsupportedFamily(FamilyTag),
    #[error("field has {found} elements, expected {expected}")]
    WrongField { expected: u64, found: u64 },
    #[error("bundle data does not match family {0}")]
    BundleMismatch(FamilyTag),
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, CodeError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleData {
    /// `V_i = O(n_i H - sum m_{i,j} B_j)`. `labels` fixes which point is
    /// `P_1, P_2, ...` for the ordering hypotheses; empty means canonical order.
    A2 { v1: LineBundleA2, v2: LineBundleA2, labels: Vec<usize> },
    /// `V_i` pulled back from `O_{P^4}(t_i)`.
    TwistedA4 { t1: u32, t2: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTwoBundleSpec {
    pub family: SurfaceFamily,
    pub data: BundleData,
}

impl RankTwoBundleSpec {
    pub fn a2(q: u64, v1: LineBundleA2, v2: LineBundleA2) -> Result<RankTwoBundleSpec> {
        let family = SurfaceFamily::new(FamilyTag::A2, q)?;
        let expected = crate::rr_spaces::plane_point_count(q);
        for v in [&v1, &v2] {
            if v.mult.len() != expected {
                return Err(RrError::IndexOutOfRange { expected, found: v.mult.len() }.into());
            }
        }
        Ok(RankTwoBundleSpec { family, data: BundleData::A2 { v1, v2, labels: Vec::new() } })
    }

    pub fn twisted_a4(q: u64, t1: u32, t2: u32) -> Result<RankTwoBundleSpec> {
        let family = SurfaceFamily::new(FamilyTag::TwistedA4, q)?;
        Ok(RankTwoBundleSpec { family, data: BundleData::TwistedA4 { t1, t2 } })
    }

    /// Sets the point labelling used by the ordering hypotheses.
    pub fn with_labels(mut self, order: Vec<usize>) -> RankTwoBundleSpec {
        if let BundleData::A2 { labels, .. } = &mut self.data {
            *labels = order;
        }
        self
    }

    /// The same bundle with the summands exchanged.
    pub fn swapped(&self) -> RankTwoBundleSpec {
        let data = match &self.data {
            BundleData::A2 { v1, v2, labels } => {
                BundleData::A2 { v1: v2.clone(), v2: v1.clone(), labels: labels.clone() }
            }
            BundleData::TwistedA4 { t1, t2 } => BundleData::TwistedA4 { t1: *t2, t2: *t1 },
        };
        RankTwoBundleSpec { family: self.family, data }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub bundle: RankTwoBundleSpec,
    /// Symmetric power.
    pub b: u32,
    /// Twist by `O_S(a D_j)`; construction supports only `a = 0`.
    pub a: u32,
}

impl CodeSpec {
    pub fn new(bundle: RankTwoBundleSpec, b: u32) -> CodeSpec {
        CodeSpec { bundle, b, a: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentBundle {
    A2(LineBundleA2),
    Degree(u32),
}

/// The summand `V1^{i1} V2^{i2}` of `Symm^b(V1 + V2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmComponent {
    pub i1: u32,
    pub i2: u32,
    pub bundle: ComponentBundle,
}

/// Summands of `Symm^b(V1 + V2)`, `(i1, i2)` in lexicographic order.
pub fn symm_decomposition(spec: &CodeSpec) -> Vec<SymmComponent> {
    let b = spec.b;
    (0..=b)
        .map(|i1| {
            let i2 = b - i1;
            let bundle = match &spec.bundle.data {
                BundleData::A2 { v1, v2, .. } => ComponentBundle::A2(v1.combine(i1, v2, i2)),
                BundleData::TwistedA4 { t1, t2 } => ComponentBundle::Degree(i1 * t1 + i2 * t2),
            };
            SymmComponent { i1, i2, bundle }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    /// `(i1, i2)` the check was evaluated for, if per-component.
    pub component: Option<(u32, u32)>,
    pub detail: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| match c.component {
                Some((i1, i2)) => format!("{} at ({i1},{i2}): {}", c.name, c.detail),
                None => format!("{}: {}", c.name, c.detail),
            })
            .collect()
    }
}

/// Evaluates every inequality the corollaries impose, for every `(i1, i2)`.
pub fn check_hypotheses(spec: &CodeSpec) -> HypothesisReport {
    let fam = &spec.bundle.family;
    let q = fam.q();
    let fiber = fam.fiber_points();
    let mut checks = vec![HypothesisCheck {
        name: "b-range".into(),
        component: None,
        detail: format!("0 < {} < {fiber}", spec.b),
        passed: spec.b > 0 && (spec.b as u64) < fiber,
    }];
    let labels = match &spec.bundle.data {
        BundleData::A2 { labels, .. } => labels.as_slice(),
        BundleData::TwistedA4 { .. } => &[],
    };
    for comp in symm_decomposition(spec) {
        let at = Some((comp.i1, comp.i2));
        match &comp.bundle {
            ComponentBundle::A2(bundle) => {
                for c in excellence_checks(bundle, q, labels) {
                    checks.push(HypothesisCheck {
                        name: c.name.into(),
                        component: at,
                        detail: c.detail,
                        passed: c.passed,
                    });
                }
            }
            ComponentBundle::Degree(t) => {
                let hi = q.pow(3) + 1;
                checks.push(HypothesisCheck {
                    name: "degree-window".into(),
                    component: at,
                    detail: format!("{} < {t} < {hi}", q + 1),
                    passed: q + 1 < *t as u64 && (*t as u64) < hi,
                });
            }
        }
    }
    HypothesisReport { checks }
}

/// Whether hypothesis failures abort a build or are only recorded.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HypothesisPolicy {
    Enforce,
    Record,
}

fn apply_policy(spec: &CodeSpec, policy: HypothesisPolicy) -> Result<HypothesisReport> {
    if spec.a > 0 {
        return Err(CodeError::UnsupportedTwist);
    }
    let report = check_hypotheses(spec);
    if policy == HypothesisPolicy::Enforce && !report.all_passed() {
        return Err(CodeError::HypothesisViolation(report.failures()));
    }
    Ok(report)
}

fn hypothesis_summary(report: &HypothesisReport) -> String {
    if report.all_passed() {
        "pass".into()
    } else {
        format!("fail: {}", report.failures().join("; "))
    }
}

/// `u0^{i1} u1^{i2}` at every point of `P^1`.
fn fiber_weights(field: &Field, fiber: &[crate::projgeom::ProjPoint], i1: u32, i2: u32) -> Vec<Fe> {
    fiber
        .iter()
        .map(|u| field.mul(field.pow(u.coords()[0], i1 as u64), field.pow(u.coords()[1], i2 as u64)))
        .collect()
}

/// The A2 code, enforcing the corollary's hypotheses.
pub fn build_code_a2(spec: &CodeSpec, field: &Field) -> Result<LinearCode> {
    build_code_a2_with(spec, field, HypothesisPolicy::Enforce)
}

pub fn build_code_a2_with(spec: &CodeSpec, field: &Field, policy: HypothesisPolicy) -> Result<LinearCode> {
    let fam = spec.bundle.family;
    if fam.tag() != FamilyTag::A2 {
        return Err(CodeError::UnsupportedFamily(fam.tag()));
    }
    if !matches!(spec.bundle.data, BundleData::A2 { .. }) {
        return Err(CodeError::BundleMismatch(fam.tag()));
    }
    let q = fam.q();
    if field.q() as u64 != q {
        return Err(CodeError::WrongField { expected: q, found: field.q() as u64 });
    }
    let report = apply_policy(spec, policy)?;

    let surface = a2_points(q, field)?;
    let seconds = surface
        .iter()
        .map(|pt| second_point(&pt.base, &pt.line, field))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let fiber = enumerate_projective(1, field)?;
    let n = surface.len() * fiber.len();
    let labels: Vec<String> = surface
        .iter()
        .flat_map(|pt| {
            let base = pt.label(field);
            fiber.iter().map(move |u| format!("{base}|{}", u.to_text(field)))
        })
        .collect();

    let mut rows = Vec::new();
    let mut dims = Vec::new();
    for comp in symm_decomposition(spec) {
        let ComponentBundle::A2(bundle) = &comp.bundle else { unreachable!() };
        let basis = section_basis(bundle, field)?;
        dims.push(format!("({},{}):{}", comp.i1, comp.i2, basis.dim()));
        let weights = fiber_weights(field, &fiber, comp.i1, comp.i2);
        let comp_rows = basis
            .polys
            .par_iter()
            .map(|g| -> std::result::Result<Vec<Fe>, RrError> {
                let mut row = Vec::with_capacity(n);
                for (pt, second) in surface.iter().zip(&seconds) {
                    let v = eval_section_with(g, &pt.base, second, bundle.mult[pt.base_index])?;
                    row.extend(weights.iter().map(|&w| field.mul(w, v)));
                }
                Ok(row)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.extend(comp_rows);
    }
    let candidates = rows.len();
    let (kept, rank) = independent_rows(field, n, rows);
    if rank < candidates || rank == 0 {
        return Err(CodeError::RankDeficient { rows: candidates, rank });
    }

    let mut provenance = BTreeMap::new();
    provenance.insert("family".into(), "A2".into());
    provenance.insert("construction".into(), "exact".into());
    provenance.insert("q".into(), q.to_string());
    provenance.insert("b".into(), spec.b.to_string());
    provenance.insert("components".into(), dims.join(" "));
    provenance.insert("hypotheses".into(), hypothesis_summary(&report));
    Ok(LinearCode::new(Matrix::from_rows(field, n, kept), labels, provenance)?)
}

/// Result of the 2A4 proxy construction: the code plus the rank bookkeeping.
#[derive(Clone, Debug)]
pub struct ProxyCode {
    pub code: LinearCode,
    pub z_point_count: usize,
    pub surface_point_count: u64,
    pub candidate_rows: usize,
    pub rank: usize,
}

/// 2A4 code evaluated at the rational points of `Z` instead of the surface.
pub fn build_code_2a4_proxy(spec: &CodeSpec, field: &Field) -> Result<ProxyCode> {
    build_code_2a4_proxy_with(spec, field, HypothesisPolicy::Enforce)
}

pub fn build_code_2a4_proxy_with(
    spec: &CodeSpec,
    field: &Field,
    policy: HypothesisPolicy,
) -> Result<ProxyCode> {
    let fam = spec.bundle.family;
    if fam.tag() != FamilyTag::TwistedA4 {
        return Err(CodeError::UnsupportedFamily(fam.tag()));
    }
    if !matches!(spec.bundle.data, BundleData::TwistedA4 { .. }) {
        return Err(CodeError::BundleMismatch(fam.tag()));
    }
    if field.q() as u64 != fam.eval_order() {
        return Err(CodeError::WrongField { expected: fam.eval_order(), found: field.q() as u64 });
    }
    let report = apply_policy(spec, policy)?;

    let zpts = z_points(&fam)?;
    let fiber = enumerate_projective(1, field)?;
    let n = zpts.len() * fiber.len();
    let labels: Vec<String> = zpts
        .iter()
        .flat_map(|z| {
            let zl = z.to_text(field);
            fiber.iter().map(move |u| format!("{zl}|{}", u.to_text(field)))
        })
        .collect();

    let mut rows = Vec::new();
    let mut k_formula: i128 = 0;
    for comp in symm_decomposition(spec) {
        let ComponentBundle::Degree(t) = comp.bundle else { unreachable!() };
        let weights = fiber_weights(field, &fiber, comp.i1, comp.i2);
        let qq = fam.q() as i64 + 1;
        k_formula += binomial(4 + t as i64, t as i64) - binomial(4 + t as i64 - qq, t as i64 - qq);
        let comp_rows: Vec<Vec<Fe>> = monomial_basis(5, t)
            .into_par_iter()
            .map(|e| -> std::result::Result<Vec<Fe>, GeomError> {
                let mono = HomogPoly::monomial(field, e, Fe::ONE)?;
                let mut row = Vec::with_capacity(n);
                for z in &zpts {
                    let v = mono.eval(z)?;
                    row.extend(weights.iter().map(|&w| field.mul(w, v)));
                }
                Ok(row)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.extend(comp_rows);
    }
    let candidates = rows.len();
    let (kept, rank) = independent_rows(field, n, rows);
    let surface = closed_form_point_count(&fam)?;

    let mut provenance = BTreeMap::new();
    provenance.insert("family".into(), "2A4".into());
    provenance.insert("construction".into(), "proxy: evaluated on Z, not on S2".into());
    provenance.insert("q".into(), fam.q().to_string());
    provenance.insert("b".into(), spec.b.to_string());
    provenance.insert("z_points".into(), zpts.len().to_string());
    provenance.insert("surface_points".into(), surface.to_string());
    provenance.insert("candidate_rows".into(), candidates.to_string());
    provenance.insert("rank".into(), rank.to_string());
    provenance.insert("k_formula".into(), k_formula.to_string());
    provenance.insert("hypotheses".into(), hypothesis_summary(&report));
    let code = LinearCode::new(Matrix::from_rows(field, n, kept), labels, provenance)?;
    Ok(ProxyCode {
        code,
        z_point_count: zpts.len(),
        surface_point_count: surface,
        candidate_rows: candidates,
        rank,
    })
}
