//! Torelli criteria for nodal and nodal-cuspidal curves.
//!
//! A curve is reported Torelli when some degree `m` in the admissible range
//! gives a nonzero linear system `I_m(C)`, through the nodes and tangent to
//! the cusps, whose members have no common factor. Failure of the criterion
//! proves nothing; the only negative output is a dimension obstruction,
//! where the equisingular family is larger than the moduli space its
//! bundles live in.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvecat::CurveRecord;
use crate::exactlin::{in_span, kernel_basis, QMatrix, Rational, SparseVec};
use crate::logbundle::is_stable;
use crate::ring3::ideal::ideal_echelon;
use crate::ring3::{dim_s, gcd_many, mono_basis, HPoly, Mono, ProjPoint};
use crate::singcat::{chart_at, nodes_and_cusps, SingLocus, SingType};
use crate::syzygy::{Jacobian, SyzygyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorelliError {
    #[error("curve has singularities other than nodes")]
    NotNodal,
    #[error("curve has singularities other than nodes and ordinary cusps")]
    WrongSingularityTypes,
    #[error("tangent line {line} does not pass through {point}")]
    TangentNotThroughPoint { point: String, line: String },
    #[error("cusp at {0} has no declared tangent line")]
    MissingTangent(String),
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
}

/// One linear condition family imposed on forms of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Vanish at the point.
    Vanish(ProjPoint),
    /// Vanish at the point with the given line as tangent (or be singular there).
    Tangent(ProjPoint, HPoly),
    /// Lie in the ideal of a cluster of points.
    InIdeal(HPoly, HPoly),
    /// Lie in the saturated Jacobian ideal of the curve.
    SaturatedJacobian(HPoly),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Vanish(p) => write!(f, "vanish at {p}"),
            Condition::Tangent(p, l) => write!(f, "tangent to {l} at {p}"),
            Condition::InIdeal(a, b) => write!(f, "in ideal ({a}, {b})"),
            Condition::SaturatedJacobian(g) => write!(f, "in saturated Jacobian ideal of {g}"),
        }
    }
}

impl Condition {
    /// Linear functionals on `S_m` (as dense rows over `mono_basis(m)`)
    /// whose common kernel is the set of forms satisfying the condition.
    fn rows(&self, m: u32) -> Result<Vec<Vec<Rational>>, TorelliError> {
        let basis = mono_basis(m);
        match self {
            Condition::Vanish(p) => Ok(vec![basis.iter().map(|mu| mono_poly(mu).eval_at(p)).collect()]),
            Condition::Tangent(p, line) => {
                let mut rows = Condition::Vanish(p.clone()).rows(m)?;
                rows.push(tangency_row(p, line, m)?);
                Ok(rows)
            }
            Condition::InIdeal(g1, g2) => Ok(quotient_rows(&[g1.clone(), g2.clone()], m)),
            Condition::SaturatedJacobian(f) => {
                let jac = Jacobian::new(f)?;
                Ok(quotient_rows(&jac.sat_basis(m)?, m))
            }
        }
    }

    /// Whether `h` satisfies the condition.
    pub fn holds(&self, h: &HPoly) -> Result<bool, TorelliError> {
        let v = h.coeff_vector();
        Ok(self
            .rows(h.degree())?
            .iter()
            .all(|row| row.iter().zip(&v).fold(Rational::zero(), |acc, (a, b)| acc + a * b).is_zero()))
    }
}

fn mono_poly(mu: &Mono) -> HPoly {
    HPoly::monomial(*mu, Rational::one())
}

/// Rows cutting out the span of `gens` (in degree `m`) inside `S_m`: the
/// coordinates of the normal form modulo that span.
fn quotient_rows(gens: &[HPoly], m: u32) -> Vec<Vec<Rational>> {
    let ech = ideal_echelon(gens, m);
    let free = ech.free_columns();
    let n = dim_s(m as i64);
    let mut rows = vec![vec![Rational::zero(); n]; free.len()];
    for i in 0..n {
        for (col, c) in ech.normal_form(&[(i, Rational::one())]) {
            let r = free.binary_search(&col).expect("normal form lives on free columns");
            rows[r][i] = c;
        }
    }
    rows
}

/// After moving `p` to `(0:0:1)` the line becomes `a x + b y`; a form `g`
/// with local linear part `c_x x + c_y y` is tangent to it iff
/// `a c_y - b c_x = 0`.
fn tangency_row(p: &ProjPoint, line: &HPoly, m: u32) -> Result<Vec<Rational>, TorelliError> {
    if line.degree() != 1 {
        return Err(TorelliError::DegreeMismatch {
            expected: 1,
            got: line.degree(),
        });
    }
    if !line.eval_at(p).is_zero() {
        return Err(TorelliError::TangentNotThroughPoint {
            point: p.to_string(),
            line: line.to_string(),
        });
    }
    let chart = chart_at(p);
    let local = line.linear_change(&chart).expect("chart is invertible");
    let a = local.coeff(&Mono::new(1, 0, 0));
    let b = local.coeff(&Mono::new(0, 1, 0));
    if m == 0 {
        return Ok(vec![Rational::zero()]);
    }
    let mx = Mono::new(1, 0, m - 1);
    let my = Mono::new(0, 1, m - 1);
    Ok(mono_basis(m)
        .iter()
        .map(|mu| {
            let g = mono_poly(mu).linear_change(&chart).expect("chart is invertible");
            &a * g.coeff(&my) - &b * g.coeff(&mx)
        })
        .collect())
}

/// Degree-`m` forms satisfying a list of conditions, as an explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub m: u32,
    pub basis: Vec<HPoly>,
    pub conditions: Vec<Condition>,
}

impl LinearSystem {
    pub fn from_conditions(conditions: Vec<Condition>, m: u32) -> Result<LinearSystem, TorelliError> {
        let mut rows = Vec::new();
        for c in &conditions {
            rows.extend(c.rows(m)?);
        }
        let n = dim_s(m as i64);
        let basis = if rows.is_empty() {
            mono_basis(m).iter().map(mono_poly).collect()
        } else {
            kernel_basis(&QMatrix::from_rows(rows, n))
                .into_iter()
                .map(|v| HPoly::from_coeffs(m, &v))
                .collect()
        };
        Ok(LinearSystem { m, basis, conditions })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `h` (of degree `m`) lies in the span of the basis.
    pub fn contains(&self, h: &HPoly) -> bool {
        if h.degree() != self.m {
            return false;
        }
        if self.basis.is_empty() {
            return h.is_zero();
        }
        let cols: Vec<Vec<Rational>> = self.basis.iter().map(HPoly::coeff_vector).collect();
        in_span(&h.coeff_vector(), &QMatrix::from_columns(&cols, dim_s(self.m as i64)))
    }

    /// Same span as `other`.
    pub fn same_span(&self, other: &LinearSystem) -> bool {
        self.m == other.m
            && self.dim() == other.dim()
            && other.basis.iter().all(|h| self.contains(h))
    }

    /// Applies a coordinate change to every member.
    pub fn transform(&self, a: &QMatrix) -> LinearSystem {
        LinearSystem {
            m: self.m,
            basis: self
                .basis
                .iter()
                .map(|h| h.linear_change(a).expect("invertible change"))
                .collect(),
            conditions: Vec::new(),
        }
    }
}

pub fn linear_system_points(points: &[ProjPoint], m: u32) -> LinearSystem {
    LinearSystem::from_conditions(points.iter().cloned().map(Condition::Vanish).collect(), m)
        .expect("point conditions cannot fail")
}

/// Forms through `nodes` and through each cusp with the cusp's tangent line
/// as tangent.
pub fn linear_system_cusps(
    nodes: &[ProjPoint],
    cusps: &[(ProjPoint, HPoly)],
    m: u32,
) -> Result<LinearSystem, TorelliError> {
    let conditions = nodes
        .iter()
        .cloned()
        .map(Condition::Vanish)
        .chain(cusps.iter().map(|(p, l)| Condition::Tangent(p.clone(), l.clone())))
        .collect();
    LinearSystem::from_conditions(conditions, m)
}

/// The members have no common factor (and there is at least one), so the
/// base locus is finite.
pub fn base_locus_zero_dim(ls: &LinearSystem) -> bool {
    match gcd_many(&ls.basis) {
        Ok(g) => g.degree() == 0,
        Err(_) => false,
    }
}

/// `I_m(C)` for a curve whose singularities are nodes and cusps.
///
/// Nodes and cusps at rational points become point and tangency
/// conditions; node clusters become ideal membership. A cusp cluster has no
/// rational tangent to impose, so the whole system is taken to be the
/// saturated Jacobian ideal in degree `m`, which for nodes and ordinary
/// cusps is the same scheme.
pub fn curve_linear_system(curve: &CurveRecord, m: u32) -> Result<LinearSystem, TorelliError> {
    let mut conditions = Vec::new();
    for s in &curve.sings {
        let cond = match (&s.stype, &s.locus) {
            (SingType::A(1), SingLocus::Point(p)) => Condition::Vanish(p.clone()),
            (SingType::A(1), SingLocus::Cluster(g1, g2)) => Condition::InIdeal(g1.clone(), g2.clone()),
            (SingType::A(2), SingLocus::Point(p)) => {
                let line = s.tangent.clone().ok_or_else(|| TorelliError::MissingTangent(p.to_string()))?;
                Condition::Tangent(p.clone(), line)
            }
            (SingType::A(2), SingLocus::Cluster(..)) => {
                return LinearSystem::from_conditions(vec![Condition::SaturatedJacobian(curve.f.clone())], m);
            }
            _ => return Err(TorelliError::WrongSingularityTypes),
        };
        conditions.push(cond);
    }
    LinearSystem::from_conditions(conditions, m)
}

/// Compares `I_m(C)` built from the declared singularities with the
/// saturated Jacobian ideal in degree `m`.
pub fn saturation_cross_check(curve: &CurveRecord, jac: &Jacobian, m: u32) -> Result<bool, TorelliError> {
    let declared = curve_linear_system(curve, m)?;
    let sat = jac.sat_basis(m)?;
    let sat_dim = crate::exactlin::rank(&QMatrix::from_rows(
        sat.iter().map(HPoly::coeff_vector).collect(),
        dim_s(m as i64),
    ));
    Ok(sat_dim == declared.dim() && sat.iter().all(|h| declared.contains(h)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorelliStatus {
    Torelli,
    CriterionFails,
    DimensionObstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorelliVerdict {
    pub status: TorelliStatus,
    pub witness_m: Option<u32>,
    pub detail: String,
}

impl TorelliVerdict {
    fn fails(detail: impl Into<String>) -> Self {
        TorelliVerdict {
            status: TorelliStatus::CriterionFails,
            witness_m: None,
            detail: detail.into(),
        }
    }

    /// Short label: `torelli@m`, `torelli`, `criterion-fails` or `obstructed`.
    pub fn label(&self) -> String {
        match (self.status, self.witness_m) {
            (TorelliStatus::Torelli, Some(m)) => format!("torelli@{m}"),
            (TorelliStatus::Torelli, None) => "torelli".into(),
            (TorelliStatus::CriterionFails, _) => "criterion-fails".into(),
            (TorelliStatus::DimensionObstruction, _) => "obstructed".into(),
        }
    }
}

impl fmt::Display for TorelliVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.detail)
    }
}

/// Largest `m` with `2m < d - 1` (irreducible) or `2m < d - 2` (reducible).
pub fn nodal_max_m(d: u32, irreducible: bool) -> u32 {
    let bound = if irreducible { d as i64 - 1 } else { d as i64 - 2 };
    ((bound - 1).max(0) / 2) as u32
}

/// Largest `m` with `2m < 5d/6 - 2`, i.e. `12 m < 5 d - 12`.
pub fn cuspidal_max_m(d: u32) -> u32 {
    let bound = 5 * d as i64 - 12;
    ((bound - 1).max(-1) / 12).max(0) as u32
}

fn search(curve: &CurveRecord, max_m: u32, range: &str) -> Result<TorelliVerdict, TorelliError> {
    for m in 1..=max_m {
        let ls = curve_linear_system(curve, m)?;
        if base_locus_zero_dim(&ls) {
            return Ok(TorelliVerdict {
                status: TorelliStatus::Torelli,
                witness_m: Some(m),
                detail: format!("I_{m} has dimension {} and finite base locus", ls.dim()),
            });
        }
    }
    Ok(TorelliVerdict::fails(if max_m == 0 {
        format!("no degree m satisfies {range}")
    } else {
        format!("no m in 1..={max_m} gives a linear system with finite base locus")
    }))
}

pub fn torelli_nodal(curve: &CurveRecord) -> Result<TorelliVerdict, TorelliError> {
    if !curve.sings.iter().all(|s| s.stype.is_node()) {
        return Err(TorelliError::NotNodal);
    }
    let d = curve.degree();
    let range = if curve.irreducible { "2m < d-1" } else { "2m < d-2" };
    search(curve, nodal_max_m(d, curve.irreducible), range)
}

pub fn torelli_nodal_count(d: u32, n: u32, irreducible: bool) -> bool {
    let bound = if irreducible { d as i64 - 1 } else { d as i64 - 2 };
    2 * (n as i64) < bound
}

/// `n + 2 kappa <= 5d/12 - 1`.
pub fn torelli_cuspidal_count(d: u32, n: u32, kappa: u32) -> bool {
    12 * (n as i64 + 2 * kappa as i64) <= 5 * d as i64 - 12
}

/// Witness search over `2m < 5d/6 - 2`; when no witness turns up, the
/// count criterion is consulted.
pub fn torelli_cuspidal(curve: &CurveRecord) -> Result<TorelliVerdict, TorelliError> {
    let (n, kappa) = nodes_and_cusps(curve).ok_or(TorelliError::WrongSingularityTypes)?;
    let d = curve.degree();
    let verdict = search(curve, cuspidal_max_m(d), "2m < 5d/6 - 2")?;
    if verdict.status == TorelliStatus::CriterionFails && torelli_cuspidal_count(d, n, kappa) {
        return Ok(TorelliVerdict {
            status: TorelliStatus::Torelli,
            witness_m: None,
            detail: format!("n + 2 kappa = {} <= 5d/12 - 1", n + 2 * kappa),
        });
    }
    Ok(verdict)
}

/// Expected dimension `d(d+3)/2 - n - 2 kappa` of the family of degree-`d`
/// curves with `n` nodes and `kappa` cusps.
pub fn severi_dim(d: u32, n: u32, kappa: u32) -> i64 {
    let d = d as i64;
    d * (d + 3) / 2 - n as i64 - 2 * kappa as i64
}

/// The family has exactly the expected dimension when `kappa < 3d`;
/// otherwise the formula is only a lower bound.
pub fn severi_dim_exact(d: u32, kappa: u32) -> bool {
    kappa < 3 * d
}

/// Dimension of the moduli space of stable rank-two bundles with the Chern
/// classes of `T<C>`.
pub fn moduli_dim(d: u32, n: u32, kappa: u32) -> i64 {
    let sing = 4 * n as i64 + 8 * kappa as i64;
    if d % 2 == 1 {
        let s = (d as i64 - 1) / 2;
        12 * s * s - 3 - sing
    } else {
        let s = d as i64 / 2;
        12 * s * s - 12 * s - sing
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionObstruction {
    pub severi: i64,
    pub moduli: i64,
    pub conclusion: String,
}

pub fn dimension_obstruction(d: u32, n: u32, kappa: u32) -> Option<DimensionObstruction> {
    let severi = severi_dim(d, n, kappa);
    let moduli = moduli_dim(d, n, kappa);
    (severi > moduli).then(|| DimensionObstruction {
        severi,
        moduli,
        conclusion: "every fiber of the bundle map through this family is positive-dimensional; \
                     the family's members are not Torelli"
            .into(),
    })
}

/// Dispatches on the singularities: the nodal criterion for nodal curves,
/// the cuspidal one when cusps occur. A failed criterion on a stable bundle
/// is upgraded to an obstruction when the family dimension exceeds the
/// moduli dimension.
pub fn torelli_verdict(curve: &CurveRecord, jac: &Jacobian) -> Result<TorelliVerdict, TorelliError> {
    let (n, kappa) = nodes_and_cusps(curve).ok_or(TorelliError::WrongSingularityTypes)?;
    let verdict = if kappa == 0 {
        torelli_nodal(curve)?
    } else {
        torelli_cuspidal(curve)?
    };
    if verdict.status != TorelliStatus::CriterionFails || !is_stable(jac) {
        return Ok(verdict);
    }
    match dimension_obstruction(curve.degree(), n, kappa) {
        Some(ob) => Ok(TorelliVerdict {
            status: TorelliStatus::DimensionObstruction,
            witness_m: None,
            detail: format!("family dimension {} > moduli dimension {}", ob.severi, ob.moduli),
        }),
        None => Ok(verdict),
    }
}

/// `delta_k = h^0(T<C>(k)) - h^0(T<C>(k-d+1))`.
pub fn key_lemma_delta(jac: &Jacobian, k: i64) -> i64 {
    let d = jac.degree() as i64;
    jac.ar_dim(k + 1) as i64 - jac.ar_dim(k - d + 2) as i64
}

/// Whether `g` (of degree `d-1`) is a linear combination of the partials.
pub fn jacobian_membership(jac: &Jacobian, g: &HPoly) -> Result<bool, TorelliError> {
    let e = jac.degree() - 1;
    if g.degree() != e {
        return Err(TorelliError::DegreeMismatch {
            expected: e,
            got: g.degree(),
        });
    }
    let v: SparseVec = g.to_sparse();
    Ok(jac.ideal_echelon(e).contains(&v))
}
