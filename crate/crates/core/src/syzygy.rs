//! Graded Jacobian machinery for a plane curve `f = 0`.
//!
//! Everything here reduces to the spaces `J_k = (f_x, f_y, f_z)_k`:
//!
//! * `AR(f)_m` is the kernel of `S_m^3 -> S_{m+d-1}`, so
//!   `dim AR(f)_m = 3 dim S_m - dim J_{m+d-1}`;
//! * the Milnor algebra has `dim M(f)_k = dim S_k - dim J_k`;
//! * the saturation `J~` is read off the torsion `H^0_m(M(f)) = J~/J`,
//!   computed as a colon `J : m^N` in the quotient spaces.
//!
//! [`Jacobian`] caches the echelon form of each `J_k`, so repeated queries on
//! one curve are cheap. The free functions build a fresh context per call.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{kernel_basis, Echelon, QMatrix, Rational, SparseVec};
use crate::ring3::{dim_s, mono_basis, mult_matrix, multiples, HPoly, Mono};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyzygyError {
    #[error("Koszul rank {rank} differs from the closed formula {formula} in degree {m}")]
    KoszulMismatch { m: u32, rank: usize, formula: usize },
    #[error("ct = {ct} but mdr + d - 2 = {expected}")]
    RelationViolated { ct: u32, expected: u32 },
    #[error("Milnor algebra dimensions {0:?} did not stabilize")]
    NotStabilized(Vec<usize>),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("curve has no nontrivial relation up to degree {0}; it is smooth")]
    Smooth(u32),
    #[error("torsion of the Milnor algebra does not vanish in degree {0}")]
    SaturationUnstable(u32),
    #[error("polynomial degree {0} is too small")]
    DegreeTooSmall(u32),
}

/// A relation `a f_x + b f_y + c f_z = 0` with `a, b, c` of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyTriple {
    pub a: HPoly,
    pub b: HPoly,
    pub c: HPoly,
}

impl SyzygyTriple {
    pub fn degree(&self) -> u32 {
        self.a.degree()
    }

    /// `a f_x + b f_y + c f_z`.
    pub fn apply(&self, partials: &[HPoly; 3]) -> HPoly {
        let s = &(&self.a * &partials[0]) + &(&self.b * &partials[1]);
        &s + &(&self.c * &partials[2])
    }
}

/// Minimal degree of a nontrivial relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mdr {
    Degree(u32),
    Infinite,
}

impl Mdr {
    pub fn degree(self) -> Option<u32> {
        match self {
            Mdr::Degree(q) => Some(q),
            Mdr::Infinite => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileLabel {
    Ar,
    Er,
    Milnor,
    Saturation,
    H0m,
    Defect,
}

/// Dimensions of one graded object over a range of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedProfile {
    pub label: ProfileLabel,
    pub values: Vec<(i64, i64)>,
}

impl GradedProfile {
    pub fn get(&self, k: i64) -> Option<i64> {
        self.values.iter().find(|(d, _)| *d == k).map(|(_, v)| *v)
    }
}

/// Coefficient of `t^k` in `((1 - t^{d-1}) / (1 - t))^3`: the Hilbert
/// function of the Milnor algebra of a smooth curve of degree `d`.
pub fn smooth_milnor_dim(d: u32, k: u32) -> usize {
    if d < 2 {
        return 0;
    }
    let top = d - 2;
    (0..=top.min(k))
        .map(|a| {
            let rest = k - a;
            // pairs (b, c) in [0, top]^2 with b + c = rest
            if rest > 2 * top {
                0
            } else {
                let lo = rest.saturating_sub(top);
                let hi = rest.min(top);
                (hi - lo + 1) as usize
            }
        })
        .sum()
}

/// Quotient `M_j = S_j / J_j` in coordinates on the free monomials.
struct Quotient {
    echelon: Arc<Echelon>,
    /// monomial index -> coordinate, for free monomials
    coord: HashMap<usize, usize>,
    free: Vec<usize>,
}

impl Quotient {
    fn dim(&self) -> usize {
        self.free.len()
    }

    fn normal_form(&self, v: &[(usize, Rational)]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.free.len()];
        for (c, q) in self.echelon.normal_form(v) {
            out[self.coord[&c]] = q;
        }
        out
    }
}

/// Torsion `H^0_m(M(f))` degree by degree, as subspaces of `M_j`.
struct Torsion {
    /// basis of `H_j` in quotient coordinates, for `j <= top`
    spaces: Vec<Vec<Vec<Rational>>>,
}

/// Cached Jacobian data of one curve.
pub struct Jacobian {
    f: HPoly,
    partials: [HPoly; 3],
    ideal: Mutex<HashMap<u32, Arc<Echelon>>>,
    torsion: OnceLock<Result<Torsion, SyzygyError>>,
}

impl Jacobian {
    pub fn new(f: &HPoly) -> Result<Self, SyzygyError> {
        if f.degree() < 2 {
            return Err(SyzygyError::DegreeTooSmall(f.degree()));
        }
        Ok(Jacobian {
            partials: f.partials(),
            f: f.clone(),
            ideal: Mutex::new(HashMap::new()),
            torsion: OnceLock::new(),
        })
    }

    pub fn poly(&self) -> &HPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn partials(&self) -> &[HPoly; 3] {
        &self.partials
    }

    /// `T = 3(d-2)`, the top degree of the Milnor algebra of a smooth curve.
    pub fn top_degree(&self) -> u32 {
        3 * (self.degree() - 2)
    }

    /// Fully reduced echelon form of `J_k` over `mono_basis(k)`.
    pub fn ideal_echelon(&self, k: u32) -> Arc<Echelon> {
        if let Some(e) = self.ideal.lock().unwrap().get(&k) {
            return e.clone();
        }
        let d = self.degree();
        let rows: Vec<SparseVec> = if k + 1 >= d {
            self.partials
                .iter()
                .filter(|p| !p.is_zero())
                .flat_map(|p| multiples(p, k + 1 - d))
                .collect()
        } else {
            Vec::new()
        };
        let mut e = Echelon::new(dim_s(k as i64), rows);
        e.reduce_fully();
        let e = Arc::new(e);
        self.ideal.lock().unwrap().entry(k).or_insert(e).clone()
    }

    /// `dim J_k`.
    pub fn ideal_dim(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.ideal_echelon(k as u32).rank()
        }
    }

    /// `dim AR(f)_m`.
    pub fn ar_dim(&self, m: i64) -> usize {
        if m < 0 {
            return 0;
        }
        3 * dim_s(m) - self.ideal_dim(m + self.degree() as i64 - 1)
    }

    /// Basis of `AR(f)_m`.
    pub fn ar_basis(&self, m: u32) -> Vec<SyzygyTriple> {
        let map = mult_matrix(&self.partials[0], m)
            .hstack(&mult_matrix(&self.partials[1], m))
            .hstack(&mult_matrix(&self.partials[2], m));
        let n = dim_s(m as i64);
        kernel_basis(&map)
            .into_iter()
            .map(|v| SyzygyTriple {
                a: HPoly::from_coeffs(m, &v[..n]),
                b: HPoly::from_coeffs(m, &v[n..2 * n]),
                c: HPoly::from_coeffs(m, &v[2 * n..]),
            })
            .collect()
    }

    /// Rank of the Koszul relations in `S_m^3`, from the matrix of their
    /// degree-`m` multiples.
    pub fn koszul_rank(&self, m: u32) -> usize {
        let d = self.degree();
        if m + 1 < d {
            return 0;
        }
        let n = dim_s(m as i64);
        let [fx, fy, fz] = &self.partials;
        let zero = HPoly::zero(d - 1);
        let triples = [
            [&zero, fz, &-fy],
            [&-fz, &zero, fx],
            [fy, &-fx, &zero],
        ];
        let mut rows = Vec::new();
        for mu in mono_basis(m + 1 - d) {
            for t in &triples {
                let comps: Vec<HPoly> = t.iter().map(|p| p.mul_mono(&mu)).collect();
                let row = SparseVec::from_rationals(comps.iter().enumerate().flat_map(|(i, p)| {
                    p.terms().map(move |(mono, c)| (i * n + mono.index(), c))
                }));
                rows.push(row);
            }
        }
        Echelon::new(3 * n, rows).rank()
    }

    /// Dimension of the Koszul relations in degree `m`; the matrix rank is
    /// checked against `3 dim S_{m-d+1} - dim S_{m-2d+2}`.
    pub fn koszul_dim(&self, m: u32) -> Result<usize, SyzygyError> {
        let d = self.degree() as i64;
        let formula = 3 * dim_s(m as i64 - d + 1) - dim_s(m as i64 - 2 * d + 2);
        let rank = self.koszul_rank(m);
        if rank != formula {
            return Err(SyzygyError::KoszulMismatch { m, rank, formula });
        }
        Ok(formula)
    }

    /// `dim ER(f)_m = dim AR(f)_m - dim KR(f)_m`.
    pub fn er_dim(&self, m: u32) -> Result<usize, SyzygyError> {
        let k = self.koszul_dim(m)?;
        Ok(self.ar_dim(m as i64) - k)
    }

    /// Search cap for nontrivial relations: `3(d-1)`.
    pub fn mdr_cap(&self) -> u32 {
        3 * (self.degree() - 1)
    }

    pub fn mdr(&self) -> Result<Mdr, SyzygyError> {
        for q in 0..=self.mdr_cap() {
            if self.er_dim(q)? != 0 {
                return Ok(Mdr::Degree(q));
            }
        }
        Ok(Mdr::Infinite)
    }

    /// `dim M(f)_k`.
    pub fn milnor_dim(&self, k: u32) -> usize {
        dim_s(k as i64) - self.ideal_dim(k as i64)
    }

    /// Coincidence threshold, cross-checked against `mdr + d - 2`.
    pub fn ct(&self) -> Result<u32, SyzygyError> {
        let d = self.degree();
        let mdr = self.mdr()?;
        let Mdr::Degree(q) = mdr else {
            return Err(SyzygyError::Smooth(self.mdr_cap()));
        };
        let mut ct = None;
        for k in 0..=self.top_degree() + 1 {
            if self.milnor_dim(k) != smooth_milnor_dim(d, k) {
                ct = Some(k as i64 - 1);
                break;
            }
        }
        let expected = q + d - 2;
        match ct {
            Some(c) if c == expected as i64 => Ok(expected),
            Some(c) => Err(SyzygyError::RelationViolated {
                ct: c.max(0) as u32,
                expected,
            }),
            None => Err(SyzygyError::RelationViolated {
                ct: self.top_degree() + 1,
                expected,
            }),
        }
    }

    /// Global Tjurina number: `dim M(f)_k` at `k = T+1, T+2, T+3`, required
    /// constant. Degree `T` itself is skipped because a smooth curve still
    /// has its socle there.
    pub fn tau(&self) -> Result<usize, SyzygyError> {
        let t = self.top_degree();
        let vals: Vec<usize> = (t + 1..t + 4).map(|k| self.milnor_dim(k)).collect();
        if vals.windows(2).all(|w| w[0] == w[1]) {
            Ok(vals[0])
        } else {
            Err(SyzygyError::NotStabilized(vals))
        }
    }

    fn quotient(&self, j: u32) -> Quotient {
        let echelon = self.ideal_echelon(j);
        let free = echelon.free_columns();
        let coord = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Quotient {
            echelon,
            coord,
            free,
        }
    }

    /// Matrix of multiplication by `x`, `y` or `z` from `M_j` to `M_{j+1}`.
    fn var_matrix(&self, var: usize, from: &Quotient, to: &Quotient, j: u32) -> QMatrix {
        let basis = mono_basis(j);
        let mut step = [0u32; 3];
        step[var] = 1;
        let step = Mono::from_exps(step);
        let cols: Vec<Vec<Rational>> = from
            .free
            .iter()
            .map(|&i| to.normal_form(&[(basis[i].mul(&step).index(), Rational::from_integer(1.into()))]))
            .collect();
        QMatrix::from_columns(&cols, to.dim())
    }

    /// Computes `H_j = (J : m^N)_j / J_j` for all `j <= T + 1`, taking
    /// `N = T + 2 - j`. The recursion is
    /// `H_j = { g in M_j : x g, y g, z g in H_{j+1} }` with `H_{T+2} = 0`;
    /// the confirmation step checks that `M_{T+2}` has no socle.
    fn torsion(&self) -> Result<&Torsion, SyzygyError> {
        self.torsion
            .get_or_init(|| {
                let top = self.top_degree() + 1;
                let quotients: Vec<Quotient> = (0..=top + 2).map(|j| self.quotient(j)).collect();
                let socle = self.colon_step(&quotients, top + 1, &[]);
                if !socle.is_empty() {
                    return Err(SyzygyError::SaturationUnstable(top + 1));
                }
                let mut spaces: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); top as usize + 1];
                let mut above: Vec<Vec<Rational>> = Vec::new();
                for j in (0..=top).rev() {
                    let h = self.colon_step(&quotients, j, &above);
                    spaces[j as usize] = h.clone();
                    above = h;
                }
                if !spaces[top as usize].is_empty() {
                    return Err(SyzygyError::SaturationUnstable(top));
                }
                Ok(Torsion { spaces })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `{ g in M_j : x g, y g, z g in span(above) }` where `above` is a basis
    /// of a subspace of `M_{j+1}`.
    fn colon_step(&self, quotients: &[Quotient], j: u32, above: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let from = &quotients[j as usize];
        let to = &quotients[j as usize + 1];
        if from.dim() == 0 {
            return Vec::new();
        }
        let projector = if above.is_empty() {
            QMatrix::identity(to.dim())
        } else {
            let b = QMatrix::from_columns(above, to.dim());
            let ann = kernel_basis(&b.transpose());
            QMatrix::from_rows(ann, to.dim())
        };
        let mut stacked: Option<QMatrix> = None;
        for var in 0..3 {
            let block = projector.mul(&self.var_matrix(var, from, to, j));
            stacked = Some(match stacked {
                None => block,
                Some(s) => s.vstack(&block),
            });
        }
        kernel_basis(&stacked.unwrap())
    }

    /// `dim (J~/J)_k = dim H^0_m(M(f))_k`.
    pub fn h0m_dim(&self, k: i64) -> Result<usize, SyzygyError> {
        if k < 0 {
            return Ok(0);
        }
        let t = self.torsion()?;
        Ok(t.spaces.get(k as usize).map_or(0, Vec::len))
    }

    /// `dim J~_k`.
    pub fn saturation_dim(&self, k: i64) -> Result<usize, SyzygyError> {
        if k < 0 {
            return Ok(0);
        }
        Ok(self.ideal_dim(k) + self.h0m_dim(k)?)
    }

    /// Basis of `J~_k`: the echelon basis of `J_k` followed by lifts of the torsion.
    pub fn sat_basis(&self, k: u32) -> Result<Vec<HPoly>, SyzygyError> {
        let mut out: Vec<HPoly> = self
            .ideal_echelon(k)
            .pivot_rows()
            .map(|r| HPoly::from_coeffs(k, &r.to_dense(dim_s(k as i64))))
            .collect();
        out.extend(self.torsion_lifts(k)?);
        Ok(out)
    }

    fn torsion_lifts(&self, k: u32) -> Result<Vec<HPoly>, SyzygyError> {
        let t = self.torsion()?;
        let Some(space) = t.spaces.get(k as usize) else {
            return Ok(Vec::new());
        };
        let free = self.ideal_echelon(k).free_columns();
        let basis = mono_basis(k);
        Ok(space
            .iter()
            .map(|v| HPoly::from_terms(k, free.iter().zip(v).map(|(&i, c)| (basis[i], c.clone()))))
            .collect())
    }

    /// `tau - dim (S/J~)_k`.
    pub fn defect(&self, k: i64) -> Result<i64, SyzygyError> {
        let tau = self.tau()? as i64;
        Ok(tau - (dim_s(k) as i64 - self.saturation_dim(k)? as i64))
    }

    /// `dim (J : m^n)_k` straight from the definition: all `g in S_k` with
    /// `g * mu in J_{k+n}` for every monomial `mu` of degree `n`.
    pub fn colon_dim(&self, k: u32, n: u32) -> usize {
        let target = self.quotient(k + n);
        let source = mono_basis(k);
        let one = Rational::from_integer(1.into());
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for mu in mono_basis(n) {
            let cols: Vec<Vec<Rational>> = source
                .iter()
                .map(|m| target.normal_form(&[(m.mul(&mu).index(), one.clone())]))
                .collect();
            let block = QMatrix::from_columns(&cols, target.dim());
            for r in 0..block.rows() {
                rows.push(block.row(r).to_vec());
            }
        }
        if rows.is_empty() {
            return source.len();
        }
        let m = QMatrix::from_rows(rows, source.len());
        kernel_basis(&m).len()
    }

    /// Kernel dimension of multiplication by `g` (degree `d-1`) from
    /// `(J~/J)_m` to `(J~/J)_{m+d-1}`.
    pub fn h0m_mult_kernel(&self, g: &HPoly, m: u32) -> Result<usize, SyzygyError> {
        let d = self.degree();
        if g.degree() != d - 1 {
            return Err(SyzygyError::DegreeMismatch {
                expected: d - 1,
                got: g.degree(),
            });
        }
        let lifts = self.torsion_lifts(m)?;
        if lifts.is_empty() {
            return Ok(0);
        }
        let target = self.quotient(m + d - 1);
        let images: Vec<Vec<Rational>> = lifts
            .iter()
            .map(|h| {
                let prod = g * h;
                let v: Vec<(usize, Rational)> = prod.terms().map(|(mono, c)| (mono.index(), c.clone())).collect();
                target.normal_form(&v)
            })
            .collect();
        let rank = crate::exactlin::rank(&QMatrix::from_columns(&images, target.dim()));
        Ok(lifts.len() - rank)
    }

    pub fn profile(&self, label: ProfileLabel, range: std::ops::RangeInclusive<i64>) -> Result<GradedProfile, SyzygyError> {
        let mut values = Vec::new();
        for k in range {
            let v = match label {
                ProfileLabel::Ar => self.ar_dim(k) as i64,
                ProfileLabel::Er => {
                    if k < 0 {
                        0
                    } else {
                        self.er_dim(k as u32)? as i64
                    }
                }
                ProfileLabel::Milnor => {
                    if k < 0 {
                        0
                    } else {
                        self.milnor_dim(k as u32) as i64
                    }
                }
                ProfileLabel::Saturation => self.saturation_dim(k)? as i64,
                ProfileLabel::H0m => self.h0m_dim(k)? as i64,
                ProfileLabel::Defect => self.defect(k)?,
            };
            values.push((k, v));
        }
        Ok(GradedProfile { label, values })
    }
}

/// Whether `span{f_x,f_y,f_z} = span{g_x,g_y,g_z}` in `S_{d-1}`.
pub fn jacobian_span_equal(f: &HPoly, g: &HPoly) -> Result<bool, SyzygyError> {
    if f.degree() != g.degree() {
        return Err(SyzygyError::DegreeMismatch {
            expected: f.degree(),
            got: g.degree(),
        });
    }
    if f.degree() == 0 {
        return Ok(true);
    }
    let n = dim_s(f.degree() as i64 - 1);
    let rows = |h: &HPoly| -> Vec<SparseVec> { h.partials().iter().map(HPoly::to_sparse).collect() };
    let rf = Echelon::new(n, rows(f)).rank();
    let rg = Echelon::new(n, rows(g)).rank();
    let both = Echelon::new(n, rows(f).into_iter().chain(rows(g))).rank();
    Ok(rf == both && rg == both)
}

pub fn ar_basis(f: &HPoly, m: u32) -> Result<Vec<SyzygyTriple>, SyzygyError> {
    Ok(Jacobian::new(f)?.ar_basis(m))
}

pub fn ar_dim(f: &HPoly, m: i64) -> Result<usize, SyzygyError> {
    Ok(Jacobian::new(f)?.ar_dim(m))
}

pub fn koszul_dim(f: &HPoly, m: u32) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.koszul_dim(m)
}

pub fn er_dim(f: &HPoly, m: u32) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.er_dim(m)
}

pub fn mdr(f: &HPoly) -> Result<Mdr, SyzygyError> {
    Jacobian::new(f)?.mdr()
}

pub fn milnor_dim(f: &HPoly, k: u32) -> Result<usize, SyzygyError> {
    Ok(Jacobian::new(f)?.milnor_dim(k))
}

pub fn ct(f: &HPoly) -> Result<u32, SyzygyError> {
    Jacobian::new(f)?.ct()
}

pub fn tau(f: &HPoly) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.tau()
}

pub fn saturation_dim(f: &HPoly, k: i64) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.saturation_dim(k)
}

pub fn sat_basis(f: &HPoly, k: u32) -> Result<Vec<HPoly>, SyzygyError> {
    Jacobian::new(f)?.sat_basis(k)
}

pub fn h0m_dim(f: &HPoly, k: i64) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.h0m_dim(k)
}

pub fn defect(f: &HPoly, k: i64) -> Result<i64, SyzygyError> {
    Jacobian::new(f)?.defect(k)
}

pub fn h0m_mult_kernel(f: &HPoly, g: &HPoly, m: u32) -> Result<usize, SyzygyError> {
    Jacobian::new(f)?.h0m_mult_kernel(g, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring3::{parse, ProjPoint};
    use proptest::prelude::*;

    fn p(s: &str) -> HPoly {
        parse(s).unwrap()
    }

    fn jac(s: &str) -> Jacobian {
        Jacobian::new(&p(s)).unwrap()
    }

    /// Degree-k forms vanishing at the given points, by evaluating monomials.
    fn forms_through(points: &[ProjPoint], k: u32) -> usize {
        let basis = mono_basis(k);
        let rows: Vec<Vec<Rational>> = points
            .iter()
            .map(|pt| basis.iter().map(|m| HPoly::monomial(*m, Rational::from_integer(1.into())).eval_at(pt)).collect())
            .collect();
        if rows.is_empty() {
            return basis.len();
        }
        kernel_basis(&QMatrix::from_rows(rows, basis.len())).len()
    }

    #[test]
    fn ar_examples() {
        let t = jac("x*y*z");
        assert_eq!(t.ar_dim(1), 2);
        let basis = t.ar_basis(1);
        assert_eq!(basis.len(), 2);
        for r in &basis {
            assert!(r.apply(t.partials()).is_zero());
        }
        let z = jac("(x^2+y^2)^3+(y^3+z^3)^2");
        assert_eq!(z.ar_dim(2), 0);
        assert!(z.ar_dim(3) >= 1);
        for (a, b, d) in [(2, 3, 5), (1, 3, 4), (3, 3, 6)] {
            let f = p(&format!("x^{a}*y^{b}+z^{d}"));
            let rel = SyzygyTriple {
                a: HPoly::x().scale(&Rational::from_integer(b.into())),
                b: HPoly::y().scale(&Rational::from_integer((-a).into())),
                c: HPoly::zero(1),
            };
            assert!(rel.apply(&f.partials()).is_zero());
        }
    }

    #[test]
    fn koszul_examples() {
        for s in ["x^3+y^3+z^3", "x*y*z", "(x^2+y^2)^3+(y^3+z^3)^2"] {
            let j = jac(s);
            let d = j.degree();
            assert_eq!(j.koszul_dim(d - 2).unwrap(), 0);
            assert_eq!(j.koszul_dim(d - 1).unwrap(), 3);
        }
        assert_eq!(jac("x^3+y^3+z^3").koszul_dim(3).unwrap(), 9);
        // x^2 z + y^2 z: the gradient shares the factor z, the Koszul rank drops
        let bad = jac("x^2*z");
        assert!(matches!(bad.koszul_dim(3), Err(SyzygyError::KoszulMismatch { .. })));
    }

    #[test]
    fn er_and_mdr() {
        let fermat = jac("x^3+y^3+z^3");
        for m in 0..=6 {
            assert_eq!(fermat.er_dim(m).unwrap(), 0);
        }
        assert_eq!(fermat.mdr().unwrap(), Mdr::Infinite);
        let nodal = jac("y^2*z-x^2*(x+z)");
        assert_eq!(nodal.er_dim(1).unwrap(), 0);
        assert_eq!(nodal.er_dim(2).unwrap(), 1);
        assert_eq!(nodal.mdr().unwrap(), Mdr::Degree(2));
        assert_eq!(nodal.ct().unwrap(), 3);
        let t = jac("x*y*z");
        assert_eq!(t.er_dim(1).unwrap(), 2);
        assert_eq!(t.mdr().unwrap(), Mdr::Degree(1));
        assert_eq!(t.ct().unwrap(), 2);
        let c222 = jac("x^2*y^2*z^2+y^6+z^6");
        assert_eq!(c222.mdr().unwrap(), Mdr::Degree(4));
        assert_eq!(c222.ct().unwrap(), 8);
        assert_eq!(Jacobian::new(&p("x^3+y^3+z^3")).unwrap().ct(), Err(SyzygyError::Smooth(6)));
    }

    #[test]
    fn milnor_examples() {
        let fermat = jac("x^3+y^3+z^3");
        assert_eq!(fermat.milnor_dim(2), 3);
        assert_eq!(fermat.milnor_dim(4), 0);
        assert_eq!(jac("x*y*z").milnor_dim(10), 3);
        assert_eq!(smooth_milnor_dim(3, 1), 3);
        assert_eq!(smooth_milnor_dim(6, 0), 1);
        for d in 2..9 {
            assert_eq!(smooth_milnor_dim(d, 3 * (d - 2)), 1);
            assert_eq!(smooth_milnor_dim(d, 3 * (d - 2) + 1), 0);
            let total: usize = (0..=3 * (d - 2)).map(|k| smooth_milnor_dim(d, k)).sum();
            assert_eq!(total, ((d - 1) as usize).pow(3));
        }
        for d in 3..6 {
            let f = p(&format!("x^{d}+y^{d}+z^{d}"));
            let j = Jacobian::new(&f).unwrap();
            for k in 0..=3 * (d - 2) + 1 {
                assert_eq!(j.milnor_dim(k), smooth_milnor_dim(d, k));
            }
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(jac("x*y*z").tau().unwrap(), 3);
        assert_eq!(jac("(x^2+y^2)^3+(y^3+z^3)^2").tau().unwrap(), 12);
        assert_eq!(jac("x^4+y^4+z^4").tau().unwrap(), 0);
        assert!(matches!(jac("x^2*y").tau(), Err(SyzygyError::NotStabilized(_))));
    }

    #[test]
    fn saturation_of_free_and_nodal_curves() {
        let t = jac("x*y*z");
        for k in 0..8 {
            assert_eq!(t.h0m_dim(k).unwrap(), 0);
            assert_eq!(t.saturation_dim(k).unwrap(), t.ideal_dim(k));
        }
        let triangle = [ProjPoint::from_ints(1, 0, 0), ProjPoint::from_ints(0, 1, 0), ProjPoint::from_ints(0, 0, 1)]
            .map(Option::unwrap);
        for k in 0..6 {
            assert_eq!(t.saturation_dim(k as i64).unwrap(), forms_through(&triangle, k));
        }
        assert_eq!(t.defect(0).unwrap(), 2);
        assert_eq!(t.defect(1).unwrap(), 0);
        // one-node quartic: node at (0:0:1)
        let f = p("x*y*z^2+x^4+y^4");
        let j = Jacobian::new(&f).unwrap();
        assert_eq!(j.tau().unwrap(), 1);
        let node = [ProjPoint::origin()];
        for k in 0..=7u32 {
            assert_eq!(j.saturation_dim(k as i64).unwrap(), forms_through(&node, k), "k = {k}");
        }
        for k in 2..8 {
            assert_eq!(j.defect(k).unwrap(), 0);
        }
    }

    #[test]
    fn saturation_matches_direct_colon() {
        for s in [
            "x*y*z",
            "y^2*z-x^3",
            "y^2*z-x^2*(x+z)",
            "x*y*z^2+x^4+y^4",
            "(x^2+y^2)^3+(y^3+z^3)^2",
            "x^2*y^2*z^2+y^6+z^6",
        ] {
            let j = jac(s);
            let top = j.top_degree() + 1;
            for k in 0..=top {
                let n = top + 1 - k;
                let direct = j.colon_dim(k, n);
                assert_eq!(direct, j.saturation_dim(k as i64).unwrap(), "{s}, k = {k}");
                assert_eq!(direct, j.colon_dim(k, n + 1), "{s}, k = {k}");
            }
        }
    }

    #[test]
    fn c_abc_torsion_witness() {
        // y^b z^c lies in the saturation but not in J
        let f = p("x^3*y^2*z^2+y^7+z^7");
        let j = Jacobian::new(&f).unwrap();
        let w = p("y^2*z^2");
        assert!(!j.ideal_echelon(4).contains(&w.to_sparse()));
        assert!(j.h0m_dim(4).unwrap() >= 1);
        let sat = j.sat_basis(4).unwrap();
        let e = Echelon::new(dim_s(4), sat.iter().map(HPoly::to_sparse));
        assert!(e.contains(&w.to_sparse()));
        assert_eq!(e.rank(), j.saturation_dim(4).unwrap());
    }

    #[test]
    fn span_equality() {
        let f = p("x^3*y+y^3*z+z^4");
        assert!(jacobian_span_equal(&f, &f.scale(&Rational::from_integer(5.into()))).unwrap());
        assert!(jacobian_span_equal(&p("x^4+y^4+z^4"), &p("x^4+y^4+2z^4")).unwrap());
        assert!(!jacobian_span_equal(&p("x^3+y^3+z^3"), &p("x^3+y^3+z^3+x*y*z")).unwrap());
        assert!(matches!(
            jacobian_span_equal(&p("x^3"), &p("x^4")),
            Err(SyzygyError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_kernel() {
        let t = jac("x*y*z");
        assert_eq!(t.h0m_mult_kernel(&p("x^2+y*z"), 1).unwrap(), 0);
        let f = p("x*y*z^2+x^4+y^4");
        let j = Jacobian::new(&f).unwrap();
        let g = f.partials()[0].clone();
        let generic = p("x^3+2y^3+3z^3-x*y*z+5x^2*z");
        for m in 0..=7 {
            let h = j.h0m_dim(m as i64).unwrap();
            assert_eq!(j.h0m_mult_kernel(&g, m).unwrap(), h);
            // a general g has maximal rank
            let target = j.h0m_dim(m as i64 + 3).unwrap();
            assert_eq!(j.h0m_mult_kernel(&generic, m).unwrap(), h.saturating_sub(target), "m = {m}");
        }
        assert!(matches!(j.h0m_mult_kernel(&p("x^2"), 1), Err(SyzygyError::DegreeMismatch { .. })));
    }

    fn line() -> impl Strategy<Value = HPoly> {
        (-3i64..4, -3i64..4, -3i64..4).prop_filter_map("nonzero", |(a, b, c)| {
            let l = HPoly::linear(&Rational::from_integer(a.into()), &Rational::from_integer(b.into()), &Rational::from_integer(c.into()));
            (!l.is_zero()).then_some(l)
        })
    }

    /// Products of pairwise distinct lines: reduced curves with many singularities.
    fn arrangement() -> impl Strategy<Value = HPoly> {
        prop::collection::vec(line(), 3..6).prop_filter_map("distinct lines", |ls| {
            for i in 0..ls.len() {
                for j in 0..i {
                    if ls[i].is_proportional(&ls[j]) {
                        return None;
                    }
                }
            }
            Some(ls.iter().skip(1).fold(ls[0].clone(), |acc, l| &acc * l))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn arrangement_invariants(f in arrangement()) {
            let j = Jacobian::new(&f).unwrap();
            let d = j.degree();
            let tau = j.tau().unwrap();
            let mdr = j.mdr().unwrap().degree().unwrap();
            prop_assert_eq!(j.ct().unwrap(), mdr + d - 2);
            prop_assert!(mdr <= d - 2 || d == 3);
            for k in 0..=(j.top_degree() as i64 + 3) {
                let h = j.h0m_dim(k).unwrap();
                prop_assert!(j.saturation_dim(k).unwrap() <= dim_s(k));
                if k > j.top_degree() as i64 {
                    prop_assert_eq!(h, 0);
                }
            }
            for m in 0..d {
                let basis = j.ar_basis(m);
                prop_assert_eq!(basis.len(), j.ar_dim(m as i64));
                for r in basis {
                    prop_assert!(r.apply(j.partials()).is_zero());
                }
            }
            prop_assert!(j.milnor_dim(j.top_degree() + 5) == tau);
        }
    }
}
