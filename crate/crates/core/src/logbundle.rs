//! Numerical invariants of the rank-two bundle `T<C>` of logarithmic vector
//! fields along `C`.
//!
//! Cohomology is read off the Jacobian data:
//! `h^0(T<C>(k)) = dim AR(f)_{k+1}` and `h^1(T<C>(k)) = dim H^0_m(M(f))_{d+k}`,
//! with `h^2` then fixed by the Euler characteristic.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvecat::CurveRecord;
use crate::exactlin::Rational;
use crate::ring3::dim_s;
use crate::singcat::verify_declared;
use crate::syzygy::{Jacobian, Mdr, SyzygyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("h^2 came out negative ({0}) at twist {1}")]
    NegativeH2(i64, i64),
    #[error("curve is not a verified nodal curve")]
    NotNodal,
    #[error("component genera are not declared")]
    MissingGenera,
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
}

/// `n (n - 1) / 2`, the polynomial extension of `C(n, 2)`.
fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNumerics {
    pub d: i64,
    pub tau: i64,
    pub k: i64,
    pub c1: i64,
    pub c2: i64,
    pub chi: i64,
    pub discriminant: i64,
}

pub fn numerics(d: i64, tau: i64, k: i64) -> BundleNumerics {
    BundleNumerics {
        d,
        tau,
        k,
        c1: 3 - d + 2 * k,
        c2: d * d - (3 + k) * d + 3 + 3 * k + k * k - tau,
        chi: 3 * choose2(k + 3) - choose2(d + k + 2) + tau,
        discriminant: discriminant(d, tau),
    }
}

/// `c1^2 - 4 c2`, the same for every twist: `4 tau - 3 (d-1)^2`.
pub fn discriminant(d: i64, tau: i64) -> i64 {
    4 * tau - 3 * (d - 1) * (d - 1)
}

/// `h^0(T<C>(k)) = dim AR(f)_{k+1}`.
pub fn h0_tc(j: &Jacobian, k: i64) -> usize {
    j.ar_dim(k + 1)
}

/// `h^1(T<C>(k)) = dim (J~/J)_{d+k}`, zero outside `[0, 3(d-2)]`.
pub fn h1_tc(j: &Jacobian, k: i64) -> Result<usize, BundleError> {
    let deg = j.degree() as i64 + k;
    if deg < 0 || deg > j.top_degree() as i64 {
        return Ok(0);
    }
    Ok(j.h0m_dim(deg)?)
}

/// `h^2(T<C>(k)) = chi - h^0 + h^1`.
pub fn h2_tc(j: &Jacobian, k: i64) -> Result<usize, BundleError> {
    let tau = j.tau()? as i64;
    let chi = numerics(j.degree() as i64, tau, k).chi;
    let h2 = chi - h0_tc(j, k) as i64 + h1_tc(j, k)? as i64;
    if h2 < 0 {
        return Err(BundleError::NegativeH2(h2, k));
    }
    Ok(h2 as usize)
}

/// Largest `m` that the stability test has to look at: `floor((d-1)/2)`.
pub fn stability_bound(d: u32) -> u32 {
    (d - 1) / 2
}

/// Stable iff `AR(f)_m = 0` for all `m <= (d-1)/2`.
pub fn is_stable(j: &Jacobian) -> bool {
    (0..=stability_bound(j.degree()) as i64).all(|m| j.ar_dim(m) == 0)
}

/// Sufficient condition for stability from the Arnold exponent:
/// `d > 3/(2 alpha - 1)` for odd `d`, `d > 2/(2 alpha - 1)` for even `d`.
/// Inconclusive (`false`) when `alpha <= 1/2`.
pub fn stability_sufficient(d: u32, alpha: &Rational) -> bool {
    let gap = alpha * Rational::from_integer(2.into()) - Rational::one();
    if gap <= Rational::zero() {
        return false;
    }
    let num = if d % 2 == 1 { 3 } else { 2 };
    Rational::from_integer(d.into()) > Rational::from_integer(num.into()) / gap
}

/// A free curve is never stable, so the same inequality rules out freeness.
pub fn not_free_sufficient(d: u32, alpha: &Rational) -> bool {
    stability_sufficient(d, alpha)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub free: bool,
    /// `(a, b)` with `a <= b`, present when the curve is free.
    pub exponents: Option<(u32, u32)>,
    pub method_agreement: bool,
    /// Saturation test: `J~ = J`.
    pub saturated: bool,
    /// Exponent test: `r = mdr <= (d-1)/2`, `r (d-1-r) = (d-1)^2 - tau`, `AR_r != 0`.
    pub exponent_test: bool,
}

pub fn freeness(j: &Jacobian) -> Result<FreenessVerdict, BundleError> {
    let d = j.degree();
    let mut saturated = true;
    for k in 0..=j.top_degree() as i64 {
        if j.h0m_dim(k)? != 0 {
            saturated = false;
            break;
        }
    }
    let tau = j.tau()? as i64;
    let candidate = match j.mdr()? {
        Mdr::Degree(r) if 2 * r < d => {
            let (a, b) = (r, d - 1 - r);
            let ok = (a as i64) * (b as i64) == ((d - 1) as i64).pow(2) - tau && j.ar_dim(a as i64) >= 1;
            ok.then_some((a, b))
        }
        _ => None,
    };
    let exponent_test = candidate.is_some();
    Ok(FreenessVerdict {
        free: saturated,
        exponents: if saturated { candidate } else { None },
        method_agreement: saturated == exponent_test,
        saturated,
        exponent_test,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCheck {
    pub h1: usize,
    pub expected: u32,
    pub pass: bool,
}

/// For a nodal curve, `h^1(T<C>(d-3))` equals the sum of the genera of the
/// normalized components; also checked against
/// `dim AR(f)_{d-2} = h^1(T<C>(d-3)) - [C(d-1,2) - tau]`.
pub fn genus_sum_check(curve: &CurveRecord, j: &Jacobian) -> Result<GenusCheck, BundleError> {
    if curve.sings.is_empty() || !curve.sings.iter().all(|s| s.stype.is_node()) || !verify_declared(curve).passed {
        return Err(BundleError::NotNodal);
    }
    let genera = curve.genera.as_ref().ok_or(BundleError::MissingGenera)?;
    let expected: u32 = genera.iter().sum();
    let d = j.degree() as i64;
    let h1 = h1_tc(j, d - 3)?;
    let tau = j.tau()? as i64;
    let logseq = j.ar_dim(d - 2) as i64 == h1 as i64 - (choose2(d - 1) - tau);
    Ok(GenusCheck {
        h1,
        expected,
        pass: h1 as u32 == expected && logseq,
    })
}

/// `h^i(T<C>(k))` for `k` in a range, as `(k, h0, h1, h2)` rows.
pub fn cohomology_table(j: &Jacobian, range: std::ops::RangeInclusive<i64>) -> Result<Vec<(i64, usize, usize, usize)>, BundleError> {
    range
        .map(|k| Ok((k, h0_tc(j, k), h1_tc(j, k)?, h2_tc(j, k)?)))
        .collect()
}

/// Sections of `O(-a) + O(-b)` twisted by `k + 1`.
pub fn split_h0(a: u32, b: u32, k: i64) -> usize {
    dim_s(k + 1 - a as i64) + dim_s(k + 1 - b as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvecat::lookup;
    use crate::ring3::parse;

    fn jac(s: &str) -> Jacobian {
        Jacobian::new(&parse(s).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn numerics_examples() {
        let n = numerics(3, 1, 0);
        assert_eq!(n.c1, 0);
        assert_eq!(n.chi, 0);
        assert_eq!(numerics(3, 3, 0).discriminant, 0);
        assert_eq!(numerics(6, 12, 0).discriminant, -27);
        for d in 2..9i64 {
            for tau in 0..10 {
                for k in -4..6 {
                    let n = numerics(d, tau, k);
                    assert_eq!(n.c1 * n.c1 - 4 * n.c2, n.discriminant);
                    if k == d - 3 {
                        assert_eq!(n.chi, -(choose2(d - 1) - tau));
                    }
                    // Riemann-Roch for a rank-two bundle on the plane
                    assert_eq!(n.chi, (n.c1 * n.c1 - 2 * n.c2 + 3 * n.c1 + 4) / 2);
                }
            }
        }
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0_tc(&jac("x*y*z"), 0), 2);
        assert_eq!(h0_tc(&jac("y^2*z-x^2*(x+z)"), 0), 0);
        assert!(h0_tc(&jac("y^2*z-x^3"), 0) >= 1);
        assert_eq!(h0_tc(&jac("x*y*z"), -3), 0);
    }

    #[test]
    fn h1_h2_examples() {
        let t = jac("x*y*z");
        for k in -3..=3 {
            assert_eq!(h1_tc(&t, k).unwrap(), 0);
        }
        assert_eq!(h1_tc(&jac("y^2*z-x^2*(x+z)"), 0).unwrap(), 0);
        let conics = jac("(x^2+y^2-2z^2)*(x^2-2y^2+z^2)");
        assert_eq!(h1_tc(&conics, 1).unwrap(), 0);
        for s in ["x*y*z", "y^2*z-x^2*(x+z)", "(x^2+y^2)^3+(y^3+z^3)^2", "x^3+y^3+z^3"] {
            let j = jac(s);
            assert_eq!(h2_tc(&j, j.degree() as i64 - 3).unwrap(), 0, "{s}");
        }
        // Serre duality: h^2(T(k)) = h^0(T(d-6-k))
        for s in ["x*y*z", "(x^2+y^2)^3+(y^3+z^3)^2", "x*y*z^2+x^4+y^4"] {
            let j = jac(s);
            let d = j.degree() as i64;
            for k in -3..=3 * (d - 2) {
                assert_eq!(h2_tc(&j, k).unwrap(), h0_tc(&j, d - 6 - k), "{s} k={k}");
            }
        }
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&jac("y^2*z-x^2*(x+z)")));
        assert!(!is_stable(&jac("y^2*z-x^3")));
        assert!(!is_stable(&jac("(x^3+y^3+z^3)^3+(x^3+2y^3+3z^3)^3")));
        assert!(stability_sufficient(5, &q(1, 1)));
        assert!(stability_sufficient(4, &q(5, 6)));
        assert!(!stability_sufficient(9, &q(2, 3)));
        assert!(!stability_sufficient(20, &q(1, 2)));
        assert!(not_free_sufficient(4, &q(1, 1)));
        assert!(not_free_sufficient(10, &q(2, 3)));
        assert!(!not_free_sufficient(9, &q(2, 3)));
    }

    #[test]
    fn freeness_examples() {
        let v = freeness(&jac("x*y*z")).unwrap();
        assert!(v.free && v.method_agreement);
        assert_eq!(v.exponents, Some((1, 1)));
        let v = freeness(&jac("(x^2-y^2)*(y^2-z^2)*(x^2-z^2)")).unwrap();
        assert_eq!(v.exponents, Some((2, 3)));
        assert!(v.method_agreement);
        let v = freeness(&jac("(x^3-y^3)*(y^3-z^3)*(x^3-z^3)")).unwrap();
        assert_eq!(v.exponents, Some((4, 4)));
        assert!(v.method_agreement);
        for s in ["y^2*z-x^2*(x+z)", "y^2*z-x^3", "x^3+y^3+z^3"] {
            let v = freeness(&jac(s)).unwrap();
            assert!(!v.free && v.method_agreement && v.exponents.is_none(), "{s}");
        }
    }

    #[test]
    fn free_curves_have_split_sections() {
        for s in ["x*y*z", "(x^2-y^2)*(y^2-z^2)*(x^2-z^2)", "(x^3-y^3)*(y^3-z^3)*(x^3-z^3)"] {
            let j = jac(s);
            let (a, b) = freeness(&j).unwrap().exponents.unwrap();
            for k in -3..=j.degree() as i64 {
                assert_eq!(h0_tc(&j, k), split_h0(a, b, k), "{s} k={k}");
            }
        }
    }

    #[test]
    fn genus_sums() {
        for (name, h1) in [("nodal_cubic", 0), ("two_conics", 0), ("two_node_quartic", 1), ("one_node_quartic", 2)] {
            let rec = lookup(name).unwrap();
            let j = Jacobian::new(&rec.f).unwrap();
            let g = genus_sum_check(&rec, &j).unwrap();
            assert_eq!((g.h1, g.expected, g.pass), (h1, h1 as u32, true), "{name}");
        }
        let z = lookup("zariski_sextic").unwrap();
        let j = Jacobian::new(&z.f).unwrap();
        assert_eq!(genus_sum_check(&z, &j), Err(BundleError::NotNodal));
    }
}
