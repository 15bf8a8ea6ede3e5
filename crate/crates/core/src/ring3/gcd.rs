//! Multivariate gcd over the integers, recursive in the variables.
//!
//! `Z[x,y,z]` is viewed as `(Z[y,z])[x]`; the gcd of the contents is found
//! recursively and the primitive parts go through a primitive
//! pseudo-remainder sequence in the main variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{HPoly, Mono, RingError};
use crate::exactlin::Rational;

type Exps = [u32; 3];

/// Integer polynomial in x, y, z; not necessarily homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct IPoly(BTreeMap<Exps, BigInt>);

impl IPoly {
    fn constant(c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([0, 0, 0], c);
        }
        IPoly(m)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn from_hpoly(f: &HPoly) -> Self {
        let p = f.primitive_part();
        IPoly(
            p.terms()
                .map(|(m, c)| {
                    debug_assert!(c.is_integer());
                    (m.exps(), c.to_integer())
                })
                .collect(),
        )
    }

    /// Degree in variable `v`.
    fn deg(&self, v: usize) -> u32 {
        self.0.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Lex-largest term (x before y before z).
    fn lead(&self) -> Option<(&Exps, &BigInt)> {
        self.0.iter().next_back()
    }

    fn add_term(&mut self, e: Exps, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    fn mul(&self, other: &IPoly) -> IPoly {
        let mut out = IPoly::default();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        out
    }

    fn sub(&self, other: &IPoly) -> IPoly {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(*e, -c);
        }
        out
    }

    fn shift(&self, v: usize, k: u32) -> IPoly {
        IPoly(
            self.0
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v] += k;
                    (e, c.clone())
                })
                .collect(),
        )
    }

    /// Coefficients with respect to variable `v`, keyed by the exponent of `v`.
    fn coeffs(&self, v: usize) -> BTreeMap<u32, IPoly> {
        let mut out: BTreeMap<u32, IPoly> = BTreeMap::new();
        for (e, c) in &self.0 {
            let mut rest = *e;
            rest[v] = 0;
            out.entry(e[v]).or_default().0.insert(rest, c.clone());
        }
        out
    }

    fn leading_coeff(&self, v: usize) -> IPoly {
        self.coeffs(v).into_iter().next_back().map(|(_, c)| c).unwrap_or_default()
    }

    /// Exact division; `None` if `b` does not divide `self`.
    fn div_exact(&self, b: &IPoly) -> Option<IPoly> {
        let (be, bc) = b.lead()?;
        let (be, bc) = (*be, bc.clone());
        let mut r = self.clone();
        let mut q = IPoly::default();
        while let Some((re, rc)) = r.lead() {
            if (0..3).any(|i| re[i] < be[i]) {
                return None;
            }
            let (qc, rem) = rc.div_rem(&bc);
            if !rem.is_zero() {
                return None;
            }
            let qe = [re[0] - be[0], re[1] - be[1], re[2] - be[2]];
            let term = IPoly(BTreeMap::from([(qe, qc.clone())]));
            r = r.sub(&term.mul(b));
            q.add_term(qe, qc);
        }
        Some(q)
    }

    fn negate_if_negative(self) -> IPoly {
        match self.lead() {
            Some((_, c)) if c.is_negative() => IPoly(self.0.into_iter().map(|(e, c)| (e, -c)).collect()),
            _ => self,
        }
    }
}

/// Gcd of the coefficients with respect to `v`; positive leading coefficient.
fn content(a: &IPoly, v: usize) -> IPoly {
    let mut g = IPoly::default();
    for c in a.coeffs(v).into_values() {
        g = gcd_from(&g, &c, v + 1);
        if g == IPoly::constant(BigInt::one()) {
            break;
        }
    }
    g
}

fn primitive(a: &IPoly, v: usize) -> IPoly {
    let c = content(a, v);
    a.div_exact(&c).expect("content divides").negate_if_negative()
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &IPoly, b: &IPoly, v: usize) -> IPoly {
    let db = b.deg(v);
    let lb = b.leading_coeff(v);
    let mut r = a.clone();
    while !r.is_zero() && r.deg(v) >= db {
        let dr = r.deg(v);
        let lr = r.leading_coeff(v);
        r = r.mul(&lb).sub(&lr.mul(&b.shift(v, dr - db)));
    }
    r
}

/// Gcd of polynomials that only involve variables `v..3`.
fn gcd_from(a: &IPoly, b: &IPoly, v: usize) -> IPoly {
    if a.is_zero() {
        return b.clone().negate_if_negative();
    }
    if b.is_zero() {
        return a.clone().negate_if_negative();
    }
    if v == 3 {
        let x = a.0.get(&[0, 0, 0]).cloned().unwrap_or_default();
        let y = b.0.get(&[0, 0, 0]).cloned().unwrap_or_default();
        return IPoly::constant(x.gcd(&y));
    }
    if a.deg(v) == 0 && b.deg(v) == 0 {
        return gcd_from(a, b, v + 1);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_from(&ca, &cb, v + 1);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.deg(v) < q.deg(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.deg(v) == 0 {
            // q is primitive and free of v, hence a unit up to sign
            return c;
        }
        let r = prem(&p, &q, v);
        if r.is_zero() {
            return c.mul(&primitive(&q, v)).negate_if_negative();
        }
        p = q;
        q = primitive(&r, v);
    }
}

fn to_hpoly(p: &IPoly, degree: u32) -> HPoly {
    HPoly::from_terms(
        degree,
        p.0.iter()
            .map(|(e, c)| (Mono::from_exps(*e), Rational::from_integer(c.clone()))),
    )
}

/// Gcd of a family of homogeneous polynomials, normalized to leading
/// coefficient 1 in the graded order. Degree 0 means coprime.
pub fn gcd_many(polys: &[HPoly]) -> Result<HPoly, RingError> {
    let mut g: Option<IPoly> = None;
    for f in polys.iter().filter(|f| !f.is_zero()) {
        let fi = IPoly::from_hpoly(f);
        g = Some(match g {
            None => fi,
            Some(prev) => gcd_from(&prev, &fi, 0),
        });
    }
    let g = g.ok_or(RingError::AllZero)?;
    let degree = g.0.keys().next().map_or(0, |e| e.iter().sum());
    Ok(to_hpoly(&g, degree).monic())
}

/// `f / g` if `g` divides `f` exactly over the rationals.
pub fn exact_div(f: &HPoly, g: &HPoly) -> Option<HPoly> {
    if g.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(HPoly::zero(f.degree().checked_sub(g.degree())?));
    }
    let fp = f.primitive_part();
    let gp = g.primitive_part();
    let q = IPoly::from_hpoly(&fp).div_exact(&IPoly::from_hpoly(&gp))?;
    let scale_f = fp.leading_term().unwrap().1 / f.leading_term().unwrap().1;
    let scale_g = gp.leading_term().unwrap().1 / g.leading_term().unwrap().1;
    Some(to_hpoly(&q, f.degree() - g.degree()).scale(&(scale_g / scale_f)))
}
