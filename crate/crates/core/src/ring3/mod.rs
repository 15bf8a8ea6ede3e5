//! The graded ring `S = Q[x,y,z]`.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with
//! `x > y > z`; this order fixes the row and column indexing of every matrix
//! built in the crate.

mod gcd;
pub mod ideal;
mod irred;
mod parse;
mod point;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{QMatrix, Rational, SparseVec};

pub use gcd::{exact_div, gcd_many};
pub use irred::certify_irreducible;
pub use parse::parse;
pub use point::ProjPoint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous (degrees {0} and {1} both occur)")]
    NotHomogeneous(u32, u32),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("every input polynomial is zero")]
    AllZero,
    #[error("coordinate change matrix is singular")]
    SingularMatrix,
}

/// Monomial `x^ex y^ey z^ez`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { ex: 0, ey: 0, ez: 0 };

    pub fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Mono { ex, ey, ez }
    }

    pub fn degree(&self) -> u32 {
        self.ex + self.ey + self.ez
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.ex, self.ey, self.ez]
    }

    pub fn from_exps(e: [u32; 3]) -> Self {
        Mono::new(e[0], e[1], e[2])
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono::new(self.ex + other.ex, self.ey + other.ey, self.ez + other.ez)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.ex <= other.ex && self.ey <= other.ey && self.ez <= other.ez
    }

    /// Position of this monomial in `mono_basis(self.degree())`.
    pub fn index(&self) -> usize {
        let s = (self.ey + self.ez) as usize;
        s * (s + 1) / 2 + self.ez as usize
    }
}

impl Ord for Mono {
    /// Graded lex with `x > y > z`; `Greater` means earlier in the basis.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.ex.cmp(&other.ex))
            .then(self.ey.cmp(&other.ey))
            .then(self.ez.cmp(&other.ez))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.ex), ("y", self.ey), ("z", self.ez)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `dim S_k = C(k+2, 2)`; zero for negative `k`.
pub fn dim_s(k: i64) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 1) * (k + 2) / 2
    }
}

/// All monomials of degree `k`, largest first.
pub fn mono_basis(k: u32) -> Vec<Mono> {
    let mut out = Vec::with_capacity(dim_s(k as i64));
    for ex in (0..=k).rev() {
        for ey in (0..=k - ex).rev() {
            out.push(Mono::new(ex, ey, k - ex - ey));
        }
    }
    out
}

/// Homogeneous polynomial of a fixed degree with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HPoly {
    degree: u32,
    terms: BTreeMap<Mono, Rational>,
}

impl HPoly {
    pub fn zero(degree: u32) -> Self {
        HPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let mut p = Self::zero(m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn x() -> Self {
        Self::monomial(Mono::new(1, 0, 0), Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(Mono::new(0, 1, 0), Rational::one())
    }

    pub fn z() -> Self {
        Self::monomial(Mono::new(0, 0, 1), Rational::one())
    }

    /// Linear form `a x + b y + c z`.
    pub fn linear(a: &Rational, b: &Rational, c: &Rational) -> Self {
        Self::from_terms(
            1,
            [
                (Mono::new(1, 0, 0), a.clone()),
                (Mono::new(0, 1, 0), b.clone()),
                (Mono::new(0, 0, 1), c.clone()),
            ],
        )
    }

    /// Collects terms, summing duplicates. Panics if a monomial has the wrong degree.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Mono, Rational)>) -> Self {
        let mut p = Self::zero(degree);
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "monomial {m} has wrong degree");
            p.add_term(m, c);
        }
        p
    }

    /// Coefficient vector over `mono_basis(degree)`.
    pub fn from_coeffs(degree: u32, coeffs: &[Rational]) -> Self {
        let basis = mono_basis(degree);
        assert_eq!(coeffs.len(), basis.len());
        Self::from_terms(degree, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
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

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coeff_vector(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim_s(self.degree as i64)];
        for (m, c) in &self.terms {
            v[m.index()] = c.clone();
        }
        v
    }

    /// Coefficients as a sparse integer vector indexed by `Mono::index`,
    /// scaled to be primitive. Spans are unaffected by the scaling.
    pub fn to_sparse(&self) -> SparseVec {
        let mut v = SparseVec::from_rationals(self.terms.iter().map(|(m, c)| (m.index(), c)));
        v.make_primitive();
        v
    }

    pub fn scale(&self, c: &Rational) -> HPoly {
        if c.is_zero() {
            return HPoly::zero(self.degree);
        }
        HPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> HPoly {
        HPoly {
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> HPoly {
        let mut result = HPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative in variable `var` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, var: usize) -> HPoly {
        let degree = self.degree.saturating_sub(1);
        let mut out = HPoly::zero(degree);
        for (m, c) in &self.terms {
            let mut e = m.exps();
            if e[var] == 0 {
                continue;
            }
            let k = e[var];
            e[var] -= 1;
            out.add_term(Mono::from_exps(e), c * Rational::from_integer(k.into()));
        }
        out
    }

    /// `(f_x, f_y, f_z)`. Requires `degree >= 1`.
    pub fn partials(&self) -> [HPoly; 3] {
        assert!(self.degree >= 1, "partials of a constant");
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (v, e) in p.iter().zip(m.exps()) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc + t
        })
    }

    /// Value at the canonical representative of `p`.
    pub fn eval_at(&self, p: &ProjPoint) -> Rational {
        self.eval(p.coords())
    }

    /// Substitutes `(x,y,z) -> M (x,y,z)^T`, i.e. the variable `x` becomes
    /// the linear form given by the first row of `M`, and so on.
    pub fn linear_change(&self, m: &QMatrix) -> Result<HPoly, RingError> {
        assert!(m.rows() == 3 && m.cols() == 3, "coordinate change must be 3x3");
        m.inverse().map_err(|_| RingError::SingularMatrix)?;
        let forms: Vec<HPoly> = (0..3)
            .map(|i| HPoly::linear(m.get(i, 0), m.get(i, 1), m.get(i, 2)))
            .collect();
        let mut out = HPoly::zero(self.degree);
        let mut powers: Vec<Vec<HPoly>> = forms.iter().map(|l| vec![HPoly::one(), l.clone()]).collect();
        for (mono, c) in &self.terms {
            let mut t = HPoly::constant(c.clone());
            for (var, e) in mono.exps().into_iter().enumerate() {
                let e = e as usize;
                while powers[var].len() <= e {
                    let next = &powers[var][powers[var].len() - 1] * &forms[var];
                    powers[var].push(next);
                }
                t = &t * &powers[var][e];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_part(&self) -> HPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if self.leading_term().unwrap().1.is_negative() {
            g = -g;
        }
        let scale = Rational::new(den, g);
        self.scale(&scale)
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> HPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Whether `other` is a nonzero rational multiple of `self`.
    pub fn is_proportional(&self, other: &HPoly) -> bool {
        !self.is_zero() && !other.is_zero() && self.monic() == other.monic()
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            if *m == Mono::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly[{}]({})", self.degree, self)
    }
}

impl Serialize for HPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Add for &HPoly {
    type Output = HPoly;
    fn add(self, rhs: &HPoly) -> HPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "adding polynomials of different degree");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &HPoly {
    type Output = HPoly;
    fn sub(self, rhs: &HPoly) -> HPoly {
        self + &(-rhs)
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &HPoly {
    type Output = HPoly;
    fn mul(self, rhs: &HPoly) -> HPoly {
        let mut out = HPoly::zero(self.degree + rhs.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// `(f_x, f_y, f_z)`.
pub fn partials(f: &HPoly) -> [HPoly; 3] {
    f.partials()
}

/// Matrix of `h -> g*h` from `S_k` to `S_{k + deg g}` in the monomial bases.
pub fn mult_matrix(g: &HPoly, k: u32) -> QMatrix {
    let rows = dim_s((k + g.degree()) as i64);
    let cols = mono_basis(k);
    let mut m = QMatrix::zeros(rows, cols.len());
    for (j, mono) in cols.iter().enumerate() {
        for (gm, c) in &g.terms {
            m.set(gm.mul(mono).index(), j, c.clone());
        }
    }
    m
}

/// Sparse rows `{mu * g : mu in mono_basis(k)}` indexed by `Mono::index`
/// in degree `k + deg g`; every row is the primitive integer form.
pub fn multiples(g: &HPoly, k: u32) -> Vec<SparseVec> {
    let base = g.to_sparse();
    let basis = mono_basis(g.degree());
    let monos: Vec<Mono> = base.entries().iter().map(|(i, _)| basis[*i]).collect();
    mono_basis(k)
        .into_iter()
        .map(|mu| {
            SparseVec::from_pairs(
                monos
                    .iter()
                    .zip(base.entries())
                    .map(|(m, (_, c))| (m.mul(&mu).index(), c.clone())),
            )
        })
        .collect()
}

pub fn eval_at(f: &HPoly, p: &ProjPoint) -> Rational {
    f.eval_at(p)
}

pub fn linear_change(f: &HPoly, m: &QMatrix) -> Result<HPoly, RingError> {
    f.linear_change(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn p(s: &str) -> HPoly {
        parse(s).unwrap()
    }

    #[test]
    fn mono_basis_sizes_and_order() {
        assert_eq!(mono_basis(0), vec![Mono::ONE]);
        assert_eq!(
            mono_basis(1),
            vec![Mono::new(1, 0, 0), Mono::new(0, 1, 0), Mono::new(0, 0, 1)]
        );
        assert_eq!(mono_basis(4).len(), 15);
        for k in 0..9 {
            let b = mono_basis(k);
            assert_eq!(b.len(), dim_s(k as i64));
            for (i, m) in b.iter().enumerate() {
                assert_eq!(m.index(), i);
            }
            assert!(b.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn partials_examples() {
        let [fx, fy, fz] = partials(&p("x*y*z"));
        assert_eq!((fx, fy, fz), (p("y*z"), p("x*z"), p("x*y")));
        let [fx, fy, fz] = partials(&p("x^3+y^3+z^3"));
        assert_eq!((fx, fy, fz), (p("3x^2"), p("3y^2"), p("3z^2")));
        let [fx, fy, fz] = partials(&p("x^2y^2+z^4"));
        assert_eq!((fx, fy, fz), (p("2x*y^2"), p("2x^2y"), p("4z^3")));
    }

    #[test]
    fn mult_matrix_examples() {
        assert_eq!(mult_matrix(&HPoly::one(), 2), QMatrix::identity(6));
        let m = mult_matrix(&HPoly::x(), 0);
        assert_eq!(m, QMatrix::from_int_rows(&[vec![1], vec![0], vec![0]]));
        let m = mult_matrix(&p("x+y"), 1);
        assert_eq!((m.rows(), m.cols()), (6, 3));
        assert_eq!(m.column(0), p("x^2+x*y").coeff_vector());
    }

    #[test]
    fn eval_examples() {
        let pt = ProjPoint::new([q(0), q(0), q(1)]).unwrap();
        assert_eq!(eval_at(&HPoly::x(), &pt), q(0));
        let pt = ProjPoint::new([q(1), q(1), q(1)]).unwrap();
        assert_eq!(eval_at(&p("x*y*z"), &pt), q(1));
        let pt = ProjPoint::new([q(0), q(1), q(-1)]).unwrap();
        assert_eq!(eval_at(&p("(x^2+y^2)^3+(y^3+z^3)^2"), &pt), q(1));
    }

    #[test]
    fn linear_change_examples() {
        let f = p("x^3-2x*y*z+z^3");
        assert_eq!(linear_change(&f, &QMatrix::identity(3)).unwrap(), f);
        let swap = QMatrix::from_int_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(linear_change(&p("x^2"), &swap).unwrap(), p("y^2"));
        // y -> y + z moves (0:1:1)'s role: the image curve vanishes at (0:0:1)
        // exactly when yz(y-z) vanishes at (0:1:1)
        let m = QMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let g = linear_change(&p("y*z*(y-z)"), &m).unwrap();
        let origin = ProjPoint::new([q(0), q(0), q(1)]).unwrap();
        assert!(eval_at(&g, &origin).is_zero());
        let sing = QMatrix::from_int_rows(&[vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(linear_change(&f, &sing), Err(RingError::SingularMatrix));
    }

    fn poly_strategy(deg: u32) -> impl Strategy<Value = HPoly> {
        let n = dim_s(deg as i64);
        prop::collection::vec(-4i64..5, n)
            .prop_map(move |c| HPoly::from_coeffs(deg, &c.into_iter().map(q).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn mult_matrix_matches_product(g in poly_strategy(2), h in poly_strategy(3)) {
            let m = mult_matrix(&g, 3);
            prop_assert_eq!(m.mul_vec(&h.coeff_vector()), (&g * &h).coeff_vector());
        }

        #[test]
        fn print_parse_roundtrip(f in poly_strategy(4)) {
            prop_assume!(!f.is_zero());
            prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn euler_relation(f in poly_strategy(4)) {
            let [fx, fy, fz] = f.partials();
            let lhs = &(&(&HPoly::x() * &fx) + &(&HPoly::y() * &fy)) + &(&HPoly::z() * &fz);
            prop_assert_eq!(lhs, f.scale(&q(4)));
        }
    }
}
