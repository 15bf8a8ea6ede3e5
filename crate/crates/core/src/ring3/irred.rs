//! Irreducibility certificates by restriction to lines and reduction mod p.
//!
//! If `f` factors over `Q`, so does its restriction `f(a + t b)` to any line,
//! and so does the reduction of that univariate polynomial modulo a prime
//! not dividing its leading coefficient. Finding one line and one prime where
//! the reduction has full degree and is irreducible therefore proves that `f`
//! is irreducible over `Q`. The converse search may fail; a failed search
//! proves nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::HPoly;

const PRIMES: [u64; 12] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157];

/// Dense polynomial over `F_p`, lowest coefficient first, trimmed.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn rem(a: &Fp, m: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let lead_inv = inv(m[dm], p);
    while r.len() > dm {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - dm;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    rem(&trim(out), m, p)
}

fn gcd(mut a: Fp, mut b: Fp, p: u64) -> Fp {
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `g` of degree `n` is irreducible iff `g | t^{p^n} - t` and
/// `gcd(t^{p^{n/r}} - t, g) = 1` for every prime `r | n`.
fn irreducible_mod_p(g: &Fp, p: u64) -> bool {
    let n = g.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    // frob[i] = t^{p^i} mod g
    let t: Fp = vec![0, 1];
    let mut frob = vec![rem(&t, g, p)];
    for _ in 0..n {
        let last = frob.last().unwrap().clone();
        let mut acc: Fp = vec![1];
        let mut base = last;
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, g, p);
            }
            base = mul_mod(&base, &base, g, p);
            e >>= 1;
        }
        frob.push(acc);
    }
    let minus_t = |h: &Fp| -> Fp {
        let mut h = h.clone();
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        trim(h)
    };
    if !minus_t(&frob[n]).is_empty() {
        return false;
    }
    (2..=n).filter(|r| n.is_multiple_of(*r) && (2..*r).all(|s| r % s != 0)).all(|r| {
        let h = minus_t(&frob[n / r]);
        gcd(g.clone(), h, p).len() == 1
    })
}

/// Integer coefficients of `f(a + t b)` in `t`, lowest first.
fn restrict(f: &HPoly, a: [i64; 3], b: [i64; 3]) -> Vec<BigInt> {
    let f = f.primitive_part();
    let d = f.degree() as usize;
    // each variable becomes a_i + t b_i
    let lin: Vec<Vec<BigInt>> = (0..3).map(|i| vec![BigInt::from(a[i]), BigInt::from(b[i])]).collect();
    let mul = |u: &[BigInt], v: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); u.len() + v.len() - 1];
        for (i, x) in u.iter().enumerate() {
            for (j, y) in v.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut total = vec![BigInt::zero(); d + 1];
    for (m, c) in f.terms() {
        let mut acc = vec![c.to_integer()];
        for (var, e) in m.exps().into_iter().enumerate() {
            for _ in 0..e {
                acc = mul(&acc, &lin[var]);
            }
        }
        for (i, v) in acc.into_iter().enumerate() {
            total[i] += v;
        }
    }
    total
}

/// Tries a fixed family of lines and primes; `true` is a proof of
/// irreducibility over `Q`, `false` means no certificate was found.
pub fn certify_irreducible(f: &HPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.degree() <= 1 {
        return true;
    }
    let d = f.degree() as usize;
    let lines = (0..12i64).map(|s| ([1, s + 2, 3 * s - 1], [s - 3, 1, 2 * s + 5]));
    for (a, b) in lines {
        let coeffs = restrict(f, a, b);
        if coeffs[d].is_zero() {
            continue;
        }
        for p in PRIMES {
            let pb = BigInt::from(p);
            let g: Fp = coeffs
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect();
            if g[d] == 0 {
                continue;
            }
            if irreducible_mod_p(&trim(g), p) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rational;
    use crate::ring3::parse;

    fn line_point(a: [i64; 3], b: [i64; 3], t: i64) -> [Rational; 3] {
        [0, 1, 2].map(|i| Rational::from_integer((a[i] + t * b[i]).into()))
    }

    #[test]
    fn restriction_agrees_with_evaluation() {
        let f = parse("x^3-2x*y*z+5z^3+y^2*z").unwrap();
        let (a, b) = ([1, 2, -1], [3, 0, 1]);
        let c = restrict(&f, a, b);
        for t in -3..4i64 {
            let v: BigInt = c.iter().rev().fold(BigInt::zero(), |acc, ci| acc * t + ci);
            assert_eq!(Rational::from_integer(v), f.eval(&line_point(a, b, t)));
        }
    }

    #[test]
    fn mod_p_irreducibility() {
        // t^2 + 1 is irreducible mod 103 (103 = 3 mod 4), reducible mod 101
        assert!(irreducible_mod_p(&vec![1, 0, 1], 103));
        assert!(!irreducible_mod_p(&vec![1, 0, 1], 101));
        // (t+1)(t^2+1) mod 103
        assert!(!irreducible_mod_p(&vec![1, 1, 1, 1], 103));
    }

    #[test]
    fn certificates() {
        for s in [
            "y^2*z-x^2*(x+z)",
            "y^2*z-x^3",
            "x^4+y^4+z^4",
            "(x^2+y^2)^3+(y^3+z^3)^2",
            "x^2*y^2*z^2+y^6+z^6",
        ] {
            assert!(certify_irreducible(&parse(s).unwrap()), "{s}");
        }
        for s in ["x*y*z", "(x^2+y^2-z^2)*(x^2-2y^2+z^2)", "x^3+y^3", "(x+y+z)^2*y"] {
            assert!(!certify_irreducible(&parse(s).unwrap()), "{s}");
        }
    }
}
