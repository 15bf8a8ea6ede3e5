//! Degree-wise linear algebra on homogeneous ideals given by generators.

use super::{dim_s, multiples, HPoly};
use crate::exactlin::Echelon;

/// Echelon form of `I_k` for `I = (gens)`.
pub fn ideal_echelon(gens: &[HPoly], k: u32) -> Echelon {
    let rows = gens
        .iter()
        .filter(|g| !g.is_zero() && g.degree() <= k)
        .flat_map(|g| multiples(g, k - g.degree()));
    Echelon::new(dim_s(k as i64), rows)
}

/// `dim I_k`.
pub fn ideal_dim(gens: &[HPoly], k: u32) -> usize {
    ideal_echelon(gens, k).rank()
}

/// Whether `f` lies in the ideal generated by `gens`.
pub fn in_ideal(f: &HPoly, gens: &[HPoly]) -> bool {
    f.is_zero() || ideal_echelon(gens, f.degree()).contains(&f.to_sparse())
}

/// Whether the generators have no common zero in the projective plane.
///
/// If `D` is the largest generator degree, an ideal without zeros contains a
/// regular sequence of three forms of degree `D`, hence all of `S_N` for
/// `N = 3D - 2`; the converse is immediate. One rank computation decides.
pub fn no_common_zeros(gens: &[HPoly]) -> bool {
    let Some(top) = gens.iter().filter(|g| !g.is_zero()).map(HPoly::degree).max() else {
        return false;
    };
    if top == 0 {
        return true;
    }
    let n = 3 * top - 2;
    ideal_dim(gens, n) == dim_s(n as i64)
}
