//! Catalog-wide property checks shared by the integration targets. Each
//! check returns the list of violations (empty when the property holds).

#![allow(dead_code)]

use num_traits::One;

use planecurve::curvecat::{catalog, CurveRecord};
use planecurve::exactlin::Rational;
use planecurve::logbundle::{
    discriminant, freeness, genus_sum_check, h0_tc, h1_tc, is_stable, split_h0, stability_sufficient,
};
use planecurve::ring3::dim_s;
use planecurve::singcat::{alpha_c, declared_tau};
use planecurve::syzygy::{smooth_milnor_dim, Jacobian, Mdr};

pub struct Entry {
    pub curve: CurveRecord,
    pub jac: Jacobian,
}

pub fn entries() -> Vec<Entry> {
    catalog()
        .into_iter()
        .map(|curve| {
            let jac = Jacobian::new(&curve.f).expect("catalog curves have degree >= 2");
            Entry { curve, jac }
        })
        .collect()
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn singular(e: &Entry) -> bool {
    !e.curve.sings.is_empty()
}

/// Declared singularities exist and are all weighted homogeneous.
fn weighted_homogeneous(e: &Entry) -> bool {
    singular(e) && e.curve.sings.iter().all(|s| s.stype.is_weighted_homogeneous())
}

fn nodal(e: &Entry) -> bool {
    singular(e) && e.curve.sings.iter().all(|s| s.stype.is_node())
}

pub type Check = fn(&[Entry]) -> Vec<String>;

/// `AR(f)_m = 0` for `m < alpha_C d - 2`.
pub fn vanishing_theorem(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es.iter().filter(|e| weighted_homogeneous(e)) {
        let alpha = alpha_c(&e.curve).unwrap();
        let bound = &alpha * rat(e.curve.degree() as i64) - rat(2);
        let mut m = 0i64;
        while rat(m) < bound {
            if e.jac.ar_dim(m) != 0 {
                bad.push(format!("{}: AR_{m} != 0 below alpha d - 2 = {bound}", e.curve.name));
            }
            m += 1;
        }
    }
    bad
}

pub fn ct_equals_mdr_plus_d_minus_2(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es.iter().filter(|e| singular(e)) {
        let d = e.curve.degree();
        match (e.jac.mdr(), e.jac.ct()) {
            (Ok(Mdr::Degree(r)), Ok(ct)) if ct == r + d - 2 => {}
            (m, c) => bad.push(format!("{}: mdr {m:?}, ct {c:?}", e.curve.name)),
        }
    }
    bad
}

/// `ct >= (alpha_C + 1) d - 4` and `defect_k = 0` for `k >= (2 - alpha_C) d - 2`.
pub fn position_bounds(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es.iter().filter(|e| weighted_homogeneous(e)) {
        let d = rat(e.curve.degree() as i64);
        let alpha = alpha_c(&e.curve).unwrap();
        let ct = e.jac.ct().unwrap();
        let lower = (&alpha + Rational::one()) * &d - rat(4);
        if rat(ct as i64) < lower {
            bad.push(format!("{}: ct {ct} < {lower}", e.curve.name));
        }
        let from = (rat(2) - &alpha) * &d - rat(2);
        let start = from.ceil().to_integer().try_into().unwrap_or(0i64).max(0);
        for k in start..=start + e.jac.top_degree() as i64 {
            if e.jac.defect(k).unwrap() != 0 {
                bad.push(format!("{}: defect_{k} != 0 beyond {from}", e.curve.name));
            }
        }
    }
    bad
}

/// `x f_x + y f_y + z f_z = d f`.
pub fn euler_relation(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter_map(|e| {
            let f = &e.curve.f;
            let [fx, fy, fz] = f.partials();
            let x = planecurve::ring3::HPoly::x();
            let y = planecurve::ring3::HPoly::y();
            let z = planecurve::ring3::HPoly::z();
            let lhs = &(&(&x * &fx) + &(&y * &fy)) + &(&z * &fz);
            (lhs != f.scale(&rat(f.degree() as i64))).then(|| format!("{}: Euler relation fails", e.curve.name))
        })
        .collect()
}

/// The closed Koszul formula agrees with the rank of the Koszul map for `m <= 3d`.
pub fn koszul_formula(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es {
        for m in 0..=3 * e.curve.degree() {
            if let Err(err) = e.jac.koszul_dim(m) {
                bad.push(format!("{}: m={m}: {err}", e.curve.name));
            }
        }
    }
    bad
}

/// For nodal curves with `r` declared components, `dim AR(f)_{d-2} = r - 1`.
pub fn nodal_component_count(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter(|e| nodal(e))
        .filter_map(|e| {
            let r = e.curve.component_count()? as usize;
            let ar = e.jac.ar_dim(e.curve.degree() as i64 - 2);
            (ar + 1 != r).then(|| format!("{}: AR_(d-2) = {ar}, r = {r}", e.curve.name))
        })
        .collect()
}

pub fn nodal_genus_sums(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    let mut seen = 0;
    for e in es.iter().filter(|e| nodal(e)) {
        seen += 1;
        match genus_sum_check(&e.curve, &e.jac) {
            Ok(g) if g.pass => {}
            other => bad.push(format!("{}: {other:?}", e.curve.name)),
        }
    }
    if seen < 5 {
        bad.push(format!("only {seen} nodal catalog entries"));
    }
    bad
}

pub fn stable_implies_not_free(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter(|e| is_stable(&e.jac) && freeness(&e.jac).unwrap().free)
        .map(|e| format!("{}: stable and free", e.curve.name))
        .collect()
}

pub fn freeness_methods_agree(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    let mut free = Vec::new();
    for e in es {
        let v = freeness(&e.jac).unwrap();
        if !v.method_agreement {
            bad.push(format!("{}: saturation {} vs exponents {}", e.curve.name, v.saturated, v.exponent_test));
        }
        if v.free {
            free.push(e.curve.name.clone());
        }
    }
    if free != ["triangle", "a1_arrangement", "dual_hesse"] {
        bad.push(format!("free curves are {free:?}"));
    }
    bad
}

/// `dim AR_{d-2} = h^1(T(d-3)) - [C(d-1,2) - tau]` and
/// `dim AR_{d-3} = h^1(T(d-4)) - [C(d,2) - tau]`.
pub fn log_sequence_identities(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es {
        let d = e.curve.degree() as i64;
        let tau = e.jac.tau().unwrap() as i64;
        let two = e.jac.ar_dim(d - 2) as i64;
        let h1 = h1_tc(&e.jac, d - 3).unwrap() as i64;
        if two != h1 - (choose2(d - 1) - tau) {
            bad.push(format!("{}: AR_(d-2) = {two}, h1(d-3) = {h1}", e.curve.name));
        }
        let three = e.jac.ar_dim(d - 3) as i64;
        let h1 = h1_tc(&e.jac, d - 4).unwrap() as i64;
        if three != h1 - (choose2(d) - tau) {
            bad.push(format!("{}: AR_(d-3) = {three}, h1(d-4) = {h1}", e.curve.name));
        }
    }
    bad
}

/// `dim M(f)_k` follows the smooth Hilbert function up to `ct` and leaves it at `ct + 1`.
pub fn milnor_matches_smooth_until_ct(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es.iter().filter(|e| singular(e)) {
        let d = e.curve.degree();
        let ct = e.jac.ct().unwrap();
        for k in 0..=ct {
            if e.jac.milnor_dim(k) != smooth_milnor_dim(d, k) {
                bad.push(format!("{}: M_{k} differs below ct = {ct}", e.curve.name));
            }
        }
        if e.jac.milnor_dim(ct + 1) == smooth_milnor_dim(d, ct + 1) {
            bad.push(format!("{}: M_(ct+1) still smooth", e.curve.name));
        }
    }
    bad
}

pub fn tau_equals_declared_sum(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter_map(|e| {
            let tau = e.jac.tau().unwrap() as u32;
            let declared = declared_tau(&e.curve);
            (tau != declared).then(|| format!("{}: tau {tau}, declared {declared}", e.curve.name))
        })
        .collect()
}

/// Torsion vanishes in every degree exactly for the free curves.
pub fn torsion_free_iff_free(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter_map(|e| {
            let top = e.jac.top_degree() as i64;
            let zero = (0..=top).all(|k| e.jac.h0m_dim(k).unwrap() == 0);
            let free = freeness(&e.jac).unwrap().free;
            (zero != free).then(|| format!("{}: torsion-free {zero}, free {free}", e.curve.name))
        })
        .collect()
}

/// For simple singularities, the Arnold-exponent inequality implies stability.
pub fn alpha_criterion_sound(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter(|e| singular(e) && e.curve.sings.iter().all(|s| s.stype.is_simple()))
        .filter(|e| stability_sufficient(e.curve.degree(), &alpha_c(&e.curve).unwrap()) && !is_stable(&e.jac))
        .map(|e| format!("{}: alpha criterion holds but not stable", e.curve.name))
        .collect()
}

/// Free curves with exponents `(a, b)` have the sections of `O(-a) + O(-b)`.
pub fn free_split_sections(es: &[Entry]) -> Vec<String> {
    let mut bad = Vec::new();
    for e in es {
        let v = freeness(&e.jac).unwrap();
        let Some((a, b)) = v.exponents else { continue };
        for k in -3..=e.curve.degree() as i64 {
            let split = split_h0(a, b, k);
            let direct = dim_s(k + 1 - a as i64) + dim_s(k + 1 - b as i64);
            if h0_tc(&e.jac, k) != split || split != direct {
                bad.push(format!("{}: h0(T({k})) = {}, split {split}", e.curve.name, h0_tc(&e.jac, k)));
            }
        }
    }
    bad
}

pub fn stable_has_negative_discriminant(es: &[Entry]) -> Vec<String> {
    es.iter()
        .filter(|e| is_stable(&e.jac))
        .filter_map(|e| {
            let disc = discriminant(e.curve.degree() as i64, e.jac.tau().unwrap() as i64);
            (disc >= 0).then(|| format!("{}: stable with discriminant {disc}", e.curve.name))
        })
        .collect()
}

/// All the checks above, by name.
pub fn property_suite() -> Vec<(&'static str, Check)> {
    vec![
        ("vanishing theorem", vanishing_theorem as Check),
        ("ct = mdr + d - 2", ct_equals_mdr_plus_d_minus_2),
        ("position bounds", position_bounds),
        ("Euler relation", euler_relation),
        ("Koszul formula vs rank", koszul_formula),
        ("nodal AR_(d-2) = r - 1", nodal_component_count),
        ("nodal genus sums", nodal_genus_sums),
        ("stable implies not free", stable_implies_not_free),
        ("freeness methods agree", freeness_methods_agree),
        ("log sequence identities", log_sequence_identities),
        ("Milnor algebra smooth until ct", milnor_matches_smooth_until_ct),
        ("tau = sum of local tau", tau_equals_declared_sum),
        ("torsion-free iff free", torsion_free_iff_free),
        ("alpha criterion soundness", alpha_criterion_sound),
        ("free split sections", free_split_sections),
        ("stable => negative discriminant", stable_has_negative_discriminant),
    ]
}
