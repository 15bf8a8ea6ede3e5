//! Structural properties checked on every catalog curve.

mod common;

use std::sync::OnceLock;

use common::Entry;

fn entries() -> &'static [Entry] {
    static ENTRIES: OnceLock<Vec<Entry>> = OnceLock::new();
    ENTRIES.get_or_init(common::entries)
}

fn holds(check: common::Check) {
    let es = entries();
    assert!(es.len() >= 15);
    let bad = check(es);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn vanishing_theorem() {
    holds(common::vanishing_theorem);
}

#[test]
fn ct_equals_mdr_plus_d_minus_2() {
    holds(common::ct_equals_mdr_plus_d_minus_2);
}

#[test]
fn position_bounds() {
    holds(common::position_bounds);
}

#[test]
fn euler_relation() {
    holds(common::euler_relation);
}

#[test]
fn koszul_formula() {
    holds(common::koszul_formula);
}

#[test]
fn nodal_component_count() {
    holds(common::nodal_component_count);
}

#[test]
fn nodal_genus_sums() {
    holds(common::nodal_genus_sums);
}

#[test]
fn stable_implies_not_free() {
    holds(common::stable_implies_not_free);
}

#[test]
fn freeness_methods_agree() {
    holds(common::freeness_methods_agree);
}

#[test]
fn log_sequence_identities() {
    holds(common::log_sequence_identities);
}

#[test]
fn milnor_matches_smooth_until_ct() {
    holds(common::milnor_matches_smooth_until_ct);
}

#[test]
fn tau_equals_declared_sum() {
    holds(common::tau_equals_declared_sum);
}

#[test]
fn torsion_free_iff_free() {
    holds(common::torsion_free_iff_free);
}

#[test]
fn alpha_criterion_sound() {
    holds(common::alpha_criterion_sound);
}

#[test]
fn free_split_sections() {
    holds(common::free_split_sections);
}

#[test]
fn stable_has_negative_discriminant() {
    holds(common::stable_has_negative_discriminant);
}
