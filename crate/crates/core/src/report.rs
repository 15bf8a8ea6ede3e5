//! Full analysis of one curve, its JSON form, and the comparison of computed
//! values against the expectations stored with catalog entries.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvecat::{verify_record_with, CurveRecord};
use crate::logbundle::{
    freeness, genus_sum_check, h0_tc, h1_tc, h2_tc, is_stable, not_free_sufficient, numerics,
    stability_bound, stability_sufficient, BundleError, GenusCheck,
};
use crate::singcat::{alpha_c, nodes_and_cusps};
use crate::syzygy::{Jacobian, Mdr, SyzygyError};
use crate::torelli::{torelli_verdict, TorelliError, TorelliVerdict};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Torelli(#[from] TorelliError),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub name: String,
    pub degree: u32,
    pub f: String,
    pub irreducible: bool,
    pub components: Option<u32>,
    pub genera: Option<Vec<u32>>,
    pub singularities: Vec<String>,
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chern {
    pub c1: i64,
    pub c2: i64,
    pub discriminant: i64,
}

/// Dimensions in one degree `k`. `ar`, `er`, `milnor`, `torsion` and
/// `defect` are graded pieces of degree `k`; `h0`, `h1`, `h2` are the
/// cohomology of `T<C>(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub k: i64,
    pub ar: usize,
    pub er: usize,
    pub milnor: usize,
    pub torsion: usize,
    pub defect: i64,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilitySummary {
    pub stable: bool,
    pub bound: u32,
    /// Whether the Arnold-exponent inequality alone already proves stability.
    pub alpha_sufficient: Option<bool>,
    /// Whether the same inequality rules out freeness.
    pub alpha_not_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessSummary {
    pub free: bool,
    pub exponents: Option<(u32, u32)>,
    pub method_agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub curve: CurveSummary,
    pub verification: VerificationSummary,
    pub tau: u32,
    /// A degree, or `"inf"` when every relation is Koszul.
    pub mdr: String,
    /// Absent for smooth curves.
    pub ct: Option<u32>,
    /// Arnold exponent of the curve as `"p/q"`; absent for smooth curves.
    pub alpha: Option<String>,
    pub chern: Chern,
    pub table: Vec<DegreeRow>,
    pub stability: StabilitySummary,
    pub freeness: FreenessSummary,
    pub genus_check: Option<GenusCheck>,
    /// Present for curves whose singularities are nodes and cusps.
    pub torelli: Option<TorelliVerdict>,
    pub timing_ms: u64,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Copy with the timing zeroed, for comparisons across runs.
    pub fn normalized(&self) -> AnalysisReport {
        AnalysisReport {
            timing_ms: 0,
            ..self.clone()
        }
    }

    pub fn row(&self, k: i64) -> Option<&DegreeRow> {
        self.table.iter().find(|r| r.k == k)
    }

    pub fn torelli_label(&self) -> String {
        self.torelli.as_ref().map_or_else(|| "n/a".into(), TorelliVerdict::label)
    }
}

pub fn mdr_string(m: Mdr) -> String {
    match m {
        Mdr::Degree(r) => r.to_string(),
        Mdr::Infinite => "inf".into(),
    }
}

pub fn analyze(curve: &CurveRecord) -> Result<AnalysisReport, ReportError> {
    analyze_with(curve, &Jacobian::new(&curve.f)?)
}

pub fn analyze_with(curve: &CurveRecord, jac: &Jacobian) -> Result<AnalysisReport, ReportError> {
    let start = Instant::now();
    let d = curve.degree();
    let verification = verify_record_with(curve, jac);
    let tau = jac.tau()? as u32;
    let ct = match jac.ct() {
        Ok(c) => Some(c),
        Err(SyzygyError::Smooth(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let alpha = alpha_c(curve).ok();
    let nums = numerics(d as i64, tau as i64, 0);

    let mut table = Vec::new();
    for k in -3..=d as i64 {
        let graded = k >= 0;
        table.push(DegreeRow {
            k,
            ar: jac.ar_dim(k),
            er: if graded { jac.er_dim(k as u32)? } else { 0 },
            milnor: if graded { jac.milnor_dim(k as u32) } else { 0 },
            torsion: jac.h0m_dim(k)?,
            defect: jac.defect(k)?,
            h0: h0_tc(jac, k),
            h1: h1_tc(jac, k)?,
            h2: h2_tc(jac, k)?,
        });
    }

    let fv = freeness(jac)?;
    let torelli = match nodes_and_cusps(curve) {
        Some(_) if !curve.sings.is_empty() && verification.passed => Some(torelli_verdict(curve, jac)?),
        _ => None,
    };

    Ok(AnalysisReport {
        schema: SCHEMA,
        curve: CurveSummary {
            name: curve.name.clone(),
            degree: d,
            f: curve.f.to_string(),
            irreducible: curve.irreducible,
            components: curve.component_count(),
            genera: curve.genera.clone(),
            singularities: curve.sings.iter().map(ToString::to_string).collect(),
            tags: curve.tags.clone(),
        },
        verification: VerificationSummary {
            passed: verification.passed,
            failures: verification
                .failures()
                .map(|c| format!("{}: {}", c.subject, c.detail))
                .collect(),
        },
        tau,
        mdr: mdr_string(jac.mdr()?),
        ct,
        alpha: alpha.as_ref().map(ToString::to_string),
        chern: Chern {
            c1: nums.c1,
            c2: nums.c2,
            discriminant: nums.discriminant,
        },
        table,
        stability: StabilitySummary {
            stable: is_stable(jac),
            bound: stability_bound(d),
            alpha_sufficient: alpha.as_ref().map(|a| stability_sufficient(d, a)),
            alpha_not_free: alpha.as_ref().map(|a| not_free_sufficient(d, a)),
        },
        freeness: FreenessSummary {
            free: fv.free,
            exponents: fv.exponents,
            method_agreement: fv.method_agreement,
        },
        genus_check: genus_sum_check(curve, jac).ok(),
        torelli,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

/// One stored expectation against the computed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

/// `">=n"` compares numerically; anything else must match exactly.
fn matches(expected: &str, computed: &str) -> bool {
    match expected.strip_prefix(">=") {
        Some(lo) => match (lo.trim().parse::<i64>(), computed.parse::<i64>()) {
            (Ok(lo), Ok(v)) => v >= lo,
            _ => false,
        },
        None => expected == computed,
    }
}

fn computed_value(key: &str, report: &AnalysisReport, jac: &Jacobian) -> Result<Option<String>, ReportError> {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
    let value = match key {
        "tau" => report.tau.to_string(),
        "mdr" => report.mdr.clone(),
        "ct" => opt(report.ct.map(|c| c.to_string())),
        "alpha" => opt(report.alpha.clone()),
        "stable" => report.stability.stable.to_string(),
        "free" => report.freeness.free.to_string(),
        "exponents" => opt(report.freeness.exponents.map(|(a, b)| format!("{a},{b}"))),
        "discriminant" => report.chern.discriminant.to_string(),
        "torelli" => report.torelli_label(),
        _ => {
            let Some((family, k)) = key.split_once('.') else {
                return Ok(None);
            };
            let Ok(k) = k.parse::<i64>() else {
                return Ok(None);
            };
            match family {
                "ar" => jac.ar_dim(k).to_string(),
                "h0m" => jac.h0m_dim(k)?.to_string(),
                "defect" => jac.defect(k)?.to_string(),
                _ => return Ok(None),
            }
        }
    };
    Ok(Some(value))
}

/// Compares every `expected` entry of the record with the report.
pub fn check_expectations(
    curve: &CurveRecord,
    jac: &Jacobian,
    report: &AnalysisReport,
) -> Result<Vec<Expectation>, ReportError> {
    curve
        .expected
        .iter()
        .map(|(key, expected)| {
            let computed = computed_value(key, report, jac)?;
            Ok(Expectation {
                key: key.clone(),
                expected: expected.clone(),
                ok: computed.as_deref().is_some_and(|c| matches(expected, c)),
                computed: computed.unwrap_or_else(|| "unknown key".into()),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub verified: bool,
    pub expectations: Vec<Expectation>,
    pub error: Option<String>,
    pub report: Option<AnalysisReport>,
}

impl CorpusEntry {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verified && self.expectations.iter().all(|e| e.ok)
    }
}

pub fn run_entry(curve: &CurveRecord) -> CorpusEntry {
    let result = Jacobian::new(&curve.f).map_err(ReportError::from).and_then(|jac| {
        let report = analyze_with(curve, &jac)?;
        let exp = check_expectations(curve, &jac, &report)?;
        Ok((report, exp))
    });
    match result {
        Ok((report, expectations)) => CorpusEntry {
            name: curve.name.clone(),
            verified: report.verification.passed,
            expectations,
            error: None,
            report: Some(report),
        },
        Err(e) => CorpusEntry {
            name: curve.name.clone(),
            verified: false,
            expectations: Vec::new(),
            error: Some(e.to_string()),
            report: None,
        },
    }
}

/// Runs every record; results come back in input order either way.
pub fn run_corpus(curves: &[CurveRecord], parallel: bool) -> Vec<CorpusEntry> {
    if parallel {
        curves.par_iter().map(run_entry).collect()
    } else {
        curves.iter().map(run_entry).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvecat::lookup;

    #[test]
    fn triangle_report() {
        let r = analyze(&lookup("triangle").unwrap()).unwrap();
        assert_eq!(r.schema, 1);
        assert_eq!((r.tau, r.mdr.as_str(), r.ct), (3, "1", Some(2)));
        assert!(r.freeness.free);
        assert_eq!(r.freeness.exponents, Some((1, 1)));
        assert!(!r.stability.stable);
        assert_eq!(r.alpha.as_deref(), Some("1"));
        assert_eq!(r.table.first().unwrap().k, -3);
        assert_eq!(r.table.last().unwrap().k, 3);
        assert_eq!(r.row(1).unwrap().ar, 2);
        let defects: Vec<i64> = (0..=2).map(|k| r.row(k).unwrap().defect).collect();
        assert_eq!(defects, [2, 0, 0]);
        assert!(r.table.iter().all(|row| row.h1 == 0));
        assert!(r.torelli.is_some());
    }

    #[test]
    fn json_roundtrip() {
        let r = analyze(&lookup("zariski_sextic").unwrap()).unwrap();
        let text = r.to_json();
        let back = AnalysisReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"alpha\": \"5/6\""));
        assert!(AnalysisReport::from_json("{\"schema\": 1}").is_err());
    }

    #[test]
    fn expectation_matching() {
        assert!(matches(">=1", "3"));
        assert!(!matches(">=1", "0"));
        assert!(!matches(">=x", "0"));
        assert!(matches("inf", "inf"));
        assert!(!matches("2,3", "3,2"));
        let mut c = lookup("nodal_cubic").unwrap();
        c = c.expect("ar.2", ">=1").expect("ar.1", 0).expect("h0m.1", 2).expect("bogus", 1);
        let e = run_entry(&c);
        let by_key = |k: &str| e.expectations.iter().find(|x| x.key == k).unwrap().clone();
        assert!(by_key("ar.2").ok);
        assert!(by_key("ar.1").ok);
        assert!(by_key("h0m.1").ok);
        assert!(by_key("torelli").ok);
        assert_eq!(by_key("bogus").computed, "unknown key");
        assert!(!e.passed());
    }

    #[test]
    fn smooth_report() {
        let r = analyze(&lookup("fermat4").unwrap()).unwrap();
        assert_eq!((r.tau, r.mdr.as_str(), r.ct, r.alpha.clone()), (0, "inf", None, None));
        assert!(r.torelli.is_none());
        assert_eq!(r.torelli_label(), "n/a");
    }
}
