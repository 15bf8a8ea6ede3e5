//! Named curves: the record type, the line-oriented curve file format, the
//! built-in catalog and two parametrized families.
//!
//! Curve files look like
//!
//! ```text
//! name = cuspidal_cubic
//! f = y^2*z - x^3
//! irreducible = true
//! components = 1
//! genera = 0
//! sing = (0:0:1) A2 tangent=y
//! tags = cusp
//! expect.tau = 2
//! ```
//!
//! `sing` takes `;`-separated entries. An entry is a rational point
//! `(a:b:c)` or a cluster `{g1, g2}` (all points of `g1 = g2 = 0`), followed
//! by a type and optionally `tangent=<linear form>`. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::Rational;
use crate::ring3::{certify_irreducible, parse, HPoly, ProjPoint};
use crate::singcat::{verify_declared, verify_with, Check, DeclaredSing, SingLocus, SingType, VerificationReport};
use crate::syzygy::Jacobian;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("curve '{name}' failed verification: {details}")]
    VerificationFailed { name: String, details: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown catalog entry '{0}'")]
    UnknownCurve(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub name: String,
    pub f: HPoly,
    /// Declared irreducible; checked by an irreducibility certificate.
    pub irreducible: bool,
    /// Declared number of irreducible components, if given.
    pub components: Option<u32>,
    pub genera: Option<Vec<u32>>,
    pub sings: Vec<DeclaredSing>,
    /// Expected invariant values keyed by invariant name. A value may carry
    /// a `>=` or `<=` prefix.
    pub expected: BTreeMap<String, String>,
    pub tags: Vec<String>,
}

impl CurveRecord {
    pub fn new(name: &str, f: HPoly, sings: Vec<DeclaredSing>) -> Self {
        CurveRecord {
            name: name.to_string(),
            f,
            irreducible: false,
            components: None,
            genera: None,
            sings,
            expected: BTreeMap::new(),
            tags: Vec::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    /// Number of components: the declared count, or 1 for an irreducible curve.
    pub fn component_count(&self) -> Option<u32> {
        if self.irreducible {
            Some(1)
        } else {
            self.components
        }
    }

    pub fn irreducible(mut self, genus: u32) -> Self {
        self.irreducible = true;
        self.components = Some(1);
        self.genera = Some(vec![genus]);
        self
    }

    pub fn components(mut self, genera: &[u32]) -> Self {
        self.components = Some(genera.len() as u32);
        self.genera = Some(genera.to_vec());
        self
    }

    pub fn expect(mut self, key: &str, value: impl ToString) -> Self {
        self.expected.insert(key.to_string(), value.to_string());
        self
    }

    pub fn tag(mut self, tag: &str) -> Self {
        self.tags.push(tag.to_string());
        self
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn is_smooth_declared(&self) -> bool {
        self.sings.is_empty()
    }

    /// Renders the record in the curve file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("name = {}\nf = {}\n", self.name, self.f);
        out += &format!("irreducible = {}\n", self.irreducible);
        if let Some(r) = self.components {
            out += &format!("components = {r}\n");
        }
        if let Some(g) = &self.genera {
            let g: Vec<String> = g.iter().map(u32::to_string).collect();
            out += &format!("genera = {}\n", g.join(","));
        }
        if !self.sings.is_empty() {
            let s: Vec<String> = self.sings.iter().map(DeclaredSing::to_string).collect();
            out += &format!("sing = {}\n", s.join("; "));
        }
        if !self.tags.is_empty() {
            out += &format!("tags = {}\n", self.tags.join(","));
        }
        for (k, v) in &self.expected {
            out += &format!("expect.{k} = {v}\n");
        }
        out
    }
}

/// Structural checks on top of [`verify_declared`].
pub fn verify_record(curve: &CurveRecord) -> VerificationReport {
    structural_checks(curve, verify_declared(curve))
}

/// [`verify_record`] reusing an existing Jacobian context for `curve.f`.
pub fn verify_record_with(curve: &CurveRecord, jac: &Jacobian) -> VerificationReport {
    structural_checks(curve, verify_with(curve, jac))
}

fn structural_checks(curve: &CurveRecord, mut report: VerificationReport) -> VerificationReport {
    let mut extra = Vec::new();
    if let Some(r) = curve.components {
        extra.push(Check {
            subject: curve.name.clone(),
            ok: r >= 1 && (!curve.irreducible || r == 1),
            detail: format!("{r} components declared"),
        });
    }
    if let (Some(g), Some(r)) = (&curve.genera, curve.component_count()) {
        extra.push(Check {
            subject: curve.name.clone(),
            ok: g.len() as u32 == r,
            detail: format!("{} genera for {r} components", g.len()),
        });
    }
    if curve.irreducible {
        extra.push(Check {
            subject: curve.name.clone(),
            ok: certify_irreducible(&curve.f),
            detail: "irreducibility certificate".into(),
        });
    }
    report.passed &= extra.iter().all(|c| c.ok);
    report.checks.extend(extra);
    report
}

fn syntax(line: usize, msg: impl Into<String>) -> CatalogError {
    CatalogError::SyntaxError { line, msg: msg.into() }
}

fn parse_sing(entry: &str, line: usize) -> Result<DeclaredSing, CatalogError> {
    let entry = entry.trim();
    let (locus, rest) = if entry.starts_with('(') {
        let end = entry.find(')').ok_or_else(|| syntax(line, "unterminated point"))?;
        let p: ProjPoint = entry[..=end].parse().map_err(|e| syntax(line, format!("{e}")))?;
        (SingLocus::Point(p), &entry[end + 1..])
    } else if entry.starts_with('{') {
        let end = entry.find('}').ok_or_else(|| syntax(line, "unterminated cluster"))?;
        let (a, b) = entry[1..end]
            .split_once(',')
            .ok_or_else(|| syntax(line, "cluster needs two equations"))?;
        let g1 = parse(a).map_err(|e| syntax(line, e.to_string()))?;
        let g2 = parse(b).map_err(|e| syntax(line, e.to_string()))?;
        (SingLocus::Cluster(g1, g2), &entry[end + 1..])
    } else {
        return Err(syntax(line, format!("expected a point or cluster in '{entry}'")));
    };
    let rest = rest.trim();
    let (stype, tangent) = match rest.split_once("tangent=") {
        Some((t, tan)) => (t.trim(), Some(tan.trim())),
        None => (rest, None),
    };
    let stype: SingType = stype.parse().map_err(|e| syntax(line, format!("{e}")))?;
    let tangent = tangent
        .map(|t| parse(t).map_err(|e| syntax(line, e.to_string())))
        .transpose()?;
    Ok(DeclaredSing { locus, stype, tangent })
}

/// Splits on `;` outside parentheses (Newton types contain `;`).
fn split_entries(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|e| !e.trim().is_empty()).collect()
}

/// Parses curve-file text without running verification.
pub fn parse_curve_text(text: &str) -> Result<CurveRecord, CatalogError> {
    let mut name = None;
    let mut f = None;
    let mut rec = CurveRecord::new("", HPoly::zero(0), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected 'key = value'"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" => name = Some(value.to_string()),
            "f" => f = Some(parse(value).map_err(|e| syntax(line, e.to_string()))?),
            "irreducible" => {
                rec.irreducible = value.parse().map_err(|_| syntax(line, "expected true or false"))?;
            }
            "components" => {
                rec.components = Some(value.parse().map_err(|_| syntax(line, "expected a count"))?);
            }
            "genera" => {
                let g: Result<Vec<u32>, _> = value.split(',').map(|v| v.trim().parse()).collect();
                rec.genera = Some(g.map_err(|_| syntax(line, "expected comma-separated genera"))?);
            }
            "sing" => {
                for entry in split_entries(value) {
                    rec.sings.push(parse_sing(entry, line)?);
                }
            }
            "tags" => rec.tags.extend(value.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty())),
            _ => match key.strip_prefix("expect.") {
                Some(inv) if !inv.is_empty() => {
                    rec.expected.insert(inv.to_string(), value.to_string());
                }
                _ => return Err(syntax(line, format!("unknown key '{key}'"))),
            },
        }
    }
    rec.name = name.ok_or_else(|| syntax(0, "missing 'name'"))?;
    rec.f = f.ok_or_else(|| syntax(0, "missing 'f'"))?;
    if rec.f.degree() < 2 {
        return Err(syntax(0, "curve degree must be at least 2"));
    }
    Ok(rec)
}

/// Reads, parses and verifies a curve file.
pub fn load_curve_file(path: impl AsRef<Path>) -> Result<CurveRecord, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let rec = parse_curve_text(&text)?;
    ensure_verified(rec)
}

fn ensure_verified(rec: CurveRecord) -> Result<CurveRecord, CatalogError> {
    let report = verify_record(&rec);
    if report.passed {
        Ok(rec)
    } else {
        let details: Vec<String> = report.failures().map(|c| format!("{}: {}", c.subject, c.detail)).collect();
        Err(CatalogError::VerificationFailed {
            name: rec.name,
            details: details.join("; "),
        })
    }
}

fn p(s: &str) -> HPoly {
    parse(s).expect("catalog polynomial")
}

fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
    ProjPoint::from_ints(a, b, c).expect("catalog point")
}

fn node(a: i64, b: i64, c: i64) -> DeclaredSing {
    DeclaredSing::at(pt(a, b, c), SingType::A(1))
}

fn at(a: i64, b: i64, c: i64, t: SingType) -> DeclaredSing {
    DeclaredSing::at(pt(a, b, c), t)
}

/// `x^a y^b + z^(a+b)`.
pub fn thom_sebastiani(a: u32, b: u32) -> CurveRecord {
    assert!(a >= 1 && b >= 1, "exponents must be positive");
    let d = a + b;
    let f = p(&format!("x^{a}*y^{b}+z^{d}"));
    let mut sings = Vec::new();
    // at (1:0:0) the local equation is y^b + z^d, at (0:1:0) it is x^a + z^d
    if b >= 2 {
        sings.push(at(1, 0, 0, SingType::brieskorn(b, d)));
    }
    if a >= 2 {
        sings.push(at(0, 1, 0, SingType::brieskorn(a, d)));
    }
    let irreducible = num_integer::gcd(num_integer::gcd(a, b), d) == 1;
    let mut rec = CurveRecord::new(&format!("ts_{a}_{b}"), f, sings)
        .tag("thom_sebastiani")
        .expect("mdr", 1)
        .expect("free", false);
    if d >= 3 {
        rec = rec.expect("stable", false);
    }
    if irreducible {
        rec.irreducible = true;
        rec.components = Some(1);
    }
    rec
}

/// `x^a y^b z^c + y^d + z^d` with `d = a + b + c`; its only singular point
/// is `(1:0:0)`, with Newton boundary through `(0,d), (b,c), (d,0)`.
pub fn non_ts_family(a: u32, b: u32, c: u32) -> CurveRecord {
    assert!(a >= 1 && b >= 2 && c >= 2, "need a >= 1 and b, c >= 2");
    let d = a + b + c;
    let f = p(&format!("x^{a}*y^{b}*z^{c}+y^{d}+z^{d}"));
    let stype = SingType::Newton {
        boundary: vec![(0, d), (b, c), (d, 0)],
        tau: non_ts_tau(a, b, c),
    };
    let mdr = (d - b).min(d - c);
    let rec = CurveRecord::new(&format!("c_{a}_{b}_{c}"), f, vec![at(1, 0, 0, stype)])
        .tag("non_ts")
        .expect("mdr", mdr)
        .expect("stable", 2 * mdr > d - 1);
    // the torsion witness y^b z^c needs the monomial x^a to be non-constant
    // in the relation; for a = 1 it can vanish
    if a >= 2 {
        rec.expect("free", false).expect(&format!("h0m.{}", b + c), ">=1")
    } else {
        rec
    }
}

/// Tjurina numbers of the `non_ts_family` singular point, as computed by the
/// global Milnor algebra (the point is the only singularity).
fn non_ts_tau(a: u32, b: u32, c: u32) -> u32 {
    match (a, b, c) {
        (2, 2, 2) => 12,
        (1, 3, 3) => 25,
        (3, 2, 2) => 14,
        (2, 3, 3) => 29,
        (2, 5, 2) => 42,
        (3, 5, 2) => 47,
        (2, 6, 2) => 55,
        _ => 0,
    }
}

/// Every built-in curve, in a fixed order.
pub fn catalog() -> Vec<CurveRecord> {
    let mut out = vec![
        CurveRecord::new("triangle", p("x*y*z"), vec![node(1, 0, 0), node(0, 1, 0), node(0, 0, 1)])
            .components(&[0, 0, 0])
            .tag("free")
            .tag("arrangement")
            .tag("nodal")
            .expect("tau", 3)
            .expect("mdr", 1)
            .expect("ct", 2)
            .expect("free", true)
            .expect("exponents", "1,1")
            .expect("stable", false),
        CurveRecord::new("fermat3", p("x^3+y^3+z^3"), vec![])
            .irreducible(1)
            .tag("smooth")
            .expect("tau", 0)
            .expect("mdr", "inf"),
        CurveRecord::new("fermat4", p("x^4+y^4+z^4"), vec![])
            .irreducible(3)
            .tag("smooth")
            .expect("tau", 0)
            .expect("mdr", "inf"),
        CurveRecord::new("nodal_cubic", p("y^2*z-x^2*(x+z)"), vec![node(0, 0, 1)])
            .irreducible(0)
            .tag("nodal")
            .expect("tau", 1)
            .expect("mdr", 2)
            .expect("ct", 3)
            .expect("stable", true)
            .expect("free", false)
            .expect("torelli", "obstructed"),
        CurveRecord::new(
            "cuspidal_cubic",
            p("y^2*z-x^3"),
            vec![at(0, 0, 1, SingType::A(2)).with_tangent(p("y"))],
        )
        .irreducible(0)
        .tag("cusp")
        .expect("tau", 2)
        .expect("ar.1", ">=1")
        .expect("stable", false)
        .expect("free", false),
        CurveRecord::new(
            "zariski_sextic",
            p("(x^2+y^2)^3+(y^3+z^3)^2"),
            vec![DeclaredSing::cluster(p("x^2+y^2"), p("y^3+z^3"), SingType::A(2))],
        )
        .irreducible(4)
        .tag("cusp")
        .expect("tau", 12)
        .expect("ar.2", 0)
        .expect("ar.3", ">=1")
        .expect("stable", true)
        .expect("discriminant", -27),
        CurveRecord::new(
            "nine_d4_nonic",
            p("(x^3+y^3+z^3)^3+(x^3+2y^3+3z^3)^3"),
            vec![DeclaredSing::cluster(p("x^3+y^3+z^3"), p("x^3+2y^3+3z^3"), SingType::D(4))],
        )
        .components(&[1, 1, 1])
        .expect("tau", 36)
        .expect("ar.3", 0)
        .expect("ar.4", ">=1")
        .expect("stable", false),
        CurveRecord::new(
            "a1_arrangement",
            p("(x^2-y^2)*(y^2-z^2)*(x^2-z^2)"),
            vec![
                at(1, 1, 1, SingType::D(4)),
                at(1, 1, -1, SingType::D(4)),
                at(1, -1, 1, SingType::D(4)),
                at(-1, 1, 1, SingType::D(4)),
                node(1, 0, 0),
                node(0, 1, 0),
                node(0, 0, 1),
            ],
        )
        .components(&[0; 6])
        .tag("free")
        .tag("arrangement")
        .expect("tau", 19)
        .expect("free", true)
        .expect("exponents", "2,3"),
        CurveRecord::new(
            "dual_hesse",
            p("(x^3-y^3)*(y^3-z^3)*(x^3-z^3)"),
            vec![
                at(1, 0, 0, SingType::D(4)),
                at(0, 1, 0, SingType::D(4)),
                at(0, 0, 1, SingType::D(4)),
                DeclaredSing::cluster(p("x^3-z^3"), p("y^3-z^3"), SingType::D(4)),
            ],
        )
        .components(&[0; 9])
        .tag("free")
        .tag("arrangement")
        .expect("tau", 48)
        .expect("free", true)
        .expect("exponents", "4,4"),
        CurveRecord::new(
            "five_lines",
            p("x*y*z*(x+y+z)*(x+2y+3z)"),
            five_line_nodes(),
        )
        .components(&[0; 5])
        .tag("arrangement")
        .tag("nodal")
        .expect("tau", 10)
        .expect("stable", true)
        .expect("torelli", "obstructed"),
        CurveRecord::new(
            "two_conics",
            p("(x^2+y^2-2z^2)*(x^2-2y^2+z^2)"),
            vec![node(1, 1, 1), node(1, 1, -1), node(1, -1, 1), node(-1, 1, 1)],
        )
        .components(&[0, 0])
        .tag("nodal")
        .expect("tau", 4),
        CurveRecord::new(
            "nine_cusp_sextic",
            p("x^6+y^6+z^6-2x^3*y^3-2y^3*z^3-2x^3*z^3"),
            vec![
                DeclaredSing::cluster(p("x"), p("y^3-z^3"), SingType::A(2)),
                DeclaredSing::cluster(p("y"), p("x^3-z^3"), SingType::A(2)),
                DeclaredSing::cluster(p("z"), p("x^3-y^3"), SingType::A(2)),
            ],
        )
        .irreducible(1)
        .tag("cusp")
        .expect("tau", 18)
        .expect("stable", true)
        .expect("torelli", "obstructed"),
    ];
    out.extend(searched_curves());
    for (a, b) in [(2, 2), (3, 3), (2, 4), (1, 3)] {
        out.push(thom_sebastiani(a, b));
    }
    for (a, b, c) in [(2, 2, 2), (1, 3, 3), (3, 2, 2), (2, 3, 3), (2, 5, 2), (3, 5, 2)] {
        out.push(non_ts_family(a, b, c));
    }
    out
}

fn five_line_nodes() -> Vec<DeclaredSing> {
    // pairwise intersections of x, y, z, x+y+z, x+2y+3z
    [
        (0, 0, 1),
        (0, 1, 0),
        (0, 1, -1),
        (0, 3, -2),
        (1, 0, 0),
        (1, 0, -1),
        (3, 0, -1),
        (1, -1, 0),
        (2, -1, 0),
        (1, -2, 1),
    ]
    .into_iter()
    .map(|(a, b, c)| node(a, b, c))
    .collect()
}

/// Curves with a few prescribed nodes or cusps at chosen points. Each is a
/// sparse form whose lowest-order terms at the chosen points give the
/// required singularity; the Tjurina number confirms there are no others.
fn searched_curves() -> Vec<CurveRecord> {
    vec![
        CurveRecord::new("one_node_quartic", p("x*y*z^2+x^4+y^4"), vec![node(0, 0, 1)])
            .irreducible(2)
            .tag("nodal")
            .tag("torelli")
            .expect("tau", 1)
            .expect("torelli", "torelli@1"),
        CurveRecord::new(
            "two_node_quartic",
            p("3x^3*y-2x^3*z-3x^2*y^2-2x^2*y*z+2x^2*z^2+x*y^2*z+x*y*z^2-2y^2*z^2"),
            vec![node(0, 0, 1), node(0, 1, 0)],
        )
        .irreducible(1)
        .tag("nodal")
        .expect("tau", 2)
        .expect("torelli", "criterion-fails"),
        CurveRecord::new(
            "two_node_sextic",
            p("x^6+y^3*z^3+x*y*z^4+x*y^4*z"),
            vec![node(0, 0, 1), node(0, 1, 0)],
        )
        .irreducible(8)
        .tag("nodal")
        .tag("torelli")
        .expect("tau", 2)
        .expect("torelli", "torelli@2"),
        CurveRecord::new(
            "three_node_sextic",
            p("x^3*y^3+y^3*z^3+2x^3*z^3+x*y*z*(x^3-y^3+2z^3)"),
            vec![node(1, 0, 0), node(0, 1, 0), node(0, 0, 1)],
        )
        .irreducible(7)
        .tag("nodal")
        .tag("torelli")
        .expect("tau", 3)
        .expect("torelli", "torelli@2"),
        // nodes on the line x = 0
        CurveRecord::new(
            "collinear_node_octic",
            p("x^8+x*y*z*(y-z)*(y^4+z^4)+y^2*z^2*(y-z)^2*(y^2+z^2)"),
            vec![node(0, 0, 1), node(0, 1, 0), node(0, 1, 1)],
        )
        .irreducible(18)
        .tag("nodal")
        .tag("torelli")
        .expect("tau", 3)
        .expect("torelli", "torelli@3"),
        CurveRecord::new(
            "one_cusp_octic",
            p("x^2*z^6+y^3*z^5+x^7*y+y^8"),
            vec![at(0, 0, 1, SingType::A(2)).with_tangent(p("x"))],
        )
        .irreducible(20)
        .tag("cusp")
        .tag("torelli")
        .expect("tau", 2)
        .expect("torelli", "torelli@2"),
        // Q^2 q + K^2 where the cubic K = y (z - x)(z - 4x) meets the conic
        // Q = xz - y^2 in six rational points and q is nonzero at all of them
        CurveRecord::new(
            "conic_six_node_sextic",
            p("(x*z-y^2)^2*(x^2+y^2+z^2)+y^2*(z-x)^2*(z-4x)^2"),
            vec![node(1, 0, 0), node(0, 0, 1), node(1, 1, 1), node(1, -1, 1), node(1, 2, 4), node(1, -2, 4)],
        )
        .irreducible(4)
        .tag("nodal")
        .expect("tau", 6)
        .expect("defect.2", 1),
    ]
}

/// Looks up a catalog entry by name.
pub fn lookup(name: &str) -> Result<CurveRecord, CatalogError> {
    catalog()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CatalogError::UnknownCurve(name.to_string()))
}

/// Parses an expected value as a rational, used by fixture comparisons.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}
