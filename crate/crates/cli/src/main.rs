use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use planecurve::curvecat::{catalog, lookup, parse_curve_text, CurveRecord};
use planecurve::report::{analyze_with, check_expectations, run_corpus, AnalysisReport, CorpusEntry};
use planecurve::syzygy::Jacobian;

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "planecurve", version, about = "Jacobian syzygies and logarithmic bundles of plane curves")]
struct Cli {
    /// Write the result as JSON to this path ("-" for stdout)
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Only corpus entries carrying this tag
    #[arg(long, global = true, value_name = "TAG")]
    filter: Option<String>,
    /// Evaluate corpus entries concurrently
    #[arg(long, global = true)]
    parallel: bool,
    /// Skip (corpus) or refuse (single curve) curves above this degree
    #[arg(long, global = true, value_name = "K")]
    max_degree: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant report for one curve
    Analyze { input: String },
    /// Run every catalog entry against its stored expectations
    Corpus,
    /// One graded invariant over a range of degrees, e.g. `table milnor fermat3 0..3`
    Table { invariant: String, input: String, range: String },
    /// Stability of the logarithmic bundle
    Stability { input: String },
    /// Freeness test and exponents
    Freeness { input: String },
    /// Torelli criteria
    Torelli { input: String },
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

/// A catalog name, or a path to a curve file.
fn resolve(input: &str) -> Result<CurveRecord, Failure> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {input}: {e}")))?;
        return parse_curve_text(&text).map_err(|e| usage(format!("{input}: {e}")));
    }
    lookup(input).map_err(|_| usage(format!("'{input}' is neither a catalog curve nor a readable file")))
}

fn check_degree(cli: &Cli, curve: &CurveRecord) -> Result<(), Failure> {
    match cli.max_degree {
        Some(k) if curve.degree() > k => Err(usage(format!(
            "{} has degree {} above --max-degree {k}",
            curve.name,
            curve.degree()
        ))),
        _ => Ok(()),
    }
}

fn build(cli: &Cli, input: &str) -> Result<(CurveRecord, Jacobian, AnalysisReport), Failure> {
    let curve = resolve(input)?;
    check_degree(cli, &curve)?;
    let jac = Jacobian::new(&curve.f).map_err(|e| usage(e.to_string()))?;
    let report = analyze_with(&curve, &jac).map_err(|e| Failure {
        code: EXIT_FAILED,
        msg: e.to_string(),
    })?;
    Ok((curve, jac, report))
}

fn emit_json(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.json {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
    }
}

fn verified_or_fail(report: &AnalysisReport) -> Result<(), Failure> {
    if report.verification.passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILED,
            msg: format!(
                "verification failed for {}: {}",
                report.curve.name,
                report.verification.failures.join("; ")
            ),
        })
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_report(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let c = &r.curve;
    let _ = writeln!(s, "curve {} (degree {})", c.name, c.degree);
    let _ = writeln!(s, "  f = {}", c.f);
    for sing in &c.singularities {
        let _ = writeln!(s, "  singular: {sing}");
    }
    let _ = writeln!(s, "verification: {}", if r.verification.passed { "passed" } else { "FAILED" });
    for f in &r.verification.failures {
        let _ = writeln!(s, "  {f}");
    }
    let _ = writeln!(
        s,
        "tau = {}  mdr = {}  ct = {}  alpha = {}",
        r.tau,
        r.mdr,
        r.ct.map_or("-".into(), |v| v.to_string()),
        r.alpha.as_deref().unwrap_or("-")
    );
    let _ = writeln!(
        s,
        "c1 = {}  c2 = {}  discriminant = {}",
        r.chern.c1, r.chern.c2, r.chern.discriminant
    );
    let _ = writeln!(s, "{:>4} {:>5} {:>5} {:>7} {:>7} {:>6} {:>5} {:>5} {:>5}", "k", "AR", "ER", "Milnor", "torsion", "defect", "h0", "h1", "h2");
    for row in &r.table {
        let _ = writeln!(
            s,
            "{:>4} {:>5} {:>5} {:>7} {:>7} {:>6} {:>5} {:>5} {:>5}",
            row.k, row.ar, row.er, row.milnor, row.torsion, row.defect, row.h0, row.h1, row.h2
        );
    }
    s.push_str(&render_stability(r));
    s.push_str(&render_freeness(r));
    if let Some(g) = &r.genus_check {
        let _ = writeln!(s, "genus sum: h1 = {}, expected {} ({})", g.h1, g.expected, if g.pass { "ok" } else { "MISMATCH" });
    }
    s.push_str(&render_torelli(r));
    s
}

fn render_stability(r: &AnalysisReport) -> String {
    let st = &r.stability;
    let mut s = format!("stable: {} (no relations of degree <= {})", yes(st.stable), st.bound);
    if let Some(a) = st.alpha_sufficient {
        let _ = write!(s, "; Arnold exponent criterion {}", if a { "applies" } else { "inconclusive" });
    }
    s.push('\n');
    s
}

fn render_freeness(r: &AnalysisReport) -> String {
    let fr = &r.freeness;
    let mut s = format!("free: {}", yes(fr.free));
    if let Some((a, b)) = fr.exponents {
        let _ = write!(s, " with exponents ({a},{b})");
    }
    if !fr.method_agreement {
        s.push_str(" [saturation and exponent tests DISAGREE]");
    }
    s.push('\n');
    s
}

fn render_torelli(r: &AnalysisReport) -> String {
    match &r.torelli {
        Some(v) => format!("torelli: {} ({})\n", v.label(), v.detail),
        None => "torelli: not applicable (criteria cover nodal and cuspidal curves)\n".into(),
    }
}

fn cmd_single(cli: &Cli, input: &str, render: fn(&AnalysisReport) -> String, section: &str) -> Result<(), Failure> {
    let (_, _, report) = build(cli, input)?;
    print!("{}", render(&report));
    let value = serde_json::to_value(&report).expect("report serializes");
    let text = match section {
        "" => report.to_json(),
        key => serde_json::to_string_pretty(&json!({
            "schema": report.schema,
            "curve": report.curve.name,
            key: value[key],
        }))
        .expect("json"),
    };
    emit_json(cli, &text)?;
    verified_or_fail(&report)
}

fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.split_once("..")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a <= b).then_some((a, b))
}

fn cmd_table(cli: &Cli, invariant: &str, input: &str, range: &str) -> Result<(), Failure> {
    const KNOWN: [&str; 9] = ["ar", "er", "milnor", "defect", "torsion", "saturation", "h0", "h1", "h2"];
    if !KNOWN.contains(&invariant) {
        return Err(usage(format!("unknown invariant '{invariant}'; expected one of {}", KNOWN.join(", "))));
    }
    let (lo, hi) = parse_range(range).ok_or_else(|| usage(format!("bad range '{range}', expected a..b")))?;
    let curve = resolve(input)?;
    check_degree(cli, &curve)?;
    let jac = Jacobian::new(&curve.f).map_err(|e| usage(e.to_string()))?;
    let failed = |e: &dyn std::fmt::Display| Failure {
        code: EXIT_FAILED,
        msg: e.to_string(),
    };
    let mut values = Vec::new();
    for k in lo..=hi {
        let v: i64 = match invariant {
            "ar" => jac.ar_dim(k) as i64,
            "er" => {
                if k < 0 {
                    0
                } else {
                    jac.er_dim(k as u32).map_err(|e| failed(&e))? as i64
                }
            }
            "milnor" => {
                if k < 0 {
                    0
                } else {
                    jac.milnor_dim(k as u32) as i64
                }
            }
            "defect" => jac.defect(k).map_err(|e| failed(&e))?,
            "torsion" => jac.h0m_dim(k).map_err(|e| failed(&e))? as i64,
            "saturation" => jac.saturation_dim(k).map_err(|e| failed(&e))? as i64,
            "h0" => planecurve::logbundle::h0_tc(&jac, k) as i64,
            "h1" => planecurve::logbundle::h1_tc(&jac, k).map_err(|e| failed(&e))? as i64,
            _ => planecurve::logbundle::h2_tc(&jac, k).map_err(|e| failed(&e))? as i64,
        };
        println!("{k:>4} {v:>8}");
        values.push(json!([k, v]));
    }
    let text = serde_json::to_string_pretty(&json!({
        "schema": planecurve::report::SCHEMA,
        "curve": curve.name,
        "invariant": invariant,
        "values": values,
    }))
    .expect("json");
    emit_json(cli, &text)
}

fn cmd_corpus(cli: &Cli) -> Result<(), Failure> {
    let curves: Vec<CurveRecord> = catalog()
        .into_iter()
        .filter(|c| cli.filter.as_ref().is_none_or(|t| c.has_tag(t)))
        .filter(|c| cli.max_degree.is_none_or(|k| c.degree() <= k))
        .collect();
    if curves.is_empty() {
        return Err(usage("no catalog entry matches the filters"));
    }
    let entries = run_corpus(&curves, cli.parallel);
    print!("{}", render_corpus(&entries));
    let summary: Vec<_> = entries
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "passed": e.passed(),
                "verified": e.verified,
                "expectations": e.expectations,
                "error": e.error,
            })
        })
        .collect();
    let text = serde_json::to_string_pretty(&json!({
        "schema": planecurve::report::SCHEMA,
        "entries": summary,
    }))
    .expect("json");
    emit_json(cli, &text)?;
    let failed = entries.iter().filter(|e| !e.passed()).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILED,
            msg: format!("{failed} of {} corpus entries failed", entries.len()),
        })
    }
}

fn render_corpus(entries: &[CorpusEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        let status = if e.passed() { "pass" } else { "FAIL" };
        let checked: Vec<String> = e
            .expectations
            .iter()
            .map(|x| {
                if x.ok {
                    x.key.clone()
                } else {
                    format!("{}!={} (got {})", x.key, x.expected, x.computed)
                }
            })
            .collect();
        let _ = write!(s, "{status}  {:<24} verified={}  [{}]", e.name, yes(e.verified), checked.join(" "));
        if let Some(err) = &e.error {
            let _ = write!(s, "  error: {err}");
        }
        s.push('\n');
    }
    let passed = entries.iter().filter(|e| e.passed()).count();
    let _ = writeln!(s, "{passed}/{} entries pass", entries.len());
    s
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze { input } => cmd_single(cli, input, render_report, ""),
        Command::Stability { input } => cmd_single(cli, input, render_stability, "stability"),
        Command::Freeness { input } => cmd_single(cli, input, render_freeness, "freeness"),
        Command::Torelli { input } => {
            let (curve, jac, report) = build(cli, input)?;
            print!("{}", render_torelli(&report));
            let exp = check_expectations(&curve, &jac, &report).map_err(|e| Failure {
                code: EXIT_FAILED,
                msg: e.to_string(),
            })?;
            if let Some(x) = exp.iter().find(|x| x.key == "torelli") {
                println!("catalog expectation: {} ({})", x.expected, if x.ok { "matches" } else { "MISMATCH" });
            }
            let text = serde_json::to_string_pretty(&json!({
                "schema": report.schema,
                "curve": report.curve.name,
                "torelli": report.torelli,
            }))
            .expect("json");
            emit_json(cli, &text)?;
            verified_or_fail(&report)
        }
        Command::Table { invariant, input, range } => cmd_table(cli, invariant, input, range),
        Command::Corpus => cmd_corpus(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
