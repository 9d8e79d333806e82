//! One function per CLI command. Each returns named text artifacts; the
//! caller decides whether they go to stdout or to files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sseqbench_core::homotopy::{self, HurewiczSource};
use sseqbench_core::specseq::{self, EliminationEntry, PageRange, SpectralSequence, Verdict};
use sseqbench_core::steenrod;

use crate::chart::{ChartFormat, ChartSpec};
use crate::config::WorkbenchConfig;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

impl Artifact {
    fn new(name: impl Into<String>, content: String) -> Self {
        Artifact { name: name.into(), content }
    }
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn bits(values: &BTreeMap<String, bool>) -> String {
    let parts: Vec<String> = values.iter().map(|(k, v)| format!("{k}={}", u8::from(*v))).collect();
    parts.join(" ")
}

fn reason_detail(e: &EliminationEntry) -> String {
    match (e.verdict, e.target) {
        (Verdict::BaseVanishes { degree }, Some(t)) => format!("E_2^{{{},{}}} = 0 since H^{degree}(base) = 0", t.s, t.t),
        (Verdict::FibreVanishes { degree }, Some(t)) => format!("E_2^{{{},{}}} = 0 since M^{degree} = 0", t.s, t.t),
        (Verdict::OutsideWindow, _) => "target lies beyond the window".to_string(),
        (Verdict::Admissible, _) => "source and target are nonzero at E_2".to_string(),
        _ => "target has negative fibre degree".to_string(),
    }
}

fn admissibility_text(cfg: &WorkbenchConfig) -> String {
    let spec = cfg.spec();
    let n = spec.degree_bound();
    let e2 = specseq::build_e2(spec);
    let mut out = String::new();
    writeln!(out, "admissible differentials (sources in total degree <= {n}):").unwrap();
    let arrows = specseq::admissible_differentials(spec);
    if arrows.is_empty() {
        out.push_str("  none\n");
    }
    for a in &arrows {
        let place = if a.target.total() <= n { "" } else { "  [target beyond window]" };
        writeln!(out, "  d{}: {} -> {}{place}", a.r, a.source, a.target).unwrap();
    }
    out.push_str("base classes (s,0) are permanent cycles\n");
    let log = specseq::elimination_log(spec);
    let mut current = None;
    for e in &log {
        if current != Some(e.source) {
            current = Some(e.source);
            let labels: Vec<String> = e2.group(e.source).iter().map(|l| spec.display_label(l)).collect();
            writeln!(out, "\nsource {}: {}", e.source, labels.join(", ")).unwrap();
        }
        let target = e.target.map(|t| format!(" -> {t}")).unwrap_or_default();
        let pages = match e.pages {
            PageRange::Single(r) => format!("r={r}"),
            PageRange::From(r) => format!("r>={r}"),
        };
        writeln!(out, "  {pages}{target}: {} ({})", reason_detail(e), e.verdict.code()).unwrap();
    }
    out
}

pub fn constraints(cfg: &WorkbenchConfig) -> Result<Vec<Artifact>, CliError> {
    let spec = cfg.spec();
    let n = spec.degree_bound();
    let arrows: Vec<Vec<String>> = specseq::admissible_differentials(spec)
        .iter()
        .map(|a| {
            vec![
                a.r.to_string(),
                a.source.s.to_string(),
                a.source.t.to_string(),
                a.target.s.to_string(),
                a.target.t.to_string(),
                (a.target.total() <= n).to_string(),
            ]
        })
        .collect();
    let log: Vec<Vec<String>> = specseq::elimination_log(spec)
        .iter()
        .map(|e| {
            vec![
                e.source.s.to_string(),
                e.source.t.to_string(),
                e.pages.to_string(),
                e.target.map(|t| t.s.to_string()).unwrap_or_default(),
                e.target.map(|t| t.t.to_string()).unwrap_or_default(),
                e.verdict.code().to_string(),
                reason_detail(e),
            ]
        })
        .collect();
    Ok(vec![
        Artifact::new(
            "constraints_admissible.csv",
            csv_table(&["r", "source_s", "source_t", "target_s", "target_t", "target_in_window"], &arrows)?,
        ),
        Artifact::new(
            "constraints_log.csv",
            csv_table(&["source_s", "source_t", "r", "target_s", "target_t", "reason", "detail"], &log)?,
        ),
        Artifact::new("constraints.txt", admissibility_text(cfg)),
    ])
}

pub fn gauge(
    cfg: &WorkbenchConfig,
    k: i64,
    overrides: &BTreeMap<String, bool>,
    others: &BTreeMap<String, bool>,
) -> Result<Vec<Artifact>, CliError> {
    let setup = cfg.gauge_setup().ok_or_else(|| CliError::Validation("the config has no [gauge] section".into()))?;
    let report = setup.report(k, overrides, others)?;

    let mut rows = Vec::new();
    for (i, b) in report.branches.iter().enumerate() {
        for (d, dim) in b.dims().iter().enumerate() {
            rows.push(vec![
                k.to_string(),
                report.epsilon_class.clone(),
                i.to_string(),
                u8::from(b.epsilon).to_string(),
                d.to_string(),
                dim.to_string(),
            ]);
        }
    }
    let csv = csv_table(&["k", "class", "branch", &setup.unknown, "degree", "dim"], &rows)?;

    let mut text = String::new();
    writeln!(text, "k = {k}").unwrap();
    for note in &report.notes {
        writeln!(text, "{note}").unwrap();
    }
    text.push('\n');
    text.push_str(&admissibility_text(cfg));
    for (i, b) in report.branches.iter().enumerate() {
        writeln!(text, "\nbranch {i}: {}", bits(&b.values)).unwrap();
        let dims: Vec<String> = b.dims().iter().map(usize::to_string).collect();
        writeln!(text, "  associated graded dims, degrees 0..: {}", dims.join(" ")).unwrap();
        for (bd, labels) in &b.summary.survivors {
            writeln!(text, "  E_inf^{bd}: {}", labels.join(", ")).unwrap();
        }
    }
    Ok(vec![Artifact::new(format!("gauge_k{k}.csv"), csv), Artifact::new(format!("gauge_k{k}.txt"), text)])
}

pub fn e2(cfg: &WorkbenchConfig) -> Result<Vec<Artifact>, CliError> {
    let spec = cfg.spec();
    let e2 = specseq::build_e2(spec);
    let rows: Vec<Vec<String>> = e2
        .bidegrees()
        .map(|b| {
            let labels: Vec<String> = e2.group(b).iter().map(|l| spec.display_label(l)).collect();
            vec![b.s.to_string(), b.t.to_string(), b.total().to_string(), labels.len().to_string(), labels.join(" ")]
        })
        .collect();
    Ok(vec![Artifact::new("e2.csv", csv_table(&["s", "t", "total", "dim", "basis"], &rows)?)])
}

fn assignment(
    cfg: &WorkbenchConfig,
    values: &BTreeMap<String, bool>,
) -> Result<specseq::DifferentialAssignment, CliError> {
    if let Some(u) = cfg.unknowns.iter().find(|u| !values.contains_key(*u)) {
        return Err(CliError::Validation(format!("unknown scalar `{u}` has no value; pass --set {u}=<0|1>")));
    }
    let mut a = cfg.template().clone();
    a.values = values.clone();
    Ok(a)
}

pub fn einfty(cfg: &WorkbenchConfig, values: &BTreeMap<String, bool>) -> Result<Vec<Artifact>, CliError> {
    let a = assignment(cfg, values)?;
    let (_, summary) = specseq::run_to_einfty(cfg.spec(), &a)?;
    let rows: Vec<Vec<String>> = summary
        .survivors
        .iter()
        .map(|(b, labels)| vec![b.s.to_string(), b.t.to_string(), b.total().to_string(), labels.len().to_string(), labels.join(" ")])
        .collect();
    let totals: Vec<Vec<String>> =
        summary.total_dims.iter().enumerate().map(|(d, n)| vec![d.to_string(), n.to_string()]).collect();
    Ok(vec![
        Artifact::new("einfty.csv", csv_table(&["s", "t", "total", "dim", "representatives"], &rows)?),
        Artifact::new("einfty_totals.csv", csv_table(&["degree", "dim"], &totals)?),
    ])
}

pub fn sweep(cfg: &WorkbenchConfig) -> Result<Vec<Artifact>, CliError> {
    let branches = specseq::sweep_unknowns(cfg.spec(), cfg.template())?;
    let mut header: Vec<&str> = vec!["branch"];
    header.extend(cfg.unknowns.iter().map(String::as_str));
    header.extend(["degree", "dim"]);
    let mut rows = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        for (d, n) in b.summary.total_dims.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(cfg.unknowns.iter().map(|u| u8::from(b.values[u]).to_string()));
            row.extend([d.to_string(), n.to_string()]);
            rows.push(row);
        }
    }
    Ok(vec![Artifact::new("sweep.csv", csv_table(&header, &rows)?)])
}

pub fn uct(cfg: &WorkbenchConfig) -> Result<Vec<Artifact>, CliError> {
    let h = cfg.homotopy.as_ref().ok_or_else(|| CliError::Validation("the config has no [homotopy] section".into()))?;
    let shifted = h.shifted();
    let incomplete = |e: homotopy::HomotopyError| CliError::Validation(format!("incomplete homotopy table: {e}"));
    let steps = homotopy::uct_derivation(&shifted, h.window).map_err(incomplete)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for s in &steps {
        let (pi_degree, pi_group, knowledge, citation) = match (s.degree, shifted.get(s.degree)) {
            (0, _) | (_, Err(_)) => (String::new(), String::new(), String::new(), String::new()),
            (_, Ok(e)) => (
                (s.degree + h.loops).to_string(),
                e.group.to_string(),
                match e.knowledge {
                    homotopy::Knowledge::Exact => "exact".to_string(),
                    homotopy::Knowledge::ContainsSummand => "contains".to_string(),
                },
                e.citation.clone(),
            ),
        };
        let hurewicz = match s.homology.source {
            HurewiczSource::AssertedWindow => "asserted window (flagged)",
            other => other.as_str(),
        };
        rows.push(vec![
            s.degree.to_string(),
            pi_degree,
            pi_group,
            knowledge,
            s.homology.group.to_string(),
            hurewicz.to_string(),
            s.ext_term.to_string(),
            s.hom_term.to_string(),
            s.dim.to_string(),
            citation,
        ]);
        summary.push(format!("M^{} {}", s.degree, if s.dim.is_exact() { format!("= {}", s.dim) } else { s.dim.to_string() }));
    }
    let header = ["degree", "pi_degree", "pi_group", "knowledge", "homology", "hurewicz", "ext", "hom", "dim", "citation"];
    let mut text = summary.join(", ");
    text.push('\n');
    Ok(vec![Artifact::new("uct.csv", csv_table(&header, &rows)?), Artifact::new("uct_summary.txt", text)])
}

pub fn hit(cfg: &WorkbenchConfig, bound: u32) -> Result<Vec<Artifact>, CliError> {
    let table = cfg.steenrod_table().ok_or_else(|| CliError::Validation("the config has no [steenrod] section".into()))?;
    let action = table.validate().map_err(|violations| {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        CliError::Validation(format!("invalid Steenrod table:\n{}", lines.join("\n")))
    })?;
    let report = steenrod::hit_quotient(&action, bound);
    let algebra = action.algebra();
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let reps: Vec<String> = r.representatives.iter().map(|m| algebra.display_monomial(m)).collect();
            vec![r.degree.to_string(), r.total.to_string(), r.hit.to_string(), r.quotient.to_string(), reps.join(" ")]
        })
        .collect();
    Ok(vec![Artifact::new("hit.csv", csv_table(&["degree", "total", "hit", "quotient", "representatives"], &rows)?)])
}

pub fn chart(
    cfg: &WorkbenchConfig,
    page: u32,
    format: ChartFormat,
    values: &BTreeMap<String, bool>,
) -> Result<Vec<Artifact>, CliError> {
    if page < 2 {
        return Err(CliError::Validation("charts start at page 2".into()));
    }
    let a = assignment(cfg, values)?;
    let seq = SpectralSequence::compute(cfg.spec(), &a)?;
    let p = seq.page(page).expect("page ≥ 2 always exists");
    let spec = ChartSpec::from_page(p, page);
    spec.check().map_err(|b| CliError::Internal(format!("arrow {:?} breaks the bidegree law", b.0)))?;
    Ok(vec![Artifact::new(format!("chart_E{page}.{}", format.extension()), spec.render(format))])
}

pub fn sq_scaffold(cfg: &WorkbenchConfig) -> Result<Vec<Artifact>, CliError> {
    let table = cfg.steenrod_table().unwrap_or_else(|| steenrod::SteenrodTable::forced(cfg.base.clone()));
    let mut text = String::from("[steenrod]\nunlisted = error\n");
    for line in steenrod::scaffold_lines(&table) {
        text.push_str(&line);
        text.push('\n');
    }
    Ok(vec![Artifact::new("steenrod_scaffold.cfg", text)])
}

pub fn normalize(cfg: &WorkbenchConfig, json: bool) -> Result<Vec<Artifact>, CliError> {
    Ok(vec![if json {
        Artifact::new("config.json", cfg.to_json())
    } else {
        Artifact::new("config.cfg", cfg.emit())
    }])
}
