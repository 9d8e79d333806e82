//! Workbench configuration files.
//!
//! The format is line oriented. `[section]` headers open sections, every
//! other nonblank line is `key = value`, and `#` starts a comment that runs
//! to the end of the line. Sections may appear in any order but at most
//! once. Unknown sections and keys are errors. See `docs/config.md` for the
//! full grammar.
//!
//! The JSON form is a list of `{"section": name, "entries": [[key, value]]}`
//! objects and goes through the same validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sseqbench_core::gauge::{EpsilonRule, GaugeSetup};
use sseqbench_core::graded::{Generator, Monomial, PolyAlgebraSpec, Polynomial};
use sseqbench_core::homotopy::{self, DimBound, FgAbelianGroup, GradedDims, HomotopyTable, Knowledge, TableEntry};
use sseqbench_core::specseq::{
    Coefficient, DifferentialAssignment, FibrationSpec, FibreGenerator, ImageTerm, SymbolicImage,
};
use sseqbench_core::steenrod::{SteenrodTable, Unlisted};

use crate::error::{CliError, ConfigError, ConfigErrors, Location};

const SECTIONS: [&str; 8] = ["workbench", "base", "homotopy", "fibre", "unknowns", "differentials", "gauge", "steenrod"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopySection {
    pub loops: u32,
    /// Top degree of the fibre truncation derived from the table.
    pub window: u32,
    /// Homotopy of the space before looping.
    pub table: HomotopyTable,
}

impl HomotopySection {
    pub fn shifted(&self) -> HomotopyTable {
        homotopy::loopspace_shift(&self.table, self.loops)
    }

    pub fn truncation(&self) -> Result<GradedDims, homotopy::HomotopyError> {
        homotopy::fibre_truncation_dims_through(&self.shifted(), self.window)
    }
}

/// What the fibre generators are checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibreDims {
    /// The truncation derived from the homotopy section.
    Derive,
    /// `dims[d]` for `d = 0..`.
    Explicit(Vec<DimBound>),
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSection {
    pub unknown: String,
    pub rule: EpsilonRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteenrodSection {
    pub unlisted: Unlisted,
    /// `(generator, i, Sq^i(generator))` as written.
    pub entries: Vec<(String, u32, Polynomial)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkbenchConfig {
    pub degree_bound: u32,
    pub base: PolyAlgebraSpec,
    pub homotopy: Option<HomotopySection>,
    pub fibre_dims: FibreDims,
    pub fibre: Vec<FibreGenerator>,
    pub unknowns: Vec<String>,
    pub differentials: DifferentialAssignment,
    pub gauge: Option<GaugeSection>,
    pub steenrod: Option<SteenrodSection>,
    spec: FibrationSpec,
}

impl WorkbenchConfig {
    pub fn spec(&self) -> &FibrationSpec {
        &self.spec
    }

    /// Declared differentials without values for the unknowns.
    pub fn template(&self) -> &DifferentialAssignment {
        &self.differentials
    }

    pub fn gauge_setup(&self) -> Option<GaugeSetup> {
        let g = self.gauge.as_ref()?;
        Some(
            GaugeSetup::new(self.spec.clone(), self.differentials.clone(), g.rule.clone(), g.unknown.clone())
                .expect("checked during parsing"),
        )
    }

    pub fn steenrod_table(&self) -> Option<SteenrodTable> {
        let s = self.steenrod.as_ref()?;
        let mut t = SteenrodTable::forced(self.base.clone()).with_unlisted(s.unlisted);
        for (g, i, p) in &s.entries {
            t.set(g, *i, p.clone()).expect("checked during parsing");
        }
        Some(t)
    }

    /// Normalized `(section, [(key, value)])` form shared by both emitters.
    pub fn sections(&self) -> Vec<(String, Vec<(String, String)>)> {
        let mut out = Vec::new();
        let mut push = |name: &str, entries: Vec<(String, String)>| out.push((name.to_string(), entries));

        push("workbench", vec![kv("degree_bound", self.degree_bound)]);
        push("base", self.base.generators().iter().map(|g| kv(&g.name, g.degree)).collect());

        if let Some(h) = &self.homotopy {
            let mut entries = vec![kv("loops", h.loops), kv("window", h.window)];
            for (d, e) in h.table.entries() {
                let knowledge = match e.knowledge {
                    Knowledge::Exact => "exact",
                    Knowledge::ContainsSummand => "contains",
                };
                let mut value = format!("{} ; {knowledge}", e.group);
                if !e.citation.is_empty() {
                    write!(value, " ; {}", e.citation).unwrap();
                }
                entries.push((format!("pi.{d}"), value));
            }
            push("homotopy", entries);
        }

        let dims = match &self.fibre_dims {
            FibreDims::Derive => "derive".to_string(),
            FibreDims::Unchecked => "none".to_string(),
            FibreDims::Explicit(ds) => ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
        };
        let mut fibre = vec![("dims".to_string(), dims)];
        fibre.extend(self.fibre.iter().map(|g| kv(&g.name, g.degree)));
        push("fibre", fibre);

        push("unknowns", vec![("names".to_string(), self.unknowns.join(", "))]);

        let differentials = self
            .differentials
            .images
            .iter()
            .map(|((g, r), image)| (format!("d{r}({g})"), display_image(&self.base, image)))
            .collect();
        push("differentials", differentials);

        if let Some(g) = &self.gauge {
            let mut entries = vec![kv("unknown", &g.unknown), kv("modulus", g.rule.modulus())];
            for (label, residues) in g.rule.classes() {
                let rs: Vec<String> = residues.iter().map(u32::to_string).collect();
                entries.push((format!("class.{label}"), rs.join(", ")));
            }
            for (label, v) in g.rule.known() {
                entries.push((format!("known.{label}"), u8::from(*v).to_string()));
            }
            push("gauge", entries);
        }

        if let Some(s) = &self.steenrod {
            let unlisted = match s.unlisted {
                Unlisted::Error => "error",
                Unlisted::Zero => "zero",
            };
            let mut entries = vec![kv("unlisted", unlisted)];
            for (g, i, p) in &s.entries {
                entries.push((format!("sq.{i}({g})"), self.base.display_polynomial(p)));
            }
            push("steenrod", entries);
        }
        out
    }

    /// Canonical text form; `parse_config(emit(c)) == c`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for (i, (name, entries)) in self.sections().iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            writeln!(out, "[{name}]").unwrap();
            for (k, v) in entries {
                writeln!(out, "{k} = {v}").unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let sections: Vec<JsonSection> = self
            .sections()
            .into_iter()
            .map(|(section, entries)| JsonSection {
                section,
                entries: entries.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect(),
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&sections).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn kv(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn display_image(base: &PolyAlgebraSpec, image: &SymbolicImage) -> String {
    if image.terms.is_empty() {
        return "0".to_string();
    }
    let terms: Vec<String> = image
        .terms
        .iter()
        .map(|t| {
            let mut factors = Vec::new();
            if let Coefficient::Unknown(u) = &t.coefficient {
                factors.push(u.clone());
            }
            if !t.base.is_unit() {
                factors.push(base.display_monomial(&t.base));
            }
            if t.fibre != "1" {
                factors.push(t.fibre.clone());
            }
            if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            }
        })
        .collect();
    terms.join(" + ")
}

#[derive(Serialize, Deserialize)]
struct JsonSection {
    section: String,
    entries: Vec<(String, serde_json::Value)>,
}

struct Entry {
    loc: Location,
    key: String,
    value: String,
}

struct Section {
    loc: Location,
    name: String,
    entries: Vec<Entry>,
}

fn lex(text: &str, errors: &mut Vec<ConfigError>) -> Vec<Section> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let loc = Location::Line(idx + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) => sections.push(Section { loc, name: name.trim().to_string(), entries: Vec::new() }),
                None => errors.push(ConfigError::new(loc, format!("malformed section header `{line}`"))),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError::new(loc, format!("expected `key = value`, found `{line}`")));
            continue;
        };
        let entry = Entry { loc: loc.clone(), key: key.trim().to_string(), value: value.trim().to_string() };
        match sections.last_mut() {
            Some(s) => s.entries.push(entry),
            None => errors.push(ConfigError::new(loc, "entry before any section header")),
        }
    }
    sections
}

/// Parses the text form, reporting every problem with its line.
pub fn parse_config(text: &str) -> Result<WorkbenchConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let sections = lex(text, &mut errors);
    build(sections, errors)
}

/// Parses the JSON form.
pub fn parse_json_config(text: &str) -> Result<WorkbenchConfig, ConfigErrors> {
    let raw: Vec<JsonSection> = serde_json::from_str(text)
        .map_err(|e| ConfigErrors(vec![ConfigError::new(Location::Input, format!("invalid JSON config: {e}"))]))?;
    let mut errors = Vec::new();
    let mut sections = Vec::new();
    for (si, s) in raw.into_iter().enumerate() {
        let mut entries = Vec::new();
        for (ei, (key, value)) in s.entries.into_iter().enumerate() {
            let loc = Location::Json { section: si, entry: Some(ei) };
            let value = match value {
                serde_json::Value::String(v) => v,
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    errors.push(ConfigError::new(loc, format!("value must be a string or number, found {other}")));
                    continue;
                }
            };
            entries.push(Entry { loc, key, value: value.trim().to_string() });
        }
        sections.push(Section { loc: Location::Json { section: si, entry: None }, name: s.section, entries });
    }
    build(sections, errors)
}

/// Reads a config file; `.json` files use the JSON form.
pub fn load(path: &Path) -> Result<WorkbenchConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let parsed = if path.extension().is_some_and(|e| e == "json") { parse_json_config(&text) } else { parse_config(&text) };
    Ok(parsed?)
}

struct Ctx {
    errors: Vec<ConfigError>,
}

impl Ctx {
    fn err(&mut self, loc: &Location, message: impl Into<String>) {
        self.errors.push(ConfigError::new(loc.clone(), message));
    }

    fn uint(&mut self, e: &Entry, what: &str) -> Option<u32> {
        parse_uint(&e.value).map_err(|m| self.err(&e.loc, format!("{what}: {m}"))).ok()
    }

    fn positive(&mut self, e: &Entry, what: &str) -> Option<u32> {
        match self.uint(e, what)? {
            0 => {
                self.err(&e.loc, format!("{what}: must be positive"));
                None
            }
            n => Some(n),
        }
    }

    /// Entries keyed exactly; duplicates and unknown keys are errors.
    fn keyed<'a>(&mut self, s: &'a Section, allowed: &[&str]) -> BTreeMap<&'a str, &'a Entry> {
        let mut out = BTreeMap::new();
        for e in &s.entries {
            if !allowed.contains(&e.key.as_str()) {
                self.err(&e.loc, format!("unknown key `{}` in [{}]", e.key, s.name));
            } else if out.insert(e.key.as_str(), e).is_some() {
                self.err(&e.loc, format!("duplicate key `{}`", e.key));
            }
        }
        out
    }
}

fn parse_uint(s: &str) -> Result<u32, String> {
    if let Some(rest) = s.strip_prefix('-') {
        if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
            return Err(format!("expected a nonnegative integer, found negative `{s}`"));
        }
    }
    s.parse::<u32>().map_err(|_| format!("expected a nonnegative integer, found `{s}`"))
}

fn parse_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect()
}

/// `0`, `Z`, `Z^n`, `Z/n`, joined by `+`.
pub fn parse_group(s: &str) -> Result<FgAbelianGroup, String> {
    let mut rank = 0;
    let mut torsion = Vec::new();
    for part in s.split('+').map(str::trim) {
        if part == "0" {
            continue;
        } else if part == "Z" {
            rank += 1;
        } else if let Some(n) = part.strip_prefix("Z^") {
            rank += n.trim().parse::<u32>().map_err(|_| format!("bad free rank in `{part}`"))?;
        } else if let Some(n) = part.strip_prefix("Z/") {
            torsion.push(n.trim().parse::<u64>().map_err(|_| format!("bad torsion order in `{part}`"))?);
        } else {
            return Err(format!("cannot read group summand `{part}`; use 0, Z, Z^n or Z/n"));
        }
    }
    FgAbelianGroup::new(rank, torsion).map_err(|e| e.to_string())
}

fn parse_dim_bound(s: &str) -> Result<DimBound, String> {
    match s.strip_prefix(">=") {
        Some(n) => parse_uint(n.trim()).map(DimBound::AtLeast),
        None => parse_uint(s).map(DimBound::Exact),
    }
}

/// One product of named factors, `name` or `name^k`, or `1`.
fn parse_factors(s: &str) -> Result<Vec<(String, u32)>, String> {
    let mut out = Vec::new();
    for f in s.split('*').map(str::trim) {
        if f == "1" {
            continue;
        }
        let (name, exp) = match f.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| format!("bad exponent in `{f}`"))?),
            None => (f, 1),
        };
        if !parse_name(name) {
            return Err(format!("`{f}` is not a factor"));
        }
        out.push((name.to_string(), exp));
    }
    Ok(out)
}

fn parse_polynomial(base: &PolyAlgebraSpec, s: &str) -> Result<Polynomial, String> {
    let mut p = Polynomial::zero();
    if s == "0" {
        return Ok(p);
    }
    for term in s.split('+').map(str::trim) {
        let mut exps = vec![0; base.arity()];
        for (name, e) in parse_factors(term)? {
            let idx = base.index_of(&name).ok_or_else(|| format!("unknown generator `{name}`"))?;
            exps[idx] += e;
        }
        p.add_monomial(Monomial::from_exponents(exps));
    }
    Ok(p)
}

fn parse_image(
    base: &PolyAlgebraSpec,
    fibre: &[FibreGenerator],
    unknowns: &[String],
    s: &str,
) -> Result<SymbolicImage, String> {
    if s == "0" {
        return Ok(SymbolicImage::default());
    }
    let mut terms = Vec::new();
    for term in s.split('+').map(str::trim) {
        let mut exps = vec![0; base.arity()];
        let mut coefficient = Coefficient::One;
        let mut fibre_name = None;
        for (name, e) in parse_factors(term)? {
            if let Some(idx) = base.index_of(&name) {
                exps[idx] += e;
            } else if unknowns.contains(&name) {
                if e != 1 || coefficient != Coefficient::One {
                    return Err(format!("term `{term}` must use at most one unknown, to the first power"));
                }
                coefficient = Coefficient::Unknown(name);
            } else if fibre.iter().any(|g| g.name == name) {
                if e != 1 || fibre_name.is_some() {
                    return Err(format!("term `{term}` must use at most one fibre generator, to the first power"));
                }
                fibre_name = Some(name);
            } else {
                return Err(format!("unknown symbol `{name}` in `{term}`"));
            }
        }
        terms.push(ImageTerm {
            coefficient,
            base: Monomial::from_exponents(exps),
            fibre: fibre_name.unwrap_or_else(|| "1".to_string()),
        });
    }
    Ok(SymbolicImage::new(terms))
}

/// `prefix` `digits` `(` name `)`, e.g. `d6(u5)` or `sq.2(x4)`.
fn parse_indexed_key<'a>(key: &'a str, prefix: &str) -> Option<(u32, &'a str)> {
    let rest = key.strip_prefix(prefix)?;
    let (num, rest) = rest.split_once('(')?;
    let name = rest.strip_suffix(')')?.trim();
    Some((num.trim().parse().ok()?, name))
}

fn build(sections: Vec<Section>, errors: Vec<ConfigError>) -> Result<WorkbenchConfig, ConfigErrors> {
    let mut cx = Ctx { errors };
    let mut by_name: BTreeMap<&str, &Section> = BTreeMap::new();
    for s in &sections {
        if !SECTIONS.contains(&s.name.as_str()) {
            cx.err(&s.loc, format!("unknown section [{}]", s.name));
        } else if by_name.insert(s.name.as_str(), s).is_some() {
            cx.err(&s.loc, format!("duplicate section [{}]", s.name));
        }
    }

    // [base]
    let base = match by_name.get("base") {
        None => {
            cx.err(&Location::Input, "missing base section");
            None
        }
        Some(s) => {
            let mut gens = Vec::new();
            let mut seen = BTreeSet::new();
            for e in &s.entries {
                if !parse_name(&e.key) {
                    cx.err(&e.loc, format!("`{}` is not a valid generator name", e.key));
                } else if !seen.insert(e.key.clone()) {
                    cx.err(&e.loc, format!("duplicate generator `{}`", e.key));
                } else if let Some(d) = cx.positive(e, &format!("degree of `{}`", e.key)) {
                    gens.push(Generator::new(e.key.clone(), d));
                }
            }
            match PolyAlgebraSpec::new(gens) {
                Ok(a) => Some(a),
                Err(err) => {
                    cx.err(&s.loc, err.to_string());
                    None
                }
            }
        }
    };

    // [workbench]
    let degree_bound = match by_name.get("workbench") {
        None => {
            cx.err(&Location::Input, "missing workbench section");
            None
        }
        Some(s) => {
            let keys = cx.keyed(s, &["degree_bound"]);
            match keys.get("degree_bound") {
                Some(e) => cx.positive(e, "degree_bound"),
                None => {
                    cx.err(&s.loc, "[workbench] needs degree_bound");
                    None
                }
            }
        }
    };

    // [homotopy]
    let homotopy = by_name.get("homotopy").and_then(|s| {
        let mut loops = 0;
        let mut window = 5;
        let mut table = HomotopyTable::new();
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for e in &s.entries {
            if !seen.insert(e.key.as_str()) {
                cx.err(&e.loc, format!("duplicate key `{}`", e.key));
                ok = false;
                continue;
            }
            match e.key.as_str() {
                "loops" => loops = cx.uint(e, "loops").unwrap_or_else(|| { ok = false; 0 }),
                "window" => window = cx.positive(e, "window").unwrap_or_else(|| { ok = false; 5 }),
                k => {
                    let Some(d) = k.strip_prefix("pi.") else {
                        cx.err(&e.loc, format!("unknown key `{k}` in [homotopy]"));
                        ok = false;
                        continue;
                    };
                    let degree = match parse_uint(d) {
                        Ok(0) | Err(_) => {
                            cx.err(&e.loc, format!("`{k}`: homotopy degree must be a positive integer"));
                            ok = false;
                            continue;
                        }
                        Ok(n) => n,
                    };
                    let mut parts = e.value.splitn(3, ';').map(str::trim);
                    let group = parts.next().unwrap_or("");
                    let knowledge = parts.next().unwrap_or("exact");
                    let citation = parts.next().unwrap_or("");
                    let group = match parse_group(group) {
                        Ok(g) => g,
                        Err(m) => {
                            cx.err(&e.loc, m);
                            ok = false;
                            continue;
                        }
                    };
                    let entry = match knowledge {
                        "exact" => TableEntry::exact(group, citation),
                        "contains" => TableEntry::contains(group, citation),
                        other => {
                            cx.err(&e.loc, format!("knowledge must be `exact` or `contains`, found `{other}`"));
                            ok = false;
                            continue;
                        }
                    };
                    table.insert(degree, entry).expect("degree is positive");
                }
            }
        }
        ok.then_some(HomotopySection { loops, window, table })
    });

    // [unknowns]
    let unknowns: Vec<String> = match by_name.get("unknowns") {
        None => Vec::new(),
        Some(s) => {
            let keys = cx.keyed(s, &["names"]);
            let mut names = Vec::new();
            if let Some(e) = keys.get("names") {
                for n in split_list(&e.value) {
                    if !parse_name(n) {
                        cx.err(&e.loc, format!("`{n}` is not a valid name"));
                    } else if names.iter().any(|m| m == n) {
                        cx.err(&e.loc, format!("unknown `{n}` is listed twice"));
                    } else {
                        names.push(n.to_string());
                    }
                }
            }
            names
        }
    };

    // [fibre]
    let mut fibre = Vec::new();
    let mut fibre_dims = if homotopy.is_some() { FibreDims::Derive } else { FibreDims::Unchecked };
    let fibre_loc = by_name.get("fibre").map(|s| s.loc.clone()).unwrap_or(Location::Input);
    if let Some(s) = by_name.get("fibre") {
        let mut seen = BTreeSet::new();
        for e in &s.entries {
            if !seen.insert(e.key.as_str()) {
                cx.err(&e.loc, format!("duplicate key `{}`", e.key));
            } else if e.key == "dims" {
                fibre_dims = match e.value.as_str() {
                    "derive" => {
                        if !by_name.contains_key("homotopy") {
                            cx.err(&e.loc, "`dims = derive` needs a [homotopy] section");
                        }
                        FibreDims::Derive
                    }
                    "none" => FibreDims::Unchecked,
                    list => {
                        let parsed: Result<Vec<DimBound>, String> = split_list(list).into_iter().map(parse_dim_bound).collect();
                        match parsed {
                            Ok(ds) if ds.first().is_some_and(|d| *d != DimBound::Exact(1)) => {
                                cx.err(&e.loc, "dims must start with 1 in degree 0");
                                FibreDims::Unchecked
                            }
                            Ok(ds) => FibreDims::Explicit(ds),
                            Err(m) => {
                                cx.err(&e.loc, format!("dims: {m}"));
                                FibreDims::Unchecked
                            }
                        }
                    }
                };
            } else if !parse_name(&e.key) {
                cx.err(&e.loc, format!("`{}` is not a valid generator name", e.key));
            } else if let Some(d) = cx.positive(e, &format!("degree of `{}`", e.key)) {
                fibre.push(FibreGenerator::new(e.key.clone(), d));
            }
        }
    }

    let truncation = match (&fibre_dims, &homotopy) {
        (FibreDims::Derive, Some(h)) => match h.truncation() {
            Ok(t) => Some(t),
            Err(e) => {
                cx.err(&fibre_loc, format!("cannot derive fibre dimensions: incomplete homotopy table: {e}"));
                None
            }
        },
        (FibreDims::Explicit(ds), _) => {
            let mut t = GradedDims::new();
            for (d, b) in ds.iter().enumerate() {
                t.set(d as u32, *b);
            }
            Some(t)
        }
        _ => None,
    };

    // Explicit dims must also agree with the homotopy-derived ones.
    if let (FibreDims::Explicit(ds), Some(h)) = (&fibre_dims, &homotopy) {
        if let Ok(derived) = h.truncation() {
            for (d, b) in ds.iter().enumerate() {
                if let Some(e) = derived.get(d as u32) {
                    let compatible = match (*b, e) {
                        (DimBound::Exact(n), _) => e.admits(n),
                        (DimBound::AtLeast(n), DimBound::Exact(m)) => m >= n,
                        (DimBound::AtLeast(_), DimBound::AtLeast(_)) => true,
                    };
                    if !compatible {
                        cx.err(&fibre_loc, format!("dims give {b} in degree {d} but the homotopy section gives {e}"));
                    }
                }
            }
        }
    }

    let spec = match (&base, degree_bound) {
        (Some(b), Some(n)) => match FibrationSpec::new(b.clone(), fibre.clone(), truncation, n, unknowns.clone()) {
            Ok(s) => Some(s),
            Err(e) => {
                cx.err(&fibre_loc, e.to_string());
                None
            }
        },
        _ => None,
    };

    // [differentials]
    let mut differentials = DifferentialAssignment::new();
    if let (Some(s), Some(b)) = (by_name.get("differentials"), &base) {
        for e in &s.entries {
            let Some((r, g)) = parse_indexed_key(&e.key, "d") else {
                cx.err(&e.loc, format!("expected a key like `d6(u5)`, found `{}`", e.key));
                continue;
            };
            if differentials.images.contains_key(&(g.to_string(), r)) {
                cx.err(&e.loc, format!("d{r}({g}) is declared twice"));
                continue;
            }
            match parse_image(b, &fibre, &unknowns, &e.value) {
                Ok(image) => {
                    let single = DifferentialAssignment::new().with_image(g, r, image.clone());
                    if let Some(spec) = &spec {
                        if let Err(err) = single.validate(spec) {
                            cx.err(&e.loc, err.to_string());
                            continue;
                        }
                    }
                    differentials = differentials.with_image(g, r, image);
                }
                Err(m) => cx.err(&e.loc, m),
            }
        }
    }

    // [gauge]
    let gauge = by_name.get("gauge").and_then(|s| {
        let mut unknown = None;
        let mut modulus = None;
        let mut classes = Vec::new();
        let mut known = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for e in &s.entries {
            if !seen.insert(e.key.as_str()) {
                cx.err(&e.loc, format!("duplicate key `{}`", e.key));
                continue;
            }
            match e.key.as_str() {
                "unknown" => unknown = Some(e.value.clone()),
                "modulus" => modulus = cx.positive(e, "modulus"),
                k if k.starts_with("class.") => {
                    let residues: Result<Vec<u32>, String> = split_list(&e.value).into_iter().map(parse_uint).collect();
                    match residues {
                        Ok(rs) => classes.push((k["class.".len()..].to_string(), rs)),
                        Err(m) => cx.err(&e.loc, m),
                    }
                }
                k if k.starts_with("known.") => {
                    let value = match e.value.as_str() {
                        "0" => false,
                        "1" => true,
                        v => {
                            cx.err(&e.loc, format!("known value must be 0 or 1, found `{v}`"));
                            continue;
                        }
                    };
                    known.insert(k["known.".len()..].to_string(), value);
                }
                k => cx.err(&e.loc, format!("unknown key `{k}` in [gauge]")),
            }
        }
        let Some(unknown) = unknown else {
            cx.err(&s.loc, "[gauge] needs `unknown`");
            return None;
        };
        let Some(modulus) = modulus else {
            cx.err(&s.loc, "[gauge] needs a positive `modulus`");
            return None;
        };
        let rule = EpsilonRule::new(modulus, classes, known).map_err(|e| cx.err(&s.loc, e.to_string())).ok()?;
        if let Some(spec) = &spec {
            if let Err(e) = GaugeSetup::new(spec.clone(), differentials.clone(), rule.clone(), unknown.clone()) {
                cx.err(&s.loc, e.to_string());
                return None;
            }
        }
        Some(GaugeSection { unknown, rule })
    });

    // [steenrod]
    let steenrod = match (by_name.get("steenrod"), &base) {
        (Some(s), Some(b)) => {
            let mut unlisted = Unlisted::Error;
            let mut entries = Vec::new();
            let mut seen = BTreeSet::new();
            for e in &s.entries {
                if !seen.insert(e.key.as_str()) {
                    cx.err(&e.loc, format!("duplicate key `{}`", e.key));
                    continue;
                }
                if e.key == "unlisted" {
                    match e.value.as_str() {
                        "error" => unlisted = Unlisted::Error,
                        "zero" => unlisted = Unlisted::Zero,
                        v => cx.err(&e.loc, format!("unlisted must be `error` or `zero`, found `{v}`")),
                    }
                    continue;
                }
                let Some((i, g)) = parse_indexed_key(&e.key, "sq.") else {
                    cx.err(&e.loc, format!("expected a key like `sq.2(x4)`, found `{}`", e.key));
                    continue;
                };
                if b.index_of(g).is_none() {
                    cx.err(&e.loc, format!("unknown generator `{g}`"));
                    continue;
                }
                match parse_polynomial(b, &e.value) {
                    Ok(p) => entries.push((g.to_string(), i, p)),
                    Err(m) => cx.err(&e.loc, m),
                }
            }
            Some(SteenrodSection { unlisted, entries })
        }
        _ => None,
    };

    match (cx.errors.is_empty(), base, degree_bound, spec) {
        (true, Some(base), Some(degree_bound), Some(spec)) => Ok(WorkbenchConfig {
            degree_bound,
            base,
            homotopy,
            fibre_dims,
            fibre,
            unknowns,
            differentials,
            gauge,
            steenrod,
            spec,
        }),
        _ => Err(ConfigErrors(cx.errors)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[workbench]\ndegree_bound = 6\n[base]\nx = 2\n";

    #[test]
    fn empty_text_needs_base() {
        let err = parse_config("").unwrap_err();
        assert!(err.messages().any(|m| m == "missing base section"));
    }

    #[test]
    fn negative_degree_is_located() {
        let err = parse_config("[workbench]\ndegree_bound = 6\n[base]\nx4 = -4\n").unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].location, Location::Line(4));
        assert!(err.0[0].message.contains("negative"));
    }

    #[test]
    fn every_error_is_reported() {
        let text = "[workbench]\ndegree_bound = x\n[base]\na = 2\na = 3\n[colour]\n[unknowns]\nnames = 1bad\nstray\n";
        let err = parse_config(text).unwrap_err();
        let lines: Vec<Location> = err.0.iter().map(|e| e.location.clone()).collect();
        for n in [2, 5, 6, 8, 9] {
            assert!(lines.contains(&Location::Line(n)), "no error at line {n}: {err}");
        }
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = parse_config(&format!("{MINIMAL}[unknowns]\nnamez = a\n")).unwrap_err();
        assert!(err.0[0].message.contains("unknown key"));
    }

    #[test]
    fn minimal_config() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.degree_bound, 6);
        assert!(c.fibre.is_empty());
        assert_eq!(c.fibre_dims, FibreDims::Unchecked);
    }

    #[test]
    fn groups() {
        assert_eq!(parse_group("0").unwrap(), FgAbelianGroup::zero());
        assert_eq!(parse_group("Z + Z/3").unwrap(), FgAbelianGroup::new(1, vec![3]).unwrap());
        assert_eq!(parse_group("Z^2 + Z/2 + Z/4").unwrap().to_string(), "Z^2 + Z/2 + Z/4");
        assert!(parse_group("Q").is_err());
        assert!(parse_group("Z/1").is_err());
    }

    #[test]
    fn images() {
        let base = PolyAlgebraSpec::bg2();
        let fibre = [FibreGenerator::new("u5", 5)];
        let unknowns = ["epsilon".to_string()];
        let im = parse_image(&base, &fibre, &unknowns, "epsilon*x6 + x4^2*u5").unwrap();
        assert_eq!(im.terms.len(), 2);
        assert_eq!(display_image(&base, &im), "epsilon*x6 + x4^2*u5");
        assert!(parse_image(&base, &fibre, &unknowns, "epsilon*epsilon*x6").is_err());
        assert!(parse_image(&base, &fibre, &unknowns, "y*x6").is_err());
        assert!(parse_image(&base, &fibre, &unknowns, "0").unwrap().terms.is_empty());
    }

    #[test]
    fn truncation_gate() {
        let text = "[workbench]\ndegree_bound = 10\n[base]\nx4 = 4\n[fibre]\ndims = 1, 0, 0, 0, 0, >=1\nv3 = 3\nu5 = 5\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.0[0].message.contains("degree 3"), "{err}");
    }

    #[test]
    fn indexed_keys() {
        assert_eq!(parse_indexed_key("d6(u5)", "d"), Some((6, "u5")));
        assert_eq!(parse_indexed_key("sq.2(x4)", "sq."), Some((2, "x4")));
        assert_eq!(parse_indexed_key("d(u5)", "d"), None);
        assert_eq!(parse_indexed_key("d6u5", "d"), None);
    }
}
