//! Cohomology Serre spectral sequence in a bounded total-degree window.
//!
//! With trivial local coefficients `E_2^{s,t} = H^s(B) ⊗ H^t(F)`. The base
//! `B` is a [`PolyAlgebraSpec`]; the fibre is a graded vector space spanned
//! by the unit and a list of named generators. Differentials are declared on
//! fibre generators and extended to `E_2` by the Leibniz rule with base
//! classes as permanent cycles, `d_r(m ⊗ g) = m · d_r(g)`.
//!
//! The window is `s + t ≤ N`. Targets in total degree `N + 1` are kept as a
//! fringe so that differentials leaving degree `N` are computed exactly, but
//! fringe groups are never reported.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::f2::{self, EchelonBasis, F2Error, F2Matrix, F2Vector};
use crate::graded::{AlgebraError, Monomial, PolyAlgebraSpec};
use crate::homotopy::{self, DimBound, GradedDims};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecSeqError {
    ZeroDegreeBound,
    EmptyName,
    DuplicateName(String),
    ZeroFibreDegree(String),
    /// The declared fibre generators disagree with the known dimensions.
    TruncationMismatch { degree: u32, declared: u32, allowed: DimBound },
    UnknownFibreGenerator(String),
    /// The unit of the fibre is a permanent cycle.
    UnitDifferential,
    InvalidPage { generator: String, r: u32 },
    /// An image term has the wrong bidegree for the declared differential.
    ImageBidegree { generator: String, r: u32, term: String },
    UndeclaredUnknown(String),
    UnresolvedUnknown(String),
    /// A declared image is not a cycle on the page where it is used.
    InconsistentAssignment { r: u32, source: Bidegree, target: Bidegree },
    /// `d_r ∘ d_r ≠ 0` at the given source.
    CompositionNonzero { r: u32, at: Bidegree },
    Algebra(AlgebraError),
    LinearAlgebra(F2Error),
}

impl SpecSeqError {
    /// Errors that indicate corrupted internal state rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, SpecSeqError::CompositionNonzero { .. } | SpecSeqError::LinearAlgebra(_))
    }
}

impl fmt::Display for SpecSeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpecSeqError::*;
        match self {
            ZeroDegreeBound => f.write_str("degree bound must be at least 1"),
            EmptyName => f.write_str("names must be nonempty"),
            DuplicateName(n) => write!(f, "name `{n}` is declared more than once"),
            ZeroFibreDegree(n) => write!(f, "fibre generator `{n}` must have degree at least 1"),
            TruncationMismatch { degree, declared, allowed } => write!(
                f,
                "fibre declares {declared} generator(s) in degree {degree}, but the fibre dimension there is {allowed}"
            ),
            UnknownFibreGenerator(n) => write!(f, "unknown fibre generator `{n}`"),
            UnitDifferential => f.write_str("the fibre unit is a permanent cycle and takes no differential"),
            InvalidPage { generator, r } => write!(f, "differential d{r}({generator}) is on an invalid page"),
            ImageBidegree { generator, r, term } => {
                write!(f, "term `{term}` has the wrong bidegree for d{r}({generator})")
            }
            UndeclaredUnknown(n) => write!(f, "unknown scalar `{n}` is not declared"),
            UnresolvedUnknown(n) => write!(f, "unknown scalar `{n}` has no value"),
            InconsistentAssignment { r, source, target } => write!(
                f,
                "d{r} from {source} lands outside the cycles of {target}; the assignment is inconsistent"
            ),
            CompositionNonzero { r, at } => write!(f, "d{r} composed with itself is nonzero at {at}"),
            Algebra(e) => write!(f, "{e}"),
            LinearAlgebra(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SpecSeqError {}

impl From<AlgebraError> for SpecSeqError {
    fn from(e: AlgebraError) -> Self {
        SpecSeqError::Algebra(e)
    }
}

impl From<F2Error> for SpecSeqError {
    fn from(e: F2Error) -> Self {
        SpecSeqError::LinearAlgebra(e)
    }
}

/// Position `(s, t)`: base degree `s`, fibre degree `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub s: u32,
    pub t: u32,
}

impl Bidegree {
    pub const fn new(s: u32, t: u32) -> Self {
        Bidegree { s, t }
    }

    pub fn total(self) -> u32 {
        self.s + self.t
    }

    /// Target of `d_r`, if the fibre degree stays nonnegative.
    pub fn d_target(self, r: u32) -> Option<Bidegree> {
        (self.t + 1).checked_sub(r).map(|t| Bidegree::new(self.s + r, t))
    }

    /// Source of a `d_r` landing here.
    pub fn d_source(self, r: u32) -> Option<Bidegree> {
        self.s.checked_sub(r).map(|s| Bidegree::new(s, self.t + r - 1))
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FibreGenerator {
    pub name: String,
    pub degree: u32,
}

impl FibreGenerator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        FibreGenerator { name: name.into(), degree }
    }
}

/// Index into the fibre basis: `0` is the unit, `i ≥ 1` is generator `i-1`.
pub type FibreIndex = usize;

pub const UNIT: FibreIndex = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationSpec {
    base: PolyAlgebraSpec,
    fibre: Vec<FibreGenerator>,
    truncation: Option<GradedDims>,
    degree_bound: u32,
    unknowns: Vec<String>,
}

impl FibrationSpec {
    /// Validates names and checks the fibre generators against
    /// `truncation` in every degree it covers.
    pub fn new(
        base: PolyAlgebraSpec,
        fibre: Vec<FibreGenerator>,
        truncation: Option<GradedDims>,
        degree_bound: u32,
        unknowns: Vec<String>,
    ) -> Result<Self, SpecSeqError> {
        if degree_bound == 0 {
            return Err(SpecSeqError::ZeroDegreeBound);
        }
        let mut names: BTreeSet<&str> = base.generators().iter().map(|g| g.name.as_str()).collect();
        names.insert("1");
        for n in fibre.iter().map(|g| g.name.as_str()).chain(unknowns.iter().map(String::as_str)) {
            if n.is_empty() {
                return Err(SpecSeqError::EmptyName);
            }
            if !names.insert(n) {
                return Err(SpecSeqError::DuplicateName(n.into()));
            }
        }
        if let Some(g) = fibre.iter().find(|g| g.degree == 0) {
            return Err(SpecSeqError::ZeroFibreDegree(g.name.clone()));
        }
        if let Some(dims) = &truncation {
            for (degree, allowed) in dims.iter() {
                let declared = if degree == 0 { 1 } else { fibre.iter().filter(|g| g.degree == degree).count() as u32 };
                if !allowed.admits(declared) {
                    return Err(SpecSeqError::TruncationMismatch { degree, declared, allowed });
                }
            }
        }
        Ok(FibrationSpec { base, fibre, truncation, degree_bound, unknowns })
    }

    /// `Ω³₀G₂ → BG_k → BG₂` in total degree ≤ 10: base `F_2[x4,x6,x7]`,
    /// fibre truncation from the homotopy pipeline with `M⁵` spanned by
    /// `u5`, and one unknown scalar `epsilon`.
    pub fn g2() -> Self {
        let truncation = homotopy::fibre_truncation_dims(&homotopy::loopspace_shift(&homotopy::g2_homotopy_table(), 3))
            .expect("fixed homotopy data is complete");
        Self::new(
            PolyAlgebraSpec::bg2(),
            vec![FibreGenerator::new("u5", 5)],
            Some(truncation),
            10,
            vec![String::from("epsilon")],
        )
        .expect("fixed spec is valid")
    }

    pub fn base(&self) -> &PolyAlgebraSpec {
        &self.base
    }

    pub fn fibre(&self) -> &[FibreGenerator] {
        &self.fibre
    }

    pub fn truncation(&self) -> Option<&GradedDims> {
        self.truncation.as_ref()
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn fibre_index(&self, name: &str) -> Option<FibreIndex> {
        if name == "1" {
            return Some(UNIT);
        }
        self.fibre.iter().position(|g| g.name == name).map(|i| i + 1)
    }

    pub fn fibre_degree(&self, index: FibreIndex) -> u32 {
        if index == UNIT {
            0
        } else {
            self.fibre[index - 1].degree
        }
    }

    pub fn fibre_name(&self, index: FibreIndex) -> &str {
        if index == UNIT {
            "1"
        } else {
            &self.fibre[index - 1].name
        }
    }

    /// Fibre basis elements in degree `t`, in declaration order.
    pub fn fibre_in_degree(&self, t: u32) -> Vec<FibreIndex> {
        if t == 0 {
            return vec![UNIT];
        }
        (1..=self.fibre.len()).filter(|&i| self.fibre[i - 1].degree == t).collect()
    }

    pub fn display_label(&self, label: &Label) -> String {
        let base = self.base.display_monomial(&label.base);
        match (label.base.is_unit(), label.fibre == UNIT) {
            (_, true) => base,
            (true, false) => String::from(self.fibre_name(label.fibre)),
            (false, false) => format!("{base}*{}", self.fibre_name(label.fibre)),
        }
    }

    /// Displays a vector over the labels of `group` as a sum.
    pub fn display_vector(&self, group: &[Label], v: &F2Vector) -> String {
        if v.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = v.support().map(|i| self.display_label(&group[i])).collect();
        parts.join(" + ")
    }
}

/// `E_2` basis element `m ⊗ g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub base: Monomial,
    pub fibre: FibreIndex,
}

/// Labels of `E_2^{s,t}` for every nonempty bidegree up to a total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedBasis {
    top: u32,
    groups: BTreeMap<Bidegree, Vec<Label>>,
}

impl BigradedBasis {
    pub fn top(&self) -> u32 {
        self.top
    }

    /// Labels at `b`; empty for vanishing or out-of-range bidegrees.
    pub fn group(&self, b: Bidegree) -> &[Label] {
        self.groups.get(&b).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.group(b).len()
    }

    /// Nonempty bidegrees in `(s, t)` order.
    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.groups.keys().copied()
    }

    pub fn index_of(&self, b: Bidegree, label: &Label) -> Option<usize> {
        self.group(b).iter().position(|l| l == label)
    }
}

/// `E_2^{s,t} = H^s(B) ⊗ H^t(F)` for `s + t ≤ N`.
pub fn build_e2(spec: &FibrationSpec) -> BigradedBasis {
    build_e2_through(spec, spec.degree_bound)
}

fn build_e2_through(spec: &FibrationSpec, top: u32) -> BigradedBasis {
    let mut groups = BTreeMap::new();
    for s in 0..=top {
        let monomials = spec.base.basis_in_degree(s);
        if monomials.is_empty() {
            continue;
        }
        for t in 0..=top - s {
            let fibre = spec.fibre_in_degree(t);
            if fibre.is_empty() {
                continue;
            }
            let labels: Vec<Label> = monomials
                .iter()
                .flat_map(|m| fibre.iter().map(move |&g| Label { base: m.clone(), fibre: g }))
                .collect();
            groups.insert(Bidegree::new(s, t), labels);
        }
    }
    BigradedBasis { top, groups }
}

/// A potential differential `d_r : E_r^{source} → E_r^{target}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub r: u32,
    pub source: Bidegree,
    pub target: Bidegree,
}

/// All `(r, source, target)` with both groups nonzero at `E_2`, source in
/// the window and target within one degree of it. Purely combinatorial.
pub fn admissible_differentials(spec: &FibrationSpec) -> Vec<Arrow> {
    let e2 = build_e2_through(spec, spec.degree_bound + 1);
    let mut out = Vec::new();
    for source in e2.bidegrees().filter(|b| b.total() <= spec.degree_bound) {
        for r in 2..=source.t + 1 {
            let target = source.d_target(r).expect("r ≤ t + 1");
            if e2.dim(target) > 0 {
                out.push(Arrow { r, source, target });
            }
        }
    }
    out
}

/// Which pages a log entry covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PageRange {
    Single(u32),
    From(u32),
}

impl fmt::Display for PageRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageRange::Single(r) => write!(f, "{r}"),
            PageRange::From(r) => write!(f, ">={r}"),
        }
    }
}

/// Why a `(page, source)` pair can or cannot carry a differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    /// The base has no classes in the target's base degree.
    BaseVanishes { degree: u32 },
    /// The fibre has no classes in the target's fibre degree.
    FibreVanishes { degree: u32 },
    /// The target would have negative fibre degree.
    NegativeFibreDegree,
    /// The target lies beyond the window's fringe.
    OutsideWindow,
}

impl Verdict {
    /// Stable machine-readable reason code.
    pub fn code(self) -> &'static str {
        match self {
            Verdict::Admissible => "admissible",
            Verdict::BaseVanishes { .. } => "base-zero",
            Verdict::FibreVanishes { .. } => "fibre-zero",
            Verdict::NegativeFibreDegree => "negative-fibre-degree",
            Verdict::OutsideWindow => "outside-window",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EliminationEntry {
    pub source: Bidegree,
    pub pages: PageRange,
    pub target: Option<Bidegree>,
    pub verdict: Verdict,
}

/// Page-by-page case analysis for every fibre-positive source in the
/// window: one entry per `2 ≤ r ≤ t + 1`, then one entry for all `r ≥ t + 2`.
pub fn elimination_log(spec: &FibrationSpec) -> Vec<EliminationEntry> {
    let n = spec.degree_bound;
    let e2 = build_e2_through(spec, n + 1);
    let mut out = Vec::new();
    for source in e2.bidegrees().filter(|b| b.total() <= n && b.t >= 1) {
        for r in 2..=source.t + 1 {
            let target = source.d_target(r).expect("r ≤ t + 1");
            let verdict = if target.total() > n + 1 {
                Verdict::OutsideWindow
            } else if spec.base.basis_in_degree(target.s).is_empty() {
                Verdict::BaseVanishes { degree: target.s }
            } else if spec.fibre_in_degree(target.t).is_empty() {
                Verdict::FibreVanishes { degree: target.t }
            } else {
                Verdict::Admissible
            };
            out.push(EliminationEntry { source, pages: PageRange::Single(r), target: Some(target), verdict });
        }
        out.push(EliminationEntry {
            source,
            pages: PageRange::From(source.t + 2),
            target: None,
            verdict: Verdict::NegativeFibreDegree,
        });
    }
    out
}

/// Scalar multiplying one image term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    One,
    Unknown(String),
}

/// `coefficient · base ⊗ fibre`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImageTerm {
    pub coefficient: Coefficient,
    pub base: Monomial,
    pub fibre: String,
}

/// An `E_2`-level image, possibly involving unknown scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicImage {
    pub terms: Vec<ImageTerm>,
}

impl SymbolicImage {
    pub fn new(terms: Vec<ImageTerm>) -> Self {
        SymbolicImage { terms }
    }

    /// `coefficient · base ⊗ 1`, the common transgression-style shape.
    pub fn base_class(coefficient: Coefficient, base: Monomial) -> Self {
        SymbolicImage { terms: vec![ImageTerm { coefficient, base, fibre: String::from("1") }] }
    }
}

/// Differential values on fibre generators plus values for unknown scalars.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DifferentialAssignment {
    pub values: BTreeMap<String, bool>,
    pub images: BTreeMap<(String, u32), SymbolicImage>,
}

/// Images with every coefficient evaluated, keyed by `(generator, page)`.
pub type ResolvedImages = BTreeMap<(FibreIndex, u32), BTreeSet<Label>>;

impl DifferentialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_value(mut self, name: impl Into<String>, value: bool) -> Self {
        self.values.insert(name.into(), value);
        self
    }

    pub fn with_image(mut self, generator: impl Into<String>, r: u32, image: SymbolicImage) -> Self {
        self.images.insert((generator.into(), r), image);
        self
    }

    /// `d_6(u5) = epsilon · x6`.
    pub fn g2_template() -> Self {
        let x6 = PolyAlgebraSpec::bg2().generator("x6").expect("x6 exists");
        Self::new().with_image("u5", 6, SymbolicImage::base_class(Coefficient::Unknown(String::from("epsilon")), x6))
    }

    /// Checks images against the spec without needing unknown values.
    pub fn validate(&self, spec: &FibrationSpec) -> Result<(), SpecSeqError> {
        for ((generator, r), image) in &self.images {
            let g = spec.fibre_index(generator).ok_or_else(|| SpecSeqError::UnknownFibreGenerator(generator.clone()))?;
            if g == UNIT {
                return Err(SpecSeqError::UnitDifferential);
            }
            let t = spec.fibre_degree(g);
            let Some(target) = Bidegree::new(0, t).d_target(*r).filter(|_| *r >= 2) else {
                return Err(SpecSeqError::InvalidPage { generator: generator.clone(), r: *r });
            };
            for term in &image.terms {
                spec.base.check(&term.base)?;
                let fi = spec.fibre_index(&term.fibre).ok_or_else(|| SpecSeqError::UnknownFibreGenerator(term.fibre.clone()))?;
                if spec.base.degree(&term.base) != target.s || spec.fibre_degree(fi) != target.t {
                    let label = Label { base: term.base.clone(), fibre: fi };
                    return Err(SpecSeqError::ImageBidegree {
                        generator: generator.clone(),
                        r: *r,
                        term: spec.display_label(&label),
                    });
                }
                if let Coefficient::Unknown(u) = &term.coefficient {
                    if !spec.unknowns.contains(u) {
                        return Err(SpecSeqError::UndeclaredUnknown(u.clone()));
                    }
                }
            }
        }
        if let Some(u) = self.values.keys().find(|u| !spec.unknowns.contains(u)) {
            return Err(SpecSeqError::UndeclaredUnknown(u.clone()));
        }
        Ok(())
    }

    /// Evaluates all coefficients; every declared unknown needs a value.
    pub fn resolve(&self, spec: &FibrationSpec) -> Result<ResolvedImages, SpecSeqError> {
        self.validate(spec)?;
        if let Some(u) = spec.unknowns.iter().find(|u| !self.values.contains_key(*u)) {
            return Err(SpecSeqError::UnresolvedUnknown(u.clone()));
        }
        let mut out = ResolvedImages::new();
        for ((generator, r), image) in &self.images {
            let g = spec.fibre_index(generator).expect("validated");
            let mut labels = BTreeSet::new();
            for term in &image.terms {
                let on = match &term.coefficient {
                    Coefficient::One => true,
                    Coefficient::Unknown(u) => self.values[u],
                };
                if on {
                    let label = Label { base: term.base.clone(), fibre: spec.fibre_index(&term.fibre).expect("validated") };
                    if !labels.remove(&label) {
                        labels.insert(label);
                    }
                }
            }
            out.insert((g, *r), labels);
        }
        Ok(out)
    }
}

/// `d_r` on `E_2` labels for every source in the window whose target group is
/// nonzero. Matrices are `target_dim × source_dim`; column `j` is the image
/// of the `j`-th source label. Base-row sources never appear.
pub fn leibniz_extend(
    spec: &FibrationSpec,
    assignment: &DifferentialAssignment,
    r: u32,
) -> Result<BTreeMap<Bidegree, F2Matrix>, SpecSeqError> {
    let resolved = assignment.resolve(spec)?;
    let e2 = build_e2_through(spec, spec.degree_bound + 1);
    leibniz_on(spec, &e2, &resolved, r)
}

fn leibniz_on(
    spec: &FibrationSpec,
    e2: &BigradedBasis,
    resolved: &ResolvedImages,
    r: u32,
) -> Result<BTreeMap<Bidegree, F2Matrix>, SpecSeqError> {
    let mut out = BTreeMap::new();
    for source in e2.bidegrees().filter(|b| b.total() <= spec.degree_bound && b.t >= 1) {
        let Some(target) = source.d_target(r) else { continue };
        let target_labels = e2.group(target);
        if target_labels.is_empty() {
            continue;
        }
        let mut m = F2Matrix::zeros(target_labels.len(), e2.dim(source));
        for (j, label) in e2.group(source).iter().enumerate() {
            let Some(image) = resolved.get(&(label.fibre, r)) else { continue };
            for term in image {
                let product = Label { base: label.base.mul(&term.base), fibre: term.fibre };
                let i = e2.index_of(target, &product).ok_or(SpecSeqError::InconsistentAssignment { r, source, target })?;
                m.set(i, j, !m.get(i, j));
            }
        }
        out.insert(source, m);
    }
    Ok(out)
}

/// `Z_r / B_r` inside one `E_2` group, stored as an echelon basis of the
/// boundaries and representatives spanning the cycles modulo boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    ambient: usize,
    boundaries: Vec<F2Vector>,
    reps: Vec<F2Vector>,
}

impl Subquotient {
    pub fn full(ambient: usize) -> Self {
        Subquotient { ambient, boundaries: Vec::new(), reps: (0..ambient).map(|i| F2Vector::unit(ambient, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn boundaries(&self) -> &[F2Vector] {
        &self.boundaries
    }

    /// Representatives in `E_2` coordinates.
    pub fn reps(&self) -> &[F2Vector] {
        &self.reps
    }

    pub fn lift(&self, coords: &F2Vector) -> F2Vector {
        let mut v = F2Vector::zeros(self.ambient);
        for j in coords.support() {
            v.add_assign(&self.reps[j]);
        }
        v
    }

    /// Coordinates of the class of `z` in terms of the representatives, or
    /// `None` when `z` is not a cycle.
    pub fn coordinates(&self, z: &F2Vector) -> Option<F2Vector> {
        let k = self.reps.len();
        let mut rows: Vec<(F2Vector, F2Vector, usize)> = Vec::new();
        let tagged = self
            .boundaries
            .iter()
            .map(|b| (b.clone(), F2Vector::zeros(k)))
            .chain(self.reps.iter().enumerate().map(|(j, v)| (v.clone(), F2Vector::unit(k, j))));
        for (mut v, mut tag) in tagged {
            for (row, row_tag, p) in &rows {
                if v.get(*p) {
                    v.add_assign(row);
                    tag.add_assign(row_tag);
                }
            }
            let p = v.leading_index().expect("boundaries and reps are independent");
            rows.push((v, tag, p));
        }
        let mut v = z.clone();
        let mut tag = F2Vector::zeros(k);
        for (row, row_tag, p) in &rows {
            if v.get(*p) {
                v.add_assign(row);
                tag.add_assign(row_tag);
            }
        }
        v.is_zero().then_some(tag)
    }
}

/// `E_r` in the window plus fringe, with `d_r` once attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    r: u32,
    bound: u32,
    e2: BigradedBasis,
    groups: BTreeMap<Bidegree, Subquotient>,
    differentials: BTreeMap<Bidegree, F2Matrix>,
}

impl Page {
    /// `E_2` with no differentials attached.
    pub fn e2(spec: &FibrationSpec) -> Self {
        let e2 = build_e2_through(spec, spec.degree_bound + 1);
        let groups = e2.bidegrees().map(|b| (b, Subquotient::full(e2.dim(b)))).collect();
        Page { r: 2, bound: spec.degree_bound, e2, groups, differentials: BTreeMap::new() }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn degree_bound(&self) -> u32 {
        self.bound
    }

    pub fn e2_basis(&self) -> &BigradedBasis {
        &self.e2
    }

    pub fn group(&self, b: Bidegree) -> Option<&Subquotient> {
        self.groups.get(&b)
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.groups.get(&b).map_or(0, Subquotient::dim)
    }

    /// `d_r` out of `source`, in page coordinates.
    pub fn differential(&self, source: Bidegree) -> Option<&F2Matrix> {
        self.differentials.get(&source)
    }

    pub fn differentials(&self) -> impl Iterator<Item = (Bidegree, &F2Matrix)> + '_ {
        self.differentials.iter().map(|(b, m)| (*b, m))
    }

    /// Nonzero `d_r` arrows with their ranks.
    pub fn nonzero_arrows(&self) -> Vec<(Arrow, usize)> {
        self.differentials
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&source, m)| {
                let target = source.d_target(self.r).expect("stored differential has a target");
                (Arrow { r: self.r, source, target }, f2::rank(m))
            })
            .collect()
    }

    /// Dimensions of every nonzero group with `s + t ≤ N`.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.groups
            .iter()
            .filter(|(b, g)| b.total() <= self.bound && g.dim() > 0)
            .map(|(b, g)| (*b, g.dim()))
            .collect()
    }

    /// `Σ_{s+t=j} dim E_r^{s,t}` for `j = 0..=N`.
    pub fn total_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.bound as usize + 1];
        for (b, d) in self.dims() {
            out[b.total() as usize] += d;
        }
        out
    }

    /// Representatives at `b` rendered as sums of `E_2` labels.
    pub fn rep_labels(&self, spec: &FibrationSpec, b: Bidegree) -> Vec<String> {
        let Some(group) = self.groups.get(&b) else { return Vec::new() };
        group.reps().iter().map(|v| spec.display_vector(self.e2.group(b), v)).collect()
    }

    /// Installs `d_r` given on `E_2` labels, converting to page coordinates.
    pub fn attach(&mut self, e2_differentials: &BTreeMap<Bidegree, F2Matrix>) -> Result<(), SpecSeqError> {
        let r = self.r;
        let mut installed = BTreeMap::new();
        for (&source, m) in e2_differentials {
            let target = source.d_target(r).ok_or(SpecSeqError::InvalidPage { generator: format!("{source}"), r })?;
            let (Some(src), Some(tgt)) = (self.groups.get(&source), self.groups.get(&target)) else { continue };
            if src.dim() == 0 || tgt.dim() == 0 {
                continue;
            }
            let mut columns = Vec::with_capacity(src.dim());
            for rep in src.reps() {
                let image = m.mul_vec(rep)?;
                let coords = tgt.coordinates(&image).ok_or(SpecSeqError::InconsistentAssignment { r, source, target })?;
                columns.push(coords);
            }
            installed.insert(source, F2Matrix::from_columns(tgt.dim(), &columns)?);
        }
        self.differentials = installed;
        Ok(())
    }

    /// Checks `d_r ∘ d_r = 0` wherever two attached differentials compose.
    pub fn check_composition(&self) -> Result<(), SpecSeqError> {
        for (&source, first) in &self.differentials {
            let Some(mid) = source.d_target(self.r) else { continue };
            if let Some(second) = self.differentials.get(&mid) {
                if !second.mul(first)?.is_zero() {
                    return Err(SpecSeqError::CompositionNonzero { r: self.r, at: source });
                }
            }
        }
        Ok(())
    }
}

/// `E_{r+1} = ker d_r / im d_r` at every bidegree.
pub fn turn_page(p: &Page) -> Result<Page, SpecSeqError> {
    let order: Vec<Bidegree> = p.groups.keys().copied().collect();
    turn_page_in_order(p, &order)
}

pub(crate) fn turn_page_in_order(p: &Page, order: &[Bidegree]) -> Result<Page, SpecSeqError> {
    p.check_composition()?;
    let r = p.r;
    let mut groups = BTreeMap::new();
    for &b in order {
        let group = &p.groups[&b];
        let n = group.dim();
        let kernel = match p.differentials.get(&b) {
            Some(d) => f2::kernel_basis(d),
            None => (0..n).map(|i| F2Vector::unit(n, i)).collect(),
        };
        let image = match b.d_source(r).and_then(|src| p.differentials.get(&src)) {
            Some(d) => f2::image_basis(d),
            None => Vec::new(),
        };
        let kernel_span = EchelonBasis::from_vectors(n, kernel.iter().cloned());
        if image.iter().any(|v| !kernel_span.contains(v)) {
            return Err(SpecSeqError::CompositionNonzero { r, at: b.d_source(r).expect("image has a source") });
        }
        let new_coords = f2::extend_basis(n, &image, &kernel);
        let reps = new_coords.iter().map(|c| group.lift(c)).collect();
        let boundaries = EchelonBasis::from_vectors(
            group.ambient_dim(),
            group.boundaries.iter().cloned().chain(image.iter().map(|c| group.lift(c))),
        )
        .into_rref();
        groups.insert(b, Subquotient { ambient: group.ambient_dim(), boundaries, reps });
    }
    Ok(Page { r: r + 1, bound: p.bound, e2: p.e2.clone(), groups, differentials: BTreeMap::new() })
}

/// Every page from `E_2` to `E_∞` for one fully resolved assignment.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pages: Vec<Page>,
}

impl SpectralSequence {
    /// Turns pages until no admissible differential can act. Each stored
    /// page carries its `d_r`; the last page is `E_∞` and carries none.
    pub fn compute(spec: &FibrationSpec, assignment: &DifferentialAssignment) -> Result<Self, SpecSeqError> {
        let resolved = assignment.resolve(spec)?;
        let last_page = admissible_differentials(spec).iter().map(|a| a.r).max().unwrap_or(1);
        let mut page = Page::e2(spec);
        let mut pages = Vec::new();
        while page.r <= last_page {
            let d = leibniz_on(spec, &page.e2, &resolved, page.r)?;
            page.attach(&d)?;
            let next = turn_page(&page)?;
            pages.push(page);
            page = next;
        }
        pages.push(page);
        Ok(SpectralSequence { pages })
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    /// `E_r`; pages past the last nonzero one are `E_∞`.
    pub fn page(&self, r: u32) -> Option<&Page> {
        let first = self.pages.first()?.r;
        let idx = r.checked_sub(first)? as usize;
        Some(self.pages.get(idx).unwrap_or_else(|| self.einfty()))
    }

    pub fn einfty(&self) -> &Page {
        self.pages.last().expect("at least E_2")
    }
}

/// Associated graded of `H^*` of the total space in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EInftySummary {
    /// `total degree → [(bidegree, dim)]`, nonzero groups only.
    pub by_total: BTreeMap<u32, Vec<(Bidegree, usize)>>,
    /// `Σ dim` per total degree `0..=N`.
    pub total_dims: Vec<usize>,
    /// Representatives per nonzero bidegree.
    pub survivors: BTreeMap<Bidegree, Vec<String>>,
}

impl EInftySummary {
    pub fn of(spec: &FibrationSpec, page: &Page) -> Self {
        let dims = page.dims();
        let mut by_total: BTreeMap<u32, Vec<(Bidegree, usize)>> = BTreeMap::new();
        for (b, d) in &dims {
            by_total.entry(b.total()).or_default().push((*b, *d));
        }
        let survivors = dims.keys().map(|&b| (b, page.rep_labels(spec, b))).collect();
        EInftySummary { by_total, total_dims: page.total_dims(), survivors }
    }
}

pub fn run_to_einfty(
    spec: &FibrationSpec,
    assignment: &DifferentialAssignment,
) -> Result<(Page, EInftySummary), SpecSeqError> {
    let seq = SpectralSequence::compute(spec, assignment)?;
    let einfty = seq.einfty().clone();
    let summary = EInftySummary::of(spec, &einfty);
    Ok((einfty, summary))
}

/// One point of `F_2^{unknowns}` and its `E_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepBranch {
    pub values: BTreeMap<String, bool>,
    pub summary: EInftySummary,
}

/// All `2^n` assignments of the spec's unknowns, in binary counting order
/// with the first declared unknown as the most significant bit. Images come
/// from `template`; its own values are ignored.
pub fn sweep_unknowns(
    spec: &FibrationSpec,
    template: &DifferentialAssignment,
) -> Result<Vec<SweepBranch>, SpecSeqError> {
    let n = spec.unknowns.len();
    let mut out = Vec::with_capacity(1 << n);
    for idx in 0u64..(1u64 << n) {
        let values: BTreeMap<String, bool> =
            spec.unknowns.iter().enumerate().map(|(j, u)| (u.clone(), (idx >> (n - 1 - j)) & 1 == 1)).collect();
        let assignment = DifferentialAssignment { values: values.clone(), images: template.images.clone() };
        let (_, summary) = run_to_einfty(spec, &assignment)?;
        out.push(SweepBranch { values, summary });
    }
    Ok(out)
}
