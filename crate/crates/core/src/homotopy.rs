//! Finitely generated abelian groups, their mod-2 `Hom`/`Ext`, and the chain
//! homotopy table → loop-space shift → Hurewicz homology → mod-2 cohomology
//! dimensions used to pin down the low-degree cohomology of `Ω³₀G₂`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyError {
    /// A cyclic factor of order below two.
    InvalidTorsion(u64),
    /// Degree 0 is not a valid table key.
    ZeroDegree,
    /// The table has no entry for this degree. `source_degree` is the degree
    /// of the unshifted table the entry would have come from.
    MissingDegree { degree: u32, source_degree: u32 },
    /// Only a summand of the group is known, which is not enough to decide
    /// whether it vanishes.
    Indeterminate { degree: u32 },
    /// The table never reaches a nonzero entry before running out.
    Unbounded { last: u32 },
    /// Hurewicz transfer needs a simply connected space.
    NotSimplyConnected,
    /// A slot documented as 3-primary holds something else.
    NotAThreeGroup(String),
}

impl fmt::Display for HomotopyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyError::InvalidTorsion(n) => write!(f, "cyclic factor order {n} must be at least 2"),
            HomotopyError::ZeroDegree => f.write_str("homotopy table degrees start at 1"),
            HomotopyError::MissingDegree { degree, source_degree } if degree == source_degree => {
                write!(f, "homotopy table has no entry for degree {degree}")
            }
            HomotopyError::MissingDegree { degree, source_degree } => write!(
                f,
                "homotopy table has no entry for degree {degree} (needs degree {source_degree} of the source table)"
            ),
            HomotopyError::Indeterminate { degree } => {
                write!(f, "degree {degree} is only known up to a summand; vanishing is undecided")
            }
            HomotopyError::Unbounded { last } => {
                write!(f, "table is zero through degree {last} and has no further entries")
            }
            HomotopyError::NotSimplyConnected => f.write_str("Hurewicz transfer needs connectivity at least 1"),
            HomotopyError::NotAThreeGroup(g) => write!(f, "expected a finite 3-group, found {g}"),
        }
    }
}

impl core::error::Error for HomotopyError {}

/// `Z^free_rank ⊕ Z/n_1 ⊕ … ⊕ Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: u32,
    // sorted so that equal decompositions compare equal
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: u32, mut torsion: Vec<u64>) -> Result<Self, HomotopyError> {
        if let Some(&bad) = torsion.iter().find(|n| **n < 2) {
            return Err(HomotopyError::InvalidTorsion(bad));
        }
        torsion.sort_unstable();
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    pub fn zero() -> Self {
        FgAbelianGroup::default()
    }

    pub fn integers() -> Self {
        FgAbelianGroup { free_rank: 1, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Result<Self, HomotopyError> {
        Self::new(0, alloc::vec![order])
    }

    pub fn free_rank(&self) -> u32 {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        FgAbelianGroup { free_rank: self.free_rank + other.free_rank, torsion }
    }

    /// Finite group whose order is a power of three.
    pub fn is_three_group(&self) -> bool {
        self.is_finite()
            && self.torsion.iter().all(|&n| {
                let mut n = n;
                while n % 3 == 0 {
                    n /= 3;
                }
                n == 1
            })
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        f.write_str(&parts.join(" + "))
    }
}

/// `dim Hom(g, F_2)`: one per free summand and one per even cyclic factor.
pub fn hom_to_f2(g: &FgAbelianGroup) -> u32 {
    g.free_rank + even_factors(g)
}

/// `dim Ext¹(g, F_2)`: `Ext¹(Z/n, F_2) = F_2/nF_2`, nonzero only for even `n`.
pub fn ext1_to_f2(g: &FgAbelianGroup) -> u32 {
    even_factors(g)
}

fn even_factors(g: &FgAbelianGroup) -> u32 {
    g.torsion.iter().filter(|n| *n % 2 == 0).count() as u32
}

/// `dim H^i(X; F_2)` from `H_{i-1}(X; Z)` and `H_i(X; Z)`; the universal
/// coefficient sequence splits over a field.
pub fn uct_cohomology_dim(h_prev: &FgAbelianGroup, h_cur: &FgAbelianGroup) -> u32 {
    ext1_to_f2(h_prev) + hom_to_f2(h_cur)
}

/// How much of a group is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Knowledge {
    /// The recorded group is the full group.
    Exact,
    /// The full group is only known to contain the recorded group as a
    /// direct summand.
    ContainsSummand,
}

impl Knowledge {
    pub fn and(self, other: Knowledge) -> Knowledge {
        if self == Knowledge::Exact && other == Knowledge::Exact {
            Knowledge::Exact
        } else {
            Knowledge::ContainsSummand
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub group: FgAbelianGroup,
    pub knowledge: Knowledge,
    pub citation: String,
}

impl TableEntry {
    pub fn exact(group: FgAbelianGroup, citation: impl Into<String>) -> Self {
        TableEntry { group, knowledge: Knowledge::Exact, citation: citation.into() }
    }

    pub fn contains(group: FgAbelianGroup, citation: impl Into<String>) -> Self {
        TableEntry { group, knowledge: Knowledge::ContainsSummand, citation: citation.into() }
    }

    /// `Some(true)` if the group is known to vanish, `Some(false)` if known
    /// not to, `None` if undecided.
    pub fn vanishes(&self) -> Option<bool> {
        match (self.knowledge, self.group.is_zero()) {
            (Knowledge::Exact, z) => Some(z),
            (Knowledge::ContainsSummand, false) => Some(false),
            (Knowledge::ContainsSummand, true) => None,
        }
    }
}

/// Homotopy groups `π_i` for a set of degrees `i ≥ 1`. Absent degrees are
/// unknown, never zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomotopyTable {
    entries: BTreeMap<u32, TableEntry>,
    loops: u32,
}

impl HomotopyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: u32, entry: TableEntry) -> Result<(), HomotopyError> {
        if degree == 0 {
            return Err(HomotopyError::ZeroDegree);
        }
        self.entries.insert(degree, entry);
        Ok(())
    }

    pub fn with(mut self, degree: u32, entry: TableEntry) -> Result<Self, HomotopyError> {
        self.insert(degree, entry)?;
        Ok(self)
    }

    pub fn get(&self, degree: u32) -> Result<&TableEntry, HomotopyError> {
        self.entries
            .get(&degree)
            .ok_or(HomotopyError::MissingDegree { degree, source_degree: degree + self.loops })
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &TableEntry)> + '_ {
        self.entries.iter().map(|(d, e)| (*d, e))
    }

    /// Total loop count applied by [`loopspace_shift`] so far.
    pub fn loops(&self) -> u32 {
        self.loops
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }
}

/// The mod-2 homotopy data of `G₂` through degree 8.
///
/// `pi6` must be a finite 3-group; only that fact enters mod-2 results.
/// `pi8` is recorded with the given knowledge level.
pub fn g2_homotopy_table_with(
    pi6: FgAbelianGroup,
    pi8: FgAbelianGroup,
    pi8_knowledge: Knowledge,
) -> Result<HomotopyTable, HomotopyError> {
    if !pi6.is_three_group() || pi6.is_zero() {
        return Err(HomotopyError::NotAThreeGroup(format!("{pi6}")));
    }
    const MT: &str = "Mimura-Toda";
    HomotopyTable::new()
        .with(1, TableEntry::exact(FgAbelianGroup::zero(), "G2 is simply connected"))?
        .with(2, TableEntry::exact(FgAbelianGroup::zero(), "pi_2 of a Lie group vanishes"))?
        .with(3, TableEntry::exact(FgAbelianGroup::integers(), format!("{MT}: pi_3(G2) = Z")))?
        .with(4, TableEntry::exact(FgAbelianGroup::zero(), format!("{MT}: pi_4(G2) = 0")))?
        .with(5, TableEntry::exact(FgAbelianGroup::zero(), format!("{MT}: pi_5(G2) = 0")))?
        .with(6, TableEntry::exact(pi6, format!("{MT}: pi_6(G2) is 3-torsion")))?
        .with(7, TableEntry::exact(FgAbelianGroup::zero(), format!("{MT}: pi_7(G2) = 0")))?
        .with(8, TableEntry { group: pi8, knowledge: pi8_knowledge, citation: format!("{MT}: pi_8(G2) contains 2-torsion") })
}

/// [`g2_homotopy_table_with`] using `π₆ = Z/3` and "π₈ contains Z/2".
pub fn g2_homotopy_table() -> HomotopyTable {
    g2_homotopy_table_with(
        FgAbelianGroup::cyclic(3).expect("valid"),
        FgAbelianGroup::cyclic(2).expect("valid"),
        Knowledge::ContainsSummand,
    )
    .expect("fixed data is valid")
}

/// `π_i(Ω^loops X) ≅ π_{i+loops}(X)` for `i ≥ 1`.
pub fn loopspace_shift(t: &HomotopyTable, loops: u32) -> HomotopyTable {
    let mut out = HomotopyTable { entries: BTreeMap::new(), loops: t.loops + loops };
    for (&d, e) in &t.entries {
        if d > loops {
            let mut e = e.clone();
            if loops > 0 {
                e.citation = format!("pi_{d} of the {loops}-fold delooping; {}", e.citation);
            }
            out.entries.insert(d - loops, e);
        }
    }
    out
}

/// Largest `c` with `π_1 = … = π_c = 0`.
pub fn connectivity(t: &HomotopyTable) -> Result<u32, HomotopyError> {
    let mut c = 0;
    loop {
        let degree = c + 1;
        let entry = match t.get(degree) {
            Ok(e) => e,
            // running off the end of an all-zero table is not a gap
            Err(_) if c > 0 && t.max_degree().is_some_and(|m| m < degree) => {
                return Err(HomotopyError::Unbounded { last: c });
            }
            Err(err) => return Err(err),
        };
        match entry.vanishes() {
            Some(true) => c = degree,
            Some(false) => return Ok(c),
            None => return Err(HomotopyError::Indeterminate { degree }),
        }
    }
}

/// Connectivity capped at `top`; only degrees `1..=top` are consulted.
pub fn connectivity_within(t: &HomotopyTable, top: u32) -> Result<u32, HomotopyError> {
    for degree in 1..=top {
        match t.get(degree)?.vanishes() {
            Some(true) => {}
            Some(false) => return Ok(degree - 1),
            None => return Err(HomotopyError::Indeterminate { degree }),
        }
    }
    Ok(top)
}

/// Where a Hurewicz-transferred homology group came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HurewiczSource {
    /// `H_0 = Z` for a path-connected space.
    PathConnected,
    /// Degrees at or below the connectivity.
    BelowConnectivity,
    /// The first nonvanishing degree, where the classical theorem applies.
    Classical,
    /// Degrees above the first nonvanishing one. The classical theorem does
    /// not cover these; the isomorphism is taken as an asserted input.
    AssertedWindow,
}

impl HurewiczSource {
    pub fn as_str(self) -> &'static str {
        match self {
            HurewiczSource::PathConnected => "path-connected",
            HurewiczSource::BelowConnectivity => "below connectivity",
            HurewiczSource::Classical => "classical Hurewicz",
            HurewiczSource::AssertedWindow => "asserted window",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyEntry {
    pub group: FgAbelianGroup,
    pub knowledge: Knowledge,
    pub source: HurewiczSource,
}

/// Integral homology `H_0..=H_window_top` read off the homotopy table.
///
/// Below the connectivity `c` homology vanishes; for `c < i ≤ window_top`
/// the Hurewicz map is taken to be an isomorphism.
pub fn hurewicz_homology(
    t: &HomotopyTable,
    window_top: u32,
) -> Result<BTreeMap<u32, HomologyEntry>, HomotopyError> {
    let c = connectivity_within(t, window_top)?;
    if c == 0 {
        return Err(HomotopyError::NotSimplyConnected);
    }
    let mut out = BTreeMap::new();
    out.insert(
        0,
        HomologyEntry {
            group: FgAbelianGroup::integers(),
            knowledge: Knowledge::Exact,
            source: HurewiczSource::PathConnected,
        },
    );
    for i in 1..=window_top {
        let entry = if i <= c {
            HomologyEntry { group: FgAbelianGroup::zero(), knowledge: Knowledge::Exact, source: HurewiczSource::BelowConnectivity }
        } else {
            let pi = t.get(i)?;
            let source = if i == c + 1 { HurewiczSource::Classical } else { HurewiczSource::AssertedWindow };
            HomologyEntry { group: pi.group.clone(), knowledge: pi.knowledge, source }
        };
        out.insert(i, entry);
    }
    Ok(out)
}

/// An exact dimension or a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimBound {
    Exact(u32),
    AtLeast(u32),
}

impl DimBound {
    /// The guaranteed lower bound.
    pub fn lower(self) -> u32 {
        match self {
            DimBound::Exact(n) | DimBound::AtLeast(n) => n,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, DimBound::Exact(_))
    }

    pub fn is_known_zero(self) -> bool {
        self == DimBound::Exact(0)
    }

    /// Whether a space of dimension `n` is consistent with this bound.
    pub fn admits(self, n: u32) -> bool {
        match self {
            DimBound::Exact(m) => n == m,
            DimBound::AtLeast(m) => n >= m,
        }
    }
}

impl fmt::Display for DimBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimBound::Exact(n) => write!(f, "{n}"),
            DimBound::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// Mod-2 cohomology dimensions by degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedDims {
    dims: BTreeMap<u32, DimBound>,
}

impl GradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_exact(dims: &[u32]) -> Self {
        GradedDims { dims: dims.iter().enumerate().map(|(d, n)| (d as u32, DimBound::Exact(*n))).collect() }
    }

    pub fn set(&mut self, degree: u32, dim: DimBound) {
        self.dims.insert(degree, dim);
    }

    pub fn get(&self, degree: u32) -> Option<DimBound> {
        self.dims.get(&degree).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, DimBound)> + '_ {
        self.dims.iter().map(|(d, b)| (*d, *b))
    }

    pub fn top(&self) -> Option<u32> {
        self.dims.keys().next_back().copied()
    }
}

/// One degree of the universal-coefficient computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctStep {
    pub degree: u32,
    pub homology: HomologyEntry,
    pub ext_term: u32,
    pub hom_term: u32,
    pub dim: DimBound,
}

/// Per-degree UCT computation on top of [`hurewicz_homology`].
pub fn uct_derivation(t: &HomotopyTable, window_top: u32) -> Result<Vec<UctStep>, HomotopyError> {
    let homology = hurewicz_homology(t, window_top)?;
    let mut steps = Vec::new();
    for (&i, h) in &homology {
        let (ext_term, prev_knowledge) = match i.checked_sub(1).and_then(|p| homology.get(&p)) {
            Some(prev) => (ext1_to_f2(&prev.group), prev.knowledge),
            None => (0, Knowledge::Exact),
        };
        let hom_term = hom_to_f2(&h.group);
        let total = ext_term + hom_term;
        let dim = match h.knowledge.and(prev_knowledge) {
            Knowledge::Exact => DimBound::Exact(total),
            Knowledge::ContainsSummand => DimBound::AtLeast(total),
        };
        steps.push(UctStep { degree: i, homology: h.clone(), ext_term, hom_term, dim });
    }
    Ok(steps)
}

/// `dim H^i(Ω³₀G₂; F_2)` for `i ≤ window_top`, from the shifted table.
pub fn fibre_truncation_dims_through(t: &HomotopyTable, window_top: u32) -> Result<GradedDims, HomotopyError> {
    let mut dims = GradedDims::new();
    for step in uct_derivation(t, window_top)? {
        dims.set(step.degree, step.dim);
    }
    Ok(dims)
}

/// [`fibre_truncation_dims_through`] with the degree-5 window.
pub fn fibre_truncation_dims(t: &HomotopyTable) -> Result<GradedDims, HomotopyError> {
    fibre_truncation_dims_through(t, 5)
}
