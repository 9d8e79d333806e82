//! The `G₂` gauge-group analysis: residue rules for the scalar `ε(k)` and a
//! per-`k` report running every undetermined branch to `E_∞`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::specseq::{
    self, Arrow, Bidegree, DifferentialAssignment, EInftySummary, FibrationSpec, SpecSeqError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeError {
    ZeroModulus,
    /// A residue is assigned to no class.
    ResidueUncovered(u32),
    /// A residue is assigned to two classes, or is out of range.
    ResidueInvalid(u32),
    DuplicateClass(String),
    UnknownClass(String),
    /// An override contradicts a proved value.
    ContradictsKnown { label: String, known: bool },
    /// The gauge unknown is not one of the spec's unknowns.
    UnknownScalar(String),
    SpecSeq(SpecSeqError),
}

impl fmt::Display for GaugeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GaugeError::*;
        match self {
            ZeroModulus => f.write_str("modulus must be positive"),
            ResidueUncovered(r) => write!(f, "residue {r} belongs to no class"),
            ResidueInvalid(r) => write!(f, "residue {r} is out of range or in more than one class"),
            DuplicateClass(l) => write!(f, "class `{l}` is declared twice"),
            UnknownClass(l) => write!(f, "no residue class is labelled `{l}`"),
            ContradictsKnown { label, known } => {
                write!(f, "class `{label}` has the known value {}; the override contradicts it", u8::from(*known))
            }
            UnknownScalar(u) => write!(f, "`{u}` is not an unknown of the spectral sequence"),
            SpecSeq(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GaugeError {}

impl From<SpecSeqError> for GaugeError {
    fn from(e: SpecSeqError) -> Self {
        GaugeError::SpecSeq(e)
    }
}

/// Partition of residues mod `modulus` into labelled classes, some with a
/// proved value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonRule {
    modulus: u32,
    classes: Vec<(String, Vec<u32>)>,
    known: BTreeMap<String, bool>,
}

impl EpsilonRule {
    pub fn new(
        modulus: u32,
        classes: Vec<(String, Vec<u32>)>,
        known: BTreeMap<String, bool>,
    ) -> Result<Self, GaugeError> {
        if modulus == 0 {
            return Err(GaugeError::ZeroModulus);
        }
        let mut seen = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for (label, residues) in &classes {
            if !labels.insert(label.as_str()) {
                return Err(GaugeError::DuplicateClass(label.clone()));
            }
            for &r in residues {
                if r >= modulus || !seen.insert(r) {
                    return Err(GaugeError::ResidueInvalid(r));
                }
            }
        }
        if let Some(r) = (0..modulus).find(|r| !seen.contains(r)) {
            return Err(GaugeError::ResidueUncovered(r));
        }
        if let Some(l) = known.keys().find(|l| !labels.contains(l.as_str())) {
            return Err(GaugeError::UnknownClass(l.clone()));
        }
        Ok(EpsilonRule { modulus, classes, known })
    }

    /// Classes `0 = {0}`, `2 = {2}`, `odd = {1, 3}` mod 4, with `ε = 0` on
    /// class `0`.
    pub fn g2() -> Self {
        let classes = vec![
            (String::from("0"), vec![0]),
            (String::from("2"), vec![2]),
            (String::from("odd"), vec![1, 3]),
        ];
        let known = BTreeMap::from([(String::from("0"), false)]);
        Self::new(4, classes, known).expect("fixed rule is valid")
    }

    /// Every residue in its own class, keeping known values of the default
    /// rule's singleton classes.
    pub fn g2_split_odd() -> Self {
        let classes = vec![
            (String::from("0"), vec![0]),
            (String::from("1"), vec![1]),
            (String::from("2"), vec![2]),
            (String::from("3"), vec![3]),
        ];
        let known = BTreeMap::from([(String::from("0"), false)]);
        Self::new(4, classes, known).expect("fixed rule is valid")
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn classes(&self) -> &[(String, Vec<u32>)] {
        &self.classes
    }

    pub fn known(&self) -> &BTreeMap<String, bool> {
        &self.known
    }

    pub fn residue(&self, k: i64) -> u32 {
        k.rem_euclid(i64::from(self.modulus)) as u32
    }

    pub fn has_class(&self, label: &str) -> bool {
        self.classes.iter().any(|(l, _)| l == label)
    }

    /// Class label of `k` and its proved value, if any.
    pub fn epsilon_class(&self, k: i64) -> (&str, Option<bool>) {
        let r = self.residue(k);
        let label = self
            .classes
            .iter()
            .find(|(_, rs)| rs.contains(&r))
            .map(|(l, _)| l.as_str())
            .expect("classes cover every residue");
        (label, self.known.get(label).copied())
    }

    pub fn periodicity_check(&self, k1: i64, k2: i64) -> bool {
        self.residue(k1) == self.residue(k2)
    }
}

/// Class of `k` under the default rule.
pub fn epsilon_class(k: i64) -> (String, Option<bool>) {
    let rule = EpsilonRule::g2();
    let (label, value) = rule.epsilon_class(k);
    (String::from(label), value)
}

/// `k1 ≡ k2 (mod 4)`.
pub fn periodicity_check(k1: i64, k2: i64) -> bool {
    EpsilonRule::g2().periodicity_check(k1, k2)
}

/// One run of the spectral sequence for a fixed value of the unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeBranch {
    pub epsilon: bool,
    /// Values of every unknown used for this run.
    pub values: BTreeMap<String, bool>,
    pub summary: EInftySummary,
}

impl GaugeBranch {
    /// `Σ_{s+t=j} dim E_∞^{s,t}`, `j = 0..=N`.
    pub fn dims(&self) -> &[usize] {
        &self.summary.total_dims
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeReport {
    pub k: i64,
    pub residue: u32,
    pub epsilon_class: String,
    pub known_value: Option<bool>,
    /// Value supplied by an override, if one applied to this class.
    pub override_value: Option<bool>,
    pub branches: Vec<GaugeBranch>,
    /// Admissible differentials with fibre-positive source.
    pub admissible: Vec<Arrow>,
    pub elimination: Vec<specseq::EliminationEntry>,
    pub notes: Vec<String>,
}

impl GaugeReport {
    /// The report with `k` replaced by its residue, for comparing classes.
    pub fn normalized(&self) -> Self {
        GaugeReport { k: i64::from(self.residue), ..self.clone() }
    }
}

/// A fibration with one distinguished unknown controlled by a residue rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSetup {
    pub spec: FibrationSpec,
    pub template: DifferentialAssignment,
    pub rule: EpsilonRule,
    pub unknown: String,
}

impl GaugeSetup {
    pub fn new(
        spec: FibrationSpec,
        template: DifferentialAssignment,
        rule: EpsilonRule,
        unknown: String,
    ) -> Result<Self, GaugeError> {
        if !spec.unknowns().contains(&unknown) {
            return Err(GaugeError::UnknownScalar(unknown));
        }
        template.validate(&spec)?;
        Ok(GaugeSetup { spec, template, rule, unknown })
    }

    /// `d_6(u5) = ε(k)·x6` on the default `G₂` spec with the default rule.
    pub fn g2() -> Self {
        Self::new(FibrationSpec::g2(), DifferentialAssignment::g2_template(), EpsilonRule::g2(), String::from("epsilon"))
            .expect("fixed setup is valid")
    }

    /// Runs every branch compatible with the rule and `overrides`. Other
    /// unknowns of the spec, if any, are taken from `others`.
    pub fn report(
        &self,
        k: i64,
        overrides: &BTreeMap<String, bool>,
        others: &BTreeMap<String, bool>,
    ) -> Result<GaugeReport, GaugeError> {
        for (label, &v) in overrides {
            if !self.rule.has_class(label) {
                return Err(GaugeError::UnknownClass(label.clone()));
            }
            if let Some(&known) = self.rule.known.get(label) {
                if known != v {
                    return Err(GaugeError::ContradictsKnown { label: label.clone(), known });
                }
            }
        }
        let residue = self.rule.residue(k);
        let (label, known_value) = self.rule.epsilon_class(k);
        let override_value = overrides.get(label).copied();
        let values: Vec<bool> = match known_value.or(override_value) {
            Some(v) => vec![v],
            None => vec![false, true],
        };

        let mut notes = Vec::new();
        notes.push(format!("residue {residue} mod {}; class `{label}`", self.rule.modulus));
        match (known_value, override_value) {
            (Some(v), _) => notes.push(format!("{} = {} is proved for this class", self.unknown, u8::from(v))),
            (None, Some(v)) => notes.push(format!("{} = {} is supplied by override", self.unknown, u8::from(v))),
            (None, None) => notes.push(format!("{} is undetermined; both branches are reported", self.unknown)),
        }

        let mut branches = Vec::with_capacity(values.len());
        for epsilon in values {
            let mut assignment = self.template.clone();
            assignment.values = others.clone();
            assignment.values.insert(self.unknown.clone(), epsilon);
            let (_, summary) = specseq::run_to_einfty(&self.spec, &assignment)?;
            branches.push(GaugeBranch { epsilon, values: assignment.values, summary });
        }
        if let [only] = branches.as_slice() {
            let collapses = only.summary.total_dims == total_dims_e2(&self.spec);
            if collapses {
                notes.push(String::from("the spectral sequence collapses at E_2 in the window"));
            }
        }

        Ok(GaugeReport {
            k,
            residue,
            epsilon_class: String::from(label),
            known_value,
            override_value,
            branches,
            admissible: specseq::admissible_differentials(&self.spec),
            elimination: specseq::elimination_log(&self.spec),
            notes,
        })
    }
}

fn total_dims_e2(spec: &FibrationSpec) -> Vec<usize> {
    specseq::Page::e2(spec).total_dims()
}

/// Report for `k` on the default `G₂` setup.
pub fn gauge_report(k: i64, overrides: &BTreeMap<String, bool>) -> Result<GaugeReport, GaugeError> {
    GaugeSetup::g2().report(k, overrides, &BTreeMap::new())
}

/// The bidegrees of `U = H^*(B)·u5` killed in the `ε = 1` branch.
pub fn g2_killed_by_d6() -> [Bidegree; 4] {
    [Bidegree::new(0, 5), Bidegree::new(4, 5), Bidegree::new(6, 0), Bidegree::new(10, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> BTreeMap<String, bool> {
        BTreeMap::new()
    }

    #[test]
    fn class_examples() {
        assert_eq!(epsilon_class(8), ("0".into(), Some(false)));
        assert_eq!(epsilon_class(0), ("0".into(), Some(false)));
        assert_eq!(epsilon_class(7), ("odd".into(), None));
        assert_eq!(epsilon_class(-2), ("2".into(), None));
        assert_eq!(epsilon_class(-1), ("odd".into(), None));
    }

    #[test]
    fn periodicity_examples() {
        assert!(periodicity_check(3, 7));
        assert!(!periodicity_check(1, 2));
        assert!(periodicity_check(-1, 3));
    }

    #[test]
    fn report_for_multiple_of_four_collapses() {
        let r = gauge_report(4, &none()).unwrap();
        assert_eq!(r.branches.len(), 1);
        assert!(!r.branches[0].epsilon);
        assert_eq!(r.branches[0].dims(), [1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1]);
        assert!(r.notes.iter().any(|n| n.contains("collapses")));
    }

    #[test]
    fn report_for_odd_has_two_branches() {
        let r = gauge_report(1, &none()).unwrap();
        let eps: Vec<bool> = r.branches.iter().map(|b| b.epsilon).collect();
        assert_eq!(eps, [false, true]);
        assert_eq!(r.branches[1].dims(), [1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn override_selects_one_branch() {
        let r = gauge_report(1, &BTreeMap::from([("odd".into(), true)])).unwrap();
        assert_eq!(r.branches.len(), 1);
        let survivors = &r.branches[0].summary.survivors;
        for b in g2_killed_by_d6() {
            assert!(!survivors.contains_key(&b), "{b} should be gone");
        }
        // Override for another class leaves this one undetermined.
        assert_eq!(gauge_report(2, &BTreeMap::from([("odd".into(), true)])).unwrap().branches.len(), 2);
    }

    #[test]
    fn bad_overrides() {
        assert_eq!(
            gauge_report(4, &BTreeMap::from([("0".into(), true)])).unwrap_err(),
            GaugeError::ContradictsKnown { label: "0".into(), known: false }
        );
        assert!(gauge_report(4, &BTreeMap::from([("0".into(), false)])).is_ok());
        assert_eq!(
            gauge_report(1, &BTreeMap::from([("five".into(), true)])).unwrap_err(),
            GaugeError::UnknownClass("five".into())
        );
    }

    #[test]
    fn admissible_table_in_report() {
        let r = gauge_report(3, &none()).unwrap();
        let arrows: Vec<(u32, Bidegree, Bidegree)> = r.admissible.iter().map(|a| (a.r, a.source, a.target)).collect();
        assert_eq!(
            arrows,
            [(6, Bidegree::new(0, 5), Bidegree::new(6, 0)), (6, Bidegree::new(4, 5), Bidegree::new(10, 0))]
        );
    }

    #[test]
    fn rule_validation() {
        let c = |l: &str, rs: &[u32]| (String::from(l), rs.to_vec());
        assert_eq!(EpsilonRule::new(0, vec![], BTreeMap::new()), Err(GaugeError::ZeroModulus));
        assert_eq!(
            EpsilonRule::new(4, vec![c("a", &[0, 1]), c("b", &[2])], BTreeMap::new()),
            Err(GaugeError::ResidueUncovered(3))
        );
        assert_eq!(
            EpsilonRule::new(4, vec![c("a", &[0, 1]), c("b", &[1, 2, 3])], BTreeMap::new()),
            Err(GaugeError::ResidueInvalid(1))
        );
        assert_eq!(
            EpsilonRule::new(2, vec![c("a", &[0, 1])], BTreeMap::from([("b".into(), false)])),
            Err(GaugeError::UnknownClass("b".into()))
        );
    }

    #[test]
    fn split_rule_separates_one_and_three() {
        let rule = EpsilonRule::g2_split_odd();
        assert_eq!(rule.epsilon_class(1).0, "1");
        assert_eq!(rule.epsilon_class(-1).0, "3");
    }
}
