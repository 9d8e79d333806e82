//! Unstable Steenrod squares on polynomial algebras and the bounded-degree
//! hit problem.
//!
//! A [`SteenrodTable`] lists `Sq^i` on generators. Once validated it becomes
//! a [`SteenrodAction`], which extends to all polynomials through the total
//! square `Sq = Σ Sq^i`, a ring map, so `Sq(x^e y^f) = Sq(x)^e Sq(y)^f`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::f2::{self, EchelonBasis, F2Vector};
use crate::graded::{AlgebraError, Monomial, PolyAlgebraSpec, Polynomial};

/// What to assume for `Sq^i(g)`, `0 < i < |g|`, when the table is silent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Unlisted {
    #[default]
    Error,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteenrodTable {
    algebra: PolyAlgebraSpec,
    action: BTreeMap<(usize, u32), Polynomial>,
    unlisted: Unlisted,
}

/// How an entry of a table is determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryStatus {
    Given(Polynomial),
    /// Fixed by instability; `Sq^0`, `Sq^{|g|}` and everything above.
    Forced(Polynomial),
    UserSupplied,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    SqZeroNotIdentity,
    TopNotSquare,
    AboveDegreeNonzero,
    Inhomogeneous,
    /// The polynomial does not belong to the table's algebra.
    Malformed,
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub generator: String,
    pub i: u32,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, i) = (&self.generator, self.i);
        match self.kind {
            ViolationKind::SqZeroNotIdentity => write!(f, "Sq0({g}) must equal {g}"),
            ViolationKind::TopNotSquare => write!(f, "Sq{i}({g}) must equal {g}^2"),
            ViolationKind::AboveDegreeNonzero => write!(f, "Sq{i}({g}) must vanish above the degree of {g}"),
            ViolationKind::Inhomogeneous => write!(f, "Sq{i}({g}) is not homogeneous of the right degree"),
            ViolationKind::Malformed => write!(f, "Sq{i}({g}) is not a polynomial in this algebra"),
            ViolationKind::Unspecified => write!(f, "Sq{i}({g}) is not specified"),
        }
    }
}

impl SteenrodTable {
    pub fn new(algebra: PolyAlgebraSpec) -> Self {
        SteenrodTable { algebra, action: BTreeMap::new(), unlisted: Unlisted::Error }
    }

    /// Only the entries fixed by instability, filled explicitly.
    pub fn forced(algebra: PolyAlgebraSpec) -> Self {
        let mut t = Self::new(algebra);
        for (idx, g) in t.algebra.generators().iter().enumerate() {
            let x = Monomial::generator(t.algebra.arity(), idx);
            t.action.insert((idx, 0), Polynomial::from_monomial(x.clone()));
            t.action.insert((idx, g.degree), Polynomial::from_monomial(x.pow(2)));
            t.action.insert((idx, g.degree + 1), Polynomial::zero());
        }
        t
    }

    /// Forced entries only, with every other entry treated as zero.
    pub fn trivial(algebra: PolyAlgebraSpec) -> Self {
        Self::forced(algebra).with_unlisted(Unlisted::Zero)
    }

    pub fn with_unlisted(mut self, unlisted: Unlisted) -> Self {
        self.unlisted = unlisted;
        self
    }

    pub fn set(&mut self, generator: &str, i: u32, value: Polynomial) -> Result<(), AlgebraError> {
        let idx = self.algebra.index_of(generator).ok_or_else(|| AlgebraError::UnknownGenerator(generator.into()))?;
        self.action.insert((idx, i), value);
        Ok(())
    }

    pub fn algebra(&self) -> &PolyAlgebraSpec {
        &self.algebra
    }

    pub fn unlisted(&self) -> Unlisted {
        self.unlisted
    }

    pub fn get(&self, generator: usize, i: u32) -> Option<&Polynomial> {
        self.action.get(&(generator, i))
    }

    /// Explicit entries in `(generator, i)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u32, &Polynomial)> + '_ {
        self.action.iter().map(|(&(g, i), p)| (g, i, p))
    }

    pub fn status(&self, generator: usize, i: u32) -> EntryStatus {
        let degree = self.algebra.generators()[generator].degree;
        let x = Monomial::generator(self.algebra.arity(), generator);
        let forced = if i == 0 {
            Some(Polynomial::from_monomial(x))
        } else if i == degree {
            Some(Polynomial::from_monomial(x.pow(2)))
        } else if i > degree {
            Some(Polynomial::zero())
        } else {
            None
        };
        match (forced, self.action.get(&(generator, i))) {
            (Some(f), Some(p)) if *p == f => EntryStatus::Forced(f),
            (_, Some(p)) => EntryStatus::Given(p.clone()),
            (Some(f), None) => EntryStatus::Forced(f),
            (None, None) => EntryStatus::UserSupplied,
        }
    }

    /// Every instability, homogeneity and completeness violation.
    pub fn validate_table(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let arity = self.algebra.arity();
        for (idx, g) in self.algebra.generators().iter().enumerate() {
            let violation = |i, kind| Violation { generator: g.name.clone(), i, kind };
            let x = Monomial::generator(arity, idx);
            for i in 1..g.degree {
                if self.unlisted == Unlisted::Error && !self.action.contains_key(&(idx, i)) {
                    out.push(violation(i, ViolationKind::Unspecified));
                }
            }
            for (&(_, i), p) in self.action.range((idx, 0)..(idx + 1, 0)) {
                if p.terms().any(|m| self.algebra.check(m).is_err()) {
                    out.push(violation(i, ViolationKind::Malformed));
                    continue;
                }
                if i == 0 && *p != Polynomial::from_monomial(x.clone()) {
                    out.push(violation(i, ViolationKind::SqZeroNotIdentity));
                } else if i == g.degree && *p != Polynomial::from_monomial(x.pow(2)) {
                    out.push(violation(i, ViolationKind::TopNotSquare));
                } else if i > g.degree && !p.is_zero() {
                    out.push(violation(i, ViolationKind::AboveDegreeNonzero));
                } else if p.terms().any(|m| self.algebra.degree(m) != g.degree + i) {
                    out.push(violation(i, ViolationKind::Inhomogeneous));
                }
            }
        }
        out.sort();
        out
    }

    pub fn validate(&self) -> Result<SteenrodAction, Vec<Violation>> {
        let violations = self.validate_table();
        if !violations.is_empty() {
            return Err(violations);
        }
        let arity = self.algebra.arity();
        let generator_squares = self
            .algebra
            .generators()
            .iter()
            .enumerate()
            .map(|(idx, g)| {
                (0..=g.degree)
                    .map(|i| match self.status(idx, i) {
                        EntryStatus::Given(p) | EntryStatus::Forced(p) => p,
                        EntryStatus::UserSupplied => Polynomial::zero(),
                    })
                    .collect()
            })
            .collect();
        Ok(SteenrodAction { algebra: self.algebra.clone(), arity, generator_squares })
    }
}

/// Violations of `t`; empty iff `t` defines an unstable action.
pub fn validate_table(t: &SteenrodTable) -> Vec<Violation> {
    t.validate_table()
}

/// A validated table, ready to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteenrodAction {
    algebra: PolyAlgebraSpec,
    arity: usize,
    /// `generator_squares[g][i] = Sq^i(x_g)` for `0 ≤ i ≤ |x_g|`.
    generator_squares: Vec<Vec<Polynomial>>,
}

/// Truncated total square: entry `a` is the part raised by `a` degrees.
type Graded = Vec<Polynomial>;

fn truncated_mul(a: &Graded, b: &Graded, top: usize) -> Graded {
    let mut out = vec![Polynomial::zero(); top + 1];
    for (i, p) in a.iter().enumerate().take(top + 1) {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate().take(top + 1 - i) {
            if !q.is_zero() {
                out[i + j].add_assign(&p.mul(q));
            }
        }
    }
    out
}

impl SteenrodAction {
    pub fn algebra(&self) -> &PolyAlgebraSpec {
        &self.algebra
    }

    /// `Sq^i(x_g)`.
    pub fn on_generator(&self, generator: usize, i: u32) -> Polynomial {
        self.generator_squares[generator].get(i as usize).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn sq_monomial(&self, i: u32, m: &Monomial) -> Polynomial {
        let top = i as usize;
        let mut acc: Graded = vec![Polynomial::zero(); top + 1];
        acc[0] = Polynomial::one(self.arity);
        for (g, &e) in m.exponents().iter().enumerate() {
            let total: Graded = self.generator_squares[g].clone();
            for _ in 0..e {
                acc = truncated_mul(&acc, &total, top);
            }
        }
        acc.swap_remove(top)
    }

    pub fn sq(&self, i: u32, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for m in p.terms() {
            out.add_assign(&self.sq_monomial(i, m));
        }
        out
    }
}

/// `Sq^i(p)` for a validated table.
pub fn sq(action: &SteenrodAction, i: u32, p: &Polynomial) -> Polynomial {
    action.sq(i, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitRow {
    pub degree: u32,
    pub total: usize,
    pub hit: usize,
    pub quotient: usize,
    /// Monomials spanning a complement of the hit subspace, chosen greedily
    /// in basis order.
    pub representatives: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitReport {
    pub rows: Vec<HitRow>,
}

impl HitReport {
    /// Degrees with a nonzero indecomposable quotient.
    pub fn non_hit_degrees(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| r.quotient > 0).map(|r| r.degree).collect()
    }
}

/// `Q_d = P_d / Σ_{i>0} Sq^i P_{d-i}` for every `d ≤ bound`.
pub fn hit_quotient(action: &SteenrodAction, bound: u32) -> HitReport {
    let algebra = &action.algebra;
    let rows = (0..=bound)
        .map(|d| {
            let basis = algebra.basis_in_degree(d);
            let n = basis.len();
            let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(j, m)| (m, j)).collect();
            let mut images = Vec::new();
            // Sq^i vanishes on degree d - i once i > d - i.
            for i in (1..=d).filter(|i| 2 * i <= d) {
                for m in algebra.basis_in_degree(d - i) {
                    let image = action.sq_monomial(i, &m);
                    let v = F2Vector::from_support(n, image.terms().map(|t| index[t]));
                    images.push(v);
                }
            }
            let hit_basis = EchelonBasis::from_vectors(n, images).into_rref();
            let units: Vec<F2Vector> = (0..n).map(|j| F2Vector::unit(n, j)).collect();
            let complement = f2::extend_basis(n, &hit_basis, &units);
            let representatives: Vec<Monomial> =
                complement.iter().map(|v| basis[v.leading_index().expect("unit vector")].clone()).collect();
            HitRow { degree: d, total: n, hit: hit_basis.len(), quotient: complement.len(), representatives }
        })
        .collect();
    HitReport { rows }
}

/// `F_2[x4, x6, x7]` with only the forced entries; the rest are left for
/// values taken from the literature.
pub fn suggest_g2_table() -> SteenrodTable {
    SteenrodTable::forced(PolyAlgebraSpec::bg2())
}

/// Lines describing every entry `Sq^i(g)`, `0 ≤ i ≤ |g| + 1`.
pub fn scaffold_lines(t: &SteenrodTable) -> Vec<String> {
    let algebra = t.algebra();
    let mut out = Vec::new();
    for (idx, g) in algebra.generators().iter().enumerate() {
        for i in 0..=g.degree + 1 {
            let line = match t.status(idx, i) {
                EntryStatus::Forced(p) => format!("sq.{i}({}) = {}  # forced", g.name, algebra.display_polynomial(&p)),
                EntryStatus::Given(p) => format!("sq.{i}({}) = {}", g.name, algebra.display_polynomial(&p)),
                EntryStatus::UserSupplied => format!("# sq.{i}({}) = ?  # user-supplied", g.name),
            };
            out.push(line);
        }
    }
    out
}
