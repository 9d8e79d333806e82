//! Graded polynomial algebras over `F_2` on named generators.
//!
//! Over `F_2` graded-commutativity signs vanish, so these are ordinary
//! commutative polynomial rings whose generators carry positive degrees.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    DuplicateGenerator(String),
    ZeroDegree(String),
    EmptyName,
    UnknownGenerator(String),
    ArityMismatch { expected: usize, found: usize },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DuplicateGenerator(n) => write!(f, "duplicate generator name `{n}`"),
            AlgebraError::ZeroDegree(n) => write!(f, "generator `{n}` must have degree at least 1"),
            AlgebraError::EmptyName => f.write_str("generator names must be nonempty"),
            AlgebraError::UnknownGenerator(n) => write!(f, "unknown generator `{n}`"),
            AlgebraError::ArityMismatch { expected, found } => {
                write!(f, "monomial has {found} exponents, algebra has {expected} generators")
            }
        }
    }
}

impl core::error::Error for AlgebraError {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// `F_2[g_1, …, g_n]` with `|g_i| ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyAlgebraSpec {
    generators: Vec<Generator>,
}

/// Exponent vector, one entry per generator in declaration order.
///
/// The derived ordering is lexicographic on exponent vectors, which is the
/// order used for every basis enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

/// A sum of distinct monomials; coefficients are implicitly one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl PolyAlgebraSpec {
    pub fn new(generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(AlgebraError::EmptyName);
            }
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(PolyAlgebraSpec { generators })
    }

    /// `F_2[x4, x6, x7]`, the mod-2 cohomology of `BG_2`.
    pub fn bg2() -> Self {
        Self::new(vec![Generator::new("x4", 4), Generator::new("x6", 6), Generator::new("x7", 7)])
            .expect("fixed generator list is valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn unit(&self) -> Monomial {
        Monomial::unit(self.arity())
    }

    /// The monomial consisting of the single generator `name`.
    pub fn generator(&self, name: &str) -> Result<Monomial, AlgebraError> {
        let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))?;
        Ok(Monomial::generator(self.arity(), i))
    }

    /// Builds a monomial from `(name, exponent)` pairs; repeated names add.
    pub fn monomial(&self, factors: &[(&str, u32)]) -> Result<Monomial, AlgebraError> {
        let mut exponents = vec![0; self.arity()];
        for (name, e) in factors {
            let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator((*name).into()))?;
            exponents[i] += e;
        }
        Ok(Monomial { exponents })
    }

    pub fn check(&self, m: &Monomial) -> Result<(), AlgebraError> {
        if m.exponents.len() != self.arity() {
            return Err(AlgebraError::ArityMismatch { expected: self.arity(), found: m.exponents.len() });
        }
        Ok(())
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        debug_assert_eq!(m.exponents.len(), self.arity());
        m.exponents.iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    /// The common degree of all terms, or `None` for zero or inhomogeneous
    /// polynomials.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Option<u32> {
        let mut degrees = p.terms().map(|m| self.degree(m));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// All monomials of degree exactly `d`, in lexicographic order.
    pub fn basis_in_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0; self.arity()];
        self.enumerate(0, d, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, index: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if index == self.arity() {
            if remaining == 0 {
                out.push(Monomial { exponents: exps.clone() });
            }
            return;
        }
        let deg = self.generators[index].degree;
        for e in 0..=remaining / deg {
            exps[index] = e;
            self.enumerate(index + 1, remaining - e * deg, exps, out);
        }
        exps[index] = 0;
    }

    /// `dims[d] = |basis_in_degree(d)|` for `d = 0..=n`.
    pub fn poincare_dims(&self, n: u32) -> Vec<usize> {
        (0..=n).map(|d| self.basis_in_degree(d).len()).collect()
    }

    pub fn multiply(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        p.mul(q)
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        for (e, g) in m.exponents.iter().zip(&self.generators) {
            if *e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&g.name);
            if *e > 1 {
                out.push('^');
                out.push_str(&alloc::format!("{e}"));
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    pub fn display_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = p.terms().map(|m| self.display_monomial(m)).collect();
        parts.join(" + ")
    }
}

impl Monomial {
    pub fn unit(arity: usize) -> Self {
        Monomial { exponents: vec![0; arity] }
    }

    pub fn generator(arity: usize, index: usize) -> Self {
        let mut exponents = vec![0; arity];
        exponents[index] = 1;
        Monomial { exponents }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exponents.len(), other.exponents.len(), "monomial arity mismatch");
        Monomial { exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect() }
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial { exponents: self.exponents.iter().map(|e| e * n).collect() }
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one(arity: usize) -> Self {
        Self::from_monomial(Monomial::unit(arity))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Polynomial { terms }
    }

    /// Sums the given monomials; repeated monomials cancel in pairs.
    pub fn from_terms<I: IntoIterator<Item = Monomial>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for m in terms {
            p.add_monomial(m);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn add_monomial(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_monomial(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|a| a.mul(m)).collect() }
    }

    pub fn square(&self) -> Polynomial {
        // Frobenius: cross terms cancel in characteristic two
        Polynomial { terms: self.terms.iter().map(|m| m.pow(2)).collect() }
    }
}

impl From<Monomial> for Polynomial {
    fn from(m: Monomial) -> Self {
        Polynomial::from_monomial(m)
    }
}
