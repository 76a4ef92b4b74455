//! The exterior algebra of a Lie algebra: multi-indices, scalar forms, and
//! vector-valued forms.
//!
//! A multi-index is a strictly increasing subset of generator indices,
//! stored as a bitmask. All products are sign-normalized against that
//! ordering, so every element has a unique representation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::rational::Rational;

/// Strictly increasing multi-index over generator slots 0..n, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub u64);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn single(i: usize) -> MultiIndex {
        MultiIndex(1u64 << i)
    }

    pub fn from_indices(indices: &[usize]) -> MultiIndex {
        MultiIndex(indices.iter().fold(0u64, |m, &i| m | (1u64 << i)))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Disjoint union with the Koszul reordering sign of `self` before
    /// `other`; `None` when the indices overlap.
    pub fn merge(self, other: MultiIndex) -> Option<(MultiIndex, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for b in other.indices() {
            // bits of self strictly above b must jump over this factor
            inversions += (self.0 >> (b + 1)).count_ones();
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 | other.0), sign))
    }

    /// Remove index i, returning the sign picked up moving the factor to the
    /// front; `None` if i is absent. This is the interior-product sign.
    pub fn remove(self, i: usize) -> Option<(MultiIndex, i32)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.0 & ((1u64 << i) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 & !(1u64 << i)), sign))
    }

    pub fn label(self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<&str> = self.indices().iter().map(|&i| names[i].as_str()).collect();
        format!("xi({})", parts.join("^"))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{:?}", self.indices())
    }
}

/// All multi-indices of the given degree on n slots, in ascending bitmask
/// order. That order is the basis order for every matrix over the exterior
/// algebra.
pub fn multi_indices(n: usize, degree: u32) -> Vec<MultiIndex> {
    (0u64..(1u64 << n))
        .filter(|m| m.count_ones() == degree)
        .map(MultiIndex)
        .collect()
}

/// Element of the exterior algebra, possibly of mixed degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Form {
    pub fn zero() -> Form {
        Form::default()
    }

    pub fn constant(c: Rational) -> Form {
        let mut f = Form::zero();
        f.add_term(MultiIndex::EMPTY, c);
        f
    }

    pub fn one() -> Form {
        Form::constant(crate::rational::rat(1))
    }

    /// The dual generator xi^i.
    pub fn generator(i: usize) -> Form {
        let mut f = Form::zero();
        f.add_term(MultiIndex::single(i), crate::rational::rat(1));
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Form {
        let mut f = Form::zero();
        for (idx, c) in terms {
            f.add_term(idx, c);
        }
        f
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn coeff(&self, idx: MultiIndex) -> Rational {
        self.terms.get(&idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &Rational)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous (zero counts as homogeneous of any degree).
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|i| i.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Form> {
        let mut parts: BTreeMap<u32, Form> = BTreeMap::new();
        for (&idx, c) in &self.terms {
            parts
                .entry(idx.degree())
                .or_default()
                .add_term(idx, c.clone());
        }
        parts
    }

    pub fn homogeneous_part(&self, degree: u32) -> Form {
        Form::from_terms(
            self.terms
                .iter()
                .filter(|(i, _)| i.degree() == degree)
                .map(|(&i, c)| (i, c.clone())),
        )
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (&idx, c) in &other.terms {
            out.add_term(idx, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            terms: self.terms.iter().map(|(&i, c)| (i, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero();
        }
        Form {
            terms: self.terms.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    /// Sign-normalized exterior product.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                if let Some((merged, sign)) = i.merge(j) {
                    let mut c = a * b;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(merged, c);
                }
            }
        }
        out
    }

    pub fn label(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&i, c)| {
                if i.is_empty() {
                    c.to_string()
                } else {
                    format!("{} * {}", c, i.label(names))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| format!("{}*{:?}", c, i))
            .collect();
        write!(
            f,
            "Form({})",
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}

/// A vector-valued form: for each (multi-index, component degree) a
/// coefficient vector in that component of the graded space. Total degree of
/// a term is |I| + component degree; mixed-degree containers are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct EForm {
    space: Arc<GradedVectorSpace>,
    terms: BTreeMap<(MultiIndex, i32), Vec<Rational>>,
}

impl EForm {
    pub fn zero(space: Arc<GradedVectorSpace>) -> EForm {
        EForm {
            space,
            terms: BTreeMap::new(),
        }
    }

    /// The basis section of the given degree and index, as a 0-form.
    pub fn basis_section(space: Arc<GradedVectorSpace>, degree: i32, index: usize) -> EForm {
        let mut v = vec![Rational::zero(); space.rank(degree)];
        v[index] = crate::rational::rat(1);
        let mut e = EForm::zero(space);
        e.add_term(MultiIndex::EMPTY, degree, v);
        e
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn add_term(&mut self, idx: MultiIndex, degree: i32, v: Vec<Rational>) {
        assert_eq!(
            v.len(),
            self.space.rank(degree),
            "component vector length must match rank at degree {degree}"
        );
        if v.iter().all(Rational::is_zero) {
            return;
        }
        match self.terms.get_mut(&(idx, degree)) {
            Some(existing) => {
                for (a, b) in existing.iter_mut().zip(v) {
                    *a = a.clone() + b;
                }
                if existing.iter().all(Rational::is_zero) {
                    self.terms.remove(&(idx, degree));
                }
            }
            None => {
                self.terms.insert((idx, degree), v);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, i32, &[Rational])> {
        self.terms.iter().map(|(&(i, d), v)| (i, d, v.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree if homogeneous.
    pub fn total_degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|&(i, d)| i.degree() as i32 + d);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &EForm) -> EForm {
        assert_eq!(self.space, other.space, "EForm sum over different spaces");
        let mut out = self.clone();
        for (&(i, d), v) in &other.terms {
            out.add_term(i, d, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &EForm) -> EForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EForm {
        EForm {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.iter().map(|c| -c.clone()).collect()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> EForm {
        if c.is_zero() {
            return EForm::zero(self.space.clone());
        }
        EForm {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.iter().map(|x| x * c).collect()))
                .collect(),
        }
    }

    /// Left multiplication by a scalar form: alpha ^ omega, no sign (the
    /// module structure is from the left).
    pub fn wedge_form(&self, alpha: &Form) -> EForm {
        let mut out = EForm::zero(self.space.clone());
        for (j, c) in alpha.terms() {
            for (&(i, d), v) in &self.terms {
                if let Some((merged, sign)) = j.merge(i) {
                    let mut coeff = c.clone();
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(merged, d, v.iter().map(|x| x * &coeff).collect());
                }
            }
        }
        out
    }

    pub fn label(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, d), v) in &self.terms {
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let gen = &self.space.names(d)[k];
                if i.is_empty() {
                    parts.push(format!("{c} * {gen}"));
                } else {
                    parts.push(format!("{} * {} * {}", c, i.label(names), gen));
                }
            }
        }
        parts.join(" + ")
    }

    /// Check the space is literally the same object contents-wise.
    pub fn check_space(&self, other: &Arc<GradedVectorSpace>) -> Result<()> {
        if &self.space == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "value lives over a different graded space".into(),
            ))
        }
    }
}

impl fmt::Debug for EForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EForm({} terms)", self.terms.len())
    }
}
