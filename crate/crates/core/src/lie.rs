//! Lie algebras given by structure constants, and the Chevalley-Eilenberg
//! differential on their exterior algebra.
//!
//! The sign convention is d(xi^k) = -sum_{i<j} c^k_{ij} xi^i ^ xi^j, i.e.
//! (d alpha)(X, Y) = -alpha([X, Y]), extended as an odd derivation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{multi_indices, Form, MultiIndex};
use crate::matrix::Matrix;
use crate::rational::{rat, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    names: Vec<String>,
    // (i, j) with i < j  ->  coefficients of [X_i, X_j] in the basis
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
    // first Jacobi violation, if any, found at construction
    jacobi_failure: Option<(usize, usize, usize)>,
}

impl LieAlgebra {
    /// Build from generator names and the bracket table for i < j.
    /// Jacobi is checked eagerly but a violation does not fail construction;
    /// it is reported by `jacobi_check` and blocks the operations that rely
    /// on d^2 = 0.
    pub fn new(
        names: Vec<String>,
        brackets: BTreeMap<(usize, usize), Vec<Rational>>,
    ) -> Result<Arc<LieAlgebra>> {
        let n = names.len();
        if n == 0 || n > 16 {
            return Err(Error::InvalidInput(
                "dimension must be between 1 and 16".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &names {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(Error::InvalidInput(format!(
                    "bad or duplicate generator name `{name}`"
                )));
            }
        }
        for (&(i, j), c) in &brackets {
            if i >= j || j >= n {
                return Err(Error::InvalidInput(format!(
                    "bracket key ({i},{j}) must satisfy i < j < {n}"
                )));
            }
            if c.len() != n {
                return Err(Error::InvalidInput(format!(
                    "bracket ({i},{j}) has {} coefficients, expected {n}",
                    c.len()
                )));
            }
        }
        let mut g = LieAlgebra {
            names,
            brackets,
            jacobi_failure: None,
        };
        g.brackets.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        g.jacobi_failure = g.find_jacobi_failure();
        Ok(Arc::new(g))
    }

    pub fn abelian(n: usize) -> Arc<LieAlgebra> {
        let names = (0..n).map(|i| format!("x{i}")).collect();
        LieAlgebra::new(names, BTreeMap::new()).expect("valid abelian data")
    }

    /// sl2 with [h,e] = 2e, [h,f] = -2f, [e,f] = h; basis order h, e, f.
    pub fn sl2() -> Arc<LieAlgebra> {
        let names = vec!["h".into(), "e".into(), "f".into()];
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![rat(0), rat(2), rat(0)]);
        brackets.insert((0, 2), vec![rat(0), rat(0), rat(-2)]);
        brackets.insert((1, 2), vec![rat(1), rat(0), rat(0)]);
        LieAlgebra::new(names, brackets).expect("valid sl2 data")
    }

    /// Heisenberg algebra with [x,y] = z.
    pub fn heisenberg3() -> Arc<LieAlgebra> {
        let names = vec!["x".into(), "y".into(), "z".into()];
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![rat(0), rat(0), rat(1)]);
        LieAlgebra::new(names, brackets).expect("valid heisenberg data")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (usize, usize, &Vec<Rational>)> {
        self.brackets.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Coefficients of [X_i, X_j], with the antisymmetric extension.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let n = self.dim();
        if i == j {
            return vec![Rational::zero(); n];
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        match self.brackets.get(&key) {
            Some(c) if flip => c.iter().map(|x| -x.clone()).collect(),
            Some(c) => c.clone(),
            None => vec![Rational::zero(); n],
        }
    }

    /// Bracket of coefficient vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = self.bracket_basis(i, j);
                let f = &x[i] * &y[j];
                for k in 0..n {
                    if !c[k].is_zero() {
                        out[k] = out[k].clone() + &c[k] * &f;
                    }
                }
            }
        }
        out
    }

    fn find_jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut acc = vec![Rational::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(a, b);
                        let mut unit = vec![Rational::zero(); n];
                        unit[c] = rat(1);
                        let outer = self.bracket(&inner, &unit);
                        for m in 0..n {
                            acc[m] = acc[m].clone() + outer[m].clone();
                        }
                    }
                    if acc.iter().any(|x| !x.is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Report the first basis triple violating the Jacobi identity, or
    /// confirm that d^2 = 0 in every form degree.
    pub fn jacobi_check(&self) -> Result<()> {
        match self.jacobi_failure {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::JacobiViolation { i, j, k }),
        }
    }

    pub fn jacobi_ok(&self) -> bool {
        self.jacobi_failure.is_none()
    }

    pub(crate) fn require_jacobi(&self) -> Result<()> {
        self.jacobi_check().map_err(|_| {
            Error::Contract("operation requires a Lie algebra satisfying Jacobi".into())
        })
    }

    /// d applied to the dual generator xi^k.
    pub fn d_generator(&self, k: usize) -> Form {
        let mut out = Form::zero();
        for (&(i, j), c) in &self.brackets {
            if !c[k].is_zero() {
                out.add_term(MultiIndex::from_indices(&[i, j]), -c[k].clone());
            }
        }
        out
    }

    /// The Chevalley-Eilenberg differential, extended to mixed-degree forms
    /// as an odd derivation.
    pub fn ce_differential(&self, alpha: &Form) -> Form {
        let mut out = Form::zero();
        for (idx, coeff) in alpha.terms() {
            let indices = idx.indices();
            for (pos, &gen) in indices.iter().enumerate() {
                // d passes an odd derivation over pos leading degree-1 factors
                let sign = if pos % 2 == 0 { rat(1) } else { rat(-1) };
                let mut rest = idx;
                rest.0 &= !(1u64 << gen);
                let prefix_mask = MultiIndex(idx.0 & ((1u64 << gen) - 1));
                let suffix_mask = MultiIndex(rest.0 & !prefix_mask.0);
                for (dk, dc) in self.d_generator(gen).terms() {
                    // prefix ^ d(xi^gen) ^ suffix
                    let Some((left, s1)) = prefix_mask.merge(dk) else {
                        continue;
                    };
                    let Some((full, s2)) = left.merge(suffix_mask) else {
                        continue;
                    };
                    let mut c = coeff * dc * &sign;
                    if s1 * s2 < 0 {
                        c = -c;
                    }
                    out.add_term(full, c);
                }
            }
        }
        out
    }

    /// Matrix of d from form degree p to p+1, in ascending multi-index order.
    pub fn d_matrix(&self, p: u32) -> Matrix {
        let n = self.dim();
        let src = multi_indices(n, p);
        let dst = multi_indices(n, p + 1);
        let pos: BTreeMap<MultiIndex, usize> =
            dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut out = Matrix::zero(dst.len(), src.len());
        for (col, &idx) in src.iter().enumerate() {
            let mut f = Form::zero();
            f.add_term(idx, rat(1));
            for (t, c) in self.ce_differential(&f).terms() {
                out[(pos[&t], col)] = c.clone();
            }
        }
        out
    }

    /// Coordinates of a homogeneous degree-p form in multi-index order.
    pub fn form_coords(&self, f: &Form, p: u32) -> Vec<Rational> {
        multi_indices(self.dim(), p)
            .iter()
            .map(|&i| f.coeff(i))
            .collect()
    }

    pub fn form_from_coords(&self, p: u32, coords: &[Rational]) -> Form {
        Form::from_terms(
            multi_indices(self.dim(), p)
                .into_iter()
                .zip(coords.iter().cloned()),
        )
    }

    /// Solve d(nu) = f exactly for a possibly mixed-degree cocycle f.
    /// Returns None when some homogeneous part is not exact.
    pub fn solve_d(&self, f: &Form) -> Option<Form> {
        let mut out = Form::zero();
        for (p, part) in f.homogeneous_parts() {
            if p == 0 {
                // constants are never exact unless zero
                if !part.is_zero() {
                    return None;
                }
                continue;
            }
            let rhs = self.form_coords(&part, p);
            let coords = self.d_matrix(p - 1).solve(&rhs).ok()?;
            out = out.add(&self.form_from_coords(p - 1, &coords));
        }
        Some(out)
    }
}
