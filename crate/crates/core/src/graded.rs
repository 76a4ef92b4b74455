//! Graded vector spaces and graded linear maps.
//!
//! A `GradedVectorSpace` is a finite list of ranks by integer degree with
//! named bases. A `GradedMap` of degree k carries one rational block per
//! populated source degree d, mapping degree d to degree d + k. The basis
//! order within a degree is declaration order and every matrix is relative
//! to it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    // degree -> basis names (rank = names.len(), always nonzero)
    components: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    /// Build from (degree, basis names) pairs. Names must be unique across
    /// the whole space and every listed degree must be nonempty.
    pub fn new(components: Vec<(i32, Vec<String>)>) -> Result<Arc<Self>> {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (d, names) in components {
            if names.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "degree {d} has no basis names"
                )));
            }
            for n in &names {
                if !seen.insert(n.clone()) {
                    return Err(Error::InvalidInput(format!("duplicate basis name `{n}`")));
                }
            }
            if map.insert(d, names).is_some() {
                return Err(Error::InvalidInput(format!("degree {d} listed twice")));
            }
        }
        Ok(Arc::new(GradedVectorSpace { components: map }))
    }

    /// Single-degree space with generated names `prefix0..prefix{rank-1}`.
    pub fn concentrated(degree: i32, rank: usize, prefix: &str) -> Arc<Self> {
        let names = (0..rank).map(|i| format!("{prefix}{i}")).collect();
        GradedVectorSpace::new(vec![(degree, names)]).expect("generated names are unique")
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn names(&self, degree: i32) -> &[String] {
        self.components.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.components.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }

    /// Locate a basis name as (degree, index within degree).
    pub fn locate(&self, name: &str) -> Option<(i32, usize)> {
        for (&d, names) in &self.components {
            if let Some(i) = names.iter().position(|n| n == name) {
                return Some((d, i));
            }
        }
        None
    }

    pub fn iter_basis(&self) -> impl Iterator<Item = (i32, usize, &str)> + '_ {
        self.components.iter().flat_map(|(&d, names)| {
            names
                .iter()
                .enumerate()
                .map(move |(i, n)| (d, i, n.as_str()))
        })
    }
}

impl fmt::Debug for GradedVectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(d, names)| format!("{}:{}", d, names.join(",")))
            .collect();
        write!(f, "GradedVectorSpace({})", parts.join(" | "))
    }
}

/// A vector in a graded space, stored per degree.
pub type GradedVec = BTreeMap<i32, Vec<Rational>>;

#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<GradedVectorSpace>,
    target: Arc<GradedVectorSpace>,
    degree: i32,
    // source degree d -> block of shape rank_{d+degree}(target) x rank_d(source)
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(
        source: Arc<GradedVectorSpace>,
        target: Arc<GradedVectorSpace>,
        degree: i32,
    ) -> Self {
        GradedMap {
            source,
            target,
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: Arc<GradedVectorSpace>) -> Self {
        let blocks = space
            .degrees()
            .map(|d| (d, Matrix::identity(space.rank(d))))
            .collect();
        GradedMap {
            source: space.clone(),
            target: space,
            degree: 0,
            blocks,
        }
    }

    pub fn from_blocks(
        source: Arc<GradedVectorSpace>,
        target: Arc<GradedVectorSpace>,
        degree: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (&d, b) in &blocks {
            let (rows, cols) = (target.rank(d + degree), source.rank(d));
            if b.rows() != rows || b.cols() != cols {
                return Err(Error::ShapeMismatch {
                    degree: d,
                    context: format!(
                        "block is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        rows,
                        cols
                    ),
                });
            }
        }
        let mut map = GradedMap {
            source,
            target,
            degree,
            blocks,
        };
        map.prune();
        Ok(map)
    }

    pub fn source(&self) -> &Arc<GradedVectorSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedVectorSpace> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn block(&self, d: i32) -> Option<&Matrix> {
        self.blocks.get(&d)
    }

    /// Block at source degree d, materialized as a zero matrix if absent.
    pub fn block_or_zero(&self, d: i32) -> Matrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.target.rank(d + self.degree), self.source.rank(d)))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.blocks.iter().map(|(&d, m)| (d, m))
    }

    pub fn set_block(&mut self, d: i32, m: Matrix) -> Result<()> {
        let (rows, cols) = (self.target.rank(d + self.degree), self.source.rank(d));
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::ShapeMismatch {
                degree: d,
                context: format!(
                    "block is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    rows,
                    cols
                ),
            });
        }
        if m.is_zero() {
            self.blocks.remove(&d);
        } else {
            self.blocks.insert(d, m);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    fn prune(&mut self) {
        self.blocks.retain(|_, m| !m.is_zero());
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::SpaceMismatch(
                "sum of maps over different spaces".into(),
            ));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot add maps of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (&d, b) in &other.blocks {
            let cur = out.block_or_zero(d);
            out.set_block(d, &cur + b)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        if c.is_zero() {
            return GradedMap::zero(self.source.clone(), self.target.clone(), self.degree);
        }
        let blocks = self.blocks.iter().map(|(&d, m)| (d, m.scale(c))).collect();
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks,
        }
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&-crate::rational::rat(1))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.neg())
    }

    /// Blockwise composition `self . other`; degrees add.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.target {
            return Err(Error::SpaceMismatch(
                "compose: source of left map differs from target of right map".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for (&d, g) in &other.blocks {
            if let Some(f) = self.blocks.get(&(d + other.degree)) {
                blocks.insert(d, f * g);
            }
        }
        let mut out = GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            blocks,
        };
        out.prune();
        Ok(out)
    }

    /// Graded commutator f.g - (-1)^{|f||g|} g.f of endomorphism-shaped maps.
    pub fn graded_commutator(&self, other: &GradedMap) -> Result<GradedMap> {
        if !self.is_endomorphism() || !other.is_endomorphism() || self.source != other.source {
            return Err(Error::SpaceMismatch(
                "graded commutator needs endomorphisms of one space".into(),
            ));
        }
        let fg = self.compose(other)?;
        let gf = other.compose(self)?;
        if (self.degree * other.degree) % 2 != 0 {
            fg.add(&gf)
        } else {
            fg.sub(&gf)
        }
    }

    /// Supertrace sum_d (-1)^d tr(block_d) of a degree-0 endomorphism.
    pub fn supertrace(&self) -> Result<Rational> {
        if !self.is_endomorphism() {
            return Err(Error::SpaceMismatch(
                "supertrace of non-endomorphism".into(),
            ));
        }
        if self.degree != 0 {
            return Err(Error::Contract("supertrace needs a degree-0 map".into()));
        }
        let mut acc = Rational::zero();
        for (&d, b) in &self.blocks {
            let t = b.trace();
            if d.rem_euclid(2) == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &GradedVec) -> GradedVec {
        let mut out = GradedVec::new();
        for (&d, x) in v {
            let y = self.block_or_zero(d).apply(x);
            if y.iter().any(|c| !c.is_zero()) {
                merge_into(&mut out, d + self.degree, y);
            }
        }
        out
    }

    /// Kernel bases per source degree (only populated source degrees appear).
    pub fn kernel_basis(&self) -> BTreeMap<i32, Vec<Vec<Rational>>> {
        self.source
            .degrees()
            .map(|d| (d, self.block_or_zero(d).kernel_basis()))
            .collect()
    }

    /// Image bases keyed by target degree.
    pub fn image_basis(&self) -> BTreeMap<i32, Vec<Vec<Rational>>> {
        self.source
            .degrees()
            .map(|d| (d + self.degree, self.block_or_zero(d).image_basis()))
            .collect()
    }

    /// Solve `self(x) = y`. Returns either a preimage or, for the first
    /// infeasible degree, a certificate covector z with z.block = 0 and
    /// z.y != 0.
    pub fn solve(&self, y: &GradedVec) -> std::result::Result<GradedVec, InfeasibleAt> {
        let mut x = GradedVec::new();
        for (&dt, rhs) in y {
            if rhs.iter().all(Rational::is_zero) {
                continue;
            }
            let ds = dt - self.degree;
            let block = self.block_or_zero(ds);
            match block.solve(rhs) {
                Ok(sol) => {
                    if sol.iter().any(|c| !c.is_zero()) {
                        x.insert(ds, sol);
                    }
                }
                Err(covector) => {
                    return Err(InfeasibleAt {
                        degree: dt,
                        covector,
                    })
                }
            }
        }
        Ok(x)
    }
}

/// Infeasibility certificate for `GradedMap::solve`: a covector at the given
/// target degree annihilating the image but pairing nontrivially with y.
#[derive(Clone, Debug)]
pub struct InfeasibleAt {
    pub degree: i32,
    pub covector: Vec<Rational>,
}

impl InfeasibleAt {
    pub fn verify(&self, map: &GradedMap, y: &GradedVec) -> bool {
        let block = map.block_or_zero(self.degree - map.degree());
        let annihilates = (0..block.cols()).all(|j| dot(&self.covector, &block.col(j)).is_zero());
        let detects = y
            .get(&self.degree)
            .map(|rhs| !dot(&self.covector, rhs).is_zero())
            .unwrap_or(false);
        annihilates && detects
    }
}

pub fn merge_into(v: &mut GradedVec, degree: i32, add: Vec<Rational>) {
    match v.get_mut(&degree) {
        Some(existing) => {
            assert_eq!(
                existing.len(),
                add.len(),
                "graded vector component size mismatch"
            );
            for (a, b) in existing.iter_mut().zip(add) {
                *a = a.clone() + b;
            }
            if existing.iter().all(Rational::is_zero) {
                v.remove(&degree);
            }
        }
        None => {
            if add.iter().any(|c| !c.is_zero()) {
                v.insert(degree, add);
            }
        }
    }
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedMap(degree {}, blocks at {:?})",
            self.degree,
            self.blocks.keys()
        )
    }
}
