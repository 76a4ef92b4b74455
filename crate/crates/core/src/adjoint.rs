//! Derivations of the exterior algebra as the adjoint module, with the
//! deformation theory they carry: contractions, Lie derivatives, derived
//! brackets, and order-by-order extension of formal deformations.
//!
//! A degree-k derivation is determined by its action on the degree-1
//! generators, each value a (k+1)-form. Degree -1 derivations are the
//! contractions, and sections of the adjoint module are combinations
//! sum_i alpha_i iota_i with form coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{multi_indices, EForm, Form, MultiIndex};
use crate::graded::GradedVectorSpace;
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::module::AModule;
use crate::rational::{rat, ratio, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    algebra: Arc<LieAlgebra>,
    degree: i32,
    // action[i] = value on xi^i, a form of degree (degree + 1)
    action: Vec<Form>,
}

impl Derivation {
    pub fn new(algebra: Arc<LieAlgebra>, degree: i32, action: Vec<Form>) -> Result<Derivation> {
        if degree < -1 || degree >= algebra.dim() as i32 {
            return Err(Error::DegreeMismatch(format!(
                "derivation degree {degree} out of range -1..{}",
                algebra.dim() as i32 - 1
            )));
        }
        if action.len() != algebra.dim() {
            return Err(Error::InvalidInput(
                "one action form per generator required".into(),
            ));
        }
        for (i, f) in action.iter().enumerate() {
            if !f.is_zero() && f.degree() != Some((degree + 1) as u32) {
                return Err(Error::DegreeMismatch(format!(
                    "action on generator {i} must be homogeneous of degree {}",
                    degree + 1
                )));
            }
        }
        Ok(Derivation {
            algebra,
            degree,
            action,
        })
    }

    pub fn zero(algebra: Arc<LieAlgebra>, degree: i32) -> Derivation {
        let n = algebra.dim();
        Derivation {
            algebra,
            degree,
            action: vec![Form::zero(); n],
        }
    }

    /// The differential itself, as the degree-1 derivation with
    /// action xi^k |-> d xi^k.
    pub fn d(algebra: &Arc<LieAlgebra>) -> Derivation {
        let action = (0..algebra.dim()).map(|k| algebra.d_generator(k)).collect();
        Derivation {
            algebra: algebra.clone(),
            degree: 1,
            action,
        }
    }

    /// The contraction iota_X, the degree -1 derivation with
    /// iota_X(xi^i) = X^i.
    pub fn contraction(algebra: &Arc<LieAlgebra>, x: &[Rational]) -> Derivation {
        assert_eq!(x.len(), algebra.dim());
        let action = x.iter().map(|c| Form::constant(c.clone())).collect();
        Derivation {
            algebra: algebra.clone(),
            degree: -1,
            action,
        }
    }

    /// L_X = [d, iota_X], a degree-0 derivation; zero exactly when X is
    /// central.
    pub fn lie_derivative(algebra: &Arc<LieAlgebra>, x: &[Rational]) -> Derivation {
        Derivation::d(algebra).graded_commutator(&Derivation::contraction(algebra, x))
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn action(&self, i: usize) -> &Form {
        &self.action[i]
    }

    pub fn is_zero(&self) -> bool {
        self.action.iter().all(Form::is_zero)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(
            self.degree, other.degree,
            "cannot add derivations of different degree"
        );
        Derivation {
            algebra: self.algebra.clone(),
            degree: self.degree,
            action: self
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Derivation {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            algebra: self.algebra.clone(),
            degree: self.degree,
            action: self.action.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Extend to all forms as a derivation of the exterior algebra.
    pub fn apply_form(&self, f: &Form) -> Form {
        let mut out = Form::zero();
        for (idx, coeff) in f.terms() {
            let indices = idx.indices();
            for (pos, &gen) in indices.iter().enumerate() {
                // the derivation walks over pos degree-1 factors
                let sign = if (self.degree * pos as i32).rem_euclid(2) == 0 {
                    rat(1)
                } else {
                    rat(-1)
                };
                let prefix = MultiIndex(idx.0 & ((1u64 << gen) - 1));
                let suffix = MultiIndex(idx.0 & !((1u64 << (gen + 1)) - 1));
                for (vk, vc) in self.action[gen].terms() {
                    let Some((left, s1)) = prefix.merge(vk) else {
                        continue;
                    };
                    let Some((full, s2)) = left.merge(suffix) else {
                        continue;
                    };
                    let mut c = coeff * vc * &sign;
                    if s1 * s2 < 0 {
                        c = -c;
                    }
                    out.add_term(full, c);
                }
            }
        }
        out
    }

    /// [a, b] = a b - (-1)^{|a||b|} b a, read off on generators.
    pub fn graded_commutator(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.algebra, other.algebra);
        let sign = if (self.degree * other.degree).rem_euclid(2) == 0 {
            rat(-1)
        } else {
            rat(1)
        };
        let action = (0..self.algebra.dim())
            .map(|i| {
                self.apply_form(&other.action[i])
                    .add(&other.apply_form(&self.action[i]).scale(&sign))
            })
            .collect();
        Derivation {
            algebra: self.algebra.clone(),
            degree: self.degree + other.degree,
            action,
        }
    }

    /// Q = [d, -], the adjoint-module differential on derivations.
    pub fn q(&self) -> Derivation {
        Derivation::d(&self.algebra).graded_commutator(self)
    }

    /// Coordinates in the (generator, multi-index) basis of this degree.
    pub fn coords(&self) -> Vec<Rational> {
        let n = self.algebra.dim();
        let idx = multi_indices(n, (self.degree + 1) as u32);
        let mut out = Vec::with_capacity(n * idx.len());
        for form in &self.action {
            for &i in &idx {
                out.push(form.coeff(i));
            }
        }
        out
    }

    pub fn from_coords(algebra: &Arc<LieAlgebra>, degree: i32, coords: &[Rational]) -> Derivation {
        let n = algebra.dim();
        let idx = multi_indices(n, (degree + 1) as u32);
        let action = (0..n)
            .map(|g| {
                Form::from_terms(
                    idx.iter()
                        .enumerate()
                        .map(|(p, &i)| (i, coords[g * idx.len() + p].clone())),
                )
            })
            .collect();
        Derivation {
            algebra: algebra.clone(),
            degree,
            action,
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation(degree {})", self.degree)
    }
}

/// The adjoint module: free on the contractions iota_j in degree -1, with
/// Q(iota_j) the Lie derivative along X_j expanded back in contractions.
pub fn adjoint_module(g: &Arc<LieAlgebra>) -> Result<AModule> {
    g.require_jacobi()?;
    let n = g.dim();
    let names: Vec<String> = g.names().iter().map(|s| format!("i({s})")).collect();
    let space = GradedVectorSpace::new(vec![(-1, names.clone())])?;
    let mut action = BTreeMap::new();
    for j in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[j] = rat(1);
        let lj = Derivation::lie_derivative(g, &unit);
        let mut q = EForm::zero(space.clone());
        for i in 0..n {
            for (idx, c) in lj.action(i).terms() {
                let mut v = vec![Rational::zero(); n];
                v[i] = c.clone();
                q.add_term(idx, -1, v);
            }
        }
        action.insert(names[j].clone(), q);
    }
    AModule::from_q_action(g.clone(), space, &action)
}

/// Sections of the adjoint module are derivations: chi corresponds to
/// sum_i chi(xi^i) iota_i.
pub fn derivation_to_section(module: &AModule, chi: &Derivation) -> EForm {
    let space = module.generators().clone();
    let n = chi.algebra().dim();
    let mut out = EForm::zero(space.clone());
    for i in 0..n {
        for (idx, c) in chi.action(i).terms() {
            let mut v = vec![Rational::zero(); n];
            v[i] = c.clone();
            out.add_term(idx, -1, v);
        }
    }
    out
}

pub fn section_to_derivation(g: &Arc<LieAlgebra>, section: &EForm) -> Result<Derivation> {
    let n = g.dim();
    let mut action = vec![Form::zero(); n];
    for (idx, d, v) in section.terms() {
        if d != -1 {
            return Err(Error::DegreeMismatch(
                "adjoint sections live over degree -1".into(),
            ));
        }
        for (i, c) in v.iter().enumerate() {
            action[i].add_term(idx, c.clone());
        }
    }
    let degree = section
        .total_degree()
        .ok_or_else(|| Error::DegreeMismatch("section must be homogeneous".into()))?;
    Derivation::new(g.clone(), degree, action)
}

/// The 1-term adjoint representation (generators in degree 0, the bracket
/// as the connection); its cohomology is the derivation complex shifted by
/// one degree.
pub fn adjoint_representation(g: &Arc<LieAlgebra>) -> Result<AModule> {
    g.require_jacobi()?;
    let n = g.dim();
    let space = GradedVectorSpace::new(vec![(
        0,
        g.names().iter().map(|s| format!("ad({s})")).collect(),
    )])?;
    let rho: Vec<Matrix> = (0..n)
        .map(|a| {
            Matrix::from_fn(n, n, |k, j| {
                let mut xa = vec![Rational::zero(); n];
                xa[a] = rat(1);
                let mut xj = vec![Rational::zero(); n];
                xj[j] = rat(1);
                g.bracket(&xa, &xj)[k].clone()
            })
        })
        .collect();
    AModule::from_representation(g.clone(), space, &rho)
}

/// Matrix of [d, -] from degree-k derivations to degree-(k+1) derivations.
pub fn q_matrix(g: &Arc<LieAlgebra>, degree: i32) -> Matrix {
    let n = g.dim();
    let src = n * multi_indices(n, (degree + 1) as u32).len();
    let dst = n * multi_indices(n, (degree + 2) as u32).len();
    let mut m = Matrix::zero(dst, src);
    for col in 0..src {
        let mut unit = vec![Rational::zero(); src];
        unit[col] = rat(1);
        let chi = Derivation::from_coords(g, degree, &unit);
        for (row, c) in chi.q().coords().into_iter().enumerate() {
            m[(row, col)] = c;
        }
    }
    m
}

/// Dimensions of the cohomology of derivations under [d, -] by degree,
/// from -1 up to dim - 1.
pub fn deformation_cohomology_dims(g: &Arc<LieAlgebra>) -> Result<BTreeMap<i32, usize>> {
    g.require_jacobi()?;
    let n = g.dim() as i32;
    let mut out = BTreeMap::new();
    for k in -1..n {
        let dim = g.dim() * multi_indices(g.dim(), (k + 1) as u32).len();
        let rank_out = q_matrix(g, k).rank();
        let rank_in = if k == -1 {
            0
        } else {
            q_matrix(g, k - 1).rank()
        };
        out.insert(k, dim - rank_out - rank_in);
    }
    Ok(out)
}

/// Solve [d, nu] = chi for nu one degree below; `None` when chi is not a
/// coboundary. The input must be a cocycle.
pub fn trivialize(chi: &Derivation) -> Result<Option<Derivation>> {
    let g = chi.algebra().clone();
    g.require_jacobi()?;
    if !chi.q().is_zero() {
        return Err(Error::NotACocycle);
    }
    if chi.degree() == -1 {
        return Ok(if chi.is_zero() {
            Some(Derivation::zero(g, -1))
        } else {
            None
        });
    }
    let m = q_matrix(&g, chi.degree() - 1);
    match m.solve(&chi.coords()) {
        Ok(x) => Ok(Some(Derivation::from_coords(&g, chi.degree() - 1, &x))),
        Err(_) => Ok(None),
    }
}

/// The (k+1)-ary bracket derived from a degree-k derivation by iterated
/// commutators with contractions, tabulated on strictly increasing index
/// tuples.
pub fn derived_bracket(chi: &Derivation) -> Result<BTreeMap<Vec<usize>, Vec<Rational>>> {
    if chi.degree() < 0 {
        return Err(Error::Contract(
            "derived brackets need derivations of degree >= 0".into(),
        ));
    }
    let arity = (chi.degree() + 1) as usize;
    let n = chi.algebra().dim();
    let mut out = BTreeMap::new();
    for tuple in increasing_tuples(n, arity) {
        out.insert(tuple.clone(), derived_bracket_eval(chi, &tuple));
    }
    Ok(out)
}

/// Evaluate the derived bracket on an arbitrary argument sequence.
pub fn derived_bracket_eval(chi: &Derivation, args: &[usize]) -> Vec<Rational> {
    let g = chi.algebra().clone();
    let n = g.dim();
    let mut cur = chi.clone();
    for &a in args {
        let mut unit = vec![Rational::zero(); n];
        unit[a] = rat(1);
        cur = cur.graded_commutator(&Derivation::contraction(&g, &unit));
    }
    debug_assert_eq!(cur.degree(), -1);
    (0..n)
        .map(|i| cur.action(i).coeff(MultiIndex::EMPTY))
        .collect()
}

fn increasing_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, len, &mut Vec::new(), &mut out);
    out
}

/// A formal deformation d + chi_1 h + chi_2 h^2 + ... given by its
/// degree-1 coefficients.
#[derive(Clone, Debug)]
pub struct FormalDeformation {
    algebra: Arc<LieAlgebra>,
    terms: Vec<Derivation>,
}

impl FormalDeformation {
    pub fn new(algebra: Arc<LieAlgebra>, terms: Vec<Derivation>) -> Result<FormalDeformation> {
        for t in &terms {
            if t.degree() != 1 {
                return Err(Error::DegreeMismatch(
                    "deformation terms must have degree 1".into(),
                ));
            }
            if t.algebra() != &algebra {
                return Err(Error::BaseMismatch);
            }
        }
        Ok(FormalDeformation { algebra, terms })
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Derivation] {
        &self.terms
    }

    /// Coefficient of h^m in the square of d + sum chi_i h^i, m >= 1.
    fn square_coefficient(&self, m: usize) -> Derivation {
        let mut acc = Derivation::zero(self.algebra.clone(), 2);
        if m >= 1 && m <= self.terms.len() {
            acc = acc.add(&self.terms[m - 1].q());
        }
        // sum over i + j = m of chi_i chi_j, which equals half the sum of
        // the graded commutators
        for i in 1..m {
            let j = m - i;
            if i <= self.terms.len() && j <= self.terms.len() {
                acc = acc.add(
                    &self.terms[i - 1]
                        .graded_commutator(&self.terms[j - 1])
                        .scale(&ratio(1, 2)),
                );
            }
        }
        acc
    }
}

/// Outcome of one extension step.
#[derive(Clone, Debug)]
pub enum DeformationStep {
    /// A next coefficient chi_{k+1} making the square vanish to the next
    /// order.
    Extension(Derivation),
    /// The obstruction: the order-(k+1) defect and its canonical reduced
    /// representative in degree-2 cohomology, which is nonzero.
    Obstruction {
        defect: Derivation,
        representative: Derivation,
    },
}

/// Given a deformation flat to its stated order, compute the next defect
/// and either extend or report the obstruction class.
pub fn deformation_step(def: &FormalDeformation) -> Result<DeformationStep> {
    let g = def.algebra.clone();
    g.require_jacobi()?;
    // verify flatness to the stated order
    for m in 1..=def.order() {
        let residual = def.square_coefficient(m);
        if !residual.is_zero() {
            return Err(Error::Contract(format!(
                "deformation is not flat at order {m}"
            )));
        }
    }
    let k = def.order();
    let defect = def.square_coefficient(k + 1);
    debug_assert!(defect.q().is_zero(), "the defect must be a cocycle");
    if defect.is_zero() {
        return Ok(DeformationStep::Extension(Derivation::zero(g, 1)));
    }
    let m = q_matrix(&g, 1);
    match m.solve(&defect.neg().coords()) {
        Ok(x) => Ok(DeformationStep::Extension(Derivation::from_coords(
            &g, 1, &x,
        ))),
        Err(_) => {
            // canonical representative: reduce against the echelonized image
            let image = q_matrix(&g, 1).transpose().rref().echelon_rows_nonzero();
            let mut coords = defect.coords();
            for row in image {
                let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
                if !coords[pivot].is_zero() {
                    let f = coords[pivot].clone();
                    for (a, b) in coords.iter_mut().zip(&row) {
                        *a = a.clone() - &f * b;
                    }
                }
            }
            Ok(DeformationStep::Obstruction {
                defect: defect.clone(),
                representative: Derivation::from_coords(&g, 2, &coords),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modops;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[i] = rat(1);
        v
    }

    #[test]
    fn contraction_basics() {
        let g = LieAlgebra::sl2();
        let iota_e = Derivation::contraction(&g, &unit(3, 1));
        // on a 0-form
        assert!(iota_e.apply_form(&Form::constant(rat(7))).is_zero());
        // iota_e (xi^e ^ xi^f) = xi^f
        let ef = Form::generator(1).wedge(&Form::generator(2));
        assert_eq!(iota_e.apply_form(&ef), Form::generator(2));
        // contractions commute: [iota_X, iota_Y] = 0
        let iota_f = Derivation::contraction(&g, &unit(3, 2));
        assert!(iota_e.graded_commutator(&iota_f).is_zero());
        assert!(iota_e.graded_commutator(&iota_e).is_zero());
    }

    #[test]
    fn lie_derivative_detects_the_center() {
        let ab = LieAlgebra::abelian(3);
        for i in 0..3 {
            assert!(Derivation::lie_derivative(&ab, &unit(3, i)).is_zero());
        }
        let h3 = LieAlgebra::heisenberg3();
        assert!(
            Derivation::lie_derivative(&h3, &unit(3, 2)).is_zero(),
            "z is central"
        );
        assert!(!Derivation::lie_derivative(&h3, &unit(3, 0)).is_zero());

        // sl2: L_h xi^e = -2 xi^e
        let g = LieAlgebra::sl2();
        let lh = Derivation::lie_derivative(&g, &unit(3, 0));
        assert_eq!(lh.action(1), &Form::generator(1).scale(&rat(-2)));
    }

    #[test]
    fn q_squares_to_zero_in_all_degrees() {
        for g in [LieAlgebra::sl2(), LieAlgebra::heisenberg3()] {
            let n = g.dim() as i32;
            for k in -1..(n - 1) {
                let prod = &q_matrix(&g, k + 1) * &q_matrix(&g, k);
                assert!(prod.is_zero(), "[d,[d,-]] must vanish at degree {k}");
            }
        }
    }

    #[test]
    fn adjoint_module_matches_derivation_complex() {
        for g in [LieAlgebra::sl2(), LieAlgebra::heisenberg3()] {
            let module = adjoint_module(&g).unwrap();
            assert!(module.is_flat());
            // Q on sections equals [d, -] on derivations
            let mut rng = ChaCha8Rng::seed_from_u64(60);
            for degree in 0..2 {
                let dim = g.dim() * multi_indices(g.dim(), (degree + 1) as u32).len();
                let coords: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-3..=3))).collect();
                let chi = Derivation::from_coords(&g, degree, &coords);
                let lhs = module
                    .q_apply(&derivation_to_section(&module, &chi))
                    .unwrap();
                let rhs = derivation_to_section(&module, &chi.q());
                assert_eq!(lhs, rhs);
            }
            // dims agree with the module cohomology and with the shifted
            // 1-term adjoint representation cohomology
            let dims = deformation_cohomology_dims(&g).unwrap();
            let module_betti: BTreeMap<i32, usize> = modops::cohomology(&module)
                .unwrap()
                .into_iter()
                .map(|e| (e.degree, e.betti))
                .collect();
            let rep_betti: BTreeMap<i32, usize> =
                modops::cohomology(&adjoint_representation(&g).unwrap())
                    .unwrap()
                    .into_iter()
                    .map(|e| (e.degree, e.betti))
                    .collect();
            for (&k, &dim) in &dims {
                assert_eq!(module_betti.get(&k).copied().unwrap_or(0), dim);
                assert_eq!(rep_betti.get(&(k + 1)).copied().unwrap_or(0), dim);
            }
        }
    }

    #[test]
    fn low_degree_cohomology_interpretations() {
        // H^{-1} = center
        let dims_sl2 = deformation_cohomology_dims(&LieAlgebra::sl2()).unwrap();
        assert_eq!(dims_sl2[&-1], 0);
        let dims_h3 = deformation_cohomology_dims(&LieAlgebra::heisenberg3()).unwrap();
        assert_eq!(dims_h3[&-1], 1);
        // sl2 rigidity: no outer derivations, no deformations
        assert_eq!(dims_sl2[&0], 0);
        assert_eq!(dims_sl2[&1], 0);
    }

    #[test]
    fn derived_bracket_of_d_recovers_the_structure_constants() {
        for g in [LieAlgebra::sl2(), LieAlgebra::heisenberg3()] {
            let table = derived_bracket(&Derivation::d(&g)).unwrap();
            for (pair, value) in table {
                let expected = g.bracket_basis(pair[0], pair[1]);
                assert_eq!(value, expected, "derived 2-bracket at {pair:?}");
            }
        }
    }

    #[test]
    fn degree_zero_derived_bracket_is_the_action_and_negatives_are_rejected() {
        let g = LieAlgebra::sl2();
        let lh = Derivation::lie_derivative(&g, &unit(3, 0));
        let table = derived_bracket(&lh).unwrap();
        // unary bracket [[X_j]] = action of L_h on X_j: [h, X_j]
        for (tuple, value) in table {
            let expected = g.bracket_basis(0, tuple[0]);
            assert_eq!(value, expected);
        }
        let iota = Derivation::contraction(&g, &unit(3, 0));
        assert!(derived_bracket(&iota).is_err());
    }

    #[test]
    fn derived_bracket_is_antisymmetric() {
        let g = LieAlgebra::sl2();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let dim = 3 * multi_indices(3, 2).len();
        for _ in 0..5 {
            let coords: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-2..=2))).collect();
            let chi = Derivation::from_coords(&g, 1, &coords);
            for (a, b) in [(0usize, 1usize), (1, 2), (0, 2)] {
                let fwd = derived_bracket_eval(&chi, &[a, b]);
                let bwd = derived_bracket_eval(&chi, &[b, a]);
                let neg: Vec<Rational> = bwd.iter().map(|x| -x.clone()).collect();
                assert_eq!(fwd, neg);
            }
        }
    }

    #[test]
    fn sl2_one_cocycles_trivialize() {
        let g = LieAlgebra::sl2();
        // kernel basis of [d,-] in degree 1 gives every 1-cocycle
        let m = q_matrix(&g, 1);
        for ker in m.kernel_basis() {
            let chi = Derivation::from_coords(&g, 1, &ker);
            let nu = trivialize(&chi).unwrap().expect("H^1(sl2) = 0");
            assert_eq!(nu.q(), chi);
        }
    }

    #[test]
    fn deformation_step_zero_and_sl2_extension() {
        let g = LieAlgebra::sl2();
        let zero = FormalDeformation::new(g.clone(), vec![Derivation::zero(g.clone(), 1)]).unwrap();
        match deformation_step(&zero).unwrap() {
            DeformationStep::Extension(next) => assert!(next.is_zero()),
            other => panic!("expected zero extension, got {other:?}"),
        }

        // any sl2 1-cocycle extends (H^2 = 0)
        let m = q_matrix(&g, 1);
        for ker in m.kernel_basis().into_iter().take(3) {
            let chi = Derivation::from_coords(&g, 1, &ker);
            let def = FormalDeformation::new(g.clone(), vec![chi.clone()]).unwrap();
            match deformation_step(&def).unwrap() {
                DeformationStep::Extension(nu) => {
                    // (d + chi h + nu h^2)^2 = O(h^3)
                    let extended =
                        FormalDeformation::new(g.clone(), vec![chi.clone(), nu]).unwrap();
                    for m in 1..=2 {
                        assert!(extended.square_coefficient(m).is_zero());
                    }
                }
                other => panic!("expected extension, got {other:?}"),
            }
        }
    }

    #[test]
    fn deformation_extends_order_by_order() {
        // extend an sl2 cocycle twice; each step kills one more order
        let g = LieAlgebra::sl2();
        let ker = q_matrix(&g, 1).kernel_basis();
        let chi1 = Derivation::from_coords(&g, 1, &ker[0]);
        let mut terms = vec![chi1];
        for _ in 0..2 {
            let def = FormalDeformation::new(g.clone(), terms.clone()).unwrap();
            match deformation_step(&def).unwrap() {
                DeformationStep::Extension(next) => terms.push(next),
                other => panic!("sl2 extensions are unobstructed, got {other:?}"),
            }
        }
        let def = FormalDeformation::new(g, terms).unwrap();
        for m in 1..=3 {
            assert!(def.square_coefficient(m).is_zero(), "flat to order {m}");
        }
    }

    #[test]
    fn deformation_step_rejects_inputs_not_flat_to_stated_order() {
        let g = LieAlgebra::sl2();
        // a derivation that is not a cocycle: [d, chi] != 0
        let mut action = vec![Form::zero(), Form::zero(), Form::zero()];
        action[0] = Form::generator(0).wedge(&Form::generator(1));
        let chi = Derivation::new(g.clone(), 1, action).unwrap();
        assert!(!chi.q().is_zero());
        let def = FormalDeformation::new(g, vec![chi]).unwrap();
        match deformation_step(&def) {
            Err(Error::Contract(msg)) => assert!(msg.contains("order 1"), "got: {msg}"),
            other => panic!("expected a structural error naming the order, got {other:?}"),
        }
    }

    #[test]
    fn abelian_deformation_extends_iff_candidate_bracket_is_jacobi() {
        let ab = LieAlgebra::abelian(3);
        // candidate bracket = heisenberg: [x,y] = z encoded as a degree-1
        // derivation chi with chi(xi^z) = -xi^x ^ xi^y
        let mut action = vec![Form::zero(), Form::zero(), Form::zero()];
        action[2] = Form::generator(0).wedge(&Form::generator(1)).neg();
        let chi = Derivation::new(ab.clone(), 1, action).unwrap();
        // over an abelian algebra every degree-1 derivation is a cocycle
        assert!(chi.q().is_zero());
        let def = FormalDeformation::new(ab.clone(), vec![chi.clone()]).unwrap();
        // the defect is chi^2 = [chi,chi]/2; heisenberg satisfies Jacobi, so
        // it vanishes and the extension is unobstructed
        match deformation_step(&def).unwrap() {
            DeformationStep::Extension(_) => {}
            other => panic!("jacobi bracket must extend, got {other:?}"),
        }
        let defect = chi.graded_commutator(&chi).scale(&ratio(1, 2));
        assert!(defect.is_zero());

        // a non-jacobi candidate obstructs: [x,y] = x, [y,z] = y... encode
        // chi(xi^x) = -xi^x^xi^y, chi(xi^y) = -xi^y^xi^z
        let mut action = vec![Form::zero(), Form::zero(), Form::zero()];
        action[0] = Form::generator(0).wedge(&Form::generator(1)).neg();
        action[1] = Form::generator(1).wedge(&Form::generator(2)).neg();
        let bad = Derivation::new(ab.clone(), 1, action).unwrap();
        assert!(bad.q().is_zero());
        let defect = bad.graded_commutator(&bad).scale(&ratio(1, 2));
        // cross-check by building the candidate bracket directly: the
        // corresponding structure constants fail Jacobi
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![rat(1), rat(0), rat(0)]);
        brackets.insert((1, 2), vec![rat(0), rat(1), rat(0)]);
        let candidate =
            LieAlgebra::new(vec!["x".into(), "y".into(), "z".into()], brackets).unwrap();
        assert!(!candidate.jacobi_ok());
        assert!(!defect.is_zero());
        // over the abelian algebra [d, -] = 0, so a nonzero defect is an
        // obstruction class
        let def = FormalDeformation::new(ab, vec![bad]).unwrap();
        match deformation_step(&def).unwrap() {
            DeformationStep::Obstruction { representative, .. } => {
                assert!(!representative.is_zero())
            }
            other => panic!("non-jacobi bracket must obstruct, got {other:?}"),
        }
    }
}
