//! Chern-Weil forms ch_k = str(F^k), Chern-Simons transgression forms along
//! the interpolation of two superconnections, the closed evaluation valid
//! for flat pairs, metric adjoints, and the resulting module invariants.
//!
//! The interpolation lives over the product with the shifted tangent
//! interval: its curvature is F_t = d(theta_t) + theta_t^2 + tdot (theta_1 -
//! theta_0) with theta_t = (1-t) theta_0 + t theta_1, and the transgression
//! form is the Berezin integral of str(F_t^k).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::lie::LieAlgebra;
use crate::metric::Metric;
use crate::operator::EndValuedForm;
use crate::rational::{rat, Rational};
use crate::superconn::{NonhomogeneousOperator, Superconnection};
use crate::tform::{berezin_integral, FormPoly, TForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ChernWeil,
    BerezinTransgression,
    ClosedFormula,
    MetricInvariant,
}

#[derive(Clone, Debug)]
pub struct CharacteristicForm {
    pub k: u32,
    pub value: Form,
    pub provenance: Provenance,
}

/// str(F^k) of a curvature given directly as a form-valued endomorphism.
pub fn chern_character_of_curvature(f: &EndValuedForm, k: u32) -> Form {
    f.pow(k).supertrace()
}

/// ch_k(D) = str((D^2)^k); closed for every superconnection, zero for flat
/// ones.
pub fn chern_weil(op: &NonhomogeneousOperator, k: u32) -> Result<CharacteristicForm> {
    if k == 0 {
        return Err(Error::Contract("chern_weil needs k >= 1".into()));
    }
    let f = op.square()?;
    Ok(CharacteristicForm {
        k,
        value: chern_character_of_curvature(f.theta(), k),
        provenance: Provenance::ChernWeil,
    })
}

// Polynomials in t with form-valued-endomorphism coefficients.
#[derive(Clone, PartialEq, Eq)]
struct OpPoly {
    space: std::sync::Arc<crate::graded::GradedVectorSpace>,
    coeffs: Vec<EndValuedForm>,
}

impl OpPoly {
    fn zero(space: std::sync::Arc<crate::graded::GradedVectorSpace>) -> OpPoly {
        OpPoly {
            space,
            coeffs: Vec::new(),
        }
    }

    fn from_coeffs(
        space: std::sync::Arc<crate::graded::GradedVectorSpace>,
        coeffs: Vec<EndValuedForm>,
    ) -> OpPoly {
        let mut p = OpPoly { space, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(EndValuedForm::is_zero) {
            self.coeffs.pop();
        }
    }

    fn get(&self, m: usize) -> EndValuedForm {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| EndValuedForm::zero(self.space.clone()))
    }

    fn add(&self, other: &OpPoly) -> OpPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        OpPoly::from_coeffs(
            self.space.clone(),
            (0..len).map(|m| self.get(m).add(&other.get(m))).collect(),
        )
    }

    fn mul(&self, other: &OpPoly) -> OpPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return OpPoly::zero(self.space.clone());
        }
        let mut coeffs = vec![
            EndValuedForm::zero(self.space.clone());
            self.coeffs.len() + other.coeffs.len() - 1
        ];
        for (m, a) in self.coeffs.iter().enumerate() {
            for (p, b) in other.coeffs.iter().enumerate() {
                coeffs[m + p] = coeffs[m + p].add(&a.mul(b));
            }
        }
        OpPoly::from_coeffs(self.space.clone(), coeffs)
    }

    fn map(&self, f: impl Fn(&EndValuedForm) -> EndValuedForm) -> OpPoly {
        OpPoly::from_coeffs(self.space.clone(), self.coeffs.iter().map(f).collect())
    }

    fn supertrace_poly(&self) -> FormPoly {
        FormPoly::from_coeffs(self.coeffs.iter().map(EndValuedForm::supertrace).collect())
    }
}

// xi0(t) + tdot xi1(t) with endomorphism-valued coefficients; tdot is odd,
// so products move it past elements with a parity flip.
#[derive(Clone)]
struct TEndo {
    even: OpPoly,
    odd: OpPoly,
}

impl TEndo {
    fn mul(&self, other: &TEndo) -> TEndo {
        TEndo {
            even: self.even.mul(&other.even),
            odd: self
                .even
                .map(EndValuedForm::parity_flip)
                .mul(&other.odd)
                .add(&self.odd.mul(&other.even)),
        }
    }

    fn pow(&self, k: u32) -> TEndo {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn supertrace(&self) -> TForm {
        TForm::new(self.even.supertrace_poly(), self.odd.supertrace_poly())
    }
}

fn check_transgression_pair(
    op0: &NonhomogeneousOperator,
    op1: &NonhomogeneousOperator,
) -> Result<()> {
    op0.check_same_bundle(op1)?;
    op0.algebra().require_jacobi()?;
    if !op0.dcoef().is_one() || !op1.dcoef().is_one() {
        return Err(Error::Contract(
            "transgression interpolates operators with unit differential part".into(),
        ));
    }
    if !op0.theta().is_odd() || !op1.theta().is_odd() {
        return Err(Error::Contract(
            "transgression needs odd-parity operators".into(),
        ));
    }
    Ok(())
}

/// The curvature of the interpolation, in the t / tdot algebra.
fn interpolation_curvature(op0: &NonhomogeneousOperator, op1: &NonhomogeneousOperator) -> TEndo {
    let space = op0.bundle().clone();
    let g = op0.algebra().clone();
    let diff = op1.theta().sub(op0.theta());
    let theta_t = OpPoly::from_coeffs(space.clone(), vec![op0.theta().clone(), diff.clone()]);
    let even = theta_t.mul(&theta_t).add(&theta_t.map(|e| e.d_form(&g)));
    let odd = OpPoly::from_coeffs(space, vec![diff]);
    TEndo { even, odd }
}

/// ch_k of the interpolation: a t-dependent form xi0(t) + tdot xi1(t) whose
/// endpoint values are ch_k of the inputs.
pub fn interpolation_chern(
    op0: &NonhomogeneousOperator,
    op1: &NonhomogeneousOperator,
    k: u32,
) -> Result<TForm> {
    if k == 0 {
        return Err(Error::Contract("transgression needs k >= 1".into()));
    }
    check_transgression_pair(op0, op1)?;
    Ok(interpolation_curvature(op0, op1).pow(k).supertrace())
}

/// cs_k(D0, D1): the Berezin integral of ch_k along the interpolation.
/// Satisfies d cs_k = ch_k(D1) - ch_k(D0).
pub fn transgression(
    op0: &NonhomogeneousOperator,
    op1: &NonhomogeneousOperator,
    k: u32,
) -> Result<CharacteristicForm> {
    let ch = interpolation_chern(op0, op1, k)?;
    Ok(CharacteristicForm {
        k,
        value: berezin_integral(&ch),
        provenance: Provenance::BerezinTransgression,
    })
}

/// P_k = k!(k-1)!/(2k-1)!: the Berezin integral of k t^{k-1}(1-t)^{k-1}.
pub fn p_constant(k: u32) -> Rational {
    fn factorial(n: u32) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
    }
    assert!(k >= 1);
    Rational::new(factorial(k) * factorial(k - 1), factorial(2 * k - 1))
}

/// The closed evaluation P_k str((D1 - D0)[D0, D1]^{k-1}), valid when both
/// operators are flat.
pub fn closed_form_cs(
    op0: &NonhomogeneousOperator,
    op1: &NonhomogeneousOperator,
    k: u32,
) -> Result<CharacteristicForm> {
    if k == 0 {
        return Err(Error::Contract("closed_form_cs needs k >= 1".into()));
    }
    check_transgression_pair(op0, op1)?;
    if !op0.is_flat()? || !op1.is_flat()? {
        return Err(Error::Contract(
            "the closed formula is valid for flat pairs only".into(),
        ));
    }
    let commutator = op0.odd_commutator(op1)?;
    let diff = op1.theta().sub(op0.theta());
    let value = diff
        .mul(&commutator.pow(k - 1))
        .supertrace()
        .scale(&p_constant(k));
    Ok(CharacteristicForm {
        k,
        value,
        provenance: Provenance::ClosedFormula,
    })
}

/// The triangle combination and an exact primitive for it.
#[derive(Clone, Debug)]
pub struct TrianglePrimitive {
    pub combination: Form,
    pub primitive: Form,
}

/// cs_k(D0,D1) + cs_k(D1,D2) - cs_k(D0,D2) is exact for flat triples;
/// solve for a primitive. Infeasibility signals an implementation bug, so
/// it is an invariant violation rather than a plain failure.
pub fn triangle_defect(
    op0: &NonhomogeneousOperator,
    op1: &NonhomogeneousOperator,
    op2: &NonhomogeneousOperator,
    k: u32,
) -> Result<TrianglePrimitive> {
    for op in [op0, op1, op2] {
        if !op.is_flat()? {
            return Err(Error::Contract(
                "triangle identity needs flat operators".into(),
            ));
        }
    }
    let combination = transgression(op0, op1, k)?
        .value
        .add(&transgression(op1, op2, k)?.value)
        .sub(&transgression(op0, op2, k)?.value);
    let primitive = op0
        .algebra()
        .solve_d(&combination)
        .ok_or_else(|| Error::InvariantViolation("triangle combination must be exact".into()))?;
    Ok(TrianglePrimitive {
        combination,
        primitive,
    })
}

/// The metric adjoint: the unique operator with
/// d<w1, w2> = <D w1, w2> + (-1)^{|w1|} <w1, Ddag w2>. Componentwise each
/// i-form component A transposes against the metric with the sign
/// -(-1)^{d(1+i)} on the block leaving degree d.
pub fn adjoint_dagger(d: &Superconnection, metric: &Metric) -> Result<NonhomogeneousOperator> {
    if metric.space() != d.bundle() {
        return Err(Error::SpaceMismatch(
            "metric lives on a different bundle".into(),
        ));
    }
    if !d.is_flat()? {
        return Err(Error::Contract(
            "the adjoint is taken of flat superconnections".into(),
        ));
    }
    let space = d.bundle().clone();
    let mut theta = EndValuedForm::zero(space.clone());
    for (idx, _, a) in d.theta().terms() {
        let i = idx.degree() as i32;
        let mut dagger = crate::graded::GradedMap::zero(space.clone(), space.clone(), i - 1);
        for (src, block) in a.blocks() {
            let tgt = src + 1 - i;
            let g_src = metric.block(src);
            let g_tgt = metric.block(tgt);
            let mut m = &(&g_src.inverse().expect("metric blocks are invertible")
                * &block.transpose())
                * g_tgt;
            let negate = (src * (1 + i)).rem_euclid(2) == 0;
            if negate {
                m = m.scale(&rat(-1));
            }
            // block of the dagger entering degree src from degree tgt
            let prev = dagger.block_or_zero(tgt);
            dagger.set_block(tgt, &prev + &m)?;
        }
        if !dagger.is_zero() {
            theta.add_term(idx, dagger);
        }
    }
    Ok(NonhomogeneousOperator::new(
        d.algebra().clone(),
        Rational::one(),
        theta,
    ))
}

/// A per-degree component of a (possibly nonhomogeneous) invariant class.
#[derive(Clone, Debug)]
pub struct ClassComponent {
    pub degree: u32,
    /// canonical representative, reduced against the exact forms
    pub representative: Form,
    pub is_zero_class: bool,
}

/// cs_k(D) = cs_k(D, Ddag): the form together with its class, reported per
/// homogeneous degree since the adjoint is nonhomogeneous.
#[derive(Clone, Debug)]
pub struct CsInvariant {
    pub k: u32,
    pub form: Form,
    pub components: Vec<ClassComponent>,
}

/// Reduce each homogeneous part of a closed form against the echelonized
/// exact forms; the result is the canonical class representative.
pub fn reduce_form_mod_exact(g: &LieAlgebra, f: &Form) -> Form {
    let mut out = Form::zero();
    for (p, part) in f.homogeneous_parts() {
        if p == 0 {
            out = out.add(&part);
            continue;
        }
        let mut coords = g.form_coords(&part, p);
        for row in g.d_matrix(p - 1).transpose().rref().echelon_rows_nonzero() {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if !coords[pivot].is_zero() {
                let factor = coords[pivot].clone();
                for (a, b) in coords.iter_mut().zip(&row) {
                    *a = a.clone() - &factor * b;
                }
            }
        }
        out = out.add(&g.form_from_coords(p, &coords));
    }
    out
}

pub fn cs_invariant(d: &Superconnection, metric: &Metric, k: u32) -> Result<CsInvariant> {
    let dagger = adjoint_dagger(d, metric)?;
    let cs = transgression(d.as_operator(), &dagger, k)?;
    let g = d.algebra();
    let mut components = Vec::new();
    for (p, part) in cs.value.homogeneous_parts() {
        if !g.ce_differential(&part).is_zero() {
            return Err(Error::InvariantViolation(
                "transgression of a flat pair must be closed".into(),
            ));
        }
        let representative = reduce_form_mod_exact(g, &part);
        components.push(ClassComponent {
            degree: p,
            is_zero_class: representative.is_zero(),
            representative,
        });
    }
    Ok(CsInvariant {
        k,
        form: cs.value,
        components,
    })
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ChernWeil => "chern-weil",
            Provenance::BerezinTransgression => "berezin-transgression",
            Provenance::ClosedFormula => "closed-formula",
            Provenance::MetricInvariant => "metric-invariant",
        };
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{EForm, MultiIndex};
    use crate::graded::{GradedMap, GradedVectorSpace};
    use crate::matrix::Matrix;
    use crate::rational::ratio;
    use crate::testkit::{
        random_flat_pair, random_gauge, random_metric, random_superconnection, two_term,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn so3() -> Arc<LieAlgebra> {
        let names = vec!["e1".into(), "e2".into(), "e3".into()];
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![rat(0), rat(0), rat(1)]);
        brackets.insert((1, 2), vec![rat(1), rat(0), rat(0)]);
        brackets.insert((0, 2), vec![rat(0), rat(-1), rat(0)]);
        LieAlgebra::new(names, brackets).unwrap()
    }

    /// Two affine lines: [x1,x2] = x1 and [x3,x4] = x3. Four dimensions
    /// with d-images in independent index pairs, so ch_2 can be nonzero.
    fn double_affine() -> Arc<LieAlgebra> {
        let names = vec!["x1".into(), "x2".into(), "x3".into(), "x4".into()];
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![rat(1), rat(0), rat(0), rat(0)]);
        brackets.insert((2, 3), vec![rat(0), rat(0), rat(1), rat(0)]);
        LieAlgebra::new(names, brackets).unwrap()
    }

    #[test]
    fn chern_weil_of_flat_vanishes() {
        let g = LieAlgebra::sl2();
        let e = two_term(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        for k in 1..=3 {
            assert!(chern_weil(d0.as_operator(), k).unwrap().value.is_zero());
        }
    }

    #[test]
    fn supertrace_of_scalar_curvature() {
        // F = sigma x id on ranks (2, 3): str(F^k) = (2 - 3) sigma^k
        let e = two_term(2, 3);
        let sigma = MultiIndex::from_indices(&[0, 1]);
        let f = EndValuedForm::from_term(sigma, GradedMap::identity(e));
        assert_eq!(
            chern_character_of_curvature(&f, 1),
            Form::from_terms([(sigma, rat(-1))])
        );
        // sigma^2 = 0 for a single 2-form factor, so higher powers die
        assert!(chern_character_of_curvature(&f, 2).is_zero());
    }

    #[test]
    fn chern_weil_is_closed_for_random_nonflat_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for g in [LieAlgebra::sl2(), double_affine()] {
            let e = two_term(2, 1);
            for _ in 0..6 {
                let d = random_superconnection(&mut rng, &g, &e);
                for k in 1..=3 {
                    let ch = chern_weil(d.as_operator(), k).unwrap();
                    assert!(
                        g.ce_differential(&ch.value).is_zero(),
                        "d ch_{k} must vanish exactly"
                    );
                }
            }
        }
    }

    #[test]
    fn chern_weil_nontrivial_in_four_dimensions() {
        // dim 4 admits nonzero 4-forms; make sure ch_2 is not identically
        // zero across random operators, so the closedness test has teeth
        let g = double_affine();
        let e = two_term(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let found = (0..20).any(|_| {
            let d = random_superconnection(&mut rng, &g, &e);
            !chern_weil(d.as_operator(), 2).unwrap().value.is_zero()
        });
        assert!(found, "some random operator must have nonzero ch_2");
    }

    #[test]
    fn transgression_of_equal_operators_vanishes() {
        let g = LieAlgebra::sl2();
        let e = two_term(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        for k in 1..=3 {
            assert!(transgression(d0.as_operator(), d0.as_operator(), k)
                .unwrap()
                .value
                .is_zero());
        }
    }

    #[test]
    fn d_cs_equals_difference_of_chern_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        for g in [LieAlgebra::sl2(), double_affine()] {
            let e = two_term(2, 1);
            for _ in 0..5 {
                let d0 = random_superconnection(&mut rng, &g, &e);
                let d1 = random_superconnection(&mut rng, &g, &e);
                for k in 1..=3 {
                    let cs = transgression(d0.as_operator(), d1.as_operator(), k).unwrap();
                    let lhs = g.ce_differential(&cs.value);
                    let rhs = chern_weil(d1.as_operator(), k)
                        .unwrap()
                        .value
                        .sub(&chern_weil(d0.as_operator(), k).unwrap().value);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn endpoint_evaluation_of_interpolated_chern_character() {
        let g = double_affine();
        let e = two_term(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let d0 = random_superconnection(&mut rng, &g, &e);
        let d1 = random_superconnection(&mut rng, &g, &e);
        for k in 1..=2 {
            let ch = interpolation_chern(d0.as_operator(), d1.as_operator(), k).unwrap();
            assert_eq!(
                ch.xi0.eval(&rat(0)),
                chern_weil(d0.as_operator(), k).unwrap().value
            );
            assert_eq!(
                ch.xi0.eval(&rat(1)),
                chern_weil(d1.as_operator(), k).unwrap().value
            );
        }
    }

    #[test]
    fn p_constants_match_the_stated_values() {
        assert_eq!(p_constant(1), rat(1));
        assert_eq!(p_constant(2), ratio(1, 3));
        assert_eq!(p_constant(3), ratio(1, 10));
    }

    #[test]
    fn berezin_route_equals_closed_formula_on_flat_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        for g in [LieAlgebra::sl2(), LieAlgebra::heisenberg3()] {
            let e = two_term(2, 2);
            for _ in 0..6 {
                let (d0, d1) = random_flat_pair(&mut rng, &g, &e);
                for k in 1..=3 {
                    let via_berezin = transgression(d0.as_operator(), d1.as_operator(), k).unwrap();
                    let via_formula =
                        closed_form_cs(d0.as_operator(), d1.as_operator(), k).unwrap();
                    assert_eq!(
                        via_berezin.value, via_formula.value,
                        "the two cs_{k} routes must agree exactly"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_formula_rejects_nonflat_input() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d0 = random_superconnection(&mut rng, &g, &e);
        let d1 = random_superconnection(&mut rng, &g, &e);
        if !d0.is_flat().unwrap() || !d1.is_flat().unwrap() {
            assert!(closed_form_cs(d0.as_operator(), d1.as_operator(), 1).is_err());
        }
    }

    #[test]
    fn cs_is_antisymmetric_and_k1_is_a_supertrace() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let (d0, d1) = random_flat_pair(&mut rng, &g, &e);
        for k in 1..=3 {
            let fwd = closed_form_cs(d0.as_operator(), d1.as_operator(), k).unwrap();
            let bwd = closed_form_cs(d1.as_operator(), d0.as_operator(), k).unwrap();
            assert_eq!(fwd.value, bwd.value.neg());
        }
        let cs1 = closed_form_cs(d0.as_operator(), d1.as_operator(), 1).unwrap();
        assert_eq!(cs1.value, d1.theta().sub(d0.theta()).supertrace());
    }

    #[test]
    fn triangle_combination_has_an_exact_primitive() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let (d0, d1) = random_flat_pair(&mut rng, &g, &e);
        let (d2, _) = random_flat_pair(&mut rng, &g, &e);
        for k in 1..=2 {
            let tri =
                triangle_defect(d0.as_operator(), d1.as_operator(), d2.as_operator(), k).unwrap();
            assert_eq!(g.ce_differential(&tri.primitive), tri.combination);
        }
        // degenerate triangle: everything zero
        let tri = triangle_defect(d0.as_operator(), d0.as_operator(), d0.as_operator(), 2).unwrap();
        assert!(tri.combination.is_zero());
        assert!(tri.primitive.is_zero());
    }

    #[test]
    fn dagger_of_bare_differential_is_itself() {
        let g = LieAlgebra::abelian(3);
        let e = two_term(2, 1);
        let d = Superconnection::d_only(g, e.clone());
        let dag = adjoint_dagger(&d, &Metric::identity(e)).unwrap();
        assert!(dag.theta().is_zero());
        assert!(dag.dcoef().is_one());
    }

    #[test]
    fn dagger_of_orthogonal_representation_is_the_representation() {
        // so3 adjoint representation with the identity metric: the
        // connection matrices are skew, so the adjoint equals the original.
        let g = so3();
        let e = GradedVectorSpace::concentrated(0, 3, "v");
        let mut theta = EndValuedForm::zero(e.clone());
        for a in 0..3 {
            let m = Matrix::from_fn(3, 3, |k, j| {
                let mut xa = vec![rat(0); 3];
                xa[a] = rat(1);
                let mut xj = vec![rat(0); 3];
                xj[j] = rat(1);
                g.bracket(&xa, &xj)[k].clone()
            });
            let mut map = GradedMap::zero(e.clone(), e.clone(), 0);
            map.set_block(0, m).unwrap();
            theta.add_term(MultiIndex::single(a), map);
        }
        let d = Superconnection::new(g, theta).unwrap();
        assert!(d.is_flat().unwrap());
        let dag = adjoint_dagger(&d, &Metric::identity(e)).unwrap();
        assert_eq!(dag.theta(), d.theta());
        // consequently cs_k(D) = cs_k(D, D) = 0
        let inv = cs_invariant(&d, &Metric::identity(d.bundle().clone()), 2).unwrap();
        assert!(inv.form.is_zero());
    }

    #[test]
    fn dagger_satisfies_the_defining_equation_on_all_basis_pairs() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        let metric = random_metric(&mut rng, &e);
        let dag = adjoint_dagger(&d0, &metric).unwrap();
        // D-dagger squares to zero
        assert!(dag.square().unwrap().is_zero());
        for (i1, deg1, v1) in basis_eforms(&g, &e) {
            let w1 = eform_one(&e, i1, deg1, &v1);
            let total1 = i1.degree() as i32 + deg1;
            for (i2, deg2, v2) in basis_eforms(&g, &e) {
                let w2 = eform_one(&e, i2, deg2, &v2);
                let lhs = g.ce_differential(&metric.pairing(&w1, &w2).unwrap());
                let sign = if total1.rem_euclid(2) == 1 {
                    rat(-1)
                } else {
                    rat(1)
                };
                let rhs = metric.pairing(&d0.apply(&w1).unwrap(), &w2).unwrap().add(
                    &metric
                        .pairing(&w1, &dag.apply(&w2).unwrap())
                        .unwrap()
                        .scale(&sign),
                );
                assert_eq!(lhs, rhs, "defining equation residual must vanish");
            }
        }
    }

    fn basis_eforms(
        g: &Arc<LieAlgebra>,
        e: &Arc<GradedVectorSpace>,
    ) -> Vec<(MultiIndex, i32, Vec<Rational>)> {
        let mut out = Vec::new();
        for p in 0..=g.dim() as u32 {
            for idx in crate::form::multi_indices(g.dim(), p) {
                for d in e.degrees() {
                    for j in 0..e.rank(d) {
                        let mut v = vec![rat(0); e.rank(d)];
                        v[j] = rat(1);
                        out.push((idx, d, v));
                    }
                }
            }
        }
        out
    }

    fn eform_one(e: &Arc<GradedVectorSpace>, idx: MultiIndex, d: i32, v: &[Rational]) -> EForm {
        let mut out = EForm::zero(e.clone());
        out.add_term(idx, d, v.to_vec());
        out
    }

    #[test]
    fn cs_invariant_class_is_metric_independent() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        let m0 = Metric::identity(e.clone());
        let m1 = random_metric(&mut rng, &e);
        for k in 1..=2 {
            let inv0 = cs_invariant(&d0, &m0, k).unwrap();
            let inv1 = cs_invariant(&d0, &m1, k).unwrap();
            let difference = inv0.form.sub(&inv1.form);
            assert!(
                g.solve_d(&difference).is_some(),
                "metric change must shift cs_{k} by an exact form"
            );
        }
    }

    #[test]
    fn cs_invariant_class_is_gauge_invariant() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        let metric = Metric::identity(e.clone());
        let u = random_gauge(&mut rng, &g, &e);
        let d1 = d0.gauge_conjugate(&u).unwrap();
        for k in 1..=2 {
            let inv0 = cs_invariant(&d0, &metric, k).unwrap();
            let inv1 = cs_invariant(&d1, &metric, k).unwrap();
            let difference = inv0.form.sub(&inv1.form);
            assert!(
                g.solve_d(&difference).is_some(),
                "gauge conjugation must shift cs_{k} by an exact form"
            );
        }
    }

    #[test]
    fn gauge_conjugate_flat_pair_gives_exact_cs_class() {
        let g = LieAlgebra::sl2();
        let e = two_term(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let (d0, _) = random_flat_pair(&mut rng, &g, &e);
        let u = random_gauge(&mut rng, &g, &e);
        let d1 = d0.gauge_conjugate(&u).unwrap();
        for k in 1..=2 {
            let cs = closed_form_cs(d0.as_operator(), d1.as_operator(), k).unwrap();
            assert!(
                g.solve_d(&cs.value).is_some(),
                "cs_{k} of a gauge pair is exact"
            );
        }
    }
}
