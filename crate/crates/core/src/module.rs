//! Free differential graded modules over the exterior algebra, presented by
//! a finite homogeneous generating set and the action of the degree-1
//! operator Q on the generators.
//!
//! Over a point this data is interchangeable with a superconnection on the
//! generator space, and `decompose` realizes the tower construction: the
//! lowest degree maps isomorphically, then one splits off one degree at a
//! time. A choice of splitting is a choice of lift of each generator modulo
//! lower ones, the identity lift being the coordinate splitting; any two
//! choices differ by a unipotent gauge transformation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::{multi_indices, EForm, MultiIndex};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::operator::EndValuedForm;
use crate::rational::{ratio, Rational};
use crate::superconn::{GaugeTransformation, NonhomogeneousOperator, Superconnection};

#[derive(Clone, PartialEq, Eq)]
pub struct AModule {
    algebra: Arc<LieAlgebra>,
    // Q = d + theta on the free module over the generator space
    theta: EndValuedForm,
}

impl AModule {
    /// Build from the Q-action table: for each generator, a vector-valued
    /// form of total degree (generator degree + 1).
    pub fn from_q_action(
        algebra: Arc<LieAlgebra>,
        generators: Arc<GradedVectorSpace>,
        action: &BTreeMap<String, EForm>,
    ) -> Result<AModule> {
        let mut theta = EndValuedForm::zero(generators.clone());
        for (name, value) in action {
            let (gdeg, gidx) = generators
                .locate(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator `{name}`")))?;
            value.check_space(&generators)?;
            for (i, d, v) in value.terms() {
                if i.degree() as i32 + d != gdeg + 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "Q(`{name}`) has a term of total degree {}, expected {}",
                        i.degree() as i32 + d,
                        gdeg + 1
                    )));
                }
                let endo_deg = d - gdeg;
                let mut map = theta.term(i, endo_deg).cloned().unwrap_or_else(|| {
                    GradedMap::zero(generators.clone(), generators.clone(), endo_deg)
                });
                let mut block = map.block_or_zero(gdeg);
                for (r, c) in v.iter().enumerate() {
                    block[(r, gidx)] = c.clone();
                }
                map.set_block(gdeg, block)?;
                theta.set_term(i, map);
            }
        }
        Ok(AModule { algebra, theta })
    }

    /// The trivial rank-1 module concentrated in degree 0 with Q = d.
    pub fn trivial(algebra: Arc<LieAlgebra>) -> AModule {
        let space = GradedVectorSpace::new(vec![(0, vec!["1".into()])]).expect("valid space");
        AModule {
            algebra,
            theta: EndValuedForm::zero(space),
        }
    }

    /// One-term module from an ordinary representation: the generator space
    /// sits in a single degree and Q(e) = sum_a xi^a x rho(X_a) e.
    pub fn from_representation(
        algebra: Arc<LieAlgebra>,
        space: Arc<GradedVectorSpace>,
        rho: &[Matrix],
    ) -> Result<AModule> {
        if rho.len() != algebra.dim() {
            return Err(Error::InvalidInput(
                "one matrix per generator required".into(),
            ));
        }
        let degrees: Vec<i32> = space.degrees().collect();
        let [degree] = degrees[..] else {
            return Err(Error::InvalidInput(
                "representation space must sit in one degree".into(),
            ));
        };
        let mut theta = EndValuedForm::zero(space.clone());
        for (a, m) in rho.iter().enumerate() {
            let mut map = GradedMap::zero(space.clone(), space.clone(), 0);
            map.set_block(degree, m.clone())?;
            theta.add_term(MultiIndex::single(a), map);
        }
        Ok(AModule { algebra, theta })
    }

    pub fn from_superconnection(d: &Superconnection) -> AModule {
        AModule {
            algebra: d.algebra().clone(),
            theta: d.theta().clone(),
        }
    }

    pub fn to_superconnection(&self) -> Superconnection {
        Superconnection::new(self.algebra.clone(), self.theta.clone())
            .expect("module data is superconnection data")
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &Arc<GradedVectorSpace> {
        self.theta.space()
    }

    pub fn theta(&self) -> &EndValuedForm {
        &self.theta
    }

    pub fn as_operator(&self) -> NonhomogeneousOperator {
        NonhomogeneousOperator::new(self.algebra.clone(), Rational::one(), self.theta.clone())
    }

    /// Q applied to a basis generator.
    pub fn q_generator(&self, degree: i32, index: usize) -> EForm {
        let e = EForm::basis_section(self.generators().clone(), degree, index);
        self.theta.apply(&e)
    }

    /// Q applied to an arbitrary section, by the Leibniz rule.
    pub fn q_apply(&self, omega: &EForm) -> Result<EForm> {
        self.as_operator().apply(omega)
    }

    /// Verify Q^2 = 0; on failure names the first generator whose image is
    /// nonzero, with the residual as witness.
    pub fn q_square_check(&self) -> std::result::Result<(), (String, EForm)> {
        let sq = match self.as_operator().square() {
            Ok(sq) => sq,
            Err(_) => {
                // algebra without Jacobi: evaluate Q(Q(e)) directly
                for (d, i, name) in self.generators().iter_basis() {
                    let qe = self.q_generator(d, i);
                    let qqe = self.q_apply(&qe).expect("shapes agree");
                    if !qqe.is_zero() {
                        return Err((name.to_string(), qqe));
                    }
                }
                return Ok(());
            }
        };
        if sq.is_zero() {
            return Ok(());
        }
        for (d, i, name) in self.generators().iter_basis() {
            let e = EForm::basis_section(self.generators().clone(), d, i);
            let r = sq.theta().apply(&e);
            if !r.is_zero() {
                return Err((name.to_string(), r));
            }
        }
        Ok(())
    }

    pub fn is_flat(&self) -> bool {
        self.q_square_check().is_ok()
    }

    /// Decompose: produce an isomorphism onto the module in component form
    /// together with the superconnection it transports Q to. The splitting
    /// controls the lift of each generator modulo lower-degree ones; any
    /// two choices differ by a gauge transformation.
    pub fn decompose(&self, splitting: Splitting) -> Result<(ModuleMorphism, Superconnection)> {
        let gens = self.generators().clone();
        let corr = match splitting {
            Splitting::Coordinate => EndValuedForm::zero(gens.clone()),
            Splitting::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = self.algebra.dim();
                let degrees: Vec<i32> = gens.degrees().collect();
                let mut corr = EndValuedForm::zero(gens.clone());
                for &k in &degrees {
                    for &d in &degrees {
                        let i = k - d;
                        if i < 1 || i as usize > n {
                            continue;
                        }
                        for idx in multi_indices(n, i as u32) {
                            let block = Matrix::from_fn(gens.rank(d), gens.rank(k), |_, _| {
                                if rng.gen_bool(0.5) {
                                    ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2))
                                } else {
                                    Rational::from_integer(0.into())
                                }
                            });
                            if block.is_zero() {
                                continue;
                            }
                            let mut map = corr
                                .term(idx, -i)
                                .cloned()
                                .unwrap_or_else(|| GradedMap::zero(gens.clone(), gens.clone(), -i));
                            map.set_block(k, block)?;
                            corr.set_term(idx, map);
                        }
                    }
                }
                corr
            }
        };
        // The chosen lifts assemble to u = id + corr with Theta = u^{-1}.
        let u = GaugeTransformation::from_correction(corr)?;
        let d = self.to_superconnection().gauge_conjugate(&u)?;
        let target = AModule::from_superconnection(&d);
        let theta_map = ModuleMorphism::from_endo(self.clone(), target, &u.inverse().as_endo())?;
        Ok((theta_map, d))
    }

    /// Decide whether two module structures on the same generator space are
    /// statomorphic, returning a witness morphism when they are. This solves
    /// the linear system u Q1 = Q2 u over unipotent u, degree slot by degree
    /// slot, as one joint exact system.
    pub fn is_statomorphic(&self, other: &AModule) -> Result<Option<ModuleMorphism>> {
        if self.algebra != other.algebra {
            return Err(Error::BaseMismatch);
        }
        if self.generators() != other.generators() {
            return Err(Error::SpaceMismatch(
                "statomorphism requires the same standard graded bundle".into(),
            ));
        }
        let gens = self.generators().clone();
        let n = self.algebra.dim();
        let degrees: Vec<i32> = gens.degrees().collect();

        // unknown slots: (multi-index I, source degree k) with a block
        // E_k -> E_{k - |I|}
        let mut slots = Vec::new();
        for &k in &degrees {
            for &d in &degrees {
                let i = k - d;
                if i < 1 || i as usize > n {
                    continue;
                }
                for idx in multi_indices(n, i as u32) {
                    for r in 0..gens.rank(d) {
                        for c in 0..gens.rank(k) {
                            slots.push((idx, k, r, c));
                        }
                    }
                }
            }
        }

        let theta1 = &self.theta;
        let theta2 = &other.theta;
        let rhs_endo = theta2.sub(theta1);
        // linear map: u |-> u theta1 - theta2 u - d(u)
        let image_of = |u: &EndValuedForm| -> EndValuedForm {
            u.mul(theta1)
                .sub(&theta2.mul(u))
                .sub(&u.d_form(&self.algebra))
        };

        let mut images = Vec::with_capacity(slots.len());
        for &(idx, k, r, c) in &slots {
            let i = idx.degree() as i32;
            let mut map = GradedMap::zero(gens.clone(), gens.clone(), -i);
            let mut block = Matrix::zero(gens.rank(k - i), gens.rank(k));
            block[(r, c)] = crate::rational::rat(1);
            map.set_block(k, block)?;
            images.push(image_of(&EndValuedForm::from_term(idx, map)));
        }

        // coordinates: union of keys across all images and the rhs
        let mut keys = std::collections::BTreeSet::new();
        let collect = |e: &EndValuedForm, keys: &mut std::collections::BTreeSet<_>| {
            for (i, de, m) in e.terms() {
                for (d, block) in m.blocks() {
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            keys.insert((i, de, d, r, c));
                        }
                    }
                }
            }
        };
        collect(&rhs_endo, &mut keys);
        for im in &images {
            collect(im, &mut keys);
        }
        let keys: Vec<_> = keys.into_iter().collect();
        let coord = |e: &EndValuedForm, key: &(MultiIndex, i32, i32, usize, usize)| -> Rational {
            let (i, de, d, r, c) = *key;
            e.term(i, de)
                .and_then(|m| m.block(d).map(|b| b[(r, c)].clone()))
                .unwrap_or_else(|| Rational::from_integer(0.into()))
        };

        let a = Matrix::from_fn(keys.len(), slots.len(), |ri, ci| {
            coord(&images[ci], &keys[ri])
        });
        let b: Vec<Rational> = keys.iter().map(|k| coord(&rhs_endo, k)).collect();
        match a.solve(&b) {
            Err(_) => Ok(None),
            Ok(x) => {
                let mut corr = EndValuedForm::zero(gens.clone());
                for (&(idx, k, r, c), coeff) in slots.iter().zip(&x) {
                    if num_traits::Zero::is_zero(coeff) {
                        continue;
                    }
                    let i = idx.degree() as i32;
                    let mut block = Matrix::zero(gens.rank(k - i), gens.rank(k));
                    block[(r, c)] = coeff.clone();
                    let mut map = GradedMap::zero(gens.clone(), gens.clone(), -i);
                    map.set_block(k, block)?;
                    corr.add_term(idx, map);
                }
                let u = GaugeTransformation::from_correction(corr)?;
                let psi = ModuleMorphism::from_endo(self.clone(), other.clone(), &u.as_endo())?;
                debug_assert!(psi.is_chain_map()?);
                Ok(Some(psi))
            }
        }
    }
}

impl fmt::Debug for AModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AModule(generators {:?})", self.generators())
    }
}

/// Splitting strategy for `decompose`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// Lift every generator to itself.
    Coordinate,
    /// Seeded random lifts; reproducible.
    Seeded(u64),
}

/// A module morphism over the exterior algebra, given on generators.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    source: AModule,
    target: AModule,
    // by source generator, in (degree asc, index) order
    values: Vec<EForm>,
}

impl ModuleMorphism {
    pub fn new(source: AModule, target: AModule, values: Vec<EForm>) -> Result<ModuleMorphism> {
        if source.algebra() != target.algebra() {
            return Err(Error::BaseMismatch);
        }
        if values.len() != source.generators().total_dim() {
            return Err(Error::InvalidInput(format!(
                "morphism needs {} generator images, got {}",
                source.generators().total_dim(),
                values.len()
            )));
        }
        for v in &values {
            v.check_space(target.generators())?;
        }
        Ok(ModuleMorphism {
            source,
            target,
            values,
        })
    }

    pub fn identity(module: &AModule) -> ModuleMorphism {
        let gens = module.generators().clone();
        let values = gens
            .iter_basis()
            .map(|(d, i, _)| EForm::basis_section(gens.clone(), d, i))
            .collect();
        ModuleMorphism {
            source: module.clone(),
            target: module.clone(),
            values,
        }
    }

    /// Degree-0 morphism between modules sharing a generator space, from a
    /// form-valued endomorphism.
    pub fn from_endo(
        source: AModule,
        target: AModule,
        endo: &EndValuedForm,
    ) -> Result<ModuleMorphism> {
        if source.generators() != target.generators() {
            return Err(Error::SpaceMismatch(
                "from_endo needs a shared generator space".into(),
            ));
        }
        let gens = source.generators().clone();
        let values = gens
            .iter_basis()
            .map(|(d, i, _)| endo.apply(&EForm::basis_section(gens.clone(), d, i)))
            .collect();
        ModuleMorphism::new(source, target, values)
    }

    pub fn source(&self) -> &AModule {
        &self.source
    }

    pub fn target(&self) -> &AModule {
        &self.target
    }

    pub fn value(&self, flat_index: usize) -> &EForm {
        &self.values[flat_index]
    }

    pub fn values(&self) -> &[EForm] {
        &self.values
    }

    /// Extension to arbitrary sections by linearity over the exterior
    /// algebra; degree-preserving morphisms commute past coefficients
    /// without signs.
    pub fn apply(&self, omega: &EForm) -> Result<EForm> {
        omega.check_space(self.source.generators())?;
        let mut out = EForm::zero(self.target.generators().clone());
        let gens = self.source.generators();
        for (i, d, v) in omega.terms() {
            let base = flat_offset(gens, d);
            for (k, c) in v.iter().enumerate() {
                if num_traits::Zero::is_zero(c) {
                    continue;
                }
                let mut alpha = crate::form::Form::zero();
                alpha.add_term(i, c.clone());
                out = out.add(&self.values[base + k].wedge_form(&alpha));
            }
        }
        Ok(out)
    }

    /// Does the morphism intertwine the Q operators exactly?
    pub fn is_chain_map(&self) -> Result<bool> {
        for (d, i, _) in self.source.generators().iter_basis() {
            let e = EForm::basis_section(self.source.generators().clone(), d, i);
            let lhs = self.apply(&self.source.q_apply(&e)?)?;
            let rhs = self.target.q_apply(&self.apply(&e)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// self . other (other first).
    pub fn compose(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if other.target != self.source {
            return Err(Error::SpaceMismatch("morphism composition mismatch".into()));
        }
        let values = other
            .values
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>>>()?;
        ModuleMorphism::new(other.source.clone(), self.target.clone(), values)
    }

    /// For morphisms over a shared generator space: the form-valued
    /// endomorphism with the same action on generators.
    pub fn as_endo(&self) -> Result<EndValuedForm> {
        if self.source.generators() != self.target.generators() {
            return Err(Error::SpaceMismatch(
                "as_endo needs a shared generator space".into(),
            ));
        }
        let gens = self.source.generators().clone();
        let mut endo = EndValuedForm::zero(gens.clone());
        for ((gdeg, gidx, _), value) in gens.iter_basis().zip(&self.values) {
            for (i, d, v) in value.terms() {
                let endo_deg = d - gdeg;
                let mut map = endo
                    .term(i, endo_deg)
                    .cloned()
                    .unwrap_or_else(|| GradedMap::zero(gens.clone(), gens.clone(), endo_deg));
                let mut block = map.block_or_zero(gdeg);
                for (r, c) in v.iter().enumerate() {
                    block[(r, gidx)] = &block[(r, gidx)] + c;
                }
                map.set_block(gdeg, block)?;
                endo.set_term(i, map);
            }
        }
        Ok(endo)
    }
}

pub fn flat_offset(space: &Arc<GradedVectorSpace>, degree: i32) -> usize {
    space
        .degrees()
        .take_while(|&d| d < degree)
        .map(|d| space.rank(d))
        .sum()
}

/// The gauge transformation relating two decompositions of one module:
/// u = Theta2 . Theta1^{-1}, which satisfies u D1 = D2 u on the transported
/// superconnections.
pub fn compare_decompositions(
    theta1: &ModuleMorphism,
    theta2: &ModuleMorphism,
) -> Result<GaugeTransformation> {
    if theta1.source() != theta2.source() {
        return Err(Error::SpaceMismatch(
            "decompositions of different modules cannot be compared".into(),
        ));
    }
    let u1 = theta1.as_endo()?;
    let u2 = theta2.as_endo()?;
    let u = u2.mul(&u1.unipotent_inverse()?);
    GaugeTransformation::from_correction(u.sub(&EndValuedForm::identity(
        theta1.source().generators().clone(),
    )))
}

impl fmt::Debug for ModuleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMorphism({} generators)", self.values.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_term_module(g: &Arc<LieAlgebra>) -> AModule {
        // the gauge-twisted d + partial module used across the test suite
        let gens =
            GradedVectorSpace::new(vec![(0, vec!["a".into()]), (1, vec!["b".into()])]).unwrap();
        let mut action = BTreeMap::new();
        // Q(a) = b - xi^h a, Q(b) = -xi^h b - xi^e^xi^f a
        let mut qa = EForm::zero(gens.clone());
        qa.add_term(MultiIndex::EMPTY, 1, vec![rat(1)]);
        qa.add_term(MultiIndex::single(0), 0, vec![rat(-1)]);
        let mut qb = EForm::zero(gens.clone());
        qb.add_term(MultiIndex::single(0), 1, vec![rat(-1)]);
        qb.add_term(MultiIndex::from_indices(&[1, 2]), 0, vec![rat(-1)]);
        action.insert("a".into(), qa);
        action.insert("b".into(), qb);
        AModule::from_q_action(g.clone(), gens, &action).unwrap()
    }

    #[test]
    fn trivial_module_is_flat() {
        let m = AModule::trivial(LieAlgebra::sl2());
        assert!(m.is_flat());
    }

    #[test]
    fn two_term_fixture_is_flat_and_q_square_reports_failures() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        assert!(m.is_flat());

        // break the module: Q(a) = b with a stray term
        let gens = m.generators().clone();
        let mut action = BTreeMap::new();
        let mut qa = EForm::zero(gens.clone());
        qa.add_term(MultiIndex::EMPTY, 1, vec![rat(1)]);
        qa.add_term(MultiIndex::single(1), 0, vec![rat(1)]);
        action.insert("a".into(), qa);
        let broken = AModule::from_q_action(g, gens, &action).unwrap();
        let (witness, residual) = broken.q_square_check().unwrap_err();
        assert_eq!(witness, "a");
        assert!(!residual.is_zero());
    }

    #[test]
    fn superconnection_round_trip_is_identity() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        let d = m.to_superconnection();
        assert_eq!(AModule::from_superconnection(&d), m);
        assert_eq!(
            AModule::from_superconnection(&d)
                .to_superconnection()
                .theta(),
            d.theta()
        );
    }

    #[test]
    fn coordinate_decomposition_is_the_identity() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        let (theta, d) = m.decompose(Splitting::Coordinate).unwrap();
        assert_eq!(d.theta(), m.theta());
        assert_eq!(theta, ModuleMorphism::identity(&m));
        assert!(theta.is_chain_map().unwrap());
    }

    #[test]
    fn seeded_decompositions_intertwine_and_differ_by_gauge() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        let (t1, d1) = m.decompose(Splitting::Seeded(1)).unwrap();
        let (t2, d2) = m.decompose(Splitting::Seeded(2)).unwrap();
        assert!(t1.is_chain_map().unwrap());
        assert!(t2.is_chain_map().unwrap());
        assert!(d1.is_flat().unwrap());
        assert!(d2.is_flat().unwrap());

        // u D1 = D2 u, equivalently u^{-1} D2 u = D1
        let u = compare_decompositions(&t1, &t2).unwrap();
        assert_eq!(d2.gauge_conjugate(&u).unwrap().theta(), d1.theta());
        assert_eq!(
            d1.gauge_conjugate(&u.inverse()).unwrap().theta(),
            d2.theta()
        );

        // comparing a decomposition with itself gives the identity
        let uu = compare_decompositions(&t1, &t1).unwrap();
        assert!(uu.is_identity());
    }

    #[test]
    fn decompose_recovers_gauge_conjugate_after_statomorphic_twist() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        // twist the module by a fixed automorphism fixing the zero section
        let gens = m.generators().clone();
        let mut u1 = GradedMap::zero(gens.clone(), gens.clone(), -1);
        u1.set_block(1, Matrix::from_i64(1, 1, &[2])).unwrap();
        let u = GaugeTransformation::from_correction(EndValuedForm::from_term(
            MultiIndex::single(2),
            u1,
        ))
        .unwrap();
        let twisted =
            AModule::from_superconnection(&m.to_superconnection().gauge_conjugate(&u).unwrap());
        let (_, d) = twisted.decompose(Splitting::Coordinate).unwrap();
        // the decomposed representation is gauge-conjugate to the original
        let recovered = m.to_superconnection().gauge_conjugate(&u).unwrap();
        assert_eq!(d.theta(), recovered.theta());
    }

    #[test]
    fn statomorphic_to_itself_and_to_gauge_twists() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        let psi = m
            .is_statomorphic(&m)
            .unwrap()
            .expect("module is statomorphic to itself");
        assert!(psi.is_chain_map().unwrap());

        let gens = m.generators().clone();
        let mut u1 = GradedMap::zero(gens.clone(), gens.clone(), -1);
        u1.set_block(1, Matrix::from_i64(1, 1, &[3])).unwrap();
        let u = GaugeTransformation::from_correction(EndValuedForm::from_term(
            MultiIndex::single(1),
            u1,
        ))
        .unwrap();
        let twisted =
            AModule::from_superconnection(&m.to_superconnection().gauge_conjugate(&u).unwrap());
        let psi = m
            .is_statomorphic(&twisted)
            .unwrap()
            .expect("gauge twist is statomorphic");
        assert!(psi.is_chain_map().unwrap());
    }

    #[test]
    fn different_partial_ranks_are_not_statomorphic() {
        let g = LieAlgebra::sl2();
        let gens =
            GradedVectorSpace::new(vec![(0, vec!["a".into()]), (1, vec!["b".into()])]).unwrap();
        let mut action = BTreeMap::new();
        let mut qa = EForm::zero(gens.clone());
        qa.add_term(MultiIndex::EMPTY, 1, vec![rat(1)]);
        action.insert("a".into(), qa);
        let with_partial = AModule::from_q_action(g.clone(), gens.clone(), &action).unwrap();
        let without = AModule::from_q_action(g, gens, &BTreeMap::new()).unwrap();
        assert!(with_partial.is_statomorphic(&without).unwrap().is_none());
    }

    #[test]
    fn bundle_mismatch_is_an_error() {
        let g = LieAlgebra::sl2();
        let m = two_term_module(&g);
        let other = AModule::trivial(g);
        assert!(matches!(
            m.is_statomorphic(&other),
            Err(Error::SpaceMismatch(_))
        ));
    }
}
