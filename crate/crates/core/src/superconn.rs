//! Superconnections, their curvature, and gauge transformations.
//!
//! A superconnection is D = d + sum_i omega_i with omega_i an i-form valued
//! in endomorphisms of degree 1 - i; it acts on vector-valued forms through
//! the Leibniz rule D(alpha omega) = (d alpha) omega + (-1)^p alpha (D omega).
//! Dropping the homogeneity constraint (but keeping odd parity of every
//! term, which is what metric adjoints produce) gives the nonhomogeneous
//! operators; dropping the d part gives curvature-like form-valued
//! endomorphisms.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::{EForm, MultiIndex};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::lie::LieAlgebra;
use crate::operator::EndValuedForm;
use crate::rational::{rat, Rational};

/// c d + theta with theta a form-valued endomorphism. Superconnections and
/// their metric adjoints have c = 1; curvatures have c = 0.
#[derive(Clone, PartialEq, Eq)]
pub struct NonhomogeneousOperator {
    algebra: Arc<LieAlgebra>,
    dcoef: Rational,
    theta: EndValuedForm,
}

impl NonhomogeneousOperator {
    pub fn new(
        algebra: Arc<LieAlgebra>,
        dcoef: Rational,
        theta: EndValuedForm,
    ) -> NonhomogeneousOperator {
        NonhomogeneousOperator {
            algebra,
            dcoef,
            theta,
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn bundle(&self) -> &Arc<GradedVectorSpace> {
        self.theta.space()
    }

    pub fn dcoef(&self) -> &Rational {
        &self.dcoef
    }

    pub fn theta(&self) -> &EndValuedForm {
        &self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.dcoef.is_zero() && self.theta.is_zero()
    }

    pub fn sub(&self, other: &NonhomogeneousOperator) -> Result<NonhomogeneousOperator> {
        self.check_same_bundle(other)?;
        Ok(NonhomogeneousOperator {
            algebra: self.algebra.clone(),
            dcoef: &self.dcoef - &other.dcoef,
            theta: self.theta.sub(&other.theta),
        })
    }

    pub fn check_same_bundle(&self, other: &NonhomogeneousOperator) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::BaseMismatch);
        }
        if self.bundle() != other.bundle() {
            return Err(Error::SpaceMismatch(
                "operators live on different bundles".into(),
            ));
        }
        Ok(())
    }

    /// Apply to a vector-valued form: the d part acts on coefficients, theta
    /// acts with Koszul signs.
    pub fn apply(&self, omega: &EForm) -> Result<EForm> {
        omega.check_space(self.bundle())?;
        let mut out = self.theta.apply(omega);
        if !self.dcoef.is_zero() {
            for (i, d, v) in omega.terms() {
                let mut f = crate::form::Form::zero();
                f.add_term(i, rat(1));
                for (j, c) in self.algebra.ce_differential(&f).terms() {
                    out.add_term(j, d, v.iter().map(|x| x * c * &self.dcoef).collect());
                }
            }
        }
        Ok(out)
    }

    /// The square as a form-valued endomorphism: c^2 d^2 vanishes by Jacobi,
    /// the cross terms reduce to c [d, theta] = c d(theta) because every
    /// theta term is odd, and theta^2 is a plain product. Even-parity terms
    /// would leave this algebra, so they are rejected.
    pub fn square(&self) -> Result<NonhomogeneousOperator> {
        self.algebra.require_jacobi()?;
        if !self.theta.is_odd() {
            return Err(Error::Contract(
                "square is defined for operators with odd-parity terms only".into(),
            ));
        }
        let mut theta = self.theta.mul(&self.theta);
        if !self.dcoef.is_zero() {
            theta = theta.add(&self.theta.d_form(&self.algebra).scale(&self.dcoef));
        }
        Ok(NonhomogeneousOperator {
            algebra: self.algebra.clone(),
            dcoef: Rational::zero(),
            theta,
        })
    }

    pub fn is_flat(&self) -> Result<bool> {
        Ok(self.square()?.is_zero())
    }

    /// Anticommutator D0 D1 + D1 D0 of two odd operators, as a form-valued
    /// endomorphism.
    pub fn odd_commutator(&self, other: &NonhomogeneousOperator) -> Result<EndValuedForm> {
        self.check_same_bundle(other)?;
        self.algebra.require_jacobi()?;
        if !self.theta.is_odd() || !other.theta.is_odd() {
            return Err(Error::Contract(
                "commutator needs odd-parity operators".into(),
            ));
        }
        let mut out = self
            .theta
            .mul(&other.theta)
            .add(&other.theta.mul(&self.theta));
        if !other.dcoef.is_zero() {
            out = out.add(&self.theta.d_form(&self.algebra).scale(&other.dcoef));
        }
        if !self.dcoef.is_zero() {
            out = out.add(&other.theta.d_form(&self.algebra).scale(&self.dcoef));
        }
        Ok(out)
    }

    /// Conjugate by an invertible degree-0 module automorphism given as a
    /// form-valued endomorphism u: returns u^{-1} D u.
    pub(crate) fn conjugate_by(
        &self,
        u: &EndValuedForm,
        u_inv: &EndValuedForm,
    ) -> NonhomogeneousOperator {
        // u^{-1}(c d + theta)u = c d + u^{-1}(c d(u - 1) + theta u);
        // d(u) as d_form of the whole u is the same as of u - 1.
        let mut inner = self.theta.mul(u);
        if !self.dcoef.is_zero() {
            inner = inner.add(&u.d_form(&self.algebra).scale(&self.dcoef));
        }
        NonhomogeneousOperator {
            algebra: self.algebra.clone(),
            dcoef: self.dcoef.clone(),
            theta: u_inv.mul(&inner),
        }
    }
}

impl fmt::Debug for NonhomogeneousOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NonhomogeneousOperator({} d + {:?})",
            self.dcoef, self.theta
        )
    }
}

/// A flat-or-not superconnection: d plus homogeneous total-degree-1
/// components omega_i.
#[derive(Clone, PartialEq, Eq)]
pub struct Superconnection {
    op: NonhomogeneousOperator,
}

impl Superconnection {
    /// d alone, with zero components.
    pub fn d_only(algebra: Arc<LieAlgebra>, bundle: Arc<GradedVectorSpace>) -> Superconnection {
        Superconnection {
            op: NonhomogeneousOperator::new(algebra, Rational::one(), EndValuedForm::zero(bundle)),
        }
    }

    /// Build from components; every term must be an i-form valued in
    /// endomorphisms of degree 1 - i.
    pub fn new(algebra: Arc<LieAlgebra>, theta: EndValuedForm) -> Result<Superconnection> {
        if !theta.is_homogeneous_of(1) {
            return Err(Error::Contract(
                "superconnection components must have total degree 1".into(),
            ));
        }
        if theta.max_form_degree() as usize > algebra.dim() {
            return Err(Error::Contract(
                "component form degree exceeds the algebra dimension".into(),
            ));
        }
        Ok(Superconnection {
            op: NonhomogeneousOperator::new(algebra, Rational::one(), theta),
        })
    }

    pub fn with_component(self, idx: MultiIndex, map: GradedMap) -> Result<Superconnection> {
        let mut theta = self.op.theta().clone();
        theta.add_term(idx, map);
        Superconnection::new(self.op.algebra.clone(), theta)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.op.algebra
    }

    pub fn bundle(&self) -> &Arc<GradedVectorSpace> {
        self.op.bundle()
    }

    pub fn theta(&self) -> &EndValuedForm {
        self.op.theta()
    }

    pub fn as_operator(&self) -> &NonhomogeneousOperator {
        &self.op
    }

    pub fn apply(&self, omega: &EForm) -> Result<EForm> {
        self.op.apply(omega)
    }

    pub fn square(&self) -> Result<NonhomogeneousOperator> {
        self.op.square()
    }

    pub fn is_flat(&self) -> Result<bool> {
        self.op.is_flat()
    }

    /// The component omega_0, the induced differential on sections.
    pub fn induced_partial(&self) -> GradedMap {
        self.op
            .theta()
            .term(MultiIndex::EMPTY, 1)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(self.bundle().clone(), self.bundle().clone(), 1))
    }

    /// u^{-1} D u for a gauge transformation u.
    pub fn gauge_conjugate(&self, u: &GaugeTransformation) -> Result<Superconnection> {
        if u.bundle() != self.bundle() {
            return Err(Error::SpaceMismatch(
                "gauge transformation on a different bundle".into(),
            ));
        }
        let uop = u.as_endo();
        let uinv = uop
            .unipotent_inverse()
            .expect("gauge transformations are unipotent");
        let conj = self.op.conjugate_by(&uop, &uinv);
        Superconnection::new(conj.algebra.clone(), conj.theta).map_err(|_| {
            Error::InvariantViolation("gauge conjugation must preserve homogeneity".into())
        })
    }
}

impl fmt::Debug for Superconnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Superconnection(d + {:?})", self.op.theta)
    }
}

/// Unipotent degree-0 module automorphism id + sum_{i>=1} u_i with u_i an
/// i-form valued in degree -i endomorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct GaugeTransformation {
    // the correction part, without the identity
    corr: EndValuedForm,
}

impl GaugeTransformation {
    pub fn identity(bundle: Arc<GradedVectorSpace>) -> GaugeTransformation {
        GaugeTransformation {
            corr: EndValuedForm::zero(bundle),
        }
    }

    /// Build from the correction terms u_i; each must be an i-form (i >= 1)
    /// valued in endomorphisms of degree -i.
    pub fn from_correction(corr: EndValuedForm) -> Result<GaugeTransformation> {
        for (idx, endo_deg, _) in corr.terms() {
            let i = idx.degree() as i32;
            if i == 0 || endo_deg != -i {
                return Err(Error::Contract(
                    "gauge corrections must be i-forms valued in degree -i endomorphisms".into(),
                ));
            }
        }
        Ok(GaugeTransformation { corr })
    }

    pub fn bundle(&self) -> &Arc<GradedVectorSpace> {
        self.corr.space()
    }

    pub fn is_identity(&self) -> bool {
        self.corr.is_zero()
    }

    pub fn correction(&self) -> &EndValuedForm {
        &self.corr
    }

    /// id + corrections, as a form-valued endomorphism.
    pub fn as_endo(&self) -> EndValuedForm {
        EndValuedForm::identity(self.bundle().clone()).add(&self.corr)
    }

    pub fn inverse(&self) -> GaugeTransformation {
        let inv = self
            .as_endo()
            .unipotent_inverse()
            .expect("gauge transformations are unipotent");
        GaugeTransformation::from_correction(
            inv.sub(&EndValuedForm::identity(self.bundle().clone())),
        )
        .expect("inverse of a gauge transformation is a gauge transformation")
    }

    /// Composition (self . other), again a gauge transformation.
    pub fn compose(&self, other: &GaugeTransformation) -> Result<GaugeTransformation> {
        if self.bundle() != other.bundle() {
            return Err(Error::SpaceMismatch(
                "gauge composition over different bundles".into(),
            ));
        }
        let prod = self.as_endo().mul(&other.as_endo());
        GaugeTransformation::from_correction(
            prod.sub(&EndValuedForm::identity(self.bundle().clone())),
        )
    }

    pub fn apply(&self, omega: &EForm) -> EForm {
        self.as_endo().apply(omega)
    }
}

impl fmt::Debug for GaugeTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaugeTransformation(id + {:?})", self.corr)
    }
}
