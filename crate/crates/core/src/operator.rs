//! Form-valued endomorphisms of a graded vector space.
//!
//! An `EndValuedForm` is an element of the exterior algebra tensored with
//! graded endomorphisms, stored as one homogeneous `GradedMap` per
//! (multi-index, endomorphism degree). The product and the action on
//! vector-valued forms follow the fixed Koszul convention
//!
//!   (xi^I x phi)(alpha x e) = (-1)^{|phi| |alpha|} (xi^I ^ alpha) x phi(e),
//!
//! which makes the product rule
//!
//!   (xi^I x phi) . (xi^J x psi) = (-1)^{|phi| |J|} (xi^I ^ xi^J) x (phi . psi).
//!
//! The total degree of a term is |I| + |phi|; parity of terms matters for
//! moving factors past odd generators, so mixed-degree elements are handled
//! termwise.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::form::{EForm, Form, MultiIndex};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::lie::LieAlgebra;
use crate::rational::{rat, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct EndValuedForm {
    space: Arc<GradedVectorSpace>,
    // (multi-index, endomorphism degree) -> homogeneous graded map
    terms: BTreeMap<(MultiIndex, i32), GradedMap>,
}

impl EndValuedForm {
    pub fn zero(space: Arc<GradedVectorSpace>) -> EndValuedForm {
        EndValuedForm {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(space: Arc<GradedVectorSpace>) -> EndValuedForm {
        let mut out = EndValuedForm::zero(space.clone());
        out.add_term(MultiIndex::EMPTY, GradedMap::identity(space));
        out
    }

    pub fn from_term(idx: MultiIndex, map: GradedMap) -> EndValuedForm {
        let mut out = EndValuedForm::zero(map.source().clone());
        out.add_term(idx, map);
        out
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn add_term(&mut self, idx: MultiIndex, map: GradedMap) {
        assert!(
            map.is_endomorphism() && map.source() == &self.space,
            "term must be an endomorphism of the carrier space"
        );
        if map.is_zero() {
            return;
        }
        let key = (idx, map.degree());
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(&map).expect("degrees agree by key");
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, map);
            }
        }
    }

    /// Replace the term at (idx, map.degree()) wholesale.
    pub fn set_term(&mut self, idx: MultiIndex, map: GradedMap) {
        assert!(
            map.is_endomorphism() && map.source() == &self.space,
            "term must be an endomorphism of the carrier space"
        );
        let key = (idx, map.degree());
        if map.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, map);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, i32, &GradedMap)> {
        self.terms.iter().map(|(&(i, d), m)| (i, d, m))
    }

    pub fn term(&self, idx: MultiIndex, endo_degree: i32) -> Option<&GradedMap> {
        self.terms.get(&(idx, endo_degree))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has odd total degree |I| + |phi|.
    pub fn is_odd(&self) -> bool {
        self.terms
            .keys()
            .all(|&(i, d)| (i.degree() as i32 + d).rem_euclid(2) == 1)
    }

    /// True when every term has total degree exactly `k`.
    pub fn is_homogeneous_of(&self, k: i32) -> bool {
        self.terms.keys().all(|&(i, d)| i.degree() as i32 + d == k)
    }

    pub fn add(&self, other: &EndValuedForm) -> EndValuedForm {
        assert_eq!(self.space, other.space, "sum over different spaces");
        let mut out = self.clone();
        for (&(i, _), m) in &other.terms {
            out.add_term(i, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &EndValuedForm) -> EndValuedForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EndValuedForm {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, c: &Rational) -> EndValuedForm {
        if num_traits::Zero::is_zero(c) {
            return EndValuedForm::zero(self.space.clone());
        }
        EndValuedForm {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(&k, m)| (k, m.scale(c))).collect(),
        }
    }

    /// Koszul product.
    pub fn mul(&self, other: &EndValuedForm) -> EndValuedForm {
        assert_eq!(self.space, other.space, "product over different spaces");
        let mut out = EndValuedForm::zero(self.space.clone());
        for (&(i, di), phi) in &self.terms {
            for (&(j, _), psi) in &other.terms {
                let Some((merged, mut sign)) = i.merge(j) else {
                    continue;
                };
                if di.rem_euclid(2) == 1 && j.degree() % 2 == 1 {
                    sign = -sign;
                }
                let comp = phi.compose(psi).expect("endomorphisms of one space");
                out.add_term(merged, if sign < 0 { comp.neg() } else { comp });
            }
        }
        out
    }

    /// Graded commutator with Koszul signs per homogeneous term:
    /// [a, b] = a b - (-1)^{|a||b|} b a.
    pub fn graded_commutator(&self, other: &EndValuedForm) -> EndValuedForm {
        let mut out = self.mul(other);
        for (&(i, di), phi) in &other.terms {
            for (&(j, dj), psi) in &self.terms {
                // term of (other . self) weighted by -(-1)^{|self term||other term|}
                let Some((merged, mut sign)) = i.merge(j) else {
                    continue;
                };
                if di.rem_euclid(2) == 1 && j.degree() % 2 == 1 {
                    sign = -sign;
                }
                let ta = (j.degree() as i32 + dj).rem_euclid(2);
                let tb = (i.degree() as i32 + di).rem_euclid(2);
                if ta * tb == 0 {
                    sign = -sign;
                }
                let comp = phi.compose(psi).expect("endomorphisms of one space");
                out.add_term(merged, if sign < 0 { comp.neg() } else { comp });
            }
        }
        out
    }

    /// Apply the Chevalley-Eilenberg differential to the form part of every
    /// term. For odd elements this is the operator commutator [d, -].
    pub fn d_form(&self, g: &LieAlgebra) -> EndValuedForm {
        let mut out = EndValuedForm::zero(self.space.clone());
        for (&(i, _), phi) in &self.terms {
            let mut f = Form::zero();
            f.add_term(i, rat(1));
            for (j, c) in g.ce_differential(&f).terms() {
                out.add_term(j, phi.scale(c));
            }
        }
        out
    }

    /// Negate every odd-total-degree term; implements moving the element
    /// past one odd generator.
    pub fn parity_flip(&self) -> EndValuedForm {
        EndValuedForm {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, d), m)| {
                    let t = (i.degree() as i32 + d).rem_euclid(2);
                    ((i, d), if t == 1 { m.neg() } else { m.clone() })
                })
                .collect(),
        }
    }

    /// Form-valued supertrace: only endomorphism-degree-0 terms have
    /// diagonal blocks, so the rest contribute nothing.
    pub fn supertrace(&self) -> Form {
        let mut out = Form::zero();
        for (&(i, d), phi) in &self.terms {
            if d != 0 {
                continue;
            }
            let tr = phi.supertrace().expect("terms are endomorphisms");
            out.add_term(i, tr);
        }
        out
    }

    /// Koszul action on a vector-valued form.
    pub fn apply(&self, omega: &EForm) -> EForm {
        assert_eq!(self.space, *omega.space(), "operand over a different space");
        let mut out = EForm::zero(self.space.clone());
        for (&(j, dj), phi) in &self.terms {
            for (i, d, v) in omega.terms() {
                let Some((merged, mut sign)) = j.merge(i) else {
                    continue;
                };
                if dj.rem_euclid(2) == 1 && i.degree() % 2 == 1 {
                    sign = -sign;
                }
                let w = phi.block_or_zero(d).apply(v);
                let w = if sign < 0 {
                    w.iter().map(|x| -x.clone()).collect()
                } else {
                    w
                };
                out.add_term(merged, d + dj, w);
            }
        }
        out
    }

    /// Largest form degree carried by any term.
    pub fn max_form_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(i, _)| i.degree())
            .max()
            .unwrap_or(0)
    }

    /// N-th power. Empty products are the identity.
    pub fn pow(&self, k: u32) -> EndValuedForm {
        let mut acc = EndValuedForm::identity(self.space.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// For unipotent elements 1 + x with x strictly form-degree raising:
    /// invert by the finite Neumann series. Errors when the degree-0 part
    /// is not the identity.
    pub fn unipotent_inverse(&self) -> Result<EndValuedForm> {
        let one = EndValuedForm::identity(self.space.clone());
        let x = self.sub(&one);
        if x.terms.keys().any(|&(i, _)| i.is_empty()) {
            return Err(Error::Contract(
                "unipotent inverse requires identity in form degree zero".into(),
            ));
        }
        let mut acc = one.clone();
        let mut power = one.clone();
        loop {
            power = power.mul(&x).neg();
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }
}

impl fmt::Debug for EndValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self
            .terms
            .keys()
            .map(|(i, d)| format!("({:?}, endo {d})", i))
            .collect();
        write!(f, "EndValuedForm[{}]", keys.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space() -> Arc<GradedVectorSpace> {
        GradedVectorSpace::new(vec![
            (0, vec!["a0".into(), "a1".into()]),
            (1, vec!["b0".into(), "b1".into()]),
        ])
        .unwrap()
    }

    fn random_term(
        rng: &mut ChaCha8Rng,
        e: &Arc<GradedVectorSpace>,
        n: usize,
        form_deg: u32,
        endo_deg: i32,
    ) -> EndValuedForm {
        let idx = *crate::form::multi_indices(n, form_deg)
            .get(rng.gen_range(0..crate::form::multi_indices(n, form_deg).len()))
            .unwrap();
        let mut map = GradedMap::zero(e.clone(), e.clone(), endo_deg);
        for d in e.degrees().collect::<Vec<_>>() {
            let (rows, cols) = (e.rank(d + endo_deg), e.rank(d));
            if rows == 0 || cols == 0 {
                continue;
            }
            let m =
                crate::matrix::Matrix::from_fn(rows, cols, |_, _| ratio(rng.gen_range(-2..=2), 1));
            map.set_block(d, m).unwrap();
        }
        EndValuedForm::from_term(idx, map)
    }

    fn random_element(rng: &mut ChaCha8Rng, e: &Arc<GradedVectorSpace>, n: usize) -> EndValuedForm {
        let mut acc = EndValuedForm::zero(e.clone());
        for _ in 0..3 {
            let fd = rng.gen_range(0..=2u32);
            let ed = rng.gen_range(-1..=1i32);
            acc = acc.add(&random_term(rng, e, n, fd, ed));
        }
        acc
    }

    #[test]
    fn product_is_associative() {
        let e = space();
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..10 {
            let a = random_element(&mut rng, &e, 3);
            let b = random_element(&mut rng, &e, 3);
            let c = random_element(&mut rng, &e, 3);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }

    #[test]
    fn action_is_compatible_with_product() {
        // (a . b)(omega) = a(b(omega)) pins down the Koszul signs.
        let e = space();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..15 {
            let a = random_element(&mut rng, &e, 3);
            let b = random_element(&mut rng, &e, 3);
            let mut omega = EForm::zero(e.clone());
            for d in [0, 1] {
                for k in 0..e.rank(d) {
                    if rng.gen_bool(0.6) {
                        let idx = crate::form::MultiIndex(rng.gen_range(0..8u64));
                        let mut v = vec![rat(0); e.rank(d)];
                        v[k] = rat(rng.gen_range(-2..=2));
                        omega.add_term(idx, d, v);
                    }
                }
            }
            assert_eq!(a.mul(&b).apply(&omega), a.apply(&b.apply(&omega)));
        }
    }

    #[test]
    fn supertrace_kills_graded_commutators() {
        let e = space();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..15 {
            let a = random_element(&mut rng, &e, 3);
            let b = random_element(&mut rng, &e, 3);
            let c = a.graded_commutator(&b);
            assert!(c.supertrace().is_zero(), "str of commutator must vanish");
        }
    }

    #[test]
    fn unipotent_inverse_round_trip() {
        let e = space();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let mut u = EndValuedForm::identity(e.clone());
            u = u.add(&random_term(&mut rng, &e, 3, 1, -1));
            u = u.add(&random_term(&mut rng, &e, 3, 2, 0));
            let inv = u.unipotent_inverse().unwrap();
            assert_eq!(u.mul(&inv), EndValuedForm::identity(e.clone()));
            assert_eq!(inv.mul(&u), EndValuedForm::identity(e.clone()));
        }
    }
}
