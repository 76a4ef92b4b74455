//! Metrics on graded vector spaces: one symmetric positive-definite
//! rational matrix per degree, certified exactly by leading principal
//! minors.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{EForm, Form};
use crate::graded::GradedVectorSpace;
use crate::matrix::Matrix;
use crate::rational::rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Metric {
    space: Arc<GradedVectorSpace>,
    blocks: BTreeMap<i32, Matrix>,
}

impl Metric {
    pub fn new(space: Arc<GradedVectorSpace>, blocks: BTreeMap<i32, Matrix>) -> Result<Metric> {
        for d in space.degrees() {
            let b = blocks
                .get(&d)
                .ok_or_else(|| Error::InvalidInput(format!("metric missing degree {d}")))?;
            let r = space.rank(d);
            if b.rows() != r || b.cols() != r {
                return Err(Error::ShapeMismatch {
                    degree: d,
                    context: format!(
                        "metric block is {}x{}, expected {r}x{r}",
                        b.rows(),
                        b.cols()
                    ),
                });
            }
            if b != &b.transpose() {
                return Err(Error::InvalidInput(format!(
                    "metric block at degree {d} is not symmetric"
                )));
            }
            for k in 1..=r {
                if b.leading_minor(k) <= rat(0) {
                    return Err(Error::NotPositiveDefinite { order: k });
                }
            }
        }
        Ok(Metric { space, blocks })
    }

    pub fn identity(space: Arc<GradedVectorSpace>) -> Metric {
        let blocks = space
            .degrees()
            .map(|d| (d, Matrix::identity(space.rank(d))))
            .collect();
        Metric { space, blocks }
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn block(&self, d: i32) -> &Matrix {
        &self.blocks[&d]
    }

    /// <alpha x e, beta x f> = (-1)^{|e||beta|} alpha ^ beta <e, f>, where
    /// the metric pairs equal degrees of the space.
    pub fn pairing(&self, left: &EForm, right: &EForm) -> Result<Form> {
        left.check_space(&self.space)?;
        right.check_space(&self.space)?;
        let mut out = Form::zero();
        for (i, d, v) in left.terms() {
            for (j, d2, w) in right.terms() {
                if d != d2 {
                    continue;
                }
                let Some((merged, sign)) = i.merge(j) else {
                    continue;
                };
                let gw = self.blocks[&d].apply(w);
                let mut val = crate::matrix::dot(v, &gw);
                if val.is_zero() {
                    continue;
                }
                // Koszul sign (-1)^{|e| |beta|} with |e| = d, |beta| = |j|
                if (d.rem_euclid(2)) * (j.degree() as i32 % 2) != 0 {
                    val = -val;
                }
                if sign < 0 {
                    val = -val;
                }
                out.add_term(merged, val);
            }
        }
        Ok(out)
    }
}
