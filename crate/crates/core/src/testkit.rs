//! Shared generators for randomized tests. Everything is seeded, so test
//! runs are reproducible. Not part of the supported API surface.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::form::multi_indices;
use crate::form::MultiIndex;
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::metric::Metric;
use crate::module::AModule;
use crate::operator::EndValuedForm;
use crate::rational::{rat, ratio};
use crate::superconn::{GaugeTransformation, Superconnection};

pub fn random_graded_space(rng: &mut ChaCha8Rng, tag: usize) -> Arc<GradedVectorSpace> {
    let terms = rng.gen_range(2..=3);
    let start = rng.gen_range(-1..=0);
    let mut components = Vec::new();
    for t in 0..terms {
        let rank = rng.gen_range(1..=2);
        let degree = start + t as i32;
        let names = (0..rank).map(|i| format!("g{tag}_{degree}_{i}")).collect();
        components.push((degree, names));
    }
    GradedVectorSpace::new(components).expect("generated names are unique")
}

/// A random flat module: a chain differential on a random graded space,
/// twisted by a random gauge transformation.
pub fn random_flat_module(rng: &mut ChaCha8Rng, g: &Arc<LieAlgebra>, tag: usize) -> AModule {
    let e = random_graded_space(rng, tag);
    let degrees: Vec<i32> = e.degrees().collect();
    let mut partial = GradedMap::zero(e.clone(), e.clone(), 1);
    // square-zero degree by degree: each block's rows are combinations of
    // the left kernel of the previous block
    let mut prev: Option<Matrix> = None;
    for w in degrees.windows(2) {
        let (d0, d1) = (w[0], w[1]);
        if d1 != d0 + 1 {
            prev = None;
            continue;
        }
        let (rows, cols) = (e.rank(d1), e.rank(d0));
        let block = match &prev {
            None => Matrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-2..=2))),
            Some(last) => {
                let left_kernel = last.transpose().kernel_basis();
                let mut block_rows = Vec::with_capacity(rows);
                for _ in 0..rows {
                    let mut row = vec![rat(0); cols];
                    for v in &left_kernel {
                        let c = rat(rng.gen_range(-1..=1));
                        for (r, x) in row.iter_mut().zip(v) {
                            *r = r.clone() + &c * x;
                        }
                    }
                    block_rows.push(row);
                }
                Matrix::from_rows(block_rows)
            }
        };
        partial.set_block(d0, block.clone()).unwrap();
        prev = Some(block);
    }
    let base = Superconnection::d_only(g.clone(), e.clone())
        .with_component(MultiIndex::EMPTY, partial)
        .unwrap();
    let twisted = base.gauge_conjugate(&random_gauge(rng, g, &e)).unwrap();
    AModule::from_superconnection(&twisted)
}

pub fn two_term(r0: usize, r1: usize) -> Arc<GradedVectorSpace> {
    GradedVectorSpace::new(vec![
        (0, (0..r0).map(|i| format!("a{i}")).collect()),
        (1, (0..r1).map(|i| format!("b{i}")).collect()),
    ])
    .unwrap()
}

pub fn random_gauge(
    rng: &mut ChaCha8Rng,
    g: &Arc<LieAlgebra>,
    e: &Arc<GradedVectorSpace>,
) -> GaugeTransformation {
    let n = g.dim();
    let mut corr = EndValuedForm::zero(e.clone());
    for fd in 1..=n.min(3) as u32 {
        for idx in multi_indices(n, fd) {
            if rng.gen_bool(0.5) {
                continue;
            }
            let endo_deg = -(fd as i32);
            let mut map = GradedMap::zero(e.clone(), e.clone(), endo_deg);
            let mut any = false;
            for d in e.degrees().collect::<Vec<_>>() {
                let (rows, cols) = (e.rank(d + endo_deg), e.rank(d));
                if rows == 0 || cols == 0 {
                    continue;
                }
                let m = Matrix::from_fn(rows, cols, |_, _| {
                    ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2))
                });
                any = any || !m.is_zero();
                map.set_block(d, m).unwrap();
            }
            if any {
                corr.add_term(idx, map);
            }
        }
    }
    GaugeTransformation::from_correction(corr).unwrap()
}

pub fn random_superconnection(
    rng: &mut ChaCha8Rng,
    g: &Arc<LieAlgebra>,
    e: &Arc<GradedVectorSpace>,
) -> Superconnection {
    let n = g.dim();
    let mut theta = EndValuedForm::zero(e.clone());
    for fd in 0..=n.min(2) as u32 {
        for idx in multi_indices(n, fd) {
            if rng.gen_bool(0.4) {
                continue;
            }
            let endo_deg = 1 - fd as i32;
            let mut map = GradedMap::zero(e.clone(), e.clone(), endo_deg);
            for d in e.degrees().collect::<Vec<_>>() {
                let (rows, cols) = (e.rank(d + endo_deg), e.rank(d));
                if rows == 0 || cols == 0 {
                    continue;
                }
                map.set_block(
                    d,
                    Matrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-2..=2))),
                )
                .unwrap();
            }
            theta.add_term(idx, map);
        }
    }
    Superconnection::new(g.clone(), theta).unwrap()
}

/// A pair of flat superconnections on a shared bundle: gauge conjugates of
/// d + partial with partial the diagonal inclusion of the lowest degree.
pub fn random_flat_pair(
    rng: &mut ChaCha8Rng,
    g: &Arc<LieAlgebra>,
    e: &Arc<GradedVectorSpace>,
) -> (Superconnection, Superconnection) {
    let degrees: Vec<i32> = e.degrees().collect();
    let base = if degrees.len() >= 2 {
        let (d0, d1) = (degrees[0], degrees[1]);
        let mut partial = GradedMap::zero(e.clone(), e.clone(), d1 - d0);
        let block = Matrix::from_fn(
            e.rank(d1),
            e.rank(d0),
            |i, j| {
                if i == j {
                    rat(1)
                } else {
                    rat(0)
                }
            },
        );
        let mut sc = Superconnection::d_only(g.clone(), e.clone());
        if d1 - d0 == 1 {
            partial.set_block(d0, block).unwrap();
            sc = sc.with_component(MultiIndex::EMPTY, partial).unwrap();
        }
        sc
    } else {
        Superconnection::d_only(g.clone(), e.clone())
    };
    let d0 = base.gauge_conjugate(&random_gauge(rng, g, e)).unwrap();
    let d1 = base.gauge_conjugate(&random_gauge(rng, g, e)).unwrap();
    (d0, d1)
}

pub fn random_metric(rng: &mut ChaCha8Rng, e: &Arc<GradedVectorSpace>) -> Metric {
    let mut blocks = BTreeMap::new();
    for d in e.degrees() {
        let r = e.rank(d);
        let l = Matrix::from_fn(r, r, |_, _| ratio(rng.gen_range(-1..=1), 1));
        let spd = &(&l.transpose() * &l) + &Matrix::identity(r);
        blocks.insert(d, spd);
    }
    Metric::new(e.clone(), blocks).unwrap()
}
