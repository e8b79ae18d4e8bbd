//! Shared fixtures: the parameter grid used by the acceptance and
//! integration tests.

#![allow(dead_code)]

use pade_core::kernel::rational::{int, rat, Rational};
use pade_core::kernel::AlgebraicRatio;
use pade_core::pade::DegreeVector;
use pade_core::{validate_config, LambdaConfig};

/// The parameter values the grid draws from.
pub fn lambda_pool() -> Vec<Rational> {
    vec![int(0), rat(1, 2), rat(-1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(-1, 3)]
}

/// Every ordered choice of distinct pool indices `i_1 < ... < i_m`
/// (`m <= 3`) whose values pass validation.
pub fn grid_configs() -> Vec<LambdaConfig> {
    let pool = lambda_pool();
    let k = pool.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        if mask.count_ones() > 3 {
            continue;
        }
        let lambdas: Vec<Rational> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| pool[i].clone()).collect();
        if let Ok(c) = validate_config(&lambdas) {
            out.push(c);
        }
    }
    out
}

/// All degree vectors with entries in `1..=max`.
pub fn degree_vectors(m: usize, max: usize) -> Vec<DegreeVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (1..=max).map(move |n| {
                    let mut w = v.clone();
                    w.push(n);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|n| DegreeVector::new(n, m).unwrap()).collect()
}

/// `(config, degrees)` pairs of the grid, `n_j <= 4`.
pub fn grid() -> Vec<(LambdaConfig, DegreeVector)> {
    grid_configs()
        .into_iter()
        .flat_map(|c| degree_vectors(c.m(), 4).into_iter().map(move |d| (c.clone(), d)))
        .collect()
}

/// The sample points `1, -1, 1/2, 2/3, 2` in `Q` and `i` in `Q(i)`.
pub fn grid_alphas() -> Vec<AlgebraicRatio> {
    ["1", "-1", "1/2", "2/3", "2"]
        .iter()
        .map(|a| AlgebraicRatio::parse(a, 0).unwrap())
        .chain([AlgebraicRatio::parse("i", 1).unwrap()])
        .collect()
}
