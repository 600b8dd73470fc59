//! Oracles shared by the integration tests. Nothing here calls into the
//! engine's linear algebra.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub type Mat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn scale(a: &Mat, s: C) -> Mat {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn pauli_x() -> Mat {
    vec![
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0)],
    ]
}

/// Truncated power series with scaling and squaring.
pub fn expm(a: &Mat) -> Mat {
    let squarings = 6;
    let small = scale(a, c(0.5f64.powi(squarings), 0.0));
    let mut term = eye(a.len());
    let mut sum = eye(a.len());
    for k in 1..=30 {
        term = scale(&matmul(&term, &small), c(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

pub fn outer(v: &[C]) -> Mat {
    v.iter()
        .map(|a| v.iter().map(|b| a * b.conj()).collect())
        .collect()
}

/// `U ρ U†`.
pub fn conjugate(u: &Mat, rho: &Mat) -> Mat {
    let n = u.len();
    let mut udag = zeros(n);
    for i in 0..n {
        for j in 0..n {
            udag[i][j] = u[j][i].conj();
        }
    }
    matmul(&matmul(u, rho), &udag)
}

/// Traces out every qubit of an `n`-qubit operator except those in `keep`
/// (most significant first), returning them in the order given.
pub fn partial_trace(rho: &Mat, n: usize, keep: &[usize]) -> Mat {
    let dim = 1 << keep.len();
    let mut out = zeros(dim);
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    for (i, row) in rho.iter().enumerate() {
        for (j, &entry) in row.iter().enumerate() {
            let traced_equal = (0..n)
                .filter(|q| !keep.contains(q))
                .all(|q| bit(i, q) == bit(j, q));
            if !traced_equal {
                continue;
            }
            let r = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
            let s = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(j, q));
            out[r][s] += entry;
        }
    }
    out
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Pearson chi-square p-value. Bins with zero expected probability must be
/// empty and are dropped.
pub fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut bins = 0;
    for (&o, &p) in observed.iter().zip(probs) {
        if p < 1e-12 {
            assert_eq!(o, 0, "observed an impossible outcome");
            continue;
        }
        let e = p * n as f64;
        stat += (o as f64 - e).powi(2) / e;
        bins += 1;
    }
    if bins < 2 {
        return 1.0;
    }
    let dist = ChiSquared::new((bins - 1) as f64).expect("positive dof");
    1.0 - dist.cdf(stat)
}
