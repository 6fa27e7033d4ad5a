//! Numeric foundation: compensated summation, log-factorial tables and the
//! truncation-tail policy for choosing Fock cutoffs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Global tolerance for normalization checks.
pub const EPS_NORM: f64 = 1e-12;

/// Target Poisson tail mass when choosing a cutoff automatically.
pub const TAIL_TARGET: f64 = 1e-12;

/// Largest factorial table a caller may request.
pub const MAX_FACTORIAL_N: usize = 4096;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }

    pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

/// Table of natural-log factorials ln(n!) for n = 0..=max_n.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    log_fact: Vec<f64>,
}

impl FactorialTable {
    /// Build a table covering 0..=max_n. Sizes above [`MAX_FACTORIAL_N`]
    /// are rejected.
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n > MAX_FACTORIAL_N {
            return Err(Error::ResourceBound {
                requested: max_n,
                max: MAX_FACTORIAL_N,
            });
        }
        let mut log_fact = Vec::with_capacity(max_n + 1);
        let mut acc = KahanSum::new();
        log_fact.push(0.0);
        for n in 1..=max_n {
            acc.add((n as f64).ln());
            log_fact.push(acc.value());
        }
        Ok(Self { log_fact })
    }

    #[inline]
    pub fn max_n(&self) -> usize {
        self.log_fact.len() - 1
    }

    /// ln(n!)
    #[inline]
    pub fn ln(&self, n: usize) -> f64 {
        self.log_fact[n]
    }
}

/// Tail mass of a Poisson(lambda) distribution above `cutoff`.
pub fn poisson_tail(lambda: f64, cutoff: usize) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let mut p = (-lambda).exp();
    let mut cum = KahanSum::new();
    cum.add(p);
    for n in 1..=cutoff {
        p *= lambda / n as f64;
        cum.add(p);
    }
    (1.0 - cum.value()).max(0.0)
}

/// Smallest cutoff C whose Poisson(lambda) tail mass is below `eps`.
pub fn auto_cutoff(lambda: f64, eps: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    let mut p = (-lambda).exp();
    let mut cum = KahanSum::new();
    cum.add(p);
    let mut n = 0usize;
    while 1.0 - cum.value() >= eps && n < MAX_FACTORIAL_N {
        n += 1;
        p *= lambda / n as f64;
        cum.add(p);
    }
    n
}

/// Cutoff for a pair of coherent inputs per the default tail policy.
pub fn default_cutoff(alpha_sq: f64, beta_sq: f64) -> usize {
    auto_cutoff(alpha_sq.max(beta_sq), TAIL_TARGET)
}

/// Reduce an angle to [0, 2pi).
#[inline]
pub fn wrap_2pi(x: f64) -> f64 {
    x.rem_euclid(TWO_PI)
}

/// Multiply z by i^p exactly (p taken mod 4).
#[inline]
pub fn mul_i_pow(z: Complex64, p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => z,
        1 => Complex64::new(-z.im, z.re),
        2 => Complex64::new(-z.re, -z.im),
        _ => Complex64::new(z.im, -z.re),
    }
}

/// e * ln_x with the convention 0 * (-inf) = 0, for powers held in log form.
#[inline]
pub fn pow_log(ln_x: f64, e: i64) -> f64 {
    if e == 0 {
        0.0
    } else {
        e as f64 * ln_x
    }
}
