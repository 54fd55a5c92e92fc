use num_traits::Zero;
use serde::Serialize;

use crate::charax;
use crate::error::{Error, Result};
use crate::exactalg::{ceil_div, floor_div, Rational};
use crate::samples::SampleSet;
use crate::scheme::{is_integer, Mask};
use crate::to_f64;

/// Largest denominator bit size kept in exact arithmetic before switching to
/// `f64`.
pub const DEFAULT_EXACT_BITS: u64 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Values {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Values `phi((offset + i) / Q)`; zero outside the stored range.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFunction {
    denom: u64,
    offset: i64,
    values: Values,
}

#[derive(Serialize)]
pub struct LatticePoint {
    pub numerator: i64,
    pub denominator: u64,
    pub x: f64,
    pub value: f64,
}

impl LatticeFunction {
    fn from_samples(s: &SampleSet) -> Self {
        LatticeFunction {
            denom: s.density() as u64,
            offset: s.offset(),
            values: Values::Exact(s.values().to_vec()),
        }
    }

    /// `Q`; points are `n / Q`.
    pub fn denominator(&self) -> u64 {
        self.denom
    }

    pub fn index_range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        match &self.values {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, Values::Exact(_))
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let i = n - self.offset;
        (i >= 0 && (i as usize) < self.len()).then_some(i as usize)
    }

    /// Exact `phi(n / Q)`, if still tracked exactly.
    pub fn exact(&self, n: i64) -> Option<Rational> {
        match &self.values {
            Values::Exact(v) => Some(self.slot(n).map_or_else(Rational::zero, |i| v[i].clone())),
            Values::Float(_) => None,
        }
    }

    pub fn value(&self, n: i64) -> f64 {
        match (&self.values, self.slot(n)) {
            (_, None) => 0.0,
            (Values::Exact(v), Some(i)) => to_f64(&v[i]),
            (Values::Float(v), Some(i)) => v[i],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let (lo, hi) = self.index_range();
        (lo..=hi).map(move |n| LatticePoint {
            numerator: n,
            denominator: self.denom,
            x: n as f64 / self.denom as f64,
            value: self.value(n),
        })
    }

    fn max_bits(&self) -> u64 {
        match &self.values {
            Values::Exact(v) => v.iter().map(|x| x.denom().bits()).max().unwrap_or(0),
            Values::Float(_) => 0,
        }
    }
}

/// [`refine_values_with`] at the default precision threshold.
pub fn refine_values(mask: &Mask, seed: &SampleSet, depth: u32) -> Result<LatticeFunction> {
    refine_values_with(mask, seed, depth, DEFAULT_EXACT_BITS)
}

/// `phi` on `Z/(T m^depth)` by repeated use of
/// `phi(x) = sum_k a_k phi(m x - k + tau)` starting from the seed lattice.
///
/// Values stay exact while every denominator fits in `exact_bits` bits.
pub fn refine_values_with(mask: &Mask, seed: &SampleSet, depth: u32, exact_bits: u64) -> Result<LatticeFunction> {
    let t = seed.density() as i64;
    let tau = mask.tau();
    let tau_t = &tau * Rational::from_integer(t.into());
    if !is_integer(&tau_t) {
        return Err(Error::ShiftLatticeMismatch {
            tau: Box::new(tau),
            lattice: seed.density(),
        });
    }
    if !charax::is_consistent(mask, seed)? {
        return Err(Error::SeedInconsistent);
    }
    let tau_t: i64 = tau_t.to_integer().try_into().expect("small shift");
    let m = mask.arity() as i64;
    // supp(phi) lies in [(k_l - tau)/(m-1), (k_r - tau)/(m-1)]; in units of
    // 1/T that is [(k_l T - tau T)/(m-1), (k_r T - tau T)/(m-1)].
    let lo_t = mask.first_index() * t - tau_t;
    let hi_t = mask.last_index() * t - tau_t;

    let mut f = LatticeFunction::from_samples(seed);
    let mut scale = 1i64; // m^i
    for _ in 0..depth {
        let next = scale * m;
        let q = t * next;
        let (slo, shi) = f.index_range();
        let lo = ceil_div(lo_t * next, m - 1).min(slo * m);
        let hi = floor_div(hi_t * next, m - 1).max(shi * m);
        // phi(n / (T m^{i+1})) reads level-i index n - (k - tau) T m^i.
        let read = |n: i64, k: i64| n - k * t * scale + tau_t * scale;
        let values = if f.is_exact() && f.max_bits() <= exact_bits {
            Values::Exact(
                (lo..=hi)
                    .map(|n| {
                        mask.indexed()
                            .map(|(k, a)| f.exact(read(n, k)).map_or_else(Rational::zero, |v| a * v))
                            .sum()
                    })
                    .collect(),
            )
        } else {
            let a: Vec<(i64, f64)> = mask.indexed().map(|(k, a)| (k, to_f64(a))).collect();
            Values::Float(
                (lo..=hi)
                    .map(|n| a.iter().map(|&(k, ak)| ak * f.value(read(n, k))).sum())
                    .collect(),
            )
        };
        f = LatticeFunction {
            denom: q as u64,
            offset: lo,
            values,
        };
        scale = next;
    }
    Ok(f)
}
