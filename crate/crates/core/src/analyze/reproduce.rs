use crate::error::Result;
use crate::samples::SampleSet;
use crate::scheme::Mask;

use super::refine::refine_values;

/// Largest `|sum_k k^e phi(x - k) - x^e|` over the lattice points
/// `x in [0, 1)` at the given depth, for `e = 0..=max_degree`.
///
/// Shift invariance of polynomial spaces makes `[0, 1)` sufficient.
pub fn reproduction_errors(mask: &Mask, seed: &SampleSet, max_degree: u32, depth: u32) -> Result<Vec<f64>> {
    let f = refine_values(mask, seed, depth)?;
    let q = f.denominator() as i64;
    let (lo, hi) = f.index_range();
    let mut worst = vec![0.0f64; max_degree as usize + 1];
    for n in 0..q {
        let x = n as f64 / q as f64;
        // phi(x - k) is stored at index n - k q.
        let ks = (n - hi).div_euclid(q)..=(n - lo).div_euclid(q) + 1;
        for (e, w) in worst.iter_mut().enumerate() {
            let s: f64 = ks.clone().map(|k| (k as f64).powi(e as i32) * f.value(n - k * q)).sum();
            *w = w.max((s - x.powi(e as i32)).abs());
        }
    }
    Ok(worst)
}

/// Largest `D <= max_degree` such that every monomial of degree at most `D`
/// is reproduced within `tol`; `None` if constants already fail.
pub fn reproduction_degree(
    mask: &Mask,
    seed: &SampleSet,
    max_degree: u32,
    depth: u32,
    tol: f64,
) -> Result<Option<u32>> {
    let errs = reproduction_errors(mask, seed, max_degree, depth)?;
    let passing = errs.iter().take_while(|&&e| e <= tol).count();
    Ok(passing.checked_sub(1).map(|d| d as u32))
}
