//! Assembly and exact solution of the linear system whose solutions are the
//! dual interpolatory masks with prescribed half-integer samples.
//!
//! Unknowns are the coefficients `b` of `B(z)` in
//! `A(z) = ((1 + ... + z^{m-1})/m)^d B(z)`, so that `a = m^{-(d-1)} O^d b`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{ceil_div, floor_div, LaurentPoly, LinearSolution, RatMatrix, Rational};
use crate::samples::SampleSet;
use crate::scheme::{support_interval, Mask};

/// Inputs of one construction: arity `m`, smoothing order `d`, half-support
/// `k*` (mask on `{1-k*, ..., k*}`) and samples on `Z/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct ConstructionProblem {
    arity: u32,
    smoothing: u32,
    k_star: i64,
    samples: SampleSet,
    symmetric: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemRepr {
    pub arity: u32,
    pub smoothing: u32,
    pub k_star: i64,
    pub samples: SampleSet,
    pub symmetric: bool,
}

impl TryFrom<ProblemRepr> for ConstructionProblem {
    type Error = Error;
    fn try_from(r: ProblemRepr) -> Result<Self> {
        ConstructionProblem::new(r.arity, r.smoothing, r.k_star, r.samples, r.symmetric)
    }
}

impl From<ConstructionProblem> for ProblemRepr {
    fn from(p: ConstructionProblem) -> Self {
        ProblemRepr {
            arity: p.arity,
            smoothing: p.smoothing,
            k_star: p.k_star,
            samples: p.samples,
            symmetric: p.symmetric,
        }
    }
}

impl ConstructionProblem {
    pub fn new(arity: u32, smoothing: u32, k_star: i64, samples: SampleSet, symmetric: bool) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        if samples.density() != 2 {
            return Err(Error::LatticeMismatch {
                expected: 2,
                found: samples.density(),
            });
        }
        if !samples.is_interpolatory() {
            return Err(Error::NotInterpolatory);
        }
        let unknowns = 2 * k_star - smoothing as i64 * (arity as i64 - 1);
        if k_star < 1 || unknowns < 1 {
            return Err(Error::InvalidWindow(format!(
                "k* = {k_star}, d = {smoothing}, m = {arity} leaves {unknowns} unknowns"
            )));
        }
        let (_, half_width) = support_interval(arity, k_star);
        if let Some((j, _)) = samples
            .nonzero()
            .find(|(j, _)| Rational::new(j.abs().into(), 2.into()) > half_width)
        {
            return Err(Error::SampleOutsideSupport {
                x: Box::new(Rational::new(j.into(), 2.into())),
                half_width: Box::new(half_width),
            });
        }
        Ok(ConstructionProblem {
            arity,
            smoothing,
            k_star,
            samples,
            symmetric,
        })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn smoothing(&self) -> u32 {
        self.smoothing
    }

    pub fn k_star(&self) -> i64 {
        self.k_star
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Same problem with the symmetry flag replaced.
    pub fn with_symmetry(&self, symmetric: bool) -> Self {
        ConstructionProblem {
            symmetric,
            ..self.clone()
        }
    }

    /// `[alpha_l, alpha_r]`, the refinement points `alpha/2` that carry
    /// information.
    pub fn alpha_window(&self) -> (i64, i64) {
        alpha_window(self.arity, self.k_star)
    }

    /// `[beta_l, beta_r] = [1 - k*, k* - d(m-1)]`, the support of `b`.
    pub fn beta_window(&self) -> (i64, i64) {
        (
            1 - self.k_star,
            self.k_star - self.smoothing as i64 * (self.arity as i64 - 1),
        )
    }

    /// `[1 - k*, k*]`, the support of the mask.
    pub fn mask_window(&self) -> (i64, i64) {
        (1 - self.k_star, self.k_star)
    }
}

fn alpha_window(m: u32, k_star: i64) -> (i64, i64) {
    let m1 = m as i64 - 1;
    (ceil_div(1 - 2 * k_star, m1), floor_div(2 * k_star - 1, m1))
}

/// Row and column counts of the unsymmetrized system.
pub fn full_dimensions(m: u32, d: u32, k_star: i64) -> (usize, usize) {
    let (al, ar) = alpha_window(m, k_star);
    (
        (ar - al + m as i64 + 1) as usize,
        (2 * k_star - d as i64 * (m as i64 - 1)) as usize,
    )
}

fn window_len((lo, hi): (i64, i64)) -> usize {
    (hi - lo + 1).max(0) as usize
}

/// `M(alpha, beta) = phi((m alpha + 1)/2 - beta)` for `alpha` in `rows` and
/// `beta` in `cols`.
pub fn build_m(m: u32, samples: &SampleSet, rows: (i64, i64), cols: (i64, i64)) -> RatMatrix {
    let mut out = RatMatrix::zeros(window_len(rows), window_len(cols));
    for (i, alpha) in (rows.0..=rows.1).enumerate() {
        for (j, beta) in (cols.0..=cols.1).enumerate() {
            out[(i, j)] = samples.at(m as i64 * alpha + 1 - 2 * beta);
        }
    }
    out
}

/// `c(alpha) = phi(alpha/2)` followed by `m` ones.
pub fn build_rhs(m: u32, samples: &SampleSet, rows: (i64, i64)) -> Vec<Rational> {
    (rows.0..=rows.1)
        .map(|alpha| samples.at(alpha))
        .chain((0..m).map(|_| Rational::one()))
        .collect()
}

/// Rows `gamma = 1..=m`: `N(gamma, beta) = 1` iff `beta = gamma (mod m)`.
pub fn build_n(m: u32, cols: (i64, i64)) -> RatMatrix {
    let mi = m as i64;
    let mut out = RatMatrix::zeros(m as usize, window_len(cols));
    for (i, gamma) in (1..=mi).enumerate() {
        for (j, beta) in (cols.0..=cols.1).enumerate() {
            if (beta - gamma).rem_euclid(mi) == 0 {
                out[(i, j)] = Rational::one();
            }
        }
    }
    out
}

/// `O(alpha, beta) = 1` iff `0 <= alpha - beta <= m - 1`, on the given windows.
pub fn build_o(m: u32, rows: (i64, i64), cols: (i64, i64)) -> RatMatrix {
    let mut out = RatMatrix::zeros(window_len(rows), window_len(cols));
    for (i, alpha) in (rows.0..=rows.1).enumerate() {
        for (j, beta) in (cols.0..=cols.1).enumerate() {
            if (0..m as i64).contains(&(alpha - beta)) {
                out[(i, j)] = Rational::one();
            }
        }
    }
    out
}

/// `O^d` from `b` on `cols` to the window `cols.0 ..= cols.1 + d(m-1)`.
pub fn build_o_power(m: u32, d: u32, cols: (i64, i64)) -> RatMatrix {
    let mut acc = RatMatrix::identity(window_len(cols));
    let mut hi = cols.1;
    for _ in 0..d {
        let next = hi + m as i64 - 1;
        acc = build_o(m, (cols.0, next), (cols.0, hi)).mul(&acc);
        hi = next;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RowLabel {
    /// Refinement equation at `alpha / 2`.
    Refinement(i64),
    /// `sum_k a_{mk + gamma} = 1`.
    Residue(i64),
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Refinement(a) => write!(f, "alpha={a}"),
            RowLabel::Residue(g) => write!(f, "gamma={g}"),
        }
    }
}

/// A column stands for `b_beta`, and for `b_mirror` too after folding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnLabel {
    pub beta: i64,
    pub mirror: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledSystem {
    pub matrix: RatMatrix,
    pub rhs: Vec<Rational>,
    pub rows: Vec<RowLabel>,
    pub columns: Vec<ColumnLabel>,
}

impl AssembledSystem {
    /// `b` on the full beta window from a solution vector of this system.
    fn expand(&self, x: &[Rational], beta: (i64, i64)) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); window_len(beta)];
        for (c, v) in self.columns.iter().zip(x) {
            b[(c.beta - beta.0) as usize] = v.clone();
            if let Some(mb) = c.mirror {
                b[(mb - beta.0) as usize] = v.clone();
            }
        }
        b
    }
}

/// The system in `b`. Without symmetry it is returned unpruned; with
/// symmetry, columns `beta` and `beta_l + beta_r - beta` are merged and
/// all-zero or repeated rows are dropped, first occurrence kept.
pub fn assemble(problem: &ConstructionProblem) -> AssembledSystem {
    let m = problem.arity;
    let d = problem.smoothing;
    let alphas = problem.alpha_window();
    let betas = problem.beta_window();
    let awin = problem.mask_window();

    let top = build_m(m, &problem.samples, alphas, awin);
    let bottom = build_n(m, awin);
    let mut rows_a = top.to_rows();
    rows_a.extend(bottom.to_rows());
    let lifted = RatMatrix::from_rows(rows_a);
    let scale = Rational::from_integer(m.into()).pow(1 - d as i32);
    let full = lifted.mul(&build_o_power(m, d, betas)).scale(&scale);
    let rhs = build_rhs(m, &problem.samples, alphas);
    let labels: Vec<RowLabel> = (alphas.0..=alphas.1)
        .map(RowLabel::Refinement)
        .chain((1..=m as i64).map(RowLabel::Residue))
        .collect();

    if !problem.symmetric {
        return AssembledSystem {
            matrix: full,
            rhs,
            rows: labels,
            columns: (betas.0..=betas.1)
                .map(|beta| ColumnLabel { beta, mirror: None })
                .collect(),
        };
    }

    let sum = betas.0 + betas.1;
    let columns: Vec<ColumnLabel> = (betas.0..=betas.1)
        .filter(|b| 2 * b >= sum)
        .map(|beta| ColumnLabel {
            beta,
            mirror: (2 * beta != sum).then_some(sum - beta),
        })
        .collect();
    let mut seen = HashSet::new();
    let mut kept_rows = Vec::new();
    let mut kept_rhs = Vec::new();
    let mut kept_labels = Vec::new();
    for (i, label) in labels.into_iter().enumerate() {
        let row: Vec<Rational> = columns
            .iter()
            .map(|c| {
                let own = full[(i, (c.beta - betas.0) as usize)].clone();
                match c.mirror {
                    Some(mb) => own + &full[(i, (mb - betas.0) as usize)],
                    None => own,
                }
            })
            .collect();
        if rhs[i].is_zero() && row.iter().all(Zero::is_zero) {
            continue;
        }
        if !seen.insert((row.clone(), rhs[i].clone())) {
            continue;
        }
        kept_rows.push(row);
        kept_rhs.push(rhs[i].clone());
        kept_labels.push(label);
    }
    AssembledSystem {
        matrix: RatMatrix::from_rows(kept_rows),
        rhs: kept_rhs,
        rows: kept_labels,
        columns,
    }
}

/// Mask coefficients `m^{-(d-1)} O^d b` on the mask window.
fn lift(problem: &ConstructionProblem, b: &[Rational]) -> LaurentPoly {
    let (lo, _) = problem.beta_window();
    let f = crate::scheme::smoothing_factor(problem.arity);
    let mut p = LaurentPoly::new(lo, b.to_vec());
    for _ in 0..problem.smoothing {
        p = &p * &f;
    }
    // ((1+..+z^{m-1})/m)^d B(z) = A(z) = (1/m) sum a_k z^k.
    p.scale(&Rational::from_integer(problem.arity.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Infeasible,
    UniqueMask(Mask),
    Family(SolutionFamily),
}

pub fn derive(problem: &ConstructionProblem) -> Result<Derivation> {
    let system = assemble(problem);
    let LinearSolution::Consistent { particular, nullbasis } = system.matrix.rref_solve(&system.rhs) else {
        return Ok(Derivation::Infeasible);
    };
    let betas = problem.beta_window();
    let to_poly = |x: &[Rational]| lift(problem, &system.expand(x, betas));
    let p = to_poly(&particular);
    let particular = Mask::new(problem.arity, p.offset(), p.coeffs().to_vec())?;
    if nullbasis.is_empty() {
        return Ok(Derivation::UniqueMask(particular));
    }
    let basis = nullbasis
        .iter()
        .map(|v| {
            let d = to_poly(v);
            Mask::new(problem.arity, d.offset(), d.coeffs().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivation::Family(SolutionFamily {
        problem: problem.clone(),
        particular,
        basis,
    }))
}

/// `problem`'s residual on a candidate mask, taken directly on `a` rather
/// than through `b`: `[M a - c; N a - 1]`, or `None` when `a` does not fit
/// the mask window or lacks the smoothing factor of order `d`.
pub fn mask_residual(problem: &ConstructionProblem, mask: &Mask) -> Option<Vec<Rational>> {
    let (lo, hi) = problem.mask_window();
    if mask.arity() != problem.arity || mask.first_index() < lo || mask.last_index() > hi {
        return None;
    }
    mask.factor_smoothing(problem.smoothing)?;
    let a: Vec<Rational> = (lo..=hi).map(|k| mask.coeff(k)).collect();
    let alphas = problem.alpha_window();
    let mut top = build_m(problem.arity, &problem.samples, alphas, (lo, hi)).to_rows();
    top.extend(build_n(problem.arity, (lo, hi)).to_rows());
    let lhs = RatMatrix::from_rows(top).mul_vec(&a);
    let rhs = build_rhs(problem.arity, &problem.samples, alphas);
    Some(lhs.into_iter().zip(rhs).map(|(l, r)| l - r).collect())
}

/// Affine set `particular + span(basis)` of masks solving a construction
/// problem, in the solver's canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub problem: ConstructionProblem,
    pub particular: Mask,
    pub basis: Vec<Mask>,
}

impl SolutionFamily {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `particular + sum t_i basis_i`.
    pub fn member(&self, t: &[Rational]) -> Result<Mask> {
        if t.len() != self.basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a family of dimension {}",
                t.len(),
                self.basis.len()
            )));
        }
        let mut p = poly(&self.particular);
        for (ti, v) in t.iter().zip(&self.basis) {
            p = &p + &poly(v).scale(ti);
        }
        Mask::new(self.problem.arity, p.offset(), p.coeffs().to_vec())
    }

    /// Exact membership: the mask fits the window, carries the smoothing
    /// factor, has zero system residual and, for symmetric problems, is
    /// palindromic on the mask window.
    pub fn is_member(&self, mask: &Mask) -> bool {
        let Some(res) = mask_residual(&self.problem, mask) else {
            return false;
        };
        if !res.iter().all(Zero::is_zero) {
            return false;
        }
        if self.problem.symmetric {
            let (lo, hi) = self.problem.mask_window();
            return (lo..=hi).all(|k| mask.coeff(k) == mask.coeff(lo + hi - k));
        }
        true
    }

    /// One-parameter chart in which coefficient `index` of the mask equals
    /// `w / scale`.
    pub fn line_by_coordinate(&self, index: i64, scale: &Rational) -> Result<AffineLine> {
        if self.basis.len() != 1 {
            return Err(Error::NotOneDimensional(self.basis.len()));
        }
        let v = poly(&self.basis[0]);
        let vi = v.coeff(index);
        if vi.is_zero() || scale.is_zero() {
            return Err(Error::InvalidWindow(format!(
                "coefficient {index} does not vary along the family"
            )));
        }
        let p = poly(&self.particular);
        let base = &p - &v.scale(&(p.coeff(index) / &vi));
        let direction = v.scale(&(Rational::one() / (&vi * scale)));
        Ok(AffineLine {
            arity: self.problem.arity,
            base,
            direction,
        })
    }

    /// The solver's own chart `particular + t basis_0`.
    pub fn line(&self) -> Result<AffineLine> {
        if self.basis.len() != 1 {
            return Err(Error::NotOneDimensional(self.basis.len()));
        }
        Ok(AffineLine {
            arity: self.problem.arity,
            base: poly(&self.particular),
            direction: poly(&self.basis[0]),
        })
    }
}

fn poly(m: &Mask) -> LaurentPoly {
    LaurentPoly::new(m.first_index(), m.coeffs().to_vec())
}

/// Masks `base + t direction`, coefficientwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLine {
    pub arity: u32,
    pub base: LaurentPoly,
    pub direction: LaurentPoly,
}

impl AffineLine {
    pub fn at(&self, t: &Rational) -> Result<Mask> {
        let p = &self.base + &self.direction.scale(t);
        Mask::new(self.arity, p.offset(), p.coeffs().to_vec())
    }

    /// `(offset, coefficients)` at a float parameter.
    pub fn at_f64(&self, t: f64) -> (i64, Vec<f64>) {
        let lo = self.base.offset().min(self.direction.offset());
        let hi = self
            .base
            .high_degree()
            .unwrap_or(lo)
            .max(self.direction.high_degree().unwrap_or(lo));
        let coeffs = (lo..=hi)
            .map(|k| crate::to_f64(&self.base.coeff(k)) + t * crate::to_f64(&self.direction.coeff(k)))
            .collect();
        (lo, coeffs)
    }
}
