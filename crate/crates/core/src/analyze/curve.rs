use serde::Serialize;

use crate::exactalg::ceil_div;
use crate::scheme::Mask;
use crate::to_f64;

/// How control data is continued beyond its ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Periodic data, e.g. a closed polygon.
    Closed,
    /// Zero outside the given points; every level keeps its full support.
    Open,
}

/// Points attached to parameters `t`; `t` strictly increasing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub parameters: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

/// Parameter of index `n` at level `j`:
/// `(n - tau (m^j - 1)/(m - 1)) / m^j`.
fn parameter(n: i64, j: u32, m: u32, tau: f64) -> f64 {
    let mj = (m as f64).powi(j as i32);
    (n as f64 - tau * (mj - 1.0) / (m as f64 - 1.0)) / mj
}

/// `steps` rounds of `c_n <- sum_k a_{n - mk} c_k` on scalar data, returning
/// `(first index, values)` at the final level.
pub fn subdivide_sequence(mask: &Mask, data: &[f64], steps: u32, boundary: Boundary) -> (i64, Vec<f64>) {
    let m = mask.arity() as i64;
    let (kl, kr) = (mask.first_index(), mask.last_index());
    let a: Vec<f64> = mask.coeffs().iter().map(to_f64).collect();
    let mut lo = 0i64;
    let mut c = data.to_vec();
    for _ in 0..steps {
        let len = c.len() as i64;
        let (nlo, nhi) = match boundary {
            Boundary::Closed => (0, m * len - 1),
            Boundary::Open => (m * lo + kl, m * (lo + len - 1) + kr),
        };
        let next = (nlo..=nhi)
            .map(|n| {
                // a_{n - mk} nonzero for n - kr <= mk <= n - kl.
                (ceil_div(n - kr, m)..=(n - kl).div_euclid(m))
                    .map(|k| {
                        let ck = match boundary {
                            Boundary::Closed => c[k.rem_euclid(len) as usize],
                            Boundary::Open => {
                                let i = k - lo;
                                if i < 0 || i >= len {
                                    return 0.0;
                                }
                                c[i as usize]
                            }
                        };
                        a[(n - m * k - kl) as usize] * ck
                    })
                    .sum()
            })
            .collect();
        c = next;
        lo = nlo;
    }
    (lo, c)
}

/// Curve subdivision of `control` (rows are points), each coordinate
/// refined independently; parameters follow the shift of the mask so that
/// control point `i` sits at `t = i`.
pub fn subdivide_curve(mask: &Mask, control: &[Vec<f64>], steps: u32, boundary: Boundary) -> Polyline {
    let dim = control.first().map_or(0, Vec::len);
    let tau = to_f64(&mask.tau());
    let coords: Vec<(i64, Vec<f64>)> = (0..dim)
        .map(|d| {
            let col: Vec<f64> = control.iter().map(|p| p[d]).collect();
            subdivide_sequence(mask, &col, steps, boundary)
        })
        .collect();
    let (lo, len) = coords.first().map_or((0, 0), |(lo, v)| (*lo, v.len()));
    Polyline {
        parameters: (0..len as i64)
            .map(|i| parameter(lo + i, steps, mask.arity(), tau))
            .collect(),
        points: (0..len).map(|i| coords.iter().map(|(_, v)| v[i]).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactalg::rat;

    #[test]
    fn one_step_on_delta_is_the_mask() {
        let a = catalog::cantor_mask();
        let (lo, v) = subdivide_sequence(&a, &[1.0], 1, Boundary::Open);
        assert_eq!(lo, -1);
        assert_eq!(v, vec![0.5, 1.0, 1.0, 0.5]);
    }

    #[test]
    fn square_is_interpolated() {
        let square = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        for a in [catalog::ternary_mask(), catalog::quinary_mask(&rat(-7, 5))] {
            let p = subdivide_curve(&a, &square, 4, Boundary::Closed);
            for (i, c) in square.iter().enumerate() {
                let (j, _) = p
                    .parameters
                    .iter()
                    .enumerate()
                    .min_by(|x, y| (x.1 - i as f64).abs().total_cmp(&(y.1 - i as f64).abs()))
                    .unwrap();
                let d = ((p.points[j][0] - c[0]).powi(2) + (p.points[j][1] - c[1]).powi(2)).sqrt();
                assert!(d < 1e-3, "point {i}: distance {d}");
            }
        }
    }

    #[test]
    fn parameters_are_evenly_spaced() {
        let a = catalog::ternary_mask();
        let p = subdivide_curve(&a, &[vec![0.0], vec![1.0]], 3, Boundary::Open);
        for w in p.parameters.windows(2) {
            assert!((w[1] - w[0] - 1.0 / 27.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_points_tend_to_their_values() {
        // The limit is phi(t - 1); the nearest level-j parameter is within
        // m^{-j} of the integers.
        let a = catalog::quinary_mask(&rat(-7, 5));
        let err = |steps: u32| {
            let p = subdivide_curve(&a, &[vec![0.0], vec![1.0]], steps, Boundary::Open);
            let near = |t: f64| {
                let j = p
                    .parameters
                    .iter()
                    .enumerate()
                    .min_by(|x, y| (x.1 - t).abs().total_cmp(&(y.1 - t).abs()))
                    .unwrap()
                    .0;
                p.points[j][0]
            };
            near(0.0).abs().max((near(1.0) - 1.0).abs())
        };
        let (e3, e5) = (err(3), err(5));
        assert!(e5 < 1e-2 && e5 < e3, "{e3} {e5}");
    }

    #[test]
    fn constants_are_preserved() {
        let a = catalog::ternary_mask();
        let (_, v) = subdivide_sequence(&a, &[2.5; 6], 3, Boundary::Closed);
        assert_eq!(v.len(), 6 * 27);
        assert!(v.iter().all(|x| (x - 2.5).abs() < 1e-12));
    }
}
