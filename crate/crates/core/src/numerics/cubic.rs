use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// The three roots of a complex cubic, sorted by real part then imaginary
/// part, both descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub omega_alpha: C64,
    pub omega_beta: C64,
    pub omega_gamma: C64,
    /// Largest backward error `|p(r)| / Σ|c_k||r|^k` over the roots.
    pub residual: f64,
}

impl CubicRoots {
    pub fn as_array(&self) -> [C64; 3] {
        [self.omega_alpha, self.omega_beta, self.omega_gamma]
    }
}

/// Roots of `c3·z³ + c2·z² + c1·z + c0`.
///
/// One root comes from Cardano's formula with the cube-root branch chosen
/// to avoid cancellation, the other two from the deflated quadratic; all
/// three are then polished by Newton steps on the original cubic.
pub fn solve_cubic(c3: C64, c2: C64, c1: C64, c0: C64) -> Result<CubicRoots> {
    let coeffs = [c0, c1, c2, c3];
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite { name: "cubic coefficient" });
    }
    if c3 == C64::new(0.0, 0.0) {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;

    let first = if c == C64::new(0.0, 0.0) {
        C64::new(0.0, 0.0)
    } else {
        cardano_root(a, b, c)
    };
    let first = polish(&coeffs, first);
    // deflate: z² + (a + r)z + (b + r(a + r))
    let q1 = a + first;
    let q0 = b + first * q1;
    let (r2, r3) = quadratic_roots(q1, q0);
    let mut roots = [first, polish(&coeffs, r2), polish(&coeffs, r3)];
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    let residual = roots
        .iter()
        .map(|r| backward_error(&coeffs, *r))
        .fold(0.0, f64::max);
    Ok(CubicRoots {
        omega_alpha: roots[0],
        omega_beta: roots[1],
        omega_gamma: roots[2],
        residual,
    })
}

fn cardano_root(a: C64, b: C64, c: C64) -> C64 {
    // depressed cubic y³ + p y + q with z = y − a/3
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u3a = -q / 2.0 + disc;
    let u3b = -q / 2.0 - disc;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
    let y = if u3.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        let u = u3.cbrt();
        u - p / (3.0 * u)
    };
    y - shift
}

fn quadratic_roots(b: C64, c: C64) -> (C64, C64) {
    // z² + b z + c, stable form
    let d = (b * b - 4.0 * c).sqrt();
    let s = if (b.conj() * d).re >= 0.0 { -b - d } else { -b + d };
    if s.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let r1 = s / 2.0;
    let r2 = 2.0 * c / s;
    (r1, r2)
}

fn eval(coeffs: &[C64; 4], z: C64) -> (C64, C64) {
    let mut p = coeffs[3];
    let mut dp = C64::new(0.0, 0.0);
    for k in (0..3).rev() {
        dp = dp * z + p;
        p = p * z + coeffs[k];
    }
    (p, dp)
}

fn polish(coeffs: &[C64; 4], mut z: C64) -> C64 {
    let mut best = z;
    let mut best_err = backward_error(coeffs, z);
    for _ in 0..8 {
        let (p, dp) = eval(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        z -= p / dp;
        let err = backward_error(coeffs, z);
        if err < best_err {
            best = z;
            best_err = err;
        } else {
            break;
        }
    }
    best
}

fn backward_error(coeffs: &[C64; 4], z: C64) -> f64 {
    let (p, _) = eval(coeffs, z);
    let r = z.norm();
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * r.powi(k as i32))
        .sum();
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn factored_integer_roots() {
        // (z−1)(z−2)(z−3) = z³ − 6z² + 11z − 6
        let r = solve_cubic(c(1.0, 0.0), c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0)).unwrap();
        assert!((r.omega_alpha - 3.0).norm() < 1e-12);
        assert!((r.omega_beta - 2.0).norm() < 1e-12);
        assert!((r.omega_gamma - 1.0).norm() < 1e-12);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn cube_roots_of_minus_i() {
        let r = solve_cubic(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        for z in r.as_array() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z * z * z + C64::i()).norm() < 1e-12);
        }
    }

    #[test]
    fn triple_root() {
        let p = c(0.5, -0.25);
        // (z − p)³
        let r = solve_cubic(c(1.0, 0.0), -3.0 * p, 3.0 * p * p, -p * p * p).unwrap();
        for z in r.as_array() {
            assert!((z - p).norm() < 1e-5);
        }
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn zero_leading_coefficient() {
        assert!(matches!(
            solve_cubic(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::DegenerateLeadingCoefficient)
        ));
    }

    #[test]
    fn sorted_output() {
        let r = solve_cubic(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((r.omega_alpha - 1.0).norm() < 1e-14);
        assert!(r.omega_beta.norm() < 1e-14);
        assert!((r.omega_gamma + 1.0).norm() < 1e-14);
    }
}
