//! Sums of residues of `N(z)·e^{-izt} / Π(z − p_j)`.
//!
//! Every closed-form amplitude in the crate has this shape. When poles come
//! within the degeneracy tolerance of each other they are grouped and the
//! group is evaluated as a divided difference from a Taylor expansion about
//! the group centre, which is exact in the confluent limit and continuous
//! across it.

use num_complex::Complex64 as C64;

use crate::model::DressedPair;

/// Pole separation below which residues are merged.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Most poles any kernel in the crate carries, spectators included.
pub const MAX_POLES: usize = 6;

/// Taylor terms kept beyond the minimum a cluster needs.
const EXTRA_TERMS: usize = 6;
const JET_LEN: usize = MAX_POLES + EXTRA_TERMS;

/// Polynomial of degree at most two with complex coefficients, lowest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly {
    pub coeffs: [C64; 3],
}

impl Poly {
    pub fn constant(c0: C64) -> Self {
        Self {
            coeffs: [c0, C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    pub fn linear(c0: C64, c1: C64) -> Self {
        Self {
            coeffs: [c0, c1, C64::new(0.0, 0.0)],
        }
    }

    pub fn quadratic(c0: C64, c1: C64, c2: C64) -> Self {
        Self {
            coeffs: [c0, c1, c2],
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.coeffs[2] * z + self.coeffs[1]) * z + self.coeffs[0]
    }

    pub fn shifted(&self, delta: C64) -> Self {
        let mut p = *self;
        p.coeffs[0] += delta;
        p
    }

    /// Coefficients of the expansion in powers of `(z − c)`.
    fn taylor(&self, c: C64) -> [C64; 3] {
        let [_, a1, a2] = self.coeffs;
        [self.eval(c), a1 + 2.0 * a2 * c, a2]
    }
}

/// Evaluation time for an amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    At(f64),
    /// The `t → ∞` limit.
    Steady,
}

impl Horizon {
    pub fn time(&self) -> Option<f64> {
        match self {
            Horizon::At(t) => Some(*t),
            Horizon::Steady => None,
        }
    }
}

/// Outcome of [`degenerate_pole_guard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleGuard {
    Distinct,
    /// The pair is evaluated through its confluent limit.
    Merged,
}

/// Reports whether the two branches of `pair` are close enough to be merged.
pub fn degenerate_pole_guard(pair: &DressedPair, tol: f64) -> PoleGuard {
    if (pair.plus - pair.minus).norm() < tol {
        PoleGuard::Merged
    } else {
        PoleGuard::Distinct
    }
}

/// Σ over all poles of `Res N(z)e^{-izt}/Π(z − p_j)`.
pub fn residue_sum(numer: &Poly, poles: &[C64], t: f64, tol: f64) -> C64 {
    residue_sum_with(numer, poles, &[], t, 0.0, tol)
}

/// Residues of `N(z)·e^{-i(z − shift)t} / (Π(z − p_j)·Π(z − s_k))` summed
/// over the poles `p_j` only. The spectators `s_k` appear in the denominator
/// but their residues are left out; they must not collide with any `p_j`.
pub fn residue_sum_with(
    numer: &Poly,
    poles: &[C64],
    spectators: &[C64],
    t: f64,
    shift: f64,
    tol: f64,
) -> C64 {
    let n = poles.len();
    assert!(
        n + spectators.len() <= MAX_POLES,
        "too many poles in residue kernel"
    );
    let mut cluster_of = [usize::MAX; MAX_POLES];
    let mut clusters = 0;
    for i in 0..n {
        if cluster_of[i] != usize::MAX {
            continue;
        }
        cluster_of[i] = clusters;
        // grow the cluster transitively
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..n {
                if cluster_of[j] != usize::MAX {
                    continue;
                }
                let near = (0..n)
                    .any(|k| cluster_of[k] == clusters && (poles[k] - poles[j]).norm() < tol);
                if near {
                    cluster_of[j] = clusters;
                    changed = true;
                }
            }
        }
        clusters += 1;
    }

    let mut total = C64::new(0.0, 0.0);
    let mut members = [C64::new(0.0, 0.0); MAX_POLES];
    let mut others = [C64::new(0.0, 0.0); MAX_POLES];
    for c in 0..clusters {
        let mut m = 0;
        let mut o = 0;
        for i in 0..n {
            if cluster_of[i] == c {
                members[m] = poles[i];
                m += 1;
            } else {
                others[o] = poles[i];
                o += 1;
            }
        }
        for s in spectators {
            others[o] = *s;
            o += 1;
        }
        total += if m == 1 {
            simple_residue(numer, members[0], &others[..o], t, shift)
        } else {
            cluster_residue(numer, &members[..m], &others[..o], t, shift)
        };
    }
    total
}

fn simple_residue(numer: &Poly, p: C64, others: &[C64], t: f64, shift: f64) -> C64 {
    let mut den = C64::new(1.0, 0.0);
    for q in others {
        den *= p - q;
    }
    numer.eval(p) * phase(p, t, shift) / den
}

fn phase(z: C64, t: f64, shift: f64) -> C64 {
    (-C64::i() * (z - shift) * t).exp()
}

/// Divided difference of `g(z) = N(z)e^{-i(z−shift)t}/Π(z − o)` over the
/// cluster members, from the Taylor series of `g` about their mean.
fn cluster_residue(numer: &Poly, members: &[C64], others: &[C64], t: f64, shift: f64) -> C64 {
    let m = members.len();
    let len = m + EXTRA_TERMS;
    let c = members.iter().sum::<C64>() / m as f64;

    // e^{-i(c + ε − shift)t}
    let mut g = [C64::new(0.0, 0.0); JET_LEN];
    let step = -C64::i() * t;
    g[0] = phase(c, t, shift);
    for k in 1..len {
        g[k] = g[k - 1] * step / k as f64;
    }

    let nt = numer.taylor(c);
    jet_mul(&mut g, &nt, len);

    for o in others {
        // 1/(c − o + ε) = Σ (−1)^k ε^k / (c − o)^{k+1}
        let inv = 1.0 / (c - o);
        let mut series = [C64::new(0.0, 0.0); JET_LEN];
        series[0] = inv;
        for k in 1..len {
            series[k] = -series[k - 1] * inv;
        }
        jet_mul(&mut g, &series[..len], len);
    }

    // complete homogeneous symmetric polynomials of the offsets
    let mut h = [C64::new(0.0, 0.0); EXTRA_TERMS + 1];
    h[0] = C64::new(1.0, 0.0);
    for p in members {
        let d = p - c;
        for j in 1..=EXTRA_TERMS {
            h[j] = h[j] + d * h[j - 1];
        }
    }

    (0..=EXTRA_TERMS).map(|j| g[m - 1 + j] * h[j]).sum()
}

fn jet_mul(a: &mut [C64; JET_LEN], b: &[C64], len: usize) {
    let mut out = [C64::new(0.0, 0.0); JET_LEN];
    for i in 0..len {
        if a[i] == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += a[i] * bj;
        }
    }
    *a = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_time_partial_fraction_completeness() {
        // Σ Res 1/Π(z−p) = 0 for two or more poles
        let poles = [c(1.0, -0.5), c(-2.0, -1.0), c(0.3, -0.1)];
        let s = residue_sum(&Poly::constant(c(1.0, 0.0)), &poles, 0.0, 1e-8);
        assert!(s.norm() < 1e-14);
        // Σ Res z/((z−a)(z−b)) = 1
        let s = residue_sum(
            &Poly::linear(c(0.0, 0.0), c(1.0, 0.0)),
            &poles[..2],
            0.0,
            1e-8,
        );
        assert!((s - 1.0).norm() < 1e-14);
    }

    #[test]
    fn double_pole_limit() {
        // Res of e^{-izt}/(z−p)² = −it e^{-ipt}
        let p = c(0.2, -0.7);
        let t = 1.3;
        let exact = -C64::i() * t * (-C64::i() * p * t).exp();
        let merged = residue_sum(&Poly::constant(c(1.0, 0.0)), &[p, p], t, 1e-8);
        assert!((merged - exact).norm() < 1e-14);
        // slightly split poles agree with the limit
        let eps = 1e-6;
        let split = residue_sum(
            &Poly::constant(c(1.0, 0.0)),
            &[p + eps, p - eps],
            t,
            1e-8,
        );
        assert!((split - exact).norm() < 1e-9);
        let forced = residue_sum(
            &Poly::constant(c(1.0, 0.0)),
            &[p + eps, p - eps],
            t,
            1e-5,
        );
        assert!((split - forced).norm() < 1e-9);
    }

    #[test]
    fn triple_pole_with_spectator() {
        // Res at p of e^{-izt}/((z−p)³(z−q)) = ½ d²/dz² [e^{-izt}/(z−q)] at p
        let p = c(0.0, -0.5);
        let q = c(1.0, -1.0);
        let t = 0.7;
        let f = |z: C64| (-C64::i() * z * t).exp() / (z - q);
        let h = 1e-3;
        let second = (f(p + h) - 2.0 * f(p) + f(p - h)) / (h * h);
        let expected = 0.5 * second;
        let got = residue_sum_with(
            &Poly::constant(c(1.0, 0.0)),
            &[p, p, p],
            &[q],
            t,
            0.0,
            1e-8,
        );
        assert!((got - expected).norm() < 1e-6);
    }

    #[test]
    fn shift_factors_out_phase() {
        let poles = [c(1.0, -0.5), c(-2.0, -1.0)];
        let n = Poly::linear(c(0.5, 0.1), c(1.0, 0.0));
        let t = 2.0;
        let x = 0.75;
        let a = residue_sum_with(&n, &poles, &[], t, x, 1e-8);
        let b = residue_sum(&n, &poles, t, 1e-8) * (C64::i() * x * t).exp();
        assert!((a - b).norm() < 1e-13);
    }
}
