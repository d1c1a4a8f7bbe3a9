//! Adaptive Gauss–Kronrod quadrature over the real line.
//!
//! Emission densities are split as `|m|² + |f|² + 2Re(m f̄ e^{-ixt})`. The
//! first part is smooth and decays like `1/x²`; it is integrated over the
//! whole line after the substitution `x = c + s·tanθ`. The cross term
//! oscillates with period `2π/t`; it is integrated over a finite window cut
//! into pieces no longer than one period, and the two tails are closed by
//! integration by parts.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::kernel::SpectralKernel;
use super::residue::Horizon;
use crate::error::{Error, Result};

/// Settings for one frequency integral. Zero `half_width` or `max_time`
/// select automatic values derived from the integrand's poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub center: f64,
    pub half_width: f64,
    pub max_time: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub node_budget: usize,
    /// Repeat the oscillatory part on a doubled window with halved pieces
    /// and fail if the two results disagree.
    pub verify: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            center: 0.0,
            half_width: 0.0,
            max_time: 0.0,
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            node_budget: 2_000_000,
            verify: false,
        }
    }
}

impl QuadratureSpec {
    /// Default settings for two-photon integrals.
    pub fn two_dimensional() -> [Self; 2] {
        let outer = Self {
            rel_tol: 1e-4,
            abs_tol: 1e-8,
            ..Self::default()
        };
        let inner = Self {
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            ..Self::default()
        };
        [outer, inner]
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl Estimate {
    fn zero() -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        }
    }

    fn add(self, other: Estimate) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive GK15 over `[breaks[0], breaks[last]]`, starting from the
/// given partition.
fn adaptive(
    f: &mut impl FnMut(f64) -> f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (v, e) = gk15(f, a, b);
        evaluations += 15;
        value += v;
        error += e;
        heap.push(Piece {
            a,
            b,
            value: v,
            error: e,
        });
    }
    loop {
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || !value.is_finite() {
            break;
        }
        if evaluations >= budget {
            return Err(Error::NonConvergent {
                estimate: value,
                error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted in floating point; keep it as is
            heap.push(Piece {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    if !value.is_finite() {
        return Err(Error::NonConvergent {
            estimate: value,
            error,
            evaluations,
        });
    }
    // re-sum to shed accumulated update error
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

/// Integral over the whole real line of a function decaying at least like
/// `1/x²`. `breakpoints` mark features the partition should start from;
/// `center` and `scale` set the substitution `x = center + scale·tanθ`.
pub fn integrate_line(
    f: impl Fn(f64) -> f64,
    center: f64,
    scale: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<Estimate> {
    let s = if scale > 0.0 { scale } else { 1.0 };
    let mut thetas: Vec<f64> = breakpoints
        .iter()
        .filter(|x| x.is_finite())
        .map(|x| ((x - center) / s).atan())
        .collect();
    thetas.push(-FRAC_PI_2);
    thetas.push(FRAC_PI_2);
    thetas.push(0.0);
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut g = |theta: f64| {
        let c = theta.cos();
        if c <= 0.0 {
            return 0.0;
        }
        let x = center + s * theta.tan();
        f(x) * s / (c * c)
    };
    adaptive(&mut g, &thetas, rel_tol, abs_tol, budget)
}

/// Integral over the real line of a nonnegative function with peaks at the
/// hinted `(location, width)` pairs.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    hints: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let (center, scale) = line_frame(hints, spec);
    let breaks = hint_breakpoints(hints);
    integrate_line(
        f,
        center,
        scale,
        &breaks,
        spec.rel_tol,
        spec.abs_tol,
        spec.node_budget,
    )
}

fn line_frame(hints: &[(f64, f64)], spec: &QuadratureSpec) -> (f64, f64) {
    if spec.half_width > 0.0 {
        return (spec.center, spec.half_width);
    }
    if hints.is_empty() {
        return (spec.center, 1.0);
    }
    let lo = hints.iter().map(|h| h.0).fold(f64::INFINITY, f64::min);
    let hi = hints.iter().map(|h| h.0).fold(f64::NEG_INFINITY, f64::max);
    let widest = hints.iter().map(|h| h.1).fold(0.0, f64::max);
    let center = 0.5 * (lo + hi);
    let scale = (0.5 * (hi - lo)).max(widest).max(1e-3);
    (center, scale)
}

fn hint_breakpoints(hints: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::with_capacity(hints.len() * 3);
    for &(x, w) in hints {
        out.push(x);
        if w > 0.0 {
            out.push(x - w);
            out.push(x + w);
        }
    }
    out
}

/// Window `[lo, hi]` covering every hinted peak by 50 widths (widths floored
/// at the unit rate) and by at least 100/t.
fn oscillation_window(hints: &[(f64, f64)], spec: &QuadratureSpec, t: f64) -> (f64, f64) {
    let reach = 100.0 / t;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(x, w) in hints {
        let span = (50.0 * w.max(1.0)).max(reach);
        lo = lo.min(x - span);
        hi = hi.max(x + span);
    }
    if hints.is_empty() {
        lo = spec.center - reach.max(50.0);
        hi = spec.center + reach.max(50.0);
    }
    if spec.half_width > 0.0 {
        lo = lo.min(spec.center - spec.half_width);
        hi = hi.max(spec.center + spec.half_width);
    }
    (lo, hi)
}

fn periodic_breaks(lo: f64, hi: f64, piece: f64, hints: &[(f64, f64)]) -> Vec<f64> {
    let n = ((hi - lo) / piece).ceil().max(1.0) as usize;
    let mut breaks: Vec<f64> = (0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect();
    breaks.extend(
        hint_breakpoints(hints)
            .into_iter()
            .filter(|x| *x > lo && *x < hi),
    );
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// ∫ Q(x)e^{-ixt} over `[edge, ∞)` (`right`) or `(−∞, edge]`, three terms of
/// the asymptotic expansion by parts. Returns the value and the size of the
/// first omitted term.
fn oscillatory_tail(q: &impl Fn(f64) -> C64, edge: f64, t: f64, right: bool) -> (C64, f64) {
    let h = 1e-4 * edge.abs().max(1.0);
    let q0 = q(edge);
    let qp = (q(edge + h) - q(edge - h)) / (2.0 * h);
    let qpp = (q(edge + h) - 2.0 * q0 + q(edge - h)) / (h * h);
    let it = C64::new(0.0, t);
    let phase = (-C64::i() * edge * t).exp();
    let sum = phase * (q0 / it + qp / (it * it) + qpp / (it * it * it));
    let omitted = qpp.norm() / t.powi(3) * (qp.norm() / (q0.norm() * t)).min(1.0);
    if right {
        (sum, omitted)
    } else {
        (-sum, omitted)
    }
}

/// Integral over the real line of an emission density.
pub fn integrate_frequency(kernel: &SpectralKernel, spec: &QuadratureSpec) -> Result<Estimate> {
    if kernel.prefactor == 0.0 {
        return Ok(Estimate::zero());
    }
    if kernel.horizon == Horizon::At(0.0) {
        return Ok(Estimate::zero());
    }
    kernel.check()?;
    let hints = kernel.hints();
    let smooth = integrate(
        |x| {
            let (m, f) = kernel.tones(x);
            kernel.prefactor * (m.norm_sqr() + f.norm_sqr())
        },
        &hints,
        spec,
    )?;
    let Horizon::At(t) = kernel.horizon else {
        return Ok(smooth);
    };
    let osc = oscillatory_part(kernel, &hints, spec, t, smooth.value, 1.0)?;
    let total = smooth.add(osc);
    if spec.verify {
        let check = oscillatory_part(kernel, &hints, spec, t, smooth.value, 2.0)?;
        let tight = integrate(
            |x| {
                let (m, f) = kernel.tones(x);
                kernel.prefactor * (m.norm_sqr() + f.norm_sqr())
            },
            &hints,
            &spec.with_rel_tol(spec.rel_tol * 0.1),
        )?;
        let other = tight.value + check.value;
        let limit = 10.0 * spec.abs_tol.max(spec.rel_tol * total.value.abs());
        if (other - total.value).abs() > limit {
            return Err(Error::NonConvergent {
                estimate: total.value,
                error: (other - total.value).abs(),
                evaluations: total.evaluations + check.evaluations + tight.evaluations,
            });
        }
    }
    Ok(total)
}

fn oscillatory_part(
    kernel: &SpectralKernel,
    hints: &[(f64, f64)],
    spec: &QuadratureSpec,
    t: f64,
    scale: f64,
    refine: f64,
) -> Result<Estimate> {
    let (lo0, hi0) = oscillation_window(hints, spec, t);
    let mid = 0.5 * (lo0 + hi0);
    let (lo, hi) = (
        mid - refine * (mid - lo0),
        mid + refine * (hi0 - mid),
    );
    let resolve = if spec.max_time > t { spec.max_time } else { t };
    let piece = 2.0 * PI / resolve / refine;
    let breaks = periodic_breaks(lo, hi, piece, hints);
    let q = |x: f64| {
        let (m, f) = kernel.tones(x);
        2.0 * kernel.prefactor * m * f.conj()
    };
    let mut g = |x: f64| (q(x) * (-C64::i() * x * t).exp()).re;
    let target = spec.abs_tol.max(spec.rel_tol * scale.abs());
    let inner = adaptive(&mut g, &breaks, 0.0, target, spec.node_budget)?;
    let (right, er) = oscillatory_tail(&q, hi, t, true);
    let (left, el) = oscillatory_tail(&q, lo, t, false);
    Ok(Estimate {
        value: inner.value + right.re + left.re,
        error: inner.error + er + el,
        evaluations: inner.evaluations + 8,
    })
}

/// Iterated integral `∫dx₁ ∫dx₂ density(x₁, x₂)` where `inner(x₁)` returns
/// the kernel in the second variable. `outer_hints` locate the peaks of the
/// marginal in `x₁`; `time` is the evaluation time, which sets the outer
/// partition when the marginal oscillates.
pub fn integrate_frequency_2d(
    outer_hints: &[(f64, f64)],
    time: Option<f64>,
    inner: impl Fn(f64) -> Result<SpectralKernel>,
    specs: &[QuadratureSpec; 2],
) -> Result<Estimate> {
    let failure = std::cell::RefCell::new(None);
    let evaluations = std::cell::Cell::new(0usize);
    let marginal = |x1: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        let inner_value = inner(x1).and_then(|k| match k.exact_integral() {
            Some(value) => Ok(Estimate {
                value,
                error: 0.0,
                evaluations: 1,
            }),
            None => integrate_frequency(&k, &specs[1]),
        });
        match inner_value {
            Ok(e) => {
                evaluations.set(evaluations.get() + e.evaluations);
                e.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let outer = &specs[0];
    let (center, scale) = line_frame(outer_hints, outer);
    let mut breaks = hint_breakpoints(outer_hints);
    if let Some(t) = time.filter(|t| *t > 0.0) {
        let (lo, hi) = oscillation_window(outer_hints, outer, t);
        breaks.extend(periodic_breaks(lo, hi, 2.0 * PI / t, &[]));
    }
    let est = integrate_line(
        marginal,
        center,
        scale,
        &breaks,
        outer.rel_tol,
        outer.abs_tol,
        outer.node_budget,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let est = est?;
    Ok(Estimate {
        evaluations: est.evaluations + evaluations.get(),
        ..est
    })
}
