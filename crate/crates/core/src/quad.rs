//! Adaptive Gauss–Legendre quadrature.
//!
//! Each segment is integrated with an `n`-point Gauss–Legendre rule on the
//! whole interval and on both halves; the difference is the error estimate
//! and the halves are the accepted value. Segments are refined in order of
//! decreasing error until the global error meets the tolerance, or the
//! evaluation cap is hit, in which case an explicit error is returned.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

const RULE_POINTS: usize = 12;

/// Half-width of the core window used by [`integrate_positive`] in `t = ln u`.
pub const LOG_WINDOW: f64 = 30.0;
const LOG_LIMIT: f64 = 690.0;

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_evals: 1_000_000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// Outcome of an integral over `(0, ∞)` that may diverge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PositiveIntegral {
    Finite(Quadrature),
    Divergent,
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(RULE_POINTS))
}

fn gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let at = c + h * x;
        let v = f(at);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: "integrand".into(),
                at,
                value: v,
            });
        }
        sum += w * v;
    }
    Ok(sum * h)
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let m = 0.5 * (a + b);
    let whole = gl(f, a, b)?;
    let value = gl(f, a, m)? + gl(f, m, b)?;
    Ok(Segment {
        a,
        b,
        value,
        error: (whole - value).abs(),
    })
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    integrate_pieces(&f, a, b, 1, opts, "integral")
}

/// Integrates `f` over `[a, b]` after an initial uniform split into `pieces`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    pieces: usize,
    opts: QuadOptions,
    what: &str,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    let per_segment = 3 * RULE_POINTS;
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces * 4);
    let mut done: Vec<Segment> = Vec::new();
    let mut evals = 0;
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + width };
        heap.push(segment(f, lo, hi)?);
        evals += per_segment;
    }
    let totals = |heap: &BinaryHeap<Segment>, done: &[Segment]| {
        heap.iter()
            .chain(done.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };
    let (mut value, mut error) = totals(&heap, &done);
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= tol || heap.is_empty() {
            // re-sum to shed drift from the running totals
            let (value, error) = totals(&heap, &done);
            return Ok(Quadrature { value, error, evals });
        }
        if evals + 2 * per_segment > opts.max_evals {
            return Err(Error::NonConvergence {
                what: what.to_string(),
                value,
                error,
                evals,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; keep its estimate.
            done.push(worst);
            continue;
        }
        let left = segment(f, worst.a, mid)?;
        let right = segment(f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if error < 0.0 {
            (value, error) = totals(&heap, &done);
            error += left.error + right.error;
            value += left.value + right.value;
        }
        heap.push(left);
        heap.push(right);
        evals += 2 * per_segment;
    }
}

/// Integrates `g` over `(0, ∞)` via `u = e^t`.
///
/// The core window `t ∈ [-30, 30]` is integrated first; further windows of
/// the same width are appended in each direction until their contribution
/// is negligible. A tail whose windows stop shrinking is reported as
/// [`PositiveIntegral::Divergent`].
pub fn integrate_positive_ext<G: Fn(f64) -> f64>(g: G, opts: QuadOptions) -> Result<PositiveIntegral> {
    let h = |t: f64| {
        let u = t.exp();
        let v = g(u);
        if v == 0.0 {
            0.0
        } else {
            v * u
        }
    };
    let core = integrate_pieces(&h, -LOG_WINDOW, LOG_WINDOW, 60, opts, "core window")?;
    let mut value = core.value;
    let mut error = core.error;
    let mut evals = core.evals;
    for dir in [1.0, -1.0] {
        let mut prev = f64::INFINITY;
        let mut k = 1.0;
        loop {
            let lo = dir * LOG_WINDOW * k;
            let hi = dir * LOG_WINDOW * (k + 1.0);
            let (a, b) = if dir > 0.0 { (lo, hi) } else { (hi, lo) };
            // tails only need accuracy relative to the running total
            let tail_opts = QuadOptions {
                abs_tol: opts.abs_tol.max(1e-3 * opts.rel_tol * value.abs()),
                ..opts
            };
            let part = match integrate_pieces(&h, a, b, 30, tail_opts, "tail window") {
                Ok(p) => p,
                Err(Error::NonFinite { .. }) => return Ok(PositiveIntegral::Divergent),
                Err(e) => return Err(e),
            };
            evals += part.evals;
            value += part.value;
            error += part.error;
            let size = part.value.abs();
            if size <= 1e-3 * opts.rel_tol * value.abs() || (size == 0.0 && value == 0.0) {
                break;
            }
            if size >= prev {
                return Ok(PositiveIntegral::Divergent);
            }
            prev = size;
            k += 1.0;
            if LOG_WINDOW * (k + 1.0) > LOG_LIMIT {
                return Err(Error::Indeterminate(
                    "integral over (0, ∞) has a slowly decaying tail".into(),
                ));
            }
        }
    }
    Ok(PositiveIntegral::Finite(Quadrature { value, error, evals }))
}

/// As [`integrate_positive_ext`], treating divergence as a domain error.
pub fn integrate_positive<G: Fn(f64) -> f64>(g: G, opts: QuadOptions) -> Result<Quadrature> {
    match integrate_positive_ext(g, opts)? {
        PositiveIntegral::Finite(q) => Ok(q),
        PositiveIntegral::Divergent => Err(Error::Domain("integral over (0, ∞) diverges".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 22 monomial
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((m - 2.0 / 23.0).abs() < 1e-14);
        let (x64, w64) = gauss_legendre(64);
        let m: f64 = x64.iter().zip(&w64).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn finite_interval() {
        let q = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, QuadOptions::default()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
        // integrable endpoint singularity
        let q = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn positive_half_line() {
        let q = integrate_positive(|u: f64| (-u).exp(), QuadOptions::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
        // heavy algebraic tail: ∫ 1/(1+u)^2 = 1
        let q = integrate_positive(|u: f64| (1.0 + u).powi(-2), QuadOptions::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
        // u^(-3/4) near zero, e^(-u) tail: Γ(1/4)
        let q = integrate_positive(|u: f64| u.powf(-0.75) * (-u).exp(), QuadOptions::default()).unwrap();
        assert!((q.value - 3.625_609_908_221_908).abs() < 1e-8);
    }

    #[test]
    fn divergence_is_reported() {
        let r = integrate_positive_ext(|u: f64| u.powf(-0.5), QuadOptions::default()).unwrap();
        assert_eq!(r, PositiveIntegral::Divergent);
        let r = integrate_positive_ext(|u: f64| 1.0 / (1.0 + u), QuadOptions::default()).unwrap();
        assert_eq!(r, PositiveIntegral::Divergent);
    }

    #[test]
    fn evaluation_cap_is_explicit() {
        let opts = QuadOptions {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_evals: 200,
        };
        let r = integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
