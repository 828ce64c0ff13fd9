//! Grid-based stochastic-order verdicts.
//!
//! `X ≤_Lt Y` means `φ_X(s) ≥ φ_Y(s)` for all `s ≥ 0`; for nonnegative
//! variables this orders `E[g(X)]` and `E[g(Y)]` for every completely
//! monotone `g`, so `X ≤_Lt Y` makes `Y` the better channel for DPSK/MPSK
//! SER. The Shannon order compares `∫ log(1 + ρ/u) μ(du)`, which for a GGC
//! is exactly the Laplace exponent. Verdicts hold on the named grid only.

use crate::channels::{ChannelModel, Membership};
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::mc::average_model;
use crate::measures::{geometric_grid, ThorinMeasure};
use crate::metrics::{avg_ser_dpsk, avg_ser_mc, avg_ser_mpsk, ergodic_capacity, Estimate, McOptions, Method, Modulation};
use crate::quad::{integrate_positive, QuadOptions};
use serde::Serialize;

/// Relative tolerance for deterministic comparisons.
pub const ORDER_TOL: f64 = 1e-9;
/// Standard-error multiple needed to call a Monte-Carlo violation.
pub const SE_RULE: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for Grid {
    /// 200 geometric points in `[1e-3, 1e3]`.
    fn default() -> Self {
        Grid {
            lo: 1e-3,
            hi: 1e3,
            points: 200,
        }
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        geometric_grid(self.lo, self.hi, self.points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderResult {
    HoldsOnGrid,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub point: f64,
    pub left: f64,
    pub right: f64,
    /// Size of the violation, beyond the tolerance.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub result: OrderResult,
    pub counterexample: Option<Counterexample>,
    pub grid: Grid,
}

impl OrderVerdict {
    pub fn holds(&self) -> bool {
        self.result == OrderResult::HoldsOnGrid
    }
}

/// Collects "`left ≥ right`" checks and keeps the worst violation.
struct Judge {
    grid: Grid,
    worst: Option<(f64, Counterexample)>,
}

impl Judge {
    fn new(grid: Grid) -> Self {
        Judge { grid, worst: None }
    }

    /// Requires `left ≥ right` up to the deterministic tolerance and, for
    /// Monte-Carlo values, the standard-error rule.
    fn expect_ge(&mut self, point: f64, left: &Estimate, right: &Estimate) {
        let tol = ORDER_TOL * left.value.abs().max(right.value.abs())
            + SE_RULE * (left.stderr.powi(2) + right.stderr.powi(2)).sqrt();
        let excess = right.value - left.value - tol;
        if excess > 0.0 {
            let scale = left.value.abs().max(right.value.abs()).max(f64::MIN_POSITIVE);
            let severity = excess / scale;
            if self.worst.as_ref().is_none_or(|(s, _)| severity > *s) {
                self.worst = Some((
                    severity,
                    Counterexample {
                        point,
                        left: left.value,
                        right: right.value,
                        margin: excess,
                    },
                ));
            }
        }
    }

    fn verdict(self) -> OrderVerdict {
        OrderVerdict {
            result: if self.worst.is_some() {
                OrderResult::Fails
            } else {
                OrderResult::HoldsOnGrid
            },
            counterexample: self.worst.map(|(_, c)| c),
            grid: self.grid,
        }
    }
}

/// `E[e^(-sX)]` by closed form, quadrature, or tilted sampling.
pub fn lt_estimate(channel: &ChannelModel, s: f64, mc: &McOptions, point: u32) -> Result<Estimate> {
    if let Some(v) = channel.lt_closed(s) {
        return Ok(Estimate::exact(v, Method::Closed));
    }
    if let Some(v) = channel.laplace(s)? {
        return Ok(Estimate::exact(v, Method::Quadrature));
    }
    Ok(average_model(channel, mc.seed, point, mc.samples, Some(s), |x, _| (-s * x).exp()))
}

/// Does `ch1 ≤_Lt ch2` (i.e. `φ₁ ≥ φ₂`) hold on the grid?
pub fn lt_order_check(ch1: &ChannelModel, ch2: &ChannelModel, grid: Grid, mc: &McOptions) -> Result<OrderVerdict> {
    let mut judge = Judge::new(grid);
    for (i, s) in grid.values().into_iter().enumerate() {
        let a = lt_estimate(ch1, s, mc, 2 * i as u32)?;
        let b = lt_estimate(ch2, s, mc, 2 * i as u32 + 1)?;
        judge.expect_ge(s, &a, &b);
    }
    Ok(judge.verdict())
}

/// Does `μ₁ ≤_S μ₂` (`∫ log(1+ρ/u) μ₁ ≤ ∫ log(1+ρ/u) μ₂`) hold on the grid?
pub fn shannon_order_check(mu1: &ThorinMeasure, mu2: &ThorinMeasure, grid: Grid) -> Result<OrderVerdict> {
    let mut judge = Judge::new(grid);
    for rho in grid.values() {
        let a = Estimate::exact(mu1.laplace_exponent(rho)?, Method::Quadrature);
        let b = Estimate::exact(mu2.laplace_exponent(rho)?, Method::Quadrature);
        if !(a.value.is_finite() && b.value.is_finite()) {
            return Err(Error::NonFinite {
                what: "Shannon transform".into(),
                at: rho,
                value: if a.value.is_finite() { b.value } else { a.value },
            });
        }
        judge.expect_ge(rho, &b, &a);
    }
    Ok(judge.verdict())
}

fn known_thorin(ch: &ChannelModel) -> Result<ThorinMeasure> {
    ch.thorin()?
        .ok_or_else(|| Error::Domain(format!("Thorin measure of {} is not known", ch.label())))
}

/// True when the Laplace-transform verdict for `(ch1, ch2)` agrees with the
/// Shannon-transform verdict for their Thorin measures.
pub fn duality_check(ch1: &ChannelModel, ch2: &ChannelModel, grid: Grid) -> Result<bool> {
    let (mu1, mu2) = (known_thorin(ch1)?, known_thorin(ch2)?);
    let lt = lt_order_check(ch1, ch2, grid, &McOptions::default())?;
    let sh = shannon_order_check(&mu1, &mu2, grid)?;
    Ok(lt.holds() == sh.holds())
}

/// `E[(1 + sA)^(-m)]`, the transform of `A · Gamma(m, 1)`.
fn mixture_lt(a: &ChannelModel, m: f64, s: f64, mc: &McOptions, point: u32) -> Result<Estimate> {
    let kernel = move |x: f64| (-m * (s * x).ln_1p()).exp();
    if let crate::channels::Family::Degenerate { value } = a.family() {
        return Ok(Estimate::exact(kernel(*value), Method::Closed));
    }
    if a.pdf(1.0).is_some() {
        let q = integrate_positive(|x| kernel(x) * a.pdf(x).unwrap_or(0.0), QuadOptions::default())?;
        return Ok(Estimate::exact(q.value, Method::Quadrature));
    }
    Ok(average_model(a, mc.seed, point, mc.samples, None, move |x, _| kernel(x)))
}

/// Checks `X = A·Gamma(m₁,1) ≤_Lt Y = B·Gamma(m₂,1)` on the grid, after
/// verifying the premises `m₁ ≤ m₂` and `A ≤_Lt B`.
pub fn mixture_lt_order(
    m1: f64,
    m2: f64,
    a: &ChannelModel,
    b: &ChannelModel,
    grid: Grid,
    mc: &McOptions,
) -> Result<OrderVerdict> {
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::invalid("m", "gamma shapes must be > 0"));
    }
    if m1 > m2 {
        return Err(Error::Precondition(format!("shape premise m1 <= m2 violated ({m1} > {m2})")));
    }
    let premise = lt_order_check(a, b, grid, mc)?;
    if !premise.holds() {
        return Err(Error::Precondition(format!(
            "premise A <=_Lt B fails for A = {}, B = {} at s = {}",
            a.label(),
            b.label(),
            premise.counterexample.map(|c| c.point).unwrap_or(f64::NAN)
        )));
    }
    let mut judge = Judge::new(grid);
    for (i, s) in grid.values().into_iter().enumerate() {
        let x = mixture_lt(a, m1, s, mc, 2 * i as u32)?;
        let y = mixture_lt(b, m2, s, mc, 2 * i as u32 + 1)?;
        judge.expect_ge(s, &x, &y);
    }
    Ok(judge.verdict())
}

/// Nakagami law with `m = D`, the convex-order benchmark for unit-mean GGCs
/// of diversity `D`.
pub fn nakagami_benchmark(d: Extended) -> Result<ChannelModel> {
    match d {
        Extended::Finite(d) => ChannelModel::nakagami(d),
        Extended::Infinite => Err(Error::Domain("benchmark needs a finite diversity order".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMetric {
    SerDpsk,
    SerMpsk(u32),
    Capacity,
}

impl BenchMetric {
    /// SER is convex in the channel power; capacity is concave.
    pub fn is_convex(&self) -> bool {
        !matches!(self, BenchMetric::Capacity)
    }

    fn eval(&self, ch: &ChannelModel, rho: f64, mc: &McOptions) -> Result<Estimate> {
        match self {
            BenchMetric::SerDpsk => avg_ser_dpsk(ch, rho, mc),
            BenchMetric::SerMpsk(m) => avg_ser_mpsk(ch, rho, *m, mc),
            BenchMetric::Capacity => ergodic_capacity(ch, rho, mc),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BenchmarkGap {
    pub rho: f64,
    pub channel: Estimate,
    pub benchmark: Estimate,
    /// `metric(channel) - metric(benchmark)`.
    pub gap: f64,
    pub stderr: f64,
    /// Gap has the sign the benchmark bound predicts (4-SE rule).
    pub bound_holds: bool,
}

/// Compares a unit-mean GGC of finite diversity `D` with Nakagami(`D`).
pub fn benchmark_gap(channel: &ChannelModel, metric: BenchMetric, rho: f64, mc: &McOptions) -> Result<BenchmarkGap> {
    if channel.class_tags().ggc == Membership::No {
        return Err(Error::Precondition(format!("{} is not a GGC", channel.label())));
    }
    let bench = nakagami_benchmark(channel.diversity())?;
    let mean = channel.mean()?;
    if (mean - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "benchmark needs unit mean, {} has mean {mean}",
            channel.label()
        )));
    }
    let a = match metric.eval(channel, rho, mc) {
        // fall back to sampling if a deterministic path fails to converge
        Err(e) if e.is_numerical() && metric.is_convex() => {
            let modulation = match metric {
                BenchMetric::SerMpsk(m) => Modulation::mpsk(m)?,
                _ => Modulation::Dpsk,
            };
            avg_ser_mc(channel, rho, modulation, mc)?
        }
        other => other?,
    };
    let b = metric.eval(&bench, rho, mc)?;
    let gap = a.value - b.value;
    let stderr = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    let tol = ORDER_TOL * a.value.abs().max(b.value.abs()) + SE_RULE * stderr;
    let bound_holds = if metric.is_convex() { gap >= -tol } else { gap <= tol };
    Ok(BenchmarkGap {
        rho,
        channel: a,
        benchmark: b,
        gap,
        stderr,
        bound_holds,
    })
}
