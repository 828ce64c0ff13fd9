//! Average SER (DPSK, MPSK), ergodic capacity, outage, high-SNR
//! asymptotics, SNR gain and gamma-mixing moments.
//!
//! Each metric uses the most exact path available: a closed-form Laplace
//! transform, then quadrature, then Monte-Carlo. The returned [`Estimate`]
//! says which path was taken.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::mc::average_model;
use crate::quad::{gauss_legendre, integrate, integrate_pieces, integrate_positive, QuadOptions};
use crate::special::{erfc, ln_gamma};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "closed")]
    Closed,
    #[serde(rename = "quadrature")]
    Quadrature,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "mc",
        })
    }
}

/// A value with its standard error (zero for deterministic paths).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Estimate {
            value,
            stderr: 0.0,
            samples: 0,
            method,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McOptions {
    pub seed: u64,
    pub samples: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            seed: 1,
            samples: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulation {
    Dpsk,
    /// Coherent `M`-PSK, `M` a power of two.
    Mpsk { m: u32 },
}

impl Modulation {
    pub fn mpsk(m: u32) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::invalid("M", format!("must be a power of two >= 2, got {m}")));
        }
        Ok(Modulation::Mpsk { m })
    }

    /// Rate `a` of the dominant `e^(-aγ)` decay of the conditional SER.
    pub fn decay_rate(&self) -> f64 {
        match self {
            Modulation::Dpsk => 1.0,
            Modulation::Mpsk { m } => (PI / *m as f64).sin().powi(2),
        }
    }

    pub fn conditional(&self) -> ConditionalSer {
        ConditionalSer::new(*self)
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::Dpsk => f.write_str("dpsk"),
            Modulation::Mpsk { m } => write!(f, "mpsk:{m}"),
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    /// `dpsk`, `bpsk`, `qpsk` or `mpsk:M`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "dpsk" => Ok(Modulation::Dpsk),
            "bpsk" => Modulation::mpsk(2),
            "qpsk" => Modulation::mpsk(4),
            _ => match s.strip_prefix("mpsk:") {
                Some(m) => Modulation::mpsk(
                    m.parse()
                        .map_err(|_| Error::invalid("mod", format!("bad constellation size `{m}`")))?,
                ),
                None => Err(Error::invalid("mod", format!("expected dpsk or mpsk:M, got `{s}`"))),
            },
        }
    }
}

impl Serialize for Modulation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Modulation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conditional symbol error probability `P_e(γ)` at instantaneous SNR `γ`.
///
/// MPSK with `M > 2` uses the Craig angle integral
/// `(1/π) ∫₀^((M-1)π/M) exp(-γ sin²(π/M) / sin²θ) dθ`, evaluated with a
/// 32-point Gauss–Legendre rule on each of `[0, π/2]` and
/// `[π/2, (M-1)π/M]`.
#[derive(Clone, Debug)]
pub struct ConditionalSer {
    modulation: Modulation,
    /// `(1/sin²θ_i, w_i/π)` for the Craig rule.
    nodes: Vec<(f64, f64)>,
}

impl ConditionalSer {
    pub fn new(modulation: Modulation) -> Self {
        let mut nodes = Vec::new();
        if let Modulation::Mpsk { m } = modulation {
            if m > 2 {
                let (x, w) = gauss_legendre(32);
                let upper = PI * (m as f64 - 1.0) / m as f64;
                for (a, b) in [(0.0, 0.5 * PI), (0.5 * PI, upper)] {
                    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                    for (xi, wi) in x.iter().zip(&w) {
                        let theta: f64 = mid + half * xi;
                        nodes.push((1.0 / theta.sin().powi(2), half * wi / PI));
                    }
                }
            }
        }
        ConditionalSer { modulation, nodes }
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        match self.modulation {
            Modulation::Dpsk => 0.5 * (-gamma).exp(),
            Modulation::Mpsk { m: 2 } => 0.5 * erfc(gamma.sqrt()),
            Modulation::Mpsk { .. } => {
                let a = self.modulation.decay_rate();
                self.nodes.iter().map(|(inv_sin2, w)| w * (-gamma * a * inv_sin2).exp()).sum()
            }
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("rho", format!("SNR must be finite and >= 0, got {rho}")))
    }
}

/// Laplace transform with the method that produced it.
fn laplace_tagged(channel: &ChannelModel, s: f64) -> Result<Option<(f64, Method)>> {
    if let Some(v) = channel.lt_closed(s) {
        return Ok(Some((v, Method::Closed)));
    }
    Ok(channel.laplace(s)?.map(|v| (v, Method::Quadrature)))
}

/// Average DPSK SER `½ φ(ρ)`.
pub fn avg_ser_dpsk(channel: &ChannelModel, rho: f64, mc: &McOptions) -> Result<Estimate> {
    check_rho(rho)?;
    match laplace_tagged(channel, rho)? {
        Some((phi, method)) => Ok(Estimate::exact(0.5 * phi, method)),
        None => avg_ser_mc(channel, rho, Modulation::Dpsk, mc),
    }
}

/// Average MPSK SER `(1/π) ∫₀^((1-1/M)π) φ(ρ sin²(π/M) / sin²θ) dθ`.
pub fn avg_ser_mpsk(channel: &ChannelModel, rho: f64, m: u32, mc: &McOptions) -> Result<Estimate> {
    check_rho(rho)?;
    let modulation = Modulation::mpsk(m)?;
    if rho == 0.0 {
        return Ok(Estimate::exact(1.0 - 1.0 / m as f64, Method::Closed));
    }
    if channel.laplace(1.0)?.is_none() {
        return avg_ser_mc(channel, rho, modulation, mc);
    }
    let a = modulation.decay_rate();
    let upper = PI * (1.0 - 1.0 / m as f64);
    let f = |theta: f64| {
        let s = theta.sin();
        if s <= 0.0 {
            return 0.0;
        }
        channel.laplace(rho * a / (s * s)).ok().flatten().unwrap_or(f64::NAN)
    };
    // the integrand is flat away from θ = 0 and peaks towards θ = π/2
    let q = integrate_pieces(&f, 0.0, upper, 8, QuadOptions::default(), "MPSK angle integral")?;
    Ok(Estimate::exact(q.value / PI, Method::Quadrature))
}

/// Monte-Carlo average of the conditional SER with exponential tilting.
pub fn avg_ser_mc(channel: &ChannelModel, rho: f64, modulation: Modulation, mc: &McOptions) -> Result<Estimate> {
    check_rho(rho)?;
    let pe = modulation.conditional();
    let tilt = rho * modulation.decay_rate();
    Ok(average_model(channel, mc.seed, 0, mc.samples, Some(tilt), |x, _| pe.eval(rho * x)))
}

/// `1 - φ(s)`, via the Laplace exponent when a Thorin measure is at hand.
fn one_minus_lt(channel: &ChannelModel, thorin: Option<&crate::measures::ThorinMeasure>, s: f64) -> Result<f64> {
    if let Some(mu) = thorin {
        return Ok(-(-mu.laplace_exponent(s)?).exp_m1());
    }
    match channel.laplace(s)? {
        Some(v) => Ok(1.0 - v),
        None => Err(Error::Domain("no Laplace transform available".into())),
    }
}

/// Ergodic capacity `E[ln(1 + ρX)]` in nats, via
/// `∫₀^∞ (e^(-s)/s)(1 - φ(ρs)) ds` when the transform is available.
pub fn ergodic_capacity(channel: &ChannelModel, rho: f64, mc: &McOptions) -> Result<Estimate> {
    check_rho(rho)?;
    if rho == 0.0 {
        return Ok(Estimate::exact(0.0, Method::Closed));
    }
    if channel.laplace(1.0)?.is_none() {
        return ergodic_capacity_mc(channel, rho, mc);
    }
    let thorin = channel.thorin().ok().flatten().filter(|m| m.is_atomic());
    let q = integrate_positive(
        |s| {
            let g = one_minus_lt(channel, thorin.as_ref(), rho * s).unwrap_or(f64::NAN);
            (-s).exp() / s * g
        },
        QuadOptions::default(),
    )?;
    Ok(Estimate::exact(q.value, Method::Quadrature))
}

/// Plain Monte-Carlo average of `ln(1 + ρX)`.
pub fn ergodic_capacity_mc(channel: &ChannelModel, rho: f64, mc: &McOptions) -> Result<Estimate> {
    check_rho(rho)?;
    Ok(average_model(channel, mc.seed, 0, mc.samples, None, |x, _| (rho * x).ln_1p()))
}

/// Outage probability `P(X ≤ x)`: exact where the distribution function is
/// known, else the empirical fraction.
pub fn outage(channel: &ChannelModel, x: f64, mc: &McOptions) -> Result<Estimate> {
    if !(x > 0.0) {
        return Err(Error::invalid("threshold", format!("must be > 0, got {x}")));
    }
    match channel.cdf(x)? {
        Some(p) => Ok(Estimate::exact(p, Method::Closed)),
        None => Ok(average_model(channel, mc.seed, 0, mc.samples, None, |v, _| {
            if v <= x {
                1.0
            } else {
                0.0
            }
        })),
    }
}

/// Small-threshold outage `x^D h(x) / D`.
pub fn outage_asymptotic(channel: &ChannelModel, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::invalid("threshold", format!("must be > 0, got {x}")));
    }
    let d = match channel.diversity() {
        Extended::Finite(d) => d,
        Extended::Infinite => {
            return Err(Error::Domain(format!(
                "asymptotic outage needs finite diversity; {} has none",
                channel.label()
            )))
        }
    };
    let h = match channel.h_function(x)? {
        Some(h) => h,
        None => finite_h0(channel)?,
    };
    Ok(x.powf(d) * h / d)
}

fn finite_h0(channel: &ChannelModel) -> Result<f64> {
    match channel.h0()? {
        Some(Extended::Finite(h)) => Ok(h),
        Some(Extended::Infinite) => Err(Error::Domain(format!("h(0+) of {} is infinite", channel.label()))),
        None => Err(Error::Domain(format!("h(0+) of {} is unknown", channel.label()))),
    }
}

/// High-SNR description `SER ≈ c_Q h(0+) ρ^(-D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticSer {
    pub diversity: f64,
    pub c_q: f64,
    pub h0: f64,
    /// `(c_Q h(0+))^(-1/D)`, so that `SER ≈ (array_gain · ρ)^(-D)`.
    pub array_gain: f64,
}

impl AsymptoticSer {
    pub fn ser(&self, rho: f64) -> f64 {
        self.c_q * self.h0 * rho.powf(-self.diversity)
    }
}

/// Modulation constant `c_Q` of the high-SNR SER for a law of diversity
/// `D`: `Γ(D)/2` for DPSK and
/// `Γ(D) (π sin^(2D)(π/M))⁻¹ ∫₀^((1-1/M)π) sin^(2D)θ dθ` for MPSK.
pub fn c_q(modulation: Modulation, d: f64) -> Result<f64> {
    match modulation {
        Modulation::Dpsk => Ok((ln_gamma(d)).exp() / 2.0),
        Modulation::Mpsk { m } => {
            let upper = PI * (1.0 - 1.0 / m as f64);
            let q = integrate(|t: f64| t.sin().powf(2.0 * d), 0.0, upper, QuadOptions::default())?;
            let a = (PI / m as f64).sin();
            Ok((ln_gamma(d) + q.value.ln() - PI.ln() - 2.0 * d * a.ln()).exp())
        }
    }
}

pub fn asymptotic_ser(channel: &ChannelModel, modulation: Modulation) -> Result<AsymptoticSer> {
    let d = match channel.diversity() {
        Extended::Finite(d) => d,
        Extended::Infinite => {
            return Err(Error::Domain(format!(
                "{} has infinite diversity; the SER decays faster than any power",
                channel.label()
            )))
        }
    };
    let h0 = finite_h0(channel)?;
    let c = c_q(modulation, d)?;
    Ok(AsymptoticSer {
        diversity: d,
        c_q: c,
        h0,
        array_gain: (c * h0).powf(-1.0 / d),
    })
}

/// `c_Q h(1/ρ) ρ^(-D)`, the refined high-SNR approximation.
pub fn asymptotic_ser_at(channel: &ChannelModel, modulation: Modulation, rho: f64) -> Result<f64> {
    let a = asymptotic_ser(channel, modulation)?;
    let h = channel.h_function(1.0 / rho)?.unwrap_or(a.h0);
    Ok(a.c_q * h * rho.powf(-a.diversity))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SnrGain {
    /// `ρ₁ - ρ₂` in dB at equal high-SNR SER; positive when the second
    /// channel performs better.
    pub db: f64,
    /// The same quantity from the Thorin log-moments, when both are known.
    pub via_thorin: Option<f64>,
}

/// High-SNR gain `(10/D) log₁₀(h₁(0+)/h₂(0+))` in dB; independent of the
/// modulation.
pub fn snr_gain(ch1: &ChannelModel, ch2: &ChannelModel) -> Result<SnrGain> {
    let (d1, d2) = (ch1.diversity(), ch2.diversity());
    let (d1, d2) = match (d1, d2) {
        (Extended::Finite(a), Extended::Finite(b)) => (a, b),
        _ => {
            return Err(Error::Domain("SNR gain needs finite diversity orders".into()));
        }
    };
    if (d1 - d2).abs() > 1e-12 * d1.max(d2) {
        return Err(Error::UnequalDiversity(d1, d2));
    }
    let (h1, h2) = (finite_h0(ch1)?, finite_h0(ch2)?);
    let db = 10.0 / d1 * (h1 / h2).log10();
    let via_thorin = match (ch1.thorin(), ch2.thorin()) {
        (Ok(Some(m1)), Ok(Some(m2))) => match (m1.log_moment(), m2.log_moment()) {
            (Ok(l1), Ok(l2)) => Some(10.0 / d1 * (l1 - l2) / LN_10),
            _ => None,
        },
        _ => None,
    };
    Ok(SnrGain { db, via_thorin })
}

/// `E[Z̃ⁿ]` for `Z̃ ~ Gamma(D, D)`.
pub fn gamma_unit_moment(d: f64, n: u32) -> f64 {
    (ln_gamma(d + n as f64) - ln_gamma(d) - n as f64 * d.ln()).exp()
}

/// Moments `E[Ãⁿ] = E[Xⁿ] / E[Z̃ⁿ]` of the mixing variable in
/// `X = Ã · Z̃`, `Z̃ ~ Gamma(D, D)`. With `mc = None` the channel moments
/// come from closed forms or quadrature; otherwise from sampling.
pub fn mixing_moments(channel: &ChannelModel, d: f64, orders: &[u32], mc: Option<&McOptions>) -> Result<Vec<Estimate>> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid("D", format!("must be finite and > 0, got {d}")));
    }
    orders
        .iter()
        .map(|&n| {
            let z = gamma_unit_moment(d, n);
            let est = match mc {
                None => {
                    let exact = match channel.moment(n as f64)? {
                        Some(v) => Estimate::exact(v, Method::Closed),
                        None => match channel.pdf(1.0) {
                            Some(_) => Estimate::exact(
                                integrate_positive(
                                    |x| x.powi(n as i32) * channel.pdf(x).unwrap_or(0.0),
                                    QuadOptions::default(),
                                )?
                                .value,
                                Method::Quadrature,
                            ),
                            None => {
                                return Err(Error::Domain(format!(
                                    "no deterministic moment path for {}",
                                    channel.label()
                                )))
                            }
                        },
                    };
                    if !exact.value.is_finite() {
                        return Err(Error::Domain(format!("moment of order {n} diverges")));
                    }
                    exact
                }
                Some(opts) => {
                    channel.moment(n as f64)?; // surfaces divergent moments
                    average_model(channel, opts.seed, n, opts.samples, None, |x, _| x.powi(n as i32))
                }
            };
            Ok(Estimate {
                value: est.value / z,
                stderr: est.stderr / z,
                ..est
            })
        })
        .collect()
}
