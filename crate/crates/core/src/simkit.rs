//! Seeded SER-vs-SNR simulation and curve post-processing.
//!
//! Point `i` of the SNR grid uses RNG stream family `i` (see [`crate::mc`]),
//! so a curve is reproducible from its config alone and independent of the
//! number of worker threads.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::mc;
use crate::metrics::{avg_ser_dpsk, avg_ser_mpsk, McOptions, Modulation};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

pub const MIN_SAMPLES: u64 = 1000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Average of the conditional error probability at the drawn SNR.
    #[default]
    ConditionalSer,
    /// Transmit one symbol through AWGN per draw and count detection errors.
    SymbolCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub seed: u64,
    pub samples: u64,
    pub rho_db: Vec<f64>,
    pub modulation: Modulation,
    #[serde(default)]
    pub estimator: Estimator,
}

impl SimConfig {
    pub fn new(seed: u64, samples: u64, rho_db: Vec<f64>, modulation: Modulation) -> Result<Self> {
        let c = SimConfig {
            seed,
            samples,
            rho_db,
            modulation,
            estimator: Estimator::ConditionalSer,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_estimator(mut self, estimator: Estimator) -> Self {
        self.estimator = estimator;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::invalid("samples", format!("need at least {MIN_SAMPLES}, got {}", self.samples)));
        }
        if self.rho_db.is_empty() {
            return Err(Error::invalid("rho_db", "grid is empty"));
        }
        if self.rho_db.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("rho_db", "grid values must be finite"));
        }
        if self.rho_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("rho_db", "grid must be strictly increasing"));
        }
        Ok(())
    }
}

/// `start, start+step, ...` up to `stop` inclusive (with a little slack for
/// rounding).
pub fn db_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("rho_db_step", format!("must be positive, got {step}")));
    }
    if !(start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(Error::invalid("rho_db_stop", format!("need start <= stop, got {start} and {stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// SER values on an SNR grid. `config` is set for simulated curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerCurve {
    pub rho_db: Vec<f64>,
    pub ser: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n: Vec<u64>,
    pub config: Option<SimConfig>,
}

fn complex_noise<R: Rng>(rng: &mut R) -> (f64, f64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    (s * a, s * b)
}

/// One detection trial at instantaneous SNR `gamma` with unit-variance
/// complex noise. Returns 1 on a symbol error.
fn symbol_trial<R: Rng>(modulation: Modulation, gamma: f64, rng: &mut R) -> f64 {
    let amp = gamma.sqrt();
    match modulation {
        Modulation::Dpsk => {
            // reference symbol then a repeated symbol; detect from Re(r1 r0*)
            let (n0r, n0i) = complex_noise(rng);
            let (n1r, n1i) = complex_noise(rng);
            let (r0r, r0i) = (amp + n0r, n0i);
            let (r1r, r1i) = (amp + n1r, n1i);
            if r1r * r0r + r1i * r0i < 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Modulation::Mpsk { m } => {
            let (nr, ni) = complex_noise(rng);
            let phase = ni.atan2(amp + nr);
            if phase.abs() > PI / m as f64 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Simulated SER curve for `channel` on the configured grid.
pub fn simulate_ser(channel: &ChannelModel, config: &SimConfig) -> Result<SerCurve> {
    config.validate()?;
    let sampler = channel.sampler();
    let pe = config.modulation.conditional();
    let a = config.modulation.decay_rate();
    let mut curve = SerCurve {
        rho_db: config.rho_db.clone(),
        ser: Vec::with_capacity(config.rho_db.len()),
        stderr: Vec::with_capacity(config.rho_db.len()),
        n: Vec::with_capacity(config.rho_db.len()),
        config: Some(config.clone()),
    };
    for (i, &db) in config.rho_db.iter().enumerate() {
        let rho = db_to_linear(db);
        let point = u32::try_from(i).map_err(|_| Error::invalid("rho_db", "grid too long"))?;
        let m = match config.estimator {
            Estimator::ConditionalSer => {
                mc::average(&sampler, config.seed, point, config.samples, Some(rho * a), |x, _| pe.eval(rho * x))
            }
            Estimator::SymbolCount => mc::average(&sampler, config.seed, point, config.samples, Some(rho * a), |x, rng| {
                symbol_trial(config.modulation, rho * x, rng)
            }),
        };
        if !m.mean.is_finite() {
            return Err(Error::NonFinite {
                what: "simulated SER".into(),
                at: db,
                value: m.mean,
            });
        }
        curve.ser.push(m.mean);
        curve.stderr.push(m.stderr());
        curve.n.push(m.n);
    }
    Ok(curve)
}

/// SER curve from the analytic/quadrature paths in [`crate::metrics`].
pub fn exact_curve(channel: &ChannelModel, rho_db: &[f64], modulation: Modulation, mc: &McOptions) -> Result<SerCurve> {
    let mut curve = SerCurve {
        rho_db: rho_db.to_vec(),
        ser: Vec::new(),
        stderr: Vec::new(),
        n: Vec::new(),
        config: None,
    };
    for &db in rho_db {
        let rho = db_to_linear(db);
        let e = match modulation {
            Modulation::Dpsk => avg_ser_dpsk(channel, rho, mc)?,
            Modulation::Mpsk { m } => avg_ser_mpsk(channel, rho, m, mc)?,
        };
        curve.ser.push(e.value);
        curve.stderr.push(e.stderr);
        curve.n.push(e.samples);
    }
    Ok(curve)
}

impl SerCurve {
    /// Curve from plain values with zero error bars.
    pub fn from_values(rho_db: Vec<f64>, ser: Vec<f64>) -> Result<Self> {
        if rho_db.len() != ser.len() {
            return Err(Error::invalid("ser", "length differs from the SNR grid"));
        }
        let len = ser.len();
        Ok(SerCurve {
            rho_db,
            ser,
            stderr: vec![0.0; len],
            n: vec![0; len],
            config: None,
        })
    }

    /// CSV with a single `# {json}` header line followed by
    /// `rho_db,ser,stderr,n` rows.
    pub fn to_csv(&self, header: &serde_json::Value) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {header}");
        out.push_str("rho_db,ser,stderr,n\n");
        for i in 0..self.ser.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{}",
                self.rho_db[i], self.ser[i], self.stderr[i], self.n[i]
            );
        }
        out
    }

    /// Parses the output of [`SerCurve::to_csv`]; the header is returned
    /// as-is and the config is read from its `config` key when present.
    pub fn from_csv(text: &str) -> Result<(Self, serde_json::Value)> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| Error::Spec("missing `# {json}` header line".into()))?;
        let header: serde_json::Value =
            serde_json::from_str(header).map_err(|e| Error::Spec(format!("bad CSV header: {e}")))?;
        if lines.next() != Some("rho_db,ser,stderr,n") {
            return Err(Error::Spec("missing column line".into()));
        }
        let mut curve = SerCurve {
            rho_db: vec![],
            ser: vec![],
            stderr: vec![],
            n: vec![],
            config: header
                .get("config")
                .and_then(|c| serde_json::from_value(c.clone()).ok()),
        };
        let bad = |l: &str| Error::Spec(format!("bad CSV row `{l}`"));
        for l in lines.filter(|l| !l.is_empty()) {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 4 {
                return Err(bad(l));
            }
            curve.rho_db.push(f[0].parse().map_err(|_| bad(l))?);
            curve.ser.push(f[1].parse().map_err(|_| bad(l))?);
            curve.stderr.push(f[2].parse().map_err(|_| bad(l))?);
            curve.n.push(f[3].parse().map_err(|_| bad(l))?);
        }
        Ok((curve, header))
    }
}

/// Diversity order from the log-log slope of the SER curve over the window
/// `[lo_db, hi_db]`, fitted by least squares on `log10 SER` against
/// `ρ_dB / 10`. Every point used must satisfy `SER > 10·SE`.
pub fn estimate_diversity(curve: &SerCurve, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let (first, last) = match (curve.rho_db.first(), curve.rho_db.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::OutOfRange("empty curve".into())),
    };
    if !(lo < hi) || lo < first - 1e-9 || hi > last + 1e-9 {
        return Err(Error::OutOfRange(format!(
            "window [{lo}, {hi}] dB is not inside the grid [{first}, {last}] dB"
        )));
    }
    let mut pts = Vec::new();
    for i in 0..curve.rho_db.len() {
        let db = curve.rho_db[i];
        if db < lo - 1e-9 || db > hi + 1e-9 {
            continue;
        }
        let (s, se) = (curve.ser[i], curve.stderr[i]);
        if !(s > 0.0 && s > 10.0 * se) {
            return Err(Error::Noisy(format!("SER {s:e} at {db} dB is not above 10 standard errors ({se:e})")));
        }
        pts.push((db / 10.0, s.log10()));
    }
    if pts.len() < 2 {
        return Err(Error::OutOfRange(format!("window [{lo}, {hi}] dB holds fewer than two points")));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// SNR in dB at which the curve first falls to `target`, by linear
/// interpolation of `log10 SER` in dB.
pub fn snr_at_ser(curve: &SerCurve, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::invalid("target", format!("must be positive, got {target}")));
    }
    for i in 0..curve.ser.len().saturating_sub(1) {
        let (a, b) = (curve.ser[i], curve.ser[i + 1]);
        if a >= target && b <= target && a > 0.0 && b > 0.0 {
            if a == b {
                return Ok(curve.rho_db[i]);
            }
            let t = (a.log10() - target.log10()) / (a.log10() - b.log10());
            return Ok(curve.rho_db[i] + t * (curve.rho_db[i + 1] - curve.rho_db[i]));
        }
    }
    Err(Error::OutOfRange(format!("curve never crosses SER {target:e}")))
}

/// `ρ1 − ρ2` in dB needed by the two curves to reach `target`; positive
/// when the second curve is better.
pub fn estimate_snr_gain(c1: &SerCurve, c2: &SerCurve, target: f64) -> Result<f64> {
    Ok(snr_at_ser(c1, target)? - snr_at_ser(c2, target)?)
}
