//! Thorin and Lévy measures.
//!
//! A [`ThorinMeasure`] lives on the rate axis `u ∈ (0, ∞)`: an atom of mass
//! `w` at rate `u` is the Thorin measure of a `Gamma(w, u)` variable (shape
//! `w`, rate `u`), so a finite atomic measure describes a finite sum of
//! independent gamma variables. The Laplace exponent is
//! `γ(s) = ∫ log(1 + s/u) μ(du)` and the Laplace transform `exp(-γ(s))`.
//!
//! Continuous parts are integrated in `t = ln u` (see
//! [`crate::quad::integrate_positive`]).

use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::quad::{integrate_positive, integrate_positive_ext, PositiveIntegral, QuadOptions};
use crate::special::ln_gamma;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Absolute tolerance under which two atom rates are merged.
pub const RATE_MERGE_TOL: f64 = 1e-12;

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub rate: f64,
    pub mass: f64,
}

/// A named density on `(0, ∞)`.
#[derive(Clone)]
pub struct Density {
    name: String,
    f: DensityFn,
}

impl Density {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Density {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.f)(u)
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Density({})", self.name)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ThorinMeasure {
    atoms: Vec<Atom>,
    density: Option<Density>,
}

fn check_atom(rate: f64, mass: f64) -> Result<()> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::invalid("rate", format!("atom rate must be finite and > 0, got {rate}")));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid("mass", format!("atom mass must be finite and > 0, got {mass}")));
    }
    Ok(())
}

fn merge_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.rate.total_cmp(&b.rate));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if (last.rate - a.rate).abs() <= RATE_MERGE_TOL => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    out
}

impl ThorinMeasure {
    /// The zero measure (degenerate law at the origin when `a = 0`).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atom(rate: f64, mass: f64) -> Result<Self> {
        Self::from_atoms([(rate, mass)])
    }

    /// Atomic measure from `(rate, mass)` pairs; equal rates are merged.
    pub fn from_atoms(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(rate, mass)| check_atom(rate, mass).map(|_| Atom { rate, mass }))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThorinMeasure {
            atoms: merge_atoms(atoms),
            density: None,
        })
    }

    /// Continuous measure `d(u) du`. The Thorin integrability condition
    /// `∫₀¹ |log u| μ(du) + ∫₁^∞ u⁻¹ μ(du) < ∞` is checked numerically.
    pub fn with_density(density: Density) -> Result<Self> {
        let probe = density.clone();
        let weight = move |u: f64| {
            let d = probe.eval(u);
            if u < 1.0 {
                -u.ln() * d
            } else {
                d / u
            }
        };
        match integrate_positive_ext(weight, QuadOptions::default())? {
            PositiveIntegral::Finite(_) => {}
            PositiveIntegral::Divergent => {
                return Err(Error::invalid(
                    "density",
                    format!("`{}` violates the Thorin integrability condition", density.name()),
                ))
            }
        }
        Ok(ThorinMeasure {
            atoms: Vec::new(),
            density: Some(density),
        })
    }

    /// Thorin measure of the one-sided stable law with `φ(s) = exp(-s^r)`:
    /// density `(r sin(rπ)/π) u^(r-1)`, `0 < r < 1`.
    pub fn positive_stable(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::invalid("r", format!("stable index must lie in (0, 1), got {r}")));
        }
        let c = r * (r * std::f64::consts::PI).sin() / std::f64::consts::PI;
        Self::with_density(Density::new(format!("stable(r={r})"), move |u: f64| {
            c * u.powf(r - 1.0)
        }))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_none()
    }

    fn integrate_density(&self, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
        match &self.density {
            None => Ok(0.0),
            Some(d) => Ok(integrate_positive(|u| g(u, d.eval(u)), QuadOptions::default())?.value),
        }
    }

    /// Total mass `D = ∫ μ(du)`, which is the diversity order of the GGC.
    pub fn thorin_mass(&self) -> Result<Extended> {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        match &self.density {
            None => Ok(Extended::Finite(atoms)),
            Some(d) => {
                let d = d.clone();
                match integrate_positive_ext(move |u| d.eval(u), QuadOptions::default())? {
                    PositiveIntegral::Finite(q) => Ok(Extended::Finite(atoms + q.value)),
                    PositiveIntegral::Divergent => Ok(Extended::Infinite),
                }
            }
        }
    }

    /// Mean of the GGC, `∫ u⁻¹ μ(du)`.
    pub fn mean(&self) -> Result<f64> {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass / a.rate).sum();
        match &self.density {
            None => Ok(atoms),
            Some(d) => {
                let d = d.clone();
                match integrate_positive_ext(move |u| d.eval(u) / u, QuadOptions::default()) {
                    Ok(PositiveIntegral::Finite(q)) => Ok(atoms + q.value),
                    Ok(PositiveIntegral::Divergent) | Err(Error::Indeterminate(_)) => Err(
                        Error::MeanUndefined(format!("∫ u⁻¹ μ(du) diverges for `{}`", d_name(&self.density))),
                    ),
                    Err(e) => Err(e),
                }
            }
        }
    }

    /// Laplace exponent `γ(s) = ∫ log(1 + s/u) μ(du)`.
    pub fn laplace_exponent(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::invalid("s", format!("Laplace argument must be >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * (s / a.rate).ln_1p()).sum();
        Ok(atoms + self.integrate_density(|u, d| d * (s / u).ln_1p())?)
    }

    /// Laplace transform `φ(s) = exp(-γ(s))`.
    pub fn lt(&self, s: f64) -> Result<f64> {
        Ok((-self.laplace_exponent(s)?).exp())
    }

    /// `∫ log u μ(du)`, split as (part over `u < 1`, part over `u > 1`);
    /// either side may be infinite.
    fn log_moment_parts(&self) -> Result<(Extended, Extended)> {
        let mut lower = 0.0;
        let mut upper = 0.0;
        for a in &self.atoms {
            let l = a.mass * a.rate.ln();
            if l < 0.0 {
                lower -= l;
            } else {
                upper += l;
            }
        }
        let mut parts = (Extended::Finite(lower), Extended::Finite(upper));
        if let Some(d) = &self.density {
            let dl = d.clone();
            parts.0 = match integrate_positive_ext(
                move |u: f64| if u < 1.0 { -u.ln() * dl.eval(u) } else { 0.0 },
                QuadOptions::default(),
            )? {
                PositiveIntegral::Finite(q) => Extended::Finite(lower + q.value),
                PositiveIntegral::Divergent => Extended::Infinite,
            };
            let du = d.clone();
            parts.1 = match integrate_positive_ext(
                move |u: f64| if u > 1.0 { u.ln() * du.eval(u) } else { 0.0 },
                QuadOptions::default(),
            )? {
                PositiveIntegral::Finite(q) => Extended::Finite(upper + q.value),
                PositiveIntegral::Divergent => Extended::Infinite,
            };
        }
        Ok(parts)
    }

    /// `∫ log u μ(du)` when finite.
    pub fn log_moment(&self) -> Result<f64> {
        match self.log_moment_parts()? {
            (Extended::Finite(lo), Extended::Finite(hi)) => Ok(hi - lo),
            _ => Err(Error::Domain("∫ log u μ(du) is not finite".into())),
        }
    }

    /// `h(0+) = Γ(D)⁻¹ exp(∫ log u μ(du))` of the canonical density
    /// `x^(D-1) h(x)`; infinite when `∫₁^∞ log u μ(du)` diverges.
    pub fn h_zero(&self) -> Result<Extended> {
        let mass = match self.thorin_mass()? {
            Extended::Finite(m) if m > 0.0 => m,
            Extended::Finite(_) => return Err(Error::Domain("h(0+) of the zero measure".into())),
            Extended::Infinite => {
                return Err(Error::Domain("h(0+) requires a finite Thorin mass".into()))
            }
        };
        match self.log_moment_parts()? {
            (_, Extended::Infinite) => Ok(Extended::Infinite),
            (Extended::Infinite, _) => Ok(Extended::Finite(0.0)),
            (Extended::Finite(lo), Extended::Finite(hi)) => {
                Ok(Extended::Finite((hi - lo - ln_gamma(mass)).exp()))
            }
        }
    }

    /// Thorin measure of `X₁ + X₂` for independent GGCs.
    pub fn add(&self, other: &ThorinMeasure) -> ThorinMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let density = match (&self.density, &other.density) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d.clone()),
            (Some(a), Some(b)) => {
                let (fa, fb) = (a.clone(), b.clone());
                Some(Density::new(format!("{} + {}", a.name(), b.name()), move |u| {
                    fa.eval(u) + fb.eval(u)
                }))
            }
        };
        ThorinMeasure {
            atoms: merge_atoms(atoms),
            density,
        }
    }

    /// Thorin measure of `cX`: rates `u ↦ u/c`, masses unchanged.
    pub fn scale_rv(&self, c: f64) -> Result<ThorinMeasure> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid("c", format!("scale must be finite and > 0, got {c}")));
        }
        if c == 1.0 {
            return Ok(self.clone());
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                rate: a.rate / c,
                mass: a.mass,
            })
            .collect();
        let density = self.density.as_ref().map(|d| {
            let f = d.clone();
            Density::new(format!("{}∘(×{c})", d.name()), move |v| c * f.eval(c * v))
        });
        Ok(ThorinMeasure {
            atoms: merge_atoms(atoms),
            density,
        })
    }
}

fn d_name(d: &Option<Density>) -> &str {
    d.as_ref().map(|d| d.name()).unwrap_or("atomic")
}

/// Lévy triple `(a, b, τ)` of a Bernstein function
/// `g(x) = a + b x + ∫ (1 - e^(-s x)) τ(s) ds`.
#[derive(Clone, Debug)]
pub struct LevyMeasure {
    density: Density,
    drift: f64,
    linear: f64,
}

impl LevyMeasure {
    /// Checks `∫₀¹ s τ(s) ds + ∫₁^∞ τ(s) ds < ∞` numerically.
    pub fn new(density: Density, drift: f64, linear: f64) -> Result<Self> {
        if !(drift >= 0.0 && drift.is_finite()) {
            return Err(Error::invalid("drift", "must be finite and >= 0"));
        }
        if !(linear >= 0.0 && linear.is_finite()) {
            return Err(Error::invalid("linear", "must be finite and >= 0"));
        }
        let probe = density.clone();
        let w = move |s: f64| if s < 1.0 { s * probe.eval(s) } else { probe.eval(s) };
        match integrate_positive_ext(w, QuadOptions::default())? {
            PositiveIntegral::Finite(_) => Ok(LevyMeasure {
                density,
                drift,
                linear,
            }),
            PositiveIntegral::Divergent => Err(Error::invalid(
                "density",
                format!("`{}` is not a Lévy density", density.name()),
            )),
        }
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn linear(&self) -> f64 {
        self.linear
    }

    pub fn bernstein_eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::invalid("x", format!("must be >= 0, got {x}")));
        }
        let base = self.drift + self.linear * x;
        if x == 0.0 {
            return Ok(base);
        }
        let d = self.density.clone();
        let q = integrate_positive(move |s: f64| -(-s * x).exp_m1() * d.eval(s), QuadOptions::default())?;
        Ok(base + q.value)
    }

    /// Thorin–Bernstein test: is `s τ(s)` completely monotone on the grid?
    pub fn is_thorin_bernstein(&self, grid: &CmGrid) -> Result<CmVerdict> {
        let d = self.density.clone();
        is_completely_monotone(move |s| s * d.eval(s), grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CmResult {
    Pass,
    Fail,
}

/// Point where `(-1)^k Δ_h^k f(x)` came out negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CmWitness {
    pub x: f64,
    pub h: f64,
    pub order: usize,
    /// Value of `(-1)^k Δ_h^k f(x)`.
    pub difference: f64,
    pub f_x: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmVerdict {
    pub result: CmResult,
    pub witness: Option<CmWitness>,
    pub max_order_tested: usize,
}

impl CmVerdict {
    pub fn passed(&self) -> bool {
        self.result == CmResult::Pass
    }
}

/// Grid for the alternating finite-difference test.
#[derive(Clone, Debug)]
pub struct CmGrid {
    pub xs: Vec<f64>,
    pub hs: Vec<f64>,
    pub k_max: usize,
    pub tol: f64,
}

impl Default for CmGrid {
    /// 50 geometric points in `[1e-3, 1e2]`, `h ∈ {1e-2, 1e-1, 1}`, orders up
    /// to 6, tolerance `1e-9 |f(x)|`.
    fn default() -> Self {
        CmGrid {
            xs: geometric_grid(1e-3, 1e2, 50),
            hs: vec![1e-2, 1e-1, 1.0],
            k_max: 6,
            tol: 1e-9,
        }
    }
}

pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Hausdorff-style complete-monotonicity test: passes iff
/// `(-1)^k Δ_h^k f(x) ≥ -tol |f(x)|` for every tested `(x, h, k)`.
/// On failure the witness with the largest relative violation is returned.
pub fn is_completely_monotone(f: impl Fn(f64) -> f64, grid: &CmGrid) -> Result<CmVerdict> {
    let k_max = grid.k_max;
    let mut worst: Option<(f64, CmWitness)> = None;
    let mut values = vec![0.0; k_max + 1];
    for &x in &grid.xs {
        for &h in &grid.hs {
            for (j, v) in values.iter_mut().enumerate() {
                let at = x + j as f64 * h;
                *v = f(at);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "c.m. test function".into(),
                        at,
                        value: *v,
                    });
                }
            }
            let fx = values[0];
            // diffs[j] holds Δ^k f(x + j h) for the current k.
            let mut diffs = values.clone();
            for k in 0..=k_max {
                if k > 0 {
                    for j in 0..=(k_max - k) {
                        diffs[j] = diffs[j + 1] - diffs[j];
                    }
                }
                let signed = if k % 2 == 0 { diffs[0] } else { -diffs[0] };
                if signed < -grid.tol * fx.abs() {
                    let severity = -signed / fx.abs().max(f64::MIN_POSITIVE);
                    if worst.as_ref().is_none_or(|(s, _)| severity > *s) {
                        worst = Some((
                            severity,
                            CmWitness {
                                x,
                                h,
                                order: k,
                                difference: signed,
                                f_x: fx,
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(match worst {
        None => CmVerdict {
            result: CmResult::Pass,
            witness: None,
            max_order_tested: k_max,
        },
        Some((_, w)) => CmVerdict {
            result: CmResult::Fail,
            witness: Some(w),
            max_order_tested: k_max,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    fn hoyt(q: f64) -> ThorinMeasure {
        let q2 = q * q;
        ThorinMeasure::from_atoms([(0.5 * (1.0 + q2), 0.5), (0.5 * (1.0 + q2) / q2, 0.5)]).unwrap()
    }

    #[test]
    fn thorin_mass_examples() {
        let gamma = ThorinMeasure::atom(2.5, 2.5).unwrap();
        assert_eq!(gamma.thorin_mass().unwrap(), Extended::Finite(2.5));
        assert!(close(hoyt(0.5).thorin_mass().unwrap().to_f64(), 1.0, 1e-15));
        let stable = ThorinMeasure::positive_stable(0.5).unwrap();
        assert_eq!(stable.thorin_mass().unwrap(), Extended::Infinite);
    }

    #[test]
    fn mean_examples() {
        for m in [0.5, 1.0, 2.5, 7.0] {
            assert!(close(ThorinMeasure::atom(m, m).unwrap().mean().unwrap(), 1.0, 1e-15));
        }
        for q in [0.1, 0.5, 1.0] {
            assert!(close(hoyt(q).mean().unwrap(), 1.0, 1e-14));
        }
        // Gamma(2,1) + Gamma(2,2): atoms (rate 1, mass 2), (rate 2, mass 2)
        let x = ThorinMeasure::from_atoms([(1.0, 2.0), (2.0, 2.0)]).unwrap();
        assert!(close(x.mean().unwrap(), 3.0, 1e-15));
        // stable: infinite mean
        let stable = ThorinMeasure::positive_stable(0.5).unwrap();
        assert!(matches!(stable.mean(), Err(Error::MeanUndefined(_))));
    }

    #[test]
    fn laplace_exponent_examples() {
        let g = ThorinMeasure::atom(2.0, 2.0).unwrap();
        assert!(close(g.laplace_exponent(2.0).unwrap(), 2.0 * 2f64.ln(), 1e-15));
        assert_eq!(g.laplace_exponent(0.0).unwrap(), 0.0);
        let stable = ThorinMeasure::positive_stable(0.5).unwrap();
        assert_eq!(stable.laplace_exponent(0.0).unwrap(), 0.0);
        // oracle: exp(-s^r) closed form, γ(4) = 2
        assert!((stable.laplace_exponent(4.0).unwrap() - 2.0).abs() < 1e-6);
        assert!(g.laplace_exponent(-1.0).is_err());
    }

    #[test]
    fn lt_eval_examples() {
        let rayleigh = ThorinMeasure::atom(1.0, 1.0).unwrap();
        assert!(close(rayleigh.lt(1.0).unwrap(), 0.5, 1e-15));
        let stable = ThorinMeasure::positive_stable(0.5).unwrap();
        assert!((stable.lt(4.0).unwrap() - (-2f64).exp()).abs() < 1e-7);
        // Hoyt q=1 collapses onto Rayleigh
        let h1 = hoyt(1.0);
        assert_eq!(h1.atoms().len(), 1);
        assert!(close(h1.lt(1.0).unwrap(), 0.5, 1e-15));
        assert_eq!(rayleigh.lt(0.0).unwrap(), 1.0);
    }

    #[test]
    fn h_zero_examples() {
        assert!(close(ThorinMeasure::atom(2.0, 2.0).unwrap().h_zero().unwrap().to_f64(), 4.0, 1e-14));
        assert!(close(ThorinMeasure::atom(1.0, 1.0).unwrap().h_zero().unwrap().to_f64(), 1.0, 1e-15));
        let stable = ThorinMeasure::positive_stable(0.5).unwrap();
        assert!(matches!(stable.h_zero(), Err(Error::Domain(_))));
        // Hoyt: h(0+) = (1+q²)/(2q)
        let q: f64 = 0.5;
        assert!(close(hoyt(q).h_zero().unwrap().to_f64(), (1.0 + q * q) / (2.0 * q), 1e-14));
    }

    #[test]
    fn add_examples() {
        let a = ThorinMeasure::atom(1.0, 1.0).unwrap();
        let b = ThorinMeasure::atom(2.0, 2.0).unwrap();
        let s = a.add(&b);
        assert_eq!(s.atoms(), &[Atom { rate: 1.0, mass: 1.0 }, Atom { rate: 2.0, mass: 2.0 }]);
        assert_eq!(s.thorin_mass().unwrap(), Extended::Finite(3.0));
        let m = 1.7;
        let nak = ThorinMeasure::atom(m, m).unwrap();
        assert_eq!(nak.add(&nak).thorin_mass().unwrap(), Extended::Finite(2.0 * m));
        assert_eq!(nak.add(&nak).atoms().len(), 1);
        assert_eq!(a.add(&ThorinMeasure::empty()).atoms(), a.atoms());
    }

    #[test]
    fn scale_examples() {
        let a = ThorinMeasure::atom(1.0, 1.0).unwrap();
        assert_eq!(a.scale_rv(2.0).unwrap().atoms(), &[Atom { rate: 0.5, mass: 1.0 }]);
        assert_eq!(a.scale_rv(1.0).unwrap().atoms(), a.atoms());
        assert!(a.scale_rv(0.0).is_err());
        assert!(a.scale_rv(-1.0).is_err());
        // Hoyt from two scaled chi-square(1) variables: ½ log(1 + 2s) is
        // the atom (rate ½, mass ½); X = W₁²/(1+q²) + q² W₂²/(1+q²).
        let q: f64 = 0.5;
        let chi = ThorinMeasure::atom(0.5, 0.5).unwrap();
        let built = chi
            .scale_rv(1.0 / (1.0 + q * q))
            .unwrap()
            .add(&chi.scale_rv(q * q / (1.0 + q * q)).unwrap());
        let rates: Vec<f64> = built.atoms().iter().map(|a| a.rate).collect();
        assert!(close(rates[0], (1.0 + q * q) / 2.0, 1e-14));
        assert!(close(rates[1], (1.0 + q * q) / (2.0 * q * q), 1e-14));
        // continuous part: stable(½) scaled by c has exponent (c s)^½
        let st = ThorinMeasure::positive_stable(0.5).unwrap().scale_rv(4.0).unwrap();
        assert!((st.laplace_exponent(1.0).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn bernstein_examples() {
        // Rician K=2 Lévy density
        let k = 2.0;
        let rician = LevyMeasure::new(
            Density::new("rician", move |s: f64| (-(1.0 + k) * s).exp() * (k * (1.0 + k) + 1.0 / s)),
            0.0,
            0.0,
        )
        .unwrap();
        assert_eq!(rician.bernstein_eval(0.0).unwrap(), 0.0);
        for x in [0.01, 0.3, 1.0, 7.0, 100.0, 1e4] {
            let closed = k * x / (1.0 + k + x) + (x / (1.0 + k)).ln_1p();
            assert!((rician.bernstein_eval(x).unwrap() - closed).abs() < 1e-6 * closed.max(1.0));
        }
        // Frullani: e^(-s)/s reproduces log(1+x)
        let nak = LevyMeasure::new(Density::new("nakagami(1)", |s: f64| (-s).exp() / s), 0.0, 0.0).unwrap();
        assert!((nak.bernstein_eval(1.0).unwrap() - 2f64.ln()).abs() < 1e-9);
        // not a Lévy density: 1/s² near zero
        assert!(LevyMeasure::new(Density::new("bad", |s: f64| s.powi(-2)), 0.0, 0.0).is_err());
    }

    #[test]
    fn cm_examples() {
        let grid = CmGrid::default();
        assert!(is_completely_monotone(|x: f64| (-x).exp(), &grid).unwrap().passed());
        let v = is_completely_monotone(|x| x, &grid).unwrap();
        assert!(!v.passed());
        assert_eq!(v.witness.unwrap().order, 1);
        // s τ(s) for Rician K=2 increases near 0
        let v = is_completely_monotone(|s: f64| (-3.0 * s).exp() * (6.0 * s + 1.0), &grid).unwrap();
        let w = v.witness.expect("witness on failure");
        assert!(w.difference < 0.0);
        let first = CmGrid {
            hs: vec![1e-2],
            k_max: 1,
            ..CmGrid::default()
        };
        let w = is_completely_monotone(|s: f64| (-3.0 * s).exp() * (6.0 * s + 1.0), &first)
            .unwrap()
            .witness
            .unwrap();
        assert_eq!(w.order, 1);
        assert!(w.x < 1.0 / 6.0);
        assert!(is_completely_monotone(|x: f64| if x > 1.0 { f64::NAN } else { 1.0 }, &grid).is_err());
    }

    #[test]
    fn thorin_bernstein_examples() {
        let grid = CmGrid::default();
        for m in [0.5, 1.0, 3.0] {
            let nak = LevyMeasure::new(Density::new("nak", move |s: f64| m * (-m * s).exp() / s), 0.0, 0.0)
                .unwrap();
            assert!(nak.is_thorin_bernstein(&grid).unwrap().passed());
        }
    }

    #[test]
    fn density_must_satisfy_thorin_condition() {
        // ∫₁^∞ u⁻¹ · u^0 du diverges
        let r = ThorinMeasure::with_density(Density::new("flat", |_| 1.0));
        assert!(matches!(r, Err(Error::InvalidParameter { .. })));
        assert!(ThorinMeasure::atom(0.0, 1.0).is_err());
        assert!(ThorinMeasure::atom(1.0, -1.0).is_err());
        assert!(ThorinMeasure::atom(f64::INFINITY, 1.0).is_err());
    }
}
