//! The fading zoo.
//!
//! A [`ChannelModel`] is a validated [`Family`] value. Every quantity that is
//! not known in closed form is reported as `None` (or an explicit error) so
//! callers can fall back to quadrature or sampling.

use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::measures::{Density, LevyMeasure, ThorinMeasure};
use crate::quad::{integrate, integrate_positive, integrate_positive_ext, PositiveIntegral, QuadOptions};
use crate::sampling::Sampler;
use crate::special::{
    bessel_i0e, beta_reg, gamma_lr, ln_beta, ln_gamma, normal_cdf,
};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl Membership {
    fn and(self, other: Membership) -> Membership {
        match (self, other) {
            (Membership::Yes, Membership::Yes) => Membership::Yes,
            (Membership::No, _) | (_, Membership::No) => Membership::No,
            _ => Membership::Unknown,
        }
    }
}

/// Membership in the nested classes HCM ⊂ GGC ⊂ ID.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTags {
    pub id: Membership,
    pub ggc: Membership,
    pub hcm: Membership,
}

impl ClassTags {
    pub const HCM: ClassTags = ClassTags::new(Membership::Yes, Membership::Yes, Membership::Yes);
    /// GGC but not HCM.
    pub const GGC_NOT_HCM: ClassTags = ClassTags::new(Membership::Yes, Membership::Yes, Membership::No);
    /// GGC; HCM membership not established.
    pub const GGC: ClassTags = ClassTags::new(Membership::Yes, Membership::Yes, Membership::Unknown);
    /// ID but not GGC.
    pub const ID_NOT_GGC: ClassTags = ClassTags::new(Membership::Yes, Membership::No, Membership::No);
    pub const ID: ClassTags = ClassTags::new(Membership::Yes, Membership::Unknown, Membership::Unknown);
    pub const NOT_ID: ClassTags = ClassTags::new(Membership::No, Membership::No, Membership::No);
    pub const UNKNOWN: ClassTags =
        ClassTags::new(Membership::Unknown, Membership::Unknown, Membership::Unknown);

    pub const fn new(id: Membership, ggc: Membership, hcm: Membership) -> Self {
        ClassTags { id, ggc, hcm }
    }

    /// `hcm ⟹ ggc ⟹ id`, and the contrapositive for `No`.
    pub fn is_consistent(&self) -> bool {
        use Membership::*;
        let up = |inner: Membership, outer: Membership| !(inner == Yes && outer != Yes);
        let down = |outer: Membership, inner: Membership| !(outer == No && inner != No);
        up(self.hcm, self.ggc) && up(self.ggc, self.id) && down(self.id, self.ggc) && down(self.ggc, self.hcm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Rayleigh,
    Nakagami {
        m: f64,
    },
    /// Shape/rate gamma law; not unit mean in general.
    Gamma {
        shape: f64,
        rate: f64,
    },
    Hoyt {
        q: f64,
    },
    Rician {
        #[serde(alias = "K")]
        k: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    /// Density `c₁ x^(ε-1) exp(-c₂ x^r)`.
    #[serde(rename = "gengamma", alias = "generalized_gamma")]
    GenGamma {
        epsilon: f64,
        r: f64,
        c2: f64,
    },
    /// Density `|r| x^(k₁r-1) (1+x^r)^-(k₁+k₂) / B(k₁,k₂)`.
    Pareto {
        k1: f64,
        k2: f64,
        r: f64,
    },
    /// One-sided stable law with `φ(s) = exp(-s^r)`.
    #[serde(alias = "positive_stable")]
    Stable {
        r: f64,
    },
    Degenerate {
        value: f64,
    },
    /// Product of independent factors.
    Product {
        factors: Vec<ChannelModel>,
    },
    /// Multipath power times independent shadowing power.
    Composite {
        multipath: Box<ChannelModel>,
        shadow: Box<ChannelModel>,
    },
    /// Sum of independent branch powers.
    Mrc {
        branches: Vec<ChannelModel>,
    },
    /// `factor · inner`.
    Scaled {
        inner: Box<ChannelModel>,
        factor: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelModel {
    family: Family,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {v}")))
    }
}

/// `ln(1 + x^r)` without overflow.
fn ln1p_pow(x: f64, r: f64) -> f64 {
    let t = r * x.ln();
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn divergent_moment(p: f64, what: &str) -> Error {
    Error::Domain(format!("moment of order {p} of {what} is infinite"))
}

impl ChannelModel {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Rayleigh => {}
            Family::Nakagami { m } => positive("m", *m)?,
            Family::Gamma { shape, rate } => {
                positive("shape", *shape)?;
                positive("rate", *rate)?;
            }
            Family::Hoyt { q } => {
                if !(*q > 0.0 && *q <= 1.0) {
                    return Err(Error::invalid("q", format!("must lie in (0, 1], got {q}")));
                }
            }
            Family::Rician { k } => {
                if !(k.is_finite() && *k >= 0.0) {
                    return Err(Error::invalid("K", format!("must be finite and >= 0, got {k}")));
                }
            }
            Family::Lognormal { mu, sigma } => {
                finite("mu", *mu)?;
                positive("sigma", *sigma)?;
            }
            Family::GenGamma { epsilon, r, c2 } => {
                finite("epsilon", *epsilon)?;
                finite("r", *r)?;
                if *r == 0.0 {
                    return Err(Error::invalid("r", "must be nonzero"));
                }
                positive("c2", *c2)?;
                if !(epsilon / r > 0.0) {
                    return Err(Error::invalid(
                        "epsilon",
                        format!("epsilon/r must be > 0, got {epsilon}/{r}"),
                    ));
                }
            }
            Family::Pareto { k1, k2, r } => {
                positive("k1", *k1)?;
                positive("k2", *k2)?;
                finite("r", *r)?;
                if *r == 0.0 || *r < -1.0 {
                    return Err(Error::invalid("r", format!("must lie in [-1, 0) or (0, ∞), got {r}")));
                }
            }
            Family::Stable { r } => {
                if !(*r > 0.0 && *r <= 1.0) {
                    return Err(Error::invalid("r", format!("must lie in (0, 1], got {r}")));
                }
            }
            Family::Degenerate { value } => positive("value", *value)?,
            Family::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::invalid("factors", "at least one factor is required"));
                }
            }
            Family::Composite { .. } => {}
            Family::Mrc { branches } => {
                if branches.is_empty() {
                    return Err(Error::invalid("branches", "at least one branch is required"));
                }
            }
            Family::Scaled { factor, .. } => positive("factor", *factor)?,
        }
        Ok(ChannelModel { family })
    }

    pub fn rayleigh() -> Self {
        ChannelModel {
            family: Family::Rayleigh,
        }
    }

    pub fn nakagami(m: f64) -> Result<Self> {
        Self::new(Family::Nakagami { m })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(Family::Gamma { shape, rate })
    }

    pub fn hoyt(q: f64) -> Result<Self> {
        Self::new(Family::Hoyt { q })
    }

    pub fn rician(k: f64) -> Result<Self> {
        Self::new(Family::Rician { k })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Lognormal { mu, sigma })
    }

    /// Lognormal with `E[X] = 1`, i.e. `mu = -σ²/2`.
    pub fn lognormal_unit_mean(sigma: f64) -> Result<Self> {
        Self::lognormal(-0.5 * sigma * sigma, sigma)
    }

    pub fn gen_gamma(epsilon: f64, r: f64, c2: f64) -> Result<Self> {
        Self::new(Family::GenGamma { epsilon, r, c2 })
    }

    pub fn pareto(k1: f64, k2: f64, r: f64) -> Result<Self> {
        Self::new(Family::Pareto { k1, k2, r })
    }

    pub fn stable(r: f64) -> Result<Self> {
        Self::new(Family::Stable { r })
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        Self::new(Family::Degenerate { value })
    }

    pub fn product(factors: Vec<ChannelModel>) -> Result<Self> {
        Self::new(Family::Product { factors })
    }

    pub fn composite(multipath: ChannelModel, shadow: ChannelModel) -> Result<Self> {
        Self::new(Family::Composite {
            multipath: Box::new(multipath),
            shadow: Box::new(shadow),
        })
    }

    pub fn mrc(branches: Vec<ChannelModel>) -> Result<Self> {
        Self::new(Family::Mrc { branches })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Shape and rate when the law is a gamma law.
    pub fn as_gamma(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Rayleigh => Some((1.0, 1.0)),
            Family::Nakagami { m } => Some((m, m)),
            Family::Gamma { shape, rate } => Some((shape, rate)),
            _ => None,
        }
    }

    /// Factors of a product-type law (`Product` or `Composite`).
    fn product_factors(&self) -> Option<Vec<&ChannelModel>> {
        match &self.family {
            Family::Product { factors } => Some(factors.iter().collect()),
            Family::Composite { multipath, shadow } => Some(vec![multipath, shadow]),
            _ => None,
        }
    }

    pub fn class_tags(&self) -> ClassTags {
        if self.as_gamma().is_some() {
            return ClassTags::HCM;
        }
        match &self.family {
            Family::Hoyt { q } if *q == 1.0 => ClassTags::HCM,
            Family::Hoyt { .. } => ClassTags::GGC_NOT_HCM,
            Family::Rician { k } if *k == 0.0 => ClassTags::HCM,
            Family::Rician { .. } => ClassTags::ID_NOT_GGC,
            Family::Lognormal { .. } => ClassTags::HCM,
            Family::GenGamma { r, .. } => {
                if r.abs() <= 1.0 {
                    ClassTags::HCM
                } else if *r > 1.0 {
                    // exp(-c x^r) tails with r > 1 are lighter than any
                    // nondegenerate infinitely divisible law allows
                    ClassTags::NOT_ID
                } else {
                    ClassTags::UNKNOWN
                }
            }
            Family::Pareto { r, .. } => {
                if r.abs() <= 1.0 {
                    ClassTags::HCM
                } else {
                    ClassTags::UNKNOWN
                }
            }
            Family::Stable { r } if *r == 1.0 => ClassTags::HCM,
            Family::Stable { .. } => ClassTags::GGC,
            Family::Degenerate { .. } => ClassTags::HCM,
            Family::Product { .. } | Family::Composite { .. } => {
                let tags: Vec<ClassTags> = self
                    .product_factors()
                    .unwrap()
                    .iter()
                    .map(|f| f.class_tags())
                    .collect();
                if tags.len() == 1 {
                    return tags[0];
                }
                let non_hcm: Vec<&ClassTags> = tags.iter().filter(|t| t.hcm != Membership::Yes).collect();
                match non_hcm.len() {
                    0 => ClassTags::HCM,
                    // a GGC times an independent HCM variable is a GGC
                    1 if non_hcm[0].ggc == Membership::Yes => ClassTags::GGC,
                    _ => ClassTags::UNKNOWN,
                }
            }
            Family::Mrc { branches } => {
                if branches.len() == 1 {
                    return branches[0].class_tags();
                }
                let id = branches.iter().fold(Membership::Yes, |acc, b| acc.and(b.class_tags().id));
                let ggc = branches.iter().fold(Membership::Yes, |acc, b| acc.and(b.class_tags().ggc));
                match (id, ggc) {
                    (_, Membership::Yes) => ClassTags::GGC,
                    (Membership::Yes, _) => ClassTags::ID,
                    _ => ClassTags::UNKNOWN,
                }
            }
            Family::Scaled { inner, .. } => inner.class_tags(),
            Family::Rayleigh | Family::Nakagami { .. } | Family::Gamma { .. } => unreachable!(),
        }
    }

    /// Diversity order: the exponent `D` in `P(X ≤ x) ≍ x^D` as `x → 0`.
    pub fn diversity(&self) -> Extended {
        if let Some((shape, _)) = self.as_gamma() {
            return Extended::Finite(shape);
        }
        match &self.family {
            Family::Hoyt { .. } | Family::Rician { .. } => Extended::Finite(1.0),
            Family::Lognormal { .. } | Family::Stable { .. } | Family::Degenerate { .. } => Extended::Infinite,
            Family::GenGamma { epsilon, r, .. } => {
                if *r > 0.0 {
                    Extended::Finite(*epsilon)
                } else {
                    Extended::Infinite
                }
            }
            Family::Pareto { k1, k2, r } => {
                if *r > 0.0 {
                    Extended::Finite(k1 * r)
                } else {
                    Extended::Finite(k2 * r.abs())
                }
            }
            Family::Product { .. } | Family::Composite { .. } => self
                .product_factors()
                .unwrap()
                .iter()
                .fold(Extended::Infinite, |acc, f| acc.min(f.diversity())),
            Family::Mrc { branches } => branches
                .iter()
                .fold(Extended::Finite(0.0), |acc, b| acc.add(b.diversity())),
            Family::Scaled { inner, .. } => inner.diversity(),
            Family::Rayleigh | Family::Nakagami { .. } | Family::Gamma { .. } => unreachable!(),
        }
    }

    /// Thorin measure when known; a domain error for laws that are not GGC.
    pub fn thorin(&self) -> Result<Option<ThorinMeasure>> {
        if self.class_tags().ggc == Membership::No {
            return Err(Error::Domain(format!("{} is not a GGC; it has no Thorin measure", self.label())));
        }
        if let Some((shape, rate)) = self.as_gamma() {
            return ThorinMeasure::atom(rate, shape).map(Some);
        }
        match &self.family {
            Family::Hoyt { q } => {
                let q2 = q * q;
                ThorinMeasure::from_atoms([(0.5 * (1.0 + q2), 0.5), (0.5 * (1.0 + q2) / q2, 0.5)]).map(Some)
            }
            Family::Rician { .. } => ThorinMeasure::atom(1.0, 1.0).map(Some),
            Family::Stable { r } if *r < 1.0 => ThorinMeasure::positive_stable(*r).map(Some),
            Family::Mrc { branches } => {
                let mut total = ThorinMeasure::empty();
                for b in branches {
                    match b.thorin()? {
                        Some(mu) => total = total.add(&mu),
                        None => return Ok(None),
                    }
                }
                Ok(Some(total))
            }
            Family::Scaled { inner, factor } => match inner.thorin()? {
                Some(mu) => mu.scale_rv(*factor).map(Some),
                None => Ok(None),
            },
            _ => Ok(None),
        }
    }

    /// Lévy density of the Laplace exponent, when known.
    pub fn levy(&self) -> Result<Option<LevyMeasure>> {
        match &self.family {
            Family::Rician { k } => {
                let k = *k;
                let d = Density::new(format!("rician(K={k})"), move |s: f64| {
                    (-(1.0 + k) * s).exp() * (k * (1.0 + k) + 1.0 / s)
                });
                LevyMeasure::new(d, 0.0, 0.0).map(Some)
            }
            Family::Scaled { inner, factor } => match inner.levy()? {
                Some(l) => {
                    let c = *factor;
                    let base = l.density().clone();
                    let d = Density::new(format!("{}∘(÷{c})", base.name()), move |s: f64| base.eval(s / c) / c);
                    LevyMeasure::new(d, l.drift(), l.linear() * c).map(Some)
                }
                None => Ok(None),
            },
            _ => match self.thorin() {
                // τ(s) = s⁻¹ ∫ e^(-us) μ(du) for an atomic Thorin measure
                Ok(Some(mu)) if mu.is_atomic() => {
                    let atoms = mu.atoms().to_vec();
                    let d = Density::new(format!("levy[{}]", self.label()), move |s: f64| {
                        atoms.iter().map(|a| a.mass * (-a.rate * s).exp()).sum::<f64>() / s
                    });
                    LevyMeasure::new(d, 0.0, 0.0).map(Some)
                }
                Ok(_) | Err(Error::Domain(_)) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }

    /// Closed-form Laplace transform `E[e^(-sX)]`, `s ≥ 0`.
    pub fn lt_closed(&self, s: f64) -> Option<f64> {
        if let Some((shape, rate)) = self.as_gamma() {
            return Some((-shape * (s / rate).ln_1p()).exp());
        }
        match &self.family {
            Family::Hoyt { q } => {
                let q2 = q * q;
                let (u1, u2) = (0.5 * (1.0 + q2), 0.5 * (1.0 + q2) / q2);
                Some((-0.5 * ((s / u1).ln_1p() + (s / u2).ln_1p())).exp())
            }
            Family::Rician { k } => {
                let a = 1.0 + k;
                Some(((a / (a + s)).ln() - k * s / (a + s)).exp())
            }
            Family::Stable { r } => Some((-s.powf(*r)).exp()),
            Family::Degenerate { value } => Some((-value * s).exp()),
            Family::Mrc { branches } => branches.iter().map(|b| b.lt_closed(s)).product(),
            Family::Scaled { inner, factor } => inner.lt_closed(factor * s),
            Family::Product { factors } if factors.len() == 1 => factors[0].lt_closed(s),
            _ => None,
        }
    }

    /// Laplace transform by closed form, or by quadrature against a known
    /// density; `None` when only sampling is available.
    pub fn laplace(&self, s: f64) -> Result<Option<f64>> {
        if !(s >= 0.0) {
            return Err(Error::invalid("s", format!("Laplace argument must be >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(Some(1.0));
        }
        if let Some(v) = self.lt_closed(s) {
            return Ok(Some(v));
        }
        if self.is_leaf_with_pdf() {
            let q = integrate_positive(|x| (-s * x).exp() * self.pdf(x).unwrap_or(0.0), QuadOptions::default())?;
            return Ok(Some(q.value));
        }
        match &self.family {
            Family::Mrc { branches } => {
                let mut acc = 1.0;
                for b in branches {
                    match b.laplace(s)? {
                        Some(v) => acc *= v,
                        None => return Ok(None),
                    }
                }
                Ok(Some(acc))
            }
            Family::Scaled { inner, factor } => inner.laplace(factor * s),
            Family::Product { .. } | Family::Composite { .. } => {
                let factors = self.product_factors().unwrap();
                match factors.as_slice() {
                    [one] => one.laplace(s),
                    [a, b] => {
                        // E[φ_A(s B)] with A having a closed transform
                        let (closed, other) = if a.lt_closed(1.0).is_some() {
                            (a, b)
                        } else if b.lt_closed(1.0).is_some() {
                            (b, a)
                        } else {
                            return Ok(None);
                        };
                        if let Family::Degenerate { value } = other.family {
                            return Ok(closed.lt_closed(s * value));
                        }
                        if other.pdf(1.0).is_none() {
                            return Ok(None);
                        }
                        let q = integrate_positive(
                            |y| match other.pdf(y) {
                                Some(f) if f > 0.0 => closed.lt_closed(s * y).unwrap_or(0.0) * f,
                                _ => 0.0,
                            },
                            QuadOptions::default(),
                        )?;
                        Ok(Some(q.value))
                    }
                    _ => Ok(None),
                }
            }
            _ => Ok(None),
        }
    }

    /// Families whose density is implemented directly.
    pub fn is_leaf_with_pdf(&self) -> bool {
        self.as_gamma().is_some()
            || matches!(
                self.family,
                Family::Hoyt { .. }
                    | Family::Rician { .. }
                    | Family::Lognormal { .. }
                    | Family::GenGamma { .. }
                    | Family::Pareto { .. }
            )
    }

    /// Log-density of leaf families; `-∞` outside the support.
    pub fn ln_pdf(&self, x: f64) -> Option<f64> {
        if !self.is_leaf_with_pdf() {
            return None;
        }
        if !(x > 0.0) || x.is_infinite() {
            return Some(f64::NEG_INFINITY);
        }
        let lx = x.ln();
        if let Some((a, b)) = self.as_gamma() {
            return Some(a * b.ln() + (a - 1.0) * lx - b * x - ln_gamma(a));
        }
        Some(match self.family {
            Family::Hoyt { q } => {
                let q2 = q * q;
                let a = (1.0 + q2).powi(2) / (4.0 * q2);
                let b = (1.0 - q2 * q2) / (4.0 * q2);
                ((1.0 + q2) / (2.0 * q)).ln() - (a - b) * x + bessel_i0e(b * x).ln()
            }
            Family::Rician { k } => {
                let z = 2.0 * (k * (1.0 + k) * x).sqrt();
                (1.0 + k).ln() - k - (1.0 + k) * x + z + bessel_i0e(z).ln()
            }
            Family::Lognormal { mu, sigma } => {
                let z = (lx - mu) / sigma;
                -lx - sigma.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * z * z
            }
            Family::GenGamma { epsilon, r, c2 } => {
                let a = epsilon / r;
                r.abs().ln() + a * c2.ln() - ln_gamma(a) + (epsilon - 1.0) * lx - c2 * (r * lx).exp()
            }
            Family::Pareto { k1, k2, r } => {
                r.abs().ln() - ln_beta(k1, k2) + (k1 * r - 1.0) * lx - (k1 + k2) * ln1p_pow(x, r)
            }
            _ => unreachable!(),
        })
    }

    /// Density at `x > 0`, when known.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        if let Some(l) = self.ln_pdf(x) {
            return Some(l.exp());
        }
        match &self.family {
            Family::Scaled { inner, factor } => inner.pdf(x / factor).map(|f| f / factor),
            Family::Mrc { branches } if branches.len() == 1 => branches[0].pdf(x),
            Family::Product { factors } if factors.len() == 1 => factors[0].pdf(x),
            _ => None,
        }
    }

    /// Distribution function, when known in closed form or by a single
    /// quadrature of the density.
    pub fn cdf(&self, x: f64) -> Result<Option<f64>> {
        if x <= 0.0 {
            return Ok(Some(0.0));
        }
        if x.is_infinite() {
            return Ok(Some(1.0));
        }
        if let Some((a, b)) = self.as_gamma() {
            return Ok(Some(gamma_lr(a, b * x)));
        }
        match &self.family {
            Family::Hoyt { .. } | Family::Rician { .. } => {
                // the density is bounded, so direct quadrature is fine
                let q = integrate(|t| self.pdf(t).unwrap_or(0.0), 0.0, x, QuadOptions::default())?;
                Ok(Some(q.value.min(1.0)))
            }
            Family::Lognormal { mu, sigma } => Ok(Some(normal_cdf((x.ln() - mu) / sigma))),
            Family::GenGamma { epsilon, r, c2 } => {
                let p = gamma_lr(epsilon / r, c2 * (r * x.ln()).exp());
                Ok(Some(if *r > 0.0 { p } else { 1.0 - p }))
            }
            Family::Pareto { k1, k2, r } => {
                // V = X^r follows a beta-prime law; V/(1+V) is Beta(k1, k2)
                let t = 1.0 / (1.0 + (-r * x.ln()).exp());
                let p = beta_reg(*k1, *k2, t);
                Ok(Some(if *r > 0.0 { p } else { 1.0 - p }))
            }
            Family::Degenerate { value } => Ok(Some(if x >= *value { 1.0 } else { 0.0 })),
            Family::Scaled { inner, factor } => inner.cdf(x / factor),
            Family::Mrc { branches } if branches.len() == 1 => branches[0].cdf(x),
            Family::Product { factors } if factors.len() == 1 => factors[0].cdf(x),
            _ => Ok(None),
        }
    }

    fn finite_diversity(&self, what: &str) -> Result<f64> {
        match self.diversity() {
            Extended::Finite(d) => Ok(d),
            Extended::Infinite => Err(Error::Domain(format!(
                "{what} requires finite diversity; {} has infinite diversity",
                self.label()
            ))),
        }
    }

    /// Slowly varying factor `h` in the density `x^(D-1) h(x)`.
    pub fn h_function(&self, x: f64) -> Result<Option<f64>> {
        let d = self.finite_diversity("h(x)")?;
        if let Some((a, b)) = self.as_gamma() {
            return Ok(Some((a * b.ln() - b * x - ln_gamma(a)).exp()));
        }
        match &self.family {
            // D = 1, so h is the density itself, continuous at 0
            Family::Hoyt { .. } | Family::Rician { .. } => Ok(self.pdf(x.max(f64::MIN_POSITIVE))),
            Family::GenGamma { epsilon, r, c2 } => {
                let a = epsilon / r;
                Ok(Some((r.abs().ln() + a * c2.ln() - ln_gamma(a) - c2 * x.powf(*r)).exp()))
            }
            Family::Pareto { k1, k2, r } => {
                Ok(Some((r.abs().ln() - ln_beta(*k1, *k2) - (k1 + k2) * ln1p_pow(x, r.abs())).exp()))
            }
            Family::Scaled { inner, factor } => {
                Ok(inner.h_function(x / factor)?.map(|h| h * factor.powf(-d)))
            }
            Family::Mrc { branches } if branches.len() == 1 => branches[0].h_function(x),
            Family::Product { factors } if factors.len() == 1 => factors[0].h_function(x),
            _ => Ok(None),
        }
    }

    /// `h(0+)`; `Ok(None)` when it cannot be determined.
    pub fn h0(&self) -> Result<Option<Extended>> {
        let d = self.finite_diversity("h(0+)")?;
        if self.is_leaf_with_pdf() {
            return Ok(self.h_function(0.0)?.map(Extended::Finite));
        }
        match &self.family {
            Family::Scaled { inner, factor } => Ok(inner.h0()?.map(|h| match h {
                Extended::Finite(v) => Extended::Finite(v * factor.powf(-d)),
                Extended::Infinite => Extended::Infinite,
            })),
            Family::Mrc { branches } => {
                // the density of a sum near 0 is the convolution of the
                // leading power terms: Π h_i Γ(D_i) / Γ(Σ D_i)
                let mut ln_acc = -ln_gamma(d);
                for b in branches {
                    let db = b.finite_diversity("h(0+)")?;
                    match b.h0()? {
                        Some(Extended::Finite(h)) => ln_acc += h.ln() + ln_gamma(db),
                        Some(Extended::Infinite) => return Ok(Some(Extended::Infinite)),
                        None => return Ok(None),
                    }
                }
                Ok(Some(Extended::Finite(ln_acc.exp())))
            }
            Family::Product { .. } | Family::Composite { .. } => {
                // P(XY ≤ x) ≈ h_X(0+) E[Y^-D] x^D / D for the factor X with
                // the unique smallest diversity
                let factors = self.product_factors().unwrap();
                let tied = factors.iter().filter(|f| f.diversity() == Extended::Finite(d)).count();
                if tied > 1 {
                    return Ok(Some(Extended::Infinite));
                }
                let mut acc = 1.0;
                for f in &factors {
                    if f.diversity() == Extended::Finite(d) {
                        match f.h0()? {
                            Some(Extended::Finite(h)) => acc *= h,
                            other => return Ok(other),
                        }
                    } else {
                        match f.moment(-d) {
                            Ok(Some(m)) => acc *= m,
                            Ok(None) => return Ok(None),
                            Err(Error::Domain(_)) => return Ok(Some(Extended::Infinite)),
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(Some(Extended::Finite(acc)))
            }
            _ => Ok(None),
        }
    }

    /// `E[X^p]` for real `p`. A domain error reports an infinite moment;
    /// `Ok(None)` means no evaluation path is available.
    pub fn moment(&self, p: f64) -> Result<Option<f64>> {
        if p == 0.0 {
            return Ok(Some(1.0));
        }
        if let Some((a, b)) = self.as_gamma() {
            if a + p <= 0.0 {
                return Err(divergent_moment(p, &self.label()));
            }
            if p == 1.0 {
                return Ok(Some(a / b));
            }
            return Ok(Some((ln_gamma(a + p) - ln_gamma(a) - p * b.ln()).exp()));
        }
        match &self.family {
            Family::Hoyt { .. } | Family::Rician { .. } if p == 1.0 => Ok(Some(1.0)),
            Family::Hoyt { .. } | Family::Rician { .. } => {
                if p <= -1.0 {
                    return Err(divergent_moment(p, &self.label()));
                }
                match integrate_positive_ext(|x| x.powf(p) * self.pdf(x).unwrap_or(0.0), QuadOptions::default())? {
                    PositiveIntegral::Finite(q) => Ok(Some(q.value)),
                    PositiveIntegral::Divergent => Err(divergent_moment(p, &self.label())),
                }
            }
            Family::Lognormal { mu, sigma } => Ok(Some((p * mu + 0.5 * p * p * sigma * sigma).exp())),
            Family::GenGamma { epsilon, r, c2 } => {
                let a = (epsilon + p) / r;
                if a <= 0.0 {
                    return Err(divergent_moment(p, &self.label()));
                }
                Ok(Some((ln_gamma(a) - ln_gamma(epsilon / r) - (p / r) * c2.ln()).exp()))
            }
            Family::Pareto { k1, k2, r } => {
                let (a, b) = (k1 + p / r, k2 - p / r);
                if a <= 0.0 || b <= 0.0 {
                    return Err(divergent_moment(p, &self.label()));
                }
                Ok(Some((ln_gamma(a) + ln_gamma(b) - ln_gamma(*k1) - ln_gamma(*k2)).exp()))
            }
            Family::Stable { r } => {
                if *r == 1.0 {
                    return Ok(Some(1.0));
                }
                if p >= *r {
                    return Err(divergent_moment(p, &self.label()));
                }
                Ok(Some((ln_gamma(1.0 - p / r) - ln_gamma(1.0 - p)).exp()))
            }
            Family::Degenerate { value } => Ok(Some(value.powf(p))),
            Family::Product { .. } | Family::Composite { .. } => {
                let mut acc = 1.0;
                for f in self.product_factors().unwrap() {
                    match f.moment(p)? {
                        Some(m) => acc *= m,
                        None => return Ok(None),
                    }
                }
                Ok(Some(acc))
            }
            Family::Mrc { branches } => {
                if branches.len() == 1 {
                    return branches[0].moment(p);
                }
                if p != 1.0 {
                    return Ok(None);
                }
                let mut acc = 0.0;
                for b in branches {
                    match b.moment(1.0)? {
                        Some(m) => acc += m,
                        None => return Ok(None),
                    }
                }
                Ok(Some(acc))
            }
            Family::Scaled { inner, factor } => Ok(inner.moment(p)?.map(|m| m * factor.powf(p))),
            Family::Rayleigh | Family::Nakagami { .. } | Family::Gamma { .. } => unreachable!(),
        }
    }

    /// `E[X]`.
    pub fn mean(&self) -> Result<f64> {
        match self.moment(1.0) {
            Ok(Some(m)) => Ok(m),
            Ok(None) => Err(Error::MeanUndefined(format!("no mean available for {}", self.label()))),
            Err(Error::Domain(msg)) => Err(Error::MeanUndefined(msg)),
            Err(e) => Err(e),
        }
    }

    /// Law of `cX`; the scale is folded into the parameters when the family
    /// has a scale parameter.
    pub fn scale(&self, c: f64) -> Result<ChannelModel> {
        positive("c", c)?;
        if c == 1.0 {
            return Ok(self.clone());
        }
        if let Some((shape, rate)) = self.as_gamma() {
            return Self::gamma(shape, rate / c);
        }
        match &self.family {
            Family::Lognormal { mu, sigma } => Self::lognormal(mu + c.ln(), *sigma),
            Family::GenGamma { epsilon, r, c2 } => Self::gen_gamma(*epsilon, *r, c2 * c.powf(-r)),
            Family::Degenerate { value } => Self::degenerate(value * c),
            Family::Mrc { branches } => Self::mrc(branches.iter().map(|b| b.scale(c)).collect::<Result<_>>()?),
            Family::Scaled { inner, factor } => {
                let f = factor * c;
                if (f - 1.0).abs() <= 1e-15 {
                    Ok((**inner).clone())
                } else {
                    Self::new(Family::Scaled {
                        inner: inner.clone(),
                        factor: f,
                    })
                }
            }
            _ => Self::new(Family::Scaled {
                inner: Box::new(self.clone()),
                factor: c,
            }),
        }
    }

    /// Rescaled law with `E[X] = 1`.
    pub fn normalize_unit_power(&self) -> Result<ChannelModel> {
        let m = self.mean()?;
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::MeanUndefined(format!("mean of {} is {m}", self.label())));
        }
        if m == 1.0 {
            return Ok(self.clone());
        }
        self.scale(1.0 / m)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self)
    }

    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let s = self.sampler();
        (0..n).map(|_| s.draw(rng)).collect()
    }

    /// Short human-readable label, e.g. `nakagami(m=2)`.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Rayleigh => "rayleigh".into(),
            Family::Nakagami { m } => format!("nakagami(m={m})"),
            Family::Gamma { shape, rate } => format!("gamma(shape={shape}, rate={rate})"),
            Family::Hoyt { q } => format!("hoyt(q={q})"),
            Family::Rician { k } => format!("rician(K={k})"),
            Family::Lognormal { mu, sigma } => format!("lognormal(mu={mu}, sigma={sigma})"),
            Family::GenGamma { epsilon, r, c2 } => format!("gengamma(epsilon={epsilon}, r={r}, c2={c2})"),
            Family::Pareto { k1, k2, r } => format!("pareto(k1={k1}, k2={k2}, r={r})"),
            Family::Stable { r } => format!("stable(r={r})"),
            Family::Degenerate { value } => format!("degenerate({value})"),
            Family::Product { factors } => {
                format!("product[{}]", factors.iter().map(|f| f.label()).collect::<Vec<_>>().join(" × "))
            }
            Family::Composite { multipath, shadow } => {
                format!("composite[{} × {}]", multipath.label(), shadow.label())
            }
            Family::Mrc { branches } => {
                format!("mrc[{}]", branches.iter().map(|b| b.label()).collect::<Vec<_>>().join(" + "))
            }
            Family::Scaled { inner, factor } => format!("{factor}·{}", inner.label()),
        }
    }
}

impl Serialize for ChannelModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.family.serialize(s)
    }
}

/// Accepts a family object plus an optional `"normalize": bool` flag, which
/// is applied after validation.
impl<'de> Deserialize<'de> for ChannelModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut value = serde_json::Value::deserialize(d)?;
        let normalize = match value.as_object_mut().and_then(|o| o.remove("normalize")) {
            None => false,
            Some(serde_json::Value::Bool(b)) => b,
            Some(other) => {
                return Err(D::Error::custom(format!(
                    "invalid parameter `normalize`: expected a boolean, got {other}"
                )))
            }
        };
        let family = Family::deserialize(value).map_err(D::Error::custom)?;
        let model = ChannelModel::new(family).map_err(D::Error::custom)?;
        if normalize {
            model.normalize_unit_power().map_err(D::Error::custom)
        } else {
            Ok(model)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn class_examples() {
        assert_eq!(ChannelModel::rician(3.0).unwrap().class_tags(), ClassTags::ID_NOT_GGC);
        assert_eq!(ChannelModel::hoyt(0.5).unwrap().class_tags(), ClassTags::GGC_NOT_HCM);
        assert_eq!(ChannelModel::pareto(1.0, 1.0, 0.5).unwrap().class_tags(), ClassTags::HCM);
        assert_eq!(ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap().class_tags(), ClassTags::NOT_ID);
        let comp = ChannelModel::composite(
            ChannelModel::hoyt(0.5).unwrap(),
            ChannelModel::lognormal_unit_mean(1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(comp.class_tags(), ClassTags::GGC);
    }

    #[test]
    fn diversity_examples() {
        assert_eq!(ChannelModel::pareto(1.0, 1.0, 1.25).unwrap().diversity(), Extended::Finite(1.25));
        assert_eq!(ChannelModel::pareto(1.0, 3.0, -0.5).unwrap().diversity(), Extended::Finite(1.5));
        assert_eq!(ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap().diversity(), Extended::Finite(2.0));
        assert_eq!(ChannelModel::gen_gamma(-2.0, -1.0, 1.0).unwrap().diversity(), Extended::Infinite);
        assert_eq!(ChannelModel::rician(5.0).unwrap().diversity(), Extended::Finite(1.0));
        assert_eq!(ChannelModel::lognormal(0.0, 1.0).unwrap().diversity(), Extended::Infinite);
        let mrc = ChannelModel::mrc(vec![ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(); 2]).unwrap();
        assert_eq!(mrc.diversity(), Extended::Finite(2.5));
    }

    #[test]
    fn thorin_examples() {
        let mu = ChannelModel::nakagami(3.0).unwrap().thorin().unwrap().unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert_eq!((mu.atoms()[0].rate, mu.atoms()[0].mass), (3.0, 3.0));
        let h = ChannelModel::hoyt(1.0).unwrap().thorin().unwrap().unwrap();
        assert_eq!((h.atoms().len(), h.atoms()[0].rate, h.atoms()[0].mass), (1, 1.0, 1.0));
        let st = ChannelModel::stable(0.25).unwrap().thorin().unwrap().unwrap();
        let c = 0.25 * (PI / 4.0).sin() / PI;
        assert!(rel(st.density().unwrap().eval(2.0), c * 2f64.powf(-0.75)) < 1e-15);
        assert!(matches!(ChannelModel::rician(2.0).unwrap().thorin(), Err(Error::Domain(_))));
        assert!(ChannelModel::lognormal(0.0, 1.0).unwrap().thorin().unwrap().is_none());
    }

    #[test]
    fn levy_examples() {
        let l0 = ChannelModel::rician(0.0).unwrap().levy().unwrap().unwrap();
        assert!(rel(l0.density().eval(0.7), (-0.7f64).exp() / 0.7) < 1e-15);
        let l2 = ChannelModel::rician(2.0).unwrap().levy().unwrap().unwrap();
        assert!(rel(l2.density().eval(0.7), (-2.1f64).exp() * (6.0 + 1.0 / 0.7)) < 1e-15);
        let n1 = ChannelModel::nakagami(1.0).unwrap().levy().unwrap().unwrap();
        assert!((n1.bernstein_eval(3.0).unwrap() - 4f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn lt_examples() {
        assert!(rel(ChannelModel::rician(0.0).unwrap().lt_closed(1.0).unwrap(), 0.5) < 1e-15);
        assert!(rel(ChannelModel::nakagami(2.0).unwrap().lt_closed(2.0).unwrap(), 0.25) < 1e-15);
        let hoyt = ChannelModel::hoyt(0.5).unwrap().lt_closed(1.0).unwrap();
        assert!(rel(hoyt, (2.6f64 * 1.4).powf(-0.5)) < 1e-14);
        assert!((hoyt - 0.524142).abs() < 1e-6);
    }

    #[test]
    fn pdf_examples() {
        assert!(rel(ChannelModel::gamma(2.0, 2.0).unwrap().pdf(1.0).unwrap(), 4.0 * (-2f64).exp()) < 1e-14);
        assert!(rel(ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap().pdf(1.0).unwrap(), 2.0 * (-1f64).exp()) < 1e-14);
        assert!(rel(ChannelModel::pareto(1.0, 1.0, 1.0).unwrap().pdf(1.0).unwrap(), 0.25) < 1e-14);
        assert!(ChannelModel::stable(0.5).unwrap().pdf(1.0).is_none());
    }

    #[test]
    fn pdf_integrates_to_one() {
        for m in [
            ChannelModel::nakagami(0.7).unwrap(),
            ChannelModel::hoyt(0.3).unwrap(),
            ChannelModel::rician(4.0).unwrap(),
            ChannelModel::lognormal(0.3, 1.2).unwrap(),
            ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
            ChannelModel::gen_gamma(1.5, 0.5, 2.0).unwrap(),
            ChannelModel::gen_gamma(-1.5, -0.5, 2.0).unwrap(),
            ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(),
            ChannelModel::pareto(2.0, 0.5, -0.7).unwrap(),
        ] {
            let q = integrate_positive(|x| m.pdf(x).unwrap(), QuadOptions::default()).unwrap();
            assert!((q.value - 1.0).abs() < 1e-6, "{}: {}", m.label(), q.value);
        }
    }

    #[test]
    fn h_function_matches_pdf() {
        for m in [
            ChannelModel::nakagami(2.0).unwrap(),
            ChannelModel::hoyt(0.4).unwrap(),
            ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
            ChannelModel::pareto(1.0, 2.0, 1.25).unwrap(),
            ChannelModel::pareto(1.0, 2.0, -0.5).unwrap(),
            ChannelModel::nakagami(2.0).unwrap().scale(3.0).unwrap(),
            ChannelModel::pareto(1.0, 1.0, 1.25).unwrap().scale(0.3).unwrap(),
        ] {
            let d: f64 = m.diversity().to_f64();
            for x in [1e-4f64, 0.1, 1.0, 5.0] {
                let lhs = x.powf(d - 1.0) * m.h_function(x).unwrap().unwrap();
                assert!(rel(lhs, m.pdf(x).unwrap()) < 1e-9, "{} at {x}", m.label());
            }
        }
        let n2 = ChannelModel::nakagami(2.0).unwrap();
        assert!(rel(n2.h0().unwrap().unwrap().to_f64(), 4.0) < 1e-14);
        let gg = ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap();
        assert!(rel(gg.h0().unwrap().unwrap().to_f64(), 2.0) < 1e-14);
        let r = ChannelModel::rayleigh();
        assert!(rel(r.h_function(0.3).unwrap().unwrap(), (-0.3f64).exp()) < 1e-15);
        assert!(ChannelModel::lognormal(0.0, 1.0).unwrap().h_function(1.0).is_err());
    }

    #[test]
    fn mrc_h0_matches_thorin() {
        let mrc = ChannelModel::mrc(vec![
            ChannelModel::nakagami(2.0).unwrap(),
            ChannelModel::gamma(1.5, 0.5).unwrap(),
        ])
        .unwrap();
        let via_thorin = mrc.thorin().unwrap().unwrap().h_zero().unwrap().to_f64();
        assert!(rel(mrc.h0().unwrap().unwrap().to_f64(), via_thorin) < 1e-12);
    }

    #[test]
    fn moments_and_normalization() {
        let gg = ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap();
        assert!((gg.mean().unwrap() - 0.886_226_925_452_758).abs() < 1e-12);
        let n = gg.normalize_unit_power().unwrap();
        assert!((n.mean().unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(n.family(), Family::GenGamma { .. }));
        let p = ChannelModel::pareto(1.0, 1.0, 1.25).unwrap();
        let np = p.normalize_unit_power().unwrap();
        assert!((np.mean().unwrap() - 1.0).abs() < 1e-12);
        // numerical moment integral as an independent check
        let q = integrate_positive(|x| x * p.pdf(x).unwrap(), QuadOptions::default()).unwrap();
        assert!(rel(q.value, p.mean().unwrap()) < 1e-6);
        let heavy = ChannelModel::pareto(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(heavy.normalize_unit_power(), Err(Error::MeanUndefined(_))));
        assert!(matches!(ChannelModel::stable(0.5).unwrap().mean(), Err(Error::MeanUndefined(_))));
        let nak = ChannelModel::nakagami(2.5).unwrap();
        assert_eq!(nak.normalize_unit_power().unwrap(), nak);
    }

    #[test]
    fn cdf_matches_pdf_integral() {
        for m in [
            ChannelModel::nakagami(2.0).unwrap(),
            ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
            ChannelModel::gen_gamma(-1.5, -0.5, 2.0).unwrap(),
            ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(),
            ChannelModel::pareto(2.0, 0.5, -0.7).unwrap(),
            ChannelModel::lognormal(0.1, 0.8).unwrap(),
        ] {
            for x in [0.05, 0.7, 3.0] {
                // t = x e^(-w) maps (0, x] onto w ∈ [0, ∞)
                let q = integrate_positive(
                    |w| {
                        let t = x * (-w).exp();
                        t * m.pdf(t).unwrap()
                    },
                    QuadOptions::default(),
                )
                .unwrap();
                let c = m.cdf(x).unwrap().unwrap();
                assert!((c - q.value).abs() < 1e-6, "{} at {x}: {c} vs {}", m.label(), q.value);
            }
        }
    }

    #[test]
    fn numerical_laplace_matches_closed_form() {
        let g = ChannelModel::gamma(2.0, 3.0).unwrap();
        for s in [0.1, 1.0, 30.0] {
            let q = integrate_positive(|x| (-s * x).exp() * g.pdf(x).unwrap(), QuadOptions::default()).unwrap();
            assert!(rel(q.value, g.lt_closed(s).unwrap()) < 1e-8);
        }
        // composite with a degenerate shadow reduces to the multipath law
        let c = ChannelModel::composite(ChannelModel::nakagami(2.0).unwrap(), ChannelModel::degenerate(1.0).unwrap())
            .unwrap();
        assert!(rel(c.laplace(3.0).unwrap().unwrap(), (1.0f64 + 1.5).powi(-2)) < 1e-14);
        // Rayleigh × Gamma(2,2) shadow: E[1/(1 + sY)] by quadrature
        let c = ChannelModel::composite(ChannelModel::rayleigh(), ChannelModel::nakagami(2.0).unwrap()).unwrap();
        let direct = integrate_positive(
            |y| 4.0 * y * (-2.0 * y).exp() / (1.0 + 2.0 * y),
            QuadOptions::default(),
        )
        .unwrap();
        assert!(rel(c.laplace(2.0).unwrap().unwrap(), direct.value) < 1e-8);
    }

    #[test]
    fn composite_h0_rule() {
        // Rayleigh × Gamma(2,2): h(0+) = 1 · E[Y^-1] = 2/(2-1) = 2
        let c = ChannelModel::composite(ChannelModel::rayleigh(), ChannelModel::nakagami(2.0).unwrap()).unwrap();
        assert!(rel(c.h0().unwrap().unwrap().to_f64(), 2.0) < 1e-14);
        // tied diversity: logarithmic factor, h(0+) = ∞
        let t = ChannelModel::composite(ChannelModel::rayleigh(), ChannelModel::rayleigh()).unwrap();
        assert_eq!(t.h0().unwrap(), Some(Extended::Infinite));
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let cases: Vec<(Result<ChannelModel>, &str)> = vec![
            (ChannelModel::nakagami(0.0), "m"),
            (ChannelModel::hoyt(1.5), "q"),
            (ChannelModel::rician(-1.0), "K"),
            (ChannelModel::lognormal(0.0, 0.0), "sigma"),
            (ChannelModel::gen_gamma(2.0, -1.0, 1.0), "epsilon"),
            (ChannelModel::gen_gamma(2.0, 1.0, 0.0), "c2"),
            (ChannelModel::pareto(1.0, 1.0, 0.0), "r"),
            (ChannelModel::stable(1.5), "r"),
            (ChannelModel::mrc(vec![]), "branches"),
        ];
        for (r, field) in cases {
            match r {
                Err(Error::InvalidParameter { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected invalid `{field}`, got {other:?}"),
            }
        }
    }

    #[test]
    fn serde_round_trip_and_flags() {
        let m: ChannelModel = serde_json::from_str(r#"{"family":"nakagami","m":2.5}"#).unwrap();
        assert_eq!(m, ChannelModel::nakagami(2.5).unwrap());
        let gg: ChannelModel = serde_json::from_str(r#"{"family":"gengamma","epsilon":2,"r":2,"c2":1,"normalize":true}"#).unwrap();
        assert!((gg.mean().unwrap() - 1.0).abs() < 1e-12);
        let back: ChannelModel = serde_json::from_str(&serde_json::to_string(&gg).unwrap()).unwrap();
        assert_eq!(back, gg);
        let e = serde_json::from_str::<ChannelModel>(r#"{"family":"nakagami","mm":2}"#).unwrap_err();
        assert!(e.to_string().contains("mm"), "{e}");
        let e = serde_json::from_str::<ChannelModel>(r#"{"family":"hoyt","q":2}"#).unwrap_err();
        assert!(e.to_string().contains("`q`"), "{e}");
        let r: ChannelModel = serde_json::from_str(r#"{"family":"rayleigh"}"#).unwrap();
        assert_eq!(r, ChannelModel::rayleigh());
    }
}
