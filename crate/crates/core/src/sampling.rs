//! Exact samplers, with optional exponentially tilted draws.
//!
//! [`Sampler::draw`] returns a plain variate. [`Sampler::draw_weighted`]
//! targets integrands of the form `E[g(X)]` with `g(x) ≲ e^(-λx)`: each
//! leaf with a density and finite diversity `D` is drawn from the defensive
//! mixture `½ f + ½ Gamma(D, λ)` and carries the likelihood ratio
//! `f / (½ f + ½ Gamma(D, λ))`, which is bounded by 2. Sums tilt every
//! branch, scalings pass `λ·c` down, and products tilt one factor with the
//! rate multiplied by the other factors' values. Positive stable leaves tilt
//! the exponential variable of Kanter's representation instead. Weighted
//! draws are unbiased for any `λ`.

use crate::channels::{ChannelModel, Family};
use crate::ext::Extended;
use crate::special::ln_gamma;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, StandardNormal};
use std::f64::consts::PI;

#[derive(Clone, Debug)]
enum Leaf {
    /// `scale · Gamma(shape, 1)`.
    Gamma { dist: Gamma<f64>, scale: f64 },
    /// `a W₁² + b W₂²`.
    Hoyt { a: f64, b: f64 },
    /// `|m + sd (N₁ + i N₂)|²`.
    Rician { m: f64, sd: f64 },
    Lognormal { mu: f64, sigma: f64 },
    /// `(Gamma(ε/r, 1) / c₂)^(1/r)`.
    GenGamma { dist: Gamma<f64>, c2: f64, inv_r: f64 },
    /// `(G₁ / G₂)^(1/r)`.
    Pareto { g1: Gamma<f64>, g2: Gamma<f64>, inv_r: f64 },
    Stable { r: f64 },
    Degenerate(f64),
}

impl Leaf {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Leaf::Gamma { dist, scale } => scale * dist.sample(rng),
            Leaf::Hoyt { a, b } => {
                let w1: f64 = StandardNormal.sample(rng);
                let w2: f64 = StandardNormal.sample(rng);
                a * w1 * w1 + b * w2 * w2
            }
            Leaf::Rician { m, sd } => {
                let n1: f64 = StandardNormal.sample(rng);
                let n2: f64 = StandardNormal.sample(rng);
                let re = m + sd * n1;
                let im = sd * n2;
                re * re + im * im
            }
            Leaf::Lognormal { mu, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                (mu + sigma * z).exp()
            }
            Leaf::GenGamma { dist, c2, inv_r } => ((dist.sample(rng) / c2).ln() * inv_r).exp(),
            Leaf::Pareto { g1, g2, inv_r } => {
                let (a, b) = (g1.sample(rng), g2.sample(rng));
                ((a.ln() - b.ln()) * inv_r).exp()
            }
            Leaf::Stable { r } => {
                if *r == 1.0 {
                    return 1.0;
                }
                // Kanter's representation: X = (A(U) / E)^((1-r)/r)
                let ln_a = kanter_ln_a(*r, rng);
                let e: f64 = Exp1.sample(rng);
                (((1.0 - r) / r) * (ln_a - e.ln())).exp()
            }
            Leaf::Degenerate(v) => *v,
        }
    }
}

/// `ln A(U)` for `U ~ Uniform(0, π)`, with
/// `A(u) = (sin(ru)/sin u)^(1/(1-r)) · sin((1-r)u) / sin(ru)`.
fn kanter_ln_a<R: Rng + ?Sized>(r: f64, rng: &mut R) -> f64 {
    let open: f64 = Open01.sample(rng);
    let u = PI * open;
    (r / (1.0 - r)) * (r * u).sin().ln() + ((1.0 - r) * u).sin().ln() - (1.0 / (1.0 - r)) * u.sin().ln()
}

/// Weighted stable draw. Given `U`, the conditional integrand
/// `e^(-e - λ (A/e)^(1/α))`, `α = r/(1-r)`, peaks at
/// `t = ((λ/α) A^(1/α))^(α/(α+1))` with width `σ = (tα/(α+1))^½`; `E` is
/// drawn from `½ Exp(1) + ½ Gamma` with the gamma part of mean `t` and
/// standard deviation `1.5σ`. The likelihood ratio of `E` is at most 2.
fn stable_weighted<R: Rng + ?Sized>(r: f64, rng: &mut R, lambda: f64) -> (f64, f64) {
    let alpha = r / (1.0 - r);
    let ln_a = kanter_ln_a(r, rng);
    let t = ((alpha / (alpha + 1.0)) * ((lambda / alpha).ln() + ln_a / alpha)).exp();
    let var = 2.25 * t * alpha / (alpha + 1.0);
    let (shape, scale) = (t * t / var, var / t);
    let from_target = rng.random::<f64>() < 0.5;
    let e: f64 = if from_target {
        Exp1.sample(rng)
    } else {
        scale * gamma_dist(shape).sample(rng)
    };
    let ln_q = (shape - 1.0) * e.ln() - e / scale - ln_gamma(shape) - shape * scale.ln();
    let w = 2.0 / (1.0 + (ln_q + e).exp());
    (((ln_a - e.ln()) / alpha).exp(), w)
}

#[derive(Clone, Debug)]
struct Tilt {
    shape: f64,
    unit: Gamma<f64>,
    ln_gamma_shape: f64,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf {
        leaf: Leaf,
        model: ChannelModel,
        tilt: Option<Tilt>,
    },
    Sum(Vec<Node>),
    Scale(f64, Box<Node>),
    Product {
        factors: Vec<Node>,
        tilted: Option<usize>,
    },
}

fn gamma_dist(shape: f64) -> Gamma<f64> {
    Gamma::new(shape, 1.0).expect("validated gamma shape")
}

impl Node {
    fn build(model: &ChannelModel) -> Node {
        let leaf = |leaf: Leaf| {
            let tilt = match (model.diversity(), model.is_leaf_with_pdf()) {
                (Extended::Finite(d), true) => Some(Tilt {
                    shape: d,
                    unit: gamma_dist(d),
                    ln_gamma_shape: ln_gamma(d),
                }),
                _ => None,
            };
            Node::Leaf {
                leaf,
                model: model.clone(),
                tilt,
            }
        };
        if let Some((shape, rate)) = model.as_gamma() {
            return leaf(Leaf::Gamma {
                dist: gamma_dist(shape),
                scale: 1.0 / rate,
            });
        }
        match model.family() {
            Family::Hoyt { q } => {
                let q2 = q * q;
                leaf(Leaf::Hoyt {
                    a: 1.0 / (1.0 + q2),
                    b: q2 / (1.0 + q2),
                })
            }
            Family::Rician { k } => leaf(Leaf::Rician {
                m: (k / (1.0 + k)).sqrt(),
                sd: (0.5 / (1.0 + k)).sqrt(),
            }),
            Family::Lognormal { mu, sigma } => leaf(Leaf::Lognormal { mu: *mu, sigma: *sigma }),
            Family::GenGamma { epsilon, r, c2 } => leaf(Leaf::GenGamma {
                dist: gamma_dist(epsilon / r),
                c2: *c2,
                inv_r: 1.0 / r,
            }),
            Family::Pareto { k1, k2, r } => leaf(Leaf::Pareto {
                g1: gamma_dist(*k1),
                g2: gamma_dist(*k2),
                inv_r: 1.0 / r,
            }),
            Family::Stable { r } => leaf(Leaf::Stable { r: *r }),
            Family::Degenerate { value } => leaf(Leaf::Degenerate(*value)),
            Family::Mrc { branches } => Node::Sum(branches.iter().map(Node::build).collect()),
            Family::Scaled { inner, factor } => Node::Scale(*factor, Box::new(Node::build(inner))),
            Family::Product { factors } => Node::product(factors.iter().collect()),
            Family::Composite { multipath, shadow } => Node::product(vec![multipath, shadow]),
            Family::Rayleigh | Family::Nakagami { .. } | Family::Gamma { .. } => unreachable!(),
        }
    }

    /// Tilts the tiltable factor of smallest diversity, which dominates the
    /// behaviour near zero.
    fn product(factors: Vec<&ChannelModel>) -> Node {
        let nodes: Vec<Node> = factors.iter().map(|f| Node::build(f)).collect();
        let tilted = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| nodes[*i].can_tilt())
            .map(|(i, f)| (i, f.diversity().finite().unwrap_or(f64::INFINITY)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i);
        Node::Product { factors: nodes, tilted }
    }

    fn can_tilt(&self) -> bool {
        match self {
            Node::Leaf { tilt, leaf, .. } => tilt.is_some() || matches!(leaf, Leaf::Stable { r } if *r < 1.0),
            Node::Sum(b) => b.iter().any(Node::can_tilt),
            Node::Scale(_, inner) => inner.can_tilt(),
            Node::Product { tilted, .. } => tilted.is_some(),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Node::Leaf { leaf, .. } => leaf.draw(rng),
            Node::Sum(b) => b.iter().map(|n| n.draw(rng)).sum(),
            Node::Scale(c, inner) => c * inner.draw(rng),
            Node::Product { factors, .. } => factors.iter().map(|n| n.draw(rng)).product(),
        }
    }

    fn draw_weighted<R: Rng + ?Sized>(&self, rng: &mut R, lambda: f64) -> (f64, f64) {
        match self {
            Node::Leaf { leaf, model, tilt } => match tilt {
                Some(t) if lambda > 0.0 && lambda.is_finite() => {
                    let from_target = rng.random::<f64>() < 0.5;
                    let x = if from_target {
                        leaf.draw(rng)
                    } else {
                        t.unit.sample(rng) / lambda
                    };
                    let ln_f = model.ln_pdf(x).unwrap_or(f64::NEG_INFINITY);
                    if ln_f == f64::NEG_INFINITY {
                        return (x, 0.0);
                    }
                    let ln_g = t.shape * lambda.ln() + (t.shape - 1.0) * x.ln() - lambda * x - t.ln_gamma_shape;
                    let w = 1.0 / (0.5 + 0.5 * (ln_g - ln_f).exp());
                    (x, w)
                }
                _ => match leaf {
                    Leaf::Stable { r } if *r < 1.0 && lambda > 0.0 && lambda.is_finite() => {
                        stable_weighted(*r, rng, lambda)
                    }
                    _ => (leaf.draw(rng), 1.0),
                },
            },
            Node::Sum(branches) => {
                let mut x = 0.0;
                let mut w = 1.0;
                for b in branches {
                    let (xb, wb) = b.draw_weighted(rng, lambda);
                    x += xb;
                    w *= wb;
                }
                (x, w)
            }
            Node::Scale(c, inner) => {
                let (x, w) = inner.draw_weighted(rng, lambda * c);
                (c * x, w)
            }
            Node::Product { factors, tilted } => match tilted {
                None => (self.draw(rng), 1.0),
                Some(k) => {
                    let mut rest = 1.0;
                    for (i, f) in factors.iter().enumerate() {
                        if i != *k {
                            rest *= f.draw(rng);
                        }
                    }
                    let (x, w) = factors[*k].draw_weighted(rng, lambda * rest);
                    (rest * x, w)
                }
            },
        }
    }
}

/// Reusable sampler for a [`ChannelModel`].
#[derive(Clone, Debug)]
pub struct Sampler {
    root: Node,
}

impl Sampler {
    pub fn new(model: &ChannelModel) -> Self {
        Sampler {
            root: Node::build(model),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.root.draw(rng)
    }

    /// A draw and its likelihood ratio, tuned for integrands decaying like
    /// `e^(-λx)`.
    pub fn draw_weighted<R: Rng + ?Sized>(&self, rng: &mut R, lambda: f64) -> (f64, f64) {
        self.root.draw_weighted(rng, lambda)
    }

    /// True when weighted draws differ from plain draws.
    pub fn is_tilted(&self) -> bool {
        self.root.can_tilt()
    }
}
