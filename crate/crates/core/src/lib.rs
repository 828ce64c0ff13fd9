//! Fading-channel power modelled as an infinitely divisible random variable,
//! with most of the usual fading laws living in the subclass of generalized
//! gamma convolutions (GGC).
//!
//! A GGC with Thorin measure `μ` has Laplace transform
//!
//! ```text
//! φ(s) = exp(-∫ log(1 + s/u) μ(du))
//! ```
//!
//! and the total mass of `μ` is the diversity order of the channel. Almost
//! every performance figure of interest (DPSK/MPSK symbol error rate, ergodic
//! capacity, outage, array gain, SNR gain between channels) can be written in
//! terms of `μ` or of the slowly varying factor `h` in the canonical density
//! `x^(D-1) h(x)`.
//!
//! Module map:
//!
//! - [`measures`]: Thorin and Lévy measures, Laplace exponents, numerical
//!   complete-monotonicity checks.
//! - [`channels`]: the fading zoo (Nakagami, Hoyt, Rician, lognormal,
//!   generalized gamma, Pareto, positive stable, products, composites).
//! - [`metrics`]: SER, capacity, outage, asymptotics, SNR gain.
//! - [`ordering`]: Laplace-transform and Shannon-transform order verdicts.
//! - [`systems`]: MRC and composite multipath/shadowing systems.
//! - [`simkit`]: seeded, thread-count-independent Monte-Carlo engine.
//! - [`config`]: declarative JSON/TOML channel and system specs.

pub mod channels;
pub mod config;
pub mod error;
pub mod ext;
pub mod mc;
pub mod measures;
pub mod metrics;
pub mod ordering;
pub mod quad;
pub mod sampling;
pub mod simkit;
pub mod special;
pub mod systems;

pub use channels::{ChannelModel, ClassTags, Family, Membership};
pub use error::{Error, Result};
pub use ext::Extended;
pub use measures::{Atom, CmVerdict, LevyMeasure, ThorinMeasure};
pub use metrics::{Estimate, McOptions, Method, Modulation};
pub use ordering::OrderVerdict;
pub use simkit::{SerCurve, SimConfig};
pub use systems::SystemModel;
