//! Multi-variable systems: MRC combining and composite multipath/shadowing.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::ordering::nakagami_benchmark;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq)]
pub enum SystemKind {
    Mrc { branches: Vec<ChannelModel> },
    Composite { multipath: ChannelModel, shadow: ChannelModel },
}

/// A system and its end-to-end channel.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemModel {
    kind: SystemKind,
    channel: ChannelModel,
}

impl SystemModel {
    /// MRC over independent branches: the end-to-end power is the sum of
    /// branch powers and the Thorin measure the sum of branch measures.
    pub fn mrc(branches: Vec<ChannelModel>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::invalid("branches", "at least one branch is required"));
        }
        let channel = if branches.len() == 1 {
            branches[0].clone()
        } else {
            ChannelModel::mrc(branches.clone())?
        };
        Ok(SystemModel {
            kind: SystemKind::Mrc { branches },
            channel,
        })
    }

    /// MRC with every branch scaled by the same factor so that the combined
    /// power has unit mean.
    pub fn mrc_unit_power(branches: Vec<ChannelModel>) -> Result<Self> {
        let total: f64 = branches.iter().map(|b| b.mean()).sum::<Result<f64>>()?;
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::MeanUndefined(format!("combined mean is {total}")));
        }
        let scaled = branches
            .iter()
            .map(|b| b.scale(1.0 / total))
            .collect::<Result<Vec<_>>>()?;
        Self::mrc(scaled)
    }

    /// Product of independent multipath and shadowing powers, each
    /// normalized to unit mean first.
    pub fn composite(multipath: ChannelModel, shadow: ChannelModel) -> Result<Self> {
        let multipath = multipath.normalize_unit_power()?;
        let shadow = shadow.normalize_unit_power()?;
        let channel = ChannelModel::composite(multipath.clone(), shadow.clone())?;
        Ok(SystemModel {
            kind: SystemKind::Composite { multipath, shadow },
            channel,
        })
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// End-to-end channel.
    pub fn channel(&self) -> &ChannelModel {
        &self.channel
    }

    pub fn diversity(&self) -> Extended {
        self.channel.diversity()
    }

    /// Nakagami(`m = D`) benchmark for a unit-mean system of finite
    /// diversity `D`.
    pub fn benchmark(&self) -> Result<ChannelModel> {
        let mean = self.channel.mean()?;
        if (mean - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("benchmark needs unit mean, system mean is {mean}")));
        }
        nakagami_benchmark(self.diversity())
    }
}

/// Declarative form, e.g. `{"system":"mrc","branches":[...],"normalize":true}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Mrc {
        branches: Vec<ChannelModel>,
        /// Scale branches so the combined power has unit mean.
        #[serde(default)]
        normalize: bool,
    },
    Composite {
        multipath: ChannelModel,
        shadow: ChannelModel,
    },
}

impl SystemSpec {
    pub fn build(self) -> Result<SystemModel> {
        match self {
            SystemSpec::Mrc { branches, normalize } => {
                if normalize {
                    SystemModel::mrc_unit_power(branches)
                } else {
                    SystemModel::mrc(branches)
                }
            }
            SystemSpec::Composite { multipath, shadow } => SystemModel::composite(multipath, shadow),
        }
    }
}

impl SystemModel {
    pub fn to_spec(&self) -> SystemSpec {
        match &self.kind {
            SystemKind::Mrc { branches } => SystemSpec::Mrc {
                branches: branches.clone(),
                normalize: false,
            },
            SystemKind::Composite { multipath, shadow } => SystemSpec::Composite {
                multipath: multipath.clone(),
                shadow: shadow.clone(),
            },
        }
    }
}

impl Serialize for SystemModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SystemModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SystemSpec::deserialize(d)?.build().map_err(D::Error::custom)
    }
}
