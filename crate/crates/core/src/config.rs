//! Declarative channel and system specs in JSON or TOML.
//!
//! A channel spec is an object with a `family` key, e.g.
//! `{"family":"nakagami","m":2.5,"normalize":true}`; a system spec has a
//! `system` key, e.g. `{"system":"mrc","branches":[...]}`. TOML documents
//! use the same keys.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::systems::SystemModel;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Spec {
    Channel(ChannelModel),
    System(SystemModel),
}

impl Spec {
    /// End-to-end channel.
    pub fn channel(&self) -> &ChannelModel {
        match self {
            Spec::Channel(c) => c,
            Spec::System(s) => s.channel(),
        }
    }
}

/// Parses JSON when the text starts with `{`, TOML otherwise.
pub fn parse_value(text: &str) -> Result<serde_json::Value> {
    let t = text.trim_start();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| Error::Spec(format!("invalid JSON: {e}")))
    } else {
        toml::from_str::<serde_json::Value>(t).map_err(|e| Error::Spec(format!("invalid TOML: {e}")))
    }
}

pub fn spec_from_value(value: serde_json::Value) -> Result<Spec> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Spec("spec must be an object".into()))?;
    if obj.contains_key("system") {
        serde_json::from_value::<SystemModel>(value)
            .map(Spec::System)
            .map_err(|e| Error::Spec(e.to_string()))
    } else if obj.contains_key("family") {
        serde_json::from_value::<ChannelModel>(value)
            .map(Spec::Channel)
            .map_err(|e| Error::Spec(e.to_string()))
    } else {
        Err(Error::Spec("spec needs a `family` or `system` key".into()))
    }
}

pub fn parse_spec(text: &str) -> Result<Spec> {
    spec_from_value(parse_value(text)?)
}

pub fn parse_channel(text: &str) -> Result<ChannelModel> {
    Ok(parse_spec(text)?.channel().clone())
}
