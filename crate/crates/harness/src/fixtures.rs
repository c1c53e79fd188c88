//! Channel configurations shipped with the crate, addressable as `builtin:NAME`.

use crate::config::{parse_config, ChannelConfig, ConfigError};

const GRAMICIDIN_LIKE: &str = include_str!("../fixtures/gramicidin_like.toml");
const BIPOLAR_DIODE: &str = include_str!("../fixtures/bipolar_diode.toml");

pub const FIXTURE_NAMES: [&str; 2] = ["gramicidin_like", "bipolar_diode"];

pub fn fixture_source(name: &str) -> Option<&'static str> {
    match name {
        "gramicidin_like" => Some(GRAMICIDIN_LIKE),
        "bipolar_diode" => Some(BIPOLAR_DIODE),
        _ => None,
    }
}

pub fn fixture(name: &str) -> Result<ChannelConfig, ConfigError> {
    let text = fixture_source(name).ok_or_else(|| ConfigError::UnknownFixture(name.into()))?;
    parse_config(text)
}

pub fn gramicidin_like() -> ChannelConfig {
    fixture("gramicidin_like").expect("shipped fixture is valid")
}

pub fn bipolar_diode() -> ChannelConfig {
    fixture("bipolar_diode").expect("shipped fixture is valid")
}
