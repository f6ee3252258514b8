//! Named channel presets.
//!
//! The presets file is TOML with one table per channel:
//!
//! ```toml
//! [still]
//! d = 1.0        # distance, µm
//! D = 0.5        # diffusion coefficient, µm²/s
//! v = 0.0        # drift velocity, µm/s
//! dim_scale = 1.0
//! ```
//!
//! The file is read from `$MOLTIMING_CONFIG` when set, else from
//! `moltiming.toml` in the working directory if it exists. Entries override
//! the built-in presets of the same name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use moltiming::channels::ChannelSpec;
use serde::Deserialize;

use crate::CliError;

pub const CONFIG_ENV: &str = "MOLTIMING_CONFIG";
pub const DEFAULT_CONFIG: &str = "moltiming.toml";

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Preset {
    pub d: f64,
    #[serde(rename = "D")]
    pub diffusion: f64,
    #[serde(default)]
    pub v: f64,
    #[serde(default = "one")]
    pub dim_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Preset {
    pub fn channel(&self) -> Result<ChannelSpec, CliError> {
        Ok(ChannelSpec::new(self.d, self.diffusion, self.v, self.dim_scale)?)
    }
}

/// Built-in channels: still media with `c` = 0.5, 1 and 2 s, and the
/// drift channel of the IG figure (`d = 1`, `D = 0.5`, `v = 1`, so `λ = 1`).
pub fn builtin() -> BTreeMap<String, Preset> {
    let still = |c: f64| Preset {
        d: 1.0,
        diffusion: 1.0 / (2.0 * c),
        v: 0.0,
        dim_scale: 1.0,
    };
    BTreeMap::from([
        ("still-c0.5".to_string(), still(0.5)),
        ("still-c1".to_string(), still(1.0)),
        ("still-c2".to_string(), still(2.0)),
        (
            "drift-fig8".to_string(),
            Preset {
                d: 1.0,
                diffusion: 0.5,
                v: 1.0,
                dim_scale: 1.0,
            },
        ),
    ])
}

pub fn parse(text: &str) -> Result<BTreeMap<String, Preset>, CliError> {
    toml::from_str(text).map_err(|e| CliError::Usage(format!("bad presets file: {e}")))
}

fn config_path() -> Option<PathBuf> {
    match std::env::var_os(CONFIG_ENV) {
        Some(p) => Some(PathBuf::from(p)),
        None => {
            let p = Path::new(DEFAULT_CONFIG);
            p.exists().then(|| p.to_path_buf())
        }
    }
}

/// Built-in presets merged with the presets file, if any.
pub fn load() -> Result<BTreeMap<String, Preset>, CliError> {
    let mut all = builtin();
    if let Some(path) = config_path() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        all.extend(parse(&text)?);
    }
    Ok(all)
}

pub fn lookup(name: &str) -> Result<Preset, CliError> {
    load()?
        .remove(name)
        .ok_or_else(|| CliError::Usage(format!("unknown channel preset '{name}'")))
}
