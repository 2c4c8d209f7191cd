use std::str::FromStr;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Serialize;

use lampwalk::group::{FiniteGroupTable, Perm};
use lampwalk::harmonic::DaGroup;
use lampwalk::walk::{big_to_f64, fmt_big, Prob};

use crate::error::CliError;
use crate::output::Report;

pub mod constructions;
pub mod couple;
pub mod harmonic;
pub mod walk;

/// A subcommand whose flags double as a config-file section.
pub trait Command: Serialize + DeserializeOwned + Default {
    const NAME: &'static str;
    /// Replaces unset optional parameters by their defaults. Parameters left
    /// unset here are required.
    fn fill_defaults(&mut self);
    fn execute(&self) -> Result<Report, CliError>;
}

pub const NAMES: &[&str] = &[
    "walk-speed",
    "convolve",
    "tv",
    "sn-delta",
    "couple",
    "couple-exit",
    "couple-fc",
    "non-normal-demo",
    "harmonic-verify",
    "da-harmonic",
    "da-energy",
    "voltage",
    "eta-check",
    "zwz-cocycle",
    "growth",
    "delta-build",
    "fc-class",
    "copy-check",
    "plateau",
];

macro_rules! defaults {
    ($s:ident; $($field:ident = $value:expr),* $(,)?) => {
        $( if $s.$field.is_none() { $s.$field = Some($value.into()); } )*
    };
}
pub(crate) use defaults;

pub fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Config(format!("missing required parameter `{name}`")))
}

pub fn rational(text: &str, name: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(text.trim()).map_err(|_| CliError::Config(format!("`{name}` must be a rational like 1/4, got `{text}`")))
}

pub fn probability(text: &str, name: &str) -> Result<Prob, CliError> {
    let p = Prob::from_str(text.trim()).map_err(|_| CliError::Config(format!("`{name}` must be a fraction in [0, 1], got `{text}`")))?;
    if p > Prob::from_integer(1) {
        return Err(CliError::Config(format!("`{name}` must be at most 1")));
    }
    Ok(p)
}

pub fn big(q: &BigRational) -> [String; 2] {
    [fmt_big(q), format!("{:.12e}", big_to_f64(q))]
}

pub fn float(x: f64) -> String {
    format!("{x:.12e}")
}

/// `Z/q` acting regularly on `q` points.
pub fn rotation_group(q: usize) -> Result<FiniteGroupTable, CliError> {
    if q < 2 {
        return Err(CliError::Config("q must be at least 2".into()));
    }
    let cycle: Vec<u32> = (0..q as u32).collect();
    Ok(FiniteGroupTable::from_permutations(&[Perm::from_cycles(q, &[&cycle])], q)?)
}

pub fn da_group(q: usize) -> Result<DaGroup, CliError> {
    Ok(DaGroup::new(rotation_group(q)?)?)
}

/// Step laws of presets on groups that project onto Z.
macro_rules! with_z_step {
    ($name:expr, $d:ident => $body:expr) => {
        match $name {
            "ll-z2" => {
                let $d = lampwalk::presets::ll_z2_step();
                $body
            }
            "ll-z2-literal" => {
                let $d = lampwalk::presets::ll_z2_literal_step();
                $body
            }
            "ll-z2-srw" => {
                let $d = lampwalk::presets::ll_z2_srw_step();
                $body
            }
            "plateau-z2" => {
                let $d = lampwalk::presets::plateau_z2();
                $body
            }
            "symz" => {
                let $d = lampwalk::harmonic::symz_step();
                $body
            }
            "symz-demo" => {
                let $d = lampwalk::presets::symz_demo_step();
                $body
            }
            "z-srw" => {
                let $d = lampwalk::presets::z_srw_step();
                $body
            }
            other => Err(crate::error::CliError::Config(format!("preset `{other}` has no step law for this command"))),
        }
    };
}
pub(crate) use with_z_step;

/// Every preset step law, including those without a projection to Z.
macro_rules! with_any_step {
    ($name:expr, $d:ident => $body:expr) => {
        match $name {
            "da-q2" => {
                let $d = lampwalk::harmonic::da_step(&crate::commands::da_group(2)?);
                $body
            }
            "delta-d8" => {
                let $d = lampwalk::presets::delta_d8_fc().0;
                $body
            }
            other => crate::commands::with_z_step!(other, $d => $body),
        }
    };
}
pub(crate) use with_any_step;
