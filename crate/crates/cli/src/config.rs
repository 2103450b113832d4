//! Run configuration: defaults, then the config file's `[global]` section,
//! then the section named after the command, then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::args::{parse_hex, Cli, Command, Format, FunctionArgs, LadderArgs};

/// Every setting a command can read. Unset fields are omitted from the echo.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, deserialize_with = "seed_value", skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(
        default,
        deserialize_with = "param_table",
        skip_serializing_if = "BTreeMap::is_empty"
    )]
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_diagonal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oversample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<bool>,
}

impl Settings {
    /// Overlays every field set in `other`; parameter tables merge key by key.
    pub fn overlay(&mut self, other: Settings) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            jobs,
            out,
            format,
            seed,
            d,
            family,
            schedule,
            tolerance,
            fast_diagonal,
            oversample,
            only,
            trials,
            distribution,
            n_max,
            resolutions,
            probe,
            cutoff,
            kind,
            matrix
        );
        self.params.extend(other.params);
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    global: Settings,
    #[serde(default)]
    cif: Settings,
    #[serde(default)]
    lemmas: Settings,
    #[serde(default)]
    norms: Settings,
    #[serde(default)]
    probe: Settings,
    #[serde(default)]
    spectrum: Settings,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn section(self, command: &str) -> Settings {
        match command {
            "cif" => self.cif,
            "lemmas" => self.lemmas,
            "norms" => self.norms,
            "probe" => self.probe,
            _ => self.spectrum,
        }
    }
}

/// The effective settings for one invocation.
pub fn resolve(cli: &Cli) -> Result<Settings, String> {
    let name = cli.command.name();
    let mut s = Settings::default();
    if let Some(path) = &cli.global.config {
        let file = ConfigFile::load(path)?;
        s.overlay(file.global.clone());
        s.overlay(file.section(name));
    }
    s.overlay(from_flags(cli));
    Ok(s)
}

fn from_flags(cli: &Cli) -> Settings {
    let g = &cli.global;
    let mut s = Settings {
        jobs: g.jobs,
        out: g.out.clone(),
        format: g.format,
        seed: g.seed,
        ..Settings::default()
    };
    let function = |s: &mut Settings, f: &FunctionArgs| {
        s.d = f.d;
        s.family = f.family.clone();
        s.params = f.param_pairs().into_iter().collect();
    };
    let ladder = |s: &mut Settings, l: &LadderArgs| s.schedule = l.schedule.clone();
    match &cli.command {
        Command::Cif {
            function: f,
            ladder: l,
            tolerance,
            fast_diagonal,
            oversample,
        } => {
            function(&mut s, f);
            ladder(&mut s, l);
            s.tolerance = *tolerance;
            s.fast_diagonal = *fast_diagonal;
            s.oversample = *oversample;
        }
        Command::Lemmas {
            only,
            trials,
            distribution,
            n_max,
        } => {
            s.only = only.clone();
            s.trials = *trials;
            s.distribution = distribution.clone();
            s.n_max = *n_max;
        }
        Command::Norms {
            function: f,
            resolutions,
        } => {
            function(&mut s, f);
            s.resolutions = resolutions.clone();
        }
        Command::Probe {
            probe,
            function: f,
            ladder: l,
        } => {
            function(&mut s, f);
            ladder(&mut s, l);
            s.probe = probe.clone();
        }
        Command::Spectrum {
            function: f,
            cutoff,
            kind,
            oversample,
            matrix,
        } => {
            function(&mut s, f);
            s.cutoff = *cutoff;
            s.kind = kind.clone();
            s.oversample = *oversample;
            s.matrix = *matrix;
        }
    }
    s
}

/// TOML parameter values: numbers, strings, booleans or arrays of these.
#[derive(Deserialize)]
#[serde(untagged)]
enum ParamValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    List(Vec<ParamValue>),
}

impl ParamValue {
    fn render(&self) -> String {
        match self {
            ParamValue::Int(i) => i.to_string(),
            ParamValue::Float(x) => x.to_string(),
            ParamValue::Bool(b) => b.to_string(),
            ParamValue::Text(t) => t.clone(),
            ParamValue::List(xs) => xs.iter().map(ParamValue::render).collect::<Vec<_>>().join(","),
        }
    }
}

fn param_table<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<String, String>, D::Error> {
    let raw = BTreeMap::<String, ParamValue>::deserialize(de)?;
    Ok(raw.into_iter().map(|(k, v)| (k, v.render())).collect())
}

/// Seeds are written either as integers or as hexadecimal strings.
fn seed_value<'de, D: Deserializer<'de>>(de: D) -> Result<Option<u64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Seed {
        Int(u64),
        Hex(String),
    }
    match Option::<Seed>::deserialize(de)? {
        None => Ok(None),
        Some(Seed::Int(n)) => Ok(Some(n)),
        Some(Seed::Hex(s)) => parse_hex(&s).map(Some).map_err(serde::de::Error::custom),
    }
}
