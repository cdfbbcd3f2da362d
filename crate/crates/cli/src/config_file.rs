//! JSON config files: a palette config plus optional IO and metric settings.

use std::path::PathBuf;

use serde_json::{Map, Value};
use treehue::hierarchy::DistanceVariant;
use treehue::metrics::Scope;
use treehue::PaletteConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub palette: PaletteConfig,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub background_l: Option<f64>,
    pub scopes: Option<Vec<Scope>>,
    pub distance_variant: Option<DistanceVariant>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))?;
        let Value::Object(mut map) = value else {
            return Err(CliError::Config("config file must be a JSON object".into()));
        };
        let input = take_string(&mut map, "input")?.map(PathBuf::from);
        let output = take_string(&mut map, "output")?.map(PathBuf::from);
        let background_l = match map.remove("background_l") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_f64()
                    .ok_or_else(|| CliError::Config("background_l must be a number".into()))?,
            ),
        };
        let scopes = match map.remove("scopes") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(Scope::parse_list(&s).map_err(|e| CliError::Config(e.to_string()))?),
            Some(Value::Array(items)) => Some(
                items
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| CliError::Config("scopes must be strings".into()))?
                            .parse::<Scope>()
                            .map_err(|e| CliError::Config(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            Some(_) => return Err(CliError::Config("scopes must be a list of strings".into())),
        };
        let distance_variant = match map.remove("distance_variant") {
            None | Some(Value::Null) => None,
            Some(v) => Some(serde_json::from_value(v).map_err(|e| CliError::Config(format!("distance_variant: {e}")))?),
        };
        let palette: PaletteConfig =
            serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Config(e.to_string()))?;
        palette.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            palette,
            input,
            output,
            background_l,
            scopes,
            distance_variant,
        })
    }
}

fn take_string(map: &mut Map<String, Value>, key: &str) -> Result<Option<String>, CliError> {
    match map.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(CliError::Config(format!("{key} must be a string"))),
    }
}
