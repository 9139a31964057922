//! Optional TOML config whose keys mirror the flags.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::Merge;
use crate::CliError;

/// Parses `path` as a flag mirror for `T` and fills whatever `args` left unset.
pub fn apply<T>(args: &mut T, path: Option<&Path>) -> Result<(), CliError>
where
    T: Merge + Serialize + DeserializeOwned + Default,
{
    let Some(path) = path else { return Ok(()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;

    let known = serde_json::to_value(T::default()).expect("flag structs serialize");
    let known = known.as_object().expect("flag structs are maps");
    if let Some(key) = table.keys().find(|k| !known.contains_key(k.as_str())) {
        return Err(CliError::Usage(format!(
            "config {}: unknown key `{key}` for this subcommand",
            path.display()
        )));
    }
    let file: T = table
        .try_into()
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    args.merge(file);
    Ok(())
}
