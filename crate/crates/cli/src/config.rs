//! Flat `key = value` config files merged into the argument list.
//!
//! Keys use the long flag names. A key is appended as `--key value` only when
//! the chosen subcommand accepts it and the flag is not already on the command
//! line, so explicit flags always win.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use clap::{ArgAction, CommandFactory};

pub fn parse(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=').or_else(|| line.split_once(':')) else {
            bail!("config line {}: expected `key = value`, got {raw:?}", i + 1);
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() {
            bail!("config line {}: empty key", i + 1);
        }
        out.insert(key, value);
    }
    Ok(out)
}

/// Finds `--config PATH` or `--config=PATH`.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], long: &str) -> bool {
    let flag = format!("--{long}");
    let prefixed = format!("--{long}=");
    args.iter().any(|a| *a == flag || a.starts_with(&prefixed))
}

/// Returns `args` extended with the applicable config-file entries.
pub fn merge_args<C: CommandFactory>(args: Vec<String>) -> anyhow::Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config file {path}"))?;
    let entries = parse(&text)?;
    let cmd = C::command();
    let Some(sub) = args.iter().skip(1).find_map(|a| cmd.find_subcommand(a)) else {
        return Ok(args);
    };
    let mut merged = args.clone();
    for (key, value) in entries {
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        if key == "config" || has_flag(&args, &key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => {
                if matches!(value.to_ascii_lowercase().as_str(), "true" | "1" | "yes") {
                    merged.push(format!("--{key}"));
                }
            }
            _ => merged.push(format!("--{key}={value}")),
        }
    }
    Ok(merged)
}
