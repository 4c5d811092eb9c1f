//! `key = value` run configuration. Keys are long flag names without the
//! leading dashes; `#` starts a comment line. Boolean flags take `true` or
//! `false`. Flags given on the command line win over the file.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", n + 1);
        };
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            bail!("config line {}: invalid key `{}`", n + 1, k.trim());
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn given(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter().any(|a| {
        a.to_str()
            .is_some_and(|s| s == flag || s.strip_prefix(&flag).is_some_and(|r| r.starts_with('=')))
    })
}

/// Finds `--config PATH` (or `--config=PATH`) in `argv`.
pub fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Appends the file's settings for flags absent from `argv`.
pub fn merge(argv: Vec<OsString>, path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut out = argv.clone();
    for (key, value) in parse(&text)? {
        if given(&argv, &key) {
            continue;
        }
        match value.as_str() {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}
