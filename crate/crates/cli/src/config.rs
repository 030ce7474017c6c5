//! Flat `key = value` config files. Each key is the long name of a flag;
//! entries are spliced into the command line ahead of the user's own flags,
//! so anything given on the command line wins.

use std::fs;
use std::path::Path;

use clap::Command;

use crate::error::{CliError, CliResult};

/// Top-level options; everything else belongs to the subcommand.
const GLOBAL_WITH_VALUE: [&str; 4] = ["--config", "--output", "-o", "--workers"];

/// Location of the subcommand in `argv` and the `--config` path if given.
pub fn scan(argv: &[String]) -> (Option<usize>, Option<String>) {
    let mut config = None;
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if a == "--" {
            return (None, config);
        }
        if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_string());
            i += 1;
        } else if GLOBAL_WITH_VALUE.contains(&a.as_str()) {
            if a == "--config" {
                config = argv.get(i + 1).cloned();
            }
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return (Some(i), config);
        }
    }
    (None, config)
}

fn truthy(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// `(key, value, line)` entries of a config file.
pub fn parse_entries(text: &str) -> CliResult<Vec<(String, String, usize)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected key = value, got `{}`",
                n + 1,
                raw.trim()
            )));
        };
        out.push((k.trim().replace('_', "-"), v.trim().to_string(), n + 1));
    }
    Ok(out)
}

/// Converts config entries to flags for the given subcommand.
/// Returns `(global_flags, subcommand_flags)`.
pub fn to_flags(
    cmd: &Command,
    sub: &str,
    entries: &[(String, String, usize)],
) -> CliResult<(Vec<String>, Vec<String>)> {
    let sub_cmd = cmd
        .find_subcommand(sub)
        .ok_or_else(|| CliError::usage(format!("unknown command `{sub}`")))?;
    let mut globals = Vec::new();
    let mut locals = Vec::new();
    for (key, value, line) in entries {
        let (target, arg) = match sub_cmd.get_arguments().find(|a| a.get_long() == Some(key)) {
            Some(a) => (&mut locals, a),
            None => match cmd.get_arguments().find(|a| a.get_long() == Some(key)) {
                Some(a) if key != "config" => (&mut globals, a),
                _ => {
                    return Err(CliError::usage(format!(
                        "config line {line}: `{key}` is not an option of `{sub}`"
                    )))
                }
            },
        };
        if arg.get_action().takes_values() {
            target.push(format!("--{key}={value}"));
        } else {
            match truthy(value) {
                Some(true) => target.push(format!("--{key}")),
                Some(false) => {}
                None => {
                    return Err(CliError::usage(format!(
                        "config line {line}: `{key}` expects true or false, got `{value}`"
                    )))
                }
            }
        }
    }
    Ok((globals, locals))
}

/// `argv` with the config file's flags spliced in, or `argv` unchanged when
/// no config file was given.
pub fn expand(cmd: &Command, argv: Vec<String>) -> CliResult<Vec<String>> {
    let (sub_at, path) = scan(&argv);
    let (Some(sub_at), Some(path)) = (sub_at, path) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::usage(format!("cannot read config file {path}: {e}")))?;
    let entries = parse_entries(&text)?;
    let (globals, locals) = to_flags(cmd, &argv[sub_at], &entries)?;
    let mut out = Vec::with_capacity(argv.len() + globals.len() + locals.len());
    out.push(argv[0].clone());
    out.extend(globals);
    out.extend_from_slice(&argv[1..=sub_at]);
    out.extend(locals);
    out.extend_from_slice(&argv[sub_at + 1..]);
    Ok(out)
}
