//! `--config FILE`: flat `key=value` lines turned into flags.
//!
//! The generated flags are placed right after the subcommand name, ahead of
//! everything the user typed, and every subcommand lets later occurrences of
//! a flag override earlier ones. Keys may be long names (`lambda`) or short
//! ones (`l`). A key that another subcommand understands is skipped; one that
//! no subcommand knows is an error.

use std::fs;

use clap::{Arg, Command};

pub fn apply(argv: Vec<String>, cmd: &Command) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a file name")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;

    // The first bare word after the program name names the subcommand.
    let Some(pos) = rest.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 1) else {
        return Ok(rest);
    };
    let Some(sub) = cmd.find_subcommand(&rest[pos]) else {
        return Ok(rest);
    };
    let mut flags = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| format!("{path}:{}: expected key=value", n + 1))?;
        match find(sub, key) {
            Some(arg) => flags.extend(to_flag(arg, key, value)),
            None if cmd.get_subcommands().any(|s| find(s, key).is_some()) => {}
            None => return Err(format!("{path}:{}: unknown key {key:?}", n + 1)),
        }
    }
    rest.splice(pos + 1..pos + 1, flags);
    Ok(rest)
}

fn find<'a>(cmd: &'a Command, key: &str) -> Option<&'a Arg> {
    cmd.get_arguments().find(|a| {
        a.get_long() == Some(key) || (key.chars().count() == 1 && a.get_short() == key.chars().next())
    })
}

fn to_flag(arg: &Arg, key: &str, value: &str) -> Vec<String> {
    let name = match arg.get_long() {
        Some(l) => format!("--{l}"),
        None => format!("-{key}"),
    };
    if arg.get_action().takes_values() {
        vec![format!("{name}={value}")]
    } else if matches!(value, "true" | "1" | "yes" | "on") {
        vec![name]
    } else {
        Vec::new()
    }
}
