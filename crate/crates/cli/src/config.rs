//! `--config FILE` support.
//!
//! The file holds `key = value` lines (`#` starts a comment). Each entry is
//! turned into `--key=value` and spliced in right after the subcommand name,
//! ahead of the user's own flags. Since every flag overrides earlier
//! occurrences of itself, explicit flags win over the file and the file wins
//! over built-in defaults.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

/// Global options that take a separate value argument.
const GLOBAL_VALUE_FLAGS: &[&str] = &["--out", "--format", "--threads", "--config", "--seed"];

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        // JSON echoes use snake_case; accept that spelling too
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key", lineno + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Path given with `--config PATH` or `--config=PATH`, if any. The last
/// occurrence wins, as for every other flag.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut found = None;
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if let Some(path) = s.strip_prefix("--config=") {
            found = Some(OsString::from(path));
        } else if s == "--config" {
            found = iter.next().cloned();
        }
    }
    found
}

/// Index of the subcommand token, skipping global options and their values.
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if s.starts_with('-') {
            if GLOBAL_VALUE_FLAGS.contains(&s.as_ref()) {
                i += 1;
            }
        } else {
            return Some(i);
        }
        i += 1;
    }
    None
}

/// argv with the config file's entries spliced in.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| {
        CliError::Usage(format!("cannot read config {}: {e}", path.to_string_lossy()))
    })?;
    let entries = parse_config_text(&text)?;
    let Some(at) = subcommand_index(&args) else {
        return Ok(args);
    };
    let mut out = args[..=at].to_vec();
    out.extend(entries.into_iter().map(|(k, v)| OsString::from(format!("--{k}={v}"))));
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let entries = parse_config_text("# header\nmu = 5\n\n r1=0.5 # inline\nnu_max = 4\n").unwrap();
        assert_eq!(
            entries,
            vec![
                ("mu".to_string(), "5".to_string()),
                ("r1".to_string(), "0.5".to_string()),
                ("nu-max".to_string(), "4".to_string()),
            ]
        );
        assert!(parse_config_text("novalue\n").is_err());
        assert!(parse_config_text("config = x\n").is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "mu = 5\nsteps = 200\n").unwrap();
        let p = path.to_string_lossy().to_string();
        let args = os(&["lqfi", "--config", &p, "--format", "json", "depolarizing", "--mu", "3"]);
        let out = expand_args(args).unwrap();
        let strs: Vec<String> = out.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(
            strs,
            vec!["lqfi", "--config", &p, "--format", "json", "depolarizing", "--mu=5", "--steps=200", "--mu", "3"]
        );
    }

    #[test]
    fn no_config_is_identity() {
        let args = os(&["lqfi", "verify"]);
        assert_eq!(expand_args(args.clone()).unwrap(), args);
    }
}
