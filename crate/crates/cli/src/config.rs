//! `key = value` config files that pre-populate flags.
//!
//! Each key names a long flag without the dashes. Lines starting with `#` and
//! blank lines are skipped. A value of `true` turns on a switch, `false` leaves
//! it off. Keys already given on the command line are ignored.

use std::ffi::OsString;
use std::path::Path;

/// Parsed `(key, value)` pairs in file order.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", n + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key `{key}`", n + 1));
        }
        let value = value.trim().trim_matches('"');
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn has_flag(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == long || s.starts_with(&with_eq)
    })
}

/// Appends flags from the file named by `--config` that the command line
/// does not already set.
pub fn apply_config_file(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config file {}: {e}", path.to_string_lossy()))?;
    for (key, value) in parse_config(&text)? {
        if has_flag(&args, &key) {
            continue;
        }
        match value.as_str() {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => args.push(format!("--{key}={value}").into()),
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let pairs = parse_config("# sweep\npmax = 31\n\n--samples=5\nlabel = \"a b\"\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("pmax".to_string(), "31".to_string()),
                ("samples".to_string(), "5".to_string()),
                ("label".to_string(), "a b".to_string()),
            ]
        );
        assert!(parse_config("no equals sign").is_err());
        assert!(parse_config("config = x").is_err());
    }

    #[test]
    fn command_line_wins() {
        let dir = std::env::temp_dir().join(format!("diffcycles-config-{}", std::process::id()));
        std::fs::write(&dir, "pmax = 31\nsamples = 5\ncritical-loci = true\n").unwrap();
        let args: Vec<OsString> = ["diffcycles", "curve-sweep", "--samples", "2", "--config"]
            .iter()
            .map(Into::into)
            .chain([dir.clone().into_os_string()])
            .collect();
        let out = apply_config_file(args).unwrap();
        let tail: Vec<String> = out[6..].iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(tail, vec!["--pmax=31", "--critical-loci"]);
        std::fs::remove_file(dir).unwrap();
    }
}
