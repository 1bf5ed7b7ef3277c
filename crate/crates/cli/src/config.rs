//! Config-file mode: `key = value` lines are turned into `--key=value`
//! arguments placed ahead of the explicit ones, so explicit flags override
//! the file and the file overrides environment defaults.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

const SWITCHES: [&str; 2] = ["no-motion", "no-timestamp"];

pub fn expand_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(sub) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|i| i + 1) else {
        return Ok(args);
    };
    let mut path = None;
    let mut iter = args[sub + 1..].iter();
    while let Some(arg) = iter.next() {
        let arg = arg.to_string_lossy();
        if arg == "--config" {
            path = iter.next().map(|p| p.to_string_lossy().into_owned());
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_owned());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let injected = parse_config(Path::new(&path))?;
    let mut out = args[..=sub].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}

fn parse_config(path: &Path) -> CliResult<Vec<OsString>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1)));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Usage(format!("{}:{}: nested config files are not supported", path.display(), i + 1)));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" => out.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}:{}: `{key}` takes true or false, got `{value}`",
                        path.display(),
                        i + 1
                    )))
                }
            }
        } else {
            out.push(OsString::from(format!("--{key}={value}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_lines_precede_explicit_flags() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# comment\np = 4\ngt_max=10\nno-motion = true\nno-timestamp = false\n").unwrap();
        let path = file.path().to_str().unwrap();
        let out = expand_config(os(&["jcdyn", "timeseries", "--config", path, "--p", "2"])).unwrap();
        assert_eq!(out, os(&["jcdyn", "timeseries", "--p=4", "--gt-max=10", "--no-motion", "--config", path, "--p", "2"]));
    }

    #[test]
    fn malformed_lines_are_usage_errors() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "p 4").unwrap();
        let path = file.path().to_str().unwrap().to_owned();
        let err = expand_config(os(&["jcdyn", "epe", &format!("--config={path}")])).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains(":1:"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = expand_config(os(&["jcdyn", "epe", "--config", "/nonexistent/jcdyn.cfg"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
