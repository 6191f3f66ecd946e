//! `key = value` config files. Each key names a long flag; values are
//! appended to the command line only when the flag was not given, so flags
//! always win.

use std::fs;

pub fn merge(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut out = args;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("{path}:{}: expected key = value", n + 1))?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        if flag == "--config" {
            continue;
        }
        if !given(&out, &flag) {
            extra.push(flag);
            extra.push(value.trim().to_string());
        }
    }
    out.extend(extra);
    Ok(out)
}

fn given(args: &[String], flag: &str) -> bool {
    args.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn flags_win_over_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# run settings\ntype = A\nrank = 2\nlambda = 2,3\nseed=9").unwrap();
        let path = f.path().display().to_string();
        let merged = merge(args(&format!("orbitquant verify --config {path} --seed 4"))).unwrap();
        assert_eq!(merged.iter().filter(|a| *a == "--seed").count(), 1);
        assert!(merged.windows(2).any(|w| w[0] == "--seed" && w[1] == "4"));
        assert!(merged.windows(2).any(|w| w[0] == "--lambda" && w[1] == "2,3"));
    }

    #[test]
    fn malformed_line_is_reported() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "rank 2").unwrap();
        let path = f.path().display().to_string();
        assert!(merge(args(&format!("orbitquant build --config={path}"))).is_err());
    }
}
