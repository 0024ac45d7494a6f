//! Minimal flag parsing: a command word followed by `--flag value` (or
//! `--flag=value`) pairs. `--map` may repeat; everything else is
//! single-valued.

use std::collections::BTreeMap;

#[derive(Debug, Default)]
pub struct Args {
    pub command: String,
    single: BTreeMap<String, String>,
    repeated: BTreeMap<String, Vec<String>>,
}

const REPEATABLE: &[&str] = &["map"];

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Args {
    pub fn parse(mut argv: impl Iterator<Item = String>) -> Result<Args, UsageError> {
        let command = argv
            .next()
            .ok_or_else(|| UsageError("missing command".into()))?;
        if command.starts_with('-') {
            return Err(UsageError(format!(
                "expected a command before flags, got `{command}`"
            )));
        }
        let mut args = Args { command, ..Args::default() };
        while let Some(arg) = argv.next() {
            let Some(name) = arg.strip_prefix("--") else {
                return Err(UsageError(format!("expected a flag, got `{arg}`")));
            };
            let (name, value) = match name.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => {
                    let value = argv.next().ok_or_else(|| {
                        UsageError(format!("flag `--{name}` needs a value"))
                    })?;
                    (name.to_string(), value)
                }
            };
            if REPEATABLE.contains(&name.as_str()) {
                args.repeated.entry(name).or_default().push(value);
            } else if args.single.insert(name.clone(), value).is_some() {
                return Err(UsageError(format!("flag `--{name}` given twice")));
            }
        }
        Ok(args)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.single
            .get(name)
            .map(String::as_str)
            .or_else(|| self.repeated.get(name).and_then(|v| v.first()).map(String::as_str))
    }

    pub fn require(&self, name: &str) -> Result<&str, UsageError> {
        self.get(name)
            .ok_or_else(|| UsageError(format!("missing required flag `--{name}`")))
    }

    pub fn get_all(&self, name: &str) -> &[String] {
        self.repeated.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, UsageError> {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| UsageError(format!("flag `--{name}` has an invalid value `{v}`"))),
        }
    }

}
