use std::path::{Path, PathBuf};

use hms_core::{ChernMode, ClassifierConfig, ZetaPolicy};

pub const CACHE_ENV: &str = "HMS_CACHE";
pub const MIN_PRECISION: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ZetaArg {
    Bound,
    Exact,
    SmallDExact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub strict_n: bool,
    pub precision: u32,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub zeta: ZetaArg,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Exact,
            strict_n: false,
            precision: MIN_PRECISION,
            cache: None,
            format: Format::Json,
            zeta: ZetaArg::SmallDExact,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layer alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub strict_n: bool,
    pub precision: Option<u32>,
    pub cache: Option<PathBuf>,
    pub format: Option<Format>,
    pub zeta: Option<ZetaArg>,
}

fn parse_enum<T: clap::ValueEnum>(key: &str, value: &str) -> Result<T, String> {
    T::from_str(value, true).map_err(|_| format!("bad value {value:?} for {key}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("bad value {value:?} for {key}")),
    }
}

impl RunConfig {
    /// Apply `key=value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "mode" => self.mode = parse_enum(key, value)?,
                "strict_n" => self.strict_n = parse_bool(key, value)?,
                "precision" => self.precision = value.parse().map_err(|_| format!("bad precision {value:?}"))?,
                "cache" => self.cache = Some(PathBuf::from(value)),
                "format" => self.format = parse_enum(key, value)?,
                "zeta" => self.zeta = parse_enum(key, value)?,
                _ => return Err(format!("config line {}: unknown key {key:?}", i + 1)),
            }
        }
        Ok(())
    }

    /// Defaults, then the config file, then the environment, then flags.
    pub fn resolve(file: Option<&Path>, env_cache: Option<String>, o: &Overrides) -> Result<RunConfig, String> {
        let mut c = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            c.apply_file_text(&text)?;
        }
        if let Some(p) = env_cache.filter(|p| !p.is_empty()) {
            c.cache = Some(PathBuf::from(p));
        }
        if let Some(m) = o.mode {
            c.mode = m;
        }
        c.strict_n |= o.strict_n;
        if let Some(p) = o.precision {
            c.precision = p;
        }
        if let Some(p) = &o.cache {
            c.cache = Some(p.clone());
        }
        if let Some(f) = o.format {
            c.format = f;
        }
        if let Some(z) = o.zeta {
            c.zeta = z;
        }
        if c.precision < MIN_PRECISION {
            return Err(format!("precision must be at least {MIN_PRECISION} bits, got {}", c.precision));
        }
        Ok(c)
    }

    pub fn chern_mode(&self) -> ChernMode {
        match self.mode {
            Mode::Exact => ChernMode::Exact,
            Mode::Paper => ChernMode::PaperBound,
        }
    }

    pub fn classifier(&self) -> ClassifierConfig {
        let zeta_policy = match self.zeta {
            ZetaArg::Bound => ZetaPolicy::Bound,
            ZetaArg::Exact => ZetaPolicy::Exact,
            ZetaArg::SmallDExact => ZetaPolicy::SmallDExact,
        };
        ClassifierConfig { zeta_policy, bits: self.precision, strict_n: self.strict_n, ..ClassifierConfig::default() }
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Exact => "exact",
            Mode::Paper => "paper",
        }
    }

    pub fn zeta_name(&self) -> &'static str {
        match self.zeta {
            ZetaArg::Bound => "bound",
            ZetaArg::Exact => "exact",
            ZetaArg::SmallDExact => "small-d-exact",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_apply_in_order() {
        let mut c = RunConfig::default();
        c.apply_file_text("# comment\nmode = paper\nprecision=256\ncache=/tmp/a\n").unwrap();
        assert_eq!((c.mode, c.precision), (Mode::Paper, 256));
        let o = Overrides { mode: Some(Mode::Exact), ..Overrides::default() };
        let dir = std::env::temp_dir().join("hms-config-test");
        std::fs::write(&dir, "mode=paper\ncache=/tmp/a\n").unwrap();
        let r = RunConfig::resolve(Some(&dir), Some("/tmp/b".into()), &o).unwrap();
        assert_eq!(r.mode, Mode::Exact);
        assert_eq!(r.cache, Some(PathBuf::from("/tmp/b")));
        std::fs::remove_file(&dir).ok();
    }

    #[test]
    fn rejects_low_precision_and_junk() {
        let o = Overrides { precision: Some(64), ..Overrides::default() };
        assert!(RunConfig::resolve(None, None, &o).is_err());
        let mut c = RunConfig::default();
        assert!(c.apply_file_text("colour=blue").is_err());
        assert!(c.apply_file_text("mode").is_err());
        assert!(c.apply_file_text("format=xml").is_err());
    }
}
