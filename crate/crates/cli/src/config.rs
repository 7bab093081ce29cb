//! Run configuration: command-line flags layered over a `key=value` file.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use seqtag::brill::Template;
use seqtag::eval::{GridSpec, Metric};
use seqtag::features::FeatureConfig;
use seqtag::tagger::{TaggerKind, TaggerSettings};

use crate::error::{CliError, CliResult};

/// Keys accepted outside the feature configuration.
const KEYS: &[&str] = &[
    "in",
    "out",
    "model",
    "pred",
    "train",
    "rules",
    "tagset",
    "format",
    "output_format",
    "tagger",
    "k",
    "seed",
    "c1",
    "c2",
    "max_iter",
    "memory",
    "epsilon",
    "grid_c1",
    "grid_c2",
    "metric",
    "top_n",
    "jobs",
    "beam",
    "max_suffix",
    "rare_threshold",
    "theta",
    "use_suffix_model",
    "templates",
    "max_rules",
    "min_score",
];

const FEATURE_KEYS: &[&str] = &[
    "use_word",
    "use_first_last",
    "use_hyphen",
    "use_digit_window",
    "use_alnum",
    "prefix_lengths",
    "suffix_lengths",
    "use_prev_tag",
    "use_prev2_tag",
    "min_count",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Vertical,
    Slash,
    Raw,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vertical" => Ok(Format::Vertical),
            "slash" => Ok(Format::Slash),
            "raw" => Ok(Format::Raw),
            _ => Err(format!("unknown format `{s}` (expected vertical, slash or raw)")),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Vertical => "vertical",
            Format::Slash => "slash",
            Format::Raw => "raw",
        })
    }
}

impl Format {
    /// Guess from the file extension.
    pub fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("slash") => Format::Slash,
            Some("txt" | "raw") => Format::Raw,
            _ => Format::Vertical,
        }
    }
}

fn flag(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> CliResult<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Usage(format!("{}: invalid list entry {v:?}", flag(key))))
        })
        .collect()
}

fn join<T: Display>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Effective settings of one run. Every value read through it is recorded
/// for the manifest.
#[derive(Debug, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
}

impl RunConfig {
    /// Flags win over the config file; absent keys fall back to defaults
    /// when read.
    pub fn load<K: Into<String>>(flags: Vec<(K, Option<String>)>, config: Option<&Path>) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = config {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            for (key, value) in parse_config(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))? {
                values.insert(key, value);
            }
        }
        for (key, value) in flags {
            if let Some(v) = value {
                values.insert(key.into(), v);
            }
        }
        Ok(Self {
            values,
            used: RefCell::default(),
        })
    }

    fn record(&self, key: &str, value: String) {
        self.used.borrow_mut().insert(key.to_string(), value);
    }

    pub fn raw(&self, key: &str) -> Option<String> {
        let v = self.values.get(key).cloned();
        if let Some(v) = &v {
            self.record(key, v.clone());
        }
        v
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("{}: invalid value {v:?}", flag(key)))),
        }
    }

    pub fn get<T: FromStr + Display>(&self, key: &str, default: T) -> CliResult<T> {
        match self.opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, default.to_string());
                Ok(default)
            }
        }
    }

    pub fn path(&self, key: &str) -> CliResult<PathBuf> {
        self.opt_path(key)?
            .ok_or_else(|| CliError::Usage(format!("missing required option {}", flag(key))))
    }

    pub fn opt_path(&self, key: &str) -> CliResult<Option<PathBuf>> {
        match self.raw(key) {
            Some(v) if v.is_empty() => Err(CliError::Usage(format!("{}: empty path", flag(key)))),
            v => Ok(v.map(PathBuf::from)),
        }
    }

    /// Format of `path`, from `--format` or the file extension.
    pub fn format(&self, path: &Path) -> CliResult<Format> {
        let default = Format::infer(path);
        match self.raw("format") {
            Some(v) => v.parse().map_err(CliError::Usage),
            None => {
                self.record("format", default.to_string());
                Ok(default)
            }
        }
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.get("seed", 42u64)
    }

    pub fn tagger_settings(&self) -> CliResult<TaggerSettings> {
        let kind: TaggerKind = self.get("tagger", TaggerKind::Crf)?;
        let mut s = TaggerSettings::new(kind);
        match kind {
            TaggerKind::Crf => self.crf_settings(&mut s)?,
            TaggerKind::Tnt => {
                s.tnt.beam = self.get("beam", s.tnt.beam)?;
                s.tnt.max_suffix = self.get("max_suffix", s.tnt.max_suffix)?;
                s.tnt.rare_threshold = self.get("rare_threshold", s.tnt.rare_threshold)?;
                s.tnt.use_suffix_model = self.get("use_suffix_model", s.tnt.use_suffix_model)?;
                s.tnt.theta = match self.get("theta", "auto".to_string())?.as_str() {
                    "auto" => None,
                    v => Some(
                        v.parse()
                            .map_err(|_| CliError::Usage(format!("--theta: invalid value {v:?}")))?,
                    ),
                };
            }
            TaggerKind::Brill => {
                let ids: Vec<&str> = s.brill.templates.iter().map(|t| t.id()).collect();
                let templates = self.get("templates", ids.join(","))?;
                s.brill.templates = templates
                    .split(',')
                    .map(|id| Template::from_id(id.trim()))
                    .collect::<Result<_, _>>()?;
                s.brill.max_rules = self.get("max_rules", s.brill.max_rules)?;
                s.brill.min_score = self.get("min_score", s.brill.min_score)?;
            }
        }
        Ok(s)
    }

    fn crf_settings(&self, s: &mut TaggerSettings) -> CliResult<()> {
        let mut features = FeatureConfig::default();
        for key in FEATURE_KEYS {
            if let Some(v) = self.values.get(*key) {
                features.set(key, v)?;
            }
        }
        features.validate()?;
        for line in features.to_text().lines() {
            let (k, v) = line.split_once('=').expect("feature lines are key=value");
            self.record(k, v.to_string());
        }
        s.features = features;
        s.crf.c1 = self.get("c1", s.crf.c1)?;
        s.crf.c2 = self.get("c2", s.crf.c2)?;
        s.crf.max_iterations = self.get("max_iter", s.crf.max_iterations)?;
        s.crf.memory = self.get("memory", s.crf.memory)?;
        s.crf.epsilon = self.get("epsilon", s.crf.epsilon)?;
        s.crf.seed = self.seed()?;
        Ok(())
    }

    /// CRF settings for grid search; any other tagger is rejected.
    pub fn grid_settings(&self) -> CliResult<(TaggerSettings, GridSpec)> {
        let s = self.tagger_settings()?;
        if s.kind != TaggerKind::Crf {
            return Err(CliError::Usage("gridsearch only supports --tagger crf".into()));
        }
        let default = GridSpec::default();
        let c1 = match self.raw("grid_c1") {
            Some(v) => parse_list("grid_c1", &v)?,
            None => {
                self.record("grid_c1", join(&default.c1));
                default.c1
            }
        };
        let c2 = match self.raw("grid_c2") {
            Some(v) => parse_list("grid_c2", &v)?,
            None => {
                self.record("grid_c2", join(&default.c2));
                default.c2
            }
        };
        let metric = match self.get("metric", "overall".to_string())?.as_str() {
            "overall" => Metric::Overall,
            "known" => Metric::Known,
            "unknown" => Metric::Unknown,
            v => return Err(CliError::Usage(format!("--metric: expected overall, known or unknown, got {v:?}"))),
        };
        let grid = GridSpec { c1, c2, metric };
        grid.validate()?;
        Ok((s, grid))
    }

    /// The recorded settings in config-file syntax, usable as `--config`.
    pub fn manifest(&self, command: &str) -> String {
        let mut out = format!("# seqtag {}\n# command={command}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in self.used.borrow().iter() {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value", i + 1));
        };
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) && !FEATURE_KEYS.contains(&key.as_str()) {
            return Err(format!("line {}: unknown key `{key}`", i + 1));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("seqtag-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(&path, "# comment\nk = 5\nseed=7\nmax-iter=3\n").unwrap();
        let cfg = RunConfig::load(vec![("seed", Some("9".into()))], Some(&path)).unwrap();
        assert_eq!(cfg.get("k", 10usize).unwrap(), 5);
        assert_eq!(cfg.seed().unwrap(), 9);
        assert_eq!(cfg.get("max_iter", 200usize).unwrap(), 3);
        assert_eq!(cfg.get("top_n", 20usize).unwrap(), 20);
        let manifest = cfg.manifest("crossval");
        assert!(manifest.contains("k=5\n") && manifest.contains("seed=9\n") && manifest.contains("top_n=20\n"));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn manifest_reloads_to_same_settings() {
        let cfg = RunConfig::load(vec![("tagger", Some("crf".into())), ("c1", Some("0.5".into()))], None).unwrap();
        let first = cfg.tagger_settings().unwrap();
        let parsed = parse_config(&cfg.manifest("train")).unwrap();
        let again = RunConfig::load(parsed.into_iter().map(|(k, v)| (k, Some(v))).collect(), None).unwrap();
        assert_eq!(again.tagger_settings().unwrap(), first);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(parse_config("colour=blue\n").is_err());
        assert!(parse_config("no equals sign\n").is_err());
        let cfg = RunConfig::load(vec![("k", Some("ten".into()))], None).unwrap();
        assert!(matches!(cfg.get("k", 10usize), Err(CliError::Usage(_))));
    }

    #[test]
    fn gridsearch_needs_crf() {
        let cfg = RunConfig::load(vec![("tagger", Some("tnt".into()))], None).unwrap();
        assert!(matches!(cfg.grid_settings(), Err(CliError::Usage(_))));
        let cfg = RunConfig::load(vec![("grid_c1", Some("0.1,0.2".into()))], None).unwrap();
        let (_, grid) = cfg.grid_settings().unwrap();
        assert_eq!(grid.c1, vec![0.1, 0.2]);
        assert_eq!(grid.c2, GridSpec::default().c2);
    }
}
