//! Run configuration: a flat struct covering every subcommand's knobs.
//!
//! The same fields can arrive from a JSON config file (`--config`) or from
//! command-line flags; flags win field by field. Fields a subcommand does
//! not understand are simply never read by it.

use std::env;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize};

/// Report serialization format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Merged run configuration; `None` means "use the command's default".
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// System spec string, e.g. `rotation:alpha=0.3` or `bernoulli-shift:Z`.
    pub system: Option<String>,
    /// Group name for group-level commands (`tempered`).
    pub group: Option<String>,
    pub family: Option<String>,
    /// Ball radii; a bare number in the config file is accepted too.
    #[serde(deserialize_with = "one_or_many")]
    pub epsilon: Option<Vec<f64>>,
    pub n_list: Option<Vec<u32>>,
    pub orbit_windows: Option<Vec<u32>>,
    pub orbit_epsilon: Option<f64>,
    pub n_max: Option<u32>,
    pub budget: Option<usize>,
    pub sample_size: Option<usize>,
    /// Sequence-window truncation appended to the system spec as `L=<n>`.
    pub truncation: Option<u32>,
    /// Equicontinuity mode: `mean` or `in-the-mean`.
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    /// Field-by-field merge where `self` (the flags) wins over `file`.
    pub fn over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            system: self.system.or(file.system),
            group: self.group.or(file.group),
            family: self.family.or(file.family),
            epsilon: self.epsilon.or(file.epsilon),
            n_list: self.n_list.or(file.n_list),
            orbit_windows: self.orbit_windows.or(file.orbit_windows),
            orbit_epsilon: self.orbit_epsilon.or(file.orbit_epsilon),
            n_max: self.n_max.or(file.n_max),
            budget: self.budget.or(file.budget),
            sample_size: self.sample_size.or(file.sample_size),
            truncation: self.truncation.or(file.truncation),
            mode: self.mode.or(file.mode),
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            threads: self.threads.or(file.threads),
        }
    }
}

fn one_or_many<'de, D>(d: D) -> std::result::Result<Option<Vec<f64>>, D::Error>
where
    D: Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    let v = Option::<OneOrMany>::deserialize(d)?;
    Ok(v.map(|x| match x {
        OneOrMany::One(e) => vec![e],
        OneOrMany::Many(v) => v,
    }))
}

/// Resolve a report path: relative paths land in `ERGOLAB_OUT_DIR` when
/// that variable is set and nonempty, absolute paths are kept as is.
pub fn resolve_out(path: &str) -> PathBuf {
    resolve_out_in(path, env::var_os("ERGOLAB_OUT_DIR"))
}

fn resolve_out_in(path: &str, dir: Option<OsString>) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_absolute() {
        return p;
    }
    match dir {
        Some(d) if !d.is_empty() => PathBuf::from(d).join(p),
        _ => p,
    }
}

/// Insert `-{tag}` before the extension: `runs/r.json` -> `runs/r-e0.json`.
pub fn with_tag(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-{tag}.{ext}"),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_losslessly() {
        let cfg = RunConfig {
            system: Some("rotation".into()),
            epsilon: Some(vec![0.05, 0.1]),
            n_list: Some(vec![8, 16, 32]),
            sample_size: Some(2000),
            seed: Some(42),
            format: Some(Format::Csv),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn scalar_epsilon_becomes_singleton_list() {
        let cfg: RunConfig = serde_json::from_str(r#"{"epsilon": 0.1}"#).unwrap();
        assert_eq!(cfg.epsilon, Some(vec![0.1]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"epslion": 0.1}"#).is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig =
            serde_json::from_str(r#"{"system": "rotation", "epsilon": 0.2, "seed": 7}"#).unwrap();
        let flags = RunConfig {
            epsilon: Some(vec![0.1]),
            ..RunConfig::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.system.as_deref(), Some("rotation"));
        assert_eq!(merged.epsilon, Some(vec![0.1]));
        assert_eq!(merged.seed, Some(7));
    }

    #[test]
    fn out_dir_applies_to_relative_paths_only() {
        let dir = Some(OsString::from("/tmp/runs"));
        assert_eq!(
            resolve_out_in("r.json", dir.clone()),
            PathBuf::from("/tmp/runs/r.json")
        );
        assert_eq!(
            resolve_out_in("/abs/r.json", dir),
            PathBuf::from("/abs/r.json")
        );
        assert_eq!(resolve_out_in("r.json", None), PathBuf::from("r.json"));
    }

    #[test]
    fn tags_go_before_the_extension() {
        assert_eq!(
            with_tag(Path::new("runs/r.json"), "e1"),
            PathBuf::from("runs/r-e1.json")
        );
        assert_eq!(
            with_tag(Path::new("report"), "e0"),
            PathBuf::from("report-e0")
        );
    }
}
