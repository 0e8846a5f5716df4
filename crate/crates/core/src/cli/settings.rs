//! Resolved run parameters.
//!
//! Every parameter has a `key=value` spelling shared by config files, run
//! manifests and command-line flags. Later sources override earlier ones:
//! built-in defaults, then `--config`, then flags.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub mu: f64,
    pub t: f64,
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub method: String,
    pub tmin: f64,
    pub tmax: f64,
    pub nt: usize,
    pub spacing: Spacing,
    pub order: usize,
    pub window_lo: f64,
    pub window_hi: f64,
    pub target: String,
    pub input: Option<PathBuf>,
    pub h: f64,
    pub box_half_width: f64,
    pub dt: f64,
    pub well_width: f64,
    pub cap_strength: f64,
    pub cap_width: f64,
    pub times: Vec<f64>,
    pub which: String,
    pub suite: String,
    pub name: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            mu: 3.0,
            t: 0.07,
            xmin: -10.0,
            xmax: 10.0,
            nx: 2001,
            method: "exact".into(),
            tmin: 0.0,
            tmax: 20.0,
            nt: 2001,
            spacing: Spacing::Linear,
            order: 5,
            window_lo: 1e-4,
            window_hi: 1e-2,
            target: "escape".into(),
            input: None,
            h: 0.005,
            box_half_width: 60.0,
            dt: 5e-5,
            well_width: 0.0,
            cap_strength: 0.0,
            cap_width: 0.0,
            times: vec![0.07, 0.2, 0.7],
            which: "all".into(),
            suite: "all".into(),
            name: String::new(),
            seed: 0,
            tolerances: BTreeMap::new(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("cannot parse `{value}` for `{key}`")))
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        if let Some(check) = key.strip_prefix("tol.") {
            self.tolerances.insert(check.to_string(), parse(&key, value)?);
            return Ok(());
        }
        match key.as_str() {
            "mu" => self.mu = parse(&key, value)?,
            "t" => self.t = parse(&key, value)?,
            "xmin" => self.xmin = parse(&key, value)?,
            "xmax" => self.xmax = parse(&key, value)?,
            "nx" => self.nx = parse(&key, value)?,
            "method" => self.method = value.trim().to_string(),
            "tmin" => self.tmin = parse(&key, value)?,
            "tmax" => self.tmax = parse(&key, value)?,
            "nt" => self.nt = parse(&key, value)?,
            "spacing" => {
                self.spacing = match value.trim() {
                    "linear" | "lin" => Spacing::Linear,
                    "log" => Spacing::Log,
                    other => return Err(Error::Usage(format!("spacing must be linear or log, got `{other}`"))),
                }
            }
            "order" => self.order = parse(&key, value)?,
            "window_lo" => self.window_lo = parse(&key, value)?,
            "window_hi" => self.window_hi = parse(&key, value)?,
            "target" => self.target = value.trim().to_string(),
            "input" => {
                let v = value.trim();
                self.input = if v.is_empty() { None } else { Some(PathBuf::from(v)) };
            }
            "h" => self.h = parse(&key, value)?,
            "box" | "box_half_width" => self.box_half_width = parse(&key, value)?,
            "dt" => self.dt = parse(&key, value)?,
            "well_width" => self.well_width = parse(&key, value)?,
            "cap_strength" => self.cap_strength = parse(&key, value)?,
            "cap_width" => self.cap_width = parse(&key, value)?,
            "times" => {
                self.times = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse(&key, s))
                    .collect::<Result<_>>()?
            }
            "which" => self.which = value.trim().to_string(),
            "suite" => self.suite = value.trim().to_string(),
            "name" => self.name = value.trim().to_string(),
            "seed" => self.seed = parse(&key, value)?,
            other => return Err(Error::Usage(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    pub fn apply<K: AsRef<str>>(&mut self, pairs: impl IntoIterator<Item = (K, String)>) -> Result<()> {
        for (k, v) in pairs {
            self.set(k.as_ref(), &v)?;
        }
        Ok(())
    }

    /// Every parameter as `key -> value`, in the spelling `set` accepts.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("mu", self.mu.to_string());
        put("t", self.t.to_string());
        put("xmin", self.xmin.to_string());
        put("xmax", self.xmax.to_string());
        put("nx", self.nx.to_string());
        put("method", self.method.clone());
        put("tmin", self.tmin.to_string());
        put("tmax", self.tmax.to_string());
        put("nt", self.nt.to_string());
        put(
            "spacing",
            match self.spacing {
                Spacing::Linear => "linear".into(),
                Spacing::Log => "log".into(),
            },
        );
        put("order", self.order.to_string());
        put("window_lo", self.window_lo.to_string());
        put("window_hi", self.window_hi.to_string());
        put("target", self.target.clone());
        put("input", self.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default());
        put("h", self.h.to_string());
        put("box", self.box_half_width.to_string());
        put("dt", self.dt.to_string());
        put("well_width", self.well_width.to_string());
        put("cap_strength", self.cap_strength.to_string());
        put("cap_width", self.cap_width.to_string());
        put("times", fmt_list(&self.times));
        put("which", self.which.clone());
        put("suite", self.suite.clone());
        put("name", self.name.clone());
        put("seed", self.seed.to_string());
        for (k, v) in &self.tolerances {
            put(&format!("tol.{k}"), v.to_string());
        }
        m
    }

    /// Overlay a config file: either `key = value` lines (`#` comments) or a
    /// run manifest, whose recorded parameters are replayed.
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        if text.trim_start().starts_with('{') {
            let manifest: super::output::RunManifest = serde_json::from_str(&text)?;
            for (k, v) in &manifest.parameters {
                self.set(k, v)?;
            }
            return Ok(());
        }
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("{}:{}: expected key=value", path.display(), n + 1))
            })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn show(&self) -> String {
        self.to_pairs()
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Sample times `tmin..=tmax`, `nt` of them.
    pub fn time_grid(&self) -> Result<Vec<f64>> {
        if self.nt < 2 || !(self.tmax > self.tmin) || self.tmin < 0.0 {
            return Err(Error::Usage(format!(
                "need 0 <= tmin < tmax and nt >= 2, got tmin={}, tmax={}, nt={}",
                self.tmin, self.tmax, self.nt
            )));
        }
        let n = self.nt;
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.tmin + (self.tmax - self.tmin) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                if self.tmin <= 0.0 {
                    return Err(Error::Usage("log spacing needs tmin > 0".into()));
                }
                let (a, b) = (self.tmin.ln(), self.tmax.ln());
                (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
            }
        };
        v[0] = self.tmin;
        v[n - 1] = self.tmax;
        Ok(v)
    }
}
