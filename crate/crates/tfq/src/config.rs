//! Run configuration: defaults, TOML files and command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tfq_core::grid::{make_spatial_grid, HBarConfig, SpatialGrid};
use tfq_core::state::GaussianState;
use tfq_core::symplectic::{fourier_j, rotation, scale1, shear1, SymplecticMap};
use tfq_core::{Complex64, Signal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[default]
    Wigner,
    Bj,
    Cohen,
    Covariance,
    Diamond,
    QuantizeCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Wigner => "wigner",
            Command::Bj => "bj",
            Command::Cohen => "cohen",
            Command::Covariance => "covariance",
            Command::Diamond => "diamond",
            Command::QuantizeCheck => "quantize-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum KernelChoice {
    Wigner,
    #[serde(alias = "born-jordan")]
    #[value(alias = "born-jordan")]
    Bj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Pgm,
    Bin,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Pgm => "pgm",
            Format::Bin => "tfq",
        }
    }
}

/// One term of a Gaussian superposition: `gauss(x,p)` for a standard
/// coherent state, `gauss(x,p,re,im)` for width `M = re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerm {
    pub center: [f64; 2],
    pub width: [f64; 2],
}

impl GaussianTerm {
    pub fn state(&self, hbar: HBarConfig) -> Result<GaussianState> {
        let m = Complex64::new(self.width[0], self.width[1]);
        Ok(GaussianState::scalar(m, self.center, Complex64::new(1.0, 0.0), hbar)?)
    }
}

impl fmt::Display for GaussianTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, p] = self.center;
        if self.width == [1.0, 0.0] {
            write!(f, "gauss({x},{p})")
        } else {
            write!(f, "gauss({x},{p},{},{})", self.width[0], self.width[1])
        }
    }
}

/// Input signal: a sum of Gaussians or a sample file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SignalSpec {
    Gaussians(Vec<GaussianTerm>),
    /// One sample per line, `re` or `re,im`; `#` starts a comment.
    File(PathBuf),
}

impl Default for SignalSpec {
    fn default() -> Self {
        SignalSpec::Gaussians(vec![GaussianTerm { center: [0.0, 0.0], width: [1.0, 0.0] }])
    }
}

impl SignalSpec {
    pub fn build(&self, grid: &SpatialGrid) -> Result<Signal> {
        match self {
            SignalSpec::Gaussians(terms) => {
                let mut acc = Signal::zeros(*grid);
                for t in terms {
                    acc = acc.add(&t.state(grid.hbar_config())?.sample(grid)?)?;
                }
                Ok(acc)
            }
            SignalSpec::File(path) => crate::io::read_samples(path, grid),
        }
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalSpec::File(p) => write!(f, "file:{}", p.display()),
            SignalSpec::Gaussians(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("{what}: bad number {s:?}"))))
        .collect()
}

impl FromStr for SignalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(SignalSpec::File(PathBuf::from(path)));
        }
        let mut rest = s.trim();
        let mut terms = Vec::new();
        loop {
            let body = rest
                .strip_prefix("gauss(")
                .ok_or_else(|| Error::Config(format!("signal: expected gauss(...) or file:PATH, got {s:?}")))?;
            let close = body.find(')').ok_or_else(|| Error::Config(format!("signal: missing ')' in {s:?}")))?;
            let nums = parse_numbers(&body[..close], "signal")?;
            let term = match nums[..] {
                [x, p] => GaussianTerm { center: [x, p], width: [1.0, 0.0] },
                [x, p, re, im] => GaussianTerm { center: [x, p], width: [re, im] },
                _ => return Err(Error::Config(format!("signal: gauss takes 2 or 4 numbers, got {}", nums.len()))),
            };
            terms.push(term);
            rest = body[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix('+')
                .ok_or_else(|| Error::Config(format!("signal: expected '+' before {rest:?}")))?
                .trim_start();
        }
        Ok(SignalSpec::Gaussians(terms))
    }
}

impl TryFrom<String> for SignalSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SignalSpec> for String {
    fn from(s: SignalSpec) -> String {
        s.to_string()
    }
}

/// A 2×2 symplectic map by name: `rotation:θ`, `shear:c`, `scale:L`, `fourier`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MapSpec {
    Rotation(f64),
    Shear(f64),
    Scale(f64),
    Fourier,
}

impl MapSpec {
    pub fn build(self) -> Result<SymplecticMap> {
        Ok(match self {
            MapSpec::Rotation(t) => rotation(t),
            MapSpec::Shear(c) => shear1(c)?,
            MapSpec::Scale(l) => scale1(l)?,
            MapSpec::Fourier => fourier_j(1),
        })
    }

    pub fn defaults() -> Vec<MapSpec> {
        use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
        vec![
            MapSpec::Rotation(FRAC_PI_8),
            MapSpec::Rotation(FRAC_PI_4),
            MapSpec::Shear(1.0),
            MapSpec::Scale(1.5),
            MapSpec::Fourier,
        ]
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Rotation(t) => write!(f, "rotation:{t}"),
            MapSpec::Shear(c) => write!(f, "shear:{c}"),
            MapSpec::Scale(l) => write!(f, "scale:{l}"),
            MapSpec::Fourier => f.write_str("fourier"),
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "fourier" || s == "j" {
            return Ok(MapSpec::Fourier);
        }
        let (name, arg) = s.split_once(':').ok_or_else(|| Error::Config(format!("maps: cannot parse {s:?}")))?;
        let v: f64 = arg.trim().parse().map_err(|_| Error::Config(format!("maps: bad number in {s:?}")))?;
        match name {
            "rotation" => Ok(MapSpec::Rotation(v)),
            "shear" => Ok(MapSpec::Shear(v)),
            "scale" => Ok(MapSpec::Scale(v)),
            _ => Err(Error::Config(format!("maps: unknown map {name:?}"))),
        }
    }
}

impl TryFrom<String> for MapSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MapSpec> for String {
    fn from(m: MapSpec) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub n_points: usize,
    pub x_max: f64,
    pub hbar: f64,
    /// `None` runs every kernel the command supports.
    pub kernel: Option<KernelChoice>,
    pub signal: SignalSpec,
    pub steps: usize,
    pub maps: Vec<MapSpec>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub assert: bool,
    /// Residual bound for `covariance --assert`.
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::default(),
            n_points: 512,
            x_max: 8.0,
            hbar: HBarConfig::default().value(),
            kernel: None,
            signal: SignalSpec::default(),
            steps: 9,
            maps: MapSpec::defaults(),
            out: PathBuf::from("out"),
            formats: vec![Format::Pgm],
            assert: false,
            tolerance: 1e-4,
        }
    }
}

/// Values given on the command line; each one wins over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n_points: Option<usize>,
    pub x_max: Option<f64>,
    pub hbar: Option<f64>,
    pub kernel: Option<KernelChoice>,
    pub signal: Option<SignalSpec>,
    pub steps: Option<usize>,
    pub maps: Option<Vec<MapSpec>>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub assert: bool,
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Defaults, then the file, then the command line.
    pub fn resolve(command: Command, file: Option<&Path>, o: Overrides) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.command = command;
        if let Some(v) = o.n_points {
            cfg.n_points = v;
        }
        if let Some(v) = o.x_max {
            cfg.x_max = v;
        }
        if let Some(v) = o.hbar {
            cfg.hbar = v;
        }
        if o.kernel.is_some() {
            cfg.kernel = o.kernel;
        }
        if let Some(v) = o.signal {
            cfg.signal = v;
        }
        if let Some(v) = o.steps {
            cfg.steps = v;
        }
        if let Some(v) = o.maps {
            cfg.maps = v;
        }
        if let Some(v) = o.out {
            cfg.out = v;
        }
        if let Some(v) = o.formats {
            cfg.formats = v;
        }
        cfg.assert |= o.assert;
        if let Some(v) = o.tolerance {
            cfg.tolerance = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.command == Command::Covariance && self.maps.is_empty() {
            return Err(Error::Config("maps must not be empty".into()));
        }
        for m in &self.maps {
            m.build().map_err(|e| Error::Config(format!("maps: {m}: {e}")))?;
        }
        Ok(())
    }

    pub fn hbar_config(&self) -> Result<HBarConfig> {
        HBarConfig::new(self.hbar).map_err(|e| Error::Config(format!("hbar: {e}")))
    }

    pub fn grid(&self) -> Result<SpatialGrid> {
        make_spatial_grid(self.n_points, self.x_max, self.hbar_config()?)
            .map_err(|e| Error::Config(format!("n_points/x_max: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_spec_round_trips() {
        for s in ["gauss(0,0)", "gauss(1.5,-0.25)+gauss(-1,0,2,0.5)", "file:data/samples.txt"] {
            let spec: SignalSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spaced: SignalSpec = " gauss( 1 , 0 ) + gauss(-1,0)".parse().unwrap();
        assert_eq!(spaced.to_string(), "gauss(1,0)+gauss(-1,0)");
    }

    #[test]
    fn bad_signal_specs_are_rejected() {
        for s in ["", "gauss(1)", "gauss(1,2", "gauss(1,2) gauss(0,0)", "coherent(0,0)", "gauss(a,0)"] {
            assert!(s.parse::<SignalSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn map_spec_round_trips() {
        for m in MapSpec::defaults().into_iter().chain([MapSpec::Scale(0.5), MapSpec::Shear(-2.0)]) {
            assert_eq!(m.to_string().parse::<MapSpec>().unwrap(), m);
        }
        assert!("twist:1".parse::<MapSpec>().is_err());
        assert!(MapSpec::Scale(0.0).build().is_err());
    }

    #[test]
    fn default_config_is_valid() {
        RunConfig::default().validate().unwrap();
    }
}
