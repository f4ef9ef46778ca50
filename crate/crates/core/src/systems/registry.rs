//! Name-based construction of the built-in systems.
//!
//! Spec strings look like `rotation`, `rotation:alpha=0.3`,
//! `bernoulli-shift:Z2,L=6`, `kronecker-flow:omega2=1.7320508,step=0.5`.
//! The token after the colon is a comma-separated list of `key=value`
//! pairs; for `bernoulli-shift` the first token may be a bare group name
//! (`Z`, `Z2`, `heis3`, `lamplighter`). The value `golden` means `(√5−1)/2`.

use super::{DynamicalSystem, GroundTruth, SeqWindow, SystemKind, GOLDEN, SQRT2_FRAC};
use crate::error::{Error, Result};
use crate::groups::{GroupKind, GroupSpec};
use serde::Serialize;
use std::collections::BTreeMap;

/// One row of `list_systems`.
#[derive(Clone, Debug, Serialize)]
pub struct SystemDescriptor {
    pub name: &'static str,
    pub group: &'static str,
    pub ground_truth: GroundTruth,
    pub isometric: bool,
    pub parameters: &'static str,
    pub summary: &'static str,
}

/// The canonical registry, one row per built-in configuration.
pub fn list_systems() -> Vec<SystemDescriptor> {
    vec![
        SystemDescriptor {
            name: "rotation",
            group: "Z",
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: true,
            parameters: "alpha (default golden)",
            summary: "irrational circle rotation x -> x + alpha",
        },
        SystemDescriptor {
            name: "torus-rotation",
            group: "Z^2",
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: true,
            parameters: "alpha1, alpha2 (defaults golden, sqrt(2)-1)",
            summary: "Z^2 rotation of the 2-torus by two rationally independent angles",
        },
        SystemDescriptor {
            name: "kronecker-flow",
            group: "R-flow",
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: true,
            parameters: "omega1, omega2, step (defaults 1, sqrt(2), 0.25)",
            summary: "linear flow on the 2-torus with independent frequencies",
        },
        SystemDescriptor {
            name: "odometer",
            group: "Z",
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: true,
            parameters: "none",
            summary: "binary adding machine on 64 digits with the 2-adic metric",
        },
        SystemDescriptor {
            name: "sturmian",
            group: "Z",
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: false,
            parameters: "alpha (default golden)",
            summary: "rotation coded through the interval [1-alpha, 1), sequence metric",
        },
        SystemDescriptor {
            name: "bernoulli-shift:Z",
            group: "Z",
            ground_truth: GroundTruth::NotDiscreteSpectrum,
            isometric: false,
            parameters: "L (default 12)",
            summary: "full {0,1} shift over Z, fair-coin measure",
        },
        SystemDescriptor {
            name: "bernoulli-shift:Z2",
            group: "Z^2",
            ground_truth: GroundTruth::NotDiscreteSpectrum,
            isometric: false,
            parameters: "L (default 6)",
            summary: "full {0,1} shift over Z^2, fair-coin measure",
        },
        SystemDescriptor {
            name: "bernoulli-shift:heis3",
            group: "heis3",
            ground_truth: GroundTruth::NotDiscreteSpectrum,
            isometric: false,
            parameters: "L (default 4)",
            summary: "full {0,1} shift over the discrete Heisenberg group",
        },
        SystemDescriptor {
            name: "bernoulli-shift:lamplighter",
            group: "lamplighter",
            ground_truth: GroundTruth::NotDiscreteSpectrum,
            isometric: false,
            parameters: "L (default 4)",
            summary: "full {0,1} shift over the lamplighter group Z2 wr Z",
        },
        SystemDescriptor {
            name: "skew-product",
            group: "Z",
            ground_truth: GroundTruth::NotDiscreteSpectrum,
            isometric: false,
            parameters: "alpha (default golden)",
            summary: "torus map (x, y) -> (x + alpha, y + x), weakly mixing fibers",
        },
    ]
}

struct Params {
    map: BTreeMap<String, String>,
    system: String,
}

impl Params {
    fn take_f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) if v == "golden" => Ok(GOLDEN),
            Some(v) => v.parse::<f64>().map_err(|_| Error::BadParameter {
                name: format!("{}:{key}", self.system),
                reason: format!("expected a number, got {v:?}"),
            }),
        }
    }

    fn take_u32(&mut self, key: &str, default: u32) -> Result<u32> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v.parse::<u32>().map_err(|_| Error::BadParameter {
                name: format!("{}:{key}", self.system),
                reason: format!("expected an integer, got {v:?}"),
            }),
        }
    }

    fn take_label(&mut self) -> Result<Option<GroundTruth>> {
        match self.map.remove("label").as_deref() {
            None => Ok(None),
            Some("discrete") => Ok(Some(GroundTruth::DiscreteSpectrum)),
            Some("not-discrete") => Ok(Some(GroundTruth::NotDiscreteSpectrum)),
            Some("unknown") => Ok(Some(GroundTruth::Unknown)),
            Some(v) => Err(Error::BadParameter {
                name: format!("{}:label", self.system),
                reason: format!("expected discrete | not-discrete | unknown, got {v:?}"),
            }),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.map.into_keys().next() {
            return Err(Error::BadParameter {
                name: format!("{}:{key}", self.system),
                reason: "unknown parameter".into(),
            });
        }
        Ok(())
    }
}

fn unit_interval(name: &str, system: &str, v: f64) -> Result<f64> {
    if v.is_finite() && (0.0..1.0).contains(&v) && v != 0.0 {
        Ok(v)
    } else {
        Err(Error::BadParameter {
            name: format!("{system}:{name}"),
            reason: format!("angle must lie in (0, 1), got {v}"),
        })
    }
}

/// Build a system from its spec string.
pub fn parse_system(spec: &str) -> Result<DynamicalSystem> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h.trim(), r.trim()),
        None => (spec.trim(), ""),
    };

    let mut group_token = None;
    let mut map = BTreeMap::new();
    for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                if group_token.replace(tok.to_string()).is_some() {
                    return Err(Error::BadParameter {
                        name: format!("{head}:{tok}"),
                        reason: "only one bare group token is allowed".into(),
                    });
                }
            }
        }
    }
    let mut params = Params {
        map,
        system: head.to_string(),
    };

    if head != "bernoulli-shift" {
        if let Some(tok) = group_token {
            return Err(Error::BadParameter {
                name: format!("{head}:{tok}"),
                reason: "bare tokens are only valid for bernoulli-shift groups".into(),
            });
        }
    }

    let label = params.take_label()?;
    let mut sys = match head {
        "rotation" => {
            let alpha = unit_interval("alpha", head, params.take_f64("alpha", GOLDEN)?)?;
            DynamicalSystem {
                name: format!("rotation:alpha={alpha}"),
                group: GroupSpec::integer_line(),
                kind: SystemKind::Rotation { alpha },
                ground_truth: GroundTruth::DiscreteSpectrum,
                isometric: true,
            }
        }
        "torus-rotation" => {
            let alpha1 = unit_interval("alpha1", head, params.take_f64("alpha1", GOLDEN)?)?;
            let alpha2 = unit_interval("alpha2", head, params.take_f64("alpha2", SQRT2_FRAC)?)?;
            DynamicalSystem {
                name: format!("torus-rotation:alpha1={alpha1},alpha2={alpha2}"),
                group: GroupSpec::integer_lattice(2),
                kind: SystemKind::TorusRotation { alpha1, alpha2 },
                ground_truth: GroundTruth::DiscreteSpectrum,
                isometric: true,
            }
        }
        "kronecker-flow" => {
            let omega1 = params.take_f64("omega1", 1.0)?;
            let omega2 = params.take_f64("omega2", std::f64::consts::SQRT_2)?;
            let step = params.take_f64("step", 0.25)?;
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::BadParameter {
                    name: "kronecker-flow:step".into(),
                    reason: format!("step must be positive, got {step}"),
                });
            }
            DynamicalSystem {
                name: format!("kronecker-flow:omega1={omega1},omega2={omega2},step={step}"),
                group: GroupSpec::real_line_flow(step),
                kind: SystemKind::KroneckerFlow { omega1, omega2 },
                ground_truth: GroundTruth::DiscreteSpectrum,
                isometric: true,
            }
        }
        "odometer" => DynamicalSystem {
            name: "odometer".into(),
            group: GroupSpec::integer_line(),
            kind: SystemKind::Odometer,
            ground_truth: GroundTruth::DiscreteSpectrum,
            isometric: true,
        },
        "sturmian" => {
            let alpha = unit_interval("alpha", head, params.take_f64("alpha", GOLDEN)?)?;
            DynamicalSystem {
                name: format!("sturmian:alpha={alpha}"),
                group: GroupSpec::integer_line(),
                kind: SystemKind::Sturmian { alpha },
                ground_truth: GroundTruth::DiscreteSpectrum,
                isometric: false,
            }
        }
        "bernoulli-shift" => {
            let group = match group_token.as_deref().unwrap_or("Z") {
                "Z" => GroupSpec::integer_line(),
                "Z2" | "Z^2" => GroupSpec::integer_lattice(2),
                "heis3" => GroupSpec::heisenberg(),
                "lamplighter" => GroupSpec::lamplighter(),
                other => {
                    return Err(Error::BadParameter {
                        name: format!("bernoulli-shift:{other}"),
                        reason: "expected Z | Z2 | heis3 | lamplighter".into(),
                    })
                }
            };
            let default_l = match group.kind {
                GroupKind::IntegerLine => 12,
                GroupKind::IntegerLattice(_) => 6,
                _ => 4,
            };
            let max_l = match group.kind {
                GroupKind::IntegerLine => 24,
                GroupKind::IntegerLattice(_) => 10,
                _ => 6,
            };
            let l = params.take_u32("L", default_l)?;
            if l > max_l {
                return Err(Error::BadParameter {
                    name: "bernoulli-shift:L".into(),
                    reason: format!(
                        "truncation {l} exceeds the limit {max_l} for group {}",
                        group.stable_name()
                    ),
                });
            }
            let window = SeqWindow::build(&group, l)?;
            DynamicalSystem {
                name: format!("bernoulli-shift:{},L={l}", group.stable_name()),
                group,
                kind: SystemKind::Bernoulli { window },
                ground_truth: GroundTruth::NotDiscreteSpectrum,
                isometric: false,
            }
        }
        "skew-product" => {
            let alpha = unit_interval("alpha", head, params.take_f64("alpha", GOLDEN)?)?;
            DynamicalSystem {
                name: format!("skew-product:alpha={alpha}"),
                group: GroupSpec::integer_line(),
                kind: SystemKind::SkewProduct { alpha },
                ground_truth: GroundTruth::NotDiscreteSpectrum,
                isometric: false,
            }
        }
        other => return Err(Error::UnknownSystem { name: other.into() }),
    };
    params.finish()?;
    if let Some(truth) = label {
        sys.ground_truth = truth;
    }
    Ok(sys)
}
