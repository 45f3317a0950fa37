//! Experiment configuration: one TOML file per run, with complex numbers
//! written as "a+bi" strings so configs stay language-neutral and
//! diff-friendly. Every subcommand carries a complete default config;
//! normalization fills anything a file leaves out, so the config echoed
//! into a report always re-runs to the same result.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use singres_core::resolution::{LimitOrder, LimitSchedule, ResolutionForm};
use singres_core::testfn::TestFamily;
use singres_core::C64;

/// Parse an "a+bi" literal: "2i", "-i", "1.5", "1-2i", "1e-3+2.5e1i".
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix(['i', 'I']) else {
        let re: f64 = t
            .parse()
            .map_err(|_| format!("bad real literal '{s}'; write complex values like \"1+2i\""))?;
        return Ok(C64::new(re, 0.0));
    };
    // split the imaginary coefficient off an optional real part: the last
    // top-level sign that is not an exponent sign separates the two terms
    let bytes = body.as_bytes();
    let mut split = None;
    for j in (1..bytes.len()).rev() {
        let c = bytes[j] as char;
        if (c == '+' || c == '-') && !matches!(bytes[j - 1] as char, 'e' | 'E') {
            split = Some(j);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .map_err(|_| format!("bad imaginary part in '{s}'"))?,
    };
    let re: f64 = re_str
        .parse()
        .map_err(|_| format!("bad real part in '{s}'"))?;
    Ok(C64::new(re, im))
}

pub fn format_complex(v: C64) -> String {
    if v.im == 0.0 {
        return format!("{}", v.re);
    }
    if v.re == 0.0 {
        return match v.im {
            1.0 => "i".into(),
            -1.0 => "-i".into(),
            im => format!("{im}i"),
        };
    }
    if v.im < 0.0 {
        format!("{}-{}i", v.re, -v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

/// Complex scalar carried as an "a+bi" string in TOML and JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParam(pub C64);

impl Serialize for ComplexParam {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_complex(self.0))
    }
}

impl<'de> Deserialize<'de> for ComplexParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_complex(&s)
            .map(ComplexParam)
            .map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Delta,
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub z: ComplexParam,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), String> {
        let z = self.z.0;
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() == 0.0 {
            return Err("model: coupling z must be finite and nonzero".into());
        }
        match self.kind {
            ModelKind::Delta => {
                if z.re != 0.0 {
                    return Err(format!(
                        "the point model assumes a purely imaginary coupling, so write z like \"2i\"; got z = {}",
                        format_complex(z)
                    ));
                }
                if self.alpha.is_some() {
                    return Err("model: alpha only applies to the smooth family".into());
                }
            }
            ModelKind::Smooth => match self.alpha {
                Some(a) if a.is_finite() && a > 0.0 => {}
                _ => return Err("model: the smooth family needs a positive width alpha".into()),
            },
        }
        Ok(())
    }
}

/// Test function as written in config; the model coupling supplies the
/// decay rate of the smoothed singular state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TestFunctionSpec {
    Gaussian {
        sigma: f64,
        center: f64,
    },
    Bump {
        support: f64,
    },
    PowerDecay {
        p: f64,
    },
    SlowIncrease {
        positive_side: bool,
        k0: f64,
        kappa: f64,
    },
    SmoothedPsi0 {
        alpha: f64,
    },
    PlaneWavePacket {
        k0: f64,
        width: f64,
    },
}

impl TestFunctionSpec {
    pub fn to_family(&self, z: C64) -> TestFamily {
        match *self {
            Self::Gaussian { sigma, center } => TestFamily::Gaussian { sigma, center },
            Self::Bump { support } => TestFamily::Bump { support },
            Self::PowerDecay { p } => TestFamily::PowerDecay { p },
            Self::SlowIncrease {
                positive_side,
                k0,
                kappa,
            } => TestFamily::SlowIncrease {
                positive_side,
                k0,
                kappa,
            },
            Self::SmoothedPsi0 { alpha } => TestFamily::SmoothedPsiZero { z, alpha },
            Self::PlaneWavePacket { k0, width } => TestFamily::PlaneWavePacket { k0, width },
        }
    }

    /// Family by bare name with stock parameters, for quick flag overrides;
    /// the slow-increase carrier defaults to the model's singular momentum,
    /// the only carrier it reproduces on.
    pub fn from_name(name: &str, model_k0: f64) -> Result<Self, String> {
        Ok(match name {
            "gaussian" => Self::Gaussian {
                sigma: 1.0,
                center: 0.0,
            },
            "bump" => Self::Bump { support: 3.0 },
            "power-decay" => Self::PowerDecay { p: 2.0 },
            "slow-increase" => Self::SlowIncrease {
                positive_side: true,
                k0: model_k0,
                kappa: 0.3,
            },
            "smoothed-psi0" => Self::SmoothedPsi0 { alpha: 0.0 },
            "plane-wave-packet" => Self::PlaneWavePacket {
                k0: 1.0,
                width: 1.0,
            },
            other => {
                return Err(format!(
                    "unknown test function '{other}'; expected one of gaussian, bump, \
                     power-decay, slow-increase, smoothed-psi0, plane-wave-packet"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub a_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps_values: Vec<f64>,
    #[serde(default = "default_truncation")]
    pub x_truncation: f64,
    #[serde(default = "default_order")]
    pub order: String,
}

fn default_truncation() -> f64 {
    25.0
}

fn default_order() -> String {
    "a-then-eps".into()
}

impl ScheduleConfig {
    /// Merge onto the form's stock ladders: an empty eps list keeps the
    /// stock excision rungs for forms that need them.
    pub fn to_schedule(&self, form: ResolutionForm) -> Result<LimitSchedule, String> {
        let mut s = LimitSchedule::default_for(form);
        if !self.a_values.is_empty() {
            s.a_values = self.a_values.clone();
        }
        if !self.eps_values.is_empty() {
            s.eps_values = self.eps_values.clone();
        }
        s.x_truncation = self.x_truncation;
        s.order = parse_order(&self.order)?;
        Ok(s)
    }
}

pub fn parse_form(label: &str) -> Result<ResolutionForm, String> {
    Ok(match label {
        "contour-deformed" | "contour" => ResolutionForm::ContourDeformed,
        "epsilon-split" | "eps-split" => ResolutionForm::EpsilonSplitFull,
        "reduced" => ResolutionForm::Reduced,
        "principal-value" | "pv" => ResolutionForm::PrincipalValueReduced,
        "scattering-paired" => ResolutionForm::ScatteringPaired,
        "symmetric-scattering" => ResolutionForm::SymmetricScattering,
        other => {
            return Err(format!(
                "unknown resolution form '{other}'; expected one of contour-deformed, \
                 epsilon-split, reduced, principal-value, scattering-paired, \
                 symmetric-scattering"
            ))
        }
    })
}

pub fn parse_order(label: &str) -> Result<LimitOrder, String> {
    Ok(match label {
        "a-then-eps" => LimitOrder::AThenEps,
        "eps-then-a" => LimitOrder::EpsThenA,
        other => {
            return Err(format!(
                "unknown limit order '{other}'; expected a-then-eps or eps-then-a \
                 (the damping-first route belongs to the expansion experiments)"
            ))
        }
    })
}

/// Knobs shared across experiments; each runner reads the ones it needs and
/// the defaults keep the echo complete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_function: Option<TestFunctionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detune: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OptionsConfig {
    pub allow_out_of_class: bool,
    pub abel_damping: bool,
}

impl OptionsConfig {
    pub fn to_apply(self) -> singres_core::resolution::ApplyOptions {
        singres_core::resolution::ApplyOptions {
            allow_out_of_class: self.allow_out_of_class,
            abel_damping: self.abel_damping,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub experiment: ExperimentParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default)]
    pub options: OptionsConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    VerifyIdentity,
    Biorthogonality,
    Example1,
    HalfMass,
    Residue,
    SmoothLimit,
    Reflectionless,
    SusyCheck,
    LemmaBounds,
    KernelXcheck,
}

fn delta_model(z: &str) -> ModelConfig {
    ModelConfig {
        kind: ModelKind::Delta,
        z: ComplexParam(parse_complex(z).unwrap()),
        alpha: None,
    }
}

fn smooth_model(z: &str, alpha: f64) -> ModelConfig {
    ModelConfig {
        kind: ModelKind::Smooth,
        z: ComplexParam(parse_complex(z).unwrap()),
        alpha: Some(alpha),
    }
}

fn tols(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn sched(a_values: &[f64], eps_values: &[f64]) -> Option<ScheduleConfig> {
    Some(ScheduleConfig {
        a_values: a_values.to_vec(),
        eps_values: eps_values.to_vec(),
        x_truncation: default_truncation(),
        order: default_order(),
    })
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::VerifyIdentity => "verify-identity",
            Self::Biorthogonality => "biorthogonality",
            Self::Example1 => "example1",
            Self::HalfMass => "half-mass",
            Self::Residue => "residue",
            Self::SmoothLimit => "smooth-limit",
            Self::Reflectionless => "reflectionless",
            Self::SusyCheck => "susy-check",
            Self::LemmaBounds => "lemma-bounds",
            Self::KernelXcheck => "kernel-xcheck",
        }
    }

    /// Stock run for the subcommand; every field a file may omit is taken
    /// from here, so the defaults double as documentation.
    pub fn default_config(self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            model: delta_model("2i"),
            experiment: ExperimentParams::default(),
            schedule: None,
            options: OptionsConfig::default(),
            tolerances: BTreeMap::new(),
        };
        let e = &mut cfg.experiment;
        match self {
            Self::VerifyIdentity => {
                // the grid crosses x' = 0, where the contour form converges
                // like 2 k0 |phi(0)| / (pi a); the gentle stock coupling
                // keeps that imprint inside the stock tolerance at a = 200
                cfg.model = delta_model("0.4i");
                e.form = Some("contour-deformed".into());
                e.test_function = Some(TestFunctionSpec::Gaussian {
                    sigma: 1.0,
                    center: 0.0,
                });
                e.x_grid = Some(vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]);
                cfg.schedule = sched(&[50.0, 100.0, 200.0], &[]);
                cfg.tolerances = tols(&[("point", 1e-3)]);
            }
            Self::Biorthogonality => {
                e.test_function = Some(TestFunctionSpec::Gaussian {
                    sigma: 0.7,
                    center: 1.0,
                });
                e.k_grid = Some(vec![0.5, 1.5]);
                e.a = Some(400.0);
                cfg.tolerances = tols(&[("point", 1e-2), ("singular", 1e-2)]);
            }
            Self::Example1 => {
                e.alphas = Some(vec![0.5, 0.25]);
                e.x_prime = Some(0.8);
                cfg.tolerances = tols(&[("part", 1e-4), ("alpha_first", 1e-2)]);
            }
            Self::HalfMass => {
                e.x_grid = Some(vec![-1.0, 0.5, 1.0]);
                cfg.schedule = sched(&[100.0, 200.0], &[0.1, 0.05]);
                cfg.options = OptionsConfig {
                    allow_out_of_class: true,
                    abel_damping: true,
                };
                cfg.tolerances = tols(&[("half", 2e-2), ("sum", 1e-2)]);
            }
            Self::Residue => {
                e.points = Some(vec![[0.3, -0.7], [1.1, 0.4]]);
                e.a = Some(400.0);
                e.eps = Some(1e-3);
                cfg.tolerances = tols(&[("point", 1e-5)]);
            }
            Self::SmoothLimit => {
                e.alphas = Some(vec![10.0, 20.0, 40.0]);
                e.k = Some(1.3);
                cfg.tolerances = tols(&[("ratio_low", 0.4), ("ratio_high", 0.6)]);
            }
            Self::Reflectionless => {
                cfg.model = smooth_model("5", 2.5);
                e.k_grid = Some(vec![0.5, 1.0, 2.0]);
                e.detune = Some(0.01);
                cfg.tolerances = tols(&[("tuned", 1e-10), ("revived", 1e-3)]);
            }
            Self::SusyCheck => {
                cfg.model = smooth_model("2i", 1.3);
                e.x_grid = Some(vec![-3.0, -2.1, -1.2, -0.3, 0.0, 0.8, 1.6, 2.4, 3.0]);
                cfg.tolerances = tols(&[("factorization", 1e-12), ("zero_mode", 1e-8)]);
            }
            Self::LemmaBounds => {
                e.grid = Some("default".into());
                cfg.tolerances = tols(&[("margin", 0.01)]);
            }
            Self::KernelXcheck => {
                e.seed = Some(7);
                e.draws = Some(10);
                cfg.schedule = sched(&[20.0, 50.0], &[]);
                cfg.tolerances = tols(&[("point", 1e-8)]);
            }
        }
        cfg
    }
}

fn fill<T>(slot: &mut Option<T>, default: Option<T>) {
    if slot.is_none() {
        *slot = default;
    }
}

fn check_grid(grid: &Option<Vec<f64>>, what: &str) -> Result<(), String> {
    if let Some(g) = grid {
        if g.is_empty() {
            return Err(format!("{what} must not be empty"));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(format!("{what} must be finite"));
        }
    }
    Ok(())
}

/// Fill missing fields from the experiment's defaults and validate what a
/// runner will rely on. After this the config is the effective one: echoing
/// it re-runs the same experiment.
pub fn normalize(exp: Experiment, cfg: &mut ExperimentConfig) -> Result<(), String> {
    let d = exp.default_config();
    let e = &mut cfg.experiment;
    let de = d.experiment;
    fill(&mut e.form, de.form);
    fill(&mut e.test_function, de.test_function);
    fill(&mut e.x_grid, de.x_grid);
    fill(&mut e.k_grid, de.k_grid);
    fill(&mut e.alphas, de.alphas);
    fill(&mut e.points, de.points);
    fill(&mut e.x_prime, de.x_prime);
    fill(&mut e.a, de.a);
    fill(&mut e.eps, de.eps);
    fill(&mut e.k, de.k);
    fill(&mut e.detune, de.detune);
    fill(&mut e.seed, de.seed);
    fill(&mut e.draws, de.draws);
    fill(&mut e.grid, de.grid);
    if cfg.schedule.is_none() {
        cfg.schedule = d.schedule;
    }
    for (k, v) in d.tolerances {
        cfg.tolerances.entry(k).or_insert(v);
    }

    cfg.model.validate()?;
    for (k, v) in &cfg.tolerances {
        if !(v.is_finite() && *v > 0.0) {
            return Err(format!("tolerance '{k}' must be positive"));
        }
    }
    check_grid(&cfg.experiment.x_grid, "x_grid")?;
    check_grid(&cfg.experiment.k_grid, "k_grid")?;
    check_grid(&cfg.experiment.alphas, "alphas")?;
    if let Some(pts) = &cfg.experiment.points {
        if pts.is_empty() {
            return Err("points must not be empty".into());
        }
        if pts.iter().flatten().any(|v| !v.is_finite()) {
            return Err("points must be finite".into());
        }
    }
    Ok(())
}
