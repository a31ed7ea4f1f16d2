//! Experiment configuration: a flat TOML file with per-experiment params,
//! overridable by CLI flags, validated against the pipeline preconditions
//! before any computation starts. The resolved config is embedded verbatim
//! in every artifact.

use plancklab_core::analysis::{default_packing_constant, QuadOrders, ThresholdRule};
use plancklab_core::report::{ExperimentKind, HwMode};
use plancklab_core::{EigenfunctionSpec, Family, Manifold, TorusPreset};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

/// Config or usage problem: maps to exit status 1, with the offending
/// field named in the message.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(field: &str, msg: impl fmt::Display) -> Result<T, ConfigError> {
    Err(ConfigError(format!("config field `{field}`: {msg}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    Json,
    Csv,
}

/// Fully resolved, validated experiment configuration. The output
/// directory and thread count are execution details: they are skipped by
/// the artifact config echo so identical experiments emit byte-identical
/// artifacts wherever and however they run; everything that defines the
/// experiment round-trips losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub manifold: Manifold,
    pub families: Vec<String>,
    pub seed: u64,
    #[serde(skip, default)]
    pub out_dir: PathBuf,
    pub emit: Vec<EmitFormat>,
    #[serde(skip, default = "default_threads")]
    pub threads: usize,
    pub params: Params,
}

fn default_threads() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Packing constant a in R = aλ⁻¹ (manifold-calibrated default).
    pub a: f64,
    pub eps_frac: f64,
    pub eps_mass: f64,
    /// Concentration threshold 1/ε for the large-value experiment.
    pub eps: f64,
    pub delta: f64,
    pub delta_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    pub k_list: Vec<u32>,
    pub hw_mode: HwMode,
    pub hw_delta: f64,
    pub r_pole: f64,
    pub radial_order: u32,
    pub angular_order: u32,
    pub global_order_factor: u32,
    pub nodal_tol_factor: f64,
    pub threshold: ThresholdRule,
    /// Large-value center in chart coordinates; default = the family's
    /// amplitude maximum located by a global sup scan.
    pub center: Option<Vec<f64>>,
}

impl Params {
    pub fn orders(&self) -> QuadOrders {
        QuadOrders {
            radial: self.radial_order,
            angular: self.angular_order,
            global_factor: self.global_order_factor,
        }
    }
}

/// On-disk shape: everything optional so files can be partial.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub manifold: Option<String>,
    pub families: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub out_dir: Option<String>,
    pub emit: Option<Vec<String>>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub params: FileParams,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileParams {
    pub a: Option<f64>,
    pub eps: Option<f64>,
    pub eps_frac: Option<f64>,
    pub eps_mass: Option<f64>,
    pub delta: Option<f64>,
    pub delta_list: Option<Vec<f64>>,
    pub gamma_list: Option<Vec<f64>>,
    pub k_list: Option<Vec<u32>>,
    pub hw_mode: Option<String>,
    pub hw_delta: Option<f64>,
    pub r_pole: Option<f64>,
    pub radial_order: Option<u32>,
    pub angular_order: Option<u32>,
    pub global_order_factor: Option<u32>,
    pub nodal_tol_factor: Option<f64>,
    pub threshold: Option<String>,
    pub c2_fixed: Option<f64>,
    pub center: Option<Vec<f64>>,
}

/// CLI-level overrides (a strict superset of the file fields that make
/// sense as flags). `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub experiment: Option<String>,
    pub manifold: Option<String>,
    pub families: Vec<String>,
    pub seed: Option<u64>,
    pub out_dir: Option<String>,
    pub emit: Option<String>,
    pub threads: Option<usize>,
    pub a: Option<f64>,
    pub eps: Option<f64>,
    pub eps_frac: Option<f64>,
    pub eps_mass: Option<f64>,
    pub delta: Option<f64>,
    pub delta_list: Option<String>,
    pub gamma_list: Option<String>,
    pub k_list: Option<String>,
    pub hw_mode: Option<String>,
    pub hw_delta: Option<f64>,
    pub r_pole: Option<f64>,
    pub nodal_tol: Option<f64>,
    pub radial_order: Option<u32>,
    pub angular_order: Option<u32>,
    pub global_order_factor: Option<u32>,
    pub threshold: Option<String>,
    pub c2_fixed: Option<f64>,
    pub center: Option<String>,
}

fn parse_list_f64(field: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| ConfigError(format!("config field `{field}`: `{t}`: {e}")))
        })
        .collect()
}

fn parse_list_u32(field: &str, s: &str) -> Result<Vec<u32>, ConfigError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| ConfigError(format!("config field `{field}`: `{t}`: {e}")))
        })
        .collect()
}

pub fn parse_experiment(name: &str) -> Result<ExperimentKind, ConfigError> {
    Ok(match name {
        "green" => ExperimentKind::Green,
        "pack" => ExperimentKind::Pack,
        "smallmass" => ExperimentKind::SmallMass,
        "sweep" => ExperimentKind::Sweep,
        "largevalue" => ExperimentKind::LargeValue,
        "hwexample" => ExperimentKind::HwExample,
        "mvi" => ExperimentKind::Mvi,
        "weyl" => ExperimentKind::Weyl,
        _ => {
            return err(
                "experiment",
                format!(
                    "unknown experiment `{name}` (expected green|pack|smallmass|sweep|largevalue|hwexample|mvi|weyl)"
                ),
            )
        }
    })
}

pub fn parse_manifold(name: &str) -> Result<Manifold, ConfigError> {
    Ok(match name {
        "circle" => Manifold::Circle,
        "torus" => Manifold::Torus2,
        "sphere" => Manifold::Sphere2,
        _ => {
            return err(
                "manifold",
                format!("unknown manifold `{name}` (expected circle|torus|sphere)"),
            )
        }
    })
}

/// Family mini-grammar: `name ":" param "=" value {"," param "=" value}`.
/// Families: `cos:k=20[,phase=x]` (alias `sin`), `torus:N=25,preset=p[,seed=s]`,
/// `zonal:l=20`, `hw:k=16`, `random:l=20,seed=7`, `const`.
pub fn parse_family(spec: &str, manifold: Manifold) -> Result<EigenfunctionSpec, ConfigError> {
    let field = "family";
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, r),
        None => (spec, ""),
    };
    let mut kv: Vec<(&str, &str)> = Vec::new();
    if !rest.is_empty() {
        for part in rest.split(',') {
            match part.split_once('=') {
                Some((k, v)) => kv.push((k.trim(), v.trim())),
                None => {
                    return err(field, format!("`{spec}`: expected param=value, got `{part}`"))
                }
            }
        }
    }
    let get = |key: &str| kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let check_keys = |allowed: &[&str]| -> Result<(), ConfigError> {
        for (k, _) in &kv {
            if !allowed.contains(k) {
                return err(field, format!("`{spec}`: unknown parameter `{k}`"));
            }
        }
        Ok(())
    };
    let need_u32 = |key: &str| -> Result<u32, ConfigError> {
        get(key)
            .ok_or_else(|| ConfigError(format!("config field `family`: `{spec}`: missing `{key}`")))?
            .parse::<u32>()
            .map_err(|e| ConfigError(format!("config field `family`: `{spec}`: `{key}`: {e}")))
    };

    let built = match name {
        "cos" | "sin" => {
            check_keys(&["k", "phase"])?;
            let k = need_u32("k")?;
            let mut phase = match get("phase") {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|e| ConfigError(format!("config field `family`: phase: {e}")))?,
                None => 0.0,
            };
            if name == "sin" {
                phase += std::f64::consts::FRAC_PI_2;
            }
            EigenfunctionSpec::circle_mode(k, phase)
        }
        "torus" => {
            check_keys(&["N", "preset", "seed"])?;
            let n = get("N")
                .ok_or_else(|| ConfigError(format!("config field `family`: `{spec}`: missing `N`")))?
                .parse::<u64>()
                .map_err(|e| ConfigError(format!("config field `family`: N: {e}")))?;
            let preset = match get("preset").unwrap_or("full") {
                "full" => TorusPreset::Full,
                "pair" => TorusPreset::Pair,
                "random" => TorusPreset::Random,
                other => {
                    return err(field, format!("unknown torus preset `{other}`"));
                }
            };
            let seed = match get("seed") {
                Some(v) => v
                    .parse::<u64>()
                    .map_err(|e| ConfigError(format!("config field `family`: seed: {e}")))?,
                None => 0,
            };
            EigenfunctionSpec::torus_mode(n, preset, seed)
        }
        "zonal" => {
            check_keys(&["l"])?;
            EigenfunctionSpec::zonal(need_u32("l")?)
        }
        "hw" => {
            check_keys(&["k"])?;
            EigenfunctionSpec::highest_weight(need_u32("k")?)
        }
        "random" => {
            check_keys(&["l", "seed"])?;
            let l = need_u32("l")?;
            let seed = match get("seed") {
                Some(v) => v
                    .parse::<u64>()
                    .map_err(|e| ConfigError(format!("config field `family`: seed: {e}")))?,
                None => 0,
            };
            EigenfunctionSpec::random_sphere(l, seed)
        }
        "const" => {
            check_keys(&[])?;
            Ok(EigenfunctionSpec::constant(manifold))
        }
        _ => return err(field, format!("unknown family `{name}`")),
    };
    let spec_built =
        built.map_err(|e| ConfigError(format!("config field `family`: `{spec}`: {e}")))?;
    if spec_built.manifold() != manifold {
        return err(
            field,
            format!(
                "`{spec}` lives on the {} but config names the {}",
                spec_built.manifold().name(),
                manifold.name()
            ),
        );
    }
    Ok(spec_built)
}

fn default_gamma_list() -> Vec<f64> {
    (1..=20).map(|i| 0.05 * i as f64).collect()
}

/// Merge file < flags < env into a validated config.
pub fn resolve(
    file: FileConfig,
    ov: Overrides,
) -> Result<(ExperimentConfig, Vec<EigenfunctionSpec>), ConfigError> {
    let experiment_name = ov
        .experiment
        .or(file.experiment)
        .ok_or_else(|| ConfigError("config field `experiment`: missing".into()))?;
    let experiment = parse_experiment(&experiment_name)?;
    let manifold_name = ov
        .manifold
        .or(file.manifold)
        .ok_or_else(|| ConfigError("config field `manifold`: missing".into()))?;
    let manifold = parse_manifold(&manifold_name)?;
    let families: Vec<String> = if !ov.families.is_empty() {
        ov.families
    } else {
        file.families.unwrap_or_default()
    };
    if families.is_empty() {
        return err("families", "at least one family spec is required");
    }
    let specs = families
        .iter()
        .map(|f| parse_family(f, manifold))
        .collect::<Result<Vec<_>, _>>()?;
    // canonicalize family ids so artifacts are stable
    let families: Vec<String> = specs.iter().map(|s| s.id()).collect();

    // precedence: explicit flag > environment > file > default
    let out_dir = ov
        .out_dir
        .or_else(|| std::env::var("PLANCKLAB_OUT_DIR").ok())
        .or(file.out_dir)
        .unwrap_or_else(|| "reports".into());
    let threads = match ov.threads {
        Some(t) => t,
        None => match std::env::var("PLANCKLAB_THREADS") {
            Ok(v) => v
                .parse::<usize>()
                .map_err(|e| ConfigError(format!("env PLANCKLAB_THREADS: {e}")))?,
            Err(_) => file.threads.unwrap_or(1),
        },
    };
    if threads == 0 {
        return err("threads", "must be ≥ 1");
    }
    let emit_raw: Vec<String> = match ov.emit {
        Some(s) => s.split(',').map(|t| t.trim().to_string()).collect(),
        None => file.emit.unwrap_or_else(|| vec!["json".into(), "csv".into()]),
    };
    let mut emit = Vec::new();
    for e in &emit_raw {
        match e.as_str() {
            "json" => emit.push(EmitFormat::Json),
            "csv" => emit.push(EmitFormat::Csv),
            other => return err("emit", format!("unknown format `{other}` (json|csv)")),
        }
    }

    let fp = file.params;
    let eps = ov.eps.or(fp.eps).unwrap_or(0.1);
    let eps_frac = ov.eps_frac.or(fp.eps_frac).unwrap_or(eps);
    let eps_mass = ov.eps_mass.or(fp.eps_mass).unwrap_or(eps);
    let threshold = match ov
        .threshold
        .or(fp.threshold)
        .unwrap_or_else(|| "quantile".into())
        .as_str()
    {
        "quantile" => ThresholdRule::Quantile,
        "fixed" => {
            let c2 = ov.c2_fixed.or(fp.c2_fixed).ok_or_else(|| {
                ConfigError("config field `c2_fixed`: required when threshold = \"fixed\"".into())
            })?;
            if c2 <= 0.0 {
                return err("c2_fixed", "must be positive");
            }
            ThresholdRule::Fixed { c2 }
        }
        other => return err("threshold", format!("unknown rule `{other}` (quantile|fixed)")),
    };
    let hw_mode = match ov
        .hw_mode
        .or(fp.hw_mode)
        .unwrap_or_else(|| "equator".into())
        .as_str()
    {
        "equator" => HwMode::Equator,
        "pole" => HwMode::Pole,
        other => return err("hw_mode", format!("unknown mode `{other}` (equator|pole)")),
    };
    let k_list = match ov.k_list {
        Some(s) => parse_list_u32("k_list", &s)?,
        None => fp.k_list.unwrap_or_else(|| {
            // derive from hw families when given, else the standard trio
            let ks: Vec<u32> = specs
                .iter()
                .filter_map(|s| match s.family() {
                    Family::HighestWeight { k } => Some(*k),
                    _ => None,
                })
                .collect();
            if ks.is_empty() {
                vec![16, 36, 64]
            } else {
                ks
            }
        }),
    };
    let center = match ov.center {
        Some(s) => Some(parse_list_f64("center", &s)?),
        None => fp.center,
    };
    if let Some(c) = &center {
        let want = if manifold == Manifold::Circle { 1 } else { 2 };
        if c.len() != want {
            return err(
                "center",
                format!("expected {want} chart coordinate(s), got {}", c.len()),
            );
        }
    }

    let params = Params {
        a: ov
            .a
            .or(fp.a)
            .unwrap_or_else(|| default_packing_constant(manifold)),
        eps_frac,
        eps_mass,
        eps,
        delta: ov.delta.or(fp.delta).unwrap_or(0.3),
        delta_list: match ov.delta_list {
            Some(s) => parse_list_f64("delta_list", &s)?,
            None => fp
                .delta_list
                .unwrap_or_else(|| vec![0.4, 0.3, 0.2, 0.1, 0.05]),
        },
        gamma_list: match ov.gamma_list {
            Some(s) => parse_list_f64("gamma_list", &s)?,
            None => fp.gamma_list.unwrap_or_else(default_gamma_list),
        },
        k_list,
        hw_mode,
        hw_delta: ov.hw_delta.or(fp.hw_delta).unwrap_or(1.0),
        r_pole: ov.r_pole.or(fp.r_pole).unwrap_or(0.5),
        radial_order: ov.radial_order.or(fp.radial_order).unwrap_or(32),
        angular_order: ov.angular_order.or(fp.angular_order).unwrap_or(64),
        global_order_factor: ov
            .global_order_factor
            .or(fp.global_order_factor)
            .unwrap_or(4),
        nodal_tol_factor: ov.nodal_tol.or(fp.nodal_tol_factor).unwrap_or(1e-10),
        threshold,
        center,
    };

    let config = ExperimentConfig {
        experiment,
        manifold,
        families,
        seed: ov.seed.or(file.seed).unwrap_or(42),
        out_dir: PathBuf::from(out_dir),
        emit,
        threads,
        params,
    };
    validate(&config, &specs)?;
    Ok((config, specs))
}

/// Checks every module precondition reachable from this experiment before
/// any computation starts.
fn validate(cfg: &ExperimentConfig, specs: &[EigenfunctionSpec]) -> Result<(), ConfigError> {
    let p = &cfg.params;
    for (name, eps) in [("eps_frac", p.eps_frac), ("eps_mass", p.eps_mass), ("eps", p.eps)] {
        if !(eps > 0.0 && eps < 1.0) {
            return err(name, "must lie in (0, 1)");
        }
    }
    if p.radial_order < 2 || p.global_order_factor < 1 {
        return err("radial_order", "quadrature orders must be ≥ 2 (factor ≥ 1)");
    }
    if !(p.nodal_tol_factor > 0.0 && p.nodal_tol_factor < 1.0) {
        return err("nodal_tol_factor", "must lie in (0, 1)");
    }
    let needs_packing = matches!(
        cfg.experiment,
        ExperimentKind::Pack | ExperimentKind::SmallMass | ExperimentKind::Sweep | ExperimentKind::Mvi
    );
    if needs_packing {
        if p.a <= 0.0 {
            return err("a", "packing constant must be positive");
        }
        for u in specs {
            if u.eigenvalue_sq() <= 0.0 {
                return err("family", "packing experiments require λ² > 0");
            }
            let big_r = p.a / u.lambda();
            if big_r > cfg.manifold.injectivity_radius() / 2.0 {
                return err(
                    "a",
                    format!(
                        "R = a/λ = {big_r:.4} exceeds injectivity_radius/2 for {}",
                        u.id()
                    ),
                );
            }
        }
    }
    match cfg.experiment {
        ExperimentKind::SmallMass => {
            if !(p.delta > 0.0 && p.delta <= p.a / 3.0) {
                return err("delta", format!("requires 0 < δ ≤ a/3 = {}", p.a / 3.0));
            }
        }
        ExperimentKind::Sweep => {
            if p.delta_list.is_empty() {
                return err("delta_list", "must be non-empty");
            }
            for pair in p.delta_list.windows(2) {
                if pair[1] >= pair[0] {
                    return err("delta_list", "must be strictly decreasing");
                }
            }
            if p.delta_list.iter().any(|d| !(*d > 0.0 && *d <= p.a / 3.0)) {
                return err("delta_list", format!("every δ must satisfy 0 < δ ≤ a/3 = {}", p.a / 3.0));
            }
        }
        ExperimentKind::LargeValue => {
            if p.gamma_list.is_empty() || p.gamma_list.iter().any(|g| *g <= 0.0) {
                return err("gamma_list", "must be non-empty and positive");
            }
            for u in specs {
                if u.eigenvalue_sq() <= 0.0 {
                    return err("family", "largevalue requires λ² > 0");
                }
            }
        }
        ExperimentKind::HwExample => {
            if p.k_list.is_empty() {
                return err("k_list", "must be non-empty");
            }
            if !(p.hw_delta > 0.0 && p.hw_delta <= 1.0) {
                return err("hw_delta", "equator mode requires 0 < δ ≤ 1");
            }
            if !(p.r_pole > 0.0 && p.r_pole < std::f64::consts::FRAC_PI_2) {
                return err("r_pole", "pole mode requires 0 < r < π/2");
            }
        }
        ExperimentKind::Green => {
            for u in specs {
                if u.eigenvalue_sq() <= 0.0 {
                    return err("family", "green requires λ² > 0");
                }
            }
        }
        _ => {}
    }
    Ok(())
}

pub fn load_file(path: &std::path::Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("config file `{}`: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| ConfigError(format!("config file `{}`: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_grammar_round_trips() {
        for (s, m) in [
            ("cos:k=20", Manifold::Circle),
            ("zonal:l=20", Manifold::Sphere2),
            ("hw:k=16", Manifold::Sphere2),
            ("random:l=20,seed=7", Manifold::Sphere2),
            ("torus:N=25,preset=random,seed=7", Manifold::Torus2),
            ("torus:N=25,preset=full", Manifold::Torus2),
        ] {
            let spec = parse_family(s, m).unwrap();
            assert_eq!(spec.id(), s);
        }
    }

    #[test]
    fn family_grammar_rejects_garbage() {
        assert!(parse_family("nope:k=2", Manifold::Circle).is_err());
        assert!(parse_family("cos:q=2", Manifold::Circle).is_err());
        assert!(parse_family("cos:k=x", Manifold::Circle).is_err());
        assert!(parse_family("zonal:l=5", Manifold::Circle).is_err()); // manifold mismatch
        assert!(parse_family("torus:N=3,preset=full", Manifold::Torus2).is_err()); // empty family
    }

    #[test]
    fn sin_alias_shifts_phase() {
        let u = parse_family("sin:k=3", Manifold::Circle).unwrap();
        let p = plancklab_core::Point::circle(0.0);
        assert!(u.evaluate(&p).abs() < 1e-15); // sin(0) = 0
    }

    #[test]
    fn resolved_config_round_trips_losslessly() {
        let ov = Overrides {
            experiment: Some("sweep".into()),
            manifold: Some("sphere".into()),
            families: vec!["zonal:l=20".into(), "random:l=10,seed=3".into()],
            seed: Some(9),
            delta_list: Some("0.4,0.2,0.05".into()),
            ..Overrides::default()
        };
        let (cfg, _) = resolve(FileConfig::default(), ov).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        let mut back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        back.out_dir = cfg.out_dir.clone();
        back.threads = cfg.threads;
        assert_eq!(back, cfg);
    }

    #[test]
    fn validation_names_offending_field() {
        let file = FileConfig::default();
        let ov = Overrides {
            experiment: Some("smallmass".into()),
            manifold: Some("circle".into()),
            families: vec!["cos:k=20".into()],
            delta: Some(5.0), // > a/3
            ..Overrides::default()
        };
        let e = resolve(file, ov).unwrap_err();
        assert!(e.0.contains("delta"), "{}", e.0);
    }
}
