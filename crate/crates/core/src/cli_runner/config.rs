//! Suite configuration: a flat TOML document with dotted keys.
//!
//! ```toml
//! family = "gaussian_flat"
//! a = [0.5, 1.0, 2.0]          # family parameters may be swept
//! n = 3
//! k = 2.0
//! mu = 0.5
//! H = 0.0
//! p = [3.0, 4.0]
//! theorems = ["T2", "T31_eq31"] # or "all"
//! radii.T2 = [0.5, 1.0]          # one tuple, or a list of tuples
//! grid.cells = 4096
//! output.format = "json"
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::integral_norms::{QuadratureSpec, MIN_CELLS, DEFAULT_CELLS};
use crate::theorem_checks::{TheoremId, DEFAULT_TOLERANCE};
use crate::warped_manifold::BuiltinFamily;

const SCALAR_SWEEPS: [&str; 4] = ["H", "k", "mu", "p"];
const REQUIRED: [&str; 8] = ["family", "n", "k", "mu", "H", "p", "theorems", "output.format"];

/// Family of the spaces in a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Sphere,
    Flat,
    Hyperbolic,
    GaussianFlat,
    WeightPerturbedSphere,
    Tabulated,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Sphere => "sphere",
            FamilyKind::Flat => "flat",
            FamilyKind::Hyperbolic => "hyperbolic",
            FamilyKind::GaussianFlat => "gaussian_flat",
            FamilyKind::WeightPerturbedSphere => "weight_perturbed_sphere",
            FamilyKind::Tabulated => "tabulated",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            FamilyKind::Sphere,
            FamilyKind::Flat,
            FamilyKind::Hyperbolic,
            FamilyKind::GaussianFlat,
            FamilyKind::WeightPerturbedSphere,
            FamilyKind::Tabulated,
        ]
        .into_iter()
        .find(|f| f.name() == name)
    }

    /// Sweepable parameters of the family with their defaults.
    pub fn parameter_defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            FamilyKind::GaussianFlat => &[("a", 1.0)],
            FamilyKind::WeightPerturbedSphere => &[("delta", 0.05), ("q", 2.0)],
            _ => &[],
        }
    }

    /// Builtin family for one point of the parameter sweep; `None` for
    /// tabulated input.
    pub fn builtin(self, params: &BTreeMap<String, f64>) -> Option<BuiltinFamily<f64>> {
        let get = |key: &str| params[key];
        match self {
            FamilyKind::Sphere => Some(BuiltinFamily::Sphere),
            FamilyKind::Flat => Some(BuiltinFamily::Flat),
            FamilyKind::Hyperbolic => Some(BuiltinFamily::Hyperbolic),
            FamilyKind::GaussianFlat => Some(BuiltinFamily::GaussianFlat { a: get("a") }),
            FamilyKind::WeightPerturbedSphere => Some(BuiltinFamily::WeightPerturbedSphere {
                delta: get("delta"),
                q: get("q"),
            }),
            FamilyKind::Tabulated => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Validated suite configuration. Sweepable entries hold the listed values
/// in the order given; [`SuiteConfig::sweep`] expands them.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub family: FamilyKind,
    /// Sweep lists of the family parameters (`a`, or `delta` and `q`).
    pub family_params: BTreeMap<String, Vec<f64>>,
    /// `r phi f` table for the tabulated family.
    pub profile_path: Option<PathBuf>,
    pub n: Vec<usize>,
    pub k: Vec<f64>,
    pub mu: Vec<f64>,
    /// Model curvature `H`.
    pub curvature: Vec<f64>,
    pub p: Vec<f64>,
    pub omega: Option<f64>,
    pub max_radius: Option<f64>,
    /// Doubling factor of `C32_doubling`.
    pub beta: f64,
    pub tolerance: f64,
    pub theorems: Vec<TheoremId>,
    /// Radius tuples per theorem; defaults are used for theorems not listed.
    pub radii: BTreeMap<TheoremId, Vec<Vec<f64>>>,
    pub grid_cells: usize,
    /// Grading exponent; `2p - 1` when absent.
    pub grid_gamma: Option<f64>,
    pub quadrature: QuadratureSpec<f64>,
    pub output: OutputSpec,
}

/// One point of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub family_params: BTreeMap<String, f64>,
    pub n: usize,
    pub k: f64,
    pub mu: f64,
    pub curvature: f64,
    pub p: f64,
}

/// Number of radii a theorem takes, in order.
pub fn radii_arity(id: TheoremId) -> (usize, &'static str) {
    match id {
        TheoremId::MeanCurvatureNorm
        | TheoremId::MeanCurvaturePointwise
        | TheoremId::MeanCurvatureNormExtended
        | TheoremId::MeanCurvaturePointwiseExtended => (1, "[r]"),
        TheoremId::AreaRatio | TheoremId::AreaRatioExtended | TheoremId::VolumeRatio => (2, "[r, R]"),
        TheoremId::AnnulusRatio => (4, "[r1, r2, R1, R2]"),
        TheoremId::VolumeDoubling => (3, "[r1, r2, R]"),
        TheoremId::DerivationChain => (2, "[r_start, r_end]"),
        TheoremId::DiameterThreshold => (2, "[r, R]"),
    }
}

fn check_radii(id: TheoremId, tuple: &[f64]) -> std::result::Result<(), String> {
    let (arity, shape) = radii_arity(id);
    if tuple.len() != arity {
        return Err(format!("expected {shape}, got {} values", tuple.len()));
    }
    if tuple.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err("radii must be finite and >= 0".into());
    }
    let ordered = match id {
        TheoremId::AnnulusRatio => tuple[0] <= tuple[1] && tuple[1] < tuple[2] && tuple[2] <= tuple[3],
        TheoremId::VolumeDoubling => tuple[0] > 0.0 && tuple[0] < tuple[1] && tuple[1] <= tuple[2],
        TheoremId::DerivationChain => tuple[0] < tuple[1],
        _ => tuple.windows(2).all(|w| w[0] <= w[1]) && tuple[0] > 0.0,
    };
    if !ordered {
        return Err(format!("radii {tuple:?} violate the ordering {shape}"));
    }
    Ok(())
}

fn flatten(prefix: &str, table: &Table, out: &mut BTreeMap<String, Value>) {
    for (key, value) in table {
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match value {
            Value::Table(inner) => flatten(&path, inner, out),
            other => {
                out.insert(path, other.clone());
            }
        }
    }
}

fn known_key(key: &str) -> bool {
    const FIXED: [&str; 21] = [
        "family",
        "profile_path",
        "a",
        "delta",
        "q",
        "n",
        "k",
        "mu",
        "H",
        "p",
        "omega",
        "max_radius",
        "beta",
        "tolerance",
        "theorems",
        "grid.cells",
        "grid.gamma",
        "quadrature.abs_tol",
        "quadrature.rel_tol",
        "quadrature.max_refinements",
        "output.path",
    ];
    FIXED.contains(&key) || key == "output.format" || key.starts_with("radii.")
}

struct Reader {
    entries: BTreeMap<String, Value>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.entries.remove(key)
    }

    fn number(key: &str, value: &Value) -> Result<f64> {
        match value {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(Error::config(key, "expected a number")),
        }
    }

    fn integer(key: &str, value: &Value) -> Result<usize> {
        match value {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            _ => Err(Error::config(key, "expected a non-negative integer")),
        }
    }

    fn string(key: &str, value: &Value) -> Result<String> {
        match value {
            Value::String(s) => Ok(s.clone()),
            _ => Err(Error::config(key, "expected a string")),
        }
    }

    fn list<V>(key: &str, value: &Value, item: impl Fn(&str, &Value) -> Result<V>) -> Result<Vec<V>> {
        let values = match value {
            Value::Array(items) => items.iter().map(|v| item(key, v)).collect::<Result<Vec<_>>>()?,
            single => vec![item(key, single)?],
        };
        if values.is_empty() {
            return Err(Error::config(key, "sweep list must be nonempty"));
        }
        Ok(values)
    }

    fn opt_number(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|v| Self::number(key, &v)).transpose()
    }
}

fn finite(key: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config(key, "values must be finite"));
    }
    Ok(())
}

fn positive(key: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::config(key, format!("must be positive and finite, got {value}")));
    }
    Ok(())
}

/// Parses and validates a suite configuration. Every error names the
/// offending key.
pub fn parse_config(text: &str) -> Result<SuiteConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("<document>", e.message().to_string()))?;
    let mut entries = BTreeMap::new();
    flatten("", &table, &mut entries);
    if let Some(key) = entries.keys().find(|k| !known_key(k)) {
        return Err(Error::config(key.clone(), "unknown key"));
    }
    for key in REQUIRED {
        if !entries.contains_key(key) {
            return Err(Error::config(key, "missing required key"));
        }
    }
    let mut rd = Reader { entries };

    let family_name = Reader::string("family", &rd.take("family").expect("required"))?;
    let family = FamilyKind::parse(&family_name)
        .ok_or_else(|| Error::config("family", format!("unknown family `{family_name}`")))?;

    let mut family_params = BTreeMap::new();
    for &(key, default) in family.parameter_defaults() {
        let values = match rd.take(key) {
            Some(v) => Reader::list(key, &v, Reader::number)?,
            None => vec![default],
        };
        finite(key, &values)?;
        family_params.insert(key.to_string(), values);
    }
    if let Some(q) = family_params.get("q") {
        if q.iter().any(|&q| q < 2.0) {
            return Err(Error::config("q", "weight exponent q must be >= 2"));
        }
    }
    for key in ["a", "delta", "q"] {
        if rd.entries.contains_key(key) {
            return Err(Error::config(key, format!("not a parameter of family `{family_name}`")));
        }
    }
    let profile_path = rd
        .take("profile_path")
        .map(|v| Reader::string("profile_path", &v).map(PathBuf::from))
        .transpose()?;
    match (family, &profile_path) {
        (FamilyKind::Tabulated, None) => {
            return Err(Error::config("profile_path", "missing required key for family `tabulated`"))
        }
        (FamilyKind::Tabulated, Some(_)) | (_, None) => {}
        (_, Some(_)) => {
            return Err(Error::config(
                "profile_path",
                format!("not a parameter of family `{family_name}`"),
            ))
        }
    }

    let n = Reader::list("n", &rd.take("n").expect("required"), Reader::integer)?;
    if let Some(bad) = n.iter().find(|&&n| n < 2) {
        return Err(Error::config("n", format!("dimension must be >= 2, got {bad}")));
    }
    let mut scalars = BTreeMap::new();
    for key in SCALAR_SWEEPS {
        let values = Reader::list(key, &rd.take(key).expect("required"), Reader::number)?;
        finite(key, &values)?;
        scalars.insert(key, values);
    }
    let (k, mu, curvature, p) = (
        scalars.remove("k").unwrap(),
        scalars.remove("mu").unwrap(),
        scalars.remove("H").unwrap(),
        scalars.remove("p").unwrap(),
    );
    for &kv in &k {
        positive("k", kv)?;
        for &m in &mu {
            if m * kv < 1.0 - 1e-12 {
                return Err(Error::config("mu", format!("mu >= 1/k violated (mu = {m}, k = {kv})")));
            }
        }
    }
    for &nv in &n {
        for &kv in &k {
            for &pv in &p {
                if !(2.0 * pv > nv as f64 + kv) {
                    return Err(Error::config(
                        "p",
                        format!("2p > n + k violated (p = {pv}, n = {nv}, k = {kv})"),
                    ));
                }
            }
        }
    }

    let omega = rd.opt_number("omega")?;
    if let Some(w) = omega {
        positive("omega", w)?;
    }
    let max_radius = rd.opt_number("max_radius")?;
    if let Some(l) = max_radius {
        positive("max_radius", l)?;
    }
    let beta = rd.opt_number("beta")?.unwrap_or(2.0);
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::config("beta", format!("must exceed 1, got {beta}")));
    }
    let tolerance = rd.opt_number("tolerance")?.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance >= 0.0) || !tolerance.is_finite() {
        return Err(Error::config("tolerance", format!("must be >= 0, got {tolerance}")));
    }

    let theorems_value = rd.take("theorems").expect("required");
    let mut theorems = match &theorems_value {
        Value::String(s) if s == "all" => TheoremId::ALL.to_vec(),
        other => Reader::list("theorems", other, |key, v| {
            Reader::string(key, v)?
                .parse::<TheoremId>()
                .map_err(|_| Error::config(key, format!("unknown theorem id {v}")))
        })?,
    };
    theorems.sort();
    theorems.dedup();

    let mut radii = BTreeMap::new();
    let radii_keys: Vec<String> = rd.entries.keys().filter(|k| k.starts_with("radii.")).cloned().collect();
    for key in radii_keys {
        let id: TheoremId = key["radii.".len()..]
            .parse()
            .map_err(|_| Error::config(key.clone(), "unknown theorem id"))?;
        let value = rd.take(&key).expect("listed");
        let tuples = match &value {
            Value::Array(items) if items.iter().all(|v| matches!(v, Value::Array(_))) && !items.is_empty() => items
                .iter()
                .map(|t| Reader::list(&key, t, Reader::number))
                .collect::<Result<Vec<_>>>()?,
            other => vec![Reader::list(&key, other, Reader::number)?],
        };
        for t in &tuples {
            check_radii(id, t).map_err(|m| Error::config(key.clone(), m))?;
        }
        radii.insert(id, tuples);
    }

    let grid_cells = match rd.take("grid.cells") {
        Some(v) => Reader::integer("grid.cells", &v)?,
        None => DEFAULT_CELLS,
    };
    if grid_cells < MIN_CELLS {
        return Err(Error::config("grid.cells", format!("must be >= {MIN_CELLS}, got {grid_cells}")));
    }
    let grid_gamma = rd.opt_number("grid.gamma")?;
    if let Some(g) = grid_gamma {
        if !(g >= 1.0) || !g.is_finite() {
            return Err(Error::config("grid.gamma", format!("must be >= 1, got {g}")));
        }
    }

    let defaults = QuadratureSpec::<f64>::default();
    let abs_tol = rd.opt_number("quadrature.abs_tol")?.unwrap_or(defaults.abs_tol);
    let rel_tol = rd.opt_number("quadrature.rel_tol")?.unwrap_or(defaults.rel_tol);
    let max_refinements = match rd.take("quadrature.max_refinements") {
        Some(v) => Reader::integer("quadrature.max_refinements", &v)?,
        None => defaults.max_refinements,
    };
    let quadrature =
        QuadratureSpec::new(abs_tol, rel_tol, max_refinements).map_err(|e| Error::config("quadrature", e.to_string()))?;

    let format_name = Reader::string("output.format", &rd.take("output.format").expect("required"))?;
    let format = OutputFormat::parse(&format_name)
        .ok_or_else(|| Error::config("output.format", format!("expected json or csv, got `{format_name}`")))?;
    let path = rd
        .take("output.path")
        .map(|v| Reader::string("output.path", &v).map(PathBuf::from))
        .transpose()?;

    debug_assert!(rd.entries.is_empty(), "unconsumed keys {:?}", rd.entries.keys());
    Ok(SuiteConfig {
        family,
        family_params,
        profile_path,
        n,
        k,
        mu,
        curvature,
        p,
        omega,
        max_radius,
        beta,
        tolerance,
        theorems,
        radii,
        grid_cells,
        grid_gamma,
        quadrature,
        output: OutputSpec { path, format },
    })
}

fn numbers(values: &[f64]) -> Value {
    if values.len() == 1 {
        Value::Float(values[0])
    } else {
        Value::Array(values.iter().map(|&v| Value::Float(v)).collect())
    }
}

fn path_value(path: &std::path::Path) -> Value {
    Value::String(path.to_string_lossy().into_owned())
}

/// Serializes a configuration into a document [`parse_config`] maps back to
/// the same configuration.
pub fn serialize_config(config: &SuiteConfig) -> String {
    let mut root = Table::new();
    root.insert("family".into(), Value::String(config.family.name().into()));
    for (key, values) in &config.family_params {
        root.insert(key.clone(), numbers(values));
    }
    if let Some(path) = &config.profile_path {
        root.insert("profile_path".into(), path_value(path));
    }
    let n = &config.n;
    root.insert(
        "n".into(),
        if n.len() == 1 {
            Value::Integer(n[0] as i64)
        } else {
            Value::Array(n.iter().map(|&v| Value::Integer(v as i64)).collect())
        },
    );
    root.insert("k".into(), numbers(&config.k));
    root.insert("mu".into(), numbers(&config.mu));
    root.insert("H".into(), numbers(&config.curvature));
    root.insert("p".into(), numbers(&config.p));
    if let Some(w) = config.omega {
        root.insert("omega".into(), Value::Float(w));
    }
    if let Some(l) = config.max_radius {
        root.insert("max_radius".into(), Value::Float(l));
    }
    root.insert("beta".into(), Value::Float(config.beta));
    root.insert("tolerance".into(), Value::Float(config.tolerance));
    root.insert(
        "theorems".into(),
        Value::Array(config.theorems.iter().map(|id| Value::String(id.as_str().into())).collect()),
    );

    let mut radii = Table::new();
    for (id, tuples) in &config.radii {
        let list = tuples
            .iter()
            .map(|t| Value::Array(t.iter().map(|&v| Value::Float(v)).collect()))
            .collect();
        radii.insert(id.as_str().into(), Value::Array(list));
    }
    if !radii.is_empty() {
        root.insert("radii".into(), Value::Table(radii));
    }

    let mut grid = Table::new();
    grid.insert("cells".into(), Value::Integer(config.grid_cells as i64));
    if let Some(g) = config.grid_gamma {
        grid.insert("gamma".into(), Value::Float(g));
    }
    root.insert("grid".into(), Value::Table(grid));

    let mut quad = Table::new();
    quad.insert("abs_tol".into(), Value::Float(config.quadrature.abs_tol));
    quad.insert("rel_tol".into(), Value::Float(config.quadrature.rel_tol));
    quad.insert(
        "max_refinements".into(),
        Value::Integer(config.quadrature.max_refinements as i64),
    );
    root.insert("quadrature".into(), Value::Table(quad));

    let mut output = Table::new();
    output.insert("format".into(), Value::String(config.output.format.name().into()));
    if let Some(path) = &config.output.path {
        output.insert("path".into(), path_value(path));
    }
    root.insert("output".into(), Value::Table(output));
    toml::to_string(&root).expect("configuration tables always serialize")
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl SuiteConfig {
    /// Cartesian product of all sweep lists. Keys vary in sorted order (the
    /// last key fastest) and values in increasing order.
    pub fn sweep(&self) -> Vec<SweepPoint> {
        let mut axes: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (key, values) in &self.family_params {
            axes.insert(key.clone(), sorted(values));
        }
        let mut n: Vec<usize> = self.n.clone();
        n.sort();
        n.dedup();
        axes.insert("n".into(), n.iter().map(|&v| v as f64).collect());
        axes.insert("k".into(), sorted(&self.k));
        axes.insert("mu".into(), sorted(&self.mu));
        axes.insert("H".into(), sorted(&self.curvature));
        axes.insert("p".into(), sorted(&self.p));

        let mut points: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new()];
        for (key, values) in &axes {
            points = points
                .into_iter()
                .flat_map(|point| {
                    values.iter().map(move |&v| {
                        let mut next = point.clone();
                        next.insert(key.clone(), v);
                        next
                    })
                })
                .collect();
        }
        points
            .into_iter()
            .map(|mut point| {
                let take = |point: &mut BTreeMap<String, f64>, key: &str| point.remove(key).expect("axis present");
                let n = take(&mut point, "n") as usize;
                let k = take(&mut point, "k");
                let mu = take(&mut point, "mu");
                let curvature = take(&mut point, "H");
                let p = take(&mut point, "p");
                SweepPoint {
                    family_params: point,
                    n,
                    k,
                    mu,
                    curvature,
                    p,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
family = "sphere"
n = 3
k = 1
mu = 1
H = 0.6666666666666666
p = 3
theorems = "all"
output.format = "json"
"#;

    fn key_of(err: Error) -> String {
        match err {
            Error::Config { key, .. } => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.grid_cells, 4096);
        assert_eq!(c.grid_gamma, None);
        assert_eq!(c.tolerance, 1e-7);
        assert_eq!(c.theorems.len(), TheoremId::ALL.len());
        assert_eq!(c.sweep().len(), 1);
    }

    #[test]
    fn mu_constraint_names_key() {
        let text = MINIMAL.replace("k = 1\nmu = 1", "k = 2\nmu = 0.1").replace("p = 3", "p = 4");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("mu >= 1/k violated"), "{err}");
        assert_eq!(key_of(err), "mu");
    }

    #[test]
    fn p_sweep() {
        let c = parse_config(&MINIMAL.replace("p = 3", "p = [2.5, 3, 4]")).unwrap();
        assert_eq!(c.sweep().len(), 3);
        let err = parse_config(&MINIMAL.replace("p = 3", "p = [2.0, 3]")).unwrap_err();
        assert_eq!(key_of(err), "p");
    }

    #[test]
    fn errors_name_keys() {
        assert_eq!(key_of(parse_config(&(MINIMAL.to_string() + "bogus = 1\n")).unwrap_err()), "bogus");
        assert_eq!(key_of(parse_config(&MINIMAL.replace("n = 3\n", "")).unwrap_err()), "n");
        assert_eq!(
            key_of(parse_config(&(MINIMAL.to_string() + "radii.T3 = [0.1, 0.5, 0.4, 1.0]\n")).unwrap_err()),
            "radii.T3"
        );
        assert_eq!(key_of(parse_config(&(MINIMAL.to_string() + "a = 1\n")).unwrap_err()), "a");
        assert_eq!(
            key_of(parse_config(&(MINIMAL.to_string() + "grid.cells = 8\n")).unwrap_err()),
            "grid.cells"
        );
    }

    #[test]
    fn sweep_order_is_sorted() {
        let text = MINIMAL
            .replace("family = \"sphere\"", "family = \"gaussian_flat\"\na = [2.0, 0.5]")
            .replace("p = 3", "p = [4, 3]");
        let c = parse_config(&text).unwrap();
        let pts = c.sweep();
        let order: Vec<(f64, f64)> = pts.iter().map(|p| (p.curvature, p.family_params["a"])).collect();
        assert_eq!(order.len(), 4);
        assert_eq!(order[0].1, 0.5);
        assert_eq!((pts[0].p, pts[1].p), (3.0, 4.0));
    }

    #[test]
    fn round_trip() {
        let text = MINIMAL.to_string() + "radii.T2 = [[0.5, 1.0], [0.2, 0.8]]\ngrid.gamma = 2.5\noutput.path = \"x.json\"\n";
        let c = parse_config(&text).unwrap();
        assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c);
    }
}
