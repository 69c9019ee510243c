//! Run configuration, JSON spec ingestion and deterministic report output.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructions::{catalog, CatalogObject, ConstructionError};
use crate::expr::{ExprError, ScalarFieldExpr};
use crate::identities::{self, VerificationReport, VerifyError};
use crate::jet::JetError;
use crate::manifold::{ChartManifold, CovectorField, EndoField, ManifoldError, VectorField};
use crate::sampling::{Sampling, Verdict};
use crate::structure::{AcmStructure, AhStructure, ClassReport, StructureError};
use crate::submersion::{SubmersionError, SubmersionSpec};

/// Failures of a run, split by exit code.
#[derive(Debug, Error)]
pub enum RunError {
    /// Bad input, schema, config or identity id: exit code 1.
    #[error("{0}")]
    Input(String),
    /// The structure itself is invalid: exit code 2.
    #[error("{0}")]
    Invariant(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 1,
            RunError::Invariant(_) => 2,
        }
    }
}

impl From<ManifoldError> for RunError {
    fn from(e: ManifoldError) -> Self {
        match e {
            ManifoldError::NotSymmetric { .. }
            | ManifoldError::NotPositiveDefinite { .. }
            | ManifoldError::Degenerate(_)
            | ManifoldError::Expr(ExprError::Domain { .. })
            | ManifoldError::Jet(
                JetError::DivisionByZero | JetError::Domain(_) | JetError::Singular { .. } | JetError::Dependent { .. },
            ) => RunError::Invariant(e.to_string()),
            _ => RunError::Input(e.to_string()),
        }
    }
}

impl From<ExprError> for RunError {
    fn from(e: ExprError) -> Self {
        ManifoldError::from(e).into()
    }
}

impl From<StructureError> for RunError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Manifold(m) => m.into(),
            StructureError::Invariant { .. } | StructureError::Precondition(_) => RunError::Invariant(e.to_string()),
            _ => RunError::Input(e.to_string()),
        }
    }
}

impl From<SubmersionError> for RunError {
    fn from(e: SubmersionError) -> Self {
        match e {
            SubmersionError::Structure(s) => s.into(),
            SubmersionError::Shape(_) | SubmersionError::NotAdapted { .. } => RunError::Input(e.to_string()),
            _ => RunError::Invariant(e.to_string()),
        }
    }
}

impl From<ConstructionError> for RunError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Unknown { .. } => RunError::Input(e.to_string()),
            ConstructionError::Submersion(s) => s.into(),
        }
    }
}

impl From<VerifyError> for RunError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Submersion(s) => s.into(),
            _ => RunError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Verify,
    /// Classification followed by verification when the input is a submersion.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Md,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `catalog:<name>` or a path to a JSON spec.
    pub input: String,
    pub command: Command,
    pub sampling: Sampling,
    pub format: Format,
    /// `all`, exact ids or `prefix.*` patterns.
    pub identities: Vec<String>,
}

impl RunConfig {
    pub fn new(input: impl Into<String>, command: Command) -> Self {
        Self {
            input: input.into(),
            command,
            sampling: Sampling::default(),
            format: Format::Json,
            identities: vec!["all".into()],
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let s = &self.sampling;
        if s.points == 0 {
            return Err(RunError::Input("points must be ≥ 1".into()));
        }
        if s.vectors == 0 {
            return Err(RunError::Input("vectors must be ≥ 1".into()));
        }
        if !(s.tol > 0.0 && s.tol.is_finite()) {
            return Err(RunError::Input(format!(
                "tol must be positive and finite, got {}",
                s.tol
            )));
        }
        if self.identities.is_empty() {
            return Err(RunError::Input("identity filter is empty".into()));
        }
        Ok(())
    }
}

// ---- JSON schema ------------------------------------------------------------

/// `metric` may be row-major flat or nested rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricJson {
    Flat(Vec<ScalarFieldExpr>),
    Rows(Vec<Vec<ScalarFieldExpr>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldJson {
    pub dimension: usize,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<[f64; 2]>>,
    pub metric: MetricJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcmJson {
    pub phi: Vec<Vec<ScalarFieldExpr>>,
    pub xi: Vec<ScalarFieldExpr>,
    pub eta: Vec<ScalarFieldExpr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AhJson {
    pub j: Vec<Vec<ScalarFieldExpr>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureBlockJson {
    Acm(AcmJson),
    Ah(AhJson),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureJson {
    pub manifold: ManifoldJson,
    pub structure: StructureBlockJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmersionJson {
    pub total: StructureJson,
    pub base: StructureJson,
    pub projection: Vec<ScalarFieldExpr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecJson {
    Submersion(SubmersionJson),
    Structure(StructureJson),
}

fn schema_err(what: &str, e: serde_json::Error) -> RunError {
    RunError::Input(format!("schema error in {what}: {e}"))
}

/// Parses a spec, dispatching on the top-level keys so schema messages
/// name the offending field.
pub fn parse_spec(text: &str) -> Result<SpecJson, RunError> {
    let v: Value = serde_json::from_str(text).map_err(|e| RunError::Input(format!("malformed JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| RunError::Input("spec must be a JSON object".into()))?;
    if obj.contains_key("total") || obj.contains_key("projection") {
        Ok(SpecJson::Submersion(parse_submersion(v)?))
    } else if obj.contains_key("manifold") || obj.contains_key("structure") {
        Ok(SpecJson::Structure(parse_structure(v, "spec")?))
    } else {
        let keys: Vec<_> = obj.keys().cloned().collect();
        Err(RunError::Input(format!(
            "spec must have keys {{manifold, structure}} or {{total, base, projection}}, found {keys:?}"
        )))
    }
}

fn parse_submersion(mut v: Value) -> Result<SubmersionJson, RunError> {
    let obj = v.as_object_mut().expect("checked object");
    for k in obj.keys() {
        if !matches!(k.as_str(), "total" | "base" | "projection") {
            return Err(RunError::Input(format!(
                "schema error in submersion spec: unknown field `{k}`"
            )));
        }
    }
    let mut take = |k: &str| {
        obj.remove(k)
            .ok_or_else(|| RunError::Input(format!("schema error in submersion spec: missing field `{k}`")))
    };
    let total = parse_structure(take("total")?, "total")?;
    let base = parse_structure(take("base")?, "base")?;
    let projection = serde_json::from_value(take("projection")?).map_err(|e| schema_err("projection", e))?;
    Ok(SubmersionJson {
        total,
        base,
        projection,
    })
}

fn parse_structure(mut v: Value, what: &str) -> Result<StructureJson, RunError> {
    let obj = v
        .as_object_mut()
        .ok_or_else(|| RunError::Input(format!("schema error in {what}: expected an object")))?;
    for k in obj.keys() {
        if !matches!(k.as_str(), "manifold" | "structure") {
            return Err(RunError::Input(format!("schema error in {what}: unknown field `{k}`")));
        }
    }
    let manifold = obj
        .remove("manifold")
        .ok_or_else(|| RunError::Input(format!("schema error in {what}: missing field `manifold`")))?;
    let structure = obj
        .remove("structure")
        .ok_or_else(|| RunError::Input(format!("schema error in {what}: missing field `structure`")))?;
    let manifold: ManifoldJson =
        serde_json::from_value(manifold).map_err(|e| schema_err(&format!("{what}.manifold"), e))?;
    let sobj = structure
        .as_object()
        .ok_or_else(|| RunError::Input(format!("schema error in {what}.structure: expected an object")))?;
    let structure = if sobj.contains_key("j") {
        StructureBlockJson::Ah(
            serde_json::from_value(structure).map_err(|e| schema_err(&format!("{what}.structure"), e))?,
        )
    } else {
        StructureBlockJson::Acm(
            serde_json::from_value(structure).map_err(|e| schema_err(&format!("{what}.structure"), e))?,
        )
    };
    Ok(StructureJson { manifold, structure })
}

fn square(rows: &[Vec<ScalarFieldExpr>], dim: usize, what: &str) -> Result<Vec<ScalarFieldExpr>, RunError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(RunError::Input(format!("{what} must be a {dim}×{dim} array")));
    }
    Ok(rows.iter().flatten().cloned().collect())
}

fn build_chart(m: &ManifoldJson) -> Result<ChartManifold, RunError> {
    if m.coordinates.len() != m.dimension {
        return Err(RunError::Input(format!(
            "manifold.dimension is {} but {} coordinates are given",
            m.dimension,
            m.coordinates.len()
        )));
    }
    let metric = match &m.metric {
        MetricJson::Flat(v) => {
            if v.len() != m.dimension * m.dimension {
                return Err(RunError::Input(format!(
                    "metric must have {} entries",
                    m.dimension * m.dimension
                )));
            }
            v.clone()
        }
        MetricJson::Rows(r) => square(r, m.dimension, "metric")?,
    };
    let domain = m.domain.as_ref().map(|d| d.iter().map(|&[a, b]| (a, b)).collect());
    Ok(ChartManifold::new(m.coordinates.clone(), domain, metric)?)
}

pub enum BuiltStructure {
    Acm(AcmStructure),
    Ah(AhStructure),
}

fn build_structure(s: &StructureJson) -> Result<BuiltStructure, RunError> {
    let chart = build_chart(&s.manifold)?;
    let dim = chart.dim();
    Ok(match &s.structure {
        StructureBlockJson::Acm(a) => {
            let phi = EndoField {
                dim,
                components: square(&a.phi, dim, "phi")?,
            };
            let xi = VectorField {
                components: a.xi.clone(),
            };
            let eta = CovectorField {
                components: a.eta.clone(),
            };
            BuiltStructure::Acm(AcmStructure::new(chart, phi, xi, eta)?)
        }
        StructureBlockJson::Ah(h) => {
            let j = EndoField {
                dim,
                components: square(&h.j, dim, "j")?,
            };
            BuiltStructure::Ah(AhStructure::new(chart, j)?)
        }
    })
}

/// Builds the object described by a parsed spec.
pub fn build_spec(spec: &SpecJson) -> Result<CatalogObject, RunError> {
    Ok(match spec {
        SpecJson::Structure(s) => match build_structure(s)? {
            BuiltStructure::Acm(a) => CatalogObject::Acm(a),
            BuiltStructure::Ah(h) => CatalogObject::Ah(h),
        },
        SpecJson::Submersion(s) => {
            let BuiltStructure::Acm(total) = build_structure(&s.total)? else {
                return Err(RunError::Input(
                    "total must carry an almost contact metric structure {phi, xi, eta}".into(),
                ));
            };
            let BuiltStructure::Ah(base) = build_structure(&s.base)? else {
                return Err(RunError::Input(
                    "base must carry an almost Hermitian structure {j}".into(),
                ));
            };
            CatalogObject::Submersion(SubmersionSpec::new(total, base, s.projection.clone())?)
        }
    })
}

fn manifold_json(c: &ChartManifold) -> ManifoldJson {
    ManifoldJson {
        dimension: c.dim(),
        coordinates: c.coords().to_vec(),
        domain: Some(c.domain().iter().map(|&(a, b)| [a, b]).collect()),
        metric: MetricJson::Rows(rows(c.metric_exprs(), c.dim())),
    }
}

fn rows(v: &[ScalarFieldExpr], dim: usize) -> Vec<Vec<ScalarFieldExpr>> {
    v.chunks(dim).map(|r| r.to_vec()).collect()
}

fn acm_json(a: &AcmStructure) -> StructureJson {
    StructureJson {
        manifold: manifold_json(a.chart()),
        structure: StructureBlockJson::Acm(AcmJson {
            phi: rows(&a.phi().components, a.dim()),
            xi: a.xi().components.clone(),
            eta: a.eta().components.clone(),
        }),
    }
}

fn ah_json(h: &AhStructure) -> StructureJson {
    StructureJson {
        manifold: manifold_json(h.chart()),
        structure: StructureBlockJson::Ah(AhJson {
            j: rows(&h.j().components, h.dim()),
        }),
    }
}

/// Serializable form of any object; feeding it back to [`build_spec`]
/// rebuilds an equivalent object.
pub fn spec_of(obj: &CatalogObject) -> SpecJson {
    match obj {
        CatalogObject::Acm(a) => SpecJson::Structure(acm_json(a)),
        CatalogObject::Ah(h) => SpecJson::Structure(ah_json(h)),
        CatalogObject::Submersion(s) => SpecJson::Submersion(SubmersionJson {
            total: acm_json(s.total()),
            base: ah_json(s.base()),
            projection: s.projection().to_vec(),
        }),
    }
}

/// SHA-256 of the spec's canonical JSON (sorted keys, compact).
pub fn spec_hash(spec: &SpecJson) -> String {
    let v = serde_json::to_value(spec).expect("spec serializes");
    let canonical = serde_json::to_string(&v).expect("value serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub struct ResolvedInput {
    pub label: String,
    pub object: CatalogObject,
    pub spec_sha256: String,
}

/// Resolves `catalog:<name>` or reads a JSON spec from disk.
pub fn resolve_input(input: &str) -> Result<ResolvedInput, RunError> {
    let object = if let Some(name) = input.strip_prefix("catalog:") {
        catalog(name)?.object
    } else {
        let text =
            std::fs::read_to_string(input).map_err(|e| RunError::Input(format!("cannot read `{input}`: {e}")))?;
        build_spec(&parse_spec(&text)?)?
    };
    let spec_sha256 = spec_hash(&spec_of(&object));
    Ok(ResolvedInput {
        label: input.to_string(),
        object,
        spec_sha256,
    })
}

// ---- documents ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSection {
    /// `structure`, `total` or `base`.
    pub target: String,
    pub reports: Vec<ClassReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub input: String,
    pub spec_sha256: String,
    pub sampling: Sampling,
    pub classifications: Vec<ClassSection>,
    pub verifications: Vec<VerificationReport>,
}

impl ReportDocument {
    fn new(cfg: &RunConfig, input: &ResolvedInput) -> Self {
        Self {
            tool: "contactgeo".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cfg.command,
            input: input.label.clone(),
            spec_sha256: input.spec_sha256.clone(),
            sampling: cfg.sampling,
            classifications: Vec::new(),
            verifications: Vec::new(),
        }
    }

    /// Counts of `holds`, `fails`, `inconclusive`, `not_applicable`.
    pub fn tally(&self) -> [usize; 4] {
        let mut t = [0; 4];
        let verdicts = self
            .classifications
            .iter()
            .flat_map(|s| s.reports.iter().map(|r| r.verdict))
            .chain(self.verifications.iter().map(|r| r.verdict));
        for v in verdicts {
            t[match v {
                Verdict::Holds => 0,
                Verdict::Fails => 1,
                Verdict::Inconclusive => 2,
                Verdict::NotApplicable => 3,
            }] += 1;
        }
        t
    }
}

fn classify_sections(obj: &CatalogObject, s: &Sampling) -> Result<Vec<ClassSection>, RunError> {
    let acm = |target: &str, a: &AcmStructure| -> Result<ClassSection, RunError> {
        a.check_invariants(s.points, s.seed)?;
        Ok(ClassSection {
            target: target.into(),
            reports: a.classify_all(s)?,
        })
    };
    let ah = |target: &str, h: &AhStructure| -> Result<ClassSection, RunError> {
        h.check_invariants(s.points, s.seed)?;
        Ok(ClassSection {
            target: target.into(),
            reports: h.classify_all(s)?,
        })
    };
    Ok(match obj {
        CatalogObject::Acm(a) => vec![acm("structure", a)?],
        CatalogObject::Ah(h) => vec![ah("structure", h)?],
        CatalogObject::Submersion(sp) => {
            sp.validate(s.points, s.seed)?;
            vec![acm("total", sp.total())?, ah("base", sp.base())?]
        }
    })
}

fn verifications(obj: &CatalogObject, cfg: &RunConfig) -> Result<Vec<VerificationReport>, RunError> {
    let CatalogObject::Submersion(sp) = obj else {
        return Err(RunError::Input(format!(
            "`{}` is a {:?} structure; verify needs a submersion spec {{total, base, projection}}",
            cfg.input,
            obj.kind()
        )));
    };
    let patterns: Vec<&str> = cfg.identities.iter().map(String::as_str).collect();
    identities::select(&patterns)?;
    sp.validate(cfg.sampling.points, cfg.sampling.seed)?;
    Ok(identities::verify(sp, &patterns, &cfg.sampling)?)
}

/// Classifies the input's structures: the structure itself, or the total
/// space and base of a submersion.
pub fn run_classify(cfg: &RunConfig) -> Result<ReportDocument, RunError> {
    cfg.validate()?;
    let input = resolve_input(&cfg.input)?;
    let mut doc = ReportDocument::new(cfg, &input);
    doc.classifications = classify_sections(&input.object, &cfg.sampling)?;
    Ok(doc)
}

pub fn run_verify(cfg: &RunConfig) -> Result<ReportDocument, RunError> {
    cfg.validate()?;
    let input = resolve_input(&cfg.input)?;
    let mut doc = ReportDocument::new(cfg, &input);
    doc.verifications = verifications(&input.object, cfg)?;
    Ok(doc)
}

/// Classification, plus verification when the input is a submersion.
pub fn run_report(cfg: &RunConfig) -> Result<ReportDocument, RunError> {
    cfg.validate()?;
    let input = resolve_input(&cfg.input)?;
    let mut doc = ReportDocument::new(cfg, &input);
    doc.classifications = classify_sections(&input.object, &cfg.sampling)?;
    if matches!(input.object, CatalogObject::Submersion(_)) {
        doc.verifications = verifications(&input.object, cfg)?;
    }
    Ok(doc)
}

pub fn run(cfg: &RunConfig) -> Result<ReportDocument, RunError> {
    match cfg.command {
        Command::Classify => run_classify(cfg),
        Command::Verify => run_verify(cfg),
        Command::Report => run_report(cfg),
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn md_residual(x: Option<f64>) -> String {
    match x {
        Some(x) => format!("{x:.3e}"),
        None => "n/a".into(),
    }
}

fn md_extras(e: &crate::sampling::Extras) -> String {
    e.iter()
        .map(|(k, v)| format!("{k} = {v:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders the document. JSON keeps field order and full precision.
pub fn emit_report(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Md => {
            use std::fmt::Write;
            let mut s = String::new();
            let sm = &doc.sampling;
            let _ = writeln!(s, "# {} {:?} report\n", doc.tool, doc.command);
            let _ = writeln!(s, "- input: `{}`", doc.input);
            let _ = writeln!(s, "- spec sha256: `{}`", doc.spec_sha256);
            let _ = writeln!(
                s,
                "- seed {}, {} points × {} vectors, tolerance {:e}",
                sm.seed, sm.points, sm.vectors, sm.tol
            );
            let [h, f, i, n] = doc.tally();
            let _ = writeln!(
                s,
                "- verdicts: {h} holds, {f} fails, {i} inconclusive, {n} not applicable"
            );
            for sec in &doc.classifications {
                let _ = writeln!(s, "\n## Classes of the {}\n", sec.target);
                let _ = writeln!(s, "| class | statement | residual | verdict | extras |");
                let _ = writeln!(s, "|---|---|---|---|---|");
                for r in &sec.reports {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} |",
                        r.class_id,
                        md_cell(&r.statement),
                        md_residual(Some(r.max_residual)),
                        r.verdict.as_str(),
                        md_extras(&r.extras)
                    );
                }
            }
            if !doc.verifications.is_empty() {
                let _ = writeln!(s, "\n## Identities\n");
                let _ = writeln!(s, "| identity | statement | residual | verdict | note |");
                let _ = writeln!(s, "|---|---|---|---|---|");
                for r in &doc.verifications {
                    let mut note = r.reason.clone().unwrap_or_default();
                    let ex = md_extras(&r.extras);
                    if !ex.is_empty() {
                        if !note.is_empty() {
                            note.push_str("; ");
                        }
                        note.push_str(&ex);
                    }
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} |",
                        r.identity,
                        md_cell(&r.statement),
                        md_residual(r.max_residual),
                        r.verdict.as_str(),
                        md_cell(&note)
                    );
                }
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_specs_round_trip_through_json() {
        for name in ["cosymplectic_r3", "kodaira_thurston", "hopf_like_r5_to_r4"] {
            let obj = catalog(name).unwrap().object;
            let spec = spec_of(&obj);
            let text = serde_json::to_string(&spec).unwrap();
            let parsed = parse_spec(&text).unwrap();
            assert_eq!(serde_json::to_string(&parsed).unwrap(), text, "{name}");
            let rebuilt = build_spec(&parsed).unwrap();
            assert_eq!(spec_hash(&spec_of(&rebuilt)), spec_hash(&spec), "{name}");
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = parse_spec(r#"{"manifold": {"dimension": 1, "coordinates": ["x"], "metric": ["1"], "colour": 3}, "structure": {"j": [["0"]]}}"#)
            .err()
            .unwrap();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("colour"), "{e}");
        let e = parse_spec(r#"{"total": {}, "base": {}}"#).err().unwrap();
        assert!(
            e.to_string().contains("manifold") || e.to_string().contains("projection"),
            "{e}"
        );
    }

    #[test]
    fn config_bounds() {
        let mut c = RunConfig::new("catalog:cosymplectic_r3", Command::Classify);
        c.sampling.points = 0;
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
        c.sampling.points = 4;
        c.sampling.tol = 0.0;
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
    }
}
