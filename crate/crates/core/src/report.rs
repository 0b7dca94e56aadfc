//! Input parsing, job configuration, pipeline orchestration and stable
//! serialization of analysis reports and grid dumps.

use crate::algebra::{AlgebraError, StructureAlgebra};
use crate::metric::{Chart, MetricError};
use crate::obstruction::{
    self, AlgebraOutcome, FtaOutcome, GridRow, ObstructionError, ProbeConfig, WitnessKind,
};
use crate::poly::{cx, Cx, Poly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures keyed to the CLI exit codes: 2 parse, 3 validation, 4 numeric.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 4,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ZeroPolynomial | PolyError::ZeroModulus | PolyError::NonFinite => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Poly(p) => p.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Poly(p) => p.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::Poly(p) => p.into(),
            ObstructionError::Algebra(a) => a.into(),
            ObstructionError::Metric(m) => m.into(),
            ObstructionError::NoProbeDirection => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Poly,
    Algebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone)]
pub struct Tolerances {
    pub tol_root: f64,
    pub tol_harmonic: f64,
    pub tol_ledger: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_root: 1e-10,
            tol_harmonic: 1e-4,
            tol_ledger: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub mode: Mode,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub output: OutputFormat,
    pub emit_grids: bool,
    pub out_dir: std::path::PathBuf,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    pub extent: f64,
    pub resolution: usize,
    pub stencil_h: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            extent: 3.0,
            resolution: 41,
            stencil_h: 1e-3,
        }
    }
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            mode: Mode::Poly,
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputFormat::Json,
            emit_grids: false,
            out_dir: std::path::PathBuf::from("."),
            rng_seed: 0,
        }
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.resolution < 8 {
            return Err(CliError::Validation(
                "grid resolution must be at least 8".into(),
            ));
        }
        if !(self.grid.stencil_h > 0.0) {
            return Err(CliError::Validation("stencil step must be positive".into()));
        }
        if !(self.grid.extent > 1.2) {
            return Err(CliError::Validation(
                "grid extent must exceed 1.2 to cover the chart overlap band".into(),
            ));
        }
        Ok(())
    }

    pub fn probe_config(&self) -> ProbeConfig {
        ProbeConfig {
            extent: self.grid.extent,
            resolution: self.grid.resolution,
            stencil_h: self.grid.stencil_h,
            tol_root: self.tolerances.tol_root,
        }
    }
}

/// Parsed problem input: a polynomial, or a structure-constant algebra with a
/// distinguished element.
#[derive(Debug)]
pub enum ProblemInput {
    Poly(Poly),
    Algebra { algebra: StructureAlgebra, element: Vec<Cx> },
}

#[derive(Deserialize)]
struct PolyJson {
    coeffs: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct AlgebraJson {
    dim: usize,
    #[serde(default)]
    unit: usize,
    constants: Vec<[f64; 2]>,
    element: Vec<[f64; 2]>,
}

fn pairs_to_cx(pairs: &[[f64; 2]]) -> Vec<Cx> {
    pairs.iter().map(|p| cx(p[0], p[1])).collect()
}

/// Polynomial input: either whitespace-separated real coefficients
/// (low to high) or JSON `{"coeffs": [[re, im], ...]}`.
pub fn parse_poly_input(text: &str) -> Result<Poly, CliError> {
    let trimmed = text.trim();
    let coeffs: Vec<Cx> = if trimmed.starts_with('{') {
        let parsed: PolyJson =
            serde_json::from_str(trimmed).map_err(|e| CliError::Parse(e.to_string()))?;
        pairs_to_cx(&parsed.coeffs)
    } else {
        trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map(|r| cx(r, 0.0))
                    .map_err(|e| CliError::Parse(format!("bad coefficient {tok:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    if coeffs.is_empty() {
        return Err(CliError::Parse("empty coefficient list".into()));
    }
    let p = Poly::checked(coeffs)?;
    if p.is_zero() || p.degree() < 1 {
        return Err(CliError::Validation(
            "polynomial must be nonzero of degree at least 1".into(),
        ));
    }
    Ok(p)
}

/// Algebra input: JSON with the dimension, the flattened structure tensor in
/// index order (i*dim + j)*dim + k, the unit basis index and the element.
pub fn parse_algebra_input(text: &str) -> Result<(StructureAlgebra, Vec<Cx>), CliError> {
    let parsed: AlgebraJson =
        serde_json::from_str(text.trim()).map_err(|e| CliError::Parse(e.to_string()))?;
    let constants = pairs_to_cx(&parsed.constants);
    let algebra = StructureAlgebra::new(parsed.dim, constants, parsed.unit)?;
    if parsed.element.len() != parsed.dim {
        return Err(CliError::Validation(format!(
            "element vector has length {}, expected {}",
            parsed.element.len(),
            parsed.dim
        )));
    }
    Ok((algebra, pairs_to_cx(&parsed.element)))
}

// ---------------------------------------------------------------------------
// report schema (field order here is the serialized key order)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub input: InputEcho,
    pub normalization_constant: [f64; 2],
    pub f_coeffs: Vec<[f64; 2]>,
    pub functional_equation_residual: f64,
    pub factorization_check: f64,
    pub singularities: Vec<SingularityEntry>,
    pub gauss_bonnet: GaussBonnetReport,
    pub flatness: FlatnessReport,
    pub completeness: CompletenessReport,
    pub maximum_principle: MaximumPrincipleReport,
    pub recovered_roots: Vec<RecoveredRootEntry>,
    pub verdict: VerdictReport,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputEcho {
    pub mode: String,
    pub degree: usize,
    pub polynomial: Vec<[f64; 2]>,
    pub algebra: Option<AlgebraEcho>,
    pub grid: GridEcho,
    pub tolerances: TolerancesEcho,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraEcho {
    pub dim: usize,
    pub element: Vec<[f64; 2]>,
    pub minimal_polynomial: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridEcho {
    pub extent: f64,
    pub resolution: usize,
    pub stencil_h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TolerancesEcho {
    pub tol_root: f64,
    pub tol_harmonic: f64,
    pub tol_ledger: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SingularityEntry {
    pub chart: Chart,
    pub location: [f64; 2],
    pub order: usize,
    pub cone_angle: f64,
    pub defect: f64,
    pub factor: String,
    pub flux: f64,
    pub flux_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GaussBonnetReport {
    pub defects: Vec<f64>,
    pub total_defect: f64,
    pub target: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FlatnessReport {
    pub max_harmonicity_residual: f64,
    pub max_abs_curvature: f64,
    pub smooth_grid_points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CompletenessReport {
    pub incomplete: bool,
    pub witnesses: Vec<WitnessEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WitnessEntry {
    pub chart: Chart,
    pub location: [f64; 2],
    pub order: usize,
    pub kind: String,
    pub start: Option<[f64; 2]>,
    pub length: Option<f64>,
    pub last_segment_length: Option<f64>,
    pub local_model_length: Option<f64>,
    pub partial_length: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MaximumPrincipleReport {
    pub max_abs_deviation: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub divergence: Vec<DivergenceEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DivergenceEntry {
    pub chart: Chart,
    pub location: [f64; 2],
    pub u_samples: [f64; 3],
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecoveredRootEntry {
    pub root: [f64; 2],
    pub multiplicity: usize,
    pub residual: f64,
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerdictReport {
    pub degree: usize,
    pub conclusion: String,
    pub narrative: String,
}

fn cx_pair(c: Cx) -> [f64; 2] {
    [c.re, c.im]
}

fn poly_pairs(p: &Poly) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|&c| cx_pair(c)).collect()
}

fn source_str(s: obstruction::FactorSource) -> String {
    match s {
        obstruction::FactorSource::P => "p".to_string(),
        obstruction::FactorSource::PStar => "p_star".to_string(),
        obstruction::FactorSource::Both => "both".to_string(),
    }
}

fn outcome_to_report(out: &FtaOutcome, input: InputEcho) -> Report {
    let mut singularities = Vec::new();
    for (i, attr) in out.attributions.iter().enumerate() {
        let s = &out.ledger.entries[i].point;
        let flux = out.fluxes[i];
        singularities.push(SingularityEntry {
            chart: s.location.chart,
            location: cx_pair(s.location.w),
            order: s.order,
            cone_angle: s.cone_angle,
            defect: s.defect,
            factor: source_str(attr.source),
            flux,
            flux_error: (flux - crate::metric::TAU * s.order as f64).abs(),
        });
    }
    let witnesses = out
        .completeness
        .witnesses
        .iter()
        .map(|w| match &w.kind {
            WitnessKind::Finite {
                start,
                length,
                last_segment_length,
                local_model_length,
            } => WitnessEntry {
                chart: w.singularity.location.chart,
                location: cx_pair(w.singularity.location.w),
                order: w.singularity.order,
                kind: "finite".to_string(),
                start: Some(cx_pair(start.w)),
                length: Some(*length),
                last_segment_length: Some(*last_segment_length),
                local_model_length: Some(*local_model_length),
                partial_length: None,
            },
            WitnessKind::InfiniteEnd { partial_length } => WitnessEntry {
                chart: w.singularity.location.chart,
                location: cx_pair(w.singularity.location.w),
                order: w.singularity.order,
                kind: "infinite_end".to_string(),
                start: None,
                length: None,
                last_segment_length: None,
                local_model_length: None,
                partial_length: Some(*partial_length),
            },
        })
        .collect();
    let divergence = out
        .max_principle
        .divergence
        .iter()
        .map(|d| DivergenceEntry {
            chart: d.singularity.location.chart,
            location: cx_pair(d.singularity.location.w),
            u_samples: d.u_samples,
            monotone: d.monotone,
        })
        .collect();
    Report {
        input,
        normalization_constant: cx_pair(out.normalization),
        f_coeffs: poly_pairs(&out.f),
        functional_equation_residual: out.functional_equation_residual,
        factorization_check: out.factorization_residual,
        singularities,
        gauss_bonnet: GaussBonnetReport {
            defects: out.ledger.entries.iter().map(|e| e.defect).collect(),
            total_defect: out.ledger.total_defect,
            target: out.ledger.target,
            error: (out.ledger.total_defect - out.ledger.target).abs(),
        },
        flatness: FlatnessReport {
            max_harmonicity_residual: out.flatness.max_harmonicity_residual,
            max_abs_curvature: out.flatness.max_abs_curvature,
            smooth_grid_points: out.flatness.smooth_points,
        },
        completeness: CompletenessReport {
            incomplete: out.completeness.incomplete,
            witnesses,
        },
        maximum_principle: MaximumPrincipleReport {
            max_abs_deviation: out.max_principle.max_abs_deviation,
            u_min: out.max_principle.u_min,
            u_max: out.max_principle.u_max,
            divergence,
        },
        recovered_roots: out
            .recovered_roots
            .iter()
            .map(|r| RecoveredRootEntry {
                root: cx_pair(r.root),
                multiplicity: r.multiplicity,
                residual: r.residual,
                source: source_str(r.source),
            })
            .collect(),
        verdict: VerdictReport {
            degree: out.verdict.degree,
            conclusion: out.verdict.conclusion.as_str().to_string(),
            narrative: out.verdict.narrative.clone(),
        },
    }
}

fn empty_degree_one_report(input: InputEcho, verdict: &obstruction::Verdict) -> Report {
    Report {
        input,
        normalization_constant: [1.0, 0.0],
        f_coeffs: Vec::new(),
        functional_equation_residual: 0.0,
        factorization_check: 0.0,
        singularities: Vec::new(),
        gauss_bonnet: GaussBonnetReport {
            defects: Vec::new(),
            total_defect: 0.0,
            target: 2.0 * crate::metric::TAU,
            error: 0.0,
        },
        flatness: FlatnessReport {
            max_harmonicity_residual: 0.0,
            max_abs_curvature: 0.0,
            smooth_grid_points: 0,
        },
        completeness: CompletenessReport {
            incomplete: false,
            witnesses: Vec::new(),
        },
        maximum_principle: MaximumPrincipleReport {
            max_abs_deviation: 0.0,
            u_min: 0.0,
            u_max: 0.0,
            divergence: Vec::new(),
        },
        recovered_roots: Vec::new(),
        verdict: VerdictReport {
            degree: verdict.degree,
            conclusion: verdict.conclusion.as_str().to_string(),
            narrative: verdict.narrative.clone(),
        },
    }
}

/// Result of a completed run: the report plus optional grid dumps.
pub struct RunOutput {
    pub report: Report,
    pub json: String,
    pub grids: Option<(String, String)>,
}

fn input_echo(
    config: &JobConfig,
    p: &Poly,
    degree: usize,
    algebra: Option<AlgebraEcho>,
) -> InputEcho {
    InputEcho {
        mode: match config.mode {
            Mode::Poly => "poly".to_string(),
            Mode::Algebra => "algebra".to_string(),
        },
        degree,
        polynomial: poly_pairs(p),
        algebra,
        grid: GridEcho {
            extent: config.grid.extent,
            resolution: config.grid.resolution,
            stencil_h: config.grid.stencil_h,
        },
        tolerances: TolerancesEcho {
            tol_root: config.tolerances.tol_root,
            tol_harmonic: config.tolerances.tol_harmonic,
            tol_ledger: config.tolerances.tol_ledger,
        },
        seed: config.rng_seed,
    }
}

/// Runs the analysis pipeline. The output is deterministic for a fixed
/// config and seed.
pub fn run(config: &JobConfig, input: ProblemInput) -> Result<RunOutput, CliError> {
    config.validate()?;
    let probe = config.probe_config();
    let (report, grids) = match input {
        ProblemInput::Poly(p) => {
            let out = obstruction::fta_verdict(&p, &probe)?;
            let echo = input_echo(config, &p, out.p_monic.degree(), None);
            let grids = if config.emit_grids {
                Some((grid_csv(&out.grid_standard), grid_csv(&out.grid_infinity)))
            } else {
                None
            };
            (outcome_to_report(&out, echo), grids)
        }
        ProblemInput::Algebra { algebra, element } => {
            match obstruction::algebra_verdict(&algebra, &element, &probe)? {
                AlgebraOutcome::DegreeOne { minimal_poly, verdict } => {
                    let echo = input_echo(
                        config,
                        &minimal_poly,
                        1,
                        Some(AlgebraEcho {
                            dim: algebra.dim(),
                            element: element.iter().map(|&c| cx_pair(c)).collect(),
                            minimal_polynomial: poly_pairs(&minimal_poly),
                        }),
                    );
                    (empty_degree_one_report(echo, &verdict), None)
                }
                AlgebraOutcome::Obstruction { minimal_poly, outcome } => {
                    let echo = input_echo(
                        config,
                        &minimal_poly,
                        minimal_poly.degree(),
                        Some(AlgebraEcho {
                            dim: algebra.dim(),
                            element: element.iter().map(|&c| cx_pair(c)).collect(),
                            minimal_polynomial: poly_pairs(&minimal_poly),
                        }),
                    );
                    let grids = if config.emit_grids {
                        Some((
                            grid_csv(&outcome.grid_standard),
                            grid_csv(&outcome.grid_infinity),
                        ))
                    } else {
                        None
                    };
                    (outcome_to_report(&outcome, echo), grids)
                }
            }
        }
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))?;
    Ok(RunOutput { report, json, grids })
}

/// CSV grid dump; excluded points keep their coordinates but carry empty
/// numeric fields so every grid has a constant row count.
pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("chart,re_w,im_w,lambda,K,harmonicity_residual,u,delta0_u\n");
    for row in rows {
        let chart = match row.chart {
            Chart::Standard => "standard",
            Chart::Infinity => "infinity",
        };
        match row.values {
            Some(v) => out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                chart, row.w.re, row.w.im, v.lambda, v.curvature, v.harmonicity_residual, v.u,
                v.delta0_u
            )),
            None => out.push_str(&format!("{},{},{},,,,,\n", chart, row.w.re, row.w.im)),
        }
    }
    out
}

/// Plain-text rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "input: {} mode, degree {}\n",
        r.input.mode, r.input.degree
    ));
    s.push_str(&format!(
        "normalization constant: {} + {}i\n",
        r.normalization_constant[0], r.normalization_constant[1]
    ));
    s.push_str(&format!("f coefficients ({}):\n", r.f_coeffs.len()));
    for (i, c) in r.f_coeffs.iter().enumerate() {
        s.push_str(&format!("  w^{}: {} + {}i\n", i, c[0], c[1]));
    }
    s.push_str(&format!(
        "functional equation residual: {:.3e}\n",
        r.functional_equation_residual
    ));
    s.push_str(&format!(
        "factorization check (f = p*p~): {:.3e}\n",
        r.factorization_check
    ));
    s.push_str(&format!("singularities ({}):\n", r.singularities.len()));
    for e in &r.singularities {
        s.push_str(&format!(
            "  {:?} ({:.12}, {:.12}) order {} cone angle {:.12} defect {:.12} factor {} flux {:.12}\n",
            e.chart, e.location[0], e.location[1], e.order, e.cone_angle, e.defect, e.factor, e.flux
        ));
    }
    s.push_str(&format!(
        "gauss-bonnet: total defect {:.15} target {:.15} error {:.3e}\n",
        r.gauss_bonnet.total_defect, r.gauss_bonnet.target, r.gauss_bonnet.error
    ));
    s.push_str(&format!(
        "flatness: max |lap log f| {:.3e}, max |K| {:.3e} over {} smooth grid points\n",
        r.flatness.max_harmonicity_residual,
        r.flatness.max_abs_curvature,
        r.flatness.smooth_grid_points
    ));
    s.push_str(&format!(
        "completeness: incomplete = {} ({} witnesses)\n",
        r.completeness.incomplete,
        r.completeness.witnesses.len()
    ));
    s.push_str(&format!(
        "maximum principle: max |delta0 u - 1| = {:.3e}, u in [{:.6}, {:.6}]\n",
        r.maximum_principle.max_abs_deviation,
        r.maximum_principle.u_min,
        r.maximum_principle.u_max
    ));
    s.push_str(&format!("recovered roots ({}):\n", r.recovered_roots.len()));
    for e in &r.recovered_roots {
        s.push_str(&format!(
            "  {} + {}i (multiplicity {}, residual {:.3e}, source {})\n",
            e.root[0], e.root[1], e.multiplicity, e.residual, e.source
        ));
    }
    s.push_str(&format!(
        "verdict: {} -- {}\n",
        r.verdict.conclusion, r.verdict.narrative
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_text_coeffs() {
        let p = parse_poly_input("1 0 1").unwrap();
        assert_eq!(p, Poly::from_real(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn parse_json_coeffs() {
        let p = parse_poly_input(r#"{"coeffs": [[-2, 0], [0, 0], [1, 0]]}"#).unwrap();
        assert_eq!(p, Poly::from_real(&[-2.0, 0.0, 1.0]));
    }

    #[test]
    fn zero_polynomial_rejected() {
        match parse_poly_input("0") {
            Err(e @ CliError::Validation(_)) => assert_eq!(e.exit_code(), 3),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_input_rejected() {
        match parse_poly_input("1 frog 3") {
            Err(e @ CliError::Parse(_)) => assert_eq!(e.exit_code(), 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_poly_input("{\"coeffs\": [[1, 2"),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn bad_tensor_rejected() {
        let text = r#"{"dim": 2, "constants": [[1,0]], "element": [[1,0],[0,0]]}"#;
        match parse_algebra_input(text) {
            Err(e @ CliError::Validation(_)) => assert_eq!(e.exit_code(), 3),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = JobConfig::default();
        cfg.grid.resolution = 4;
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
        let mut cfg = JobConfig::default();
        cfg.grid.extent = 1.0;
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
    }

    #[test]
    fn run_reports_worked_example() {
        let cfg = JobConfig::default();
        let p = parse_poly_input("1 0 1").unwrap();
        let out = run(&cfg, ProblemInput::Poly(p)).unwrap();
        let expect = [1.0, 0.0, 2.0, 0.0, 1.0];
        assert_eq!(out.report.f_coeffs.len(), 5);
        for (c, e) in out.report.f_coeffs.iter().zip(expect) {
            assert!((c[0] - e).abs() < 1e-12 && c[1].abs() < 1e-12);
        }
        let four_pi = 2.0 * crate::metric::TAU;
        assert!((out.report.gauss_bonnet.total_defect - four_pi).abs() < 1e-12);
        // round trip through JSON
        let back: Report = serde_json::from_str(&out.json).unwrap();
        assert_eq!(back, out.report);
    }

    #[test]
    fn grids_are_emitted() {
        let mut cfg = JobConfig::default();
        cfg.emit_grids = true;
        cfg.grid.resolution = 9;
        let p = parse_poly_input("-2 0 1").unwrap();
        let out = run(&cfg, ProblemInput::Poly(p)).unwrap();
        let (std_csv, inf_csv) = out.grids.unwrap();
        assert_eq!(std_csv.lines().count(), 1 + 81);
        assert_eq!(inf_csv.lines().count(), 1 + 81);
        assert!(std_csv.starts_with("chart,re_w,im_w,lambda,K,"));
    }
}
