//! Structured JSON reports. Every rational is rendered as a string.

use std::time::Instant;

use qcc_core::dominance::{iterated_elimination, EliminationReport, RemovalReason};
use qcc_core::geometry::{check_argmax_convexity, check_nesting, ConvexityVerdict, NestingReport};
use qcc_core::lsc::{check_lsc, relabel_for_lsc, LscVerdict, Relabeling};
use qcc_core::oracle::{exact_check_two_state, oracle_find_dip, oracle_find_gap, GridHit, GridSpec};
use qcc_core::qcc::{check_qcc, unimodality_profile, QccVerdict};
use qcc_core::{Belief, DecisionProblem, QuasiMonotoneMode, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::format::{serialize_problem, ProblemFile};

pub fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

pub fn belief_strings(belief: &Belief) -> Vec<String> {
    strings(belief.coords())
}

/// SHA-256 of the canonical problem serialization.
pub fn input_digest(problem: &DecisionProblem) -> String {
    hex::encode(Sha256::digest(serialize_problem(problem).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixtureWeight {
    pub action: usize,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedJson {
    pub original_index: usize,
    /// `"duplicate"` or `"mixed-dominated"`.
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duplicate_of: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixture: Option<Vec<MixtureWeight>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// Original action index.
    pub action: usize,
    pub belief: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationJson {
    /// Original indices of the surviving actions; surviving action `s` in
    /// every later section is `kept[s]` here.
    pub kept: Vec<usize>,
    pub removed: Vec<RemovedJson>,
    /// Interior beliefs at which each survivor is the unique optimum.
    pub unique_optimality_witnesses: Vec<WitnessJson>,
}

impl From<&EliminationReport> for EliminationJson {
    fn from(r: &EliminationReport) -> Self {
        EliminationJson {
            kept: r.kept.clone(),
            removed: r
                .removed
                .iter()
                .map(|rm| match &rm.reason {
                    RemovalReason::Duplicate { kept } => RemovedJson {
                        original_index: rm.original_index,
                        reason: "duplicate".into(),
                        duplicate_of: Some(*kept),
                        mixture: None,
                    },
                    RemovalReason::MixedDominated { mixture } => RemovedJson {
                        original_index: rm.original_index,
                        reason: "mixed-dominated".into(),
                        duplicate_of: None,
                        mixture: Some(
                            mixture
                                .iter()
                                .map(|(a, w)| MixtureWeight {
                                    action: *a,
                                    weight: w.to_string(),
                                })
                                .collect(),
                        ),
                    },
                })
                .collect(),
            unique_optimality_witnesses: r
                .kept
                .iter()
                .zip(&r.witnesses)
                .map(|(&action, w)| WitnessJson {
                    action,
                    belief: belief_strings(w),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DipJson {
    pub belief: Vec<String>,
    pub triple: [usize; 3],
    pub values: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QccJson {
    pub holds: bool,
    pub checked_triples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<DipJson>,
}

impl From<&QccVerdict> for QccJson {
    fn from(v: &QccVerdict) -> Self {
        QccJson {
            holds: v.holds,
            checked_triples: v.checked_triples,
            counterexample: v.counterexample.as_ref().map(|w| DipJson {
                belief: belief_strings(&w.belief),
                triple: [w.triple.0, w.triple.1, w.triple.2],
                values: w.values.clone().map(|v| v.to_string()),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitnessJson {
    pub belief: Vec<String>,
    pub triple: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityJson {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<TripleWitnessJson>,
}

impl From<&ConvexityVerdict> for ConvexityJson {
    fn from(v: &ConvexityVerdict) -> Self {
        ConvexityJson {
            holds: v.holds,
            counterexample: v.counterexample.as_ref().map(|w| TripleWitnessJson {
                belief: belief_strings(&w.belief),
                triple: [w.triple.0, w.triple.1, w.triple.2],
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFailureJson {
    pub index: usize,
    pub belief: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFailureJson {
    pub index: usize,
    pub other: usize,
    pub belief: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingJson {
    pub chain_holds: bool,
    pub failures: Vec<ChainFailureJson>,
    pub region_identification_holds: bool,
    pub region_failures: Vec<RegionFailureJson>,
}

impl From<&NestingReport> for NestingJson {
    fn from(r: &NestingReport) -> Self {
        NestingJson {
            chain_holds: r.chain_holds,
            failures: r
                .failures
                .iter()
                .map(|f| ChainFailureJson {
                    index: f.index,
                    belief: belief_strings(&f.belief),
                })
                .collect(),
            region_identification_holds: r.region_identification_holds,
            region_failures: r
                .region_failures
                .iter()
                .map(|f| RegionFailureJson {
                    index: f.index,
                    other: f.other,
                    belief: belief_strings(&f.belief),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LscJson {
    pub holds: bool,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_action: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_vector: Option<Vec<String>>,
}

impl From<&LscVerdict> for LscJson {
    fn from(v: &LscVerdict) -> Self {
        LscJson {
            holds: v.holds,
            mode: v.mode.to_string(),
            failing_action: v.failing_action,
            failing_vector: v.failing_vector.as_ref().map(|d| strings(&d.entries)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LscPairJson {
    pub relaxed: LscJson,
    pub literal: LscJson,
}

fn lsc_pair(problem: &DecisionProblem) -> Result<LscPairJson, CliError> {
    Ok(LscPairJson {
        relaxed: (&check_lsc(problem, QuasiMonotoneMode::Relaxed)?).into(),
        literal: (&check_lsc(problem, QuasiMonotoneMode::Literal)?).into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelabelingJson {
    pub permutation: Vec<usize>,
    pub sort_keys: Vec<String>,
}

impl From<&Relabeling> for RelabelingJson {
    fn from(r: &Relabeling) -> Self {
        RelabelingJson {
            permutation: r.permutation.clone(),
            sort_keys: strings(&r.sort_keys),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LscSectionJson {
    pub before_relabeling: LscPairJson,
    pub after_relabeling: LscPairJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoStateJson {
    pub qcc: bool,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    pub grid_denominator: u64,
    pub grid_size: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_dip: Option<TripleWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_gap: Option<TripleWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_state_exact: Option<TwoStateJson>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginalJson {
    pub qcc_holds: bool,
    pub convexity_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub actions: usize,
    pub states: usize,
    pub elimination: EliminationJson,
    /// The problem every verdict below refers to.
    pub surviving_problem: ProblemFile,
    pub qcc: QccJson,
    pub convexity: ConvexityJson,
    pub nesting: NestingJson,
    pub relabeling: RelabelingJson,
    pub lsc: LscSectionJson,
    pub oracle: OracleJson,
    /// Verdicts on the input before elimination.
    pub original: OriginalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Everything computed by [`analyze`], before rendering.
pub struct Analysis {
    pub elimination: EliminationReport,
    pub qcc: QccVerdict,
    pub convexity: ConvexityVerdict,
    pub nesting: NestingReport,
    pub relabeling: Relabeling,
    pub relabeled: DecisionProblem,
    pub oracle: OracleJson,
    pub original_qcc: QccVerdict,
    pub original_convexity: ConvexityVerdict,
}

/// Cross-checks LP verdicts against the brute-force oracles. A grid witness
/// contradicting an LP "holds", an LP witness that fails the pointwise check,
/// or a two-state disagreement is an invariant violation.
pub fn oracle_cross_check(
    problem: &DecisionProblem,
    qcc: &QccVerdict,
    convexity: &ConvexityVerdict,
    grid: u64,
) -> Result<OracleJson, CliError> {
    let spec = GridSpec::new(grid, problem.num_states())?;
    let dip = oracle_find_dip(problem, spec)?;
    let gap = oracle_find_gap(problem, spec)?;
    if let (true, Some((belief, _))) = (qcc.holds, &dip) {
        return Err(CliError::invariant(
            "oracle_dip_vs_lp",
            format!("LP says quasi-concave but the grid dips at {belief}"),
        ));
    }
    if let (true, Some((belief, _))) = (convexity.holds, &gap) {
        return Err(CliError::invariant(
            "oracle_gap_vs_lp",
            format!("LP says convex but the grid has a gap at {belief}"),
        ));
    }
    if let Some(w) = &qcc.counterexample {
        if unimodality_profile(problem, &w.belief)?.unimodal {
            return Err(CliError::invariant(
                "qcc_witness",
                format!("counterexample {} is unimodal", w.belief),
            ));
        }
    }
    if let Some(w) = &convexity.counterexample {
        if !w.verify(problem) {
            return Err(CliError::invariant(
                "convexity_witness",
                format!("gap witness {} does not re-verify", w.belief),
            ));
        }
    }
    let two_state = if problem.num_states() == 2 {
        let (q, c) = exact_check_two_state(problem)?;
        if (q, c) != (qcc.holds, convexity.holds) {
            return Err(CliError::invariant(
                "two_state_oracle",
                format!(
                    "exact two-state oracle ({q}, {c}) disagrees with LP ({}, {})",
                    qcc.holds, convexity.holds
                ),
            ));
        }
        Some(TwoStateJson { qcc: q, convex: c })
    } else {
        None
    };
    let triple_json = |found: &Option<GridHit>| {
        found.as_ref().map(|(b, (i, j, k))| TripleWitnessJson {
            belief: belief_strings(b),
            triple: [*i, *j, *k],
        })
    };
    Ok(OracleJson {
        grid_denominator: grid,
        grid_size: spec.size().to_string(),
        grid_dip: triple_json(&dip),
        grid_gap: triple_json(&gap),
        two_state_exact: two_state,
        consistent: true,
    })
}

/// eliminate -> certify -> quasi-concavity -> convexity -> nesting ->
/// relabel -> LSC, with a grid cross-check at denominator `grid`.
pub fn run_analysis(problem: &DecisionProblem, grid: u64) -> Result<Analysis, CliError> {
    let elimination = iterated_elimination(problem)?;
    let surviving = &elimination.surviving;
    let qcc = check_qcc(surviving)?;
    let convexity = check_argmax_convexity(surviving)?;
    let nesting = check_nesting(surviving)?;
    let (relabeling, relabeled) = relabel_for_lsc(surviving)?;
    let oracle = oracle_cross_check(surviving, &qcc, &convexity, grid)?;
    let original_qcc = check_qcc(problem)?;
    let original_convexity = check_argmax_convexity(problem)?;
    Ok(Analysis {
        elimination,
        qcc,
        convexity,
        nesting,
        relabeling,
        relabeled,
        oracle,
        original_qcc,
        original_convexity,
    })
}

pub fn analyze(problem: &DecisionProblem, grid: u64, timed: bool) -> Result<AnalysisReport, CliError> {
    let start = Instant::now();
    let a = run_analysis(problem, grid)?;
    Ok(AnalysisReport {
        input_digest: input_digest(problem),
        actions: problem.num_actions(),
        states: problem.num_states(),
        elimination: (&a.elimination).into(),
        surviving_problem: (&a.elimination.surviving).into(),
        qcc: (&a.qcc).into(),
        convexity: (&a.convexity).into(),
        nesting: (&a.nesting).into(),
        relabeling: (&a.relabeling).into(),
        lsc: LscSectionJson {
            before_relabeling: lsc_pair(&a.elimination.surviving)?,
            after_relabeling: lsc_pair(&a.relabeled)?,
        },
        oracle: a.oracle,
        original: OriginalJson {
            qcc_holds: a.original_qcc.holds,
            convexity_holds: a.original_convexity.holds,
        },
        elapsed_ms: timed.then(|| start.elapsed().as_millis() as u64),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QccReport {
    pub input_digest: String,
    pub qcc: QccJson,
}

pub fn qcc_report(problem: &DecisionProblem) -> Result<QccReport, CliError> {
    Ok(QccReport {
        input_digest: input_digest(problem),
        qcc: (&check_qcc(problem)?).into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub input_digest: String,
    pub convexity: ConvexityJson,
}

pub fn convexity_report(problem: &DecisionProblem) -> Result<ConvexityReport, CliError> {
    Ok(ConvexityReport {
        input_digest: input_digest(problem),
        convexity: (&check_argmax_convexity(problem)?).into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EliminationOutput {
    pub input_digest: String,
    pub elimination: EliminationJson,
    pub surviving_problem: ProblemFile,
}

pub fn elimination_report(problem: &DecisionProblem) -> Result<EliminationOutput, CliError> {
    let r = iterated_elimination(problem)?;
    Ok(EliminationOutput {
        input_digest: input_digest(problem),
        elimination: (&r).into(),
        surviving_problem: (&r.surviving).into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelabelOutput {
    pub input_digest: String,
    pub relabeling: RelabelingJson,
    pub relabeled_problem: ProblemFile,
    pub lsc: LscSectionJson,
}

pub fn relabel_report(problem: &DecisionProblem) -> Result<RelabelOutput, CliError> {
    let (relabeling, relabeled) = relabel_for_lsc(problem)?;
    Ok(RelabelOutput {
        input_digest: input_digest(problem),
        relabeling: (&relabeling).into(),
        relabeled_problem: (&relabeled).into(),
        lsc: LscSectionJson {
            before_relabeling: lsc_pair(problem)?,
            after_relabeling: lsc_pair(&relabeled)?,
        },
    })
}
