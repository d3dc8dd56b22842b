//! Report assembly: run the sweeps, compare against the oracle, and
//! serialize the outcome deterministically.
//!
//! The JSON report is the canonical artifact. Every big integer is a
//! decimal string, map-like data is emitted as weight-sorted arrays, and
//! nothing depends on thread count or iteration order, so identical
//! configurations produce byte-identical reports. Computations that the
//! caps forbid are left null and a note marks the oracle values as
//! literature claims, not computed at this scale.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::code::{
    ab_bound_satisfied, CodeError, LinearCode, MinimalityReport, Strategy, WeightDistribution,
};
use crate::embed::{validate_embedding, ProjectiveSystem};
use crate::gf::Fe;
use crate::oracle::{expected_parameters, ExpectedParameters, Feasibility, Sourced};
use crate::zoo::BuiltGeometry;
use crate::Caps;

#[derive(Debug, Clone, Serialize)]
pub struct GeometryBlock {
    pub descriptor: crate::zoo::Descriptor,
    pub num_points: usize,
    pub num_lines: usize,
    pub line_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingBlock {
    pub injective: bool,
    pub spans: bool,
    pub lines_to_lines: bool,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightCount {
    pub weight: String,
    pub count: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeBlock {
    pub n: usize,
    pub k: usize,
    pub strategy: &'static str,
    pub d: Option<String>,
    pub w_max: Option<String>,
    pub distribution: Option<Vec<WeightCount>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalBlock {
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_class: Option<u64>,
    pub num_classes: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbBlock {
    pub verdict: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourcedValue {
    pub value: String,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourcedFlag {
    pub value: bool,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourcedSpectrum {
    pub value: Vec<WeightCount>,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityBlock {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Oracle claims rendered for the report, everything stringified.
#[derive(Debug, Clone, Serialize)]
pub struct OracleBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_points: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance_lower_bound: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance_upper_bound: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_weight: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_weight_count: Option<SourcedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SourcedSpectrum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<SourcedFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ab_satisfied: Option<SourcedFlag>,
    pub notes: Vec<String>,
    pub feasibility: FeasibilityBlock,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Delta {
    pub field: String,
    pub computed: String,
    pub expected: String,
    pub source: String,
}

/// The full analysis report for one code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingBlock>,
    pub code: CodeBlock,
    pub minimal: MinimalBlock,
    pub ab: AbBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
    pub deltas: Vec<Delta>,
    pub notes: Vec<String>,
}

impl CodeReport {
    pub fn has_deltas(&self) -> bool {
        !self.deltas.is_empty()
    }

    /// Some requested computation was skipped because of a cap.
    pub fn capped(&self) -> bool {
        self.notes.iter().any(|n| n.contains("not computed at this scale"))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    /// Spectrum CSV: computed and oracle counts side by side, rows sorted
    /// by weight. Missing values are left empty.
    pub fn spectrum_csv(&self) -> String {
        let mut computed: BTreeMap<BigUint, String> = BTreeMap::new();
        if let Some(dist) = &self.code.distribution {
            for wc in dist {
                computed.insert(
                    wc.weight.parse().expect("weights are decimal"),
                    wc.count.clone(),
                );
            }
        }
        let mut expected: BTreeMap<BigUint, String> = BTreeMap::new();
        if let Some(oracle) = &self.oracle {
            if let Some(spec) = &oracle.spectrum {
                for wc in &spec.value {
                    expected.insert(
                        wc.weight.parse().expect("weights are decimal"),
                        wc.count.clone(),
                    );
                }
            }
        }
        let mut weights: Vec<&BigUint> = computed.keys().collect();
        for w in expected.keys() {
            if !computed.contains_key(w) {
                weights.push(w);
            }
        }
        weights.sort();
        let mut out = String::from("weight,count,oracle_count\n");
        for w in weights {
            let c = computed.get(w).map(String::as_str).unwrap_or("");
            let e = expected.get(w).map(String::as_str).unwrap_or("");
            out.push_str(&format!("{w},{c},{e}\n"));
        }
        out
    }
}

fn sourced_value<T: ToString>(s: &Option<Sourced<T>>) -> Option<SourcedValue> {
    s.as_ref().map(|s| SourcedValue { value: s.value.to_string(), source: s.source.clone() })
}

fn spectrum_counts(spec: &BTreeMap<BigUint, BigUint>) -> Vec<WeightCount> {
    spec.iter()
        .map(|(w, c)| WeightCount { weight: w.to_string(), count: c.to_string() })
        .collect()
}

fn oracle_block(exp: &ExpectedParameters) -> OracleBlock {
    OracleBlock {
        n_points: sourced_value(&exp.n_points),
        dimension: sourced_value(&exp.dimension),
        min_distance: sourced_value(&exp.min_distance),
        min_distance_lower_bound: sourced_value(&exp.min_distance_lower_bound),
        min_distance_upper_bound: sourced_value(&exp.min_distance_upper_bound),
        second_weight: sourced_value(&exp.second_weight),
        max_weight: sourced_value(&exp.max_weight),
        min_weight_count: sourced_value(&exp.min_weight_count),
        spectrum: exp.spectrum.as_ref().map(|s| SourcedSpectrum {
            value: spectrum_counts(&s.value),
            source: s.source.clone(),
        }),
        minimal: exp
            .minimal
            .as_ref()
            .map(|s| SourcedFlag { value: s.value, source: s.source.clone() }),
        ab_satisfied: exp
            .ab_satisfied
            .as_ref()
            .map(|s| SourcedFlag { value: s.value, source: s.source.clone() }),
        notes: exp.notes.clone(),
        feasibility: match &exp.feasibility {
            Feasibility::DeskScale => FeasibilityBlock { status: "desk_scale", reason: None },
            Feasibility::OracleOnly { reason } => {
                FeasibilityBlock { status: "oracle_only", reason: Some(reason.clone()) }
            }
            Feasibility::Unknown => FeasibilityBlock { status: "unknown", reason: None },
        },
    }
}

struct Computed {
    distribution: Option<WeightDistribution>,
    minimality: Option<MinimalityReport>,
    notes: Vec<String>,
}

fn run_sweeps(code: &LinearCode, strategy: Strategy, caps: &Caps) -> Result<Computed, CodeError> {
    let mut notes = Vec::new();
    let distribution = match code.weight_distribution(strategy, caps) {
        Ok(d) => Some(d),
        Err(CodeError::CapExceeded { what, needed, cap }) => {
            notes.push(format!(
                "weight distribution not computed at this scale: {what} needs {needed} \
                 steps, over the cap of {cap}; oracle values below are literature \
                 claims, not computed results"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let minimality = match code.minimality(caps) {
        Ok(m) => Some(m),
        Err(CodeError::CapExceeded { what, needed, cap }) => {
            notes.push(format!(
                "minimality not computed at this scale: {what} needs {needed} steps, \
                 over the cap of {cap}"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(Computed { distribution, minimality, notes })
}

fn push_delta<T: ToString + PartialEq>(
    deltas: &mut Vec<Delta>,
    field: &str,
    computed: Option<&T>,
    expected: &Option<Sourced<T>>,
) {
    if let (Some(c), Some(e)) = (computed, expected) {
        if *c != e.value {
            deltas.push(Delta {
                field: field.to_string(),
                computed: c.to_string(),
                expected: e.value.to_string(),
                source: e.source.clone(),
            });
        }
    }
}

fn compare(
    code: &LinearCode,
    computed: &Computed,
    ab: Option<bool>,
    exp: &ExpectedParameters,
) -> Vec<Delta> {
    let mut deltas = Vec::new();
    push_delta(&mut deltas, "n_points", Some(&BigUint::from(code.n())), &exp.n_points);
    push_delta(&mut deltas, "dimension", Some(&BigUint::from(code.k())), &exp.dimension);
    let dist = computed.distribution.as_ref();
    let d = dist.and_then(|d| d.min_distance()).map(BigUint::from);
    push_delta(&mut deltas, "min_distance", d.as_ref(), &exp.min_distance);
    if let (Some(d), Some(bound)) = (&d, &exp.min_distance_lower_bound) {
        if *d < bound.value {
            deltas.push(Delta {
                field: "min_distance_lower_bound".to_string(),
                computed: d.to_string(),
                expected: format!(">= {}", bound.value),
                source: bound.source.clone(),
            });
        }
    }
    if let (Some(d), Some(bound)) = (&d, &exp.min_distance_upper_bound) {
        if *d > bound.value {
            deltas.push(Delta {
                field: "min_distance_upper_bound".to_string(),
                computed: d.to_string(),
                expected: format!("<= {}", bound.value),
                source: bound.source.clone(),
            });
        }
    }
    let second = dist.and_then(|d| d.second_weight()).map(BigUint::from);
    push_delta(&mut deltas, "second_weight", second.as_ref(), &exp.second_weight);
    let w_max = dist.and_then(|d| d.max_weight()).map(BigUint::from);
    push_delta(&mut deltas, "max_weight", w_max.as_ref(), &exp.max_weight);
    let d_count = match (dist, &d) {
        (Some(dist), Some(d)) => u64::try_from(d).ok().map(|d| dist.count_at(d)),
        _ => None,
    };
    push_delta(&mut deltas, "min_weight_count", d_count.as_ref(), &exp.min_weight_count);
    if let (Some(dist), Some(spec)) = (dist, &exp.spectrum) {
        let computed_spec: BTreeMap<BigUint, BigUint> = dist
            .counts()
            .iter()
            .map(|(&w, c)| (BigUint::from(w), c.clone()))
            .collect();
        if computed_spec != spec.value {
            deltas.push(Delta {
                field: "spectrum".to_string(),
                computed: format_spectrum(&computed_spec),
                expected: format_spectrum(&spec.value),
                source: spec.source.clone(),
            });
        }
    }
    push_delta(
        &mut deltas,
        "minimal",
        computed.minimality.as_ref().map(|m| &m.minimal),
        &exp.minimal,
    );
    push_delta(&mut deltas, "ab_satisfied", ab.as_ref(), &exp.ab_satisfied);
    deltas
}

fn format_spectrum(spec: &BTreeMap<BigUint, BigUint>) -> String {
    let parts: Vec<String> = spec.iter().map(|(w, c)| format!("{w}:{c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn assemble(
    geometry: Option<GeometryBlock>,
    embedding: Option<EmbeddingBlock>,
    code: &LinearCode,
    strategy: Strategy,
    computed: Computed,
    exp: Option<&ExpectedParameters>,
) -> CodeReport {
    let dist = computed.distribution.as_ref();
    let ab = dist.and_then(|d| ab_bound_satisfied(d, code.field().q()));
    let deltas = exp.map(|e| compare(code, &computed, ab, e)).unwrap_or_default();
    CodeReport {
        geometry,
        embedding,
        code: CodeBlock {
            n: code.n(),
            k: code.k(),
            strategy: match strategy {
                Strategy::MessageEnum => "message_enum",
                Strategy::HyperplaneCount => "hyperplane_count",
            },
            d: dist.and_then(|d| d.min_distance()).map(|d| d.to_string()),
            w_max: dist.and_then(|d| d.max_weight()).map(|w| w.to_string()),
            distribution: dist.map(|d| {
                d.counts()
                    .iter()
                    .map(|(w, c)| WeightCount { weight: w.to_string(), count: c.to_string() })
                    .collect()
            }),
        },
        minimal: match &computed.minimality {
            Some(m) => MinimalBlock {
                verdict: Some(m.minimal),
                witness: m.witness.as_ref().map(|w| w.iter().map(|e| e.index()).collect()),
                witness_class: m.witness_class,
                num_classes: m.num_classes.to_string(),
            },
            None => MinimalBlock {
                verdict: None,
                witness: None,
                witness_class: None,
                num_classes: code.num_classes().to_string(),
            },
        },
        ab: AbBlock { verdict: ab },
        oracle: exp.map(oracle_block),
        deltas,
        notes: computed.notes,
    }
}

/// Analyze a family instance: sweeps, oracle comparison, full report.
pub fn analyze_built(
    built: &BuiltGeometry,
    strategy: Strategy,
    caps: &Caps,
) -> Result<CodeReport, CodeError> {
    let sys = ProjectiveSystem::from_geometry(built).expect("a built geometry embeds");
    let emb = validate_embedding(built, &sys);
    let code = LinearCode::from_system(&sys);
    let computed = run_sweeps(&code, strategy, caps)?;
    let exp = expected_parameters(&built.descriptor, caps);
    Ok(assemble(
        Some(GeometryBlock {
            descriptor: built.descriptor.clone(),
            num_points: built.geometry.num_points(),
            num_lines: built.geometry.lines().len(),
            line_size: built.line_size,
        }),
        Some(EmbeddingBlock {
            injective: emb.injective,
            spans: emb.spans_ambient,
            lines_to_lines: emb.lines_to_lines,
            k: emb.dimension,
        }),
        &code,
        strategy,
        computed,
        Some(&exp),
    ))
}

/// Analyze a bare projective system: no geometry, no oracle.
pub fn analyze_system(
    sys: &ProjectiveSystem,
    strategy: Strategy,
    caps: &Caps,
) -> Result<CodeReport, CodeError> {
    let code = LinearCode::from_system(sys);
    let computed = run_sweeps(&code, strategy, caps)?;
    Ok(assemble(None, None, &code, strategy, computed, None))
}

/// One failing functional class in a pipeline sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ClassCounterexample {
    pub class_index: u64,
    pub functional: Vec<u32>,
}

/// Outcome of the hyperplane pipeline sweep backing the minimality
/// theorem: every arising hyperplane is geometric, complements and
/// connectivity are checked exhaustively, and the result is compared with
/// the code-side minimality verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub num_classes: u64,
    /// The embedding maps every geometry line onto a full projective
    /// line. The connectivity criterion presupposes this; where it fails
    /// the implication below carries no guarantee.
    pub lines_to_lines: bool,
    pub all_preimages_hyperplanes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_non_hyperplane: Option<ClassCounterexample>,
    pub hyperplane_failures: u64,
    pub all_complements_connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_disconnected: Option<ClassCounterexample>,
    pub disconnected_count: u64,
    pub minimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimality_witness: Option<Vec<u32>>,
    /// Connectivity of every complement must force minimality.
    pub implication_holds: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}

/// Sweep all functional classes of the embedded code, checking each
/// arising hyperplane preimage and cross-checking connectivity against
/// minimality.
pub fn verify_pipeline(
    built: &BuiltGeometry,
    caps: &Caps,
) -> Result<VerifyReport, CodeError> {
    use rayon::prelude::*;

    let sys = ProjectiveSystem::from_geometry(built).expect("a built geometry embeds");
    let emb = validate_embedding(built, &sys);
    let code = LinearCode::from_system(&sys);
    let classes = code.num_classes();
    if classes > BigUint::from(caps.max_classes) {
        return Err(CodeError::CapExceeded {
            what: "pipeline hyperplane sweep",
            needed: classes,
            cap: caps.max_classes,
        });
    }
    let total = u64::try_from(&classes).expect("bounded by the cap");

    let k = code.k() as u32;
    let q = code.field().q() as u64;
    let per_class = |c: u64| -> (Option<u64>, Option<u64>) {
        let m: Vec<Fe> = class_rep(q, k, c);
        let word = code.encode(&m).expect("class representative has length K");
        let mask: Vec<bool> = word.iter().map(|e| e.is_zero()).collect();
        let geometric = built
            .geometry
            .is_geometric_hyperplane(&mask)
            .expect("mask length equals the point count");
        let connected = built
            .geometry
            .hyperplane_report(&mask)
            .expect("mask length equals the point count")
            .complement_connected;
        (
            (!geometric).then_some(c),
            (!connected).then_some(c),
        )
    };

    let (bad_hyp, bad_conn): (Vec<u64>, Vec<u64>) = (0..total)
        .into_par_iter()
        .map(per_class)
        .fold(
            || (Vec::new(), Vec::new()),
            |mut acc, (h, c)| {
                acc.0.extend(h);
                acc.1.extend(c);
                acc
            },
        )
        .reduce(
            || (Vec::new(), Vec::new()),
            |mut a, b| {
                a.0.extend(b.0);
                a.1.extend(b.1);
                a
            },
        );
    let mut bad_hyp = bad_hyp;
    let mut bad_conn = bad_conn;
    bad_hyp.sort_unstable();
    bad_conn.sort_unstable();

    let minimality = code.minimality(caps)?;
    let all_connected = bad_conn.is_empty();
    let example = |c: &u64| ClassCounterexample {
        class_index: *c,
        functional: class_rep(q, k, *c).iter().map(|e| e.index()).collect(),
    };
    Ok(VerifyReport {
        num_classes: total,
        lines_to_lines: emb.lines_to_lines,
        all_preimages_hyperplanes: bad_hyp.is_empty(),
        first_non_hyperplane: bad_hyp.first().map(example),
        hyperplane_failures: bad_hyp.len() as u64,
        all_complements_connected: all_connected,
        first_disconnected: bad_conn.first().map(example),
        disconnected_count: bad_conn.len() as u64,
        minimal: minimality.minimal,
        minimality_witness: minimality
            .witness
            .as_ref()
            .map(|w| w.iter().map(|e| e.index()).collect()),
        implication_holds: !(all_connected && !minimality.minimal),
    })
}

/// Normalized representative of a functional class, as in the minimality
/// sweep order.
fn class_rep(q: u64, k: u32, index: u64) -> Vec<Fe> {
    let mut idx = index;
    for t in 0..k {
        let block = q.pow(k - 1 - t);
        if idx >= block {
            idx -= block;
            continue;
        }
        let mut v = vec![Fe::ZERO; k as usize];
        v[t as usize] = Fe(1);
        let mut rem = idx;
        for pos in ((t + 1)..k).rev() {
            v[pos as usize] = Fe((rem % q) as u32);
            rem /= q;
        }
        return v;
    }
    panic!("class index {index} out of range");
}
