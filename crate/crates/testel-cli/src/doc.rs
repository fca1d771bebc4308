//! Output documents: every invocation prints exactly one machine-readable
//! JSON document on standard output, with words rendered in the text token
//! format. Wall-clock data never enters a document, so identical flags and
//! seed reproduce identical bytes.

use serde::Serialize;

use testel_core::density::{AuditReport, BoundReport, CensusRecord, CoveringReport};
use testel_core::stallings::Endomorphism;
use testel_core::testel::{AdjustBranch, Certificate, CosetResult, NetResult};
use testel_core::word::Word;

#[derive(Serialize)]
pub struct Document<C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub command: &'static str,
    pub config: C,
    pub result: R,
}

pub fn emit<C: Serialize, R: Serialize>(doc: &Document<C, R>, summary: &str) {
    let json = serde_json::to_string_pretty(doc).expect("documents serialize");
    println!("{json}");
    eprintln!("{summary}");
}

fn word_string(w: &Word) -> String {
    w.to_string()
}

#[derive(Serialize)]
pub struct ReduceDoc {
    pub reduced: String,
    pub length: usize,
}

#[derive(Serialize)]
pub struct BallDoc {
    pub ball_size: String,
    pub sphere_sizes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words_written: Option<u64>,
}

#[derive(Serialize)]
pub struct TraceDoc {
    pub prime: u32,
    pub alpha: Vec<u8>,
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<u8>>,
    pub subset: Vec<usize>,
    pub vet_bound: usize,
    pub alpha_cost: u64,
    pub beta_cost: u64,
    pub subset_cost: u64,
}

fn branch_string(branch: &AdjustBranch) -> String {
    match branch {
        AdjustBranch::AlreadyInLayer => "already-in-layer".into(),
        AdjustBranch::Appended => "appended".into(),
        AdjustBranch::SignFlipped { index } => format!("sign-flipped-at-{index}"),
        AdjustBranch::Canonical => "canonical".into(),
    }
}

#[derive(Serialize)]
pub struct NetDoc {
    pub input: String,
    pub output: String,
    pub output_length: usize,
    pub distance: u64,
    pub bound: u64,
    pub trace: TraceDoc,
}

impl NetDoc {
    pub fn from_result(r: &NetResult) -> NetDoc {
        NetDoc {
            input: word_string(&r.input),
            output: word_string(&r.output),
            output_length: r.output.len(),
            distance: r.distance,
            bound: r.bound,
            trace: TraceDoc {
                prime: r.trace.prime,
                alpha: r.trace.alpha.clone(),
                branch: branch_string(&r.trace.branch),
                beta: r.trace.beta.clone(),
                subset: r.trace.subset.clone(),
                vet_bound: r.trace.vet_bound,
                alpha_cost: r.trace.alpha_cost,
                beta_cost: r.trace.beta_cost,
                subset_cost: r.trace.subset_cost,
            },
        }
    }
}

#[derive(Serialize)]
pub struct CosetDoc {
    pub input: String,
    pub output: String,
    pub output_length: usize,
    pub prime: u32,
    pub quotient_order: u64,
    pub r: Vec<u64>,
    pub s: Vec<u64>,
    pub subset: Vec<usize>,
    pub vet_bound: usize,
    pub r_cost: u64,
    pub s_cost: u64,
    pub subset_cost: u64,
    pub total_cost: u64,
}

impl CosetDoc {
    pub fn from_result(r: &CosetResult) -> CosetDoc {
        CosetDoc {
            input: word_string(&r.input),
            output: word_string(&r.output),
            output_length: r.output.len(),
            prime: r.trace.prime,
            quotient_order: r.trace.quotient_order,
            r: r.trace.r.clone(),
            s: r.trace.s.clone(),
            subset: r.trace.subset.clone(),
            vet_bound: r.trace.vet_bound,
            r_cost: r.trace.r_cost,
            s_cost: r.trace.s_cost,
            subset_cost: r.trace.subset_cost,
            total_cost: r.trace.total_cost(),
        }
    }
}

#[derive(Serialize)]
pub struct CertificateDoc {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_images: Option<Vec<String>>,
    pub search_bound: Option<usize>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &Certificate) -> CertificateDoc {
        match cert {
            Certificate::Positive { construction } => CertificateDoc {
                status: "positive",
                construction: Some(format!("{construction:?}")),
                witness_images: None,
                search_bound: None,
            },
            Certificate::Negative {
                witness,
                search_bound,
            } => CertificateDoc {
                status: "negative",
                construction: None,
                witness_images: Some(witness_images(witness)),
                search_bound: Some(*search_bound),
            },
            Certificate::Unknown { search_bound } => CertificateDoc {
                status: "unknown",
                construction: None,
                witness_images: None,
                search_bound: Some(*search_bound),
            },
        }
    }
}

fn witness_images(witness: &Endomorphism) -> Vec<String> {
    witness.images().iter().map(word_string).collect()
}

#[derive(Serialize)]
pub struct CensusDoc {
    pub rank: usize,
    pub radius: usize,
    pub vetting_bound: usize,
    pub seed: u64,
    pub positive: u64,
    pub negative: u64,
    pub unknown: u64,
    pub ball_size: u64,
    pub complete: bool,
    pub positive_ratio: String,
    pub negative_ratio: String,
    pub unknown_ratio: String,
}

impl CensusDoc {
    pub fn from_record(r: &CensusRecord) -> CensusDoc {
        let ratio = |count: u64| format!("{:.6}", count as f64 / r.ball_size as f64);
        CensusDoc {
            rank: r.rank,
            radius: r.radius,
            vetting_bound: r.vetting_bound,
            seed: r.seed,
            positive: r.positive,
            negative: r.negative,
            unknown: r.unknown,
            ball_size: r.ball_size,
            complete: r.complete,
            positive_ratio: ratio(r.positive),
            negative_ratio: ratio(r.negative),
            unknown_ratio: ratio(r.unknown),
        }
    }
}

#[derive(Serialize)]
pub struct ExactDoc {
    pub numerator: String,
    pub denominator: String,
}

#[derive(Serialize)]
pub struct BoundDoc {
    pub name: String,
    pub parameter: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactDoc>,
    pub decimal: String,
}

impl BoundDoc {
    pub fn from_report(r: &BoundReport) -> BoundDoc {
        BoundDoc {
            name: r.name.clone(),
            parameter: r.parameter,
            exact: r.exact.clone().map(|(numerator, denominator)| ExactDoc {
                numerator,
                denominator,
            }),
            decimal: r.decimal.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct CoveringDoc {
    pub rank: usize,
    pub radius: usize,
    pub max_translate_length: usize,
    pub covering_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_uncovered: Option<String>,
    pub injection_ok: bool,
    pub translate_counts: Vec<u64>,
    pub s_count: u64,
    pub ball_count: u64,
    pub inner_ball_count: u64,
    pub small_ball_count: u64,
    pub chain_ok: bool,
    pub all_ok: bool,
}

impl CoveringDoc {
    pub fn from_report(r: &CoveringReport) -> CoveringDoc {
        CoveringDoc {
            rank: r.rank,
            radius: r.radius,
            max_translate_length: r.c,
            covering_ok: r.covering_ok,
            first_uncovered: r.first_uncovered.as_ref().map(word_string),
            injection_ok: r.injection_ok,
            translate_counts: r.translate_counts.clone(),
            s_count: r.s_count,
            ball_count: r.ball_count,
            inner_ball_count: r.inner_ball_count,
            small_ball_count: r.small_ball_count,
            chain_ok: r.chain_ok,
            all_ok: r.all_ok(),
        }
    }
}

#[derive(Serialize)]
pub struct AuditDoc {
    pub rank: usize,
    pub radius: usize,
    pub bound: u64,
    pub max_distance: u64,
    pub histogram: Vec<u64>,
    pub total: u64,
}

impl AuditDoc {
    pub fn from_report(r: &AuditReport) -> AuditDoc {
        AuditDoc {
            rank: r.rank,
            radius: r.radius,
            bound: r.bound,
            max_distance: r.max_distance,
            histogram: r.histogram.clone(),
            total: r.total,
        }
    }
}
