//! The versioned JSON document printed by `--format json`.

use serde::{Deserialize, Serialize};

use cycpat::theorem::{LemmaCheck, PartitionReport};
use cycpat::{
    Anchor, AvoidanceMode, Convention, FactReport, Pattern, StandardCycleWord, TheoremRow,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    pub sigma: Pattern,
    pub tau: Pattern,
    pub mode: AvoidanceMode,
    pub anchors: Vec<Anchor>,
    pub convention: Convention,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub cycle: StandardCycleWord,
    pub oneline: Vec<u8>,
}

impl From<&StandardCycleWord> for MemberRecord {
    fn from(c: &StandardCycleWord) -> Self {
        Self {
            cycle: c.clone(),
            oneline: c.to_oneline().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactFailure {
    pub cycle: StandardCycleWord,
    pub report: FactReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactSummary {
    pub n: usize,
    pub members: u64,
    pub failures: Vec<FactFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptinessRow {
    pub n: usize,
    pub j: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: usize,
    pub count: u64,
    pub pell: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<MemberRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Vec<TheoremRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bijections: Option<Vec<LemmaCheck>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facts: Option<Vec<FactSummary>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma23: Option<Vec<EmptinessRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<PartitionReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<SequenceRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl OutputRecord {
    pub fn new(query: QueryEcho) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            query: Some(query),
            count: None,
            members: None,
            theorem: None,
            bijections: None,
            facts: None,
            lemma23: None,
            partitions: None,
            sequence: None,
            passed: None,
        }
    }
}
