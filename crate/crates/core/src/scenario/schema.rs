//! Serde mirror of the scenario JSON document. Field order here fixes the
//! byte layout of serialized scenarios.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::abelian::GroupSpec;
use crate::ring::{rational_str, Ring};
use crate::subspace::SubspaceSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(rename = "H2_X")]
    pub h2_x: GroupSpec,
    pub form: Vec<Vec<i64>>,
    pub sides: Vec<SideDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Ring>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideDoc {
    pub name: String,
    #[serde(rename = "H1_L")]
    pub h1_l: GroupSpec,
    #[serde(rename = "H2_XL")]
    pub h2_xl: GroupSpec,
    /// Rows indexed by `H2_XL` generators, columns by `H2_X` generators.
    pub j: Vec<Vec<i64>>,
    /// Rows indexed by `H1_L` generators, columns by `H2_XL` generators.
    pub bd: Vec<Vec<i64>>,
    pub fundamental_class: Vec<i64>,
    pub monotone: bool,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rational_str::option")]
    pub b: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_params: Option<LatticeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_system: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asserted_invariant: Option<Vec<i64>>,
    pub ledger: LedgerDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeParams {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerDoc {
    #[serde(with = "rational_str")]
    pub complete_below: BigRational,
    pub disks: Vec<DiskDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskDoc {
    pub label: String,
    pub rel_class: Vec<i64>,
    pub boundary: Vec<i64>,
    pub maslov: i64,
    #[serde(with = "rational_str")]
    pub area: BigRational,
    pub count: i64,
}
