//! Almost-perfect `H`-tilings from a fractional tiling of the reduced
//! multigraph: every weighted structure is realised by disjoint `Q(a, b)`
//! copies under per-cluster quotas, and every `Q(a, b)` copy by its `H`-factor.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::Serialize;

use super::structures::EmbStructure;
use super::tiling::{fractional_tiling, FractionalTiling};
use super::{build_reduced, Multigraph2, Thresholds};
use crate::config::Caps;
use crate::embed::{embed_q_with, ClusterSystem};
use crate::factor::{verify_tiling, TilingCertificate};
use crate::graph::{Graph, VertexSet};
use crate::invariants::f_value;
use crate::qgraph::{h_factor_in_q, plan_q_with, QSpec};
use crate::rational::{self, Rational};

/// What happened to one weighted structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureAccount {
    pub structure: EmbStructure,
    pub a: usize,
    pub b: usize,
    pub s: usize,
    /// Weight after scaling by `1 - eta`.
    #[serde(with = "crate::rational::pq")]
    pub weight: Rational,
    /// `weight * m`; cluster `V` may give `i_K(V) * c_k` vertices.
    #[serde(with = "crate::rational::pq")]
    pub c_k: Rational,
    /// Most `Q(a, b)` copies the quotas allow, `floor(c_k / s)`.
    pub quota_copies: usize,
    pub placed: usize,
    pub h_copies: usize,
    pub stop: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub certificate: TilingCertificate,
    pub n: usize,
    pub covered: usize,
    #[serde(with = "crate::rational::pq")]
    pub coverage: Rational,
    pub f: Option<usize>,
    pub reduced: Option<Multigraph2>,
    pub fractional: Option<FractionalTiling>,
    #[serde(with = "crate::rational::pq")]
    pub lp_value: Rational,
    pub structures: Vec<StructureAccount>,
    /// `verify_tiling` accepted the certificate.
    pub verified: bool,
    pub diagnostics: Vec<String>,
}

pub fn almost_tiling_pipeline(cs: &ClusterSystem, h: &Graph, th: &Thresholds) -> PipelineReport {
    almost_tiling_pipeline_with(cs, h, th, &Caps::default())
}

/// Never fails outright: a stage that cannot run leaves a partial
/// certificate and a diagnostic.
pub fn almost_tiling_pipeline_with(cs: &ClusterSystem, h: &Graph, th: &Thresholds, caps: &Caps) -> PipelineReport {
    let n = cs.host.n();
    let mut report = PipelineReport {
        certificate: TilingCertificate::default(),
        n,
        covered: 0,
        coverage: Rational::zero(),
        f: None,
        reduced: None,
        fractional: None,
        lp_value: Rational::zero(),
        structures: Vec::new(),
        verified: false,
        diagnostics: Vec::new(),
    };
    run(cs, h, th, caps, &mut report);
    report.covered = report.certificate.covered.len();
    if n > 0 {
        report.coverage = rational::from_usize(report.covered) / rational::from_usize(n);
    }
    match verify_tiling(&cs.host, h, &report.certificate, false) {
        Ok(()) => report.verified = true,
        Err(e) => report.diagnostics.push(format!("certificate rejected: {e}")),
    }
    report
}

fn run(cs: &ClusterSystem, h: &Graph, th: &Thresholds, caps: &Caps, report: &mut PipelineReport) {
    let r = match build_reduced(cs, th) {
        Ok(r) => r,
        Err(e) => return report.diagnostics.push(format!("reduced multigraph: {e}")),
    };
    report.reduced = Some(r.clone());
    let f = match f_value(h) {
        Ok(f) => f,
        Err(e) => return report.diagnostics.push(format!("f(H): {e}")),
    };
    report.f = Some(f);
    let lp = match fractional_tiling(&r, f) {
        Ok(lp) => lp,
        Err(e) => return report.diagnostics.push(format!("fractional tiling: {e}")),
    };
    report.lp_value = lp.value.clone();
    if lp.tiling.weights.is_empty() {
        report.diagnostics.push(format!("no K_{f} structure carries weight"));
    }
    let scaled = lp.tiling.scaled(&(Rational::one() - &th.eta));
    report.fractional = Some(scaled.clone());
    let m = cs.clusters.first().map_or(0, |c| c.len());

    let mut specs: BTreeMap<(usize, usize), Option<(QSpec, TilingCertificate)>> = BTreeMap::new();
    let mut used = VertexSet::new();
    for (structure, weight) in &scaled.weights {
        if !weight.is_positive() {
            continue;
        }
        let (a, b) = structure.shape();
        let planned = specs
            .entry((a, b))
            .or_insert_with(|| {
                let spec = plan_q_with(h, a, b, caps).ok()?;
                let factor = h_factor_in_q(h, &spec).ok()?;
                Some((spec, factor))
            })
            .clone();
        let Some((spec, factor)) = planned else {
            report.diagnostics.push(format!("no Q({a}, {b}) gadget for structure {structure}"));
            continue;
        };
        let c_k = weight * rational::from_usize(m);
        let quota = rational::floor_i64(&(&c_k / rational::from_usize(spec.s))).max(0) as usize;
        let order: Vec<usize> = structure.singles().into_iter().chain(structure.doubles()).collect();
        let sub = ClusterSystem {
            host: cs.host.clone(),
            clusters: order.iter().map(|&v| cs.clusters[v].clone()).collect(),
        };
        let mut account = StructureAccount {
            structure: structure.clone(),
            a,
            b,
            s: spec.s,
            weight: weight.clone(),
            c_k,
            quota_copies: quota,
            placed: 0,
            h_copies: 0,
            stop: "quota reached".into(),
        };
        while account.placed < quota {
            match embed_q_with(&sub, &spec, &th.beta, caps, Some(&used)) {
                Ok(e) => {
                    let lifted = factor.clone().lift(&e.map);
                    for img in &e.images {
                        used = used.union(img);
                    }
                    account.placed += 1;
                    account.h_copies += lifted.len();
                    report.certificate.extend(lifted);
                }
                Err(e) => {
                    account.stop = format!("embedding stopped: {e}");
                    break;
                }
            }
        }
        report.structures.push(account);
    }
}
