//! The gadget graphs `Q(a, b, s, F_1, ..., F_b)` and their explicit H-factors.
//!
//! `Q` has `a` independent clusters of size `s` followed by `b` clusters that
//! induce forests `F_j` on `2s` vertices; every pair of vertices in distinct
//! clusters is adjacent. When `a + 2b = f(H)` the matrix layout below yields
//! an H-factor: each matrix row is one copy of `H`, each column one cluster.

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::factor::{has_factor_with, verify_tiling, HCopy, TilingCertificate};
use crate::graph::{is_forest, Graph, VertexSet};
use crate::invariants::{block_bipartition, invariant_report_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QCase {
    /// `f(H) = 2r`: `s = h`, `2r` copies.
    Even,
    /// `f(H) = 2r - 1`: `s = 2h / (2r - 1)`, two copies.
    Odd,
}

/// Parameters of a `Q` graph together with the acyclic partition of `H` it
/// was planned from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSpec {
    pub a: usize,
    pub b: usize,
    pub s: usize,
    pub case: QCase,
    /// Acyclic partition `T_0, ..., T_{r-1}` of `H`; in the odd case `T_0` is
    /// the independent block.
    pub blocks: Vec<VertexSet>,
    /// Forest `F_j` on `2s` vertices: copy 0 of the listed blocks, then copy 1.
    pub forests: Vec<Graph>,
    /// Blocks realised (twice each) by each forest, in vertex order.
    pub part_assignment: Vec<Vec<usize>>,
}

impl QSpec {
    /// Checks the shape constraints that make `build_q` meaningful.
    pub fn validate(&self) -> Result<()> {
        if self.forests.len() != self.b || self.part_assignment.len() != self.b {
            return Err(Error::Invalid(format!("expected {} forests", self.b)));
        }
        if self.s == 0 {
            return Err(Error::Invalid("s must be positive".into()));
        }
        for (j, f) in self.forests.iter().enumerate() {
            if f.n() != 2 * self.s {
                return Err(Error::Invalid(format!(
                    "forest {j} has {} vertices, expected {}",
                    f.n(),
                    2 * self.s
                )));
            }
            if !is_forest(f, &VertexSet::range(f.n())) {
                return Err(Error::Invalid(format!("forest {j} contains a cycle")));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.s * self.a + 2 * self.s * self.b
    }
}

/// A built `Q` with its clusters `U_1, ..., U_{a+b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QGraph {
    pub graph: Graph,
    pub clusters: Vec<VertexSet>,
}

/// Two disjoint copies of `h[T_k]` for each listed block, block by block
/// within a copy; no edges between blocks.
fn doubled_forest(h: &Graph, blocks: &[VertexSet], list: &[usize]) -> Graph {
    let parts: Vec<Graph> = list.iter().map(|&k| h.induced(&blocks[k])).collect();
    let refs: Vec<&Graph> = parts.iter().chain(parts.iter()).collect();
    Graph::disjoint_union(&refs)
}

/// Plans `Q(a, b)` for `h`: checks `a + 2b = f(H)` and picks `s` and the forests.
pub fn plan_q(h: &Graph, a: usize, b: usize) -> Result<QSpec> {
    plan_q_with(h, a, b, &Caps::default())
}

pub fn plan_q_with(h: &Graph, a: usize, b: usize, caps: &Caps) -> Result<QSpec> {
    let report = invariant_report_with(h, caps)?;
    let f = report.f;
    if a + 2 * b != f {
        return Err(Error::Arity {
            got: a + 2 * b,
            expected: f,
        });
    }
    let r = report.ar;
    let hn = h.n();
    if f == 2 * r {
        if !a.is_multiple_of(2) {
            return Err(Error::Arity {
                got: a + 2 * b,
                expected: f,
            });
        }
        let blocks = report.arboricity_witness.blocks().to_vec();
        let list: Vec<usize> = (0..r).collect();
        let forest = doubled_forest(h, &blocks, &list);
        Ok(QSpec {
            a,
            b,
            s: hn,
            case: QCase::Even,
            blocks,
            forests: vec![forest; b],
            part_assignment: vec![list; b],
        })
    } else {
        let witness = report.htilde_witness.ok_or(Error::NotInHtilde)?;
        if !(2 * hn).is_multiple_of(2 * r - 1) {
            return Err(Error::NotInHtilde);
        }
        let s = 2 * hn / (2 * r - 1);
        let blocks = witness.blocks().to_vec();
        let assignment: Vec<Vec<usize>> = (1..=b).map(|i| vec![r - b + i - 1]).collect();
        let forests = assignment
            .iter()
            .map(|list| doubled_forest(h, &blocks, list))
            .collect();
        Ok(QSpec {
            a,
            b,
            s,
            case: QCase::Odd,
            blocks,
            forests,
            part_assignment: assignment,
        })
    }
}

/// The labelled graph described by a `QSpec`: clusters in order, forest vertices in the
/// forests' own order.
pub fn build_q(spec: &QSpec) -> QGraph {
    let mut clusters = Vec::with_capacity(spec.a + spec.b);
    let mut next = 0;
    for _ in 0..spec.a {
        clusters.push((next..next + spec.s).collect::<VertexSet>());
        next += spec.s;
    }
    for f in &spec.forests {
        clusters.push((next..next + f.n()).collect::<VertexSet>());
        next += f.n();
    }
    let mut g = Graph::new(next);
    for (j, f) in spec.forests.iter().enumerate() {
        let base = clusters[spec.a + j].first().unwrap_or(0);
        for (u, v) in f.edges() {
            g.add_edge(base + u, base + v).expect("forest edge in range");
        }
    }
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            for u in clusters[i].iter() {
                for v in clusters[j].iter() {
                    g.add_edge(u, v).expect("cross edge in range");
                }
            }
        }
    }
    QGraph { graph: g, clusters }
}

/// One cell of the stacked matrix: pattern vertices sent to a cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixCell {
    pub cluster: usize,
    pub block: usize,
    /// Which half of the block's forest bipartition, for split columns.
    pub half: Option<usize>,
    /// Which of the two forest copies realises the block, for forest columns.
    pub forest_copy: Option<usize>,
    pub vertices: VertexSet,
}

/// Rows of the stacked matrix `A*`, one per copy of `H`.
pub fn factor_matrix(h: &Graph, spec: &QSpec) -> Result<Vec<Vec<MatrixCell>>> {
    let r = spec.blocks.len();
    let halves: Vec<(VertexSet, VertexSet)> = spec
        .blocks
        .iter()
        .map(|t| block_bipartition(h, t))
        .collect::<Result<_>>()?;
    let half = |k: usize, which: usize| {
        if which == 0 {
            halves[k].0.clone()
        } else {
            halves[k].1.clone()
        }
    };
    let mut rows = Vec::new();
    match spec.case {
        QCase::Even => {
            // A[i][j] = T_{(i + j - 1) mod r}, 1-based i, j
            let pairs = spec.a / 2;
            for swap in 0..2 {
                for i in 1..=r {
                    let mut row = Vec::new();
                    for j in 1..=r {
                        let k = (i + j - 1) % r;
                        if j <= pairs {
                            for side in 0..2 {
                                let which = side ^ swap;
                                row.push(MatrixCell {
                                    cluster: 2 * (j - 1) + side,
                                    block: k,
                                    half: Some(which),
                                    forest_copy: None,
                                    vertices: half(k, which),
                                });
                            }
                        } else {
                            row.push(MatrixCell {
                                cluster: spec.a + (j - pairs - 1),
                                block: k,
                                half: None,
                                forest_copy: Some(swap),
                                vertices: spec.blocks[k].clone(),
                            });
                        }
                    }
                    rows.push(row);
                }
            }
        }
        QCase::Odd => {
            let pairs = (spec.a - 1) / 2;
            for swap in 0..2 {
                let mut row = vec![MatrixCell {
                    cluster: 0,
                    block: 0,
                    half: None,
                    forest_copy: None,
                    vertices: spec.blocks[0].clone(),
                }];
                for k in 1..=pairs {
                    for side in 0..2 {
                        let which = side ^ swap;
                        row.push(MatrixCell {
                            cluster: 1 + 2 * (k - 1) + side,
                            block: k,
                            half: Some(which),
                            forest_copy: None,
                            vertices: half(k, which),
                        });
                    }
                }
                for i in 1..=spec.b {
                    row.push(MatrixCell {
                        cluster: spec.a + i - 1,
                        block: r - spec.b + i - 1,
                        half: None,
                        forest_copy: Some(swap),
                        vertices: spec.blocks[r - spec.b + i - 1].clone(),
                    });
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Reads the matrix rows as explicit copies of `H` in `build_q(spec)`.
/// Independent clusters hand out their vertices in row order, so the two
/// copies sharing `U_1` in the odd case get disjoint halves of it.
pub fn h_factor_in_q(h: &Graph, spec: &QSpec) -> Result<TilingCertificate> {
    let q = build_q(spec);
    let rows = factor_matrix(h, spec)?;
    let mut next: Vec<usize> = vec![0; q.clusters.len()];
    let mut copies = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut map = vec![usize::MAX; h.n()];
        for cell in row {
            let cluster = q
                .clusters
                .get(cell.cluster)
                .ok_or_else(|| Error::ConstructionBug(format!("no cluster {}", cell.cluster)))?
                .as_slice();
            match cell.forest_copy {
                None => {
                    for x in cell.vertices.iter() {
                        let slot = next[cell.cluster];
                        map[x] = *cluster.get(slot).ok_or_else(|| {
                            Error::ConstructionBug(format!("cluster {} overfull", cell.cluster))
                        })?;
                        next[cell.cluster] += 1;
                    }
                }
                Some(copy) => {
                    let forest = cell.cluster - spec.a;
                    let list = &spec.part_assignment[forest];
                    let per_copy: usize = list.iter().map(|&k| spec.blocks[k].len()).sum();
                    let pos = list.iter().position(|&k| k == cell.block).ok_or_else(|| {
                        Error::ConstructionBug(format!("forest {forest} lacks block {}", cell.block))
                    })?;
                    let offset: usize = list[..pos].iter().map(|&k| spec.blocks[k].len()).sum();
                    for (rank, x) in cell.vertices.iter().enumerate() {
                        let slot = copy * per_copy + offset + rank;
                        map[x] = *cluster.get(slot).ok_or_else(|| {
                            Error::ConstructionBug(format!("forest cluster {} too small", cell.cluster))
                        })?;
                    }
                }
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::ConstructionBug("a pattern vertex was left unplaced".into()));
        }
        copies.push(HCopy::new(map));
    }
    let cert = TilingCertificate::new(copies);
    verify_tiling(&q.graph, h, &cert, true)
        .map_err(|e| Error::ConstructionBug(format!("matrix factor rejected: {e}")))?;
    Ok(cert)
}

/// Outcome of [`verify_q`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QVerification {
    pub valid: bool,
    pub order: usize,
    pub matrix_certificate: bool,
    /// `Some` when the exact solver was run on `Q`.
    pub solver_agrees: Option<bool>,
    pub failure: Option<String>,
}

/// Checks the `QSpec`, the matrix factor, and (for `|V(Q)| <= 60`) the exact solver.
pub fn verify_q(h: &Graph, spec: &QSpec) -> QVerification {
    verify_q_with(h, spec, &Caps::default())
}

pub fn verify_q_with(h: &Graph, spec: &QSpec, caps: &Caps) -> QVerification {
    let order = spec.order();
    let mut out = QVerification {
        valid: false,
        order,
        matrix_certificate: false,
        solver_agrees: None,
        failure: None,
    };
    if let Err(e) = spec.validate() {
        out.failure = Some(e.to_string());
        return out;
    }
    match h_factor_in_q(h, spec) {
        Ok(_) => out.matrix_certificate = true,
        Err(e) => {
            out.failure = Some(e.to_string());
            return out;
        }
    }
    if order <= caps.factor_host {
        let q = build_q(spec);
        match has_factor_with(&q.graph, h, caps) {
            Ok(found) => out.solver_agrees = Some(found.is_some()),
            Err(e) => {
                out.failure = Some(format!("solver: {e}"));
                return out;
            }
        }
    }
    out.valid = out.solver_agrees != Some(false);
    out
}

/// Every `(a, b)` with `a + 2b = f`.
pub fn admissible_pairs(f: usize) -> Vec<(usize, usize)> {
    (0..=f / 2).map(|b| (f - 2 * b, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_multipartite;

    #[test]
    fn k3_one_one() {
        let h = Graph::complete(3);
        let spec = plan_q(&h, 1, 1).unwrap();
        assert_eq!(spec.s, 2);
        assert_eq!(spec.forests[0].edge_count(), 2);
        let q = build_q(&spec);
        assert_eq!(q.graph.n(), 6);
        // 2-set joined to 2K2: 2*4 + 2 edges
        assert_eq!(q.graph.edge_count(), 10);
        let cert = h_factor_in_q(&h, &spec).unwrap();
        assert_eq!(cert.len(), 2);
        for c in &cert.copies {
            assert_eq!(c.map.iter().filter(|&&v| v < 2).count(), 1);
        }
    }

    #[test]
    fn k3_three_zero_is_octahedron() {
        let h = Graph::complete(3);
        let spec = plan_q(&h, 3, 0).unwrap();
        let q = build_q(&spec);
        assert_eq!(q.graph.edges(), complete_multipartite(&[2, 2, 2]).unwrap().edges());
        assert_eq!(h_factor_in_q(&h, &spec).unwrap().len(), 2);
    }

    #[test]
    fn k4_zero_two() {
        let h = Graph::complete(4);
        let spec = plan_q(&h, 0, 2).unwrap();
        assert_eq!(spec.s, 4);
        assert!(spec.forests.iter().all(|f| f.edge_count() == 4 && f.n() == 8));
        let cert = h_factor_in_q(&h, &spec).unwrap();
        assert_eq!(cert.len(), 4);
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(plan_q(&Graph::complete(3), 1, 0), Err(Error::Arity { .. })));
    }

    #[test]
    fn degenerate_single_vertex() {
        let spec = QSpec {
            a: 1,
            b: 0,
            s: 1,
            case: QCase::Odd,
            blocks: vec![],
            forests: vec![],
            part_assignment: vec![],
        };
        let q = build_q(&spec);
        assert_eq!((q.graph.n(), q.graph.edge_count()), (1, 0));
    }

    #[test]
    fn cyclic_forest_is_rejected() {
        let h = Graph::complete(3);
        let mut spec = plan_q(&h, 1, 1).unwrap();
        spec.forests[0] = Graph::cycle(4);
        assert!(!verify_q(&h, &spec).valid);
    }
}
